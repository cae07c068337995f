//! Scorer monotonicity, feature ranges and the safe-trick lower bound.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use skat_core::cards::{trump_set, Card, CardSet, GameType, Position, Suit};
use skat_core::dealing::{random_deal, seeded_rng};
use skat_core::ddsolver::{legal_moves, PlayState};
use skat_core::handeval::{
    features_with, kinback, safe_tricks, standing_cards, von_stegen, winning_params, StandingMode, WinningParams,
};

fn hand(seed: u64) -> CardSet {
    random_deal(seed).hands[0]
}

fn hand12(seed: u64) -> CardSet {
    let d = random_deal(seed);
    d.hands[0] | d.skat
}

fn game(i: u8) -> GameType {
    GameType::TRUMP_GAMES[i as usize % 5]
}

proptest! {
    #[test]
    fn adding_a_jack_never_lowers_a_score(seed: u64, gi: u8, bid in prop::sample::select(vec![0u32, 18, 24, 48]), pi in 0usize..3) {
        let h = hand(seed);
        let g = game(gi);
        let pos = Position::from_index(pi);
        for j in CardSet::JACKS - h {
            let more = h.with(j);
            prop_assert!(von_stegen(more, g, bid).unwrap() >= von_stegen(h, g, bid).unwrap());
            prop_assert!(kinback(more, g, pos).unwrap() >= kinback(h, g, pos).unwrap());
        }
    }

    #[test]
    fn standing_is_bounded_and_grows_with_the_suit(seed: u64, gi: u8) {
        let h = hand(seed);
        let g = game(gi);
        let modes = [StandingMode::Certain, StandingMode::WithRetake, StandingMode::WithoutRetake];
        let before = modes.map(|m| standing_cards(h, g, m));
        for s in g.side_suits() {
            let held = (h & s.cards() - CardSet::JACKS).len() as f64;
            for b in &before {
                prop_assert!(b[s.index()] >= 0.0 && b[s.index()] <= held + 1e-9);
            }
            for c in s.cards() - CardSet::JACKS - h {
                let more = h.with(c);
                for (m, b) in modes.iter().zip(&before) {
                    let after = standing_cards(more, g, *m)[s.index()];
                    prop_assert!(after + 1e-9 >= b[s.index()], "{m:?} {h} + {c}: {} -> {after}", b[s.index()]);
                }
            }
        }
    }

    #[test]
    fn winning_params_are_pure_and_in_range(seed: u64, gi: u8, bid in 0u32..100, pi in 0usize..3) {
        let h12 = hand12(seed);
        let put: CardSet = h12.iter().take(2).collect();
        let g = game(gi);
        let pos = Position::from_index(pi);
        let k = winning_params(h12 - put, put, g, bid, pos);
        prop_assert_eq!(k, winning_params(h12 - put, put, g, bid, pos));
        prop_assert!(k.free_suits <= 3 && k.skat_eyes_group <= 3 && k.bid_group <= 3);
        prop_assert!(k.trumps <= 11 && k.non_trumps <= 10 && k.lost_tricks <= 10);
        prop_assert_eq!(k.trumps as usize + k.non_trumps as usize, 10);
        prop_assert!(k.key() < WinningParams::KEY_SPACE);
    }
}

#[test]
fn features_stay_in_range_over_many_hands() {
    for seed in 0..100_000u64 {
        let h12 = hand12(seed);
        let cards: Vec<Card> = h12.iter().collect();
        let i = (seed % 12) as usize;
        let j = (i + 1 + (seed / 12 % 11) as usize) % 12;
        let put = CardSet::from_iter([cards[i], cards[j]]);
        let g = game(seed as u8);
        let pos = Position::from_index(seed as usize);
        let w = (seed % 101) as f64 / 100.0;
        let f = features_with(h12 - put, put, g, pos, w);
        assert_eq!(put.len(), 2);
        assert!((0.0..=1.0).contains(&f.win_prob));
        assert!((0.0..=3.0).contains(&f.free_suits));
        // two aces make 22
        assert!((0.0..=22.0).contains(&f.skat_eyes) && f.skat_eyes == put.points() as f64);
        assert!((0.0..=3.0).contains(&f.good_tens));
        assert!((0.0..=3.0).contains(&f.bad_tens));
        assert!((0.0..=10.0).contains(&f.certain_standing));
        assert!(f.standing_with_retake >= 0.0 && f.standing_without_retake >= 0.0);
        assert!((0.0..=4.0).contains(&f.lead_suits));
        assert!(f.as_array().iter().all(|x| x.is_finite()));
    }
}

/// Most tricks the side to move at the root can force, all cards open.
fn max_tricks(s: &PlayState, alpha: u32, beta: u32) -> u32 {
    if s.is_over() {
        return s.declarer_tricks;
    }
    let maximizing = s.to_move() == s.declarer;
    let (mut alpha, mut beta) = (alpha, beta);
    let mut best = if maximizing { 0 } else { u32::MAX };
    for c in legal_moves(s) {
        let mut child = s.clone();
        child.play(c);
        let v = max_tricks(&child, alpha, beta);
        if maximizing {
            best = best.max(v);
            alpha = alpha.max(v);
        } else {
            best = best.min(v);
            beta = beta.min(v);
        }
        if alpha >= beta {
            break;
        }
    }
    best
}

#[test]
fn safe_tricks_is_a_double_dummy_lower_bound() {
    let mut rng = seeded_rng(77, 0);
    for i in 0..1000u64 {
        let g = GameType::Suit(Suit::from_index(i as usize % 4));
        let mut trumps: Vec<Card> = trump_set(g).iter().collect();
        trumps.shuffle(&mut rng);
        let holding: CardSet = trumps[..5].iter().copied().collect();
        let mut rest: Vec<Card> = (!holding).iter().collect();
        rest.shuffle(&mut rng);
        let hands = [
            holding,
            rest[..5].iter().copied().collect(),
            rest[5..10].iter().copied().collect(),
        ];
        let s = PlayState::new(g, Position::Forehand, hands, CardSet::EMPTY);
        let st = safe_tricks(holding, g);
        let dd = max_tricks(&s, 0, u32::MAX);
        assert!(st <= dd, "{g} {holding}: safe {st} > dd {dd}");
    }
}
