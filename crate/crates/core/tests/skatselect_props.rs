//! Proposal ranking properties: λ scaling, rule ids, trump discards.

use skat_core::cards::{trump_set, CardSet, GameType, Position};
use skat_core::dealing::random_deal;
use skat_core::skatselect::rules::rule;
use skat_core::skatselect::{
    classify_subtype, enumerate_puts, hard_filter, Engine, Policy, RuleInput, SelectConfig, SelectionSubtype, RULES,
};

fn hand12(seed: u64) -> CardSet {
    let d = random_deal(seed);
    d.hands[0] | d.skat
}

fn puts(engine: &Engine, h: CardSet, g: GameType, pos: Position) -> Vec<CardSet> {
    let ctx = engine.context(h, g, pos, 18);
    engine.select_put(h, &ctx, Policy::Proposal, 0).unwrap().iter().map(|c| c.put).collect()
}

#[test]
fn positive_scaling_keeps_the_ranking() {
    let base = Engine::default();
    // powers of two scale every product exactly, so ties stay ties
    for c in [0.25, 4.0] {
        let mut cfg: SelectConfig = base.config.clone();
        for r in &mut cfg.rows {
            r.lambda = r.lambda.map(|l| l * c);
        }
        for v in cfg.adjustments.values_mut() {
            *v *= c;
        }
        let scaled = Engine::new(base.tables.clone(), cfg);
        for seed in 0..300 {
            let h = hand12(seed);
            let g = GameType::TRUMP_GAMES[seed as usize % 5];
            let pos = Position::from_index(seed as usize);
            assert_eq!(puts(&base, h, g, pos), puts(&scaled, h, g, pos), "seed {seed} x{c}");
        }
    }
}

#[test]
fn random_scaling_keeps_the_argmax() {
    let base = Engine::default();
    for (i, c) in [0.37, 1.9, 13.0, 250.0].into_iter().enumerate() {
        let mut cfg = base.config.clone();
        for r in &mut cfg.rows {
            r.lambda = r.lambda.map(|l| l * c);
        }
        for v in cfg.adjustments.values_mut() {
            *v *= c;
        }
        let scaled = Engine::new(base.tables.clone(), cfg);
        for seed in 0..200 {
            let h = hand12(1000 * i as u64 + seed);
            let g = GameType::TRUMP_GAMES[seed as usize % 5];
            let pos = Position::from_index(seed as usize);
            let (a, b) = (puts(&base, h, g, pos), puts(&scaled, h, g, pos));
            assert_eq!(a[0], b[0], "seed {seed} x{c}");
        }
    }
}

#[test]
fn every_rejection_reproduces_alone() {
    for seed in 0..5000 {
        let h = hand12(seed);
        let g = GameType::TRUMP_GAMES[seed as usize % 5];
        let st = classify_subtype(h, g);
        let out = hard_filter(enumerate_puts(h).unwrap(), h, g, st);
        assert!(!out.survivors.is_empty());
        assert_eq!(out.survivors.len() + out.rejected.len(), 66);
        let inp = RuleInput { hand12: h, game: g, subtype: st };
        let active: Vec<_> = RULES.iter().filter(|r| (r.applies)(st) && !out.relaxed.contains(&r.id)).collect();
        for c in &out.rejected {
            let id = c.filtered_by.as_deref().expect("labelled");
            assert!((rule(id).unwrap().rejects)(&inp, c.put), "{id} does not reject {}", c.put);
            // the label is the first active rule that rejects
            let first = active.iter().find(|r| (r.rejects)(&inp, c.put)).unwrap();
            assert_eq!(first.id, id);
        }
        for c in &out.survivors {
            assert!(active.iter().all(|r| !(r.rejects)(&inp, c.put)));
        }
    }
}

#[test]
fn suit_hands_rank_trump_discards_last() {
    let engine = Engine::default();
    for seed in 0..2000 {
        let h = hand12(seed);
        let g = GameType::TRUMP_GAMES[1 + seed as usize % 4];
        let ctx = engine.context(h, g, Position::Middlehand, 18);
        assert!(matches!(ctx.subtype, SelectionSubtype::HighTrumpSuit | SelectionSubtype::LowTrumpSuit));
        let ranked = engine.select_put(h, &ctx, Policy::Proposal, 0).unwrap();
        let trumpy = |p: CardSet| !(p & trump_set(g)).is_empty();
        let relaxed = ranked.iter().any(|c| c.fired_rules.iter().any(|r| r == "relaxed:no-trump-discard"));
        if !relaxed {
            let first_trumpy = ranked.iter().position(|c| trumpy(c.put)).unwrap_or(66);
            assert!(ranked[first_trumpy..].iter().all(|c| trumpy(c.put) || c.filtered_by.is_some()), "seed {seed}");
        }
    }
}

#[test]
fn random_policy_is_reproducible() {
    let engine = Engine::default();
    let h = hand12(3);
    let ctx = engine.context(h, GameType::Grand, Position::Forehand, 18);
    let a = engine.select_put(h, &ctx, Policy::Random, 42).unwrap();
    let b = engine.select_put(h, &ctx, Policy::Random, 42).unwrap();
    assert_eq!(a, b);
}
