//! Playouts of a declared game from the post-put position.

use rand::seq::SliceRandom;

use crate::cards::{Card, CardSet, GameType, Position};
use crate::dealing::{seeded_rng, Deal};
use crate::ddsolver::{PlayState, Solver};

/// The deal as played: the declarer holds hand plus skat minus `put`.
pub fn post_put_state(deal: &Deal, declarer: Position, g: GameType, put: CardSet) -> PlayState {
    let mut hands = deal.hands;
    hands[declarer.index()] = (deal.hand(declarer) | deal.skat) - put;
    PlayState::new(g, declarer, hands, put)
}

/// Open-card outcome.
pub fn glassbox_won(solver: &mut Solver, deal: &Deal, declarer: Position, g: GameType, put: CardSet) -> bool {
    solver.declarer_wins(&post_put_state(deal, declarer, g, put))
}

/// Share of `k` redeals of the opponents' cards that the declarer wins open
/// card. The worlds depend only on the rng and the declarer's twelve cards,
/// so different puts of one hand face the same worlds.
pub fn pimc_win_rate(solver: &mut Solver, deal: &Deal, declarer: Position, g: GameType, put: CardSet, k: usize, seed: u64, stream: u64) -> f64 {
    let hand12 = deal.hand(declarer) | deal.skat;
    let unseen: Vec<Card> = (!hand12).iter().collect();
    let mut rng = seeded_rng(seed, stream);
    let opps: Vec<usize> = (0..3).filter(|&i| i != declarer.index()).collect();
    let mut wins = 0;
    for _ in 0..k {
        let mut cards = unseen.clone();
        cards.shuffle(&mut rng);
        let mut hands = [CardSet::EMPTY; 3];
        hands[declarer.index()] = hand12 - put;
        hands[opps[0]] = cards[..10].iter().copied().collect();
        hands[opps[1]] = cards[10..].iter().copied().collect();
        wins += solver.declarer_wins(&PlayState::new(g, declarer, hands, put)) as usize;
    }
    wins as f64 / k as f64
}
