//! Auction: hold/pass decisions from the value of taking the skat, the
//! standard two-phase bidding over the ladder, and game selection.
//!
//! The value of taking the skat at a bid is the mean over the 231 possible
//! skats of the best put's expected payoff. The best win probability per
//! skat depends on the bid only through its group, so it is computed once
//! per (hand, position, group) and reused across ladder steps; only the
//! overbid check varies within a group. A hand's value at a bid is the
//! minimum of that figure over its group and all lower groups, which keeps
//! decisions monotone: a hand that passes at some bid passes at every
//! higher one.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cards::{Card, CardSet, GameType, Position};
use crate::dealing::Deal;
use crate::error::{Error, Result};
use crate::gamedef::{bid_ladder, game_value};
use crate::handeval::bid_group;
use crate::skatselect::{contract_cost, Engine, Policy, SkatCandidate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Hold,
    Pass,
}

/// Per-skat best win probability and game value, per game type.
struct GroupData {
    per_game: Vec<(GameType, Vec<(f64, u32)>)>,
}

/// Representative bid for a group: its lowest member.
fn group_floor(group: u8) -> u32 {
    [0, 21, 28, 37][group as usize]
}

pub struct Bidder<'a> {
    pub engine: &'a Engine,
    /// Hold when the best game's take value reaches this.
    pub threshold: f64,
    /// Loss constant of the payoff formula; the cache does not depend on
    /// it, so one bidder can rerun a deal at several values.
    pub loss_base: i64,
    cache: HashMap<(CardSet, Position, u8), GroupData>,
}

impl<'a> Bidder<'a> {
    pub fn new(engine: &'a Engine) -> Bidder<'a> {
        Bidder {
            engine,
            threshold: 0.0,
            loss_base: engine.loss_base,
            cache: HashMap::new(),
        }
    }

    fn group_data(&mut self, hand10: CardSet, pos: Position, group: u8) -> &GroupData {
        let engine = self.engine;
        self.cache.entry((hand10, pos, group)).or_insert_with(|| {
            let unseen: Vec<Card> = (!hand10).iter().collect();
            let per_game = GameType::ALL
                .iter()
                .map(|&g| {
                    let mut v = Vec::with_capacity(231);
                    for i in 0..unseen.len() {
                        for j in i + 1..unseen.len() {
                            let hand12 = hand10.with(unseen[i]).with(unseen[j]);
                            let value = game_value(hand12, g).value;
                            v.push((engine.best_win_probability(hand12, g, pos, group_floor(group)), value));
                        }
                    }
                    (g, v)
                })
                .collect();
            GroupData { per_game }
        })
    }

    /// Mean take value per game type at `bid`.
    pub fn take_values(&mut self, hand10: CardSet, pos: Position, bid: u32) -> Vec<(GameType, f64)> {
        let loss_base = self.loss_base;
        let mut best: Vec<(GameType, f64)> = GameType::ALL.iter().map(|&g| (g, f64::INFINITY)).collect();
        for group in 0..=bid_group(bid) {
            let data = self.group_data(hand10, pos, group);
            for (slot, (g, skats)) in best.iter_mut().zip(&data.per_game) {
                let mean = skats.iter().map(|&(w, v)| contract_cost(w, *g, v, bid, loss_base)).sum::<f64>() / skats.len() as f64;
                slot.1 = slot.1.min(mean);
            }
        }
        best
    }

    pub fn bid_decision(&mut self, hand10: CardSet, bid: u32, pos: Position) -> Decision {
        let best = self
            .take_values(hand10, pos, bid)
            .into_iter()
            .map(|(_, v)| v)
            .fold(f64::NEG_INFINITY, f64::max);
        if best >= self.threshold {
            Decision::Hold
        } else {
            Decision::Pass
        }
    }

    fn holds(&mut self, deal: &Deal, seat: Position, bid: u32) -> bool {
        self.bid_decision(deal.hand(seat), bid, seat) == Decision::Hold
    }

    /// One bidding phase: `sayer` calls ladder values from `ladder[*idx]` up
    /// while `hearer` holds. Returns the phase winner.
    fn duel(&mut self, deal: &Deal, sayer: Position, hearer: Position, idx: &mut usize, auction: &mut AuctionResult) -> Position {
        let ladder = bid_ladder();
        loop {
            let Some(&v) = ladder.get(*idx) else { return hearer };
            if !self.holds(deal, sayer, v) {
                auction.calls.push(Call { seat: sayer, bid: v, action: Action::Pass });
                return hearer;
            }
            auction.calls.push(Call { seat: sayer, bid: v, action: Action::Bid });
            auction.bid = v;
            *idx += 1;
            if !self.holds(deal, hearer, v) {
                auction.calls.push(Call { seat: hearer, bid: v, action: Action::Pass });
                return sayer;
            }
            auction.calls.push(Call { seat: hearer, bid: v, action: Action::Hold });
        }
    }

    /// Middlehand says to forehand, then rearhand says to the winner. With
    /// no bid at all, forehand may still play at the lowest value.
    pub fn run_auction(&mut self, deal: &Deal) -> AuctionResult {
        let mut auction = AuctionResult {
            declarer: None,
            bid: 0,
            folded: false,
            calls: Vec::new(),
        };
        let mut idx = 0;
        let first = self.duel(deal, Position::Middlehand, Position::Forehand, &mut idx, &mut auction);
        let winner = self.duel(deal, Position::Rearhand, first, &mut idx, &mut auction);
        if auction.bid == 0 {
            let lowest = bid_ladder()[0];
            if self.holds(deal, winner, lowest) {
                auction.calls.push(Call { seat: winner, bid: lowest, action: Action::Bid });
                auction.bid = lowest;
            } else {
                auction.calls.push(Call { seat: winner, bid: lowest, action: Action::Pass });
                auction.folded = true;
                return auction;
            }
        }
        auction.declarer = Some(winner);
        auction
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Bid,
    Hold,
    Pass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Call {
    pub seat: Position,
    pub bid: u32,
    pub action: Action,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuctionResult {
    pub declarer: Option<Position>,
    pub bid: u32,
    pub folded: bool,
    pub calls: Vec<Call>,
}

impl Engine {
    /// Max over the 66 puts of the win probability of `g`.
    pub fn best_win_probability(&self, hand12: CardSet, g: GameType, pos: Position, bid: u32) -> f64 {
        let cards: Vec<Card> = hand12.iter().collect();
        let mut best: f64 = 0.0;
        for i in 0..cards.len() {
            for j in i + 1..cards.len() {
                let put = CardSet::from_iter([cards[i], cards[j]]);
                best = best.max(self.tables.win_probability(hand12 - put, put, g, bid, pos));
            }
        }
        best
    }

    /// The game with the best expected payoff among those worth at least
    /// `bid`, with the put chosen by `policy`.
    pub fn select_game(&self, hand12: CardSet, pos: Position, bid: u32, policy: Policy, seed: u64) -> Result<(GameType, SkatCandidate)> {
        let mut best: Option<(GameType, f64)> = None;
        for g in GameType::ALL {
            if game_value(hand12, g).value < bid {
                continue;
            }
            let w = self.best_win_probability(hand12, g, pos, bid);
            let cost = contract_cost(w, g, game_value(hand12, g).value, bid, self.loss_base);
            if best.is_none_or(|(_, c)| cost > c) {
                best = Some((g, cost));
            }
        }
        let (g, _) = best.ok_or(Error::Overbid { bid })?;
        let ctx = self.context(hand12, g, pos, bid);
        let put = self.select_put(hand12, &ctx, policy, seed)?.swap_remove(0);
        Ok((g, put))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dealing::random_deal;

    #[test]
    fn auction_terminates_with_ascending_bids() {
        let engine = Engine::default();
        let mut b = Bidder::new(&engine);
        for seed in 0..5 {
            let r = b.run_auction(&random_deal(seed));
            let accepted: Vec<u32> = r.calls.iter().filter(|c| c.action == Action::Bid).map(|c| c.bid).collect();
            assert!(accepted.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(r.folded, r.declarer.is_none());
        }
    }

    #[test]
    fn overbid_is_explicit() {
        let engine = Engine::default();
        let hand: CardSet = "C7 C8 C9 S7 S8 S9 H7 H8 H9 D7 D8 D9".parse().unwrap();
        assert!(matches!(engine.select_game(hand, Position::Forehand, 264, Policy::Winprob, 0), Err(Error::Overbid { bid: 264 })));
        let (g, _) = engine.select_game(hand, Position::Forehand, 18, Policy::Winprob, 0).unwrap();
        assert!(game_value(hand, g).value >= 18);
    }
}
