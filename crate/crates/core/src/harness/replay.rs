//! Replay of recorded games against the open-card result.
//!
//! Each game lands in one of eight cells keyed by three outcomes: the
//! recorded one, the open-card one with the recorded put, and the open-card
//! one with the put the policy picks for the same hand.

use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ddsolver::Solver;
use crate::error::{Error, Result};
use crate::gamedef::{contract_payoff, game_value};
use crate::skatselect::{Engine, Policy};

use super::play::glassbox_won;
use super::record::GameRecord;

/// Where the policy column's put comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ReplayPolicy {
    /// The recorded put, unchanged.
    Recorded,
    Select(Policy),
}

impl FromStr for ReplayPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "recorded" {
            Ok(ReplayPolicy::Recorded)
        } else {
            s.parse().map(ReplayPolicy::Select)
        }
    }
}

impl fmt::Display for ReplayPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayPolicy::Recorded => f.write_str("recorded"),
            ReplayPolicy::Select(p) => p.fmt(f),
        }
    }
}

impl TryFrom<String> for ReplayPolicy {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ReplayPolicy> for String {
    fn from(p: ReplayPolicy) -> String {
        p.to_string()
    }
}

impl From<Policy> for ReplayPolicy {
    fn from(p: Policy) -> Self {
        ReplayPolicy::Select(p)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CrossTab {
    /// Index `4 * recorded + 2 * glassbox + policy`, each 1 for a win.
    pub cells: [u64; 8],
    pub games: u64,
    pub skipped: u64,
    /// Summed declarer Seeger payoffs per column.
    pub recorded_payoff: i64,
    pub glassbox_payoff: i64,
    pub policy_payoff: i64,
}

impl CrossTab {
    pub fn cell(&self, recorded: bool, glassbox: bool, policy: bool) -> u64 {
        self.cells[4 * recorded as usize + 2 * glassbox as usize + policy as usize]
    }

    pub fn add(&mut self, recorded: bool, glassbox: bool, policy: bool) {
        self.cells[4 * recorded as usize + 2 * glassbox as usize + policy as usize] += 1;
        self.games += 1;
    }

    pub fn merge(&mut self, other: &CrossTab) {
        for (a, b) in self.cells.iter_mut().zip(other.cells) {
            *a += b;
        }
        self.games += other.games;
        self.skipped += other.skipped;
        self.recorded_payoff += other.recorded_payoff;
        self.glassbox_payoff += other.glassbox_payoff;
        self.policy_payoff += other.policy_payoff;
    }

    fn wins(&self, bit: usize) -> u64 {
        (0..8).filter(|i| i & bit != 0).map(|i| self.cells[i]).sum()
    }

    pub fn recorded_wins(&self) -> u64 {
        self.wins(4)
    }

    pub fn glassbox_wins(&self) -> u64 {
        self.wins(2)
    }

    pub fn policy_wins(&self) -> u64 {
        self.wins(1)
    }

    /// Series score per 36 games of a payoff column.
    pub fn per_36(&self, total: i64) -> f64 {
        total as f64 * 36.0 / self.games.max(1) as f64
    }
}

/// Seed from the record's content, so aggregates do not depend on order.
fn record_seed(r: &GameRecord) -> u64 {
    let mut h = DefaultHasher::new();
    (r.deal.hands.map(|h| h.bits()), r.deal.skat.bits(), r.declarer.index()).hash(&mut h);
    h.finish()
}

/// Adds one record; invalid records count as skipped.
pub fn replay_record(tab: &mut CrossTab, engine: &Engine, solver: &mut Solver, policy: ReplayPolicy, r: &GameRecord) {
    if r.validate().is_err() {
        tab.skipped += 1;
        return;
    }
    let hand12 = r.hand12();
    let recorded_put = r.put.unwrap_or(r.deal.skat);
    let policy_put = match policy {
        ReplayPolicy::Recorded => recorded_put,
        ReplayPolicy::Select(p) => {
            let ctx = engine.context(hand12, r.game, r.declarer, r.bid);
            match engine.select_put(hand12, &ctx, p, record_seed(r)) {
                Ok(mut ranked) => ranked.swap_remove(0).put,
                Err(_) => {
                    tab.skipped += 1;
                    return;
                }
            }
        }
    };
    let glass = glassbox_won(solver, &r.deal, r.declarer, r.game, recorded_put);
    let mine = glassbox_won(solver, &r.deal, r.declarer, r.game, policy_put);
    let value = game_value(hand12, r.game).value;
    tab.add(r.outcome.won, glass, mine);
    tab.recorded_payoff += contract_payoff(r.outcome.won, r.game, value, r.bid);
    tab.glassbox_payoff += contract_payoff(glass, r.game, value, r.bid);
    tab.policy_payoff += contract_payoff(mine, r.game, value, r.bid);
}

/// Replays a record stream; unreadable lines count as skipped.
pub fn replay<I>(records: I, engine: &Engine, policy: impl Into<ReplayPolicy>) -> CrossTab
where
    I: IntoIterator<Item = Result<GameRecord>>,
{
    let policy = policy.into();
    let mut tab = CrossTab::default();
    let mut solver = Solver::new();
    for r in records {
        match r {
            Ok(r) => replay_record(&mut tab, engine, &mut solver, policy, &r),
            Err(e) => {
                log::warn!("skipping record: {e}");
                tab.skipped += 1;
            }
        }
    }
    tab
}
