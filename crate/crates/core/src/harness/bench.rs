//! Paired policy comparison over random deals.
//!
//! Every policy sees the same deal, declarer, bid and game; only the put
//! differs. Payoffs are extended-Seeger per deal (a lost game also credits
//! the opponents' bonus), folded deals count as played with payoff 0.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bidding::Bidder;
use crate::cards::{CardSet, GameType, Position};
use crate::dealing::random_deal_on_stream;
use crate::ddsolver::Solver;
use crate::gamedef::{bid_ladder, contract_payoff, game_value, SeegerConfig};
use crate::skatselect::{Engine, Policy};

use super::corpus::CorpusMode;
use super::play::{glassbox_won, pimc_win_rate};
use super::stats::{paired_t_test, PairedTest};

const PUT_SALT: u64 = 0xb0a7_5eed;
const WORLD_SALT: u64 = 0x0dd5_eed5;

/// Expected ordering of policy strength, strongest first in each pair.
pub const EXPECTED_ORDER: [(Policy, Policy); 5] = [
    (Policy::Proposal, Policy::Winprob),
    (Policy::Winprob, Policy::Stegen),
    (Policy::Winprob, Policy::Kinback),
    (Policy::Stegen, Policy::Random),
    (Policy::Kinback, Policy::Random),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Playout {
    /// Open-card double-dummy result of the actual deal.
    Glassbox,
    /// Mean over `worlds` redeals of the opponents' cards.
    Pimc { worlds: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub deals: u64,
    pub seed: u64,
    pub policies: Vec<Policy>,
    pub playout: Playout,
    /// `Auction` bids; `Forced` rotates the declarer at the lowest bid.
    pub mode: CorpusMode,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            deals: 1000,
            seed: 1,
            policies: Policy::ALL.to_vec(),
            playout: Playout::Glassbox,
            mode: CorpusMode::Auction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DealResult {
    pub index: u64,
    pub declarer: Option<Position>,
    pub game: Option<GameType>,
    pub bid: u32,
    /// Per policy, in config order.
    pub puts: Vec<CardSet>,
    /// Win probability per policy: 0 or 1 open card, a share under PIMC.
    pub wins: Vec<f64>,
    /// Declarer Seeger payoff per policy.
    pub payoffs: Vec<f64>,
    /// Payoff plus opponents' bonus when lost.
    pub extended: Vec<f64>,
}

impl DealResult {
    pub fn folded(&self) -> bool {
        self.declarer.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub policy: Policy,
    pub played: u64,
    pub win_rate: f64,
    /// Mean declarer payoff per deal times 36.
    pub seeger_score: f64,
    /// Extended-Seeger series score per 36 deals.
    pub series_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub better: Policy,
    pub worse: Policy,
    pub test: PairedTest,
}

impl Comparison {
    /// `better` scores higher and the difference is significant at `alpha`.
    pub fn holds(&self, alpha: f64) -> bool {
        self.test.mean_diff > 0.0 && self.test.p < alpha
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub deals: u64,
    pub folds: u64,
    pub summaries: Vec<PolicySummary>,
    pub comparisons: Vec<Comparison>,
    pub results: Vec<DealResult>,
}

impl BenchReport {
    pub fn fold_rate(&self) -> f64 {
        self.folds as f64 / self.deals.max(1) as f64
    }

    pub fn summary(&self, p: Policy) -> Option<&PolicySummary> {
        self.summaries.iter().find(|s| s.policy == p)
    }
}

/// Play deal `i` under every configured policy.
pub fn bench_deal(engine: &Engine, solver: &mut Solver, cfg: &BenchConfig, i: u64) -> DealResult {
    let deal = random_deal_on_stream(cfg.seed, i);
    let n = cfg.policies.len();
    let mut result = DealResult {
        index: i,
        declarer: None,
        game: None,
        bid: 0,
        puts: Vec::new(),
        wins: vec![0.0; n],
        payoffs: vec![0.0; n],
        extended: vec![0.0; n],
    };
    let (declarer, bid) = match cfg.mode {
        CorpusMode::Auction => {
            let a = Bidder::new(engine).run_auction(&deal);
            match a.declarer {
                Some(d) => (d, a.bid),
                None => return result,
            }
        }
        CorpusMode::Forced => (Position::from_index(i as usize), bid_ladder()[0]),
        CorpusMode::Strongest => (super::corpus::strongest_seat(engine, &deal), bid_ladder()[0]),
    };
    let hand12 = deal.hand(declarer) | deal.skat;
    let put_seed = cfg.seed ^ PUT_SALT ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let Ok((game, _)) = engine.select_game(hand12, declarer, bid, Policy::Proposal, put_seed) else {
        return result;
    };
    let value = game_value(hand12, game).value;
    let ctx = engine.context(hand12, game, declarer, bid);
    let bonus = {
        let s = SeegerConfig::default();
        (s.opponent_bonus * s.opponents) as f64
    };
    result.declarer = Some(declarer);
    result.game = Some(game);
    result.bid = bid;
    for (k, &policy) in cfg.policies.iter().enumerate() {
        let put = engine
            .select_put(hand12, &ctx, policy, put_seed)
            .expect("twelve-card hand")
            .swap_remove(0)
            .put;
        let w = match cfg.playout {
            Playout::Glassbox => glassbox_won(solver, &deal, declarer, game, put) as u8 as f64,
            Playout::Pimc { worlds } => pimc_win_rate(solver, &deal, declarer, game, put, worlds, cfg.seed ^ WORLD_SALT, i),
        };
        let won = contract_payoff(true, game, value, bid) as f64;
        let lost = contract_payoff(false, game, value, bid) as f64;
        result.puts.push(put);
        result.wins[k] = w;
        result.payoffs[k] = w * won + (1.0 - w) * lost;
        result.extended[k] = w * won + (1.0 - w) * (lost + bonus);
    }
    result
}

pub fn summarize(cfg: &BenchConfig, results: Vec<DealResult>) -> BenchReport {
    let deals = results.len() as u64;
    let folds = results.iter().filter(|r| r.folded()).count() as u64;
    let played = deals - folds;
    let column = |k: usize, f: fn(&DealResult) -> &Vec<f64>| -> Vec<f64> { results.iter().map(|r| f(r)[k]).collect() };
    let per_36 = |xs: &[f64]| xs.iter().sum::<f64>() * 36.0 / deals.max(1) as f64;
    let summaries = cfg
        .policies
        .iter()
        .enumerate()
        .map(|(k, &policy)| PolicySummary {
            policy,
            played,
            win_rate: column(k, |r| &r.wins).iter().sum::<f64>() / played.max(1) as f64,
            seeger_score: per_36(&column(k, |r| &r.payoffs)),
            series_score: per_36(&column(k, |r| &r.extended)),
        })
        .collect();
    let slot = |p: Policy| cfg.policies.iter().position(|&q| q == p);
    let comparisons = EXPECTED_ORDER
        .iter()
        .filter_map(|&(better, worse)| {
            let (a, b) = (slot(better)?, slot(worse)?);
            Some(Comparison {
                better,
                worse,
                test: paired_t_test(&column(a, |r| &r.extended), &column(b, |r| &r.extended)),
            })
        })
        .collect();
    BenchReport {
        config: cfg.clone(),
        deals,
        folds,
        summaries,
        comparisons,
        results,
    }
}

pub fn run_bench(engine: &Engine, cfg: &BenchConfig) -> BenchReport {
    let results = (0..cfg.deals)
        .into_par_iter()
        .map_init(Solver::new, |solver, i| bench_deal(engine, solver, cfg, i))
        .collect();
    summarize(cfg, results)
}
