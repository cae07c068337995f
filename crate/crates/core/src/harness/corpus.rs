//! Self-play corpus: deals played out open-card with engine-chosen puts.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bidding::{Action, Bidder};
use crate::cards::{GameType, Position, Suit};
use crate::dealing::{random_deal_on_stream, seeded_rng};
use crate::ddsolver::Solver;
use crate::gamedef::{bid_ladder, game_value};
use crate::probmodel::ProbTables;
use crate::skatselect::{Engine, Policy, SelectConfig};

use super::play::glassbox_won;
use super::record::{GameRecord, RecordOutcome};

pub const SELFPLAY_SOURCE: &str = "dd-selfplay";

/// Stream offset for per-deal choices, disjoint from deal streams.
const CHOICE_SALT: u64 = 0x5eed_c0de;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusMode {
    /// Declarer rotates; the game is the engine's pick at the lowest bid
    /// (or random, see `random_game_share`) and the bid is drawn below its
    /// value.
    Forced,
    /// As `Forced`, but the declarer is the seat whose chosen game has the
    /// best expected cost with the actual skat: a cheap stand-in for the
    /// auction winner that never folds.
    Strongest,
    /// Declarer, bid and game come from the engine's auction.
    Auction,
}

/// Seat whose engine-chosen game at the lowest bid has the best expected
/// cost with the real skat; ties go to the earlier seat.
pub fn strongest_seat(engine: &Engine, deal: &crate::dealing::Deal) -> Position {
    let bid = bid_ladder()[0];
    let cost = |p: Position| {
        engine
            .select_game(deal.hand(p) | deal.skat, p, bid, Policy::Winprob, 0)
            .map_or(f64::MIN, |(_, c)| c.expected_cost)
    };
    let mut best = (Position::Forehand, cost(Position::Forehand));
    for p in [Position::Middlehand, Position::Rearhand] {
        let c = cost(p);
        if c > best.1 {
            best = (p, c);
        }
    }
    best.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub deals: u64,
    pub seed: u64,
    pub mode: CorpusMode,
    /// Share of puts drawn at random instead of by the proposal policy.
    pub random_put_share: f64,
    /// Forced mode: share of games drawn at random instead of chosen.
    pub random_game_share: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            deals: 1000,
            seed: 1,
            mode: CorpusMode::Forced,
            random_put_share: 0.25,
            random_game_share: 0.25,
        }
    }
}

fn draw_game<R: Rng>(rng: &mut R) -> GameType {
    let x: f64 = rng.random();
    if x < 0.4 {
        GameType::Grand
    } else if x < 0.8 {
        GameType::Suit(Suit::from_index(rng.random_range(0..4)))
    } else {
        GameType::Null
    }
}

/// Record for deal `i` of the run, or `None` when the auction folds.
pub fn generate_one(engine: &Engine, solver: &mut Solver, cfg: &CorpusConfig, i: u64) -> Option<GameRecord> {
    let deal = random_deal_on_stream(cfg.seed, i);
    let mut rng = seeded_rng(cfg.seed ^ CHOICE_SALT, i);
    let policy = if rng.random::<f64>() < cfg.random_put_share {
        Policy::Random
    } else {
        Policy::Proposal
    };
    let put_seed = rng.random();
    let (declarer, game, bid, bids, put) = match cfg.mode {
        CorpusMode::Forced | CorpusMode::Strongest => {
            let declarer = match cfg.mode {
                CorpusMode::Strongest => strongest_seat(engine, &deal),
                _ => Position::from_index(i as usize),
            };
            let hand12 = deal.hand(declarer) | deal.skat;
            let random_game = draw_game(&mut rng);
            let game = if rng.random::<f64>() < cfg.random_game_share {
                random_game
            } else {
                engine.select_game(hand12, declarer, bid_ladder()[0], Policy::Winprob, 0).map_or(random_game, |(g, _)| g)
            };
            let value = game_value(hand12, game).value;
            let ladder: Vec<u32> = bid_ladder().into_iter().filter(|&b| b <= value).collect();
            let bid = ladder[rng.random_range(0..ladder.len())];
            let ctx = engine.context(hand12, game, declarer, bid);
            let put = engine.select_put(hand12, &ctx, policy, put_seed).ok()?.swap_remove(0).put;
            (declarer, game, bid, vec![bid], put)
        }
        CorpusMode::Auction => {
            let auction = Bidder::new(engine).run_auction(&deal);
            let declarer = auction.declarer?;
            let hand12 = deal.hand(declarer) | deal.skat;
            let (game, cand) = engine.select_game(hand12, declarer, auction.bid, policy, put_seed).ok()?;
            let bids = auction
                .calls
                .iter()
                .filter(|c| c.action == Action::Bid)
                .map(|c| c.bid)
                .collect();
            (declarer, game, auction.bid, bids, cand.put)
        }
    };
    let won = glassbox_won(solver, &deal, declarer, game, put);
    Some(GameRecord {
        deal,
        bids,
        bid,
        declarer,
        game,
        put: Some(put),
        outcome: RecordOutcome::won(won),
        source: SELFPLAY_SOURCE.to_string(),
    })
}

/// Records for deals `0..cfg.deals`, in deal order whatever the thread count.
pub fn generate(engine: &Engine, cfg: &CorpusConfig) -> Vec<GameRecord> {
    (0..cfg.deals)
        .into_par_iter()
        .map_init(Solver::new, |solver, i| generate_one(engine, solver, cfg, i))
        .flatten()
        .collect()
}

/// Tables from successive self-play rounds: round `k` plays with the tables
/// of all earlier rounds, the result pools every round.
pub fn bootstrap_tables(config: &SelectConfig, rounds: &[CorpusConfig], min_samples: u64) -> ProbTables {
    let mut tables = ProbTables::with_min_samples(min_samples);
    for round in rounds {
        let engine = Engine::new(tables.clone(), config.clone());
        for r in generate(&engine, round) {
            tables.add_record(&r);
        }
        log::info!("self-play round of {} deals done", round.deals);
    }
    tables
}

/// Engine whose tables come from `deals` forced self-play deals with random
/// game choice; the starting point when no tables exist yet.
pub fn bootstrap_engine(config: &SelectConfig, deals: u64, seed: u64, min_samples: u64) -> Engine {
    let round = CorpusConfig {
        deals,
        seed,
        random_game_share: 1.0,
        ..CorpusConfig::default()
    };
    Engine::new(bootstrap_tables(config, &[round], min_samples), config.clone())
}

/// `deals` strongest-seat self-play records played with a bootstrap engine
/// of a tenth the size (at least 1000 deals).
pub fn selfplay_corpus(config: &SelectConfig, deals: u64, seed: u64, min_samples: u64) -> Vec<GameRecord> {
    let engine = bootstrap_engine(config, (deals / 10).max(1000), seed.wrapping_add(1), min_samples);
    generate(
        &engine,
        &CorpusConfig {
            deals,
            seed,
            mode: CorpusMode::Strongest,
            ..CorpusConfig::default()
        },
    )
}
