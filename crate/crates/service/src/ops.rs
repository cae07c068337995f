//! Blocking implementations of the non-advice operations.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rayon::prelude::*;

use skat_api::*;
use skat_core::bidding::Bidder;
use skat_core::dealing::{deal_unrank, random_deal_on_stream, DEAL_COUNT};
use skat_core::ddsolver::{PlayState, Solver};
use skat_core::gamedef::game_value;
use skat_core::harness::bench::run_bench;
use skat_core::harness::corpus::selfplay_corpus;
use skat_core::harness::record::{read_records, write_records};
use skat_core::harness::replay::replay;
use skat_core::probmodel::{build_tables, DEFAULT_MIN_SAMPLES};
use skat_core::skatselect::{Engine, Policy};

use crate::error::ApiError;

const MAX_DEALS: u64 = 1_000_000;

pub fn deal(req: &DealRequest) -> Result<DealResponse, ApiError> {
    if req.count == 0 || req.count > MAX_DEALS {
        return Err(ApiError::Unprocessable(format!("count must be in 1..={MAX_DEALS}")));
    }
    let deals = match (req.seed, req.index) {
        (Some(_), Some(_)) => return Err(ApiError::Unprocessable("give a seed or an index, not both".into())),
        (None, Some(index)) => {
            if index.checked_add(req.count).is_none_or(|end| end > DEAL_COUNT) {
                return Err(ApiError::Unprocessable(format!("deal index range beyond {DEAL_COUNT}")));
            }
            (index..index + req.count)
                .map(|i| Ok(NumberedDeal { number: i, deal: deal_unrank(i)? }))
                .collect::<Result<_, skat_core::Error>>()?
        }
        (seed, None) => {
            let seed = seed.unwrap_or(0);
            (0..req.count)
                .map(|i| NumberedDeal { number: i, deal: random_deal_on_stream(seed, i) })
                .collect()
        }
    };
    Ok(DealResponse { deals })
}

pub fn select(engine: &Engine, req: &SelectRequest) -> Result<SelectResponse, ApiError> {
    let hand12 = match req.skat {
        Some(skat) if req.hand.len() == 10 && skat.len() == 2 && req.hand.is_disjoint(skat) => req.hand | skat,
        Some(_) => return Err(ApiError::BadRequest("hand with skat needs 10 + 2 distinct cards".into())),
        None if req.hand.len() == 12 => req.hand,
        None => return Err(ApiError::BadRequest(format!("hand needs 12 cards, got {}", req.hand.len()))),
    };
    let value = game_value(hand12, req.game).value;
    let ctx = engine.context(hand12, req.game, req.position, req.bid);
    let candidates = engine.select_put(hand12, &ctx, req.policy, req.seed)?;
    Ok(SelectResponse {
        subtype: ctx.subtype.name().to_string(),
        value,
        candidates: candidates.into_iter().map(Candidate::from).collect(),
    })
}

pub fn auction(engine: &Engine, req: &AuctionRequest) -> Result<AuctionResponse, ApiError> {
    if req.deals > MAX_DEALS {
        return Err(ApiError::Unprocessable(format!("at most {MAX_DEALS} deals")));
    }
    let declarations: Vec<Declaration> = (0..req.deals)
        .into_par_iter()
        .map(|i| {
            let deal = random_deal_on_stream(req.seed, i);
            let mut bidder = Bidder::new(engine);
            if let Some(l) = req.loss_base {
                bidder.loss_base = l;
            }
            if let Some(t) = req.threshold {
                bidder.threshold = t;
            }
            let auction = bidder.run_auction(&deal);
            let game = auction.declarer.and_then(|d| {
                engine
                    .select_game(deal.hand(d) | deal.skat, d, auction.bid, Policy::Proposal, 0)
                    .ok()
                    .map(|(g, _)| g)
            });
            Declaration { number: i, auction, game }
        })
        .collect();
    let folds = declarations.iter().filter(|d| d.auction.folded).count() as u64;
    Ok(AuctionResponse { deals: req.deals, folds, declarations })
}

pub fn solve(req: &SolveRequest) -> Result<SolveResponse, ApiError> {
    let mut seen = req.skat;
    for h in req.hands {
        if !seen.is_disjoint(h) {
            return Err(ApiError::BadRequest("hands and skat overlap".into()));
        }
        seen |= h;
    }
    let sizes = req.hands.map(|h| h.len());
    if sizes[0] == 0 || sizes.iter().any(|&n| n != sizes[0]) {
        return Err(ApiError::BadRequest(format!("hands need equal, nonzero sizes, got {sizes:?}")));
    }
    let state = PlayState::new(req.game, req.declarer, req.hands, req.skat);
    let mut solver = Solver::new();
    let value = solver.solve(&state);
    let won = if req.game.is_null() { value == 1 } else { value >= 61 };
    Ok(SolveResponse {
        value,
        won,
        principal_variation: solver.principal_variation(&state),
    })
}

fn open(path: &str) -> Result<BufReader<File>, ApiError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| ApiError::BadRequest(format!("{path}: {e}")))
}

pub fn table_build(engine: &Engine, req: &TableBuildRequest) -> Result<TableBuildResponse, ApiError> {
    let min = req.min_samples.unwrap_or(DEFAULT_MIN_SAMPLES);
    let (tables, report) = match (&req.from, req.selfplay_deals) {
        (Some(from), None) => build_tables(read_records(open(from)?)?, min),
        (None, Some(n)) => {
            let records = selfplay_corpus(&engine.config, n, req.seed, min);
            if let Some(out) = &req.records_out {
                let file = File::create(out).map_err(|e| ApiError::BadRequest(format!("{out}: {e}")))?;
                write_records(&mut BufWriter::new(file), &records)?;
            }
            build_tables(records.into_iter().map(Ok), min)
        }
        _ => return Err(ApiError::Unprocessable("give exactly one of a record file or a self-play deal count".into())),
    };
    tables.save(Path::new(&req.out))?;
    Ok(TableBuildResponse {
        used: report.used,
        skipped: report.skipped,
        grand_keys: tables.grand.len(),
        suit_keys: tables.suit.len(),
        null_patterns: tables.null.populated(),
    })
}

pub fn bench(engine: &Engine, req: &BenchRequest) -> Result<BenchResponse, ApiError> {
    if req.policies.is_empty() {
        return Err(ApiError::Unprocessable("no policies to compare".into()));
    }
    if req.deals == 0 || req.deals > MAX_DEALS {
        return Err(ApiError::Unprocessable(format!("deals must be in 1..={MAX_DEALS}")));
    }
    Ok(run_bench(engine, req))
}

pub fn replay_file(engine: &Engine, req: &ReplayRequest) -> Result<ReplayResponse, ApiError> {
    Ok(replay(read_records(open(&req.from)?)?, engine, req.policy))
}
