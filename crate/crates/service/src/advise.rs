//! The advice operation: every game type's ranked puts for one hand.

use std::collections::HashSet;

use skat_api::{AdviseRequest, AdviseResponse, Candidate, GameAdvice};
use skat_core::cards::{Card, CardSet, GameType, Position};
use skat_core::gamedef::{bid_ladder, game_value};
use skat_core::skatselect::{Engine, Policy};

use crate::error::ApiError;

fn parse_cards(codes: &[String], what: &str) -> Result<Vec<Card>, ApiError> {
    codes
        .iter()
        .map(|c| c.parse::<Card>().map_err(|_| ApiError::BadRequest(format!("{what}: unknown card code {c:?}"))))
        .collect()
}

/// The twelve cards of a request, or 400.
pub fn request_hand(req: &AdviseRequest) -> Result<CardSet, ApiError> {
    let mut cards = parse_cards(&req.hand, "hand")?;
    match &req.skat {
        Some(skat) => {
            if req.hand.len() != 10 || skat.len() != 2 {
                return Err(ApiError::BadRequest(format!(
                    "hand with skat needs 10 + 2 cards, got {} + {}",
                    req.hand.len(),
                    skat.len()
                )));
            }
            cards.extend(parse_cards(skat, "skat")?);
        }
        None if cards.len() != 12 => {
            return Err(ApiError::BadRequest(format!("hand needs 12 cards, got {}", cards.len())));
        }
        None => {}
    }
    let mut seen = HashSet::new();
    if let Some(dup) = cards.iter().find(|c| !seen.insert(**c)) {
        return Err(ApiError::BadRequest(format!("duplicate card {dup}")));
    }
    Ok(cards.into_iter().collect())
}

pub fn advise(engine: &Engine, req: &AdviseRequest) -> Result<AdviseResponse, ApiError> {
    let hand12 = request_hand(req)?;
    let position: Position = req
        .position
        .parse()
        .map_err(|_| ApiError::Unprocessable(format!("unknown position {:?}", req.position)))?;
    if !bid_ladder().contains(&req.bid) {
        return Err(ApiError::Unprocessable(format!("bid {} is not on the ladder", req.bid)));
    }
    let games = match &req.game {
        Some(g) => {
            let g: GameType = g.parse().map_err(|_| ApiError::Unprocessable(format!("unknown game {g:?}")))?;
            if game_value(hand12, g).value < req.bid {
                return Err(ApiError::Unprocessable(format!(
                    "{g} is worth {} with this hand, below the bid {}",
                    game_value(hand12, g).value,
                    req.bid
                )));
            }
            vec![g]
        }
        None => GameType::ALL.to_vec(),
    };
    let mut out = Vec::with_capacity(games.len());
    for g in games {
        let ctx = engine.context(hand12, g, position, req.bid);
        let value = game_value(hand12, g).value;
        let candidates = engine.select_put(hand12, &ctx, Policy::Proposal, 0)?;
        out.push(GameAdvice {
            game: g,
            value,
            legal: value >= req.bid,
            subtype: ctx.subtype.name().to_string(),
            candidates: candidates.into_iter().map(Candidate::from).collect(),
        });
    }
    out.sort_by(|a, b| {
        b.legal
            .cmp(&a.legal)
            .then(b.candidates[0].expected_cost.total_cmp(&a.candidates[0].expected_cost))
    });
    Ok(AdviseResponse { games: out })
}
