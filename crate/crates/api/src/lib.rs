//! Wire types shared by the service and its clients. Cards travel as text
//! codes (`CJ`, `HT`, `D7`), card sets as space-separated code lists.

use serde::{Deserialize, Serialize};

use skat_core::bidding::AuctionResult;
use skat_core::cards::{Card, CardSet, GameType, Position};
use skat_core::dealing::Deal;
use skat_core::handeval::FeatureVector;
use skat_core::harness::bench::{BenchConfig, BenchReport};
use skat_core::harness::replay::{CrossTab, ReplayPolicy};
use skat_core::skatselect::{Policy, SkatCandidate};

pub const ADVISE_PATH: &str = "/api/v1/advise";
pub const DEAL_PATH: &str = "/api/v1/deal";
pub const SELECT_PATH: &str = "/api/v1/select";
pub const AUCTION_PATH: &str = "/api/v1/auction";
pub const SOLVE_PATH: &str = "/api/v1/solve";
pub const TABLE_BUILD_PATH: &str = "/api/v1/tables/build";
pub const BENCH_PATH: &str = "/api/v1/bench";
pub const REPLAY_PATH: &str = "/api/v1/replay";
pub const HEALTH_PATH: &str = "/health";

/// Body of every non-2xx response.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

/// Fields are loose strings so that malformed hands map to 400 and bad
/// context (position, game, bid) to 422 rather than a generic rejection.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AdviseRequest {
    /// 12 codes, or 10 together with `skat`.
    pub hand: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skat: Option<Vec<String>>,
    pub position: String,
    pub bid: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub put: CardSet,
    pub win_prob: f64,
    pub expected_cost: f64,
    pub soft_score: f64,
    pub features: FeatureVector,
    pub fired_rules: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtered_by: Option<String>,
}

impl From<SkatCandidate> for Candidate {
    fn from(c: SkatCandidate) -> Self {
        Candidate {
            put: c.put,
            win_prob: c.win_prob,
            expected_cost: c.expected_cost,
            soft_score: c.soft_score,
            features: c.features,
            fired_rules: c.fired_rules,
            filtered_by: c.filtered_by,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameAdvice {
    pub game: GameType,
    pub value: u32,
    /// Whether the game reaches the bid.
    pub legal: bool,
    pub subtype: String,
    /// Best first; hard-filter survivors before rejected puts.
    pub candidates: Vec<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdviseResponse {
    /// Ordered by the best candidate's expected cost, legal games first.
    pub games: Vec<GameAdvice>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DealRequest {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub index: Option<u64>,
    #[serde(default = "one")]
    pub count: u64,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberedDeal {
    /// Deal index for `--index` requests, stream number for seeded ones.
    pub number: u64,
    pub deal: Deal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DealResponse {
    pub deals: Vec<NumberedDeal>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectRequest {
    pub hand: CardSet,
    #[serde(default)]
    pub skat: Option<CardSet>,
    pub game: GameType,
    pub position: Position,
    pub bid: u32,
    pub policy: Policy,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectResponse {
    pub subtype: String,
    pub value: u32,
    pub candidates: Vec<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuctionRequest {
    pub deals: u64,
    pub seed: u64,
    /// Overrides the loss constant of the expected-payoff formula.
    #[serde(default)]
    pub loss_base: Option<i64>,
    #[serde(default)]
    pub threshold: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Declaration {
    pub number: u64,
    pub auction: AuctionResult,
    /// Game chosen by the declarer; `None` when folded.
    pub game: Option<GameType>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuctionResponse {
    pub deals: u64,
    pub folds: u64,
    pub declarations: Vec<Declaration>,
}

impl AuctionResponse {
    pub fn fold_rate(&self) -> f64 {
        self.folds as f64 / self.deals.max(1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    /// Hands indexed by position, after the put.
    pub hands: [CardSet; 3],
    /// Cards out of play that count for the declarer.
    #[serde(default)]
    pub skat: CardSet,
    pub game: GameType,
    pub declarer: Position,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResponse {
    /// Declarer eyes including the skat; for null 1 = won.
    pub value: u32,
    pub won: bool,
    pub principal_variation: Vec<(Position, Card)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableBuildRequest {
    /// Record file on the server host; omit to generate records by self-play.
    #[serde(default)]
    pub from: Option<String>,
    /// Self-play deals when `from` is absent.
    #[serde(default)]
    pub selfplay_deals: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    /// Where the generated records are written, if anywhere.
    #[serde(default)]
    pub records_out: Option<String>,
    pub out: String,
    #[serde(default)]
    pub min_samples: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableBuildResponse {
    pub used: u64,
    pub skipped: u64,
    pub grand_keys: usize,
    pub suit_keys: usize,
    pub null_patterns: usize,
}

pub type BenchRequest = BenchConfig;
pub type BenchResponse = BenchReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayRequest {
    /// Record file on the server host.
    pub from: String,
    pub policy: ReplayPolicy,
}

pub type ReplayResponse = CrossTab;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn advise_request_wire_shape() {
        let r: AdviseRequest = serde_json::from_str(r#"{"hand":["CJ","SJ"],"position":"fore","bid":18}"#).unwrap();
        assert_eq!(r.hand, ["CJ", "SJ"]);
        assert!(r.skat.is_none() && r.game.is_none());
        let back = serde_json::to_string(&r).unwrap();
        assert_eq!(back, r#"{"hand":["CJ","SJ"],"position":"fore","bid":18}"#);
    }

    #[test]
    fn deal_request_defaults() {
        let r: DealRequest = serde_json::from_str(r#"{"seed":3}"#).unwrap();
        assert_eq!(r, DealRequest { seed: Some(3), index: None, count: 1 });
    }
}
