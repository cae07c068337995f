//! Skat putting: enumerate the 66 discards, filter them by hard rules, score
//! survivors with a λ-weighted feature sum and rank.

pub mod config;
pub mod rules;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

pub use config::{LambdaTable, PartitionKey, SelectConfig};
pub use rules::{high_card_theorem, Certificate, RuleInput, RULES};

use crate::cards::{trump_set, Card, CardSet, GameType, Position, Rank, Suit};
use crate::dealing::seeded_rng;
use crate::error::{Error, Result};
use crate::gamedef::{game_value, overbid_value};
use crate::handeval::{features_with, kinback, standing_cards, von_stegen, winning_params, FeatureVector, StandingMode};
use crate::probmodel::{null_win_probability, ProbTables};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionSubtype {
    HighCardGrand,
    TwoJackGrand,
    StdGrand,
    FourJackGrand,
    HighTrumpSuit,
    LowTrumpSuit,
    NullLike,
}

impl SelectionSubtype {
    pub const ALL: [SelectionSubtype; 7] = [
        SelectionSubtype::HighCardGrand,
        SelectionSubtype::TwoJackGrand,
        SelectionSubtype::StdGrand,
        SelectionSubtype::FourJackGrand,
        SelectionSubtype::HighTrumpSuit,
        SelectionSubtype::LowTrumpSuit,
        SelectionSubtype::NullLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SelectionSubtype::HighCardGrand => "high_card_grand",
            SelectionSubtype::TwoJackGrand => "two_jack_grand",
            SelectionSubtype::StdGrand => "std_grand",
            SelectionSubtype::FourJackGrand => "four_jack_grand",
            SelectionSubtype::HighTrumpSuit => "high_trump_suit",
            SelectionSubtype::LowTrumpSuit => "low_trump_suit",
            SelectionSubtype::NullLike => "null_like",
        }
    }
}

impl fmt::Display for SelectionSubtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SelectionSubtype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SelectionSubtype::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::parse("selection subtype", s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameContext {
    pub game: GameType,
    pub position: Position,
    /// Current bid, 0 before the auction.
    pub bid: u32,
    pub subtype: SelectionSubtype,
}

impl GameContext {
    pub fn new(hand12: CardSet, game: GameType, position: Position, bid: u32) -> GameContext {
        Self::with_config(hand12, game, position, bid, &SelectConfig::default())
    }

    pub fn with_config(hand12: CardSet, game: GameType, position: Position, bid: u32, cfg: &SelectConfig) -> GameContext {
        GameContext {
            game,
            position,
            bid,
            subtype: classify_subtype_with(hand12, game, cfg),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkatCandidate {
    pub put: CardSet,
    pub remaining: CardSet,
    pub features: FeatureVector,
    pub soft_score: f64,
    pub win_prob: f64,
    pub expected_cost: f64,
    pub filtered_by: Option<String>,
    /// Score adjustments and overrides that touched this candidate.
    pub fired_rules: Vec<String>,
}

impl SkatCandidate {
    fn shell(hand12: CardSet, put: CardSet) -> SkatCandidate {
        SkatCandidate {
            put,
            remaining: hand12 - put,
            features: FeatureVector::default(),
            soft_score: 0.0,
            win_prob: 0.0,
            expected_cost: 0.0,
            filtered_by: None,
            fired_rules: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Proposal,
    Winprob,
    Stegen,
    Kinback,
    Random,
}

impl Policy {
    pub const ALL: [Policy; 5] = [Policy::Proposal, Policy::Winprob, Policy::Stegen, Policy::Kinback, Policy::Random];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Proposal => "proposal",
            Policy::Winprob => "winprob",
            Policy::Stegen => "stegen",
            Policy::Kinback => "kinback",
            Policy::Random => "random",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::parse("policy", s))
    }
}

/// All C(12,2) discards, ordered by the canonical order of their cards.
pub fn enumerate_puts(hand12: CardSet) -> Result<Vec<SkatCandidate>> {
    if hand12.len() != 12 {
        return Err(Error::domain(format!("need 12 cards to put, got {}", hand12.len())));
    }
    let cards: Vec<Card> = hand12.iter().collect();
    let mut out = Vec::with_capacity(66);
    for i in 0..12 {
        for j in i + 1..12 {
            out.push(SkatCandidate::shell(hand12, CardSet::from_iter([cards[i], cards[j]])));
        }
    }
    Ok(out)
}

fn jack(s: Suit) -> Card {
    Card::new(s, Rank::Jack)
}

/// Jacks, aces, and tens whose ace is held too.
pub fn high_card_count(hand12: CardSet) -> u32 {
    let tens_with_ace = Suit::ALL
        .iter()
        .filter(|&&s| hand12.contains(Card::new(s, Rank::Ten)) && hand12.contains(Card::new(s, Rank::Ace)))
        .count();
    ((hand12 & (CardSet::JACKS | CardSet::ACES)).len() + tens_with_ace) as u32
}

pub fn classify_subtype(hand12: CardSet, g: GameType) -> SelectionSubtype {
    classify_subtype_with(hand12, g, &SelectConfig::default())
}

pub fn classify_subtype_with(hand12: CardSet, g: GameType, cfg: &SelectConfig) -> SelectionSubtype {
    match g {
        GameType::Null => SelectionSubtype::NullLike,
        GameType::Grand => {
            let jacks = (hand12 & CardSet::JACKS).len();
            if jacks == 4 {
                SelectionSubtype::FourJackGrand
            } else if high_card_count(hand12) >= cfg.high_card_grand {
                SelectionSubtype::HighCardGrand
            } else if jacks == 2 {
                SelectionSubtype::TwoJackGrand
            } else {
                SelectionSubtype::StdGrand
            }
        }
        GameType::Suit(_) => {
            let trumps = (hand12 & trump_set(g)).len() as u32;
            let top = [Suit::Clubs, Suit::Spades, Suit::Hearts].iter().filter(|&&s| hand12.contains(jack(s))).count() as u32;
            if trumps >= cfg.high_trump_suit || (trumps + 1 == cfg.high_trump_suit && top >= cfg.high_trump_suit_top) {
                SelectionSubtype::HighTrumpSuit
            } else {
                SelectionSubtype::LowTrumpSuit
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilterOutcome {
    pub survivors: Vec<SkatCandidate>,
    /// Each labeled with the first (highest-priority) rule it breaks.
    pub rejected: Vec<SkatCandidate>,
    /// Rules dropped to keep at least one survivor, in the order dropped.
    pub relaxed: Vec<&'static str>,
}

pub fn hard_filter(candidates: Vec<SkatCandidate>, hand12: CardSet, g: GameType, subtype: SelectionSubtype) -> FilterOutcome {
    let inp = RuleInput { hand12, game: g, subtype };
    let mut active: Vec<&rules::Rule> = RULES.iter().filter(|r| (r.applies)(subtype)).collect();
    let mut relaxed = Vec::new();
    loop {
        let verdicts: Vec<Option<&'static str>> = candidates
            .iter()
            .map(|c| active.iter().find(|r| (r.rejects)(&inp, c.put)).map(|r| r.id))
            .collect();
        if verdicts.iter().any(Option::is_none) || active.is_empty() {
            let (mut survivors, mut rejected) = (Vec::new(), Vec::new());
            for (mut c, v) in candidates.into_iter().zip(verdicts) {
                match v {
                    None => survivors.push(c),
                    Some(id) => {
                        c.filtered_by = Some(id.to_string());
                        rejected.push(c);
                    }
                }
            }
            return FilterOutcome { survivors, rejected, relaxed };
        }
        relaxed.push(active.pop().unwrap().id);
    }
}

pub fn soft_score(fv: &FeatureVector, lambda: &[f64; 9]) -> f64 {
    fv.as_array().iter().zip(lambda).map(|(f, l)| f * l).sum()
}

/// `(50 + V)·W − (50 + 2V)·(1 − W)`.
pub fn expected_cost(w: f64, value: u32) -> f64 {
    expected_cost_with(w, value, 50)
}

/// As [`expected_cost`] with the loss constant replaced by `loss_base`.
pub fn expected_cost_with(w: f64, value: u32, loss_base: i64) -> f64 {
    let v = value as f64;
    (50.0 + v) * w - (loss_base as f64 + 2.0 * v) * (1.0 - w)
}

/// Expected payoff of playing a game worth `value` at `bid`: a game worth
/// less than the bid is lost at the overbid value whatever happens.
pub fn contract_cost(w: f64, g: GameType, value: u32, bid: u32, loss_base: i64) -> f64 {
    if value < bid {
        -(loss_base as f64 + 2.0 * overbid_value(g, bid) as f64)
    } else {
        expected_cost_with(w, value, loss_base)
    }
}

/// Tables plus configuration: everything selection and bidding read.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Engine {
    pub tables: ProbTables,
    pub config: SelectConfig,
    pub loss_base: i64,
}

impl Engine {
    pub fn new(tables: ProbTables, config: SelectConfig) -> Engine {
        Engine {
            tables,
            config,
            loss_base: 50,
        }
    }

    pub fn context(&self, hand12: CardSet, game: GameType, position: Position, bid: u32) -> GameContext {
        GameContext::with_config(hand12, game, position, bid, &self.config)
    }

    fn win_prob(&self, hand10: CardSet, put: CardSet, ctx: &GameContext) -> f64 {
        if ctx.game.is_null() {
            null_win_probability(hand10, &self.tables.null)
        } else {
            self.tables.win_probability(hand10, put, ctx.game, ctx.bid, ctx.position)
        }
    }

    /// Candidates ranked best first. `seed` only matters for the random policy.
    pub fn select_put(&self, hand12: CardSet, ctx: &GameContext, policy: Policy, seed: u64) -> Result<Vec<SkatCandidate>> {
        let mut cands = enumerate_puts(hand12)?;
        let value = game_value(hand12, ctx.game).value;
        for c in &mut cands {
            c.win_prob = self.win_prob(c.remaining, c.put, ctx);
            c.expected_cost = contract_cost(c.win_prob, ctx.game, value, ctx.bid, self.loss_base);
        }
        let by_score = |v: &mut Vec<SkatCandidate>| v.sort_by(|a, b| b.soft_score.total_cmp(&a.soft_score));
        match policy {
            Policy::Random => {
                cands.shuffle(&mut seeded_rng(seed, 0));
            }
            Policy::Winprob => {
                cands.sort_by(|a, b| b.expected_cost.total_cmp(&a.expected_cost));
            }
            _ if ctx.game.is_null() => {
                // null putting sits outside the λ system
                for c in &mut cands {
                    c.soft_score = c.win_prob;
                }
                by_score(&mut cands);
            }
            Policy::Stegen | Policy::Kinback => {
                for c in &mut cands {
                    c.soft_score = match policy {
                        Policy::Stegen => von_stegen(c.remaining, ctx.game, ctx.bid)?,
                        _ => kinback(c.remaining, ctx.game, ctx.position)?,
                    };
                }
                by_score(&mut cands);
            }
            Policy::Proposal => return Ok(self.proposal(hand12, ctx, cands)),
        }
        Ok(cands)
    }

    fn proposal(&self, hand12: CardSet, ctx: &GameContext, cands: Vec<SkatCandidate>) -> Vec<SkatCandidate> {
        let g = ctx.game;
        let key = PartitionKey::of(hand12, g, ctx.position);
        let lambda = *self.config.lambda(ctx.subtype, &key).expect("config validated");
        let standing = standing_set(hand12, g);
        let out = hard_filter(cands, hand12, g, ctx.subtype);
        let score = |mut c: SkatCandidate| {
            c.features = features_with(c.remaining, c.put, g, ctx.position, c.win_prob);
            c.soft_score = soft_score(&c.features, &lambda);
            if g.is_grand() {
                self.adjust(&mut c, hand12, ctx, standing);
            }
            c
        };
        let mut survivors: Vec<_> = out.survivors.into_iter().map(score).collect();
        let mut rejected: Vec<_> = out.rejected.into_iter().map(score).collect();
        survivors.sort_by(|a, b| b.soft_score.total_cmp(&a.soft_score));
        rejected.sort_by(|a, b| b.soft_score.total_cmp(&a.soft_score));
        for id in &out.relaxed {
            for c in &mut survivors {
                c.fired_rules.push(format!("relaxed:{id}"));
            }
        }
        if g.is_grand() {
            if let Some((put, _)) = high_card_theorem(hand12) {
                let all = if let Some(i) = survivors.iter().position(|c| c.put == put) {
                    Some(survivors.remove(i))
                } else {
                    rejected.iter().position(|c| c.put == put).map(|i| rejected.remove(i))
                };
                if let Some(mut c) = all {
                    c.filtered_by = None;
                    c.fired_rules.push("high-card-theorem".into());
                    survivors.insert(0, c);
                }
            }
        }
        survivors.extend(rejected);
        survivors
    }

    fn adjust(&self, c: &mut SkatCandidate, hand12: CardSet, ctx: &GameContext, standing: CardSet) {
        let cfg = &self.config;
        let g = ctx.game;
        let fire = |c: &mut SkatCandidate, id: &str, delta: f64| {
            if delta != 0.0 {
                c.soft_score += delta;
                c.fired_rules.push(id.to_string());
            }
        };
        if ctx.position == Position::Forehand && winning_params(c.remaining, c.put, g, ctx.bid, ctx.position).lost_tricks <= 3 {
            fire(c, "forehand-max-eyes", cfg.adjustment("forehand-max-eyes") * c.put.points() as f64);
        }
        let put_standing = (c.put & standing).len();
        fire(c, "keep-standing", -cfg.adjustment("keep-standing") * put_standing as f64);
        let aces = (hand12 & CardSet::ACES).len();
        let plain = |h: CardSet, s: Suit| h & s.cards() - CardSet::JACKS;
        if ctx.position == Position::Rearhand && aces >= 2 {
            let voids = Suit::ALL.iter().any(|&s| !plain(hand12, s).is_empty() && plain(c.remaining, s).is_empty());
            let ten_king = Suit::ALL.iter().any(|&s| {
                let h = plain(c.remaining, s);
                h.contains(Card::new(s, Rank::Ten)) && h.contains(Card::new(s, Rank::King)) && !h.contains(Card::new(s, Rank::Ace))
            });
            if voids && ten_king {
                fire(c, "third-suit-rear", cfg.adjustment("third-suit-rear"));
            }
        }
        if aces == 2 {
            let third = Suit::ALL
                .iter()
                .map(|&s| plain(hand12, s))
                .filter(|h| h.len() >= 3 && (*h & CardSet::ACES).is_empty())
                .max_by_key(|h| h.len());
            if let Some(h) = third {
                if !(h & c.put).is_empty() {
                    fire(c, "build-standing", -cfg.adjustment("build-standing"));
                }
            }
        }
    }

    /// Mean over the 231 possible skats of the best put's expected cost.
    pub fn evaluate_take(&self, hand10: CardSet, g: GameType, position: Position, bid: u32) -> f64 {
        let unseen: Vec<Card> = (!hand10).iter().collect();
        let mut total = 0.0;
        let mut n = 0;
        for i in 0..unseen.len() {
            for j in i + 1..unseen.len() {
                let hand12 = hand10.with(unseen[i]).with(unseen[j]);
                total += self.best_put_cost(hand12, g, position, bid);
                n += 1;
            }
        }
        total / n as f64
    }

    /// Max over the 66 puts of the expected cost of `g` at `bid`.
    pub fn best_put_cost(&self, hand12: CardSet, g: GameType, position: Position, bid: u32) -> f64 {
        let value = game_value(hand12, g).value;
        if value < bid {
            return contract_cost(0.0, g, value, bid, self.loss_base);
        }
        let cards: Vec<Card> = hand12.iter().collect();
        let mut best_w: f64 = 0.0;
        for i in 0..12 {
            for j in i + 1..12 {
                let put = CardSet::from_iter([cards[i], cards[j]]);
                let hand10 = hand12 - put;
                let w = if g.is_null() {
                    null_win_probability(hand10, &self.tables.null)
                } else {
                    self.tables.win_probability(hand10, put, g, bid, position)
                };
                best_w = best_w.max(w);
            }
        }
        contract_cost(best_w, g, value, bid, self.loss_base)
    }
}

/// Cards of `hand12` that stand whatever the split: the top `certain`
/// cards of each side-suit holding.
fn standing_set(hand12: CardSet, g: GameType) -> CardSet {
    let certain = standing_cards(hand12, g, StandingMode::Certain);
    let mut out = CardSet::EMPTY;
    for s in g.side_suits() {
        let held = hand12 & s.cards() - CardSet::JACKS;
        // canonical order within a suit is strength order outside null
        out |= held.iter().take(certain[s.index()] as usize).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(s: &str) -> CardSet {
        s.parse().unwrap()
    }

    #[test]
    fn sixty_six_puts() {
        let hand = cs("CJ SJ CA CT CK SA ST SK HA HT H7 D7");
        let c = enumerate_puts(hand).unwrap();
        assert_eq!(c.len(), 66);
        for x in &c {
            assert_eq!(x.put | x.remaining, hand);
            assert_eq!(x.put.len(), 2);
        }
        let mut puts: Vec<u32> = c.iter().map(|x| x.put.bits()).collect();
        puts.dedup();
        assert_eq!(puts.len(), 66);
        assert!(enumerate_puts(cs("CJ SJ")).is_err());
    }

    #[test]
    fn subtypes() {
        assert_eq!(classify_subtype(cs("CJ SJ HJ DJ C7 C8 C9 S7 S8 S9 H7 H8"), GameType::Grand), SelectionSubtype::FourJackGrand);
        assert_eq!(classify_subtype(cs("CJ HJ C7 C8 C9 S7 S8 S9 H7 H8 D7 D8"), GameType::Grand), SelectionSubtype::TwoJackGrand);
        assert_eq!(classify_subtype(cs("CJ HJ CA CT SA ST HA C9 S7 S8 D7 D8"), GameType::Grand), SelectionSubtype::HighCardGrand);
        let hearts = GameType::Suit(Suit::Hearts);
        assert_eq!(classify_subtype(cs("DJ HA H7 H8 C7 C8 C9 S7 S8 S9 D7 D8"), hearts), SelectionSubtype::LowTrumpSuit);
        assert_eq!(classify_subtype(cs("CJ SJ H7 H8 C7 C8 C9 S7 S8 S9 D7 D8"), hearts), SelectionSubtype::HighTrumpSuit);
        assert_eq!(classify_subtype(cs("DJ H9 HA H7 H8 C8 C9 S7 S8 S9 D7 D8"), hearts), SelectionSubtype::HighTrumpSuit);
        assert_eq!(classify_subtype(cs("DJ H9 HA H7 H8 C8 C9 S7 S8 S9 D7 D8"), GameType::Null), SelectionSubtype::NullLike);
    }

    #[test]
    fn soft_and_cost() {
        let lambda = [10.0, 60.0, 3.0, 4.0, 5.0, 40.0, 40.0, 1.0, 1.0];
        let f = FeatureVector {
            win_prob: 0.8,
            free_suits: 1.0,
            skat_eyes: 10.0,
            good_tens: 1.0,
            bad_tens: 0.0,
            certain_standing: 2.0,
            standing_with_retake: 1.0,
            standing_without_retake: 0.0,
            lead_suits: 1.0,
        };
        assert!((soft_score(&f, &lambda) - 223.0).abs() < 1e-9);
        assert_eq!(soft_score(&FeatureVector::default(), &lambda), 0.0);
        assert_eq!(expected_cost(1.0, 24), 74.0);
        assert_eq!(expected_cost(0.0, 24), -98.0);
        assert_eq!(expected_cost(0.5, 48), -24.0);
        assert_eq!(contract_cost(1.0, GameType::Grand, 24, 30, 50), -(50.0 + 96.0));
    }

    #[test]
    fn filter_examples() {
        let hearts = GameType::Suit(Suit::Hearts);
        let hand = cs("CJ SJ HA HT HK HQ CA CK C8 SA S8 D7");
        let st = classify_subtype(hand, hearts);
        let out = hard_filter(enumerate_puts(hand).unwrap(), hand, hearts, st);
        assert!(out.survivors.iter().all(|c| (c.put & trump_set(hearts)).is_empty()));
        assert!(out.rejected.iter().any(|c| c.put.contains("HQ".parse().unwrap()) && c.filtered_by.as_deref() == Some("no-trump-discard")));

        let grand = cs("CJ CA CT C9 C8 HA HK H9 H8 ST D7 D8");
        let st = classify_subtype(grand, GameType::Grand);
        assert_eq!(st, SelectionSubtype::StdGrand);
        let out = hard_filter(enumerate_puts(grand).unwrap(), grand, GameType::Grand, st);
        assert!(!out.survivors.is_empty());
        assert!(out.survivors.iter().all(|c| c.put.contains("ST".parse().unwrap())));

        let eleven = cs("CJ SJ HJ DJ HA HT HK HQ H9 H8 H7 C7");
        let st = classify_subtype(eleven, hearts);
        let out = hard_filter(enumerate_puts(eleven).unwrap(), eleven, hearts, st);
        assert!(!out.survivors.is_empty());
        assert!(out.relaxed.contains(&"no-trump-discard"));
    }

    #[test]
    fn random_policy_is_reproducible() {
        let e = Engine::default();
        let hand = cs("CJ SJ HA HT HK HQ CA CK C8 SA S8 D7");
        let ctx = e.context(hand, GameType::Grand, Position::Forehand, 18);
        let a = e.select_put(hand, &ctx, Policy::Random, 7).unwrap();
        let b = e.select_put(hand, &ctx, Policy::Random, 7).unwrap();
        assert_eq!(a[0].put, b[0].put);
    }

    #[test]
    fn constant_costs_average_to_themselves() {
        // empty tables: every trump lookup hits the prior
        let e = Engine::default();
        let hand10 = cs("C7 C8 C9 S7 S8 S9 H7 H8 H9 D7");
        let v = e.evaluate_take(hand10, GameType::Grand, Position::Forehand, 0);
        // no jacks in hand: the grand value depends on the skat's jacks
        assert!(v.is_finite());
        let hearts = GameType::Suit(Suit::Hearts);
        let w = e.evaluate_take(hand10, hearts, Position::Forehand, 100);
        assert!(w < 0.0);
    }
}
