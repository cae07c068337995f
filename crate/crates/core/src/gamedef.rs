//! Game values, contract outcomes and Seeger scoring.

use serde::{Deserialize, Serialize};

use crate::cards::{trump_order, CardSet, GameType, Suit};
use crate::error::{Error, Result};

pub const NULL_VALUE: u32 = 23;

/// Base values of the official Skat order.
pub fn base_value(g: GameType) -> Option<u32> {
    match g {
        GameType::Grand => Some(24),
        GameType::Null => None,
        GameType::Suit(Suit::Clubs) => Some(12),
        GameType::Suit(Suit::Spades) => Some(11),
        GameType::Suit(Suit::Hearts) => Some(10),
        GameType::Suit(Suit::Diamonds) => Some(9),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameValue {
    pub base: u32,
    /// Matadors + 1 for trump games, 1 for null.
    pub multiplier: u32,
    pub value: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    /// Eyes including the skat.
    pub declarer_eyes: u32,
    pub declarer_tricks: u32,
    pub won: bool,
}

impl Outcome {
    pub fn for_game(g: GameType, declarer_eyes: u32, declarer_tricks: u32) -> Outcome {
        let won = if g.is_null() {
            declarer_tricks == 0
        } else {
            declarer_eyes >= 61
        };
        Outcome {
            declarer_eyes,
            declarer_tricks,
            won,
        }
    }
}

/// Length of the unbroken run from the club jack down the trump order that
/// `cards` either all hold ("with") or all lack ("against").
pub fn matador_count(cards: CardSet, g: GameType) -> Result<u32> {
    if g.is_null() {
        return Err(Error::domain("null games have no matadors"));
    }
    let order = trump_order(g);
    let with = cards.contains(order[0]);
    Ok(order.iter().take_while(|&&c| cards.contains(c) == with).count() as u32)
}

/// `hand12` is the declarer's hand plus skat.
pub fn game_value(hand12: CardSet, g: GameType) -> GameValue {
    match base_value(g) {
        None => GameValue {
            base: NULL_VALUE,
            multiplier: 1,
            value: NULL_VALUE,
        },
        Some(base) => {
            let multiplier = matador_count(hand12, g).expect("trump game") + 1;
            GameValue {
                base,
                multiplier,
                value: base * multiplier,
            }
        }
    }
}

/// Seeger points for the declarer: `50 + V` won, `-(50 + 2V)` lost.
pub fn seeger_payoff(won: bool, value: u32) -> i64 {
    seeger_payoff_with(won, value, 50)
}

/// As [`seeger_payoff`] with the constant of the loss branch replaced.
pub fn seeger_payoff_with(won: bool, value: u32, loss_base: i64) -> i64 {
    let v = value as i64;
    if won {
        50 + v
    } else {
        -(loss_base + 2 * v)
    }
}

/// Declarer's Seeger points for a contract at `bid`: a game worth less than
/// the bid counts as lost at the overbid value.
pub fn contract_payoff(won: bool, g: GameType, value: u32, bid: u32) -> i64 {
    if value < bid {
        seeger_payoff(false, overbid_value(g, bid))
    } else {
        seeger_payoff(won, value)
    }
}

/// Extended-Seeger table bonuses. A lost game credits each opponent
/// `opponent_bonus` points; the reported figure is the table total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeegerConfig {
    pub opponent_bonus: i64,
    pub opponents: i64,
}

impl Default for SeegerConfig {
    fn default() -> Self {
        SeegerConfig {
            opponent_bonus: 40,
            opponents: 2,
        }
    }
}

/// Sum of declarer payoffs plus opponent bonuses for lost games, scaled to
/// a series of 36 games. Folded games count as played with payoff 0.
pub fn series_score(payoffs: &[i64], games_played: usize) -> Result<f64> {
    series_score_with(payoffs, games_played, SeegerConfig::default())
}

pub fn series_score_with(payoffs: &[i64], games_played: usize, cfg: SeegerConfig) -> Result<f64> {
    if games_played == 0 {
        return Err(Error::domain("series score needs at least one game"));
    }
    let total: i64 = payoffs
        .iter()
        .map(|&p| if p < 0 { p + cfg.opponent_bonus * cfg.opponents } else { p })
        .sum();
    Ok(total as f64 * 36.0 / games_played as f64)
}

/// Every reachable game value, ascending and deduplicated.
pub fn bid_ladder() -> Vec<u32> {
    let mut ladder = vec![NULL_VALUE];
    for g in GameType::TRUMP_GAMES {
        let base = base_value(g).unwrap();
        let max_matadors = crate::cards::trump_set(g).len() as u32;
        ladder.extend((2..=max_matadors + 1).map(|m| base * m));
    }
    ladder.sort_unstable();
    ladder.dedup();
    ladder
}

pub fn is_legal_announcement(bid: u32, value: u32) -> bool {
    value >= bid
}

/// The value a declarer is charged when the announced game is worth less
/// than the bid: the smallest multiple of the base reaching the bid.
pub fn overbid_value(g: GameType, bid: u32) -> u32 {
    match base_value(g) {
        Some(base) => bid.div_ceil(base) * base,
        None => bid.max(NULL_VALUE),
    }
}
