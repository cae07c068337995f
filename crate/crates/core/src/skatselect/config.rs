//! Selection configuration: λ rows, score adjustments and subtype thresholds.
//!
//! Line-oriented text; `#` starts a comment, fields are whitespace-separated.
//!
//! ```text
//! threshold <name> <value>
//! lambda <subtype> <position> <aces> <jacks> <longest> <l1> ... <l9>
//! adjust <id> <magnitude>
//! ```
//!
//! `position` is `fore|middle|rear`, `aces` a count 0..4, `jacks` one of
//! `none|one|two_other|top_pair|three|four`, `longest` the longest side-suit
//! length; any of the four may be `*`. For a hand, the matching row with the
//! most non-`*` partition fields wins; among equally specific rows the later
//! one wins. Every subtype except `null_like` needs a row of four `*`.
//! Thresholds: `high_card_grand` (jacks + aces + tens backed by their ace),
//! `high_trump_suit` (trump count), `high_trump_suit_top` (top-three trumps
//! needed at one trump fewer).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cards::{CardSet, Position};
use crate::error::{Error, Result};
use crate::handeval::JackGroup;

use super::SelectionSubtype;

pub const DEFAULT_CONFIG: &str = "\
# subtype thresholds
threshold high_card_grand      7
threshold high_trump_suit      5
threshold high_trump_suit_top  2

#      subtype          pos  aces jacks longest  f1   f2    f3   f4   f5  f6  f7  f8  f9
lambda high_card_grand  *    *    *     *        2    2     2    2    1   2   4   1   1
lambda two_jack_grand   *    *    *     *        3    13.5  4.5  4.5  1   10  4   41  3
lambda std_grand        *    *    *     *        10   60    3    4    5   40  40  1   1
lambda four_jack_grand  *    *    *     *        10   60    3    4    5   40  40  1   1
lambda high_trump_suit  *    *    *     *        15   75    2    2    2   60  60  30  0
lambda low_trump_suit   *    *    *     *        2    67.5  3    35   2   40  12  12  22.5

# bounded grand adjustments
adjust forehand-max-eyes   3
adjust keep-standing       40
adjust third-suit-rear     30
adjust build-standing      10
";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    pub position: Option<Position>,
    pub aces: Option<u8>,
    pub jacks: Option<JackGroup>,
    pub longest: Option<u8>,
}

impl Partition {
    pub const ANY: Partition = Partition {
        position: None,
        aces: None,
        jacks: None,
        longest: None,
    };

    fn specificity(&self) -> usize {
        self.position.is_some() as usize + self.aces.is_some() as usize + self.jacks.is_some() as usize + self.longest.is_some() as usize
    }

    fn matches(&self, key: &PartitionKey) -> bool {
        self.position.is_none_or(|p| p == key.position)
            && self.aces.is_none_or(|a| a == key.aces)
            && self.jacks.is_none_or(|j| j == key.jacks)
            && self.longest.is_none_or(|l| l == key.longest)
    }
}

/// The partition fields of a concrete hand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionKey {
    pub position: Position,
    pub aces: u8,
    pub jacks: JackGroup,
    pub longest: u8,
}

impl PartitionKey {
    pub fn of(hand12: CardSet, g: crate::cards::GameType, position: Position) -> PartitionKey {
        let trumps = crate::cards::trump_set(g);
        let longest = g.side_suits().map(|s| (hand12 & s.cards() - trumps).len()).max().unwrap_or(0);
        PartitionKey {
            position,
            aces: (hand12 & CardSet::ACES).len() as u8,
            jacks: JackGroup::of(hand12),
            longest: longest as u8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub subtype: SelectionSubtype,
    pub partition: Partition,
    pub lambda: [f64; 9],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectConfig {
    pub rows: Vec<LambdaRow>,
    pub adjustments: BTreeMap<String, f64>,
    pub high_card_grand: u32,
    pub high_trump_suit: u32,
    pub high_trump_suit_top: u32,
}

/// The λ table alone, as named by the rest of the engine.
pub type LambdaTable = SelectConfig;

impl Default for SelectConfig {
    fn default() -> Self {
        DEFAULT_CONFIG.parse().expect("built-in config parses")
    }
}

pub const ADJUSTMENTS: [&str; 4] = ["forehand-max-eyes", "keep-standing", "third-suit-rear", "build-standing"];

impl SelectConfig {
    pub fn lambda(&self, subtype: SelectionSubtype, key: &PartitionKey) -> Option<&[f64; 9]> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.subtype == subtype && r.partition.matches(key))
            .max_by_key(|(i, r)| (r.partition.specificity(), *i))
            .map(|(_, r)| &r.lambda)
    }

    pub fn adjustment(&self, id: &str) -> f64 {
        self.adjustments.get(id).copied().unwrap_or(0.0)
    }

    fn validate(&self) -> Result<()> {
        for st in SelectionSubtype::ALL {
            if st == SelectionSubtype::NullLike {
                continue;
            }
            if !self.rows.iter().any(|r| r.subtype == st && r.partition == Partition::ANY) {
                return Err(Error::domain(format!("config has no default lambda row for {st}")));
            }
        }
        if let Some(r) = self.rows.iter().find(|r| r.lambda.iter().any(|l| !l.is_finite())) {
            return Err(Error::domain(format!("non-finite lambda for {}", r.subtype)));
        }
        Ok(())
    }
}

fn wild<T: FromStr>(tok: &str) -> Result<Option<T>> {
    if tok == "*" {
        Ok(None)
    } else {
        tok.parse().map(Some).map_err(|_| Error::parse("partition field", tok))
    }
}

impl FromStr for JackGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<JackGroup> {
        Ok(match s {
            "none" => JackGroup::None,
            "one" => JackGroup::One,
            "two_other" => JackGroup::TwoOther,
            "top_pair" => JackGroup::TopPair,
            "three" => JackGroup::Three,
            "four" => JackGroup::Four,
            _ => return Err(Error::parse("jack group", s)),
        })
    }
}

impl fmt::Display for JackGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JackGroup::None => "none",
            JackGroup::One => "one",
            JackGroup::TwoOther => "two_other",
            JackGroup::TopPair => "top_pair",
            JackGroup::Three => "three",
            JackGroup::Four => "four",
        })
    }
}

impl FromStr for SelectConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<SelectConfig> {
        let mut cfg = SelectConfig {
            rows: Vec::new(),
            adjustments: BTreeMap::new(),
            high_card_grand: 7,
            high_trump_suit: 5,
            high_trump_suit_top: 2,
        };
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| Error::domain(format!("config line {}: {e}", n + 1));
            let f: Vec<&str> = line.split_whitespace().collect();
            match f[0] {
                "threshold" if f.len() == 3 => {
                    let v: u32 = f[2].parse().map_err(|_| at(Error::parse("threshold", f[2])))?;
                    match f[1] {
                        "high_card_grand" => cfg.high_card_grand = v,
                        "high_trump_suit" => cfg.high_trump_suit = v,
                        "high_trump_suit_top" => cfg.high_trump_suit_top = v,
                        other => return Err(at(Error::parse("threshold name", other))),
                    }
                }
                "lambda" if f.len() == 15 => {
                    let subtype: SelectionSubtype = f[1].parse().map_err(at)?;
                    let partition = Partition {
                        position: wild(f[2]).map_err(at)?,
                        aces: wild(f[3]).map_err(at)?,
                        jacks: wild(f[4]).map_err(at)?,
                        longest: wild(f[5]).map_err(at)?,
                    };
                    let mut lambda = [0.0; 9];
                    for (l, tok) in lambda.iter_mut().zip(&f[6..]) {
                        *l = tok.parse().map_err(|_| at(Error::parse("lambda", *tok)))?;
                    }
                    cfg.rows.push(LambdaRow { subtype, partition, lambda });
                }
                "adjust" if f.len() == 3 => {
                    if !ADJUSTMENTS.contains(&f[1]) {
                        return Err(at(Error::parse("adjustment id", f[1])));
                    }
                    let m: f64 = f[2].parse().map_err(|_| at(Error::parse("magnitude", f[2])))?;
                    cfg.adjustments.insert(f[1].to_string(), m);
                }
                _ => return Err(at(Error::parse("config line", line))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SelectConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "threshold high_card_grand {}", self.high_card_grand)?;
        writeln!(f, "threshold high_trump_suit {}", self.high_trump_suit)?;
        writeln!(f, "threshold high_trump_suit_top {}", self.high_trump_suit_top)?;
        let opt = |o: Option<String>| o.unwrap_or_else(|| "*".into());
        for r in &self.rows {
            write!(
                f,
                "lambda {} {} {} {} {}",
                r.subtype,
                opt(r.partition.position.map(|p| p.to_string())),
                opt(r.partition.aces.map(|a| a.to_string())),
                opt(r.partition.jacks.map(|j| j.to_string())),
                opt(r.partition.longest.map(|l| l.to_string())),
            )?;
            for l in r.lambda {
                write!(f, " {l}")?;
            }
            writeln!(f)?;
        }
        for (id, m) in &self.adjustments {
            writeln!(f, "adjust {id} {m}")?;
        }
        Ok(())
    }
}
