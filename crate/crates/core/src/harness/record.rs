//! Game records as JSON lines.
//!
//! A file starts with the header line `{"format":"skat-games","version":1}`
//! and holds one [`GameRecord`] object per following line. Blank lines are
//! ignored.
//!
//! The column format accepted by [`convert_columns`] has one game per line
//! with `;`-separated fields:
//!
//! ```text
//! fore;middle;rear;skat;declarer;game;bid;put;eyes;tricks
//! ```
//!
//! Card fields are space-separated codes, `put` may be `-` for a hand game,
//! `declarer` is `fore|middle|rear`, `game` is a game name. Lines starting
//! with `#` are comments.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::cards::{CardSet, GameType, Position};
use crate::dealing::Deal;
use crate::error::{Error, Result};
use crate::gamedef::Outcome;

/// Result of a recorded game. Generated records solved only for the
/// win/loss threshold carry no eye or trick counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordOutcome {
    pub won: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declarer_eyes: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declarer_tricks: Option<u32>,
}

impl RecordOutcome {
    pub fn won(won: bool) -> RecordOutcome {
        RecordOutcome {
            won,
            declarer_eyes: None,
            declarer_tricks: None,
        }
    }
}

impl From<Outcome> for RecordOutcome {
    fn from(o: Outcome) -> Self {
        RecordOutcome {
            won: o.won,
            declarer_eyes: Some(o.declarer_eyes),
            declarer_tricks: Some(o.declarer_tricks),
        }
    }
}

pub const RECORD_FORMAT: &str = "skat-games";
pub const RECORD_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub deal: Deal,
    /// Bids in the order called, if known.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bids: Vec<u32>,
    pub bid: u32,
    pub declarer: Position,
    pub game: GameType,
    /// `None` for a hand game (the skat stays untouched).
    pub put: Option<CardSet>,
    pub outcome: RecordOutcome,
    #[serde(default)]
    pub source: String,
}

impl GameRecord {
    pub fn validate(&self) -> Result<()> {
        self.deal.validate().map_err(|e| Error::Record(e.to_string()))?;
        if let Some(put) = self.put {
            if put.len() != 2 || !put.is_subset(self.hand12()) {
                return Err(Error::Record(format!("put {put} is not two cards of the declarer's twelve")));
            }
        }
        if self.outcome.declarer_eyes.is_some_and(|e| e > 120) || self.outcome.declarer_tricks.is_some_and(|t| t > 10) {
            return Err(Error::Record("outcome out of range".into()));
        }
        Ok(())
    }

    pub fn hand12(&self) -> CardSet {
        self.deal.hand(self.declarer) | self.deal.skat
    }

    /// The declarer's playing hand.
    pub fn hand10(&self) -> CardSet {
        match self.put {
            Some(put) => self.hand12() - put,
            None => self.deal.hand(self.declarer),
        }
    }

    /// Cards out of play from the declarer's point of view.
    pub fn skat_after(&self) -> CardSet {
        self.put.unwrap_or(self.deal.skat)
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

pub fn write_header<W: Write>(w: &mut W) -> Result<()> {
    let h = Header {
        format: RECORD_FORMAT.into(),
        version: RECORD_VERSION,
    };
    writeln!(w, "{}", serde_json::to_string(&h)?)?;
    Ok(())
}

pub fn write_record<W: Write>(w: &mut W, r: &GameRecord) -> Result<()> {
    writeln!(w, "{}", serde_json::to_string(r)?)?;
    Ok(())
}

pub fn write_records<W: Write>(w: &mut W, records: &[GameRecord]) -> Result<()> {
    write_header(w)?;
    for r in records {
        write_record(w, r)?;
    }
    Ok(())
}

/// Iterate over the records of a JSONL stream. A bad header is an error
/// for the whole stream; a bad line yields an `Err` item and reading goes on.
pub fn read_records<R: BufRead>(reader: R) -> Result<impl Iterator<Item = Result<GameRecord>>> {
    let mut lines = reader.lines().enumerate().filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()));
    match lines.next() {
        None => return Err(Error::Record("empty record file: missing header".into())),
        Some((_, line)) => {
            let line = line?;
            let h: Header = serde_json::from_str(&line).map_err(|_| Error::Record(format!("bad header line: {line}")))?;
            if h.format != RECORD_FORMAT || h.version != RECORD_VERSION {
                return Err(Error::Record(format!("unsupported record format {} v{}", h.format, h.version)));
            }
        }
    }
    Ok(lines.map(|(n, line)| {
        let line = line?;
        let r: GameRecord = serde_json::from_str(&line).map_err(|e| Error::Record(format!("line {}: {e}", n + 1)))?;
        r.validate().map_err(|e| Error::Record(format!("line {}: {e}", n + 1)))?;
        Ok(r)
    }))
}

fn parse_column_line(line: &str) -> Result<GameRecord> {
    let f: Vec<&str> = line.split(';').map(str::trim).collect();
    if f.len() != 10 {
        return Err(Error::Record(format!("expected 10 fields, got {}", f.len())));
    }
    let hands = [f[0].parse()?, f[1].parse()?, f[2].parse()?];
    let deal = Deal::new(hands, f[3].parse()?)?;
    let declarer: Position = f[4].parse()?;
    let game: GameType = f[5].parse()?;
    let bid = f[6].parse().map_err(|_| Error::parse("bid", f[6]))?;
    let put = if f[7] == "-" { None } else { Some(f[7].parse()?) };
    let eyes = f[8].parse().map_err(|_| Error::parse("eyes", f[8]))?;
    let tricks = f[9].parse().map_err(|_| Error::parse("tricks", f[9]))?;
    let r = GameRecord {
        deal,
        bids: Vec::new(),
        bid,
        declarer,
        game,
        put,
        outcome: Outcome::for_game(game, eyes, tricks).into(),
        source: "columns".into(),
    };
    r.validate()?;
    Ok(r)
}

/// Convert column-format lines to JSONL. Returns (written, skipped).
pub fn convert_columns<R: BufRead, W: Write>(reader: R, w: &mut W) -> Result<(usize, usize)> {
    write_header(w)?;
    let (mut written, mut skipped) = (0, 0);
    for line in reader.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        match parse_column_line(t) {
            Ok(r) => {
                write_record(w, &r)?;
                written += 1;
            }
            Err(e) => {
                log::warn!("skipping column record: {e}");
                skipped += 1;
            }
        }
    }
    Ok((written, skipped))
}
