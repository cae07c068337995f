//! Winning-probability tables.
//!
//! Trump games look up counts keyed by [`WinningParams`]: a foreground table
//! over the full key and a background table over (trumps, jacks, lost tricks).
//! Null games multiply per-suit ratios read from a [`NullSuitTable`].
//!
//! # Table files
//!
//! `ProbTables::save(dir)` writes `grand.tbl`, `suit.tbl` and `null.tbl`, all
//! UTF-8 text with `\n` line ends:
//!
//! ```text
//! #skat-table<TAB>1<TAB><kind><TAB><min_samples>
//! <key><TAB><wins><TAB><samples>      one line per nonempty entry
//! #end<TAB><entry count>
//! ```
//!
//! `kind` is `grand`, `suit` or `null`. Keys are decimal: the dense
//! foreground key of [`WinningParams::key`] for trump tables, the 8-bit suit
//! pattern (bit i = i-th card of the null order A K Q J 10 9 8 7) for null.
//! Entries are written in ascending key order. Background counts are not
//! stored; they are re-aggregated from the foreground on load. A missing
//! trailer, a count mismatch or any unparsable line fails the whole load.

use std::collections::{BTreeMap, HashMap};
use std::hash::{BuildHasherDefault, Hasher};
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::cards::{plain_order, Card, CardSet, GameType, Position, Suit};
use crate::error::{Error, Result};
use crate::handeval::{winning_params, WinningParams};
use crate::harness::record::GameRecord;

pub const DEFAULT_MIN_SAMPLES: u64 = 30;
pub const DEFAULT_PRIOR: f64 = 0.5;
const TABLE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub wins: u64,
    pub samples: u64,
}

impl Counts {
    fn add(&mut self, won: bool) {
        self.wins += won as u64;
        self.samples += 1;
    }

    fn merge(&mut self, o: Counts) {
        self.wins += o.wins;
        self.samples += o.samples;
    }

    pub fn ratio(&self) -> f64 {
        self.wins as f64 / self.samples as f64
    }
}

/// Keys are dense small integers; a multiplicative hash is plenty.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(8) ^ b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }

    fn write_u32(&mut self, k: u32) {
        self.0 = (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }
}

type KeyMap = HashMap<u32, Counts, BuildHasherDefault<KeyHasher>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Foreground,
    Background,
    Prior,
}

#[derive(Debug, Default)]
pub struct LookupStats {
    pub foreground: AtomicU64,
    pub background: AtomicU64,
    pub prior: AtomicU64,
}

impl LookupStats {
    pub fn snapshot(&self) -> [u64; 3] {
        [
            self.foreground.load(Ordering::Relaxed),
            self.background.load(Ordering::Relaxed),
            self.prior.load(Ordering::Relaxed),
        ]
    }
}

#[derive(Debug)]
pub struct ProbTable {
    foreground: KeyMap,
    background: KeyMap,
    pub min_samples: u64,
    pub prior: f64,
    pub stats: LookupStats,
}

impl Clone for ProbTable {
    fn clone(&self) -> Self {
        ProbTable {
            foreground: self.foreground.clone(),
            background: self.background.clone(),
            min_samples: self.min_samples,
            prior: self.prior,
            stats: LookupStats::default(),
        }
    }
}

impl Default for ProbTable {
    fn default() -> Self {
        ProbTable::new(DEFAULT_MIN_SAMPLES)
    }
}

impl PartialEq for ProbTable {
    fn eq(&self, o: &Self) -> bool {
        self.foreground == o.foreground && self.min_samples == o.min_samples
    }
}

impl ProbTable {
    pub fn new(min_samples: u64) -> ProbTable {
        ProbTable {
            foreground: KeyMap::default(),
            background: KeyMap::default(),
            min_samples,
            prior: DEFAULT_PRIOR,
            stats: LookupStats::default(),
        }
    }

    pub fn record(&mut self, k: &WinningParams, won: bool) {
        self.add_counts(k.key(), Counts { wins: won as u64, samples: 1 });
    }

    pub fn add_counts(&mut self, key: u32, c: Counts) {
        self.foreground.entry(key).or_default().merge(c);
        self.background.entry(WinningParams::background_of(key)).or_default().merge(c);
    }

    pub fn merge(&mut self, other: &ProbTable) {
        for (&k, &c) in &other.foreground {
            self.add_counts(k, c);
        }
    }

    pub fn foreground(&self, key: u32) -> Option<Counts> {
        self.foreground.get(&key).copied()
    }

    pub fn background(&self, key: u32) -> Option<Counts> {
        self.background.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.foreground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.foreground.is_empty()
    }

    pub fn total_samples(&self) -> u64 {
        self.foreground.values().map(|c| c.samples).sum()
    }

    pub fn lookup_detailed(&self, k: &WinningParams) -> (f64, Source) {
        let key = k.key();
        if let Some(c) = self.foreground.get(&key).filter(|c| c.samples >= self.min_samples) {
            self.stats.foreground.fetch_add(1, Ordering::Relaxed);
            return (c.ratio(), Source::Foreground);
        }
        if let Some(c) = self.background.get(&k.background_key()).filter(|c| c.samples >= self.min_samples) {
            self.stats.background.fetch_add(1, Ordering::Relaxed);
            return (c.ratio(), Source::Background);
        }
        self.stats.prior.fetch_add(1, Ordering::Relaxed);
        (self.prior, Source::Prior)
    }

    fn entries(&self) -> BTreeMap<u32, Counts> {
        self.foreground.iter().map(|(&k, &c)| (k, c)).collect()
    }
}

pub fn trump_win_probability(k: &WinningParams, t: &ProbTable) -> f64 {
    t.lookup_detailed(k).0
}

/// Per-suit null ratios: the win rate of null games holding a pattern in a
/// suit, relative to the win rate when void in that suit, clamped to [0,1].
/// Patterns with too few samples fall back to a structural rule.
#[derive(Clone, Debug, PartialEq)]
pub struct NullSuitTable {
    counts: Vec<Counts>,
    pub min_samples: u64,
}

impl Default for NullSuitTable {
    fn default() -> Self {
        NullSuitTable::new(DEFAULT_MIN_SAMPLES)
    }
}

/// Bit i set when the hand holds the i-th card of the null order in `s`.
pub fn null_pattern(hand: CardSet, s: Suit) -> u8 {
    plain_order(GameType::Null)
        .iter()
        .enumerate()
        .filter(|(_, &r)| hand.contains(Card::new(s, r)))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// Fallback for thin patterns. A null suit is safe when its i-th lowest card
/// is no higher than the (2i-1)-th lowest card of the suit (7, 7-9, 7-9-J,
/// ...); every position breaking that rule halves the ratio.
pub fn null_structural_ratio(pattern: u8) -> f64 {
    let mut held_from_bottom = 0;
    let mut unsafe_positions = 0;
    for low_rank in 0..8 {
        let bit = 7 - low_rank;
        if pattern & (1 << bit) != 0 {
            if low_rank > 2 * held_from_bottom {
                unsafe_positions += 1;
            }
            held_from_bottom += 1;
        }
    }
    0.5f64.powi(unsafe_positions)
}

impl NullSuitTable {
    pub fn new(min_samples: u64) -> NullSuitTable {
        NullSuitTable {
            counts: vec![Counts::default(); 256],
            min_samples,
        }
    }

    pub fn record(&mut self, hand10: CardSet, won: bool) {
        for s in Suit::ALL {
            self.counts[null_pattern(hand10, s) as usize].add(won);
        }
    }

    pub fn counts(&self, pattern: u8) -> Counts {
        self.counts[pattern as usize]
    }

    pub fn merge(&mut self, o: &NullSuitTable) {
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            a.merge(*b);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.populated() == 0
    }

    /// Patterns with at least one sample.
    pub fn populated(&self) -> usize {
        self.counts.iter().filter(|c| c.samples > 0).count()
    }

    fn baseline(&self) -> Option<f64> {
        let void = self.counts[0];
        if void.samples >= self.min_samples && void.wins > 0 {
            return Some(void.ratio());
        }
        // every record contributes four suits; the pooled rate stands in
        let all = self.counts.iter().fold(Counts::default(), |mut a, c| {
            a.merge(*c);
            a
        });
        (all.samples >= self.min_samples && all.wins > 0).then(|| all.ratio())
    }

    pub fn ratio(&self, pattern: u8) -> f64 {
        if pattern == 0 {
            return 1.0;
        }
        let c = self.counts[pattern as usize];
        match self.baseline() {
            Some(base) if c.samples >= self.min_samples => (c.ratio() / base).clamp(0.0, 1.0),
            _ => null_structural_ratio(pattern),
        }
    }
}

pub fn null_win_probability(hand: CardSet, t: &NullSuitTable) -> f64 {
    Suit::ALL.iter().map(|&s| t.ratio(null_pattern(hand, s))).product()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProbTables {
    pub grand: ProbTable,
    pub suit: ProbTable,
    pub null: NullSuitTable,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub used: u64,
    pub skipped: u64,
}

impl ProbTables {
    pub fn with_min_samples(min_samples: u64) -> ProbTables {
        ProbTables {
            grand: ProbTable::new(min_samples),
            suit: ProbTable::new(min_samples),
            null: NullSuitTable::new(min_samples),
        }
    }

    pub fn table(&self, g: GameType) -> Option<&ProbTable> {
        match g {
            GameType::Grand => Some(&self.grand),
            GameType::Suit(_) => Some(&self.suit),
            GameType::Null => None,
        }
    }

    /// Win probability of playing `g` with `hand10` after putting `put`.
    pub fn win_probability(&self, hand10: CardSet, put: CardSet, g: GameType, bid: u32, pos: Position) -> f64 {
        self.win_probability_detailed(hand10, put, g, bid, pos).0
    }

    pub fn win_probability_detailed(
        &self,
        hand10: CardSet,
        put: CardSet,
        g: GameType,
        bid: u32,
        pos: Position,
    ) -> (f64, Option<Source>) {
        match self.table(g) {
            None => (null_win_probability(hand10, &self.null), None),
            Some(t) => {
                let (p, src) = t.lookup_detailed(&winning_params(hand10, put, g, bid, pos));
                (p, Some(src))
            }
        }
    }

    pub fn add_record(&mut self, r: &GameRecord) {
        let hand10 = r.hand10();
        match self.table(r.game) {
            None => self.null.record(hand10, r.outcome.won),
            Some(_) => {
                let k = winning_params(hand10, r.skat_after(), r.game, r.bid, r.declarer);
                let t = if r.game.is_grand() { &mut self.grand } else { &mut self.suit };
                t.record(&k, r.outcome.won);
            }
        }
    }

    pub fn merge(&mut self, o: &ProbTables) {
        self.grand.merge(&o.grand);
        self.suit.merge(&o.suit);
        self.null.merge(&o.null);
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (kind, t) in [("grand", &self.grand), ("suit", &self.suit)] {
            fs::write(dir.join(format!("{kind}.tbl")), render(kind, t.min_samples, t.entries()))?;
        }
        let null: BTreeMap<u32, Counts> = (0u32..256)
            .map(|k| (k, self.null.counts[k as usize]))
            .filter(|(_, c)| c.samples > 0)
            .collect();
        fs::write(dir.join("null.tbl"), render("null", self.null.min_samples, null))?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<ProbTables> {
        let read = |kind: &str| -> Result<(u64, BTreeMap<u32, Counts>)> {
            let path = dir.join(format!("{kind}.tbl"));
            let text = fs::read_to_string(&path).map_err(|e| Error::TableFormat(format!("{}: {e}", path.display())))?;
            parse(kind, &text).map_err(|e| Error::TableFormat(format!("{}: {e}", path.display())))
        };
        let mut out = ProbTables::default();
        for kind in ["grand", "suit"] {
            let (min, entries) = read(kind)?;
            let t = if kind == "grand" { &mut out.grand } else { &mut out.suit };
            *t = ProbTable::new(min);
            for (k, c) in entries {
                if k >= WinningParams::KEY_SPACE {
                    return Err(Error::TableFormat(format!("{kind}: key {k} out of range")));
                }
                t.add_counts(k, c);
            }
        }
        let (min, entries) = read("null")?;
        out.null = NullSuitTable::new(min);
        for (k, c) in entries {
            if k > 255 {
                return Err(Error::TableFormat(format!("null: key {k} out of range")));
            }
            out.null.counts[k as usize] = c;
        }
        Ok(out)
    }
}

fn render(kind: &str, min_samples: u64, entries: BTreeMap<u32, Counts>) -> String {
    let mut s = format!("#skat-table\t{TABLE_VERSION}\t{kind}\t{min_samples}\n");
    for (k, c) in &entries {
        s.push_str(&format!("{k}\t{}\t{}\n", c.wins, c.samples));
    }
    s.push_str(&format!("#end\t{}\n", entries.len()));
    s
}

fn parse(kind: &str, text: &str) -> std::result::Result<(u64, BTreeMap<u32, Counts>), String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or("empty file")?.split('\t').collect();
    match header.as_slice() {
        ["#skat-table", v, k, _] if *v != TABLE_VERSION.to_string() => {
            return Err(format!("table version {v} (expected {TABLE_VERSION}) for {k}"))
        }
        ["#skat-table", _, k, _] if *k != kind => return Err(format!("table kind {k}, expected {kind}")),
        ["#skat-table", _, _, _] => {}
        _ => return Err("missing or malformed header".into()),
    }
    let min_samples = header[3].parse().map_err(|_| "bad min_samples")?;
    let mut entries = BTreeMap::new();
    for (n, line) in lines.enumerate() {
        let f: Vec<&str> = line.split('\t').collect();
        if f[0] == "#end" {
            let count: usize = f.get(1).and_then(|c| c.parse().ok()).ok_or("bad trailer")?;
            if count != entries.len() {
                return Err(format!("trailer says {count} entries, found {}", entries.len()));
            }
            return Ok((min_samples, entries));
        }
        let bad = || format!("line {}: malformed entry {line:?}", n + 2);
        if f.len() != 3 {
            return Err(bad());
        }
        let key: u32 = f[0].parse().map_err(|_| bad())?;
        let wins: u64 = f[1].parse().map_err(|_| bad())?;
        let samples: u64 = f[2].parse().map_err(|_| bad())?;
        if wins > samples || samples == 0 || entries.insert(key, Counts { wins, samples }).is_some() {
            return Err(bad());
        }
    }
    Err("truncated: no #end trailer".into())
}

/// Accumulate tables from a record stream; unreadable records are skipped
/// and counted.
pub fn build_tables<I>(records: I, min_samples: u64) -> (ProbTables, BuildReport)
where
    I: IntoIterator<Item = Result<GameRecord>>,
{
    let mut tables = ProbTables::with_min_samples(min_samples);
    let mut report = BuildReport::default();
    for r in records {
        match r.and_then(|r| r.validate().map(|_| r)) {
            Ok(r) => {
                tables.add_record(&r);
                report.used += 1;
            }
            Err(e) => {
                log::warn!("skipping record: {e}");
                report.skipped += 1;
            }
        }
    }
    (tables, report)
}
