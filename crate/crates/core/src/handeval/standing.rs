//! Suit minigames behind standing-card counts.
//!
//! A plain suit is played out with the declarer on lead every round. The
//! outstanding cards of the suit are split between the two opponents in
//! every possible way, weighted by how likely that split is when the
//! opponents' hands are a uniform draw from the unseen cards.
//!
//! * `Certain`: opponents who cannot follow simply discard; the count is the
//!   minimum over all splits (tricks the holding wins whatever the split).
//! * `WithRetake`: an opponent void in the suit ruffs; the declarer regains
//!   the lead after every lost trick. Expected tricks over splits.
//! * `WithoutRetake`: as above, but the minigame stops at the first lost trick.
//!
//! Under ruffing, a longer holding can score below a shorter one: the card
//! gained is one the opponents no longer hold, so they run void sooner. Each
//! mode therefore reports the best value over the holding's sub-holdings,
//! the cards left out counted as outstanding, which makes every count
//! monotone in the holding.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dealing::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandingMode {
    Certain,
    WithRetake,
    WithoutRetake,
}

/// Bits are cards of one suit in strength order, bit 0 strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct SuitSplit {
    pub declarer: u8,
    pub outstanding: u8,
}

fn minimax(d: u8, l: u8, r: u8, ruffs: bool, stop_on_loss: bool, memo: &mut HashMap<(u8, u8, u8), u8>) -> u8 {
    if d == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&(d, l, r)) {
        return v;
    }
    let mut best = 0;
    for di in bits(d) {
        let dcard = 1u8 << di;
        let mut worst = u8::MAX;
        // an empty side plays no suit card (discard or ruff)
        let lopts: Vec<u8> = if l == 0 { vec![0] } else { bits(l).map(|i| 1 << i).collect() };
        let ropts: Vec<u8> = if r == 0 { vec![0] } else { bits(r).map(|i| 1 << i).collect() };
        for &lc in &lopts {
            for &rc in &ropts {
                let ruffed = ruffs && (lc == 0 || rc == 0);
                // lower bit = stronger card
                let beaten = (lc != 0 && lc < dcard) || (rc != 0 && rc < dcard);
                let won = !ruffed && !beaten;
                let v = if !won && stop_on_loss {
                    0
                } else {
                    won as u8 + minimax(d & !dcard, l & !lc, r & !rc, ruffs, stop_on_loss, memo)
                };
                worst = worst.min(v);
            }
        }
        best = best.max(worst);
    }
    memo.insert((d, l, r), best);
    best
}

fn bits(x: u8) -> impl Iterator<Item = u32> {
    (0..8).filter(move |i| x & (1 << i) != 0)
}

type CacheKey = (u8, u8, usize, StandingMode);

thread_local! {
    static RAW: RefCell<HashMap<CacheKey, f64>> = RefCell::new(HashMap::new());
    static CLOSED: RefCell<HashMap<CacheKey, f64>> = RefCell::new(HashMap::new());
}

fn cached(cache: &'static std::thread::LocalKey<RefCell<HashMap<CacheKey, f64>>>, key: CacheKey, f: impl FnOnce() -> f64) -> f64 {
    if let Some(v) = cache.with(|c| c.borrow().get(&key).copied()) {
        return v;
    }
    let v = f();
    cache.with(|c| c.borrow_mut().insert(key, v));
    v
}

/// Tricks the declarer's suit holding takes in the given mode. `unseen` is the
/// number of cards the two opponents hold between them.
pub(crate) fn suit_standing(split: SuitSplit, unseen: usize, mode: StandingMode) -> f64 {
    let key = (split.declarer, split.outstanding, unseen, mode);
    cached(&CLOSED, key, || {
        let mut best = raw_standing(split, unseen, mode);
        for b in bits(split.declarer) {
            let fewer = SuitSplit {
                declarer: split.declarer & !(1 << b),
                outstanding: split.outstanding | 1 << b,
            };
            best = best.max(suit_standing(fewer, unseen, mode));
        }
        best
    })
}

fn raw_standing(split: SuitSplit, unseen: usize, mode: StandingMode) -> f64 {
    cached(&RAW, (split.declarer, split.outstanding, unseen, mode), || compute(split, unseen, mode))
}

fn compute(split: SuitSplit, unseen: usize, mode: StandingMode) -> f64 {
    let d = split.declarer;
    let o = split.outstanding;
    if d == 0 {
        return 0.0;
    }
    let out: Vec<u32> = bits(o).collect();
    let m = out.len();
    let left_size = unseen / 2;
    let (ruffs, stop) = match mode {
        StandingMode::Certain => (false, false),
        StandingMode::WithRetake => (true, false),
        StandingMode::WithoutRetake => (true, true),
    };
    let mut memo = HashMap::new();
    let total = binomial(unseen, left_size) as f64;
    let mut expected = 0.0;
    let mut minimum = u8::MAX;
    for assign in 0u32..(1 << m) {
        let k = assign.count_ones() as usize;
        let rest = unseen.saturating_sub(m);
        if k > left_size || m - k > unseen - left_size {
            continue;
        }
        let weight = binomial(rest, left_size - k) as f64 / total;
        if weight == 0.0 {
            continue;
        }
        let (mut l, mut r) = (0u8, 0u8);
        for (j, &bit) in out.iter().enumerate() {
            if assign & (1 << j) != 0 {
                l |= 1 << bit;
            } else {
                r |= 1 << bit;
            }
        }
        let v = minimax(d, l, r, ruffs, stop, &mut memo);
        minimum = minimum.min(v);
        expected += weight * v as f64;
    }
    match mode {
        StandingMode::Certain => minimum as f64,
        _ => expected,
    }
}
