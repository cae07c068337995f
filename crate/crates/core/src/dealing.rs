//! Deal generation.
//!
//! Deals are indexed bijectively by mixed-radix nested combination ranks:
//! forehand's 10 of 32, middlehand's 10 of the remaining 22, rearhand's 10 of
//! the remaining 12; the last two cards form the skat. Combinations are ranked
//! lexicographically over canonical card order.
//!
//! Random deals draw an index uniformly with a ChaCha8 generator seeded by
//! `seed_from_u64(seed)` and positioned on stream `stream` (`set_stream`), so
//! deal `i` of a run with seed `s` is the first draw of stream `i` and can be
//! reproduced by any worker without shared state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cards::{Card, CardSet, Position};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Deal {
    /// Indexed by `Position::index()`.
    pub hands: [CardSet; 3],
    pub skat: CardSet,
}

impl Deal {
    pub fn new(hands: [CardSet; 3], skat: CardSet) -> Result<Deal> {
        let deal = Deal { hands, skat };
        deal.validate()?;
        Ok(deal)
    }

    pub fn hand(&self, pos: Position) -> CardSet {
        self.hands[pos.index()]
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = CardSet::EMPTY;
        for (i, h) in self.hands.iter().enumerate() {
            if h.len() != 10 {
                return Err(Error::domain(format!("hand {i} has {} cards", h.len())));
            }
            if !seen.is_disjoint(*h) {
                return Err(Error::domain("hands overlap"));
            }
            seen |= *h;
        }
        if self.skat.len() != 2 || !seen.is_disjoint(self.skat) {
            return Err(Error::domain("skat must be two cards outside the hands"));
        }
        Ok(())
    }
}

const fn binomial_table() -> [[u64; 33]; 33] {
    let mut t = [[0u64; 33]; 33];
    let mut n = 0;
    while n <= 32 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIAL: [[u64; 33]; 33] = binomial_table();

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n || n > 32 {
        return 0;
    }
    BINOMIAL[n][k]
}

/// C(32,10)·C(22,10)·C(12,10).
pub const DEAL_COUNT: u64 = 64_512_240 * 646_646 * 66;

/// The `rank`-th k-subset of `0..n` in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut rank: u64) -> Result<Vec<usize>> {
    if rank >= binomial(n, k) {
        return Err(Error::domain(format!("rank {rank} out of range for C({n},{k})")));
    }
    let mut out = Vec::with_capacity(k);
    let mut x = 0;
    while out.len() < k {
        let left = k - out.len();
        let with_x = binomial(n - x - 1, left - 1);
        if rank < with_x {
            out.push(x);
        } else {
            rank -= with_x;
        }
        x += 1;
    }
    Ok(out)
}

/// Number of ordered partitions of `n` items into groups of `sizes` (any
/// remainder forms one more implicit group).
pub fn partition_count(n: usize, sizes: &[usize]) -> u64 {
    let mut left = n;
    let mut count = 1u64;
    for &s in sizes {
        count *= binomial(left, s);
        left -= s;
    }
    count
}

/// Unranks an ordered partition of `0..n`. Returns one group per entry in
/// `sizes` plus a final group with the leftover items (possibly empty).
pub fn unrank_partition(index: u64, n: usize, sizes: &[usize]) -> Result<Vec<Vec<usize>>> {
    if sizes.iter().sum::<usize>() > n {
        return Err(Error::domain("group sizes exceed item count"));
    }
    let total = partition_count(n, sizes);
    if index >= total {
        return Err(Error::domain(format!("partition index {index} not below {total}")));
    }
    let mut radices = Vec::with_capacity(sizes.len());
    let mut left = n;
    for &s in sizes {
        radices.push(binomial(left, s));
        left -= s;
    }
    // Mixed radix with the first group most significant.
    let mut digits = vec![0u64; sizes.len()];
    let mut rest = index;
    for i in (0..sizes.len()).rev() {
        digits[i] = rest % radices[i];
        rest /= radices[i];
    }

    let mut pool: Vec<usize> = (0..n).collect();
    let mut groups = Vec::with_capacity(sizes.len() + 1);
    for (i, &s) in sizes.iter().enumerate() {
        let picks = unrank_combination(pool.len(), s, digits[i])?;
        let group: Vec<usize> = picks.iter().map(|&p| pool[p]).collect();
        let mut keep = Vec::with_capacity(pool.len() - s);
        let mut pi = picks.iter().peekable();
        for (j, &item) in pool.iter().enumerate() {
            if pi.peek() == Some(&&j) {
                pi.next();
            } else {
                keep.push(item);
            }
        }
        pool = keep;
        groups.push(group);
    }
    groups.push(pool);
    Ok(groups)
}

pub fn deal_unrank(index: u64) -> Result<Deal> {
    let groups = unrank_partition(index, 32, &[10, 10, 10])?;
    let set = |g: &Vec<usize>| g.iter().map(|&i| Card::from_index(i)).collect::<CardSet>();
    Ok(Deal {
        hands: [set(&groups[0]), set(&groups[1]), set(&groups[2])],
        skat: set(&groups[3]),
    })
}

fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, x| acc.checked_mul(x))
}

/// Myrvold–Ruskey linear-time unranking, starting from the identity.
/// Step `m = n..1` swaps positions `m-1` and `r mod m`, then divides `r` by `m`.
pub fn mr_unrank(n: usize, mut r: u128) -> Result<Vec<usize>> {
    if let Some(f) = factorial(n) {
        if r >= f {
            return Err(Error::domain(format!("rank {r} not below {n}!")));
        }
    }
    let mut pi: Vec<usize> = (0..n).collect();
    for m in (1..=n).rev() {
        let j = (r % m as u128) as usize;
        pi.swap(m - 1, j);
        r /= m as u128;
    }
    Ok(pi)
}

/// ChaCha8 seeded from `seed`, on stream `stream`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_deal_index<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    rng.random_range(0..DEAL_COUNT)
}

pub fn random_deal(seed: u64) -> Deal {
    random_deal_on_stream(seed, 0)
}

pub fn random_deal_on_stream(seed: u64, stream: u64) -> Deal {
    let mut rng = seeded_rng(seed, stream);
    deal_unrank(random_deal_index(&mut rng)).expect("index drawn in range")
}

/// Probability that `k` uniform draws from `n` outcomes contain a repeat,
/// `1 - prod_{i<k} (n-i)/n`, summed in log space.
pub fn collision_probability_in(n: f64, k: u64) -> f64 {
    if k <= 1 {
        return 0.0;
    }
    if (k as f64) > n {
        return 1.0;
    }
    let kf = k as f64;
    // ln(1-p) ~ -k^2/2n; beyond this p rounds to 1.
    if kf * kf / (2.0 * n) > 800.0 {
        return 1.0;
    }
    let log_q = if k <= 1_000_000 {
        (1..k).map(|i| (-(i as f64) / n).ln_1p()).sum::<f64>()
    } else {
        // sum_{i<k} ln(1 - i/n) = -sum_m S_m / (m n^m), S_m = sum_{i<k} i^m.
        // Here k/n is tiny, so a handful of terms reach f64 precision.
        let s1 = kf * (kf - 1.0) / 2.0;
        let s2 = (kf - 1.0) * kf * (2.0 * kf - 1.0) / 6.0;
        let s3 = s1 * s1;
        let s4 = (kf - 1.0) * kf * (2.0 * kf - 1.0) * (3.0 * kf * kf - 3.0 * kf - 1.0) / 30.0;
        -(s1 / n + s2 / (2.0 * n * n) + s3 / (3.0 * n.powi(3)) + s4 / (4.0 * n.powi(4)))
    };
    -log_q.exp_m1()
}

pub fn collision_probability(k: u64) -> f64 {
    collision_probability_in(DEAL_COUNT as f64, k)
}

/// Smallest `k` with `collision_probability(k) >= p`.
pub fn games_for_collision_probability(p: f64) -> u64 {
    let (mut lo, mut hi) = (1u64, 1u64 << 40);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if collision_probability(mid) >= p {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}
