//! Self-play fixtures shared by the slower tests, cached across runs under
//! the cargo target directory.

#![allow(dead_code)]

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;

use rand::seq::IndexedRandom;
use rand::Rng;
use skat_core::cards::{GameType, Position};
use skat_core::dealing::{random_deal, seeded_rng};
use skat_core::ddsolver::{legal_moves, PlayState};
use skat_core::harness::record::{read_records, write_records, GameRecord};
use skat_core::probmodel::ProbTables;

pub fn cache_dir() -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("skat-fixtures");
    std::fs::create_dir_all(&d).unwrap();
    d
}

/// Tables under `name`, built by `build` on first use.
pub fn cached_tables(name: &str, build: impl FnOnce() -> ProbTables) -> ProbTables {
    let dir = cache_dir().join(name);
    if let Ok(t) = ProbTables::load(&dir) {
        return t;
    }
    let t = build();
    let tmp = cache_dir().join(format!("{name}.partial"));
    let _ = std::fs::remove_dir_all(&tmp);
    t.save(&tmp).unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::rename(&tmp, &dir).unwrap();
    t
}

/// Records under `name`, generated by `build` on first use.
pub fn cached_records(name: &str, build: impl FnOnce() -> Vec<GameRecord>) -> Vec<GameRecord> {
    let path = cache_dir().join(format!("{name}.jsonl"));
    if let Ok(f) = File::open(&path) {
        if let Ok(it) = read_records(BufReader::new(f)) {
            if let Ok(v) = it.collect::<Result<Vec<_>, _>>() {
                return v;
            }
        }
    }
    let v = build();
    let tmp = path.with_extension("partial");
    write_records(&mut BufWriter::new(File::create(&tmp).unwrap()), &v).unwrap();
    std::fs::rename(&tmp, &path).unwrap();
    v
}

/// Exhaustive minimax over every legal card, no pruning, no tables.
pub fn brute_force(s: &PlayState) -> u32 {
    if s.is_over() {
        return if s.game.is_null() {
            (s.declarer_tricks == 0) as u32
        } else {
            s.declarer_total()
        };
    }
    if s.game.is_null() && s.declarer_tricks > 0 {
        return 0;
    }
    let values = legal_moves(s).iter().map(|c| {
        let mut child = s.clone();
        child.play(c);
        brute_force(&child)
    });
    if s.to_move() == s.declarer {
        values.max().unwrap()
    } else {
        values.min().unwrap()
    }
}

/// Random play from a fresh deal down to `tricks` tricks left, then up to two
/// more cards so that some states start mid-trick.
pub fn random_ending(seed: u64, game: GameType, tricks: usize) -> PlayState {
    let mut rng = seeded_rng(seed, 99);
    let deal = random_deal(seed);
    let declarer = Position::from_index(rng.random_range(0..3));
    let mut s = PlayState::new(game, declarer, deal.hands, deal.skat);
    let extra = rng.random_range(0..3);
    let target = 3 * tricks - extra;
    while s.cards_in_play().len() > target {
        let moves: Vec<_> = legal_moves(&s).iter().collect();
        s.play(*moves.choose(&mut rng).unwrap());
    }
    s
}


/// Self-play records: 50,000 to build tables from, then 10,000 held out.
pub const TRAIN: usize = 50_000;
pub const HELD_OUT: usize = 10_000;
pub const MIN_SAMPLES: u64 = 30;

/// Strongest-seat double-dummy self-play, played with tables bootstrapped
/// from 6,000 forced deals with random games.
pub fn selfplay_records() -> Vec<GameRecord> {
    use skat_core::harness::corpus::{bootstrap_tables, generate, CorpusConfig, CorpusMode};
    use skat_core::skatselect::{Engine, SelectConfig};
    cached_records("selfplay-60k", || {
        let config = SelectConfig::default();
        let boot = cached_tables("bootstrap-6k", || {
            let round = CorpusConfig { deals: 6000, seed: 9001, random_game_share: 1.0, ..Default::default() };
            bootstrap_tables(&config, &[round], MIN_SAMPLES)
        });
        let cfg = CorpusConfig { deals: (TRAIN + HELD_OUT) as u64, seed: 9002, mode: CorpusMode::Strongest, ..Default::default() };
        let v = generate(&Engine::new(boot, config), &cfg);
        assert_eq!(v.len(), TRAIN + HELD_OUT, "strongest-seat self-play never folds");
        v
    })
}

/// Tables from the first `TRAIN` self-play records.
pub fn selfplay_tables() -> ProbTables {
    cached_tables("selfplay-50k", || {
        let recs = selfplay_records();
        skat_core::probmodel::build_tables(recs[..TRAIN].iter().cloned().map(Ok), MIN_SAMPLES).0
    })
}
