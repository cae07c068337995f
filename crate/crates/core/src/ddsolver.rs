//! Open-card (double-dummy) solver.
//!
//! The declarer maximises card points taken (or, in null, avoids taking a
//! trick); both opponents minimise as one coalition. Search is alpha-beta over
//! single card plays with a transposition table at trick boundaries and
//! pruning of equivalent cards.
//!
//! Transposition entries are keyed by the canonical remaining position (three
//! hands, cards moved up over gone cards of equal points, plus the player on
//! lead). Slots are addressed by `splitmix64` of the folded key and verified
//! by a second 64-bit hash stored in the 16-byte entry.

use serde::{Deserialize, Serialize};

use crate::cards::{plain_order, trump_order, Card, CardSet, GameType, Position, Rank, Suit};
use crate::gamedef::Outcome;

/// A position in the card play. The skat is out of play; its points are
/// carried in `skat_eyes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayState {
    pub game: GameType,
    pub declarer: Position,
    pub hands: [CardSet; 3],
    /// Cards of the current trick in play order.
    pub trick: Vec<(Position, Card)>,
    pub leader: Position,
    /// Points the declarer has taken in tricks so far.
    pub declarer_eyes: u32,
    pub skat_eyes: u32,
    pub declarer_tricks: u32,
}

impl PlayState {
    /// Start of play with forehand leading. `declarer_hand` is the hand after discarding.
    pub fn new(game: GameType, declarer: Position, hands: [CardSet; 3], skat: CardSet) -> PlayState {
        PlayState {
            game,
            declarer,
            hands,
            trick: Vec::new(),
            leader: Position::Forehand,
            declarer_eyes: 0,
            skat_eyes: skat.points(),
            declarer_tricks: 0,
        }
    }

    pub fn to_move(&self) -> Position {
        Position::from_index(self.leader.index() + self.trick.len())
    }

    pub fn is_over(&self) -> bool {
        self.trick.is_empty() && self.hands.iter().all(|h| h.is_empty())
    }

    /// Cards not yet played: hands and the open trick.
    pub fn cards_in_play(&self) -> CardSet {
        let mut s = self.hands[0] | self.hands[1] | self.hands[2];
        for &(_, c) in &self.trick {
            s.insert(c);
        }
        s
    }

    /// Declarer total so far, skat included.
    pub fn declarer_total(&self) -> u32 {
        self.declarer_eyes + self.skat_eyes
    }

    /// Plays a legal card, completing the trick when it is the third.
    pub fn play(&mut self, card: Card) {
        let p = self.to_move();
        debug_assert!(legal_moves(self).contains(card), "{card} is not legal");
        self.hands[p.index()].remove(card);
        self.trick.push((p, card));
        if self.trick.len() == 3 {
            let plays = [self.trick[0], self.trick[1], self.trick[2]];
            let winner = trick_winner(&plays, self.game);
            if winner == self.declarer {
                self.declarer_eyes += plays.iter().map(|(_, c)| c.points()).sum::<u32>();
                self.declarer_tricks += 1;
            }
            self.leader = winner;
            self.trick.clear();
        }
    }

    /// Outcome at the end of play.
    pub fn outcome(&self) -> Outcome {
        Outcome::for_game(self.game, self.declarer_total(), self.declarer_tricks)
    }
}

/// The class a card follows: its plain suit, or the trump class.
fn card_class(c: Card, g: GameType) -> u8 {
    match g {
        GameType::Null => c.suit().index() as u8,
        GameType::Grand if c.is_jack() => TRUMP,
        GameType::Suit(s) if c.is_jack() || c.suit() == s => TRUMP,
        _ => c.suit().index() as u8,
    }
}

const TRUMP: u8 = 4;

pub fn legal_moves(s: &PlayState) -> CardSet {
    let hand = s.hands[s.to_move().index()];
    match s.trick.first() {
        None => hand,
        Some(&(_, lead)) => {
            let class = card_class(lead, s.game);
            let follow: CardSet = hand.iter().filter(|&c| card_class(c, s.game) == class).collect();
            if follow.is_empty() {
                hand
            } else {
                follow
            }
        }
    }
}

pub fn trick_winner(plays: &[(Position, Card); 3], game: GameType) -> Position {
    let t = Tables::get(game);
    let mut best = plays[0].1.index() as u8;
    let mut winner = plays[0].0;
    for &(p, c) in &plays[1..] {
        if t.beats(c.index() as u8, best) {
            best = c.index() as u8;
            winner = p;
        }
    }
    winner
}

/// Per-game lookup tables.
struct Tables {
    null: bool,
    class: [u8; 32],
    class_mask: [u32; 5],
    /// Higher is stronger, compared within a class only.
    strength: [u8; 32],
    /// Cards of each class, strongest first.
    order: [[u8; 11]; 5],
    order_len: [u8; 5],
    points: [u8; 32],
}

impl Tables {
    fn build(g: GameType) -> Tables {
        let mut t = Tables {
            null: g.is_null(),
            class: [0; 32],
            class_mask: [0; 5],
            strength: [0; 32],
            order: [[0; 11]; 5],
            order_len: [0; 5],
            points: [0; 32],
        };
        for c in Card::all() {
            let k = card_class(c, g);
            t.class[c.index()] = k;
            t.class_mask[k as usize] |= c.bit();
            t.points[c.index()] = c.points() as u8;
        }
        let push = |t: &mut Tables, k: usize, c: Card| {
            let n = t.order_len[k] as usize;
            t.order[k][n] = c.index() as u8;
            t.strength[c.index()] = (20 - n) as u8;
            t.order_len[k] += 1;
        };
        if !g.is_null() {
            for c in trump_order(g) {
                push(&mut t, TRUMP as usize, c);
            }
        }
        for s in Suit::ALL {
            if Some(s) == g.trump_suit() {
                continue;
            }
            for &r in plain_order(g) {
                push(&mut t, s.index(), Card::new(s, r));
            }
        }
        t
    }

    fn get(g: GameType) -> &'static Tables {
        use std::sync::OnceLock;
        static TABLES: OnceLock<[Tables; 6]> = OnceLock::new();
        let all = TABLES.get_or_init(|| GameType::ALL.map(Tables::build));
        &all[GameType::ALL.iter().position(|&x| x == g).unwrap()]
    }

    #[inline]
    fn points_of(&self, cards: u32) -> i32 {
        let jacks = Rank::Jack.cards().bits();
        (cards & CardSet::ACES.bits()).count_ones() as i32 * 11
            + (cards & Rank::Ten.cards().bits()).count_ones() as i32 * 10
            + (cards & Rank::King.cards().bits()).count_ones() as i32 * 4
            + (cards & Rank::Queen.cards().bits()).count_ones() as i32 * 3
            + (cards & jacks).count_ones() as i32 * 2
    }

    /// Hands with every card moved up over the gone cards directly above
    /// it that carry the same points (any points in null). Positions with
    /// equal canonical hands have equal values.
    fn canonical(&self, hands: [u32; 3], all: u32) -> [u32; 3] {
        let mut out = hands;
        let gone = !all;
        for k in 0..5 {
            if gone & self.class_mask[k] == 0 {
                continue;
            }
            let order = &self.order[k][..self.order_len[k] as usize];
            // strongest gone card of the current run with the points of the
            // next live card, tracked as we walk down
            let mut run_top = NO_MOVE;
            let mut run_pts = 0;
            for &c in order {
                let pts = if self.null { 0 } else { self.points[c as usize] };
                let bit = 1u32 << c;
                if gone & bit != 0 {
                    if run_top == NO_MOVE || run_pts != pts {
                        run_top = c;
                        run_pts = pts;
                    }
                    continue;
                }
                if run_top != NO_MOVE && run_pts == pts {
                    for h in &mut out {
                        if *h & bit != 0 {
                            *h = (*h & !bit) | 1 << run_top;
                        }
                    }
                }
                run_top = NO_MOVE;
            }
        }
        out
    }

    #[inline]
    fn beats(&self, c: u8, best: u8) -> bool {
        let (kc, kb) = (self.class[c as usize], self.class[best as usize]);
        if kc == kb {
            self.strength[c as usize] > self.strength[best as usize]
        } else {
            kc == TRUMP
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    pub transposition: bool,
    pub equivalence: bool,
    /// log2 of the transposition table slot count.
    pub table_bits: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            transposition: true,
            equivalence: true,
            table_bits: 20,
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Entry {
    /// Second hash of the position, to tell slot sharers apart.
    check: u64,
    generation: u32,
    lower: i8,
    upper: i8,
    best: u8,
}

#[derive(Clone, Copy)]
struct Node {
    hands: [u32; 3],
    trick: [u8; 3],
    trick_len: u8,
    leader: u8,
}

pub struct Solver {
    opts: SolverOptions,
    table: Vec<Entry>,
    generation: u32,
    nodes: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl Solver {
    pub fn new() -> Solver {
        Solver::with_options(SolverOptions::default())
    }

    pub fn with_options(opts: SolverOptions) -> Solver {
        let size = if opts.transposition { 1usize << opts.table_bits } else { 0 };
        Solver {
            opts,
            table: vec![Entry::default(); size],
            generation: 0,
            nodes: 0,
        }
    }

    /// Nodes visited since construction.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Final declarer total (skat included) under optimal play; for null,
    /// 1 if the declarer can avoid every trick and 0 otherwise.
    pub fn solve(&mut self, s: &PlayState) -> u32 {
        if s.game.is_null() {
            return self.null_result(s) as u32;
        }
        let (t, node, decl) = self.prepare(s);
        // Bisection with zero-window probes; fail-soft results tighten the
        // bracket and all probes share the table within one generation.
        let (mut lower, mut upper) = (0, 120);
        while lower < upper {
            let beta = (lower + upper + 1) / 2;
            let g = self.search(t, &mut node.clone(), decl, beta - 1, beta);
            if g >= beta {
                lower = g;
            } else {
                upper = g;
            }
        }
        let g = lower;
        s.declarer_total() + g as u32
    }

    /// Whether the declarer can force a won game: at least 61 points in
    /// trump games, no trick in null.
    pub fn declarer_wins(&mut self, s: &PlayState) -> bool {
        if s.game.is_null() {
            return self.null_result(s) == 1;
        }
        self.declarer_reaches(s, 61)
    }

    /// Whether the declarer can force a final total of at least `target`.
    pub fn declarer_reaches(&mut self, s: &PlayState, target: u32) -> bool {
        assert!(!s.game.is_null());
        let have = s.declarer_total() as i32;
        let need = target as i32 - have;
        if need <= 0 {
            return true;
        }
        let (t, node, decl) = self.prepare(s);
        self.search(t, &mut node.clone(), decl, need - 1, need) >= need
    }

    fn null_result(&mut self, s: &PlayState) -> i32 {
        if s.declarer_tricks > 0 {
            return 0;
        }
        let (t, node, decl) = self.prepare(s);
        self.search(t, &mut node.clone(), decl, 0, 1)
    }

    /// An optimal card for the player to move, with the resulting solve value.
    /// Ties go to the first card in canonical order.
    pub fn best_card(&mut self, s: &PlayState) -> (Card, u32) {
        let maximizing = s.to_move() == s.declarer;
        let mut best: Option<(Card, u32)> = None;
        for c in legal_moves(s) {
            let mut child = s.clone();
            child.play(c);
            let v = self.solve(&child);
            let better = match best {
                None => true,
                Some((_, bv)) => {
                    if maximizing {
                        v > bv
                    } else {
                        v < bv
                    }
                }
            };
            if better {
                best = Some((c, v));
            }
        }
        best.expect("no legal move in a finished game")
    }

    /// Optimal line of play from `s` to the end.
    pub fn principal_variation(&mut self, s: &PlayState) -> Vec<(Position, Card)> {
        let mut s = s.clone();
        let mut line = Vec::new();
        while !s.is_over() {
            let p = s.to_move();
            let (c, _) = self.best_card(&s);
            line.push((p, c));
            s.play(c);
        }
        line
    }

    fn prepare(&mut self, s: &PlayState) -> (&'static Tables, Node, u8) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.table.iter_mut().for_each(|e| *e = Entry::default());
            self.generation = 1;
        }
        let mut node = Node {
            hands: s.hands.map(|h| h.bits()),
            trick: [0; 3],
            trick_len: s.trick.len() as u8,
            leader: s.leader.index() as u8,
        };
        for (i, &(_, c)) in s.trick.iter().enumerate() {
            node.trick[i] = c.index() as u8;
        }
        (Tables::get(s.game), node, s.declarer.index() as u8)
    }

    fn probe(&self, key: u128) -> Option<Entry> {
        if self.table.is_empty() {
            return None;
        }
        let (slot, check) = self.hash(key);
        let e = self.table[slot];
        (e.generation == self.generation && e.check == check).then_some(e)
    }

    fn store(&mut self, key: u128, lower: i32, upper: i32, best: u8) {
        if self.table.is_empty() {
            return;
        }
        let (slot, check) = self.hash(key);
        self.table[slot] = Entry {
            check,
            generation: self.generation,
            lower: lower as i8,
            upper: upper as i8,
            best,
        };
    }

    #[inline]
    fn hash(&self, key: u128) -> (usize, u64) {
        let (lo, hi) = (key as u64, (key >> 64) as u64);
        let a = splitmix64(lo ^ splitmix64(hi));
        let b = splitmix64(hi.wrapping_add(splitmix64(lo ^ 0x5bd1_e995)));
        (a as usize & (self.table.len() - 1), b)
    }

    /// Future value (declarer points from here, or null win flag), fail-soft.
    fn search(&mut self, t: &Tables, n: &mut Node, decl: u8, alpha: i32, beta: i32) -> i32 {
        self.nodes += 1;
        if n.trick_len != 0 {
            return self.expand(t, n, decl, alpha, beta, NO_MOVE).0;
        }
        let all = n.hands[0] | n.hands[1] | n.hands[2];
        if all == 0 {
            return if t.null { 1 } else { 0 };
        }
        let mut lo = 0;
        let mut hi = if t.null {
            1
        } else {
            t.points_of(all)
        };
        let h = if self.opts.equivalence { t.canonical(n.hands, all) } else { n.hands };
        let key = h[0] as u128 | (h[1] as u128) << 32 | (h[2] as u128) << 64 | (n.leader as u128) << 96;
        let mut hint = NO_MOVE;
        if let Some(e) = self.probe(key) {
            lo = lo.max(e.lower as i32);
            hi = hi.min(e.upper as i32);
            hint = e.best;
        }
        if lo >= beta || lo == hi {
            return lo;
        }
        if hi <= alpha {
            return hi;
        }
        let a = alpha.max(lo);
        let b = beta.min(hi);
        let (v, best) = self.expand(t, n, decl, a, b, hint);
        if v <= a {
            hi = hi.min(v);
        } else if v >= b {
            lo = lo.max(v);
        } else {
            lo = v;
            hi = v;
        }
        self.store(key, lo, hi, best);
        v
    }

    /// Candidate moves for the player to move, best-looking first.
    fn ordered_moves(&self, t: &Tables, n: &Node, decl: u8, hint: u8, moves: &mut [u8; 10]) -> usize {
        let p = ((n.leader + n.trick_len) % 3) as usize;
        let hand = n.hands[p];
        let legal = if n.trick_len == 0 {
            hand
        } else {
            let follow = hand & t.class_mask[t.class[n.trick[0] as usize] as usize];
            if follow != 0 {
                follow
            } else {
                hand
            }
        };

        let mut count = 0;
        let mut others = (n.hands[0] | n.hands[1] | n.hands[2]) & !hand;
        for i in 0..n.trick_len as usize {
            others |= 1 << n.trick[i];
        }
        for k in [TRUMP, 0, 1, 2, 3] {
            if legal & t.class_mask[k as usize] == 0 {
                continue;
            }
            let mut run_points: Option<u8> = None;
            for &c in &t.order[k as usize][..t.order_len[k as usize] as usize] {
                let bit = 1u32 << c;
                if legal & bit != 0 {
                    let pts = t.points[c as usize];
                    if self.opts.equivalence && run_points == Some(pts) {
                        continue;
                    }
                    run_points = Some(pts);
                    moves[count] = c;
                    count += 1;
                } else if others & bit != 0 {
                    run_points = None;
                }
            }
        }
        if count <= 1 {
            return count;
        }

        let mut keys = [0i32; 10];
        let me_decl = p as u8 == decl;
        if t.null {
            self.null_keys(t, n, decl, me_decl, &moves[..count], &mut keys);
        } else if n.trick_len == 0 {
            // Lead: the top live card of a class first, trumps before suits.
            let alive = hand | others;
            for i in 0..count {
                let c = moves[i];
                let k = t.class[c as usize] as usize;
                let is_top = t.order[k][..t.order_len[k] as usize]
                    .iter()
                    .find(|&&x| alive & (1 << x) != 0)
                    == Some(&c);
                keys[i] = (is_top as i32) * 100 + t.strength[c as usize] as i32;
            }
        } else {
            let (best, winner) = current_winner(t, n);
            let partner_winning = (winner == decl) == me_decl;
            let last = n.trick_len == 2;
            for i in 0..count {
                let c = moves[i];
                let pts = t.points[c as usize] as i32;
                keys[i] = if t.beats(c, best) {
                    if last {
                        200 + pts
                    } else {
                        150 - t.strength[c as usize] as i32 + pts
                    }
                } else if partner_winning {
                    100 + pts
                } else {
                    50 - pts
                };
            }
        }
        for i in 0..count {
            if moves[i] == hint {
                keys[i] = i32::MAX;
            }
        }
        // insertion sort, descending key
        for i in 1..count {
            let (m, k) = (moves[i], keys[i]);
            let mut j = i;
            while j > 0 && keys[j - 1] < k {
                moves[j] = moves[j - 1];
                keys[j] = keys[j - 1];
                j -= 1;
            }
            moves[j] = m;
            keys[j] = k;
        }
        count
    }

    /// Null ordering: the declarer ducks with his highest safe card,
    /// opponents keep low to force him over.
    fn null_keys(&self, t: &Tables, n: &Node, decl: u8, me_decl: bool, moves: &[u8], keys: &mut [i32; 10]) {
        let decl_hand = n.hands[decl as usize];
        if n.trick_len == 0 {
            for (i, &c) in moves.iter().enumerate() {
                let k = t.class[c as usize] as usize;
                let strength = t.strength[c as usize] as i32;
                keys[i] = if me_decl {
                    -strength
                } else {
                    ((decl_hand & t.class_mask[k] != 0) as i32) * 100 - strength
                };
            }
            return;
        }
        let (best, winner) = current_winner(t, n);
        let decl_played = (1..=n.trick_len).any(|i| (n.leader + i - 1) % 3 == decl);
        for (i, &c) in moves.iter().enumerate() {
            let strength = t.strength[c as usize] as i32;
            let beats = t.beats(c, best);
            keys[i] = if me_decl {
                if beats {
                    -strength
                } else {
                    100 + strength
                }
            } else if decl_played && winner == decl {
                if beats {
                    -strength
                } else {
                    100 + strength
                }
            } else {
                -strength
            };
        }
    }

    fn expand(
        &mut self,
        t: &Tables,
        n: &mut Node,
        decl: u8,
        mut alpha: i32,
        mut beta: i32,
        hint: u8,
    ) -> (i32, u8) {
        let p = ((n.leader + n.trick_len) % 3) as usize;
        let maximizing = p as u8 == decl;
        let mut moves = [0u8; 10];
        let count = self.ordered_moves(t, n, decl, hint, &mut moves);

        let mut best = if maximizing { i32::MIN } else { i32::MAX };
        let mut best_move = NO_MOVE;
        for &c in &moves[..count] {
            n.hands[p] &= !(1 << c);
            n.trick[n.trick_len as usize] = c;
            n.trick_len += 1;
            let v = if n.trick_len == 3 {
                let saved = (n.trick, n.leader);
                let mut w = 0;
                for i in 1..3 {
                    if t.beats(n.trick[i], n.trick[w]) {
                        w = i;
                    }
                }
                let winner = (n.leader + w as u8) % 3;
                let v = if t.null {
                    if winner == decl {
                        0
                    } else {
                        n.trick_len = 0;
                        n.leader = winner;
                        self.search(t, n, decl, alpha, beta)
                    }
                } else {
                    let gained = if winner == decl {
                        n.trick.iter().map(|&x| t.points[x as usize] as i32).sum()
                    } else {
                        0
                    };
                    n.trick_len = 0;
                    n.leader = winner;
                    gained + self.search(t, n, decl, alpha - gained, beta - gained)
                };
                n.trick = saved.0;
                n.leader = saved.1;
                n.trick_len = 3;
                v
            } else {
                self.search(t, n, decl, alpha, beta)
            };
            n.trick_len -= 1;
            n.hands[p] |= 1 << c;

            let improved = if maximizing { v > best } else { v < best };
            if improved {
                best = v;
                best_move = c;
            }
            if maximizing {
                alpha = alpha.max(v);
            } else {
                beta = beta.min(v);
            }
            if alpha >= beta {
                break;
            }
        }
        (best, best_move)
    }
}

const NO_MOVE: u8 = 0xFF;

fn current_winner(t: &Tables, n: &Node) -> (u8, u8) {
    let mut best = n.trick[0];
    let mut off = 0;
    for i in 1..n.trick_len as usize {
        if t.beats(n.trick[i], best) {
            best = n.trick[i];
            off = i as u8;
        }
    }
    (best, (n.leader + off) % 3)
}

/// Convenience wrapper with a fresh solver.
pub fn solve(s: &PlayState) -> u32 {
    Solver::new().solve(s)
}

pub fn best_card(s: &PlayState) -> Card {
    Solver::new().best_card(s).0
}

pub fn is_trump(c: Card, g: GameType) -> bool {
    card_class(c, g) == TRUMP
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(s: &str) -> CardSet {
        s.parse().unwrap()
    }

    fn c(s: &str) -> Card {
        s.parse().unwrap()
    }

    fn state(game: GameType, hands: [&str; 3], leader: Position) -> PlayState {
        PlayState {
            game,
            declarer: Position::Forehand,
            hands: hands.map(cs),
            trick: vec![],
            leader,
            declarer_eyes: 0,
            skat_eyes: 0,
            declarer_tricks: 0,
        }
    }

    #[test]
    fn legal_moves_follow_class() {
        let mut s = state(GameType::Grand, ["SA CA", "S7 HJ", "D7 D8"], Position::Forehand);
        assert_eq!(legal_moves(&s), cs("SA CA"));
        s.play(c("SA"));
        assert_eq!(legal_moves(&s), cs("S7"));

        let mut s = state(GameType::Suit(Suit::Hearts), ["HA C7", "HJ C8", "D7 D8"], Position::Forehand);
        s.play(c("HA"));
        assert_eq!(legal_moves(&s), cs("HJ"));
        s.play(c("HJ"));
        assert_eq!(legal_moves(&s), cs("D7 D8"));
    }

    #[test]
    fn trick_winners() {
        let fore = Position::Forehand;
        let mid = Position::Middlehand;
        let rear = Position::Rearhand;
        let w = trick_winner(&[(fore, c("CA")), (mid, c("DJ")), (rear, c("C7"))], GameType::Grand);
        assert_eq!(w, mid);
        let w = trick_winner(&[(fore, c("CT")), (mid, c("CJ")), (rear, c("C7"))], GameType::Null);
        assert_eq!(w, mid);
        let w = trick_winner(
            &[(fore, c("D8")), (mid, c("DK")), (rear, c("SA"))],
            GameType::Suit(Suit::Hearts),
        );
        assert_eq!(w, mid);
        let w = trick_winner(
            &[(fore, c("D8")), (mid, c("DK")), (rear, c("H7"))],
            GameType::Suit(Suit::Hearts),
        );
        assert_eq!(w, rear);
    }

    #[test]
    fn single_trick_is_forced() {
        let s = state(GameType::Grand, ["CA", "CT", "C7"], Position::Forehand);
        assert_eq!(solve(&s), 21);
        let s = state(GameType::Grand, ["C7", "CT", "CA"], Position::Forehand);
        assert_eq!(solve(&s), 0);
    }

    #[test]
    fn holding_every_trump() {
        let s = state(
            GameType::Suit(Suit::Clubs),
            ["CJ SJ CA", "SA ST S7", "HA HT H7"],
            Position::Middlehand,
        );
        assert_eq!(solve(&s), 2 + 2 + 11 + 11 + 10 + 11 + 10);
    }

    #[test]
    fn null_declarer_avoids_tricks() {
        let mut s = state(GameType::Null, ["C7 S7", "C8 S8", "C9 S9"], Position::Forehand);
        assert_eq!(solve(&s), 1);
        s.hands = [cs("CA S7"), cs("C8 S8"), cs("C9 S9")];
        assert_eq!(solve(&s), 0);
    }

    #[test]
    fn best_card_is_consistent_with_solve() {
        let s = state(
            GameType::Grand,
            ["CJ CA CT S7", "SJ CK SA ST", "HJ C7 HA HT"],
            Position::Forehand,
        );
        let mut solver = Solver::new();
        let v = solver.solve(&s);
        let (card, cv) = solver.best_card(&s);
        assert_eq!(cv, v);
        let mut child = s.clone();
        child.play(card);
        assert_eq!(solver.solve(&child), v);
        let pv = solver.principal_variation(&s);
        assert_eq!(pv.len(), 12);
        let mut end = s.clone();
        for (_, c) in pv {
            end.play(c);
        }
        assert_eq!(end.declarer_total(), v);
    }

    #[test]
    fn forced_single_move() {
        let mut s = state(GameType::Grand, ["SA CA", "S7 HA", "D7 D8"], Position::Forehand);
        s.play(c("SA"));
        assert_eq!(best_card(&s), c("S7"));
    }
}
