//! Hand-strength scorers, standing cards, winning parameters and the
//! soft-scoring feature vector.

mod standing;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use standing::StandingMode;
use standing::{suit_standing, SuitSplit};

use crate::cards::{plain_order, trump_order, trump_set, Card, CardSet, GameType, Position, Rank, Suit};
use crate::error::{Error, Result};
use crate::probmodel::ProbTables;
use crate::skatselect::GameContext;

fn require_trump_game(g: GameType) -> Result<()> {
    if g.is_null() {
        Err(Error::domain("null games have no hand-strength score"))
    } else {
        Ok(())
    }
}

fn jack(s: Suit) -> Card {
    Card::new(s, Rank::Jack)
}

/// Von Stegen point count. `bid` is the current bid, 0 before any bid.
pub fn von_stegen(hand: CardSet, g: GameType, bid: u32) -> Result<f64> {
    require_trump_game(g)?;
    let jacks = (hand & CardSet::JACKS).len();
    let mut v = jacks as f64;
    v += (hand & (CardSet::ACES | CardSet::TENS)).len() as f64;
    if !g.is_grand() {
        v += (hand & trump_set(g)).len() as f64;
        if !hand.contains(jack(Suit::Clubs)) && jacks > 2 {
            v += 0.5;
        }
    }
    let has = |s: Suit| hand.contains(jack(s));
    if has(Suit::Clubs) && has(Suit::Spades) {
        v += 0.5;
    }
    if has(Suit::Clubs) && has(Suit::Spades) && has(Suit::Hearts) {
        v += 1.0;
    }
    if jacks == 4 {
        v += 0.5;
    }
    if bid == 0 {
        v += 0.5;
    }
    Ok(v)
}

/// Length of the fully held run from the top of the trump order.
pub fn safe_tricks(trump_holding: CardSet, g: GameType) -> u32 {
    trump_order(g).iter().take_while(|&&c| trump_holding.contains(c)).count() as u32
}

/// Kinback's count. Suit patterns are exclusive: each suit scores at most
/// one of the listed shapes.
pub fn kinback(hand: CardSet, g: GameType, pos: Position) -> Result<f64> {
    require_trump_game(g)?;
    let fore = (pos == Position::Forehand) as u32 as f64;
    if g.is_grand() {
        return Ok(fore + (hand & CardSet::ACES).len() as f64 + (hand & CardSet::JACKS).len() as f64);
    }
    let st = safe_tricks(hand & trump_set(g), g) as f64;
    let mut kb = 0.0;
    for s in g.side_suits() {
        kb += kinback_suit(hand.suit(s) - CardSet::JACKS);
    }
    Ok(0.5 * fore + st + kb)
}

fn kinback_suit(h: CardSet) -> f64 {
    let ace = !(h & CardSet::ACES).is_empty();
    let ten = !(h & CardSet::TENS).is_empty();
    let king = !(h & CardSet::KINGS).is_empty();
    match (ace, ten, king) {
        (true, true, _) => 2.0,
        (true, false, true) => 1.5,
        (true, false, false) => 1.0,
        (false, true, true) => 1.0,
        // guarded ten or king: the honour plus at least two more cards
        (false, true, false) if h.len() >= 3 => 0.5,
        (false, false, true) if h.len() >= 3 => 0.5,
        _ => 0.0,
    }
}

/// Map a side suit onto minigame bits in strength order (bit 0 = ace).
fn suit_bits(cards: CardSet, s: Suit, g: GameType) -> u8 {
    plain_order(g)
        .iter()
        .filter(|&&r| r != Rank::Jack)
        .enumerate()
        .filter(|&(_, &r)| cards.contains(Card::new(s, r)))
        .fold(0u8, |m, (i, _)| m | 1 << i)
}

/// Per-suit standing tricks of a trump-game hand (index by `Suit::index`;
/// the trump suit reads 0). Cards in `out` are known to be out of play,
/// e.g. the declarer's own discards.
pub fn standing_cards_with(hand: CardSet, out: CardSet, g: GameType, mode: StandingMode) -> [f64; 4] {
    let mut res = [0.0; 4];
    if g.is_null() {
        return res;
    }
    let unseen = (32 - hand.len() - out.len()).min(20);
    for s in g.side_suits() {
        let suit = s.cards() - CardSet::JACKS;
        let split = SuitSplit {
            declarer: suit_bits(hand & suit, s, g),
            outstanding: suit_bits(suit - hand - out, s, g),
        };
        res[s.index()] = suit_standing(split, unseen, mode);
    }
    res
}

pub fn standing_cards(hand: CardSet, g: GameType, mode: StandingMode) -> [f64; 4] {
    standing_cards_with(hand, CardSet::EMPTY, g, mode)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JackGroup {
    None,
    One,
    /// Two jacks other than the club/spade pair.
    TwoOther,
    /// Club and spade jack, no others.
    TopPair,
    Three,
    Four,
}

impl JackGroup {
    pub const COUNT: usize = 6;

    pub fn of(hand: CardSet) -> JackGroup {
        let jacks = hand & CardSet::JACKS;
        match jacks.len() {
            0 => JackGroup::None,
            1 => JackGroup::One,
            2 if jacks.contains(jack(Suit::Clubs)) && jacks.contains(jack(Suit::Spades)) => JackGroup::TopPair,
            2 => JackGroup::TwoOther,
            3 => JackGroup::Three,
            _ => JackGroup::Four,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WinningParams {
    /// w1: side suits the hand is void in.
    pub free_suits: u8,
    /// w2: eyes in the skat, grouped.
    pub skat_eyes_group: u8,
    /// w3: bid, grouped.
    pub bid_group: u8,
    /// w4
    pub position: Position,
    /// w5
    pub trumps: u8,
    /// w6
    pub non_trumps: u8,
    /// w7
    pub jacks: JackGroup,
    /// w8: estimated tricks lost.
    pub lost_tricks: u8,
}

pub fn skat_eyes_group(eyes: u32) -> u8 {
    match eyes {
        0..=4 => 0,
        5..=10 => 1,
        11..=19 => 2,
        _ => 3,
    }
}

pub fn bid_group(bid: u32) -> u8 {
    match bid {
        0..=20 => 0,
        21..=27 => 1,
        28..=36 => 2,
        _ => 3,
    }
}

impl WinningParams {
    /// Size of the dense foreground key space.
    pub const KEY_SPACE: u32 = 4 * 4 * 4 * 3 * 12 * 11 * JackGroup::COUNT as u32 * 11;
    pub const BACKGROUND_KEY_SPACE: u32 = 12 * JackGroup::COUNT as u32 * 11;

    pub fn key(&self) -> u32 {
        let mut k = self.free_suits as u32;
        k = k * 4 + self.skat_eyes_group as u32;
        k = k * 4 + self.bid_group as u32;
        k = k * 3 + self.position.index() as u32;
        k = k * 12 + self.trumps as u32;
        k = k * 11 + self.non_trumps as u32;
        k = k * JackGroup::COUNT as u32 + self.jacks.index() as u32;
        k * 11 + self.lost_tricks as u32
    }

    /// Coarse key over (trumps, jacks, lost tricks).
    pub fn background_key(&self) -> u32 {
        (self.trumps as u32 * JackGroup::COUNT as u32 + self.jacks.index() as u32) * 11 + self.lost_tricks as u32
    }

    /// `background_key` of a foreground key without decoding the rest.
    pub fn background_of(key: u32) -> u32 {
        let lost = key % 11;
        let jacks = (key / 11) % JackGroup::COUNT as u32;
        let trumps = (key / (11 * JackGroup::COUNT as u32 * 11)) % 12;
        (trumps * JackGroup::COUNT as u32 + jacks) * 11 + lost
    }
}

struct GameOrders {
    trump: Vec<Card>,
    /// Side suits with their non-trump cards, highest first.
    side: Vec<(CardSet, Vec<Card>)>,
}

fn orders(g: GameType) -> &'static GameOrders {
    static ORDERS: OnceLock<Vec<GameOrders>> = OnceLock::new();
    let all = ORDERS.get_or_init(|| {
        GameType::ALL
            .iter()
            .map(|&g| GameOrders {
                trump: trump_order(g),
                side: g
                    .side_suits()
                    .map(|s| {
                        let order: Vec<Card> = plain_order(g)
                            .iter()
                            .filter(|&&r| r != Rank::Jack || g.is_null())
                            .map(|&r| Card::new(s, r))
                            .collect();
                        (order.iter().copied().collect(), order)
                    })
                    .collect(),
            })
            .collect()
    });
    &all[GameType::ALL.iter().position(|&x| x == g).expect("known game")]
}

/// Trump losers: top-of-order trumps (skipping discarded ones) missing from a
/// holding of that length. Side losers: up to three per suit, minus the top
/// run held.
fn lost_tricks(hand: CardSet, put: CardSet, g: GameType) -> u8 {
    let o = orders(g);
    let trumps = hand & trump_set(g);
    let mut lost = o
        .trump
        .iter()
        .filter(|c| !put.contains(**c))
        .take(trumps.len())
        .filter(|c| !trumps.contains(**c))
        .count();
    for (suit, order) in &o.side {
        let held = hand & *suit;
        let top_run = order.iter().filter(|c| !put.contains(**c)).take_while(|c| held.contains(**c)).count();
        let exposed = held.len().min(3);
        lost += exposed - top_run.min(exposed);
    }
    lost.min(10) as u8
}

pub fn winning_params(hand10: CardSet, put: CardSet, g: GameType, bid: u32, pos: Position) -> WinningParams {
    let trumps = hand10 & trump_set(g);
    let free_suits = orders(g).side.iter().filter(|(suit, _)| (hand10 & *suit).is_empty()).count();
    WinningParams {
        free_suits: free_suits.min(3) as u8,
        skat_eyes_group: skat_eyes_group(put.points()),
        bid_group: bid_group(bid),
        position: pos,
        trumps: trumps.len().min(11) as u8,
        non_trumps: (hand10.len() - trumps.len()).min(10) as u8,
        jacks: JackGroup::of(hand10),
        lost_tricks: lost_tricks(hand10, put, g),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub win_prob: f64,
    pub free_suits: f64,
    pub skat_eyes: f64,
    pub good_tens: f64,
    pub bad_tens: f64,
    pub certain_standing: f64,
    pub standing_with_retake: f64,
    pub standing_without_retake: f64,
    pub lead_suits: f64,
}

impl FeatureVector {
    pub const NAMES: [&'static str; 9] = [
        "win_prob",
        "free_suits",
        "skat_eyes",
        "good_tens",
        "bad_tens",
        "certain_standing",
        "standing_with_retake",
        "standing_without_retake",
        "lead_suits",
    ];

    pub fn as_array(&self) -> [f64; 9] {
        [
            self.win_prob,
            self.free_suits,
            self.skat_eyes,
            self.good_tens,
            self.bad_tens,
            self.certain_standing,
            self.standing_with_retake,
            self.standing_without_retake,
            self.lead_suits,
        ]
    }
}

/// Features of a put with the win probability supplied by the caller.
pub fn features_with(hand10: CardSet, put: CardSet, g: GameType, pos: Position, win_prob: f64) -> FeatureVector {
    let side: Vec<Suit> = g.side_suits().collect();
    let plain = |s: Suit| hand10 & s.cards() & !trump_set(g);
    let has = |h: CardSet, ranks: CardSet| !(h & ranks).is_empty();
    let mut fv = FeatureVector {
        win_prob,
        skat_eyes: put.points() as f64,
        ..FeatureVector::default()
    };
    let (mut good, mut bad, mut lead, mut free) = (0u32, 0u32, 0u32, 0u32);
    for &s in &side {
        let h = plain(s);
        let (a, t, k) = (has(h, CardSet::ACES), has(h, CardSet::TENS), has(h, CardSet::KINGS));
        free += h.is_empty() as u32;
        good += (a && t) as u32;
        bad += (!a && t && k) as u32;
        lead += (a || (t && k)) as u32;
    }
    fv.free_suits = free.min(3) as f64;
    fv.good_tens = good.min(3) as f64;
    if pos == Position::Rearhand {
        fv.bad_tens = bad.min(3) as f64;
    }
    fv.lead_suits = lead.min(4) as f64;
    if !g.is_null() {
        let sum = |m| standing_cards_with(hand10, put, g, m).iter().sum::<f64>();
        fv.certain_standing = sum(StandingMode::Certain);
        fv.standing_with_retake = sum(StandingMode::WithRetake);
        fv.standing_without_retake = sum(StandingMode::WithoutRetake);
    }
    fv
}

pub fn feature_vector(hand10: CardSet, put: CardSet, g: GameType, ctx: &GameContext, tables: &ProbTables) -> FeatureVector {
    let w = tables.win_probability(hand10, put, g, ctx.bid, ctx.position);
    features_with(hand10, put, g, ctx.position, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(s: &str) -> CardSet {
        s.parse().unwrap()
    }

    const HEARTS: GameType = GameType::Suit(Suit::Hearts);

    #[test]
    fn stegen_examples() {
        let h = cs("CJ SJ HA HT CA H9 H8 H7 S9 S8");
        assert_eq!(von_stegen(h, GameType::Grand, 0).unwrap(), 6.0);
        let weak = cs("C9 C8 C7 CQ CK S9 S8 S7 SQ SK");
        assert_eq!(von_stegen(weak, GameType::Suit(Suit::Diamonds), 0).unwrap(), 0.5);
        let jacks = cs("CJ SJ HJ DJ C9 C8 C7 S9 S8 S7");
        assert_eq!(von_stegen(jacks, GameType::Grand, 18).unwrap(), 6.0);
        assert!(von_stegen(h, GameType::Null, 0).is_err());
        // trump aces and tens count twice in suit games; no club jack, three jacks
        let suit = cs("SJ HJ DJ HA HT H7 C7 C8 S7 S8");
        assert_eq!(von_stegen(suit, HEARTS, 18).unwrap(), 3.0 + 2.0 + 6.0 + 0.5);
    }

    #[test]
    fn kinback_examples() {
        let g2 = cs("CJ SJ CA SA C7 C8 S7 S8 H7 H8");
        assert_eq!(kinback(g2, GameType::Grand, Position::Forehand).unwrap(), 5.0);
        let at = cs("SA ST C7 C8 C9 CQ D7 D8 D9 DQ");
        assert_eq!(kinback(at, HEARTS, Position::Rearhand).unwrap(), 2.0);
        let top = cs("CJ SJ HJ DJ HA HT HK HQ H9 H8");
        assert_eq!(kinback(top, HEARTS, Position::Forehand).unwrap(), 0.5 + 10.0);
        let three = cs("CJ SJ HJ H7 H8 H9 C7 C8 S7 D7");
        assert_eq!(kinback(three, HEARTS, Position::Forehand).unwrap(), 3.5);
        assert!(kinback(at, GameType::Null, Position::Forehand).is_err());
    }

    #[test]
    fn kinback_suit_patterns() {
        assert_eq!(kinback_suit(cs("SA SK")), 1.5);
        assert_eq!(kinback_suit(cs("SA S7")), 1.0);
        assert_eq!(kinback_suit(cs("ST SK")), 1.0);
        assert_eq!(kinback_suit(cs("ST S8 S7")), 0.5);
        assert_eq!(kinback_suit(cs("ST S7")), 0.0);
        assert_eq!(kinback_suit(cs("SK SQ S7")), 0.5);
        assert_eq!(kinback_suit(cs("SA ST SK SQ")), 2.0);
    }

    #[test]
    fn safe_tricks_examples() {
        assert_eq!(safe_tricks(cs("CJ SJ HJ"), HEARTS), 3);
        assert_eq!(safe_tricks(cs("SJ"), HEARTS), 0);
        assert_eq!(safe_tricks(cs("CJ SJ HJ DJ HA HT"), HEARTS), 6);
        assert_eq!(safe_tricks(cs("CJ SJ HJ DJ"), GameType::Grand), 4);
    }

    #[test]
    fn standing_examples() {
        let g = GameType::Grand;
        let ace = cs("SA CJ SJ HJ DJ C7 C8 C9 H7 H8");
        assert_eq!(standing_cards(ace, g, StandingMode::Certain)[Suit::Spades.index()], 1.0);
        let ten = cs("ST CJ SJ HJ DJ C7 C8 C9 H7 H8");
        assert_eq!(standing_cards(ten, g, StandingMode::Certain)[Suit::Spades.index()], 0.0);
        let at = cs("SA ST CJ SJ HJ DJ C7 C8 C9 H7");
        let v = standing_cards_with(at, cs("H8 H9"), g, StandingMode::WithRetake)[Suit::Spades.index()];
        assert!((v - 1.67).abs() < 0.01, "{v}");
        // the trump suit never scores
        let hearts = standing_cards(cs("HA HT HK CJ SJ HJ DJ C7 C8 C9"), HEARTS, StandingMode::Certain);
        assert_eq!(hearts[Suit::Hearts.index()], 0.0);
    }

    #[test]
    fn params() {
        let hand = cs("CJ SJ HA HT HK H7 CA CT C7 C8");
        let w = winning_params(hand, cs("SA ST"), GameType::Grand, 18, Position::Middlehand);
        assert_eq!(w.free_suits, 2);
        assert_eq!(w.skat_eyes_group, 3);
        assert_eq!(w.bid_group, 0);
        assert_eq!(w.trumps, 2);
        assert_eq!(w.non_trumps, 8);
        assert_eq!(w.jacks, JackGroup::TopPair);
        // hearts A T K then 7 exposed: 0 lost; clubs A T then 7: 1 lost
        assert_eq!(w.lost_tricks, 1);
        assert!(w.key() < WinningParams::KEY_SPACE);
        assert_eq!(WinningParams::background_of(w.key()), w.background_key());
        assert_eq!(skat_eyes_group(21), 3);
        let five = cs("CJ SJ HJ DJ HA HT C7 C8 S7 D7");
        assert_eq!(winning_params(five, cs("C9 S9"), GameType::Grand, 0, Position::Forehand).trumps, 4);
        assert_eq!(winning_params(five, cs("C9 S9"), HEARTS, 0, Position::Forehand).trumps, 6);
    }

    #[test]
    fn features() {
        let hand = cs("CA CT HA HT CJ SJ HJ DJ C7 H7");
        let fv = features_with(hand, cs("S7 D7"), GameType::Grand, Position::Forehand, 0.5);
        assert_eq!(fv.skat_eyes, 0.0);
        assert_eq!(fv.good_tens, 2.0);
        assert_eq!(fv.free_suits, 2.0);
        assert_eq!(fv.bad_tens, 0.0);
        let tk = cs("ST SK CJ SJ HJ DJ C7 H7 C8 H8");
        assert_eq!(features_with(tk, cs("S7 D7"), GameType::Grand, Position::Rearhand, 0.5).bad_tens, 1.0);
        assert_eq!(features_with(tk, cs("S7 D7"), GameType::Grand, Position::Forehand, 0.5).bad_tens, 0.0);
    }
}
