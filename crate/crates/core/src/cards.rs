//! Cards, card sets, game types and seats.
//!
//! A card is an index in `0..32` laid out in canonical order: suits
//! clubs, spades, hearts, diamonds; within a suit A, 10, K, Q, J, 9, 8, 7.
//! A [`CardSet`] is a 32-bit mask over those indices, so iterating bits in
//! ascending order is iterating cards in canonical order.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suit {
    Clubs = 0,
    Spades = 1,
    Hearts = 2,
    Diamonds = 3,
}

impl Suit {
    pub const ALL: [Suit; 4] = [Suit::Clubs, Suit::Spades, Suit::Hearts, Suit::Diamonds];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Suit {
        Suit::ALL[i]
    }

    pub fn letter(self) -> char {
        ['C', 'S', 'H', 'D'][self.index()]
    }

    pub fn name(self) -> &'static str {
        ["clubs", "spades", "hearts", "diamonds"][self.index()]
    }

    /// All eight cards of the suit, jack included.
    pub fn cards(self) -> CardSet {
        CardSet(0xFF << (8 * self.index()))
    }
}

/// Ranks in canonical within-suit order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Ace = 0,
    Ten = 1,
    King = 2,
    Queen = 3,
    Jack = 4,
    Nine = 5,
    Eight = 6,
    Seven = 7,
}

impl Rank {
    pub const ALL: [Rank; 8] = [
        Rank::Ace,
        Rank::Ten,
        Rank::King,
        Rank::Queen,
        Rank::Jack,
        Rank::Nine,
        Rank::Eight,
        Rank::Seven,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Rank {
        Rank::ALL[i]
    }

    pub fn letter(self) -> char {
        ['A', 'T', 'K', 'Q', 'J', '9', '8', '7'][self.index()]
    }

    /// Card points (eyes) under the official Skat order.
    pub fn points(self) -> u32 {
        [11, 10, 4, 3, 2, 0, 0, 0][self.index()]
    }

    /// The union of this rank over all four suits.
    pub fn cards(self) -> CardSet {
        CardSet(0x0101_0101 << self.index())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Card(u8);

impl Card {
    pub fn new(suit: Suit, rank: Rank) -> Card {
        Card((suit.index() * 8 + rank.index()) as u8)
    }

    pub fn from_index(i: usize) -> Card {
        assert!(i < 32, "card index {i} out of range");
        Card(i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn suit(self) -> Suit {
        Suit::from_index(self.index() / 8)
    }

    pub fn rank(self) -> Rank {
        Rank::from_index(self.index() % 8)
    }

    pub fn bit(self) -> u32 {
        1 << self.0
    }

    pub fn points(self) -> u32 {
        self.rank().points()
    }

    pub fn is_jack(self) -> bool {
        self.rank() == Rank::Jack
    }

    /// Every card of the deck in canonical order.
    pub fn all() -> impl Iterator<Item = Card> {
        (0..32).map(Card::from_index)
    }
}

/// Points of a single card: A 11, 10 10, K 4, Q 3, J 2, others 0.
pub fn card_points(c: Card) -> u32 {
    c.points()
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.suit().letter(), self.rank().letter())
    }
}

impl fmt::Debug for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Card {
    type Err = Error;

    fn from_str(s: &str) -> Result<Card> {
        let mut chars = s.chars();
        let (Some(sc), Some(rc), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(Error::parse("card", s));
        };
        let suit = match sc.to_ascii_uppercase() {
            'C' => Suit::Clubs,
            'S' => Suit::Spades,
            'H' => Suit::Hearts,
            'D' => Suit::Diamonds,
            _ => return Err(Error::parse("card", s)),
        };
        let rank = match rc.to_ascii_uppercase() {
            'A' => Rank::Ace,
            'T' => Rank::Ten,
            'K' => Rank::King,
            'Q' => Rank::Queen,
            'J' => Rank::Jack,
            '9' => Rank::Nine,
            '8' => Rank::Eight,
            '7' => Rank::Seven,
            _ => return Err(Error::parse("card", s)),
        };
        Ok(Card::new(suit, rank))
    }
}

impl TryFrom<String> for Card {
    type Error = Error;
    fn try_from(s: String) -> Result<Card> {
        s.parse()
    }
}

impl From<Card> for String {
    fn from(c: Card) -> String {
        c.to_string()
    }
}

pub fn parse_card(text: &str) -> Result<Card> {
    text.parse()
}

pub fn format_card(c: Card) -> String {
    c.to_string()
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CardSet(pub u32);

impl CardSet {
    pub const EMPTY: CardSet = CardSet(0);
    pub const FULL: CardSet = CardSet(u32::MAX);
    pub const JACKS: CardSet = CardSet(0x1010_1010);
    pub const ACES: CardSet = CardSet(0x0101_0101);
    pub const TENS: CardSet = CardSet(0x0202_0202);
    pub const KINGS: CardSet = CardSet(0x0404_0404);
    pub const QUEENS: CardSet = CardSet(0x0808_0808);
    /// Nines, eights and sevens.
    pub const LOW: CardSet = CardSet(0xE0E0_E0E0);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, c: Card) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn insert(&mut self, c: Card) {
        self.0 |= c.bit();
    }

    pub fn remove(&mut self, c: Card) {
        self.0 &= !c.bit();
    }

    pub fn with(self, c: Card) -> CardSet {
        CardSet(self.0 | c.bit())
    }

    pub fn without(self, c: Card) -> CardSet {
        CardSet(self.0 & !c.bit())
    }

    pub fn complement(self) -> CardSet {
        CardSet(!self.0)
    }

    pub fn is_subset(self, other: CardSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: CardSet) -> bool {
        self.0 & other.0 == 0
    }

    /// First card in canonical order.
    pub fn first(self) -> Option<Card> {
        (self.0 != 0).then(|| Card(self.0.trailing_zeros() as u8))
    }

    pub fn points(self) -> u32 {
        self.iter().map(Card::points).sum()
    }

    pub fn iter(self) -> CardIter {
        CardIter(self.0)
    }

    pub fn suit(self, s: Suit) -> CardSet {
        self & s.cards()
    }
}

pub struct CardIter(u32);

impl Iterator for CardIter {
    type Item = Card;

    fn next(&mut self) -> Option<Card> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Card(i as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for CardIter {}

impl IntoIterator for CardSet {
    type Item = Card;
    type IntoIter = CardIter;
    fn into_iter(self) -> CardIter {
        self.iter()
    }
}

impl FromIterator<Card> for CardSet {
    fn from_iter<I: IntoIterator<Item = Card>>(iter: I) -> CardSet {
        CardSet(iter.into_iter().fold(0, |m, c| m | c.bit()))
    }
}

impl From<Card> for CardSet {
    fn from(c: Card) -> CardSet {
        CardSet(c.bit())
    }
}

impl BitOr for CardSet {
    type Output = CardSet;
    fn bitor(self, rhs: CardSet) -> CardSet {
        CardSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for CardSet {
    fn bitor_assign(&mut self, rhs: CardSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for CardSet {
    type Output = CardSet;
    fn bitand(self, rhs: CardSet) -> CardSet {
        CardSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for CardSet {
    fn bitand_assign(&mut self, rhs: CardSet) {
        self.0 &= rhs.0;
    }
}

impl Sub for CardSet {
    type Output = CardSet;
    fn sub(self, rhs: CardSet) -> CardSet {
        CardSet(self.0 & !rhs.0)
    }
}

impl Not for CardSet {
    type Output = CardSet;
    fn not(self) -> CardSet {
        self.complement()
    }
}

/// Space-separated codes in canonical order.
impl fmt::Display for CardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Accepts codes separated by whitespace or commas. Duplicates are an error.
impl FromStr for CardSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<CardSet> {
        let mut set = CardSet::EMPTY;
        for tok in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let c: Card = tok.parse()?;
            if set.contains(c) {
                return Err(Error::parse("card set (duplicate card)", tok));
            }
            set.insert(c);
        }
        Ok(set)
    }
}

impl TryFrom<String> for CardSet {
    type Error = Error;
    fn try_from(s: String) -> Result<CardSet> {
        s.parse()
    }
}

impl From<CardSet> for String {
    fn from(c: CardSet) -> String {
        c.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GameType {
    Grand,
    Null,
    Suit(Suit),
}

impl GameType {
    /// Grand, null, then the four suit games.
    pub const ALL: [GameType; 6] = [
        GameType::Grand,
        GameType::Null,
        GameType::Suit(Suit::Clubs),
        GameType::Suit(Suit::Spades),
        GameType::Suit(Suit::Hearts),
        GameType::Suit(Suit::Diamonds),
    ];

    pub const TRUMP_GAMES: [GameType; 5] = [
        GameType::Grand,
        GameType::Suit(Suit::Clubs),
        GameType::Suit(Suit::Spades),
        GameType::Suit(Suit::Hearts),
        GameType::Suit(Suit::Diamonds),
    ];

    pub fn is_null(self) -> bool {
        self == GameType::Null
    }

    pub fn is_grand(self) -> bool {
        self == GameType::Grand
    }

    pub fn trump_suit(self) -> Option<Suit> {
        match self {
            GameType::Suit(s) => Some(s),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GameType::Grand => "grand",
            GameType::Null => "null",
            GameType::Suit(s) => s.name(),
        }
    }

    /// Non-trump suits that can be played as plain suits in this game.
    pub fn side_suits(self) -> impl Iterator<Item = Suit> {
        Suit::ALL.into_iter().filter(move |&s| Some(s) != self.trump_suit())
    }
}

impl fmt::Display for GameType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GameType {
    type Err = Error;
    fn from_str(s: &str) -> Result<GameType> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "grand" | "g" => GameType::Grand,
            "null" | "n" => GameType::Null,
            "clubs" | "club" | "c" => GameType::Suit(Suit::Clubs),
            "spades" | "spade" | "s" => GameType::Suit(Suit::Spades),
            "hearts" | "heart" | "h" => GameType::Suit(Suit::Hearts),
            "diamonds" | "diamond" | "d" => GameType::Suit(Suit::Diamonds),
            _ => return Err(Error::parse("game type", s)),
        })
    }
}

impl TryFrom<String> for GameType {
    type Error = Error;
    fn try_from(s: String) -> Result<GameType> {
        s.parse()
    }
}

impl From<GameType> for String {
    fn from(g: GameType) -> String {
        g.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Position {
    Forehand = 0,
    Middlehand = 1,
    Rearhand = 2,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::Forehand, Position::Middlehand, Position::Rearhand];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Position {
        Position::ALL[i % 3]
    }

    /// Next seat clockwise.
    pub fn next(self) -> Position {
        Position::from_index(self.index() + 1)
    }

    pub fn name(self) -> &'static str {
        ["fore", "middle", "rear"][self.index()]
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Position {
    type Err = Error;
    fn from_str(s: &str) -> Result<Position> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "fore" | "forehand" | "fh" | "0" => Position::Forehand,
            "middle" | "middlehand" | "mh" | "1" => Position::Middlehand,
            "rear" | "rearhand" | "rh" | "2" => Position::Rearhand,
            _ => return Err(Error::parse("position", s)),
        })
    }
}

impl TryFrom<String> for Position {
    type Error = Error;
    fn try_from(s: String) -> Result<Position> {
        s.parse()
    }
}

impl From<Position> for String {
    fn from(p: Position) -> String {
        p.to_string()
    }
}

pub fn trump_set(g: GameType) -> CardSet {
    match g {
        GameType::Grand => CardSet::JACKS,
        GameType::Null => CardSet::EMPTY,
        GameType::Suit(s) => CardSet::JACKS | s.cards(),
    }
}

/// The cards of `s` that are not trump in `g`.
pub fn plain_suit_set(s: Suit, g: GameType) -> Result<CardSet> {
    match g {
        GameType::Null => Ok(s.cards()),
        GameType::Grand => Ok(s.cards() - CardSet::JACKS),
        GameType::Suit(t) if t == s => Err(Error::domain(format!(
            "{} is the trump suit in a {} game",
            s.name(),
            g
        ))),
        GameType::Suit(_) => Ok(s.cards() - CardSet::JACKS),
    }
}

/// Trumps from highest to lowest: jacks by suit, then A 10 K Q 9 8 7 of the trump suit.
pub fn trump_order(g: GameType) -> Vec<Card> {
    let mut order: Vec<Card> = Suit::ALL.iter().map(|&s| Card::new(s, Rank::Jack)).collect();
    if let GameType::Suit(s) = g {
        order.extend(
            [Rank::Ace, Rank::Ten, Rank::King, Rank::Queen, Rank::Nine, Rank::Eight, Rank::Seven]
                .iter()
                .map(|&r| Card::new(s, r)),
        );
    } else if g.is_null() {
        order.clear();
    }
    order
}

/// Plain-suit order from highest to lowest; the jack sits between queen and nine in null.
pub fn plain_order(g: GameType) -> &'static [Rank] {
    if g.is_null() {
        &[
            Rank::Ace,
            Rank::King,
            Rank::Queen,
            Rank::Jack,
            Rank::Ten,
            Rank::Nine,
            Rank::Eight,
            Rank::Seven,
        ]
    } else {
        &[Rank::Ace, Rank::Ten, Rank::King, Rank::Queen, Rank::Nine, Rank::Eight, Rank::Seven]
    }
}
