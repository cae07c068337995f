//! Hard discard rules and the high-card theorem.

use serde::{Deserialize, Serialize};

use crate::cards::{plain_order, trump_set, Card, CardSet, GameType, Rank, Suit};

use super::SelectionSubtype;

/// Everything a rule needs to judge one put.
pub struct RuleInput {
    pub hand12: CardSet,
    pub game: GameType,
    pub subtype: SelectionSubtype,
}

impl RuleInput {
    fn plain(&self, s: Suit) -> CardSet {
        self.hand12 & s.cards() - trump_set(self.game)
    }

    fn side_suits(&self) -> impl Iterator<Item = Suit> + '_ {
        self.game.side_suits()
    }

    /// Tens that are the only card of their side suit.
    pub fn sole_tens(&self) -> CardSet {
        self.side_suits()
            .map(|s| self.plain(s))
            .filter(|h| h.len() == 1 && !(*h & CardSet::TENS).is_empty())
            .fold(CardSet::EMPTY, |a, h| a | h)
    }
}

pub struct Rule {
    pub id: &'static str,
    pub applies: fn(SelectionSubtype) -> bool,
    /// True when the put breaks the rule.
    pub rejects: fn(&RuleInput, CardSet) -> bool,
}

fn is_suit(st: SelectionSubtype) -> bool {
    matches!(st, SelectionSubtype::HighTrumpSuit | SelectionSubtype::LowTrumpSuit)
}

fn is_plain_grand(st: SelectionSubtype) -> bool {
    matches!(st, SelectionSubtype::StdGrand | SelectionSubtype::TwoJackGrand | SelectionSubtype::FourJackGrand)
}

fn standard(st: SelectionSubtype) -> bool {
    is_suit(st) || is_plain_grand(st)
}

const LOW: CardSet = CardSet::LOW;

fn card(s: Suit, r: Rank) -> Card {
    Card::new(s, r)
}

fn has(h: CardSet, ranks: CardSet) -> bool {
    !(h & ranks).is_empty()
}

/// Side suits whose holding in `rest` is exactly {10, K}.
fn bare_ten_king(inp: &RuleInput, rest: CardSet) -> bool {
    inp.side_suits().any(|s| {
        let h = rest & s.cards() - trump_set(inp.game);
        h == CardSet::from_iter([card(s, Rank::Ten), card(s, Rank::King)])
    })
}

/// The two put cards as (card, plain suit) when both are non-trump and of
/// different suits.
fn split_put(inp: &RuleInput, put: CardSet) -> Option<(Card, Card)> {
    let t = trump_set(inp.game);
    let mut it = put.iter();
    let (a, b) = (it.next()?, it.next()?);
    (!t.contains(a) && !t.contains(b) && a.suit() != b.suit()).then_some((a, b))
}

fn is_low(c: Card) -> bool {
    LOW.contains(c)
}

/// Rules in priority order: relaxation drops them from the end.
pub static RULES: &[Rule] = &[
    Rule {
        id: "no-trump-discard",
        applies: is_suit,
        rejects: |inp, put| has(put, trump_set(inp.game)),
    },
    Rule {
        id: "no-jack-discard",
        applies: is_plain_grand,
        rejects: |_, put| has(put, CardSet::JACKS),
    },
    Rule {
        id: "sole-ten",
        applies: |st| st != SelectionSubtype::NullLike,
        rejects: |inp, put| {
            let sole = inp.sole_tens();
            (1..=2).contains(&sole.len()) && !sole.is_subset(put)
        },
    },
    Rule {
        id: "no-ace-discard",
        applies: |st| st == SelectionSubtype::LowTrumpSuit,
        rejects: |inp, put| has(put, CardSet::ACES - trump_set(inp.game)),
    },
    Rule {
        id: "ace-over-ten",
        applies: |st| st == SelectionSubtype::HighCardGrand,
        rejects: |inp, put| {
            put.iter().any(|c| {
                let ace = card(c.suit(), Rank::Ace);
                c.rank() == Rank::Ten && !put.contains(ace) && inp.hand12.contains(ace)
            })
        },
    },
    Rule {
        id: "keep-ace-ten-pair",
        applies: |st| st == SelectionSubtype::HighCardGrand,
        rejects: |inp, put| {
            Suit::ALL.iter().any(|&s| {
                let h = inp.plain(s);
                put.contains(card(s, Rank::Ace))
                    && put.contains(card(s, Rank::Ten))
                    && h.len() == 3
                    && !h.contains(card(s, Rank::King))
            })
        },
    },
    Rule {
        id: "low-equivalence",
        applies: standard,
        rejects: |inp, put| {
            // put a low card while an equivalent lower one stays in hand
            put.iter().filter(|&c| is_low(c) && c.rank() != Rank::Seven).any(|c| {
                let order = plain_order(inp.game);
                let i = order.iter().position(|&r| r == c.rank()).unwrap();
                order[i + 1..]
                    .iter()
                    .map(|&r| card(c.suit(), r))
                    .take_while(|d| inp.hand12.contains(*d))
                    .any(|d| !put.contains(d))
            })
        },
    },
    Rule {
        id: "ten-low-with-sole-low",
        applies: standard,
        rejects: |inp, put| {
            let mut it = put.iter().filter(|c| !trump_set(inp.game).contains(*c));
            let (Some(a), Some(b)) = (it.next(), it.next()) else { return false };
            let ten_low = (a.rank() == Rank::Ten && is_low(b)) || (b.rank() == Rank::Ten && is_low(a));
            let rest = inp.hand12 - put;
            ten_low
                && inp.side_suits().any(|s| {
                    let h = rest & s.cards() - trump_set(inp.game);
                    h.len() == 1 && (h & LOW) == h
                })
        },
    },
    Rule {
        id: "king-low-keeps-ten-low",
        applies: standard,
        rejects: |inp, put| {
            let Some((a, b)) = split_put(inp, put) else { return false };
            let rest = inp.hand12 - put;
            [(a, b), (b, a)].iter().any(|&(k, n)| {
                k.rank() == Rank::King
                    && is_low(n)
                    && rest.contains(card(k.suit(), Rank::Ten))
                    && has(rest & k.suit().cards(), LOW)
            })
        },
    },
    Rule {
        id: "two-lows-keep-ten-king",
        applies: standard,
        rejects: |inp, put| {
            let Some((a, b)) = split_put(inp, put) else { return false };
            is_low(a) && is_low(b) && bare_ten_king(inp, inp.hand12 - put)
        },
    },
    Rule {
        id: "two-kings-keep-ten-low",
        applies: standard,
        rejects: |inp, put| {
            let Some((a, b)) = split_put(inp, put) else { return false };
            let rest = inp.hand12 - put;
            a.rank() == Rank::King
                && b.rank() == Rank::King
                && inp.side_suits().any(|s| {
                    let h = rest & s.cards() - trump_set(inp.game);
                    h.len() == 2 && h.contains(card(s, Rank::Ten)) && has(h, LOW)
                })
        },
    },
    Rule {
        id: "low-king-keeps-ten-king",
        applies: standard,
        rejects: |inp, put| {
            let Some((a, b)) = split_put(inp, put) else { return false };
            let lk = (is_low(a) && b.rank() == Rank::King) || (is_low(b) && a.rank() == Rank::King);
            lk && bare_ten_king(inp, inp.hand12 - put)
        },
    },
    Rule {
        id: "king-queen-keeps-ten-king",
        applies: standard,
        rejects: |inp, put| {
            let Some((a, b)) = split_put(inp, put) else { return false };
            let kq = matches!((a.rank(), b.rank()), (Rank::King, Rank::Queen) | (Rank::Queen, Rank::King));
            kq && bare_ten_king(inp, inp.hand12 - put)
        },
    },
];

pub fn rule(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id == id)
}

/// Certificate of the high-card theorem for one put.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Aces and tens heading their suit after the put.
    pub secured_high_cards: u32,
    /// Upper bound on tricks the opponents can take.
    pub lost_tricks: u32,
    /// Upper bound on eyes the opponents can collect.
    pub opponent_eyes: u32,
}

/// Grand only. Opponents win tricks with their jacks (at most one each) or
/// in a side suit once the declarer has run out of cards heading it; so the
/// tricks lost are bounded by outstanding jacks plus the declarer's side
/// cards below the top run of each suit. Those tricks hold at most the
/// opponents' best two cards each plus the declarer's losers. The declarer
/// must hold at least the top three jacks, so trumps are drawn at once.
pub fn certificate(hand10: CardSet, put: CardSet) -> Option<Certificate> {
    let jacks = hand10 & CardSet::JACKS;
    let top3 = CardSet::from_iter([Suit::Clubs, Suit::Spades, Suit::Hearts].map(|s| card(s, Rank::Jack)));
    if !top3.is_subset(jacks) {
        return None;
    }
    let order = plain_order(GameType::Grand);
    let mut lost = 4 - jacks.len() as u32;
    let mut high = 0;
    let mut loser_cards: Vec<u32> = Vec::new();
    for s in Suit::ALL {
        let held = hand10 & s.cards() - CardSet::JACKS;
        let live: Vec<Card> = order.iter().map(|&r| card(s, r)).filter(|c| !put.contains(*c)).collect();
        let run: Vec<Card> = live.iter().copied().take_while(|c| held.contains(*c)).collect();
        high += run.iter().filter(|c| matches!(c.rank(), Rank::Ace | Rank::Ten)).count() as u32;
        for c in held - CardSet::from_iter(run.iter().copied()) {
            lost += 1;
            loser_cards.push(c.points());
        }
    }
    let mut opp: Vec<u32> = (!(hand10 | put)).iter().map(|c| c.points()).collect();
    opp.sort_unstable_by(|a, b| b.cmp(a));
    let opponent_eyes = opp.iter().take(2 * lost as usize).sum::<u32>() + loser_cards.iter().sum::<u32>();
    (high >= lost && opponent_eyes <= 59).then_some(Certificate {
        secured_high_cards: high,
        lost_tricks: lost,
        opponent_eyes,
    })
}

/// The put satisfying the theorem with the fewest lost tricks (most eyes on
/// ties, then canonical order), if any.
pub fn high_card_theorem(hand12: CardSet) -> Option<(CardSet, Certificate)> {
    let cards: Vec<Card> = hand12.iter().collect();
    let mut best: Option<(CardSet, Certificate)> = None;
    for i in 0..cards.len() {
        for j in i + 1..cards.len() {
            let put = CardSet::from_iter([cards[i], cards[j]]);
            if let Some(c) = certificate(hand12 - put, put) {
                let better = match &best {
                    None => true,
                    Some((bp, bc)) => (std::cmp::Reverse(c.lost_tricks), put.points()) > (std::cmp::Reverse(bc.lost_tricks), bp.points()),
                };
                if better {
                    best = Some((put, c));
                }
            }
        }
    }
    best
}
