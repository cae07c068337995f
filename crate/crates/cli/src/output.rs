//! Rendering of service responses as aligned text, CSV or JSON.

use clap::ValueEnum;
use serde::Serialize;

use skat_api::*;
use skat_core::handeval::FeatureVector;
use skat_core::harness::report;
use skat_core::harness::table::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned columns; `codes` is accepted for deals.
    #[value(alias = "codes")]
    Text,
    Csv,
    Json,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("response serialises") + "\n"
}

fn render(t: &Table, f: Format) -> String {
    match f {
        Format::Csv => t.to_csv(),
        _ => t.to_text(),
    }
}

pub fn deals(r: &DealResponse, f: Format) -> String {
    if f == Format::Json {
        return json(r);
    }
    let mut t = Table::new(["number", "forehand", "middlehand", "rearhand", "skat"]);
    for d in &r.deals {
        let [a, b, c] = d.deal.hands.map(|h| h.to_string());
        t.row([d.number.to_string(), a, b, c, d.deal.skat.to_string()]);
    }
    render(&t, f)
}

pub fn select(r: &SelectResponse, f: Format, explain: bool, top: usize) -> String {
    if f == Format::Json {
        return json(r);
    }
    let mut headers: Vec<String> = ["rank", "put", "win_prob", "expected_cost", "soft_score", "filtered_by"]
        .map(String::from)
        .into();
    if explain {
        headers.extend(FeatureVector::NAMES.map(String::from));
        headers.push("rules".into());
    }
    let mut t = Table::new(headers);
    let n = if top == 0 { r.candidates.len() } else { top.min(r.candidates.len()) };
    for (i, c) in r.candidates.iter().take(n).enumerate() {
        let mut row = vec![
            (i + 1).to_string(),
            c.put.to_string(),
            format!("{:.4}", c.win_prob),
            format!("{:.2}", c.expected_cost),
            format!("{:.3}", c.soft_score),
            c.filtered_by.clone().unwrap_or_else(|| "-".into()),
        ];
        if explain {
            row.extend(c.features.as_array().map(|x| format!("{x:.3}")));
            row.push(if c.fired_rules.is_empty() { "-".into() } else { c.fired_rules.join(";") });
        }
        t.row(row);
    }
    match f {
        Format::Csv => t.to_csv(),
        _ => format!("subtype {}  value {}\n{}", r.subtype, r.value, t.to_text()),
    }
}

pub fn auction(r: &AuctionResponse, f: Format, folds: bool, declarations: bool) -> String {
    if f == Format::Json {
        return json(r);
    }
    let mut out = String::new();
    if folds {
        let mut t = Table::new(["deals", "folds", "fold_rate"]);
        t.row([r.deals.to_string(), r.folds.to_string(), format!("{:.4}", r.fold_rate())]);
        out += &render(&t, f);
    }
    if declarations {
        if !out.is_empty() {
            out.push('\n');
        }
        let mut t = Table::new(["number", "declarer", "bid", "game"]);
        for d in &r.declarations {
            let dash = || "-".to_string();
            t.row([
                d.number.to_string(),
                d.auction.declarer.map_or_else(dash, |p| p.to_string()),
                d.auction.bid.to_string(),
                d.game.map_or_else(dash, |g| g.to_string()),
            ]);
        }
        out += &render(&t, f);
    }
    out
}

pub fn solve(r: &SolveResponse, f: Format) -> String {
    if f == Format::Json {
        return json(r);
    }
    let mut t = Table::new(["ply", "seat", "card"]);
    for (i, (p, c)) in r.principal_variation.iter().enumerate() {
        t.row([(i + 1).to_string(), p.to_string(), c.to_string()]);
    }
    match f {
        Format::Csv => t.to_csv(),
        _ => format!("value {}  won {}\n{}", r.value, r.won, t.to_text()),
    }
}

pub fn table_build(r: &TableBuildResponse, f: Format) -> String {
    if f == Format::Json {
        return json(r);
    }
    let mut t = Table::new(["used", "skipped", "grand_keys", "suit_keys", "null_patterns"]);
    t.row([r.used, r.skipped, r.grand_keys as u64, r.suit_keys as u64, r.null_patterns as u64].map(|x| x.to_string()));
    render(&t, f)
}

pub fn bench(r: &BenchResponse, f: Format) -> String {
    match f {
        Format::Json => json(r),
        Format::Csv => report::bench_csv(r),
        Format::Text => report::bench_text(r),
    }
}

pub fn replay(r: &ReplayResponse, f: Format) -> String {
    match f {
        Format::Json => json(r),
        Format::Csv => report::crosstab_csv(r),
        Format::Text => report::crosstab_text(r),
    }
}
