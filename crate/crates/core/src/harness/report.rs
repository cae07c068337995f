//! Tables for bench and replay results.

use super::bench::BenchReport;
use super::replay::CrossTab;
use super::table::Table;

pub fn bench_tables(r: &BenchReport) -> (Table, Table) {
    let mut policies = Table::new(["policy", "played", "win_rate", "seeger", "series_score"]);
    for s in &r.summaries {
        policies.row([
            s.policy.to_string(),
            s.played.to_string(),
            format!("{:.4}", s.win_rate),
            format!("{:.2}", s.seeger_score),
            format!("{:.2}", s.series_score),
        ]);
    }
    let mut pairs = Table::new(["better", "worse", "n", "mean_diff", "t", "p"]);
    for c in &r.comparisons {
        pairs.row([
            c.better.to_string(),
            c.worse.to_string(),
            c.test.n.to_string(),
            format!("{:.3}", c.test.mean_diff),
            format!("{:.3}", c.test.t),
            format!("{:.3e}", c.test.p),
        ]);
    }
    (policies, pairs)
}

pub fn bench_text(r: &BenchReport) -> String {
    let (policies, pairs) = bench_tables(r);
    format!(
        "deals {}  folds {} ({:.2}%)\n\n{}\n{}",
        r.deals,
        r.folds,
        100.0 * r.fold_rate(),
        policies.to_text(),
        pairs.to_text()
    )
}

pub fn bench_csv(r: &BenchReport) -> String {
    let (policies, pairs) = bench_tables(r);
    format!("{}\n{}", policies.to_csv(), pairs.to_csv())
}

pub fn crosstab_table(t: &CrossTab) -> Table {
    let mut table = Table::new(["recorded", "glassbox", "policy", "games"]);
    let wl = |b: bool| if b { "won" } else { "lost" };
    for i in (0..8).rev() {
        let (r, g, p) = (i & 4 != 0, i & 2 != 0, i & 1 != 0);
        table.row([wl(r), wl(g), wl(p), &t.cell(r, g, p).to_string()]);
    }
    table
}

pub fn crosstab_text(t: &CrossTab) -> String {
    format!(
        "{}\ngames {}  skipped {}\nwins: recorded {}  glassbox {}  policy {}\nseries score: recorded {:.2}  glassbox {:.2}  policy {:.2}\n",
        crosstab_table(t).to_text(),
        t.games,
        t.skipped,
        t.recorded_wins(),
        t.glassbox_wins(),
        t.policy_wins(),
        t.per_36(t.recorded_payoff),
        t.per_36(t.glassbox_payoff),
        t.per_36(t.policy_payoff),
    )
}

pub fn crosstab_csv(t: &CrossTab) -> String {
    crosstab_table(t).to_csv()
}
