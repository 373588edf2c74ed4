//! Aggregation of simulation results into optimality-gap pivot tables.
//!
//! The canonical table has one column per (method, deployment) pair —
//! re-planned deployments sit next to their conventional siblings — and one
//! row per pivot value: the six demand patterns, the three coefficients of
//! variation, the four setup costs, the three penalty costs, or a single
//! all-instances row. Cells hold the mean percentage gap to the simulated
//! optimum over every matching result row.

use std::collections::HashMap;

use crate::instance::{PATTERN_NAMES};
use crate::io::{ResultRow, REPORT_HEADER};
use crate::method::Method;
use crate::sim::Deployment;
use crate::{Error, Result};

/// Grouping attribute for a gap table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pivot {
    Pattern,
    Cv,
    SetupCost,
    PenaltyCost,
    All,
}

impl Pivot {
    pub fn as_str(&self) -> &'static str {
        match self {
            Pivot::Pattern => "pattern",
            Pivot::Cv => "cv",
            Pivot::SetupCost => "setup_cost",
            Pivot::PenaltyCost => "penalty_cost",
            Pivot::All => "all",
        }
    }
}

impl std::fmt::Display for Pivot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Pivot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pattern" => Ok(Pivot::Pattern),
            "cv" => Ok(Pivot::Cv),
            "setup_cost" => Ok(Pivot::SetupCost),
            "penalty_cost" => Ok(Pivot::PenaltyCost),
            "all" => Ok(Pivot::All),
            other => Err(Error::InvalidInput(format!(
                "unknown pivot '{other}' (expected pattern, cv, setup_cost, penalty_cost, or all)"
            ))),
        }
    }
}

/// Column order of the gap table: each method's conventional deployment,
/// immediately followed by its re-planned deployment where one exists.
pub const GAP_COLUMNS: [(Method, Deployment); 8] = [
    (Method::Ask, Deployment::Conventional),
    (Method::Bol, Deployment::Conventional),
    (Method::Tar, Deployment::Conventional),
    (Method::Tar, Deployment::Replanning),
    (Method::Ros, Deployment::Conventional),
    (Method::Ros, Deployment::Replanning),
    (Method::SoxVar, Deployment::Conventional),
    (Method::SoxVar, Deployment::Replanning),
];

/// Short column label: the method name, with `-R` marking re-planning.
pub fn column_label(method: Method, deployment: Deployment) -> String {
    match deployment {
        Deployment::Conventional => method.to_string(),
        Deployment::Replanning => format!("{method}-R"),
    }
}

/// One aggregated row: the pivot value and a mean gap per column
/// (None when no result matched).
#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub value: String,
    pub gaps: [Option<f64>; GAP_COLUMNS.len()],
}

/// A pivoted gap table.
#[derive(Debug, Clone, PartialEq)]
pub struct GapTable {
    pub pivot: Pivot,
    pub rows: Vec<GapRow>,
}

/// Group result rows by the pivot and average `gap_pct` per column.
pub fn aggregate(rows: &[ResultRow], pivot: Pivot) -> Result<GapTable> {
    if rows.is_empty() {
        return Err(Error::InvalidInput(
            "results contain no rows to aggregate".into(),
        ));
    }
    let keys = pivot_values(rows, pivot);
    let mut table = Vec::with_capacity(keys.len());
    for key in keys {
        let mut gaps = [None; GAP_COLUMNS.len()];
        for (slot, &(method, deployment)) in GAP_COLUMNS.iter().enumerate() {
            let mut sum = 0.0;
            let mut count = 0usize;
            for row in rows {
                if row.method == method
                    && row.deployment == deployment
                    && pivot_value(row, pivot) == key
                {
                    sum += row.gap_pct;
                    count += 1;
                }
            }
            if count > 0 {
                gaps[slot] = Some(sum / count as f64);
            }
        }
        table.push(GapRow { value: key, gaps });
    }
    Ok(GapTable { pivot, rows: table })
}

fn pivot_value(row: &ResultRow, pivot: Pivot) -> String {
    match pivot {
        Pivot::Pattern => row.pattern.clone(),
        Pivot::Cv => row.cv.to_string(),
        Pivot::SetupCost => row.setup_cost.to_string(),
        Pivot::PenaltyCost => row.penalty_cost.to_string(),
        Pivot::All => "all".to_string(),
    }
}

/// Distinct pivot values in canonical order: patterns in bed order, numeric
/// pivots ascending, unknown patterns appended as encountered.
fn pivot_values(rows: &[ResultRow], pivot: Pivot) -> Vec<String> {
    match pivot {
        Pivot::All => vec!["all".to_string()],
        Pivot::Pattern => {
            let mut seen: Vec<String> = Vec::new();
            for row in rows {
                if !seen.contains(&row.pattern) {
                    seen.push(row.pattern.clone());
                }
            }
            let mut ordered: Vec<String> = PATTERN_NAMES
                .iter()
                .filter(|p| seen.iter().any(|s| s == *p))
                .map(|p| p.to_string())
                .collect();
            for s in seen {
                if !ordered.contains(&s) {
                    ordered.push(s);
                }
            }
            ordered
        }
        Pivot::Cv | Pivot::SetupCost | Pivot::PenaltyCost => {
            let mut values: Vec<f64> = Vec::new();
            for row in rows {
                let v = match pivot {
                    Pivot::Cv => row.cv,
                    Pivot::SetupCost => row.setup_cost,
                    _ => row.penalty_cost,
                };
                if !values.iter().any(|x| x.to_bits() == v.to_bits()) {
                    values.push(v);
                }
            }
            values.sort_by(f64::total_cmp);
            values.into_iter().map(|v| v.to_string()).collect()
        }
    }
}

/// Render a gap table as tab-separated text with the versioned header.
pub fn render(table: &GapTable) -> String {
    let mut out = String::new();
    out.push_str(REPORT_HEADER);
    out.push('\n');
    out.push_str("pivot\tvalue");
    for &(m, d) in &GAP_COLUMNS {
        out.push('\t');
        out.push_str(&column_label(m, d));
    }
    out.push('\n');
    for row in &table.rows {
        out.push_str(table.pivot.as_str());
        out.push('\t');
        out.push_str(&row.value);
        for gap in row.gaps {
            out.push('\t');
            match gap {
                Some(g) => out.push_str(&format!("{g:.2}")),
                None => out.push('-'),
            }
        }
        out.push('\n');
    }
    out
}

/// Five-number summary (min, lower quartile, median, upper quartile, max)
/// of per-result gaps for one table column.
pub type BoxplotRow = (String, [f64; 5]);

/// Boxplot statistics per column, over all matching result rows.
pub fn boxplot(rows: &[ResultRow]) -> Vec<BoxplotRow> {
    let mut grouped: HashMap<usize, Vec<f64>> = HashMap::new();
    for row in rows {
        if let Some(slot) = GAP_COLUMNS
            .iter()
            .position(|&(m, d)| m == row.method && d == row.deployment)
        {
            grouped.entry(slot).or_default().push(row.gap_pct);
        }
    }
    let mut out = Vec::new();
    for (slot, &(m, d)) in GAP_COLUMNS.iter().enumerate() {
        if let Some(mut gaps) = grouped.remove(&slot) {
            gaps.sort_by(f64::total_cmp);
            out.push((
                column_label(m, d),
                [
                    gaps[0],
                    quantile(&gaps, 0.25),
                    quantile(&gaps, 0.5),
                    quantile(&gaps, 0.75),
                    gaps[gaps.len() - 1],
                ],
            ));
        }
    }
    out
}

/// Linear-interpolation quantile of an ascending-sorted slice.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Render boxplot rows as a tab-separated block.
pub fn render_boxplot(rows: &[BoxplotRow]) -> String {
    let mut out = String::from("# lotlab boxplot v1\ncolumn\tmin\tq1\tmedian\tq3\tmax\n");
    for (label, [min, q1, med, q3, max]) in rows {
        out.push_str(&format!(
            "{label}\t{min:.3}\t{q1:.3}\t{med:.3}\t{q3:.3}\t{max:.3}\n"
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(
        pattern: &str,
        cv: f64,
        setup: f64,
        penalty: f64,
        method: Method,
        deployment: Deployment,
        gap: f64,
    ) -> ResultRow {
        ResultRow {
            instance: format!("{pattern}-cv{cv}-K{setup}-b{penalty}"),
            pattern: pattern.into(),
            cv,
            setup_cost: setup,
            penalty_cost: penalty,
            method,
            deployment,
            avg_cost: 1000.0 * (1.0 + gap / 100.0),
            ci_half_width: 1.0,
            gap_pct: gap,
            replications: 1000,
            precision_reached: true,
        }
    }

    #[test]
    fn all_pivot_averages_every_row_per_column() {
        let rows = vec![
            row("STA", 0.1, 250.0, 2.0, Method::Ask, Deployment::Conventional, 2.0),
            row("RAND", 0.2, 500.0, 5.0, Method::Ask, Deployment::Conventional, 4.0),
            row("STA", 0.1, 250.0, 2.0, Method::Tar, Deployment::Replanning, 0.5),
        ];
        let table = aggregate(&rows, Pivot::All).unwrap();
        assert_eq!(table.rows.len(), 1);
        let gaps = table.rows[0].gaps;
        assert_eq!(gaps[0], Some(3.0), "ask column averages 2 and 4");
        assert_eq!(gaps[3], Some(0.5), "tar-R column");
        assert_eq!(gaps[1], None, "no bol rows");
    }

    #[test]
    fn pattern_rows_follow_bed_order_not_input_order() {
        let rows = vec![
            row("SIN2", 0.1, 250.0, 2.0, Method::Ask, Deployment::Conventional, 1.0),
            row("STA", 0.1, 250.0, 2.0, Method::Ask, Deployment::Conventional, 2.0),
        ];
        let table = aggregate(&rows, Pivot::Pattern).unwrap();
        let values: Vec<&str> = table.rows.iter().map(|r| r.value.as_str()).collect();
        assert_eq!(values, vec!["STA", "SIN2"]);
    }

    #[test]
    fn numeric_pivots_sort_ascending() {
        let rows = vec![
            row("STA", 0.3, 2000.0, 10.0, Method::Ros, Deployment::Conventional, 3.0),
            row("STA", 0.1, 250.0, 2.0, Method::Ros, Deployment::Conventional, 1.0),
            row("STA", 0.2, 1000.0, 5.0, Method::Ros, Deployment::Conventional, 2.0),
        ];
        let table = aggregate(&rows, Pivot::Cv).unwrap();
        let values: Vec<&str> = table.rows.iter().map(|r| r.value.as_str()).collect();
        assert_eq!(values, vec!["0.1", "0.2", "0.3"]);
        let table = aggregate(&rows, Pivot::SetupCost).unwrap();
        let values: Vec<&str> = table.rows.iter().map(|r| r.value.as_str()).collect();
        assert_eq!(values, vec!["250", "1000", "2000"]);
    }

    #[test]
    fn empty_results_are_a_usage_error() {
        assert!(matches!(
            aggregate(&[], Pivot::All),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn render_emits_versioned_header_and_full_column_set() {
        let rows = vec![row(
            "STA", 0.1, 250.0, 2.0, Method::Ask, Deployment::Conventional, 2.0,
        )];
        let text = render(&aggregate(&rows, Pivot::All).unwrap());
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(REPORT_HEADER));
        let columns: Vec<&str> = lines.next().unwrap().split('\t').collect();
        assert_eq!(
            columns,
            vec!["pivot", "value", "ask", "bol", "tar", "tar-R", "ros", "ros-R", "soxvar", "soxvar-R"]
        );
        let cells: Vec<&str> = lines.next().unwrap().split('\t').collect();
        assert_eq!(cells[0], "all");
        assert_eq!(cells[2], "2.00");
        assert_eq!(cells[3], "-", "missing columns stay blank");
    }

    #[test]
    fn quartiles_interpolate_linearly() {
        let sorted = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&sorted, 0.0), 1.0);
        assert_eq!(quantile(&sorted, 0.5), 2.5);
        assert_eq!(quantile(&sorted, 1.0), 4.0);
        assert!((quantile(&sorted, 0.25) - 1.75).abs() < 1e-12);
    }

    #[test]
    fn boxplot_summarizes_each_column_present() {
        let rows = vec![
            row("STA", 0.1, 250.0, 2.0, Method::Ask, Deployment::Conventional, 1.0),
            row("RAND", 0.1, 250.0, 2.0, Method::Ask, Deployment::Conventional, 3.0),
        ];
        let stats = boxplot(&rows);
        assert_eq!(stats.len(), 1);
        let (label, [min, _, med, _, max]) = &stats[0];
        assert_eq!(label, "ask");
        assert_eq!((*min, *med, *max), (1.0, 2.0, 3.0));
    }
}
