//! Result tables as CSV, Markdown or JSON.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::metrics::Metrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "md" | "markdown" => Ok(Self::Markdown),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown report format {s:?}")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Markdown => "md",
            Self::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    /// Header of the first column, e.g. `optimizer` or `class`.
    pub label_column: String,
    pub rows: Vec<Row>,
    /// Adds the mean iteration count column.
    pub show_iterations: bool,
    /// Adds the mean location error columns.
    pub show_location: bool,
}

#[derive(Clone, Copy)]
enum Col {
    NF,
    Pi,
    NS,
    Pi100,
    Tau,
    NI,
    Delta,
    DeltaC,
    DeltaX,
    DeltaCX,
    Failures,
}

impl Col {
    fn ascii(self) -> &'static str {
        match self {
            Col::NF => "N_f",
            Col::Pi => "Pi",
            Col::NS => "N_s",
            Col::Pi100 => "Pi_100",
            Col::Tau => "tau",
            Col::NI => "N_i",
            Col::Delta => "Delta",
            Col::DeltaC => "Delta_c",
            Col::DeltaX => "Delta_x",
            Col::DeltaCX => "Delta_c_x",
            Col::Failures => "failures",
        }
    }

    fn pretty(self) -> &'static str {
        match self {
            Col::NF => "N_f",
            Col::Pi => "Π",
            Col::NS => "N_s",
            Col::Pi100 => "Π₁₀₀",
            Col::Tau => "τ",
            Col::NI => "N_i",
            Col::Delta => "Δ",
            Col::DeltaC => "Δ_c",
            Col::DeltaX => "Δx",
            Col::DeltaCX => "Δ_c x",
            Col::Failures => "failures",
        }
    }

    fn value(self, m: &Metrics) -> Option<f64> {
        match self {
            Col::NF => Some(m.n_f),
            Col::Pi => Some(m.pi),
            Col::NS => Some(m.n_s),
            Col::Pi100 => Some(m.pi_100),
            Col::Tau => m.tau,
            Col::NI => Some(m.n_i),
            Col::Delta => Some(m.delta),
            Col::DeltaC => m.delta_c,
            Col::DeltaX => Some(m.delta_x),
            Col::DeltaCX => m.delta_c_x,
            Col::Failures => Some(m.failures as f64),
        }
    }

    /// Rounded display used in Markdown tables.
    fn pretty_value(self, v: f64) -> String {
        if v.is_infinite() {
            return "∞".into();
        }
        match self {
            Col::NF | Col::NS | Col::NI => format!("{v:.1}"),
            Col::Pi | Col::Pi100 => format!("{v:.2}"),
            Col::Tau => format!("{v:.4}"),
            Col::Failures => format!("{v}"),
            Col::Delta | Col::DeltaC | Col::DeltaX | Col::DeltaCX => format!("{v:.1e}"),
        }
    }
}

impl Table {
    fn columns(&self) -> Vec<Col> {
        let mut cols = vec![Col::NF, Col::Pi, Col::NS, Col::Pi100, Col::Tau];
        if self.show_iterations {
            cols.push(Col::NI);
        }
        cols.extend([Col::Delta, Col::DeltaC]);
        if self.show_location {
            cols.extend([Col::DeltaX, Col::DeltaCX]);
        }
        if self.rows.iter().any(|r| r.metrics.failures > 0) {
            cols.push(Col::Failures);
        }
        cols
    }

    /// Column headers, label column first.
    pub fn headers(&self) -> Vec<String> {
        std::iter::once(self.label_column.clone()).chain(self.columns().iter().map(|c| c.ascii().to_string())).collect()
    }
}

fn csv(table: &Table) -> String {
    let cols = table.columns();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(table.headers()).expect("in-memory write");
    for row in &table.rows {
        let fields = cols.iter().map(|c| c.value(&row.metrics).map(|v| format!("{v:?}")).unwrap_or_default());
        w.write_record(std::iter::once(row.label.clone()).chain(fields)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn markdown(table: &Table) -> String {
    let cols = table.columns();
    let mut out = format!("| {} |", table.label_column);
    for c in &cols {
        out.push_str(&format!(" {} |", c.pretty()));
    }
    out.push_str("\n|---|");
    out.push_str(&"---:|".repeat(cols.len()));
    out.push('\n');
    for row in &table.rows {
        out.push_str(&format!("| {} |", row.label));
        for c in &cols {
            let cell = c.value(&row.metrics).map(|v| c.pretty_value(v)).unwrap_or_default();
            out.push_str(&format!(" {cell} |"));
        }
        out.push('\n');
    }
    out
}

fn json(table: &Table) -> String {
    let cols = table.columns();
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            obj.insert(table.label_column.clone(), row.label.clone().into());
            for c in &cols {
                obj.insert(c.ascii().into(), c.value(&row.metrics).into());
            }
            obj.into()
        })
        .collect();
    let doc = serde_json::json!({ "title": table.title, "rows": rows });
    serde_json::to_string_pretty(&doc).expect("serializable table") + "\n"
}

/// Renders `table`. Undefined cells are empty (`null` in JSON); an infinite
/// `N_s` is `inf` in CSV and `null` in JSON.
pub fn emit_report(table: &Table, format: Format) -> String {
    assert!(!table.rows.is_empty(), "cannot report an empty table");
    match format {
        Format::Csv => csv(table),
        Format::Markdown => markdown(table),
        Format::Json => json(table),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::metrics::{pi_100, runs_per_success};

    fn metrics(n_f: f64, pi: f64) -> Metrics {
        Metrics {
            n_f,
            pi,
            n_s: runs_per_success(n_f, pi),
            pi_100: pi_100(n_f, pi),
            delta: 2.5e-3,
            delta_c: (pi > 0.0).then_some(1.4e-5),
            n_i: 12.0,
            tau: None,
            delta_x: 0.1,
            delta_c_x: (pi > 0.0).then_some(0.01),
            runs: 100,
            failures: 0,
        }
    }

    fn table(rows: &[(&str, f64, f64)]) -> Table {
        Table {
            title: "all".into(),
            label_column: "optimizer".into(),
            rows: rows.iter().map(|&(l, n, p)| Row { label: l.into(), metrics: metrics(n, p) }).collect(),
            show_iterations: false,
            show_location: false,
        }
    }

    #[test]
    fn one_row_gives_header_and_one_line() {
        let t = table(&[("gaussflow", 149.8, 0.94)]);
        for f in [Format::Csv, Format::Markdown] {
            let text = emit_report(&t, f);
            let lines: Vec<_> = text.lines().filter(|l| !l.starts_with("|---")).collect();
            assert_eq!(lines.len(), 2, "{f}: {text}");
        }
    }

    #[test]
    fn overview_layout_has_seven_metric_columns() {
        let t = table(&[
            ("gaussflow", 149.8, 0.94),
            ("NelderMead", 1650.0, 0.62),
            ("RandomSearch", 2000.0, 0.8),
            ("DifferentialEvolution", 3900.0, 0.96),
            ("SimulatedAnnealing", 2000.0, 0.7),
        ]);
        let md = emit_report(&t, Format::Markdown);
        let lines: Vec<_> = md.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "| optimizer | N_f | Π | N_s | Π₁₀₀ | τ | Δ | Δ_c |");
        for l in &lines[2..] {
            assert_eq!(l.matches('|').count(), 9, "{l}");
        }
        assert!(lines[2].starts_with("| gaussflow | 149.8 | 0.94 | 159.4 | 0.85 |  | 2.5e-3 | 1.4e-5 |"), "{}", lines[2]);
    }

    #[test]
    fn optional_columns() {
        let mut t = table(&[("a", 10.0, 0.0)]);
        t.show_iterations = true;
        t.show_location = true;
        t.rows[0].metrics.failures = 2;
        assert_eq!(
            t.headers(),
            ["optimizer", "N_f", "Pi", "N_s", "Pi_100", "tau", "N_i", "Delta", "Delta_c", "Delta_x", "Delta_c_x", "failures"]
        );
        let csv = emit_report(&t, Format::Csv);
        assert_eq!(csv.lines().nth(1).unwrap(), "a,10.0,0.0,inf,0.0,,12.0,0.0025,,0.1,,2.0");
    }

    #[test]
    fn json_rows() {
        let t = table(&[("a", 10.0, 0.0), ("b", 20.0, 0.5)]);
        let v: serde_json::Value = serde_json::from_str(&emit_report(&t, Format::Json)).unwrap();
        assert_eq!(v["title"], "all");
        assert_eq!(v["rows"][0]["optimizer"], "a");
        assert!(v["rows"][0]["N_s"].is_null());
        assert_eq!(v["rows"][1]["N_s"], 40.0);
        assert!(v["rows"][1]["tau"].is_null());
    }

    #[test]
    fn format_names() {
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
