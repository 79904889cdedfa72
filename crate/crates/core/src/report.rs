//! Reports printed by the command-line front end.

use std::fmt::Write as _;

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exactnum::{format_rational, Cyclotomic, Rational};
use crate::fixedpoint::{GroupKind, ProblemInstance};
use crate::laurent::Chart;
use crate::reduction::{ResidueRow, Verification};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub name: String,
    pub moment: i64,
    pub weights: Vec<i64>,
    pub complex_dim: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub source: String,
    pub group: GroupKind,
    pub manifold_dim: u32,
    pub conductor: u32,
    pub components: Vec<ComponentSummary>,
}

impl InstanceSummary {
    pub fn new(source: impl Into<String>, p: &ProblemInstance) -> Self {
        Self {
            source: source.into(),
            group: p.group,
            manifold_dim: p.manifold_dim(),
            conductor: p.conductor(),
            components: p
                .components
                .iter()
                .map(|c| ComponentSummary {
                    name: c.name.clone(),
                    moment: c.moment,
                    weights: c.weights.clone(),
                    complex_dim: c.complex_dim(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub instance: InstanceSummary,
    pub verification: Verification,
    pub elapsed_us: u64,
}

/// Renders exact values, optionally followed by a marked decimal approximation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Style {
    pub decimal: bool,
}

impl Style {
    pub fn rational(self, q: &Rational) -> String {
        let exact = format_rational(q);
        if self.decimal && !q.is_integer() {
            format!("{exact} (≈ {:.6}, approximate)", q.to_f64().unwrap_or(f64::NAN))
        } else {
            exact
        }
    }

    pub fn scalar(self, c: &Cyclotomic) -> String {
        if let Some(q) = c.to_rational() {
            return self.rational(&q);
        }
        let exact = c.to_string();
        if self.decimal {
            let (re, im) = c.to_complex();
            format!("{exact} (≈ {re:.6}{im:+.6}i, approximate)")
        } else {
            exact
        }
    }
}

pub fn render_report(r: &Report, style: Style) -> String {
    let v = &r.verification;
    let i = &r.instance;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "instance: {} (group {}, dim M = {}, {} components, conductor {})",
        i.source,
        i.group,
        i.manifold_dim,
        i.components.len(),
        i.conductor
    );
    for c in &i.components {
        let _ = writeln!(s, "  {:<10} μ = {:>4}  weights {:?}  dim {}", c.name, c.moment, c.weights, c.complex_dim);
    }
    if !v.findings.is_empty() {
        let _ = writeln!(s, "findings:");
        for f in &v.findings {
            let sev = serde_json::to_value(f.severity).ok();
            let sev = sev.as_ref().and_then(|x| x.as_str()).unwrap_or("?");
            let _ = writeln!(s, "  {sev:<5} {}", f.message);
        }
    }
    let _ = writeln!(s, "character: {}  (degree bound {})", v.character, v.degree_bound);
    let _ = writeln!(s, "index side      -Σ res_∞ W·h_F    = {}", style.rational(&v.lefschetz));
    let _ = writeln!(s, "reduced side    main term (t = 1) = {}", style.rational(&v.reduced.main_term));
    for o in v.reduced.corrections.values() {
        let _ = writeln!(s, "                correction at {:<20} = {}", o.label(), style.rational(&o.total));
        for root in &o.roots {
            let _ = writeln!(
                s,
                "                  at {}: {}",
                Chart::root(root.exponent, o.conductor),
                style.scalar(&root.value)
            );
        }
    }
    let _ = writeln!(s, "                total             = {}", style.rational(&v.reduced.total));
    if let Some(o) = v
        .reduced
        .corrections
        .values()
        .find(|o| o.roots.iter().any(|r| r.value.to_rational().is_none()))
    {
        let _ = writeln!(s, "                (cyclotomic values are polynomials in z = ζ_{})", o.conductor);
    }
    let _ = writeln!(s, "oracle          invariant multiplicity = {}", v.oracle);
    let _ = writeln!(s, "verdict: {} — {}", v.verdict, v.explanation);
    let _ = writeln!(s, "time: {:.3} ms", r.elapsed_us as f64 / 1000.0);
    s
}

/// Column key: 0 and ∞ first, then roots of unity by exponent.
fn column_key(pole: &str, exponent: Option<u32>) -> (u8, u32) {
    match (pole, exponent) {
        ("0", None) => (0, 0),
        (_, None) => (1, 0),
        (_, Some(k)) => (2, k),
    }
}

pub fn render_residue_table(rows: &[ResidueRow], conductor: u32, style: Style) -> String {
    let mut columns: Vec<((u8, u32), String)> = Vec::new();
    for r in rows {
        for e in &r.entries {
            let key = column_key(&e.pole, e.exponent);
            if !columns.iter().any(|(k, _)| *k == key) {
                columns.push((key, e.pole.clone()));
            }
        }
    }
    columns.sort();
    let cell = |r: &ResidueRow, key: (u8, u32)| {
        r.entries
            .iter()
            .find(|e| column_key(&e.pole, e.exponent) == key)
            .map(|e| style.scalar(&e.value))
            .unwrap_or_else(|| "·".into())
    };
    let mut header = vec!["component".to_string()];
    header.extend(columns.iter().map(|(_, l)| format!("res {l}")));
    header.push("row sum".into());
    let mut table: Vec<Vec<String>> = vec![header];
    for r in rows {
        let mut line = vec![r.name_with_moment()];
        line.extend(columns.iter().map(|(k, _)| cell(r, *k)));
        line.push(style.scalar(&r.sum));
        table.push(line);
    }
    let mut totals = vec!["column sum".to_string()];
    for (key, _) in &columns {
        let sum = rows
            .iter()
            .flat_map(|r| r.entries.iter())
            .filter(|e| column_key(&e.pole, e.exponent) == *key)
            .fold(Cyclotomic::zero(), |a, e| &a + &e.value);
        totals.push(style.scalar(&sum));
    }
    let grand = rows.iter().fold(Cyclotomic::zero(), |a, r| &a + &r.sum);
    totals.push(style.scalar(&grand));
    table.push(totals);

    let widths: Vec<usize> = (0..table[0].len())
        .map(|j| table.iter().map(|row| row[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for (i, row) in table.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        let _ = writeln!(s, "{}", cells.join("  ").trim_end());
        if i == 0 || i == table.len() - 2 {
            let _ = writeln!(s, "{}", "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        }
    }
    let ok = rows.iter().all(|r| r.sum.is_zero());
    let _ = writeln!(
        s,
        "residue theorem: {}",
        if ok { "every row sums to 0" } else { "VIOLATED" }
    );
    if columns.iter().any(|((kind, k), _)| *kind == 2 && *k != 0) {
        let _ = writeln!(s, "cyclotomic values are polynomials in z = ζ_{conductor}");
    }
    s
}

impl ResidueRow {
    fn name_with_moment(&self) -> String {
        format!("{} (μ = {})", self.component, self.moment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedpoint::catalog;
    use crate::reduction::{residue_table, verify_quantization};

    fn report(name: &str, k: Option<i64>) -> Report {
        let p = catalog(name, k).unwrap();
        Report {
            instance: InstanceSummary::new(name, &p),
            verification: verify_quantization(&p, None).unwrap(),
            elapsed_us: 1,
        }
    }

    #[test]
    fn json_round_trip() {
        for (name, k) in [("cp1-k", Some(2)), ("cp1-double", None), ("cp2-k", Some(2)), ("su2-cp1", Some(1))] {
            let r = report(name, k);
            let text = serde_json::to_string_pretty(&r).unwrap();
            let back: Report = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r, "{name}");
        }
    }

    #[test]
    fn text_report_lists_the_correction() {
        let r = report("cp1-double", None);
        let text = render_report(&r, Style::default());
        assert!(text.contains("correction at -1"), "{text}");
        assert!(text.contains("verdict: PASS"), "{text}");
        assert!(!text.contains('≈'));
    }

    #[test]
    fn decimal_values_are_marked() {
        let r = report("cp1-double", None);
        let text = render_report(&r, Style { decimal: true });
        assert!(text.contains("approximate"), "{text}");
    }

    #[test]
    fn residue_table_columns() {
        let p = catalog("cp1-double", None).unwrap();
        let t = render_residue_table(&residue_table(&p).unwrap(), p.conductor(), Style::default());
        assert!(t.contains("res -1"), "{t}");
        assert!(t.contains("every row sums to 0"), "{t}");
        let p = catalog("cp1-k", Some(3)).unwrap();
        let t = render_residue_table(&residue_table(&p).unwrap(), p.conductor(), Style::default());
        assert!(!t.contains("res -1") && !t.contains("ζ"), "{t}");
    }
}
