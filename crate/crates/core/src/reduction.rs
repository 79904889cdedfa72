//! The reduced side.
//!
//! The Riemann-Roch number of the reduced space is the sum over components
//! with positive moment of the residues of `W · h_F` at `t = 1` (the main
//! term) and at the other roots of unity in their wall sets (the orbifold
//! corrections). Corrections are grouped by Galois orbit — all primitive
//! `d`-th roots together — whose sums are rational.

use std::collections::BTreeMap;

use num::integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, int, rational_serde, Cyclotomic, Rational};
use crate::fixedpoint::{Finding, GroupKind, ProblemInstance};
use crate::laurent::Chart;
use crate::lefschetz::{residue_of_h, residues_by_pole, rr_invariant, WeylFactor};
use crate::oracle::{character_polynomial, invariant_multiplicity, CharacterPolynomial};

/// Sum of the residues at one root of unity `ζ_N^k` over the positive components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootResidue {
    pub exponent: u32,
    pub value: Cyclotomic,
}

/// Corrections at all primitive `order`-th roots of unity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitCorrection {
    pub order: u32,
    pub conductor: u32,
    #[serde(with = "rational_serde")]
    pub total: Rational,
    pub roots: Vec<RootResidue>,
}

impl OrbitCorrection {
    /// Whether the residue at `ζ^a` is the image of the residue at `ζ` under
    /// the automorphism `ζ_N ↦ ζ_N^a`.
    pub fn is_galois_conjugate(&self) -> bool {
        let Some(first) = self.roots.first() else {
            return true;
        };
        let n = self.conductor as i64;
        self.roots.iter().all(|r| {
            // a unit mod N with first.exponent * a ≡ r.exponent (mod N)
            (1..n)
                .filter(|a| a.gcd(&n) == 1)
                .find(|a| (first.exponent as i64 * a - r.exponent as i64).rem_euclid(n) == 0)
                .is_some_and(|a| first.value.galois(a) == r.value)
        })
    }

    pub fn label(&self) -> String {
        match self.order {
            2 => "-1".into(),
            d => format!("primitive {d}th roots"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedRR {
    #[serde(with = "rational_serde")]
    pub main_term: Rational,
    /// Keyed by the order of the roots of unity in the orbit.
    pub corrections: BTreeMap<u32, OrbitCorrection>,
    #[serde(with = "rational_serde")]
    pub total: Rational,
}

/// `Σ_{F: μ_F > 0} res_1 (W · h_F)`.
pub fn rr_reduced_main(p: &ProblemInstance) -> Result<Rational> {
    let weyl = WeylFactor::new(p.group);
    let mut total = int(0);
    for f in p.positive_components() {
        total += residue_of_h(f, Chart::one(), &weyl)?.rational_part()?;
    }
    Ok(total)
}

/// Residues at the roots of unity `ζ ≠ 1` in the wall sets of the positive
/// components, summed per Galois orbit.
pub fn kawasaki_corrections(p: &ProblemInstance) -> Result<BTreeMap<u32, OrbitCorrection>> {
    let n = p.conductor();
    let weyl = WeylFactor::new(p.group);
    let mut per_root: BTreeMap<u32, Cyclotomic> = BTreeMap::new();
    for f in p.positive_components() {
        for k in f.wall_set(n).into_iter().filter(|k| *k != 0) {
            let r = residue_of_h(f, Chart::root(k, n), &weyl)?;
            let slot = per_root.entry(k).or_insert_with(Cyclotomic::zero);
            *slot = &*slot + &r;
        }
    }
    let mut orbits: BTreeMap<u32, OrbitCorrection> = BTreeMap::new();
    for (k, value) in per_root {
        let order = n / k.gcd(&n);
        let orbit = orbits.entry(order).or_insert_with(|| OrbitCorrection {
            order,
            conductor: n,
            total: int(0),
            roots: Vec::new(),
        });
        orbit.roots.push(RootResidue {
            exponent: k,
            value: value.embed(n),
        });
    }
    for orbit in orbits.values_mut() {
        let sum = orbit.roots.iter().fold(Cyclotomic::zero(), |a, r| &a + &r.value);
        orbit.total = sum.rational_part().map_err(|_| {
            Error::NotRational(format!("correction at {} sums to {sum}", orbit.label()))
        })?;
    }
    orbits.retain(|_, o| o.roots.iter().any(|r| !r.value.is_zero()));
    Ok(orbits)
}

pub fn rr_reduced(p: &ProblemInstance) -> Result<ReducedRR> {
    let main_term = rr_reduced_main(p)?;
    let corrections = kawasaki_corrections(p)?;
    let total = corrections.values().fold(main_term.clone(), |a, o| a + &o.total);
    Ok(ReducedRR {
        main_term,
        corrections,
        total,
    })
}

/// One row of the residue table: the residues of `W · h_F` at every pole.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueRow {
    pub component: String,
    pub moment: i64,
    pub entries: Vec<ResidueEntry>,
    /// Sum over all poles; zero by the residue theorem.
    pub sum: Cyclotomic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueEntry {
    pub pole: String,
    /// Exponent `k` of `ζ_N^k` for poles on the unit circle.
    pub exponent: Option<u32>,
    pub value: Cyclotomic,
}

pub fn residue_table(p: &ProblemInstance) -> Result<Vec<ResidueRow>> {
    let n = p.conductor();
    let weyl = WeylFactor::new(p.group);
    p.components
        .iter()
        .map(|f| {
            let entries: Vec<ResidueEntry> = residues_by_pole(f, n, &weyl)?
                .into_iter()
                .map(|r| ResidueEntry {
                    pole: r.pole.to_string(),
                    exponent: r.exponent,
                    value: r.value,
                })
                .collect();
            let sum = entries.iter().fold(Cyclotomic::zero(), |a, e| &a + &e.value);
            Ok(ResidueRow {
                component: f.name.clone(),
                moment: f.moment,
                entries,
                sum,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "NOT-ASSERTED")]
    NotAsserted,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotAsserted => "NOT-ASSERTED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub group: GroupKind,
    pub findings: Vec<Finding>,
    #[serde(with = "rational_serde")]
    pub lefschetz: Rational,
    pub reduced: ReducedRR,
    pub oracle: i64,
    pub character: CharacterPolynomial,
    pub degree_bound: i64,
    pub residues: Vec<ResidueRow>,
    pub verdict: Verdict,
    pub explanation: String,
}

/// Computes both sides and the oracle and compares them.
///
/// Instances with validation errors are rejected. When the hypotheses of the
/// reduction identity fail the values are still reported but equality is not
/// asserted.
pub fn verify_quantization(p: &ProblemInstance, degree_bound: Option<i64>) -> Result<Verification> {
    let validation = p.validate();
    if let Some(e) = validation.errors().next() {
        return Err(Error::Invalid(e.message.clone()));
    }
    let degree_bound = degree_bound.unwrap_or_else(|| p.degree_bound());
    let lefschetz = rr_invariant(p)?;
    let reduced = rr_reduced(p)?;
    let character = character_polynomial(p, degree_bound)?;
    let oracle = invariant_multiplicity(&character, p.group)?;
    let residues = residue_table(p)?;

    let agree = lefschetz == reduced.total && lefschetz == int(oracle);
    let values = format!(
        "index side {}, reduced side {}, oracle {}",
        format_rational(&lefschetz),
        format_rational(&reduced.total),
        oracle
    );
    let (verdict, explanation) = if !validation.hypotheses_hold() {
        let reasons: Vec<&str> = validation
            .findings
            .iter()
            .filter(|f| f.kind.is_hypothesis_failure())
            .map(|f| f.message.as_str())
            .collect();
        (
            Verdict::NotAsserted,
            format!("hypotheses fail, equality not asserted ({values}): {}", reasons.join("; ")),
        )
    } else if agree {
        (Verdict::Pass, format!("all sides agree: {values}"))
    } else {
        (Verdict::Fail, format!("sides disagree: {values}"))
    };
    Ok(Verification {
        group: p.group,
        findings: validation.findings,
        lefschetz,
        reduced,
        oracle,
        character,
        degree_bound,
        residues,
        verdict,
        explanation,
    })
}

/// Coefficients (constant first) of the unique polynomial of degree
/// `< points.len()` through the given points, by Newton divided differences.
pub fn interpolate(points: &[(Rational, Rational)]) -> Vec<Rational> {
    let n = points.len();
    let xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // Horner on the Newton form
    let mut coeffs = vec![int(0); n.max(1)];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![int(0); n.max(1)];
        for (j, c) in coeffs.iter().enumerate() {
            if j + 1 < next.len() {
                next[j + 1] += c;
            }
            next[j] -= c * xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&int(0)) {
        coeffs.pop();
    }
    coeffs
}

pub fn eval_polynomial(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(int(0), |acc, c| acc * x + c)
}

/// Reduced Riemann-Roch numbers of the tensor powers `k ∈ ks` of `p`, with the
/// interpolating polynomial through the first `degree + 1` of them. Returns
/// the polynomial if every value lies on it.
pub fn tensor_power_polynomial(p: &ProblemInstance, ks: &[i64], degree: usize) -> Result<Option<Vec<Rational>>> {
    let values = ks
        .iter()
        .map(|k| Ok((int(*k), rr_reduced(&p.tensor_power(*k))?.total)))
        .collect::<Result<Vec<_>>>()?;
    let fit = interpolate(&values[..(degree + 1).min(values.len())]);
    Ok(values.iter().all(|(x, y)| eval_polynomial(&fit, x) == *y).then_some(fit))
}

/// Expected degree of the reduced Riemann-Roch polynomial: `dim M / 2 - dim K`.
pub fn reduced_degree(p: &ProblemInstance) -> usize {
    ((p.manifold_dim() / 2) as i64 - p.group.dim() as i64).max(0) as usize
}
