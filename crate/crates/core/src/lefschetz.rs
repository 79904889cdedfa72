//! The equivariant index side.
//!
//! Each fixed component contributes
//!
//! ```text
//! χ_F(t) = t^{μ_F} ∫_F e^ω Td(F) / Π_j (1 - t^{-β_j} e^{-c_j})
//! ```
//!
//! and the meromorphic form `h_F = χ_F dt/t`. The invariant part of the
//! quantization is `-Σ_F res_∞ (W · h_F)` with `W` the Weyl density of the
//! group.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cohomology::CohomologyClass;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, int, rat, Cyclotomic, Rational};
use crate::fixedpoint::{FixedComponent, GroupKind, ProblemInstance};
use crate::laurent::{expand_lefschetz_factor, Chart, RingSeries};

/// Weyl integration density restricted to the maximal torus, as a Laurent
/// polynomial in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylFactor {
    group: GroupKind,
    terms: BTreeMap<i64, Rational>,
}

impl WeylFactor {
    pub fn new(group: GroupKind) -> Self {
        let terms = match group.root() {
            None => BTreeMap::from([(0, int(1))]),
            Some(g) => BTreeMap::from([(-g, rat(-1, 2)), (0, int(1)), (g, rat(-1, 2))]),
        };
        Self { group, terms }
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.terms
    }

    pub fn is_trivial(&self) -> bool {
        self.group == GroupKind::U1
    }

    /// Lower bound on the valuation of the density in `chart`.
    pub fn valuation(&self, chart: Chart) -> i64 {
        self.terms
            .keys()
            .map(|m| chart.monomial_valuation(*m))
            .min()
            .unwrap_or(0)
    }

    pub fn series(&self, chart: Chart, ring: &std::sync::Arc<crate::cohomology::RingPresentation>, prec: i64) -> RingSeries {
        RingSeries::t_polynomial(chart, ring, &self.terms, prec)
    }
}

/// Exact data of an isolated contribution `t^μ / Π_j (1 - t^{-β_j})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedChi {
    pub moment: i64,
    pub weights: Vec<i64>,
}

impl std::fmt::Display for IsolatedChi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "t^{}", self.moment)?;
        if self.weights.is_empty() {
            return Ok(());
        }
        write!(f, " / (")?;
        for (i, b) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ")(")?;
            }
            write!(f, "1 - t^{}", -b)?;
        }
        write!(f, ")")
    }
}

pub fn chi_isolated(f: &FixedComponent) -> Result<IsolatedChi> {
    if !f.is_isolated() {
        return Err(Error::NotIsolated(f.name.clone()));
    }
    Ok(IsolatedChi {
        moment: f.moment,
        weights: f.weights.clone(),
    })
}

/// `W(t) · t^{μ_F + shift} · e^ω Td(F) / Π_j (1 - t^{-β_j} e^{-c_j})` in
/// `chart`, with every coefficient below `prec` exact.
///
/// Each factor is expanded just far enough: its precision is `prec` minus the
/// a priori valuation bounds of all the other factors.
pub fn integrand(f: &FixedComponent, chart: Chart, weyl: &WeylFactor, shift: i64, prec: i64) -> Result<RingSeries> {
    let ring = &f.ring;
    let dim = ring.half_dim();
    let monomial_v = chart.monomial_valuation(f.moment + shift);
    let weyl_v = weyl.valuation(chart);
    let factor_v: Vec<i64> = f.weights.iter().map(|b| chart.lefschetz_valuation(*b, dim)).collect();
    let total_v = monomial_v + weyl_v + factor_v.iter().sum::<i64>();
    if total_v >= prec {
        return Ok(RingSeries::zero(chart, ring, prec));
    }

    let class = f.omega.exp_class()?.ring_mul(&f.todd)?;
    let mut acc = RingSeries::constant(chart, class, prec - total_v);
    acc = acc.series_product(&RingSeries::t_power(chart, ring, f.moment + shift, prec - (total_v - monomial_v)))?;
    if !weyl.is_trivial() {
        acc = acc.series_product(&weyl.series(chart, ring, prec - (total_v - weyl_v)))?;
    }
    for ((b, c), v) in f.weights.iter().zip(&f.normal_chern).zip(&factor_v) {
        let factor = expand_lefschetz_factor(*b, c, chart, prec - (total_v - v))?;
        acc = acc.series_product(&factor)?;
    }
    Ok(acc.truncate(prec))
}

/// Residue of `W · t^shift · h_F` at the centre of `chart`.
pub fn residue_twisted(f: &FixedComponent, chart: Chart, weyl: &WeylFactor, shift: i64) -> Result<Cyclotomic> {
    let compute = || -> Result<Cyclotomic> {
        let s = integrand(f, chart, weyl, shift, chart.residue_exponent() + 1)?;
        Ok(s.residue()?.integrate())
    };
    compute().map_err(|e| Error::AtPole {
        component: f.name.clone(),
        pole: chart.to_string(),
        source: Box::new(e),
    })
}

/// Residue of `W · h_F` at the centre of `chart`.
pub fn residue_of_h(f: &FixedComponent, chart: Chart, weyl: &WeylFactor) -> Result<Cyclotomic> {
    residue_twisted(f, chart, weyl, 0)
}

/// Every possible pole of `W · h_F`: 0, ∞ and the wall set (as charts).
pub fn poles(f: &FixedComponent, conductor: u32) -> Vec<Chart> {
    let mut out = vec![Chart::Zero, Chart::Infinity];
    out.extend(f.wall_set(conductor).into_iter().map(|k| Chart::root(k, conductor)));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleResidue {
    pub pole: Chart,
    /// Exponent `k` of `ζ_N^k` for finite nonzero poles.
    pub exponent: Option<u32>,
    pub value: Cyclotomic,
}

/// Residues of `W · h_F` at all of its poles, in the order 0, ∞, ζ_N^k, all
/// written in ℚ(ζ_N).
pub fn residues_by_pole(f: &FixedComponent, conductor: u32, weyl: &WeylFactor) -> Result<Vec<PoleResidue>> {
    let mut out = Vec::new();
    for pole in [Chart::Zero, Chart::Infinity] {
        out.push(PoleResidue {
            pole,
            exponent: None,
            value: residue_of_h(f, pole, weyl)?.embed(conductor),
        });
    }
    for k in f.wall_set(conductor) {
        let pole = Chart::root(k, conductor);
        out.push(PoleResidue {
            pole,
            exponent: Some(k),
            value: residue_of_h(f, pole, weyl)?.embed(conductor),
        });
    }
    Ok(out)
}

/// `-res_∞ (W · h_F)`, the per-component share of the invariant dimension.
/// Only the sum over components is meaningful.
pub fn component_share(f: &FixedComponent, weyl: &WeylFactor) -> Result<Rational> {
    let r = residue_of_h(f, Chart::Infinity, weyl)?;
    (-r).rational_part()
}

/// The invariant dimension `-Σ_F res_∞ (W · h_F)`.
pub fn rr_invariant(p: &ProblemInstance) -> Result<Rational> {
    let weyl = WeylFactor::new(p.group);
    let mut total = int(0);
    for f in &p.components {
        total += component_share(f, &weyl)?;
    }
    if !total.is_integer() {
        return Err(Error::NonInteger(format_rational(&total)));
    }
    Ok(total)
}

/// Coefficients of `Σ_F χ_F` for weights in `-bound..=bound`, read off the
/// expansion at 0 or at ∞ (`chart` must be one of those two).
///
/// Since `Σ_F χ_F` is a Laurent polynomial, both charts must give the same
/// coefficients once `bound` exceeds its support.
pub fn character_from_chart(p: &ProblemInstance, chart: Chart, bound: i64) -> Result<BTreeMap<i64, Rational>> {
    let sign = match chart {
        Chart::Zero => 1,
        Chart::Infinity => -1,
        Chart::Root { .. } => return Err(Error::ChartMismatch),
    };
    let weyl = WeylFactor::new(GroupKind::U1);
    let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
    for f in &p.components {
        let s = integrand(f, chart, &weyl, 0, bound + 1)?;
        for e in -bound..=bound {
            let c: CohomologyClass = s.coeff(e)?;
            if c.is_zero() {
                continue;
            }
            let v = c.integrate().rational_part()?;
            let slot = out.entry(sign * e).or_insert_with(|| int(0));
            *slot += v;
        }
    }
    out.retain(|_, v| *v != int(0));
    Ok(out)
}
