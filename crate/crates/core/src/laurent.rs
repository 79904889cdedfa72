//! One-variable truncated Laurent series with cohomology-class coefficients.
//!
//! A series lives in one of three charts of the Riemann sphere:
//!
//! * [`Chart::Zero`]: local coordinate `w = t`,
//! * [`Chart::Infinity`]: local coordinate `w = 1/t`,
//! * [`Chart::Root`]: `t = ζ e^u` for a root of unity ζ, local coordinate `u`.
//!
//! A series `f` stands for the 1-form `f dt/t`. In the `u`-chart `dt/t = du`,
//! at zero `dt/t = dw/w` and at infinity `dt/t = -dw/w`, which fixes the
//! residue conventions in [`RingSeries::residue`].

use std::fmt;
use std::sync::Arc;

use num::integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cohomology::{CohomologyClass, RingPresentation};
use crate::error::{Error, Result};
use crate::exactnum::{int, Cyclotomic, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "chart", rename_all = "lowercase")]
pub enum Chart {
    Zero,
    Infinity,
    /// `t = ζ_n^k e^u`.
    Root { k: u32, n: u32 },
}

impl Chart {
    /// `t = ζ_n^k`, stored in lowest terms so that equal points compare equal.
    pub fn root(k: u32, n: u32) -> Self {
        let k = k % n;
        let g = k.gcd(&n);
        Chart::Root { k: k / g, n: n / g }
    }

    /// Order of the root of unity at the centre (1 for `t = 1`).
    pub fn order(self) -> Option<u32> {
        match self {
            Chart::Root { n, .. } => Some(n),
            _ => None,
        }
    }

    /// The point `t = 1`.
    pub fn one() -> Self {
        Chart::Root { k: 0, n: 1 }
    }

    /// ζ_n^k as an exact scalar, or `None` for the charts at 0 and ∞.
    pub fn root_value(self) -> Option<Cyclotomic> {
        match self {
            Chart::Root { k, n } => Some(Cyclotomic::root_of_unity(n, k as i64)),
            _ => None,
        }
    }

    /// Whether `ζ^β = 1` at this chart's centre.
    pub fn is_wall_for(self, beta: i64) -> bool {
        match self {
            Chart::Root { k, n } => (k as i64 * beta).rem_euclid(n as i64) == 0,
            _ => false,
        }
    }

    /// Lower bound on the valuation of `1/(1 - t^{-β} e^{-c})` in this chart
    /// when `c` lives in a ring of complex dimension `dim`.
    pub fn lefschetz_valuation(self, beta: i64, dim: u32) -> i64 {
        match self {
            Chart::Zero => beta.max(0),
            Chart::Infinity => (-beta).max(0),
            Chart::Root { .. } if self.is_wall_for(beta) => -(dim as i64 + 1),
            Chart::Root { .. } => 0,
        }
    }

    /// Valuation of `t^m` in this chart.
    pub fn monomial_valuation(self, m: i64) -> i64 {
        match self {
            Chart::Zero => m,
            Chart::Infinity => -m,
            Chart::Root { .. } => 0,
        }
    }

    /// Exponent of the local coordinate whose coefficient is the residue.
    pub fn residue_exponent(self) -> i64 {
        match self {
            Chart::Zero | Chart::Infinity => 0,
            Chart::Root { .. } => -1,
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::Zero => write!(f, "0"),
            Chart::Infinity => write!(f, "∞"),
            Chart::Root { k: 0, .. } => write!(f, "1"),
            Chart::Root { k: 1, n: 2 } => write!(f, "-1"),
            Chart::Root { k: 1, n } => write!(f, "ζ_{n}"),
            Chart::Root { k, n } => write!(f, "ζ_{n}^{k}"),
        }
    }
}

/// Truncated Laurent series: coefficients of exponents `low..prec` are known,
/// everything from `prec` on is undefined.
#[derive(Clone, Debug)]
pub struct RingSeries {
    chart: Chart,
    ring: Arc<RingPresentation>,
    low: i64,
    coeffs: Vec<CohomologyClass>,
    prec: i64,
}

impl RingSeries {
    pub fn new(
        chart: Chart,
        ring: &Arc<RingPresentation>,
        low: i64,
        coeffs: Vec<CohomologyClass>,
        prec: i64,
    ) -> Self {
        assert!(prec >= low, "precision below the lowest exponent");
        let mut coeffs = coeffs;
        coeffs.resize((prec - low) as usize, CohomologyClass::zero(ring));
        let mut s = Self {
            chart,
            ring: ring.clone(),
            low,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    pub fn zero(chart: Chart, ring: &Arc<RingPresentation>, prec: i64) -> Self {
        Self::new(chart, ring, prec, vec![], prec)
    }

    pub fn constant(chart: Chart, c: CohomologyClass, prec: i64) -> Self {
        let ring = c.ring().clone();
        if prec <= 0 {
            return Self::zero(chart, &ring, prec);
        }
        Self::new(chart, &ring, 0, vec![c], prec)
    }

    pub fn scalar(chart: Chart, ring: &Arc<RingPresentation>, c: Cyclotomic, prec: i64) -> Self {
        Self::constant(chart, CohomologyClass::constant(ring, c), prec)
    }

    /// The function `t^m` written in `chart`.
    pub fn t_power(chart: Chart, ring: &Arc<RingPresentation>, m: i64, prec: i64) -> Self {
        match chart {
            Chart::Zero | Chart::Infinity => {
                let e = chart.monomial_valuation(m);
                if prec <= e {
                    return Self::zero(chart, ring, prec);
                }
                Self::new(chart, ring, e, vec![CohomologyClass::one(ring)], prec)
            }
            Chart::Root { k, n } => {
                // ζ^m e^{m u}
                let zeta_m = Cyclotomic::root_of_unity(n, k as i64 * m);
                let len = prec.max(0) as usize;
                let mut coeffs = Vec::with_capacity(len);
                let mut c = Rational::from_integer(1.into());
                for j in 0..len {
                    if j > 0 {
                        c = c * int(m) / int(j as i64);
                    }
                    coeffs.push(CohomologyClass::constant(ring, zeta_m.scale(&c)));
                }
                if prec <= 0 {
                    return Self::zero(chart, ring, prec);
                }
                Self::new(chart, ring, 0, coeffs, prec)
            }
        }
    }

    /// A finite Laurent polynomial `Σ a_m t^m` written in `chart`.
    pub fn t_polynomial<'a>(
        chart: Chart,
        ring: &Arc<RingPresentation>,
        terms: impl IntoIterator<Item = (&'a i64, &'a Rational)>,
        prec: i64,
    ) -> Self {
        terms.into_iter().fold(Self::zero(chart, ring, prec), |acc, (m, a)| {
            let t = Self::t_power(chart, ring, *m, prec).scale(&CohomologyClass::constant(
                ring,
                Cyclotomic::from_rational(a.clone()),
            ));
            acc.add(&t).expect("same chart")
        })
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    /// Lowest exponent with a (possibly) nonzero coefficient; equals `prec` for
    /// a series that vanishes to its truncation order.
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeff(&self, e: i64) -> Result<CohomologyClass> {
        if e >= self.prec {
            return Err(Error::InsufficientTruncation {
                needed: e,
                available: self.prec,
            });
        }
        if e < self.low {
            return Ok(CohomologyClass::zero(&self.ring));
        }
        Ok(self.coeffs[(e - self.low) as usize].clone())
    }

    /// `(exponent, coefficient)` pairs of the known nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CohomologyClass)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let keep = (prec - self.low).max(0) as usize;
        Self::new(
            self.chart,
            &self.ring,
            self.low.min(prec),
            self.coeffs[..keep.min(self.coeffs.len())].to_vec(),
            prec,
        )
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        if self.ring != other.ring && *self.ring != *other.ring {
            return Err(Error::MismatchedPresentation);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let prec = self.prec.min(other.prec);
        let low = self.low.min(other.low).min(prec);
        let mut coeffs = vec![CohomologyClass::zero(&self.ring); (prec - low) as usize];
        for s in [self, other] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let e = s.low + i as i64;
                if e < prec {
                    let slot = &mut coeffs[(e - low) as usize];
                    *slot = &*slot + c;
                }
            }
        }
        Ok(Self::new(self.chart, &self.ring, low, coeffs, prec))
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by a class.
    pub fn scale(&self, c: &CohomologyClass) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Self::new(self.chart, &self.ring, self.low, coeffs, self.prec)
    }

    /// Cauchy product. Lowest exponents add; the result is known up to
    /// `min(a.prec + b.low, b.prec + a.low)`.
    pub fn series_product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let low = self.low + other.low;
        let prec = (self.prec + other.low).min(other.prec + self.low);
        if prec <= low {
            return Ok(Self::zero(self.chart, &self.ring, prec));
        }
        let n = (prec - low) as usize;
        let mut coeffs = vec![CohomologyClass::zero(&self.ring); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Ok(Self::new(self.chart, &self.ring, low, coeffs, prec))
    }

    /// Reciprocal of a series whose leading coefficient is a unit of the ring.
    /// Relative precision is preserved.
    pub fn recip(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::NotInvertible);
        }
        let lead = &self.coeffs[0];
        if !lead.is_unit() {
            return Err(Error::NotInvertible);
        }
        let lead_inv = lead.invert()?;
        let n = self.coeffs.len();
        let mut out: Vec<CohomologyClass> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = if k == 0 {
                CohomologyClass::one(&self.ring)
            } else {
                CohomologyClass::zero(&self.ring)
            };
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s = &s - &(&self.coeffs[j] * &out[k - j]);
                }
            }
            out.push(&s * &lead_inv);
        }
        let low = -self.low;
        Ok(Self::new(self.chart, &self.ring, low, out, low + n as i64))
    }

    /// Residue of the form `f dt/t` represented by this series.
    ///
    /// At `t = ζ e^u` it is the `u^{-1}` coefficient; at zero the `w^0`
    /// coefficient; at infinity minus the `w^0` coefficient.
    pub fn residue(&self) -> Result<CohomologyClass> {
        let c = self.coeff(self.chart.residue_exponent())?;
        Ok(match self.chart {
            Chart::Infinity => -&c,
            _ => c,
        })
    }
}

impl PartialEq for RingSeries {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart && self.low == other.low && self.prec == other.prec && self.coeffs == other.coeffs
    }
}

/// `1/(1 - t^{-β} e^{-c})` in `chart`, known for exponents below `prec`.
///
/// Expanded as `Σ_r y^r v^r / (1 - y)^{r+1}` with `y = t^{-β}` and the nilpotent
/// `v = e^{-c} - 1`, so the only non-regular behaviour comes from `1/(1 - y)`,
/// which has a simple pole exactly when `ζ^β = 1`.
pub fn expand_lefschetz_factor(beta: i64, c: &CohomologyClass, chart: Chart, prec: i64) -> Result<RingSeries> {
    if beta == 0 {
        return Err(Error::ZeroWeight);
    }
    let ring = c.ring();
    let v = &(-c).exp_class()? - &CohomologyClass::one(ring);
    let dim = ring.half_dim() as i64;
    let mut work = prec + 2 * dim + 4 + beta.abs();
    loop {
        let y = RingSeries::t_power(chart, ring, -beta, work);
        let one_minus_y = RingSeries::scalar(chart, ring, Cyclotomic::one(), work).sub(&y)?;
        let inv = one_minus_y.recip()?;
        let step = y.series_product(&inv)?.scale(&v);
        let mut term = inv;
        let mut out = term.clone();
        for _ in 0..dim {
            term = term.series_product(&step)?;
            out = out.add(&term)?;
        }
        if out.prec() >= prec {
            return Ok(out.truncate(prec));
        }
        work += (prec - out.prec()).max(1) + work / 2;
    }
}

/// `1 - t^{-β} e^{-c}` in `chart`, the denominator inverted by
/// [`expand_lefschetz_factor`].
pub fn lefschetz_denominator(beta: i64, c: &CohomologyClass, chart: Chart, prec: i64) -> Result<RingSeries> {
    let ring = c.ring();
    let e = (-c).exp_class()?;
    let y = RingSeries::t_power(chart, ring, -beta, prec).scale(&e);
    RingSeries::scalar(chart, ring, Cyclotomic::one(), prec).sub(&y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn pt() -> Arc<RingPresentation> {
        RingPresentation::point()
    }

    fn scalars(s: &RingSeries) -> Vec<(i64, Cyclotomic)> {
        s.terms().map(|(e, c)| (e, c.constant_term())).collect()
    }

    fn q(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_rational(rat(n, d))
    }

    #[test]
    fn geometric_series_at_infinity() {
        let f = expand_lefschetz_factor(1, &CohomologyClass::zero(&pt()), Chart::Infinity, 5).unwrap();
        assert_eq!(f.low(), 0);
        assert_eq!(f.prec(), 5);
        assert_eq!(scalars(&f), (0..5).map(|e| (e, q(1, 1))).collect::<Vec<_>>());
    }

    #[test]
    fn todd_factor_at_one() {
        // 1/(1 - e^{-u}) = u^{-1} + 1/2 + u/12 + 0 u^2 - u^3/720
        let f = expand_lefschetz_factor(1, &CohomologyClass::zero(&pt()), Chart::one(), 4).unwrap();
        assert_eq!(
            scalars(&f),
            vec![(-1, q(1, 1)), (0, q(1, 2)), (1, q(1, 12)), (3, q(-1, 720))]
        );
    }

    #[test]
    fn doubled_weight_at_minus_one() {
        // 1/(1 - e^{-2u}) = (2u)^{-1}(1 + u + u^2/3 + ...)
        let f = expand_lefschetz_factor(2, &CohomologyClass::zero(&pt()), Chart::root(2, 4), 2).unwrap();
        assert_eq!(scalars(&f), vec![(-1, q(1, 2)), (0, q(1, 2)), (1, q(1, 6))]);
    }

    #[test]
    fn regular_factor_at_nonwall_root() {
        let f = expand_lefschetz_factor(1, &CohomologyClass::zero(&pt()), Chart::root(2, 4), 3).unwrap();
        // ζ = -1: 1/(1 + e^{-u}) = 1/2 + u/4 + ...
        assert_eq!(f.low(), 0);
        assert_eq!(f.coeff(0).unwrap().constant_term(), q(1, 2));
        assert_eq!(f.coeff(1).unwrap().constant_term(), q(1, 4));
    }

    #[test]
    fn residue_examples() {
        let p = pt();
        let one = |c: i64| CohomologyClass::constant(&p, Cyclotomic::from_int(c));
        let s = RingSeries::new(Chart::one(), &p, -1, vec![one(1), one(3), one(1)], 2);
        assert_eq!(s.residue().unwrap().constant_term(), Cyclotomic::one());
        let s = RingSeries::new(Chart::one(), &p, 0, vec![one(4)], 2);
        assert!(s.residue().unwrap().is_zero());
        // f(t) = t^{-1} + 1 + t at infinity
        let terms = BTreeMap::from([(-1, int(1)), (0, int(1)), (1, int(1))]);
        let f = RingSeries::t_polynomial(Chart::Infinity, &p, &terms, 3);
        assert_eq!(f.residue().unwrap().constant_term(), Cyclotomic::from_int(-1));
        let g = RingSeries::new(Chart::one(), &p, -3, vec![one(1)], -1);
        assert!(matches!(g.residue(), Err(Error::InsufficientTruncation { .. })));
    }

    #[test]
    fn product_examples() {
        let p = pt();
        let c = |n: i64, d: i64| CohomologyClass::constant(&p, q(n, d));
        let inv_u = RingSeries::new(Chart::one(), &p, -1, vec![c(1, 1)], 5);
        let u = RingSeries::new(Chart::one(), &p, 1, vec![c(1, 1)], 5);
        assert_eq!(scalars(&inv_u.series_product(&u).unwrap()), vec![(0, q(1, 1))]);

        let a = RingSeries::new(Chart::Infinity, &p, 0, vec![c(1, 1), c(1, 1)], 4);
        let b = RingSeries::new(Chart::Infinity, &p, 0, vec![c(1, 1), c(-1, 1)], 4);
        assert_eq!(scalars(&a.series_product(&b).unwrap()), vec![(0, q(1, 1)), (2, q(-1, 1))]);

        let h = RingSeries::new(Chart::one(), &p, -1, vec![c(1, 1), c(1, 2)], 1);
        let sq = h.series_product(&h).unwrap();
        assert_eq!(sq.prec(), 0);
        assert_eq!(scalars(&sq), vec![(-2, q(1, 1)), (-1, q(1, 1))]);

        let z = RingSeries::new(Chart::Zero, &p, 0, vec![c(1, 1)], 3);
        assert_eq!(a.series_product(&z), Err(Error::ChartMismatch));
    }

    #[test]
    fn nilpotent_normal_class_raises_pole_order() {
        // ℂP^1 normal class c = x: 1/(1 - e^{-u-x}) = 1/(u + x) * Td(u + x)
        let ring = RingPresentation::projective_space("x", 1);
        let x = CohomologyClass::generator(&ring, "x").unwrap();
        let f = expand_lefschetz_factor(1, &x, Chart::one(), 2).unwrap();
        assert_eq!(f.low(), -2);
        // u^{-2} coefficient is -x, u^{-1} coefficient is 1
        assert_eq!(f.coeff(-2).unwrap(), -&x);
        assert_eq!(f.coeff(-1).unwrap(), CohomologyClass::one(&ring));
    }

    fn charts() -> impl Strategy<Value = Chart> {
        prop_oneof![
            Just(Chart::Zero),
            Just(Chart::Infinity),
            (0u32..12).prop_map(|k| Chart::root(k, 12)),
        ]
    }

    proptest! {
        #[test]
        fn factor_inverts_denominator(beta in prop_oneof![-6i64..0, 1i64..7], chart in charts(),
                                      cx in -3i64..4, prec in 2i64..8) {
            let ring = RingPresentation::projective_space("x", 2);
            let c = CohomologyClass::generator(&ring, "x").unwrap().scale_rational(&int(cx));
            let d = lefschetz_denominator(beta, &c, chart, prec + 8).unwrap();
            let f = expand_lefschetz_factor(beta, &c, chart, prec - d.low()).unwrap();
            let p = f.series_product(&d).unwrap();
            prop_assert!(p.prec() > 0);
            for e in p.low()..p.prec() {
                let expect = if e == 0 { CohomologyClass::one(&ring) } else { CohomologyClass::zero(&ring) };
                prop_assert_eq!(p.coeff(e).unwrap(), expect, "exponent {}", e);
            }
        }

        #[test]
        fn truncation_is_monotone(beta in prop_oneof![-4i64..0, 1i64..5], chart in charts(), prec in 1i64..6) {
            let ring = RingPresentation::projective_space("x", 1);
            let c = CohomologyClass::generator(&ring, "x").unwrap();
            let lo = expand_lefschetz_factor(beta, &c, chart, prec).unwrap();
            let hi = expand_lefschetz_factor(beta, &c, chart, prec + 5).unwrap();
            for e in lo.low().min(hi.low())..lo.prec() {
                prop_assert_eq!(lo.coeff(e).unwrap(), hi.coeff(e).unwrap());
            }
        }
    }
}
