//! Truncated nilpotent rings standing in for the even cohomology of a fixed
//! component, together with the integration functional over its fundamental
//! class.
//!
//! A presentation is `ℚ[x_1..x_r]/(x_g^{m_g})` with every generator in degree
//! two, further truncated above the real dimension of the component. Classes
//! carry cyclotomic coefficients so that they can serve as coefficients of the
//! Laurent expansions taken at roots of unity.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, int, Cyclotomic, ExactScalar, Rational};

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// `x^order = 0`.
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    generators: Vec<Generator>,
    top_degree: u32,
    integrals: BTreeMap<Monomial, Rational>,
}

impl RingPresentation {
    pub fn new(
        generators: Vec<Generator>,
        top_degree: u32,
        integrals: BTreeMap<Monomial, Rational>,
    ) -> Result<Self> {
        if !top_degree.is_multiple_of(2) {
            return Err(Error::InvalidPresentation(format!(
                "top degree {top_degree} is odd"
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.order == 0 {
                return Err(Error::InvalidPresentation(format!(
                    "generator `{}` has nilpotency order 0",
                    g.name
                )));
            }
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidPresentation(format!("bad generator name `{}`", g.name)));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
        }
        let half = top_degree / 2;
        for m in integrals.keys() {
            if m.len() != generators.len() || m.iter().zip(&generators).any(|(e, g)| *e >= g.order) {
                return Err(Error::InvalidPresentation(format!(
                    "integral given for invalid monomial {m:?}"
                )));
            }
            if m.iter().sum::<u32>() != half {
                return Err(Error::InvalidPresentation(format!(
                    "integral given for monomial {} which is not of top degree {top_degree}",
                    format_monomial(&generators, m)
                )));
            }
        }
        if generators.is_empty()
            && (top_degree != 0 || integrals.get(&vec![]).is_none_or(|v| !v.is_one()))
        {
            return Err(Error::InvalidPresentation(
                "a point has top degree 0 and integrates the unit monomial to 1".into(),
            ));
        }
        Ok(Self {
            generators,
            top_degree,
            integrals,
        })
    }

    pub fn point() -> Arc<Self> {
        static POINT: OnceLock<Arc<RingPresentation>> = OnceLock::new();
        POINT
            .get_or_init(|| {
                Arc::new(RingPresentation {
                    generators: vec![],
                    top_degree: 0,
                    integrals: BTreeMap::from([(vec![], int(1))]),
                })
            })
            .clone()
    }

    /// `ℚ[x]/x^{d+1}` with `∫ x^d = 1`, the cohomology of ℂP^d.
    pub fn projective_space(name: &str, d: u32) -> Arc<Self> {
        let integrals = BTreeMap::from([(vec![d], int(1))]);
        Arc::new(
            Self::new(
                vec![Generator {
                    name: name.into(),
                    order: d + 1,
                }],
                2 * d,
                integrals,
            )
            .expect("valid projective space presentation"),
        )
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    /// Complex dimension of the component.
    pub fn half_dim(&self) -> u32 {
        self.top_degree / 2
    }

    pub fn integrals(&self) -> &BTreeMap<Monomial, Rational> {
        &self.integrals
    }

    pub fn is_point(&self) -> bool {
        self.generators.is_empty() && self.top_degree == 0
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    fn is_live(&self, m: &[u32]) -> bool {
        m.iter().zip(&self.generators).all(|(e, g)| *e < g.order)
            && m.iter().sum::<u32>() <= self.half_dim()
    }

    pub fn parse_monomial(&self, s: &str) -> Result<Monomial> {
        parse_monomial(&self.generators, s)
    }

    pub fn format_monomial(&self, m: &[u32]) -> String {
        format_monomial(&self.generators, m)
    }
}

/// Parses `1`, `x`, `x^2*y` against a generator list.
pub fn parse_monomial(gens: &[Generator], s: &str) -> Result<Monomial> {
    let mut m = vec![0u32; gens.len()];
    let s = s.trim();
    if s == "1" {
        return Ok(m);
    }
    for factor in s.split('*') {
        let (name, exp) = match factor.trim().split_once('^') {
            Some((n, e)) => (
                n.trim(),
                e.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidMonomial(format!("{s} (bad exponent)")))?,
            ),
            None => (factor.trim(), 1),
        };
        let idx = gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::InvalidMonomial(format!("{s} (unknown generator `{name}`)")))?;
        m[idx] += exp;
    }
    Ok(m)
}

fn format_monomial(gens: &[Generator], m: &[u32]) -> String {
    let parts: Vec<String> = gens
        .iter()
        .zip(m)
        .filter(|(_, e)| **e > 0)
        .map(|(g, e)| if *e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// An element of a truncated ring with exact scalar coefficients.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    ring: Arc<RingPresentation>,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

fn same_ring(a: &Arc<RingPresentation>, b: &Arc<RingPresentation>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl CohomologyClass {
    pub fn zero(ring: &Arc<RingPresentation>) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingPresentation>) -> Self {
        Self::constant(ring, Cyclotomic::one())
    }

    pub fn constant(ring: &Arc<RingPresentation>, c: ExactScalar) -> Self {
        let mut out = Self::zero(ring);
        out.insert(vec![0; ring.generators.len()], c);
        out
    }

    pub fn generator(ring: &Arc<RingPresentation>, name: &str) -> Result<Self> {
        let idx = ring
            .generator_index(name)
            .ok_or_else(|| Error::InvalidMonomial(name.to_string()))?;
        let mut m = vec![0; ring.generators.len()];
        m[idx] = 1;
        let mut out = Self::zero(ring);
        out.insert(m, Cyclotomic::one());
        Ok(out)
    }

    /// Builds a class from `(monomial, coefficient)` pairs. Monomials killed by
    /// the truncation are dropped.
    pub fn from_terms(
        ring: &Arc<RingPresentation>,
        terms: impl IntoIterator<Item = (Monomial, ExactScalar)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ring);
        for (m, c) in terms {
            if m.len() != ring.generators.len() {
                return Err(Error::InvalidMonomial(format!("{m:?}")));
            }
            out.insert(m, c);
        }
        Ok(out)
    }

    fn insert(&mut self, m: Monomial, c: ExactScalar) {
        if !self.ring.is_live(&m) || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, ExactScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.terms
            .get(&vec![0; self.ring.generators.len()])
            .cloned()
            .unwrap_or_else(Cyclotomic::zero)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.constant_term().is_zero()
    }

    /// Invertible iff the constant term is nonzero.
    pub fn is_unit(&self) -> bool {
        !self.is_nilpotent()
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&Cyclotomic::from_rational(q.clone()))
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::MismatchedPresentation)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Cup product; monomials above a nilpotency order or the top degree vanish.
    pub fn ring_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                if self.ring.is_live(&m) {
                    out.insert(m, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.ring), |acc, _| &acc * self)
    }

    fn require_nilpotent(&self) -> Result<()> {
        if self.is_nilpotent() {
            Ok(())
        } else {
            Err(Error::NotNilpotent(self.constant_term().to_string()))
        }
    }

    /// Evaluates `Σ_n coeffs[n] a^n`; the sum is finite because `a` is nilpotent.
    fn power_series(&self, coeffs: &[Rational]) -> Self {
        let mut out = Self::zero(&self.ring);
        let mut power = Self::one(&self.ring);
        for c in coeffs.iter().take(self.ring.half_dim() as usize + 1) {
            if power.is_zero() {
                break;
            }
            out = &out + &power.scale_rational(c);
            power = &power * self;
        }
        out
    }

    pub fn exp_class(&self) -> Result<Self> {
        self.require_nilpotent()?;
        let n = self.ring.half_dim() as usize + 1;
        let mut coeffs = Vec::with_capacity(n);
        let mut f = int(1);
        for k in 0..n {
            if k > 0 {
                f /= int(k as i64);
            }
            coeffs.push(f.clone());
        }
        Ok(self.power_series(&coeffs))
    }

    /// `a / (1 - e^{-a})` using at most `order + 1` Todd coefficients.
    pub fn todd_series(&self, order: usize) -> Result<Self> {
        self.require_nilpotent()?;
        Ok(self.power_series(&todd_coefficients(order + 1)))
    }

    /// `(1 - e^{-a}) / a`, the reciprocal of [`Self::todd_series`].
    pub fn todd_inverse_factor(&self, order: usize) -> Result<Self> {
        self.require_nilpotent()?;
        Ok(self.power_series(&todd_inverse_coefficients(order + 1)))
    }

    /// Inverse of a unit `c(1 + n)` as `c^{-1} Σ (-n)^k`.
    pub fn invert(&self) -> Result<Self> {
        let c = self.constant_term();
        let c_inv = c.invert()?;
        let n = &self.scale(&c_inv) - &Self::one(&self.ring);
        let mut out = Self::zero(&self.ring);
        let mut power = Self::one(&self.ring);
        let minus_n = -&n;
        while !power.is_zero() {
            out = &out + &power;
            power = &power * &minus_n;
        }
        Ok(out.scale(&c_inv))
    }

    /// Pairing with the fundamental class: only top-degree monomials contribute.
    pub fn integrate(&self) -> ExactScalar {
        self.ring
            .integrals
            .iter()
            .filter_map(|(m, w)| self.terms.get(m).map(|c| c.scale(w)))
            .fold(Cyclotomic::zero(), |acc, x| &acc + &x)
    }

    /// Rational coefficients, if every coefficient is rational.
    pub fn to_rational_terms(&self) -> Option<BTreeMap<Monomial, Rational>> {
        self.terms
            .iter()
            .map(|(m, c)| c.to_rational().map(|q| (m.clone(), q)))
            .collect()
    }
}

impl<'a> Add<&'a CohomologyClass> for &'a CohomologyClass {
    type Output = CohomologyClass;
    fn add(self, rhs: &CohomologyClass) -> CohomologyClass {
        self.try_add(rhs).expect("classes over the same presentation")
    }
}

impl<'a> Sub<&'a CohomologyClass> for &'a CohomologyClass {
    type Output = CohomologyClass;
    fn sub(self, rhs: &CohomologyClass) -> CohomologyClass {
        self + &(-rhs)
    }
}

impl Neg for &CohomologyClass {
    type Output = CohomologyClass;
    fn neg(self) -> CohomologyClass {
        CohomologyClass {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a CohomologyClass> for &'a CohomologyClass {
    type Output = CohomologyClass;
    fn mul(self, rhs: &CohomologyClass) -> CohomologyClass {
        self.ring_mul(rhs).expect("classes over the same presentation")
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = self.ring.format_monomial(m);
                let coeff = match c.to_rational() {
                    Some(q) => format_rational(&q),
                    None => format!("({c})"),
                };
                if mono == "1" {
                    coeff
                } else if c.is_one() {
                    mono
                } else {
                    format!("{coeff}*{mono}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

const CACHED_TERMS: usize = 48;

/// Coefficients of `x/(1 - e^{-x})`: 1, 1/2, 1/12, 0, -1/720, ...
pub fn todd_coefficients(n: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Vec<Rational>> = OnceLock::new();
    if n <= CACHED_TERMS {
        CACHE.get_or_init(|| series_reciprocal(&todd_inverse_coefficients(CACHED_TERMS)))[..n].to_vec()
    } else {
        series_reciprocal(&todd_inverse_coefficients(n))
    }
}

/// Coefficients of `(1 - e^{-x})/x = Σ (-1)^n x^n / (n+1)!`.
pub fn todd_inverse_coefficients(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut fact = int(1);
    for k in 0..n {
        fact *= int(k as i64 + 1);
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        out.push(sign / &fact);
    }
    out
}

/// Power-series reciprocal by long division; `a[0]` must be nonzero.
fn series_reciprocal(a: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(a.len());
    let inv0 = a[0].recip();
    for n in 0..a.len() {
        let mut s = if n == 0 { Rational::one() } else { Rational::zero() };
        for k in 1..=n {
            s -= &a[k] * &out[n - k];
        }
        out.push(s * &inv0);
    }
    out
}
