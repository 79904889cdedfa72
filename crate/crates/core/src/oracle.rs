//! Brute-force character computation.
//!
//! Every `χ_F` is expanded at `t = ∞` by polynomial long division, the
//! expansions are summed, and the result is certified to be a Laurent
//! polynomial by checking that a window of tail coefficients vanishes. The
//! invariant multiplicity is then read off by elementary character theory.
//! None of this touches the residue machinery.

use std::collections::BTreeMap;
use std::fmt;

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cohomology::CohomologyClass;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, int, Rational};
use crate::fixedpoint::{FixedComponent, GroupKind, ProblemInstance};

/// `χ(t) = Σ_m c_m t^m` with finitely many nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacterPolynomial {
    coeffs: BTreeMap<i64, i64>,
}

impl CharacterPolynomial {
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        Self {
            coeffs: coeffs.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn coeff(&self, m: i64) -> i64 {
        self.coeffs.get(&m).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, i64> {
        &self.coeffs
    }

    pub fn is_weyl_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(m, c)| self.coeff(-m) == *c)
    }

    /// Value at `t = 1`, the virtual dimension of the quantization.
    pub fn dimension(&self) -> i64 {
        self.coeffs.values().sum()
    }
}

impl fmt::Display for CharacterPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            let mag = c.unsigned_abs();
            match (i, *c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (*m, mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{mag}t")?,
                (_, 1) => write!(f, "t^{m}")?,
                _ => write!(f, "{mag}t^{m}")?,
            }
        }
        Ok(())
    }
}

/// Coefficients of `w^{shift} · A / D(w)` for one component at `w = 1/t`,
/// where `D` is a polynomial with constant term 1. Returns the coefficients of
/// `w^e` for `e` in `shift..=max_exp` paired with the (unintegrated) class.
struct InfinityExpansion {
    shift: i64,
    numerator: CohomologyClass,
    denominator: Vec<CohomologyClass>,
}

impl InfinityExpansion {
    fn new(f: &FixedComponent) -> Result<Self> {
        let ring = &f.ring;
        let mut numerator = f.omega.exp_class()?.ring_mul(&f.todd)?;
        let mut denominator = vec![CohomologyClass::one(ring)];
        let mut shift = -f.moment;
        for (b, c) in f.weights.iter().zip(&f.normal_chern) {
            // 1 - w^β e^{-c} for β > 0;
            // 1 - w^{-|β|} e^{-c} = -w^{-|β|} e^{-c} (1 - w^{|β|} e^{c}) for β < 0.
            let e = if *b > 0 {
                (-c).exp_class()?
            } else {
                numerator = -&numerator.ring_mul(&c.exp_class()?)?;
                shift += b.abs();
                c.exp_class()?
            };
            let factor = {
                let mut v = vec![CohomologyClass::zero(ring); b.unsigned_abs() as usize + 1];
                v[0] = CohomologyClass::one(ring);
                v[b.unsigned_abs() as usize] = -&e;
                v
            };
            denominator = poly_mul(&denominator, &factor);
        }
        Ok(Self {
            shift,
            numerator,
            denominator,
        })
    }

    /// Integrated coefficients of `w^e` for `e ≤ max_exp`.
    fn coefficients(&self, max_exp: i64) -> Result<BTreeMap<i64, Rational>> {
        let mut out = BTreeMap::new();
        if max_exp < self.shift {
            return Ok(out);
        }
        let n = (max_exp - self.shift) as usize + 1;
        let ring = self.numerator.ring();
        // q = 1/D by long division: q_0 = 1, q_k = -Σ_{j≥1} D_j q_{k-j}.
        let mut q: Vec<CohomologyClass> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = if k == 0 {
                CohomologyClass::one(ring)
            } else {
                CohomologyClass::zero(ring)
            };
            for j in 1..=k.min(self.denominator.len() - 1) {
                let d = &self.denominator[j];
                if !d.is_zero() {
                    s = &s - &(d * &q[k - j]);
                }
            }
            q.push(s);
        }
        for (k, qk) in q.iter().enumerate() {
            let v = (&self.numerator * qk).integrate().rational_part()?;
            if v != int(0) {
                out.insert(self.shift + k as i64, v);
            }
        }
        Ok(out)
    }
}

fn poly_mul(a: &[CohomologyClass], b: &[CohomologyClass]) -> Vec<CohomologyClass> {
    let ring = a[0].ring();
    let mut out = vec![CohomologyClass::zero(ring); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// The character `Σ_F χ_F`, certified to be a Laurent polynomial.
///
/// Expansions run down to weight `-2·degree_bound`; every coefficient of
/// weight at least `degree_bound` in absolute value must vanish, otherwise the
/// fixed-point data cannot come from a compact manifold.
pub fn character_polynomial(p: &ProblemInstance, degree_bound: i64) -> Result<CharacterPolynomial> {
    let auto = p.degree_bound();
    if degree_bound < auto {
        return Err(Error::Invalid(format!(
            "degree bound {degree_bound} is below the automatic bound {auto}"
        )));
    }
    let mut sum: BTreeMap<i64, Rational> = BTreeMap::new();
    for f in &p.components {
        for (e, v) in InfinityExpansion::new(f)?.coefficients(2 * degree_bound)? {
            *sum.entry(-e).or_insert_with(|| int(0)) += v;
        }
    }
    sum.retain(|_, v| *v != int(0));
    // Report the stabilization failure closest to the support first.
    if let Some((m, v)) = sum
        .iter()
        .filter(|(m, _)| m.abs() >= degree_bound)
        .min_by_key(|(m, _)| m.abs())
    {
        return Err(Error::Stabilization {
            exponent: *m,
            value: format_rational(v),
        });
    }
    let coeffs = sum
        .into_iter()
        .map(|(m, v)| {
            if !v.is_integer() {
                return Err(Error::NonInteger(format!("coefficient of t^{m} is {}", format_rational(&v))));
            }
            v.to_integer()
                .to_i64()
                .map(|c| (m, c))
                .ok_or_else(|| Error::Invalid(format!("coefficient of t^{m} overflows")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CharacterPolynomial::from_coeffs(coeffs))
}

/// Multiplicity of the trivial representation.
///
/// An irreducible SO(3) character has weights `-l..=l`, an irreducible SU(2)
/// character `-2j, -2j+2, .., 2j`; inverting the unitriangular weight matrix
/// gives `c_0 - c_1` and `c_0 - c_2` respectively.
pub fn invariant_multiplicity(c: &CharacterPolynomial, group: GroupKind) -> Result<i64> {
    if group.is_nonabelian() {
        if let Some((m, a)) = c.coeffs().iter().find(|(m, a)| c.coeff(-**m) != **a) {
            return Err(Error::SymmetryViolation {
                m: m.abs(),
                a: c.coeff(m.abs()),
                b: if *m > 0 { c.coeff(-m) } else { *a },
            });
        }
    }
    Ok(match group.root() {
        None => c.coeff(0),
        Some(g) => c.coeff(0) - c.coeff(g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedpoint::{catalog, catalog_entries};
    use proptest::prelude::*;

    fn chi(pairs: &[(i64, i64)]) -> CharacterPolynomial {
        CharacterPolynomial::from_coeffs(pairs.iter().copied())
    }

    #[test]
    fn cp1_degree_two() {
        let p = catalog("cp1-k", Some(2)).unwrap();
        let c = character_polynomial(&p, p.degree_bound()).unwrap();
        assert_eq!(c, chi(&[(-1, 1), (0, 1), (1, 1)]));
        assert_eq!(c.to_string(), "t^-1 + 1 + t");
        assert_eq!(invariant_multiplicity(&c, GroupKind::U1).unwrap(), 1);
    }

    #[test]
    fn cp1_degree_zero() {
        let p = catalog("cp1-k", Some(0)).unwrap();
        let c = character_polynomial(&p, p.degree_bound()).unwrap();
        assert_eq!(c, chi(&[(0, 1)]));
        assert_eq!(c.to_string(), "1");
    }

    #[test]
    fn lone_point_does_not_stabilize() {
        let p = ProblemInstance::new(GroupKind::U1, vec![FixedComponent::isolated("p", 1, vec![1])]);
        assert!(matches!(
            character_polynomial(&p, p.degree_bound()),
            Err(Error::Stabilization { .. })
        ));
    }

    #[test]
    fn bound_below_automatic_is_rejected() {
        let p = catalog("cp1-k", Some(2)).unwrap();
        assert!(matches!(character_polynomial(&p, 1), Err(Error::Invalid(_))));
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(invariant_multiplicity(&chi(&[(0, 1)]), GroupKind::U1).unwrap(), 1);
        assert_eq!(invariant_multiplicity(&chi(&[(-1, 1), (0, 1), (1, 1)]), GroupKind::SO3).unwrap(), 0);
        assert_eq!(invariant_multiplicity(&chi(&[(-2, 1), (0, 2), (2, 1)]), GroupKind::SU2).unwrap(), 1);
        assert_eq!(
            invariant_multiplicity(&chi(&[(-1, 1), (0, 1), (1, 2)]), GroupKind::SO3),
            Err(Error::SymmetryViolation { m: 1, a: 2, b: 1 })
        );
    }

    #[test]
    fn display_signs_and_coefficients() {
        assert_eq!(chi(&[(-1, 3), (0, 2), (1, 1)]).to_string(), "3t^-1 + 2 + t");
        assert_eq!(chi(&[(0, -1), (2, -2)]).to_string(), "-1 - 2t^2");
        assert_eq!(chi(&[]).to_string(), "0");
    }

    #[test]
    fn known_characters() {
        // O(2) on the plane, circle fixing a line and a point
        let p = catalog("cp2-line", Some(1)).unwrap();
        assert_eq!(character_polynomial(&p, p.degree_bound()).unwrap(), chi(&[(-1, 3), (0, 2), (1, 1)]));
        // coadjoint sphere of radius 2: spin-2 representation
        let p = catalog("so3-coadjoint", Some(2)).unwrap();
        assert_eq!(
            character_polynomial(&p, p.degree_bound()).unwrap(),
            chi(&[(-2, 1), (-1, 1), (0, 1), (1, 1), (2, 1)])
        );
    }

    #[test]
    fn catalog_characters_are_stable_and_symmetric() {
        for e in catalog_entries() {
            for k in 1..=3 {
                let p = e.build(k);
                let b = p.degree_bound();
                let c = character_polynomial(&p, b).unwrap();
                assert_eq!(c, character_polynomial(&p, 2 * b).unwrap(), "{} k={k}", e.name);
                if p.group.is_nonabelian() {
                    assert!(c.is_weyl_symmetric(), "{} k={k}: {c}", e.name);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn projective_line_characters(k in 0i64..12, shift in -8i64..8) {
            // O(k) on the line with moments shift + k and shift
            let p = ProblemInstance::new(
                GroupKind::U1,
                vec![
                    FixedComponent::isolated("a", shift + k, vec![1]),
                    FixedComponent::isolated("b", shift, vec![-1]),
                ],
            );
            let c = character_polynomial(&p, p.degree_bound()).unwrap();
            prop_assert_eq!(c, CharacterPolynomial::from_coeffs((shift..=shift + k).map(|m| (m, 1))));
        }

        #[test]
        fn su2_irreducibles(j2 in 0i64..10, extra in 0i64..3) {
            // spin j plus `extra` trivial summands
            let mut coeffs: BTreeMap<i64, i64> = (0..=j2).map(|i| (-j2 + 2 * i, 1)).collect();
            *coeffs.entry(0).or_insert(0) += extra;
            let c = CharacterPolynomial::from_coeffs(coeffs);
            prop_assert_eq!(invariant_multiplicity(&c, GroupKind::SU2).unwrap(), i64::from(j2 == 0) + extra);
        }
    }
}
