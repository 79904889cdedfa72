//! Fixed-point data of a rank-one Hamiltonian action: the group, the
//! components of the torus-fixed set with their localization data, and
//! validation of the hypotheses the two sides of the identity rely on.

mod catalog;
mod schema;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::{CohomologyClass, RingPresentation};
use crate::error::{Error, Result};
use crate::exactnum::{int, lcm};

pub use catalog::{catalog, catalog_entries, CatalogEntry};
pub use schema::{instance_from_json, instance_to_json};

/// Compact group of rank one. Weights of SU(2) are measured in units of half
/// the positive root, those of SO(3) in units of the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    U1,
    SU2,
    SO3,
}

impl GroupKind {
    /// The positive root in weight-lattice units; `None` for the torus itself.
    pub fn root(self) -> Option<i64> {
        match self {
            GroupKind::U1 => None,
            GroupKind::SO3 => Some(1),
            GroupKind::SU2 => Some(2),
        }
    }

    pub fn is_nonabelian(self) -> bool {
        self != GroupKind::U1
    }

    /// Real dimension.
    pub fn dim(self) -> u32 {
        match self {
            GroupKind::U1 => 1,
            _ => 3,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::U1 => "U1",
            GroupKind::SU2 => "SU2",
            GroupKind::SO3 => "SO3",
        })
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace(['(', ')'], "").as_str() {
            "U1" => Ok(GroupKind::U1),
            "SU2" => Ok(GroupKind::SU2),
            "SO3" => Ok(GroupKind::SO3),
            other => Err(Error::parse("group", format!("unknown group `{other}` (expected U1, SU2 or SO3)"))),
        }
    }
}

/// One connected component F of the torus-fixed set.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedComponent {
    pub name: String,
    pub ring: Arc<RingPresentation>,
    /// Weight of the torus on the fibre of the line bundle over F.
    pub moment: i64,
    /// Weights of the torus on the normal bundle, one per split line bundle.
    pub weights: Vec<i64>,
    /// First Chern class of each normal line bundle.
    pub normal_chern: Vec<CohomologyClass>,
    /// Nilpotent part of the symplectic class restricted to F.
    pub omega: CohomologyClass,
    /// Todd class of F.
    pub todd: CohomologyClass,
}

impl FixedComponent {
    pub fn new(
        name: impl Into<String>,
        ring: Arc<RingPresentation>,
        moment: i64,
        weights: Vec<i64>,
        normal_chern: Vec<CohomologyClass>,
        omega: CohomologyClass,
        todd: CohomologyClass,
    ) -> Result<Self> {
        let name = name.into();
        let bad = |msg: String| Err(Error::Invalid(format!("component `{name}`: {msg}")));
        if weights.len() != normal_chern.len() {
            return bad(format!(
                "{} weights but {} normal Chern classes",
                weights.len(),
                normal_chern.len()
            ));
        }
        for c in normal_chern.iter().chain([&omega, &todd]) {
            if c.ring() != &ring && **c.ring() != *ring {
                return Err(Error::MismatchedPresentation);
            }
        }
        if let Some(j) = normal_chern.iter().position(|c| !c.is_nilpotent()) {
            return bad(format!("normal Chern class {j} has a nonzero constant term"));
        }
        if !omega.is_nilpotent() {
            return bad("omega has a nonzero constant term".into());
        }
        if !todd.constant_term().is_one() {
            return bad("Todd class must have constant term 1".into());
        }
        Ok(Self {
            name,
            ring,
            moment,
            weights,
            normal_chern,
            omega,
            todd,
        })
    }

    /// An isolated fixed point.
    pub fn isolated(name: impl Into<String>, moment: i64, weights: Vec<i64>) -> Self {
        let ring = RingPresentation::point();
        let zero = CohomologyClass::zero(&ring);
        Self {
            name: name.into(),
            moment,
            normal_chern: vec![zero.clone(); weights.len()],
            weights,
            omega: zero,
            todd: CohomologyClass::one(&ring),
            ring,
        }
    }

    pub fn is_isolated(&self) -> bool {
        self.ring.is_point()
    }

    /// Sum of the positive normal weights.
    pub fn n_plus(&self) -> i64 {
        self.weights.iter().filter(|b| **b > 0).sum()
    }

    /// Sum of the absolute values of the negative normal weights.
    pub fn n_minus(&self) -> i64 {
        -self.weights.iter().filter(|b| **b < 0).sum::<i64>()
    }

    /// Exponents `k` such that ζ_N^k has `ζ^β = 1` for some normal weight β.
    /// Always contains 0.
    pub fn wall_set(&self, conductor: u32) -> BTreeSet<u32> {
        let n = conductor as i64;
        (0..conductor)
            .filter(|&k| self.weights.iter().any(|b| (k as i64 * b).rem_euclid(n) == 0))
            .collect()
    }

    pub fn complex_dim(&self) -> u32 {
        self.ring.half_dim()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub group: GroupKind,
    pub components: Vec<FixedComponent>,
}

impl ProblemInstance {
    pub fn new(group: GroupKind, components: Vec<FixedComponent>) -> Self {
        Self { group, components }
    }

    /// `lcm(4, |β| for every weight, 2 for SU(2))`: every root of unity a
    /// computation needs lives in ℚ(ζ_N).
    pub fn conductor(&self) -> u32 {
        let mut n = 4;
        if self.group == GroupKind::SU2 {
            n = lcm(n, 2);
        }
        for c in &self.components {
            for b in &c.weights {
                if *b != 0 {
                    n = lcm(n, b.unsigned_abs() as u32);
                }
            }
        }
        n
    }

    /// Real dimension of M, read off any component.
    pub fn manifold_dim(&self) -> u32 {
        self.components
            .first()
            .map(|c| 2 * (c.complex_dim() + c.weights.len() as u32))
            .unwrap_or(0)
    }

    /// `max_F(|μ_F| + Σ_j |β_j| (1 + dim F)) + 1`. The character of a
    /// genuine instance has no weights of absolute value beyond this bound.
    pub fn degree_bound(&self) -> i64 {
        self.components
            .iter()
            .map(|c| {
                let spread: i64 = c.weights.iter().map(|b| b.abs()).sum();
                c.moment.abs() + spread * (1 + c.complex_dim() as i64)
            })
            .max()
            .unwrap_or(0)
            + 1
    }

    /// Replaces the line bundle by its `k`-th tensor power.
    pub fn tensor_power(&self, k: i64) -> Self {
        let kq = int(k);
        Self {
            group: self.group,
            components: self
                .components
                .iter()
                .map(|c| FixedComponent {
                    moment: c.moment * k,
                    omega: c.omega.scale_rational(&kq),
                    ..c.clone()
                })
                .collect(),
        }
    }

    pub fn component(&self, name: &str) -> Option<&FixedComponent> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn positive_components(&self) -> impl Iterator<Item = &FixedComponent> {
        self.components.iter().filter(|c| c.moment > 0)
    }

    pub fn validate(&self) -> Validation {
        validate(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Info,
    Warn,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    Empty,
    DuplicateName,
    ZeroMoment,
    ZeroWeight,
    InconsistentDimension,
    WeylAsymmetry,
    QuasiFree,
    /// SO(3) without a component of |μ| > 1.
    So3SmallMoments,
    /// SU(2) without a component of |μ| > 2.
    Su2SmallMoments,
    /// SU(2) with (μ, n+) = (1, 1) or (μ, n-) = (-1, 1).
    Su2Exclusion,
}

impl FindingKind {
    /// Findings that void the hypotheses of the reduction identity for K ≠ U(1).
    pub fn is_hypothesis_failure(self) -> bool {
        matches!(
            self,
            FindingKind::So3SmallMoments | FindingKind::Su2SmallMoments | FindingKind::Su2Exclusion
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub kind: FindingKind,
    pub component: Option<String>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub findings: Vec<Finding>,
}

impl Validation {
    pub fn has_errors(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Error)
    }

    pub fn hypotheses_hold(&self) -> bool {
        !self.findings.iter().any(|f| f.kind.is_hypothesis_failure())
    }

    pub fn is_quasi_free(&self) -> bool {
        self.findings.iter().any(|f| f.kind == FindingKind::QuasiFree)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    /// Fails with the first error finding, if any.
    pub fn into_result(self) -> Result<Self> {
        if let Some(f) = self.errors().next() {
            return Err(Error::Invalid(f.message.clone()));
        }
        Ok(self)
    }
}

fn validate(p: &ProblemInstance) -> Validation {
    let mut out = Vec::new();
    let mut push = |severity, kind, component: Option<&str>, message: String| {
        out.push(Finding {
            severity,
            kind,
            component: component.map(str::to_string),
            message,
        })
    };
    if p.components.is_empty() {
        push(Severity::Error, FindingKind::Empty, None, "instance has no fixed components".into());
    }
    let mut seen = BTreeSet::new();
    for c in &p.components {
        if !seen.insert(c.name.as_str()) {
            push(
                Severity::Error,
                FindingKind::DuplicateName,
                Some(&c.name),
                format!("component name `{}` is not unique", c.name),
            );
        }
        if c.moment == 0 {
            push(
                Severity::Error,
                FindingKind::ZeroMoment,
                Some(&c.name),
                format!("component `{}` has moment 0: it meets the zero level set", c.name),
            );
        }
        if c.weights.contains(&0) {
            push(
                Severity::Error,
                FindingKind::ZeroWeight,
                Some(&c.name),
                format!("component `{}` has a zero normal weight", c.name),
            );
        }
    }
    let dims: BTreeSet<u32> = p
        .components
        .iter()
        .map(|c| c.complex_dim() + c.weights.len() as u32)
        .collect();
    if dims.len() > 1 {
        push(
            Severity::Error,
            FindingKind::InconsistentDimension,
            None,
            format!("components disagree on the dimension of M: complex dimensions {dims:?}"),
        );
    }
    if p.group.is_nonabelian() {
        let mut count: BTreeMap<i64, i64> = BTreeMap::new();
        for c in &p.components {
            *count.entry(c.moment).or_default() += 1;
        }
        let asym: Vec<i64> = count
            .iter()
            .filter(|(m, n)| count.get(&-**m) != Some(n))
            .map(|(m, _)| *m)
            .collect();
        if !asym.is_empty() {
            push(
                Severity::Error,
                FindingKind::WeylAsymmetry,
                None,
                format!("moments {asym:?} have no Weyl-reflected partner of the same multiplicity"),
            );
        }
    }
    if !p.components.is_empty() && p.components.iter().all(|c| c.weights.iter().all(|b| b.abs() == 1)) {
        push(
            Severity::Info,
            FindingKind::QuasiFree,
            None,
            "all normal weights are ±1: the circle action is quasi-free".into(),
        );
    }
    let max_moment = p.components.iter().map(|c| c.moment.abs()).max().unwrap_or(0);
    match p.group {
        GroupKind::U1 => {}
        GroupKind::SO3 => {
            if max_moment <= 1 {
                push(
                    Severity::Warn,
                    FindingKind::So3SmallMoments,
                    None,
                    "no component has |μ| > 1; the SO(3) identity is not guaranteed (replace the line bundle by a tensor power)".into(),
                );
            }
        }
        GroupKind::SU2 => {
            if max_moment <= 2 {
                push(
                    Severity::Warn,
                    FindingKind::Su2SmallMoments,
                    None,
                    "no component has |μ| > 2; the SU(2) identity is not guaranteed (replace the line bundle by a tensor power)".into(),
                );
            }
            for c in &p.components {
                if (c.moment == 1 && c.n_plus() == 1) || (c.moment == -1 && c.n_minus() == 1) {
                    push(
                        Severity::Warn,
                        FindingKind::Su2Exclusion,
                        Some(&c.name),
                        format!(
                            "component `{}` has μ = {} with n+ = {}, n- = {}: excluded configuration for SU(2)",
                            c.name,
                            c.moment,
                            c.n_plus(),
                            c.n_minus()
                        ),
                    );
                }
            }
        }
    }
    Validation { findings: out }
}
