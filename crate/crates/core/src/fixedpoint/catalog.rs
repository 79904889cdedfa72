//! Built-in worked examples.
//!
//! Every entry takes an integer parameter `k`. For `cp1-k` it is the degree of
//! the line bundle; for all other entries the base instance is replaced by its
//! `k`-th tensor power. Moments follow the convention fixed by the `cp1-k`
//! calibration: a fixed point whose normal weights are all positive sits at
//! the maximum of the moment map.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cohomology::{CohomologyClass, Generator, RingPresentation};
use crate::error::{Error, Result};
use crate::exactnum::{int, Cyclotomic};

use super::{FixedComponent, GroupKind, ProblemInstance};

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub default_k: i64,
    build: fn(i64) -> ProblemInstance,
}

impl CatalogEntry {
    pub fn build(&self, k: i64) -> ProblemInstance {
        (self.build)(k)
    }
}

static ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "cp1-k",
        description: "projective line, O(k), weights ±1; moments {⌊k/2⌋, ⌊k/2⌋-k} (k = 1 shifted to {2, 1})",
        default_k: 2,
        build: cp1_k,
    },
    CatalogEntry {
        name: "cp1-double",
        description: "projective line with the doubled circle action (weights ±2), moments ±2k",
        default_k: 1,
        build: cp1_double,
    },
    CatalogEntry {
        name: "cp2-k",
        description: "projective plane, circle with weights (0,1,3), O(4k) shifted so moments are (-3k, k, 9k)",
        default_k: 1,
        build: cp2_k,
    },
    CatalogEntry {
        name: "cp2-line",
        description: "projective plane, circle with weights (0,0,1): a fixed line and a point, O(2k), moments -k and k",
        default_k: 1,
        build: cp2_line,
    },
    CatalogEntry {
        name: "cp1xcp1",
        description: "product of projective lines, circle rotating the first factor, O(2k,k); fixed set is two lines",
        default_k: 1,
        build: cp1xcp1,
    },
    CatalogEntry {
        name: "so3-coadjoint",
        description: "SO(3) on the coadjoint sphere, moments ±k",
        default_k: 2,
        build: so3_coadjoint,
    },
    CatalogEntry {
        name: "so3-triple",
        description: "SO(3) diagonally on three coadjoint spheres of radius k",
        default_k: 1,
        build: so3_triple,
    },
    CatalogEntry {
        name: "su2-cp1",
        description: "SU(2) on the projective line, O(k), weights ±2, moments ±k",
        default_k: 1,
        build: su2_cp1,
    },
    CatalogEntry {
        name: "su2-cp3",
        description: "SU(2) on P(S^3 C^2), O(k); weights of the binary cubics (3,1,-1,-3)",
        default_k: 4,
        build: su2_cp3,
    },
];

pub fn catalog_entries() -> &'static [CatalogEntry] {
    ENTRIES
}

/// Looks up an entry and builds it at parameter `k` (the entry's default when `None`).
pub fn catalog(name: &str, k: Option<i64>) -> Result<ProblemInstance> {
    let entry = ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCatalog(name.to_string()))?;
    Ok(entry.build(k.unwrap_or(entry.default_k)))
}

/// Isolated fixed points of a linear circle action on P(V) with coordinate
/// weights `a`, for the line bundle O(m) linearized with shift `s`.
fn projective(group: GroupKind, a: &[i64], m: i64, s: i64) -> ProblemInstance {
    let components = a
        .iter()
        .enumerate()
        .map(|(i, ai)| {
            let weights = a
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, aj)| ai - aj)
                .collect();
            FixedComponent::isolated(format!("p{i}"), m * ai + s, weights)
        })
        .collect();
    ProblemInstance::new(group, components)
}

fn cp1_k(k: i64) -> ProblemInstance {
    let shift = match k {
        1 => 1,
        _ => -((k + 1).div_euclid(2)),
    };
    projective(GroupKind::U1, &[1, 0], k, shift)
}

fn cp1_double(k: i64) -> ProblemInstance {
    projective(GroupKind::U1, &[1, -1], 2, 0).tensor_power(k)
}

fn cp2_k(k: i64) -> ProblemInstance {
    projective(GroupKind::U1, &[0, 1, 3], 4, -3).tensor_power(k)
}

fn line_ring(name: &str) -> Arc<RingPresentation> {
    Arc::new(
        RingPresentation::new(
            vec![Generator {
                name: name.into(),
                order: 2,
            }],
            2,
            BTreeMap::from([(vec![1], int(1))]),
        )
        .expect("valid line presentation"),
    )
}

/// `a + b*x` on a ring with one generator.
fn linear(ring: &Arc<RingPresentation>, a: i64, b: i64) -> CohomologyClass {
    CohomologyClass::from_terms(
        ring,
        [(vec![0], Cyclotomic::from_int(a)), (vec![1], Cyclotomic::from_int(b))],
    )
    .expect("single-generator monomials")
}

fn cp2_line(k: i64) -> ProblemInstance {
    let ring = line_ring("x");
    let line = FixedComponent::new(
        "line",
        ring.clone(),
        -1,
        vec![-1],
        vec![linear(&ring, 0, 1)],
        linear(&ring, 0, 2),
        linear(&ring, 1, 1),
    )
    .expect("valid line component");
    let point = FixedComponent::isolated("p", 1, vec![1, 1]);
    ProblemInstance::new(GroupKind::U1, vec![line, point]).tensor_power(k)
}

fn cp1xcp1(k: i64) -> ProblemInstance {
    let ring = line_ring("y");
    let side = |name: &str, moment: i64, weight: i64| {
        FixedComponent::new(
            name,
            ring.clone(),
            moment,
            vec![weight],
            vec![CohomologyClass::zero(&ring)],
            linear(&ring, 0, 1),
            linear(&ring, 1, 1),
        )
        .expect("valid product component")
    };
    ProblemInstance::new(GroupKind::U1, vec![side("north", 1, 1), side("south", -1, -1)]).tensor_power(k)
}

fn so3_coadjoint(k: i64) -> ProblemInstance {
    projective(GroupKind::SO3, &[1, 0], 2, -1).tensor_power(k)
}

fn so3_triple(k: i64) -> ProblemInstance {
    let mut components = Vec::new();
    for signs in 0..8u32 {
        let eps: Vec<i64> = (0..3).map(|i| if signs >> i & 1 == 0 { 1 } else { -1 }).collect();
        let name: String = eps.iter().map(|e| if *e > 0 { '+' } else { '-' }).collect();
        components.push(FixedComponent::isolated(name, eps.iter().sum(), eps));
    }
    ProblemInstance::new(GroupKind::SO3, components).tensor_power(k)
}

fn su2_cp1(k: i64) -> ProblemInstance {
    projective(GroupKind::SU2, &[1, -1], 1, 0).tensor_power(k)
}

fn su2_cp3(k: i64) -> ProblemInstance {
    projective(GroupKind::SU2, &[3, 1, -1, -3], 1, 0).tensor_power(k)
}
