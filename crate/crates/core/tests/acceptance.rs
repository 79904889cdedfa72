//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rrloc::exactnum::int;
use rrloc::fixedpoint::{catalog, catalog_entries, ProblemInstance};
use rrloc::laurent::Chart;
use rrloc::lefschetz::{character_from_chart, residue_twisted, residues_by_pole, rr_invariant, WeylFactor};
use rrloc::oracle::{character_polynomial, invariant_multiplicity, CharacterPolynomial};
use rrloc::reduction::{
    kawasaki_corrections, reduced_degree, rr_reduced, rr_reduced_main, tensor_power_polynomial, verify_quantization,
    Verdict,
};
use rrloc::Result;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

/// Every catalog entry at parameters 1..=4.
fn catalog_instances() -> Vec<(String, ProblemInstance)> {
    catalog_entries()
        .iter()
        .flat_map(|e| (1..=4).map(move |k| (format!("{} k={k}", e.name), e.build(k))))
        .collect()
}

fn calibration() -> Outcome {
    let start = Instant::now();
    let p = ok(catalog("cp1-k", Some(2)), "catalog")?;
    let chi = ok(character_polynomial(&p, p.degree_bound()), "oracle")?;
    let expected = CharacterPolynomial::from_coeffs([(-1, 1), (0, 1), (1, 1)]);
    ensure(chi == expected, || format!("character {chi}"))?;
    let lhs = ok(rr_invariant(&p), "index side")?;
    let rhs = ok(rr_reduced(&p), "reduced side")?.total;
    ensure(lhs == int(1) && rhs == int(1), || format!("index {lhs}, reduced {rhs}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("character {chi}, both sides 1, {elapsed:.2?}"))
}

fn quantization_identity() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(&str, i64)> = Vec::new();
    cases.extend((1..=6).map(|k| ("cp1-k", k)));
    cases.extend((1..=4).map(|k| ("cp2-k", k)));
    cases.push(("cp1xcp1", 1));
    cases.extend([("so3-coadjoint", 2), ("so3-coadjoint", 3)]);
    cases.push(("cp1-double", 1));
    for (name, k) in &cases {
        let p = ok(catalog(name, Some(*k)), "catalog")?;
        ensure(p.validate().hypotheses_hold(), || format!("{name} k={k}: hypotheses fail"))?;
        let v = ok(verify_quantization(&p, None), name)?;
        ensure(v.verdict == Verdict::Pass, || format!("{name} k={k}: {}", v.explanation))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances, index = reduced = oracle, {elapsed:.2?}", cases.len()))
}

fn window_vanishing() -> Outcome {
    let u1 = WeylFactor::new(rrloc::fixedpoint::GroupKind::U1);
    let mut checked = 0;
    for (name, p) in catalog_instances() {
        for f in &p.components {
            for r in -2..=2 {
                let m = f.moment + r;
                if -f.n_plus() < m && m < f.n_minus() {
                    for chart in [Chart::Zero, Chart::Infinity] {
                        let v = ok(residue_twisted(f, chart, &u1, r), &name)?;
                        ensure(v.is_zero(), || format!("{name} {} r={r}: res at {chart} is {v}", f.name))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} residues in the window vanish"))
}

fn global_residue_theorem() -> Outcome {
    let mut checked = 0;
    for (name, p) in catalog_instances() {
        let weyl = WeylFactor::new(p.group);
        for f in &p.components {
            let residues = ok(residues_by_pole(f, p.conductor(), &weyl), &name)?;
            let sum = residues.iter().fold(rrloc::exactnum::Cyclotomic::zero(), |a, r| &a + &r.value);
            ensure(sum.is_zero(), || format!("{name} {}: residues sum to {sum}", f.name))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} components, residues over 0, ∞ and the wall set sum to 0"))
}

fn character_finiteness() -> Outcome {
    for (name, p) in catalog_instances() {
        let b = p.degree_bound();
        let chi = ok(character_polynomial(&p, b), &name)?;
        let doubled = ok(character_polynomial(&p, 2 * b), &name)?;
        ensure(chi == doubled, || format!("{name}: {chi} vs {doubled}"))?;
        let at_infinity = ok(character_from_chart(&p, Chart::Infinity, 2 * b), &name)?;
        ensure(at_infinity.keys().all(|m| m.abs() < b), || {
            format!("{name}: ∞-chart expansion has support beyond {b}")
        })?;
        let same = at_infinity.len() == chi.coeffs().len()
            && chi.coeffs().iter().all(|(m, c)| at_infinity.get(m) == Some(&int(*c)));
        ensure(same, || format!("{name}: ∞-chart expansion disagrees with the oracle"))?;
    }
    Ok("every catalog character is stable under doubling the bound".into())
}

fn quasi_free() -> Outcome {
    let mut n = 0;
    for (name, p) in catalog_instances() {
        if !p.validate().is_quasi_free() {
            continue;
        }
        let corrections = ok(kawasaki_corrections(&p), &name)?;
        ensure(corrections.is_empty(), || format!("{name}: corrections {:?}", corrections.keys()))?;
        let main = ok(rr_reduced_main(&p), &name)?;
        let lhs = ok(rr_invariant(&p), &name)?;
        ensure(main == lhs, || format!("{name}: main term {main}, index side {lhs}"))?;
        n += 1;
    }
    ensure(n > 0, || "no quasi-free instance".into())?;
    Ok(format!("{n} quasi-free instances, no corrections, main term = index side"))
}

fn correction_necessity() -> Outcome {
    let p = ok(catalog("cp1-double", None), "catalog")?;
    let lhs = ok(rr_invariant(&p), "index side")?;
    let r = ok(rr_reduced(&p), "reduced side")?;
    ensure(r.main_term != lhs, || format!("main term already equals {lhs}"))?;
    let orbit = r.corrections.get(&2).ok_or("no correction at -1")?;
    ensure(r.corrections.len() == 1, || format!("corrections at orders {:?}", r.corrections.keys()))?;
    ensure(&r.main_term + &orbit.total == lhs, || "main term plus correction differs".into())?;
    Ok(format!("main {} + correction at -1 {} = {}", r.main_term, orbit.total, lhs))
}

fn galois_rationality() -> Outcome {
    let mut orbits = 0;
    for e in catalog_entries() {
        for k in 1..=6 {
            let p = e.build(k);
            let name = format!("{} k={k}", e.name);
            for o in ok(kawasaki_corrections(&p), &name)?.values() {
                let sum = o.roots.iter().fold(rrloc::exactnum::Cyclotomic::zero(), |a, r| &a + &r.value);
                let q = ok(sum.rational_part(), &name)?;
                ensure(q == o.total, || format!("{name}: orbit of order {} sums to {q}", o.order))?;
                ensure(o.is_galois_conjugate(), || format!("{name}: order {} not conjugate", o.order))?;
                orbits += 1;
            }
        }
    }
    Ok(format!("{orbits} orbit sums are rational"))
}

fn polynomiality() -> Outcome {
    let mut out = Vec::new();
    for (name, base) in [("cp1-k", 2), ("cp2-k", 1)] {
        let p = ok(catalog(name, Some(base)), "catalog")?;
        let d = reduced_degree(&p);
        let fit = ok(tensor_power_polynomial(&p, &[1, 2, 3, 4, 5, 6], d), name)?
            .ok_or_else(|| format!("{name}: values for k = 1..6 do not fit a polynomial of degree {d}"))?;
        let poly: Vec<String> = fit.iter().map(|c| c.to_string()).collect();
        out.push(format!("{name}: degree ≤ {d}, coefficients [{}]", poly.join(", ")));
    }
    Ok(out.join("; "))
}

fn negative_control() -> Outcome {
    let p = ok(catalog("su2-cp1", Some(1)), "catalog")?;
    let v = ok(verify_quantization(&p, None), "verify")?;
    ensure(v.verdict == Verdict::NotAsserted, || format!("verdict {}", v.verdict))?;
    let oracle = ok(character_polynomial(&p, p.degree_bound()), "oracle")
        .and_then(|c| ok(invariant_multiplicity(&c, p.group), "oracle"))?;
    Ok(format!(
        "su2-cp1 k=1: NOT-ASSERTED (index {}, reduced {}, oracle {oracle})",
        v.lefschetz, v.reduced.total
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("calibration", calibration),
        ("quantization identity", quantization_identity),
        ("window vanishing", window_vanishing),
        ("global residue theorem", global_residue_theorem),
        ("character finiteness", character_finiteness),
        ("quasi-free specialization", quasi_free),
        ("correction necessity", correction_necessity),
        ("Galois rationality", galois_rationality),
        ("tensor-power polynomiality", polynomiality),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} {name:<28} PASS  {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name:<28} FAIL  {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
