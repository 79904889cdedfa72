//! JSON instance documents.
//!
//! ```json
//! {
//!   "group": "U1",
//!   "components": [
//!     { "name": "line", "moment": -1, "weights": [-1],
//!       "ring": { "generators": [{ "name": "x", "order": 2 }], "top_degree": 2,
//!                 "integrals": { "x": "1" } },
//!       "omega": { "x": "2" }, "todd": { "1": "1", "x": "1" },
//!       "normal_chern": [{ "x": "1" }] },
//!     { "name": "p", "moment": 1, "weights": [1, 1] }
//!   ]
//! }
//! ```
//!
//! Classes are maps from monomials (`"1"`, `"x"`, `"x^2*y"`) to exact
//! rationals written as strings (`"7/3"`) or JSON integers. Floats are
//! rejected. `ring`, `omega`, `todd` and `normal_chern` may be omitted for an
//! isolated point.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cohomology::{parse_monomial, CohomologyClass, Generator, RingPresentation};
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Cyclotomic, Rational};

use super::{FixedComponent, GroupKind, ProblemInstance};

pub fn instance_from_json(text: &str) -> Result<ProblemInstance> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    parse_instance(&doc)
}

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::parse(path, "expected an object"))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    o.get(key)
        .ok_or_else(|| Error::parse(path, format!("missing field `{key}`")))
}

fn integer(v: &Value, path: &str) -> Result<i64> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .ok_or_else(|| Error::parse(path, format!("`{n}` is not an integer (floats are not accepted)"))),
        _ => Err(Error::parse(path, "expected an integer")),
    }
}

fn rational(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(path, message),
            other => other,
        }),
        Value::Number(_) => integer(v, path).map(crate::exactnum::int),
        _ => Err(Error::parse(path, "expected a rational literal such as \"7/3\"")),
    }
}

fn check_keys(o: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match o.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::parse(path, format!("unknown field `{k}`"))),
        None => Ok(()),
    }
}

fn parse_instance(doc: &Value) -> Result<ProblemInstance> {
    let o = obj(doc, "$")?;
    check_keys(o, &["group", "components"], "$")?;
    let group: GroupKind = field(o, "group", "$")?
        .as_str()
        .ok_or_else(|| Error::parse("$.group", "expected a string"))?
        .parse()
        .map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse("$.group", message),
            other => other,
        })?;
    let comps = field(o, "components", "$")?
        .as_array()
        .ok_or_else(|| Error::parse("$.components", "expected an array"))?;
    let components = comps
        .iter()
        .enumerate()
        .map(|(i, c)| parse_component(c, &format!("$.components[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProblemInstance::new(group, components))
}

fn parse_ring(v: Option<&Value>, path: &str) -> Result<Arc<RingPresentation>> {
    let Some(v) = v else {
        return Ok(RingPresentation::point());
    };
    let o = obj(v, path)?;
    check_keys(o, &["generators", "top_degree", "integrals"], path)?;
    let gens = match o.get("generators") {
        None => vec![],
        Some(g) => g
            .as_array()
            .ok_or_else(|| Error::parse(format!("{path}.generators"), "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let p = format!("{path}.generators[{i}]");
                let go = obj(g, &p)?;
                check_keys(go, &["name", "order"], &p)?;
                let name = field(go, "name", &p)?
                    .as_str()
                    .ok_or_else(|| Error::parse(format!("{p}.name"), "expected a string"))?
                    .to_string();
                let order = integer(field(go, "order", &p)?, &format!("{p}.order"))?;
                let order = u32::try_from(order)
                    .map_err(|_| Error::parse(format!("{p}.order"), "order must be a positive integer"))?;
                Ok(Generator { name, order })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let top = integer(field(o, "top_degree", path)?, &format!("{path}.top_degree"))?;
    let top = u32::try_from(top)
        .map_err(|_| Error::parse(format!("{path}.top_degree"), "must be non-negative"))?;
    let mut integrals = BTreeMap::new();
    if let Some(iv) = o.get("integrals") {
        let io = obj(iv, &format!("{path}.integrals"))?;
        for (m, q) in io {
            let p = format!("{path}.integrals[\"{m}\"]");
            integrals.insert(monomial(&gens, m, &p)?, rational(q, &p)?);
        }
    }
    RingPresentation::new(gens, top, integrals)
        .map(Arc::new)
        .map_err(|e| Error::parse(path, e.to_string()))
}

fn monomial(gens: &[Generator], s: &str, path: &str) -> Result<Vec<u32>> {
    parse_monomial(gens, s).map_err(|e| Error::parse(path, e.to_string()))
}

fn parse_class(v: &Value, ring: &Arc<RingPresentation>, path: &str) -> Result<CohomologyClass> {
    let o = obj(v, path)?;
    let mut terms = Vec::new();
    for (m, q) in o {
        let p = format!("{path}[\"{m}\"]");
        let mono = monomial(ring.generators(), m, &p)?;
        if mono.iter().zip(ring.generators()).any(|(e, g)| *e >= g.order) {
            return Err(Error::parse(p, format!("monomial `{m}` exceeds a nilpotency order")));
        }
        terms.push((mono, Cyclotomic::from_rational(rational(q, &p)?)));
    }
    CohomologyClass::from_terms(ring, terms)
}

fn parse_component(v: &Value, path: &str) -> Result<FixedComponent> {
    let o = obj(v, path)?;
    check_keys(
        o,
        &["name", "moment", "weights", "ring", "omega", "todd", "normal_chern"],
        path,
    )?;
    let name = field(o, "name", path)?
        .as_str()
        .ok_or_else(|| Error::parse(format!("{path}.name"), "expected a string"))?
        .to_string();
    let moment = integer(field(o, "moment", path)?, &format!("{path}.moment"))?;
    let weights = field(o, "weights", path)?
        .as_array()
        .ok_or_else(|| Error::parse(format!("{path}.weights"), "expected an array"))?
        .iter()
        .enumerate()
        .map(|(j, w)| integer(w, &format!("{path}.weights[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    let ring = parse_ring(o.get("ring"), &format!("{path}.ring"))?;
    let omega = match o.get("omega") {
        Some(v) => parse_class(v, &ring, &format!("{path}.omega"))?,
        None => CohomologyClass::zero(&ring),
    };
    let todd = match o.get("todd") {
        Some(v) => parse_class(v, &ring, &format!("{path}.todd"))?,
        None if ring.is_point() => CohomologyClass::one(&ring),
        None => return Err(Error::parse(path, "missing field `todd` for a non-isolated component")),
    };
    let normal_chern = match o.get("normal_chern") {
        Some(v) => v
            .as_array()
            .ok_or_else(|| Error::parse(format!("{path}.normal_chern"), "expected an array"))?
            .iter()
            .enumerate()
            .map(|(j, c)| parse_class(c, &ring, &format!("{path}.normal_chern[{j}]")))
            .collect::<Result<Vec<_>>>()?,
        None => vec![CohomologyClass::zero(&ring); weights.len()],
    };
    FixedComponent::new(name, ring, moment, weights, normal_chern, omega, todd)
        .map_err(|e| Error::parse(path, e.to_string()))
}

fn class_to_json(c: &CohomologyClass) -> Result<Value> {
    let mut m = Map::new();
    for (mono, q) in c.terms() {
        let q = q.rational_part()?;
        m.insert(c.ring().format_monomial(mono), Value::String(format_rational(&q)));
    }
    Ok(Value::Object(m))
}

/// Serializes an instance in the input schema.
pub fn instance_to_json(p: &ProblemInstance) -> Result<Value> {
    let comps = p
        .components
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert("name".into(), json!(c.name));
            o.insert("moment".into(), json!(c.moment));
            o.insert("weights".into(), json!(c.weights));
            if !c.is_isolated() {
                let integrals: Map<String, Value> = c
                    .ring
                    .integrals()
                    .iter()
                    .map(|(m, q)| (c.ring.format_monomial(m), Value::String(format_rational(q))))
                    .collect();
                o.insert(
                    "ring".into(),
                    json!({
                        "generators": c.ring.generators().iter()
                            .map(|g| json!({"name": g.name, "order": g.order}))
                            .collect::<Vec<_>>(),
                        "top_degree": c.ring.top_degree(),
                        "integrals": integrals,
                    }),
                );
                o.insert("omega".into(), class_to_json(&c.omega)?);
                o.insert("todd".into(), class_to_json(&c.todd)?);
                o.insert(
                    "normal_chern".into(),
                    Value::Array(c.normal_chern.iter().map(class_to_json).collect::<Result<_>>()?),
                );
            }
            Ok(Value::Object(o))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "group": p.group.to_string(), "components": comps }))
}
