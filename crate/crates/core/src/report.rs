//! Whole-pipeline analysis of a matrix and a parameter, as stable JSON.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{GkzError, Result};
use crate::family::{factor_b, index_sets, IndexKind};
use crate::matrix::IntMatrix;
use crate::poly::TermOrder;
use crate::polyhedral::{face_lattice, hilbert_basis, is_saturated, support_functions};
use crate::resonance::{dsres_face, n_beta, dual_parameter, ResonanceSet};
use crate::scalar::fmt_rational;
use crate::smith::{homogeneity_vector, smith_form};
use crate::toric::{toric_ideal, DEFAULT_FILTRATION_BOUND};
use crate::weyl::{euler_decomposition, gkz_presentation};
use crate::Rational;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub order: TermOrder,
    pub filtration_bound: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { order: TermOrder::default(), filtration_bound: DEFAULT_FILTRATION_BOUND }
    }
}

/// Serializes any value; errors become `{"error": code, "message": ...}`.
pub fn field<T: Serialize>(r: Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).expect("report values serialize"),
        Err(e) => error_value(&e),
    }
}

pub fn error_value(e: &GkzError) -> Value {
    json!({ "error": e.code(), "message": e.to_string() })
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_rational(x))).collect())
}

fn ints(v: &[crate::Int]) -> Value {
    Value::Array(v.iter().map(|x| match num_traits::ToPrimitive::to_i64(x) {
        Some(i) => i.into(),
        None => x.to_string().into(),
    }).collect())
}

/// Builds the analysis report. Individual sections that fail carry their
/// error code; only a parameter of the wrong length fails the whole call.
pub fn run_report(a: &IntMatrix, beta: &[Rational], opts: &ReportOptions) -> Result<Value> {
    if beta.len() != a.nrows() {
        return Err(GkzError::DimensionMismatch(format!("parameter has {} entries, matrix has {} rows", beta.len(), a.nrows())));
    }
    let mut out = Map::new();
    out.insert("schema_version".into(), SCHEMA_VERSION.into());
    out.insert("input".into(), json!({ "matrix": a.to_string(), "beta": rationals(beta) }));

    let lattice = face_lattice(a);
    let spans = a.spans_lattice();
    let homogeneous = homogeneity_vector(a).is_some();
    out.insert(
        "flags".into(),
        json!({
            "pointed": field(lattice.as_ref().map(|l| l.pointed).map_err(Clone::clone)),
            "full_dimensional": field(lattice.as_ref().map(|l| l.full_dimensional).map_err(Clone::clone)),
            "saturated": field(is_saturated(a)),
            "homogeneous": homogeneous,
            "spans_lattice": spans,
        }),
    );
    let snf = smith_form(a);
    out.insert("elementary_divisors".into(), ints(&snf.diagonal[..snf.rank]));
    out.insert("faces".into(), field(lattice.clone().map(|l| l.faces)));
    out.insert("support_functions".into(), field(support_functions(a)));
    out.insert("hilbert_basis".into(), field(hilbert_basis(a).map(|hb| hb.iter().map(|v| ints(v)).collect::<Vec<_>>())));

    let ideal = toric_ideal(a, opts.order);
    out.insert(
        "toric_ideal".into(),
        json!({
            "order": opts.order.to_string(),
            "generators": ideal.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        }),
    );

    let resonance = ResonanceSet::with_order(a, opts.order, opts.filtration_bound);
    let qdeg = resonance.as_ref().map(|set| {
        let mut per: Map<String, Value> = Map::new();
        for c in &set.components {
            let entry = per.entry(c.column.to_string()).or_insert_with(|| Value::Array(Vec::new()));
            entry.as_array_mut().expect("array").push(json!({ "offset": ints(&c.offset), "face": c.face.columns }));
        }
        Value::Object(per)
    });
    out.insert("quasi_degrees".into(), field(qdeg.map_err(Clone::clone)));

    let sres = resonance.as_ref().map(|set| {
        let w = set.witness(beta);
        json!({ "member": w.is_some(), "witness": w })
    });
    out.insert("sres".into(), field(sres.map_err(Clone::clone)));
    let dsres = lattice.as_ref().map(|l| {
        let f = dsres_face(a, l, beta);
        json!({ "member": f.is_some(), "face": f })
    });
    out.insert("dsres".into(), field(dsres.map_err(Clone::clone)));
    out.insert("delta".into(), field(resonance.as_ref().map_err(Clone::clone).and_then(|s| s.delta()).map(|d| ints(&d))));
    out.insert("n_beta".into(), field(n_beta(a, beta).map(|n| n.to_string())));
    out.insert("dual_parameter".into(), field(dual_parameter(a, beta).map(|p| rationals(&p))));
    out.insert("monodromic".into(), match euler_decomposition(a) {
        Some(e) => json!({ "h": ints(&e.h), "b": fmt_rational(&e.b(beta)) }),
        None => Value::Null,
    });
    out.insert("presentation".into(), field(gkz_presentation(a, beta, opts.order)));

    if !spans {
        let family = factor_b(a).map(|f| {
            json!({
                "factorization": f,
                "index_set_I": field(index_sets(a, IndexKind::Resonance)),
                "index_set_I_prime": field(index_sets(a, IndexKind::Dual)),
            })
        });
        out.insert("family".into(), field(family));
    }
    Ok(Value::Object(out))
}

/// Stable pretty JSON with sorted keys.
pub fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> IntMatrix {
        IntMatrix::parse(s).unwrap()
    }

    fn zero(d: usize) -> Vec<Rational> {
        vec![Rational::from_integer(0.into()); d]
    }

    #[test]
    fn example_one() {
        let r = run_report(&m("1"), &zero(1), &ReportOptions::default()).unwrap();
        assert_eq!(r["sres"]["member"], false);
        assert_eq!(r["dual_parameter"], json!(["-1"]));
        assert_eq!(r["presentation"]["eulers"], json!(["l0*d0"]));
        assert_eq!(r["schema_version"], 1);
    }

    #[test]
    fn example_two() {
        let r = run_report(&m("3 2 0; 1 1 1"), &zero(2), &ReportOptions::default()).unwrap();
        assert_eq!(r["flags"]["saturated"], false);
        assert_eq!(r["toric_ideal"]["generators"].as_array().unwrap().len(), 1);
        assert_eq!(r["quasi_degrees"]["0"].as_array().unwrap().len(), 3);
        assert_eq!(r["monodromic"]["h"], json!([0, 1]));
        assert!(r["dual_parameter"].is_array());
    }

    #[test]
    fn homogenized_and_deterministic() {
        let a = m("1 1 1; 0 1 -1");
        let r = run_report(&a, &zero(2), &ReportOptions::default()).unwrap();
        assert_eq!(r["flags"]["homogeneous"], true);
        assert_eq!(r["monodromic"]["h"], json!([1, 0]));
        let again = run_report(&a, &zero(2), &ReportOptions::default()).unwrap();
        assert_eq!(to_json(&r), to_json(&again));
        assert!(run_report(&a, &zero(1), &ReportOptions::default()).is_err());
    }

    #[test]
    fn family_section_for_non_spanning() {
        let r = run_report(&m("2"), &zero(1), &ReportOptions::default()).unwrap();
        assert_eq!(r["family"]["index_set_I"]["members"].as_array().unwrap().len(), 2);
    }
}
