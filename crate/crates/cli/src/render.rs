//! JSON encodings shared by the subcommands.

use hnquiver_core::purity::ClassFit;
use hnquiver_core::{CountPolynomial, DimVector, HnType, PurityReport, Verdict};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Coefficients from the constant term up. Integers that fit in `i64` are
/// numbers; anything else is a string such as `"1/2"`.
pub fn poly_json(p: &CountPolynomial) -> Value {
    p.coeffs()
        .iter()
        .map(|c| match (c.is_integer(), c.to_integer().to_i64()) {
            (true, Some(n)) => json!(n),
            _ => json!(c.to_string()),
        })
        .collect()
}

pub fn dims_json(d: &DimVector) -> Value {
    json!(d.coords())
}

pub fn type_json(t: &HnType) -> Value {
    t.pieces().iter().map(dims_json).collect()
}

fn class_json(c: &ClassFit) -> Value {
    json!({
        "residue": c.residue,
        "fitted": poly_json(&c.fitted),
        "integral": c.integral,
        "overdetermined": c.overdetermined,
        "residuals": c.residuals.iter().map(|(n, r)| json!([n, r.to_string()])).collect::<Vec<_>>(),
    })
}

pub fn report_json(r: &PurityReport) -> Value {
    let (verdict, period, polys) = match &r.verdict {
        Verdict::StrongPolynomial(p) => ("strong-polynomial", Some(1), vec![poly_json(p)]),
        Verdict::PeriodicPolynomial { period, polys } => (
            "periodic-polynomial",
            Some(*period),
            polys.iter().map(poly_json).collect(),
        ),
        Verdict::Inconclusive => ("inconclusive", None, Vec::new()),
    };
    json!({
        "verdict": verdict,
        "period": period,
        "polys": polys,
        "classes": r.details.iter().map(class_json).collect::<Vec<_>>(),
    })
}
