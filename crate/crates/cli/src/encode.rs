//! JSON views of core reports. Exact quantities stay exact: rationals as
//! `"p/q"` strings, field elements as coordinate arrays next to a text form.

use num_bigint::BigInt;
use refspline_core::codec::{fe_to_json, fe_vec_to_json, mask_to_json, mvtrig_to_json, rat_to_json};
use refspline_core::refinery::{ChainStructure, Coverage, DecayReport, LawtonReport};
use refspline_core::{FactorizationReport, FieldElement, MvReport, RefinabilityReport, Witness};
use serde_json::{json, Value};

pub fn fe(x: &FieldElement) -> Value {
    json!({ "coords": fe_to_json(x), "text": x.to_string() })
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|p| Value::String(p.to_string())).collect())
}

pub fn witness(w: &Witness) -> Value {
    let body = match w {
        Witness::ConditionB { column, value } => json!({ "column": column, "value": fe(value) }),
        Witness::Division(d) => json!({
            "column": d.column,
            "divisor": fe(&d.divisor),
            "representative": fe(&d.representative),
            "class_sum": rat_to_json(&d.class_sum),
        }),
        Witness::Slice { probe, inner } => json!({ "probe": probe, "inner": witness(inner) }),
        Witness::MvDivision { column } => json!({ "column": column }),
        Witness::ConditionA => json!({}),
    };
    json!({ "kind": w.kind(), "detail": body })
}

fn chains(c: &ChainStructure) -> Value {
    json!({
        "cycle_length": c.l,
        "cycle": c.cycle,
        "multipliers": ints(&c.multipliers),
        "subvector": c.subvector.iter().map(fe).collect::<Vec<_>>(),
        "divisibility_ok": c.divisibility_ok,
        "k": c.k,
        "partition": c.partition,
    })
}

pub fn refinability(r: &RefinabilityReport) -> Value {
    let c = &r.construction;
    json!({
        "verdict": r.verdict.as_str(),
        "lambda": fe(&r.lambda),
        "columns": r.columns.iter().map(fe).collect::<Vec<_>>(),
        "normalized_columns": c.normalized.iter().map(fe).collect::<Vec<_>>(),
        "phase_shift": fe(&c.phase_shift),
        "mask": r.mask().map(mask_to_json),
        "identity_verified": c.identity_verified,
        "conditions": { "a": r.flags.a, "b": r.flags.b, "c": r.flags.c, "d": r.flags.d },
        "chains": r.chains.as_ref().map(chains),
        "witness": r.witness.as_ref().map(witness),
        "witness_verified": r.witness.as_ref().map(|_| r.verify_witness()),
    })
}

pub fn coverage(c: &Coverage) -> Value {
    json!({
        "consistent": c.consistent,
        "bound": c.bound,
        "zeros_checked": c.zeros_checked,
        "uncovered": c.uncovered.as_ref().map(|u| json!({
            "w": fe(&u.w),
            "denominator_multiplicity": u.denominator_multiplicity,
            "numerator_multiplicity": u.numerator_multiplicity,
        })),
    })
}

pub fn multivariate(r: &MvReport) -> Value {
    json!({
        "verdict": r.verdict.as_str(),
        "lambda": fe(&r.lambda),
        "mask": r.mask.as_ref().map(|m| json!({
            "lambda": fe_to_json(m.lambda()),
            "mask": mvtrig_to_json(m.mask()),
            "text": m.mask().to_string(),
        })),
        "probes": r.probes,
        "slices": r.slices.iter().zip(&r.probes).map(|(s, p)| json!({
            "probe": p,
            "verdict": s.verdict.as_str(),
            "columns": fe_vec_to_json(&s.columns),
            "mask": s.mask().map(|m| m.mask().to_string()),
        })).collect::<Vec<_>>(),
        "relations": r.relations.iter().map(|c| json!({ "from": c.from, "to": c.to, "p": c.p.to_string() })).collect::<Vec<_>>(),
        "chains": r.chains,
        "partition": r.partition,
        "k": r.k,
        "witness": r.witness.as_ref().map(witness),
        "identity_verified": r.identity_verified,
        "slice_masks_match": r.slice_masks_match,
        "partition_mask_matches": r.partition_mask_matches,
    })
}

pub fn lawton(r: &LawtonReport) -> Value {
    json!({
        "refinable": r.refinable,
        "q": r.q.to_string(),
        "quotient": r.quotient.as_ref().map(ToString::to_string),
        "remainder": r.remainder.to_string(),
    })
}

pub fn decay(r: &DecayReport) -> Value {
    json!({
        "lambda": fe(&r.lambda),
        "period": r.period.to_string(),
        "roots": r.roots.iter().map(|z| json!({
            "w": z.w,
            "exact": z.exact.as_ref().map(rat_to_json),
            "target": rat_to_json(&z.target),
        })).collect::<Vec<_>>(),
        "certificate": r.certificate.as_ref().map(|c| c.to_json()),
        "xi0": fe(&r.xi0),
        "c_effective": rat_to_json(&r.c_effective),
        "jmax": r.j_max,
        "epsilon0_lower": rat_to_json(&r.epsilon0),
        "epsilon0_positive": r.epsilon0_positive(),
        "argmin": r.argmin,
        "obstruction_k": r.obstruction_k,
    })
}

pub fn factorization(r: &FactorizationReport) -> Value {
    json!({
        "k": r.k,
        "alpha_fit": r.alpha_fit,
        "alpha_predicted": r.alpha_predicted,
        "relative_distance": r.relative_distance,
        "trivial": r.trivial,
    })
}
