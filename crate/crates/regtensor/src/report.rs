//! Rendering of session reports: deterministic human-readable text and a
//! stable JSON schema (`schema_version` 1). JSON object keys are emitted in
//! sorted order, so byte-identical reruns are guaranteed.

use crate::engine::{Verdict, Witness};
use crate::session::{QueryOutcome, QueryRecord, SessionReport};
use crate::tensor::TensorAnalysis;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "text" => Some(Format::Text),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Degree {
            subset,
            base_degree,
            extended_degree,
        } => json!({
            "kind": "degree",
            "subset": subset,
            "base_degree": base_degree,
            "extended_degree": extended_degree,
        }),
        Witness::Intersection {
            subset,
            lhs,
            lhs_dim,
            rhs,
            rhs_dim,
            equal,
        } => json!({
            "kind": "intersection",
            "subset": subset,
            "lhs": lhs,
            "lhs_dim": lhs_dim,
            "rhs": rhs,
            "rhs_dim": rhs_dim,
            "equal": equal,
        }),
        Witness::Nilpotent { element } => json!({
            "kind": "nilpotent",
            "element": element,
        }),
        Witness::Idempotents { elements } => json!({
            "kind": "idempotents",
            "elements": elements,
        }),
        Witness::Separability {
            shape,
            separable_degree,
            insep_exponent,
            generators,
        } => json!({
            "kind": "separability",
            "shape": shape,
            "separable_degree": separable_degree,
            "insep_exponent": insep_exponent,
            "generators": generators
                .iter()
                .map(|(name, m, a)| json!({"generator": name, "power": m, "constant": a}))
                .collect::<Vec<_>>(),
        }),
    }
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "verdict": v.regular.as_str(),
        "noetherian": v.noetherian.as_str(),
        "krull_dim": v.krull_dim,
        "rule_chain": v
            .certificate
            .rules
            .iter()
            .map(|r| json!({"rule": r.rule, "note": r.note}))
            .collect::<Vec<_>>(),
        "witnesses": v.certificate.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
        "assumptions": v.certificate.assumptions,
    })
}

fn analysis_json(a: &TensorAnalysis, agrees: Option<bool>) -> Value {
    json!({
        "dim_over_l": a.dim_over_l,
        "reduced": a.is_reduced,
        "domain": a.is_domain,
        "field": a.is_field,
        "regular_direct": a.regular_direct(),
        "nilradical_dim": a.nilradical_dim,
        "nilradical_basis": a.nilradical_basis,
        "idempotents": a.idempotents,
        "factors": a
            .factors
            .iter()
            .map(|f| json!({
                "dim_over_l": f.dim_over_l,
                "residue_degree_over_l": f.residue_degree_over_l,
                "residue_field": f.residue_field,
                "maximal_ideal": f.maximal_ideal,
                "nilpotency_index": f.nilpotency_index,
                "edim": f.edim,
                "is_field": f.is_field,
            }))
            .collect::<Vec<_>>(),
        "verified": a.verified,
        "agrees_with_rules": agrees,
    })
}

fn record_json(r: &QueryRecord) -> Value {
    match &r.outcome {
        Err(e) => json!({
            "query": r.query,
            "status": "error",
            "error": e,
        }),
        Ok(QueryOutcome::Verdict(v)) => {
            let mut obj = json!({
                "query": r.query,
                "status": "ok",
                "kind": "verdict",
            });
            merge(&mut obj, verdict_json(v));
            obj
        }
        Ok(QueryOutcome::Dim(d)) => json!({
            "query": r.query,
            "status": "ok",
            "kind": "dim",
            "dim": d,
        }),
        Ok(QueryOutcome::Intersection(i)) => json!({
            "query": r.query,
            "status": "ok",
            "kind": "intersect",
            "left_dim": i.left_dim,
            "right_dim": i.right_dim,
            "meet_dim": i.meet_dim,
            "base_dim": i.base_dim,
            "equals_base": i.equals_base,
            "context": i.context,
        }),
        Ok(QueryOutcome::Decomposition {
            analysis,
            agrees_with_rules,
        }) => {
            let mut obj = json!({
                "query": r.query,
                "status": "ok",
                "kind": "decompose",
            });
            merge(&mut obj, analysis_json(analysis, *agrees_with_rules));
            obj
        }
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        for (k, v) in b {
            a.insert(k, v);
        }
    }
}

pub fn render_json(report: &SessionReport) -> String {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "records": report.records.iter().map(record_json).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn render_text(report: &SessionReport) -> String {
    let mut out = String::new();
    for r in &report.records {
        out.push_str(&format!("== query {}\n", r.query));
        match &r.outcome {
            Err(e) => out.push_str(&format!("error: {e}\n")),
            Ok(QueryOutcome::Verdict(v)) => {
                out.push_str(&format!("verdict: {}\n", v.regular.as_str()));
                out.push_str(&format!("noetherian: {}\n", v.noetherian.as_str()));
                match v.krull_dim {
                    Some(d) => out.push_str(&format!("krull_dim: {d}\n")),
                    None => out.push_str("krull_dim: unknown\n"),
                }
                for rule in &v.certificate.rules {
                    out.push_str(&format!("rule {}: {}\n", rule.rule, rule.note));
                }
                for w in &v.certificate.witnesses {
                    out.push_str(&format!("witness: {}\n", witness_text(w)));
                }
                for a in &v.certificate.assumptions {
                    out.push_str(&format!("assumption: {a}\n"));
                }
            }
            Ok(QueryOutcome::Dim(d)) => out.push_str(&format!("dim: {d}\n")),
            Ok(QueryOutcome::Intersection(i)) => {
                out.push_str(&format!(
                    "dims: left {} right {} meet {} base {}\n",
                    i.left_dim, i.right_dim, i.meet_dim, i.base_dim
                ));
                out.push_str(&format!("meet equals base: {}\n", i.equals_base));
                out.push_str(&format!("context: {}\n", i.context));
            }
            Ok(QueryOutcome::Decomposition {
                analysis,
                agrees_with_rules,
            }) => {
                out.push_str(&format!(
                    "dimension over L: {}; reduced: {}; domain: {}; field: {}\n",
                    analysis.dim_over_l, analysis.is_reduced, analysis.is_domain, analysis.is_field
                ));
                for (i, f) in analysis.factors.iter().enumerate() {
                    out.push_str(&format!(
                        "factor {}: dim {} over L, residue {} (degree {}), nilpotency {}, edim \
                         {}, field: {}\n",
                        i + 1,
                        f.dim_over_l,
                        f.residue_field,
                        f.residue_degree_over_l,
                        f.nilpotency_index,
                        f.edim,
                        f.is_field
                    ));
                    if !f.maximal_ideal.is_empty() {
                        out.push_str(&format!(
                            "  maximal ideal: ({})\n",
                            f.maximal_ideal.join(", ")
                        ));
                    }
                }
                if !analysis.nilradical_basis.is_empty() {
                    out.push_str(&format!(
                        "nilradical basis: {}\n",
                        analysis.nilradical_basis.join(", ")
                    ));
                }
                if analysis.idempotents.len() > 1 {
                    out.push_str(&format!(
                        "idempotents: {}\n",
                        analysis.idempotents.join(" | ")
                    ));
                }
                out.push_str(&format!(
                    "regular (direct): {}; structurally verified: {}",
                    analysis.regular_direct(),
                    analysis.verified
                ));
                match agrees_with_rules {
                    Some(a) => out.push_str(&format!("; agrees with rules: {a}\n")),
                    None => out.push('\n'),
                }
            }
        }
        out.push('\n');
    }
    out
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Degree {
            subset,
            base_degree,
            extended_degree,
        } => format!(
            "degree: S' = {{{}}}: [k(S'):k] = {base_degree}, [L(S'):L] = {extended_degree}",
            subset.join(", ")
        ),
        Witness::Intersection {
            subset,
            lhs,
            lhs_dim,
            rhs,
            rhs_dim,
            equal,
        } => format!(
            "intersection at {{{}}}: {lhs} (dim {lhs_dim}) {} {rhs} (dim {rhs_dim})",
            subset.join(", "),
            if *equal { "=" } else { "!=" }
        ),
        Witness::Nilpotent { element } => format!("nilpotent: {element}"),
        Witness::Idempotents { elements } => {
            format!("idempotents: {}", elements.join(" | "))
        }
        Witness::Separability {
            shape,
            separable_degree,
            insep_exponent,
            generators,
        } => {
            let gens: Vec<String> = generators
                .iter()
                .map(|(n, m, a)| format!("{n} (X^(p^{m}) - {a})"))
                .collect();
            format!(
                "separability: shape {shape}, separable degree {separable_degree}, exponent \
                 {insep_exponent}, generators [{}]",
                gens.join("; ")
            )
        }
    }
}
