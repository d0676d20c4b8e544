//! The bundled example corpus: session files with frozen golden outputs
//! (verdicts and witnesses, not just booleans). `corpus` replays every
//! case and compares the structured output byte for byte.

use crate::report::render_json;
use crate::session::{parse_session, run_session};
use serde_json::json;

pub struct CorpusCase {
    pub name: &'static str,
    pub session: &'static str,
    pub golden: &'static str,
}

pub const CASES: &[CorpusCase] = &[
    CorpusCase {
        name: "reg1_2",
        session: include_str!("../corpus/reg1_2.rts"),
        golden: include_str!("../corpus/reg1_2.golden.json"),
    },
    CorpusCase {
        name: "reg2_1_1",
        session: include_str!("../corpus/reg2_1_1.rts"),
        golden: include_str!("../corpus/reg2_1_1.golden.json"),
    },
    CorpusCase {
        name: "reg2_3",
        session: include_str!("../corpus/reg2_3.rts"),
        golden: include_str!("../corpus/reg2_3.golden.json"),
    },
    CorpusCase {
        name: "reg2_5",
        session: include_str!("../corpus/reg2_5.rts"),
        golden: include_str!("../corpus/reg2_5.golden.json"),
    },
    CorpusCase {
        name: "reg4",
        session: include_str!("../corpus/reg4.rts"),
        golden: include_str!("../corpus/reg4.golden.json"),
    },
    CorpusCase {
        name: "reg5",
        session: include_str!("../corpus/reg5.rts"),
        golden: include_str!("../corpus/reg5.golden.json"),
    },
    CorpusCase {
        name: "reg6",
        session: include_str!("../corpus/reg6.rts"),
        golden: include_str!("../corpus/reg6.golden.json"),
    },
    CorpusCase {
        name: "reg7",
        session: include_str!("../corpus/reg7.rts"),
        golden: include_str!("../corpus/reg7.golden.json"),
    },
];

#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

/// Replay one session and compare against an expected output.
pub fn compare_case(name: &str, session_src: &str, golden: &str) -> CaseResult {
    let produced = match parse_session(session_src) {
        Ok(s) => render_json(&run_session(&s)),
        Err(e) => {
            return CaseResult {
                name: name.to_string(),
                pass: false,
                detail: Some(format!("session failed to parse: {e}")),
            }
        }
    };
    if produced == golden {
        return CaseResult {
            name: name.to_string(),
            pass: true,
            detail: None,
        };
    }
    let detail = produced
        .lines()
        .zip(golden.lines())
        .enumerate()
        .find(|(_, (a, b))| a != b)
        .map(|(i, (a, b))| format!("first difference at line {}: got `{a}`, want `{b}`", i + 1))
        .unwrap_or_else(|| "outputs differ in length".to_string());
    CaseResult {
        name: name.to_string(),
        pass: false,
        detail: Some(detail),
    }
}

/// Run every bundled case whose name contains `filter` (all when absent).
pub fn run_corpus(filter: Option<&str>) -> Vec<CaseResult> {
    CASES
        .iter()
        .filter(|c| filter.map(|f| c.name.contains(f)).unwrap_or(true))
        .map(|c| compare_case(c.name, c.session, c.golden))
        .collect()
}

pub fn render_corpus_text(results: &[CaseResult]) -> String {
    let mut out = String::new();
    let width = results
        .iter()
        .map(|r| r.name.len())
        .max()
        .unwrap_or(4)
        .max(4);
    for r in results {
        out.push_str(&format!(
            "{:width$}  {}\n",
            r.name,
            if r.pass { "pass" } else { "FAIL" },
            width = width
        ));
        if let Some(d) = &r.detail {
            out.push_str(&format!("{:width$}  {d}\n", "", width = width));
        }
    }
    let passed = results.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed}/{} pass\n", results.len()));
    out
}

pub fn render_corpus_json(results: &[CaseResult]) -> String {
    let v = json!({
        "schema_version": crate::report::SCHEMA_VERSION,
        "cases": results
            .iter()
            .map(|r| json!({"name": r.name, "pass": r.pass, "detail": r.detail}))
            .collect::<Vec<_>>(),
        "passed": results.iter().filter(|r| r.pass).count(),
        "total": results.len(),
    });
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_cases_pass() {
        let results = run_corpus(None);
        assert_eq!(results.len(), 8);
        for r in &results {
            assert!(r.pass, "case {} failed: {:?}", r.name, r.detail);
        }
    }

    #[test]
    fn filter_selects_one() {
        let results = run_corpus(Some("reg7"));
        assert_eq!(results.len(), 1);
        assert!(results[0].pass);
    }

    #[test]
    fn tampered_golden_fails() {
        let case = &CASES[0];
        let tampered = case.golden.replace("regular", "not_regular");
        assert_ne!(case.golden, &tampered);
        let r = compare_case(case.name, case.session, &tampered);
        assert!(!r.pass);
        assert!(r.detail.is_some());
    }
}
