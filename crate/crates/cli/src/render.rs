//! Human-readable renderings of the JSON data.

use std::path::PathBuf;

use serde_json::{json, Value};
use solenoid::homology::CechResult;
use solenoid::selfcheck::SelfCheckReport;
use solenoid::validate::{FlatteningOutcome, MixingOutcome, NonfoldingOutcome, SimpleOutcome};
use solenoid::{BigInt, ValidationReport};

use crate::commands::Outcome;

fn simple(o: &SimpleOutcome) -> String {
    match o {
        SimpleOutcome::Pass => "pass".into(),
        SimpleOutcome::Fail { reason } => format!("fail: {reason}"),
    }
}

pub fn validation(r: &ValidationReport) -> String {
    let mixing = match &r.mixing {
        MixingOutcome::Pass { witness } => format!("pass (power {witness} is positive)"),
        MixingOutcome::Fail { reason } => format!("fail: {reason}"),
    };
    let nonfolding = match &r.nonfolding {
        NonfoldingOutcome::Pass => "pass".to_string(),
        NonfoldingOutcome::Fail { violations } => {
            let v: Vec<String> = violations
                .iter()
                .map(|v| format!("{} at position {} (depth {})", v.edge_name, v.position, v.depth))
                .collect();
            format!("fail: {}", v.join("; "))
        }
        NonfoldingOutcome::Skipped { reason } => format!("skipped: {reason}"),
    };
    let flattening = match &r.flattening {
        FlatteningOutcome::Pass { d } => format!("pass (d = {d})"),
        FlatteningOutcome::Fail { stabilized_image_size } => {
            format!("fail: germ image stabilizes at {stabilized_image_size} germs")
        }
        FlatteningOutcome::Skipped { reason } => format!("skipped: {reason}"),
    };
    let verdict = if r.is_pre_solenoid() {
        "pre-solenoid".to_string()
    } else {
        format!("not a pre-solenoid (failed: {})", r.failures().join(", "))
    };
    format!(
        "nonempty words: {}\nmixing: {mixing}\nnon-folding: {nonfolding}\nflattening: {flattening}\n\
         expansion surrogate: {}\nmarkov: {}\nresult: {verdict}",
        simple(&r.nonempty_words),
        simple(&r.expansion_surrogate),
        simple(&r.markov),
    )
}

pub fn selfcheck(r: &SelfCheckReport) -> String {
    let mut lines: Vec<String> = r
        .checks
        .iter()
        .map(|c| {
            let mark = if c.passed { "pass" } else { "FAIL" };
            match &c.detail {
                Some(d) => format!("{mark}  {} ({d})", c.name),
                None => format!("{mark}  {}", c.name),
            }
        })
        .collect();
    let failed = r.failures().len();
    lines.push(format!("{} properties, {failed} failed", r.checks.len()));
    lines.join("\n")
}

pub fn cech(c: &CechResult<BigInt>) -> String {
    let mut s = format!("H^0: {}\nH^1: {}", c.h0, c.h1);
    if let Some(cmp) = &c.comparison {
        if let Some(eq) = cmp.stationary_data_equal {
            s.push_str(&format!(
                "\nat power {}: signed matrix equals unsigned: {}, stationary data equal to H^u_0: {eq}",
                cmp.compared_at_power,
                cmp.signed_equals_unsigned.unwrap_or(false),
            ));
        }
        let verdict = if cmp.invariants_equal { "agree" } else { "differ" };
        s.push_str(&format!("\ninvariants of H^1 and H^u_0 {verdict}"));
    }
    s
}

pub fn json_document(files: &[PathBuf], outcomes: &[Outcome]) -> String {
    let doc = if outcomes.len() == 1 {
        outcomes[0].json.clone()
    } else {
        Value::Array(
            files
                .iter()
                .zip(outcomes)
                .map(|(p, o)| json!({ "path": p.display().to_string(), "exit_code": o.code, "result": o.json }))
                .collect(),
        )
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn text_document(files: &[PathBuf], outcomes: &[Outcome]) -> String {
    let mut s = String::new();
    for (p, o) in files.iter().zip(outcomes) {
        if o.text.is_empty() {
            continue;
        }
        if outcomes.len() > 1 {
            s.push_str(&format!("== {} ==\n", p.display()));
        }
        s.push_str(&o.text);
        s.push('\n');
    }
    s
}
