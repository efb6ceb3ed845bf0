use std::path::Path;

use serde_json::{json, Value};
use solenoid::homology::{analyze, cech_groups, dimension_groups, sft_of_rule};
use solenoid::selfcheck::{replay_obstruction, selfcheck};
use solenoid::{parse_rule, validate, BigInt, ValidationReport, WrappingRule};

use crate::render;
use crate::{Cli, Command};

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Everything one input produced, buffered until all inputs are done.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: u8,
    pub json: Value,
    pub text: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: u8, message: String) -> Self {
        Outcome {
            code,
            json: json!({ "error": message }),
            text: String::new(),
            stderr: format!("{message}\n"),
        }
    }
}

fn load(path: &Path, power: Option<u32>) -> Result<WrappingRule, Outcome> {
    let shown = path.display();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::error(EXIT_USAGE, format!("{shown}: cannot read: {e}")))?;
    let rule = parse_rule(&text).map_err(|e| Outcome::error(EXIT_USAGE, format!("{shown}:{e}")))?;
    Ok(match power {
        Some(n) => rule.power(n),
        None => rule,
    })
}

fn rejected(report: ValidationReport) -> Outcome {
    Outcome {
        code: EXIT_FAIL,
        text: render::validation(&report),
        stderr: format!("not a pre-solenoid: {}\n", report.failures().join(", ")),
        json: json!({ "pre_solenoid": false, "validation": report }),
    }
}

fn internal(path: &Path, e: solenoid::Error) -> Outcome {
    Outcome::error(EXIT_FAIL, format!("{}: {e}", path.display()))
}

pub fn run_file(cli: &Cli, path: &Path) -> Outcome {
    let rule = match load(path, cli.power) {
        Ok(r) => r,
        Err(o) => return o,
    };
    if let Command::Dimgroup { .. } = cli.command {
        return dimgroup(path, &rule);
    }
    let report = validate(&rule);
    if !report.is_pre_solenoid() {
        return rejected(report);
    }
    match &cli.command {
        Command::Validate { .. } => Outcome {
            code: 0,
            text: render::validation(&report),
            json: json!({ "pre_solenoid": true, "validation": report }),
            stderr: String::new(),
        },
        Command::Analyze { .. } => match analyze::<BigInt>(&rule) {
            Ok(h) => Outcome {
                code: 0,
                text: h.to_string(),
                json: serde_json::to_value(&h).expect("serializable"),
                stderr: String::new(),
            },
            Err(e) => internal(path, e),
        },
        Command::Selfcheck { replay, files } => {
            let replay = replay.as_deref().filter(|_| files.first().map(|f| f.as_path()) == Some(path));
            run_selfcheck(path, &rule, replay)
        }
        Command::Cech { .. } => match analyze::<BigInt>(&rule) {
            Ok(h) => Outcome {
                code: 0,
                text: render::cech(&h.cech),
                json: serde_json::to_value(&h.cech).expect("serializable"),
                stderr: String::new(),
            },
            Err(e) => internal(path, e),
        },
        Command::Dimgroup { .. } => unreachable!("handled above"),
    }
}

fn dimgroup(path: &Path, rule: &WrappingRule) -> Outcome {
    let sft = sft_of_rule::<BigInt>(rule);
    match dimension_groups(&sft) {
        Ok((ds, du)) => {
            let text = format!(
                "covering shift: {} vertices, {} edges\ngamma_s:\n{}\nD^s: {ds}\nD^u: {du}",
                sft.vertices,
                sft.edges.len(),
                sft.gamma_s,
            );
            let json = json!({
                "vertices": sft.vertices,
                "edges": sft.edges.len(),
                "gamma_s": sft.gamma_s,
                "gamma_u": sft.gamma_u,
                "dim_s": ds,
                "dim_u": du,
                "cech_h1": cech_groups::<BigInt>(rule).ok().map(|c| c.h1),
            });
            Outcome {
                code: 0,
                json,
                text,
                stderr: String::new(),
            }
        }
        Err(e) => internal(path, e),
    }
}

fn read_replay(path: &Path) -> Result<Vec<i64>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: cannot read: {e}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let w = doc
        .get("w")
        .and_then(Value::as_array)
        .ok_or_else(|| format!("{}: no `w` array", path.display()))?;
    w.iter()
        .map(|x| x.as_i64().ok_or_else(|| format!("{}: `w` entries must be integers", path.display())))
        .collect()
}

fn run_selfcheck(path: &Path, rule: &WrappingRule, replay: Option<&Path>) -> Outcome {
    let mut report = match selfcheck(rule) {
        Ok(r) => r,
        Err(e) => return internal(path, e),
    };
    if let Some(replay) = replay {
        let w = match read_replay(replay) {
            Ok(w) => w,
            Err(msg) => return Outcome::error(EXIT_USAGE, msg),
        };
        match replay_obstruction(rule, &w) {
            Ok(check) => report.checks.push(check),
            Err(e) => return Outcome::error(EXIT_USAGE, format!("{}: {e}", replay.display())),
        }
    }
    let stderr: String = report
        .failures()
        .iter()
        .map(|c| format!("{}: property failed: {}\n", path.display(), c.name))
        .collect();
    Outcome {
        code: if report.passed() { 0 } else { EXIT_FAIL },
        text: render::selfcheck(&report),
        json: json!({ "passed": report.passed(), "checks": report.checks }),
        stderr,
    }
}
