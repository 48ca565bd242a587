use std::fs;
use std::path::{Path, PathBuf};

use gibbsloss_core::measure::{
    obstruction_diagnose, pushforward, row_family, tune_class_rate, validate_markov, MarkovMeasure, Mode, RawMeasure,
};
use gibbsloss_core::properties::{
    continuing_diagnosis, eresolving_check, fiber_mixing_certificate, nearly_fiber_mixing_verdict, PropertyVerdict,
    Status,
};
use gibbsloss_core::shift::{self, is_mixing, load_system, Limits, SystemBundle, Target};
use gibbsloss_core::transition::{
    class_degree_estimate, depth_certificate, periodic_classes, tau_depth, DegreeEstimate, Side, TauWitness,
};
use gibbsloss_core::{fixtures, reproduce};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::args::{Command, ModeArg, PropertyArg, SideArg, TargetArg};
use crate::render;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Analysis(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Analysis(_) => 65,
        }
    }
}

impl From<gibbsloss_core::Error> for CliError {
    fn from(e: gibbsloss_core::Error) -> Self {
        CliError::Analysis(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// What a command produced, before formatting.
pub struct Outcome {
    pub result: Value,
    pub text: String,
    /// Present only for series output.
    pub csv: Option<String>,
    pub exit: u8,
}

impl Outcome {
    fn new(result: Value, text: String) -> Self {
        Outcome {
            result,
            text,
            csv: None,
            exit: 0,
        }
    }
}

/// Input files read so far, with their digests.
#[derive(Default)]
pub struct Inputs {
    pub files: Vec<(PathBuf, String)>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.files.push((path.to_path_buf(), hex::encode(Sha256::digest(&bytes))));
        String::from_utf8(bytes).map_err(|_| CliError::Analysis(format!("{}: not UTF-8", path.display())))
    }

    fn system(&mut self, path: &Path) -> Result<SystemBundle> {
        let text = self.read(path)?;
        load_system(&text).map_err(|e| CliError::Analysis(format!("{}: {e}", path.display())))
    }

    fn measure(&mut self, path: &Path, bundle: &SystemBundle) -> Result<MarkovMeasure<f64>> {
        let text = self.read(path)?;
        RawMeasure::from_json(&text)
            .and_then(|raw| validate_markov(bundle, &raw))
            .map_err(|e| CliError::Analysis(format!("{}: {e}", path.display())))
    }
}

fn word(bundle: &SystemBundle, text: &str) -> Result<Vec<usize>> {
    bundle
        .parse_label_word(text)
        .map_err(|e| CliError::Usage(format!("--word: {e}")))
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::Right => Side::Right,
        SideArg::Left => Side::Left,
    }
}

fn status_exit(s: Status) -> u8 {
    match s {
        Status::Holds => 0,
        Status::Fails => 1,
        Status::UnknownAtHorizon => 2,
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn tau_json(bundle: &SystemBundle, t: &TauWitness) -> Value {
    let names = |a: usize| bundle.symbols().name(a).to_string();
    json!({
        "value": t.value,
        "exact": t.exact,
        "partition": t.partition.iter().map(|part| {
            part.iter().map(|&(a, b)| json!([names(a), names(b)])).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

fn degree_json(bundle: &SystemBundle, d: &DegreeEstimate) -> Value {
    json!({
        "value": d.value,
        "witness": bundle.show_label(&d.witness),
        "witness_depth": d.witness_depth,
        "stabilized": d.stabilized,
        "exact": d.exact,
        "history": d.history.iter().map(|&(n, t)| json!({"length": n, "min_tau": t})).collect::<Vec<_>>(),
    })
}

pub fn run(cmd: &Command, inputs: &mut Inputs) -> Result<Outcome> {
    let limits = Limits::with_cap(cmd.common().size_cap);
    let phase_cap = cmd.common().phase_cap;
    match cmd {
        Command::Validate { system, measure, .. } => {
            let b = inputs.system(&system.system)?;
            let (mixing, witness) = is_mixing(b.sft());
            let mut result = json!({
                "symbols": b.symbols().symbols(),
                "labels": b.labels().symbols(),
                "label_of": (0..b.n_symbols())
                    .map(|a| (b.symbols().name(a).to_string(), Value::from(b.labels().name(b.label(a)))))
                    .collect::<serde_json::Map<_, _>>(),
                "trimmed": b.trimmed(),
                "edges": b.sft().edge_count(),
                "mixing": mixing,
                "mixing_witness": to_value(&witness),
            });
            if let Some(m) = measure {
                let mu = inputs.measure(m, &b)?;
                result["measure"] = json!({
                    "fully_supported": mu.fully_supported,
                    "initial": (0..b.n_symbols())
                        .map(|a| (b.symbols().name(a).to_string(), Value::from(mu.initial[a])))
                        .collect::<serde_json::Map<_, _>>(),
                });
            }
            let text = render::validate(&b, &result);
            Ok(Outcome::new(result, text))
        }
        Command::Blocks { system, n, target, .. } => {
            let b = inputs.system(&system.system)?;
            let t = match target {
                TargetArg::Domain => Target::Domain,
                TargetArg::Image => Target::Image,
            };
            let words: Vec<String> = shift::blocks(&b, *n, t, &limits)?
                .iter()
                .map(|w| match t {
                    Target::Domain => b.show_domain(w),
                    Target::Image => b.show_label(w),
                })
                .collect();
            let text = render::list(&format!("{} blocks of length {n}", to_value(target).as_str().unwrap_or("")), &words);
            Ok(Outcome::new(json!({"n": n, "target": target, "count": words.len(), "words": words}), text))
        }
        Command::Fiber { system, word: w, .. } => {
            let b = inputs.system(&system.system)?;
            let w = word(&b, &w.word)?;
            let words: Vec<String> = shift::fiber(&b, &w, &limits)?.iter().map(|x| b.show_domain(x)).collect();
            let text = render::list(&format!("fiber of {}", b.show_label(&w)), &words);
            Ok(Outcome::new(
                json!({"word": b.show_label(&w), "count": words.len(), "words": words}),
                text,
            ))
        }
        Command::Depth { system, word: w, .. } => {
            let b = inputs.system(&system.system)?;
            let w = word(&b, &w.word)?;
            let c = depth_certificate(&b, &w)?;
            let result = json!({
                "word": b.show_label(&w),
                "fiber_size": c.fiber_size.to_string(),
                "depth": c.depth.as_ref().map(|d| json!({
                    "value": d.value,
                    "position": d.position,
                    "set": d.set.iter().map(|&a| b.symbols().name(a)).collect::<Vec<_>>(),
                })),
                "tau": tau_json(&b, &c.tau),
            });
            let text = render::depth(&result);
            Ok(Outcome::new(result, text))
        }
        Command::Tau { system, word: w, .. } => {
            let b = inputs.system(&system.system)?;
            let w = word(&b, &w.word)?;
            let mut result = tau_json(&b, &tau_depth(&b, &w)?);
            result["word"] = Value::from(b.show_label(&w));
            let text = render::tau(&result);
            Ok(Outcome::new(result, text))
        }
        Command::Degree { system, horizon, .. } => {
            let b = inputs.system(&system.system)?;
            let result = degree_json(&b, &class_degree_estimate(&b, *horizon, &limits)?);
            let text = render::degree(&result);
            Ok(Outcome::new(result, text))
        }
        Command::Classes { system, word: w, side: s, .. } => {
            let b = inputs.system(&system.system)?;
            let w = word(&b, &w.word)?;
            let report = periodic_classes(&b, &w, side(*s), phase_cap)?;
            let result = to_value(&report.view(&b));
            let text = render::classes(&result);
            Ok(Outcome::new(result, text))
        }
        Command::Properties {
            system,
            property,
            period_bound,
            horizon,
            ..
        } => {
            let b = inputs.system(&system.system)?;
            properties(&b, *property, *period_bound, *horizon, phase_cap, &limits)
        }
        Command::Pushforward {
            system,
            measure,
            word: w,
            mode,
            ..
        } => {
            let b = inputs.system(&system.system)?;
            let mu = inputs.measure(measure, &b)?;
            let w = word(&b, &w.word)?;
            let m = match mode {
                ModeArg::Transfer => Mode::Transfer,
                ModeArg::Brute => Mode::Brute,
            };
            let r = pushforward(&b, &mu, &w, m, &limits)?;
            let result = json!({
                "word": b.show_label(&w),
                "mode": mode,
                "value": r.value,
                "log_value": if r.empty_fiber { Value::Null } else { Value::from(r.log_value) },
                "empty_fiber": r.empty_fiber,
            });
            let text = render::pairs(&result);
            Ok(Outcome::new(result, text))
        }
        Command::GibbsDiagnose {
            system,
            measure,
            word: w,
            thresholds,
            ..
        } => {
            let b = inputs.system(&system.system)?;
            let mu = inputs.measure(measure, &b)?;
            let w = word(&b, &w.word)?;
            let extensions = match &thresholds.extensions {
                None => None,
                Some(list) => Some(
                    list.iter()
                        .map(|l| {
                            b.labels()
                                .index_of(l.trim())
                                .ok_or_else(|| CliError::Usage(format!("--extensions: unknown label `{l}`")))
                        })
                        .collect::<Result<Vec<_>>>()?,
                ),
            };
            let opts = thresholds.options(extensions, phase_cap);
            let report = obstruction_diagnose(&b, &mu, &w, &opts)?;
            let mut result = to_value(&report);
            result["word"] = Value::from(b.show_label(&w));
            if let Some(list) = result["vanishing"].as_array_mut() {
                for (e, v) in report.vanishing.iter().zip(list) {
                    v["delta"] = Value::from(b.labels().name(e.delta));
                }
            }
            let mut csv = String::from("n,residue,log_measure,ratio\n");
            for r in &report.rows {
                csv.push_str(&format!("{},{},{},{}\n", r.n, r.residue, r.log_measure, r.ratio));
            }
            let text = render::diagnose(&result);
            Ok(Outcome {
                result,
                text,
                csv: Some(csv),
                exit: 0,
            })
        }
        Command::TuneRate {
            system,
            measure,
            word: w,
            class,
            row,
            entry,
            target,
            t_lo,
            t_hi,
            ..
        } => {
            let b = inputs.system(&system.system)?;
            let mu = inputs.measure(measure, &b)?;
            let w = word(&b, &w.word)?;
            let sym = |s: &str, flag: &str| {
                b.symbols()
                    .index_of(s)
                    .ok_or_else(|| CliError::Usage(format!("{flag}: unknown symbol `{s}`")))
            };
            let (r, e) = (sym(row, "--row")?, sym(entry, "--entry")?);
            let report = periodic_classes(&b, &w, Side::Right, phase_cap)?;
            let family = |t: f64| row_family(&b, &mu, r, e, t);
            let tuned = tune_class_rate(&b, family, &report, *class, *target, *t_lo, *t_hi)?;
            let result = json!({
                "word": b.show_label(&w),
                "class": class,
                "target": target,
                "t": tuned.t,
                "lambda": tuned.lambda,
                "iterations": tuned.iterations,
                "measure": to_value(&tuned.measure.to_raw(&b)),
            });
            let text = render::pairs(&result);
            Ok(Outcome::new(result, text))
        }
        Command::Reproduce { fixtures: dir, .. } => {
            if let Some(dir) = dir {
                check_fixture_dir(dir, inputs)?;
            }
            let outcomes = reproduce::run_all();
            let all = outcomes.iter().all(|o| o.passed);
            let text = reproduce::render(&outcomes);
            Ok(Outcome {
                result: json!({"criteria": to_value(&outcomes), "all_passed": all}),
                text,
                csv: None,
                exit: if all { 0 } else { 1 },
            })
        }
    }
}

fn properties(
    b: &SystemBundle,
    property: Option<PropertyArg>,
    period_bound: usize,
    horizon: usize,
    phase_cap: usize,
    limits: &Limits,
) -> Result<Outcome> {
    let single = |v: PropertyVerdict| {
        let exit = status_exit(v.status);
        let result = to_value(&v);
        let text = render::verdicts(std::slice::from_ref(&result));
        Outcome {
            result,
            text,
            csv: None,
            exit,
        }
    };
    let continuing = || continuing_diagnosis(b, period_bound, horizon, phase_cap, limits);
    match property {
        Some(PropertyArg::RightEresolving) => Ok(single(eresolving_check(b, Side::Right)?)),
        Some(PropertyArg::LeftEresolving) => Ok(single(eresolving_check(b, Side::Left)?)),
        Some(PropertyArg::FiberMixing) => Ok(single(fiber_mixing_certificate(b, horizon, phase_cap, limits)?)),
        Some(PropertyArg::RightContinuing) => Ok(single(continuing()?.right)),
        Some(PropertyArg::LeftContinuing) => Ok(single(continuing()?.left)),
        Some(PropertyArg::NearlyFiberMixing) | None => {
            let nfm = nearly_fiber_mixing_verdict(b, period_bound, horizon, phase_cap, limits)?;
            let mut verdicts = Vec::new();
            if property.is_none() {
                verdicts.push(to_value(&eresolving_check(b, Side::Right)?));
                verdicts.push(to_value(&eresolving_check(b, Side::Left)?));
                verdicts.push(to_value(&fiber_mixing_certificate(b, horizon, phase_cap, limits)?));
                verdicts.push(to_value(&nfm.continuing.right));
                verdicts.push(to_value(&nfm.continuing.left));
            }
            verdicts.push(to_value(&nfm.verdict));
            let composite = json!({
                "verdict": to_value(&nfm.verdict),
                "bi_continuing": nfm.bi_continuing,
                "period_preservation": to_value(&nfm.period_preservation),
                "transition_free": to_value(&nfm.transition_free),
                "failed_by": nfm.failed_by,
                "degree": nfm.degree.as_ref().map(|d| degree_json(b, d)),
                "battery": to_value(&nfm.continuing.battery),
            });
            let text = render::verdicts(&verdicts);
            Ok(Outcome {
                result: json!({"verdicts": verdicts, "nearly_fiber_mixing": composite}),
                text,
                csv: None,
                exit: status_exit(nfm.verdict.status),
            })
        }
    }
}

/// Fixture files in `dir` must parse and match the bundled copies.
fn check_fixture_dir(dir: &Path, inputs: &mut Inputs) -> Result<()> {
    let systems = [
        ("FIG1.json", fixtures::FIG1_JSON),
        ("FIG2.json", fixtures::FIG2_JSON),
        ("FIG3.json", fixtures::FIG3_JSON),
        ("FIG4.json", fixtures::FIG4_JSON),
    ];
    let measures = [
        ("fig1_measure.json", fixtures::FIG1_JSON, fixtures::FIG1_MEASURE_JSON),
        ("fig2_p03.json", fixtures::FIG2_JSON, fixtures::FIG2_P03_JSON),
        ("fig2_p05.json", fixtures::FIG2_JSON, fixtures::FIG2_P05_JSON),
        ("fig3_measure.json", fixtures::FIG3_JSON, fixtures::FIG3_MEASURE_JSON),
        ("fig4_uniform.json", fixtures::FIG4_JSON, fixtures::FIG4_UNIFORM_JSON),
    ];
    for (name, bundled) in systems {
        let path = dir.join(name);
        let found = inputs.system(&path)?;
        if found != load_system(bundled)? {
            return Err(CliError::Analysis(format!("{}: differs from the bundled copy", path.display())));
        }
    }
    for (name, system, bundled) in measures {
        let path = dir.join(name);
        let b = load_system(system)?;
        let found = inputs.measure(&path, &b)?;
        let want: MarkovMeasure<f64> = validate_markov(&b, &RawMeasure::from_json(bundled)?)?;
        if found != want {
            return Err(CliError::Analysis(format!("{}: differs from the bundled copy", path.display())));
        }
    }
    Ok(())
}
