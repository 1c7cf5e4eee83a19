use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use supbound_core::encoder::{self, template_shape};
use supbound_core::rc::{check_size_lemma, RcFunction};
use supbound_core::synthesizer::synthesize_linear_template;
use supbound_core::trs::{
    basic_terms, check_orthogonality, normalize, parse_term, parse_trs, NormalizeOutcome,
};
use supbound_core::verifier::empirical_si_check;
use supbound_core::{
    construct_si_from_rc, dependency_pairs, measure_rc, synthesize, verify, Assignment, Criterion,
    Domain, Overall, PiMode, Report, Scalar, Status, SynthesisConfig, Trs, VerifyOptions,
};

use crate::{Cli, Code, Command, CriterionArgs, Kind, Mode, Template};

pub struct Output {
    pub code: Code,
    pub text: String,
    pub json: Value,
}

impl Output {
    fn new(code: Code, command: &str, text: String, mut json: Value) -> Output {
        json["command"] = command.into();
        Output { code, text, json }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_trs(path: &Path) -> Result<Trs> {
    parse_trs(&read(path)?).with_context(|| path.display().to_string())
}

fn criterion(kind: Kind) -> Criterion {
    match kind {
        Kind::Pi => Criterion::Pi,
        Kind::Qi => Criterion::Qi,
        Kind::Dpi => Criterion::Dpi,
    }
}

fn pi_mode(mode: Mode) -> PiMode {
    match mode {
        Mode::Nat => PiMode::Nat,
        Mode::Subterm => PiMode::Subterm,
        Mode::Delta => PiMode::Delta,
    }
}

fn relax(text: &Option<String>) -> Result<Option<Scalar>> {
    text.as_deref()
        .map(|t| t.parse::<Scalar>().context("--relax-nullary"))
        .transpose()
}

fn options(cli: &Cli, common: &CriterionArgs) -> Result<VerifyOptions> {
    let mut opts = VerifyOptions {
        relax_nullary: relax(&common.relax_nullary)?,
        pi_mode: pi_mode(common.pi_mode),
        ..VerifyOptions::default()
    };
    opts.sampling.seed = cli.seed;
    Ok(opts)
}

fn report_code(r: &Report) -> Code {
    match r.overall {
        Overall::Valid => Code::Ok,
        Overall::Invalid => Code::No,
        Overall::Inconclusive => Code::Unknown,
    }
}

fn parse_domain(text: &str) -> Result<Domain> {
    match text.trim() {
        "nat" => Ok(Domain::Naturals),
        other => match other.strip_prefix("rat:").map(str::parse::<u64>) {
            Some(Ok(d)) => Ok(Domain::Rationals(d)),
            _ => bail!("--domain: expected nat or rat:D, got `{text}`"),
        },
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Check { file } => check(file),
        Command::Dp { file } => dp(file),
        Command::Verify {
            file,
            assignment,
            kind,
            common,
        } => {
            let trs = load_trs(file)?;
            let a = Assignment::parse(&read(assignment)?, &trs)
                .with_context(|| assignment.display().to_string())?;
            let report = verify(&trs, &a, criterion(*kind), &options(cli, common)?)?;
            Ok(Output::new(
                report_code(&report),
                "verify",
                report.to_string(),
                json!({ "report": report }),
            ))
        }
        Command::Synth {
            file,
            kind,
            domain,
            k,
            d,
            template,
            timeout,
            relax_nullary,
        } => {
            let trs = load_trs(file)?;
            let mut cfg = SynthesisConfig::new(criterion(*kind), parse_domain(domain)?, *k, *d);
            cfg.relax_nullary = relax(relax_nullary)?;
            cfg.sampling.seed = cli.seed;
            if let Some(t) = timeout {
                cfg.timeout = Some(Duration::try_from_secs_f64(*t).context("--timeout")?);
            }
            let result = match template {
                Template::Maxplus => synthesize(&trs, &cfg)?,
                Template::Linear => synthesize_linear_template(&trs, &cfg)?,
            };
            let code = match result.status {
                Status::Found => Code::Ok,
                Status::Exhausted => Code::No,
                Status::TimedOut => Code::Unknown,
            };
            let mut text = format!(
                "# {}: {} after {} candidates\n",
                cfg.kind, result.status, result.candidates_tried
            );
            if let Some(a) = &result.assignment {
                text.push_str(&a.to_text(&trs));
            }
            let json = json!({
                "status": result.status,
                "candidates_tried": result.candidates_tried,
                "assignment": result.assignment,
                "certificate": result.certificate,
            });
            Ok(Output::new(code, "synth", text, json))
        }
        Command::Encode {
            file,
            kind,
            k,
            d,
            format: _,
            output,
            common,
        } => {
            let trs = load_trs(file)?;
            let doc = encoder::encode(
                &trs,
                criterion(*kind),
                pi_mode(common.pi_mode),
                *k,
                *d,
                relax(&common.relax_nullary)?,
            )?;
            let smt = encoder::emit_smtlib(&doc);
            let json = json!({
                "coefficients": doc.coefficients,
                "conditions": doc.conditions.len(),
                "output": output.as_ref().map(|p| p.display().to_string()),
                "smtlib": if output.is_some() { Value::Null } else { smt.clone().into() },
            });
            let text = match output {
                Some(p) => {
                    fs::write(p, &smt).with_context(|| format!("cannot write {}", p.display()))?;
                    String::new()
                }
                None => smt,
            };
            Ok(Output::new(Code::Ok, "encode", text, json))
        }
        Command::CheckModel {
            file,
            model,
            kind,
            k,
            d,
            common,
        } => {
            let trs = load_trs(file)?;
            let text = read(model)?;
            if text.trim_start().starts_with("unsat") {
                let msg = "solver reported unsat: no assignment of this shape exists".to_string();
                return Ok(Output::new(
                    Code::No,
                    "check-model",
                    msg,
                    json!({ "unsat": true, "report": null }),
                ));
            }
            let values =
                encoder::parse_model(&text).with_context(|| model.display().to_string())?;
            let (k0, d0) = template_shape(&trs, &values);
            let opts = options(cli, common)?;
            let doc = encoder::encode(
                &trs,
                criterion(*kind),
                opts.pi_mode,
                k.unwrap_or(k0),
                d.unwrap_or(d0),
                opts.relax_nullary.clone(),
            )?;
            let report = encoder::check_model(&trs, &doc, &values, &opts)?;
            let a = doc.assignment(&values)?;
            let text = format!("{}{}", a.to_text(&trs), report);
            Ok(Output::new(
                report_code(&report),
                "check-model",
                text,
                json!({ "unsat": false, "assignment": a, "report": report }),
            ))
        }
        Command::Rc {
            file,
            max_size,
            budget,
        } => {
            let trs = load_trs(file)?;
            let report = measure_rc(&trs, *max_size, *budget, cli.seed);
            let mut text = String::new();
            if report.approximate {
                let _ = writeln!(
                    text,
                    "# sizes above {} are sampled",
                    supbound_core::rc::EXHAUSTIVE_MAX_SIZE
                );
            }
            let _ = writeln!(text, "{:>4}  {:>6}  {:>8}  witness", "n", "terms", "rc");
            let mut flagged = false;
            for e in &report.entries {
                let rc = match e.rc() {
                    Some(v) => v.to_string(),
                    None => {
                        flagged = true;
                        format!(">={}?", e.lower_bound)
                    }
                };
                let w = e
                    .witness
                    .as_ref()
                    .map(ToString::to_string)
                    .unwrap_or_else(|| "-".into());
                let _ = writeln!(text, "{:>4}  {:>6}  {:>8}  {w}", e.size, e.terms, rc);
            }
            if flagged {
                eprintln!("warning: some terms exceeded the budget or loop; rc is undefined from the first such size");
            }
            let code = if flagged { Code::Unknown } else { Code::Ok };
            Ok(Output::new(code, "rc", text, json!({ "rc": report })))
        }
        Command::Bound {
            file,
            rc,
            max_size,
            budget,
        } => bound(cli, file, rc, *max_size, *budget),
        Command::Eval {
            file,
            term,
            max_steps,
        } => {
            let trs = load_trs(file)?;
            let t = parse_term(term, &trs).context("term")?;
            if !t.is_ground() {
                anyhow::bail!("term {t} has variables; eval needs a ground term");
            }
            let (code, kind, text, last) = match normalize(&trs, &t, *max_steps) {
                NormalizeOutcome::NormalForm { term, steps } => (
                    Code::Ok,
                    "normal_form",
                    format!("{term}, {steps} steps"),
                    (term, steps),
                ),
                NormalizeOutcome::StuckNonValue { term, steps } => (
                    Code::No,
                    "stuck",
                    format!("stuck at non-value {term} after {steps} steps"),
                    (term, steps),
                ),
                NormalizeOutcome::BudgetExceeded { last, steps } => (
                    Code::Unknown,
                    "budget_exceeded",
                    format!("step budget exhausted after {steps} steps at {last}"),
                    (last, steps),
                ),
            };
            let json = json!({ "outcome": kind, "term": last.0, "steps": last.1 });
            Ok(Output::new(code, "eval", text, json))
        }
    }
}

fn check(file: &Path) -> Result<Output> {
    let trs = load_trs(file)?;
    let ortho = check_orthogonality(&trs);
    let mut text = format!("{} rules, size {}\n", trs.rules().len(), trs.size());
    for s in trs.signature() {
        let kind = if s.is_defined() {
            "defined"
        } else {
            "constructor"
        };
        let _ = writeln!(text, "  {}/{} {kind}", s.name, s.arity);
    }
    if ortho.is_orthogonal() {
        text.push_str("orthogonal");
    } else {
        let _ = write!(text, "not orthogonal");
        for r in &ortho.non_linear_rules {
            let _ = write!(text, "\n  rule {r} is not left-linear");
        }
        for o in &ortho.overlaps {
            let _ = write!(
                text,
                "\n  rule {} overlaps rule {} at {}",
                o.inner, o.outer, o.position
            );
        }
    }
    let rules: Vec<String> = trs.rules().iter().map(ToString::to_string).collect();
    let json = json!({
        "rules": rules,
        "size": trs.size(),
        "signature": trs.signature(),
        "orthogonal": ortho.is_orthogonal(),
        "orthogonality": ortho,
    });
    Ok(Output::new(Code::Ok, "check", text, json))
}

fn dp(file: &Path) -> Result<Output> {
    let trs = load_trs(file)?;
    let pairs = dependency_pairs(&trs);
    let text: Vec<String> = pairs
        .iter()
        .map(|p| format!("{p}    (rule {}, position {})", p.origin, p.position))
        .collect();
    Ok(Output::new(
        Code::Ok,
        "dp",
        text.join("\n"),
        json!({ "pairs": pairs }),
    ))
}

fn bound(cli: &Cli, file: &Path, rc: &str, max_size: usize, budget: usize) -> Result<Output> {
    let trs = load_trs(file)?;
    let function = if rc.trim() == "measured" {
        match measure_rc(&trs, max_size, budget, cli.seed).to_function() {
            Ok(f) => f,
            Err(e) => {
                let msg = format!("cannot build a bound: {e} (budget exceeded or nonterminating)");
                return Ok(Output::new(
                    Code::Unknown,
                    "bound",
                    msg,
                    json!({ "rc": null, "closed_form": null, "check": null }),
                ));
            }
        }
    } else {
        rc.parse::<RcFunction>()?
    };
    let theta = construct_si_from_rc(&trs, function)?;
    let samples = basic_terms(&trs, max_size);
    let check = empirical_si_check(&trs, &theta, &samples, budget)?;
    let traces: Vec<_> = samples
        .iter()
        .map(|t| supbound_core::trs::normalize_traced(&trs, t, budget).1)
        .collect();
    let lemma = check_size_lemma(&trs, &traces);
    let mut text = theta.to_string();
    let _ = writeln!(
        text,
        "# checked {} basic terms of size <= {max_size} ({} skipped): {}",
        check.checked,
        check.skipped,
        if check.passed() {
            "no violations"
        } else {
            "violations found"
        }
    );
    for v in &check.violations {
        let _ = writeln!(
            text,
            "#   {:?} at {} -> {}: {} < {}",
            v.kind, v.term, v.value, v.lhs, v.rhs
        );
    }
    if let Some(r) = &lemma.tightest {
        let _ = writeln!(
            text,
            "# size growth: tightest ratio {r} over {} steps",
            lemma.checked
        );
    }
    let code = if check.passed() && lemma.violations.is_empty() {
        Code::Ok
    } else {
        Code::No
    };
    let closed: serde_json::Map<String, Value> = theta
        .closed_form()
        .into_iter()
        .map(|(k, v)| (k, v.into()))
        .collect();
    let json = json!({
        "rc": theta.rc,
        "trs_size": theta.trs_size,
        "closed_form": closed,
        "check": check,
        "size_lemma": lemma,
    });
    Ok(Output::new(code, "bound", text, json))
}
