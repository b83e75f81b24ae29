//! Task execution and report writing.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use okdyn::dynsim::{evaluate_shifts, khintchine_report, kronecker_limit_check};
use okdyn::intpoly::{certify_family, intersective_shift};
use okdyn::popdiff::{popular_differences, write_bits, write_rle};
use okdyn::presets::Presets;
use okdyn::scalar::rat_to_f64;
use okdyn::torus::{equidistribution_report, orbit_closure};
use okdyn::AlgebraicInteger;

use crate::prepare::{Job, Work};
use crate::scenario::Expect;
use crate::CliError;

/// Result of one scenario.
#[derive(Debug)]
pub struct Outcome {
    pub name: String,
    pub kind: &'static str,
    pub summary: String,
    pub pass: bool,
    pub json: Value,
    pub csv: String,
    /// Extra file requested by the scenario: name and contents.
    pub export: Option<(String, Vec<u8>)>,
}

struct Checks(Vec<Value>);

impl Checks {
    fn new() -> Self {
        Checks(Vec::new())
    }

    fn add(&mut self, name: &str, expected: Value, actual: Value, pass: bool) {
        self.0.push(json!({"name": name, "expected": expected, "actual": actual, "pass": pass}));
    }

    fn pass(&self) -> bool {
        self.0.iter().all(|c| c["pass"] == Value::Bool(true))
    }
}

fn element(m: &AlgebraicInteger) -> String {
    let c = m.coords();
    if c.len() == 1 {
        c[0].to_string()
    } else {
        m.to_string()
    }
}

pub fn run_jobs(jobs: &[Job]) -> Result<Vec<Outcome>, CliError> {
    jobs.iter().map(run_job).collect()
}

fn run_job(job: &Job) -> Result<Outcome, CliError> {
    let task_err = |e: &dyn std::fmt::Display| CliError::Task {
        scenario: job.name.clone(),
        line: job.line,
        message: e.to_string(),
    };
    let mut checks = Checks::new();
    let mut export = None;
    let (summary, result, csv) = match &job.work {
        Work::Certify {
            field,
            family,
            moduli,
            shift_samples,
            seed,
            expect,
        } => {
            let cert = certify_family(family, moduli, field).map_err(|e| task_err(&e))?;
            let mut csv = String::from("modulus,root,shift_xi,shift_d,shift_verified\n");
            let mut rows = Vec::new();
            let mut shifts_ok = true;
            for v in &cert.verdicts {
                let mut shift = Value::Null;
                let root = v.witness.as_ref().map(element);
                let (mut sx, mut sd, mut sv) = (String::new(), String::new(), String::new());
                if let (Some(w), true) = (&v.witness, *shift_samples > 0) {
                    let s = intersective_shift(family, &v.modulus, w, field).map_err(|e| task_err(&e))?;
                    let failing = s
                        .verify(family, &v.modulus, field, *shift_samples, *seed)
                        .map_err(|e| task_err(&e))?;
                    shifts_ok &= failing.is_none();
                    sx = element(&s.xi);
                    sd = element(&s.d);
                    sv = failing.is_none().to_string();
                    shift = json!({
                        "xi": sx, "d": sd, "samples": shift_samples,
                        "first_failure": failing.as_ref().map(element),
                    });
                }
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    element(&v.modulus),
                    root.clone().unwrap_or_default(),
                    sx,
                    sd,
                    sv
                );
                rows.push(json!({"modulus": element(&v.modulus), "root": root, "shift": shift}));
            }
            let certified = cert.certified_up_to_bound();
            let summary = match cert.first_failure() {
                Some(m) => format!("NOT jointly intersective at modulus {}", element(m)),
                None => format!("certified up to bound: common root modulo each of {} moduli", cert.verdicts.len()),
            };
            if let Some(e) = expect {
                let want = matches!(e, Expect::Certified);
                checks.add(
                    "expect",
                    json!(if want { "certified" } else { "refuted" }),
                    json!(if certified { "certified" } else { "refuted" }),
                    want == certified,
                );
            }
            if *shift_samples > 0 {
                checks.add("intersective_shift", json!(true), json!(shifts_ok), shifts_ok);
            }
            let result = json!({"verdicts": rows, "certified_up_to_bound": certified});
            (summary, result, csv)
        }
        Work::Orbit {
            sequence,
            generators,
            config,
            expect_all_pass,
            expect_full_torus,
        } => {
            let closure = orbit_closure(sequence).map_err(|e| task_err(&e))?;
            let report = equidistribution_report(sequence, &closure, generators, config).map_err(|e| task_err(&e))?;
            let mut csv = String::from(
                "character,class,n,predicted_re,predicted_im,measured_re,measured_im,deviation,bound,pass\n",
            );
            for r in &report.rows {
                let c: Vec<String> = r.character.iter().map(i64::to_string).collect();
                let _ = writeln!(
                    csv,
                    "{},{:?},{},{},{},{},{},{},{},{}",
                    c.join(" "),
                    r.class,
                    r.n,
                    r.predicted_re,
                    r.predicted_im,
                    r.measured_re,
                    r.measured_im,
                    r.deviation,
                    r.bound,
                    r.pass
                );
            }
            let failures = report.failures().count();
            let largest = config.ladder.last().copied().unwrap_or(0);
            let max_dev = report
                .rows
                .iter()
                .filter(|r| r.n == largest)
                .map(|r| r.deviation)
                .fold(0.0, f64::max);
            let strs = |vs: &[Vec<okdyn::Integer>]| -> Vec<Vec<String>> {
                vs.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect()
            };
            let result = json!({
                "torus_dim": closure.dim(),
                "subspace_dim": closure.subspace_dim(),
                "subspace_basis": strs(closure.subspace_basis()),
                "annihilator": strs(closure.annihilator()),
                "modulus": closure.modulus(),
                "cosets": closure.cosets().len(),
                "full_torus": closure.is_full_torus(),
                "checks": report.rows.len(),
                "failures": failures,
                "max_deviation_at_largest_n": max_dev,
            });
            if let Some(want) = expect_all_pass {
                checks.add("all_pass", json!(want), json!(report.all_pass()), *want == report.all_pass());
            }
            if let Some(want) = expect_full_torus {
                let full = closure.is_full_torus();
                checks.add("full_torus", json!(want), json!(full), *want == full);
            }
            let summary = format!(
                "closure of dimension {} in T^{} with {} coset(s); {} of {} character checks failed",
                closure.subspace_dim(),
                closure.dim(),
                closure.cosets().len(),
                failures,
                report.rows.len()
            );
            (summary, result, csv)
        }
        Work::Khintchine {
            system,
            field,
            family,
            functional,
            range,
            epsilon,
            expect_nonempty,
            expect_max_gap,
        } => {
            let shifts =
                evaluate_shifts(family, field, functional, range.0..=range.1).map_err(|e| task_err(&e))?;
            let values = system.multicorrelation(&shifts).map_err(|e| task_err(&e))?;
            let rep = khintchine_report(&values, range.0, system.measure(), family.len() as u32, epsilon);
            let mut csv = String::from("n,value,popular\n");
            let mut pi = rep.popular.iter().peekable();
            for (i, v) in values.iter().enumerate() {
                let n = range.0 + i as i64;
                let popular = pi.next_if(|&&p| p == n).is_some();
                let _ = writeln!(csv, "{},{},{}", n, v.to_f64(), popular);
            }
            let result = json!({
                "threshold": rep.threshold,
                "threshold_f64": rep.threshold_f64,
                "delta": system.measure().to_string(),
                "delta_f64": rat_to_f64(system.measure()),
                "scanned": rep.scanned,
                "popular_count": rep.popular_count,
                "max_gap": rep.max_gap,
                "density": rep.density,
                "gap_ladder": rep.gap_ladder,
                "stable_at_scale": rep.stable_at_scale,
            });
            if let Some(want) = expect_nonempty {
                let got = rep.popular_count > 0;
                checks.add("nonempty", json!(want), json!(got), *want == got);
            }
            if let Some(want) = expect_max_gap {
                checks.add("max_gap", json!(want), json!(rep.max_gap), *want == rep.max_gap);
            }
            let summary = format!(
                "threshold {} ({}); {} of {} popular, max gap {}",
                rep.threshold, rep.threshold_f64, rep.popular_count, rep.scanned, rep.max_gap
            );
            (summary, result, csv)
        }
        Work::Popdiff {
            set,
            field,
            family,
            radius,
            epsilon,
            export: export_name,
            expect_popular_fraction_at_least,
            expect_max_gap_at_most,
        } => {
            let rep = popular_differences(set, family, field, *radius, epsilon).map_err(|e| task_err(&e))?;
            if let Some(name) = export_name {
                let mut buf = Vec::new();
                let written = if name.ends_with(".bits") {
                    write_bits(set, &mut buf)
                } else {
                    write_rle(set, &mut buf)
                };
                written.map_err(|e| task_err(&e))?;
                export = Some((name.clone(), buf));
            }
            if let Some(want) = expect_popular_fraction_at_least {
                checks.add(
                    "popular_fraction_at_least",
                    json!(want),
                    json!(rep.popular_fraction),
                    rep.popular_fraction >= *want,
                );
            }
            if let Some(want) = expect_max_gap_at_most {
                let worst = rep.max_gap.iter().copied().max().unwrap_or(0);
                checks.add("max_gap_at_most", json!(want), json!(rep.max_gap), worst <= *want);
            }
            let summary = format!(
                "threshold {} ({}); {} of {} popular ({}), max gap {:?}, boundary bound {}",
                rep.threshold,
                rep.threshold_f64,
                rep.popular_count,
                rep.scanned,
                rep.popular_fraction,
                rep.max_gap,
                rep.boundary_bound
            );
            let csv = rep.to_csv();
            let result = serde_json::to_value(&rep).expect("report serializes");
            (summary, result, csv)
        }
        Work::LimitCheck {
            alpha,
            r,
            s,
            p,
            functions,
            ladder,
            expect_gap_at_most,
            expect_gap_non_increasing,
        } => {
            let check = kronecker_limit_check(alpha, *r, *s, p, functions, ladder).map_err(|e| task_err(&e))?;
            let mut csv = String::from("n,lhs_re,lhs_im,rhs_re,rhs_im,gap\n");
            for row in &check.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    row.n, row.lhs_re, row.lhs_im, row.rhs_re, row.rhs_im, row.gap
                );
            }
            if let Some(want) = expect_gap_at_most {
                checks.add("gap_at_most", json!(want), json!(check.final_gap()), check.final_gap() <= *want);
            }
            if let Some(want) = expect_gap_non_increasing {
                checks.add(
                    "gap_non_increasing",
                    json!(want),
                    json!(check.gap_non_increasing),
                    *want == check.gap_non_increasing,
                );
            }
            let summary = format!(
                "gap {} at N = {}; non-increasing along the ladder: {}",
                check.final_gap(),
                check.rows.last().map_or(0, |r| r.n),
                check.gap_non_increasing
            );
            (summary, serde_json::to_value(&check).expect("report serializes"), csv)
        }
    };
    let pass = checks.pass();
    let json = json!({
        "scenario": job.name,
        "task": job.kind,
        "params": job.params,
        "result": result,
        "summary": summary,
        "assertions": checks.0,
        "pass": pass,
    });
    Ok(Outcome {
        name: job.name.clone(),
        kind: job.kind,
        summary,
        pass,
        json,
        csv,
        export,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes `<name>.json`, `<name>.csv`, any export and `summary.txt`.
/// Nothing is written for an empty scenario list.
pub fn write_outputs(out_dir: &Path, outcomes: &[Outcome]) -> Result<(), CliError> {
    if outcomes.is_empty() {
        return Ok(());
    }
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut summary = String::new();
    for o in outcomes {
        let mut text = serde_json::to_string_pretty(&o.json).expect("json");
        text.push('\n');
        write(&out_dir.join(format!("{}.json", o.name)), text.as_bytes())?;
        write(&out_dir.join(format!("{}.csv", o.name)), o.csv.as_bytes())?;
        if let Some((name, bytes)) = &o.export {
            write(&out_dir.join(name), bytes)?;
        }
        let status = if o.pass { "pass" } else { "assertion failed" };
        let _ = writeln!(summary, "{} ({}): {} [{}]", o.name, o.kind, o.summary, status);
    }
    write(&out_dir.join("summary.txt"), summary.as_bytes())
}

/// Parses, validates, runs and writes one scenario file.
pub fn run_file(
    path: &Path,
    out_dir: &Path,
    presets: &Presets,
    cli_seed: Option<u64>,
) -> Result<Vec<Outcome>, CliError> {
    let jobs = check_file(path, presets, cli_seed)?;
    let outcomes = run_jobs(&jobs)?;
    write_outputs(out_dir, &outcomes)?;
    Ok(outcomes)
}

/// Parses and validates without running.
pub fn check_file(path: &Path, presets: &Presets, cli_seed: Option<u64>) -> Result<Vec<Job>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file = crate::parse_scenarios(&text)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    crate::prepare(&file, &text, presets, base, cli_seed)
}
