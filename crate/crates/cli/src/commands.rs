//! The six commands: each resolves its inputs, runs the library, and
//! emits one typed JSON report (struct field order fixes the JSON field
//! order).

use std::path::Path;

use serde::Serialize;

use jacobi_spectra::suites::{run_named, SuiteOutcome, SUITE_NAMES};
use jacobi_spectra::{
    ac_bound, band_structure, ids_profile, two_value_closed_form, unroll, verify_band_lengths,
    verify_deift_simon, verify_nesting, verify_polya_ac, Band, BandLengthReport, BoundReport,
    DeiftSimonReport, IdsMethod, NestingReport, OperatorSpec, PolyaAcReport, Window,
};

use crate::config::{parse_window, resolve_model, thread_cap, CliError, CliResult};
use crate::report::emit;
use crate::{svg, ModelArgs};

// ---------------------------------------------------------------- bands

#[derive(Clone, Copy, Serialize)]
struct BandRow {
    index: usize,
    left: f64,
    right: f64,
    length: f64,
    length_cap: f64,
    cap_slack: f64,
    cap_attained: bool,
}

#[derive(Serialize)]
struct BandsReport {
    command: &'static str,
    label: String,
    period: usize,
    geometric_mean_a: f64,
    /// Ascending energy order, `index` counting from the bottom.
    bands: Vec<BandRow>,
    /// Same bands, `index` counting from the top of the spectrum.
    bands_top_down: Vec<BandRow>,
    /// `closed_gaps[j]` marks the gap above the j-th band (ascending) as
    /// closed (the bands touch).
    closed_gaps: Vec<bool>,
    total_measure: f64,
    total_measure_cap: f64,
    caps_hold: bool,
    all_caps_attained: bool,
}

pub fn cmd_bands(
    model: &ModelArgs,
    tol: f64,
    output: Option<&Path>,
    pretty: bool,
) -> CliResult<i32> {
    let resolved = resolve_model(model)?;
    let spec = resolved.spec();
    let bs = band_structure(spec, 1e-12)?;
    let lengths = verify_band_lengths(spec, tol)?;

    // `verify_band_lengths` reports top-down; build that view first and
    // recover the ascending view by reversing.
    let q = spec.period;
    let top_down: Vec<BandRow> = (0..q)
        .map(|i| {
            let band = &bs.bands[q - 1 - i];
            BandRow {
                index: i + 1,
                left: band.left,
                right: band.right,
                length: lengths.lengths[i],
                length_cap: lengths.bounds[i],
                cap_slack: lengths.slack[i],
                cap_attained: lengths.equality[i],
            }
        })
        .collect();
    let ascending: Vec<BandRow> = (0..q)
        .map(|i| {
            let src = &top_down[q - 1 - i];
            BandRow {
                index: i + 1,
                ..*src
            }
        })
        .collect();

    let report = BandsReport {
        command: "bands",
        label: spec.label.clone(),
        period: q,
        geometric_mean_a: spec.geometric_mean_a(),
        bands: ascending,
        bands_top_down: top_down,
        closed_gaps: bs.closed_gaps.clone(),
        total_measure: bs.total_measure(),
        total_measure_cap: 4.0 * spec.geometric_mean_a(),
        caps_hold: lengths.pass,
        all_caps_attained: lengths.equality.iter().all(|&e| e),
    };
    if pretty {
        eprintln!(
            "{}: {} band(s), total measure {:.6} of cap {:.6}{}",
            report.label,
            q,
            report.total_measure,
            report.total_measure_cap,
            if report.all_caps_attained {
                " (every cap attained)"
            } else {
                ""
            },
        );
        for row in &report.bands {
            eprintln!(
                "  band {}: [{:.6}, {:.6}]  length {:.6}  cap {:.6}",
                row.index, row.left, row.right, row.length, row.length_cap
            );
        }
    }
    emit(&report, output)?;
    Ok(0)
}

// ------------------------------------------------------------------ ids

#[derive(Serialize)]
struct IdsReport {
    command: &'static str,
    label: String,
    period: usize,
    method: IdsMethod,
    window: Window,
    points: usize,
    bands: Vec<Band>,
    grid: Vec<f64>,
    values: Vec<f64>,
}

pub fn cmd_ids(
    model: &ModelArgs,
    window: Option<&str>,
    grid: usize,
    n: Option<usize>,
    output: Option<&Path>,
    pretty: bool,
) -> CliResult<i32> {
    let resolved = resolve_model(model)?;
    let spec = resolved.spec();
    let bs = band_structure(spec, 1e-12)?;
    let window = match window {
        Some(text) => parse_window(text)?,
        None => {
            let (lo, hi) = bs.hull();
            Window::new(lo, hi)?
        }
    };
    let method = match n {
        Some(n) => IdsMethod::Truncation { n },
        None => IdsMethod::Exact,
    };
    let profile = ids_profile(spec, &window, grid, method)?;

    let report = IdsReport {
        command: "ids",
        label: profile.label,
        period: profile.period,
        method: profile.method,
        window,
        points: grid,
        bands: bs.bands.clone(),
        grid: profile.grid,
        values: profile.values,
    };
    if pretty {
        let first = report.values.first().copied().unwrap_or(f64::NAN);
        let last = report.values.last().copied().unwrap_or(f64::NAN);
        eprintln!(
            "{}: k over [{:.6}, {:.6}] from {:.6} to {:.6} on {} points",
            report.label, report.window.left, report.window.right, first, last, report.points
        );
    }
    emit(&report, output)?;
    Ok(0)
}

// ---------------------------------------------------------------- bound

#[derive(Serialize)]
struct ClosedFormRow {
    log_bound: f64,
    bound: Option<f64>,
    /// `|computed/closed - 1|` against the best computed section, when
    /// both values are representable.
    relative_deviation: Option<f64>,
}

#[derive(Serialize)]
struct BoundCommandReport {
    command: &'static str,
    label: String,
    period: usize,
    window: Window,
    /// One report per section size `n = q, 2q, ..., tq`.
    sections: Vec<BoundReport>,
    /// The section with the smallest bound (the best the data gives).
    min_bound: BoundReport,
    /// For the two-value builder on one of its canonical windows: the
    /// closed-form value the sections should reproduce.
    closed_form: Option<ClosedFormRow>,
}

pub fn cmd_bound(
    model: &ModelArgs,
    window: Option<&str>,
    t: usize,
    output: Option<&Path>,
    pretty: bool,
) -> CliResult<i32> {
    if t == 0 {
        return Err(CliError::Input("--t must be at least 1".into()));
    }
    let resolved = resolve_model(model)?;
    let spec = resolved.spec();
    let window = match window {
        Some(text) => parse_window(text)?,
        None => Window::LINE,
    };

    let mut sections = Vec::with_capacity(t);
    for k in 1..=t {
        let prefix = unroll(spec, k * spec.period)?;
        sections.push(ac_bound(&prefix, &window)?);
    }
    let min_bound = sections
        .iter()
        .min_by(|x, y| {
            x.log_bound
                .partial_cmp(&y.log_bound)
                .expect("log bounds never NaN")
        })
        .expect("at least one section")
        .clone();

    let closed_form = resolved.two_value().and_then(|tv| {
        two_value_closed_form(tv, &window).map(|(log_form, form)| ClosedFormRow {
            log_bound: log_form,
            bound: form,
            relative_deviation: match (min_bound.bound, form) {
                (Some(got), Some(want)) if want != 0.0 => Some((got / want - 1.0).abs()),
                _ => None,
            },
        })
    });

    let report = BoundCommandReport {
        command: "bound",
        label: spec.label.clone(),
        period: spec.period,
        window,
        sections,
        min_bound,
        closed_form,
    };
    if pretty {
        for row in &report.sections {
            let value = match row.bound {
                Some(v) => format!("{v:.6}"),
                None => format!("exp({:.3})", row.log_bound),
            };
            let note = if row.zero_measure {
                "  (window out of reach: measure zero)"
            } else {
                ""
            };
            eprintln!("  n = {:>4}: bound {value}{note}", row.n);
        }
        if let Some(cf) = &report.closed_form {
            eprintln!(
                "  closed form: {} (deviation {})",
                cf.bound
                    .map_or_else(|| "overflow".into(), |v| format!("{v:.6}")),
                cf.relative_deviation
                    .map_or_else(|| "n/a".into(), |d| format!("{d:.3e}")),
            );
        }
    }
    emit(&report, output)?;
    Ok(0)
}

// --------------------------------------------------------------- verify

/// One model-scoped check, in the shape of the library report that ran.
#[derive(Serialize)]
#[serde(untagged)]
enum ScopedReport {
    BandLengths(BandLengthReport),
    Polya(PolyaAcReport),
    Density(DeiftSimonReport),
    Nesting(NestingReport),
}

#[derive(Serialize)]
struct ScopedCheck {
    suite: String,
    pass: bool,
    report: ScopedReport,
}

#[derive(Serialize)]
struct VerifyFamilyReport {
    command: &'static str,
    mode: &'static str,
    seed: u64,
    suites: Vec<SuiteOutcome>,
    all_pass: bool,
}

#[derive(Serialize)]
struct VerifyModelReport {
    command: &'static str,
    mode: &'static str,
    seed: u64,
    label: String,
    period: usize,
    checks: Vec<ScopedCheck>,
    all_pass: bool,
}

/// Suites that can run against one fixed model (the rest need the random
/// families and reject `--model`).
const MODEL_SCOPED: [&str; 4] = [
    "band-lengths",
    "polya-consistency",
    "density-product",
    "nesting",
];

fn requested_suites(raw: &str, scoped: bool) -> CliResult<Vec<String>> {
    let catalog: &[&str] = if scoped { &MODEL_SCOPED } else { &SUITE_NAMES };
    if raw.trim() == "all" {
        return Ok(catalog.iter().map(|s| s.to_string()).collect());
    }
    let mut names = Vec::new();
    for part in raw.split(',') {
        let name = part.trim();
        if name.is_empty() {
            continue;
        }
        if !catalog.contains(&name) {
            let reason = if scoped && SUITE_NAMES.contains(&name) {
                format!("suite {name:?} runs on random families; drop --model to use it")
            } else {
                format!("unknown suite {name:?}; available: {}", catalog.join(", "))
            };
            return Err(CliError::Input(reason));
        }
        names.push(name.to_string());
    }
    if names.is_empty() {
        return Err(CliError::Input("no suites requested".into()));
    }
    Ok(names)
}

fn run_scoped(suite: &str, spec: &OperatorSpec, seed: u64, tol: f64) -> CliResult<ScopedCheck> {
    let (pass, report) = match suite {
        "band-lengths" => {
            let r = verify_band_lengths(spec, tol)?;
            (r.pass, ScopedReport::BandLengths(r))
        }
        "polya-consistency" => {
            let r = verify_polya_ac(spec, seed)?;
            (r.pass, ScopedReport::Polya(r))
        }
        "density-product" => {
            let r = verify_deift_simon(spec, 32, 1e-6, 1e-6)?;
            (r.pass, ScopedReport::Density(r))
        }
        "nesting" => {
            let copies = (32 / spec.period).clamp(1, 3);
            let r = verify_nesting(spec, copies)?;
            (r.pass, ScopedReport::Nesting(r))
        }
        other => unreachable!("requested_suites admitted {other:?}"),
    };
    Ok(ScopedCheck {
        suite: suite.to_string(),
        pass,
        report,
    })
}

pub fn cmd_verify(
    model: &ModelArgs,
    seed: u64,
    suites: &str,
    tol: f64,
    output: Option<&Path>,
    pretty: bool,
) -> CliResult<i32> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(CliError::Input(format!(
            "--tol must be a positive finite number, got {tol}"
        )));
    }

    let scoped = model.model.is_some();
    let names = requested_suites(suites, scoped)?;

    let all_pass = if scoped {
        let spec = resolve_model(model)?.spec().clone();
        let checks = names
            .iter()
            .map(|name| run_scoped(name, &spec, seed, tol))
            .collect::<CliResult<Vec<_>>>()?;
        let all_pass = checks.iter().all(|c| c.pass);
        if pretty {
            for check in &checks {
                eprintln!(
                    "  {:<22} {}",
                    check.suite,
                    if check.pass { "pass" } else { "FAIL" }
                );
            }
        }
        let report = VerifyModelReport {
            command: "verify",
            mode: "model",
            seed,
            label: spec.label.clone(),
            period: spec.period,
            checks,
            all_pass,
        };
        emit(&report, output)?;
        all_pass
    } else {
        // The suites are independent; run them on a bounded pool but
        // collect in request order so the report is stable.
        let cap = thread_cap()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cap)
            .build()
            .map_err(|e| CliError::Input(format!("could not build thread pool: {e}")))?;
        let outcomes: Result<Vec<SuiteOutcome>, jacobi_spectra::Error> = pool.install(|| {
            use rayon::prelude::*;
            names.par_iter().map(|name| run_named(name, seed)).collect()
        });
        let outcomes = outcomes?;
        let all_pass = outcomes.iter().all(|o| o.pass);
        if pretty {
            for o in &outcomes {
                eprintln!(
                    "  {:<22} {}  ({} cases, worst {:.3e}{})",
                    o.suite,
                    if o.pass { "pass" } else { "FAIL" },
                    o.cases,
                    o.worst_err,
                    if o.worst_case.is_empty() {
                        String::new()
                    } else {
                        format!(" @ {}", o.worst_case)
                    },
                );
            }
        }
        let report = VerifyFamilyReport {
            command: "verify",
            mode: "family",
            seed,
            suites: outcomes,
            all_pass,
        };
        emit(&report, output)?;
        all_pass
    };

    Ok(if all_pass { 0 } else { 1 })
}

// ----------------------------------------------------------------- plot

#[derive(Serialize)]
struct PlotReport {
    command: &'static str,
    label: String,
    period: usize,
    window: Window,
    grid: usize,
    bands: usize,
    output: String,
    bytes: usize,
}

pub fn cmd_plot(
    model: &ModelArgs,
    window: Option<&str>,
    grid: usize,
    output: &Path,
    pretty: bool,
) -> CliResult<i32> {
    if grid < 2 {
        return Err(CliError::Input(format!(
            "--grid must be at least 2, got {grid}"
        )));
    }
    let resolved = resolve_model(model)?;
    let spec = resolved.spec();
    let bs = band_structure(spec, 1e-12)?;
    let (e_lo, e_hi) = match window {
        Some(text) => {
            let w = parse_window(text)?;
            if !w.left.is_finite() || !w.right.is_finite() {
                return Err(CliError::Input("the plot window must be finite".into()));
            }
            (w.left, w.right)
        }
        None => {
            let (lo, hi) = bs.hull();
            let pad = 0.08 * (hi - lo).max(1.0);
            (lo - pad, hi + pad)
        }
    };

    let drawing = svg::discriminant_plot(spec, &bs, e_lo, e_hi, grid);
    std::fs::write(output, drawing.as_bytes())
        .map_err(|e| CliError::Io(format!("could not write {}: {e}", output.display())))?;

    let report = PlotReport {
        command: "plot",
        label: spec.label.clone(),
        period: spec.period,
        window: Window::new(e_lo, e_hi)?,
        grid,
        bands: bs.bands.len(),
        output: output.display().to_string(),
        bytes: drawing.len(),
    };
    if pretty {
        eprintln!(
            "wrote {} ({} bytes, {} bands)",
            report.output, report.bytes, report.bands
        );
    }
    emit(&report, None)?;
    Ok(0)
}

// --------------------------------------------------------------- models

#[derive(Serialize)]
struct BuilderInfo {
    name: &'static str,
    flags: &'static [&'static str],
    description: &'static str,
}

#[derive(Serialize)]
struct ModelsReport {
    command: &'static str,
    builders: Vec<BuilderInfo>,
}

pub fn cmd_models(output: Option<&Path>, pretty: bool) -> CliResult<i32> {
    let report = ModelsReport {
        command: "models",
        builders: vec![
            BuilderInfo {
                name: "free",
                flags: &["--q"],
                description: "period-q operator with a = 1, b = 0",
            },
            BuilderInfo {
                name: "constant",
                flags: &["--a", "--b", "--q"],
                description: "constant coefficients a > 0 and b with period q",
            },
            BuilderInfo {
                name: "two-value",
                flags: &["--R", "--m", "--l"],
                description: "period m+l with a = 1 and diagonal m zeros then l copies of R",
            },
            BuilderInfo {
                name: "<path or inline JSON>",
                flags: &[],
                description: "explicit {\"period\", \"a\", \"b\", \"label\"} object",
            },
        ],
    };
    if pretty {
        for b in &report.builders {
            eprintln!(
                "  {:<24} {:<20} {}",
                b.name,
                b.flags.join(" "),
                b.description
            );
        }
    }
    emit(&report, output)?;
    Ok(0)
}
