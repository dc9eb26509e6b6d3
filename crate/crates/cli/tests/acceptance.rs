//! Acceptance gate for the toolkit: every stated requirement runs here
//! with its tolerance and wall-clock budget, and prints one `[PASS]` line
//! (visible with `--nocapture`) when it holds.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use jacobi_spectra::suites::{
    random_spec, suite_deift_simon, suite_discriminant_identity, suite_ids, suite_interp_derivative,
};
use jacobi_spectra::{
    ac_bound, ac_measure, band_structure, ids_truncation, make_constant, make_free, make_two_value,
    unroll, verify_band_lengths, verify_nesting, IdsEvaluator, SplitMix64, Window,
};

const SEED: u64 = 42;

/// Constant-coefficient periods used by the equality checks.
const CONSTANTS: [(f64, f64, usize); 5] = [
    (1.0, 0.0, 4),
    (1.5, -0.7, 5),
    (0.8, 2.0, 3),
    (2.0, 0.0, 1),
    (1.0, 0.3, 12),
];

fn finish(label: &str, budget_s: f64, started: Instant) {
    let took = started.elapsed().as_secs_f64();
    assert!(
        took <= budget_s,
        "{label}: took {took:.2}s, budget {budget_s}s"
    );
    println!("[PASS] {label} ({took:.2}s)");
}

/// The seeded model family shared by the random-period checks.
fn family_spec(case: u64, q_min: usize, q_max: usize) -> jacobi_spectra::OperatorSpec {
    let mut rng = SplitMix64::fork(SEED, case);
    random_spec(&mut rng, q_min, q_max)
}

#[test]
fn free_band_edges_match_the_cosine_partition() {
    let start = Instant::now();
    for q in 2..=12usize {
        let bs = band_structure(&make_free(q).unwrap(), 1e-12).unwrap();
        assert_eq!(bs.bands.len(), q);
        for (i, band) in bs.bands.iter().enumerate() {
            let left = 2.0 * (std::f64::consts::PI * (q - i) as f64 / q as f64).cos();
            let right = 2.0 * (std::f64::consts::PI * (q - i - 1) as f64 / q as f64).cos();
            assert!(
                (band.left - left).abs() <= 1e-9 && (band.right - right).abs() <= 1e-9,
                "free q={q} band {i}: got [{}, {}], want [{left}, {right}]",
                band.left,
                band.right,
            );
        }
    }
    finish(
        "free band edges equal 2cos(pi j/q) within 1e-9 for periods 2..=12",
        1.0,
        start,
    );
}

#[test]
fn trace_matches_the_scaled_characteristic_polynomial() {
    let start = Instant::now();
    let out = suite_discriminant_identity(SEED, 100).unwrap();
    assert_eq!(out.cases, 100 * 50);
    assert!(
        out.pass && out.failures == 0 && out.worst_err <= 1e-8,
        "worst {:.3e} at {}",
        out.worst_err,
        out.worst_case,
    );
    finish(
        &format!(
            "trace identity on 100 random periods x 50 energies, worst {:.2e} <= 1e-8",
            out.worst_err
        ),
        5.0,
        start,
    );
}

#[test]
fn band_length_caps_hold_with_equality_for_constants() {
    let start = Instant::now();
    for case in 0..100u64 {
        let spec = family_spec(case, 3, 10);
        let report = verify_band_lengths(&spec, 1e-9).unwrap();
        assert!(
            report.pass && report.max_violation <= 1e-9,
            "case {case} (q={}): violation {:.3e}",
            spec.period,
            report.max_violation,
        );
    }
    for (a0, b0, q) in CONSTANTS {
        let report = verify_band_lengths(&make_constant(a0, b0, q).unwrap(), 1e-9).unwrap();
        let worst_slack = report.slack.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        assert!(
            report.pass && report.equality.iter().all(|&e| e) && worst_slack <= 1e-9,
            "constant(a={a0}, b={b0}, q={q}): worst slack {worst_slack:.3e}",
        );
    }
    finish(
        "per-band length caps on 100 random periods, equality within 1e-9 on constants",
        30.0,
        start,
    );
}

#[test]
fn total_band_measure_respects_the_global_cap() {
    let start = Instant::now();
    for case in 0..100u64 {
        let spec = family_spec(case, 3, 10);
        let bs = band_structure(&spec, 1e-12).unwrap();
        let cap = 4.0 * spec.geometric_mean_a();
        assert!(
            bs.total_measure() <= cap + 1e-9,
            "case {case} (q={}): measure {} > cap {cap}",
            spec.period,
            bs.total_measure(),
        );
    }
    for (a0, b0, q) in CONSTANTS {
        let spec = make_constant(a0, b0, q).unwrap();
        let bs = band_structure(&spec, 1e-12).unwrap();
        let cap = 4.0 * spec.geometric_mean_a();
        assert!(
            (bs.total_measure() - cap).abs() <= 1e-9,
            "constant(a={a0}, b={b0}, q={q}): measure {} vs cap {cap}",
            bs.total_measure(),
        );
    }
    finish(
        "total band measure <= 4 A_q on 100 random periods, equality on constants",
        30.0,
        start,
    );
}

#[test]
fn window_bounds_dominate_the_banded_measure() {
    let start = Instant::now();
    for case in 0..100u64 {
        let spec = family_spec(case, 3, 10);
        let bs = band_structure(&spec, 1e-12).unwrap();
        let (lo, hi) = bs.hull();
        let mut wrng = SplitMix64::fork(SEED ^ 0xa5a5_a5a5, case);
        for w_idx in 0..20 {
            let x = wrng.uniform(lo - 2.0, hi + 2.0);
            let y = wrng.uniform(lo - 2.0, hi + 2.0);
            if x == y {
                continue;
            }
            let window = Window::new(x.min(y), x.max(y)).unwrap();
            let measure = ac_measure(&bs, &window);
            for t in [1usize, 3] {
                let prefix = unroll(&spec, t * spec.period).unwrap();
                let report = ac_bound(&prefix, &window).unwrap();
                if let Some(bound) = report.bound {
                    assert!(
                        measure <= bound + 1e-9,
                        "case {case} window {w_idx} t={t}: measure {measure} > bound {bound}",
                    );
                }
            }
        }
    }
    finish(
        "window bound dominates the banded measure on 100 periods x 20 windows",
        60.0,
        start,
    );
}

#[test]
fn two_value_bounds_match_closed_forms_and_collapse() {
    let start = Instant::now();
    for (m, l) in [(1usize, 1usize), (2, 1), (1, 3)] {
        let mut previous_low = f64::INFINITY;
        let mut previous_high = f64::INFINITY;
        for r in [6.0, 8.0, 20.0, 1e3] {
            let tv = make_two_value(r, m, l).unwrap();
            let prefix = unroll(&tv.spec, 2 * (m + l)).unwrap();
            let low = ac_bound(&prefix, &Window::new(-2.0, 2.0).unwrap()).unwrap();
            let high = ac_bound(&prefix, &Window::new(r - 2.0, r + 2.0).unwrap()).unwrap();
            let (low_bound, high_bound) = (low.bound.unwrap(), high.bound.unwrap());

            let want_low = 4.0 / (r - 4.0).powf(l as f64 / m as f64);
            let want_high = 4.0 / (r - 4.0).powf(m as f64 / l as f64);
            assert!(
                (low_bound / want_low - 1.0).abs() <= 1e-12,
                "R={r} m={m} l={l}: low bound {low_bound} vs closed form {want_low}",
            );
            assert!(
                (high_bound / want_high - 1.0).abs() <= 1e-12,
                "R={r} m={m} l={l}: high bound {high_bound} vs closed form {want_high}",
            );

            assert!(
                low_bound < previous_low && high_bound < previous_high,
                "R={r} m={m} l={l}: bounds must shrink as the level deepens",
            );
            previous_low = low_bound;
            previous_high = high_bound;
        }
    }
    finish(
        "two-value closed forms to 1e-12 relative; both bounds collapse with depth (to R=1e3)",
        30.0,
        start,
    );
}

#[test]
fn repeating_periods_composes_with_chebyshev() {
    let start = Instant::now();
    for q in 1..=6usize {
        for copies in 1..=4usize {
            let mut rng = SplitMix64::fork(SEED, (q * 10 + copies) as u64);
            let specs = [make_free(q).unwrap(), random_spec(&mut rng, q, q)];
            for spec in &specs {
                let report = verify_nesting(spec, copies).unwrap();
                assert!(
                    report.pass && report.max_coeff_err <= 1e-6 && report.max_pointwise_err <= 1e-9,
                    "{} x{copies}: coeff {:.3e}, pointwise {:.3e}",
                    spec.label,
                    report.max_coeff_err,
                    report.max_pointwise_err,
                );
            }
        }
    }
    finish(
        "repeated periods compose with Chebyshev: coeffs to 1e-6, 50-point values to 1e-9",
        5.0,
        start,
    );
}

#[test]
fn truncated_state_counts_converge_to_the_band_formula() {
    let start = Instant::now();
    let out = suite_ids(SEED, 20).unwrap();
    assert!(
        out.pass && out.worst_err <= 2e-3,
        "worst {:.3e} at {}",
        out.worst_err,
        out.worst_case,
    );
    // Pin the largest admitted period explicitly.
    let spec = make_free(8).unwrap();
    let eval = IdsEvaluator::new(&spec).unwrap();
    let (lo, hi) = eval.bands().hull();
    let mut sup = 0.0f64;
    for i in 0..200 {
        let e = lo - 0.25 + (hi - lo + 0.5) * i as f64 / 199.0;
        sup = sup.max((eval.value(e) - ids_truncation(&spec, e, 16_000).unwrap()).abs());
    }
    assert!(sup <= 2e-3, "free q=8: sup {sup:.3e}");
    finish(
        &format!(
            "16000-site state counts match the band formula within 2e-3 (worst {:.2e})",
            out.worst_err.max(sup)
        ),
        60.0,
        start,
    );
}

#[test]
fn density_product_never_drops_below_one() {
    let start = Instant::now();
    let out = suite_deift_simon(SEED, 100).unwrap();
    assert!(
        out.pass && out.worst_err <= 1e-6,
        "worst {:.3e} at {}",
        out.worst_err,
        out.worst_case,
    );
    finish(
        "density product = 1 on free bands and >= 1 - 1e-6 on 100 random periods",
        120.0,
        start,
    );
}

#[test]
fn node_motion_derivative_matches_central_differences() {
    let start = Instant::now();
    let out = suite_interp_derivative(SEED, 100).unwrap();
    assert!(
        out.pass && out.worst_err <= 1e-5,
        "worst {:.3e} at {}",
        out.worst_err,
        out.worst_case,
    );
    finish(
        "node-motion derivative matches central differences to 1e-5 on 100 systems",
        5.0,
        start,
    );
}

// ------------------------------------------------------------------ CLI

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jacobi-spectra"))
}

fn golden_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

#[test]
fn verify_command_is_byte_identical_across_runs() {
    let start = Instant::now();
    let run = || {
        let out = bin()
            .args(["verify", "--seed", "42", "--suites", "all"])
            .output()
            .expect("binary runs");
        assert_eq!(out.status.code(), Some(0), "verify should pass: {:?}", out);
        out.stdout
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty());
    assert_eq!(first, second, "verify output must be byte-identical");
    finish(
        "verify --seed 42 exits 0 and is byte-identical across runs",
        240.0,
        start,
    );
}

#[test]
fn plot_output_matches_its_committed_golden_bytes() {
    let start = Instant::now();
    let tmp = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let run = |name: &str| {
        let path = tmp.join(name);
        let out = bin()
            .args([
                "plot", "--model", "free", "--q", "4", "--grid", "600", "--output",
            ])
            .arg(&path)
            .output()
            .expect("binary runs");
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(&path).expect("plot file exists")
    };
    let first = run("plot_probe_1.svg");
    let second = run("plot_probe_2.svg");
    assert_eq!(first, second, "plot bytes must be reproducible");
    let golden = std::fs::read(golden_path("free_q4_grid600.svg")).expect("golden checked in");
    assert_eq!(
        first, golden,
        "plot bytes must match the committed golden file"
    );
    finish(
        "plot output is byte-stable and matches its golden file",
        60.0,
        start,
    );
}

#[test]
fn bands_json_matches_its_committed_golden_bytes() {
    let start = Instant::now();
    let out = bin()
        .args(["bands", "--model", "free", "--q", "3"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read(golden_path("bands_free_q3.json")).expect("golden checked in");
    assert_eq!(
        out.stdout, golden,
        "bands JSON must match the committed golden file"
    );
    finish(
        "bands JSON matches its golden file byte-for-byte",
        60.0,
        start,
    );
}

#[test]
fn exit_codes_separate_the_failure_classes() {
    let start = Instant::now();

    // Malformed model JSON: input error.
    let out = bin()
        .args(["bands", "--model", "{not json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "malformed JSON");
    assert!(out.stdout.is_empty());

    // Zero tolerance: input error.
    let out = bin().args(["verify", "--tol", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "tol 0");

    // Unknown suite: input error.
    let out = bin()
        .args(["verify", "--suites", "no-such-suite"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "unknown suite");

    // Family-only suite with a fixed model: input error.
    let out = bin()
        .args([
            "verify",
            "--suites",
            "free-edges",
            "--model",
            "free",
            "--q",
            "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "family suite with --model");

    // Unknown flag: clap reports usage errors as 2.
    let out = bin().args(["bands", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "unknown flag");

    // Unwritable output: I/O error.
    let out = bin()
        .args([
            "plot",
            "--model",
            "free",
            "--q",
            "2",
            "--output",
            "/no/such/dir/plot.svg",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "unwritable output");

    finish(
        "exit codes: 2 for bad input, 4 for unwritable output, 0 otherwise",
        60.0,
        start,
    );
}
