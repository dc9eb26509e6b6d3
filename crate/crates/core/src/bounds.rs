//! Upper bounds on the absolutely continuous measure from finitely many
//! coefficients, and the classical capacity-type lower bound that makes
//! the band caps sharp.
//!
//! The window bound works entirely from an `n`-site section.  With
//! `M = max a`, `A_n` the geometric mean of `a(1..n)`, and a window
//! `(E_L, E_R)`, split the sites into the near set
//! `I_n = { j : b(j) within 2M + A_n of the window }` and its complement.
//! Each far site contributes a factor `dist(b(j), {E_L, E_R}) - 2M >= A_n`
//! to a product `D_n`, and
//!
//! ```text
//! |ac spectrum ∩ window|  <=  4 * (A_n^n / D_n)^(1/|I_n|)
//! ```
//!
//! holds for every `n`.  Far sites with deep wells (large `dist`) make
//! `D_n` huge and crush the bound; the whole-line window has no far sites
//! and the bound degrades gracefully to the global cap `4 A_n`.
//! Everything is accumulated in log space so extreme windows neither
//! overflow nor underflow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{unroll, FinitePrefix, OperatorSpec, TwoValueSpec, Window};
use crate::rng::SplitMix64;

/// Largest natural log that `exp` maps to a finite `f64`.
const MAX_FINITE_LOG: f64 = 709.0;

/// Geometric mean of strictly positive values, computed in log space.
pub fn geometric_mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(
            "geometric mean of an empty slice".into(),
        ));
    }
    let mut log_sum = 0.0;
    for &v in values {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "geometric mean needs positive finite values, got {v}"
            )));
        }
        log_sum += v.ln();
    }
    Ok((log_sum / values.len() as f64).exp())
}

/// Everything the window bound computed, kept transparent for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// Number of coefficient sites used.
    pub n: usize,
    /// Geometric mean `A_n` of the off-diagonal entries.
    pub a_n: f64,
    /// Uniform off-diagonal bound `M = max a` over the section.
    pub m: f64,
    /// The window being bounded.
    pub window: Window,
    /// Number of sites whose diagonal entry is within reach of the window.
    pub i_n_size: usize,
    /// `ln D_n`: log of the product of far-site distance factors.
    pub ln_d_n: f64,
    /// Natural log of the bound (`-inf` when the window is unreachable).
    pub log_bound: f64,
    /// The bound itself; `None` when it exceeds `f64` range (the log form
    /// is still meaningful).
    pub bound: Option<f64>,
    /// No diagonal entry can reach the window at all: the intersection
    /// with the ac spectrum has measure zero.
    pub zero_measure: bool,
}

/// Upper bound for the ac measure inside `window`, from the first `n`
/// coefficients of the operator.
///
/// The off-diagonal max `M` is taken over the given section; for the bound
/// to be valid for the infinite operator, the section must realize the
/// operator's sup (always true once a periodic operator is unrolled for at
/// least one full period).
pub fn ac_bound(prefix: &FinitePrefix, window: &Window) -> Result<BoundReport> {
    let n = prefix.n;
    let a_n = geometric_mean(&prefix.a)?;
    let m = prefix.a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let reach = 2.0 * m + a_n;

    let mut i_n_size = 0usize;
    let mut ln_d_n = 0.0f64;
    for &b in &prefix.b {
        let near = b > window.left - reach && b < window.right + reach;
        if near {
            i_n_size += 1;
            continue;
        }
        // Far site: distance to the nearest finite endpoint, less 2M.
        let mut dist = f64::INFINITY;
        if window.left.is_finite() {
            dist = dist.min((b - window.left).abs());
        }
        if window.right.is_finite() {
            dist = dist.min((b - window.right).abs());
        }
        let factor = dist - 2.0 * m;
        if !(factor > 0.0) {
            return Err(Error::Numerical(format!(
                "far-site factor {factor} at b = {b} is not positive; \
                 the near/far split is inconsistent"
            )));
        }
        ln_d_n += factor.ln();
    }

    if i_n_size == 0 {
        return Ok(BoundReport {
            n,
            a_n,
            m,
            window: *window,
            i_n_size,
            ln_d_n,
            log_bound: f64::NEG_INFINITY,
            bound: Some(0.0),
            zero_measure: true,
        });
    }

    let log_bound = (4.0f64).ln() + (n as f64 * a_n.ln() - ln_d_n) / i_n_size as f64;
    let bound = (log_bound <= MAX_FINITE_LOG).then(|| log_bound.exp());
    Ok(BoundReport {
        n,
        a_n,
        m,
        window: *window,
        i_n_size,
        ln_d_n,
        log_bound,
        bound,
        zero_measure: false,
    })
}

/// Whole-line cap `4 A_n` on the total ac measure.
pub fn global_bound(prefix: &FinitePrefix) -> Result<f64> {
    Ok(4.0 * geometric_mean(&prefix.a)?)
}

/// Capacity-type lower bound for the degree-`n` extremal sup norm on a set
/// of the given measure: `measure^n / 2^(2n-1)`, returned as
/// `(log_value, value)` with the direct value `None` when it overflows.
/// On an interval the bound is attained by the scaled Chebyshev
/// polynomial; measure 4 gives exactly 2 for every degree.
pub fn polya_lower_bound(measure: f64, n: usize) -> Result<(f64, Option<f64>)> {
    if !(measure >= 0.0) || !measure.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "measure must be finite and nonnegative, got {measure}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if measure == 0.0 {
        return Ok((f64::NEG_INFINITY, Some(0.0)));
    }
    let log_value = n as f64 * measure.ln() - (2 * n - 1) as f64 * std::f64::consts::LN_2;
    let value = (log_value <= MAX_FINITE_LOG).then(|| log_value.exp());
    Ok((log_value, value))
}

/// Closed-form window bound for the two-value model.
///
/// On the window `(-2, 2)` the `m` zero-diagonal sites per period are near
/// and the `l` sites at level `R` are far, each at distance `R - 4` after
/// subtracting `2M = 2`, so the bound telescopes to `4 / (R - 4)^(l/m)`.
/// On `(R - 2, R + 2)` the roles of `m` and `l` swap.  Returns
/// `(log_bound, bound)` in the same shape as [`BoundReport`], or `None`
/// when the window is neither canonical one or `R <= 4` leaves no far
/// sites to telescope.  The value is independent of how many periods the
/// section spans.
pub fn two_value_closed_form(tv: &TwoValueSpec, window: &Window) -> Option<(f64, Option<f64>)> {
    if tv.r <= 4.0 {
        return None;
    }
    let matches = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + y.abs());
    let ratio = if matches(window.left, -2.0) && matches(window.right, 2.0) {
        tv.l as f64 / tv.m as f64
    } else if matches(window.left, tv.r - 2.0) && matches(window.right, tv.r + 2.0) {
        tv.m as f64 / tv.l as f64
    } else {
        return None;
    };
    let log_bound = 4.0f64.ln() - ratio * (tv.r - 4.0).ln();
    let bound = (log_bound <= MAX_FINITE_LOG).then(|| log_bound.exp());
    Some((log_bound, bound))
}

/// One window-bound dominance case inside [`verify_polya_ac`].
#[derive(Clone, Debug, Serialize)]
pub struct DominanceCase {
    pub window: Window,
    pub sites: usize,
    pub measure: f64,
    pub log_bound: f64,
    pub ok: bool,
}

/// Consistency report tying the band decomposition, the global cap, and
/// the window bound together for one operator.
#[derive(Clone, Debug, Serialize)]
pub struct PolyaAcReport {
    pub period: usize,
    pub a_q: f64,
    /// Total band measure and the `4 A_q` cap it must respect.
    pub total_measure: f64,
    pub global_cap: f64,
    pub total_ok: bool,
    /// Whether the coefficients are constant, and (if so) whether the cap
    /// is attained to within `1e-9`.
    pub is_constant: bool,
    pub constant_equality_ok: bool,
    /// Seeded random windows where the finite-section bound must dominate
    /// the true banded measure.
    pub cases: Vec<DominanceCase>,
    pub dominance_ok: bool,
    /// `ln D_n >= (n - |I_n|) ln A_n` in every case (far factors are each
    /// at least `A_n`).
    pub invariant_ok: bool,
    pub pass: bool,
}

/// Cross-check the measure bounds on one operator:
///
/// * total band measure is at most `4 A_q` (equality required when the
///   coefficients are constant);
/// * over 20 seeded windows and sections of 1, 2, 4, and 8 periods, the
///   window bound dominates the true ac measure in the window;
/// * the far-site product invariant `D_n >= A_n^(n - |I_n|)` holds.
pub fn verify_polya_ac(spec: &OperatorSpec, seed: u64) -> Result<PolyaAcReport> {
    let bs = crate::bands::band_structure(spec, 1e-12)?;
    let a_q = spec.geometric_mean_a();
    let total_measure = bs.total_measure();
    let global_cap = 4.0 * a_q;
    let total_ok = total_measure <= global_cap + 1e-9;

    let is_constant =
        spec.a.iter().all(|&x| x == spec.a[0]) && spec.b.iter().all(|&x| x == spec.b[0]);
    let constant_equality_ok = !is_constant || (total_measure - global_cap).abs() <= 1e-9;

    let (hull_lo, hull_hi) = bs.hull();
    let span = hull_hi - hull_lo;

    let mut cases = Vec::new();
    let mut dominance_ok = true;
    let mut invariant_ok = true;
    for case in 0..20u64 {
        let mut rng = SplitMix64::fork(seed, case);
        let center = rng.uniform(hull_lo - 1.0, hull_hi + 1.0);
        let half = rng.uniform(0.05 * span.max(0.1), 0.75 * span.max(0.1));
        let window = Window::new(center - half, center + half)?;
        let measure = crate::bands::ac_measure(&bs, &window);
        for t in [1usize, 2, 4, 8] {
            let prefix = unroll(spec, t * spec.period)?;
            let report = ac_bound(&prefix, &window)?;
            // A `None` bound overflowed `f64` and dominates trivially.
            let ok = match report.bound {
                Some(v) => measure <= v + 1e-9,
                None => true,
            };
            dominance_ok &= ok;
            let far = report.n - report.i_n_size;
            invariant_ok &= report.ln_d_n >= far as f64 * report.a_n.ln() - 1e-9;
            cases.push(DominanceCase {
                window,
                sites: report.n,
                measure,
                log_bound: report.log_bound,
                ok,
            });
        }
    }

    let pass = total_ok && constant_equality_ok && dominance_ok && invariant_ok;
    Ok(PolyaAcReport {
        period: spec.period,
        a_q,
        total_measure,
        global_cap,
        total_ok,
        is_constant,
        constant_equality_ok,
        cases,
        dominance_ok,
        invariant_ok,
        pass,
    })
}
