//! Floquet band structure of a periodic operator.
//!
//! The discriminant of a period-`q` operator is a degree-`q` polynomial
//! with `q` simple real zeros, and its `q - 1` critical values all satisfy
//! `|Delta| >= 2`.  Between consecutive critical points `Delta` is strictly
//! monotone and sweeps the whole strip `[-2, 2]` exactly once, so each of
//! the `q` monotone pieces carries exactly one band.  This module finds the
//! critical points (derivative-chain bisection on the expanded polynomial
//! for moderate periods, a sign-scan on the evaluated derivative beyond
//! that) and then bisects the two level crossings on each piece.
//!
//! Band edges where the discriminant is tangent to `±2` (closed gaps) are
//! the critical points themselves; they are detected by the critical value
//! sitting within evaluation noise of `±2` and snapped there, because
//! bisecting a tangential crossing would square-root-amplify the rounding
//! of the level into the edge location.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::model::{OperatorSpec, Window};
use crate::poly::simple_real_roots;
use crate::transfer::{discriminant_eval, discriminant_poly, MAX_POLY_PERIOD};

/// Critical values within this distance of `±2` are treated as tangencies
/// (closed gaps).  Comfortably above the discriminant's evaluation noise,
/// far below any resolvable open gap.
const TANGENT_TOL: f64 = 1e-11;

/// A closed band `[left, right]`: a maximal interval with `|Delta| <= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Band {
    pub left: f64,
    pub right: f64,
}

impl Band {
    pub fn length(&self) -> f64 {
        self.right - self.left
    }
}

/// The full band decomposition of the spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct BandStructure {
    pub period: usize,
    /// Exactly `period` bands in ascending energy order.  Adjacent bands
    /// touch exactly when the gap between them is closed.
    pub bands: Vec<Band>,
    /// Value of `Delta` at the left edge of each band: `+2.0` or `-2.0`,
    /// alternating; the rightmost band always starts at `-2.0`.
    pub edge_signs: Vec<f64>,
    /// `closed_gaps[j]`: the gap between `bands[j]` and `bands[j + 1]`
    /// is narrower than the tolerance (the bands touch).
    pub closed_gaps: Vec<bool>,
    /// 1-based index of each band when counting from the top of the
    /// spectrum downwards (`bands[i]` is band `right_to_left_index[i]`
    /// in that numbering, so the last entry is always 1).
    pub right_to_left_index: Vec<usize>,
}

impl BandStructure {
    /// Total length of all bands.
    pub fn total_measure(&self) -> f64 {
        self.bands.iter().map(Band::length).sum()
    }

    /// Smallest interval containing the whole spectrum.
    pub fn hull(&self) -> (f64, f64) {
        (self.bands[0].left, self.bands[self.bands.len() - 1].right)
    }

    /// Band lengths reindexed right-to-left (entry 0 is the topmost band).
    pub fn lengths_right_to_left(&self) -> Vec<f64> {
        self.bands.iter().rev().map(Band::length).collect()
    }
}

/// Gershgorin-style interval certain to contain the spectrum and all band
/// edges, using the periodic wrap for the row radii.
fn spectrum_bracket(spec: &OperatorSpec) -> (f64, f64) {
    let q = spec.period;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..q {
        let a_left = if j == 0 { spec.a[q - 1] } else { spec.a[j - 1] };
        let radius = a_left + spec.a[j];
        lo = lo.min(spec.b[j] - radius);
        hi = hi.max(spec.b[j] + radius);
    }
    (lo, hi)
}

/// `(Delta(E), Delta'(E))` by forward accumulation through the one-period
/// product; exact derivative, no finite differences.
fn discriminant_with_derivative(spec: &OperatorSpec, e: f64) -> (f64, f64) {
    let q = spec.period;
    let mut m = Mat2::IDENTITY;
    let mut dm = Mat2::new(0.0, 0.0, 0.0, 0.0);
    let mut a_prev = spec.a[q - 1];
    for k in 0..q {
        let a_cur = spec.a[k];
        let t = Mat2::new((e - spec.b[k]) / a_cur, -a_prev / a_cur, 1.0, 0.0);
        let dt = Mat2::new(1.0 / a_cur, 0.0, 0.0, 0.0);
        dm = dt.mul(&m).add(&t.mul(&dm));
        m = t.mul(&m);
        a_prev = a_cur;
    }
    (m.trace(), dm.trace())
}

/// Bisection for a root of `f` on a bracket with known sign at `lo`;
/// stops at width `tol * (1 + |mid|)`.
fn bisect_root<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, neg_lo: bool, tol: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * (1.0 + mid.abs()) {
            return mid;
        }
        if (f(mid) < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Critical points of the discriminant (roots of `Delta'`), ascending.
/// They are always real and simple, one strictly between consecutive
/// zeros of `Delta`.
fn critical_points(spec: &OperatorSpec, tol: f64) -> Result<Vec<f64>> {
    let q = spec.period;
    if q == 1 {
        return Ok(Vec::new());
    }
    if q <= MAX_POLY_PERIOD {
        let delta = discriminant_poly(spec)?;
        return simple_real_roots(&delta.derivative(), tol.min(1e-12));
    }

    // Large periods: scan the evaluated derivative for sign changes.
    let (lo, hi) = spectrum_bracket(spec);
    let (scan_lo, scan_hi) = (lo - 1.0, hi + 1.0);
    let steps = 4096.max(128 * q);
    let dx = (scan_hi - scan_lo) / steps as f64;
    let dprime = |e: f64| discriminant_with_derivative(spec, e).1;

    let mut cps = Vec::with_capacity(q - 1);
    let mut prev_x = scan_lo;
    let mut prev_neg = dprime(prev_x) < 0.0;
    for i in 1..=steps {
        let x = scan_lo + dx * i as f64;
        let neg = dprime(x) < 0.0;
        if neg != prev_neg {
            cps.push(bisect_root(&dprime, prev_x, x, prev_neg, tol.min(1e-12)));
        }
        prev_x = x;
        prev_neg = neg;
    }
    if cps.len() != q - 1 {
        return Err(Error::Numerical(format!(
            "critical-point scan found {} of {} expected extrema; \
             bands are too finely clustered for the scan resolution",
            cps.len(),
            q - 1
        )));
    }
    Ok(cps)
}

/// Compute the band decomposition.  `tol` controls the bisection width for
/// band edges (scaled by `1 + |E|`) and the closed-gap reporting threshold.
pub fn band_structure(spec: &OperatorSpec, tol: f64) -> Result<BandStructure> {
    spec.validate()?;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "band tolerance must be positive and finite, got {tol}"
        )));
    }
    let q = spec.period;
    let delta = |e: f64| discriminant_eval(spec, e);

    let cps = critical_points(spec, tol)?;
    let (lo, hi) = spectrum_bracket(spec);
    let mut cuts = Vec::with_capacity(q + 1);
    cuts.push(lo - 1.0);
    cuts.extend_from_slice(&cps);
    cuts.push(hi + 1.0);

    // Sign of Delta at the start of the first piece: the leading
    // coefficient is positive, so Delta(E) -> (-1)^q * inf as E -> -inf.
    let mut s = if q.is_multiple_of(2) { 1.0 } else { -1.0 };

    let mut bands = Vec::with_capacity(q);
    let mut edge_signs = Vec::with_capacity(q);
    for j in 0..q {
        let (x0, x1) = (cuts[j], cuts[j + 1]);

        // Conditioning check: interior piece boundaries are critical
        // points, whose values must not land strictly inside the strip.
        if j > 0 {
            let v = delta(x0);
            if v.abs() < 2.0 - 1e-6 {
                return Err(Error::Numerical(format!(
                    "critical value {v} at E = {x0} sits inside (-2, 2); \
                     discriminant evaluation is not trustworthy here"
                )));
            }
        }

        // Entry crossing: s * Delta falls through +2 somewhere on the
        // piece, unless it starts tangent to it (closed gap on the left).
        let enter = |e: f64| s * delta(e) - 2.0;
        let left = if j > 0 && enter(x0) <= TANGENT_TOL {
            x0
        } else {
            bisect_root(&enter, x0, x1, false, tol)
        };

        // Exit crossing: s * Delta falls through -2, unless the piece
        // ends tangent to it (closed gap on the right).
        let exit = |e: f64| s * delta(e) + 2.0;
        let right = if j + 1 < q && exit(x1) >= -TANGENT_TOL {
            x1
        } else {
            bisect_root(&exit, left, x1, false, tol)
        };

        if !(left <= right) {
            return Err(Error::Numerical(format!(
                "band {j} collapsed: left edge {left} right edge {right}"
            )));
        }
        bands.push(Band { left, right });
        edge_signs.push(2.0 * s);
        s = -s;
    }

    let closed_gaps = (0..q.saturating_sub(1))
        .map(|j| {
            let gap = bands[j + 1].left - bands[j].right;
            gap <= tol * (1.0 + bands[j].right.abs())
        })
        .collect();
    let right_to_left_index = (0..q).map(|i| q - i).collect();

    Ok(BandStructure {
        period: q,
        bands,
        edge_signs,
        closed_gaps,
        right_to_left_index,
    })
}

/// Lebesgue measure of (union of bands) ∩ `w`.
pub fn ac_measure(bs: &BandStructure, w: &Window) -> f64 {
    bs.bands
        .iter()
        .map(|band| (band.right.min(w.right) - band.left.max(w.left)).max(0.0))
        .sum()
}

/// Per-band length caps `2 A_q [cos(pi (i-1)/q) - cos(pi i/q)]`, indexed
/// right-to-left (entry 0 caps the topmost band).  Their sum telescopes to
/// `4 A_q`, and every cap is attained simultaneously exactly in the
/// constant-coefficient case.
pub fn band_length_bounds(spec: &OperatorSpec) -> Vec<f64> {
    let q = spec.period as f64;
    let a_q = spec.geometric_mean_a();
    (1..=spec.period)
        .map(|i| {
            let prev = (std::f64::consts::PI * (i - 1) as f64 / q).cos();
            let cur = (std::f64::consts::PI * i as f64 / q).cos();
            2.0 * a_q * (prev - cur)
        })
        .collect()
}

/// Outcome of checking the measured band lengths against their caps.
#[derive(Clone, Debug, Serialize)]
pub struct BandLengthReport {
    pub period: usize,
    /// Measured band lengths, right-to-left.
    pub lengths: Vec<f64>,
    /// Caps in the same order.
    pub bounds: Vec<f64>,
    /// `bounds - lengths`, right-to-left; nonnegative up to `tol` when the
    /// caps hold.
    pub slack: Vec<f64>,
    /// Bands whose cap is attained within `tol`.
    pub equality: Vec<bool>,
    /// Largest violation found (0 when all caps hold).
    pub max_violation: f64,
    pub pass: bool,
}

/// Check every band length against its cap, reporting per-band slack and
/// equality flags (`tol` is both the violation allowance and the equality
/// detection width).
pub fn verify_band_lengths(spec: &OperatorSpec, tol: f64) -> Result<BandLengthReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let bs = band_structure(spec, 1e-12)?;
    let lengths = bs.lengths_right_to_left();
    let bounds = band_length_bounds(spec);
    let slack: Vec<f64> = bounds
        .iter()
        .zip(lengths.iter())
        .map(|(b, l)| b - l)
        .collect();
    let equality = slack.iter().map(|s| s.abs() <= tol).collect();
    let max_violation = slack.iter().fold(0.0_f64, |m, s| m.max(-s));
    let pass = max_violation <= tol;
    Ok(BandLengthReport {
        period: spec.period,
        lengths,
        bounds,
        slack,
        equality,
        max_violation,
        pass,
    })
}
