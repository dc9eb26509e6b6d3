//! Symmetric tridiagonal sections: Sturm pivot counts, bisection
//! eigenvalues, and the finite-volume eigenvalue-counting function.

use crate::error::{Error, Result};
use crate::model::FinitePrefix;

/// Pivots this small are snapped to `±PIVOT_GUARD` so the LDL^T recurrence
/// cannot divide by zero when the shift hits an eigenvalue of a leading
/// principal block.
const PIVOT_GUARD: f64 = 1e-300;

/// Symmetric tridiagonal matrix with strictly positive off-diagonal.
#[derive(Clone, Debug)]
pub struct Tridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidArgument(
                "matrix must have at least one row".into(),
            ));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "off-diagonal length {} must be one less than diagonal length {}",
                off.len(),
                diag.len()
            )));
        }
        if off.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
            return Err(Error::InvalidArgument(
                "off-diagonal entries must be positive and finite".into(),
            ));
        }
        Ok(Tridiag { diag, off })
    }

    /// Top-left `n x n` block of the half-line operator: diagonal
    /// `b(1..n)`, off-diagonal `a(1..n-1)` (the boundary `a(n)` coupling
    /// to the rest of the line is cut).
    pub fn from_prefix(prefix: &FinitePrefix) -> Result<Self> {
        Tridiag::new(prefix.b.clone(), prefix.a[..prefix.n - 1].to_vec())
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Interval certain to contain every eigenvalue (union of Gershgorin
    /// discs, widened by 1 for a strict bracket).
    pub fn bracket(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.off[i - 1];
            }
            if i + 1 < n {
                radius += self.off[i];
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo - 1.0, hi + 1.0)
    }
}

/// Number of eigenvalues strictly below `e`.
///
/// Runs the LDL^T pivot recurrence for `T - e I` and counts negative
/// pivots (Sylvester inertia).  Near-zero pivots are snapped to
/// `±PIVOT_GUARD`, preserving their sign.
pub fn sturm_count(t: &Tridiag, e: f64) -> usize {
    let mut count = 0;
    let mut prev_pivot = 0.0; // unused on the first row
    for i in 0..t.n() {
        let mut pivot = t.diag[i] - e;
        if i > 0 {
            pivot -= t.off[i - 1] * t.off[i - 1] / prev_pivot;
        }
        if pivot.abs() < PIVOT_GUARD {
            pivot = if pivot.is_sign_negative() {
                -PIVOT_GUARD
            } else {
                PIVOT_GUARD
            };
        }
        if pivot < 0.0 {
            count += 1;
        }
        prev_pivot = pivot;
    }
    count
}

/// All eigenvalues, ascending, each bracketed by the Sturm count and
/// refined by bisection until the bracket width drops below `tol`.
///
/// With strictly positive off-diagonals every eigenvalue is simple, so the
/// result is strictly increasing (up to `tol`).
pub fn eigenvalues(t: &Tridiag, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "bisection tolerance must be positive and finite, got {tol}"
        )));
    }
    let n = t.n();
    let (bracket_lo, bracket_hi) = t.bracket();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut lo, mut hi) = (bracket_lo, bracket_hi);
        // Invariant: count(lo) <= k < count(hi).
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if sturm_count(t, mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Finite-volume counting function `k_n(E)`: the fraction of eigenvalues
/// of the `n x n` block at or below `E`.
///
/// The Sturm count is "strictly below"; nudging the shift up by
/// `1e-14 * (1 + |E|)` turns it into "at or below" without crossing the
/// next distinct eigenvalue at any realistic spacing.
pub fn k_n(prefix: &FinitePrefix, e: f64) -> Result<f64> {
    let t = Tridiag::from_prefix(prefix)?;
    let nudged = e + 1e-14 * (1.0 + e.abs());
    Ok(sturm_count(&t, nudged) as f64 / prefix.n as f64)
}
