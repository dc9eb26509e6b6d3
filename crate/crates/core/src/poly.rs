//! Dense univariate real polynomials (ascending coefficients), plus root
//! isolation for the all-real-rooted family this crate produces.
//!
//! The root finder is deliberately not a general-purpose one: every
//! polynomial we need roots of (discriminants shifted by ±2 and the
//! derivative chains underneath them) is guaranteed to have only real
//! roots, and the derivative of a polynomial with `d` distinct real roots
//! has exactly `d - 1` distinct real roots strictly interlacing them.
//! Walking the derivative chain from the linear level back up therefore
//! brackets every root between two known separators, and plain bisection
//! finishes the job without any symbolic remainder sequences.

use crate::error::{Error, Result};

/// Relative threshold below which trailing (highest-degree) coefficients
/// are treated as zero and stripped.
const TRAILING_EPS: f64 = 1e-12;

/// Polynomial with coefficients in ascending degree order
/// (`coeffs[k]` multiplies `x^k`).  Normalized: the representation never
/// carries trailing coefficients smaller than `1e-12` relative to the
/// largest one, and the zero polynomial is stored as `[0.0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    fn normalize(&mut self) {
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
            return;
        }
        let scale = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            self.coeffs.truncate(1);
            self.coeffs[0] = 0.0;
            return;
        }
        while self.coeffs.len() > 1 {
            let last = *self.coeffs.last().unwrap();
            if last.abs() <= TRAILING_EPS * scale {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }

    pub fn sub(&self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    /// `self(inner(x))`, by Horner's scheme over polynomial arithmetic.
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::constant(*self.coeffs.last().unwrap());
        for k in (0..self.coeffs.len() - 1).rev() {
            acc = acc.mul(inner).add(&Polynomial::constant(self.coeffs[k]));
        }
        acc
    }

    /// Cauchy bound: all complex (hence all real) roots lie in
    /// `|x| < 1 + max_{k<d} |c_k| / |c_d|`.
    pub fn root_bound(&self) -> f64 {
        let d = self.degree();
        if d == 0 {
            return 1.0;
        }
        let lead = self.coeffs[d].abs();
        let m = self.coeffs[..d].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        1.0 + m / lead
    }
}

/// Coefficients of the Chebyshev polynomial of the first kind, `T_n`.
///
/// Built with the three-term recurrence `T_{k+1} = 2x T_k - T_{k-1}`.
/// All coefficients are integers below 2^53 for every `n` this crate
/// accepts, so the arithmetic is exact.
pub fn chebyshev_t_poly(n: usize) -> Polynomial {
    if n == 0 {
        return Polynomial::constant(1.0);
    }
    let mut prev = Polynomial::constant(1.0);
    let mut cur = Polynomial::new(vec![0.0, 1.0]);
    for _ in 1..n {
        let two_x = Polynomial::new(vec![0.0, 2.0]);
        let next = two_x.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// All real roots, ascending, of a polynomial whose roots are known to be
/// real and simple.
///
/// Solves the linear bottom of the derivative chain exactly, then walks
/// back up: at each level the previous level's roots separate the current
/// level's roots, so every root is bracketed by a strict sign change and
/// bisection converges unconditionally.  Finding fewer roots than the
/// degree at any level means the premise failed (clustered or complex
/// roots) and surfaces as `Error::Numerical`.
pub fn simple_real_roots(p: &Polynomial, tol: f64) -> Result<Vec<f64>> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument(
            "root tolerance must be positive".into(),
        ));
    }
    if p.is_zero() {
        return Err(Error::InvalidArgument(
            "cannot isolate roots of the zero polynomial".into(),
        ));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }

    let mut chain = vec![p.clone()];
    while chain.last().unwrap().degree() > 1 {
        let next = chain.last().unwrap().derivative();
        chain.push(next);
    }

    let lin = chain.pop().unwrap();
    let mut roots = vec![-lin.coeff(0) / lin.coeff(1)];

    while let Some(level) = chain.pop() {
        roots = roots_between_separators(&level, &roots, tol)?;
    }
    Ok(roots)
}

/// Roots of `f` given the roots of `f'` as separators (interlacing).
fn roots_between_separators(f: &Polynomial, separators: &[f64], tol: f64) -> Result<Vec<f64>> {
    let bound = f.root_bound();
    let mut points = Vec::with_capacity(separators.len() + 2);
    points.push(-bound);
    points.extend_from_slice(separators);
    points.push(bound);

    let mut roots = Vec::with_capacity(f.degree());
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo >= hi {
            continue;
        }
        let vlo = f.eval(lo);
        let vhi = f.eval(hi);
        // Sign with zero counted as positive: an exact zero at a separator
        // would mean a multiple root, which the caller's premise excludes;
        // rounding-level near-zeros still bracket correctly on one side.
        let neg_lo = vlo < 0.0;
        let neg_hi = vhi < 0.0;
        if neg_lo != neg_hi {
            roots.push(bisect(f, lo, hi, neg_lo, tol));
        }
    }

    if roots.len() != f.degree() {
        return Err(Error::Numerical(format!(
            "root isolation found {} of {} roots (degree {}); \
             roots are clustered beyond working precision or not all real",
            roots.len(),
            f.degree(),
            f.degree()
        )));
    }
    Ok(roots)
}

/// Bisection on a bracket with `f(lo)` of known sign; width target is
/// `tol * (1 + |mid|)`.
fn bisect(f: &Polynomial, mut lo: f64, mut hi: f64, neg_lo: bool, tol: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * (1.0 + mid.abs()) {
            return mid;
        }
        let v = f.eval(mid);
        if (v < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_coefficients_are_stripped_relative_to_scale() {
        let p = Polynomial::new(vec![1.0, 2.0, 1e-15]);
        assert_eq!(p.degree(), 1);
        // ... but a coefficient above the relative threshold survives.
        let q = Polynomial::new(vec![1.0, 2.0, 1e-10]);
        assert_eq!(q.degree(), 2);
        assert!(Polynomial::new(vec![0.0, 0.0]).is_zero());
    }

    #[test]
    fn arithmetic_small_identities() {
        let one_plus_x = Polynomial::new(vec![1.0, 1.0]);
        let one_minus_x = Polynomial::new(vec![1.0, -1.0]);
        assert_eq!(one_plus_x.mul(&one_minus_x).coeffs(), &[1.0, 0.0, -1.0][..]);

        let sq = Polynomial::new(vec![0.0, 0.0, 1.0]);
        let shift = Polynomial::new(vec![1.0, 1.0]);
        assert_eq!(sq.compose(&shift).coeffs(), &[1.0, 2.0, 1.0][..]);

        let cubic = Polynomial::new(vec![0.0, -3.0, 0.0, 1.0]);
        assert_eq!(cubic.derivative().coeffs(), &[-3.0, 0.0, 3.0][..]);
    }

    #[test]
    fn horner_matches_naive_evaluation() {
        let p = Polynomial::new(vec![2.0, -1.0, 0.5, 3.0, -0.25]);
        for k in -10..=10 {
            let x = k as f64 / 3.0;
            let naive: f64 = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| c * x.powi(i as i32))
                .sum();
            assert!((p.eval(x) - naive).abs() <= 1e-12 * (1.0 + naive.abs()));
        }
    }

    #[test]
    fn chebyshev_coefficients_match_closed_forms() {
        assert_eq!(chebyshev_t_poly(0).coeffs(), &[1.0][..]);
        assert_eq!(chebyshev_t_poly(1).coeffs(), &[0.0, 1.0][..]);
        assert_eq!(chebyshev_t_poly(3).coeffs(), &[0.0, -3.0, 0.0, 4.0][..]);
        // T_6 = 32x^6 - 48x^4 + 18x^2 - 1
        assert_eq!(
            chebyshev_t_poly(6).coeffs(),
            &[-1.0, 0.0, 18.0, 0.0, -48.0, 0.0, 32.0][..]
        );
    }

    #[test]
    fn roots_of_quadratic_and_chebyshev() {
        let p = Polynomial::new(vec![-1.0, 0.0, 1.0]); // x^2 - 1
        let roots = simple_real_roots(&p, 1e-14).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 1.0).abs() < 1e-12 && (roots[1] - 1.0).abs() < 1e-12);

        // T_8 vanishes at cos((2k-1) pi / 16), k = 1..8.
        let t8 = chebyshev_t_poly(8);
        let roots = simple_real_roots(&t8, 1e-14).unwrap();
        let expected: Vec<f64> = (1..=8)
            .rev()
            .map(|k| ((2 * k - 1) as f64 * std::f64::consts::PI / 16.0).cos())
            .collect();
        for (r, e) in roots.iter().zip(expected.iter()) {
            assert!((r - e).abs() < 1e-12, "root {r} vs expected {e}");
        }
    }

    #[test]
    fn roots_of_expanded_factorial_product() {
        // prod_{k=1..8} (x - k), expanded; the roots must come back.
        let mut p = Polynomial::constant(1.0);
        for k in 1..=8 {
            p = p.mul(&Polynomial::new(vec![-(k as f64), 1.0]));
        }
        let roots = simple_real_roots(&p, 1e-14).unwrap();
        assert_eq!(roots.len(), 8);
        for (i, r) in roots.iter().enumerate() {
            assert!((r - (i + 1) as f64).abs() < 1e-8, "root {i} drifted: {r}");
        }
    }

    #[test]
    fn complex_roots_are_reported_as_numerical_failure() {
        let p = Polynomial::new(vec![1.0, 0.0, 1.0]); // x^2 + 1
        assert!(simple_real_roots(&p, 1e-14).is_err());
    }
}
