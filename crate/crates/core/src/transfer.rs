//! Transfer matrices, the Floquet discriminant, and the corner-modified
//! finite section whose determinant reproduces it.
//!
//! Two boundary conventions appear here, and they are not interchangeable:
//!
//! * walking a *finite prefix* from the left end uses the half-line
//!   convention `a(0) = 1` (`transfer_matrix`, `lyapunov_estimate`);
//! * anything about a *periodic* operator wraps around, `a(0) = a(q)`
//!   (`monodromy`, the discriminant, the corner determinant).  The wrapped
//!   product has determinant 1, which is what makes `|trace| <= 2` carve
//!   out the spectrum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::model::{FinitePrefix, OperatorSpec};
use crate::poly::Polynomial;

/// Largest period for which the discriminant is expanded into monomial
/// coefficients.  Beyond this, coefficient magnitudes spread far enough
/// (they grow like 2^q) that expansion loses accuracy; evaluate the
/// discriminant through the matrix product instead.
pub const MAX_POLY_PERIOD: usize = 32;

/// One factor of the transfer product:
/// `[[ (E - b_cur)/a_cur, -a_prev/a_cur ], [ 1, 0 ]]`.
pub fn one_step(a_prev: f64, a_cur: f64, b_cur: f64, e: f64) -> Result<Mat2> {
    if !(a_cur > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "one_step requires a_cur > 0, got {a_cur}"
        )));
    }
    Ok(Mat2::new((e - b_cur) / a_cur, -a_prev / a_cur, 1.0, 0.0))
}

/// `n`-step transfer matrix of a finite prefix, newest step leftmost,
/// with the half-line boundary `a(0) = 1`.
///
/// Each factor has determinant `a(k-1)/a(k)`, so the product telescopes to
/// `det = 1 / a(n)`.
pub fn transfer_matrix(prefix: &FinitePrefix, e: f64) -> Result<Mat2> {
    if prefix.n == 0 {
        return Err(Error::InvalidArgument(
            "prefix must have at least one step".into(),
        ));
    }
    let mut phi = Mat2::IDENTITY;
    let mut a_prev = 1.0;
    for k in 0..prefix.n {
        let step = one_step(a_prev, prefix.a[k], prefix.b[k], e)?;
        phi = step.mul(&phi);
        a_prev = prefix.a[k];
    }
    Ok(phi)
}

/// One-period transfer matrix with the periodic wrap `a(0) = a(q)`.
/// Its determinant telescopes to exactly 1.
pub fn monodromy(spec: &OperatorSpec, e: f64) -> Mat2 {
    let q = spec.period;
    let mut phi = Mat2::IDENTITY;
    let mut a_prev = spec.a[q - 1];
    for k in 0..q {
        let a_cur = spec.a[k];
        let step = Mat2::new((e - spec.b[k]) / a_cur, -a_prev / a_cur, 1.0, 0.0);
        phi = step.mul(&phi);
        a_prev = a_cur;
    }
    phi
}

/// Discriminant `Delta(E)`: trace of the one-period monodromy matrix.
/// The spectrum of the periodic operator is exactly `{ |Delta| <= 2 }`.
pub fn discriminant_eval(spec: &OperatorSpec, e: f64) -> f64 {
    monodromy(spec, e).trace()
}

/// The discriminant as an explicit polynomial in `E` (degree `q`, leading
/// coefficient `1 / (a(1) ... a(q))`).
///
/// Built by running the same one-period product over 2x2 matrices of
/// polynomials.  Capped at period [`MAX_POLY_PERIOD`]; for larger periods
/// use [`discriminant_eval`], which needs no expansion.
pub fn discriminant_poly(spec: &OperatorSpec) -> Result<Polynomial> {
    let q = spec.period;
    if q > MAX_POLY_PERIOD {
        return Err(Error::InvalidArgument(format!(
            "discriminant_poly supports period <= {MAX_POLY_PERIOD} (got {q}); \
             use discriminant_eval, which works at any period"
        )));
    }

    // 2x2 matrix of polynomials, row-major, starting from the identity.
    let mut acc = [
        [Polynomial::constant(1.0), Polynomial::zero()],
        [Polynomial::zero(), Polynomial::constant(1.0)],
    ];
    let mut a_prev = spec.a[q - 1];
    for k in 0..q {
        let a_cur = spec.a[k];
        let step = [
            [
                Polynomial::new(vec![-spec.b[k] / a_cur, 1.0 / a_cur]),
                Polynomial::constant(-a_prev / a_cur),
            ],
            [Polynomial::constant(1.0), Polynomial::zero()],
        ];
        let mut next = [
            [Polynomial::zero(), Polynomial::zero()],
            [Polynomial::zero(), Polynomial::zero()],
        ];
        for (i, next_row) in next.iter_mut().enumerate() {
            for (j, slot) in next_row.iter_mut().enumerate() {
                *slot = step[i][0].mul(&acc[0][j]).add(&step[i][1].mul(&acc[1][j]));
            }
        }
        acc = next;
        a_prev = a_cur;
    }

    let delta = acc[0][0].add(&acc[1][1]);

    // Leading coefficient must be 1 / (a(1)...a(q)) to high relative
    // accuracy; a violation means the expansion lost conditioning.
    let expected = spec.a.iter().fold(1.0, |p, &x| p / x);
    let got = delta.leading();
    if delta.degree() != q || (got - expected).abs() > 1e-10 * expected.abs() {
        return Err(Error::Numerical(format!(
            "discriminant expansion lost accuracy: leading coefficient {got} \
             vs expected {expected} at degree {} (want {q})",
            delta.degree()
        )));
    }
    Ok(delta)
}

/// The `q x q` finite section with `-i a(q)` in the top-right corner and
/// `+i a(q)` in the bottom-left.
///
/// Its characteristic polynomial reproduces the discriminant:
/// `det(E - J_q) = (a(1)...a(q)) * Delta(E)`, identically in `E` — the
/// `±i` corners are exactly the phase that kills the constant Floquet
/// offset.  For `q = 1` and `q = 2` the corner entries land on positions
/// already occupied by the diagonal or the off-diagonal; they are *added*
/// there, which degenerates gracefully (for `q = 1` the two corners cancel
/// and the determinant is `E - b(1)`).
#[derive(Clone, Debug)]
pub struct CornerMatrix {
    n: usize,
    diag: Vec<f64>,
    off: Vec<f64>,
    corner: f64,
}

impl CornerMatrix {
    pub fn from_spec(spec: &OperatorSpec) -> CornerMatrix {
        let n = spec.period;
        CornerMatrix {
            n,
            diag: spec.b.clone(),
            off: spec.a[..n.saturating_sub(1)].to_vec(),
            corner: spec.a[n - 1],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `det(E - J_n)` by complex Gaussian elimination with partial
    /// pivoting.  The result is real up to rounding; an imaginary residue
    /// above `1e-9` relative is reported as an internal error rather than
    /// silently truncated.
    pub fn det(&self, e: f64) -> Result<f64> {
        let n = self.n;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for (j, row) in m.iter_mut().enumerate() {
            row[j] = Complex64::new(e - self.diag[j], 0.0);
        }
        for j in 0..n - 1 {
            m[j][j + 1] -= Complex64::new(self.off[j], 0.0);
            m[j + 1][j] -= Complex64::new(self.off[j], 0.0);
        }
        // E - J flips the corner signs: J has -i*corner top-right.
        m[0][n - 1] += Complex64::new(0.0, self.corner);
        m[n - 1][0] -= Complex64::new(0.0, self.corner);

        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r1, &r2| {
                    m[r1][col]
                        .norm_sqr()
                        .partial_cmp(&m[r2][col].norm_sqr())
                        .unwrap()
                })
                .unwrap();
            if m[pivot_row][col].norm_sqr() == 0.0 {
                return Ok(0.0);
            }
            if pivot_row != col {
                m.swap(pivot_row, col);
                det = -det;
            }
            let pivot = m[col][col];
            det *= pivot;
            for row in col + 1..n {
                let factor = m[row][col] / pivot;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                let (upper, lower) = m.split_at_mut(row);
                let src = &upper[col][col..];
                for (dst, s) in lower[0][col..].iter_mut().zip(src) {
                    *dst -= factor * s;
                }
            }
        }

        if det.im.abs() > 1e-9 * (1.0 + det.re.abs()) {
            return Err(Error::Numerical(format!(
                "corner determinant should be real; got imaginary residue {} \
                 against real part {}",
                det.im, det.re
            )));
        }
        Ok(det.re)
    }
}

/// `det(E - J_q)` for the corner-modified section of one period.
pub fn corner_det(spec: &OperatorSpec, e: f64) -> Result<f64> {
    CornerMatrix::from_spec(spec).det(e)
}

/// Finite-volume Lyapunov exponent estimate:
/// `ln(spectral norm of the n-step transfer matrix) / n`, half-line
/// convention.  The running product is rescaled whenever its entries
/// threaten overflow, with the discarded magnitude kept in log space, so
/// the estimate is reliable even deep in the exponentially growing regime.
pub fn lyapunov_estimate(prefix: &FinitePrefix, e: f64) -> Result<f64> {
    if prefix.n == 0 {
        return Err(Error::InvalidArgument(
            "prefix must have at least one step".into(),
        ));
    }
    let mut phi = Mat2::IDENTITY;
    let mut log_scale = 0.0;
    let mut a_prev = 1.0;
    for k in 0..prefix.n {
        let step = one_step(a_prev, prefix.a[k], prefix.b[k], e)?;
        phi = step.mul(&phi);
        a_prev = prefix.a[k];
        let f = phi.frobenius();
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::Numerical(format!(
                "transfer product degenerated at step {} (frobenius = {f})",
                k + 1
            )));
        }
        if !(1e-120..=1e120).contains(&f) {
            phi = phi.scale(1.0 / f);
            log_scale += f.ln();
        }
    }
    Ok((log_scale + phi.spectral_norm().ln()) / prefix.n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_constant, make_free, make_two_value, unroll, OperatorSpec};

    #[test]
    fn free_two_step_transfer_is_minus_identity() {
        // At E = 0 each free step is a quarter turn; two of them give -I.
        let prefix = unroll(&make_free(2).unwrap(), 2).unwrap();
        let phi = transfer_matrix(&prefix, 0.0).unwrap();
        let expect = Mat2::new(-1.0, 0.0, 0.0, -1.0);
        for i in 0..2 {
            for j in 0..2 {
                assert!((phi.m[i][j] - expect.m[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn transfer_determinant_telescopes() {
        let spec = OperatorSpec::new(vec![0.7, 1.3, 2.0], vec![0.1, -0.4, 0.9], "t").unwrap();
        for n in [1, 2, 3, 5, 8] {
            let prefix = unroll(&spec, n).unwrap();
            let phi = transfer_matrix(&prefix, 0.37).unwrap();
            let expect = 1.0 / prefix.a[n - 1];
            assert!(
                (phi.det() - expect).abs() < 1e-12 * expect.abs(),
                "n={n}: det {} vs 1/a(n) {}",
                phi.det(),
                expect
            );
        }
    }

    #[test]
    fn monodromy_has_unit_determinant() {
        let spec = OperatorSpec::new(vec![0.5, 1.7, 0.9], vec![0.3, -1.0, 2.0], "t").unwrap();
        for e in [-3.0, -0.5, 0.0, 1.2, 4.0] {
            let m = monodromy(&spec, e);
            assert!((m.det() - 1.0).abs() < 1e-12, "det {} at E={e}", m.det());
        }
    }

    #[test]
    fn one_step_rejects_nonpositive_off_diagonal() {
        assert!(one_step(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(one_step(1.0, -1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn two_value_discriminant_at_zero() {
        // Delta(0) = (0-0)(0-8)/1 - 1 - 1 = -2: the band edge at E = 0.
        let spec = make_two_value(8.0, 1, 1).unwrap().spec;
        assert!((discriminant_eval(&spec, 0.0) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn free_discriminant_is_doubled_chebyshev() {
        // For the free case Delta(E) = 2 T_q(E/2); spot-check q = 2, 3.
        let q2 = make_free(2).unwrap();
        let q3 = make_free(3).unwrap();
        for e in [-1.7, -0.3, 0.0, 0.9, 2.4] {
            assert!((discriminant_eval(&q2, e) - (e * e - 2.0)).abs() < 1e-13);
            assert!((discriminant_eval(&q3, e) - (e * e * e - 3.0 * e)).abs() < 1e-12);
        }
    }

    #[test]
    fn discriminant_poly_matches_closed_forms() {
        // constant(2, 0, 1): Delta(E) = E / 2.
        let c = make_constant(2.0, 0.0, 1).unwrap();
        let p = discriminant_poly(&c).unwrap();
        assert_eq!(p.degree(), 1);
        assert!((p.coeff(0)).abs() < 1e-15);
        assert!((p.coeff(1) - 0.5).abs() < 1e-15);

        // free q=3: E^3 - 3E.
        let p3 = discriminant_poly(&make_free(3).unwrap()).unwrap();
        assert_eq!(p3.degree(), 3);
        for (k, want) in [(0, 0.0), (1, -3.0), (2, 0.0), (3, 1.0)] {
            assert!((p3.coeff(k) - want).abs() < 1e-12, "coeff {k}");
        }
    }

    #[test]
    fn discriminant_poly_agrees_with_eval() {
        let spec = OperatorSpec::new(
            vec![0.6, 1.4, 0.8, 1.1, 1.9],
            vec![0.2, -0.7, 1.5, 0.0, -1.2],
            "t",
        )
        .unwrap();
        let p = discriminant_poly(&spec).unwrap();
        for k in 0..40 {
            let e = -5.0 + k as f64 * 0.25;
            let lhs = p.eval(e);
            let rhs = discriminant_eval(&spec, e);
            assert!(
                (lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs() + rhs.abs()),
                "E={e}: poly {lhs} vs product {rhs}"
            );
        }
    }

    #[test]
    fn discriminant_poly_rejects_large_periods() {
        let spec = make_free(MAX_POLY_PERIOD + 1).unwrap();
        let err = discriminant_poly(&spec).unwrap_err();
        assert!(err.to_string().contains("discriminant_eval"));
    }

    #[test]
    fn corner_det_reproduces_discriminant_times_product() {
        // det(E - J_q) = (a(1)...a(q)) * Delta(E), checked across periods
        // including the degenerate corner layouts q = 1 and q = 2.
        for spec in [
            make_constant(1.3, 0.4, 1).unwrap(),
            make_constant(1.0, 0.0, 2).unwrap(),
            OperatorSpec::new(vec![0.8, 1.2], vec![0.5, -0.5], "q2").unwrap(),
            OperatorSpec::new(vec![0.8, 1.2, 1.0, 0.6], vec![0.5, -0.5, 1.0, 0.0], "q4").unwrap(),
        ] {
            let prod: f64 = spec.a.iter().product();
            for e in [-2.3, -1.0, 0.0, 0.7, 1.9, 3.1] {
                let lhs = corner_det(&spec, e).unwrap();
                let rhs = prod * discriminant_eval(&spec, e);
                assert!(
                    (lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()),
                    "{}: E={e}: det {lhs} vs {rhs}",
                    spec.label
                );
            }
        }
    }

    #[test]
    fn corner_det_q1_is_linear() {
        let spec = make_constant(2.5, 1.5, 1).unwrap();
        assert!((corner_det(&spec, 4.0).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn free_constant_example_at_e_one() {
        // constant(1, 0, 2) at E = 1: det(E - J_2) = Delta(1) * A^2 = -1.
        let spec = make_constant(1.0, 0.0, 2).unwrap();
        assert!((corner_det(&spec, 1.0).unwrap() + 1.0).abs() < 1e-13);
    }

    #[test]
    fn lyapunov_free_case() {
        let free = make_free(1).unwrap();
        let prefix = unroll(&free, 1000).unwrap();
        // Inside the spectrum the product stays bounded: exponent ~ 0.
        let inside = lyapunov_estimate(&prefix, 0.0).unwrap();
        assert!(inside.abs() <= 0.01, "inside-spectrum estimate {inside}");
        // Outside, growth rate ln((|E| + sqrt(E^2-4))/2); at E = 3 that is
        // ln((3+sqrt(5))/2) = 0.9624236501192069.
        let outside = lyapunov_estimate(&prefix, 3.0).unwrap();
        assert!(
            (outside - 0.9624236501192069).abs() <= 1e-3,
            "outside-spectrum estimate {outside}"
        );
    }

    #[test]
    fn lyapunov_norm_never_below_determinant_floor() {
        // ||Phi_n|| >= sqrt(|det|) = 1/sqrt(a(n)) forces the estimate
        // above -ln(a(n)) / (2n).
        let spec = OperatorSpec::new(vec![1.9, 0.6], vec![0.0, 0.3], "t").unwrap();
        for n in [5, 64, 301] {
            let prefix = unroll(&spec, n).unwrap();
            let est = lyapunov_estimate(&prefix, 0.4).unwrap();
            let floor = -prefix.a[n - 1].ln() / (2.0 * n as f64);
            assert!(est >= floor - 1e-12, "n={n}: {est} < floor {floor}");
        }
    }

    #[test]
    fn lyapunov_survives_deep_exponential_growth() {
        // At E far outside the spectrum the bare product overflows after
        // ~400 steps; the rescaled estimate must stay finite and close to
        // the one-step growth rate ln((|E-b|+sqrt((E-b)^2-4))/2).
        let prefix = unroll(&make_free(1).unwrap(), 20_000).unwrap();
        let est = lyapunov_estimate(&prefix, 10.0).unwrap();
        let expect = ((10.0 + (100.0_f64 - 4.0).sqrt()) / 2.0).ln();
        assert!(est.is_finite());
        assert!((est - expect).abs() < 1e-4, "est {est} vs {expect}");
    }
}
