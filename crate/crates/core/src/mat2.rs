//! 2x2 real matrices — just enough linear algebra for transfer-matrix work.

/// Row-major 2x2 real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    pub fn new(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Mat2 {
            m: [[m00, m01], [m10, m11]],
        }
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] + rhs.m[0][0],
            self.m[0][1] + rhs.m[0][1],
            self.m[1][0] + rhs.m[1][0],
            self.m[1][1] + rhs.m[1][1],
        )
    }

    /// `self * rhs` (matrix product, self acting from the left).
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.m;
        let b = &rhs.m;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2::new(
            self.m[0][0] * s,
            self.m[0][1] * s,
            self.m[1][0] * s,
            self.m[1][1] * s,
        )
    }

    pub fn frobenius(&self) -> f64 {
        let s: f64 = self.m.iter().flatten().map(|x| x * x).sum();
        s.sqrt()
    }

    /// Largest singular value, in closed form.
    ///
    /// For a 2x2 matrix the squared singular values solve
    /// `sigma^4 - s*sigma^2 + det^2 = 0` with `s = ||A||_F^2`, so
    /// `sigma_max^2 = (s + sqrt(s^2 - 4 det^2)) / 2`.  The discriminant is
    /// `(sigma_max^2 - sigma_min^2)^2 >= 0`; rounding can push it barely
    /// negative, hence the clamp.
    pub fn spectral_norm(&self) -> f64 {
        let s: f64 = self.m.iter().flatten().map(|x| x * x).sum();
        let d = self.det();
        let disc = (s * s - 4.0 * d * d).max(0.0);
        (0.5 * (s + disc.sqrt())).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_det_small_example() {
        let rot = Mat2::new(0.0, -1.0, 1.0, 0.0);
        let sq = rot.mul(&rot);
        assert_eq!(sq, Mat2::new(-1.0, 0.0, 0.0, -1.0));
        assert_eq!(rot.det(), 1.0);
        assert_eq!(sq.trace(), -2.0);
    }

    #[test]
    fn spectral_norm_closed_form() {
        // Rotations have norm 1.
        assert!((Mat2::new(0.0, -1.0, 1.0, 0.0).spectral_norm() - 1.0).abs() < 1e-15);
        // Diagonal: norm is the largest |entry|.
        assert!((Mat2::new(2.0, 0.0, 0.0, 0.5).spectral_norm() - 2.0).abs() < 1e-15);
        // Unit shear: norm is the golden ratio (sigma^2 solves x^2-3x+1=0).
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((Mat2::new(1.0, 1.0, 0.0, 1.0).spectral_norm() - phi).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_dominates_trace() {
        // |tr A| <= 2 * sigma_max, with equality direction checked elsewhere.
        let a = Mat2::new(3.0, -1.0, 1.0, 0.0);
        assert!(a.trace().abs() <= 2.0 * a.spectral_norm() + 1e-15);
    }
}
