//! Coefficient data: one period of a periodic Jacobi operator, finite
//! sections cut from it, and energy windows.
//!
//! Conventions used throughout the crate: sequences are 1-based in the
//! mathematics (`a(1..q)`, `b(1..q)`) and 0-based in the vectors; the
//! off-diagonal entries `a` are strictly positive; the half-line boundary
//! is `a(0) = 1` wherever a finite section is walked from its left end.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One period of Jacobi coefficients.
///
/// Serializes to `{"period": q, "a": [...], "b": [...], "label": "..."}`,
/// which is also the JSON shape the CLI accepts for custom models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub period: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub label: String,
}

impl OperatorSpec {
    /// Build and validate a period from raw coefficient vectors.
    pub fn new(a: Vec<f64>, b: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let spec = OperatorSpec {
            period: a.len(),
            a,
            b,
            label: label.into(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Check the structural invariants (used directly after `Deserialize`).
    pub fn validate(&self) -> Result<()> {
        if self.period == 0 {
            return Err(Error::InvalidModel("period must be at least 1".into()));
        }
        if self.a.len() != self.period || self.b.len() != self.period {
            return Err(Error::InvalidModel(format!(
                "period {} does not match coefficient lengths a={} b={}",
                self.period,
                self.a.len(),
                self.b.len()
            )));
        }
        for (j, &aj) in self.a.iter().enumerate() {
            if !(aj.is_finite() && aj > 0.0) {
                return Err(Error::InvalidModel(format!(
                    "a({}) = {} must be finite and positive",
                    j + 1,
                    aj
                )));
            }
        }
        for (j, &bj) in self.b.iter().enumerate() {
            if !bj.is_finite() {
                return Err(Error::InvalidModel(format!(
                    "b({}) = {} must be finite",
                    j + 1,
                    bj
                )));
            }
        }
        Ok(())
    }

    /// The same operator viewed with period `t * q`: coefficients unrolled
    /// `t` times.  Useful for comparing discriminants across period choices.
    pub fn repeat(&self, t: usize) -> Result<OperatorSpec> {
        if t == 0 {
            return Err(Error::InvalidArgument(
                "repeat count must be positive".into(),
            ));
        }
        let mut a = Vec::with_capacity(self.period * t);
        let mut b = Vec::with_capacity(self.period * t);
        for _ in 0..t {
            a.extend_from_slice(&self.a);
            b.extend_from_slice(&self.b);
        }
        Ok(OperatorSpec {
            period: self.period * t,
            a,
            b,
            label: format!("{} x{}", self.label, t),
        })
    }

    /// Geometric mean of the off-diagonal period, computed in log space.
    pub fn geometric_mean_a(&self) -> f64 {
        let log_sum: f64 = self.a.iter().map(|&x| x.ln()).sum();
        (log_sum / self.period as f64).exp()
    }
}

/// The first `n` coefficients of a (not necessarily periodic) operator.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePrefix {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Periodic extension of `spec` truncated to length `n`.
pub fn unroll(spec: &OperatorSpec, n: usize) -> Result<FinitePrefix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "prefix length must be positive".into(),
        ));
    }
    spec.validate()?;
    let a = (0..n).map(|j| spec.a[j % spec.period]).collect();
    let b = (0..n).map(|j| spec.b[j % spec.period]).collect();
    Ok(FinitePrefix { n, a, b })
}

/// Constant coefficients: `a = a0`, `b = b0`, declared period `q`.
pub fn make_constant(a0: f64, b0: f64, q: usize) -> Result<OperatorSpec> {
    if !(a0.is_finite() && a0 > 0.0) {
        return Err(Error::InvalidModel(format!(
            "constant off-diagonal a0 = {a0} must be finite and positive"
        )));
    }
    if !b0.is_finite() {
        return Err(Error::InvalidModel(format!(
            "constant diagonal b0 = {b0} must be finite"
        )));
    }
    OperatorSpec::new(
        vec![a0; q],
        vec![b0; q],
        format!("constant(a={a0}, b={b0}, q={q})"),
    )
}

/// The free case: `a = 1`, `b = 0`, declared period `q`.
pub fn make_free(q: usize) -> Result<OperatorSpec> {
    let mut spec = make_constant(1.0, 0.0, q)?;
    spec.label = format!("free(q={q})");
    Ok(spec)
}

/// Two-value diagonal model and its builder warning.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoValueSpec {
    pub spec: OperatorSpec,
    pub r: f64,
    pub m: usize,
    pub l: usize,
    /// Set when `r < 5`.  The model is still valid, but the clean
    /// containment of its spectrum in `(-2, 2) ∪ (R-2, R+2)` — and the
    /// closed-form window bound that goes with it — needs `r >= 5`.
    pub r_below_threshold: bool,
}

/// Period `m + l` with `a = 1` everywhere and diagonal
/// `(0, ..., 0, R, ..., R)` (`m` zeros then `l` copies of `R`).
pub fn make_two_value(r: f64, m: usize, l: usize) -> Result<TwoValueSpec> {
    if m == 0 || l == 0 {
        return Err(Error::InvalidModel(
            "two-value block lengths m and l must be positive".into(),
        ));
    }
    if !r.is_finite() {
        return Err(Error::InvalidModel(format!(
            "two-value level R = {r} must be finite"
        )));
    }
    let period = m + l;
    let mut b = vec![0.0; m];
    b.extend(std::iter::repeat_n(r, l));
    let spec = OperatorSpec {
        period,
        a: vec![1.0; period],
        b,
        label: format!("two-value(R={r}, m={m}, l={l})"),
    };
    spec.validate()?;
    Ok(TwoValueSpec {
        spec,
        r,
        m,
        l,
        r_below_threshold: r < 5.0,
    })
}

/// Open energy window `(left, right)`; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub left: f64,
    pub right: f64,
}

impl Window {
    /// The whole real line.
    pub const LINE: Window = Window {
        left: f64::NEG_INFINITY,
        right: f64::INFINITY,
    };

    pub fn new(left: f64, right: f64) -> Result<Self> {
        if left.is_nan() || right.is_nan() {
            return Err(Error::InvalidArgument(
                "window endpoints must not be NaN".into(),
            ));
        }
        if !(left < right) {
            return Err(Error::InvalidArgument(format!(
                "window must satisfy left < right, got ({left}, {right})"
            )));
        }
        Ok(Window { left, right })
    }

    pub fn contains(&self, e: f64) -> bool {
        e > self.left && e < self.right
    }
}

/// Windows serialize with `null` standing in for an infinite endpoint, so
/// half-line and whole-line windows survive a JSON round trip.
impl Serialize for Window {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            left: Option<f64>,
            right: Option<f64>,
        }
        let finite = |x: f64| x.is_finite().then_some(x);
        Repr {
            left: finite(self.left),
            right: finite(self.right),
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_builder_validates_positivity() {
        assert!(make_constant(1.0, 0.0, 3).is_ok());
        assert!(make_constant(0.0, 0.0, 3).is_err());
        assert!(make_constant(-2.0, 0.0, 3).is_err());
        assert!(make_constant(1.0, 0.0, 0).is_err());
    }

    #[test]
    fn two_value_layout_and_warning() {
        let tv = make_two_value(8.0, 2, 3).unwrap();
        assert_eq!(tv.spec.period, 5);
        assert_eq!(tv.spec.b, vec![0.0, 0.0, 8.0, 8.0, 8.0]);
        assert!(tv.spec.a.iter().all(|&x| x == 1.0));
        assert!(!tv.r_below_threshold);

        let warned = make_two_value(4.5, 1, 1).unwrap();
        assert!(warned.r_below_threshold);

        assert!(make_two_value(8.0, 0, 1).is_err());
    }

    #[test]
    fn unroll_is_periodic_extension() {
        let spec = make_two_value(8.0, 1, 1).unwrap().spec;
        let prefix = unroll(&spec, 7).unwrap();
        assert_eq!(prefix.b, vec![0.0, 8.0, 0.0, 8.0, 0.0, 8.0, 0.0]);
        assert_eq!(prefix.a.len(), 7);
        assert!(unroll(&spec, 0).is_err());
    }

    #[test]
    fn repeat_multiplies_the_period() {
        let spec = make_two_value(8.0, 1, 1).unwrap().spec;
        let rep = spec.repeat(3).unwrap();
        assert_eq!(rep.period, 6);
        assert_eq!(rep.b, vec![0.0, 8.0, 0.0, 8.0, 0.0, 8.0]);
        // Aligned windows of the unrolled prefix agree with the original period.
        let pre = unroll(&rep, 12).unwrap();
        for j in 0..12 {
            assert_eq!(pre.b[j], spec.b[j % 2]);
        }
    }

    #[test]
    fn geometric_mean_of_off_diagonals() {
        let spec = OperatorSpec::new(vec![0.5, 2.0], vec![0.0, 0.0], "test").unwrap();
        assert!((spec.geometric_mean_a() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn window_accepts_infinite_ends_and_rejects_degenerate() {
        let w = Window::new(f64::NEG_INFINITY, 2.0).unwrap();
        assert!(w.contains(-1e300) && !w.contains(2.0));
        assert!(Window::new(2.0, 2.0).is_err());
        assert!(Window::new(f64::NAN, 3.0).is_err());
        assert!(Window::LINE.contains(0.0));
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = make_two_value(8.0, 1, 2).unwrap().spec;
        let json = serde_json::to_string(&spec).unwrap();
        let back: OperatorSpec = serde_json::from_str(&json).unwrap();
        back.validate().unwrap();
        assert_eq!(back, spec);
        // Field order in the emitted JSON is the declaration order.
        assert!(json.starts_with("{\"period\":"));
    }
}
