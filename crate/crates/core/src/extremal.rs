//! Chebyshev-extremal machinery: monic minimizers on intervals, the
//! nesting of discriminants under period repetition, and monic
//! interpolants through alternation-type node systems together with the
//! closed-form derivative of such an interpolant when one node moves.
//!
//! The discriminant of a period repeated `n` times is the degree-`n`
//! Chebyshev polynomial of the original discriminant
//! (`Delta_{nq} = 2 T_n(Delta_q / 2)`), which is why interval extremal
//! polynomials and band geometry keep meeting each other in this crate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::OperatorSpec;
use crate::poly::{chebyshev_t_poly, Polynomial};
use crate::transfer::{discriminant_poly, MAX_POLY_PERIOD};

/// Largest number of nodes a [`NodeSystem`] accepts.
pub const MAX_NODES: usize = 64;

/// `T_n(x)`: three-term recurrence on `[-1, 1]`, hyperbolic closed form
/// outside (the recurrence degrades there, the closed form does not).
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        let (mut prev, mut cur) = (1.0, x);
        if n == 0 {
            return prev;
        }
        for _ in 1..n {
            (prev, cur) = (cur, 2.0 * x * cur - prev);
        }
        cur
    } else {
        // T_n(x) = cosh(n acosh x) for x > 1, with parity for x < -1.
        let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        sign * (n as f64 * x.abs().acosh()).cosh()
    }
}

/// Monic degree-`n` minimizer of the sup norm on `[alpha, beta]`.
#[derive(Clone, Debug)]
pub struct ExtremalInterval {
    /// The minimizer `2 ((beta-alpha)/4)^n T_n((2E - alpha - beta)/(beta - alpha))`,
    /// with the leading coefficient pinned to exactly 1.
    pub poly: Polynomial,
    /// Its sup norm `2 ((beta-alpha)/4)^n` on the interval.
    pub sup_norm: f64,
    /// The `n + 1` alternation points, descending from `beta` to `alpha`;
    /// the polynomial takes `±sup_norm` there with alternating signs
    /// (starting with `+` at `beta`).
    pub alternation: Vec<f64>,
}

/// Build the monic extremal polynomial of degree `n` on `[alpha, beta]`.
pub fn monic_extremal_on_interval(alpha: f64, beta: f64, n: usize) -> Result<ExtremalInterval> {
    if !(alpha.is_finite() && beta.is_finite() && alpha < beta) {
        return Err(Error::InvalidArgument(format!(
            "need a finite interval with alpha < beta, got [{alpha}, {beta}]"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let width = beta - alpha;
    let sup_norm = 2.0 * (width / 4.0).powi(n as i32);
    if !sup_norm.is_finite() || sup_norm == 0.0 {
        return Err(Error::Numerical(format!(
            "sup norm 2 (width/4)^{n} is not representable for width {width}"
        )));
    }

    // T_n composed with the affine pullback of [alpha, beta] to [-1, 1].
    let pullback = Polynomial::new(vec![-(alpha + beta) / width, 2.0 / width]);
    let mut coeffs = chebyshev_t_poly(n)
        .compose(&pullback)
        .scale(sup_norm)
        .coeffs()
        .to_vec();
    // The leading coefficient is 1 by construction; pin it exactly.
    let last = coeffs.len() - 1;
    coeffs[last] = 1.0;
    let poly = Polynomial::new(coeffs);
    if poly.degree() != n {
        return Err(Error::Numerical(format!(
            "extremal construction lost degree: got {} of {n}",
            poly.degree()
        )));
    }

    let mid = 0.5 * (alpha + beta);
    let half = 0.5 * width;
    let alternation = (0..=n)
        .map(|k| mid + half * (k as f64 * std::f64::consts::PI / n as f64).cos())
        .collect();
    Ok(ExtremalInterval {
        poly,
        sup_norm,
        alternation,
    })
}

/// Outcome of checking `Delta_{nq} = 2 T_n(Delta_q / 2)`.
#[derive(Clone, Debug, Serialize)]
pub struct NestingReport {
    pub period: usize,
    /// How many copies of the period were concatenated.
    pub copies: usize,
    /// Degree of the repeated discriminant (`period * copies`).
    pub degree: usize,
    /// Worst coefficient discrepancy, relative to the largest coefficient.
    pub max_coeff_err: f64,
    /// Worst pointwise discrepancy on a 50-point energy grid, relative to
    /// `1 + |lhs| + |rhs|`.
    pub max_pointwise_err: f64,
    pub pass: bool,
}

/// Verify that repeating a period `copies` times composes the discriminant
/// with a Chebyshev polynomial, both coefficient-wise and pointwise.
pub fn verify_nesting(spec: &OperatorSpec, copies: usize) -> Result<NestingReport> {
    if copies == 0 {
        return Err(Error::InvalidArgument(
            "need at least one copy of the period".into(),
        ));
    }
    let degree = spec.period * copies;
    if degree > MAX_POLY_PERIOD {
        return Err(Error::InvalidArgument(format!(
            "repeated degree {degree} exceeds the expansion cap {MAX_POLY_PERIOD}"
        )));
    }

    let repeated_spec = spec.repeat(copies)?;
    let base = discriminant_poly(spec)?;
    let repeated = discriminant_poly(&repeated_spec)?;
    // 2 T_n(Delta / 2), as an expanded polynomial.
    let composed = chebyshev_t_poly(copies)
        .compose(&base.scale(0.5))
        .scale(2.0);

    let scale = repeated
        .coeffs()
        .iter()
        .chain(composed.coeffs())
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let mut max_coeff_err = 0.0f64;
    for k in 0..=degree {
        max_coeff_err = max_coeff_err.max((repeated.coeff(k) - composed.coeff(k)).abs() / scale);
    }

    // Pointwise across the Gershgorin hull of the operator, comparing the
    // two structured evaluations (transfer-product trace of the repeated
    // period vs. Chebyshev recurrence on the base trace).  Unlike the
    // expanded coefficient forms, both evaluate stably at any energy, so
    // this genuinely tests the identity rather than expansion rounding.
    let radius = spec
        .b
        .iter()
        .zip(spec.a.iter())
        .map(|(b, a)| b.abs() + 2.0 * a)
        .fold(0.0f64, f64::max)
        + 1.0;
    let mut max_pointwise_err = 0.0f64;
    for i in 0..50 {
        let e = -radius + 2.0 * radius * i as f64 / 49.0;
        let l = crate::transfer::discriminant_eval(&repeated_spec, e);
        let r = 2.0 * chebyshev_t(copies, crate::transfer::discriminant_eval(spec, e) / 2.0);
        max_pointwise_err = max_pointwise_err.max((l - r).abs() / (1.0 + l.abs() + r.abs()));
    }

    Ok(NestingReport {
        period: spec.period,
        copies,
        degree,
        max_coeff_err,
        max_pointwise_err,
        pass: max_coeff_err <= 1e-6 && max_pointwise_err <= 1e-9,
    })
}

/// Strictly decreasing interpolation nodes `E_1 > ... > E_m` together with
/// the values and derivatives of a weight function `s` at those nodes
/// (`s(E_i) != 0`).  The associated data are `y_i = (-1)^(i+1) / s(E_i)`
/// and the unique monic degree-`m` polynomial through `(E_i, y_i)`.
#[derive(Clone, Debug)]
pub struct NodeSystem {
    nodes: Vec<f64>,
    s_values: Vec<f64>,
    s_derivs: Vec<f64>,
    /// Barycentric weights `w_k = 1 / prod_{j != k} (E_k - E_j)`.
    weights: Vec<f64>,
}

impl NodeSystem {
    pub fn new(nodes: Vec<f64>, s_values: Vec<f64>, s_derivs: Vec<f64>) -> Result<Self> {
        let m = nodes.len();
        if m == 0 || m > MAX_NODES {
            return Err(Error::InvalidArgument(format!(
                "need between 1 and {MAX_NODES} nodes, got {m}"
            )));
        }
        if s_values.len() != m || s_derivs.len() != m {
            return Err(Error::InvalidArgument(format!(
                "node/value/derivative lengths disagree: {m}/{}/{}",
                s_values.len(),
                s_derivs.len()
            )));
        }
        for w in nodes.windows(2) {
            if !(w[0] > w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "nodes must be strictly decreasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for (i, &v) in s_values.iter().enumerate() {
            if !v.is_finite() || v == 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "s value at node {i} must be finite and nonzero, got {v}"
                )));
            }
        }
        if nodes.iter().chain(s_derivs.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "nodes and s derivatives must be finite".into(),
            ));
        }

        let mut weights = vec![0.0; m];
        for k in 0..m {
            let mut prod = 1.0;
            for j in 0..m {
                if j != k {
                    prod *= nodes[k] - nodes[j];
                }
            }
            if prod == 0.0 || !prod.is_finite() {
                return Err(Error::Numerical(format!(
                    "barycentric weight at node {k} is degenerate"
                )));
            }
            weights[k] = 1.0 / prod;
        }
        Ok(NodeSystem {
            nodes,
            s_values,
            s_derivs,
            weights,
        })
    }

    /// Nodes with the constant weight `s(E) = c`.
    pub fn with_constant_s(nodes: Vec<f64>, c: f64) -> Result<Self> {
        let m = nodes.len();
        NodeSystem::new(nodes, vec![c; m], vec![0.0; m])
    }

    /// Nodes with the affine weight `s(E) = E + c` (which must not vanish
    /// at any node).
    pub fn with_linear_s(nodes: Vec<f64>, c: f64) -> Result<Self> {
        let s_values: Vec<f64> = nodes.iter().map(|e| e + c).collect();
        let s_derivs = vec![1.0; nodes.len()];
        NodeSystem::new(nodes, s_values, s_derivs)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn s_values(&self) -> &[f64] {
        &self.s_values
    }

    pub fn s_derivs(&self) -> &[f64] {
        &self.s_derivs
    }

    /// `y_i = (-1)^(i+1) / s(E_i)`.
    fn y(&self, i: usize) -> f64 {
        let sign = if i.is_multiple_of(2) { -1.0 } else { 1.0 };
        sign / self.s_values[i]
    }

    /// Derivative of the monic interpolant at node `k`, via the Lagrange
    /// differentiation matrix plus the node polynomial's derivative `1/w_k`.
    fn interp_derivative_at_node(&self, k: usize) -> f64 {
        let m = self.len();
        let mut acc = 0.0;
        for i in 0..m {
            if i == k {
                continue;
            }
            let d_ki = (self.weights[i] / self.weights[k]) / (self.nodes[k] - self.nodes[i]);
            acc += d_ki * (self.y(i) - self.y(k));
        }
        acc + 1.0 / self.weights[k]
    }
}

/// Evaluate the monic degree-`m` interpolant through `(E_i, y_i)` at `e`,
/// using the first barycentric form plus the monic node polynomial:
/// `T(e) = W(e) * [ sum_i w_i y_i / (e - E_i) + 1 ]` with
/// `W(e) = prod_j (e - E_j)`.
pub fn interp_t(sys: &NodeSystem, e: f64) -> f64 {
    let m = sys.len();
    let mut node_poly = 1.0;
    let mut sum = 0.0;
    for i in 0..m {
        let diff = e - sys.nodes[i];
        if diff == 0.0 {
            // At a node the interpolant takes the node value exactly.
            return sys.y(i);
        }
        node_poly *= diff;
        sum += sys.weights[i] * sys.y(i) / diff;
    }
    node_poly * (sum + 1.0)
}

/// Closed-form partial derivative of the monic interpolant at a fixed
/// energy `e_star` as node `k` moves (with `s` staying a fixed function,
/// so the node's value `y_k = ±1/s(E_k)` moves along with it):
///
/// ```text
/// d T(e*) / d E_k = - (B_k(e*) / (B_k s_k)) * (T'(E_k) s_k + y_k s'_k)
/// ```
///
/// where `B_k(e) = prod_{j != k} (e - E_j)` and `B_k = B_k(E_k) = 1/w_k`.
pub fn node_motion_rhs(sys: &NodeSystem, k: usize, e_star: f64) -> Result<f64> {
    let m = sys.len();
    if k >= m {
        return Err(Error::InvalidArgument(format!(
            "node index {k} out of range for {m} nodes"
        )));
    }
    if !e_star.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "evaluation point must be finite, got {e_star}"
        )));
    }
    let mut b_k_at = 1.0;
    for j in 0..m {
        if j != k {
            b_k_at *= e_star - sys.nodes[j];
        }
    }
    let s_k = sys.s_values[k];
    let t_prime = sys.interp_derivative_at_node(k);
    Ok(-(b_k_at * sys.weights[k] / s_k) * (t_prime * s_k + sys.y(k) * sys.s_derivs[k]))
}
