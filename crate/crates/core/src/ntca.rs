//! The nonlinear-transformation surrogate: a bounded degree-d suppression
//! polynomial applied elementwise to an amplitude vector, with the
//! post-selection success weight and the per-iteration query-cost formula.
//!
//! The transform itself is simulated at the amplitude level; its quantum
//! price is charged analytically through [`query_cost`] with the O-constant
//! fixed to 1.
//!
//! # Construction
//!
//! [`build_suppressor`] fits the target
//!
//! ```text
//! g(x) = (1/4) * x * sigma((|x| - theta) / w),   sigma(t) = (1 + tanh(4t)) / 2
//! ```
//!
//! in the form `Q(x) = (x^2 - theta^2) * R(x)` with `R` an odd Chebyshev
//! series, by weighted least squares on a Chebyshev grid (the region below
//! the threshold is weighted heavily so sub-threshold leakage stays near the
//! numerical floor). The factor pins exact zeros at `0` and at `±theta`, so a
//! reference amplitude equal to the threshold is suppressed exactly. The
//! result is rescaled so that `|Q| <= 1/4` on a dense certification grid and
//! stored as plain Chebyshev coefficients of degree `d`.

use crate::error::{Error, Result};
use crate::oracle::AmplitudeVector;
use nalgebra::{DMatrix, DVector};

/// Cap on |Q| over [-1, 1].
pub const SUPPRESSION_BOUND: f64 = 0.25;
/// Points in the dense certification grid over [-1, 1].
pub const CERT_GRID_POINTS: usize = 10_001;
/// Default relative success-weight floor below which a transform reports
/// convergence (relative to the total squared norm of the input vector).
pub const DEFAULT_SUCCESS_FLOOR: f64 = 1e-12;

/// Sharpness of the tanh step in the fit target.
const STEP_SHARPNESS: f64 = 4.0;
/// Least-squares weight of the sub-threshold region.
const LOW_REGION_WEIGHT: f64 = 1e3;
/// Build fails when sub-threshold leakage exceeds this.
const DEEP_TOLERANCE: f64 = 1e-2;
/// Build fails when the pass band collapses entirely.
const MIN_GAMMA: f64 = 1e-3;

/// Basis in which [`SuppressionPolynomial::coefficients`] are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientBasis {
    Chebyshev,
    Monomial,
}

/// A degree-d polynomial bounded by 1/4 on [-1, 1], near zero below the
/// threshold magnitude and monotone in |x| above it.
#[derive(Debug, Clone)]
pub struct SuppressionPolynomial {
    /// Nominal degree d (the cost formula uses this value).
    pub degree: usize,
    /// Reference amplitude magnitude theta.
    pub threshold: f64,
    /// Transition softness w.
    pub softness: f64,
    /// d+1 coefficients; even-degree entries are exactly zero (Q is odd).
    pub coefficients: Vec<f64>,
    pub basis: CoefficientBasis,
    /// Certified max of |Q| over the dense grid; gamma <= 1/4.
    pub gamma: f64,
    /// Max |Q - g| over the certification grid (dominated by the transition
    /// band, where the finite degree smears the step).
    pub max_residual: f64,
    /// Max |Q| over |x| <= theta - 2w (zero when that region is empty).
    pub deep_residual: f64,
}

impl SuppressionPolynomial {
    /// Evaluate via Clenshaw recursion on the stored Chebyshev coefficients.
    pub fn evaluate(&self, x: f64) -> f64 {
        clenshaw(&self.coefficients, x)
    }

    /// The fit target the polynomial approximates.
    pub fn target(&self, x: f64) -> f64 {
        suppression_target(x, self.threshold, self.softness)
    }
}

/// Clenshaw evaluation of a Chebyshev series.
pub(crate) fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let next = c + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = next;
    }
    coeffs[0] + x * b1 - b2
}

/// The smooth step used in the fit target: 0 well below the transition,
/// 1 well above, 1/2 at the threshold itself.
fn smooth_step(t: f64) -> f64 {
    0.5 * (1.0 + (STEP_SHARPNESS * t).tanh())
}

fn suppression_target(x: f64, theta: f64, w: f64) -> f64 {
    SUPPRESSION_BOUND * x * smooth_step((x.abs() - theta) / w)
}

/// Fit a suppression polynomial for reference magnitude `theta`, nominal
/// degree `d` and softness `w`.
///
/// Supported ranges (comfortably feasible fits): `theta` in [0.02, 0.98],
/// `d` in [8, 128], `w` in [0.005, 0.25]. Outside them the fit may degrade
/// until the quality checks reject it.
pub fn build_suppressor(theta: f64, d: usize, w: f64) -> Result<SuppressionPolynomial> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidSpec(format!(
            "suppressor threshold must be in (0, 1], got {theta}"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidSpec(format!(
            "suppressor degree must be >= 2, got {d}"
        )));
    }
    if !(w > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "suppressor softness must be > 0, got {w}"
        )));
    }

    // Odd Chebyshev degrees of the cofactor R; (x^2 - theta^2) adds 2.
    let r_degrees: Vec<usize> = (1..=d.saturating_sub(2)).step_by(2).collect();
    // Degenerate low-degree fallback: plain odd fit without the root factor.
    let factored = !r_degrees.is_empty();
    let basis_degrees: Vec<usize> = if factored {
        r_degrees
    } else {
        vec![1]
    };
    let max_deg = *basis_degrees.last().unwrap();

    let n_nodes = (8 * (d + 1)).max(1024);
    let mut rows = Vec::with_capacity(n_nodes);
    for i in 0..n_nodes {
        let x = (std::f64::consts::PI * (i as f64 + 0.5) / n_nodes as f64).cos();
        rows.push(x);
    }

    let n_basis = basis_degrees.len();
    let mut a = DMatrix::zeros(n_nodes, n_basis);
    let mut b = DVector::zeros(n_nodes);
    let mut t_vals = vec![0.0f64; max_deg + 1];
    for (i, &x) in rows.iter().enumerate() {
        chebyshev_values(x, &mut t_vals);
        let factor = if factored { x * x - theta * theta } else { 1.0 };
        let weight = if x.abs() <= theta - 0.5 * w {
            LOW_REGION_WEIGHT
        } else {
            1.0
        };
        for (j, &deg) in basis_degrees.iter().enumerate() {
            a[(i, j)] = weight * factor * t_vals[deg];
        }
        b[i] = weight * suppression_target(x, theta, w);
    }

    let svd = a.svd(true, true);
    let sol = svd
        .solve(&b, 1e-13)
        .map_err(|e| Error::InvalidSpec(format!("suppressor least-squares solve failed: {e}")))?;
    let r_coeffs: Vec<f64> = sol.iter().copied().collect();

    let eval_fit = |x: f64, t_buf: &mut [f64]| -> f64 {
        chebyshev_values(x, t_buf);
        let factor = if factored { x * x - theta * theta } else { 1.0 };
        let mut r = 0.0;
        for (j, &deg) in basis_degrees.iter().enumerate() {
            r += r_coeffs[j] * t_buf[deg];
        }
        factor * r
    };

    // Certify on the dense grid and rescale into the bound if needed.
    let mut t_buf = vec![0.0f64; max_deg + 1];
    let mut grid_max = 0.0f64;
    for i in 0..CERT_GRID_POINTS {
        let x = -1.0 + 2.0 * i as f64 / (CERT_GRID_POINTS - 1) as f64;
        grid_max = grid_max.max(eval_fit(x, &mut t_buf).abs());
    }
    let scale = if grid_max > SUPPRESSION_BOUND {
        SUPPRESSION_BOUND / grid_max
    } else {
        1.0
    };

    // Exact conversion to plain Chebyshev coefficients of degree d: discrete
    // projection at d+1 Chebyshev nodes is exact for polynomials of degree
    // <= d. Even-degree entries are mathematically zero; they are zeroed
    // explicitly so Q is exactly odd.
    let n_proj = d + 1;
    let mut samples = vec![0.0f64; n_proj];
    for (i, s) in samples.iter_mut().enumerate() {
        let x = (std::f64::consts::PI * (i as f64 + 0.5) / n_proj as f64).cos();
        *s = scale * eval_fit(x, &mut t_buf);
    }
    let mut coefficients = vec![0.0f64; d + 1];
    for (j, c) in coefficients.iter_mut().enumerate() {
        if j % 2 == 0 {
            continue; // odd polynomial
        }
        let mut acc = 0.0;
        for (i, &s) in samples.iter().enumerate() {
            let node_angle = std::f64::consts::PI * (i as f64 + 0.5) / n_proj as f64;
            acc += s * (j as f64 * node_angle).cos();
        }
        *c = 2.0 * acc / n_proj as f64;
    }

    // Final certification pass through the delivered evaluation path.
    let mut gamma = 0.0f64;
    let mut max_residual = 0.0f64;
    let mut deep_residual = 0.0f64;
    let deep_edge = theta - 2.0 * w;
    for i in 0..CERT_GRID_POINTS {
        let x = -1.0 + 2.0 * i as f64 / (CERT_GRID_POINTS - 1) as f64;
        let q = clenshaw(&coefficients, x);
        gamma = gamma.max(q.abs());
        max_residual = max_residual.max((q - suppression_target(x, theta, w)).abs());
        if deep_edge > 0.0 && x.abs() <= deep_edge {
            deep_residual = deep_residual.max(q.abs());
        }
    }

    if deep_residual > DEEP_TOLERANCE || gamma < MIN_GAMMA {
        return Err(Error::FitQuality {
            deep_residual,
            max_residual,
            tolerance: DEEP_TOLERANCE,
        });
    }

    Ok(SuppressionPolynomial {
        degree: d,
        threshold: theta,
        softness: w,
        coefficients,
        basis: CoefficientBasis::Chebyshev,
        gamma,
        max_residual,
        deep_residual,
    })
}

/// T_0(x) .. T_{len-1}(x) into `out`.
fn chebyshev_values(x: f64, out: &mut [f64]) {
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for j in 2..out.len() {
        out[j] = 2.0 * x * out[j - 1] - out[j - 2];
    }
}

/// Result of applying the suppressor to an amplitude vector.
#[derive(Debug, Clone)]
pub struct TransformResult {
    /// Q(a_j) for every entry.
    pub transformed: Vec<f64>,
    /// Sum of squared transformed amplitudes (post-selection weight).
    pub success_weight: f64,
    /// transformed^2 normalized to a distribution.
    pub resample_distribution: Vec<f64>,
}

/// Outcome of a transform: either a live resampling distribution or the
/// convergence signal (no amplitude exceeds the reference, the caller treats
/// the current reference as maximal).
#[derive(Debug, Clone)]
pub enum TransformOutcome {
    Active(TransformResult),
    Converged { success_weight: f64 },
}

/// Apply the polynomial elementwise. `success_floor` is relative to the total
/// squared norm of `av` (see [`DEFAULT_SUCCESS_FLOOR`]).
pub fn apply_transform(
    av: &AmplitudeVector,
    q: &SuppressionPolynomial,
    success_floor: f64,
) -> Result<TransformOutcome> {
    if av.is_empty() {
        return Err(Error::EmptyData("amplitude vector"));
    }
    let transformed: Vec<f64> = av.amps.iter().map(|&a| q.evaluate(a)).collect();
    let success_weight: f64 = transformed.iter().map(|t| t * t).sum();
    let floor = success_floor * av.total_sq_norm();
    if success_weight < floor || success_weight == 0.0 {
        return Ok(TransformOutcome::Converged { success_weight });
    }
    let resample_distribution = transformed
        .iter()
        .map(|t| t * t / success_weight)
        .collect();
    Ok(TransformOutcome::Active(TransformResult {
        transformed,
        success_weight,
        resample_distribution,
    }))
}

/// Per-iteration oracle query cost.
#[derive(Debug, Clone, Copy)]
pub struct QueryCost {
    pub per_iteration: f64,
    pub degree: usize,
    pub gamma: f64,
    pub m_qubits: usize,
    pub success_weight: f64,
}

/// The per-iteration cost `d * gamma * sqrt(2^M / success_weight)`, with the
/// O-constant taken as 1. `M` is the joint register width `n + 2k`.
pub fn query_cost(d: usize, gamma: f64, m_qubits: usize, success_weight: f64) -> Result<QueryCost> {
    if success_weight <= 0.0 {
        return Err(Error::Domain(format!(
            "query cost needs success_weight > 0, got {success_weight}"
        )));
    }
    let per_iteration =
        d as f64 * gamma * ((m_qubits as f64).exp2() / success_weight).sqrt();
    Ok(QueryCost {
        per_iteration,
        degree: d,
        gamma,
        m_qubits,
        success_weight,
    })
}
