//! The associated random neural network and its stationary solution.
//!
//! For an `n`-node network the model holds `2n` neurons: an X neuron per
//! node advocating "compromised" and a Y neuron advocating "safe". X
//! neurons excite each other and inhibit the Y layer, and vice versa. Only
//! the excitatory rates are stored; each inhibitory rate is the complement
//! to the fixed per-pair total `W`, so the pair (excitatory, inhibitory)
//! always sums to `W` and never needs a second matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Stationary probabilities are clamped into `[CLAMP_EPS, 1 - CLAMP_EPS]`.
///
/// The product form requires every probability strictly inside (0, 1), and
/// the decision ratio divides by both `q_y` and `1 - q_x`.
pub const CLAMP_EPS: f64 = 1e-6;

/// Default per-pair total spiking rate.
pub const DEFAULT_TOTAL_RATE: f64 = 1.0;

/// Default tolerance on both the max-absolute update and the equation
/// residual of the fixed-point iteration.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default iteration cap for the fixed-point solver.
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Default damping factor: `x <- (1 - damping) * x + damping * F(x)`.
pub const DEFAULT_DAMPING: f64 = 0.5;

/// The 2n-neuron network: size, per-pair total rate, and the two
/// excitatory weight matrices (X layer and Y layer).
///
/// Invariants enforced at construction: zero diagonals and every
/// off-diagonal entry in `[0, W]`, so all implied inhibitory rates are
/// non-negative. Values are immutable after construction; training builds
/// new models instead of mutating.
#[derive(Debug, Clone, PartialEq)]
pub struct ArnnModel {
    n: usize,
    total_rate: f64,
    wx_plus: DMatrix<f64>,
    wy_plus: DMatrix<f64>,
}

impl ArnnModel {
    /// Neutral initialization: every off-diagonal excitatory rate equals
    /// `0.5 * W`, so excitation and inhibition balance exactly.
    ///
    /// Under the matching neutral inputs (see
    /// [`ExternalInputs::neutral`]) the fixed point is exactly
    /// `q_x = q_y = 0.5` everywhere: total ignorance.
    pub fn neutral(n: usize, total_rate: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(n));
        }
        if !(total_rate > 0.0) || !total_rate.is_finite() {
            return Err(Error::InvalidParameter {
                name: "total_rate",
                value: total_rate,
            });
        }
        let half = 0.5 * total_rate;
        let w = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { half });
        Ok(Self {
            n,
            total_rate,
            wx_plus: w.clone(),
            wy_plus: w,
        })
    }

    /// Builds a model from explicit weight matrices, validating the
    /// zero-diagonal and `[0, W]` box invariants.
    pub fn from_weights(
        total_rate: f64,
        wx_plus: DMatrix<f64>,
        wy_plus: DMatrix<f64>,
    ) -> Result<Self> {
        if !(total_rate > 0.0) || !total_rate.is_finite() {
            return Err(Error::InvalidParameter {
                name: "total_rate",
                value: total_rate,
            });
        }
        let n = wx_plus.nrows();
        if n < 2 {
            return Err(Error::InvalidSize(n));
        }
        if wx_plus.ncols() != n || wy_plus.nrows() != n || wy_plus.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "weight matrices must both be {n}x{n}"
            )));
        }
        for (name, m) in [("wx_plus", &wx_plus), ("wy_plus", &wy_plus)] {
            for i in 0..n {
                for j in 0..n {
                    let v = m[(i, j)];
                    let ok = if i == j {
                        v == 0.0
                    } else {
                        v.is_finite() && (0.0..=total_rate).contains(&v)
                    };
                    if !ok {
                        return Err(Error::InvalidParameter { name, value: v });
                    }
                }
            }
        }
        Ok(Self {
            n,
            total_rate,
            wx_plus,
            wy_plus,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The constant per-pair total rate `W`.
    pub fn total_rate(&self) -> f64 {
        self.total_rate
    }

    /// Excitatory rates within the X layer (`wx_plus[(i, j)]` is X_i -> X_j).
    pub fn wx_plus(&self) -> &DMatrix<f64> {
        &self.wx_plus
    }

    /// Excitatory rates within the Y layer.
    pub fn wy_plus(&self) -> &DMatrix<f64> {
        &self.wy_plus
    }

    /// Implied inhibitory rate X_i -| Y_j, i.e. `W - wx_plus[(i, j)]` off the
    /// diagonal and zero on it. Derived, never stored.
    pub fn wx_minus(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.total_rate - self.wx_plus[(i, j)]
        }
    }

    /// Implied inhibitory rate Y_i -| X_j.
    pub fn wy_minus(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.total_rate - self.wy_plus[(i, j)]
        }
    }
}

/// External excitatory inputs: `lambda_x[i]` drives X_i (local evidence the
/// node is compromised) and `lambda_y[i]` drives Y_i (evidence it is safe).
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalInputs {
    lambda_x: DVector<f64>,
    lambda_y: DVector<f64>,
}

impl ExternalInputs {
    pub fn new(lambda_x: DVector<f64>, lambda_y: DVector<f64>) -> Result<Self> {
        if lambda_x.len() != lambda_y.len() {
            return Err(Error::ShapeMismatch(format!(
                "input vectors have lengths {} and {}",
                lambda_x.len(),
                lambda_y.len()
            )));
        }
        for v in lambda_x.iter().chain(lambda_y.iter()) {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "external input",
                    value: *v,
                });
            }
        }
        Ok(Self { lambda_x, lambda_y })
    }

    /// Inference-time inputs: `lambda_x = A`, `lambda_y = 1 - A` for a
    /// vector of per-node attack ratios in `[0, 1]`.
    pub fn from_attack_ratios(attack_ratios: &[f64]) -> Result<Self> {
        for &a in attack_ratios {
            if !a.is_finite() || !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidParameter {
                    name: "attack_ratio",
                    value: a,
                });
            }
        }
        let lambda_x = DVector::from_row_slice(attack_ratios);
        let lambda_y = lambda_x.map(|a| 1.0 - a);
        Ok(Self { lambda_x, lambda_y })
    }

    /// The calibration inputs `0.75 * W * (n - 1)` on both layers; together
    /// with [`ArnnModel::neutral`] these pin the fixed point at 0.5.
    pub fn neutral(n: usize, total_rate: f64) -> Self {
        let v = DVector::from_element(n, 0.75 * total_rate * (n as f64 - 1.0));
        Self {
            lambda_x: v.clone(),
            lambda_y: v,
        }
    }

    pub fn len(&self) -> usize {
        self.lambda_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda_x.len() == 0
    }

    pub fn lambda_x(&self) -> &DVector<f64> {
        &self.lambda_x
    }

    pub fn lambda_y(&self) -> &DVector<f64> {
        &self.lambda_y
    }
}

/// Stationary excitation probabilities: `q_x[i]` for X_i ("compromised"
/// advocate) and `q_y[i]` for Y_i ("safe" advocate), clamped inside
/// `[CLAMP_EPS, 1 - CLAMP_EPS]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateProbabilities {
    q_x: DVector<f64>,
    q_y: DVector<f64>,
}

impl StateProbabilities {
    /// Wraps raw probabilities, clamping them into the valid band.
    pub fn from_raw(q_x: DVector<f64>, q_y: DVector<f64>) -> Result<Self> {
        if q_x.len() != q_y.len() {
            return Err(Error::ShapeMismatch(format!(
                "state vectors have lengths {} and {}",
                q_x.len(),
                q_y.len()
            )));
        }
        Ok(Self {
            q_x: q_x.map(clamp_unit),
            q_y: q_y.map(clamp_unit),
        })
    }

    pub fn len(&self) -> usize {
        self.q_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q_x.len() == 0
    }

    /// Excitation probabilities of the X layer (the paper's `Q`).
    pub fn q_x(&self) -> &DVector<f64> {
        &self.q_x
    }

    /// Excitation probabilities of the Y layer (the paper's `q`).
    pub fn q_y(&self) -> &DVector<f64> {
        &self.q_y
    }

    /// Per-node likelihood ratio `L_i = q_x (1 - q_y) / (q_y (1 - q_x))`.
    ///
    /// `L_i > 1` exactly when the compromised advocate is more excited than
    /// the safe one; clamping keeps the ratio finite and positive.
    pub fn decision_ratio(&self) -> DVector<f64> {
        DVector::from_fn(self.q_x.len(), |i, _| {
            let qx = self.q_x[i];
            let qy = self.q_y[i];
            qx * (1.0 - qy) / (qy * (1.0 - qx))
        })
    }

    /// Thresholds the decision ratio: node `i` is flagged compromised when
    /// `L_i > gamma` (strict).
    pub fn classify(&self, gamma: f64) -> Result<DecisionVector> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
            });
        }
        let ratios = self.decision_ratio();
        let flags = ratios.iter().map(|&l| l > gamma).collect();
        Ok(DecisionVector { ratios, flags })
    }
}

/// Output of a classification pass: the raw ratios and the thresholded
/// binary decisions, kept together so `flags[i] == (ratios[i] > gamma)`
/// stays true by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector {
    ratios: DVector<f64>,
    flags: Vec<bool>,
}

impl DecisionVector {
    pub fn ratios(&self) -> &DVector<f64> {
        &self.ratios
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }
}

/// Knobs of the damped fixed-point iteration.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointOptions {
    /// Fraction of the raw update applied each step.
    pub damping: f64,
    /// Convergence tolerance on both the max-absolute update and the
    /// max-absolute equation residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            damping: DEFAULT_DAMPING,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

fn clamp_unit(v: f64) -> f64 {
    v.clamp(CLAMP_EPS, 1.0 - CLAMP_EPS)
}

/// One application of the stationary equations.
///
/// Writes the raw (unclamped) right-hand sides for the current state into
/// `out_x` / `out_y`:
///
/// ```text
/// q_x[i] <- (lambda_x[i] + sum_{j!=i} wx[j,i] q_x[j])
///           / (lambda_y[i] + (n-1) W + sum_{j!=i} (W - wy[j,i]) q_y[j])
/// q_y[i] <- (lambda_y[i] + sum_{j!=i} wy[j,i] q_y[j])
///           / (lambda_x[i] + (n-1) W + sum_{j!=i} (W - wx[j,i]) q_x[j])
/// ```
///
/// Denominators are bounded below by `(n-1) W > 0`, so the map is always
/// well defined.
fn apply_map(
    model: &ArnnModel,
    inputs: &ExternalInputs,
    q_x: &DVector<f64>,
    q_y: &DVector<f64>,
    out_x: &mut DVector<f64>,
    out_y: &mut DVector<f64>,
) {
    let n = model.n;
    let w = model.total_rate;
    let base = (n as f64 - 1.0) * w;

    // Transposed products give the "incoming" sums sum_j m[j, i] v[j]; they
    // appear in both a numerator and the opposite denominator.
    let tx = model.wx_plus.tr_mul(q_x);
    let ty = model.wy_plus.tr_mul(q_y);
    let sum_x: f64 = q_x.sum();
    let sum_y: f64 = q_y.sum();

    for i in 0..n {
        let num_x = inputs.lambda_x[i] + tx[i];
        let den_x = inputs.lambda_y[i] + base + w * (sum_y - q_y[i]) - ty[i];
        out_x[i] = num_x / den_x;

        let num_y = inputs.lambda_y[i] + ty[i];
        let den_y = inputs.lambda_x[i] + base + w * (sum_x - q_x[i]) - tx[i];
        out_y[i] = num_y / den_y;
    }
}

/// Max-absolute residual of the stationary equations at a (clamped) state.
pub fn fixed_point_residual(
    model: &ArnnModel,
    inputs: &ExternalInputs,
    states: &StateProbabilities,
) -> f64 {
    let n = model.n;
    let mut fx = DVector::zeros(n);
    let mut fy = DVector::zeros(n);
    apply_map(model, inputs, &states.q_x, &states.q_y, &mut fx, &mut fy);
    let mut r: f64 = 0.0;
    for i in 0..n {
        r = r.max((fx[i] - states.q_x[i]).abs());
        r = r.max((fy[i] - states.q_y[i]).abs());
    }
    r
}

/// Solves the coupled stationary equations with the default options.
pub fn solve_fixed_point(model: &ArnnModel, inputs: &ExternalInputs) -> Result<StateProbabilities> {
    solve_fixed_point_with(model, inputs, &FixedPointOptions::default())
}

/// Damped Picard iteration from the ignorance state `q_x = q_y = 0.5`.
///
/// Each step applies the raw equations, damps, and clamps into
/// `[CLAMP_EPS, 1 - CLAMP_EPS]`. Convergence requires both the step update
/// and the raw equation residual to drop below `opts.tol`; a state pinned
/// at the clamp boundary therefore reports [`Error::NoConvergence`] instead
/// of silently returning a non-solution.
pub fn solve_fixed_point_with(
    model: &ArnnModel,
    inputs: &ExternalInputs,
    opts: &FixedPointOptions,
) -> Result<StateProbabilities> {
    let n = model.n;
    if inputs.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "inputs have length {}, model has n = {}",
            inputs.len(),
            n
        )));
    }
    let alpha = opts.damping;
    let mut q_x = DVector::from_element(n, 0.5);
    let mut q_y = DVector::from_element(n, 0.5);
    let mut fx = DVector::zeros(n);
    let mut fy = DVector::zeros(n);

    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        apply_map(model, inputs, &q_x, &q_y, &mut fx, &mut fy);

        residual = 0.0;
        let mut update: f64 = 0.0;
        for i in 0..n {
            residual = residual.max((fx[i] - q_x[i]).abs());
            let nx = clamp_unit((1.0 - alpha) * q_x[i] + alpha * fx[i]);
            update = update.max((nx - q_x[i]).abs());
            q_x[i] = nx;

            residual = residual.max((fy[i] - q_y[i]).abs());
            let ny = clamp_unit((1.0 - alpha) * q_y[i] + alpha * fy[i]);
            update = update.max((ny - q_y[i]).abs());
            q_y[i] = ny;
        }

        if update < opts.tol && residual < opts.tol {
            // The update criterion alone leaves the residual at roughly
            // update / damping; confirm the equations hold at the returned
            // iterate before declaring success.
            apply_map(model, inputs, &q_x, &q_y, &mut fx, &mut fy);
            let mut final_res: f64 = 0.0;
            for i in 0..n {
                final_res = final_res.max((fx[i] - q_x[i]).abs());
                final_res = final_res.max((fy[i] - q_y[i]).abs());
            }
            if final_res < opts.tol {
                return Ok(StateProbabilities { q_x, q_y });
            }
            residual = final_res;
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// Joint stationary probability of the internal-state vector pair
/// `(H, h)` under the product form:
/// `prod_i q_x^H_i (1 - q_x) * q_y^h_i (1 - q_y)`.
///
/// Diagnostic only; decisions use [`StateProbabilities::decision_ratio`].
pub fn stationary_probability(states: &StateProbabilities, h_x: &[u32], h_y: &[u32]) -> f64 {
    assert_eq!(h_x.len(), states.len(), "h_x length mismatch");
    assert_eq!(h_y.len(), states.len(), "h_y length mismatch");
    let mut p = 1.0;
    for i in 0..states.len() {
        let qx = states.q_x[i];
        let qy = states.q_y[i];
        p *= qx.powi(h_x[i] as i32) * (1.0 - qx);
        p *= qy.powi(h_y[i] as i32) * (1.0 - qy);
    }
    p
}
