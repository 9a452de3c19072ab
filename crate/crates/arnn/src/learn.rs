//! Exact gradient learning for the ARNN.
//!
//! The cost on a slot is the squared mismatch between the stationary
//! probabilities and the compromise targets:
//!
//! ```text
//! E = 1/2 sum_l sum_i [ (q_x[i] - K[i])^2 + (q_y[i] - (1 - K[i]))^2 ]
//! ```
//!
//! with inputs `lambda_x = A`, `lambda_y = 1 - A`. Differentiating the
//! stationary equations implicitly gives, for every weight entry, a pair of
//! coupled linear systems over the state derivatives. Eliminating one layer
//! turns each derivative row into a unit vector hitting two precomputed
//! inverses, and contracting with the residuals collapses the full gradient
//! into two outer products. The expensive pieces (four dense inverses) are
//! independent of which weight is perturbed, so one sample costs O(n^3)
//! regardless of the n^2 weights.
//!
//! All row/column conventions follow the scalar recurrences; the
//! finite-difference suite in `tests/` pins them down.

use nalgebra::{DMatrix, DVector, RowDVector};

use crate::error::{Error, Result};
use crate::model::{
    solve_fixed_point_with, ArnnModel, ExternalInputs, FixedPointOptions, StateProbabilities,
};

/// Inversion fails below this reciprocal condition estimate.
pub const RCOND_MIN: f64 = 1e-12;

/// Default learning rate.
pub const DEFAULT_ETA: f64 = 0.1;

/// Default offline epoch count.
pub const DEFAULT_OFFLINE_EPOCHS: usize = 20;

/// Default online retraining window (slots) and epochs per window.
pub const DEFAULT_ONLINE_WINDOW: usize = 6;
pub const DEFAULT_ONLINE_EPOCHS: usize = 3;

/// Default decision threshold.
pub const DEFAULT_GAMMA: f64 = 0.98;

/// One labeled slot: per-node attack ratios `A` (the inputs) and
/// compromised ratios `K` (the targets), all in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSample {
    pub slot: usize,
    pub attack_ratios: DVector<f64>,
    pub compromised_ratios: DVector<f64>,
}

impl TrainingSample {
    pub fn new(
        slot: usize,
        attack_ratios: DVector<f64>,
        compromised_ratios: DVector<f64>,
    ) -> Result<Self> {
        if attack_ratios.len() != compromised_ratios.len() {
            return Err(Error::ShapeMismatch(format!(
                "sample vectors have lengths {} and {}",
                attack_ratios.len(),
                compromised_ratios.len()
            )));
        }
        for v in attack_ratios.iter().chain(compromised_ratios.iter()) {
            if !v.is_finite() || !(0.0..=1.0).contains(v) {
                return Err(Error::InvalidParameter {
                    name: "sample ratio",
                    value: *v,
                });
            }
        }
        Ok(Self {
            slot,
            attack_ratios,
            compromised_ratios,
        })
    }

    /// Inference inputs for this sample: `lambda_x = A`, `lambda_y = 1 - A`.
    pub fn inputs(&self) -> ExternalInputs {
        ExternalInputs::from_attack_ratios(self.attack_ratios.as_slice())
            .expect("sample ratios validated at construction")
    }
}

/// Per-sample quantities shared by every weight derivative: the equation
/// denominators, the four coupling matrices, and the four inverses that
/// make each derivative row a cheap contraction.
///
/// The starred coupling matrices of the Y-layer system coincide entrywise
/// with the unstarred ones under the role swap (X <-> Y); the accessors
/// expose the aliases rather than storing duplicates. The starred
/// *inverses* do not coincide and are stored separately.
#[derive(Debug, Clone)]
pub struct GradientWorkspace {
    denom_x: DVector<f64>,
    denom_y: DVector<f64>,
    b_plus: DMatrix<f64>,
    c_coupling: DMatrix<f64>,
    f_plus: DMatrix<f64>,
    g_coupling: DMatrix<f64>,
    inv_f: DMatrix<f64>,
    inv_main: DMatrix<f64>,
    inv_f_star: DMatrix<f64>,
    inv_main_star: DMatrix<f64>,
}

impl GradientWorkspace {
    /// Denominators of the X-layer stationary equations.
    pub fn denom_x(&self) -> &DVector<f64> {
        &self.denom_x
    }

    /// Denominators of the Y-layer stationary equations.
    pub fn denom_y(&self) -> &DVector<f64> {
        &self.denom_y
    }

    /// `B+[(i, j)] = wx_plus[(i, j)] / denom_x[j]`.
    pub fn b_plus(&self) -> &DMatrix<f64> {
        &self.b_plus
    }

    /// `C[(i, j)] = q_x[j] (W - wy_plus[(i, j)]) / denom_x[j]`, zero diagonal.
    pub fn c_coupling(&self) -> &DMatrix<f64> {
        &self.c_coupling
    }

    /// `F+[(i, j)] = wy_plus[(i, j)] / denom_y[j]`.
    pub fn f_plus(&self) -> &DMatrix<f64> {
        &self.f_plus
    }

    /// `G[(i, j)] = q_y[j] (W - wx_plus[(i, j)]) / denom_y[j]`, zero diagonal.
    pub fn g_coupling(&self) -> &DMatrix<f64> {
        &self.g_coupling
    }

    /// Starred aliases: the Y-layer system reuses the same four matrices
    /// with the roles exchanged.
    pub fn b_star_plus(&self) -> &DMatrix<f64> {
        &self.f_plus
    }

    pub fn c_star(&self) -> &DMatrix<f64> {
        &self.g_coupling
    }

    pub fn f_star_plus(&self) -> &DMatrix<f64> {
        &self.b_plus
    }

    pub fn g_star(&self) -> &DMatrix<f64> {
        &self.c_coupling
    }

    /// `(I - F+)^-1`.
    pub fn inv_f(&self) -> &DMatrix<f64> {
        &self.inv_f
    }

    /// `(I - B+ - G (I - F+)^-1 C)^-1`.
    pub fn inv_main(&self) -> &DMatrix<f64> {
        &self.inv_main
    }

    /// `(I - F*+)^-1 = (I - B+)^-1`.
    pub fn inv_f_star(&self) -> &DMatrix<f64> {
        &self.inv_f_star
    }

    /// `(I - F+ - C (I - B+)^-1 G)^-1`.
    pub fn inv_main_star(&self) -> &DMatrix<f64> {
        &self.inv_main_star
    }
}

/// Cost derivatives with respect to both weight matrices; diagonals stay
/// zero because diagonal weights are frozen.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientPair {
    pub d_wx: DMatrix<f64>,
    pub d_wy: DMatrix<f64>,
}

/// The four state-derivative vectors for one weight index pair `(u, v)`:
/// derivatives of `q_x` and `q_y` with respect to `wx_plus[(u, v)]` and to
/// `wy_plus[(u, v)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePartials {
    pub qx_by_wx: DVector<f64>,
    pub qy_by_wx: DVector<f64>,
    pub qx_by_wy: DVector<f64>,
    pub qy_by_wy: DVector<f64>,
}

/// Offline training configuration.
#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub eta: f64,
    pub epochs: usize,
    pub gamma: f64,
    pub solver: FixedPointOptions,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            eta: DEFAULT_ETA,
            epochs: DEFAULT_OFFLINE_EPOCHS,
            gamma: DEFAULT_GAMMA,
            solver: FixedPointOptions::default(),
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: self.eta,
            });
        }
        if self.epochs == 0 {
            return Err(Error::InvalidParameter {
                name: "epochs",
                value: 0.0,
            });
        }
        Ok(())
    }
}

/// Online (incremental) training configuration. `epochs = 0` is allowed and
/// reduces the run to pure inference.
#[derive(Debug, Clone, Copy)]
pub struct OnlineConfig {
    pub window: usize,
    pub epochs: usize,
    pub eta: f64,
    pub gamma: f64,
    pub solver: FixedPointOptions,
}

impl Default for OnlineConfig {
    fn default() -> Self {
        Self {
            window: DEFAULT_ONLINE_WINDOW,
            epochs: DEFAULT_ONLINE_EPOCHS,
            eta: DEFAULT_ETA,
            gamma: DEFAULT_GAMMA,
            solver: FixedPointOptions::default(),
        }
    }
}

/// Cost and skip count after one offline epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub cost: f64,
    /// Samples skipped during this epoch because their fixed point failed
    /// to converge.
    pub skipped: usize,
}

/// Per-epoch cost trace of an offline run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainTrace {
    pub epochs: Vec<EpochStats>,
}

/// One slot of an online run: the prequential decision made before any
/// training that uses the slot, and whether a training event fired at the
/// end of the slot.
#[derive(Debug, Clone)]
pub struct OnlineRecord {
    pub slot: usize,
    /// `None` when the prediction-time fixed point failed to converge.
    pub decision: Option<crate::model::DecisionVector>,
    pub trained_after: bool,
    /// Samples skipped inside the training event (0 when no event fired).
    pub skipped: usize,
}

fn inf_norm(m: &DMatrix<f64>) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..m.nrows() {
        let row_sum: f64 = m.row(i).iter().map(|v| v.abs()).sum();
        best = best.max(row_sum);
    }
    best
}

/// Dense inverse by LU with partial pivoting, rejecting matrices whose
/// reciprocal condition estimate `1 / (|A| |A^-1|)` falls below
/// [`RCOND_MIN`].
fn invert_checked(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let norm_a = inf_norm(a);
    let inv = a
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::Singular { rcond: 0.0 })?;
    let rcond = 1.0 / (norm_a * inf_norm(&inv));
    if !rcond.is_finite() || rcond < RCOND_MIN {
        return Err(Error::Singular { rcond });
    }
    Ok(inv)
}

/// Builds the shared per-sample workspace at a solved state.
pub fn build_workspace(
    model: &ArnnModel,
    inputs: &ExternalInputs,
    states: &StateProbabilities,
) -> Result<GradientWorkspace> {
    let n = model.n();
    if inputs.len() != n || states.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "inputs ({}) and states ({}) must match model n = {}",
            inputs.len(),
            states.len(),
            n
        )));
    }
    let w = model.total_rate();
    let base = (n as f64 - 1.0) * w;
    let q_x = states.q_x();
    let q_y = states.q_y();
    let wx = model.wx_plus();
    let wy = model.wy_plus();

    let mut denom_x = DVector::zeros(n);
    let mut denom_y = DVector::zeros(n);
    for i in 0..n {
        let mut sx = 0.0;
        let mut sy = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            sx += (w - wy[(j, i)]) * q_y[j];
            sy += (w - wx[(j, i)]) * q_x[j];
        }
        denom_x[i] = inputs.lambda_y()[i] + base + sx;
        denom_y[i] = inputs.lambda_x()[i] + base + sy;
    }

    let zero_diag = |i: usize, j: usize, v: f64| if i == j { 0.0 } else { v };
    let b_plus = DMatrix::from_fn(n, n, |i, j| wx[(i, j)] / denom_x[j]);
    let c_coupling =
        DMatrix::from_fn(n, n, |i, j| zero_diag(i, j, q_x[j] * (w - wy[(i, j)]) / denom_x[j]));
    let f_plus = DMatrix::from_fn(n, n, |i, j| wy[(i, j)] / denom_y[j]);
    let g_coupling =
        DMatrix::from_fn(n, n, |i, j| zero_diag(i, j, q_y[j] * (w - wx[(i, j)]) / denom_y[j]));

    let eye = DMatrix::identity(n, n);
    let inv_f = invert_checked(&(&eye - &f_plus))?;
    let inv_main = invert_checked(&(&eye - &b_plus - &g_coupling * &inv_f * &c_coupling))?;
    let inv_f_star = invert_checked(&(&eye - &b_plus))?;
    let inv_main_star =
        invert_checked(&(&eye - &f_plus - &c_coupling * &inv_f_star * &g_coupling))?;

    Ok(GradientWorkspace {
        denom_x,
        denom_y,
        b_plus,
        c_coupling,
        f_plus,
        g_coupling,
        inv_f,
        inv_main,
        inv_f_star,
        inv_main_star,
    })
}

/// Derivatives of both state vectors with respect to `wx_plus[(u, v)]` and
/// `wy_plus[(u, v)]`, as closed-form contractions against the workspace
/// inverses.
///
/// In row-vector form (`(x M)[j] = sum_i x[i] M[(i, j)]`), eliminating the
/// Y layer from the differentiated X-layer recurrence gives
///
/// ```text
/// qx_by_wx = (a e_v - c e_v S C) T            S = (I - F+)^-1
/// qy_by_wx = (-qx_by_wx G + c e_v) S          T = (I - B+ - G S C)^-1
/// ```
///
/// with `a = q_x[u] / denom_x[v]` (the weight enters the X numerator) and
/// `c = q_x[u] q_y[v] / denom_y[v]` (it enters the Y denominator). The
/// starred pair swaps the roles of the layers.
pub fn state_derivatives(
    ws: &GradientWorkspace,
    states: &StateProbabilities,
    u: usize,
    v: usize,
) -> StatePartials {
    let n = states.len();
    assert!(u < n && v < n && u != v, "weight index ({u}, {v}) out of range");
    let q_x = states.q_x();
    let q_y = states.q_y();

    // d/d wx_plus[(u, v)]
    let a = q_x[u] / ws.denom_x[v];
    let c = q_x[u] * q_y[v] / ws.denom_y[v];
    let mut pre: RowDVector<f64> = ws.inv_f.row(v) * &ws.c_coupling;
    pre *= -c;
    pre[v] += a;
    let qx_by_wx = pre * &ws.inv_main;
    let mut pre_y = &qx_by_wx * &ws.g_coupling;
    pre_y *= -1.0;
    pre_y[v] += c;
    let qy_by_wx = pre_y * &ws.inv_f;

    // d/d wy_plus[(u, v)]
    let a_s = q_y[u] / ws.denom_y[v];
    let c_s = q_y[u] * q_x[v] / ws.denom_x[v];
    let mut pre_s: RowDVector<f64> = ws.inv_f_star.row(v) * &ws.g_coupling;
    pre_s *= -c_s;
    pre_s[v] += a_s;
    let qy_by_wy = pre_s * &ws.inv_main_star;
    let mut pre_x = &qy_by_wy * &ws.c_coupling;
    pre_x *= -1.0;
    pre_x[v] += c_s;
    let qx_by_wy = pre_x * &ws.inv_f_star;

    StatePartials {
        qx_by_wx: qx_by_wx.transpose(),
        qy_by_wx: qy_by_wx.transpose(),
        qx_by_wy: qx_by_wy.transpose(),
        qy_by_wy: qy_by_wy.transpose(),
    }
}

fn sample_cost(states: &StateProbabilities, sample: &TrainingSample) -> f64 {
    let mut e = 0.0;
    for i in 0..states.len() {
        let rx = states.q_x()[i] - sample.compromised_ratios[i];
        let ry = states.q_y()[i] - (1.0 - sample.compromised_ratios[i]);
        e += rx * rx + ry * ry;
    }
    0.5 * e
}

/// Squared-error cost of the model over a batch, solving each sample's
/// fixed point with the given solver options.
pub fn cost_with_options(
    model: &ArnnModel,
    batch: &[TrainingSample],
    opts: &FixedPointOptions,
) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyInput("training batch"));
    }
    let mut total = 0.0;
    for sample in batch {
        let states = solve_fixed_point_with(model, &sample.inputs(), opts)?;
        total += sample_cost(&states, sample);
    }
    Ok(total)
}

/// Squared-error cost with the default solver options.
pub fn cost(model: &ArnnModel, batch: &[TrainingSample]) -> Result<f64> {
    cost_with_options(model, batch, &FixedPointOptions::default())
}

/// Cost over the convergent subset of a batch, with the skip count.
fn cost_lenient(
    model: &ArnnModel,
    batch: &[TrainingSample],
    opts: &FixedPointOptions,
) -> (f64, usize) {
    let mut total = 0.0;
    let mut skipped = 0;
    for sample in batch {
        match solve_fixed_point_with(model, &sample.inputs(), opts) {
            Ok(states) => total += sample_cost(&states, sample),
            Err(_) => skipped += 1,
        }
    }
    (total, skipped)
}

/// Full gradient of the single-sample cost with respect to both weight
/// matrices.
///
/// The residual contractions reduce every entry to an outer product:
/// `d_wx[(u, v)] = q_x[u] * psi[v]` and `d_wy[(u, v)] = q_y[u] * psi*[v]`,
/// where `psi` costs four matrix-vector products once the workspace
/// inverses exist. One call is O(n^3) total, dominated by the inverses.
pub fn cost_gradient_with_options(
    model: &ArnnModel,
    sample: &TrainingSample,
    opts: &FixedPointOptions,
) -> Result<GradientPair> {
    let states = solve_fixed_point_with(model, &sample.inputs(), opts)?;
    let ws = build_workspace(model, &sample.inputs(), &states)?;
    Ok(gradient_from_workspace(&ws, &states, sample))
}

/// Gradient of the single-sample cost with default solver options.
pub fn cost_gradient(model: &ArnnModel, sample: &TrainingSample) -> Result<GradientPair> {
    cost_gradient_with_options(model, sample, &FixedPointOptions::default())
}

fn gradient_from_workspace(
    ws: &GradientWorkspace,
    states: &StateProbabilities,
    sample: &TrainingSample,
) -> GradientPair {
    let n = states.len();
    let q_x = states.q_x();
    let q_y = states.q_y();
    let r_x = q_x - &sample.compromised_ratios;
    let r_y = DVector::from_fn(n, |i, _| q_y[i] - (1.0 - sample.compromised_ratios[i]));

    // X-layer weights: E[(u, v)] = a g1[v] - c (g2[v] - g3[v]) with
    // a = q_x[u]/denom_x[v], c = q_x[u] q_y[v]/denom_y[v].
    let g3 = &ws.inv_f * &r_y;
    let h = &r_x - &ws.g_coupling * &g3;
    let g1 = &ws.inv_main * &h;
    let g2 = &ws.inv_f * (&ws.c_coupling * &g1);
    let psi = DVector::from_fn(n, |v, _| {
        g1[v] / ws.denom_x[v] - q_y[v] * (g2[v] - g3[v]) / ws.denom_y[v]
    });

    // Y-layer weights, roles exchanged.
    let g3s = &ws.inv_f_star * &r_x;
    let hs = &r_y - &ws.c_coupling * &g3s;
    let g1s = &ws.inv_main_star * &hs;
    let g2s = &ws.inv_f_star * (&ws.g_coupling * &g1s);
    let psi_star = DVector::from_fn(n, |v, _| {
        g1s[v] / ws.denom_y[v] - q_x[v] * (g2s[v] - g3s[v]) / ws.denom_x[v]
    });

    let zero_diag = |i: usize, j: usize, v: f64| if i == j { 0.0 } else { v };
    let d_wx = DMatrix::from_fn(n, n, |u, v| zero_diag(u, v, q_x[u] * psi[v]));
    let d_wy = DMatrix::from_fn(n, n, |u, v| zero_diag(u, v, q_y[u] * psi_star[v]));
    GradientPair { d_wx, d_wy }
}

/// One stochastic gradient step: descend both matrices by `eta` times the
/// sample gradient, then project back into the box `[0, W]` (diagonals stay
/// zero, `W` stays fixed).
pub fn sgd_step(model: &ArnnModel, sample: &TrainingSample, eta: f64) -> Result<ArnnModel> {
    sgd_step_with(model, sample, eta, &FixedPointOptions::default())
}

pub fn sgd_step_with(
    model: &ArnnModel,
    sample: &TrainingSample,
    eta: f64,
    opts: &FixedPointOptions,
) -> Result<ArnnModel> {
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
        });
    }
    let grad = cost_gradient_with_options(model, sample, opts)?;
    Ok(apply_step(model, &grad, eta))
}

fn apply_step(model: &ArnnModel, grad: &GradientPair, eta: f64) -> ArnnModel {
    let n = model.n();
    let w = model.total_rate();
    let step = |m: &DMatrix<f64>, g: &DMatrix<f64>| {
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else {
                (m[(i, j)] - eta * g[(i, j)]).clamp(0.0, w)
            }
        })
    };
    ArnnModel::from_weights(
        w,
        step(model.wx_plus(), &grad.d_wx),
        step(model.wy_plus(), &grad.d_wy),
    )
    .expect("projected weights stay inside the box")
}

/// Offline training: `cfg.epochs` passes over the batch in slot order, one
/// SGD step per sample. Samples whose fixed point fails to converge are
/// skipped and counted in the trace rather than aborting the run.
pub fn train_offline(
    model: &ArnnModel,
    train: &[TrainingSample],
    cfg: &TrainConfig,
) -> Result<(ArnnModel, TrainTrace)> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyInput("training batch"));
    }
    let mut order: Vec<usize> = (0..train.len()).collect();
    order.sort_by_key(|&i| train[i].slot);

    let mut current = model.clone();
    let mut trace = TrainTrace::default();
    for epoch in 1..=cfg.epochs {
        let mut skipped = 0;
        for &idx in &order {
            match sgd_step_with(&current, &train[idx], cfg.eta, &cfg.solver) {
                Ok(next) => current = next,
                Err(Error::NoConvergence { .. }) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        let (epoch_cost, eval_skipped) = cost_lenient(&current, train, &cfg.solver);
        trace.epochs.push(EpochStats {
            epoch,
            cost: epoch_cost,
            skipped: skipped + eval_skipped,
        });
    }
    Ok((current, trace))
}

/// Online (incremental) protocol over a slot-ordered stream: predict each
/// slot with the current weights, then retrain on the trailing window
/// whenever the slot number is a multiple of `cfg.window`, without
/// reinitializing.
///
/// Predictions are prequential: the decision for slot `l` is recorded
/// before any training event that can see slot `l`'s labels.
pub fn train_online(
    model: &ArnnModel,
    stream: &[TrainingSample],
    cfg: &OnlineConfig,
) -> Result<(ArnnModel, Vec<OnlineRecord>)> {
    if cfg.window == 0 {
        return Err(Error::InvalidParameter {
            name: "window",
            value: 0.0,
        });
    }
    if !(cfg.eta > 0.0) || !cfg.eta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: cfg.eta,
        });
    }
    let mut order: Vec<usize> = (0..stream.len()).collect();
    order.sort_by_key(|&i| stream[i].slot);

    let mut current = model.clone();
    let mut records = Vec::with_capacity(stream.len());
    for (pos, &idx) in order.iter().enumerate() {
        let sample = &stream[idx];
        let decision = match solve_fixed_point_with(&current, &sample.inputs(), &cfg.solver) {
            Ok(states) => Some(states.classify(cfg.gamma)?),
            Err(Error::NoConvergence { .. }) => None,
            Err(e) => return Err(e),
        };

        let train_now = sample.slot % cfg.window == 0 && cfg.epochs > 0;
        let mut skipped = 0;
        if train_now {
            let lo = (pos + 1).saturating_sub(cfg.window);
            let window_idx = &order[lo..=pos];
            for _ in 0..cfg.epochs {
                for &widx in window_idx {
                    match sgd_step_with(&current, &stream[widx], cfg.eta, &cfg.solver) {
                        Ok(next) => current = next,
                        Err(Error::NoConvergence { .. }) => skipped += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        records.push(OnlineRecord {
            slot: sample.slot,
            decision,
            trained_after: train_now,
            skipped,
        });
    }
    Ok((current, records))
}
