//! Collective classification of botnet-compromised network nodes with an
//! associated random neural network (ARNN).

pub mod error;
pub mod learn;
pub mod model;

pub use error::{Error, Result};
pub use learn::{
    build_workspace, cost, cost_gradient, sgd_step, state_derivatives, train_offline,
    train_online, GradientPair, GradientWorkspace, OnlineConfig, OnlineRecord, TrainConfig,
    TrainTrace, TrainingSample,
};
pub use model::{
    solve_fixed_point, solve_fixed_point_with, stationary_probability, ArnnModel, DecisionVector,
    ExternalInputs, FixedPointOptions, StateProbabilities,
};
