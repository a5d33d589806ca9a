//! Continuous-domain correlation filter model.
//!
//! Feature layers of different resolutions are interpolated onto a common
//! periodic domain ([`interp`]), optionally projected to fewer channels
//! ([`projection`]), and correlated with a multi-channel filter to produce a
//! continuous detection score ([`score`]). The filter is learned by
//! minimizing a sample-weighted least-squares objective with a spatial
//! energy penalty ([`objective`], [`regularizer`]); the normal equations are
//! solved by conjugate gradients ([`solver`]), jointly with the projection
//! on the first frame via Gauss-Newton ([`train`]). Training samples live in
//! a weighted, merging memory ([`memory`]).

pub mod coeff;
pub mod interp;
pub mod memory;
pub mod objective;
pub mod projection;
pub mod regularizer;
pub mod score;
pub mod snapshot;
pub mod solver;
pub mod train;

pub use coeff::CoeffGrid;
pub use interp::{
    default_bandwidth, interpolate, interpolate_map, interpolate_stack, InterpolatedSample,
    InterpolationKernel,
};
pub use memory::{MemorySample, SampleMemory};
pub use objective::{eco_objective, eco_objective_fourier};
pub use projection::{init_projection, ProjectionMatrix};
pub use regularizer::{spatial_reg, RegularizerParams, SpatialRegularizer};
pub use score::{gaussian_label_coeffs, score, score_projected, ContinuousFilter, Score};
pub use snapshot::ModelSnapshot;
pub use solver::{solve_filter_cg, CgStats, FilterOperator};
pub use train::{learn_joint_gn, JointConfig, JointTraining};
