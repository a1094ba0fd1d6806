//! Observation, estimation and cross-backend agreement.
//!
//! A compiled program is interrogated through a fixed two-phase
//! dialogue ([`observe`]); the result either matches the direct
//! interpreter's run on the same weighted trace ([`crosscheck_trace`])
//! or the whole distribution is estimated by weighted Monte Carlo over
//! both backends ([`estimate_distribution`]). The sample-free fragment
//! needs no statistics and is evaluated exactly
//! ([`exact_samplefree_measure`]).

mod crosscheck;
mod estimate;
mod exact;
mod observe;

pub use crosscheck::{
    crosscheck_trace, rel_eq, Crosscheck, CrosscheckConfig, REL_TOL,
};
pub use estimate::{
    estimate_distribution, EstimateConfig, EstimateMode, HistogramBin, WeightedSampleSet,
    HISTOGRAM_BINS,
};
pub use exact::{exact_samplefree_measure, ExactError, ExactMeasure};
pub use observe::{o0_o1, observe, Observation, ObserveCause};
