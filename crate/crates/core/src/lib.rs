//! Fuzzy-logic effort estimation layered over intermediate COCOMO-81.
//!
//! A Mamdani system over (mode, size) predicts nominal effort. Fifteen
//! single-input systems turn cost-driver ratings into effort multipliers.
//! Their product is the fuzzy total effort.
//!
//! ```
//! use fuzzy_cocomo::{FuzzyEstimator, Mode, NominalFisConfig};
//!
//! let est = FuzzyEstimator::build(&NominalFisConfig::default()).unwrap();
//! let inputs = est.nominal_inputs(Mode::Organic.b(), 32.0).unwrap();
//! let e = est.estimate(&inputs).unwrap();
//! assert!((e.total - 121.8).abs() / 121.8 < 0.15);
//! ```

pub mod builder;
pub mod cocomo;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod fisfile;
pub mod fuzzy;
pub mod inference;

pub use builder::{
    build_driver_fis, build_driver_fises, fuzzy_total_effort, generate_artificial_dataset,
    synthesize_nominal_fis, DriverFis, DriverFisSpec, EstimateInputs, FuzzyEstimate,
    FuzzyEstimator, NominalEffortFis, NominalFisConfig, SampleSource,
};
pub use cocomo::{
    eaf, nominal_effort, total_effort, CostDriver, CostDriverTable, DriverId, DriverRatings, Level,
    Mode, ProjectRecord,
};
pub use dataset::{filter_by_size, load_dataset, read_dataset, write_dataset, Dataset};
pub use error::{Error, Result};
pub use eval::{
    mmre, mre, percentage_error_series, pred, run_experiment, EvaluationReport, ExperimentConfig,
    ExperimentOutput, PredictionPair, Scope,
};
pub use fuzzy::{
    make_partition, LinguisticVariable, MembershipFunction, PartitionShape, Term, Universe,
};
pub use inference::{defuzz_centroid, FuzzyInferenceSystem, Operators, Rule};
