//! Pruned enumeration of `Lambda(n, k, lambda)` and the census built on it.

mod census;
mod classify;
mod search;

pub use census::{census, census_with_members, normalizer, structure_curve, CensusParams, CountLedger, CurvePoint};
pub use classify::{
    classify, record_is_consistent, CBound, ClassifierParams, DoublingRecord, Reduction, Taxonomy, Thresholds,
};
pub use search::{count_lambda, enumerate_lambda, fold_lambda, EnumOptions, MAX_N};
