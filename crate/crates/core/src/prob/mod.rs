//! Exact and Monte Carlo tail probabilities for sumsets of random subsets of `[n]`.

mod count_bound;
mod exact;
mod sampler;
mod tails;
mod wilson;

pub use count_bound::{count_bound, CountBoundReport};
pub use exact::{fold_subsets, middle_depth_histogram, missing_by_size, missing_histogram, SubsetProfile, DEFAULT_EXACT_BUDGET};
pub use sampler::{SamplerId, SeededSampler};
pub use tails::{
    exact_tail_missing, exact_tail_sweep, mc_tail_missing, middle_cover_check, middle_cover_sweep, pittel_compare,
    pittel_sweep, subset_count, AnalyticBound, Method, PittelReport, SlopeDiagnostic, TailEstimate, TailEvent,
    TailOptions, TAIL_CSV_HEADER,
};
pub use wilson::{wilson_interval, Z95};
