//! Big binomials, the constant bundle, and certified inequality checks.

pub mod appendix_b;
pub mod binomial;
pub mod constants;
pub mod expr;
pub mod inequalities;
pub mod interval;

pub use appendix_b::{check_appendix_b, check_appendix_b_grid, TailCountGrid, TailCountParams, TailCountReport, TailMode};
pub use binomial::{binomial_big, binomial_u128};
pub use constants::{constants, ConstantBundle, Epsilon};
pub use expr::{compare, CompareOptions, Comparison, Factor, Product, VerdictMode};
pub use inequalities::{
    check_primitive_inequalities, GridSummary, InequalityId, InequalityVerdict, PrimitiveGrid, VERDICT_CSV_HEADER,
};
pub use interval::{Interval, Truth};
