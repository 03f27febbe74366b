//! Explicit lower-bound families and their checkers.

mod endpoint;
mod families;
mod graph;
mod two_point;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::ratio::RationalRepr;
use crate::sumset::Bits;

pub use endpoint::{endpoint_family_fkg, EndpointParams};
pub use families::{
    ap_family_floor, ap_subset_family, ap_subset_family_with, appc_family, appc_family_with, progression_count,
    FamilyOptions,
};
pub use graph::{fkg_bound, fkg_independent_check, fkg_sweep, FkgReport, LoopGraph};
pub use two_point::{two_point_extension, TwoPointReport};

const MAX_EXAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub construction: String,
    #[serde(with = "crate::ratio::serde_biguint")]
    pub family_size: BigUint,
    pub verified_members: u64,
    pub violation_count: u64,
    /// The first few violations.
    pub violations: Vec<String>,
    pub claimed_floor: RationalRepr,
    /// `family_size >= claimed_floor`, compared exactly.
    pub floor_met: bool,
    pub counters: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl ConstructionReport {
    fn new(construction: &str, family_size: BigUint, floor: &BigRational) -> Self {
        let floor_met = BigRational::from_integer(family_size.clone().into()) >= *floor;
        ConstructionReport {
            construction: construction.to_string(),
            family_size,
            verified_members: 0,
            violation_count: 0,
            violations: Vec::new(),
            claimed_floor: RationalRepr::from(floor),
            floor_met,
            counters: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn passes(&self) -> bool {
        self.violation_count == 0 && self.floor_met
    }

    fn violation(&mut self, describe: impl FnOnce() -> String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_EXAMPLES {
            self.violations.push(describe());
        }
    }

    fn bump(&mut self, key: &str, by: u64) {
        *self.counters.entry(key.to_string()).or_default() += by;
    }
}

/// `|A+A|` for a set of non-negative integers, via a reusable bitset.
struct SumsetScratch {
    set: Bits,
    sums: Bits,
}

impl SumsetScratch {
    fn new(max: usize) -> Self {
        SumsetScratch {
            set: Bits::zeros(max + 1),
            sums: Bits::zeros(2 * max + 1),
        }
    }

    fn fill(&mut self, elems: &[i64]) -> &Bits {
        self.set.clear();
        self.sums.clear();
        for &x in elems {
            self.set.set(x as usize);
        }
        for &x in elems {
            self.sums.or_shifted(&self.set, x as usize);
        }
        &self.sums
    }

    fn size(&mut self, elems: &[i64]) -> usize {
        self.fill(elems).count_ones()
    }
}
