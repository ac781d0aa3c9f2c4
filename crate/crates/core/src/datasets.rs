//! Asbestos-exposure tables (5545 formerly exposed workers, four exposure
//! classes) used throughout the examples and tests.
//!
//! Two exposures are covered: exposure duration (ED, in years) and the
//! cumulative exposure index (CEI), each crossed with two outcomes, pleural
//! plaques and asbestosis. Doses are the midpoints of the exposure classes.
//!
//! The commonly quoted trend statistics for the CEI tables were computed
//! with the ED scores `(10, 24.5, 32.5, 43)` in place of the CEI midpoints;
//! use [`DoseResponseTable::with_doses`] with [`ED_DOSES`] to reproduce them.

use crate::table::DoseResponseTable;

pub const ED_DOSES: [f64; 4] = [10.0, 24.5, 32.5, 43.0];
pub const ED_GROUP_SIZES: [u64; 4] = [1321, 1324, 1408, 1492];
pub const CEI_DOSES: [f64; 4] = [15.0, 41.0, 61.0, 85.0];
pub const CEI_GROUP_SIZES: [u64; 4] = [1306, 1386, 1380, 1473];

fn build(doses: [f64; 4], sizes: [u64; 4], successes: [u64; 4]) -> DoseResponseTable {
    DoseResponseTable::new(doses.to_vec(), sizes.to_vec(), successes.to_vec()).expect("built-in table is valid")
}

pub fn ed_pleural_plaques() -> DoseResponseTable {
    build(ED_DOSES, ED_GROUP_SIZES, [179, 170, 226, 307])
}

pub fn ed_asbestosis() -> DoseResponseTable {
    build(ED_DOSES, ED_GROUP_SIZES, [71, 88, 100, 116])
}

pub fn cei_pleural_plaques() -> DoseResponseTable {
    build(CEI_DOSES, CEI_GROUP_SIZES, [150, 200, 228, 304])
}

pub fn cei_asbestosis() -> DoseResponseTable {
    build(CEI_DOSES, CEI_GROUP_SIZES, [50, 105, 99, 121])
}
