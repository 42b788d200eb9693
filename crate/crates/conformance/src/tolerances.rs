//! Sizes and time limits of the acceptance checks. All comparisons are exact, so the only
//! tolerances are wall-clock budgets.

pub const SEED: u64 = 0x7a0c_2024;

pub const GAUSS_PAIRS: usize = 1000;
pub const GAUSS_MAX_VARS: usize = 3;
pub const GAUSS_MAX_TERMS: usize = 8;
pub const GAUSS_SECONDS: f64 = 5.0;

pub const ELIM_SETS: usize = 300;
pub const ELIM_MAX_ATOMS: usize = 6;
pub const ELIM_POINTS: usize = 200;

pub const CLOSURE_SETS: usize = 300;
pub const CLOSURE_POINTS: usize = 100;

/// Points per axis of the log-grid for the tropical line.
pub const GRID_SIDE: i64 = 101;
pub const LINE_SECONDS: f64 = 1.0;

pub const HYPERSURFACES: usize = 50;
pub const PURITY_POINTS: usize = 20;

pub const PROFILE_SECONDS: f64 = 1.0;

pub const SKELETON_SAMPLES: usize = 9;

pub const ATLAS_RADII: [u64; 3] = [2, 4, 8];

pub const IMAGE_MATRICES: usize = 10;
