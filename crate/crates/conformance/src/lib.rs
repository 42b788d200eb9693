//! Independent oracles and the acceptance suite for `tropcore`.

pub mod criteria;
pub mod gen;
pub mod oracles;
pub mod tolerances;

pub use criteria::Outcome;

/// Runs every criterion in order.
pub fn run_all() -> Vec<Outcome> {
    criteria::all().into_iter().map(|c| c()).collect()
}
