//! Constant-dimension subspace codes from parallel lifted MRD codes.
//!
//! The crate has three layers:
//!
//! - exact counting ([`combinatorics`], [`bounds`]): Gaussian binomials, the
//!   Delsarte rank distribution of MRD codes, and the resulting lower bounds
//!   on `A_q(N, d, k)` together with Johnson-type upper bounds;
//! - explicit objects ([`finite_field`], [`mrd`], [`cdc`]): Gabidulin codes
//!   enumerated as matrices over GF(q), lifted into subspaces and assembled
//!   into the parallel construction;
//! - checking ([`verify`], [`codefile`]): subspace distances, exhaustive and
//!   sampled minimum-distance checks, and a text interchange format.

pub mod bounds;
pub mod cdc;
pub mod cli;
pub mod codefile;
pub mod combinatorics;
pub mod finite_field;
pub mod mrd;
pub mod verify;

/// Environment variable overriding the enumeration budget.
pub const BUDGET_ENV: &str = "PMRD_ENUM_BUDGET";

/// Default cap on the number of explicitly enumerated codewords or members.
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

/// Enumeration budget from [`BUDGET_ENV`], falling back to the default.
pub fn enumeration_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_BUDGET)
}
