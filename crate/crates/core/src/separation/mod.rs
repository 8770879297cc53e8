//! mu-separation, its brute-force cross-check, and independence oracles.

mod brute;
mod mu;
mod oracle;

pub use brute::{
    brute_force_mu_separated, brute_force_mu_separated_capped, find_mu_connecting_walk,
    DEFAULT_BRUTE_FORCE_CAP,
};
pub use mu::{mu_separated, SeparationQuery};
pub use oracle::{GraphOracle, IndependenceOracle, QueryRecord};
