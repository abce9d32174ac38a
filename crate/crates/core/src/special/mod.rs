//! Special functions behind the extremal state: log-gamma, Kummer's
//! confluent hypergeometric series, parabolic cylinder (Weber) functions,
//! and the bracketing solver for the order `mu` of the extremal state.

mod gamma;
mod gauss;
mod kummer;
pub(crate) mod pcf;
mod root;

pub use gamma::{ln_gamma, recip_gamma};
pub use gauss::GaussLegendre;
pub use kummer::kummer_m;
pub use pcf::{pcf_d, pcf_d_integral, pcf_d_prime, ASYMPTOTIC_SWITCH};
pub use root::{bracket_root, solve_mu, stationarity, BracketRoot, RootResult, DEFAULT_BRACKET};
