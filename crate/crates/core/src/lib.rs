//! Exact arithmetic for probabilistic Stirling numbers and Bell polynomials.
//!
//! Everything here is computed over arbitrary-precision rationals: moments of
//! a random variable `Y`, moments of the partial sums `S_k = Y_1 + ... + Y_k`,
//! probabilistic (r-)Stirling numbers of the second kind, and the univariate
//! and bivariate (r-)Bell polynomial families they generate. On top of that
//! sits a verification harness that checks the Spivey-type recurrences these
//! families satisfy as exact polynomial identities: both sides are expanded
//! into canonical sparse form and compared coefficient by coefficient, so an
//! identity either holds exactly or the mismatch is reported.
//!
//! The classical objects (Stirling numbers, Bell numbers, bivariate Bell
//! polynomials) are the special case `Y = 1` and are exposed through the same
//! code path.

pub mod bell;
pub mod comb;
pub mod identities;
pub mod moments;
pub mod poly;
pub mod rational;
pub mod stirling;

pub use bell::{bell_bivariate, bell_univariate, gf_oracle, scaled_limit, BellFamily};
pub use comb::{
    binomial, compositions, falling_factorial, homogenized_falling, multinomial, weak_compositions,
    Composition,
};
pub use identities::{all_equal, rhs_classical, sweep, verify, IdentityId, IdentityReport};
pub use moments::{make_provider, DistributionSpec, MomentProvider, Moments, SpecError};
pub use poly::BivarPoly;
pub use rational::{parse_rational, rat, ratio, Rational};
pub use stirling::{stirling2, unit_table, StirlingTable};
