//! Probabilistic (and classical) r-Stirling numbers of the second kind.
//!
//! The probabilistic number associated with `Y` is the alternating sum
//!
//! ```text
//! S_Y(n, k; r) = (1/k!) * sum_{j=0}^{k} C(k,j) (-1)^{k-j} E[(S_j + r)^n]
//! ```
//!
//! with `r = 0` giving the plain probabilistic Stirling numbers. The
//! classical values are the specialization `Y = 1` (one implementation, one
//! code path); independent partition-counting oracles live in the tests.
//! No short-circuit is applied above the diagonal: for `k > n` the
//! alternating sum itself vanishes, and the tests rely on that.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_traits::Zero;

use crate::comb::{binomial, factorial};
use crate::moments::{make_provider, DistributionSpec, Moments};
use crate::rational::Rational;

type Cache = Arc<Mutex<HashMap<(u32, u32, u32), Rational>>>;

/// Memoized table of `S_Y(n, k; r)` for one moment provider; clones share
/// the same cache.
#[derive(Clone)]
pub struct StirlingTable {
    moments: Moments,
    cache: Cache,
}

impl StirlingTable {
    pub fn new(moments: Moments) -> Self {
        StirlingTable {
            moments,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn moments(&self) -> &Moments {
        &self.moments
    }

    /// The probabilistic r-Stirling number `S_Y(n, k; r)`.
    pub fn prob_stirling2(&self, n: u32, k: u32, r: u32) -> Rational {
        if let Some(v) = self.cache.lock().unwrap().get(&(n, k, r)) {
            return v.clone();
        }
        let mut acc = Rational::zero();
        for j in 0..=k {
            let mut term = Rational::from_integer(binomial(k, j.into()))
                * self.moments.shifted_sum_moment(j, n, r);
            if (k - j) % 2 == 1 {
                term = -term;
            }
            acc += term;
        }
        let v = acc / Rational::from_integer(factorial(k));
        self.cache.lock().unwrap().insert((n, k, r), v.clone());
        v
    }
}

static UNIT_TABLE: LazyLock<StirlingTable> = LazyLock::new(|| {
    let moments =
        make_provider(&DistributionSpec::deterministic_one()).expect("det:1 is a valid spec");
    StirlingTable::new(moments)
});

/// The shared table for `Y = 1`, which carries the classical values.
pub fn unit_table() -> &'static StirlingTable {
    &UNIT_TABLE
}

/// Classical r-Stirling number of the second kind (integer-valued), defined
/// by `(x+r)^n = sum_k S(n, k; r) (x)_k`; `r = 0` gives the ordinary
/// Stirling numbers.
pub fn stirling2(n: u32, k: u32, r: u32) -> Rational {
    unit_table().prob_stirling2(n, k, r)
}
