//! The Bell-polynomial families generated by a moment provider.
//!
//! For a provider with probabilistic r-Stirling numbers `S_Y(n, k; r)`:
//!
//! * univariate: `phi_{n,r}^Y(x)   = sum_k S_Y(n,k;r) x^k`
//! * bivariate:  `phi_{n,r}^Y(x,y) = sum_k S_Y(n,k;r) (x)_k y^k`
//!
//! `r = 0` gives the plain families, and `Y = 1` the classical ones. The
//! bivariate family degenerates to the univariate one through the scaling
//! limit `phi_{n,r}^Y(x/y, y) -> phi_{n,r}^Y(x)` as `y -> 0`, realized here
//! polynomially via the homogenized falling factorial. [`gf_oracle`]
//! recomputes the bivariate family at integer `x` directly from the
//! truncated generating function `(1 + y(M(t) - 1))^x e^{rt}` and is the
//! independent check used by the tests.

use crate::comb::{factorial, falling_factorial, homogenized_falling};
use crate::moments::Moments;
use crate::poly::BivarPoly;
use crate::rational::{int_pow, Rational};
use crate::stirling::{unit_table, StirlingTable};

use num_traits::{One, Zero};

/// `phi_{n,r}^Y(x) = sum_{k<=n} S_Y(n,k;r) x^k` (y-degree 0).
pub fn bell_univariate(table: &StirlingTable, n: u32, r: u32) -> BivarPoly {
    let mut acc = BivarPoly::zero();
    for k in 0..=n {
        acc += BivarPoly::monomial(k, 0, table.prob_stirling2(n, k, r));
    }
    acc
}

/// `phi_{n,r}^Y(x,y) = sum_{k<=n} S_Y(n,k;r) (x)_k y^k`.
pub fn bell_bivariate(table: &StirlingTable, n: u32, r: u32) -> BivarPoly {
    let mut acc = BivarPoly::zero();
    for k in 0..=n {
        let block = falling_factorial(k).scale(&table.prob_stirling2(n, k, r));
        acc += &block * &BivarPoly::monomial(0, k, Rational::one());
    }
    acc
}

/// The `y -> 0` limit of `phi_{n,r}^Y(x/y, y)`: build
/// `sum_k S_Y(n,k;r) prod_{t<k} (x - t y)` and substitute `y = 0`.
///
/// Equals [`bell_univariate`] at the same arguments.
pub fn scaled_limit(table: &StirlingTable, n: u32, r: u32) -> BivarPoly {
    let mut acc = BivarPoly::zero();
    for k in 0..=n {
        acc += homogenized_falling(k).scale(&table.prob_stirling2(n, k, r));
    }
    acc.eval_y(&Rational::zero())
}

/// Expand `(1 + y(M(t) - 1))^{x_int} * e^{rt}` as a power series in `t`
/// truncated at order `n_max`, where `M(t)` is the truncated moment
/// generating function. Entry `n` is `n! * [t^n]` of the expansion, a
/// polynomial in `y` alone, and equals `phi_{n,r}^Y(x_int, y)`.
pub fn gf_oracle(moments: &Moments, n_max: u32, x_int: u32, r: u32) -> Vec<BivarPoly> {
    let len = n_max as usize + 1;
    let egf = moments.egf_truncation(n_max);

    // 1 + y (M(t) - 1): the constant term is 1 because mu_0 = 1
    let mut base = vec![BivarPoly::zero(); len];
    base[0] = BivarPoly::one();
    for i in 1..len {
        base[i] = BivarPoly::monomial(0, 1, egf[i].clone());
    }

    let mut series = vec![BivarPoly::zero(); len];
    series[0] = BivarPoly::one();
    for _ in 0..x_int {
        series = series_mul(&series, &base);
    }

    let exp_rt: Vec<BivarPoly> = (0..=n_max)
        .map(|i| {
            BivarPoly::constant(
                Rational::from_integer(int_pow(r, i)) / Rational::from_integer(factorial(i)),
            )
        })
        .collect();
    series = series_mul(&series, &exp_rt);

    series
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.scale(&Rational::from_integer(factorial(i as u32))))
        .collect()
}

/// Cauchy product of truncated series with polynomial coefficients.
fn series_mul(a: &[BivarPoly], b: &[BivarPoly]) -> Vec<BivarPoly> {
    let len = a.len();
    let mut out = vec![BivarPoly::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Selector for one of the eight families: classical or probabilistic,
/// univariate or bivariate, with an `r` shift. The classical selection is
/// the unit (`Y = 1`) specialization of the probabilistic one; the tests
/// check that equivalence rather than assuming it.
#[derive(Clone)]
pub struct BellFamily {
    table: StirlingTable,
    bivariate: bool,
    r: u32,
}

impl BellFamily {
    pub fn classical(bivariate: bool, r: u32) -> Self {
        BellFamily {
            table: unit_table().clone(),
            bivariate,
            r,
        }
    }

    pub fn probabilistic(moments: Moments, bivariate: bool, r: u32) -> Self {
        BellFamily {
            table: StirlingTable::new(moments),
            bivariate,
            r,
        }
    }

    pub fn table(&self) -> &StirlingTable {
        &self.table
    }

    pub fn is_bivariate(&self) -> bool {
        self.bivariate
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn polynomial(&self, n: u32) -> BivarPoly {
        if self.bivariate {
            bell_bivariate(&self.table, n, self.r)
        } else {
            bell_univariate(&self.table, n, self.r)
        }
    }
}
