//! Right-hand-side evaluators for the Spivey-type recurrences satisfied by
//! the Bell-polynomial families, and the engine that verifies each one as an
//! exact polynomial identity.
//!
//! The left-hand side is always computed from the closed form (the Stirling
//! expansion of the order-`m+n` polynomial) and the right-hand side from the
//! recurrence, so the two routes are algorithmically independent. Equality
//! is canonical term-map comparison; an unequal pair is a result, not an
//! error, which also makes the harness a transcription-typo detector.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bell::{bell_bivariate, bell_univariate};
use crate::comb::{binomial, compositions, factorial, falling_factorial, multinomial};
use crate::moments::{make_provider, DistributionSpec, SpecError};
use crate::poly::{BivarPoly, ParsePolyError};
use crate::rational::{int_pow, rat, Rational};
use crate::stirling::{stirling2, unit_table, StirlingTable};

/// One verifiable identity. The `thm*` ids are the probabilistic
/// recurrences; the rest are their classical specializations, evaluated with
/// the unit provider.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Thm22,
    Thm24,
    Thm25,
    Thm26,
    Thm27,
    Eq4Spivey,
    Eq5GouldQuaintance,
    Eq9ZhengLi,
    Eq10ZhengLi,
    Cor22Y1,
    Cor24Y1,
    Cor25Y1,
    Cor27Y1,
}

impl IdentityId {
    pub const ALL: [IdentityId; 13] = [
        IdentityId::Thm22,
        IdentityId::Thm24,
        IdentityId::Thm25,
        IdentityId::Thm26,
        IdentityId::Thm27,
        IdentityId::Eq4Spivey,
        IdentityId::Eq5GouldQuaintance,
        IdentityId::Eq9ZhengLi,
        IdentityId::Eq10ZhengLi,
        IdentityId::Cor22Y1,
        IdentityId::Cor24Y1,
        IdentityId::Cor25Y1,
        IdentityId::Cor27Y1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Thm22 => "thm22",
            IdentityId::Thm24 => "thm24",
            IdentityId::Thm25 => "thm25",
            IdentityId::Thm26 => "thm26",
            IdentityId::Thm27 => "thm27",
            IdentityId::Eq4Spivey => "eq4",
            IdentityId::Eq5GouldQuaintance => "eq5",
            IdentityId::Eq9ZhengLi => "eq9",
            IdentityId::Eq10ZhengLi => "eq10",
            IdentityId::Cor22Y1 => "cor22",
            IdentityId::Cor24Y1 => "cor24",
            IdentityId::Cor25Y1 => "cor25",
            IdentityId::Cor27Y1 => "cor27",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            IdentityId::Thm22 => {
                "bivariate recurrence for phi_{m+n}^Y(x,y), composition sum over n"
            }
            IdentityId::Thm24 => {
                "bivariate r-recurrence for phi_{m+n,r}^Y(x,y) with r-shifted Bell factor"
            }
            IdentityId::Thm25 => {
                "bivariate r-recurrence for phi_{m+n,r}^Y(x,y) with r-shifted joint moments"
            }
            IdentityId::Thm26 => {
                "univariate r-recurrence for phi_{m+n,r}^Y(x) with r-shifted Bell factor"
            }
            IdentityId::Thm27 => {
                "univariate r-recurrence for phi_{m+n,r}^Y(x) with r-shifted joint moments"
            }
            IdentityId::Eq4Spivey => "Spivey recurrence for the Bell numbers",
            IdentityId::Eq5GouldQuaintance => {
                "Gould-Quaintance recurrence for the Bell polynomials"
            }
            IdentityId::Eq9ZhengLi => "Zheng-Li recurrence for the bivariate Bell polynomials",
            IdentityId::Eq10ZhengLi => "Zheng-Li recurrence for the bivariate r-Bell polynomials",
            IdentityId::Cor22Y1 => "unit specialization of thm22, Stirling-weighted form",
            IdentityId::Cor24Y1 => "unit specialization of thm24",
            IdentityId::Cor25Y1 => "unit specialization of thm25",
            // the target of this reduction is the r-family phi_{m+n,r}(x)
            IdentityId::Cor27Y1 => "unit specialization of thm27, univariate r-Bell target",
        }
    }

    /// Classical ids ignore the distribution and run on the unit provider.
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            IdentityId::Eq4Spivey
                | IdentityId::Eq5GouldQuaintance
                | IdentityId::Eq9ZhengLi
                | IdentityId::Eq10ZhengLi
                | IdentityId::Cor22Y1
                | IdentityId::Cor24Y1
                | IdentityId::Cor25Y1
                | IdentityId::Cor27Y1
        )
    }

    /// Whether the identity has an `r` parameter; for the others `r` is
    /// normalized to 0 in reports.
    pub fn uses_r(self) -> bool {
        matches!(
            self,
            IdentityId::Thm24
                | IdentityId::Thm25
                | IdentityId::Thm26
                | IdentityId::Thm27
                | IdentityId::Eq10ZhengLi
                | IdentityId::Cor24Y1
                | IdentityId::Cor25Y1
                | IdentityId::Cor27Y1
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error(
    "unknown identity `{0}`; expected one of thm22, thm24, thm25, thm26, thm27, \
     eq4, eq5, eq9, eq10, cor22, cor24, cor25, cor27"
)]
pub struct ParseIdentityError(String);

impl FromStr for IdentityId {
    type Err = ParseIdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| ParseIdentityError(s.to_string()))
    }
}

/// Outcome of one identity verification at fixed `(m, n, r)` and
/// distribution. `equal` holds exactly when the canonical term maps of
/// `lhs` and `rhs` coincide.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ReportWire", into = "ReportWire")]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub m: u32,
    pub n: u32,
    pub r: u32,
    pub dist: DistributionSpec,
    pub lhs: BivarPoly,
    pub rhs: BivarPoly,
    pub equal: bool,
    pub elapsed: Duration,
}

/// Serialized shape shared with the CLI: rationals and polynomials render
/// in their canonical text forms, elapsed time in whole milliseconds.
#[derive(Serialize, Deserialize)]
struct ReportWire {
    identity: String,
    m: u32,
    n: u32,
    r: u32,
    dist: String,
    lhs: String,
    rhs: String,
    equal: bool,
    elapsed_ms: u64,
}

impl From<IdentityReport> for ReportWire {
    fn from(report: IdentityReport) -> Self {
        ReportWire {
            identity: report.identity.name().to_string(),
            m: report.m,
            n: report.n,
            r: report.r,
            dist: report.dist.to_string(),
            lhs: report.lhs.to_string(),
            rhs: report.rhs.to_string(),
            equal: report.equal,
            elapsed_ms: report.elapsed.as_millis() as u64,
        }
    }
}

#[derive(Debug, Error)]
pub enum WireError {
    #[error(transparent)]
    Identity(#[from] ParseIdentityError),
    #[error(transparent)]
    Dist(#[from] SpecError),
    #[error(transparent)]
    Poly(#[from] ParsePolyError),
}

impl TryFrom<ReportWire> for IdentityReport {
    type Error = WireError;

    fn try_from(wire: ReportWire) -> Result<Self, WireError> {
        Ok(IdentityReport {
            identity: wire.identity.parse()?,
            m: wire.m,
            n: wire.n,
            r: wire.r,
            dist: wire.dist.parse()?,
            lhs: wire.lhs.parse()?,
            rhs: wire.rhs.parse()?,
            equal: wire.equal,
            elapsed: Duration::from_millis(wire.elapsed_ms),
        })
    }
}

/// `(x)_k y^k`.
fn ff_block(k: u32) -> BivarPoly {
    &falling_factorial(k) * &BivarPoly::monomial(0, k, rat(1))
}

fn neg_k(k: u32) -> Rational {
    rat(-i64::from(k))
}

/// Recurrence for `phi_{m+n}^Y(x,y)`:
///
/// ```text
/// sum_{k<=n} sum_{j<=m} C(m,j) phi_j^Y(x-k,y) (x)_k y^k (1/k!)
///     sum_{l_1+..+l_k=n, l_i>=1} multinomial(n;l) E[S_k^{m-j} prod Y_i^{l_i}]
/// ```
///
/// The composition sum runs over `n`; in the r-variants below it runs over
/// `j <= m` instead, and the evaluators keep that asymmetry literally.
pub fn rhs_thm22(table: &StirlingTable, m: u32, n: u32) -> BivarPoly {
    let moments = table.moments();
    let mut acc = BivarPoly::zero();
    for k in 0..=n {
        let block = ff_block(k);
        let k_fact = Rational::from_integer(factorial(k));
        for j in 0..=m {
            let mut inner = Rational::zero();
            for comp in compositions(n, k) {
                inner += Rational::from_integer(multinomial(n, comp.parts()))
                    * moments.joint_moment(k, m - j, comp.parts());
            }
            if inner.is_zero() {
                continue;
            }
            let w = Rational::from_integer(binomial(m, j.into())) * inner / &k_fact;
            let shifted = bell_bivariate(table, j, 0).shift_x(&neg_k(k));
            acc += (&shifted * &block).scale(&w);
        }
    }
    acc
}

/// Recurrence for `phi_{m+n,r}^Y(x,y)` with the r-shifted Bell factor:
///
/// ```text
/// sum_{i<=n} sum_{k<=m} C(n,i) phi_{i,r}^Y(x-k,y) (x)_k y^k / k!
///     sum_{j=k}^{m} C(m,j) sum_{l_1+..+l_k=j} multinomial(j;l)
///         r^{m-j} E[S_k^{n-i} prod Y_i^{l_i}]
/// ```
pub fn rhs_thm24(table: &StirlingTable, m: u32, n: u32, r: u32) -> BivarPoly {
    let moments = table.moments();
    let mut acc = BivarPoly::zero();
    for i in 0..=n {
        for k in 0..=m {
            let mut inner = Rational::zero();
            for j in k..=m {
                let mut comp_sum = Rational::zero();
                for comp in compositions(j, k) {
                    comp_sum += Rational::from_integer(multinomial(j, comp.parts()))
                        * moments.joint_moment(k, n - i, comp.parts());
                }
                inner +=
                    Rational::from_integer(binomial(m, j.into()) * int_pow(r, m - j)) * comp_sum;
            }
            if inner.is_zero() {
                continue;
            }
            let w = Rational::from_integer(binomial(n, i.into())) * inner
                / Rational::from_integer(factorial(k));
            let shifted = bell_bivariate(table, i, r).shift_x(&neg_k(k));
            acc += (&shifted * &ff_block(k)).scale(&w);
        }
    }
    acc
}

/// Recurrence for `phi_{m+n,r}^Y(x,y)` with the plain Bell factor and the
/// shift moved into the joint moment `E[(S_k+r)^{n-i} prod Y_i^{l_i}]`.
pub fn rhs_thm25(table: &StirlingTable, m: u32, n: u32, r: u32) -> BivarPoly {
    let moments = table.moments();
    let mut acc = BivarPoly::zero();
    for i in 0..=n {
        for k in 0..=m {
            let mut inner = Rational::zero();
            for j in k..=m {
                let mut comp_sum = Rational::zero();
                for comp in compositions(j, k) {
                    comp_sum += Rational::from_integer(multinomial(j, comp.parts()))
                        * moments.shifted_joint_moment(k, n - i, comp.parts(), r);
                }
                inner +=
                    Rational::from_integer(binomial(m, j.into()) * int_pow(r, m - j)) * comp_sum;
            }
            if inner.is_zero() {
                continue;
            }
            let w = Rational::from_integer(binomial(n, i.into())) * inner
                / Rational::from_integer(factorial(k));
            let shifted = bell_bivariate(table, i, 0).shift_x(&neg_k(k));
            acc += (&shifted * &ff_block(k)).scale(&w);
        }
    }
    acc
}

/// Univariate analogue of [`rhs_thm24`]: `x^k` replaces `(x)_k y^k` and no
/// argument shift is applied to the Bell factor.
pub fn rhs_thm26(table: &StirlingTable, m: u32, n: u32, r: u32) -> BivarPoly {
    let moments = table.moments();
    let mut acc = BivarPoly::zero();
    for i in 0..=n {
        for k in 0..=m {
            let mut inner = Rational::zero();
            for j in k..=m {
                let mut comp_sum = Rational::zero();
                for comp in compositions(j, k) {
                    comp_sum += Rational::from_integer(multinomial(j, comp.parts()))
                        * moments.joint_moment(k, n - i, comp.parts());
                }
                inner +=
                    Rational::from_integer(binomial(m, j.into()) * int_pow(r, m - j)) * comp_sum;
            }
            if inner.is_zero() {
                continue;
            }
            let w = Rational::from_integer(binomial(n, i.into())) * inner
                / Rational::from_integer(factorial(k));
            let term = &bell_univariate(table, i, r) * &BivarPoly::monomial(k, 0, rat(1));
            acc += term.scale(&w);
        }
    }
    acc
}

/// Univariate analogue of [`rhs_thm25`].
pub fn rhs_thm27(table: &StirlingTable, m: u32, n: u32, r: u32) -> BivarPoly {
    let moments = table.moments();
    let mut acc = BivarPoly::zero();
    for i in 0..=n {
        for k in 0..=m {
            let mut inner = Rational::zero();
            for j in k..=m {
                let mut comp_sum = Rational::zero();
                for comp in compositions(j, k) {
                    comp_sum += Rational::from_integer(multinomial(j, comp.parts()))
                        * moments.shifted_joint_moment(k, n - i, comp.parts(), r);
                }
                inner +=
                    Rational::from_integer(binomial(m, j.into()) * int_pow(r, m - j)) * comp_sum;
            }
            if inner.is_zero() {
                continue;
            }
            let w = Rational::from_integer(binomial(n, i.into())) * inner
                / Rational::from_integer(factorial(k));
            let term = &bell_univariate(table, i, 0) * &BivarPoly::monomial(k, 0, rat(1));
            acc += term.scale(&w);
        }
    }
    acc
}

/// Evaluate the right-hand side of a classical identity exactly as printed,
/// from the classical Stirling table (the unit provider).
///
/// Panics when given a non-classical id; those have their own evaluators.
pub fn rhs_classical(id: IdentityId, m: u32, n: u32, r: u32) -> BivarPoly {
    let unit = unit_table();
    let mut acc = BivarPoly::zero();
    match id {
        // phi_{l+n} = sum_{k<=l} sum_{i<=n} k^{n-i} C(n,i) S(l,k) phi_i
        IdentityId::Eq4Spivey => {
            for k in 0..=m {
                for i in 0..=n {
                    let bell_i = bell_univariate(unit, i, 0).eval(&rat(1), &rat(0));
                    let w = Rational::from_integer(int_pow(k, n - i) * binomial(n, i.into()))
                        * stirling2(m, k, 0)
                        * bell_i;
                    acc += BivarPoly::constant(w);
                }
            }
        }
        // phi_{l+n}(x) = sum k^{n-i} C(n,i) S(l,k) phi_i(x) x^k
        IdentityId::Eq5GouldQuaintance => {
            for k in 0..=m {
                for i in 0..=n {
                    let w = Rational::from_integer(int_pow(k, n - i) * binomial(n, i.into()))
                        * stirling2(m, k, 0);
                    let term = &bell_univariate(unit, i, 0) * &BivarPoly::monomial(k, 0, rat(1));
                    acc += term.scale(&w);
                }
            }
        }
        // phi_{m+n}(x,y) = sum k^{n-i} C(n,i) S(m,k) phi_i(x-k,y) (x)_k y^k
        IdentityId::Eq9ZhengLi => {
            for k in 0..=m {
                for i in 0..=n {
                    let w = Rational::from_integer(int_pow(k, n - i) * binomial(n, i.into()))
                        * stirling2(m, k, 0);
                    let shifted = bell_bivariate(unit, i, 0).shift_x(&neg_k(k));
                    acc += (&shifted * &ff_block(k)).scale(&w);
                }
            }
        }
        // r-Stirling weights and the r-family inside
        IdentityId::Eq10ZhengLi => {
            for k in 0..=m {
                for i in 0..=n {
                    let w = Rational::from_integer(int_pow(k, n - i) * binomial(n, i.into()))
                        * stirling2(m, k, r);
                    let shifted = bell_bivariate(unit, i, r).shift_x(&neg_k(k));
                    acc += (&shifted * &ff_block(k)).scale(&w);
                }
            }
        }
        // phi_{m+n}(x,y) = sum_{k<=n} sum_{j<=m} C(m,j) phi_j(x-k,y)
        //                  (x)_k y^k S(n,k) k^{m-j}
        IdentityId::Cor22Y1 => {
            for k in 0..=n {
                for j in 0..=m {
                    let w = Rational::from_integer(binomial(m, j.into()) * int_pow(k, m - j))
                        * stirling2(n, k, 0);
                    let shifted = bell_bivariate(unit, j, 0).shift_x(&neg_k(k));
                    acc += (&shifted * &ff_block(k)).scale(&w);
                }
            }
        }
        // phi_{m+n,r}(x,y) = sum C(n,i) phi_{i,r}(x-k,y) (x)_k y^k
        //                    k^{n-i} S(m,k;r)
        IdentityId::Cor24Y1 => {
            for i in 0..=n {
                for k in 0..=m {
                    let w = Rational::from_integer(binomial(n, i.into()) * int_pow(k, n - i))
                        * stirling2(m, k, r);
                    let shifted = bell_bivariate(unit, i, r).shift_x(&neg_k(k));
                    acc += (&shifted * &ff_block(k)).scale(&w);
                }
            }
        }
        // phi_{m+n,r}(x,y) = sum C(n,i) (x)_k y^k phi_i(x-k,y)
        //                    S(m,k;r) (r+k)^{n-i}
        IdentityId::Cor25Y1 => {
            for i in 0..=n {
                for k in 0..=m {
                    let w = Rational::from_integer(binomial(n, i.into()) * int_pow(r + k, n - i))
                        * stirling2(m, k, r);
                    let shifted = bell_bivariate(unit, i, 0).shift_x(&neg_k(k));
                    acc += (&shifted * &ff_block(k)).scale(&w);
                }
            }
        }
        // phi_{m+n,r}(x) = sum C(n,i) x^k phi_i(x) S(m,k;r) (k+r)^{n-i}
        IdentityId::Cor27Y1 => {
            for i in 0..=n {
                for k in 0..=m {
                    let w = Rational::from_integer(binomial(n, i.into()) * int_pow(k + r, n - i))
                        * stirling2(m, k, r);
                    let term = &bell_univariate(unit, i, 0) * &BivarPoly::monomial(k, 0, rat(1));
                    acc += term.scale(&w);
                }
            }
        }
        other => panic!("rhs_classical: `{other}` is not a classical identity"),
    }
    acc
}

/// Both sides of `id` at `(m, n, r)`. The left-hand side comes from the
/// closed form at order `m + n`, the right-hand side from the recurrence.
fn evaluate(
    id: IdentityId,
    table: &StirlingTable,
    m: u32,
    n: u32,
    r: u32,
) -> (BivarPoly, BivarPoly) {
    let unit = unit_table();
    match id {
        IdentityId::Thm22 => (bell_bivariate(table, m + n, 0), rhs_thm22(table, m, n)),
        IdentityId::Thm24 => (bell_bivariate(table, m + n, r), rhs_thm24(table, m, n, r)),
        IdentityId::Thm25 => (bell_bivariate(table, m + n, r), rhs_thm25(table, m, n, r)),
        IdentityId::Thm26 => (bell_univariate(table, m + n, r), rhs_thm26(table, m, n, r)),
        IdentityId::Thm27 => (bell_univariate(table, m + n, r), rhs_thm27(table, m, n, r)),
        IdentityId::Eq4Spivey => {
            let bell_number = bell_univariate(unit, m + n, 0).eval(&rat(1), &rat(0));
            (BivarPoly::constant(bell_number), rhs_classical(id, m, n, 0))
        }
        IdentityId::Eq5GouldQuaintance => {
            (bell_univariate(unit, m + n, 0), rhs_classical(id, m, n, 0))
        }
        IdentityId::Eq9ZhengLi | IdentityId::Cor22Y1 => {
            (bell_bivariate(unit, m + n, 0), rhs_classical(id, m, n, 0))
        }
        IdentityId::Eq10ZhengLi | IdentityId::Cor24Y1 | IdentityId::Cor25Y1 => {
            (bell_bivariate(unit, m + n, r), rhs_classical(id, m, n, r))
        }
        IdentityId::Cor27Y1 => (bell_univariate(unit, m + n, r), rhs_classical(id, m, n, r)),
    }
}

fn verify_cell(
    id: IdentityId,
    table: &StirlingTable,
    dist: &DistributionSpec,
    m: u32,
    n: u32,
    r: u32,
) -> IdentityReport {
    let start = Instant::now();
    let (lhs, rhs) = evaluate(id, table, m, n, r);
    let elapsed = start.elapsed();
    let equal = lhs == rhs;
    IdentityReport {
        identity: id,
        m,
        n,
        r,
        dist: dist.clone(),
        lhs,
        rhs,
        equal,
        elapsed,
    }
}

/// Resolve the table and report metadata for `id`: classical ids force the
/// unit provider and ids without an `r` parameter report `r = 0`.
fn resolve(
    id: IdentityId,
    spec: &DistributionSpec,
) -> Result<(StirlingTable, DistributionSpec), SpecError> {
    if id.is_classical() {
        Ok((unit_table().clone(), DistributionSpec::deterministic_one()))
    } else {
        Ok((StirlingTable::new(make_provider(spec)?), spec.clone()))
    }
}

/// Verify one identity at fixed parameters. Inequality is reported in the
/// result, never raised.
pub fn verify(
    id: IdentityId,
    spec: &DistributionSpec,
    m: u32,
    n: u32,
    r: u32,
) -> Result<IdentityReport, SpecError> {
    let (table, dist) = resolve(id, spec)?;
    let r = if id.uses_r() { r } else { 0 };
    Ok(verify_cell(id, &table, &dist, m, n, r))
}

/// Run [`verify`] over every `(m, n)` with `m + n <= max_total` and every
/// value in `r_values`, in deterministic order (`m` ascending, then `n`,
/// then `r` ascending; `r_values` is sorted and deduplicated first).
/// `jobs > 1` evaluates cells on a thread pool of that size; the report
/// order is unchanged. For identities without an `r` parameter the sweep
/// collapses the `r` axis to the single value 0.
pub fn sweep(
    id: IdentityId,
    spec: &DistributionSpec,
    max_total: u32,
    r_values: &[u32],
    jobs: usize,
) -> Result<Vec<IdentityReport>, SpecError> {
    let (table, dist) = resolve(id, spec)?;
    let mut r_values: Vec<u32> = if id.uses_r() {
        r_values.to_vec()
    } else {
        vec![0]
    };
    r_values.sort_unstable();
    r_values.dedup();
    let mut cells = Vec::new();
    for m in 0..=max_total {
        for n in 0..=max_total - m {
            for &r in &r_values {
                cells.push((m, n, r));
            }
        }
    }
    let run = |&(m, n, r): &(u32, u32, u32)| verify_cell(id, &table, &dist, m, n, r);
    let reports = if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("build sweep thread pool");
        pool.install(|| cells.par_iter().map(run).collect())
    } else {
        cells.iter().map(run).collect()
    };
    Ok(reports)
}

/// Aggregate flag of a sweep: every report equal.
pub fn all_equal(reports: &[IdentityReport]) -> bool {
    reports.iter().all(|r| r.equal)
}
