//! Moment providers for the random variable `Y` and the derived moments of
//! the partial sums `S_k = Y_1 + ... + Y_k` (i.i.d. copies, `S_0 = 0`).
//!
//! A [`MomentProvider`] yields the raw moments `mu_n = E[Y^n]` as exact
//! rationals. [`Moments`] wraps a provider with memo tables for `mu_n` and
//! `E[S_k^n]`, and computes the joint moments `E[S_k^a * prod Y_i^{l_i}]`
//! that appear on the right-hand side of every recurrence. All caches are
//! behind locks and only ever race to insert identical values, so a
//! `Moments` handle may be shared freely across threads.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::comb::{binomial, factorial, multinomial, weak_compositions};
use crate::rational::{format_rational, int_pow, parse_rational, rat_pow, Rational};

/// Source of the raw moments `mu_n = E[Y^n]`.
///
/// Implementations must be pure (`moment(n)` always returns the same value),
/// must return `1` at `n = 0`, and must produce a finite rational for every
/// order.
pub trait MomentProvider: Send + Sync {
    fn moment(&self, n: u32) -> Rational;
    fn name(&self) -> String;
}

/// Parsed, validated description of a built-in distribution.
///
/// The textual grammar (shared verbatim with the CLI) is
/// `det:<c>`, `bernoulli:<p>`, `discrete:(a1,p1);(a2,p2);...`,
/// `poisson:<rate>`, where every number is an integer or `num/den` literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistributionSpec {
    Deterministic(Rational),
    Bernoulli(Rational),
    FiniteDiscrete(Vec<(Rational, Rational)>),
    Poisson(Rational),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error(
        "malformed distribution spec `{0}`: expected det:<c>, bernoulli:<p>, \
         discrete:(a1,p1);(a2,p2);..., or poisson:<rate>"
    )]
    Malformed(String),
    #[error("invalid rational `{0}` in distribution spec")]
    BadNumber(String),
    #[error("bernoulli probability {0} is outside [0, 1]")]
    ProbabilityRange(String),
    #[error("discrete probability {0} is negative")]
    NegativeProbability(String),
    #[error("discrete probabilities sum to {0}, expected exactly 1")]
    ProbabilitySum(String),
    #[error("discrete distribution needs at least one (atom, probability) pair")]
    EmptyDiscrete,
    #[error("poisson rate {0} is negative")]
    NegativeRate(String),
}

impl DistributionSpec {
    pub fn deterministic_one() -> Self {
        DistributionSpec::Deterministic(Rational::one())
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        match self {
            DistributionSpec::Deterministic(_) => Ok(()),
            DistributionSpec::Bernoulli(p) => {
                if p.is_negative() || p > &Rational::one() {
                    Err(SpecError::ProbabilityRange(format_rational(p)))
                } else {
                    Ok(())
                }
            }
            DistributionSpec::FiniteDiscrete(atoms) => {
                if atoms.is_empty() {
                    return Err(SpecError::EmptyDiscrete);
                }
                let mut total = Rational::zero();
                for (_, p) in atoms {
                    if p.is_negative() {
                        return Err(SpecError::NegativeProbability(format_rational(p)));
                    }
                    total += p;
                }
                if !total.is_one() {
                    return Err(SpecError::ProbabilitySum(format_rational(&total)));
                }
                Ok(())
            }
            DistributionSpec::Poisson(rate) => {
                if rate.is_negative() {
                    Err(SpecError::NegativeRate(format_rational(rate)))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionSpec::Deterministic(c) => write!(f, "det:{}", format_rational(c)),
            DistributionSpec::Bernoulli(p) => write!(f, "bernoulli:{}", format_rational(p)),
            DistributionSpec::FiniteDiscrete(atoms) => {
                write!(f, "discrete:")?;
                for (pos, (a, p)) in atoms.iter().enumerate() {
                    if pos > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "({},{})", format_rational(a), format_rational(p))?;
                }
                Ok(())
            }
            DistributionSpec::Poisson(rate) => write!(f, "poisson:{}", format_rational(rate)),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| SpecError::Malformed(s.to_string()))?;
        let number = |t: &str| -> Result<Rational, SpecError> {
            parse_rational(t).map_err(|_| SpecError::BadNumber(t.to_string()))
        };
        let spec = match kind {
            "det" => DistributionSpec::Deterministic(number(body)?),
            "bernoulli" => DistributionSpec::Bernoulli(number(body)?),
            "poisson" => DistributionSpec::Poisson(number(body)?),
            "discrete" => {
                let mut atoms = Vec::new();
                if !body.is_empty() {
                    for pair in body.split(';') {
                        let inner = pair
                            .strip_prefix('(')
                            .and_then(|p| p.strip_suffix(')'))
                            .ok_or_else(|| SpecError::Malformed(s.to_string()))?;
                        let (a, p) = inner
                            .split_once(',')
                            .ok_or_else(|| SpecError::Malformed(s.to_string()))?;
                        atoms.push((number(a)?, number(p)?));
                    }
                }
                DistributionSpec::FiniteDiscrete(atoms)
            }
            _ => return Err(SpecError::Malformed(s.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }
}

struct Deterministic {
    value: Rational,
}

impl MomentProvider for Deterministic {
    fn moment(&self, n: u32) -> Rational {
        rat_pow(&self.value, n)
    }

    fn name(&self) -> String {
        format!("det:{}", format_rational(&self.value))
    }
}

struct Bernoulli {
    p: Rational,
}

impl MomentProvider for Bernoulli {
    fn moment(&self, n: u32) -> Rational {
        // Y^n = Y for an indicator and n >= 1
        if n == 0 {
            Rational::one()
        } else {
            self.p.clone()
        }
    }

    fn name(&self) -> String {
        format!("bernoulli:{}", format_rational(&self.p))
    }
}

struct FiniteDiscrete {
    atoms: Vec<(Rational, Rational)>,
}

impl MomentProvider for FiniteDiscrete {
    fn moment(&self, n: u32) -> Rational {
        let mut acc = Rational::zero();
        for (a, p) in &self.atoms {
            acc += p * rat_pow(a, n);
        }
        acc
    }

    fn name(&self) -> String {
        DistributionSpec::FiniteDiscrete(self.atoms.clone()).to_string()
    }
}

struct Poisson {
    rate: Rational,
}

impl MomentProvider for Poisson {
    fn moment(&self, n: u32) -> Rational {
        // mu_{m+1} = rate * sum_{k<=m} C(m,k) mu_k, exactly
        let mut mu = vec![Rational::one()];
        for m in 0..n {
            let mut next = Rational::zero();
            for (k, muk) in mu.iter().enumerate() {
                next += Rational::from_integer(binomial(m, k as i64)) * muk;
            }
            mu.push(next * &self.rate);
        }
        mu.pop().expect("non-empty moment table")
    }

    fn name(&self) -> String {
        format!("poisson:{}", format_rational(&self.rate))
    }
}

/// Validate a spec and wrap the matching provider in a fresh [`Moments`]
/// handle.
pub fn make_provider(spec: &DistributionSpec) -> Result<Moments, SpecError> {
    spec.validate()?;
    let provider: Box<dyn MomentProvider> = match spec {
        DistributionSpec::Deterministic(c) => Box::new(Deterministic { value: c.clone() }),
        DistributionSpec::Bernoulli(p) => Box::new(Bernoulli { p: p.clone() }),
        DistributionSpec::FiniteDiscrete(atoms) => Box::new(FiniteDiscrete {
            atoms: atoms.clone(),
        }),
        DistributionSpec::Poisson(rate) => Box::new(Poisson { rate: rate.clone() }),
    };
    Ok(Moments::new(provider))
}

struct MomentsInner {
    provider: Box<dyn MomentProvider>,
    mu: Mutex<HashMap<u32, Rational>>,
    sums: Mutex<HashMap<(u32, u32), Rational>>,
}

/// A moment provider plus memo tables; clones share the same caches.
#[derive(Clone)]
pub struct Moments {
    inner: Arc<MomentsInner>,
}

impl Moments {
    pub fn new(provider: Box<dyn MomentProvider>) -> Self {
        Moments {
            inner: Arc::new(MomentsInner {
                provider,
                mu: Mutex::new(HashMap::new()),
                sums: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn name(&self) -> String {
        self.inner.provider.name()
    }

    /// `mu_n = E[Y^n]`.
    pub fn moment(&self, n: u32) -> Rational {
        if let Some(v) = self.inner.mu.lock().unwrap().get(&n) {
            return v.clone();
        }
        let v = self.inner.provider.moment(n);
        self.inner.mu.lock().unwrap().insert(n, v.clone());
        v
    }

    /// `E[S_k^n]`, by the convolution over the last summand:
    /// `E[S_k^n] = sum_j C(n,j) mu_j E[S_{k-1}^{n-j}]`, with `E[S_0^n] = 0^n`.
    pub fn sum_moment(&self, k: u32, n: u32) -> Rational {
        if k == 0 {
            return if n == 0 {
                Rational::one()
            } else {
                Rational::zero()
            };
        }
        if let Some(v) = self.inner.sums.lock().unwrap().get(&(k, n)) {
            return v.clone();
        }
        let mut acc = Rational::zero();
        for j in 0..=n {
            let w = Rational::from_integer(binomial(n, j.into()))
                * self.moment(j)
                * self.sum_moment(k - 1, n - j);
            acc += w;
        }
        self.inner.sums.lock().unwrap().insert((k, n), acc.clone());
        acc
    }

    /// `E[(S_k + r)^n]` by binomial expansion into `sum_moment` calls.
    pub fn shifted_sum_moment(&self, k: u32, n: u32, r: u32) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..=n {
            let w = Rational::from_integer(binomial(n, i.into()) * int_pow(r, n - i))
                * self.sum_moment(k, i);
            acc += w;
        }
        acc
    }

    /// `E[S_k^a * prod_{i<k} Y_i^{l_i}]`, by expanding `S_k^a` multinomially
    /// and using independence of the copies. For `k = 0` this is `0^a`.
    ///
    /// Panics unless `l.len() == k`.
    pub fn joint_moment(&self, k: u32, a: u32, l: &[u32]) -> Rational {
        assert_eq!(
            l.len(),
            k as usize,
            "joint_moment: got {} exponents for k = {k}",
            l.len()
        );
        if k == 0 {
            return if a == 0 {
                Rational::one()
            } else {
                Rational::zero()
            };
        }
        let mut acc = Rational::zero();
        for split in weak_compositions(a, k) {
            let mut term = Rational::from_integer(multinomial(a, &split));
            for (ai, li) in split.iter().zip(l) {
                term *= self.moment(ai + li);
            }
            acc += term;
        }
        acc
    }

    /// `E[(S_k + r)^a * prod Y_i^{l_i}]` by binomial expansion of the shift.
    pub fn shifted_joint_moment(&self, k: u32, a: u32, l: &[u32], r: u32) -> Rational {
        let mut acc = Rational::zero();
        for b in 0..=a {
            let w = Rational::from_integer(binomial(a, b.into()) * int_pow(r, a - b))
                * self.joint_moment(k, b, l);
            acc += w;
        }
        acc
    }

    /// Coefficients `mu_n / n!` of the truncated moment generating function.
    pub fn egf_truncation(&self, order: u32) -> Vec<Rational> {
        (0..=order)
            .map(|n| self.moment(n) / Rational::from_integer(factorial(n)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn provider(s: &str) -> Moments {
        make_provider(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn provider_moments() {
        assert_eq!(provider("det:1").moment(5), rat(1));
        assert_eq!(provider("det:3").moment(3), rat(27));
        assert_eq!(provider("bernoulli:1/2").moment(3), ratio(1, 2));
        assert_eq!(provider("bernoulli:1/2").moment(0), rat(1));
        let d = provider("discrete:(0,1/3);(2,2/3)");
        assert_eq!(d.moment(0), rat(1));
        assert_eq!(d.moment(1), ratio(4, 3));
        assert_eq!(d.moment(2), ratio(8, 3));
        // poisson(1) moments are 1, 1, 2, 5, 15
        let p = provider("poisson:1");
        for (n, want) in [1, 1, 2, 5, 15].into_iter().enumerate() {
            assert_eq!(p.moment(n as u32), rat(want));
        }
    }

    #[test]
    fn spec_parse_round_trip() {
        for s in [
            "det:1",
            "det:-3/2",
            "bernoulli:1/2",
            "discrete:(0,1/3);(2,2/3)",
            "poisson:7/5",
        ] {
            let spec: DistributionSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn spec_validation_rejections() {
        assert!(matches!(
            "bernoulli:3/2".parse::<DistributionSpec>(),
            Err(SpecError::ProbabilityRange(_))
        ));
        assert!(matches!(
            "bernoulli:-1/2".parse::<DistributionSpec>(),
            Err(SpecError::ProbabilityRange(_))
        ));
        assert!(matches!(
            "discrete:(0,1/3);(2,1/3)".parse::<DistributionSpec>(),
            Err(SpecError::ProbabilitySum(_))
        ));
        assert!(matches!(
            "discrete:(0,-1);(2,2)".parse::<DistributionSpec>(),
            Err(SpecError::NegativeProbability(_))
        ));
        assert!(matches!(
            "discrete:".parse::<DistributionSpec>(),
            Err(SpecError::EmptyDiscrete)
        ));
        assert!(matches!(
            "poisson:-1".parse::<DistributionSpec>(),
            Err(SpecError::NegativeRate(_))
        ));
        assert!(matches!(
            "gamma:2".parse::<DistributionSpec>(),
            Err(SpecError::Malformed(_))
        ));
        assert!(matches!(
            "det".parse::<DistributionSpec>(),
            Err(SpecError::Malformed(_))
        ));
        assert!(matches!(
            "det:x".parse::<DistributionSpec>(),
            Err(SpecError::BadNumber(_))
        ));
    }

    #[test]
    fn sum_moment_base_cases() {
        let b = provider("bernoulli:1/2");
        assert_eq!(b.sum_moment(0, 3), rat(0));
        assert_eq!(b.sum_moment(0, 0), rat(1));
        assert_eq!(b.sum_moment(5, 0), rat(1));
        // E[(Y1+Y2)^2] = 2 mu_2 + 2 mu_1^2 = 1 + 1/2
        assert_eq!(b.sum_moment(2, 2), ratio(3, 2));
    }

    #[test]
    fn sum_moment_specializations() {
        // one copy is just Y itself
        for s in [
            "det:1",
            "bernoulli:1/2",
            "discrete:(0,1/3);(2,2/3)",
            "poisson:1",
        ] {
            let m = provider(s);
            for n in 0..=15 {
                assert_eq!(m.sum_moment(1, n), m.moment(n), "{s} at n={n}");
            }
        }
        // deterministic(c): E[S_k^n] = (k c)^n
        let d = provider("det:2/3");
        for k in 0..=5u32 {
            for n in 0..=6 {
                let want = rat_pow(&(ratio(2, 3) * rat(i64::from(k))), n);
                assert_eq!(d.sum_moment(k, n), want);
            }
        }
    }

    #[test]
    fn joint_moment_examples() {
        let b = provider("bernoulli:1/2");
        // no S_k factor: independence gives mu_1^2
        let mu1 = b.moment(1);
        assert_eq!(b.joint_moment(2, 0, &[1, 1]), &mu1 * &mu1);
        // E[S_2 Y1 Y2] = 2 mu_2 mu_1 = 1/2
        assert_eq!(b.joint_moment(2, 1, &[1, 1]), ratio(1, 2));
        // empty product conventions
        assert_eq!(b.joint_moment(0, 0, &[]), rat(1));
        assert_eq!(b.joint_moment(0, 2, &[]), rat(0));
    }

    #[test]
    #[should_panic(expected = "joint_moment")]
    fn joint_moment_length_mismatch_panics() {
        provider("det:1").joint_moment(2, 1, &[1]);
    }

    #[test]
    fn joint_moment_all_zero_exponents_is_sum_moment() {
        let m = provider("discrete:(0,1/3);(2,2/3)");
        for k in 0..=3u32 {
            let zeros = vec![0u32; k as usize];
            for a in 0..=4 {
                assert_eq!(m.joint_moment(k, a, &zeros), m.sum_moment(k, a));
            }
        }
    }

    #[test]
    fn shifted_moments() {
        let b = provider("bernoulli:1/2");
        // r = 0 collapses to the unshifted quantities
        assert_eq!(b.shifted_sum_moment(2, 2, 0), b.sum_moment(2, 2));
        assert_eq!(
            b.shifted_joint_moment(2, 1, &[1, 1], 0),
            b.joint_moment(2, 1, &[1, 1])
        );
        // E[(S_1 + 1)^2] = E[S_1^2] + 2 E[S_1] + 1 = 1/2 + 1 + 1
        assert_eq!(b.shifted_sum_moment(1, 2, 1), ratio(5, 2));
    }

    #[test]
    fn egf_truncation_examples() {
        assert_eq!(
            provider("det:1").egf_truncation(2),
            vec![rat(1), rat(1), ratio(1, 2)]
        );
        assert_eq!(
            provider("bernoulli:1/2").egf_truncation(2),
            vec![rat(1), ratio(1, 2), ratio(1, 4)]
        );
        assert_eq!(provider("poisson:1").egf_truncation(0), vec![rat(1)]);
    }
}
