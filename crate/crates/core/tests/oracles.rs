//! Oracle-backed checks: every value computed through the moment/Stirling
//! pipeline is compared against an independent route (set-partition
//! enumeration or the triangular recurrence), never against itself.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use pbell::rational::{rat, Rational};
use pbell::{
    bell_bivariate, falling_factorial, make_provider, stirling2, BivarPoly, StirlingTable,
};

/// Count the partitions of a `size`-set whose first `distinct` elements lie
/// in pairwise distinct blocks, tallied by block count. Plain exhaustive
/// enumeration of restricted-growth strings.
fn partition_counts(size: usize, distinct: usize) -> Vec<u64> {
    fn go(pos: usize, blocks: usize, size: usize, distinct: usize, counts: &mut Vec<u64>) {
        if pos == size {
            counts[blocks] += 1;
            return;
        }
        if pos < distinct {
            // forced to open a fresh block
            go(pos + 1, blocks + 1, size, distinct, counts);
            return;
        }
        for label in 0..=blocks {
            let next_blocks = if label == blocks { blocks + 1 } else { blocks };
            go(pos + 1, next_blocks, size, distinct, counts);
        }
    }
    let mut counts = vec![0u64; size + 1];
    go(0, 0, size, distinct, &mut counts);
    counts
}

/// Classical r-Stirling triangle by the triangular recurrence
/// `S(n,k;r) = S(n-1,k-1;r) + (k+r) S(n-1,k;r)`, `S(0,k;r) = [k=0]`.
fn recurrence_table(n_max: usize, r: u32) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let carry = if k < n {
                BigInt::from(k as u32 + r) * &prev[k]
            } else {
                BigInt::zero()
            };
            let step = if k >= 1 {
                prev[k - 1].clone()
            } else {
                BigInt::zero()
            };
            row.push(carry + step);
        }
        rows.push(row);
    }
    rows
}

fn as_rational(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[test]
fn classical_stirling_matches_partition_enumeration() {
    for r in 0..=2usize {
        for n in 0..=8usize {
            let counts = partition_counts(n + r, r);
            for k in 0..=n {
                let expected = as_rational(counts[k + r]);
                assert_eq!(
                    stirling2(n as u32, k as u32, r as u32),
                    expected,
                    "n={n}, k={k}, r={r}"
                );
            }
        }
    }
}

#[test]
fn classical_stirling_matches_triangular_recurrence() {
    for r in 0..=3u32 {
        let table = recurrence_table(12, r);
        for (n, row) in table.iter().enumerate() {
            for (k, expected) in row.iter().enumerate() {
                assert_eq!(
                    stirling2(n as u32, k as u32, r),
                    Rational::from_integer(expected.clone()),
                    "n={n}, k={k}, r={r}"
                );
            }
        }
    }
}

#[test]
fn poisson_unit_rate_moments_are_bell_numbers() {
    let moments = make_provider(&"poisson:1".parse().unwrap()).unwrap();
    for n in 0..=10usize {
        let bell: u64 = partition_counts(n, 0).iter().sum();
        assert_eq!(moments.moment(n as u32), as_rational(bell), "n={n}");
    }
}

#[test]
fn unit_bivariate_family_collapses_to_classical() {
    // bell_bivariate with the unit provider has integer coefficients and
    // equals sum_k S(n,k;r) (x)_k y^k built from the recurrence table
    let unit = StirlingTable::new(make_provider(&"det:1".parse().unwrap()).unwrap());
    for r in 0..=2u32 {
        let table = recurrence_table(10, r);
        for (n, row) in table.iter().enumerate() {
            let mut expected = BivarPoly::zero();
            for (k, weight) in row.iter().enumerate() {
                let weight = Rational::from_integer(weight.clone());
                expected += (&falling_factorial(k as u32)
                    * &BivarPoly::monomial(0, k as u32, rat(1)))
                    .scale(&weight);
            }
            let got = bell_bivariate(&unit, n as u32, r);
            assert_eq!(got, expected, "n={n}, r={r}");
            for (_, coeff) in got.terms() {
                assert!(
                    coeff.is_integer(),
                    "non-integer coefficient at n={n}, r={r}"
                );
            }
        }
    }
}

#[test]
fn spivey_split_reproduces_enumerated_bell_numbers() {
    use pbell::IdentityId;
    for total in 0..=10u32 {
        let bell: u64 = partition_counts(total as usize, 0).iter().sum();
        // split total = l + n in all ways; every split must give B_total
        for l in 0..=total {
            let got = pbell::rhs_classical(IdentityId::Eq4Spivey, l, total - l, 0);
            assert_eq!(
                got,
                BivarPoly::constant(as_rational(bell)),
                "l={l}, n={}",
                total - l
            );
        }
    }
}
