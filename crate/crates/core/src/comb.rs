//! Combinatorial primitives: binomials, multinomials, compositions into
//! positive parts, and the falling-factorial polynomials.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::poly::BivarPoly;
use crate::rational::rat;

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u32, k: i64) -> BigInt {
    if k < 0 || k as u64 > n as u64 {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `n!`.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `n! / (parts[0]! * parts[1]! * ...)`.
///
/// Panics if the parts do not sum to `n`; that is a caller bug, not an
/// input-validation concern.
pub fn multinomial(n: u32, parts: &[u32]) -> BigInt {
    let total: u64 = parts.iter().map(|&p| u64::from(p)).sum();
    assert_eq!(
        total,
        u64::from(n),
        "multinomial: parts sum to {total}, expected {n}"
    );
    let parts: Vec<BigInt> = parts.iter().map(|&p| BigInt::from(p)).collect();
    num_integer::multinomial(&parts)
}

/// An ordered tuple of positive integers with a prescribed sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// All compositions of `n` into `k` positive parts, in lexicographic order.
///
/// Yields the single empty composition when `n = k = 0`, and nothing when
/// `k = 0 < n` or `k > n`. No consumer may rely on the order; every use in
/// this crate is a commutative sum.
pub fn compositions(n: u32, k: u32) -> Compositions {
    let current = if k == 0 {
        if n == 0 {
            Some(Vec::new())
        } else {
            None
        }
    } else if n < k {
        None
    } else {
        let mut v = vec![1u32; k as usize];
        v[k as usize - 1] = n - (k - 1);
        Some(v)
    };
    Compositions { current }
}

pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let cur = self.current.take()?;
        self.current = next_composition(cur.clone());
        Some(Composition { parts: cur })
    }
}

/// Lexicographic successor among compositions of the same `n` and `k`.
fn next_composition(mut c: Vec<u32>) -> Option<Vec<u32>> {
    let k = c.len();
    if k <= 1 {
        return None;
    }
    let mut suffix = u64::from(c[k - 1]);
    for j in (0..k - 1).rev() {
        suffix += u64::from(c[j]);
        // incrementing c[j] must leave at least 1 per remaining slot
        if suffix - (u64::from(c[j]) + 1) >= (k - 1 - j) as u64 {
            c[j] += 1;
            let mut rem = suffix - u64::from(c[j]);
            for part in &mut c[j + 1..k - 1] {
                *part = 1;
                rem -= 1;
            }
            c[k - 1] = rem as u32;
            return Some(c);
        }
    }
    None
}

/// All tuples of `k` nonnegative integers summing to `n`, via the shift
/// bijection with compositions of `n + k` into `k` positive parts.
pub fn weak_compositions(n: u32, k: u32) -> impl Iterator<Item = Vec<u32>> {
    let source = if k == 0 {
        compositions(n, 0)
    } else {
        compositions(n + k, k)
    };
    source.map(|c| c.parts().iter().map(|&p| p - 1).collect())
}

/// `(x)_k = x(x-1)...(x-k+1)`, with `(x)_0 = 1`.
pub fn falling_factorial(k: u32) -> BivarPoly {
    let mut acc = BivarPoly::one();
    for t in 0..k {
        let factor = BivarPoly::var_x() - BivarPoly::constant(rat(i64::from(t)));
        acc = &acc * &factor;
    }
    acc
}

/// `prod_{t=0}^{k-1} (x - t*y)`, the homogenized falling factorial
/// `(x/y)_k * y^k`. Substituting `y = 1` recovers `(x)_k`; substituting
/// `y = 0` leaves `x^k`.
pub fn homogenized_falling(k: u32) -> BivarPoly {
    let mut acc = BivarPoly::one();
    for t in 0..k {
        let factor = BivarPoly::var_x() - BivarPoly::monomial(0, 1, rat(i64::from(t)));
        acc = &acc * &factor;
    }
    acc
}
