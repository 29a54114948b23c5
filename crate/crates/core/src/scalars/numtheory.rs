use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Prime factorisation by trial division, with multiplicity, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    while n.is_multiple_of(2) {
        out.push(2);
        n /= 2;
    }
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    let f = prime_factors(n);
    f.windows(2).all(|w| w[0] != w[1])
}

/// Writes `n = s^2 * m` with `m` squarefree. Returns `(s, m)`.
///
/// Returns `None` when `n` does not fit the trial-division range (`n < 2^63`).
pub fn squarefree_decompose(n: &BigInt) -> Option<(BigInt, u64)> {
    if n.sign() == num_bigint::Sign::Minus {
        return None;
    }
    if n.is_zero() {
        return Some((BigInt::zero(), 1));
    }
    let v = n.to_u64().filter(|v| *v < (1u64 << 63))?;
    let mut s: u64 = 1;
    let mut m: u64 = 1;
    let factors = prime_factors(v);
    let mut i = 0;
    while i < factors.len() {
        let p = factors[i];
        let mut e = 0;
        while i < factors.len() && factors[i] == p {
            e += 1;
            i += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            m *= p;
        }
    }
    Some((BigInt::from(s), m))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least common multiple of a sequence of big integers (1 for an empty sequence).
pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, x| if x.is_zero() { acc } else { acc.lcm(x) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_and_squarefree() {
        assert_eq!(prime_factors(360), vec![2, 2, 2, 3, 3, 5]);
        assert_eq!(prime_factors(97), vec![97]);
        assert!(is_squarefree(30));
        assert!(!is_squarefree(12));
        assert_eq!(
            squarefree_decompose(&BigInt::from(72)),
            Some((BigInt::from(6), 2))
        );
        assert_eq!(
            squarefree_decompose(&BigInt::from(1)),
            Some((BigInt::from(1), 1))
        );
    }
}
