//! Small integer number theory used by field construction and family checks.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

/// `base^exp` saturating at `u128::MAX`.
pub fn pow_sat(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Number of `m`-dimensional subspaces of a `k`-dimensional space over a
/// field with `field_size` elements, saturating.
pub fn gaussian_binomial(k: u32, m: u32, field_size: u128) -> u128 {
    if m > k {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..m {
        let a = pow_sat(field_size, k - i).saturating_sub(1);
        let b = pow_sat(field_size, i + 1).saturating_sub(1);
        num = match num.checked_mul(a) {
            Some(v) => v,
            None => return u128::MAX,
        };
        den = match den.checked_mul(b) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomial_small() {
        // subspaces of F_2^3: 1, 7, 7, 1
        assert_eq!(gaussian_binomial(3, 1, 2), 7);
        assert_eq!(gaussian_binomial(3, 2, 2), 7);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(2, 1, 16), 17);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
