//! Small integer and big-integer helpers shared across the crate: modular
//! arithmetic on machine words, prime generation, CRT reconstruction, and
//! accurate logarithms of arbitrarily large integers and rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `(a + b) mod m` without overflow for `a, b < m < 2^63`.
#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

/// `(a * b) mod m` via 128-bit intermediate.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Modular inverse for `a` coprime to `m`. Panics if not invertible.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    assert!(g == 1, "inv_mod: {a} not invertible mod {m}");
    (x.rem_euclid(m as i128)) as u64
}

pub fn try_inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some((x.rem_euclid(m as i128)) as u64)
}

pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Deterministic Miller-Rabin, valid for all `n < 2^64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Next prime strictly above `n`.
pub fn next_prime_u64(n: u64) -> u64 {
    let mut k = n + 1;
    if k <= 2 {
        return 2;
    }
    if k % 2 == 0 {
        k += 1;
    }
    while !is_prime_u64(k) {
        k += 2;
    }
    k
}

/// Primes in `[2, bound]` by sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

/// Legendre symbol `(a/p)` for odd prime `p`, in `{-1, 0, 1}`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root mod an odd prime by Tonelli-Shanks. Returns `None` for
/// non-residues.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // Tonelli-Shanks.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while legendre(z as i64, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Natural log of a positive big integer, accurate to full f64 precision.
pub fn ln_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "ln of zero");
    let bits = n.bits();
    if bits <= 52 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    // Take the top 64 bits as mantissa: n = m * 2^shift with 2^63 <= m < 2^64.
    let shift = bits - 64;
    let m = (n >> shift).to_u64().unwrap();
    (m as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `|n|` for a nonzero `BigInt`.
pub fn ln_bigint_abs(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

/// `log max(1, |r|)` for a rational number, the local contribution at an
/// archimedean place of a rational point.
pub fn log_plus_rational(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    if n <= d {
        0.0
    } else {
        ln_biguint(n) - ln_biguint(d)
    }
}

/// Combine residues `x = r_i mod m_i` for pairwise coprime big moduli.
/// Residues are given mod `m_i` as `BigUint`; the result is mod `prod m_i`.
pub fn crt_pair(r1: &BigUint, m1: &BigUint, r2: &BigUint, m2: &BigUint) -> (BigUint, BigUint) {
    let m1i = BigInt::from(m1.clone());
    let m2i = BigInt::from(m2.clone());
    let e = m1i.extended_gcd(&m2i);
    assert!(e.gcd.is_one(), "crt moduli not coprime");
    let m = m1 * m2;
    // x = r1 + m1 * ((r2 - r1) * inv(m1) mod m2)
    let diff = (BigInt::from(r2.clone()) - BigInt::from(r1.clone())) * &e.x;
    let t = diff.mod_floor(&m2i);
    let x = BigInt::from(r1.clone()) + m1i * t;
    let x = x.mod_floor(&BigInt::from(m.clone()));
    (x.to_biguint().unwrap(), m)
}

/// Symmetric lift of `x mod m` into `(-m/2, m/2]`.
pub fn symmetric_lift(x: &BigUint, m: &BigUint) -> BigInt {
    let xi = BigInt::from(x.clone());
    let mi = BigInt::from(m.clone());
    if &xi * 2u32 > mi {
        xi - mi
    } else {
        xi
    }
}

/// Rational reconstruction: find `n/d` with `|n|, d <= bound`, `gcd(d, m) = 1`
/// and `n = d * x mod m`. Classic half-extended Euclid; returns `None` when no
/// such small fraction exists.
pub fn rational_reconstruct(x: &BigUint, m: &BigUint, bound: &BigUint) -> Option<BigRational> {
    let mut r0 = BigInt::from(m.clone());
    let mut r1 = BigInt::from(x.mod_floor(m));
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    let bound_i = BigInt::from(bound.clone());
    while r1.magnitude() > bound {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.magnitude() > &bound_i.magnitude().clone() {
        return None;
    }
    let (n, d) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if d.is_zero() {
        return None;
    }
    if !BigInt::from(d.magnitude().gcd(m)).is_one() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Integer square root test: `Some(s)` with `s^2 = n` when `n` is a perfect
/// square.
pub fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// `v_p(n)` and the cofactor `n / p^v` for a nonzero big integer.
pub fn strip_factor(n: &BigInt, p: u64) -> (u64, BigInt) {
    assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0u64;
    let mut cur = n.clone();
    // Exponent-doubling strip: divide by p^(2^j) while possible.
    let mut powers = vec![pb.clone()];
    loop {
        let last = powers.last().unwrap();
        let next = last * last;
        if (&cur % &next).is_zero() {
            powers.push(next);
        } else {
            break;
        }
    }
    for (j, pw) in powers.iter().enumerate().rev() {
        while (&cur % pw).is_zero() {
            cur /= pw;
            v += 1 << j;
        }
    }
    (v, cur)
}

/// p-adic valuation of a nonzero rational (negative for denominators).
pub fn val_p_rational(r: &BigRational, p: u64) -> i64 {
    assert!(!r.is_zero());
    let (vn, _) = strip_factor(r.numer(), p);
    let (vd, _) = strip_factor(r.denom(), p);
    vn as i64 - vd as i64
}

/// Parse a `BigRational` out of "a/b" or "a".
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from(n))
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // num's to_f64 handles huge numerator/denominator by scaling.
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime_u64((1u64 << 61) - 1));
        assert!(!is_prime_u64((1u64 << 62) - 1));
    }

    #[test]
    fn ln_of_large_integer_matches_scaled_log() {
        // ln(10^40) = 40 ln 10
        let n = BigUint::from(10u32).pow(40);
        let expect = 40.0 * std::f64::consts::LN_10;
        assert!((ln_biguint(&n) - expect).abs() < 1e-9);
    }

    #[test]
    fn tonelli_matches_brute_force() {
        for p in [5u64, 13, 17, 29, 97, 193] {
            for a in 0..p {
                let want = (0..p).find(|&y| mul_mod(y, y, p) == a);
                let got = sqrt_mod_prime(a, p);
                match (want, got) {
                    (Some(_), Some(s)) => assert_eq!(mul_mod(s, s, p), a),
                    (None, None) => {}
                    other => panic!("mismatch at a={a} p={p}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn rational_reconstruction_round_trip() {
        // 22/7 mod 10^9+7
        let m = BigUint::from(1_000_000_007u64);
        let inv7 = BigInt::from(7u32)
            .extended_gcd(&BigInt::from(m.clone()))
            .x
            .mod_floor(&BigInt::from(m.clone()));
        let x = (BigInt::from(22u32) * inv7).mod_floor(&BigInt::from(m.clone()));
        let rec = rational_reconstruct(
            &x.to_biguint().unwrap(),
            &m,
            &BigUint::from(10_000u32),
        )
        .unwrap();
        assert_eq!(rec, BigRational::new(BigInt::from(22), BigInt::from(7)));
    }

    #[test]
    fn strip_factor_counts_valuation() {
        let n = BigInt::from(3u32).pow(17) * BigInt::from(5u32);
        let (v, rest) = strip_factor(&n, 3);
        assert_eq!(v, 17);
        assert_eq!(rest, BigInt::from(5u32));
    }
}
