//! Polynomials over F_p for machine primes p, with distinct-degree and
//! equal-degree factorization. Used for irreducibility tests, factor pattern
//! scans and as the modular stage of factorization over Z.

use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod};
use rand::Rng;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyP {
    pub p: u64,
    coeffs: Vec<u64>,
}

impl PolyP {
    pub fn zero(p: u64) -> Self {
        PolyP { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        PolyP {
            p,
            coeffs: vec![1],
        }
    }

    pub fn x(p: u64) -> Self {
        PolyP {
            p,
            coeffs: vec![0, 1],
        }
    }

    pub fn from_coeffs(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut poly = PolyP { p, coeffs };
        poly.normalize();
        poly
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg_or0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &PolyP) -> PolyP {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyP::from_coeffs(
            self.p,
            (0..n)
                .map(|i| add_mod(self.coeff(i), o.coeff(i), self.p))
                .collect(),
        )
    }

    pub fn sub(&self, o: &PolyP) -> PolyP {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyP::from_coeffs(
            self.p,
            (0..n)
                .map(|i| sub_mod(self.coeff(i), o.coeff(i), self.p))
                .collect(),
        )
    }

    pub fn mul(&self, o: &PolyP) -> PolyP {
        if self.is_zero() || o.is_zero() {
            return PolyP::zero(self.p);
        }
        let mut v = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = add_mod(v[i + j], mul_mod(a, b, self.p), self.p);
            }
        }
        PolyP::from_coeffs(self.p, v)
    }

    pub fn mul_scalar(&self, c: u64) -> PolyP {
        PolyP::from_coeffs(
            self.p,
            self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        )
    }

    pub fn divrem(&self, d: &PolyP) -> (PolyP, PolyP) {
        assert!(!d.is_zero());
        let dd = d.degree().unwrap();
        if self.degree().map_or(true, |n| n < dd) {
            return (PolyP::zero(self.p), self.clone());
        }
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let n = rem.len() - 1;
        let linv = inv_mod(d.leading(), p);
        let mut quo = vec![0u64; n - dd + 1];
        for k in (0..=n - dd).rev() {
            let q = mul_mod(rem[k + dd], linv, p);
            if q != 0 {
                for i in 0..=dd {
                    rem[k + i] = sub_mod(rem[k + i], mul_mod(d.coeff(i), q, p), p);
                }
            }
            quo[k] = q;
        }
        (
            PolyP::from_coeffs(p, quo),
            PolyP::from_coeffs(p, rem),
        )
    }

    pub fn rem(&self, d: &PolyP) -> PolyP {
        self.divrem(d).1
    }

    pub fn monic(&self) -> PolyP {
        if self.is_zero() || self.leading() == 1 {
            return self.clone();
        }
        self.mul_scalar(inv_mod(self.leading(), self.p))
    }

    pub fn derivative(&self) -> PolyP {
        if self.coeffs.len() <= 1 {
            return PolyP::zero(self.p);
        }
        PolyP::from_coeffs(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, (i as u64) % self.p, self.p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = add_mod(mul_mod(acc, x, self.p), c, self.p);
        }
        acc
    }

    pub fn gcd(&self, o: &PolyP) -> PolyP {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// self^e mod m.
    pub fn pow_mod(&self, mut e: u64, m: &PolyP) -> PolyP {
        let mut base = self.rem(m);
        let mut acc = PolyP::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        if self.degree().map_or(true, |d| d == 0) {
            return true;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

/// Distinct-degree factorization of a squarefree monic polynomial: returns
/// pairs `(product_of_factors, degree)` in increasing degree order.
pub fn distinct_degree(f: &PolyP) -> Vec<(PolyP, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = PolyP::x(p); // x^(p^d) mod rest, updated as d grows
    let mut d = 0usize;
    while rest.deg_or0() >= 1 {
        d += 1;
        if 2 * d > rest.deg_or0() {
            // What remains is irreducible.
            out.push((rest.clone(), rest.deg_or0()));
            break;
        }
        h = h.pow_mod(p, &rest);
        let g = rest.gcd(&h.sub(&PolyP::x(p)));
        if g.deg_or0() >= 1 {
            out.push((g.clone(), d));
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
        }
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus) of a monic squarefree product
/// of degree-d irreducibles, odd p.
pub fn equal_degree_split<R: Rng>(f: &PolyP, d: usize, rng: &mut R) -> Vec<PolyP> {
    let p = f.p;
    let n = f.deg_or0();
    if n == d {
        return vec![f.monic()];
    }
    assert!(p > 2, "equal_degree_split requires odd p");
    // exponent (p^d - 1)/2 as big integer steps: compute via repeated squaring
    // using u128 is unsafe for p^d overflow, so do the exponentiation
    // digit-by-digit: x^((p^d-1)/2) = prod over the base-p digits.
    loop {
        let a = random_poly(p, n, rng);
        if a.degree().map_or(true, |da| da == 0) {
            continue;
        }
        let g0 = f.gcd(&a);
        if g0.deg_or0() >= 1 && g0.deg_or0() < n {
            let mut out = equal_degree_split(&g0, d, rng);
            out.extend(equal_degree_split(&f.divrem(&g0).0, d, rng));
            return out;
        }
        // b = a^((p^d-1)/2) mod f computed as a^(e0) * (a^p)^(e1) * ... where
        // (p^d-1)/2 = sum e_i p^i with 0 <= e_i < p.
        let digits = half_pd_minus_one_digits(p, d);
        let mut apow = a.clone(); // a^(p^i) mod f
        let mut b = PolyP::one(p);
        for (i, &e) in digits.iter().enumerate() {
            if e > 0 {
                b = b.mul(&apow.pow_mod(e, f)).rem(f);
            }
            if i + 1 < digits.len() {
                apow = apow.pow_mod(p, f);
            }
        }
        let g = f.gcd(&b.sub(&PolyP::one(p)));
        if g.deg_or0() >= 1 && g.deg_or0() < n {
            let mut out = equal_degree_split(&g, d, rng);
            out.extend(equal_degree_split(&f.divrem(&g).0, d, rng));
            return out;
        }
    }
}

/// Base-p digits of (p^d - 1)/2, least significant first.
fn half_pd_minus_one_digits(p: u64, d: usize) -> Vec<u64> {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    let mut digits = Vec::new();
    let mut e = e;
    let pb = BigUint::from(p);
    for _ in 0..d + 1 {
        digits.push((&e % &pb).to_u64().unwrap());
        e /= &pb;
    }
    digits
}

fn random_poly<R: Rng>(p: u64, max_deg: usize, rng: &mut R) -> PolyP {
    let deg = rng.gen_range(1..=max_deg.max(1));
    let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
    if coeffs[deg] == 0 {
        coeffs[deg] = 1;
    }
    PolyP::from_coeffs(p, coeffs)
}

/// Full factorization of a squarefree monic polynomial mod an odd prime.
/// Deterministic given the RNG state.
pub fn factor_squarefree_modp<R: Rng>(f: &PolyP, rng: &mut R) -> Vec<PolyP> {
    let mut out = Vec::new();
    for (prod, d) in distinct_degree(f) {
        if prod.deg_or0() == d {
            out.push(prod);
        } else {
            out.extend(equal_degree_split(&prod, d, rng));
        }
    }
    out.sort_by(|a, b| {
        a.deg_or0()
            .cmp(&b.deg_or0())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    out
}

/// Irreducibility over F_p via distinct-degree structure.
pub fn is_irreducible_modp(f: &PolyP) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    if !f.is_squarefree() {
        return false;
    }
    // f irreducible iff x^(p^n) = x mod f and gcd(x^(p^(n/q)) - x, f) = 1
    // for all prime divisors q of n.
    let p = f.p;
    let fm = f.monic();
    let mut h = PolyP::x(p);
    let mut powers = vec![h.clone()]; // x^(p^i) mod f
    for _ in 0..n {
        h = h.pow_mod(p, &fm);
        powers.push(h.clone());
    }
    if !powers[n].sub(&PolyP::x(p)).rem(&fm).is_zero() {
        return false;
    }
    let mut m = n;
    let mut qs = Vec::new();
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            qs.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        qs.push(m);
    }
    for q in qs {
        let g = fm.gcd(&powers[n / q].sub(&PolyP::x(p)));
        if g.deg_or0() >= 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn divrem_reconstructs_modp() {
        let p = 13;
        let f = PolyP::from_coeffs(p, vec![3, 1, 4, 1, 5, 9]);
        let d = PolyP::from_coeffs(p, vec![2, 7, 1]);
        let (q, r) = f.divrem(&d);
        assert_eq!(q.mul(&d).add(&r), f);
    }

    #[test]
    fn factor_known_product() {
        let p = 7;
        // (x+1)(x+2)(x^2+1) mod 7; x^2+1 irreducible mod 7 since -1 is not a QR.
        let f = PolyP::from_coeffs(p, vec![1, 1])
            .mul(&PolyP::from_coeffs(p, vec![2, 1]))
            .mul(&PolyP::from_coeffs(p, vec![1, 0, 1]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let factors = factor_squarefree_modp(&f, &mut rng);
        assert_eq!(factors.len(), 3);
        let mut prod = PolyP::one(p);
        for g in &factors {
            prod = prod.mul(g);
        }
        assert_eq!(prod, f.monic());
        assert_eq!(factors.iter().filter(|g| g.deg_or0() == 1).count(), 2);
        assert_eq!(factors.iter().filter(|g| g.deg_or0() == 2).count(), 1);
    }

    #[test]
    fn irreducibility_detection() {
        // x^2 + 1 mod 7: irreducible; mod 13: reducible (5^2 = -1 mod 13).
        assert!(is_irreducible_modp(&PolyP::from_coeffs(7, vec![1, 0, 1])));
        assert!(!is_irreducible_modp(&PolyP::from_coeffs(13, vec![1, 0, 1])));
        // x^4 + x + 1 is irreducible mod 2? p must be odd for CZ but DDF-based
        // irreducibility works for p=2 as well.
        assert!(is_irreducible_modp(&PolyP::from_coeffs(2, vec![1, 1, 0, 0, 1])));
        // A degree-4 with quadratic factors mod 5: (x^2+2)(x^2+3).
        let f = PolyP::from_coeffs(5, vec![2, 0, 1]).mul(&PolyP::from_coeffs(5, vec![3, 0, 1]));
        assert!(!is_irreducible_modp(&f));
    }

    #[test]
    fn exhaustive_degree2_factor_count_mod5() {
        // Count monic irreducible quadratics mod 5 two ways: formula
        // (p^2 - p)/2 = 10 and by testing.
        let mut count = 0;
        for b in 0..5 {
            for c in 0..5 {
                if is_irreducible_modp(&PolyP::from_coeffs(5, vec![c, b, 1])) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 10);
    }
}
