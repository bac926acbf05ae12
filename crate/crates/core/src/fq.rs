//! Small finite fields F_{p^f}, f <= 4: fixed-width coordinate vectors over
//! a deterministic defining polynomial, with full enumeration support for
//! brute-force counting arguments.

use crate::arith::{add_mod, inv_mod, is_prime_u64, mul_mod, sub_mod};
use crate::poly::modp::{is_irreducible_modp, PolyP};

/// Hard ceiling on field size for enumeration-style use.
pub const FQ_ENUM_CAP: u128 = 10_000_000;

/// An element of F_{p^f} in the power basis of the defining root.
/// Coordinates beyond index f-1 are zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FqElem {
    c: [u64; 4],
}

#[derive(Clone, Debug)]
pub struct FqField {
    pub p: u64,
    pub f: usize,
    modulus: [u64; 5],
}

impl FqField {
    /// The defining polynomial is x^f plus the lower coefficient vector
    /// whose base-p value is smallest among irreducible choices; this pins
    /// the field presentation down without external tables.
    pub fn new(p: u64, f: usize) -> FqField {
        assert!(is_prime_u64(p), "characteristic must be prime");
        assert!(p < (1 << 31), "characteristic too large for u64 kernels");
        assert!((1..=4).contains(&f), "extension degree out of range");
        let mut modulus = [0u64; 5];
        modulus[f] = 1;
        if f == 1 {
            return FqField { p, f, modulus };
        }
        let mut v = 0u64;
        loop {
            let mut t = v;
            for slot in modulus.iter_mut().take(f) {
                *slot = t % p;
                t /= p;
            }
            assert!(t == 0, "no irreducible polynomial found below p^f");
            let poly = PolyP::from_coeffs(p, modulus[..=f].to_vec());
            if is_irreducible_modp(&poly) {
                return FqField { p, f, modulus };
            }
            v += 1;
        }
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.f as u32)
    }

    pub fn defining_coeffs(&self) -> &[u64] {
        &self.modulus[..=self.f]
    }

    pub fn zero(&self) -> FqElem {
        FqElem { c: [0; 4] }
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> FqElem {
        let mut c = [0u64; 4];
        c[0] = n % self.p;
        FqElem { c }
    }

    pub fn from_i64(&self, n: i64) -> FqElem {
        let r = n.rem_euclid(self.p as i64) as u64;
        self.from_u64(r)
    }

    /// The class of x (requires f >= 2).
    pub fn gen(&self) -> FqElem {
        assert!(self.f >= 2);
        let mut c = [0u64; 4];
        c[1] = 1;
        FqElem { c }
    }

    pub fn from_coords(&self, coords: &[u64]) -> FqElem {
        assert!(coords.len() <= self.f);
        let mut c = [0u64; 4];
        for (i, &x) in coords.iter().enumerate() {
            c[i] = x % self.p;
        }
        FqElem { c }
    }

    pub fn coords<'a>(&self, e: &'a FqElem) -> &'a [u64] {
        &e.c[..self.f]
    }

    pub fn is_zero(&self, e: &FqElem) -> bool {
        e.c.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut c = [0u64; 4];
        for i in 0..self.f {
            c[i] = add_mod(a.c[i], b.c[i], self.p);
        }
        FqElem { c }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut c = [0u64; 4];
        for i in 0..self.f {
            c[i] = sub_mod(a.c[i], b.c[i], self.p);
        }
        FqElem { c }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        let mut c = [0u64; 4];
        for i in 0..self.f {
            c[i] = sub_mod(0, a.c[i], self.p);
        }
        FqElem { c }
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let f = self.f;
        let mut conv = [0u64; 7];
        for i in 0..f {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..f {
                if b.c[j] != 0 {
                    conv[i + j] = add_mod(conv[i + j], mul_mod(a.c[i], b.c[j], self.p), self.p);
                }
            }
        }
        // Fold x^k for k >= f down through the monic defining polynomial.
        for k in (f..2 * f - 1).rev() {
            let t = conv[k];
            if t != 0 {
                conv[k] = 0;
                for j in 0..f {
                    if self.modulus[j] != 0 {
                        conv[k - f + j] =
                            sub_mod(conv[k - f + j], mul_mod(t, self.modulus[j], self.p), self.p);
                    }
                }
            }
        }
        let mut c = [0u64; 4];
        c[..f].copy_from_slice(&conv[..f]);
        FqElem { c }
    }

    pub fn pow(&self, a: &FqElem, mut e: u128) -> FqElem {
        let mut acc = self.one();
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqElem) -> FqElem {
        assert!(!self.is_zero(a), "inverse of zero");
        if self.f == 1 {
            return FqElem {
                c: [inv_mod(a.c[0], self.p), 0, 0, 0],
            };
        }
        self.pow(a, self.order() - 2)
    }

    pub fn div(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.mul(a, &self.inv(b))
    }

    /// The field automorphism x -> x^p.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p as u128)
    }

    /// Euler criterion; zero counts as a square.
    pub fn is_square(&self, a: &FqElem) -> bool {
        if self.is_zero(a) {
            return true;
        }
        let e = self.pow(a, (self.order() - 1) / 2);
        e == self.one()
    }

    /// All field elements in base-p counter order.
    pub fn enumerate(&self) -> FqIter<'_> {
        assert!(self.order() <= FQ_ENUM_CAP, "field too large to enumerate");
        FqIter {
            field: self,
            next: Some(FqElem { c: [0; 4] }),
        }
    }
}

pub struct FqIter<'a> {
    field: &'a FqField,
    next: Option<FqElem>,
}

impl Iterator for FqIter<'_> {
    type Item = FqElem;

    fn next(&mut self) -> Option<FqElem> {
        let cur = self.next?;
        // increment base-p counter
        let mut c = cur.c;
        let mut i = 0;
        loop {
            if i == self.field.f {
                self.next = None;
                break;
            }
            c[i] += 1;
            if c[i] < self.field.p {
                self.next = Some(FqElem { c });
                break;
            }
            c[i] = 0;
            i += 1;
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f25_structure() {
        let k = FqField::new(5, 2);
        // x^2 + 2 is the first irreducible x^2 + c over F_5.
        assert_eq!(k.defining_coeffs(), &[2, 0, 1]);
        assert_eq!(k.order(), 25);
        assert_eq!(k.enumerate().count(), 25);
        // multiplicative order of the group is 24
        let g = k.gen();
        assert_eq!(k.pow(&g, 24), k.one());
        assert_ne!(k.pow(&g, 12), k.one());
        // Frobenius fixes exactly F_5
        let fixed = k
            .enumerate()
            .filter(|e| k.frobenius(e) == *e)
            .count();
        assert_eq!(fixed, 5);
    }

    #[test]
    fn inverse_and_distributivity() {
        let k = FqField::new(7, 3);
        assert_eq!(k.order(), 343);
        let mut seen = 0;
        for a in k.enumerate() {
            if k.is_zero(&a) {
                continue;
            }
            assert_eq!(k.mul(&a, &k.inv(&a)), k.one());
            seen += 1;
        }
        assert_eq!(seen, 342);
    }

    #[test]
    fn square_census() {
        // Exactly (q-1)/2 nonzero squares in odd characteristic.
        let k = FqField::new(5, 2);
        let squares = k
            .enumerate()
            .filter(|e| !k.is_zero(e) && k.is_square(e))
            .count();
        assert_eq!(squares, 12);
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        let k = FqField::new(5, 4);
        let a = k.from_coords(&[1, 2, 3, 4]);
        let b = k.from_coords(&[4, 0, 2, 1]);
        assert_eq!(
            k.frobenius(&k.add(&a, &b)),
            k.add(&k.frobenius(&a), &k.frobenius(&b))
        );
        assert_eq!(
            k.frobenius(&k.mul(&a, &b)),
            k.mul(&k.frobenius(&a), &k.frobenius(&b))
        );
        // phi^f = identity
        let mut x = a;
        for _ in 0..4 {
            x = k.frobenius(&x);
        }
        assert_eq!(x, a);
    }
}
