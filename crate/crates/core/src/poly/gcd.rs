//! Polynomial gcd and resultants over Z via the subresultant PRS, which keeps
//! intermediate coefficient growth polynomial instead of exponential.

use super::{QPoly, ZPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Pseudo-remainder: `lc(d)^(deg f - deg d + 1) * f = q*d + r`. Requires
/// `deg f >= deg d`, `d` nonzero.
pub fn pseudo_rem(f: &ZPoly, d: &ZPoly) -> ZPoly {
    let df = f.degree().expect("pseudo_rem: zero dividend");
    let dd = d.degree().expect("pseudo_rem: zero divisor");
    assert!(df >= dd);
    let lead = d.leading();
    let mut rem: Vec<BigInt> = f.coeffs().to_vec();
    for k in (dd..=df).rev() {
        // rem <- lc(d)*rem - rem[k]*x^(k-dd)*d, which zeroes degree k.
        let top = rem[k].clone();
        for c in rem.iter_mut() {
            *c *= &lead;
        }
        if !top.is_zero() {
            for i in 0..=dd {
                let t = d.coeff(i) * &top;
                rem[k - dd + i] -= t;
            }
        }
        debug_assert!(rem[k].is_zero());
    }
    rem.truncate(dd.max(1));
    ZPoly::from_coeffs(rem)
}

fn pow_big(b: &BigInt, e: u32) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

/// Primitive gcd of two integer polynomials (positive leading coefficient),
/// subresultant PRS on primitive parts (Cohen, Algorithm 3.3.1).
pub fn gcd_z(f: &ZPoly, g: &ZPoly) -> ZPoly {
    if f.is_zero() {
        let mut r = g.primitive_part();
        if r.leading().is_negative() {
            r = r.neg();
        }
        return r;
    }
    if g.is_zero() {
        let mut r = f.primitive_part();
        if r.leading().is_negative() {
            r = r.neg();
        }
        return r;
    }
    let d = f.content().gcd(&g.content());
    let mut a = f.primitive_part();
    let mut b = g.primitive_part();
    if a.deg_or0() < b.deg_or0() {
        std::mem::swap(&mut a, &mut b);
    }
    if b.degree() == Some(0) {
        return ZPoly::from_coeffs(vec![d]);
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = (a.deg_or0() - b.deg_or0()) as u32;
        let r = pseudo_rem(&a, &b);
        if r.is_zero() {
            let mut res = b.primitive_part().mul_scalar(&d);
            if res.leading().is_negative() {
                res = res.neg();
            }
            return res;
        }
        if r.degree() == Some(0) {
            return ZPoly::from_coeffs(vec![d]);
        }
        let divisor = &gg * pow_big(&h, delta);
        let b_next = ZPoly::from_coeffs(r.coeffs().iter().map(|c| c / &divisor).collect());
        a = b;
        b = b_next;
        gg = a.leading();
        h = match delta {
            0 => h,
            1 => gg.clone(),
            _ => pow_big(&gg, delta) / pow_big(&h, delta - 1),
        };
    }
}

/// gcd over Q, returned monic.
pub fn gcd_q(f: &QPoly, g: &QPoly) -> QPoly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    gcd_z(&f.primitive_z(), &g.primitive_z()).to_qpoly().monic()
}

/// Extended gcd over Q[x]: `(g, u, v)` with `u*a + v*b = g` and `g` monic
/// (zero if both inputs are zero).
pub fn ext_gcd_q(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut u0, mut u1) = (QPoly::one(), QPoly::zero());
    let (mut v0, mut v1) = (QPoly::zero(), QPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let u = u0.sub(&q.mul(&u1));
        let v = v0.sub(&q.mul(&v1));
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, u);
        v0 = std::mem::replace(&mut v1, v);
    }
    if r0.is_zero() {
        return (QPoly::zero(), QPoly::zero(), QPoly::zero());
    }
    let lc = r0.leading();
    let inv = BigRational::one() / lc;
    (
        r0.mul_scalar(&inv),
        u0.mul_scalar(&inv),
        v0.mul_scalar(&inv),
    )
}

/// Squarefree part `f / gcd(f, f')`, monic over Q.
pub fn squarefree_part(f: &QPoly) -> QPoly {
    if f.degree().map_or(true, |d| d == 0) {
        return QPoly::one();
    }
    let g = gcd_q(f, &f.derivative());
    f.monic().div_exact(&g)
}

/// Resultant of two integer polynomials, subresultant PRS
/// (Cohen, Algorithm 3.3.7). `Res(f, g) = lc(f)^deg g * prod g(alpha_i)` over
/// the roots of `f` with multiplicity.
pub fn resultant_z(f: &ZPoly, g: &ZPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (da0, db0) = (f.deg_or0(), g.deg_or0());
    if da0 == 0 {
        return pow_big(&f.coeff(0), db0 as u32);
    }
    if db0 == 0 {
        return pow_big(&g.coeff(0), da0 as u32);
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut s = BigInt::one();
    if a.deg_or0() < b.deg_or0() {
        if (a.deg_or0() * b.deg_or0()) % 2 == 1 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let ca = a.content();
    let cb = b.content();
    a = ZPoly::from_coeffs(a.coeffs().iter().map(|c| c / &ca).collect());
    b = ZPoly::from_coeffs(b.coeffs().iter().map(|c| c / &cb).collect());
    let t = pow_big(&ca, b.deg_or0() as u32) * pow_big(&cb, a.deg_or0() as u32);
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.deg_or0();
        let db = b.deg_or0();
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let delta = (da - db) as u32;
        let r = pseudo_rem(&a, &b);
        a = b;
        let divisor = &gg * pow_big(&h, delta);
        b = if r.is_zero() {
            ZPoly::zero()
        } else {
            ZPoly::from_coeffs(r.coeffs().iter().map(|c| c / &divisor).collect())
        };
        gg = a.leading();
        h = match delta {
            0 => h,
            1 => gg.clone(),
            _ => pow_big(&gg, delta) / pow_big(&h, delta - 1),
        };
        if b.is_zero() {
            return BigInt::zero();
        }
        if b.degree() == Some(0) {
            let da_fin = a.deg_or0() as u32;
            let num = pow_big(&b.coeff(0), da_fin);
            let den = pow_big(&h, da_fin.saturating_sub(1));
            return s * t * (num / den);
        }
    }
}

/// Resultant over Q.
pub fn resultant_q(f: &QPoly, g: &QPoly) -> num_rational::BigRational {
    use num_rational::BigRational;
    if f.is_zero() || g.is_zero() {
        return BigRational::zero();
    }
    let (fz, fden) = f.clear_denominators();
    let (gz, gden) = g.clear_denominators();
    let r = resultant_z(&fz, &gz);
    // Res(f/c, g/d) = Res(f, g) / (c^deg g * d^deg f)
    let denom = pow_big(&fden, g.deg_or0() as u32) * pow_big(&gden, f.deg_or0() as u32);
    BigRational::new(r, denom)
}

/// Discriminant of an integer polynomial:
/// `disc = (-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant_z(f: &ZPoly) -> BigInt {
    let n = f.deg_or0();
    if n < 1 {
        return BigInt::one();
    }
    let r = resultant_z(f, &f.derivative());
    let q = &r / &f.leading();
    if (n * (n - 1) / 2) % 2 == 1 {
        -q
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::QPoly;

    #[test]
    fn pseudo_rem_matches_rational_remainder() {
        let f = ZPoly::from_i64(&[1, 0, -3, 0, 2, 7]);
        let d = ZPoly::from_i64(&[3, 1, 2]);
        let r = pseudo_rem(&f, &d);
        // lc(d)^(5-2+1) * f mod d over Q
        let scaled = f.to_qpoly().mul_scalar(&num_rational::BigRational::from(
            BigInt::from(2).pow(4),
        ));
        let expect = scaled.rem(&d.to_qpoly());
        assert_eq!(r.to_qpoly(), expect);
    }

    #[test]
    fn gcd_of_products() {
        let a = ZPoly::from_i64(&[-1, 1]);
        let b = ZPoly::from_i64(&[2, 3]);
        let c = ZPoly::from_i64(&[1, 0, 7]);
        let f = a.mul(&b).mul(&c);
        let g = a.mul(&c).mul(&ZPoly::from_i64(&[5, 1]));
        let d = gcd_z(&f, &g);
        assert_eq!(d, a.mul(&c));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let f = ZPoly::from_i64(&[-2, 0, 0, 1]);
        let g = ZPoly::from_i64(&[1, 1]);
        assert_eq!(gcd_z(&f, &g), ZPoly::one());
    }

    #[test]
    fn gcd_respects_integer_content() {
        let f = ZPoly::from_i64(&[4, 8]); // 4(2x + 1)
        let g = ZPoly::from_i64(&[6]); // constant 6
        assert_eq!(gcd_z(&f, &g), ZPoly::from_i64(&[2]));
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let f = QPoly::from_i64(&[-1, 1])
            .pow(2)
            .mul(&QPoly::from_i64(&[2, 1]));
        let sf = squarefree_part(&f);
        assert_eq!(sf, QPoly::from_i64(&[-1, 1]).mul(&QPoly::from_i64(&[2, 1])));
    }

    #[test]
    fn resultant_basics() {
        // Res(x-3, x-5) = g(3) = -2 with lc(f)=1.
        let f = ZPoly::from_i64(&[-3, 1]);
        let g = ZPoly::from_i64(&[-5, 1]);
        assert_eq!(resultant_z(&f, &g), BigInt::from(-2));

        // f = x^2-2, g = x^3-x+1: prod g(+-sqrt2) = (1+sqrt2)(1-sqrt2) = -1.
        let f = ZPoly::from_i64(&[-2, 0, 1]);
        let g = ZPoly::from_i64(&[1, -1, 0, 1]);
        assert_eq!(resultant_z(&f, &g), BigInt::from(-1));

        // Res(x^2-2, 2x) = product of 2*alpha = -8.
        assert_eq!(resultant_z(&f, &f.derivative()), BigInt::from(-8));

        // Symmetry sign: Res(g,f) = (-1)^(2*3) Res(f,g).
        assert_eq!(resultant_z(&g, &f), BigInt::from(-1));
    }

    #[test]
    fn resultant_with_nontrivial_leading_coeffs() {
        // Res(2x^2-4, 3x-3) = (-1)^2 * 3^2 * (2*1^2-4) = -18.
        let f = ZPoly::from_i64(&[-4, 0, 2]);
        let g = ZPoly::from_i64(&[-3, 3]);
        assert_eq!(resultant_z(&f, &g), BigInt::from(-18));
        // And the swapped order agrees up to (-1)^(df*dg) = 1.
        assert_eq!(resultant_z(&g, &f), BigInt::from(-18));
    }

    #[test]
    fn resultant_shared_root_is_zero() {
        let f = ZPoly::from_i64(&[-1, 1]).mul(&ZPoly::from_i64(&[1, 0, 1]));
        let g = ZPoly::from_i64(&[-1, 1]).mul(&ZPoly::from_i64(&[3, 1]));
        assert_eq!(resultant_z(&f, &g), BigInt::zero());
    }

    #[test]
    fn discriminant_of_quadratic_and_cubic() {
        // disc(ax^2+bx+c) = b^2 - 4ac
        let f = ZPoly::from_i64(&[5, -3, 2]);
        assert_eq!(discriminant_z(&f), BigInt::from(9 - 40));
        // disc(x^3+px+q) = -4p^3 - 27q^2, here p=5, q=1 -> -527
        let g = ZPoly::from_i64(&[1, 5, 0, 1]);
        assert_eq!(discriminant_z(&g), BigInt::from(-527));
    }
}
