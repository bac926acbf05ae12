//! Dense univariate polynomials over the rationals and the integers.
//!
//! `QPoly` stores coefficients ascending; the vector is empty for the zero
//! polynomial and never has a trailing zero otherwise. `ZPoly` is the
//! integer-coefficient counterpart used by gcd, resultant and factorization
//! routines where fraction-free arithmetic matters.

pub mod factor;
pub mod gcd;
pub mod modp;

use crate::arith::parse_rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly[{}]", self.display("x"))
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly[{}]", self.to_qpoly().display("x"))
    }
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn x() -> Self {
        QPoly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.normalize();
        p
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    /// x^n with coefficient c.
    pub fn monomial(c: BigRational, n: usize) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); n + 1];
        v[n] = c;
        QPoly { coeffs: v }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg_or0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + o.coeff(i));
        }
        QPoly::from_coeffs(v)
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - o.coeff(i));
        }
        QPoly::from_coeffs(v)
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(v)
    }

    pub fn mul_scalar(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Quotient and remainder; divisor must be nonzero.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        if self.degree().map_or(true, |n| n < dd) {
            return (QPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let n = rem.len() - 1;
        let lead_inv = BigRational::one() / d.leading();
        let mut quo = vec![BigRational::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let q = &rem[k + dd] * &lead_inv;
            if !q.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let t = dc * &q;
                    rem[k + i] -= t;
                }
            }
            quo[k] = q;
        }
        (QPoly::from_coeffs(quo), QPoly::from_coeffs(rem))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "div_exact with nonzero remainder");
        q
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + crate::arith::rational_to_f64(c);
        }
        acc
    }

    /// Substitute x -> x + a.
    pub fn shift(&self, a: &BigRational) -> QPoly {
        let mut acc = QPoly::zero();
        let xa = QPoly::from_coeffs(vec![a.clone(), BigRational::one()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&xa).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    /// Substitute x -> c*x.
    pub fn scale_var(&self, c: &BigRational) -> QPoly {
        let mut v = Vec::with_capacity(self.coeffs.len());
        let mut pw = BigRational::one();
        for a in &self.coeffs {
            v.push(a * &pw);
            pw *= c;
        }
        QPoly::from_coeffs(v)
    }

    pub fn compose(&self, inner: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = BigRational::one() / self.leading();
        self.mul_scalar(&inv)
    }

    pub fn pow(&self, e: usize) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Clear denominators: returns `(f_int, den)` with `den * self = f_int`.
    pub fn clear_denominators(&self) -> (ZPoly, BigInt) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let scaled = c * BigRational::from(den.clone());
                debug_assert!(scaled.is_integer());
                scaled.to_integer()
            })
            .collect();
        (ZPoly { coeffs }, den)
    }

    /// Primitive integer polynomial with the same roots: clear denominators,
    /// divide by content, force positive leading coefficient.
    pub fn primitive_z(&self) -> ZPoly {
        let (z, _) = self.clear_denominators();
        z.primitive_part()
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = if c.is_one() && i > 0 {
                String::new()
            } else if (-c.clone()).is_one() && i > 0 {
                "-".into()
            } else {
                format!("{c}")
            };
            let vs = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let sep = if cs.is_empty() || cs == "-" || vs.is_empty() {
                ""
            } else {
                "*"
            };
            parts.push(format!("{cs}{sep}{vs}"));
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = ZPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ZPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
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

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        ZPoly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        ZPoly::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(v)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> ZPoly {
        if c.is_zero() {
            return ZPoly::zero();
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> ZPoly {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// gcd of all coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by content and normalize the leading coefficient to be positive.
    pub fn primitive_part(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    /// Exact division; panics if not exact.
    pub fn div_exact(&self, d: &ZPoly) -> ZPoly {
        let (q, r) = self.to_qpoly().divrem(&d.to_qpoly());
        assert!(r.is_zero(), "ZPoly::div_exact with nonzero remainder");
        let (zq, den) = q.clear_denominators();
        assert!(den.is_one(), "ZPoly::div_exact quotient not integral");
        zq
    }

    /// Largest |coefficient|.
    pub fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| BigRational::from(c.clone()))
                .collect(),
        }
    }

    /// Reduce mod a machine prime.
    pub fn to_modp(&self, p: u64) -> modp::PolyP {
        use num_traits::ToPrimitive;
        let pb = BigInt::from(p);
        modp::PolyP::from_coeffs(
            p,
            self.coeffs
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect(),
        )
    }

    /// Mignotte-style bound on the max-norm of any monic-scaled integer factor
    /// of `self`: `2^n * norm2(self) * |lc|` is a safe (generous) bound for
    /// the coefficients appearing during Zassenhaus recombination.
    pub fn factor_coeff_bound(&self) -> BigInt {
        let n = self.deg_or0();
        let norm2_sq: BigInt = self.coeffs.iter().map(|c| c * c).sum();
        let norm2 = norm2_sq.sqrt() + BigInt::one();
        (BigInt::one() << (n + 1)) * norm2 * self.leading().abs()
    }
}

/// Lagrange interpolation through distinct rational nodes.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> QPoly {
    let mut acc = QPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = QPoly::one();
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&QPoly::from_coeffs(vec![-xj.clone(), BigRational::one()]));
            denom *= xi - xj;
        }
        acc = acc.add(&basis.mul_scalar(&(yi / denom)));
    }
    acc
}

/// Parse expressions like `x^3 - 2`, `2*x^2 + x/3 - 1/2`, `-x + 4` into a
/// polynomial in the single variable `x`.
pub fn parse_poly(s: &str) -> Option<QPoly> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return None;
    }
    // Split into signed terms.
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            let prev = cleaned.chars().nth(i - 1).unwrap();
            // A sign following '^' or '/' or another operator stays in-term.
            if prev != '^' && prev != '/' && prev != '*' && prev != '+' && prev != '-' {
                terms.push(std::mem::take(&mut cur));
            }
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut acc = QPoly::zero();
    for t in terms {
        if t.is_empty() {
            continue;
        }
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1i32, rest.to_string()),
            None => (1, t.trim_start_matches('+').to_string()),
        };
        let (coeff, power): (BigRational, usize) = if let Some(xpos) = body.find('x') {
            let coeff_part = body[..xpos].trim_end_matches('*');
            let coeff = if coeff_part.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coeff_part)?
            };
            let mut rest = &body[xpos + 1..];
            let power = if let Some(exp) = rest.strip_prefix('^') {
                let digits_end = exp.find(|c: char| !c.is_ascii_digit()).unwrap_or(exp.len());
                if digits_end == 0 {
                    return None;
                }
                let power = exp[..digits_end].parse().ok()?;
                rest = &exp[digits_end..];
                power
            } else {
                1
            };
            // "x/3" and "x^2/3" put the denominator after the variable.
            let coeff = if let Some(den) = rest.strip_prefix('/') {
                coeff / parse_rational(den)?
            } else if rest.is_empty() {
                coeff
            } else {
                return None;
            };
            (coeff, power)
        } else {
            (parse_rational(&body)?, 0)
        };
        let c = if sign < 0 { -coeff } else { coeff };
        acc = acc.add(&QPoly::monomial(c, power));
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn divrem_reconstructs() {
        let a = QPoly::from_i64(&[1, 0, -3, 0, 2, 7]);
        let b = QPoly::from_i64(&[3, 1, 2]);
        let (quo, rem) = a.divrem(&b);
        assert_eq!(quo.mul(&b).add(&rem), a);
        assert!(rem.degree().unwrap() < b.degree().unwrap());
    }

    #[test]
    fn parse_round_trip() {
        let p = parse_poly("x^3 - 2").unwrap();
        assert_eq!(p, QPoly::from_i64(&[-2, 0, 0, 1]));
        let p2 = parse_poly("2*x^2 + x/3 - 1/2").unwrap();
        assert_eq!(
            p2,
            QPoly::from_coeffs(vec![
                BigRational::new(BigInt::from(-1), BigInt::from(2)),
                BigRational::new(BigInt::from(1), BigInt::from(3)),
                q(2),
            ])
        );
        let p3 = parse_poly("-x + 4").unwrap();
        assert_eq!(p3, QPoly::from_i64(&[4, -1]));
    }

    #[test]
    fn shift_and_scale() {
        // (x+1)^2 = x^2 + 2x + 1
        let p = QPoly::from_i64(&[0, 0, 1]).shift(&q(1));
        assert_eq!(p, QPoly::from_i64(&[1, 2, 1]));
        let s = QPoly::from_i64(&[0, 0, 1]).scale_var(&q(3));
        assert_eq!(s, QPoly::from_i64(&[0, 0, 9]));
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let f = QPoly::from_i64(&[5, -1, 0, 2]);
        let pts: Vec<_> = (0..4).map(|i| (q(i), f.eval(&q(i)))).collect();
        assert_eq!(interpolate(&pts), f);
    }

    #[test]
    fn primitive_part_normalizes_sign() {
        let p = ZPoly::from_i64(&[-6, 0, -9]);
        assert_eq!(p.primitive_part(), ZPoly::from_i64(&[-2, 0, -3]).neg());
    }
}
