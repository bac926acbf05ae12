//! Absolute logarithmic Weil height of algebraic numbers.
//!
//! For a minimal polynomial f = lc * prod (x - a_i) in Z[x], primitive and
//! irreducible, the height of its roots is the normalized log Mahler measure
//!
//!   h = (log|lc| + sum_i log+ |a_i|) / deg f.
//!
//! The finite places contribute exactly log|lc| (Gauss's lemma), so the only
//! approximation lives in the archimedean terms, which come from certified
//! root balls; log+ is 1-Lipschitz, giving a provable error bound.
//!
//! The companion transforms build integer polynomials vanishing on products,
//! sums and powers of conjugates, which is how the height laws are checked
//! without ever choosing an embedding.

use crate::arith::ln_bigint_abs;
use crate::nf::{NfElement, NumberField};
use crate::poly::factor::cyclotomic_order;
use crate::poly::gcd::resultant_z;
use crate::poly::{interpolate, ZPoly};
use crate::roots::{complex_roots, RootError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Height together with a rigorous error bound for the float part.
#[derive(Clone, Copy, Debug)]
pub struct Height {
    pub value: f64,
    pub error: f64,
    /// The height is exactly zero (zero or a root of unity), detected
    /// algebraically rather than numerically.
    pub exact_zero: bool,
}

/// Kronecker's theorem detector: minimal polynomials of height-zero numbers
/// are x itself or a cyclotomic polynomial.
pub fn is_height_zero_minpoly(f: &ZPoly) -> bool {
    if f.deg_or0() == 1 && f.coeff(0).is_zero() && f.coeff(1).is_one() {
        return true; // the number 0
    }
    cyclotomic_order(f).is_some()
}

pub fn is_root_of_unity_minpoly(f: &ZPoly) -> bool {
    cyclotomic_order(f).is_some()
}

/// Weil height of the roots of a primitive irreducible integer polynomial.
pub fn weil_height(f: &ZPoly) -> Result<Height, RootError> {
    let d = match f.degree() {
        None | Some(0) => return Err(RootError::ZeroPolynomial),
        Some(d) => d,
    };
    if is_height_zero_minpoly(f) {
        return Ok(Height {
            value: 0.0,
            error: 0.0,
            exact_zero: true,
        });
    }
    if d == 1 {
        // p/q in lowest terms: h = log max(|p|, |q|)
        let p = f.coeff(0).abs();
        let q = f.coeff(1).abs();
        let m = p.max(q);
        return Ok(Height {
            value: ln_bigint_abs(&m),
            error: 1e-13 * ln_bigint_abs(&m).abs().max(1.0),
            exact_zero: false,
        });
    }
    let balls = complex_roots(f)?;
    let mut log_sum = ln_bigint_abs(&f.leading());
    let mut err = 1e-13 * log_sum.abs().max(1.0);
    for (ball, mult) in &balls {
        let a = ball.center.abs_f64();
        let term = if a > 1.0 { a.ln() } else { 0.0 };
        log_sum += term * (*mult as f64);
        // log+ is 1-Lipschitz; fold in the ln() rounding too
        err += (*mult as f64) * (ball.radius + 1e-14 * (1.0 + term));
    }
    Ok(Height {
        value: log_sum / d as f64,
        error: err / d as f64 + 1e-15,
        exact_zero: false,
    })
}

/// Height of a field element via its minimal polynomial.
pub fn element_height(field: &NumberField, e: &NfElement) -> Result<Height, RootError> {
    weil_height(&field.min_poly_z(e))
}

/// Resultant in one variable interpolated over the other:
/// N(y) = Res_x(f(x), g_y(x)) where `gy` produces the specialization at y0.
fn interp_resultant(
    f: &ZPoly,
    deg_y: usize,
    gy: impl Fn(&BigInt) -> ZPoly,
) -> ZPoly {
    let mut points = Vec::with_capacity(deg_y + 1);
    let mut y0 = BigInt::zero();
    while points.len() < deg_y + 1 {
        let spec = gy(&y0);
        let val = resultant_z(f, &spec);
        points.push((BigRational::from(y0.clone()), BigRational::from(val)));
        y0 = if y0.is_positive() { -y0 } else { -y0 + 1 };
    }
    let n = interpolate(&points);
    let (z, den) = n.clear_denominators();
    debug_assert!(den.is_one(), "resultant interpolation must be integral");
    z
}

/// Integer polynomial vanishing on every product a_i * b_j of roots of f, g.
/// Both inputs must have nonzero constant term (no zero root).
pub fn compose_product(f: &ZPoly, g: &ZPoly) -> ZPoly {
    assert!(!f.coeff(0).is_zero() && !g.coeff(0).is_zero());
    let dg = g.deg_or0();
    interp_resultant(f, f.deg_or0() * dg, |y0| {
        // x^dg * g(y0/x) = sum_j g_j y0^j x^(dg - j)
        let mut coeffs = vec![BigInt::zero(); dg + 1];
        let mut pw = BigInt::one();
        for j in 0..=dg {
            coeffs[dg - j] = g.coeff(j) * &pw;
            pw *= y0;
        }
        ZPoly::from_coeffs(coeffs)
    })
}

/// Integer polynomial vanishing on every sum a_i + b_j of roots of f, g.
pub fn compose_sum(f: &ZPoly, g: &ZPoly) -> ZPoly {
    let dg = g.deg_or0();
    interp_resultant(f, f.deg_or0() * dg, |y0| {
        // g(y0 - x), by Horner in (y0 - x)
        let lin = ZPoly::from_coeffs(vec![y0.clone(), BigInt::from(-1)]);
        let mut acc = ZPoly::zero();
        for j in (0..=dg).rev() {
            acc = acc.mul(&lin);
            acc = acc.add(&ZPoly::from_coeffs(vec![g.coeff(j)]));
        }
        acc
    })
}

/// Integer polynomial vanishing on the k-th powers of the roots of f.
pub fn compose_power(f: &ZPoly, k: u32) -> ZPoly {
    assert!(k >= 1);
    interp_resultant(f, f.deg_or0(), |y0| {
        let mut coeffs = vec![BigInt::zero(); k as usize + 1];
        coeffs[0] = y0.clone();
        coeffs[k as usize] = BigInt::from(-1);
        ZPoly::from_coeffs(coeffs)
    })
}

/// Minimal polynomial of a^k from the minimal polynomial of a: the power
/// compose is a power of it, so the squarefree part is exact.
pub fn power_min_poly(f: &ZPoly, k: u32) -> ZPoly {
    let n = compose_power(f, k);
    let sf = crate::poly::gcd::squarefree_part(&n.to_qpoly());
    let (z, _) = sf.clear_denominators();
    z.primitive_part()
}

/// Heights of all irreducible factors of an integer polynomial; the way to
/// bound heights of composed quantities without picking conjugates.
pub fn factor_heights(n: &ZPoly) -> Result<Vec<Height>, RootError> {
    let fact = crate::poly::factor::factor_q(&n.to_qpoly())
        .expect("composed polynomial within factoring range");
    fact.factors
        .iter()
        .map(|(f, _)| weil_height(f))
        .collect()
}
