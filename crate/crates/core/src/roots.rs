//! Certified complex root isolation for integer polynomials.
//!
//! Each root is reported as a ball: a double-double center together with an
//! f64 radius that provably contains a root of the polynomial.  The radius
//! comes from the classical bound
//!
//!   min_i |z - r_i| <= n * |f(z) / f'(z)|
//!
//! (follows from f'/f = sum 1/(z - r_i)), with all floating-point and
//! coefficient-conversion error folded into the numerator upper bound and
//! denominator lower bound.  When the n balls of a squarefree polynomial are
//! pairwise disjoint, each one contains exactly one simple root.

use crate::dd::{CDd, Dd};
use crate::poly::factor::squarefree_decomposition;
use crate::poly::ZPoly;
use num_bigint::BigInt;
use num_traits::{FromPrimitive, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RootError {
    #[error("zero polynomial has no root set")]
    ZeroPolynomial,
    #[error("root balls could not be certified disjoint at working precision")]
    PrecisionExhausted,
}

/// Closed disk in the complex plane, guaranteed to contain a root.
#[derive(Clone, Copy, Debug)]
pub struct ComplexBall {
    pub center: CDd,
    pub radius: f64,
}

impl ComplexBall {
    pub fn dist_to(&self, z: CDd) -> f64 {
        self.center.sub(z).abs_f64()
    }

    /// Whether a point known to within `slack` of its true value lies in the ball.
    pub fn contains_within(&self, z: CDd, slack: f64) -> bool {
        self.dist_to(z) <= self.radius + slack
    }

    pub fn disjoint(&self, other: &ComplexBall) -> bool {
        self.dist_to(other.center) > self.radius + other.radius
    }

    /// The ball straddles the real axis, so its root may be real.
    pub fn maybe_real(&self) -> bool {
        self.center.im.to_f64().abs() <= self.radius
    }
}

/// |n| rounded into a double-double: top ~106 bits of the integer.
fn dd_from_bigint(n: &BigInt) -> Dd {
    let hi = n.to_f64().expect("finite");
    if !hi.is_finite() {
        panic!("coefficient exceeds f64 range");
    }
    let rem = n - BigInt::from_f64(hi).unwrap();
    Dd::from_sum(hi, rem.to_f64().unwrap())
}

/// Relative error budget per Horner evaluation of degree n, covering both
/// coefficient rounding (2^-105 each) and DD arithmetic accumulation.
fn eval_eps(n: usize) -> f64 {
    (8 * n + 16) as f64 * 2.0_f64.powi(-100)
}

struct DdPoly {
    coeffs: Vec<Dd>,   // ascending
    abs: Vec<f64>,     // |coeff| upper bounds
}

impl DdPoly {
    fn new(f: &ZPoly) -> Self {
        let coeffs: Vec<Dd> = f.coeffs().iter().map(dd_from_bigint).collect();
        let abs = coeffs.iter().map(|c| c.abs().to_f64() * 1.000001 + 1e-300).collect();
        DdPoly { coeffs, abs }
    }

    fn derivative(&self) -> Self {
        let coeffs: Vec<Dd> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(Dd::from_f64(i as f64)))
            .collect();
        let abs = coeffs.iter().map(|c| c.abs().to_f64() * 1.000001 + 1e-300).collect();
        DdPoly { coeffs, abs }
    }

    fn eval(&self, z: CDd) -> CDd {
        let mut v = CDd::ZERO;
        for c in self.coeffs.iter().rev() {
            v = v.mul(z).add(CDd::from_dd(*c));
        }
        v
    }

    /// Evaluate together with an upper bound on sum_i |c_i| |z|^i, which
    /// controls every error term in the computed value.
    fn eval_with_majorant(&self, z: CDd) -> (CDd, f64) {
        let az = z.abs_f64() * 1.000001;
        let mut v = CDd::ZERO;
        let mut m = 0.0f64;
        for (c, a) in self.coeffs.iter().rev().zip(self.abs.iter().rev()) {
            v = v.mul(z).add(CDd::from_dd(*c));
            m = m * az + a;
            m *= 1.000001;
        }
        (v, m)
    }
}


/// Simultaneous Durand-Kerner iteration followed by Newton polish, all in
/// double-double precision.  Input must be squarefree of degree >= 1.
fn approximate_roots(f: &DdPoly) -> Vec<CDd> {
    let n = f.coeffs.len() - 1;
    let lc = *f.coeffs.last().unwrap();
    let radius = {
        // rebuild a rough Fujiwara bound from the DD coefficients
        let lcf = lc.abs().to_f64().max(1e-300);
        let mut r: f64 = 0.0;
        for k in 1..=n {
            let a = f.abs[n - k];
            if a > 0.0 {
                let mut q = a / lcf;
                if k == n {
                    q /= 2.0;
                }
                r = r.max(q.powf(1.0 / k as f64));
            }
        }
        (2.0 * r).max(0.5)
    };

    let mut z: Vec<CDd> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.5;
            CDd::new(radius * ang.cos(), radius * ang.sin())
        })
        .collect();

    let lc_inv = CDd::from_dd(lc);
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let mut denom = lc_inv;
            for j in 0..n {
                if j != k {
                    denom = denom.mul(z[k].sub(z[j]));
                }
            }
            if denom.abs_f64() == 0.0 {
                // coincident iterates; nudge and continue
                z[k] = z[k].add(CDd::new(1e-4 * radius, 1e-4));
                max_step = f64::INFINITY;
                continue;
            }
            let w = f.eval(z[k]).div(denom);
            z[k] = z[k].sub(w);
            let rel = w.abs_f64() / (1.0 + z[k].abs_f64());
            max_step = max_step.max(rel);
        }
        if max_step < 1e-28 {
            break;
        }
    }

    // Newton polish to squeeze out the last bits.
    let df = f.derivative();
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let d = df.eval(*zk);
            if d.abs_f64() == 0.0 {
                break;
            }
            *zk = zk.sub(f.eval(*zk).div(d));
        }
    }
    z
}

/// Certified root balls of a squarefree integer polynomial.
fn roots_squarefree(f: &ZPoly) -> Result<Vec<ComplexBall>, RootError> {
    let n = match f.degree() {
        None => return Err(RootError::ZeroPolynomial),
        Some(0) => return Ok(Vec::new()),
        Some(n) => n,
    };
    let fd = DdPoly::new(f);
    let dfd = fd.derivative();
    let eps = eval_eps(n);

    let approx = approximate_roots(&fd);
    let mut balls = Vec::with_capacity(n);
    for z in approx {
        let (v, mv) = fd.eval_with_majorant(z);
        let (d, md) = dfd.eval_with_majorant(z);
        let num_hi = v.abs_f64() + eps * mv;
        let den_lo = d.abs_f64() - eps * md;
        if den_lo <= 0.0 {
            return Err(RootError::PrecisionExhausted);
        }
        let radius = (n as f64) * num_hi / den_lo * (1.0 + 1e-12) + 1e-295;
        balls.push(ComplexBall { center: z, radius });
    }
    for i in 0..balls.len() {
        for j in (i + 1)..balls.len() {
            if !balls[i].disjoint(&balls[j]) {
                return Err(RootError::PrecisionExhausted);
            }
        }
    }
    balls.sort_by(|a, b| {
        let (ar, ai) = (a.center.re.to_f64(), a.center.im.to_f64());
        let (br, bi) = (b.center.re.to_f64(), b.center.im.to_f64());
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    Ok(balls)
}

/// All complex roots of `f` with multiplicities, as certified disjoint balls.
pub fn complex_roots(f: &ZPoly) -> Result<Vec<(ComplexBall, u32)>, RootError> {
    if f.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let parts = squarefree_decomposition(f);
    let mut out: Vec<(ComplexBall, u32)> = Vec::new();
    for (g, e) in &parts {
        for ball in roots_squarefree(g)? {
            out.push((ball, *e));
        }
    }
    // Distinct squarefree parts are coprime, so cross-part balls must
    // separate as well; certify rather than assume.
    for i in 0..out.len() {
        for j in (i + 1)..out.len() {
            if !out[i].0.disjoint(&out[j].0) {
                return Err(RootError::PrecisionExhausted);
            }
        }
    }
    out.sort_by(|a, b| {
        let (ar, ai) = (a.0.center.re.to_f64(), a.0.center.im.to_f64());
        let (br, bi) = (b.0.center.re.to_f64(), b.0.center.im.to_f64());
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::QPoly;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    fn zp(coeffs: &[i64]) -> ZPoly {
        ZPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn quadratic_pure_imaginary() {
        // x^2 + 1
        let roots = complex_roots(&zp(&[1, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        for (ball, mult) in &roots {
            assert_eq!(*mult, 1);
            assert!(ball.radius < 1e-25);
            assert!(ball.center.re.to_f64().abs() < 1e-25);
            assert!((ball.center.im.to_f64().abs() - 1.0).abs() < 1e-25);
        }
        assert!(roots[0].0.center.im.to_f64() < 0.0);
        assert!(roots[1].0.center.im.to_f64() > 0.0);
    }

    #[test]
    fn cube_root_of_two_matches_bisection() {
        // Independent check: bisect x^3 - 2 on [1,2] in exact arithmetic.
        let f = QPoly::from_i64(&[-2, 0, 0, 1]);
        let mut lo = BigRational::from(BigInt::from(1));
        let mut hi = BigRational::from(BigInt::from(2));
        for _ in 0..120 {
            let mid = (&lo + &hi) / BigRational::from(BigInt::from(2));
            if f.eval(&mid).is_negative() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lo_f = crate::arith::rational_to_f64(&lo);

        let roots = complex_roots(&zp(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(roots.len(), 3);
        let real: Vec<_> = roots.iter().filter(|(b, _)| b.maybe_real()).collect();
        assert_eq!(real.len(), 1);
        let r = real[0].0;
        assert!(r.radius < 1e-25);
        assert!((r.center.re.to_f64() - lo_f).abs() < 1e-12);
        assert!(r.center.re.to_f64() > 1.2599210 && r.center.re.to_f64() < 1.2599211);
    }

    #[test]
    fn double_root_multiplicity() {
        // (x - 1)^2
        let roots = complex_roots(&zp(&[1, -2, 1])).unwrap();
        assert_eq!(roots.len(), 1);
        let (ball, mult) = roots[0];
        assert_eq!(mult, 2);
        assert!(ball.contains_within(CDd::new(1.0, 0.0), 0.0));
    }

    #[test]
    fn ten_integer_roots() {
        // prod_{k=1..10} (x - k)
        let mut f = QPoly::one();
        for k in 1..=10i64 {
            f = f.mul(&QPoly::from_i64(&[-k, 1]));
        }
        let (fz, den) = f.clear_denominators();
        assert!(den.is_one());
        let roots = complex_roots(&fz).unwrap();
        assert_eq!(roots.len(), 10);
        for (k, (ball, mult)) in (1..=10i64).zip(roots.iter()) {
            assert_eq!(*mult, 1);
            assert!(ball.radius < 1e-6, "radius {} too big", ball.radius);
            assert!((ball.center.re.to_f64() - k as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn mixed_multiplicities() {
        // (x^2 + 1)^2 (x - 3)
        let sq = zp(&[1, 0, 1]);
        let f = sq.mul(&sq).mul(&zp(&[-3, 1]));
        let roots = complex_roots(&f).unwrap();
        assert_eq!(roots.len(), 3);
        let mults: Vec<u32> = roots.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults.iter().filter(|&&m| m == 2).count(), 2);
        assert_eq!(mults.iter().filter(|&&m| m == 1).count(), 1);
    }

    #[test]
    fn large_coefficients_moderate_roots() {
        // x^4 - 10^30 stays within reach because the error analysis tracks
        // coefficient magnitude, not just degree.
        let big = BigInt::from(10u64).pow(30u32);
        let f = ZPoly::from_coeffs(vec![
            -big,
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::one(),
        ]);
        let roots = complex_roots(&f).unwrap();
        assert_eq!(roots.len(), 4);
        let expect = 1e30f64.powf(0.25);
        for (ball, _) in &roots {
            assert!((ball.center.abs_f64() - expect).abs() < 1e-3);
            assert!(ball.radius < 1e-10);
        }
    }
}
