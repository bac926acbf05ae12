//! Double-double arithmetic: unevaluated sums `hi + lo` of two f64 giving
//! roughly 106 bits of significand. Used to polish complex roots past f64
//! precision so that certified radii land well below requested tolerances.
//!
//! Only the operations needed by the root refiner are implemented. Error-free
//! transforms follow Dekker/Knuth; renormalization after every operation.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles as a Dd.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Dd {
        let (s, e) = two_sum(a, b);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s1, e1) = two_sum(self.hi, o.hi);
        let e = e1 + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s1, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p, e0) = two_prod(self.hi, o.hi);
        let e = e0 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r2 = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r2.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd::from_sum(hi, lo + q3)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: f64, im: f64) -> CDd {
        CDd {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    #[inline]
    pub fn from_parts(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    #[inline]
    pub fn from_dd(re: Dd) -> CDd {
        CDd { re, im: Dd::ZERO }
    }

    #[inline]
    pub fn add(self, o: CDd) -> CDd {
        CDd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    #[inline]
    pub fn sub(self, o: CDd) -> CDd {
        CDd {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    #[inline]
    pub fn mul(self, o: CDd) -> CDd {
        CDd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    #[inline]
    pub fn div(self, o: CDd) -> CDd {
        let den = o.re.mul(o.re).add(o.im.mul(o.im));
        let nre = self.re.mul(o.re).add(self.im.mul(o.im));
        let nim = self.im.mul(o.re).sub(self.re.mul(o.im));
        CDd {
            re: nre.div(den),
            im: nim.div(den),
        }
    }

    /// |z| in plain f64; adequate for radius bookkeeping.
    #[inline]
    pub fn abs_f64(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_cancelled_bits() {
        // (1 + 2^-70) - 1 vanishes in f64 but not in Dd built by exact sums.
        let tiny = (2.0f64).powi(-70);
        let x = Dd::from_f64(1.0).add(Dd::from_f64(tiny));
        let y = x.sub(Dd::from_f64(1.0));
        assert_eq!(y.to_f64(), tiny);
    }

    #[test]
    fn dd_division_accuracy() {
        let third = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let back = third.mul(Dd::from_f64(3.0)).sub(Dd::ONE);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_square_of_i() {
        let i = CDd::new(0.0, 1.0);
        let m = i.mul(i);
        assert!((m.re.to_f64() + 1.0).abs() < 1e-30);
        assert!(m.im.to_f64().abs() < 1e-30);
    }
}
