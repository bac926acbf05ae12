//! A minimal field abstraction so group laws and power-series kernels can
//! run over Q or over a number field without duplication. Implementations
//! are exact; `inv` panics on zero (callers gate on `is_zero`).

use crate::nf::{NfElement, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait Field {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, r: &BigRational) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }
    fn from_rational(&self, r: &BigRational) -> BigRational {
        r.clone()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        BigRational::one() / a
    }
}

impl Field for NumberField {
    type Elem = NfElement;

    fn zero(&self) -> NfElement {
        NumberField::zero(self)
    }
    fn one(&self) -> NfElement {
        NumberField::one(self)
    }
    fn from_i64(&self, n: i64) -> NfElement {
        NumberField::from_int(self, n)
    }
    fn from_rational(&self, r: &BigRational) -> NfElement {
        NumberField::from_rational(self, r.clone())
    }
    fn is_zero(&self, a: &NfElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &NfElement, b: &NfElement) -> NfElement {
        NumberField::add(self, a, b)
    }
    fn sub(&self, a: &NfElement, b: &NfElement) -> NfElement {
        NumberField::sub(self, a, b)
    }
    fn neg(&self, a: &NfElement) -> NfElement {
        NumberField::neg(self, a)
    }
    fn mul(&self, a: &NfElement, b: &NfElement) -> NfElement {
        NumberField::mul(self, a, b)
    }
    fn inv(&self, a: &NfElement) -> NfElement {
        NumberField::inv(self, a)
    }
}
