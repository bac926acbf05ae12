//! Truncated p-adic arithmetic in unramified extensions, Frobenius lifts,
//! the unramified metric estimate, and formal groups of elliptic curves up
//! to the multiplication-by-p series whose T^(p^2) coefficient carries the
//! supersingular sign.
//!
//! Elements of Z_{p^f} are stored to a fixed precision p^k as coordinate
//! vectors over Z/p^k against a monic degree-f defining polynomial whose
//! reduction is the smallest-base-p-value irreducible over F_p (the same
//! choice the exhaustive finite-field kernels make, so the two towers agree
//! residue by residue).  k defaults to 20 and p^k must fit a machine word;
//! that covers every prime this crate certifies and keeps the 10^4-element
//! batch checks cheap.

use crate::elliptic::{CurveError, CurveQ};
use crate::field::Field;
use crate::fq::FqField;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_PRECISION: u32 = 20;

#[derive(Debug, Error)]
pub enum PadicError {
    #[error("{p}^{k} does not fit the word-sized coefficient domain")]
    PrecisionOverflow { p: u64, k: u32 },
    #[error("element vanishes to working precision p^{k}")]
    BelowPrecision { k: u32 },
    #[error("inverse of a non-unit")]
    NonUnit,
    #[error("curve is ordinary at {p}: a_p = {ap}")]
    NotSupersingular { p: u64, ap: i64 },
    #[error("truncation order {have} too small: need at least {need}")]
    TruncationTooSmall { have: usize, need: usize },
    #[error("truncation order {t} out of the supported range")]
    TruncationOutOfRange { t: usize },
    #[error("curve model is not integral")]
    NonIntegralModel,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

// ---------------------------------------------------------------------------
// Unramified extensions at fixed precision

struct UnrData {
    p: u64,
    f: usize,
    k: u32,
    pk: u64,
    /// Monic defining polynomial, length f+1, coefficients lifted from the
    /// residue field's presentation (values < p).
    g: Vec<u64>,
    /// Coordinates of theta'^j for j < f, where theta' is the Hensel root of
    /// g congruent to theta^p mod p.  Applying Frobenius is a vector-matrix
    /// product against these rows.
    frob_rows: Vec<Vec<u64>>,
}

/// Z_{p^f} mod p^k: the ring of integers of the unramified extension of
/// degree f, truncated at precision k.
#[derive(Clone)]
pub struct UnramifiedExtension(Arc<UnrData>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedElement {
    coords: Vec<u64>,
}

impl std::fmt::Debug for UnramifiedExtension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z_{{{}^{}}} mod {}^{}", self.0.p, self.0.f, self.0.p, self.0.k)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl UnramifiedExtension {
    pub fn new(p: u64, f: usize, k: u32) -> Result<UnramifiedExtension, PadicError> {
        let mut pk: u64 = 1;
        for _ in 0..k {
            pk = pk
                .checked_mul(p)
                .ok_or(PadicError::PrecisionOverflow { p, k })?;
        }
        let g = FqField::new(p, f).defining_coeffs().to_vec();
        let mut ext = UnramifiedExtension(Arc::new(UnrData {
            p,
            f,
            k,
            pk,
            g,
            frob_rows: Vec::new(),
        }));
        let rows = ext.build_frobenius();
        Arc::get_mut(&mut ext.0).unwrap().frob_rows = rows;
        Ok(ext)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn degree(&self) -> usize {
        self.0.f
    }
    pub fn precision(&self) -> u32 {
        self.0.k
    }

    pub fn zero(&self) -> UnramifiedElement {
        UnramifiedElement {
            coords: vec![0; self.0.f],
        }
    }

    pub fn one(&self) -> UnramifiedElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> UnramifiedElement {
        let mut coords = vec![0; self.0.f];
        coords[0] = n % self.0.pk;
        UnramifiedElement { coords }
    }

    pub fn from_i64(&self, n: i64) -> UnramifiedElement {
        let r = n.rem_euclid(self.0.pk as i64);
        self.from_u64(r as u64)
    }

    /// Reduce a big integer into Z/p^k.
    pub fn from_bigint(&self, n: &BigInt) -> UnramifiedElement {
        let m = BigInt::from(self.0.pk);
        self.from_u64(n.mod_floor(&m).to_u64().expect("reduced below p^k"))
    }

    pub fn from_coords(&self, coords: &[u64]) -> UnramifiedElement {
        assert_eq!(coords.len(), self.0.f, "coordinate length mismatch");
        UnramifiedElement {
            coords: coords.iter().map(|c| c % self.0.pk).collect(),
        }
    }

    pub fn coords<'a>(&self, e: &'a UnramifiedElement) -> &'a [u64] {
        &e.coords
    }

    pub fn theta(&self) -> UnramifiedElement {
        let mut coords = vec![0; self.0.f];
        if self.0.f > 1 {
            coords[1] = 1;
        }
        UnramifiedElement { coords }
    }

    pub fn is_zero(&self, e: &UnramifiedElement) -> bool {
        e.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &UnramifiedElement, b: &UnramifiedElement) -> UnramifiedElement {
        let pk = self.0.pk;
        UnramifiedElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= pk {
                        s - pk
                    } else {
                        s
                    }
                })
                .collect(),
        }
    }

    pub fn neg(&self, a: &UnramifiedElement) -> UnramifiedElement {
        let pk = self.0.pk;
        UnramifiedElement {
            coords: a
                .coords
                .iter()
                .map(|&x| if x == 0 { 0 } else { pk - x })
                .collect(),
        }
    }

    pub fn sub(&self, a: &UnramifiedElement, b: &UnramifiedElement) -> UnramifiedElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &UnramifiedElement, b: &UnramifiedElement) -> UnramifiedElement {
        let f = self.0.f;
        let pk = self.0.pk;
        let mut conv = vec![0u64; 2 * f - 1];
        for (i, &x) in a.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coords.iter().enumerate() {
                if y != 0 {
                    let t = conv[i + j] as u128 + x as u128 * y as u128;
                    conv[i + j] = (t % pk as u128) as u64;
                }
            }
        }
        // reduce by the monic defining polynomial
        while conv.len() > f {
            let top = conv.pop().unwrap();
            if top == 0 {
                continue;
            }
            let d = conv.len() - f;
            for i in 0..f {
                let gi = self.0.g[i];
                if gi != 0 {
                    let t = mulmod(top, gi, pk);
                    let cur = conv[d + i];
                    conv[d + i] = if cur >= t { cur - t } else { cur + pk - t };
                }
            }
        }
        conv.resize(f, 0);
        UnramifiedElement { coords: conv }
    }

    pub fn pow(&self, a: &UnramifiedElement, mut e: u64) -> UnramifiedElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// v = max exponent with e = 0 mod p^v; in an unramified extension this
    /// is the minimum coordinate valuation since 1, theta, ... is a basis of
    /// the integers.
    pub fn valuation(&self, e: &UnramifiedElement) -> Result<u32, PadicError> {
        if self.is_zero(e) {
            return Err(PadicError::BelowPrecision { k: self.0.k });
        }
        let p = self.0.p;
        let mut best = u32::MAX;
        for &c in &e.coords {
            if c == 0 {
                continue;
            }
            let mut v = 0;
            let mut cc = c;
            while cc % p == 0 {
                cc /= p;
                v += 1;
            }
            best = best.min(v);
        }
        Ok(best)
    }

    pub fn is_unit(&self, e: &UnramifiedElement) -> bool {
        matches!(self.valuation(e), Ok(0))
    }

    /// Inverse of a unit: invert in the residue field, then Newton-lift
    /// (w <- w(2 - aw)) doubling the correct digits each step.
    pub fn inv(&self, a: &UnramifiedElement) -> Result<UnramifiedElement, PadicError> {
        if !self.is_unit(a) {
            return Err(PadicError::NonUnit);
        }
        let fq = FqField::new(self.0.p, self.0.f);
        let abar = fq.from_coords(
            &a.coords
                .iter()
                .map(|&c| c % self.0.p)
                .collect::<Vec<_>>(),
        );
        let mut w = self.from_coords(&{
            let inv0 = fq.inv(&abar);
            let mut v = fq.coords(&inv0).to_vec();
            v.resize(self.0.f, 0);
            v
        });
        let two = self.from_u64(2);
        // k <= 2^6 digits: six doublings always suffice
        for _ in 0..7 {
            let aw = self.mul(a, &w);
            w = self.mul(&w, &self.sub(&two, &aw));
        }
        debug_assert!(self.mul(a, &w) == self.one());
        Ok(w)
    }

    fn g_eval(&self, t: &UnramifiedElement) -> UnramifiedElement {
        let mut acc = self.from_u64(self.0.g[self.0.f]);
        for i in (0..self.0.f).rev() {
            acc = self.add(&self.mul(&acc, t), &self.from_u64(self.0.g[i]));
        }
        acc
    }

    fn g_deriv_eval(&self, t: &UnramifiedElement) -> UnramifiedElement {
        let mut acc = self.zero();
        for i in (1..=self.0.f).rev() {
            acc = self.mul(&acc, t);
            if self.0.g[i] != 0 {
                acc = self.add(&acc, &self.from_u64((i as u64 % self.0.pk) * self.0.g[i] % self.0.pk));
            }
        }
        acc
    }

    /// Rows of the Frobenius matrix: Newton-lift theta^p to the root of g it
    /// reduces to, then tabulate its powers.
    fn build_frobenius(&self) -> Vec<Vec<u64>> {
        let f = self.0.f;
        if f == 1 {
            return vec![vec![1]];
        }
        let mut t = self.pow(&self.theta(), self.0.p);
        // g separable mod p, so g'(t) stays a unit along the lift
        for _ in 0..7 {
            let num = self.g_eval(&t);
            let den = self.inv(&self.g_deriv_eval(&t)).expect("separable root");
            t = self.sub(&t, &self.mul(&num, &den));
        }
        debug_assert!(self.is_zero(&self.g_eval(&t)));
        let mut rows = Vec::with_capacity(f);
        let mut pw = self.one();
        for _ in 0..f {
            rows.push(pw.coords.clone());
            pw = self.mul(&pw, &t);
        }
        rows
    }

    /// The lift of x -> x^p: acts on coordinates through the tabulated
    /// root image, so it is a ring automorphism by construction.
    pub fn frobenius(&self, e: &UnramifiedElement) -> UnramifiedElement {
        let mut acc = self.zero();
        for (j, &c) in e.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let row = UnramifiedElement {
                coords: self.0.frob_rows[j].clone(),
            };
            acc = self.add(&acc, &self.mul(&self.from_u64(c), &row));
        }
        acc
    }

    /// phi_q = phi_p^2, the relative Frobenius over Q_{p^2}.
    pub fn frobenius_q(&self, e: &UnramifiedElement) -> UnramifiedElement {
        self.frobenius(&self.frobenius(e))
    }

    /// Teichmueller representative: the p^f-power fixed point congruent to e
    /// mod p.  Iterating x -> x^{p^f} gains a digit per step.
    pub fn teichmuller(&self, e: &UnramifiedElement) -> UnramifiedElement {
        let q = self.0.p.pow(self.0.f as u32);
        let mut x = e.clone();
        for _ in 0..self.0.k + 1 {
            let nxt = self.pow(&x, q);
            if nxt == x {
                return x;
            }
            x = nxt;
        }
        x
    }
}

// ---------------------------------------------------------------------------
// The unramified metric estimate

/// One checked instance of the estimate
///   |phi_q(a) - a^q|_p <= p^{-1} max{1,|phi_q(a)|_p} max{1,|a|_p}^q
/// with q = p^2.  Valuations are exact integers; `vacuous` marks a
/// difference that vanishes to working precision (reported as a pass with
/// the precision note, never silently).
#[derive(Clone, Debug, Serialize)]
pub struct Metric2Outcome {
    pub pass: bool,
    pub vacuous: bool,
    /// v(phi_q(a) - a^q), None when vacuous.
    pub lhs_valuation: Option<u32>,
    /// Required lower bound for the valuation: 1 for integral elements.
    pub rhs_valuation: i64,
    /// The same comparison for a^{-1} (the non-integral branch of the
    /// estimate), present when the element is a non-unit and the branch was
    /// requested: (lhs shifted, rhs shifted) as exact integers.
    pub inverse_branch: Option<(i64, i64)>,
}

/// Check the metric estimate for one element.  Integral elements make both
/// max-terms 1, so the claim is v(phi_q(a) - a^q) >= 1.  For a non-unit a
/// with v(a) = v > 0 the inverse a^{-1} has negative valuation -v; writing
/// phi_q(a^{-1}) - a^{-q} = -(phi_q(a) - a^q) / (phi_q(a) a^q) shifts both
/// sides of the estimate by -(q+1)v, which the branch reports explicitly.
pub fn check_metric2(
    ext: &UnramifiedExtension,
    a: &UnramifiedElement,
    include_inverse_branch: bool,
) -> Metric2Outcome {
    let q = ext.p() * ext.p();
    let phi = ext.frobenius_q(a);
    let aq = ext.pow(a, q);
    let diff = ext.sub(&phi, &aq);
    let va = ext.valuation(a).unwrap_or(ext.precision());
    match ext.valuation(&diff) {
        Err(_) => Metric2Outcome {
            pass: true,
            vacuous: true,
            lhs_valuation: None,
            rhs_valuation: 1,
            inverse_branch: None,
        },
        Ok(v) => {
            let shift = (q as i64 + 1) * va as i64;
            let branch = if include_inverse_branch && va > 0 {
                Some((v as i64 - shift, 1 - shift))
            } else {
                None
            };
            Metric2Outcome {
                pass: v >= 1 && branch.map_or(true, |(l, r)| l >= r),
                vacuous: false,
                lhs_valuation: Some(v),
                rhs_valuation: 1,
                inverse_branch: branch,
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Metric2BatchReport {
    pub p: u64,
    pub f: usize,
    pub precision: u32,
    pub samples: usize,
    pub seed: u64,
    pub passes: usize,
    pub vacuous: usize,
    pub inverse_branch_checked: usize,
    pub failures: usize,
}

/// Seeded batch of metric-estimate checks mixing units with elements pushed
/// to positive valuation, the latter exercising the non-integral branch.
pub fn run_metric2_batch(
    p: u64,
    f: usize,
    samples: usize,
    seed: u64,
) -> Result<Metric2BatchReport, PadicError> {
    let ext = UnramifiedExtension::new(p, f, DEFAULT_PRECISION)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 8) ^ f as u64);
    let mut report = Metric2BatchReport {
        p,
        f,
        precision: DEFAULT_PRECISION,
        samples,
        seed,
        passes: 0,
        vacuous: 0,
        inverse_branch_checked: 0,
        failures: 0,
    };
    for i in 0..samples {
        let mut coords = vec![0u64; f];
        for c in coords.iter_mut() {
            *c = rng.gen_range(0..ext.0.pk);
        }
        // a spread of valuations, weighted toward units
        let bump = match i % 5 {
            3 => 1u32,
            4 => rng.gen_range(1..=3),
            _ => 0,
        };
        let mut e = ext.from_coords(&coords);
        if bump > 0 {
            e = ext.mul(&e, &ext.from_u64(ext.0.p.pow(bump)));
        }
        if ext.is_zero(&e) {
            e = ext.one();
        }
        let out = check_metric2(&ext, &e, true);
        if out.pass {
            report.passes += 1;
        } else {
            report.failures += 1;
        }
        if out.vacuous {
            report.vacuous += 1;
        }
        if out.inverse_branch.is_some() {
            report.inverse_branch_checked += 1;
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Truncated power series over an exact field

/// Coefficients c[0..=prec], exponent by index, truncated beyond prec.
/// A thin context so the same machinery runs over Q and over number fields.
pub struct SeriesCtx<'a, F: Field> {
    pub k: &'a F,
    pub prec: usize,
}

pub type Series<F> = Vec<<F as Field>::Elem>;

impl<'a, F: Field> SeriesCtx<'a, F> {
    pub fn new(k: &'a F, prec: usize) -> Self {
        SeriesCtx { k, prec }
    }

    pub fn zero(&self) -> Series<F> {
        vec![self.k.zero(); self.prec + 1]
    }

    pub fn identity(&self) -> Series<F> {
        let mut s = self.zero();
        if self.prec >= 1 {
            s[1] = self.k.one();
        }
        s
    }

    pub fn add(&self, a: &Series<F>, b: &Series<F>) -> Series<F> {
        a.iter().zip(b).map(|(x, y)| self.k.add(x, y)).collect()
    }

    pub fn sub(&self, a: &Series<F>, b: &Series<F>) -> Series<F> {
        a.iter().zip(b).map(|(x, y)| self.k.sub(x, y)).collect()
    }

    pub fn scale(&self, a: &Series<F>, c: &F::Elem) -> Series<F> {
        a.iter().map(|x| self.k.mul(x, c)).collect()
    }

    pub fn mul(&self, a: &Series<F>, b: &Series<F>) -> Series<F> {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate().take(self.prec + 1) {
            if self.k.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(self.prec + 1 - i) {
                if !self.k.is_zero(y) {
                    out[i + j] = self.k.add(&out[i + j], &self.k.mul(x, y));
                }
            }
        }
        out
    }

    /// Compose a(b(T)); requires b(0) = 0.
    pub fn compose(&self, a: &Series<F>, b: &Series<F>) -> Series<F> {
        assert!(self.k.is_zero(&b[0]), "inner series must vanish at 0");
        let mut out = self.zero();
        // Horner from the top coefficient down
        for x in a.iter().rev() {
            out = self.mul(&out, b);
            out[0] = self.k.add(&out[0], x);
        }
        out
    }

    /// Multiplicative inverse of a series with unit constant term.
    pub fn invert_unit(&self, a: &Series<F>) -> Series<F> {
        assert!(!self.k.is_zero(&a[0]), "series not invertible");
        let c0 = self.k.inv(&a[0]);
        let mut out = self.zero();
        out[0] = c0.clone();
        for n in 1..=self.prec {
            let mut acc = self.k.zero();
            for i in 1..=n {
                if !self.k.is_zero(&a[i]) {
                    acc = self.k.add(&acc, &self.k.mul(&a[i], &out[n - i]));
                }
            }
            out[n] = self.k.neg(&self.k.mul(&acc, &c0));
        }
        out
    }

    pub fn derivative(&self, a: &Series<F>) -> Series<F> {
        let mut out = self.zero();
        for i in 1..=self.prec {
            out[i - 1] = self.k.mul(&a[i], &self.k.from_i64(i as i64));
        }
        out
    }

    /// Term-by-term antiderivative with zero constant.
    pub fn integrate(&self, a: &Series<F>) -> Series<F> {
        let mut out = self.zero();
        for i in 0..self.prec {
            if !self.k.is_zero(&a[i]) {
                out[i + 1] = self.k.div(&a[i], &self.k.from_i64(i as i64 + 1));
            }
        }
        out
    }

    /// Compositional inverse of a series with a(0) = 0, a'(0) = 1, solved
    /// coefficient by coefficient from b(a(T)) = T.
    pub fn reversion(&self, a: &Series<F>) -> Series<F> {
        assert!(self.k.is_zero(&a[0]) && a[1] == self.k.one());
        let mut b = self.zero();
        if self.prec >= 1 {
            b[1] = self.k.one();
        }
        // powers of a, built incrementally; index 0 is never consulted
        let mut pows: Vec<Series<F>> = vec![self.zero(), a.clone()];
        for _ in 2..=self.prec {
            let nxt = self.mul(pows.last().unwrap(), a);
            pows.push(nxt);
        }
        for n in 2..=self.prec {
            // coefficient of T^n in sum_{m<n} b_m a^m must cancel
            let mut acc = self.k.zero();
            for m in 1..n {
                if !self.k.is_zero(&b[m]) {
                    acc = self.k.add(&acc, &self.k.mul(&b[m], &pows[m][n]));
                }
            }
            // a^n has leading coefficient 1 at T^n
            b[n] = self.k.neg(&acc);
        }
        b
    }
}

// ---------------------------------------------------------------------------
// Laurent series T^shift * (regular series), for the curve coordinates

struct Laurent<F: Field> {
    shift: i64,
    body: Series<F>, // body[0] is the coefficient of T^shift; body[0] != 0
}

impl<F: Field> Laurent<F> {
    fn mul(ctx: &SeriesCtx<F>, a: &Laurent<F>, b: &Laurent<F>) -> Laurent<F> {
        Laurent {
            shift: a.shift + b.shift,
            body: ctx.mul(&a.body, &b.body),
        }
    }

    fn inv(ctx: &SeriesCtx<F>, a: &Laurent<F>) -> Laurent<F> {
        Laurent {
            shift: -a.shift,
            body: ctx.invert_unit(&a.body),
        }
    }

    fn add(ctx: &SeriesCtx<F>, a: &Laurent<F>, b: &Laurent<F>) -> Laurent<F> {
        let shift = a.shift.min(b.shift);
        let mut body = ctx.zero();
        for (i, c) in a.body.iter().enumerate() {
            let e = (a.shift - shift) as usize + i;
            if e <= ctx.prec {
                body[e] = ctx.k.add(&body[e], c);
            }
        }
        for (i, c) in b.body.iter().enumerate() {
            let e = (b.shift - shift) as usize + i;
            if e <= ctx.prec {
                body[e] = ctx.k.add(&body[e], c);
            }
        }
        Laurent { shift, body }
    }

    fn scale(ctx: &SeriesCtx<F>, a: &Laurent<F>, c: &<F as Field>::Elem) -> Laurent<F> {
        Laurent {
            shift: a.shift,
            body: ctx.scale(&a.body, c),
        }
    }

    /// The regular (power-series) part as a plain series; panics if any
    /// negative exponent carries a nonzero coefficient.
    fn regular(&self, ctx: &SeriesCtx<F>) -> Series<F> {
        let mut out = ctx.zero();
        for (i, c) in self.body.iter().enumerate() {
            let e = self.shift + i as i64;
            if e < 0 {
                assert!(ctx.k.is_zero(c), "unexpected pole");
            } else if (e as usize) <= ctx.prec {
                out[e as usize] = ctx.k.add(&out[e as usize], c);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Formal group of y^2 = x^3 + a x + b

/// Bivariate truncated series: c[i][j] is the coefficient of T1^i T2^j,
/// kept for i + j <= prec.
pub struct BivarSeries<F: Field> {
    pub c: Vec<Vec<<F as Field>::Elem>>,
    pub prec: usize,
}

/// The formal group attached to a short Weierstrass model, over any exact
/// field of characteristic zero.  The parameter is T = -x/y; the w-series
/// w = T^3 + a T w^2 + b w^3 (w = -1/y) defines the coordinate expansions,
/// the invariant differential integrates to the logarithm, and its
/// reversion is the exponential.  Everything downstream is composition.
pub struct FormalGroup<F: Field> {
    pub field: F,
    pub prec: usize,
    log: Series<F>,
    exp: Series<F>,
}

impl<F: Field> FormalGroup<F> {
    pub fn new(field: F, a: &F::Elem, b: &F::Elem, prec: usize) -> Result<FormalGroup<F>, PadicError> {
        if prec < 3 || prec > 64 {
            return Err(PadicError::TruncationOutOfRange { t: prec });
        }
        // Shifting w down by 3 to get u discards the top three coefficients
        // and the differential recovers only one T-degree of them, so the
        // whole chain up to the logarithm runs two degrees past the target.
        let ctx = SeriesCtx::new(&field, prec + 2);
        // w = T^3 + a T w^2 + b w^3, iterated to the fixed point; each pass
        // is exact one T-degree further, so prec + 2 passes certainly converge.
        let mut w = ctx.zero();
        w[3] = field.one();
        let t = ctx.identity();
        for _ in 0..prec + 2 {
            let w2 = ctx.mul(&w, &w);
            let w3 = ctx.mul(&w2, &w);
            let mut nxt = ctx.add(&ctx.scale(&ctx.mul(&t, &w2), a), &ctx.scale(&w3, b));
            nxt[3] = field.add(&nxt[3], &field.one());
            if nxt == w {
                break;
            }
            w = nxt;
        }
        // w = T^3 u with u a unit series; x = T/w, y = -1/w
        let mut u = ctx.zero();
        for i in 0..=prec - 1 {
            u[i] = w[i + 3].clone();
        }
        let uinv = ctx.invert_unit(&u);
        let x: Laurent<F> = Laurent {
            shift: -2,
            body: uinv.clone(),
        };
        let y: Laurent<F> = Laurent {
            shift: -3,
            body: ctx.scale(&uinv, &field.from_i64(-1)),
        };
        // invariant differential dx/2y, normalized to 1 + O(T)
        let xprime: Laurent<F> = {
            let mut body = ctx.zero();
            for (i, c) in x.body.iter().enumerate() {
                let e = x.shift + i as i64;
                body[i] = field.mul(c, &field.from_i64(e));
            }
            Laurent {
                shift: x.shift - 1,
                body,
            }
        };
        let omega = Laurent::mul(
            &ctx,
            &xprime,
            &Laurent::inv(&ctx, &Laurent::scale(&ctx, &y, &field.from_i64(2))),
        );
        assert_eq!(omega.shift, 0, "differential must be regular");
        let omega_reg = omega.regular(&ctx);
        assert!(omega_reg[0] == field.one(), "differential not normalized");
        let log = ctx.integrate(&omega_reg);
        let exp = ctx.reversion(&log);
        Ok(FormalGroup {
            field,
            prec,
            log,
            exp,
        })
    }

    pub fn from_curve(curve: &CurveQ, prec: usize) -> Result<FormalGroup<crate::field::Rationals>, PadicError> {
        if !curve.is_integral() {
            return Err(PadicError::NonIntegralModel);
        }
        FormalGroup::new(
            crate::field::Rationals,
            &curve.a,
            &curve.b,
            prec,
        )
    }

    pub fn logarithm(&self) -> &Series<F> {
        &self.log
    }

    pub fn exponential(&self) -> &Series<F> {
        &self.exp
    }

    /// [m](T) = exp(m log T).
    pub fn mul_by(&self, m: i64) -> Series<F> {
        let ctx = SeriesCtx::new(&self.field, self.prec);
        let scaled = ctx.scale(&self.log, &self.field.from_i64(m));
        ctx.compose(&self.exp, &scaled)
    }

    /// The formal inverse i(T) = exp(-log T).
    pub fn inverse_series(&self) -> Series<F> {
        self.mul_by(-1)
    }

    /// The group law F(T1, T2) = exp(log T1 + log T2), assembled through
    /// binomial expansion of the powers of the two logarithms.
    pub fn addition_law(&self) -> BivarSeries<F> {
        let k = &self.field;
        let prec = self.prec;
        let ctx = SeriesCtx::new(k, prec);
        // powers of log
        let mut lp: Vec<Series<F>> = vec![ctx.zero(); prec + 1];
        lp[0] = {
            let mut s = ctx.zero();
            s[0] = k.one();
            s
        };
        for i in 1..=prec {
            lp[i] = ctx.mul(&lp[i - 1], &self.log);
        }
        // binomials as field elements
        let mut binom = vec![vec![k.zero(); prec + 1]; prec + 1];
        for n in 0..=prec {
            binom[n][0] = k.one();
            for r in 1..=n {
                binom[n][r] = if r == n {
                    k.one()
                } else {
                    k.add(&binom[n - 1][r - 1], &binom[n - 1][r])
                };
            }
        }
        let mut c = vec![vec![k.zero(); prec + 1]; prec + 1];
        for (n, en) in self.exp.iter().enumerate().take(prec + 1) {
            if k.is_zero(en) {
                continue;
            }
            for r in 0..=n {
                let w = k.mul(en, &binom[n][r]);
                // contribution of C(n, r) L(T1)^r L(T2)^(n-r)
                for (i, ci) in lp[r].iter().enumerate().take(prec + 1) {
                    if k.is_zero(ci) {
                        continue;
                    }
                    for (j, cj) in lp[n - r].iter().enumerate().take(prec + 1 - i) {
                        if !k.is_zero(cj) {
                            c[i][j] = k.add(&c[i][j], &k.mul(&w, &k.mul(ci, cj)));
                        }
                    }
                }
            }
        }
        BivarSeries { c, prec }
    }

    /// Substitute univariate series (vanishing at 0) into the group law.
    pub fn eval_law(&self, law: &BivarSeries<F>, s1: &Series<F>, s2: &Series<F>) -> Series<F> {
        let k = &self.field;
        let ctx = SeriesCtx::new(k, self.prec);
        assert!(k.is_zero(&s1[0]) && k.is_zero(&s2[0]));
        let mut p1: Vec<Series<F>> = vec![ctx.zero(); self.prec + 1];
        let mut p2: Vec<Series<F>> = vec![ctx.zero(); self.prec + 1];
        p1[0] = {
            let mut s = ctx.zero();
            s[0] = k.one();
            s
        };
        p2[0] = p1[0].clone();
        for i in 1..=self.prec {
            p1[i] = ctx.mul(&p1[i - 1], s1);
            p2[i] = ctx.mul(&p2[i - 1], s2);
        }
        let mut out = ctx.zero();
        for i in 0..=self.prec {
            for j in 0..=self.prec - i {
                if !k.is_zero(&law.c[i][j]) {
                    let term = ctx.mul(&p1[i], &p2[j]);
                    out = ctx.add(&out, &ctx.scale(&term, &law.c[i][j]));
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Lubin-Tate signature

#[derive(Clone, Debug, Serialize)]
pub struct LubinTateReport {
    pub p: u64,
    pub q: u64,
    pub t_prec: usize,
    /// Balanced residue mod p of the T^q coefficient of [p](T).
    pub sign: i64,
    /// All T^i coefficients with 1 <= i < q vanish mod p.
    pub low_window_zero: bool,
    /// All T^i coefficients with q < i <= t_prec vanish mod p.
    pub high_window_zero: bool,
    /// T^1 coefficient equals p exactly.
    pub linear_is_p: bool,
}

fn balanced_residue(n: &BigInt, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let r = n.mod_floor(&pb).to_i64().unwrap();
    if r > p as i64 / 2 {
        r - p as i64
    } else {
        r
    }
}

/// Congruence profile of [p](T) for a curve over Q supersingular at p: the
/// window below T^q dies mod p, the T^q coefficient reduces to the sign,
/// and the window above q dies mod p as well.
pub fn lubin_tate_signature(
    curve: &CurveQ,
    p: u64,
    t_prec: usize,
) -> Result<LubinTateReport, PadicError> {
    if !curve.is_integral() {
        return Err(PadicError::NonIntegralModel);
    }
    let q = p * p;
    if t_prec < (q + 1) as usize {
        return Err(PadicError::TruncationTooSmall {
            have: t_prec,
            need: (q + 1) as usize,
        });
    }
    let red = curve.reduce_mod(p)?;
    let (_, ap) = red.count_points()?;
    if ap != 0 {
        return Err(PadicError::NotSupersingular { p, ap });
    }
    let fg = FormalGroup::<crate::field::Rationals>::from_curve(curve, t_prec)?;
    let series = fg.mul_by(p as i64);
    let ints = integral_coefficients(&series);
    Ok(profile_report(&ints, p, t_prec))
}

/// [p](T) lies in Z[a,b][[T]], so exact rational coefficients must come out
/// integral; anything else is an arithmetic bug, not a math statement.
fn integral_coefficients(series: &[BigRational]) -> Vec<BigInt> {
    series
        .iter()
        .map(|c| {
            assert!(c.denom().is_one(), "integrality lost in exp/log cancellation");
            c.numer().clone()
        })
        .collect()
}

fn profile_report(ints: &[BigInt], p: u64, t_prec: usize) -> LubinTateReport {
    let q = (p * p) as usize;
    let pb = BigInt::from(p);
    let low_window_zero = (2..q).all(|i| ints[i].mod_floor(&pb).is_zero());
    let high_window_zero = (q + 1..=t_prec).all(|i| ints[i].mod_floor(&pb).is_zero());
    let linear_is_p = ints[1] == BigInt::from(p);
    LubinTateReport {
        p,
        q: q as u64,
        t_prec,
        sign: balanced_residue(&ints[q], p),
        low_window_zero,
        high_window_zero,
        linear_is_p,
    }
}

/// The quadratic-twist companion: y^2 = x^3 + 2u^2 x + 2u^3 b0-style models
/// over Q(sqrt 2) flip the sign of a_q, so [p](T) reduces to +T^q instead
/// of -T^q.  Computed exactly over the number field, then reduced through
/// the embedding sqrt(2) -> Hensel root in Z_{p^2}.
pub fn lubin_tate_signature_sqrt2_twist(p: u64, t_prec: usize) -> Result<LubinTateReport, PadicError> {
    use crate::nf::NumberField;
    use crate::poly::ZPoly;
    let q = (p * p) as usize;
    if t_prec < q + 1 {
        return Err(PadicError::TruncationTooSmall {
            have: t_prec,
            need: q + 1,
        });
    }
    let k = NumberField::new(ZPoly::from_coeffs(vec![
        BigInt::from(-2),
        BigInt::zero(),
        BigInt::one(),
    ]))
    .expect("x^2 - 2 is irreducible");
    // twist of y^2 = x^3 + 5x + 1 by u = sqrt(2): (a, b) -> (u^4 a, u^6 b)
    // = (10, 2 sqrt(2))
    let root2 = k.gen_elem();
    let a = k.from_int(10);
    let b = k.mul_rational(&root2, &BigRational::from(BigInt::from(2)));
    let fg = FormalGroup::new(k.clone(), &a, &b, t_prec)?;
    let series = fg.mul_by(p as i64);
    // reduce through sqrt(2) -> its Z_{p^2} image
    let ext = UnramifiedExtension::new(p, 2, DEFAULT_PRECISION)?;
    let s2 = hensel_sqrt(&ext, 2).expect("2 is a square in Z_{p^2}");
    let pk = BigInt::from(ext.0.pk);
    let images: Vec<UnramifiedElement> = series
        .iter()
        .map(|c| {
            let c0 = c.coords[0].clone();
            let c1 = c.coords[1].clone();
            assert!(
                c0.denom().is_one() && c1.denom().is_one(),
                "twist coefficients must be integral in Z[sqrt 2]"
            );
            let e0 = ext.from_bigint(&c0.numer().mod_floor(&pk));
            let e1 = ext.from_bigint(&c1.numer().mod_floor(&pk));
            ext.add(&e0, &ext.mul(&e1, &s2))
        })
        .collect();
    // congruence profile inside the extension
    let low_window_zero = (2..q).all(|i| ext.valuation(&images[i]).map_or(true, |v| v >= 1));
    let high_window_zero =
        (q + 1..=t_prec).all(|i| ext.valuation(&images[i]).map_or(true, |v| v >= 1));
    let linear_is_p = images[1] == ext.from_u64(p);
    // the T^q coefficient must reduce into the prime field
    let cq = &images[q];
    let sign = {
        let res: Vec<u64> = cq.coords.iter().map(|&c| c % p).collect();
        assert!(
            res[1..].iter().all(|&c| c == 0),
            "T^q coefficient must reduce into F_p"
        );
        let r = res[0] as i64;
        if r > p as i64 / 2 {
            r - p as i64
        } else {
            r
        }
    };
    Ok(LubinTateReport {
        p,
        q: q as u64,
        t_prec,
        sign,
        low_window_zero,
        high_window_zero,
        linear_is_p,
    })
}

/// Newton lift of a square root of n in Z_{p^f} (n a unit square there).
fn hensel_sqrt(ext: &UnramifiedExtension, n: u64) -> Option<UnramifiedElement> {
    let fq = FqField::new(ext.0.p, ext.0.f);
    // find the residue square root by enumeration (fields here are tiny)
    let target = fq.from_u64(n);
    let mut start = None;
    for cand in fq.enumerate() {
        if fq.mul(&cand, &cand) == target {
            start = Some(cand);
            break;
        }
    }
    let s0 = start?;
    let mut coords = fq.coords(&s0).to_vec();
    coords.resize(ext.0.f, 0);
    let mut s = ext.from_coords(&coords);
    let nn = ext.from_u64(n);
    for _ in 0..7 {
        // s <- s - (s^2 - n)/(2s)
        let num = ext.sub(&ext.mul(&s, &s), &nn);
        let den = ext.inv(&ext.add(&s, &s)).ok()?;
        s = ext.sub(&s, &ext.mul(&num, &den));
    }
    if ext.sub(&ext.mul(&s, &s), &nn) == ext.zero() {
        Some(s)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn rational_integers_are_frobenius_fixed() {
        let ext = UnramifiedExtension::new(5, 2, 20).unwrap();
        for n in [0i64, 1, 7, -3, 12345] {
            let e = ext.from_i64(n);
            assert_eq!(ext.frobenius(&e), e);
        }
    }

    #[test]
    fn frobenius_order_divides_f_and_reduces_to_pth_power() {
        for (p, f) in [(5u64, 2usize), (5, 4), (7, 2)] {
            let ext = UnramifiedExtension::new(p, f, 20).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11 + p + f as u64);
            for _ in 0..(if f == 4 { 200 } else { 1000 }) {
                let coords: Vec<u64> = (0..f).map(|_| rng.gen_range(0..ext.0.pk)).collect();
                let e = ext.from_coords(&coords);
                let mut it = e.clone();
                for _ in 0..f {
                    it = ext.frobenius(&it);
                }
                assert_eq!(it, e, "phi^f must be the identity");
                // reduction agrees with x -> x^p
                let ph = ext.frobenius(&e);
                let pw = ext.pow(&e, p);
                let d = ext.sub(&ph, &pw);
                assert!(ext.is_zero(&d) || ext.valuation(&d).unwrap() >= 1);
            }
        }
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism_preserving_valuation() {
        let ext = UnramifiedExtension::new(5, 2, 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let a = ext.from_coords(&[rng.gen_range(0..ext.0.pk), rng.gen_range(0..ext.0.pk)]);
            let b = ext.from_coords(&[rng.gen_range(0..ext.0.pk), rng.gen_range(0..ext.0.pk)]);
            assert_eq!(
                ext.frobenius(&ext.add(&a, &b)),
                ext.add(&ext.frobenius(&a), &ext.frobenius(&b))
            );
            assert_eq!(
                ext.frobenius(&ext.mul(&a, &b)),
                ext.mul(&ext.frobenius(&a), &ext.frobenius(&b))
            );
            if !ext.is_zero(&a) {
                assert_eq!(
                    ext.valuation(&a).unwrap(),
                    ext.valuation(&ext.frobenius(&a)).unwrap()
                );
            }
        }
    }

    #[test]
    fn teichmuller_is_fixed_by_qth_power_and_frobenius_acts_as_pth_power() {
        let ext = UnramifiedExtension::new(5, 2, 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let e = ext.from_coords(&[rng.gen_range(1..ext.0.pk), rng.gen_range(0..ext.0.pk)]);
            let w = ext.teichmuller(&e);
            let q = (ext.0.p as u64).pow(ext.0.f as u32);
            assert_eq!(ext.pow(&w, q), w);
            assert_eq!(ext.frobenius(&w), ext.pow(&w, ext.0.p));
        }
    }

    #[test]
    fn valuation_is_multiplicative_on_seeded_pairs() {
        let ext = UnramifiedExtension::new(5, 2, 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut checked = 0;
        while checked < 1000 {
            let a = ext.mul(
                &ext.from_coords(&[rng.gen_range(0..ext.0.pk), rng.gen_range(0..ext.0.pk)]),
                &ext.from_u64(ext.0.p.pow(rng.gen_range(0..3))),
            );
            let b = ext.mul(
                &ext.from_coords(&[rng.gen_range(0..ext.0.pk), rng.gen_range(0..ext.0.pk)]),
                &ext.from_u64(ext.0.p.pow(rng.gen_range(0..3))),
            );
            let (Ok(va), Ok(vb)) = (ext.valuation(&a), ext.valuation(&b)) else {
                continue;
            };
            if va + vb >= ext.0.k {
                continue; // product escapes the window
            }
            assert_eq!(ext.valuation(&ext.mul(&a, &b)).unwrap(), va + vb);
            checked += 1;
        }
    }

    #[test]
    fn valuation_basics_and_below_precision() {
        let ext = UnramifiedExtension::new(5, 2, 20).unwrap();
        assert_eq!(ext.valuation(&ext.one()).unwrap(), 0);
        let p3 = ext.mul(&ext.from_u64(125), &ext.from_coords(&[7, 3]));
        assert_eq!(ext.valuation(&p3).unwrap(), 3);
        assert!(matches!(
            ext.valuation(&ext.zero()),
            Err(PadicError::BelowPrecision { k: 20 })
        ));
    }

    #[test]
    fn metric_estimate_teichmuller_and_uniformizer_cases() {
        let ext = UnramifiedExtension::new(5, 2, 20).unwrap();
        // Teichmuller in Q_{p^2}: phi_q fixes it and a^q = a, difference 0
        let w = ext.teichmuller(&ext.from_coords(&[2, 3]));
        let out = check_metric2(&ext, &w, true);
        assert!(out.pass && out.vacuous);
        // a = p: |p - p^q| = p^{-1}, the equality case
        let out = check_metric2(&ext, &ext.from_u64(5), true);
        assert!(out.pass && !out.vacuous);
        assert_eq!(out.lhs_valuation, Some(1));
        assert!(out.inverse_branch.is_some());
    }

    #[test]
    fn metric_estimate_batches_pass() {
        for (p, f) in [(5u64, 2usize), (5, 4), (7, 2)] {
            let rep = run_metric2_batch(p, f, 2000, 99).unwrap();
            assert_eq!(rep.failures, 0, "estimate failed at ({}, {})", p, f);
            assert!(rep.inverse_branch_checked > 0);
        }
    }

    #[test]
    fn series_reversion_inverts_composition() {
        let k = Rationals;
        let ctx = SeriesCtx::new(&k, 12);
        let mut a = ctx.identity();
        a[2] = BigRational::new(BigInt::from(3), BigInt::from(2));
        a[5] = BigRational::from(BigInt::from(-7));
        let b = ctx.reversion(&a);
        let comp = ctx.compose(&b, &a);
        assert_eq!(comp, ctx.identity());
    }

    #[test]
    fn formal_group_basic_shape() {
        let e = CurveQ::from_integers(5, 1).unwrap();
        let fg = FormalGroup::<Rationals>::from_curve(&e, 12).unwrap();
        assert_eq!(fg.mul_by(1), SeriesCtx::new(&Rationals, 12).identity());
        let two = fg.mul_by(2);
        assert_eq!(two[1], BigRational::from(BigInt::from(2)));
        let five = fg.mul_by(5);
        assert_eq!(five[1], BigRational::from(BigInt::from(5)));
    }

    #[test]
    fn group_law_identity_symmetry_inverse() {
        let e = CurveQ::from_integers(5, 1).unwrap();
        let fg = FormalGroup::<Rationals>::from_curve(&e, 10).unwrap();
        let law = fg.addition_law();
        // F(T, 0) = T
        for i in 0..=10usize {
            let expect = if i == 1 {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            assert_eq!(law.c[i][0], expect);
        }
        // symmetry
        for i in 0..=10 {
            for j in 0..=10 - i {
                assert_eq!(law.c[i][j], law.c[j][i]);
            }
        }
        // F(T, i(T)) = 0
        let ctx = SeriesCtx::new(&Rationals, 10);
        let id = ctx.identity();
        let inv = fg.inverse_series();
        let sum = fg.eval_law(&law, &id, &inv);
        assert!(sum.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn addition_chains_match_scalar_series() {
        let e = CurveQ::from_integers(5, 1).unwrap();
        let fg = FormalGroup::<Rationals>::from_curve(&e, 10).unwrap();
        let law = fg.addition_law();
        for (m, n) in [(1i64, 1i64), (2, 1), (2, 3), (4, 1)] {
            let lhs = fg.eval_law(&law, &fg.mul_by(m), &fg.mul_by(n));
            assert_eq!(lhs, fg.mul_by(m + n), "[{}]+[{}] mismatch", m, n);
        }
    }

    // An exp/log-free duplication check: [2](T) from the curve's duplication
    // formula on Laurent expansions must match exp(2 log T).
    #[test]
    fn duplication_formula_agrees_with_logarithm_route() {
        let curve = CurveQ::from_integers(5, 1).unwrap();
        let prec = 14;
        let k = Rationals;
        let ctx = SeriesCtx::new(&k, prec);
        let fg = FormalGroup::<Rationals>::from_curve(&curve, prec).unwrap();
        // rebuild x(T), y(T)
        let mut w = ctx.zero();
        w[3] = k.one();
        let t = ctx.identity();
        for _ in 0..prec {
            let w2 = ctx.mul(&w, &w);
            let w3 = ctx.mul(&w2, &w);
            let mut nxt = ctx.add(
                &ctx.scale(&ctx.mul(&t, &w2), &curve.a),
                &ctx.scale(&w3, &curve.b),
            );
            nxt[3] = k.add(&nxt[3], &k.one());
            w = nxt;
        }
        let mut u = ctx.zero();
        for i in 0..=prec - 3 {
            u[i] = w[i + 3].clone();
        }
        let uinv = ctx.invert_unit(&u);
        let x: Laurent<Rationals> = Laurent { shift: -2, body: uinv.clone() };
        let y: Laurent<Rationals> = Laurent {
            shift: -3,
            body: ctx.scale(&uinv, &k.from_i64(-1)),
        };
        // lambda = (3x^2 + a) / 2y; x2 = lambda^2 - 2x; y2 = lambda(x - x2) - y
        let x2s = Laurent::mul(&ctx, &x, &x);
        let aconst: Laurent<Rationals> = Laurent {
            shift: 0,
            body: {
                let mut s = ctx.zero();
                s[0] = curve.a.clone();
                s
            },
        };
        let num = Laurent::add(&ctx, &Laurent::scale(&ctx, &x2s, &k.from_i64(3)), &aconst);
        let lam = Laurent::mul(
            &ctx,
            &num,
            &Laurent::inv(&ctx, &Laurent::scale(&ctx, &y, &k.from_i64(2))),
        );
        let lam2 = Laurent::mul(&ctx, &lam, &lam);
        let xx = Laurent::add(&ctx, &lam2, &Laurent::scale(&ctx, &x, &k.from_i64(-2)));
        let yy = Laurent::add(
            &ctx,
            &Laurent::mul(&ctx, &lam, &Laurent::add(&ctx, &x, &Laurent::scale(&ctx, &xx, &k.from_i64(-1)))),
            &Laurent::scale(&ctx, &y, &k.from_i64(-1)),
        );
        // [2](T) = -x2/y2
        let dup = Laurent::mul(
            &ctx,
            &Laurent::scale(&ctx, &xx, &k.from_i64(-1)),
            &Laurent::inv(&ctx, &yy),
        );
        let dup_series = dup.regular(&ctx);
        assert_eq!(dup_series, fg.mul_by(2));
    }

    #[test]
    fn ordinary_curve_rejected() {
        let e = CurveQ::from_integers(-1, 0).unwrap();
        assert!(matches!(
            lubin_tate_signature(&e, 7, 50),
            Err(PadicError::NotSupersingular { p: 7, .. })
        ));
    }

    #[test]
    fn truncation_gates() {
        let e = CurveQ::from_integers(5, 1).unwrap();
        assert!(matches!(
            lubin_tate_signature(&e, 5, 20),
            Err(PadicError::TruncationTooSmall { have: 20, need: 26 })
        ));
        assert!(matches!(
            FormalGroup::<Rationals>::from_curve(&e, 65),
            Err(PadicError::TruncationOutOfRange { t: 65 })
        ));
    }

    #[test]
    fn supersingular_signature_is_minus_one() {
        let e = CurveQ::from_integers(5, 1).unwrap();
        let rep = lubin_tate_signature(&e, 5, 26).unwrap();
        assert_eq!(rep.sign, -1);
        assert!(rep.low_window_zero && rep.high_window_zero && rep.linear_is_p);
    }

    #[test]
    fn sqrt2_twist_flips_the_sign() {
        let rep = lubin_tate_signature_sqrt2_twist(5, 26).unwrap();
        assert_eq!(rep.sign, 1);
        assert!(rep.low_window_zero && rep.linear_is_p);
    }

    // v(zeta_p - 1) = 1/(p-1): the minimal polynomial of zeta_p - 1 is
    // Phi_p(x+1), Eisenstein at p with constant term exactly p, so the
    // Newton polygon is one segment of slope 1/(p-1).
    #[test]
    fn cyclotomic_ramification_slope() {
        use crate::poly::factor::cyclotomic;
        for p in [5u64, 7, 11] {
            let phi = cyclotomic(p);
            // phi(x+1) = sum_j a_j (x+1)^j via running binomial rows
            let d = phi.deg_or0();
            let mut out = vec![BigInt::zero(); d + 1];
            let mut row = vec![BigInt::one()]; // (x+1)^0
            for (j, aj) in phi.coeffs().iter().enumerate() {
                for (i, b) in row.iter().enumerate() {
                    out[i] += aj * b;
                }
                if j < d {
                    let mut nxt = vec![BigInt::one(); row.len() + 1];
                    for i in 1..row.len() {
                        nxt[i] = &row[i - 1] + &row[i];
                    }
                    row = nxt;
                }
            }
            let pb = BigInt::from(p);
            assert_eq!(out[0], pb, "constant term must be exactly p");
            assert!(
                out[..d].iter().all(|c| c.mod_floor(&pb).is_zero()),
                "Eisenstein condition"
            );
            assert!(out[d].is_one());
        }
    }
}
