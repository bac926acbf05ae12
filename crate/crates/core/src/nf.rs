//! Number fields presented as Q[x]/(F) with F monic integral irreducible.
//!
//! Elements are coordinate vectors in the power basis of the class of x.
//! The three nontrivial services, beyond basic field arithmetic, are:
//!
//! * minimal polynomials via modular Krylov sequences with an exact
//!   certificate (the reconstructed polynomial annihilates the element, and
//!   its degree matches a modular annihilator, which forces minimality);
//! * adjoining a root of a polynomial with coefficients in the field, by
//!   resultants: the norm of x - s*y is computed by evaluation and
//!   interpolation, factored over Q, and the subfield generator recovered
//!   from a linear gcd, everything re-verified exactly afterwards;
//! * exact square roots, combining local square roots at a good prime,
//!   Hensel lifting, and rational reconstruction, with non-squares rejected
//!   rigorously by a norm test or a local non-residue.

use crate::arith::{
    self, rational_reconstruct, symmetric_lift,
};
use crate::poly::factor::{
    self, factor_q, hensel_tree, FactorError,
};
use crate::poly::gcd::{ext_gcd_q, resultant_z};
use crate::poly::modp::{factor_squarefree_modp, PolyP};
use crate::poly::{QPoly, ZPoly};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

/// Modulus-doubling steps for Newton inversion: caps the working modulus at
/// roughly 62 * 2^14 bits before falling back to exact rational Euclid.
const INV_LIFT_LEVELS: usize = 14;

#[derive(Debug, Error)]
pub enum NfError {
    #[error("defining polynomial must be monic with integer coefficients")]
    NotMonic,
    #[error("defining polynomial is reducible")]
    Reducible,
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("no shift produced a squarefree resultant norm")]
    AdjoinExhausted,
    #[error("square root search exhausted its precision budget")]
    SqrtUndetermined,
}

/// An element written in the power basis of its field's generator.
/// Coordinates always have the field degree as their length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NfElement {
    pub coords: Vec<BigRational>,
}

impl NfElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// `Some(r)` when the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn to_qpoly(&self) -> QPoly {
        QPoly::from_coeffs(self.coords.clone())
    }
}

struct NfData {
    modulus: ZPoly,
    modulus_q: QPoly,
    degree: usize,
}

/// Q[x]/(F), cheap to clone.
#[derive(Clone)]
pub struct NumberField(Arc<NfData>);

impl std::fmt::Debug for NumberField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NumberField({:?})", self.0.modulus)
    }
}

impl NumberField {
    /// The degree-1 field: Q itself, presented as Q[x]/(x).
    pub fn rationals() -> NumberField {
        let modulus = ZPoly::from_coeffs(vec![BigInt::zero(), BigInt::one()]);
        NumberField(Arc::new(NfData {
            modulus_q: modulus.to_qpoly(),
            degree: 1,
            modulus,
        }))
    }

    /// Build from a monic integral polynomial, verifying irreducibility.
    pub fn new(modulus: ZPoly) -> Result<NumberField, NfError> {
        let deg = modulus.degree().ok_or(NfError::NotMonic)?;
        if deg == 0 || !modulus.leading().is_one() {
            return Err(NfError::NotMonic);
        }
        if deg > 1 && !factor::is_irreducible_q(&modulus.to_qpoly())? {
            return Err(NfError::Reducible);
        }
        Ok(Self::new_unchecked(modulus))
    }

    /// Caller guarantees monic irreducible (e.g. output of factoring).
    pub(crate) fn new_unchecked(modulus: ZPoly) -> NumberField {
        let degree = modulus.deg_or0();
        NumberField(Arc::new(NfData {
            modulus_q: modulus.to_qpoly(),
            degree,
            modulus,
        }))
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn modulus(&self) -> &ZPoly {
        &self.0.modulus
    }

    pub fn zero(&self) -> NfElement {
        NfElement {
            coords: vec![BigRational::zero(); self.0.degree],
        }
    }

    pub fn one(&self) -> NfElement {
        self.from_rational(BigRational::one())
    }

    pub fn gen_elem(&self) -> NfElement {
        if self.0.degree == 1 {
            // Q[x]/(x): the generator is 0.
            return self.zero();
        }
        let mut coords = vec![BigRational::zero(); self.0.degree];
        coords[1] = BigRational::one();
        NfElement { coords }
    }

    pub fn from_rational(&self, r: BigRational) -> NfElement {
        let mut coords = vec![BigRational::zero(); self.0.degree];
        coords[0] = r;
        NfElement { coords }
    }

    pub fn from_int(&self, n: i64) -> NfElement {
        self.from_rational(BigRational::from(BigInt::from(n)))
    }

    /// Reduce an arbitrary-length coordinate vector mod F and pad.
    pub fn from_coords(&self, coords: Vec<BigRational>) -> NfElement {
        let n = self.0.degree;
        let f = &self.0.modulus_q;
        let mut c = coords;
        while c.len() > n {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = c.len() - n; // x^(n+k) = -x^k * (F - x^n)
            for i in 0..n {
                let fi = f.coeff(i);
                if !fi.is_zero() {
                    c[k + i] = &c[k + i] - &top * fi;
                }
            }
        }
        c.resize(n, BigRational::zero());
        NfElement { coords: c }
    }

    pub fn add(&self, a: &NfElement, b: &NfElement) -> NfElement {
        NfElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, a: &NfElement, b: &NfElement) -> NfElement {
        NfElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn neg(&self, a: &NfElement) -> NfElement {
        NfElement {
            coords: a.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, a: &NfElement, b: &NfElement) -> NfElement {
        // Clear denominators up front and convolve over Z: one rational
        // normalization per output coordinate instead of a gcd inside every
        // intermediate product, which dominates at large degree.
        let n = self.0.degree;
        let (az, da) = clear_coords(&a.coords);
        let (bz, db) = clear_coords(&b.coords);
        let mut conv = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in az.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bz.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let fc = self.0.modulus.coeffs();
        while conv.len() > n {
            let top = conv.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = conv.len() - n; // x^(n+k) = -x^k * (F - x^n)
            for (i, fi) in fc.iter().enumerate().take(n) {
                if !fi.is_zero() {
                    conv[k + i] -= &top * fi;
                }
            }
        }
        conv.resize(n, BigInt::zero());
        let den = da * db;
        NfElement {
            coords: conv
                .into_iter()
                .map(|c| BigRational::new(c, den.clone()))
                .collect(),
        }
    }

    pub fn mul_rational(&self, a: &NfElement, r: &BigRational) -> NfElement {
        NfElement {
            coords: a.coords.iter().map(|x| x * r).collect(),
        }
    }

    pub fn inv(&self, a: &NfElement) -> NfElement {
        assert!(!a.is_zero(), "inverse of zero field element");
        if self.0.degree == 1 {
            return self.from_rational(BigRational::one() / a.coords[0].clone());
        }
        if let Some(v) = self.inv_newton(a) {
            return v;
        }
        // Fallback: rational extended Euclid against the modulus.  Exact but
        // slow at large degree; the Newton path above handles those.
        let (g, u, _) = ext_gcd_q(&a.to_qpoly(), &self.0.modulus_q);
        assert_eq!(g.deg_or0(), 0, "modulus not coprime to element");
        let ginv = BigRational::one() / g.coeff(0);
        self.from_coords(u.mul_scalar(&ginv).coeffs().to_vec())
    }

    /// Inversion by p-adic Newton lifting.  Clear denominators (1/a = d/(da)
    /// with da integral), lift the mod-p inverse of d*a doubling the modulus
    /// each step, and read the rational coordinates back through balanced
    /// reconstruction once the modulus is large enough.  A single exact
    /// product check certifies the candidate, so an early spurious
    /// reconstruction is never returned.
    fn inv_newton(&self, a: &NfElement) -> Option<NfElement> {
        let f = &self.0.modulus;
        let mut den = BigInt::one();
        for c in &a.coords {
            den = den.lcm(c.denom());
        }
        let dq = BigRational::from(den.clone());
        let az = ZPoly::from_coeffs(a.coords.iter().map(|c| (c * &dq).to_integer()).collect());
        let mut p = (1u64 << 62) - 57;
        for _ in 0..6 {
            p = arith::next_prime_u64(p + 1);
            let pb = BigInt::from(p);
            let fp = reduce_coeffs(f, &pb).to_modp(p);
            if fp.deg_or0() != self.0.degree {
                continue; // cannot happen for a monic modulus, but stay safe
            }
            let ap = reduce_coeffs(&az, &pb).to_modp(p).rem(&fp);
            if ap.is_zero() || ap.gcd(&fp).deg_or0() != 0 {
                continue; // p divides the resultant of az and f
            }
            let (s, _) = factor::bezout_modp(&ap, &fp);
            let mut w = factor::lift_poly(&s);
            let mut modulus = pb;
            for level in 0..INV_LIFT_LEVELS {
                if level >= 2 {
                    let mu = modulus.to_biguint().unwrap();
                    let bound = (&mu / 2u32).sqrt();
                    let mut coords = Vec::with_capacity(self.0.degree);
                    for i in 0..self.0.degree {
                        let r = w.coeff(i).mod_floor(&modulus).to_biguint().unwrap();
                        match rational_reconstruct(&r, &mu, &bound) {
                            Some(q) => coords.push(q * &dq),
                            None => {
                                coords.clear();
                                break;
                            }
                        }
                    }
                    if coords.len() == self.0.degree {
                        let cand = NfElement { coords };
                        if self.mul(a, &cand) == self.one() {
                            return Some(cand);
                        }
                    }
                }
                let next = &modulus * &modulus;
                let aw = mul_mod_poly(&az, &w, f, &next);
                let two_minus = ZPoly::from_coeffs(vec![BigInt::from(2)]).sub(&aw);
                w = mul_mod_poly(&w, &reduce_coeffs(&two_minus, &next), f, &next);
                modulus = next;
            }
        }
        None
    }

    pub fn div(&self, a: &NfElement, b: &NfElement) -> NfElement {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &NfElement, e: u64) -> NfElement {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Evaluate a rational polynomial at a field element (Horner).
    pub fn eval_qpoly(&self, f: &QPoly, at: &NfElement) -> NfElement {
        let mut acc = self.zero();
        for c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, at);
            acc.coords[0] = &acc.coords[0] + c;
        }
        acc
    }

    /// Evaluate a polynomial with coefficients in this field (Horner).
    pub fn eval_elem_poly(&self, coeffs: &[NfElement], at: &NfElement) -> NfElement {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, at), c);
        }
        acc
    }

    /// Norm of an element: product of all conjugates, as a rational.
    pub fn norm(&self, a: &NfElement) -> BigRational {
        if self.0.degree == 1 {
            return a.coords[0].clone();
        }
        if a.is_zero() {
            return BigRational::zero();
        }
        // Res(F, A_num) = den^deg(A)... handled by clearing A's denominators:
        // N(a) = Res(F, A)/1 for monic F; scale back the cleared denominator.
        let ap = a.to_qpoly();
        let (az, den) = ap.clear_denominators();
        let res = resultant_z(&self.0.modulus, &az);
        let dpow = num_traits::pow::pow(den, self.0.degree);
        BigRational::new(res, dpow)
    }

    /// Trace of the multiplication-by-a operator.
    pub fn trace(&self, a: &NfElement) -> BigRational {
        let n = self.0.degree;
        let mut t = BigRational::zero();
        let mut pw = self.one();
        // tr(a) = sum of diagonal entries of the multiplication matrix.
        for j in 0..n {
            let col = self.mul(a, &pw);
            t = &t + &col.coords[j];
            pw = self.mul_by_gen(&pw);
        }
        t
    }

    /// Multiply by the generator: a shift followed by one reduction step.
    fn mul_by_gen(&self, a: &NfElement) -> NfElement {
        let n = self.0.degree;
        let mut c = Vec::with_capacity(n + 1);
        c.push(BigRational::zero());
        c.extend(a.coords.iter().cloned());
        self.from_coords(c)
    }

    /// Monic minimal polynomial over Q, certified exactly.
    ///
    /// Scheme: clear denominators so D*a is an algebraic integer with an
    /// integral multiplication matrix, compute Krylov annihilators of that
    /// matrix modulo a stream of 62-bit primes, CRT the coefficients until
    /// they stabilize, then check m(D*a) = 0 exactly.  Because a modular
    /// annihilator degree is a lower bound for the minimal degree and m is a
    /// multiple of the minimal polynomial, equality of degrees pins m down.
    pub fn min_poly(&self, a: &NfElement) -> QPoly {
        let n = self.0.degree;
        if n == 1 {
            let c = -a.coords[0].clone();
            return QPoly::from_coeffs(vec![c, BigRational::one()]);
        }
        // D * a has integer coordinates.
        let mut d = BigInt::one();
        for c in &a.coords {
            d = d.lcm(c.denom());
        }
        let scaled = NfElement {
            coords: a
                .coords
                .iter()
                .map(|c| c * BigRational::from(d.clone()))
                .collect(),
        };
        let int_coords: Vec<BigInt> = scaled
            .coords
            .iter()
            .map(|c| {
                debug_assert!(c.denom().is_one());
                c.numer().clone()
            })
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_A11B);
        let mut p = (1u64 << 62) - 57;
        let mut modulus = BigUint::one();
        let mut residues: Vec<BigUint> = Vec::new();
        let mut best_deg = 0usize;
        let mut stable = 0u32;
        let mut last: Option<Vec<BigInt>> = None;
        loop {
            p = arith::next_prime_u64(p + 1);
            let ann = match krylov_annihilator(&self.0.modulus, &int_coords, p, &mut rng) {
                Some(a) => a,
                None => continue,
            };
            let deg = ann.len() - 1;
            if deg < best_deg {
                continue; // unlucky prime, annihilator degenerated
            }
            if deg > best_deg {
                best_deg = deg;
                modulus = BigUint::one();
                residues = vec![BigUint::zero(); deg + 1];
                stable = 0;
                last = None;
            }
            let pb = BigUint::from(p);
            for (r, &c) in residues.iter_mut().zip(&ann) {
                let (nr, _) = arith::crt_pair(r, &modulus, &BigUint::from(c), &pb);
                *r = nr;
            }
            modulus *= &pb;
            let lifted: Vec<BigInt> = residues
                .iter()
                .map(|r| symmetric_lift(r, &modulus))
                .collect();
            if Some(&lifted) == last.as_ref() {
                stable += 1;
                if stable >= 2 {
                    let cand = ZPoly::from_coeffs(lifted.clone());
                    if self
                        .eval_qpoly(&cand.to_qpoly(), &scaled)
                        .is_zero()
                    {
                        // min poly of a: m(D x) / D^deg, monic.
                        let dq = BigRational::from(d.clone());
                        let m = cand.to_qpoly().scale_var(&dq);
                        return m.monic();
                    }
                    stable = 0; // stabilized on a wrong value; keep adding primes
                }
            } else {
                stable = 0;
            }
            last = Some(lifted);
        }
    }

    /// Primitive integer minimal polynomial with positive leading coefficient.
    pub fn min_poly_z(&self, a: &NfElement) -> ZPoly {
        let (z, _) = self.min_poly(a).clear_denominators();
        z.primitive_part()
    }

    /// Express an element of a subfield in this field: evaluate its
    /// coordinate polynomial at the image of the subfield's generator.
    pub fn transport(&self, sub_elem: &NfElement, sub_gen_here: &NfElement) -> NfElement {
        self.eval_qpoly(&sub_elem.to_qpoly(), sub_gen_here)
    }
}

/// Monic annihilator (coefficients ascending, last = 1) of multiplication by
/// the element with the given integer coordinates, everything reduced mod p
/// up front; lcm over two random start vectors. The modulus must be monic
/// integral, so its reduction stays monic of full degree at every p.
fn krylov_annihilator(
    modulus: &ZPoly,
    coords: &[BigInt],
    p: u64,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<u64>> {
    let n = coords.len();
    let pb = BigInt::from(p);
    let mp: Vec<u64> = modulus
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    let cp: Vec<u64> = coords
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    let mut ann = PolyP::one(p);
    for _ in 0..2 {
        let v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let a1 = vector_annihilator(&mp, &cp, &v, p)?;
        // lcm(ann, a1) = ann * a1 / gcd
        let g = ann.gcd(&a1);
        let (q, r) = a1.divrem(&g);
        debug_assert!(r.is_zero());
        ann = ann.mul(&q);
        if ann.deg_or0() == n {
            break;
        }
    }
    Some(ann.monic().coeffs().to_vec()).filter(|c| !c.is_empty())
}

/// First linear dependence among v, cv, c^2 v, ... in F_p[x]/(m), by
/// incremental Gaussian elimination with coefficient tracking.
fn vector_annihilator(mp: &[u64], cp: &[u64], v: &[u64], p: u64) -> Option<PolyP> {
    let n = v.len();
    // Echelon rows and, for each, its expression in Krylov coordinates.
    let mut rows: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    let mut cur = v.to_vec();
    for step in 0..=n {
        // expression of cur: e_step
        let mut expr = vec![0u64; n + 2];
        expr[step] = 1;
        let mut w = cur.clone();
        for (row, rexpr) in &rows {
            let pivot = row.iter().position(|&x| x != 0).unwrap();
            if w[pivot] != 0 {
                let factor = arith::mul_mod(w[pivot], arith::inv_mod(row[pivot], p), p);
                for i in 0..n {
                    w[i] = arith::sub_mod(w[i], arith::mul_mod(factor, row[i], p), p);
                }
                for i in 0..n + 2 {
                    expr[i] = arith::sub_mod(expr[i], arith::mul_mod(factor, rexpr[i], p), p);
                }
            }
        }
        if w.iter().all(|&x| x == 0) {
            // dependence: sum expr[j] * c^j v = 0
            let coeffs: Vec<u64> = expr[..=step].to_vec();
            return Some(PolyP::from_coeffs(p, coeffs).monic());
        }
        rows.push((w, expr));
        // advance cur = c * cur mod m
        let mut nxt = vec![0u64; 2 * n - 1];
        for (i, &ci) in cur.iter().enumerate() {
            if ci != 0 {
                for (j, &ej) in cp.iter().enumerate() {
                    if ej != 0 {
                        nxt[i + j] = arith::add_mod(nxt[i + j], arith::mul_mod(ci, ej, p), p);
                    }
                }
            }
        }
        for k in (n..nxt.len()).rev() {
            let t = nxt[k];
            if t != 0 {
                nxt[k] = 0;
                let base = k - n;
                for i in 0..n {
                    if mp[i] != 0 {
                        nxt[base + i] =
                            arith::sub_mod(nxt[base + i], arith::mul_mod(t, mp[i], p), p);
                    }
                }
            }
        }
        nxt.truncate(n);
        cur = nxt;
    }
    None
}

// ---------------------------------------------------------------------------
// Adjunction
// ---------------------------------------------------------------------------

/// Result of adjoining a root: the new field, the image of the old
/// generator, and the adjoined root itself (both as new-field elements).
#[derive(Debug)]
pub struct Adjunction {
    pub field: NumberField,
    pub old_gen: NfElement,
    pub root: NfElement,
}

/// Adjoin to `base` a root of the polynomial with coefficients `g`
/// (ascending, in the base field, leading coefficient nonzero).
///
/// Construction: scale the variable so the defining polynomial is monic with
/// integral coordinates, compute the characteristic polynomial N of
/// w = z + s*theta as a resultant (by evaluation / interpolation), factor it,
/// and for each irreducible factor recover theta by differentiating N with
/// respect to the shift: at a simple root w, theta = V(w)/N'(w) where
/// V = -dN/ds.  Both polynomials come from the same integer resultant grid,
/// so no arithmetic over the candidate field is needed until the final
/// division.  The returned data is verified exactly, so the factor search
/// cannot silently pick a wrong branch.
pub fn adjoin_root(base: &NumberField, g: &[NfElement]) -> Result<Adjunction, NfError> {
    let n = g.len() - 1;
    assert!(n >= 1, "adjoin_root needs positive degree");
    let lead = g.last().unwrap();
    assert!(!lead.is_zero(), "leading coefficient must be nonzero");

    // Monicize over the base field.
    let lead_inv = base.inv(lead);
    let gm: Vec<NfElement> = g.iter().map(|c| base.mul(c, &lead_inv)).collect();

    if n == 1 {
        // Root already lives in the base field.
        let root = base.neg(&gm[0]);
        return Ok(Adjunction {
            field: base.clone(),
            old_gen: base.gen_elem(),
            root,
        });
    }

    if base.degree() == 1 {
        return adjoin_to_rationals(base, &gm);
    }

    // Scale the root by L = lcm of coordinate denominators: the polynomial
    // sum c_j L^(n-j) T^j is monic with integral coordinates.
    let mut lden = BigInt::one();
    for c in &gm {
        for x in &c.coords {
            lden = lden.lcm(x.denom());
        }
    }
    let lq = BigRational::from(lden.clone());
    let mut cz: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1); // integer coords of scaled coeffs
    for (j, c) in gm.iter().enumerate() {
        let scale = num_traits::pow::pow(lq.clone(), n - j);
        let v: Vec<BigInt> = c
            .coords
            .iter()
            .map(|x| {
                let y = x * &scale;
                debug_assert!(y.denom().is_one());
                y.numer().clone()
            })
            .collect();
        cz.push(v);
    }

    let m = base.degree();
    let modulus = base.modulus();

    for &s in &[1i64, -1, 2, -2, 3, -3, 5, -5] {
        // Norm N(x) = Res_y(M(y), sum_j C_j(y) (x - s y)^j), by values.
        let npoints = m * n + 1;
        let xs: Vec<i64> = sample_points(npoints);
        let col: Vec<BigInt> = xs
            .iter()
            .map(|&x0| resultant_z(modulus, &eval_subst_poly(&cz, x0, s)))
            .collect();
        let points: Vec<(BigRational, BigRational)> = xs
            .iter()
            .zip(&col)
            .map(|(&x0, v)| {
                (
                    BigRational::from(BigInt::from(x0)),
                    BigRational::from(v.clone()),
                )
            })
            .collect();
        let norm_q = crate::poly::interpolate(&points);
        let (norm_z, den) = norm_q.clear_denominators();
        debug_assert!(den.is_one());
        if norm_z.deg_or0() != m * n || !norm_z.leading().is_one() {
            continue; // degenerate leading behavior; try another shift
        }
        if !proven_squarefree(&norm_z) {
            continue;
        }
        let fact = factor_q(&norm_q)?;
        let mut factors: Vec<ZPoly> = fact.factors.into_iter().map(|(f, _)| f).collect();
        factors.sort_by(|a, b| b.deg_or0().cmp(&a.deg_or0()).then_with(|| {
            b.coeffs().cmp(a.coeffs())
        }));

        // The gates passed, so pay for the full grid: V = -dN/ds, obtained by
        // interpolating each row N(x0, .) in the shift and differentiating
        // at s.  Together with N' it recovers theta inside each factor.
        let sq = BigRational::from(BigInt::from(s));
        let mut vpts: Vec<(BigRational, BigRational)> = Vec::with_capacity(npoints);
        for (i, &x0) in xs.iter().enumerate() {
            let mut row: Vec<(BigRational, BigRational)> = Vec::with_capacity(npoints);
            for (j, &off) in sample_points(npoints).iter().enumerate() {
                let val = if j == 0 {
                    col[i].clone() // off = 0 is the s-column already computed
                } else {
                    resultant_z(modulus, &eval_subst_poly(&cz, x0, s + off))
                };
                row.push((
                    BigRational::from(BigInt::from(s + off)),
                    BigRational::from(val),
                ));
            }
            let g = crate::poly::interpolate(&row);
            vpts.push((
                BigRational::from(BigInt::from(x0)),
                -g.derivative().eval(&sq),
            ));
        }
        let vpoly = crate::poly::interpolate(&vpts);
        let nprime = norm_q.derivative();

        for f in factors {
            if !f.leading().is_one() {
                continue; // norm is monic so this cannot happen, but be safe
            }
            if let Some(adj) = try_factor(base, &cz, n, s, &f, &lden, &vpoly, &nprime) {
                return Ok(adj);
            }
        }
    }
    Err(NfError::AdjoinExhausted)
}

/// 0, 1, -1, 2, -2, ... : the first `k` interpolation nodes.
fn sample_points(k: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(k);
    let mut x = 0i64;
    while out.len() < k {
        out.push(x);
        x = if x > 0 { -x } else { -x + 1 };
    }
    out
}

/// Base field Q: factoring the polynomial directly does everything.
fn adjoin_to_rationals(
    base: &NumberField,
    gm: &[NfElement],
) -> Result<Adjunction, NfError> {
    let q = QPoly::from_coeffs(gm.iter().map(|c| c.coords[0].clone()).collect());
    let fact = factor_q(&q)?;
    let mut factors: Vec<ZPoly> = fact.factors.into_iter().map(|(f, _)| f).collect();
    factors.sort_by(|a, b| b.deg_or0().cmp(&a.deg_or0()).then_with(|| b.coeffs().cmp(a.coeffs())));
    let f = factors.into_iter().next().expect("positive degree input");
    if f.deg_or0() == 1 {
        // all factors linear: the root is rational
        let root = BigRational::new(-f.coeff(0), f.coeff(1));
        return Ok(Adjunction {
            field: base.clone(),
            old_gen: base.gen_elem(),
            root: base.from_rational(root),
        });
    }
    // Make monic integral by scaling the root by the leading coefficient.
    let lc = f.leading();
    let fm = monicize_by_scaling(&f);
    let field = NumberField::new_unchecked(fm);
    let w = field.gen_elem();
    let root = field.mul_rational(&w, &BigRational::new(BigInt::one(), lc));
    // check g(root) = 0
    let coeffs: Vec<NfElement> = gm
        .iter()
        .map(|c| field.from_rational(c.coords[0].clone()))
        .collect();
    assert!(field.eval_elem_poly(&coeffs, &root).is_zero());
    Ok(Adjunction {
        old_gen: field.zero(),
        field,
        root,
    })
}

/// lc^(d-1) f(x/lc): monic integral, roots scaled by lc.
fn monicize_by_scaling(f: &ZPoly) -> ZPoly {
    let d = f.deg_or0();
    let lc = f.leading();
    let mut coeffs = Vec::with_capacity(d + 1);
    // coefficient of x^i picks up lc^(d-1-i)
    for (i, c) in f.coeffs().iter().enumerate() {
        if i == d {
            coeffs.push(BigInt::one());
        } else {
            coeffs.push(c * num_traits::pow::pow(lc.clone(), d - 1 - i));
        }
    }
    ZPoly::from_coeffs(coeffs)
}

/// Substitute x = x0, T = x0 - s*y into sum_j C_j(y) T^j; integer polynomial
/// in y ready for the resultant.
fn eval_subst_poly(cz: &[Vec<BigInt>], x0: i64, s: i64) -> ZPoly {
    let lin = ZPoly::from_coeffs(vec![BigInt::from(x0), BigInt::from(-s)]);
    let mut acc = ZPoly::zero();
    // Horner in T
    for coords in cz.iter().rev() {
        acc = acc.mul(&lin);
        acc = acc.add(&ZPoly::from_coeffs(coords.clone()));
    }
    acc
}

/// Squarefree certificate: squarefree mod some good prime implies squarefree
/// over Q.  Returns false if no tried prime certifies it.
pub(crate) fn proven_squarefree(f: &ZPoly) -> bool {
    let mut p = 1u64 << 40;
    for _ in 0..12 {
        p = arith::next_prime_u64(p + 1);
        if (f.leading().mod_floor(&BigInt::from(p))).is_zero() {
            continue;
        }
        let fp = f.to_modp(p);
        if fp.is_squarefree() {
            return true;
        }
    }
    false
}

/// Attempt one irreducible factor F of the norm: recover theta as
/// V(w)/N'(w), build the adjunction data, and verify it exactly.
fn try_factor(
    base: &NumberField,
    cz: &[Vec<BigInt>],
    _n: usize,
    s: i64,
    f: &ZPoly,
    lden: &BigInt,
    vpoly: &QPoly,
    nprime: &QPoly,
) -> Option<Adjunction> {
    let field = NumberField::new_unchecked(f.clone());
    let sbig = BigInt::from(s);

    // Every root of F is a simple root of the squarefree norm, so N'(w) is a
    // unit mod F and the ratio evaluates theta at each embedding at once.
    let nprime_el = field.from_coords(nprime.coeffs().to_vec());
    if nprime_el.is_zero() {
        return None;
    }
    let v_el = field.from_coords(vpoly.coeffs().to_vec());
    let theta = field.div(&v_el, &nprime_el);

    // Verify M(theta) = 0.
    if !field.eval_qpoly(&base.modulus().to_qpoly(), &theta).is_zero() {
        return None;
    }

    // z = (w - s*theta) / L, where L was the monicizing scale.
    let w = field.gen_elem();
    let z_scaled = field.sub(&w, &field.mul_rational(&theta, &BigRational::from(sbig)));
    let root = field.mul_rational(
        &z_scaled,
        &BigRational::new(BigInt::one(), lden.clone()),
    );

    // Verify against the scaled defining polynomial: sum C_j (L z)^j = 0.
    let coeffs: Vec<NfElement> = cz
        .iter()
        .map(|coords| {
            let el = NfElement {
                coords: coords
                    .iter()
                    .map(|c| BigRational::from(c.clone()))
                    .collect(),
            };
            field.transport(&el, &theta)
        })
        .collect();
    if !field.eval_elem_poly(&coeffs, &z_scaled).is_zero() {
        return None;
    }

    Some(Adjunction {
        field,
        old_gen: theta,
        root,
    })
}

// ---------------------------------------------------------------------------
// Square roots
// ---------------------------------------------------------------------------

impl NumberField {
    /// Exact square root in the field.
    ///
    /// `Ok(Some(u))` with `u*u = c` verified exactly; `Ok(None)` only with a
    /// rigorous witness (negative or non-square norm, or a completion where
    /// the element is a quadratic non-residue); `Err(SqrtUndetermined)` when
    /// the precision budget runs out without either certificate.
    pub fn sqrt(&self, c: &NfElement) -> Result<Option<NfElement>, NfError> {
        if c.is_zero() {
            return Ok(Some(self.zero()));
        }
        if let Some(r) = c.as_rational() {
            if self.degree() == 1 {
                return Ok(rational_sqrt(&r).map(|s| self.from_rational(s)));
            }
        }

        // Norm filter: N(u^2) = N(u)^2, so a non-square norm is a proof.
        let nu = self.norm(c);
        if nu.is_negative() {
            return Ok(None);
        }
        if arith::perfect_sqrt(nu.numer()).is_none()
            || arith::perfect_sqrt(nu.denom()).is_none()
        {
            return Ok(None);
        }

        // Clear denominators by a square: sqrt(D^2 c) = D sqrt(c).
        let mut dsc = BigInt::one();
        for x in &c.coords {
            dsc = dsc.lcm(x.denom());
        }
        let d2 = BigRational::from(&dsc * &dsc);
        let chat: Vec<BigInt> = c
            .coords
            .iter()
            .map(|x| {
                let y = x * &d2;
                y.numer().clone()
            })
            .collect();
        let chat_poly = ZPoly::from_coeffs(chat.clone());

        let mut p = 1u64 << 46;
        let mut tried = 0;
        while tried < 10 {
            p = arith::next_prime_u64(p + 1);
            let fp = self.modulus().to_modp(p);
            if fp.deg_or0() != self.degree() || !fp.is_squarefree() {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0x5111 ^ p);
            let locals = factor_squarefree_modp(&fp, &mut rng);
            if locals.len() > 13 {
                tried += 1;
                continue; // too many sign patterns; look for a lazier prime
            }
            let mut chat_ok = true;
            let mut local_roots: Vec<PolyP> = Vec::new();
            for li in &locals {
                let ci = chat_poly.to_modp(p).rem(li);
                if ci.is_zero() {
                    chat_ok = false; // c lies in this prime; parity invisible
                    break;
                }
                match fq_sqrt(&ci, li) {
                    SqrtOutcome::NonResidue => return Ok(None),
                    SqrtOutcome::Root(r) => local_roots.push(r),
                }
            }
            if !chat_ok {
                tried += 1;
                continue;
            }

            // Hensel stage, growing precision until reconstruction succeeds.
            for kexp in [8usize, 16, 32, 48] {
                if let Some(u) = self.sqrt_reconstruct(
                    &chat_poly,
                    p,
                    kexp,
                    &locals,
                    &local_roots,
                ) {
                    let res = self.mul_rational(
                        &u,
                        &BigRational::new(BigInt::one(), dsc.clone()),
                    );
                    return Ok(Some(res));
                }
            }
            tried += 1;
        }
        Err(NfError::SqrtUndetermined)
    }

    /// One (prime, precision) attempt: lift the modular factorization and the
    /// local square roots to p^K, try every sign pattern, and reconstruct.
    fn sqrt_reconstruct(
        &self,
        chat: &ZPoly,
        p: u64,
        kexp: usize,
        locals: &[PolyP],
        local_roots: &[PolyP],
    ) -> Option<NfElement> {
        let target = num_traits::pow::pow(BigInt::from(p), kexp);
        let fz = self.modulus();
        let lifted = hensel_tree(&reduce_coeffs(fz, &target), locals, p, &target);

        // v_i = (lifted local sqrt) * E_i, with E_i the CRT idempotent-like
        // combinator B_i * (B_i^{-1} mod F_i), all mod (p^K, F).
        let g = locals.len();
        let mut summands: Vec<ZPoly> = Vec::with_capacity(g);
        for i in 0..g {
            let fi = &lifted[i];
            let ui = lift_sqrt(chat, &local_roots[i], fi, p, &target);
            let mut bi = ZPoly::one();
            for (j, fj) in lifted.iter().enumerate() {
                if j != i {
                    bi = mul_mod_poly(&bi, fj, fz, &target);
                }
            }
            let si = invert_mod_factor(&bi, fi, p, &target);
            let ei = mul_mod_poly(&bi, &si, fz, &target);
            let vi = mul_mod_poly(&ui, &ei, fz, &target);
            summands.push(vi);
        }

        let bound = (&target.to_biguint().unwrap() >> 1u32).sqrt();
        let n = self.degree();
        // First summand's sign is fixed: a global sign is free.
        for mask in 0u64..(1u64 << (g - 1)) {
            let mut acc = summands[0].clone();
            for (i, vi) in summands.iter().enumerate().skip(1) {
                let signed = if (mask >> (i - 1)) & 1 == 1 {
                    vi.neg()
                } else {
                    vi.clone()
                };
                acc = reduce_coeffs(&acc.add(&signed), &target);
            }
            let mut coords: Vec<BigRational> = Vec::with_capacity(n);
            let mut ok = true;
            for i in 0..n {
                let r = acc.coeff(i).mod_floor(&target).to_biguint().unwrap();
                match rational_reconstruct(&r, &target.to_biguint().unwrap(), &bound) {
                    Some(q) => coords.push(q),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let cand = NfElement { coords };
            let chat_el = NfElement {
                coords: (0..n)
                    .map(|i| BigRational::from(chat.coeff(i)))
                    .collect(),
            };
            if self.mul(&cand, &cand) == chat_el {
                return Some(cand);
            }
        }
        None
    }
}

/// Common-denominator form of a coordinate vector: (numerators, lcm).
fn clear_coords(c: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for x in c {
        den = den.lcm(x.denom());
    }
    let nums = c
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    (nums, den)
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = arith::perfect_sqrt(r.numer())?;
    let d = arith::perfect_sqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

fn reduce_coeffs(f: &ZPoly, m: &BigInt) -> ZPoly {
    ZPoly::from_coeffs(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

/// Remainder by a monic polynomial, coefficients reduced mod m.
fn rem_monic_mod(a: &ZPoly, f: &ZPoly, m: &BigInt) -> ZPoly {
    let df = f.deg_or0();
    let mut c: Vec<BigInt> = a.coeffs().to_vec();
    while c.len() > df {
        let top = c.pop().unwrap().mod_floor(m);
        if top.is_zero() {
            continue;
        }
        let k = c.len() - df;
        for i in 0..df {
            let fi = f.coeff(i);
            if !fi.is_zero() {
                c[k + i] = (&c[k + i] - &top * fi).mod_floor(m);
            }
        }
    }
    for x in c.iter_mut() {
        *x = x.mod_floor(m);
    }
    ZPoly::from_coeffs(c)
}

fn mul_mod_poly(a: &ZPoly, b: &ZPoly, f: &ZPoly, m: &BigInt) -> ZPoly {
    rem_monic_mod(&a.mul(b), f, m)
}

/// Newton-lift a square root of `chat` from mod (p, fi) to mod (p^K, fi).
fn lift_sqrt(chat: &ZPoly, r0: &PolyP, fi: &ZPoly, p: u64, target: &BigInt) -> ZPoly {
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut u = factor::lift_poly(r0);
    // w = (2u)^{-1} mod (p, fi)
    let two_u0 = r0.mul_scalar(2 % p);
    let fi_p = reduce_coeffs(fi, &pb).to_modp(p);
    let (s, _) = factor::bezout_modp(&two_u0.rem(&fi_p), &fi_p);
    let mut w = factor::lift_poly(&s);
    let c_red = chat;
    while &modulus < target {
        let next = (&modulus * &modulus).min(target.clone());
        // refresh inverse: w <- w (2 - 2u w) mod (next, fi)
        let two_u = u.mul_scalar(&BigInt::from(2));
        let tw = mul_mod_poly(&two_u, &w, fi, &next);
        let two_minus = ZPoly::from_coeffs(vec![BigInt::from(2)]).sub(&tw);
        w = mul_mod_poly(&w, &reduce_coeffs(&two_minus, &next), fi, &next);
        // u <- u - (u^2 - c) w mod (next, fi)
        let u2 = mul_mod_poly(&u, &u, fi, &next);
        let diff = rem_monic_mod(&u2.sub(c_red), fi, &next);
        let step = mul_mod_poly(&diff, &w, fi, &next);
        u = reduce_coeffs(&u.sub(&step), &next);
        u = rem_monic_mod(&u, fi, &next);
        modulus = next;
    }
    u
}

/// Invert `b` mod (p^K, fi) by lifting the mod-p inverse.
fn invert_mod_factor(b: &ZPoly, fi: &ZPoly, p: u64, target: &BigInt) -> ZPoly {
    let pb = BigInt::from(p);
    let fi_p = reduce_coeffs(fi, &pb).to_modp(p);
    let b_p = reduce_coeffs(b, &pb).to_modp(p).rem(&fi_p);
    let (s, _) = factor::bezout_modp(&b_p, &fi_p);
    let mut w = factor::lift_poly(&s);
    let mut modulus = pb;
    while &modulus < target {
        let next = (&modulus * &modulus).min(target.clone());
        let bw = mul_mod_poly(b, &w, fi, &next);
        let two_minus = ZPoly::from_coeffs(vec![BigInt::from(2)]).sub(&bw);
        w = mul_mod_poly(&w, &reduce_coeffs(&two_minus, &next), fi, &next);
        modulus = next;
    }
    w
}

enum SqrtOutcome {
    NonResidue,
    Root(PolyP),
}

/// Square root in F_p[x]/(fi) by Tonelli-Shanks; fi irreducible mod p, c != 0.
fn fq_sqrt(c: &PolyP, fi: &PolyP) -> SqrtOutcome {
    let p = fi.p;
    let d = fi.deg_or0();
    let q = num_traits::pow::pow(BigUint::from(p), d);
    let q1 = &q - 1u32;
    let half = &q1 >> 1u32;
    let legendre = fq_pow(c, &half, fi);
    let minus_one = PolyP::from_coeffs(p, vec![p - 1]);
    if legendre == minus_one {
        return SqrtOutcome::NonResidue;
    }
    assert!(legendre == PolyP::one(p), "element not invertible in residue field");

    // q - 1 = 2^e * modd
    let mut e = 0u32;
    let mut modd = q1.clone();
    while (&modd & BigUint::one()).is_zero() {
        modd >>= 1u32;
        e += 1;
    }
    // find a non-residue
    let zeta = {
        let mut found = None;
        for k in 2..2000u64 {
            let cand = if k < 1000 {
                PolyP::from_coeffs(p, vec![k % p])
            } else {
                PolyP::from_coeffs(p, vec![(k - 1000) % p, 1])
            };
            if cand.is_zero() {
                continue;
            }
            if fq_pow(&cand, &half, fi) == minus_one {
                found = Some(cand);
                break;
            }
        }
        found.expect("non-residue exists in an odd-order field")
    };

    let mut z = fq_pow(&zeta, &modd, fi);
    let mut x = fq_pow(c, &((&modd + 1u32) >> 1u32), fi);
    let mut t = fq_pow(c, &modd, fi);
    let mut m_ord = e;
    let one = PolyP::one(p);
    while t != one {
        // least j with t^(2^j) = 1
        let mut j = 0u32;
        let mut tt = t.clone();
        while tt != one {
            tt = tt.mul(&tt).rem(fi);
            j += 1;
        }
        assert!(j < m_ord);
        let mut b = z.clone();
        for _ in 0..(m_ord - j - 1) {
            b = b.mul(&b).rem(fi);
        }
        m_ord = j;
        z = b.mul(&b).rem(fi);
        t = t.mul(&z).rem(fi);
        x = x.mul(&b).rem(fi);
    }
    SqrtOutcome::Root(x)
}

fn fq_pow(base: &PolyP, e: &BigUint, fi: &PolyP) -> PolyP {
    let p = fi.p;
    let mut acc = PolyP::one(p);
    let mut b = base.rem(fi);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            acc = acc.mul(&b).rem(fi);
        }
        if i + 1 < bits {
            b = b.mul(&b).rem(fi);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn qq(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn field(coeffs: &[i64]) -> NumberField {
        NumberField::new(ZPoly::from_coeffs(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        ))
        .unwrap()
    }

    #[test]
    fn sqrt2_arithmetic() {
        let k = field(&[-2, 0, 1]); // x^2 - 2
        let t = k.gen_elem();
        let one_plus = k.add(&k.one(), &t);
        let sq = k.mul(&one_plus, &one_plus);
        // (1 + sqrt2)^2 = 3 + 2 sqrt2
        assert_eq!(sq.coords, vec![q(3), q(2)]);
        let inv = k.inv(&one_plus);
        // 1/(1 + sqrt2) = sqrt2 - 1
        assert_eq!(inv.coords, vec![q(-1), q(1)]);
        assert_eq!(k.norm(&one_plus), q(-1));
        assert_eq!(k.trace(&one_plus), q(2));
    }

    #[test]
    fn inv_large_coordinates_roundtrip() {
        let k = field(&[-2, 0, 0, 0, 1]); // x^4 - 2
        // Coordinates with ~200-bit numerators and mixed denominators keep
        // the Newton lift honest about reconstruction and certification.
        let big = BigInt::from(7u32).pow(80u32);
        let coords = vec![
            BigRational::new(big.clone() + 1, BigInt::from(3)),
            BigRational::new(-big.clone(), BigInt::from(11)),
            BigRational::new(big.clone() * 5 + 17, BigInt::from(1)),
            BigRational::new(big - 9, BigInt::from(1)),
        ];
        let a = NfElement { coords };
        let ainv = k.inv(&a);
        assert_eq!(k.mul(&a, &ainv), k.one());
        // Small elements must agree with the exact Euclid result.
        let e = k.add(&k.one(), &k.gen_elem());
        let (g, u, _) = ext_gcd_q(&e.to_qpoly(), &QPoly::from_i64(&[-2, 0, 0, 0, 1]));
        let expect = k.from_coords(u.mul_scalar(&(BigRational::one() / g.coeff(0))).coeffs().to_vec());
        assert_eq!(k.inv(&e), expect);
    }

    #[test]
    fn min_poly_shifted_sqrt2() {
        let k = field(&[-2, 0, 1]);
        let e = k.add(&k.one(), &k.gen_elem());
        let m = k.min_poly(&e);
        // x^2 - 2x - 1
        assert_eq!(m, QPoly::from_i64(&[-1, -2, 1]));
    }

    #[test]
    fn min_poly_golden_ratio() {
        let k = field(&[-5, 0, 1]); // x^2 - 5
        // (1 + sqrt5)/2
        let e = NfElement {
            coords: vec![qq(1, 2), qq(1, 2)],
        };
        let m = k.min_poly(&e);
        assert_eq!(m, QPoly::from_i64(&[-1, -1, 1]));
    }

    #[test]
    fn min_poly_of_rational_in_big_field() {
        let k = field(&[-2, 0, 0, 0, 1]); // x^4 - 2
        let e = k.from_rational(qq(7, 3));
        assert_eq!(k.min_poly(&e), QPoly::from_coeffs(vec![qq(-7, 3), q(1)]));
        let theta_sq = k.pow(&k.gen_elem(), 2);
        assert_eq!(k.min_poly(&theta_sq), QPoly::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn adjoin_sqrt2_then_sqrt3() {
        let qf = NumberField::rationals();
        let step1 = adjoin_root(&qf, &[qf.from_int(-2), qf.from_int(0), qf.from_int(1)]).unwrap();
        let k1 = step1.field.clone();
        assert_eq!(k1.degree(), 2);
        let sqrt2 = step1.root.clone();
        assert_eq!(k1.mul(&sqrt2, &sqrt2), k1.from_int(2));

        let step2 = adjoin_root(&k1, &[k1.from_int(-3), k1.from_int(0), k1.from_int(1)]).unwrap();
        let k2 = step2.field.clone();
        assert_eq!(k2.degree(), 4);
        let sqrt3 = step2.root.clone();
        let sqrt2_in_k2 = k2.transport(&sqrt2, &step2.old_gen);
        assert_eq!(k2.mul(&sqrt3, &sqrt3), k2.from_int(3));
        assert_eq!(k2.mul(&sqrt2_in_k2, &sqrt2_in_k2), k2.from_int(2));

        let sum = k2.add(&sqrt2_in_k2, &sqrt3);
        // classic: min poly of sqrt2 + sqrt3
        assert_eq!(k2.min_poly_z(&sum), ZPoly::from_coeffs(
            [1i64, 0, -10, 0, 1].iter().map(|&c| BigInt::from(c)).collect(),
        ));

        // sqrt6 = sqrt2 * sqrt3 is a square's root already in the field
        let six = k2.from_int(6);
        let r6 = k2.sqrt(&six).unwrap().expect("6 is a square in Q(sqrt2, sqrt3)");
        assert_eq!(k2.mul(&r6, &r6), six);
        assert!(k2.sqrt(&k2.from_int(5)).unwrap().is_none());
    }

    #[test]
    fn adjoin_root_already_present() {
        let qf = NumberField::rationals();
        let step1 = adjoin_root(&qf, &[qf.from_int(-2), qf.from_int(0), qf.from_int(1)]).unwrap();
        let k1 = step1.field.clone();
        // T^2 - 2 splits over Q(sqrt2); the adjunction must not grow the field
        let step2 = adjoin_root(&k1, &[k1.from_int(-2), k1.from_int(0), k1.from_int(1)]).unwrap();
        assert_eq!(step2.field.degree(), 2);
        let z = &step2.root;
        assert_eq!(step2.field.mul(z, z), step2.field.from_int(2));
        // the old generator still satisfies x^2 - 2
        let th = &step2.old_gen;
        assert_eq!(step2.field.mul(th, th), step2.field.from_int(2));
    }

    #[test]
    fn sqrt_minus_three_in_eisenstein_field() {
        let k = field(&[1, 1, 1]); // x^2 + x + 1
        let r = k.sqrt(&k.from_int(-3)).unwrap().expect("-3 = (1 + 2 zeta)^2");
        assert_eq!(k.mul(&r, &r), k.from_int(-3));
        assert!(k.sqrt(&k.from_int(2)).unwrap().is_none());
    }

    #[test]
    fn rationals_special_cases() {
        let qf = NumberField::rationals();
        let e = qf.from_rational(qq(4, 9));
        assert_eq!(
            qf.sqrt(&e).unwrap().unwrap().as_rational().unwrap(),
            qq(2, 3)
        );
        assert!(qf.sqrt(&qf.from_int(2)).unwrap().is_none());
        assert!(qf.sqrt(&qf.from_int(-4)).unwrap().is_none());
        assert_eq!(
            qf.min_poly(&qf.from_rational(qq(7, 3))),
            QPoly::from_coeffs(vec![qq(-7, 3), q(1)])
        );
    }

    #[test]
    fn adjoin_cubic_over_quadratic() {
        // Q(sqrt-1), then a root of T^3 - 2: degree 6 field
        let qf = NumberField::rationals();
        let s1 = adjoin_root(&qf, &[qf.from_int(1), qf.from_int(0), qf.from_int(1)]).unwrap();
        let k1 = s1.field.clone();
        let s2 = adjoin_root(&k1, &[k1.from_int(-2), k1.from_int(0), k1.from_int(0), k1.from_int(1)]).unwrap();
        let k2 = s2.field.clone();
        assert_eq!(k2.degree(), 6);
        let cbrt = &s2.root;
        assert_eq!(k2.pow(cbrt, 3), k2.from_int(2));
        let i_in_k2 = k2.transport(&s1.root, &s2.old_gen);
        assert_eq!(k2.mul(&i_in_k2, &i_in_k2), k2.from_int(-1));
        assert_eq!(k2.min_poly_z(cbrt), ZPoly::from_coeffs(
            [-2i64, 0, 0, 1].iter().map(|&c| BigInt::from(c)).collect(),
        ));
    }

    #[test]
    fn sqrt_with_denominators() {
        let k = field(&[-2, 0, 1]);
        // (3/2 + sqrt2)^2 = 9/4 + 2 + 3 sqrt2 = 17/4 + 3 sqrt2
        let c = NfElement {
            coords: vec![qq(17, 4), q(3)],
        };
        let r = k.sqrt(&c).unwrap().expect("constructed as a square");
        assert_eq!(k.mul(&r, &r), c);
    }
}
