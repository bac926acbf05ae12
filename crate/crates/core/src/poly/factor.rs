//! Factorization of integer polynomials: squarefree decomposition (Yun),
//! modular factorization at a well-chosen prime, Hensel lifting of the factor
//! set, and Zassenhaus subset recombination. Degrees are capped; callers that
//! legitimately need more must restructure their query.

use super::gcd::gcd_q;
use super::modp::{factor_squarefree_modp, PolyP};
use super::{QPoly, ZPoly};
use crate::arith::{is_prime_u64, next_prime_u64};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest degree the factorization routines accept.
pub const FACTOR_DEGREE_CAP: usize = 64;

#[derive(Debug, Error)]
pub enum FactorError {
    #[error("degree {0} exceeds factorization cap {FACTOR_DEGREE_CAP}")]
    DegreeCapExceeded(usize),
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("modular factor recombination exceeded budget ({0} modular factors)")]
    RecombinationBudget(usize),
}

/// Factors with multiplicity; factors are primitive integer polynomials with
/// positive leading coefficient, sorted by degree then coefficients. The
/// rational `unit` collects content and sign: `f = unit * prod f_i^{e_i}`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub unit: num_rational::BigRational,
    pub factors: Vec<(ZPoly, u32)>,
}

/// Yun squarefree decomposition of a primitive integer polynomial: returns
/// `[(g_1, 1), (g_2, 2), ...]` with `f = prod g_i^i`, each `g_i` squarefree,
/// pairwise coprime (trivial `g_i = 1` entries omitted).
pub fn squarefree_decomposition(f: &ZPoly) -> Vec<(ZPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().map_or(true, |d| d == 0) {
        return out;
    }
    let fq = f.to_qpoly().monic();
    let mut i = 1u32;
    let mut g = gcd_q(&fq, &fq.derivative());
    let mut c = fq.div_exact(&g);
    while c.degree().map_or(false, |d| d >= 1) {
        let d = gcd_q(&c, &g);
        let part = c.div_exact(&d);
        if part.degree().map_or(false, |dd| dd >= 1) {
            out.push((part.primitive_z(), i));
        }
        i += 1;
        c = d.clone();
        g = g.div_exact(&d);
    }
    out
}

/// Pick a factoring prime for a squarefree primitive `f`: odd, not dividing
/// the leading coefficient, `f mod p` squarefree. Tries a fixed sequence and
/// returns the factorizations mod each candidate so the caller can pick the
/// one with fewest modular factors.
fn candidate_primes(f: &ZPoly, how_many: usize) -> Vec<(u64, Vec<PolyP>)> {
    let mut out = Vec::new();
    let mut p = 3u64;
    let lc = f.leading();
    while out.len() < how_many && p < 100_000 {
        if is_prime_u64(p) && !(lc.clone() % BigInt::from(p)).is_zero() {
            let fp = f.to_modp(p).monic();
            if fp.deg_or0() == f.deg_or0() && fp.is_squarefree() {
                let mut rng = ChaCha8Rng::seed_from_u64(0xFAC70 ^ p);
                let factors = factor_squarefree_modp(&fp, &mut rng);
                out.push((p, factors));
            }
        }
        p = next_prime_u64(p);
    }
    out
}

/// Possible proper factor degrees from one modular pattern, as a bitmask.
fn subset_degree_mask(degrees: &[usize], n: usize) -> u128 {
    let mut mask: u128 = 1; // degree 0 reachable
    for &d in degrees {
        mask |= mask << d;
    }
    mask & ((1u128 << (n + 1)) - 1)
}

/// Hensel lift: given `F = A*B mod p` with `A` monic mod p, `gcd(A,B) = 1`
/// mod p, lift to `F = A'*B' mod p^K` (linear steps). Coefficients of the
/// returned polynomials are reduced into `[0, p^K)`.
fn hensel_pair(
    f: &ZPoly,
    a0: &PolyP,
    b0: &PolyP,
    p: u64,
    target: &BigInt,
) -> (ZPoly, ZPoly) {
    // Bezout: s*a0 + t*b0 = 1 mod p.
    let (s, t) = bezout_modp(a0, b0);
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut a = lift_poly(a0);
    let mut b = lift_poly(b0);
    while &modulus < target {
        // e = (f - a*b)/modulus mod p
        let diff = f.sub(&a.mul(&b));
        let e_int = ZPoly::from_coeffs(
            diff.coeffs()
                .iter()
                .map(|c| {
                    debug_assert!((c % &modulus).is_zero());
                    c / &modulus
                })
                .collect(),
        );
        let e = e_int.to_modp(p);
        if !e.is_zero() {
            let a_p = a.to_modp(p);
            // u*B + v*A = e mod p with deg u < deg A: u = te mod A, v = se + Bq.
            let (q, u) = t.mul(&e).divrem(&a_p);
            let v = s.mul(&e).add(&b.to_modp(p).mul(&q));
            a = a.add(&lift_poly(&u).mul_scalar(&modulus));
            b = b.add(&lift_poly(&v).mul_scalar(&modulus));
        }
        modulus = &modulus * &pb;
        a = reduce_mod(&a, &modulus);
        b = reduce_mod(&b, &modulus);
    }
    (a, b)
}

pub(crate) fn bezout_modp(a: &PolyP, b: &PolyP) -> (PolyP, PolyP) {
    // Extended Euclid over F_p: s*a + t*b = 1.
    let p = a.p;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (PolyP::one(p), PolyP::zero(p));
    let (mut t0, mut t1) = (PolyP::zero(p), PolyP::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    // r0 is a nonzero constant; scale to 1.
    assert_eq!(r0.deg_or0(), 0, "hensel inputs not coprime mod p");
    let inv = crate::arith::inv_mod(r0.coeff(0), p);
    (s0.mul_scalar(inv), t0.mul_scalar(inv))
}

pub(crate) fn lift_poly(f: &PolyP) -> ZPoly {
    ZPoly::from_coeffs(f.coeffs().iter().map(|&c| BigInt::from(c)).collect())
}

pub(crate) fn reduce_mod(f: &ZPoly, m: &BigInt) -> ZPoly {
    ZPoly::from_coeffs(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

pub(crate) fn symmetric_poly(f: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ZPoly::from_coeffs(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Lift the full modular factor list of `f` to modulus `target = p^K`.
/// `factors` are monic irreducible mod p. Returns monic-mod-p^K lifts.
pub(crate) fn hensel_tree(f: &ZPoly, factors: &[PolyP], p: u64, target: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        // f = lc * g mod p^K: monicize f.
        let lc_inv = modinv_big(&f.leading(), target);
        return vec![reduce_mod(&f.mul_scalar(&lc_inv), target)];
    }
    let mid = factors.len() / 2;
    let p_ = factors[0].p;
    let mut left = PolyP::one(p_);
    for g in &factors[..mid] {
        left = left.mul(g);
    }
    let mut right = PolyP::one(p_);
    for g in &factors[mid..] {
        right = right.mul(g);
    }
    let lc_modp = f.to_modp(p).leading();
    let right_lc = right.mul_scalar(lc_modp);
    let (a, b) = hensel_pair(&reduce_mod(f, target), &left, &right_lc, p, target);
    let mut out = hensel_tree(&a, &factors[..mid], p, target);
    out.extend(hensel_tree(&b, &factors[mid..], p, target));
    out
}

pub(crate) fn modinv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "modinv_big: not invertible");
    e.x.mod_floor(m)
}

/// Factor a squarefree primitive integer polynomial into irreducibles.
fn factor_squarefree_z(f: &ZPoly) -> Result<Vec<ZPoly>, FactorError> {
    let n = match f.degree() {
        None => return Err(FactorError::ZeroPolynomial),
        Some(0) => return Ok(vec![]),
        Some(n) => n,
    };
    if n > FACTOR_DEGREE_CAP {
        return Err(FactorError::DegreeCapExceeded(n));
    }
    if n == 1 {
        return Ok(vec![f.clone()]);
    }
    let cands = candidate_primes(f, 7);
    assert!(!cands.is_empty(), "no usable factoring prime found");
    // Degree-pattern intersection: if no proper factor degree is possible,
    // f is irreducible.
    let mut mask = (1u128 << (n + 1)) - 1;
    for (_, fs) in &cands {
        let degs: Vec<usize> = fs.iter().map(|g| g.deg_or0()).collect();
        mask &= subset_degree_mask(&degs, n);
    }
    let proper: u128 = mask & !(1u128 | (1u128 << n));
    if proper == 0 {
        return Ok(vec![f.clone()]);
    }
    let (p, modular) = cands
        .iter()
        .min_by_key(|(_, fs)| fs.len())
        .expect("nonempty candidates")
        .clone();
    let r = modular.len();
    if r == 1 {
        return Ok(vec![f.clone()]);
    }
    if r > 26 {
        return Err(FactorError::RecombinationBudget(r));
    }
    // Lift to p^K > 2 * coefficient bound.
    let bound = f.factor_coeff_bound();
    let mut target = BigInt::from(p);
    while target < &bound * 2 {
        target = &target * BigInt::from(p);
    }
    let lifted = hensel_tree(f, &modular, p, &target);

    // Zassenhaus recombination.
    let mut live: Vec<ZPoly> = lifted;
    let mut rest = f.clone();
    let mut out: Vec<ZPoly> = Vec::new();
    let mut card = 1usize;
    'outer: while 2 * card <= live.len() {
        let idxs: Vec<usize> = (0..live.len()).collect();
        for combo in combinations(&idxs, card) {
            let lc = rest.leading();
            let mut prod = ZPoly::from_coeffs(vec![lc.clone()]);
            for &i in &combo {
                prod = reduce_mod(&prod.mul(&live[i]), &target);
            }
            let cand = symmetric_poly(&prod, &target).primitive_part();
            if cand.degree().map_or(true, |d| d == 0) {
                continue;
            }
            // Cheap filter: constant term must divide lc * rest(0).
            let c0 = cand.coeff(0);
            if !c0.is_zero() {
                let t0 = &lc * rest.coeff(0);
                if !(t0 % &c0).is_zero() {
                    continue;
                }
            }
            if divides(&cand, &rest) {
                rest = rest
                    .mul_scalar(&cand.leading())
                    .div_exact(&cand)
                    .primitive_part();
                out.push(cand);
                let mut keep = Vec::new();
                for (i, g) in live.drain(..).enumerate() {
                    if !combo.contains(&i) {
                        keep.push(g);
                    }
                }
                live = keep;
                continue 'outer;
            }
        }
        card += 1;
    }
    if rest.degree().map_or(false, |d| d >= 1) {
        out.push(rest.primitive_part());
    }
    out.sort_by(|a, b| {
        a.deg_or0()
            .cmp(&b.deg_or0())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    Ok(out)
}

fn divides(d: &ZPoly, f: &ZPoly) -> bool {
    // Test divisibility over Q (content-insensitive since d primitive).
    let (_, r) = f.to_qpoly().divrem(&d.to_qpoly());
    r.is_zero()
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    let n = items.len();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Factor an arbitrary nonzero rational polynomial into primitive integer
/// irreducibles times a rational unit.
pub fn factor_q(f: &QPoly) -> Result<Factorization, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    if let Some(d) = f.degree() {
        if d > FACTOR_DEGREE_CAP {
            return Err(FactorError::DegreeCapExceeded(d));
        }
    }
    let prim = if f.degree() == Some(0) {
        return Ok(Factorization {
            unit: f.coeff(0),
            factors: vec![],
        });
    } else {
        f.primitive_z()
    };
    let mut factors: Vec<(ZPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&prim) {
        for irr in factor_squarefree_z(&part)? {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|a, b| {
        a.0.deg_or0()
            .cmp(&b.0.deg_or0())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    // unit = f / prod factors^mult
    let mut prod = QPoly::one();
    for (g, e) in &factors {
        prod = prod.mul(&g.to_qpoly().pow(*e as usize));
    }
    let unit_poly_num = f.leading();
    let unit_poly_den = prod.leading();
    Ok(Factorization {
        unit: unit_poly_num / unit_poly_den,
        factors,
    })
}

/// Irreducibility over Q (degree >= 1 required).
pub fn is_irreducible_q(f: &QPoly) -> Result<bool, FactorError> {
    match f.degree() {
        None | Some(0) => Ok(false),
        Some(1) => Ok(true),
        Some(_) => {
            let fact = factor_q(f)?;
            Ok(fact.factors.len() == 1 && fact.factors[0].1 == 1)
        }
    }
}

/// n-th cyclotomic polynomial, exact.
pub fn cyclotomic(n: u64) -> ZPoly {
    assert!(n >= 1);
    // x^n - 1 divided by all lower cyclotomics at divisors of n.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    let mut acc = ZPoly::from_coeffs(num);
    for d in 1..n {
        if n % d == 0 {
            acc = acc.div_exact(&cyclotomic(d));
        }
    }
    acc
}

/// Euler phi by trial division.
pub fn euler_phi(n: u64) -> u64 {
    let mut n_ = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n_ {
        if n_ % p == 0 {
            while n_ % p == 0 {
                n_ /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n_ > 1 {
        result -= result / n_;
    }
    result
}

/// If `f` (monic irreducible over Q, given as primitive ZPoly) is the minimal
/// polynomial of a root of unity, return its order.
pub fn cyclotomic_order(f: &ZPoly) -> Option<u64> {
    let d = f.degree()? as u64;
    if !f.is_monic() {
        return None;
    }
    // phi(n) = d forces n <= 2 d^2 + 6 comfortably (phi(n) >= sqrt(n/2)).
    let bound = 2 * d * d + 6;
    for n in 1..=bound {
        if euler_phi(n) == d && &cyclotomic(n) == f {
            return Some(n);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_decomposition_exponents() {
        // f = (x-1)^3 (x+2)^1
        let f = ZPoly::from_i64(&[-1, 1])
            .mul(&ZPoly::from_i64(&[-1, 1]))
            .mul(&ZPoly::from_i64(&[-1, 1]))
            .mul(&ZPoly::from_i64(&[2, 1]));
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (ZPoly::from_i64(&[2, 1]), 1));
        assert_eq!(parts[1], (ZPoly::from_i64(&[-1, 1]), 3));
    }

    #[test]
    fn factor_product_of_quadratics() {
        // (x^2 - 2)(x^2 - 3)(x + 5)
        let f = ZPoly::from_i64(&[-2, 0, 1])
            .mul(&ZPoly::from_i64(&[-3, 0, 1]))
            .mul(&ZPoly::from_i64(&[5, 1]));
        let fact = factor_q(&f.to_qpoly()).unwrap();
        let degs: Vec<usize> = fact.factors.iter().map(|(g, _)| g.deg_or0()).collect();
        assert_eq!(degs, vec![1, 2, 2]);
        assert!(fact
            .factors
            .iter()
            .any(|(g, _)| g == &ZPoly::from_i64(&[-2, 0, 1])));
    }

    #[test]
    fn irreducibility_of_eisenstein_and_cyclotomic() {
        assert!(is_irreducible_q(&QPoly::from_i64(&[-2, 0, 0, 1])).unwrap());
        assert!(is_irreducible_q(&cyclotomic(12).to_qpoly()).unwrap());
        assert!(!is_irreducible_q(&QPoly::from_i64(&[-1, 0, 1])).unwrap());
    }

    #[test]
    fn factor_with_nontrivial_content_and_lc() {
        // 6 x^2 - 6 = 6 (x-1)(x+1)
        let f = QPoly::from_i64(&[-6, 0, 6]);
        let fact = factor_q(&f).unwrap();
        assert_eq!(fact.factors.len(), 2);
        assert_eq!(fact.unit, num_rational::BigRational::from(BigInt::from(6)));
        // 4x^2 - 1 = (2x-1)(2x+1): non-monic irreducible factors.
        let g = QPoly::from_i64(&[-1, 0, 4]);
        let gf = factor_q(&g).unwrap();
        assert_eq!(gf.factors.len(), 2);
        assert!(gf.factors.iter().all(|(h, _)| h.deg_or0() == 1));
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic(1), ZPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), ZPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(4), ZPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), ZPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ZPoly::from_i64(&[1, 0, -1, 0, 1]));
        // phi(105) = 48; the famous first coefficient -2 appears at n = 105.
        let c105 = cyclotomic(105);
        assert_eq!(c105.deg_or0(), 48);
        assert_eq!(c105.coeff(7), BigInt::from(-2));
    }

    #[test]
    fn cyclotomic_order_detection() {
        assert_eq!(cyclotomic_order(&cyclotomic(30)), Some(30));
        assert_eq!(cyclotomic_order(&ZPoly::from_i64(&[-2, 0, 0, 1])), None);
        assert_eq!(cyclotomic_order(&ZPoly::from_i64(&[1, 1])), Some(2));
        // x^2 - x - 1 (golden ratio): not cyclotomic.
        assert_eq!(cyclotomic_order(&ZPoly::from_i64(&[-1, -1, 1])), None);
    }

    #[test]
    fn factor_degree_cap_enforced() {
        let mut coeffs = vec![BigInt::zero(); 66];
        coeffs[0] = BigInt::from(-1);
        coeffs[65] = BigInt::one();
        let f = ZPoly::from_coeffs(coeffs);
        assert!(matches!(
            factor_q(&f.to_qpoly()),
            Err(FactorError::DegreeCapExceeded(65))
        ));
    }

    #[test]
    fn factor_degree_48_galois_style_product() {
        // A deliberately awkward product: cyclotomic(105) (degree 48) splits
        // mod every prime into many factors; recombination must recover it
        // as irreducible by degree-pattern analysis or recombination.
        let c = cyclotomic(105).to_qpoly();
        assert!(is_irreducible_q(&c).unwrap());
    }
}
