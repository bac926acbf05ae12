//! Selection and certification of supersingular primes with provably
//! surjective mod-p Galois image, the height-gap constants attached to such
//! a prime, and an empirical scan checking the gap bound on sampled torsion
//! field elements.

use crate::arith::{inv_mod, legendre, mul_mod, next_prime_u64, sub_mod};
use crate::elliptic::{trace_q, CurveError, CurveQ};
use crate::heights::{is_root_of_unity_minpoly, weil_height};
use crate::torsion::{sample_field_elements, torsion_field, TorsionError};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PrimeSearchError {
    #[error("no admissible prime found at or below {0}")]
    NotFoundBelowBound(u64),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Which maximal-subgroup class of GL2(F_p) a Frobenius witness rules out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RuledOutClass {
    Borel,
    SplitCartanNormalizer,
    NonsplitCartanNormalizer,
    Exceptional,
}

#[derive(Clone, Debug, Serialize)]
pub struct P2Witness {
    pub ell: u64,
    pub a_ell: i64,
    pub a_ell_mod_p: u64,
    pub rules_out: RuledOutClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum P2Status {
    Verified,
    Inconclusive,
}

/// Everything known about one prime for one curve. `p1` and `p2` are
/// one-sided: `p1 && p2 == Verified` certifies admissibility, anything else
/// proves nothing about the curve.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeCertificate {
    pub p: u64,
    pub q: u64,
    pub a_p: i64,
    pub a_q: i64,
    pub j_tilde: u64,
    pub p1: bool,
    pub p1_reason: String,
    pub p2: P2Status,
    pub p2_evidence: Vec<P2Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct P1Outcome {
    pub holds: bool,
    pub reason: String,
    pub a_p: Option<i64>,
    pub j_tilde: Option<u64>,
}

/// Good supersingular reduction with j-invariant away from {0, 1728}.
pub fn check_p1(curve: &CurveQ, p: u64) -> P1Outcome {
    let red = match curve.reduce_mod(p) {
        Ok(r) => r,
        Err(e) => {
            return P1Outcome {
                holds: false,
                reason: e.to_string(),
                a_p: None,
                j_tilde: None,
            }
        }
    };
    let j = red.j_invariant();
    let (_, a_p) = match red.count_points() {
        Ok(v) => v,
        Err(e) => {
            return P1Outcome {
                holds: false,
                reason: e.to_string(),
                a_p: None,
                j_tilde: Some(j),
            }
        }
    };
    if a_p != 0 {
        return P1Outcome {
            holds: false,
            reason: format!("ordinary reduction, a_{} = {}", p, a_p),
            a_p: Some(a_p),
            j_tilde: Some(j),
        };
    }
    if j == 0 || j == 1728 % p {
        return P1Outcome {
            holds: false,
            reason: format!("reduced j-invariant {} lies in {{0, 1728}}", j),
            a_p: Some(0),
            j_tilde: Some(j),
        };
    }
    P1Outcome {
        holds: true,
        reason: format!("supersingular at {}, reduced j-invariant {}", p, j),
        a_p: Some(0),
        j_tilde: Some(j),
    }
}

/// One-sided surjectivity test for the mod-p representation from Frobenius
/// characteristic polynomials x^2 - a_l x + l mod p over good primes l.
///
/// Verified requires: an irreducible characteristic polynomial (kills
/// Borel), elements with nonzero trace and eigenvalue discriminant of both
/// quadratic characters (kills both Cartan normalizers: the inner Cartan
/// constrains the discriminant character, the outer coset forces trace 0),
/// an element of projective order at least 7 (kills the exceptional
/// A4/S4/A5 images), and determinants generating all of F_p^*. A subgroup
/// avoiding every maximal class and surjecting under det is GL2(F_p).
pub fn check_p2(curve: &CurveQ, p: u64, ell_max: u64) -> (P2Status, Vec<P2Witness>) {
    assert!(p >= 5 && ell_max >= 20);
    let mut evidence: Vec<P2Witness> = Vec::new();
    let mut have = [false; 4]; // indexed by RuledOutClass order
    let mut det_order_lcm: u64 = 1;
    let mut ell = 5u64;
    while ell <= ell_max {
        if ell != p {
            if let Ok(red) = curve.reduce_mod(ell) {
                if let Ok((_, a_ell)) = red.count_points() {
                    let a_mod = a_ell.rem_euclid(p as i64) as u64;
                    let ell_mod = ell % p;
                    let disc =
                        sub_mod(mul_mod(a_mod, a_mod, p), mul_mod(4, ell_mod, p), p);
                    let chi = legendre(disc as i64, p);
                    let mut claim = |cls: RuledOutClass, have: &mut [bool; 4]| {
                        let idx = cls as usize;
                        if !have[idx] {
                            have[idx] = true;
                            evidence.push(P2Witness {
                                ell,
                                a_ell,
                                a_ell_mod_p: a_mod,
                                rules_out: cls,
                            });
                        }
                    };
                    if chi == -1 {
                        claim(RuledOutClass::Borel, &mut have);
                    }
                    if a_mod != 0 {
                        if chi == -1 {
                            // eigenvalues generate F_{p^2}: not inside a
                            // split Cartan, and trace nonzero keeps it out
                            // of the nonsplit normalizer's outer coset
                            claim(RuledOutClass::SplitCartanNormalizer, &mut have);
                        } else if chi == 1 {
                            claim(RuledOutClass::NonsplitCartanNormalizer, &mut have);
                        }
                        // projective order witness u = a^2 / l mod p:
                        // u in {0,1,2,3,4} or u^2-3u+1 = 0 exactly for
                        // projective orders 1,2,3,4,5,6
                        let u = mul_mod(
                            mul_mod(a_mod, a_mod, p),
                            inv_mod(ell_mod, p),
                            p,
                        );
                        let small = u <= 4;
                        let order5 = sub_mod(
                            mul_mod(u, u, p),
                            sub_mod(mul_mod(3, u, p), 1, p),
                            p,
                        ) == 0;
                        if !small && !order5 {
                            claim(RuledOutClass::Exceptional, &mut have);
                        }
                    }
                    if ell_mod != 0 {
                        det_order_lcm =
                            num_integer::lcm(det_order_lcm, mult_order(ell_mod, p));
                    }
                    if have.iter().all(|x| *x) && det_order_lcm == p - 1 {
                        return (P2Status::Verified, evidence);
                    }
                }
            }
        }
        ell = next_prime_u64(ell);
    }
    (P2Status::Inconclusive, evidence)
}

fn mult_order(a: u64, p: u64) -> u64 {
    // order of a in F_p^*: divisors of p-1 in increasing order
    let n = p - 1;
    let mut divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    divs.sort_unstable();
    for d in divs {
        if crate::arith::pow_mod(a, d, p) == 1 {
            return d;
        }
    }
    unreachable!("Fermat")
}

/// Full certificate for one (curve, prime) pair; works for inadmissible
/// primes too and records why they fail.
pub fn certify_prime(
    curve: &CurveQ,
    p: u64,
    ell_max: u64,
) -> Result<PrimeCertificate, CurveError> {
    let red = curve.reduce_mod(p)?;
    let (_, a_p) = red.count_points()?;
    let a_q = trace_q(a_p, p)?;
    let p1 = check_p1(curve, p);
    let (p2, p2_evidence) = check_p2(curve, p, ell_max);
    Ok(PrimeCertificate {
        p,
        q: p * p,
        a_p,
        a_q,
        j_tilde: red.j_invariant(),
        p1: p1.holds,
        p1_reason: p1.reason,
        p2,
        p2_evidence,
    })
}

/// Smallest prime <= p_max satisfying both properties, with certificate.
pub fn find_admissible_prime(
    curve: &CurveQ,
    p_max: u64,
    ell_max: u64,
) -> Result<PrimeCertificate, PrimeSearchError> {
    let mut p = 5u64;
    while p <= p_max {
        if check_p1(curve, p).holds {
            let (status, _) = check_p2(curve, p, ell_max);
            if status == P2Status::Verified {
                return Ok(certify_prime(curve, p, ell_max)?);
            }
        }
        p = next_prime_u64(p);
    }
    Err(PrimeSearchError::NotFoundBelowBound(p_max))
}

#[derive(Clone, Debug, Serialize)]
pub struct GapConstants {
    pub p: u64,
    pub q: u64,
    /// log(p/2) / (p^2 + 1): the unramified height gap.
    pub unramified_bound: f64,
    /// log p / (2 p^8): the ramified height gap.
    pub ramified_bound: f64,
    /// Q(1) = (q - 1) q.
    pub q1: u64,
    /// Q(n) = q for n >= 2.
    pub qn: u64,
}

pub fn gap_constants(p: u64) -> GapConstants {
    assert!(p >= 5, "gap constants need p >= 5");
    let q = p * p;
    let pf = p as f64;
    GapConstants {
        p,
        q,
        unramified_bound: (pf / 2.0).ln() / (pf * pf + 1.0),
        ramified_bound: pf.ln() / (2.0 * pf.powi(8)),
        q1: (q - 1) * q,
        qn: q,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapViolation {
    pub index: usize,
    pub height: f64,
    pub min_poly: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapScanReport {
    pub n: u32,
    pub p: u64,
    pub bound: f64,
    pub field_degree: usize,
    pub scanned: usize,
    pub skipped_roots_of_unity: usize,
    /// Minimum certified height over all scanned elements.
    pub min_observed: f64,
    pub violations: Vec<GapViolation>,
}

/// Sample elements of Q(E[N]) (N = 1 meaning Q itself) and compare every
/// height against the certificate prime's unramified gap bound. The bound is
/// a theorem for admissible primes, so a violation indicates a bug.
pub fn empirical_gap_scan(
    curve: &CurveQ,
    cert: &PrimeCertificate,
    n: u32,
    count: usize,
    seed: u64,
) -> Result<GapScanReport, TorsionError> {
    let bound = gap_constants(cert.p).unramified_bound;
    let (degree, polys): (usize, Vec<crate::poly::ZPoly>) = if n == 1 {
        (1, sample_rational_minpolys(count, seed))
    } else {
        let handle = torsion_field(curve, n)?;
        let elems = sample_field_elements(&handle, count, seed);
        (
            handle.field.degree(),
            elems.iter().map(|e| handle.field.min_poly_z(e)).collect(),
        )
    };
    let mut report = GapScanReport {
        n,
        p: cert.p,
        bound,
        field_degree: degree,
        scanned: 0,
        skipped_roots_of_unity: 0,
        min_observed: f64::INFINITY,
        violations: Vec::new(),
    };
    for (index, m) in polys.iter().enumerate() {
        if is_root_of_unity_minpoly(m) {
            report.skipped_roots_of_unity += 1;
            continue;
        }
        let h = weil_height(m).expect("height of sampled minimal polynomial");
        report.scanned += 1;
        if h.value < report.min_observed {
            report.min_observed = h.value;
        }
        if h.value < bound {
            report.violations.push(GapViolation {
                index,
                height: h.value,
                min_poly: m.to_qpoly().display("x"),
            });
        }
    }
    Ok(report)
}

/// Deterministic nonzero non-unit rationals: the four height-log-2 elements
/// first, then seeded numerators/denominators.
fn sample_rational_minpolys(count: usize, seed: u64) -> Vec<crate::poly::ZPoly> {
    let mut rats: Vec<BigRational> = Vec::with_capacity(count);
    let fixed = [(2i64, 1i64), (1, 2), (-2, 1), (-1, 2)];
    for &(n, d) in fixed.iter().take(count) {
        rats.push(BigRational::new(BigInt::from(n), BigInt::from(d)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rats.len() < count {
        let n = rng.gen_range(-50i64..=50);
        let d = rng.gen_range(1i64..=50);
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        if !r.is_zero_or_unit() {
            rats.push(r);
        }
    }
    rats.iter()
        .map(|r| {
            crate::poly::ZPoly::from_coeffs(vec![-r.numer().clone(), r.denom().clone()])
        })
        .collect()
}

trait ZeroOrUnit {
    fn is_zero_or_unit(&self) -> bool;
}

impl ZeroOrUnit for BigRational {
    fn is_zero_or_unit(&self) -> bool {
        use num_traits::{One, Signed, Zero};
        self.is_zero() || self.abs().is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_rejects_j_zero_reduction() {
        // a = 5 vanishes mod 5: the reduction is y^2 = x^3 + 1 with j = 0,
        // so supersingularity at 5 is not enough
        let e = CurveQ::from_integers(5, 1).unwrap();
        let out = check_p1(&e, 5);
        assert!(!out.holds);
        assert_eq!(out.a_p, Some(0));
        assert_eq!(out.j_tilde, Some(0));

        let ej = CurveQ::from_integers(0, 1).unwrap();
        for p in [7, 13, 31] {
            assert!(!check_p1(&ej, p).holds);
        }
    }

    #[test]
    fn p1_rejects_bad_and_ordinary_reduction() {
        let e = CurveQ::from_integers(1, 1).unwrap();
        let out = check_p1(&e, 31); // 31 | disc
        assert!(!out.holds && out.a_p.is_none());
        let out7 = check_p1(&e, 7);
        assert_eq!(out7.holds, out7.a_p == Some(0) && out7.j_tilde != Some(0));
    }

    #[test]
    fn admissible_prime_for_the_running_curve() {
        let e = CurveQ::from_integers(5, 1).unwrap();
        let cert = find_admissible_prime(&e, 1000, 10_000).unwrap();
        assert_eq!(cert.p, 131);
        assert_eq!(cert.a_p, 0);
        assert_eq!(cert.a_q, -2 * 131);
        assert!(cert.p1);
        assert_eq!(cert.p2, P2Status::Verified);
        assert!(cert.j_tilde != 0 && cert.j_tilde != 1728 % 131);
        // witnesses cover all four classes
        for cls in [
            RuledOutClass::Borel,
            RuledOutClass::SplitCartanNormalizer,
            RuledOutClass::NonsplitCartanNormalizer,
            RuledOutClass::Exceptional,
        ] {
            assert!(cert.p2_evidence.iter().any(|w| w.rules_out == cls));
        }
    }

    #[test]
    fn cm_curve_is_inconclusive() {
        let e = CurveQ::from_integers(-1, 0).unwrap();
        let (status, _) = check_p2(&e, 5, 10_000);
        assert_eq!(status, P2Status::Inconclusive);
        assert!(matches!(
            find_admissible_prime(&e, 200, 2000),
            Err(PrimeSearchError::NotFoundBelowBound(200))
        ));
    }

    #[test]
    fn tiny_pmax_exhausts() {
        let e = CurveQ::from_integers(5, 1).unwrap();
        assert!(matches!(
            find_admissible_prime(&e, 3, 1000),
            Err(PrimeSearchError::NotFoundBelowBound(3))
        ));
    }

    #[test]
    fn gap_constants_at_five_and_monotonicity() {
        let g = gap_constants(5);
        assert!((g.unramified_bound - (2.5f64).ln() / 26.0).abs() < 1e-15);
        assert!((g.ramified_bound - (5f64).ln() / 781_250.0).abs() < 1e-18);
        assert_eq!((g.q1, g.qn), (600, 25));
        let mut prev = f64::INFINITY;
        for p in [5u64, 7, 11, 13] {
            let g = gap_constants(p);
            assert!(g.unramified_bound > 0.0 && g.ramified_bound > 0.0);
            assert!(g.unramified_bound < prev);
            prev = g.unramified_bound;
        }
    }

    #[test]
    fn rational_gap_scan_floor_is_log_two() {
        let e = CurveQ::from_integers(5, 1).unwrap();
        let cert = certify_prime(&e, 5, 100).unwrap();
        let report = empirical_gap_scan(&e, &cert, 1, 100, 21).unwrap();
        assert!(report.violations.is_empty());
        assert!((report.min_observed - 2f64.ln()).abs() < 1e-12);
        assert_eq!(report.scanned, 100);
    }

    #[test]
    fn certificate_serializes() {
        let e = CurveQ::from_integers(5, 1).unwrap();
        let cert = certify_prime(&e, 5, 200).unwrap();
        let js = serde_json::to_string(&cert).unwrap();
        assert!(js.contains("\"p\":5") && js.contains("Inconclusive"));
        assert!(!cert.p1, "p = 5 must fail P1 on the j-invariant exclusion");
    }
}
