//! Residue fields of the Laurent coefficient ring Z[t, t^-1].
//!
//! A "spot" selects a quotient (or fraction) field in the tower:
//!
//! * `Generic`            -> Q(t), the generic rational function field;
//! * `IntPrime(p)`        -> F_p(t);
//! * `IrrPoly(g)`         -> Q[t]/(g), a number field cut out by an
//!                           irreducible integer polynomial (t must stay
//!                           invertible, so g may not be `t` itself);
//! * `Maximal(p, gbar)`   -> F_p[t]/(gbar), a finite field at a maximal ideal.
//!
//! The `ResidueField` context owns the spot data and performs all arithmetic
//! on the element enum `K`, following the ring-as-context style used
//! throughout the crate. Elements are kept canonical (reduced fractions with
//! monic denominators; residues reduced modulo the defining polynomial), so
//! `PartialEq` on `K` is semantic equality within a fixed field.

use crate::fppoly::{self, FpPoly};
use crate::intfactor;
use crate::laurent::IntLaurent;
use crate::qpoly::{self, QPoly};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SpotError {
    #[error("prime expected, got {0}")]
    NotPrime(u64),
    #[error("polynomial is not irreducible over the required base: {0}")]
    NotIrreducible(String),
    #[error("t must remain invertible; {0} vanishes at the chosen spot")]
    TNotInvertible(String),
    #[error("cannot parse spot descriptor `{0}`")]
    BadDescriptor(String),
    #[error("division by zero in residue field")]
    DivisionByZero,
    #[error("prime too large (must fit below 2^32): {0}")]
    PrimeTooLarge(u64),
}

/// A prime (or zero) ideal of Z[t, t^-1] at which we take residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSpot {
    Generic,
    IntPrime(u64),
    IrrPoly(IntLaurent),
    /// `Maximal(p, gbar)`: gbar is a monic irreducible polynomial over F_p,
    /// stored densely with coefficients in `0..p`.
    Maximal(u64, Vec<u64>),
}

impl fmt::Display for PrimeSpot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSpot::Generic => write!(f, "generic"),
            PrimeSpot::IntPrime(p) => write!(f, "p={p}"),
            PrimeSpot::IrrPoly(g) => write!(f, "f={g}"),
            PrimeSpot::Maximal(p, g) => {
                write!(f, "max={p},{}", fp_display(g))
            }
        }
    }
}

fn fp_display(g: &[u64]) -> String {
    if g.is_empty() {
        return "0".into();
    }
    let mut parts = vec![];
    for (e, &c) in g.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let body = match e {
            0 => format!("{c}"),
            1 if c == 1 => "t".into(),
            1 => format!("{c}*t"),
            _ if c == 1 => format!("t^{e}"),
            _ => format!("{c}*t^{e}"),
        };
        parts.push(body);
    }
    parts.join("+")
}

/// An element of whichever residue field the ambient `ResidueField` defines.
#[derive(Debug, Clone, PartialEq)]
pub enum K {
    /// Reduced fraction in Q(t); denominator monic, gcd(num, den) = 1.
    QRat(QPoly, QPoly),
    /// Reduced fraction in F_p(t); denominator monic.
    FpRat(FpPoly, FpPoly),
    /// Residue in Q[t]/(g), reduced mod g.
    NumF(QPoly),
    /// Residue in F_p[t]/(gbar), reduced mod gbar.
    Fin(FpPoly),
}

/// Field context: all arithmetic on `K` goes through this.
#[derive(Debug, Clone)]
pub struct ResidueField {
    pub spot: PrimeSpot,
    /// For `IrrPoly`: the defining polynomial as a monic QPoly.
    modulus_q: Option<QPoly>,
    /// Inverse of the residue of t (needed because t must stay a unit).
    t_inverse: Option<K>,
}

impl ResidueField {
    pub fn new(spot: PrimeSpot) -> Result<ResidueField, SpotError> {
        match &spot {
            PrimeSpot::Generic => Ok(ResidueField {
                spot,
                modulus_q: None,
                t_inverse: None,
            }),
            PrimeSpot::IntPrime(p) => {
                check_prime(*p)?;
                Ok(ResidueField {
                    spot,
                    modulus_q: None,
                    t_inverse: None,
                })
            }
            PrimeSpot::IrrPoly(g) => {
                if !intfactor::is_irreducible_in_zt(g) {
                    return Err(SpotError::NotIrreducible(format!("{g}")));
                }
                let (_, _, gq) = qpoly::from_laurent_parts(g);
                let gq = qpoly::monic(&gq);
                if qpoly::deg(&gq).unwrap_or(0) == 0 {
                    return Err(SpotError::NotIrreducible(format!("{g}")));
                }
                // t must be invertible mod g, i.e. g(0) != 0.
                if gq[0].is_zero() {
                    return Err(SpotError::TNotInvertible(format!("{g}")));
                }
                let mut fld = ResidueField {
                    spot,
                    modulus_q: Some(gq.clone()),
                    t_inverse: None,
                };
                let t = fld.reduce_q(vec![BigRational::zero(), BigRational::one()]);
                let tinv = fld.inv(&t)?;
                fld.t_inverse = Some(tinv);
                Ok(fld)
            }
            PrimeSpot::Maximal(p, g) => {
                check_prime(*p)?;
                let g = fppoly::monic(&fppoly::normalize(g.clone()), *p);
                if fppoly::deg(&g).unwrap_or(0) == 0 {
                    return Err(SpotError::NotIrreducible(fp_display(&g)));
                }
                if !fppoly::is_irreducible(&g, *p) {
                    return Err(SpotError::NotIrreducible(fp_display(&g)));
                }
                if g[0] == 0 {
                    return Err(SpotError::TNotInvertible(fp_display(&g)));
                }
                let spot = PrimeSpot::Maximal(*p, g);
                let mut fld = ResidueField {
                    spot,
                    modulus_q: None,
                    t_inverse: None,
                };
                let t = fld.reduce_fp(vec![0, 1]);
                let tinv = fld.inv(&t)?;
                fld.t_inverse = Some(tinv);
                Ok(fld)
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &self.spot {
            PrimeSpot::Generic | PrimeSpot::IrrPoly(_) => 0,
            PrimeSpot::IntPrime(p) | PrimeSpot::Maximal(p, _) => *p,
        }
    }

    /// Q-dimension (resp. F_p-transcendence-free degree) of the field when it
    /// is finite over its prime field adjunction; `None` for function fields.
    pub fn finite_degree(&self) -> Option<usize> {
        match &self.spot {
            PrimeSpot::Generic | PrimeSpot::IntPrime(_) => None,
            PrimeSpot::IrrPoly(_) => self.modulus_q.as_ref().and_then(qpoly::deg),
            PrimeSpot::Maximal(_, g) => fppoly::deg(g),
        }
    }

    /// The monic defining polynomial when the field is a number field.
    pub fn defining_polynomial(&self) -> Option<&QPoly> {
        self.modulus_q.as_ref()
    }

    pub fn zero(&self) -> K {
        match &self.spot {
            PrimeSpot::Generic => K::QRat(vec![], vec![BigRational::one()]),
            PrimeSpot::IntPrime(_) => K::FpRat(vec![], vec![1]),
            PrimeSpot::IrrPoly(_) => K::NumF(vec![]),
            PrimeSpot::Maximal(_, _) => K::Fin(vec![]),
        }
    }

    pub fn one(&self) -> K {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> K {
        match &self.spot {
            PrimeSpot::Generic => K::QRat(qpoly::from_int(n), vec![BigRational::one()]),
            PrimeSpot::IntPrime(p) | PrimeSpot::Maximal(p, _) => {
                let c = (n.rem_euclid(*p as i64)) as u64;
                let num = fppoly::normalize(vec![c]);
                match &self.spot {
                    PrimeSpot::IntPrime(_) => K::FpRat(num, vec![1]),
                    _ => K::Fin(num),
                }
            }
            PrimeSpot::IrrPoly(_) => K::NumF(qpoly::from_int(n)),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> K {
        match &self.spot {
            PrimeSpot::Generic => K::QRat(
                qpoly::normalize(vec![q.clone()]),
                vec![BigRational::one()],
            ),
            PrimeSpot::IrrPoly(_) => K::NumF(qpoly::normalize(vec![q.clone()])),
            PrimeSpot::IntPrime(p) | PrimeSpot::Maximal(p, _) => {
                let pn = BigInt::from(*p);
                let num = q.numer().mod_floor_u64(&pn);
                let den = q.denom().mod_floor_u64(&pn);
                assert!(den != 0, "denominator divisible by p at a char-p spot");
                let c = (num as u128 * fppoly::inv_mod_p(den, *p) as u128 % *p as u128) as u64;
                let e = fppoly::normalize(vec![c]);
                match &self.spot {
                    PrimeSpot::IntPrime(_) => K::FpRat(e, vec![1]),
                    _ => K::Fin(e),
                }
            }
        }
    }

    /// Specializes a Laurent polynomial to this residue field.
    pub fn from_laurent(&self, f: &IntLaurent) -> K {
        if f.is_zero() {
            return self.zero();
        }
        let (sign, shift, dense) = f.to_poly_parts();
        let base = match &self.spot {
            PrimeSpot::Generic => {
                let num: QPoly =
                    qpoly::normalize(dense.iter().cloned().map(BigRational::from).collect());
                K::QRat(num, vec![BigRational::one()])
            }
            PrimeSpot::IntPrime(p) => {
                let num = fppoly::normalize(
                    dense
                        .iter()
                        .map(|c| c.mod_floor_u64(&BigInt::from(*p)))
                        .collect(),
                );
                K::FpRat(num, vec![1])
            }
            PrimeSpot::IrrPoly(_) => {
                let num: QPoly =
                    qpoly::normalize(dense.iter().cloned().map(BigRational::from).collect());
                self.reduce_q(num)
            }
            PrimeSpot::Maximal(p, _) => {
                let num = fppoly::normalize(
                    dense
                        .iter()
                        .map(|c| c.mod_floor_u64(&BigInt::from(*p)))
                        .collect(),
                );
                self.reduce_fp(num)
            }
        };
        let mut out = if sign < 0 { self.neg(&base) } else { base };
        // Apply t^shift.
        if shift != 0 {
            let tp = self.t_power(shift);
            out = self.mul(&out, &tp);
        }
        out
    }

    /// The residue of `t^e` (e may be negative: t is a unit at every spot).
    pub fn t_power(&self, e: i64) -> K {
        match &self.spot {
            PrimeSpot::Generic => {
                if e >= 0 {
                    K::QRat(q_t_pow(e as usize), vec![BigRational::one()])
                } else {
                    K::QRat(vec![BigRational::one()], q_t_pow((-e) as usize))
                }
            }
            PrimeSpot::IntPrime(_) => {
                if e >= 0 {
                    K::FpRat(fp_t_pow(e as usize), vec![1])
                } else {
                    K::FpRat(vec![1], fp_t_pow((-e) as usize))
                }
            }
            PrimeSpot::IrrPoly(_) | PrimeSpot::Maximal(_, _) => {
                if e >= 0 {
                    let raw = match &self.spot {
                        PrimeSpot::IrrPoly(_) => self.reduce_q(q_t_pow(e as usize)),
                        _ => self.reduce_fp(fp_t_pow(e as usize)),
                    };
                    raw
                } else {
                    let tinv = self.t_inverse.clone().expect("t inverse precomputed");
                    let mut out = self.one();
                    for _ in 0..(-e) {
                        out = self.mul(&out, &tinv);
                    }
                    out
                }
            }
        }
    }

    fn reduce_q(&self, f: QPoly) -> K {
        let m = self.modulus_q.as_ref().expect("number-field spot");
        K::NumF(qpoly::rem(&f, m))
    }

    fn reduce_fp(&self, f: FpPoly) -> K {
        let (p, g) = self.finite_data();
        K::Fin(fppoly::rem(&f, g, p))
    }

    fn finite_data(&self) -> (u64, &Vec<u64>) {
        match &self.spot {
            PrimeSpot::Maximal(p, g) => (*p, g),
            _ => panic!("not a finite spot"),
        }
    }

    pub fn is_zero(&self, a: &K) -> bool {
        match a {
            K::QRat(n, _) => n.is_empty(),
            K::FpRat(n, _) => n.is_empty(),
            K::NumF(n) => n.is_empty(),
            K::Fin(n) => n.is_empty(),
        }
    }

    pub fn eq(&self, a: &K, b: &K) -> bool {
        a == b
    }

    pub fn add(&self, a: &K, b: &K) -> K {
        match (a, b) {
            (K::QRat(an, ad), K::QRat(bn, bd)) => {
                let num = qpoly::add(&qpoly::mul(an, bd), &qpoly::mul(bn, ad));
                let den = qpoly::mul(ad, bd);
                qrat_reduce(num, den)
            }
            (K::FpRat(an, ad), K::FpRat(bn, bd)) => {
                let p = self.characteristic();
                let num = fppoly::add(&fppoly::mul(an, bd, p), &fppoly::mul(bn, ad, p), p);
                let den = fppoly::mul(ad, bd, p);
                fprat_reduce(num, den, p)
            }
            (K::NumF(x), K::NumF(y)) => K::NumF(qpoly::add(x, y)),
            (K::Fin(x), K::Fin(y)) => K::Fin(fppoly::add(x, y, self.characteristic())),
            _ => panic!("mixed-field arithmetic"),
        }
    }

    pub fn neg(&self, a: &K) -> K {
        match a {
            K::QRat(n, d) => K::QRat(qpoly::neg(n), d.clone()),
            K::FpRat(n, d) => K::FpRat(fppoly::neg(n, self.characteristic()), d.clone()),
            K::NumF(n) => K::NumF(qpoly::neg(n)),
            K::Fin(n) => K::Fin(fppoly::neg(n, self.characteristic())),
        }
    }

    pub fn sub(&self, a: &K, b: &K) -> K {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &K, b: &K) -> K {
        match (a, b) {
            (K::QRat(an, ad), K::QRat(bn, bd)) => {
                qrat_reduce(qpoly::mul(an, bn), qpoly::mul(ad, bd))
            }
            (K::FpRat(an, ad), K::FpRat(bn, bd)) => {
                let p = self.characteristic();
                fprat_reduce(fppoly::mul(an, bn, p), fppoly::mul(ad, bd, p), p)
            }
            (K::NumF(x), K::NumF(y)) => self.reduce_q(qpoly::mul(x, y)),
            (K::Fin(x), K::Fin(y)) => {
                let p = self.characteristic();
                self.reduce_fp(fppoly::mul(x, y, p))
            }
            _ => panic!("mixed-field arithmetic"),
        }
    }

    pub fn inv(&self, a: &K) -> Result<K, SpotError> {
        if self.is_zero(a) {
            return Err(SpotError::DivisionByZero);
        }
        Ok(match a {
            K::QRat(n, d) => qrat_reduce(d.clone(), n.clone()),
            K::FpRat(n, d) => fprat_reduce(d.clone(), n.clone(), self.characteristic()),
            K::NumF(x) => {
                let m = self.modulus_q.as_ref().unwrap();
                // xgcd(x, m) = (g, u, v) with u*x + v*m = g, g constant.
                let (g, u, _) = qpoly::xgcd(x, m);
                assert_eq!(qpoly::deg(&g), Some(0), "modulus not irreducible?");
                let c = BigRational::one() / g[0].clone();
                self.reduce_q(qpoly::scale(&u, &c))
            }
            K::Fin(x) => {
                let (p, g) = self.finite_data();
                K::Fin(fppoly::inverse_mod(x, g, p))
            }
        })
    }

    pub fn div(&self, a: &K, b: &K) -> Result<K, SpotError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &K, e: u64) -> K {
        let mut out = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(&out, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        out
    }

    /// Frobenius x -> x^p at a char-p spot.
    pub fn frobenius(&self, a: &K) -> K {
        let p = self.characteristic();
        assert!(p > 0, "frobenius requires positive characteristic");
        match a {
            K::Fin(x) => {
                let (p, g) = self.finite_data();
                K::Fin(fppoly::powmod(x, &BigUint::from(p), g, p))
            }
            K::FpRat(_, _) => self.pow(a, p),
            _ => unreachable!(),
        }
    }

    /// Inverse Frobenius (unique p-th root) at a char-p spot.
    ///
    /// Over a finite field F_{p^d} this is x -> x^{p^{d-1}}. Over F_p(t) an
    /// element a/b has the p-th root r(a * b^{p-1}) / b(t), where r extracts
    /// t^p -> t from a polynomial all of whose exponents are multiples of p
    /// (valid because c^p = c for c in F_p and f(t)^p = f(t^p)).
    pub fn pth_root(&self, a: &K) -> Option<K> {
        let p = self.characteristic();
        assert!(p > 0, "p-th roots require positive characteristic");
        match a {
            K::Fin(x) => {
                let (p, g) = self.finite_data();
                let d = fppoly::deg(g).unwrap() as u32;
                let e = BigUint::from(p).pow(d.saturating_sub(1));
                Some(K::Fin(fppoly::powmod(x, &e, g, p)))
            }
            K::FpRat(n, d) => {
                if n.is_empty() {
                    return Some(self.zero());
                }
                // a/b = (a b^{p-1}) / b^p, and b^p = B(t^p) with B = b.
                let mut num = n.clone();
                for _ in 0..p - 1 {
                    num = fppoly::mul(&num, d, p);
                }
                let root_num = fp_poly_pth_root(&num, p)?;
                Some(fprat_reduce(root_num, d.clone(), p))
            }
            _ => unreachable!(),
        }
    }

    /// Pretty printer for reporting.
    pub fn display(&self, a: &K) -> String {
        match a {
            K::QRat(n, d) => {
                if qpoly::deg(d) == Some(0) && d[0].is_one() {
                    q_display(n)
                } else {
                    format!("({})/({})", q_display(n), q_display(d))
                }
            }
            K::FpRat(n, d) => {
                if d == &vec![1u64] {
                    fp_display(n)
                } else {
                    format!("({})/({})", fp_display(n), fp_display(d))
                }
            }
            K::NumF(x) => q_display(x),
            K::Fin(x) => fp_display(x),
        }
    }
}

fn q_t_pow(e: usize) -> QPoly {
    let mut v = vec![BigRational::zero(); e];
    v.push(BigRational::one());
    v
}

fn fp_t_pow(e: usize) -> FpPoly {
    let mut v = vec![0u64; e];
    v.push(1);
    v
}

fn q_display(f: &QPoly) -> String {
    if f.is_empty() {
        return "0".into();
    }
    let mut parts: Vec<String> = vec![];
    for (e, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = match e {
            0 => format!("{mag}"),
            1 if mag.is_one() => "t".into(),
            1 => format!("{mag}*t"),
            _ if mag.is_one() => format!("t^{e}"),
            _ => format!("{mag}*t^{e}"),
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() {
                format!("-{body}")
            } else {
                body
            });
        } else {
            parts.push(format!("{}{}", if c.is_negative() { " - " } else { " + " }, body));
        }
    }
    parts.concat()
}

/// Returns canonical `K::QRat` with reduced fraction and monic denominator.
fn qrat_reduce(num: QPoly, den: QPoly) -> K {
    assert!(!den.is_empty(), "zero denominator");
    if num.is_empty() {
        return K::QRat(vec![], vec![BigRational::one()]);
    }
    let g = qpoly::gcd(&num, &den);
    let (mut num, mut den) = if qpoly::deg(&g) == Some(0) {
        (num, den)
    } else {
        (qpoly::divrem(&num, &g).0, qpoly::divrem(&den, &g).0)
    };
    let lc = den.last().unwrap().clone();
    if !lc.is_one() {
        let inv = BigRational::one() / lc;
        num = qpoly::scale(&num, &inv);
        den = qpoly::scale(&den, &inv);
    }
    K::QRat(num, den)
}

fn fprat_reduce(num: FpPoly, den: FpPoly, p: u64) -> K {
    assert!(!den.is_empty(), "zero denominator");
    if num.is_empty() {
        return K::FpRat(vec![], vec![1]);
    }
    let g = fppoly::gcd(&num, &den, p);
    let (mut num, mut den) = if fppoly::deg(&g) == Some(0) {
        (num, den)
    } else {
        (fppoly::divrem(&num, &g, p).0, fppoly::divrem(&den, &g, p).0)
    };
    let lc = *den.last().unwrap();
    if lc != 1 {
        let inv = fppoly::inv_mod_p(lc, p);
        num = fppoly::scale(&num, inv, p);
        den = fppoly::scale(&den, inv, p);
    }
    K::FpRat(num, den)
}

/// p-th root of a polynomial over F_p, if it is one (all exponents divisible
/// by p); coefficients are Frobenius-fixed so they pass through unchanged.
fn fp_poly_pth_root(f: &FpPoly, p: u64) -> Option<FpPoly> {
    let mut out = vec![];
    for (e, &c) in f.iter().enumerate() {
        if c != 0 && e as u64 % p != 0 {
            return None;
        }
        if e as u64 % p == 0 {
            out.push(c);
        }
    }
    Some(fppoly::normalize(out))
}

fn check_prime(p: u64) -> Result<(), SpotError> {
    if p >= 1 << 32 {
        return Err(SpotError::PrimeTooLarge(p));
    }
    let is_p = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if !is_p {
        return Err(SpotError::NotPrime(p));
    }
    Ok(())
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: &BigInt) -> u64;
}
impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, m: &BigInt) -> u64 {
        use num_integer::Integer;
        self.mod_floor(m).to_u64().unwrap()
    }
}

// ---------------------------------------------------------------------------
// Spot descriptors and localization data
// ---------------------------------------------------------------------------

/// Parses a spot descriptor:
/// `generic` | `p=5` | `phi=12` | `f=t^2-t-1` | `max=5,t^2+t+1`.
pub fn parse_spot(s: &str) -> Result<PrimeSpot, SpotError> {
    let s = s.trim();
    if s == "generic" {
        return Ok(PrimeSpot::Generic);
    }
    if let Some(rest) = s.strip_prefix("p=") {
        let p: u64 = rest
            .trim()
            .parse()
            .map_err(|_| SpotError::BadDescriptor(s.into()))?;
        check_prime(p)?;
        return Ok(PrimeSpot::IntPrime(p));
    }
    if let Some(rest) = s.strip_prefix("phi=") {
        let n: u64 = rest
            .trim()
            .parse()
            .map_err(|_| SpotError::BadDescriptor(s.into()))?;
        if n == 0 {
            return Err(SpotError::BadDescriptor(s.into()));
        }
        return Ok(PrimeSpot::IrrPoly(intfactor::cyclotomic(n)));
    }
    if let Some(rest) = s.strip_prefix("f=") {
        let g = crate::laurent::parse_laurent(rest.trim())
            .map_err(|_| SpotError::BadDescriptor(s.into()))?;
        return Ok(PrimeSpot::IrrPoly(g));
    }
    if let Some(rest) = s.strip_prefix("max=") {
        let (pstr, gstr) = rest
            .split_once(',')
            .ok_or_else(|| SpotError::BadDescriptor(s.into()))?;
        let p: u64 = pstr
            .trim()
            .parse()
            .map_err(|_| SpotError::BadDescriptor(s.into()))?;
        check_prime(p)?;
        let g = crate::laurent::parse_laurent(gstr.trim())
            .map_err(|_| SpotError::BadDescriptor(s.into()))?;
        let (_, shift, dense) = g.to_poly_parts();
        if shift != 0 {
            return Err(SpotError::TNotInvertible(format!("{g}")));
        }
        let gp: Vec<u64> = dense
            .iter()
            .map(|c| c.mod_floor_u64(&BigInt::from(p)))
            .collect();
        return Ok(PrimeSpot::Maximal(p, fppoly::normalize(gp)));
    }
    Err(SpotError::BadDescriptor(s.into()))
}

/// Data describing which spots must be inverted (localized away) for an
/// integral statement to hold: a set of rational primes and a set of
/// irreducible polynomials in Z[t].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocalizationSpec {
    pub primes: Vec<u64>,
    pub polys: Vec<IntLaurent>,
}

impl LocalizationSpec {
    /// Whether the residue field at `spot` kills an inverted element,
    /// i.e. whether the spot is excluded by this localization.
    pub fn excludes(&self, spot: &PrimeSpot) -> bool {
        match spot {
            PrimeSpot::Generic => false,
            PrimeSpot::IntPrime(p) => self.primes.contains(p),
            PrimeSpot::IrrPoly(g) => self.polys.iter().any(|h| {
                let (_, _, hd) = h.to_poly_parts();
                let (_, _, gd) = g.to_poly_parts();
                hd == gd
            }),
            PrimeSpot::Maximal(p, gbar) => {
                if self.primes.contains(p) {
                    return true;
                }
                // A polynomial is killed iff its image mod p is divisible
                // by gbar.
                self.polys.iter().any(|h| {
                    let (_, _, hd) = h.to_poly_parts();
                    let hp = fppoly::normalize(
                        hd.iter()
                            .map(|c| c.mod_floor_u64(&BigInt::from(*p)))
                            .collect(),
                    );
                    !hp.is_empty() && fppoly::rem(&hp, gbar, *p).is_empty()
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_laurent;

    fn l(s: &str) -> IntLaurent {
        parse_laurent(s).unwrap()
    }

    #[test]
    fn parse_all_descriptor_forms() {
        assert_eq!(parse_spot("generic").unwrap(), PrimeSpot::Generic);
        assert_eq!(parse_spot("p=5").unwrap(), PrimeSpot::IntPrime(5));
        assert_eq!(
            parse_spot("phi=12").unwrap(),
            PrimeSpot::IrrPoly(l("t^4-t^2+1"))
        );
        assert_eq!(
            parse_spot("f=t^2-t-1").unwrap(),
            PrimeSpot::IrrPoly(l("t^2-t-1"))
        );
        assert_eq!(
            parse_spot("max=2,t+1").unwrap(),
            PrimeSpot::Maximal(2, vec![1, 1])
        );
        assert!(parse_spot("p=6").is_err());
        assert!(parse_spot("junk").is_err());
    }

    #[test]
    fn generic_field_arithmetic() {
        let fld = ResidueField::new(PrimeSpot::Generic).unwrap();
        let a = fld.from_laurent(&l("t^2-1"));
        let b = fld.from_laurent(&l("t-1"));
        let q = fld.div(&a, &b).unwrap();
        assert_eq!(q, fld.from_laurent(&l("t+1")));
        // t is invertible and fractions reduce canonically.
        let ti = fld.inv(&fld.from_laurent(&l("t"))).unwrap();
        assert_eq!(fld.mul(&ti, &fld.from_laurent(&l("t"))), fld.one());
        assert_eq!(ti, fld.from_laurent(&l("t^-1")));
    }

    #[test]
    fn number_field_at_phi4() {
        // Q[t]/(t^2+1): t^2 = -1, and t^-1 = -t.
        let fld = ResidueField::new(parse_spot("phi=4").unwrap()).unwrap();
        let t = fld.from_laurent(&l("t"));
        assert_eq!(fld.mul(&t, &t), fld.from_int(-1));
        assert_eq!(fld.t_power(-1), fld.neg(&t));
        let x = fld.add(&t, &fld.one()); // 1 + i
        let xi = fld.inv(&x).unwrap();
        assert_eq!(fld.mul(&x, &xi), fld.one());
    }

    #[test]
    fn finite_field_f4() {
        // F_2[t]/(t^2+t+1) = F_4.
        let fld = ResidueField::new(parse_spot("max=2,t^2+t+1").unwrap()).unwrap();
        assert_eq!(fld.finite_degree(), Some(2));
        let t = fld.from_laurent(&l("t"));
        let t2 = fld.mul(&t, &t);
        assert_eq!(t2, fld.add(&t, &fld.one())); // t^2 = t + 1
        assert_eq!(fld.pow(&t, 3), fld.one()); // multiplicative order 3
        // Frobenius has order 2 and its inverse is itself here.
        let ft = fld.frobenius(&t);
        assert_eq!(fld.frobenius(&ft), t);
        assert_eq!(fld.pth_root(&ft).unwrap(), t);
    }

    #[test]
    fn fp_rational_functions_and_pth_roots() {
        let fld = ResidueField::new(PrimeSpot::IntPrime(3)).unwrap();
        let a = fld.from_laurent(&l("t^2+1"));
        let b = fld.from_laurent(&l("t"));
        let x = fld.div(&a, &b).unwrap();
        let cube = fld.pow(&x, 3);
        assert_eq!(fld.pth_root(&cube).unwrap(), x);
        // A non-cube has no cube root in F_3(t).
        assert!(fld.pth_root(&b).is_none());
    }

    #[test]
    fn spot_validation_rejects_bad_input() {
        assert!(ResidueField::new(PrimeSpot::IrrPoly(l("t^2-1"))).is_err()); // reducible
        assert!(ResidueField::new(PrimeSpot::IrrPoly(l("t"))).is_err()); // kills t
        assert!(ResidueField::new(PrimeSpot::Maximal(2, vec![1, 0, 1])).is_err()); // (t+1)^2
        assert!(ResidueField::new(PrimeSpot::Maximal(5, vec![0, 1])).is_err()); // kills t
        assert!(ResidueField::new(PrimeSpot::IntPrime(9)).is_err());
    }

    #[test]
    fn localization_excludes_the_right_spots() {
        let loc = LocalizationSpec {
            primes: vec![2],
            polys: vec![l("t^2+1")],
        };
        assert!(!loc.excludes(&PrimeSpot::Generic));
        assert!(loc.excludes(&PrimeSpot::IntPrime(2)));
        assert!(!loc.excludes(&PrimeSpot::IntPrime(3)));
        assert!(loc.excludes(&parse_spot("phi=4").unwrap()));
        // t^2+1 = (t+2)(t+3) mod 5, so the maximal spot (5, t+2) is excluded.
        assert!(loc.excludes(&parse_spot("max=5,t+2").unwrap()));
        assert!(!loc.excludes(&parse_spot("max=5,t+1").unwrap()));
        // Everything at p=2 is excluded regardless of the polynomial part.
        assert!(loc.excludes(&parse_spot("max=2,t^2+t+1").unwrap()));
    }
}
