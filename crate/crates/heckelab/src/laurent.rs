//! Sparse Laurent polynomials over the integers, the ground ring for all
//! integral computations in this crate.
//!
//! Elements are finite maps `exponent -> coefficient` with arbitrary-precision
//! coefficients. The indeterminate is called `t` throughout; the bar involution
//! `t -> t^-1` is a ring automorphism used by the canonical-basis machinery.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent polynomial with integer coefficients, stored sparsely.
///
/// Invariant: no explicit zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntLaurent {
    coeffs: BTreeMap<i64, BigInt>,
}

impl IntLaurent {
    pub fn zero() -> Self {
        IntLaurent { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::t_pow(0)
    }

    /// The monomial `t^e`.
    pub fn t_pow(e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(e, BigInt::one());
        IntLaurent { coeffs }
    }

    /// The constant polynomial `n`.
    pub fn int(n: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if n != 0 {
            coeffs.insert(0, BigInt::from(n));
        }
        IntLaurent { coeffs }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut out = Self::zero();
        for &(e, c) in pairs {
            out.add_term(e, &BigInt::from(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    /// True when the polynomial is `±t^k` for some `k`, i.e. a unit of the ring.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().next().unwrap().abs().is_one()
    }

    /// The coefficient of `t^e` (zero if absent).
    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, -c)).collect();
        IntLaurent { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().map(|(e, k)| (*e, k * c)).collect();
        IntLaurent { coeffs }
    }

    pub fn shift(&self, e: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, c)| (*k + e, c.clone())).collect();
        IntLaurent { coeffs }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// The bar involution `t -> t^-1`.
    pub fn bar(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, c)| (-*e, c.clone())).collect();
        IntLaurent { coeffs }
    }

    /// True when `bar(f) = f`.
    pub fn is_bar_invariant(&self) -> bool {
        self == &self.bar()
    }

    /// The part of the polynomial supported in strictly negative exponents.
    pub fn negative_part(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| **e < 0)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        IntLaurent { coeffs }
    }

    /// Evaluates at an integer `t = x` as an exact rational `(num, den)` with
    /// `den = x^k` clearing any negative exponents. Panics if `x == 0` and a
    /// negative exponent is present.
    pub fn eval_int(&self, x: i64) -> (BigInt, BigInt) {
        let min = self.min_exp().unwrap_or(0).min(0);
        assert!(x != 0 || min == 0, "cannot evaluate at t = 0 with negative exponents");
        let big = BigInt::from(x);
        let mut num = BigInt::zero();
        for (e, c) in self.terms() {
            num += c * big.pow((e - min) as u32);
        }
        (num, big.pow((-min) as u32))
    }

    /// Writes `self = ±t^k · g` with `g` an ordinary polynomial with nonzero
    /// constant term and positive leading coefficient; returns `(sign, k, g)`
    /// where `g` is the dense coefficient list `g[i] = coeff of t^i`.
    pub fn to_poly_parts(&self) -> (i8, i64, Vec<BigInt>) {
        if self.is_zero() {
            return (1, 0, vec![]);
        }
        let min = self.min_exp().unwrap();
        let max = self.max_exp().unwrap();
        let mut dense = vec![BigInt::zero(); (max - min + 1) as usize];
        for (e, c) in self.terms() {
            dense[(e - min) as usize] = c.clone();
        }
        let sign = if dense.last().unwrap().is_negative() { -1 } else { 1 };
        if sign < 0 {
            for c in &mut dense {
                *c = -std::mem::take(c);
            }
        }
        (sign, min, dense)
    }

    /// Builds from dense coefficients `g[i] = coeff of t^(i + shift)`.
    pub fn from_dense(dense: &[BigInt], shift: i64) -> Self {
        let mut out = Self::zero();
        for (i, c) in dense.iter().enumerate() {
            out.add_term(shift + i as i64, c);
        }
        out
    }

    /// Exact division; returns `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (_, _, den) = other.to_poly_parts();
        let (_, _, num) = self.to_poly_parts();
        if num.len() < den.len() {
            return None;
        }
        // Long division of dense polynomials, requiring exact coefficient division.
        let mut rem = num.clone();
        let mut quo = vec![BigInt::zero(); num.len() - den.len() + 1];
        let lead = den.last().unwrap();
        for i in (0..quo.len()).rev() {
            let top = rem[i + den.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            if (&top % lead) != BigInt::zero() {
                return None;
            }
            let q = &top / lead;
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= &q * d;
            }
            quo[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        // Reassemble signs and t-shifts.
        let q = IntLaurent::from_dense(&quo, 0);
        let prod = q.mul(other);
        // prod may differ from self by sign and shift; recompute exactly.
        let shift = self.min_exp().unwrap() - prod.min_exp().unwrap();
        let shifted = q.shift(shift);
        let candidate = shifted.mul(other);
        if candidate == *self {
            Some(shifted)
        } else if candidate.neg() == *self {
            Some(shifted.neg())
        } else {
            None
        }
    }

    /// Content: the gcd of all coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in self.terms() {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Divides by the content and the common power of t, leaving a primitive
    /// ordinary polynomial with nonzero constant term and positive leading
    /// coefficient.
    fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (_, min, mut dense) = self.to_poly_parts();
        let mut g = BigInt::zero();
        for c in &dense {
            g = num_integer::Integer::gcd(&g, c);
        }
        for c in &mut dense {
            *c = &*c / &g;
        }
        let _ = min;
        Self::from_dense(&dense, 0)
    }

    /// Gcd in Z[t, t^-1], determined up to a unit; normalized to a primitive
    /// polynomial with nonzero constant term and positive leading
    /// coefficient. Computed by a primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let content = num_integer::Integer::gcd(&self.content(), &other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        loop {
            if b.is_zero() {
                break;
            }
            let da = a.max_exp().unwrap_or(0);
            let db = b.max_exp().unwrap_or(0);
            if da < db {
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            // division-free remainder: scale by lead(b) before each
            // cancellation step so all arithmetic stays in Z[t]; the extra
            // scalar factors are stripped by primitive_part afterwards
            let lead = b.coeff(db);
            let mut rem = a.clone();
            while !rem.is_zero() && rem.max_exp().unwrap() >= db {
                let e = rem.max_exp().unwrap();
                let top = rem.coeff(e);
                rem = rem.scale(&lead).sub(&b.shift(e - db).scale(&top));
            }
            a = b;
            b = rem.primitive_part();
        }
        a.primitive_part().scale(&content)
    }
}

impl fmt::Debug for IntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !abs.is_one() || *e == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            if *e != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if *e == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Parses expressions like `t^2-t-1`, `2*t^-1 + 3`, `t`, `-4`.
pub fn parse_laurent(s: &str) -> Result<IntLaurent, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut out = IntLaurent::zero();
    let bytes = s.as_bytes();
    let mut i = 0usize;
    let mut sign: i64 = 1;
    // Leading sign
    loop {
        if i >= bytes.len() {
            return Err(format!("dangling sign in '{s}'"));
        }
        match bytes[i] {
            b'+' => i += 1,
            b'-' => {
                sign = -sign;
                i += 1;
            }
            _ => break,
        }
    }
    while i < bytes.len() {
        // term: [coeff][*][t[^exp]]
        let mut coeff: Option<i64> = None;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i > start {
            coeff = Some(
                s[start..i]
                    .parse::<i64>()
                    .map_err(|e| format!("bad coefficient in '{s}': {e}"))?,
            );
        }
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        let mut exp: i64 = 0;
        if i < bytes.len() && bytes[i] == b't' {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let estart = i;
                if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = s[estart..i]
                    .parse::<i64>()
                    .map_err(|e| format!("bad exponent in '{s}': {e}"))?;
            }
        } else if coeff.is_none() {
            return Err(format!("unexpected character at position {i} in '{s}'"));
        }
        out.add_term(exp, &BigInt::from(sign * coeff.unwrap_or(1)));
        // next sign
        sign = 1;
        let mut saw_sign = false;
        while i < bytes.len() {
            match bytes[i] {
                b'+' => {
                    saw_sign = true;
                    i += 1;
                }
                b'-' => {
                    saw_sign = true;
                    sign = -sign;
                    i += 1;
                }
                _ => break,
            }
        }
        if i < bytes.len() && !saw_sign {
            return Err(format!("expected '+' or '-' at position {i} in '{s}'"));
        }
        if i >= bytes.len() && saw_sign {
            return Err(format!("dangling sign in '{s}'"));
        }
    }
    Ok(out)
}
