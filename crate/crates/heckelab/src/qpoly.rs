//! Dense univariate polynomials over the rationals, used for number-field
//! arithmetic and for rational-function coefficients at the generic point.

use crate::laurent::IntLaurent;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QPoly = Vec<BigRational>;

pub fn normalize(mut f: QPoly) -> QPoly {
    while f.last().map(|c| c.is_zero()).unwrap_or(false) {
        f.pop();
    }
    f
}

pub fn deg(f: &QPoly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn constant(c: BigRational) -> QPoly {
    normalize(vec![c])
}

pub fn from_int(n: i64) -> QPoly {
    constant(BigRational::from(BigInt::from(n)))
}

pub fn add(f: &QPoly, g: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); f.len().max(g.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut c = BigRational::zero();
        if let Some(a) = f.get(i) {
            c += a;
        }
        if let Some(b) = g.get(i) {
            c += b;
        }
        *slot = c;
    }
    normalize(out)
}

pub fn neg(f: &QPoly) -> QPoly {
    f.iter().map(|c| -c).collect()
}

pub fn sub(f: &QPoly, g: &QPoly) -> QPoly {
    add(f, &neg(g))
}

pub fn mul(f: &QPoly, g: &QPoly) -> QPoly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    normalize(out)
}

pub fn scale(f: &QPoly, c: &BigRational) -> QPoly {
    if c.is_zero() {
        return vec![];
    }
    f.iter().map(|a| a * c).collect()
}

pub fn divrem(f: &QPoly, g: &QPoly) -> (QPoly, QPoly) {
    assert!(!g.is_empty(), "division by zero polynomial");
    let mut rem = f.clone();
    if rem.len() < g.len() {
        return (vec![], normalize(rem));
    }
    let mut quo = vec![BigRational::zero(); rem.len() - g.len() + 1];
    let lead = g.last().unwrap().clone();
    for i in (0..quo.len()).rev() {
        let top = rem[i + g.len() - 1].clone();
        if top.is_zero() {
            continue;
        }
        let q = top / &lead;
        for (j, b) in g.iter().enumerate() {
            let delta = &q * b;
            rem[i + j] -= delta;
        }
        quo[i] = q;
    }
    (normalize(quo), normalize(rem))
}

pub fn rem(f: &QPoly, g: &QPoly) -> QPoly {
    divrem(f, g).1
}

pub fn monic(f: &QPoly) -> QPoly {
    match f.last() {
        None => vec![],
        Some(l) if l.is_one() => f.clone(),
        Some(l) => {
            let inv = BigRational::one() / l;
            scale(f, &inv)
        }
    }
}

pub fn gcd(f: &QPoly, g: &QPoly) -> QPoly {
    let (mut a, mut b) = (monic(&f.clone()), monic(&g.clone()));
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = monic(&rem(&a, &b));
        a = b;
        b = r;
    }
    monic(&a)
}

pub fn derivative(f: &QPoly) -> QPoly {
    normalize(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from(BigInt::from(i as i64)))
            .collect(),
    )
}

pub fn eval(f: &QPoly, x: &BigRational) -> BigRational {
    let mut out = BigRational::zero();
    for c in f.iter().rev() {
        out = out * x + c;
    }
    out
}

/// Extended Euclid: returns `(g, u, v)` with `u f + v g0 = g = gcd(f, g0)`,
/// `g` monic.
pub fn xgcd(f: &QPoly, g0: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (f.clone(), g0.clone());
    let (mut s0, mut s1) = (from_int(1), vec![]);
    let (mut t0, mut t1) = (vec![], from_int(1));
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1.clone(), sub(&s0, &mul(&q, &s1)));
        (t0, t1) = (t1.clone(), sub(&t0, &mul(&q, &t1)));
    }
    if let Some(l) = r0.last().cloned() {
        let inv = BigRational::one() / l;
        (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
    } else {
        (vec![], vec![], vec![])
    }
}

/// Converts a Laurent polynomial `±t^k g(t)` into the ordinary polynomial part
/// `g` with its shift, as rationals.
pub fn from_laurent_parts(f: &IntLaurent) -> (i8, i64, QPoly) {
    let (sign, shift, dense) = f.to_poly_parts();
    let q = dense.into_iter().map(BigRational::from).collect();
    (sign, shift, normalize(q))
}

/// Clears denominators and content: returns the primitive integer polynomial
/// with positive leading coefficient proportional to `f`.
pub fn primitive_integer(f: &QPoly) -> Vec<BigInt> {
    use num_integer::Integer;
    if f.is_empty() {
        return vec![];
    }
    let mut den = BigInt::one();
    for c in f {
        den = den.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = f.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if !content.is_zero() {
        for c in &mut ints {
            *c /= &content;
        }
    }
    if ints.last().map(|c| c.is_negative()).unwrap_or(false) {
        for c in &mut ints {
            *c = -std::mem::take(c);
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn euclidean_relations() {
        let f = vec![q(1, 2), q(0, 1), q(3, 1), q(1, 1)];
        let g = vec![q(-1, 1), q(1, 1)];
        let (quo, r) = divrem(&f, &g);
        assert_eq!(add(&mul(&quo, &g), &r), f);
        let (gg, u, v) = xgcd(&f, &g);
        assert_eq!(add(&mul(&u, &f), &mul(&v, &g)), gg);
    }

    #[test]
    fn gcd_detects_common_factors() {
        let common = vec![q(1, 1), q(2, 1), q(1, 1)];
        let f = mul(&common, &vec![q(5, 1), q(1, 1)]);
        let g = mul(&common, &vec![q(-3, 1), q(1, 1)]);
        assert_eq!(gcd(&f, &g), monic(&common));
    }

    #[test]
    fn primitive_integer_clears_denominators() {
        let f = vec![q(1, 6), q(1, 4)];
        assert_eq!(primitive_integer(&f), vec![BigInt::from(2), BigInt::from(3)]);
    }
}
