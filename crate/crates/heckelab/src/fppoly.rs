//! Dense univariate polynomial arithmetic over the prime fields F_p.
//!
//! Coefficients are `u64` residues with `p < 2^32`, so products fit in `u128`.
//! Polynomials are coefficient vectors `c[0] + c[1] t + ...` with no trailing
//! zeros (the zero polynomial is the empty vector).

pub type FpPoly = Vec<u64>;

pub fn normalize(mut f: FpPoly) -> FpPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn deg(f: &FpPoly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn add(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let mut out = vec![0u64; f.len().max(g.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *slot = (a + b) % p;
    }
    normalize(out)
}

pub fn neg(f: &FpPoly, p: u64) -> FpPoly {
    f.iter().map(|&c| (p - c) % p).collect()
}

pub fn sub(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    add(f, &neg(g, p), p)
}

pub fn mul(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            let t = (a as u128) * (b as u128) + out[i + j] as u128;
            out[i + j] = (t % p as u128) as u64;
        }
    }
    normalize(out)
}

pub fn scale(f: &FpPoly, c: u64, p: u64) -> FpPoly {
    normalize(f.iter().map(|&a| ((a as u128 * c as u128) % p as u128) as u64).collect())
}

pub fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Extended Euclid on integers.
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "element not invertible mod p");
    (s0.rem_euclid(p as i128)) as u64
}

/// Division with remainder; `g` must be nonzero.
pub fn divrem(f: &FpPoly, g: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    assert!(!g.is_empty(), "division by zero polynomial");
    let mut rem = f.clone();
    if rem.len() < g.len() {
        return (vec![], normalize(rem));
    }
    let mut quo = vec![0u64; rem.len() - g.len() + 1];
    let lead_inv = inv_mod_p(*g.last().unwrap(), p);
    for i in (0..quo.len()).rev() {
        let top = rem.get(i + g.len() - 1).copied().unwrap_or(0);
        if top == 0 {
            continue;
        }
        let q = ((top as u128 * lead_inv as u128) % p as u128) as u64;
        quo[i] = q;
        for (j, &b) in g.iter().enumerate() {
            let sub = (q as u128 * b as u128) % p as u128;
            let cur = rem[i + j] as u128;
            rem[i + j] = ((cur + p as u128 - sub) % p as u128) as u64;
        }
    }
    (normalize(quo), normalize(rem))
}

pub fn rem(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    divrem(f, g, p).1
}

pub fn monic(f: &FpPoly, p: u64) -> FpPoly {
    match f.last() {
        None => vec![],
        Some(&l) if l == 1 => f.clone(),
        Some(&l) => scale(f, inv_mod_p(l, p), p),
    }
}

pub fn gcd(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// Inverse of `a` modulo `m` over F_p, via the extended Euclidean algorithm.
/// Panics if `gcd(a, m) != 1`.
pub fn inverse_mod(a: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    let (mut r0, mut r1) = (m.clone(), rem(a, m, p));
    let (mut s0, mut s1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        (r0, r1) = (r1, r);
        let qs1 = mul(&q, &s1, p);
        (s0, s1) = (s1.clone(), sub(&s0, &qs1, p));
    }
    assert_eq!(deg(&r0), Some(0), "element not invertible modulo m");
    let inv = inv_mod_p(r0[0], p);
    rem(&scale(&s0, inv, p), m, p)
}

pub fn derivative(f: &FpPoly, p: u64) -> FpPoly {
    normalize(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ((i as u128 % p as u128) * c as u128 % p as u128) as u64)
            .collect(),
    )
}

/// `base^e mod (m, p)` by square and multiply.
pub fn powmod(base: &FpPoly, e: &num_bigint::BigUint, m: &FpPoly, p: u64) -> FpPoly {
    use num_traits::Zero;
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    let mut e = e.clone();
    while !e.is_zero() {
        if e.bit(0) {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Rabin irreducibility test, exact.
pub fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    use num_bigint::BigUint;
    let d = match deg(f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    let f = monic(f, p);
    let x = vec![0u64, 1];
    // t^(p^d) == t mod f
    let xq = powmod(&x, &BigUint::from(p).pow(d as u32), &f, p);
    if xq != x {
        return false;
    }
    // gcd(t^(p^(d/l)) - t, f) == 1 for each prime l | d
    let mut primes = vec![];
    let mut n = d;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            primes.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    for l in primes {
        let e = BigUint::from(p).pow((d / l) as u32);
        let xe = powmod(&x, &e, &f, p);
        let g = gcd(&sub(&xe, &x, p), &f, p);
        if deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Squarefree factorization over F_p (Yun's algorithm adapted to positive
/// characteristic, with p-th root recursion). Returns `(factor, multiplicity)`
/// pairs with the factors squarefree and pairwise coprime.
pub fn squarefree_decomposition(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let f = monic(f, p);
    if deg(&f).unwrap_or(0) == 0 {
        return vec![];
    }
    let mut out: Vec<(FpPoly, usize)> = vec![];
    let fp = derivative(&f, p);
    if fp.is_empty() {
        // f = g(t^p); recurse on the p-th root.
        let root = pth_root_poly(&f, p);
        for (g, m) in squarefree_decomposition(&root, p) {
            out.push((g, m * p as usize));
        }
        return out;
    }
    let mut c = gcd(&f, &fp, p);
    let mut w = divrem(&f, &c, p).0;
    let mut i = 1usize;
    while deg(&w) != Some(0) {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if deg(&z) != Some(0) {
            out.push((z, i));
        }
        c = divrem(&c, &y, p).0;
        w = y;
        i += 1;
    }
    if deg(&c) != Some(0) {
        // Remaining part is a p-th power.
        let root = pth_root_poly(&c, p);
        for (g, m) in squarefree_decomposition(&root, p) {
            // Merge with any equal factor already present.
            if let Some(slot) = out.iter_mut().find(|(h, _)| *h == g) {
                slot.1 += m * p as usize;
            } else {
                out.push((g, m * p as usize));
            }
        }
    }
    out
}

/// For `f` with zero derivative (all exponents divisible by p), the `g` with
/// `g(t)^p = f(t)`; over F_p this is coefficient-wise identity on exponents/p.
fn pth_root_poly(f: &FpPoly, p: u64) -> FpPoly {
    let mut out = vec![];
    for (i, &c) in f.iter().enumerate() {
        if i % p as usize == 0 {
            out.push(c);
        } else {
            assert_eq!(c, 0, "polynomial is not a p-th power");
        }
    }
    normalize(out)
}

/// Full factorization over F_p into monic irreducibles with multiplicities,
/// via squarefree + distinct-degree + equal-degree (Cantor-Zassenhaus)
/// splitting. Deterministically seeded.
pub fn factor(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    use num_bigint::BigUint;
    use num_traits::One;
    let mut out = vec![];
    for (sf, mult) in squarefree_decomposition(f, p) {
        // Distinct degree.
        let mut h = vec![0u64, 1]; // t^(p^i) mod sf, incrementally
        let mut rest = sf.clone();
        let mut d = 0usize;
        while deg(&rest).map(|k| k >= 2 * (d + 1)).unwrap_or(false) {
            d += 1;
            h = powmod(&h, &BigUint::from(p), &rest, p);
            let g = gcd(&sub(&h, &vec![0u64, 1], p), &rest, p);
            if deg(&g) != Some(0) {
                for irr in equal_degree_split(&g, d, p) {
                    out.push((irr, mult));
                }
                rest = divrem(&rest, &g, p).0;
                h = rem(&h, &rest, p);
            }
        }
        if deg(&rest).map(|k| k > 0).unwrap_or(false) {
            out.push((monic(&rest, p), mult));
        }
        let _ = BigUint::one();
    }
    out.sort();
    out
}

/// Splits a product of distinct irreducibles all of degree `d`.
fn equal_degree_split(f: &FpPoly, d: usize, p: u64) -> Vec<FpPoly> {
    use num_bigint::BigUint;
    use num_integer::Integer;
    use num_traits::One;
    let f = monic(f, p);
    let n = deg(&f).unwrap();
    if n == d {
        return vec![f];
    }
    // Deterministic PRNG over candidate polynomials.
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut rand_poly = |len: usize| -> FpPoly {
        let mut out = vec![0u64; len];
        for slot in out.iter_mut() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *slot = (state >> 16) % p;
        }
        normalize(out)
    };
    loop {
        let a = rand_poly(n);
        if deg(&a).is_none() {
            continue;
        }
        let g0 = gcd(&a, &f, p);
        if deg(&g0) != Some(0) && deg(&g0) != Some(n) {
            let mut out = equal_degree_split(&g0, d, p);
            out.extend(equal_degree_split(&divrem(&f, &g0, p).0, d, p));
            return out;
        }
        let g = if p == 2 {
            // Trace map: a + a^2 + a^4 + ... + a^(2^(d-1)) mod f.
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = rem(&mul(&cur, &cur, 2), &f, 2);
                acc = add(&acc, &cur, 2);
            }
            gcd(&acc, &f, p)
        } else {
            let e: BigUint = (BigUint::from(p).pow(d as u32) - BigUint::one()).div_floor(&BigUint::from(2u32));
            let b = powmod(&a, &e, &f, p);
            gcd(&sub(&b, &vec![1u64], p), &f, p)
        };
        if deg(&g) != Some(0) && deg(&g) != Some(n) {
            let mut out = equal_degree_split(&g, d, p);
            out.extend(equal_degree_split(&divrem(&f, &g, p).0, d, p));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let p = 7;
        let f = vec![1, 0, 1]; // 1 + t^2
        let g = vec![1, 1]; // 1 + t
        let (q, r) = divrem(&f, &g, p);
        assert_eq!(add(&mul(&q, &g, p), &r, p), f);
        assert_eq!(gcd(&mul(&f, &g, p), &g, p), g);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&vec![1, 1, 1], 2)); // t^2+t+1 over F_2
        assert!(!is_irreducible(&vec![1, 0, 1], 2)); // t^2+1 = (t+1)^2 over F_2
        assert!(is_irreducible(&vec![1, 0, 1], 3)); // t^2+1 over F_3
        assert!(is_irreducible(&vec![2, 0, 0, 0, 1], 5)); // t^4+2 over F_5
        assert!(!is_irreducible(&vec![3, 0, 0, 2, 1], 5)); // root at t = 2
    }

    #[test]
    fn factorization_round_trips() {
        let p = 3;
        // (t^2+1)^2 (t+2) t
        let f = mul(
            &mul(&mul(&vec![1, 0, 1], &vec![1, 0, 1], p), &vec![2, 1], p),
            &vec![0, 1],
            p,
        );
        let factors = factor(&f, p);
        let mut prod = vec![1u64];
        for (g, m) in &factors {
            assert!(is_irreducible(g, p), "{g:?}");
            for _ in 0..*m {
                prod = mul(&prod, g, p);
            }
        }
        assert_eq!(prod, monic(&f, p));
        assert_eq!(factors.len(), 3);
    }

    #[test]
    fn factor_splits_large_equal_degree_products() {
        // Product of all monic irreducible quadratics over F_2: t^4+t = wrong;
        // use (t^2+t+1) * (t^4+t+1)? t^4+t+1 is irreducible over F_2.
        let p = 2;
        let f = mul(&vec![1, 1, 1], &vec![1, 1, 0, 0, 1], p);
        let factors = factor(&f, p);
        assert_eq!(factors.iter().map(|(g, _)| deg(g).unwrap()).sum::<usize>(), 6);
        for (g, m) in factors {
            assert!(is_irreducible(&g, p));
            assert_eq!(m, 1);
        }
    }

    #[test]
    fn squarefree_handles_pth_powers() {
        let p = 2;
        // (t+1)^4 over F_2 has zero derivative at every stage.
        let f = mul(&mul(&vec![1, 1], &vec![1, 1], p), &mul(&vec![1, 1], &vec![1, 1], p), p);
        let dec = squarefree_decomposition(&f, p);
        assert_eq!(dec, vec![(vec![1, 1], 4)]);
    }
}
