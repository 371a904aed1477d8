//! Finite Coxeter systems with canonical reduced words.
//!
//! Elements are stored as the ShortLex-least reduced word in the generators.
//! All word manipulation goes through braid-move rewriting: by Tits' solution
//! of the word problem, two reduced words represent the same element exactly
//! when they are connected by braid moves, and a word is non-reduced exactly
//! when some braid-equivalent word contains a repeated adjacent letter.
//!
//! The crystallographic reflection representation over exact rationals lives
//! in the test suite only, as an independent cross-check of this module.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Mutex;
use thiserror::Error;

/// Generator index, `0 .. rank`.
pub type Gen = u8;

/// Hard cap on group enumeration, guarding against non-finite input.
pub const ELEMENT_CAP: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("unknown Cartan type '{0}'")]
    UnknownType(String),
    #[error("invalid Coxeter matrix: {0}")]
    BadMatrix(String),
    #[error("invalid weights: {0}")]
    BadWeights(String),
    #[error("group enumeration exceeded the cap of {ELEMENT_CAP} elements")]
    CapExceeded,
    #[error("Coxeter diagram is not of finite type")]
    NotFinite,
    #[error("generator index {0} out of range for rank {1}")]
    GenOutOfRange(usize, usize),
}

/// A group element: the ShortLex-minimal reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elt {
    word: Vec<Gen>,
}

impl Elt {
    pub fn identity() -> Self {
        Elt { word: vec![] }
    }

    pub fn word(&self) -> &[Gen] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        for (i, s) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "s{}", s + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Total order used everywhere for deterministic output: length, then ShortLex.
pub fn elt_cmp(a: &Elt, b: &Elt) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.word.cmp(&b.word))
}

/// A finite Coxeter system with one integer weight per generator.
///
/// The weights feed the Hecke-algebra parameters; generators linked by an odd
/// bond are conjugate and must carry equal weights.
pub struct CoxeterSystem {
    name: String,
    rank: usize,
    mat: Vec<Vec<u32>>,
    weights: Vec<u32>,
    mult_cache: Mutex<HashMap<(Vec<Gen>, Gen), Elt>>,
    elements_cache: Mutex<Option<Vec<Elt>>>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterSystem({}, weights {:?})", self.name, self.weights)
    }
}

impl CoxeterSystem {
    /// Builds from an explicit Coxeter matrix (`mat[i][j] = m(s_i, s_j)`).
    pub fn from_matrix(
        name: &str,
        mat: Vec<Vec<u32>>,
        weights: Vec<u32>,
    ) -> Result<Self, CoxeterError> {
        let rank = mat.len();
        if rank == 0 {
            return Err(CoxeterError::BadMatrix("empty matrix".into()));
        }
        for (i, row) in mat.iter().enumerate() {
            if row.len() != rank {
                return Err(CoxeterError::BadMatrix("matrix not square".into()));
            }
            if row[i] != 1 {
                return Err(CoxeterError::BadMatrix(format!("m(s{},s{}) must be 1", i + 1, i + 1)));
            }
            for (j, &m) in row.iter().enumerate() {
                if j != i && m < 2 {
                    return Err(CoxeterError::BadMatrix(format!(
                        "m(s{},s{}) must be at least 2",
                        i + 1,
                        j + 1
                    )));
                }
                if m != mat[j][i] {
                    return Err(CoxeterError::BadMatrix("matrix not symmetric".into()));
                }
            }
        }
        if weights.len() != rank {
            return Err(CoxeterError::BadWeights(format!(
                "expected {rank} weights, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|&c| c == 0) {
            return Err(CoxeterError::BadWeights("weights must be positive".into()));
        }
        // Odd bonds force conjugate generators, hence equal weights.
        for i in 0..rank {
            for j in (i + 1)..rank {
                if mat[i][j] % 2 == 1 && weights[i] != weights[j] {
                    return Err(CoxeterError::BadWeights(format!(
                        "s{} and s{} are linked by an odd bond but have weights {} and {}",
                        i + 1,
                        j + 1,
                        weights[i],
                        weights[j]
                    )));
                }
            }
        }
        Ok(CoxeterSystem {
            name: name.to_string(),
            rank,
            mat,
            weights,
            mult_cache: Mutex::new(HashMap::new()),
            elements_cache: Mutex::new(None),
        })
    }

    /// Builds from a Cartan type label such as `A2`, `B3`, `D4`, `F4`, `G2`,
    /// with all weights 1.
    pub fn from_type(label: &str) -> Result<Self, CoxeterError> {
        let (family, n) = split_type(label)?;
        let rank = n;
        let mut mat = vec![vec![2u32; rank]; rank];
        for i in 0..rank {
            mat[i][i] = 1;
        }
        let mut chain = |i: usize, j: usize, m: u32| {
            mat[i][j] = m;
            mat[j][i] = m;
        };
        match family {
            'A' => {
                for i in 0..rank.saturating_sub(1) {
                    chain(i, i + 1, 3);
                }
            }
            'B' | 'C' => {
                if rank < 2 {
                    return Err(CoxeterError::UnknownType(label.into()));
                }
                chain(0, 1, 4);
                for i in 1..rank - 1 {
                    chain(i, i + 1, 3);
                }
            }
            'D' => {
                if rank < 3 {
                    return Err(CoxeterError::UnknownType(label.into()));
                }
                chain(0, 2, 3);
                chain(1, 2, 3);
                for i in 2..rank - 1 {
                    chain(i, i + 1, 3);
                }
            }
            'E' => {
                if !(6..=8).contains(&rank) {
                    return Err(CoxeterError::UnknownType(label.into()));
                }
                // Branch node is s3 (index 2); s1 hangs off it.
                chain(0, 2, 3);
                chain(1, 3, 3);
                for i in 2..rank - 1 {
                    chain(i, i + 1, 3);
                }
            }
            'F' => {
                if rank != 4 {
                    return Err(CoxeterError::UnknownType(label.into()));
                }
                chain(0, 1, 3);
                chain(1, 2, 4);
                chain(2, 3, 3);
            }
            'G' => {
                if rank != 2 {
                    return Err(CoxeterError::UnknownType(label.into()));
                }
                chain(0, 1, 6);
            }
            _ => return Err(CoxeterError::UnknownType(label.into())),
        }
        Self::from_matrix(label, mat, vec![1; rank])
    }

    /// Same as [`from_type`](Self::from_type) but with explicit weights.
    pub fn from_type_weighted(label: &str, weights: Vec<u32>) -> Result<Self, CoxeterError> {
        let base = Self::from_type(label)?;
        Self::from_matrix(label, base.mat, weights)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coxeter_m(&self, s: Gen, t: Gen) -> u32 {
        self.mat[s as usize][t as usize]
    }

    pub fn weight(&self, s: Gen) -> u32 {
        self.weights[s as usize]
    }

    /// Sum of generator weights along any reduced word (well defined).
    pub fn weighted_len(&self, w: &Elt) -> i64 {
        w.word().iter().map(|&s| self.weights[s as usize] as i64).sum()
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..self.rank as u8).map(|s| s as Gen)
    }

    pub fn gen_elt(&self, s: Gen) -> Elt {
        Elt { word: vec![s] }
    }

    /// All words obtainable from `word` by braid moves alone.
    fn braid_class(&self, word: &[Gen]) -> Vec<Vec<Gen>> {
        let mut seen: HashSet<Vec<Gen>> = HashSet::new();
        let mut queue: VecDeque<Vec<Gen>> = VecDeque::new();
        seen.insert(word.to_vec());
        queue.push_back(word.to_vec());
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len() {
                for j in (i + 1)..=w.len() {
                    let seg = &w[i..j];
                    if seg.len() < 2 {
                        continue;
                    }
                    let (a, b) = (seg[0], seg[1]);
                    if a == b {
                        continue;
                    }
                    let m = self.mat[a as usize][b as usize] as usize;
                    if seg.len() != m {
                        continue;
                    }
                    // Must alternate a,b,a,b,...
                    if !seg.iter().enumerate().all(|(k, &s)| s == if k % 2 == 0 { a } else { b }) {
                        continue;
                    }
                    let mut next = w.clone();
                    for (k, slot) in next[i..j].iter_mut().enumerate() {
                        *slot = if k % 2 == 0 { b } else { a };
                    }
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Canonical form of an arbitrary word in the generators.
    pub fn canonical(&self, word: &[Gen]) -> Elt {
        let mut acc = Elt::identity();
        for &s in word {
            acc = self.mult_gen(&acc, s);
        }
        acc
    }

    /// Canonical form of `w * s`, the workhorse of the module.
    pub fn mult_gen(&self, w: &Elt, s: Gen) -> Elt {
        assert!((s as usize) < self.rank, "generator out of range");
        if let Some(hit) = self.mult_cache.lock().unwrap().get(&(w.word.clone(), s)) {
            return hit.clone();
        }
        let mut word = w.word.clone();
        word.push(s);
        let out = self.reduce_word(&word);
        self.mult_cache.lock().unwrap().insert((w.word.clone(), s), out.clone());
        out
    }

    fn reduce_word(&self, word: &[Gen]) -> Elt {
        let mut current = word.to_vec();
        'outer: loop {
            let class = self.braid_class(&current);
            for w in &class {
                if let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] == w[i + 1]) {
                    let mut shorter = w.clone();
                    shorter.drain(i..i + 2);
                    current = shorter;
                    continue 'outer;
                }
            }
            // Reduced: canonical form is the lexicographically least word
            // in the class (all words in the class have equal length).
            let best = class.into_iter().min().expect("nonempty braid class");
            return Elt { word: best };
        }
    }

    pub fn mult(&self, a: &Elt, b: &Elt) -> Elt {
        let mut acc = a.clone();
        for &s in b.word() {
            acc = self.mult_gen(&acc, s);
        }
        acc
    }

    pub fn inverse(&self, w: &Elt) -> Elt {
        let rev: Vec<Gen> = w.word().iter().rev().copied().collect();
        self.canonical(&rev)
    }

    /// True when `ℓ(w s) < ℓ(w)`.
    pub fn is_right_descent(&self, w: &Elt, s: Gen) -> bool {
        self.mult_gen(w, s).len() < w.len()
    }

    /// True when `ℓ(s w) < ℓ(w)`.
    pub fn is_left_descent(&self, w: &Elt, s: Gen) -> bool {
        let mut word = vec![s];
        word.extend_from_slice(w.word());
        self.canonical(&word).len() < w.len()
    }

    /// Enumerates the whole group, sorted by length then ShortLex.
    /// Errors out (rather than diverging) past [`ELEMENT_CAP`].
    pub fn elements(&self) -> Result<Vec<Elt>, CoxeterError> {
        if let Some(cached) = self.elements_cache.lock().unwrap().as_ref() {
            return Ok(cached.clone());
        }
        // Word rewriting diverges in cost long before the element cap fires
        // on non-finite input, so classify the diagram first. The cap below
        // remains as a backstop for any case the classifier lets through.
        if !diagram_is_finite(&self.mat) {
            return Err(CoxeterError::NotFinite);
        }
        let subset: Vec<Gen> = self.gens().collect();
        let out = self.enumerate_closure(&subset)?;
        *self.elements_cache.lock().unwrap() = Some(out.clone());
        Ok(out)
    }

    /// Enumerates the standard parabolic subgroup generated by `subset`.
    pub fn parabolic_elements(&self, subset: &[Gen]) -> Result<Vec<Elt>, CoxeterError> {
        for &s in subset {
            if s as usize >= self.rank {
                return Err(CoxeterError::GenOutOfRange(s as usize, self.rank));
            }
        }
        self.enumerate_closure(subset)
    }

    fn enumerate_closure(&self, subset: &[Gen]) -> Result<Vec<Elt>, CoxeterError> {
        let mut seen: BTreeSet<Elt> = BTreeSet::new();
        let mut queue: VecDeque<Elt> = VecDeque::new();
        seen.insert(Elt::identity());
        queue.push_back(Elt::identity());
        while let Some(w) = queue.pop_front() {
            for &s in subset {
                let next = self.mult_gen(&w, s);
                if next.len() > w.len() && seen.insert(next.clone()) {
                    if seen.len() > ELEMENT_CAP {
                        return Err(CoxeterError::CapExceeded);
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<Elt> = seen.into_iter().collect();
        out.sort_by(elt_cmp);
        Ok(out)
    }

    /// Longest element of the standard parabolic subgroup generated by `subset`.
    pub fn longest_element(&self, subset: &[Gen]) -> Result<Elt, CoxeterError> {
        let elts = self.parabolic_elements(subset)?;
        Ok(elts.into_iter().max_by(|a, b| elt_cmp(a, b)).unwrap())
    }

    /// Bruhat order, decided by the subword property: the set of subword
    /// products of any one reduced word for `y` is exactly `{x : x ≤ y}`.
    pub fn bruhat_leq(&self, x: &Elt, y: &Elt) -> bool {
        if x.len() > y.len() {
            return false;
        }
        let mut reach: HashSet<Elt> = HashSet::new();
        reach.insert(Elt::identity());
        for &s in y.word() {
            let mut next = reach.clone();
            for w in &reach {
                next.insert(self.mult_gen(w, s));
            }
            reach = next;
        }
        reach.contains(x)
    }

    /// Minimal-length representatives of the right cosets `W_λ \ W`,
    /// i.e. elements with no left descent in `subset`. Sorted.
    pub fn min_coset_reps(&self, subset: &[Gen]) -> Result<Vec<Elt>, CoxeterError> {
        let all = self.elements()?;
        Ok(all
            .into_iter()
            .filter(|w| subset.iter().all(|&s| !self.is_left_descent(w, s)))
            .collect())
    }

    /// Minimal-length representatives of the double cosets `W_λ \ W / W_μ`:
    /// elements with no left descent in `lam` and no right descent in `mu`.
    /// Sorted by length then ShortLex.
    pub fn min_double_coset_reps(
        &self,
        lam: &[Gen],
        mu: &[Gen],
    ) -> Result<Vec<Elt>, CoxeterError> {
        let all = self.elements()?;
        Ok(all
            .into_iter()
            .filter(|w| {
                lam.iter().all(|&s| !self.is_left_descent(w, s))
                    && mu.iter().all(|&s| !self.is_right_descent(w, s))
            })
            .collect())
    }

    /// All elements of the double coset `W_λ d W_μ`, sorted.
    pub fn double_coset(&self, lam: &[Gen], d: &Elt, mu: &[Gen]) -> Result<Vec<Elt>, CoxeterError> {
        let left = self.parabolic_elements(lam)?;
        let right = self.parabolic_elements(mu)?;
        let mut out: BTreeSet<Elt> = BTreeSet::new();
        for u in &left {
            let ud = self.mult(u, d);
            for v in &right {
                out.insert(self.mult(&ud, v));
            }
        }
        let mut v: Vec<Elt> = out.into_iter().collect();
        v.sort_by(elt_cmp);
        Ok(v)
    }

    /// Minimal reps `d ∈ D_μ` (no left descent in `mu`) lying inside the
    /// double coset `W_mu e W_nu`; used when rewriting `x_{μeν}` as `x_μ · h`.
    pub fn coset_reps_in_double_coset(
        &self,
        mu: &[Gen],
        e: &Elt,
        nu: &[Gen],
    ) -> Result<Vec<Elt>, CoxeterError> {
        let coset: BTreeSet<Elt> = self.double_coset(mu, e, nu)?.into_iter().collect();
        Ok(self
            .min_coset_reps(mu)?
            .into_iter()
            .filter(|d| coset.contains(d))
            .collect())
    }

    /// Index of each element in the sorted full enumeration.
    pub fn element_index(&self) -> Result<BTreeMap<Elt, usize>, CoxeterError> {
        Ok(self
            .elements()?
            .into_iter()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect())
    }
}

/// Decides finiteness of a Coxeter group from the classification of finite
/// Coxeter diagrams (A, B/C, D, E6-8, F4, G2, H3-4, dihedral I2(m)).
fn diagram_is_finite(mat: &[Vec<u32>]) -> bool {
    let n = mat.len();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // Collect the connected component of `start`.
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            for u in 0..n {
                if !seen[u] && mat[v][u] > 2 {
                    seen[u] = true;
                    comp.push(u);
                }
            }
            i += 1;
        }
        if !component_is_finite(mat, &comp) {
            return false;
        }
    }
    true
}

fn component_is_finite(mat: &[Vec<u32>], comp: &[usize]) -> bool {
    let k = comp.len();
    if k == 1 {
        return true;
    }
    let edges: Vec<(usize, usize, u32)> = (0..k)
        .flat_map(|a| ((a + 1)..k).map(move |b| (a, b)))
        .filter_map(|(a, b)| {
            let m = mat[comp[a]][comp[b]];
            (m > 2).then_some((a, b, m))
        })
        .collect();
    // A finite diagram on k vertices is a tree: exactly k-1 bonds.
    if edges.len() != k - 1 {
        return false;
    }
    let mut deg = vec![0usize; k];
    for &(a, b, _) in &edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    if deg.iter().any(|&d| d > 3) {
        return false;
    }
    let branch: Vec<usize> = (0..k).filter(|&v| deg[v] == 3).collect();
    let high: Vec<&(usize, usize, u32)> = edges.iter().filter(|&&(_, _, m)| m > 3).collect();
    if branch.len() > 1 || high.len() > 1 || (!branch.is_empty() && !high.is_empty()) {
        return false;
    }
    if let Some(&&(a, b, m)) = high.first() {
        // A path with one marked bond: B/C (4 at an end), F4, G2/H3/H4/I2(m).
        let at_end = deg[a] == 1 || deg[b] == 1;
        return match m {
            4 => at_end || k == 4,
            5 => at_end && k <= 4,
            _ => k == 2,
        };
    }
    if let Some(&v) = branch.first() {
        // Simply laced tree with one branch vertex: D or E.
        let mut legs: Vec<usize> = (0..k)
            .filter(|&u| u != v && {
                // Leg length = distance from branch vertex to each leaf.
                deg[u] == 1
            })
            .map(|leaf| tree_distance(&edges, leaf, v))
            .collect();
        legs.sort_unstable();
        matches!(legs.as_slice(), [1, 1, _] | [1, 2, 2] | [1, 2, 3] | [1, 2, 4])
    } else {
        true // simply laced path: type A
    }
}

fn tree_distance(edges: &[(usize, usize, u32)], from: usize, to: usize) -> usize {
    let mut dist = HashMap::new();
    dist.insert(from, 0usize);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            return dist[&v];
        }
        for &(a, b, _) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !dist.contains_key(&y) {
                    dist.insert(y, dist[&v] + 1);
                    queue.push_back(y);
                }
            }
        }
    }
    usize::MAX
}

fn split_type(label: &str) -> Result<(char, usize), CoxeterError> {
    let mut chars = label.chars();
    let family = chars
        .next()
        .ok_or_else(|| CoxeterError::UnknownType(label.into()))?
        .to_ascii_uppercase();
    let n: usize = chars
        .as_str()
        .parse()
        .map_err(|_| CoxeterError::UnknownType(label.into()))?;
    if n == 0 {
        return Err(CoxeterError::UnknownType(label.into()));
    }
    Ok((family, n))
}

/// Integer primes shipped as the "always invert" set per Cartan family:
/// the primes dividing the order of the Weyl group. This is deliberately a
/// superset of the classical bad primes; it is data, not derived.
pub fn bad_primes(system: &CoxeterSystem) -> Vec<u64> {
    let order = system.elements().map(|e| e.len()).unwrap_or(0) as u64;
    let mut out = vec![];
    let mut n = order;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders() -> Vec<(&'static str, usize)> {
        vec![("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("G2", 12), ("B3", 48)]
    }

    #[test]
    fn group_orders() {
        for (label, n) in orders() {
            let w = CoxeterSystem::from_type(label).unwrap();
            assert_eq!(w.elements().unwrap().len(), n, "{label}");
        }
    }

    #[test]
    fn canonical_words_are_reduced_and_shortlex_minimal() {
        let w = CoxeterSystem::from_type("B2").unwrap();
        for elt in w.elements().unwrap() {
            // Canonical word multiplies back to itself.
            assert_eq!(w.canonical(elt.word()), elt);
            // No shorter word: multiplying the canonical word letter by
            // letter must increase length at each step.
            let mut acc = Elt::identity();
            for &s in elt.word() {
                let next = w.mult_gen(&acc, s);
                assert_eq!(next.len(), acc.len() + 1);
                acc = next;
            }
        }
    }

    #[test]
    fn longest_element_properties() {
        for (label, _) in orders() {
            let w = CoxeterSystem::from_type(label).unwrap();
            let all: Vec<Gen> = w.gens().collect();
            let w0 = w.longest_element(&all).unwrap();
            assert!(w.mult(&w0, &w0).is_identity(), "{label}: w0 is an involution");
            for x in w.elements().unwrap() {
                assert!(w.bruhat_leq(&x, &w0), "{label}: w0 is Bruhat-maximal");
            }
        }
    }

    #[test]
    fn bruhat_reflexive_antisymmetric() {
        let w = CoxeterSystem::from_type("A2").unwrap();
        let elts = w.elements().unwrap();
        for a in &elts {
            assert!(w.bruhat_leq(a, a));
            for b in &elts {
                if w.bruhat_leq(a, b) && w.bruhat_leq(b, a) {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn double_cosets_partition_the_group() {
        let w = CoxeterSystem::from_type("A2").unwrap();
        let lam = [0u8];
        let mu = [1u8];
        let reps = w.min_double_coset_reps(&lam, &mu).unwrap();
        let mut seen: BTreeSet<Elt> = BTreeSet::new();
        for d in &reps {
            for x in w.double_coset(&lam, d, &mu).unwrap() {
                assert!(seen.insert(x), "double cosets overlap");
            }
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn coset_reps_factor_lengths() {
        let w = CoxeterSystem::from_type("B2").unwrap();
        for subset in [vec![0u8], vec![1u8], vec![0u8, 1u8]] {
            let reps = w.min_coset_reps(&subset).unwrap();
            let para = w.parabolic_elements(&subset).unwrap();
            assert_eq!(reps.len() * para.len(), 8);
            for d in &reps {
                for u in &para {
                    let ud = w.mult(u, d);
                    assert_eq!(ud.len(), u.len() + d.len(), "lengths add across cosets");
                }
            }
        }
    }

    #[test]
    fn unequal_weights_validated() {
        assert!(CoxeterSystem::from_type_weighted("B2", vec![1, 2]).is_ok());
        // A2 has an odd bond, so unequal weights must be rejected.
        let err = CoxeterSystem::from_type_weighted("A2", vec![1, 2]).unwrap_err();
        assert!(matches!(err, CoxeterError::BadWeights(_)));
    }

    #[test]
    fn infinite_group_is_caught_by_cap() {
        // The (3,3,3) triangle group is affine, hence infinite.
        let mat = vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]];
        let w = CoxeterSystem::from_matrix("affine", mat, vec![1, 1, 1]).unwrap();
        assert_eq!(w.elements().unwrap_err(), CoxeterError::NotFinite);
    }

    #[test]
    fn diagram_classifier_matches_known_types() {
        for label in ["A4", "B3", "D4", "E6", "F4", "G2"] {
            let w = CoxeterSystem::from_type(label).unwrap();
            assert!(super::diagram_is_finite(&w.mat), "{label}");
        }
        // H3 and the dihedral I2(7) are finite non-crystallographic types.
        let h3 = vec![vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]];
        assert!(super::diagram_is_finite(&h3));
        let i27 = vec![vec![1, 7], vec![7, 1]];
        assert!(super::diagram_is_finite(&i27));
        // Affine B2 (path with two 4-bonds) is infinite.
        let b2aff = vec![vec![1, 4, 2], vec![4, 1, 4], vec![2, 4, 1]];
        assert!(!super::diagram_is_finite(&b2aff));
    }
}
