//! Finite pointed simplicial sets and higher Hochschild chains.
//!
//! A chain at level `k` is a word indexed by the elements of `Y_k`; the slot
//! of the base point is the module slot. The differential is
//! `D = (-1)^k δ + Σ_i (-1)^i (d_i)_*`, where `δ` applies the algebra
//! differential slot by slot with the Koszul sign of the slots before it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hochschild::{Chain, GradedAlgebra};
use crate::rational::Q;

/// Levels `0..=cutoff` of a pointed simplicial set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSimpSet {
    sizes: Vec<usize>,
    /// `faces[k][i][x]` is `d_i x` for `x ∈ Y_k`, `k ≥ 1`; `faces[0]` is empty.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[k][j][x]` is `s_j x` for `x ∈ Y_k`, `k < cutoff`.
    degeneracies: Vec<Vec<Vec<usize>>>,
    basepoints: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplicialViolation {
    /// A table is missing, has the wrong length, or points outside the next level.
    Table { level: usize, map: String },
    Basepoint { level: usize, map: String },
    /// `d_i d_j = d_{j-1} d_i` for `i < j` fails at `x ∈ Y_level`.
    FaceFace { level: usize, i: usize, j: usize, x: usize },
    /// A face-degeneracy identity fails for `d_i s_j` at `x ∈ Y_level`.
    FaceDegeneracy { level: usize, i: usize, j: usize, x: usize },
    /// `s_i s_j = s_{j+1} s_i` for `i ≤ j` fails at `x ∈ Y_level`.
    DegeneracyDegeneracy { level: usize, i: usize, j: usize, x: usize },
}

impl FinSimpSet {
    /// Raw constructor; shapes are checked by `validate_simplicial`.
    pub fn new(
        sizes: Vec<usize>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
        basepoints: Vec<usize>,
    ) -> Result<Self> {
        let l = sizes.len();
        if l == 0 || faces.len() != l || degeneracies.len() != l || basepoints.len() != l {
            return Err(Error::Shape("simplicial set tables must cover every level".into()));
        }
        Ok(FinSimpSet {
            sizes,
            faces,
            degeneracies,
            basepoints,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self, k: usize) -> usize {
        self.sizes[k]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn basepoint(&self, k: usize) -> usize {
        self.basepoints[k]
    }

    pub fn basepoints(&self) -> &[usize] {
        &self.basepoints
    }

    pub fn face(&self, k: usize, i: usize) -> &[usize] {
        &self.faces[k][i]
    }

    pub fn degeneracy(&self, k: usize, j: usize) -> &[usize] {
        &self.degeneracies[k][j]
    }

    pub fn faces(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    pub fn degeneracies(&self) -> &[Vec<Vec<usize>>] {
        &self.degeneracies
    }

    /// Mutable access for building corrupted examples and for parsers.
    pub fn face_mut(&mut self, k: usize, i: usize) -> &mut Vec<usize> {
        &mut self.faces[k][i]
    }

    fn tables_ok(&self) -> Vec<SimplicialViolation> {
        let mut out = Vec::new();
        let l = self.cutoff();
        for k in 0..=l {
            if self.basepoints[k] >= self.sizes[k] {
                out.push(SimplicialViolation::Basepoint { level: k, map: "basepoint".into() });
            }
            let nf = if k == 0 { 0 } else { k + 1 };
            if self.faces[k].len() != nf {
                out.push(SimplicialViolation::Table { level: k, map: "faces".into() });
            } else if k > 0 {
                for (i, t) in self.faces[k].iter().enumerate() {
                    if t.len() != self.sizes[k] || t.iter().any(|&y| y >= self.sizes[k - 1]) {
                        out.push(SimplicialViolation::Table { level: k, map: format!("d{i}") });
                    }
                }
            }
            let nd = if k == l { 0 } else { k + 1 };
            if self.degeneracies[k].len() != nd {
                out.push(SimplicialViolation::Table { level: k, map: "degeneracies".into() });
            } else if k < l {
                for (j, t) in self.degeneracies[k].iter().enumerate() {
                    if t.len() != self.sizes[k] || t.iter().any(|&y| y >= self.sizes[k + 1]) {
                        out.push(SimplicialViolation::Table { level: k, map: format!("s{j}") });
                    }
                }
            }
        }
        out
    }
}

/// Lists every violated simplicial identity and base point condition.
pub fn validate_simplicial(y: &FinSimpSet) -> Vec<SimplicialViolation> {
    let mut out = y.tables_ok();
    if !out.is_empty() {
        return out;
    }
    let l = y.cutoff();
    for k in 1..=l {
        for i in 0..=k {
            if y.faces[k][i][y.basepoints[k]] != y.basepoints[k - 1] {
                out.push(SimplicialViolation::Basepoint { level: k, map: format!("d{i}") });
            }
        }
    }
    for k in 0..l {
        for j in 0..=k {
            if y.degeneracies[k][j][y.basepoints[k]] != y.basepoints[k + 1] {
                out.push(SimplicialViolation::Basepoint { level: k, map: format!("s{j}") });
            }
        }
    }
    let d = |k: usize, i: usize, x: usize| y.faces[k][i][x];
    let s = |k: usize, j: usize, x: usize| y.degeneracies[k][j][x];
    for k in 2..=l {
        for j in 1..=k {
            for i in 0..j {
                for x in 0..y.sizes[k] {
                    if d(k - 1, i, d(k, j, x)) != d(k - 1, j - 1, d(k, i, x)) {
                        out.push(SimplicialViolation::FaceFace { level: k, i, j, x });
                    }
                }
            }
        }
    }
    // d_i s_j on Y_k, with s_j: Y_k -> Y_{k+1} and d_i: Y_{k+1} -> Y_k.
    for k in 0..l {
        for j in 0..=k {
            for i in 0..=k + 1 {
                for x in 0..y.sizes[k] {
                    let lhs = d(k + 1, i, s(k, j, x));
                    let rhs = if i < j {
                        s(k - 1, j - 1, d(k, i, x))
                    } else if i == j || i == j + 1 {
                        x
                    } else {
                        s(k - 1, j, d(k, i - 1, x))
                    };
                    if lhs != rhs {
                        out.push(SimplicialViolation::FaceDegeneracy { level: k, i, j, x });
                    }
                }
            }
        }
    }
    for k in 0..l.saturating_sub(1) {
        for j in 0..=k {
            for i in 0..=j {
                for x in 0..y.sizes[k] {
                    if s(k + 1, i, s(k, j, x)) != s(k + 1, j + 1, s(k, i, x)) {
                        out.push(SimplicialViolation::DegeneracyDegeneracy { level: k, i, j, x });
                    }
                }
            }
        }
    }
    out
}

/// `S^1 = Δ[1]/∂Δ[1]`: `Y_k = {*, 1, ..., k}` with `*` at index 0.
///
/// Element `j` is the non-degenerate-on-the-boundary sequence `0^j 1^{k+1-j}`.
pub fn circle_model(cutoff: usize) -> Result<FinSimpSet> {
    if cutoff < 1 {
        return Err(Error::Argument("the circle model needs cutoff at least 1".into()));
    }
    let sizes: Vec<usize> = (0..=cutoff).map(|k| k + 1).collect();
    let mut faces = vec![Vec::new()];
    for k in 1..=cutoff {
        let mut level = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let t = (0..=k)
                .map(|j| {
                    if j == 0 {
                        return 0;
                    }
                    let jj = if i < j { j - 1 } else { j };
                    // 0^{k} and 1^{k} both collapse to the base point.
                    if jj == 0 || jj == k {
                        0
                    } else {
                        jj
                    }
                })
                .collect();
            level.push(t);
        }
        faces.push(level);
    }
    let mut degeneracies = Vec::with_capacity(cutoff + 1);
    for k in 0..=cutoff {
        if k == cutoff {
            degeneracies.push(Vec::new());
            continue;
        }
        let level = (0..=k)
            .map(|i| (0..=k).map(|j| if j == 0 { 0 } else if i < j { j + 1 } else { j }).collect())
            .collect();
        degeneracies.push(level);
    }
    FinSimpSet::new(sizes, faces, degeneracies, vec![0; cutoff + 1])
}

/// The simplicial point: one element at every level.
pub fn point_model(cutoff: usize) -> FinSimpSet {
    let faces = (0..=cutoff).map(|k| if k == 0 { Vec::new() } else { vec![vec![0]; k + 1] }).collect();
    let degeneracies = (0..=cutoff).map(|k| if k == cutoff { Vec::new() } else { vec![vec![0]; k + 1] }).collect();
    FinSimpSet {
        sizes: vec![1; cutoff + 1],
        faces,
        degeneracies,
        basepoints: vec![0; cutoff + 1],
    }
}

/// Levelwise product; `(y, z)` has index `y · |Z_k| + z`.
pub fn product_model(y: &FinSimpSet, z: &FinSimpSet) -> Result<FinSimpSet> {
    if y.cutoff() != z.cutoff() {
        return Err(Error::Shape(format!(
            "cutoffs differ: {} and {}",
            y.cutoff(),
            z.cutoff()
        )));
    }
    let l = y.cutoff();
    let pair = |k: usize, a: usize, b: usize| a * z.sizes[k] + b;
    let combine = |ty: &[usize], tz: &[usize], k_src: usize, k_dst: usize| -> Vec<usize> {
        let mut t = Vec::with_capacity(y.sizes[k_src] * z.sizes[k_src]);
        for a in 0..y.sizes[k_src] {
            for b in 0..z.sizes[k_src] {
                t.push(pair(k_dst, ty[a], tz[b]));
            }
        }
        t
    };
    let mut faces = Vec::with_capacity(l + 1);
    let mut degeneracies = Vec::with_capacity(l + 1);
    for k in 0..=l {
        faces.push(
            (0..y.faces[k].len())
                .map(|i| combine(&y.faces[k][i], &z.faces[k][i], k, k - 1))
                .collect(),
        );
        degeneracies.push(
            (0..y.degeneracies[k].len())
                .map(|j| combine(&y.degeneracies[k][j], &z.degeneracies[k][j], k, k + 1))
                .collect(),
        );
    }
    FinSimpSet::new(
        (0..=l).map(|k| y.sizes[k] * z.sizes[k]).collect(),
        faces,
        degeneracies,
        (0..=l).map(|k| pair(k, y.basepoints[k], z.basepoints[k])).collect(),
    )
}

pub fn torus_model(cutoff: usize) -> Result<FinSimpSet> {
    let c = circle_model(cutoff)?;
    product_model(&c, &c)
}

fn parity_sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

/// Ordered product of basis elements, expanded in the basis.
fn product<A: GradedAlgebra>(alg: &A, factors: &[A::Basis]) -> Vec<(A::Basis, Q)> {
    let mut acc: Vec<(A::Basis, Q)> = vec![(alg.unit(), Q::one())];
    for f in factors {
        let mut next: BTreeMap<A::Basis, Q> = BTreeMap::new();
        for (b, c) in &acc {
            for (p, v) in alg.mul(b, f) {
                let e = next.entry(p).or_insert_with(Q::zero);
                *e += c * v;
            }
        }
        acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if acc.is_empty() {
            break;
        }
    }
    acc
}

/// `f_*(w)` for a pointed map `f: Y_k → Y_l` given as a table, from base point
/// `src_base` to `dst_base` in a target with `dst_size` elements.
///
/// Slot `t` of the result is the product, in source order, of the entries
/// with `f(i) = t`, and the unit for an empty preimage. The sign is the
/// Koszul sign of regrouping the entries by target.
pub fn induced_map<A: GradedAlgebra>(
    alg: &A,
    f: &[usize],
    src_base: usize,
    dst_base: usize,
    dst_size: usize,
    word: &[A::Basis],
) -> Result<Vec<(Vec<A::Basis>, Q)>> {
    if word.len() != f.len() {
        return Err(Error::Shape("word length differs from the size of the source".into()));
    }
    if f.get(src_base) != Some(&dst_base) {
        return Err(Error::Validation("the map does not preserve the base point".into()));
    }
    if f.iter().any(|&t| t >= dst_size) {
        return Err(Error::Shape("map value outside the target".into()));
    }
    let mut odd = false;
    for p in 0..word.len() {
        if alg.degree(&word[p]).rem_euclid(2) == 0 {
            continue;
        }
        for q in p + 1..word.len() {
            if f[p] > f[q] && alg.degree(&word[q]).rem_euclid(2) == 1 {
                odd = !odd;
            }
        }
    }
    let mut groups: Vec<Vec<A::Basis>> = vec![Vec::new(); dst_size];
    for (i, a) in word.iter().enumerate() {
        groups[f[i]].push(a.clone());
    }
    let mut words: Vec<(Vec<A::Basis>, Q)> = vec![(Vec::with_capacity(dst_size), parity_sign(odd))];
    for g in &groups {
        let p = product(alg, g);
        if p.is_empty() {
            return Ok(Vec::new());
        }
        let mut next = Vec::with_capacity(words.len() * p.len());
        for (w, c) in &words {
            for (b, v) in &p {
                let mut nw = w.clone();
                nw.push(b.clone());
                next.push((nw, c * v));
            }
        }
        words = next;
    }
    Ok(words)
}

/// A higher Hochschild chain: one ordinary chain per simplicial level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HHYChain<B: Ord> {
    parts: BTreeMap<usize, Chain<B>>,
}

impl<B: Clone + Ord> Default for HHYChain<B> {
    fn default() -> Self {
        HHYChain { parts: BTreeMap::new() }
    }
}

impl<B: Clone + Ord> HHYChain<B> {
    pub fn zero() -> Self {
        HHYChain::default()
    }

    pub fn at_level(level: usize, chain: Chain<B>) -> Self {
        let mut c = HHYChain::zero();
        c.add_chain(level, &chain);
        c
    }

    pub fn add_term(&mut self, level: usize, word: Vec<B>, c: Q) {
        let part = self.parts.entry(level).or_default();
        part.add_term(word, c);
        if part.is_zero() {
            self.parts.remove(&level);
        }
    }

    pub fn add_chain(&mut self, level: usize, chain: &Chain<B>) {
        for (w, c) in chain.terms() {
            self.add_term(level, w.clone(), c.clone());
        }
    }

    pub fn level(&self, k: usize) -> Chain<B> {
        self.parts.get(&k).cloned().unwrap_or_default()
    }

    pub fn levels(&self) -> impl Iterator<Item = (&usize, &Chain<B>)> {
        self.parts.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.values().map(|c| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }
}

/// `Σ |a_i| - k` for a word at level `k`.
pub fn hhy_degree<A: GradedAlgebra>(alg: &A, level: usize, word: &[A::Basis]) -> i64 {
    word.iter().map(|a| alg.degree(a)).sum::<i64>() - level as i64
}

/// The differential `D` on higher Hochschild chains over `y`.
pub fn higher_d<A: GradedAlgebra>(c: &HHYChain<A::Basis>, y: &FinSimpSet, alg: &A) -> Result<HHYChain<A::Basis>> {
    if !alg.is_commutative() {
        return Err(Error::Unsupported("higher Hochschild chains need a graded-commutative algebra".into()));
    }
    let mut out = HHYChain::zero();
    for (&k, chain) in c.levels() {
        if k > y.cutoff() {
            return Err(Error::Argument(format!("level {k} is above the cutoff {}", y.cutoff())));
        }
        for (w, coeff) in chain.terms() {
            if w.len() != y.size(k) {
                return Err(Error::Shape(format!("word of length {} at level {k}", w.len())));
            }
            let mut before = k as i64;
            for (i, a) in w.iter().enumerate() {
                let s = parity_sign(before.rem_euclid(2) == 1) * coeff;
                for (b, v) in alg.diff(a) {
                    let mut nw = w.clone();
                    nw[i] = b;
                    out.add_term(k, nw, &s * v);
                }
                before += alg.degree(a);
            }
            if k == 0 {
                continue;
            }
            for i in 0..=k {
                let s = parity_sign(i % 2 == 1) * coeff;
                let img = induced_map(alg, y.face(k, i), y.basepoint(k), y.basepoint(k - 1), y.size(k - 1), w)?;
                for (nw, v) in img {
                    out.add_term(k - 1, nw, &s * v);
                }
            }
        }
    }
    Ok(out)
}

/// Sign `θ(w) = (-1)^{Σ_i (k - i)|a_i| + k}` identifying circle-model chains
/// at level `k` with Hochschild words, so that `θ ∘ D = hochschild_d ∘ θ`.
pub fn circle_sign<A: GradedAlgebra>(alg: &A, word: &[A::Basis]) -> Q {
    let k = word.len() as i64 - 1;
    let e: i64 = word
        .iter()
        .enumerate()
        .map(|(i, a)| (k - i as i64) * alg.degree(a))
        .sum::<i64>()
        + k;
    parity_sign(e.rem_euclid(2) == 1)
}

/// Circle-model chain to Hochschild chain.
pub fn circle_to_hochschild<A: GradedAlgebra>(alg: &A, c: &HHYChain<A::Basis>) -> Chain<A::Basis> {
    let mut out = Chain::zero();
    for (_, chain) in c.levels() {
        for (w, v) in chain.terms() {
            out.add_term(w.clone(), circle_sign(alg, w) * v);
        }
    }
    out
}

/// Hochschild chain to circle-model chain; inverse of `circle_to_hochschild`.
pub fn hochschild_to_circle<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> HHYChain<A::Basis> {
    let mut out = HHYChain::zero();
    for (w, v) in c.terms() {
        if !w.is_empty() {
            out.add_term(w.len() - 1, w.clone(), circle_sign(alg, w) * v);
        }
    }
    out
}
