//! Hochschild chains of a graded algebra with coefficients in itself.
//!
//! A word `[a0, a1, ..., an]` stands for `a0 ⊗ a1 ⊗ ... ⊗ an`: `a0` is the
//! module slot, the rest is the bar part, where each `a_i` carries the shifted
//! degree `|a_i| - 1`. The total degree is `|a0| + Σ (|a_i| - 1)` and the
//! differential raises it by one:
//!
//! - `d a0 ⊗ ...`
//! - `-(-1)^{ε_i} a0 ⊗ ... ⊗ d a_i ⊗ ...`, with `ε_i = |a0| + Σ_{0<j<i} (|a_j| - 1)`
//! - `-(-1)^{|a0|} a0 a1 ⊗ a2 ⊗ ...`
//! - `(-1)^{ε_i + |a_i|} a0 ⊗ ... ⊗ a_i a_{i+1} ⊗ ...`
//! - `(-1)^{(|a_n| - 1) ε_n} a_n a0 ⊗ a1 ⊗ ... ⊗ a_{n-1}`
//!
//! This is the textbook shifted complex conjugated by `(-1)^{bar length}`; in
//! the textbook signs `P(𝒜)` is a cycle iff `d𝒜 = 𝒜𝒜`.
//!
//! With these signs the length-`ℓ` part of `d P(𝒜)` is
//! `-Σ_i 1 ⊗ 𝒜 ⊗ ... ⊗ (d𝒜 + 𝒜𝒜) ⊗ ... ⊗ 𝒜` with the bracketed factor in slot `i`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_traits::{One, Zero};

use crate::cochain::{ce_differential, subset_rank, subsets};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::matrix::QMatrix;
use crate::rational::{q, Q};

/// Linear combination of basis elements.
pub type Element<B> = Vec<(B, Q)>;

/// A unital graded algebra with a differential, given on a basis.
pub trait GradedAlgebra {
    type Basis: Clone + Ord + Debug;

    fn degree(&self, b: &Self::Basis) -> i64;
    fn unit(&self) -> Self::Basis;
    fn mul(&self, a: &Self::Basis, b: &Self::Basis) -> Element<Self::Basis>;
    fn diff(&self, a: &Self::Basis) -> Element<Self::Basis>;
    fn is_commutative(&self) -> bool;
}

fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// A finite-dimensional DGA given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDGA {
    names: Vec<String>,
    degrees: Vec<i64>,
    /// `mult[a * dim + b]` is `e_a e_b` as a sparse combination.
    mult: Vec<Vec<(usize, Q)>>,
    /// `diff[a]` is `d e_a`.
    diff: Vec<Vec<(usize, Q)>>,
    unit: usize,
    commutative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DgaViolation {
    Degree { a: usize, b: Option<usize> },
    DSquared { a: usize },
    Leibniz { a: usize, b: usize },
    Associativity { a: usize, b: usize, c: usize },
    Unit { a: usize },
    Commutativity { a: usize, b: usize },
}

fn sparse(v: &[Q]) -> Vec<(usize, Q)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn accumulate(out: &mut BTreeMap<usize, Q>, idx: usize, c: Q) {
    let e = out.entry(idx).or_insert_with(Q::zero);
    *e += c;
}

fn collect(map: BTreeMap<usize, Q>) -> Vec<(usize, Q)> {
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl FinDGA {
    /// `mult` is dense, `mult[(a * dim + b) * dim + c]`; column `j` of `d` is `d e_j`.
    pub fn new(
        names: Vec<String>,
        degrees: Vec<i64>,
        mult: Vec<Q>,
        d: &QMatrix,
        unit: usize,
        commutative: bool,
    ) -> Result<Self> {
        let n = degrees.len();
        if names.len() != n || mult.len() != n * n * n || d.shape() != (n, n) || unit >= n {
            return Err(Error::Shape(format!("inconsistent DGA data for dimension {n}")));
        }
        Ok(FinDGA {
            names,
            degrees,
            mult: (0..n * n).map(|ab| sparse(&mult[ab * n..(ab + 1) * n])).collect(),
            diff: (0..n).map(|j| sparse(&d.column(j))).collect(),
            unit,
            commutative,
        })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Dense structure constants, for serialization.
    pub fn mult_dense(&self) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n * n * n];
        for ab in 0..n * n {
            for (c, v) in &self.mult[ab] {
                out[ab * n + c] = v.clone();
            }
        }
        out
    }

    pub fn d_matrix(&self) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(n, n);
        for (j, col) in self.diff.iter().enumerate() {
            for (i, v) in col {
                m[(*i, j)] = v.clone();
            }
        }
        m
    }

    fn mul_vec(&self, x: &[(usize, Q)], y: &[(usize, Q)]) -> Vec<(usize, Q)> {
        let n = self.dim();
        let mut out = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                for (c, v) in &self.mult[a * n + b] {
                    accumulate(&mut out, *c, ca * cb * v);
                }
            }
        }
        collect(out)
    }

    fn d_vec(&self, x: &[(usize, Q)]) -> Vec<(usize, Q)> {
        let mut out = BTreeMap::new();
        for (a, ca) in x {
            for (b, v) in &self.diff[*a] {
                accumulate(&mut out, *b, ca * v);
            }
        }
        collect(out)
    }

    /// Product of two elements given as sparse combinations.
    pub fn mul_elements(&self, x: &[(usize, Q)], y: &[(usize, Q)]) -> Vec<(usize, Q)> {
        self.mul_vec(x, y)
    }

    pub fn d_element(&self, x: &[(usize, Q)]) -> Vec<(usize, Q)> {
        self.d_vec(x)
    }

    pub fn validate(&self) -> Vec<DgaViolation> {
        let n = self.dim();
        let mut out = Vec::new();
        let e = |a: usize| vec![(a, Q::one())];
        for a in 0..n {
            if self.diff[a].iter().any(|(b, _)| self.degrees[*b] != self.degrees[a] + 1) {
                out.push(DgaViolation::Degree { a, b: None });
            }
            for b in 0..n {
                let deg = self.degrees[a] + self.degrees[b];
                if self.mult[a * n + b].iter().any(|(c, _)| self.degrees[*c] != deg) {
                    out.push(DgaViolation::Degree { a, b: Some(b) });
                }
            }
        }
        for a in 0..n {
            if !self.d_vec(&self.diff[a]).is_empty() {
                out.push(DgaViolation::DSquared { a });
            }
            if self.mul_vec(&e(self.unit), &e(a)) != e(a) || self.mul_vec(&e(a), &e(self.unit)) != e(a) {
                out.push(DgaViolation::Unit { a });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul_vec(&e(a), &e(b));
                let lhs = self.d_vec(&ab);
                let mut rhs: BTreeMap<usize, Q> = BTreeMap::new();
                for (c, v) in self.mul_vec(&self.diff[a], &e(b)) {
                    accumulate(&mut rhs, c, v);
                }
                let s = sign(odd(self.degrees[a]));
                for (c, v) in self.mul_vec(&e(a), &self.diff[b]) {
                    accumulate(&mut rhs, c, v * &s);
                }
                if lhs != collect(rhs) {
                    out.push(DgaViolation::Leibniz { a, b });
                }
                if self.commutative {
                    let s = sign(odd(self.degrees[a] * self.degrees[b]));
                    let ba: Vec<(usize, Q)> = self.mul_vec(&e(b), &e(a)).into_iter().map(|(c, v)| (c, v * &s)).collect();
                    if ab != ba && a <= b {
                        out.push(DgaViolation::Commutativity { a, b });
                    }
                }
                for c in 0..n {
                    let l = self.mul_vec(&ab, &e(c));
                    let r = self.mul_vec(&e(a), &self.mul_vec(&e(b), &e(c)));
                    if l != r {
                        out.push(DgaViolation::Associativity { a, b, c });
                    }
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::Validation(format!("DGA axiom fails: {v:?}"))),
        }
    }

    /// Exterior algebra on `k` generators of degree 1 with `d = 0`.
    pub fn exterior(k: usize) -> Self {
        let gens: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
        let mut blocks = Vec::new();
        for p in 0..=k {
            blocks.push(subsets(k, p));
        }
        FinDGA::from_subset_basis(&gens, &blocks, |_, _| Vec::new())
    }

    /// The Chevalley–Eilenberg algebra `Λ g*` with trivial coefficients.
    pub fn ce_algebra(lie: &LieAlgebra) -> Self {
        let k = lie.dim();
        let gens: Vec<String> = lie.basis_names().iter().map(|s| format!("{s}*")).collect();
        let blocks: Vec<Vec<Vec<usize>>> = (0..=k).map(|p| subsets(k, p)).collect();
        let trivial: Vec<QMatrix> = (0..k).map(|_| QMatrix::zeros(1, 1)).collect();
        let ds: Vec<QMatrix> = (0..=k).map(|p| ce_differential(lie, &trivial, 1, p)).collect();
        FinDGA::from_subset_basis(&gens, &blocks, |p, r| {
            if p >= k {
                return Vec::new();
            }
            let col = ds[p].column(r);
            sparse(&col)
        })
    }

    /// Basis `e^S` over all subsets, grouped by size; `d(p, rank)` gives `d e^S`
    /// in the rank coordinates of size `p + 1`.
    fn from_subset_basis(gens: &[String], blocks: &[Vec<Vec<usize>>], d: impl Fn(usize, usize) -> Vec<(usize, Q)>) -> Self {
        let k = gens.len();
        let mut offsets = Vec::new();
        let mut total = 0;
        for b in blocks {
            offsets.push(total);
            total += b.len();
        }
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (p, b) in blocks.iter().enumerate() {
            for s in b {
                let name = if s.is_empty() {
                    String::from("1")
                } else {
                    s.iter().map(|&i| gens[i].as_str()).collect::<Vec<_>>().join("^")
                };
                names.push(name);
                degrees.push(p as i64);
            }
        }
        let mut mult = vec![Vec::new(); total * total];
        for (p, bp) in blocks.iter().enumerate() {
            for (i, s) in bp.iter().enumerate() {
                for (qd, bq) in blocks.iter().enumerate() {
                    for (j, t) in bq.iter().enumerate() {
                        let mut all = s.clone();
                        all.extend_from_slice(t);
                        if let Some((sorted, neg)) = crate::cochain::sort_with_sign(&all) {
                            let r = subset_rank(k, &sorted);
                            mult[(offsets[p] + i) * total + offsets[qd] + j] = vec![(offsets[p + qd] + r, sign(neg))];
                        }
                    }
                }
            }
        }
        let mut diff = Vec::with_capacity(total);
        for (p, bp) in blocks.iter().enumerate() {
            for r in 0..bp.len() {
                diff.push(d(p, r).into_iter().map(|(i, v)| (offsets[p + 1] + i, v)).collect());
            }
        }
        FinDGA {
            names,
            degrees,
            mult,
            diff,
            unit: 0,
            commutative: true,
        }
    }

    /// `M_n(Q)` in degree 0 with basis `1, E_ij ((i, j) != (0, 0))`.
    pub fn matrix_algebra(n: usize) -> Self {
        let idx = |i: usize, j: usize| -> usize { i * n + j };
        // Basis position of E_ij; position 0 is the identity.
        let dim = n * n;
        let pos = |i: usize, j: usize| -> usize { idx(i, j) };
        let mut names = vec![String::from("1")];
        for i in 0..n {
            for j in 0..n {
                if (i, j) != (0, 0) {
                    names.push(format!("E{i}{j}"));
                }
            }
        }
        // Coordinates of E_ij in the basis.
        let coords = |i: usize, j: usize| -> Vec<(usize, Q)> {
            if (i, j) == (0, 0) {
                let mut v = vec![(0, Q::one())];
                for k in 1..n {
                    v.push((pos(k, k), -Q::one()));
                }
                v
            } else {
                vec![(pos(i, j), Q::one())]
            }
        };
        // Basis element b as a dense n x n matrix.
        let as_matrix = |b: usize| -> Vec<Q> {
            let mut m = vec![Q::zero(); dim];
            if b == 0 {
                for k in 0..n {
                    m[idx(k, k)] = Q::one();
                }
            } else {
                m[b] = Q::one();
            }
            m
        };
        let mut mult = vec![Vec::new(); dim * dim];
        for a in 0..dim {
            let ma = as_matrix(a);
            for b in 0..dim {
                let mb = as_matrix(b);
                let mut out = BTreeMap::new();
                for i in 0..n {
                    for j in 0..n {
                        let mut v = Q::zero();
                        for k in 0..n {
                            v += &ma[idx(i, k)] * &mb[idx(k, j)];
                        }
                        if !v.is_zero() {
                            for (c, w) in coords(i, j) {
                                accumulate(&mut out, c, &v * w);
                            }
                        }
                    }
                }
                mult[a * dim + b] = collect(out);
            }
        }
        FinDGA {
            names,
            degrees: vec![0; dim],
            mult,
            diff: vec![Vec::new(); dim],
            unit: 0,
            commutative: n == 1,
        }
    }

    /// `A ⊗ B` with `(a ⊗ b)(a' ⊗ b') = (-1)^{|b||a'|} aa' ⊗ bb'`, basis index `i * dim B + j`.
    pub fn tensor(a: &FinDGA, b: &FinDGA) -> Self {
        let (na, nb) = (a.dim(), b.dim());
        let dim = na * nb;
        let mut names = Vec::with_capacity(dim);
        let mut degrees = Vec::with_capacity(dim);
        for i in 0..na {
            for j in 0..nb {
                names.push(format!("{}(x){}", a.names[i], b.names[j]));
                degrees.push(a.degrees[i] + b.degrees[j]);
            }
        }
        let mut mult = vec![Vec::new(); dim * dim];
        for i in 0..na {
            for j in 0..nb {
                for k in 0..na {
                    for l in 0..nb {
                        let s = sign(odd(b.degrees[j] * a.degrees[k]));
                        let mut out = BTreeMap::new();
                        for (x, cx) in &a.mult[i * na + k] {
                            for (y, cy) in &b.mult[j * nb + l] {
                                accumulate(&mut out, x * nb + y, cx * cy * &s);
                            }
                        }
                        mult[(i * nb + j) * dim + k * nb + l] = collect(out);
                    }
                }
            }
        }
        let mut diff = Vec::with_capacity(dim);
        for i in 0..na {
            for j in 0..nb {
                let mut out = BTreeMap::new();
                for (x, c) in &a.diff[i] {
                    accumulate(&mut out, x * nb + j, c.clone());
                }
                let s = sign(odd(a.degrees[i]));
                for (y, c) in &b.diff[j] {
                    accumulate(&mut out, i * nb + y, c * &s);
                }
                diff.push(collect(out));
            }
        }
        FinDGA {
            names,
            degrees,
            mult,
            diff,
            unit: a.unit * nb + b.unit,
            commutative: a.commutative && b.commutative,
        }
    }

    /// `Q[x]/(x^top)` with `|x| = 1` and `dx = c x^2`.
    ///
    /// Leibniz forces `d(x^k) = c x^{k+1}` for odd `k` and `0` for even `k`.
    pub fn truncated_odd(top: usize, c: Q) -> Self {
        let mut names = Vec::with_capacity(top);
        for k in 0..top {
            names.push(match k {
                0 => String::from("1"),
                1 => String::from("x"),
                _ => format!("x{k}"),
            });
        }
        let mut mult = vec![Vec::new(); top * top];
        for a in 0..top {
            for b in 0..top {
                if a + b < top {
                    mult[a * top + b] = vec![(a + b, Q::one())];
                }
            }
        }
        let diff = (0..top)
            .map(|k| {
                if k % 2 == 1 && k + 1 < top && !c.is_zero() {
                    vec![(k + 1, c.clone())]
                } else {
                    Vec::new()
                }
            })
            .collect();
        FinDGA {
            names,
            degrees: (0..top as i64).collect(),
            mult,
            diff,
            unit: 0,
            commutative: top <= 2,
        }
    }

    /// `{1, x, y}` with `|x| = 1`, `|y| = 2`, `dx = y` and all products of `x, y` zero.
    pub fn acyclic_pair() -> Self {
        let mut mult = vec![Vec::new(); 9];
        for a in 0..3 {
            mult[a] = vec![(a, Q::one())];
            mult[a * 3] = vec![(a, Q::one())];
        }
        FinDGA {
            names: vec!["1".into(), "x".into(), "y".into()],
            degrees: vec![0, 1, 2],
            mult,
            diff: vec![Vec::new(), vec![(2, Q::one())], Vec::new()],
            unit: 0,
            commutative: true,
        }
    }
}

impl GradedAlgebra for FinDGA {
    type Basis = usize;

    fn degree(&self, b: &usize) -> i64 {
        self.degrees[*b]
    }

    fn unit(&self) -> usize {
        self.unit
    }

    fn mul(&self, a: &usize, b: &usize) -> Element<usize> {
        self.mult[a * self.dim() + b].clone()
    }

    fn diff(&self, a: &usize) -> Element<usize> {
        self.diff[*a].clone()
    }

    fn is_commutative(&self) -> bool {
        self.commutative
    }
}

/// A linear combination of words `[a0, a1, ..., an]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<B: Ord> {
    terms: BTreeMap<Vec<B>, Q>,
}

impl<B: Clone + Ord> Default for Chain<B> {
    fn default() -> Self {
        Chain { terms: BTreeMap::new() }
    }
}

impl<B: Clone + Ord> Chain<B> {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn word(w: Vec<B>) -> Self {
        let mut c = Chain::zero();
        c.add_term(w, Q::one());
        c
    }

    pub fn add_term(&mut self, w: Vec<B>, c: Q) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<B>, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Chain<B>) -> Chain<B> {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Chain<B>) -> Chain<B> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Chain<B> {
        let mut out = Chain::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    /// Components keyed by bar length (word length minus one).
    pub fn by_bar_length(&self) -> BTreeMap<usize, Chain<B>> {
        let mut out: BTreeMap<usize, Chain<B>> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len().saturating_sub(1)).or_default().add_term(w.clone(), c.clone());
        }
        out
    }

    /// The component of bar length `l`.
    pub fn component(&self, l: usize) -> Chain<B> {
        let mut out = Chain::zero();
        for (w, c) in &self.terms {
            if w.len() == l + 1 {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }
}

/// Total degree `|a0| + Σ (|a_i| - 1)`.
pub fn word_degree<A: GradedAlgebra>(alg: &A, w: &[A::Basis]) -> i64 {
    match w.split_first() {
        None => 0,
        Some((a0, rest)) => alg.degree(a0) + rest.iter().map(|a| alg.degree(a) - 1).sum::<i64>(),
    }
}

/// The common total degree of a chain, `None` for the zero chain.
pub fn chain_degree<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Result<Option<i64>> {
    let mut deg = None;
    for (w, _) in c.terms() {
        let d = word_degree(alg, w);
        match deg {
            None => deg = Some(d),
            Some(e) if e != d => {
                return Err(Error::Validation(format!("chain mixes total degrees {e} and {d}")));
            }
            _ => {}
        }
    }
    Ok(deg)
}

fn push_replaced<B: Clone + Ord>(out: &mut Chain<B>, w: &[B], i: usize, el: &[(B, Q)], c: &Q) {
    for (b, v) in el {
        let mut nw = w.to_vec();
        nw[i] = b.clone();
        out.add_term(nw, c * v);
    }
}

/// Hochschild differential of one word, accumulated into `out` with coefficient `c`.
fn d_word<A: GradedAlgebra>(alg: &A, w: &[A::Basis], c: &Q, out: &mut Chain<A::Basis>) {
    let n = w.len() - 1;
    let deg: Vec<i64> = w.iter().map(|a| alg.degree(a)).collect();
    push_replaced(out, w, 0, &alg.diff(&w[0]), c);
    let mut eps = deg[0];
    for i in 1..=n {
        // eps = ε_i
        let s = -sign(odd(eps)) * c;
        push_replaced(out, w, i, &alg.diff(&w[i]), &s);
        if i < n {
            let s = sign(odd(eps + deg[i])) * c;
            for (b, v) in alg.mul(&w[i], &w[i + 1]) {
                let mut nw = Vec::with_capacity(n);
                nw.extend_from_slice(&w[..i]);
                nw.push(b);
                nw.extend_from_slice(&w[i + 2..]);
                out.add_term(nw, &s * v);
            }
        }
        if i < n {
            eps += deg[i] - 1;
        }
    }
    if n >= 1 {
        let s = -sign(odd(deg[0])) * c;
        for (b, v) in alg.mul(&w[0], &w[1]) {
            let mut nw = Vec::with_capacity(n);
            nw.push(b);
            nw.extend_from_slice(&w[2..]);
            out.add_term(nw, &s * v);
        }
        // Here eps = ε_n.
        let s = sign(odd((deg[n] - 1) * eps)) * c;
        for (b, v) in alg.mul(&w[n], &w[0]) {
            let mut nw = Vec::with_capacity(n);
            nw.push(b);
            nw.extend_from_slice(&w[1..n]);
            out.add_term(nw, &s * v);
        }
    }
}

pub fn hochschild_d<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let mut out = Chain::zero();
    for (w, coeff) in c.terms() {
        if !w.is_empty() {
            d_word(alg, w, coeff, &mut out);
        }
    }
    out
}

/// All shuffles of `v` and `w` with their Koszul signs for the weights `dv`, `dw`.
fn shuffles<B: Clone>(v: &[B], dv: &[i64], w: &[B], dw: &[i64]) -> Vec<(Vec<B>, bool)> {
    if v.is_empty() {
        return vec![(w.to_vec(), false)];
    }
    if w.is_empty() {
        return vec![(v.to_vec(), false)];
    }
    let mut out = Vec::new();
    for (mut rest, s) in shuffles(&v[1..], &dv[1..], w, dw) {
        rest.insert(0, v[0].clone());
        out.push((rest, s));
    }
    // w[0] moves in front of all of v.
    let pass = odd(dw[0] * dv.iter().sum::<i64>());
    for (mut rest, s) in shuffles(v, dv, &w[1..], &dw[1..]) {
        rest.insert(0, w[0].clone());
        out.push((rest, s ^ pass));
    }
    out
}

/// Shuffle product of two chains over a graded-commutative algebra.
pub fn shuffle<A: GradedAlgebra>(alg: &A, x: &Chain<A::Basis>, y: &Chain<A::Basis>) -> Result<Chain<A::Basis>> {
    if !alg.is_commutative() {
        return Err(Error::Unsupported("the shuffle product needs a graded-commutative algebra".into()));
    }
    let mut out = Chain::zero();
    for (u, cu) in x.terms() {
        for (v, cv) in y.terms() {
            shuffle_words(alg, u, v, &(cu * cv), &mut out);
        }
    }
    Ok(out)
}

fn shuffle_words<A: GradedAlgebra>(alg: &A, u: &[A::Basis], v: &[A::Basis], c: &Q, out: &mut Chain<A::Basis>) {
    let du: Vec<i64> = u[1..].iter().map(|a| alg.degree(a) - 1).collect();
    let dv: Vec<i64> = v[1..].iter().map(|a| alg.degree(a) - 1).collect();
    // b0 moves past the bar part of u.
    let s0 = odd(alg.degree(&v[0]) * du.iter().sum::<i64>());
    let heads = alg.mul(&u[0], &v[0]);
    if heads.is_empty() {
        return;
    }
    for (word, s) in shuffles(&u[1..], &du, &v[1..], &dv) {
        for (h, hv) in &heads {
            let mut nw = Vec::with_capacity(word.len() + 1);
            nw.push(h.clone());
            nw.extend(word.iter().cloned());
            out.add_term(nw, sign(s ^ s0) * hv * c);
        }
    }
}

fn element_degree<A: GradedAlgebra>(alg: &A, x: &[(A::Basis, Q)]) -> Result<Option<i64>> {
    let mut deg = None;
    for (b, c) in x {
        if c.is_zero() {
            continue;
        }
        let d = alg.degree(b);
        match deg {
            None => deg = Some(d),
            Some(e) if e != d => return Err(Error::Validation("element is not homogeneous".into())),
            _ => {}
        }
    }
    Ok(deg)
}

/// `Σ_{ℓ ≤ n} 1 ⊗ 𝒜^{⊗ℓ}`; the `ℓ = 0` term is the word `[1]`.
pub fn p_chain<A: GradedAlgebra>(alg: &A, elt: &[(A::Basis, Q)], n: usize) -> Result<Chain<A::Basis>> {
    if let Some(d) = element_degree(alg, elt)? {
        if !odd(d) {
            return Err(Error::Validation(format!("the element has even degree {d}")));
        }
    }
    let elt: Vec<(A::Basis, Q)> = elt.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
    let mut out = Chain::zero();
    let mut layer: Vec<(Vec<A::Basis>, Q)> = vec![(vec![alg.unit()], Q::one())];
    for l in 0..=n {
        for (w, c) in &layer {
            out.add_term(w.clone(), c.clone());
        }
        if l == n {
            break;
        }
        let mut next = Vec::with_capacity(layer.len() * elt.len());
        for (w, c) in &layer {
            for (b, v) in &elt {
                let mut nw = w.clone();
                nw.push(b.clone());
                next.push((nw, c * v));
            }
        }
        layer = next;
    }
    Ok(out)
}

fn combine<B: Clone + Ord>(parts: &[Element<B>]) -> Element<B> {
    let mut map: BTreeMap<B, Q> = BTreeMap::new();
    for p in parts {
        for (b, c) in p {
            let e = map.entry(b.clone()).or_insert_with(Q::zero);
            *e += c;
        }
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `d𝒜 + 𝒜𝒜`.
pub fn mc_curvature<A: GradedAlgebra>(alg: &A, elt: &[(A::Basis, Q)]) -> Element<A::Basis> {
    let mut parts = Vec::new();
    for (a, ca) in elt {
        parts.push(alg.diff(a).into_iter().map(|(b, v)| (b, v * ca)).collect());
        for (b, cb) in elt {
            parts.push(alg.mul(a, b).into_iter().map(|(x, v)| (x, v * ca * cb)).collect());
        }
    }
    combine(&parts)
}

pub fn is_mc_element<A: GradedAlgebra>(alg: &A, elt: &[(A::Basis, Q)]) -> bool {
    mc_curvature(alg, elt).is_empty()
}

/// Per bar length `ℓ ≤ max_len`: whether the component of `d P(𝒜)` vanishes.
///
/// `P` is truncated at `max_len + 1`, which is what the length-`max_len`
/// component depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleReport {
    pub is_mc: bool,
    pub vanishing: Vec<bool>,
}

impl CycleReport {
    pub fn consistent(&self) -> bool {
        self.vanishing.iter().all(|&v| v) == self.is_mc
    }
}

pub fn check_cycle<A: GradedAlgebra>(alg: &A, elt: &[(A::Basis, Q)], max_len: usize) -> Result<CycleReport> {
    let p = p_chain(alg, elt, max_len + 1)?;
    let dp = hochschild_d(alg, &p);
    let vanishing = (0..=max_len).map(|l| dp.component(l).is_zero()).collect();
    Ok(CycleReport {
        is_mc: is_mc_element(alg, elt),
        vanishing,
    })
}

/// The Hochschild chains of a commutative algebra as a commutative DGA
/// under the shuffle product, so that its own Hochschild complex can be formed.
pub struct HochschildAlgebra<'a, A: GradedAlgebra> {
    inner: &'a A,
}

impl<'a, A: GradedAlgebra> HochschildAlgebra<'a, A> {
    pub fn new(inner: &'a A) -> Result<Self> {
        if !inner.is_commutative() {
            return Err(Error::Unsupported("the shuffle algebra needs a graded-commutative algebra".into()));
        }
        Ok(HochschildAlgebra { inner })
    }

    pub fn inner(&self) -> &A {
        self.inner
    }
}

impl<A: GradedAlgebra> GradedAlgebra for HochschildAlgebra<'_, A> {
    type Basis = Vec<A::Basis>;

    fn degree(&self, b: &Vec<A::Basis>) -> i64 {
        word_degree(self.inner, b)
    }

    fn unit(&self) -> Vec<A::Basis> {
        vec![self.inner.unit()]
    }

    fn mul(&self, a: &Vec<A::Basis>, b: &Vec<A::Basis>) -> Element<Vec<A::Basis>> {
        let mut out = Chain::zero();
        shuffle_words(self.inner, a, b, &Q::one(), &mut out);
        out.terms.into_iter().collect()
    }

    fn diff(&self, a: &Vec<A::Basis>) -> Element<Vec<A::Basis>> {
        let mut out = Chain::zero();
        d_word(self.inner, a, &Q::one(), &mut out);
        out.terms.into_iter().collect()
    }

    fn is_commutative(&self) -> bool {
        true
    }
}

/// The differential of `CH(CH(A, A), CH(A, A))` with the shuffle product inside.
pub fn hochschild_of_hochschild_d<A: GradedAlgebra>(
    alg: &A,
    c: &Chain<Vec<A::Basis>>,
) -> Result<Chain<Vec<A::Basis>>> {
    let outer = HochschildAlgebra::new(alg)?;
    Ok(hochschild_d(&outer, c))
}

/// A named element `Σ c_i e_i` of a `FinDGA`, parsed from basis names.
pub fn element_from_names(alg: &FinDGA, terms: &[(&str, Q)]) -> Result<Element<usize>> {
    terms
        .iter()
        .map(|(name, c)| {
            alg.index_of(name)
                .map(|i| (i, c.clone()))
                .ok_or_else(|| Error::Argument(format!("unknown basis element {name}")))
        })
        .collect()
}

/// The Maurer–Cartan form `Σ_i ρ(e_i) ⊗ e^i` in `M_n ⊗ Λ g*` for a representation
/// `ρ` of `g` on `Q^n`, expressed in the basis of `FinDGA::tensor(matrix_algebra(n), ce_algebra(g))`.
pub fn maurer_cartan_form(lie: &LieAlgebra, rho: &[QMatrix]) -> Result<Element<usize>> {
    let k = lie.dim();
    if rho.len() != k {
        return Err(Error::Shape("one matrix per basis vector of g is needed".into()));
    }
    let n = rho.first().map_or(0, |m| m.rows());
    let ce_dim = 1usize << k;
    let mut parts = Vec::new();
    for (i, m) in rho.iter().enumerate() {
        // e^i sits at offset 1 + i in the CE basis (degree-1 block after the unit).
        let ce = 1 + i;
        for r in 0..n {
            for c in 0..n {
                let v = &m[(r, c)];
                if v.is_zero() {
                    continue;
                }
                if (r, c) == (0, 0) {
                    parts.push(vec![(ce, v.clone())]);
                    for d in 1..n {
                        parts.push(vec![((d * n + d) * ce_dim + ce, -v.clone())]);
                    }
                } else {
                    parts.push(vec![((r * n + c) * ce_dim + ce, v.clone())]);
                }
            }
        }
    }
    Ok(combine(&parts))
}

/// Scales an element by a rational.
pub fn scale_element<B: Clone>(x: &[(B, Q)], s: &Q) -> Element<B> {
    x.iter().map(|(b, c)| (b.clone(), c * s)).collect()
}

/// The element `c e_i`.
pub fn basis_element(i: usize, c: i64) -> Element<usize> {
    vec![(i, q(c))]
}
