//! Chevalley–Eilenberg cochains, cohomology and connecting maps.
//!
//! A `p`-cochain of an `n`-dimensional algebra with values in a `dim_v`
//! dimensional module is stored on the lexicographically ordered `p`-subsets
//! of `{0, .., n-1}`: coordinate `subset_index * dim_v + v`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, LieModule};
use crate::matrix::QMatrix;
use crate::rational::Q;

/// Strictly increasing `p`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::with_capacity(p), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Lexicographic rank of a strictly increasing subset.
pub fn subset_rank(n: usize, s: &[usize]) -> usize {
    let p = s.len();
    let mut rank = 0;
    let mut prev = 0;
    for (pos, &x) in s.iter().enumerate() {
        for skipped in prev..x {
            rank += binomial(n - skipped - 1, p - pos - 1);
        }
        prev = x + 1;
    }
    rank
}

/// Sorts `idx`, returning the sign of the sorting permutation, or `None`
/// when an index repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

/// Alternating multilinear map `g^p -> V` in the lexicographic basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    dim_g: usize,
    dim_v: usize,
    coeffs: Vec<Q>,
}

impl Cochain {
    pub fn zero(degree: usize, dim_g: usize, dim_v: usize) -> Self {
        Cochain {
            degree,
            dim_g,
            dim_v,
            coeffs: vec![Q::zero(); binomial(dim_g, degree) * dim_v],
        }
    }

    pub fn from_coeffs(degree: usize, dim_g: usize, dim_v: usize, coeffs: Vec<Q>) -> Result<Self> {
        let want = binomial(dim_g, degree) * dim_v;
        if coeffs.len() != want {
            return Err(Error::Shape(format!(
                "{degree}-cochain needs {want} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Cochain {
            degree,
            dim_g,
            dim_v,
            coeffs,
        })
    }

    /// Builds a cochain from its values on increasing basis tuples.
    pub fn from_fn(
        degree: usize,
        dim_g: usize,
        dim_v: usize,
        mut f: impl FnMut(&[usize]) -> Vec<Q>,
    ) -> Self {
        let mut coeffs = Vec::with_capacity(binomial(dim_g, degree) * dim_v);
        for s in subsets(dim_g, degree) {
            let v = f(&s);
            assert_eq!(v.len(), dim_v, "cochain value has the wrong dimension");
            coeffs.extend(v);
        }
        Cochain {
            degree,
            dim_g,
            dim_v,
            coeffs,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Value on basis vectors in any order (alternating extension).
    pub fn value(&self, idx: &[usize]) -> Vec<Q> {
        assert_eq!(idx.len(), self.degree);
        match sort_with_sign(idx) {
            None => vec![Q::zero(); self.dim_v],
            Some((s, odd)) => {
                let r = subset_rank(self.dim_g, &s) * self.dim_v;
                let v = &self.coeffs[r..r + self.dim_v];
                if odd {
                    v.iter().map(|x| -x).collect()
                } else {
                    v.to_vec()
                }
            }
        }
    }

    /// Multilinear evaluation on arbitrary algebra elements.
    pub fn eval(&self, args: &[Vec<Q>]) -> Vec<Q> {
        assert_eq!(args.len(), self.degree);
        let mut out = vec![Q::zero(); self.dim_v];
        let mut idx = vec![0usize; self.degree];
        self.eval_rec(args, 0, Q::from_integer(1.into()), &mut idx, &mut out);
        out
    }

    fn eval_rec(&self, args: &[Vec<Q>], pos: usize, w: Q, idx: &mut Vec<usize>, out: &mut [Q]) {
        if pos == args.len() {
            for (o, v) in out.iter_mut().zip(self.value(idx)) {
                if !v.is_zero() {
                    *o += &w * v;
                }
            }
            return;
        }
        for (i, a) in args[pos].iter().enumerate() {
            if a.is_zero() || idx[..pos].contains(&i) {
                continue;
            }
            idx[pos] = i;
            self.eval_rec(args, pos + 1, &w * a, idx, out);
        }
    }

    /// Applies a linear map `V -> W` to every value.
    pub fn map_values(&self, m: &QMatrix) -> Cochain {
        assert_eq!(m.cols(), self.dim_v);
        let mut coeffs = Vec::with_capacity(self.coeffs.len() / self.dim_v.max(1) * m.rows());
        for chunk in self.coeffs.chunks(self.dim_v.max(1)) {
            if self.dim_v == 0 {
                break;
            }
            coeffs.extend(m.mul_vec(chunk));
        }
        if self.dim_v == 0 {
            coeffs = vec![Q::zero(); binomial(self.dim_g, self.degree) * m.rows()];
        }
        Cochain {
            degree: self.degree,
            dim_g: self.dim_g,
            dim_v: m.rows(),
            coeffs,
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.assert_same_space(other);
        Cochain {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.assert_same_space(other);
        Cochain {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &Q) -> Cochain {
        Cochain {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
            ..self.clone()
        }
    }

    fn assert_same_space(&self, other: &Cochain) {
        assert_eq!(
            (self.degree, self.dim_g, self.dim_v),
            (other.degree, other.dim_g, other.dim_v),
            "cochains live in different spaces"
        );
    }
}

/// Matrix of the formal differential `C^p -> C^{p+1}` built from arbitrary
/// action matrices (which need not form a representation).
pub fn ce_differential(lie: &LieAlgebra, action: &[QMatrix], dim_v: usize, p: usize) -> QMatrix {
    let n = lie.dim();
    let src = subsets(n, p);
    let dst = subsets(n, p + 1);
    let mut d = QMatrix::zeros(dst.len() * dim_v, src.len() * dim_v);
    let src_index: BTreeMap<Vec<usize>, usize> =
        src.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    // Adds `sign * c` times the unit cochain on `tuple` (value slot `v`) into
    // row block `row`; `tuple` may be unsorted.
    let put = |d: &mut QMatrix, row: usize, tuple: &[usize], coeff: &QMatrix, negate: bool| {
        if let Some((s, odd)) = sort_with_sign(tuple) {
            let col = src_index[&s];
            for a in 0..dim_v {
                for b in 0..dim_v {
                    let c = &coeff[(a, b)];
                    if c.is_zero() {
                        continue;
                    }
                    let entry = &mut d[(row * dim_v + a, col * dim_v + b)];
                    if odd ^ negate {
                        *entry -= c;
                    } else {
                        *entry += c;
                    }
                }
            }
        }
    };
    let ident = QMatrix::identity(dim_v);
    for (row, x) in dst.iter().enumerate() {
        for i in 0..=p {
            let rest: Vec<usize> = x.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &v)| v).collect();
            put(&mut d, row, &rest, &action[x[i]], i % 2 == 1);
        }
        for i in 0..=p {
            for j in (i + 1)..=p {
                let rest: Vec<usize> = x
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != i && t != j)
                    .map(|(_, &v)| v)
                    .collect();
                for k in 0..n {
                    let c = lie.c(x[i], x[j], k);
                    if c.is_zero() {
                        continue;
                    }
                    let mut tuple = Vec::with_capacity(p);
                    tuple.push(k);
                    tuple.extend_from_slice(&rest);
                    put(&mut d, row, &tuple, &ident.scale(c), (i + j) % 2 == 1);
                }
            }
        }
    }
    d
}

/// Applies the formal differential to a cochain.
pub fn apply_d(lie: &LieAlgebra, action: &[QMatrix], w: &Cochain) -> Cochain {
    let d = ce_differential(lie, action, w.dim_v(), w.degree());
    Cochain {
        degree: w.degree() + 1,
        dim_g: w.dim_g(),
        dim_v: w.dim_v(),
        coeffs: d.mul_vec(w.coeffs()),
    }
}

/// Chevalley–Eilenberg complex of a validated module.
#[derive(Clone, Debug)]
pub struct CEComplex {
    lie: LieAlgebra,
    module: LieModule,
    differentials: Vec<QMatrix>,
}

impl CEComplex {
    pub fn new(lie: &LieAlgebra, module: &LieModule) -> Result<Self> {
        module.check(lie)?;
        let differentials = (0..=lie.dim() + 1)
            .map(|p| ce_differential(lie, module.action(), module.dim(), p))
            .collect();
        Ok(CEComplex {
            lie: lie.clone(),
            module: module.clone(),
            differentials,
        })
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn module(&self) -> &LieModule {
        &self.module
    }

    /// `d: C^p -> C^{p+1}`.
    pub fn d(&self, p: usize) -> &QMatrix {
        &self.differentials[p]
    }

    pub fn differentials(&self) -> &[QMatrix] {
        &self.differentials
    }

    /// Dimension of `C^p`.
    pub fn cochain_dim(&self, p: usize) -> usize {
        binomial(self.lie.dim(), p) * self.module.dim()
    }

    /// Degrees `p` where `d_{p+1} d_p != 0`.
    pub fn d_squared_defects(&self) -> Vec<usize> {
        (0..self.lie.dim())
            .filter(|&p| !self.differentials[p + 1].mul(&self.differentials[p]).is_zero())
            .collect()
    }

    pub fn apply(&self, w: &Cochain) -> Cochain {
        if w.degree > self.lie.dim() {
            return Cochain::zero(w.degree + 1, w.dim_g, w.dim_v);
        }
        Cochain {
            degree: w.degree + 1,
            dim_g: w.dim_g,
            dim_v: w.dim_v,
            coeffs: self.d(w.degree).mul_vec(&w.coeffs),
        }
    }

    pub fn is_cocycle(&self, w: &Cochain) -> bool {
        self.apply(w).is_zero()
    }

    /// `w` lies in the image of `d_{p-1}` (rank test).
    pub fn is_coboundary(&self, w: &Cochain) -> bool {
        if w.degree == 0 || w.degree > self.lie.dim() + 1 {
            return w.is_zero();
        }
        self.d(w.degree - 1).contains_column(&w.coeffs)
    }

    pub fn same_class(&self, a: &Cochain, b: &Cochain) -> bool {
        self.is_coboundary(&a.sub(b))
    }

    pub fn cohomology(&self, p: usize) -> Cohomology {
        let n = self.lie.dim();
        let dv = self.module.dim();
        let dim_p = self.cochain_dim(p);
        let kernel = if p <= n {
            self.d(p).kernel()
        } else {
            QMatrix::zeros(0, 0)
        };
        let image = if p == 0 || p > n {
            QMatrix::zeros(dim_p, 0)
        } else {
            self.d(p - 1).image()
        };
        // Kernel vectors that are pivots after the image span the quotient.
        let stacked = image.hstack(&kernel);
        let reps: Vec<usize> = stacked
            .echelon()
            .pivots
            .into_iter()
            .filter(|&c| c >= image.cols())
            .map(|c| c - image.cols())
            .collect();
        let basis = reps
            .iter()
            .map(|&j| Cochain {
                degree: p,
                dim_g: n,
                dim_v: dv,
                coeffs: kernel.column(j),
            })
            .collect::<Vec<_>>();
        Cohomology {
            degree: p,
            betti: basis.len(),
            basis,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: usize,
    pub basis: Vec<Cochain>,
    pub betti: usize,
}

/// `H^p(L, V)`; the basis vectors are cocycles whose classes form a basis.
pub fn ce_cohomology(lie: &LieAlgebra, module: &LieModule, p: usize) -> Result<Cohomology> {
    Ok(CEComplex::new(lie, module)?.cohomology(p))
}

/// `0 -> V --inc--> I --proj--> Q -> 0` of modules over one algebra.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub algebra: LieAlgebra,
    pub sub: LieModule,
    pub mid: LieModule,
    pub quot: LieModule,
    /// `dim I x dim V`.
    pub inc: QMatrix,
    /// `dim Q x dim I`.
    pub proj: QMatrix,
}

impl ShortExactSequence {
    /// The split sequence `V -> V ⊕ Q -> Q`.
    pub fn split(algebra: &LieAlgebra, sub: &LieModule, quot: &LieModule) -> Self {
        let (v, qd) = (sub.dim(), quot.dim());
        let mut inc = QMatrix::zeros(v + qd, v);
        let mut proj = QMatrix::zeros(qd, v + qd);
        for i in 0..v {
            inc[(i, i)] = Q::from_integer(1.into());
        }
        for i in 0..qd {
            proj[(i, v + i)] = Q::from_integer(1.into());
        }
        ShortExactSequence {
            algebra: algebra.clone(),
            sub: sub.clone(),
            mid: sub.direct_sum(quot),
            quot: quot.clone(),
            inc,
            proj,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let l = &self.algebra;
        self.sub.check(l)?;
        self.mid.check(l)?;
        self.quot.check(l)?;
        let (v, i, qd) = (self.sub.dim(), self.mid.dim(), self.quot.dim());
        if self.inc.shape() != (i, v) || self.proj.shape() != (qd, i) {
            return Err(Error::Shape("sequence maps have the wrong shape".into()));
        }
        if !self.sub.is_module_map(&self.mid, &self.inc) {
            return Err(Error::Exactness("inclusion is not a module map".into()));
        }
        if !self.mid.is_module_map(&self.quot, &self.proj) {
            return Err(Error::Exactness("projection is not a module map".into()));
        }
        if !self.proj.mul(&self.inc).is_zero() {
            return Err(Error::Exactness("proj . inc != 0".into()));
        }
        if self.inc.rank() != v {
            return Err(Error::Exactness("inclusion is not injective".into()));
        }
        if self.proj.rank() != qd {
            return Err(Error::Exactness("projection is not surjective".into()));
        }
        if i != v + qd {
            return Err(Error::Exactness(format!(
                "image of inclusion (dim {v}) differs from kernel of projection (dim {})",
                i - qd
            )));
        }
        Ok(())
    }
}

/// Connecting map `H^2(L, Q) -> H^3(L, V)` on the cochain level: lift `alpha`
/// through a section of `proj`, apply `d`, and read the result in `V`.
///
/// With `section = None` the pivot section of `proj` is used.
pub fn connecting_map(
    ses: &ShortExactSequence,
    alpha: &Cochain,
    section: Option<&QMatrix>,
) -> Result<Cochain> {
    ses.validate()?;
    let l = &ses.algebra;
    if alpha.degree() != 2 || alpha.dim_g() != l.dim() || alpha.dim_v() != ses.quot.dim() {
        return Err(Error::Shape("alpha must be a Q-valued 2-cochain".into()));
    }
    let dq = apply_d(l, ses.quot.action(), alpha);
    if !dq.is_zero() {
        return Err(Error::NotCocycle("d alpha != 0".into()));
    }
    let s = match section {
        Some(s) => {
            if s.shape() != (ses.mid.dim(), ses.quot.dim())
                || ses.proj.mul(s) != QMatrix::identity(ses.quot.dim())
            {
                return Err(Error::Section("proj . s != id".into()));
            }
            s.clone()
        }
        None => ses.proj.right_inverse()?,
    };
    let lifted = alpha.map_values(&s);
    let d_lift = apply_d(l, ses.mid.action(), &lifted);
    let back = ses.inc.left_inverse()?;
    let gamma = d_lift.map_values(&back);
    if gamma.map_values(&ses.inc) != d_lift {
        return Err(Error::Consistency(
            "d of the lift does not take values in V".into(),
        ));
    }
    Ok(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn subset_ranks_match_enumeration() {
        for n in 0..6 {
            for p in 0..=n {
                for (r, s) in subsets(n, p).iter().enumerate() {
                    assert_eq!(subset_rank(n, s), r);
                }
            }
        }
    }

    #[test]
    fn sl2_trivial_cohomology() {
        let l = LieAlgebra::sl2();
        let v = LieModule::trivial(&l, 1);
        let cx = CEComplex::new(&l, &v).unwrap();
        assert!(cx.d_squared_defects().is_empty());
        assert_eq!(cx.cohomology(0).betti, 1);
        assert_eq!(cx.cohomology(1).betti, 0);
        assert_eq!(cx.cohomology(2).betti, 0);
        assert_eq!(cx.cohomology(3).betti, 1);
    }

    #[test]
    fn one_cochain_differential_is_minus_bracket_dual() {
        // (d w)(x, y) = -w([x, y]) for trivial coefficients.
        let l = LieAlgebra::aff2();
        let v = LieModule::trivial(&l, 1);
        let w = Cochain::from_coeffs(1, 2, 1, vec![q(0), q(1)]).unwrap();
        let dw = CEComplex::new(&l, &v).unwrap().apply(&w);
        assert_eq!(dw.value(&[0, 1]), vec![q(-1)]);
    }
}
