//! Lie algebras by structure constants and their modules.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{format_q, q, Q};

/// Finite-dimensional Lie algebra; `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    c: Vec<Q>,
}

/// A single failed identity found by [`LieAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieViolation {
    /// `c[i][j][k] + c[j][i][k] != 0` (reported for `i <= j`).
    Antisymmetry { i: usize, j: usize, k: usize, residual: Q },
    /// Component `l` of the Jacobiator of `(e_i, e_j, e_k)`.
    Jacobi { i: usize, j: usize, k: usize, l: usize, residual: Q },
}

impl fmt::Display for LieViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieViolation::Antisymmetry { i, j, k, residual } => {
                write!(f, "antisymmetry at ({i},{j},{k}): residual {}", format_q(residual))
            }
            LieViolation::Jacobi { i, j, k, l, residual } => {
                write!(f, "jacobi at ({i},{j},{k},{l}): residual {}", format_q(residual))
            }
        }
    }
}

fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{}", i + 1)).collect()
}

impl LieAlgebra {
    /// Builds an algebra from a flat `dim^3` array; only the shape is checked.
    pub fn new(dim: usize, basis_names: Vec<String>, c: Vec<Q>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::Shape(format!(
                "structure constants have {} entries, expected {}",
                c.len(),
                dim * dim * dim
            )));
        }
        if basis_names.len() != dim {
            return Err(Error::Shape(format!(
                "{} basis names for dimension {dim}",
                basis_names.len()
            )));
        }
        Ok(LieAlgebra { dim, basis_names, c })
    }

    /// Builds an algebra from nested `c[i][j][k]`.
    pub fn from_nested(basis_names: Vec<String>, c: &[Vec<Vec<Q>>]) -> Result<Self> {
        let n = c.len();
        let mut flat = Vec::with_capacity(n * n * n);
        for row in c {
            if row.len() != n {
                return Err(Error::Shape("structure constants are not dim^3".into()));
            }
            for col in row {
                if col.len() != n {
                    return Err(Error::Shape("structure constants are not dim^3".into()));
                }
                flat.extend(col.iter().cloned());
            }
        }
        Self::new(n, basis_names, flat)
    }

    /// Builds an algebra from the brackets `[e_i, e_j] = sum v_k e_k` for `i < j`;
    /// the remaining constants follow by antisymmetry.
    pub fn from_brackets(names: &[&str], brackets: &[(usize, usize, Vec<(usize, Q)>)]) -> Self {
        let n = names.len();
        let mut c = vec![Q::zero(); n * n * n];
        for (i, j, terms) in brackets {
            for (k, v) in terms {
                c[(i * n + j) * n + k] += v;
                c[(j * n + i) * n + k] -= v;
            }
        }
        LieAlgebra {
            dim: n,
            basis_names: names.iter().map(|s| s.to_string()).collect(),
            c,
        }
    }

    pub fn abelian(n: usize) -> Self {
        LieAlgebra {
            dim: n,
            basis_names: default_names("a", n),
            c: vec![Q::zero(); n * n * n],
        }
    }

    /// `sl_2` in the basis `h, e, f`.
    pub fn sl2() -> Self {
        Self::from_brackets(
            &["h", "e", "f"],
            &[
                (0, 1, vec![(1, q(2))]),
                (0, 2, vec![(2, q(-2))]),
                (1, 2, vec![(0, q(1))]),
            ],
        )
    }

    /// Three-dimensional Heisenberg algebra, `[x, y] = z`.
    pub fn heisenberg() -> Self {
        Self::from_brackets(&["x", "y", "z"], &[(0, 1, vec![(2, q(1))])])
    }

    /// Two-dimensional non-abelian algebra, `[a, b] = b`.
    pub fn aff2() -> Self {
        Self::from_brackets(&["a", "b"], &[(0, 1, vec![(1, q(1))])])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim {
            return Err(Error::Shape("basis name count".into()));
        }
        self.basis_names = names;
        Ok(self)
    }

    pub fn structure_constants(&self) -> &[Q] {
        &self.c
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Q> {
        let n = self.dim;
        self.c[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim;
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let s = &x[i] * &y[j];
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        out[k] += &s * c;
                    }
                }
            }
        }
        out
    }

    /// Adjoint matrix of `e_i`: column `j` holds `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> QMatrix {
        let n = self.dim;
        let mut m = QMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m[(k, j)] = self.c(i, j, k).clone();
            }
        }
        m
    }

    pub fn ad_vec(&self, x: &[Q]) -> QMatrix {
        let n = self.dim;
        let mut m = QMatrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.ad(i).scale(xi));
            }
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Every antisymmetry or Jacobi violation, with its residual. Empty iff
    /// the constants define a Lie algebra.
    pub fn validate(&self) -> Vec<LieViolation> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let r = self.c(i, j, k) + self.c(j, i, k);
                    if !r.is_zero() {
                        out.push(LieViolation::Antisymmetry { i, j, k, residual: r });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut r = Q::zero();
                        for m in 0..n {
                            r += self.c(i, j, m) * self.c(m, k, l);
                            r += self.c(j, k, m) * self.c(m, i, l);
                            r += self.c(k, i, m) * self.c(m, j, l);
                        }
                        if !r.is_zero() {
                            out.push(LieViolation::Jacobi { i, j, k, l, residual: r });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::Validation(v.to_string())),
        }
    }

    /// Structure constants in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &QMatrix) -> Result<LieAlgebra> {
        let n = self.dim;
        if p.shape() != (n, n) {
            return Err(Error::Shape("basis change must be square".into()));
        }
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::Basis("basis change is singular".into()))?;
        let cols = p.columns();
        let mut c = vec![Q::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let b = pinv.mul_vec(&self.bracket(&cols[i], &cols[j]));
                for (k, v) in b.into_iter().enumerate() {
                    c[(i * n + j) * n + k] = v;
                }
            }
        }
        LieAlgebra::new(n, self.basis_names.clone(), c)
    }

    /// `self ⊕ other`, basis of `self` first.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (a, b) = (self.dim, other.dim);
        let n = a + b;
        let mut c = vec![Q::zero(); n * n * n];
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    c[(i * n + j) * n + k] = self.c(i, j, k).clone();
                }
            }
        }
        for i in 0..b {
            for j in 0..b {
                for k in 0..b {
                    c[((a + i) * n + a + j) * n + a + k] = other.c(i, j, k).clone();
                }
            }
        }
        let mut names = self.basis_names.clone();
        names.extend(other.basis_names.iter().cloned());
        LieAlgebra { dim: n, basis_names: names, c }
    }

    /// Lists the basis pairs on which `f: self -> target` fails to preserve brackets.
    pub fn morphism_defects(&self, target: &LieAlgebra, f: &QMatrix) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let cols = f.columns();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let lhs = f.mul_vec(&self.bracket_basis(i, j));
                let rhs = target.bracket(&cols[i], &cols[j]);
                if lhs != rhs {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_morphism(&self, target: &LieAlgebra, f: &QMatrix) -> bool {
        f.shape() == (target.dim, self.dim) && self.morphism_defects(target, f).is_empty()
    }
}

/// Representation of a Lie algebra: one matrix `ρ(e_i)` per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieModule {
    dim: usize,
    action: Vec<QMatrix>,
}

impl LieModule {
    pub fn new(dim: usize, action: Vec<QMatrix>) -> Result<Self> {
        if action.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::Shape(format!("action matrices must be {dim}x{dim}")));
        }
        Ok(LieModule { dim, action })
    }

    pub fn trivial(lie: &LieAlgebra, dim: usize) -> Self {
        LieModule {
            dim,
            action: vec![QMatrix::zeros(dim, dim); lie.dim()],
        }
    }

    pub fn adjoint(lie: &LieAlgebra) -> Self {
        LieModule {
            dim: lie.dim(),
            action: (0..lie.dim()).map(|i| lie.ad(i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[QMatrix] {
        &self.action
    }

    pub fn act(&self, i: usize) -> &QMatrix {
        &self.action[i]
    }

    /// `ρ(x)` for an arbitrary algebra element.
    pub fn act_vec(&self, x: &[Q]) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.action[i].scale(xi));
            }
        }
        m
    }

    /// Basis pairs `(i, j)` where `[ρ(e_i), ρ(e_j)] != ρ([e_i, e_j])`.
    pub fn representation_defects(&self, lie: &LieAlgebra) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..lie.dim() {
            for j in (i + 1)..lie.dim() {
                let lhs = self.action[i].commutator(&self.action[j]);
                let rhs = self.act_vec(&lie.bracket_basis(i, j));
                if lhs != rhs {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn check(&self, lie: &LieAlgebra) -> Result<()> {
        if self.action.len() != lie.dim() {
            return Err(Error::Shape(format!(
                "{} action matrices for an algebra of dimension {}",
                self.action.len(),
                lie.dim()
            )));
        }
        match self.representation_defects(lie).first() {
            None => Ok(()),
            Some((i, j)) => Err(Error::Representation(format!(
                "[rho(e{i}), rho(e{j})] != rho([e{i}, e{j}])"
            ))),
        }
    }

    /// `f: self -> other` commutes with the actions.
    pub fn is_module_map(&self, other: &LieModule, f: &QMatrix) -> bool {
        f.shape() == (other.dim, self.dim)
            && self
                .action
                .iter()
                .zip(&other.action)
                .all(|(a, b)| f.mul(a) == b.mul(f))
    }

    /// Module over the algebra after `change_basis(p)`, with the module basis
    /// changed by the columns of `m`.
    pub fn change_basis(&self, p: &QMatrix, m: &QMatrix) -> Result<LieModule> {
        let minv = m
            .inverse()
            .ok_or_else(|| Error::Basis("module basis change is singular".into()))?;
        let action = p
            .columns()
            .iter()
            .map(|col| minv.mul(&self.act_vec(col)).mul(m))
            .collect();
        LieModule::new(self.dim, action)
    }

    pub fn direct_sum(&self, other: &LieModule) -> LieModule {
        let n = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = QMatrix::zeros(n, n);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m[(self.dim + i, self.dim + j)] = b[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        LieModule { dim: n, action }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_valid() {
        for l in [
            LieAlgebra::sl2(),
            LieAlgebra::heisenberg(),
            LieAlgebra::aff2(),
            LieAlgebra::abelian(3),
            LieAlgebra::sl2().direct_sum(&LieAlgebra::aff2()),
        ] {
            assert!(l.validate().is_empty(), "{l:?}");
            assert!(LieModule::adjoint(&l).check(&l).is_ok());
        }
    }

    #[test]
    fn basis_change_preserves_validity() {
        let l = LieAlgebra::sl2();
        let p = QMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[2, 0, 1]]);
        let l2 = l.change_basis(&p).unwrap();
        assert!(l2.validate().is_empty());
        // p is an isomorphism l2 -> l.
        assert!(l2.is_morphism(&l, &p));
    }
}
