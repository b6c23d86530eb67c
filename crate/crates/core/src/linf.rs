//! Two-term L∞-algebras `L_{-1} --l1--> L_0`.
//!
//! Operations: `l1: L_{-1} -> L_0`, the bracket `l2: L_0 x L_0 -> L_0`, the
//! action `l2: L_0 x L_{-1} -> L_{-1}` written `ρ(x)h`, and the alternating
//! `l3: L_0^3 -> L_{-1}`. For two terms the generalized Jacobi identities
//! reduce to the following list (with `Jac(x, y, z) = [[x, y], z] + cyclic`):
//!
//! 1. `l1(ρ(x)h) = [x, l1 h]`
//! 2. `ρ(l1 h)k + ρ(l1 k)h = 0`
//! 3. `Jac(x, y, z) = l1 l3(x, y, z)`
//! 4. `ρ([x, y])h - [ρ(x), ρ(y)]h = l3(x, y, l1 h)`
//! 5. `d_CE l3 = 0`, where the differential is built from `ρ` and the
//!    bracket exactly as for Lie algebra cochains (the coherence of the
//!    Jacobiator).
//!
//! The bracket and `l3` are also required to be antisymmetric.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::cochain::{apply_d, Cochain};
use crate::crossed::{CrossedModule, Triplet};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::matrix::{unit_vector, vec_add, vec_sub, QMatrix};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermLinf {
    d0: usize,
    dm1: usize,
    /// `d0 x dm1`.
    l1: QMatrix,
    /// `c[(i * d0 + j) * d0 + k]`, as for Lie algebras.
    bracket: Vec<Q>,
    /// One `dm1 x dm1` matrix per basis vector of `L_0`.
    action: Vec<QMatrix>,
    /// `l3[((i * d0 + j) * d0 + k) * dm1 + a]`.
    l3: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinfViolation {
    BracketAntisymmetry { i: usize, j: usize },
    L3Antisymmetry { i: usize, j: usize, k: usize },
    /// Identity 1.
    ChainMap { x: usize, h: usize },
    /// Identity 2.
    DifferentialSymmetry { h: usize, k: usize },
    /// Identity 3.
    Jacobi { x: usize, y: usize, z: usize },
    /// Identity 4.
    MixedJacobi { x: usize, y: usize, h: usize },
    /// Identity 5.
    Coherence { w: usize, x: usize, y: usize, z: usize },
}

impl fmt::Display for LinfViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinfViolation::BracketAntisymmetry { i, j } => {
                write!(f, "bracket not antisymmetric on ({i}, {j})")
            }
            LinfViolation::L3Antisymmetry { i, j, k } => {
                write!(f, "l3 not antisymmetric on ({i}, {j}, {k})")
            }
            LinfViolation::ChainMap { x, h } => write!(f, "n=2: l1(x{x} . h{h}) != [x{x}, l1 h{h}]"),
            LinfViolation::DifferentialSymmetry { h, k } => {
                write!(f, "n=2: rho(l1 h{h}) h{k} + rho(l1 h{k}) h{h} != 0")
            }
            LinfViolation::Jacobi { x, y, z } => {
                write!(f, "n=3: Jac(x{x}, x{y}, x{z}) != l1 l3")
            }
            LinfViolation::MixedJacobi { x, y, h } => {
                write!(f, "n=3: mixed Jacobi on (x{x}, x{y}, h{h}) != l3(x, y, l1 h)")
            }
            LinfViolation::Coherence { w, x, y, z } => {
                write!(f, "n=4: coherence fails on ({w}, {x}, {y}, {z})")
            }
        }
    }
}

/// Normalisation of the `l3(A, A, A)` term in the 3-curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum L3Normalization {
    /// The term `l3(A, A, A)` as written.
    #[default]
    Literal,
    /// `l3(A, A, A) / 3!`.
    Factorial,
}

impl TwoTermLinf {
    pub fn new(
        d0: usize,
        dm1: usize,
        l1: QMatrix,
        bracket: Vec<Q>,
        action: Vec<QMatrix>,
        l3: Vec<Q>,
    ) -> Result<Self> {
        if l1.shape() != (d0, dm1) {
            return Err(Error::Shape(format!("l1 must be {d0}x{dm1}")));
        }
        if bracket.len() != d0 * d0 * d0 {
            return Err(Error::Shape("bracket must have d0^3 entries".into()));
        }
        if action.len() != d0 || action.iter().any(|a| a.shape() != (dm1, dm1)) {
            return Err(Error::Shape(format!("action must be {d0} matrices {dm1}x{dm1}")));
        }
        if l3.len() != d0 * d0 * d0 * dm1 {
            return Err(Error::Shape("l3 must have d0^3 * dm1 entries".into()));
        }
        Ok(TwoTermLinf {
            d0,
            dm1,
            l1,
            bracket,
            action,
            l3,
        })
    }

    /// DGLA of a crossed module: `l1 = mu`, `l3 = 0`.
    pub fn from_crossed(x: &CrossedModule) -> Result<Self> {
        x.check()?;
        let (d0, dm1) = (x.g().dim(), x.h().dim());
        Self::new(
            d0,
            dm1,
            x.mu().clone(),
            x.g().structure_constants().to_vec(),
            x.action().to_vec(),
            vec![Q::zero(); d0 * d0 * d0 * dm1],
        )
    }

    /// Skeletal algebra `(ḡ, V, γ)` with `l1 = 0` and `l3 = γ`.
    pub fn from_triplet(t: &Triplet) -> Result<Self> {
        let (d0, dm1) = (t.gbar.dim(), t.v.dim());
        let mut l3 = vec![Q::zero(); d0 * d0 * d0 * dm1];
        for i in 0..d0 {
            for j in 0..d0 {
                for k in 0..d0 {
                    let v = t.gamma.value(&[i, j, k]);
                    for (a, val) in v.into_iter().enumerate() {
                        l3[((i * d0 + j) * d0 + k) * dm1 + a] = val;
                    }
                }
            }
        }
        Self::new(
            d0,
            dm1,
            QMatrix::zeros(d0, dm1),
            t.gbar.structure_constants().to_vec(),
            t.v.action().to_vec(),
            l3,
        )
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn dm1(&self) -> usize {
        self.dm1
    }

    pub fn l1(&self) -> &QMatrix {
        &self.l1
    }

    pub fn bracket_constants(&self) -> &[Q] {
        &self.bracket
    }

    pub fn action(&self) -> &[QMatrix] {
        &self.action
    }

    pub fn l3_constants(&self) -> &[Q] {
        &self.l3
    }

    pub fn with_l3(mut self, l3: Vec<Q>) -> Result<Self> {
        if l3.len() != self.l3.len() {
            return Err(Error::Shape("l3 size".into()));
        }
        self.l3 = l3;
        Ok(self)
    }

    pub fn is_skeletal(&self) -> bool {
        self.l1.is_zero()
    }

    /// `L_0` with the (possibly non-Jacobi) bracket, for cochain arithmetic.
    pub fn l0_algebra(&self) -> LieAlgebra {
        let names = (0..self.d0).map(|i| format!("x{}", i + 1)).collect();
        LieAlgebra::new(self.d0, names, self.bracket.clone()).expect("shape checked")
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.d0;
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
                    let c = &self.bracket[(i * n + j) * n + k];
                    if !c.is_zero() {
                        out[k] += &s * c;
                    }
                }
            }
        }
        out
    }

    pub fn rho(&self, x: &[Q]) -> QMatrix {
        let mut m = QMatrix::zeros(self.dm1, self.dm1);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.action[i].scale(xi));
            }
        }
        m
    }

    pub fn act(&self, x: &[Q], h: &[Q]) -> Vec<Q> {
        self.rho(x).mul_vec(h)
    }

    pub fn l3_basis(&self, i: usize, j: usize, k: usize) -> &[Q] {
        let base = ((i * self.d0 + j) * self.d0 + k) * self.dm1;
        &self.l3[base..base + self.dm1]
    }

    /// Trilinear extension of `l3`.
    pub fn l3(&self, x: &[Q], y: &[Q], z: &[Q]) -> Vec<Q> {
        let n = self.d0;
        let mut out = vec![Q::zero(); self.dm1];
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
                    if z[k].is_zero() {
                        continue;
                    }
                    let w = &s * &z[k];
                    for (o, v) in out.iter_mut().zip(self.l3_basis(i, j, k)) {
                        if !v.is_zero() {
                            *o += &w * v;
                        }
                    }
                }
            }
        }
        out
    }

    /// `l3` as an alternating cochain; only meaningful when antisymmetric.
    pub fn l3_cochain(&self) -> Cochain {
        Cochain::from_fn(3, self.d0, self.dm1, |ijk| {
            self.l3_basis(ijk[0], ijk[1], ijk[2]).to_vec()
        })
    }

    /// Every violated identity, evaluated on all basis tuples.
    pub fn validate(&self) -> Vec<LinfViolation> {
        let (n, m) = (self.d0, self.dm1);
        let e0 = |i: usize| unit_vector(n, i);
        let em = |i: usize| unit_vector(m, i);
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let a = self.bracket(&e0(i), &e0(j));
                let b = self.bracket(&e0(j), &e0(i));
                if vec_add(&a, &b).iter().any(|v| !v.is_zero()) {
                    out.push(LinfViolation::BracketAntisymmetry { i, j });
                }
            }
        }
        let mut l3_alternating = true;
        let l3c = self.l3_cochain();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.l3_basis(i, j, k);
                    let expected = l3c.value(&[i, j, k]);
                    if v != expected.as_slice() {
                        l3_alternating = false;
                        let mut t = [i, j, k];
                        t.sort_unstable();
                        let v = LinfViolation::L3Antisymmetry { i: t[0], j: t[1], k: t[2] };
                        if !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for h in 0..m {
                let lhs = self.l1.mul_vec(&self.act(&e0(x), &em(h)));
                let rhs = self.bracket(&e0(x), &self.l1.column(h));
                if lhs != rhs {
                    out.push(LinfViolation::ChainMap { x, h });
                }
            }
        }
        for h in 0..m {
            for k in h..m {
                let a = self.act(&self.l1.column(h), &em(k));
                let b = self.act(&self.l1.column(k), &em(h));
                if vec_add(&a, &b).iter().any(|v| !v.is_zero()) {
                    out.push(LinfViolation::DifferentialSymmetry { h, k });
                }
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                for z in (y + 1)..n {
                    let (ex, ey, ez) = (e0(x), e0(y), e0(z));
                    let jac = vec_add(
                        &vec_add(
                            &self.bracket(&self.bracket(&ex, &ey), &ez),
                            &self.bracket(&self.bracket(&ey, &ez), &ex),
                        ),
                        &self.bracket(&self.bracket(&ez, &ex), &ey),
                    );
                    if jac != self.l1.mul_vec(&self.l3(&ex, &ey, &ez)) {
                        out.push(LinfViolation::Jacobi { x, y, z });
                    }
                }
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                let (ex, ey) = (e0(x), e0(y));
                let lhs_m = self
                    .rho(&self.bracket(&ex, &ey))
                    .sub(&self.rho(&ex).commutator(&self.rho(&ey)));
                for h in 0..m {
                    let lhs = lhs_m.column(h);
                    let rhs = self.l3(&ex, &ey, &self.l1.column(h));
                    if vec_sub(&lhs, &rhs).iter().any(|v| !v.is_zero()) {
                        out.push(LinfViolation::MixedJacobi { x, y, h });
                    }
                }
            }
        }
        if l3_alternating {
            let d = apply_d(&self.l0_algebra(), &self.action, &l3c);
            for s in crate::cochain::subsets(n, 4) {
                if d.value(&s).iter().any(|v| !v.is_zero()) {
                    out.push(LinfViolation::Coherence {
                        w: s[0],
                        x: s[1],
                        y: s[2],
                        z: s[3],
                    });
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
}
