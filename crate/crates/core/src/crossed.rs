//! Crossed modules of Lie algebras and strict Lie 2-algebras.
//!
//! Conventions:
//! - `mu` is a `dim g x dim h` matrix and `action[x]` is the `dim h x dim h`
//!   matrix of the basis vector `x` of `g` acting on `h`.
//! - In `h ⋊ g` the basis of `h` comes first.
//! - The cokernel `ḡ = g / im mu` is coordinatised by the standard basis
//!   vectors of `g` that complete the pivot columns of `mu`; those vectors
//!   also give the canonical section.
//! - `V = ker mu` uses the canonical kernel basis of [`QMatrix::kernel`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::cochain::{apply_d, CEComplex, Cochain, ShortExactSequence};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, LieModule, LieViolation};
use crate::matrix::{vec_sub, QMatrix};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    h: LieAlgebra,
    g: LieAlgebra,
    mu: QMatrix,
    action: Vec<QMatrix>,
}

/// Failed axiom reported by [`CrossedModule::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossedViolation {
    H(LieViolation),
    G(LieViolation),
    /// `x` does not act on `[h_i, h_j]` by a derivation.
    Derivation { x: usize, i: usize, j: usize },
    /// Axiom (a): `mu(x . h_i) != [x, mu(h_i)]`.
    Equivariance { x: usize, i: usize },
    /// Axiom (b): `mu(h_i) . h_j != [h_i, h_j]`.
    Peiffer { i: usize, j: usize },
    /// The action is not a Lie algebra morphism `g -> der(h)`.
    Action { x: usize, y: usize },
}

impl fmt::Display for CrossedViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossedViolation::H(v) => write!(f, "h is not a Lie algebra: {v}"),
            CrossedViolation::G(v) => write!(f, "g is not a Lie algebra: {v}"),
            CrossedViolation::Derivation { x, i, j } => {
                write!(f, "derivation: g{x} on [h{i}, h{j}]")
            }
            CrossedViolation::Equivariance { x, i } => {
                write!(f, "axiom (a) equivariance: mu(g{x} . h{i}) != [g{x}, mu(h{i})]")
            }
            CrossedViolation::Peiffer { i, j } => {
                write!(f, "axiom (b) Peiffer: mu(h{i}) . h{j} != [h{i}, h{j}]")
            }
            CrossedViolation::Action { x, y } => {
                write!(f, "action: rho([g{x}, g{y}]) != [rho(g{x}), rho(g{y})]")
            }
        }
    }
}

impl CrossedViolation {
    /// Short axiom label used in reports.
    pub fn axiom(&self) -> &'static str {
        match self {
            CrossedViolation::H(_) | CrossedViolation::G(_) => "lie",
            CrossedViolation::Derivation { .. } => "derivation",
            CrossedViolation::Equivariance { .. } => "a",
            CrossedViolation::Peiffer { .. } => "b",
            CrossedViolation::Action { .. } => "action",
        }
    }
}

impl CrossedModule {
    pub fn new(h: LieAlgebra, g: LieAlgebra, mu: QMatrix, action: Vec<QMatrix>) -> Result<Self> {
        let (dh, dg) = (h.dim(), g.dim());
        if mu.shape() != (dg, dh) {
            return Err(Error::Shape(format!("mu must be {dg}x{dh}")));
        }
        if action.len() != dg || action.iter().any(|a| a.shape() != (dh, dh)) {
            return Err(Error::Shape(format!(
                "action must be {dg} matrices of shape {dh}x{dh}"
            )));
        }
        Ok(CrossedModule { h, g, mu, action })
    }

    /// `id: g -> g` with the adjoint action.
    pub fn identity(g: &LieAlgebra) -> Self {
        let n = g.dim();
        CrossedModule {
            h: g.clone(),
            g: g.clone(),
            mu: QMatrix::identity(n),
            action: (0..n).map(|i| g.ad(i)).collect(),
        }
    }

    /// `mu = 0` into `g` with `h` the abelian algebra underlying `module`.
    pub fn from_module(g: &LieAlgebra, module: &LieModule) -> Self {
        CrossedModule {
            h: LieAlgebra::abelian(module.dim()),
            g: g.clone(),
            mu: QMatrix::zeros(g.dim(), module.dim()),
            action: module.action().to_vec(),
        }
    }

    pub fn h(&self) -> &LieAlgebra {
        &self.h
    }

    pub fn g(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn mu(&self) -> &QMatrix {
        &self.mu
    }

    pub fn action(&self) -> &[QMatrix] {
        &self.action
    }

    /// Matrix of an arbitrary element of `g` acting on `h`.
    pub fn act_vec(&self, x: &[Q]) -> QMatrix {
        let dh = self.h.dim();
        let mut m = QMatrix::zeros(dh, dh);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.action[i].scale(xi));
            }
        }
        m
    }

    pub fn validate(&self) -> Vec<CrossedViolation> {
        let mut out: Vec<CrossedViolation> =
            self.h.validate().into_iter().map(CrossedViolation::H).collect();
        out.extend(self.g.validate().into_iter().map(CrossedViolation::G));
        let (dh, dg) = (self.h.dim(), self.g.dim());
        let hcols = QMatrix::identity(dh).columns();
        for x in 0..dg {
            let a = &self.action[x];
            for i in 0..dh {
                for j in (i + 1)..dh {
                    let lhs = a.mul_vec(&self.h.bracket_basis(i, j));
                    let r1 = self.h.bracket(&a.column(i), &hcols[j]);
                    let r2 = self.h.bracket(&hcols[i], &a.column(j));
                    if lhs != crate::matrix::vec_add(&r1, &r2) {
                        out.push(CrossedViolation::Derivation { x, i, j });
                    }
                }
            }
        }
        for x in 0..dg {
            let ex = crate::matrix::unit_vector(dg, x);
            for i in 0..dh {
                let lhs = self.mu.mul_vec(&self.action[x].column(i));
                let rhs = self.g.bracket(&ex, &self.mu.column(i));
                if lhs != rhs {
                    out.push(CrossedViolation::Equivariance { x, i });
                }
            }
        }
        for i in 0..dh {
            let m = self.act_vec(&self.mu.column(i));
            for j in 0..dh {
                if m.column(j) != self.h.bracket_basis(i, j) {
                    out.push(CrossedViolation::Peiffer { i, j });
                }
            }
        }
        for x in 0..dg {
            for y in (x + 1)..dg {
                let lhs = self.action[x].commutator(&self.action[y]);
                if lhs != self.act_vec(&self.g.bracket_basis(x, y)) {
                    out.push(CrossedViolation::Action { x, y });
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

    /// Transports the structure along basis changes: the new basis of `h`
    /// is given by the columns of `ph`, that of `g` by the columns of `pg`.
    pub fn change_basis(&self, ph: &QMatrix, pg: &QMatrix) -> Result<CrossedModule> {
        let h = self.h.change_basis(ph)?;
        let g = self.g.change_basis(pg)?;
        let pg_inv = pg
            .inverse()
            .ok_or_else(|| Error::Basis("singular basis change".into()))?;
        let ph_inv = ph
            .inverse()
            .ok_or_else(|| Error::Basis("singular basis change".into()))?;
        let mu = pg_inv.mul(&self.mu).mul(ph);
        let action = pg
            .columns()
            .iter()
            .map(|col| ph_inv.mul(&self.act_vec(col)).mul(ph))
            .collect();
        CrossedModule::new(h, g, mu, action)
    }

    /// Componentwise direct sum.
    pub fn direct_sum(&self, other: &CrossedModule) -> CrossedModule {
        let h = self.h.direct_sum(&other.h);
        let g = self.g.direct_sum(&other.g);
        let (dh1, dg1) = (self.h.dim(), self.g.dim());
        let (dh, dg) = (h.dim(), g.dim());
        let mut mu = QMatrix::zeros(dg, dh);
        for i in 0..dg1 {
            for j in 0..dh1 {
                mu[(i, j)] = self.mu[(i, j)].clone();
            }
        }
        for i in 0..other.g.dim() {
            for j in 0..other.h.dim() {
                mu[(dg1 + i, dh1 + j)] = other.mu[(i, j)].clone();
            }
        }
        let mut action = Vec::with_capacity(dg);
        for a in &self.action {
            let mut m = QMatrix::zeros(dh, dh);
            for i in 0..dh1 {
                for j in 0..dh1 {
                    m[(i, j)] = a[(i, j)].clone();
                }
            }
            action.push(m);
        }
        for a in &other.action {
            let mut m = QMatrix::zeros(dh, dh);
            for i in 0..other.h.dim() {
                for j in 0..other.h.dim() {
                    m[(dh1 + i, dh1 + j)] = a[(i, j)].clone();
                }
            }
            action.push(m);
        }
        CrossedModule { h, g, mu, action }
    }

    /// Canonical basis of `V = ker mu` (columns).
    pub fn kernel_basis(&self) -> QMatrix {
        self.mu.kernel()
    }

    pub fn cokernel(&self) -> Cokernel {
        Cokernel::new(&self.g, &self.mu)
    }
}

/// Category object in Lie algebras: arrows `g_minus1`, objects `g0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictLie2 {
    pub g_minus1: LieAlgebra,
    pub g0: LieAlgebra,
    /// Source, `dim g0 x dim g_minus1`.
    pub s: QMatrix,
    /// Target, `dim g0 x dim g_minus1`.
    pub t: QMatrix,
    /// Identity arrows, `dim g_minus1 x dim g0`.
    pub i: QMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrictViolation {
    Arrows(LieViolation),
    Objects(LieViolation),
    Shape(String),
    NotMorphism(&'static str),
    /// `s . i != id` or `t . i != id`.
    Unit(&'static str),
    /// `[ker s, ker t] != 0` on the given canonical kernel basis vectors.
    KernelsCommute { a: usize, b: usize },
}

impl fmt::Display for StrictViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrictViolation::Arrows(v) => write!(f, "arrow algebra: {v}"),
            StrictViolation::Objects(v) => write!(f, "object algebra: {v}"),
            StrictViolation::Shape(s) => write!(f, "shape: {s}"),
            StrictViolation::NotMorphism(m) => write!(f, "{m} is not a Lie morphism"),
            StrictViolation::Unit(m) => write!(f, "{m} . i != id"),
            StrictViolation::KernelsCommute { a, b } => {
                write!(f, "[ker s, ker t] != 0 at kernel vectors ({a}, {b})")
            }
        }
    }
}

impl StrictLie2 {
    pub fn validate(&self) -> Vec<StrictViolation> {
        let (n1, n0) = (self.g_minus1.dim(), self.g0.dim());
        let mut out: Vec<StrictViolation> = self
            .g_minus1
            .validate()
            .into_iter()
            .map(StrictViolation::Arrows)
            .collect();
        out.extend(self.g0.validate().into_iter().map(StrictViolation::Objects));
        if self.s.shape() != (n0, n1) || self.t.shape() != (n0, n1) || self.i.shape() != (n1, n0) {
            out.push(StrictViolation::Shape("s, t, i".into()));
            return out;
        }
        for (m, name) in [(&self.s, "s"), (&self.t, "t")] {
            if !self.g_minus1.is_morphism(&self.g0, m) {
                out.push(StrictViolation::NotMorphism(name));
            }
        }
        if !self.g0.is_morphism(&self.g_minus1, &self.i) {
            out.push(StrictViolation::NotMorphism("i"));
        }
        let id = QMatrix::identity(n0);
        if self.s.mul(&self.i) != id {
            out.push(StrictViolation::Unit("s"));
        }
        if self.t.mul(&self.i) != id {
            out.push(StrictViolation::Unit("t"));
        }
        let ks = self.s.kernel().columns();
        let kt = self.t.kernel().columns();
        for (a, x) in ks.iter().enumerate() {
            for (b, y) in kt.iter().enumerate() {
                if !self.g_minus1.bracket(x, y).iter().all(Zero::is_zero) {
                    out.push(StrictViolation::KernelsCommute { a, b });
                }
            }
        }
        out
    }

    /// Same structure with the arrow algebra expressed in the basis given by
    /// the columns of `p`.
    pub fn change_arrow_basis(&self, p: &QMatrix) -> Result<StrictLie2> {
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::Basis("singular basis change".into()))?;
        Ok(StrictLie2 {
            g_minus1: self.g_minus1.change_basis(p)?,
            g0: self.g0.clone(),
            s: self.s.mul(p),
            t: self.t.mul(p),
            i: pinv.mul(&self.i),
        })
    }
}

/// Semidirect product `h ⋊ g` with source, target and identities. The bracket
/// of `h ⋊ g` is built from `mu` and the action only.
pub fn to_strict_lie2(x: &CrossedModule) -> Result<StrictLie2> {
    x.check()?;
    let (dh, dg) = (x.h.dim(), x.g.dim());
    let n = dh + dg;
    let mut c = vec![Q::zero(); n * n * n];
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    for a in 0..dh {
        let m = x.act_vec(&x.mu.column(a));
        for b in 0..dh {
            for k in 0..dh {
                c[idx(a, b, k)] = m[(k, b)].clone();
            }
        }
    }
    for g in 0..dg {
        for b in 0..dh {
            for k in 0..dh {
                let v = x.action[g][(k, b)].clone();
                c[idx(dh + g, b, k)] = v.clone();
                c[idx(b, dh + g, k)] = -v;
            }
        }
        for g2 in 0..dg {
            for k in 0..dg {
                c[idx(dh + g, dh + g2, dh + k)] = x.g.c(g, g2, k).clone();
            }
        }
    }
    let mut names: Vec<String> = x.h.basis_names().to_vec();
    names.extend(x.g.basis_names().iter().cloned());
    let g_minus1 = LieAlgebra::new(n, names, c)?;
    let mut s = QMatrix::zeros(dg, n);
    let mut i = QMatrix::zeros(n, dg);
    for k in 0..dg {
        s[(k, dh + k)] = Q::from_integer(1.into());
        i[(dh + k, k)] = Q::from_integer(1.into());
    }
    let mut t = s.clone();
    for r in 0..dg {
        for a in 0..dh {
            t[(r, a)] = x.mu[(r, a)].clone();
        }
    }
    Ok(StrictLie2 {
        g_minus1,
        g0: x.g.clone(),
        s,
        t,
        i,
    })
}

/// Crossed module `ker s -> g0` of a strict Lie 2-algebra, together with the
/// canonical kernel basis `K` (columns, in arrow coordinates) used for `h`.
pub fn from_strict_lie2(s2: &StrictLie2) -> Result<(CrossedModule, QMatrix)> {
    if let Some(v) = s2.validate().first() {
        return Err(Error::Validation(v.to_string()));
    }
    let n0 = s2.g0.dim();
    if s2.s.mul(&s2.i) != QMatrix::identity(n0) {
        return Err(Error::Basis("s is not split by i".into()));
    }
    let k = s2.s.kernel();
    let dh = k.cols();
    let kc = k.columns();
    let mut c = vec![Q::zero(); dh * dh * dh];
    for a in 0..dh {
        for b in 0..dh {
            let br = s2.g_minus1.bracket(&kc[a], &kc[b]);
            let coords = k
                .solve(&br)
                .ok_or_else(|| Error::Consistency("ker s is not an ideal".into()))?;
            for (m, v) in coords.into_iter().enumerate() {
                c[(a * dh + b) * dh + m] = v;
            }
        }
    }
    let names = (0..dh).map(|a| format!("k{}", a + 1)).collect();
    let h = LieAlgebra::new(dh, names, c)?;
    let mu = s2.t.mul(&k);
    let mut action = Vec::with_capacity(n0);
    for x in 0..n0 {
        let ix = s2.i.column(x);
        let mut m = QMatrix::zeros(dh, dh);
        for b in 0..dh {
            let br = s2.g_minus1.bracket(&ix, &kc[b]);
            let coords = k
                .solve(&br)
                .ok_or_else(|| Error::Consistency("i(g) does not normalise ker s".into()))?;
            for (r, v) in coords.into_iter().enumerate() {
                m[(r, b)] = v;
            }
        }
        action.push(m);
    }
    Ok((CrossedModule::new(h, s2.g0.clone(), mu, action)?, k))
}

/// Reasons two crossed modules fail to be isomorphic via given maps.
pub fn isomorphism_defects(
    x: &CrossedModule,
    y: &CrossedModule,
    phi: &QMatrix,
    psi: &QMatrix,
) -> Vec<String> {
    let mut out = Vec::new();
    if phi.shape() != (y.h.dim(), x.h.dim()) || psi.shape() != (y.g.dim(), x.g.dim()) {
        out.push("shape".into());
        return out;
    }
    if phi.inverse().is_none() {
        out.push("phi is not invertible".into());
    }
    if psi.inverse().is_none() {
        out.push("psi is not invertible".into());
    }
    out.extend(morphism_defects(x, y, phi, psi));
    out
}

fn morphism_defects(x: &CrossedModule, y: &CrossedModule, phi: &QMatrix, psi: &QMatrix) -> Vec<String> {
    let mut out = Vec::new();
    if !x.h.is_morphism(&y.h, phi) {
        out.push("phi is not a Lie morphism".into());
    }
    if !x.g.is_morphism(&y.g, psi) {
        out.push("psi is not a Lie morphism".into());
    }
    if y.mu.mul(phi) != psi.mul(&x.mu) {
        out.push("mu' . phi != psi . mu".into());
    }
    for g in 0..x.g.dim() {
        let lhs = phi.mul(&x.action[g]);
        let rhs = y.act_vec(&psi.column(g)).mul(phi);
        if lhs != rhs {
            out.push(format!("action compatibility fails for g{g}"));
        }
    }
    out
}

/// `g / im mu` with the canonical projection and section.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub gbar: LieAlgebra,
    /// `dim ḡ x dim g`.
    pub proj: QMatrix,
    /// `dim g x dim ḡ`.
    pub section: QMatrix,
    /// Standard basis vectors of `g` representing the basis of `ḡ`.
    pub representatives: Vec<usize>,
}

impl Cokernel {
    fn new(g: &LieAlgebra, mu: &QMatrix) -> Self {
        let dg = g.dim();
        let image = mu.image();
        let reps = image.complement_indices();
        let mut basis = image.clone();
        for &r in &reps {
            basis = basis.hstack(&QMatrix::from_columns(dg, &[crate::matrix::unit_vector(dg, r)]).unwrap());
        }
        let inv = basis.inverse().expect("image plus complement is a basis");
        let rows: Vec<usize> = (image.cols()..dg).collect();
        let proj = inv.select_rows(&rows);
        let section = QMatrix::identity(dg).select_columns(&reps);
        let sc = section.columns();
        let n = reps.len();
        let mut c = vec![Q::zero(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for (k, v) in proj.mul_vec(&g.bracket(&sc[a], &sc[b])).into_iter().enumerate() {
                    c[(a * n + b) * n + k] = v;
                }
            }
        }
        let names = reps.iter().map(|&r| g.basis_names()[r].clone()).collect();
        Cokernel {
            gbar: LieAlgebra::new(n, names, c).expect("shape"),
            proj,
            section,
            representatives: reps,
        }
    }

    fn checked_section(&self, section: Option<&QMatrix>) -> Result<QMatrix> {
        match section {
            None => Ok(self.section.clone()),
            Some(s) => {
                if s.shape() != self.section.shape()
                    || self.proj.mul(s) != QMatrix::identity(self.gbar.dim())
                {
                    return Err(Error::Section("pi . section != id".into()));
                }
                Ok(s.clone())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct OuterAction {
    pub gbar: LieAlgebra,
    /// Derivation of `h` for each basis vector of `ḡ`.
    pub derivations: Vec<QMatrix>,
    /// True iff the derivations form a representation of `ḡ`.
    pub genuine: bool,
}

/// Action of `ḡ` on `h` through a linear section of `g -> ḡ`.
pub fn outer_action(x: &CrossedModule, section: Option<&QMatrix>) -> Result<OuterAction> {
    x.check()?;
    let cok = x.cokernel();
    let s = cok.checked_section(section)?;
    let derivations: Vec<QMatrix> = s.columns().iter().map(|c| x.act_vec(c)).collect();
    let n = cok.gbar.dim();
    let mut genuine = true;
    'outer: for a in 0..n {
        for b in (a + 1)..n {
            let lhs = derivations[a].commutator(&derivations[b]);
            let mut rhs = QMatrix::zeros(x.h.dim(), x.h.dim());
            for (k, v) in cok.gbar.bracket_basis(a, b).iter().enumerate() {
                if !v.is_zero() {
                    rhs = rhs.add(&derivations[k].scale(v));
                }
            }
            if lhs != rhs {
                genuine = false;
                break 'outer;
            }
        }
    }
    Ok(OuterAction {
        gbar: cok.gbar,
        derivations,
        genuine,
    })
}

/// True iff `m` is `ad(y)` for some `y` in `h`.
pub fn is_inner_derivation(h: &LieAlgebra, m: &QMatrix) -> bool {
    let n = h.dim();
    let flat = |a: &QMatrix| -> Vec<Q> { a.to_rows().into_iter().flatten().collect() };
    let cols: Vec<Vec<Q>> = (0..n).map(|i| flat(&h.ad(i))).collect();
    if n == 0 {
        return m.is_zero();
    }
    QMatrix::from_columns(n * n, &cols)
        .map(|span| span.contains_column(&flat(m)))
        .unwrap_or(false)
}

/// `(ḡ, V, γ)` with `γ` a 3-cocycle of `ḡ` valued in `V`.
#[derive(Clone, Debug)]
pub struct Triplet {
    pub gbar: LieAlgebra,
    pub v: LieModule,
    pub gamma: Cochain,
}

impl Triplet {
    pub fn validate(&self) -> Result<()> {
        self.gbar.check()?;
        self.v.check(&self.gbar)?;
        let cx = CEComplex::new(&self.gbar, &self.v)?;
        if !cx.is_cocycle(&self.gamma) {
            return Err(Error::NotCocycle("d gamma != 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SkeletalModel {
    pub triplet: Triplet,
    /// `h`-valued 2-cochain on `ḡ` with `mu phi2(x, y) = σ[x, y] - [σx, σy]`.
    pub phi2: Cochain,
    /// Section of `g -> ḡ` used.
    pub section: QMatrix,
    /// Basis of `V = ker mu` (columns, in `h` coordinates).
    pub kernel_basis: QMatrix,
    /// Derivations `ρ(σx)` of `h`.
    pub derivations: Vec<QMatrix>,
}

/// Skeletal model: `ḡ = coker mu`, `V = ker mu` and `γ = d φ₂`, where the
/// formal differential uses the (possibly non-genuine) action `ρ(σ·)`.
pub fn skeletal_model(x: &CrossedModule, section: Option<&QMatrix>) -> Result<SkeletalModel> {
    x.check()?;
    let cok = x.cokernel();
    let sigma = cok.checked_section(section)?;
    let gbar = cok.gbar.clone();
    let n = gbar.dim();
    let dh = x.h.dim();
    let sc = sigma.columns();
    let mut err = None;
    let phi2 = Cochain::from_fn(2, n, dh, |ij| {
        let (a, b) = (ij[0], ij[1]);
        let lhs = sigma.mul_vec(&gbar.bracket_basis(a, b));
        let default = vec_sub(&lhs, &x.g.bracket(&sc[a], &sc[b]));
        match x.mu.solve(&default) {
            Some(v) => v,
            None => {
                err = Some(Error::Consistency(format!(
                    "default of the section at ({a}, {b}) is not in im mu"
                )));
                vec![Q::zero(); dh]
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let derivations: Vec<QMatrix> = sc.iter().map(|c| x.act_vec(c)).collect();
    let gamma_h = apply_d(&gbar, &derivations, &phi2);
    if !gamma_h.map_values(&x.mu).is_zero() {
        return Err(Error::Consistency("d phi2 does not take values in ker mu".into()));
    }
    let k = x.kernel_basis();
    let kinv = if k.cols() == 0 {
        QMatrix::zeros(0, dh)
    } else {
        k.left_inverse()?
    };
    let gamma = gamma_h.map_values(&kinv);
    if gamma.map_values(&k) != gamma_h {
        return Err(Error::Consistency("gamma is not in ker mu".into()));
    }
    let v_action: Vec<QMatrix> = derivations.iter().map(|d| kinv.mul(d).mul(&k)).collect();
    let v = LieModule::new(k.cols(), v_action)?;
    let triplet = Triplet { gbar, v, gamma };
    triplet
        .validate()
        .map_err(|e| Error::Consistency(format!("skeletal triplet: {e}")))?;
    Ok(SkeletalModel {
        triplet,
        phi2,
        section: sigma,
        kernel_basis: k,
        derivations,
    })
}

/// The classifying triplet of `x` (canonical section).
pub fn extract_triplet(x: &CrossedModule) -> Result<Triplet> {
    Ok(skeletal_model(x, None)?.triplet)
}

/// Crossed module `I -> Q ×_α ḡ`, `x -> (π x, 0)`, with `I` abelian, `Q`
/// acting trivially and `ḡ` acting through its module structure on `I`.
///
/// The bracket on `Q ×_α ḡ` is `[(q1, x), (q2, y)] = (x.q2 - y.q1 - α(x, y), [x, y])`.
pub fn splice_crossed_module(ses: &ShortExactSequence, alpha: &Cochain) -> Result<CrossedModule> {
    ses.validate()?;
    let gbar = &ses.algebra;
    let (dq, n, di) = (ses.quot.dim(), gbar.dim(), ses.mid.dim());
    if alpha.degree() != 2 || alpha.dim_g() != n || alpha.dim_v() != dq {
        return Err(Error::Shape("alpha must be a Q-valued 2-cochain".into()));
    }
    if !apply_d(gbar, ses.quot.action(), alpha).is_zero() {
        return Err(Error::NotCocycle("d alpha != 0".into()));
    }
    let m = dq + n;
    let mut c = vec![Q::zero(); m * m * m];
    let idx = |i: usize, j: usize, k: usize| (i * m + j) * m + k;
    for xi in 0..n {
        let rho = ses.quot.act(xi);
        for b in 0..dq {
            for k in 0..dq {
                let v = rho[(k, b)].clone();
                c[idx(dq + xi, b, k)] = v.clone();
                c[idx(b, dq + xi, k)] = -v;
            }
        }
        for yj in 0..n {
            let a = alpha.value(&[xi, yj]);
            for k in 0..dq {
                c[idx(dq + xi, dq + yj, k)] = -a[k].clone();
            }
            for k in 0..n {
                c[idx(dq + xi, dq + yj, dq + k)] = gbar.c(xi, yj, k).clone();
            }
        }
    }
    let mut names: Vec<String> = (0..dq).map(|i| format!("q{}", i + 1)).collect();
    names.extend(gbar.basis_names().iter().cloned());
    let g = LieAlgebra::new(m, names, c)?;
    let mut mu = QMatrix::zeros(m, di);
    for r in 0..dq {
        for col in 0..di {
            mu[(r, col)] = ses.proj[(r, col)].clone();
        }
    }
    let mut action = vec![QMatrix::zeros(di, di); dq];
    action.extend(ses.mid.action().iter().cloned());
    let x = CrossedModule::new(LieAlgebra::abelian(di), g, mu, action)?;
    x.check()
        .map_err(|e| Error::Consistency(format!("splice is not a crossed module: {e}")))?;
    Ok(x)
}

/// The class of the splice's skeletal model expressed in the coordinates of
/// `V` from the sequence, ready to compare with [`crate::cochain::connecting_map`].
pub fn splice_gamma_in_v(ses: &ShortExactSequence, splice: &CrossedModule) -> Result<Cochain> {
    let sk = skeletal_model(splice, None)?;
    if sk.triplet.gbar.structure_constants() != ses.algebra.structure_constants() {
        return Err(Error::Consistency("splice cokernel differs from the base algebra".into()));
    }
    let to_i = sk.triplet.gamma.map_values(&sk.kernel_basis);
    let back = ses.inc.left_inverse()?;
    let g = to_i.map_values(&back);
    if g.map_values(&ses.inc) != to_i {
        return Err(Error::Consistency("kernel of the splice differs from V".into()));
    }
    Ok(g)
}

/// Maps `(φ: h -> h', ψ: g -> g')` between two crossed modules.
#[derive(Clone, Debug)]
pub struct ElementaryEquivalence {
    pub phi: QMatrix,
    pub psi: QMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceFailure {
    Shape,
    PhiNotMorphism,
    PsiNotMorphism,
    MuCompatibility,
    /// `φ(x . h) != ψ(x) . φ(h)` for the basis vector `x` of `g`.
    ActionCompatibility { x: usize },
    /// `φ` is not the identity on `ker mu` in canonical kernel bases.
    KernelIdentity,
    /// `ψ` does not induce the identity on canonical cokernels.
    CokernelIdentity,
}

impl fmt::Display for EquivalenceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceFailure::Shape => write!(f, "shape mismatch"),
            EquivalenceFailure::PhiNotMorphism => write!(f, "phi is not a Lie morphism"),
            EquivalenceFailure::PsiNotMorphism => write!(f, "psi is not a Lie morphism"),
            EquivalenceFailure::MuCompatibility => write!(f, "mu' phi != psi mu"),
            EquivalenceFailure::ActionCompatibility { x } => {
                write!(f, "action compatibility fails for g{x}")
            }
            EquivalenceFailure::KernelIdentity => write!(f, "phi is not the identity on ker mu"),
            EquivalenceFailure::CokernelIdentity => {
                write!(f, "psi does not induce the identity on coker mu")
            }
        }
    }
}

/// Every failed condition of an elementary equivalence `x -> y`; empty iff
/// the maps form one.
pub fn check_elementary_equivalence(
    x: &CrossedModule,
    y: &CrossedModule,
    e: &ElementaryEquivalence,
) -> Vec<EquivalenceFailure> {
    let (phi, psi) = (&e.phi, &e.psi);
    if phi.shape() != (y.h.dim(), x.h.dim()) || psi.shape() != (y.g.dim(), x.g.dim()) {
        return vec![EquivalenceFailure::Shape];
    }
    let mut out = Vec::new();
    if !x.h.is_morphism(&y.h, phi) {
        out.push(EquivalenceFailure::PhiNotMorphism);
    }
    if !x.g.is_morphism(&y.g, psi) {
        out.push(EquivalenceFailure::PsiNotMorphism);
    }
    if y.mu.mul(phi) != psi.mul(&x.mu) {
        out.push(EquivalenceFailure::MuCompatibility);
    }
    for g in 0..x.g.dim() {
        if phi.mul(&x.action[g]) != y.act_vec(&psi.column(g)).mul(phi) {
            out.push(EquivalenceFailure::ActionCompatibility { x: g });
        }
    }
    if phi.mul(&x.kernel_basis()) != y.kernel_basis() {
        out.push(EquivalenceFailure::KernelIdentity);
    }
    let (cx, cy) = (x.cokernel(), y.cokernel());
    if cx.gbar.dim() != cy.gbar.dim()
        || cy.proj.mul(psi).mul(&cx.section) != QMatrix::identity(cx.gbar.dim())
    {
        out.push(EquivalenceFailure::CokernelIdentity);
    }
    out
}
