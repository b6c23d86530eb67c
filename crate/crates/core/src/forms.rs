//! L∞-valued differential forms with polynomial coefficients on a chart.
//!
//! A term is `c · x^e · dx_I ⊗ v` with `I` strictly increasing. The value
//! space is either `L_0` (internal degree 0) or `L_{-1}` (internal degree -1,
//! odd). Operations on values follow the Koszul rule on total degree:
//!
//! - `[ω ⊗ x, η ⊗ y] = (-1)^{|x| deg η} (ω ∧ η) ⊗ l2(x, y)`
//! - `l1(ω ⊗ h) = (-1)^{deg ω} ω ⊗ l1 h`
//! - `l3(ω1 ⊗ x, ω2 ⊗ y, ω3 ⊗ z) = (ω1 ∧ ω2 ∧ ω3) ⊗ l3(x, y, z)` for `x, y, z ∈ L_0`

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::cochain::sort_with_sign;
use crate::error::{Error, Result};
use crate::linf::{L3Normalization, TwoTermLinf};
use crate::rational::{q, qr, to_f64, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueSpace {
    L0,
    Lm1,
}

impl ValueSpace {
    fn parity(self) -> usize {
        match self {
            ValueSpace::L0 => 0,
            ValueSpace::Lm1 => 1,
        }
    }
}

/// Key of a term: form indices, value basis index, monomial exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub dx: Vec<usize>,
    pub value: usize,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyForm {
    chart_dim: usize,
    space: ValueSpace,
    value_dim: usize,
    terms: BTreeMap<TermKey, Q>,
}

impl PolyForm {
    pub fn zero(chart_dim: usize, space: ValueSpace, value_dim: usize) -> Self {
        PolyForm {
            chart_dim,
            space,
            value_dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn chart_dim(&self) -> usize {
        self.chart_dim
    }

    pub fn space(&self) -> ValueSpace {
        self.space
    }

    pub fn value_dim(&self) -> usize {
        self.value_dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Q)> {
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

    /// Adds `coeff · x^exps · dx_{dx[0]} ∧ ... ⊗ e_value`; `dx` may be unsorted.
    pub fn add_term(&mut self, coeff: Q, exps: &[u32], dx: &[usize], value: usize) -> Result<()> {
        if exps.len() != self.chart_dim {
            return Err(Error::Shape(format!(
                "monomial has {} exponents on a chart of dimension {}",
                exps.len(),
                self.chart_dim
            )));
        }
        if dx.iter().any(|&i| i >= self.chart_dim) || value >= self.value_dim {
            return Err(Error::Shape("form or value index out of range".into()));
        }
        let Some((sorted, odd)) = sort_with_sign(dx) else {
            return Ok(());
        };
        let c = if odd { -coeff } else { coeff };
        self.insert(
            TermKey {
                dx: sorted,
                value,
                exps: exps.to_vec(),
            },
            c,
        );
        Ok(())
    }

    /// Builder for constant-coefficient terms.
    pub fn with_term(mut self, coeff: Q, exps: &[u32], dx: &[usize], value: usize) -> Self {
        self.add_term(coeff, exps, dx, value).expect("valid term");
        self
    }

    fn insert(&mut self, key: TermKey, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// Form degree if all terms share one.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.dx.len());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, deg: usize) -> bool {
        self.terms.keys().all(|k| k.dx.len() == deg)
    }

    fn same_shape(&self, other: &PolyForm) -> Result<()> {
        if self.chart_dim != other.chart_dim
            || self.space != other.space
            || self.value_dim != other.value_dim
        {
            return Err(Error::Incompatible("forms live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyForm) -> Result<PolyForm> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.insert(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyForm) -> Result<PolyForm> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> PolyForm {
        let mut out = PolyForm::zero(self.chart_dim, self.space, self.value_dim);
        for (k, v) in &self.terms {
            out.insert(k.clone(), v * s);
        }
        out
    }

    /// Exterior derivative, exact.
    pub fn d(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.chart_dim, self.space, self.value_dim);
        for (k, c) in &self.terms {
            for j in 0..self.chart_dim {
                if k.exps[j] == 0 || k.dx.contains(&j) {
                    continue;
                }
                let mut exps = k.exps.clone();
                exps[j] -= 1;
                let pos = k.dx.iter().filter(|&&i| i < j).count();
                let mut dx = k.dx.clone();
                dx.insert(pos, j);
                let mut coeff = c * q(i64::from(k.exps[j]));
                if pos % 2 == 1 {
                    coeff = -coeff;
                }
                out.insert(TermKey { dx, value: k.value, exps }, coeff);
            }
        }
        out
    }

    /// Relabels coordinates `x_i -> x_{perm[i]}`.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<PolyForm> {
        let n = self.chart_dim;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || core::mem::replace(&mut seen[p], true)) {
            return Err(Error::Argument("not a permutation of the chart coordinates".into()));
        }
        let mut out = PolyForm::zero(n, self.space, self.value_dim);
        for (k, c) in &self.terms {
            let mut exps = vec![0; n];
            for i in 0..n {
                exps[perm[i]] = k.exps[i];
            }
            let dx: Vec<usize> = k.dx.iter().map(|&i| perm[i]).collect();
            out.add_term(c.clone(), &exps, &dx, k.value)?;
        }
        Ok(out)
    }

    /// `l1` applied to an `L_{-1}`-valued form, with sign `(-1)^{deg}` per term.
    pub fn apply_l1(&self, linf: &TwoTermLinf) -> Result<PolyForm> {
        if self.space != ValueSpace::Lm1 || self.value_dim != linf.dm1() {
            return Err(Error::Incompatible("l1 acts on L_{-1}-valued forms".into()));
        }
        let mut out = PolyForm::zero(self.chart_dim, ValueSpace::L0, linf.d0());
        for (k, c) in &self.terms {
            let sign = if k.dx.len() % 2 == 1 { -Q::one() } else { Q::one() };
            for r in 0..linf.d0() {
                let m = &linf.l1()[(r, k.value)];
                if !m.is_zero() {
                    out.insert(
                        TermKey {
                            dx: k.dx.clone(),
                            value: r,
                            exps: k.exps.clone(),
                        },
                        c * m * &sign,
                    );
                }
            }
        }
        Ok(out)
    }


    /// Graded commutator of the values combined with the wedge product.
    pub fn wedge_l2(&self, other: &PolyForm, linf: &TwoTermLinf) -> Result<PolyForm> {
        if self.chart_dim != other.chart_dim {
            return Err(Error::Incompatible("different charts".into()));
        }
        self.check_target(linf)?;
        other.check_target(linf)?;
        let out_space = match (self.space, other.space) {
            (ValueSpace::L0, ValueSpace::L0) => ValueSpace::L0,
            (ValueSpace::Lm1, ValueSpace::Lm1) => {
                return Err(Error::Incompatible(
                    "l2 of two L_{-1} values has no target in a two-term algebra".into(),
                ))
            }
            _ => ValueSpace::Lm1,
        };
        let out_dim = match out_space {
            ValueSpace::L0 => linf.d0(),
            ValueSpace::Lm1 => linf.dm1(),
        };
        let mut out = PolyForm::zero(self.chart_dim, out_space, out_dim);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let Some((dx, sign)) = wedge_indices(&ka.dx, &kb.dx) else {
                    continue;
                };
                let mut coeff = ca * cb;
                if sign ^ (self.space.parity() * kb.dx.len() % 2 == 1) {
                    coeff = -coeff;
                }
                let exps: Vec<u32> = ka.exps.iter().zip(&kb.exps).map(|(a, b)| a + b).collect();
                let values = l2_basis(linf, self.space, ka.value, other.space, kb.value);
                for (r, v) in values.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.insert(
                            TermKey {
                                dx: dx.clone(),
                                value: r,
                                exps: exps.clone(),
                            },
                            &coeff * v,
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_target(&self, linf: &TwoTermLinf) -> Result<()> {
        let want = match self.space {
            ValueSpace::L0 => linf.d0(),
            ValueSpace::Lm1 => linf.dm1(),
        };
        if self.value_dim != want {
            return Err(Error::Incompatible(format!(
                "form values have dimension {}, the algebra component has {want}",
                self.value_dim
            )));
        }
        Ok(())
    }

    /// Evaluates at `point` on the vectors `vs` (as many as the form degree);
    /// terms of other degrees are ignored.
    pub fn eval(&self, point: &[f64], vs: &[&[f64]]) -> Vec<f64> {
        let mut out = vec![0.0; self.value_dim];
        for (k, c) in &self.terms {
            if k.dx.len() != vs.len() {
                continue;
            }
            let mono = monomial(point, &k.exps);
            if mono == 0.0 {
                continue;
            }
            out[k.value] += to_f64(c) * mono * minor(vs, &k.dx);
        }
        out
    }

    /// Sum of absolute coefficients, a cheap size measure for residuals.
    pub fn l1_norm(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, v| acc + v.abs())
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.exps.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

/// `dx_I ∧ dx_J` as a sorted index list with its sign, or `None` if zero.
fn wedge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    sort_with_sign(&all)
}

fn l2_basis(linf: &TwoTermLinf, sa: ValueSpace, a: usize, sb: ValueSpace, b: usize) -> Vec<Q> {
    match (sa, sb) {
        (ValueSpace::L0, ValueSpace::L0) => {
            let n = linf.d0();
            linf.bracket_constants()[(a * n + b) * n..(a * n + b + 1) * n].to_vec()
        }
        (ValueSpace::L0, ValueSpace::Lm1) => linf.action()[a].column(b),
        (ValueSpace::Lm1, ValueSpace::L0) => linf.action()[b].column(a).into_iter().map(|v| -v).collect(),
        (ValueSpace::Lm1, ValueSpace::Lm1) => unreachable!("rejected by the caller"),
    }
}

fn monomial(point: &[f64], exps: &[u32]) -> f64 {
    let mut m = 1.0;
    for (x, &e) in point.iter().zip(exps) {
        for _ in 0..e {
            m *= x;
        }
    }
    m
}

/// Determinant of the rows `idx` of the matrix whose columns are `vs`.
fn minor(vs: &[&[f64]], idx: &[usize]) -> f64 {
    match idx.len() {
        0 => 1.0,
        1 => vs[0][idx[0]],
        2 => vs[0][idx[0]] * vs[1][idx[1]] - vs[0][idx[1]] * vs[1][idx[0]],
        _ => {
            // Laplace expansion along the first vector.
            let mut acc = 0.0;
            for (pos, &i) in idx.iter().enumerate() {
                let rest: Vec<usize> = idx.iter().copied().filter(|&j| j != i).collect();
                let sub = minor(&vs[1..], &rest);
                let s = if pos % 2 == 0 { 1.0 } else { -1.0 };
                acc += s * vs[0][i] * sub;
            }
            acc
        }
    }
}

/// `l3(a, b, c)` for three `L_0`-valued forms.
pub fn l3_forms(a: &PolyForm, b: &PolyForm, c: &PolyForm, linf: &TwoTermLinf) -> Result<PolyForm> {
    for f in [a, b, c] {
        if f.space != ValueSpace::L0 {
            return Err(Error::Incompatible("l3 takes L_0-valued forms".into()));
        }
        f.check_target(linf)?;
    }
    let n0 = linf.d0();
    let mut out = PolyForm::zero(a.chart_dim, ValueSpace::Lm1, linf.dm1());
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            let Some((ab, s1)) = wedge_indices(&ka.dx, &kb.dx) else {
                continue;
            };
            for (kc, cc) in &c.terms {
                let Some((dx, s2)) = wedge_indices(&ab, &kc.dx) else {
                    continue;
                };
                let mut coeff = ca * cb * cc;
                if s1 ^ s2 {
                    coeff = -coeff;
                }
                let exps: Vec<u32> = ka
                    .exps
                    .iter()
                    .zip(&kb.exps)
                    .zip(&kc.exps)
                    .map(|((x, y), z)| x + y + z)
                    .collect();
                let base = ((ka.value * n0 + kb.value) * n0 + kc.value) * linf.dm1();
                for r in 0..linf.dm1() {
                    let v = &linf.l3_constants()[base + r];
                    if !v.is_zero() {
                        out.insert(
                            TermKey {
                                dx: dx.clone(),
                                value: r,
                                exps: exps.clone(),
                            },
                            &coeff * v,
                        );
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Connection `A` (a 1-form in `L_0`) and curving `B` (a 2-form in `L_{-1}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCPair {
    pub a: PolyForm,
    pub b: PolyForm,
}

impl MCPair {
    pub fn validate(&self, linf: &TwoTermLinf) -> Result<()> {
        if self.a.space != ValueSpace::L0 || !self.a.is_homogeneous_of(1) {
            return Err(Error::Shape("A must be an L_0-valued 1-form".into()));
        }
        if self.b.space != ValueSpace::Lm1 || !self.b.is_homogeneous_of(2) {
            return Err(Error::Shape("B must be an L_{-1}-valued 2-form".into()));
        }
        if self.a.chart_dim != self.b.chart_dim {
            return Err(Error::Shape("A and B live on different charts".into()));
        }
        self.a.check_target(linf)?;
        self.b.check_target(linf)
    }

    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<MCPair> {
        Ok(MCPair {
            a: self.a.permute_coordinates(perm)?,
            b: self.b.permute_coordinates(perm)?,
        })
    }
}

/// `dA + ½[A, A] + l1(B)`.
pub fn fake_curvature(p: &MCPair, linf: &TwoTermLinf) -> Result<PolyForm> {
    p.validate(linf)?;
    let half = qr(1, 2);
    p.a.d()
        .add(&p.a.wedge_l2(&p.a, linf)?.scale(&half))?
        .add(&p.b.apply_l1(linf)?)
}

/// `dB + [A, B] + c · l3(A, A, A)` with `c = 1` (literal) or `1/3!`.
pub fn three_curvature(p: &MCPair, linf: &TwoTermLinf, norm: L3Normalization) -> Result<PolyForm> {
    p.validate(linf)?;
    let c = match norm {
        L3Normalization::Literal => Q::one(),
        L3Normalization::Factorial => qr(1, 6),
    };
    p.b.d()
        .add(&p.a.wedge_l2(&p.b, linf)?)?
        .add(&l3_forms(&p.a, &p.a, &p.a, linf)?.scale(&c))
}

#[derive(Clone, Debug)]
pub struct McReport {
    pub is_mc: bool,
    pub fake_curvature: PolyForm,
    pub three_curvature: PolyForm,
}

pub fn is_maurer_cartan(p: &MCPair, linf: &TwoTermLinf, norm: L3Normalization) -> Result<McReport> {
    let f = fake_curvature(p, linf)?;
    let h = three_curvature(p, linf, norm)?;
    Ok(McReport {
        is_mc: f.is_zero() && h.is_zero(),
        fake_curvature: f,
        three_curvature: h,
    })
}
