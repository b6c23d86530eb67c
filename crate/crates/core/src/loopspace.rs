//! Sampled loops, parallel transport, the loop-space connection `A0` and
//! surface holonomy.
//!
//! Transport solves `T' = ρ(A(γ̇)) T` by a product of midpoint exponentials
//! over the chords of the sampled loop. `A0(γ; δγ)` is the trapezoid rule in
//! `σ` (endpoints included, since the integrand is not periodic once the
//! transport is nontrivial) of `T(σ → 1) B(γ(σ))(γ̇(σ), δγ(σ))`. Surface
//! holonomy integrates `A0` along the loop of loops `τ ↦ γ_τ` with the
//! periodic trapezoid rule.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forms::{MCPair, PolyForm};
use crate::linf::{L3Normalization, TwoTermLinf};
use crate::numeric::{RMat, Stencil};
use crate::rational::to_f64;

fn check_finite(data: &[f64], what: &str) -> Result<()> {
    if data.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric(format!("{what} contains non-finite values")))
    }
}

/// Periodic first derivative along one grid direction.
///
/// `at(j)` returns the sample with index `j` reduced modulo the period plus
/// the winding offset accumulated on the way.
fn stencil_derivative(stencil: Stencil, period: usize, n: usize, at: impl Fn(isize) -> Vec<f64>, j: isize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (s, c) in stencil.weights().iter().enumerate() {
        let s = s as isize + 1;
        let (fp, fm) = (at(j + s), at(j - s));
        for i in 0..n {
            out[i] += c * (fp[i] - fm[i]);
        }
    }
    let m = period as f64;
    for v in &mut out {
        *v *= m;
    }
    out
}

/// A closed loop sampled at `t_k = k/m`, `k = 0..m`.
///
/// Samples are stored for `k < m`; the sample at `k + m` is the sample at `k`
/// plus `winding`, which lets loops live in a flat torus `R^n / Z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledLoop {
    m: usize,
    n: usize,
    samples: Vec<f64>,
    winding: Vec<f64>,
    stencil: Stencil,
    sitting_instant: bool,
}

impl SampledLoop {
    pub fn new(m: usize, n: usize, samples: Vec<f64>) -> Result<Self> {
        if m < 8 {
            return Err(Error::Shape(format!("a loop needs at least 8 samples, got {m}")));
        }
        if samples.len() != m * n {
            return Err(Error::Shape("sample array does not match m x n".into()));
        }
        check_finite(&samples, "loop")?;
        Ok(SampledLoop {
            m,
            n,
            samples,
            winding: vec![0.0; n],
            stencil: Stencil::default(),
            sitting_instant: false,
        })
    }

    /// Accepts `m + 1` rows whose last row repeats the first within `tol`.
    pub fn from_closed_samples(rows: usize, n: usize, samples: Vec<f64>, tol: f64) -> Result<Self> {
        if rows < 2 || samples.len() != rows * n {
            return Err(Error::Shape("sample array does not match rows x n".into()));
        }
        let m = rows - 1;
        let gap = (0..n).map(|i| (samples[i] - samples[m * n + i]).abs()).fold(0.0, f64::max);
        if gap > tol {
            return Err(Error::Validation(format!("loop is not closed: seam gap {gap:e}")));
        }
        let mut s = samples;
        s.truncate(m * n);
        SampledLoop::new(m, n, s)
    }

    /// Samples `f(k/m)` for `k < m`.
    pub fn from_fn(m: usize, n: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let mut samples = Vec::with_capacity(m * n);
        for k in 0..m {
            let p = f(k as f64 / m as f64);
            if p.len() != n {
                return Err(Error::Shape("sample function returned the wrong dimension".into()));
            }
            samples.extend(p);
        }
        SampledLoop::new(m, n, samples)
    }

    pub fn with_winding(mut self, winding: Vec<f64>) -> Result<Self> {
        if winding.len() != self.n {
            return Err(Error::Shape("winding offset has the wrong dimension".into()));
        }
        check_finite(&winding, "winding")?;
        self.winding = winding;
        Ok(self)
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    /// Treat the velocity at the seam as zero.
    pub fn with_sitting_instant(mut self, on: bool) -> Self {
        self.sitting_instant = on;
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// The sample with index `k`, continued periodically with the winding.
    pub fn point(&self, k: isize) -> Vec<f64> {
        let m = self.m as isize;
        let (wraps, r) = (k.div_euclid(m), k.rem_euclid(m) as usize);
        let base = &self.samples[r * self.n..(r + 1) * self.n];
        base.iter()
            .zip(&self.winding)
            .map(|(x, w)| x + wraps as f64 * w)
            .collect()
    }

    /// `γ̇(k/m)` from the periodic stencil.
    pub fn velocity(&self, k: isize) -> Vec<f64> {
        if self.sitting_instant && k.rem_euclid(self.m as isize) == 0 {
            return vec![0.0; self.n];
        }
        stencil_derivative(self.stencil, self.m, self.n, |j| self.point(j), k)
    }

    /// Piecewise-linear interpolation at `σ ∈ [0, 1]`.
    pub fn point_at(&self, sigma: f64) -> Vec<f64> {
        let (k, frac) = self.cell(sigma);
        let a = self.point(k as isize);
        let b = self.point(k as isize + 1);
        a.iter().zip(&b).map(|(x, y)| x + frac * (y - x)).collect()
    }

    fn cell(&self, sigma: f64) -> (usize, f64) {
        let t = sigma * self.m as f64;
        // sigma lies in [0, 1], so the cast truncates toward the floor.
        let k = (t as usize).min(self.m - 1);
        (k, t - k as f64)
    }
}

/// A tangent vector field along a sampled loop.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopTangent {
    m: usize,
    n: usize,
    samples: Vec<f64>,
}

impl LoopTangent {
    pub fn new(m: usize, n: usize, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != m * n {
            return Err(Error::Shape("tangent array does not match m x n".into()));
        }
        check_finite(&samples, "tangent")?;
        Ok(LoopTangent { m, n, samples })
    }

    pub fn from_fn(m: usize, n: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let mut samples = Vec::with_capacity(m * n);
        for k in 0..m {
            samples.extend(f(k as f64 / m as f64));
        }
        LoopTangent::new(m, n, samples)
    }

    /// The loop's own velocity field.
    pub fn velocity_of(g: &SampledLoop) -> Self {
        let mut samples = Vec::with_capacity(g.m * g.n);
        for k in 0..g.m {
            samples.extend(g.velocity(k as isize));
        }
        LoopTangent { m: g.m, n: g.n, samples }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn at(&self, k: usize) -> &[f64] {
        let k = k % self.m;
        &self.samples[k * self.n..(k + 1) * self.n]
    }

    /// `a · self + b · other`.
    pub fn combine(&self, a: f64, other: &LoopTangent, b: f64) -> Result<Self> {
        if (self.m, self.n) != (other.m, other.n) {
            return Err(Error::Shape("tangent fields differ in shape".into()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(x, y)| a * x + b * y).collect();
        Ok(LoopTangent { m: self.m, n: self.n, samples })
    }
}

/// A doubly periodic map `f(τ_j, σ_k)`, `j < p`, `k < m`, into `R^n`
/// (or a flat torus, through the two winding offsets).
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSurface {
    p: usize,
    m: usize,
    n: usize,
    grid: Vec<f64>,
    tau_winding: Vec<f64>,
    sigma_winding: Vec<f64>,
    stencil: Stencil,
}

impl SampledSurface {
    pub fn new(p: usize, m: usize, n: usize, grid: Vec<f64>) -> Result<Self> {
        if p < 8 || m < 8 {
            return Err(Error::Shape(format!("surface grid {p}x{m} is below the 8x8 minimum")));
        }
        if grid.len() != p * m * n {
            return Err(Error::Shape("grid array does not match p x m x n".into()));
        }
        check_finite(&grid, "surface")?;
        Ok(SampledSurface {
            p,
            m,
            n,
            grid,
            tau_winding: vec![0.0; n],
            sigma_winding: vec![0.0; n],
            stencil: Stencil::default(),
        })
    }

    /// Samples `f(τ, σ)` on the uniform `p x m` grid.
    pub fn from_fn(p: usize, m: usize, n: usize, f: impl Fn(f64, f64) -> Vec<f64>) -> Result<Self> {
        let mut grid = Vec::with_capacity(p * m * n);
        for j in 0..p {
            for k in 0..m {
                let v = f(j as f64 / p as f64, k as f64 / m as f64);
                if v.len() != n {
                    return Err(Error::Shape("sample function returned the wrong dimension".into()));
                }
                grid.extend(v);
            }
        }
        SampledSurface::new(p, m, n, grid)
    }

    pub fn with_windings(mut self, tau: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        if tau.len() != self.n || sigma.len() != self.n {
            return Err(Error::Shape("winding offsets have the wrong dimension".into()));
        }
        self.tau_winding = tau;
        self.sigma_winding = sigma;
        Ok(self)
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.p, self.m, self.n)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    fn sample(&self, j: isize, k: usize) -> Vec<f64> {
        let p = self.p as isize;
        let (wraps, r) = (j.div_euclid(p), j.rem_euclid(p) as usize);
        let base = &self.grid[(r * self.m + k) * self.n..(r * self.m + k + 1) * self.n];
        base.iter()
            .zip(&self.tau_winding)
            .map(|(x, w)| x + wraps as f64 * w)
            .collect()
    }

    /// The loop `σ ↦ f(τ_j, σ)`.
    pub fn loop_at(&self, j: usize) -> SampledLoop {
        let samples = self.grid[j * self.m * self.n..(j + 1) * self.m * self.n].to_vec();
        SampledLoop {
            m: self.m,
            n: self.n,
            samples,
            winding: self.sigma_winding.clone(),
            stencil: self.stencil,
            sitting_instant: false,
        }
    }

    /// `∂_τ f(τ_j, ·)` from the periodic stencil in `τ`.
    pub fn tau_derivative(&self, j: usize) -> LoopTangent {
        let mut samples = Vec::with_capacity(self.m * self.n);
        for k in 0..self.m {
            samples.extend(stencil_derivative(self.stencil, self.p, self.n, |jj| self.sample(jj, k), j as isize));
        }
        LoopTangent {
            m: self.m,
            n: self.n,
            samples,
        }
    }
}

/// The connection as a callback `(point, tangent) ↦ ρ(A(tangent))` acting on `h`.
pub struct TransportProblem<F> {
    h_dim: usize,
    connection: F,
    h_abelian: bool,
}

impl<F: Fn(&[f64], &[f64]) -> RMat> TransportProblem<F> {
    /// A problem with abelian `h`; see [`TransportProblem::with_abelian_target`].
    pub fn new(h_dim: usize, connection: F) -> Self {
        TransportProblem {
            h_dim,
            connection,
            h_abelian: true,
        }
    }

    pub fn with_abelian_target(mut self, abelian: bool) -> Self {
        self.h_abelian = abelian;
        self
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn is_abelian(&self) -> bool {
        self.h_abelian
    }

    pub fn matrix(&self, point: &[f64], tangent: &[f64]) -> Result<RMat> {
        let a = (self.connection)(point, tangent);
        if a.rows() != self.h_dim || a.cols() != self.h_dim {
            return Err(Error::Shape("connection callback returned the wrong shape".into()));
        }
        if !a.is_finite() {
            return Err(Error::Numeric("connection callback returned non-finite values".into()));
        }
        Ok(a)
    }

    /// Spot check of linearity in the tangent: `max |A(au + bv) - aA(u) - bA(v)|`.
    pub fn linearity_defect(&self, point: &[f64], u: &[f64], v: &[f64], a: f64, b: f64) -> Result<f64> {
        let w: Vec<f64> = u.iter().zip(v).map(|(x, y)| a * x + b * y).collect();
        let lhs = self.matrix(point, &w)?;
        let rhs = self.matrix(point, u)?.scale(a).add(&self.matrix(point, v)?.scale(b));
        Ok(lhs.max_abs_diff(&rhs))
    }

    /// One midpoint-exponential step along the chord from `a` to `b`.
    fn step(&self, a: &[f64], b: &[f64]) -> Result<RMat> {
        let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
        let chord: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        Ok(self.matrix(&mid, &chord)?.expm())
    }

    /// Step matrices of all `m` cells of the loop.
    fn cell_steps(&self, g: &SampledLoop) -> Result<Vec<RMat>> {
        (0..g.m)
            .map(|k| self.step(&g.point(k as isize), &g.point(k as isize + 1)))
            .collect()
    }
}

fn check_loop_dim<F: Fn(&[f64], &[f64]) -> RMat>(_p: &TransportProblem<F>, g: &SampledLoop, n: usize) -> Result<()> {
    if g.n != n {
        return Err(Error::Shape("loop and tangent dimensions differ".into()));
    }
    Ok(())
}

/// Transport from `σ0` to `σ1` along `γ`.
pub fn transport<F: Fn(&[f64], &[f64]) -> RMat>(
    p: &TransportProblem<F>,
    g: &SampledLoop,
    sigma0: f64,
    sigma1: f64,
) -> Result<RMat> {
    if !(0.0..=1.0).contains(&sigma0) || !(0.0..=1.0).contains(&sigma1) {
        return Err(Error::Argument(format!("positions {sigma0}, {sigma1} are outside [0, 1]")));
    }
    if sigma0 > sigma1 {
        return Err(Error::Argument("transport needs sigma0 <= sigma1".into()));
    }
    let mut t = RMat::identity(p.h_dim);
    if sigma0 == sigma1 {
        return Ok(t);
    }
    let m = g.m as f64;
    let mut breaks = vec![sigma0];
    let first = (sigma0 * m) as usize + 1;
    for k in first..g.m {
        let s = k as f64 / m;
        if s >= sigma1 {
            break;
        }
        breaks.push(s);
    }
    breaks.push(sigma1);
    for w in breaks.windows(2) {
        let a = g.point_at(w[0]);
        let b = g.point_at(w[1]);
        t = p.step(&a, &b)?.mul(&t);
    }
    Ok(t)
}

/// `Σ_i T(σ_i → 1) v_i` for insertions sorted by position.
pub fn v_form<F: Fn(&[f64], &[f64]) -> RMat>(
    p: &TransportProblem<F>,
    g: &SampledLoop,
    insertions: &[(f64, Vec<f64>)],
) -> Result<Vec<f64>> {
    if insertions.windows(2).any(|w| w[0].0 > w[1].0) {
        return Err(Error::Argument("insertion positions must be sorted".into()));
    }
    let mut acc = vec![0.0; p.h_dim];
    let mut at = match insertions.first() {
        Some((s, _)) => *s,
        None => return Ok(acc),
    };
    for (s, v) in insertions {
        if v.len() != p.h_dim {
            return Err(Error::Shape("inserted vector has the wrong dimension".into()));
        }
        acc = transport(p, g, at, *s)?.mul_vec(&acc);
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x;
        }
        at = *s;
    }
    Ok(transport(p, g, at, 1.0)?.mul_vec(&acc))
}

/// `A0(γ; δγ) = ∫_0^1 T(σ → 1) B(γ(σ))(γ̇(σ), δγ(σ)) dσ`.
pub fn connection_a0<F, B>(p: &TransportProblem<F>, b: &B, g: &SampledLoop, dg: &LoopTangent) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &[f64]) -> RMat,
    B: Fn(&[f64], &[f64], &[f64]) -> Vec<f64>,
{
    if dg.m != g.m {
        return Err(Error::Shape(format!("tangent has {} samples, loop has {}", dg.m, g.m)));
    }
    check_loop_dim(p, g, dg.n)?;
    let steps = p.cell_steps(g)?;
    let m = g.m;
    let h = 1.0 / m as f64;
    // Backward sweep: r = T(t_k → 1).
    let mut r = RMat::identity(p.h_dim);
    let mut acc = vec![0.0; p.h_dim];
    for k in (0..=m).rev() {
        if k < m {
            r = r.mul(&steps[k]);
        }
        let pt = g.point(k as isize);
        let vel = g.velocity(k as isize);
        let val = b(&pt, &vel, dg.at(k));
        if val.len() != p.h_dim {
            return Err(Error::Shape("curving callback returned the wrong dimension".into()));
        }
        let w = if k == 0 || k == m { 0.5 * h } else { h };
        for (a, x) in acc.iter_mut().zip(r.mul_vec(&val)) {
            *a += w * x;
        }
    }
    check_finite(&acc, "A0")?;
    Ok(acc)
}

/// `∫_0^1 A0(γ_τ; ∂_τ γ_τ) dτ`, defined for abelian `h` only.
pub fn surface_holonomy<F, B>(p: &TransportProblem<F>, b: &B, f: &SampledSurface) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &[f64]) -> RMat,
    B: Fn(&[f64], &[f64], &[f64]) -> Vec<f64>,
{
    if !p.h_abelian {
        return Err(Error::Unsupported("surface holonomy needs an abelian target h".into()));
    }
    let mut acc = vec![0.0; p.h_dim];
    let w = 1.0 / f.p as f64;
    for j in 0..f.p {
        let a0 = connection_a0(p, b, &f.loop_at(j), &f.tau_derivative(j))?;
        for (a, x) in acc.iter_mut().zip(a0) {
            *a += w * x;
        }
    }
    Ok(acc)
}

/// A polynomial form with coefficients converted to `f64` once.
#[derive(Clone, Debug)]
pub struct NumericForm {
    value_dim: usize,
    terms: Vec<(Vec<usize>, usize, Vec<u32>, f64)>,
}

impl NumericForm {
    pub fn new(form: &PolyForm) -> Self {
        NumericForm {
            value_dim: form.value_dim(),
            terms: form
                .terms()
                .map(|(k, c)| (k.dx.clone(), k.value, k.exps.clone(), to_f64(c)))
                .collect(),
        }
    }

    /// Evaluates the degree-`vs.len()` part on the given vectors.
    pub fn eval(&self, point: &[f64], vs: &[&[f64]]) -> Vec<f64> {
        let mut out = vec![0.0; self.value_dim];
        for (dx, value, exps, c) in &self.terms {
            if dx.len() != vs.len() {
                continue;
            }
            let mut mono = *c;
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    mono *= x;
                }
            }
            out[*value] += mono * minor(vs, dx);
        }
        out
    }
}

fn minor(vs: &[&[f64]], idx: &[usize]) -> f64 {
    match idx.len() {
        0 => 1.0,
        1 => vs[0][idx[0]],
        2 => vs[0][idx[0]] * vs[1][idx[1]] - vs[0][idx[1]] * vs[1][idx[0]],
        _ => {
            let mut acc = 0.0;
            for (pos, &i) in idx.iter().enumerate() {
                let rest: Vec<usize> = idx.iter().copied().filter(|&j| j != i).collect();
                let s = if pos % 2 == 0 { 1.0 } else { -1.0 };
                acc += s * vs[0][i] * minor(&vs[1..], &rest);
            }
            acc
        }
    }
}

/// Numeric fields of an MC pair over a two-term algebra.
#[derive(Clone, Debug)]
pub struct PairFields {
    a: NumericForm,
    b: NumericForm,
    action: Vec<RMat>,
    h_dim: usize,
    h_abelian: bool,
}

impl PairFields {
    pub fn new(pair: &MCPair, linf: &TwoTermLinf) -> Result<Self> {
        pair.validate(linf)?;
        let m = linf.dm1();
        let action = linf
            .action()
            .iter()
            .map(|a| {
                let mut r = RMat::zeros(m, m);
                for i in 0..m {
                    for j in 0..m {
                        r[(i, j)] = to_f64(&a[(i, j)]);
                    }
                }
                r
            })
            .collect();
        Ok(PairFields {
            a: NumericForm::new(&pair.a),
            b: NumericForm::new(&pair.b),
            action,
            h_dim: m,
            h_abelian: h_is_abelian(linf),
        })
    }

    pub fn problem(&self) -> TransportProblem<impl Fn(&[f64], &[f64]) -> RMat + '_> {
        TransportProblem::new(self.h_dim, move |pt: &[f64], v: &[f64]| {
            let x = self.a.eval(pt, &[v]);
            let mut r = RMat::zeros(self.h_dim, self.h_dim);
            for (xi, a) in x.iter().zip(&self.action) {
                if *xi != 0.0 {
                    r = r.add(&a.scale(*xi));
                }
            }
            r
        })
        .with_abelian_target(self.h_abelian)
    }

    pub fn curving(&self) -> impl Fn(&[f64], &[f64], &[f64]) -> Vec<f64> + '_ {
        move |pt: &[f64], u: &[f64], v: &[f64]| self.b.eval(pt, &[u, v])
    }
}

/// Whether the bracket `[h, k] = ρ(l1 h) k` on `L_{-1}` vanishes.
pub fn h_is_abelian(linf: &TwoTermLinf) -> bool {
    let m = linf.dm1();
    (0..m).all(|i| {
        let x = linf.l1().column(i);
        linf.rho(&x).is_zero()
    })
}

/// Holonomies over a family of surfaces together with the exact MC verdict.
#[derive(Clone, Debug)]
pub struct FlatnessReport {
    pub is_mc: bool,
    pub holonomies: Vec<Vec<f64>>,
}

pub fn flatness_residual(
    pair: &MCPair,
    linf: &TwoTermLinf,
    norm: L3Normalization,
    family: &[SampledSurface],
) -> Result<FlatnessReport> {
    let is_mc = crate::forms::is_maurer_cartan(pair, linf, norm)?.is_mc;
    let fields = PairFields::new(pair, linf)?;
    let problem = fields.problem();
    let b = fields.curving();
    let holonomies = family
        .iter()
        .map(|f| surface_holonomy(&problem, &b, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlatnessReport { is_mc, holonomies })
}
