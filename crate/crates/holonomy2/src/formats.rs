//! JSON and flat binary file formats.
//!
//! Rationals are strings, `"p"` or `"p/q"`. Matrices are lists of rows.
//! Every loader checks shapes against the dimensions declared in the same
//! file and reports mismatches as [`CliError::Schema`].

use std::collections::BTreeMap;
use std::path::Path;

use holonomy2_core::cochain::{Cochain, ShortExactSequence};
use holonomy2_core::crossed::{CrossedModule, ElementaryEquivalence};
use holonomy2_core::forms::{MCPair, PolyForm, ValueSpace};
use holonomy2_core::hochschild::{FinDGA, GradedAlgebra};
use holonomy2_core::lie::{LieAlgebra, LieModule};
use holonomy2_core::linf::TwoTermLinf;
use holonomy2_core::loopspace::SampledSurface;
use holonomy2_core::rational::{format_q, parse};
use holonomy2_core::simplicial::FinSimpSet;
use holonomy2_core::{QMatrix, Q};
use num_traits::Zero;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{CliError, Result};

pub type Matrix = Vec<Vec<String>>;

pub fn q_in(s: &str, what: &str) -> Result<Q> {
    parse(s).map_err(|e| CliError::schema(what, e))
}

fn qs_in(v: &[String], what: &str) -> Result<Vec<Q>> {
    v.iter().map(|s| q_in(s, what)).collect()
}

fn qs_out(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

pub fn matrix_in(m: &Matrix, rows: usize, cols: usize, what: &str) -> Result<QMatrix> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(CliError::Schema(format!("{what} must be a {rows}x{cols} matrix")));
    }
    let rows: Vec<Vec<Q>> = m.iter().map(|r| qs_in(r, what)).collect::<Result<_>>()?;
    QMatrix::from_rows_shaped(&rows, m.len(), cols).map_err(|e| CliError::schema(what, e))
}

pub fn matrix_out(m: &QMatrix) -> Matrix {
    m.to_rows().iter().map(|r| qs_out(r)).collect()
}

fn matrices_in(ms: &[Matrix], count: usize, rows: usize, cols: usize, what: &str) -> Result<Vec<QMatrix>> {
    if ms.len() != count {
        return Err(CliError::Schema(format!("{what} must list {count} matrices")));
    }
    ms.iter().map(|m| matrix_in(m, rows, cols, what)).collect()
}

/// `lie_algebra.json`: `c[i][j][k]` is the coefficient of `e_k` in `[e_i, e_j]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    pub c: Vec<Vec<Vec<String>>>,
}

impl LieAlgebraFile {
    pub fn from_lie(l: &LieAlgebra) -> Self {
        let n = l.dim();
        let c = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| format_q(l.c(i, j, k))).collect()).collect())
            .collect();
        LieAlgebraFile { dim: n, basis: l.basis_names().to_vec(), c }
    }

    pub fn to_lie(&self) -> Result<LieAlgebra> {
        let n = self.dim;
        if self.basis.len() != n
            || self.c.len() != n
            || self.c.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n))
        {
            return Err(CliError::Schema(format!("lie algebra of dim {n} needs {n} names and an {n}x{n}x{n} array")));
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for row in &self.c {
            for v in row {
                flat.extend(qs_in(v, "structure constant")?);
            }
        }
        LieAlgebra::new(n, self.basis.clone(), flat).map_err(|e| CliError::schema("lie algebra", e))
    }
}

/// A module: one `dim x dim` matrix per basis vector of the acting algebra.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub dim: usize,
    pub action: Vec<Matrix>,
}

impl ModuleFile {
    pub fn from_module(m: &LieModule) -> Self {
        ModuleFile { dim: m.dim(), action: m.action().iter().map(matrix_out).collect() }
    }

    pub fn to_module(&self, lie: &LieAlgebra, what: &str) -> Result<LieModule> {
        let a = matrices_in(&self.action, lie.dim(), self.dim, self.dim, what)?;
        LieModule::new(self.dim, a).map_err(|e| CliError::schema(what, e))
    }
}

/// `crossed_module.json`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CrossedModuleFile {
    pub h: LieAlgebraFile,
    pub g: LieAlgebraFile,
    /// `dim g x dim h`.
    pub mu: Matrix,
    /// One `dim h x dim h` matrix per basis vector of `g`.
    pub action: Vec<Matrix>,
}

impl CrossedModuleFile {
    pub fn from_crossed(x: &CrossedModule) -> Self {
        CrossedModuleFile {
            h: LieAlgebraFile::from_lie(x.h()),
            g: LieAlgebraFile::from_lie(x.g()),
            mu: matrix_out(x.mu()),
            action: x.action().iter().map(matrix_out).collect(),
        }
    }

    pub fn to_crossed(&self) -> Result<CrossedModule> {
        let (h, g) = (self.h.to_lie()?, self.g.to_lie()?);
        let (dh, dg) = (h.dim(), g.dim());
        let mu = matrix_in(&self.mu, dg, dh, "mu")?;
        let action = matrices_in(&self.action, dg, dh, dh, "action")?;
        CrossedModule::new(h, g, mu, action).map_err(|e| CliError::schema("crossed module", e))
    }
}

/// `0 -> sub -> mid -> quot -> 0` over `algebra`, with an optional
/// `quot`-valued 2-cocycle in the lexicographic cochain basis.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub algebra: LieAlgebraFile,
    pub sub: ModuleFile,
    pub mid: ModuleFile,
    pub quot: ModuleFile,
    pub inc: Matrix,
    pub proj: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
}

impl SequenceFile {
    pub fn from_sequence(ses: &ShortExactSequence, alpha: Option<&Cochain>) -> Self {
        SequenceFile {
            algebra: LieAlgebraFile::from_lie(&ses.algebra),
            sub: ModuleFile::from_module(&ses.sub),
            mid: ModuleFile::from_module(&ses.mid),
            quot: ModuleFile::from_module(&ses.quot),
            inc: matrix_out(&ses.inc),
            proj: matrix_out(&ses.proj),
            alpha: alpha.map(|a| qs_out(a.coeffs())),
        }
    }

    pub fn to_sequence(&self) -> Result<(ShortExactSequence, Cochain)> {
        let algebra = self.algebra.to_lie()?;
        let sub = self.sub.to_module(&algebra, "sub")?;
        let mid = self.mid.to_module(&algebra, "mid")?;
        let quot = self.quot.to_module(&algebra, "quot")?;
        let inc = matrix_in(&self.inc, mid.dim(), sub.dim(), "inc")?;
        let proj = matrix_in(&self.proj, quot.dim(), mid.dim(), "proj")?;
        let n = algebra.dim();
        let alpha = match &self.alpha {
            Some(a) => Cochain::from_coeffs(2, n, quot.dim(), qs_in(a, "alpha")?)
                .map_err(|e| CliError::schema("alpha", e))?,
            None => Cochain::zero(2, n, quot.dim()),
        };
        Ok((ShortExactSequence { algebra, sub, mid, quot, inc, proj }, alpha))
    }
}

/// Candidate elementary equivalence `(phi: h -> h', psi: g -> g')`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceFile {
    pub phi: Matrix,
    pub psi: Matrix,
}

impl EquivalenceFile {
    pub fn from_equivalence(e: &ElementaryEquivalence) -> Self {
        EquivalenceFile { phi: matrix_out(&e.phi), psi: matrix_out(&e.psi) }
    }

    pub fn to_equivalence(&self, x: &CrossedModule, y: &CrossedModule) -> Result<ElementaryEquivalence> {
        Ok(ElementaryEquivalence {
            phi: matrix_in(&self.phi, y.h().dim(), x.h().dim(), "phi")?,
            psi: matrix_in(&self.psi, y.g().dim(), x.g().dim(), "psi")?,
        })
    }
}

/// `linf2.json`: `l2` holds the bracket on `L_0` (as in `lie_algebra.json`)
/// and the action on `L_{-1}`; `l3[i][j][k]` is a vector in `L_{-1}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LinfFile {
    pub d0: usize,
    pub dm1: usize,
    pub l1: Matrix,
    pub l2: L2File,
    pub l3: Vec<Vec<Vec<Vec<String>>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct L2File {
    pub bracket: Vec<Vec<Vec<String>>>,
    pub action: Vec<Matrix>,
}

impl LinfFile {
    pub fn from_linf(t: &TwoTermLinf) -> Self {
        let (n, m) = (t.d0(), t.dm1());
        let b = t.bracket_constants();
        let bracket = (0..n)
            .map(|i| (0..n).map(|j| qs_out(&b[(i * n + j) * n..(i * n + j + 1) * n])).collect())
            .collect();
        let l3 = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| qs_out(t.l3_basis(i, j, k))).collect()).collect())
            .collect();
        debug_assert!(t.l3_basis(0, 0, 0).len() == m || n == 0);
        LinfFile {
            d0: n,
            dm1: m,
            l1: matrix_out(t.l1()),
            l2: L2File { bracket, action: t.action().iter().map(matrix_out).collect() },
            l3,
        }
    }

    pub fn to_linf(&self) -> Result<TwoTermLinf> {
        let (n, m) = (self.d0, self.dm1);
        let l1 = matrix_in(&self.l1, n, m, "l1")?;
        let cube = |c: &Vec<Vec<Vec<String>>>| c.len() == n && c.iter().all(|r| r.len() == n && r.iter().all(|v| v.len() == n));
        if !cube(&self.l2.bracket) {
            return Err(CliError::Schema(format!("l2 bracket must be {n}x{n}x{n}")));
        }
        let bracket = self.l2.bracket.iter().flatten().map(|v| qs_in(v, "l2")).collect::<Result<Vec<_>>>()?.concat();
        let action = matrices_in(&self.l2.action, n, m, m, "l2 action")?;
        if self.l3.len() != n
            || self.l3.iter().any(|a| a.len() != n || a.iter().any(|b| b.len() != n || b.iter().any(|v| v.len() != m)))
        {
            return Err(CliError::Schema(format!("l3 must be {n}x{n}x{n}x{m}")));
        }
        let l3 = self.l3.iter().flatten().flatten().map(|v| qs_in(v, "l3")).collect::<Result<Vec<_>>>()?.concat();
        TwoTermLinf::new(n, m, l1, bracket, action, l3).map_err(|e| CliError::schema("linf", e))
    }
}

/// Terms are `[exponents, form indices, value index, coefficient]`.
pub type TermFile = (Vec<u32>, Vec<usize>, usize, String);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    pub terms: Vec<TermFile>,
}

impl FormFile {
    pub fn from_form(f: &PolyForm) -> Self {
        FormFile { terms: f.terms().map(|(k, c)| (k.exps.clone(), k.dx.clone(), k.value, format_q(c))).collect() }
    }

    pub fn to_form(&self, chart_dim: usize, space: ValueSpace, value_dim: usize, what: &str) -> Result<PolyForm> {
        let mut f = PolyForm::zero(chart_dim, space, value_dim);
        for (exps, dx, value, c) in &self.terms {
            f.add_term(q_in(c, what)?, exps, dx, *value).map_err(|e| CliError::schema(what, e))?;
        }
        Ok(f)
    }
}

/// `mc_pair.json`: a pair of forms together with its target algebra.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct McPairFile {
    pub chart_dim: usize,
    pub linf: LinfFile,
    pub a: FormFile,
    pub b: FormFile,
}

impl McPairFile {
    pub fn from_pair(p: &MCPair, t: &TwoTermLinf) -> Self {
        McPairFile {
            chart_dim: p.a.chart_dim(),
            linf: LinfFile::from_linf(t),
            a: FormFile::from_form(&p.a),
            b: FormFile::from_form(&p.b),
        }
    }

    pub fn to_pair(&self) -> Result<(MCPair, TwoTermLinf)> {
        let t = self.linf.to_linf()?;
        let pair = MCPair {
            a: self.a.to_form(self.chart_dim, ValueSpace::L0, t.d0(), "A")?,
            b: self.b.to_form(self.chart_dim, ValueSpace::Lm1, t.dm1(), "B")?,
        };
        pair.validate(&t).map_err(|e| CliError::schema("mc pair", e))?;
        Ok((pair, t))
    }
}

/// `dga.json`: `table[a][b]` is the product `a b` and `d[a]` the differential,
/// both as sparse maps from basis names to coefficients.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DgaFile {
    pub basis: Vec<String>,
    pub degrees: Vec<i64>,
    pub unit: String,
    #[serde(default)]
    pub commutative: bool,
    pub table: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
    #[serde(default)]
    pub d: BTreeMap<String, BTreeMap<String, String>>,
}

impl DgaFile {
    pub fn from_dga(a: &FinDGA) -> Self {
        let names = a.names();
        let n = a.dim();
        let mult = a.mult_dense();
        let d = a.d_matrix();
        let sparse = |v: &mut dyn Iterator<Item = (usize, Q)>| -> BTreeMap<String, String> {
            v.filter(|(_, c)| !c.is_zero()).map(|(i, c)| (names[i].clone(), format_q(&c))).collect()
        };
        let mut table = BTreeMap::new();
        for x in 0..n {
            let mut row = BTreeMap::new();
            for y in 0..n {
                let e = sparse(&mut (0..n).map(|z| (z, mult[(x * n + y) * n + z].clone())));
                if !e.is_empty() {
                    row.insert(names[y].clone(), e);
                }
            }
            if !row.is_empty() {
                table.insert(names[x].clone(), row);
            }
        }
        let mut dd = BTreeMap::new();
        for x in 0..n {
            let e = sparse(&mut (0..n).map(|z| (z, d[(z, x)].clone())));
            if !e.is_empty() {
                dd.insert(names[x].clone(), e);
            }
        }
        DgaFile {
            basis: names.to_vec(),
            degrees: a.degrees().to_vec(),
            unit: names[a.unit_index()].clone(),
            commutative: a.is_commutative(),
            table,
            d: dd,
        }
    }

    pub fn to_dga(&self) -> Result<FinDGA> {
        let n = self.basis.len();
        if self.degrees.len() != n {
            return Err(CliError::Schema("dga needs one degree per basis element".into()));
        }
        let index: BTreeMap<&str, usize> = self.basis.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != n {
            return Err(CliError::Schema("dga basis names must be distinct".into()));
        }
        let idx = |s: &str| index.get(s).copied().ok_or_else(|| CliError::Schema(format!("dga: unknown basis element {s:?}")));
        let mut mult = vec![Q::zero(); n * n * n];
        for (a, row) in &self.table {
            for (b, e) in row {
                let (a, b) = (idx(a)?, idx(b)?);
                for (c, v) in e {
                    mult[(a * n + b) * n + idx(c)?] = q_in(v, "dga table")?;
                }
            }
        }
        let mut d = QMatrix::zeros(n, n);
        for (a, e) in &self.d {
            let a = idx(a)?;
            for (c, v) in e {
                d[(idx(c)?, a)] = q_in(v, "dga d")?;
            }
        }
        FinDGA::new(self.basis.clone(), self.degrees.clone(), mult, &d, idx(&self.unit)?, self.commutative)
            .map_err(|e| CliError::schema("dga", e))
    }
}

/// `simpset.json`: `faces[k][i][x]` is `d_i` of simplex `x` at level `k`,
/// `degeneracies[k][j][x]` is `s_j` of simplex `x` at level `k`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimpSetFile {
    pub levels: Vec<usize>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
    pub basepoints: Vec<usize>,
}

impl SimpSetFile {
    pub fn from_simpset(y: &FinSimpSet) -> Self {
        SimpSetFile {
            levels: y.sizes().to_vec(),
            faces: y.faces().to_vec(),
            degeneracies: y.degeneracies().to_vec(),
            basepoints: y.basepoints().to_vec(),
        }
    }

    pub fn to_simpset(&self) -> Result<FinSimpSet> {
        FinSimpSet::new(self.levels.clone(), self.faces.clone(), self.degeneracies.clone(), self.basepoints.clone())
            .map_err(|e| CliError::schema("simplicial set", e))
    }
}

/// Sampled surface in JSON: `grid` is row-major `p x m x n`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub p: usize,
    pub m: usize,
    pub n: usize,
    pub grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_winding: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_winding: Option<Vec<f64>>,
}

/// Flat binary array: `u64` rank, `u64` dims, then `f64` data, all little endian.
pub fn read_binary(bytes: &[u8]) -> Result<(Vec<usize>, Vec<f64>)> {
    let bad = |m: &str| CliError::Schema(format!("binary array: {m}"));
    let mut words = bytes.chunks_exact(8);
    if bytes.len() % 8 != 0 {
        return Err(bad("length is not a multiple of 8"));
    }
    let mut next = || words.next().map(|w| u64::from_le_bytes(w.try_into().unwrap()));
    let rank = next().ok_or_else(|| bad("missing header"))? as usize;
    if rank == 0 || rank > 8 {
        return Err(bad("rank must be between 1 and 8"));
    }
    let dims = (0..rank)
        .map(|_| next().map(|d| d as usize).ok_or_else(|| bad("truncated header")))
        .collect::<Result<Vec<_>>>()?;
    let count = dims.iter().try_fold(1usize, |a, &d| a.checked_mul(d)).ok_or_else(|| bad("dims overflow"))?;
    let data: Vec<f64> = bytes[8 * (rank + 1)..].chunks_exact(8).map(|w| f64::from_le_bytes(w.try_into().unwrap())).collect();
    if data.len() != count {
        return Err(bad(&format!("header promises {count} values, found {}", data.len())));
    }
    Ok((dims, data))
}

pub fn write_binary(dims: &[usize], data: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 * (1 + dims.len() + data.len()));
    out.extend((dims.len() as u64).to_le_bytes());
    for &d in dims {
        out.extend((d as u64).to_le_bytes());
    }
    for &x in data {
        out.extend(x.to_le_bytes());
    }
    out
}

/// Surface from raw bytes: JSON when the file starts with `{`, binary otherwise.
/// Winding offsets given here override those stored in a JSON file.
pub fn surface_from_bytes(bytes: &[u8], tau: Option<Vec<f64>>, sigma: Option<Vec<f64>>) -> Result<SampledSurface> {
    let (p, m, n, grid, t0, s0) = if bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{') {
        let f: SurfaceFile = from_json(bytes, "surface")?;
        (f.p, f.m, f.n, f.grid, f.tau_winding, f.sigma_winding)
    } else {
        let (dims, data) = read_binary(bytes)?;
        if dims.len() != 3 {
            return Err(CliError::Schema("binary surface must have dims [p, m, n]".into()));
        }
        (dims[0], dims[1], dims[2], data, None, None)
    };
    let s = SampledSurface::new(p, m, n, grid).map_err(|e| CliError::schema("surface", e))?;
    let tau = tau.or(t0).unwrap_or_else(|| vec![0.0; n]);
    let sigma = sigma.or(s0).unwrap_or_else(|| vec![0.0; n]);
    s.with_windings(tau, sigma).map_err(|e| CliError::schema("surface windings", e))
}

pub fn from_json<T: DeserializeOwned>(bytes: &[u8], what: &str) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| CliError::schema(what, e))
}

/// Reads a file, keeping the raw bytes for the input digest.
pub fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
