//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;

use holonomy2_core::crossed::CrossedModule;
use holonomy2_core::forms::{MCPair, PolyForm, ValueSpace};
use holonomy2_core::lie::{LieAlgebra, LieModule};
use holonomy2_core::linf::TwoTermLinf;
use holonomy2_core::matrix::QMatrix;
use holonomy2_core::rational::{qr, Q};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sign of a permutation given as a list of distinct values.
pub fn perm_sign(v: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Dense alternating cochain stored on every ordered tuple of distinct indices.
#[derive(Clone, Debug, Default)]
pub struct DenseCochain {
    pub p: usize,
    pub dim_v: usize,
    pub values: HashMap<Vec<usize>, Vec<Q>>,
}

fn tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..p {
        let mut next = Vec::new();
        for t in &out {
            for i in 0..n {
                if !t.contains(&i) {
                    let mut u = t.clone();
                    u.push(i);
                    next.push(u);
                }
            }
        }
        out = next;
    }
    out
}

impl DenseCochain {
    pub fn get(&self, idx: &[usize]) -> Vec<Q> {
        self.values
            .get(idx)
            .cloned()
            .unwrap_or_else(|| vec![Q::zero(); self.dim_v])
    }

    /// Brute-force differential straight from the defining sum.
    pub fn d(&self, lie: &LieAlgebra, action: &[QMatrix]) -> DenseCochain {
        let n = lie.dim();
        let mut values = HashMap::new();
        for x in tuples(n, self.p + 1) {
            let mut acc = vec![Q::zero(); self.dim_v];
            for i in 0..=self.p {
                let mut rest = x.clone();
                let xi = rest.remove(i);
                let v = action[xi].mul_vec(&self.get(&rest));
                for (a, b) in acc.iter_mut().zip(v) {
                    if i % 2 == 0 {
                        *a += b;
                    } else {
                        *a -= b;
                    }
                }
            }
            for i in 0..=self.p {
                for j in (i + 1)..=self.p {
                    let rest: Vec<usize> = x
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != i && t != j)
                        .map(|(_, &v)| v)
                        .collect();
                    for k in 0..n {
                        let c = lie.c(x[i], x[j], k);
                        if c.is_zero() || rest.contains(&k) {
                            continue;
                        }
                        let mut t = vec![k];
                        t.extend(&rest);
                        for (a, b) in acc.iter_mut().zip(self.get(&t)) {
                            let term = c * b;
                            if (i + j) % 2 == 0 {
                                *a += term;
                            } else {
                                *a -= term;
                            }
                        }
                    }
                }
            }
            values.insert(x, acc);
        }
        DenseCochain {
            p: self.p + 1,
            dim_v: self.dim_v,
            values,
        }
    }

    /// Unit cochain on the increasing tuple `s` with value `e_v`, extended alternatingly.
    pub fn unit(n: usize, s: &[usize], dim_v: usize, v: usize) -> DenseCochain {
        let mut values = HashMap::new();
        for t in tuples(n, s.len()) {
            let mut sorted = t.clone();
            sorted.sort();
            if sorted == s {
                let mut val = vec![Q::zero(); dim_v];
                val[v] = Q::from_integer(perm_sign(&t).into());
                values.insert(t, val);
            }
        }
        DenseCochain { p: s.len(), dim_v, values }
    }

    /// Coordinates on increasing tuples in lexicographic order.
    pub fn to_vec(&self, n: usize) -> Vec<Q> {
        let mut out = Vec::new();
        for t in tuples(n, self.p) {
            if t.windows(2).all(|w| w[0] < w[1]) {
                out.extend(self.get(&t));
            }
        }
        out
    }
}

pub fn increasing(n: usize, p: usize) -> Vec<Vec<usize>> {
    tuples(n, p)
        .into_iter()
        .filter(|t| t.windows(2).all(|w| w[0] < w[1]))
        .collect()
}

/// Oracle matrix of `d: C^p -> C^{p+1}` assembled column by column from unit cochains.
pub fn oracle_d_matrix(lie: &LieAlgebra, action: &[QMatrix], dim_v: usize, p: usize) -> QMatrix {
    let n = lie.dim();
    let mut cols = Vec::new();
    for s in increasing(n, p) {
        for v in 0..dim_v {
            cols.push(DenseCochain::unit(n, &s, dim_v, v).d(lie, action).to_vec(n));
        }
    }
    let rows = increasing(n, p + 1).len() * dim_v;
    QMatrix::from_columns(rows, &cols).unwrap()
}

/// Brute-force Jacobi residuals over every index triple.
pub fn jacobi_ok(lie: &LieAlgebra) -> bool {
    let n = lie.dim();
    let e = |i: usize| holonomy2_core::matrix::unit_vector(n, i);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = lie.bracket(&lie.bracket(&e(i), &e(j)), &e(k));
                let b = lie.bracket(&lie.bracket(&e(j), &e(k)), &e(i));
                let c = lie.bracket(&lie.bracket(&e(k), &e(i)), &e(j));
                if a.iter().zip(&b).zip(&c).any(|((x, y), z)| !(x + y + z).is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

pub const TAU: f64 = 2.0 * PI;

/// `g = gl(1)` acting on `h = R` by multiplication, `mu = 0`.
pub fn gl1() -> TwoTermLinf {
    let g = LieAlgebra::abelian(1);
    let v = LieModule::new(1, vec![QMatrix::from_i64(&[&[1]])]).unwrap();
    TwoTermLinf::from_crossed(&CrossedModule::from_module(&g, &v)).unwrap()
}

pub fn gl1_pair(c: (i64, i64), beta: (i64, i64)) -> MCPair {
    MCPair {
        a: PolyForm::zero(2, ValueSpace::L0, 1).with_term(qr(c.0, c.1), &[0, 0], &[0], 0),
        b: PolyForm::zero(2, ValueSpace::Lm1, 1).with_term(qr(beta.0, beta.1), &[0, 0], &[0, 1], 0),
    }
}

/// A free torus map in R^2 whose base point moves with `τ`.
pub fn wobbly_torus(t: f64, s: f64) -> Vec<f64> {
    let rad = 1.0 + 0.3 * (TAU * t).cos();
    vec![rad * (TAU * s).cos() + 0.2 * (TAU * t).sin(), rad * (TAU * s).sin() + 0.1 * (TAU * t).cos()]
}

pub fn wobbly_derivs(t: f64, s: f64) -> ([f64; 2], [f64; 2]) {
    let rad = 1.0 + 0.3 * (TAU * t).cos();
    let drad = -0.3 * TAU * (TAU * t).sin();
    let fs = [-rad * TAU * (TAU * s).sin(), rad * TAU * (TAU * s).cos()];
    let ft = [
        drad * (TAU * s).cos() + 0.2 * TAU * (TAU * t).cos(),
        drad * (TAU * s).sin() - 0.1 * TAU * (TAU * t).sin(),
    ];
    (fs, ft)
}

/// `∬ exp(c (x(τ, 0) - x(τ, σ))) β det(f_σ, f_τ)` by a fine periodic trapezoid.
pub fn gl1_oracle(c: f64, beta: f64, n: usize) -> f64 {
    let mut acc = 0.0;
    for j in 0..n {
        let t = j as f64 / n as f64;
        let x0 = wobbly_torus(t, 0.0)[0];
        for k in 0..n {
            let s = k as f64 / n as f64;
            let (fs, ft) = wobbly_derivs(t, s);
            let w = (c * (x0 - wobbly_torus(t, s)[0])).exp();
            acc += w * beta * (fs[0] * ft[1] - fs[1] * ft[0]);
        }
    }
    acc / (n * n) as f64
}

