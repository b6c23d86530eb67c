//! Small dense real matrices and the matrix exponential.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major dense `f64` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        RMat { rows: r, cols: c, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape("matrix data length does not match its shape".into()));
        }
        Ok(RMat { rows, cols, data })
    }

    /// `s · I`.
    pub fn scalar(n: usize, s: f64) -> Self {
        RMat::identity(n).scale(s)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn mul(&self, other: &RMat) -> RMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = RMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.data[i * self.cols + j] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &RMat) -> RMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RMat) -> RMat {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> RMat {
        RMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.data[i * self.cols + j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &RMat) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Scaling and squaring with a degree-18 Taylor polynomial.
    pub fn expm(&self) -> RMat {
        assert_eq!(self.rows, self.cols, "exponential of a non-square matrix");
        let n = self.rows;
        let norm = self.norm1();
        if norm == 0.0 {
            return RMat::identity(n);
        }
        let mut s = 0u32;
        let mut scaled = norm;
        while scaled > 0.5 && s < 64 {
            scaled *= 0.5;
            s += 1;
        }
        let mut factor = 1.0;
        for _ in 0..s {
            factor *= 0.5;
        }
        let x = self.scale(factor);
        // Horner form of Σ_{k≤18} x^k / k!.
        let mut acc = RMat::identity(n);
        for k in (1..=18).rev() {
            acc = RMat::identity(n).add(&x.mul(&acc).scale(1.0 / k as f64));
        }
        for _ in 0..s {
            acc = acc.mul(&acc);
        }
        acc
    }
}

impl Index<(usize, usize)> for RMat {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Central first-derivative stencils on a uniform periodic grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stencil {
    Second,
    Fourth,
    Sixth,
    #[default]
    Eighth,
}

impl Stencil {
    /// Weights `c_j` in `f'(t) ≈ (1/h) Σ_j c_j (f(t + jh) - f(t - jh))`.
    pub fn weights(self) -> &'static [f64] {
        match self {
            Stencil::Second => &[0.5],
            Stencil::Fourth => &[2.0 / 3.0, -1.0 / 12.0],
            Stencil::Sixth => &[3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0],
            Stencil::Eighth => &[4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0],
        }
    }

    pub fn order(self) -> usize {
        2 * self.weights().len()
    }

    pub fn from_order(order: usize) -> Option<Self> {
        match order {
            2 => Some(Stencil::Second),
            4 => Some(Stencil::Fourth),
            6 => Some(Stencil::Sixth),
            8 => Some(Stencil::Eighth),
            _ => None,
        }
    }
}
