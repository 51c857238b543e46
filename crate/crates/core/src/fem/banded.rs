//! Symmetric banded storage and its Cholesky factorization.

use crate::error::{Error, Result};

/// Lower band of a symmetric matrix: entry `(i, j)` with `i − bw ≤ j ≤ i`
/// lives at `i·(bw+1) + (i − j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSym {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedSym {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub(crate) fn from_raw(n: usize, bw: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * (bw + 1));
        Self { n, bw, data }
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        (i - j <= self.bw).then(|| i * (self.bw + 1) + (i - j))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `v` to the symmetric pair `(i, j)`, `(j, i)`.
    ///
    /// # Panics
    /// If `(i, j)` falls outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j).expect("entry outside band");
        self.data[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j).expect("entry outside band");
        self.data[k] = v;
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.data[i * (self.bw + 1)]
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!((self.n, self.bw), (other.n, other.bw), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect();
        Self {
            n: self.n,
            bw: self.bw,
            data,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[i * (self.bw + 1)..(i + 1) * (self.bw + 1)];
            y[i] += row[0] * x[i];
            for d in 1..=self.bw.min(i) {
                let j = i - d;
                y[i] += row[d] * x[j];
                y[j] += row[d] * x[i];
            }
        }
        y
    }

    /// `b − A·x` with every product and sum carried in doubled precision.
    pub fn residual(&self, b: &[f64], x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut hi = b.to_vec();
        let mut lo = vec![0.0; self.n];
        let mut acc = |i: usize, a: f64, v: f64| {
            let p = a * v;
            let pe = a.mul_add(v, -p);
            let s = hi[i] - p;
            let bb = s - hi[i];
            let se = (hi[i] - (s - bb)) + (-p - bb);
            hi[i] = s;
            lo[i] += se - pe;
        };
        for i in 0..self.n {
            let row = i * (self.bw + 1);
            acc(i, self.data[row], x[i]);
            for d in 1..=self.bw.min(i) {
                let j = i - d;
                acc(i, self.data[row + d], x[j]);
                acc(j, self.data[row + d], x[i]);
            }
        }
        hi.iter().zip(&lo).map(|(h, l)| h + l).collect()
    }

    /// Replaces rows and columns flagged in `fixed` by those of the identity.
    pub fn with_identity_rows(&self, fixed: &[bool]) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for d in 0..=self.bw.min(i) {
                let j = i - d;
                if fixed[i] || fixed[j] {
                    out.data[i * (self.bw + 1) + d] = if d == 0 { 1.0 } else { 0.0 };
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        for i in 0..self.n {
            for d in 0..=self.bw.min(i) {
                let v = self.data[i * (self.bw + 1) + d].abs();
                rows[i] += v;
                if d > 0 {
                    rows[i - d] += v;
                }
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn cholesky(&self) -> Result<BandedCholesky> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = self.data.clone();
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let jlo = j.saturating_sub(bw).max(lo);
                let mut s = l[i * w + (i - j)];
                for k in jlo..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::Singular(format!("non-positive pivot {s:e} at row {i}")));
                    }
                    l[i * w] = s.sqrt();
                } else {
                    l[i * w + (i - j)] = s / l[j * w];
                }
            }
        }
        Ok(BandedCholesky { n, bw, l })
    }
}

/// `A = L·Lᵀ` with `L` stored in the same band layout.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        assert_eq!(x.len(), n);
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[i * w + (i - k)] * x[k];
            }
            x[i] = s / self.l[i * w];
        }
        for i in (0..n).rev() {
            let s = x[i] / self.l[i * w];
            x[i] = s;
            for k in i.saturating_sub(bw)..i {
                x[k] -= self.l[i * w + (i - k)] * s;
            }
        }
    }
}
