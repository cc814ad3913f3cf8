//! Small dense linear algebra: packed symmetric matrices and Gauss-Jordan
//! inversion. Dimensions here are the manifold dimension (rarely above ten),
//! so simplicity and determinism beat asymptotics.

use alloc::vec;
use alloc::vec::Vec;

/// Index into a packed lower triangle; accepts either argument order.
pub fn packed_index(i: usize, j: usize) -> usize {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

/// Number of packed entries of a symmetric `n x n` matrix.
pub fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Symmetric matrix stored as its lower triangle, row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMat {
    n: usize,
    data: Vec<f64>,
}

impl SymMat {
    pub fn zeros(n: usize) -> SymMat {
        SymMat { n, data: vec![0.0; packed_len(n)] }
    }

    /// Builds from `f(i, j)` evaluated once per packed entry (`j <= i`).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> SymMat {
        let mut m = SymMat::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.data[packed_index(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[packed_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[packed_index(i, j)] = v;
    }

    pub fn packed(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn add(&self, o: &SymMat) -> SymMat {
        debug_assert_eq!(self.n, o.n);
        SymMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &SymMat) -> SymMat {
        debug_assert_eq!(self.n, o.n);
        SymMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: f64) -> SymMat {
        SymMat { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }
}

/// Gauss-Jordan inversion with partial pivoting on a row-major matrix.
/// Returns the determinant and, when it is nonzero, the inverse.
pub fn invert_dense(a: &[f64], n: usize) -> (f64, Option<Vec<f64>>) {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[pivot * n + col].abs() {
                pivot = row;
            }
        }
        let p = m[pivot * n + col];
        if p == 0.0 {
            return (0.0, None);
        }
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= p;
        let s = 1.0 / p;
        for k in 0..n {
            m[col * n + k] *= s;
            inv[col * n + k] *= s;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = m[row * n + col];
            if factor == 0.0 {
                continue;
            }
            for k in 0..n {
                m[row * n + k] -= factor * m[col * n + k];
                inv[row * n + k] -= factor * inv[col * n + k];
            }
        }
    }
    (det, Some(inv))
}
