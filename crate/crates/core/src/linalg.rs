//! Householder QR for small dense least-squares problems.

/// Thin QR factorization of an n×k matrix (n ≥ k), stored column-major.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    n: usize,
    k: usize,
    /// Householder vectors below the diagonal, R on and above it.
    packed: Vec<Vec<f64>>,
    /// Leading coefficient of each reflector.
    betas: Vec<f64>,
    r_diag: Vec<f64>,
}

impl HouseholderQr {
    /// Factorizes the matrix given as `columns` (each of length n).
    pub fn new(columns: &[Vec<f64>]) -> Self {
        let k = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        let mut a: Vec<Vec<f64>> = columns.to_vec();
        let mut betas = vec![0.0; k];
        let mut r_diag = vec![0.0; k];

        for j in 0..k.min(n) {
            let norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                r_diag[j] = 0.0;
                betas[j] = 0.0;
                continue;
            }
            let alpha = if a[j][j] > 0.0 { -norm } else { norm };
            // v = x - alpha e1, stored in place
            a[j][j] -= alpha;
            let vtv: f64 = a[j][j..].iter().map(|v| v * v).sum();
            let beta = if vtv > 0.0 { 2.0 / vtv } else { 0.0 };
            betas[j] = beta;
            r_diag[j] = alpha;
            let (head, tail) = a.split_at_mut(j + 1);
            let v = &head[j][j..];
            for col in tail.iter_mut() {
                let dot: f64 = v.iter().zip(&col[j..]).map(|(x, y)| x * y).sum();
                let s = beta * dot;
                for (c, vi) in col[j..].iter_mut().zip(v) {
                    *c -= s * vi;
                }
            }
        }
        Self {
            n,
            k,
            packed: a,
            betas,
            r_diag,
        }
    }

    pub fn r_diagonal(&self) -> &[f64] {
        &self.r_diag
    }

    /// Entry (i, j) of R for i ≤ j.
    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.r_diag[i]
        } else {
            self.packed[j][i]
        }
    }

    /// Computes Qᵀ·y.
    pub fn qt_mul(&self, y: &[f64]) -> Vec<f64> {
        let mut out = y.to_vec();
        for j in 0..self.k.min(self.n) {
            let beta = self.betas[j];
            if beta == 0.0 {
                continue;
            }
            let v = &self.packed[j][j..];
            let dot: f64 = v.iter().zip(&out[j..]).map(|(a, b)| a * b).sum();
            let s = beta * dot;
            for (o, vi) in out[j..].iter_mut().zip(v) {
                *o -= s * vi;
            }
        }
        out
    }

    /// Least-squares solution of min ‖Ax − y‖. Assumes full column rank.
    pub fn solve(&self, y: &[f64]) -> Vec<f64> {
        let qty = self.qt_mul(y);
        let mut x = vec![0.0; self.k];
        for i in (0..self.k).rev() {
            let mut acc = qty[i];
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                acc -= self.r(i, j) * xj;
            }
            x[i] = acc / self.r(i, i);
        }
        x
    }

    /// Inverse of the upper-triangular R factor, row-major k×k.
    #[allow(clippy::needless_range_loop)]
    pub fn r_inverse(&self) -> Vec<Vec<f64>> {
        let k = self.k;
        let mut inv = vec![vec![0.0; k]; k];
        // solve R X = I column by column
        for col in 0..k {
            for i in (0..=col).rev() {
                let mut acc = if i == col { 1.0 } else { 0.0 };
                for j in (i + 1)..=col {
                    acc -= self.r(i, j) * inv[j][col];
                }
                inv[i][col] = acc / self.r(i, i);
            }
        }
        inv
    }
}
