use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{standard_normal_vec, RngSpec};

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl TryFrom<RawMatrix> for DenseMatrix {
    type Error = Error;

    fn try_from(r: RawMatrix) -> Result<Self> {
        DenseMatrix::new(r.rows, r.cols, r.data)
    }
}

/// Iteration cap for the power method in [`operator_norm`].
pub const OPERATOR_NORM_MAX_ITERS: usize = 500;

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(format!(
                "matrix must be nonempty, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDimension("ragged rows".into()));
        }
        Self::new(m, n, rows.concat())
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::new(n, n, data)
    }

    pub fn diag(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in d.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self::new(n, n, data)
    }

    /// I.i.d. standard normal entries drawn row by row from `rng`.
    pub(crate) fn standard_gaussian(rows: usize, cols: usize, rng: &RngSpec) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(format!(
                "matrix must be nonempty, got {rows}x{cols}"
            )));
        }
        let data = standard_normal_vec(&mut rng.rng(), rows * cols);
        Ok(DenseMatrix { rows, cols, data })
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

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `out = A x`.
    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *o = crate::signal::dot(row, x);
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut out = vec![0.0; self.rows];
        self.matvec_into(x, &mut out);
        Ok(out)
    }

    /// `out = Aᵀ r`.
    pub fn tmatvec_into(&self, r: &[f64], out: &mut [f64]) {
        debug_assert_eq!(r.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        out.iter_mut().for_each(|v| *v = 0.0);
        for (ri, row) in r.iter().zip(self.data.chunks_exact(self.cols)) {
            if *ri == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                *o += ri * a;
            }
        }
    }

    pub fn tmatvec(&self, r: &[f64]) -> Result<Vec<f64>> {
        if r.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: r.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        self.tmatvec_into(r, &mut out);
        Ok(out)
    }
}

/// Largest singular value of `a` by power iteration on `AᵀA`.
///
/// The start vector is a fixed pseudo-random direction, so the result is
/// deterministic. Stops when the Rayleigh quotient stabilizes to 1e-13
/// relative or after [`OPERATOR_NORM_MAX_ITERS`] steps. An all-zero matrix
/// has norm 0.
pub fn operator_norm(a: &DenseMatrix) -> f64 {
    let n = a.cols();
    let mut v = standard_normal_vec(&mut RngSpec::new(0x0123_4567, 0).rng(), n);
    let mut av = vec![0.0; a.rows()];
    let mut w = vec![0.0; n];
    let norm = crate::signal::norm_l2(&v);
    v.iter_mut().for_each(|x| *x /= norm);

    let mut sigma_sq = 0.0_f64;
    for _ in 0..OPERATOR_NORM_MAX_ITERS {
        a.matvec_into(&v, &mut av);
        a.tmatvec_into(&av, &mut w);
        // Rayleigh quotient of AᵀA at the unit vector v.
        let next = crate::signal::dot(&av, &av);
        let wn = crate::signal::norm_l2(&w);
        if wn == 0.0 {
            return 0.0;
        }
        v.iter_mut().zip(&w).for_each(|(x, y)| *x = y / wn);
        let done = (next - sigma_sq).abs() <= 1e-13 * next;
        sigma_sq = next;
        if done {
            break;
        }
    }
    // One more product at the final vector.
    a.matvec_into(&v, &mut av);
    crate::signal::norm_l2(&av).max(sigma_sq.sqrt())
}
