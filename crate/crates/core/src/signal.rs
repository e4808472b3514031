use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense, finite real vector: ground-truth signals, iterates and estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SignalVector(Vec<f64>);

impl SignalVector {
    /// Wraps `entries`, rejecting empty input and non-finite values.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension("signal needs n >= 1".into()));
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(SignalVector(entries))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    /// Internal constructor for values produced by finite arithmetic on
    /// already-validated inputs.
    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        debug_assert!(!entries.is_empty());
        SignalVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm_l1(&self) -> f64 {
        norm_l1(&self.0)
    }

    pub fn norm_l2(&self) -> f64 {
        norm_l2(&self.0)
    }

    /// Number of entries with `entry != 0.0` (exact test, no epsilon).
    pub fn count_nonzero(&self) -> usize {
        self.0.iter().filter(|v| **v != 0.0).count()
    }

    pub fn scaled(&self, alpha: f64) -> SignalVector {
        SignalVector(self.0.iter().map(|v| alpha * v).collect())
    }

    pub fn dot(&self, other: &SignalVector) -> Result<f64> {
        self.check_same_len(other)?;
        Ok(dot(&self.0, &other.0))
    }

    /// Euclidean distance `‖self − other‖₂`.
    pub fn distance(&self, other: &SignalVector) -> Result<f64> {
        self.check_same_len(other)?;
        Ok(distance(&self.0, &other.0))
    }

    pub fn sub(&self, other: &SignalVector) -> Result<SignalVector> {
        self.check_same_len(other)?;
        Ok(SignalVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub(crate) fn check_same_len(&self, other: &SignalVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for SignalVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for SignalVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        SignalVector::new(v)
    }
}

impl From<SignalVector> for Vec<f64> {
    fn from(v: SignalVector) -> Vec<f64> {
        v.0
    }
}

impl AsRef<[f64]> for SignalVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Four interleaved partial sums in a fixed order, combined pairwise.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0_f64; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

pub(crate) fn norm_l1(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).sum()
}

pub(crate) fn norm_l2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
