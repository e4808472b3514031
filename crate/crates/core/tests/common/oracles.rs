//! Brute-force reference answers for small instances. Deliberately slow and
//! independent of the library's own algorithms.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// ℓ1-ball projection by support enumeration. On a support `S` carrying the
/// signs of `x`, the KKT point soft-thresholds at
/// `θ = (Σ_S |x_i| − η)/|S|`; the nearest admissible candidate wins.
pub fn l1_projection_enum(x: &[f64], eta: f64) -> Vec<f64> {
    let n = x.len();
    if x.iter().map(|v| v.abs()).sum::<f64>() <= eta {
        return x.to_vec();
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let theta = (idx.iter().map(|&i| x[i].abs()).sum::<f64>() - eta) / idx.len() as f64;
        if theta < 0.0 || idx.iter().any(|&i| x[i].abs() < theta) {
            continue;
        }
        let mut z = vec![0.0; n];
        for &i in &idx {
            z[i] = (x[i].abs() - theta) * x[i].signum();
        }
        let d = dist(x, &z);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, z));
        }
    }
    best.expect("some support is admissible").1
}

/// ℓ2-ball projection from the KKT condition `z = x/(1+λ)`, with λ found by
/// bisection on `‖x‖/(1+λ) = η`.
pub fn l2_projection_kkt(x: &[f64], eta: f64) -> Vec<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm <= eta {
        return x.to_vec();
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while norm / (1.0 + hi) > eta {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if norm / (1.0 + mid) > eta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lam = 0.5 * (lo + hi);
    x.iter().map(|v| v / (1.0 + lam)).collect()
}

/// Smallest `‖x − z‖₂` over all `s`-sparse `z`, by enumerating supports.
pub fn best_sparse_distance(x: &[f64], s: usize) -> f64 {
    let n = x.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != s {
            continue;
        }
        let d: f64 = (0..n)
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| x[i] * x[i])
            .sum::<f64>()
            .sqrt();
        best = best.min(d);
    }
    best
}

fn objective(a: &DMatrix<f64>, y: &DVector<f64>, x: &DVector<f64>) -> f64 {
    0.5 * (y - a * x).norm_squared()
}

/// Optimal value of `½‖y − Ax‖₂²` over the ℓ1 ball, for a tall full-rank
/// `A`. Either the unconstrained minimizer is feasible, or the optimum lies
/// in the relative interior of one face `{σᵀx = η, sign(x_S) = σ_S}`, where
/// it solves an equality-constrained least-squares problem.
pub fn cls_l1_optimum(a: &DMatrix<f64>, y: &DVector<f64>, eta: f64) -> f64 {
    let n = a.ncols();
    let ls = (a.transpose() * a).lu().solve(&(a.transpose() * y)).expect("full rank");
    if ls.iter().map(|v| v.abs()).sum::<f64>() <= eta {
        return objective(a, y, &ls);
    }
    let mut best = f64::INFINITY;
    let patterns = 3usize.pow(n as u32);
    for code in 0..patterns {
        let mut sigma = vec![0.0; n];
        let mut c = code;
        for s in sigma.iter_mut() {
            *s = [0.0, 1.0, -1.0][c % 3];
            c /= 3;
        }
        let support: Vec<usize> = (0..n).filter(|&i| sigma[i] != 0.0).collect();
        if support.is_empty() {
            continue;
        }
        let k = support.len();
        let a_s = DMatrix::from_fn(a.nrows(), k, |r, j| a[(r, support[j])]);
        let mut kkt = DMatrix::zeros(k + 1, k + 1);
        kkt.view_mut((0, 0), (k, k)).copy_from(&(a_s.transpose() * &a_s));
        for j in 0..k {
            kkt[(j, k)] = sigma[support[j]];
            kkt[(k, j)] = sigma[support[j]];
        }
        let mut rhs = DVector::zeros(k + 1);
        rhs.rows_mut(0, k).copy_from(&(a_s.transpose() * y));
        rhs[k] = eta;
        let Some(sol) = kkt.lu().solve(&rhs) else { continue };
        if (0..k).any(|j| sigma[support[j]] * sol[j] < -1e-12) {
            continue;
        }
        let mut x = DVector::zeros(n);
        for j in 0..k {
            x[support[j]] = sol[j];
        }
        best = best.min(objective(a, y, &x));
    }
    best
}

/// Optimal value of `½‖y − Ax‖₂²` over the ℓ2 ball via the Lagrangian path
/// `x(λ) = (AᵀA + λI)⁻¹Aᵀy` and bisection on `‖x(λ)‖₂ = η`.
pub fn cls_l2_optimum(a: &DMatrix<f64>, y: &DVector<f64>, eta: f64) -> f64 {
    let n = a.ncols();
    let ata = a.transpose() * a;
    let aty = a.transpose() * y;
    let at = |lam: f64| {
        (&ata + DMatrix::identity(n, n) * lam)
            .lu()
            .solve(&aty)
            .expect("positive definite")
    };
    let x0 = at(0.0);
    if x0.norm() <= eta {
        return objective(a, y, &x0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while at(hi).norm() > eta {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid).norm() > eta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    objective(a, y, &at(0.5 * (lo + hi)))
}
