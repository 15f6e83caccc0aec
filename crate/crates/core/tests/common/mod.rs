//! Test-only oracles and shared scenario builders.
#![allow(dead_code)]

use std::f64::consts::PI;

use nvholo_core::grid::TimeGrid;
use nvholo_core::linalg::{ComplexMatrix, C64};
use nvholo_core::model::{DipoleTable, FineStructure, FourLevelParams, NineLevelParams};
use nvholo_core::pulse::PulseSchedule;

/// Cyclic Jacobi eigendecomposition of a real symmetric matrix, row-major.
/// Returns `(eigenvalues, eigenvectors as columns)`.
pub fn jacobi_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// `exp(-i H dt)` through the eigendecomposition of the real embedding
/// `M = [[A, -B], [B, A]]` of `H = A + iB`. With `J` the embedding of `-i`,
/// `exp(J M dt) = V cos(Λ dt) Vᵀ + J V sin(Λ dt) Vᵀ`.
pub fn oracle_exp(h: &ComplexMatrix, dt: f64) -> ComplexMatrix {
    let n = h.dim();
    let m = 2 * n;
    let mut real = vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = h[(r, c)];
            real[r * m + c] = z.re;
            real[(r + n) * m + (c + n)] = z.re;
            real[r * m + (c + n)] = -z.im;
            real[(r + n) * m + c] = z.im;
        }
    }
    let (lambda, v) = jacobi_eigen(&real, m);
    let mut cos_part = vec![0.0; m * m];
    let mut sin_part = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let (mut cs, mut sn) = (0.0, 0.0);
            for k in 0..m {
                let w = v[i * m + k] * v[j * m + k];
                cs += w * (lambda[k] * dt).cos();
                sn += w * (lambda[k] * dt).sin();
            }
            cos_part[i * m + j] = cs;
            sin_part[i * m + j] = sn;
        }
    }
    // J = [[0, I], [-I, 0]]; (J S)[i][j] = S[i+n][j] for i < n, -S[i-n][j] otherwise.
    let full = |i: usize, j: usize| {
        let js = if i < n { sin_part[(i + n) * m + j] } else { -sin_part[(i - n) * m + j] };
        cos_part[i * m + j] + js
    };
    ComplexMatrix::from_fn(n, |r, c| C64::new(full(r, c), full(r + n, c)))
}

pub fn fig3_schedule() -> PulseSchedule {
    PulseSchedule::designed(-PI / 4.0, 0.0, 20.0, 1.0)
}

pub fn fig3_params() -> FourLevelParams {
    FourLevelParams::dark_regime(fig3_schedule())
}

pub fn fig3_grid() -> TimeGrid {
    TimeGrid::symmetric(8.0, 32_000).unwrap()
}

/// Literature-approximate fine structure shipped in the default configs.
pub fn default_fine_structure() -> FineStructure {
    FineStructure {
        ground_zero_field_splitting: 2870.0,
        a1: 4250.0,
        a2: 7350.0,
        ex: -4860.0,
        ey: -4860.0,
        ex_prime: -950.0,
        ey_prime: -950.0,
    }
}

pub fn nine_level_params(schedule: PulseSchedule) -> NineLevelParams {
    let (d1, d2) = (schedule.omega0, schedule.omega0);
    NineLevelParams::new(default_fine_structure(), DipoleTable::nv_default(), d1, d2, schedule).unwrap()
}
