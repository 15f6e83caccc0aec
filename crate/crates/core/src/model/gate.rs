use num_complex::Complex64 as C64;

use crate::linalg::{pauli_x, pauli_y, pauli_z, ComplexMatrix, StateVector};

/// `|D⟩ = sin χ e^{-iφ}|1⟩ + cos χ e^{iφ}|2⟩`.
pub fn d_vector(chi: f64, phi: f64) -> StateVector {
    StateVector::new(vec![
        C64::from_polar(chi.sin(), -phi),
        C64::from_polar(chi.cos(), phi),
    ])
}

/// `|-D⟩ = cos χ e^{-iφ}|1⟩ - sin χ e^{iφ}|2⟩`, orthogonal to [`d_vector`]
/// and with Bloch vector equal to [`rotation_axis`].
pub fn minus_d_vector(chi: f64, phi: f64) -> StateVector {
    StateVector::new(vec![
        C64::from_polar(chi.cos(), -phi),
        C64::from_polar(-chi.sin(), phi),
    ])
}

/// `n̂ = (-sin 2χ cos 2φ, -sin 2χ sin 2φ, cos 2χ)`.
pub fn rotation_axis(chi: f64, phi: f64) -> [f64; 3] {
    let s2c = (2.0 * chi).sin();
    [
        -s2c * (2.0 * phi).cos(),
        -s2c * (2.0 * phi).sin(),
        (2.0 * chi).cos(),
    ]
}

/// Holonomic gate `e^{iγ/2}[cos(γ/2) I + i sin(γ/2) n̂·σ]` on `{|1⟩, |2⟩}`.
///
/// Equivalently `|D⟩⟨D| + e^{iγ}|-D⟩⟨-D|`.
pub fn ideal_gate(chi: f64, phi: f64, gamma: f64) -> ComplexMatrix {
    let [nx, ny, nz] = rotation_axis(chi, phi);
    let n_sigma = &(&pauli_x().scale(C64::new(nx, 0.0)) + &pauli_y().scale(C64::new(ny, 0.0)))
        + &pauli_z().scale(C64::new(nz, 0.0));
    let half = 0.5 * gamma;
    let body = &ComplexMatrix::identity(2).scale(C64::new(half.cos(), 0.0))
        + &n_sigma.scale(C64::new(0.0, half.sin()));
    body.scale(C64::from_polar(1.0, half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    #[test]
    fn zero_phase_is_identity() {
        let u = ideal_gate(0.4, 1.1, 0.0);
        assert!(u.max_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn x_rotation_example() {
        let u = ideal_gate(-PI / 4.0, 0.0, FRAC_PI_2);
        let [nx, ny, nz] = rotation_axis(-PI / 4.0, 0.0);
        assert!((nx - 1.0).abs() < 1e-15 && ny.abs() < 1e-15 && nz.abs() < 1e-15);
        let c = FRAC_1_SQRT_2;
        let expected = (&ComplexMatrix::identity(2).scale(C64::new(c, 0.0))
            + &pauli_x().scale(C64::new(0.0, c)))
            .scale(C64::from_polar(1.0, PI / 4.0));
        assert!(u.max_diff(&expected) < 1e-15);
        let out = u.apply(&StateVector::basis(2, 0)).abs_amplitudes();
        assert!((out[0] - c).abs() < 1e-15 && (out[1] - c).abs() < 1e-15);
    }

    #[test]
    fn chi_zero_is_diagonal() {
        let u = ideal_gate(0.0, 0.3, 1.0);
        assert!(u[(0, 1)].norm() < 1e-16 && u[(1, 0)].norm() < 1e-16);
        assert!(unitarity_defect(&u) < 1e-15);
    }

    #[test]
    fn eigenvectors_are_d_and_minus_d() {
        let (chi, phi, gamma) = (0.37, -1.2, 2.1);
        let u = ideal_gate(chi, phi, gamma);
        let d = d_vector(chi, phi);
        let md = minus_d_vector(chi, phi);
        assert!(u.apply(&d).sub(&d).norm() < 1e-14);
        let expect = md.scale(C64::from_polar(1.0, gamma));
        assert!(u.apply(&md).sub(&expect).norm() < 1e-14);
    }
}
