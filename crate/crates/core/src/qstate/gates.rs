use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_1_SQRT_2;

pub type Mat2 = [[C64; 2]; 2];

/// Single-qubit gates used by decoding, frames and corrections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalGate {
    PauliX,
    PauliY,
    PauliZ,
    Hadamard,
    /// `diag(1, e^{iφ})`
    PhaseZ(f64),
    Matrix(Mat2),
}

impl LocalGate {
    pub fn matrix(&self) -> Mat2 {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        match *self {
            LocalGate::PauliX => [[o, l], [l, o]],
            LocalGate::PauliY => [[o, -i], [i, o]],
            LocalGate::PauliZ => [[l, o], [o, -l]],
            LocalGate::Hadamard => [[h, h], [h, -h]],
            LocalGate::PhaseZ(phi) => [[l, o], [o, C64::from_polar(1.0, phi)]],
            LocalGate::Matrix(m) => m,
        }
    }
}

pub(crate) fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

#[cfg(test)]
pub(crate) fn mat2_identity() -> Mat2 {
    LocalGate::PhaseZ(0.0).matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_unitary(m: &Mat2) -> bool {
        let dag = [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]];
        let p = mat2_mul(&dag, m);
        let id = mat2_identity();
        (0..2).all(|r| (0..2).all(|c| (p[r][c] - id[r][c]).norm() < 1e-12))
    }

    #[test]
    fn gates_are_unitary() {
        for g in [
            LocalGate::PauliX,
            LocalGate::PauliY,
            LocalGate::PauliZ,
            LocalGate::Hadamard,
            LocalGate::PhaseZ(0.3),
        ] {
            assert!(is_unitary(&g.matrix()), "{g:?}");
        }
    }

    #[test]
    fn hzh_is_x() {
        let h = LocalGate::Hadamard.matrix();
        let hzh = mat2_mul(&mat2_mul(&h, &LocalGate::PauliZ.matrix()), &h);
        let x = LocalGate::PauliX.matrix();
        assert!((0..2).all(|r| (0..2).all(|c| (hzh[r][c] - x[r][c]).norm() < 1e-12)));
    }
}
