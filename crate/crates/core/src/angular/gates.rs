use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::m_at;
use crate::{Error, HalfInt, Result};

/// The SU(2) gates whose Wigner-D action is needed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    X,
    Y,
    Z,
    /// `Ph(alpha) = diag(e^{-i alpha/2}, e^{i alpha/2})`.
    Ph(f64),
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::X => write!(f, "X"),
            Gate::Y => write!(f, "Y"),
            Gate::Z => write!(f, "Z"),
            Gate::Ph(a) => write!(f, "Ph({a})"),
        }
    }
}

/// `D^j(g)` for one of the named gates. The action is monomial in the
/// `|j, m>` basis:
///
/// ```text
/// X:      |j,m> -> e^{-i pi j}     |j,-m>
/// Y:      |j,m> -> e^{-i pi (j-m)} |j,-m>
/// Z:      |j,m> -> e^{-i pi m}     |j,m>
/// Ph(a):  |j,m> -> e^{-i a m}      |j,m>
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateAction {
    pub gate: Gate,
    pub j: HalfInt,
}

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

impl GateAction {
    pub fn new(gate: Gate, j: HalfInt) -> Self {
        GateAction { gate, j }
    }

    /// Column `col` maps to `(row, coefficient)`.
    fn column(&self, col: usize) -> (usize, Complex64) {
        let j = self.j;
        let m = m_at(j, col).to_f64();
        let mirrored = j.dim() - 1 - col;
        match self.gate {
            Gate::X => (mirrored, phase(-PI * j.to_f64())),
            Gate::Y => {
                // j - m is the integer col, so the phase is a sign.
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                (mirrored, Complex64::new(sign, 0.0))
            }
            Gate::Z => (col, phase(-PI * m)),
            Gate::Ph(alpha) => (col, phase(-alpha * m)),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = self.j.dim();
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (col, x) in v.iter().enumerate() {
            let (row, c) = self.column(col);
            out[row] += c * x;
        }
        Ok(out)
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let dim = self.j.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (row, c) = self.column(col);
            m[(row, col)] = c;
        }
        m
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.gate, Gate::Z | Gate::Ph(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spin_half_x_is_minus_i_x() {
        let m = GateAction::new(Gate::X, HalfInt::HALF).matrix();
        assert!((m[(0, 1)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((m[(1, 0)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!(m[(0, 0)].norm() < 1e-15 && m[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn spin_half_z_and_y() {
        let z = GateAction::new(Gate::Z, HalfInt::HALF).matrix();
        assert!((z[(0, 0)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((z[(1, 1)] - c(0.0, 1.0)).norm() < 1e-15);
        let y = GateAction::new(Gate::Y, HalfInt::HALF).matrix();
        assert!((y[(1, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((y[(0, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ph_zero_is_identity() {
        for tj in [1, 6, 13] {
            let m = GateAction::new(Gate::Ph(0.0), HalfInt::from_twice(tj)).matrix();
            let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
            assert!((m - id).norm() < 1e-15);
        }
    }

    #[test]
    fn gates_are_unitary() {
        for gate in [Gate::X, Gate::Y, Gate::Z, Gate::Ph(0.37)] {
            for tj in [1, 2, 5, 8] {
                let g = GateAction::new(gate, HalfInt::from_twice(tj));
                let m = g.matrix();
                let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
                assert!((m.adjoint() * &m - id).norm() < 1e-13, "{gate} at 2j = {tj}");
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let g = GateAction::new(Gate::Z, HalfInt::from_twice(3));
        assert!(matches!(g.apply(&[c(1.0, 0.0)]), Err(Error::DimensionMismatch { .. })));
    }
}
