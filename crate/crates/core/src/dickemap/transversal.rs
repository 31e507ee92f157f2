use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use super::{Labeling, MultiqubitCode};
use crate::bindihedral::{irrep_matrix, GroupElement, MonomialMatrix};
use crate::{Error, Result};

/// Logical action of a transversal group element on a bootstrapped code.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransversalCertificate {
    pub element: String,
    /// `L[u][v] = <u| g^{⊗n} |v>` in the code's own labeling.
    #[serde(serialize_with = "serialize_matrix")]
    pub logical: Matrix2<Complex64>,
    #[serde(skip)]
    pub expected: MonomialMatrix,
    /// Norm of the component of `g^{⊗n}|v>` outside the codespace.
    pub leakage: f64,
    /// Distance to the irrep image after removing a global phase.
    pub phase_deviation: f64,
    pub matches_irrep: bool,
}

fn serialize_matrix<S: serde::Serializer>(m: &Matrix2<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = (0..2)
        .map(|r| (0..2).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect();
    serde::Serialize::serialize(&rows, s)
}

/// Divides by the phase of the largest-magnitude entry.
fn strip_phase(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    let pivot = m.iter().copied().fold(Complex64::new(0.0, 0.0), |best, x| {
        if x.norm() > best.norm() + 1e-12 { x } else { best }
    });
    if pivot.norm() == 0.0 {
        return *m;
    }
    m.map(|x| x * (pivot.conj() / pivot.norm()))
}

/// Distance between two matrices after removing a global phase from each.
pub fn phase_distance(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> f64 {
    (strip_phase(a) - strip_phase(b)).norm()
}

fn swap_labels(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    Matrix2::new(m[(1, 1)], m[(1, 0)], m[(0, 1)], m[(0, 0)])
}

/// Computes `g^{⊗n}` on the codespace through the spin-side action
/// `D^j(g)`, and certifies that it preserves the codespace and acts as
/// `delta_a(g)` up to a global phase.
pub fn transversal_action(code: &MultiqubitCode, g: GroupElement, tol: f64) -> Result<TransversalCertificate> {
    let spin = code.to_spin_code()?;
    let rep = spin.rep();
    let expected = irrep_matrix(rep, g)?;
    let j = spin.j();
    let (c0, c1) = spin.codewords_complex();
    let words = [c0, c1];
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    };
    let mut logical = Matrix2::zeros();
    let mut leakage = 0.0f64;
    for v in 0..2 {
        let image = g.spin_action(j, &words[v])?;
        let coeffs = [dot(&words[0], &image), dot(&words[1], &image)];
        logical[(0, v)] = coeffs[0];
        logical[(1, v)] = coeffs[1];
        let rest: f64 = image
            .iter()
            .enumerate()
            .map(|(i, x)| (x - coeffs[0] * words[0][i] - coeffs[1] * words[1][i]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        leakage = leakage.max(rest);
    }
    if leakage > tol {
        return Err(Error::NotTransversal { leakage });
    }
    // spin codewords and the irrep image both use the lattice labeling
    let lattice_logical = logical;
    if code.labeling() == Labeling::Mirrored {
        logical = swap_labels(&logical);
    }
    let phase_deviation = phase_distance(&lattice_logical, &expected.to_matrix());
    Ok(TransversalCertificate {
        element: g.to_string(),
        logical,
        expected,
        leakage,
        phase_deviation,
        matches_irrep: phase_deviation < tol.max(1e-10),
    })
}
