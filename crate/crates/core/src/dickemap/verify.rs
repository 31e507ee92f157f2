use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pauli::{sym_matrix_element, PauliClass, PauliString};
use super::MultiqubitCode;
use crate::klengine::{ConditionKind, KLCondition, KLReport};
use crate::{Error, Result};

/// Largest `n` accepted by the dense verifier.
pub const MAX_DENSE_KL_QUBITS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Every Pauli string of weight `< d` on full `2^n` vectors.
    Dense,
    /// Every Pauli class of weight `< d` through Dicke-basis matrix elements.
    Symmetric,
}

fn conditions_for(k: u32, label: String, on: Complex64, off: Complex64, off_rev: Complex64) -> [KLCondition; 3] {
    let make = |kind, v: Complex64| KLCondition { k, q: 0, kind, error: Some(label.clone()), residual: v.norm() };
    [
        make(ConditionKind::OnDiag, on),
        make(ConditionKind::OffDiag, off),
        make(ConditionKind::OffDiagReversed, off_rev),
    ]
}

/// Knill-Laflamme check of a permutationally invariant code against all
/// Pauli errors of weight `< d`, including the identity.
pub fn multiqubit_kl_check(code: &MultiqubitCode, d: u32, mode: VerifyMode, tol: f64) -> Result<KLReport> {
    if d == 0 {
        return Err(Error::InvalidInput("distance must be at least 1".into()));
    }
    match mode {
        VerifyMode::Dense => dense_check(code, d, tol),
        VerifyMode::Symmetric => Ok(symmetric_check(code, d, tol)),
    }
}

fn dense_codeword(n: usize, amps: &BTreeMap<usize, f64>) -> Vec<f64> {
    let norms: Vec<f64> = (0..=n)
        .map(|w| {
            let k = w.min(n - w);
            let c = (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
            amps.get(&w).map_or(0.0, |a| a / c.sqrt())
        })
        .collect();
    (0..1usize << n).map(|b| norms[b.count_ones() as usize]).collect()
}

fn pauli_sandwich(p: &PauliString, bra: &[f64], ket: &[f64]) -> Complex64 {
    let (x, z, ny) = p.masks();
    let mut acc = 0.0;
    for (b, v) in ket.iter().enumerate() {
        if *v != 0.0 {
            let u = bra[b ^ x];
            if u != 0.0 {
                let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * u * v;
            }
        }
    }
    Complex64::i().powu(ny) * acc
}

fn dense_check(code: &MultiqubitCode, d: u32, tol: f64) -> Result<KLReport> {
    let n = code.n();
    if n > MAX_DENSE_KL_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "dense verification limited to n <= {MAX_DENSE_KL_QUBITS}, got {n}"
        )));
    }
    let c0 = dense_codeword(n, code.amp0());
    let c1 = dense_codeword(n, code.amp1());
    let strings = PauliString::all_below_weight(n, d as usize);
    let conditions = strings
        .par_iter()
        .flat_map_iter(|p| {
            let on = pauli_sandwich(p, &c0, &c0) - pauli_sandwich(p, &c1, &c1);
            conditions_for(
                p.weight() as u32,
                p.to_string(),
                on,
                pauli_sandwich(p, &c0, &c1),
                pauli_sandwich(p, &c1, &c0),
            )
        })
        .collect();
    Ok(KLReport::from_conditions(conditions, tol))
}

fn sym_sandwich(n: usize, cls: PauliClass, bra: &BTreeMap<usize, f64>, ket: &BTreeMap<usize, f64>) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (wb, u) in bra {
        for (wk, v) in ket {
            acc += sym_matrix_element(n, *wb, cls, *wk) * (u * v);
        }
    }
    acc
}

fn symmetric_check(code: &MultiqubitCode, d: u32, tol: f64) -> KLReport {
    let n = code.n();
    let classes: Vec<PauliClass> = PauliClass::all_below_weight(d)
        .into_iter()
        .filter(|c| c.weight() as usize <= n)
        .collect();
    let (a0, a1) = (code.amp0(), code.amp1());
    let conditions = classes
        .par_iter()
        .flat_map_iter(|cls| {
            let on = sym_sandwich(n, *cls, a0, a0) - sym_sandwich(n, *cls, a1, a1);
            conditions_for(
                cls.weight(),
                cls.to_string(),
                on,
                sym_sandwich(n, *cls, a0, a1),
                sym_sandwich(n, *cls, a1, a0),
            )
        })
        .collect();
    KLReport::from_conditions(conditions, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dickemap::Labeling;

    fn code_11() -> MultiqubitCode {
        MultiqubitCode::new(11, [(0, 5f64.sqrt() / 4.0), (8, 11f64.sqrt() / 4.0)], Labeling::Mirrored, None).unwrap()
    }

    #[test]
    fn eleven_qubit_code_has_distance_three() {
        let code = code_11();
        let r3 = multiqubit_kl_check(&code, 3, VerifyMode::Dense, 1e-12).unwrap();
        assert!(r3.pass, "max residual {}", r3.max_residual);
        assert_eq!(r3.conditions.len(), 3 * (1 + 33 + 495));
        let r4 = multiqubit_kl_check(&code, 4, VerifyMode::Dense, 1e-12).unwrap();
        assert!(!r4.pass);
    }

    #[test]
    fn symmetric_agrees_with_dense() {
        let code = code_11();
        let dense = multiqubit_kl_check(&code, 4, VerifyMode::Dense, 1e-12).unwrap();
        let sym = multiqubit_kl_check(&code, 4, VerifyMode::Symmetric, 1e-12).unwrap();
        for k in 0..4 {
            assert!((dense.max_residual_at_rank(k) - sym.max_residual_at_rank(k)).abs() < 1e-10);
        }
        assert!(sym.max_residual_at_rank(3) > 1e-3);
    }

    #[test]
    fn dense_guard() {
        let code = MultiqubitCode::new(15, [(0, 1.0)], Labeling::Lattice, None).unwrap();
        assert!(matches!(
            multiqubit_kl_check(&code, 2, VerifyMode::Dense, 1e-12),
            Err(Error::ResourceLimit(_))
        ));
    }
}
