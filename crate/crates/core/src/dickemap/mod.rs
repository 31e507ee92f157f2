//! The Dicke bootstrap `|j, m> -> |D^{2j}_{j-m}>` and multiqubit checks.

mod dense;
mod pauli;
mod transversal;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angular::SignedSqrtRational;
use crate::bindihedral::Irrep;
use crate::klengine::SpinCode;
use crate::{Error, HalfInt, Result};

pub use dense::{
    apply_local_gate, dicke_dense, intertwiner_check, pauli_class_expansion, sph_error_dense,
    sym_error_dense, IntertwinerReport, MAX_DENSE_QUBITS,
};
pub use pauli::{PauliClass, PauliLetter, PauliString, sym_matrix_element};
pub use transversal::{phase_distance, transversal_action, TransversalCertificate};
pub use verify::{multiqubit_kl_check, VerifyMode, MAX_DENSE_KL_QUBITS};

/// Which codeword is called `|0>`.
///
/// `Lattice`: `|0>` is the image of the spin codeword supported on
/// `s + 2b Z`. `Mirrored`: the two codewords are swapped, which is how the
/// explicit code families are usually written down.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Labeling {
    #[default]
    Lattice,
    Mirrored,
}

/// Spin-side origin of a bootstrapped code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub rep: Irrep,
    pub j: HalfInt,
}

/// A permutationally invariant two-dimensional code on `n` qubits, with
/// codewords given as amplitudes on Dicke states `|D^n_w>`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiqubitCode {
    n: usize,
    amp0: BTreeMap<usize, f64>,
    amp1: BTreeMap<usize, f64>,
    exact0: Option<BTreeMap<usize, SignedSqrtRational>>,
    labeling: Labeling,
    provenance: Option<Provenance>,
}

impl MultiqubitCode {
    /// Builds a code from `|0>` amplitudes; `|1>` is the mirror `w -> n - w`.
    pub fn new(
        n: usize,
        amp0: impl IntoIterator<Item = (usize, f64)>,
        labeling: Labeling,
        provenance: Option<Provenance>,
    ) -> Result<Self> {
        let amp0: BTreeMap<usize, f64> = amp0.into_iter().filter(|(_, a)| *a != 0.0).collect();
        if let Some(w) = amp0.keys().find(|w| **w > n) {
            return Err(Error::InvalidInput(format!("Dicke weight {w} exceeds n = {n}")));
        }
        let norm: f64 = amp0.values().map(|a| a * a).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("codeword norm^2 is {norm}, expected 1")));
        }
        if let Some(p) = provenance {
            if p.j.twice() != n as i64 {
                return Err(Error::InvalidInput(format!("spin {} does not match n = {n}", p.j)));
            }
            let period = 2 * p.rep.b as usize;
            let mut weights = amp0.keys();
            if let Some(first) = weights.next() {
                if weights.any(|w| (w + period - first % period) % period != 0) {
                    return Err(Error::InvalidInput(format!(
                        "support weights are not congruent modulo {period}"
                    )));
                }
            }
        }
        let amp1 = amp0.iter().map(|(w, a)| (n - w, *a)).collect();
        Ok(MultiqubitCode { n, amp0, amp1, exact0: None, labeling, provenance })
    }

    pub fn with_exact(
        mut self,
        exact0: impl IntoIterator<Item = (usize, SignedSqrtRational)>,
    ) -> Self {
        self.exact0 = Some(exact0.into_iter().filter(|(_, a)| !a.is_zero()).collect());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amp0(&self) -> &BTreeMap<usize, f64> {
        &self.amp0
    }

    pub fn amp1(&self) -> &BTreeMap<usize, f64> {
        &self.amp1
    }

    pub fn exact_amp0(&self) -> Option<&BTreeMap<usize, SignedSqrtRational>> {
        self.exact0.as_ref()
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    pub fn provenance(&self) -> Option<Provenance> {
        self.provenance
    }

    /// The same code with `|0>` and `|1>` presented in `labeling`.
    pub fn relabeled(&self, labeling: Labeling) -> MultiqubitCode {
        if labeling == self.labeling {
            return self.clone();
        }
        let n = self.n;
        MultiqubitCode {
            n,
            amp0: self.amp1.clone(),
            amp1: self.amp0.clone(),
            exact0: self
                .exact0
                .as_ref()
                .map(|e| e.iter().map(|(w, a)| (n - w, a.clone())).collect()),
            labeling,
            provenance: self.provenance,
        }
    }

    /// Codewords as real vectors over Dicke weights `0..=n`.
    pub fn dicke_vectors(&self) -> (Vec<f64>, Vec<f64>) {
        let dense = |m: &BTreeMap<usize, f64>| {
            let mut v = vec![0.0; self.n + 1];
            for (w, a) in m {
                v[*w] = *a;
            }
            v
        };
        (dense(&self.amp0), dense(&self.amp1))
    }

    /// Inverse of [`bootstrap`], available for codes with spin provenance.
    pub fn to_spin_code(&self) -> Result<SpinCode> {
        let p = self
            .provenance
            .ok_or_else(|| Error::InvalidInput("code has no spin provenance".into()))?;
        let lattice = self.relabeled(Labeling::Lattice);
        let weight_to_m = |w: usize| HalfInt::from_twice(p.j.twice() - 2 * w as i64);
        match &lattice.exact0 {
            Some(exact) => SpinCode::from_exact(
                p.rep,
                p.j,
                exact.iter().map(|(w, a)| (weight_to_m(*w), a.clone())),
            ),
            None => SpinCode::new(p.rep, p.j, lattice.amp0.iter().map(|(w, a)| (weight_to_m(*w), *a))),
        }
    }
}

/// Dicke bootstrap of a spin code: the amplitude on `|D^n_w>` is the spin
/// amplitude at `m = j - w`, with `n = 2j`.
pub fn bootstrap(code: &SpinCode) -> MultiqubitCode {
    let j = code.j();
    let n = j.twice() as usize;
    let weight = |m: HalfInt| ((j.twice() - m.twice()) / 2) as usize;
    let provenance = Some(Provenance { rep: code.rep(), j });
    let mq = MultiqubitCode::new(
        n,
        code.amp0().iter().map(|(m, a)| (weight(*m), *a)),
        Labeling::Lattice,
        provenance,
    )
    .expect("bootstrap of a valid spin code is valid");
    match code.exact_amp0() {
        Some(exact) => mq.with_exact(exact.iter().map(|(m, a)| (weight(*m), a.clone()))),
        None => mq,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn top_state_maps_to_all_zeros() {
        // delta_1 of BD_2 at j = 1/2 has |0> = |1/2, 1/2>
        let rep = Irrep::new(1, 1).unwrap();
        let spin = SpinCode::new(rep, h(1), [(h(1), 1.0)]).unwrap();
        let mq = bootstrap(&spin);
        assert_eq!(mq.n(), 1);
        assert_eq!(mq.amp0().keys().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn known_code_in_mirrored_labeling() {
        let rep = Irrep::new(4, 3).unwrap();
        let spin = SpinCode::from_lattice(rep, h(11), &[(11.0f64 / 16.0).sqrt(), (5.0f64 / 16.0).sqrt()]).unwrap();
        let mq = bootstrap(&spin).relabeled(Labeling::Mirrored);
        let amps: Vec<(usize, f64)> = mq.amp0().iter().map(|(w, a)| (*w, *a)).collect();
        assert_eq!(amps[0].0, 0);
        assert_eq!(amps[1].0, 8);
        assert!((amps[0].1 - 5f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((amps[1].1 - 11f64.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(mq.to_spin_code().unwrap(), spin);
    }

    #[test]
    fn rejects_bad_codes() {
        assert!(MultiqubitCode::new(3, [(4, 1.0)], Labeling::Lattice, None).is_err());
        assert!(MultiqubitCode::new(3, [(1, 0.5)], Labeling::Lattice, None).is_err());
        let p = Provenance { rep: Irrep::new(4, 3).unwrap(), j: h(11) };
        let a = 0.5f64.sqrt();
        assert!(MultiqubitCode::new(11, [(3, a), (4, a)], Labeling::Lattice, Some(p)).is_err());
        assert!(MultiqubitCode::new(11, [(3, a), (11, a)], Labeling::Lattice, Some(p)).is_ok());
    }
}
