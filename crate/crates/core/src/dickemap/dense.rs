//! Dense `2^n` state-vector tools, used as oracles for the symmetric
//! machinery and for small-`n` verification.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::pauli::{PauliClass, PauliLetter, PauliString};
use crate::angular::GateAction;
use crate::{Error, HalfInt, Result};

/// Largest `n` for which a dense Dicke vector is built.
pub const MAX_DENSE_QUBITS: usize = 20;
const MAX_DENSE_OPERATOR_QUBITS: usize = 10;
const MAX_EXPANSION_QUBITS: usize = 8;

fn guard(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        return Err(Error::ResourceLimit(format!("{what} limited to n <= {limit}, got {n}")));
    }
    Ok(())
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `|D^n_w>` as a dense vector; qubit 0 is the most significant bit.
pub fn dicke_dense(n: usize, w: usize) -> Result<Vec<f64>> {
    guard(n, MAX_DENSE_QUBITS, "dense Dicke states")?;
    if w > n {
        return Err(Error::InvalidInput(format!("weight {w} exceeds n = {n}")));
    }
    let amp = 1.0 / binomial_f64(n, w).sqrt();
    Ok((0..1usize << n)
        .map(|b| if b.count_ones() as usize == w { amp } else { 0.0 })
        .collect())
}

/// Applies the 2x2 matrix `g` to one qubit of a dense state in place.
pub fn apply_local_gate(state: &mut [Complex64], n: usize, qubit: usize, g: &DMatrix<Complex64>) {
    let bit = 1usize << (n - 1 - qubit);
    for b in 0..state.len() {
        if b & bit == 0 {
            let (v0, v1) = (state[b], state[b | bit]);
            state[b] = g[(0, 0)] * v0 + g[(0, 1)] * v1;
            state[b | bit] = g[(1, 0)] * v0 + g[(1, 1)] * v1;
        }
    }
}

fn dicke_complex(n: usize, w: usize) -> Result<Vec<Complex64>> {
    Ok(dicke_dense(n, w)?.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntertwinerReport {
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares `Dicke(D^j(g)|j,m>)` with `g^{⊗n} Dicke(|j,m>)` for every `m`,
/// where `j = n/2` and `g` is the spin-1/2 matrix of the gate.
pub fn intertwiner_check(n: usize, gate: GateAction, tol: f64) -> Result<IntertwinerReport> {
    guard(n, MAX_DENSE_OPERATOR_QUBITS, "intertwiner check")?;
    let j = HalfInt::from_twice(n as i64);
    let spin = GateAction::new(gate.gate, j);
    let local = GateAction::new(gate.gate, HalfInt::HALF).matrix();
    let mut max_deviation = 0.0f64;
    for w in 0..=n {
        let mut basis = vec![Complex64::new(0.0, 0.0); n + 1];
        basis[w] = Complex64::new(1.0, 0.0);
        let image = spin.apply(&basis)?;
        let mut lhs = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (wr, c) in image.iter().enumerate() {
            if c.norm() > 0.0 {
                for (x, d) in lhs.iter_mut().zip(dicke_dense(n, wr)?) {
                    *x += c * d;
                }
            }
        }
        let mut rhs = dicke_complex(n, w)?;
        for q in 0..n {
            apply_local_gate(&mut rhs, n, q, &local);
        }
        let dev = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        max_deviation = max_deviation.max(dev);
    }
    Ok(IntertwinerReport { max_deviation, pass: max_deviation < tol })
}

/// Adds `coeff * P` to a dense operator.
fn add_pauli(op: &mut DMatrix<Complex64>, p: &PauliString, coeff: Complex64) {
    let (x, z, ny) = p.masks();
    let base = coeff * Complex64::i().powu(ny);
    for b in 0..op.ncols() {
        let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        op[(b ^ x, b)] += base * sign;
    }
}

/// All distinct arrangements of a multiset of letters.
fn arrangements(counts: &mut [(PauliLetter, usize)], prefix: &mut Vec<PauliLetter>, out: &mut Vec<PauliString>, n: usize) {
    if prefix.len() == n {
        out.push(PauliString::new(prefix.clone()));
        return;
    }
    for i in 0..counts.len() {
        if counts[i].1 > 0 {
            counts[i].1 -= 1;
            prefix.push(counts[i].0);
            arrangements(counts, prefix, out, n);
            prefix.pop();
            counts[i].1 += 1;
        }
    }
}

/// Every string in the permutation orbit of `cls` on `n` qubits.
pub(crate) fn class_orbit(cls: PauliClass, n: usize) -> Result<Vec<PauliString>> {
    if cls.weight() as usize > n {
        return Err(Error::InvalidInput(format!("class {cls} does not fit on {n} qubits")));
    }
    let mut counts = [
        (PauliLetter::I, n - cls.weight() as usize),
        (PauliLetter::X, cls.nx as usize),
        (PauliLetter::Y, cls.ny as usize),
        (PauliLetter::Z, cls.nz as usize),
    ];
    let mut out = Vec::new();
    arrangements(&mut counts, &mut Vec::with_capacity(n), &mut out, n);
    Ok(out)
}

/// `Sym(E)`: uniform average of `E` over its distinct qubit arrangements.
pub fn sym_error_dense(e: &PauliString) -> Result<DMatrix<Complex64>> {
    let n = e.n();
    guard(n, MAX_DENSE_OPERATOR_QUBITS, "dense symmetrized errors")?;
    let orbit = class_orbit(e.class(), n)?;
    let weight = Complex64::new(1.0 / orbit.len() as f64, 0.0);
    let mut op = DMatrix::zeros(1 << n, 1 << n);
    for p in &orbit {
        add_pauli(&mut op, p, weight);
    }
    Ok(op)
}

/// `Sph(E)`: product of `Sym` of the weight-one factors of `E`, in qubit order.
pub fn sph_error_dense(e: &PauliString) -> Result<DMatrix<Complex64>> {
    let n = e.n();
    guard(n, MAX_DENSE_OPERATOR_QUBITS, "dense spherical errors")?;
    let mut op = DMatrix::identity(1 << n, 1 << n);
    for f in e.factors() {
        op *= sym_error_dense(&f)?;
    }
    Ok(op)
}

/// Coefficients `c` with `op = sum_c c * Sym(c)`, for a permutation-symmetric
/// operator. The coefficient of a class is the sum of the Pauli coefficients
/// `Tr(P^† op) / 2^n` over its strings; entries below `1e-13` are dropped.
pub fn pauli_class_expansion(op: &DMatrix<Complex64>, n: usize) -> Result<BTreeMap<PauliClass, Complex64>> {
    guard(n, MAX_EXPANSION_QUBITS, "Pauli expansion")?;
    let dim = 1usize << n;
    if op.nrows() != dim || op.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: op.nrows() });
    }
    let mut out: BTreeMap<PauliClass, Complex64> = BTreeMap::new();
    let letters = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];
    for code in 0..1usize << (2 * n) {
        let p = PauliString::new((0..n).map(|q| letters[(code >> (2 * q)) & 3]).collect());
        let (x, z, ny) = p.masks();
        // Tr(P^† A) = sum_b conj(<b^x|P|b>) A[b^x, b]
        let phase = Complex64::i().powu(ny).conj();
        let mut tr = Complex64::new(0.0, 0.0);
        for b in 0..dim {
            let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            tr += op[(b ^ x, b)] * sign;
        }
        *out.entry(p.class()).or_default() += phase * tr / dim as f64;
    }
    out.retain(|_, c| c.norm() > 1e-13);
    Ok(out)
}
