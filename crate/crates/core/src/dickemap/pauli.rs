use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(PauliLetter::I),
            'X' => Ok(PauliLetter::X),
            'Y' => Ok(PauliLetter::Y),
            'Z' => Ok(PauliLetter::Z),
            _ => Err(Error::InvalidInput(format!("not a Pauli letter: {c:?}"))),
        }
    }

    fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// An `n`-qubit Pauli string; qubit 0 is the leftmost letter and the most
/// significant bit of a basis index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>) -> Self {
        PauliString { letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliString { letters: vec![PauliLetter::I; n] }
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|l| **l != PauliLetter::I).count()
    }

    pub fn class(&self) -> PauliClass {
        let count = |l| self.letters.iter().filter(|x| **x == l).count() as u32;
        PauliClass { nx: count(PauliLetter::X), ny: count(PauliLetter::Y), nz: count(PauliLetter::Z) }
    }

    /// Bit masks `(x, z)` and the number of `Y` letters, so that
    /// `P |b> = i^{ny} (-1)^{|b & z|} |b ^ x>`.
    pub fn masks(&self) -> (usize, usize, u32) {
        let n = self.n();
        let mut x = 0;
        let mut z = 0;
        let mut ny = 0;
        for (i, l) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - i);
            match l {
                PauliLetter::I => {}
                PauliLetter::X => x |= bit,
                PauliLetter::Z => z |= bit,
                PauliLetter::Y => {
                    x |= bit;
                    z |= bit;
                    ny += 1;
                }
            }
        }
        (x, z, ny)
    }

    /// The weight-one factors of this string, in qubit order.
    pub fn factors(&self) -> Vec<PauliString> {
        let n = self.n();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| **l != PauliLetter::I)
            .map(|(i, l)| {
                let mut f = PauliString::identity(n);
                f.letters[i] = *l;
                f
            })
            .collect()
    }

    /// Every Pauli string on `n` qubits with weight below `max_weight`.
    pub fn all_below_weight(n: usize, max_weight: usize) -> Vec<PauliString> {
        let mut out = vec![PauliString::identity(n)];
        let mut frontier = vec![(PauliString::identity(n), 0usize)];
        // grow strings by placing letters at increasing positions
        for _ in 1..max_weight {
            let mut next = Vec::new();
            for (p, start) in &frontier {
                for pos in *start..n {
                    for l in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
                        let mut q = p.clone();
                        q.letters[pos] = l;
                        next.push((q, pos + 1));
                    }
                }
            }
            out.extend(next.iter().map(|(p, _)| p.clone()));
            frontier = next;
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|l| write!(f, "{}", l.as_char()))
    }
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let letters = s.chars().map(PauliLetter::from_char).collect::<Result<Vec<_>>>()?;
        Ok(PauliString { letters })
    }
}

/// The permutation orbit of Pauli strings with `nx` X's, `ny` Y's, `nz` Z's.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliClass {
    pub nx: u32,
    pub ny: u32,
    pub nz: u32,
}

impl PauliClass {
    pub fn new(nx: u32, ny: u32, nz: u32) -> Self {
        PauliClass { nx, ny, nz }
    }

    pub fn weight(&self) -> u32 {
        self.nx + self.ny + self.nz
    }

    /// All classes with total weight below `d`.
    pub fn all_below_weight(d: u32) -> Vec<PauliClass> {
        let mut out = Vec::new();
        for w in 0..d {
            for nx in 0..=w {
                for ny in 0..=w - nx {
                    out.push(PauliClass { nx, ny, nz: w - nx - ny });
                }
            }
        }
        out
    }

    /// A representative string: X's, then Y's, then Z's, then identities.
    pub fn representative(&self, n: usize) -> Result<PauliString> {
        if self.weight() as usize > n {
            return Err(Error::InvalidInput(format!("class {self} does not fit on {n} qubits")));
        }
        let mut letters = Vec::with_capacity(n);
        letters.extend(std::iter::repeat(PauliLetter::X).take(self.nx as usize));
        letters.extend(std::iter::repeat(PauliLetter::Y).take(self.ny as usize));
        letters.extend(std::iter::repeat(PauliLetter::Z).take(self.nz as usize));
        letters.resize(n, PauliLetter::I);
        Ok(PauliString { letters })
    }
}

impl fmt::Display for PauliClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weight() == 0 {
            return write!(f, "I");
        }
        for (c, k) in [('X', self.nx), ('Y', self.ny), ('Z', self.nz)] {
            for _ in 0..k {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `<D^n_{w_bra}| Sym(E) |D^n_{w_ket}>` for any `E` in `cls`.
///
/// Because Dicke states are permutation invariant this equals
/// `<D_{w_bra}| E |D_{w_ket}>` for one representative `E`. Expanding the ket
/// over weight-`w_ket` strings, let `ax, ay, az, ai` count the 1-bits under
/// the X, Y, Z and identity letters. Each such string maps to a single
/// basis string of weight `w_ket + nx + ny - 2(ax + ay)` with phase
/// `i^{ny} (-1)^{ay + az}`, and there are
/// `C(nx,ax) C(ny,ay) C(nz,az) C(ni,ai)` of them. The integer sums are
/// exact; only the final normalisation is rounded.
pub fn sym_matrix_element(n: usize, w_bra: usize, cls: PauliClass, w_ket: usize) -> Complex64 {
    let (nx, ny, nz) = (cls.nx as i64, cls.ny as i64, cls.nz as i64);
    let n_i = n as i64 - nx - ny - nz;
    let (wb, wk) = (w_bra as i64, w_ket as i64);
    if n_i < 0 || wb > n as i64 || wk > n as i64 {
        return Complex64::new(0.0, 0.0);
    }
    // flips: wb = wk + nx + ny - 2 (ax + ay)
    let twice_flipped_ones = wk + nx + ny - wb;
    if twice_flipped_ones < 0 || twice_flipped_ones % 2 != 0 {
        return Complex64::new(0.0, 0.0);
    }
    let flipped_ones = twice_flipped_ones / 2;
    let mut sum = BigInt::zero();
    for ax in 0..=nx.min(flipped_ones) {
        let ay = flipped_ones - ax;
        if ay > ny {
            continue;
        }
        for az in 0..=nz {
            let ai = wk - ax - ay - az;
            if ai < 0 || ai > n_i {
                continue;
            }
            let count = binomial(nx as u64, ax as u64)
                * binomial(ny as u64, ay as u64)
                * binomial(nz as u64, az as u64)
                * binomial(n_i as u64, ai as u64);
            if (ay + az) % 2 == 0 {
                sum += count;
            } else {
                sum -= count;
            }
        }
    }
    if sum.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    // value = sum / sqrt(C(n, wb) C(n, wk))
    let norm = binomial(n as u64, wb as u64) * binomial(n as u64, wk as u64);
    let sign = if sum.is_negative() { -1.0 } else { 1.0 };
    let magnitude = BigRational::new(&sum * &sum, norm).to_f64().unwrap_or(f64::NAN).sqrt();
    let real = sign * magnitude;
    // i^{ny}
    match ny.rem_euclid(4) {
        0 => Complex64::new(real, 0.0),
        1 => Complex64::new(0.0, real),
        2 => Complex64::new(-real, 0.0),
        _ => Complex64::new(0.0, -real),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_masks() {
        let p: PauliString = "XYZI".parse().unwrap();
        assert_eq!(p.weight(), 3);
        assert_eq!(p.class(), PauliClass::new(1, 1, 1));
        let (x, z, ny) = p.masks();
        assert_eq!((x, z, ny), (0b1100, 0b0110, 1));
        assert!("XQ".parse::<PauliString>().is_err());
        assert_eq!(p.to_string(), "XYZI");
    }

    #[test]
    fn string_enumeration_counts() {
        assert_eq!(PauliString::all_below_weight(11, 3).len(), 1 + 33 + 495);
        assert_eq!(PauliClass::all_below_weight(5).len(), 35);
    }

    #[test]
    fn identity_class_is_kronecker() {
        for n in [1, 5, 11] {
            for wb in 0..=n {
                for wk in 0..=n {
                    let v = sym_matrix_element(n, wb, PauliClass::default(), wk);
                    let expected = if wb == wk { 1.0 } else { 0.0 };
                    assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn single_z_average() {
        let v = sym_matrix_element(11, 8, PauliClass::new(0, 0, 1), 8);
        assert!((v.re + 5.0 / 11.0).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn inconsistent_weights_give_zero() {
        // one X changes the weight by exactly one
        assert_eq!(sym_matrix_element(6, 3, PauliClass::new(1, 0, 0), 3), Complex64::new(0.0, 0.0));
        assert_eq!(sym_matrix_element(6, 6, PauliClass::new(1, 0, 0), 3), Complex64::new(0.0, 0.0));
    }
}
