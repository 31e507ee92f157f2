//! Binary dihedral groups `BD_{2b}` (order `8b`) and their 2-dimensional
//! symplectic irreps `delta_a`, `1 <= a <= b`.
//!
//! Group elements are kept as normal-form words `X^x Ph(pi/b)^p` with
//! `x in {0, 1}` and `p mod 4b`. Irrep images are monomial 2x2 matrices
//! whose entries are powers of `zeta = e^{i pi / 2b}`, so products and
//! equality are exact.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use nalgebra::Matrix2;
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::angular::{Gate, GateAction};
use crate::{Error, HalfInt, Result};

/// The symplectic irrep `delta_a` of `BD_{2b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Irrep {
    pub b: u32,
    pub a: u32,
}

impl Irrep {
    pub fn new(b: u32, a: u32) -> Result<Self> {
        if b == 0 || a == 0 || a > b {
            return Err(Error::InvalidInput(format!(
                "no symplectic irrep delta_{a} of BD_{}",
                2 * b
            )));
        }
        Ok(Irrep { b, a })
    }

    /// `s = (2a - 1) / 2`, the first spin carrying this irrep.
    pub fn starting_spin(&self) -> HalfInt {
        HalfInt::from_twice(i64::from(2 * self.a - 1))
    }

    /// Order `2b'` of the image of `Ph(pi/b)` up to sign, `2b / gcd(2b, 2a-1)`.
    pub fn effective_degree(&self) -> u32 {
        let two_b = 2 * self.b;
        two_b / two_b.gcd(&(2 * self.a - 1))
    }

    pub fn is_faithful(&self) -> bool {
        self.effective_degree() == 2 * self.b
    }

    pub fn group(&self) -> BinaryDihedral {
        BinaryDihedral { b: self.b }
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(BD_{}, delta_{})", 2 * self.b, self.a)
    }
}

/// `2b / gcd(2b, 2a - 1)`.
pub fn effective_degree(rep: Irrep) -> u32 {
    rep.effective_degree()
}

/// True iff `BD_{2b}` contains a gate outside every finite level of the
/// Clifford hierarchy, i.e. `b` is not a power of two.
pub fn is_exotic_degree(b: u32) -> bool {
    !b.is_power_of_two()
}

/// Human-readable name, `Q^(r)` for power-of-two degree.
pub fn group_name(degree: u32) -> String {
    if degree.is_power_of_two() {
        format!("Q^({})", degree.trailing_zeros())
    } else {
        format!("BD_{degree}")
    }
}

/// The group `BD_{2b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryDihedral {
    pub b: u32,
}

impl BinaryDihedral {
    pub fn new(b: u32) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidInput("BD_0 does not exist".into()));
        }
        Ok(BinaryDihedral { b })
    }

    pub fn order(&self) -> usize {
        8 * self.b as usize
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { b: self.b, flip: false, phase: 0 }
    }

    pub fn x(&self) -> GroupElement {
        GroupElement { b: self.b, flip: true, phase: 0 }
    }

    /// `Ph(pi/b)`.
    pub fn phase_generator(&self) -> GroupElement {
        GroupElement { b: self.b, flip: false, phase: 1 }
    }

    /// `Z = Ph(pi) = Ph(pi/b)^b`.
    pub fn z(&self) -> GroupElement {
        GroupElement { b: self.b, flip: false, phase: self.b }
    }

    pub fn element(&self, flip: bool, phase: i64) -> GroupElement {
        GroupElement {
            b: self.b,
            flip,
            phase: phase.rem_euclid(4 * i64::from(self.b)) as u32,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let b = self.b;
        [false, true]
            .into_iter()
            .flat_map(move |flip| (0..4 * b).map(move |phase| GroupElement { b, flip, phase }))
    }

    /// Generators `X`, `Z`, `Ph(pi/b)`.
    pub fn generators(&self) -> [GroupElement; 3] {
        [self.x(), self.z(), self.phase_generator()]
    }
}

/// `X^flip * Ph(pi/b)^phase` in `BD_{2b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub b: u32,
    pub flip: bool,
    pub phase: u32,
}

impl GroupElement {
    pub fn inverse(&self) -> GroupElement {
        let g = BinaryDihedral { b: self.b };
        if self.flip {
            // (X P^p)^{-1} = P^{-p} X^{-1} = X P^{p} X^{-2} = X P^{p + 2b}
            g.element(true, i64::from(self.phase) + 2 * i64::from(self.b))
        } else {
            g.element(false, -i64::from(self.phase))
        }
    }

    /// Physical action `D^j(g)` on a spin vector.
    pub fn spin_action(&self, j: HalfInt, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let alpha = PI * f64::from(self.phase) / f64::from(self.b);
        let v = GateAction::new(Gate::Ph(alpha), j).apply(v)?;
        if self.flip {
            GateAction::new(Gate::X, j).apply(&v)
        } else {
            Ok(v)
        }
    }

    /// The defining SU(2) matrix (`delta_1` image).
    pub fn su2_matrix(&self) -> Matrix2<Complex64> {
        irrep_matrix(Irrep { b: self.b, a: 1 }, *self)
            .expect("fundamental irrep")
            .to_matrix()
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    /// `X^x1 P^p1 X^x2 P^p2 = X^{x1+x2} P^{(-1)^x2 p1 + p2}`, with `X^2 = P^{2b}`.
    fn mul(self, rhs: GroupElement) -> GroupElement {
        assert_eq!(self.b, rhs.b, "elements of different groups");
        let g = BinaryDihedral { b: self.b };
        let p1 = i64::from(self.phase);
        let mut phase = if rhs.flip { -p1 } else { p1 } + i64::from(rhs.phase);
        if self.flip && rhs.flip {
            phase += 2 * i64::from(self.b);
        }
        g.element(self.flip ^ rhs.flip, phase)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.flip, self.phase) {
            (false, 0) => write!(f, "I"),
            (true, 0) => write!(f, "X"),
            (false, p) => write!(f, "Ph(pi/{})^{p}", self.b),
            (true, p) => write!(f, "X*Ph(pi/{})^{p}", self.b),
        }
    }
}

/// Monomial 2x2 matrix with entries `zeta^e`, `zeta = e^{2 pi i / order}`.
///
/// Diagonal: `diag(zeta^e0, zeta^e1)`; antidiagonal: `[[0, zeta^e0], [zeta^e1, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    pub antidiagonal: bool,
    pub exponents: [u32; 2],
    pub order: u32,
}

impl MonomialMatrix {
    fn new(antidiagonal: bool, e0: i64, e1: i64, order: u32) -> Self {
        let n = i64::from(order);
        MonomialMatrix {
            antidiagonal,
            exponents: [e0.rem_euclid(n) as u32, e1.rem_euclid(n) as u32],
            order,
        }
    }

    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        let root = |e: u32| {
            Complex64::from_polar(1.0, 2.0 * PI * f64::from(e) / f64::from(self.order))
        };
        let z = Complex64::new(0.0, 0.0);
        let [a, b] = self.exponents.map(root);
        if self.antidiagonal {
            Matrix2::new(z, a, b, z)
        } else {
            Matrix2::new(a, z, z, b)
        }
    }
}

impl Mul for MonomialMatrix {
    type Output = MonomialMatrix;
    fn mul(self, rhs: MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.order, rhs.order);
        let [a0, a1] = self.exponents.map(i64::from);
        let [b0, b1] = rhs.exponents.map(i64::from);
        match (self.antidiagonal, rhs.antidiagonal) {
            (false, false) => MonomialMatrix::new(false, a0 + b0, a1 + b1, self.order),
            // diag(a0,a1) * [[0,b0],[b1,0]] = [[0,a0 b0],[a1 b1,0]]
            (false, true) => MonomialMatrix::new(true, a0 + b0, a1 + b1, self.order),
            // [[0,a0],[a1,0]] * diag(b0,b1) = [[0,a0 b1],[a1 b0,0]]
            (true, false) => MonomialMatrix::new(true, a0 + b1, a1 + b0, self.order),
            // [[0,a0],[a1,0]] * [[0,b0],[b1,0]] = diag(a0 b1, a1 b0)
            (true, true) => MonomialMatrix::new(false, a0 + b1, a1 + b0, self.order),
        }
    }
}

/// Image of `g` under `delta_a`: `X -> X`, `Ph(pi/b) -> Ph(pi/b)^{2a-1}`.
pub fn irrep_matrix(rep: Irrep, g: GroupElement) -> Result<MonomialMatrix> {
    if rep.b != g.b {
        return Err(Error::InvalidInput(format!(
            "element of BD_{} used with irrep of BD_{}",
            2 * g.b,
            2 * rep.b
        )));
    }
    let order = 4 * rep.b;
    let e = i64::from(2 * rep.a - 1) * i64::from(g.phase);
    let diag = MonomialMatrix::new(false, -e, e, order);
    if g.flip {
        // X = -i sigma_x, and -i = zeta^{3b}
        let x = MonomialMatrix::new(true, 3 * i64::from(rep.b), 3 * i64::from(rep.b), order);
        Ok(x * diag)
    } else {
        Ok(diag)
    }
}

/// Number of distinct matrices in the image of `delta_a`.
pub fn image_order(rep: Irrep) -> usize {
    let images: std::collections::HashSet<_> = rep
        .group()
        .elements()
        .map(|g| irrep_matrix(rep, g).expect("same group"))
        .collect();
    images.len()
}

/// Allowed `supp |0>` of a `(BD_{2b}, delta_a)` covariant spin-`j` code:
/// `(s + 2b Z) ∩ [-j, j]`, in descending order of `m`.
pub fn support_lattice(rep: Irrep, j: HalfInt) -> Result<Vec<HalfInt>> {
    if !j.is_half_integral() || j.twice() < 0 {
        return Err(Error::UnsupportedSpin(j));
    }
    let step = 4 * i64::from(rep.b);
    let s = rep.starting_spin().twice();
    let tj = j.twice();
    // largest element of s + step Z that is <= 2j
    let top = s + Integer::div_floor(&(tj - s), &step) * step;
    let mut out = Vec::new();
    let mut m = top;
    while m >= -tj {
        out.push(HalfInt::from_twice(m));
        m -= step;
    }
    Ok(out)
}

/// Spin-`j` character `sin((2j+1) a/2) / sin(a/2)` of `Ph(a)`, with the
/// removable singularities at `a/2 = N pi` filled in.
fn spin_character(j: HalfInt, alpha: f64) -> f64 {
    let half = alpha / 2.0;
    let s = half.sin();
    if s.abs() < 1e-12 {
        let n = (half / PI).round() as i64;
        let sign = if (n * j.twice()).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        return sign * j.dim() as f64;
    }
    ((j.twice() + 1) as f64 * half).sin() / s
}

/// Multiplicity of `delta_a` in spin `j` via the character inner product
/// over all `8b` group elements.
pub fn multiplicity(rep: Irrep, j: HalfInt) -> usize {
    let group = rep.group();
    let mut acc = 0.0;
    for g in group.elements() {
        // Both characters vanish on the X coset.
        if g.flip {
            continue;
        }
        let alpha = PI * f64::from(g.phase) / f64::from(rep.b);
        let m = irrep_matrix(rep, g).expect("same group").to_matrix();
        let chi_rep = (m[(0, 0)] + m[(1, 1)]).conj();
        acc += chi_rep.re * spin_character(j, alpha);
    }
    let value = acc / group.order() as f64;
    let rounded = value.round();
    assert!(
        (value - rounded).abs() < 1e-6,
        "character inner product {value} is not an integer"
    );
    rounded.max(0.0) as usize
}

/// Smallest spin with `mu` copies of `delta_a`: `j = mu b + kappa`, where
/// `kappa = s - b` for odd `mu` and `kappa = -s` for even `mu`.
pub fn first_spin_with_freedom(rep: Irrep, mu: u32) -> Result<HalfInt> {
    if mu == 0 {
        return Err(Error::InvalidInput("multiplicity must be at least 1".into()));
    }
    let b2 = 2 * i64::from(rep.b);
    let s2 = rep.starting_spin().twice();
    let kappa2 = if mu % 2 == 1 { s2 - b2 } else { -s2 };
    Ok(HalfInt::from_twice(i64::from(mu) * b2 + kappa2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn delta2_of_bd4_generators() {
        let rep = Irrep::new(2, 2).unwrap();
        let g = rep.group();
        let z = irrep_matrix(rep, g.z()).unwrap().to_matrix();
        let fundamental_z = g.z().su2_matrix();
        assert!((z + fundamental_z).norm() < 1e-14);
        // S = Ph(pi/2) = Ph(pi/b) for b = 2
        let s = irrep_matrix(rep, g.phase_generator()).unwrap().to_matrix();
        let s1 = g.phase_generator().su2_matrix();
        assert!((s - s1 * s1 * s1).norm() < 1e-14);
        let x = irrep_matrix(rep, g.x()).unwrap().to_matrix();
        assert!((x - g.x().su2_matrix()).norm() < 1e-14);
    }

    #[test]
    fn fundamental_maps_generators_to_themselves() {
        let rep = Irrep::new(4, 1).unwrap();
        let t = irrep_matrix(rep, rep.group().phase_generator()).unwrap().to_matrix();
        let a = Complex64::from_polar(1.0, -PI / 8.0);
        assert!((t[(0, 0)] - a).norm() < 1e-15);
        assert!((t[(1, 1)] - a.conj()).norm() < 1e-15);
    }

    #[test]
    fn non_faithful_image_order() {
        assert_eq!(image_order(Irrep::new(3, 2).unwrap()), 8);
        assert_eq!(image_order(Irrep::new(3, 1).unwrap()), 24);
        assert_eq!(image_order(Irrep::new(6, 5).unwrap()), 16);
    }

    #[test]
    fn effective_degrees() {
        assert_eq!(effective_degree(Irrep::new(3, 2).unwrap()), 2);
        assert_eq!(effective_degree(Irrep::new(6, 5).unwrap()), 4);
        for a in 1..=8 {
            assert_eq!(effective_degree(Irrep::new(8, a).unwrap()), 16);
        }
    }

    #[test]
    fn lattices() {
        let l = support_lattice(Irrep::new(4, 2).unwrap(), h(13)).unwrap();
        assert_eq!(l, vec![h(3), h(-13)]);
        let l = support_lattice(Irrep::new(4, 3).unwrap(), h(11)).unwrap();
        assert_eq!(l, vec![h(5), h(-11)]);
        let l = support_lattice(Irrep::new(4, 4).unwrap(), h(5)).unwrap();
        assert!(l.is_empty());
        assert!(matches!(
            support_lattice(Irrep::new(4, 1).unwrap(), HalfInt::integer(3)),
            Err(Error::UnsupportedSpin(_))
        ));
    }

    #[test]
    fn lattice_matches_eigenvalue_oracle() {
        // m is allowed iff e^{-i m pi / b} equals the delta_a eigenvalue on |0>
        for b in 1..=6u32 {
            for a in 1..=b {
                let rep = Irrep::new(b, a).unwrap();
                let target = Complex64::from_polar(
                    1.0,
                    -PI * f64::from(2 * a - 1) / f64::from(2 * b),
                );
                for tj in (1..30).step_by(2) {
                    let expected: Vec<HalfInt> = (0..=tj)
                        .map(|i| h(tj - 2 * i))
                        .filter(|m| {
                            let z = Complex64::from_polar(1.0, -m.to_f64() * PI / f64::from(b));
                            (z - target).norm() < 1e-9
                        })
                        .collect();
                    assert_eq!(support_lattice(rep, h(tj)).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn multiplicities_of_q3() {
        let m = |a, tj| multiplicity(Irrep::new(4, a).unwrap(), h(tj));
        assert_eq!([m(1, 11), m(2, 11), m(3, 11), m(4, 11)], [1, 1, 2, 2]);
        assert_eq!([m(1, 7), m(2, 7), m(3, 7), m(4, 7)], [1, 1, 1, 1]);
        assert_eq!([m(1, 15), m(2, 15), m(3, 15), m(4, 15)], [2, 2, 2, 2]);
    }

    #[test]
    fn first_spins() {
        let rep = Irrep::new(4, 2).unwrap();
        assert_eq!(first_spin_with_freedom(rep, 2).unwrap(), h(13));
        assert_eq!(first_spin_with_freedom(rep, 1).unwrap(), rep.starting_spin());
        let rep = Irrep::new(6, 5).unwrap();
        assert_eq!(first_spin_with_freedom(rep, 3).unwrap(), h(33));
        // scan oracle
        let mut tj = 1;
        while multiplicity(rep, h(tj)) < 3 {
            tj += 2;
        }
        assert_eq!(tj, 33);
        assert!(first_spin_with_freedom(rep, 0).is_err());
    }

    #[test]
    fn exotic_degrees() {
        assert!(!is_exotic_degree(4));
        assert!(is_exotic_degree(3));
        assert!(is_exotic_degree(6));
        assert!(!is_exotic_degree(1));
        assert_eq!(group_name(8), "Q^(3)");
        assert_eq!(group_name(10), "BD_10");
    }

    #[test]
    fn group_law() {
        let g = BinaryDihedral::new(3).unwrap();
        let x = g.x();
        assert_eq!(x * x, g.element(false, 6));
        assert_eq!(x * x * x * x, g.identity());
        for e in g.elements() {
            assert_eq!(e * e.inverse(), g.identity());
            assert_eq!(e.inverse() * e, g.identity());
        }
        assert_eq!(g.elements().count(), 24);
    }
}
