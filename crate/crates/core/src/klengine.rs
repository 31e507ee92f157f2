//! Knill-Laflamme conditions for two-dimensional spin codes.
//!
//! [`kl_check_full`] evaluates every spherical tensor of rank below the
//! distance and is the ground truth. For real `(BD_{2b}, delta_a)` covariant
//! codes only odd ranks survive, and only the components listed by
//! [`reduced_conditions`]; [`count_conditions`] and
//! [`count_conditions_closed`] count them two independent ways.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::angular::{index_of, SignedSqrtRational, SphericalTensor};
use crate::bindihedral::{support_lattice, Irrep};
use crate::{Error, HalfInt, Result};

const NORM_TOLERANCE: f64 = 1e-12;

/// A real `(BD_{2b}, delta_a)` covariant spin code.
///
/// `amp0` is supported on the lattice `s + 2b Z` and `amp1(m) = amp0(-m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinCode {
    j: HalfInt,
    rep: Irrep,
    amp0: BTreeMap<HalfInt, f64>,
    amp1: BTreeMap<HalfInt, f64>,
    exact: Option<BTreeMap<HalfInt, SignedSqrtRational>>,
}

impl SpinCode {
    /// Builds the code from `|0>` amplitudes; zero entries are dropped.
    pub fn new(rep: Irrep, j: HalfInt, amp0: impl IntoIterator<Item = (HalfInt, f64)>) -> Result<Self> {
        let lattice = support_lattice(rep, j)?;
        let amp0: BTreeMap<HalfInt, f64> = amp0.into_iter().filter(|(_, a)| *a != 0.0).collect();
        if let Some(m) = amp0.keys().find(|m| !lattice.contains(m)) {
            return Err(Error::InvalidInput(format!(
                "m = {m} is outside the {rep} support lattice at j = {j}"
            )));
        }
        let norm: f64 = amp0.values().map(|a| a * a).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidInput(format!("codeword norm^2 is {norm}, expected 1")));
        }
        let amp1 = amp0.iter().map(|(m, a)| (-*m, *a)).collect();
        Ok(SpinCode { j, rep, amp0, amp1, exact: None })
    }

    /// Builds the code from amplitudes listed in lattice order.
    pub fn from_lattice(rep: Irrep, j: HalfInt, amplitudes: &[f64]) -> Result<Self> {
        let lattice = support_lattice(rep, j)?;
        if lattice.len() != amplitudes.len() {
            return Err(Error::DimensionMismatch { expected: lattice.len(), found: amplitudes.len() });
        }
        Self::new(rep, j, lattice.into_iter().zip(amplitudes.iter().copied()))
    }

    /// Builds the code from exact amplitudes.
    pub fn from_exact(
        rep: Irrep,
        j: HalfInt,
        amp0: impl IntoIterator<Item = (HalfInt, SignedSqrtRational)>,
    ) -> Result<Self> {
        let exact: BTreeMap<_, _> = amp0.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        let mut code = Self::new(rep, j, exact.iter().map(|(m, a)| (*m, a.to_f64())))?;
        code.exact = Some(exact);
        Ok(code)
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn rep(&self) -> Irrep {
        self.rep
    }

    pub fn amp0(&self) -> &BTreeMap<HalfInt, f64> {
        &self.amp0
    }

    pub fn amp1(&self) -> &BTreeMap<HalfInt, f64> {
        &self.amp1
    }

    /// Exact `|0>` amplitudes, when the code came from a closed form.
    pub fn exact_amp0(&self) -> Option<&BTreeMap<HalfInt, SignedSqrtRational>> {
        self.exact.as_ref()
    }

    fn dense(&self, amps: &BTreeMap<HalfInt, f64>) -> Vec<f64> {
        let mut v = vec![0.0; self.j.dim()];
        for (m, a) in amps {
            v[index_of(self.j, *m)] = *a;
        }
        v
    }

    /// `(|0>, |1>)` as dense real vectors indexed by `j - m`.
    pub fn codewords(&self) -> (Vec<f64>, Vec<f64>) {
        (self.dense(&self.amp0), self.dense(&self.amp1))
    }

    pub fn codewords_complex(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let (c0, c1) = self.codewords();
        let lift = |v: Vec<f64>| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        (lift(c0), lift(c1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionKind {
    /// `<0|E|0> = <1|E|1>`
    OnDiag,
    /// `<0|E|1> = 0`
    OffDiag,
    /// `<1|E|0> = 0`
    OffDiagReversed,
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionKind::OnDiag => "on-diag",
            ConditionKind::OffDiag => "off-diag",
            ConditionKind::OffDiagReversed => "off-diag-reversed",
        };
        f.write_str(s)
    }
}

/// One evaluated condition. `k` is the tensor rank (or Pauli weight) and
/// `error` names the Pauli error or class for multiqubit checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KLCondition {
    pub k: u32,
    pub q: i32,
    pub kind: ConditionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KLReport {
    pub conditions: Vec<KLCondition>,
    pub max_residual: f64,
    pub pass: bool,
}

impl KLReport {
    pub fn from_conditions(conditions: Vec<KLCondition>, tol: f64) -> Self {
        let max_residual = conditions.iter().map(|c| c.residual).fold(0.0, f64::max);
        KLReport { conditions, max_residual, pass: max_residual < tol }
    }

    /// Largest residual over conditions of rank exactly `k`.
    pub fn max_residual_at_rank(&self, k: u32) -> f64 {
        self.conditions
            .iter()
            .filter(|c| c.k == k)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

/// Full Knill-Laflamme check of an arbitrary codeword pair on spin `j`:
/// for all `k < d`, `|q| <= k` the two off-diagonal elements must vanish
/// and the diagonal elements must agree.
pub fn kl_check_vectors(
    j: HalfInt,
    c0: &[Complex64],
    c1: &[Complex64],
    d: u32,
    tol: f64,
) -> Result<KLReport> {
    if d == 0 {
        return Err(Error::InvalidInput("distance must be at least 1".into()));
    }
    if i64::from(d) > j.twice() + 1 {
        return Err(Error::RankOverflow { d, twice_j: j.twice() });
    }
    for c in [c0, c1] {
        if c.len() != j.dim() {
            return Err(Error::DimensionMismatch { expected: j.dim(), found: c.len() });
        }
    }
    let mut conditions = Vec::new();
    for k in 0..d {
        for q in -(k as i32)..=(k as i32) {
            let t = SphericalTensor::new(j, k, q)?;
            let on = t.sandwich(c0, c0) - t.sandwich(c1, c1);
            let off = t.sandwich(c0, c1);
            let off_rev = t.sandwich(c1, c0);
            for (kind, value) in [
                (ConditionKind::OnDiag, on),
                (ConditionKind::OffDiag, off),
                (ConditionKind::OffDiagReversed, off_rev),
            ] {
                conditions.push(KLCondition { k, q, kind, error: None, residual: value.norm() });
            }
        }
    }
    Ok(KLReport::from_conditions(conditions, tol))
}

/// Unreduced Knill-Laflamme check of a spin code at distance `d`.
pub fn kl_check_full(code: &SpinCode, d: u32, tol: f64) -> Result<KLReport> {
    let (c0, c1) = code.codewords_complex();
    kl_check_vectors(code.j(), &c0, &c1, d, tol)
}

/// A surviving condition for real covariant codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedCondition {
    pub kind: ConditionKind,
    pub k: u32,
    pub q: i32,
}

fn check_odd(d: u32) -> Result<()> {
    if d == 0 || d % 2 == 0 {
        return Err(Error::InvalidInput(format!("distance must be odd and positive, got {d}")));
    }
    Ok(())
}

/// Conditions left for a real `(BD_{2b}, delta_a)` covariant code at odd
/// distance `d`: for odd `k <= d - 2`,
/// on-diagonal with `q = 0 mod 2b`, `0 <= q <= k`, and
/// off-diagonal `<0|T^k_q|1> = 0` with `q = 2a - 1 mod 2b`, `|q| <= k`.
pub fn reduced_conditions(rep: Irrep, d: u32) -> Result<Vec<ReducedCondition>> {
    check_odd(d)?;
    let period = 2 * rep.b as i32;
    let shift = (2 * rep.a - 1) as i32;
    let mut out = Vec::new();
    for k in (1..d.saturating_sub(1)).step_by(2) {
        let ki = k as i32;
        for q in 0..=ki {
            if q.rem_euclid(period) == 0 {
                out.push(ReducedCondition { kind: ConditionKind::OnDiag, k, q });
            }
        }
        for q in -ki..=ki {
            if (q - shift).rem_euclid(period) == 0 {
                out.push(ReducedCondition { kind: ConditionKind::OffDiag, k, q });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCount {
    pub on_diag: u64,
    pub off_diag: u64,
}

impl ConditionCount {
    pub fn total(&self) -> u64 {
        self.on_diag + self.off_diag
    }
}

/// Condition count by summation over odd ranks:
/// `on = sum (1 + floor(k / 2b))`,
/// `off = sum (1 + floor((k - 2s) / 2b) + floor((k + 2s) / 2b))`.
pub fn count_conditions(rep: Irrep, d: u32) -> Result<ConditionCount> {
    check_odd(d)?;
    let period = 2 * i64::from(rep.b);
    let two_s = i64::from(2 * rep.a - 1);
    let mut on_diag = 0i64;
    let mut off_diag = 0i64;
    for k in (1..i64::from(d) - 1).step_by(2) {
        on_diag += 1 + Integer::div_floor(&k, &period);
        off_diag += 1 + Integer::div_floor(&(k - two_s), &period) + Integer::div_floor(&(k + two_s), &period);
    }
    Ok(ConditionCount { on_diag: on_diag as u64, off_diag: off_diag as u64 })
}

fn rmod(x: Rational64, b: i64) -> Rational64 {
    let b = Rational64::from_integer(b);
    x - b * (x / b).floor()
}

/// The constant-order correction `c` of the closed form, for `d = 2t + 1`.
pub fn closed_form_correction(rep: Irrep, t: i64) -> Rational64 {
    let b = i64::from(rep.b);
    let a = i64::from(rep.a);
    let r = Rational64::from_integer;
    let m = |x: i64| rmod(r(x), b);
    let t_half = rmod(Rational64::new(2 * t - 1, 2), b);
    let bb = r(b);
    let two = r(2);
    let sum = m(t + 1 - a) * m(t + 1 - a)
        + (bb - two - two * m(t - a)) * m(t + 1 - a)
        + m(a + t) * (bb - two - two * m(a + t - 1) + m(a + t))
        + m(t) * m(t)
        + (bb - r(1) - two * t_half) * m(t);
    sum / r(2 * b)
}

/// Closed-form total `nu = 3t^2/2b + (2+b)t/2b + (2a(a-b-1)+b+1)/2b + c`.
pub fn count_conditions_closed(rep: Irrep, d: u32) -> Result<u64> {
    check_odd(d)?;
    let t = i64::from((d - 1) / 2);
    let b = i64::from(rep.b);
    let a = i64::from(rep.a);
    let nu = Rational64::new(3 * t * t, 2 * b)
        + Rational64::new((2 + b) * t, 2 * b)
        + Rational64::new(2 * a * (a - b - 1) + b + 1, 2 * b)
        + closed_form_correction(rep, t);
    if !nu.is_integer() || nu < Rational64::from_integer(0) {
        return Err(Error::Inconsistency(format!(
            "closed-form count for {rep}, d = {d} is {nu}"
        )));
    }
    Ok(nu.to_integer() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn code_11_2_3() -> SpinCode {
        let rep = Irrep::new(4, 3).unwrap();
        SpinCode::from_lattice(rep, h(11), &[(11.0f64 / 16.0).sqrt(), (5.0f64 / 16.0).sqrt()]).unwrap()
    }

    #[test]
    fn code_invariants_enforced() {
        let rep = Irrep::new(4, 3).unwrap();
        assert!(SpinCode::new(rep, h(11), [(h(3), 1.0)]).is_err());
        assert!(SpinCode::new(rep, h(11), [(h(5), 0.5)]).is_err());
        let c = code_11_2_3();
        assert_eq!(c.amp1().keys().copied().collect::<Vec<_>>(), vec![h(-5), h(11)]);
    }

    #[test]
    fn distance_one_always_passes() {
        let rep = Irrep::new(4, 2).unwrap();
        let c = SpinCode::from_lattice(rep, h(13), &[0.6, 0.8]).unwrap();
        assert!(kl_check_full(&c, 1, 1e-12).unwrap().pass);
    }

    #[test]
    fn known_code_has_distance_exactly_three() {
        let c = code_11_2_3();
        let r3 = kl_check_full(&c, 3, 1e-12).unwrap();
        assert!(r3.pass, "max residual {}", r3.max_residual);
        let r4 = kl_check_full(&c, 4, 1e-12).unwrap();
        assert!(!r4.pass);
        assert!(r4.max_residual_at_rank(3) > 1e-3);
    }

    #[test]
    fn rank_overflow() {
        let c = code_11_2_3();
        assert!(matches!(kl_check_full(&c, 13, 1e-12), Err(Error::RankOverflow { .. })));
        assert!(kl_check_full(&c, 12, 1e-12).is_ok());
    }

    #[test]
    fn reduced_condition_lists() {
        let rep = Irrep::new(4, 3).unwrap();
        assert_eq!(
            reduced_conditions(rep, 3).unwrap(),
            vec![ReducedCondition { kind: ConditionKind::OnDiag, k: 1, q: 0 }]
        );
        assert!(reduced_conditions(rep, 1).unwrap().is_empty());
        let bd2 = reduced_conditions(Irrep::new(1, 1).unwrap(), 3).unwrap();
        let off: Vec<i32> = bd2.iter().filter(|c| c.kind == ConditionKind::OffDiag).map(|c| c.q).collect();
        assert_eq!(off, vec![-1, 1]);
        assert_eq!(bd2.len(), 3);
        assert!(reduced_conditions(rep, 4).is_err());
    }

    #[test]
    fn counts() {
        let c = count_conditions(Irrep::new(1, 1).unwrap(), 3).unwrap();
        assert_eq!((c.on_diag, c.off_diag), (1, 2));
        let c = count_conditions(Irrep::new(4, 3).unwrap(), 3).unwrap();
        assert_eq!((c.on_diag, c.off_diag), (1, 0));
        let c = count_conditions(Irrep::new(4, 3).unwrap(), 5).unwrap();
        assert_eq!((c.on_diag, c.off_diag), (2, 1));
        assert_eq!(count_conditions_closed(Irrep::new(4, 3).unwrap(), 5).unwrap(), 3);
    }

    #[test]
    fn bd2_closed_form_is_triangular() {
        let rep = Irrep::new(1, 1).unwrap();
        for t in 0..=10u32 {
            let d = 2 * t + 1;
            assert_eq!(count_conditions_closed(rep, d).unwrap(), u64::from(3 * t * (t + 1) / 2));
        }
    }

    #[test]
    fn on_diag_sign_flip_is_redundant() {
        // <0|T^k_{-q}|0> - <1|T^k_{-q}|1> vanishes whenever the q >= 0 version does,
        // checked on codes that satisfy the reduced conditions.
        let c = code_11_2_3();
        let (c0, c1) = c.codewords();
        for q in [0i32, 8] {
            for k in [1u32, 9] {
                if q.unsigned_abs() > k {
                    continue;
                }
                let plus = SphericalTensor::new(c.j(), k, q).unwrap();
                let minus = SphericalTensor::new(c.j(), k, -q).unwrap();
                let p = plus.sandwich_real(&c0, &c0) - plus.sandwich_real(&c1, &c1);
                let m = minus.sandwich_real(&c0, &c0) - minus.sandwich_real(&c1, &c1);
                assert!((p.abs() - m.abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_codewords_round_trip() {
        let rep = Irrep::new(4, 3).unwrap();
        let r = |n: i64, d: i64| SignedSqrtRational::sqrt(BigRational::new(BigInt::from(n), BigInt::from(d)));
        let c = SpinCode::from_exact(rep, h(11), [(h(5), r(11, 16)), (h(-11), r(5, 16))]).unwrap();
        assert_eq!(c.exact_amp0().unwrap()[&h(-11)].to_string(), "sqrt(5)/4");
        assert!(kl_check_full(&c, 3, 1e-12).unwrap().pass);
    }
}
