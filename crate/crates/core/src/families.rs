//! Closed-form code families and the predicted-length atlas.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::SignedSqrtRational;
use crate::bindihedral::{first_spin_with_freedom, group_name, is_exotic_degree, Irrep};
use crate::dickemap::{Labeling, MultiqubitCode, Provenance};
use crate::klengine::{count_conditions_closed, SpinCode};
use crate::{Error, HalfInt, Result};

/// Distances from this value on rely on the `mu = nu + 1` conjecture with
/// no numerically constructed witness.
pub const CONJECTURED_FROM_D: u32 = 15;

/// The transversal group actually realised, `BD_{2b'}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInfo {
    /// `2b'`.
    pub degree: u32,
    pub faithful: bool,
    /// Contains a gate outside the Clifford hierarchy.
    pub exotic: bool,
    pub name: String,
}

impl GroupInfo {
    pub fn of(rep: Irrep) -> Self {
        let degree = rep.effective_degree();
        GroupInfo {
            degree,
            faithful: rep.is_faithful(),
            exotic: is_exotic_degree(degree / 2),
            name: group_name(degree),
        }
    }
}

/// `((n, K, d, G))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub d: u32,
    pub group: GroupInfo,
    pub rep: Irrep,
}

impl std::fmt::Display for CodeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(({}, {}, {}, {}))", self.n, self.k, self.d, self.group.name)
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The two-point distance-3 spin code of a middle irrep `1 < a < b`:
/// `sqrt((2b - s)/2b)` at `m = s` and `sqrt(s/2b)` at `m = s - 2b`.
///
/// Any `j >= 2b - s` works; for larger `j` the extra lattice points are
/// left empty.
pub fn family_d3(rep: Irrep, j: HalfInt) -> Result<SpinCode> {
    if rep.a <= 1 || rep.a >= rep.b {
        return Err(Error::NotMiddleIrrep { two_b: 2 * rep.b, a: rep.a });
    }
    if !j.is_half_integral() {
        return Err(Error::UnsupportedSpin(j));
    }
    let two_b = 2 * i64::from(rep.b);
    let s = rep.starting_spin();
    let min = HalfInt::integer(two_b) - s;
    if j < min {
        return Err(Error::InsufficientSpin { j, min });
    }
    // amplitudes squared in units of 1/(2 * 2b), with 2s = s.twice()
    let den = 2 * two_b;
    let upper = SignedSqrtRational::sqrt(ratio(2 * two_b - s.twice(), den));
    let lower = SignedSqrtRational::sqrt(ratio(s.twice(), den));
    SpinCode::from_exact(rep, j, [(s, upper), (s - HalfInt::integer(two_b), lower)])
}

/// The `((2b+3, 2, 3))` code with transversal `BD_{2b'}`, written in the
/// mirrored labeling:
/// `|0> = (sqrt(4b - n)|D_0> + sqrt(n)|D_2b>) / sqrt(4b)`.
pub fn code1(b: u32) -> Result<(MultiqubitCode, CodeParams)> {
    if b < 3 {
        return Err(Error::InvalidInput(format!("code 1 needs b >= 3, got {b}")));
    }
    let n = 2 * b as usize + 3;
    let rep = Irrep::new(b, b - 1)?;
    let j = HalfInt::from_twice(n as i64);
    let four_b = 4 * i64::from(b);
    let low = SignedSqrtRational::sqrt(ratio(four_b - n as i64, four_b));
    let high = SignedSqrtRational::sqrt(ratio(n as i64, four_b));
    let exact = [(0usize, low), (2 * b as usize, high)];
    let code = MultiqubitCode::new(
        n,
        exact.iter().map(|(w, a)| (*w, a.to_f64())),
        Labeling::Mirrored,
        Some(Provenance { rep, j }),
    )?
    .with_exact(exact);
    let params = CodeParams { n, k: 2, d: 3, group: GroupInfo::of(rep), rep };
    Ok((code, params))
}

/// [`code1`] at `b = 2^{r-1}`, whose transversal group is `Q^(r)`.
pub fn code2(r: u32) -> Result<(MultiqubitCode, CodeParams)> {
    if !(3..=31).contains(&r) {
        return Err(Error::InvalidInput(format!("code 2 needs 3 <= r <= 31, got {r}")));
    }
    code1(1 << (r - 1))
}

fn check_odd(d: u32) -> Result<()> {
    if d % 2 == 0 {
        return Err(Error::InvalidInput(format!("distance must be odd, got {d}")));
    }
    Ok(())
}

/// `n = (3d^2 + 6d - 7 + 2 (d mod 8)) / 4` for the `Q^(3)` family.
pub fn code3_length(d: u32) -> Result<usize> {
    check_odd(d)?;
    if d < 3 {
        return Err(Error::InvalidInput(format!("code 3 needs d >= 3, got {d}")));
    }
    let d = d as usize;
    Ok((3 * d * d + 6 * d - 7 + 2 * (d % 8)) / 4)
}

/// The `BD_8` irrep minimising [`predicted_length`] at `d`, ties going to
/// the smallest `a`.
pub fn code3_irrep(d: u32) -> Result<Irrep> {
    let mut best: Option<(usize, Irrep)> = None;
    for a in 1..=4 {
        let rep = Irrep::new(4, a)?;
        let n = predicted_length(rep, d)?.n;
        if best.map_or(true, |(m, _)| n < m) {
            best = Some((n, rep));
        }
    }
    Ok(best.expect("four candidates").1)
}

/// Shortest code length predicted by `mu = nu + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub n: usize,
    pub j: HalfInt,
    pub nu: u64,
    pub mu: u64,
    /// No numerically constructed witness is claimed at this distance.
    pub conjectured: bool,
}

pub fn predicted_length(rep: Irrep, d: u32) -> Result<Prediction> {
    let nu = count_conditions_closed(rep, d)?;
    let mu = nu + 1;
    let mu32 = u32::try_from(mu).map_err(|_| Error::OutOfRange(format!("mu = {mu}")))?;
    let j = first_spin_with_freedom(rep, mu32)?;
    Ok(Prediction { n: j.twice() as usize, j, nu, mu, conjectured: d >= CONJECTURED_FROM_D })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasCell {
    pub b: u32,
    pub a: u32,
    pub d: u32,
    pub n: usize,
    pub faithful: bool,
    pub group_degree: u32,
    pub conjectured: bool,
    /// Smallest `n` among the faithful irreps of the same group at this `d`.
    #[serde(skip)]
    pub group_minimum: bool,
}

/// Predicted lengths for all `b <= b_max`, `a <= b` and odd `d <= d_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas {
    pub b_max: u32,
    pub d_max: u32,
    pub cells: Vec<AtlasCell>,
}

pub fn atlas(b_max: u32, d_max: u32) -> Result<Atlas> {
    if b_max == 0 {
        return Err(Error::InvalidInput("b_max must be positive".into()));
    }
    let jobs: Vec<(u32, u32, u32)> = (1..=b_max)
        .flat_map(|b| (1..=b).flat_map(move |a| (1..=d_max).step_by(2).map(move |d| (b, a, d))))
        .collect();
    let mut cells = jobs
        .par_iter()
        .map(|&(b, a, d)| {
            let rep = Irrep::new(b, a)?;
            let p = predicted_length(rep, d)?;
            Ok(AtlasCell {
                b,
                a,
                d,
                n: p.n,
                faithful: rep.is_faithful(),
                group_degree: rep.effective_degree(),
                conjectured: p.conjectured,
                group_minimum: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let minima: Vec<bool> = cells
        .iter()
        .map(|c| {
            c.faithful
                && cells
                    .iter()
                    .filter(|o| o.b == c.b && o.d == c.d && o.faithful)
                    .all(|o| o.n >= c.n)
        })
        .collect();
    for (c, m) in cells.iter_mut().zip(minima) {
        c.group_minimum = m;
    }
    Ok(Atlas { b_max, d_max, cells })
}

impl Atlas {
    pub fn cell(&self, b: u32, a: u32, d: u32) -> Option<&AtlasCell> {
        self.cells.iter().find(|c| c.b == b && c.a == a && c.d == d)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for c in &self.cells {
            w.serialize(c)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Groups as row blocks, distances as columns. Non-faithful irreps are
    /// struck through, per-group minima are bold and conjectured columns
    /// carry a triangle.
    pub fn to_markdown(&self) -> String {
        let ds: Vec<u32> = (1..=self.d_max).step_by(2).collect();
        let mut s = String::from("| group | irrep |");
        for d in &ds {
            let mark = if *d >= CONJECTURED_FROM_D { "▲" } else { "" };
            let _ = write!(s, " {d}{mark} |");
        }
        s.push_str("\n|---|---|");
        s.push_str(&"---:|".repeat(ds.len()));
        s.push('\n');
        for b in 1..=self.b_max {
            for a in 1..=b {
                let group = if a == 1 { format!("BD_{}", 2 * b) } else { String::new() };
                let faithful = Irrep { b, a }.is_faithful();
                let irrep = if faithful { format!("δ{a}") } else { format!("~~δ{a}~~") };
                let _ = write!(s, "| {group} | {irrep} |");
                for d in &ds {
                    match self.cell(b, a, *d) {
                        Some(c) if c.group_minimum => {
                            let _ = write!(s, " **{}** |", c.n);
                        }
                        Some(c) => {
                            let _ = write!(s, " {} |", c.n);
                        }
                        None => s.push_str(" |"),
                    }
                }
                s.push('\n');
            }
        }
        s
    }
}
