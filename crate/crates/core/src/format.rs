//! The code JSON interchange format.
//!
//! Codes are always written in the mirrored labeling (`|0>` carries the
//! `w = 0` end of the support). Only `|0>` is listed; `|1>` is its mirror
//! `w -> n - w`. Amplitudes are decimal strings with 17 significant digits,
//! and closed-form amplitudes additionally carry an `exact` surd.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angular::SignedSqrtRational;
use crate::bindihedral::Irrep;
use crate::dickemap::{Labeling, MultiqubitCode, Provenance};
use crate::families::GroupInfo;
use crate::{Error, HalfInt, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupJson {
    pub degree: u32,
    pub faithful: bool,
    #[serde(default)]
    pub exotic: bool,
    #[serde(default)]
    pub name: String,
    /// Logical images of `X`, `Z` and `Ph(pi/b)`.
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodewordEntry {
    pub weight: usize,
    pub amplitude: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeJson {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub d: u32,
    pub group: GroupJson,
    pub rep: Irrep,
    pub labeling: Labeling,
    pub codewords: Vec<CodewordEntry>,
    #[serde(default)]
    pub residuals: BTreeMap<String, f64>,
}

/// `x` as a plain decimal with 17 significant digits.
pub fn format_amplitude(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

impl CodeJson {
    pub fn from_code(code: &MultiqubitCode, d: u32, residuals: BTreeMap<String, f64>) -> Result<Self> {
        let p = code
            .provenance()
            .ok_or_else(|| Error::InvalidInput("code JSON needs the originating irrep".into()))?;
        let rep = p.rep;
        let info = GroupInfo::of(rep);
        let mirrored = code.relabeled(Labeling::Mirrored);
        let exact = mirrored.exact_amp0();
        let codewords = mirrored
            .amp0()
            .iter()
            .map(|(w, a)| CodewordEntry {
                weight: *w,
                amplitude: format_amplitude(*a),
                exact: exact.and_then(|e| e.get(w)).map(|x| x.to_string()),
            })
            .collect();
        Ok(CodeJson {
            n: code.n(),
            k: 2,
            d,
            group: GroupJson {
                degree: info.degree,
                faithful: info.faithful,
                exotic: info.exotic,
                name: info.name,
                generators: vec![
                    "X".into(),
                    "Z".into(),
                    format!("Ph(pi/{})^{}", rep.b, 2 * rep.a - 1),
                ],
            },
            rep,
            labeling: Labeling::Mirrored,
            codewords,
            residuals,
        })
    }

    /// Rebuilds the code; exact surds, when present, take precedence over
    /// the decimal amplitudes.
    pub fn to_code(&self) -> Result<MultiqubitCode> {
        if self.k != 2 {
            return Err(Error::InvalidInput(format!("only K = 2 codes are supported, got K = {}", self.k)));
        }
        let rep = Irrep::new(self.rep.b, self.rep.a)?;
        let j = HalfInt::from_twice(self.n as i64);
        let mut amps = Vec::with_capacity(self.codewords.len());
        let mut exact = Vec::new();
        for c in &self.codewords {
            let a = match &c.exact {
                Some(e) => {
                    let x: SignedSqrtRational = e.parse()?;
                    let v = x.to_f64();
                    exact.push((c.weight, x));
                    v
                }
                None => c
                    .amplitude
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad amplitude {:?}", c.amplitude)))?,
            };
            amps.push((c.weight, a));
        }
        let code = MultiqubitCode::new(self.n, amps, self.labeling, Some(Provenance { rep, j }))?;
        let code = if !exact.is_empty() && exact.len() == self.codewords.len() {
            code.with_exact(exact)
        } else {
            code
        };
        // support must be a lattice of the declared irrep
        code.to_spin_code()?;
        Ok(code)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::code1;

    #[test]
    fn amplitude_digits() {
        assert_eq!(format_amplitude(5f64.sqrt() / 4.0), "0.55901699437494745");
        let small = format_amplitude(-0.0595089);
        assert!(small.starts_with("-0.05950890"));
        assert_eq!(small.trim_start_matches("-0.0").len(), 17);
        let x = 0.123456789012345678f64;
        assert_eq!(format_amplitude(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn round_trip_of_code1() {
        let (code, params) = code1(4).unwrap();
        let json = CodeJson::from_code(&code, params.d, BTreeMap::new()).unwrap();
        assert_eq!(json.codewords[0].exact.as_deref(), Some("sqrt(5)/4"));
        assert_eq!(json.codewords[1].exact.as_deref(), Some("sqrt(11)/4"));
        assert_eq!(json.group.generators[2], "Ph(pi/4)^5");
        let text = json.to_json_string().unwrap();
        let back = CodeJson::from_json_str(&text).unwrap().to_code().unwrap();
        assert_eq!(back, code);
    }

    #[test]
    fn lattice_labeling_is_accepted() {
        let (code, params) = code1(5).unwrap();
        let mut json = CodeJson::from_code(&code, params.d, BTreeMap::new()).unwrap();
        json.labeling = Labeling::Lattice;
        for c in &mut json.codewords {
            c.weight = json.n - c.weight;
        }
        let back = json.to_code().unwrap();
        assert_eq!(back.relabeled(Labeling::Mirrored).amp0(), code.amp0());
    }

    #[test]
    fn off_lattice_support_is_rejected() {
        let (code, params) = code1(4).unwrap();
        let mut json = CodeJson::from_code(&code, params.d, BTreeMap::new()).unwrap();
        json.rep = Irrep { b: 4, a: 2 };
        assert!(json.to_code().is_err());
    }
}
