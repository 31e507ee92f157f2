use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, HalfInt, Result};

/// An exact number of the form `sign * sqrt(radicand)`.
///
/// Squares of Clebsch-Gordan coefficients are rational, so this is closed
/// under the products that appear in tensor entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        SignedSqrtRational { sign: 0, radicand: BigRational::zero() }
    }

    pub fn one() -> Self {
        SignedSqrtRational { sign: 1, radicand: BigRational::one() }
    }

    /// The non-negative square root of `radicand`.
    pub fn sqrt(radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        Self::from_signed_square(radicand)
    }

    /// `sign(r) * sqrt(|r|)`.
    pub fn from_signed_square(r: BigRational) -> Self {
        let sign = if r.is_zero() {
            0
        } else if r.is_positive() {
            1
        } else {
            -1
        };
        SignedSqrtRational { sign, radicand: r.abs() }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    /// The exact square of the value.
    pub fn square(&self) -> BigRational {
        self.radicand.clone()
    }

    /// `sign * value^2`.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            1 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let r = self.radicand.to_f64().unwrap_or(f64::NAN);
        f64::from(self.sign) * r.sqrt()
    }
}

impl Mul for &SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        let sign = self.sign * rhs.sign;
        if sign == 0 {
            return SignedSqrtRational::zero();
        }
        SignedSqrtRational { sign, radicand: &self.radicand * &rhs.radicand }
    }
}

impl Neg for SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn neg(self) -> SignedSqrtRational {
        SignedSqrtRational { sign: -self.sign, radicand: self.radicand }
    }
}

impl From<&SignedSqrtRational> for f64 {
    fn from(x: &SignedSqrtRational) -> f64 {
        x.to_f64()
    }
}

/// Pulls square factors out of `n` by trial division, returning `(f, r)`
/// with `n = f^2 r`. Divisors above a small bound are left in `r`.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut f = BigInt::one();
    let mut r = n.clone();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(10_000u32);
    while p <= limit && &p * &p <= r {
        let p2 = &p * &p;
        while (&r % &p2).is_zero() {
            r /= &p2;
            f *= &p;
        }
        p += 1u32;
    }
    (f, r)
}

impl fmt::Display for SignedSqrtRational {
    /// Renders as e.g. `sqrt(5)/4`, `-sqrt(35)/10` or `1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        if self.sign < 0 {
            write!(f, "-")?;
        }
        // sqrt(p/q) = sqrt(p q) / q
        let p = self.radicand.numer();
        let q = self.radicand.denom();
        let (outer, inner) = split_square(&(p * q));
        let g = outer.gcd(q);
        let num = &outer / &g;
        let den = q / &g;
        let mut body = String::new();
        if inner.is_one() {
            body.push_str(&num.to_string());
        } else if num.is_one() {
            body.push_str(&format!("sqrt({inner})"));
        } else {
            body.push_str(&format!("{num}*sqrt({inner})"));
        }
        if !den.is_one() {
            body.push_str(&format!("/{den}"));
        }
        write!(f, "{body}")
    }
}

impl std::str::FromStr for SignedSqrtRational {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form: `[-]N`, `[-]sqrt(R)` or
    /// `[-]N*sqrt(R)`, optionally followed by `/D`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("not an exact surd: {s:?}"));
        let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
        let t = s.trim();
        let (negative, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (body, den) = match t.rsplit_once('/') {
            Some((b, d)) => (b, int(d)?),
            None => (t, BigInt::one()),
        };
        let (num, inner) = match body.split_once("sqrt(") {
            Some((prefix, rest)) => {
                let inner = int(rest.strip_suffix(')').ok_or_else(bad)?)?;
                let num = match prefix.strip_suffix('*') {
                    Some(n) => int(n)?,
                    None if prefix.is_empty() => BigInt::one(),
                    None => return Err(bad()),
                };
                (num, inner)
            }
            None => (int(body)?, BigInt::one()),
        };
        if den.is_zero() || num.is_negative() || inner.is_negative() {
            return Err(bad());
        }
        let square = BigRational::new(&num * &num * inner, &den * &den);
        let value = Self::sqrt(square);
        Ok(if negative { -value } else { value })
    }
}

fn factorial_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

pub(crate) fn factorial(n: i64) -> BigInt {
    assert!(n >= 0, "factorial of negative number");
    let n = n as usize;
    {
        let table = factorial_table().read().unwrap();
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = factorial_table().write().unwrap();
    while table.len() <= n {
        let next = table.last().unwrap() * BigInt::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

fn check_pair(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::InvalidInput(format!("negative angular momentum {j}")));
    }
    if (j - m).is_half_integral() {
        return Err(Error::InvalidInput(format!("j - m is not integral for j = {j}, m = {m}")));
    }
    Ok(())
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` in the Condon-Shortley
/// convention, evaluated exactly with the Racah formula.
///
/// Selection-rule and triangle violations give zero.
pub fn cg(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<SignedSqrtRational> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j, m)?;

    let zero = Ok(SignedSqrtRational::zero());
    if m1 + m2 != m || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return zero;
    }
    if (j1 + j2 + j).is_half_integral() || j > j1 + j2 || j < (j1 - j2).abs() {
        return zero;
    }

    // All quantities below are integers.
    let int = |h: HalfInt| h.as_integer().expect("integral by construction");
    let a = int(j1 + j2 - j);
    let b = int(j1 - j2 + j);
    let c = int(-j1 + j2 + j);
    let total = int(j1 + j2 + j) + 1;
    let (j1pm, j1mm) = (int(j1 + m1), int(j1 - m1));
    let (j2pm, j2mm) = (int(j2 + m2), int(j2 - m2));
    let (jpm, jmm) = (int(j + m), int(j - m));

    let prefactor_num = BigInt::from(j.twice() + 1)
        * factorial(a)
        * factorial(b)
        * factorial(c)
        * factorial(j1pm)
        * factorial(j1mm)
        * factorial(j2pm)
        * factorial(j2mm)
        * factorial(jpm)
        * factorial(jmm);
    let prefactor = BigRational::new(prefactor_num, factorial(total));

    // sum_k (-1)^k / [k! (a-k)! (j1-m1-k)! (j2+m2-k)! (J-j2+m1+k)! (J-j1-m2+k)!]
    let s1 = int(j - j2 + m1);
    let s2 = int(j - j1 - m2);
    let k_min = 0.max(-s1).max(-s2);
    let k_max = a.min(j1mm).min(j2pm);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = factorial(k)
            * factorial(a - k)
            * factorial(j1mm - k)
            * factorial(j2pm - k)
            * factorial(s1 + k)
            * factorial(s2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return zero;
    }
    let signed = if sum.is_negative() {
        -(&sum * &sum * prefactor)
    } else {
        &sum * &sum * prefactor
    };
    Ok(SignedSqrtRational::from_signed_square(signed))
}
