use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// An exact half-integer stored as twice its value.
///
/// Used for spins `j`, magnetic numbers `m` and starting spins `s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn integer(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integral(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn is_half_integral(self) -> bool {
        self.0 % 2 != 0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `2j + 1` for a spin.
    pub fn dim(self) -> usize {
        debug_assert!(self.0 >= 0);
        (self.0 + 1) as usize
    }

    /// Integer value of `self`, if integral.
    pub fn as_integer(self) -> Option<i64> {
        self.is_integral().then_some(self.0 / 2)
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("not a half-integer: {s:?}"));
        match s.split_once('/') {
            Some((num, "2")) => num.trim().parse::<i64>().map(HalfInt).map_err(|_| bad()),
            Some(_) => Err(bad()),
            None => s.parse::<i64>().map(HalfInt::integer).map_err(|_| bad()),
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
