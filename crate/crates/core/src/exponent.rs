//! Exponents `r ∈ [1, ∞]` for ℓʳ norms and their conjugates.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent `r` with `1 ≤ r ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(r: f64) -> Result<Self> {
        if r.is_nan() || r < 1.0 {
            return Err(Error::domain(format!("exponent must lie in [1, inf], got {r}")));
        }
        Ok(Exponent(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/r`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// The conjugate exponent `r'` with `1/r + 1/r' = 1`.
    pub fn conjugate(self) -> Exponent {
        if self.0 == 1.0 {
            Exponent::INFINITY
        } else if self.is_infinite() {
            Exponent::ONE
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }

    /// ℓʳ norm of a sequence of nonnegative magnitudes.
    ///
    /// Finite exponents other than 1 are evaluated relative to the largest
    /// magnitude so that neither overflow nor underflow occurs.
    pub fn norm_of_moduli(self, moduli: &[f64]) -> f64 {
        let max = moduli.iter().copied().fold(0.0_f64, f64::max);
        if self.is_infinite() {
            return max;
        }
        if self.0 == 1.0 {
            return moduli.iter().sum();
        }
        if max == 0.0 {
            return 0.0;
        }
        let r = self.0;
        let s: f64 = if r == 2.0 {
            moduli.iter().map(|&x| (x / max) * (x / max)).sum()
        } else {
            moduli.iter().map(|&x| (x / max).powf(r)).sum()
        };
        max * s.powf(1.0 / r)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let r = match t.as_str() {
            "inf" | "infinity" | "∞" => f64::INFINITY,
            _ => t
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("cannot parse exponent {s:?}")))?,
        };
        Exponent::new(r)
    }
}

// JSON has no infinity, so ∞ travels as the string "inf".
impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(r) => Exponent::new(r),
            Raw::Text(t) => t.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}
