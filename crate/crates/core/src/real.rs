//! Real numbers that optionally remember an exact rational value.
//!
//! Sensor coordinates and domain sizes enter arithmetic membership tests
//! such as `i·b/a ∈ ℕ`, which cannot be decided from floats. A [`Real`]
//! written as `"1/3"` or `"1/2pi"` keeps the exact ratio next to its
//! floating-point value; plain numbers carry only the float.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact value `ratio` or `ratio·π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exact {
    pub ratio: Rational64,
    pub times_pi: bool,
}

impl Exact {
    pub fn value(&self) -> f64 {
        let v = *self.ratio.numer() as f64 / *self.ratio.denom() as f64;
        if self.times_pi {
            v * std::f64::consts::PI
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real {
    value: f64,
    exact: Option<Exact>,
}

impl Real {
    pub fn float(value: f64) -> Self {
        Self { value, exact: None }
    }

    /// Exact rational `numer/denom`.
    ///
    /// Panics if `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_exact(Exact {
            ratio: Rational64::new(numer, denom),
            times_pi: false,
        })
    }

    /// Exact rational multiple of π.
    pub fn ratio_pi(numer: i64, denom: i64) -> Self {
        Self::from_exact(Exact {
            ratio: Rational64::new(numer, denom),
            times_pi: true,
        })
    }

    pub fn from_exact(exact: Exact) -> Self {
        Self {
            value: exact.value(),
            exact: Some(exact),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Exact> {
        self.exact
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

impl From<f64> for Real {
    fn from(value: f64) -> Self {
        Real::float(value)
    }
}

impl From<i32> for Real {
    fn from(value: i32) -> Self {
        Real::ratio(value as i64, 1)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            None => write!(f, "{}", self.value),
            Some(e) => {
                let (n, d) = (*e.ratio.numer(), *e.ratio.denom());
                match (e.times_pi, n, d) {
                    (true, 1, 1) => write!(f, "pi"),
                    (true, -1, 1) => write!(f, "-pi"),
                    (true, n, 1) => write!(f, "{n}pi"),
                    (true, n, d) => write!(f, "{n}/{d}pi"),
                    (false, n, 1) => write!(f, "{n}"),
                    (false, n, d) => write!(f, "{n}/{d}"),
                }
            }
        }
    }
}

impl FromStr for Real {
    type Err = Error;

    /// Accepts decimal floats (`"0.25"`), integers and fractions (`"3"`,
    /// `"-1/3"`), and rational multiples of π (`"pi"`, `"2pi"`, `"1/2 pi"`).
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse real number {text:?}"));
        let s = text.trim();
        let (body, times_pi) = match s.strip_suffix("pi") {
            Some(rest) => (rest.trim(), true),
            None => (s, false),
        };
        let ratio = if times_pi && (body.is_empty() || body == "-" || body == "+") {
            let sign = if body == "-" { -1 } else { 1 };
            Some(Rational64::from_integer(sign))
        } else if let Some((n, d)) = body.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Some(Rational64::new(n, d))
        } else if let Ok(n) = body.parse::<i64>() {
            Some(Rational64::from_integer(n))
        } else {
            None
        };
        match ratio {
            Some(ratio) => Ok(Real::from_exact(Exact { ratio, times_pi })),
            None if times_pi => {
                let v: f64 = body.parse().map_err(|_| bad())?;
                Ok(Real::float(v * std::f64::consts::PI))
            }
            None => {
                let v: f64 = body.parse().map_err(|_| bad())?;
                if !v.is_finite() {
                    return Err(bad());
                }
                Ok(Real::float(v))
            }
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.exact {
            Some(_) => serializer.serialize_str(&self.to_string()),
            None => serializer.serialize_f64(self.value),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RealVisitor;

        impl Visitor<'_> for RealVisitor {
            type Value = Real;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a string such as \"1/3\" or \"1/2pi\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Real, E> {
                Ok(Real::float(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Real, E> {
                Ok(Real::ratio(v, 1))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Real, E> {
                i64::try_from(v)
                    .map(|v| Real::ratio(v, 1))
                    .map_err(|_| E::custom("integer out of range"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Real, E> {
                v.parse().map_err(|e: Error| E::custom(e.to_string()))
            }
        }

        deserializer.deserialize_any(RealVisitor)
    }
}

/// Best rational approximation of `x` with denominator at most `max_denom`,
/// from the continued-fraction convergents and semiconvergents.
pub fn best_rational(x: f64, max_denom: i64) -> Rational64 {
    if !x.is_finite() {
        return Rational64::from_integer(0);
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut frac = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = frac.floor();
        if a > i64::MAX as f64 / 4.0 {
            break;
        }
        let a = a as i64;
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_denom {
            // Largest admissible semiconvergent, if it beats the last convergent.
            let k = (max_denom - q0) / q1;
            let (ps, qs) = (k * p1 + p0, k * q1 + q0);
            let semi = ps as f64 / qs as f64;
            let conv = p1 as f64 / q1 as f64;
            if qs > 0 && (semi - x.abs()).abs() < (conv - x.abs()).abs() {
                return Rational64::new(sign * ps, qs);
            }
            break;
        }
        let p2 = a * p1 + p0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let rem = frac - a as f64;
        if rem < 1e-15 {
            break;
        }
        frac = 1.0 / rem;
    }
    Rational64::new(sign * p1, q1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_forms() {
        let third: Real = "1/3".parse().unwrap();
        assert_eq!(third.exact().unwrap().ratio, Rational64::new(1, 3));
        assert!((third.value() - 1.0 / 3.0).abs() < 1e-16);

        let half_pi: Real = "1/2 pi".parse().unwrap();
        assert!(half_pi.exact().unwrap().times_pi);
        assert!((half_pi.value() - std::f64::consts::FRAC_PI_2).abs() < 1e-16);

        assert_eq!("pi".parse::<Real>().unwrap().to_string(), "pi");
        assert_eq!(
            "-pi".parse::<Real>().unwrap().value(),
            -std::f64::consts::PI
        );
        assert_eq!("4".parse::<Real>().unwrap().to_string(), "4");
        assert!(!"0.37".parse::<Real>().unwrap().is_exact());
    }

    #[test]
    fn rejects_garbage() {
        assert!("1/0".parse::<Real>().is_err());
        assert!("abc".parse::<Real>().is_err());
        assert!("".parse::<Real>().is_err());
        assert!("inf".parse::<Real>().is_err());
    }

    #[test]
    fn json_keeps_exactness() {
        let r: Real = serde_json::from_str("\"2/6\"").unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"1/3\"");
        let f: Real = serde_json::from_str("0.25").unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), "0.25");
        let i: Real = serde_json::from_str("2").unwrap();
        assert!(i.is_exact());
    }

    #[test]
    fn best_rational_recovers_simple_fractions() {
        assert_eq!(best_rational(0.37, 1_000_000), Rational64::new(37, 100));
        assert_eq!(best_rational(1.0 / 3.0, 1_000_000), Rational64::new(1, 3));
        assert_eq!(best_rational(-0.75, 10), Rational64::new(-3, 4));
        assert_eq!(
            best_rational(std::f64::consts::PI, 7),
            Rational64::new(22, 7)
        );
    }
}
