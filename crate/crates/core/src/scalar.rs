//! Arithmetic backends.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. Two backends are
//! provided: [`Rational`] (arbitrary precision, every sign decision exact) and
//! `f64` (IEEE double, sign decisions made against the named thresholds in
//! [`Tolerances`]).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational number.
pub type Rational = BigRational;

pub trait Scalar: Clone + Debug + PartialOrd + Signed + Send + Sync + 'static {
    /// `true` when arithmetic is exact and tolerances must be ignored.
    const EXACT: bool;

    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Parses `"p/q"`, integers and decimal literals (`"-0.25"`, `"1e-3"`).
    fn parse(s: &str) -> Option<Self>;
    /// Lossless textual form, accepted back by [`Scalar::parse`].
    fn render(&self) -> String;

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            return if q == 0.0 { None } else { Some(p / q) };
        }
        s.parse().ok().filter(|v: &f64| v.is_finite())
    }

    fn render(&self) -> String {
        // Display on f64 is the shortest representation that round-trips.
        format!("{self}")
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).expect("non-finite float has no rational value")
    }

    fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(p), Some(q)) if p.is_finite() && q.is_finite() => p / q,
            // Huge numerator/denominator pairs; fall back to a scaled division.
            _ => {
                let bits = self.numer().bits().max(self.denom().bits()) as i64 - 900;
                let shift = bits.max(0) as usize;
                let p = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
                let q = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
                p / q
            }
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            return if q.is_zero() { None } else { Some(Rational::new(p, q)) };
        }
        parse_decimal(s)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// Exact value of a decimal literal such as `-12.5e-3`.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Named numerical thresholds. Only consulted by the `f64` backend; the exact
/// backend decides every sign without slack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Barycentric coordinates above this are "active" (relative, scale-free).
    pub bary: f64,
    /// Pivot threshold for rank decisions, relative to the largest entry.
    pub rank: f64,
    /// Residual bound for linear solves, relative to the data scale.
    pub solve: f64,
    /// Slack allowed on cone constraints `h . y <= 0`, relative to `|h| |y|`.
    pub feas: f64,
    /// Threshold for "strictly negative" in branch selection.
    pub strict: f64,
    /// Point coincidence threshold, relative to the simplex diameter.
    pub geo: f64,
    /// Minimum |det| for a pair to count as linearly independent.
    pub indep: f64,
    /// Minimum |f(x)| relative to the largest vertex value in sampling checks.
    pub nonzero: f64,
    /// Pivot and reduced-cost threshold inside the simplex method.
    pub lp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            bary: 1e-9,
            rank: 1e-10,
            solve: 1e-9,
            feas: 1e-9,
            strict: 1e-8,
            geo: 1e-9,
            indep: 1e-8,
            nonzero: 1e-7,
            lp: 1e-11,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 9] = [
        "bary", "rank", "solve", "feas", "strict", "geo", "indep", "nonzero", "lp",
    ];

    pub fn get_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "bary" => &mut self.bary,
            "rank" => &mut self.rank,
            "solve" => &mut self.solve,
            "feas" => &mut self.feas,
            "strict" => &mut self.strict,
            "geo" => &mut self.geo,
            "indep" => &mut self.indep,
            "nonzero" => &mut self.nonzero,
            "lp" => &mut self.lp,
            _ => return None,
        })
    }

    /// Applies `RCP_TOL_<NAME>` variables (e.g. `RCP_TOL_FEAS=1e-8`).
    pub fn with_env_overrides(mut self) -> Result<Self, String> {
        for name in Self::NAMES {
            let key = format!("RCP_TOL_{}", name.to_ascii_uppercase());
            if let Ok(raw) = std::env::var(&key) {
                let v: f64 = raw.trim().parse().map_err(|_| format!("{key}: not a number: {raw:?}"))?;
                *self.get_mut(name).expect("known name") = v;
            }
        }
        Ok(self)
    }

    /// Parses `name=value`.
    pub fn set_from_str(&mut self, spec: &str) -> Result<(), String> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| format!("tolerance override must be name=value, got {spec:?}"))?;
        let slot = self
            .get_mut(name.trim())
            .ok_or_else(|| format!("unknown tolerance {name:?}"))?;
        *slot = value
            .trim()
            .parse()
            .map_err(|_| format!("tolerance {name}: not a number: {value:?}"))?;
        Ok(())
    }
}

/// `x < 0`, or `x < -tau * scale` in floating point.
pub fn is_negative<S: Scalar>(x: &S, tau: f64, scale: f64) -> bool {
    if S::EXACT {
        x.is_negative()
    } else {
        x.to_f64() < -tau * scale
    }
}

/// `x > 0`, or `x > tau * scale` in floating point.
pub fn is_positive<S: Scalar>(x: &S, tau: f64, scale: f64) -> bool {
    if S::EXACT {
        x.is_positive()
    } else {
        x.to_f64() > tau * scale
    }
}

/// `x == 0`, or `|x| <= tau * scale` in floating point.
pub fn is_zero<S: Scalar>(x: &S, tau: f64, scale: f64) -> bool {
    if S::EXACT {
        x.is_zero()
    } else {
        x.to_f64().abs() <= tau * scale
    }
}

/// `x <= 0`, or `x <= tau * scale` in floating point.
pub fn is_nonpositive<S: Scalar>(x: &S, tau: f64, scale: f64) -> bool {
    !is_positive(x, tau, scale)
}
