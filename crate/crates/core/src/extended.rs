//! Values in (−∞, +∞].

use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    /// Panics on NaN; finite values must never carry it.
    pub fn finite(v: f64) -> Self {
        assert!(!v.is_nan(), "ExtendedReal::finite called with NaN");
        if v == f64::INFINITY {
            ExtendedReal::PosInfinity
        } else {
            ExtendedReal::Finite(v)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn value(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::PosInfinity => None,
        }
    }

    /// `f64::INFINITY` for the infinite case.
    pub fn to_f64(self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }

    pub fn scale(self, lambda: f64) -> Self {
        debug_assert!(lambda > 0.0);
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(lambda * v),
            inf => inf,
        }
    }
}

impl std::ops::Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::finite(a + b),
            _ => ExtendedReal::PosInfinity,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        ExtendedReal::finite(v)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => f.write_str(&format_g17(*v)),
            ExtendedReal::PosInfinity => f.write_str("inf"),
        }
    }
}

/// Formats with 17 significant digits, `%g` style, `inf`/`-inf`/`nan` for specials.
pub fn format_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, v);
        trim_fraction(&fixed)
    } else {
        format!("{}e{}", trim_fraction(mantissa), exp)
    }
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2.0f64.ln() * 2.0 - 1.0, 1e-300, 6.02e23, -7.5, 123456789.0] {
            let s = format_g17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(0.25), "0.25");
        assert_eq!(format_g17(1e20), "1e20");
    }

    #[test]
    fn infinity_renders_lowercase() {
        assert_eq!(ExtendedReal::PosInfinity.to_string(), "inf");
        assert!(ExtendedReal::Finite(1e300) < ExtendedReal::PosInfinity);
    }

    #[test]
    fn addition_absorbs_infinity() {
        let s = ExtendedReal::Finite(1.0) + ExtendedReal::PosInfinity;
        assert_eq!(s, ExtendedReal::PosInfinity);
    }
}
