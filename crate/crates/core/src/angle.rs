//! Angle expressions and wrapping.
//!
//! Angles are written either as decimal radians (`1.2970`) or as rational
//! multiples of π: `pi`, `-pi`, `3*pi/4`, `pi/2`, `-2*pi/3`. The rational form
//! is kept exact until the final multiplication.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Wraps an angle into `(-π, π]`.
pub fn wrap_pi(x: f64) -> f64 {
    let mut y = x.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_tau(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y >= TAU {
        0.0
    } else {
        y
    }
}

pub fn parse_angle(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidArgument(format!("cannot parse angle `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let lower = s.to_ascii_lowercase().replace('π', "pi");
    let Some(pos) = lower.find("pi") else {
        let v: f64 = lower.parse().map_err(|_| bad())?;
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    };
    let (head, tail) = (&lower[..pos], &lower[pos + 2..]);
    let numerator: i64 = match head {
        "" | "+" => 1,
        "-" => -1,
        h => {
            let h = h.strip_suffix('*').ok_or_else(bad)?;
            h.parse().map_err(|_| bad())?
        }
    };
    let denominator: i64 = match tail {
        "" => 1,
        t => {
            let t = t.strip_prefix('/').ok_or_else(bad)?;
            t.parse().map_err(|_| bad())?
        }
    };
    if denominator <= 0 {
        return Err(bad());
    }
    Ok(numerator as f64 * PI / denominator as f64)
}

/// Parses a `theta,phi` pair.
pub fn parse_angle_pair(text: &str) -> Result<(f64, f64)> {
    let mut parts = text.split(',');
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::InvalidArgument(format!("expected `theta,phi`, got `{text}`")));
    };
    Ok((parse_angle(a)?, parse_angle(b)?))
}
