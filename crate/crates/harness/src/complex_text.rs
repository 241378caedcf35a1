//! Text form of complex numbers and poles: `re+imi` with shortest
//! round-trip decimals, and `inf` for the pole at infinity.

use crate::error::{HarnessError, Result};
use ratiep_core::{Pole, C64};

/// Formats `z` as `re±imi`, e.g. `1.5e0-2e-3i`.
pub fn format_complex(z: C64) -> String {
    format!("{:e}{}{:e}i", z.re, if z.im.is_sign_negative() { "-" } else { "+" }, z.im.abs())
}

/// Parses `re±imi`, a bare real `re`, or a bare imaginary `imi`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t = s.trim();
    let bad = || HarnessError::parse("complex number", format!("`{s}` is not of the form re+imi"));
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(C64::new(re, im))
}

/// Formats a pole as its finite value or `inf`.
pub fn format_pole(p: &Pole) -> String {
    match p.value() {
        Some(z) => format_complex(z),
        None => "inf".to_string(),
    }
}

/// Parses a pole written by [`format_pole`].
pub fn parse_pole(s: &str) -> Result<Pole> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(Pole::infinity()),
        t => Ok(Pole::finite(parse_complex(t)?)),
    }
}
