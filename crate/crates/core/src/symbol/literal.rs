//! Text form of a symbol:
//!
//! ```text
//! V: 0=0.1; 1=0.3; 2=0.1-0.2i  sing: 0,0.5,0; pi,0.5,-0.3
//! ```
//!
//! Both sections are optional (an empty string is the constant symbol 1).
//! `V` lists `k=V_k` for `k ≥ 0`; `sing` lists `t,alpha,beta_im` triples with
//! `t` in `[0, 2π)`. Numbers may be written as multiples of `pi`
//! (`pi`, `pi/2`, `0.5pi`, `3*pi/4`).

use super::{AnalyticPart, FhSymbol, Singularity};
use crate::{Complex, Error, Result};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt::Write;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses a real number, allowing `pi` multiples.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some(idx) = s.find("pi") {
        let (pre, post) = (s[..idx].trim(), s[idx + 2..].trim());
        let pre = pre.strip_suffix('*').unwrap_or(pre).trim();
        let factor = match pre {
            "" | "+" => 1.0,
            "-" => -1.0,
            p => parse_plain(p)?,
        };
        let div = match post.strip_prefix('/') {
            Some(d) => parse_plain(d.trim())?,
            None if post.is_empty() => 1.0,
            None => return Err(perr(format!("bad number `{s}`"))),
        };
        return Ok(factor * PI / div);
    }
    parse_plain(s)
}

fn parse_plain(s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| perr(format!("bad number `{s}`")))?;
    if !v.is_finite() {
        return Err(perr(format!("non-finite number `{s}`")));
    }
    Ok(v)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
fn parse_complex(s: &str) -> Result<Complex> {
    let s = s.trim();
    if let Some(body) = s.strip_suffix('i') {
        // Split at the last sign that is not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let (re, im) = match split {
            Some(i) => (parse_plain(&body[..i])?, &body[i..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => parse_plain(x)?,
        };
        return Ok(Complex::new(re, im));
    }
    Ok(Complex::new(parse_plain(s)?, 0.0))
}

/// Parses a symbol literal.
pub fn parse_symbol(text: &str) -> Result<FhSymbol> {
    let text = text.trim();
    let (v_part, s_part) = match (text.find("V:"), text.find("sing:")) {
        (Some(v), Some(s)) if v < s => (Some(&text[v + 2..s]), Some(&text[s + 5..])),
        (Some(v), Some(s)) => (Some(&text[v + 2..]), Some(&text[s + 5..v])),
        (Some(v), None) => (Some(&text[v + 2..]), None),
        (None, Some(s)) => (None, Some(&text[s + 5..])),
        (None, None) if text.is_empty() => (None, None),
        (None, None) => return Err(perr("expected `V:` and/or `sing:` sections")),
    };
    if let Some(first) = [text.find("V:"), text.find("sing:")].into_iter().flatten().min() {
        if !text[..first].trim().is_empty() {
            return Err(perr(format!("unexpected text `{}`", text[..first].trim())));
        }
    }

    let mut pairs = Vec::new();
    for item in v_part.unwrap_or("").split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, c) = item
            .split_once('=')
            .ok_or_else(|| perr(format!("V entry `{item}` is not k=value")))?;
        let k: i64 = k.trim().parse().map_err(|_| perr(format!("bad index `{k}`")))?;
        if k < 0 {
            return Err(perr("V entries take k >= 0; V_{-k} is the conjugate"));
        }
        pairs.push((k, parse_complex(c)?));
    }
    let analytic = AnalyticPart::from_pairs(&pairs)?;

    let mut sings = Vec::new();
    for item in s_part.unwrap_or("").split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let f: Vec<&str> = item.split(',').collect();
        if f.len() != 3 {
            return Err(perr(format!("singularity `{item}` is not t,alpha,beta_im")));
        }
        sings.push(Singularity::new(
            parse_real(f[0])?,
            parse_real(f[1])?,
            parse_real(f[2])?,
        ));
    }
    FhSymbol::new(analytic, sings)
}

/// Formats a symbol in the literal syntax (round-trips through
/// [`parse_symbol`] exactly).
pub fn format_symbol(sym: &FhSymbol) -> String {
    let mut out = String::new();
    let v = sym.analytic();
    if !v.is_zero() {
        out.push_str("V: ");
        let terms: Vec<String> = (0..=v.degree() as i64)
            .filter(|&k| v.coeff(k) != Complex::new(0.0, 0.0))
            .map(|k| {
                let c = v.coeff(k);
                if c.im == 0.0 {
                    format!("{k}={:?}", c.re)
                } else {
                    format!("{k}={:?}{:+?}i", c.re, c.im)
                }
            })
            .collect();
        out.push_str(&terms.join("; "));
    }
    if !sym.singularities().is_empty() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str("sing: ");
        for (j, s) in sym.singularities().iter().enumerate() {
            if j > 0 {
                out.push_str("; ");
            }
            let _ = write!(out, "{:?},{:?},{:?}", s.t, s.alpha, s.beta_im);
        }
    }
    out.trim().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let s = parse_symbol("sing: 0,1,0").unwrap();
        assert_eq!(s.singularities(), &[Singularity::new(0.0, 1.0, 0.0)]);
        assert_eq!(parse_symbol("").unwrap(), FhSymbol::constant());
        let s = parse_symbol("V: 0=0.1; 1=0.3-0.2i sing: 0,0.5,0; pi,0.5,-0.3").unwrap();
        assert_eq!(s.analytic().coeff(1), Complex::new(0.3, -0.2));
        assert_eq!(s.analytic().v0(), 0.1);
        assert_eq!(s.singularities()[1].t, PI);
        let s = parse_symbol("sing: pi/2,1,0 V: 1=1e-1").unwrap();
        assert_eq!(s.analytic().coeff(1), Complex::new(0.1, 0.0));
        assert_eq!(s.singularities()[0].t, PI / 2.0);
    }

    #[test]
    fn parse_numbers() {
        assert_eq!(parse_real("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_real("0.5pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_complex("-2i").unwrap(), Complex::new(0.0, -2.0));
        assert_eq!(parse_complex("1e-3+2e-2i").unwrap(), Complex::new(1e-3, 2e-2));
        assert_eq!(parse_complex("i").unwrap(), Complex::new(0.0, 1.0));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_symbol("junk"), Err(Error::Parse(_))));
        assert!(matches!(parse_symbol("sing: 0,1"), Err(Error::Parse(_))));
        assert!(matches!(parse_symbol("V: -1=2"), Err(Error::Parse(_))));
        assert!(matches!(parse_symbol("V: 0=1i"), Err(Error::InvalidSymbol(_))));
        assert!(matches!(
            parse_symbol("sing: 0,1,0; 0,1,0"),
            Err(Error::CoincidentSingularities(0, 1))
        ));
        assert!(matches!(parse_symbol("sing: x,1,0"), Err(Error::Parse(_))));
    }

    #[test]
    fn roundtrip() {
        let text = "V: 0=0.1; 2=0.30000000000000004-0.2i sing: 0.1,0.5,0.0; 3.0,1.25,-0.3";
        let s = parse_symbol(text).unwrap();
        let again = parse_symbol(&format_symbol(&s)).unwrap();
        assert_eq!(s, again);
    }
}
