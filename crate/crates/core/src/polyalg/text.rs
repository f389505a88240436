//! Line-oriented polynomial format: one monomial per line,
//! `e₁ e₂ … e_m : coefficient`. Blank lines and `#` comments are ignored and
//! the exponent count of the first monomial fixes the number of variables.

use std::fmt::Write as _;
use std::str::FromStr;

use super::Polynomial;
use crate::error::{Error, Result};

impl Polynomial {
    /// Parses the text format. A file with no monomials is rejected because
    /// it cannot fix the variable count.
    pub fn parse(text: &str) -> Result<Self> {
        let mut num_vars: Option<usize> = None;
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: line_no, message };
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| err("expected `exponents : coefficient`".into()))?;
            let exps = lhs
                .split_whitespace()
                .map(u32::from_str)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| err(format!("bad exponent: {e}")))?;
            if exps.is_empty() {
                return Err(err("no exponents before `:`".into()));
            }
            let coeff: f64 = rhs
                .trim()
                .parse()
                .map_err(|e| err(format!("bad coefficient `{}`: {e}", rhs.trim())))?;
            if !coeff.is_finite() {
                return Err(err("coefficient is not finite".into()));
            }
            match num_vars {
                None => num_vars = Some(exps.len()),
                Some(n) if n != exps.len() => return Err(err(format!("expected {n} exponents, found {}", exps.len()))),
                _ => {}
            }
            terms.push((exps, coeff));
        }
        let n = num_vars.ok_or(Error::Parse {
            line: 0,
            message: "no monomials found".into(),
        })?;
        Polynomial::from_terms(n, terms)
    }

    /// Serializes to the text format; `parse(to_text(p)) == p`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.is_zero() {
            // keep the variable count recoverable
            let zeros = vec!["0"; self.num_vars()].join(" ");
            let _ = writeln!(out, "{zeros} : 0");
            return out;
        }
        for (mi, c) in self.terms() {
            let e: Vec<String> = mi.exponents().iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{} : {c:?}", e.join(" "));
        }
        out
    }
}

impl FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Polynomial::parse(s)
    }
}
