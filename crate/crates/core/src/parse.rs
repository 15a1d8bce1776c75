//! Line-based text format for Verma module vectors.
//!
//! ```text
//! # comment
//! module: 0,0,0,n+3
//! prefix: d12 d13 d14 d15
//! -1 p2 d23 d24 | f5^n+1 x12
//! ```
//!
//! Each term line is `[coeff] <U₋ factors> | <ambient factors>`. U₋ factors are
//! `p<i>[^e]` (∂_i) and `d<ij>` with d_ji = −d_ij, multiplied left to right
//! after the prefix. Ambient factors are `x<i>`, `x<ij>`, `f<ij>` (x*_ij) and
//! `f<i>` (x*_i), again with x_ji = −x_ij. Exponents are integers or `m`, `n`
//! plus an optional integer offset.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sl5::{AmbMono, AmbVec, Var};
use crate::uminus::{pair_index, UElem};
use crate::verma::{VermaElement, VermaModule};
use crate::weight::Weight;

/// Values of the family parameters appearing in exponents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub m: u32,
    pub n: u32,
}

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

/// `3`, `n`, `m+2`, `n+1`.
pub fn parse_exponent(s: &str, params: Params) -> Result<u32> {
    let s = s.trim().trim_start_matches('{').trim_end_matches('}');
    let (head, off) = match s.split_once('+') {
        Some((h, o)) => (h, o.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent offset in {s:?}")))?),
        None => (s, 0),
    };
    let base = match head {
        "m" => params.m,
        "n" => params.n,
        _ => head.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))?,
    };
    Ok(base + off)
}

fn digit(c: char) -> Result<usize> {
    match c.to_digit(10) {
        Some(d @ 1..=5) => Ok(d as usize - 1),
        _ => err(format!("index {c:?} is not in 1..5")),
    }
}

/// Splits `x12^n+1` into ("x", [0,1], exponent).
fn factor(tok: &str, params: Params) -> Result<(char, Vec<usize>, u32)> {
    let (name, exp) = match tok.split_once('^') {
        Some((a, e)) => (a, parse_exponent(e, params)?),
        None => (tok, 1),
    };
    let mut chars = name.chars();
    let Some(kind) = chars.next() else {
        return err("empty factor");
    };
    let idx = chars.map(digit).collect::<Result<Vec<_>>>()?;
    Ok((kind, idx, exp))
}

/// Product of U₋ factors, left to right.
pub fn parse_uword(s: &str, params: Params) -> Result<UElem> {
    let mut u = UElem::one();
    for tok in s.split_whitespace() {
        let (kind, idx, exp) = factor(tok, params)?;
        for _ in 0..exp {
            u = match (kind, idx.as_slice()) {
                ('p', [i]) => u.mul(&UElem::partial(*i)),
                ('d', [i, j]) => u.mul(&UElem::form(*i, *j)?),
                _ => return err(format!("unknown U factor {tok:?}")),
            };
        }
    }
    Ok(u)
}

/// Monomial in the ambient polynomial ring, with the sign from reordering pair indices.
pub fn parse_ambient(s: &str, params: Params) -> Result<(AmbMono, i32)> {
    let mut m = AmbMono::ONE;
    let mut sign = 1;
    for tok in s.split_whitespace() {
        let (kind, idx, exp) = factor(tok, params)?;
        let var = match (kind, idx.as_slice()) {
            ('x', [i]) => Var::X(*i),
            ('f', [i]) => Var::F(*i),
            ('x', [i, j]) | ('f', [i, j]) => {
                let Some((p, s)) = pair_index(*i, *j) else {
                    return err(format!("degenerate pair in {tok:?}"));
                };
                if exp % 2 == 1 {
                    sign *= s;
                }
                if kind == 'x' {
                    Var::X2(p)
                } else {
                    Var::F2(p)
                }
            }
            _ => return err(format!("unknown ambient factor {tok:?}")),
        };
        let e = m.0[var.index()] as u32 + exp;
        m.0[var.index()] = u8::try_from(e).map_err(|_| Error::Parse(format!("exponent too large in {tok:?}")))?;
    }
    Ok((m, sign))
}

/// A parsed vector: header fields and a list of (U₋ part, ambient part) terms.
#[derive(Clone, Debug, Default)]
pub struct ParsedVector {
    pub headers: BTreeMap<String, String>,
    pub terms: Vec<(UElem, AmbVec)>,
}

impl ParsedVector {
    /// The `module:` header as a weight.
    pub fn module(&self, params: Params) -> Result<Option<Weight>> {
        let Some(s) = self.headers.get("module") else {
            return Ok(None);
        };
        let parts = s.split(',').map(|p| parse_exponent(p, params)).collect::<Result<Vec<_>>>()?;
        match parts.as_slice() {
            [a, b, c, d] => Ok(Some(Weight::new(*a as i32, *b as i32, *c as i32, *d as i32))),
            _ => err(format!("module header {s:?} needs four entries")),
        }
    }

    /// Projects the ambient parts onto F(μ) and assembles the Verma element.
    pub fn to_verma(&self, module: &VermaModule) -> Result<VermaElement> {
        let mut by_mono: BTreeMap<AmbMono, UElem> = BTreeMap::new();
        for (u, amb) in &self.terms {
            for (m, c) in amb {
                by_mono.entry(*m).or_default().add_scaled(u, c);
            }
        }
        let mut out = module.zero();
        for (m, u) in by_mono {
            let coords = module.irrep.project(&AmbVec::from([(m, Rational::one())]))?;
            out.add_scaled(&VermaElement::tensor(module.mu, &u, &coords), &Rational::one());
        }
        Ok(out)
    }
}

fn is_coeff(tok: &str) -> bool {
    let t = tok.trim_start_matches(['+', '-']);
    t.is_empty() || t.chars().all(|c| c.is_ascii_digit() || c == '/')
}

pub fn parse_vector(text: &str, params: Params) -> Result<ParsedVector> {
    let mut out = ParsedVector::default();
    let mut prefix = UElem::one();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| Error::Parse(format!("line {}: {e}", lineno + 1));
        if let Some((key, value)) = line.split_once(':') {
            let (key, value) = (key.trim(), value.trim());
            if key == "prefix" {
                prefix = parse_uword(value, params).map_err(at)?;
            }
            out.headers.insert(key.to_string(), value.to_string());
            continue;
        }
        let Some((left, right)) = line.split_once('|') else {
            return Err(at(Error::Parse("missing '|'".into())));
        };
        let mut toks = left.split_whitespace().peekable();
        let mut coeff = Rational::one();
        if let Some(t) = toks.peek() {
            if is_coeff(t) {
                let t = toks.next().unwrap_or_default();
                coeff = match t {
                    "+" => Rational::one(),
                    "-" => -Rational::one(),
                    _ => t.trim_start_matches('+').parse::<Rational>().map_err(|_| at(Error::Parse(format!("bad coefficient {t:?}"))))?,
                };
            }
        }
        let rest: Vec<&str> = toks.collect();
        let u = prefix.mul(&parse_uword(&rest.join(" "), params).map_err(at)?);
        let (mono, sign) = parse_ambient(right, params).map_err(at)?;
        let mut amb = AmbVec::new();
        amb.insert(mono, &coeff * &Rational::from_int(sign as i64));
        out.terms.push((u, amb));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uminus::Monomial;

    #[test]
    fn exponents() {
        let p = Params { m: 2, n: 3 };
        assert_eq!(parse_exponent("4", p).unwrap(), 4);
        assert_eq!(parse_exponent("n", p).unwrap(), 3);
        assert_eq!(parse_exponent("n+1", p).unwrap(), 4);
        assert_eq!(parse_exponent("{m+3}", p).unwrap(), 5);
        assert!(parse_exponent("k", p).is_err());
    }

    #[test]
    fn words_and_signs() {
        let p = Params::default();
        let u = parse_uword("d21 p3^2", p).unwrap();
        let mut m = Monomial::form(0);
        m.partials[2] = 2;
        assert_eq!(u, UElem::monomial(m, -Rational::one()));
        assert!(parse_uword("d22", p).is_err());
        assert!(parse_uword("d12 d12", p).unwrap().is_zero());

        let (mono, s) = parse_ambient("x21 f5^n", Params { m: 0, n: 2 }).unwrap();
        assert_eq!(s, -1);
        assert_eq!(mono.0[Var::X2(0).index()], 1);
        assert_eq!(mono.0[Var::F(4).index()], 2);
        assert!(parse_ambient("y1", p).is_err());
    }

    #[test]
    fn vector_lines() {
        let text = "# sample\nmodule: 0,0,0,n+1\nprefix: d12\n- p3 | f5^n+1\n2/3 d34 | f4 f5^n\n";
        let v = parse_vector(text, Params { m: 0, n: 0 }).unwrap();
        assert_eq!(v.module(Params { m: 0, n: 0 }).unwrap(), Some(Weight::new(0, 0, 0, 1)));
        assert_eq!(v.terms.len(), 2);
        assert_eq!(v.terms[0].0.homogeneous_degree(), Some(3));
        assert_eq!(v.terms[1].1.values().next().unwrap(), &Rational::new(2, 3));
        assert!(parse_vector("p1 f1", Params::default()).is_err());
    }
}
