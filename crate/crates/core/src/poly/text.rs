//! Canonical text: `w<v>` and `l<a>_<b>` variables, `^` powers, `*` products,
//! terms joined by ` + ` / ` - ` from the largest monomial down.

use std::fmt;
use std::str::FromStr;

use super::{Integer, Monomial, MvPoly, PolyError, Var, VarKind};

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            VarKind::Omega(v) => write!(f, "w{v}"),
            VarKind::Lambda(a, b) => write!(f, "l{a}_{b}"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.factors().iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_node(s: &str, token: &str) -> Result<usize, PolyError> {
    s.parse::<usize>()
        .ok()
        .filter(|&v| (1..=crate::graph::MAX_NODES).contains(&v))
        .ok_or_else(|| PolyError::Parse(format!("bad node id in `{token}`")))
}

impl FromStr for Var {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix('w') {
            return Ok(Var::omega(parse_node(rest, s)?));
        }
        if let Some(rest) = s.strip_prefix('l') {
            if let Some((a, b)) = rest.split_once('_') {
                let (a, b) = (parse_node(a, s)?, parse_node(b, s)?);
                if a != b {
                    return Ok(Var::lambda(a, b));
                }
            }
        }
        Err(PolyError::Parse(format!("unknown variable `{s}`")))
    }
}

/// Accepts the canonical form and anything close to it: terms in any order,
/// repeated factors, extra whitespace.
impl FromStr for MvPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(PolyError::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (neg, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' if !terms.is_empty() => (false, &rest[1..]),
                _ if terms.is_empty() => (false, rest),
                _ => unreachable!(),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let token = &body[..end];
            rest = &body[end..];
            if token.is_empty() {
                return Err(PolyError::Parse("empty term".into()));
            }
            let mut coeff = Integer::from(if neg { -1 } else { 1 });
            let mut factors = Vec::new();
            for factor in token.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e = e
                            .parse::<u32>()
                            .map_err(|_| PolyError::Parse(format!("bad exponent in `{factor}`")))?;
                        (b, e)
                    }
                    None => (factor, 1),
                };
                if base.starts_with(|c: char| c.is_ascii_digit()) {
                    let c: Integer = base
                        .parse()
                        .map_err(|_| PolyError::Parse(format!("bad coefficient `{base}`")))?;
                    coeff = &coeff * &c.pow(exp);
                } else {
                    factors.push((base.parse::<Var>()?, exp));
                }
            }
            terms.push((Monomial::from_factors(factors), coeff));
        }
        Ok(MvPoly::from_terms(terms))
    }
}
