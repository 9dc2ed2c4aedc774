//! Text forms of polynomials: `[c0,c1,...]` and `T^2 + 3*T + 3`.

use super::poly::IwasawaPoly;
use crate::arith::PrimeConfig;
use crate::error::{Error, Result};

pub fn format_list(f: &IwasawaPoly) -> String {
    let parts: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn format_human(f: &IwasawaPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, &c) in f.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        let mono = match i {
            0 => String::new(),
            1 => "T".into(),
            _ => format!("T^{i}"),
        };
        match (c, i) {
            (_, 0) => out.push_str(&c.to_string()),
            (1, _) => out.push_str(&mono),
            _ => out.push_str(&format!("{c}*{mono}")),
        }
    }
    out
}

/// Parse either text form. Unicode minus signs are accepted.
pub fn parse_poly(cfg: PrimeConfig, s: &str) -> Result<IwasawaPoly> {
    let s = s.trim().replace('\u{2212}', "-");
    if s.starts_with('[') {
        parse_list(cfg, &s)
    } else {
        parse_human(cfg, &s)
    }
}

fn parse_int(tok: &str) -> Result<i128> {
    tok.trim()
        .parse::<i128>()
        .map_err(|e| Error::Parse(format!("bad integer {tok:?}: {e}")))
}

fn parse_list(cfg: PrimeConfig, s: &str) -> Result<IwasawaPoly> {
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("unbalanced brackets in {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(IwasawaPoly::zero(cfg));
    }
    let coeffs = inner
        .split(',')
        .map(|t| parse_int(t).map(|v| cfg.reduce_i128(v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IwasawaPoly::new(cfg, coeffs))
}

fn parse_human(cfg: PrimeConfig, s: &str) -> Result<IwasawaPoly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = vec![];
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));

    let mut acc: Vec<i128> = vec![];
    for (neg, t) in terms {
        if t.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        let (coef, deg) = parse_term(&t)?;
        if acc.len() <= deg {
            acc.resize(deg + 1, 0);
        }
        acc[deg] += if neg { -coef } else { coef };
    }
    Ok(IwasawaPoly::new(cfg, acc.into_iter().map(|c| cfg.reduce_i128(c)).collect()))
}

fn parse_term(t: &str) -> Result<(i128, usize)> {
    match t.find(['T', 't']) {
        None => Ok((parse_int(t)?, 0)),
        Some(pos) => {
            let head = t[..pos].trim_end_matches('*');
            let coef = if head.is_empty() { 1 } else { parse_int(head)? };
            let tail = &t[pos + 1..];
            let deg = if tail.is_empty() {
                1
            } else {
                let e = tail
                    .strip_prefix('^')
                    .ok_or_else(|| Error::Parse(format!("bad monomial {t:?}")))?;
                e.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?
            };
            Ok((coef, deg))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrimeConfig {
        PrimeConfig::new(3, 4).unwrap()
    }

    #[test]
    fn parses_both_forms() {
        let a = parse_poly(cfg(), "T^2 + 3*T + 3").unwrap();
        let b = parse_poly(cfg(), "[3,3,1]").unwrap();
        assert_eq!(a, b);
        let c = parse_poly(cfg(), "[\u{2212}3,0,1]").unwrap();
        assert_eq!(c, parse_poly(cfg(), "T^2 - 3").unwrap());
        assert_eq!(parse_poly(cfg(), "-T + 2").unwrap().balanced_coeffs(), vec![2, -1]);
        assert_eq!(parse_poly(cfg(), "3T^2").unwrap().coeffs(), &[0, 0, 3]);
    }

    #[test]
    fn round_trips() {
        let f = parse_poly(cfg(), "[78,0,5,1]").unwrap();
        assert_eq!(parse_poly(cfg(), &f.to_human()).unwrap(), f);
        assert_eq!(parse_poly(cfg(), &f.to_list()).unwrap(), f);
        assert_eq!(f.to_human(), "T^3 + 5*T^2 + 78");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly(cfg(), "[1,,2]").is_err());
        assert!(parse_poly(cfg(), "T^x").is_err());
        assert!(parse_poly(cfg(), "[1,2").is_err());
    }
}
