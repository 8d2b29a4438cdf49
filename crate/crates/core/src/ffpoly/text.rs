//! Text interchange format for polynomials.
//!
//! Header line `p=<prime> n=<nvars> d=<degbound>`, body of `+`-separated
//! terms `c*x<i>^<e>*...`. Whitespace-insensitive. The canonical writer
//! sorts monomials lexicographically by exponent vector.

use crate::error::{Error, Result};

use super::field::PrimeModulus;
use super::poly::{Monomial, Poly};

pub fn parse_poly(input: &str) -> Result<Poly> {
    // the header is its own line; whitespace is free within each part
    let (header, raw_body) = match input.split_once('\n') {
        Some((h, b)) => (h, b),
        None => (input, ""),
    };
    let compact: String = header
        .chars()
        .chain(raw_body.chars())
        .filter(|c| !c.is_whitespace())
        .collect();
    let header_only: String = header.chars().filter(|c| !c.is_whitespace()).collect();
    let body_only: String = raw_body.chars().filter(|c| !c.is_whitespace()).collect();
    parse_parts(&compact, &header_only, &body_only)
}

fn parse_parts(compact: &str, header: &str, body_part: &str) -> Result<Poly> {
    let p_pos = header
        .find("p=")
        .ok_or_else(|| Error::Parse("missing p= in header".into()))?;
    let n_pos = header
        .find("n=")
        .ok_or_else(|| Error::Parse("missing n= in header".into()))?;
    let d_pos = header
        .find("d=")
        .ok_or_else(|| Error::Parse("missing d= in header".into()))?;

    let p_val: u32 = read_number(&header[p_pos + 2..])?;
    let n_val: usize = read_number(&header[n_pos + 2..])? as usize;
    let d_val: usize = read_number(&header[d_pos + 2..])? as usize;
    let p = PrimeModulus::new(p_val)?;

    // body: everything after the header line, or (single-line input) after
    // the last header field
    let body = if !body_part.is_empty() {
        body_part
    } else {
        let header_end = [p_pos, n_pos, d_pos]
            .into_iter()
            .map(|pos| pos + 2 + digits_len(&header[pos + 2..]))
            .max()
            .unwrap();
        &compact[header_end..]
    };

    let mut poly = Poly::zero(p, n_val);
    if body.is_empty() || body == "0" {
        return Ok(poly);
    }
    for term in body.split('+') {
        if term.is_empty() {
            return Err(Error::Parse("empty term".into()));
        }
        let (m, c) = parse_term(term, p, n_val)?;
        poly.add_term(m, c);
    }
    if poly.degree() > d_val {
        return Err(Error::Parse(format!(
            "degree {} exceeds declared bound {}",
            poly.degree(),
            d_val
        )));
    }
    Ok(poly)
}

fn parse_term(term: &str, p: PrimeModulus, nvars: usize) -> Result<(Monomial, u32)> {
    let mut coeff: u32 = 1;
    let mut exponents = vec![0u16; nvars];
    let mut saw_factor = false;
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in term {term:?}")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (
                    read_number(i)? as usize,
                    read_number(e)? as u16,
                ),
                None => (read_number(rest)? as usize, 1),
            };
            if idx >= nvars {
                return Err(Error::Parse(format!(
                    "variable x{idx} out of range (n={nvars})"
                )));
            }
            exponents[idx] += exp;
        } else {
            let c: u32 = read_number(factor)?;
            coeff = p.mul(coeff % p.get(), c % p.get());
        }
        saw_factor = true;
    }
    if !saw_factor {
        return Err(Error::Parse(format!("empty term {term:?}")));
    }
    Ok((Monomial::new(exponents), coeff))
}

fn read_number(s: &str) -> Result<u32> {
    let len = digits_len(s);
    if len == 0 {
        return Err(Error::Parse(format!("expected number at {s:?}")));
    }
    s[..len]
        .parse()
        .map_err(|_| Error::Parse(format!("bad number in {s:?}")))
}

fn digits_len(s: &str) -> usize {
    s.chars().take_while(|c| c.is_ascii_digit()).count()
}

/// Canonical serialization with header.
pub fn write_poly(poly: &Poly) -> String {
    format!(
        "p={} n={} d={}\n{}",
        poly.p().get(),
        poly.nvars(),
        poly.degree(),
        poly
    )
}
