//! Plain-text formats for functions, partitions and subsets.
//!
//! Function file:
//!
//! ```text
//! p=2 n=4 m=2
//! p=2 factors=2,2 irr=[1,1,1],[1,1,1]
//! codomain: p=2 factors=2 irr=[1,1,1]
//! 00
//! 10
//! ...
//! ```
//!
//! The `codomain:` line is optional; without it V_m carries the plain dot
//! product. Each value line holds the m coordinates of F(x), coordinate 0
//! first, for x in canonical index order. Partition files use the same
//! header followed by one decimal part index per line. Subset files hold a
//! space header followed by one decimal point index per line.

use crate::error::{Error, Result};
use crate::field::SpaceDesc;
use crate::vdb::VFunc;

fn perr(line: usize, column: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, column, msg: msg.into() }
}

struct Header {
    domain: SpaceDesc,
    codomain: SpaceDesc,
    /// Index of the first value line.
    body: usize,
}

fn parse_counts(line: &str) -> Result<(u32, usize, usize)> {
    let mut vals = [None; 3];
    let mut col = 1;
    for tok in line.split(' ') {
        if tok.is_empty() {
            col += 1;
            continue;
        }
        let (k, v) = tok.split_once('=').ok_or_else(|| perr(1, col, format!("expected key=value, got `{tok}`")))?;
        let slot = match k {
            "p" => 0,
            "n" => 1,
            "m" => 2,
            _ => return Err(perr(1, col, format!("unknown key `{k}`"))),
        };
        vals[slot] = Some(v.parse::<usize>().map_err(|e| perr(1, col + k.len() + 1, e.to_string()))?);
        col += tok.len() + 1;
    }
    match vals {
        [Some(p), Some(n), Some(m)] => Ok((p as u32, n, m)),
        _ => Err(perr(1, 1, "expected `p=<p> n=<n> m=<m>`")),
    }
}

fn parse_header(lines: &[&str]) -> Result<Header> {
    let first = lines.first().ok_or_else(|| perr(1, 1, "empty file"))?;
    let (p, n, m) = parse_counts(first)?;
    let second = lines.get(1).ok_or_else(|| perr(2, 1, "missing space header"))?;
    let domain = SpaceDesc::parse_header(second, 2)?;
    if domain.p() != p || domain.dim() != n {
        return Err(perr(2, 1, format!("space header disagrees with p={p} n={n}")));
    }
    let (codomain, body) = match lines.get(2).and_then(|l| l.strip_prefix("codomain:")) {
        Some(rest) => {
            let trimmed = rest.trim_start();
            let cod = SpaceDesc::parse_header(trimmed, 3).map_err(|e| match e {
                Error::Parse { line, column, msg } => Error::Parse { line, column: column + rest.len() - trimmed.len() + 9, msg },
                other => other,
            })?;
            if cod.p() != p || cod.dim() != m {
                return Err(perr(3, 1, format!("codomain header disagrees with p={p} m={m}")));
            }
            (cod, 3)
        }
        None => (SpaceDesc::dot(p, m)?, 2),
    };
    Ok(Header { domain, codomain, body })
}

fn body_lines<'a>(lines: &[&'a str], h: &Header) -> Result<Vec<(usize, &'a str)>> {
    let mut out: Vec<(usize, &str)> = lines.iter().enumerate().skip(h.body).map(|(i, l)| (i + 1, *l)).collect();
    while out.last().is_some_and(|(_, l)| l.trim().is_empty()) {
        out.pop();
    }
    let want = h.domain.size() as usize;
    if out.len() != want {
        let line = out.last().map_or(h.body + 1, |(i, _)| i + 1);
        return Err(perr(line, 1, format!("expected {want} value lines, found {}", out.len())));
    }
    Ok(out)
}

pub fn parse_function(text: &str) -> Result<VFunc> {
    let lines: Vec<&str> = text.lines().collect();
    let h = parse_header(&lines)?;
    let p = h.domain.p();
    let m = h.codomain.dim();
    let mut values = Vec::with_capacity(h.domain.size() as usize);
    for (line_no, line) in body_lines(&lines, &h)? {
        let line = line.trim_end();
        if line.chars().count() != m {
            return Err(perr(line_no, 1, format!("expected {m} digits, found {}", line.chars().count())));
        }
        let mut digits = Vec::with_capacity(m);
        for (i, ch) in line.chars().enumerate() {
            match ch.to_digit(10).filter(|&d| d < p) {
                Some(d) => digits.push(d),
                None => return Err(perr(line_no, i + 1, format!("`{ch}` is not a digit below {p}"))),
            }
        }
        values.push(h.codomain.from_coords(&digits)?);
    }
    VFunc::new(h.domain, h.codomain, values)
}

fn header_text(f: &VFunc) -> String {
    format!("p={} n={} m={}\n{}\ncodomain: {}\n", f.p(), f.n(), f.m(), f.domain.header(), f.codomain.header())
}

pub fn write_function(f: &VFunc) -> String {
    let mut s = header_text(f);
    s.reserve(f.values.len() * (f.m() + 1));
    for &v in &f.values {
        for d in f.codomain.coords(v) {
            s.push(char::from_digit(d, 10).expect("p < 10"));
        }
        s.push('\n');
    }
    s
}

/// Partition files carry the same header; each line is the part index of x.
pub fn parse_partition(text: &str) -> Result<VFunc> {
    let lines: Vec<&str> = text.lines().collect();
    let h = parse_header(&lines)?;
    let q = h.codomain.size();
    let mut values = Vec::with_capacity(h.domain.size() as usize);
    for (line_no, line) in body_lines(&lines, &h)? {
        let v: u32 = line.trim().parse().map_err(|e| perr(line_no, 1, format!("bad part index: {e}")))?;
        if v >= q {
            return Err(perr(line_no, 1, format!("part index {v} is not below {q}")));
        }
        values.push(v);
    }
    VFunc::new(h.domain, h.codomain, values)
}

pub fn write_partition(f: &VFunc) -> String {
    let mut s = header_text(f);
    for &v in &f.values {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}

/// A space header followed by point indices.
pub fn parse_subset(text: &str) -> Result<(SpaceDesc, Vec<u32>)> {
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| perr(1, 1, "empty file"))?;
    let space = SpaceDesc::parse_header(head, 1)?;
    let mut pts = Vec::new();
    for (i, line) in lines.enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: u32 = t.parse().map_err(|e| perr(i + 2, 1, format!("bad point index: {e}")))?;
        if v >= space.size() {
            return Err(perr(i + 2, 1, format!("point {v} outside the space")));
        }
        pts.push(v);
    }
    Ok((space, pts))
}

pub fn write_subset(space: &SpaceDesc, pts: &[u32]) -> String {
    let mut s = space.header();
    s.push('\n');
    for p in pts {
        s.push_str(&p.to_string());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VFunc {
        let dom = SpaceDesc::with_defaults(3, &[2, 1]).unwrap();
        let cod = SpaceDesc::with_defaults(3, &[2]).unwrap();
        VFunc::from_fn(&dom, &cod, |x| (x * 5) % 9).unwrap()
    }

    #[test]
    fn function_round_trip() {
        let f = sample();
        let text = write_function(&f);
        assert_eq!(parse_function(&text).unwrap(), f);
        assert_eq!(parse_partition(&write_partition(&f)).unwrap(), f);
    }

    #[test]
    fn diagnostics_point_at_the_fault() {
        let f = sample();
        let mut text = write_function(&f);
        text = text.replacen("\n00\n", "\n0x\n", 1);
        match parse_function(&text) {
            Err(Error::Parse { line: 4, column: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let short: String = write_function(&f).lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_function(&short), Err(Error::Parse { .. })));
        assert!(matches!(parse_function("p=3 n=3 q=2\n"), Err(Error::Parse { line: 1, column: 9, .. })));
    }

    #[test]
    fn default_codomain_is_dot() {
        let f = sample();
        let text = write_function(&f);
        let without: Vec<&str> = text.lines().filter(|l| !l.starts_with("codomain:")).collect();
        let g = parse_function(&without.join("\n")).unwrap();
        assert_eq!(g.codomain, SpaceDesc::dot(3, 2).unwrap());
    }
}
