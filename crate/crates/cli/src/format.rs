//! The problem file format.
//!
//! ```text
//! # comment
//! kind torus                      (or: kind tga)
//! field sqrt 2                    (or: field rational)
//! dim 2                           (tga: group free R torsion m1,m2,...)
//! row 0 1*rt
//! row -1*rt 0
//! ```
//!
//! Entries are `a`, `a/b`, `c/d*rt`, `a/b+c/d*rt` or `a/b-c/d*rt`, where `rt`
//! stands for the square root named on the `field` line.

use std::fmt::Write as _;

use ncmorita::exactlin::{is_squarefree, ScalarMatrix};
use ncmorita::twisted::FgGroup;
use ncmorita::{Bicharacter, Scalar, SkewMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    Torus(SkewMatrix),
    Tga(Bicharacter),
}

impl Problem {
    /// Tori are twisted group algebras of free groups.
    pub fn to_bicharacter(&self) -> Bicharacter {
        match self {
            Problem::Torus(theta) => Bicharacter::from_torus(theta),
            Problem::Tga(sigma) => sigma.clone(),
        }
    }
}

enum Shape {
    Dim(usize),
    Group(FgGroup),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn parse_rational(s: &str, line: usize) -> Result<BigRational, ParseError> {
    let bad = || syntax(line, format!("bad number `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if !den.is_positive() {
        return Err(syntax(line, format!("denominator in `{s}` must be positive")));
    }
    Ok(BigRational::new(num, den))
}

fn parse_entry(s: &str, radicand: Option<u64>, line: usize) -> Result<Scalar, ParseError> {
    let Some(body) = s.strip_suffix("rt") else {
        return Ok(Scalar::rational(parse_rational(s, line)?));
    };
    let d = radicand.ok_or_else(|| syntax(line, format!("`{s}` uses rt but the field is rational")))?;
    let body = body.strip_suffix('*').unwrap_or(body);
    let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
    let (rat, quad) = match split {
        Some(i) => (parse_rational(&body[..i], line)?, &body[i..]),
        None => (BigRational::zero(), body),
    };
    let quad = match quad {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        q => parse_rational(q.strip_prefix('+').unwrap_or(q), line)?,
    };
    Scalar::new(rat, quad, Some(d)).map_err(|e| syntax(line, e.to_string()))
}

fn parse_group(rest: &[&str], line: usize) -> Result<FgGroup, ParseError> {
    let usage = || syntax(line, "expected `group free R [torsion m1,m2,...]`");
    let (free, torsion) = match rest {
        ["free", r] => (r, None),
        ["free", r, "torsion", t] => (r, Some(t)),
        _ => return Err(usage()),
    };
    let free: usize = free.parse().map_err(|_| usage())?;
    let torsion: Vec<BigInt> = match torsion {
        None => Vec::new(),
        Some(t) => t.split(',').map(|m| m.parse().map_err(|_| usage())).collect::<Result<_, _>>()?,
    };
    FgGroup::new(free, torsion).map_err(|e| syntax(line, e.to_string()))
}

/// Parses a problem file, validating skewness or the bicharacter conditions.
pub fn parse(text: &str) -> Result<Problem, ParseError> {
    let mut kind: Option<(String, usize)> = None;
    let mut radicand: Option<Option<u64>> = None;
    let mut shape: Option<Shape> = None;
    let mut rows: Vec<(usize, Vec<Scalar>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match words[0] {
            "kind" => match words[1..] {
                [k @ ("torus" | "tga")] => kind = Some((k.to_string(), line)),
                _ => return Err(syntax(line, "expected `kind torus` or `kind tga`")),
            },
            "field" => {
                radicand = Some(match words[1..] {
                    ["rational"] => None,
                    ["sqrt", d] => {
                        let d: u64 = d.parse().map_err(|_| syntax(line, format!("bad radicand `{d}`")))?;
                        if d < 2 || !is_squarefree(d) {
                            return Err(syntax(line, format!("radicand {d} is not a squarefree integer above 1")));
                        }
                        Some(d)
                    }
                    _ => return Err(syntax(line, "expected `field rational` or `field sqrt D`")),
                })
            }
            "dim" => match words[1..] {
                [n] => shape = Some(Shape::Dim(n.parse().map_err(|_| syntax(line, format!("bad dimension `{n}`")))?)),
                _ => return Err(syntax(line, "expected `dim N`")),
            },
            "group" => shape = Some(Shape::Group(parse_group(&words[1..], line)?)),
            "row" => {
                let d = radicand.ok_or_else(|| syntax(line, "`field` must come before the rows"))?;
                let entries = words[1..].iter().map(|w| parse_entry(w, d, line)).collect::<Result<_, _>>()?;
                rows.push((line, entries));
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }

    let last = text.lines().count().max(1);
    let (kind, kind_line) = kind.ok_or_else(|| syntax(last, "missing `kind` line"))?;
    radicand.ok_or_else(|| syntax(last, "missing `field` line"))?;
    let shape = shape.ok_or_else(|| syntax(last, "missing `dim` or `group` line"))?;
    let n = match (&shape, kind.as_str()) {
        (Shape::Dim(n), "torus") => *n,
        (Shape::Group(g), "tga") => g.generators(),
        (Shape::Dim(_), _) => return Err(syntax(kind_line, "a tga problem needs a `group` line")),
        (Shape::Group(_), _) => return Err(syntax(kind_line, "a torus problem needs a `dim` line")),
    };
    if rows.len() != n {
        return Err(syntax(last, format!("expected {n} rows, found {}", rows.len())));
    }
    for (line, row) in &rows {
        if row.len() != n {
            return Err(syntax(*line, format!("expected {n} entries, found {}", row.len())));
        }
    }
    let matrix = ScalarMatrix::from_rows(rows.iter().map(|(_, r)| r.clone()).collect(), n);

    match shape {
        Shape::Dim(_) => SkewMatrix::new(matrix).map(Problem::Torus).map_err(|e| {
            let detail = match &e {
                ncmorita::reduction::ReductionError::NotSkew { row, col } => {
                    format!("{e} (lines {} and {})", rows[*row].0, rows[*col].0)
                }
                _ => e.to_string(),
            };
            ParseError::InvariantViolation(detail)
        }),
        Shape::Group(g) => {
            Bicharacter::new(g, matrix).map(Problem::Tga).map_err(|e| ParseError::InvariantViolation(e.to_string()))
        }
    }
}

fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// One entry in file syntax.
pub fn format_entry(x: &Scalar) -> String {
    if x.radicand().is_none() || x.quad().is_zero() {
        return format_rational(x.rat());
    }
    let quad = format!("{}*rt", format_rational(x.quad()));
    if x.rat().is_zero() {
        quad
    } else if x.quad().is_negative() {
        format!("{}{}", format_rational(x.rat()), quad)
    } else {
        format!("{}+{}", format_rational(x.rat()), quad)
    }
}

/// Writes a problem back in file syntax; `parse(&print(p)) == p`.
pub fn print(problem: &Problem) -> String {
    let (matrix, radicand) = match problem {
        Problem::Torus(theta) => (theta.matrix(), theta.radicand()),
        Problem::Tga(sigma) => (sigma.exponents(), sigma.exponents().radicand().ok().flatten()),
    };
    let mut out = String::new();
    match problem {
        Problem::Torus(theta) => {
            out.push_str("kind torus\n");
            push_field(&mut out, radicand);
            writeln!(out, "dim {}", theta.n()).unwrap();
        }
        Problem::Tga(sigma) => {
            out.push_str("kind tga\n");
            push_field(&mut out, radicand);
            let g = sigma.group();
            write!(out, "group free {}", g.rank()).unwrap();
            if !g.is_torsion_free() {
                let t: Vec<String> = g.torsion().iter().map(|m| m.to_string()).collect();
                write!(out, " torsion {}", t.join(",")).unwrap();
            }
            out.push('\n');
        }
    }
    for row in matrix.row_iter() {
        out.push_str("row");
        for x in row {
            out.push(' ');
            out.push_str(&format_entry(x));
        }
        out.push('\n');
    }
    out
}

fn push_field(out: &mut String, radicand: Option<u64>) {
    match radicand {
        None => out.push_str("field rational\n"),
        Some(d) => writeln!(out, "field sqrt {d}").unwrap(),
    }
}
