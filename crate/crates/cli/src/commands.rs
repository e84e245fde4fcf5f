use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ncmorita::exactlin::IntMatrix;
use ncmorita::invariants::{
    degeneracy_subgroup, k_group_ranks, morita_equivalent_with, ordered_k0_isomorphic, range_equal_up_to_scaling,
    trace_range, Reason, SearchBounds, TraceRange, Verdict,
};
use ncmorita::reduction::{act, canonical_form, Membership, OnnElement};
use ncmorita::twisted::{hsigma, k_group_ranks_tga, morita_equivalent_tga, simple_quotient, trace_range_tga, TraceRoute};
use ncmorita::{Scalar, SkewMatrix};
use rayon::prelude::*;
use thiserror::Error;

use crate::format::{format_entry, parse, ParseError, Problem};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { source: ParseError::InvariantViolation(_), .. } => 2,
            CliError::Parse { .. } | CliError::Usage(_) => 1,
            CliError::Verification(_) => 3,
        }
    }
}

/// Reads `SEARCH_HEIGHT` if set.
pub fn bounds_from_env() -> Result<SearchBounds, CliError> {
    match std::env::var("SEARCH_HEIGHT") {
        Err(_) => Ok(SearchBounds::default()),
        Ok(v) => v
            .trim()
            .parse()
            .map(SearchBounds::with_height)
            .map_err(|_| CliError::Usage(format!("SEARCH_HEIGHT must be a nonnegative integer, got `{v}`"))),
    }
}

pub fn load(path: &Path) -> Result<Problem, CliError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{display}: {e}")))?;
    parse(&text).map_err(|source| CliError::Parse { path: display, source })
}

fn matrix_lines(out: &mut String, key: &str, rows: impl Iterator<Item = Vec<String>>) {
    for row in rows {
        writeln!(out, "{key} {}", row.join(" ")).unwrap();
    }
}

fn int_rows(m: &IntMatrix) -> impl Iterator<Item = Vec<String>> + '_ {
    m.row_iter().map(|r| r.iter().map(|x| x.to_string()).collect())
}

fn skew_rows(t: &SkewMatrix) -> impl Iterator<Item = Vec<String>> + '_ {
    t.matrix().row_iter().map(|r| r.iter().map(format_entry).collect())
}

fn range_line(range: &TraceRange) -> String {
    range.basis().iter().map(format_entry).collect::<Vec<_>>().join(" ")
}

pub fn canon(problem: &Problem) -> Result<String, CliError> {
    let Problem::Torus(theta) = problem else {
        return Err(CliError::Usage("canon expects a torus problem".into()));
    };
    let cf = canonical_form(theta);
    let mut out = String::new();
    writeln!(out, "n {}", theta.n()).unwrap();
    writeln!(out, "k {}", cf.k).unwrap();
    matrix_lines(&mut out, "g", int_rows(cf.g.matrix()));
    matrix_lines(&mut out, "theta_prime", skew_rows(&cf.theta_prime));
    matrix_lines(&mut out, "theta_tilde", skew_rows(&cf.theta_tilde));
    Ok(out)
}

pub fn invariants(problem: &Problem) -> String {
    let mut out = String::new();
    match problem {
        Problem::Torus(theta) => {
            let (k0, k1) = k_group_ranks(theta);
            writeln!(out, "kind torus").unwrap();
            writeln!(out, "dim {}", theta.n()).unwrap();
            writeln!(out, "center_rank {}", degeneracy_subgroup(theta).rank()).unwrap();
            writeln!(out, "center_torsion 1").unwrap();
            writeln!(out, "trace_range {}", range_line(&trace_range(theta))).unwrap();
            writeln!(out, "k0_rank {k0}").unwrap();
            writeln!(out, "k1_rank {k1}").unwrap();
        }
        Problem::Tga(sigma) => {
            let h = hsigma(sigma);
            let (k0, k1) = k_group_ranks_tga(sigma);
            let range = trace_range_tga(sigma);
            writeln!(out, "kind tga").unwrap();
            writeln!(out, "group {}", sigma.group()).unwrap();
            writeln!(out, "center_rank {}", h.rank).unwrap();
            writeln!(out, "center_torsion {}", h.torsion_size()).unwrap();
            writeln!(out, "simple_quotient {}", simple_quotient(sigma).group()).unwrap();
            writeln!(out, "trace_range {}", range_line(&range.range)).unwrap();
            let route = match range.route {
                TraceRoute::TorsionFree => "torsion-free".to_string(),
                TraceRoute::Split { multiplier } => format!("split {multiplier}"),
                TraceRoute::Lifted { multiplier } => format!("lifted {multiplier}"),
            };
            writeln!(out, "trace_route {route}").unwrap();
            writeln!(out, "k0_rank {k0}").unwrap();
            writeln!(out, "k1_rank {k1}").unwrap();
        }
    }
    out
}

pub fn decide(a: &Problem, b: &Problem, bounds: &SearchBounds) -> Verdict {
    match (a, b) {
        (Problem::Torus(x), Problem::Torus(y)) => morita_equivalent_with(x, y, bounds),
        _ => morita_equivalent_tga(&a.to_bicharacter(), &b.to_bicharacter(), bounds),
    }
}

/// Each manifest line names two files, relative to the manifest.
pub fn decide_batch(manifest: &Path, bounds: &SearchBounds) -> Result<String, CliError> {
    let text = std::fs::read_to_string(manifest).map_err(|e| CliError::Usage(format!("{}: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut pairs: Vec<(String, String, PathBuf, PathBuf)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match content.split_whitespace().collect::<Vec<_>>()[..] {
            [x, y] => pairs.push((x.into(), y.into(), base.join(x), base.join(y))),
            _ => {
                return Err(CliError::Parse {
                    path: manifest.display().to_string(),
                    source: ParseError::Syntax { line: idx + 1, msg: "expected two file names".into() },
                })
            }
        }
    }
    let problems = pairs
        .iter()
        .map(|(_, _, p, q)| Ok((load(p)?, load(q)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let verdicts: Vec<Verdict> = problems.par_iter().map(|(a, b)| decide(a, b, bounds)).collect();
    let mut out = String::new();
    for ((x, y, _, _), v) in pairs.iter().zip(verdicts) {
        writeln!(out, "{x} {y} {v}").unwrap();
    }
    Ok(out)
}

const WORKED_M5: &str = include_str!("../data/worked_m5.txt");
const WORKED_M1: &str = include_str!("../data/worked_m1_sqrt2.txt");
const PAIR_1: &str = include_str!("../data/pair_theta1.txt");
const PAIR_2: &str = include_str!("../data/pair_theta2.txt");
const RATIONAL: &str = include_str!("../data/rational_3x3.txt");

fn worked_g(m: i64) -> OnnElement {
    let a = IntMatrix::from_i64(&[&[m, 0, 0], &[0, -2, 3], &[0, -m, m]]);
    let b = IntMatrix::from_i64(&[&[0, 3, 2], &[0, 0, 0], &[1, 0, 0]]);
    let c = IntMatrix::from_i64(&[&[0, 1, -1], &[0, 0, 0], &[1, 0, 0]]);
    let d = IntMatrix::from_i64(&[&[0, 0, 0], &[0, 1, 1], &[0, 0, 0]]);
    OnnElement::from_blocks(&a, &b, &c, &d).expect("worked g lies in O(3,3|Z)")
}

fn torus(text: &str) -> SkewMatrix {
    match parse(text).expect("bundled example parses") {
        Problem::Torus(t) => t,
        Problem::Tga(_) => unreachable!("bundled example is a torus"),
    }
}

/// Runs the bundled worked examples; one `ok` or `FAILED` line per check.
pub fn verify_examples() -> Result<String, CliError> {
    let mut out = String::new();
    let mut failed = 0;
    let mut check = |name: &str, ok: bool| {
        writeln!(out, "{} {name}", if ok { "ok" } else { "FAILED" }).unwrap();
        failed += usize::from(!ok);
    };
    let q = Scalar::from_ratio;
    let r2 = Scalar::sqrt(2).unwrap();

    let theta = torus(WORKED_M5);
    let g = worked_g(5);
    let image = act(&g, &theta).ok();
    check("worked-m5 g in SO", g.membership() == Membership::SO);
    check("worked-m5 image", image == SkewMatrix::from_upper(3, &[q(0, 1), q(0, 1), q(5, 7)]).ok());
    check("worked-m5 ranges", trace_range(&theta) == TraceRange::from_generators(&[q(1, 35)]).unwrap());
    if let Some(image) = &image {
        let v = range_equal_up_to_scaling(&trace_range(&theta), &trace_range(image));
        check("worked-m5 scaling mu=5", v == Verdict::Equivalent { mu: q(5, 1) });
    }

    let theta = torus(WORKED_M1);
    let g = worked_g(1);
    check("worked-m1 g in SO", g.membership() == Membership::SO);
    check(
        "worked-m1 image",
        act(&g, &theta).ok() == SkewMatrix::from_upper(3, &[q(0, 1), q(0, 1), r2.clone()]).ok(),
    );
    check("worked-m1 canonical k=2", canonical_form(&theta).k == 2);

    let (t1, t2) = (torus(PAIR_1), torus(PAIR_2));
    let z2 = TraceRange::from_generators(std::slice::from_ref(&r2)).unwrap();
    check("pair ranges", trace_range(&t1) == z2 && trace_range(&t2) == z2);
    check("pair center ranks 2 and 0", (degeneracy_subgroup(&t1).rank(), degeneracy_subgroup(&t2).rank()) == (2, 0));
    check("pair ordered K0 isomorphic", ordered_k0_isomorphic(&t1, &t2, &SearchBounds::default()).is_equivalent());
    check(
        "pair not equivalent",
        morita_equivalent_with(&t1, &t2, &SearchBounds::default())
            == Verdict::NotEquivalent(Reason::CenterRank { left: 2, right: 0 }),
    );

    let theta = torus(RATIONAL);
    check("rational k=0", canonical_form(&theta).k == 0);
    check(
        "rational equivalent to zero",
        morita_equivalent_with(&theta, &SkewMatrix::zero(3), &SearchBounds::default()).is_equivalent(),
    );

    for (name, text) in [("worked-m5", WORKED_M5), ("worked-m1", WORKED_M1), ("pair-2", PAIR_2)] {
        let t = torus(text);
        check(&format!("{name} opposite"), morita_equivalent_with(&t, &t.neg(), &SearchBounds::default()).is_equivalent());
    }

    if failed == 0 {
        Ok(out)
    } else {
        Err(CliError::Verification(format!("{out}{failed} check(s) failed")))
    }
}
