//! Twisted group C*-algebras `C*(G; σ)` for `G = Z^r ⊕ Z/m₁ ⊕ ⋯ ⊕ Z/m_s`,
//! with `σ` given by the exponent matrix `E` of the skew bicharacter
//! `σ*(g, h) = e(g·E·hᵗ)` on generator coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{integral_solution_lattice, snf, unimodular_inverse, IntLattice, IntMatrix, Scalar, ScalarMatrix};
use crate::invariants::{
    range_equal_up_to_scaling_with, trace_range, QuadLattice, Reason, SearchBounds, TraceRange, Verdict,
};
use crate::reduction::SkewMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistedError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid bicharacter: {0}")]
    InvalidBicharacter(String),
}

/// `Z^r ⊕ Z/m₁ ⊕ ⋯ ⊕ Z/m_s`; generators are indexed free first, then torsion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, TwistedError> {
        if let Some(m) = torsion.iter().find(|m| **m < BigInt::from(2)) {
            return Err(TwistedError::InvalidGroup(format!("torsion order {m} is below 2")));
        }
        Ok(FgGroup { free_rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z^generators` modulo the row span of `relations`, in divisor-chain form.
    pub fn from_relations(generators: usize, relations: &IntMatrix) -> Self {
        quotient(generators, &IntLattice::from_generators(relations)).0
    }

    pub fn rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn torsion_size(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Rows `mᵢ·e_{r+i}`.
    pub fn relations(&self) -> IntMatrix {
        let n = self.generators();
        let rows = self
            .torsion
            .iter()
            .enumerate()
            .map(|(i, m)| (0..n).map(|j| if j == self.free_rank + i { m.clone() } else { BigInt::zero() }).collect())
            .collect();
        IntMatrix::from_rows(rows, n)
    }
}

impl fmt::Display for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.free_rank)?;
        for m in &self.torsion {
            write!(f, " + Z/{m}")?;
        }
        Ok(())
    }
}

/// `Z^n / L` as a group, with lifts of its generators (rows, in `Z^n` coordinates).
fn quotient(n: usize, l: &IntLattice) -> (FgGroup, IntMatrix) {
    let form = snf(l.basis());
    let divisors = form.divisors();
    let vinv = unimodular_inverse(&form.v);
    let k = divisors.len();
    let mut rows: Vec<Vec<BigInt>> = (k..n).map(|i| vinv.row(i).to_vec()).collect();
    let mut torsion = Vec::new();
    for (i, d) in divisors.iter().enumerate() {
        if !d.is_one() {
            rows.push(vinv.row(i).to_vec());
            torsion.push(d.clone());
        }
    }
    (FgGroup { free_rank: n - k, torsion }, IntMatrix::from_rows(rows, n))
}

/// A skew bicharacter on an [`FgGroup`], as an exponent matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bicharacter {
    group: FgGroup,
    exponents: ScalarMatrix,
}

impl Bicharacter {
    /// Checks that `E + Eᵗ` is integral and that torsion rows and columns are
    /// rational with `mᵢ·E` integral there.
    pub fn new(group: FgGroup, exponents: ScalarMatrix) -> Result<Self, TwistedError> {
        let n = group.generators();
        if exponents.rows() != n || exponents.cols() != n {
            return Err(TwistedError::InvalidBicharacter(format!(
                "exponent matrix is {}x{}, group has {n} generators",
                exponents.rows(),
                exponents.cols()
            )));
        }
        exponents.radicand().map_err(|e| TwistedError::InvalidBicharacter(e.to_string()))?;
        for i in 0..n {
            for j in i..n {
                if !(&exponents[(i, j)] + &exponents[(j, i)]).is_integer() {
                    return Err(TwistedError::InvalidBicharacter(format!("E + Eᵗ is not integral at ({i},{j})")));
                }
            }
        }
        for (t, m) in group.torsion.iter().enumerate() {
            let i = group.free_rank + t;
            let m = Scalar::from(m.clone());
            for j in 0..n {
                for x in [&exponents[(i, j)], &exponents[(j, i)]] {
                    if !(x * &m).is_integer() {
                        return Err(TwistedError::InvalidBicharacter(format!(
                            "entry in torsion row/column {i} is not a multiple of 1/{m}"
                        )));
                    }
                }
            }
        }
        Ok(Bicharacter { group, exponents })
    }

    /// The bicharacter of `A_θ` on `Zⁿ`.
    pub fn from_torus(theta: &SkewMatrix) -> Self {
        Bicharacter { group: FgGroup::free(theta.n()), exponents: theta.matrix().clone() }
    }

    pub fn group(&self) -> &FgGroup {
        &self.group
    }

    pub fn exponents(&self) -> &ScalarMatrix {
        &self.exponents
    }

    /// `g·E·hᵗ`; only its class mod `Z` is meaningful.
    pub fn pairing(&self, g: &[BigInt], h: &[BigInt]) -> Scalar {
        let g: Vec<Scalar> = g.iter().map(|x| Scalar::from(x.clone())).collect();
        self.exponents
            .left_apply(&g)
            .iter()
            .zip(h)
            .map(|(a, b)| a * &Scalar::from(b.clone()))
            .sum()
    }

    /// The skew matrix agreeing with `E` above the diagonal; it differs from `E`
    /// by an integer matrix, so it defines the same `σ*` on lifts to `Z^n`.
    pub fn lifted_theta(&self) -> SkewMatrix {
        let n = self.group.generators();
        let upper: Vec<Scalar> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.exponents[(i, j)].clone()).collect();
        SkewMatrix::from_upper(n, &upper).expect("entries share one field")
    }
}

/// `Θ − Θᵗ`.
pub fn normalize_cocycle(big_theta: &ScalarMatrix) -> SkewMatrix {
    SkewMatrix::new(big_theta.sub(&big_theta.transpose())).expect("Θ − Θᵗ is skew")
}

/// Abstract structure of `H_σ = {g : σ*(g, ·) = 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSigma {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HSigma {
    pub fn torsion_size(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

/// The preimage of `H_σ` in `Z^{r+s}`; it contains the torsion relations.
fn h_hat(sigma: &Bicharacter) -> IntLattice {
    integral_solution_lattice(&sigma.exponents)
}

pub fn hsigma(sigma: &Bicharacter) -> HSigma {
    let hat = h_hat(sigma);
    let rel = sigma.group.relations();
    let coords: Vec<Vec<BigInt>> =
        rel.row_iter().map(|r| hat.coordinates(r).expect("torsion relations pair trivially")).collect();
    let coords = IntMatrix::from_rows(coords, hat.rank());
    let divisors = snf(&coords).divisors();
    HSigma {
        rank: hat.rank() - divisors.len(),
        torsion: divisors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// `K₀` and `K₁` ranks of `C*(G; σ)`.
pub fn k_group_ranks_tga(sigma: &Bicharacter) -> (BigInt, BigInt) {
    let tor = hsigma(sigma).torsion_size();
    match sigma.group.rank() {
        0 => (tor, BigInt::zero()),
        r => {
            let k = tor << (r - 1);
            (k.clone(), k)
        }
    }
}

/// `(G/H_σ, σ')` with `σ'` nondegenerate.
pub fn simple_quotient(sigma: &Bicharacter) -> Bicharacter {
    simple_quotient_with_lifts(sigma).0
}

/// As [`simple_quotient`], also returning lifts of the new generators to `G`'s coordinates.
pub fn simple_quotient_with_lifts(sigma: &Bicharacter) -> (Bicharacter, IntMatrix) {
    let n = sigma.group.generators();
    let (group, lifts) = quotient(n, &h_hat(sigma));
    let exponents = restrict(&sigma.exponents, &lifts, &lifts);
    let out = Bicharacter::new(group, exponents).expect("induced exponents satisfy the bicharacter conditions");
    (out, lifts)
}

fn restrict(e: &ScalarMatrix, left: &IntMatrix, right: &IntMatrix) -> ScalarMatrix {
    left.to_scalar().mul(e).mul(&right.to_scalar().transpose())
}

/// How [`trace_range_tga`] obtained its answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceRoute {
    /// The simple quotient is a noncommutative torus.
    TorsionFree,
    /// Matrix-algebra factors `M_m` were split off until no torsion remained.
    Split { multiplier: BigInt },
    /// No split partner was found after the given multiplier; the rest was
    /// computed from a torus whose simple quotient matches.
    Lifted { multiplier: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TgaTraceRange {
    pub range: TraceRange,
    pub route: TraceRoute,
}

/// `m·(g·E·hᵗ)` reduced mod `m`; requires the pairing to lie in `(1/m)Z`.
fn scaled_pairing(sigma: &Bicharacter, g: &[BigInt], h: &[BigInt], m: &BigInt) -> BigInt {
    let v = &sigma.pairing(g, h) * &Scalar::from(m.clone());
    assert!(v.is_integer(), "pairing with a torsion element of order m lies in (1/m)Z");
    v.rat().to_integer().mod_floor(m)
}

/// Splits off `⟨t, s⟩ ≅ (Z/m)²` for the largest torsion generator `t`, or `None`
/// when no torsion element pairs primitively with `t`.
fn split_once(sigma: &Bicharacter) -> Option<(Bicharacter, BigInt)> {
    let group = &sigma.group;
    let n = group.generators();
    let t_index = n - 1;
    let m = group.torsion.last()?.clone();
    let unit = |i: usize| -> Vec<BigInt> { (0..n).map(|j| BigInt::from(u8::from(i == j))).collect() };
    let t = unit(t_index);

    // s = Σ aᵢ eᵢ over torsion generators with Σ aᵢ cᵢ ≡ 1 mod m, cᵢ = m·β(t, eᵢ)
    let mut s = vec![BigInt::zero(); n];
    let mut acc = m.clone();
    let mut coeff_of_acc: Vec<BigInt> = vec![BigInt::zero(); n];
    for i in group.free_rank..n {
        let c = scaled_pairing(sigma, &t, &unit(i), &m);
        let ext = acc.extended_gcd(&c);
        // new acc = x·acc + y·c
        for (k, a) in coeff_of_acc.iter_mut().enumerate() {
            *a = &ext.x * &*a + if k == i { ext.y.clone() } else { BigInt::zero() };
        }
        acc = ext.gcd;
    }
    if !acc.is_one() {
        return None;
    }
    for i in group.free_rank..n {
        s[i] = coeff_of_acc[i].mod_floor(&group.torsion[i - group.free_rank]);
    }
    let a = scaled_pairing(sigma, &t, &s, &m);
    let inv = a.extended_gcd(&m).x.mod_floor(&m);

    // p(v) = v − x(v)·t − y(v)·s is σ*-orthogonal to t and s
    let project = |v: &[BigInt]| -> Vec<BigInt> {
        let x = (scaled_pairing(sigma, v, &s, &m) * &inv).mod_floor(&m);
        let y = (-(scaled_pairing(sigma, v, &t, &m)) * &inv).mod_floor(&m);
        v.iter().zip(&t).zip(&s).map(|((vi, ti), si)| vi - &x * ti - &y * si).collect()
    };

    let mut rel = group.relations();
    rel = rel.vstack(&IntMatrix::from_rows(vec![t.clone(), s.clone()], n));
    let (quot, lifts) = quotient(n, &IntLattice::from_generators(&rel));
    let projected: Vec<Vec<BigInt>> = lifts.row_iter().map(project).collect();
    let projected = IntMatrix::from_rows(projected, n);
    let exponents = restrict(&sigma.exponents, &projected, &projected);
    let out = Bicharacter::new(quot, exponents).expect("orthogonal complement carries a bicharacter");
    Some((out, m))
}

/// The range of the trace on `K₀(C*(G; σ))`, computed on the simple quotient.
pub fn trace_range_tga(sigma: &Bicharacter) -> TgaTraceRange {
    let mut current = simple_quotient(sigma);
    if current.group.is_torsion_free() {
        return TgaTraceRange { range: trace_range(&current.lifted_theta()), route: TraceRoute::TorsionFree };
    }
    let mut multiplier = BigInt::one();
    let (base, route) = loop {
        if current.group.is_torsion_free() {
            break (trace_range(&current.lifted_theta()), TraceRoute::Split { multiplier: multiplier.clone() });
        }
        match split_once(&current) {
            Some((next, m)) => {
                multiplier *= m;
                current = next;
            }
            None => break (trace_range(&current.lifted_theta()), TraceRoute::Lifted { multiplier: multiplier.clone() }),
        }
    };
    TgaTraceRange { range: divide(&base, &multiplier), route }
}

fn divide(range: &TraceRange, m: &BigInt) -> TraceRange {
    let inv = Scalar::from(BigRational::new(BigInt::one(), m.clone()));
    TraceRange::from_lattice(range.scaled(&inv)).expect("(1/m)·L contains 1 when L contains m")
}

/// Independent route: the torus on the lifted exponents has the same simple
/// quotient as `C*(G; σ)`, hence the same trace range.
pub fn trace_range_tga_lifted(sigma: &Bicharacter) -> TraceRange {
    trace_range(&sigma.lifted_theta())
}

/// Strong Morita equivalence of `C*(G₁; σ₁)` and `C*(G₂; σ₂)`.
pub fn morita_equivalent_tga(sigma1: &Bicharacter, sigma2: &Bicharacter, bounds: &SearchBounds) -> Verdict {
    let (r1, r2) = (sigma1.group.rank(), sigma2.group.rank());
    if !(r1 == r2 || r1 + r2 == 1) {
        return Verdict::NotEquivalent(Reason::Dimension { left: r1, right: r2 });
    }
    let (h1, h2) = (hsigma(sigma1), hsigma(sigma2));
    if h1.rank != h2.rank {
        return Verdict::NotEquivalent(Reason::CenterRank { left: h1.rank, right: h2.rank });
    }
    let (t1, t2) = (h1.torsion_size(), h2.torsion_size());
    if t1 != t2 {
        return Verdict::NotEquivalent(Reason::CenterTorsion { left: t1, right: t2 });
    }
    range_equal_up_to_scaling_with(&trace_range_tga(sigma1).range, &trace_range_tga(sigma2).range, bounds)
}

/// The lattice `(1/m)Z`, handy for comparisons.
pub fn cyclic_range(m: i64) -> TraceRange {
    TraceRange::from_lattice(QuadLattice::from_generators(&[Scalar::from_ratio(1, m)]).expect("rational"))
        .expect("contains 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Scalar {
        Scalar::from_ratio(a, b)
    }

    fn group(r: usize, torsion: &[i64]) -> FgGroup {
        FgGroup::new(r, torsion.iter().map(|&m| BigInt::from(m)).collect()).unwrap()
    }

    fn standard(m: i64) -> Bicharacter {
        let e = ScalarMatrix::from_rows(vec![vec![q(0, 1), q(1, m)], vec![q(-1, m), q(0, 1)]], 2);
        Bicharacter::new(group(0, &[m, m]), e).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let big = ScalarMatrix::from_rows(vec![vec![q(0, 1), q(1, 4)], vec![q(-1, 4), q(0, 1)]], 2);
        assert_eq!(normalize_cocycle(&big), SkewMatrix::from_upper(2, &[q(1, 2)]).unwrap());
        let sym = ScalarMatrix::from_rows(vec![vec![q(1, 1), q(2, 3)], vec![q(2, 3), q(5, 1)]], 2);
        assert!(normalize_cocycle(&sym).is_zero());
    }

    #[test]
    fn hsigma_examples() {
        let free = Bicharacter::from_torus(&SkewMatrix::zero(2));
        assert_eq!(hsigma(&free), HSigma { rank: 2, torsion: vec![] });
        assert_eq!(hsigma(&standard(5)), HSigma { rank: 0, torsion: vec![] });
        let cyclic = Bicharacter::new(group(0, &[6]), ScalarMatrix::zeros(1, 1)).unwrap();
        assert_eq!(hsigma(&cyclic), HSigma { rank: 0, torsion: vec![BigInt::from(6)] });
    }

    #[test]
    fn k_ranks() {
        let cyclic = Bicharacter::new(group(0, &[6]), ScalarMatrix::zeros(1, 1)).unwrap();
        assert_eq!(k_group_ranks_tga(&cyclic), (BigInt::from(6), BigInt::zero()));
        assert_eq!(k_group_ranks_tga(&standard(3)), (BigInt::one(), BigInt::zero()));
        let z3 = Bicharacter::from_torus(&SkewMatrix::zero(3));
        assert_eq!(k_group_ranks_tga(&z3), (BigInt::from(4), BigInt::from(4)));
    }

    #[test]
    fn ranges() {
        let s2 = Scalar::sqrt(2).unwrap();
        let torus = Bicharacter::from_torus(&SkewMatrix::from_upper(2, std::slice::from_ref(&s2)).unwrap());
        let r = trace_range_tga(&torus);
        assert_eq!(r.route, TraceRoute::TorsionFree);
        assert_eq!(r.range.basis(), vec![q(1, 1), s2]);
        for m in 2..=6 {
            let r = trace_range_tga(&standard(m));
            assert_eq!(r.route, TraceRoute::Split { multiplier: BigInt::from(m) });
            assert_eq!(r.range, cyclic_range(m));
            assert_eq!(trace_range_tga_lifted(&standard(m)), cyclic_range(m));
        }
        let cyclic = Bicharacter::new(group(0, &[6]), ScalarMatrix::zeros(1, 1)).unwrap();
        assert_eq!(trace_range_tga(&cyclic).range, cyclic_range(1));
    }

    #[test]
    fn lifted_fallback_when_partner_is_free() {
        // Z × Z/2 × Z with the torsion generator paired only against a free one
        let s2 = Scalar::sqrt(2).unwrap();
        let z = Scalar::zero();
        let e = ScalarMatrix::from_rows(
            vec![
                vec![z.clone(), s2.clone(), z.clone()],
                vec![-&s2, z.clone(), q(1, 2)],
                vec![z.clone(), q(-1, 2), z.clone()],
            ],
            3,
        );
        let sigma = Bicharacter::new(group(2, &[2]), e).unwrap();
        assert_eq!(hsigma(&sigma).rank, 0);
        let r = trace_range_tga(&sigma);
        assert!(matches!(r.route, TraceRoute::Lifted { .. }));
        assert_eq!(r.range, trace_range_tga_lifted(&sigma));
    }

    #[test]
    fn simple_quotient_examples() {
        let zero = Bicharacter::new(group(1, &[4]), ScalarMatrix::zeros(2, 2)).unwrap();
        assert_eq!(simple_quotient(&zero).group().generators(), 0);
        let sq = simple_quotient(&standard(3));
        assert_eq!(sq.group(), &group(0, &[3, 3]));
        let theta = SkewMatrix::from_upper(3, &[q(-3, 1), q(-2, 1), Scalar::sqrt(2).unwrap()]).unwrap();
        let sq = simple_quotient(&Bicharacter::from_torus(&theta));
        assert_eq!(sq.group(), &FgGroup::free(2));
        assert_eq!(hsigma(&sq), HSigma { rank: 0, torsion: vec![] });
    }

    #[test]
    fn decisions() {
        let b = SearchBounds::default();
        let s2 = Scalar::sqrt(2).unwrap();
        let torus = Bicharacter::from_torus(&SkewMatrix::from_upper(2, &[s2]).unwrap());
        assert_eq!(morita_equivalent_tga(&torus, &torus, &b), Verdict::Equivalent { mu: q(1, 1) });
        let c2 = Bicharacter::new(group(0, &[2]), ScalarMatrix::zeros(1, 1)).unwrap();
        let c3 = Bicharacter::new(group(0, &[3]), ScalarMatrix::zeros(1, 1)).unwrap();
        assert_eq!(
            morita_equivalent_tga(&c2, &c3, &b),
            Verdict::NotEquivalent(Reason::CenterTorsion { left: BigInt::from(2), right: BigInt::from(3) })
        );
    }

    #[test]
    fn invalid_bicharacters() {
        let e = ScalarMatrix::from_rows(vec![vec![q(0, 1), q(1, 3)], vec![q(-1, 3), q(0, 1)]], 2);
        assert!(Bicharacter::new(group(0, &[2, 2]), e).is_err());
        let e = ScalarMatrix::from_rows(vec![vec![q(0, 1), q(1, 3)], vec![q(1, 3), q(0, 1)]], 2);
        assert!(Bicharacter::new(FgGroup::free(2), e).is_err());
        assert!(FgGroup::new(0, vec![BigInt::one()]).is_err());
    }
}
