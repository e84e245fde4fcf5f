use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactlin::Scalar;
use crate::reduction::SkewMatrix;

use super::trace_range::{primitive_minimal_polynomial, trace_range, QuadLattice, TraceRange};
use super::degeneracy_subgroup;

/// Why two algebras were found not to be Morita equivalent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    /// `n₁ ≠ n₂` and `n₁ + n₂ ≠ 1`, or the group ranks for twisted algebras.
    Dimension { left: usize, right: usize },
    /// Ranks of the centers' spectra differ.
    CenterRank { left: usize, right: usize },
    /// Sizes of the torsion parts of the centers' spectra differ.
    CenterTorsion { left: BigInt, right: BigInt },
    /// The trace ranges have different ranks.
    RangeRank { left: usize, right: usize },
    /// The trace ranges span different quadratic fields.
    RatioField { left: Option<u64>, right: Option<u64> },
    /// The multiplier rings `{x : xL ⊆ L}` have different discriminants.
    MultiplierOrder { left: BigInt, right: BigInt },
    /// The continued-fraction expansions of the basis ratios never meet.
    NoScaling,
}

fn field_name(d: &Option<u64>) -> String {
    match d {
        Some(d) => format!("sqrt({d})"),
        None => "rational".to_string(),
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Dimension { left, right } => write!(f, "dimension {left} vs {right}"),
            Reason::CenterRank { left, right } => write!(f, "center-rank {left} vs {right}"),
            Reason::CenterTorsion { left, right } => write!(f, "center-torsion {left} vs {right}"),
            Reason::RangeRank { left, right } => write!(f, "range-rank {left} vs {right}"),
            Reason::RatioField { left, right } => write!(f, "ratio-field {} vs {}", field_name(left), field_name(right)),
            Reason::MultiplierOrder { left, right } => write!(f, "multiplier-order disc {left} vs {right}"),
            Reason::NoScaling => write!(f, "range-scaling none"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Carries a positive `μ` with `μ·L₁ = L₂`.
    Equivalent { mu: Scalar },
    NotEquivalent(Reason),
    /// The scaling search ran out of budget.
    Unknown { height: u32 },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent { .. })
    }

    pub fn mu(&self) -> Option<&Scalar> {
        match self {
            Verdict::Equivalent { mu } => Some(mu),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent { mu } => write!(f, "EQUIVALENT mu={mu}"),
            Verdict::NotEquivalent(reason) => write!(f, "NOT_EQUIVALENT {reason}"),
            Verdict::Unknown { height } => write!(f, "UNKNOWN search-height {height}"),
        }
    }
}

/// Budget for the scaling decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Coefficient bound for candidate multipliers.
    pub height: u32,
    /// Maximum continued-fraction steps per expansion.
    pub reduction_steps: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { height: 20, reduction_steps: 10_000 }
    }
}

impl SearchBounds {
    pub fn with_height(height: u32) -> Self {
        SearchBounds { height, ..Default::default() }
    }
}

fn verified(l1: &QuadLattice, l2: &QuadLattice, mu: &Scalar) -> bool {
    mu.is_positive() && l1.scale(mu).is_ok_and(|s| s == *l2)
}

fn discriminant(omega: &Scalar) -> BigInt {
    let (a, b, c) = primitive_minimal_polynomial(omega);
    &b * &b - BigInt::from(4) * a * c
}

/// Integer combinations `c₁b₁ + c₂b₂` with `|cᵢ| ≤ height`, nonzero, by increasing height.
fn combinations(basis: &[Scalar], height: u32) -> Vec<Scalar> {
    let h = height as i64;
    let coeffs: Vec<i64> = (-h..=h).collect();
    match basis {
        [b] => {
            let mut cs: Vec<i64> = coeffs.into_iter().filter(|&c| c != 0).collect();
            cs.sort_by_key(|c| (c.abs(), *c < 0));
            cs.iter().map(|&c| b * &Scalar::from_int(c)).collect()
        }
        [b1, b2] => {
            let mut pairs: Vec<(i64, i64)> =
                coeffs.iter().flat_map(|&c1| coeffs.iter().map(move |&c2| (c1, c2))).filter(|&p| p != (0, 0)).collect();
            pairs.sort_by_key(|&(c1, c2)| c1.abs().max(c2.abs()));
            pairs
                .into_iter()
                .map(|(c1, c2)| b1 * &Scalar::from_int(c1) + b2 * &Scalar::from_int(c2))
                .collect()
        }
        _ => Vec::new(),
    }
}

/// Absolute determinant of a rank-2 basis in `(rational, √d)` coordinates.
fn covolume(basis: &[Scalar]) -> BigRational {
    (basis[0].rat() * basis[1].quad() - basis[1].rat() * basis[0].quad()).abs()
}

fn search(l1: &QuadLattice, l2: &QuadLattice, height: u32) -> Option<Scalar> {
    let (u, v) = (l1.basis(), l2.basis());
    let mut candidates: Vec<Scalar> = combinations(&v, height).iter().map(|x| (x / &u[0]).abs()).collect();
    candidates.extend(combinations(&u, height).iter().map(|y| (&v[0] / y).abs()));
    // multiplication by μ scales the covolume by |N(μ)|
    let target = covolume(&v) / covolume(&u);
    find_first(&candidates, |mu| mu.norm().abs() == target && verified(l1, l2, mu))
}

#[cfg(feature = "parallel")]
fn find_first(candidates: &[Scalar], test: impl Fn(&Scalar) -> bool + Sync) -> Option<Scalar> {
    use rayon::prelude::*;
    candidates.par_iter().find_first(|mu| test(mu)).cloned()
}

#[cfg(not(feature = "parallel"))]
fn find_first(candidates: &[Scalar], test: impl Fn(&Scalar) -> bool) -> Option<Scalar> {
    candidates.iter().find(|mu| test(mu)).cloned()
}

/// `ω = (a·x + b)/(c·x + d)`, tracked while expanding ω as a continued fraction.
type Mobius = [BigInt; 4];

/// Complete quotients of ω with the matrix expressing ω through each one,
/// stopping at the first repetition. `None` if the step budget runs out.
fn complete_quotients(omega: &Scalar, steps: usize) -> Option<Vec<(Scalar, Mobius)>> {
    let mut seen: HashMap<Scalar, usize> = HashMap::new();
    let mut out = Vec::new();
    let mut x = omega.clone();
    let mut m: Mobius = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    for _ in 0..steps {
        if seen.contains_key(&x) {
            return Some(out);
        }
        seen.insert(x.clone(), out.len());
        out.push((x.clone(), m.clone()));
        let a = x.floor();
        let frac = &x - &Scalar::from(a.clone());
        x = frac.checked_inv().expect("quadratic irrationals have infinite expansions");
        let [p, q, r, s] = m;
        m = [&p * &a + &q, p, &r * &a + &s, r];
    }
    None
}

/// Finds `[a b; c d] ∈ GL₂(Z)` with `ω₂ = (aω₁+b)/(cω₁+d)`, which exists iff the
/// expansions of ω₁ and ω₂ share a complete quotient. `Err(())` if the budget runs out.
fn mobius_between(omega1: &Scalar, omega2: &Scalar, steps: usize) -> Result<Option<Mobius>, ()> {
    let first = complete_quotients(omega1, steps).ok_or(())?;
    let index: HashMap<&Scalar, &Mobius> = first.iter().map(|(x, m)| (x, m)).collect();
    let second = complete_quotients(omega2, steps).ok_or(())?;
    for (x, m2) in &second {
        if let Some(m1) = index.get(x) {
            // ω₁ = M₁·x and ω₂ = M₂·x, so ω₂ = M₂·M₁⁻¹·ω₁
            let [p, q, r, s] = (*m1).clone();
            let det = &p * &s - &q * &r;
            let inv = [&s * &det, -&q * &det, -&r * &det, &p * &det];
            let [a, b, c, d] = m2.clone();
            return Ok(Some([
                &a * &inv[0] + &b * &inv[2],
                &a * &inv[1] + &b * &inv[3],
                &c * &inv[0] + &d * &inv[2],
                &c * &inv[1] + &d * &inv[3],
            ]));
        }
    }
    Ok(None)
}

/// Decides whether `L₂ = μ·L₁` for some real `μ > 0`.
pub fn range_equal_up_to_scaling(l1: &TraceRange, l2: &TraceRange) -> Verdict {
    lattices_equal_up_to_scaling(l1.lattice(), l2.lattice(), &SearchBounds::default())
}

pub fn range_equal_up_to_scaling_with(l1: &TraceRange, l2: &TraceRange, bounds: &SearchBounds) -> Verdict {
    lattices_equal_up_to_scaling(l1.lattice(), l2.lattice(), bounds)
}

/// The scaling decision on arbitrary subgroups of `Q(√d)`.
pub fn lattices_equal_up_to_scaling(l1: &QuadLattice, l2: &QuadLattice, bounds: &SearchBounds) -> Verdict {
    if l1.rank() != l2.rank() {
        return Verdict::NotEquivalent(Reason::RangeRank { left: l1.rank(), right: l2.rank() });
    }
    let (u, v) = (l1.basis(), l2.basis());
    match u.len() {
        0 => return Verdict::Equivalent { mu: Scalar::one() },
        1 => {
            // a ratio outside every single quadratic field cannot be represented
            return match v[0].checked_div(&u[0]) {
                Ok(mu) if verified(l1, l2, &mu.abs()) => Verdict::Equivalent { mu: mu.abs() },
                _ => Verdict::NotEquivalent(Reason::RatioField { left: l1.radicand(), right: l2.radicand() }),
            };
        }
        _ => {}
    }
    if l1.radicand() != l2.radicand() {
        return Verdict::NotEquivalent(Reason::RatioField { left: l1.radicand(), right: l2.radicand() });
    }
    let omega1 = &u[1] / &u[0];
    let omega2 = &v[1] / &v[0];
    let (disc1, disc2) = (discriminant(&omega1), discriminant(&omega2));
    if disc1 != disc2 {
        return Verdict::NotEquivalent(Reason::MultiplierOrder { left: disc1, right: disc2 });
    }
    if l1 == l2 {
        return Verdict::Equivalent { mu: Scalar::one() };
    }
    // the reduction is complete in rank 2; the coefficient search only covers
    // an exhausted step budget
    match mobius_between(&omega1, &omega2, bounds.reduction_steps) {
        Err(()) => match search(l1, l2, bounds.height) {
            Some(mu) => Verdict::Equivalent { mu },
            None => Verdict::Unknown { height: bounds.height },
        },
        Ok(None) => Verdict::NotEquivalent(Reason::NoScaling),
        Ok(Some([_, _, c, d])) => {
            let denom = &(&omega1 * &Scalar::from(c)) + &Scalar::from(d);
            let mu = (&v[0] / &(&u[0] * &denom)).abs();
            assert!(verified(l1, l2, &mu), "GL2(Z)-equivalent ratios give homothetic lattices");
            Verdict::Equivalent { mu }
        }
    }
}

fn dimension_compatible(n1: usize, n2: usize) -> bool {
    n1 == n2 || n1 + n2 == 1
}

/// Ordered `K₀` groups are isomorphic iff the trace ranges agree up to positive
/// scaling and either `n₁ = n₂` or `n₁ + n₂ = 1`.
pub fn ordered_k0_isomorphic(theta1: &SkewMatrix, theta2: &SkewMatrix, bounds: &SearchBounds) -> Verdict {
    let (n1, n2) = (theta1.n(), theta2.n());
    if !dimension_compatible(n1, n2) {
        return Verdict::NotEquivalent(Reason::Dimension { left: n1, right: n2 });
    }
    range_equal_up_to_scaling_with(&trace_range(theta1), &trace_range(theta2), bounds)
}

/// Strong Morita equivalence of `A_θ₁` and `A_θ₂`: isomorphic ordered `K₀` and centers.
pub fn morita_equivalent(theta1: &SkewMatrix, theta2: &SkewMatrix) -> Verdict {
    morita_equivalent_with(theta1, theta2, &SearchBounds::default())
}

pub fn morita_equivalent_with(theta1: &SkewMatrix, theta2: &SkewMatrix, bounds: &SearchBounds) -> Verdict {
    let (n1, n2) = (theta1.n(), theta2.n());
    if !dimension_compatible(n1, n2) {
        return Verdict::NotEquivalent(Reason::Dimension { left: n1, right: n2 });
    }
    let (r1, r2) = (degeneracy_subgroup(theta1).rank(), degeneracy_subgroup(theta2).rank());
    if r1 != r2 {
        return Verdict::NotEquivalent(Reason::CenterRank { left: r1, right: r2 });
    }
    ordered_k0_isomorphic(theta1, theta2, bounds)
}

/// Ranks of `K₀(A_θ)` and `K₁(A_θ)`.
pub fn k_group_ranks(theta: &SkewMatrix) -> (BigInt, BigInt) {
    match theta.n() {
        0 => (BigInt::one(), BigInt::zero()),
        n => {
            let r = BigInt::one() << (n - 1);
            (r.clone(), r)
        }
    }
}
