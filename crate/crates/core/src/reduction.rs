//! Skew matrices, elements of `O(n,n|Z)`, the partial action
//! `gθ = (Aθ+B)(Cθ+D)⁻¹`, and the reduction of any `θ` to `diag(0, θ̃)`
//! with `θ̃` nondegenerate.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{
    integral_solution_lattice, unimodular_inverse, IntLattice, IntMatrix, Scalar, ScalarError, ScalarMatrix,
};
use crate::hyperlattice::{complete_isotropic_basis, select_transversal, IsotropicSubspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension {0} is odd")]
    OddDimension(usize),
    #[error("entries ({row},{col}) and ({col},{row}) are not negatives of each other")]
    NotSkew { row: usize, col: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix does not preserve the hyperbolic form")]
    NotInOnn,
    #[error("C·θ + D is singular")]
    NotDefined,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A real skew-symmetric matrix with entries in `Q` or a single `Q(√d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewMatrix {
    entries: ScalarMatrix,
}

impl SkewMatrix {
    pub fn new(entries: ScalarMatrix) -> Result<Self, ReductionError> {
        if !entries.is_square() {
            return Err(ReductionError::NotSquare { rows: entries.rows(), cols: entries.cols() });
        }
        entries.radicand()?;
        let n = entries.rows();
        for i in 0..n {
            for j in i..n {
                if !(&entries[(i, j)] + &entries[(j, i)]).is_zero() {
                    return Err(ReductionError::NotSkew { row: i, col: j });
                }
            }
        }
        Ok(SkewMatrix { entries })
    }

    /// Builds `θ` from its strict upper triangle, listed row by row.
    pub fn from_upper(n: usize, upper: &[Scalar]) -> Result<Self, ReductionError> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(ReductionError::DimensionMismatch { left: upper.len(), right: n * n.saturating_sub(1) / 2 });
        }
        let mut m = ScalarMatrix::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let x = it.next().expect("length checked");
                m[(i, j)] = x.clone();
                m[(j, i)] = -x;
            }
        }
        SkewMatrix::new(m)
    }

    pub fn zero(n: usize) -> Self {
        SkewMatrix { entries: ScalarMatrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[(i, j)]
    }

    pub fn radicand(&self) -> Option<u64> {
        self.entries.radicand().expect("validated on construction")
    }

    pub fn is_rational(&self) -> bool {
        self.entries.is_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    pub fn neg(&self) -> Self {
        SkewMatrix { entries: self.entries.neg() }
    }

    /// The principal submatrix on `indices`.
    pub fn principal(&self, indices: &[usize]) -> Self {
        SkewMatrix { entries: self.entries.select(indices, indices) }
    }

    /// `diag(0_{r×r}, tilde)`.
    pub fn block_diag_zero(r: usize, tilde: &SkewMatrix) -> Self {
        let n = r + tilde.n();
        let entries = ScalarMatrix::from_fn(n, n, |i, j| {
            if i < r || j < r {
                Scalar::zero()
            } else {
                tilde.entries[(i - r, j - r)].clone()
            }
        });
        SkewMatrix { entries }
    }
}

impl fmt::Display for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.entries.fmt(f)
    }
}

/// Result of testing a matrix against the `O(n,n|Z)` block relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    No,
    OMinus,
    SO,
}

fn hyperbolic_gram(n: usize) -> IntMatrix {
    IntMatrix::from_fn(2 * n, 2 * n, |i, j| if i + n == j || j + n == i { BigInt::one() } else { BigInt::zero() })
}

/// Tests `gᵗJg = J`, which is the block relations
/// `AᵗC+CᵗA = 0 = BᵗD+DᵗB` and `AᵗD+CᵗB = I`, and reports the determinant sign.
pub fn is_in_onn(g: &IntMatrix) -> Result<Membership, ReductionError> {
    if !g.is_square() {
        return Err(ReductionError::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    if !g.rows().is_multiple_of(2) {
        return Err(ReductionError::OddDimension(g.rows()));
    }
    let j = hyperbolic_gram(g.rows() / 2);
    if g.transpose().mul(&j).mul(g) != j {
        return Ok(Membership::No);
    }
    Ok(if g.det().is_one() { Membership::SO } else { Membership::OMinus })
}

/// An element of `O(n,n|Z)` in `2×2` block form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OnnElement {
    matrix: IntMatrix,
}

impl OnnElement {
    pub fn new(matrix: IntMatrix) -> Result<Self, ReductionError> {
        match is_in_onn(&matrix)? {
            Membership::No => Err(ReductionError::NotInOnn),
            _ => Ok(OnnElement { matrix }),
        }
    }

    pub fn from_blocks(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> Result<Self, ReductionError> {
        let n = a.rows();
        for m in [a, b, c, d] {
            if m.rows() != n || m.cols() != n {
                return Err(ReductionError::DimensionMismatch { left: n, right: m.rows().max(m.cols()) });
            }
        }
        OnnElement::new(a.hstack(b).vstack(&c.hstack(d)))
    }

    pub fn identity(n: usize) -> Self {
        OnnElement { matrix: IntMatrix::identity(2 * n) }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows() / 2
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn a(&self) -> IntMatrix {
        let n = self.n();
        self.matrix.block(0, 0, n, n)
    }

    pub fn b(&self) -> IntMatrix {
        let n = self.n();
        self.matrix.block(0, n, n, n)
    }

    pub fn c(&self) -> IntMatrix {
        let n = self.n();
        self.matrix.block(n, 0, n, n)
    }

    pub fn d(&self) -> IntMatrix {
        let n = self.n();
        self.matrix.block(n, n, n, n)
    }

    pub fn membership(&self) -> Membership {
        is_in_onn(&self.matrix).expect("validated on construction")
    }
}

/// `g₁g₂`, so that `act(compose(g₁,g₂), θ) = act(g₁, act(g₂, θ))`.
pub fn compose(g1: &OnnElement, g2: &OnnElement) -> OnnElement {
    assert_eq!(g1.n(), g2.n(), "composing elements of different O(n,n)");
    OnnElement { matrix: g1.matrix.mul(&g2.matrix) }
}

/// `g⁻¹ = J gᵗ J`.
pub fn inverse(g: &OnnElement) -> OnnElement {
    let j = hyperbolic_gram(g.n());
    OnnElement { matrix: j.mul(&g.matrix.transpose()).mul(&j) }
}

/// The partial action `gθ = (Aθ+B)(Cθ+D)⁻¹`.
pub fn act(g: &OnnElement, theta: &SkewMatrix) -> Result<SkewMatrix, ReductionError> {
    let n = g.n();
    if theta.n() != n {
        return Err(ReductionError::DimensionMismatch { left: n, right: theta.n() });
    }
    let t = theta.matrix();
    let top = g.a().to_scalar().mul(t).add(&g.b().to_scalar());
    let bottom = g.c().to_scalar().mul(t).add(&g.d().to_scalar());
    let inv = bottom.inverse().ok_or(ReductionError::NotDefined)?;
    let result = SkewMatrix::new(top.mul(&inv)).expect("the partial action preserves skew-symmetry");
    assert_eq!(g.membership(), Membership::SO, "a defined action forces determinant +1");
    Ok(result)
}

/// Output of [`canonical_form`]: `act(g, θ) = θ' = diag(0_{n−k}, θ̃)` with `θ̃` nondegenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub g: OnnElement,
    pub theta_prime: SkewMatrix,
    pub k: usize,
    pub theta_tilde: SkewMatrix,
}

/// Column `j` of θ stacked over `e_j`: the graph `{(θy, y)}` evaluated at `y = e_j`.
fn graph_rows(theta: &SkewMatrix) -> ScalarMatrix {
    let n = theta.n();
    ScalarMatrix::from_fn(n, 2 * n, |j, c| {
        if c < n {
            theta.entry(c, j).clone()
        } else if c - n == j {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// Reduces `θ` to `diag(0, θ̃)` by an explicit `g ∈ SO(n,n|Z)`.
///
/// The integral points `M` of the graph `V = {(θy, y)}` are completed to a
/// compatible basis with `M` in the first `f`-slots, the pairs `(eⱼ, fⱼ)` are
/// swapped where needed so that `span(e)` misses `V`, and `g` maps this basis
/// to the standard one. Panics only if an internal invariant fails.
pub fn canonical_form(theta: &SkewMatrix) -> CanonicalForm {
    let n = theta.n();
    let h = integral_solution_lattice(theta.matrix());
    let graph = graph_rows(theta);
    let m_rows: Vec<Vec<BigInt>> = h
        .basis()
        .row_iter()
        .map(|y| {
            let y: Vec<Scalar> = y.iter().map(|c| Scalar::from(c.clone())).collect();
            graph
                .left_apply(&y)
                .into_iter()
                .map(|x| x.rat().to_integer())
                .collect()
        })
        .collect();
    let m = IntLattice::from_rows(2 * n, m_rows);
    let r = m.rank();

    let mut basis = complete_isotropic_basis(&m).expect("integral points of an isotropic graph form a summand");
    let v = IsotropicSubspace::new(graph.clone()).expect("graph of a skew matrix is isotropic");
    let (_, mask) = select_transversal(&basis, &v).expect("dimensions agree");
    for (j, &swap) in mask.iter().enumerate() {
        if swap {
            assert!(j >= r, "slot {j} holds a vector of V and cannot be swapped");
            basis.swap(j);
        }
    }

    let bmat = basis.matrix();
    let coords = graph.mul(&bmat.to_scalar().inverse().expect("unimodular"));
    let a = coords.block(0, 0, n, n);
    let b = coords.block(0, n, n, n);
    let b_inv = b.inverse().expect("span(e) is transversal to V");
    let theta_prime = SkewMatrix::new(b_inv.mul(&a).transpose()).expect("image of a skew matrix is skew");
    let g = OnnElement::new(unimodular_inverse(&bmat.transpose())).expect("compatible basis change preserves the form");

    let k = n - r;
    let tail: Vec<usize> = (r..n).collect();
    let theta_tilde = theta_prime.principal(&tail);
    assert_eq!(g.membership(), Membership::SO, "reduction element must lie in SO(n,n|Z)");
    assert_eq!(act(&g, theta).as_ref(), Ok(&theta_prime), "g must carry θ to θ'");
    assert_eq!(SkewMatrix::block_diag_zero(r, &theta_tilde), theta_prime, "θ' must be block diagonal");
    assert!(integral_solution_lattice(theta_tilde.matrix()).is_zero(), "θ̃ must be nondegenerate");
    CanonicalForm { g, theta_prime, k, theta_tilde }
}
