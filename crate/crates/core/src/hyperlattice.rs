//! The hyperbolic form `⟨x, y⟩ = Σ_j (x_j y_{n+j} + x_{n+j} y_j)` on `Z^{2n}`:
//! compatible bases, completion of isotropic summands, and the choice of a
//! half-basis transversal to an isotropic subspace of `R^{2n}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{
    extend_to_unimodular, left_kernel, saturate, solve_left, IntLattice, IntMatrix, Scalar, ScalarMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("vector lengths {left} and {right} do not match an even ambient dimension")]
    LengthMismatch { left: usize, right: usize },
    #[error("lattice is not isotropic for the hyperbolic form")]
    NotIsotropic,
    #[error("lattice is not saturated in Z^{0}")]
    NotSaturated(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors do not form a compatible basis: {0}")]
    NotCompatible(&'static str),
}

fn check_lengths(left: usize, right: usize) -> Result<usize, HyperError> {
    if left != right || !left.is_multiple_of(2) {
        return Err(HyperError::LengthMismatch { left, right });
    }
    Ok(left / 2)
}

/// The hyperbolic form on `Q(√d)^{2n}`.
pub fn pairing(x: &[Scalar], y: &[Scalar]) -> Result<Scalar, HyperError> {
    let n = check_lengths(x.len(), y.len())?;
    Ok((0..n).map(|j| &x[j] * &y[n + j] + &x[n + j] * &y[j]).sum())
}

/// The hyperbolic form on `Z^{2n}`.
pub fn pairing_int(x: &[BigInt], y: &[BigInt]) -> Result<BigInt, HyperError> {
    let n = check_lengths(x.len(), y.len())?;
    Ok((0..n).fold(BigInt::zero(), |acc, j| acc + &x[j] * &y[n + j] + &x[n + j] * &y[j]))
}

fn pair(x: &[BigInt], y: &[BigInt]) -> BigInt {
    pairing_int(x, y).expect("vectors share the ambient dimension")
}

/// Basis `e₁…eₙ, f₁…fₙ` of `Z^{2n}` with `⟨eᵢ,eⱼ⟩ = ⟨fᵢ,fⱼ⟩ = 0` and `⟨eᵢ,fⱼ⟩ = δᵢⱼ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleBasis {
    e: IntMatrix,
    f: IntMatrix,
}

impl CompatibleBasis {
    /// Validates the pairing relations and unimodularity.
    pub fn new(e: IntMatrix, f: IntMatrix) -> Result<Self, HyperError> {
        let n = e.rows();
        if f.rows() != n || e.cols() != 2 * n || f.cols() != 2 * n {
            return Err(HyperError::DimensionMismatch { expected: 2 * n, found: e.cols().max(f.cols()) });
        }
        for i in 0..n {
            for j in 0..n {
                if !pair(e.row(i), e.row(j)).is_zero() || !pair(f.row(i), f.row(j)).is_zero() {
                    return Err(HyperError::NotCompatible("a half is not isotropic"));
                }
                let expected = if i == j { BigInt::one() } else { BigInt::zero() };
                if pair(e.row(i), f.row(j)) != expected {
                    return Err(HyperError::NotCompatible("cross pairing is not the identity"));
                }
            }
        }
        let basis = CompatibleBasis { e, f };
        if !basis.matrix().is_unimodular() {
            return Err(HyperError::NotCompatible("vectors do not span Z^2n"));
        }
        Ok(basis)
    }

    pub fn standard(n: usize) -> Self {
        let id = IntMatrix::identity(2 * n);
        CompatibleBasis { e: id.block(0, 0, n, 2 * n), f: id.block(n, 0, n, 2 * n) }
    }

    pub fn n(&self) -> usize {
        self.e.rows()
    }

    pub fn e(&self) -> &IntMatrix {
        &self.e
    }

    pub fn f(&self) -> &IntMatrix {
        &self.f
    }

    /// The 2n×2n matrix with rows `e₁…eₙ, f₁…fₙ`.
    pub fn matrix(&self) -> IntMatrix {
        self.e.vstack(&self.f)
    }

    /// Exchanges `eⱼ` and `fⱼ`; the form is symmetric so compatibility is preserved.
    pub fn swap(&mut self, j: usize) {
        let n2 = self.e.cols();
        for c in 0..n2 {
            std::mem::swap(&mut self.e[(j, c)], &mut self.f[(j, c)]);
        }
    }
}

/// An `n`-dimensional isotropic subspace of `R^{2n}` spanned by rows over `Q(√d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSubspace {
    basis: ScalarMatrix,
}

impl IsotropicSubspace {
    pub fn new(basis: ScalarMatrix) -> Result<Self, HyperError> {
        let n = basis.rows();
        if basis.cols() != 2 * n {
            return Err(HyperError::DimensionMismatch { expected: 2 * n, found: basis.cols() });
        }
        for i in 0..n {
            for j in i..n {
                if !pairing(basis.row(i), basis.row(j))?.is_zero() {
                    return Err(HyperError::NotIsotropic);
                }
            }
        }
        if basis.rank() != n {
            return Err(HyperError::DimensionMismatch { expected: n, found: basis.rank() });
        }
        Ok(IsotropicSubspace { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &ScalarMatrix {
        &self.basis
    }
}

/// Completes a saturated isotropic `M ⊂ Z^{2n}` to a compatible basis whose
/// `f₁…f_r` are exactly the stored basis rows of `M`.
///
/// `M` is enlarged to a rank-`n` isotropic summand `M̃` (saturating `M + W`,
/// `W` the part of `0ⁿ ⊕ Zⁿ` orthogonal to `M`), dual vectors `hⱼ` for a basis
/// of `M̃` extending that of `M` are solved for, and the `hⱼ` are corrected to
/// an isotropic half. `M̃` plays the `e` role while building; the halves are
/// exchanged on output.
pub fn complete_isotropic_basis(m: &IntLattice) -> Result<CompatibleBasis, HyperError> {
    let dim = m.ambient_dim();
    if !dim.is_multiple_of(2) {
        return Err(HyperError::LengthMismatch { left: dim, right: dim });
    }
    let n = dim / 2;
    let r = m.rank();
    let mb = m.basis();
    for i in 0..r {
        for j in i..r {
            if !pair(mb.row(i), mb.row(j)).is_zero() {
                return Err(HyperError::NotIsotropic);
            }
        }
    }
    if saturate(m) != *m {
        return Err(HyperError::NotSaturated(dim));
    }
    if r == 0 {
        return Ok(CompatibleBasis::standard(n));
    }

    // W = {(0, z) : ⟨(0, z), m⟩ = 0 for m ∈ M}; ⟨(0,z), m⟩ = z · π(m).
    let projected = mb.block(0, 0, r, n).transpose();
    let w_rows: Vec<Vec<BigInt>> = left_kernel(&projected)
        .basis()
        .row_iter()
        .map(|z| {
            let mut v = vec![BigInt::zero(); n];
            v.extend_from_slice(z);
            v
        })
        .collect();
    let w = IntLattice::from_rows(dim, w_rows);
    let m_tilde = saturate(&m.sum(&w));
    assert_eq!(m_tilde.rank(), n, "saturated isotropic hull must have rank n");

    // basis of M̃ extending the basis of M
    let coords: Vec<Vec<BigInt>> =
        (0..r).map(|i| m_tilde.coordinates(mb.row(i)).expect("M lies in its hull")).collect();
    let completion = extend_to_unimodular(&IntMatrix::from_rows(coords, n))
        .map_err(|_| HyperError::NotSaturated(dim))?;
    let e = completion.mul(m_tilde.basis());

    // pairing matrix Φ: x ↦ (⟨x, e_i⟩)_i, as a 2n×n matrix acting on row vectors
    let phi = IntMatrix::from_fn(dim, n, |row, i| {
        let partner = if row < n { row + n } else { row - n };
        e[(i, partner)].clone()
    });
    let mut f_rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for j in 0..n {
        let target: Vec<BigInt> = (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
        let h = solve_left(&phi, &target).expect("pairing onto Hom(M̃, Z) is surjective");
        let h = m_tilde.reduce(&h);
        let half = pair(&h, &h);
        let (half, rem) = half.div_rem(&BigInt::from(2));
        debug_assert!(rem.is_zero(), "the hyperbolic form is even");
        let mut fj: Vec<BigInt> = h.iter().zip(e.row(j)).map(|(x, ej)| x - &half * ej).collect();
        for (k, fk) in f_rows.iter().enumerate() {
            let c = pair(&h, fk);
            for (x, ek) in fj.iter_mut().zip(e.row(k)) {
                *x -= &c * ek;
            }
        }
        f_rows.push(fj);
    }
    let f = IntMatrix::from_rows(f_rows, dim);
    // M sits in the f-slots on output
    CompatibleBasis::new(f, e)
}

/// Sign vector `ζ ∈ {±1}ⁿ` with `det(A − diag ζ) ≠ 0`.
///
/// Built one leading minor at a time, trying `+1` before `−1`; the two
/// candidate determinants differ by twice the previous nonzero minor, so one
/// of them is nonzero.
pub fn choose_sign_vector(a: &ScalarMatrix) -> Vec<i8> {
    assert!(a.is_square(), "sign vector of a non-square matrix");
    let n = a.rows();
    let mut zeta: Vec<i8> = Vec::with_capacity(n);
    for k in 0..n {
        let idx: Vec<usize> = (0..=k).collect();
        let lead = a.select(&idx, &idx);
        let minor_with = |z: &[i8]| {
            let mut m = lead.clone();
            for (i, &s) in z.iter().enumerate() {
                m[(i, i)] = &m[(i, i)] - &Scalar::from_int(s as i64);
            }
            m.det()
        };
        let mut plus = zeta.clone();
        plus.push(1);
        if !minor_with(&plus).is_zero() {
            zeta = plus;
        } else {
            zeta.push(-1);
            debug_assert!(!minor_with(&zeta).is_zero());
        }
    }
    zeta
}

/// Picks `ηⱼ ∈ {eⱼ, fⱼ}` with `span_R(η) ∩ V = {0}`.
///
/// Returns the chosen vectors (as rows) and a mask that is `true` where `fⱼ` was chosen.
pub fn select_transversal(
    basis: &CompatibleBasis,
    v: &IsotropicSubspace,
) -> Result<(IntMatrix, Vec<bool>), HyperError> {
    let n = basis.n();
    if v.dim() != n {
        return Err(HyperError::DimensionMismatch { expected: n, found: v.dim() });
    }
    // coordinates of V's basis in (e, f), then in (u, v) with u = e + f, v = e − f
    let change = basis.matrix().to_scalar().inverse().expect("compatible bases are invertible");
    let coords = v.basis().mul(&change);
    let half = Scalar::from_ratio(1, 2);
    let x = ScalarMatrix::from_fn(n, n, |i, j| (&coords[(i, j)] + &coords[(i, n + j)]) * &half);
    let y = ScalarMatrix::from_fn(n, n, |i, j| (&coords[(i, j)] - &coords[(i, n + j)]) * &half);
    // V is the graph of φ: W₁ → W₂, so X is invertible and Y = X·Aᵗ
    let x_inv = x.inverse().expect("isotropic V meets the negative definite W₂ trivially");
    let a = x_inv.mul(&y).transpose();
    let zeta = choose_sign_vector(&a);
    let mask: Vec<bool> = zeta.iter().map(|&z| z < 0).collect();
    let rows: Vec<Vec<BigInt>> = mask
        .iter()
        .enumerate()
        .map(|(j, &use_f)| if use_f { basis.f().row(j).to_vec() } else { basis.e().row(j).to_vec() })
        .collect();
    Ok((IntMatrix::from_rows(rows, 2 * n), mask))
}
