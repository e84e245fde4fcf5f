//! Integer linear algebra: Hermite and Smith normal forms, kernels,
//! saturation and completion of summand bases to unimodular matrices.
//!
//! Pivoting always takes the entry of smallest absolute value, lowest row
//! (then lowest column) first, so every output is deterministic.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::matrix::{IntMatrix, ScalarMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice is not a direct summand of Z^{0}")]
    NotADirectSummand(usize),
}

fn row_axpy(m: &mut IntMatrix, target: usize, q: &BigInt, source: usize) {
    // row[target] -= q * row[source]
    for j in 0..m.cols() {
        let v = &m[(source, j)] * q;
        m[(target, j)] -= v;
    }
}

fn col_axpy(m: &mut IntMatrix, target: usize, q: &BigInt, source: usize) {
    for i in 0..m.rows() {
        let v = &m[(i, source)] * q;
        m[(i, target)] -= v;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m.row_mut(i) {
        *x = -std::mem::take(x);
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·M = H`, `U` unimodular.
///
/// `H` is in row echelon form with positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, and zero rows at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows {
            break;
        }
        let mut found = false;
        loop {
            let best = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()).then(a.cmp(&b)));
            let Some(p) = best else { break };
            found = true;
            h.swap_rows(p, r);
            u.swap_rows(p, r);
            let mut clear = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                row_axpy(&mut h, i, &q, r);
                row_axpy(&mut u, i, &q, r);
                if !h[(i, c)].is_zero() {
                    clear = false;
                }
            }
            if clear {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                row_axpy(&mut h, i, &q, r);
                row_axpy(&mut u, i, &q, r);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Result of [`snf`]: `u · m · v = s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in divisor-chain order.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().len()
    }
}

/// Smith normal form with transforms: `U·M·V = S`, `S` diagonal with
/// nonnegative entries `s₁ | s₂ | ⋯`, `U`, `V` unimodular.
pub fn snf(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => s[(i, j)].abs() < s[(bi, bj)].abs(),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clear = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                row_axpy(&mut s, i, &q, t);
                row_axpy(&mut u, i, &q, t);
                clear &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                col_axpy(&mut s, j, &q, t);
                col_axpy(&mut v, j, &q, t);
                clear &= s[(t, j)].is_zero();
            }
            if !clear {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !s[(i, t)].is_zero() && s[(i, t)].abs() < s[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !s[(t, j)].is_zero() && s[(t, j)].abs() < s[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    s.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    s.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)])));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut s, t, &minus_one, i);
                    row_axpy(&mut u, t, &minus_one, i);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    SmithForm { s, u, v }
}

/// Inverse of a unimodular integer matrix. Panics if `m` is not unimodular.
pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(m);
    assert!(h == IntMatrix::identity(m.rows()), "matrix is not unimodular");
    u
}

/// A subgroup of `Z^N`, stored by its row-style HNF basis (no zero rows).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntLattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl IntLattice {
    /// The lattice generated by the rows of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let ambient_dim = generators.cols();
        let (h, _) = hnf(generators);
        let rank = (0..h.rows()).take_while(|&i| !h.row_is_zero(i)).count();
        IntLattice { ambient_dim, basis: h.block(0, 0, rank, ambient_dim) }
    }

    pub fn from_rows(ambient_dim: usize, rows: Vec<Vec<BigInt>>) -> Self {
        Self::from_generators(&IntMatrix::from_rows(rows, ambient_dim))
    }

    pub fn zero(ambient_dim: usize) -> Self {
        IntLattice { ambient_dim, basis: IntMatrix::zeros(0, ambient_dim) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        IntLattice { ambient_dim, basis: IntMatrix::identity(ambient_dim) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn sum(&self, other: &IntLattice) -> IntLattice {
        assert_eq!(self.ambient_dim, other.ambient_dim, "lattice sum dimension mismatch");
        Self::from_generators(&self.basis.vstack(&other.basis))
    }

    fn pivot(&self, i: usize) -> usize {
        (0..self.ambient_dim).find(|&j| !self.basis[(i, j)].is_zero()).expect("HNF rows are nonzero")
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let p = self.pivot(i);
            let (q, r) = rest[p].div_rem(&self.basis[(i, p)]);
            if !r.is_zero() {
                return None;
            }
            for (j, x) in rest.iter_mut().enumerate() {
                *x -= &q * &self.basis[(i, j)];
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Canonical representative of `v` modulo the lattice (pivot entries reduced into `[0, pivot)`).
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for i in 0..self.rank() {
            let p = self.pivot(i);
            let q = out[p].div_floor(&self.basis[(i, p)]);
            if q.is_zero() {
                continue;
            }
            for (j, x) in out.iter_mut().enumerate() {
                *x -= &q * &self.basis[(i, j)];
            }
        }
        out
    }

    pub fn is_saturated(&self) -> bool {
        snf(&self.basis).divisors().iter().all(One::is_one)
    }
}

/// Integer solutions of `x·A = 0`.
pub fn left_kernel(a: &IntMatrix) -> IntLattice {
    let (h, u) = hnf(a);
    let rows: Vec<Vec<BigInt>> = (0..h.rows()).filter(|&i| h.row_is_zero(i)).map(|i| u.row(i).to_vec()).collect();
    IntLattice::from_rows(a.rows(), rows)
}

/// One integer solution of `x·A = target`, or `None` if there is none.
///
/// Solved by forward substitution against the HNF of `A`; free coordinates are zero.
pub fn solve_left(a: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(target.len(), a.cols(), "target length mismatch");
    let (h, u) = hnf(a);
    let mut rest = target.to_vec();
    let mut y = vec![BigInt::zero(); a.rows()];
    for (i, yi) in y.iter_mut().enumerate() {
        let Some(p) = (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) else { break };
        let (q, r) = rest[p].div_rem(&h[(i, p)]);
        if !r.is_zero() {
            return None;
        }
        for (j, x) in rest.iter_mut().enumerate() {
            *x -= &q * &h[(i, j)];
        }
        *yi = q;
    }
    if !rest.iter().all(Zero::is_zero) {
        return None;
    }
    Some(u.left_apply(&y))
}

/// `{x ∈ Z^m : x·M ∈ Z^k}` for a scalar matrix `M` (m×k).
///
/// Each `√d` coordinate of `x·M` must vanish and the rational coordinate
/// must be integral; after clearing denominators this is a left kernel.
pub fn integral_solution_lattice(m: &ScalarMatrix) -> IntLattice {
    let (rows, cols) = (m.rows(), m.cols());
    let mut denom = BigInt::one();
    let mut radicands = BTreeSet::new();
    for i in 0..rows {
        for j in 0..cols {
            let (a, b) = m[(i, j)].denominators();
            denom = denom.lcm(&a).lcm(&b);
            if let Some(d) = m[(i, j)].radicand() {
                radicands.insert(d);
            }
        }
    }
    let scale = BigRational::from_integer(denom.clone());
    let to_int = |q: &BigRational| (q * &scale).to_integer();
    let blocks = radicands.len() + 1;
    // [Q_d1 | Q_d2 | ... | R] stacked over [0 | ... | 0 | denom·I]
    let mut stacked = IntMatrix::zeros(rows + cols, blocks * cols);
    for i in 0..rows {
        for j in 0..cols {
            let x = &m[(i, j)];
            if let Some(d) = x.radicand() {
                let b = radicands.iter().position(|&e| e == d).unwrap();
                stacked[(i, b * cols + j)] = to_int(x.quad());
            }
            stacked[(i, (blocks - 1) * cols + j)] = to_int(x.rat());
        }
    }
    for j in 0..cols {
        stacked[(rows + j, (blocks - 1) * cols + j)] = denom.clone();
    }
    let kernel = left_kernel(&stacked);
    let projected: Vec<Vec<BigInt>> = kernel.basis().row_iter().map(|r| r[..rows].to_vec()).collect();
    IntLattice::from_rows(rows, projected)
}

/// `{x ∈ Z^N : kx ∈ L for some k ≠ 0}`.
pub fn saturate(l: &IntLattice) -> IntLattice {
    if l.is_zero() {
        return l.clone();
    }
    let form = snf(l.basis());
    let vinv = unimodular_inverse(&form.v);
    IntLattice::from_generators(&vinv.block(0, 0, l.rank(), l.ambient_dim()))
}

/// Completes the given rows to an N×N unimodular matrix whose first rows are exactly `rows`.
pub fn extend_to_unimodular(rows: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let (r, n) = (rows.rows(), rows.cols());
    let form = snf(rows);
    let divisors = form.divisors();
    if divisors.len() < r || !divisors.iter().all(One::is_one) {
        return Err(LatticeError::NotADirectSummand(n));
    }
    // rows = U⁻¹·[I | 0]·V⁻¹, so the trailing rows of V⁻¹ complete them.
    let vinv = unimodular_inverse(&form.v);
    Ok(rows.vstack(&vinv.block(r, 0, n - r, n)))
}

/// A basis of `Z^N` whose leading rows are the stored basis of `l`.
pub fn extend_summand_basis(l: &IntLattice) -> Result<IntMatrix, LatticeError> {
    if saturate(l) != *l {
        return Err(LatticeError::NotADirectSummand(l.ambient_dim()));
    }
    extend_to_unimodular(l.basis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Scalar;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = hnf(&m(&[&[2, 2]]));
        assert_eq!(h, m(&[&[2, 2]]));
        assert_eq!(u, m(&[&[1]]));
        let (h, _) = hnf(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!(h, IntMatrix::identity(2));
        let (h, u) = hnf(&m(&[&[2, 0], &[3, 0]]));
        assert_eq!(h, m(&[&[1, 0], &[0, 0]]));
        assert_eq!(u.mul(&m(&[&[2, 0], &[3, 0]])), h);
        assert!(u.is_unimodular());
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&m(&[&[2, 0], &[0, 3]])).s, m(&[&[1, 0], &[0, 6]]));
        assert_eq!(snf(&IntMatrix::identity(3)).s, IntMatrix::identity(3));
        let f = snf(&m(&[&[2, 4], &[4, 8]]));
        assert_eq!(f.s, m(&[&[2, 0], &[0, 0]]));
        assert_eq!(f.u.mul(&m(&[&[2, 4], &[4, 8]])).mul(&f.v), f.s);
    }

    #[test]
    fn integral_solutions() {
        let half = Scalar::from_ratio(1, 2);
        let theta = ScalarMatrix::from_rows(vec![vec![Scalar::zero(), half.clone()], vec![-half, Scalar::zero()]], 2);
        assert_eq!(integral_solution_lattice(&theta), IntLattice::from_generators(&m(&[&[2, 0], &[0, 2]])));
        assert_eq!(integral_solution_lattice(&ScalarMatrix::zeros(3, 3)), IntLattice::full(3));
        let root = ScalarMatrix::from_rows(vec![vec![Scalar::sqrt(2).unwrap()]], 1);
        assert!(integral_solution_lattice(&root).is_zero());
    }

    #[test]
    fn saturation() {
        let l = IntLattice::from_generators(&m(&[&[2, 2]]));
        assert_eq!(saturate(&l), IntLattice::from_generators(&m(&[&[1, 1]])));
        let s = IntLattice::from_generators(&m(&[&[1, 2, 3]]));
        assert_eq!(saturate(&s), s);
        let l = IntLattice::from_generators(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(saturate(&l), IntLattice::full(2));
    }

    #[test]
    fn summand_extension() {
        let l = IntLattice::from_generators(&m(&[&[1, 0, 0]]));
        let b = extend_summand_basis(&l).unwrap();
        assert_eq!(b.row(0), l.basis().row(0));
        assert!(b.is_unimodular());
        let l = IntLattice::from_generators(&m(&[&[1, 1]]));
        let b = extend_summand_basis(&l).unwrap();
        assert_eq!(b.row(0), &[BigInt::from(1), BigInt::from(1)]);
        assert!(b.is_unimodular());
        let l = IntLattice::from_generators(&m(&[&[2, 2]]));
        assert_eq!(extend_summand_basis(&l), Err(LatticeError::NotADirectSummand(2)));
    }

    #[test]
    fn membership_and_solving() {
        let l = IntLattice::from_generators(&m(&[&[2, 0], &[1, 3]]));
        assert!(l.contains(&[BigInt::from(3), BigInt::from(3)]));
        assert!(!l.contains(&[BigInt::from(1), BigInt::from(0)]));
        let a = m(&[&[2, 1], &[0, 3], &[4, 4]]);
        let t = [BigInt::from(2), BigInt::from(5)];
        let x = solve_left(&a, &t).unwrap();
        assert_eq!(a.left_apply(&x), t.to_vec());
        assert!(solve_left(&a, &[BigInt::from(1), BigInt::from(1)]).is_none());
    }
}
