use num_traits::Zero;
use thiserror::Error;

use crate::exactlin::Scalar;
use crate::reduction::SkewMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PfaffianError {
    #[error("Pfaffian of a matrix of odd size {0}")]
    OddDimension(usize),
}

fn check_even(s: &SkewMatrix) -> Result<(), PfaffianError> {
    if !s.n().is_multiple_of(2) {
        return Err(PfaffianError::OddDimension(s.n()));
    }
    Ok(())
}

/// The Pfaffian, by expansion along the first row.
pub fn pfaffian(s: &SkewMatrix) -> Result<Scalar, PfaffianError> {
    pfaffian_by_expansion(s)
}

/// `Pf(S) = Σⱼ (−1)^{j+1} s₀ⱼ Pf(S with rows/cols 0, j removed)`.
pub fn pfaffian_by_expansion(s: &SkewMatrix) -> Result<Scalar, PfaffianError> {
    check_even(s)?;
    let idx: Vec<usize> = (0..s.n()).collect();
    Ok(expand(s, &idx))
}

fn expand(s: &SkewMatrix, idx: &[usize]) -> Scalar {
    if idx.is_empty() {
        return Scalar::from_int(1);
    }
    let mut acc = Scalar::zero();
    for j in 1..idx.len() {
        let a = s.entry(idx[0], idx[j]);
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|&(p, _)| p + 1 != j).map(|(_, &i)| i).collect();
        let term = a * &expand(s, &rest);
        acc = if j % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

/// Signed sum over perfect matchings `{(j₁,j₂),…}` with `j₂ₛ₋₁ < j₂ₛ` and
/// increasing first elements; the sign is the parity of `j₁j₂⋯j₂ₘ` as a permutation.
pub fn pfaffian_by_matchings(s: &SkewMatrix) -> Result<Scalar, PfaffianError> {
    check_even(s)?;
    let mut acc = Scalar::zero();
    let mut word = Vec::with_capacity(s.n());
    let mut used = vec![false; s.n()];
    matchings(s.n(), &mut used, &mut word, &mut |w| {
        let term: Scalar = w.chunks(2).fold(Scalar::from_int(1), |p, pair| p * s.entry(pair[0], pair[1]));
        if permutation_is_odd(w) {
            acc = &acc - &term;
        } else {
            acc = &acc + &term;
        }
    });
    Ok(acc)
}

fn matchings(n: usize, used: &mut [bool], word: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    let Some(first) = used.iter().position(|u| !u) else {
        visit(word);
        return;
    };
    used[first] = true;
    for second in first + 1..n {
        if used[second] {
            continue;
        }
        used[second] = true;
        word.push(first);
        word.push(second);
        matchings(n, used, word, visit);
        word.truncate(word.len() - 2);
        used[second] = false;
    }
    used[first] = false;
}

fn permutation_is_odd(w: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}
