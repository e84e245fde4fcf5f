//! Batch drivers. Each item is independent, so with the `parallel` feature the
//! work is spread over the rayon pool; the `*_sequential` variants are always
//! available and give identical results in the same order.

use crate::invariants::{morita_equivalent_with, SearchBounds, Verdict};
use crate::reduction::{canonical_form, CanonicalForm, SkewMatrix};
use crate::twisted::{morita_equivalent_tga, Bicharacter};

pub fn canonical_forms_sequential(thetas: &[SkewMatrix]) -> Vec<CanonicalForm> {
    thetas.iter().map(canonical_form).collect()
}

pub fn decide_pairs_sequential(pairs: &[(SkewMatrix, SkewMatrix)], bounds: &SearchBounds) -> Vec<Verdict> {
    pairs.iter().map(|(a, b)| morita_equivalent_with(a, b, bounds)).collect()
}

pub fn decide_tga_pairs_sequential(pairs: &[(Bicharacter, Bicharacter)], bounds: &SearchBounds) -> Vec<Verdict> {
    pairs.iter().map(|(a, b)| morita_equivalent_tga(a, b, bounds)).collect()
}

#[cfg(feature = "parallel")]
mod parallel {
    use rayon::prelude::*;

    use super::*;

    pub fn canonical_forms_parallel(thetas: &[SkewMatrix]) -> Vec<CanonicalForm> {
        thetas.par_iter().map(canonical_form).collect()
    }

    pub fn decide_pairs_parallel(pairs: &[(SkewMatrix, SkewMatrix)], bounds: &SearchBounds) -> Vec<Verdict> {
        pairs.par_iter().map(|(a, b)| morita_equivalent_with(a, b, bounds)).collect()
    }

    pub fn decide_tga_pairs_parallel(pairs: &[(Bicharacter, Bicharacter)], bounds: &SearchBounds) -> Vec<Verdict> {
        pairs.par_iter().map(|(a, b)| morita_equivalent_tga(a, b, bounds)).collect()
    }
}

#[cfg(feature = "parallel")]
pub use parallel::{canonical_forms_parallel, decide_pairs_parallel, decide_tga_pairs_parallel};

pub fn canonical_forms(thetas: &[SkewMatrix]) -> Vec<CanonicalForm> {
    #[cfg(feature = "parallel")]
    return canonical_forms_parallel(thetas);
    #[cfg(not(feature = "parallel"))]
    return canonical_forms_sequential(thetas);
}

pub fn decide_pairs(pairs: &[(SkewMatrix, SkewMatrix)], bounds: &SearchBounds) -> Vec<Verdict> {
    #[cfg(feature = "parallel")]
    return decide_pairs_parallel(pairs, bounds);
    #[cfg(not(feature = "parallel"))]
    return decide_pairs_sequential(pairs, bounds);
}

pub fn decide_tga_pairs(pairs: &[(Bicharacter, Bicharacter)], bounds: &SearchBounds) -> Vec<Verdict> {
    #[cfg(feature = "parallel")]
    return decide_tga_pairs_parallel(pairs, bounds);
    #[cfg(not(feature = "parallel"))]
    return decide_tga_pairs_sequential(pairs, bounds);
}
