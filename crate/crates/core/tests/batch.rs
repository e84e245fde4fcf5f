mod common;

use common::{corpus, random_bicharacter, rng};
use ncmorita::batch::{canonical_forms, canonical_forms_sequential, decide_pairs, decide_pairs_sequential};
use ncmorita::batch::{decide_tga_pairs, decide_tga_pairs_sequential};
use ncmorita::invariants::SearchBounds;
use rand::Rng;

#[test]
fn dispatch_matches_sequential() {
    let c: Vec<_> = corpus().into_iter().take(80).collect();
    assert_eq!(canonical_forms(&c), canonical_forms_sequential(&c));

    let pairs: Vec<_> = c.iter().zip(c.iter().rev()).map(|(a, b)| (a.clone(), b.clone())).collect();
    let b = SearchBounds::default();
    assert_eq!(decide_pairs(&pairs, &b), decide_pairs_sequential(&pairs, &b));

    let mut r = rng(41);
    let tga: Vec<_> = (0..60)
        .map(|i| {
            let free = r.gen_range(0..=2);
            let t = [r.gen_range(2..=6), r.gen_range(2..=6)];
            (random_bicharacter(&mut r, free, &t, i % 2 == 0), random_bicharacter(&mut r, free, &t, i % 2 == 0))
        })
        .collect();
    assert_eq!(decide_tga_pairs(&tga, &b), decide_tga_pairs_sequential(&tga, &b));
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_matches_sequential() {
    use ncmorita::batch::{canonical_forms_parallel, decide_pairs_parallel};
    let c: Vec<_> = corpus().into_iter().skip(80).take(80).collect();
    assert_eq!(canonical_forms_parallel(&c), canonical_forms_sequential(&c));
    let pairs: Vec<_> = c.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
    let b = SearchBounds::default();
    assert_eq!(decide_pairs_parallel(&pairs, &b), decide_pairs_sequential(&pairs, &b));
}
