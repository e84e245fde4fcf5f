#![allow(dead_code)]

use ncmorita::exactlin::{IntLattice, IntMatrix, Scalar, ScalarMatrix};
use ncmorita::invariants::TraceRange;
use ncmorita::reduction::SkewMatrix;
use ncmorita::twisted::{Bicharacter, FgGroup};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(a: i64, b: i64) -> Scalar {
    Scalar::from_ratio(a, b)
}

pub fn sqrt2() -> Scalar {
    Scalar::sqrt(2).unwrap()
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn random_rational(rng: &mut impl Rng, max_den: i64) -> Scalar {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(-2 * den..=2 * den);
    q(num, den)
}

/// Rational skew matrix with denominators ≤ `max_den`.
pub fn random_rational_theta(rng: &mut impl Rng, n: usize, max_den: i64) -> SkewMatrix {
    let upper: Vec<Scalar> = (0..n * n.saturating_sub(1) / 2).map(|_| random_rational(rng, max_den)).collect();
    SkewMatrix::from_upper(n, &upper).unwrap()
}

/// Skew matrix over Q(√2): an irrational block on a random index subset,
/// rational elsewhere, then conjugated by a random unimodular matrix so the
/// degenerate directions are not coordinate-aligned.
pub fn random_mixed_theta(rng: &mut impl Rng, n: usize) -> SkewMatrix {
    let block: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.6)).collect();
    let mut m = ScalarMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let mut x = random_rational(rng, 12);
            if block[i] && block[j] && rng.gen_bool(0.8) {
                let b = q(rng.gen_range(-3..=3), rng.gen_range(1..=4));
                x = &x + &(&b * &sqrt2());
            }
            m[(i, j)] = x.clone();
            m[(j, i)] = -x;
        }
    }
    let u = random_unimodular(rng, n, 2).to_scalar();
    SkewMatrix::new(u.mul(&m).mul(&u.transpose())).unwrap()
}

/// Product of a few random elementary row operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..steps * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-1..=1));
        for col in 0..n {
            let add = &c * &u[(j, col)];
            u[(i, col)] += add;
        }
    }
    u
}

/// The fixed corpus: 120 rational and 120 mixed matrices, n ≤ 5.
pub fn corpus() -> Vec<SkewMatrix> {
    let mut r = rng(0x5eed);
    let mut out = Vec::new();
    for i in 0..240 {
        let n = 1 + i % 5;
        if i % 2 == 0 {
            out.push(random_rational_theta(&mut r, n, 12));
        } else {
            out.push(random_mixed_theta(&mut r, n));
        }
    }
    out
}

pub fn example_theta(m: i64, gamma: Scalar) -> SkewMatrix {
    SkewMatrix::from_upper(3, &[q(-3, m), q(-2, m), gamma]).unwrap()
}

pub fn example_g_matrix(m: i64) -> IntMatrix {
    let a = IntMatrix::from_i64(&[&[m, 0, 0], &[0, -2, 3], &[0, -m, m]]);
    let b = IntMatrix::from_i64(&[&[0, 3, 2], &[0, 0, 0], &[1, 0, 0]]);
    let c = IntMatrix::from_i64(&[&[0, 1, -1], &[0, 0, 0], &[1, 0, 0]]);
    let d = IntMatrix::from_i64(&[&[0, 0, 0], &[0, 1, 1], &[0, 0, 0]]);
    a.hstack(&b).vstack(&c.hstack(&d))
}

pub fn four_by_four_pair() -> (SkewMatrix, SkewMatrix) {
    let g = sqrt2();
    let z = Scalar::from_int(0);
    let t1 = SkewMatrix::from_upper(4, &[g.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()]).unwrap();
    let t2 = SkewMatrix::from_upper(4, &[g.clone(), z.clone(), z.clone(), z.clone(), z, g]).unwrap();
    (t1, t2)
}

/// Exponent matrix with strictly upper entries drawn per generator type;
/// a pair involving a torsion generator gets a multiple of `1/gcd` of the orders.
pub fn random_bicharacter(rng: &mut impl Rng, free: usize, torsion: &[i64], irrational: bool) -> Bicharacter {
    let n = free + torsion.len();
    let order = |i: usize| if i < free { 0 } else { torsion[i - free] };
    let mut e = ScalarMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = match num_integer::gcd(order(i), order(j)) {
                0 => {
                    let mut x = random_rational(rng, 6);
                    if irrational {
                        x = &x + &(&q(rng.gen_range(-2..=2), 1) * &sqrt2());
                    }
                    x
                }
                m => q(rng.gen_range(0..m), m),
            };
            e[(j, i)] = -&x;
            e[(i, j)] = x;
        }
    }
    let group = FgGroup::new(free, torsion.iter().map(|&m| BigInt::from(m)).collect()).unwrap();
    Bicharacter::new(group, e).unwrap()
}

/// The standard nondegenerate bicharacter on `(Z/m)²`.
pub fn standard_bicharacter(m: i64) -> Bicharacter {
    let e = ScalarMatrix::from_rows(vec![vec![q(0, 1), q(1, m)], vec![q(-1, m), q(0, 1)]], 2);
    Bicharacter::new(FgGroup::new(0, vec![BigInt::from(m); 2]).unwrap(), e).unwrap()
}

/// Trace range of `C*((Z/m)²; σ)` read off its clock and shift representation
/// on `C^m`: checks the commutation relation, that the `m²` words are a basis of
/// `M_m(C)` on which `tr/m` is the canonical trace, and returns the range generated
/// by the normalized traces of the spectral projections of the clock.
pub fn clock_shift_trace_range(m: usize) -> TraceRange {
    use num_complex::Complex64;
    type M = Vec<Vec<Complex64>>;
    let zero = Complex64::new(0.0, 0.0);
    let mul = |a: &M, b: &M| -> M {
        (0..m).map(|i| (0..m).map(|j| (0..m).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    let tr = |a: &M| -> Complex64 { (0..m).map(|i| a[i][i]).sum() };
    let close = |a: &M, b: &M| (0..m).all(|i| (0..m).all(|j| (a[i][j] - b[i][j]).norm() < 1e-9));
    let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / m as f64);
    let id: M = (0..m).map(|i| (0..m).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { zero }).collect()).collect();
    let u: M = (0..m).map(|i| (0..m).map(|j| if i == j { zeta.powu(i as u32) } else { zero }).collect()).collect();
    let v: M = (0..m).map(|i| (0..m).map(|j| if (j + 1) % m == i { Complex64::new(1.0, 0.0) } else { zero }).collect()).collect();

    // u v = e(1/m) v u
    let uv = mul(&u, &v);
    let vu: M = mul(&v, &u).into_iter().map(|r| r.into_iter().map(|x| x * zeta).collect()).collect();
    assert!(close(&uv, &vu));

    let pow = |a: &M, k: usize| (0..k).fold(id.clone(), |acc, _| mul(&acc, a));
    let words: Vec<M> = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).map(|(a, b)| mul(&pow(&u, a), &pow(&v, b))).collect();
    for (x, wx) in words.iter().enumerate() {
        let t = tr(wx) / m as f64;
        let expected = if x == 0 { 1.0 } else { 0.0 };
        assert!((t - Complex64::new(expected, 0.0)).norm() < 1e-9);
        for (y, wy) in words.iter().enumerate() {
            // Hilbert-Schmidt orthogonality, so the words span all of M_m
            let ip: Complex64 = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| wx[i][j].conj() * wy[i][j]).sum();
            let expected = if x == y { m as f64 } else { 0.0 };
            assert!((ip - Complex64::new(expected, 0.0)).norm() < 1e-9);
        }
    }

    let mut gens = Vec::new();
    for k in 0..m {
        let mut p: M = vec![vec![zero; m]; m];
        for j in 0..m {
            let c = zeta.powi(-((j * k) as i32)) / m as f64;
            let uj = pow(&u, j);
            for a in 0..m {
                for b in 0..m {
                    p[a][b] += c * uj[a][b];
                }
            }
        }
        assert!(close(&mul(&p, &p), &p));
        let t = tr(&p).re / m as f64;
        // recover the exact value from a small denominator
        let (num, den) = (1..=64i64)
            .map(|d| ((t * d as f64).round() as i64, d))
            .find(|&(n, d)| (n as f64 / d as f64 - t).abs() < 1e-9)
            .expect("trace is a fraction with small denominator");
        gens.push(q(num, den));
    }
    TraceRange::from_generators(&gens).unwrap()
}

/// Brute force over the box `[−B, B]^m`: the lattice generated by all solutions.
pub fn brute_force_solutions(m: &ScalarMatrix, bound: i64) -> IntLattice {
    let rows = m.rows();
    let mut acc = IntLattice::from_rows(rows, vec![]);
    let mut found = Vec::new();
    let mut x = vec![-bound; rows];
    loop {
        let v: Vec<Scalar> = x.iter().map(|&c| Scalar::from_int(c)).collect();
        if m.left_apply(&v).iter().all(Scalar::is_integer) {
            found.push(ints(&x));
            // fold into the running basis so the HNF stays small
            if found.len() == 32 {
                found.extend(acc.basis().row_iter().map(|r| r.to_vec()));
                acc = IntLattice::from_rows(rows, std::mem::take(&mut found));
            }
        }
        let mut k = 0;
        while k < rows && x[k] == bound {
            x[k] = -bound;
            k += 1;
        }
        if k == rows {
            break;
        }
        x[k] += 1;
    }
    found.extend(acc.basis().row_iter().map(|r| r.to_vec()));
    IntLattice::from_rows(rows, found)
}
