use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactlin::{hnf, IntMatrix, Scalar, ScalarError};
use crate::reduction::SkewMatrix;

use super::pfaffian::pfaffian;

/// A finitely generated subgroup of `Q(√d) ⊂ R`, stored canonically: rows
/// `(aᵢ, bᵢ)` in Hermite normal form standing for `(aᵢ + bᵢ√d)/denom`, with
/// `denom > 0` sharing no factor with every entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadLattice {
    radicand: Option<u64>,
    denom: BigInt,
    rows: IntMatrix,
}

impl QuadLattice {
    pub fn from_generators(generators: &[Scalar]) -> Result<Self, ScalarError> {
        let mut radicand = None;
        let mut denom = BigInt::one();
        for g in generators {
            if let Some(d) = g.radicand() {
                match radicand {
                    Some(e) if e != d => return Err(ScalarError::IncompatibleAmbientField { left: e, right: d }),
                    _ => radicand = Some(d),
                }
            }
            let (a, b) = g.denominators();
            denom = denom.lcm(&a).lcm(&b);
        }
        let scale = BigRational::from_integer(denom.clone());
        let rows: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| vec![(g.rat() * &scale).to_integer(), (g.quad() * &scale).to_integer()])
            .collect();
        let (h, _) = hnf(&IntMatrix::from_rows(rows, 2));
        let kept: Vec<Vec<BigInt>> = h.row_iter().filter(|r| r.iter().any(|x| !x.is_zero())).map(<[BigInt]>::to_vec).collect();
        let content = kept.iter().flatten().fold(denom.clone(), |g, x| g.gcd(x));
        let kept: Vec<Vec<BigInt>> = kept.into_iter().map(|r| r.into_iter().map(|x| x / &content).collect()).collect();
        let radicand = if kept.iter().any(|r| !r[1].is_zero()) { radicand } else { None };
        Ok(QuadLattice { radicand, denom: denom / content, rows: IntMatrix::from_rows(kept, 2) })
    }

    pub fn zero() -> Self {
        QuadLattice { radicand: None, denom: BigInt::one(), rows: IntMatrix::zeros(0, 2) }
    }

    pub fn rank(&self) -> usize {
        self.rows.rows()
    }

    /// `Some(d)` when the lattice contains irrationals.
    pub fn radicand(&self) -> Option<u64> {
        self.radicand
    }

    pub fn basis(&self) -> Vec<Scalar> {
        self.rows
            .row_iter()
            .map(|r| {
                Scalar::new(
                    BigRational::new(r[0].clone(), self.denom.clone()),
                    BigRational::new(r[1].clone(), self.denom.clone()),
                    self.radicand,
                )
                .expect("radicand recorded for irrational rows")
            })
            .collect()
    }

    /// `μ·L`.
    pub fn scale(&self, mu: &Scalar) -> Result<Self, ScalarError> {
        let generators: Vec<Scalar> = self.basis().iter().map(|b| mu.checked_mul(b)).collect::<Result<_, _>>()?;
        QuadLattice::from_generators(&generators)
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let mut generators = self.basis();
        generators.push(x.clone());
        QuadLattice::from_generators(&generators).is_ok_and(|l| l == *self)
    }
}

impl fmt::Display for QuadLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis().iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The range of the trace on `K₀`: a subgroup of `R` that contains 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceRange {
    lattice: QuadLattice,
}

impl TraceRange {
    /// The subgroup generated by 1 and `generators`.
    pub fn from_generators(generators: &[Scalar]) -> Result<Self, ScalarError> {
        let mut all = vec![Scalar::one()];
        all.extend_from_slice(generators);
        Ok(TraceRange { lattice: QuadLattice::from_generators(&all)? })
    }

    /// Wraps a lattice that already contains 1.
    pub fn from_lattice(lattice: QuadLattice) -> Option<Self> {
        lattice.contains(&Scalar::one()).then_some(TraceRange { lattice })
    }

    pub fn lattice(&self) -> &QuadLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn basis(&self) -> Vec<Scalar> {
        self.lattice.basis()
    }

    pub fn radicand(&self) -> Option<u64> {
        self.lattice.radicand()
    }

    /// The group `c·L` for a nonzero `c`; no longer guaranteed to contain 1.
    pub fn scaled(&self, c: &Scalar) -> QuadLattice {
        self.lattice.scale(c).expect("scale factor lives in the same field")
    }
}

impl fmt::Display for TraceRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.lattice.fmt(f)
    }
}

/// All subsets of `0..n` of even positive size, in lexicographic bitmask order.
fn even_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..(1u64 << n))
        .filter(|mask| mask.count_ones() % 2 == 0)
        .map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// The subgroup generated by 1 and the Pfaffians of all even principal submatrices of θ.
pub fn trace_range(theta: &SkewMatrix) -> TraceRange {
    let pfaffians: Vec<Scalar> = even_subsets(theta.n())
        .map(|idx| pfaffian(&theta.principal(&idx)).expect("even size"))
        .filter(|p| !p.is_zero())
        .collect();
    TraceRange::from_generators(&pfaffians).expect("entries of θ share one field")
}

/// Content-reduced `(A, B, C)` with `Aω² + Bω + C = 0` and `A > 0`, for an irrational ω.
pub(crate) fn primitive_minimal_polynomial(omega: &Scalar) -> (BigInt, BigInt, BigInt) {
    // (x − p)² − q²d
    let p = omega.rat();
    let q = omega.quad();
    let d = BigRational::from_integer(BigInt::from(omega.radicand().unwrap_or(0)));
    let coeffs = [BigRational::one(), -(p * BigRational::from_integer(BigInt::from(2))), p * p - q * q * d];
    let den = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let scale = BigRational::from_integer(den);
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &scale).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    if out[0].is_negative() {
        out.iter_mut().for_each(|x| *x = -x.clone());
    }
    (out[0].clone(), out[1].clone(), out[2].clone())
}
