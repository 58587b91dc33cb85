//! Seed-deterministic random generation for axiom checks and property
//! suites. SplitMix64 keeps the byte stream stable across platforms and
//! dependency upgrades.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::sync::Arc;

use crate::polyring::{LaurentPoly, RingKind, VarContext};

/// SplitMix64 generator (Steele, Lea, Flood 2014).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    pub fn range_usize(&mut self, lo: usize, hi: usize) -> usize {
        self.range_i64(lo as i64, hi as i64) as usize
    }
}

/// Random nonzero integer in `[-bound, bound]`.
pub fn nonzero_int(rng: &mut SplitMix64, bound: i64) -> i64 {
    let v = rng.range_i64(1, bound);
    if rng.next_u64() & 1 == 0 {
        v
    } else {
        -v
    }
}

/// Random rational with numerator in `[-bound, bound] \ {0}` and
/// denominator in `[1, bound]`.
pub fn nonzero_rational(rng: &mut SplitMix64, bound: i64) -> BigRational {
    BigRational::new(
        BigInt::from(nonzero_int(rng, bound)),
        BigInt::from(rng.range_i64(1, bound)),
    )
}

/// Random polynomial with at most four terms; exponents in `[-2, 2]` for
/// Laurent rings and `[0, 3]` for polynomial rings, coefficients in
/// `[-5, 5] \ {0}`. Clashing monomials merge, so the result may have
/// fewer terms or even be zero.
pub fn random_poly(rng: &mut SplitMix64, ctx: &Arc<VarContext>) -> LaurentPoly {
    let (lo, hi) = match ctx.kind() {
        RingKind::Laurent => (-2, 2),
        RingKind::Polynomial => (0, 3),
    };
    let nterms = rng.range_usize(1, 4);
    let mut acc = LaurentPoly::zero(ctx);
    for _ in 0..nterms {
        let exps: Vec<i64> = (0..ctx.arity()).map(|_| rng.range_i64(lo, hi)).collect();
        let coeff = BigRational::from_integer(BigInt::from(nonzero_int(rng, 5)));
        let term = LaurentPoly::monomial(ctx, exps, coeff).expect("exponents match ring kind");
        acc = &acc + &term;
    }
    acc
}

/// Random exponent vector within the ring's sampling box.
pub fn random_exponents(rng: &mut SplitMix64, ctx: &Arc<VarContext>) -> Vec<i64> {
    let (lo, hi) = match ctx.kind() {
        RingKind::Laurent => (-2, 2),
        RingKind::Polynomial => (0, 3),
    };
    (0..ctx.arity()).map(|_| rng.range_i64(lo, hi)).collect()
}

/// Random antisymmetric rational matrix with integer entries in
/// `[-bound, bound]`.
pub fn random_skew_matrix(rng: &mut SplitMix64, n: usize, bound: i64) -> Vec<Vec<BigRational>> {
    let mut pi = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = BigRational::from_integer(BigInt::from(rng.range_i64(-bound, bound)));
            pi[i][j] = v.clone();
            pi[j][i] = -v;
        }
    }
    pi
}
