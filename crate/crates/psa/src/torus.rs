//! Rational torus actions encoded by integer weight matrices.
//!
//! A rank-r torus acts diagonally with `(h_1,...,h_r).x_i =
//! (prod_t h_t^(W[t][i])) x_i`; the induced grading gives a monomial
//! `x^e` the weight `W e`. Decomposing a polynomial by weight and
//! checking homogeneity of ideal generators certify H-stability.

use std::collections::BTreeMap;
use std::fmt;

use crate::ideals::{IdealError, IdealSpec};
use crate::lattice::IntMatrix;
use crate::polyring::LaurentPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusError {
    RowLength {
        row: usize,
        expected: usize,
        got: usize,
    },
    RankMismatch {
        rank: usize,
        rows: usize,
    },
    ZeroPolynomial,
    ContextMismatch,
    Unsupported(String),
    Ideal(String),
}

impl fmt::Display for TorusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusError::RowLength { row, expected, got } => {
                write!(f, "weight row {row} has length {got}, expected {expected}")
            }
            TorusError::RankMismatch { rank, rows } => {
                write!(f, "declared rank {rank} but {rows} weight rows")
            }
            TorusError::ZeroPolynomial => write!(f, "the zero polynomial has no weight"),
            TorusError::ContextMismatch => write!(f, "operands live in different rings"),
            TorusError::Unsupported(why) => write!(f, "unsupported: {why}"),
            TorusError::Ideal(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TorusError {}

impl From<IdealError> for TorusError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::Unsupported(why) => TorusError::Unsupported(why),
            other => TorusError::Ideal(other.to_string()),
        }
    }
}

/// Integer weight matrix, one row per torus factor, one column per ring
/// variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAction {
    weights: Vec<Vec<i64>>, // r x n
    arity: usize,
}

impl TorusAction {
    pub fn new(rank: usize, weights: Vec<Vec<i64>>, arity: usize) -> Result<Self, TorusError> {
        if weights.len() != rank {
            return Err(TorusError::RankMismatch {
                rank,
                rows: weights.len(),
            });
        }
        for (row, w) in weights.iter().enumerate() {
            if w.len() != arity {
                return Err(TorusError::RowLength {
                    row,
                    expected: arity,
                    got: w.len(),
                });
            }
        }
        Ok(TorusAction { weights, arity })
    }

    /// The full coordinate torus: identity weights.
    pub fn identity(arity: usize) -> Self {
        let weights = (0..arity)
            .map(|i| (0..arity).map(|j| i64::from(i == j)).collect())
            .collect();
        TorusAction { weights, arity }
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn as_matrix(&self) -> IntMatrix {
        let flat: Vec<i64> = self.weights.iter().flatten().copied().collect();
        IntMatrix::from_i64(self.rank(), self.arity, &flat)
    }

    /// Whether the action contains the full coordinate torus, i.e. the
    /// weight matrix has rank equal to the number of variables. Monomials
    /// are then the only homogeneous elements.
    pub fn has_full_rank(&self) -> bool {
        self.as_matrix().rank() == self.arity
    }

    /// Weight of the monomial `x^e`.
    pub fn weight_of_exponents(&self, e: &[i64]) -> Vec<i64> {
        self.weights
            .iter()
            .map(|row| {
                row.iter()
                    .zip(e)
                    .map(|(&w, &x)| w.checked_mul(x).expect("weight overflow"))
                    .fold(0i64, |acc, v| acc.checked_add(v).expect("weight overflow"))
            })
            .collect()
    }

    /// Weight of `f` if homogeneous, otherwise the full decomposition
    /// into weight components.
    pub fn weight_of(&self, f: &LaurentPoly) -> Result<WeightOf, TorusError> {
        if f.is_zero() {
            return Err(TorusError::ZeroPolynomial);
        }
        let decomposition = self.decompose(f)?;
        if decomposition.components.len() == 1 {
            let (w, _) = decomposition
                .components
                .iter()
                .next()
                .expect("one component");
            Ok(WeightOf::Homogeneous(w.clone()))
        } else {
            Ok(WeightOf::Inhomogeneous(decomposition))
        }
    }

    /// Split into weight-homogeneous components; they sum to the input.
    pub fn decompose(&self, f: &LaurentPoly) -> Result<WeightDecomposition, TorusError> {
        let ctx = f.context();
        if ctx.arity() != self.arity {
            return Err(TorusError::ContextMismatch);
        }
        let mut components: BTreeMap<Vec<i64>, LaurentPoly> = BTreeMap::new();
        for (exps, coeff) in f.terms() {
            let w = self.weight_of_exponents(exps);
            let term = LaurentPoly::monomial(ctx, exps.clone(), coeff.clone())
                .expect("term of a valid polynomial");
            components
                .entry(w)
                .and_modify(|p| *p = &*p + &term)
                .or_insert(term);
        }
        Ok(WeightDecomposition { components })
    }
}

/// Weight components of a polynomial, keyed by weight vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub components: BTreeMap<Vec<i64>, LaurentPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightOf {
    Homogeneous(Vec<i64>),
    Inhomogeneous(WeightDecomposition),
}

/// H-stability of an ideal, certified on generators. A homogeneous
/// generator is an eigenvector; an inhomogeneous generator still passes
/// when each of its weight components lies in the ideal.
pub fn is_h_stable(action: &TorusAction, ideal: &IdealSpec) -> Result<bool, TorusError> {
    if ideal.context().arity() != action.arity {
        return Err(TorusError::ContextMismatch);
    }
    for g in ideal.generator_polys() {
        match action.weight_of(&g)? {
            WeightOf::Homogeneous(_) => {}
            WeightOf::Inhomogeneous(decomposition) => {
                for component in decomposition.components.values() {
                    if !ideal.membership(component)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::BracketSpec;
    use crate::polyring::{parse, RingKind, VarContext};
    use crate::rng::{random_poly, SplitMix64};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn laurent3() -> Arc<VarContext> {
        VarContext::new(
            vec!["x1".into(), "x2".into(), "x3".into()],
            RingKind::Laurent,
        )
        .unwrap()
    }

    fn poly_ctx(names: &[&str]) -> Arc<VarContext> {
        VarContext::new(
            names.iter().map(|s| s.to_string()).collect(),
            RingKind::Polynomial,
        )
        .unwrap()
    }

    /// The 4-torus action on k[a,b,c,d] with weights
    /// a -> (1,0,1,0), b -> (1,0,0,1), c -> (0,1,1,0), d -> (0,1,0,1).
    fn four_torus() -> TorusAction {
        TorusAction::new(
            4,
            vec![
                vec![1, 1, 0, 0],
                vec![0, 0, 1, 1],
                vec![1, 0, 1, 0],
                vec![0, 1, 0, 1],
            ],
            4,
        )
        .unwrap()
    }

    #[test]
    fn identity_weights_read_off_exponents() {
        let ctx = laurent3();
        let action = TorusAction::identity(3);
        let f = parse("x1*x2^-1*x3", &ctx).unwrap();
        assert_eq!(
            action.weight_of(&f).unwrap(),
            WeightOf::Homogeneous(vec![1, -1, 1])
        );
    }

    #[test]
    fn mixed_weights_decompose() {
        let ctx = laurent3();
        let action = TorusAction::identity(3);
        let f = parse("x1 + x2", &ctx).unwrap();
        match action.weight_of(&f).unwrap() {
            WeightOf::Inhomogeneous(d) => {
                assert_eq!(d.components.len(), 2);
                let recombined = d
                    .components
                    .values()
                    .fold(LaurentPoly::zero(&ctx), |acc, p| &acc + p);
                assert_eq!(recombined, f);
            }
            WeightOf::Homogeneous(_) => panic!("x1 + x2 is not homogeneous"),
        }
    }

    #[test]
    fn determinant_is_homogeneous_for_the_four_torus() {
        let ctx = poly_ctx(&["a", "b", "c", "d"]);
        let action = four_torus();
        let ad = parse("a*d", &ctx).unwrap();
        let bc = parse("b*c", &ctx).unwrap();
        assert_eq!(
            action.weight_of(&ad).unwrap(),
            WeightOf::Homogeneous(vec![1, 1, 1, 1])
        );
        assert_eq!(
            action.weight_of(&bc).unwrap(),
            WeightOf::Homogeneous(vec![1, 1, 1, 1])
        );
        let det = parse("a*d - b*c", &ctx).unwrap();
        assert_eq!(
            action.weight_of(&det).unwrap(),
            WeightOf::Homogeneous(vec![1, 1, 1, 1])
        );
    }

    #[test]
    fn h_stability_examples() {
        let ctx = poly_ctx(&["x1", "x2", "x3"]);
        let action = TorusAction::identity(3);
        let coords = IdealSpec::coordinate(&ctx, &[0, 1].into_iter().collect()).unwrap();
        assert!(is_h_stable(&action, &coords).unwrap());

        let shifted = IdealSpec::new(&ctx, vec![], vec![parse("x1 - 1", &ctx).unwrap()]).unwrap();
        assert!(!is_h_stable(&action, &shifted).unwrap());

        let ctx4 = poly_ctx(&["a", "b", "c", "d"]);
        let det = IdealSpec::new(&ctx4, vec![], vec![parse("a*d - b*c", &ctx4).unwrap()]).unwrap();
        assert!(is_h_stable(&four_torus(), &det).unwrap());
    }

    #[test]
    fn inhomogeneous_generator_with_components_inside_still_passes() {
        // <x1, x2> presented with the inhomogeneous generator x1 + x2
        let ctx = poly_ctx(&["x1", "x2", "x3"]);
        let action = TorusAction::identity(3);
        let mut e1 = vec![0i64; 3];
        e1[0] = 1;
        let ideal = IdealSpec::new(&ctx, vec![e1], vec![parse("x1 + x2", &ctx).unwrap()]).unwrap();
        assert!(is_h_stable(&action, &ideal).unwrap());
    }

    #[test]
    fn full_rank_detection() {
        assert!(TorusAction::identity(3).has_full_rank());
        assert!(!four_torus().has_full_rank());
        let squished = TorusAction::new(1, vec![vec![1, 1]], 2).unwrap();
        assert!(!squished.has_full_rank());
    }

    #[test]
    fn weight_is_additive_on_products() {
        let ctx = laurent3();
        let action = TorusAction::identity(3);
        let f = parse("2*x1*x2^-1", &ctx).unwrap();
        let g = parse("x2*x3^2", &ctx).unwrap();
        let (wf, wg, wfg) = match (
            action.weight_of(&f).unwrap(),
            action.weight_of(&g).unwrap(),
            action.weight_of(&(&f * &g)).unwrap(),
        ) {
            (WeightOf::Homogeneous(a), WeightOf::Homogeneous(b), WeightOf::Homogeneous(c)) => {
                (a, b, c)
            }
            _ => panic!("all homogeneous"),
        };
        let sum: Vec<i64> = wf.iter().zip(&wg).map(|(a, b)| a + b).collect();
        assert_eq!(wfg, sum);
    }

    proptest! {
        /// Hamiltonians of homogeneous elements shift weight by the
        /// element's weight under a log-canonical bracket.
        #[test]
        fn hamiltonians_are_weight_homogeneous(seed in 0u64..3000) {
            let ctx = laurent3();
            let mut rng = SplitMix64::new(seed);
            let pi = crate::rng::random_skew_matrix(&mut rng, 3, 3);
            let spec = BracketSpec::log_canonical(&ctx, pi).unwrap();
            // weights with a nontrivial kernel so multi-term homogeneous
            // elements exist
            let action = TorusAction::new(2, vec![vec![1, 1, 0], vec![0, 1, 1]], 3).unwrap();
            // x^(1,-1,1) and x^(0,0,0) share the weight (0,0) under these
            // weights iff W*(1,-1,1) = 0; here W*(1,-1,1) = (0,0)
            let e1 = vec![rng.range_i64(-2, 2), rng.range_i64(-2, 2), rng.range_i64(-2, 2)];
            let shift = vec![1, -1, 1];
            let e2: Vec<i64> = e1.iter().zip(&shift).map(|(a, b)| a + b).collect();
            let f = &LaurentPoly::monomial(&ctx, e1, rat(2)).unwrap()
                + &LaurentPoly::monomial(&ctx, e2, rat(-3)).unwrap();
            let g = random_poly(&mut rng, &ctx);
            prop_assume!(!g.is_zero());
            let wf = match action.weight_of(&f).unwrap() {
                WeightOf::Homogeneous(w) => w,
                WeightOf::Inhomogeneous(_) => return Err(TestCaseError::fail("f should be homogeneous")),
            };
            for component in action.decompose(&g).unwrap().components {
                let (wg, gc) = component;
                let br = spec.bracket(&f, &gc).unwrap();
                if br.is_zero() {
                    continue;
                }
                let expected: Vec<i64> = wf.iter().zip(&wg).map(|(a, b)| a + b).collect();
                prop_assert_eq!(
                    action.weight_of(&br).unwrap(),
                    WeightOf::Homogeneous(expected)
                );
            }
        }

        #[test]
        fn decomposition_components_sum_to_input(seed in 0u64..3000) {
            let ctx = laurent3();
            let mut rng = SplitMix64::new(seed);
            let f = random_poly(&mut rng, &ctx);
            prop_assume!(!f.is_zero());
            let action = TorusAction::new(2, vec![vec![1, 1, 0], vec![0, 1, 1]], 3).unwrap();
            let d = action.decompose(&f).unwrap();
            let total = d.components.values().fold(LaurentPoly::zero(&ctx), |acc, p| &acc + p);
            prop_assert_eq!(total, f);
            for p in d.components.values() {
                prop_assert!(!p.is_zero());
                prop_assert!(matches!(action.weight_of(p).unwrap(), WeightOf::Homogeneous(_)));
            }
        }
    }
}
