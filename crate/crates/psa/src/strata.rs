//! Stratification of the Poisson spectrum under a full coordinate torus,
//! with per-stratum centers, primitive-ideal templates, Poisson cores of
//! rational points, orbit witnesses, and the inclusion poset of an ideal
//! catalog.
//!
//! Strata are enumerated only for log-canonical brackets with a
//! full-rank weight matrix, where the vanishing-set ideals `J(X)`
//! exhaust the prime Poisson H-ideals: one stratum per subset `X` of the
//! variables in a polynomial ring, a single stratum in a Laurent ring.
//! For table brackets the toolkit verifies user-supplied catalogs
//! instead.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::bracket::{BracketError, BracketKind, BracketSpec};
use crate::ideals::{
    is_poisson_stable, poisson_instability_witness, primality_lite, IdealError, IdealSpec,
    Primality,
};
use crate::lattice::{center_basis, smith_normal_form, CenterBasis, IntMatrix};
use crate::polyring::{
    monomial_string, rational_pow, Evaluation, LaurentPoly, PolyError, RationalPoint, RingKind,
    VarContext,
};
use crate::torus::{is_h_stable, TorusAction, TorusError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrataError {
    NotLogCanonical,
    TorusNotFullRank,
    DimensionMismatch { expected: usize, got: usize },
    InvalidStratum(String),
    WrongParameterCount { expected: usize, got: usize },
    ZeroParameter { index: usize },
    ZeroCoordinate { index: usize },
    Unsupported(String),
    CertificateFailed(String),
    Ideal(String),
    Torus(String),
    Bracket(String),
    Poly(String),
}

impl fmt::Display for StrataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrataError::NotLogCanonical => {
                write!(f, "stratification requires a log-canonical bracket")
            }
            StrataError::TorusNotFullRank => write!(
                f,
                "stratification requires the full coordinate torus (weight matrix of rank n)"
            ),
            StrataError::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
            StrataError::InvalidStratum(s) => write!(f, "invalid stratum: {s}"),
            StrataError::WrongParameterCount { expected, got } => {
                write!(f, "stratum has {expected} center parameters, got {got}")
            }
            StrataError::ZeroParameter { index } => {
                write!(f, "parameter {} must be nonzero", index + 1)
            }
            StrataError::ZeroCoordinate { index } => write!(
                f,
                "coordinate {} is zero; Laurent points must avoid the coordinate hyperplanes",
                index + 1
            ),
            StrataError::Unsupported(s) => write!(f, "unsupported: {s}"),
            StrataError::CertificateFailed(s) => write!(f, "runtime certificate failed: {s}"),
            StrataError::Ideal(e)
            | StrataError::Torus(e)
            | StrataError::Bracket(e)
            | StrataError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for StrataError {}

impl From<IdealError> for StrataError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::Unsupported(s) => StrataError::Unsupported(s),
            other => StrataError::Ideal(other.to_string()),
        }
    }
}

impl From<TorusError> for StrataError {
    fn from(e: TorusError) -> Self {
        StrataError::Torus(e.to_string())
    }
}

impl From<BracketError> for StrataError {
    fn from(e: BracketError) -> Self {
        StrataError::Bracket(e.to_string())
    }
}

impl From<PolyError> for StrataError {
    fn from(e: PolyError) -> Self {
        StrataError::Poly(e.to_string())
    }
}

/// The ring, its bracket, and the torus acting on it.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    ctx: Arc<VarContext>,
    bracket: BracketSpec,
    torus: TorusAction,
}

impl ProblemSpec {
    pub fn new(
        ctx: &Arc<VarContext>,
        bracket: BracketSpec,
        torus: TorusAction,
    ) -> Result<Self, StrataError> {
        if bracket.context().as_ref() != ctx.as_ref() {
            return Err(StrataError::Bracket(
                BracketError::ContextMismatch.to_string(),
            ));
        }
        if torus.arity() != ctx.arity() {
            return Err(StrataError::DimensionMismatch {
                expected: ctx.arity(),
                got: torus.arity(),
            });
        }
        Ok(ProblemSpec {
            ctx: Arc::clone(ctx),
            bracket,
            torus,
        })
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn bracket(&self) -> &BracketSpec {
        &self.bracket
    }

    pub fn torus(&self) -> &TorusAction {
        &self.torus
    }

    /// Rational pi cleared to a common-denominator integer matrix; kernel
    /// computations are unaffected by the scaling.
    fn integer_pi(&self) -> Result<IntMatrix, StrataError> {
        let pi = self.bracket.pi().ok_or(StrataError::NotLogCanonical)?;
        let n = pi.dim();
        Ok(IntMatrix::from_rational(n, n, pi.entries()))
    }

    fn require_stratifiable(&self) -> Result<(), StrataError> {
        if !matches!(self.bracket.kind(), BracketKind::LogCanonical(_)) {
            return Err(StrataError::NotLogCanonical);
        }
        if !self.torus.has_full_rank() {
            return Err(StrataError::TorusNotFullRank);
        }
        Ok(())
    }
}

/// One stratum of the Poisson spectrum: the vanishing set `X`, its ideal
/// `J(X)`, the surviving variables, and the center lattice of the
/// localization.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub vanishing: BTreeSet<usize>,
    pub ideal: IdealSpec,
    pub alive: Vec<usize>,
    pub center: CenterBasis,
}

impl Stratum {
    /// Names of the vanishing variables.
    pub fn vanishing_names(&self, ctx: &VarContext) -> Vec<String> {
        self.vanishing
            .iter()
            .map(|&i| ctx.name(i).to_string())
            .collect()
    }
}

/// Build the stratum attached to the vanishing set `X`.
pub fn stratum_for(problem: &ProblemSpec, x: &BTreeSet<usize>) -> Result<Stratum, StrataError> {
    problem.require_stratifiable()?;
    let ctx = problem.context();
    let n = ctx.arity();
    for &i in x {
        if i >= n {
            return Err(StrataError::InvalidStratum(format!(
                "variable index {i} out of range"
            )));
        }
    }
    if ctx.kind() == RingKind::Laurent && !x.is_empty() {
        return Err(StrataError::InvalidStratum(
            "a Laurent ring has only the empty stratum".to_string(),
        ));
    }
    let alive: Vec<usize> = (0..n).filter(|i| !x.contains(i)).collect();
    let ideal = IdealSpec::coordinate(ctx, x)?;
    let center = center_basis(&problem.integer_pi()?, &alive);
    Ok(Stratum {
        vanishing: x.clone(),
        ideal,
        alive,
        center,
    })
}

/// All strata: `2^n` vanishing sets in binary-counting order (bit `i`
/// set means `x_i` vanishes) for a polynomial ring, the single empty
/// stratum for a Laurent ring.
pub fn enumerate_strata(problem: &ProblemSpec) -> Result<Vec<Stratum>, StrataError> {
    problem.require_stratifiable()?;
    let n = problem.context().arity();
    match problem.context().kind() {
        RingKind::Laurent => Ok(vec![stratum_for(problem, &BTreeSet::new())?]),
        RingKind::Polynomial => {
            let mut strata = Vec::with_capacity(1 << n);
            for mask in 0u64..(1u64 << n) {
                let x: BTreeSet<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                strata.push(stratum_for(problem, &x)?);
            }
            Ok(strata)
        }
    }
}

/// A stratum's primitive ideals, parameterized by one nonzero scalar per
/// center generator.
#[derive(Clone, Debug)]
pub struct PrimitiveTemplate {
    ctx: Arc<VarContext>,
    pub stratum: Stratum,
    /// Display symbols `a1, a2, ...`, one per center generator.
    pub parameters: Vec<String>,
}

/// Split an exponent vector into nonnegative positive/negative parts:
/// `g = plus - minus`.
fn split_exponents(g: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let plus: Vec<i64> = g.iter().map(|&e| e.max(0)).collect();
    let minus: Vec<i64> = g.iter().map(|&e| (-e).max(0)).collect();
    (plus, minus)
}

impl PrimitiveTemplate {
    pub fn parameter_count(&self) -> usize {
        self.stratum.center.rank()
    }

    /// Generator strings with symbolic parameters, monomial part first.
    pub fn generator_strings(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .stratum
            .vanishing
            .iter()
            .map(|&i| self.ctx.name(i).to_string())
            .collect();
        for (j, g) in self.stratum.center.generators.iter().enumerate() {
            let (plus, minus) = split_exponents(g);
            let head = monomial_string(&self.ctx, &plus);
            let tail = if minus.iter().all(|&e| e == 0) {
                self.parameters[j].clone()
            } else {
                format!(
                    "{}*{}",
                    self.parameters[j],
                    monomial_string(&self.ctx, &minus)
                )
            };
            out.push(format!("{head} - {tail}"));
        }
        if out.is_empty() {
            out.push("0".to_string());
        }
        out
    }

    pub fn display_string(&self) -> String {
        format!("<{}>", self.generator_strings().join(", "))
    }

    /// Substitute nonzero scalars for the parameters. Each center
    /// generator `z_j - alpha_j` is cleared by the minimal monomial that
    /// makes the exponents nonnegative; positive and negative supports
    /// are disjoint, so the cleared numerator carries no monomial factor
    /// and generates the contraction of the localized ideal. With two or
    /// more center generators the contraction would additionally need
    /// saturation by the alive variables, so the result is flagged and
    /// membership is refused.
    pub fn instantiate(&self, alphas: &[BigRational]) -> Result<IdealSpec, StrataError> {
        let rank = self.parameter_count();
        if alphas.len() != rank {
            return Err(StrataError::WrongParameterCount {
                expected: rank,
                got: alphas.len(),
            });
        }
        if let Some(index) = alphas.iter().position(|a| a.is_zero()) {
            return Err(StrataError::ZeroParameter { index });
        }
        let mut poly_gens = Vec::new();
        for (g, alpha) in self.stratum.center.generators.iter().zip(alphas) {
            let (plus, minus) = split_exponents(g);
            let head = LaurentPoly::monomial(&self.ctx, plus, BigRational::one())?;
            let tail = LaurentPoly::monomial(&self.ctx, minus, -alpha.clone())?;
            let cleared = (&head + &tail).strip_monomial_content();
            poly_gens.push(cleared);
        }
        let monomial_gens: Vec<Vec<i64>> = self
            .stratum
            .vanishing
            .iter()
            .map(|&i| {
                let mut e = vec![0i64; self.ctx.arity()];
                e[i] = 1;
                e
            })
            .collect();
        let ideal = IdealSpec::new(&self.ctx, monomial_gens, poly_gens)?;
        Ok(if rank >= 2 {
            ideal.with_pre_saturation_flag()
        } else {
            ideal
        })
    }
}

/// The primitive-ideal template of the stratum `X`.
pub fn primitive_template(
    problem: &ProblemSpec,
    x: &BTreeSet<usize>,
) -> Result<PrimitiveTemplate, StrataError> {
    let stratum = stratum_for(problem, x)?;
    let parameters = (1..=stratum.center.rank())
        .map(|j| format!("a{j}"))
        .collect();
    Ok(PrimitiveTemplate {
        ctx: Arc::clone(problem.context()),
        stratum,
        parameters,
    })
}

/// Poisson core of the maximal ideal of a rational point.
///
/// The stratum is the exact vanishing set `X_p = {i : p_i = 0}`:
/// the core is a Poisson ideal inside `m_p`, so it contains no variable
/// that is nonzero at `p`, and a primitive built on a strictly smaller
/// vanishing set either misses the containment in `m_p` or forces a
/// center parameter to the excluded value zero. The center generators
/// are evaluated at `p` and the template instantiated; the result is
/// re-certified at runtime (Poisson stability plus vanishing at `p`).
pub fn pcore_point(problem: &ProblemSpec, p: &RationalPoint) -> Result<IdealSpec, StrataError> {
    let ctx = problem.context();
    if p.coords().len() != ctx.arity() {
        return Err(StrataError::DimensionMismatch {
            expected: ctx.arity(),
            got: p.coords().len(),
        });
    }
    if ctx.kind() == RingKind::Laurent {
        if let Some(index) = p.coords().iter().position(|c| c.is_zero()) {
            return Err(StrataError::ZeroCoordinate { index });
        }
    }
    let x: BTreeSet<usize> = p
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_zero())
        .map(|(i, _)| i)
        .collect();
    let template = primitive_template(problem, &x)?;
    if template.parameter_count() >= 2 {
        return Err(StrataError::Unsupported(format!(
            "Poisson core with {} center parameters needs saturation",
            template.parameter_count()
        )));
    }
    // alpha_j = z_j(p); the alive coordinates are nonzero, so the
    // negative exponents pose no problem
    let alphas: Vec<BigRational> = template
        .stratum
        .center
        .generators
        .iter()
        .map(|g| {
            let mut acc = BigRational::one();
            for (coord, &e) in p.coords().iter().zip(g) {
                if e != 0 {
                    acc *= rational_pow(coord, e);
                }
            }
            acc
        })
        .collect();
    let ideal = template.instantiate(&alphas)?;

    // runtime certificate: Poisson stability and vanishing at p
    if !is_poisson_stable(problem.bracket(), &ideal)? {
        return Err(StrataError::CertificateFailed(format!(
            "{} is not Poisson stable",
            ideal.canonical_string()
        )));
    }
    for g in ideal.generator_polys() {
        match g.evaluate(p) {
            Ok(Evaluation::Value(v)) if v.is_zero() => {}
            other => {
                return Err(StrataError::CertificateFailed(format!(
                    "generator {g} does not vanish at the point ({other:?})"
                )))
            }
        }
    }
    Ok(ideal)
}

/// Act on a polynomial by a point of the coordinate torus:
/// `x^e` picks up the factor `h^e`.
pub fn apply_torus_point(h: &[BigRational], f: &LaurentPoly) -> LaurentPoly {
    let ctx = f.context();
    assert_eq!(h.len(), ctx.arity(), "dimension mismatch");
    let mut acc = LaurentPoly::zero(ctx);
    for (exps, coeff) in f.terms() {
        let mut scale = coeff.clone();
        for (hi, &e) in h.iter().zip(exps) {
            if e != 0 {
                scale *= rational_pow(hi, e);
            }
        }
        let term = LaurentPoly::monomial(ctx, exps.clone(), scale).expect("same exponents");
        acc = &acc + &term;
    }
    acc
}

/// A coordinate-torus element `h` with `h^(g_j) = alpha_j / beta_j` for
/// every center generator `g_j`, so that `h` maps the primitive ideal at
/// `alpha` onto the one at `beta`. Solvable over the rationals because
/// the center lattice is saturated: its Smith form is `[I | 0]`, and the
/// unimodular transforms assign the ratios on an extended basis.
pub fn orbit_witness(
    problem: &ProblemSpec,
    x: &BTreeSet<usize>,
    alpha: &[BigRational],
    beta: &[BigRational],
) -> Result<Vec<BigRational>, StrataError> {
    let template = primitive_template(problem, x)?;
    let k = template.parameter_count();
    let n = problem.context().arity();
    if alpha.len() != k {
        return Err(StrataError::WrongParameterCount {
            expected: k,
            got: alpha.len(),
        });
    }
    if beta.len() != k {
        return Err(StrataError::WrongParameterCount {
            expected: k,
            got: beta.len(),
        });
    }
    if let Some(index) = alpha.iter().position(|a| a.is_zero()) {
        return Err(StrataError::ZeroParameter { index });
    }
    if let Some(index) = beta.iter().position(|b| b.is_zero()) {
        return Err(StrataError::ZeroParameter { index });
    }
    let one = BigRational::one();
    if k == 0 {
        return Ok(vec![one; n]);
    }

    let ratios: Vec<BigRational> = alpha.iter().zip(beta).map(|(a, b)| a / b).collect();
    let gens = &template.stratum.center.generators;
    let flat: Vec<i64> = gens.iter().flatten().copied().collect();
    let b_matrix = IntMatrix::from_i64(k, n, &flat);
    let snf = smith_normal_form(&b_matrix);
    for t in 0..k {
        if snf.s.at(t, t) != &num_bigint::BigInt::one() {
            return Err(StrataError::CertificateFailed(
                "center lattice is not saturated".to_string(),
            ));
        }
    }
    // psi_t = prod_j ratios_j ^ U[t][j]; h_i = prod_t psi_t ^ V[i][t]
    let to_i64 = |v: &num_bigint::BigInt| -> i64 {
        i64::try_from(v).expect("unimodular transform entry out of machine range")
    };
    let psis: Vec<BigRational> = (0..k)
        .map(|t| {
            let mut acc = BigRational::one();
            for (j, r) in ratios.iter().enumerate() {
                acc *= rational_pow(r, to_i64(snf.u.at(t, j)));
            }
            acc
        })
        .collect();
    let h: Vec<BigRational> = (0..n)
        .map(|i| {
            let mut acc = BigRational::one();
            for (t, psi) in psis.iter().enumerate() {
                acc *= rational_pow(psi, to_i64(snf.v.at(i, t)));
            }
            acc
        })
        .collect();

    debug_assert!(gens.iter().zip(&ratios).all(|(g, r)| {
        let mut acc = BigRational::one();
        for (hi, &e) in h.iter().zip(g) {
            acc *= rational_pow(hi, e);
        }
        &acc == r
    }));
    Ok(h)
}

/// Per-ideal verification report: `None` marks checks the membership
/// oracle cannot support for that ideal.
#[derive(Clone, Debug)]
pub struct CatalogEntryReport {
    pub ideal: String,
    pub h_stable: Option<bool>,
    pub poisson_stable: Option<bool>,
    pub primality: Primality,
    pub failures: Vec<String>,
}

impl CatalogEntryReport {
    pub fn passed(&self) -> bool {
        self.h_stable == Some(true) && self.poisson_stable == Some(true)
    }

    /// A check came back negative. Unsupported checks are reported but
    /// do not count as failures.
    pub fn failed(&self) -> bool {
        self.h_stable == Some(false) || self.poisson_stable == Some(false)
    }

    pub fn unsupported(&self) -> bool {
        self.h_stable.is_none() || self.poisson_stable.is_none()
    }
}

/// Run `is_h_stable`, `is_poisson_stable`, and `primality_lite` on every
/// catalog entry.
pub fn verify_catalog(
    problem: &ProblemSpec,
    catalog: &[IdealSpec],
) -> Result<Vec<CatalogEntryReport>, StrataError> {
    let mut reports = Vec::with_capacity(catalog.len());
    for ideal in catalog {
        let mut failures = Vec::new();
        let h_stable = match is_h_stable(problem.torus(), ideal) {
            Ok(ok) => {
                if !ok {
                    failures.push(
                        "an inhomogeneous generator has a weight component outside the ideal"
                            .to_string(),
                    );
                }
                Some(ok)
            }
            Err(TorusError::Unsupported(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let poisson_stable = match is_poisson_stable(problem.bracket(), ideal) {
            Ok(ok) => {
                if !ok {
                    if let Some((i, g, residual)) =
                        poisson_instability_witness(problem.bracket(), ideal)?
                    {
                        failures.push(format!(
                            "{{{}, {}}} = {} escapes the ideal",
                            problem.context().name(i),
                            g,
                            residual
                        ));
                    }
                }
                Some(ok)
            }
            Err(IdealError::Unsupported(_)) => None,
            Err(e) => return Err(e.into()),
        };
        reports.push(CatalogEntryReport {
            ideal: ideal.canonical_string(),
            h_stable,
            poisson_stable,
            primality: primality_lite(ideal),
            failures,
        });
    }
    Ok(reports)
}

/// Inclusion order of a catalog, reduced to covering relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetGraph {
    pub nodes: Vec<String>,
    /// `(i, j)` with node `i` strictly contained in node `j`, covering.
    pub edges: Vec<(usize, usize)>,
    /// Unordered pairs the membership oracle could not compare.
    pub unknown_pairs: Vec<(usize, usize)>,
}

impl PosetGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n");
        for name in &self.nodes {
            out.push_str(&format!("  \"{name}\";\n"));
        }
        for &(i, j) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.nodes[i], self.nodes[j]
            ));
        }
        for &(i, j) in &self.unknown_pairs {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [style=dashed, dir=none, label=\"unknown\"];\n",
                self.nodes[i], self.nodes[j]
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Compute the covering relations of the catalog under inclusion
/// (generator-wise membership), with a transitive reduction. Pairs the
/// oracle cannot decide are reported separately.
pub fn poset_of_catalog(catalog: &[IdealSpec]) -> Result<PosetGraph, StrataError> {
    let n = catalog.len();
    let mut included = vec![vec![None::<bool>; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut verdict = Some(true);
            for g in catalog[i].generator_polys() {
                match catalog[j].membership(&g) {
                    Ok(true) => {}
                    Ok(false) => {
                        verdict = Some(false);
                        break;
                    }
                    Err(IdealError::Unsupported(_)) => {
                        verdict = None;
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            included[i][j] = verdict;
        }
    }
    let strictly = |i: usize, j: usize| -> bool {
        included[i][j] == Some(true) && included[j][i] == Some(false)
    };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !strictly(i, j) {
                continue;
            }
            let covered = (0..n).any(|k| strictly(i, k) && strictly(k, j));
            if !covered {
                edges.push((i, j));
            }
        }
    }
    let mut unknown_pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if included[i][j].is_none() || included[j][i].is_none() {
                unknown_pairs.push((i, j));
            }
        }
    }
    Ok(PosetGraph {
        nodes: catalog.iter().map(|c| c.canonical_string()).collect(),
        edges,
        unknown_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn all_ones_pi(n: usize) -> Vec<Vec<BigRational>> {
        let mut pi = vec![vec![rat(0); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                pi[i][j] = rat(1);
                pi[j][i] = rat(-1);
            }
        }
        pi
    }

    fn poisson_affine_3() -> ProblemSpec {
        let ctx = VarContext::new(
            vec!["x1".into(), "x2".into(), "x3".into()],
            RingKind::Polynomial,
        )
        .unwrap();
        let bracket = BracketSpec::log_canonical(&ctx, all_ones_pi(3)).unwrap();
        ProblemSpec::new(&ctx, bracket, TorusAction::identity(3)).unwrap()
    }

    fn poisson_torus(n: usize) -> ProblemSpec {
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        let ctx = VarContext::new(names, RingKind::Laurent).unwrap();
        let bracket = BracketSpec::log_canonical(&ctx, all_ones_pi(n)).unwrap();
        ProblemSpec::new(&ctx, bracket, TorusAction::identity(n)).unwrap()
    }

    #[test]
    fn polynomial_ring_has_two_to_the_n_strata() {
        let strata = enumerate_strata(&poisson_affine_3()).unwrap();
        assert_eq!(strata.len(), 8);
        // binary counting order
        assert!(strata[0].vanishing.is_empty());
        assert_eq!(strata[1].vanishing, [0].into_iter().collect());
        assert_eq!(strata[7].vanishing, [0, 1, 2].into_iter().collect());
    }

    #[test]
    fn laurent_ring_has_one_stratum() {
        for n in 2..=5 {
            let strata = enumerate_strata(&poisson_torus(n)).unwrap();
            assert_eq!(strata.len(), 1);
            assert!(strata[0].vanishing.is_empty());
        }
    }

    #[test]
    fn center_parity_for_alternating_kernel() {
        for n in 2..=6 {
            let strata = enumerate_strata(&poisson_torus(n)).unwrap();
            let center = &strata[0].center;
            if n % 2 == 0 {
                assert_eq!(center.rank(), 0, "n = {n}");
            } else {
                assert_eq!(center.rank(), 1, "n = {n}");
                let expected: Vec<i64> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
                assert_eq!(center.generators[0], expected, "n = {n}");
            }
        }
    }

    #[test]
    fn strata_ideals_are_h_and_poisson_stable() {
        let problem = poisson_affine_3();
        for stratum in enumerate_strata(&problem).unwrap() {
            assert!(is_h_stable(problem.torus(), &stratum.ideal).unwrap());
            assert!(is_poisson_stable(problem.bracket(), &stratum.ideal).unwrap());
        }
    }

    #[test]
    fn template_for_open_stratum() {
        let problem = poisson_affine_3();
        let template = primitive_template(&problem, &BTreeSet::new()).unwrap();
        assert_eq!(template.parameter_count(), 1);
        assert_eq!(template.display_string(), "<x1*x3 - a1*x2>");
        let ideal = template.instantiate(&[rat(2)]).unwrap();
        assert_eq!(ideal.canonical_string(), "<x1*x3 - 2*x2>");
    }

    #[test]
    fn template_for_plane_stratum() {
        let problem = poisson_affine_3();
        let x: BTreeSet<usize> = [1, 2].into_iter().collect();
        let template = primitive_template(&problem, &x).unwrap();
        assert_eq!(template.display_string(), "<x2, x3, x1 - a1>");
        let ideal = template.instantiate(&[rat(5)]).unwrap();
        assert_eq!(ideal.canonical_string(), "<x2, x3, x1 - 5>");
    }

    #[test]
    fn template_without_parameters() {
        let problem = poisson_affine_3();
        let x: BTreeSet<usize> = [0].into_iter().collect();
        let template = primitive_template(&problem, &x).unwrap();
        assert_eq!(template.parameter_count(), 0);
        assert_eq!(template.display_string(), "<x1>");
        assert_eq!(
            template.instantiate(&[]).unwrap().canonical_string(),
            "<x1>"
        );
    }

    #[test]
    fn instantiate_rejects_zero_and_miscounted_parameters() {
        let problem = poisson_affine_3();
        let template = primitive_template(&problem, &BTreeSet::new()).unwrap();
        assert!(matches!(
            template.instantiate(&[rat(0)]),
            Err(StrataError::ZeroParameter { index: 0 })
        ));
        assert!(matches!(
            template.instantiate(&[]),
            Err(StrataError::WrongParameterCount {
                expected: 1,
                got: 0
            })
        ));
    }

    #[test]
    fn pre_saturation_flag_for_rank_two_centers() {
        // zero bracket: every monomial is central
        let ctx = VarContext::new(vec!["x1".into(), "x2".into()], RingKind::Polynomial).unwrap();
        let bracket =
            BracketSpec::log_canonical(&ctx, vec![vec![rat(0), rat(0)], vec![rat(0), rat(0)]])
                .unwrap();
        let problem = ProblemSpec::new(&ctx, bracket, TorusAction::identity(2)).unwrap();
        let template = primitive_template(&problem, &BTreeSet::new()).unwrap();
        assert_eq!(template.parameter_count(), 2);
        let ideal = template.instantiate(&[rat(1), rat(2)]).unwrap();
        assert!(ideal.pre_saturation());
        assert!(matches!(
            ideal.membership(&parse("x1 - 1", &ctx).unwrap()),
            Err(IdealError::Unsupported(_))
        ));
    }

    #[test]
    fn pcore_at_the_origin_and_on_coordinate_planes() {
        let problem = poisson_affine_3();
        let p = |a: i64, b: i64, c: i64| RationalPoint::new(vec![rat(a), rat(b), rat(c)]);
        assert_eq!(
            pcore_point(&problem, &p(0, 0, 0))
                .unwrap()
                .canonical_string(),
            "<x1, x2, x3>"
        );
        assert_eq!(
            pcore_point(&problem, &p(2, 0, 0))
                .unwrap()
                .canonical_string(),
            "<x2, x3, x1 - 2>"
        );
        assert_eq!(
            pcore_point(&problem, &p(1, 2, 4))
                .unwrap()
                .canonical_string(),
            "<x1*x3 - 2*x2>"
        );
        assert_eq!(
            pcore_point(&problem, &p(3, 0, 5))
                .unwrap()
                .canonical_string(),
            "<x2>"
        );
    }

    #[test]
    fn pcore_rejects_zero_coordinates_in_laurent_rings() {
        let problem = poisson_torus(3);
        let p = RationalPoint::new(vec![rat(1), rat(0), rat(2)]);
        assert!(matches!(
            pcore_point(&problem, &p),
            Err(StrataError::ZeroCoordinate { index: 1 })
        ));
    }

    #[test]
    fn orbit_witness_solves_the_character_equation() {
        let problem = poisson_affine_3();
        let x = BTreeSet::new();
        let h = orbit_witness(&problem, &x, &[rat(2)], &[rat(6)]).unwrap();
        // h^(1,-1,1) must equal 2/6 = 1/3
        let value = &h[0] * &h[2] / &h[1];
        assert_eq!(value, BigRational::new(BigInt::from(1), BigInt::from(3)));
    }

    #[test]
    fn orbit_witness_identity_cases() {
        let problem = poisson_affine_3();
        let x = BTreeSet::new();
        let h = orbit_witness(&problem, &x, &[rat(5)], &[rat(5)]).unwrap();
        assert!(h.iter().all(|v| v == &BigRational::one()));
        // empty center: single primitive per stratum
        let x1: BTreeSet<usize> = [0].into_iter().collect();
        let h = orbit_witness(&problem, &x1, &[], &[]).unwrap();
        assert!(h.iter().all(|v| v == &BigRational::one()));
    }

    #[test]
    fn orbit_witness_moves_instantiations() {
        let problem = poisson_affine_3();
        let x = BTreeSet::new();
        let template = primitive_template(&problem, &x).unwrap();
        let alpha = [rat(2)];
        let beta = [BigRational::new(BigInt::from(7), BigInt::from(3))];
        let h = orbit_witness(&problem, &x, &alpha, &beta).unwrap();
        let from = template.instantiate(&alpha).unwrap();
        let to = template.instantiate(&beta).unwrap();
        for (g_from, g_to) in from.poly_gens().iter().zip(to.poly_gens()) {
            let moved = apply_torus_point(&h, g_from);
            assert_eq!(moved.monic(), g_to.monic());
        }
    }

    #[test]
    fn orbit_witness_on_a_coordinate_stratum() {
        let problem = poisson_affine_3();
        let x: BTreeSet<usize> = [1, 2].into_iter().collect();
        let template = primitive_template(&problem, &x).unwrap();
        let alpha = [rat(2)];
        let beta = [rat(3)];
        let h = orbit_witness(&problem, &x, &alpha, &beta).unwrap();
        let from = template.instantiate(&alpha).unwrap();
        let to = template.instantiate(&beta).unwrap();
        for (g_from, g_to) in from.generator_polys().iter().zip(to.generator_polys()) {
            assert_eq!(apply_torus_point(&h, g_from).monic(), g_to.monic());
        }
    }

    #[test]
    fn orbit_witness_handles_higher_center_ranks() {
        use crate::rng::{nonzero_rational, random_skew_matrix, SplitMix64};
        let mut rng = SplitMix64::new(42);
        for _ in 0..200 {
            let n = rng.range_usize(2, 4);
            let names = (1..=n).map(|i| format!("x{i}")).collect();
            let ctx = VarContext::new(names, RingKind::Laurent).unwrap();
            let bracket =
                BracketSpec::log_canonical(&ctx, random_skew_matrix(&mut rng, n, 3)).unwrap();
            let problem = ProblemSpec::new(&ctx, bracket, TorusAction::identity(n)).unwrap();
            let template = primitive_template(&problem, &BTreeSet::new()).unwrap();
            let k = template.parameter_count();
            let alpha: Vec<BigRational> = (0..k).map(|_| nonzero_rational(&mut rng, 5)).collect();
            let beta: Vec<BigRational> = (0..k).map(|_| nonzero_rational(&mut rng, 5)).collect();
            let h = orbit_witness(&problem, &BTreeSet::new(), &alpha, &beta).unwrap();
            let from = template.instantiate(&alpha).unwrap();
            let to = template.instantiate(&beta).unwrap();
            for (g_from, g_to) in from.poly_gens().iter().zip(to.poly_gens()) {
                assert_eq!(
                    apply_torus_point(&h, g_from).monic(),
                    g_to.monic(),
                    "rank {k} witness failed"
                );
            }
        }
    }

    #[test]
    fn verify_catalog_reports_unsupported_entries_distinctly() {
        let problem = poisson_affine_3();
        let ctx = problem.context().clone();
        let two_gens = IdealSpec::new(
            &ctx,
            vec![],
            vec![
                parse("x1*x3 - x2", &ctx).unwrap(),
                parse("x1 - x3", &ctx).unwrap(),
            ],
        )
        .unwrap();
        let reports = verify_catalog(&problem, &[two_gens]).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].unsupported());
        assert!(!reports[0].failed());
    }

    #[test]
    fn verify_catalog_flags_unstable_entries() {
        let ctx = VarContext::new(vec!["x1".into(), "x2".into()], RingKind::Polynomial).unwrap();
        let bracket = BracketSpec::log_canonical(&ctx, all_ones_pi(2)).unwrap();
        let problem = ProblemSpec::new(&ctx, bracket, TorusAction::identity(2)).unwrap();
        let bad = IdealSpec::new(&ctx, vec![], vec![parse("x1 - 1", &ctx).unwrap()]).unwrap();
        let reports = verify_catalog(&problem, &[bad]).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].h_stable, Some(false));
        assert_eq!(reports[0].poisson_stable, Some(false));
        assert!(!reports[0].passed());
        assert!(!reports[0].failures.is_empty());
    }

    #[test]
    fn empty_catalog_gives_empty_report() {
        let problem = poisson_affine_3();
        assert!(verify_catalog(&problem, &[]).unwrap().is_empty());
    }

    #[test]
    fn poset_of_two_chain() {
        let ctx = VarContext::new(vec!["x1".into()], RingKind::Polynomial).unwrap();
        let zero = IdealSpec::zero(&ctx);
        let x1 = IdealSpec::coordinate(&ctx, &[0].into_iter().collect()).unwrap();
        let graph = poset_of_catalog(&[zero, x1]).unwrap();
        assert_eq!(graph.nodes, vec!["<0>", "<x1>"]);
        assert_eq!(graph.edges, vec![(0, 1)]);
        assert!(graph.unknown_pairs.is_empty());
        let dot = graph.to_dot();
        assert!(dot.contains("\"<0>\" -> \"<x1>\""));
    }

    #[test]
    fn poset_of_boolean_lattice_has_twelve_edges() {
        let problem = poisson_affine_3();
        let catalog: Vec<IdealSpec> = enumerate_strata(&problem)
            .unwrap()
            .into_iter()
            .map(|s| s.ideal)
            .collect();
        let graph = poset_of_catalog(&catalog).unwrap();
        assert_eq!(graph.nodes.len(), 8);
        assert_eq!(graph.edges.len(), 12);
        assert!(graph.unknown_pairs.is_empty());
    }

    #[test]
    fn table_bracket_cannot_stratify() {
        let ctx = VarContext::new(vec!["a".into(), "b".into()], RingKind::Polynomial).unwrap();
        let table = BracketSpec::table(&ctx, vec![(0, 1, parse("a*b", &ctx).unwrap())]).unwrap();
        let problem = ProblemSpec::new(&ctx, table, TorusAction::identity(2)).unwrap();
        assert!(matches!(
            enumerate_strata(&problem),
            Err(StrataError::NotLogCanonical)
        ));
    }

    #[test]
    fn degenerate_torus_cannot_stratify() {
        let ctx = VarContext::new(vec!["x1".into(), "x2".into()], RingKind::Polynomial).unwrap();
        let bracket = BracketSpec::log_canonical(&ctx, all_ones_pi(2)).unwrap();
        let torus = TorusAction::new(1, vec![vec![1, 1]], 2).unwrap();
        let problem = ProblemSpec::new(&ctx, bracket, torus).unwrap();
        assert!(matches!(
            enumerate_strata(&problem),
            Err(StrataError::TorusNotFullRank)
        ));
    }

    #[test]
    fn zero_variables_single_stratum() {
        let ctx = VarContext::new(vec![], RingKind::Polynomial).unwrap();
        let bracket = BracketSpec::log_canonical(&ctx, vec![]).unwrap();
        let problem = ProblemSpec::new(&ctx, bracket, TorusAction::identity(0)).unwrap();
        let strata = enumerate_strata(&problem).unwrap();
        assert_eq!(strata.len(), 1);
        assert!(strata[0].ideal.is_zero_ideal());
        assert_eq!(strata[0].center.rank(), 0);
    }

    #[test]
    fn center_generators_commute_with_alive_variables() {
        let problem = poisson_affine_3();
        for stratum in enumerate_strata(&problem).unwrap() {
            for g in &stratum.center.generators {
                // the center monomial lives in the Laurent ring of the
                // alive variables; bracket against each alive variable in
                // the ambient Laurent ring
                let lctx =
                    VarContext::new(problem.context().names().to_vec(), RingKind::Laurent).unwrap();
                let pi = problem.bracket().pi().unwrap();
                let lspec = BracketSpec::log_canonical(
                    &lctx,
                    (0..3)
                        .map(|i| (0..3).map(|j| pi.at(i, j).clone()).collect())
                        .collect(),
                )
                .unwrap();
                let z = LaurentPoly::monomial(&lctx, g.clone(), BigRational::one()).unwrap();
                for &i in &stratum.alive {
                    let xi = LaurentPoly::variable(&lctx, i).unwrap();
                    assert!(lspec.bracket(&z, &xi).unwrap().is_zero());
                }
            }
        }
    }
}
