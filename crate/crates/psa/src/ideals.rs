//! Ideals with monomial generators plus at most one effective polynomial
//! generator: membership, Poisson stability, the bounded-depth
//! derivation-core oracle, and a limited primality certifier.
//!
//! Membership reduces modulo the monomial part (dropping every term some
//! monomial generator divides), then asks for exact division by the
//! single surviving polynomial generator. Ideals where two or more
//! polynomial generators survive are reported as unsupported rather than
//! answered wrongly.

use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::bracket::{BracketError, BracketSpec};
use crate::polyring::{grlex, monomial_string, LaurentPoly, PolyError, RingKind, VarContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealError {
    ZeroGenerator,
    MonomialGeneratorInLaurentRing,
    NotAMonomial(String),
    ContextMismatch,
    Unsupported(String),
    Poly(PolyError),
    Bracket(String),
}

impl fmt::Display for IdealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealError::ZeroGenerator => write!(f, "the zero polynomial is not a valid generator"),
            IdealError::MonomialGeneratorInLaurentRing => {
                write!(f, "monomial generators are units in a Laurent ring")
            }
            IdealError::NotAMonomial(s) => write!(f, "'{s}' is not a monomial"),
            IdealError::ContextMismatch => write!(f, "operands live in different rings"),
            IdealError::Unsupported(why) => write!(f, "unsupported: {why}"),
            IdealError::Poly(e) => write!(f, "{e}"),
            IdealError::Bracket(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IdealError {}

impl From<PolyError> for IdealError {
    fn from(e: PolyError) -> Self {
        IdealError::Poly(e)
    }
}

impl From<BracketError> for IdealError {
    fn from(e: BracketError) -> Self {
        IdealError::Bracket(e.to_string())
    }
}

/// Ideal given by monomial generators plus polynomial generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpec {
    ctx: Arc<VarContext>,
    /// Exponent vectors, all entries nonnegative, sorted descending in
    /// graded-lex order (single variables come out in variable order).
    monomial_gens: Vec<Vec<i64>>,
    poly_gens: Vec<LaurentPoly>,
    /// Set on primitive-ideal instantiations whose contraction would need
    /// saturation; membership refuses instead of guessing.
    pre_saturation: bool,
    /// Caller-supplied primality assertion.
    assert_prime: bool,
}

impl IdealSpec {
    pub fn new(
        ctx: &Arc<VarContext>,
        monomial_gens: Vec<Vec<i64>>,
        poly_gens: Vec<LaurentPoly>,
    ) -> Result<Self, IdealError> {
        if !monomial_gens.is_empty() && ctx.kind() == RingKind::Laurent {
            return Err(IdealError::MonomialGeneratorInLaurentRing);
        }
        let mut mono: Vec<Vec<i64>> = Vec::new();
        for m in monomial_gens {
            if m.len() != ctx.arity() {
                return Err(IdealError::Poly(PolyError::ArityMismatch {
                    expected: ctx.arity(),
                    got: m.len(),
                }));
            }
            if let Some((i, &e)) = m.iter().enumerate().find(|(_, &e)| e < 0) {
                return Err(IdealError::Poly(PolyError::NegativeExponent {
                    var: ctx.name(i).to_string(),
                    exponent: e,
                }));
            }
            if !mono.contains(&m) {
                mono.push(m);
            }
        }
        mono.sort_by(|a, b| grlex(b, a));
        for g in &poly_gens {
            if g.is_zero() {
                return Err(IdealError::ZeroGenerator);
            }
            if g.context().as_ref() != ctx.as_ref() {
                return Err(IdealError::ContextMismatch);
            }
        }
        Ok(IdealSpec {
            ctx: Arc::clone(ctx),
            monomial_gens: mono,
            poly_gens,
            pre_saturation: false,
            assert_prime: false,
        })
    }

    /// The zero ideal.
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        IdealSpec {
            ctx: Arc::clone(ctx),
            monomial_gens: Vec::new(),
            poly_gens: Vec::new(),
            pre_saturation: false,
            assert_prime: false,
        }
    }

    /// The coordinate ideal generated by the named variables.
    pub fn coordinate(ctx: &Arc<VarContext>, vars: &BTreeSet<usize>) -> Result<Self, IdealError> {
        let mut gens = Vec::new();
        for &i in vars {
            if i >= ctx.arity() {
                return Err(IdealError::Poly(PolyError::IndexOutOfRange {
                    index: i,
                    arity: ctx.arity(),
                }));
            }
            let mut e = vec![0i64; ctx.arity()];
            e[i] = 1;
            gens.push(e);
        }
        Self::new(ctx, gens, Vec::new())
    }

    pub fn with_pre_saturation_flag(mut self) -> Self {
        self.pre_saturation = true;
        self
    }

    pub fn with_assert_prime(mut self, yes: bool) -> Self {
        self.assert_prime = yes;
        self
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn monomial_gens(&self) -> &[Vec<i64>] {
        &self.monomial_gens
    }

    pub fn poly_gens(&self) -> &[LaurentPoly] {
        &self.poly_gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.monomial_gens.is_empty() && self.poly_gens.is_empty()
    }

    pub fn pre_saturation(&self) -> bool {
        self.pre_saturation
    }

    pub fn assert_prime(&self) -> bool {
        self.assert_prime
    }

    /// All generators as polynomials, monomial part first.
    pub fn generator_polys(&self) -> Vec<LaurentPoly> {
        let mut gens: Vec<LaurentPoly> = self
            .monomial_gens
            .iter()
            .map(|e| {
                LaurentPoly::monomial(&self.ctx, e.clone(), num_rational::BigRational::one())
                    .expect("validated monomial")
            })
            .collect();
        gens.extend(self.poly_gens.iter().cloned());
        gens
    }

    /// Canonical display: `<g1, g2, ...>`, `<0>` for the zero ideal.
    pub fn canonical_string(&self) -> String {
        if self.is_zero_ideal() {
            return "<0>".to_string();
        }
        let mut parts: Vec<String> = self
            .monomial_gens
            .iter()
            .map(|e| monomial_string(&self.ctx, e))
            .collect();
        parts.extend(self.poly_gens.iter().map(|p| p.to_string()));
        format!("<{}>", parts.join(", "))
    }

    /// Drop every term of `f` divisible by some monomial generator.
    fn reduce_by_monomials(&self, f: &LaurentPoly) -> LaurentPoly {
        if self.monomial_gens.is_empty() || f.is_zero() {
            return f.clone();
        }
        let mut acc = LaurentPoly::zero(&self.ctx);
        'terms: for (exps, coeff) in f.terms() {
            for m in &self.monomial_gens {
                if exps.iter().zip(m).all(|(&e, &g)| e >= g) {
                    continue 'terms;
                }
            }
            let t = LaurentPoly::monomial(&self.ctx, exps.clone(), coeff.clone())
                .expect("term of a valid polynomial");
            acc = &acc + &t;
        }
        acc
    }

    /// Polynomial generators that survive reduction modulo the monomial
    /// part.
    fn surviving_poly_gens(&self) -> Vec<LaurentPoly> {
        self.poly_gens
            .iter()
            .map(|g| self.reduce_by_monomials(g))
            .filter(|g| !g.is_zero())
            .collect()
    }

    /// Ideal membership. `Err(Unsupported)` when two or more polynomial
    /// generators survive reduction, or on a pre-saturation ideal.
    pub fn membership(&self, f: &LaurentPoly) -> Result<bool, IdealError> {
        if f.context().as_ref() != self.ctx.as_ref() {
            return Err(IdealError::ContextMismatch);
        }
        if self.pre_saturation {
            return Err(IdealError::Unsupported(
                "membership in a pre-saturation ideal".to_string(),
            ));
        }
        let reduced = self.reduce_by_monomials(f);
        let survivors = self.surviving_poly_gens();
        match survivors.len() {
            0 => Ok(reduced.is_zero()),
            1 => Ok(reduced.divide_exact(&survivors[0])?.is_divisible()),
            n => Err(IdealError::Unsupported(format!(
                "membership with {n} surviving polynomial generators"
            ))),
        }
    }
}

/// Whether the ideal is stable under every Hamiltonian, certified on
/// generators: `{x_i, g}` must lie in the ideal for all variables and
/// generators.
pub fn is_poisson_stable(spec: &BracketSpec, ideal: &IdealSpec) -> Result<bool, IdealError> {
    if spec.context().as_ref() != ideal.context().as_ref() {
        return Err(IdealError::ContextMismatch);
    }
    for g in ideal.generator_polys() {
        for i in 0..ideal.context().arity() {
            let h = spec.hamiltonian(i, &g)?;
            if !ideal.membership(&h)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The failing Hamiltonian witness behind a negative stability verdict.
pub fn poisson_instability_witness(
    spec: &BracketSpec,
    ideal: &IdealSpec,
) -> Result<Option<(usize, LaurentPoly, LaurentPoly)>, IdealError> {
    for g in ideal.generator_polys() {
        for i in 0..ideal.context().arity() {
            let h = spec.hamiltonian(i, &g)?;
            if !ideal.membership(&h)? {
                return Ok(Some((i, g, h)));
            }
        }
    }
    Ok(None)
}

/// A set of derivations: explicit coefficient vectors
/// (`delta = sum c_i d/dx_i`) or the variable Hamiltonians of a bracket.
#[derive(Clone, Debug)]
pub enum DerivationSet {
    Explicit(Vec<Vec<LaurentPoly>>),
    Hamiltonians(BracketSpec),
}

impl DerivationSet {
    pub fn explicit(
        derivs: Vec<Vec<LaurentPoly>>,
        ctx: &Arc<VarContext>,
    ) -> Result<Self, IdealError> {
        for coeffs in &derivs {
            if coeffs.len() != ctx.arity() {
                return Err(IdealError::Poly(PolyError::ArityMismatch {
                    expected: ctx.arity(),
                    got: coeffs.len(),
                }));
            }
            for c in coeffs {
                if c.context().as_ref() != ctx.as_ref() {
                    return Err(IdealError::ContextMismatch);
                }
            }
        }
        Ok(DerivationSet::Explicit(derivs))
    }

    pub fn len(&self) -> usize {
        match self {
            DerivationSet::Explicit(ds) => ds.len(),
            DerivationSet::Hamiltonians(spec) => spec.context().arity(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Apply the `k`-th derivation to `f`.
    pub fn apply(&self, k: usize, f: &LaurentPoly) -> Result<LaurentPoly, IdealError> {
        match self {
            DerivationSet::Explicit(ds) => {
                let coeffs = &ds[k];
                let mut acc = LaurentPoly::zero(f.context());
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    acc = &acc + &(c * &f.partial_derivative(i)?);
                }
                Ok(acc)
            }
            DerivationSet::Hamiltonians(spec) => Ok(spec.hamiltonian(k, f)?),
        }
    }
}

/// Verdict of the bounded-depth derivation-core test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreTestResult {
    In,
    /// Indices of the derivation word, outermost application last, whose
    /// image escapes the ideal.
    NotIn(Vec<usize>),
    InconclusiveAtDepth(usize),
}

impl fmt::Display for CoreTestResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreTestResult::In => write!(f, "In"),
            CoreTestResult::NotIn(w) => {
                let word: Vec<String> = w.iter().map(|i| format!("d{i}")).collect();
                write!(f, "NotIn (witness: [{}])", word.join(" "))
            }
            CoreTestResult::InconclusiveAtDepth(d) => write!(f, "InconclusiveAtDepth({d})"),
        }
    }
}

/// Breadth-first search over derivation words up to `max_depth`. Returns
/// `NotIn` with the first (shortest, then lexicographically first) word
/// whose image leaves the ideal; `In` when every branch has collapsed to
/// zero; `InconclusiveAtDepth` otherwise.
pub fn delta_core_test(
    derivs: &DerivationSet,
    ideal: &IdealSpec,
    f: &LaurentPoly,
    max_depth: usize,
) -> Result<CoreTestResult, IdealError> {
    if !ideal.membership(f)? {
        return Ok(CoreTestResult::NotIn(Vec::new()));
    }
    let mut frontier: Vec<(Vec<usize>, LaurentPoly)> = Vec::new();
    if !f.is_zero() {
        frontier.push((Vec::new(), f.clone()));
    }
    for _ in 0..max_depth {
        if frontier.is_empty() {
            return Ok(CoreTestResult::In);
        }
        let mut next = Vec::new();
        for (word, value) in &frontier {
            for k in 0..derivs.len() {
                let image = derivs.apply(k, value)?;
                let mut next_word = word.clone();
                next_word.push(k);
                if !ideal.membership(&image)? {
                    return Ok(CoreTestResult::NotIn(next_word));
                }
                if !image.is_zero() {
                    next.push((next_word, image));
                }
            }
        }
        frontier = next;
    }
    if frontier.is_empty() {
        Ok(CoreTestResult::In)
    } else {
        Ok(CoreTestResult::InconclusiveAtDepth(max_depth))
    }
}

/// Verdict of the limited primality certifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primality {
    Prime,
    NotPrime,
    Unverified,
}

impl fmt::Display for Primality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primality::Prime => write!(f, "Prime"),
            Primality::NotPrime => write!(f, "NotPrime"),
            Primality::Unverified => write!(f, "Unverified"),
        }
    }
}

fn is_multilinear(exps: &[i64]) -> bool {
    exps.iter().all(|&e| e == 0 || e == 1)
}

/// Multilinear polynomials that split as a product over a variable
/// bipartition have a rank-one coefficient matrix for that bipartition.
/// Searching all bipartitions of the support detects every factorization
/// into two multilinear parts in disjoint variables.
fn multilinear_split_exists(g: &LaurentPoly) -> bool {
    let support: Vec<usize> = {
        let mut vars = BTreeSet::new();
        for (exps, _) in g.terms() {
            for (i, &e) in exps.iter().enumerate() {
                if e != 0 {
                    vars.insert(i);
                }
            }
        }
        vars.into_iter().collect()
    };
    let k = support.len();
    if k < 2 || k > 12 {
        return false;
    }
    // proper bipartitions, up to swapping the two sides
    for mask in 1..(1u32 << (k - 1)) {
        let left: Vec<usize> = (0..k)
            .filter(|&t| mask & (1 << t) != 0)
            .map(|t| support[t])
            .collect();
        let right: Vec<usize> = (0..k)
            .filter(|&t| mask & (1 << t) == 0)
            .map(|t| support[t])
            .collect();
        let project =
            |exps: &[i64], side: &[usize]| -> Vec<i64> { side.iter().map(|&i| exps[i]).collect() };
        let mut rows = BTreeSet::new();
        let mut cols = BTreeSet::new();
        for (exps, _) in g.terms() {
            rows.insert(project(exps, &left));
            cols.insert(project(exps, &right));
        }
        let rows: Vec<Vec<i64>> = rows.into_iter().collect();
        let cols: Vec<Vec<i64>> = cols.into_iter().collect();
        let mut matrix = vec![vec![num_rational::BigRational::zero(); cols.len()]; rows.len()];
        for (exps, coeff) in g.terms() {
            let r = rows
                .iter()
                .position(|r| r == &project(exps, &left))
                .unwrap();
            let c = cols
                .iter()
                .position(|c| c == &project(exps, &right))
                .unwrap();
            matrix[r][c] = coeff.clone();
        }
        // rank <= 1 iff all 2x2 minors vanish
        let mut rank_one = true;
        'minors: for r1 in 0..rows.len() {
            for r2 in r1 + 1..rows.len() {
                for c1 in 0..cols.len() {
                    for c2 in c1 + 1..cols.len() {
                        let det =
                            &matrix[r1][c1] * &matrix[r2][c2] - &matrix[r1][c2] * &matrix[r2][c1];
                        if !det.is_zero() {
                            rank_one = false;
                            break 'minors;
                        }
                    }
                }
            }
        }
        if rank_one {
            return true;
        }
    }
    false
}

/// Irreducibility certificate for a polynomial with no monomial factor:
/// nonconstant affine-linear, or degree one in some variable `x_i` with
/// monomial coefficient sharing no variable with the rest (the factor
/// analysis in the UFD then leaves only units).
fn certified_irreducible(g: &LaurentPoly) -> bool {
    let n = g.context().arity();
    let total_degree = |exps: &[i64]| -> i64 { exps.iter().sum() };
    let degrees: Vec<i64> = g.terms().map(|(e, _)| total_degree(e)).collect();
    let max_deg = degrees.iter().copied().max().unwrap_or(0);
    if max_deg == 1 {
        return true;
    }
    if !g.terms().all(|(e, _)| is_multilinear(e)) {
        return false;
    }
    // try g = p * x_i + q with p a monomial sharing no variable with q:
    // a nontrivial factor would have to divide both p and q
    for i in 0..n {
        if g.terms().any(|(e, _)| e[i] > 1) {
            continue;
        }
        let with: Vec<&Vec<i64>> = g
            .terms()
            .filter(|(e, _)| e[i] == 1)
            .map(|(e, _)| e)
            .collect();
        let without: Vec<&Vec<i64>> = g
            .terms()
            .filter(|(e, _)| e[i] == 0)
            .map(|(e, _)| e)
            .collect();
        if with.len() != 1 || without.is_empty() {
            continue;
        }
        let p_vars: BTreeSet<usize> = (0..n).filter(|&v| v != i && with[0][v] != 0).collect();
        let q_vars: BTreeSet<usize> = without
            .iter()
            .flat_map(|e| (0..n).filter(move |&v| e[v] != 0))
            .collect();
        if p_vars.is_disjoint(&q_vars) {
            return true;
        }
    }
    false
}

/// Certify primality for the supported shapes: coordinate ideals,
/// optionally together with one certified-irreducible polynomial in the
/// remaining variables. Visible factorizations give `NotPrime`;
/// everything else is `Unverified`.
pub fn primality_lite(ideal: &IdealSpec) -> Primality {
    if ideal.assert_prime() {
        return Primality::Prime;
    }
    if ideal.is_zero_ideal() {
        // the ambient ring is a domain
        return Primality::Prime;
    }
    // monomial generators beyond single variables factor visibly; a
    // constant generator makes the unit ideal
    for m in ideal.monomial_gens() {
        let deg: i64 = m.iter().sum();
        if deg != 1 {
            return Primality::NotPrime;
        }
    }
    let coordinate_part_ok = ideal
        .monomial_gens()
        .iter()
        .all(|m| m.iter().sum::<i64>() == 1);
    let survivors: Vec<LaurentPoly> = ideal
        .poly_gens()
        .iter()
        .map(|g| {
            // set the coordinate-part variables to zero
            let mut acc = LaurentPoly::zero(ideal.context());
            'terms: for (exps, coeff) in g.terms() {
                for m in ideal.monomial_gens() {
                    if exps.iter().zip(m).any(|(&e, &g)| g > 0 && e > 0) {
                        continue 'terms;
                    }
                }
                let t = LaurentPoly::monomial(ideal.context(), exps.clone(), coeff.clone())
                    .expect("term of a valid polynomial");
                acc = &acc + &t;
            }
            acc
        })
        .filter(|g| !g.is_zero())
        .collect();

    if !coordinate_part_ok {
        return Primality::Unverified;
    }
    match survivors.len() {
        0 => Primality::Prime, // coordinate ideal
        1 => {
            let g = &survivors[0];
            let stripped = g.strip_monomial_content();
            if stripped.term_count() == 1 {
                // the survivor is a single monomial
                let deg: i64 = g.terms().next().map(|(e, _)| e.iter().sum()).unwrap_or(0);
                return match deg {
                    1 => Primality::Prime,
                    // degree 0 means the ideal is the unit ideal
                    _ => Primality::NotPrime,
                };
            }
            if stripped != *g {
                // monomial factor times a non-unit
                return Primality::NotPrime;
            }
            if g.terms().all(|(e, _)| is_multilinear(e)) && multilinear_split_exists(g) {
                return Primality::NotPrime;
            }
            if certified_irreducible(g) {
                Primality::Prime
            } else {
                Primality::Unverified
            }
        }
        _ => Primality::Unverified,
    }
}
