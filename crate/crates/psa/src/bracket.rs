//! Poisson brackets on (Laurent) polynomial rings.
//!
//! Two presentations: a log-canonical antisymmetric matrix `pi` with
//! `{x_i, x_j} = pi_ij * x_i * x_j`, or an explicit table of generator
//! brackets. Either extends to the whole ring as the unique biderivation
//! `{f, g} = sum_{i,j} {x_i, x_j} * df/dx_i * dg/dx_j`.

use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::polyring::{LaurentPoly, PolyError, VarContext};
use crate::rng::{random_poly, SplitMix64};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketError {
    NotSquare { rows: usize, arity: usize },
    NotAntisymmetric { i: usize, j: usize },
    DiagonalEntry { i: usize },
    DuplicateEntry { i: usize, j: usize },
    ContextMismatch,
    DimensionMismatch { expected: usize, got: usize },
    NotLogCanonical,
    Poly(PolyError),
}

impl fmt::Display for BracketError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketError::NotSquare { rows, arity } => {
                write!(f, "pi has {rows} rows but the ring has {arity} variables")
            }
            BracketError::NotAntisymmetric { i, j } => {
                write!(f, "pi is not antisymmetric at ({},{})", i + 1, j + 1)
            }
            BracketError::DiagonalEntry { i } => {
                write!(f, "table entry for a variable with itself at index {i}")
            }
            BracketError::DuplicateEntry { i, j } => {
                write!(f, "duplicate table entry for pair ({i},{j})")
            }
            BracketError::ContextMismatch => write!(f, "operands live in different rings"),
            BracketError::DimensionMismatch { expected, got } => {
                write!(
                    f,
                    "expected exponent vectors of length {expected}, got {got}"
                )
            }
            BracketError::NotLogCanonical => {
                write!(f, "operation requires a log-canonical bracket")
            }
            BracketError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BracketError {}

impl From<PolyError> for BracketError {
    fn from(e: PolyError) -> Self {
        BracketError::Poly(e)
    }
}

/// Antisymmetric rational matrix, validated at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix {
    n: usize,
    data: Vec<BigRational>, // row-major
}

impl SkewMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self, BracketError> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(BracketError::NotSquare {
                    rows: row.len(),
                    arity: n,
                });
            }
        }
        for i in 0..n {
            for j in 0..=i {
                if rows[i][j] != -rows[j][i].clone() {
                    return Err(BracketError::NotAntisymmetric { i: j, j: i });
                }
            }
        }
        Ok(SkewMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    /// `a^T pi b`.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> Result<BigRational, BracketError> {
        if a.len() != self.n {
            return Err(BracketError::DimensionMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        if b.len() != self.n {
            return Err(BracketError::DimensionMismatch {
                expected: self.n,
                got: b.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let ai = BigRational::from_integer(ai.into());
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                acc += &ai * self.at(i, j) * BigRational::from_integer(bj.into());
            }
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub enum BracketKind {
    LogCanonical(SkewMatrix),
    /// Generator brackets stored for `i < j` only; `(j, i)` materializes by
    /// negation and the diagonal is identically zero.
    Table(BTreeMap<(usize, usize), LaurentPoly>),
}

#[derive(Clone, Debug)]
pub struct BracketSpec {
    ctx: Arc<VarContext>,
    kind: BracketKind,
}

impl BracketSpec {
    pub fn log_canonical(
        ctx: &Arc<VarContext>,
        pi: Vec<Vec<BigRational>>,
    ) -> Result<Self, BracketError> {
        if pi.len() != ctx.arity() {
            return Err(BracketError::NotSquare {
                rows: pi.len(),
                arity: ctx.arity(),
            });
        }
        let pi = SkewMatrix::new(pi)?;
        Ok(BracketSpec {
            ctx: Arc::clone(ctx),
            kind: BracketKind::LogCanonical(pi),
        })
    }

    /// Entries may come in either orientation; they are normalized to
    /// `i < j`, negating the value when flipped.
    pub fn table(
        ctx: &Arc<VarContext>,
        entries: Vec<(usize, usize, LaurentPoly)>,
    ) -> Result<Self, BracketError> {
        let mut map = BTreeMap::new();
        for (i, j, value) in entries {
            if i == j {
                return Err(BracketError::DiagonalEntry { i });
            }
            if i >= ctx.arity() || j >= ctx.arity() {
                return Err(BracketError::Poly(PolyError::IndexOutOfRange {
                    index: i.max(j),
                    arity: ctx.arity(),
                }));
            }
            if value.context().as_ref() != ctx.as_ref() {
                return Err(BracketError::ContextMismatch);
            }
            let (key, value) = if i < j {
                ((i, j), value)
            } else {
                ((j, i), -value)
            };
            if map.contains_key(&key) {
                return Err(BracketError::DuplicateEntry { i: key.0, j: key.1 });
            }
            if !value.is_zero() {
                map.insert(key, value);
            }
        }
        Ok(BracketSpec {
            ctx: Arc::clone(ctx),
            kind: BracketKind::Table(map),
        })
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn kind(&self) -> &BracketKind {
        &self.kind
    }

    pub fn pi(&self) -> Option<&SkewMatrix> {
        match &self.kind {
            BracketKind::LogCanonical(pi) => Some(pi),
            BracketKind::Table(_) => None,
        }
    }

    /// `{x_i, x_j}`.
    pub fn generator_bracket(&self, i: usize, j: usize) -> LaurentPoly {
        match &self.kind {
            BracketKind::LogCanonical(pi) => {
                let c = pi.at(i, j);
                if c.is_zero() || i == j {
                    return LaurentPoly::zero(&self.ctx);
                }
                let mut exps = vec![0i64; self.ctx.arity()];
                exps[i] += 1;
                exps[j] += 1;
                LaurentPoly::monomial(&self.ctx, exps, c.clone()).expect("valid exponents")
            }
            BracketKind::Table(map) => {
                if i == j {
                    return LaurentPoly::zero(&self.ctx);
                }
                if i < j {
                    map.get(&(i, j))
                        .cloned()
                        .unwrap_or_else(|| LaurentPoly::zero(&self.ctx))
                } else {
                    map.get(&(j, i))
                        .map(|p| -p)
                        .unwrap_or_else(|| LaurentPoly::zero(&self.ctx))
                }
            }
        }
    }

    /// `{f, g}` by the biderivation extension of the generator brackets.
    pub fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, BracketError> {
        if f.context().as_ref() != self.ctx.as_ref() || g.context().as_ref() != self.ctx.as_ref() {
            return Err(BracketError::ContextMismatch);
        }
        let n = self.ctx.arity();
        let df: Vec<LaurentPoly> = (0..n)
            .map(|i| f.partial_derivative(i).expect("index in range"))
            .collect();
        let dg: Vec<LaurentPoly> = (0..n)
            .map(|j| g.partial_derivative(j).expect("index in range"))
            .collect();
        let mut acc = LaurentPoly::zero(&self.ctx);
        for i in 0..n {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || dg[j].is_zero() {
                    continue;
                }
                let cij = self.generator_bracket(i, j);
                if cij.is_zero() {
                    continue;
                }
                acc = &acc + &(&cij * &(&df[i] * &dg[j]));
            }
        }
        Ok(acc)
    }

    /// Hamiltonian `{x_i, f}`.
    pub fn hamiltonian(&self, i: usize, f: &LaurentPoly) -> Result<LaurentPoly, BracketError> {
        let xi = LaurentPoly::variable(&self.ctx, i)?;
        self.bracket(&xi, f)
    }
}

/// Closed form on monomials: `{x^a, x^b} = (a^T pi b) * x^(a+b)`.
/// Independent of the biderivation route in [`BracketSpec::bracket`].
pub fn monomial_bracket_closed_form(
    pi: &SkewMatrix,
    a: &[i64],
    b: &[i64],
    ctx: &Arc<VarContext>,
) -> Result<LaurentPoly, BracketError> {
    let scalar = pi.pair(a, b)?;
    if scalar.is_zero() {
        return Ok(LaurentPoly::zero(ctx));
    }
    let exps: Vec<i64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_add(y).expect("exponent overflow"))
        .collect();
    Ok(LaurentPoly::monomial(ctx, exps, scalar)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Antisymmetry,
    Leibniz,
    Jacobi,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Antisymmetry => write!(f, "antisymmetry"),
            Axiom::Leibniz => write!(f, "leibniz"),
            Axiom::Jacobi => write!(f, "jacobi"),
        }
    }
}

/// First failing instance of an axiom check.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub axiom: Axiom,
    pub inputs: Vec<LaurentPoly>,
    pub residual: LaurentPoly,
}

/// Result of checking the Poisson axioms. The counterexample is present
/// exactly when some flag is false.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub antisymmetry_ok: bool,
    pub leibniz_ok: bool,
    pub jacobi_ok: bool,
    pub counterexample: Option<Counterexample>,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.antisymmetry_ok && self.leibniz_ok && self.jacobi_ok
    }
}

/// Check antisymmetry, Leibniz, and Jacobi. Jacobi is verified exactly on
/// every generator triple, which suffices for a biderivation; the seeded
/// random trials on whole polynomials are supplementary.
pub fn check_poisson_axioms(spec: &BracketSpec, trials: usize, seed: u64) -> AxiomReport {
    let ctx = spec.context();
    let n = ctx.arity();
    let mut report = AxiomReport {
        antisymmetry_ok: true,
        leibniz_ok: true,
        jacobi_ok: true,
        counterexample: None,
    };
    fn record(
        report: &mut AxiomReport,
        axiom: Axiom,
        inputs: Vec<LaurentPoly>,
        residual: LaurentPoly,
    ) {
        match axiom {
            Axiom::Antisymmetry => report.antisymmetry_ok = false,
            Axiom::Leibniz => report.leibniz_ok = false,
            Axiom::Jacobi => report.jacobi_ok = false,
        }
        if report.counterexample.is_none() {
            report.counterexample = Some(Counterexample {
                axiom,
                inputs,
                residual,
            });
        }
    }

    let jac = |f: &LaurentPoly, g: &LaurentPoly, h: &LaurentPoly| -> LaurentPoly {
        let a = spec.bracket(f, &spec.bracket(g, h).unwrap()).unwrap();
        let b = spec.bracket(g, &spec.bracket(h, f).unwrap()).unwrap();
        let c = spec.bracket(h, &spec.bracket(f, g).unwrap()).unwrap();
        &(&a + &b) + &c
    };

    // exact certificate on generators
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let xi = LaurentPoly::variable(ctx, i).unwrap();
                let xj = LaurentPoly::variable(ctx, j).unwrap();
                let xl = LaurentPoly::variable(ctx, l).unwrap();
                let residual = jac(&xi, &xj, &xl);
                if !residual.is_zero() {
                    record(&mut report, Axiom::Jacobi, vec![xi, xj, xl], residual);
                }
            }
        }
    }

    let mut rng = SplitMix64::new(seed);
    for _ in 0..trials {
        let f = random_poly(&mut rng, ctx);
        let g = random_poly(&mut rng, ctx);
        let h = random_poly(&mut rng, ctx);

        let anti = &spec.bracket(&f, &g).unwrap() + &spec.bracket(&g, &f).unwrap();
        if !anti.is_zero() {
            record(
                &mut report,
                Axiom::Antisymmetry,
                vec![f.clone(), g.clone()],
                anti,
            );
        }

        let gh = &g * &h;
        let leib = &spec.bracket(&f, &gh).unwrap()
            - &(&(&g * &spec.bracket(&f, &h).unwrap()) + &(&spec.bracket(&f, &g).unwrap() * &h));
        if !leib.is_zero() {
            record(
                &mut report,
                Axiom::Leibniz,
                vec![f.clone(), g.clone(), h.clone()],
                leib,
            );
        }

        let j = jac(&f, &g, &h);
        if !j.is_zero() {
            record(&mut report, Axiom::Jacobi, vec![f, g, h], j);
        }
    }
    report
}
