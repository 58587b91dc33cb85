//! Exact multivariate (Laurent) polynomial arithmetic over the rationals.
//!
//! A polynomial is a canonical map from exponent vector to nonzero
//! coefficient; the zero polynomial is the empty map. In a `Polynomial`
//! ring every exponent is nonnegative, a `Laurent` ring allows negative
//! exponents. Coefficients are arbitrary-precision rationals in lowest
//! terms; exponents are overflow-checked machine integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    Polynomial,
    Laurent,
}

/// Ordered variable list plus ring kind. Shared by reference between all
/// values of the ring.
#[derive(Debug, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
    kind: RingKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextError {
    InvalidName(String),
    DuplicateName(String),
}

impl fmt::Display for ContextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextError::InvalidName(n) => write!(f, "invalid variable name '{n}'"),
            ContextError::DuplicateName(n) => write!(f, "duplicate variable name '{n}'"),
        }
    }
}

impl std::error::Error for ContextError {}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarContext {
    pub fn new(names: Vec<String>, kind: RingKind) -> Result<Arc<Self>, ContextError> {
        for (i, name) in names.iter().enumerate() {
            if !valid_identifier(name) {
                return Err(ContextError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(ContextError::DuplicateName(name.clone()));
            }
        }
        Ok(Arc::new(VarContext { names, kind }))
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    IndexOutOfRange { index: usize, arity: usize },
    ArityMismatch { expected: usize, got: usize },
    NegativeExponent { var: String, exponent: i64 },
    DivisionByZero,
    ContextMismatch,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::IndexOutOfRange { index, arity } => {
                write!(
                    f,
                    "variable index {index} out of range for {arity} variables"
                )
            }
            PolyError::ArityMismatch { expected, got } => {
                write!(f, "expected {expected} coordinates, got {got}")
            }
            PolyError::NegativeExponent { var, exponent } => {
                write!(
                    f,
                    "negative exponent {exponent} on '{var}' in a polynomial ring"
                )
            }
            PolyError::DivisionByZero => write!(f, "division by the zero polynomial"),
            PolyError::ContextMismatch => write!(f, "operands live in different rings"),
        }
    }
}

impl std::error::Error for PolyError {}

/// Graded lexicographic order on exponent vectors: total degree first,
/// then lexicographic in the variable order.
pub fn grlex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i128 = a.iter().map(|&e| e as i128).sum();
    let db: i128 = b.iter().map(|&e| e as i128).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug)]
pub struct LaurentPoly {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

/// Outcome of exact division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactDivision {
    Quotient(LaurentPoly),
    NotDivisible,
}

impl ExactDivision {
    pub fn quotient(self) -> Option<LaurentPoly> {
        match self {
            ExactDivision::Quotient(q) => Some(q),
            ExactDivision::NotDivisible => None,
        }
    }

    pub fn is_divisible(&self) -> bool {
        matches!(self, ExactDivision::Quotient(_))
    }
}

/// Outcome of evaluating at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Value(BigRational),
    Undefined,
}

/// A rational point of affine (or toric) n-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    coords: Vec<BigRational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalPoint { coords }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
}

/// `q^e` for nonzero `q` when `e < 0`; any `q` when `e >= 0`.
pub(crate) fn rational_pow(q: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let mag = e.unsigned_abs();
    let p = u32::try_from(mag).expect("exponent overflow");
    let powed = BigRational::new(q.numer().pow(p), q.denom().pow(p));
    if e < 0 {
        powed.recip()
    } else {
        powed
    }
}

impl LaurentPoly {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        LaurentPoly {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, BigRational::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; ctx.arity()], c);
        }
        LaurentPoly {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    pub fn monomial(
        ctx: &Arc<VarContext>,
        exponents: Vec<i64>,
        coeff: BigRational,
    ) -> Result<Self, PolyError> {
        if exponents.len() != ctx.arity() {
            return Err(PolyError::ArityMismatch {
                expected: ctx.arity(),
                got: exponents.len(),
            });
        }
        if ctx.kind() == RingKind::Polynomial {
            if let Some((i, &e)) = exponents.iter().enumerate().find(|(_, &e)| e < 0) {
                return Err(PolyError::NegativeExponent {
                    var: ctx.name(i).to_string(),
                    exponent: e,
                });
            }
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponents, coeff);
        }
        Ok(LaurentPoly {
            ctx: Arc::clone(ctx),
            terms,
        })
    }

    pub fn variable(ctx: &Arc<VarContext>, i: usize) -> Result<Self, PolyError> {
        if i >= ctx.arity() {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                arity: ctx.arity(),
            });
        }
        let mut exps = vec![0; ctx.arity()];
        exps[i] = 1;
        Self::monomial(ctx, exps, BigRational::one())
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn same_context(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    /// Terms in descending graded-lexicographic order (the print order).
    pub fn sorted_terms(&self) -> Vec<(&Vec<i64>, &BigRational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(ea, _), (eb, _)| grlex(eb, ea));
        ts
    }

    fn insert_term(terms: &mut BTreeMap<Vec<i64>, BigRational>, exps: Vec<i64>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(e, q)| (e.clone(), q * c)).collect(),
        }
    }

    /// Multiply by the single term `c * x^exps`.
    pub fn mul_term(&self, exps: &[i64], c: &BigRational) -> Self {
        assert_eq!(exps.len(), self.ctx.arity());
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, q)| {
                let shifted: Vec<i64> = e
                    .iter()
                    .zip(exps)
                    .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                    .collect();
                (shifted, q * c)
            })
            .collect();
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    /// Formal partial derivative in variable `i`; exponent-zero terms vanish.
    pub fn partial_derivative(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.ctx.arity() {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                arity: self.ctx.arity(),
            });
        }
        let mut terms = BTreeMap::new();
        for (exps, coeff) in &self.terms {
            let e = exps[i];
            if e == 0 {
                continue;
            }
            let mut new_exps = exps.clone();
            new_exps[i] = e.checked_sub(1).expect("exponent overflow");
            let c = coeff * BigRational::from_integer(BigInt::from(e));
            Self::insert_term(&mut terms, new_exps, c);
        }
        Ok(LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms,
        })
    }

    /// Componentwise minimum of all exponents (the content monomial).
    /// Zero vector for the zero polynomial.
    fn exponent_floor(&self) -> Vec<i64> {
        let n = self.ctx.arity();
        let mut floor = vec![i64::MAX; n];
        for exps in self.terms.keys() {
            for (f, &e) in floor.iter_mut().zip(exps) {
                *f = (*f).min(e);
            }
        }
        if self.terms.is_empty() {
            vec![0; n]
        } else {
            floor
        }
    }

    /// Exact division: `Quotient(q)` with `q * g == self`, or `NotDivisible`.
    ///
    /// Both operands are stripped of their content monomial first, the
    /// genuine polynomial parts go through strict long division in the
    /// graded-lexicographic order, and the monomial offset is restored at
    /// the end. In a polynomial ring a quotient that would need negative
    /// exponents counts as not divisible.
    pub fn divide_exact(&self, g: &Self) -> Result<ExactDivision, PolyError> {
        if !self.same_context(g) {
            return Err(PolyError::ContextMismatch);
        }
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(ExactDivision::Quotient(Self::zero(&self.ctx)));
        }

        let f_floor = self.exponent_floor();
        let g_floor = g.exponent_floor();
        let strip = |p: &Self, floor: &[i64]| -> BTreeMap<Vec<i64>, BigRational> {
            p.terms
                .iter()
                .map(|(e, c)| {
                    let stripped: Vec<i64> = e.iter().zip(floor).map(|(&a, &b)| a - b).collect();
                    (stripped, c.clone())
                })
                .collect()
        };
        let mut rem = strip(self, &f_floor);
        let g_hat = strip(g, &g_floor);

        let lead = |m: &BTreeMap<Vec<i64>, BigRational>| -> Vec<i64> {
            m.keys()
                .max_by(|a, b| grlex(a, b))
                .expect("nonempty")
                .clone()
        };
        let g_lead = lead(&g_hat);
        let g_lead_coeff = g_hat[&g_lead].clone();

        let mut quot: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        while !rem.is_empty() {
            let r_lead = lead(&rem);
            if r_lead.iter().zip(&g_lead).any(|(&a, &b)| a < b) {
                return Ok(ExactDivision::NotDivisible);
            }
            let shift: Vec<i64> = r_lead.iter().zip(&g_lead).map(|(&a, &b)| a - b).collect();
            let c = &rem[&r_lead] / &g_lead_coeff;
            for (e, gc) in &g_hat {
                let target: Vec<i64> = e
                    .iter()
                    .zip(&shift)
                    .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                    .collect();
                Self::insert_term(&mut rem, target, -(gc * &c));
            }
            Self::insert_term(&mut quot, shift, c);
        }

        let offset: Vec<i64> = f_floor.iter().zip(&g_floor).map(|(&a, &b)| a - b).collect();
        let mut shifted: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (e, c) in quot {
            let final_exps: Vec<i64> = e
                .iter()
                .zip(&offset)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect();
            if self.ctx.kind() == RingKind::Polynomial && final_exps.iter().any(|&x| x < 0) {
                return Ok(ExactDivision::NotDivisible);
            }
            shifted.insert(final_exps, c);
        }
        let q = LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms: shifted,
        };
        debug_assert_eq!(&(&q * g), self);
        Ok(ExactDivision::Quotient(q))
    }

    /// Substitute the point's coordinates. `Undefined` exactly when some
    /// term carries a negative exponent on a coordinate that is zero.
    pub fn evaluate(&self, p: &RationalPoint) -> Result<Evaluation, PolyError> {
        if p.coords.len() != self.ctx.arity() {
            return Err(PolyError::ArityMismatch {
                expected: self.ctx.arity(),
                got: p.coords.len(),
            });
        }
        for exps in self.terms.keys() {
            for (i, &e) in exps.iter().enumerate() {
                if e < 0 && p.coords[i].is_zero() {
                    return Ok(Evaluation::Undefined);
                }
            }
        }
        let mut acc = BigRational::zero();
        for (exps, coeff) in &self.terms {
            let mut val = coeff.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e != 0 {
                    val *= rational_pow(&p.coords[i], e);
                }
            }
            acc += val;
        }
        Ok(Evaluation::Value(acc))
    }

    /// Strip the content monomial, returning the stripped polynomial.
    /// `x^2*y - x*y^2` becomes `x - y`; the zero polynomial is unchanged.
    pub fn strip_monomial_content(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let floor = self.exponent_floor();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let stripped: Vec<i64> = e.iter().zip(&floor).map(|(&a, &b)| a - b).collect();
                (stripped, c.clone())
            })
            .collect();
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    /// Normalize so the leading (graded-lex) coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.sorted_terms().first() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = BigRational::one() / *c;
                self.scale(&inv)
            }
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert!(self.same_context(rhs), "context mismatch");
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            LaurentPoly::insert_term(&mut terms, e.clone(), c.clone());
        }
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert!(self.same_context(rhs), "context mismatch");
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            LaurentPoly::insert_term(&mut terms, e.clone(), -c);
        }
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert!(self.same_context(rhs), "context mismatch");
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<i64> = ea
                    .iter()
                    .zip(eb)
                    .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                    .collect();
                LaurentPoly::insert_term(&mut terms, exps, ca * cb);
            }
        }
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

fn write_monomial(out: &mut String, ctx: &VarContext, exps: &[i64]) {
    let mut first = true;
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(ctx.name(i));
        if e != 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (idx, (exps, coeff)) in self.sorted_terms().into_iter().enumerate() {
            let negative = coeff.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = coeff.abs();
            let is_constant = exps.iter().all(|&e| e == 0);
            if is_constant {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                write_monomial(&mut out, &self.ctx, exps);
            }
        }
        write!(f, "{out}")
    }
}

/// Render a bare monomial `x^exps` (coefficient 1) in the context.
pub fn monomial_string(ctx: &VarContext, exps: &[i64]) -> String {
    if exps.iter().all(|&e| e == 0) {
        return "1".to_string();
    }
    let mut out = String::new();
    write_monomial(&mut out, ctx, exps);
    out
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

struct Lexer<'a> {
    input: &'a [u8],
    pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Number(String),
    Ident(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Plus => write!(f, "+"),
            Token::Minus => write!(f, "-"),
            Token::Star => write!(f, "*"),
            Token::Caret => write!(f, "^"),
            Token::Slash => write!(f, "/"),
            Token::Number(s) => write!(f, "{s}"),
            Token::Ident(s) => write!(f, "{s}"),
        }
    }
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Lexer {
            input: input.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<Option<(usize, Token)>, ParseError> {
        self.skip_ws();
        if self.pos >= self.input.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.input[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'^' => {
                self.pos += 1;
                Token::Caret
            }
            b'/' => {
                self.pos += 1;
                Token::Slash
            }
            b'0'..=b'9' => {
                while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                Token::Number(String::from_utf8_lossy(&self.input[start..self.pos]).into_owned())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < self.input.len()
                    && (self.input[self.pos].is_ascii_alphanumeric()
                        || self.input[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Token::Ident(String::from_utf8_lossy(&self.input[start..self.pos]).into_owned())
            }
            other => {
                return Err(ParseError {
                    position: start,
                    message: format!("syntax error: unexpected character '{}'", other as char),
                })
            }
        };
        Ok(Some((start, tok)))
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.cursor)
    }

    fn bump(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let position = self.peek().map(|(p, _)| *p).unwrap_or(self.end);
        ParseError {
            position,
            message: message.into(),
        }
    }

    fn expect_number(&mut self) -> Result<(usize, BigInt), ParseError> {
        match self.bump() {
            Some((p, Token::Number(s))) => Ok((p, s.parse::<BigInt>().expect("digits"))),
            Some((p, tok)) => Err(ParseError {
                position: p,
                message: format!("syntax error: expected a number, found '{tok}'"),
            }),
            None => Err(ParseError {
                position: self.end,
                message: "syntax error: expected a number, found end of input".into(),
            }),
        }
    }

    /// rational := digits ('/' positive-digits)?
    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let (_, numer) = self.expect_number()?;
        if matches!(self.peek(), Some((_, Token::Slash))) {
            self.bump();
            let (p, denom) = self.expect_number()?;
            if denom.is_zero() {
                return Err(ParseError {
                    position: p,
                    message: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    /// integer := ('-')? digits
    fn integer(&mut self) -> Result<i64, ParseError> {
        let negative = if matches!(self.peek(), Some((_, Token::Minus))) {
            self.bump();
            true
        } else {
            false
        };
        let (p, mag) = self.expect_number()?;
        let value = i64::try_from(&mag).map_err(|_| ParseError {
            position: p,
            message: format!("exponent {mag} out of range"),
        })?;
        Ok(if negative { -value } else { value })
    }

    /// factor := rational | var ('^' integer)?
    fn factor(&mut self, ctx: &Arc<VarContext>) -> Result<LaurentPoly, ParseError> {
        match self.peek().cloned() {
            Some((_, Token::Number(_))) => {
                let q = self.rational()?;
                Ok(LaurentPoly::constant(ctx, q))
            }
            Some((p, Token::Ident(name))) => {
                self.bump();
                let index = ctx.index_of(&name).ok_or_else(|| ParseError {
                    position: p,
                    message: format!("unknown variable '{name}'"),
                })?;
                let exponent = if matches!(self.peek(), Some((_, Token::Caret))) {
                    self.bump();
                    let ep = self.peek().map(|(p, _)| *p).unwrap_or(self.end);
                    let e = self.integer()?;
                    if ctx.kind() == RingKind::Polynomial && e < 0 {
                        return Err(ParseError {
                            position: ep,
                            message: format!(
                                "negative exponent {e} on '{name}' in a polynomial ring"
                            ),
                        });
                    }
                    e
                } else {
                    1
                };
                let mut exps = vec![0; ctx.arity()];
                exps[index] = exponent;
                Ok(LaurentPoly::monomial(ctx, exps, BigRational::one())
                    .expect("validated exponent"))
            }
            Some((p, tok)) => Err(ParseError {
                position: p,
                message: format!("syntax error: unexpected token '{tok}'"),
            }),
            None => Err(ParseError {
                position: self.end,
                message: "syntax error: unexpected end of input".into(),
            }),
        }
    }

    /// term := factor ('*' factor)*
    fn term(&mut self, ctx: &Arc<VarContext>) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.factor(ctx)?;
        while matches!(self.peek(), Some((_, Token::Star))) {
            self.bump();
            let rhs = self.factor(ctx)?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    /// expr := ('+'|'-')? term (('+'|'-') term)*
    fn expr(&mut self, ctx: &Arc<VarContext>) -> Result<LaurentPoly, ParseError> {
        let mut negate_first = false;
        match self.peek() {
            Some((_, Token::Plus)) => {
                self.bump();
            }
            Some((_, Token::Minus)) => {
                self.bump();
                negate_first = true;
            }
            _ => {}
        }
        let first = self.term(ctx)?;
        let mut acc = if negate_first { -first } else { first };
        loop {
            match self.peek() {
                Some((_, Token::Plus)) => {
                    self.bump();
                    let t = self.term(ctx)?;
                    acc = &acc + &t;
                }
                Some((_, Token::Minus)) => {
                    self.bump();
                    let t = self.term(ctx)?;
                    acc = &acc - &t;
                }
                Some((p, tok)) => {
                    return Err(ParseError {
                        position: *p,
                        message: format!("syntax error: unexpected token '{tok}'"),
                    })
                }
                None => return Ok(acc),
            }
        }
    }
}

/// Parse an expression in the ring's grammar into canonical form.
pub fn parse(text: &str, ctx: &Arc<VarContext>) -> Result<LaurentPoly, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next()? {
        tokens.push(t);
    }
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end: text.len(),
    };
    if parser.peek().is_none() {
        return Err(parser.error_here("syntax error: empty expression"));
    }
    parser.expr(ctx)
}
