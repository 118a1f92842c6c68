//! Sparse homogeneous polynomials with exact (or float) coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic with `x > y > z` and largest first, so two equal
//! polynomials are structurally equal and print identically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Deref, Neg};

use num_traits::{FromPrimitive, Num, One, Signed, Zero};
use thiserror::Error;

use crate::exact_linalg::Matrix;
use crate::rational::{self, format_rational, parse_rational, Rational, RationalParseError};

/// Upper bound on the degree accepted by [`Homogeneous::pullback`].
pub const MAX_PULLBACK_DEGREE: u32 = 64;

/// Coefficient ring requirements: exact rationals or `f64`.
pub trait Coeff: Clone + fmt::Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive {}

impl<T> Coeff for T where T: Clone + fmt::Debug + PartialEq + Num + Neg<Output = T> + FromPrimitive {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Literal(#[from] RationalParseError),
    #[error("polynomial is not homogeneous: `{first}` has degree {first_degree} but `{second}` has degree {second_degree}")]
    MixedDegree {
        first: String,
        first_degree: u32,
        second: String,
        second_degree: u32,
    },
    #[error("degree {0} exceeds the pullback limit of {MAX_PULLBACK_DEGREE}")]
    DegreeTooLarge(u32),
    #[error("expected {expected} variables, got {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("exponent sum {sum} does not match degree {degree}")]
    ExponentSum { sum: u32, degree: u32 },
    #[error("line direction must be nonzero")]
    ZeroDirection,
    #[error("point is not on the zero set (h(p) = {0})")]
    NotOnZeroSet(String),
}

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Graded lexicographic comparison (`x > y > z`).
    pub fn grlex_cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }

    fn product(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    /// Reversed so that map iteration starts at the grlex-largest monomial.
    fn cmp(&self, other: &Self) -> Ordering {
        other.grlex_cmp(self)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree `degree` in `nvars` variables,
/// in graded-lex order (largest first).
pub fn monomial_basis(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(remaining);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(nvars, remaining - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Homogeneous polynomial: every stored monomial has total degree `degree`
/// and every stored coefficient is nonzero.
#[derive(Clone, PartialEq)]
pub struct Homogeneous<C> {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, C>,
}

pub type HomogeneousPoly = Homogeneous<Rational>;
pub type FloatPoly = Homogeneous<f64>;

impl<C: Coeff> Homogeneous<C> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn monomial(c: C, exponents: Vec<u32>) -> Self {
        let nvars = exponents.len();
        let m = Monomial(exponents);
        let mut p = Self::zero(nvars, m.degree());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The linear form `Σ coeffs[i] · x_i`.
    pub fn linear(coeffs: &[C]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(C::one(), e)
    }

    /// Builds a polynomial from explicit terms, checking exponent sums.
    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, C)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::VariableCount {
                    expected: nvars,
                    got: e.len(),
                });
            }
            let m = Monomial(e);
            if m.degree() != degree {
                return Err(PolyError::ExponentSum {
                    sum: m.degree(),
                    degree,
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order, largest first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> C {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Coefficient vector in the basis returned by [`monomial_basis`].
    pub fn coefficient_vector(&self) -> Vec<C> {
        monomial_basis(self.nvars, self.degree)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(C::zero))
            .collect()
    }

    pub fn from_coefficient_vector(nvars: usize, degree: u32, coeffs: &[C]) -> Self {
        let basis = monomial_basis(nvars, degree);
        assert_eq!(basis.len(), coeffs.len(), "coefficient vector length");
        let mut p = Self::zero(nvars, degree);
        for (m, c) in basis.into_iter().zip(coeffs) {
            p.add_term(m, c.clone());
        }
        p
    }

    pub fn map_coefficients<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Homogeneous<D> {
        let mut p = Homogeneous::zero(self.nvars, self.degree);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map_coefficients(|c| c.clone() * s.clone())
    }

    /// Sum of two polynomials of the same degree; panics on a degree mismatch
    /// unless one side is zero.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&-other.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut p = Self::zero(self.nvars, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                p.add_term(ma.product(mb), ca.clone() * cb.clone());
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(self.nvars, C::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "point dimension");
        self.terms.iter().fold(C::zero(), |acc, (m, c)| {
            let term = m
                .0
                .iter()
                .zip(point)
                .fold(c.clone(), |t, (&e, x)| t * num_traits::pow(x.clone(), e as usize));
            acc + term
        })
    }

    /// Partial derivative along `axis`; the derivative of a constant is the
    /// zero polynomial of degree 0.
    pub fn partial(&self, axis: usize) -> Self {
        assert!(axis < self.nvars, "axis out of range");
        let mut p = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[axis];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[axis] -= 1;
            let factor = C::from_u32(e).expect("exponent fits coefficient type");
            p.add_term(Monomial(exps), c.clone() * factor);
        }
        p
    }

    pub fn gradient_polys(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    pub fn gradient(&self, point: &[C]) -> Vec<C> {
        (0..self.nvars).map(|i| self.partial(i).eval(point)).collect()
    }

    pub fn hessian(&self, point: &[C]) -> Matrix<C> {
        let grads = self.gradient_polys();
        let n = self.nvars;
        let mut h = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = grads[i].partial(j).eval(point);
                *h.get_mut(i, j) = v.clone();
                *h.get_mut(j, i) = v;
            }
        }
        h
    }

    /// `u ↦ h(A·u)`, expanded exactly. `A` need not be invertible.
    pub fn pullback(&self, a: &Matrix<C>) -> Result<Self, PolyError> {
        if self.degree > MAX_PULLBACK_DEGREE {
            return Err(PolyError::DegreeTooLarge(self.degree));
        }
        if a.rows() != self.nvars {
            return Err(PolyError::VariableCount {
                expected: self.nvars,
                got: a.rows(),
            });
        }
        let target_vars = a.cols();
        let forms: Vec<Self> = (0..self.nvars).map(|i| Self::linear(a.row(i))).collect();
        let max_exp: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Self>> = forms
            .iter()
            .zip(&max_exp)
            .map(|(f, &top)| {
                let mut v = vec![Self::constant(target_vars, C::one())];
                for _ in 0..top {
                    let next = v.last().expect("nonempty").mul(f);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(target_vars, self.degree);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize]);
                }
            }
            // Terms of a degenerate substitution may vanish entirely.
            if term.is_zero() {
                continue;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Coefficients (ascending in `t`) of `t ↦ h(p + t v)`.
    pub fn restrict_to_line(&self, p: &[C], v: &[C]) -> Result<Univariate<C>, PolyError> {
        assert_eq!(p.len(), self.nvars, "point dimension");
        assert_eq!(v.len(), self.nvars, "direction dimension");
        if v.iter().all(Zero::is_zero) {
            return Err(PolyError::ZeroDirection);
        }
        let lines: Vec<Univariate<C>> = p
            .iter()
            .zip(v)
            .map(|(a, b)| Univariate::new(vec![a.clone(), b.clone()]))
            .collect();
        let mut total = Univariate::zero();
        for (m, c) in &self.terms {
            let mut term = Univariate::new(vec![c.clone()]);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&lines[i]);
                }
            }
            total = total.add(&term);
        }
        Ok(total)
    }

    /// Order of vanishing of `t ↦ h(p + t v)` at `t = 0`.
    pub fn vanishing_order(&self, p: &[C], v: &[C]) -> Result<VanishingOrder, PolyError> {
        let value = self.eval(p);
        if !value.is_zero() {
            return Err(PolyError::NotOnZeroSet(format!("{value:?}")));
        }
        let line = self.restrict_to_line(p, v)?;
        Ok(match line.lowest_degree() {
            Some(d) => VanishingOrder::Finite(d),
            None => VanishingOrder::Infinite,
        })
    }
}

impl<C: Coeff> Neg for Homogeneous<C> {
    type Output = Self;

    fn neg(self) -> Self {
        self.map_coefficients(|c| -c.clone())
    }
}

/// Order of a zero along a line, or `Infinite` when the restriction is
/// identically zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingOrder {
    Finite(usize),
    Infinite,
}

/// Dense univariate polynomial, coefficients ascending, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Univariate<C>(Vec<C>);

impl<C: Coeff> Univariate<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn coefficients(&self) -> &[C] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// Constant polynomials (including zero).
    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn eval(&self, t: &C) -> C {
        self.0
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.0.get(i).cloned().unwrap_or_else(C::zero);
                let b = other.0.get(i).cloned().unwrap_or_else(C::zero);
                a + b
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

/// Exact vector in ℝⁿ⁺¹ (three entries throughout this crate).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalVector(Vec<Rational>);

pub type RationalPoint = RationalVector;

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        Self(entries.iter().map(|&x| rational::int(x)).collect())
    }

    /// Comma-separated rationals, e.g. `1,0,-1/2`.
    pub fn parse(text: &str) -> Result<Self, RationalParseError> {
        text.split(',')
            .map(|s| parse_rational(s, false).map(|(q, _)| q))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(other)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational::to_f64).collect()
    }
}

impl Deref for RationalVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        Self(v)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn variable_names(nvars: usize) -> Vec<String> {
    if nvars == 3 {
        vec!["x".into(), "y".into(), "z".into()]
    } else {
        (1..=nvars).map(|i| format!("y{i}")).collect()
    }
}

fn monomial_text(m: &Monomial, names: &[String]) -> String {
    let factors: Vec<String> = m
        .0
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    factors.join("*")
}

/// Writes terms as `c*m` with sign separators; `coeff` yields (negative, |c|
/// text, |c| == 1).
fn write_terms<C>(
    f: &mut fmt::Formatter<'_>,
    p: &Homogeneous<C>,
    coeff: impl Fn(&C) -> (bool, String, bool),
) -> fmt::Result {
    if p.terms.is_empty() {
        return write!(f, "0");
    }
    let names = variable_names(p.nvars);
    for (i, (m, c)) in p.terms.iter().enumerate() {
        let (negative, abs, unit) = coeff(c);
        let mono = monomial_text(m, &names);
        match (i, negative) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        if mono.is_empty() {
            write!(f, "{abs}")?;
        } else if unit {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{abs}*{mono}")?;
        }
    }
    Ok(())
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self, |c| {
            let abs = c.abs();
            (c.is_negative(), format_rational(&abs), abs.is_one())
        })
    }
}

impl fmt::Debug for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FloatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self, |c| {
            (*c < 0.0, rational::format_sig12(c.abs()), c.abs() == 1.0)
        })
    }
}

impl fmt::Debug for FloatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl HomogeneousPoly {
    /// Parses with exact literals only (`a` or `a/b`).
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        Ok(parse_polynomial(text, false)?.poly)
    }

    pub fn to_f64(&self) -> FloatPoly {
        self.map_coefficients(rational::to_f64)
    }
}

impl std::str::FromStr for HomogeneousPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Result of parsing polynomial source text.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub poly: HomogeneousPoly,
    /// True when a decimal literal was read (its exact value is used).
    pub inexact: bool,
}

/// Parses polynomial source text in `x`, `y`, `z`.
///
/// Grammar: sums and differences of products of factors; a factor is a
/// literal (`a`, `a/b`, or `a.b` when `allow_decimal`), a variable, or a
/// parenthesised expression, optionally raised to a nonnegative integer power.
pub fn parse_polynomial(text: &str, allow_decimal: bool) -> Result<Parsed, PolyError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        allow_decimal,
        inexact: false,
    };
    let sparse = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    let poly = homogenize(sparse)?;
    Ok(Parsed {
        poly,
        inexact: parser.inexact,
    })
}

type Sparse = BTreeMap<Monomial, Rational>;

fn sparse_add(a: &mut Sparse, b: Sparse, sign: bool) {
    for (m, c) in b {
        let c = if sign { c } else { -c };
        let entry = a.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            a.remove(&m);
        }
    }
}

fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.product(mb);
            let entry = out.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += ca * cb;
            if entry.is_zero() {
                out.remove(&m);
            }
        }
    }
    out
}

fn sparse_constant(c: Rational) -> Sparse {
    let mut s = Sparse::new();
    if !c.is_zero() {
        s.insert(Monomial(vec![0; 3]), c);
    }
    s
}

fn homogenize(sparse: Sparse) -> Result<HomogeneousPoly, PolyError> {
    let mut iter = sparse.iter();
    let Some((first, _)) = iter.next() else {
        return Ok(HomogeneousPoly::zero(3, 0));
    };
    let degree = first.degree();
    if let Some((other, _)) = iter.find(|(m, _)| m.degree() != degree) {
        let names = variable_names(3);
        let show = |m: &Monomial| {
            let s = monomial_text(m, &names);
            if s.is_empty() {
                "1".to_string()
            } else {
                s
            }
        };
        return Err(PolyError::MixedDegree {
            first: show(first),
            first_degree: degree,
            second: show(other),
            second_degree: other.degree(),
        });
    }
    let mut p = HomogeneousPoly::zero(3, degree);
    p.terms = sparse;
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allow_decimal: bool,
    inexact: bool,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = Sparse::new();
        let mut sign = true;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            sign = c == b'+';
            self.pos += 1;
        }
        loop {
            let term = self.term()?;
            sparse_add(&mut acc, term, sign);
            match self.peek() {
                Some(c @ (b'+' | b'-')) => {
                    sign = c == b'+';
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = sparse_mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Sparse, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let e: u32 = text.parse().map_err(|_| self.error("exponent too large"))?;
        if e > 4 * MAX_PULLBACK_DEGREE {
            return Err(self.error("exponent too large"));
        }
        let mut acc = sparse_constant(Rational::one());
        for _ in 0..e {
            acc = sparse_mul(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Sparse, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                // Signed factor after `*`, e.g. `2*-x`.
                self.pos += 1;
                let inner = self.power()?;
                Ok(sparse_mul(&sparse_constant(-Rational::one()), &inner))
            }
            Some(c @ (b'x' | b'y' | b'z')) => {
                self.pos += 1;
                let mut e = vec![0; 3];
                e[(c - b'x') as usize] = 1;
                let mut s = Sparse::new();
                s.insert(Monomial(e), Rational::one());
                Ok(s)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Sparse, PolyError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        } else {
            // `a/b` only when a digit follows the slash.
            let save = self.pos;
            self.skip_ws();
            if self.src.get(self.pos) == Some(&b'/') {
                self.pos += 1;
                self.skip_ws();
                let dstart = self.pos;
                digits(self);
                if dstart == self.pos {
                    return Err(self.error("expected denominator"));
                }
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii literal");
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (value, inexact) = parse_rational(&text, self.allow_decimal)?;
        self.inexact |= inexact;
        Ok(sparse_constant(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::RationalMatrix;

    fn p(s: &str) -> HomogeneousPoly {
        HomogeneousPoly::parse(s).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn parse_examples() {
        let h = p("x^2 - y^2 - z^2");
        assert_eq!(h.degree(), 2);
        let expected = HomogeneousPoly::from_terms(
            3,
            2,
            [(vec![2, 0, 0], int(1)), (vec![0, 2, 0], int(-1)), (vec![0, 0, 2], int(-1))],
        )
        .unwrap();
        assert_eq!(h, expected);
        assert_eq!(p("x*y*z"), HomogeneousPoly::monomial(int(1), vec![1, 1, 1]));
        assert_eq!(p("-1/2*x*y^2").coefficient(&[1, 2, 0]), rat(-1, 2));
        match HomogeneousPoly::parse("x^2 + y") {
            Err(PolyError::MixedDegree {
                first, second, first_degree, second_degree,
            }) => {
                assert_eq!((first.as_str(), first_degree), ("x^2", 2));
                assert_eq!((second.as_str(), second_degree), ("y", 1));
            }
            other => panic!("expected mixed-degree error, got {other:?}"),
        }
    }

    #[test]
    fn parse_products_and_syntax_errors() {
        assert_eq!(p("(x+z)*(x^2-y^2-z^2)"), p("x^3 + x^2*z - x*y^2 - x*z^2 - y^2*z - z^3"));
        assert_eq!(p("(x^2-y^2-z^2)^2"), p("(x^2-y^2-z^2)*(x^2-y^2-z^2)"));
        assert_eq!(p("2*-x"), p("-2*x"));
        assert!(matches!(HomogeneousPoly::parse("x^"), Err(PolyError::Syntax { .. })));
        assert!(matches!(HomogeneousPoly::parse("x + w"), Err(PolyError::Syntax { .. })));
        assert!(matches!(HomogeneousPoly::parse("(x"), Err(PolyError::Syntax { .. })));
        assert!(matches!(
            HomogeneousPoly::parse("0.5*x"),
            Err(PolyError::Literal(RationalParseError::DecimalNotAllowed(_)))
        ));
        let parsed = parse_polynomial("0.5*x + y", true).unwrap();
        assert!(parsed.inexact);
        assert_eq!(parsed.poly, p("1/2*x + y"));
    }

    #[test]
    fn display_round_trips() {
        for s in ["x^2 - y^2 - z^2", "-1/2*x*y^2", "x*y*z", "3", "0", "-x^3 + 7/3*y*z^2"] {
            let h = p(s);
            assert_eq!(p(&h.to_string()), h, "{s}");
        }
        assert_eq!(p("-1/2*x*y^2").to_string(), "-1/2*x*y^2");
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("(x^2-y^2-z^2)^2").eval(&pt(&[1, 0, 0])), int(1));
        assert_eq!(p("x*y*z").eval(&pt(&[1, 1, 1])), int(1));
        assert_eq!(p("(x+z)*(x^2-y^2-z^2)").eval(&pt(&[1, 0, 0])), int(1));
    }

    #[test]
    fn hessian_of_family_ii_cubic() {
        let h = p("(x+z)*(x^2-y^2-z^2)");
        let neg = h.hessian(&pt(&[1, 0, 0])).scale(&int(-1));
        assert_eq!(neg, RationalMatrix::from_i64_rows(&[&[-6, 0, -2], &[0, 2, 0], &[-2, 0, 2]]));
    }

    #[test]
    fn gradient_of_monomial_at_ones() {
        // z^{τ-k} x^{k-ℓ} y^ℓ with τ=7, k=4, ℓ=1
        let h = HomogeneousPoly::monomial(int(1), vec![3, 1, 3]);
        assert_eq!(h.gradient(&pt(&[1, 1, 1])), pt(&[3, 1, 3]));
    }

    #[test]
    fn hessian_of_pure_power() {
        let h = HomogeneousPoly::monomial(int(1), vec![5, 0, 0]);
        let hess = h.hessian(&[int(2), int(0), int(0)]);
        assert_eq!(hess.get(0, 0), &int(5 * 4 * 8));
        assert_eq!(hess.entries().iter().filter(|x| !x.is_zero()).count(), 1);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let c = HomogeneousPoly::constant(3, int(4));
        let d = c.partial(1);
        assert!(d.is_zero());
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn pullback_identity_and_signed_permutation() {
        let h = p("x^3 - 2*x*y*z + y^2*z");
        assert_eq!(h.pullback(&RationalMatrix::identity(3)).unwrap(), h);
        // (x, y, z) -> (-y, z, x)
        let perm = RationalMatrix::from_i64_rows(&[&[0, -1, 0], &[0, 0, 1], &[1, 0, 0]]);
        assert_eq!(h.pullback(&perm).unwrap(), p("-y^3 + 2*x*y*z + x*z^2"));
    }

    #[test]
    fn pullback_to_catalog_coordinates() {
        // z^{τ-2k}(zx - y²)^k under (x,y,z) -> (x-z, y, x+z) is the family (ii)
        // polynomial; the √2 rescaling of y is folded into the coefficient of y².
        let change = RationalMatrix::from_i64_rows(&[&[1, 0, -1], &[0, 1, 0], &[1, 0, 1]]);
        for (tau, k) in [(3u32, 1u32), (5, 2), (6, 1), (7, 3)] {
            let z = HomogeneousPoly::variable(3, 2);
            let original = z.pow(tau - 2 * k).mul(&p("z*x - y^2").pow(k));
            let catalog = p("x+z").pow(tau - 2 * k).mul(&p("x^2-y^2-z^2").pow(k));
            assert_eq!(original.pullback(&change).unwrap(), catalog, "tau={tau} k={k}");
        }
    }

    #[test]
    fn pullback_degree_guard() {
        let h = HomogeneousPoly::monomial(int(1), vec![65, 0, 0]);
        assert_eq!(
            h.pullback(&RationalMatrix::identity(3)),
            Err(PolyError::DegreeTooLarge(65))
        );
    }

    #[test]
    fn restrict_to_line_examples() {
        let line = p("x*y*z").restrict_to_line(&pt(&[1, 1, 1]), &pt(&[1, 0, 0])).unwrap();
        assert_eq!(line.coefficients(), &pt(&[1, 1])[..]);
        let line = p("(x^2-y^2-z^2)^2")
            .restrict_to_line(&pt(&[1, 0, 0]), &pt(&[0, 1, 0]))
            .unwrap();
        assert_eq!(line.coefficients(), &pt(&[1, 0, -2, 0, 1])[..]);
        // x^τ is constant along (1,0,0) + t(0,1,0): the forbidden "ray" case.
        let line = p("x^4").restrict_to_line(&pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap();
        assert!(line.is_constant());
        assert_eq!(
            p("x").restrict_to_line(&pt(&[1, 0, 0]), &pt(&[0, 0, 0])),
            Err(PolyError::ZeroDirection)
        );
    }

    #[test]
    fn vanishing_order_examples() {
        let h = p("(x+z)^3*(x^2-y^2-z^2)");
        assert_eq!(
            h.vanishing_order(&pt(&[1, 1, -1]), &pt(&[1, 0, 0])).unwrap(),
            VanishingOrder::Finite(3)
        );
        assert_eq!(
            p("x*y*z").vanishing_order(&pt(&[0, 1, 1]), &pt(&[1, 0, 0])).unwrap(),
            VanishingOrder::Finite(1)
        );
        assert_eq!(
            p("x^2*y*z").vanishing_order(&pt(&[0, 1, 1]), &pt(&[1, 0, 0])).unwrap(),
            VanishingOrder::Finite(2)
        );
        assert_eq!(
            p("x*y*z").vanishing_order(&pt(&[0, 1, 1]), &pt(&[0, 1, 0])).unwrap(),
            VanishingOrder::Infinite
        );
        assert!(matches!(
            p("x*y*z").vanishing_order(&pt(&[1, 1, 1]), &pt(&[1, 0, 0])),
            Err(PolyError::NotOnZeroSet(_))
        ));
    }

    #[test]
    fn monomial_basis_is_grlex() {
        let basis = monomial_basis(3, 2);
        let text: Vec<String> = basis
            .iter()
            .map(|m| monomial_text(m, &variable_names(3)))
            .collect();
        assert_eq!(text, ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]);
        assert_eq!(monomial_basis(3, 10).len(), 66);
    }
}
