//! Infinitesimal linear symmetries: the Lie-derivative operator on
//! homogeneous polynomials, exact invariant subspaces, and bracket and
//! orbit-rank checks.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact_linalg::RationalMatrix;
use crate::polyring::{monomial_basis, HomogeneousPoly, RationalVector};
use crate::rational::{format_rational, int, parse_rational, Rational, RationalParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("{generator}: parameter out of range, need {constraint} (got {value})")]
    ParameterOutOfRange {
        generator: &'static str,
        constraint: &'static str,
        value: String,
    },
    #[error("generator matrix must be 3x3, got {0}x{1}")]
    Shape(usize, usize),
    #[error(transparent)]
    Parse(#[from] RationalParseError),
}

/// A 3×3 rational matrix acting on `ℝ³`, optionally named.
#[derive(Clone, PartialEq)]
pub struct LieGen {
    pub matrix: RationalMatrix,
    pub label: Option<String>,
}

impl fmt::Debug for LieGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label.as_deref().unwrap_or("X"), self.matrix)
    }
}

fn out_of_range(generator: &'static str, constraint: &'static str, value: &Rational) -> SymmetryError {
    SymmetryError::ParameterOutOfRange {
        generator,
        constraint,
        value: format_rational(value),
    }
}

fn diag3(a: Rational, b: Rational, c: Rational) -> RationalMatrix {
    RationalMatrix::diagonal(&[a, b, c])
}

impl LieGen {
    pub fn new(matrix: RationalMatrix, label: Option<&str>) -> Result<Self, SymmetryError> {
        if matrix.rows() != 3 || matrix.cols() != 3 {
            return Err(SymmetryError::Shape(matrix.rows(), matrix.cols()));
        }
        Ok(LieGen {
            matrix,
            label: label.map(str::to_string),
        })
    }

    fn named(matrix: RationalMatrix, label: impl Into<String>) -> Self {
        LieGen {
            matrix,
            label: Some(label.into()),
        }
    }

    /// Parses nine rational entries, rows separated by `;` and entries by `,`.
    /// Surrounding brackets are ignored: `[[0,1,0],[0,0,1],[0,0,0]]` also works.
    pub fn parse(text: &str) -> Result<Self, SymmetryError> {
        let cleaned: String = text
            .chars()
            .map(|c| if c == '[' || c == ']' { ' ' } else { c })
            .collect();
        let entries = cleaned
            .split([',', ';'])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_rational(s, false).map(|(q, _)| q))
            .collect::<Result<Vec<_>, _>>()?;
        if entries.len() != 9 {
            return Err(SymmetryError::Shape(entries.len() / 3, 3));
        }
        Ok(LieGen {
            matrix: RationalMatrix::from_vec(3, 3, entries).expect("nine entries"),
            label: None,
        })
    }

    /// Nilpotent shift `(x, y, z) ↦ (y, z, 0)`.
    pub fn a1() -> Self {
        Self::named(RationalMatrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]), "a1")
    }

    pub fn a2(mu: Rational) -> Result<Self, SymmetryError> {
        if mu.is_zero() {
            return Err(out_of_range("a2", "mu != 0", &mu));
        }
        let mut m = RationalMatrix::zeros(3, 3);
        *m.get_mut(0, 1) = int(1);
        *m.get_mut(2, 2) = mu;
        Ok(Self::named(m, "a2"))
    }

    pub fn a3(mu: Rational) -> Result<Self, SymmetryError> {
        if !mu.is_negative() {
            return Err(out_of_range("a3", "mu < 0", &mu));
        }
        let mut m = diag3(int(1), int(1), mu);
        *m.get_mut(0, 1) = int(1);
        Ok(Self::named(m, "a3"))
    }

    pub fn a4(lambda: Rational, mu: Rational) -> Result<Self, SymmetryError> {
        if lambda.is_negative() {
            return Err(out_of_range("a4", "lambda >= 0", &lambda));
        }
        if !mu.is_negative() {
            return Err(out_of_range("a4", "mu < 0", &mu));
        }
        Ok(Self::named(diag3(int(1), lambda, mu), "a4"))
    }

    pub fn a5(lambda: Rational, mu: Rational) -> Result<Self, SymmetryError> {
        if lambda.is_negative() {
            return Err(out_of_range("a5", "lambda >= 0", &lambda));
        }
        if !mu.is_negative() {
            return Err(out_of_range("a5", "mu < 0", &mu));
        }
        let mut m = diag3(lambda.clone(), lambda, mu);
        *m.get_mut(0, 1) = int(-1);
        *m.get_mut(1, 0) = int(1);
        Ok(Self::named(m, "a5"))
    }

    /// Rotation about the `z` axis.
    pub fn a6() -> Self {
        Self::named(RationalMatrix::from_i64_rows(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]), "a6")
    }

    /// `diag(b − 1, b, b + 1)`: the partner of `a1` with `[a1, B] = a1`,
    /// off-diagonal entry normalized away.
    pub fn affine_b(b: Rational) -> Result<Self, SymmetryError> {
        if b <= int(-1) || b >= int(1) {
            return Err(out_of_range("B", "-1 < b < 1", &b));
        }
        Ok(Self::named(diag3(&b - int(1), b.clone(), &b + int(1)), "B"))
    }

    /// `(A1, B1) = (diag(1, 0, a), diag(0, 1, b))`.
    pub fn g1(a: Rational, b: Rational) -> Result<[Self; 2], SymmetryError> {
        if !a.is_negative() {
            return Err(out_of_range("g1", "a < 0", &a));
        }
        if !b.is_negative() {
            return Err(out_of_range("g1", "b < 0", &b));
        }
        Ok([
            Self::named(diag3(int(1), int(0), a), "A1"),
            Self::named(diag3(int(0), int(1), b), "B1"),
        ])
    }

    /// `(A2, B2) = (diag(1, 1, a), rot + diag(0, 0, b))`.
    pub fn g2(a: Rational, b: Rational) -> Result<[Self; 2], SymmetryError> {
        if !a.is_negative() {
            return Err(out_of_range("g2", "a < 0", &a));
        }
        if !b.is_negative() {
            return Err(out_of_range("g2", "b < 0", &b));
        }
        let mut b2 = diag3(int(0), int(0), b);
        *b2.get_mut(0, 1) = int(-1);
        *b2.get_mut(1, 0) = int(1);
        Ok([
            Self::named(diag3(int(1), int(1), a), "A2"),
            Self::named(b2, "B2"),
        ])
    }

    /// Basis of `so(2,1)` for the form `x² − y² − z²`: one rotation, two boosts.
    pub fn so21() -> [Self; 3] {
        [
            Self::named(RationalMatrix::from_i64_rows(&[&[0, 0, 0], &[0, 0, -1], &[0, 1, 0]]), "R"),
            Self::named(RationalMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]), "K1"),
            Self::named(RationalMatrix::from_i64_rows(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]), "K2"),
        ]
    }

    /// Affine pair `(A, B)` with `[A, B] = A` annihilating
    /// `(x + z)^{τ−2k} (x² − y² − z²)^k`.
    pub fn family_ii_pair(tau: u32, k: u32) -> Result<[Self; 2], SymmetryError> {
        if k == 0 || 2 * k > tau {
            return Err(out_of_range("family (ii)", "1 <= k <= tau/2", &int(k as i64)));
        }
        let b = Rational::new((2 * k as i64 - tau as i64).into(), (tau as i64).into());
        let a = RationalMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 1], &[0, -1, 0]]);
        let mut bm = diag3(b.clone(), b.clone(), b);
        *bm.get_mut(0, 2) = int(1);
        *bm.get_mut(2, 0) = int(1);
        Ok([Self::named(a, "A"), Self::named(bm, "B")])
    }

    /// Weight generators `(A1, B1)` annihilating `x^α y^β z^γ`, `γ > 0`.
    pub fn monomial_pair(exponents: [u32; 3]) -> Result<[Self; 2], SymmetryError> {
        let [alpha, beta, gamma] = exponents.map(|e| e as i64);
        if gamma == 0 {
            return Err(out_of_range("g1", "z exponent > 0", &int(0)));
        }
        Self::g1(Rational::new((-alpha).into(), gamma.into()), Rational::new((-beta).into(), gamma.into()))
    }

    pub fn apply(&self, v: &[Rational]) -> RationalVector {
        RationalVector::new(self.matrix.mul_vec(v))
    }
}

/// `u ↦ dh_u(B u)`.
pub fn lie_derivative(h: &HomogeneousPoly, b: &LieGen) -> HomogeneousPoly {
    lie_derivative_matrix(h, &b.matrix)
}

fn lie_derivative_matrix(h: &HomogeneousPoly, b: &RationalMatrix) -> HomogeneousPoly {
    let n = h.nvars();
    let mut out = HomogeneousPoly::zero(n, h.degree());
    if h.degree() == 0 || h.is_zero() {
        return out;
    }
    for (i, dh) in h.gradient_polys().into_iter().enumerate() {
        if dh.is_zero() {
            continue;
        }
        let row: Vec<Rational> = b.row(i).to_vec();
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        out = out.add(&dh.mul(&HomogeneousPoly::linear(&row)));
    }
    out
}

/// Matrix of [`lie_derivative`] on degree-`tau` polynomials in the basis of
/// [`monomial_basis`]; size `N × N` with `N = (τ+1)(τ+2)/2`.
pub fn lie_operator_matrix(b: &LieGen, tau: u32) -> RationalMatrix {
    let basis = monomial_basis(3, tau);
    let n = basis.len();
    let columns: Vec<Vec<Rational>> = basis
        .iter()
        .map(|m| {
            let mono = HomogeneousPoly::monomial(int(1), m.exponents().to_vec());
            lie_derivative(&mono, b).coefficient_vector()
        })
        .collect();
    RationalMatrix::from_fn(n, n, |i, j| columns[j][i].clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantBasis {
    pub degree: u32,
    pub generators: Vec<LieGen>,
    pub basis: Vec<HomogeneousPoly>,
    pub dimension: usize,
}

/// Exact joint kernel of the Lie operators of `generators` in degree `tau`.
pub fn invariant_space(generators: &[LieGen], tau: u32) -> InvariantBasis {
    let n = monomial_basis(3, tau).len();
    let stacked = generators
        .iter()
        .map(|g| lie_operator_matrix(g, tau))
        .fold(RationalMatrix::zeros(0, n), |acc, m| acc.vstack(&m).expect("same width"));
    let basis: Vec<HomogeneousPoly> = if generators.is_empty() {
        (0..n)
            .map(|i| {
                let mut e = vec![Rational::zero(); n];
                e[i] = int(1);
                HomogeneousPoly::from_coefficient_vector(3, tau, &e)
            })
            .collect()
    } else {
        stacked
            .nullspace()
            .iter()
            .map(|v| HomogeneousPoly::from_coefficient_vector(3, tau, v))
            .collect()
    };
    InvariantBasis {
        degree: tau,
        generators: generators.to_vec(),
        dimension: basis.len(),
        basis,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketRelation {
    /// `[A, B] = 0`
    Abelian,
    /// `[A, B] = A`
    Affine,
}

pub fn bracket_relation_check(a: &LieGen, b: &LieGen, relation: BracketRelation) -> bool {
    let bracket = a.matrix.commutator(&b.matrix).expect("3x3 generators");
    match relation {
        BracketRelation::Abelian => bracket.is_zero(),
        BracketRelation::Affine => bracket == a.matrix,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitivityCheck {
    /// Every orbit direction `X p` is tangent to the level set through `p`.
    pub tangent_ok: bool,
    /// Dimension of `span{X p}`.
    pub rank: usize,
}

pub fn transitivity_rank(h: &HomogeneousPoly, p: &[Rational], generators: &[LieGen]) -> TransitivityCheck {
    let grad = h.gradient(p);
    let directions: Vec<Vec<Rational>> = generators.iter().map(|g| g.matrix.mul_vec(p)).collect();
    let tangent_ok = directions
        .iter()
        .all(|d| d.iter().zip(&grad).fold(Rational::zero(), |acc, (a, b)| acc + a * b).is_zero());
    let rank = if directions.is_empty() {
        0
    } else {
        RationalMatrix::from_rows(directions).rank()
    };
    TransitivityCheck { tangent_ok, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_integer::binomial;
    use proptest::prelude::*;

    fn p(s: &str) -> HomogeneousPoly {
        HomogeneousPoly::parse(s).unwrap()
    }

    /// `z^{τ−2k}(zx − y²/2)^k`
    fn affine_invariant(tau: u32, k: u32) -> HomogeneousPoly {
        p("z").pow(tau - 2 * k).mul(&p("z*x - 1/2*y^2").pow(k))
    }

    fn affine_b_for(tau: u32, k: u32) -> LieGen {
        LieGen::affine_b(rat(2 * k as i64 - tau as i64, tau as i64)).unwrap()
    }

    #[test]
    fn lie_derivative_examples() {
        assert!(lie_derivative(&p("x^2+y^2"), &LieGen::a6()).is_zero());
        assert!(lie_derivative(&p("z^3"), &LieGen::a1()).is_zero());
        // a1 (x,y,z) = (y,z,0): d(x^2)(y,z,0) = 2xy
        assert_eq!(lie_derivative(&p("x^2"), &LieGen::a1()), p("2*x*y"));
        let weights = LieGen::new(RationalMatrix::diagonal(&[int(1), rat(2, 3), int(-5)]), None).unwrap();
        assert_eq!(lie_derivative(&p("x*y*z"), &weights), p("x*y*z").scale(&rat(-10, 3)));
    }

    #[test]
    fn diagonal_generators_give_diagonal_operators() {
        let d = LieGen::new(RationalMatrix::diagonal(&[int(2), int(-1), rat(1, 2)]), None).unwrap();
        let m = lie_operator_matrix(&d, 4);
        let basis = monomial_basis(3, 4);
        assert_eq!(m.rows(), 15);
        for i in 0..15 {
            for j in 0..15 {
                let e = basis[i].exponents();
                let expected = if i == j {
                    int(2 * e[0] as i64) - int(e[1] as i64) + rat(e[2] as i64, 2)
                } else {
                    int(0)
                };
                assert_eq!(m.get(i, j), &expected);
            }
        }
    }

    #[test]
    fn rotation_invariants() {
        let space = invariant_space(&[LieGen::a6()], 3);
        assert_eq!(space.dimension, 2);
        for h in &space.basis {
            assert!(h == &p("z^3") || h == &p("x^2*z + y^2*z"), "{h}");
        }
        for tau in 1..=10 {
            assert_eq!(invariant_space(&[LieGen::a6()], tau).dimension, 1 + tau as usize / 2);
        }
    }

    #[test]
    fn shift_invariants_count() {
        for tau in 1..=12 {
            let space = invariant_space(&[LieGen::a1()], tau);
            assert_eq!(space.dimension, 1 + tau as usize / 2, "tau={tau}");
            for h in &space.basis {
                assert!(lie_derivative(h, &LieGen::a1()).is_zero());
            }
        }
    }

    #[test]
    fn affine_pair_has_one_invariant() {
        for tau in 3..=9 {
            for k in 1..=tau / 2 {
                let gens = [LieGen::a1(), affine_b_for(tau, k)];
                let space = invariant_space(&gens, tau);
                assert_eq!(space.dimension, 1, "tau={tau} k={k}");
                let expected = affine_invariant(tau, k);
                let found = &space.basis[0];
                let ratio = found.coefficient(&[k, 0, tau - k]) / expected.coefficient(&[k, 0, tau - k]);
                assert_eq!(found, &expected.scale(&ratio));
            }
        }
    }

    #[test]
    fn expansion_identity_uses_binomial_k_choose_m() {
        for tau in 3..=10u32 {
            for k in 1..=tau / 2 {
                let h = affine_invariant(tau, k);
                let lead = h.coefficient(&[k, 0, tau - k]);
                assert_eq!(lead, int(1));
                for m in 0..=k {
                    // z^{τ−k−m} x^{k−m} y^{2m}
                    let c = h.coefficient(&[k - m, 2 * m, tau - k - m]);
                    let expected = Rational::new((-1i64).pow(m).into(), 2i64.pow(m).into())
                        * int(binomial(k as i64, m as i64))
                        * &lead;
                    assert_eq!(c, expected, "tau={tau} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn weight_pairs_isolate_a_monomial() {
        for tau in 3..=7u32 {
            for k in 2..tau {
                for l in 1..k {
                    let a = rat(l as i64 - k as i64, (tau - k) as i64);
                    let b = rat(-(l as i64), (tau - k) as i64);
                    let space = invariant_space(&LieGen::g1(a, b).unwrap(), tau);
                    assert_eq!(space.dimension, 1);
                    assert_eq!(space.basis[0], HomogeneousPoly::monomial(int(1), vec![k - l, l, tau - k]));
                }
            }
        }
    }

    #[test]
    fn rotation_weight_pair_has_no_cubic_invariant() {
        let gens = LieGen::g2(int(-1), int(-1)).unwrap();
        assert_eq!(invariant_space(&gens, 3).dimension, 0);
    }

    #[test]
    fn lorentz_invariants() {
        for tau in 1..=8 {
            let space = invariant_space(&LieGen::so21(), tau);
            assert_eq!(space.dimension, usize::from(tau % 2 == 0), "tau={tau}");
            if tau % 2 == 0 {
                let expected = p("x^2-y^2-z^2").pow(tau / 2);
                let c = space.basis[0].coefficient(&[tau, 0, 0]);
                assert_eq!(space.basis[0], expected.scale(&c));
            }
        }
    }

    #[test]
    fn catalog_coordinate_pair() {
        for tau in 3..=8 {
            for k in 1..=tau / 2 {
                let [a, b] = LieGen::family_ii_pair(tau, k).unwrap();
                assert!(bracket_relation_check(&a, &b, BracketRelation::Affine));
                let h = p("x+z").pow(tau - 2 * k).mul(&p("x^2-y^2-z^2").pow(k));
                assert!(lie_derivative(&h, &a).is_zero());
                assert!(lie_derivative(&h, &b).is_zero());
                let check = transitivity_rank(&h, &[int(1), int(0), int(0)], &[a, b]);
                assert_eq!(check, TransitivityCheck { tangent_ok: true, rank: 2 });
            }
        }
        assert!(LieGen::family_ii_pair(3, 2).is_err());
    }

    #[test]
    fn bracket_relations() {
        let b = LieGen::affine_b(rat(1, 3)).unwrap();
        assert!(bracket_relation_check(&LieGen::a1(), &b, BracketRelation::Affine));
        let [a1, b1] = LieGen::g1(int(-1), rat(-1, 2)).unwrap();
        assert!(bracket_relation_check(&a1, &b1, BracketRelation::Abelian));
        for rel in [BracketRelation::Abelian, BracketRelation::Affine] {
            assert!(!bracket_relation_check(&LieGen::a6(), &LieGen::a1(), rel));
        }
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        assert!(LieGen::a2(int(0)).is_err());
        assert!(LieGen::a2(int(2)).is_ok());
        assert!(LieGen::a3(int(0)).is_err());
        assert!(LieGen::a4(int(-1), int(-1)).is_err());
        assert!(LieGen::a4(int(0), int(-1)).is_ok());
        assert!(LieGen::a5(int(1), int(0)).is_err());
        assert!(LieGen::affine_b(int(1)).is_err());
        assert!(LieGen::affine_b(int(-1)).is_err());
        assert!(LieGen::g1(int(0), int(-1)).is_err());
        assert!(LieGen::g2(int(-1), int(1)).is_err());
    }

    #[test]
    fn orbit_ranks() {
        for tau in 3..=8 {
            for k in 1..=tau / 2 {
                let gens = [LieGen::a1(), affine_b_for(tau, k)];
                let q = [int(1), int(0), int(1)];
                let check = transitivity_rank(&affine_invariant(tau, k), &q, &gens);
                assert_eq!(check, TransitivityCheck { tangent_ok: true, rank: 2 });
            }
        }
        let h = HomogeneousPoly::monomial(int(1), vec![1, 2, 3]);
        let gens = LieGen::monomial_pair([1, 2, 3]).unwrap();
        let check = transitivity_rank(&h, &[int(1), int(1), int(1)], &gens);
        assert_eq!(check, TransitivityCheck { tangent_ok: true, rank: 2 });

        let h = p("x^2-y^2-z^2").pow(2);
        let base = [int(1), int(0), int(0)];
        let rotation = LieGen::so21()[0].clone();
        assert_eq!(transitivity_rank(&h, &base, &[rotation]).rank, 0);
        assert!(transitivity_rank(&h, &base, &[LieGen::a6()]).rank <= 1);
        let all = transitivity_rank(&h, &base, &LieGen::so21());
        assert_eq!(all, TransitivityCheck { tangent_ok: true, rank: 2 });
    }

    #[test]
    fn parse_generator_matrix() {
        let g = LieGen::parse("[[0,1,0],[0,0,1],[0,0,0]]").unwrap();
        assert_eq!(g.matrix, LieGen::a1().matrix);
        let g = LieGen::parse("1/2,0,0; 0,1,0; 0,0,-3").unwrap();
        assert_eq!(g.matrix.get(0, 0), &rat(1, 2));
        assert!(LieGen::parse("1,2,3").is_err());
    }

    fn small_poly(tau: u32) -> impl Strategy<Value = HomogeneousPoly> {
        let n = monomial_basis(3, tau).len();
        proptest::collection::vec(-3i64..=3, n)
            .prop_map(move |c| HomogeneousPoly::from_coefficient_vector(3, tau, &c.into_iter().map(int).collect::<Vec<_>>()))
    }

    fn small_gen() -> impl Strategy<Value = LieGen> {
        proptest::collection::vec(-2i64..=2, 9).prop_map(|e| {
            LieGen::new(RationalMatrix::from_vec(3, 3, e.into_iter().map(int).collect()).unwrap(), None).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn representation_property(h in small_poly(3), a in small_gen(), b in small_gen()) {
            let bracket = LieGen::new(a.matrix.commutator(&b.matrix).unwrap(), None).unwrap();
            let lhs = lie_derivative(&h, &bracket);
            let rhs = lie_derivative(&lie_derivative(&h, &a), &b)
                .sub(&lie_derivative(&lie_derivative(&h, &b), &a));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn operator_matrix_matches_derivative(h in small_poly(4), g in small_gen()) {
            let m = lie_operator_matrix(&g, 4);
            let image = m.mul_vec(&h.coefficient_vector());
            prop_assert_eq!(image, lie_derivative(&h, &g).coefficient_vector());
        }

        #[test]
        fn kernel_dimension_is_basis_independent(
            a in small_gen(), b in small_gen(),
            c in proptest::collection::vec(-3i64..=3, 4),
        ) {
            let det = c[0] * c[3] - c[1] * c[2];
            prop_assume!(det != 0);
            let comb = |x: i64, y: i64| {
                LieGen::new(a.matrix.scale(&int(x)).add(&b.matrix.scale(&int(y))), None).unwrap()
            };
            let original = invariant_space(&[a.clone(), b.clone()], 3).dimension;
            let mixed = invariant_space(&[comb(c[0], c[1]), comb(c[2], c[3])], 3).dimension;
            prop_assert_eq!(original, mixed);
        }
    }
}
