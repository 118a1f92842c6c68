//! Point-wise hyperbolicity, the centro-affine metric on the level set, and
//! the exclusion diagnostics used to rule out candidate symmetry generators.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_linalg::{Inertia, LinalgError, RationalMatrix};
use crate::polyring::{HomogeneousPoly, PolyError, RationalVector};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperbolicError {
    #[error("degree {0} is below 2; hyperbolicity needs a Hessian")]
    DegreeTooLow(u32),
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    Dimension { expected: usize, got: usize },
    #[error("vector {0} is not tangent (dh_p(v) = {1})")]
    NotTangent(String, String),
    #[error("expected {expected} tangent vectors, got {got}")]
    BasisSize { expected: usize, got: usize },
    #[error("point {0} is not on the zero set (h(p) = {1})")]
    NotOnZeroSet(String, String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Outcome of [`hyperbolic_point_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicityReport {
    pub point: RationalVector,
    pub value: Rational,
    pub gradient: RationalVector,
    pub neg_hessian: RationalMatrix,
    pub inertia_neg_hessian: Inertia,
    pub is_hyperbolic: bool,
    /// `dh_p = 0`: no tangent data is produced.
    pub critical_point: bool,
    /// Basis of `ker dh_p`, empty at a critical point.
    pub tangent_basis: Vec<RationalVector>,
}

fn check_dimension(h: &HomogeneousPoly, p: &[Rational]) -> Result<(), HyperbolicError> {
    if p.len() != h.nvars() {
        return Err(HyperbolicError::Dimension {
            expected: h.nvars(),
            got: p.len(),
        });
    }
    Ok(())
}

/// `p` is hyperbolic iff `h(p) > 0` and `−∂²h_p` has exactly one negative and
/// `n` positive directions.
pub fn hyperbolic_point_check(
    h: &HomogeneousPoly,
    p: &RationalVector,
) -> Result<HyperbolicityReport, HyperbolicError> {
    if h.degree() < 2 {
        return Err(HyperbolicError::DegreeTooLow(h.degree()));
    }
    check_dimension(h, p)?;
    let value = h.eval(p);
    let gradient = RationalVector::new(h.gradient(p));
    let neg_hessian = h.hessian(p).scale(&int(-1));
    let inertia = neg_hessian.inertia()?;
    let n = h.nvars();
    let is_hyperbolic = value.is_positive() && inertia == Inertia::new(n - 1, 1, 0);
    let critical_point = gradient.is_zero();
    let tangent_basis = if critical_point {
        Vec::new()
    } else {
        let row = RationalMatrix::from_rows(vec![gradient.to_vec()]);
        row.nullspace().into_iter().map(RationalVector::new).collect()
    };
    Ok(HyperbolicityReport {
        point: p.clone(),
        value,
        gradient,
        neg_hessian,
        inertia_neg_hessian: inertia,
        is_hyperbolic,
        critical_point,
        tangent_basis,
    })
}

/// Gram matrix of `g = −(1/τ)∂²h_p` on a chosen tangent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroAffineGram {
    pub point: RationalVector,
    pub basis: Vec<RationalVector>,
    pub gram: RationalMatrix,
}

impl CentroAffineGram {
    /// Sylvester's criterion on leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.gram.rows();
        (1..=n).all(|k| {
            let minor = RationalMatrix::from_fn(k, k, |i, j| self.gram.get(i, j).clone());
            minor.det().map(|d| d.is_positive()).unwrap_or(false)
        })
    }
}

pub fn centro_affine_gram(
    h: &HomogeneousPoly,
    p: &RationalVector,
    basis: &[RationalVector],
) -> Result<CentroAffineGram, HyperbolicError> {
    if h.degree() < 2 {
        return Err(HyperbolicError::DegreeTooLow(h.degree()));
    }
    check_dimension(h, p)?;
    if basis.len() + 1 != h.nvars() {
        return Err(HyperbolicError::BasisSize {
            expected: h.nvars() - 1,
            got: basis.len(),
        });
    }
    let grad = h.gradient(p);
    for v in basis {
        check_dimension(h, v)?;
        let dh_v = v.dot(&grad);
        if !dh_v.is_zero() {
            return Err(HyperbolicError::NotTangent(v.to_string(), format_rational(&dh_v)));
        }
    }
    let form = h.hessian(p).scale(&Rational::new((-1).into(), h.degree().into()));
    let gram = RationalMatrix::from_fn(basis.len(), basis.len(), |i, j| {
        form.bilinear(&basis[i], &basis[j])
    });
    Ok(CentroAffineGram {
        point: p.clone(),
        basis: basis.to_vec(),
        gram,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineDiagnostic {
    /// `h − h(p)` has finitely many zeros on the line.
    Finite,
    /// `h` is constant along the whole line; a hyperbolic level set cannot
    /// contain such a line segment.
    IdenticallyConstant,
}

pub fn line_ray_diagnostic(
    h: &HomogeneousPoly,
    p: &RationalVector,
    v: &RationalVector,
) -> Result<LineDiagnostic, HyperbolicError> {
    check_dimension(h, p)?;
    check_dimension(h, v)?;
    let line = h.restrict_to_line(p, v)?;
    Ok(if line.is_constant() {
        LineDiagnostic::IdenticallyConstant
    } else {
        LineDiagnostic::Finite
    })
}

/// True iff `dh_p = 0` at a point `p` of `{h = 0}`.
pub fn singular_at_infinity(h: &HomogeneousPoly, p: &RationalVector) -> Result<bool, HyperbolicError> {
    check_dimension(h, p)?;
    let value = h.eval(p);
    if !value.is_zero() {
        return Err(HyperbolicError::NotOnZeroSet(p.to_string(), format_rational(&value)));
    }
    Ok(h.gradient(p).iter().all(Zero::is_zero))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundednessDiagnostic {
    /// Every eigenvalue has real part of one strict sign, so `e^{tA}p → 0`
    /// for `t → ∞` or `t → −∞`: orbits accumulate at the origin.
    ContractsToOrigin,
    Compatible,
}

/// Routh–Hurwitz test on the characteristic polynomial of a 3×3 generator.
pub fn boundedness_diagnostic(a: &RationalMatrix) -> Result<BoundednessDiagnostic, HyperbolicError> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(LinalgError::Shape(format!("expected 3x3, got {}x{}", a.rows(), a.cols())).into());
    }
    let trace = a.get(0, 0) + a.get(1, 1) + a.get(2, 2);
    let minors = (0..3)
        .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
        .fold(Rational::zero(), |acc, (i, j)| {
            acc + a.get(i, i) * a.get(j, j) - a.get(i, j) * a.get(j, i)
        });
    let det = a.det()?;
    // char poly s³ − tr s² + minors s − det; all roots in Re<0 iff
    // a2 > 0, a0 > 0, a2 a1 > a0 for s³ + a2 s² + a1 s + a0.
    let hurwitz = |a2: &Rational, a1: &Rational, a0: &Rational| {
        a2.is_positive() && a0.is_positive() && a2 * a1 > *a0
    };
    let stable = hurwitz(&-trace.clone(), &minors, &-det.clone());
    let antistable = hurwitz(&trace, &minors, &det);
    Ok(if stable || antistable {
        BoundednessDiagnostic::ContractsToOrigin
    } else {
        BoundednessDiagnostic::Compatible
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn p(s: &str) -> HomogeneousPoly {
        HomogeneousPoly::parse(s).unwrap()
    }

    fn v(x: &[i64]) -> RationalVector {
        RationalVector::from_i64s(x)
    }

    fn family_ii(tau: u32, k: u32) -> HomogeneousPoly {
        p("x+z").pow(tau - 2 * k).mul(&p("x^2-y^2-z^2").pow(k))
    }

    fn z_power_monomial(tau: u32, k: u32, l: u32) -> HomogeneousPoly {
        HomogeneousPoly::monomial(int(1), vec![k - l, l, tau - k])
    }

    #[test]
    fn family_ii_base_point_is_hyperbolic() {
        for tau in 3..=8 {
            for k in (1..).take_while(|k| 2 * k < tau) {
                let report = hyperbolic_point_check(&family_ii(tau, k), &v(&[1, 0, 0])).unwrap();
                assert!(report.is_hyperbolic, "tau={tau} k={k}");
                assert_eq!(report.value, int(1));
            }
        }
    }

    #[test]
    fn monomials_are_hyperbolic_at_ones() {
        for tau in 3..=7 {
            for k in 2..tau {
                for l in 1..k {
                    let report =
                        hyperbolic_point_check(&z_power_monomial(tau, k, l), &v(&[1, 1, 1])).unwrap();
                    assert!(report.is_hyperbolic, "tau={tau} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn pure_power_is_not_hyperbolic() {
        let report = hyperbolic_point_check(&p("x^3"), &v(&[1, 0, 0])).unwrap();
        assert!(!report.is_hyperbolic);
        assert!(report.inertia_neg_hessian.zero > 0);
    }

    #[test]
    fn boundary_and_critical_points() {
        let report = hyperbolic_point_check(&p("(x^2-y^2-z^2)^2"), &v(&[1, 1, 0])).unwrap();
        assert!(!report.is_hyperbolic);
        assert!(report.critical_point);
        assert!(report.tangent_basis.is_empty());
        assert_eq!(
            hyperbolic_point_check(&p("x"), &v(&[1, 0, 0])),
            Err(HyperbolicError::DegreeTooLow(1))
        );
    }

    #[test]
    fn frame_values_in_original_coordinates() {
        // h = z^{τ-2k}(zx - y²/2)^k, q = (1,0,1), a1 q = (0,1,0), B q = (b-1, 0, b+1)
        for (tau, k) in [(3i64, 1i64), (5, 2), (8, 3)] {
            let zx = p("z*x - 1/2*y^2");
            let h = p("z").pow((tau - 2 * k) as u32).mul(&zx.pow(k as u32));
            let q = v(&[1, 0, 1]);
            let b = rat(-tau + 2 * k, tau);
            let a1q = v(&[0, 1, 0]);
            let bq = RationalVector::new(vec![&b - int(1), int(0), &b + int(1)]);
            let gram = centro_affine_gram(&h, &q, &[a1q, bq]).unwrap();
            assert_eq!(gram.gram.get(0, 0), &rat(k, tau));
            assert_eq!(gram.gram.get(1, 1), &rat(4 * k * (tau - k), tau * tau));
            assert_eq!(gram.gram.get(0, 1), &int(0));
            assert!(gram.is_positive_definite());
        }
    }

    #[test]
    fn gram_rejects_non_tangent_vectors() {
        let h = family_ii(3, 1);
        let err = centro_affine_gram(&h, &v(&[1, 0, 0]), &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        assert!(matches!(err, Err(HyperbolicError::NotTangent(..))));
    }

    #[test]
    fn line_diagnostics() {
        assert_eq!(
            line_ray_diagnostic(&p("(x^2-y^2-z^2)^2"), &v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(),
            LineDiagnostic::Finite
        );
        assert_eq!(
            line_ray_diagnostic(&p("x^5"), &v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(),
            LineDiagnostic::IdenticallyConstant
        );
        // xyz(1,1+t,1-t) = 1 - t²
        assert_eq!(
            line_ray_diagnostic(&p("x*y*z"), &v(&[1, 1, 1]), &v(&[0, 1, -1])).unwrap(),
            LineDiagnostic::Finite
        );
        assert!(line_ray_diagnostic(&p("x*y*z"), &v(&[1, 1, 1]), &v(&[0, 0, 0])).is_err());
    }

    #[test]
    fn singular_at_infinity_examples() {
        for m in [2u32, 3, 5] {
            let h = p("x^2-y^2-z^2").pow(m);
            assert!(singular_at_infinity(&h, &v(&[1, 1, 0])).unwrap());
        }
        for (tau, k) in [(3, 1), (6, 2), (9, 4)] {
            assert!(singular_at_infinity(&family_ii(tau, k), &v(&[1, 0, -1])).unwrap());
        }
        let h = HomogeneousPoly::monomial(int(1), vec![1, 2, 3]);
        assert!(singular_at_infinity(&h, &v(&[1, 0, 0])).unwrap());
        // smooth point of the cone x² − y² − z² = 0
        assert!(!singular_at_infinity(&p("x^2-y^2-z^2"), &v(&[1, 1, 0])).unwrap());
        assert!(matches!(
            singular_at_infinity(&h, &v(&[1, 1, 1])),
            Err(HyperbolicError::NotOnZeroSet(..))
        ));
    }

    #[test]
    fn boundedness_of_candidate_generators() {
        let m = |r: &[&[i64]]| RationalMatrix::from_i64_rows(r);
        // A_1 with λ = 1 contracts as t → −∞.
        assert_eq!(
            boundedness_diagnostic(&m(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]])).unwrap(),
            BoundednessDiagnostic::ContractsToOrigin
        );
        // A_3 with λ, μ > 0.
        assert_eq!(
            boundedness_diagnostic(&m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]])).unwrap(),
            BoundednessDiagnostic::ContractsToOrigin
        );
        // A_4 with λ > 0, μ > 0 (complex pair).
        assert_eq!(
            boundedness_diagnostic(&m(&[&[1, -1, 0], &[1, 1, 0], &[0, 0, 2]])).unwrap(),
            BoundednessDiagnostic::ContractsToOrigin
        );
        // affine B with b = 0 has eigenvalues −1, 0, 1.
        assert_eq!(
            boundedness_diagnostic(&m(&[&[-1, 0, 0], &[0, 0, 0], &[0, 0, 1]])).unwrap(),
            BoundednessDiagnostic::Compatible
        );
        // a_6 rotation
        assert_eq!(
            boundedness_diagnostic(&m(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]])).unwrap(),
            BoundednessDiagnostic::Compatible
        );
    }

    fn rational_point() -> impl Strategy<Value = RationalVector> {
        proptest::collection::vec((-6i64..=6, 1i64..=4), 3)
            .prop_map(|v| RationalVector::new(v.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn hyperbolicity_is_invariant_under_pullback(
            entries in proptest::collection::vec(-3i64..=3, 9),
            tau in 3u32..=6,
        ) {
            let a = RationalMatrix::from_vec(3, 3, entries.into_iter().map(int).collect()).unwrap();
            let Ok(a_inv) = a.inverse() else { return Ok(()); };
            let k = (tau - 1) / 2;
            let h = family_ii(tau, k);
            let pulled = h.pullback(&a).unwrap();
            for base in [v(&[1, 0, 0]), v(&[2, 1, 0]), v(&[1, 1, 1]), v(&[-1, 0, 0])] {
                let image = RationalVector::new(a_inv.mul_vec(&base));
                let lhs = hyperbolic_point_check(&h, &base).unwrap().is_hyperbolic;
                let rhs = hyperbolic_point_check(&pulled, &image).unwrap().is_hyperbolic;
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn tangent_basis_annihilates_gradient(q in rational_point()) {
            let h = p("x^3 - 2*x*y^2 + y*z^2 + 5*z^3");
            let report = hyperbolic_point_check(&h, &q).unwrap();
            for t in &report.tangent_basis {
                prop_assert!(t.dot(&report.gradient).is_zero());
            }
            if report.is_hyperbolic {
                let gram = centro_affine_gram(&h, &q, &report.tangent_basis).unwrap();
                prop_assert!(gram.is_positive_definite());
                // −(1/τ)∂²h_p(p,p) = −(τ−1) h(p)
                let tau = int(h.degree() as i64);
                let form = report.neg_hessian.scale(&tau.recip());
                prop_assert_eq!(form.bilinear(&q, &q), -(tau - int(1)) * report.value.clone());
            }
        }

        #[test]
        fn singularity_is_scale_invariant(k in 1u32..=4, extra in 1u32..=3) {
            let h = family_ii(2 * k + extra, k);
            let p1 = v(&[1, 0, -1]);
            let p2 = v(&[2, 0, -2]);
            prop_assert_eq!(
                singular_at_infinity(&h, &p1).unwrap(),
                singular_at_infinity(&h, &p2).unwrap()
            );
        }
    }
}
