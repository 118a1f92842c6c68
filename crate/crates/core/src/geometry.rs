//! Standard form at a hyperbolic point and scalar curvature of the
//! centro-affine metric, computed along three independent routes.
//!
//! Everything upstream of this module is exact; floats enter here because
//! orthonormalization needs square roots.

use std::env;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exact_linalg::Matrix;
use crate::hyperbolic::{centro_affine_gram, hyperbolic_point_check, HyperbolicError};
use crate::polyring::{FloatPoly, HomogeneousPoly, PolyError, RationalVector};
use crate::rational::{int, Rational};
use crate::symmetry::LieGen;

pub const STANDARD_FORM_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Environment override for [`DEFAULT_FD_STEP`].
pub const FD_STEP_ENV: &str = "CASURF_FD_STEP";
const MAX_STEP_SHRINKS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point {0} is not hyperbolic")]
    NotHyperbolic(String),
    #[error("h(p) = {0} is not positive")]
    NonPositiveValue(f64),
    #[error("surface routines need 3 variables, got {0}")]
    NotSurface(usize),
    #[error("standard form residual {0:e} exceeds tolerance")]
    Residual(f64),
    #[error("finite-difference stencil leaves {{h > 0}} even at step {0:e}")]
    StencilLeftDomain(f64),
    #[error("invalid finite-difference step `{0}`")]
    InvalidStep(String),
    #[error("parameters out of range: need tau >= 3 and 1 <= k < tau/2 (got tau={tau}, k={k})")]
    ParameterRange { tau: u32, k: u32 },
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `A*h = x^τ − x^{τ−2}⟨y, y⟩ + Σ_{k≥3} x^{τ−k} P_k(y)` at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardFormData {
    pub degree: u32,
    pub base_point: Vec<f64>,
    /// Columns: the rescaled base point, then the orthonormal tangent frame.
    pub transform: Matrix<f64>,
    /// `P_3, …, P_τ` in the tangent coordinates.
    pub higher_terms: Vec<FloatPoly>,
    pub residual: f64,
}

impl StandardFormData {
    pub fn cubic_term(&self) -> Option<&FloatPoly> {
        self.higher_terms.first()
    }
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Float polynomial together with its first and second partials.
struct Jet {
    h: FloatPoly,
    grad: Vec<FloatPoly>,
    hess: Vec<Vec<FloatPoly>>,
}

impl Jet {
    fn new(h: FloatPoly) -> Self {
        let grad = h.gradient_polys();
        let hess = grad.iter().map(FloatPoly::gradient_polys).collect();
        Jet { h, grad, hess }
    }

    fn degree(&self) -> f64 {
        f64::from(self.h.degree())
    }

    fn value(&self, u: &[f64]) -> f64 {
        self.h.eval(u)
    }

    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        self.grad.iter().map(|g| g.eval(u)).collect()
    }

    fn hessian_form(&self, u: &[f64], a: &[f64], b: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.hess.iter().enumerate() {
            for (j, poly) in row.iter().enumerate() {
                if a[i] != 0.0 && b[j] != 0.0 {
                    s += a[i] * poly.eval(u) * b[j];
                }
            }
        }
        s
    }
}

/// Standard form for an exact polynomial; hyperbolicity is decided exactly.
pub fn to_standard_form(h: &HomogeneousPoly, p: &RationalVector) -> Result<StandardFormData, GeometryError> {
    let report = hyperbolic_point_check(h, p)?;
    if !report.is_hyperbolic {
        return Err(GeometryError::NotHyperbolic(p.to_string()));
    }
    let tangent: Vec<Vec<f64>> = report.tangent_basis.iter().map(|v| v.to_f64()).collect();
    standard_form_with_basis(&h.to_f64(), &p.to_f64(), &tangent)
}

/// Standard form for a float polynomial. Hyperbolicity is judged by the sign
/// of `h(p)` and positivity of the tangent Gram matrix.
pub fn to_standard_form_f64(h: &FloatPoly, p: &[f64]) -> Result<StandardFormData, GeometryError> {
    let grad = Jet::new(h.clone()).gradient(p);
    standard_form_with_basis(h, p, &float_tangent_basis(&grad))
}

/// A basis of `grad^⊥` in `ℝ^n`, built by projecting coordinate axes.
fn float_tangent_basis(grad: &[f64]) -> Vec<Vec<f64>> {
    let n = grad.len();
    let pivot = (0..n)
        .max_by(|&a, &b| grad[a].abs().total_cmp(&grad[b].abs()))
        .unwrap_or(0);
    (0..n)
        .filter(|&i| i != pivot)
        .map(|i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            if grad[pivot] != 0.0 {
                v[pivot] = -grad[i] / grad[pivot];
            }
            v
        })
        .collect()
}

fn standard_form_with_basis(
    h: &FloatPoly,
    p: &[f64],
    tangent: &[Vec<f64>],
) -> Result<StandardFormData, GeometryError> {
    let n = h.nvars();
    if h.degree() < 2 {
        return Err(HyperbolicError::DegreeTooLow(h.degree()).into());
    }
    let tau = h.degree();
    let jet = Jet::new(h.clone());
    let value = jet.value(p);
    if !(value > 0.0) {
        return Err(GeometryError::NonPositiveValue(value));
    }
    let scale = value.powf(-1.0 / f64::from(tau));
    let base: Vec<f64> = p.iter().map(|x| x * scale).collect();

    // Gram–Schmidt in index order for −(1/2)∂²h at the rescaled point.
    let form = |a: &[f64], b: &[f64]| -0.5 * jet.hessian_form(&base, a, b);
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(tangent.len());
    for v in tangent {
        let mut w = v.clone();
        for e in &frame {
            let c = form(&w, e);
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi -= c * ei;
            }
        }
        let norm2 = form(&w, &w);
        if !(norm2 > 0.0) {
            return Err(GeometryError::NotHyperbolic(format!("{p:?}")));
        }
        let norm = norm2.sqrt();
        frame.push(w.into_iter().map(|x| x / norm).collect());
    }

    let transform = Matrix::from_fn(n, n, |i, j| if j == 0 { base[i] } else { frame[j - 1][i] });
    let pulled = h.pullback(&transform)?;

    let mut residual = 0.0f64;
    let mut blocks: Vec<FloatPoly> = (0..=tau).map(|k| FloatPoly::zero(n - 1, k)).collect();
    for (m, c) in pulled.terms() {
        let e = m.exponents();
        let k = tau - e[0];
        let tail = e[1..].to_vec();
        blocks[k as usize] = blocks[k as usize].add(&FloatPoly::monomial(*c, tail));
    }
    let expected_quadratic = {
        let mut q = FloatPoly::zero(n - 1, 2);
        for i in 0..n - 1 {
            q = q.sub(&FloatPoly::variable(n - 1, i).pow(2));
        }
        q
    };
    let deviation = |actual: &FloatPoly, expected: &FloatPoly| {
        actual
            .sub(expected)
            .terms()
            .map(|(_, c)| c.abs())
            .fold(0.0f64, f64::max)
    };
    residual = residual
        .max(deviation(&blocks[0], &FloatPoly::constant(n - 1, 1.0)))
        .max(deviation(&blocks[1], &FloatPoly::zero(n - 1, 1)))
        .max(deviation(&blocks[2], &expected_quadratic));
    if residual > STANDARD_FORM_TOLERANCE {
        return Err(GeometryError::Residual(residual));
    }
    Ok(StandardFormData {
        degree: tau,
        base_point: p.to_vec(),
        transform,
        higher_terms: blocks.split_off(3),
        residual,
    })
}

/// Curvature from the cubic term of the standard form:
/// `S = n(1−n) + (9τ/8) Σ_{ijk} (T_ijk² − T_iik T_jjk)` with
/// `T_ijk = (1/6) ∂_i∂_j∂_k P_3` and `n` the surface dimension.
pub fn scalar_curvature_standard(sf: &StandardFormData) -> f64 {
    let dim = sf.transform.rows() - 1;
    let tau = f64::from(sf.degree);
    let base = (dim as f64) * (1.0 - dim as f64);
    let Some(cubic) = sf.cubic_term() else {
        return base;
    };
    let origin = vec![0.0; dim];
    let third = |i: usize, j: usize, k: usize| cubic.partial(i).partial(j).partial(k).eval(&origin) / 6.0;
    let mut t = vec![0.0; dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                t[(i * dim + j) * dim + k] = third(i, j, k);
            }
        }
    }
    let at = |i: usize, j: usize, k: usize| t[(i * dim + j) * dim + k];
    let mut sum = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                sum += -at(i, i, k) * at(j, j, k) + at(i, j, k).powi(2);
            }
        }
    }
    base + 9.0 * tau / 8.0 * sum
}

fn fd_step_from_env() -> Result<f64, GeometryError> {
    match env::var(FD_STEP_ENV) {
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(step) if step > 0.0 && step.is_finite() => Ok(step),
            _ => Err(GeometryError::InvalidStep(text)),
        },
        Err(_) => Ok(DEFAULT_FD_STEP),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericCurvature {
    pub scalar_curvature: f64,
    /// Step actually used after any automatic shrinking.
    pub step: f64,
}

/// Gaussian curvature of the radial chart
/// `q(y) = h(c)^{−1/τ} c`, `c = p + y₁v₁ + y₂v₂`, by the Brioschi formula.
/// Returns `S = 2K`. The step comes from `CASURF_FD_STEP` when set.
pub fn scalar_curvature_numeric(h: &HomogeneousPoly, p: &RationalVector) -> Result<NumericCurvature, GeometryError> {
    scalar_curvature_numeric_with_step(h, p, fd_step_from_env()?)
}

pub fn scalar_curvature_numeric_with_step(
    h: &HomogeneousPoly,
    p: &RationalVector,
    step: f64,
) -> Result<NumericCurvature, GeometryError> {
    if h.nvars() != 3 {
        return Err(GeometryError::NotSurface(h.nvars()));
    }
    let report = hyperbolic_point_check(h, p)?;
    if !report.is_hyperbolic {
        return Err(GeometryError::NotHyperbolic(p.to_string()));
    }
    let tangent: Vec<Vec<f64>> = report.tangent_basis.iter().map(|v| v.to_f64()).collect();
    brioschi_curvature(&Jet::new(h.to_f64()), &p.to_f64(), &tangent, step)
}

pub fn scalar_curvature_numeric_f64(h: &FloatPoly, p: &[f64], step: f64) -> Result<NumericCurvature, GeometryError> {
    if h.nvars() != 3 {
        return Err(GeometryError::NotSurface(h.nvars()));
    }
    let jet = Jet::new(h.clone());
    let tangent = float_tangent_basis(&jet.gradient(p));
    brioschi_curvature(&jet, p, &tangent, step)
}

fn brioschi_curvature(jet: &Jet, p: &[f64], tangent: &[Vec<f64>], step: f64) -> Result<NumericCurvature, GeometryError> {
    let mut step = step;
    for _ in 0..=MAX_STEP_SHRINKS {
        if let Some(k) = brioschi_at_step(jet, p, tangent, step) {
            return Ok(NumericCurvature {
                scalar_curvature: 2.0 * k,
                step,
            });
        }
        step /= 10.0;
    }
    Err(GeometryError::StencilLeftDomain(step * 10.0))
}

/// Metric components `(E, F, G)` of the radial chart at `y`, or `None`
/// outside `{h > 0}`.
fn chart_metric(jet: &Jet, p: &[f64], tangent: &[Vec<f64>], y: [f64; 2]) -> Option<[f64; 3]> {
    let tau = jet.degree();
    let c: Vec<f64> = (0..3).map(|i| p[i] + y[0] * tangent[0][i] + y[1] * tangent[1][i]).collect();
    let hc = jet.value(&c);
    if !(hc > 0.0) {
        return None;
    }
    let f = hc.powf(-1.0 / tau);
    let grad = jet.gradient(&c);
    let q: Vec<f64> = c.iter().map(|x| x * f).collect();
    let partials: Vec<Vec<f64>> = tangent
        .iter()
        .map(|v| {
            let df = -f / (tau * hc) * dot(&grad, v);
            (0..3).map(|i| f * v[i] + df * c[i]).collect()
        })
        .collect();
    let g = |a: &[f64], b: &[f64]| -jet.hessian_form(&q, a, b) / tau;
    Some([
        g(&partials[0], &partials[0]),
        g(&partials[0], &partials[1]),
        g(&partials[1], &partials[1]),
    ])
}

fn brioschi_at_step(jet: &Jet, p: &[f64], tangent: &[Vec<f64>], step: f64) -> Option<f64> {
    // Nine-point stencil at spacing `s`, indexed by (a + 1) * 3 + (b + 1).
    let stencil = |s: f64| -> Option<[[f64; 3]; 9]> {
        let mut out = [[0.0; 3]; 9];
        for a in -1i32..=1 {
            for b in -1i32..=1 {
                let y = [f64::from(a) * s, f64::from(b) * s];
                out[((a + 1) * 3 + b + 1) as usize] = chart_metric(jet, p, tangent, y)?;
            }
        }
        Some(out)
    };
    let derivs = |m: &[[f64; 3]; 9], s: f64| {
        let at = |a: i32, b: i32| m[((a + 1) * 3 + b + 1) as usize];
        let mut d = [[0.0; 3]; 5];
        for c in 0..3 {
            d[0][c] = (at(1, 0)[c] - at(-1, 0)[c]) / (2.0 * s);
            d[1][c] = (at(0, 1)[c] - at(0, -1)[c]) / (2.0 * s);
            d[2][c] = (at(1, 0)[c] - 2.0 * at(0, 0)[c] + at(-1, 0)[c]) / (s * s);
            d[3][c] = (at(0, 1)[c] - 2.0 * at(0, 0)[c] + at(0, -1)[c]) / (s * s);
            d[4][c] = (at(1, 1)[c] - at(1, -1)[c] - at(-1, 1)[c] + at(-1, -1)[c]) / (4.0 * s * s);
        }
        d
    };
    let wide = stencil(step)?;
    let narrow = stencil(step / 2.0)?;
    let coarse = derivs(&wide, step);
    let fine = derivs(&narrow, step / 2.0);
    // Richardson: both stencils have O(s²) leading error.
    let d = |row: usize, comp: usize| (4.0 * fine[row][comp] - coarse[row][comp]) / 3.0;
    let [e, f, g] = wide[4];
    let (e_u, e_v, e_vv) = (d(0, 0), d(1, 0), d(3, 0));
    let (f_u, f_v, f_uv) = (d(0, 1), d(1, 1), d(4, 1));
    let (g_u, g_v, g_uu) = (d(0, 2), d(1, 2), d(2, 2));
    let m1 = [
        [-e_vv / 2.0 + f_uv - g_uu / 2.0, e_u / 2.0, f_u - e_v / 2.0],
        [f_v - g_u / 2.0, e, f],
        [g_v / 2.0, f, g],
    ];
    let m2 = [[0.0, e_v / 2.0, g_u / 2.0], [e_v / 2.0, e, f], [g_u / 2.0, f, g]];
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let area = e * g - f * f;
    Some((det3(m1) - det3(m2)) / (area * area))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub s_formula: f64,
    pub s_numeric: f64,
    pub agreement: f64,
    pub fd_step: f64,
}

pub fn curvature_report(h: &HomogeneousPoly, p: &RationalVector) -> Result<CurvatureReport, GeometryError> {
    let sf = to_standard_form(h, p)?;
    let s_formula = scalar_curvature_standard(&sf);
    let numeric = scalar_curvature_numeric(h, p)?;
    Ok(CurvatureReport {
        s_formula,
        s_numeric: numeric.scalar_curvature,
        agreement: (s_formula - numeric.scalar_curvature).abs(),
        fd_step: numeric.step,
    })
}

/// `−τ² / (2k(τ−k))`, the value the frame computation must reproduce.
pub fn family_ii_closed_form(tau: u32, k: u32) -> Rational {
    let (t, k) = (i64::from(tau), i64::from(k));
    Rational::new((-t * t).into(), (2 * k * (t - k)).into())
}

/// Exact curvature of the family (ii) surface from its left-invariant frame.
///
/// The orbit directions `A q`, `B q` of an affine pair `[A, B] = A` give a
/// left-invariant metric with Gram matrix `G`; orthonormalizing yields
/// `[X, Y] = c X` with `c² = G_AA / det G`, and `K = −c²`.
pub fn frame_curvature_family_ii(tau: u32, k: u32) -> Result<Rational, GeometryError> {
    if tau < 3 || k == 0 || 2 * k >= tau {
        return Err(GeometryError::ParameterRange { tau, k });
    }
    let h = HomogeneousPoly::parse("z")?
        .pow(tau - 2 * k)
        .mul(&HomogeneousPoly::parse("z*x - 1/2*y^2")?.pow(k));
    let q = RationalVector::from_i64s(&[1, 0, 1]);
    let b = Rational::new((2 * i64::from(k) - i64::from(tau)).into(), i64::from(tau).into());
    let gens = [LieGen::a1(), LieGen::affine_b(b).expect("b in (-1, 1)")];
    let frame: Vec<RationalVector> = gens.iter().map(|g| g.apply(&q)).collect();
    let gram = centro_affine_gram(&h, &q, &frame)?.gram;
    let det = gram.det().map_err(HyperbolicError::from)?;
    debug_assert!(!det.is_zero());
    Ok(int(-2) * gram.get(0, 0) / det)
}
