//! Command implementations; each returns a [`ReportDocument`].

use std::fs;
use std::path::PathBuf;

use casurf::catalog::{enumerate, verify_all, Family};
use casurf::geometry::{
    family_ii_closed_form, scalar_curvature_numeric, scalar_curvature_standard, to_standard_form, GeometryError,
};
use casurf::hyperbolic::{hyperbolic_point_check, singular_at_infinity, HyperbolicError};
use casurf::polyring::{parse_polynomial, PolyError, VanishingOrder};
use casurf::rational::{format_rational, format_sig12, parse_rational, to_f64, RationalParseError};
use casurf::symmetry::{invariant_space, lie_derivative, LieGen, SymmetryError};
use casurf::{HomogeneousPoly, Rational, RationalMatrix, RationalVector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::ReportDocument;

/// Curvature comparisons share the catalog tolerance.
const TOLERANCE: f64 = casurf::catalog::CURVATURE_TOLERANCE;

#[derive(Debug, Parser)]
#[command(name = "casurf", version, about = "Hyperbolic ternary forms and special homogeneous surfaces")]
pub struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact hyperbolicity test at a point.
    Check(PointArgs),
    /// Joint invariant polynomials of a set of linear generators.
    Invariants(InvariantArgs),
    /// Standard form of h at a hyperbolic point.
    StandardForm(PointArgs),
    /// Scalar curvature of the level surface through a point.
    Curvature(CurvatureArgs),
    /// Singularity of the zero set at a point.
    Singularity(SingularityArgs),
    /// Build and verify the catalog of special homogeneous surfaces.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub poly: String,
    /// Comma-separated rationals, e.g. `1,0,-1/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    /// Generator label (a1..a6, B, g1, g2, so21) or a 3x3 matrix literal
    /// `r1c1,r1c2,r1c3;...`. Repeatable.
    #[arg(long = "gen", required = true, allow_hyphen_values = true)]
    pub generators: Vec<String>,
    #[arg(long)]
    pub degree: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Paths {
    Formula,
    Numeric,
    Both,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    /// Decimal coefficients are accepted here and flagged inexact.
    #[arg(long)]
    pub poly: String,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, value_enum, default_value = "both")]
    pub paths: Paths,
    /// Expected value of S; each computed path must match within 1e-5.
    #[arg(long, allow_hyphen_values = true)]
    pub expect: Option<String>,
}

#[derive(Debug, Args)]
pub struct SingularityArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Also report the vanishing order of h along this direction.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<String>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long, default_value_t = 10)]
    pub tau_max: u32,
    /// Comma-separated subset of i, ii, iii.
    #[arg(long, value_delimiter = ',', default_value = "i,ii,iii")]
    pub families: Vec<String>,
    /// Write the family (ii) curvature table `tau,k,S` to this file.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(String),
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}
input_error!(PolyError, RationalParseError, SymmetryError, HyperbolicError);

pub fn run(command: &Command) -> Result<ReportDocument, CliError> {
    match command {
        Command::Check(args) => cmd_check(args),
        Command::Invariants(args) => cmd_invariants(args),
        Command::StandardForm(args) => cmd_standard_form(args),
        Command::Curvature(args) => cmd_curvature(args),
        Command::Singularity(args) => cmd_singularity(args),
        Command::Catalog(args) => cmd_catalog(args),
    }
}

fn parse_exact_poly(text: &str) -> Result<HomogeneousPoly, CliError> {
    Ok(HomogeneousPoly::parse(text)?)
}

fn parse_point(text: &str, nvars: usize, allow_decimal: bool) -> Result<(RationalVector, bool), CliError> {
    let mut inexact = false;
    let coords = text
        .split(',')
        .map(|s| {
            parse_rational(s, allow_decimal).map(|(q, flag)| {
                inexact |= flag;
                q
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != nvars {
        return Err(CliError::Input(format!("point has {} coordinates, expected {nvars}", coords.len())));
    }
    Ok((RationalVector::new(coords), inexact))
}

fn rational_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

fn matrix_json(m: &RationalMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector_json(r)).collect())
}

fn cmd_check(args: &PointArgs) -> Result<ReportDocument, CliError> {
    let h = parse_exact_poly(&args.poly)?;
    let (p, _) = parse_point(&args.point, h.nvars(), false)?;
    let report = hyperbolic_point_check(&h, &p)?;
    let mut doc = ReportDocument::new("check");
    doc.input("poly", h.to_string()).input("point", vector_json(&p));
    let inertia = report.inertia_neg_hessian;
    doc.value("value", rational_json(&report.value))
        .value("gradient", vector_json(&report.gradient))
        .value(
            "inertia",
            json!({"positive": inertia.positive, "negative": inertia.negative, "zero": inertia.zero}),
        )
        .value("critical_point", report.critical_point)
        .value(
            "tangent_basis",
            Value::Array(report.tangent_basis.iter().map(|v| vector_json(v)).collect()),
        )
        .check("hyperbolic", report.is_hyperbolic, report.is_hyperbolic);
    Ok(doc)
}

fn required(value: &Option<String>, name: &str, generator: &str) -> Result<Rational, CliError> {
    let text = value
        .as_deref()
        .ok_or_else(|| CliError::Input(format!("generator {generator} needs --{name}")))?;
    Ok(parse_rational(text, false)?.0)
}

fn expand_generators(args: &InvariantArgs) -> Result<Vec<LieGen>, CliError> {
    let mut out = Vec::new();
    for spec in &args.generators {
        match spec.as_str() {
            "a1" => out.push(LieGen::a1()),
            "a2" => out.push(LieGen::a2(required(&args.mu, "mu", "a2")?)?),
            "a3" => out.push(LieGen::a3(required(&args.mu, "mu", "a3")?)?),
            "a4" => out.push(LieGen::a4(required(&args.lambda, "lambda", "a4")?, required(&args.mu, "mu", "a4")?)?),
            "a5" => out.push(LieGen::a5(required(&args.lambda, "lambda", "a5")?, required(&args.mu, "mu", "a5")?)?),
            "a6" => out.push(LieGen::a6()),
            "B" => out.push(LieGen::affine_b(required(&args.b, "b", "B")?)?),
            "g1" => out.extend(LieGen::g1(required(&args.a, "a", "g1")?, required(&args.b, "b", "g1")?)?),
            "g2" => out.extend(LieGen::g2(required(&args.a, "a", "g2")?, required(&args.b, "b", "g2")?)?),
            "so21" => out.extend(LieGen::so21()),
            literal => out.push(LieGen::parse(literal)?),
        }
    }
    Ok(out)
}

fn cmd_invariants(args: &InvariantArgs) -> Result<ReportDocument, CliError> {
    let generators = expand_generators(args)?;
    let space = invariant_space(&generators, args.degree);
    let mut doc = ReportDocument::new("invariants");
    doc.input("degree", args.degree).input(
        "generators",
        Value::Array(
            generators
                .iter()
                .map(|g| json!({"label": g.label, "matrix": matrix_json(&g.matrix)}))
                .collect(),
        ),
    );
    for (name, value) in [("a", &args.a), ("b", &args.b), ("mu", &args.mu), ("lambda", &args.lambda)] {
        if let Some(v) = value {
            doc.input(name, v.as_str());
        }
    }
    let annihilated = space
        .basis
        .iter()
        .all(|h| generators.iter().all(|g| lie_derivative(h, g).is_zero()));
    doc.value("dimension", space.dimension)
        .value(
            "basis",
            Value::Array(space.basis.iter().map(|h| Value::String(h.to_string())).collect()),
        )
        .check("basis annihilated by all generators", annihilated, annihilated);
    Ok(doc)
}

fn geometry_failure(doc: &mut ReportDocument, name: &str, err: GeometryError) -> Result<(), CliError> {
    match err {
        GeometryError::Hyperbolic(HyperbolicError::Poly(e)) => Err(e.into()),
        GeometryError::Poly(e) => Err(e.into()),
        other => {
            doc.check(name, false, other.to_string());
            Ok(())
        }
    }
}

fn cmd_standard_form(args: &PointArgs) -> Result<ReportDocument, CliError> {
    let h = parse_exact_poly(&args.poly)?;
    let (p, _) = parse_point(&args.point, h.nvars(), false)?;
    let mut doc = ReportDocument::new("standard-form");
    doc.input("poly", h.to_string()).input("point", vector_json(&p));
    match to_standard_form(&h, &p) {
        Ok(sf) => {
            let transform: Vec<Vec<f64>> = (0..sf.transform.rows()).map(|i| sf.transform.row(i).to_vec()).collect();
            doc.value("transform", json!(transform));
            for (i, block) in sf.higher_terms.iter().enumerate() {
                doc.value(&format!("P{}", i + 3), block.to_string());
            }
            doc.value("S_formula", scalar_curvature_standard(&sf)).check(
                "residual",
                sf.residual <= casurf::geometry::STANDARD_FORM_TOLERANCE,
                sf.residual,
            );
        }
        Err(e) => geometry_failure(&mut doc, "standard form", e)?,
    }
    Ok(doc)
}

fn cmd_curvature(args: &CurvatureArgs) -> Result<ReportDocument, CliError> {
    let parsed = parse_polynomial(&args.poly, true)?;
    let h = parsed.poly;
    let (p, point_inexact) = parse_point(&args.point, h.nvars(), true)?;
    let expected = match &args.expect {
        Some(text) => Some(to_f64(&parse_rational(text, true)?.0)),
        None => None,
    };
    let mut doc = ReportDocument::new("curvature");
    doc.input("poly", args.poly.as_str())
        .input("point", vector_json(&p))
        .input("inexact", parsed.inexact || point_inexact)
        .input(
            "paths",
            match args.paths {
                Paths::Formula => "formula",
                Paths::Numeric => "numeric",
                Paths::Both => "both",
            },
        );
    if let Some(e) = expected {
        doc.input("expect", e);
    }
    let mut values = Vec::new();
    if matches!(args.paths, Paths::Formula | Paths::Both) {
        match to_standard_form(&h, &p) {
            Ok(sf) => {
                let s = scalar_curvature_standard(&sf);
                doc.value("S_formula", s);
                values.push(("formula", s));
            }
            Err(e) => geometry_failure(&mut doc, "S_formula", e)?,
        }
    }
    if matches!(args.paths, Paths::Numeric | Paths::Both) {
        match scalar_curvature_numeric(&h, &p) {
            Ok(n) => {
                doc.value("S_numeric", n.scalar_curvature).value("fd_step", n.step);
                values.push(("numeric", n.scalar_curvature));
            }
            Err(e) => geometry_failure(&mut doc, "S_numeric", e)?,
        }
    }
    if let [(_, a), (_, b)] = values.as_slice() {
        let delta = (a - b).abs();
        doc.check("paths agree", delta <= TOLERANCE, json!({"delta": delta, "tolerance": TOLERANCE}));
    }
    if let Some(e) = expected {
        for (name, s) in &values {
            let delta = (s - e).abs();
            doc.check(&format!("{name} matches expected"), delta <= TOLERANCE, json!({"delta": delta}));
        }
    }
    Ok(doc)
}

fn cmd_singularity(args: &SingularityArgs) -> Result<ReportDocument, CliError> {
    let h = parse_exact_poly(&args.poly)?;
    let (p, _) = parse_point(&args.point, h.nvars(), false)?;
    let mut doc = ReportDocument::new("singularity");
    doc.input("poly", h.to_string()).input("point", vector_json(&p));
    let singular = singular_at_infinity(&h, &p)?;
    doc.value("gradient", vector_json(&h.gradient(&p)));
    if let Some(dir) = &args.direction {
        let (v, _) = parse_point(dir, h.nvars(), false)?;
        doc.input("direction", vector_json(&v));
        let order = match h.vanishing_order(&p, &v)? {
            VanishingOrder::Finite(d) => json!(d),
            VanishingOrder::Infinite => json!("infinite"),
        };
        doc.value("vanishing_order", order);
    }
    doc.check("singular_at_infinity", singular, singular);
    Ok(doc)
}

fn cmd_catalog(args: &CatalogArgs) -> Result<ReportDocument, CliError> {
    if args.tau_max < 3 {
        return Err(CliError::Input("--tau-max must be at least 3".to_string()));
    }
    let families = args
        .families
        .iter()
        .map(|f| f.parse::<Family>().map_err(|e| CliError::Input(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let entries = enumerate(args.tau_max, &families);
    let reports = verify_all(&entries);

    let mut doc = ReportDocument::new("catalog");
    doc.input("tau_max", args.tau_max).input(
        "families",
        Value::Array(families.iter().map(|f| Value::String(f.to_string())).collect()),
    );
    for report in &reports {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        let mut value = json!({
            "poly": report.poly,
            "expected_S": report.expected_s,
            "group_label": report.group_label,
            "components": report.expected_components,
            "signed_symmetries": report.signed_symmetries,
            "checks": report.checks.len(),
            "failed": failed,
        });
        if let Some(c) = &report.curvature {
            value["S_formula"] = json!(c.s_formula);
            value["S_numeric"] = json!(c.s_numeric);
        }
        if let Some(s) = &report.frame_s {
            value["S_frame"] = json!(s);
        }
        if !report.notes.is_empty() {
            value["notes"] = json!(report.notes);
        }
        doc.check(&report.id, report.passed(), value);
    }

    let rows = curvature_rows(args.tau_max, &families);
    doc.value(
        "curvature_table",
        Value::Array(rows.iter().map(|(t, k, s)| json!({"tau": t, "k": k, "S": s})).collect()),
    );
    if let Some(path) = &args.csv {
        fs::write(path, curvature_csv(&rows)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        doc.input("csv", path.display().to_string());
    }
    Ok(doc)
}

/// `(τ, k, S)` for every family (ii) entry, S from the exact closed form.
fn curvature_rows(tau_max: u32, families: &[Family]) -> Vec<(u32, u32, f64)> {
    if !families.contains(&Family::II) {
        return Vec::new();
    }
    (3..=tau_max)
        .flat_map(|tau| {
            (1..)
                .take_while(move |k| 2 * k < tau)
                .map(move |k| (tau, k, to_f64(&family_ii_closed_form(tau, k))))
        })
        .collect()
}

pub fn curvature_csv(rows: &[(u32, u32, f64)]) -> String {
    let mut out = String::from("tau,k,S\n");
    for (tau, k, s) in rows {
        out.push_str(&format!("{tau},{k},{}\n", format_sig12(*s)));
    }
    out
}
