//! Batch driver: `index`, `verify` and `sweep`.
//!
//! Exit codes: 0 pass, 1 suite failure, 2 certificate failure, 3 configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chern::{calibrate_circle, calibrate_sphere, evaluate_formula, truncate_class, CurvatureData, FormulaReport, GridManifold, ManifoldKind};
use crate::exsym::{
    compose, dagger, homotopy_dagger_to_op, is_invertible, validate, ExtendedSymbol, ExtendedSymbolJson, DEFAULT_T_POINTS,
};
use crate::fock::{annihilation, creation, transpose_dagger, vacuum_projector, FockOperator, FockTruncation};
use crate::index::{
    index_of_extended_with, numerical_index, toeplitz_index, toeplitz_index_with, winding_number, ExtendedIndexOptions,
    IndexResult,
};
use crate::models::{remark3_demo, sublaplacian_symbol_on, toeplitz_phase, ModelGrid, ModelSpec, Remark3Case};
use crate::sampling::{equivariance_residual, homomorphism_residual, quadrature_residual, random_poly, random_sp2, random_trig_symbol};
use crate::weyl::{sharp, weyl_quantize, PolySymbol, Sign, KAPPA};
use crate::{max_abs, CMatrix, Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_SUITE_FAILURE: i32 = 1;
pub const EXIT_CERTIFICATE_FAILURE: i32 = 2;
pub const EXIT_CONFIG_ERROR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "camelCase")]
pub enum ModelKind {
    Sublaplacian,
    Szego,
    ClassicalElliptic,
    Toeplitz,
    OpSymmetric,
    Remark3System,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    C,
    Degree,
    #[value(name = "N")]
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Evaluate the sharp product with the opposite hemisphere sign.
    KappaSign,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long = "symbol-file")]
    pub symbol_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub c: f64,
    /// Fiber dimension; only 1 is implemented for extended symbols.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long = "N-min", default_value_t = 56)]
    pub n_min: usize,
    #[arg(long = "N-max", default_value_t = 64)]
    pub n_max: usize,
    /// Invertibility threshold δ.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    #[arg(long = "curvature-file")]
    pub curvature_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Toeplitz degree `k` of the symbol `e^{ikθ}`.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub degree: i64,
}

#[derive(Debug, Parser)]
#[command(name = "exheis", version, about = "Index computations and verification suites for extended Heisenberg symbols")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index of a model or symbol file, with certificates.
    Index(CommonArgs),
    /// Run every property suite.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Deliberate fault for exercising the suites.
        #[arg(long = "inject-fault", value_enum)]
        inject_fault: Option<Fault>,
    },
    /// Parameter sweep written as CSV.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        axis: SweepAxis,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, allow_negative_numbers = true)]
        step: f64,
    },
}

impl CommonArgs {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.n_min >= self.n_max {
            return Err(Error::Config(format!("--N-min {} must be below --N-max {}", self.n_min, self.n_max)));
        }
        if self.n != 1 {
            return Err(Error::UnsupportedDimension(self.n));
        }
        Ok(())
    }

    fn model_grid(&self) -> ModelGrid {
        ModelGrid { working_degree: self.n_max.max(crate::exsym::DEFAULT_WORKING_DEGREE), grid: self.grid, t_points: DEFAULT_T_POINTS }
    }

    fn model_spec(&self) -> Result<ModelSpec> {
        let spec = match self.model {
            Some(ModelKind::Sublaplacian) => ModelSpec::Sublaplacian { c: self.c },
            Some(ModelKind::Szego) => ModelSpec::Szego,
            Some(ModelKind::ClassicalElliptic) => ModelSpec::ClassicalElliptic { sigma_plus: [-1.0, 0.0], sigma_minus: [1.0, 0.0] },
            Some(ModelKind::Toeplitz) => ModelSpec::Toeplitz { degree: self.degree },
            Some(ModelKind::OpSymmetric) => ModelSpec::OpSymmetric { seed: self.seed },
            Some(ModelKind::Remark3System) => ModelSpec::Remark3System { case: Remark3Case::Rotation, seed: self.seed },
            None => return Err(Error::Config("one of --model or --symbol-file is required".into())),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn extended_options(&self) -> ExtendedIndexOptions {
        ExtendedIndexOptions { delta: self.tol, n_min: self.n_min, n_max: self.n_max, ..ExtendedIndexOptions::default() }
    }
}

/// Exit code for an error: usage and input problems are 3, mathematical certificate failures 2.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::CornerMismatch(_)
        | Error::NonInvertibleParameter(_)
        | Error::InvalidGrid(_)
        | Error::InvalidManifold(_)
        | Error::InvalidTruncation(_)
        | Error::DimensionMismatch(_)
        | Error::UnsupportedDimension(_)
        | Error::AxisOutOfRange { .. }
        | Error::NonFinite => EXIT_CONFIG_ERROR,
        _ => EXIT_CERTIFICATE_FAILURE,
    }
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn write_json(out: Option<&Path>, v: &Value) -> Result<()> {
    write_output(out, &(serde_json::to_string_pretty(v)? + "\n"))
}

/// Parses arguments and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Index(a) => cmd_index(a),
        Command::Verify { common, inject_fault } => cmd_verify(common, *inject_fault),
        Command::Sweep { common, axis, from, to, step } => cmd_sweep(common, *axis, *from, *to, *step),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn reduction_json(r: &crate::exsym::HermiteReduction) -> Value {
    json!({
        "invertibility": r.certificate,
        "lowerResidual": r.lower_residual,
        "lowerArcExact": r.lower_arc_exact,
        "cornerMinModulus": r.corner_min_modulus,
        "cornerWinding": r.corner_winding,
    })
}

fn load_curvature(path: &Path) -> Result<CurvatureData> {
    let raw: CurvatureData = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    CurvatureData::new(raw.manifold, raw.components)
}

/// Index formula for a family constant over the curvature grid.
fn constant_family_formula(tau: &crate::exsym::WeylElement, curv: &CurvatureData, delta: f64) -> Result<FormulaReport> {
    let fam = truncate_class(curv.manifold, |_| Ok(tau.clone()), 0, tau.working_degree(), delta)?;
    evaluate_formula(&fam, Some(curv))
}

pub fn cmd_index(a: &CommonArgs) -> Result<i32> {
    a.validate()?;
    let mut report = json!({ "command": "index", "seed": a.seed, "timestamp": timestamp() });
    let (sigma, source) = match &a.symbol_file {
        Some(path) => {
            let j: ExtendedSymbolJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            (Some(ExtendedSymbol::try_from(j)?), json!({ "symbolFile": path }))
        }
        None => {
            let spec = a.model_spec()?;
            let src = serde_json::to_value(&spec)?;
            match spec {
                ModelSpec::Toeplitz { degree } => {
                    let f = toeplitz_phase(degree, a.grid)?;
                    let res = toeplitz_index(&f)?;
                    report["model"] = src;
                    report["winding"] = json!(winding_number(&f)?);
                    report["index"] = serde_json::to_value(&res)?;
                    write_json(a.out.as_deref(), &report)?;
                    return Ok(EXIT_PASS);
                }
                ModelSpec::Szego | ModelSpec::Remark3System { .. } => {
                    return Err(Error::Config(format!("model {} has no index computation; it is covered by `verify`", src["kind"])));
                }
                _ => (spec.extended_symbol(a.model_grid())?, src),
            }
        }
    };
    let sigma = sigma.expect("extended models produce symbols");
    report["model"] = source;
    report["validation"] = serde_json::to_value(validate(&sigma))?;
    let (res, red) = index_of_extended_with(&sigma, &a.extended_options())?;
    report["index"] = serde_json::to_value(&res)?;
    report["hermiteReduction"] = reduction_json(&red);
    if let Some(path) = &a.curvature_file {
        let curv = load_curvature(path)?;
        let f = constant_family_formula(red.tau_plus(), &curv, a.tol)?;
        report["formula"] = serde_json::to_value(&f)?;
        if f.residual > crate::chern::FORMULA_INTEGRALITY_TOL {
            write_json(a.out.as_deref(), &report)?;
            return Err(Error::NonIntegral { value: f.value, residual: f.residual });
        }
    }
    write_json(a.out.as_deref(), &report)?;
    Ok(EXIT_PASS)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

fn suite(name: &str, residual: f64, tolerance: f64, detail: impl Into<String>) -> SuiteResult {
    SuiteResult { name: name.into(), passed: residual.is_finite() && residual <= tolerance, residual, tolerance, detail: detail.into() }
}

fn failed(name: &str, e: Error) -> SuiteResult {
    SuiteResult { name: name.into(), passed: false, residual: f64::INFINITY, tolerance: 0.0, detail: e.to_string() }
}

type SuiteFn = fn(u64, Option<Fault>) -> Result<SuiteResult>;

fn suite_fock(_: u64, _: Option<Fault>) -> Result<SuiteResult> {
    let t = FockTruncation::new(2, 8)?;
    let block = FockTruncation::new(2, 7)?.dim();
    let mut r: f64 = 0.0;
    for j in 0..2 {
        let a = annihilation(&t, j)?;
        let c = creation(&t, j)?;
        let comm = a.mul(&c)?.sub(&c.mul(&a)?)?;
        r = r.max(max_abs(&(comm.matrix().view((0, 0), (block, block)) - CMatrix::identity(block, block))));
    }
    let s = vacuum_projector(&t);
    r = r.max(max_abs(&(s.mul(&s)?.matrix() - s.matrix())));
    r = r.max(max_abs(annihilation(&t, 0)?.mul(&s)?.matrix()));
    let (a, b) = (creation(&t, 0)?.add(&annihilation(&t, 1)?)?, annihilation(&t, 0)?.scale(Complex64::new(0.0, 2.0)));
    let lhs = transpose_dagger(&a.mul(&b)?);
    let rhs = transpose_dagger(&b).mul(&transpose_dagger(&a))?;
    r = r.max(max_abs(&(lhs.matrix() - rhs.matrix())));
    Ok(suite("fock", r, 1e-12, "CCR on the reliable block, vacuum projector, transpose anti-multiplicativity"))
}

fn suite_sharp(seed: u64, fault: Option<Fault>) -> Result<SuiteResult> {
    let plus = if fault == Some(Fault::KappaSign) { Sign::Minus } else { Sign::Plus };
    let x = PolySymbol::x(1, 0);
    let p = PolySymbol::p(1, 0);
    let kappa = sharp(&x, &p, plus)?.sub(&sharp(&p, &x, plus)?);
    let mut r = kappa.sub(&PolySymbol::constant(1, KAPPA)).max_coeff();
    // the closed form must reproduce the integral; the oracle always uses the true sign
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let a = random_poly(&mut rng, 1, 2);
        let b = random_poly(&mut rng, 1, 2);
        let xi = [0.3, -0.2];
        let closed = crate::weyl::regulated_sharp_reference(&a, &b, plus)?.eval_real(&xi);
        let quad = crate::weyl::sharp_quadrature(&a, &b, Sign::Plus, xi)?;
        r = r.max((closed - quad).norm());
        let c = random_poly(&mut rng, 1, 2);
        let l = sharp(&sharp(&a, &b, plus)?, &c, plus)?;
        let rr = sharp(&a, &sharp(&b, &c, plus)?, plus)?;
        r = r.max(l.sub(&rr).max_coeff());
    }
    Ok(suite("sharp", r, 1e-8, "κ = x#p − p#x, quadrature oracle, associativity"))
}

fn suite_quantization(seed: u64, _: Option<Fault>) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut r: f64 = 0.0;
    for _ in 0..10 {
        let (a, b) = (random_poly(&mut rng, 1, 3), random_poly(&mut rng, 1, 3));
        r = r.max(homomorphism_residual(&a, &b, 24)?);
    }
    Ok(suite("quantization", r, 1e-9, "Op(a#b) = Op(a)Op(b) on the reliable block at N = 24"))
}

fn suite_equivariance(seed: u64, _: Option<Fault>) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut r: f64 = 0.0;
    for _ in 0..10 {
        let alpha = random_sp2(&mut rng);
        let (a, b) = (random_poly(&mut rng, 1, 3), random_poly(&mut rng, 1, 3));
        r = r.max(equivariance_residual(&a, &b, &alpha)?);
    }
    Ok(suite("equivariance", r, 1e-8, "symplectic pullback commutes with #"))
}

fn suite_quadrature(seed: u64, _: Option<Fault>) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let mut r: f64 = 0.0;
    for sign in [Sign::Plus, Sign::Minus] {
        let (a, b) = (random_poly(&mut rng, 1, 3), random_poly(&mut rng, 1, 3));
        r = r.max(quadrature_residual(&a, &b, sign, [0.1, 0.25])?);
    }
    Ok(suite("quadrature", r, 1e-8, "Gauss-Hermite integral against the closed form"))
}

fn suite_toeplitz(seed: u64, _: Option<Fault>) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(4));
    let mut bad = 0;
    for _ in 0..10 {
        let f = random_trig_symbol(&mut rng, 256)?;
        if toeplitz_index(&f)?.index != -winding_number(&f)? {
            bad += 1;
        }
    }
    let cr = numerical_index(|n| creation(&FockTruncation::new(1, n)?, 0), 16, 24)?.index;
    let an = numerical_index(|n| annihilation(&FockTruncation::new(1, n)?, 0), 16, 24)?.index;
    if (cr, an) != (-1, 1) {
        bad += 1;
    }
    Ok(suite("toeplitz", bad as f64, 0.0, "index(T_f) = −winding(f); ladder indices"))
}

fn suite_exsym(_: u64, _: Option<Fault>) -> Result<SuiteResult> {
    let g = ModelGrid { working_degree: 32, grid: 64, t_points: 17 };
    let s = sublaplacian_symbol_on(0.5, g)?;
    let path = homotopy_dagger_to_op(&s, 21, 1e-4, 16)?;
    let mut r = path.start_residual.max(path.end_residual);
    let o = crate::models::op_symmetric_model(3, g)?;
    let l = dagger(&compose(&s, &o)?);
    let rr = compose(&dagger(&o), &dagger(&s))?;
    r = r.max(l.distance(&rr));
    r = r.max(dagger(&dagger(&s)).distance(&s));
    if !is_invertible(&s, 1e-4, 16)?.invertible || path.min_certificate() <= 1e-4 {
        r = f64::INFINITY;
    }
    Ok(suite("exsym", r, 1e-8, "homotopy endpoints, dagger involution and anti-multiplicativity"))
}

fn suite_corollary(_: u64, _: Option<Fault>) -> Result<SuiteResult> {
    let g = ModelGrid { working_degree: 40, grid: 64, t_points: 17 };
    let opts = ExtendedIndexOptions { n_min: 32, n_max: 40, cert_order: 16, ..ExtendedIndexOptions::default() };
    let mut worst: i64 = 0;
    for seed in 0..3 {
        let (res, _) = index_of_extended_with(&crate::models::op_symmetric_model(seed, g)?, &opts)?;
        worst = worst.max(res.index.abs());
    }
    let (res, _) = index_of_extended_with(&sublaplacian_symbol_on(0.5, g)?, &opts)?;
    worst = worst.max(res.index.abs());
    Ok(suite("corollary", worst as f64, 0.0, "op-symmetric and sublaplacian models have index 0"))
}

fn suite_chern(_: u64, _: Option<Fault>) -> Result<SuiteResult> {
    let c = calibrate_circle(8)?;
    let s = calibrate_sphere(12)?;
    let m = GridManifold::uniform(ManifoldKind::T3, 8)?;
    let tau = crate::exsym::WeylElement::constant(crate::exsym::Hemisphere::Upper, Complex64::from(0.75), 8, 16)?;
    let f = constant_family_formula(&tau, &CurvatureData::flat(m), 1e-4)?;
    let r = (c.extrapolated - 1.0).abs().max(f.value.abs());
    // the coarse sphere grid only needs the right integer
    let r = if (s.extrapolated - 1.0).abs() < 0.02 { r } else { f64::INFINITY };
    Ok(suite("chern", r, 1e-3, "circle and sphere calibrations, flat formula"))
}

fn suite_remark3(seed: u64, _: Option<Fault>) -> Result<SuiteResult> {
    let sym = remark3_demo(Remark3Case::Symmetric, seed);
    let rot = remark3_demo(Remark3Case::Rotation, seed);
    let sc = remark3_demo(Remark3Case::Scalar, seed);
    let ok = sym.symmetrization_succeeded && !rot.symmetrization_succeeded && rot.obstruction > 0.1 && sc.obstruction == 0.0;
    Ok(suite("remark3", if ok { 0.0 } else { 1.0 }, 0.0, format!("rotation-slice obstruction {:.6}", rot.obstruction)))
}

pub const SUITES: &[(&str, SuiteFn)] = &[
    ("fock", suite_fock),
    ("sharp", suite_sharp),
    ("quantization", suite_quantization),
    ("equivariance", suite_equivariance),
    ("quadrature", suite_quadrature),
    ("toeplitz", suite_toeplitz),
    ("exsym", suite_exsym),
    ("corollary", suite_corollary),
    ("chern", suite_chern),
    ("remark3", suite_remark3),
];

pub fn run_suites(seed: u64, fault: Option<Fault>) -> Vec<SuiteResult> {
    SUITES.par_iter().map(|(name, f)| f(seed, fault).unwrap_or_else(|e| failed(name, e))).collect()
}

pub fn cmd_verify(a: &CommonArgs, fault: Option<Fault>) -> Result<i32> {
    if !(a.tol > 0.0) {
        return Err(Error::Config(format!("--tol must be positive, got {}", a.tol)));
    }
    let suites = run_suites(a.seed, fault);
    let passed = suites.iter().all(|s| s.passed);
    for s in suites.iter().filter(|s| !s.passed) {
        eprintln!("suite {} FAILED: residual {:e} > {:e} ({})", s.name, s.residual, s.tolerance, s.detail);
    }
    let report = json!({
        "command": "verify",
        "seed": a.seed,
        "timestamp": timestamp(),
        "injectedFault": fault.map(|_| "kappa-sign"),
        "passed": passed,
        "suites": suites,
    });
    write_json(a.out.as_deref(), &report)?;
    Ok(if passed { EXIT_PASS } else { EXIT_SUITE_FAILURE })
}

/// Parameter values `from, from + step, ...` up to `to` inclusive.
pub fn sweep_values(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::Config(format!("malformed sweep range {from}..{to} step {step}")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    if n > 10_000 {
        return Err(Error::Config(format!("sweep of {n} points is too long")));
    }
    // round to the step's decimal scale so that 0.1-steps print cleanly
    Ok((0..n).map(|i| ((from + i as f64 * step) * 1e9).round() / 1e9).collect())
}

/// Fixed block for the residual-vs-N sweep.
pub const SWEEP_BLOCK: usize = 6;

/// `max |Op(a#b) − Op_N(a) Op_N(b)|` on degrees `≤ SWEEP_BLOCK`, with the
/// factors truncated at `N` before multiplying.
pub fn truncated_product_residual(a: &PolySymbol, b: &PolySymbol, n: usize) -> Result<f64> {
    let t = FockTruncation::new(1, n.max(SWEEP_BLOCK))?;
    let prod = weyl_quantize(&sharp(a, b, Sign::Plus)?, &t)?;
    let fa = weyl_quantize(a, &t)?;
    let fb = weyl_quantize(b, &t)?;
    let crop = |m: &FockOperator| -> Result<FockOperator> { m.resize(n)?.resize(t.max_degree()) };
    let naive = crop(&fa)?.mul(&crop(&fb)?)?;
    let d = SWEEP_BLOCK + 1;
    Ok(max_abs(&(prod.matrix() - naive.matrix()).view((0, 0), (d, d)).into_owned()))
}

pub fn cmd_sweep(a: &CommonArgs, axis: SweepAxis, from: f64, to: f64, step: f64) -> Result<i32> {
    if !(a.tol > 0.0) {
        return Err(Error::Config(format!("--tol must be positive, got {}", a.tol)));
    }
    let values = sweep_values(from, to, step)?;
    let mut csv = String::new();
    match axis {
        SweepAxis::C => {
            csv.push_str("c,index,stabilizedAt,certificateMargin,lowerResidual,cornerMinModulus\n");
            let rows: Vec<Result<String>> = values
                .par_iter()
                .map(|&c| {
                    let s = sublaplacian_symbol_on(c, a.model_grid())?;
                    let (res, red) = index_of_extended_with(&s, &a.extended_options())?;
                    Ok(format!(
                        "{c},{},{},{:e},{:e},{:e}\n",
                        res.index,
                        res.stabilized_at,
                        red.certificate.margin(),
                        red.lower_residual,
                        red.corner_min_modulus
                    ))
                })
                .collect();
            for r in rows {
                csv.push_str(&r?);
            }
        }
        SweepAxis::Degree => {
            csv.push_str("degree,index,winding,stabilizedAt,minSingular\n");
            for &k in &values {
                if k.fract() != 0.0 {
                    return Err(Error::Config(format!("degree sweep needs integer values, got {k}")));
                }
                let f = toeplitz_phase(k as i64, a.grid)?;
                let res: IndexResult = toeplitz_index_with(&f, a.n_min, a.n_max)?;
                let ms = res.min_singular.iter().copied().fold(f64::INFINITY, f64::min);
                csv.push_str(&format!("{},{},{},{},{:e}\n", k as i64, res.index, winding_number(&f)?, res.stabilized_at, ms));
            }
        }
        SweepAxis::N => {
            csv.push_str("N,homomorphismResidual\n");
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let (pa, pb) = (random_poly(&mut rng, 1, 3), random_poly(&mut rng, 1, 3));
            for &n in &values {
                if n.fract() != 0.0 || n < 0.0 {
                    return Err(Error::Config(format!("N sweep needs nonnegative integers, got {n}")));
                }
                csv.push_str(&format!("{},{:e}\n", n as usize, truncated_product_residual(&pa, &pb, n as usize)?));
            }
        }
    }
    write_output(a.out.as_deref(), &csv)?;
    Ok(EXIT_PASS)
}
