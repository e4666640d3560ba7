//! Subcommands of the `regsing` binary. Each returns the text to print and
//! an exit code: 0 on success, 1 when an analysis is indeterminate, 2 on
//! input errors.

use std::io::IsTerminal;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::algebra::chart::{localize, Point};
use crate::algebra::field::{Field, FieldElem, NumberField, DEFAULT_DEGREE_CAP};
use crate::algebra::matrix::RatFunMatrix;
use crate::algebra::numeric::poly_roots;
use crate::global::{classify_all, embed_matrix, fuchsian_from_residues, infinity_residue, pole_points, AnalysisOptions};
use crate::io::parse::{parse_constant, parse_constant_matrices, parse_document, parse_extension, parse_point, InputDocument};
use crate::io::print::{constant_matrix_to_string, document_to_string, matrix_to_string, point_to_string};
use crate::io::report::*;
use crate::local::{analyze_local, integer_resonances, PointClass};
use crate::monodromy::{
    abel_check, local_monodromy, loop_product, matching_error, predicted_eigenvalues, transfer, CMatrix, LocalMonodromy,
    NumericSystem, Prediction, TransferOptions,
};
use crate::param::specialize::{preservation_sweep, Specialization};

#[derive(Parser, Debug)]
#[command(name = "regsing", version, about = "Singular points of linear differential systems dy/dz = A(z) y")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Input document: optional `params: a, b` line, then a matrix literal.
    pub file: PathBuf,
    /// Declare an algebraic generator, e.g. `x^2-2`.
    #[arg(long, value_name = "POLY")]
    pub field_ext: Option<String>,
    /// Largest degree of algebraic points adjoined during analysis.
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: usize,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, value_name = "OUT")]
    pub json: Option<PathBuf>,
    /// Omit `timing_ms` from reports.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify every pole and infinity.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Include gauge certificates for every point.
        #[arg(long)]
        certificates: bool,
    },
    /// Simple-pole (and, at regular points, holomorphic) certificate at a point.
    Reduce {
        #[command(flatten)]
        common: Common,
        /// `0`, `1/2`, `inf` or `root(z^2+1)`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Residue, characteristic polynomial and exponents at a point.
    Exponents {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Build sum_i R_i/(z - a_i) from points and residue matrices.
    Fuchsian {
        /// Comma separated points.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// File with one constant matrix per point.
        #[arg(long)]
        residues: PathBuf,
        #[arg(long, value_name = "POLY")]
        field_ext: Option<String>,
        /// Write a JSON report to this file; the matrix is printed otherwise.
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Substitute parameter values and classify the result.
    Specialize {
        #[command(flatten)]
        common: Common,
        /// `name=value`, repeatable or comma separated.
        #[arg(long = "set", value_name = "NAME=VALUE", required = true, allow_hyphen_values = true)]
        set: Vec<String>,
    },
    /// Random specializations checked against the generic analysis.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Admissible specializations to check
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Seed for the parameter values, integers in [-10, 10]
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Numerical local monodromy around finite poles.
    Monodromy {
        #[command(flatten)]
        common: Common,
        /// A single pole; all finite poles otherwise.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Local truncation tolerance per unit path length.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Real basepoint; one unit right of all poles by default.
        #[arg(long, allow_hyphen_values = true)]
        basepoint: Option<f64>,
    },
}

/// Text for stdout (and stderr) and the exit code.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: 2 }
    }
}

fn color_enabled() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stdout().is_terminal()
}

fn paint(label: &str) -> String {
    if !color_enabled() {
        return label.to_string();
    }
    let code = match label {
        "regular" => "32",
        "regular_singular" => "36",
        "irregular" => "31",
        _ => "33",
    };
    format!("\x1b[{code}m{label}\x1b[0m")
}

type Fallible<T> = Result<T, Outcome>;

fn read(path: &FsPath) -> Fallible<String> {
    std::fs::read_to_string(path).map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))
}

fn extension(text: &Option<String>) -> Fallible<Option<Arc<NumberField>>> {
    text.as_deref().map(parse_extension).transpose().map_err(|e| Outcome::input_error(format!("--field-ext: {e}")))
}

struct Loaded {
    doc: InputDocument,
    opts: AnalysisOptions,
}

impl Loaded {
    fn new(c: &Common) -> Fallible<Self> {
        let ext = extension(&c.field_ext)?;
        let text = read(&c.file)?;
        let doc = parse_document(&text, ext.as_ref()).map_err(|e| Outcome::input_error(format!("{}: {e}", c.file.display())))?;
        Ok(Loaded { doc, opts: AnalysisOptions { degree_cap: c.degree_cap, extension: ext } })
    }

    fn echo(&self) -> String {
        document_to_string(&self.doc.space, &self.doc.matrix)
    }

    fn plain(&self) -> Fallible<RatFunMatrix<FieldElem>> {
        self.doc.plain_matrix().ok_or_else(|| Outcome::input_error("this command needs a matrix without parameters; use `specialize` first"))
    }

    /// The plain matrix, moved into the declared extension.
    fn embedded(&self) -> Fallible<RatFunMatrix<FieldElem>> {
        let a = self.plain()?;
        match &self.opts.extension {
            Some(k) => embed_matrix(&a, k).map_err(Outcome::input_error),
            None => Ok(a),
        }
    }

    fn point(&self, text: &str) -> Fallible<Point<FieldElem>> {
        parse_point(text, self.opts.extension.as_ref()).map_err(|e| Outcome::input_error(format!("--point: {e}")))
    }
}

fn elapsed(start: Instant, c: &Common) -> Option<f64> {
    (!c.no_timing).then(|| start.elapsed().as_secs_f64() * 1000.0)
}

/// Prints the report, or writes it and prints `summary`.
fn emit(c: &Common, json: String, summary: String, code: i32) -> Outcome {
    match &c.json {
        Some(path) => match std::fs::write(path, json) {
            Ok(()) => Outcome { stdout: summary, stderr: String::new(), code },
            Err(e) => Outcome::input_error(format!("{}: {e}", path.display())),
        },
        None => Outcome { stdout: json, stderr: String::new(), code },
    }
}

fn point_lines(points: &[PointJson]) -> String {
    points.iter().map(|p| format!("{:>12}  {}\n", p.point, paint(p.class))).collect()
}

fn classify(common: &Common, certificates: bool) -> Fallible<Outcome> {
    let l = Loaded::new(common)?;
    let a = l.plain()?;
    let start = Instant::now();
    let report = classify_all(&a, &l.opts).map_err(Outcome::input_error)?;
    let mut json = ClassifyJson::new(l.echo(), &report, certificates);
    json.timing_ms = elapsed(start, common);
    let summary = format!("{}regular singular: {}\n", point_lines(&json.points), json.regular_singular);
    Ok(emit(common, to_json(&json), summary, if report.indeterminate { 1 } else { 0 }))
}

fn reduce(common: &Common, point: &str) -> Fallible<Outcome> {
    let l = Loaded::new(common)?;
    let a = l.embedded()?;
    let p = l.point(point)?;
    let start = Instant::now();
    let (json, code) = match localize(&a, &p, l.opts.degree_cap) {
        Ok(sys) => {
            let an = analyze_local(&sys);
            let mut certs = Vec::new();
            let mut verified = true;
            for (kind, c) in [("simple_pole", &an.reduction), ("holomorphic", &an.regular)] {
                if let Some(c) = c {
                    verified &= c.verify(&sys.matrix);
                    certs.push(CertificateJson::new(kind, c));
                }
            }
            let (evidence, reason) = match &an.class {
                PointClass::Irregular { evidence } => (Some(evidence.into()), None),
                PointClass::Indeterminate { reason } => (None, Some(reason.clone())),
                _ => (None, None),
            };
            let code = i32::from(matches!(an.class, PointClass::Indeterminate { .. }));
            let json = ReduceJson {
                schema_version: SCHEMA_VERSION,
                kind: "reduce",
                input: l.echo(),
                point: point_to_string(&p),
                chart: chart_description(&p),
                class: an.class.label(),
                evidence,
                reason,
                certificates: certs,
                verified,
                timing_ms: None,
            };
            (json, code)
        }
        Err(e) => (
            ReduceJson {
                schema_version: SCHEMA_VERSION,
                kind: "reduce",
                input: l.echo(),
                point: point_to_string(&p),
                chart: chart_description(&p),
                class: "indeterminate",
                evidence: None,
                reason: Some(e.to_string()),
                certificates: Vec::new(),
                verified: false,
                timing_ms: None,
            },
            1,
        ),
    };
    let json = ReduceJson { timing_ms: elapsed(start, common), ..json };
    let mut summary = format!("{}  {}\n", json.point, paint(json.class));
    for c in &json.certificates {
        summary += &format!("{}: F = {:?}, A' = {:?}\n", c.kind, c.f, c.a_prime);
    }
    Ok(emit(common, to_json(&json), summary, code))
}

fn exponents(common: &Common, point: &str) -> Fallible<Outcome> {
    let l = Loaded::new(common)?;
    let a = l.embedded()?;
    let p = l.point(point)?;
    let start = Instant::now();
    let an = match localize(&a, &p, l.opts.degree_cap) {
        Ok(sys) => analyze_local(&sys),
        Err(e) => crate::local::LocalAnalysis {
            class: PointClass::Indeterminate { reason: e.to_string() },
            residue: None,
            reduction: None,
            regular: None,
        },
    };
    let json = ExponentsJson {
        schema_version: SCHEMA_VERSION,
        kind: "exponents",
        input: l.echo(),
        point: point_to_string(&p),
        class: an.class.label(),
        residue: an.residue.as_ref().map(|r| constant_matrix_to_string(&r.residue)),
        char_poly: an.residue.as_ref().map(|r| r.char_poly.display_with("x")),
        exponents: an.class.exponents().iter().map(ExponentJson::from).collect(),
        integer_resonances: an.residue.as_ref().map_or(Vec::new(), |r| integer_resonances(&r.char_poly).iter().map(|m| m.to_string()).collect()),
        timing_ms: elapsed(start, common),
    };
    let code = i32::from(matches!(an.class, PointClass::Indeterminate { .. }));
    let values: Vec<String> = json.exponents.iter().map(|e| e.value.clone().or(e.factor.clone().map(|f| format!("root({f})"))).unwrap_or_default()).collect();
    let summary = format!("{}  {}  exponents: {}\n", json.point, paint(json.class), values.join(", "));
    Ok(emit(common, to_json(&json), summary, code))
}

fn fuchsian(points: &str, residues: &FsPath, field_ext: &Option<String>, json_out: &Option<PathBuf>) -> Fallible<Outcome> {
    let ext = extension(field_ext)?;
    let pts = points
        .split(',')
        .map(|s| parse_constant(s.trim(), ext.as_ref()).map_err(|e| Outcome::input_error(format!("--points: {e}"))))
        .collect::<Fallible<Vec<FieldElem>>>()?;
    let text = read(residues)?;
    let rs = parse_constant_matrices(&text, ext.as_ref()).map_err(|e| Outcome::input_error(format!("{}: {e}", residues.display())))?;
    let a = fuchsian_from_residues(&pts, &rs).map_err(Outcome::input_error)?;
    let matrix = matrix_to_string(&a, "z");
    let Some(path) = json_out else {
        return Ok(Outcome { stdout: format!("{matrix}\n"), ..Default::default() });
    };
    let json = FuchsianJson {
        schema_version: SCHEMA_VERSION,
        kind: "fuchsian",
        points: pts.iter().map(|p| p.to_string()).collect(),
        residues: rs.iter().map(constant_matrix_to_string).collect(),
        matrix: matrix.clone(),
        infinity_residue: constant_matrix_to_string(&infinity_residue(&a).expect("Fuchsian systems have a simple pole at infinity")),
    };
    std::fs::write(path, to_json(&json)).map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))?;
    Ok(Outcome { stdout: format!("{matrix}\n"), ..Default::default() })
}

fn specialize(common: &Common, set: &[String]) -> Fallible<Outcome> {
    let l = Loaded::new(common)?;
    let mut pairs = Vec::new();
    for item in set.iter().flat_map(|s| s.split(',')) {
        let (name, value) = item.split_once('=').ok_or_else(|| Outcome::input_error(format!("--set expects name=value, got `{item}`")))?;
        let v = parse_constant(value.trim(), l.opts.extension.as_ref()).map_err(|e| Outcome::input_error(format!("--set {name}: {e}")))?;
        pairs.push((name.trim().to_string(), v));
    }
    let sys = l.doc.system();
    let c = Specialization::from_assignment(&sys.space, &pairs).map_err(Outcome::input_error)?;
    let start = Instant::now();
    let a = sys.specialize(&c).map_err(Outcome::input_error)?;
    let report = classify_all(&a, &l.opts).map_err(Outcome::input_error)?;
    let base = ClassifyJson::new(l.echo(), &report, false);
    let json = SpecializeJson {
        schema_version: SCHEMA_VERSION,
        kind: "specialize",
        input: base.input,
        assignment: sys.space.names().iter().zip(c.values()).map(|(n, v)| format!("{n}={v}")).collect(),
        matrix: matrix_to_string(&a, "z"),
        poles: base.poles,
        points: base.points,
        singular_points: base.singular_points,
        regular_singular: base.regular_singular,
        indeterminate: base.indeterminate,
        timing_ms: elapsed(start, common),
    };
    let summary = format!("{}\n{}regular singular: {}\n", json.matrix, point_lines(&json.points), json.regular_singular);
    Ok(emit(common, to_json(&json), summary, i32::from(report.indeterminate)))
}

fn sweep(common: &Common, samples: usize, seed: u64) -> Fallible<Outcome> {
    use crate::param::SpecializeError as E;
    let l = Loaded::new(common)?;
    let sys = l.doc.system();
    let report = preservation_sweep(&sys, samples, seed, &l.opts).map_err(|e| match e {
        E::Indeterminate(_) | E::UnsupportedPoles(_) => Outcome { stderr: format!("error: {e}\n"), code: 1, ..Default::default() },
        e => Outcome::input_error(e),
    })?;
    let mut json = SweepJson::new(l.echo(), sys.space.names().to_vec(), &report);
    if common.no_timing {
        json.timing_ms = None;
    }
    let indeterminate = report.outcomes.iter().any(|o| o.indeterminate);
    let summary = format!("{}/{} samples passed ({} rejected)\n", json.passes, json.evaluated, json.rejected);
    Ok(emit(common, to_json(&json), summary, i32::from(indeterminate)))
}

/// Exact pole label, numeric location and the rational value when there is one.
type PoleSite = (String, Complex64, Option<FieldElem>);

fn pole_sites(a: &RatFunMatrix<FieldElem>, opts: &AnalysisOptions) -> Vec<PoleSite> {
    let mut out = Vec::new();
    for p in pole_points(a, opts) {
        match &p {
            Point::Finite(x) => {
                let v = x.to_rational().and_then(|q| q.to_f64()).unwrap_or(f64::NAN);
                out.push((point_to_string(&p), Complex64::new(v, 0.0), Some(x.clone())));
            }
            Point::RootOf(q) => {
                let coeffs: Option<Vec<Complex64>> = q.coeffs().iter().map(|c| c.to_rational().and_then(|r| r.to_f64()).map(|v| Complex64::new(v, 0.0))).collect();
                for z in poly_roots(&coeffs.unwrap_or_default()) {
                    out.push((point_to_string(&p), z, None));
                }
            }
            Point::Infinity => {}
        }
    }
    out.sort_by(|x, y| x.1.re.total_cmp(&y.1.re).then(x.1.im.total_cmp(&y.1.im)));
    out
}

fn loop_json(a: &RatFunMatrix<FieldElem>, sys: &NumericSystem, site: &PoleSite, m: &LocalMonodromy, opts: &TransferOptions) -> Fallible<LoopJson> {
    let path = m.geometry.path();
    let t = transfer(sys, &path, opts).map_err(Outcome::input_error)?;
    let abel = abel_check(sys, &path, &t);
    let observed = m.eigenvalues();
    let exponent_check = match &site.2 {
        None => ExponentCheckJson { status: "skipped", predicted: Vec::new(), max_error: None, notice: Some("exponents are compared at rational points only".into()) },
        Some(x) => match predicted_eigenvalues(a, x).map_err(Outcome::input_error)? {
            Prediction::Eigenvalues(pred) => ExponentCheckJson {
                status: "checked",
                max_error: Some(matching_error(&pred, &observed)),
                predicted: pred.into_iter().map(complex_json).collect(),
                notice: None,
            },
            Prediction::Skipped(notice) => ExponentCheckJson { status: "skipped", predicted: Vec::new(), max_error: None, notice: Some(notice) },
        },
    };
    Ok(LoopJson {
        point: site.0.clone(),
        center: complex_json(site.1),
        radius: m.geometry.radius,
        matrix: complex_matrix_json(&m.matrix),
        error_estimate: m.error_estimate,
        eigenvalues: observed.into_iter().map(complex_json).collect(),
        abel: (&abel).into(),
        exponent_check,
    })
}

fn monodromy(common: &Common, point: &Option<String>, tol: f64, basepoint: Option<f64>) -> Fallible<Outcome> {
    let l = Loaded::new(common)?;
    let a = l.plain()?;
    let sys = NumericSystem::new(&a).map_err(Outcome::input_error)?;
    let opts = TransferOptions::with_tolerance(tol);
    let start = Instant::now();
    let mut sites = pole_sites(&a, &l.opts);
    if let Some(text) = point {
        let p = l.point(text)?;
        if p.is_infinity() {
            return Err(Outcome::input_error("the loop around infinity is the inverse of the product over all finite poles; run without --point"));
        }
        let label = point_to_string(&p);
        sites.retain(|s| s.0 == label);
        if sites.is_empty() {
            return Err(Outcome::input_error(format!("{label} is not a finite pole")));
        }
    }
    let b = Complex64::new(basepoint.unwrap_or_else(|| crate::monodromy::default_basepoint(&sys).re), 0.0);
    let mut loops = Vec::new();
    let mut matrices: Vec<CMatrix> = Vec::new();
    let computed: Vec<_> = {
        use rayon::prelude::*;
        sites.par_iter().map(|s| local_monodromy(&sys, s.1, Some(b), &opts)).collect()
    };
    for (site, m) in sites.iter().zip(computed) {
        let m = m.map_err(Outcome::input_error)?;
        loops.push(loop_json(&a, &sys, site, &m, &opts)?);
        matrices.push(m.matrix);
    }
    let distinct = sites.windows(2).all(|w| (w[1].1.re - w[0].1.re).abs() > 1e-9);
    let product = (point.is_none() && distinct && !matrices.is_empty()).then(|| {
        let prod = loop_product(&matrices);
        let n = prod.nrows();
        ProductJson {
            order: sites.iter().map(|s| s.0.clone()).collect(),
            distance_from_identity: (&prod - CMatrix::identity(n, n)).norm(),
            matrix: complex_matrix_json(&prod),
        }
    });
    let json = MonodromyJson {
        schema_version: SCHEMA_VERSION,
        kind: "monodromy",
        input: l.echo(),
        tolerance: tol,
        basepoint: complex_json(b),
        loops,
        product,
        timing_ms: elapsed(start, common),
    };
    let summary: String = json
        .loops
        .iter()
        .map(|lp| {
            let ev: Vec<String> = lp.eigenvalues.iter().map(|e| format!("{}{}{}i", e[0], if e[1].starts_with('-') { "" } else { "+" }, e[1])).collect();
            format!("{:>12}  eigenvalues {}  (error {:.1e})\n", lp.point, ev.join(", "), lp.error_estimate)
        })
        .collect();
    Ok(emit(common, to_json(&json), summary, 0))
}

pub fn run(cli: &Cli) -> Outcome {
    let r = match &cli.command {
        Command::Classify { common, certificates } => classify(common, *certificates),
        Command::Reduce { common, point } => reduce(common, point),
        Command::Exponents { common, point } => exponents(common, point),
        Command::Fuchsian { points, residues, field_ext, json } => fuchsian(points, residues, field_ext, json),
        Command::Specialize { common, set } => specialize(common, set),
        Command::Sweep { common, samples, seed } => sweep(common, *samples, *seed),
        Command::Monodromy { common, point, tol, basepoint } => monodromy(common, point, *tol, *basepoint),
    };
    r.unwrap_or_else(|e| e)
}
