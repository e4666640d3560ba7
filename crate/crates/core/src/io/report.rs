//! JSON documents. Field order is fixed by the struct definitions, exact
//! values are canonical strings and only monodromy data carries floats.

use num_complex::Complex64;
use serde::Serialize;

use super::print::{constant_matrix_to_string, exponent_to_string, matrix_cells, point_to_string};
use crate::algebra::chart::Point;
use crate::algebra::field::FieldElem;
use crate::global::SingularityReport;
use crate::lattice::{Divergence, GaugeCertificate};
use crate::local::{Exponent, LocalAnalysis, PointClass};
use crate::monodromy::{AbelCheck, CMatrix};
use crate::param::specialize::{SampleOutcome, SweepReport};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ExponentJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<String>,
    pub multiplicity: usize,
    pub certified: bool,
}

impl From<&Exponent> for ExponentJson {
    fn from(e: &Exponent) -> Self {
        match e {
            Exponent::Exact { multiplicity, .. } => {
                ExponentJson { value: Some(exponent_to_string(e)), factor: None, multiplicity: *multiplicity, certified: true }
            }
            Exponent::Factor { poly, multiplicity, certified } => ExponentJson {
                value: None,
                factor: Some(poly.display_with("x")),
                multiplicity: *multiplicity,
                certified: *certified,
            },
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct EvidenceJson {
    pub valuation_drop: i64,
    pub steps: usize,
    pub cutoff: i64,
}

impl From<&Divergence> for EvidenceJson {
    fn from(d: &Divergence) -> Self {
        EvidenceJson { valuation_drop: d.valuation_drop, steps: d.steps, cutoff: d.cutoff }
    }
}

/// `F`, the basis `F^-1` and `A'`, in the chart variable `t`.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct CertificateJson {
    pub kind: &'static str,
    pub f: Vec<Vec<String>>,
    pub basis: Vec<Vec<String>>,
    pub a_prime: Vec<Vec<String>>,
}

impl CertificateJson {
    pub fn new(kind: &'static str, c: &GaugeCertificate<FieldElem>) -> Self {
        CertificateJson { kind, f: matrix_cells(&c.f, "t"), basis: matrix_cells(&c.basis(), "t"), a_prime: matrix_cells(&c.a_prime, "t") }
    }
}

pub fn chart_description(p: &Point<FieldElem>) -> String {
    match p {
        Point::Finite(a) if a.to_string() == "0" => "t = z".into(),
        Point::Finite(a) => format!("t = z - ({a})"),
        Point::RootOf(q) => format!("t = z - r, r a root of {}", q.display_with("z")),
        Point::Infinity => "t = 1/z".into(),
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct PointJson {
    pub point: String,
    pub pole: bool,
    pub class: &'static str,
    pub exponents: Vec<ExponentJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateJson>,
}

impl PointJson {
    pub fn new(point: &Point<FieldElem>, pole: bool, a: &LocalAnalysis, certificates: bool) -> Self {
        let (evidence, reason) = match &a.class {
            PointClass::Irregular { evidence } => (Some(evidence.into()), None),
            PointClass::Indeterminate { reason } => (None, Some(reason.clone())),
            _ => (None, None),
        };
        let mut certs = Vec::new();
        if certificates {
            if let Some(c) = &a.reduction {
                certs.push(CertificateJson::new("simple_pole", c));
            }
            if let Some(c) = &a.regular {
                certs.push(CertificateJson::new("holomorphic", c));
            }
        }
        PointJson {
            point: point_to_string(point),
            pole,
            class: a.class.label(),
            exponents: a.class.exponents().iter().map(ExponentJson::from).collect(),
            residue: a.residue.as_ref().map(|r| constant_matrix_to_string(&r.residue)),
            evidence,
            reason,
            certificates: certs,
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ClassifyJson {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub input: String,
    pub dimension: usize,
    pub poles: Vec<String>,
    pub points: Vec<PointJson>,
    pub singular_points: Vec<String>,
    pub regular_singular: bool,
    pub indeterminate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl ClassifyJson {
    pub fn new(input: String, r: &SingularityReport, certificates: bool) -> Self {
        ClassifyJson {
            schema_version: SCHEMA_VERSION,
            kind: "classify",
            input,
            dimension: r.dimension,
            poles: r.pole_points.iter().map(point_to_string).collect(),
            points: r.entries.iter().map(|e| PointJson::new(&e.point, e.pole, &e.analysis, certificates)).collect(),
            singular_points: r.singular_points.iter().map(point_to_string).collect(),
            regular_singular: r.is_regular_singular_system,
            indeterminate: r.indeterminate,
            timing_ms: None,
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ReduceJson {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub input: String,
    pub point: String,
    pub chart: String,
    pub class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub certificates: Vec<CertificateJson>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ExponentsJson {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub input: String,
    pub point: String,
    pub class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_poly: Option<String>,
    pub exponents: Vec<ExponentJson>,
    pub integer_resonances: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SampleJson {
    pub values: Vec<String>,
    pub regular_singular: bool,
    pub poles_contained: bool,
    pub certificates_transported: bool,
    pub indeterminate: bool,
    pub singular_points: Vec<String>,
}

impl From<&SampleOutcome> for SampleJson {
    fn from(o: &SampleOutcome) -> Self {
        SampleJson {
            values: o.values.iter().map(|v| v.to_string()).collect(),
            regular_singular: o.regular_singular,
            poles_contained: o.poles_contained,
            certificates_transported: o.certificates_transported,
            indeterminate: o.indeterminate,
            singular_points: o.singular_points.iter().map(point_to_string).collect(),
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SweepJson {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub input: String,
    pub parameters: Vec<String>,
    pub seed: u64,
    pub samples: usize,
    pub evaluated: usize,
    pub passes: usize,
    pub rejected: usize,
    pub generic_points: Vec<String>,
    pub bad_locus: Vec<String>,
    pub counterexamples: Vec<SampleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl SweepJson {
    pub fn new(input: String, parameters: Vec<String>, r: &SweepReport) -> Self {
        SweepJson {
            schema_version: SCHEMA_VERSION,
            kind: "sweep",
            input,
            parameters,
            seed: r.seed,
            samples: r.requested,
            evaluated: r.outcomes.len(),
            passes: r.passes(),
            rejected: r.rejected,
            generic_points: r.generic_points.iter().map(|p| p.display_with("z")).collect(),
            bad_locus: r.bad_locus.clone(),
            counterexamples: r.counterexamples().into_iter().map(SampleJson::from).collect(),
            timing_ms: Some(r.elapsed_ms),
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SpecializeJson {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub input: String,
    pub assignment: Vec<String>,
    pub matrix: String,
    pub poles: Vec<String>,
    pub points: Vec<PointJson>,
    pub singular_points: Vec<String>,
    pub regular_singular: bool,
    pub indeterminate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct FuchsianJson {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub points: Vec<String>,
    pub residues: Vec<String>,
    pub matrix: String,
    pub infinity_residue: String,
}

/// Real and imaginary parts as decimal strings.
pub type ComplexJson = [String; 2];

pub fn complex_json(z: Complex64) -> ComplexJson {
    let part = |x: f64| {
        let s = format!("{x:.15}");
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    };
    [part(z.re), part(z.im)]
}

pub fn complex_matrix_json(m: &CMatrix) -> Vec<Vec<ComplexJson>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()).collect()
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct AbelJson {
    pub determinant: ComplexJson,
    pub predicted: ComplexJson,
    pub relative_error: f64,
}

impl From<&AbelCheck> for AbelJson {
    fn from(a: &AbelCheck) -> Self {
        AbelJson { determinant: complex_json(a.determinant), predicted: complex_json(a.predicted), relative_error: a.relative_error }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ExponentCheckJson {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub predicted: Vec<ComplexJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct LoopJson {
    pub point: String,
    pub center: ComplexJson,
    pub radius: f64,
    pub matrix: Vec<Vec<ComplexJson>>,
    pub error_estimate: f64,
    pub eigenvalues: Vec<ComplexJson>,
    pub abel: AbelJson,
    pub exponent_check: ExponentCheckJson,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ProductJson {
    /// Loop order, first applied first.
    pub order: Vec<String>,
    pub matrix: Vec<Vec<ComplexJson>>,
    pub distance_from_identity: f64,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct MonodromyJson {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub input: String,
    pub tolerance: f64,
    pub basepoint: ComplexJson,
    pub loops: Vec<LoopJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<ProductJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
