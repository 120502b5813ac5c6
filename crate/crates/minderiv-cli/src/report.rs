//! Report documents. Every command emits exactly one JSON document with a
//! top-level `schema_version`; field order is fixed by the struct
//! definitions, so identical inputs produce byte-identical output. The
//! `example` command can emit CSV instead.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

pub fn render_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("reports serialize");
    out.push('\n');
    out
}

#[derive(Serialize)]
pub struct ErrorDoc {
    pub schema_version: u32,
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
}

#[derive(Serialize)]
pub struct KernelDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub ring: Vec<String>,
    pub derivations: Vec<String>,
    pub degree_bound: u32,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    pub matrix_rank: usize,
    pub basis: Vec<String>,
}

#[derive(Serialize)]
pub struct FirstIntDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub ring: Vec<String>,
    pub derivations: Vec<String>,
    pub degree_bound: u32,
    pub integrals: Vec<String>,
}

#[derive(Serialize)]
pub struct MinimalDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub ring: Vec<String>,
    pub derivations: Vec<String>,
    pub degree_bound: u32,
    pub m_max: u32,
    pub m_star: u32,
    pub per_m: Vec<PerMDoc>,
    /// Coefficient of the combination on each d/dx_i, in ring order.
    pub combination: Vec<String>,
    pub trace: Vec<TraceDoc>,
}

#[derive(Serialize)]
pub struct PerMDoc {
    pub m: u32,
    pub certified: bool,
}

#[derive(Serialize)]
pub struct TraceDoc {
    pub coefficient: String,
    pub member: String,
}

#[derive(Serialize)]
pub struct StraightenDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub mode: &'static str,
    pub ring: Vec<String>,
    pub derivation: String,
    pub truncation_order: u32,
    pub parameters: Vec<String>,
    pub residuals_vanish: bool,
    pub iterations: u32,
    pub update_supports: Vec<SupportDoc>,
}

#[derive(Serialize)]
pub struct SupportDoc {
    pub pass: u32,
    pub degree: Option<u32>,
}

#[derive(Serialize)]
pub struct PairDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub mode: &'static str,
    pub ring: Vec<String>,
    pub derivations: [String; 2],
    pub truncation_order: u32,
    pub parameters: Vec<String>,
    /// Transported coefficients a_i with d2 = d/dx2 + x1 * sum a_i d/dx_i.
    pub coefficients: Vec<String>,
}

#[derive(Serialize)]
pub struct ExampleDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub degree_bound: u32,
    pub points: Vec<PointDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_lines: Option<Vec<[u32; 2]>>,
}

#[derive(Serialize)]
pub struct PointDoc {
    pub lambda1: String,
    pub lambda2: String,
    pub minimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Serialize)]
pub struct NoyauDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub lemma: &'static str,
    pub ring: Vec<String>,
    pub degree_bound: u32,
    pub rows: Vec<NoyauRow>,
    pub all_inert: bool,
}

#[derive(Serialize)]
pub struct NoyauRow {
    pub m: u32,
    pub inert: bool,
}

#[derive(Serialize)]
pub struct Noyau2Doc {
    pub schema_version: u32,
    pub command: &'static str,
    pub lemma: &'static str,
    pub ring: Vec<String>,
    pub rows: Vec<Noyau2Row>,
    pub all_trivial: bool,
}

#[derive(Serialize)]
pub struct Noyau2Row {
    pub k: u32,
    pub m: u32,
    pub trivial_only: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

#[derive(Serialize)]
pub struct WitnessDoc {
    pub p: String,
    pub q: String,
}

/// CSV rendering for the example command: one row per sampled point.
pub fn render_example_csv(doc: &ExampleDoc) -> String {
    let mut out = String::from("lambda1,lambda2,minimal\n");
    for point in &doc.points {
        out.push_str(&format!(
            "{},{},{}\n",
            point.lambda1, point.lambda2, point.minimal
        ));
    }
    out
}
