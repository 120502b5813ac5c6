//! Manifest loading. A manifest is a TOML document:
//!
//! ```toml
//! schema = 1
//! ring = ["x1", "x2", "y"]
//!
//! [[derivation]]
//! name = "d1"
//! x1 = "1"            # coefficient on d/dx1; omitted variables are zero
//!
//! [[derivation]]
//! name = "d2"
//! x2 = "1"
//! y = "x1"
//!
//! [task]
//! degree_bound = 6
//! m_max = 10
//! x1 = "x1"
//! x2 = "x2"
//! ```
//!
//! Coefficients and task polynomials use the same grammar the reports print,
//! so report output pasted back into a manifest round-trips. Task fields are
//! defaults; the matching command-line flags override them.

use std::collections::BTreeMap;
use std::path::Path;

use minderiv::{parse_polynomial, parse_rational, Derivation, DerivationFamily, Polynomial, Rational, Ring};
use serde::Deserialize;

use crate::error::CliError;

pub struct Manifest {
    pub ring: Ring,
    pub derivations: Vec<NamedDerivation>,
    pub task: Task,
}

pub struct NamedDerivation {
    pub name: String,
    pub derivation: Derivation,
}

#[derive(Default)]
pub struct Task {
    pub degree_bound: Option<u32>,
    pub truncation_order: Option<u32>,
    pub m_max: Option<u32>,
    pub x1: Option<String>,
    pub x2: Option<String>,
    pub derivation: Option<String>,
    pub points: Vec<(Rational, Rational)>,
    pub height: Option<u32>,
    pub pairs: Vec<(String, String)>,
}

#[derive(Deserialize)]
struct RawManifest {
    schema: u32,
    ring: Vec<String>,
    #[serde(default, rename = "derivation")]
    derivations: Vec<RawDerivation>,
    #[serde(default)]
    task: RawTask,
}

#[derive(Deserialize)]
struct RawDerivation {
    name: String,
    #[serde(flatten)]
    coefficients: BTreeMap<String, String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTask {
    degree_bound: Option<u32>,
    truncation_order: Option<u32>,
    m_max: Option<u32>,
    x1: Option<String>,
    x2: Option<String>,
    derivation: Option<String>,
    points: Option<Vec<[String; 2]>>,
    height: Option<u32>,
    pairs: Option<Vec<[String; 2]>>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read manifest {}: {e}", path.display())))?;
        let raw: RawManifest = toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("manifest {}: {e}", path.display())))?;
        if raw.schema != 1 {
            return Err(CliError::Usage(format!(
                "manifest {}: unsupported schema {} (expected 1)",
                path.display(),
                raw.schema
            )));
        }
        let ring = Ring::try_new(raw.ring)?;

        let mut derivations = Vec::new();
        for section in raw.derivations {
            if derivations.iter().any(|d: &NamedDerivation| d.name == section.name) {
                return Err(CliError::Usage(format!(
                    "duplicate derivation name {:?}",
                    section.name
                )));
            }
            let mut coefficients = vec![Polynomial::zero(&ring); ring.len()];
            for (var, text) in &section.coefficients {
                let Some(index) = ring.vars().iter().position(|v| v == var) else {
                    return Err(CliError::Usage(format!(
                        "derivation {:?}: {var:?} is not a ring variable",
                        section.name
                    )));
                };
                coefficients[index] = parse_polynomial(text, &ring).map_err(|e| {
                    CliError::Context(
                        format!("derivation {:?}, coefficient of {var}", section.name),
                        e,
                    )
                })?;
            }
            derivations.push(NamedDerivation {
                name: section.name,
                derivation: Derivation::new(&ring, coefficients),
            });
        }

        let mut points = Vec::new();
        for [a, b] in raw.task.points.unwrap_or_default() {
            let lambda1 = parse_rational(&a)
                .map_err(|e| CliError::Context("task point".into(), e))?;
            let lambda2 = parse_rational(&b)
                .map_err(|e| CliError::Context("task point".into(), e))?;
            points.push((lambda1, lambda2));
        }

        Ok(Manifest {
            ring,
            derivations,
            task: Task {
                degree_bound: raw.task.degree_bound,
                truncation_order: raw.task.truncation_order,
                m_max: raw.task.m_max,
                x1: raw.task.x1,
                x2: raw.task.x2,
                derivation: raw.task.derivation,
                points,
                height: raw.task.height,
                pairs: raw
                    .task
                    .pairs
                    .unwrap_or_default()
                    .into_iter()
                    .map(|[a, b]| (a, b))
                    .collect(),
            },
        })
    }

    /// All manifest derivations as one family, in manifest order.
    pub fn family(&self) -> Result<DerivationFamily, CliError> {
        let members = self.derivations.iter().map(|d| d.derivation.clone()).collect();
        Ok(DerivationFamily::new(members)?)
    }

    pub fn derivation_names(&self) -> Vec<String> {
        self.derivations.iter().map(|d| d.name.clone()).collect()
    }

    pub fn find_derivation(&self, name: &str) -> Result<&NamedDerivation, CliError> {
        self.derivations
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| CliError::Usage(format!("no derivation named {name:?} in the manifest")))
    }

    /// Index of a ring variable given by name, for task fields that must
    /// name a variable rather than a general polynomial.
    pub fn variable_index(&self, name: &str, field: &str) -> Result<usize, CliError> {
        self.ring
            .vars()
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| {
                CliError::Usage(format!("task {field} = {name:?} is not a ring variable"))
            })
    }
}
