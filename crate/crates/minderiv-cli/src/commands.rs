//! One function per subcommand. Each returns the rendered report text;
//! `main` decides where it goes.

use minderiv::{
    canonical_pair, delta_m_kernel_is_inert, delta_m_rigidity, enumerate_bad_lines,
    first_integrals, fold_family, kernel_basis, parse_polynomial, parse_rational,
    sample_minimal_locus, straighten, Derivation, Rational, Ring, SeriesDerivation, TruncSeries,
};

use crate::error::CliError;
use crate::manifest::Manifest;
use crate::report::{
    render_example_csv, render_json, ExampleDoc, FirstIntDoc, KernelDoc, MinimalDoc, Noyau2Doc,
    Noyau2Row, NoyauDoc, NoyauRow, PairDoc, PerMDoc, PointDoc, StraightenDoc, SupportDoc,
    TraceDoc, WitnessDoc, SCHEMA_VERSION,
};
use crate::{CommonArgs, ExampleArgs, Format, Lemma, VerifyArgs};

fn load_manifest(args: &CommonArgs) -> Result<Manifest, CliError> {
    let Some(path) = &args.manifest else {
        return Err(CliError::Usage("this command needs --manifest <path>".into()));
    };
    Manifest::load(path)
}

fn load_optional_manifest(args: &CommonArgs) -> Result<Option<Manifest>, CliError> {
    args.manifest.as_deref().map(Manifest::load).transpose()
}

fn json_only(args: &CommonArgs) -> Result<(), CliError> {
    match args.format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(
            "csv output is available for `example` only".into(),
        )),
    }
}

fn required_degree_bound(
    args: &CommonArgs,
    manifest: Option<&Manifest>,
) -> Result<u32, CliError> {
    args.degree_bound
        .or_else(|| manifest.and_then(|m| m.task.degree_bound))
        .ok_or_else(|| {
            CliError::Usage("no degree bound: pass --D or set task.degree_bound".into())
        })
}

fn required_truncation_order(
    args: &CommonArgs,
    manifest: Option<&Manifest>,
) -> Result<u32, CliError> {
    args.truncation_order
        .or_else(|| manifest.and_then(|m| m.task.truncation_order))
        .ok_or_else(|| {
            CliError::Usage("no truncation order: pass --N or set task.truncation_order".into())
        })
}

fn effective_m_max(args: &CommonArgs, manifest: &Manifest) -> u32 {
    args.m_max.or(manifest.task.m_max).unwrap_or(10)
}

pub fn kernel(args: &CommonArgs) -> Result<String, CliError> {
    json_only(args)?;
    let manifest = load_manifest(args)?;
    let degree_bound = required_degree_bound(args, Some(&manifest))?;
    let family = manifest.family()?;
    let report = kernel_basis(&family, degree_bound);
    Ok(render_json(&KernelDoc {
        schema_version: SCHEMA_VERSION,
        command: "kernel",
        ring: manifest.ring.vars().to_vec(),
        derivations: manifest.derivation_names(),
        degree_bound,
        matrix_rows: report.matrix_rows,
        matrix_cols: report.matrix_cols,
        matrix_rank: report.matrix_rank,
        basis: report.basis.iter().map(|p| p.to_string()).collect(),
    }))
}

pub fn firstint(args: &CommonArgs) -> Result<String, CliError> {
    json_only(args)?;
    let manifest = load_manifest(args)?;
    let degree_bound = required_degree_bound(args, Some(&manifest))?;
    let family = manifest.family()?;
    let basis = first_integrals(&family, degree_bound)?;
    Ok(render_json(&FirstIntDoc {
        schema_version: SCHEMA_VERSION,
        command: "firstint",
        ring: manifest.ring.vars().to_vec(),
        derivations: manifest.derivation_names(),
        degree_bound,
        integrals: basis.integrals.iter().map(|p| p.to_string()).collect(),
    }))
}

pub fn minimal(args: &CommonArgs) -> Result<String, CliError> {
    json_only(args)?;
    let manifest = load_manifest(args)?;
    let degree_bound = required_degree_bound(args, Some(&manifest))?;
    let m_max = effective_m_max(args, &manifest);
    let family = manifest.family()?;

    let pairs: Vec<(usize, usize)> = if family.len() <= 1 {
        Vec::new()
    } else if !manifest.task.pairs.is_empty() {
        if manifest.task.pairs.len() != family.len() - 1 {
            return Err(CliError::Usage(format!(
                "task.pairs has {} entries, need one per fold step ({})",
                manifest.task.pairs.len(),
                family.len() - 1
            )));
        }
        manifest
            .task
            .pairs
            .iter()
            .map(|(a, b)| {
                Ok((
                    manifest.variable_index(a, "pairs")?,
                    manifest.variable_index(b, "pairs")?,
                ))
            })
            .collect::<Result<_, CliError>>()?
    } else {
        let (Some(x1), Some(x2)) = (&manifest.task.x1, &manifest.task.x2) else {
            return Err(CliError::Usage(
                "minimal needs task.x1 and task.x2 (or task.pairs) naming the variable pair"
                    .into(),
            ));
        };
        let i1 = manifest.variable_index(x1, "x1")?;
        let i2 = manifest.variable_index(x2, "x2")?;
        vec![(i1, i2); family.len() - 1]
    };

    let cert = fold_family(&family, &pairs, degree_bound, m_max)?;
    Ok(render_json(&MinimalDoc {
        schema_version: SCHEMA_VERSION,
        command: "minimal",
        ring: manifest.ring.vars().to_vec(),
        derivations: manifest.derivation_names(),
        degree_bound,
        m_max,
        m_star: cert.m_star,
        per_m: cert
            .per_m_results
            .iter()
            .map(|&(m, certified)| PerMDoc { m, certified })
            .collect(),
        combination: cert
            .combination
            .coefficients()
            .iter()
            .map(|c| c.to_string())
            .collect(),
        trace: cert
            .coefficient_trace
            .iter()
            .map(|(coefficient, index)| TraceDoc {
                coefficient: coefficient.to_string(),
                member: manifest.derivations[*index].name.clone(),
            })
            .collect(),
    }))
}

fn as_series_derivation(d: &Derivation, order: u32) -> SeriesDerivation {
    SeriesDerivation::new(
        d.coefficients()
            .iter()
            .map(|c| TruncSeries::from_polynomial(c, order))
            .collect(),
    )
}

fn task_series(
    manifest: &Manifest,
    text: &str,
    field: &str,
    order: u32,
) -> Result<TruncSeries, CliError> {
    let poly = parse_polynomial(text, &manifest.ring)
        .map_err(|e| CliError::Context(format!("task {field}"), e))?;
    Ok(TruncSeries::from_polynomial(&poly, order))
}

pub fn straighten_cmd(args: &CommonArgs) -> Result<String, CliError> {
    json_only(args)?;
    let manifest = load_manifest(args)?;
    let order = required_truncation_order(args, Some(&manifest))?;
    if manifest.derivations.is_empty() {
        return Err(CliError::Usage("the manifest defines no derivations".into()));
    }
    let ring = &manifest.ring;
    let x1_text = manifest
        .task
        .x1
        .clone()
        .unwrap_or_else(|| ring.var_name(0).to_string());
    let x1 = task_series(&manifest, &x1_text, "x1", order)?;

    if let Some(x2_text) = &manifest.task.x2 {
        if manifest.derivations.len() < 2 {
            return Err(CliError::Usage(
                "pair straightening needs two derivations in the manifest".into(),
            ));
        }
        let x2 = task_series(&manifest, x2_text, "x2", order)?;
        let d1 = as_series_derivation(&manifest.derivations[0].derivation, order);
        let d2 = as_series_derivation(&manifest.derivations[1].derivation, order);
        let (params, coefficients) = canonical_pair(&d1, &d2, &x1, &x2, order)?;
        return Ok(render_json(&PairDoc {
            schema_version: SCHEMA_VERSION,
            command: "straighten",
            mode: "pair",
            ring: ring.vars().to_vec(),
            derivations: [
                manifest.derivations[0].name.clone(),
                manifest.derivations[1].name.clone(),
            ],
            truncation_order: order,
            parameters: params.components().iter().map(|s| s.to_string()).collect(),
            coefficients: coefficients.iter().map(|s| s.to_string()).collect(),
        }));
    }

    let named = match &manifest.task.derivation {
        Some(name) => manifest.find_derivation(name)?,
        None => &manifest.derivations[0],
    };
    let d = as_series_derivation(&named.derivation, order);
    let result = straighten(&d, &x1, order)?;
    Ok(render_json(&StraightenDoc {
        schema_version: SCHEMA_VERSION,
        command: "straighten",
        mode: "single",
        ring: ring.vars().to_vec(),
        derivation: named.name.clone(),
        truncation_order: order,
        parameters: result
            .params
            .components()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        residuals_vanish: result.residuals.iter().all(TruncSeries::is_zero),
        iterations: result.iterations,
        update_supports: result
            .update_supports
            .iter()
            .map(|&(pass, degree)| SupportDoc { pass, degree })
            .collect(),
    }))
}

fn parse_point_list(text: &str) -> Result<Vec<(Rational, Rational)>, CliError> {
    let mut out = Vec::new();
    for chunk in text.split(';') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let inner = chunk
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| {
                CliError::Usage(format!("point {chunk:?} is not of the form (a,b)"))
            })?;
        let (a, b) = inner.split_once(',').ok_or_else(|| {
            CliError::Usage(format!("point {chunk:?} is not of the form (a,b)"))
        })?;
        let context = || format!("point {chunk:?}");
        out.push((
            parse_rational(a.trim()).map_err(|e| CliError::Context(context(), e))?,
            parse_rational(b.trim()).map_err(|e| CliError::Context(context(), e))?,
        ));
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty point list".into()));
    }
    Ok(out)
}

pub fn example(args: &ExampleArgs) -> Result<String, CliError> {
    let manifest = load_optional_manifest(&args.common)?;
    let degree_bound = required_degree_bound(&args.common, manifest.as_ref())?;
    let points = match &args.points {
        Some(text) => parse_point_list(text)?,
        None => manifest
            .as_ref()
            .map(|m| m.task.points.clone())
            .unwrap_or_default(),
    };
    if points.is_empty() {
        return Err(CliError::Usage(
            "no sample points: pass --points \"(1,1);(2,-3)\" or set task.points".into(),
        ));
    }
    let height = args.height.or_else(|| manifest.as_ref().and_then(|m| m.task.height));
    if height == Some(0) {
        return Err(CliError::Usage("--height must be at least 1".into()));
    }

    let sample = sample_minimal_locus(&points, degree_bound)?;
    let doc = ExampleDoc {
        schema_version: SCHEMA_VERSION,
        command: "example",
        degree_bound,
        points: sample
            .points
            .iter()
            .map(|p| PointDoc {
                lambda1: p.lambda1.to_string(),
                lambda2: p.lambda2.to_string(),
                minimal: p.minimal,
                witness: p.witness.as_ref().map(|w| w.to_string()),
            })
            .collect(),
        bad_lines: height.map(|h| {
            enumerate_bad_lines(h)
                .into_iter()
                .map(|(p, q)| [p, q])
                .collect()
        }),
    };
    Ok(match args.common.format {
        Format::Json => render_json(&doc),
        Format::Csv => render_example_csv(&doc),
    })
}

/// Inclusive range written `a..b`, or a single value `n`.
fn parse_range(text: &str) -> Result<(u32, u32), CliError> {
    let bound = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| CliError::Usage(format!("invalid range bound {:?}", s.trim())))
    };
    match text.split_once("..") {
        Some((a, b)) => {
            let lo = bound(a)?;
            let hi = bound(b)?;
            if lo > hi {
                return Err(CliError::Usage(format!("empty range {text:?}")));
            }
            Ok((lo, hi))
        }
        None => {
            let v = bound(text)?;
            Ok((v, v))
        }
    }
}

pub fn verify(args: &VerifyArgs) -> Result<String, CliError> {
    json_only(&args.common)?;
    let manifest = load_optional_manifest(&args.common)?;
    let ring = manifest
        .as_ref()
        .map(|m| m.ring.clone())
        .unwrap_or_else(|| Ring::new(["x1", "x2"]));

    match args.lemma {
        Lemma::Noyau => {
            let degree_bound = required_degree_bound(&args.common, manifest.as_ref())?;
            let (lo, hi) = parse_range(args.m.as_deref().unwrap_or("1..6"))?;
            let mut rows = Vec::new();
            for m in lo..=hi {
                let inert = delta_m_kernel_is_inert(m, degree_bound, &ring)?;
                rows.push(NoyauRow { m, inert });
            }
            let all_inert = rows.iter().all(|r| r.inert);
            Ok(render_json(&NoyauDoc {
                schema_version: SCHEMA_VERSION,
                command: "verify",
                lemma: "noyau",
                ring: ring.vars().to_vec(),
                degree_bound,
                rows,
                all_inert,
            }))
        }
        Lemma::Noyau2 => {
            let (klo, khi) = parse_range(args.k.as_deref().unwrap_or("0..3"))?;
            let m_range = args.m.as_deref().map(parse_range).transpose()?;
            let mut rows = Vec::new();
            for k in klo..=khi {
                // With no explicit range, check the two smallest exponents
                // inside the rigidity regime m >= k + 4.
                let ms: Vec<u32> = match m_range {
                    Some((lo, hi)) => (lo..=hi).collect(),
                    None => vec![k + 4, k + 5],
                };
                for m in ms {
                    let outcome = delta_m_rigidity(k, m, &ring)?;
                    rows.push(Noyau2Row {
                        k,
                        m,
                        trivial_only: outcome.trivial_only,
                        witness: outcome
                            .witness
                            .map(|(p, q)| WitnessDoc {
                                p: p.to_string(),
                                q: q.to_string(),
                            }),
                    });
                }
            }
            let all_trivial = rows.iter().all(|r| r.trivial_only);
            Ok(render_json(&Noyau2Doc {
                schema_version: SCHEMA_VERSION,
                command: "verify",
                lemma: "noyau2",
                ring: ring.vars().to_vec(),
                rows,
                all_trivial,
            }))
        }
    }
}
