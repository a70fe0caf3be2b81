//! Execution of resolved run configurations: load, compute, write outputs,
//! then the manifest.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde_json::json;

use oscillab_core::averages::{decay_profile, reduction_crosscheck};
use oscillab_core::dynamics::{build_w, entropy_certificate};
use oscillab_core::exact::RationalPoly;
use oscillab_core::oscillation::{
    gowers_norm, gowers_norm_auto, test_order, test_subsequences, verify_po, GowersMethod,
    PhaseSampler,
};
use oscillab_core::sequences::GeneratorSpec;
use oscillab_core::sums::{weighted_sum, PhasePoly, SumResult};
use oscillab_core::{Error, Result};

use crate::config::{load_json, MapJson, RunConfig, ScenarioJson};
use crate::manifest::{output_entry, write_manifest, OutputEntry};
use crate::plot::emit_plot;
use crate::seqio;

pub fn execute(config: &RunConfig, out_dir: &str) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let mut timings: BTreeMap<String, u128> = BTreeMap::new();
    let mut outputs: Vec<OutputEntry> = Vec::new();

    match config {
        RunConfig::Gen { spec, out } => {
            let t = Instant::now();
            let generator = load_generator(spec)?;
            let seq = generator.build()?;
            timings.insert("generate_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let path = resolve(out_dir, out);
            if out.ends_with(".bin") {
                seqio::write_binary(&seq, &path)?;
            } else {
                seqio::write_csv(&seq, &path)?;
            }
            timings.insert("write_ms".into(), t.elapsed().as_millis());
            outputs.push(output_entry(&path)?);
        }

        RunConfig::Sum {
            seq,
            phase,
            grid,
            backend,
            out,
            plot,
        } => {
            let t = Instant::now();
            let sequence = seqio::load_sequence(seq)?;
            let phase_poly = parse_phase(phase, backend)?;
            timings.insert("load_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let mut results: Vec<SumResult> = Vec::with_capacity(grid.len());
            for &n in grid {
                results.push(weighted_sum(&sequence, &phase_poly, n)?);
            }
            timings.insert("compute_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let path = resolve(out_dir, out);
            let mut csv = String::from("N,re,im,modulus,err_bound\n");
            for r in &results {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.n,
                    r.re,
                    r.im,
                    r.modulus(),
                    r.max_phase_error.unwrap_or(0.0)
                ));
            }
            std::fs::write(&path, csv)?;
            outputs.push(output_entry(&path)?);
            if let Some(plot_name) = plot {
                let plot_path = resolve(out_dir, plot_name);
                let points: Vec<(usize, f64)> =
                    results.iter().map(|r| (r.n, r.modulus())).collect();
                emit_plot(&points, "normalized sum modulus vs N", &plot_path)?;
                outputs.push(output_entry(&plot_path)?);
            }
            timings.insert("write_ms".into(), t.elapsed().as_millis());
        }

        RunConfig::Oscillate {
            seq,
            order,
            tau,
            samples,
            grid_den,
            seed,
            grid,
            out,
            plot,
        } => {
            let t = Instant::now();
            let sequence = seqio::load_sequence(seq)?;
            timings.insert("load_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let sampler = make_sampler(*order, *samples, *grid_den, *seed);
            let report = test_order(&sequence, *order, grid, &sampler, *tau)?;
            timings.insert("compute_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let path = resolve(out_dir, out);
            write_json(&path, &report)?;
            outputs.push(output_entry(&path)?);
            if let Some(plot_name) = plot {
                let plot_path = resolve(out_dir, plot_name);
                let points: Vec<(usize, f64)> = report
                    .per_n
                    .iter()
                    .map(|w| (w.n, w.worst_modulus))
                    .collect();
                emit_plot(&points, "worst sampled |S_N| vs N", &plot_path)?;
                outputs.push(output_entry(&plot_path)?);
            }
            timings.insert("write_ms".into(), t.elapsed().as_millis());
        }

        RunConfig::PoVerify {
            seq,
            prime,
            phase,
            n,
            out,
        } => {
            let t = Instant::now();
            let sequence = seqio::load_sequence(seq)?;
            let phase_poly = parse_phase(phase, "exact")?;
            timings.insert("load_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let verification = verify_po(&sequence, *prime, &phase_poly, *n)?;
            timings.insert("compute_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let path = resolve(out_dir, out);
            write_json(&path, &verification)?;
            outputs.push(output_entry(&path)?);
            timings.insert("write_ms".into(), t.elapsed().as_millis());
        }

        RunConfig::Subseq {
            seq,
            stride,
            order,
            tau,
            samples,
            grid_den,
            seed,
            grid,
            out,
        } => {
            let t = Instant::now();
            let sequence = seqio::load_sequence(seq)?;
            timings.insert("load_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let sampler = make_sampler(*order, *samples, *grid_den, *seed);
            let reports = test_subsequences(&sequence, *stride, *order, grid, &sampler, *tau)?;
            timings.insert("compute_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let path = resolve(out_dir, out);
            write_json(&path, &reports)?;
            outputs.push(output_entry(&path)?);
            timings.insert("write_ms".into(), t.elapsed().as_millis());
        }

        RunConfig::MapAnalyze { map, out } => {
            let t = Instant::now();
            let parsed: MapJson = load_json(map)?;
            let map_spec = parsed.build()?;
            timings.insert("load_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let linear_cert = entropy_certificate(&map_spec)?;
            let doubled = build_w(&map_spec);
            let doubled_cert = entropy_certificate(&doubled)?;
            timings.insert("compute_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let path = resolve(out_dir, out);
            write_json(
                &path,
                &json!({
                    "linear": linear_cert,
                    "doubled": doubled_cert,
                }),
            )?;
            outputs.push(output_entry(&path)?);
            timings.insert("write_ms".into(), t.elapsed().as_millis());
        }

        RunConfig::ErgAvg {
            scenario,
            out,
            plot,
        } => {
            let t = Instant::now();
            let sc: ScenarioJson = load_json(scenario)?;
            let map_spec = sc.map.build()?;
            let weights = sc.weights.build()?;
            let grid = sc
                .grid
                .as_ref()
                .ok_or_else(|| Error::BadInput("scenario needs a grid for erg-avg".into()))?
                .lengths()?;
            timings.insert("load_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let profile = decay_profile(
                &weights,
                &map_spec,
                &sc.point,
                &sc.characters,
                &sc.polynomials,
                &grid,
            )?;
            timings.insert("compute_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let path = resolve(out_dir, out);
            let mut csv = String::from("N,re,im,modulus\n");
            for r in &profile.results {
                csv.push_str(&format!("{},{},{},{}\n", r.n, r.re, r.im, r.modulus()));
            }
            std::fs::write(&path, csv)?;
            outputs.push(output_entry(&path)?);
            if let Some(plot_name) = plot {
                let plot_path = resolve(out_dir, plot_name);
                let points: Vec<(usize, f64)> =
                    profile.results.iter().map(|r| (r.n, r.modulus())).collect();
                emit_plot(&points, "multiple average modulus vs N", &plot_path)?;
                outputs.push(output_entry(&plot_path)?);
            }
            timings.insert("write_ms".into(), t.elapsed().as_millis());
        }

        RunConfig::Reduce {
            scenario,
            m_count,
            out,
        } => {
            let t = Instant::now();
            let sc: ScenarioJson = load_json(scenario)?;
            let map_spec = sc.map.build()?;
            timings.insert("load_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let report = reduction_crosscheck(
                &map_spec,
                &sc.point,
                &sc.characters,
                &sc.polynomials,
                *m_count,
            )?;
            timings.insert("compute_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let path = resolve(out_dir, out);
            write_json(&path, &report)?;
            outputs.push(output_entry(&path)?);
            timings.insert("write_ms".into(), t.elapsed().as_millis());
        }

        RunConfig::Gowers {
            seq,
            k,
            method,
            n,
            out,
        } => {
            let t = Instant::now();
            let sequence = seqio::load_sequence(seq)?;
            if *n > sequence.len() {
                return Err(Error::Length(format!(
                    "requested {n} samples from a sequence of length {}",
                    sequence.len()
                )));
            }
            timings.insert("load_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let window = &sequence.values()[..*n];
            let result = match method.as_str() {
                "auto" => gowers_norm_auto(window, *k)?,
                "brute" => gowers_norm(window, *k, GowersMethod::Brute)?,
                "fourier" => gowers_norm(window, *k, GowersMethod::Fourier)?,
                other => {
                    return Err(Error::BadInput(format!(
                        "method must be auto, brute, or fourier, got {other:?}"
                    )))
                }
            };
            timings.insert("compute_ms".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let path = resolve(out_dir, out);
            write_json(&path, &result)?;
            outputs.push(output_entry(&path)?);
            timings.insert("write_ms".into(), t.elapsed().as_millis());
        }
    }

    write_manifest(out_dir, config, timings, outputs)?;
    Ok(())
}

fn resolve(out_dir: &str, name: &str) -> String {
    Path::new(out_dir).join(name).to_string_lossy().into_owned()
}

fn write_json<T: serde::Serialize>(path: &str, value: &T) -> Result<()> {
    let body = serde_json::to_string_pretty(value)
        .map_err(|e| Error::BadInput(format!("serialization: {e}")))?;
    std::fs::write(path, body)?;
    Ok(())
}

fn load_generator(source: &str) -> Result<GeneratorSpec> {
    let trimmed = source.trim_start();
    let text = if trimmed.starts_with('{') {
        trimmed.to_string()
    } else {
        std::fs::read_to_string(source)
            .map_err(|e| Error::BadInput(format!("cannot read {source}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::BadInput(format!("bad generator spec: {e}")))
}

/// Parses the comma-separated phase list for the requested backend. The
/// exact backend refuses decimal coefficients; the float backend accepts
/// both forms.
fn parse_phase(phase: &str, backend: &str) -> Result<PhasePoly> {
    let degree = phase.split(',').count().saturating_sub(1);
    if degree > oscillab_core::limits::DEGREE_CAP {
        return Err(Error::BadInput(format!(
            "phase degree {degree} exceeds cap {}",
            oscillab_core::limits::DEGREE_CAP
        )));
    }
    match backend {
        "exact" => {
            if phase.contains('.') {
                return Err(Error::BadInput(
                    "exact backend takes rational coefficients \"p/q\"; use --backend float".into(),
                ));
            }
            Ok(PhasePoly::Exact(RationalPoly::parse_list(phase)?))
        }
        "float" => {
            let coeffs = phase
                .split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    if let Some((p, q)) = tok.split_once('/') {
                        let p: f64 = p.trim().parse().map_err(|_| bad_phase(tok))?;
                        let q: f64 = q.trim().parse().map_err(|_| bad_phase(tok))?;
                        if q == 0.0 {
                            return Err(bad_phase(tok));
                        }
                        Ok(p / q)
                    } else {
                        tok.parse::<f64>().map_err(|_| bad_phase(tok))
                    }
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(PhasePoly::Float(coeffs))
        }
        other => Err(Error::BadInput(format!(
            "backend must be exact or float, got {other:?}"
        ))),
    }
}

fn bad_phase(tok: &str) -> Error {
    Error::BadInput(format!("bad phase coefficient {tok:?}"))
}

fn make_sampler(order: usize, samples: usize, grid_den: u64, seed: u64) -> PhaseSampler {
    let mut sampler = PhaseSampler::default_for_order(order, seed);
    sampler.random_count = samples;
    if grid_den > 0 {
        sampler.grid_denominator = grid_den;
    }
    sampler
}
