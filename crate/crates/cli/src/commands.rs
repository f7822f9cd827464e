use std::fs;
use std::path::{Path, PathBuf};

use combsync::noise::PresetLibrary;
use combsync::optics::{filtered_comb, rf_comb_harmonics, Harmonic};
use combsync::sim::{jitter_report, run_scenario_with, scenario_jitter_table, JitterRow};
use combsync::Scenario;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{CliError, Result};
use crate::{Cli, Format};

pub const DEFAULT_SCENARIO: &str = include_str!("../../../scenarios/default.json");

const DEFAULT_OUT: &str = "combsync-out";
const FADING_LENGTHS_KM: [f64; 8] = [0.0, 1.0, 2.0, 5.0, 10.0, 13.08, 20.0, 50.0];
const FADING_FILTERS_HZ: [f64; 4] = [25e9, 50e9, 100e9, 200e9];

/// Scenarios named by `--scenario`, each with a label used for output
/// subdirectories. A directory yields every `*.json` file in it, sorted.
fn load_scenarios(cli: &Cli) -> Result<Vec<(String, Scenario)>> {
    let mut loaded = match &cli.scenario {
        None => vec![(
            "default".to_string(),
            Scenario::from_json(DEFAULT_SCENARIO)?,
        )],
        Some(path) if path.is_dir() => {
            let mut files: Vec<PathBuf> = fs::read_dir(path)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            files.retain(|p| p.extension().is_some_and(|e| e == "json"));
            files.sort();
            if files.is_empty() {
                return Err(CliError::Invalid(format!(
                    "no scenario files in {}",
                    path.display()
                )));
            }
            files
                .iter()
                .map(|p| Ok((label(p), load_one(p)?)))
                .collect::<Result<_>>()?
        }
        Some(path) => vec![(label(path), load_one(path)?)],
    };
    if let Some(seed) = cli.seed {
        for (_, s) in &mut loaded {
            s.seed = seed;
        }
    }
    Ok(loaded)
}

fn load_one(path: &Path) -> Result<Scenario> {
    Scenario::load(path).map_err(|e| match CliError::from(e) {
        CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
        CliError::Io(m) => CliError::Io(format!("{}: {m}", path.display())),
    })
}

fn label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into())
}

fn library() -> Result<PresetLibrary> {
    Ok(PresetLibrary::from_env()?)
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

pub fn run(cli: &Cli) -> Result<()> {
    let scenarios = load_scenarios(cli)?;
    let lib = library()?;
    let root = out_dir(cli);
    let nested = scenarios.len() > 1;
    let outcomes: Vec<Result<String>> = scenarios
        .par_iter()
        .map(|(name, s)| {
            let report = run_scenario_with(s, &lib)?;
            let dir = if nested {
                root.join(name)
            } else {
                root.clone()
            };
            report.write_to_dir(&dir)?;
            Ok(match cli.format {
                Format::Csv => report.summary_line(),
                Format::Json => {
                    let sum = &report.summary;
                    let jitter: serde_json::Map<String, serde_json::Value> = sum
                        .jitter
                        .rows
                        .iter()
                        .map(|r| (r.name.clone(), json!(r.rms_jitter_s * 1e15)))
                        .collect();
                    json!({
                        "scenario": name,
                        "seed": sum.seed,
                        "rms_wander_ps": sum.rms_wander_s * 1e12,
                        "max_offset_ps": sum.max_abs_offset_s * 1e12,
                        "jitter_fs": jitter,
                    })
                    .to_string()
                }
            })
        })
        .collect();
    // report every success before the first failure decides the exit code
    let mut first_err = None;
    for o in outcomes {
        match o {
            Ok(line) => println!("{line}"),
            Err(e) => {
                eprintln!("error: {e}");
                first_err.get_or_insert(e);
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}

pub fn validate(cli: &Cli) -> Result<()> {
    let lib = library()?;
    for (name, s) in load_scenarios(cli)? {
        s.validate(&lib)?;
        println!("valid {name} config_hash={}", s.config_hash());
    }
    Ok(())
}

fn print_rows(rows: &[JitterRow], format: Format) -> Result<()> {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(rows).map_err(|e| CliError::Invalid(e.to_string()))?
        ),
        Format::Csv => {
            println!("name,carrier_hz,rms_jitter_fs,band_lo_hz,band_hi_hz");
            for r in rows {
                println!(
                    "{},{},{},{},{}",
                    r.name,
                    r.carrier_hz,
                    r.rms_jitter_s * 1e15,
                    r.band_hz.0,
                    r.band_hz.1
                );
            }
        }
    }
    Ok(())
}

pub fn presets(cli: &Cli) -> Result<()> {
    let lib = library()?;
    if let Some(dir) = &cli.out {
        lib.save_dir(dir)?;
    }
    let names: Vec<&str> = lib.names().collect();
    print_rows(&jitter_report(&lib, names)?, cli.format)
}

pub fn jitter(cli: &Cli) -> Result<()> {
    let lib = library()?;
    for (_, s) in load_scenarios(cli)? {
        let table = if s.noise_presets.is_empty() {
            let names: Vec<&str> = lib.names().collect();
            combsync::sim::JitterTable {
                rows: jitter_report(&lib, names)?,
                fading: None,
            }
        } else {
            scenario_jitter_table(&s, &lib)?
        };
        match cli.format {
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&table)
                    .map_err(|e| CliError::Invalid(e.to_string()))?
            ),
            Format::Csv => print_rows(&table.rows, Format::Csv)?,
        }
    }
    Ok(())
}

struct FadingRow {
    length_km: f64,
    filter_hz: f64,
    harmonic: Harmonic,
}

fn fading_rows(s: &Scenario) -> Result<Vec<FadingRow>> {
    let mut lengths = FADING_LENGTHS_KM.to_vec();
    let own = s.trunk.length_km + s.feeders.first().map_or(0.0, |f| f.length_km);
    if !lengths.iter().any(|l| (l - own).abs() < 1e-9) {
        lengths.push(own);
        lengths.sort_by(f64::total_cmp);
    }
    let mut rows = Vec::new();
    for &filter_hz in &FADING_FILTERS_HZ {
        let comb = filtered_comb(&s.comb, filter_hz)?;
        for &length_km in &lengths {
            let mut span = s.trunk.dispersive_span();
            span.length_m = length_km * 1e3;
            for harmonic in rf_comb_harmonics(&comb, &span, &s.pd)? {
                rows.push(FadingRow {
                    length_km,
                    filter_hz,
                    harmonic,
                });
            }
        }
    }
    Ok(rows)
}

pub fn fading_table(cli: &Cli) -> Result<()> {
    let mut text = String::new();
    let scenarios = load_scenarios(cli)?;
    for (_, s) in &scenarios {
        let rows = fading_rows(s)?;
        match cli.format {
            Format::Csv => {
                if text.is_empty() {
                    text.push_str("fiber_length_km,filter_bandwidth_hz,k,freq_hz,amplitude\n");
                }
                for r in &rows {
                    text.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.length_km,
                        r.filter_hz,
                        r.harmonic.k,
                        r.harmonic.freq_hz,
                        r.harmonic.amplitude
                    ));
                }
            }
            Format::Json => {
                let value: Vec<_> = rows
                    .iter()
                    .map(|r| {
                        json!({
                            "fiber_length_km": r.length_km,
                            "filter_bandwidth_hz": r.filter_hz,
                            "k": r.harmonic.k,
                            "freq_hz": r.harmonic.freq_hz,
                            "amplitude": r.harmonic.amplitude,
                        })
                    })
                    .collect();
                text.push_str(
                    &serde_json::to_string_pretty(&value)
                        .map_err(|e| CliError::Invalid(e.to_string()))?,
                );
                text.push('\n');
            }
        }
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)?;
        let ext = match cli.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        fs::write(dir.join(format!("fading_table.{ext}")), &text)?;
    }
    print!("{text}");
    Ok(())
}
