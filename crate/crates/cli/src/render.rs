//! Text, CSV and JSON renderings. Every rendering names the tool version,
//! the primes and the seed, and contains nothing time-dependent unless
//! timings were requested.

use std::fmt::Write;
use std::path::Path;

use clap::ValueEnum;
use fatpoints::error::PrimeValues;
use fatpoints::format::{ConfigFile, FieldDescriptor, TOOL_VERSION};
use fatpoints::plane::CurveIncidence;
use fatpoints::verify::{VerificationReport, CAVEAT};
use fatpoints::{HilbertFunction, PrimeField};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn field_name(f: &FieldDescriptor) -> String {
    match f {
        FieldDescriptor::PrimeField { prime } => format!("F_{prime}"),
        FieldDescriptor::ExactRational => "Q".into(),
    }
}

fn seed_text(seed: Option<u64>) -> String {
    seed.map_or_else(|| "none".into(), |s| s.to_string())
}

pub fn generated(file: &ConfigFile, out: &Path, format: Format) -> String {
    let provenance = serde_json::to_value(&file.provenance).expect("provenance serializes");
    match format {
        Format::Json => json_text(&json!({
            "tool_version": TOOL_VERSION,
            "written": out.display().to_string(),
            "points": file.points.len(),
            "field": file.field,
            "provenance": provenance,
            "seed": file.seed,
        })),
        Format::Csv => format!(
            "# {TOOL_VERSION}\nfile,points,field,provenance,seed\n{},{},{},{},{}\n",
            out.display(),
            file.points.len(),
            field_name(&file.field),
            provenance["kind"].as_str().unwrap_or(""),
            seed_text(file.seed),
        ),
        Format::Table => format!(
            "{TOOL_VERSION}\nwrote {} ({} points over {})\nprovenance: {}\nseed: {}\n",
            out.display(),
            file.points.len(),
            field_name(&file.field),
            serde_json::to_string(&provenance).expect("provenance serializes"),
            seed_text(file.seed),
        ),
    }
}

pub fn hilbert(
    h: &HilbertFunction,
    input: &Path,
    file: &ConfigFile,
    seed: u64,
    format: Format,
) -> String {
    let dh = h.difference().values;
    let method = if h.primes_used.is_empty() {
        "exact"
    } else {
        "modular"
    };
    match format {
        Format::Json => json_text(&json!({
            "tool_version": TOOL_VERSION,
            "input": input.display().to_string(),
            "field": file.field,
            "multiplicities": file.multiplicities,
            "method": method,
            "primes_used": h.primes_used,
            "seed": seed,
            "hilbert_function": h.values,
            "difference": dh,
            "degree": h.degree,
            "stabilization_index": h.stabilization_index,
            "caveat": CAVEAT,
        })),
        Format::Csv => {
            let mut out = format!(
                "# {TOOL_VERSION} primes={} seed={seed}\nt,H,dH\n",
                join(&h.primes_used, ";")
            );
            for (t, d) in dh.iter().enumerate() {
                writeln!(out, "{t},{},{d}", h.value(t)).unwrap();
            }
            out
        }
        Format::Table => {
            let primes = if h.primes_used.is_empty() {
                "none (exact)".to_string()
            } else {
                join(&h.primes_used, ", ")
            };
            format!(
                "{TOOL_VERSION}\ninput: {}\nfield: {}  seed: {seed}\nprimes: {primes}\n\
                 H:  {}\ndH: {}\ndegree: {}\nstabilization index: {}\n{CAVEAT}\n",
                input.display(),
                field_name(&file.field),
                join(&h.values, " "),
                join(&dh, " "),
                h.degree,
                h.stabilization_index,
            )
        }
    }
}

pub fn diag(
    incidences: &[CurveIncidence],
    input: &Path,
    file: &ConfigFile,
    seed: u64,
    format: Format,
) -> String {
    let curve = |e: usize| if e == 1 { "line" } else { "conic" };
    match format {
        Format::Json => json_text(&json!({
            "tool_version": TOOL_VERSION,
            "input": input.display().to_string(),
            "field": file.field,
            "seed": seed,
            "points": file.points.len(),
            "incidences": incidences
                .iter()
                .map(|c| json!({ "degree": c.degree, "count": c.count, "witness": c.witness }))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = format!("# {TOOL_VERSION} seed={seed}\ndegree,count,witness\n");
            for c in incidences {
                writeln!(out, "{},{},{}", c.degree, c.count, join(&c.witness, ";")).unwrap();
            }
            out
        }
        Format::Table => {
            let mut out = format!(
                "{TOOL_VERSION}\ninput: {} ({} points over {})  seed: {seed}\n",
                input.display(),
                file.points.len(),
                field_name(&file.field)
            );
            for c in incidences {
                writeln!(out, "max on a {}: {}", curve(c.degree), c.count).unwrap();
                for &i in &c.witness {
                    writeln!(out, "  #{i:<3} {:?}", file.points[i]).unwrap();
                }
            }
            out
        }
    }
}

pub fn reports(
    reports: &[VerificationReport],
    seed: u64,
    primes: &[PrimeField],
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let v = if let [single] = reports {
                serde_json::to_value(single)
            } else {
                serde_json::to_value(reports)
            };
            json_text(&v.expect("reports serialize"))
        }
        Format::Csv => {
            let mut out = format!(
                "# {TOOL_VERSION} primes={} seed={seed}\nstatement_id,trial,seed,label,passed\n",
                join(&primes.iter().map(|p| p.modulus()).collect::<Vec<_>>(), ";")
            );
            for r in reports {
                for t in &r.trial_records {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        r.statement_id,
                        t.trial,
                        seed_text(t.seed),
                        csv_field(&t.label),
                        t.passed
                    )
                    .unwrap();
                }
                for c in &r.checks {
                    writeln!(
                        out,
                        "{},check,,{},{}",
                        r.statement_id,
                        csv_field(&c.name),
                        c.passed
                    )
                    .unwrap();
                }
            }
            out
        }
        Format::Table => {
            let mut out = format!(
                "{TOOL_VERSION}  seed: {seed}  primes: {}\n",
                join(
                    &primes.iter().map(|p| p.modulus()).collect::<Vec<_>>(),
                    ", "
                )
            );
            for r in reports {
                table_report(&mut out, r);
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            writeln!(out, "\n{passed}/{} reports passed\n{CAVEAT}", reports.len()).unwrap();
            out
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("values serialize")
}

fn table_report(out: &mut String, r: &VerificationReport) {
    let params = r
        .params
        .iter()
        .map(|(k, v)| format!("{k}={}", compact(v)))
        .collect::<Vec<_>>()
        .join(" ");
    writeln!(out, "\n[{}] {}  {params}", r.status, r.statement_id).unwrap();
    writeln!(out, "  trials: {}/{} passed", r.passes, r.trials).unwrap();
    if let Some(secs) = r.runtime_seconds {
        writeln!(out, "  runtime: {secs:.3} s").unwrap();
    }
    if !r.stats.is_empty() {
        let stats = r
            .stats
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect::<Vec<_>>();
        writeln!(out, "  stats: {}", stats.join(", ")).unwrap();
    }
    for c in &r.checks {
        let mark = if c.passed { "ok" } else { "FAILED" };
        writeln!(
            out,
            "  check {}: {mark}  observed {}",
            c.name,
            compact(&c.observed)
        )
        .unwrap();
    }
    for f in &r.failures {
        writeln!(
            out,
            "  failure trial {} seed {} ({}): observed {} expected {}",
            f.trial,
            seed_text(f.seed),
            f.label,
            compact(&f.observed),
            compact(&f.expected)
        )
        .unwrap();
        if let Some(config) = &f.configuration {
            writeln!(out, "    points: {}", compact(&json!(config.points))).unwrap();
        }
    }
}

pub fn artifact(per_prime: &[PrimeValues], format: Format) -> String {
    match format {
        Format::Json => json_text(&json!({
            "tool_version": TOOL_VERSION,
            "field_artifact": per_prime
                .iter()
                .map(|pv| json!({ "prime": pv.prime, "values": pv.values }))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = format!("# {TOOL_VERSION}\nprime,values\n");
            for pv in per_prime {
                writeln!(out, "{},{}", pv.prime, join(&pv.values, ";")).unwrap();
            }
            out
        }
        Format::Table => {
            let mut out = format!("{TOOL_VERSION}\nprimes disagree:\n");
            for pv in per_prime {
                writeln!(out, "  {:>12}  {}", pv.prime, join(&pv.values, " ")).unwrap();
            }
            out
        }
    }
}
