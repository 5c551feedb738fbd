//! `holo`: batch CLI over the exact matchgate / holographic-algorithm
//! library. Exit codes: 0 success, 1 verification failure (with the
//! failing check named), 2 parse or usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use holo_core::collapse::{
    classify_domain3, collapse_domain2, collapse_domain4, CollapseInstance, CollapseOptions,
    CollapseResult, Domain3Classification,
};
use holo_core::doppler;
use holo_core::formats;
use holo_core::holant::{holant_contract, holant_via_perfmatch, DEFAULT_WIRE_BOUND};
use holo_core::signature::{MgiOutcome, ParityClass};

#[derive(Parser)]
#[command(name = "holo", version, about = "exact matchgate and holographic-algorithm toolkit")]
struct Cli {
    /// Output shape: human text or machine-readable JSON.
    #[arg(long, global = true, value_enum, default_value_t = Report::Text)]
    report: Report,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted perfect-matching sum of a planar graph via the FKT route.
    Perfmatch { graph: PathBuf },
    /// Standard signature of a matchgate, as a signature file.
    Signature { matchgate: PathBuf },
    /// Parity Condition + Matchgate Identities report for a signature.
    Verify { signature: PathBuf },
    /// Basis transforms: generator tensors to standard signatures, or
    /// standard signatures to domain recognizers.
    Transform(TransformArgs),
    /// Holant of a matchgrid by contraction and/or PerfMatch.
    Holant(HolantArgs),
    /// Basis collapse pipelines and the domain-3 classifier.
    Collapse(CollapseArgs),
    /// The Doppler Shift count, by brute force and/or holographically.
    Doppler(DopplerArgs),
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long)]
    basis: PathBuf,
    /// Domain-k generator tensor to push through M^{ox n}.
    #[arg(long, conflicts_with = "recognizer")]
    generator: Option<PathBuf>,
    /// Standard signature to contract with M^{ox n} into a recognizer.
    #[arg(long)]
    recognizer: Option<PathBuf>,
}

#[derive(Args)]
struct HolantArgs {
    matchgrid: PathBuf,
    /// Contract the standard signatures over the connecting wires.
    #[arg(long)]
    contract: bool,
    /// PerfMatch of the assembled union graph.
    #[arg(long)]
    perfmatch: bool,
}

#[derive(Args)]
struct CollapseArgs {
    manifest: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
    domain: u8,
    /// Directory for the collapsed basis, transducer and signature files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the input-realization verification (tamper harnesses only).
    #[arg(long, default_value_t = false)]
    no_verify_inputs: bool,
}

#[derive(Args)]
struct DopplerArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Holo,
    Brute,
    Both,
}

enum Failure {
    /// Exit 1: a named verification failed.
    Check(String),
    /// Exit 2: bad input.
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Perfmatch { graph } => {
            let g = formats::load_graph(graph)?;
            let value = g.perfmatch()?;
            match cli.report {
                Report::Text => println!("perfmatch {value}"),
                Report::Json => println!("{}", json!({ "perfmatch": value.to_string() })),
            }
            Ok(())
        }
        Command::Signature { matchgate } => {
            let gate = formats::load_matchgate(matchgate)?;
            let sig = gate.standard_signature()?;
            match cli.report {
                Report::Text => print!("{}", formats::write_signature(&sig)),
                Report::Json => println!(
                    "{}",
                    json!({
                        "k": sig.k(),
                        "n": sig.arity(),
                        "role": sig.role().to_string(),
                        "entries": sig.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    })
                ),
            }
            Ok(())
        }
        Command::Verify { signature } => {
            let sig = formats::load_signature(signature)?;
            let parity = sig.parity_check()?;
            let (parity_name, parity_ok) = match &parity {
                ParityClass::EvenMatchgate => ("even".to_string(), true),
                ParityClass::OddMatchgate => ("odd".to_string(), true),
                ParityClass::Violation { even_witness, odd_witness } => (
                    format!("violation (nonzero at {even_witness} and {odd_witness})"),
                    false,
                ),
            };
            let mgi = sig.mgi_check()?;
            let (mgi_desc, mgi_ok) = match &mgi {
                MgiOutcome::Pass => ("pass".to_string(), true),
                MgiOutcome::Fail { alpha, positions, residual } => (
                    format!("fail at alpha={alpha} P={positions:?} residual={residual}"),
                    false,
                ),
            };
            let ok = parity_ok && mgi_ok;
            match cli.report {
                Report::Text => {
                    println!("parity: {parity_name}");
                    println!("mgi: {mgi_desc}");
                    println!("{}", if ok { "PASS" } else { "FAIL" });
                }
                Report::Json => println!(
                    "{}",
                    json!({ "parity": parity_name, "mgi": mgi_desc, "standard_signature": ok })
                ),
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Check(if parity_ok {
                    format!("matchgate identities: {mgi_desc}")
                } else {
                    format!("parity condition: {parity_name}")
                }))
            }
        }
        Command::Transform(args) => {
            let basis = formats::load_basis(&args.basis)?;
            let out = if let Some(path) = &args.generator {
                basis.generator_to_standard(&formats::load_signature(path)?)?
            } else if let Some(path) = &args.recognizer {
                basis.recognizer_from_standard(&formats::load_signature(path)?)?
            } else {
                return Err(Failure::Usage("one of --generator/--recognizer required".into()));
            };
            match cli.report {
                Report::Text => print!("{}", formats::write_signature(&out)),
                Report::Json => println!(
                    "{}",
                    json!({
                        "k": out.k(),
                        "n": out.arity(),
                        "role": out.role().to_string(),
                        "entries": out.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    })
                ),
            }
            Ok(())
        }
        Command::Holant(args) => {
            let grid = formats::load_matchgrid(&args.matchgrid)?;
            let (do_contract, do_pm) = if args.contract || args.perfmatch {
                (args.contract, args.perfmatch)
            } else {
                (true, true)
            };
            let mut contract_value = None;
            let mut pm_value = None;
            if do_contract {
                let (gens, recs) = grid.standard_signatures()?;
                let wires = grid.wires()?;
                contract_value = Some(holant_contract(&gens, &recs, &wires, DEFAULT_WIRE_BOUND)?);
            }
            if do_pm {
                pm_value = Some(holant_via_perfmatch(&grid)?);
            }
            match cli.report {
                Report::Text => {
                    if let Some(v) = &contract_value {
                        println!("holant contract {v}");
                    }
                    if let Some(v) = &pm_value {
                        println!("holant perfmatch {v}");
                    }
                }
                Report::Json => println!(
                    "{}",
                    json!({
                        "contract": contract_value.as_ref().map(|v| v.to_string()),
                        "perfmatch": pm_value.as_ref().map(|v| v.to_string()),
                    })
                ),
            }
            if let (Some(a), Some(b)) = (&contract_value, &pm_value) {
                if a != b {
                    return Err(Failure::Check(format!(
                        "Holant theorem: contract {a} != perfmatch {b}"
                    )));
                }
            }
            Ok(())
        }
        Command::Collapse(args) => run_collapse(cli, args),
        Command::Doppler(args) => {
            let g = formats::load_graph(&args.graph)?;
            let brute = match args.method {
                Method::Brute | Method::Both => Some(doppler::doppler_bruteforce(&g)?),
                Method::Holo => None,
            };
            let holo = match args.method {
                Method::Holo | Method::Both => Some(doppler::doppler_holographic(&g)?),
                Method::Brute => None,
            };
            match cli.report {
                Report::Text => {
                    if let Some(b) = brute {
                        println!("doppler brute {b}");
                    }
                    if let Some(h) = &holo {
                        println!("doppler holo {}", h.count);
                        let fam = |name: &str, f: &doppler::FamilyCheck| {
                            println!(
                                "appendix-claim {name} family [{}]: {}{}",
                                f.layout,
                                if f.standard { "PASS" } else { "FAIL" },
                                f.witness.as_deref().map(|w| format!(" ({w})")).unwrap_or_default()
                            );
                        };
                        fam("edge", &h.edge_family);
                        fam("vertex", &h.vertex_family);
                    }
                }
                Report::Json => {
                    let fam = |f: &doppler::FamilyCheck| {
                        json!({ "layout": f.layout, "standard": f.standard, "witness": f.witness })
                    };
                    println!(
                        "{}",
                        json!({
                            "brute": brute,
                            "holo": holo.as_ref().map(|h| h.count),
                            "edge_family": holo.as_ref().map(|h| fam(&h.edge_family)),
                            "vertex_family": holo.as_ref().map(|h| fam(&h.vertex_family)),
                        })
                    );
                }
            }
            if let (Some(b), Some(h)) = (brute, &holo) {
                if b != h.count {
                    return Err(Failure::Check(format!(
                        "doppler mismatch: brute {b} vs holographic {}",
                        h.count
                    )));
                }
            }
            Ok(())
        }
    }
}

fn run_collapse(cli: &Cli, args: &CollapseArgs) -> Result<(), Failure> {
    let manifest = formats::load_collapse_manifest(&args.manifest)?;
    if args.domain == 3 {
        let gens: Vec<_> = manifest.generators.iter().map(|(g, _)| g.clone()).collect();
        let outcome = classify_domain3(&manifest.basis, &gens)?;
        let (label, detail) = match &outcome {
            Domain3Classification::FullRankImpossible { witness } => {
                ("FullRankImpossible", witness.clone())
            }
            Domain3Classification::ExternalRank2Reduction => (
                "ExternalRank2Reduction",
                "rank-2 basis: the domain-2 reduction is an external procedure".to_string(),
            ),
            Domain3Classification::TrivialDegenerate => (
                "TrivialDegenerate",
                "all generators degenerate; the Holant is trivial".to_string(),
            ),
        };
        match cli.report {
            Report::Text => println!("domain-3 classification: {label} ({detail})"),
            Report::Json => {
                println!("{}", json!({ "classification": label, "detail": detail }))
            }
        }
        return Ok(());
    }

    let require_under = |pairs: Vec<(holo_core::Signature, Option<holo_core::Signature>)>| {
        pairs
            .into_iter()
            .map(|(tensor, under)| {
                under
                    .map(|u| (tensor.clone(), u))
                    .ok_or_else(|| Failure::Usage("collapse needs <tensor> <standard> pairs".into()))
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let inst = CollapseInstance {
        basis: manifest.basis,
        generators: require_under(manifest.generators)?,
        recognizers: require_under(manifest.recognizers)?,
        wiring: if manifest.wires.is_empty() { None } else { Some(manifest.wires) },
    };
    let options = CollapseOptions { verify_inputs: !args.no_verify_inputs };
    let run = if args.domain == 2 {
        collapse_domain2(&inst, options)
    } else {
        collapse_domain4(&inst, options)
    };
    let result = match run {
        Ok(r) => r,
        Err(e) => return Err(Failure::Check(e.to_string())),
    };
    emit_collapse(cli, args, &result)?;
    Ok(())
}

fn emit_collapse(cli: &Cli, args: &CollapseArgs, result: &CollapseResult) -> Result<(), Failure> {
    match cli.report {
        Report::Text => {
            for line in &result.report {
                println!(
                    "{} {} ({})",
                    if line.pass { "PASS" } else { "FAIL" },
                    line.name,
                    line.witness
                );
            }
            if let Some(cert) = &result.certificate {
                println!(
                    "certificate: t={} sigma={} tau={} zeta={} eta={} d={} d'={}",
                    cert.t, cert.sigma, cert.tau, cert.zeta, cert.eta, cert.d, cert.d_prime
                );
            }
        }
        Report::Json => {
            println!(
                "{}",
                json!({
                    "report": result
                        .report
                        .iter()
                        .map(|l| json!({ "check": l.name, "pass": l.pass, "witness": l.witness }))
                        .collect::<Vec<_>>(),
                    "certificate": result.certificate.as_ref().map(|c| json!({
                        "t": c.t,
                        "sigma": c.sigma.to_string(),
                        "tau": c.tau.to_string(),
                        "zeta": c.zeta.to_string(),
                        "eta": c.eta.to_string(),
                        "d": c.d,
                        "d_prime": c.d_prime,
                    })),
                    "sub_basis_rows": result.sub_basis.rows(),
                })
            );
        }
    }
    if let Some(dir) = &args.out {
        write_collapse_outputs(dir, result)?;
    }
    Ok(())
}

fn write_collapse_outputs(dir: &Path, result: &CollapseResult) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(e.to_string()))?;
    let write = |name: &str, content: String| {
        std::fs::write(dir.join(name), content).map_err(|e| Failure::Usage(e.to_string()))
    };
    write("sub_basis.matrix", formats::write_matrix(&result.sub_basis))?;
    write("transducer.matrix", formats::write_matrix(&result.transducer))?;
    let mut manifest = String::from("# collapsed output manifest\n");
    for (j, sig) in result.generators.iter().enumerate() {
        let name = format!("generator{j}.sig");
        write(&name, formats::write_signature(sig))?;
        manifest.push_str(&format!("generator {name}\n"));
    }
    for (i, sig) in result.recognizers.iter().enumerate() {
        let name = format!("recognizer{i}.sig");
        write(&name, formats::write_signature(sig))?;
        manifest.push_str(&format!("recognizer {name}\n"));
    }
    let mut report = String::new();
    for line in &result.report {
        report.push_str(&format!(
            "{} {} ({})\n",
            if line.pass { "PASS" } else { "FAIL" },
            line.name,
            line.witness
        ));
    }
    write("report.txt", report)?;
    write("out.manifest", manifest)?;
    Ok(())
}
