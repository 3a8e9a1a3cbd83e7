use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use stoqverif::hamiltonian::{decompose_1sparse, load_instance, normalize_shift, InstanceFile};
use stoqverif::harness::{
    gen_random_instance, instances_csv, load_config, run_experiment, write_reports, ExperimentConfig,
};
use stoqverif::kitaev::{analyze, build_kitaev, write_coordinate_list, ToyVerifier};
use stoqverif::multiprover::{
    max_product_overlap, param_maps, product_test, product_test_circuit, region_csv, region_curve, sw_bound,
    Partition,
};
use stoqverif::oracle::max_acceptance_over_witnesses;
use stoqverif::statevector::{CircuitSpec, OracleRegistry, ProjectorSpec, WitnessFile};
use stoqverif::swap::{compile_generalized, transport_thresholds, GeneralizedVerifier};
use stoqverif::verifier::{
    compiled_acceptance, decide_shifted, decide_stoqsh, parse_rational, to_f64, Backend, Convention, Verifier,
};
use stoqverif::{Error, Result};

#[derive(Parser)]
#[command(name = "stoqverif", version, about = "Stoquastic verifier simulation toolkit")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write outputs into this directory instead of stdout.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Raw,
    Shifted,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Fast,
    Gate,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random stoquastic instance with 0 <= H <= I.
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 16)]
        ell: u32,
    },
    /// Split an instance into d^2 one-sparse terms.
    Decompose {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run the combined verifier on a witness, optionally deciding (alpha, beta).
    Verify(VerifyArgs),
    /// Compile a multi-qubit-projector verifier to a single-qubit one.
    Compile {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        projector: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Product test between two witnesses.
    Pt {
        /// Register sizes, e.g. "2,2".
        #[arg(long)]
        partition: String,
        #[arg(long)]
        psi1: PathBuf,
        /// Defaults to psi1.
        #[arg(long)]
        psi2: Option<PathBuf>,
    },
    /// Parameter maps for (c, s).
    Params {
        #[arg(long)]
        c: String,
        #[arg(long)]
        s: String,
    },
    /// Boundary of the parameter region as CSV.
    Region {
        #[arg(long, default_value_t = 100)]
        resolution: usize,
    },
    /// Clock Hamiltonian checks for a toy verifier.
    Kitaev(KitaevArgs),
    /// Seeded experiment suite; exit code 1 if any check fails.
    Suite {
        /// JSON experiment config; the smoke config is used if absent.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    witness: PathBuf,
    #[arg(long, value_enum, default_value_t = ConventionArg::Shifted)]
    convention: ConventionArg,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, value_enum, default_value_t = BackendArg::Fast)]
    backend: BackendArg,
    /// Attach the spectral-oracle best acceptance.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct KitaevArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    c: String,
    #[arg(long)]
    s: String,
    /// Number of steps; "auto" takes it from the circuit.
    #[arg(long = "T", default_value = "auto")]
    steps: String,
    /// Perturbation weight; defaults to the hardness value.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Write H_init, H_prop, H_out as coordinate lists into this directory.
    #[arg(long)]
    dump: Option<PathBuf>,
}

/// Result of a command: named output files (or stdout) and a pass flag.
struct Output {
    files: Vec<(String, String)>,
    pass: bool,
}

impl Output {
    fn one(name: &str, body: String) -> Self {
        Self { files: vec![(name.to_string(), body)], pass: true }
    }
}

fn pretty(v: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))
}

fn witness(path: &Path) -> Result<stoqverif::statevector::StateVector> {
    WitnessFile::parse(&read(path)?)
}

fn csv_row(pairs: &[(&str, String)]) -> String {
    let head: Vec<&str> = pairs.iter().map(|p| p.0).collect();
    let vals: Vec<&str> = pairs.iter().map(|p| p.1.as_str()).collect();
    format!("{}\n{}\n", head.join(","), vals.join(","))
}

fn run(cli: &Cli) -> Result<Output> {
    let fmt = cli.format;
    match &cli.command {
        Command::Gen { n, d, ell } => {
            let h = gen_random_instance(*n, *d, *ell, cli.seed)?;
            Ok(Output::one("instance.json", pretty(&InstanceFile::from_hamiltonian(&h))?))
        }
        Command::Decompose { instance } => {
            let h = load_instance(instance)?;
            let terms = decompose_1sparse(&h)?;
            if fmt == Format::Csv {
                let mut out = String::from("term,x,y,numerator,sign\n");
                for (j, t) in terms.iter().enumerate() {
                    for (x, y, v) in t.entries().filter(|(x, y, _)| x <= y) {
                        let _ = writeln!(out, "{j},{x},{y},{},{}", v.numerator(), v.sign().as_i8());
                    }
                }
                return Ok(Output::one("terms.csv", out));
            }
            let list: Vec<_> = terms
                .iter()
                .enumerate()
                .map(|(j, t)| {
                    let pairs: Vec<_> = t
                        .entries()
                        .filter(|(x, y, _)| x <= y)
                        .map(|(x, y, v)| json!({"x": x, "y": y, "numerator": v.numerator(), "sign": v.sign().as_i8()}))
                        .collect();
                    json!({"term": j, "pairs": pairs})
                })
                .collect();
            Ok(Output::one("terms.json", pretty(&json!({"n": h.n(), "d": h.d(), "ell": h.ell(), "terms": list}))?))
        }
        Command::Verify(args) => verify(args, fmt),
        Command::Compile { circuit, projector, a, b } => {
            let circ = CircuitSpec::parse(&read(circuit)?, &OracleRegistry::new())?;
            let proj: ProjectorSpec = serde_json::from_str(&read(projector)?)?;
            let std = compile_generalized(&GeneralizedVerifier::new(circ, proj)?)?;
            let mut files = vec![("compiled.txt".to_string(), std.circuit.to_text())];
            match (a, b) {
                (Some(a), Some(b)) => {
                    let (ta, tb) = transport_thresholds(&parse_rational(a)?, &parse_rational(b)?);
                    let body = json!({"a": ta.to_string(), "b": tb.to_string(), "a_value": to_f64(&ta), "b_value": to_f64(&tb)});
                    files.push(("thresholds.json".into(), pretty(&body)?));
                }
                (None, None) => {}
                _ => return Err(Error::Argument("give both --a and --b".into())),
            }
            Ok(Output { files, pass: true })
        }
        Command::Pt { partition, psi1, psi2 } => {
            let part = Partition::parse(partition)?;
            let s1 = witness(psi1)?;
            let s2 = match psi2 {
                Some(p) => witness(p)?,
                None => s1.clone(),
            };
            let pt = product_test(&s1, &s2, &part)?;
            let circuit = product_test_circuit(&s1, &s2, &part)?;
            let mut fields = vec![("product_test", pt.to_string()), ("circuit", circuit.to_string())];
            if psi2.is_none() {
                let ov = max_product_overlap(&s1, &part, cli.seed)?;
                fields.push(("eps", ov.eps.to_string()));
                fields.push(("sw_bound", sw_bound(ov.eps.clamp(0.0, 1.0))?.to_string()));
                fields.push(("heuristic", ov.heuristic.to_string()));
            }
            if fmt == Format::Csv {
                return Ok(Output::one("pt.csv", csv_row(&fields)));
            }
            let obj: serde_json::Map<String, serde_json::Value> = fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.parse::<serde_json::Value>().unwrap_or(serde_json::Value::String(v))))
                .collect();
            Ok(Output::one("pt.json", pretty(&obj)?))
        }
        Command::Params { c, s } => {
            let m = param_maps(&parse_rational(c)?, &parse_rational(s)?)?;
            let v = m.values();
            if fmt == Format::Csv {
                let fields = [
                    ("c", v.c),
                    ("s", v.s),
                    ("c1", v.c1),
                    ("s1", v.s1),
                    ("cc", v.cc),
                    ("sc", v.sc),
                    ("c2", v.c2),
                    ("s2", v.s2),
                ];
                let mut pairs: Vec<(&str, String)> = fields.iter().map(|(k, x)| (*k, x.to_string())).collect();
                pairs.push(("in_region", v.in_region.to_string()));
                return Ok(Output::one("params.csv", csv_row(&pairs)));
            }
            let exact = json!({
                "c1": m.c1.to_string(), "s1": m.s1.to_string(), "cc": m.cc.to_string(),
                "sc": m.sc.to_string(), "c2": m.c2.to_string(), "s2": m.s2.to_string(),
            });
            Ok(Output::one("params.json", pretty(&json!({"values": v, "exact": exact, "closed_form_holds": m.closed_form_holds()}))?))
        }
        Command::Region { resolution } => {
            let pts = region_curve(*resolution)?;
            match fmt {
                Format::Csv => Ok(Output::one("region.csv", region_csv(&pts))),
                Format::Json => Ok(Output::one("region.json", pretty(&pts)?)),
            }
        }
        Command::Kitaev(args) => kitaev(args, cli.seed),
        Command::Suite { config } => {
            let cfg = match config {
                Some(p) => load_config(&read(p)?)?,
                None => ExperimentConfig::smoke(cli.seed),
            };
            let report = run_experiment(&cfg)?;
            if let Some(dir) = &cli.out_dir {
                write_reports(&report, dir)?;
                return Ok(Output { files: vec![], pass: report.pass });
            }
            let body = match fmt {
                Format::Csv => instances_csv(&report),
                Format::Json => pretty(&report)?,
            };
            Ok(Output { files: vec![("report".into(), body)], pass: report.pass })
        }
    }
}

fn verify(args: &VerifyArgs, fmt: Format) -> Result<Output> {
    let h_in = load_instance(&args.instance)?;
    let w = witness(&args.witness)?;
    let (h, convention) = match args.convention {
        ConventionArg::Raw => (normalize_shift(&h_in)?, Convention::Raw),
        ConventionArg::Shifted => (h_in.clone(), Convention::Shifted),
    };
    let oracle = if args.oracle { Some(compiled_acceptance(max_acceptance_over_witnesses(&h)?)) } else { None };
    let body = match (&args.alpha, &args.beta) {
        (Some(a), Some(b)) => {
            let (a, b) = (parse_rational(a)?, parse_rational(b)?);
            let mut rec = match convention {
                Convention::Raw => decide_stoqsh(&h_in, &a, &b, &w)?,
                Convention::Shifted => decide_shifted(&h, &a, &b, &w)?,
            };
            if let Some(m) = oracle {
                rec = rec.with_oracle_max(m);
            }
            if fmt == Format::Csv {
                let t = &rec.thresholds;
                return Ok(Output::one(
                    "decision.csv",
                    csv_row(&[
                        ("p", rec.report.p.to_string()),
                        ("compiled", rec.compiled_acceptance.to_string()),
                        ("a", t.a.to_string()),
                        ("b", t.b.to_string()),
                        ("decision", serde_json::to_value(rec.decision)?.as_str().unwrap_or_default().to_string()),
                    ]),
                ));
            }
            pretty(&rec)?
        }
        (None, None) => {
            let backend = match args.backend {
                BackendArg::Fast => Backend::Fast,
                BackendArg::Gate => Backend::GateLevel,
            };
            let r = Verifier::new(&h, backend)?.run(&w)?;
            if fmt == Format::Csv {
                let mut pairs = vec![
                    ("energy", r.energy.to_string()),
                    ("p1", r.p1.to_string()),
                    ("p2", r.p2.to_string()),
                    ("p", r.p.to_string()),
                    ("analytic_p1", r.analytic_p1.to_string()),
                    ("analytic_p2", r.analytic_p2.to_string()),
                    ("analytic_p", r.analytic_p.to_string()),
                    ("compiled_p", r.compiled_p.to_string()),
                ];
                if let Some(m) = oracle {
                    pairs.push(("oracle_max_compiled", m.to_string()));
                }
                return Ok(Output::one("verify.csv", csv_row(&pairs)));
            }
            let mut v = serde_json::to_value(&r)?;
            if let Some(m) = oracle {
                v["oracle_max_compiled"] = json!(m);
            }
            pretty(&v)?
        }
        _ => return Err(Error::Argument("give both --alpha and --beta".into())),
    };
    Ok(Output::one("verify.json", body))
}

fn kitaev(args: &KitaevArgs, seed: u64) -> Result<Output> {
    let v = ToyVerifier::parse(&read(&args.circuit)?)?;
    if args.steps != "auto" {
        let t: usize = args.steps.parse().map_err(|_| Error::Argument(format!("bad --T {:?}", args.steps)))?;
        if t != v.steps() {
            return Err(Error::Argument(format!("--T {t} but the circuit has {} steps", v.steps())));
        }
    }
    let report = analyze(&v, &parse_rational(&args.c)?, &parse_rational(&args.s)?, args.delta, seed)?;
    if let Some(dir) = &args.dump {
        let ham = build_kitaev(&v, report.delta)?;
        fs::create_dir_all(dir)?;
        for (name, m) in [("h_init.txt", &ham.h_init), ("h_prop.txt", &ham.h_prop), ("h_out.txt", &ham.h_out)] {
            write_coordinate_list(m, std::io::BufWriter::new(fs::File::create(dir.join(name))?))?;
        }
    }
    let body = pretty(&report)?;
    if let Some(path) = &args.output {
        fs::write(path, body)?;
        return Ok(Output { files: vec![], pass: report.pass });
    }
    Ok(Output { files: vec![("kitaev.json".into(), body)], pass: report.pass })
}

fn emit(out: &Output, dir: Option<&Path>) -> Result<()> {
    match dir {
        Some(d) => {
            fs::create_dir_all(d)?;
            for (name, body) in &out.files {
                fs::write(d.join(name), body)?;
            }
        }
        None => {
            for (_, body) in &out.files {
                print!("{body}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|out| emit(&out, cli.out_dir.as_deref()).map(|_| out.pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
