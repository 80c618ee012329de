use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jicert_core::certifier::{certify_system, CheckOptions, CheckStatus, DEFAULT_SUBGROUP_BOUND};
use jicert_core::normal::{chief_factors, critical_pairs, normal_subgroups, SeriesChoice};
use jicert_core::report::{emit_report, CertificateReport, Format};
use jicert_core::system::{build_wreath_tower, parse_system, TowerSpec};
use jicert_core::{Error, Mode, PermGroup, DEFAULT_DENSE_BOUND};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "jicert",
    version,
    about = "Certify finite prefixes of inverse systems of finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a prefix file and print a report.
    Check {
        file: PathBuf,
        /// Wilson's conditions on the kernels.
        #[arg(long)]
        wilson: bool,
        /// Condition (*) at every marked stage.
        #[arg(long)]
        star: bool,
        /// The strengthened conditions (dichotomy and central indecomposability).
        #[arg(long)]
        thmb: bool,
        /// Also write the JSON report here.
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
        #[arg(long, value_name = "N", default_value_t = DEFAULT_DENSE_BOUND)]
        dense_bound: usize,
        /// Groups above this order only get a cyclic-subgroup search.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_SUBGROUP_BOUND)]
        subgroup_bound: usize,
        /// Recorded in the report. The checks themselves are deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Do not derive A-marks for unmarked input.
        #[arg(long)]
        no_derive: bool,
    },
    /// Write an iterated wreath-product tower such as `S3@2` or `C2,S3@3`.
    BuildWreath {
        spec: TowerSpec,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
        /// Build in chain mode (no element tables).
        #[arg(long)]
        chain: bool,
        #[arg(long, value_name = "N", default_value_t = DEFAULT_DENSE_BOUND)]
        dense_bound: usize,
    },
    /// Dump the normal lattice, critical pairs and chief factors of a stage.
    Lattice {
        file: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long, value_name = "N", default_value_t = DEFAULT_DENSE_BOUND)]
        dense_bound: usize,
    },
}

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Check {
            file,
            wilson,
            star,
            thmb,
            json,
            dense_bound,
            subgroup_bound,
            seed,
            no_derive,
        } => {
            let bytes = read(&file)?;
            let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Input("input is not UTF-8".into()))?;
            let prefix = parse_system(&text, dense_bound)?;
            let opts = CheckOptions {
                wilson,
                star,
                strengthened: thmb,
                subgroup_bound,
                derive_marks: !no_derive,
            };
            let cert = certify_system(&prefix, &opts)?;
            let report = CertificateReport::new(&bytes, seed, &opts, dense_bound, cert);
            print!("{}", emit_report(&report, Format::Text));
            if let Some(out) = json {
                write(&out, &emit_report(&report, Format::Json))?;
            }
            Ok(match report.overall() {
                CheckStatus::Pass | CheckStatus::NotApplicable => 0,
                CheckStatus::Fail => EXIT_FAIL,
                CheckStatus::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Command::BuildWreath {
            spec,
            output,
            chain,
            dense_bound,
        } => {
            let mode = if chain { Mode::Chain } else { Mode::Dense };
            let prefix = build_wreath_tower(&spec, mode, dense_bound)?;
            write(&output, &prefix.to_json())?;
            let orders: Vec<String> = prefix.stages().iter().map(|s| s.group().order().to_string()).collect();
            println!("wrote {} stages, orders [{}]", prefix.len(), orders.join(", "));
            Ok(0)
        }
        Command::Lattice {
            file,
            stage,
            dense_bound,
        } => {
            let bytes = read(&file)?;
            let text = String::from_utf8(bytes).map_err(|_| Failure::Input("input is not UTF-8".into()))?;
            let prefix = parse_system(&text, dense_bound)?;
            if stage >= prefix.len() {
                return Err(Failure::Input(format!(
                    "stage {stage} out of range, the prefix has {} stages",
                    prefix.len()
                )));
            }
            print!("{}", lattice_dump(prefix.group(stage))?);
            Ok(0)
        }
    }
}

fn gens(g: &PermGroup) -> String {
    let list: Vec<String> = g.generators().iter().map(|p| p.to_string()).collect();
    format!("<{}>", list.join(", "))
}

fn lattice_dump(g: &PermGroup) -> Result<String, Failure> {
    let normals = normal_subgroups(g)?;
    let index = |h: &PermGroup| normals.iter().position(|n| n == h).expect("lattice member");
    let mut out = format!("normal subgroups ({}):\n", normals.len());
    for (i, n) in normals.iter().enumerate() {
        out.push_str(&format!("  N{i:<3} order {:<8} {}\n", n.order(), gens(n)));
    }
    let pairs = critical_pairs(g)?;
    out.push_str(&format!("critical pairs ({}):\n", pairs.len()));
    for p in &pairs {
        out.push_str(&format!(
            "  (N{}, N{})  orders ({}, {})\n",
            index(p.a()),
            index(p.b()),
            p.a().order(),
            p.b().order()
        ));
    }
    out.push_str("chief factors, ascending series:\n");
    for f in chief_factors(g, SeriesChoice::Ascending)? {
        out.push_str(&format!(
            "  N{}/N{}  {}^{}\n",
            index(&f.top),
            index(&f.bottom),
            f.simple_type,
            f.multiplicity
        ));
    }
    Ok(out)
}
