//! Command-line front end. Every command is deterministic given its inputs
//! and `--seed`; reports render as stable text or JSON and timing goes to
//! stderr so output bytes never depend on the clock.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use exact_linear::{smith_normal_form, IntegerMatrix};
use operad_core::{check_operad_axioms, interval_coend};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Number, Value};

use crate::cxf::{complex_to_value, parse_complex, parse_matrix};
use crate::experiment::{
    colimit_commutation_check, com_counterexample, invariance_experiment, resolve_complex,
    resolve_operad, splitting_check, ExperimentSpec, OperadSpec,
};
use crate::opfile::parse_operad;
use crate::random::{make_homology_equivalence, random_filtration};
use crate::report::{HomologySummary, Report};
use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Parser)]
#[command(name = "invariance-lab", disable_help_subcommand = true)]
struct Cli {
    /// write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// seed for commands without a spec file
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Smith normal form of a JSON matrix (defaults to the [[2,4],[6,8]] fixture)
    Snf { file: Option<PathBuf> },
    /// homology of a CXF complex, per degree
    Homology { file: PathBuf },
    /// ranks and orbit structure of the relative interval coendomorphism components
    CoendInterval {
        #[arg(long)]
        n: usize,
    },
    /// run the operad axiom suite on an operad file
    CheckOperad { file: PathBuf },
    /// truncated cofree coalgebra over an operad file and a CXF complex
    Cofree {
        #[arg(long)]
        operad: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        pointed: bool,
    },
    /// homology-invariance experiment from a spec file or a bare seed
    Invariance {
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// the canned commutative-operad counterexample
    CounterexampleCom,
    /// colimit commutation over a seeded filtration described by a spec file
    Colimit {
        #[arg(long)]
        spec: PathBuf,
    },
    /// ideal-kernel splitting identity described by a spec file
    Splitting {
        #[arg(long)]
        spec: PathBuf,
    },
}

fn read_json(path: &PathBuf) -> Result<Value, Error> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn read_spec(path: &PathBuf) -> Result<ExperimentSpec, Error> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn number(v: i64) -> Value {
    Value::Number(Number::from(v))
}

fn run_snf(file: Option<&PathBuf>, format: Format) -> Result<String, Error> {
    let m = match file {
        Some(path) => parse_matrix(&read_json(path)?)?,
        None => IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]),
    };
    let s = smith_normal_form(&m);
    let factors: Vec<i64> = s
        .invariant_factors
        .iter()
        .map(|f| {
            f.try_into()
                .map_err(|_| Error::Format("invariant factor exceeds the integer range".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Text => {
            let rendered: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
            Ok(format!(
                "rank: {}\ninvariant factors: {}\n",
                s.rank(),
                rendered.join(" ")
            ))
        }
        Format::Structured => {
            let mut out = Map::new();
            out.insert(
                "invariant_factors".into(),
                Value::Array(factors.into_iter().map(number).collect()),
            );
            out.insert("rank".into(), number(s.rank() as i64));
            Ok(serde_json::to_string_pretty(&Value::Object(out))? + "\n")
        }
    }
}

fn run_homology(file: &PathBuf, format: Format) -> Result<String, Error> {
    let c = parse_complex(&read_json(file)?)?;
    let mut text = String::new();
    let mut obj = Map::new();
    for (d, h) in c.all_homology() {
        let summary = HomologySummary::from_group(&h)?;
        text.push_str(&format!("H_{}: {}\n", d, summary.render()));
        obj.insert(d.to_string(), serde_json::to_value(&summary)?);
    }
    match format {
        Format::Text => Ok(text),
        Format::Structured => Ok(serde_json::to_string_pretty(&Value::Object(obj))? + "\n"),
    }
}

fn run_coend_interval(n: usize, format: Format) -> Result<String, Error> {
    if n == 0 {
        return Err(Error::Input("--n must be at least 1".into()));
    }
    let ic = interval_coend(n)?;
    let mut text = String::new();
    let mut arities = Map::new();
    for k in 1..=n {
        let mut ranks = Map::new();
        for (d, r) in ic.component_ranks(k)? {
            if r > 0 {
                text.push_str(&format!("arity {} degree {} rank: {}\n", k, d, r));
                ranks.insert(d.to_string(), number(r as i64));
            }
        }
        let orbit = ic.orbit_is_free_transitive(k)?;
        text.push_str(&format!("arity {} orbit free transitive: {}\n", k, orbit));
        let mut entry = Map::new();
        entry.insert("orbit_free_transitive".into(), Value::Bool(orbit));
        entry.insert("ranks".into(), Value::Object(ranks));
        arities.insert(k.to_string(), Value::Object(entry));
    }
    match format {
        Format::Text => Ok(text),
        Format::Structured => {
            let mut out = Map::new();
            out.insert("arities".into(), Value::Object(arities));
            Ok(serde_json::to_string_pretty(&Value::Object(out))? + "\n")
        }
    }
}

fn run_check_operad(file: &PathBuf, format: Format) -> Result<String, Error> {
    let op = parse_operad(&read_json(file)?)?;
    let report = check_operad_axioms(&op)?;
    match format {
        Format::Text => {
            let mut text = format!(
                "checks: {}\naxioms: {}\n",
                report.checks,
                if report.is_ok() { "ok" } else { "violated" }
            );
            for v in &report.violations {
                text.push_str(&format!("violation: {:?}\n", v));
            }
            Ok(text)
        }
        Format::Structured => {
            let mut out = Map::new();
            out.insert("checks".into(), number(report.checks as i64));
            out.insert("ok".into(), Value::Bool(report.is_ok()));
            out.insert(
                "violations".into(),
                Value::Array(
                    report
                        .violations
                        .iter()
                        .map(|v| Value::String(format!("{:?}", v)))
                        .collect(),
                ),
            );
            Ok(serde_json::to_string_pretty(&Value::Object(out))? + "\n")
        }
    }
}

fn run_cofree(
    operad: &PathBuf,
    complex: &PathBuf,
    arity: usize,
    pointed: bool,
    format: Format,
) -> Result<String, Error> {
    use coalgebra_core::{cofree_coalgebra, truncated_cofree, CofreeVariant};

    let op = Arc::new(parse_operad(&read_json(operad)?)?);
    if op.max_arity != arity {
        return Err(Error::Input(format!(
            "operad file truncates at {}, --arity says {}",
            op.max_arity, arity
        )));
    }
    let c = Arc::new(parse_complex(&read_json(complex)?)?);
    let variant = if pointed {
        CofreeVariant::Pointed
    } else {
        CofreeVariant::General
    };
    let w = truncated_cofree(&op, &c, variant)?;
    let x = cofree_coalgebra(&w)?;

    match format {
        Format::Text => {
            let mut text = String::new();
            for d in w.carrier.degrees() {
                text.push_str(&format!("carrier degree {} rank: {}\n", d, w.carrier.rank(d)));
            }
            for (n, maps) in &x.structure {
                text.push_str(&format!("structure maps at arity {}: {}\n", n, maps.len()));
            }
            Ok(text)
        }
        Format::Structured => {
            let mut out = Map::new();
            out.insert("carrier".into(), complex_to_value(&w.carrier)?);
            let mut structure = Map::new();
            for (n, maps) in &x.structure {
                let mut per_basis = Vec::new();
                for f in maps {
                    let mut blocks = Map::new();
                    for d in w.carrier.degrees() {
                        let b = f.block(d);
                        if b.rows() > 0 && b.cols() > 0 && !b.is_zero() {
                            blocks.insert(d.to_string(), crate::cxf::matrix_to_value(&b)?);
                        }
                    }
                    per_basis.push(Value::Object(blocks));
                }
                structure.insert(n.to_string(), Value::Array(per_basis));
            }
            out.insert("structure".into(), Value::Object(structure));
            Ok(serde_json::to_string_pretty(&Value::Object(out))? + "\n")
        }
    }
}

fn render_report(report: &Report, format: Format) -> String {
    if let Some(elapsed) = report.elapsed {
        eprintln!("elapsed: {} ms", elapsed.as_millis());
    }
    match format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_json() + "\n",
    }
}

fn run_invariance(spec: &ExperimentSpec, format: Format) -> Result<String, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let d = resolve_complex(&spec.source, &mut rng)?;
    let a = resolve_complex(&spec.acyclic, &mut rng)?;
    let (_, f) = make_homology_equivalence(&d, &a)?;
    let (op, _) = resolve_operad(&spec.operad, spec.arity)?;
    let report = invariance_experiment(&op, &f, spec.arity, spec.window)?;
    Ok(render_report(&report, format))
}

fn run_colimit(spec: &ExperimentSpec, format: Format) -> Result<String, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let c = resolve_complex(&spec.source, &mut rng)?;
    let (stages, maps) = random_filtration(&mut rng, &c, spec.steps)?;
    let (op, _) = resolve_operad(&spec.operad, spec.arity)?;
    let report = colimit_commutation_check(&stages, &maps, &op, spec.arity)?;
    Ok(render_report(&report, format))
}

fn run_splitting(spec: &ExperimentSpec, format: Format) -> Result<String, Error> {
    use operad_core::OperadElement;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let c = resolve_complex(&spec.source, &mut rng)?;
    let operad_spec = match &spec.operad {
        free @ OperadSpec::Free { .. } => free.clone(),
        _ => OperadSpec::Free {
            generators: vec![("m".into(), 2)],
        },
    };
    let (_, free) = resolve_operad(&operad_spec, spec.arity)?;
    let free = free.expect("free operads carry their presentation");
    let gens = spec
        .ideal
        .iter()
        .map(|&(arity, index)| {
            let rank = free.operad.component(arity)?.complex.rank(0);
            if index >= rank {
                return Err(Error::Input(format!(
                    "ideal pick {} exceeds the arity-{} rank {}",
                    index, arity, rank
                )));
            }
            Ok(OperadElement::basis(arity, 0, rank, index))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let report = splitting_check(&free, &gens, &c)?;
    Ok(render_report(&report, format))
}

fn dispatch(cli: &Cli) -> Result<String, Error> {
    let seed = cli.seed.unwrap_or(0);
    match &cli.cmd {
        Cmd::Snf { file } => run_snf(file.as_ref(), cli.format),
        Cmd::Homology { file } => run_homology(file, cli.format),
        Cmd::CoendInterval { n } => run_coend_interval(*n, cli.format),
        Cmd::CheckOperad { file } => run_check_operad(file, cli.format),
        Cmd::Cofree {
            operad,
            complex,
            arity,
            pointed,
        } => run_cofree(operad, complex, *arity, *pointed, cli.format),
        Cmd::Invariance { spec } => {
            let spec = match spec {
                Some(path) => read_spec(path)?,
                None => ExperimentSpec {
                    seed,
                    ..ExperimentSpec::default()
                },
            };
            run_invariance(&spec, cli.format)
        }
        Cmd::CounterexampleCom => {
            let report = com_counterexample()?;
            Ok(render_report(&report, cli.format))
        }
        Cmd::Colimit { spec } => {
            let mut spec = read_spec(spec)?;
            if let Some(s) = cli.seed {
                spec.seed = s;
            }
            run_colimit(&spec, cli.format)
        }
        Cmd::Splitting { spec } => {
            let mut spec = read_spec(spec)?;
            if let Some(s) = cli.seed {
                spec.seed = s;
            }
            run_splitting(&spec, cli.format)
        }
    }
}

/// Parse arguments and run; returns the process exit status. Usage errors
/// exit nonzero with a message on stderr.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(output) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, output) {
                    eprintln!("error: {}", e);
                    return 1;
                }
            } else {
                print!("{}", output);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {}", e);
            1
        }
    }
}
