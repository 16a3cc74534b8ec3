use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use crn_decomp::decomposition::{
    classify, finest_independent_decomposition, is_c_star_decomposition, s_decomposition,
    verify_c_structure, verify_cstar_structure, Decomposition,
};
use crn_decomp::generate::{generate, GeneratorConfig, GeneratorKind};
use crn_decomp::kinetics::{verify_equilibria_theorems, KineticsDocument, SolverOptions};
use crn_decomp::ssystem::{
    coverability, realize, RealizationKind, RealizationSpec, SSystemModel, SymbolicOde,
};
use crn_decomp::structure::{analyze, is_weakly_reversible};
use crn_decomp::{parse_network, serialize_network, Network, PowerLawKinetics64};
use serde::Serialize;
use serde_json::{json, Value};

mod text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "crndecomp",
    version,
    about = "Decomposition analysis of chemical reaction networks"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Residual tolerance for numerical checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum KindArg {
    Independent,
    Embedded,
    Subnetwork,
    Total,
}

impl From<KindArg> for RealizationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Independent => RealizationKind::Independent,
            KindArg::Embedded => RealizationKind::Embedded,
            KindArg::Subnetwork => RealizationKind::Subnetwork,
            KindArg::Total => RealizationKind::Total,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GenerateKind {
    WeaklyReversible,
    SpeciesDecomposable,
    CDecomposed,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Deficiency, linkage classes and network class.
    Analyze { network: PathBuf },
    /// Classify a decomposition.
    Decompose {
        network: PathBuf,
        /// `linkage`, `finest`, `s`, `single`, `discrete`, or a decomposition JSON file.
        #[arg(long, default_value = "linkage")]
        blocks: String,
    },
    /// Build a network realization of an S-system.
    Realize {
        model: PathBuf,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Realization spec JSON; its kind must agree with `--kind`.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        network_out: Option<PathBuf>,
        #[arg(long)]
        kinetics_out: Option<PathBuf>,
    },
    /// Search for a species covering.
    Cover {
        network: PathBuf,
        /// Search without a node budget.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Sample equilibria and check the decomposition relations.
    VerifyEquilibria {
        network: PathBuf,
        #[arg(long, conflicts_with = "mass_action")]
        kinetics: Option<PathBuf>,
        /// Mass-action kinetics with unit rate constants.
        #[arg(long)]
        mass_action: bool,
        #[arg(long, default_value = "linkage")]
        blocks: String,
        /// Multistart count per solve.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Write a seeded random network with a decomposition and kinetics.
    Generate {
        #[arg(value_enum)]
        kind: GenerateKind,
        #[arg(long, default_value_t = 4)]
        species: usize,
        #[arg(long, default_value_t = 12)]
        reactions: usize,
        #[arg(long)]
        network_out: Option<PathBuf>,
        #[arg(long)]
        decomposition_out: Option<PathBuf>,
        #[arg(long)]
        kinetics_out: Option<PathBuf>,
    },
}

struct Outcome {
    report: Value,
    theorem_violation: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome {
            report,
            theorem_violation: false,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn load_network(path: &Path) -> Result<Network> {
    let text = read(path)?;
    let net = if text.trim_start().starts_with('{') {
        Network::from_json_str(&text)
    } else {
        parse_network(&text)
    };
    net.with_context(|| format!("invalid network {}", path.display()))
}

fn load_decomposition(net: &Network, spec: &str) -> Result<Decomposition> {
    Ok(match spec {
        "linkage" => Decomposition::linkage(net),
        "finest" => finest_independent_decomposition(net),
        "s" => s_decomposition(net)?.decomposition,
        "single" => Decomposition::single(net),
        "discrete" => Decomposition::discrete(net),
        path => {
            let value: Value = serde_json::from_str(&read(Path::new(path))?)
                .with_context(|| format!("invalid decomposition {path}"))?;
            Decomposition::from_json(&value, net)?
        }
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn cmd_analyze(network: &Path) -> Result<Outcome> {
    let net = load_network(network)?;
    Ok(Outcome::ok(json!({
        "network": serialize_network(&net),
        "structure": to_value(&analyze(&net)),
    })))
}

fn cmd_decompose(network: &Path, blocks: &str) -> Result<Outcome> {
    let net = load_network(network)?;
    let d = load_decomposition(&net, blocks)?;
    if d.is_covering() {
        bail!("blocks overlap: a covering cannot be classified as a decomposition");
    }
    let class = classify(&net, &d)?;
    let c_star = if is_c_star_decomposition(&net, &d) {
        Some(verify_cstar_structure(&net, &d)?)
    } else {
        None
    };
    Ok(Outcome::ok(json!({
        "decomposition": d.to_json(&net),
        "classification": to_value(&class),
        "c_structure_consistent": verify_c_structure(&net, &d),
        "c_star_structure": to_value(&c_star),
    })))
}

fn cmd_realize(
    model: &Path,
    kind: Option<KindArg>,
    spec: Option<&Path>,
    network_out: Option<&Path>,
    kinetics_out: Option<&Path>,
) -> Result<Outcome> {
    let model: SSystemModel = serde_json::from_str(&read(model)?)
        .with_context(|| format!("invalid S-system model {}", model.display()))?;
    let spec = match spec {
        Some(p) => {
            let s: RealizationSpec = serde_json::from_str(&read(p)?)
                .with_context(|| format!("invalid realization spec {}", p.display()))?;
            if let Some(k) = kind {
                if RealizationKind::from(k) != s.kind {
                    bail!("--kind disagrees with the kind in {}", p.display());
                }
            }
            s
        }
        None => {
            let k: RealizationKind = kind.unwrap_or(KindArg::Independent).into();
            if k == RealizationKind::Subnetwork {
                bail!("the subnetwork realization needs --spec");
            }
            RealizationSpec::of_kind(k)
        }
    };
    let real = realize(&model, &spec)?;
    let network_text = serialize_network(&real.network);
    let kinetics = KineticsDocument::from(&real.kinetics);
    if let Some(p) = network_out {
        write(p, &network_text)?;
    }
    if let Some(p) = kinetics_out {
        write(p, &serde_json::to_string_pretty(&kinetics)?)?;
    }
    let covering = real.species_covering()?;
    let ode = SymbolicOde::from_kinetic_system(&real.network, &real.kinetics);
    Ok(Outcome::ok(json!({
        "kind": to_value(&real.kind),
        "network": network_text,
        "kinetics": to_value(&kinetics),
        "species_covering": covering.to_json(&real.network),
        "is_covering": covering.is_covering(),
        "pairs": to_value(&real.pairs),
        "merged_reactions": to_value(&real.merged),
        "ode_matches": ode.matches(&real.target_ode(&model), 1e-12),
        "structure": to_value(&analyze(&real.network)),
    })))
}

fn cmd_cover(network: &Path, exhaustive: bool) -> Result<Outcome> {
    let net = load_network(network)?;
    Ok(Outcome::ok(
        json!({ "coverability": to_value(&coverability(&net, exhaustive)) }),
    ))
}

fn cmd_verify(
    network: &Path,
    kinetics: Option<&Path>,
    mass_action: bool,
    blocks: &str,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Outcome> {
    let net = load_network(network)?;
    let kin = match (kinetics, mass_action) {
        (Some(p), _) => {
            let doc: KineticsDocument = serde_json::from_str(&read(p)?)
                .with_context(|| format!("invalid kinetics {}", p.display()))?;
            doc.into_kinetics(&net)?
        }
        (None, true) => PowerLawKinetics64::mass_action(&net, vec![1.0; net.r()])?,
        (None, false) => bail!("give --kinetics FILE or --mass-action"),
    };
    let d = load_decomposition(&net, blocks)?;
    let opts = SolverOptions {
        tol,
        ..SolverOptions::default()
    };
    let report = verify_equilibria_theorems(&net, &kin, &d, samples, seed, &opts)?;
    Ok(Outcome {
        theorem_violation: report.violations > 0,
        report: json!({
            "decomposition": d.to_json(&net),
            "equilibria": to_value(&report),
        }),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    kind: GenerateKind,
    species: usize,
    reactions: usize,
    seed: u64,
    network_out: Option<&Path>,
    decomposition_out: Option<&Path>,
    kinetics_out: Option<&Path>,
) -> Result<Outcome> {
    let kind = match kind {
        GenerateKind::WeaklyReversible => GeneratorKind::WeaklyReversible,
        GenerateKind::SpeciesDecomposable => GeneratorKind::SpeciesDecomposable,
        GenerateKind::CDecomposed => GeneratorKind::CDecomposed,
    };
    let g = generate(
        &GeneratorConfig {
            kind,
            species,
            reactions,
        },
        seed,
    )?;
    let network_text = serialize_network(&g.network);
    let decomposition = g.decomposition.to_json(&g.network);
    let kinetics = KineticsDocument::from(&g.kinetics);
    if let Some(p) = network_out {
        write(p, &network_text)?;
    }
    if let Some(p) = decomposition_out {
        write(p, &serde_json::to_string_pretty(&decomposition)?)?;
    }
    if let Some(p) = kinetics_out {
        write(p, &serde_json::to_string_pretty(&kinetics)?)?;
    }
    let (check, holds) = match kind {
        GeneratorKind::WeaklyReversible => ("weakly_reversible", is_weakly_reversible(&g.network)),
        GeneratorKind::SpeciesDecomposable => (
            "species_decomposable",
            coverability(&g.network, false).species_decomposable,
        ),
        GeneratorKind::CDecomposed => (
            "c_structure_consistent",
            verify_c_structure(&g.network, &g.decomposition),
        ),
    };
    Ok(Outcome::ok(json!({
        "network": network_text,
        "decomposition": decomposition,
        "kinetics": to_value(&kinetics),
        "ssystem": to_value(&g.ssystem),
        "equilibrium": to_value(&g.equilibrium),
        "post_check": { "name": check, "holds": holds },
    })))
}

fn dispatch(cli: &Cli, tol: f64) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze { network } => cmd_analyze(network),
        Command::Decompose { network, blocks } => cmd_decompose(network, blocks),
        Command::Realize {
            model,
            kind,
            spec,
            network_out,
            kinetics_out,
        } => cmd_realize(
            model,
            *kind,
            spec.as_deref(),
            network_out.as_deref(),
            kinetics_out.as_deref(),
        ),
        Command::Cover {
            network,
            exhaustive,
        } => cmd_cover(network, *exhaustive),
        Command::VerifyEquilibria {
            network,
            kinetics,
            mass_action,
            blocks,
            samples,
        } => cmd_verify(
            network,
            kinetics.as_deref(),
            *mass_action,
            blocks,
            *samples,
            cli.seed,
            tol,
        ),
        Command::Generate {
            kind,
            species,
            reactions,
            network_out,
            decomposition_out,
            kinetics_out,
        } => cmd_generate(
            *kind,
            *species,
            *reactions,
            cli.seed,
            network_out.as_deref(),
            decomposition_out.as_deref(),
            kinetics_out.as_deref(),
        ),
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let tol = cli.tol.unwrap_or(SolverOptions::default().tol);
    if !(tol.is_finite() && tol > 0.0) {
        bail!("--tol must be a positive number");
    }
    let outcome = dispatch(cli, tol)?;
    let mut config = to_value(cli);
    config["tol"] = json!(tol);
    let envelope = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "report": outcome.report,
    });
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&envelope)? + "\n",
        Format::Text => text::render(&envelope),
    };
    match &cli.output {
        Some(p) => write(p, &rendered)?,
        None => print!("{rendered}"),
    }
    Ok(!outcome.theorem_violation)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: a theorem check found a violation");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
