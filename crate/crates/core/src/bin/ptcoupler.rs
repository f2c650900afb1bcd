//! Command-line front end.
//!
//! Exit status: 0 on success, 2 on usage errors, 1 on runtime errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ptcoupler::coupler::{eigen_spectrum, propagator};
use ptcoupler::experiments::{
    run_fig2b, run_figure, ConfigFile, FigureId, Format, SweepSpec, SweepTable,
};
use ptcoupler::fock::{
    hom_curve, interference_term, two_photon_probs_dist, two_photon_probs_indist, visibility,
};
use ptcoupler::linalg::svals2;
use ptcoupler::{Complex, Error};

const AFTER_HELP: &str = "\
Conventions: mode 1 is the lossless waveguide, mode 2 the lossy one. Propagation
uses U(z) = exp(-iHz). Flags override values read from --config; the config file
holds one `key = value` per line (keys: figure, kind, mode, kappa, length,
gamma_grid, gamma_max, points, delay_grid, tau_c, v_max, normalization) with `#`
comments.";

#[derive(Parser, Debug)]
#[command(name = "ptcoupler", version, about = "Two-photon interference in lossy PT-symmetric couplers", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of the bare Hamiltonian: one point (--gamma) or a sweep
    Spectrum(Shared),
    /// Post-selected two-photon output probabilities (JSON)
    Probs(Shared),
    /// HOM coincidence curve against photon delay (JSON)
    Hom(Shared),
    /// Zero-delay HOM visibility (JSON)
    Visibility(Shared),
    /// Reproduce the data behind one figure
    Figure {
        #[arg(value_enum)]
        id: FigureArg,
        #[command(flatten)]
        shared: Shared,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct Shared {
    /// Coupling rate [cm⁻¹]
    #[arg(long, value_name = "1/cm", allow_hyphen_values = true)]
    kappa: Option<f64>,
    /// Loss rate of the lossy waveguide [cm⁻¹]
    #[arg(long, value_name = "1/cm", allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Upper end of a loss sweep starting at 0 [cm⁻¹]
    #[arg(long, value_name = "1/cm", allow_hyphen_values = true)]
    gamma_max: Option<f64>,
    /// Number of points in the loss sweep
    #[arg(long)]
    points: Option<usize>,
    /// Coupler length [cm]
    #[arg(long, value_name = "cm", allow_hyphen_values = true)]
    length: Option<f64>,
    /// Sandwich the coupler between two 50/50 splitters
    #[arg(long)]
    sandwiched: bool,
    /// Source coherence time [ps]
    #[arg(long, value_name = "ps", allow_hyphen_values = true)]
    tau_c: Option<f64>,
    /// Peak photon indistinguishability [0..1]
    #[arg(long, allow_hyphen_values = true)]
    vmax: Option<f64>,
    /// Probability normalisation
    #[arg(long, value_enum)]
    normalization: Option<NormArg>,
    /// Override the length with pi/(4 kappa) (exact 50/50 lossless coupler)
    #[arg(long)]
    idealized: bool,
    /// Table format for sweeps
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output path (default: stdout)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Flat key = value config file
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FigureArg {
    Fig2b,
    Fig3bcd,
    Fig3e,
    Fig4b,
    Fig4c,
}

impl From<FigureArg> for FigureId {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig2b => FigureId::Fig2b,
            FigureArg::Fig3bcd => FigureId::Fig3bcd,
            FigureArg::Fig3e => FigureId::Fig3e,
            FigureArg::Fig4b => FigureId::Fig4b,
            FigureArg::Fig4c => FigureId::Fig4c,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    None,
    Survivors,
    DistRate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Probs(_) => "probs",
            Command::Hom(_) => "hom",
            Command::Visibility(_) => "visibility",
            Command::Figure { .. } => "figure",
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            let mut cmd = Cli::command();
            let sub = cmd.find_subcommand_mut(name).expect("known subcommand");
            sub.set_bin_name(format!("ptcoupler {name}"));
            sub.error(ErrorKind::ValueValidation, msg).exit()
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Figure { id, shared } => {
            let spec = build_spec(Some(id.into()), false, &shared)?;
            let table = run_figure(&spec)?;
            emit_table(&table, &shared)
        }
        Command::Spectrum(shared) => spectrum(&shared),
        Command::Probs(shared) => single_point(&shared, probs_json),
        Command::Hom(shared) => single_point(&shared, hom_json),
        Command::Visibility(shared) => single_point(&shared, visibility_json),
    }
}

/// Config file first, then flags on top.
fn settings(shared: &Shared) -> Result<ConfigFile, Failure> {
    let mut cfg = match &shared.config {
        // an unreadable file is a runtime failure, bad contents a usage one
        Some(path) => ConfigFile::load(path).map_err(|e| match e {
            Error::Io { .. } => Failure::Runtime(e),
            other => usage(other),
        })?,
        None => ConfigFile::default(),
    };
    let mut set = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            cfg.set(key, v);
        }
    };
    set("kappa", shared.kappa.map(|v| v.to_string()));
    set("length", shared.length.map(|v| v.to_string()));
    set("gamma_max", shared.gamma_max.map(|v| v.to_string()));
    set("points", shared.points.map(|v| v.to_string()));
    set("tau_c", shared.tau_c.map(|v| v.to_string()));
    set("v_max", shared.vmax.map(|v| v.to_string()));
    set("kind", shared.sandwiched.then(|| "sandwiched".to_string()));
    set("mode", shared.idealized.then(|| "idealized".to_string()));
    set(
        "normalization",
        shared.normalization.map(|n| {
            match n {
                NormArg::None => "none",
                NormArg::Survivors => "survivors",
                NormArg::DistRate => "dist_rate",
            }
            .to_string()
        }),
    );
    Ok(cfg)
}

fn build_spec(
    figure: Option<FigureId>,
    require_kappa: bool,
    shared: &Shared,
) -> Result<SweepSpec, Failure> {
    let cfg = settings(shared)?;
    let mut spec = match figure {
        Some(f) => SweepSpec::for_figure(f),
        None => SweepSpec::default(),
    };
    spec.apply_config(&cfg).map_err(usage)?;
    if require_kappa && cfg.get("kappa").is_none() {
        return Err(Failure::Usage(
            "the coupling rate --kappa is required".into(),
        ));
    }
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn format_of(shared: &Shared) -> Format {
    match shared.format {
        Some(FormatArg::Json) => Format::Json,
        _ => Format::Csv,
    }
}

fn write_out(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| {
            Failure::Runtime(Error::Io {
                path: path.to_path_buf(),
                source,
            })
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| {
                    Failure::Runtime(Error::Io {
                        path: "<stdout>".into(),
                        source,
                    })
                })
        }
    }
}

fn emit_table(table: &SweepTable, shared: &Shared) -> Result<(), Failure> {
    write_out(&table.render(format_of(shared)), shared.output.as_deref())
}

fn emit_json(value: Value, shared: &Shared) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(&value).expect("finite values");
    text.push('\n');
    write_out(&text, shared.output.as_deref())
}

fn spectrum(shared: &Shared) -> Result<(), Failure> {
    let single = shared.gamma.is_some() && shared.gamma_max.is_none() && shared.points.is_none();
    if !single {
        let spec = build_spec(Some(FigureId::Fig2b), true, shared)?;
        return emit_table(&run_fig2b(&spec)?, shared);
    }
    let spec = build_spec(None, true, shared)?;
    let gamma = shared.gamma.expect("checked above");
    let point = eigen_spectrum(&[gamma], spec.kappa).map_err(usage)?[0];
    let c = |z: Complex| json!({ "re": z.re, "im": z.im });
    emit_json(
        json!({
            "kappa": spec.kappa,
            "gamma": gamma,
            "gamma_over_kappa": point.gamma_over_kappa,
            "lambda1": c(point.lambda1),
            "lambda2": c(point.lambda2),
            "defective": point.defective,
        }),
        shared,
    )
}

type PointFn = fn(&SweepSpec, f64) -> Result<Map<String, Value>, Error>;

fn single_point(shared: &Shared, f: PointFn) -> Result<(), Failure> {
    let spec = build_spec(None, true, shared)?;
    let gamma = shared
        .gamma
        .ok_or_else(|| Failure::Usage("the loss rate --gamma is required".into()))?;
    spec.params(gamma).map_err(usage)?;
    let mut out = Map::new();
    out.insert("kind".into(), json!(spec.kind.as_str()));
    out.insert("mode".into(), json!(spec.mode.as_str()));
    out.insert("kappa".into(), json!(spec.kappa));
    out.insert("gamma".into(), json!(gamma));
    out.insert("length".into(), json!(spec.effective_length()));
    out.extend(f(&spec, gamma)?);
    emit_json(Value::Object(out), shared)
}

fn probs_json(spec: &SweepSpec, gamma: f64) -> Result<Map<String, Value>, Error> {
    let u = propagator(&spec.params(gamma)?, spec.kind);
    let (indist, dist) = spec
        .normalization
        .apply(two_photon_probs_indist(&u)?, two_photon_probs_dist(&u)?)?;
    let mut m = Map::new();
    m.insert("normalization".into(), json!(spec.normalization.as_str()));
    m.insert("p20_indist".into(), json!(indist.p20));
    m.insert("p11_indist".into(), json!(indist.p11));
    m.insert("p02_indist".into(), json!(indist.p02));
    m.insert("p20_dist".into(), json!(dist.p20));
    m.insert("p11_dist".into(), json!(dist.p11));
    m.insert("p02_dist".into(), json!(dist.p02));
    m.insert("interference_term".into(), json!(interference_term(&u)?));
    m.insert("sigma_max".into(), json!(svals2(&u)?.0));
    Ok(m)
}

fn hom_json(spec: &SweepSpec, gamma: f64) -> Result<Map<String, Value>, Error> {
    let u = propagator(&spec.params(gamma)?, spec.kind);
    let curve = hom_curve(&u, &spec.source, &spec.delay_grid)?;
    let mut m = Map::new();
    m.insert("tau_c".into(), json!(spec.source.tau_c()));
    m.insert("v_max".into(), json!(spec.source.v_max()));
    m.insert("visibility".into(), json!(curve.visibility));
    m.insert("delays".into(), json!(curve.delays));
    m.insert("rates".into(), json!(curve.rates));
    Ok(m)
}

fn visibility_json(spec: &SweepSpec, gamma: f64) -> Result<Map<String, Value>, Error> {
    let u = propagator(&spec.params(gamma)?, spec.kind);
    let mut m = Map::new();
    m.insert("v_max".into(), json!(spec.source.v_max()));
    m.insert(
        "visibility".into(),
        json!(visibility(&u, spec.source.v_max())?),
    );
    m.insert("interference_term".into(), json!(interference_term(&u)?));
    m.insert("p11_dist".into(), json!(two_photon_probs_dist(&u)?.p11));
    Ok(m)
}
