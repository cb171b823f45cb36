use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use curvecross::config::RunConfig;
use curvecross::coupled::CoupledResolvent;
use curvecross::resolvent::{build_resolvent, PotentialTable};
use curvecross::spectra::{Spectrum, SpectrumSolver};
use curvecross::validation::run_suite;

#[derive(Parser)]
#[command(name = "curvecross", version, about = "Delta-coupled curve crossing: absorption spectra and resonance Raman profiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coupled and uncoupled absorption spectra.
    Absorption(Common),
    /// Coupled and uncoupled resonance Raman excitation profiles.
    Raman(Common),
    /// Run the self-check suite; exit 1 if any check fails.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Fast subset only.
        #[arg(long)]
        quick: bool,
    },
    /// Dump the single-surface resolvents and the partitioning denominator at
    /// the crossing point over the photon-energy scan.
    GreensProbe(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; defaults apply to anything omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coupling strength K0 (erg·Å).
    #[arg(long)]
    k0: Option<f64>,
    /// Damping Γ (cm⁻¹).
    #[arg(long)]
    gamma: Option<f64>,
    /// Final ground-state vibrational level for Raman profiles.
    #[arg(long)]
    nf: Option<usize>,
    /// Displacement of the allowed curve (Å).
    #[arg(long)]
    displacement: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Numerical(String),
    Validation(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<curvecross::Error> for Failure {
    fn from(e: curvecross::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

fn load(common: &Common) -> Result<RunConfig, Failure> {
    let mut config = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            RunConfig::from_toml(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(k0) = common.k0 {
        config.model.coupling_erg_angstrom = k0;
    }
    if let Some(g) = common.gamma {
        config.model.damping_cm1 = g;
    }
    if let Some(n) = common.nf {
        config.scan.final_state = n;
    }
    if let Some(d) = common.displacement {
        config.model.allowed_displacement_angstrom = d;
    }
    if let Some(out) = &common.out {
        config.output.directory = out.display().to_string();
    }
    config.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(config)
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Numerical(format!("writing {}: {e}", path.display()))
}

fn write_table(config: &RunConfig, name: &str, header: &str, rows: &str, meta: &[(&str, String)]) -> Result<(), Failure> {
    let dir = PathBuf::from(&config.output.directory);
    fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
    let path = dir.join(format!("{name}.csv"));
    fs::write(&path, format!("{header}\n{rows}")).map_err(|e| io_error(&path, e))?;
    let mut sidecar = format!("# version = {}\n", env!("CARGO_PKG_VERSION"));
    for (k, v) in meta {
        let _ = writeln!(sidecar, "# {k} = {v}");
    }
    sidecar.push_str(&config.to_toml());
    let meta_path = dir.join(format!("{name}.meta.txt"));
    fs::write(&meta_path, sidecar).map_err(|e| io_error(&meta_path, e))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_spectrum(config: &RunConfig, name: &str, s: &Spectrum) -> Result<(), Failure> {
    let mut rows = String::new();
    for (w, v) in &s.samples {
        let _ = writeln!(rows, "{w},{v:.16e}");
    }
    let mut meta = vec![
        ("kind", format!("{:?}", s.kind).to_lowercase()),
        ("coupled", s.metadata.coupled.to_string()),
        ("fingerprint", s.metadata.fingerprint.clone()),
        ("rows", s.samples.len().to_string()),
    ];
    if let Some(n) = s.metadata.final_state {
        meta.push(("final_state", n.to_string()));
    }
    write_table(config, name, "omega_cm1,intensity", &rows, &meta)
}

fn spectra(config: &RunConfig, raman: bool) -> Result<(), Failure> {
    let solver = SpectrumSolver::new(&config.model()?, config.layout()?)?;
    let omegas = config.photon_energies()?;
    for coupled in [true, false] {
        let suffix = if coupled { "coupled" } else { "uncoupled" };
        let (name, s) = if raman {
            ("raman", solver.raman(config.scan.final_state, &omegas, coupled)?)
        } else {
            ("absorption", solver.absorption(&omegas, coupled)?)
        };
        write_spectrum(config, &format!("{name}_{suffix}"), &s)?;
    }
    Ok(())
}

fn greens_probe(config: &RunConfig) -> Result<(), Failure> {
    let model = config.model()?;
    let layout = config.layout()?;
    let solver = SpectrumSolver::new(&model, layout)?;
    let t1 = Arc::new(PotentialTable::new(&model.allowed, model.allowed.mass(), layout)?);
    let t2 = Arc::new(PotentialTable::new(&model.forbidden, model.forbidden.mass(), layout)?);
    let mut rows = String::new();
    for w in config.photon_energies()? {
        let z = solver.energy(w)?;
        let (ev1, ev2) = (build_resolvent(t1.clone(), z)?, build_resolvent(t2.clone(), z)?);
        let c = model.coupling;
        let full = CoupledResolvent::new(&ev1, &ev2, c.strength, c.location)?;
        let (g1, g2) = full.crossing_values();
        let d = full.denominator();
        let _ = writeln!(
            rows,
            "{w},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            g1.re, g1.im, g2.re, g2.im, d.re, d.im
        );
    }
    write_table(
        config,
        "greens_probe",
        "omega_cm1,re_g1,im_g1,re_g2,im_g2,re_denominator,im_denominator",
        &rows,
        &[("kind", "greens-probe".into())],
    )
}

fn validate(config: &RunConfig, quick: bool) -> Result<(), Failure> {
    let outcomes = run_suite(config, quick, |o| println!("{o}"))?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        return Err(Failure::Validation(failed));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Absorption(c) => spectra(&load(&c)?, false),
        Command::Raman(c) => spectra(&load(&c)?, true),
        Command::Validate { common, quick } => validate(&load(&common)?, quick),
        Command::GreensProbe(c) => greens_probe(&load(&c)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("error: {m}"),
                Failure::Numerical(m) => eprintln!("error: {m}"),
                Failure::Validation(n) => eprintln!("validation failed: {n} check(s)"),
            }
            ExitCode::from(f.code())
        }
    }
}
