use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use scm::config::{ModeName, PaddingSetting, ReadoutSection, RunConfig, SchemeName};
use scm::error::{CliError, Result};
use scm::fcidump::read_fcidump;
use scm::manifest::RunManifest;
use scm::paulifile::write_pauli_sum;
use scm::pipeline::{group_and_report, standard_rows, Block, ConstraintInput};
use scm::report::{confusion_csv, curve_csv, trace_file_name, trace_json, write_file};
use scm::run::{equilibrium_energy, mitigation_trials, run_scan, MitigationExperiment};
use scm_core::fock::build_s2_matrix;
use scm_core::mitigation::{build_calibration, ReadoutNoiseModel};
use scm_core::pointgroup::PointGroupTable;
use scm_core::scm::ground_overlaps;
use scm_core::{Determinant, HARTREE_TO_KCAL_PER_MOL};

/// Symmetry-configuration mapping of molecular Hamiltonians onto qubits.
#[derive(Debug, Parser)]
#[command(name = "scm", version, about)]
struct Cli {
    /// Point group of the FCIDUMP orbital labels.
    #[arg(long, global = true, default_value = "D2h")]
    point_group: String,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// More log output; repeat for debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count configurations per symmetry constraint set and list a block.
    Enumerate(EnumerateArgs),
    /// Exactly diagonalize one symmetry block.
    Solve(SolveArgs),
    /// Embed a block on qubits and write its Pauli decomposition.
    Pauli(PauliArgs),
    /// Optimize a hardware-efficient ansatz over a bond-length scan.
    Vqe(VqeArgs),
    /// Readout calibration matrix and a mitigation experiment.
    MitigateDemo(MitigateArgs),
}

#[derive(Debug, Clone, Args)]
struct ConstraintArgs {
    /// Electron count (default: NELEC).
    #[arg(long)]
    n: Option<u32>,
    /// Spin projection, e.g. 0 or -0.5 (default: MS2/2).
    #[arg(long, allow_hyphen_values = true)]
    sz: Option<String>,
    /// Irreducible representation label (default: ISYM).
    #[arg(long)]
    irrep: Option<String>,
    /// Total spin; adds spin adaptation to the counts.
    #[arg(long)]
    s: Option<String>,
}

impl ConstraintArgs {
    fn input(&self) -> ConstraintInput {
        ConstraintInput {
            n: self.n,
            sz: self.sz.clone(),
            irrep: self.irrep.clone(),
            s: self.s.clone(),
        }
    }
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    fcidump: PathBuf,
    #[command(flatten)]
    constraints: ConstraintArgs,
    /// List the determinants of the constrained block with their qubit labels.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    fcidump: PathBuf,
    #[command(flatten)]
    constraints: ConstraintArgs,
    /// Number of lowest eigenvalues to print.
    #[arg(long, default_value_t = 1)]
    states: usize,
    /// Print the largest ground-state weights per determinant.
    #[arg(long, default_value_t = 0)]
    overlaps: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct PauliArgs {
    fcidump: PathBuf,
    #[command(flatten)]
    constraints: ConstraintArgs,
    /// Energy of the unused basis states: a number in hartree or `penalty`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    padding: String,
    /// Drop terms with |coefficient| at or below this.
    #[arg(long, default_value_t = scm_core::pauli::DEFAULT_CUTOFF)]
    cutoff: f64,
    /// Output file for the Pauli sum (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Print the grouping report as JSON.
    #[arg(long)]
    json: bool,
    #[arg(long, hide = true)]
    debug_diagonal: bool,
}

#[derive(Debug, Args)]
struct VqeArgs {
    /// TOML run configuration.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(long, env = "SCM_FIXTURE_DIR")]
    fixture_dir: Option<PathBuf>,
    /// Comma-separated bond lengths in angstrom.
    #[arg(long, value_delimiter = ',')]
    bond_lengths: Option<Vec<f64>>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeName>,
    #[arg(long, value_enum)]
    mode: Option<ModeName>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Base SPSA seed; per-geometry seeds are derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Base sampling seed.
    #[arg(long)]
    sampling_seed: Option<u64>,
    /// Symmetric readout flip probability (enables readout noise).
    #[arg(long)]
    flip: Option<f64>,
    #[arg(long)]
    no_mitigate: bool,
    #[arg(long, allow_hyphen_values = true)]
    padding: Option<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MitigateArgs {
    fcidump: PathBuf,
    #[command(flatten)]
    constraints: ConstraintArgs,
    #[arg(long, default_value_t = 0.02)]
    flip: f64,
    /// Shots per measurement group.
    #[arg(long, default_value_t = 8192)]
    shots: u32,
    #[arg(long, default_value_t = 8192)]
    calibration_shots: u32,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Ansatz depth of the random trial states.
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Energy of the unused basis states: a number in hartree or `penalty`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    padding: String,
    /// Where to write one calibration matrix as CSV.
    #[arg(long)]
    calibration_csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            log::warn!("could not size thread pool: {e}");
        }
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let group =
        PointGroupTable::by_name(&cli.point_group).map_err(|e| CliError::Config(e.to_string()))?;
    match &cli.command {
        Command::Enumerate(a) => enumerate(a, group),
        Command::Solve(a) => solve(a, group),
        Command::Pauli(a) => pauli(a, group),
        Command::Vqe(a) => vqe(a, group),
        Command::MitigateDemo(a) => mitigate_demo(a, group),
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn occupation(mask: u64, norb: usize) -> String {
    (0..norb)
        .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Serialize)]
struct DeterminantRow {
    index: usize,
    qubits: String,
    alpha: String,
    beta: String,
}

fn determinant_rows(dets: &[Determinant], norb: usize, qubits: u32) -> Vec<DeterminantRow> {
    dets.iter()
        .enumerate()
        .map(|(i, d)| DeterminantRow {
            index: i,
            qubits: format!("{i:0w$b}", w = qubits as usize),
            alpha: occupation(d.alpha, norb),
            beta: occupation(d.beta, norb),
        })
        .collect()
}

fn enumerate(a: &EnumerateArgs, group: &'static PointGroupTable) -> Result<()> {
    let (header, ints) = read_fcidump(&a.fcidump, group)?;
    let config = a
        .constraints
        .input()
        .resolve_with_defaults(&header, group)?;
    let basis = ints.basis();
    let rows = standard_rows(&basis, &config)?;
    let listing = if a.list {
        let block = scm_core::scm::enumerate_basis(&basis, &config)?;
        let q = if block.is_empty() { 0 } else { block.qubits()? };
        Some(determinant_rows(block.dets(), basis.norb(), q))
    } else {
        None
    };
    if a.json {
        #[derive(Serialize)]
        struct Out {
            rows: Vec<scm::pipeline::CountRow>,
            determinants: Option<Vec<DeterminantRow>>,
        }
        print_json(&Out {
            rows,
            determinants: listing,
        });
        return Ok(());
    }
    println!(
        "{:<28} {:>16} {:>7}",
        "constraints", "configurations", "qubits"
    );
    for r in &rows {
        println!(
            "{:<28} {:>16} {:>7}",
            r.constraints, r.configurations, r.qubits
        );
    }
    if let Some(list) = listing {
        println!();
        println!(
            "{:>6}  {:<10} {:<w$} {:<w$}",
            "index",
            "qubits",
            "alpha",
            "beta",
            w = basis.norb()
        );
        for d in list {
            println!("{:>6}  {:<10} {} {}", d.index, d.qubits, d.alpha, d.beta);
        }
    }
    Ok(())
}

fn solve(a: &SolveArgs, group: &'static PointGroupTable) -> Result<()> {
    let (header, ints) = read_fcidump(&a.fcidump, group)?;
    let config = a
        .constraints
        .input()
        .resolve_with_defaults(&header, group)?;
    let block = Block::build(&ints, &config, Default::default())?;
    let eig = block.hamiltonian.eigen();
    let states: Vec<f64> = eig.values.iter().take(a.states.max(1)).copied().collect();
    let s2 = build_s2_matrix(block.basis.dets(), ints.norb())?;
    let v = &block.ground.vector;
    let s2v = s2.mul_vec(v);
    let s2_expect: f64 = v.iter().zip(&s2v).map(|(x, y)| x * y).sum();
    let weights = ground_overlaps(&block.hamiltonian, &block.basis)?;
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| weights[j].total_cmp(&weights[i]));
    let rows = determinant_rows(block.basis.dets(), ints.norb(), block.qubits);

    #[derive(Serialize)]
    struct Weight<'a> {
        determinant: &'a DeterminantRow,
        weight: f64,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        constraints: String,
        configurations: usize,
        qubits: u32,
        ground_energy_hartree: f64,
        ground_s_squared: f64,
        lowest_energies_hartree: Vec<f64>,
        weights: Vec<Weight<'a>>,
    }
    let out = Out {
        constraints: scm::pipeline::describe(&config),
        configurations: block.basis.rank(),
        qubits: block.qubits,
        ground_energy_hartree: block.ground.energy,
        ground_s_squared: s2_expect,
        lowest_energies_hartree: states,
        weights: order
            .iter()
            .take(a.overlaps)
            .map(|&i| Weight {
                determinant: &rows[i],
                weight: weights[i],
            })
            .collect(),
    };
    if a.json {
        print_json(&out);
        return Ok(());
    }
    println!("constraints     {}", out.constraints);
    println!("configurations  {}", out.configurations);
    println!("qubits          {}", out.qubits);
    println!("ground energy   {:.12} Eh", out.ground_energy_hartree);
    println!("<S^2>           {:.6}", out.ground_s_squared);
    for (i, e) in out.lowest_energies_hartree.iter().enumerate().skip(1) {
        println!(
            "state {i:<9} {e:.12} Eh  (+{:.3} kcal/mol)",
            (e - out.ground_energy_hartree) * HARTREE_TO_KCAL_PER_MOL
        );
    }
    for w in &out.weights {
        println!(
            "  |{}>  a={} b={}  {:.6}",
            w.determinant.qubits, w.determinant.alpha, w.determinant.beta, w.weight
        );
    }
    Ok(())
}

fn pauli(a: &PauliArgs, group: &'static PointGroupTable) -> Result<()> {
    let (header, ints) = read_fcidump(&a.fcidump, group)?;
    let config = a
        .constraints
        .input()
        .resolve_with_defaults(&header, group)?;
    let padding = PaddingSetting::parse(&a.padding)?.padding();
    let block = Block::build(&ints, &config, padding)?;
    if block.padding_below_ground {
        log::warn!(
            "padding {:.6} Eh does not lie above the block ground state {:.6} Eh; use --padding penalty",
            block.padding,
            block.ground.energy
        );
    }
    if a.debug_diagonal {
        for (i, d) in block.embedded.diagonal().iter().enumerate() {
            eprintln!("{i:0w$b} {d:.12}", w = block.qubits as usize);
        }
    }
    let sum = block.pauli(a.cutoff)?;
    let (_, report) = group_and_report(&sum);
    let text = write_pauli_sum(&sum);
    match &a.output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if a.json {
        print_json(&report);
    } else {
        let msg = format!(
            "{} qubits, {} terms ({} non-identity, {} odd-Y), {} measurement groups, padding {:.6} Eh",
            report.qubits,
            report.terms,
            report.non_identity_terms,
            report.odd_y_terms,
            report.groups,
            block.padding
        );
        // keep stdout clean when it carries the Pauli sum
        if a.output.is_some() {
            println!("{msg}");
        } else {
            eprintln!("{msg}");
        }
    }
    Ok(())
}

fn apply_overrides(cfg: &mut RunConfig, a: &VqeArgs) -> Result<()> {
    if let Some(d) = &a.fixture_dir {
        cfg.molecule.fixture_dir = d.clone();
    }
    if let Some(r) = &a.bond_lengths {
        cfg.molecule.bond_lengths = r.clone();
    }
    if let Some(d) = a.depth {
        cfg.ansatz.depth = d;
    }
    if let Some(s) = a.scheme {
        cfg.ansatz.scheme = s;
    }
    if let Some(m) = a.mode {
        cfg.estimator.mode = m;
    }
    if let Some(i) = a.iterations {
        cfg.spsa.iterations = i;
    }
    if let Some(r) = a.restarts {
        cfg.spsa.restarts = r;
    }
    if let Some(s) = a.seed {
        cfg.spsa.seed = s;
    }
    if let Some(s) = a.sampling_seed {
        cfg.estimator.seed = s;
    }
    if let Some(f) = a.flip {
        cfg.readout.get_or_insert_with(ReadoutSection::default).flip = f;
    }
    if a.no_mitigate {
        if let Some(r) = cfg.readout.as_mut() {
            r.mitigate = false;
        }
    }
    if let Some(p) = &a.padding {
        cfg.hamiltonian.padding = PaddingSetting::parse(p)?;
    }
    if let Some(o) = &a.out {
        cfg.output.dir = o.clone();
    }
    Ok(())
}

fn vqe(a: &VqeArgs, group: &'static PointGroupTable) -> Result<()> {
    let start = Instant::now();
    let mut cfg = match &a.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if cfg.molecule.point_group == RunConfig::default().molecule.point_group {
        cfg.molecule.point_group = group.name.to_string();
    }
    apply_overrides(&mut cfg, a)?;
    cfg.validate()?;
    let out_dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&out_dir).map_err(|source| CliError::Io {
        path: out_dir.clone(),
        source,
    })?;

    let config_value = serde_json::to_value(&cfg).expect("configuration serializes");
    let mut manifest = RunManifest::start(config_value);
    if let Some(p) = &a.config {
        manifest.add_input(p)?;
    }
    for &r in &cfg.molecule.bond_lengths {
        manifest.add_input(&cfg.molecule.fixture_path(r))?;
    }

    let written = Mutex::new(Vec::new());
    let results = run_scan(&cfg, |r| {
        let path = out_dir.join(trace_file_name(r.bond_length));
        write_file(&path, &trace_json(r))?;
        log::info!(
            "R = {:.2}: {:.8} ± {:.8} Eh, error {:.3} kcal/mol ({:.1} s)",
            r.bond_length,
            r.mean(),
            r.std_dev(),
            r.error_kcal(),
            r.seconds
        );
        written
            .lock()
            .expect("no panics while holding the lock")
            .push(path);
        Ok(())
    })?;

    let reference = equilibrium_energy(&results).expect("validated non-empty grid");
    let curve_path = out_dir.join("curve.csv");
    write_file(&curve_path, &curve_csv(&results, reference))?;

    let mut traces = written.into_inner().expect("lock not poisoned");
    traces.sort();
    for p in traces.iter().chain(std::iter::once(&curve_path)) {
        manifest.add_output(p)?;
    }
    manifest.elapsed_seconds = start.elapsed().as_secs_f64();
    write_file(&out_dir.join("manifest.json"), &manifest.to_json())?;

    println!(
        "{:>6} {:>18} {:>18} {:>12} {:>10}",
        "R/Å", "exact/Eh", "vqe/Eh", "std/Eh", "err/kcal"
    );
    for r in &results {
        println!(
            "{:>6.2} {:>18.10} {:>18.10} {:>12.8} {:>10.4}",
            r.bond_length,
            r.exact_energy,
            r.mean(),
            r.std_dev(),
            r.error_kcal()
        );
    }
    let errors: Vec<f64> = results.iter().map(|r| r.error_kcal().abs()).collect();
    println!(
        "mean |error| {:.4} kcal/mol, max {:.4} kcal/mol; results in {}",
        errors.iter().sum::<f64>() / errors.len() as f64,
        errors.iter().copied().fold(0.0, f64::max),
        display(&out_dir)
    );
    Ok(())
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn mitigate_demo(a: &MitigateArgs, group: &'static PointGroupTable) -> Result<()> {
    let (header, ints) = read_fcidump(&a.fcidump, group)?;
    let config = a
        .constraints
        .input()
        .resolve_with_defaults(&header, group)?;
    let block = Block::build(&ints, &config, PaddingSetting::parse(&a.padding)?.padding())?;
    let sum = block.pauli_default()?;
    let qubits = block.qubits as usize;
    let noise = ReadoutNoiseModel::symmetric(qubits, a.flip)?;
    if let Some(path) = &a.calibration_csv {
        let cal = build_calibration(&noise, a.calibration_shots, a.seed)?;
        write_file(path, &confusion_csv(&cal, qubits))?;
    }
    let summary = mitigation_trials(
        &sum,
        &MitigationExperiment {
            noise,
            depth: a.depth,
            shots: a.shots,
            calibration_shots: a.calibration_shots,
            trials: a.trials,
            seed: a.seed,
        },
    )?;
    if a.json {
        print_json(&summary);
        return Ok(());
    }
    let k = HARTREE_TO_KCAL_PER_MOL;
    println!(
        "{} qubits, flip probability {}, {} trials on one state with exact energy {:.10} Eh",
        qubits, a.flip, summary.trials, summary.exact_energy
    );
    println!(
        "corrected closer to exact in {} trials ({:.1}%)",
        summary.wins,
        100.0 * summary.win_rate()
    );
    println!(
        "mean |error| raw       {:.4} kcal/mol",
        summary.raw_mean_abs_error * k
    );
    println!(
        "mean |error| corrected {:.4} kcal/mol",
        summary.corrected_mean_abs_error * k
    );
    if summary.fallbacks > 0 {
        println!(
            "{} corrections fell back to raw frequencies",
            summary.fallbacks
        );
    }
    Ok(())
}
