//! Command line for building holographic erasure codes, decoding erasure
//! patterns, running Monte-Carlo recovery sweeps and locating thresholds.
//!
//! Exit codes: 0 success, 1 usage error, 2 capacity error, 3 i/o error.

mod svg;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use holoqec::code::{build_code, export_code, import_code, CodeBundle};
use holoqec::erasure::{
    brute_force_recoverable, is_recoverable_greedy, ErasurePattern, LogicalCriterion,
    OptimalDecoder,
};
use holoqec::pauli::{SeedCode, SeedKind};
use holoqec::sim::{
    estimate_prec, find_threshold, read_curves_csv, write_curve_csv, write_mixed_csv,
    DecoderKind, RecoveryCurve, SimulationConfig, DEFAULT_EXACT_CUTOFF, DEFAULT_TRIALS,
};
use holoqec::tensor::{check_block_perfect, check_perfect};
use holoqec::tiling::{build_tiling, export_tiling};

#[derive(Parser)]
#[command(
    name = "holoqec",
    about = "Holographic erasure codes: build, decode, simulate, find thresholds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SeedArg {
    Steane,
    #[value(name = "five_qubit")]
    FiveQubit,
}

impl From<SeedArg> for SeedKind {
    fn from(value: SeedArg) -> Self {
        match value {
            SeedArg::Steane => SeedKind::Steane,
            SeedArg::FiveQubit => SeedKind::FiveQubit,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Perfect,
    Block,
    Both,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum DecoderArg {
    Optimal,
    Greedy,
    Both,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum RequireArg {
    Both,
    X,
    Z,
}

impl From<RequireArg> for LogicalCriterion {
    fn from(value: RequireArg) -> Self {
        match value {
            RequireArg::Both => LogicalCriterion::Both,
            RequireArg::X => LogicalCriterion::XOnly,
            RequireArg::Z => LogicalCriterion::ZOnly,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify perfection or block perfection of a seed tensor.
    CheckSeed {
        #[arg(long, value_enum)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
    },
    /// Build a holographic code and write its text presentation.
    Build {
        #[arg(long, value_enum)]
        seed: SeedArg,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the tile adjacency listing.
        #[arg(long)]
        tiling_out: Option<PathBuf>,
    },
    /// Decide recoverability of one erasure pattern.
    Decode {
        #[arg(long)]
        code: PathBuf,
        /// Erasure mask as a 0/1 string over the boundary qubits.
        #[arg(long)]
        erasure: String,
        #[arg(long, value_enum, default_value = "optimal")]
        decoder: DecoderArg,
        /// Print the stabilizer combination that clears the erased set.
        #[arg(long)]
        witness: bool,
        /// Bulk tile to decode (0 = central).
        #[arg(long, default_value_t = 0)]
        tile: usize,
        #[arg(long, value_enum, default_value = "both")]
        require: RequireArg,
    },
    /// Estimate recovery probabilities per erasure weight.
    Simulate {
        #[arg(long, value_enum)]
        seed: SeedArg,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value = "optimal")]
        decoder: DecoderArg,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXACT_CUTOFF)]
        exact_cutoff: u64,
        #[arg(long, default_value_t = 0)]
        tile: usize,
        #[arg(long, value_enum, default_value = "both")]
        require: RequireArg,
    },
    /// Locate crossings of mixed recovery curves from CSV files.
    Threshold {
        #[arg(long, num_args = 2.., required = true)]
        curves: Vec<PathBuf>,
    },
    /// Render mixed recovery curves as an SVG line plot.
    Plot {
        #[arg(long, num_args = 1.., required = true)]
        curves: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Also dump the mixed samples as R,p,p_rec rows.
        #[arg(long)]
        mixed_csv: Option<PathBuf>,
        /// Samples per curve along the probability axis.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not failures.
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

fn classify(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<holoqec::Error>() {
            return match e {
                holoqec::Error::Capacity(_) => 2,
                holoqec::Error::Io(_) => 3,
                _ => 1,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
    }
    1
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::CheckSeed { seed, mode } => check_seed(seed.into(), mode),
        Command::Build {
            seed,
            radius,
            out,
            tiling_out,
        } => build(seed.into(), radius, &out, tiling_out.as_deref()),
        Command::Decode {
            code,
            erasure,
            decoder,
            witness,
            tile,
            require,
        } => decode(&code, &erasure, decoder, witness, tile, require.into()),
        Command::Simulate {
            seed,
            radius,
            decoder,
            trials,
            rng_seed,
            out,
            exact_cutoff,
            tile,
            require,
        } => {
            let kind = match decoder {
                DecoderArg::Optimal => DecoderKind::Optimal,
                DecoderArg::Greedy => DecoderKind::Greedy,
                DecoderArg::Both => {
                    anyhow::bail!("simulate needs a single decoder, optimal or greedy")
                }
            };
            simulate(
                SimulationConfig {
                    trials,
                    rng_seed,
                    exact_cutoff,
                    tile,
                    criterion: require.into(),
                    ..SimulationConfig::new(seed.into(), radius, kind)
                },
                &out,
            )
        }
        Command::Threshold { curves } => threshold(&curves),
        Command::Plot {
            curves,
            out,
            mixed_csv,
            points,
        } => plot(&curves, &out, mixed_csv.as_deref(), points),
    }
}

fn check_seed(kind: SeedKind, mode: ModeArg) -> Result<()> {
    let seed = SeedCode::of(kind);
    match mode {
        ModeArg::Perfect => println!("seed={kind} perfect={}", check_perfect(&seed)),
        ModeArg::Block => println!("seed={kind} block_perfect={}", check_block_perfect(&seed)),
        ModeArg::Both => println!(
            "seed={kind} perfect={} block_perfect={}",
            check_perfect(&seed),
            check_block_perfect(&seed)
        ),
    }
    Ok(())
}

fn build(kind: SeedKind, radius: usize, out: &Path, tiling_out: Option<&Path>) -> Result<()> {
    let seed = SeedCode::of(kind);
    let tiling = build_tiling(kind.n_sides(), radius)?;
    let code = build_code(&tiling, &seed)?;
    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    export_code(&code, BufWriter::new(file))?;
    println!(
        "built seed={kind} R={radius}: [[{}, {}]] code with {} generators -> {}",
        code.n,
        code.k,
        code.generators.len(),
        out.display()
    );
    if let Some(path) = tiling_out {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        export_tiling(&tiling, BufWriter::new(file))?;
        println!("tiling adjacency -> {}", path.display());
    }
    Ok(())
}

fn decode(
    code_path: &Path,
    erasure: &str,
    decoder: DecoderArg,
    witness: bool,
    tile: usize,
    criterion: LogicalCriterion,
) -> Result<()> {
    let file = File::open(code_path).with_context(|| format!("opening {}", code_path.display()))?;
    let code = import_code(BufReader::new(file))?;
    let pattern = ErasurePattern::parse(erasure)?;
    if pattern.len() != code.n {
        anyhow::bail!(holoqec::Error::InvalidArgument(format!(
            "erasure mask has {} bits, code has n={}",
            pattern.len(),
            code.n
        )));
    }
    println!(
        "code seed={} R={} [[{}, {}]]; erasure weight {} of {}; tile {tile}",
        code.seed_kind,
        code.radius,
        code.n,
        code.k,
        pattern.weight(),
        code.n
    );
    let run_optimal = matches!(decoder, DecoderArg::Optimal | DecoderArg::Both);
    let run_greedy = matches!(decoder, DecoderArg::Greedy | DecoderArg::Both);
    if run_optimal {
        let verdict = OptimalDecoder::new(&code).decide(&pattern, tile, criterion)?;
        println!("optimal: recoverable={}", verdict.recoverable);
        if witness {
            for (tag, w) in [("X", &verdict.witness_x), ("Z", &verdict.witness_z)] {
                match w {
                    Some(lambda) => {
                        let indices: Vec<String> =
                            lambda.ones().map(|i| i.to_string()).collect();
                        println!("witness {tag}: generators [{}]", indices.join(" "));
                    }
                    None => println!("witness {tag}: none"),
                }
            }
        }
        if code.generators.len() <= holoqec::erasure::BRUTE_FORCE_MAX_GENERATORS {
            let brute = brute_force_recoverable(&code, &pattern, tile, criterion)?;
            debug_assert_eq!(brute, verdict.recoverable);
        }
    }
    if run_greedy {
        let seed = SeedCode::of(code.seed_kind);
        let tiling = build_tiling(code.n_sides(), code.radius)?;
        if tiling.boundary.len() != code.n {
            anyhow::bail!(holoqec::Error::InvalidArgument(
                "code file header inconsistent with its tiling".into()
            ));
        }
        let verdict = is_recoverable_greedy(&tiling, &seed, &pattern, tile)?;
        println!("greedy: recoverable={verdict}");
    }
    Ok(())
}

fn simulate(cfg: SimulationConfig, out: &Path) -> Result<()> {
    let bundle = CodeBundle::build(cfg.kind, cfg.radius)?;
    println!(
        "simulating seed={} R={} [[{}, {}]] decoder={} trials={} rng_seed={} cutoff={}",
        cfg.kind,
        cfg.radius,
        bundle.code.n,
        bundle.code.k,
        cfg.decoder,
        cfg.trials,
        cfg.rng_seed,
        cfg.exact_cutoff
    );
    let curve = estimate_prec(&bundle, &cfg)?;
    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    write_curve_csv(&curve, BufWriter::new(file))?;
    let exact = curve.entries.iter().filter(|e| e.exact).count();
    println!(
        "wrote {} rows ({exact} exact) -> {}",
        curve.entries.len(),
        out.display()
    );
    Ok(())
}

fn load_curves(paths: &[PathBuf]) -> Result<Vec<RecoveryCurve>> {
    let mut curves = Vec::new();
    for path in paths {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        curves.extend(read_curves_csv(BufReader::new(file))?);
    }
    Ok(curves)
}

fn threshold(paths: &[PathBuf]) -> Result<()> {
    let curves = load_curves(paths)?;
    println!("loaded {} curves", curves.len());
    let report = find_threshold(&curves)?;
    for pair in &report.pairs {
        match pair.crossing {
            Some(p) => println!(
                "pair R={}..R={}: crossing at p = {p:.4}",
                pair.radius_low, pair.radius_high
            ),
            None => println!(
                "pair R={}..R={}: no crossing",
                pair.radius_low, pair.radius_high
            ),
        }
    }
    match (report.mean, report.spread) {
        (Some(mean), Some(spread)) => {
            println!("threshold estimate: {mean:.4} +- {spread:.4}");
        }
        _ => println!("threshold estimate: none (no crossings found)"),
    }
    Ok(())
}

fn plot(paths: &[PathBuf], out: &Path, mixed_csv: Option<&Path>, points: usize) -> Result<()> {
    if points == 0 {
        anyhow::bail!(holoqec::Error::InvalidArgument(
            "points must be positive".into()
        ));
    }
    let mut curves = load_curves(paths)?;
    curves.sort_by_key(|c| (c.radius, c.n_sides));
    let rendered = svg::render(&curves, points)?;
    let mut file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    file.write_all(rendered.as_bytes())?;
    println!("plotted {} curves -> {}", curves.len(), out.display());
    if let Some(path) = mixed_csv {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_mixed_csv(&curves, points, BufWriter::new(file))?;
        println!("mixed samples -> {}", path.display());
    }
    Ok(())
}
