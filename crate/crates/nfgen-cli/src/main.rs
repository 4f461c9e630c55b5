//! Command-line entry point: fit candidate plans, select against a
//! performance profile, generate target source, and run verification and
//! trace diagnostics.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Exit codes: 0 success, 1 I/O or schema errors, 2 no feasible candidates,
/// 3 verification failure.
pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NO_CANDIDATES: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "nfgen",
    version,
    about = "Piecewise polynomial approximation toolkit for fixed-point secure computation"
)]
struct Cli {
    /// Cap on fitting worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the mock-sharing layer and suite generation
    /// (overrides the NFGEN_SEED environment variable; default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit candidate plans for every order in the configured range.
    Fit {
        /// Function definition (NFD JSON).
        #[arg(long)]
        nfd: PathBuf,
        /// Candidate-set output file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Pick a plan (or direct evaluation) from a candidate set.
    Select {
        /// Candidate set written by `fit`.
        #[arg(long)]
        candidates: PathBuf,
        /// Performance profile (PPD JSON).
        #[arg(long)]
        ppd: PathBuf,
        #[arg(long)]
        nfd: PathBuf,
        /// Decision output file (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the whole pipeline and emit target source.
    Gen {
        #[arg(long)]
        nfd: PathBuf,
        #[arg(long)]
        ppd: PathBuf,
    },
    /// Check a plan against its function definition on an even grid.
    Verify {
        /// Plan JSON (as emitted by `fit` entries or the `sim` target).
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        nfd: PathBuf,
        /// Grid sample count.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Emit a profiling suite and its performance profile.
    ProfileSuite {
        /// Deployment flavor: privpy-rep2k, rep2k, repf, shamir,
        /// ps-rep2k, ps-repf.
        #[arg(long, default_value = "rep2k")]
        setting: String,
        #[arg(long, default_value_t = 3)]
        k_min: u32,
        #[arg(long, default_value_t = 10)]
        k_max: u32,
        #[arg(long, default_value_t = 2)]
        m_min: u32,
        #[arg(long, default_value_t = 50)]
        m_max: u32,
        /// Samples per grid point (chosen automatically for ~2000 total
        /// when omitted).
        #[arg(long)]
        repeats: Option<u32>,
        /// PPD output file.
        #[arg(short, long)]
        out: PathBuf,
        /// Time the synthetic plans through the simulator's cost
        /// accountant instead of the deployment-mirror formulas.
        #[arg(long)]
        accountant: bool,
    },
    /// Dump evaluation traces and the obliviousness verdict.
    Trace {
        #[arg(long)]
        plan: PathBuf,
        /// Comma-separated input values.
        #[arg(long)]
        inputs: String,
        /// Evaluate with seeded probabilistic truncation.
        #[arg(long)]
        prob_trunc: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let seed = cli
        .seed
        .or_else(|| {
            std::env::var("NFGEN_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0);

    let outcome = match cli.command {
        Command::Fit { nfd, out } => commands::fit(&nfd, &out),
        Command::Select {
            candidates,
            ppd,
            nfd,
            out,
        } => commands::select(&candidates, &ppd, &nfd, out.as_deref()),
        Command::Gen { nfd, ppd } => commands::gen(&nfd, &ppd),
        Command::Verify { plan, nfd, samples } => commands::verify(&plan, &nfd, samples),
        Command::ProfileSuite {
            setting,
            k_min,
            k_max,
            m_min,
            m_max,
            repeats,
            out,
            accountant,
        } => commands::profile_suite(
            &setting,
            (k_min, k_max),
            (m_min, m_max),
            repeats,
            &out,
            accountant,
            seed,
        ),
        Command::Trace {
            plan,
            inputs,
            prob_trunc,
        } => commands::trace(&plan, &inputs, prob_trunc, seed),
    };

    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
