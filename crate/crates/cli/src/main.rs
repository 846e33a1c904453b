use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entmon_core::classify::{classify, LogBase};
use entmon_core::io::{
    fmt_f64, parse_matrix_arg, parse_path_json, parse_slice_json, parse_spectrum_arg, read_arg, to_json_string,
    SliceInput,
};
use entmon_core::levelset::{
    chart_entropy, chart_entropy_gradient, constraint_tangent_rank, d2_witness, gauss_ratio, lambda2_derivatives,
    relent_constraint, LevelSetSlice, SlicePoint,
};
use entmon_core::monodromy::{run_monodromy, write_trace_csv, MonodromyOptions};
use entmon_core::spectral::{build_chart, DensityState, HermitianMatrix};
use entmon_core::{Error, ErrorClass, Result};
use serde_json::json;

const SCHEMA: &str = "1";
const WITNESS_TOLERANCE: f64 = 1e-10;
const OFFDIAG_PERTURBATION: f64 = 0.05;

/// Entropy level sets, branch ledgers and exact entropy classification.
#[derive(Parser, Debug)]
#[command(name = "entmon", version)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Newton tolerance of the path tracker.
    #[arg(long, global = true)]
    tol_newton: Option<f64>,
    /// Tolerance of the lattice cross-check.
    #[arg(long, global = true)]
    tol_lattice: Option<f64>,
    /// Minimum distance between a path and any singular point.
    #[arg(long, global = true)]
    exclusion_radius: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the entropy of a rational spectrum is zero, rational or transcendental.
    Classify {
        /// Eigenvalues as `p/q` list, `diag:…`, `identity/d`, or a JSON spectrum document.
        #[arg(long)]
        spectrum: String,
        /// Logarithm base: `e` or a rational greater than 1.
        #[arg(long, default_value = "e")]
        base: String,
    },
    /// Continue λ₂(λ₁) around a closed loop and report the branch ledger.
    Monodromy {
        #[command(flatten)]
        slice: SliceArgs,
        /// Closed path as JSON (inline or file); defaults to the origin-centred circle through ξ₁.
        #[arg(long)]
        path: Option<String>,
        #[arg(long, default_value_t = 5)]
        batches: usize,
        /// Write the tracked states as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Sample the real level curve and write points and gradients as CSV.
    Levelset {
        #[command(flatten)]
        slice: SliceArgs,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Check that qubit states of a fixed entropy share one purity.
    #[command(name = "witness-d2")]
    WitnessD2 {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Rank of the eigenvalue pushforward restricted to a constraint tangent space.
    TangentRank {
        #[arg(long)]
        rho: String,
        /// Reference state; the constraint gradient becomes ln σ.
        #[arg(long, conflicts_with = "grad")]
        sigma: Option<String>,
        /// Explicit constraint gradient.
        #[arg(long)]
        grad: Option<String>,
        #[arg(long, value_enum, default_value_t = Perturb::None)]
        perturb: Perturb,
    },
    /// Build the diagonalizing chart of a non-degenerate state.
    Chart {
        #[arg(long)]
        rho: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Perturb {
    None,
    /// Add a small real coupling between the first two basis states of ρ.
    Offdiag,
}

#[derive(Args, Debug)]
struct SliceArgs {
    /// Slice as JSON (inline or file).
    #[arg(long, conflicts_with_all = ["through", "c"])]
    slice: Option<String>,
    /// Point `λ₁,λ₂` fixing the level.
    #[arg(long, value_delimiter = ',', conflicts_with = "c")]
    through: Option<Vec<f64>>,
    /// Entropy level.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Frozen eigenvalues ξ₃, …, ξ_{d−1}.
    #[arg(long, value_delimiter = ',')]
    tail: Vec<f64>,
    /// Starting λ₁.
    #[arg(long)]
    xi1: Option<f64>,
}

impl SliceArgs {
    fn resolve(&self) -> Result<SliceInput> {
        let mut input = match (&self.slice, &self.through, self.c) {
            (Some(doc), _, _) => parse_slice_json(&read_arg(doc)?)?,
            (None, Some(p), _) => {
                let &[l1, l2] = p.as_slice() else {
                    return Err(Error::Validation(format!("--through needs two values, got {}", p.len())));
                };
                SliceInput { slice: LevelSetSlice::through(self.d, self.tail.clone(), l1, l2)?, xi1: Some(l1) }
            }
            (None, None, Some(c)) => SliceInput { slice: LevelSetSlice::new(self.d, c, self.tail.clone())?, xi1: None },
            (None, None, None) => {
                return Err(Error::Validation("give one of --slice, --through or --c".into()));
            }
        };
        if self.xi1.is_some() {
            input.xi1 = self.xi1;
        }
        Ok(input)
    }
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>> {
    match v {
        Some(x) if !(x.is_finite() && x > 0.0) => Err(Error::Validation(format!("{name} must be positive, got {x}"))),
        other => Ok(other),
    }
}

struct Output {
    text: String,
    ok: bool,
}

fn cmd_classify(spectrum: &str, base: &str) -> Result<Output> {
    let spectrum = parse_spectrum_arg(spectrum)?;
    let base: LogBase = base.parse()?;
    let result = classify(&spectrum, &base)?;
    let mut report = result.report();
    report["base"] = json!(base.to_string());
    Ok(Output { text: to_json_string(&report)?, ok: true })
}

fn cmd_monodromy(cli: &Cli, slice: &SliceArgs, path: Option<&str>, batches: usize, trace: Option<&PathBuf>) -> Result<Output> {
    let input = slice.resolve()?;
    let xi1 = match input.xi1 {
        Some(x) => x,
        None => {
            let (lo, hi) = input.slice.ordered_interval()?;
            0.5 * (lo + hi)
        }
    };
    let path = path.map(|p| read_arg(p).and_then(|t| parse_path_json(&t))).transpose()?;
    let mut opts = MonodromyOptions::default();
    if let Some(t) = positive("--tol-newton", cli.tol_newton)? {
        opts.track.newton_tolerance = t;
    }
    if let Some(t) = positive("--tol-lattice", cli.tol_lattice)? {
        opts.lattice_tolerance = t;
    }
    opts.exclusion_radius = positive("--exclusion-radius", cli.exclusion_radius)?;

    let run = run_monodromy(&input.slice, xi1, path, batches, &opts)?;
    if let Some(file) = trace {
        let f = fs::File::create(file)
            .map_err(|e| Error::Validation(format!("cannot create {}: {e}", file.display())))?;
        write_trace_csv(&run.trace.states, &input.slice, io::BufWriter::new(f))?;
    }
    let ledger = &run.ledger;
    let report = json!({
        "schema": SCHEMA,
        "lattice_verified": ledger.lattice_verified,
        "distinct": ledger.distinct,
        "distinct_count": ledger.distinct_count,
        "f_values": ledger.f_values().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "ledger": ledger,
        "tracked_states": run.trace.states.len(),
    });
    Ok(Output { text: to_json_string(&report)?, ok: ledger.passed() })
}

fn cmd_levelset(slice: &SliceArgs, points: usize) -> Result<Output> {
    if points < 2 {
        return Err(Error::Validation("--points must be at least 2".into()));
    }
    let input = slice.resolve()?;
    let s = &input.slice;
    let (lo, hi) = s.ordered_interval()?;
    let margin = 1e-3 * (hi - lo);
    let mut text = String::from(
        "lambda1,lambda2,remainder,entropy,grad1,grad2,gauss_ratio,slope,curvature,ratio_derivative\n",
    );
    for i in 0..points {
        let l1 = lo + margin + (hi - lo - 2.0 * margin) * i as f64 / (points - 1) as f64;
        let l2 = s.lower_branch_lambda2(l1)?;
        let x = s.chart_point(l1, l2);
        let g = chart_entropy_gradient(&x)?;
        let der = lambda2_derivatives(&SlicePoint::new(s, l1, l2)?, s)?;
        let row = [
            l1,
            l2,
            s.mass() - l1 - l2,
            chart_entropy(&x)?,
            g[0],
            g[1],
            gauss_ratio(&x)?,
            der.slope,
            der.curvature,
            der.ratio_derivative,
        ];
        text.push_str(&row.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(","));
        text.push('\n');
    }
    Ok(Output { text, ok: true })
}

fn cmd_witness(c: f64, samples: usize, seed: u64) -> Result<Output> {
    let rep = d2_witness(c, samples, seed)?;
    let ok = rep.max_deviation <= WITNESS_TOLERANCE;
    let report = json!({
        "schema": SCHEMA,
        "seed": seed,
        "tolerance": WITNESS_TOLERANCE,
        "passed": ok,
        "witness": rep,
    });
    Ok(Output { text: to_json_string(&report)?, ok })
}

fn offdiag_perturbed(rho: &DensityState) -> Result<DensityState> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::Validation("off-diagonal perturbation needs d ≥ 2".into()));
    }
    let mut re = vec![vec![0.0; d]; d];
    re[0][1] = OFFDIAG_PERTURBATION;
    re[1][0] = OFFDIAG_PERTURBATION;
    DensityState::new(rho.matrix().add(&HermitianMatrix::from_parts(&re, None)?))
}

fn cmd_tangent_rank(rho: &str, sigma: Option<&str>, grad: Option<&str>, perturb: Perturb) -> Result<Output> {
    let mut state = parse_matrix_arg(rho)?.to_density()?;
    if perturb == Perturb::Offdiag {
        state = offdiag_perturbed(&state)?;
    }
    let (grad_h, commutator) = match (sigma, grad) {
        (Some(s), _) => {
            let sigma = parse_matrix_arg(s)?.to_density()?;
            let con = relent_constraint(&sigma, &state)?;
            (con.grad_h, Some(con.commutator_norm))
        }
        (None, Some(g)) => {
            let g = parse_matrix_arg(g)?.to_hermitian();
            let c = state.matrix().commutator_norm(&g);
            (g, Some(c))
        }
        (None, None) => return Err(Error::Validation("give --sigma or --grad".into())),
    };
    let rank = constraint_tangent_rank(&state, &grad_h)?;
    let report = json!({
        "schema": SCHEMA,
        "dim": state.dim(),
        "rank": rank,
        "full_rank": rank == state.dim(),
        "commutator_norm": commutator,
        "perturbation": match perturb { Perturb::None => "none", Perturb::Offdiag => "offdiag" },
        "eigenvalues": state.spectrum().eigenvalues,
    });
    Ok(Output { text: to_json_string(&report)?, ok: true })
}

fn cmd_chart(rho: &str) -> Result<Output> {
    let state = parse_matrix_arg(rho)?.to_density()?;
    let rep = build_chart(&state)?;
    let report = json!({ "schema": SCHEMA, "dim": state.dim(), "chart": rep });
    Ok(Output { text: to_json_string(&report)?, ok: true })
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Classify { spectrum, base } => cmd_classify(spectrum, base),
        Command::Monodromy { slice, path, batches, trace } => {
            cmd_monodromy(cli, slice, path.as_deref(), *batches, trace.as_ref())
        }
        Command::Levelset { slice, points } => cmd_levelset(slice, *points),
        Command::WitnessD2 { c, samples } => cmd_witness(*c, *samples, cli.seed),
        Command::TangentRank { rho, sigma, grad, perturb } => {
            cmd_tangent_rank(rho, sigma.as_deref(), grad.as_deref(), *perturb)
        }
        Command::Chart { rho } => cmd_chart(rho),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Validation(format!("cannot write to stdout: {e}"))),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Validation => 2,
        ErrorClass::Numerical => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ENTMON_LOG", "warn")).init();
    let cli = Cli::parse();
    match dispatch(&cli).and_then(|out| emit(&cli, &out.text).map(|_| out.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            log::error!("checks failed; see report");
            eprintln!("entmon: checks failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("entmon: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
