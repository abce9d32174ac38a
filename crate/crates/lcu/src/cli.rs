use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcu_core::{
    auto_time_grid, build_extremal, check_euler_lagrange, covariance_check, estimate_moments, extremal_integrals,
    invariance_report, ks_statistic, minimize_omega, momentum_cdf, momentum_moments, omega, sample_momentum,
    sample_tau, solve_mu, tau_cdf, tau_mean_spectral, time_amplitude, time_moments, time_variance_spectral,
    ExtremalParams, FrameTransform, MinimizeOptions, Moments, MomentumGrid, SampleKind, SampleStats, SpectralState,
    TimeGrid, DEFAULT_BRACKET,
};
use serde::Serialize;

use crate::error::CliError;
use crate::io;

/// Minimum time-energy uncertainty states on the half-line spectrum.
///
/// Reports go to stdout as JSON; errors go to stderr as JSON with a nonzero
/// exit status (2 usage, 3 I/O, 4 parse, 5 schema, 6 invalid option,
/// 7 numerical failure).
#[derive(Debug, Parser)]
#[command(name = "lcu", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve D'_{mu-1/2}(-2 sqrt(mu)) = 0 for mu.
    SolveMu(SolveMuArgs),
    /// Build the analytic extremal state.
    Extremal(ExtremalArgs),
    /// Minimise the discretised uncertainty functional directly.
    Minimize(MinimizeArgs),
    /// Moments, uncertainty product and extremum integrals of a state.
    Stats(StatsArgs),
    /// Registration-time amplitude f(tau) as CSV.
    Timedist(TimedistArgs),
    /// Boost (and optionally translate) a state.
    Boost(BoostArgs),
    /// Frame dependence of the moments under a boost.
    Invariance(InvarianceArgs),
    /// Covariance of the outcome densities under a transform.
    Covariance(CovarianceArgs),
    /// Monte Carlo outcomes of the energy or registration-time measurement.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Momentum cutoff [default: 12 times the mean momentum]
    #[arg(long, allow_negative_numbers = true)]
    pub kmax: Option<f64>,
    /// Grid nodes (odd)
    #[arg(long, env = "LCU_DEFAULT_N", default_value_t = 4001)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct SolveMuArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_BRACKET.0)]
    pub lo: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_BRACKET.1)]
    pub hi: f64,
    /// Residual tolerance on D'
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    /// Order parameter, or "auto" to solve for it
    #[arg(long, allow_negative_numbers = true, default_value = "auto")]
    pub mu: String,
    /// Mean momentum
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub c: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// State file to write; without it the state goes to stdout
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Init {
    /// Gaussian cut off at k = 0
    Gaussian,
    /// The analytic extremal state
    Extremal,
    /// A state file given with --state
    File,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    #[arg(long, value_enum, default_value_t = Init::Gaussian)]
    pub init: Init,
    /// Initial state for --init file
    #[arg(long, required_if_eq("init", "file"))]
    pub state: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub kbar: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.7)]
    pub sigma: f64,
    /// Mean momentum for --init extremal
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub c: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Initial trial step of each line search
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub step: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-7)]
    pub grad_tol: f64,
    /// Where to write the minimising state
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// State file; "-" or nothing reads stdin
    pub input: Option<PathBuf>,
    /// Also integrate over tau (needs f(0) close to zero to converge)
    #[arg(long)]
    pub time_domain: bool,
    /// Tau nodes for --time-domain
    #[arg(long, default_value_t = 2001)]
    pub m: usize,
}

#[derive(Debug, Args)]
pub struct TimedistArgs {
    pub input: Option<PathBuf>,
    /// Window start [default: spectral mean minus 12 standard deviations]
    #[arg(long, allow_negative_numbers = true, requires = "tmax")]
    pub tmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "tmin")]
    pub tmax: Option<f64>,
    #[arg(long, default_value_t = 2001)]
    pub m: usize,
    /// CSV file to write; without it the CSV goes to stdout
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    /// Spatial translation
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub a: f64,
    /// Time translation
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub a0: f64,
}

#[derive(Debug, Args)]
pub struct BoostArgs {
    #[command(flatten)]
    pub transform: TransformArgs,
    pub input: Option<PathBuf>,
    /// State file to write; without it the state goes to stdout
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Momentum densities of both frames as CSV
    #[arg(long)]
    pub density_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CovarianceArgs {
    #[command(flatten)]
    pub transform: TransformArgs,
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 801)]
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Momentum,
    Tau,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Number of outcomes
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Tau nodes for --kind tau
    #[arg(long, default_value_t = 2001)]
    pub m: usize,
    pub input: Option<PathBuf>,
    /// CSV file to write; without it the CSV goes to stdout
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(format!("--{name} must be positive and finite, got {v}")))
    }
}

fn odd_nodes(name: &str, n: usize, min: usize) -> Result<usize, CliError> {
    if n >= min && n % 2 == 1 {
        Ok(n)
    } else {
        Err(invalid(format!("--{name} must be odd and at least {min}, got {n}")))
    }
}

fn velocity(beta: f64) -> Result<f64, CliError> {
    if beta.is_finite() && beta.abs() < 1.0 {
        Ok(beta)
    } else {
        Err(invalid(format!("--beta must satisfy |beta| < 1, got {beta}")))
    }
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("--{name} must be finite")))
    }
}

fn momentum_grid(args: &GridArgs, mean: f64) -> Result<MomentumGrid, CliError> {
    let n = odd_nodes("n", args.n, 5)?;
    let k_max = positive("kmax", args.kmax.unwrap_or(12.0 * mean))?;
    Ok(MomentumGrid::new(k_max, n)?)
}

/// Reads a state from `path`, or from `stdin` for `None` and `-`, and warns
/// on stderr when the cutoff truncates it.
fn load(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<SpectralState, CliError> {
    let state = match path {
        Some(p) if p.as_os_str() != "-" => io::read_state(p)?,
        _ => io::read_state_from(stdin)?,
    };
    if let Some(r) = state.cutoff_warning() {
        eprintln!("{{\"warning\":{{\"kind\":\"cutoff\",\"tail_ratio\":{r:e}}}}}");
    }
    Ok(state)
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::io("<stdout>", e.into()))?;
    writeln!(out).map_err(|e| CliError::io("<stdout>", e))
}

fn bracket(lo: f64, hi: f64, tol: f64) -> Result<(), CliError> {
    positive("lo", lo)?;
    positive("hi", hi)?;
    positive("tol", tol)?;
    if lo >= hi {
        return Err(invalid(format!("bracket must satisfy lo < hi, got [{lo}, {hi}]")));
    }
    Ok(())
}

fn solved_mu(lo: f64, hi: f64, tol: f64) -> Result<f64, CliError> {
    bracket(lo, hi, tol)?;
    Ok(solve_mu(lo, hi, tol)?.mu)
}

/// Dispatches one command, writing its report to `stdout`.
pub fn run(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::SolveMu(a) => solve(a, stdout),
        Command::Extremal(a) => extremal(a, stdout),
        Command::Minimize(a) => minimize(a, stdin, stdout),
        Command::Stats(a) => stats(a, stdin, stdout),
        Command::Timedist(a) => timedist(a, stdin, stdout),
        Command::Boost(a) => boost(a, stdin, stdout),
        Command::Invariance(a) => invariance(a, stdin, stdout),
        Command::Covariance(a) => covariance(a, stdin, stdout),
        Command::Sample(a) => sample(a, stdin, stdout),
    }
}

fn solve(a: SolveMuArgs, out: &mut dyn Write) -> Result<(), CliError> {
    bracket(a.lo, a.hi, a.tol)?;
    emit(out, &solve_mu(a.lo, a.hi, a.tol)?)
}

#[derive(Serialize)]
struct ExtremalReport {
    params: ExtremalParams,
    omega: f64,
    el_residual: f64,
    tail_ratio: f64,
}

fn extremal(a: ExtremalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = positive("c", a.c)?;
    let grid = momentum_grid(&a.grid, c)?;
    let mu = match a.mu.as_str() {
        "auto" => solved_mu(DEFAULT_BRACKET.0, DEFAULT_BRACKET.1, a.tol)?,
        s => positive(
            "mu",
            s.parse().map_err(|_| invalid(format!("--mu: not a number: {s}")))?,
        )?,
    };
    let (state, params) = build_extremal(mu, c, &grid)?;
    match a.output {
        None => io::write_state_to(&state, out),
        Some(path) => {
            io::write_state(&state, &path)?;
            let el_residual = if grid.n() >= 201 {
                check_euler_lagrange(&state, &params)? / state.max_abs()
            } else {
                f64::NAN
            };
            emit(
                out,
                &ExtremalReport {
                    params,
                    omega: omega(&state)?,
                    el_residual,
                    tail_ratio: state.tail_ratio(),
                },
            )
        }
    }
}

#[derive(Serialize)]
struct MinimizeSummary {
    omega_min: f64,
    omega_initial: f64,
    /// Centred-difference functional on the result.
    omega: f64,
    iterations: usize,
    grad_norm: f64,
    converged: bool,
    mean_momentum: f64,
    mu_squared: f64,
    /// L2 distance to the analytic extremal with the same mean momentum.
    extremal_distance: Option<f64>,
    /// Weber residual relative to max |f|.
    el_residual: Option<f64>,
}

fn minimize(a: MinimizeArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    positive("step", a.step)?;
    positive("grad-tol", a.grad_tol)?;
    let init = match a.init {
        Init::Gaussian => {
            let kbar = positive("kbar", a.kbar)?;
            positive("sigma", a.sigma)?;
            SpectralState::gaussian(momentum_grid(&a.grid, kbar)?, kbar, a.sigma)?
        }
        Init::Extremal => {
            let c = positive("c", a.c)?;
            let mu = solved_mu(DEFAULT_BRACKET.0, DEFAULT_BRACKET.1, 1e-12)?;
            build_extremal(mu, c, &momentum_grid(&a.grid, c)?)?.0
        }
        Init::File => load(&a.state, stdin)?,
    };
    let opts = MinimizeOptions {
        step: a.step,
        max_iter: a.max_iter,
        grad_tol: a.grad_tol,
    };
    let r = minimize_omega(&init, &opts)?;
    let state = &r.state;
    let mean = momentum_moments(state)?.mean;
    let mu = solved_mu(DEFAULT_BRACKET.0, DEFAULT_BRACKET.1, 1e-12)?;
    // the comparison is best effort: a drifted mean can push the analytic
    // state past the cutoff
    let extremal_distance = build_extremal(mu, mean, state.grid())
        .ok()
        .and_then(|(ex, _)| state.l2_distance(&ex).ok());
    let el_residual = ExtremalParams::from_state(state)
        .and_then(|p| check_euler_lagrange(state, &p))
        .ok()
        .map(|r| r / state.max_abs());
    if let Some(path) = &a.output {
        io::write_state(state, path)?;
    }
    emit(
        out,
        &MinimizeSummary {
            omega_min: r.omega_min,
            omega_initial: r.history[0],
            omega: omega(state)?,
            iterations: r.iterations,
            grad_norm: r.grad_norm,
            converged: r.converged,
            mean_momentum: mean,
            mu_squared: mu * mu,
            extremal_distance,
            el_residual,
        },
    )
}

#[derive(Serialize)]
struct Integrals {
    a: f64,
    b: f64,
    c: f64,
    b_over_c2: f64,
    /// `sqrt(a (b - c^2))`
    mu: f64,
    /// `a b / 3`
    ab_over_3: f64,
}

#[derive(Serialize)]
struct TimeDomain {
    tau_min: f64,
    tau_max: f64,
    norm: f64,
    boundary_density: f64,
    moments: Moments,
}

#[derive(Serialize)]
struct StatsReport {
    k_max: f64,
    n: usize,
    norm: f64,
    momentum: Moments,
    tau_mean: f64,
    time_second_moment: f64,
    omega: f64,
    tail_ratio: f64,
    real: bool,
    integrals: Option<Integrals>,
    time_domain: Option<TimeDomain>,
}

fn stats(a: StatsArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    if a.time_domain {
        odd_nodes("m", a.m, 3)?;
    }
    let state = load(&a.input, stdin)?;
    let real = state.is_real(1e-10);
    let integrals = if real {
        let (ia, ib, ic) = extremal_integrals(&state)?;
        Some(Integrals {
            a: ia,
            b: ib,
            c: ic,
            b_over_c2: ib / (ic * ic),
            mu: (ia * (ib - ic * ic)).sqrt(),
            ab_over_3: ia * ib / 3.0,
        })
    } else {
        None
    };
    let time_domain = if a.time_domain {
        let tg = auto_time_grid(&state, 12.0, a.m)?;
        let ta = time_amplitude(&state, &tg)?;
        Some(TimeDomain {
            tau_min: tg.tau_min(),
            tau_max: tg.tau_max(),
            norm: ta.norm_squared(),
            boundary_density: ta.boundary_density(),
            moments: time_moments(&ta)?,
        })
    } else {
        None
    };
    emit(
        out,
        &StatsReport {
            k_max: state.grid().k_max(),
            n: state.grid().n(),
            norm: state.norm_squared(),
            momentum: momentum_moments(&state)?,
            tau_mean: tau_mean_spectral(&state)?,
            time_second_moment: time_variance_spectral(&state)?,
            omega: omega(&state)?,
            tail_ratio: state.tail_ratio(),
            real,
            integrals,
            time_domain,
        },
    )
}

#[derive(Serialize)]
struct TimedistSummary {
    tau_min: f64,
    tau_max: f64,
    m: usize,
    norm: f64,
    boundary_density: f64,
    /// Absent when the window leaves too much density at its edges.
    moments: Option<Moments>,
}

fn timedist(a: TimedistArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    let m = odd_nodes("m", a.m, 3)?;
    if let (Some(lo), Some(hi)) = (a.tmin, a.tmax) {
        if finite("tmin", lo)? >= finite("tmax", hi)? {
            return Err(invalid("--tmin must be below --tmax"));
        }
    }
    let state = load(&a.input, stdin)?;
    let tg = match (a.tmin, a.tmax) {
        (Some(lo), Some(hi)) => TimeGrid::new(lo, hi, m)?,
        _ => auto_time_grid(&state, 12.0, m)?,
    };
    let ta = time_amplitude(&state, &tg)?;
    match a.output {
        None => io::write_time_csv(&ta, out),
        Some(path) => {
            let mut w = io::create(&path)?;
            io::write_time_csv(&ta, &mut w)?;
            emit(
                out,
                &TimedistSummary {
                    tau_min: tg.tau_min(),
                    tau_max: tg.tau_max(),
                    m,
                    norm: ta.norm_squared(),
                    boundary_density: ta.boundary_density(),
                    moments: time_moments(&ta).ok(),
                },
            )
        }
    }
}

fn transform(t: &TransformArgs) -> Result<FrameTransform, CliError> {
    let beta = velocity(t.beta)?;
    Ok(FrameTransform::new(beta, finite("a", t.a)?, finite("a0", t.a0)?)?)
}

#[derive(Serialize)]
struct BoostSummary {
    transform: FrameTransform,
    doppler: f64,
    k_max: f64,
    k_max_m: f64,
    mean: f64,
    mean_m: f64,
    norm: f64,
    norm_m: f64,
}

fn boost(a: BoostArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    let t = transform(&a.transform)?;
    let state = load(&a.input, stdin)?;
    let moved = t.apply(&state)?;
    if let Some(path) = &a.density_csv {
        let mut w = io::create(path)?;
        io::write_density_csv(&[("rest", &state), ("moving", &moved)], &mut w)?;
    }
    match a.output {
        None => io::write_state_to(&moved, out),
        Some(path) => {
            io::write_state(&moved, &path)?;
            emit(
                out,
                &BoostSummary {
                    transform: t,
                    doppler: t.doppler(),
                    k_max: state.grid().k_max(),
                    k_max_m: moved.grid().k_max(),
                    mean: momentum_moments(&state)?.mean,
                    mean_m: momentum_moments(&moved)?.mean,
                    norm: state.norm_squared(),
                    norm_m: moved.norm_squared(),
                },
            )
        }
    }
}

fn invariance(a: InvarianceArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    let beta = velocity(a.beta)?;
    let state = load(&a.input, stdin)?;
    emit(out, &invariance_report(&state, beta)?)
}

fn covariance(a: CovarianceArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    let t = transform(&a.transform)?;
    let m = odd_nodes("m", a.m, 3)?;
    let state = load(&a.input, stdin)?;
    emit(out, &covariance_check(&state, &t, m)?)
}

#[derive(Serialize)]
struct SampleSummary {
    kind: SampleKind,
    seed: u64,
    stats: SampleStats,
    quadrature: Moments,
    ks_statistic: f64,
    /// 1% critical value `1.63 / sqrt(n)`.
    ks_critical: f64,
}

fn sample(a: SampleArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    if a.n == 0 {
        return Err(invalid("--n must be at least 1"));
    }
    if a.kind == Kind::Tau {
        odd_nodes("m", a.m, 3)?;
    }
    let state = load(&a.input, stdin)?;
    let (batch, cdf, quadrature) = match a.kind {
        Kind::Momentum => (
            sample_momentum(&state, a.n, a.seed)?,
            momentum_cdf(&state)?,
            momentum_moments(&state)?,
        ),
        Kind::Tau => {
            let tg = auto_time_grid(&state, 12.0, a.m)?;
            let q = time_moments(&time_amplitude(&state, &tg)?)?;
            (sample_tau(&state, &tg, a.n, a.seed)?, tau_cdf(&state, &tg)?, q)
        }
    };
    match a.output {
        None => io::write_samples_csv(&batch, out),
        Some(path) => {
            let mut w = io::create(&path)?;
            io::write_samples_csv(&batch, &mut w)?;
            if batch.values.len() < 2 {
                return Err(invalid("summary statistics need --n of at least 2"));
            }
            emit(
                out,
                &SampleSummary {
                    kind: batch.kind,
                    seed: batch.seed,
                    stats: estimate_moments(&batch.values)?,
                    quadrature,
                    ks_statistic: ks_statistic(&batch.values, &cdf),
                    ks_critical: 1.63 / (batch.values.len() as f64).sqrt(),
                },
            )
        }
    }
}
