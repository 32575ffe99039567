//! Command-line driver: threshold constants, fiber scans, the bump-family
//! landscape, constrained solves on the mass sphere, the whole-plane limit
//! problem, and the large-domain asymptotics sweep.
//!
//! Exit codes: 0 success, 2 parameter or regime error, 3 convergence
//! failure, 4 I/O or format error.

use clap::{Args, Parser, Subcommand};
use splab_core::constants::thresholds;
use splab_core::fibration::fiber_scan;
use splab_core::grid::{build_grid, principal_eigenpair};
use splab_core::limit::{decay_certificate, limit_solution, shoot_ground_state};
use splab_core::pipeline::{run_asymptotics, run_landscape, write_field, write_json, RunConfig};
use splab_core::solvers::{hls_measured, solve_local_min, solve_mountain_pass};
use splab_core::{DomainShape, Params, SplabError};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "splab", about = "numerical laboratory for the planar log-convolution energy")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Threshold constants for a given (p, alpha, rho, R)
    Constants(ProblemFlags),
    /// Fiber scan (t, h, h') through the scaled principal eigenfunction
    Fibration {
        #[command(flatten)]
        flags: ProblemFlags,
        /// scan range lower end
        #[arg(long, default_value_t = 1e-3)]
        t_lo: f64,
        /// scan range upper end
        #[arg(long, default_value_t = 1e3)]
        t_hi: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
    },
    /// Bump-family energies on the Pohozaev manifold with fitted slopes
    Landscape {
        #[command(flatten)]
        flags: ProblemFlags,
        /// family indices, comma separated
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Vec<usize>,
    },
    /// Local-minimum or mountain-pass solve on the mass sphere
    Solve {
        #[command(flatten)]
        flags: ProblemFlags,
        /// which branch: the constrained minimizer or the saddle above it
        #[arg(long, value_parser = ["min", "mp"], default_value = "min")]
        mode: String,
        /// continue the p-term weight s from 1/2 up to 1
        #[arg(long)]
        s_homotopy: bool,
    },
    /// Whole-plane limit profile, closed-form level, and decay certificate
    Limit(ProblemFlags),
    /// Sweep R upward and track both branches toward the limit problem
    Asymptotics {
        #[command(flatten)]
        flags: ProblemFlags,
        /// radii, comma separated, strictly increasing
        #[arg(long = "R-list", value_delimiter = ',')]
        r_list: Vec<f64>,
    },
}

fn parse_shape(s: &str) -> Result<DomainShape, String> {
    match s {
        "disk" => Ok(DomainShape::Disk),
        "square" => Ok(DomainShape::Square),
        other => Err(format!("unknown shape {other:?} (expected disk or square)")),
    }
}

/// Problem flags shared by every subcommand; a config file supplies defaults
/// and explicit flags override it.
#[derive(Args)]
struct ProblemFlags {
    /// JSON run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_shape)]
    shape: Option<DomainShape>,
    /// domain diameter
    #[arg(long = "R")]
    r_scale: Option<f64>,
    /// lattice nodes per axis
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// artifact directory
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ProblemFlags {
    fn config(&self) -> Result<RunConfig, SplabError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig {
                params: Params::new(6.0, -0.1, 1.0),
                shape: DomainShape::Disk,
                r_scale: 8.0,
                n: 65,
                r_values: vec![],
                n_values: vec![],
                s_schedule: vec![1.0],
                out_dir: PathBuf::from("out"),
                seed: 0,
                alpha_cap_eps: 0.5,
            },
        };
        if let Some(shape) = self.shape {
            cfg.shape = shape;
        }
        if let Some(r) = self.r_scale {
            cfg.r_scale = r;
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(p) = self.p {
            cfg.params.p = p;
        }
        if let Some(alpha) = self.alpha {
            cfg.params.alpha = alpha;
        }
        if let Some(rho) = self.rho {
            cfg.params.rho = rho;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        Ok(cfg)
    }
}

fn emit<T: serde::Serialize>(value: &T) -> Result<(), SplabError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| SplabError::Format(format!("serialization: {e}")))?;
    println!("{text}");
    Ok(())
}

fn cmd_constants(flags: &ProblemFlags) -> Result<(), SplabError> {
    let cfg = flags.config()?;
    cfg.validate_solve()?;
    let grid = build_grid(cfg.shape, cfg.r_scale, cfg.n)?;
    let ep = principal_eigenpair(&grid, cfg.params.rho)?;
    let lambda1 = ep.lambda1 * cfg.r_scale * cfg.r_scale;
    let c_p = splab_core::constants::gn_constant(cfg.params.p)?;
    let th = thresholds(&cfg.params, cfg.r_scale, lambda1, cfg.shape.area(), c_p, hls_measured())?;
    emit(&th)?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let csv = format!(
        "p,rho,R,c_p,c_hls,x_star,f_at_xstar,r0,alpha0,alpha1,alpha_star,rho_star\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
        cfg.params.p, cfg.params.rho, cfg.r_scale, th.c_p, th.c_hls, th.x_star, th.f_at_xstar,
        th.r0, th.alpha0, th.alpha1, th.alpha_star, th.rho_star
    );
    std::fs::write(cfg.out_dir.join("constants.csv"), csv)?;
    Ok(())
}

fn cmd_fibration(
    flags: &ProblemFlags,
    t_lo: f64,
    t_hi: f64,
    points: usize,
) -> Result<(), SplabError> {
    let cfg = flags.config()?;
    cfg.validate_solve()?;
    let grid = build_grid(cfg.shape, cfg.r_scale, cfg.n)?;
    let ep = principal_eigenpair(&grid, cfg.params.rho)?;
    let scan = fiber_scan(&ep.psi, &cfg.params, t_lo, t_hi, points)?;
    let mut csv = String::from("t,h,dh\n");
    for i in 0..scan.t.len() {
        csv.push_str(&format!("{},{},{}\n", scan.t[i], scan.h[i], scan.dh[i]));
    }
    print!("{csv}");
    eprintln!("t_u = {}, sign_certified = {}", scan.t_u, scan.sign_certified);
    std::fs::create_dir_all(&cfg.out_dir)?;
    std::fs::write(cfg.out_dir.join("fibration.csv"), csv)?;
    Ok(())
}

fn cmd_landscape(flags: &ProblemFlags, n_list: &[usize]) -> Result<(), SplabError> {
    let mut cfg = flags.config()?;
    if !n_list.is_empty() {
        cfg.n_values = n_list.to_vec();
    }
    let summary = run_landscape(&cfg)?;
    emit(&summary)
}

fn cmd_solve(flags: &ProblemFlags, mode: &str, s_homotopy: bool) -> Result<(), SplabError> {
    let cfg = flags.config()?;
    cfg.validate_solve()?;
    let grid = build_grid(cfg.shape, cfg.r_scale, cfg.n)?;
    let rep0 = solve_local_min(&grid, &cfg.params)?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut csv = String::from("iteration,energy,grad_norm\n");
    for (i, (e, g)) in rep0.trace.iter().enumerate() {
        csv.push_str(&format!("{i},{e},{g}\n"));
    }
    std::fs::write(cfg.out_dir.join("convergence.csv"), csv)?;
    write_field(&rep0.solution, &cfg.out_dir.join("solution_min.json"))?;
    write_json(&rep0, &cfg.out_dir.join("report_min.json"))?;
    if !rep0.converged {
        eprintln!("local minimizer did not converge (grad norm {})", rep0.grad_norm);
        return Err(SplabError::IterationLimit("local minimizer not converged".into()));
    }
    let report = if mode == "mp" {
        let rep1 = solve_mountain_pass(&grid, &cfg.params, &rep0, s_homotopy)?;
        write_field(&rep1.solution, &cfg.out_dir.join("solution_mp.json"))?;
        write_json(&rep1, &cfg.out_dir.join("report_mp.json"))?;
        if !rep1.converged || rep1.landscape_degenerate {
            return Err(SplabError::Refinement("mountain pass not converged".into()));
        }
        rep1
    } else {
        rep0
    };
    emit(&report)
}

fn cmd_limit(flags: &ProblemFlags) -> Result<(), SplabError> {
    let cfg = flags.config()?;
    cfg.validate_limit()?;
    let gs = Arc::new(shoot_ground_state(cfg.params.p, 1e-10)?);
    let sol = limit_solution(&gs, cfg.params.rho)?;
    let cert = decay_certificate(&sol)?;
    let summary = serde_json::json!({
        "p": gs.p,
        "rho": sol.rho,
        "lambda_bar": sol.lambda_bar,
        "level": sol.m_rho,
        "w0": gs.w0,
        "ground_state_mass": gs.mass,
        "ground_state_kinetic": gs.kinetic,
        "decay": cert,
    });
    emit(&summary)?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut csv = String::from("r,w\n");
    let mut r = 0.0;
    while r <= gs.r_max() {
        csv.push_str(&format!("{r},{}\n", gs.value_at(r)));
        r += 0.01;
    }
    std::fs::write(cfg.out_dir.join("limit_profile.csv"), csv)?;
    Ok(())
}

fn cmd_asymptotics(flags: &ProblemFlags, r_list: &[f64]) -> Result<(), SplabError> {
    let mut cfg = flags.config()?;
    if !r_list.is_empty() {
        cfg.r_values = r_list.to_vec();
    }
    let report = run_asymptotics(&cfg)?;
    emit(&report)
}

fn run(cli: Cli) -> Result<(), SplabError> {
    match &cli.cmd {
        Cmd::Constants(flags) => cmd_constants(flags),
        Cmd::Fibration { flags, t_lo, t_hi, points } => cmd_fibration(flags, *t_lo, *t_hi, *points),
        Cmd::Landscape { flags, n_list } => cmd_landscape(flags, n_list),
        Cmd::Solve { flags, mode, s_homotopy } => cmd_solve(flags, mode, *s_homotopy),
        Cmd::Limit(flags) => cmd_limit(flags),
        Cmd::Asymptotics { flags, r_list } => cmd_asymptotics(flags, r_list),
    }
}

fn exit_code(e: &SplabError) -> u8 {
    match e {
        SplabError::Parameter(_)
        | SplabError::Range(_)
        | SplabError::DegenerateGrid(_)
        | SplabError::GridMismatch(_)
        | SplabError::Constraint(_)
        | SplabError::Resolution(_)
        | SplabError::OracleTooLarge(..) => 2,
        SplabError::IterationLimit(_)
        | SplabError::Shooting(_)
        | SplabError::Bracket(_)
        | SplabError::Refinement(_) => 3,
        SplabError::Io(_) | SplabError::Format(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
