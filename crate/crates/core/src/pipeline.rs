//! Run configuration, artifact serialization, field-file I/O, the landscape
//! sweep over the bump families, and the large-`R` asymptotics sweep that
//! tracks the two solution branches toward the whole-plane limit problem.

use crate::constants::{gn_constant, thresholds};
use crate::error::{Result, SplabError};
use crate::functional::Params;
use crate::grid::{build_grid, principal_eigenpair, DomainShape, Field, Grid};
use crate::limit::{limit_solution, shoot_ground_state};
use crate::sequences::{vn_energy_on_p, wn_energy_on_p};
use crate::solvers::{solve_local_min, solve_mountain_pass, SolveReport};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

/// One JSON document drives every subcommand; flags override fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: Params,
    pub shape: DomainShape,
    /// domain diameter `R`
    pub r_scale: f64,
    /// lattice nodes per axis
    pub n: usize,
    /// radii for the asymptotics sweep, strictly increasing
    #[serde(default)]
    pub r_values: Vec<f64>,
    /// family indices for the landscape sweep
    #[serde(default)]
    pub n_values: Vec<usize>,
    /// homotopy weights on the p-term, ending at the target `s`
    #[serde(default = "default_schedule")]
    pub s_schedule: Vec<f64>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// margin factor for the coupling cap `|alpha| <= eps |alpha*|`
    #[serde(default = "default_alpha_cap")]
    pub alpha_cap_eps: f64,
}

fn default_schedule() -> Vec<f64> {
    vec![1.0]
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_alpha_cap() -> f64 {
    0.5
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| SplabError::Format(format!("bad config {}: {e}", path.display())))
    }

    /// Guards shared by the solve-type subcommands: `p > 4`, `alpha < 0`.
    pub fn validate_solve(&self) -> Result<()> {
        self.params.validate_solver_regime()?;
        self.validate_common()
    }

    /// Guards for the limit-problem subcommands, where `alpha` is free.
    pub fn validate_limit(&self) -> Result<()> {
        if !(self.params.p > 4.0) || !(self.params.rho > 0.0) {
            return Err(SplabError::Parameter(format!(
                "limit problem needs p > 4 and rho > 0; got p = {}, rho = {}",
                self.params.p, self.params.rho
            )));
        }
        self.validate_common()
    }

    fn validate_common(&self) -> Result<()> {
        if !(self.r_scale > 0.0) {
            return Err(SplabError::Parameter(format!("R must be positive, got {}", self.r_scale)));
        }
        if self.n < 4 {
            return Err(SplabError::Parameter(format!("n = {} is too small", self.n)));
        }
        if self.r_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SplabError::Parameter("R sweep values must be strictly increasing".into()));
        }
        if !(self.alpha_cap_eps > 0.0 && self.alpha_cap_eps < 1.0) {
            return Err(SplabError::Parameter(format!(
                "alpha cap factor must lie in (0, 1), got {}",
                self.alpha_cap_eps
            )));
        }
        Ok(())
    }

    /// FNV-1a hash of the canonical JSON form; stamped into every artifact so
    /// outputs can be matched back to the emitting run.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let mut acc: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.as_bytes() {
            acc ^= u64::from(*b);
            acc = acc.wrapping_mul(0x1000_0000_01b3);
        }
        format!("{acc:016x}")
    }
}

// ---------------------------------------------------------------------------
// Field files: JSON header + raw little-endian payload
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct FieldHeader {
    shape: DomainShape,
    #[serde(rename = "R")]
    r_scale: f64,
    n: usize,
    h: f64,
    mass: f64,
}

fn payload_path(header_path: &Path) -> PathBuf {
    header_path.with_extension("f64")
}

/// Writes the header document at `header_path` and the row-major interior
/// values as little-endian doubles in the sibling `.f64` file.
pub fn write_field(u: &Field, header_path: &Path) -> Result<PathBuf> {
    let g = &u.grid;
    let header = FieldHeader {
        shape: g.shape,
        r_scale: g.r_scale,
        n: g.n,
        h: g.h,
        mass: u.mass(),
    };
    let text = serde_json::to_string_pretty(&header)
        .map_err(|e| SplabError::Format(format!("header serialization: {e}")))?;
    fs::write(header_path, text)?;
    let mut bytes = Vec::with_capacity(8 * u.values.len());
    for v in &u.values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    let payload = payload_path(header_path);
    fs::write(&payload, bytes)?;
    Ok(payload)
}

/// Reads a field back; the header must reproduce the grid exactly and the
/// payload length and stored mass must match it.
pub fn read_field(header_path: &Path) -> Result<Field> {
    let text = fs::read_to_string(header_path)?;
    let header: FieldHeader = serde_json::from_str(&text)
        .map_err(|e| SplabError::Format(format!("bad field header {}: {e}", header_path.display())))?;
    let grid = build_grid(header.shape, header.r_scale, header.n)?;
    if (grid.h - header.h).abs() > 1e-12 * grid.h {
        return Err(SplabError::Format(format!(
            "header spacing h = {} disagrees with the grid spacing {} for n = {}",
            header.h, grid.h, header.n
        )));
    }
    let bytes = fs::read(payload_path(header_path))?;
    if bytes.len() != 8 * grid.interior_len() {
        return Err(SplabError::Format(format!(
            "payload holds {} bytes but the grid has {} interior nodes",
            bytes.len(),
            grid.interior_len()
        )));
    }
    let values: Vec<f64> =
        bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let u = grid.field_from(values)?;
    let mass = u.mass();
    if (mass - header.mass).abs() > 1e-9 * (1.0 + header.mass.abs()) {
        return Err(SplabError::Format(format!(
            "header mass {} disagrees with the payload mass {mass}",
            header.mass
        )));
    }
    Ok(u)
}

/// Write-then-read sanity pass; the result is bitwise equal to the input.
pub fn io_roundtrip(u: &Field, dir: &Path) -> Result<Field> {
    fs::create_dir_all(dir)?;
    let header = dir.join("roundtrip.json");
    write_field(u, &header)?;
    read_field(&header)
}

/// Serializes any report as pretty JSON.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| SplabError::Format(format!("serialization: {e}")))?;
    fs::write(path, text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Landscape sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LandscapeRow {
    pub n: usize,
    /// energy on the Pohozaev manifold
    pub energy: f64,
    /// fiber time placing the family member on the manifold
    pub t: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LandscapeSummary {
    pub config_hash: String,
    pub v_rows: Vec<LandscapeRow>,
    pub w_rows: Vec<LandscapeRow>,
    /// least-squares slope of the two-bump energies against `log(n^2 - 1)`;
    /// the separation mechanism predicts `alpha rho^2 / 8`
    pub v_slope: Option<f64>,
    pub v_slope_predicted: f64,
    /// least-squares slope of the n-bump energies against `n`
    pub w_slope: Option<f64>,
}

fn lsq_slope(xy: &[(f64, f64)]) -> Option<f64> {
    if xy.len() < 2 {
        return None;
    }
    let m = xy.len() as f64;
    let (sx, sy) = xy.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (sxx, sxy) =
        xy.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x * x, b + x * y));
    Some((m * sxy - sx * sy) / (m * sxx - sx * sx))
}

/// Evaluates both bump families on the Pohozaev manifold over `cfg.n_values`
/// and writes `(n, J)` tables plus fitted slopes into `cfg.out_dir`.
pub fn run_landscape(cfg: &RunConfig) -> Result<LandscapeSummary> {
    cfg.validate_solve()?;
    let prm = cfg.params;
    let mut v_rows = Vec::new();
    let mut w_rows = Vec::new();
    if !cfg.n_values.is_empty() {
        let grid = build_grid(cfg.shape, cfg.r_scale, cfg.n)?;
        let ep = principal_eigenpair(&grid, prm.rho)?;
        for &n in &cfg.n_values {
            let v = vn_energy_on_p(&ep, n, &prm)?;
            v_rows.push(LandscapeRow { n, energy: v.value, t: v.t, residual: v.residual });
            let w = wn_energy_on_p(&ep, n, &prm)?;
            w_rows.push(LandscapeRow { n, energy: w.value, t: w.t, residual: w.residual });
        }
    }
    let v_fit: Vec<(f64, f64)> = v_rows
        .iter()
        .map(|r| (((r.n * r.n - 1) as f64).ln(), r.energy))
        .collect();
    let w_fit: Vec<(f64, f64)> = w_rows.iter().map(|r| (r.n as f64, r.energy)).collect();
    let summary = LandscapeSummary {
        config_hash: cfg.hash(),
        v_rows,
        w_rows,
        v_slope: lsq_slope(&v_fit),
        v_slope_predicted: 0.125 * prm.alpha * prm.rho * prm.rho,
        w_slope: lsq_slope(&w_fit),
    };
    fs::create_dir_all(&cfg.out_dir)?;
    write_rows_csv(&cfg.out_dir.join("landscape_v.csv"), &summary.v_rows)?;
    write_rows_csv(&cfg.out_dir.join("landscape_w.csv"), &summary.w_rows)?;
    write_json(&summary, &cfg.out_dir.join("landscape_summary.json"))?;
    Ok(summary)
}

fn write_rows_csv(path: &Path, rows: &[LandscapeRow]) -> Result<()> {
    let mut text = String::from("n,energy,t,residual\n");
    for r in rows {
        text.push_str(&format!("{},{},{},{}\n", r.n, r.energy, r.t, r.residual));
    }
    fs::write(path, text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Asymptotics sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsRow {
    pub r_scale: f64,
    pub n: usize,
    /// coupling after the cap `|alpha| <= eps |alpha*_{R,rho}|`
    pub alpha_used: f64,
    /// local minimum level `C_{R,rho}`
    pub min_level: f64,
    /// gradient norm of the minimizer branch
    pub grad_min: f64,
    /// multiplier of the mountain-pass branch
    pub mp_lambda: f64,
    /// `|lambda^1_R - lambda_bar|`
    pub lambda_gap: f64,
    /// H1 distance of the mountain-pass solution to the sampled limit profile
    pub h1_distance: f64,
    pub mp_energy: f64,
    /// set when any solve in this row failed; metrics are NaN then
    pub flagged: bool,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsReport {
    pub config_hash: String,
    pub lambda_bar: f64,
    /// multiplier of the `alpha = 0` reference solve on the largest sweep
    /// grid; `lambda_gap` in the rows is measured against this value so the
    /// shared discretization bias cancels (it carries the same `O(h^2)`
    /// offset from `lambda_bar` as every row)
    pub lambda_ref: f64,
    pub limit_level: f64,
    pub rows: Vec<AsymptoticsRow>,
}

fn failed_row(r: f64, n: usize, alpha: f64, why: &str) -> AsymptoticsRow {
    AsymptoticsRow {
        r_scale: r,
        n,
        alpha_used: alpha,
        min_level: f64::NAN,
        grad_min: f64::NAN,
        mp_lambda: f64::NAN,
        lambda_gap: f64::NAN,
        h1_distance: f64::NAN,
        mp_energy: f64::NAN,
        flagged: true,
        note: why.to_string(),
    }
}

/// Nodes per axis keeping the spacing at or below `h_target`, odd so a
/// lattice node sits at the concentration point.
fn nodes_for(shape: DomainShape, r: f64, h_target: f64, n_min: usize, n_max: usize) -> usize {
    let extent = 2.0 * shape.half_extent() * r;
    let mut n = (extent / h_target).ceil() as usize + 1;
    if n % 2 == 0 {
        n += 1;
    }
    n.clamp(n_min | 1, n_max | 1)
}

/// Discrete stand-in for the whole-plane limit solution: the `alpha = 0`
/// mountain-pass solve on the largest sweep domain at the sweep spacing.
/// Comparing multipliers and profiles against it (rather than against the
/// closed forms directly) cancels the common `O(h^2)` discretization bias,
/// which at fixed spacing would otherwise swamp the R-dependence.
struct DiscreteLimit {
    lambda: f64,
    field: Field,
}

fn h1_distance(u: &Field, dl: &DiscreteLimit, grid: &Arc<Grid>) -> f64 {
    // the sweep grids share one spacing and a centered node, so the
    // reference lattice contains every row lattice and the resample is exact
    let mut d = grid.zero_field();
    for (k, &(i, j)) in grid.interior_nodes().iter().enumerate() {
        let (x, y) = grid.coords(i, j);
        d.values[k] = dl.field.interp(x, y);
    }
    // fix the sign conventions of both branches before comparing
    let sign = |f: &Field| if f.values.iter().sum::<f64>() >= 0.0 { 1.0 } else { -1.0 };
    d.scale_values(sign(&d));
    d.axpy(-sign(u), u);
    (d.grad_norm2() + d.mass()).sqrt()
}

fn solve_row(
    cfg: &RunConfig,
    r: f64,
    n: usize,
    dl: &DiscreteLimit,
    c_p: f64,
) -> Result<(AsymptoticsRow, SolveReport, SolveReport)> {
    let grid = build_grid(cfg.shape, r, n)?;
    let ep = principal_eigenpair(&grid, cfg.params.rho)?;
    let lambda1 = ep.lambda1 * r * r;
    let th = thresholds(&cfg.params, r, lambda1, cfg.shape.area(), c_p, crate::solvers::hls_measured())?;
    let alpha_used = -cfg.params.alpha.abs().min(cfg.alpha_cap_eps * th.alpha_star.abs());
    let prm = Params { alpha: alpha_used, ..cfg.params };
    let rep0 = solve_local_min(&grid, &prm)?;
    let rep1 = solve_mountain_pass(&grid, &prm, &rep0, cfg.s_schedule.len() > 1)?;
    let row = AsymptoticsRow {
        r_scale: r,
        n,
        alpha_used,
        min_level: rep0.energy.total,
        grad_min: rep0.solution.grad_norm2().sqrt(),
        mp_lambda: rep1.lagrange_lambda,
        lambda_gap: (rep1.lagrange_lambda - dl.lambda).abs(),
        h1_distance: h1_distance(&rep1.solution, dl, &grid),
        mp_energy: rep1.energy.total,
        flagged: false,
        note: String::new(),
    };
    Ok((row, rep0, rep1))
}

/// Sweeps the radii in `cfg.r_values`, solving both branches on each domain
/// with the coupling capped inside the admissible window, and compares the
/// mountain-pass branch against the limit problem: the multiplier gap and
/// H1 distance are measured against the `alpha = 0` solve on the largest
/// sweep domain at matched spacing (see [`DiscreteLimit`]). Failures flag
/// their row and the sweep continues. Rows run concurrently.
pub fn run_asymptotics(cfg: &RunConfig) -> Result<AsymptoticsReport> {
    cfg.validate_solve()?;
    if cfg.r_values.is_empty() {
        return Err(SplabError::Parameter("asymptotics needs a nonempty R sweep".into()));
    }
    let gs = Arc::new(shoot_ground_state(cfg.params.p, 1e-10)?);
    let limit = limit_solution(&gs, cfg.params.rho)?;
    let c_p = gn_constant(cfg.params.p)?;
    // resolve the limit soliton, whose width is lambda_bar^{-1/2}
    let h_target = limit.lambda_bar.sqrt().recip() / 6.0;

    let r_max = *cfg.r_values.last().unwrap();
    let n_ref = nodes_for(cfg.shape, r_max, h_target, cfg.n, 257);
    let grid_ref = build_grid(cfg.shape, r_max, n_ref)?;
    let prm0 = Params { alpha: 0.0, ..cfg.params };
    let ref0 = solve_local_min(&grid_ref, &prm0)?;
    let ref1 = solve_mountain_pass(&grid_ref, &prm0, &ref0, cfg.s_schedule.len() > 1)?;
    let dl = DiscreteLimit { lambda: ref1.lagrange_lambda, field: ref1.solution };

    let rows: Vec<AsymptoticsRow> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .r_values
            .iter()
            .map(|&r| {
                let dl = &dl;
                scope.spawn(move || {
                    let n = nodes_for(cfg.shape, r, h_target, cfg.n, 257);
                    match solve_row(cfg, r, n, dl, c_p) {
                        Ok((row, rep0, rep1)) => (row, Some((rep0, rep1))),
                        Err(e) => (failed_row(r, n, cfg.params.alpha, &e.to_string()), None),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                let (row, reports) = h.join().expect("sweep worker");
                if let Some((rep0, rep1)) = reports {
                    let tag = format!("R{:04.0}", row.r_scale * 10.0);
                    let _ = write_field(&rep0.solution, &cfg.out_dir.join(format!("{tag}_min.json")));
                    let _ = write_field(&rep1.solution, &cfg.out_dir.join(format!("{tag}_mp.json")));
                }
                row
            })
            .collect()
    });

    let report = AsymptoticsReport {
        config_hash: cfg.hash(),
        lambda_bar: limit.lambda_bar,
        lambda_ref: dl.lambda,
        limit_level: limit.m_rho,
        rows,
    };
    fs::create_dir_all(&cfg.out_dir)?;
    let mut csv = String::from(
        "R,n,alpha_used,min_level,grad_min,mp_lambda,lambda_gap,h1_distance,mp_energy,flagged\n",
    );
    for r in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.r_scale,
            r.n,
            r.alpha_used,
            r.min_level,
            r.grad_min,
            r.mp_lambda,
            r.lambda_gap,
            r.h1_distance,
            r.mp_energy,
            r.flagged
        ));
    }
    fs::write(cfg.out_dir.join("asymptotics.csv"), csv)?;
    write_json(&report, &cfg.out_dir.join("asymptotics.json"))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn small_cfg() -> RunConfig {
        RunConfig {
            params: Params::new(6.0, -0.1, 1.0),
            shape: DomainShape::Disk,
            r_scale: 4.0,
            n: 33,
            r_values: vec![],
            n_values: vec![],
            s_schedule: vec![1.0],
            out_dir: PathBuf::from("out"),
            seed: 7,
            alpha_cap_eps: 0.5,
        }
    }

    fn random_field(n: usize) -> Field {
        let g = build_grid(DomainShape::Disk, 3.0, n).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        g.field_from((0..g.interior_len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn roundtrip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let u = random_field(21);
        let v = io_roundtrip(&u, dir.path()).unwrap();
        assert!(u.values.iter().zip(&v.values).all(|(a, b)| a.to_bits() == b.to_bits()));
        assert!(v.grid.same_grid(&u.grid));
    }

    #[test]
    fn truncated_payload_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let u = random_field(21);
        let header = dir.path().join("f.json");
        let payload = write_field(&u, &header).unwrap();
        let bytes = fs::read(&payload).unwrap();
        fs::write(&payload, &bytes[..bytes.len() - 8]).unwrap();
        assert!(matches!(read_field(&header), Err(SplabError::Format(_))));
    }

    #[test]
    fn header_n_mismatch_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let u = random_field(21);
        let header = dir.path().join("f.json");
        write_field(&u, &header).unwrap();
        let text = fs::read_to_string(&header).unwrap().replace("\"n\": 21", "\"n\": 23");
        fs::write(&header, text).unwrap();
        assert!(matches!(read_field(&header), Err(SplabError::Format(_))));
    }

    #[test]
    fn config_roundtrips_with_defaults_and_hash_is_stable() {
        let text = r#"{
            "params": {"p": 6.0, "alpha": -0.1, "rho": 1.0},
            "shape": "disk", "r_scale": 8.0, "n": 65
        }"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.s_schedule, vec![1.0]);
        assert_eq!(cfg.alpha_cap_eps, 0.5);
        cfg.validate_solve().unwrap();
        assert_eq!(cfg.hash(), cfg.clone().hash());
        let bad = RunConfig { params: Params::new(3.0, -0.1, 1.0), ..cfg };
        assert!(matches!(bad.validate_solve(), Err(SplabError::Parameter(_))));
    }

    #[test]
    fn decreasing_r_sweep_is_rejected() {
        let cfg = RunConfig { r_values: vec![8.0, 4.0], ..small_cfg() };
        assert!(matches!(cfg.validate_solve(), Err(SplabError::Parameter(_))));
    }

    #[test]
    fn empty_landscape_writes_empty_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig { out_dir: dir.path().to_path_buf(), ..small_cfg() };
        let sum = run_landscape(&cfg).unwrap();
        assert!(sum.v_rows.is_empty() && sum.w_rows.is_empty() && sum.v_slope.is_none());
        assert_eq!(fs::read_to_string(dir.path().join("landscape_v.csv")).unwrap(), "n,energy,t,residual\n");
    }

    #[test]
    fn landscape_slope_tracks_the_separation_law() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            out_dir: dir.path().to_path_buf(),
            n_values: vec![5, 10, 20, 40],
            ..small_cfg()
        };
        let sum = run_landscape(&cfg).unwrap();
        assert!(sum.v_rows.windows(2).all(|w| w[1].energy < w[0].energy));
        let slope = sum.v_slope.unwrap();
        assert!(
            (slope - sum.v_slope_predicted).abs() < 0.1 * sum.v_slope_predicted.abs(),
            "slope {slope} vs predicted {}",
            sum.v_slope_predicted
        );
    }

    #[test]
    fn asymptotics_single_radius_smoke() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            params: Params::new(6.0, -0.05, 3.0),
            out_dir: dir.path().to_path_buf(),
            r_values: vec![4.0],
            n: 33,
            ..small_cfg()
        };
        let rep = run_asymptotics(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 1);
        let row = &rep.rows[0];
        assert!(!row.flagged, "row flagged: {}", row.note);
        assert!(row.alpha_used < 0.0 && row.alpha_used >= -0.05);
        assert!(row.grad_min > 0.0 && row.mp_energy > row.min_level);
        assert!(dir.path().join("asymptotics.csv").exists());
        assert!(dir.path().join("asymptotics.json").exists());
    }
}
