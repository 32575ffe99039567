//! Logarithmic convolution machinery: the bilinear forms `chi1`, `chi2`,
//! `chi0 = chi1 - chi2` with kernels `log(1+r)`, `log(1+1/r)`, `log r`, the
//! convolution field `(log|.| * u^2)`, and a dense double-sum oracle.
//!
//! The kernel singularity at zero separation is regularized by the
//! cell-average rule: the diagonal entry is the average of the kernel over
//! one `h x h` grid cell centered at the origin, computed by quadrature.

use crate::error::{Result, SplabError};
use crate::grid::{Field, Grid};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::sync::Arc;

/// Largest lattice (nodes per axis) for which the dense kernel matrix may be
/// materialized.
pub const KERNEL_MATRIX_MAX_N: usize = 97;

const ORACLE_MAX_NODES: usize = 5000;

/// 16-point Gauss-Legendre nodes/weights on [-1, 1].
const GL_X: [f64; 8] = [
    0.09501250983763744,
    0.2816035507792589,
    0.45801677765722737,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL_W: [f64; 8] = [
    0.1894506104550685,
    0.18260341504492358,
    0.16915651939500254,
    0.14959598881657674,
    0.12462897125553388,
    0.09515851168249279,
    0.062253523938647894,
    0.027152459411754096,
];

/// Integrates `f` over the rectangle [x0,x1]x[y0,y1] with tensor Gauss rule.
fn gauss2(f: &dyn Fn(f64, f64) -> f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let (cx, hx) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
    let (cy, hy) = (0.5 * (y0 + y1), 0.5 * (y1 - y0));
    let mut acc = 0.0;
    for i in 0..16 {
        let (xi, wi) = gl_point(i);
        for j in 0..16 {
            let (yj, wj) = gl_point(j);
            acc += wi * wj * f(cx + hx * xi, cy + hy * yj);
        }
    }
    acc * hx * hy
}

#[inline]
fn gl_point(i: usize) -> (f64, f64) {
    if i < 8 {
        (-GL_X[7 - i], GL_W[7 - i])
    } else {
        (GL_X[i - 8], GL_W[i - 8])
    }
}

/// Average of `log|z|` over the unit cell [-1/2,1/2]^2, by dyadically graded
/// quadrature toward the singularity.
fn unit_cell_log_average() -> f64 {
    // one quadrant [0,1/2]^2, by symmetry
    let f = |x: f64, y: f64| 0.5 * (x * x + y * y).ln();
    let mut total = 0.0;
    let mut s = 0.5;
    for _ in 0..40 {
        let s2 = 0.5 * s;
        // L-shaped annulus [0,s]^2 \ [0,s/2]^2 as two rectangles
        total += gauss2(&f, s2, s, 0.0, s) + gauss2(&f, 0.0, s2, s2, s);
        s = s2;
    }
    4.0 * total
}

/// Average of `log(1+|z|)` over the `h x h` cell centered at the origin.
fn cell_log1p_average(h: f64) -> f64 {
    let f = |x: f64, y: f64| (1.0 + (x * x + y * y).sqrt()).ln();
    let s = 0.5 * h;
    4.0 * gauss2(&f, 0.0, s, 0.0, s) / (h * h)
}

fn unit_log_avg() -> f64 {
    use std::sync::OnceLock;
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(unit_cell_log_average)
}

/// Regularized diagonal entries of the three kernels for spacing `h`.
///
/// By construction `d_log = d_log1p - d_log_recip`, so the splitting identity
/// `chi0 = chi1 - chi2` survives the regularization exactly.
#[derive(Debug, Clone, Copy)]
pub struct KernelDiagonal {
    pub d_log: f64,
    pub d_log1p: f64,
    pub d_log_recip: f64,
}

impl KernelDiagonal {
    pub fn for_spacing(h: f64) -> Self {
        let d_log = h.ln() + unit_log_avg();
        let d_log1p = cell_log1p_average(h);
        KernelDiagonal { d_log, d_log1p, d_log_recip: d_log1p - d_log }
    }
}

/// Symmetric table of the regularized `log|x_i - x_j|` kernel over interior
/// nodes. Materialized only for small grids; larger grids use the fast path
/// or on-the-fly rows.
pub struct KernelMatrix {
    pub grid: Arc<Grid>,
    entries: Vec<f64>,
}

impl KernelMatrix {
    pub fn build(grid: &Arc<Grid>) -> Result<KernelMatrix> {
        if grid.n > KERNEL_MATRIX_MAX_N {
            return Err(SplabError::Resolution(format!(
                "kernel matrix materialization capped at n = {KERNEL_MATRIX_MAX_N}, got n = {}",
                grid.n
            )));
        }
        let m = grid.interior_len();
        let diag = KernelDiagonal::for_spacing(grid.h);
        let nodes = grid.interior_nodes();
        let mut entries = vec![0.0; m * m];
        for a in 0..m {
            let (ia, ja) = nodes[a];
            entries[a * m + a] = diag.d_log;
            for b in (a + 1)..m {
                let (ib, jb) = nodes[b];
                let dx = ia as f64 - ib as f64;
                let dy = ja as f64 - jb as f64;
                let v = (grid.h * (dx * dx + dy * dy).sqrt()).ln();
                entries[a * m + b] = v;
                entries[b * m + a] = v;
            }
        }
        Ok(KernelMatrix { grid: Arc::clone(grid), entries })
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize) -> f64 {
        self.entries[a * self.grid.interior_len() + b]
    }
}

fn check_same_grid(u: &Field, v: &Field) -> Result<()> {
    if !u.grid.same_grid(&v.grid) {
        return Err(SplabError::GridMismatch(
            "chi forms require both fields on the same grid".into(),
        ));
    }
    Ok(())
}

/// The three bilinear forms on densities, `chi1(u^2,v^2)`, `chi2(u^2,v^2)`
/// and `chi0 = chi1 - chi2`, by double quadrature with the regularized
/// diagonal. `chi0` is evaluated from its own kernel and the splitting
/// identity is asserted.
#[derive(Debug, Clone, Copy)]
pub struct ChiForms {
    pub chi0: f64,
    pub chi1: f64,
    pub chi2: f64,
}

pub fn chi_forms(u: &Field, v: &Field) -> Result<ChiForms> {
    check_same_grid(u, v)?;
    let grid = &u.grid;
    let diag = KernelDiagonal::for_spacing(grid.h);
    let nodes = grid.interior_nodes();
    let m = grid.interior_len();
    let u2: Vec<f64> = u.values.iter().map(|a| a * a).collect();
    let v2: Vec<f64> = v.values.iter().map(|a| a * a).collect();
    let (mut chi0, mut chi1, mut chi2) = (0.0, 0.0, 0.0);
    for a in 0..m {
        let (ia, ja) = nodes[a];
        for b in 0..m {
            let q = u2[a] * v2[b];
            if a == b {
                chi0 += q * diag.d_log;
                chi1 += q * diag.d_log1p;
                chi2 += q * diag.d_log_recip;
            } else {
                let (ib, jb) = nodes[b];
                let dx = ia as f64 - ib as f64;
                let dy = ja as f64 - jb as f64;
                let r = grid.h * (dx * dx + dy * dy).sqrt();
                chi0 += q * r.ln();
                chi1 += q * (1.0 + r).ln();
                chi2 += q * (1.0 + 1.0 / r).ln();
            }
        }
    }
    let w4 = grid.weight() * grid.weight();
    let forms = ChiForms { chi0: chi0 * w4, chi1: chi1 * w4, chi2: chi2 * w4 };
    let scale = forms.chi1.abs() + forms.chi2.abs() + f64::MIN_POSITIVE;
    debug_assert!(
        (forms.chi0 - (forms.chi1 - forms.chi2)).abs() <= 1e-10 * scale,
        "kernel splitting identity violated"
    );
    Ok(forms)
}

/// Plain O(M^2) double loop for `chi0(u^2,u^2)`; the ground-truth oracle for
/// `chi_forms` and `log_convolve`.
pub fn brute_force_chi0(u: &Field) -> Result<f64> {
    let grid = &u.grid;
    let m = grid.interior_len();
    if m > ORACLE_MAX_NODES {
        return Err(SplabError::OracleTooLarge(m, ORACLE_MAX_NODES));
    }
    let diag = KernelDiagonal::for_spacing(grid.h);
    let nodes = grid.interior_nodes();
    let u2: Vec<f64> = u.values.iter().map(|a| a * a).collect();
    let mut acc = 0.0;
    for a in 0..m {
        let (ia, ja) = nodes[a];
        acc += u2[a] * u2[a] * diag.d_log;
        for b in (a + 1)..m {
            let (ib, jb) = nodes[b];
            let dx = ia as f64 - ib as f64;
            let dy = ja as f64 - jb as f64;
            acc += 2.0 * u2[a] * u2[b] * (grid.h * (dx * dx + dy * dy).sqrt()).ln();
        }
    }
    Ok(acc * grid.weight() * grid.weight())
}

/// Free-space convolution with the sampled log kernel via zero-padded FFT.
///
/// Padding to at least `2n-1` per axis makes the cyclic convolution equal to
/// the free-space one exactly on the sampled kernel, so the fast path matches
/// the dense double sum to round-off.
pub struct LogConvolver {
    grid: Arc<Grid>,
    size: usize,
    kernel_hat: Vec<Complex<f64>>,
    planner: FftPlanner<f64>,
}

impl LogConvolver {
    pub fn new(grid: &Arc<Grid>) -> LogConvolver {
        let n = grid.n;
        let size = (2 * n - 1).next_power_of_two();
        let diag = KernelDiagonal::for_spacing(grid.h);
        let mut kernel = vec![Complex::new(0.0, 0.0); size * size];
        for dj in -(n as i64 - 1)..=(n as i64 - 1) {
            let row = dj.rem_euclid(size as i64) as usize;
            for di in -(n as i64 - 1)..=(n as i64 - 1) {
                let col = di.rem_euclid(size as i64) as usize;
                let v = if di == 0 && dj == 0 {
                    diag.d_log
                } else {
                    let d2 = (di * di + dj * dj) as f64;
                    (grid.h * d2.sqrt()).ln()
                };
                kernel[row * size + col] = Complex::new(v, 0.0);
            }
        }
        let mut planner = FftPlanner::new();
        fft2(&mut planner, &mut kernel, size, rustfft::FftDirection::Forward);
        LogConvolver { grid: Arc::clone(grid), size, kernel_hat: kernel, planner }
    }

    /// `w(x_i) = h^2 sum_j K[i][j] u(x_j)^2`.
    pub fn convolve(&mut self, u: &Field) -> Field {
        assert!(self.grid.same_grid(&u.grid), "convolver grid mismatch");
        let g = &self.grid;
        let size = self.size;
        let mut data = vec![Complex::new(0.0, 0.0); size * size];
        for (k, &(i, j)) in g.interior_nodes().iter().enumerate() {
            data[j as usize * size + i as usize] = Complex::new(u.values[k] * u.values[k], 0.0);
        }
        fft2(&mut self.planner, &mut data, size, rustfft::FftDirection::Forward);
        for (d, k) in data.iter_mut().zip(&self.kernel_hat) {
            *d *= k;
        }
        fft2(&mut self.planner, &mut data, size, rustfft::FftDirection::Inverse);
        let norm = g.weight() / (size * size) as f64;
        let vals = g
            .interior_nodes()
            .iter()
            .map(|&(i, j)| data[j as usize * size + i as usize].re * norm)
            .collect();
        Field { grid: Arc::clone(g), values: vals }
    }

    /// `chi0(u^2, u^2)` through the fast path.
    pub fn chi0(&mut self, u: &Field) -> f64 {
        let w = self.convolve(u);
        u.grid.weight() * w.values.iter().zip(&u.values).map(|(w, v)| w * v * v).sum::<f64>()
    }
}

/// One-shot fast-path convolution; solvers keep a [`LogConvolver`] instead.
pub fn log_convolve(u: &Field) -> Field {
    LogConvolver::new(&u.grid).convolve(u)
}

/// Dense-path convolution, the reference for the FFT route.
pub fn log_convolve_dense(u: &Field) -> Result<Field> {
    let grid = &u.grid;
    let m = grid.interior_len();
    if m > ORACLE_MAX_NODES {
        return Err(SplabError::OracleTooLarge(m, ORACLE_MAX_NODES));
    }
    let diag = KernelDiagonal::for_spacing(grid.h);
    let nodes = grid.interior_nodes();
    let u2: Vec<f64> = u.values.iter().map(|a| a * a).collect();
    let mut vals = vec![0.0; m];
    for a in 0..m {
        let (ia, ja) = nodes[a];
        let mut acc = u2[a] * diag.d_log;
        for b in 0..m {
            if b == a {
                continue;
            }
            let (ib, jb) = nodes[b];
            let dx = ia as f64 - ib as f64;
            let dy = ja as f64 - jb as f64;
            acc += u2[b] * (grid.h * (dx * dx + dy * dy).sqrt()).ln();
        }
        vals[a] = acc * grid.weight();
    }
    grid.field_from(vals)
}

/// In-place 2-D complex FFT on a `size x size` row-major buffer.
fn fft2(
    planner: &mut FftPlanner<f64>,
    data: &mut [Complex<f64>],
    size: usize,
    dir: rustfft::FftDirection,
) {
    let fft = planner.plan_fft(size, dir);
    // rows
    for row in data.chunks_exact_mut(size) {
        fft.process(row);
    }
    // columns via transpose, FFT, transpose back
    transpose(data, size);
    for row in data.chunks_exact_mut(size) {
        fft.process(row);
    }
    transpose(data, size);
}

fn transpose(data: &mut [Complex<f64>], size: usize) {
    for j in 0..size {
        for i in (j + 1)..size {
            data.swap(j * size + i, i * size + j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, DomainShape};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn random_field(grid: &Arc<Grid>, seed: u64) -> Field {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        grid.field_from((0..grid.interior_len()).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .unwrap()
    }

    #[test]
    fn unit_cell_log_average_matches_closed_form() {
        // int_{[0,1]^2} ln(x^2+y^2) dx dy = ln 2 - 3 + pi/2
        let exact = 0.5 * (2.0f64.ln() - 3.0 + std::f64::consts::FRAC_PI_2) - 2.0f64.ln();
        assert_relative_eq!(unit_log_avg(), exact, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_splitting_is_exact() {
        for h in [0.1, 0.02, 0.5] {
            let d = KernelDiagonal::for_spacing(h);
            assert_relative_eq!(d.d_log, d.d_log1p - d.d_log_recip, max_relative = 1e-15);
        }
    }

    #[test]
    fn kernel_matrix_symmetry_and_entries() {
        let g = build_grid(DomainShape::Disk, 1.0, 9).unwrap();
        let k = KernelMatrix::build(&g).unwrap();
        let m = g.interior_len();
        let nodes = g.interior_nodes();
        for a in 0..m {
            for b in 0..m {
                assert_eq!(k.at(a, b), k.at(b, a));
                if a != b {
                    let (xa, ya) = g.coords(nodes[a].0, nodes[a].1);
                    let (xb, yb) = g.coords(nodes[b].0, nodes[b].1);
                    let d = ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt();
                    assert_relative_eq!(k.at(a, b), d.ln(), max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn chi_identity_on_random_fields() {
        let g = build_grid(DomainShape::Disk, 1.0, 17).unwrap();
        for seed in 0..5 {
            let u = random_field(&g, seed);
            let v = random_field(&g, 100 + seed);
            let f = chi_forms(&u, &v).unwrap();
            let scale = f.chi1.abs() + f.chi2.abs();
            assert!((f.chi0 - (f.chi1 - f.chi2)).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn chi_forms_rejects_mismatched_grids() {
        let g1 = build_grid(DomainShape::Disk, 1.0, 17).unwrap();
        let g2 = build_grid(DomainShape::Disk, 1.0, 19).unwrap();
        let u = random_field(&g1, 0);
        let v = random_field(&g2, 1);
        assert!(matches!(chi_forms(&u, &v), Err(SplabError::GridMismatch(_))));
    }

    #[test]
    fn far_separated_bumps_see_log_distance() {
        // two unit-mass single-cell bumps at distance d >> h
        let g = build_grid(DomainShape::Square, 8.0, 65).unwrap();
        let mut u = g.zero_field();
        let mut v = g.zero_field();
        let a = g.node_index(10, 32);
        let b = g.node_index(54, 32);
        let m_cell = 1.0 / g.weight(); // unit mass in one cell
        u.values[a] = m_cell.sqrt();
        v.values[b] = m_cell.sqrt();
        let d = 44.0 * g.h;
        let f = chi_forms(&u, &v).unwrap();
        assert_relative_eq!(f.chi0, d.ln(), max_relative = 0.01);
    }

    #[test]
    fn brute_force_matches_chi_forms_exactly() {
        let g = build_grid(DomainShape::Disk, 1.0, 17).unwrap();
        let u = random_field(&g, 42);
        let f = chi_forms(&u, &u).unwrap();
        let bf = brute_force_chi0(&u).unwrap();
        assert_relative_eq!(bf, f.chi0, max_relative = 1e-12);
    }

    #[test]
    fn brute_force_quartic_homogeneity_and_reflection() {
        let g = build_grid(DomainShape::Disk, 1.0, 13).unwrap();
        let u = random_field(&g, 5);
        let base = brute_force_chi0(&u).unwrap();
        let scaled = brute_force_chi0(&u.scaled(3.0)).unwrap();
        assert_relative_eq!(scaled, 81.0 * base, max_relative = 1e-12);

        // reflect u through x -> -x
        let mut refl = g.zero_field();
        for (k, &(i, j)) in g.interior_nodes().iter().enumerate() {
            let ri = (g.n - 1) as u32 - i;
            let m = g.node_index(ri as usize, j as usize);
            refl.values[m] = u.values[k];
        }
        assert_relative_eq!(brute_force_chi0(&refl).unwrap(), base, max_relative = 1e-12);
    }

    #[test]
    fn brute_force_size_guard() {
        let g = build_grid(DomainShape::Square, 1.0, 97).unwrap();
        let u = g.zero_field();
        assert!(matches!(brute_force_chi0(&u), Err(SplabError::OracleTooLarge(_, _))));
    }

    #[test]
    fn fast_path_matches_dense_path() {
        let g = build_grid(DomainShape::Disk, 1.0, 33).unwrap();
        for seed in 0..3 {
            let u = random_field(&g, seed);
            let dense = log_convolve_dense(&u).unwrap();
            let fast = log_convolve(&u);
            let scale = dense.linf();
            let mut max_diff = 0.0f64;
            for (a, b) in fast.values.iter().zip(&dense.values) {
                max_diff = max_diff.max((a - b).abs());
            }
            assert!(max_diff < 1e-10 * scale, "diff {max_diff} vs scale {scale}");
        }
    }

    #[test]
    fn convolve_zero_and_point_mass() {
        let g = build_grid(DomainShape::Square, 2.0, 33).unwrap();
        let z = g.zero_field();
        assert_eq!(log_convolve(&z).linf(), 0.0);

        // single-cell mass m at the center looks like m log|x| away from it
        let mut u = g.zero_field();
        let c = g.node_index(16, 16);
        let mass = 0.7;
        u.values[c] = (mass / g.weight()).sqrt();
        let w = log_convolve(&u);
        for (k, &(i, j)) in g.interior_nodes().iter().enumerate() {
            let (x, y) = g.coords(i, j);
            let r = (x * x + y * y).sqrt();
            if r >= 2.0 * g.h {
                // absolute comparison: log r passes through zero at r = 1
                assert!((w.values[k] - mass * r.ln()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dilation_law_for_chi0() {
        // u_t(x) = t u(tx) on a grid scaled by 1/t:
        // chi0(u_t^2,u_t^2) = chi0(u^2,u^2) - mass^2 log t
        let g = build_grid(DomainShape::Disk, 1.0, 41).unwrap();
        let ep = crate::grid::principal_eigenpair(&g, 1.0).unwrap();
        let base = brute_force_chi0(&ep.psi).unwrap();
        let mass = ep.psi.mass();
        for t in [0.5f64, 2.0] {
            let gt = build_grid(DomainShape::Disk, 1.0 / t, 41).unwrap();
            let ut = gt
                .field_from(ep.psi.values.iter().map(|v| t * v).collect())
                .unwrap();
            let val = brute_force_chi0(&ut).unwrap();
            let expect = base - mass * mass * t.ln();
            assert_relative_eq!(val, expect, max_relative = 0.005);
        }
    }
}
