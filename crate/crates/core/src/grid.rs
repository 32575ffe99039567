//! Discrete domains `Omega_R = R * Omega` for the disk and the square
//! (diameter of the unscaled `Omega` normalized to 1), the masked 5-point
//! Dirichlet Laplacian, quadrature, and the principal eigenpair.

use crate::error::{Result, SplabError};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Reference domains with `max |x-y| = 1`: the disk has radius 1/2 and the
/// square has side `1/sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainShape {
    Disk,
    Square,
}

impl DomainShape {
    /// Half-width of the bounding box of the unscaled domain.
    pub fn half_extent(self) -> f64 {
        match self {
            DomainShape::Disk => 0.5,
            DomainShape::Square => 0.5 / std::f64::consts::SQRT_2,
        }
    }

    /// Area of the unscaled domain.
    pub fn area(self) -> f64 {
        match self {
            DomainShape::Disk => std::f64::consts::PI / 4.0,
            DomainShape::Square => 0.5,
        }
    }
}

impl std::fmt::Display for DomainShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainShape::Disk => write!(f, "disk"),
            DomainShape::Square => write!(f, "square"),
        }
    }
}

/// Rectangular lattice with a domain mask over `Omega_R`.
///
/// Nodes live on an `n x n` lattice covering the bounding box of `Omega_R`;
/// the mask marks nodes strictly inside the domain. Dirichlet values outside
/// the mask are implicitly zero. The quadrature weight of every interior node
/// is `h^2`.
#[derive(Debug)]
pub struct Grid {
    pub shape: DomainShape,
    pub r_scale: f64,
    pub n: usize,
    pub h: f64,
    half: f64,
    /// Lattice (i, j) of each interior node, row-major.
    interior: Vec<(u32, u32)>,
    /// Flat lattice index -> interior index, or `usize::MAX`.
    index: Vec<usize>,
}

pub const NO_NODE: usize = usize::MAX;

/// Builds the lattice for `Omega_R` with `n` nodes per axis.
pub fn build_grid(shape: DomainShape, r_scale: f64, n: usize) -> Result<Arc<Grid>> {
    if !(r_scale > 0.0) {
        return Err(SplabError::Parameter(format!("R must be positive, got {r_scale}")));
    }
    if n < 4 {
        return Err(SplabError::DegenerateGrid(format!("n = {n} is too small")));
    }
    let half = shape.half_extent() * r_scale;
    let h = 2.0 * half / (n - 1) as f64;
    let mut interior = Vec::new();
    let mut index = vec![NO_NODE; n * n];
    let radius2 = (0.5 * r_scale) * (0.5 * r_scale);
    for j in 0..n {
        for i in 0..n {
            let x = -half + i as f64 * h;
            let y = -half + j as f64 * h;
            let inside = match shape {
                DomainShape::Disk => x * x + y * y < radius2 * (1.0 - 1e-14),
                DomainShape::Square => i > 0 && i < n - 1 && j > 0 && j < n - 1,
            };
            if inside {
                index[j * n + i] = interior.len();
                interior.push((i as u32, j as u32));
            }
        }
    }
    if interior.is_empty() {
        return Err(SplabError::DegenerateGrid(format!(
            "no interior node for {shape} with R = {r_scale}, n = {n}"
        )));
    }
    Ok(Arc::new(Grid { shape, r_scale, n, h, half, interior, index }))
}

impl Grid {
    pub fn interior_len(&self) -> usize {
        self.interior.len()
    }

    pub fn interior_nodes(&self) -> &[(u32, u32)] {
        &self.interior
    }

    /// Interior index of lattice node (i, j), or `NO_NODE`.
    #[inline]
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        self.index[j * self.n + i]
    }

    /// Physical coordinates of lattice node (i, j).
    #[inline]
    pub fn coords(&self, i: u32, j: u32) -> (f64, f64) {
        (-self.half + i as f64 * self.h, -self.half + j as f64 * self.h)
    }

    pub fn half_extent(&self) -> f64 {
        self.half
    }

    /// Quadrature weight of each interior node.
    #[inline]
    pub fn weight(&self) -> f64 {
        self.h * self.h
    }

    pub fn same_grid(&self, other: &Grid) -> bool {
        self.shape == other.shape
            && self.n == other.n
            && self.r_scale == other.r_scale
    }

    pub fn zero_field(self: &Arc<Self>) -> Field {
        Field { grid: Arc::clone(self), values: vec![0.0; self.interior_len()] }
    }

    pub fn field_from(self: &Arc<Self>, values: Vec<f64>) -> Result<Field> {
        if values.len() != self.interior_len() {
            return Err(SplabError::GridMismatch(format!(
                "field length {} != interior node count {}",
                values.len(),
                self.interior_len()
            )));
        }
        Ok(Field { grid: Arc::clone(self), values })
    }
}

/// Real values on the interior nodes of a grid; the discrete `u`.
#[derive(Debug, Clone)]
pub struct Field {
    pub grid: Arc<Grid>,
    pub values: Vec<f64>,
}

impl Field {
    /// Discrete mass `int u^2 = h^2 sum u_k^2`.
    pub fn mass(&self) -> f64 {
        self.grid.weight() * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    /// `int |u|^p` by node quadrature.
    pub fn lp_norm_p(&self, p: f64) -> f64 {
        self.grid.weight() * self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>()
    }

    /// Quadrature inner product `h^2 sum u_k v_k`.
    pub fn dot(&self, other: &Field) -> f64 {
        debug_assert!(self.grid.same_grid(&other.grid));
        self.grid.weight()
            * self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    /// `||grad u||^2` by summation by parts, `<-Lap u, u>`.
    pub fn grad_norm2(&self) -> f64 {
        laplacian_apply(self).dot(self)
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Rescales in place so that the mass equals `rho` exactly.
    pub fn renormalize_mass(&mut self, rho: f64) {
        let m = self.mass();
        assert!(m > 0.0, "cannot renormalize the zero field");
        let c = (rho / m).sqrt();
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: f64) -> Field {
        Field { grid: Arc::clone(&self.grid), values: self.values.iter().map(|v| c * v).collect() }
    }

    pub fn scale_values(&mut self, c: f64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn axpy(&mut self, a: f64, other: &Field) {
        for (v, w) in self.values.iter_mut().zip(&other.values) {
            *v += a * w;
        }
    }

    /// Bilinear interpolation at physical point (x, y); zero outside the mask.
    pub fn interp(&self, x: f64, y: f64) -> f64 {
        let g = &self.grid;
        let fx = (x + g.half) / g.h;
        let fy = (y + g.half) / g.h;
        if fx < 0.0 || fy < 0.0 || fx > (g.n - 1) as f64 || fy > (g.n - 1) as f64 {
            return 0.0;
        }
        let i0 = (fx.floor() as usize).min(g.n - 2);
        let j0 = (fy.floor() as usize).min(g.n - 2);
        let tx = fx - i0 as f64;
        let ty = fy - j0 as f64;
        let at = |i: usize, j: usize| -> f64 {
            match g.node_index(i, j) {
                NO_NODE => 0.0,
                k => self.values[k],
            }
        };
        (1.0 - tx) * (1.0 - ty) * at(i0, j0)
            + tx * (1.0 - ty) * at(i0 + 1, j0)
            + (1.0 - tx) * ty * at(i0, j0 + 1)
            + tx * ty * at(i0 + 1, j0 + 1)
    }
}

/// Masked 5-point stencil of `-Lap` with zero extension outside the mask.
pub fn laplacian_apply(u: &Field) -> Field {
    let g = &u.grid;
    let mut out = vec![0.0; u.values.len()];
    let inv_h2 = 1.0 / (g.h * g.h);
    for (k, &(i, j)) in g.interior_nodes().iter().enumerate() {
        let (i, j) = (i as usize, j as usize);
        let at = |i: usize, j: usize| -> f64 {
            match g.node_index(i, j) {
                NO_NODE => 0.0,
                m => u.values[m],
            }
        };
        let c = u.values[k];
        let mut acc = 4.0 * c;
        if i > 0 {
            acc -= at(i - 1, j);
        }
        if i + 1 < g.n {
            acc -= at(i + 1, j);
        }
        if j > 0 {
            acc -= at(i, j - 1);
        }
        if j + 1 < g.n {
            acc -= at(i, j + 1);
        }
        out[k] = acc * inv_h2;
    }
    Field { grid: Arc::clone(g), values: out }
}

/// Principal Dirichlet eigenpair of `-Lap` on the grid's domain.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda1: f64,
    pub psi: Field,
}

/// Inverse power iteration with conjugate-gradient inner solves.
///
/// The eigenvector is rescaled to mass `rho` and sign-fixed positive; the
/// discrete residual `||-Lap psi - lambda psi|| / ||psi||` is driven below
/// `1e-10 * (1 + lambda)` so the stopping rule stays meaningful on fine
/// grids where the eigenvalue itself is large.
pub fn principal_eigenpair(grid: &Arc<Grid>, rho: f64) -> Result<EigenPair> {
    if !(rho > 0.0) {
        return Err(SplabError::Parameter(format!("rho must be positive, got {rho}")));
    }
    let m = grid.interior_len();
    let mut psi = grid.field_from(vec![1.0; m])?;
    psi.renormalize_mass(1.0);
    let mut lambda = psi.grad_norm2();
    for _ in 0..200 {
        let next = cg_solve(&psi, 1e-14, 10 * m + 200)?;
        psi = next;
        psi.renormalize_mass(1.0);
        lambda = psi.grad_norm2();
        // residual in the discrete L2 norm
        let mut res = laplacian_apply(&psi);
        res.axpy(-lambda, &psi);
        let rnorm = res.dot(&res).sqrt();
        if rnorm < 1e-10 * (1.0 + lambda) {
            if psi.values.iter().sum::<f64>() < 0.0 {
                for v in &mut psi.values {
                    *v = -*v;
                }
            }
            psi.renormalize_mass(rho);
            return Ok(EigenPair { lambda1: lambda, psi });
        }
    }
    Err(SplabError::IterationLimit(format!(
        "inverse power iteration did not reach relative residual 1e-10 (lambda ~ {lambda})"
    )))
}

/// CG for `-Lap x = b` on the masked lattice.
fn cg_solve(b: &Field, tol: f64, max_iter: usize) -> Result<Field> {
    let grid = &b.grid;
    let mut x = grid.zero_field();
    let mut r = b.clone();
    let mut p = r.clone();
    let mut rs = r.dot(&r);
    let b_norm = rs.sqrt().max(f64::MIN_POSITIVE);
    for _ in 0..max_iter {
        if rs.sqrt() <= tol * b_norm {
            return Ok(x);
        }
        let ap = laplacian_apply(&p);
        let alpha = rs / p.dot(&ap);
        x.axpy(alpha, &p);
        r.axpy(-alpha, &ap);
        let rs_new = r.dot(&r);
        let beta = rs_new / rs;
        rs = rs_new;
        let mut p_new = r.clone();
        p_new.axpy(beta, &p);
        p = p_new;
    }
    // CG on an SPD stencil stalls only in exact arithmetic breakdowns; accept
    // the iterate if it is already close.
    if rs.sqrt() <= 1e-8 * b_norm {
        return Ok(x);
    }
    Err(SplabError::IterationLimit("CG did not converge".into()))
}
