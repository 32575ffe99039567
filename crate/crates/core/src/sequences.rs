//! Explicit multibump sequences on the Pohozaev manifold: two-bump
//! families whose constrained energy diverges to `-inf` and n-bump families
//! diverging to `+inf`, witnessing that the unconstrained infimum and
//! supremum over the manifold are both degenerate.
//!
//! Bumps are never materialized on one big grid: every energy is assembled
//! from per-bump invariants (exact discrete scaling laws) plus pairwise
//! kernel cross terms between bump-local grids.

use crate::error::{Result, SplabError};
use crate::fibration::{fiber_dh, fiber_h, scan_invariants, FiberInvariants};
use crate::functional::Params;
use crate::grid::{EigenPair, Field};
use crate::logkernel::LogConvolver;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BumpKind {
    /// two bumps, n-dependent only through the separation
    V,
    /// n bumps with n-dependent amplitude and scale
    W,
}

/// A family of `count` identical scaled copies of the principal
/// eigenfunction, centered at multiples of `separation` along a line.
#[derive(Debug, Clone)]
pub struct BumpFamily {
    pub kind: BumpKind,
    pub n: usize,
    pub count: usize,
    /// amplitude factor applied to the eigenfunction
    pub amplitude: f64,
    /// spatial dilation factor of each bump
    pub scale: f64,
    /// center-to-center distance `n^2`
    pub separation: f64,
    /// the scaled bump on its own grid
    pub bump: Field,
    pub bump_mass: f64,
    pub bump_kinetic: f64,
    pub bump_lp: f64,
    /// self-interaction of one bump, from the exact discrete dilation law
    pub bump_chi0: f64,
    pub rho: f64,
    pub p: f64,
}

/// Build the invariant table for the family. The eigenfunction must carry
/// mass `rho`; bump supports are disjoint since their diameter is below the
/// separation for every n >= 2.
pub fn build_bumps(ep: &EigenPair, kind: BumpKind, n: usize, prm: &Params) -> Result<BumpFamily> {
    if n < 2 {
        return Err(SplabError::Parameter(format!("bump families need n >= 2, got {n}")));
    }
    if !(prm.p > 4.0) {
        return Err(SplabError::Parameter(format!("bump scalings need p > 4, got {}", prm.p)));
    }
    let psi = &ep.psi;
    if psi.grid.n < 17 {
        return Err(SplabError::Resolution(format!(
            "bump profile unresolved on a {0}x{0} grid",
            psi.grid.n
        )));
    }
    let rho = psi.mass();
    if (rho - prm.rho).abs() > 1e-8 * prm.rho {
        return Err(SplabError::Constraint(format!(
            "eigenfunction mass {rho} does not match rho = {}",
            prm.rho
        )));
    }
    let p = prm.p;
    let (count, base) = match kind {
        BumpKind::V => (2usize, 2.0f64),
        BumpKind::W => (n, n as f64),
    };
    let amplitude = base.powf(1.0 / (p - 4.0));
    let scale = base.powf((p - 2.0) / (2.0 * (p - 4.0)));

    // phi = amplitude * psi(scale x) as a field on the 1/scale grid
    let mut bump = crate::fibration::dilate(psi, scale)?;
    let factor = amplitude / scale;
    for v in &mut bump.values {
        *v *= factor;
    }

    // exact discrete scaling laws on the scaled grid (quadrature-free)
    let mut conv = LogConvolver::new(&psi.grid);
    let psi_chi0 = conv.chi0(psi);
    let a2 = amplitude * amplitude;
    let s2 = scale * scale;
    let bump_mass = a2 / s2 * rho;
    let bump_kinetic = a2 * psi.grad_norm2();
    let bump_lp = amplitude.powf(p) / s2 * psi.lp_norm_p(p);
    let bump_chi0 = (a2 / s2).powi(2) * (psi_chi0 - rho * rho * scale.ln());

    Ok(BumpFamily {
        kind,
        n,
        count,
        amplitude,
        scale,
        separation: (n * n) as f64,
        bump,
        bump_mass,
        bump_kinetic,
        bump_lp,
        bump_chi0,
        rho,
        p,
    })
}

/// Cross term `iint log|x - y + d e| phi^2(x) phi^2(y)` between two copies
/// of the bump separated by `d`, by a dense double sum over the bump grid.
pub fn cross_term(bump: &Field, d: f64) -> f64 {
    let g = &bump.grid;
    let nodes = g.interior_nodes();
    let pts: Vec<(f64, f64, f64)> = nodes
        .iter()
        .zip(&bump.values)
        .map(|(&(i, j), &v)| {
            let (x, y) = g.coords(i, j);
            (x, y, v * v)
        })
        .collect();
    let w = g.weight() * g.weight();
    let mut acc = 0.0;
    for &(xa, ya, qa) in &pts {
        let mut row = 0.0;
        for &(xb, yb, qb) in &pts {
            let dx = xa - xb + d;
            let dy = ya - yb;
            row += (dx * dx + dy * dy).ln() * qb;
        }
        acc += 0.5 * row * qa;
    }
    acc * w
}

/// Total `chi_0` of the family: `count` self terms plus all pairwise cross
/// terms, grouped by center distance.
pub fn chi0_multibump(fam: &BumpFamily) -> f64 {
    let mut total = fam.count as f64 * fam.bump_chi0;
    for k in 1..fam.count {
        let pairs = 2.0 * (fam.count - k) as f64;
        total += pairs * cross_term(&fam.bump, k as f64 * fam.separation);
    }
    total
}

/// Total fiber invariants of the family (bump supports are disjoint, so
/// kinetic, mass and p-norm are plain sums).
pub fn family_invariants(fam: &BumpFamily) -> FiberInvariants {
    FiberInvariants {
        kinetic: fam.count as f64 * fam.bump_kinetic,
        chi0: chi0_multibump(fam),
        lp: fam.count as f64 * fam.bump_lp,
        mass: fam.count as f64 * fam.bump_mass,
    }
}

/// A family member projected onto the Pohozaev manifold along its fiber.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OnPohozaev {
    /// the fiber time with `P(u_t) = 0`
    pub t: f64,
    /// energy at that time
    pub value: f64,
    /// `t h'(t)` residual, for membership certificates
    pub residual: f64,
    pub kinetic_at_t: f64,
}

fn project(inv: &FiberInvariants, prm: &Params) -> Result<OnPohozaev> {
    let scan = scan_invariants(inv, prm, 1e-6, 1e6, 2000)?;
    let t = scan.t_u;
    Ok(OnPohozaev {
        t,
        value: fiber_h(inv, prm, t),
        residual: t * fiber_dh(inv, prm, t),
        kinetic_at_t: t * t * inv.kinetic,
    })
}

/// Energy of the two-bump family at its Pohozaev time.
pub fn vn_energy_on_p(ep: &EigenPair, n: usize, prm: &Params) -> Result<OnPohozaev> {
    let fam = build_bumps(ep, BumpKind::V, n, prm)?;
    project(&family_invariants(&fam), prm)
}

/// Energy of the n-bump family at its Pohozaev time.
pub fn wn_energy_on_p(ep: &EigenPair, n: usize, prm: &Params) -> Result<OnPohozaev> {
    let fam = build_bumps(ep, BumpKind::W, n, prm)?;
    project(&family_invariants(&fam), prm)
}
