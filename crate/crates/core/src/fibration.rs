//! The mass-preserving dilation `u_t(x) = t u(tx)`, the fiber map
//! `h(t) = J(u_t)` evaluated analytically from scaling invariants, and its
//! unique critical time where the interior Pohozaev functional vanishes.

use crate::error::{Result, SplabError};
use crate::functional::Params;
use crate::grid::{build_grid, Field};
use crate::logkernel::LogConvolver;
use serde::Serialize;

/// The four quantities of `u` from which every fiber value follows:
/// `h(t) = t^2 K/2 + (alpha/4)(X0 - rho^2 log t) - (c/p) t^{p-2} P_p`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FiberInvariants {
    /// `||grad u||^2`
    pub kinetic: f64,
    /// `chi_0(u^2, u^2)`
    pub chi0: f64,
    /// `||u||_p^p`
    pub lp: f64,
    pub mass: f64,
}

impl FiberInvariants {
    pub fn of(u: &Field, p: f64, conv: &mut LogConvolver) -> FiberInvariants {
        FiberInvariants {
            kinetic: u.grad_norm2(),
            chi0: conv.chi0(u),
            lp: u.lp_norm_p(p),
            mass: u.mass(),
        }
    }
}

/// `h(t)` from the invariant table.
pub fn fiber_h(inv: &FiberInvariants, prm: &Params, t: f64) -> f64 {
    let rho2 = inv.mass * inv.mass;
    0.5 * t * t * inv.kinetic + 0.25 * prm.alpha * (inv.chi0 - rho2 * t.ln())
        - prm.pcoef() / prm.p * t.powf(prm.p - 2.0) * inv.lp
}

/// `h'(t) = t K - alpha rho^2/(4t) - c (p-2)/p t^{p-3} P_p`; note
/// `t h'(t)` is the interior Pohozaev value of the dilated field.
pub fn fiber_dh(inv: &FiberInvariants, prm: &Params, t: f64) -> f64 {
    let rho2 = inv.mass * inv.mass;
    t * inv.kinetic - 0.25 * prm.alpha * rho2 / t
        - prm.pcoef() * (prm.p - 2.0) / prm.p * t.powf(prm.p - 3.0) * inv.lp
}

/// Log-spaced scan of the fiber with the certified unique critical time.
#[derive(Debug, Clone, Serialize)]
pub struct FiberScan {
    pub t: Vec<f64>,
    pub h: Vec<f64>,
    pub dh: Vec<f64>,
    /// root of `h'`, bisected to 1e-12 relative
    pub t_u: f64,
    /// exactly one sign change `+ -> -` observed across the scan
    pub sign_certified: bool,
}

/// Scan `h` over `[t_lo, t_hi]` and locate the Pohozaev time. Requires the
/// mass constraint `mass(u) = rho` and the `alpha < 0, p > 4` regime (which
/// guarantees `h'(0+) > 0` and `h'(inf) < 0`).
pub fn fiber_scan(
    u: &Field,
    prm: &Params,
    t_lo: f64,
    t_hi: f64,
    points: usize,
) -> Result<FiberScan> {
    prm.validate_solver_regime()?;
    let mass = u.mass();
    if (mass - prm.rho).abs() > 1e-6 * prm.rho {
        return Err(SplabError::Constraint(format!(
            "fiber scan requires mass(u) = rho; got {mass} vs {}",
            prm.rho
        )));
    }
    let mut conv = LogConvolver::new(&u.grid);
    let inv = FiberInvariants::of(u, prm.p, &mut conv);
    scan_invariants(&inv, prm, t_lo, t_hi, points)
}

/// Same scan directly from a precomputed invariant table.
pub fn scan_invariants(
    inv: &FiberInvariants,
    prm: &Params,
    t_lo: f64,
    t_hi: f64,
    points: usize,
) -> Result<FiberScan> {
    if !(t_lo > 0.0 && t_hi > t_lo && points >= 2) {
        return Err(SplabError::Parameter(format!(
            "bad scan range [{t_lo}, {t_hi}] with {points} points"
        )));
    }
    let lr = (t_hi / t_lo).ln();
    let t: Vec<f64> =
        (0..points).map(|i| t_lo * (lr * i as f64 / (points - 1) as f64).exp()).collect();
    let h: Vec<f64> = t.iter().map(|&x| fiber_h(inv, prm, x)).collect();
    let dh: Vec<f64> = t.iter().map(|&x| fiber_dh(inv, prm, x)).collect();

    let mut crossings = Vec::new();
    for i in 0..points - 1 {
        if dh[i] > 0.0 && dh[i + 1] <= 0.0 {
            crossings.push(i);
        }
    }
    let sign_certified = crossings.len() == 1
        && (0..points - 1).all(|i| !(dh[i] < 0.0 && dh[i + 1] > 0.0));
    let &i0 = crossings.first().ok_or_else(|| {
        SplabError::Bracket(format!("h' has no + -> - sign change in [{t_lo}, {t_hi}]"))
    })?;
    let (mut lo, mut hi) = (t[i0], t[i0 + 1]);
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if fiber_dh(inv, prm, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(FiberScan { t, h, dh, t_u: 0.5 * (lo + hi), sign_certified })
}

/// Resample the dilation `u_t(x) = t u(tx)` onto the naturally scaled grid
/// `Omega_{R/t}` with the same node count.
pub fn dilate(u: &Field, t: f64) -> Result<Field> {
    if !(t > 0.0) {
        return Err(SplabError::Parameter(format!("dilation time must be positive, got {t}")));
    }
    let g = &u.grid;
    if t == 1.0 {
        return Ok(u.clone());
    }
    let target = build_grid(g.shape, g.r_scale / t, g.n)?;
    let mut out = target.zero_field();
    for (k, &(i, j)) in target.interior_nodes().iter().enumerate() {
        let (x, y) = target.coords(i, j);
        out.values[k] = t * u.interp(t * x, t * y);
    }
    Ok(out)
}

/// Resample the dilation onto the *original* grid (zero-extended outside
/// `Omega_{R/t}`): the form used for mountain-pass endpoints. Errors when the
/// shrunken support is no longer resolved by the grid.
pub fn dilate_onto(u: &Field, t: f64) -> Result<Field> {
    if !(t > 0.0) {
        return Err(SplabError::Parameter(format!("dilation time must be positive, got {t}")));
    }
    let g = &u.grid;
    if g.r_scale / t < 6.0 * g.h {
        return Err(SplabError::Resolution(format!(
            "dilated support width {} below grid resolution {}",
            g.r_scale / t,
            g.h
        )));
    }
    let mut out = g.zero_field();
    for (k, &(i, j)) in g.interior_nodes().iter().enumerate() {
        let (x, y) = g.coords(i, j);
        out.values[k] = t * u.interp(t * x, t * y);
    }
    Ok(out)
}
