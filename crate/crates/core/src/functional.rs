//! The constrained energy `J_{R,s}`, its L2 gradient, the Lagrange
//! multiplier, and the Pohozaev functionals (interior form and bounded-domain
//! form with boundary flux).

use crate::error::{Result, SplabError};
use crate::grid::{laplacian_apply, DomainShape, Field};
use crate::logkernel::LogConvolver;
use serde::{Deserialize, Serialize};

/// Problem parameters: `p > 4`, coupling `alpha < 0` in the paper's regime,
/// prescribed mass `rho`, homotopy weight `s in [1/2, 1]` on the p-term and
/// the auxiliary weight `beta` (fixed 1 for the main problem).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Params {
    pub p: f64,
    pub alpha: f64,
    #[serde(default = "one")]
    pub beta: f64,
    pub rho: f64,
    #[serde(default = "one")]
    pub s: f64,
}

fn one() -> f64 {
    1.0
}

impl Params {
    pub fn new(p: f64, alpha: f64, rho: f64) -> Params {
        Params { p, alpha, beta: 1.0, rho, s: 1.0 }
    }

    /// Effective coefficient on the p-term; `s` and `beta` both default to 1.
    #[inline]
    pub fn pcoef(&self) -> f64 {
        self.s * self.beta
    }

    /// Guards for the solver regime `alpha < 0, beta > 0, p > 4`.
    pub fn validate_solver_regime(&self) -> Result<()> {
        if !(self.p > 4.0) || !(self.alpha < 0.0) || !(self.beta > 0.0) {
            return Err(SplabError::Parameter(format!(
                "solver regime requires alpha < 0, beta > 0, p > 4; got p = {}, alpha = {}, beta = {}",
                self.p, self.alpha, self.beta
            )));
        }
        if !(self.rho > 0.0) {
            return Err(SplabError::Parameter(format!("rho must be positive, got {}", self.rho)));
        }
        if !(0.5..=1.0).contains(&self.s) {
            return Err(SplabError::Parameter(format!("s must lie in [1/2, 1], got {}", self.s)));
        }
        Ok(())
    }
}

/// The four energy pieces plus totals and the Pohozaev data.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub logterm: f64,
    pub pterm: f64,
    pub total: f64,
    pub pohozaev_interior: f64,
    pub boundary_flux: f64,
    pub lagrange_lambda: f64,
}

/// Full energy breakdown of `u`, including Pohozaev interior value and
/// boundary flux. The multiplier entry uses the actual mass of `u` as the
/// constraint value; see [`lagrange_multiplier`] for the constrained form.
pub fn energy(u: &Field, prm: &Params, conv: &mut LogConvolver) -> EnergyBreakdown {
    let kin2 = u.grad_norm2();
    let chi0 = conv.chi0(u);
    let pp = u.lp_norm_p(prm.p);
    let mass = u.mass();
    let kinetic = 0.5 * kin2;
    let logterm = 0.25 * prm.alpha * chi0;
    let pterm = prm.pcoef() / prm.p * pp;
    let flux = boundary_flux(u);
    EnergyBreakdown {
        kinetic,
        logterm,
        pterm,
        total: kinetic + logterm - pterm,
        pohozaev_interior: kin2
            - prm.pcoef() * (prm.p - 2.0) / prm.p * pp
            - 0.25 * prm.alpha * mass * mass,
        boundary_flux: flux,
        lagrange_lambda: if mass > 0.0 {
            (prm.pcoef() * pp - kin2 - prm.alpha * chi0) / mass
        } else {
            0.0
        },
    }
}

/// Unconstrained L2 gradient `-Lap u + alpha (log * u^2) u - s |u|^{p-2} u`
/// (multiplier excluded).
pub fn gradient(u: &Field, prm: &Params, conv: &mut LogConvolver) -> Field {
    let mut g = laplacian_apply(u);
    let w = conv.convolve(u);
    let coef = prm.pcoef();
    for ((gv, &uv), &wv) in g.values.iter_mut().zip(&u.values).zip(&w.values) {
        *gv += prm.alpha * wv * uv - coef * uv.abs().powf(prm.p - 2.0) * uv;
    }
    g
}

/// The Eq.-(31)-style quotient
/// `lambda = (s ||u||_p^p - ||grad u||^2 - alpha chi0(u^2,u^2)) / rho`.
pub fn lagrange_multiplier(u: &Field, prm: &Params, conv: &mut LogConvolver) -> Result<f64> {
    let mass = u.mass();
    if (mass - prm.rho).abs() > 1e-8 * prm.rho {
        return Err(SplabError::Constraint(format!(
            "multiplier requires mass(u) = rho; got {mass} vs {}",
            prm.rho
        )));
    }
    let chi0 = conv.chi0(u);
    Ok((prm.pcoef() * u.lp_norm_p(prm.p) - u.grad_norm2() - prm.alpha * chi0) / prm.rho)
}

/// Interior Pohozaev functional
/// `P(u) = ||grad u||^2 - s (p-2)/p ||u||_p^p - alpha rho^2 / 4`
/// with `rho = mass(u)`.
pub fn pohozaev_interior(u: &Field, prm: &Params) -> f64 {
    let mass = u.mass();
    u.grad_norm2()
        - prm.pcoef() * (prm.p - 2.0) / prm.p * u.lp_norm_p(prm.p)
        - 0.25 * prm.alpha * mass * mass
}

/// Bounded-domain Pohozaev residual: interior value minus the boundary term
/// `1/2 int_{boundary} |du/dn|^2 (x . n) dsigma`.
pub fn pohozaev_boundary(u: &Field, prm: &Params) -> (f64, f64) {
    let flux = boundary_flux(u);
    (pohozaev_interior(u, prm) - flux, flux)
}

/// `1/2 int |du/dn|^2 (x . n) dsigma` over the true boundary of `Omega_R`.
///
/// With `u = 0` on the boundary the full gradient there is normal, so the
/// integrand needs only the normal derivative. It is extrapolated from a
/// cubic through bilinear samples at depths `3h..6h` along the inward
/// normal; the boundary value itself is deliberately not used as a fit
/// point, since near a staircase mask the discrete zero set does not
/// coincide with the true boundary, and depths below `3h` still feel that
/// staircase through the interpolation stencil.
pub fn boundary_flux(u: &Field) -> f64 {
    let g = &u.grid;
    let delta = g.h;
    // derivative at depth 0 of the cubic through (kd, u_k), k = 3..6
    let dn = |bx: f64, by: f64, nx: f64, ny: f64| -> f64 {
        let u3 = u.interp(bx - 3.0 * delta * nx, by - 3.0 * delta * ny);
        let u4 = u.interp(bx - 4.0 * delta * nx, by - 4.0 * delta * ny);
        let u5 = u.interp(bx - 5.0 * delta * nx, by - 5.0 * delta * ny);
        let u6 = u.interp(bx - 6.0 * delta * nx, by - 6.0 * delta * ny);
        (-37.0 / 3.0 * u3 + 31.5 * u4 - 27.0 * u5 + 47.0 / 6.0 * u6) / delta
    };
    match g.shape {
        DomainShape::Disk => {
            let radius = 0.5 * g.r_scale;
            let samples = 8 * g.n;
            let dtheta = 2.0 * std::f64::consts::PI / samples as f64;
            let mut acc = 0.0;
            for k in 0..samples {
                let th = (k as f64 + 0.5) * dtheta;
                let (nx, ny) = (th.cos(), th.sin());
                let d = dn(radius * nx, radius * ny, nx, ny);
                acc += d * d;
            }
            // x . n = radius on the circle, dsigma = radius dtheta
            0.5 * radius * radius * acc * dtheta
        }
        DomainShape::Square => {
            let half = g.half_extent();
            let samples = 8 * g.n;
            let ds = 2.0 * half / samples as f64;
            let mut acc = 0.0;
            for k in 0..samples {
                let t = -half + (k as f64 + 0.5) * ds;
                for (bx, by, nx, ny) in [
                    (half, t, 1.0, 0.0),
                    (-half, t, -1.0, 0.0),
                    (t, half, 0.0, 1.0),
                    (t, -half, 0.0, -1.0),
                ] {
                    let d = dn(bx, by, nx, ny);
                    acc += d * d;
                }
            }
            // x . n = half on every face
            0.5 * half * acc * ds
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, principal_eigenpair, Grid};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn random_field(grid: &Arc<Grid>, seed: u64) -> Field {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        grid.field_from((0..grid.interior_len()).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .unwrap()
    }

    #[test]
    fn zero_field_has_zero_breakdown() {
        let g = build_grid(DomainShape::Disk, 1.0, 17).unwrap();
        let prm = Params::new(6.0, -0.01, 1.0);
        let mut conv = LogConvolver::new(&g);
        let e = energy(&g.zero_field(), &prm, &mut conv);
        assert_eq!(e.total, 0.0);
        assert_eq!(e.kinetic, 0.0);
        assert_eq!(e.logterm, 0.0);
        assert_eq!(e.pterm, 0.0);
        assert_eq!(e.pohozaev_interior, 0.0);
        let z = gradient(&g.zero_field(), &prm, &mut conv);
        assert_eq!(z.linf(), 0.0);
    }

    #[test]
    fn alpha_zero_reduces_to_local_nls_energy() {
        let g = build_grid(DomainShape::Disk, 1.0, 17).unwrap();
        let prm = Params::new(6.0, 0.0, 1.0);
        let mut conv = LogConvolver::new(&g);
        let u = random_field(&g, 1);
        let e = energy(&u, &prm, &mut conv);
        assert_eq!(e.logterm, 0.0);
        assert_relative_eq!(
            e.total,
            0.5 * u.grad_norm2() - u.lp_norm_p(6.0) / 6.0,
            max_relative = 1e-12
        );
        // gradient drops the nonlocal term as well
        let gr = gradient(&u, &prm, &mut conv);
        let mut expect = laplacian_apply(&u);
        for (e, &uv) in expect.values.iter_mut().zip(&u.values) {
            *e -= uv.abs().powf(4.0) * uv;
        }
        expect.axpy(-1.0, &gr);
        assert!(expect.linf() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences_at_second_order() {
        let g = build_grid(DomainShape::Disk, 1.0, 17).unwrap();
        let prm = Params::new(6.0, -1e-2, 1.0);
        let mut conv = LogConvolver::new(&g);
        let u = random_field(&g, 11);
        let v = random_field(&g, 12);
        let gr = gradient(&u, &prm, &mut conv);
        let directional = gr.dot(&v);

        let mut errs = Vec::new();
        for eps in [3e-1, 3e-2, 1e-4] {
            let mut up = u.clone();
            up.axpy(eps, &v);
            let mut um = u.clone();
            um.axpy(-eps, &v);
            let fd = (energy(&up, &prm, &mut conv).total - energy(&um, &prm, &mut conv).total)
                / (2.0 * eps);
            errs.push((fd - directional).abs() / directional.abs());
        }
        assert!(errs[2] < 1e-6, "relative error {}", errs[2]);
        // O(eps^2): a 10x step drops the error ~100x until round-off
        assert!(errs[0] / errs[1] > 30.0, "not second order: {errs:?}");
    }

    #[test]
    fn multiplier_requires_mass_constraint() {
        let g = build_grid(DomainShape::Disk, 1.0, 17).unwrap();
        let prm = Params::new(6.0, -1e-2, 1.0);
        let mut conv = LogConvolver::new(&g);
        let u = random_field(&g, 3);
        assert!(matches!(
            lagrange_multiplier(&u, &prm, &mut conv),
            Err(SplabError::Constraint(_))
        ));
        let mut v = u.clone();
        v.renormalize_mass(prm.rho);
        let lam = lagrange_multiplier(&v, &prm, &mut conv).unwrap();
        assert!(lam.is_finite());
    }

    #[test]
    fn pohozaev_interior_of_zero_field() {
        let g = build_grid(DomainShape::Disk, 1.0, 17).unwrap();
        let prm = Params::new(6.0, -0.5, 1.0);
        assert_eq!(pohozaev_interior(&g.zero_field(), &prm), 0.0);
    }

    #[test]
    fn boundary_flux_is_nonnegative_on_star_shaped_domains() {
        for shape in [DomainShape::Disk, DomainShape::Square] {
            let g = build_grid(shape, 1.0, 33).unwrap();
            for seed in 0..5 {
                let u = random_field(&g, seed);
                assert!(boundary_flux(&u) >= 0.0);
            }
        }
    }

    #[test]
    fn disk_eigenfunction_flux_matches_rellich_identity() {
        // Rellich, 2d: for -Lap psi = lambda psi with psi = 0 on the boundary,
        // 1/2 int |dpsi/dn|^2 (x . n) dsigma = lambda int psi^2
        let g = build_grid(DomainShape::Disk, 1.0, 129).unwrap();
        let ep = principal_eigenpair(&g, 1.0).unwrap();
        let flux = boundary_flux(&ep.psi);
        assert!(flux > 0.0);
        assert_relative_eq!(flux, ep.lambda1, max_relative = 0.08);
    }

    #[test]
    fn chi1_coercivity_bound_on_the_scaled_domain() {
        // kernel log(1 + |x-y|) <= log(1 + 2R) on B_R, so chi1 <= log(1+2R) rho^2
        let r_scale = 3.0;
        let g = build_grid(DomainShape::Disk, r_scale, 25).unwrap();
        for seed in 0..5 {
            let u = random_field(&g, seed);
            let f = crate::logkernel::chi_forms(&u, &u).unwrap();
            let mass = u.mass();
            assert!(f.chi1 <= (1.0f64 + r_scale).ln() * mass * mass * (1.0 + 1e-12));
        }
    }
}
