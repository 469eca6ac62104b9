//! Wilson action and its exact link gradient.

use log::warn;
use rayon::prelude::*;

use crate::gauge::{AlgebraField, GaugeField, GaugeMatrix};
use crate::geometry::{LatticeGeometry, ManifoldKind};

/// Per-link metric weights `w = lambda(mid)^{-2}` (chart, clamped), `1` (torus),
/// `0` on frozen links.
///
/// The flow is the gradient flow of the Wilson action for the link metric
/// `<X, Y> = sum_links (a^2 / w) <X, Y>_tr`, the lattice form of the `L^2(g)`
/// pairing of 1-forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Preconditioner {
    weights: Vec<f64>,
    clamp: f64,
    clamped_links: usize,
}

impl Preconditioner {
    pub fn new(geom: &LatticeGeometry, clamp: f64) -> Self {
        let mut clamped = 0;
        let weights = (0..geom.n_links())
            .map(|l| {
                let (s, mu) = (l / 4, l % 4);
                if geom.is_frozen(s, mu) {
                    return 0.0;
                }
                match geom.kind() {
                    ManifoldKind::FlatTorus => 1.0,
                    ManifoldKind::RoundS4Chart => {
                        let lam = geom.conformal_at(geom.link_midpoint(s, mu));
                        let w = 1.0 / (lam * lam);
                        if w > clamp {
                            clamped += 1;
                            clamp
                        } else {
                            w
                        }
                    }
                }
            })
            .collect();
        if clamped > 0 {
            warn!("preconditioner clamped at {clamp} on {clamped} links");
        }
        Preconditioner { weights, clamp, clamped_links: clamped }
    }

    #[inline]
    pub fn weight(&self, link: usize) -> f64 {
        self.weights[link]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    pub fn clamp(&self) -> f64 {
        self.clamp
    }

    pub fn clamped_links(&self) -> usize {
        self.clamped_links
    }

    pub fn matches(&self, geom: &LatticeGeometry) -> bool {
        self.weights.len() == geom.n_links()
    }
}

/// `S = sum_x sum_{mu<nu} Re tr(I - z P_{mu nu}(x))` over all plaquettes that
/// exist, so that `S -> (1/2) int |F|^2 d^4x`.
pub fn wilson_action<G: GaugeMatrix>(u: &GaugeField<G>) -> f64 {
    let g = u.geometry();
    let r = G::RANK as f64;
    let per_site: Vec<f64> = (0..g.n_sites())
        .into_par_iter()
        .map(|s| {
            let mut acc = 0.0;
            for mu in 0..4 {
                for nu in (mu + 1)..4 {
                    if let Some(p) = u.plaquette(s, mu, nu) {
                        acc += r - p.re_trace();
                    }
                }
            }
            acc
        })
        .collect();
    per_site.iter().sum()
}

/// Sum of staples `W` with `Re tr(z P) = Re tr(U_mu(x) W)` for every plaquette
/// through the link.
pub fn staple_sum<G: GaugeMatrix>(u: &GaugeField<G>, s: usize, mu: usize) -> G {
    let g = u.geometry();
    let phase = |k: i64, m: G| if k == 0 { m } else { G::center(k) * m };
    let mut w = G::zero();
    let Some(xm) = g.neighbor_fwd(s, mu) else {
        return w;
    };
    for nu in 0..4 {
        if nu == mu {
            continue;
        }
        if let Some(xn) = g.neighbor_fwd(s, nu) {
            let st = u.link(xm, nu) * u.link(xn, mu).adjoint() * u.link(s, nu).adjoint();
            w += phase(u.twist_exponent(s, mu, nu), st);
        }
        if let Some(xbn) = g.neighbor_bwd(s, nu) {
            let xm_bn = g.neighbor_fwd(xbn, mu).expect("cube closes");
            let st = u.link(xm_bn, nu).adjoint() * u.link(xbn, mu).adjoint() * u.link(xbn, nu);
            w += phase(u.twist_exponent(xbn, nu, mu), st);
        }
    }
    w
}

/// Flow force `Z = -(w/a^2) Pr(U W)` and `grad_sq = sum (w/a^2) ||Pr(U W)||^2`,
/// so that `dS/dt = -grad_sq` along `dU/dt = Z U`.
pub fn force_and_grad<G: GaugeMatrix>(u: &GaugeField<G>, pre: &Preconditioner) -> (AlgebraField<G>, f64) {
    let geom = u.geometry_arc().clone();
    let inv_a2 = 1.0 / geom.spacing().powi(2);
    let pairs: Vec<(G, f64)> = (0..geom.n_links())
        .into_par_iter()
        .map(|l| {
            let w = pre.weight(l);
            if w == 0.0 {
                return (G::zero(), 0.0);
            }
            let (s, mu) = (l / 4, l % 4);
            let pr = (u.link(s, mu) * staple_sum(u, s, mu)).alg_project();
            let c = w * inv_a2;
            (pr * (-c), c * pr.alg_norm_sq())
        })
        .collect();
    let grad: f64 = pairs.iter().map(|p| p.1).sum();
    let values = pairs.into_iter().map(|p| p.0).collect();
    (AlgebraField::from_values(geom, values).expect("sized from geometry"), grad)
}

pub fn force<G: GaugeMatrix>(u: &GaugeField<G>, pre: &Preconditioner) -> AlgebraField<G> {
    force_and_grad(u, pre).0
}

/// Metric-weighted squared gradient norm `||D*F||^2`.
pub fn grad_norm_sq<G: GaugeMatrix>(u: &GaugeField<G>, pre: &Preconditioner) -> f64 {
    force_and_grad(u, pre).1
}
