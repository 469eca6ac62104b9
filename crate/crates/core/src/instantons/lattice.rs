//! Continuum-to-lattice transfer, random perturbations and twists.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::continuum::ConnectionEvaluator;
use super::twist::TwistSpec;
use crate::error::{Error, Result};
use crate::gauge::{supports_twist, AlgebraField, GaugeField, GaugeMatrix, Su2};
use crate::geometry::LatticeGeometry;
use crate::observables::ym_energy;

/// Midpoint-rule links `U_mu(x) = exp(a A_mu(x + a/2 e_mu))`, boundary links
/// included.
pub fn discretize<E: ConnectionEvaluator + ?Sized>(eval: &E, geom: Arc<LatticeGeometry>) -> Result<GaugeField<Su2>> {
    let a = geom.spacing();
    let g = &*geom;
    let links: Vec<Result<Su2>> = (0..g.n_links())
        .into_par_iter()
        .map(|l| {
            let (s, mu) = (l / 4, l % 4);
            let mid = g.link_midpoint(s, mu);
            match eval.connection(mid) {
                Ok(conn) => Ok((conn[mu] * a).exp_alg()),
                Err(Error::Singular { location, reason }) => Err(Error::Singular {
                    location: format!("link midpoint of site {} {:?}, direction {mu} (x = {location})", s, g.coords(s)),
                    reason,
                }),
                Err(e) => Err(e),
            }
        })
        .collect();
    let links = links.into_iter().collect::<Result<Vec<_>>>()?;
    GaugeField::from_links(geom, links)
}

/// Outcome of [`random_perturbation`].
#[derive(Debug, Clone)]
pub struct Perturbation<G: GaugeMatrix = Su2> {
    pub field: GaugeField<G>,
    /// Multiplier applied to the unit-sup smoothed noise.
    pub scale: f64,
    /// Measured clover-energy increment `YM(U') - YM(U)`.
    pub increment: f64,
}

fn smoothed_noise<G: GaugeMatrix>(geom: &Arc<LatticeGeometry>, sweeps: usize, seed: u64) -> AlgebraField<G> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z: Vec<G> = (0..geom.n_links()).map(|_| G::random_algebra(&mut rng)).collect();
    let g = &**geom;
    for _ in 0..sweeps {
        z = (0..g.n_links())
            .into_par_iter()
            .map(|l| {
                let (s, mu) = (l / 4, l % 4);
                let mut acc = z[l];
                let mut n = 1.0;
                for nu in 0..4 {
                    for t in [g.neighbor_fwd(s, nu), g.neighbor_bwd(s, nu)].into_iter().flatten() {
                        acc += z[4 * t + mu];
                        n += 1.0;
                    }
                }
                acc * (1.0 / n)
            })
            .collect();
    }
    for (l, v) in z.iter_mut().enumerate() {
        if g.is_frozen(l / 4, l % 4) {
            *v = G::zero();
        }
    }
    let mut f = AlgebraField::from_values(geom.clone(), z).expect("sized from geometry");
    let m = f.max_norm();
    if m > 0.0 {
        f = f.scaled(1.0 / m);
    }
    f
}

/// `U' = exp(s Z) U` with `Z` smoothed Gaussian noise (zero on frozen links)
/// and `s` tuned by bisection so that the clover-energy increment is close
/// to `amplitude`. Deterministic in `seed`.
pub fn random_perturbation<G: GaugeMatrix>(
    u: &GaugeField<G>,
    amplitude: f64,
    smoothing_sweeps: usize,
    seed: u64,
) -> Result<Perturbation<G>> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::Config(format!("perturbation amplitude must be >= 0, got {amplitude}")));
    }
    if amplitude == 0.0 {
        return Ok(Perturbation { field: u.clone(), scale: 0.0, increment: 0.0 });
    }
    let z = smoothed_noise::<G>(u.geometry_arc(), smoothing_sweeps, seed);
    if z.max_norm() == 0.0 {
        return Err(Error::Numerical("no active links to perturb".into()));
    }
    let e0 = ym_energy(&u.clover_field_strength());
    let apply = |s: f64| {
        let mut v = u.clone();
        v.left_multiply_exp(&z.scaled(s));
        v
    };
    let increment = |s: f64| ym_energy(&apply(s).clover_field_strength()) - e0;

    let mut lo = 0.0;
    let mut hi = 1e-3;
    let mut f_hi = increment(hi);
    let mut expansions = 0;
    while f_hi < amplitude {
        lo = hi;
        hi *= 2.0;
        f_hi = increment(hi);
        expansions += 1;
        if expansions > 40 || hi > 1e3 {
            return Err(Error::Numerical(format!(
                "cannot reach energy increment {amplitude}: largest measured {f_hi}"
            )));
        }
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if increment(mid) < amplitude {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    let field = apply(s);
    let inc = ym_energy(&field.clover_field_strength()) - e0;
    Ok(Perturbation { field, scale: s, increment: inc })
}

/// Marks `u` as living on the twisted bundle described by `twist`.
pub fn apply_twist<G: GaugeMatrix>(u: &GaugeField<G>, twist: &TwistSpec) -> Result<GaugeField<G>> {
    if !supports_twist(u.geometry()) {
        return Err(Error::Unsupported("'t Hooft twists are only defined on the flat torus".into()));
    }
    if twist.rank() != G::RANK {
        return Err(Error::Config(format!(
            "twist is for SU({}) but the field is SU({})",
            twist.rank(),
            G::RANK
        )));
    }
    let mut v = u.clone();
    v.set_twist(if twist.is_trivial() { None } else { Some(twist.clone()) });
    Ok(v)
}
