//! Morrey norms and the Gaussian monotonicity functional.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};
use crate::geometry::{LatticeGeometry, ManifoldKind};

fn default_stride() -> usize {
    4
}
fn default_radii() -> usize {
    12
}
fn default_rmax() -> f64 {
    1.0
}

/// Where the Morrey supremum is sampled.
///
/// The supremum over a subsample of centers and radii is a lower bound for
/// the lattice supremum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorreySampling {
    /// Centers are the sites whose coordinates are all multiples of this.
    #[serde(default = "default_stride")]
    pub center_stride: usize,
    /// Number of geometrically spaced radii.
    #[serde(default = "default_radii")]
    pub n_radii: usize,
    /// Smallest radius; defaults to twice the smallest geodesic lattice step.
    #[serde(default)]
    pub r_min: Option<f64>,
    #[serde(default = "default_rmax")]
    pub r_max: f64,
}

impl Default for MorreySampling {
    fn default() -> Self {
        MorreySampling { center_stride: default_stride(), n_radii: 12, r_min: None, r_max: 1.0 }
    }
}

impl MorreySampling {
    pub fn validate(&self) -> Result<()> {
        if self.center_stride == 0 || self.n_radii == 0 {
            return Err(config_err("morrey center_stride and n_radii must be positive"));
        }
        if !(self.r_max > 0.0 && self.r_max <= 1.0) {
            return Err(config_err("morrey r_max must lie in (0, 1]"));
        }
        if let Some(r) = self.r_min {
            if !(r > 0.0) {
                return Err(config_err("morrey r_min must be positive"));
            }
        }
        Ok(())
    }

    pub fn radii(&self, geom: &LatticeGeometry) -> Vec<f64> {
        let lo = self.r_min.unwrap_or(2.0 * geom.min_geodesic_spacing());
        let hi = self.r_max;
        if lo >= hi || self.n_radii == 1 {
            return vec![hi];
        }
        let n = self.n_radii;
        (0..n).map(|i| if i + 1 == n { hi } else { lo * (hi / lo).powf(i as f64 / (n - 1) as f64) }).collect()
    }

    pub fn centers(&self, geom: &LatticeGeometry) -> Vec<usize> {
        (0..geom.n_sites()).filter(|&s| geom.coords(s).iter().all(|c| c % self.center_stride == 0)).collect()
    }
}

/// `sup_{x, R} (R^{lambda - 4} sum_{d(x,y) <= R} |f(y)|^q dV(y))^{1/q}` over the
/// sampled centers and radii.
pub fn morrey_norm(f: &[f64], q: f64, lambda: f64, geom: &LatticeGeometry, sampling: &MorreySampling) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(config_err(format!("Morrey exponent q must be finite and >= 1, got {q}")));
    }
    if !(0.0..=4.0).contains(&lambda) {
        return Err(config_err(format!("Morrey weight lambda must lie in [0, 4], got {lambda}")));
    }
    if f.len() != geom.n_sites() {
        return Err(config_err("scalar field does not match the lattice"));
    }
    sampling.validate()?;
    let radii = sampling.radii(geom);
    let centers = sampling.centers(geom);
    let vol = geom.site_volumes();
    let mass: Vec<f64> = f.iter().zip(vol).map(|(v, w)| v.abs().powf(q) * w).collect();
    let per_center: Vec<Vec<f64>> = match geom.kind() {
        ManifoldKind::RoundS4Chart => {
            let r_s = geom.sphere_radius();
            // d <= r  <=>  chord <= 2 sin(r / 2R) on the unit sphere
            let chords: Vec<f64> = radii.iter().map(|r| 2.0 * (r / (2.0 * r_s)).min(FRAC_PI_2).sin()).collect();
            let pts = geom.unit_sphere_points();
            centers
                .par_iter()
                .map(|&c| {
                    let mut bins = vec![0.0; chords.len() + 1];
                    for (q, m) in pts.iter().zip(&mass) {
                        bins[chords.partition_point(|&t| t < dist(&pts[c], q))] += m;
                    }
                    bins.truncate(chords.len());
                    bins
                })
                .collect()
        }
        ManifoldKind::FlatTorus => {
            let r_max = *radii.last().expect("at least one radius");
            centers
                .par_iter()
                .map(|&c| {
                    let mut bins = vec![0.0; radii.len()];
                    for (y, d) in geom.ball(c, r_max) {
                        bins[radii.partition_point(|&r| r < d)] += mass[y];
                    }
                    bins
                })
                .collect()
        }
    };
    let mut best: f64 = 0.0;
    for bins in per_center {
        // every ball contains its center, so no radius is empty
        let mut acc = 0.0;
        for (k, &r) in radii.iter().enumerate() {
            acc += bins[k];
            best = best.max((r.powf(lambda - 4.0) * acc).powf(1.0 / q));
        }
    }
    Ok(best)
}

fn dist(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// The standard smooth cutoff: `1` on `[0, 1/2]`, `0` on `[1, inf)`, and
/// `exp(1 - 1/(1 - (2s - 1)^2))` in between.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec;

impl CutoffSpec {
    pub fn phi(&self, s: f64) -> f64 {
        if s <= 0.5 {
            1.0
        } else if s >= 1.0 {
            0.0
        } else {
            let u = 2.0 * s - 1.0;
            (1.0 - 1.0 / (1.0 - u * u)).exp()
        }
    }
}

/// `Phi_{x1, rho1}(f, R, x) = (4 pi)^{-2} sum_y |f(y)|^2 exp(-d(x,y)^2 / 4R^2)
/// phi(d(x1, y) / rho1) dV(y)` (dimension four, so no power of `R`).
pub fn gaussian_phi(f: &[f64], r: f64, x: usize, x1: usize, geom: &LatticeGeometry, cutoff: &CutoffSpec) -> f64 {
    let rho1 = geom.rho1();
    let norm = 1.0 / (16.0 * std::f64::consts::PI.powi(2));
    let vol = geom.site_volumes();
    let mut acc = 0.0;
    for (y, d1) in geom.ball(x1, rho1) {
        let w = cutoff.phi(d1 / rho1);
        if w == 0.0 {
            continue;
        }
        let d = geom.geodesic_distance(x, y);
        acc += f[y] * f[y] * (-d * d / (4.0 * r * r)).exp() * w * vol[y];
    }
    norm * acc
}

fn default_phi_radii() -> Vec<f64> {
    vec![0.25, 0.5, 1.0]
}

/// Which `(center, R)` pairs are recorded (the cutoff is centered at the
/// same site).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiSampling {
    /// Site coordinates; empty means the middle site `dims / 2`.
    #[serde(default)]
    pub centers: Vec<[usize; 4]>,
    #[serde(default = "default_phi_radii")]
    pub radii: Vec<f64>,
}

impl Default for PhiSampling {
    fn default() -> Self {
        PhiSampling { centers: Vec::new(), radii: default_phi_radii() }
    }
}

impl PhiSampling {
    pub fn validate(&self, geom: &LatticeGeometry) -> Result<()> {
        let d = geom.dims();
        for c in &self.centers {
            if (0..4).any(|mu| c[mu] >= d[mu]) {
                return Err(config_err(format!("phi center {c:?} lies outside the lattice")));
            }
        }
        if self.radii.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) {
            return Err(config_err("phi radii must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn center_sites(&self, geom: &LatticeGeometry) -> Vec<[usize; 4]> {
        if self.centers.is_empty() {
            let d = geom.dims();
            vec![[d[0] / 2, d[1] / 2, d[2] / 2, d[3] / 2]]
        } else {
            self.centers.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_profile() {
        let c = CutoffSpec;
        assert_eq!(c.phi(0.0), 1.0);
        assert_eq!(c.phi(0.5), 1.0);
        assert_eq!(c.phi(1.0), 0.0);
        assert_eq!(c.phi(3.0), 0.0);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let v = c.phi(i as f64 / 1000.0);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn blocked_chart_matches_direct_balls() {
        let g = LatticeGeometry::round_s4_chart(9, 3.0, 1.0).unwrap();
        let f: Vec<f64> = (0..g.n_sites()).map(|s| ((s * 7919) % 101) as f64 / 50.0 - 1.0).collect();
        let samp = MorreySampling { center_stride: 2, n_radii: 7, r_min: Some(0.1), r_max: 1.0 };
        let got = morrey_norm(&f, 2.0, 4.0, &g, &samp).unwrap();
        let vol = g.site_volumes();
        let mut want: f64 = 0.0;
        for c in samp.centers(&g) {
            for r in samp.radii(&g) {
                let m: f64 = g.ball(c, r).iter().map(|&(y, _)| f[y] * f[y] * vol[y]).sum();
                want = want.max(m.sqrt());
            }
        }
        assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
    }

    #[test]
    fn constant_field_on_torus() {
        let g = LatticeGeometry::flat_torus(16, 0.125).unwrap();
        let f = vec![1.5; g.n_sites()];
        let m = morrey_norm(&f, 2.0, 4.0, &g, &MorreySampling { center_stride: 8, ..Default::default() }).unwrap();
        let want = 1.5 * (std::f64::consts::PI.powi(2) / 2.0).sqrt();
        assert!((m - want).abs() < 0.03 * want, "{m} vs {want}");
        let zero = vec![0.0; g.n_sites()];
        assert_eq!(morrey_norm(&zero, 2.0, 4.0, &g, &MorreySampling::default()).unwrap(), 0.0);
        assert!(morrey_norm(&f, 0.5, 4.0, &g, &MorreySampling::default()).is_err());
        assert!(morrey_norm(&f, 2.0, 5.0, &g, &MorreySampling::default()).is_err());
    }

    #[test]
    fn morrey_dominates_unit_ball_norm() {
        let g = LatticeGeometry::round_s4_chart(10, 3.0, 1.0).unwrap();
        let f: Vec<f64> = (0..g.n_sites()).map(|s| 1.0 + (s % 7) as f64 * 0.1).collect();
        let samp = MorreySampling::default();
        let m = morrey_norm(&f, 2.0, 4.0, &g, &samp).unwrap();
        for c in samp.centers(&g).into_iter().step_by(17) {
            let l2: f64 = g.ball(c, 1.0).iter().map(|&(y, _)| f[y] * f[y] * g.site_volume(y)).sum();
            assert!(m >= l2.sqrt() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn radii_grid() {
        let g = LatticeGeometry::flat_torus(8, 0.25).unwrap();
        let r = MorreySampling::default().radii(&g);
        assert_eq!(r.len(), 12);
        assert!((r[0] - 0.5).abs() < 1e-15);
        assert_eq!(*r.last().unwrap(), 1.0);
        let coarse = LatticeGeometry::flat_torus(4, 0.6).unwrap();
        assert_eq!(MorreySampling::default().radii(&coarse), vec![1.0]);
    }
}
