use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::matrix::{GaugeMatrix, Su2};
use crate::error::{Error, Result};
use crate::geometry::{LatticeGeometry, ManifoldKind};
use crate::instantons::TwistSpec;

/// Planes `(mu, nu)` with `mu < nu`, in storage order.
pub const PLANES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index into [`PLANES`] of an ordered pair, with the orientation sign.
#[inline]
pub fn plane_index(mu: usize, nu: usize) -> Option<(usize, f64)> {
    let (lo, hi, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    PLANES.iter().position(|&p| p == (lo, hi)).map(|i| (i, sign))
}

/// SU(r) link variables `U_mu(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeField<G: GaugeMatrix = Su2> {
    geom: Arc<LatticeGeometry>,
    links: Vec<G>,
    twist: Option<TwistSpec>,
}

/// su(r)-valued per-link field (forces, perturbations).
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraField<G: GaugeMatrix = Su2> {
    geom: Arc<LatticeGeometry>,
    values: Vec<G>,
}

/// Clover field strength; six planes per site, chart-frame coordinate components.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldStrength<G: GaugeMatrix = Su2> {
    geom: Arc<LatticeGeometry>,
    comps: Vec<[G; 6]>,
}

/// Per-site SU(r) gauge transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransform<G: GaugeMatrix = Su2> {
    geom: Arc<LatticeGeometry>,
    values: Vec<G>,
}

impl<G: GaugeMatrix> GaugeField<G> {
    pub fn identity(geom: Arc<LatticeGeometry>) -> Self {
        let n = geom.n_links();
        GaugeField { geom, links: vec![G::identity(); n], twist: None }
    }

    pub fn from_links(geom: Arc<LatticeGeometry>, links: Vec<G>) -> Result<Self> {
        if links.len() != geom.n_links() {
            return Err(Error::GeometryMismatch(format!(
                "expected {} links, got {}",
                geom.n_links(),
                links.len()
            )));
        }
        Ok(GaugeField { geom, links, twist: None })
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geom
    }

    pub fn geometry_arc(&self) -> &Arc<LatticeGeometry> {
        &self.geom
    }

    pub fn rank(&self) -> usize {
        G::RANK
    }

    #[inline]
    pub fn link(&self, site: usize, mu: usize) -> G {
        self.links[4 * site + mu]
    }

    #[inline]
    pub fn set_link(&mut self, site: usize, mu: usize, u: G) {
        self.links[4 * site + mu] = u;
    }

    pub fn links(&self) -> &[G] {
        &self.links
    }

    pub fn links_mut(&mut self) -> &mut [G] {
        &mut self.links
    }

    pub fn twist(&self) -> Option<&TwistSpec> {
        self.twist.as_ref()
    }

    pub(crate) fn set_twist(&mut self, twist: Option<TwistSpec>) {
        self.twist = twist;
    }

    /// Center-phase exponent carried by the plaquette `P_{mu nu}(x)`.
    #[inline]
    pub fn twist_exponent(&self, site: usize, mu: usize, nu: usize) -> i64 {
        match &self.twist {
            None => 0,
            Some(t) => {
                let n = t.get(mu, nu);
                if n == 0 {
                    return 0;
                }
                let c = self.geom.coords(site);
                let d = self.geom.dims();
                if c[mu] + 1 == d[mu] && c[nu] + 1 == d[nu] {
                    n
                } else {
                    0
                }
            }
        }
    }

    /// `U_mu(x) U_nu(x+mu) U_mu(x+nu)^dag U_nu(x)^dag`, times the twist phase.
    /// `None` where the plaquette leaves a non-periodic chart.
    pub fn plaquette(&self, site: usize, mu: usize, nu: usize) -> Option<G> {
        let xm = self.geom.neighbor_fwd(site, mu)?;
        let xn = self.geom.neighbor_fwd(site, nu)?;
        let p = self.link(site, mu) * self.link(xm, nu) * self.link(xn, mu).adjoint() * self.link(site, nu).adjoint();
        let k = self.twist_exponent(site, mu, nu);
        Some(if k == 0 { p } else { G::center(k) * p })
    }

    /// Sum of the (up to four) clover leaves at `x` and the number present.
    /// Every leaf is a closed loop based at `x`.
    pub fn clover_sum(&self, site: usize, mu: usize, nu: usize) -> (G, usize) {
        let g = &*self.geom;
        let phase = |k: i64, m: G| if k == 0 { m } else { G::center(k) * m };
        let mut q = G::zero();
        let mut count = 0;
        let u = |s: usize, d: usize| self.link(s, d);
        if let (Some(xm), Some(xn)) = (g.neighbor_fwd(site, mu), g.neighbor_fwd(site, nu)) {
            let l = u(site, mu) * u(xm, nu) * u(xn, mu).adjoint() * u(site, nu).adjoint();
            q += phase(self.twist_exponent(site, mu, nu), l);
            count += 1;
        }
        if let Some(xbm) = g.neighbor_bwd(site, mu) {
            if let Some(xbm_n) = g.neighbor_fwd(xbm, nu) {
                let l = u(site, nu) * u(xbm_n, mu).adjoint() * u(xbm, nu).adjoint() * u(xbm, mu);
                q += phase(self.twist_exponent(xbm, mu, nu), l);
                count += 1;
            }
            if let (Some(xbn), Some(xbm_bn)) = (g.neighbor_bwd(site, nu), g.neighbor_bwd(xbm, nu)) {
                let l = u(xbm, mu).adjoint() * u(xbm_bn, nu).adjoint() * u(xbm_bn, mu) * u(xbn, nu);
                q += phase(self.twist_exponent(xbm_bn, mu, nu), l);
                count += 1;
            }
        }
        if let Some(xbn) = g.neighbor_bwd(site, nu) {
            if let Some(xbn_m) = g.neighbor_fwd(xbn, mu) {
                let l = u(xbn, nu).adjoint() * u(xbn, mu) * u(xbn_m, nu) * u(site, mu).adjoint();
                q += phase(self.twist_exponent(xbn, mu, nu), l);
                count += 1;
            }
        }
        (q, count)
    }

    /// Clover field strength `alg_project(Q_{mu nu}) / (4 a^2)`. At chart
    /// boundary sites the available leaves are averaged instead.
    pub fn clover_field_strength(&self) -> FieldStrength<G> {
        let a2 = self.geom.spacing().powi(2);
        let comps: Vec<[G; 6]> = (0..self.geom.n_sites())
            .into_par_iter()
            .map(|s| {
                let mut out = [G::zero(); 6];
                for (p, &(mu, nu)) in PLANES.iter().enumerate() {
                    let (q, count) = self.clover_sum(s, mu, nu);
                    if count > 0 {
                        out[p] = q.alg_project() * (1.0 / (count as f64 * a2));
                    }
                }
                out
            })
            .collect();
        FieldStrength { geom: self.geom.clone(), comps }
    }

    /// Applies `U_mu(x) -> u(x) U_mu(x) u(x+mu)^dag`. For links leaving a
    /// chart the far end is left untransformed.
    pub fn gauge_transform(&self, u: &GaugeTransform<G>) -> Result<Self> {
        if !self.geom.same_lattice(&u.geom) {
            return Err(Error::GeometryMismatch("gauge transform built on a different lattice".into()));
        }
        let g = &*self.geom;
        let links: Vec<G> = (0..g.n_links())
            .into_par_iter()
            .map(|l| {
                let (s, mu) = (l / 4, l % 4);
                let left = u.values[s] * self.links[l];
                match g.neighbor_fwd(s, mu) {
                    Some(t) => left * u.values[t].adjoint(),
                    None => left,
                }
            })
            .collect();
        Ok(GaugeField { geom: self.geom.clone(), links, twist: self.twist.clone() })
    }

    /// Projects every link back onto SU(r).
    pub fn reunitarize(&mut self) -> Result<()> {
        let projected: Result<Vec<G>> = self.links.par_iter().map(|u| u.project_su()).collect();
        self.links = projected?;
        Ok(())
    }

    /// Largest `(unitarity, determinant)` defect over all links.
    pub fn max_su_defect(&self) -> (f64, f64) {
        self.links.iter().fold((0.0, 0.0), |(a, b), u| {
            let (x, y) = u.su_defect();
            (f64::max(a, x), f64::max(b, y))
        })
    }

    pub fn is_finite(&self) -> bool {
        self.links.iter().all(|u| u.is_finite())
    }

    /// `U_mu(x) <- exp(Z_mu(x)) U_mu(x)` on every link.
    pub fn left_multiply_exp(&mut self, z: &AlgebraField<G>) {
        self.links.par_iter_mut().zip(z.values.par_iter()).for_each(|(u, z)| {
            *u = z.exp_alg() * *u;
        });
    }
}

impl<G: GaugeMatrix> AlgebraField<G> {
    pub fn zeros(geom: Arc<LatticeGeometry>) -> Self {
        let n = geom.n_links();
        AlgebraField { geom, values: vec![G::zero(); n] }
    }

    pub fn from_values(geom: Arc<LatticeGeometry>, values: Vec<G>) -> Result<Self> {
        if values.len() != geom.n_links() {
            return Err(Error::GeometryMismatch("algebra field length does not match lattice".into()));
        }
        Ok(AlgebraField { geom, values })
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geom
    }

    #[inline]
    pub fn get(&self, site: usize, mu: usize) -> G {
        self.values[4 * site + mu]
    }

    pub fn values(&self) -> &[G] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [G] {
        &mut self.values
    }

    pub fn scaled(&self, s: f64) -> Self {
        AlgebraField { geom: self.geom.clone(), values: self.values.iter().map(|v| *v * s).collect() }
    }

    /// `self * a + other * b`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(x, y)| *x * a + *y * b).collect();
        AlgebraField { geom: self.geom.clone(), values }
    }

    /// Flat pairing `sum_links <X, Y> = -sum tr(X Y)`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(x, y)| -x.re_trace_mul(y)).sum()
    }

    /// Largest per-link norm `sqrt(-tr Z^2)`.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|z| z.alg_norm_sq().sqrt()).fold(0.0, f64::max)
    }
}

impl<G: GaugeMatrix> FieldStrength<G> {
    pub fn zeros(geom: Arc<LatticeGeometry>) -> Self {
        let n = geom.n_sites();
        FieldStrength { geom, comps: vec![[G::zero(); 6]; n] }
    }

    pub fn from_components(geom: Arc<LatticeGeometry>, comps: Vec<[G; 6]>) -> Result<Self> {
        if comps.len() != geom.n_sites() {
            return Err(Error::GeometryMismatch("field strength length does not match lattice".into()));
        }
        Ok(FieldStrength { geom, comps })
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geom
    }

    pub fn geometry_arc(&self) -> &Arc<LatticeGeometry> {
        &self.geom
    }

    /// The six `mu < nu` components at a site.
    #[inline]
    pub fn at(&self, site: usize) -> &[G; 6] {
        &self.comps[site]
    }

    pub fn components(&self) -> &[[G; 6]] {
        &self.comps
    }

    /// `F_{mu nu}(x)` for any ordered pair, using antisymmetry.
    pub fn get(&self, site: usize, mu: usize, nu: usize) -> G {
        match plane_index(mu, nu) {
            None => G::zero(),
            Some((p, s)) => self.comps[site][p] * s,
        }
    }

    /// Conjugates every component by the site's gauge matrix.
    pub fn conjugate_by(&self, u: &GaugeTransform<G>) -> Self {
        let comps = self
            .comps
            .iter()
            .zip(&u.values)
            .map(|(f, g)| {
                let mut out = *f;
                for c in out.iter_mut() {
                    *c = *g * *c * g.adjoint();
                }
                out
            })
            .collect();
        FieldStrength { geom: self.geom.clone(), comps }
    }
}

impl<G: GaugeMatrix> GaugeTransform<G> {
    pub fn identity(geom: Arc<LatticeGeometry>) -> Self {
        let n = geom.n_sites();
        GaugeTransform { geom, values: vec![G::identity(); n] }
    }

    pub fn constant(geom: Arc<LatticeGeometry>, g: G) -> Self {
        let n = geom.n_sites();
        GaugeTransform { geom, values: vec![g; n] }
    }

    pub fn from_values(geom: Arc<LatticeGeometry>, values: Vec<G>) -> Result<Self> {
        if values.len() != geom.n_sites() {
            return Err(Error::GeometryMismatch("gauge transform length does not match lattice".into()));
        }
        Ok(GaugeTransform { geom, values })
    }

    /// Independent per-site `exp(sum_a c_a T_a)` with `c_a ~ N(0, 1)`.
    pub fn random(geom: Arc<LatticeGeometry>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..geom.n_sites()).map(|_| G::random_algebra(&mut rng).exp_alg()).collect();
        GaugeTransform { geom, values }
    }

    #[inline]
    pub fn at(&self, site: usize) -> G {
        self.values[site]
    }

    pub fn values(&self) -> &[G] {
        &self.values
    }
}

/// Random gauge transformation; deterministic in `seed`.
pub fn random_gauge_transform<G: GaugeMatrix>(geom: &Arc<LatticeGeometry>, seed: u64) -> GaugeTransform<G> {
    GaugeTransform::random(geom.clone(), seed)
}

/// Whether a geometry supports twisted boundary conditions.
pub(crate) fn supports_twist(geom: &LatticeGeometry) -> bool {
    geom.kind() == ManifoldKind::FlatTorus
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::matrix::SuN;
    use rand::Rng;

    fn torus2() -> Arc<LatticeGeometry> {
        Arc::new(LatticeGeometry::small_torus([2, 2, 2, 2], 0.5).unwrap())
    }

    fn random_field<G: GaugeMatrix>(geom: &Arc<LatticeGeometry>, seed: u64, scale: f64) -> GaugeField<G> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let links = (0..geom.n_links()).map(|_| (G::random_algebra(&mut rng) * scale).exp_alg()).collect();
        GaugeField::from_links(geom.clone(), links).unwrap()
    }

    #[test]
    fn identity_plaquette_and_clover() {
        let g = torus2();
        let u: GaugeField = GaugeField::identity(g.clone());
        for s in 0..g.n_sites() {
            for &(mu, nu) in &PLANES {
                assert_eq!(u.plaquette(s, mu, nu), Some(Su2::IDENTITY));
            }
        }
        let f = u.clover_field_strength();
        assert!(f.components().iter().all(|c| c.iter().all(|m| *m == Su2::zero())));
    }

    #[test]
    fn single_excited_link_plaquettes_match_dense_products() {
        let g = torus2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z = Su2::random_algebra(&mut rng);
        let mut u: GaugeField = GaugeField::identity(g.clone());
        u.set_link(0, 1, z.exp_alg());
        let mut dense: GaugeField<SuN<2>> = GaugeField::identity(g.clone());
        dense.set_link(0, 1, SuN::<2>::from_algebra(&z.algebra_coords()).exp_alg());
        for s in 0..g.n_sites() {
            for mu in 0..4 {
                for nu in 0..4 {
                    if mu == nu {
                        continue;
                    }
                    let q = u.plaquette(s, mu, nu).unwrap();
                    let d = dense.plaquette(s, mu, nu).unwrap();
                    let e = q.entries();
                    for (a, b) in e.iter().zip(d.entries()) {
                        assert!((a - b).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn gauge_transform_conjugates_plaquettes_and_clover() {
        let g = Arc::new(LatticeGeometry::flat_torus(4, 0.5).unwrap());
        let u: GaugeField = random_field(&g, 2, 0.4);
        let gt: GaugeTransform = GaugeTransform::random(g.clone(), 3);
        let v = u.gauge_transform(&gt).unwrap();
        let f = u.clover_field_strength();
        let fv = v.clover_field_strength();
        let expected = f.conjugate_by(&gt);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..64 {
            let s = rng.random_range(0..g.n_sites());
            for (mu, nu) in PLANES {
                let p = u.plaquette(s, mu, nu).unwrap();
                let pv = v.plaquette(s, mu, nu).unwrap();
                let conj = gt.at(s) * p * gt.at(s).adjoint();
                assert!((pv - conj).norm_sq().sqrt() < 1e-12);
            }
            for p in 0..6 {
                assert!((fv.at(s)[p] - expected.at(s)[p]).norm_sq().sqrt() < 1e-10);
            }
        }
    }

    #[test]
    fn constant_and_identity_transforms() {
        let g = Arc::new(LatticeGeometry::flat_torus(4, 0.5).unwrap());
        let u: GaugeField = random_field(&g, 5, 0.3);
        let same = u.gauge_transform(&GaugeTransform::identity(g.clone())).unwrap();
        assert_eq!(same, u);
        let c = Su2::exp_pure([0.3, -0.2, 0.9]);
        let v = u.gauge_transform(&GaugeTransform::constant(g.clone(), c)).unwrap();
        for s in 0..g.n_sites() {
            for (mu, nu) in PLANES {
                let a = u.plaquette(s, mu, nu).unwrap().re_trace();
                let b = v.plaquette(s, mu, nu).unwrap().re_trace();
                assert!((a - b).abs() < 1e-12);
            }
        }
        let other = Arc::new(LatticeGeometry::flat_torus(4, 0.25).unwrap());
        assert!(u.gauge_transform(&GaugeTransform::identity(other)).is_err());
    }

    #[test]
    fn random_transform_is_deterministic_and_special_unitary() {
        let g = Arc::new(LatticeGeometry::flat_torus(4, 0.5).unwrap());
        let a: GaugeTransform = random_gauge_transform(&g, 17);
        let b: GaugeTransform = random_gauge_transform(&g, 17);
        assert_eq!(a, b);
        for u in a.values() {
            let (x, y) = u.su_defect();
            assert!(x < 1e-12 && y < 1e-12);
        }
        let c: GaugeTransform<SuN<3>> = random_gauge_transform(&g, 17);
        for u in c.values() {
            let (x, y) = u.su_defect();
            assert!(x < 1e-12 && y < 1e-12);
        }
    }

    #[test]
    fn clover_is_antisymmetric_and_in_algebra() {
        let g = Arc::new(LatticeGeometry::flat_torus(4, 0.5).unwrap());
        let u: GaugeField<SuN<3>> = random_field(&g, 8, 0.5);
        let f = u.clover_field_strength();
        for s in 0..g.n_sites() {
            for mu in 0..4 {
                for nu in 0..4 {
                    let a = f.get(s, mu, nu);
                    let b = f.get(s, nu, mu);
                    assert!((a + b).frobenius_sq() < 1e-28);
                    assert!((a.0 + a.0.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-12);
                    assert!(a.trace().norm() < 1e-12);
                }
            }
        }
    }
}
