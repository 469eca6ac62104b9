//! Energy, self-dual split, charge and sup-norms of a clover field strength.
//!
//! Energy, split and charge use flat weights `a^4`: in four dimensions
//! `|F|_g^2 dV_g = lambda^{-4} |F|^2 * lambda^4 d^4x` and the Hodge star on
//! 2-forms is conformally invariant, so these are exact on the chart. Pointwise
//! norms are not invariant and carry `lambda^{-2}` per component.

use rayon::prelude::*;

use crate::gauge::{plane_index, FieldStrength, GaugeMatrix, PLANES};
use crate::instantons::conventions::{dual_plane, CHARGE_SIGN};

/// Energies `(1/2) int |F|^2`, `(1/2) int |F^+|^2`, `(1/2) int |F^-|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SplitEnergies {
    pub ym: f64,
    pub sd: f64,
    pub asd: f64,
}

/// Per-site reduction collected in site order and summed sequentially, so the
/// result does not depend on the worker count.
fn site_sum<G: GaugeMatrix>(f: &FieldStrength<G>, per_site: impl Fn(&[G; 6]) -> f64 + Sync + Send) -> f64 {
    let vals: Vec<f64> = f.components().par_iter().map(per_site).collect();
    vals.iter().sum()
}

/// `(*F)_p` for the plane at storage index `p`.
#[inline]
fn dual_component<G: GaugeMatrix>(c: &[G; 6], p: usize) -> G {
    let (mu, nu) = PLANES[p];
    let (r, s) = dual_plane(mu, nu);
    let (q, sign) = plane_index(r, s).expect("distinct directions");
    c[q] * sign
}

/// `YM = (1/2) sum_x a^4 sum_{mu<nu} ||F_{mu nu}(x)||^2_tr`.
pub fn ym_energy<G: GaugeMatrix>(f: &FieldStrength<G>) -> f64 {
    let w = 0.5 * f.geometry().flat_cell_volume();
    w * site_sum(f, |c| c.iter().map(|m| m.alg_norm_sq()).sum())
}

/// `F^± = (F ± *F)/2`.
pub fn sd_split<G: GaugeMatrix>(f: &FieldStrength<G>) -> (FieldStrength<G>, FieldStrength<G>) {
    let (plus, minus): (Vec<[G; 6]>, Vec<[G; 6]>) = f
        .components()
        .par_iter()
        .map(|c| {
            let p: [G; 6] = std::array::from_fn(|i| (c[i] + dual_component(c, i)) * 0.5);
            let m: [G; 6] = std::array::from_fn(|i| (c[i] - dual_component(c, i)) * 0.5);
            (p, m)
        })
        .unzip();
    let g = f.geometry_arc().clone();
    (
        FieldStrength::from_components(g.clone(), plus).expect("same lattice"),
        FieldStrength::from_components(g, minus).expect("same lattice"),
    )
}

pub fn split_energies<G: GaugeMatrix>(f: &FieldStrength<G>) -> SplitEnergies {
    let w = 0.5 * f.geometry().flat_cell_volume();
    let parts: Vec<(f64, f64, f64)> = f
        .components()
        .par_iter()
        .map(|c| {
            let mut t = (0.0, 0.0, 0.0);
            for i in 0..6 {
                let d = dual_component(c, i);
                t.0 += c[i].alg_norm_sq();
                t.1 += ((c[i] + d) * 0.5).alg_norm_sq();
                t.2 += ((c[i] - d) * 0.5).alg_norm_sq();
            }
            t
        })
        .collect();
    let (mut ym, mut sd, mut asd) = (0.0, 0.0, 0.0);
    for (a, b, c) in parts {
        ym += a;
        sd += b;
        asd += c;
    }
    SplitEnergies { ym: w * ym, sd: w * sd, asd: w * asd }
}

/// `kappa = s/(32 pi^2) sum_x a^4 eps^{mu nu rho sigma} tr(F_{mu nu} F_{rho sigma})`.
pub fn topological_charge<G: GaugeMatrix>(f: &FieldStrength<G>) -> f64 {
    let a4 = f.geometry().flat_cell_volume();
    let dens = site_sum(f, |c| {
        // every ordered quadruple: 4 sign-equal orderings per (plane, dual plane)
        (0..6).map(|i| 4.0 * c[i].re_trace_mul(&dual_component(c, i))).sum()
    });
    CHARGE_SIGN * a4 * dens / (32.0 * std::f64::consts::PI.powi(2))
}

/// Pointwise metric norms `|F|_g(x)` and `|F^+|_g(x)`.
pub fn pointwise_norms<G: GaugeMatrix>(f: &FieldStrength<G>) -> (Vec<f64>, Vec<f64>) {
    let g = f.geometry();
    f.components()
        .par_iter()
        .enumerate()
        .map(|(s, c)| {
            let l = g.conformal_factor(s);
            let inv4 = 1.0 / (l * l * l * l);
            let mut full = 0.0;
            let mut plus = 0.0;
            for i in 0..6 {
                full += c[i].alg_norm_sq();
                plus += ((c[i] + dual_component(c, i)) * 0.5).alg_norm_sq();
            }
            ((full * inv4).sqrt(), (plus * inv4).sqrt())
        })
        .unzip()
}

/// `(sup_x |F|_g, sup_x |F^+|_g)`.
pub fn sup_norms<G: GaugeMatrix>(f: &FieldStrength<G>) -> (f64, f64) {
    let (full, plus) = pointwise_norms(f);
    let mx = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    (mx(&full), mx(&plus))
}

/// `max_x |F|_g(x) (lambda(x) a)^2`: curvature relative to the local lattice
/// cutoff (the coordinate-frame `a^2 |F|`).
pub fn cutoff_curvature<G: GaugeMatrix>(f: &FieldStrength<G>) -> f64 {
    let a2 = f.geometry().spacing().powi(2);
    f.components()
        .par_iter()
        .map(|c| c.iter().map(|m| m.alg_norm_sq()).sum::<f64>().sqrt())
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
        * a2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{Su2, SuN};
    use crate::geometry::LatticeGeometry;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn torus() -> Arc<LatticeGeometry> {
        Arc::new(LatticeGeometry::flat_torus(4, 0.5).unwrap())
    }

    fn random_f<G: GaugeMatrix>(g: Arc<LatticeGeometry>, seed: u64) -> FieldStrength<G> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let comps = (0..g.n_sites()).map(|_| std::array::from_fn(|_| G::random_algebra(&mut rng))).collect();
        FieldStrength::from_components(g, comps).unwrap()
    }

    #[test]
    fn zero_field() {
        let f: FieldStrength = FieldStrength::zeros(torus());
        assert_eq!(ym_energy(&f), 0.0);
        assert_eq!(topological_charge(&f), 0.0);
        assert_eq!(sup_norms(&f), (0.0, 0.0));
    }

    #[test]
    fn single_component_energy() {
        // F_01 = c diag(i, -i) at one site
        let g = torus();
        let c = 0.7;
        let mut comps = vec![[SuN::<2>::zero(); 6]; g.n_sites()];
        let m = SuN::<2>::from_entries(&[
            num_complex::Complex64::new(0.0, c),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(0.0, -c),
        ])
        .unwrap();
        comps[3][0] = m;
        let f = FieldStrength::from_components(g.clone(), comps).unwrap();
        let want = 0.5 * g.spacing().powi(4) * 2.0 * c * c;
        assert!((ym_energy(&f) - want).abs() < 1e-15);
        let (p, _) = sd_split(&f);
        assert_eq!(p.at(3)[0], m * 0.5);
        assert_eq!(p.at(3)[5], m * 0.5);
        for i in 1..5 {
            assert_eq!(p.at(3)[i], SuN::<2>::zero());
        }
    }

    #[test]
    fn split_is_orthogonal_on_random_fields() {
        let f: FieldStrength = random_f(torus(), 3);
        let (p, m) = sd_split(&f);
        let mut cross = 0.0;
        for s in 0..f.geometry().n_sites() {
            for i in 0..6 {
                let r = p.at(s)[i] + m.at(s)[i] - f.at(s)[i];
                assert!(r.frobenius_sq().sqrt() < 1e-14);
                cross -= p.at(s)[i].re_trace_mul(&m.at(s)[i]);
            }
        }
        assert!(cross.abs() < 1e-12 * ym_energy(&f).max(1.0));
        let e = split_energies(&f);
        assert!((e.ym - e.sd - e.asd).abs() < 1e-12 * e.ym);
        assert!((e.ym - ym_energy(&f)).abs() < 1e-12 * e.ym);
        assert!((ym_energy(&p) - e.sd).abs() < 1e-12 * e.ym);
        // Chern-Weil on the lattice: 4 pi^2 kappa = asd - sd identically
        let k = topological_charge(&f);
        assert!((4.0 * std::f64::consts::PI.powi(2) * k - (e.asd - e.sd)).abs() < 1e-10 * e.ym);
        let f3: FieldStrength<SuN<3>> = random_f(torus(), 4);
        let e3 = split_energies(&f3);
        assert!((4.0 * std::f64::consts::PI.powi(2) * topological_charge(&f3) - (e3.asd - e3.sd)).abs() < 1e-10 * e3.ym);
    }

    #[test]
    fn sup_norm_uses_metric_factors() {
        let g = Arc::new(LatticeGeometry::round_s4_chart(5, 2.0, 1.0).unwrap());
        let mut comps = vec![[Su2::zero(); 6]; g.n_sites()];
        let o = g.index([2, 2, 2, 2]);
        comps[o][0] = Su2::pure([1.0, 0.0, 0.0]);
        let f = FieldStrength::from_components(g, comps).unwrap();
        let (s, sp) = sup_norms(&f);
        // ||e_1||_tr = sqrt(2), lambda(0) = 2
        assert!((s - 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((sp - 1.0 / 4.0).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn plus_part_is_self_dual(seed in 0u64..1000) {
            let g = Arc::new(LatticeGeometry::small_torus([2, 2, 2, 2], 1.0).unwrap());
            let f: FieldStrength = random_f(g, seed);
            let (p, m) = sd_split(&f);
            for s in 0..16 {
                for i in 0..6 {
                    prop_assert!((p.at(s)[i] - dual_component(p.at(s), i)).norm_sq() < 1e-28);
                    prop_assert!((m.at(s)[i] + dual_component(m.at(s), i)).norm_sq() < 1e-28);
                }
            }
        }
    }
}
