//! Property tests against the dense oracle and under gauge transformations.

mod support;

use std::sync::Arc;

use proptest::prelude::*;

use support::{dense, max_abs_diff, random_field, DenseLattice};
use ymflow::flow::{force_and_grad, wilson_action, Preconditioner};
use ymflow::gauge::{GaugeField, GaugeMatrix, GaugeTransform, Su2, SuN};
use ymflow::geometry::LatticeGeometry;
use ymflow::instantons::{apply_twist, TwistSpec};
use ymflow::observables::Measurer;

fn dims() -> impl Strategy<Value = [usize; 4]> {
    prop::array::uniform4(2usize..=3)
}

fn agrees_with_oracle<G: GaugeMatrix>(u: &GaugeField<G>) -> Result<(), TestCaseError> {
    let geom = u.geometry();
    let o = DenseLattice::new(u);
    let fs = u.clover_field_strength();
    let (z, grad) = force_and_grad(u, &Preconditioner::new(geom, 1.0));
    let a2 = geom.spacing().powi(2);
    let mut grad_oracle = 0.0;
    for s in 0..geom.n_sites() {
        let c = geom.coords(s);
        for mu in 0..4 {
            for nu in 0..4 {
                if mu != nu {
                    prop_assert!(max_abs_diff(&dense(&u.plaquette(s, mu, nu).unwrap()), &o.plaquette(c, mu, nu)) < 1e-12);
                    prop_assert!(max_abs_diff(&dense(&fs.get(s, mu, nu)), &o.field_strength(c, mu, nu)) * a2 < 1e-12);
                }
            }
            let zo = o.force(c, mu);
            prop_assert!(max_abs_diff(&dense(&z.get(s, mu)), &zo) * a2 < 1e-12);
            // ||X||^2 = -tr(X^2) for anti-Hermitian X, weighted by a^2
            grad_oracle += -(&zo * &zo).trace().re * a2;
        }
    }
    let s = o.action();
    prop_assert!((wilson_action(u) - s).abs() <= 1e-12 * s.max(1.0));
    prop_assert!((grad - grad_oracle).abs() <= 1e-11 * grad.max(1.0));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn su2_kernels_match_oracle(d in dims(), a in 0.2f64..1.5, scale in 0.1f64..3.0, seed in any::<u64>(), twist in 0i64..2) {
        let geom = Arc::new(LatticeGeometry::small_torus(d, a).unwrap());
        let mut u: GaugeField<Su2> = random_field(&geom, scale, seed);
        if twist != 0 {
            u = apply_twist(&u, &TwistSpec::single(2, 0, 3, twist).unwrap()).unwrap();
        }
        agrees_with_oracle(&u)?;
    }

    #[test]
    fn su3_kernels_match_oracle(d in dims(), a in 0.2f64..1.5, seed in any::<u64>(), twist in 0i64..3) {
        let geom = Arc::new(LatticeGeometry::small_torus(d, a).unwrap());
        let mut u: GaugeField<SuN<3>> = random_field(&geom, 1.0, seed);
        if twist != 0 {
            u = apply_twist(&u, &TwistSpec::single(3, 1, 2, twist).unwrap()).unwrap();
        }
        agrees_with_oracle(&u)?;
    }

    #[test]
    fn force_is_gauge_covariant(seed in any::<u64>(), chart in any::<bool>()) {
        let geom = Arc::new(if chart {
            LatticeGeometry::round_s4_chart(4, 2.0, 1.0).unwrap()
        } else {
            LatticeGeometry::flat_torus(4, 0.5).unwrap()
        });
        let u: GaugeField<Su2> = random_field(&geom, 0.8, seed);
        let g = GaugeTransform::<Su2>::random(geom.clone(), seed ^ 1);
        let v = u.gauge_transform(&g).unwrap();
        let pre = Preconditioner::new(&geom, 4.0);
        let (z, gu) = force_and_grad(&u, &pre);
        let (zv, gv) = force_and_grad(&v, &pre);
        prop_assert!((gu - gv).abs() <= 1e-10 * gu.max(1.0));
        prop_assert!((wilson_action(&u) - wilson_action(&v)).abs() <= 1e-10 * wilson_action(&u).max(1.0));
        // links that are flowed transform by conjugation at their base point
        for l in 0..geom.n_links() {
            if pre.weight(l) == 0.0 {
                continue;
            }
            let (s, mu) = (l / 4, l % 4);
            let expect = g.at(s) * z.get(s, mu) * g.at(s).adjoint();
            prop_assert!(max_abs_diff(&dense(&expect), &dense(&zv.get(s, mu))) < 1e-10 * z.max_norm().max(1.0));
        }
    }

    #[test]
    fn chern_weil_identity_is_exact(seed in any::<u64>(), scale in 0.05f64..1.0) {
        let geom = Arc::new(LatticeGeometry::flat_torus(4, 0.5).unwrap());
        let u: GaugeField<Su2> = random_field(&geom, scale, seed);
        let r = Measurer::with_defaults(&geom).measure(&u, &Preconditioner::new(&geom, 1.0), 0.0, 0.0).unwrap();
        let four_pi_sq = 4.0 * std::f64::consts::PI.powi(2);
        prop_assert!((r.ym - four_pi_sq * r.kappa - 2.0 * r.sd).abs() <= 1e-10 * r.ym.max(1e-300));
        prop_assert!((r.ym - r.sd - r.asd).abs() <= 1e-12 * r.ym.max(1e-300));
    }
}

#[test]
fn twisted_identity_has_action_but_no_clover_energy() {
    let geom = Arc::new(LatticeGeometry::flat_torus(4, 0.5).unwrap());
    let u = apply_twist(&GaugeField::<Su2>::identity(geom.clone()), &TwistSpec::single(2, 0, 1, 1).unwrap()).unwrap();
    // one -I plaquette per (x2, x3) slice
    assert!((wilson_action(&u) - 4.0 * 16.0).abs() < 1e-12);
    // the clover sum cannot see a central phase
    let r = Measurer::with_defaults(&geom).measure(&u, &Preconditioner::new(&geom, 1.0), 0.0, 0.0).unwrap();
    assert!(r.ym < 1e-20);
}
