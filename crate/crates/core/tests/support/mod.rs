//! Independent reference implementations for the integration tests.
//!
//! Everything here works from site coordinates and dense `nalgebra` matrices
//! and never touches the crate's neighbour tables, staples or quaternion
//! products, so agreement is a genuine cross-check.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ymflow::gauge::{GaugeField, GaugeMatrix};
use ymflow::geometry::LatticeGeometry;

pub type Dense = DMatrix<Complex64>;

pub fn dense<G: GaugeMatrix>(g: &G) -> Dense {
    DMatrix::from_row_slice(G::RANK, G::RANK, &g.entries())
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Traceless anti-Hermitian part.
pub fn ah_project(m: &Dense) -> Dense {
    let n = m.nrows();
    let a = (m - m.adjoint()) * Complex64::new(0.5, 0.0);
    let tr = a.trace() / Complex64::new(n as f64, 0.0);
    a - DMatrix::identity(n, n) * tr
}

/// `exp(X)` by scaling and squaring a Taylor series.
pub fn expm(x: &Dense) -> Dense {
    let n = x.nrows();
    let norm: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let k = (norm.max(1e-300).log2().ceil().max(0.0) as i32) + 4;
    let y = x * Complex64::new(0.5f64.powi(k), 0.0);
    let mut term = DMatrix::identity(n, n);
    let mut sum = term.clone();
    for j in 1..30 {
        term = &term * &y * Complex64::new(1.0 / j as f64, 0.0);
        sum += &term;
    }
    for _ in 0..k {
        sum = &sum * &sum;
    }
    sum
}

/// Dense copy of a periodic lattice field with coordinate arithmetic.
#[derive(Clone)]
pub struct DenseLattice {
    pub dims: [usize; 4],
    pub a: f64,
    pub rank: usize,
    links: Vec<Dense>,
    twist: [[i64; 4]; 4],
}

impl DenseLattice {
    pub fn new<G: GaugeMatrix>(u: &GaugeField<G>) -> Self {
        let g = u.geometry();
        let mut twist = [[0i64; 4]; 4];
        if let Some(t) = u.twist() {
            for mu in 0..4 {
                for nu in 0..4 {
                    if mu != nu {
                        twist[mu][nu] = t.get(mu, nu);
                    }
                }
            }
        }
        DenseLattice {
            dims: g.dims(),
            a: g.spacing(),
            rank: G::RANK,
            links: u.links().iter().map(dense).collect(),
            twist,
        }
    }

    /// Row-major site index (last axis fastest), the crate's storage order.
    pub fn site(&self, c: [usize; 4]) -> usize {
        let d = self.dims;
        ((c[0] * d[1] + c[1]) * d[2] + c[2]) * d[3] + c[3]
    }

    pub fn shift(&self, c: [usize; 4], mu: usize, by: i64) -> [usize; 4] {
        let mut o = c;
        let n = self.dims[mu] as i64;
        o[mu] = (c[mu] as i64 + by).rem_euclid(n) as usize;
        o
    }

    pub fn link(&self, c: [usize; 4], mu: usize) -> &Dense {
        &self.links[4 * self.site(c) + mu]
    }

    pub fn set_link(&mut self, c: [usize; 4], mu: usize, m: Dense) {
        let i = 4 * self.site(c) + mu;
        self.links[i] = m;
    }

    pub fn sites(&self) -> Vec<[usize; 4]> {
        let d = self.dims;
        let mut out = Vec::new();
        for x3 in 0..d[3] {
            for x2 in 0..d[2] {
                for x1 in 0..d[1] {
                    for x0 in 0..d[0] {
                        out.push([x0, x1, x2, x3]);
                    }
                }
            }
        }
        out
    }

    /// Center phase of the plaquette whose lower corner is `c`.
    fn phase(&self, c: [usize; 4], mu: usize, nu: usize) -> Complex64 {
        let n = self.twist[mu][nu];
        if n != 0 && c[mu] + 1 == self.dims[mu] && c[nu] + 1 == self.dims[nu] {
            Complex64::from_polar(1.0, 2.0 * PI * n as f64 / self.rank as f64)
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    pub fn plaquette(&self, c: [usize; 4], mu: usize, nu: usize) -> Dense {
        let xm = self.shift(c, mu, 1);
        let xn = self.shift(c, nu, 1);
        let p = self.link(c, mu) * self.link(xm, nu) * self.link(xn, mu).adjoint() * self.link(c, nu).adjoint();
        p * self.phase(c, mu, nu)
    }

    /// The four clover leaves, each written out as an explicit loop.
    pub fn clover(&self, c: [usize; 4], mu: usize, nu: usize) -> Dense {
        let u = |x: [usize; 4], d: usize| self.link(x, d).clone();
        let s = |x: [usize; 4], d: usize, k: i64| self.shift(x, d, k);
        let xbm = s(c, mu, -1);
        let xbn = s(c, nu, -1);
        let xbmbn = s(xbm, nu, -1);
        let l1 = self.plaquette(c, mu, nu);
        let l2 = u(c, nu) * u(s(xbm, nu, 1), mu).adjoint() * u(xbm, nu).adjoint() * u(xbm, mu) * self.phase(xbm, mu, nu);
        let l3 = u(xbm, mu).adjoint() * u(xbmbn, nu).adjoint() * u(xbmbn, mu) * u(xbn, nu) * self.phase(xbmbn, mu, nu);
        let l4 = u(xbn, nu).adjoint() * u(xbn, mu) * u(s(xbn, mu, 1), nu) * u(c, mu).adjoint() * self.phase(xbn, mu, nu);
        l1 + l2 + l3 + l4
    }

    pub fn field_strength(&self, c: [usize; 4], mu: usize, nu: usize) -> Dense {
        ah_project(&self.clover(c, mu, nu)) * Complex64::new(1.0 / (4.0 * self.a * self.a), 0.0)
    }

    pub fn action(&self) -> f64 {
        let r = self.rank as f64;
        let mut s = 0.0;
        for c in self.sites() {
            for mu in 0..4 {
                for nu in (mu + 1)..4 {
                    s += r - self.plaquette(c, mu, nu).trace().re;
                }
            }
        }
        s
    }

    /// `U_mu(x)` times the sum of its six staples, from the plaquettes that
    /// contain the link written so that the link comes first.
    pub fn link_times_staples(&self, c: [usize; 4], mu: usize) -> Dense {
        let n = self.rank;
        let mut acc = DMatrix::zeros(n, n);
        for nu in 0..4 {
            if nu == mu {
                continue;
            }
            // plaquette (mu, nu) based at c starts with U_mu(c)
            acc += self.plaquette(c, mu, nu);
            // plaquette (nu, mu) based at c - nu, cycled to start at U_mu(c)
            let b = self.shift(c, nu, -1);
            let p = self.link(b, nu) * self.link(c, mu) * self.link(self.shift(b, mu, 1), nu).adjoint() * self.link(b, mu).adjoint();
            let cyc = self.link(b, nu).adjoint() * p * self.link(b, nu);
            acc += cyc * self.phase(b, nu, mu);
        }
        acc
    }

    /// `-(1/a^2) Pr(U W)` on the torus (unit preconditioner).
    pub fn force(&self, c: [usize; 4], mu: usize) -> Dense {
        ah_project(&self.link_times_staples(c, mu)) * Complex64::new(-1.0 / (self.a * self.a), 0.0)
    }

    /// Central difference of the action along `U_mu(c) -> exp(e X) U_mu(c)`.
    pub fn fd_derivative(&self, c: [usize; 4], mu: usize, x: &Dense, h: f64) -> f64 {
        let base = self.link(c, mu).clone();
        let mut w = self.clone();
        w.set_link(c, mu, expm(&(x * Complex64::new(h, 0.0))) * &base);
        let sp = w.action();
        w.set_link(c, mu, expm(&(x * Complex64::new(-h, 0.0))) * &base);
        let sm = w.action();
        (sp - sm) / (2.0 * h)
    }
}

/// Independent Haar-ish random links `exp(s X)` with Gaussian `X`.
pub fn random_field<G: GaugeMatrix>(geom: &Arc<LatticeGeometry>, scale: f64, seed: u64) -> GaugeField<G> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let links = (0..geom.n_links()).map(|_| (G::random_algebra(&mut rng) * scale).exp_alg()).collect();
    GaugeField::from_links(geom.clone(), links).expect("sized from geometry")
}

/// `|a - b| / scale`.
pub fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Simpson's rule on a non-uniform grid, paired intervals, with a trapezoid
/// for a leftover last interval.
pub fn simpson(ts: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(ts.len(), ys.len());
    let mut acc = 0.0;
    let mut i = 0;
    while i + 2 < ts.len() {
        let (h0, h1) = (ts[i + 1] - ts[i], ts[i + 2] - ts[i + 1]);
        let h = h0 + h1;
        acc += h / 6.0
            * (ys[i] * (2.0 - h1 / h0) + ys[i + 1] * h * h / (h0 * h1) + ys[i + 2] * (2.0 - h0 / h1));
        i += 2;
    }
    if i + 1 < ts.len() {
        acc += 0.5 * (ts[i + 1] - ts[i]) * (ys[i] + ys[i + 1]);
    }
    acc
}
