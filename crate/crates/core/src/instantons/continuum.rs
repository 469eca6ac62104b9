//! Continuum SU(2) connections and their finite-difference curvature.

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64;

use super::conventions::{eta, eta_bar, point_quaternion};
use crate::error::{config_err, Error, Result};
use crate::gauge::{GaugeMatrix, Su2, PLANES};

/// A continuum su(2) connection `x -> (A_0(x), .., A_3(x))`, each component a
/// pure quaternion.
pub trait ConnectionEvaluator: Send + Sync {
    fn connection(&self, x: [f64; 4]) -> Result<[Su2; 4]>;
}

impl<E: ConnectionEvaluator + ?Sized> ConnectionEvaluator for Box<E> {
    fn connection(&self, x: [f64; 4]) -> Result<[Su2; 4]> {
        (**self).connection(x)
    }
}

impl<E: ConnectionEvaluator + ?Sized> ConnectionEvaluator for &E {
    fn connection(&self, x: [f64; 4]) -> Result<[Su2; 4]> {
        (**self).connection(x)
    }
}

/// The zero connection.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroConnection;

impl ConnectionEvaluator for ZeroConnection {
    fn connection(&self, _x: [f64; 4]) -> Result<[Su2; 4]> {
        Ok([Su2::zero(); 4])
    }
}

fn fmt_point(x: [f64; 4]) -> String {
    format!("({:.6}, {:.6}, {:.6}, {:.6})", x[0], x[1], x[2], x[3])
}

/// Regular-gauge BPST instanton.
#[derive(Debug, Clone)]
pub struct Bpst {
    center: [f64; 4],
    scale: f64,
    orientation: Su2,
}

impl Bpst {
    pub fn new(center: [f64; 4], scale: f64, orientation: Su2) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(config_err(format!("BPST scale must be positive, got {scale}")));
        }
        Ok(Bpst { center, scale, orientation: orientation.project_su()? })
    }
}

impl ConnectionEvaluator for Bpst {
    fn connection(&self, x: [f64; 4]) -> Result<[Su2; 4]> {
        let y: [f64; 4] = std::array::from_fn(|i| x[i] - self.center[i]);
        let den = y.iter().map(|v| v * v).sum::<f64>() + self.scale * self.scale;
        let g = self.orientation;
        Ok(std::array::from_fn(|mu| {
            let v: [f64; 3] = std::array::from_fn(|a| (0..4).map(|nu| eta_bar(a, mu, nu) * y[nu]).sum::<f64>() / den);
            g * Su2::pure(v) * g.adjoint()
        }))
    }
}

/// 't Hooft multi-instanton in singular gauge,
/// `A_mu = -1/2 eta^a_{mu nu} d_nu ln(phi) e_a`, `phi = 1 + sum rho_i^2 / |x - x_i|^2`.
#[derive(Debug, Clone)]
pub struct ThooftJnr {
    centers: Vec<[f64; 4]>,
    scales: Vec<f64>,
    orientation: Su2,
}

/// Below this distance to a pole the singular gauge is not sampled.
const POLE_TOL: f64 = 1e-9;

impl ThooftJnr {
    pub fn new(centers: Vec<[f64; 4]>, scales: Vec<f64>, orientation: Su2) -> Result<Self> {
        if centers.is_empty() || centers.len() != scales.len() {
            return Err(config_err("'t Hooft ansatz needs k >= 1 centers and as many scales"));
        }
        if scales.iter().any(|s| !(*s > 0.0)) {
            return Err(config_err("'t Hooft scales must be positive"));
        }
        for i in 0..centers.len() {
            for j in 0..i {
                if dist_sq(centers[i], centers[j]) < 1e-18 {
                    return Err(config_err("'t Hooft centers must be distinct"));
                }
            }
        }
        Ok(ThooftJnr { centers, scales, orientation: orientation.project_su()? })
    }

    pub fn charge(&self) -> usize {
        self.centers.len()
    }
}

fn dist_sq(a: [f64; 4], b: [f64; 4]) -> f64 {
    (0..4).map(|i| (a[i] - b[i]).powi(2)).sum()
}

impl ConnectionEvaluator for ThooftJnr {
    fn connection(&self, x: [f64; 4]) -> Result<[Su2; 4]> {
        let mut phi = 1.0;
        let mut grad = [0.0; 4];
        for (c, r) in self.centers.iter().zip(&self.scales) {
            let d: [f64; 4] = std::array::from_fn(|i| x[i] - c[i]);
            let d2 = d.iter().map(|v| v * v).sum::<f64>();
            if d2.sqrt() < POLE_TOL {
                return Err(Error::Singular {
                    location: fmt_point(x),
                    reason: "point coincides with a 't Hooft pole; offset the grid by half a spacing".into(),
                });
            }
            phi += r * r / d2;
            for i in 0..4 {
                grad[i] -= 2.0 * r * r * d[i] / (d2 * d2);
            }
        }
        let g = self.orientation;
        Ok(std::array::from_fn(|mu| {
            let v: [f64; 3] =
                std::array::from_fn(|a| -0.5 * (0..4).map(|nu| eta(a, mu, nu) * grad[nu]).sum::<f64>() / phi);
            g * Su2::pure(v) * g.adjoint()
        }))
    }
}

/// SU(2) ADHM data: `Delta(x) = [Lambda; B + x 1_k]`, a `(k+1) x k` quaternion
/// matrix with the `b` block fixed to the standard embedding.
#[derive(Debug, Clone)]
pub struct AdhmData {
    k: usize,
    /// Top row `Lambda`, k quaternions `[re, i, j, k]`.
    lambda: Vec<[f64; 4]>,
    /// `B`, row-major k x k quaternions.
    b: Vec<[f64; 4]>,
}

impl AdhmData {
    /// From the `(k+1) x k` matrix `a`, row-major, each entry a quaternion
    /// `[re, i, j, k]`.
    pub fn from_rows(k: usize, a: &[[f64; 4]]) -> Result<Self> {
        if k == 0 || a.len() != (k + 1) * k {
            return Err(config_err(format!(
                "ADHM data for k = {k} needs {} quaternions, got {}",
                (k + 1) * k,
                a.len()
            )));
        }
        let d = AdhmData { k, lambda: a[..k].to_vec(), b: a[k..].to_vec() };
        d.check_constraint()?;
        Ok(d)
    }

    /// 't Hooft-type data reproducing [`ThooftJnr`] with the same centers
    /// and scales.
    pub fn thooft(centers: &[[f64; 4]], scales: &[f64]) -> Result<Self> {
        let k = centers.len();
        if k == 0 || scales.len() != k {
            return Err(config_err("ADHM 't Hooft data needs matching centers and scales"));
        }
        let mut a = vec![[0.0; 4]; (k + 1) * k];
        for i in 0..k {
            a[i] = [scales[i], 0.0, 0.0, 0.0];
            let q = point_quaternion(centers[i]);
            a[k + i * k + i] = [-q[0], -q[1], -q[2], -q[3]];
        }
        Self::from_rows(k, &a)
    }

    pub fn charge(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> Vec<[f64; 4]> {
        self.lambda.iter().chain(self.b.iter()).copied().collect()
    }

    fn block(q: [f64; 4]) -> SMatrix<Complex64, 2, 2> {
        Su2(q).to_matrix()
    }

    /// `Delta(x)` as a `2(k+1) x 2k` complex matrix.
    fn delta(&self, x: [f64; 4]) -> DMatrix<Complex64> {
        let k = self.k;
        let xq = point_quaternion(x);
        let mut m = DMatrix::zeros(2 * (k + 1), 2 * k);
        for j in 0..k {
            m.view_mut((0, 2 * j), (2, 2)).copy_from(&Self::block(self.lambda[j]));
            for i in 0..k {
                let mut q = self.b[i * k + j];
                if i == j {
                    for c in 0..4 {
                        q[c] += xq[c];
                    }
                }
                m.view_mut((2 + 2 * i, 2 * j), (2, 2)).copy_from(&Self::block(q));
            }
        }
        m
    }

    /// Checks that `Delta^dag Delta` is quaternion-real (each 2x2 block a real
    /// multiple of the identity) and invertible on a probe grid.
    pub fn check_constraint(&self) -> Result<()> {
        let probes = [-1.7, -0.3, 0.9, 2.2];
        for (n, &p0) in probes.iter().enumerate() {
            for &p1 in &probes {
                for &p2 in &probes {
                    let x = [p0, p1, p2, probes[(n + 1) % 4] * 0.77];
                    let d = self.delta(x);
                    let g = d.adjoint() * &d;
                    let scale = g.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
                    for i in 0..self.k {
                        for j in 0..self.k {
                            let blk = g.view((2 * i, 2 * j), (2, 2));
                            let re = 0.5 * (blk[(0, 0)] + blk[(1, 1)]);
                            let off = (blk[(0, 0)] - re).norm()
                                + (blk[(1, 1)] - re).norm()
                                + blk[(0, 1)].norm()
                                + blk[(1, 0)].norm()
                                + re.im.abs();
                            if off > 1e-8 * scale {
                                return Err(config_err(format!(
                                    "ADHM constraint violated: Delta^dag Delta block ({i}, {j}) is not real at {}",
                                    fmt_point(x)
                                )));
                            }
                        }
                    }
                    let sv = g.clone().singular_values();
                    let (mx, mn) = (sv.max(), sv.min());
                    if !(mn > mx * 1e-12) {
                        return Err(config_err(format!(
                            "ADHM data degenerate: Delta^dag Delta singular at {}",
                            fmt_point(x)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// ADHM connection `A = v^dag d v` with the kernel vector `v` of `Delta^dag`
/// normalized so that its top quaternion is real and positive (a fixed,
/// global gauge choice; it is singular where `B + x` is not invertible).
#[derive(Debug, Clone)]
pub struct Adhm {
    data: AdhmData,
    orientation: Su2,
}

impl Adhm {
    pub fn new(data: AdhmData, orientation: Su2) -> Result<Self> {
        Ok(Adhm { data, orientation: orientation.project_su()? })
    }
}

fn quaternion_of(m: &DMatrix<Complex64>) -> Su2 {
    // inverse of Su2::to_matrix on the span of SU(2)
    let q0 = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let q3 = -0.5 * (m[(0, 0)].im - m[(1, 1)].im);
    let q1 = -0.5 * (m[(0, 1)].im + m[(1, 0)].im);
    let q2 = -0.5 * (m[(0, 1)].re - m[(1, 0)].re);
    Su2([q0, q1, q2, q3])
}

impl ConnectionEvaluator for Adhm {
    fn connection(&self, x: [f64; 4]) -> Result<[Su2; 4]> {
        let k = self.data.k;
        let d = self.data.delta(x);
        let gram = d.adjoint() * &d;
        let sv = gram.singular_values();
        if !(sv.min() > 1e-12 * sv.max()) {
            return Err(Error::Singular {
                location: fmt_point(x),
                reason: "Delta^dag Delta is nearly degenerate".into(),
            });
        }
        // M = (B + x)^dag, w = -M^{-1} Lambda^dag, v ~ (1; w).
        let m = d.rows(2, 2 * k).adjoint();
        let lam_dag = d.rows(0, 2).adjoint();
        let msv = m.clone().singular_values();
        if !(msv.min() > 1e-12 * msv.max()) {
            return Err(Error::Singular {
                location: fmt_point(x),
                reason: "gauge singularity of the ADHM kernel frame; offset the grid by half a spacing".into(),
            });
        }
        let m_inv = m.try_inverse().ok_or_else(|| Error::Singular {
            location: fmt_point(x),
            reason: "B + x is not invertible".into(),
        })?;
        let w = -(&m_inv * lam_dag);
        let norm = 1.0 + (w.adjoint() * &w)[(0, 0)].re;
        let g = self.orientation;
        let mut out = [Su2::zero(); 4];
        for (mu, slot) in out.iter_mut().enumerate() {
            let mut e = [0.0; 4];
            e[mu] = 1.0;
            let eq = point_quaternion(e);
            let ebar = AdhmData::block([eq[0], -eq[1], -eq[2], -eq[3]]);
            let mut de = DMatrix::<Complex64>::zeros(2 * k, 2 * k);
            for i in 0..k {
                de.view_mut((2 * i, 2 * i), (2, 2)).copy_from(&ebar);
            }
            let dw = -(&m_inv * de * &w);
            let raw = (w.adjoint() * dw).unscale(norm);
            let a = quaternion_of(&raw).alg_project();
            *slot = g * a * g.adjoint();
        }
        Ok(out)
    }
}

/// Global rotation `A -> g A g^dag` of any evaluator.
pub struct Rotated<E> {
    pub inner: E,
    pub orientation: Su2,
}

impl<E: ConnectionEvaluator> ConnectionEvaluator for Rotated<E> {
    fn connection(&self, x: [f64; 4]) -> Result<[Su2; 4]> {
        let g = self.orientation;
        Ok(self.inner.connection(x)?.map(|a| g * a * g.adjoint()))
    }
}

/// Continuum curvature `F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]` by
/// second-order central differences with step `h`, in [`PLANES`] order.
pub fn continuum_curvature<E: ConnectionEvaluator + ?Sized>(eval: &E, x: [f64; 4], h: f64) -> Result<[Su2; 6]> {
    let a = eval.connection(x)?;
    let mut da = [[Su2::zero(); 4]; 4];
    for (mu, row) in da.iter_mut().enumerate() {
        let mut xp = x;
        let mut xm = x;
        xp[mu] += h;
        xm[mu] -= h;
        let (ap, am) = (eval.connection(xp)?, eval.connection(xm)?);
        for nu in 0..4 {
            row[nu] = (ap[nu] - am[nu]) * (0.5 / h);
        }
    }
    Ok(std::array::from_fn(|p| {
        let (mu, nu) = PLANES[p];
        da[mu][nu] - da[nu][mu] + (a[mu] * a[nu] - a[nu] * a[mu])
    }))
}

/// Gauge-invariant pointwise densities of a curvature sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointDensity {
    /// `|F|^2 = sum_{mu<nu} ||F_{mu nu}||^2_tr`
    pub full: f64,
    pub self_dual: f64,
    pub anti_self_dual: f64,
    /// `eps^{mu nu rho sigma} tr(F_{mu nu} F_{rho sigma})`, including the
    /// charge sign.
    pub charge: f64,
}

pub fn point_density(f: &[Su2; 6]) -> PointDensity {
    use super::conventions::{dual_plane, CHARGE_SIGN};
    use crate::gauge::plane_index;
    let mut full = 0.0;
    let mut sd = 0.0;
    let mut asd = 0.0;
    let mut q = 0.0;
    for (p, &(mu, nu)) in PLANES.iter().enumerate() {
        let (r, s) = dual_plane(mu, nu);
        let (pd, sign) = plane_index(r, s).unwrap();
        let dual = f[pd] * sign;
        full += f[p].alg_norm_sq();
        sd += ((f[p] + dual) * 0.5).alg_norm_sq();
        asd += ((f[p] - dual) * 0.5).alg_norm_sq();
        // (mu nu) and (rho sigma) each appear in both orders
        q += 4.0 * f[p].re_trace_mul(&dual);
    }
    PointDensity { full, self_dual: sd, anti_self_dual: asd, charge: CHARGE_SIGN * q }
}
