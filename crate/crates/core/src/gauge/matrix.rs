//! Matrix representations of SU(r) and su(r).
//!
//! [`Su2`] stores an SU(2) element (or any real linear combination of SU(2)
//! elements) as a quaternion `q0 + q1 i + q2 j + q3 k`, identified with the
//! 2x2 matrix `q0 I - i (q1 s1 + q2 s2 + q3 s3)` (`s_a` the Pauli matrices).
//! Sums of plaquettes, staples and clover leaves stay in this real span, so the
//! whole SU(2) lattice engine runs on quaternions.
//!
//! [`SuN`] is the general dense complex representation.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Operations the lattice engine needs from a link matrix type.
///
/// Algebra elements live in the same type; the basis is `T_a = lambda_a / 2i`
/// with `lambda_a` the generalized Gell-Mann matrices (`s_a` for r = 2), so
/// `<T_a, T_b> = -tr(T_a T_b) = delta_ab / 2`.
pub trait GaugeMatrix:
    Copy
    + Clone
    + Send
    + Sync
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + 'static
{
    const RANK: usize;

    fn identity() -> Self;
    fn zero() -> Self;
    fn adjoint(&self) -> Self;
    fn trace(&self) -> Complex64;

    fn re_trace(&self) -> f64 {
        self.trace().re
    }

    /// `Re tr(self * other)`.
    fn re_trace_mul(&self, other: &Self) -> f64;

    /// Central element `exp(2 pi i k / r) I`.
    fn center(k: i64) -> Self;

    /// Traceless anti-Hermitian part `(M - M^dag)/2 - tr(M - M^dag)/(2r) I`.
    fn alg_project(&self) -> Self;

    /// Exponential of an algebra element.
    fn exp_alg(&self) -> Self;

    /// Nearest special unitary matrix.
    fn project_su(&self) -> Result<Self>;

    /// `sum |m_ij|^2`.
    fn frobenius_sq(&self) -> f64;

    /// `-tr(X^2)` for anti-Hermitian `X`.
    fn alg_norm_sq(&self) -> f64 {
        -self.re_trace_mul(self)
    }

    fn algebra_dim() -> usize {
        Self::RANK * Self::RANK - 1
    }

    /// `sum_a c_a T_a`.
    fn from_algebra(coeffs: &[f64]) -> Self;

    /// Inverse of [`GaugeMatrix::from_algebra`] on su(r).
    fn algebra_coords(&self) -> Vec<f64>;

    /// Row-major complex entries.
    fn entries(&self) -> Vec<Complex64>;

    fn from_entries(entries: &[Complex64]) -> Result<Self>;

    /// `(||U^dag U - I||_F, |det U - 1|)`.
    fn su_defect(&self) -> (f64, f64);

    fn is_finite(&self) -> bool;

    /// Algebra element with independent standard normal coefficients.
    fn random_algebra<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let coeffs: Vec<f64> = (0..Self::algebra_dim()).map(|_| rng.sample(StandardNormal)).collect();
        Self::from_algebra(&coeffs)
    }
}

/// Quaternionic SU(2) element.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Su2(pub [f64; 4]);

impl Su2 {
    pub const IDENTITY: Su2 = Su2([1.0, 0.0, 0.0, 0.0]);

    pub fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Su2([q0, q1, q2, q3])
    }

    /// Pure quaternion `v1 i + v2 j + v3 k`.
    pub fn pure(v: [f64; 3]) -> Self {
        Su2([0.0, v[0], v[1], v[2]])
    }

    pub fn vector(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    /// Closed-form exponential of a pure quaternion.
    pub fn exp_pure(v: [f64; 3]) -> Self {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let s = if n > 1e-8 {
            n.sin() / n
        } else {
            1.0 - n * n / 6.0 + n.powi(4) / 120.0
        };
        Su2([n.cos(), s * v[0], s * v[1], s * v[2]])
    }

    /// Principal logarithm as a pure quaternion, inverse of [`Su2::exp_pure`]
    /// for rotation angles below pi.
    pub fn log(&self) -> Su2 {
        let v = self.vector();
        let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let theta = s.atan2(self.0[0]);
        let k = if s > 1e-12 { theta / s } else { 1.0 / self.0[0] };
        Su2::pure([k * v[0], k * v[1], k * v[2]])
    }

    pub fn to_matrix(&self) -> SMatrix<Complex64, 2, 2> {
        let [q0, q1, q2, q3] = self.0;
        SMatrix::<Complex64, 2, 2>::new(
            Complex64::new(q0, -q3),
            Complex64::new(-q2, -q1),
            Complex64::new(q2, -q1),
            Complex64::new(q0, q3),
        )
    }
}

impl Add for Su2 {
    type Output = Su2;
    #[inline]
    fn add(self, o: Su2) -> Su2 {
        Su2([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }
}

impl AddAssign for Su2 {
    #[inline]
    fn add_assign(&mut self, o: Su2) {
        for i in 0..4 {
            self.0[i] += o.0[i];
        }
    }
}

impl Sub for Su2 {
    type Output = Su2;
    #[inline]
    fn sub(self, o: Su2) -> Su2 {
        Su2([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2], self.0[3] - o.0[3]])
    }
}

impl Neg for Su2 {
    type Output = Su2;
    #[inline]
    fn neg(self) -> Su2 {
        Su2([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl Mul<f64> for Su2 {
    type Output = Su2;
    #[inline]
    fn mul(self, s: f64) -> Su2 {
        Su2([self.0[0] * s, self.0[1] * s, self.0[2] * s, self.0[3] * s])
    }
}

impl Mul for Su2 {
    type Output = Su2;
    #[inline]
    fn mul(self, b: Su2) -> Su2 {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = b.0;
        Su2([
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ])
    }
}

impl GaugeMatrix for Su2 {
    const RANK: usize = 2;

    #[inline]
    fn identity() -> Self {
        Su2::IDENTITY
    }

    #[inline]
    fn zero() -> Self {
        Su2([0.0; 4])
    }

    #[inline]
    fn adjoint(&self) -> Self {
        Su2([self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }

    fn trace(&self) -> Complex64 {
        Complex64::new(2.0 * self.0[0], 0.0)
    }

    #[inline]
    fn re_trace(&self) -> f64 {
        2.0 * self.0[0]
    }

    #[inline]
    fn re_trace_mul(&self, o: &Self) -> f64 {
        2.0 * (self.0[0] * o.0[0] - self.0[1] * o.0[1] - self.0[2] * o.0[2] - self.0[3] * o.0[3])
    }

    fn center(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Su2::IDENTITY
        } else {
            -Su2::IDENTITY
        }
    }

    #[inline]
    fn alg_project(&self) -> Self {
        Su2([0.0, self.0[1], self.0[2], self.0[3]])
    }

    #[inline]
    fn exp_alg(&self) -> Self {
        Su2::exp_pure(self.vector())
    }

    /// Normalized quaternion. For a real multiple of an SU(2) matrix this is the
    /// polar factor; in general it maximizes `Re tr(Q^dag M)` over SU(2).
    fn project_su(&self) -> Result<Self> {
        let n = self.norm_sq().sqrt();
        if !(n.is_finite() && n > 1e-150) {
            return Err(Error::Numerical(format!("cannot project singular matrix {:?} onto SU(2)", self.0)));
        }
        Ok(*self * (1.0 / n))
    }

    fn frobenius_sq(&self) -> f64 {
        2.0 * self.norm_sq()
    }

    fn from_algebra(c: &[f64]) -> Self {
        Su2([0.0, 0.5 * c[0], 0.5 * c[1], 0.5 * c[2]])
    }

    fn algebra_coords(&self) -> Vec<f64> {
        vec![2.0 * self.0[1], 2.0 * self.0[2], 2.0 * self.0[3]]
    }

    fn entries(&self) -> Vec<Complex64> {
        let m = self.to_matrix();
        vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
    }

    fn from_entries(e: &[Complex64]) -> Result<Self> {
        if e.len() != 4 {
            return Err(Error::Format(format!("expected 4 entries for SU(2), got {}", e.len())));
        }
        let q0 = 0.5 * (e[0].re + e[3].re);
        let q3 = 0.5 * (e[3].im - e[0].im);
        let q1 = -0.5 * (e[1].im + e[2].im);
        let q2 = 0.5 * (e[2].re - e[1].re);
        let q = Su2([q0, q1, q2, q3]);
        let back = q.entries();
        let resid: f64 = back.iter().zip(e).map(|(a, b)| (a - b).norm_sqr()).sum();
        if resid.sqrt() > 1e-10 * (1.0 + q.norm_sq().sqrt()) {
            return Err(Error::Format("matrix is not in the quaternionic span of SU(2)".into()));
        }
        Ok(q)
    }

    fn su_defect(&self) -> (f64, f64) {
        let d = self.norm_sq() - 1.0;
        (std::f64::consts::SQRT_2 * d.abs(), d.abs())
    }

    fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

/// Dense complex `N x N` representation of SU(N) / su(N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuN<const N: usize>(pub SMatrix<Complex64, N, N>);

impl<const N: usize> SuN<N> {
    pub fn from_matrix(m: SMatrix<Complex64, N, N>) -> Self {
        SuN(m)
    }

    fn to_dynamic(self) -> DMatrix<Complex64> {
        DMatrix::from_fn(N, N, |i, j| self.0[(i, j)])
    }

    fn from_dynamic(m: &DMatrix<Complex64>) -> Self {
        SuN(SMatrix::from_fn(|i, j| m[(i, j)]))
    }

    pub fn determinant(&self) -> Complex64 {
        self.to_dynamic().determinant()
    }

    /// Generalized Gell-Mann matrix `lambda_a` (normalized `tr(lambda_a lambda_b) = 2 delta_ab`).
    pub fn gell_mann(a: usize) -> SMatrix<Complex64, N, N> {
        let mut m = SMatrix::<Complex64, N, N>::zeros();
        let off = N * (N - 1) / 2;
        if a < 2 * off {
            let (pair, antisym) = (a / 2, a % 2 == 1);
            let mut count = 0;
            for j in 0..N {
                for k in (j + 1)..N {
                    if count == pair {
                        if antisym {
                            m[(j, k)] = Complex64::new(0.0, -1.0);
                            m[(k, j)] = Complex64::new(0.0, 1.0);
                        } else {
                            m[(j, k)] = Complex64::new(1.0, 0.0);
                            m[(k, j)] = Complex64::new(1.0, 0.0);
                        }
                    }
                    count += 1;
                }
            }
        } else {
            let l = a - 2 * off + 1;
            let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
            for j in 0..l {
                m[(j, j)] = Complex64::new(norm, 0.0);
            }
            m[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        }
        m
    }

    /// Generator `T_a = lambda_a / 2i`.
    pub fn generator(a: usize) -> Self {
        SuN(Self::gell_mann(a) * Complex64::new(0.0, -0.5))
    }
}

impl<const N: usize> Add for SuN<N> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        SuN(self.0 + o.0)
    }
}

impl<const N: usize> AddAssign for SuN<N> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.0 += o.0;
    }
}

impl<const N: usize> Sub for SuN<N> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        SuN(self.0 - o.0)
    }
}

impl<const N: usize> Neg for SuN<N> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        SuN(-self.0)
    }
}

impl<const N: usize> Mul<f64> for SuN<N> {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        SuN(self.0 * Complex64::new(s, 0.0))
    }
}

impl<const N: usize> Mul for SuN<N> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        SuN(self.0 * o.0)
    }
}

impl<const N: usize> GaugeMatrix for SuN<N> {
    const RANK: usize = N;

    fn identity() -> Self {
        SuN(SMatrix::identity())
    }

    fn zero() -> Self {
        SuN(SMatrix::zeros())
    }

    fn adjoint(&self) -> Self {
        SuN(self.0.adjoint())
    }

    fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    fn re_trace_mul(&self, o: &Self) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            for k in 0..N {
                s += (self.0[(i, k)] * o.0[(k, i)]).re;
            }
        }
        s
    }

    fn center(k: i64) -> Self {
        let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k.rem_euclid(N as i64) as f64 / N as f64);
        SuN(SMatrix::identity() * phase)
    }

    fn alg_project(&self) -> Self {
        let anti = (self.0 - self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let tr = anti.trace() / N as f64;
        SuN(anti - SMatrix::identity() * tr)
    }

    /// Scaling-and-squaring Pade exponential.
    fn exp_alg(&self) -> Self {
        Self::from_dynamic(&self.to_dynamic().exp())
    }

    /// For N = 2 the maximizer of `Re tr(Q^dag M)` over SU(2) (the normalized
    /// quaternionic component of `M`); otherwise the unitary polar factor
    /// rephased to unit determinant, choosing the branch closest to `M`.
    fn project_su(&self) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::Numerical("non-finite matrix".into()));
        }
        if N == 2 {
            let e = self.entries();
            let q = Su2([
                0.5 * (e[0].re + e[3].re),
                -0.5 * (e[1].im + e[2].im),
                0.5 * (e[2].re - e[1].re),
                0.5 * (e[3].im - e[0].im),
            ]);
            let q = q.project_su()?;
            let mut out = SMatrix::<Complex64, N, N>::zeros();
            for (idx, v) in q.entries().into_iter().enumerate() {
                out[(idx / 2, idx % 2)] = v;
            }
            return Ok(SuN(out));
        }
        let m = self.to_dynamic();
        let svd = m.clone().svd(true, true);
        let smin = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        if !(smin > 1e-14 * smax.max(1e-300)) {
            return Err(Error::Numerical("cannot project singular matrix onto SU(N)".into()));
        }
        let (u, vt) = match (svd.u, svd.v_t) {
            (Some(u), Some(vt)) => (u, vt),
            _ => return Err(Error::Numerical("SVD failed".into())),
        };
        let q = u * vt;
        let theta = q.determinant().arg();
        let mut best: Option<(f64, DMatrix<Complex64>)> = None;
        for k in 0..N {
            let phase = Complex64::from_polar(1.0, -(theta + 2.0 * std::f64::consts::PI * k as f64) / N as f64);
            let cand = &q * phase;
            let score = (cand.adjoint() * &m).trace().re;
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, cand));
            }
        }
        let best = best.map(|(_, c)| c).unwrap_or(q);
        Ok(Self::from_dynamic(&best))
    }

    fn frobenius_sq(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    fn from_algebra(c: &[f64]) -> Self {
        let mut m = SMatrix::<Complex64, N, N>::zeros();
        for (a, &ca) in c.iter().enumerate().take(N * N - 1) {
            m += Self::generator(a).0 * Complex64::new(ca, 0.0);
        }
        SuN(m)
    }

    fn algebra_coords(&self) -> Vec<f64> {
        (0..N * N - 1).map(|a| -2.0 * Self::generator(a).re_trace_mul(self)).collect()
    }

    fn entries(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(N * N);
        for i in 0..N {
            for j in 0..N {
                v.push(self.0[(i, j)]);
            }
        }
        v
    }

    fn from_entries(e: &[Complex64]) -> Result<Self> {
        if e.len() != N * N {
            return Err(Error::Format(format!("expected {} entries, got {}", N * N, e.len())));
        }
        Ok(SuN(SMatrix::from_fn(|i, j| e[i * N + j])))
    }

    fn su_defect(&self) -> (f64, f64) {
        let d = self.0.adjoint() * self.0 - SMatrix::<Complex64, N, N>::identity();
        let unit = d.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        (unit, (self.determinant() - Complex64::new(1.0, 0.0)).norm())
    }

    fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Converts a quaternionic element into the dense representation.
pub fn su2_to_dense(q: &Su2) -> SuN<2> {
    SuN(q.to_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #[test]
        fn su2_log_inverts_exp(v in proptest::array::uniform3(-1.0f64..1.0)) {
            let u = Su2::exp_pure(v);
            let w = u.log().vector();
            for i in 0..3 {
                prop_assert!((w[i] - v[i]).abs() < 1e-12);
            }
        }
    }

    fn dense_close(a: &SuN<2>, b: &SuN<2>, tol: f64) -> bool {
        (a.0 - b.0).iter().map(|c| c.norm()).fold(0.0, f64::max) < tol
    }

    #[test]
    fn quaternion_matches_dense_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = Su2::random_algebra(&mut rng).exp_alg();
            let b = Su2::random_algebra(&mut rng) * 0.7 + Su2::IDENTITY;
            let prod = su2_to_dense(&(a * b));
            let dense = su2_to_dense(&a) * su2_to_dense(&b);
            assert!(dense_close(&prod, &dense, 1e-14));
            assert!((a.re_trace_mul(&b) - su2_to_dense(&a).re_trace_mul(&su2_to_dense(&b))).abs() < 1e-14);
            assert!(dense_close(&su2_to_dense(&a.adjoint()), &su2_to_dense(&a).adjoint(), 1e-15));
        }
    }

    #[test]
    fn closed_form_exp_matches_pade() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let z = Su2::random_algebra(&mut rng) * 1.7;
            let closed = su2_to_dense(&z.exp_alg());
            let pade = su2_to_dense(&z).exp_alg();
            assert!(dense_close(&closed, &pade, 1e-12));
        }
    }

    #[test]
    fn project_su_examples() {
        assert_eq!(Su2::IDENTITY.project_su().unwrap(), Su2::IDENTITY);
        let two = SuN::<2>::identity() * 2.0;
        assert!(dense_close(&two.project_su().unwrap(), &SuN::<2>::identity(), 1e-15));
        assert!(Su2::zero().project_su().is_err());
        assert!(SuN::<3>::zero().project_su().is_err());
    }

    /// Polar factor via SVD, the independent route for inputs in R+ SU(2).
    fn svd_polar(m: &SuN<2>) -> SuN<2> {
        let d = DMatrix::from_fn(2, 2, |i, j| m.0[(i, j)]);
        let svd = d.svd(true, true);
        let q = svd.u.unwrap() * svd.v_t.unwrap();
        let det = q.determinant();
        let q = &q * Complex64::from_polar(1.0, -det.arg() / 2.0);
        SuN(SMatrix::from_fn(|i, j| q[(i, j)]))
    }

    #[test]
    fn project_su_random_gl2() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let m = SuN::<2>(SMatrix::from_fn(|_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            }));
            let q = m.project_su().unwrap();
            let (unit, det) = q.su_defect();
            assert!(unit < 1e-12 && det < 1e-12);
            let best = q.adjoint().re_trace_mul(&m);
            // no SU(2) sample does better
            for _ in 0..2000 {
                let r = SuN::<2>::random_algebra(&mut rng).exp_alg();
                assert!(r.adjoint().re_trace_mul(&m) <= best + 1e-12);
            }
            // on R+ SU(2) inputs the maximizer is the rephased polar factor
            let g = SuN::<2>::random_algebra(&mut rng).exp_alg() * 3.5;
            assert!(dense_close(&g.project_su().unwrap(), &svd_polar(&g), 1e-12));
        }
    }

    #[test]
    fn project_su3_is_special_unitary_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let m = SuN::<3>(SMatrix::from_fn(|_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            }));
            let q = m.project_su().unwrap();
            let (unit, det) = q.su_defect();
            assert!(unit < 1e-12 && det < 1e-12, "{unit} {det}");
            let q2 = q.project_su().unwrap();
            assert!((q2.0 - q.0).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-12);
        }
    }

    #[test]
    fn alg_project_examples() {
        assert_eq!(Su2::IDENTITY.alg_project(), Su2::zero());
        let d = SuN::<2>(SMatrix::from_fn(|i, j| {
            if i == 0 && j == 0 {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }));
        let p = d.alg_project();
        assert!((p.0[(0, 0)] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((p.0[(1, 1)] - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!(p.0[(0, 1)].norm() < 1e-15 && p.0[(1, 0)].norm() < 1e-15);
        let z = SuN::<3>::from_algebra(&[0.3, -1.0, 0.2, 0.5, 0.1, 2.0, -0.7, 0.4]);
        assert!((z.alg_project().0 - z.0).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-15);
    }

    #[test]
    fn center_elements() {
        assert_eq!(Su2::center(1), -Su2::IDENTITY);
        assert_eq!(Su2::center(2), Su2::IDENTITY);
        let z = SuN::<3>::center(1);
        assert!((z.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((z.trace() - Complex64::from_polar(3.0, 2.0 * std::f64::consts::PI / 3.0)).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn algebra_coords_roundtrip(c in proptest::collection::vec(-3.0f64..3.0, 8)) {
            let z = SuN::<3>::from_algebra(&c);
            let back = z.algebra_coords();
            for (a, b) in c.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            let (unit, det) = z.exp_alg().su_defect();
            prop_assert!(unit < 1e-12 && det < 1e-12);
            // anti-Hermitian and traceless
            prop_assert!((z.0 + z.0.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-14);
            prop_assert!(z.trace().norm() < 1e-14);
        }

        #[test]
        fn su2_entries_roundtrip(q in proptest::array::uniform4(-2.0f64..2.0)) {
            let q = Su2(q);
            prop_assert_eq!(Su2::from_entries(&q.entries()).unwrap(), q);
        }
    }
}
