//! Sign conventions, fixed once for the whole crate.
//!
//! * Directions are `0..4`; direction 3 plays the role of the "fourth"
//!   (real-quaternion) axis. A point `x` is identified with the quaternion
//!   `x3 + x0 i + x1 j + x2 k`.
//! * Orientation: `eps[0][1][2][3] = +1`. The Hodge star on 2-forms is
//!   `(*F)_{mu nu} = 1/2 eps_{mu nu rho sigma} F_{rho sigma}` and
//!   `F^± = (F ± *F)/2`.
//! * The anti-self-dual 't Hooft symbol is `etabar^a_{mu nu} = eps_{a mu nu}`
//!   for spatial indices, `etabar^a_{a 3} = -1`, `etabar^a_{3 a} = +1`; the
//!   self-dual `eta` flips the sign of the mixed entries.
//! * su(2) elements are pure quaternions; the generator `T_a = s_a / 2i` is the
//!   quaternion `e_a / 2`.
//! * Charge: `kappa = CHARGE_SIGN / (32 pi^2) sum_x a^4 eps^{mu nu rho sigma}
//!   tr(F_{mu nu} F_{rho sigma})` with `CHARGE_SIGN = +1`. With these choices
//!   the regular-gauge BPST connection `A_mu = etabar^a_{mu nu} x_nu e_a /
//!   (x^2 + rho^2)` is anti-self-dual with `kappa = +1` and energy `4 pi^2`,
//!   and `4 pi^2 kappa = |F^-|^2/2 - |F^+|^2/2` (integrated).

/// Global sign of the ε-contraction charge density.
pub const CHARGE_SIGN: f64 = 1.0;

/// Levi-Civita symbol on four indices.
pub fn levi_civita(i: usize, j: usize, k: usize, l: usize) -> f64 {
    let p = [i, j, k, l];
    if p.iter().any(|&v| v > 3) {
        return 0.0;
    }
    let mut sign = 1.0;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if p[a] == p[b] {
                return 0.0;
            }
            if p[a] > p[b] {
                sign = -sign;
            }
        }
    }
    sign
}

fn eps3(a: usize, b: usize, c: usize) -> f64 {
    if a > 2 || b > 2 || c > 2 {
        return 0.0;
    }
    levi_civita(a, b, c, 3)
}

/// Anti-self-dual 't Hooft symbol `etabar^a_{mu nu}`, `a` in `0..3`.
pub fn eta_bar(a: usize, mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (3, 3) => 0.0,
        (m, 3) => -((m == a) as i32 as f64),
        (3, n) => (n == a) as i32 as f64,
        (m, n) => eps3(a, m, n),
    }
}

/// Self-dual 't Hooft symbol `eta^a_{mu nu}`.
pub fn eta(a: usize, mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (_, 3) | (3, _) => -eta_bar(a, mu, nu),
        _ => eta_bar(a, mu, nu),
    }
}

/// Components `[re, i, j, k]` of the quaternion attached to a point.
#[inline]
pub fn point_quaternion(x: [f64; 4]) -> [f64; 4] {
    [x[3], x[0], x[1], x[2]]
}

/// The complementary plane `(rho, sigma)` of `(mu, nu)` with
/// `eps_{mu nu rho sigma} = +1`.
pub fn dual_plane(mu: usize, nu: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&i| i != mu && i != nu);
    let (r, s) = (rest.next().unwrap(), rest.next().unwrap());
    if levi_civita(mu, nu, r, s) > 0.0 {
        (r, s)
    } else {
        (s, r)
    }
}
