use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};

/// 't Hooft twist: an antisymmetric tensor `n_{mu nu}` of integers mod `N`.
///
/// The plaquette `P_{mu nu}(x)` with `x_mu = n_mu - 1` and `x_nu = n_nu - 1`
/// (the corner plaquette wrapping both periodic directions) picks up the
/// center phase `exp(2 pi i n_{mu nu} / N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TwistRepr", into = "TwistRepr")]
pub struct TwistSpec {
    rank: usize,
    /// Upper triangle, reduced to `0..rank`.
    n: [[i64; 4]; 4],
}

/// Config form: `rank` and a list of `[mu, nu, n]` triples.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistRepr {
    rank: usize,
    #[serde(default)]
    planes: Vec<[i64; 3]>,
}

impl TryFrom<TwistRepr> for TwistSpec {
    type Error = crate::error::Error;

    fn try_from(r: TwistRepr) -> Result<Self> {
        let mut t = TwistSpec::try_zero(r.rank)?;
        for [mu, nu, n] in r.planes {
            if !(0..4).contains(&mu) || !(0..4).contains(&nu) || mu == nu {
                return Err(config_err(format!("twist plane ({mu}, {nu}) is not a pair of distinct directions")));
            }
            t.set(mu as usize, nu as usize, n);
        }
        Ok(t)
    }
}

impl From<TwistSpec> for TwistRepr {
    fn from(t: TwistSpec) -> Self {
        let mut planes = Vec::new();
        for mu in 0..4 {
            for nu in (mu + 1)..4 {
                if t.n[mu][nu] != 0 {
                    planes.push([mu as i64, nu as i64, t.n[mu][nu]]);
                }
            }
        }
        TwistRepr { rank: t.rank, planes }
    }
}

impl TwistSpec {
    /// Untwisted spec for SU(`rank`). Panics if `rank < 2`.
    pub fn zero(rank: usize) -> Self {
        Self::try_zero(rank).expect("twist rank must be at least 2")
    }

    pub fn try_zero(rank: usize) -> Result<Self> {
        if rank < 2 {
            return Err(config_err(format!("twist rank must be >= 2, got {rank}")));
        }
        Ok(TwistSpec { rank, n: [[0; 4]; 4] })
    }

    /// Single twisted plane.
    pub fn single(rank: usize, mu: usize, nu: usize, n: i64) -> Result<Self> {
        let mut t = Self::try_zero(rank)?;
        if mu > 3 || nu > 3 || mu == nu {
            return Err(config_err(format!("twist plane ({mu}, {nu}) is not a pair of distinct directions")));
        }
        t.set(mu, nu, n);
        Ok(t)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Sets `n_{mu nu}` (and hence `n_{nu mu} = -n_{mu nu}`), reduced mod N.
    pub fn set(&mut self, mu: usize, nu: usize, n: i64) {
        assert!(mu != nu && mu < 4 && nu < 4);
        let r = self.rank as i64;
        if mu < nu {
            self.n[mu][nu] = n.rem_euclid(r);
        } else {
            self.n[nu][mu] = (-n).rem_euclid(r);
        }
    }

    /// `n_{mu nu}` in `0..N`; `n_{nu mu} = (-n_{mu nu}) mod N`, `n_{mu mu} = 0`.
    pub fn get(&self, mu: usize, nu: usize) -> i64 {
        let r = self.rank as i64;
        match mu.cmp(&nu) {
            std::cmp::Ordering::Less => self.n[mu][nu],
            std::cmp::Ordering::Greater => (-self.n[nu][mu]).rem_euclid(r),
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.n.iter().flatten().all(|&v| v == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetric_mod_n() {
        let mut t = TwistSpec::zero(3);
        t.set(0, 1, 4);
        assert_eq!(t.get(0, 1), 1);
        assert_eq!(t.get(1, 0), 2);
        t.set(3, 2, 1);
        assert_eq!(t.get(2, 3), 2);
        assert_eq!(t.get(2, 2), 0);
        let mut s = TwistSpec::zero(2);
        s.set(0, 1, 1);
        assert_eq!(s.get(1, 0), 1);
    }

    #[test]
    fn serde_roundtrip_and_validation() {
        let t = TwistSpec::single(2, 0, 1, 1).unwrap();
        let s = toml::to_string(&t).unwrap();
        let back: TwistSpec = toml::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(toml::from_str::<TwistSpec>("rank = 1").is_err());
        assert!(toml::from_str::<TwistSpec>("rank = 2\nplanes = [[0, 0, 1]]").is_err());
        assert!(toml::from_str::<TwistSpec>("rank = 2\nbogus = 1").is_err());
    }
}
