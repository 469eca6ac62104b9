use serde::{Deserialize, Serialize};

use super::continuum::{Adhm, AdhmData, Bpst, ConnectionEvaluator, ThooftJnr};
use crate::error::{config_err, Result};
use crate::gauge::Su2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstantonFamily {
    Bpst,
    ThooftJnr,
    Adhm,
}

fn identity_orientation() -> [f64; 4] {
    [1.0, 0.0, 0.0, 0.0]
}

/// Serializable description of continuum instanton data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstantonSpec {
    pub family: InstantonFamily,
    #[serde(default)]
    pub centers: Vec<[f64; 4]>,
    #[serde(default)]
    pub scales: Vec<f64>,
    /// ADHM matrix `a`, `(k+1) x k` quaternions `[re, i, j, k]` row-major. When
    /// absent for the ADHM family, 't Hooft-type data are built from
    /// `centers` and `scales`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adhm_data: Option<Vec<[f64; 4]>>,
    /// Global frame rotation as a unit quaternion.
    #[serde(default = "identity_orientation")]
    pub orientation: [f64; 4],
}

impl InstantonSpec {
    pub fn bpst(center: [f64; 4], scale: f64) -> Self {
        InstantonSpec {
            family: InstantonFamily::Bpst,
            centers: vec![center],
            scales: vec![scale],
            adhm_data: None,
            orientation: identity_orientation(),
        }
    }

    pub fn thooft(centers: Vec<[f64; 4]>, scales: Vec<f64>) -> Self {
        InstantonSpec { family: InstantonFamily::ThooftJnr, centers, scales, adhm_data: None, orientation: identity_orientation() }
    }

    /// Number of lumps `k`.
    pub fn charge(&self) -> usize {
        match (&self.family, &self.adhm_data) {
            (InstantonFamily::Bpst, _) => 1,
            (InstantonFamily::Adhm, Some(a)) => {
                // (k+1) k = len
                let n = a.len();
                (1..=n).find(|k| (k + 1) * k == n).unwrap_or(0)
            }
            _ => self.centers.len(),
        }
    }

    fn orientation(&self) -> Result<Su2> {
        let q = Su2(self.orientation);
        if !(q.norm_sq() > 0.0) || (q.norm_sq() - 1.0).abs() > 1e-6 {
            return Err(config_err("instanton orientation must be a unit quaternion"));
        }
        Ok(q)
    }

    pub fn evaluator(&self) -> Result<Box<dyn ConnectionEvaluator>> {
        let g = self.orientation()?;
        Ok(match self.family {
            InstantonFamily::Bpst => {
                if self.centers.len() != 1 || self.scales.len() != 1 {
                    return Err(config_err("BPST needs exactly one center and one scale"));
                }
                Box::new(Bpst::new(self.centers[0], self.scales[0], g)?)
            }
            InstantonFamily::ThooftJnr => Box::new(ThooftJnr::new(self.centers.clone(), self.scales.clone(), g)?),
            InstantonFamily::Adhm => {
                let data = match &self.adhm_data {
                    Some(a) => {
                        let k = self.charge();
                        if k == 0 {
                            return Err(config_err(format!(
                                "adhm_data must hold (k+1)*k quaternions, got {}",
                                a.len()
                            )));
                        }
                        AdhmData::from_rows(k, a)?
                    }
                    None => AdhmData::thooft(&self.centers, &self.scales)?,
                };
                Box::new(Adhm::new(data, g)?)
            }
        })
    }
}
