//! One-time-slice measurements and their CSV / JSON forms.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::energy::{pointwise_norms, split_energies, topological_charge};
use super::morrey::{gaussian_phi, morrey_norm, CutoffSpec, MorreySampling, PhiSampling};
use crate::error::Result;
use crate::flow::{grad_norm_sq, Preconditioner};
use crate::gauge::{GaugeField, GaugeMatrix};
use crate::geometry::LatticeGeometry;

/// `Phi(|F|_g, R, x)` with the cutoff centered at `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiSample {
    pub center: [usize; 4],
    pub r: f64,
    pub phi: f64,
}

/// Measurements at one flow time. `sd` and `asd` are `(1/2) int |F^±|^2`, so
/// `ym = sd + asd` and the `L^2` norm squared of `F^+` is `2 sd`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub ym: f64,
    pub sd: f64,
    pub asd: f64,
    pub kappa: f64,
    pub grad_sq: f64,
    pub sup_f: f64,
    pub sup_fp: f64,
    /// `M^{2,4}` Morrey norm of `|F|_g`.
    pub morrey24: f64,
    pub running_k: f64,
    pub phi_samples: Vec<PhiSample>,
}

impl ObservableRecord {
    /// `||F^+||_{L^2}`.
    pub fn fplus_l2(&self) -> f64 {
        (2.0 * self.sd).max(0.0).sqrt()
    }

    /// Scalars in CSV column order.
    pub fn scalars(&self) -> [f64; 10] {
        [
            self.t,
            self.ym,
            self.sd,
            self.asd,
            self.kappa,
            self.grad_sq,
            self.sup_f,
            self.sup_fp,
            self.morrey24,
            self.running_k,
        ]
    }
}

pub const CSV_COLUMNS: [&str; 10] = ["t", "ym", "sd", "asd", "kappa", "grad_sq", "sup_F", "sup_Fp", "morrey24", "K"];

/// Trajectory CSV writer; values use Rust's shortest round-trip formatting.
pub struct CsvSink<W: Write> {
    w: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(inner: W) -> Result<Self> {
        let mut w = csv::Writer::from_writer(inner);
        w.write_record(CSV_COLUMNS)?;
        Ok(CsvSink { w })
    }

    pub fn push(&mut self, r: &ObservableRecord) -> Result<()> {
        self.w.write_record(r.scalars().iter().map(|v| v.to_string()))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.w.flush()?;
        self.w.into_inner().map_err(|e| crate::error::Error::IoPlain(e.into_error()))
    }
}

/// Side file of `Phi` samples keyed by `(center, R)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiSeries {
    pub center: [usize; 4],
    pub r: f64,
    /// `(t, Phi)` pairs.
    pub values: Vec<(f64, f64)>,
}

pub fn phi_series(records: &[ObservableRecord]) -> Vec<PhiSeries> {
    let mut out: Vec<PhiSeries> = Vec::new();
    for rec in records {
        for s in &rec.phi_samples {
            match out.iter_mut().find(|p| p.center == s.center && p.r == s.r) {
                Some(p) => p.values.push((rec.t, s.phi)),
                None => out.push(PhiSeries { center: s.center, r: s.r, values: vec![(rec.t, s.phi)] }),
            }
        }
    }
    out
}

/// Measurement settings bound to one lattice.
#[derive(Debug, Clone)]
pub struct Measurer {
    dims: [usize; 4],
    n_sites: usize,
    morrey: MorreySampling,
    phi: PhiSampling,
    phi_centers: Vec<[usize; 4]>,
    cutoff: CutoffSpec,
}

impl Measurer {
    pub fn new(geom: &LatticeGeometry, morrey: MorreySampling, phi: PhiSampling) -> Result<Self> {
        morrey.validate()?;
        phi.validate(geom)?;
        let phi_centers = phi.center_sites(geom);
        Ok(Measurer { dims: geom.dims(), n_sites: geom.n_sites(), morrey, phi, phi_centers, cutoff: CutoffSpec })
    }

    pub fn with_defaults(geom: &LatticeGeometry) -> Self {
        Self::new(geom, MorreySampling::default(), PhiSampling::default()).expect("defaults are valid")
    }

    pub fn matches(&self, geom: &LatticeGeometry) -> bool {
        self.dims == geom.dims() && self.n_sites == geom.n_sites()
    }

    pub fn morrey(&self) -> &MorreySampling {
        &self.morrey
    }

    pub fn measure<G: GaugeMatrix>(
        &self,
        u: &GaugeField<G>,
        pre: &Preconditioner,
        t: f64,
        running_k: f64,
    ) -> Result<ObservableRecord> {
        let geom = u.geometry();
        let f = u.clover_field_strength();
        let e = split_energies(&f);
        let kappa = topological_charge(&f);
        let grad_sq = grad_norm_sq(u, pre);
        let (norm, norm_p) = pointwise_norms(&f);
        let mx = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        let morrey24 = morrey_norm(&norm, 2.0, 4.0, geom, &self.morrey)?;
        let mut phi_samples = Vec::new();
        for &c in &self.phi_centers {
            let x = geom.index(c);
            for &r in &self.phi.radii {
                phi_samples.push(PhiSample { center: c, r, phi: gaussian_phi(&norm, r, x, x, geom, &self.cutoff) });
            }
        }
        Ok(ObservableRecord {
            t,
            ym: e.ym,
            sd: e.sd,
            asd: e.asd,
            kappa,
            grad_sq,
            sup_f: mx(&norm),
            sup_fp: mx(&norm_p),
            morrey24,
            running_k,
            phi_samples,
        })
    }
}
