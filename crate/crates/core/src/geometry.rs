//! Discretized 4-manifolds: a stereographic chart of the round 4-sphere and a
//! flat periodic 4-torus.
//!
//! Sites are stored in row-major order with axis 0 slowest. Links are stored
//! per site in the `+mu` direction, so link `(site, mu)` lives at index
//! `4 * site + mu` of every per-link array.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};

pub const DIM: usize = 4;

/// Sentinel for a missing neighbour on a non-periodic chart.
const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldKind {
    RoundS4Chart,
    FlatTorus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    FrozenDirichlet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGeometry {
    kind: ManifoldKind,
    dims: [usize; DIM],
    spacing: f64,
    box_halfwidth: f64,
    sphere_radius: f64,
    grid_offset: [f64; DIM],
    boundary: Boundary,
    rho1: f64,
    conformal: Vec<f64>,
    volume: Vec<f64>,
    fwd: Vec<[u32; DIM]>,
    bwd: Vec<[u32; DIM]>,
    frozen: Vec<bool>,
    /// Inverse stereographic images on the unit sphere (chart only).
    sphere_points: Vec<[f64; 5]>,
}

impl LatticeGeometry {
    /// Uniform grid on `[-L, L]^4` (shifted by `grid_offset`) modelling the round
    /// sphere of radius `sphere_radius` through stereographic coordinates.
    pub fn round_s4_chart(n_per_axis: usize, box_halfwidth: f64, sphere_radius: f64) -> Result<Self> {
        Self::round_s4_chart_offset(n_per_axis, box_halfwidth, sphere_radius, [0.0; DIM])
    }

    pub fn round_s4_chart_offset(
        n_per_axis: usize,
        box_halfwidth: f64,
        sphere_radius: f64,
        grid_offset: [f64; DIM],
    ) -> Result<Self> {
        if n_per_axis < 4 {
            return Err(config_err(format!("n_per_axis must be >= 4, got {n_per_axis}")));
        }
        if !(box_halfwidth > 0.0 && box_halfwidth.is_finite()) {
            return Err(config_err(format!("box_halfwidth must be positive, got {box_halfwidth}")));
        }
        if !(sphere_radius > 0.0 && sphere_radius.is_finite()) {
            return Err(config_err(format!("sphere_radius must be positive, got {sphere_radius}")));
        }
        if grid_offset.iter().any(|o| !o.is_finite()) {
            return Err(config_err("grid_offset must be finite"));
        }
        let spacing = 2.0 * box_halfwidth / (n_per_axis as f64 - 1.0);
        let mut geom = Self::skeleton(
            ManifoldKind::RoundS4Chart,
            [n_per_axis; DIM],
            spacing,
            box_halfwidth,
            sphere_radius,
            grid_offset,
            Boundary::FrozenDirichlet,
            (PI * sphere_radius).min(1.0),
        );
        geom.populate();
        Ok(geom)
    }

    /// Periodic cubic torus with `n_per_axis` sites of spacing `spacing` per axis.
    pub fn flat_torus(n_per_axis: usize, spacing: f64) -> Result<Self> {
        Self::flat_torus_dims([n_per_axis; DIM], spacing)
    }

    pub fn flat_torus_dims(dims: [usize; DIM], spacing: f64) -> Result<Self> {
        if let Some(&n) = dims.iter().find(|&&n| n < 2) {
            return Err(config_err(format!("torus extent must be >= 2 per axis, got {n}")));
        }
        if dims.iter().all(|&n| n < 4) {
            return Err(config_err("n_per_axis must be >= 4"));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(config_err(format!("spacing must be positive, got {spacing}")));
        }
        let shortest = dims.iter().copied().min().unwrap_or(0) as f64 * spacing;
        let mut geom = Self::skeleton(
            ManifoldKind::FlatTorus,
            dims,
            spacing,
            0.0,
            1.0,
            [0.0; DIM],
            Boundary::Periodic,
            (0.5 * shortest).min(1.0),
        );
        geom.populate();
        Ok(geom)
    }

    /// Small periodic lattice used by brute-force oracle tests (extents may be 2).
    pub fn small_torus(dims: [usize; DIM], spacing: f64) -> Result<Self> {
        if dims.iter().any(|&n| n < 2) || !(spacing > 0.0) {
            return Err(config_err("small torus needs extents >= 2 and positive spacing"));
        }
        let shortest = dims.iter().copied().min().unwrap_or(0) as f64 * spacing;
        let mut geom = Self::skeleton(
            ManifoldKind::FlatTorus,
            dims,
            spacing,
            0.0,
            1.0,
            [0.0; DIM],
            Boundary::Periodic,
            (0.5 * shortest).min(1.0),
        );
        geom.populate();
        Ok(geom)
    }

    #[allow(clippy::too_many_arguments)]
    fn skeleton(
        kind: ManifoldKind,
        dims: [usize; DIM],
        spacing: f64,
        box_halfwidth: f64,
        sphere_radius: f64,
        grid_offset: [f64; DIM],
        boundary: Boundary,
        rho1: f64,
    ) -> Self {
        LatticeGeometry {
            kind,
            dims,
            spacing,
            box_halfwidth,
            sphere_radius,
            grid_offset,
            boundary,
            rho1,
            conformal: Vec::new(),
            volume: Vec::new(),
            fwd: Vec::new(),
            bwd: Vec::new(),
            frozen: Vec::new(),
            sphere_points: Vec::new(),
        }
    }

    fn populate(&mut self) {
        let n = self.n_sites();
        let a4 = self.spacing.powi(4);
        self.conformal = (0..n).map(|s| self.conformal_at(self.position(s))).collect();
        self.volume = self.conformal.iter().map(|l| l.powi(4) * a4).collect();
        self.fwd = vec![[NONE; DIM]; n];
        self.bwd = vec![[NONE; DIM]; n];
        let periodic = self.boundary == Boundary::Periodic;
        for s in 0..n {
            let c = self.coords(s);
            for mu in 0..DIM {
                let mut up = c;
                let mut down = c;
                if c[mu] + 1 < self.dims[mu] {
                    up[mu] += 1;
                    self.fwd[s][mu] = self.index(up) as u32;
                } else if periodic {
                    up[mu] = 0;
                    self.fwd[s][mu] = self.index(up) as u32;
                }
                if c[mu] > 0 {
                    down[mu] -= 1;
                    self.bwd[s][mu] = self.index(down) as u32;
                } else if periodic {
                    down[mu] = self.dims[mu] - 1;
                    self.bwd[s][mu] = self.index(down) as u32;
                }
            }
        }
        self.frozen = vec![false; 4 * n];
        if !periodic {
            for s in 0..n {
                for mu in 0..DIM {
                    let frozen = match self.neighbor_fwd(s, mu) {
                        None => true,
                        Some(t) => self.is_boundary_site(s) || self.is_boundary_site(t),
                    };
                    self.frozen[4 * s + mu] = frozen;
                }
            }
        }
        if self.kind == ManifoldKind::RoundS4Chart {
            self.sphere_points = (0..n).map(|s| self.sphere_point(self.position(s))).collect();
        }
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn dims(&self) -> [usize; DIM] {
        self.dims
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn box_halfwidth(&self) -> f64 {
        self.box_halfwidth
    }

    pub fn sphere_radius(&self) -> f64 {
        self.sphere_radius
    }

    pub fn grid_offset(&self) -> [f64; DIM] {
        self.grid_offset
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn rho1(&self) -> f64 {
        self.rho1
    }

    pub fn n_sites(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn n_links(&self) -> usize {
        4 * self.n_sites()
    }

    #[inline]
    pub fn coords(&self, site: usize) -> [usize; DIM] {
        let mut rest = site;
        let mut c = [0; DIM];
        for mu in (0..DIM).rev() {
            c[mu] = rest % self.dims[mu];
            rest /= self.dims[mu];
        }
        c
    }

    #[inline]
    pub fn index(&self, c: [usize; DIM]) -> usize {
        ((c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2]) * self.dims[3] + c[3]
    }

    /// Chart (or torus) coordinates of a site.
    pub fn position(&self, site: usize) -> [f64; DIM] {
        let c = self.coords(site);
        let origin = match self.kind {
            ManifoldKind::RoundS4Chart => -self.box_halfwidth,
            ManifoldKind::FlatTorus => 0.0,
        };
        let mut x = [0.0; DIM];
        for mu in 0..DIM {
            x[mu] = origin + c[mu] as f64 * self.spacing + self.grid_offset[mu];
        }
        x
    }

    /// Midpoint of the link leaving `site` in direction `mu`.
    pub fn link_midpoint(&self, site: usize, mu: usize) -> [f64; DIM] {
        let mut x = self.position(site);
        x[mu] += 0.5 * self.spacing;
        x
    }

    #[inline]
    pub fn neighbor_fwd(&self, site: usize, mu: usize) -> Option<usize> {
        let t = self.fwd[site][mu];
        (t != NONE).then_some(t as usize)
    }

    #[inline]
    pub fn neighbor_bwd(&self, site: usize, mu: usize) -> Option<usize> {
        let t = self.bwd[site][mu];
        (t != NONE).then_some(t as usize)
    }

    pub fn is_boundary_site(&self, site: usize) -> bool {
        if self.boundary == Boundary::Periodic {
            return false;
        }
        let c = self.coords(site);
        (0..DIM).any(|mu| c[mu] == 0 || c[mu] + 1 == self.dims[mu])
    }

    /// Whether link `(site, mu)` is held at its construction value.
    #[inline]
    pub fn is_frozen(&self, site: usize, mu: usize) -> bool {
        self.frozen[4 * site + mu]
    }

    /// Conformal factor at an arbitrary chart point.
    pub fn conformal_at(&self, x: [f64; DIM]) -> f64 {
        match self.kind {
            ManifoldKind::FlatTorus => 1.0,
            ManifoldKind::RoundS4Chart => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                let rs2 = self.sphere_radius * self.sphere_radius;
                2.0 * rs2 / (rs2 + r2)
            }
        }
    }

    #[inline]
    pub fn conformal_factor(&self, site: usize) -> f64 {
        self.conformal[site]
    }

    pub fn conformal_factors(&self) -> &[f64] {
        &self.conformal
    }

    #[inline]
    pub fn site_volume(&self, site: usize) -> f64 {
        self.volume[site]
    }

    pub fn site_volumes(&self) -> &[f64] {
        &self.volume
    }

    pub fn total_volume(&self) -> f64 {
        self.volume.iter().sum()
    }

    /// Flat coordinate volume `a^4` carried by every site.
    pub fn flat_cell_volume(&self) -> f64 {
        self.spacing.powi(4)
    }

    /// Periods of the torus (chart: extent of the box).
    pub fn periods(&self) -> [f64; DIM] {
        let mut p = [0.0; DIM];
        for mu in 0..DIM {
            p[mu] = self.dims[mu] as f64 * self.spacing;
        }
        p
    }

    /// Inverse stereographic projection of a chart point onto the unit sphere in R^5.
    pub fn sphere_point(&self, x: [f64; DIM]) -> [f64; 5] {
        let r = self.sphere_radius;
        let x2: f64 = x.iter().map(|v| v * v).sum();
        let den = x2 + r * r;
        [
            2.0 * r * x[0] / den,
            2.0 * r * x[1] / den,
            2.0 * r * x[2] / den,
            2.0 * r * x[3] / den,
            (x2 - r * r) / den,
        ]
    }

    /// Embedded unit-sphere images of the sites (empty on the torus).
    pub fn unit_sphere_points(&self) -> &[[f64; 5]] {
        &self.sphere_points
    }

    /// Riemannian distance between two sites.
    pub fn geodesic_distance(&self, x: usize, y: usize) -> f64 {
        match self.kind {
            ManifoldKind::FlatTorus => self.torus_distance(self.coords(x), self.coords(y)),
            ManifoldKind::RoundS4Chart => {
                chord_to_arc(&self.sphere_points[x], &self.sphere_points[y], self.sphere_radius)
            }
        }
    }

    /// Riemannian distance between two arbitrary chart points (torus: minimum image).
    pub fn point_distance(&self, x: [f64; DIM], y: [f64; DIM]) -> f64 {
        match self.kind {
            ManifoldKind::FlatTorus => {
                let p = self.periods();
                let mut s = 0.0;
                for mu in 0..DIM {
                    let d = (x[mu] - y[mu]).rem_euclid(p[mu]);
                    let d = d.min(p[mu] - d);
                    s += d * d;
                }
                s.sqrt()
            }
            ManifoldKind::RoundS4Chart => {
                chord_to_arc(&self.sphere_point(x), &self.sphere_point(y), self.sphere_radius)
            }
        }
    }

    fn torus_distance(&self, cx: [usize; DIM], cy: [usize; DIM]) -> f64 {
        let mut s = 0.0;
        for mu in 0..DIM {
            let n = self.dims[mu];
            let d = cx[mu].abs_diff(cy[mu]);
            let d = d.min(n - d) as f64 * self.spacing;
            s += d * d;
        }
        s.sqrt()
    }

    /// Sites within geodesic distance `r` of `center`, paired with their
    /// distances. The order is deterministic (site order on the chart, box
    /// order on the torus).
    pub fn ball(&self, center: usize, r: f64) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        match self.kind {
            ManifoldKind::RoundS4Chart => {
                let half = r / (2.0 * self.sphere_radius);
                let chord_max2 = if half >= std::f64::consts::FRAC_PI_2 { f64::INFINITY } else { (2.0 * half.sin()).powi(2) };
                let p = &self.sphere_points[center];
                for (s, q) in self.sphere_points.iter().enumerate() {
                    let c2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                    if c2 <= chord_max2 * (1.0 + 1e-12) {
                        let d = chord_to_arc(p, q, self.sphere_radius);
                        if d <= r {
                            out.push((s, d));
                        }
                    }
                }
            }
            ManifoldKind::FlatTorus => {
                let c = self.coords(center);
                let axes: Vec<Vec<usize>> = (0..DIM)
                    .map(|mu| {
                        let n = self.dims[mu];
                        let m = (r / self.spacing).floor() as usize;
                        if 2 * m + 1 >= n {
                            (0..n).collect()
                        } else {
                            (0..=2 * m).map(|k| (c[mu] + n + k - m) % n).collect()
                        }
                    })
                    .collect();
                for &i0 in &axes[0] {
                    for &i1 in &axes[1] {
                        for &i2 in &axes[2] {
                            for &i3 in &axes[3] {
                                let y = [i0, i1, i2, i3];
                                let d = self.torus_distance(c, y);
                                if d <= r {
                                    out.push((self.index(y), d));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Smallest geodesic length of a lattice step anywhere on the lattice.
    pub fn min_geodesic_spacing(&self) -> f64 {
        let lmin = self.conformal.iter().copied().fold(f64::INFINITY, f64::min);
        lmin * self.spacing
    }

    pub fn same_lattice(&self, other: &LatticeGeometry) -> bool {
        self.kind == other.kind
            && self.dims == other.dims
            && self.spacing == other.spacing
            && self.box_halfwidth == other.box_halfwidth
            && self.sphere_radius == other.sphere_radius
            && self.grid_offset == other.grid_offset
    }
}

/// Great-circle length from the chord between two unit vectors.
fn chord_to_arc(p: &[f64; 5], q: &[f64; 5], radius: f64) -> f64 {
    let chord2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
    let half = (0.5 * chord2.sqrt()).min(1.0);
    2.0 * radius * half.asin()
}
