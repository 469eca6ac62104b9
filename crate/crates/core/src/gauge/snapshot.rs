//! Binary field snapshots.
//!
//! All integers and floats are little-endian.
//!
//! | offset | size | field                                                   |
//! |-------:|-----:|---------------------------------------------------------|
//! | 0      | 8    | magic `b"YMFIELD\0"`                                    |
//! | 8      | 4    | format version, `u32` (currently 1)                     |
//! | 12     | 1    | manifold kind, `u8` (0 = round S4 chart, 1 = flat torus) |
//! | 13     | 1    | rank r, `u8`                                            |
//! | 14     | 2    | reserved, zero                                          |
//! | 16     | 16   | dims, 4 x `u32`                                         |
//! | 32     | 8    | spacing, `f64`                                          |
//! | 40     | 8    | box half-width, `f64`                                   |
//! | 48     | 8    | sphere radius, `f64`                                    |
//! | 56     | 32   | grid offset, 4 x `f64`                                  |
//! | 88     | 1    | twist present, `u8`                                     |
//! | 89     | 7    | reserved, zero                                          |
//! | 96     | 24   | twist `n_{mu nu}` for planes 01,02,03,12,13,23, 6 x `i32` |
//! | 120    | ...  | links                                                   |
//!
//! Links follow in site-major, direction-minor order (link `(x, mu)` is record
//! `4 x + mu`, sites row-major with axis 0 slowest). Each link is its `r x r`
//! complex matrix in row-major order, every entry an `(re, im)` pair of `f64`.
//!
//! A checkpoint prepends a 40-byte header to a snapshot: magic
//! `b"YMCHKPT\0"`, version `u32`, status `u8` (0 running, 1 converged,
//! 2 blowup, 3 time cap), 3 reserved bytes, `t: f64`, `step_count: u64`,
//! `running_k: f64`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use super::field::{GaugeField, PLANES};
use super::matrix::GaugeMatrix;
use crate::error::{Error, Result};
use crate::geometry::{LatticeGeometry, ManifoldKind};
use crate::instantons::TwistSpec;

pub const MAGIC: &[u8; 8] = b"YMFIELD\0";
pub const CHECKPOINT_MAGIC: &[u8; 8] = b"YMCHKPT\0";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 120;

/// Geometry and twist metadata stored in a snapshot header.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotHeader {
    pub kind: ManifoldKind,
    pub rank: usize,
    pub dims: [usize; 4],
    pub spacing: f64,
    pub box_halfwidth: f64,
    pub sphere_radius: f64,
    pub grid_offset: [f64; 4],
    pub twist: Option<[i32; 6]>,
}

impl SnapshotHeader {
    pub fn build_geometry(&self) -> Result<LatticeGeometry> {
        match self.kind {
            ManifoldKind::RoundS4Chart => {
                if self.dims.iter().any(|&d| d != self.dims[0]) {
                    return Err(Error::Format("chart snapshots must be cubic".into()));
                }
                let g = LatticeGeometry::round_s4_chart_offset(
                    self.dims[0],
                    self.box_halfwidth,
                    self.sphere_radius,
                    self.grid_offset,
                )?;
                if g.spacing() != self.spacing {
                    return Err(Error::Format("chart spacing inconsistent with box".into()));
                }
                Ok(g)
            }
            ManifoldKind::FlatTorus => {
                if self.dims.iter().all(|&d| d >= 4) {
                    LatticeGeometry::flat_torus_dims(self.dims, self.spacing)
                } else {
                    LatticeGeometry::small_torus(self.dims, self.spacing)
                }
            }
        }
    }
}

/// Snapshot plus flow checkpoint metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointHeader {
    pub status: u8,
    pub t: f64,
    pub step_count: u64,
    pub running_k: f64,
}

fn header_of<G: GaugeMatrix>(u: &GaugeField<G>) -> SnapshotHeader {
    let g = u.geometry();
    SnapshotHeader {
        kind: g.kind(),
        rank: G::RANK,
        dims: g.dims(),
        spacing: g.spacing(),
        box_halfwidth: g.box_halfwidth(),
        sphere_radius: g.sphere_radius(),
        grid_offset: g.grid_offset(),
        twist: u.twist().map(|t| {
            let mut n = [0i32; 6];
            for (p, &(mu, nu)) in PLANES.iter().enumerate() {
                n[p] = t.get(mu, nu) as i32;
            }
            n
        }),
    }
}

pub fn write_snapshot<G: GaugeMatrix, W: Write>(u: &GaugeField<G>, w: &mut W) -> Result<()> {
    let h = header_of(u);
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u8(match h.kind {
        ManifoldKind::RoundS4Chart => 0,
        ManifoldKind::FlatTorus => 1,
    })?;
    w.write_u8(h.rank as u8)?;
    w.write_all(&[0u8; 2])?;
    for d in h.dims {
        w.write_u32::<LittleEndian>(d as u32)?;
    }
    w.write_f64::<LittleEndian>(h.spacing)?;
    w.write_f64::<LittleEndian>(h.box_halfwidth)?;
    w.write_f64::<LittleEndian>(h.sphere_radius)?;
    for o in h.grid_offset {
        w.write_f64::<LittleEndian>(o)?;
    }
    w.write_u8(h.twist.is_some() as u8)?;
    w.write_all(&[0u8; 7])?;
    for n in h.twist.unwrap_or([0; 6]) {
        w.write_i32::<LittleEndian>(n)?;
    }
    for link in u.links() {
        for c in link.entries() {
            w.write_f64::<LittleEndian>(c.re)?;
            w.write_f64::<LittleEndian>(c.im)?;
        }
    }
    Ok(())
}

pub fn read_header<R: Read>(r: &mut R) -> Result<SnapshotHeader> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad snapshot magic".into()));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported snapshot version {version}")));
    }
    let kind = match r.read_u8()? {
        0 => ManifoldKind::RoundS4Chart,
        1 => ManifoldKind::FlatTorus,
        k => return Err(Error::Format(format!("unknown manifold kind {k}"))),
    };
    let rank = r.read_u8()? as usize;
    let mut pad = [0u8; 2];
    r.read_exact(&mut pad)?;
    let mut dims = [0usize; 4];
    for d in dims.iter_mut() {
        *d = r.read_u32::<LittleEndian>()? as usize;
    }
    let spacing = r.read_f64::<LittleEndian>()?;
    let box_halfwidth = r.read_f64::<LittleEndian>()?;
    let sphere_radius = r.read_f64::<LittleEndian>()?;
    let mut grid_offset = [0.0; 4];
    for o in grid_offset.iter_mut() {
        *o = r.read_f64::<LittleEndian>()?;
    }
    let has_twist = r.read_u8()? != 0;
    let mut pad = [0u8; 7];
    r.read_exact(&mut pad)?;
    let mut twist = [0i32; 6];
    for n in twist.iter_mut() {
        *n = r.read_i32::<LittleEndian>()?;
    }
    Ok(SnapshotHeader {
        kind,
        rank,
        dims,
        spacing,
        box_halfwidth,
        sphere_radius,
        grid_offset,
        twist: has_twist.then_some(twist),
    })
}

pub fn read_snapshot<G: GaugeMatrix, R: Read>(r: &mut R) -> Result<GaugeField<G>> {
    let h = read_header(r)?;
    if h.rank != G::RANK {
        return Err(Error::Format(format!("snapshot has rank {}, expected {}", h.rank, G::RANK)));
    }
    let geom = Arc::new(h.build_geometry()?);
    let per = G::RANK * G::RANK;
    let mut entries = vec![Complex64::new(0.0, 0.0); per];
    let mut links = Vec::with_capacity(geom.n_links());
    for _ in 0..geom.n_links() {
        for e in entries.iter_mut() {
            let re = r.read_f64::<LittleEndian>()?;
            let im = r.read_f64::<LittleEndian>()?;
            *e = Complex64::new(re, im);
        }
        links.push(G::from_entries(&entries)?);
    }
    let mut u = GaugeField::from_links(geom, links)?;
    if let Some(n) = h.twist {
        let mut t = TwistSpec::zero(G::RANK);
        for (p, &(mu, nu)) in PLANES.iter().enumerate() {
            t.set(mu, nu, n[p] as i64);
        }
        u.set_twist(Some(t));
    }
    Ok(u)
}

pub fn save_snapshot<G: GaugeMatrix>(u: &GaugeField<G>, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    let mut w = BufWriter::new(file);
    write_snapshot(u, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_snapshot<G: GaugeMatrix>(path: &Path) -> Result<GaugeField<G>> {
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    read_snapshot(&mut BufReader::new(file))
}

/// Reads only the header, e.g. to pick the rank before loading.
pub fn peek_header(path: &Path) -> Result<SnapshotHeader> {
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    let mut r = BufReader::new(file);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic == CHECKPOINT_MAGIC {
        let mut rest = [0u8; 32];
        r.read_exact(&mut rest)?;
        return read_header(&mut r);
    }
    read_header(&mut (&magic[..]).chain(r))
}

pub fn write_checkpoint<G: GaugeMatrix, W: Write>(u: &GaugeField<G>, h: &CheckpointHeader, w: &mut W) -> Result<()> {
    w.write_all(CHECKPOINT_MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u8(h.status)?;
    w.write_all(&[0u8; 3])?;
    w.write_f64::<LittleEndian>(h.t)?;
    w.write_u64::<LittleEndian>(h.step_count)?;
    w.write_f64::<LittleEndian>(h.running_k)?;
    write_snapshot(u, w)
}

pub fn read_checkpoint<G: GaugeMatrix, R: Read>(r: &mut R) -> Result<(CheckpointHeader, GaugeField<G>)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(Error::Format("bad checkpoint magic".into()));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let status = r.read_u8()?;
    let mut pad = [0u8; 3];
    r.read_exact(&mut pad)?;
    let t = r.read_f64::<LittleEndian>()?;
    let step_count = r.read_u64::<LittleEndian>()?;
    let running_k = r.read_f64::<LittleEndian>()?;
    let u = read_snapshot(r)?;
    Ok((CheckpointHeader { status, t, step_count, running_k }, u))
}

/// Loads a field from either a plain snapshot or a checkpoint.
pub fn load_field<G: GaugeMatrix>(path: &Path) -> Result<GaugeField<G>> {
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    let mut r = BufReader::new(file);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    let mut chained = (&magic[..]).chain(r);
    if &magic == CHECKPOINT_MAGIC {
        Ok(read_checkpoint(&mut chained)?.1)
    } else {
        read_snapshot(&mut chained)
    }
}
