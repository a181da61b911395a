//! Wire geometry, magnetization grids, and stray-field evaluation.
//!
//! A wire is a cylinder of stacked material segments resting on the diamond
//! surface; the NV sensing plane is `z = 0` and the surface sits `standoff`
//! above it, so the cylinder axis runs at `z = standoff + diameter/2`.
//! Fields are computed by summing the point-dipole contributions of every
//! magnetized cell of a rasterized grid, which is exact magnetostatics for
//! the piecewise-uniform magnetization states modeled here.

mod mif;
mod ovf;

pub use mif::export_mif;
pub use ovf::{parse_ovf, write_ovf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::vec3::{self, Vec3};
use crate::MU_0_OVER_4PI;

/// Magnetic material constants. `k1` and `a_ex` are carried only for MIF
/// export; the field model uses `ms` alone.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    /// Saturation magnetization, A/m.
    pub ms: f64,
    /// Uniaxial anisotropy constant, J/m³.
    pub k1: f64,
    /// Exchange stiffness, J/m.
    pub a_ex: f64,
}

impl Material {
    pub fn new(name: &str, ms: f64, k1: f64, a_ex: f64) -> Self {
        Material {
            name: name.to_string(),
            ms,
            k1,
            a_ex,
        }
    }

    /// Electrodeposited-iron preset (BCC).
    pub fn iron() -> Self {
        Material::new("Fe", 1.2e6, 4.7e4, 2.5e-11)
    }

    /// Electrodeposited-cobalt preset (HCP). Note the table reuses the Fe
    /// anisotropy and exchange constants; supply measured values where
    /// those matter.
    pub fn cobalt() -> Self {
        Material::new("Co", 1.0e6, 4.7e4, 2.5e-11)
    }

    /// Nonmagnetic gold preset.
    pub fn gold() -> Self {
        Material::new("Au", 0.0, 0.0, 0.0)
    }
}

/// One axial segment of a wire.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub material: Material,
    /// Length along the wire axis, m.
    pub length: f64,
    /// Magnetization axis in the lab frame, unit vector.
    pub direction: Vec3,
    /// Normalized moment in [-1, 1]; the sign encodes reversal.
    pub scale: f64,
}

impl Segment {
    pub fn new(material: Material, length: f64, direction: Vec3, scale: f64) -> Self {
        Segment {
            material,
            length,
            direction: vec3::normalize(direction),
            scale,
        }
    }
}

/// A segmented cylindrical nanowire in the lab frame.
#[derive(Debug, Clone, PartialEq)]
pub struct WireSpec {
    /// Segments ordered from `origin` along `axis`.
    pub segments: Vec<Segment>,
    /// Wire diameter, m.
    pub diameter: f64,
    /// Tip of the first segment (a point on the cylinder axis), m.
    pub origin: Vec3,
    /// Long axis, unit vector in the sensing plane.
    pub axis: Vec3,
    /// Gap between the wire surface and the NV plane, m.
    pub standoff: f64,
}

impl WireSpec {
    /// Wire along +x, centered on (0, 0), resting on the diamond surface.
    pub fn along_x(segments: Vec<Segment>, diameter: f64, standoff: f64) -> Self {
        let total: f64 = segments.iter().map(|s| s.length).sum();
        WireSpec {
            segments,
            diameter,
            origin: [-total / 2.0, 0.0, standoff + diameter / 2.0],
            axis: [1.0, 0.0, 0.0],
            standoff,
        }
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::Geometry("wire has no segments".into()));
        }
        if !(self.diameter > 0.0) {
            return Err(Error::Geometry("wire diameter must be positive".into()));
        }
        if (vec3::norm(self.axis) - 1.0).abs() > 1e-9 {
            return Err(Error::Geometry("wire axis must be a unit vector".into()));
        }
        if self.axis[2].abs() > 1e-9 {
            return Err(Error::Geometry(
                "wire axis must lie in the sensing plane (z component = 0)".into(),
            ));
        }
        for (i, s) in self.segments.iter().enumerate() {
            if !(s.length > 0.0) {
                return Err(Error::Geometry(format!("segment {i} has non-positive length")));
            }
            if (vec3::norm(s.direction) - 1.0).abs() > 1e-12 {
                return Err(Error::Geometry(format!(
                    "segment {i} direction is not a unit vector"
                )));
            }
            if s.scale.abs() > 1.0 {
                return Err(Error::Geometry(format!(
                    "segment {i} scale {} outside [-1, 1]",
                    s.scale
                )));
            }
            if s.material.ms < 0.0 {
                return Err(Error::Geometry(format!(
                    "segment {i} material '{}' has negative Ms",
                    s.material.name
                )));
            }
        }
        Ok(())
    }
}

/// Regular 2D lattice of observation points in the plane `z = const`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice2D {
    pub x0: f64,
    pub y0: f64,
    pub pitch: f64,
    pub nx: usize,
    pub ny: usize,
    pub z: f64,
}

impl Lattice2D {
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.pitch
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.pitch
    }

    #[inline]
    pub fn position(&self, i: usize, j: usize) -> Vec3 {
        [self.x(i), self.y(j), self.z]
    }

    /// Single observation point, as a 1x1 lattice.
    pub fn single(p: Vec3) -> Self {
        Lattice2D {
            x0: p[0],
            y0: p[1],
            pitch: 1.0,
            nx: 1,
            ny: 1,
            z: p[2],
        }
    }
}

/// Regular 3D grid of magnetization vectors, A/m.
///
/// `origin` is the low corner of the bounding box; cell `(i, j, k)` is
/// centered at `origin + (i + 1/2, j + 1/2, k + 1/2) * cell_size`. Vectors
/// are stored x-fastest: `index = (k * ny + j) * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnetizationGrid {
    pub cell_size: f64,
    pub dims: [usize; 3],
    pub origin: Vec3,
    pub m_vectors: Vec<Vec3>,
}

impl MagnetizationGrid {
    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> Vec3 {
        [
            self.origin[0] + (i as f64 + 0.5) * self.cell_size,
            self.origin[1] + (j as f64 + 0.5) * self.cell_size,
            self.origin[2] + (k as f64 + 0.5) * self.cell_size,
        ]
    }

    /// Total magnetic moment, A·m².
    pub fn total_moment(&self) -> Vec3 {
        let vol = self.cell_size.powi(3);
        let mut m = [0.0; 3];
        for v in &self.m_vectors {
            m = vec3::add(m, *v);
        }
        vec3::scale(m, vol)
    }

    /// Number of cells with nonzero magnetization.
    pub fn magnetized_cells(&self) -> usize {
        self.m_vectors.iter().filter(|m| **m != [0.0; 3]).count()
    }

    /// All magnetization vectors multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        MagnetizationGrid {
            m_vectors: self.m_vectors.iter().map(|m| vec3::scale(*m, alpha)).collect(),
            ..self.clone()
        }
    }

    /// Cellwise sum of two grids on the same mesh.
    pub fn superpose(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims
            || self.origin != other.origin
            || self.cell_size != other.cell_size
        {
            return Err(Error::Geometry("grids are not on the same mesh".into()));
        }
        Ok(MagnetizationGrid {
            m_vectors: self
                .m_vectors
                .iter()
                .zip(&other.m_vectors)
                .map(|(a, b)| vec3::add(*a, *b))
                .collect(),
            ..self.clone()
        })
    }
}

/// Vector magnetic field (T) sampled on a 2D lattice of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap3D {
    pub lattice: Lattice2D,
    pub b_vectors: Vec<Vec3>,
}

/// Rasterize a wire onto a cubic grid by the cell-center-in-cylinder test.
///
/// The grid is aligned so that cell centers land on the axis line in the
/// cross-axis dimensions and half a cell off the tip along the axis; with
/// that choice segment boundaries never coincide with cell centers and the
/// two tips rasterize symmetrically.
pub fn rasterize(spec: &WireSpec, cell_size: f64) -> Result<MagnetizationGrid> {
    spec.validate()?;
    let limit = spec.diameter / 2.0;
    if !(cell_size > 0.0) || cell_size > limit {
        return Err(Error::InvalidDiscretization { cell_size, limit });
    }

    let h = cell_size;
    let axis = vec3::normalize(spec.axis);
    let total = spec.total_length();
    let p0 = spec.origin;
    let p1 = vec3::add(p0, vec3::scale(axis, total));
    let radius = spec.diameter / 2.0;

    let mut origin = [0.0; 3];
    let mut dims = [0usize; 3];
    for d in 0..3 {
        let extent = (1.0 - axis[d] * axis[d]).max(0.0).sqrt() * radius;
        let lo = p0[d].min(p1[d]) - extent;
        let hi = p0[d].max(p1[d]) + extent;
        let off = if axis[d].abs() >= 0.5 { 0.0 } else { 0.5 };
        let k = ((p0[d] - (lo - h)) / h - off).ceil().max(1.0);
        origin[d] = p0[d] - (k + off) * h;
        dims[d] = (((hi + h) - origin[d]) / h).ceil().max(1.0) as usize;
    }

    // Cumulative segment bounds with the per-segment magnetization.
    let mut bounds = Vec::with_capacity(spec.segments.len());
    let mut start = 0.0;
    for s in &spec.segments {
        let m = vec3::scale(s.direction, s.material.ms * s.scale);
        bounds.push((start, start + s.length, m));
        start += s.length;
    }

    let (nx, ny, nz) = (dims[0], dims[1], dims[2]);
    let mut m_vectors = vec![[0.0; 3]; nx * ny * nz];
    let r2max = radius * radius;
    let last = bounds.len() - 1;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let c = [
                    origin[0] + (i as f64 + 0.5) * h,
                    origin[1] + (j as f64 + 0.5) * h,
                    origin[2] + (k as f64 + 0.5) * h,
                ];
                let rel = vec3::sub(c, p0);
                let t = vec3::dot(rel, axis);
                if t < 0.0 || t > total {
                    continue;
                }
                let r2 = vec3::dot(rel, rel) - t * t;
                if r2 > r2max {
                    continue;
                }
                for (si, (s0, s1, m)) in bounds.iter().enumerate() {
                    let inside = t >= *s0 && (t < *s1 || (si == last && t <= *s1));
                    if inside {
                        m_vectors[(k * ny + j) * nx + i] = *m;
                        break;
                    }
                }
            }
        }
    }

    Ok(MagnetizationGrid {
        cell_size,
        dims,
        origin,
        m_vectors,
    })
}

/// Closed-form field of a point dipole with moment `moment` (A·m²) at
/// displacement `r` (m) from the dipole.
pub fn point_dipole_field(moment: Vec3, r: Vec3) -> Result<Vec3> {
    let r2 = vec3::dot(r, r);
    if r2 == 0.0 {
        return Err(Error::SingularEvaluation {
            x: r[0],
            y: r[1],
            z: r[2],
        });
    }
    let inv_r2 = 1.0 / r2;
    let inv_r3 = inv_r2 * inv_r2.sqrt();
    let a = 3.0 * vec3::dot(moment, r) * inv_r2;
    Ok([
        MU_0_OVER_4PI * (a * r[0] - moment[0]) * inv_r3,
        MU_0_OVER_4PI * (a * r[1] - moment[1]) * inv_r3,
        MU_0_OVER_4PI * (a * r[2] - moment[2]) * inv_r3,
    ])
}

/// Stray field of a magnetization grid at every lattice site, by dipole
/// summation over the magnetized cells.
///
/// The per-site sum always runs in cell index order, so the result is
/// bitwise reproducible for any parallel partition of the sites. A site
/// inside or touching a magnetized cell is a singular evaluation.
pub fn stray_field(grid: &MagnetizationGrid, sites: &Lattice2D) -> Result<FieldMap3D> {
    let vol = grid.cell_size.powi(3);
    let n = grid.len();
    let (nx, ny) = (grid.dims[0], grid.dims[1]);
    let mut cx = Vec::new();
    let mut cy = Vec::new();
    let mut cz = Vec::new();
    let mut mx = Vec::new();
    let mut my = Vec::new();
    let mut mz = Vec::new();
    for idx in 0..n {
        let m = grid.m_vectors[idx];
        if m == [0.0; 3] {
            continue;
        }
        let i = idx % nx;
        let j = (idx / nx) % ny;
        let k = idx / (nx * ny);
        let c = grid.cell_center(i, j, k);
        cx.push(c[0]);
        cy.push(c[1]);
        cz.push(c[2]);
        mx.push(m[0] * vol);
        my.push(m[1] * vol);
        mz.push(m[2] * vol);
    }

    let ncells = cx.len();
    let half = grid.cell_size / 2.0;
    // Any point with r² above this is strictly outside the cell cube.
    let guard_r2 = 3.0 * half * half;

    let b_vectors: Result<Vec<Vec3>> = (0..sites.len())
        .into_par_iter()
        .map(|s| {
            let i = s % sites.nx;
            let j = s / sites.nx;
            let p = sites.position(i, j);
            let (px, py, pz) = (p[0], p[1], p[2]);
            let (mut bx, mut by, mut bz) = (0.0f64, 0.0f64, 0.0f64);
            for c in 0..ncells {
                let dx = px - cx[c];
                let dy = py - cy[c];
                let dz = pz - cz[c];
                let r2 = dx * dx + dy * dy + dz * dz;
                if r2 <= guard_r2
                    && dx.abs() <= half
                    && dy.abs() <= half
                    && dz.abs() <= half
                {
                    return Err(Error::SingularEvaluation {
                        x: px,
                        y: py,
                        z: pz,
                    });
                }
                let inv_r2 = 1.0 / r2;
                let inv_r3 = inv_r2 * inv_r2.sqrt();
                let a = 3.0 * (mx[c] * dx + my[c] * dy + mz[c] * dz) * inv_r2;
                bx += (a * dx - mx[c]) * inv_r3;
                by += (a * dy - my[c]) * inv_r3;
                bz += (a * dz - mz[c]) * inv_r3;
            }
            Ok([
                MU_0_OVER_4PI * bx,
                MU_0_OVER_4PI * by,
                MU_0_OVER_4PI * bz,
            ])
        })
        .collect();

    Ok(FieldMap3D {
        lattice: sites.clone(),
        b_vectors: b_vectors?,
    })
}
