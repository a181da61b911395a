//! End-to-end forward model: per-site fields → resonance spectra →
//! PSF-averaged ODMR cube → per-pixel Gaussian fits.
//!
//! The spatial average is computed per pixel by gathering the kernel-
//! weighted resonance histogram of the surrounding NV sites and convolving
//! it with the Gaussian lineshape along frequency. Each site's resonance
//! splits linearly between the two adjacent frequency bins, which keeps
//! fitted centers exact to well below a line width while making the cube
//! cost independent of the per-site spectral evaluation. Pixels are
//! independent, so any parallel partition yields bitwise-identical output.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::magnetostatics::{
    rasterize, stray_field, FieldMap3D, Lattice2D, MagnetizationGrid, WireSpec,
};
use crate::nv::{
    exact_branch_resonances, nv_axes_lab, resonance_freqs, Branch, LineshapeMode, NvParams,
};
use crate::optics::{
    airy_psf, modified_psf, tirf_distribution, Kernel2D, OpticsParams, AIRY_TRUNCATION_FWHM,
};
use crate::vec3::{self, Vec3};

/// Scene and acquisition geometry for one simulated image.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    /// Field of view, m.
    pub fov_width: f64,
    pub fov_height: f64,
    /// Requested pixel pitch, m; rounded to a multiple of the NV site
    /// pitch by the pipeline.
    pub pixel_pitch: f64,
    /// Uniform bias field, T (lab frame).
    pub bias_field: Vec3,
    /// Which NV axis the run images, 1..=4.
    pub nv_axis_index: usize,
    /// Frequency grid step, Hz.
    pub frequency_step: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            fov_width: 16e-6,
            fov_height: 8e-6,
            pixel_pitch: 100e-9,
            bias_field: [0.0; 3],
            nv_axis_index: 1,
            frequency_step: 1e5,
        }
    }
}

impl SceneConfig {
    pub fn validate(&self, nv: &NvParams) -> Result<()> {
        let bad = |msg: String| Err(Error::Geometry(msg));
        if !(self.fov_width > 0.0 && self.fov_height > 0.0) {
            return bad("field of view must be positive".into());
        }
        if self.pixel_pitch < nv.site_pitch {
            return bad(format!(
                "pixel pitch {} m below the NV site pitch {} m",
                self.pixel_pitch, nv.site_pitch
            ));
        }
        if !(1..=4).contains(&self.nv_axis_index) {
            return bad(format!("NV axis index {} outside 1..=4", self.nv_axis_index));
        }
        if !(self.frequency_step > 0.0) {
            return bad("frequency step must be positive".into());
        }
        if !self.bias_field.iter().all(|b| b.is_finite()) {
            return bad("bias field must be finite".into());
        }
        Ok(())
    }

    /// Lab-frame unit vector of the imaged NV axis.
    pub fn axis(&self) -> Vec3 {
        nv_axes_lab()[self.nv_axis_index - 1]
    }

    /// Pixel pitch rounded to a whole number of site pitches.
    pub fn effective_pixel_pitch(&self, nv: &NvParams) -> f64 {
        self.sites_per_pixel(nv) as f64 * nv.site_pitch
    }

    pub(crate) fn sites_per_pixel(&self, nv: &NvParams) -> usize {
        (self.pixel_pitch / nv.site_pitch).round().max(1.0) as usize
    }

    pub(crate) fn pixel_lattice(&self, nv: &NvParams) -> Lattice2D {
        let pp = self.effective_pixel_pitch(nv);
        let npx = (self.fov_width / pp).round().max(1.0) as usize;
        let npy = (self.fov_height / pp).round().max(1.0) as usize;
        Lattice2D {
            x0: -((npx - 1) as f64) / 2.0 * pp,
            y0: -((npy - 1) as f64) / 2.0 * pp,
            pitch: pp,
            nx: npx,
            ny: npy,
            z: 0.0,
        }
    }
}

/// Simulated photoluminescence over (x, y, frequency).
#[derive(Debug, Clone, PartialEq)]
pub struct OdmrCube {
    pub lattice: Lattice2D,
    /// Frequency grid spanning `f_bias ± window_half`, Hz.
    pub f_grid: Vec<f64>,
    /// Bias-only resonance of the selected axis and branch, Hz.
    pub f_bias: f64,
    /// Pixel-major, frequency contiguous: `index = pixel * f_grid.len() + k`.
    pub intensities: Vec<f64>,
}

impl OdmrCube {
    pub fn spectrum(&self, pixel: usize) -> &[f64] {
        let nf = self.f_grid.len();
        &self.intensities[pixel * nf..(pixel + 1) * nf]
    }
}

/// Per-pixel fitted images: wire-only field along the imaged NV axis,
/// ODMR contrast, and linewidth. Pixels that failed to fit carry NaN and
/// `fit_ok = false`; exclude them from statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSet {
    pub lattice: Lattice2D,
    /// Bias-subtracted field along the axis, T.
    pub b_parallel: Vec<f64>,
    pub contrast: Vec<f64>,
    /// Fitted Gaussian sigma, Hz.
    pub linewidth: Vec<f64>,
    pub fit_ok: Vec<bool>,
}

impl MapSet {
    /// Largest |b| over valid pixels, T.
    pub fn max_abs_b(&self) -> f64 {
        self.b_parallel
            .iter()
            .zip(&self.fit_ok)
            .filter(|(_, ok)| **ok)
            .map(|(b, _)| b.abs())
            .fold(0.0, f64::max)
    }

    pub fn valid_count(&self) -> usize {
        self.fit_ok.iter().filter(|ok| **ok).count()
    }
}

/// Bundle of everything the forward model needs besides the wire.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagingConfig {
    pub scene: SceneConfig,
    pub nv: NvParams,
    pub optics: OpticsParams,
    /// Rasterization cell size, m.
    pub cell_size: f64,
}

impl Default for ImagingConfig {
    fn default() -> Self {
        ImagingConfig {
            scene: SceneConfig::default(),
            nv: NvParams::default(),
            optics: OpticsParams::default(),
            cell_size: 20e-9,
        }
    }
}

/// NV site lattice covering the field of view plus `margin` sites on every
/// side, at the site pitch, on the sensing plane z = 0. Pixel centers
/// coincide with sites: pixel (i, j) sits at site
/// `(margin + i*q, margin + j*q)` with `q` sites per pixel.
pub fn sample_nv_sites(scene: &SceneConfig, nv: &NvParams, margin: usize) -> Lattice2D {
    let pixels = scene.pixel_lattice(nv);
    let q = scene.sites_per_pixel(nv);
    Lattice2D {
        x0: pixels.x0 - margin as f64 * nv.site_pitch,
        y0: pixels.y0 - margin as f64 * nv.site_pitch,
        pitch: nv.site_pitch,
        nx: 2 * margin + (pixels.nx - 1) * q + 1,
        ny: 2 * margin + (pixels.ny - 1) * q + 1,
        z: 0.0,
    }
}

/// The modified point-spread function `P = A ⊗ M` sampled at the NV site
/// pitch, with the kernels truncated at `AIRY_TRUNCATION_FWHM × FWHM` and
/// `optics.tirf_radius` respectively.
pub fn build_modified_psf(nv: &NvParams, optics: &OpticsParams) -> Result<Kernel2D> {
    let at_site_pitch = OpticsParams {
        kernel_pitch: nv.site_pitch,
        ..optics.clone()
    };
    let airy_radius = (AIRY_TRUNCATION_FWHM * optics.psf_fwhm / nv.site_pitch).ceil() as usize;
    let tirf_radius = (optics.tirf_radius / nv.site_pitch).ceil() as usize;
    let a = airy_psf(&at_site_pitch, airy_radius);
    let m = tirf_distribution(&at_site_pitch, tirf_radius)?;
    modified_psf(&a, &m)
}

/// Resonance of the tracked branch for a total field, using the
/// perturbative expansion and falling back to exact diagonalization
/// wherever the expansion rejects.
pub fn branch_resonance(b: Vec3, axis: Vec3, nv: &NvParams) -> f64 {
    let pair = match resonance_freqs(b, axis, nv) {
        Ok(p) => p,
        Err(_) => exact_branch_resonances(b, axis, nv),
    };
    match nv.branch {
        Branch::Minus => pair.0,
        Branch::Plus => pair.1,
    }
}

/// Forward model from a magnetization grid to the windowed ODMR cube.
pub fn forward_odmr(
    grid: &MagnetizationGrid,
    scene: &SceneConfig,
    nv: &NvParams,
    optics: &OpticsParams,
) -> Result<OdmrCube> {
    nv.validate()?;
    optics.validate()?;
    scene.validate(nv)?;

    let kernel = build_modified_psf(nv, optics)?;
    let sites = sample_nv_sites(scene, nv, kernel.radius());
    let field = stray_field(grid, &sites)?;
    forward_odmr_with_field(&field, scene, nv, &kernel)
}

/// Forward model given a precomputed site field map (the expensive part),
/// for reuse across axes or branches. The field map lattice must match
/// `sample_nv_sites(scene, nv, kernel.radius())`.
pub fn forward_odmr_with_field(
    field: &FieldMap3D,
    scene: &SceneConfig,
    nv: &NvParams,
    kernel: &Kernel2D,
) -> Result<OdmrCube> {
    let axis = scene.axis();
    let pixels = scene.pixel_lattice(nv);
    let q = scene.sites_per_pixel(nv);
    let margin = kernel.radius();
    let sites = &field.lattice;
    {
        let want = sample_nv_sites(scene, nv, margin);
        if sites.nx != want.nx || sites.ny != want.ny {
            return Err(Error::Geometry(format!(
                "site lattice {}x{} does not match scene plus kernel margin {}x{}",
                sites.nx, sites.ny, want.nx, want.ny
            )));
        }
    }

    let f_bias = branch_resonance(scene.bias_field, axis, nv);
    let step = scene.frequency_step;
    let nf = (2.0 * nv.window_half / step).round() as usize + 1;
    let f0 = f_bias - nv.window_half;
    let f_grid: Vec<f64> = (0..nf).map(|k| f0 + k as f64 * step).collect();

    // Histogram pad: resonances up to 6 sigma outside the window still
    // leak tail into it.
    let sigma_bins = nv.linewidth_sigma / step;
    let guard = (6.0 * sigma_bins).ceil() as usize;
    let hist_len = nf + 2 * guard;

    // Per-site resonance as a fractional histogram coordinate; NaN flags
    // sites whose resonance cannot touch the window.
    let site_u: Vec<f64> = field
        .b_vectors
        .par_iter()
        .map(|b_wire| {
            let total = vec3::add(*b_wire, scene.bias_field);
            let f_site = branch_resonance(total, axis, nv);
            let u = (f_site - f0) / step + guard as f64;
            if (0.0..=(hist_len - 1) as f64).contains(&u) {
                u
            } else {
                f64::NAN
            }
        })
        .collect();

    // Gaussian lineshape sampled at whole bin offsets; negligible beyond
    // the table.
    let gmax = (8.6 * sigma_bins).ceil() as usize;
    let inv = 1.0 / (2.0 * nv.linewidth_sigma * nv.linewidth_sigma);
    let gtab: Vec<f64> = (0..=gmax)
        .map(|k| (-(k as f64 * step).powi(2) * inv).exp())
        .collect();

    let side = kernel.side;
    let n_pixels = pixels.len();
    let intensities: Vec<f64> = (0..n_pixels)
        .into_par_iter()
        .map_init(
            || vec![0.0f64; hist_len],
            |hist, pixel| {
                let py = pixel / pixels.nx;
                let px = pixel % pixels.nx;
                // Low corner of the kernel support in site indices; the
                // pixel center sits at site (margin + px*q, margin + py*q).
                let sx0 = px * q;
                let sy0 = py * q;
                hist.fill(0.0);
                let mut jlo = usize::MAX;
                let mut jhi = 0usize;
                for kj in 0..side {
                    let row0 = (sy0 + kj) * sites.nx + sx0;
                    let urow = &site_u[row0..row0 + side];
                    let krow = &kernel.values[kj * side..(kj + 1) * side];
                    for (u, w) in urow.iter().zip(krow) {
                        if !u.is_finite() {
                            continue;
                        }
                        let j0f = u.floor();
                        let frac = u - j0f;
                        let j = j0f as usize;
                        if j >= hist_len - 1 {
                            hist[hist_len - 1] += w;
                            jlo = jlo.min(hist_len - 1);
                            jhi = hist_len - 1;
                            continue;
                        }
                        hist[j] += w * (1.0 - frac);
                        hist[j + 1] += w * frac;
                        jlo = jlo.min(j);
                        jhi = jhi.max(j + 1);
                    }
                }
                let mut out = Vec::with_capacity(nf);
                for k in 0..nf {
                    let c = k + guard;
                    let mut acc = 0.0;
                    if jlo != usize::MAX {
                        let lo = jlo.max(c.saturating_sub(gmax));
                        let hi = jhi.min(c + gmax);
                        let mut j = lo;
                        while j <= hi {
                            acc += hist[j] * gtab[c.abs_diff(j)];
                            j += 1;
                        }
                    }
                    // Rounding in the kernel normalization can leave the
                    // absorbed fraction a few ulp outside [0, 1].
                    let acc = acc.clamp(0.0, 1.0);
                    out.push(match nv.lineshape {
                        LineshapeMode::AsPrinted => nv.contrast * (1.0 - acc),
                        LineshapeMode::ConventionalDip => 1.0 - nv.contrast * acc,
                    });
                }
                out
            },
        )
        .flatten()
        .collect();

    Ok(OdmrCube {
        lattice: pixels,
        f_grid,
        f_bias,
        intensities,
    })
}

/// Minimum modulation depth, as a fraction of the contrast, below which a
/// pixel is declared signal-free.
pub const MIN_MODULATION_FRACTION: f64 = 0.1;

/// Gauss-Newton convergence threshold on the center step, Hz.
pub const FIT_CENTER_TOLERANCE: f64 = 1e3;

/// Fit the Gaussian resonance in every pixel of a cube and convert centers
/// to bias-subtracted field along the imaged axis:
/// `b = branch_sign * (f_fit - f_bias) / gamma`.
///
/// A pixel is valid only when its modulation depth reaches 10% of the
/// contrast and the fitted center lies inside the detection window;
/// centers beyond the window are unobservable extrapolations of partially
/// visible resonances and carry the invalid sentinel instead.
pub fn fit_zeeman_map(cube: &OdmrCube, nv: &NvParams) -> Result<MapSet> {
    let nf = cube.f_grid.len();
    if nf < 20 {
        return Err(Error::Geometry(format!(
            "cube has {nf} frequency samples, need at least 20"
        )));
    }
    let n = cube.lattice.len();
    let sign = nv.branch.sign();

    let max_offset = nv.window_half + FIT_MAX_CENTER_OFFSET_SIGMA * nv.linewidth_sigma;
    let results: Vec<(f64, f64, f64, bool)> = (0..n)
        .into_par_iter()
        .map(|pixel| {
            let spec = cube.spectrum(pixel);
            match fit_pixel(&cube.f_grid, spec, nv) {
                Some((f_fit, c_fit, w_fit)) if (f_fit - cube.f_bias).abs() <= max_offset => {
                    let b = sign * (f_fit - cube.f_bias) / nv.gamma;
                    (b, c_fit, w_fit, true)
                }
                _ => (f64::NAN, f64::NAN, f64::NAN, false),
            }
        })
        .collect();

    let mut map = MapSet {
        lattice: cube.lattice.clone(),
        b_parallel: Vec::with_capacity(n),
        contrast: Vec::with_capacity(n),
        linewidth: Vec::with_capacity(n),
        fit_ok: Vec::with_capacity(n),
    };
    for (b, c, w, ok) in results {
        map.b_parallel.push(b);
        map.contrast.push(c);
        map.linewidth.push(w);
        map.fit_ok.push(ok);
    }
    Ok(map)
}

/// Per-pixel Gaussian resonance fit. Initialization at the spectral
/// extremum (ties toward lower frequency), Gauss-Newton refinement, at
/// most 50 iterations, converged when the center step drops below 1 kHz.
fn fit_pixel(f_grid: &[f64], spec: &[f64], nv: &NvParams) -> Option<(f64, f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut imin = 0usize;
    for (i, &v) in spec.iter().enumerate() {
        if v < lo {
            lo = v;
            imin = i;
        }
        hi = hi.max(v);
    }
    if hi - lo < MIN_MODULATION_FRACTION * nv.contrast {
        return None;
    }

    let mut f0 = f_grid[imin];
    let mut c = match nv.lineshape {
        LineshapeMode::AsPrinted => hi,
        LineshapeMode::ConventionalDip => hi - lo,
    };
    let mut w = nv.linewidth_sigma;

    for _ in 0..50 {
        let mut jtj = [[0.0f64; 3]; 3];
        let mut jtr = [0.0f64; 3];
        let inv_w2 = 1.0 / (w * w);
        for (f, y) in f_grid.iter().zip(spec) {
            let df = f - f0;
            let e = (-0.5 * df * df * inv_w2).exp();
            let (model, dc) = match nv.lineshape {
                LineshapeMode::AsPrinted => (c * (1.0 - e), 1.0 - e),
                LineshapeMode::ConventionalDip => (1.0 - c * e, -e),
            };
            let dfreq = -c * e * df * inv_w2;
            let dw = -c * e * df * df * inv_w2 / w;
            let jac = [dfreq, dc, dw];
            let r = y - model;
            for a in 0..3 {
                jtr[a] += jac[a] * r;
                for b in 0..3 {
                    jtj[a][b] += jac[a] * jac[b];
                }
            }
        }
        let delta = solve3(&jtj, &jtr)?;
        f0 += delta[0];
        c += delta[1];
        w = (w + delta[2]).abs().max(1e-3 * nv.linewidth_sigma);
        if delta[0].abs() < FIT_CENTER_TOLERANCE {
            break;
        }
    }

    if !(f0.is_finite() && c.is_finite() && w.is_finite()) {
        return None;
    }
    Some((f0, c, w.abs()))
}

/// 3x3 linear solve with partial pivoting; None when singular.
fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = *a;
    let mut rhs = *b;
    for col in 0..3 {
        let mut piv = col;
        for row in col + 1..3 {
            if m[row][col].abs() > m[piv][col].abs() {
                piv = row;
            }
        }
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let mut s = rhs[i];
        for k in i + 1..3 {
            s -= m[i][k] * x[k];
        }
        x[i] = s / m[i][i];
    }
    Some(x)
}

/// Rasterize a wire and render its fitted image.
pub fn simulate_image(spec: &WireSpec, cfg: &ImagingConfig) -> Result<MapSet> {
    let grid = rasterize(spec, cfg.cell_size)?;
    simulate_image_from_grid(&grid, cfg)
}

/// Render the fitted image of an existing magnetization grid.
pub fn simulate_image_from_grid(grid: &MagnetizationGrid, cfg: &ImagingConfig) -> Result<MapSet> {
    let cube = forward_odmr(grid, &cfg.scene, &cfg.nv, &cfg.optics)?;
    fit_zeeman_map(&cube, &cfg.nv)
}
