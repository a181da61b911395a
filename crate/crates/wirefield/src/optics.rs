//! Point-spread kernels: the Airy disk, the refraction-driven photon
//! redistribution of the TIRF collection path, and their convolution.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Truncation radius of the Airy kernel, in units of its FWHM.
pub const AIRY_TRUNCATION_FWHM: f64 = 3.0;

/// Which refractive index goes inside the arcsine of the shift formula.
///
/// `AsPrinted` uses `arcsin((n_d/n_g) sin θ_d)`, undefined past the total
/// internal reflection bound; `Swapped` uses `arcsin((n_g/n_d) sin θ_d)`,
/// defined for all angles, and exists for sensitivity studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexOrder {
    AsPrinted,
    Swapped,
}

/// How each sampled emission angle is weighted when building the
/// photon-redistribution kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularWeighting {
    /// Isotropic emitter: weight ∝ sin θ per uniform θ step.
    SolidAngle,
    /// Equal weight per θ sample.
    UniformTheta,
}

/// Optical model parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticsParams {
    /// Airy PSF full width at half maximum, m.
    pub psf_fwhm: f64,
    /// Refractive index of diamond.
    pub n_diamond: f64,
    /// Refractive index of glass.
    pub n_glass: f64,
    /// Diamond plate thickness, m.
    pub plate_thickness: f64,
    /// Upper bound on the sampled emission angle, rad.
    pub theta_max: f64,
    /// Numerical aperture of the objective (metadata).
    pub numerical_aperture: f64,
    /// Kernel sampling pitch, m.
    pub kernel_pitch: f64,
    pub index_order: IndexOrder,
    pub angular_weighting: AngularWeighting,
    /// Truncation radius for the redistribution kernel when built by the
    /// imaging pipeline, m. The shift formula diverges at the total
    /// internal reflection bound, so some truncation is unavoidable.
    pub tirf_radius: f64,
}

impl Default for OpticsParams {
    fn default() -> Self {
        OpticsParams {
            psf_fwhm: 1e-6,
            n_diamond: 2.42,
            n_glass: 1.52,
            plate_thickness: 100e-6,
            theta_max: 79f64.to_radians(),
            numerical_aperture: 1.49,
            kernel_pitch: 100e-9,
            index_order: IndexOrder::AsPrinted,
            angular_weighting: AngularWeighting::SolidAngle,
            tirf_radius: 1e-6,
        }
    }
}

impl OpticsParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::OpticsConfig(msg.into()));
        if !(self.psf_fwhm > 0.0) {
            return bad("PSF FWHM must be positive");
        }
        if !(self.n_glass > 0.0 && self.n_diamond > self.n_glass) {
            return bad("need 0 < n_glass < n_diamond");
        }
        if !(self.theta_max > 0.0 && self.theta_max < std::f64::consts::FRAC_PI_2) {
            return bad("theta_max must lie in (0, 90) degrees");
        }
        if !(self.kernel_pitch > 0.0) {
            return bad("kernel pitch must be positive");
        }
        if !(self.plate_thickness > 0.0) {
            return bad("plate thickness must be positive");
        }
        if !(self.tirf_radius > 0.0) {
            return bad("tirf radius must be positive");
        }
        Ok(())
    }
}

/// Square 2D convolution kernel with unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel2D {
    pub pitch: f64,
    /// Odd side length.
    pub side: usize,
    /// Row-major values, `values.len() == side * side`.
    pub values: Vec<f64>,
}

impl Kernel2D {
    pub fn radius(&self) -> usize {
        (self.side - 1) / 2
    }

    /// Value at integer offset `(di, dj)` from the center.
    pub fn value(&self, di: isize, dj: isize) -> f64 {
        let r = self.radius() as isize;
        if di.abs() > r || dj.abs() > r {
            return 0.0;
        }
        self.values[((dj + r) * self.side as isize + (di + r)) as usize]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    fn normalize(&mut self) {
        let s = self.sum();
        if s > 0.0 {
            for v in self.values.iter_mut() {
                *v /= s;
            }
        }
    }

    /// 1x1 identity kernel.
    pub fn delta(pitch: f64) -> Self {
        Kernel2D {
            pitch,
            side: 1,
            values: vec![1.0],
        }
    }

    /// Second moment Σ w·r² about the center, m².
    pub fn second_moment(&self) -> f64 {
        let r = self.radius() as isize;
        let mut acc = 0.0;
        for dj in -r..=r {
            for di in -r..=r {
                let rr = ((di * di + dj * dj) as f64) * self.pitch * self.pitch;
                acc += self.value(di, dj) * rr;
            }
        }
        acc
    }
}

/// Bessel function of the first kind, order one. Rational approximation
/// below |x| = 8 and asymptotic form beyond; absolute error ≲ 1e-7.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 8.0 {
        let y = x * x;
        let p = x
            * (72362614232.0
                + y * (-7895059235.0
                    + y * (242396853.1
                        + y * (-2972611.439 + y * (15704.48260 + y * (-30.16036606))))));
        let q = 144725228442.0
            + y * (2300535178.0
                + y * (18583304.74 + y * (99447.43394 + y * (376.9991397 + y))));
        p / q
    } else {
        let z = 8.0 / ax;
        let y = z * z;
        let xx = ax - 2.356194491;
        let p = 1.0
            + y * (0.183105e-2
                + y * (-0.3516396496e-4 + y * (0.2457520174e-5 + y * (-0.240337019e-6))));
        let q = 0.04687499995
            + y * (-0.2002690873e-3
                + y * (0.8449199096e-5 + y * (-0.88228987e-6 + y * 0.105787412e-6)));
        let ans = (0.636619772 / ax).sqrt() * (xx.cos() * p - z * xx.sin() * q);
        if x < 0.0 {
            -ans
        } else {
            ans
        }
    }
}

/// Normalized Airy intensity `[2 J1(v)/v]²`, with the v → 0 limit of 1.
pub fn airy_profile(v: f64) -> f64 {
    if v.abs() < 1e-9 {
        return 1.0;
    }
    let t = 2.0 * bessel_j1(v) / v;
    t * t
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Argument where the Airy intensity reaches half maximum (≈ 1.6163).
pub fn airy_half_max_argument() -> f64 {
    bisect(|v| airy_profile(v) - 0.5, 1.0, 2.5)
}

/// First zero of J1 (≈ 3.8317), the dark-ring argument.
pub fn airy_first_zero() -> f64 {
    bisect(bessel_j1, 3.0, 4.5)
}

/// Airy point-spread kernel with the scale factor chosen so the FWHM of
/// the continuous profile equals `psf_fwhm`: `k = 2 v_half / psf_fwhm`.
pub fn airy_psf(p: &OpticsParams, radius_cells: usize) -> Kernel2D {
    let k = 2.0 * airy_half_max_argument() / p.psf_fwhm;
    let side = 2 * radius_cells + 1;
    let r = radius_cells as isize;
    let mut values = Vec::with_capacity(side * side);
    for dj in -r..=r {
        for di in -r..=r {
            let rad = (((di * di + dj * dj) as f64).sqrt()) * p.kernel_pitch;
            values.push(airy_profile(k * rad));
        }
    }
    let mut kern = Kernel2D {
        pitch: p.kernel_pitch,
        side,
        values,
    };
    kern.normalize();
    kern
}

/// Lateral shift of a photon emitted at angle `theta_d`, after refraction
/// at the diamond–glass interface:
/// `R = h (n_g/n_d) tan[arcsin(ρ sin θ_d)] − h tan θ_d`.
/// Returns infinity where the arcsine argument reaches 1.
pub fn tirf_shift(p: &OpticsParams, theta_d: f64) -> f64 {
    let ratio = match p.index_order {
        IndexOrder::AsPrinted => p.n_diamond / p.n_glass,
        IndexOrder::Swapped => p.n_glass / p.n_diamond,
    };
    let arg = ratio * theta_d.sin();
    if arg.abs() >= 1.0 {
        return f64::INFINITY;
    }
    p.plate_thickness * (p.n_glass / p.n_diamond) * arg.asin().tan()
        - p.plate_thickness * theta_d.tan()
}

/// Upper end of the admissible emission-angle range.
pub fn tirf_theta_limit(p: &OpticsParams) -> f64 {
    match p.index_order {
        IndexOrder::AsPrinted => p.theta_max.min((p.n_glass / p.n_diamond).asin()),
        IndexOrder::Swapped => p.theta_max,
    }
}

/// Photon-redistribution kernel: θ is sampled uniformly (step ≤ 0.1°)
/// over the admissible range, each sample deposits its weight into the
/// radial bin at |R(θ)|, spread uniformly over the ring of that radius,
/// and the kernel is renormalized after truncation at `radius_cells`.
pub fn tirf_distribution(p: &OpticsParams, radius_cells: usize) -> Result<Kernel2D> {
    p.validate()?;
    let theta_limit = tirf_theta_limit(p);
    if !(theta_limit > 0.0) {
        return Err(Error::OpticsConfig("empty admissible angle range".into()));
    }
    let max_step = 0.1f64.to_radians();
    let n_samples = (theta_limit / max_step).ceil().max(1.0) as usize;
    let step = theta_limit / n_samples as f64;

    let side = 2 * radius_cells + 1;
    let r = radius_cells as isize;
    // Ring membership by rounded center radius; rings up to radius_cells
    // are complete inside the square support.
    let mut rings: Vec<Vec<usize>> = vec![Vec::new(); radius_cells + 1];
    for dj in -r..=r {
        for di in -r..=r {
            let bin = ((di * di + dj * dj) as f64).sqrt().round() as usize;
            if bin <= radius_cells {
                rings[bin].push(((dj + r) * side as isize + (di + r)) as usize);
            }
        }
    }

    let mut values = vec![0.0; side * side];
    for k in 0..n_samples {
        let theta = k as f64 * step;
        let shift = tirf_shift(p, theta).abs();
        if !shift.is_finite() {
            continue;
        }
        let w = match p.angular_weighting {
            AngularWeighting::SolidAngle => theta.sin(),
            AngularWeighting::UniformTheta => 1.0,
        };
        let bin = (shift / p.kernel_pitch).round() as usize;
        if bin > radius_cells {
            continue;
        }
        let ring = &rings[bin];
        let share = w / ring.len() as f64;
        for &idx in ring {
            values[idx] += share;
        }
    }

    let mut kern = Kernel2D {
        pitch: p.kernel_pitch,
        side,
        values,
    };
    if kern.sum() <= 0.0 {
        return Err(Error::OpticsConfig(
            "no finite photon deposits inside the kernel support".into(),
        ));
    }
    kern.normalize();
    Ok(kern)
}

/// Modified point-spread function: the discrete zero-padded linear
/// convolution of two kernels on the same pitch, renormalized to unit sum.
/// The output support is `side_a + side_b - 1`.
pub fn modified_psf(a: &Kernel2D, m: &Kernel2D) -> Result<Kernel2D> {
    if ((a.pitch - m.pitch) / a.pitch).abs() > 1e-9 {
        return Err(Error::Geometry(format!(
            "kernel pitch mismatch: {} vs {}",
            a.pitch, m.pitch
        )));
    }
    // Gather over the smaller kernel for each output cell.
    let (big, small) = if a.side >= m.side { (a, m) } else { (m, a) };
    let side = a.side + m.side - 1;
    let rb = big.radius() as isize;
    let rs = small.radius() as isize;
    let ro = (side as isize - 1) / 2;

    let values: Vec<f64> = (0..side * side)
        .into_par_iter()
        .map(|idx| {
            let oj = (idx / side) as isize - ro;
            let oi = (idx % side) as isize - ro;
            let mut acc = 0.0;
            for sj in -rs..=rs {
                let bj = oj - sj;
                if bj.abs() > rb {
                    continue;
                }
                for si in -rs..=rs {
                    let bi = oi - si;
                    if bi.abs() > rb {
                        continue;
                    }
                    acc += small.value(si, sj) * big.value(bi, bj);
                }
            }
            acc
        })
        .collect();

    let mut out = Kernel2D {
        pitch: a.pitch,
        side,
        values,
    };
    out.normalize();
    Ok(out)
}
