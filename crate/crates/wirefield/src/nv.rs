//! NV spin model: crystal axes, spin-1 resonance frequencies, ODMR
//! lineshape, field projection, and vector-field reconstruction.
//!
//! Resonances come in two routes: a third-order perturbative expansion in
//! `gamma*B/D` (fast, with validity guards) and exact diagonalization of
//! the spin-1 Hamiltonian `D Sz² + gamma B·S` in the axis frame (the
//! oracle, valid everywhere). The imaging pipeline uses the expansion and
//! falls back to the exact route whenever the guards reject.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::magnetostatics::Lattice2D;
use crate::vec3::{self, Vec3};

/// Zero-field splitting default, Hz.
pub const ZERO_FIELD_SPLITTING: f64 = 2.87e9;

/// NV electron gyromagnetic ratio default, Hz/T.
pub const GYROMAGNETIC_RATIO: f64 = 2.8025e10;

/// Validity bound on `gamma*B/D` for the perturbative expansion.
pub const EXPANSION_MAX_RATIO: f64 = 0.3;

/// Half-width of the rejected band around `theta_B = 90°`, rad. The
/// third-order term contains `tan(theta_B)`.
pub const THETA_SINGULAR_BAND: f64 = 1e-3;

/// Which spin transition a run tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    /// Sign relating a resonance shift to the field along the axis:
    /// `b_parallel = sign * (f - f_bias) / gamma`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Minus => -1.0,
            Branch::Plus => 1.0,
        }
    }
}

/// ODMR lineshape convention.
///
/// `AsPrinted` evaluates `C (1 - exp(-(f-f0)²/2σ²))`: zero at resonance,
/// `C` far away. `ConventionalDip` evaluates `1 - C exp(...)`: the usual
/// photoluminescence dip. Both put the resonance at the same frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineshapeMode {
    AsPrinted,
    ConventionalDip,
}

/// NV measurement parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NvParams {
    /// Zero-field splitting, Hz.
    pub d_zfs: f64,
    /// Gyromagnetic ratio, Hz/T.
    pub gamma: f64,
    /// ODMR Gaussian linewidth sigma, Hz.
    pub linewidth_sigma: f64,
    /// ODMR contrast, dimensionless.
    pub contrast: f64,
    /// NV depth below the diamond surface, m.
    pub depth: f64,
    /// NV site lattice pitch, m.
    pub site_pitch: f64,
    /// Detection half-window around the bias resonance, Hz.
    pub window_half: f64,
    /// Tracked transition.
    pub branch: Branch,
    /// Lineshape convention.
    pub lineshape: LineshapeMode,
}

impl Default for NvParams {
    fn default() -> Self {
        NvParams {
            d_zfs: ZERO_FIELD_SPLITTING,
            gamma: GYROMAGNETIC_RATIO,
            linewidth_sigma: 6e6,
            contrast: 0.01,
            depth: 15e-9,
            site_pitch: 20e-9,
            window_half: 15e6,
            branch: Branch::Minus,
            lineshape: LineshapeMode::AsPrinted,
        }
    }
}

impl NvParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Geometry(format!("NV parameters: {msg}")));
        if !(self.d_zfs > 0.0) {
            return bad("zero-field splitting must be positive");
        }
        if !(self.gamma > 0.0) {
            return bad("gyromagnetic ratio must be positive");
        }
        if !(self.linewidth_sigma > 0.0) {
            return bad("linewidth must be positive");
        }
        if !(self.contrast > 0.0 && self.contrast < 1.0) {
            return bad("contrast must lie strictly between 0 and 1");
        }
        if !(self.window_half > 0.0) {
            return bad("detection window must be positive");
        }
        if !(self.site_pitch > 0.0) {
            return bad("site pitch must be positive");
        }
        if !(self.depth >= 0.0) {
            return bad("depth must be non-negative");
        }
        Ok(())
    }
}

/// The four NV crystal axes in the crystal frame, normalized:
/// [111], [1-1-1], [-1-11], [-11-1].
pub fn nv_axes_crystal() -> [Vec3; 4] {
    let s = 1.0 / 3f64.sqrt();
    [
        [s, s, s],
        [s, -s, -s],
        [-s, -s, s],
        [-s, s, -s],
    ]
}

/// The four NV axes in the lab frame of a (100)-cut plate: lab x = [011],
/// lab y = [0-11], lab z = [100] (the surface normal). Axis 1 then has its
/// in-plane projection along +x and axis 3 along +y.
pub fn nv_axes_lab() -> [Vec3; 4] {
    let ex = vec3::normalize([0.0, 1.0, 1.0]);
    let ey = vec3::normalize([0.0, -1.0, 1.0]);
    let ez = [1.0, 0.0, 0.0];
    nv_axes_crystal().map(|a| [vec3::dot(a, ex), vec3::dot(a, ey), vec3::dot(a, ez)])
}

/// A field vector with its magnitude and angle to a chosen NV axis.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub b: Vec3,
    pub b_mag: f64,
    /// Angle between the field and the axis, in [0, π]. Zero field maps
    /// to zero angle.
    pub theta_b: f64,
}

impl FieldSample {
    pub fn new(b: Vec3, axis: Vec3) -> Self {
        let b_mag = vec3::norm(b);
        let theta_b = if b_mag == 0.0 {
            0.0
        } else {
            (vec3::dot(b, axis) / b_mag).clamp(-1.0, 1.0).acos()
        };
        FieldSample { b, b_mag, theta_b }
    }
}

/// Resonance frequencies of both transitions by the third-order expansion
/// in `x = gamma*B/D`:
///
/// `f± = D [1 ± x cosθ + (3/2) x² sin²θ ± x³ ((1/8) sin³θ tanθ - (1/2) sin²θ cosθ)]`
///
/// Returns `(f_minus, f_plus)` identified by branch (ms = -1, ms = +1).
/// Rejects `x ≥ 0.3` for tilted fields and `θ` within
/// [`THETA_SINGULAR_BAND`] of 90°; use [`exact_resonances`] there. Fields
/// along the axis carry no ratio bound: every neglected term vanishes
/// with sin θ, so the expansion is exact there for any magnitude.
pub fn resonance_freqs(b: Vec3, axis: Vec3, p: &NvParams) -> Result<(f64, f64)> {
    let sample = FieldSample::new(b, axis);
    let x = p.gamma * sample.b_mag / p.d_zfs;
    let aligned = sample.theta_b.sin().abs() < 1e-9;
    if x >= EXPANSION_MAX_RATIO && !aligned {
        return Err(Error::ExpansionDomain {
            msg: format!("field ratio gamma*B/D = {x:.4} >= {EXPANSION_MAX_RATIO}"),
        });
    }
    if sample.b_mag > 0.0
        && (sample.theta_b - std::f64::consts::FRAC_PI_2).abs() < THETA_SINGULAR_BAND
    {
        return Err(Error::ExpansionDomain {
            msg: format!(
                "theta_B = {:.6} rad is within {THETA_SINGULAR_BAND} rad of 90 deg",
                sample.theta_b
            ),
        });
    }
    let (s, c) = sample.theta_b.sin_cos();
    let odd = x * c + x.powi(3) * (0.125 * s.powi(3) * sample.theta_b.tan() - 0.5 * s * s * c);
    let even = 1.0 + 1.5 * x * x * s * s;
    Ok((p.d_zfs * (even - odd), p.d_zfs * (even + odd)))
}

fn spin1_hamiltonian(b_mag: f64, theta: f64, p: &NvParams) -> Matrix3<f64> {
    // Axis frame with B in the xz-plane; the azimuth does not move the
    // eigenvalues. Basis (|+1>, |0>, |-1>).
    let gb = p.gamma * b_mag;
    let (s, c) = theta.sin_cos();
    let t = gb * s / 2f64.sqrt();
    Matrix3::new(
        p.d_zfs + gb * c, t, 0.0,
        t, 0.0, t,
        0.0, t, p.d_zfs - gb * c,
    )
}

/// Exact transition frequencies by diagonalizing the spin-1 Hamiltonian,
/// branch-identified via eigenvector overlap: `(f_ms_minus, f_ms_plus)`.
pub fn exact_branch_resonances(b: Vec3, axis: Vec3, p: &NvParams) -> (f64, f64) {
    let sample = FieldSample::new(b, axis);
    let h = spin1_hamiltonian(sample.b_mag, sample.theta_b, p);
    let eig = h.symmetric_eigen();
    let overlap = |state: usize, col: usize| eig.eigenvectors[(state, col)].abs();
    let mut i0 = 0;
    for col in 1..3 {
        if overlap(1, col) > overlap(1, i0) {
            i0 = col;
        }
    }
    let rest: Vec<usize> = (0..3).filter(|&c| c != i0).collect();
    let (ia, ib) = (rest[0], rest[1]);
    // The ms = -1 like state has the larger |-1> component; ties resolve
    // to the lower frequency (the transverse-field degeneracy).
    let (im, ip) = match overlap(2, ia).partial_cmp(&overlap(2, ib)) {
        Some(std::cmp::Ordering::Greater) => (ia, ib),
        Some(std::cmp::Ordering::Less) => (ib, ia),
        _ => {
            if eig.eigenvalues[ia] <= eig.eigenvalues[ib] {
                (ia, ib)
            } else {
                (ib, ia)
            }
        }
    };
    let e0 = eig.eigenvalues[i0];
    (eig.eigenvalues[im] - e0, eig.eigenvalues[ip] - e0)
}

/// Exact transition frequencies, sorted so `f_minus <= f_plus`. This is
/// the verification oracle for [`resonance_freqs`] and has no domain
/// restrictions.
pub fn exact_resonances(b: Vec3, axis: Vec3, p: &NvParams) -> (f64, f64) {
    let (a, b) = exact_branch_resonances(b, axis, p);
    (a.min(b), a.max(b))
}

/// ODMR intensity over a frequency grid for a single resonance at `f_res`.
pub fn odmr_spectrum(f_grid: &[f64], f_res: f64, p: &NvParams) -> Vec<f64> {
    debug_assert!(f_grid.windows(2).all(|w| w[0] < w[1]));
    let inv = 1.0 / (2.0 * p.linewidth_sigma * p.linewidth_sigma);
    f_grid
        .iter()
        .map(|f| {
            let g = (-(f - f_res).powi(2) * inv).exp();
            match p.lineshape {
                LineshapeMode::AsPrinted => p.contrast * (1.0 - g),
                LineshapeMode::ConventionalDip => 1.0 - p.contrast * g,
            }
        })
        .collect()
}

/// Signed projection of a field onto an NV axis, T.
pub fn project_field(b: Vec3, axis: Vec3) -> f64 {
    vec3::dot(b, axis)
}

/// A per-axis scalar projection map on a pixel lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarMap {
    pub lattice: Lattice2D,
    pub values: Vec<f64>,
}

/// Reconstructed vector-field maps with the per-pixel RMS residual of the
/// least-squares solve.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorMaps {
    pub lattice: Lattice2D,
    pub bx: Vec<f64>,
    pub by: Vec<f64>,
    pub bz: Vec<f64>,
    pub residual: Vec<f64>,
}

/// Per-pixel least-squares reconstruction of the field vector from three
/// or more axis-projection maps on identical lattices. Pixels carrying a
/// non-finite projection in any map yield NaN outputs.
pub fn vector_reconstruct(maps: &[(Vec3, ScalarMap)]) -> Result<VectorMaps> {
    if maps.len() < 3 {
        return Err(Error::Underdetermined { n: maps.len() });
    }
    let lattice = maps[0].1.lattice.clone();
    for (_, m) in maps.iter() {
        if m.lattice != lattice {
            return Err(Error::Geometry("projection maps on different lattices".into()));
        }
        if m.values.len() != lattice.len() {
            return Err(Error::Geometry("projection map size mismatch".into()));
        }
    }

    let mut ata = Matrix3::zeros();
    for (axis, _) in maps.iter() {
        let a = Vector3::from(*axis);
        ata += a * a.transpose();
    }
    let chol = ata
        .cholesky()
        .ok_or_else(|| Error::Geometry("axis set does not span three dimensions".into()))?;

    let n = lattice.len();
    let inv_m = 1.0 / maps.len() as f64;
    let mut bx = vec![f64::NAN; n];
    let mut by = vec![f64::NAN; n];
    let mut bz = vec![f64::NAN; n];
    let mut residual = vec![f64::NAN; n];
    for px in 0..n {
        let mut rhs = Vector3::zeros();
        let mut ok = true;
        for (axis, m) in maps.iter() {
            let v = m.values[px];
            if !v.is_finite() {
                ok = false;
                break;
            }
            rhs += Vector3::from(*axis) * v;
        }
        if !ok {
            continue;
        }
        let x = chol.solve(&rhs);
        let mut ss = 0.0;
        for (axis, m) in maps.iter() {
            let r = Vector3::from(*axis).dot(&x) - m.values[px];
            ss += r * r;
        }
        bx[px] = x[0];
        by[px] = x[1];
        bz[px] = x[2];
        residual[px] = (ss * inv_m).sqrt();
    }

    Ok(VectorMaps {
        lattice,
        bx,
        by,
        bz,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TESLA_PER_GAUSS;
    use approx::assert_relative_eq;

    fn params() -> NvParams {
        NvParams::default()
    }

    #[test]
    fn axes_geometry() {
        let axes = nv_axes_crystal();
        let mut sum = [0.0; 3];
        for (i, a) in axes.iter().enumerate() {
            assert_relative_eq!(vec3::norm(*a), 1.0, epsilon = 1e-12);
            sum = vec3::add(sum, *a);
            for b in axes.iter().skip(i + 1) {
                assert_relative_eq!(vec3::dot(*a, *b), -1.0 / 3.0, epsilon = 1e-12);
            }
        }
        for c in sum {
            assert!(c.abs() < 1e-12);
        }
        // Lab frame: axis 1 in-plane along +x, axis 3 along +y.
        let lab = nv_axes_lab();
        assert_relative_eq!(lab[0][0], (2f64 / 3.0).sqrt(), epsilon = 1e-12);
        assert!(lab[0][1].abs() < 1e-12);
        assert_relative_eq!(lab[2][1], (2f64 / 3.0).sqrt(), epsilon = 1e-12);
        for a in lab {
            assert_relative_eq!(vec3::norm(a), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_field_degenerate() {
        let p = params();
        let axis = nv_axes_crystal()[0];
        let (fm, fp) = resonance_freqs([0.0; 3], axis, &p).unwrap();
        assert_eq!(fm, p.d_zfs);
        assert_eq!(fp, p.d_zfs);
        let (em, ep) = exact_resonances([0.0; 3], axis, &p);
        assert_relative_eq!(em, p.d_zfs, epsilon = 1e-3);
        assert_relative_eq!(ep, p.d_zfs, epsilon = 1e-3);
    }

    #[test]
    fn aligned_field_is_pure_zeeman() {
        let p = params();
        let axis = [0.0, 0.0, 1.0];
        let b = [0.0, 0.0, 10.0 * TESLA_PER_GAUSS];
        let (fm, fp) = resonance_freqs(b, axis, &p).unwrap();
        assert_relative_eq!(fm, 2.87e9 - 2.8025e7, max_relative = 1e-12);
        assert_relative_eq!(fp, 2.87e9 + 2.8025e7, max_relative = 1e-12);
        // Branch symmetry to rounding.
        assert!((fm + fp - 2.0 * p.d_zfs).abs() < 1e-5);
    }

    #[test]
    fn exact_aligned_is_pure_zeeman_up_to_500g() {
        let p = params();
        let axis = [1.0, 0.0, 0.0];
        for g in [50.0, 200.0, 500.0] {
            let b = [g * TESLA_PER_GAUSS, 0.0, 0.0];
            let (em, ep) = exact_resonances(b, axis, &p);
            assert_relative_eq!(em, p.d_zfs - p.gamma * g * TESLA_PER_GAUSS, epsilon = 1e-3);
            assert_relative_eq!(ep, p.d_zfs + p.gamma * g * TESLA_PER_GAUSS, epsilon = 1e-3);
        }
    }

    #[test]
    fn expansion_matches_exact_at_50g_30deg() {
        let p = params();
        let axis = [0.0, 0.0, 1.0];
        let bmag = 50.0 * TESLA_PER_GAUSS;
        let th = 30f64.to_radians();
        let b = [bmag * th.sin(), 0.0, bmag * th.cos()];
        let (fm, fp) = resonance_freqs(b, axis, &p).unwrap();
        let (em, ep) = exact_resonances(b, axis, &p);
        assert!((fm - em).abs() <= 100e3, "minus branch off by {}", fm - em);
        assert!((fp - ep).abs() <= 100e3);
    }

    #[test]
    fn expansion_rejects_singular_band_oracle_does_not() {
        let p = params();
        let axis = [0.0, 0.0, 1.0];
        let b = [50.0 * TESLA_PER_GAUSS, 0.0, 0.0];
        assert!(matches!(
            resonance_freqs(b, axis, &p),
            Err(Error::ExpansionDomain { .. })
        ));
        let (em, ep) = exact_resonances(b, axis, &p);
        assert!(em.is_finite() && ep.is_finite());
        assert!(em <= ep);
    }

    #[test]
    fn expansion_rejects_large_tilted_fields_but_not_aligned() {
        let p = params();
        let bmag = 400.0 * TESLA_PER_GAUSS;
        let th = 30f64.to_radians();
        let tilted = [bmag * th.sin(), 0.0, bmag * th.cos()];
        assert!(matches!(
            resonance_freqs(tilted, [0.0, 0.0, 1.0], &p),
            Err(Error::ExpansionDomain { .. })
        ));
        // Aligned fields have no ratio bound.
        let (fm, fp) = resonance_freqs([0.0, 0.0, bmag], [0.0, 0.0, 1.0], &p).unwrap();
        assert_relative_eq!(fm, p.d_zfs - p.gamma * bmag, max_relative = 1e-12);
        assert_relative_eq!(fp, p.d_zfs + p.gamma * bmag, max_relative = 1e-12);
    }

    #[test]
    fn plus_branch_monotone_in_field_at_theta_zero() {
        let p = params();
        let axis = [0.0, 0.0, 1.0];
        let mut prev = 0.0;
        for g in 1..50 {
            let b = [0.0, 0.0, g as f64 * TESLA_PER_GAUSS];
            let (_, fp) = resonance_freqs(b, axis, &p).unwrap();
            assert!(fp > prev);
            prev = fp;
        }
    }

    #[test]
    fn anti_aligned_branch_identity() {
        // theta = pi: the ms = -1 transition moves up in frequency.
        let p = params();
        let axis = [1.0, 0.0, 0.0];
        let b = [-100.0 * TESLA_PER_GAUSS, 0.0, 0.0];
        let (fm, fp) = resonance_freqs(b, axis, &p).unwrap();
        let shift = p.gamma * 100.0 * TESLA_PER_GAUSS;
        assert_relative_eq!(fm, p.d_zfs + shift, max_relative = 1e-9);
        assert_relative_eq!(fp, p.d_zfs - shift, max_relative = 1e-9);
        let (em, ep) = exact_branch_resonances(b, axis, &p);
        assert_relative_eq!(em, fm, epsilon = 1.0);
        assert_relative_eq!(ep, fp, epsilon = 1.0);
    }

    #[test]
    fn lineshape_as_printed() {
        let p = params();
        let f0 = 2.87e9;
        let f_grid: Vec<f64> = (0..2001).map(|i| f0 - 20e6 + i as f64 * 2e4).collect();
        let spec = odmr_spectrum(&f_grid, f0, &p);
        // Zero at resonance, C ten sigmas out, everything in [0, C].
        let at_center = spec[1000];
        assert!(at_center.abs() < 1e-15);
        let tail = odmr_spectrum(&[f0 + 10.0 * p.linewidth_sigma], f0, &p);
        assert_relative_eq!(tail[0], p.contrast, max_relative = 1e-12);
        assert!(spec.iter().all(|&v| (0.0..=p.contrast * (1.0 + 1e-12)).contains(&v)));
        // Half depth at sigma * sqrt(2 ln 2).
        let dx = p.linewidth_sigma * (2.0 * 2f64.ln()).sqrt();
        let spec2 = odmr_spectrum(&[f0 + dx], f0, &p);
        assert_relative_eq!(spec2[0], p.contrast / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn lineshape_conventional() {
        let mut p = params();
        p.lineshape = LineshapeMode::ConventionalDip;
        let f0 = 2.87e9;
        let spec = odmr_spectrum(&[f0, f0 + 100e6], f0, &p);
        assert_relative_eq!(spec[0], 1.0 - p.contrast, max_relative = 1e-12);
        assert_relative_eq!(spec[1], 1.0, max_relative = 1e-12);
    }

    #[test]
    fn projection_basics() {
        let axis = nv_axes_crystal()[0];
        let b0 = 3.2e-3;
        assert_relative_eq!(
            project_field([0.0, 0.0, b0], axis),
            b0 / 3f64.sqrt(),
            max_relative = 1e-12
        );
        let perp = [1.0, -1.0, 0.0];
        assert!(project_field(perp, axis).abs() < 1e-12);
        assert!(project_field([1.0, 2.0, -0.5], axis).abs() <= vec3::norm([1.0, 2.0, -0.5]));
    }

    fn lattice1() -> Lattice2D {
        Lattice2D {
            x0: 0.0,
            y0: 0.0,
            pitch: 1.0,
            nx: 1,
            ny: 1,
            z: 0.0,
        }
    }

    #[test]
    fn reconstruct_round_trip() {
        let axes = nv_axes_crystal();
        let b = [1.0e-4, 2.0e-4, 3.0e-4];
        let maps: Vec<(Vec3, ScalarMap)> = axes
            .iter()
            .map(|a| {
                (
                    *a,
                    ScalarMap {
                        lattice: lattice1(),
                        values: vec![project_field(b, *a)],
                    },
                )
            })
            .collect();
        let vm = vector_reconstruct(&maps).unwrap();
        assert_relative_eq!(vm.bx[0], b[0], max_relative = 1e-10);
        assert_relative_eq!(vm.by[0], b[1], max_relative = 1e-10);
        assert_relative_eq!(vm.bz[0], b[2], max_relative = 1e-10);
        assert!(vm.residual[0] < 1e-15);
    }

    #[test]
    fn equal_projections_give_zero_field() {
        let axes = nv_axes_crystal();
        let pval = 2.5e-4;
        let maps: Vec<(Vec3, ScalarMap)> = axes
            .iter()
            .map(|a| {
                (
                    *a,
                    ScalarMap {
                        lattice: lattice1(),
                        values: vec![pval],
                    },
                )
            })
            .collect();
        let vm = vector_reconstruct(&maps).unwrap();
        assert!(vm.bx[0].abs() < 1e-18);
        assert!(vm.by[0].abs() < 1e-18);
        assert!(vm.bz[0].abs() < 1e-18);
        assert_relative_eq!(vm.residual[0], pval, max_relative = 1e-12);
    }

    #[test]
    fn three_axis_subset_is_exact() {
        let axes = nv_axes_crystal();
        let b = [-2.0e-4, 0.7e-4, 1.1e-4];
        let maps: Vec<(Vec3, ScalarMap)> = axes[..3]
            .iter()
            .map(|a| {
                (
                    *a,
                    ScalarMap {
                        lattice: lattice1(),
                        values: vec![project_field(b, *a)],
                    },
                )
            })
            .collect();
        let vm = vector_reconstruct(&maps).unwrap();
        assert_relative_eq!(vm.bx[0], b[0], max_relative = 1e-10);
        assert!(vm.residual[0] < 1e-15);
    }

    #[test]
    fn too_few_maps_rejected() {
        let axes = nv_axes_crystal();
        let maps: Vec<(Vec3, ScalarMap)> = axes[..2]
            .iter()
            .map(|a| {
                (
                    *a,
                    ScalarMap {
                        lattice: lattice1(),
                        values: vec![0.0],
                    },
                )
            })
            .collect();
        assert!(matches!(
            vector_reconstruct(&maps),
            Err(Error::Underdetermined { n: 2 })
        ));
    }
}
