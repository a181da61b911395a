//! Plain-text run configuration: `[section]` headers and `key = value`
//! lines, values in lab units (nm, µm, G, MHz, %, deg), stored in SI.
//!
//! An empty file yields the full default run. Unknown sections or keys are
//! rejected with their line number, as are values that violate the owning
//! type's invariants. [`RunConfig::to_text`] emits a canonical echo in SI
//! units that reloads to an equal configuration.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::imaging::{ImagingConfig, SceneConfig};
use crate::magnetostatics::{Material, Segment, WireSpec};
use crate::nv::{nv_axes_lab, Branch, LineshapeMode, NvParams};
use crate::optics::{AngularWeighting, IndexOrder, OpticsParams};
use crate::vec3::{self, Vec3};

/// One wire segment by material name.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentConfig {
    pub material: String,
    pub length: f64,
    pub scale: f64,
}

/// Wire geometry in config form.
#[derive(Debug, Clone, PartialEq)]
pub struct WireConfig {
    pub diameter: f64,
    pub standoff: f64,
    /// Long axis in the plane.
    pub axis: [f64; 2],
    /// In-plane position of the wire midpoint.
    pub center: [f64; 2],
    pub segments: Vec<SegmentConfig>,
    pub cell_size: f64,
}

impl Default for WireConfig {
    fn default() -> Self {
        WireConfig {
            diameter: 188e-9,
            standoff: 15e-9,
            axis: [1.0, 0.0],
            center: [0.0, 0.0],
            segments: vec![SegmentConfig {
                material: "Fe".into(),
                length: 12.5e-6,
                scale: 1.0,
            }],
            cell_size: 20e-9,
        }
    }
}

/// Grid-search configuration for the `fit` subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct FitGridConfig {
    /// Materials whose Ms is searched; empty = every magnetic material in
    /// the wire.
    pub materials: Vec<String>,
    pub ms_min: f64,
    pub ms_max: f64,
    pub ms_step: f64,
    pub diameter_min: f64,
    pub diameter_max: f64,
    pub diameter_step: f64,
    pub field_weight: f64,
    pub size_weight: f64,
}

impl Default for FitGridConfig {
    fn default() -> Self {
        FitGridConfig {
            materials: Vec::new(),
            ms_min: 0.5e6,
            ms_max: 2.0e6,
            ms_step: 0.05e6,
            diameter_min: 120e-9,
            diameter_max: 240e-9,
            diameter_step: 4e-9,
            field_weight: 1.0,
            size_weight: 1.0,
        }
    }
}

/// Field sweep and per-segment coercivities for the `hysteresis`
/// subcommand, in T on the imaged-axis scale.
#[derive(Debug, Clone, PartialEq)]
pub struct HysteresisConfig {
    pub sweep: Vec<f64>,
    pub coercivities: Vec<f64>,
}

impl Default for HysteresisConfig {
    fn default() -> Self {
        HysteresisConfig {
            sweep: [-71.0, -150.0, -251.0, -295.0, -305.0, -365.0, -375.0]
                .iter()
                .map(|g| g * 1e-4)
                .collect(),
            coercivities: vec![300.0e-4],
        }
    }
}

/// Everything a run needs, in SI.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nv: NvParams,
    pub scene: SceneConfig,
    pub optics: OpticsParams,
    pub materials: Vec<Material>,
    pub wire: WireConfig,
    pub fit: FitGridConfig,
    pub hysteresis: HysteresisConfig,
    /// Extra bias along the imaged NV axis, T, added to `scene.bias_field`.
    pub bias_along_axis: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            nv: NvParams::default(),
            scene: SceneConfig::default(),
            optics: OpticsParams::default(),
            materials: vec![Material::iron(), Material::cobalt(), Material::gold()],
            wire: WireConfig::default(),
            fit: FitGridConfig::default(),
            hysteresis: HysteresisConfig::default(),
            bias_along_axis: 0.0,
        }
    }
}

/// Parse config text into a validated [`RunConfig`].
pub fn load_config(text: &str) -> Result<RunConfig> {
    RunConfig::load(text)
}

fn cfg_err(line: usize, key: &str, msg: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        msg: msg.into(),
    }
}

/// Longest numeric prefix and the remaining unit text.
fn split_number(s: &str) -> Option<(f64, &str)> {
    let mut best = None;
    for i in 1..=s.len() {
        if !s.is_char_boundary(i) {
            continue;
        }
        if let Ok(v) = s[..i].parse::<f64>() {
            best = Some((v, s[i..].trim()));
        }
    }
    best
}

/// Value with its unit multiplier applied. Accepts "188 nm", "188nm",
/// "1 %", "2.87 GHz", "1.2e6 A/m", bare numbers (SI).
fn parse_quantity(raw: &str, line: usize, key: &str) -> Result<f64> {
    let s = raw.trim();
    if s.is_empty() {
        return Err(cfg_err(line, key, "empty value"));
    }
    let (value, unit_str) = split_number(s)
        .ok_or_else(|| cfg_err(line, key, format!("cannot parse number in '{s}'")))?;
    let mult = unit_multiplier(unit_str)
        .ok_or_else(|| cfg_err(line, key, format!("unknown unit '{unit_str}'")))?;
    Ok(value * mult)
}

fn unit_multiplier(unit: &str) -> Option<f64> {
    let u = unit.trim();
    Some(match u {
        "" => 1.0,
        "m" => 1.0,
        "mm" => 1e-3,
        "um" | "µm" | "μm" => 1e-6,
        "nm" => 1e-9,
        "pm" => 1e-12,
        "T" => 1.0,
        "mT" => 1e-3,
        "uT" | "µT" | "μT" => 1e-6,
        "nT" => 1e-9,
        "G" => 1e-4,
        "Hz" => 1.0,
        "kHz" => 1e3,
        "MHz" => 1e6,
        "GHz" => 1e9,
        "Hz/T" => 1.0,
        "MHz/mT" => 1e9,
        "A/m" => 1.0,
        "kA/m" => 1e3,
        "J/m3" | "J/m^3" => 1.0,
        "J/m" => 1.0,
        "pJ/m" => 1e-12,
        "rad" => 1.0,
        "deg" => std::f64::consts::PI / 180.0,
        "%" | "percent" => 0.01,
        _ => return None,
    })
}

/// Comma-separated quantities; a unit on any element back-fills unitless
/// ones (so "-71, -150, -375 G" is all gauss).
fn parse_quantity_list(raw: &str, line: usize, key: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    // Shared unit from the last element carrying one.
    let mut shared = 1.0;
    for p in parts.iter().rev() {
        if let Some((_, unit)) = split_number(p) {
            if !unit.is_empty() {
                if let Some(m) = unit_multiplier(unit) {
                    shared = m;
                    break;
                }
            }
        }
    }
    parts
        .iter()
        .map(|p| match p.parse::<f64>() {
            Ok(v) => Ok(v * shared),
            Err(_) => parse_quantity(p, line, key),
        })
        .collect()
}

fn parse_axis2(raw: &str, line: usize, key: &str) -> Result<[f64; 2]> {
    match raw.trim() {
        "x" | "+x" => Ok([1.0, 0.0]),
        "-x" => Ok([-1.0, 0.0]),
        "y" | "+y" => Ok([0.0, 1.0]),
        "-y" => Ok([0.0, -1.0]),
        other => {
            let parts: Vec<&str> = other.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(cfg_err(
                    line,
                    key,
                    "expected +x/-x/+y/-y or two components",
                ));
            }
            let x: f64 = parts[0]
                .parse()
                .map_err(|_| cfg_err(line, key, "bad axis component"))?;
            let y: f64 = parts[1]
                .parse()
                .map_err(|_| cfg_err(line, key, "bad axis component"))?;
            let n = (x * x + y * y).sqrt();
            if n == 0.0 {
                return Err(cfg_err(line, key, "axis cannot be zero"));
            }
            Ok([x / n, y / n])
        }
    }
}

/// "Fe:2.4um:+1, Au:10.2um:+1, Fe:2.4um:+1"
fn parse_segments(raw: &str, line: usize, key: &str) -> Result<Vec<SegmentConfig>> {
    raw.split(',')
        .map(|item| {
            let fields: Vec<&str> = item.trim().split(':').collect();
            if fields.len() != 3 {
                return Err(cfg_err(
                    line,
                    key,
                    format!("segment '{}' is not name:length:scale", item.trim()),
                ));
            }
            let length = parse_quantity(fields[1], line, key)?;
            let scale: f64 = fields[2]
                .trim()
                .trim_start_matches('+')
                .parse()
                .map_err(|_| cfg_err(line, key, format!("bad segment scale '{}'", fields[2])))?;
            Ok(SegmentConfig {
                material: fields[0].trim().to_string(),
                length,
                scale,
            })
        })
        .collect()
}

impl RunConfig {
    pub fn load(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        let mut touched_materials = false;
        let mut bias_xyz: [Option<f64>; 3] = [None; 3];

        for (line0, raw) in text.lines().enumerate() {
            let line = line0 + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(name) = trimmed.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| cfg_err(line, trimmed, "unterminated section header"))?;
                section = name.trim().to_string();
                let known = matches!(
                    section.as_str(),
                    "nv" | "scene" | "optics" | "wire" | "fit" | "hysteresis"
                ) || section.starts_with("material.");
                if !known {
                    return Err(cfg_err(line, &section, "unknown section"));
                }
                if let Some(mat) = section.strip_prefix("material.") {
                    if !touched_materials {
                        cfg.materials.clear();
                        touched_materials = true;
                    }
                    if !cfg.materials.iter().any(|m| m.name == mat) {
                        cfg.materials.push(Material::new(mat, 0.0, 0.0, 0.0));
                    }
                }
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| cfg_err(line, trimmed, "expected 'key = value'"))?;
            let key = key.trim();
            let value = value.trim();
            let q = |v: &str| parse_quantity(v, line, key);

            match (section.as_str(), key) {
                ("nv", "zero_field_splitting") => cfg.nv.d_zfs = q(value)?,
                ("nv", "gyromagnetic_ratio") => cfg.nv.gamma = q(value)?,
                ("nv", "linewidth") => cfg.nv.linewidth_sigma = q(value)?,
                ("nv", "contrast") => {
                    let c = q(value)?;
                    if !(c > 0.0 && c < 1.0) {
                        return Err(cfg_err(
                            line,
                            key,
                            format!("contrast {c} outside (0, 1)"),
                        ));
                    }
                    cfg.nv.contrast = c;
                }
                ("nv", "depth") => cfg.nv.depth = q(value)?,
                ("nv", "site_pitch") => cfg.nv.site_pitch = q(value)?,
                ("nv", "window_half") => cfg.nv.window_half = q(value)?,
                ("nv", "branch") => {
                    cfg.nv.branch = match value {
                        "minus" => Branch::Minus,
                        "plus" => Branch::Plus,
                        other => {
                            return Err(cfg_err(line, key, format!("unknown branch '{other}'")))
                        }
                    }
                }
                ("nv", "lineshape") => {
                    cfg.nv.lineshape = match value {
                        "as_printed" => LineshapeMode::AsPrinted,
                        "conventional_dip" => LineshapeMode::ConventionalDip,
                        other => {
                            return Err(cfg_err(line, key, format!("unknown lineshape '{other}'")))
                        }
                    }
                }
                ("scene", "fov_width") => cfg.scene.fov_width = q(value)?,
                ("scene", "fov_height") => cfg.scene.fov_height = q(value)?,
                ("scene", "pixel_pitch") => cfg.scene.pixel_pitch = q(value)?,
                ("scene", "frequency_step") => cfg.scene.frequency_step = q(value)?,
                ("scene", "nv_axis_index") => {
                    cfg.scene.nv_axis_index = value
                        .parse()
                        .map_err(|_| cfg_err(line, key, "expected 1..4"))?
                }
                ("scene", "bias_along_axis") => cfg.bias_along_axis = q(value)?,
                ("scene", "bias_x") => bias_xyz[0] = Some(q(value)?),
                ("scene", "bias_y") => bias_xyz[1] = Some(q(value)?),
                ("scene", "bias_z") => bias_xyz[2] = Some(q(value)?),
                ("optics", "psf_fwhm") => cfg.optics.psf_fwhm = q(value)?,
                ("optics", "n_diamond") => cfg.optics.n_diamond = q(value)?,
                ("optics", "n_glass") => cfg.optics.n_glass = q(value)?,
                ("optics", "plate_thickness") => cfg.optics.plate_thickness = q(value)?,
                ("optics", "theta_max") => cfg.optics.theta_max = q(value)?,
                ("optics", "numerical_aperture") => cfg.optics.numerical_aperture = q(value)?,
                ("optics", "tirf_radius") => cfg.optics.tirf_radius = q(value)?,
                ("optics", "index_order") => {
                    cfg.optics.index_order = match value {
                        "as_printed" => IndexOrder::AsPrinted,
                        "swapped" => IndexOrder::Swapped,
                        other => {
                            return Err(cfg_err(
                                line,
                                key,
                                format!("unknown index order '{other}'"),
                            ))
                        }
                    }
                }
                ("optics", "angular_weighting") => {
                    cfg.optics.angular_weighting = match value {
                        "solid_angle" => AngularWeighting::SolidAngle,
                        "uniform_theta" => AngularWeighting::UniformTheta,
                        other => {
                            return Err(cfg_err(
                                line,
                                key,
                                format!("unknown weighting '{other}'"),
                            ))
                        }
                    }
                }
                ("wire", "diameter") => cfg.wire.diameter = q(value)?,
                ("wire", "standoff") => cfg.wire.standoff = q(value)?,
                ("wire", "cell_size") => cfg.wire.cell_size = q(value)?,
                ("wire", "axis") => cfg.wire.axis = parse_axis2(value, line, key)?,
                ("wire", "center_x") => cfg.wire.center[0] = q(value)?,
                ("wire", "center_y") => cfg.wire.center[1] = q(value)?,
                ("wire", "segments") => cfg.wire.segments = parse_segments(value, line, key)?,
                ("fit", "materials") => {
                    cfg.fit.materials = value
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                }
                ("fit", "ms_min") => cfg.fit.ms_min = q(value)?,
                ("fit", "ms_max") => cfg.fit.ms_max = q(value)?,
                ("fit", "ms_step") => cfg.fit.ms_step = q(value)?,
                ("fit", "diameter_min") => cfg.fit.diameter_min = q(value)?,
                ("fit", "diameter_max") => cfg.fit.diameter_max = q(value)?,
                ("fit", "diameter_step") => cfg.fit.diameter_step = q(value)?,
                ("fit", "field_weight") => cfg.fit.field_weight = q(value)?,
                ("fit", "size_weight") => cfg.fit.size_weight = q(value)?,
                ("hysteresis", "sweep") => {
                    cfg.hysteresis.sweep = parse_quantity_list(value, line, key)?
                }
                ("hysteresis", "coercivities") => {
                    cfg.hysteresis.coercivities = parse_quantity_list(value, line, key)?
                }
                (sec, "ms") if sec.starts_with("material.") => {
                    material_mut(&mut cfg, sec)?.ms = q(value)?
                }
                (sec, "k1") if sec.starts_with("material.") => {
                    material_mut(&mut cfg, sec)?.k1 = q(value)?
                }
                (sec, "a_ex") if sec.starts_with("material.") => {
                    material_mut(&mut cfg, sec)?.a_ex = q(value)?
                }
                ("", k) => return Err(cfg_err(line, k, "key outside any section")),
                (_, k) => return Err(cfg_err(line, k, format!("unknown key in [{section}]"))),
            }
        }

        for (d, v) in bias_xyz.into_iter().enumerate() {
            if let Some(v) = v {
                cfg.scene.bias_field[d] = v;
            }
        }

        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        self.nv.validate()?;
        self.optics.validate()?;
        self.scene.validate(&self.nv)?;
        if self.wire.segments.is_empty() {
            return Err(Error::Geometry("wire has no segments".into()));
        }
        for seg in &self.wire.segments {
            if !self.materials.iter().any(|m| m.name == seg.material) {
                return Err(Error::Geometry(format!(
                    "segment material '{}' is not declared",
                    seg.material
                )));
            }
        }
        self.wire_spec()?.validate()
    }

    /// Build the lab-frame wire from the config.
    pub fn wire_spec(&self) -> Result<WireSpec> {
        let total: f64 = self.wire.segments.iter().map(|s| s.length).sum();
        let axis: Vec3 = [self.wire.axis[0], self.wire.axis[1], 0.0];
        let axis = vec3::normalize(axis);
        let direction = axis;
        let segments: Result<Vec<Segment>> = self
            .wire
            .segments
            .iter()
            .map(|s| {
                let material = self
                    .materials
                    .iter()
                    .find(|m| m.name == s.material)
                    .cloned()
                    .ok_or_else(|| {
                        Error::Geometry(format!("material '{}' not declared", s.material))
                    })?;
                Ok(Segment {
                    material,
                    length: s.length,
                    direction,
                    scale: s.scale,
                })
            })
            .collect();
        let origin = [
            self.wire.center[0] - axis[0] * total / 2.0,
            self.wire.center[1] - axis[1] * total / 2.0,
            self.wire.standoff + self.wire.diameter / 2.0,
        ];
        Ok(WireSpec {
            segments: segments?,
            diameter: self.wire.diameter,
            origin,
            axis,
            standoff: self.wire.standoff,
        })
    }

    /// Imaging configuration with the axis bias folded into the scene.
    pub fn imaging(&self) -> ImagingConfig {
        let mut scene = self.scene.clone();
        if self.bias_along_axis != 0.0 {
            let axis = nv_axes_lab()[self.scene.nv_axis_index - 1];
            scene.bias_field =
                vec3::add(scene.bias_field, vec3::scale(axis, self.bias_along_axis));
        }
        ImagingConfig {
            scene,
            nv: self.nv.clone(),
            optics: self.optics.clone(),
            cell_size: self.wire.cell_size,
        }
    }

    /// Canonical echo in SI units; reloads to an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        let _ = writeln!(w, "[nv]");
        let _ = writeln!(w, "zero_field_splitting = {} Hz", self.nv.d_zfs);
        let _ = writeln!(w, "gyromagnetic_ratio = {} Hz/T", self.nv.gamma);
        let _ = writeln!(w, "linewidth = {} Hz", self.nv.linewidth_sigma);
        let _ = writeln!(w, "contrast = {}", self.nv.contrast);
        let _ = writeln!(w, "depth = {} m", self.nv.depth);
        let _ = writeln!(w, "site_pitch = {} m", self.nv.site_pitch);
        let _ = writeln!(w, "window_half = {} Hz", self.nv.window_half);
        let _ = writeln!(
            w,
            "branch = {}",
            match self.nv.branch {
                Branch::Minus => "minus",
                Branch::Plus => "plus",
            }
        );
        let _ = writeln!(
            w,
            "lineshape = {}",
            match self.nv.lineshape {
                LineshapeMode::AsPrinted => "as_printed",
                LineshapeMode::ConventionalDip => "conventional_dip",
            }
        );
        let _ = writeln!(w);
        let _ = writeln!(w, "[scene]");
        let _ = writeln!(w, "fov_width = {} m", self.scene.fov_width);
        let _ = writeln!(w, "fov_height = {} m", self.scene.fov_height);
        let _ = writeln!(w, "pixel_pitch = {} m", self.scene.pixel_pitch);
        let _ = writeln!(w, "frequency_step = {} Hz", self.scene.frequency_step);
        let _ = writeln!(w, "nv_axis_index = {}", self.scene.nv_axis_index);
        let _ = writeln!(w, "bias_along_axis = {} T", self.bias_along_axis);
        let _ = writeln!(w, "bias_x = {} T", self.scene.bias_field[0]);
        let _ = writeln!(w, "bias_y = {} T", self.scene.bias_field[1]);
        let _ = writeln!(w, "bias_z = {} T", self.scene.bias_field[2]);
        let _ = writeln!(w);
        let _ = writeln!(w, "[optics]");
        let _ = writeln!(w, "psf_fwhm = {} m", self.optics.psf_fwhm);
        let _ = writeln!(w, "n_diamond = {}", self.optics.n_diamond);
        let _ = writeln!(w, "n_glass = {}", self.optics.n_glass);
        let _ = writeln!(w, "plate_thickness = {} m", self.optics.plate_thickness);
        let _ = writeln!(w, "theta_max = {} rad", self.optics.theta_max);
        let _ = writeln!(w, "numerical_aperture = {}", self.optics.numerical_aperture);
        let _ = writeln!(w, "tirf_radius = {} m", self.optics.tirf_radius);
        let _ = writeln!(
            w,
            "index_order = {}",
            match self.optics.index_order {
                IndexOrder::AsPrinted => "as_printed",
                IndexOrder::Swapped => "swapped",
            }
        );
        let _ = writeln!(
            w,
            "angular_weighting = {}",
            match self.optics.angular_weighting {
                AngularWeighting::SolidAngle => "solid_angle",
                AngularWeighting::UniformTheta => "uniform_theta",
            }
        );
        for m in &self.materials {
            let _ = writeln!(w);
            let _ = writeln!(w, "[material.{}]", m.name);
            let _ = writeln!(w, "ms = {} A/m", m.ms);
            let _ = writeln!(w, "k1 = {} J/m3", m.k1);
            let _ = writeln!(w, "a_ex = {} J/m", m.a_ex);
        }
        let _ = writeln!(w);
        let _ = writeln!(w, "[wire]");
        let _ = writeln!(w, "diameter = {} m", self.wire.diameter);
        let _ = writeln!(w, "standoff = {} m", self.wire.standoff);
        let _ = writeln!(w, "cell_size = {} m", self.wire.cell_size);
        let _ = writeln!(w, "axis = {} {}", self.wire.axis[0], self.wire.axis[1]);
        let _ = writeln!(w, "center_x = {} m", self.wire.center[0]);
        let _ = writeln!(w, "center_y = {} m", self.wire.center[1]);
        let segs: Vec<String> = self
            .wire
            .segments
            .iter()
            .map(|s| format!("{}:{}:{}", s.material, s.length, s.scale))
            .collect();
        let _ = writeln!(w, "segments = {}", segs.join(", "));
        let _ = writeln!(w);
        let _ = writeln!(w, "[fit]");
        if !self.fit.materials.is_empty() {
            let _ = writeln!(w, "materials = {}", self.fit.materials.join(", "));
        }
        let _ = writeln!(w, "ms_min = {} A/m", self.fit.ms_min);
        let _ = writeln!(w, "ms_max = {} A/m", self.fit.ms_max);
        let _ = writeln!(w, "ms_step = {} A/m", self.fit.ms_step);
        let _ = writeln!(w, "diameter_min = {} m", self.fit.diameter_min);
        let _ = writeln!(w, "diameter_max = {} m", self.fit.diameter_max);
        let _ = writeln!(w, "diameter_step = {} m", self.fit.diameter_step);
        let _ = writeln!(w, "field_weight = {}", self.fit.field_weight);
        let _ = writeln!(w, "size_weight = {}", self.fit.size_weight);
        let _ = writeln!(w);
        let _ = writeln!(w, "[hysteresis]");
        let sweep: Vec<String> = self.hysteresis.sweep.iter().map(|h| h.to_string()).collect();
        let _ = writeln!(w, "sweep = {}", sweep.join(", "));
        let hc: Vec<String> = self
            .hysteresis
            .coercivities
            .iter()
            .map(|h| h.to_string())
            .collect();
        let _ = writeln!(w, "coercivities = {}", hc.join(", "));
        s
    }
}

fn material_mut<'a>(cfg: &'a mut RunConfig, section: &str) -> Result<&'a mut Material> {
    let name = section.strip_prefix("material.").unwrap();
    cfg.materials
        .iter_mut()
        .find(|m| m.name == name)
        .ok_or_else(|| Error::Geometry(format!("material '{name}' not declared")))
}
