//! Batch front end: subcommand dispatch and all file emission.
//!
//! Every subcommand loads a config (defaults when the file is omitted),
//! runs the corresponding pipeline, writes its outputs into the output
//! directory, and finishes with a `report.txt`. Failures surface as a
//! single-line error naming the failing stage; the binary exits nonzero.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::analysis::{
    extract_dipole_features, fit_parameters, simulate_hysteresis, value_grid, AxisLine,
    FeatureOptions, FitOptions, FitRanges, SwitchingModel,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::export::{
    curve_to_csv, features_to_table, fit_to_csv, mapset_from_csv, mapset_to_csv, mapset_to_pgm,
    vectormaps_to_csv,
};
use crate::imaging::simulate_image;
use crate::magnetostatics::{export_mif, parse_ovf, rasterize, write_ovf};
use crate::nv::{nv_axes_lab, vector_reconstruct, ScalarMap};
use crate::report::RunReport;

/// Options shared by all subcommands.
#[derive(Debug, Clone)]
pub struct CliOptions {
    pub out_dir: PathBuf,
    /// Omit timestamp and timings from the report so repeated runs are
    /// bitwise identical.
    pub stable_report: bool,
    /// Input file for `fit` (a map CSV) and `ingest-ovf` (an OVF file).
    pub input: Option<PathBuf>,
}

impl Default for CliOptions {
    fn default() -> Self {
        CliOptions {
            out_dir: PathBuf::from("."),
            stable_report: false,
            input: None,
        }
    }
}

fn stage<T>(name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    f().map_err(|e| e.in_stage(name))
}

struct Writer<'a> {
    dir: &'a Path,
    report: RunReport,
}

impl<'a> Writer<'a> {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        fs::create_dir_all(self.dir)?;
        fs::write(self.dir.join(name), bytes)?;
        self.report.add_output(name, bytes.len());
        Ok(())
    }

    fn finish(self) -> Result<()> {
        let text = self.report.to_text();
        fs::create_dir_all(self.dir)?;
        fs::write(self.dir.join("report.txt"), &text)?;
        Ok(())
    }
}

fn load(config_path: Option<&Path>) -> Result<RunConfig> {
    stage("load-config", || match config_path {
        Some(p) => crate::config::load_config(&fs::read_to_string(p)?),
        None => Ok(RunConfig::default()),
    })
}

/// The wire axis of the configured scene as a feature line through the
/// wire center.
fn wire_line(cfg: &RunConfig) -> AxisLine {
    AxisLine {
        point: cfg.wire.center,
        direction: cfg.wire.axis,
    }
}

/// Run one subcommand end to end. Valid subcommands: `simulate`,
/// `vectormap`, `fit`, `hysteresis`, `export-mif`, `ingest-ovf`.
pub fn run(subcommand: &str, config_path: Option<&Path>, opts: &CliOptions) -> Result<()> {
    match subcommand {
        "simulate" => run_simulate(config_path, opts),
        "vectormap" => run_vectormap(config_path, opts),
        "fit" => run_fit(config_path, opts),
        "hysteresis" => run_hysteresis(config_path, opts),
        "export-mif" => run_export_mif(config_path, opts),
        "ingest-ovf" => run_ingest_ovf(config_path, opts),
        other => Err(Error::FitFailure(format!("unknown subcommand '{other}'"))
            .in_stage("dispatch")),
    }
}

fn run_simulate(config_path: Option<&Path>, opts: &CliOptions) -> Result<()> {
    let cfg = load(config_path)?;
    let mut w = Writer {
        dir: &opts.out_dir,
        report: RunReport::new("simulate", cfg.to_text(), opts.stable_report),
    };

    let spec = stage("wire", || cfg.wire_spec())?;
    let imaging = cfg.imaging();
    let t0 = Instant::now();
    let map = stage("forward", || simulate_image(&spec, &imaging))?;
    w.report.add_timing("forward", t0.elapsed().as_secs_f64());

    let features = extract_dipole_features(&map, &wire_line(&cfg), &FeatureOptions::default());
    w.report
        .add_summary("max_abs_b_T", format!("{}", map.max_abs_b()));
    w.report
        .add_summary("valid_pixels", format!("{}/{}", map.valid_count(), map.lattice.len()));
    w.report
        .add_summary("dipole_features", format!("{}", features.len()));
    w.report
        .add_summary("feature_table", format!("\n{}", features_to_table(&features)));

    w.write("map.csv", mapset_to_csv(&map).as_bytes())?;
    let (pgm, sidecar) = mapset_to_pgm(&map);
    w.write("map.pgm", &pgm)?;
    w.write("map_pgm_scale.txt", sidecar.as_bytes())?;
    w.finish()
}

fn run_vectormap(config_path: Option<&Path>, opts: &CliOptions) -> Result<()> {
    let cfg = load(config_path)?;
    let mut w = Writer {
        dir: &opts.out_dir,
        report: RunReport::new("vectormap", cfg.to_text(), opts.stable_report),
    };
    let spec = stage("wire", || cfg.wire_spec())?;
    let grid = stage("rasterize", || rasterize(&spec, cfg.wire.cell_size))?;

    let axes = nv_axes_lab();
    let mut maps = Vec::with_capacity(4);
    for index in 1..=4usize {
        let mut axis_cfg = cfg.clone();
        axis_cfg.scene.nv_axis_index = index;
        let imaging = axis_cfg.imaging();
        let t0 = Instant::now();
        let map = stage(&format!("forward-axis{index}"), || {
            crate::imaging::simulate_image_from_grid(&grid, &imaging)
        })?;
        w.report
            .add_timing(&format!("axis{index}"), t0.elapsed().as_secs_f64());
        w.write(&format!("map_axis{index}.csv"), mapset_to_csv(&map).as_bytes())?;
        maps.push((axes[index - 1], map));
    }

    let projections: Vec<(crate::vec3::Vec3, ScalarMap)> = maps
        .iter()
        .map(|(axis, m)| {
            (
                *axis,
                ScalarMap {
                    lattice: m.lattice.clone(),
                    values: m.b_parallel.clone(),
                },
            )
        })
        .collect();
    let vm = stage("reconstruct", || vector_reconstruct(&projections))?;
    let finite = vm.bx.iter().filter(|v| v.is_finite()).count();
    w.report
        .add_summary("reconstructed_pixels", format!("{}/{}", finite, vm.bx.len()));
    w.write("vector.csv", vectormaps_to_csv(&vm).as_bytes())?;
    w.finish()
}

fn run_fit(config_path: Option<&Path>, opts: &CliOptions) -> Result<()> {
    let cfg = load(config_path)?;
    let input = opts.input.as_ref().ok_or_else(|| {
        Error::FitFailure("fit requires --input <map.csv>".into()).in_stage("load-input")
    })?;
    let measured = stage("load-input", || {
        mapset_from_csv(&fs::read_to_string(input)?)
    })?;

    let mut w = Writer {
        dir: &opts.out_dir,
        report: RunReport::new("fit", cfg.to_text(), opts.stable_report),
    };
    let spec = stage("wire", || cfg.wire_spec())?;

    // Materials to search: configured list, else every magnetic material
    // in the wire.
    let mut names = cfg.fit.materials.clone();
    if names.is_empty() {
        for seg in &spec.segments {
            if seg.material.ms > 0.0 && !names.contains(&seg.material.name) {
                names.push(seg.material.name.clone());
            }
        }
    }
    let ms_values = value_grid(cfg.fit.ms_min, cfg.fit.ms_max, cfg.fit.ms_step);
    let ranges = FitRanges {
        ms: names.into_iter().map(|n| (n, ms_values.clone())).collect(),
        diameters: value_grid(
            cfg.fit.diameter_min,
            cfg.fit.diameter_max,
            cfg.fit.diameter_step,
        ),
    };
    let fit_opts = FitOptions {
        line: wire_line(&cfg),
        features: FeatureOptions::default(),
        field_weight: cfg.fit.field_weight,
        size_weight: cfg.fit.size_weight,
        max_pair_distance: 1e-6,
    };

    let imaging = cfg.imaging();
    let t0 = Instant::now();
    let fit = stage("grid-search", || {
        fit_parameters(&measured, &spec, &ranges, &imaging, &fit_opts)
    })?;
    w.report.add_timing("grid-search", t0.elapsed().as_secs_f64());
    for (name, ms) in &fit.ms_per_material {
        w.report.add_summary(&format!("ms_{name}_A_per_m"), format!("{ms}"));
    }
    w.report.add_summary("diameter_m", format!("{}", fit.diameter));
    w.report.add_summary("objective", format!("{}", fit.objective));
    w.write("fit.csv", fit_to_csv(&fit).as_bytes())?;
    w.finish()
}

fn run_hysteresis(config_path: Option<&Path>, opts: &CliOptions) -> Result<()> {
    let cfg = load(config_path)?;
    let mut w = Writer {
        dir: &opts.out_dir,
        report: RunReport::new("hysteresis", cfg.to_text(), opts.stable_report),
    };
    let spec = stage("wire", || cfg.wire_spec())?;
    let model = SwitchingModel {
        h_c: if cfg.hysteresis.coercivities.len() == 1 {
            vec![cfg.hysteresis.coercivities[0]; spec.segments.len()]
        } else {
            cfg.hysteresis.coercivities.clone()
        },
    };

    let imaging = cfg.imaging();
    let t0 = Instant::now();
    let (series, curve) = stage("sweep", || {
        simulate_hysteresis(&spec, &model, &cfg.hysteresis.sweep, &imaging)
    })?;
    w.report.add_timing("sweep", t0.elapsed().as_secs_f64());

    for (k, (h, map)) in series.iter().enumerate() {
        w.write(&format!("frame_{k:02}.csv"), mapset_to_csv(map).as_bytes())?;
        w.report
            .add_summary(&format!("frame_{k:02}_h_T"), format!("{h}"));
    }
    match curve.coercivity {
        Some(hc) => w.report.add_summary("coercivity_T", format!("{hc}")),
        None => w.report.add_summary("coercivity_T", "out-of-range"),
    }
    w.write("curve.csv", curve_to_csv(&curve).as_bytes())?;
    w.finish()
}

fn run_export_mif(config_path: Option<&Path>, opts: &CliOptions) -> Result<()> {
    let cfg = load(config_path)?;
    let mut w = Writer {
        dir: &opts.out_dir,
        report: RunReport::new("export-mif", cfg.to_text(), opts.stable_report),
    };
    let spec = stage("wire", || cfg.wire_spec())?;
    let mif = stage("export-mif", || export_mif(&spec, None))?;
    w.report
        .add_summary("segments", format!("{}", spec.segments.len()));
    w.write("wire.mif", mif.as_bytes())?;
    w.finish()
}

fn run_ingest_ovf(config_path: Option<&Path>, opts: &CliOptions) -> Result<()> {
    let cfg = load(config_path)?;
    let input = opts.input.as_ref().ok_or_else(|| {
        Error::FitFailure("ingest-ovf requires --input <file.ovf>".into()).in_stage("load-input")
    })?;
    let grid = stage("parse-ovf", || {
        parse_ovf(&fs::read_to_string(input)?)
    })?;

    let mut w = Writer {
        dir: &opts.out_dir,
        report: RunReport::new("ingest-ovf", cfg.to_text(), opts.stable_report),
    };
    w.report.add_summary(
        "grid_dims",
        format!("{} x {} x {}", grid.dims[0], grid.dims[1], grid.dims[2]),
    );
    w.report
        .add_summary("cell_size_m", format!("{}", grid.cell_size));
    w.report
        .add_summary("magnetized_cells", format!("{}", grid.magnetized_cells()));
    w.write("grid.ovf", write_ovf(&grid).as_bytes())?;
    w.finish()
}
