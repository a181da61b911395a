//! End-to-end checks of the batch front end through the real binary.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wirefield"))
}

/// Small scene that renders in well under a second.
const MICRO_CONFIG: &str = "\
[nv]
site_pitch = 100 nm

[scene]
fov_width = 4 um
fov_height = 1.5 um
pixel_pitch = 200 nm
bias_along_axis = 40 G

[optics]
psf_fwhm = 0.5 um
tirf_radius = 0.3 um

[material.Fe]
ms = 3e5 A/m
k1 = 4.7e4 J/m3
a_ex = 25 pJ/m

[wire]
diameter = 150 nm
cell_size = 25 nm
segments = Fe:2um:+1

[fit]
ms_min = 2.5e5 A/m
ms_max = 3.5e5 A/m
ms_step = 0.5e5 A/m
diameter_min = 146 nm
diameter_max = 154 nm
diameter_step = 4 nm
";

fn write_config(dir: &Path) -> std::path::PathBuf {
    let p = dir.join("run.cfg");
    fs::write(&p, MICRO_CONFIG).unwrap();
    p
}

#[test]
fn simulate_writes_maps_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path());
    let out = tmp.path().join("out");
    let status = bin()
        .args(["simulate"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for name in ["map.csv", "map.pgm", "map_pgm_scale.txt", "report.txt"] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("max_abs_b_T"));
    assert!(report.contains("config echo"));
}

#[test]
fn repeated_stable_runs_are_bitwise_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let status = bin()
            .args(["simulate"])
            .arg(&cfg)
            .arg("--out-dir")
            .arg(out)
            .arg("--stable-report")
            .status()
            .unwrap();
        assert!(status.success());
    }
    for name in ["map.csv", "map.pgm", "map_pgm_scale.txt", "report.txt"] {
        let x = fs::read(a.join(name)).unwrap();
        let y = fs::read(b.join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between runs");
    }
}

#[test]
fn fit_closes_the_loop_via_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path());
    let sim_out = tmp.path().join("sim");
    assert!(bin()
        .args(["simulate"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&sim_out)
        .status()
        .unwrap()
        .success());

    let fit_out = tmp.path().join("fit");
    assert!(bin()
        .args(["fit"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&fit_out)
        .arg("--input")
        .arg(sim_out.join("map.csv"))
        .status()
        .unwrap()
        .success());
    let fit = fs::read_to_string(fit_out.join("fit.csv")).unwrap();
    let field = |name: &str| -> f64 {
        fit.lines()
            .find(|l| l.starts_with(name))
            .unwrap_or_else(|| panic!("{name} missing in {fit}"))
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(field("ms_Fe_A_per_m"), 3.0e5);
    assert!((field("diameter_m") - 150e-9).abs() < 1e-15);
    // The lattice pitch reconstructed from printed coordinates can be one
    // ulp off, leaving rounding dust in the dipole sizes.
    assert!(field("objective") < 1e-20, "objective {}", field("objective"));
}

#[test]
fn export_and_ingest_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path());
    let mif_out = tmp.path().join("mif");
    assert!(bin()
        .args(["export-mif"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&mif_out)
        .status()
        .unwrap()
        .success());
    let mif = fs::read_to_string(mif_out.join("wire.mif")).unwrap();
    assert!(mif.contains("MIF 2.1"));
    assert!(mif.contains("cellsize"));

    // Build an OVF through the library, ingest it through the binary.
    let grid = wirefield::magnetostatics::rasterize(
        &wirefield::config::load_config(MICRO_CONFIG)
            .unwrap()
            .wire_spec()
            .unwrap(),
        25e-9,
    )
    .unwrap();
    let ovf_path = tmp.path().join("grid_in.ovf");
    fs::write(&ovf_path, wirefield::magnetostatics::write_ovf(&grid)).unwrap();
    let ovf_out = tmp.path().join("ovf");
    assert!(bin()
        .args(["ingest-ovf"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&ovf_out)
        .arg("--input")
        .arg(&ovf_path)
        .status()
        .unwrap()
        .success());
    let round = fs::read_to_string(ovf_out.join("grid.ovf")).unwrap();
    assert_eq!(round, wirefield::magnetostatics::write_ovf(&grid));
}

#[test]
fn truncated_ovf_fails_with_line_number() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path());
    let grid = wirefield::magnetostatics::MagnetizationGrid {
        cell_size: 4e-9,
        dims: [2, 2, 2],
        origin: [0.0; 3],
        m_vectors: vec![[1.0; 3]; 8],
    };
    let text = wirefield::magnetostatics::write_ovf(&grid);
    let mut lines: Vec<&str> = text.lines().collect();
    let data_start = lines.iter().position(|l| l.contains("Begin: Data")).unwrap();
    lines.remove(data_start + 2);
    let bad = tmp.path().join("bad.ovf");
    fs::write(&bad, lines.join("\n")).unwrap();

    let output = bin()
        .args(["ingest-ovf"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(tmp.path().join("out"))
        .arg("--input")
        .arg(&bad)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    let mut err_lines = stderr.lines().filter(|l| !l.trim().is_empty());
    let line = err_lines.next().unwrap();
    assert!(line.starts_with("error:"), "{stderr}");
    assert!(line.contains("line"), "no line number in: {stderr}");
    assert!(line.contains("parse-ovf"), "no stage in: {stderr}");
    assert_eq!(err_lines.next(), None, "error not single-line: {stderr}");
}

#[test]
fn hysteresis_writes_curve_and_frames() {
    let tmp = tempfile::tempdir().unwrap();
    let mut config = String::from(MICRO_CONFIG);
    config.push_str("\n[hysteresis]\nsweep = -71, -295, -305, -375 G\ncoercivities = 300 G\n");
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, &config).unwrap();
    let out = tmp.path().join("out");
    assert!(bin()
        .args(["hysteresis"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let curve = fs::read_to_string(out.join("curve.csv")).unwrap();
    assert!(curve.starts_with("# coercivity_T = 0.03"), "{curve}");
    assert!(curve.contains("h_T,m_norm"));
    assert_eq!(curve.lines().count(), 2 + 4);
    for k in 0..4 {
        assert!(out.join(format!("frame_{k:02}.csv")).exists());
    }
}

#[test]
fn vectormap_writes_reconstruction() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path());
    let out = tmp.path().join("out");
    assert!(bin()
        .args(["vectormap"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    for name in [
        "map_axis1.csv",
        "map_axis2.csv",
        "map_axis3.csv",
        "map_axis4.csv",
        "vector.csv",
        "report.txt",
    ] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    let vector = fs::read_to_string(out.join("vector.csv")).unwrap();
    assert!(vector.starts_with("x_m,y_m,bx_T,by_T,bz_T,residual_T"));
}
