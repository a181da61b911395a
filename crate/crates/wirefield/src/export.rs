//! Deterministic file emission: CSV maps, 16-bit binary PGM with a text
//! sidecar, fit and hysteresis tables. All floats use shortest
//! round-trip formatting, so identical inputs produce identical bytes.

use std::fmt::Write as _;

use crate::analysis::{DipoleFeature, FitResult, HysteresisCurve};
use crate::error::{Error, Result};
use crate::imaging::MapSet;
use crate::magnetostatics::Lattice2D;
use crate::nv::VectorMaps;

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

/// One row per pixel: `x_m,y_m,b_T,contrast,linewidth_Hz,fit_ok`,
/// y-major, x fastest. Invalid pixels carry `nan` and `fit_ok = 0`.
pub fn mapset_to_csv(map: &MapSet) -> String {
    let lat = &map.lattice;
    let mut s = String::with_capacity(map.b_parallel.len() * 48);
    s.push_str("x_m,y_m,b_T,contrast,linewidth_Hz,fit_ok\n");
    for j in 0..lat.ny {
        for i in 0..lat.nx {
            let idx = lat.index(i, j);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                fmt_f64(lat.x(i)),
                fmt_f64(lat.y(j)),
                fmt_f64(map.b_parallel[idx]),
                fmt_f64(map.contrast[idx]),
                fmt_f64(map.linewidth[idx]),
                u8::from(map.fit_ok[idx]),
            );
        }
    }
    s
}

/// Parse a map CSV produced by [`mapset_to_csv`] back into a `MapSet`.
pub fn mapset_from_csv(text: &str) -> Result<MapSet> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Format {
            line: 1,
            msg: "empty map CSV".into(),
        })?;
    if header.trim() != "x_m,y_m,b_T,contrast,linewidth_Hz,fit_ok" {
        return Err(Error::Format {
            line: 1,
            msg: format!("unexpected header '{header}'"),
        });
    }

    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    let mut rows = Vec::new();
    for (line0, raw) in lines {
        let line = line0 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Format {
                line,
                msg: format!("expected 6 fields, found {}", fields.len()),
            });
        }
        let parse = |f: &str| -> Result<f64> {
            let t = f.trim();
            if t == "nan" {
                return Ok(f64::NAN);
            }
            t.parse::<f64>().map_err(|_| Error::Format {
                line,
                msg: format!("bad number '{t}'"),
            })
        };
        let x = parse(fields[0])?;
        let y = parse(fields[1])?;
        if !xs.iter().any(|v| *v == x) {
            xs.push(x);
        }
        if !ys.iter().any(|v| *v == y) {
            ys.push(y);
        }
        rows.push((
            parse(fields[2])?,
            parse(fields[3])?,
            parse(fields[4])?,
            fields[5].trim() == "1",
        ));
    }

    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (nx, ny) = (xs.len(), ys.len());
    if nx * ny != rows.len() || nx == 0 {
        return Err(Error::Format {
            line: 1,
            msg: format!("{} rows do not fill a {nx} x {ny} lattice", rows.len()),
        });
    }
    let pitch = if nx > 1 {
        xs[1] - xs[0]
    } else if ny > 1 {
        ys[1] - ys[0]
    } else {
        1.0
    };
    let lattice = Lattice2D {
        x0: xs[0],
        y0: ys[0],
        pitch,
        nx,
        ny,
        z: 0.0,
    };
    let mut map = MapSet {
        lattice,
        b_parallel: Vec::with_capacity(rows.len()),
        contrast: Vec::with_capacity(rows.len()),
        linewidth: Vec::with_capacity(rows.len()),
        fit_ok: Vec::with_capacity(rows.len()),
    };
    for (b, c, w, ok) in rows {
        map.b_parallel.push(b);
        map.contrast.push(c);
        map.linewidth.push(w);
        map.fit_ok.push(ok);
    }
    Ok(map)
}

/// 16-bit binary PGM (P5, big-endian) of the field map, linearly scaled
/// over the valid min/max; invalid pixels map to 0. Returns the PGM bytes
/// and a text sidecar stating the scaling.
pub fn mapset_to_pgm(map: &MapSet) -> (Vec<u8>, String) {
    let lat = &map.lattice;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (b, ok) in map.b_parallel.iter().zip(&map.fit_ok) {
        if *ok {
            lo = lo.min(*b);
            hi = hi.max(*b);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = 0.0;
        hi = 0.0;
    }
    let span = hi - lo;

    let mut bytes = Vec::with_capacity(32 + 2 * lat.len());
    bytes.extend_from_slice(format!("P5\n{} {}\n65535\n", lat.nx, lat.ny).as_bytes());
    for j in 0..lat.ny {
        for i in 0..lat.nx {
            let idx = lat.index(i, j);
            let v: u16 = if map.fit_ok[idx] && span > 0.0 {
                (((map.b_parallel[idx] - lo) / span * 65535.0).round() as i64)
                    .clamp(0, 65535) as u16
            } else {
                0
            };
            bytes.extend_from_slice(&v.to_be_bytes());
        }
    }

    let mut sidecar = String::new();
    let _ = writeln!(sidecar, "format = pgm16-be");
    let _ = writeln!(sidecar, "width = {}", lat.nx);
    let _ = writeln!(sidecar, "height = {}", lat.ny);
    let _ = writeln!(sidecar, "pixel_pitch_m = {}", fmt_f64(lat.pitch));
    let _ = writeln!(sidecar, "min_T = {}", fmt_f64(lo));
    let _ = writeln!(sidecar, "max_T = {}", fmt_f64(hi));
    let _ = writeln!(sidecar, "invalid_value = 0");
    (bytes, sidecar)
}

/// Reconstructed vector maps: `x_m,y_m,bx_T,by_T,bz_T,residual_T`.
pub fn vectormaps_to_csv(vm: &VectorMaps) -> String {
    let lat = &vm.lattice;
    let mut s = String::with_capacity(vm.bx.len() * 56);
    s.push_str("x_m,y_m,bx_T,by_T,bz_T,residual_T\n");
    for j in 0..lat.ny {
        for i in 0..lat.nx {
            let idx = lat.index(i, j);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                fmt_f64(lat.x(i)),
                fmt_f64(lat.y(j)),
                fmt_f64(vm.bx[idx]),
                fmt_f64(vm.by[idx]),
                fmt_f64(vm.bz[idx]),
                fmt_f64(vm.residual[idx]),
            );
        }
    }
    s
}

/// Long-format fit table: `parameter,value`.
pub fn fit_to_csv(fit: &FitResult) -> String {
    let mut s = String::from("parameter,value\n");
    for (name, ms) in &fit.ms_per_material {
        let _ = writeln!(s, "ms_{name}_A_per_m,{}", fmt_f64(*ms));
    }
    let _ = writeln!(s, "diameter_m,{}", fmt_f64(fit.diameter));
    let _ = writeln!(s, "field_discrepancy,{}", fmt_f64(fit.field_discrepancy));
    let _ = writeln!(s, "size_discrepancy,{}", fmt_f64(fit.size_discrepancy));
    let _ = writeln!(s, "objective,{}", fmt_f64(fit.objective));
    s
}

/// Hysteresis table: a coercivity comment line then `h_T,m_norm` rows.
pub fn curve_to_csv(curve: &HysteresisCurve) -> String {
    let mut s = String::new();
    match curve.coercivity {
        Some(hc) => {
            let _ = writeln!(s, "# coercivity_T = {}", fmt_f64(hc));
        }
        None => {
            let _ = writeln!(s, "# coercivity_T = out-of-range");
        }
    }
    s.push_str("h_T,m_norm\n");
    for (h, m) in &curve.points {
        let _ = writeln!(s, "{},{}", fmt_f64(*h), fmt_f64(*m));
    }
    s
}

/// Feature table for run reports: one line per dipole feature.
pub fn features_to_table(features: &[DipoleFeature]) -> String {
    let mut s =
        String::from("index,location_m,peak_pos_T,peak_neg_T,dipole_size_m,max_abs_T,positive_first\n");
    for (i, f) in features.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            i,
            fmt_f64(f.location),
            fmt_f64(f.peak_pos),
            fmt_f64(f.peak_neg),
            fmt_f64(f.dipole_size),
            fmt_f64(f.max_abs),
            u8::from(f.positive_first),
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_map() -> MapSet {
        let lattice = Lattice2D {
            x0: -1e-6,
            y0: -0.5e-6,
            pitch: 0.5e-6,
            nx: 5,
            ny: 3,
            z: 0.0,
        };
        let n = lattice.len();
        let mut map = MapSet {
            lattice,
            b_parallel: (0..n).map(|i| (i as f64 - 7.0) * 1e-5).collect(),
            contrast: vec![0.01; n],
            linewidth: vec![6e6; n],
            fit_ok: vec![true; n],
        };
        map.b_parallel[4] = f64::NAN;
        map.contrast[4] = f64::NAN;
        map.linewidth[4] = f64::NAN;
        map.fit_ok[4] = false;
        map
    }

    #[test]
    fn csv_round_trip() {
        let map = sample_map();
        let csv = mapset_to_csv(&map);
        let back = mapset_from_csv(&csv).unwrap();
        assert_eq!(back.lattice, map.lattice);
        assert_eq!(back.fit_ok, map.fit_ok);
        for (a, b) in map.b_parallel.iter().zip(&back.b_parallel) {
            if a.is_nan() {
                assert!(b.is_nan());
            } else {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn pgm_scales_valid_range() {
        let map = sample_map();
        let (bytes, sidecar) = mapset_to_pgm(&map);
        assert!(bytes.starts_with(b"P5\n5 3\n65535\n"));
        let header_len = b"P5\n5 3\n65535\n".len();
        assert_eq!(bytes.len(), header_len + 2 * 15);
        // Invalid pixel is zero.
        let px4 = &bytes[header_len + 8..header_len + 10];
        assert_eq!(px4, &[0, 0]);
        assert!(sidecar.contains("min_T"));
        assert!(sidecar.contains("max_T"));
        // The maximum valid pixel maps to 65535.
        let last = &bytes[bytes.len() - 2..];
        assert_eq!(u16::from_be_bytes([last[0], last[1]]), 65535);
    }

    #[test]
    fn pgm_identical_across_calls() {
        let map = sample_map();
        let (a, sa) = mapset_to_pgm(&map);
        let (b, sb) = mapset_to_pgm(&map);
        assert_eq!(a, b);
        assert_eq!(sa, sb);
    }
}
