//! OVF 2.0 text read/write for magnetization grids.
//!
//! Only the subset this toolkit produces is accepted on input: rectangular
//! mesh, `valuedim 3`, text data section, isotropic step sizes. All lengths
//! are meters. Values are written with shortest round-trip formatting, so
//! write → parse is bitwise lossless.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::magnetostatics::MagnetizationGrid;

fn fmt_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        line,
        msg: msg.into(),
    }
}

/// Serialize a grid as OVF 2.0 text.
pub fn write_ovf(grid: &MagnetizationGrid) -> String {
    let h = grid.cell_size;
    let [nx, ny, nz] = grid.dims;
    let o = grid.origin;
    let mut s = String::new();
    let _ = writeln!(s, "# OOMMF OVF 2.0");
    let _ = writeln!(s, "# Segment count: 1");
    let _ = writeln!(s, "# Begin: Segment");
    let _ = writeln!(s, "# Begin: Header");
    let _ = writeln!(s, "# Title: magnetization");
    let _ = writeln!(s, "# meshtype: rectangular");
    let _ = writeln!(s, "# meshunit: m");
    let _ = writeln!(s, "# xmin: {}", o[0]);
    let _ = writeln!(s, "# ymin: {}", o[1]);
    let _ = writeln!(s, "# zmin: {}", o[2]);
    let _ = writeln!(s, "# xmax: {}", o[0] + nx as f64 * h);
    let _ = writeln!(s, "# ymax: {}", o[1] + ny as f64 * h);
    let _ = writeln!(s, "# zmax: {}", o[2] + nz as f64 * h);
    let _ = writeln!(s, "# xbase: {}", o[0] + h / 2.0);
    let _ = writeln!(s, "# ybase: {}", o[1] + h / 2.0);
    let _ = writeln!(s, "# zbase: {}", o[2] + h / 2.0);
    let _ = writeln!(s, "# xstepsize: {h}");
    let _ = writeln!(s, "# ystepsize: {h}");
    let _ = writeln!(s, "# zstepsize: {h}");
    let _ = writeln!(s, "# xnodes: {nx}");
    let _ = writeln!(s, "# ynodes: {ny}");
    let _ = writeln!(s, "# znodes: {nz}");
    let _ = writeln!(s, "# valuedim: 3");
    let _ = writeln!(s, "# valueunits: A/m A/m A/m");
    let _ = writeln!(s, "# valuelabels: m_x m_y m_z");
    let _ = writeln!(s, "# End: Header");
    let _ = writeln!(s, "# Begin: Data Text");
    for m in &grid.m_vectors {
        let _ = writeln!(s, "{} {} {}", m[0], m[1], m[2]);
    }
    let _ = writeln!(s, "# End: Data Text");
    let _ = writeln!(s, "# End: Segment");
    s
}

#[derive(Default)]
struct Header {
    meshtype: Option<(String, usize)>,
    valuedim: Option<(usize, usize)>,
    multiplier: Option<f64>,
    nodes: [Option<usize>; 3],
    step: [Option<f64>; 3],
    base: [Option<f64>; 3],
    min: [Option<f64>; 3],
}

/// Parse OVF 2.0 text into a magnetization grid.
pub fn parse_ovf(text: &str) -> Result<MagnetizationGrid> {
    let mut hdr = Header::default();
    let mut data: Vec<[f64; 3]> = Vec::new();
    let mut in_data = false;
    let mut saw_data = false;
    let mut expected = 0usize;
    let mut last_line = 0usize;

    for (lineno0, raw) in text.lines().enumerate() {
        let line = lineno0 + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(body) = trimmed.strip_prefix('#') {
            let body = body.trim();
            let Some((key, val)) = body.split_once(':') else {
                continue; // bare comment
            };
            let key = key.trim().to_ascii_lowercase();
            let val = val.trim();
            match key.as_str() {
                "begin" => {
                    let v = val.to_ascii_lowercase();
                    if v.starts_with("data") {
                        if v != "data text" {
                            return Err(fmt_err(line, format!("unsupported data encoding '{val}'")));
                        }
                        expected = required_nodes(&hdr, line)?;
                        check_header(&hdr, line)?;
                        in_data = true;
                        saw_data = true;
                    }
                }
                "end" => {
                    if val.to_ascii_lowercase().starts_with("data") {
                        if data.len() < expected {
                            return Err(fmt_err(
                                line,
                                format!("data section ended after {} of {} rows", data.len(), expected),
                            ));
                        }
                        in_data = false;
                    }
                }
                "meshtype" => hdr.meshtype = Some((val.to_string(), line)),
                "valuedim" => {
                    let v = val
                        .parse::<usize>()
                        .map_err(|_| fmt_err(line, format!("bad valuedim '{val}'")))?;
                    hdr.valuedim = Some((v, line));
                }
                "valuemultiplier" => {
                    hdr.multiplier = Some(
                        val.parse::<f64>()
                            .map_err(|_| fmt_err(line, format!("bad valuemultiplier '{val}'")))?,
                    );
                }
                "xnodes" | "ynodes" | "znodes" => {
                    let d = dim_of(&key);
                    hdr.nodes[d] = Some(
                        val.parse::<usize>()
                            .map_err(|_| fmt_err(line, format!("bad {key} '{val}'")))?,
                    );
                }
                "xstepsize" | "ystepsize" | "zstepsize" => {
                    let d = dim_of(&key);
                    hdr.step[d] = Some(parse_f64(val, line, &key)?);
                }
                "xbase" | "ybase" | "zbase" => {
                    let d = dim_of(&key);
                    hdr.base[d] = Some(parse_f64(val, line, &key)?);
                }
                "xmin" | "ymin" | "zmin" => {
                    let d = dim_of(&key);
                    hdr.min[d] = Some(parse_f64(val, line, &key)?);
                }
                _ => {} // Title, Desc, units, labels, Segment count, ...
            }
            continue;
        }

        if !in_data {
            return Err(fmt_err(line, "numeric content outside a data section"));
        }
        if data.len() == expected {
            return Err(fmt_err(
                line,
                format!("more data rows than the declared {expected} nodes"),
            ));
        }
        let mut row = [0.0f64; 3];
        let mut parts = trimmed.split_whitespace();
        for v in row.iter_mut() {
            let tok = parts
                .next()
                .ok_or_else(|| fmt_err(line, "expected three components per data row"))?;
            *v = tok
                .parse::<f64>()
                .map_err(|_| fmt_err(line, format!("bad component '{tok}'")))?;
        }
        if parts.next().is_some() {
            return Err(fmt_err(line, "expected exactly three components per data row"));
        }
        data.push(row);
    }

    if !saw_data {
        return Err(fmt_err(last_line, "no data section found"));
    }
    if in_data {
        return Err(fmt_err(last_line, "data section not closed"));
    }

    let step = hdr.step[0].unwrap();
    let mult = hdr.multiplier.unwrap_or(1.0);
    if mult != 1.0 {
        for row in data.iter_mut() {
            for v in row.iter_mut() {
                *v *= mult;
            }
        }
    }
    let mut origin = [0.0; 3];
    for d in 0..3 {
        origin[d] = match (hdr.min[d], hdr.base[d]) {
            (Some(m), _) => m,
            (None, Some(b)) => b - step / 2.0,
            (None, None) => 0.0,
        };
    }

    Ok(MagnetizationGrid {
        cell_size: step,
        dims: [
            hdr.nodes[0].unwrap(),
            hdr.nodes[1].unwrap(),
            hdr.nodes[2].unwrap(),
        ],
        origin,
        m_vectors: data,
    })
}

fn dim_of(key: &str) -> usize {
    match key.as_bytes()[0] {
        b'x' => 0,
        b'y' => 1,
        _ => 2,
    }
}

fn parse_f64(val: &str, line: usize, key: &str) -> Result<f64> {
    val.parse::<f64>()
        .map_err(|_| fmt_err(line, format!("bad {key} '{val}'")))
}

fn required_nodes(hdr: &Header, line: usize) -> Result<usize> {
    let mut n = 1usize;
    for d in 0..3 {
        n *= hdr.nodes[d]
            .ok_or_else(|| fmt_err(line, "node counts missing before data section"))?;
    }
    Ok(n)
}

fn check_header(hdr: &Header, data_line: usize) -> Result<()> {
    match &hdr.meshtype {
        Some((t, l)) if !t.eq_ignore_ascii_case("rectangular") => {
            return Err(fmt_err(*l, format!("unsupported meshtype '{t}', need rectangular")));
        }
        None => return Err(fmt_err(data_line, "meshtype missing before data section")),
        _ => {}
    }
    match hdr.valuedim {
        Some((d, l)) if d != 3 => {
            return Err(fmt_err(l, format!("valuedim {d} unsupported, need 3")));
        }
        None => return Err(fmt_err(data_line, "valuedim missing before data section")),
        _ => {}
    }
    let s0 = hdr.step[0].ok_or_else(|| fmt_err(data_line, "xstepsize missing"))?;
    for d in 1..3 {
        let s = hdr.step[d].ok_or_else(|| fmt_err(data_line, "step size missing"))?;
        if ((s - s0) / s0).abs() > 1e-9 {
            return Err(fmt_err(
                data_line,
                format!("anisotropic step sizes ({s0} vs {s}) are not supported"),
            ));
        }
    }
    Ok(())
}
