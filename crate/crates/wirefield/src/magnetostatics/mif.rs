//! MIF 2.1 export: a write-only problem description so a wire can be
//! relaxed in an external micromagnetic solver.
//!
//! The wire is described in a local frame with the cylinder along x and a
//! square cross-section bounding box; a Tcl script atlas carves the
//! cylinder and assigns one region per segment. Ms, K1, and A are emitted
//! per region.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::magnetostatics::WireSpec;

/// Default relaxation mesh edge, m.
pub const DEFAULT_RELAX_CELL: f64 = 4e-9;

fn region_name(index: usize, material: &str) -> String {
    let sanitized: String = material
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("seg{index}_{sanitized}")
}

/// Emit MIF 2.1 text for the wire. `relax_cell = None` uses
/// [`DEFAULT_RELAX_CELL`].
pub fn export_mif(spec: &WireSpec, relax_cell: Option<f64>) -> Result<String> {
    spec.validate()?;
    let cell = relax_cell.unwrap_or(DEFAULT_RELAX_CELL);
    if !(cell > 0.0) {
        return Err(Error::Geometry("relaxation cell size must be positive".into()));
    }
    for seg in &spec.segments {
        let m = &seg.material;
        if m.ms > 0.0 && (!(m.k1 > 0.0) || !(m.a_ex > 0.0)) {
            return Err(Error::IncompleteMaterial {
                name: m.name.clone(),
            });
        }
    }

    let total = spec.total_length();
    let d = spec.diameter;
    let names: Vec<String> = spec
        .segments
        .iter()
        .enumerate()
        .map(|(i, s)| region_name(i, &s.material.name))
        .collect();

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, "# MIF 2.1");
    let _ = writeln!(w, "# Segmented cylindrical nanowire, axis along x.");
    let _ = writeln!(w, "# Generated by wirefield {}.", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(w);
    let _ = writeln!(w, "set total_length {total}");
    let _ = writeln!(w, "set diameter {d}");
    let _ = writeln!(w);

    // Region script: relative coordinates, 0 = universe, 1..n = segments.
    let _ = writeln!(w, "proc WireRegion {{ xrel yrel zrel }} {{");
    let _ = writeln!(w, "    set d {d}");
    let _ = writeln!(w, "    set r [expr {{$d / 2.0}}]");
    let _ = writeln!(w, "    set dy [expr {{($yrel - 0.5) * $d}}]");
    let _ = writeln!(w, "    set dz [expr {{($zrel - 0.5) * $d}}]");
    let _ = writeln!(w, "    if {{$dy*$dy + $dz*$dz > $r*$r}} {{ return 0 }}");
    let _ = writeln!(w, "    set x [expr {{$xrel * {total}}}]");
    let mut start = 0.0;
    for (i, seg) in spec.segments.iter().enumerate() {
        let end = start + seg.length;
        if i + 1 == spec.segments.len() {
            let _ = writeln!(w, "    return {}", i + 1);
        } else {
            let _ = writeln!(w, "    if {{$x < {end}}} {{ return {} }}", i + 1);
        }
        start = end;
    }
    let _ = writeln!(w, "}}");
    let _ = writeln!(w);

    let _ = writeln!(w, "Specify Oxs_ScriptAtlas:atlas {{");
    let _ = writeln!(w, "    xrange {{0 {total}}}");
    let _ = writeln!(w, "    yrange {{0 {d}}}");
    let _ = writeln!(w, "    zrange {{0 {d}}}");
    let _ = writeln!(w, "    regions {{ {} }}", names.join(" "));
    let _ = writeln!(w, "    script WireRegion");
    let _ = writeln!(w, "}}");
    let _ = writeln!(w);

    let _ = writeln!(w, "Specify Oxs_RectangularMesh:mesh {{");
    let _ = writeln!(w, "    cellsize {{{cell} {cell} {cell}}}");
    let _ = writeln!(w, "    atlas :atlas");
    let _ = writeln!(w, "}}");
    let _ = writeln!(w);

    let _ = writeln!(w, "Specify Oxs_UniaxialAnisotropy {{");
    let _ = writeln!(w, "    K1 {{ Oxs_AtlasScalarField {{");
    let _ = writeln!(w, "        atlas :atlas");
    let _ = writeln!(w, "        default_value 0");
    let _ = writeln!(w, "        values {{");
    for (name, seg) in names.iter().zip(&spec.segments) {
        let _ = writeln!(w, "            {name} {}", seg.material.k1);
    }
    let _ = writeln!(w, "        }}");
    let _ = writeln!(w, "    }} }}");
    let _ = writeln!(w, "    axis {{ Oxs_UniformVectorField {{ vector {{1 0 0}} }} }}");
    let _ = writeln!(w, "}}");
    let _ = writeln!(w);

    let _ = writeln!(w, "Specify Oxs_Exchange6Ngbr {{");
    let _ = writeln!(w, "    atlas :atlas");
    let _ = writeln!(w, "    default_A 0");
    let _ = writeln!(w, "    A {{");
    for (i, (name, seg)) in names.iter().zip(&spec.segments).enumerate() {
        let _ = writeln!(w, "        {name} {name} {}", seg.material.a_ex);
        if i + 1 < spec.segments.len() {
            let a = seg.material.a_ex.min(spec.segments[i + 1].material.a_ex);
            let _ = writeln!(w, "        {name} {} {a}", names[i + 1]);
        }
    }
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "}}");
    let _ = writeln!(w);

    let _ = writeln!(w, "Specify Oxs_Demag {{}}");
    let _ = writeln!(w);
    let _ = writeln!(w, "Specify Oxs_CGEvolve:evolve {{}}");
    let _ = writeln!(w);

    let _ = writeln!(w, "Specify Oxs_MinDriver {{");
    let _ = writeln!(w, "    evolver :evolve");
    let _ = writeln!(w, "    stopping_mxHxm 0.1");
    let _ = writeln!(w, "    mesh :mesh");
    let _ = writeln!(w, "    Ms {{ Oxs_AtlasScalarField {{");
    let _ = writeln!(w, "        atlas :atlas");
    let _ = writeln!(w, "        default_value 0");
    let _ = writeln!(w, "        values {{");
    for (name, seg) in names.iter().zip(&spec.segments) {
        let _ = writeln!(w, "            {name} {}", seg.material.ms * seg.scale.abs());
    }
    let _ = writeln!(w, "        }}");
    let _ = writeln!(w, "    }} }}");
    let _ = writeln!(w, "    m0 {{ Oxs_AtlasVectorField {{");
    let _ = writeln!(w, "        atlas :atlas");
    let _ = writeln!(w, "        default_value {{1 0 0}}");
    let _ = writeln!(w, "        values {{");
    // Initial moments in the local frame: the wire axis maps to +x.
    for (name, seg) in names.iter().zip(&spec.segments) {
        let along = seg.direction[0] * spec.axis[0]
            + seg.direction[1] * spec.axis[1]
            + seg.direction[2] * spec.axis[2];
        let sign = if seg.scale * along < 0.0 { -1.0 } else { 1.0 };
        let _ = writeln!(w, "            {name} {{{sign} 0 0}}");
    }
    let _ = writeln!(w, "        }}");
    let _ = writeln!(w, "    }} }}");
    let _ = writeln!(w, "    basename wire");
    let _ = writeln!(w, "}}");
    let _ = writeln!(w);
    let _ = writeln!(w, "Destination archive mmArchive");
    let _ = writeln!(w, "Schedule Oxs_MinDriver::Magnetization archive Stage 1");

    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnetostatics::{Material, Segment};

    fn seg(mat: Material, len: f64) -> Segment {
        Segment::new(mat, len, [1.0, 0.0, 0.0], 1.0)
    }

    #[test]
    fn iron_wire_carries_constants() {
        let spec = WireSpec::along_x(vec![seg(Material::iron(), 12.5e-6)], 188e-9, 15e-9);
        let mif = export_mif(&spec, None).unwrap();
        assert!(mif.contains("47000"), "K1 missing:\n{mif}");
        assert!(mif.contains("0.000000000025"), "A missing:\n{mif}");
        assert!(mif.contains("1200000"), "Ms missing");
    }

    #[test]
    fn default_cellsize_is_4nm() {
        let spec = WireSpec::along_x(vec![seg(Material::iron(), 1e-6)], 188e-9, 15e-9);
        let mif = export_mif(&spec, None).unwrap();
        let line = mif
            .lines()
            .find(|l| l.trim_start().starts_with("cellsize"))
            .unwrap();
        let first = line
            .trim_start()
            .trim_start_matches("cellsize {")
            .split_whitespace()
            .next()
            .unwrap();
        assert_eq!(first.parse::<f64>().unwrap(), 4e-9);
    }

    #[test]
    fn two_materials_give_two_regions() {
        let spec = WireSpec::along_x(
            vec![seg(Material::iron(), 2e-6), seg(Material::cobalt(), 3e-6)],
            200e-9,
            15e-9,
        );
        let mif = export_mif(&spec, Some(5e-9)).unwrap();
        assert!(mif.contains("seg0_Fe"));
        assert!(mif.contains("seg1_Co"));
        assert!(mif.contains("seg0_Fe 1200000"));
        assert!(mif.contains("seg1_Co 1000000"));
    }

    #[test]
    fn missing_constants_rejected() {
        let bad = Material::new("X", 1.0e6, 0.0, 0.0);
        let spec = WireSpec::along_x(vec![seg(bad, 1e-6)], 188e-9, 15e-9);
        assert!(matches!(
            export_mif(&spec, None),
            Err(Error::IncompleteMaterial { .. })
        ));
    }

    #[test]
    fn nonmagnetic_segments_are_exempt() {
        let spec = WireSpec::along_x(
            vec![seg(Material::iron(), 1e-6), seg(Material::gold(), 1e-6)],
            188e-9,
            15e-9,
        );
        assert!(export_mif(&spec, None).is_ok());
    }
}
