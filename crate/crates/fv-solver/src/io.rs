use crate::field::StateField;
use crate::grid::GridSpec;
use crate::run::{FrameSeries, SolverDescriptor};
use crate::SolverError;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Manifest written next to the frame files: output times, grid, solver
/// descriptor, and component names.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesManifest {
    pub times: Vec<f64>,
    pub grid: GridSpec,
    pub solver: SolverDescriptor,
    pub components: Vec<String>,
}

/// Write `series` as one CSV per frame (`frame_%04d.csv`) plus
/// `manifest.json` under `dir`. Values are printed with 17 significant
/// digits, which round-trips 64-bit floats exactly.
pub fn write_series(
    series: &FrameSeries,
    components: &[&str],
    dir: &Path,
) -> Result<(), SolverError> {
    fs::create_dir_all(dir)?;
    let grid = series.grid();
    let dim = grid.dim();
    for (k, frame) in series.frames.iter().enumerate() {
        let path = dir.join(format!("frame_{k:04}.csv"));
        let mut w = BufWriter::new(fs::File::create(path)?);
        if dim == 2 {
            write!(w, "i,j,x,y")?;
        } else {
            write!(w, "i,x")?;
        }
        for c in components {
            write!(w, ",{c}")?;
        }
        writeln!(w)?;
        let (nx, ny) = frame.interior_extent();
        for iy in 0..ny {
            for ix in 0..nx {
                if dim == 2 {
                    write!(
                        w,
                        "{ix},{iy},{:.16e},{:.16e}",
                        grid.center(0, ix),
                        grid.center(1, iy)
                    )?;
                } else {
                    write!(w, "{ix},{:.16e}", grid.center(0, ix))?;
                }
                for v in frame.interior(ix, iy) {
                    write!(w, ",{v:.16e}")?;
                }
                writeln!(w)?;
            }
        }
    }
    let manifest = SeriesManifest {
        times: series.times.clone(),
        grid: grid.clone(),
        solver: series.provenance.clone(),
        components: components.iter().map(|s| s.to_string()).collect(),
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| SolverError::Malformed(e.to_string()))?;
    fs::write(dir.join("manifest.json"), json)?;
    Ok(())
}

/// Read a series previously written by [`write_series`].
pub fn read_series(dir: &Path) -> Result<(FrameSeries, SeriesManifest), SolverError> {
    let manifest: SeriesManifest =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)
            .map_err(|e| SolverError::Malformed(format!("manifest.json: {e}")))?;
    let m = manifest.components.len();
    let dim = manifest.grid.dim();
    let mut frames = Vec::with_capacity(manifest.times.len());
    for k in 0..manifest.times.len() {
        let path = dir.join(format!("frame_{k:04}.csv"));
        let text = fs::read_to_string(&path)?;
        let mut field = StateField::zeros(manifest.grid.clone(), m);
        for (lineno, line) in text.lines().enumerate() {
            if lineno == 0 {
                continue; // header
            }
            let cols: Vec<&str> = line.split(',').collect();
            let coords = if dim == 2 { 2 } else { 1 };
            if cols.len() != 2 * coords + m {
                return Err(SolverError::Malformed(format!(
                    "{}: line {} has {} columns",
                    path.display(),
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse_idx = |s: &str| -> Result<usize, SolverError> {
                s.parse()
                    .map_err(|_| SolverError::Malformed(format!("bad index `{s}`")))
            };
            let parse_f = |s: &str| -> Result<f64, SolverError> {
                s.parse()
                    .map_err(|_| SolverError::Malformed(format!("bad float `{s}`")))
            };
            let ix = parse_idx(cols[0])?;
            let iy = if dim == 2 { parse_idx(cols[1])? } else { 0 };
            let mut vals = Vec::with_capacity(m);
            for c in 0..m {
                vals.push(parse_f(cols[2 * coords + c])?);
            }
            field.set_interior(ix, iy, &vals);
        }
        field.fill_ghosts();
        frames.push(field);
    }
    let series = FrameSeries {
        times: manifest.times.clone(),
        frames,
        provenance: manifest.solver.clone(),
    };
    Ok((series, manifest))
}
