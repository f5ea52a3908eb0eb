//! FieldState import/export.
//!
//! Data file: CSV with header line `x,y,z,vx,vy,vz,p,rho`, one row per grid
//! point, iterated x-outer / y-middle / z-inner, every value printed with the
//! fixed `{:.17e}` format (so identical states produce identical bytes).
//! Sidecar: `<data>.header.json` holding the grid and time stamp.

use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ModalError, Result};

use super::{FieldState, Grid};

/// Sidecar header describing a stored [`FieldState`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldHeader {
    pub grid: Grid,
    pub time_stamp: f64,
}

fn io_err(path: &Path, e: std::io::Error) -> ModalError {
    ModalError::Io { path: path.display().to_string(), source: e }
}

pub fn header_path(data_path: &Path) -> std::path::PathBuf {
    let mut os = data_path.as_os_str().to_owned();
    os.push(".header.json");
    std::path::PathBuf::from(os)
}

/// Write a field and its sidecar header.
pub fn write_field_csv(path: &Path, f: &FieldState) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "x,y,z,vx,vy,vz,p,rho").map_err(|e| io_err(path, e))?;
    let g = &f.grid;
    for ix in 0..g.nx {
        for iy in 0..g.ny {
            for iz in 0..g.nz {
                writeln!(
                    w,
                    "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                    g.x(ix),
                    g.y(iy),
                    g.z(iz),
                    f.vx[[ix, iy, iz]],
                    f.vy[[ix, iy, iz]],
                    f.vz[[ix, iy, iz]],
                    f.p[[ix, iy, iz]],
                    f.rho[[ix, iy, iz]],
                )
                .map_err(|e| io_err(path, e))?;
            }
        }
    }
    w.flush().map_err(|e| io_err(path, e))?;
    let header = FieldHeader { grid: f.grid.clone(), time_stamp: f.time_stamp };
    let hp = header_path(path);
    let text = serde_json::to_string_pretty(&header).expect("header serializes");
    std::fs::write(&hp, text).map_err(|e| io_err(&hp, e))?;
    Ok(())
}

/// Read a field written by [`write_field_csv`].
pub fn read_field_csv(path: &Path) -> Result<FieldState> {
    let hp = header_path(path);
    let htext = std::fs::read_to_string(&hp).map_err(|e| io_err(&hp, e))?;
    let header: FieldHeader = serde_json::from_str(&htext).map_err(|e| ModalError::Schema {
        path: hp.display().to_string(),
        message: e.to_string(),
    })?;
    header.grid.validate()?;

    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = std::io::BufReader::new(file);
    let mut lines = reader.lines();
    let first = lines
        .next()
        .ok_or_else(|| ModalError::Schema { path: path.display().to_string(), message: "empty file".into() })?
        .map_err(|e| io_err(path, e))?;
    if first.trim() != "x,y,z,vx,vy,vz,p,rho" {
        return Err(ModalError::Schema {
            path: path.display().to_string(),
            message: format!("unexpected header line: {first}"),
        });
    }
    let mut f = FieldState::zeros(&header.grid);
    f.time_stamp = header.time_stamp;
    let g = header.grid.clone();
    let mut count = 0usize;
    for (row, line) in lines.enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| ModalError::Schema {
                path: path.display().to_string(),
                message: format!("line {}: {e}", row + 2),
            })?;
        if vals.len() != 8 {
            return Err(ModalError::Schema {
                path: path.display().to_string(),
                message: format!("line {}: expected 8 columns, got {}", row + 2, vals.len()),
            });
        }
        let iz = count % g.nz;
        let iy = (count / g.nz) % g.ny;
        let ix = count / (g.nz * g.ny);
        if ix >= g.nx {
            return Err(ModalError::Schema {
                path: path.display().to_string(),
                message: "more rows than grid points".into(),
            });
        }
        f.vx[[ix, iy, iz]] = vals[3];
        f.vy[[ix, iy, iz]] = vals[4];
        f.vz[[ix, iy, iz]] = vals[5];
        f.p[[ix, iy, iz]] = vals[6];
        f.rho[[ix, iy, iz]] = vals[7];
        count += 1;
    }
    if count != g.len() {
        return Err(ModalError::Schema {
            path: path.display().to_string(),
            message: format!("expected {} rows, got {count}", g.len()),
        });
    }
    f.check_finite("read_field_csv")?;
    Ok(f)
}
