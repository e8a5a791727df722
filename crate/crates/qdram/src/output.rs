//! CSV rendering of per-cycle statistics.
//!
//! The main file carries means across repetitions; a sibling `<stem>.std.csv`
//! with the same header carries the matching standard deviations.

use std::io;
use std::path::{Path, PathBuf};

use qdram_core::memory::{CycleSummary, MeanStd};

pub const HEADER: [&str; 5] = ["cycle", "p_hat", "magnitude_fidelity", "full_fidelity", "sim_time_s"];

/// Locale-free, 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Mean,
    Std,
}

impl Column {
    fn pick(self, s: MeanStd) -> f64 {
        match self {
            Column::Mean => s.mean,
            Column::Std => s.std,
        }
    }
}

/// Renders one CSV document.
pub fn render_csv(rows: &[CycleSummary], column: Column) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("writing to memory");
    for row in rows {
        let time = match column {
            Column::Mean => row.wall_time,
            Column::Std => 0.0,
        };
        w.write_record([
            row.cycle_index.to_string(),
            format_real(column.pick(row.p_hat)),
            format_real(column.pick(row.magnitude_fidelity)),
            format_real(column.pick(row.full_fidelity)),
            format_real(time),
        ])
        .expect("writing to memory");
    }
    w.into_inner().expect("flushing to memory")
}

/// `results.csv` → `results.std.csv`
pub fn std_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.std.{}", ext.to_string_lossy()),
        None => format!("{stem}.std"),
    };
    path.with_file_name(name)
}

/// Writes the mean file at `path` and the std file next to it.
pub fn write_csv(path: &Path, rows: &[CycleSummary]) -> io::Result<PathBuf> {
    std::fs::write(path, render_csv(rows, Column::Mean))?;
    let std_file = std_path(path);
    std::fs::write(&std_file, render_csv(rows, Column::Std))?;
    Ok(std_file)
}
