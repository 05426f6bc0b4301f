//! Plain-text and image writers for run records.

use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::walk::RunRecord;

fn opt(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v}"),
        None => "NaN".to_string(),
    }
}

/// `# gqw-record v1`, echoed settings as `# key=value`, then one CSV row per step.
/// Centroids of empty components are written as `NaN`.
pub fn write_record_csv<W: Write>(mut w: W, record: &RunRecord) -> io::Result<()> {
    writeln!(w, "# gqw-record v1")?;
    let m = &record.meta;
    writeln!(w, "# nSites={} eps={} startJ={} steps={}", m.n_sites, m.eps, m.start_j, m.n_steps)?;
    for (k, v) in &m.echo {
        writeln!(w, "# {k}={v}")?;
    }
    writeln!(w, "j,norm,centroidMinus,centroidPlus")?;
    for r in &record.rows {
        writeln!(w, "{},{:.17e},{},{}", r.j, r.norm, opt(r.centroid_minus), opt(r.centroid_plus))?;
    }
    Ok(())
}

/// One line per snapshot, space-separated densities in site order.
pub fn write_density_txt<W: Write>(mut w: W, record: &RunRecord) -> io::Result<()> {
    for s in &record.snapshots {
        let line: Vec<String> = s.density.iter().map(|x| format!("{x:.17e}")).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Binary greyscale heatmap: one row per snapshot, one column per site,
/// scaled so the largest density in the run maps to 255.
pub fn write_pgm<W: Write>(mut w: W, record: &RunRecord) -> io::Result<()> {
    let width = record.meta.n_sites;
    let height = record.snapshots.len();
    let max = record.max_density();
    write!(w, "P5\n{width} {height}\n255\n")?;
    let mut row = vec![0u8; width];
    for s in &record.snapshots {
        for (px, &d) in row.iter_mut().zip(&s.density) {
            *px = if max > 0.0 { (255.0 * d / max).round().clamp(0.0, 255.0) as u8 } else { 0 };
        }
        w.write_all(&row)?;
    }
    Ok(())
}

/// Dense operator, one matrix row per line as `re im` pairs.
pub fn write_operator<W: Write>(mut w: W, m: &DMatrix<Complex64>) -> io::Result<()> {
    for r in 0..m.nrows() {
        let line: Vec<String> = (0..m.ncols()).map(|c| format!("{:.17e} {:.17e}", m[(r, c)].re, m[(r, c)].im)).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}
