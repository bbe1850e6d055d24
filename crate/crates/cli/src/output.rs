//! Output helpers: CSV tables and float formatting.

use std::io::Write;

/// `x` with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes an RFC 4180 table with a header row and LF line endings.
pub fn emit_csv<W: Write>(header: &[&str], rows: &[Vec<String>], out: W) -> anyhow::Result<()> {
    if let Some(r) = rows.iter().find(|r| r.len() != header.len()) {
        anyhow::bail!("row has {} fields, header has {}", r.len(), header.len());
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// [`emit_csv`] into a string.
pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    emit_csv(header, rows, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}
