use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Fixed real formatting so identical runs give identical bytes.
pub fn real(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes `rows` as CSV with the given header; every field is preformatted.
pub fn csv_rows<W: Write>(w: W, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for r in rows {
        out.write_record(r)?;
    }
    out.flush()
}

/// Whitespace-aligned table for text output.
pub fn text_table<W: Write>(mut w: W, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (k, f) in r.iter().enumerate() {
            width[k] = width[k].max(f.len());
        }
    }
    let line =
        |fields: Vec<&str>| fields.iter().zip(&width).map(|(f, n)| format!("{f:>n$}")).collect::<Vec<_>>().join("  ");
    writeln!(w, "{}", line(header.to_vec()))?;
    for r in rows {
        writeln!(w, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}
