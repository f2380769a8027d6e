use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub const CSV_SCHEMA_VERSION: u32 = 1;

/// `{:.16e}`: 17 significant digits, enough to round-trip any f64.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn optional(v: Option<f64>) -> String {
    v.map(real).unwrap_or_default()
}

pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn write_text(path: Option<&Path>, text: &str) -> io::Result<()> {
    let mut w = open(path)?;
    w.write_all(text.as_bytes())?;
    w.flush()
}
