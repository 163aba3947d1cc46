use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::Result;
use crate::numerics::linalg::CMat;

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Floats with 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// JSON with sorted keys (maps are `BTreeMap`-backed) and fixed float digits.
pub fn to_json(value: &Value) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser).map_err(io::Error::from)?;
    out.push(b'\n');
    Ok(out)
}

/// CSV with `\n` line endings.
pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).map_err(io::Error::from)?;
    for row in rows {
        w.write_record(&row).map_err(io::Error::from)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// Writes `bytes` to `path`, or to standard output for `-`.
pub fn emit(bytes: &[u8], path: &Path) -> Result<()> {
    if path == Path::new("-") {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        lock.write_all(bytes)?;
        lock.flush()?;
    } else {
        let with_path = |e: io::Error| io::Error::new(e.kind(), format!("{}: {e}", path.display()));
        let mut w = BufWriter::new(File::create(path).map_err(with_path)?);
        w.write_all(bytes).and_then(|()| w.flush()).map_err(with_path)?;
    }
    Ok(())
}

pub fn complex(z: Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}

/// Row-major `[re, im]` pairs.
pub fn matrix(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}
