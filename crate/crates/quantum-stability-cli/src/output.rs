//! Deterministic serialization and atomic file output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use quantum_stability::khomology::{KClass, RatClass};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;

/// Pretty JSON formatter that prints every float with 17 significant digits.
struct FixedFloats<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serializes `value` as pretty JSON with fixed-width floats and a trailing
/// newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).expect("report types serialize infallibly");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Formats a float for CSV output with 17 significant digits.
pub fn fixed(value: f64) -> String {
    format!("{value:.16e}")
}

/// A complex number as `[re, im]`.
pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// An exact class as `[numerator, denominator]` pairs.
pub fn exact_class(class: &RatClass) -> Result<Vec<[i64; 2]>, CliError> {
    class
        .coeffs()
        .iter()
        .map(|q| {
            let num = i64::try_from(q.numer());
            let den = i64::try_from(q.denom());
            match (num, den) {
                (Ok(a), Ok(b)) => Ok([a, b]),
                _ => Err(CliError::Core(quantum_stability::Error::Numerical(format!(
                    "coefficient {q} does not fit in 64-bit integers"
                )))),
            }
        })
        .collect()
}

/// A labelled class as `[label, class]`.
pub fn labelled(object: &KClass) -> Result<(String, Vec<[i64; 2]>), CliError> {
    Ok((object.label().to_owned(), exact_class(object.ch())?))
}

/// Builds CSV text from a header and rows.
pub fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Config(format!("csv encoding failed: {e}"));
    writer.write_record(header).map_err(to_err)?;
    for row in rows {
        writer.write_record(row).map_err(to_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Config(format!("csv encoding failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv fields are UTF-8"))
}

/// Writes `contents` to `dir/name` through a temporary file and a rename, so
/// readers never observe a partially written file.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    fs::rename(&tmp, &target).map_err(io_err(&target))
}
