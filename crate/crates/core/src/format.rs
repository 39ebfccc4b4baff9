//! Fixed 17-significant-digit number formatting for CSV and JSON output.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

/// Formats `v` with 17 significant digits in scientific notation, which
/// round-trips every finite `f64` exactly.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON where every float is written by [`fmt17`].
///
/// Non-finite floats become `null`, as serde_json does.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Digits17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("json output is UTF-8"))
}
