//! Number, CSV and report formatting.
//!
//! Floats are written with 17 significant digits in scientific notation, which
//! round-trips every `f64` exactly.

use polent::{Mat2, C64};

use crate::error::{CliError, CliResult};
use crate::scenario::format_complex;

pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn matrix(m: &Mat2) -> String {
    let e = |i, j| format!("\"{}\"", format_complex(m[(i, j)]));
    format!("[[{}, {}], [{}, {}]]", e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

pub fn complex(z: C64) -> String {
    format_complex(z)
}

/// Builds a CSV document: header row, one record per row, `\n` endings.
pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> CliResult<Self> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header).map_err(csv_error)?;
        Ok(Csv { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(csv_error)
    }

    pub fn finish(self) -> CliResult<String> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| CliError::Internal(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| CliError::Internal(format!("csv: {e}")))
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Internal(format!("csv: {e}"))
}

/// `key = value` report lines.
#[derive(Default)]
pub struct Report {
    out: String,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        if !self.out.is_empty() {
            self.out.push('\n');
        }
        self.out.push_str(&format!("[{name}]\n"));
        self
    }

    pub fn field(&mut self, key: &str, value: impl AsRef<str>) -> &mut Self {
        self.out.push_str(&format!("{key} = {}\n", value.as_ref()));
        self
    }

    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        self.field(key, num(x))
    }

    pub fn flag(&mut self, key: &str, b: bool) -> &mut Self {
        self.field(key, if b { "true" } else { "false" })
    }

    pub fn finish(&mut self) -> String {
        std::mem::take(&mut self.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.0,
            -0.0,
            1.0 / 3.0,
            2.0f64.sqrt() * 2.0,
            1e-300,
            f64::MAX,
            5e-324,
        ] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let mut t = Csv::new(&["a", "b"]).unwrap();
        t.row([num(0.5), String::new()]).unwrap();
        assert_eq!(t.finish().unwrap(), "a,b\n5.0000000000000000e-1,\n");
    }
}
