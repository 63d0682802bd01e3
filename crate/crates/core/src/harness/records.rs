use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::Method;

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    #[serde(with = "method_serde")]
    pub method: Method,
    #[serde(rename = "N")]
    pub order: usize,
    #[serde(rename = "Mx")]
    pub mx: usize,
    #[serde(rename = "My")]
    pub my: usize,
    pub c: f64,
    pub dof: usize,
    pub l2_omega: f64,
    pub l2_q: f64,
    pub linf_conservation: f64,
    pub runtime_s: f64,
}

impl ErrorRecord {
    /// Element size `h = 1 / Mx`.
    pub fn h(&self) -> f64 {
        1.0 / self.mx as f64
    }
}

mod method_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::solvers::Method;

    pub fn serialize<S: Serializer>(m: &Method, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(m.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Method, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Column names in output order.
pub const CSV_HEADER: [&str; 10] =
    ["method", "N", "Mx", "My", "c", "dof", "l2_omega", "l2_q", "linf_conservation", "runtime_s"];

/// Writes records as CSV with a header row. Floats use the shortest decimal
/// form that parses back to the same value.
pub fn write_csv<W: Write>(records: &[ErrorRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ErrorRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Io(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn write_csv_file(records: &[ErrorRecord], path: &std::path::Path) -> Result<()> {
    write_csv(records, std::fs::File::create(path)?)
}
