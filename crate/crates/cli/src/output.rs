use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// A numeric sample table with a fixed column order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    columns: &'a [String],
    rows: &'a [Vec<f64>],
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|x| fmt_f64(*x))).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn to_json(&self) -> String {
        to_json_text(&TableJson {
            columns: &self.header,
            rows: &self.rows,
        })
    }

    /// Writes `<stem>.csv` or `<stem>.json` under `dir`; returns the file name.
    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<String, CliError> {
        let (name, text) = match format {
            Format::Csv => (format!("{stem}.csv"), self.to_csv()),
            Format::Json => (format!("{stem}.json"), self.to_json()),
        };
        write_text(dir, &name, &text)?;
        Ok(name)
    }
}

pub fn to_json_text(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<String, CliError> {
    write_text(dir, name, &to_json_text(value))?;
    Ok(name.to_string())
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-17, 1e300, 6.02214076e23] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(1.0), "1.0");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["t", "x"]);
        t.push(vec![0.0, 0.5]);
        t.push(vec![1.0, -1e-12]);
        assert_eq!(t.to_csv(), "t,x\n0.0,0.5\n1.0,-1e-12\n");
    }
}
