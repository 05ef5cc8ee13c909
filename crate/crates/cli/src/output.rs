//! One result record per command, rendered as an aligned table, CSV, or
//! JSON lines (a header object followed by one object per row).

use std::io::{self, Write};

use clap::ValueEnum;
use indexmap::IndexMap;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub command: &'static str,
    pub parameters: IndexMap<&'static str, Value>,
    #[serde(skip)]
    pub columns: Vec<&'static str>,
    #[serde(skip)]
    pub rows: Vec<Vec<Value>>,
    pub certification: IndexMap<&'static str, Value>,
}

impl OutputRecord {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        OutputRecord {
            command,
            parameters: IndexMap::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            certification: IndexMap::new(),
        }
    }

    pub fn param(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key, value.into());
        self
    }

    pub fn certify(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.certification.insert(key, value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Table => self.write_table(out),
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_table(&self, out: &mut impl Write) -> io::Result<()> {
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={}", plain(v)))
            .collect();
        writeln!(out, "# {} {}", self.command, params.join(" "))?;

        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(plain).collect()).collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |fields: Vec<&str>| -> String {
            let padded: Vec<String> = fields
                .iter()
                .zip(&widths)
                .map(|(f, &w)| format!("{f:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", line(self.columns.clone()))?;
        for row in &cells {
            writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        for (k, v) in &self.certification {
            writeln!(out, "# {k}: {}", plain(v))?;
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(plain))?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{}", serde_json::to_string(self)?)?;
        for row in &self.rows {
            let obj: serde_json::Map<String, Value> = self
                .columns
                .iter()
                .map(|c| c.to_string())
                .zip(row.iter().cloned())
                .collect();
            writeln!(out, "{}", Value::Object(obj))?;
        }
        Ok(())
    }
}

/// Cell text without JSON quoting; `null` reads as `none`.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".to_string(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        let mut r = OutputRecord::new("gen", &["n", "F_n"]);
        r.param("k", 3).param("method", "iter");
        r.push(vec![1.into(), "1".into()]);
        r.push(vec![10.into(), "149".into()]);
        r.certify("exact", true);
        r
    }

    fn render(format: Format) -> String {
        let mut buf = Vec::new();
        sample().write(format, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn table_is_right_aligned() {
        let t = render(Format::Table);
        assert_eq!(t, "# gen k=3 method=iter\n n  F_n\n 1    1\n10  149\n# exact: true\n");
    }

    #[test]
    fn csv_has_header_and_lf() {
        assert_eq!(render(Format::Csv), "n,F_n\n1,1\n10,149\n");
    }

    #[test]
    fn json_lines_keep_field_order() {
        let j = render(Format::Json);
        let lines: Vec<&str> = j.lines().collect();
        assert_eq!(
            lines[0],
            r#"{"command":"gen","parameters":{"k":3,"method":"iter"},"certification":{"exact":true}}"#
        );
        assert_eq!(lines[2], r#"{"n":10,"F_n":"149"}"#);
    }

    #[test]
    fn csv_quotes_commas() {
        let mut r = OutputRecord::new("verify", &["detail"]);
        r.push(vec!["a, b".into()]);
        let mut buf = Vec::new();
        r.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "detail\n\"a, b\"\n");
    }
}
