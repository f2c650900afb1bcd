use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Named equal-length columns plus the metadata needed to regenerate them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepTable {
    pub metadata: Map<String, Value>,
    columns: Vec<Column>,
}

impl SweepTable {
    pub fn new(metadata: Map<String, Value>) -> Self {
        SweepTable {
            metadata,
            columns: Vec::new(),
        }
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if let Some(first) = self.columns.first() {
            if first.values.len() != values.len() {
                return Err(Error::domain(format!(
                    "column `{name}` has {} rows, table has {}",
                    values.len(),
                    first.values.len()
                )));
            }
        }
        if self.column(&name).is_some() {
            return Err(Error::domain(format!("duplicate column `{name}`")));
        }
        self.columns.push(Column { name, values });
        Ok(())
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn nrows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    /// `#`-prefixed `key = value` metadata lines, a header row, then one line
    /// per row with every real printed to 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            let _ = writeln!(out, "# {key} = {}", metadata_text(value));
        }
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in 0..self.nrows() {
            for (i, col) in self.columns.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{:.16e}", col.values[row]);
            }
            out.push('\n');
        }
        out
    }

    /// `{"metadata": {...}, "columns": {name: [...]}}`
    pub fn to_json(&self) -> String {
        let mut columns = Map::new();
        for col in &self.columns {
            columns.insert(col.name.clone(), Value::from(col.values.clone()));
        }
        let mut root = Map::new();
        root.insert("metadata".into(), Value::Object(self.metadata.clone()));
        root.insert("columns".into(), Value::Object(columns));
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("finite table");
        text.push('\n');
        text
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Reads a table written by [`SweepTable::to_csv`]. Metadata values come
    /// back as strings.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut metadata = Map::new();
        let mut lines = text.lines();
        let header = loop {
            match lines.next() {
                Some(line) if line.starts_with('#') => {
                    let body = line.trim_start_matches('#').trim();
                    if let Some((k, v)) = body.split_once('=') {
                        metadata.insert(k.trim().to_string(), Value::String(v.trim().to_string()));
                    }
                }
                Some(line) => break line,
                None => return Err(Error::Config("CSV has no header row".into())),
            }
        };
        let mut columns: Vec<Column> = if header.is_empty() {
            Vec::new()
        } else {
            header
                .split(',')
                .map(|name| Column {
                    name: name.to_string(),
                    values: Vec::new(),
                })
                .collect()
        };
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns.len() {
                return Err(Error::Config(format!(
                    "CSV row {} has {} fields, expected {}",
                    lineno + 1,
                    fields.len(),
                    columns.len()
                )));
            }
            for (col, field) in columns.iter_mut().zip(fields) {
                let v = field
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad number `{field}` in CSV")))?;
                col.values.push(v);
            }
        }
        Ok(SweepTable { metadata, columns })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Config(format!("table JSON: {msg}"));
        let root: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let metadata = root
            .get("metadata")
            .and_then(Value::as_object)
            .cloned()
            .ok_or_else(|| bad("missing `metadata` object"))?;
        let cols = root
            .get("columns")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing `columns` object"))?;
        let mut table = SweepTable::new(metadata);
        for (name, values) in cols {
            let values = values
                .as_array()
                .ok_or_else(|| bad("column is not an array"))?
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| bad("non-numeric entry")))
                .collect::<Result<Vec<f64>>>()?;
            table.push_column(name.clone(), values)?;
        }
        Ok(table)
    }
}

fn metadata_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Array(items) => items
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(","),
        other => other.to_string(),
    }
}

/// Writes `table` to `destination`, creating or truncating it.
pub fn write_table(table: &SweepTable, format: Format, destination: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: destination.to_path_buf(),
        source,
    };
    let file = File::create(destination).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    w.write_all(table.render(format).as_bytes())
        .map_err(io_err)?;
    w.flush().map_err(io_err)
}
