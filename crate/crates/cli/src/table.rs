//! Result rows and CSV emission.

use std::io::Write;

use crate::CliError;

/// One cell of a result row.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(u64::from(v))
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl Value {
    /// Floats use Rust's shortest round-trip formatting.
    pub fn render(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => v.to_string(),
            Value::Text(v) => v.clone(),
            Value::Bool(v) => v.to_string(),
        }
    }
}

/// Ordered `column → value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultRow(Vec<(String, Value)>);

impl ResultRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.0.push((key.into(), value.into()));
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<Value>) -> Self {
        self.push(key, value);
        self
    }

    /// Prefixes `other`'s cells with this row's cells.
    pub fn then(mut self, other: ResultRow) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(k, _)| k.as_str())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.0.iter().map(|(_, v)| v)
    }
}

/// Rows sharing one column set.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    /// Builds from rows; the first row fixes the schema.
    pub fn from_rows(rows: Vec<ResultRow>) -> Result<Self, CliError> {
        let columns = rows
            .first()
            .map(|r| r.columns().map(str::to_string).collect())
            .unwrap_or_default();
        let mut table = Table::new(columns);
        for row in rows {
            table.push(row)?;
        }
        Ok(table)
    }

    pub fn push(&mut self, row: ResultRow) -> Result<(), CliError> {
        if !row.columns().eq(self.columns.iter().map(String::as_str)) {
            return Err(CliError::Schema(row.columns().collect::<Vec<_>>().join(",")));
        }
        self.rows.push(row);
        Ok(())
    }
}

/// Header line, then one line per row in order.
pub fn emit_csv(table: &Table, destination: &mut dyn Write) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(destination);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.values().map(Value::render))?;
    }
    writer.flush()?;
    Ok(())
}
