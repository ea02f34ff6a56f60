use std::io::Write;

use serde_json::{json, Map, Number, Value};

use crate::config::{Format, SweepConfig};

/// Significant digits used for every float written.
const FLOAT_DIGITS: usize = 17;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{:.*e}", FLOAT_DIGITS - 1, v)
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => {
                // Keeps the fixed-width digits instead of the shortest round-trip form.
                Value::Number(
                    format_float(*v)
                        .parse::<Number>()
                        .expect("formatted float is a JSON number"),
                )
            }
            Cell::Float(_) | Cell::Null => Value::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Info,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub level: Level,
    pub message: String,
}

impl Diagnostic {
    pub fn warning(message: impl Into<String>) -> Self {
        Self {
            level: Level::Warning,
            message: message.into(),
        }
    }

    pub fn info(message: impl Into<String>) -> Self {
        Self {
            level: Level::Info,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub diagnostics: Vec<Diagnostic>,
    pub summary: Vec<(&'static str, Cell)>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            columns,
            rows: Vec::new(),
            diagnostics: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn warnings(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.level == Level::Warning).count()
    }

    pub fn write(&self, cfg: &SweepConfig, out: &mut dyn Write) -> std::io::Result<()> {
        match cfg.format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(cfg, out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))?;
        }
        w.flush()
    }

    fn write_json(&self, cfg: &SweepConfig, out: &mut dyn Write) -> std::io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let diagnostics: Vec<Value> = self
            .diagnostics
            .iter()
            .map(|d| {
                json!({
                    "level": if d.level == Level::Warning { "warning" } else { "info" },
                    "message": d.message,
                })
            })
            .collect();
        let mut summary = Map::new();
        summary.insert("rows".into(), json!(self.rows.len()));
        summary.insert("warnings".into(), json!(self.warnings()));
        for (k, v) in &self.summary {
            summary.insert(k.to_string(), v.to_json());
        }
        let doc = json!({
            "meta": {
                "version": env!("CARGO_PKG_VERSION"),
                "command": self.command,
                "config": cfg.echo(),
            },
            "rows": rows,
            "diagnostics": diagnostics,
            "summary": summary,
        });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }

    /// One-line run summary plus every warning, for stderr.
    pub fn write_summary(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for d in self.diagnostics.iter().filter(|d| d.level == Level::Warning) {
            writeln!(out, "warning: {}", d.message)?;
        }
        write!(
            out,
            "{}: {} rows, {} warnings",
            self.command,
            self.rows.len(),
            self.warnings()
        )?;
        for (k, v) in &self.summary {
            write!(out, ", {k} = {}", v.to_csv())?;
        }
        writeln!(out)
    }
}
