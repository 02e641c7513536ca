//! CSV tables with a `#` metadata header, and JSON summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// γ/2π in MHz, for the `--mhz` display conversion.
pub const GAMMA_MHZ: f64 = mollow_core::models::GAMMA_MHZ;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    /// A value that does not exist, such as `g²` of an empty mode.
    Undefined,
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Cell::Undefined)
    }
}

/// 17 significant digits.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    /// Multiplies a numeric column in place and renames it.
    pub fn rescale(&mut self, name: &str, factor: f64, new_name: &str) {
        if let Some(j) = self.columns.iter().position(|c| c == name) {
            self.columns[j] = new_name.to_string();
            for r in &mut self.rows {
                if let Cell::Num(v) = &mut r[j] {
                    *v *= factor;
                }
            }
        }
    }

    pub fn render(&self, header: &[(String, String)]) -> String {
        let mut s = String::new();
        for (k, v) in header {
            let _ = writeln!(s, "# {k} = {v}");
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => format_number(*v),
                    Cell::Undefined => "undefined".into(),
                    Cell::Text(t) => t.replace([',', '\n'], ";"),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Writes run outputs into one directory.
pub struct OutputDir {
    root: PathBuf,
    header: Vec<(String, String)>,
    pub written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path, header: Vec<(String, String)>) -> Result<Self> {
        fs::create_dir_all(root).map_err(|source| CliError::Io {
            path: root.to_path_buf(),
            source,
        })?;
        Ok(Self {
            root: root.to_path_buf(),
            header,
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.path(name);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: &Table) -> Result<()> {
        let text = table.render(&self.header);
        self.write(name, &text)
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let text = serde_json::to_string_pretty(value).expect("serialisable") + "\n";
        self.write(name, &text)
    }

    pub fn json_lines<T: Serialize>(&mut self, name: &str, values: &[T]) -> Result<()> {
        let mut text = String::new();
        for v in values {
            text.push_str(&serde_json::to_string(v).expect("serialisable"));
            text.push('\n');
        }
        self.write(name, &text)
    }
}
