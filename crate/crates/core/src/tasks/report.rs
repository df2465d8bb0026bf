use std::fmt::Write as _;

/// One report value. Reals are always rendered with 6 decimals.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn tsv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.6}"),
            Cell::Text(s) => s.replace(['\t', '\n'], " "),
            Cell::Bool(b) => (*b as u8).to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) if v.is_finite() => format!("{v:.6}"),
            Cell::Real(_) => "null".into(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
            Cell::Bool(b) => b.to_string(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Real(v) => Some(*v),
            Cell::Bool(b) => Some(*b as u8 as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
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

/// Per-item rows plus summary metrics, in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub task: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metrics: Vec<(String, Cell)>,
}

impl EvalReport {
    pub fn new(task: &str, columns: &[&str]) -> Self {
        EvalReport {
            task: task.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metrics: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn metric(&mut self, name: &str, value: impl Into<Cell>) {
        self.metrics.push((name.to_string(), value.into()));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(n, _)| n == name).and_then(|(_, c)| c.as_f64())
    }

    /// A column as numbers, for recomputing metrics from the rows.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[idx].as_f64()).collect()
    }

    /// Header, one line per item, then a `summary` line of `name=value`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join("\t"));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::tsv).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    pub fn summary_line(&self) -> String {
        let mut line = format!("summary\ttask={}", self.task);
        for (name, value) in &self.metrics {
            let _ = write!(line, "\t{name}={}", value.tsv());
        }
        line
    }

    /// One JSON object per item, then `{"summary": {...}}`.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&object(self.columns.iter().map(String::as_str).zip(row)));
            out.push('\n');
        }
        let task = Cell::Text(self.task.clone());
        let summary = object(std::iter::once(("task", &task)).chain(self.metrics.iter().map(|(n, c)| (n.as_str(), c))));
        let _ = writeln!(out, "{{\"summary\":{summary}}}");
        out
    }
}

fn object<'a>(fields: impl Iterator<Item = (&'a str, &'a Cell)>) -> String {
    let body: Vec<String> = fields
        .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("key"), v.json()))
        .collect();
    format!("{{{}}}", body.join(","))
}
