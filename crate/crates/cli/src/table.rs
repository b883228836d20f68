//! CSV output: header always written, LF line endings, floats with 17
//! significant digits, empty cells for missing values.

use std::io::Write;

pub enum Cell {
    Float(f64),
    Int(usize),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A table accumulated in memory, plus warnings for rows that failed.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    pub warnings: Vec<String>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row.iter().map(Cell::render).collect());
    }

    /// A row with the leading `inputs` filled and every other cell empty.
    pub fn push_failed(&mut self, inputs: Vec<Cell>, warning: String) {
        let mut row = inputs;
        row.resize_with(self.header.len(), || Cell::Empty);
        self.push(row);
        self.warnings.push(warning);
    }

    /// True when there are rows and every one of them failed.
    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.warnings.len() == self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    /// Prints a warnings summary to stderr, if any rows failed.
    pub fn report_warnings(&self, what: &str) {
        if self.warnings.is_empty() {
            return;
        }
        let mut err = std::io::stderr().lock();
        let _ = writeln!(
            err,
            "warning: {what}: {} of {} rows left empty",
            self.warnings.len(),
            self.rows.len()
        );
        for w in self.warnings.iter().take(10) {
            let _ = writeln!(err, "  {w}");
        }
        if self.warnings.len() > 10 {
            let _ = writeln!(err, "  ... and {} more", self.warnings.len() - 10);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.69865535261911, 1e-300, -2.5] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn failed_rows_pad_with_empty_cells() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push_failed(vec![Cell::Int(1)], "bad".into());
        let mut buf = Vec::new();
        t.write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b,c\n1,,\n");
    }
}
