use std::fmt::Write as _;

use negbeta::AlgebraicNumber;

/// Rows for `--format csv`.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            out.write_record(row).expect("in-memory write");
        }
        String::from_utf8(out.into_inner().expect("in-memory flush")).expect("utf-8 records")
    }
}

/// Exact form when rational, otherwise rounded to `places` decimals.
pub fn short_value(b: &AlgebraicNumber, places: u32) -> String {
    if b.is_rational() {
        b.to_string()
    } else {
        b.to_decimal(places)
    }
}

pub fn long_value(b: &AlgebraicNumber) -> String {
    if b.is_rational() {
        b.to_string()
    } else {
        format!("{} ({})", b.to_decimal(3), b.to_decimal(12))
    }
}

pub fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

/// Left-aligned `key value` lines.
#[derive(Debug, Default)]
pub struct KeyValues {
    lines: Vec<(String, String)>,
}

impl KeyValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.lines.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let width = self.lines.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.lines {
            let pad = width - k.chars().count();
            writeln!(out, "{k}{}  {v}", " ".repeat(pad)).expect("string write");
        }
        out
    }
}

/// Grouped table: one block per value with continuation lines and a rule
/// between blocks.
pub fn grouped(header: [&str; 3], blocks: &[(String, String, Vec<String>)]) -> String {
    let w0 = blocks.iter().map(|b| b.0.chars().count()).chain([header[0].len()]).max().unwrap_or(0);
    let w1 = blocks.iter().map(|b| b.1.chars().count()).chain([header[1].len()]).max().unwrap_or(0);
    let line = |a: &str, b: &str, c: &str| {
        let s = format!("{a:<w0$} | {b:<w1$} | {c}");
        s.trim_end().to_string()
    };
    let rule = "-".repeat(w0 + w1 + 6 + 32);
    let mut out = String::new();
    writeln!(out, "{}", line(header[0], header[1], header[2])).expect("string write");
    writeln!(out, "{rule}").expect("string write");
    for (value, poly, rows) in blocks {
        let mut first = true;
        for row in rows.iter().map(String::as_str).chain(rows.is_empty().then_some("")) {
            let (a, b) = if first { (value.as_str(), poly.as_str()) } else { ("", "") };
            writeln!(out, "{}", line(a, b, row)).expect("string write");
            first = false;
        }
        writeln!(out, "{rule}").expect("string write");
    }
    out
}
