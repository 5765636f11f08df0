use std::fs;

use serde::Serialize;

use crate::error::CliError;
use crate::OutputArgs;

/// Rows of strings rendered either as aligned text or as CSV.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<const N: usize>(&mut self, row: [String; N]) {
        self.rows.push(row.into());
    }

    pub fn text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> =
                cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = vec![line(&self.header)];
        out.extend(self.rows.iter().map(|r| line(r)));
        out.join("\n")
    }

    pub fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}

/// Prints or writes a report in the format selected by `out`.
pub fn emit<T: Serialize>(out: &OutputArgs, report: &T, text: String, table: &Table) -> Result<(), CliError> {
    let json = || serde_json::to_string_pretty(report).expect("serializable report") + "\n";
    match &out.out {
        Some(path) => {
            let body = if out.csv { table.csv() } else { json() };
            fs::write(path, body).map_err(|e| CliError::io(path, e))?;
            println!("{text}\nwrote {}", path.display());
        }
        None if out.json => print!("{}", json()),
        None if out.csv => print!("{}", table.csv()),
        None => println!("{text}"),
    }
    Ok(())
}
