//! CSV formatting, plot scripts and output manifests.

use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Twelve significant digits in scientific notation.
pub fn fmt12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.11e}")
}

/// Shortest representation that parses back to the same bits.
pub fn fmt_exact(v: f64) -> String {
    format!("{v:?}")
}

/// Simple CSV table builder.
#[derive(Clone, Debug, Default)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| fmt12(*v)).collect());
    }

    pub fn push_exact(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| fmt_exact(*v)).collect());
    }

    pub fn push_raw(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Parse a numeric CSV body (header skipped).
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or("empty csv")?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect::<Vec<_>>();
    let mut rows = Vec::new();
    for (i, l) in lines.enumerate() {
        if l.trim().is_empty() {
            continue;
        }
        let row = l
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("line {}: {e}", i + 2))?;
        if row.len() != header.len() {
            return Err(format!("line {}: expected {} columns", i + 2, header.len()));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Gnuplot script plotting columns of a CSV file given by relative path.
pub fn plot_script(csv_name: &str, title: &str, xcol: usize, ycols: &[(usize, &str)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let stem = csv_name.trim_end_matches(".csv");
    let _ = writeln!(s, "set output '{stem}.png'");
    let parts: Vec<String> = ycols
        .iter()
        .map(|(c, style)| format!("'{csv_name}' using {xcol}:{c} with {style}"))
        .collect();
    let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    d.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes files into an output directory and records their checksums.
pub struct OutputDir {
    root: std::path::PathBuf,
    entries: Vec<(String, String)>,
}

impl OutputDir {
    pub fn create(root: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            entries: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<()> {
        fs::write(self.root.join(name), contents)?;
        self.entries
            .push((name.to_string(), sha256_hex(contents.as_bytes())));
        Ok(())
    }

    /// Writes `MANIFEST.sha256` covering every file written so far.
    pub fn finish(mut self) -> std::io::Result<()> {
        self.entries.sort();
        let mut s = String::new();
        for (n, h) in &self.entries {
            let _ = writeln!(s, "{h}  {n}");
        }
        fs::write(self.root.join("MANIFEST.sha256"), s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, std::f64::consts::PI] {
            assert_eq!(fmt_exact(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(-0.25), "-2.50000000000e-1");
        let (_, rows) = parse_csv("a,b\n1.5,2\n").unwrap();
        assert_eq!(rows, vec![vec![1.5, 2.0]]);
    }
}
