use std::io::Write;
use std::path::Path;

use crate::error::Result;

pub const THRESHOLD_HEADER: &[&str] = &[
    "method",
    "rep",
    "final_rank",
    "rel_error_true",
    "rel_error_sketched",
    "wall_time_s",
];
pub const FIXED_RANK_HEADER: &[&str] = &["method", "rank", "rep", "rel_error", "wall_time_s"];
pub const SELECTION_HEADER: &[&str] = &["method", "rank", "rep", "rel_error", "svd_error"];
pub const BLOCK_SIZE_HEADER: &[&str] = &["block_size", "rank", "rep", "rel_error", "wall_time_s"];

/// Sort key: method (or block size) first, then rank, then rep.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RowKey {
    pub method: String,
    pub block: usize,
    pub rank: usize,
    pub rep: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub key: RowKey,
    pub fields: Vec<String>,
    /// Error value used by the summary.
    pub error: f64,
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(header: &'static [&'static str], mut rows: Vec<Row>) -> Self {
        rows.sort_by(|a, b| a.key.cmp(&b.key));
        Self { header, rows }
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    pub fn write_to(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(self.header)?;
        for row in &self.rows {
            out.write_record(&row.fields)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_path(&self, path: &Path) -> Result<()> {
        self.write_to(std::fs::File::create(path)?)
    }

    /// Median error and time per (method, block, rank) group.
    pub fn summary(&self) -> String {
        let mut lines = vec![format!(
            "{:<12} {:>6} {:>6} {:>5} {:>14} {:>12}",
            "method", "block", "rank", "runs", "median_error", "median_s"
        )];
        let mut i = 0;
        while i < self.rows.len() {
            let k = &self.rows[i].key;
            let mut j = i;
            while j < self.rows.len()
                && self.rows[j].key.method == k.method
                && self.rows[j].key.block == k.block
                && self.rows[j].key.rank == k.rank
            {
                j += 1;
            }
            let group = &self.rows[i..j];
            let errors: Vec<f64> = group.iter().map(|r| r.error).collect();
            let times: Vec<f64> = group.iter().filter_map(|r| r.seconds).collect();
            let time = if times.is_empty() {
                "-".to_string()
            } else {
                format!("{:.4}", median(&times))
            };
            lines.push(format!(
                "{:<12} {:>6} {:>6} {:>5} {:>14.4e} {:>12}",
                k.method,
                k.block,
                k.rank,
                group.len(),
                median(&errors),
                time
            ));
            i = j;
        }
        lines.join("\n")
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Shortest string that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(method: &str, rank: usize, rep: usize) -> Row {
        Row {
            key: RowKey {
                method: method.into(),
                block: 0,
                rank,
                rep,
            },
            fields: vec![method.into(), rank.to_string(), rep.to_string()],
            error: rep as f64,
            seconds: None,
        }
    }

    #[test]
    fn rows_sorted_and_written() {
        let t = Table::new(
            &["method", "rank", "rep"],
            vec![
                row("svd", 1, 0),
                row("iterative", 2, 1),
                row("iterative", 2, 0),
            ],
        );
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "method,rank,rep\niterative,2,0\niterative,2,1\nsvd,1,0\n"
        );
        assert!(t.summary().contains("iterative"));
    }

    #[test]
    fn medians_and_floats() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(fmt_f64(1e-6), "1e-6");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
