use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matcore::{CsrMatrix, DenseMatrix, MatrixHandle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

/// Reads a real MatrixMarket file. Coordinate files become CSR (symmetric
/// storage expanded to full), array files become dense.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MatrixHandle> {
    let path = path.as_ref();
    let file = File::open(path)?;
    parse_matrix_market(BufReader::new(file), &path.display().to_string())
}

/// [`read_matrix_market`] over any reader; `name` appears in errors.
pub fn parse_matrix_market(reader: impl BufRead, name: &str) -> Result<MatrixHandle> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let err = |line: usize, msg: String| Error::Parse {
        path: name.into(),
        line,
        msg,
    };

    let (line_no, header) = match lines.next() {
        Some((n, l)) => (n, l?),
        None => return Err(err(1, "empty file".into())),
    };
    let (format, field, symmetry) = parse_header(&header).map_err(|m| err(line_no, m))?;

    // Skip comments to the size line.
    let mut size_line = None;
    for (n, l) in lines.by_ref() {
        let l = l?;
        let t = l.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        size_line = Some((n, t.to_string()));
        break;
    }
    let (size_no, size) = size_line.ok_or_else(|| err(line_no + 1, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(size_no, format!("bad size line: {e}")))?;
    let expected_fields = if format == Format::Coordinate { 3 } else { 2 };
    if dims.len() != expected_fields {
        return Err(err(
            size_no,
            format!(
                "size line needs {expected_fields} integers, got {}",
                dims.len()
            ),
        ));
    }
    let (m, n) = (dims[0], dims[1]);
    if symmetry != Symmetry::General && m != n {
        return Err(err(size_no, format!("{m}x{n} matrix cannot be symmetric")));
    }

    let entries = match format {
        Format::Coordinate => dims[2],
        Format::Array => match symmetry {
            Symmetry::General => m * n,
            Symmetry::Symmetric => n * (n + 1) / 2,
            Symmetry::SkewSymmetric => n * n.saturating_sub(1) / 2,
        },
    };
    let per_entry = match (format, field) {
        (Format::Array, _) => 1,
        (Format::Coordinate, Field::Pattern) => 2,
        (Format::Coordinate, _) => 3,
    };

    let mut read = 0usize;
    let mut last_line = size_no;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(entries);
    let mut values: Vec<f64> =
        Vec::with_capacity(if format == Format::Array { entries } else { 0 });
    for (n_line, l) in lines {
        let l = l?;
        last_line = n_line;
        let t = l.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if read == entries {
            return Err(err(n_line, format!("more than {entries} entries")));
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        if toks.len() != per_entry {
            return Err(err(
                n_line,
                format!("expected {per_entry} fields, got {}", toks.len()),
            ));
        }
        let value = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|e| err(n_line, format!("bad value '{s}': {e}")))?;
            if !v.is_finite() {
                return Err(err(n_line, format!("non-finite value '{s}'")));
            }
            Ok(v)
        };
        match format {
            Format::Array => values.push(value(toks[0])?),
            Format::Coordinate => {
                let index = |s: &str, len: usize| -> Result<usize> {
                    let i: usize = s
                        .parse()
                        .map_err(|e| err(n_line, format!("bad index '{s}': {e}")))?;
                    if i == 0 || i > len {
                        return Err(err(n_line, format!("index {i} outside 1..={len}")));
                    }
                    Ok(i - 1)
                };
                let i = index(toks[0], m)?;
                let j = index(toks[1], n)?;
                let v = if field == Field::Pattern {
                    1.0
                } else {
                    value(toks[2])?
                };
                if symmetry == Symmetry::SkewSymmetric && i == j {
                    return Err(err(n_line, "skew-symmetric diagonal entry".into()));
                }
                triplets.push((i, j, v));
            }
        }
        read += 1;
    }
    if read != entries {
        return Err(err(
            last_line,
            format!("header declares {entries} entries, found {read}"),
        ));
    }

    match format {
        Format::Coordinate => {
            if symmetry != Symmetry::General {
                let sign = if symmetry == Symmetry::SkewSymmetric {
                    -1.0
                } else {
                    1.0
                };
                let mirrored: Vec<_> = triplets
                    .iter()
                    .filter(|&&(i, j, _)| i != j)
                    .map(|&(i, j, v)| (j, i, sign * v))
                    .collect();
                triplets.extend(mirrored);
            }
            Ok(CsrMatrix::from_triplets(m, n, &triplets)?.into())
        }
        Format::Array => {
            let mut a = DenseMatrix::zeros(m, n);
            let mut it = values.into_iter();
            for j in 0..n {
                let start = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::Symmetric => j,
                    Symmetry::SkewSymmetric => j + 1,
                };
                for i in start..m {
                    let v = it.next().expect("count checked");
                    a.set(i, j, v);
                    if i != j {
                        match symmetry {
                            Symmetry::General => {}
                            Symmetry::Symmetric => a.set(j, i, v),
                            Symmetry::SkewSymmetric => a.set(j, i, -v),
                        }
                    }
                }
            }
            Ok(a.into())
        }
    }
}

fn parse_header(line: &str) -> std::result::Result<(Format, Field, Symmetry), String> {
    let toks: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" {
        return Err(format!("bad header '{line}'"));
    }
    let format = match toks[2].as_str() {
        "coordinate" => Format::Coordinate,
        "array" => Format::Array,
        other => return Err(format!("unknown format '{other}'")),
    };
    let field = match toks[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" if format == Format::Coordinate => Field::Pattern,
        other => return Err(format!("unsupported field: {other}")),
    };
    let symmetry = match toks[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => return Err(format!("unsupported symmetry '{other}'")),
    };
    Ok((format, field, symmetry))
}

/// Writes `a` as `real general`: coordinate for sparse, array for dense.
/// Values use the shortest representation that reads back exactly.
pub fn write_matrix_market(path: impl AsRef<Path>, a: &MatrixHandle) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let (m, n) = a.shape();
    match a {
        MatrixHandle::Sparse(s) => {
            writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
            writeln!(w, "{m} {n} {}", s.nnz())?;
            for (i, j, v) in s.triplets() {
                writeln!(w, "{} {} {v:?}", i + 1, j + 1)?;
            }
        }
        MatrixHandle::Dense(d) => {
            writeln!(w, "%%MatrixMarket matrix array real general")?;
            writeln!(w, "{m} {n}")?;
            for j in 0..n {
                for i in 0..m {
                    writeln!(w, "{:?}", d.get(i, j))?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
