//! Reading and writing the `alistq` text format for q-ary sparse matrices.
//!
//! Layout (whitespace-separated decimals, one logical record per line):
//!
//! ```text
//! n m q
//! max_col_weight max_row_weight
//! <n column weights>
//! <m row weights>
//! <n column blocks, one line each: pairs "row_index coefficient", 1-based rows>
//! <m row blocks, one line each: pairs "col_index coefficient", 1-based cols>
//! ```
//!
//! Blocks may be padded with `0 0` entries up to the maximum weight, which is
//! how irregular codes keep a rectangular layout. Written files are always
//! padded.

use crate::code::ParityCheckMatrix;
use crate::gf::{GfContext, GfElem};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlistError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: coefficient {coeff} invalid for GF({q})")]
    BadCoefficient { line: usize, coeff: u32, q: usize },
    #[error("field build failed: {0}")]
    Gf(#[from] crate::gf::GfError),
    #[error("matrix invalid: {0}")]
    Code(#[from] crate::code::CodeError),
}

struct Lines<R> {
    reader: R,
    line_no: usize,
}

impl<R: BufRead> Lines<R> {
    /// Next non-empty line as parsed integer tokens.
    fn next_ints(&mut self) -> Result<(usize, Vec<u32>), AlistError> {
        loop {
            let mut buf = String::new();
            self.line_no += 1;
            if self.reader.read_line(&mut buf)? == 0 {
                return Err(AlistError::Parse {
                    line: self.line_no,
                    msg: "unexpected end of file".into(),
                });
            }
            if buf.trim().is_empty() {
                continue;
            }
            let vals = buf
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().map_err(|_| AlistError::Parse {
                        line: self.line_no,
                        msg: format!("expected integer, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((self.line_no, vals));
        }
    }
}

pub fn read_alistq(path: impl AsRef<Path>) -> Result<ParityCheckMatrix, AlistError> {
    read_alistq_from(std::fs::File::open(path)?)
}

pub fn read_alistq_from(reader: impl Read) -> Result<ParityCheckMatrix, AlistError> {
    let mut lines = Lines { reader: BufReader::new(reader), line_no: 0 };

    let (ln, header) = lines.next_ints()?;
    let [n, m, q] = header[..] else {
        return Err(AlistError::Parse { line: ln, msg: "expected `n m q`".into() });
    };
    let (n, m, q) = (n as usize, m as usize, q as usize);
    if !q.is_power_of_two() || !(4..=256).contains(&q) {
        return Err(AlistError::Parse {
            line: ln,
            msg: format!("q={q} is not a power of two in 4..=256"),
        });
    }
    let gf = Arc::new(GfContext::new(q.trailing_zeros(), None)?);

    let (ln, maxw) = lines.next_ints()?;
    if maxw.len() != 2 {
        return Err(AlistError::Parse {
            line: ln,
            msg: "expected `max_col_weight max_row_weight`".into(),
        });
    }

    let expect_weights = |(ln, vals): (usize, Vec<u32>), count: usize, what: &str| {
        if vals.len() == count {
            Ok(vals)
        } else {
            Err(AlistError::Parse {
                line: ln,
                msg: format!("expected {count} {what} weights, found {}", vals.len()),
            })
        }
    };
    let col_weights = expect_weights(lines.next_ints()?, n, "column")?;
    let row_weights = expect_weights(lines.next_ints()?, m, "row")?;

    let read_block = |lines: &mut Lines<_>, weight: usize, limit: usize| {
        let (ln, vals) = lines.next_ints()?;
        if vals.len() % 2 != 0 {
            return Err(AlistError::Parse {
                line: ln,
                msg: "block must hold `index coefficient` pairs".into(),
            });
        }
        let mut entries = Vec::with_capacity(weight);
        for pair in vals.chunks(2) {
            let (idx, coeff) = (pair[0], pair[1]);
            if idx == 0 && coeff == 0 {
                continue; // padding
            }
            if idx == 0 || idx as usize > limit {
                return Err(AlistError::Parse {
                    line: ln,
                    msg: format!("index {idx} out of 1..={limit}"),
                });
            }
            if coeff == 0 || coeff as usize >= q {
                return Err(AlistError::BadCoefficient { line: ln, coeff, q });
            }
            entries.push((idx as usize - 1, coeff as GfElem));
        }
        if entries.len() != weight {
            return Err(AlistError::Parse {
                line: ln,
                msg: format!("declared weight {weight}, found {} entries", entries.len()),
            });
        }
        Ok(entries)
    };

    // Column blocks: used for the cross-check against the row blocks.
    let mut col_entries = Vec::with_capacity(n);
    for j in 0..n {
        col_entries.push(read_block(&mut lines, col_weights[j] as usize, m)?);
    }
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = read_block(&mut lines, row_weights[i] as usize, n)?;
        row.sort_unstable_by_key(|&(j, _)| j);
        rows.push(row);
    }
    for (j, entries) in col_entries.iter().enumerate() {
        for &(i, coeff) in entries {
            if !rows.get(i).is_some_and(|r| r.contains(&(j, coeff))) {
                return Err(AlistError::Parse {
                    line: 0,
                    msg: format!(
                        "column block {j} lists entry (row {i}, coeff {coeff}) missing from row blocks"
                    ),
                });
            }
        }
    }
    Ok(ParityCheckMatrix::new(gf, m, n, rows)?)
}

pub fn write_alistq(h: &ParityCheckMatrix, path: impl AsRef<Path>) -> Result<(), AlistError> {
    write_alistq_to(h, std::fs::File::create(path)?)
}

pub fn write_alistq_to(h: &ParityCheckMatrix, mut w: impl Write) -> Result<(), AlistError> {
    let (m, n) = (h.m(), h.n());
    let max_cw = (0..n).map(|j| h.col(j).len()).max().unwrap_or(0);
    let max_rw = (0..m).map(|i| h.row(i).len()).max().unwrap_or(0);
    writeln!(w, "{n} {m} {}", h.gf().q())?;
    writeln!(w, "{max_cw} {max_rw}")?;
    let join = |it: Vec<String>| it.join(" ");
    writeln!(w, "{}", join((0..n).map(|j| h.col(j).len().to_string()).collect()))?;
    writeln!(w, "{}", join((0..m).map(|i| h.row(i).len().to_string()).collect()))?;
    for j in 0..n {
        let mut toks: Vec<String> =
            h.col(j).iter().map(|&(i, c)| format!("{} {c}", i + 1)).collect();
        toks.resize(max_cw, "0 0".into());
        writeln!(w, "{}", join(toks))?;
    }
    for i in 0..m {
        let mut toks: Vec<String> =
            h.row(i).iter().map(|&(j, c)| format!("{} {c}", j + 1)).collect();
        toks.resize(max_rw, "0 0".into());
        writeln!(w, "{}", join(toks))?;
    }
    Ok(())
}
