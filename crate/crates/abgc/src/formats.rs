//! Text formats for edges, attributes, and labels.
//!
//! Edge files hold one `u v [weight]` triple per line (weight defaults to
//! 1.0) with an optional `#abg <n_u> <n_v>` size header; without it the
//! sizes are inferred as max index + 1. Attribute files start with either
//! `#dense <rows> <cols>` followed by one row per line, or
//! `#coo <rows> <cols>` followed by `row col value` triples. Label files
//! hold one integer per line. Lines starting with `#` are comments
//! everywhere (except the recognized headers), blank lines are skipped,
//! and all parse errors carry the 1-based line number.

use abgc_core::linalg::DenseMatrix;
use anyhow::{bail, Context, Result};

/// Raw contents of an edge file before graph construction.
#[derive(Debug, Clone)]
pub struct ParsedEdges {
    pub n_u: usize,
    pub n_v: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

pub fn parse_edges(text: &str) -> Result<ParsedEdges> {
    let mut declared: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut max_u = 0usize;
    let mut max_v = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#abg") {
            if declared.is_some() {
                bail!("line {lineno}: duplicate #abg header");
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                bail!("line {lineno}: #abg header needs '<n_u> <n_v>'");
            }
            let n_u = parts[0]
                .parse::<usize>()
                .with_context(|| format!("line {lineno}: bad n_u {:?}", parts[0]))?;
            let n_v = parts[1]
                .parse::<usize>()
                .with_context(|| format!("line {lineno}: bad n_v {:?}", parts[1]))?;
            declared = Some((n_u, n_v));
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 && parts.len() != 3 {
            bail!("line {lineno}: expected 'u v [weight]', got {line:?}");
        }
        let u = parts[0]
            .parse::<usize>()
            .with_context(|| format!("line {lineno}: bad u index {:?}", parts[0]))?;
        let v = parts[1]
            .parse::<usize>()
            .with_context(|| format!("line {lineno}: bad v index {:?}", parts[1]))?;
        let w = if parts.len() == 3 {
            parts[2]
                .parse::<f64>()
                .with_context(|| format!("line {lineno}: bad weight {:?}", parts[2]))?
        } else {
            1.0
        };
        max_u = max_u.max(u + 1);
        max_v = max_v.max(v + 1);
        edges.push((u, v, w));
    }
    let (n_u, n_v) = declared.unwrap_or((max_u, max_v));
    Ok(ParsedEdges { n_u, n_v, edges })
}

pub fn parse_attributes(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate().peekable();
    let (header_line, header) = loop {
        match lines.next() {
            Some((idx, raw)) => {
                let line = raw.trim();
                if line.is_empty() {
                    continue;
                }
                if line.starts_with("#dense") || line.starts_with("#coo") {
                    break (idx + 1, line.to_string());
                }
                if line.starts_with('#') {
                    continue;
                }
                bail!("line {}: expected '#dense <rows> <cols>' or '#coo <rows> <cols>' header before data", idx + 1);
            }
            None => bail!("attribute file has no #dense/#coo header"),
        }
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        bail!("line {header_line}: header needs '<kind> <rows> <cols>'");
    }
    let rows = parts[1]
        .parse::<usize>()
        .with_context(|| format!("line {header_line}: bad row count {:?}", parts[1]))?;
    let cols = parts[2]
        .parse::<usize>()
        .with_context(|| format!("line {header_line}: bad column count {:?}", parts[2]))?;

    let mut m = DenseMatrix::zeros(rows, cols);
    if parts[0] == "#dense" {
        let mut row = 0usize;
        for (idx, raw) in lines {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if row >= rows {
                bail!("line {lineno}: more than {rows} data rows");
            }
            let values: Vec<&str> = line.split_whitespace().collect();
            if values.len() != cols {
                bail!(
                    "line {lineno}: expected {cols} values, got {}",
                    values.len()
                );
            }
            for (j, tok) in values.iter().enumerate() {
                let v = tok
                    .parse::<f64>()
                    .with_context(|| format!("line {lineno}: bad value {tok:?}"))?;
                m.set(row, j, v);
            }
            row += 1;
        }
        if row != rows {
            bail!("attribute file declares {rows} rows but has {row}");
        }
    } else {
        for (idx, raw) in lines {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                bail!("line {lineno}: expected 'row col value', got {line:?}");
            }
            let r = toks[0]
                .parse::<usize>()
                .with_context(|| format!("line {lineno}: bad row {:?}", toks[0]))?;
            let c = toks[1]
                .parse::<usize>()
                .with_context(|| format!("line {lineno}: bad col {:?}", toks[1]))?;
            let v = toks[2]
                .parse::<f64>()
                .with_context(|| format!("line {lineno}: bad value {:?}", toks[2]))?;
            if r >= rows || c >= cols {
                bail!("line {lineno}: entry ({r}, {c}) outside {rows}x{cols}");
            }
            m.set(r, c, v);
        }
    }
    Ok(m)
}

pub fn parse_labels(text: &str) -> Result<Vec<usize>> {
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let l = line
            .parse::<usize>()
            .with_context(|| format!("line {}: bad label {line:?}", idx + 1))?;
        labels.push(l);
    }
    Ok(labels)
}

pub fn write_labels(labels: &[usize]) -> String {
    let mut out = String::with_capacity(labels.len() * 2);
    for l in labels {
        out.push_str(&l.to_string());
        out.push('\n');
    }
    out
}

pub fn write_edges(n_u: usize, n_v: usize, edges: &[(usize, usize, f64)]) -> String {
    let mut out = format!("#abg {n_u} {n_v}\n");
    for (u, v, w) in edges {
        out.push_str(&format!("{u}\t{v}\t{w}\n"));
    }
    out
}

pub fn write_dense_attributes(m: &DenseMatrix) -> String {
    let mut out = format!("#dense {} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
