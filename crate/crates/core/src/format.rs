//! Text formats: CMAT v1 matrices, state and triple files, GRAPH v1.
//!
//! ```text
//! # dims 2 2          (state files only)
//! cmat 1 4 4
//! 1 0 0 1
//! ...
//! graph 1 4 4
//! 1 2
//! ...
//! ```
//!
//! Blank lines and `#` comment lines are ignored between and inside blocks.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graphs::PatternGraph;
use crate::ldoi::{BipartiteState, LdoiTriple};
use crate::matrix::{ComplexMatrix, C64};

fn format_real(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// `re`, or `re±imi`; shortest round-trip decimals.
pub fn format_complex(z: C64) -> String {
    let re = format_real(z.re);
    if z.im == 0.0 {
        return re;
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{re}{sign}{}i", format_real(z.im.abs()))
}

fn parse_real(s: &str) -> Option<f64> {
    let ok = !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '+' | '-' | 'e' | 'E'));
    if !ok {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Parses `3`, `-0.5`, `1.5-2i`, `2i`, `-i`, `1e-3+4E2i`.
pub fn parse_complex(token: &str) -> Option<C64> {
    let Some(body) = token.strip_suffix('i') else {
        return parse_real(token).map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => parse_real(s)?,
    };
    Some(C64::new(re, im))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-blank lines with 1-based line numbers; comments are kept so callers
/// can read directives.
struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(k, l)| (k + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines {
            inner: it.peekable(),
            last_line: text.lines().count(),
        }
    }

    /// Next non-comment line.
    fn next_data(&mut self) -> Option<(usize, &'a str)> {
        self.inner.by_ref().find(|(_, l)| !l.starts_with('#'))
    }

    fn next_raw(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next()
    }

    fn has_data(&mut self) -> bool {
        while let Some((_, l)) = self.inner.peek() {
            if l.starts_with('#') {
                self.inner.next();
            } else {
                return true;
            }
        }
        false
    }

    fn eof_error(&self, what: &str) -> Error {
        parse_err(self.last_line.max(1), format!("unexpected end of input, expected {what}"))
    }
}

fn parse_header(line: usize, text: &str, magic: &str) -> Result<(usize, usize)> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != magic {
        return Err(parse_err(line, format!("expected `{magic} 1 <a> <b>` header, got `{text}`")));
    }
    if fields[1] != "1" {
        return Err(parse_err(line, format!("unsupported {magic} version `{}`", fields[1])));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| parse_err(line, format!("`{s}` is not a non-negative integer")))
    };
    Ok((num(fields[2])?, num(fields[3])?))
}

fn read_cmat(lines: &mut Lines<'_>) -> Result<ComplexMatrix> {
    let (hl, header) = lines.next_data().ok_or_else(|| lines.eof_error("a cmat header"))?;
    let (rows, cols) = parse_header(hl, header, "cmat")?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(hl, "matrix dimensions must be positive"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (ln, text) = lines.next_data().ok_or_else(|| lines.eof_error("a matrix row"))?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(parse_err(ln, format!("expected {cols} entries, found {}", tokens.len())));
        }
        for t in tokens {
            data.push(parse_complex(t).ok_or_else(|| parse_err(ln, format!("bad entry `{t}`")))?);
        }
    }
    ComplexMatrix::new(rows, cols, data)
}

fn expect_end(lines: &mut Lines<'_>) -> Result<()> {
    match lines.next_data() {
        None => Ok(()),
        Some((ln, text)) => Err(parse_err(ln, format!("trailing content `{text}`"))),
    }
}

pub fn parse_cmat(text: &str) -> Result<ComplexMatrix> {
    let mut lines = Lines::new(text);
    let m = read_cmat(&mut lines)?;
    expect_end(&mut lines)?;
    Ok(m)
}

pub fn write_cmat(m: &ComplexMatrix) -> String {
    let mut out = format!("cmat 1 {} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_complex(z)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A state file: the matrix and the `# dims d1 d2` directive if present.
#[derive(Debug, Clone)]
pub struct StateFile {
    pub matrix: ComplexMatrix,
    pub dims: Option<(usize, usize)>,
}

pub fn parse_state_file(text: &str) -> Result<StateFile> {
    let mut lines = Lines::new(text);
    let mut dims = None;
    while let Some(&(ln, l)) = lines.inner.peek() {
        if !l.starts_with('#') {
            break;
        }
        lines.next_raw();
        let fields: Vec<&str> = l.trim_start_matches('#').split_whitespace().collect();
        if fields.first() == Some(&"dims") {
            let parsed: Option<Vec<usize>> =
                fields[1..].iter().map(|s| s.parse::<usize>().ok()).collect();
            match parsed.as_deref() {
                Some(&[d1, d2]) if d1 > 0 && d2 > 0 => dims = Some((d1, d2)),
                _ => return Err(parse_err(ln, "expected `# dims <d1> <d2>`")),
            }
        }
    }
    let matrix = read_cmat(&mut lines)?;
    expect_end(&mut lines)?;
    Ok(StateFile { matrix, dims })
}

pub fn write_state(state: &BipartiteState) -> String {
    format!("# dims {} {}\n{}", state.d1(), state.d2(), write_cmat(state.rho()))
}

/// Three CMAT blocks in the order A, B, C.
pub fn parse_triple(text: &str) -> Result<LdoiTriple> {
    let mut lines = Lines::new(text);
    let a = read_cmat(&mut lines)?;
    let b = read_cmat(&mut lines)?;
    let c = read_cmat(&mut lines)?;
    expect_end(&mut lines)?;
    LdoiTriple::new(a, b, c)
}

pub fn write_triple(t: &LdoiTriple) -> String {
    let mut out = String::new();
    for (name, m) in [("A", &t.a), ("B", &t.b), ("C", &t.c)] {
        let _ = writeln!(out, "# {name}");
        out.push_str(&write_cmat(m));
    }
    out
}

fn read_graph(lines: &mut Lines<'_>) -> Result<PatternGraph> {
    let (hl, header) = lines.next_data().ok_or_else(|| lines.eof_error("a graph header"))?;
    let (n, m) = parse_header(hl, header, "graph")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, text) = lines.next_data().ok_or_else(|| lines.eof_error("an edge line"))?;
        let ends: Vec<usize> = text
            .split_whitespace()
            .map(|s| s.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(ln, format!("bad edge `{text}`")))?;
        match ends[..] {
            [i, j] if 1 <= i && i < j && j <= n => edges.push((i - 1, j - 1)),
            _ => return Err(parse_err(ln, format!("edge `{text}` needs 1 <= i < j <= {n}"))),
        }
    }
    PatternGraph::from_edges(n, &edges).map_err(|e| parse_err(hl, e.to_string()))
}

pub fn parse_graph(text: &str) -> Result<PatternGraph> {
    let mut lines = Lines::new(text);
    let g = read_graph(&mut lines)?;
    expect_end(&mut lines)?;
    Ok(g)
}

/// One or more concatenated GRAPH blocks.
pub fn parse_graphs(text: &str) -> Result<Vec<PatternGraph>> {
    let mut lines = Lines::new(text);
    let mut out = vec![read_graph(&mut lines)?];
    while lines.has_data() {
        out.push(read_graph(&mut lines)?);
    }
    Ok(out)
}

pub fn write_graph(g: &PatternGraph) -> String {
    let edges = g.edges();
    let mut out = format!("graph 1 {} {}\n", g.vertex_count(), edges.len());
    for (i, j) in edges {
        let _ = writeln!(out, "{} {}", i + 1, j + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_tokens() {
        assert_eq!(parse_complex("1.5-2i"), Some(C64::new(1.5, -2.0)));
        assert_eq!(parse_complex("0"), Some(C64::new(0.0, 0.0)));
        assert_eq!(parse_complex("3+0.25i"), Some(C64::new(3.0, 0.25)));
        assert_eq!(parse_complex("-2i"), Some(C64::new(0.0, -2.0)));
        assert_eq!(parse_complex("i"), Some(C64::new(0.0, 1.0)));
        assert_eq!(parse_complex("-1e-3+2E+2i"), Some(C64::new(-1e-3, 200.0)));
        assert_eq!(parse_complex("1e5"), Some(C64::new(1e5, 0.0)));
        for bad in ["", "x", "1+", "inf", "NaN", "1+2", "1+2j", "--1"] {
            assert_eq!(parse_complex(bad), None, "{bad}");
        }
    }

    #[test]
    fn complex_round_trip() {
        for z in [
            C64::new(0.1, -0.2),
            C64::new(-1.0 / 3.0, 0.0),
            C64::new(1e-300, 7e22),
            C64::new(-0.0, 0.0),
        ] {
            assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
        assert_eq!(format_complex(C64::new(1.5, -2.0)), "1.5-2i");
        assert_eq!(format_complex(C64::new(-0.0, 0.0)), "0");
    }

    #[test]
    fn cmat_round_trip_and_errors() {
        let m = ComplexMatrix::from_fn(2, 3, |i, j| C64::new(i as f64 - 0.5, j as f64 / 7.0));
        let text = write_cmat(&m);
        assert_eq!(parse_cmat(&text).unwrap(), m);

        let err = parse_cmat("cmat 1 2 2\n1 2\n3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(parse_cmat("cmat 2 1 1\n1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_cmat("cmat 1 1 1\nnan\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_cmat("cmat 1 1 1\n1\n2\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_cmat(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn state_dims_directive() {
        let f = parse_state_file("# some note\n# dims 1 2\ncmat 1 2 2\n1 0\n0 1\n").unwrap();
        assert_eq!(f.dims, Some((1, 2)));
        assert!(parse_state_file("cmat 1 1 1\n1\n").unwrap().dims.is_none());
        assert!(parse_state_file("# dims 2\ncmat 1 1 1\n1\n").is_err());
    }

    #[test]
    fn graph_blocks() {
        let c4 = PatternGraph::cycle(4);
        let text = write_graph(&c4);
        assert_eq!(text, "graph 1 4 4\n1 2\n1 4\n2 3\n3 4\n");
        assert_eq!(parse_graph(&text).unwrap(), c4);
        let both = format!("{text}\n{}", write_graph(&PatternGraph::path(3)));
        assert_eq!(parse_graphs(&both).unwrap().len(), 2);
        assert!(parse_graph("graph 1 3 1\n2 1\n").is_err());
        assert!(parse_graph("graph 1 3 1\n1 4\n").is_err());
        assert!(parse_graph("graph 1 3 2\n1 2\n1 2\n").is_err());
    }
}
