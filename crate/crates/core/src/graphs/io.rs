//! Edge-list text records: a header line `n m`, then `m` lines `u v`
//! (multigraphs add a multiplicity column). Files hold records back to back;
//! blank lines and `#` comments are skipped.

use std::io::{BufRead, Write};

use super::graph::{Graph, Multigraph};
use crate::error::{Error, Result};

pub fn write_graph<W: Write>(w: &mut W, g: &Graph) -> Result<()> {
    let edges = g.edges();
    writeln!(w, "{} {}", g.n(), edges.len())?;
    for (u, v) in edges {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn write_multigraph<W: Write>(w: &mut W, g: &Multigraph) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.distinct_edge_count())?;
    for ((u, v), m) in g.edges() {
        writeln!(w, "{u} {v} {m}")?;
    }
    Ok(())
}

struct Records<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> Records<R> {
    fn next_fields(&mut self) -> Result<Option<Vec<usize>>> {
        for line in self.lines.by_ref() {
            self.line_no += 1;
            let line = line?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields = body
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| {
                        Error::Parse(format!("line {}: expected integer, got {t:?}", self.line_no))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Some(fields));
        }
        Ok(None)
    }

    fn record(&mut self, cols: usize) -> Result<Option<(usize, Vec<Vec<usize>>)>> {
        let Some(header) = self.next_fields()? else {
            return Ok(None);
        };
        let [n, m] = header[..] else {
            return Err(Error::Parse(format!("line {}: header must be `n m`", self.line_no)));
        };
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let row = self
                .next_fields()?
                .ok_or_else(|| Error::Parse("unexpected end of edge list".into()))?;
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "line {}: expected {cols} columns",
                    self.line_no
                )));
            }
            if row[0] >= n || row[1] >= n || row[0] == row[1] {
                return Err(Error::Parse(format!(
                    "line {}: bad edge {}-{} for n={n}",
                    self.line_no, row[0], row[1]
                )));
            }
            rows.push(row);
        }
        Ok(Some((n, rows)))
    }
}

pub fn read_graphs<R: BufRead>(r: R) -> Result<Vec<Graph>> {
    let mut rec = Records {
        lines: r.lines(),
        line_no: 0,
    };
    let mut out = Vec::new();
    while let Some((n, rows)) = rec.record(2)? {
        let mut g = Graph::empty(n);
        for row in rows {
            if g.has_edge(row[0], row[1]) {
                return Err(Error::Parse(format!("duplicate edge {}-{}", row[0], row[1])));
            }
            g.add_edge(row[0], row[1]);
        }
        out.push(g);
    }
    Ok(out)
}

pub fn read_multigraphs<R: BufRead>(r: R) -> Result<Vec<Multigraph>> {
    let mut rec = Records {
        lines: r.lines(),
        line_no: 0,
    };
    let mut out = Vec::new();
    while let Some((n, rows)) = rec.record(3)? {
        let mut g = Multigraph::new(n);
        for row in rows {
            if row[2] == 0 {
                return Err(Error::Parse("multiplicity must be positive".into()));
            }
            g.add_edge(row[0], row[1], row[2] as u32);
        }
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_several_records() {
        let gs = vec![Graph::cycle(5), Graph::complete(4), Graph::empty(3)];
        let mut buf = Vec::new();
        for g in &gs {
            write_graph(&mut buf, g).unwrap();
        }
        assert_eq!(read_graphs(buf.as_slice()).unwrap(), gs);
    }

    #[test]
    fn multigraph_round_trip() {
        let mut m = Multigraph::new(4);
        m.add_edge(0, 1, 2);
        m.add_edge(1, 3, 1);
        let mut buf = Vec::new();
        write_multigraph(&mut buf, &m).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "4 2\n0 1 2\n1 3 1\n");
        assert_eq!(read_multigraphs(buf.as_slice()).unwrap(), vec![m]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_graphs("3 1\n0 3\n".as_bytes()).is_err());
        assert!(read_graphs("3 2\n0 1\n".as_bytes()).is_err());
        assert!(read_graphs("3 1\n1 1\n".as_bytes()).is_err());
        assert!(read_graphs("# nothing\n\n".as_bytes()).unwrap().is_empty());
    }
}
