//! Plain-text graph files.
//!
//! ```text
//! corners B C D E
//! weights 1 1 2 3
//! boundary B          # optional
//! insert x B D        # zero or more, in blowup order
//! ```
//!
//! Marks and weights are never stored; they are replayed from the insertions.

use crate::error::{Error, Result};
use crate::graph::{VisibleGraph, CORNERS};
use crate::rational::{format_rational, parse_rational, Rational};

pub fn parse(text: &str) -> Result<VisibleGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line: usize, msg: String| Error::Parse { line, msg };

    let (ln, corners) = lines.next().ok_or_else(|| err(0, "empty file".into()))?;
    let tokens: Vec<&str> = corners.split_whitespace().collect();
    if tokens.first() != Some(&"corners") || tokens.len() != CORNERS + 1 {
        return Err(err(ln, "expected `corners <n0> <n1> <n2> <n3>`".into()));
    }
    let names: [String; CORNERS] = std::array::from_fn(|k| tokens[k + 1].to_string());

    let (ln, weights) = lines.next().ok_or_else(|| err(ln, "missing `weights` line".into()))?;
    let tokens: Vec<&str> = weights.split_whitespace().collect();
    if tokens.first() != Some(&"weights") || tokens.len() != CORNERS + 1 {
        return Err(err(ln, "expected `weights <w0> <w1> <w2> <w3>`".into()));
    }
    let mut ws: Vec<Rational> = Vec::with_capacity(CORNERS);
    for t in &tokens[1..] {
        ws.push(parse_rational(t).map_err(|e| err(ln, e.to_string()))?);
    }
    let ws: [Rational; CORNERS] = ws.try_into().expect("four weights");

    let mut boundary = None;
    let mut inserts = Vec::new();
    for (ln, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["boundary", name] => {
                if boundary.is_some() || !inserts.is_empty() {
                    return Err(err(ln, "`boundary` must come once, before any insertion".into()));
                }
                let k = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| err(ln, format!("boundary `{name}` is not a corner")))?;
                boundary = Some(k);
            }
            ["insert", new, a, b] => inserts.push((ln, *new, *a, *b)),
            _ => return Err(err(ln, format!("malformed line `{line}`"))),
        }
    }

    let mut g = VisibleGraph::new_base_named(names, ws, boundary).map_err(|e| err(1, e.to_string()))?;
    for (ln, new, a, b) in inserts {
        let ia = g.id(a).map_err(|e| err(ln, e.to_string()))?;
        let ib = g.id(b).map_err(|e| err(ln, e.to_string()))?;
        g.insert_in_place(ia, ib, new.to_string())
            .map_err(|e| err(ln, e.to_string()))?;
    }
    Ok(g)
}

pub fn serialize(g: &VisibleGraph) -> String {
    let mut out = String::new();
    let corners: Vec<&str> = (0..CORNERS).map(|k| g.name(g.corner(k))).collect();
    out.push_str(&format!("corners {}\n", corners.join(" ")));
    let ws: Vec<String> = g.weights().iter().map(format_rational).collect();
    out.push_str(&format!("weights {}\n", ws.join(" ")));
    if let Some(b) = g.boundary() {
        out.push_str(&format!("boundary {}\n", g.name(b)));
    }
    for ins in g.history() {
        out.push_str(&format!(
            "insert {} {} {}\n",
            g.name(ins.new),
            g.name(ins.left),
            g.name(ins.right)
        ));
    }
    out
}
