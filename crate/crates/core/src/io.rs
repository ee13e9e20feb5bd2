//! Line-oriented text formats for complexes, stacks, gradients and labels,
//! plus DOT and OFF exports.
//!
//! A face is written as its vertex ids separated by spaces. `#` starts a
//! comment line; blank lines are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::complex::{Complex, FaceId, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::forest::{Forest, WeightedFacetGraph};
use crate::stack::{complete_from_facets, Altitude, Stack};
use crate::watershed::{Label, WatershedResult};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Numbered content lines, comments and blanks skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_face(text: &str, line: usize) -> Result<Simplex> {
    let mut vertices: Vec<Vertex> = Vec::new();
    for tok in text.split_whitespace() {
        let v: Vertex = tok
            .parse()
            .map_err(|_| parse_error(line, format!("bad vertex id `{tok}`")))?;
        if vertices.contains(&v) {
            return Err(parse_error(line, format!("duplicate vertex {v}")));
        }
        vertices.push(v);
    }
    if vertices.is_empty() {
        return Err(parse_error(line, "empty face"));
    }
    Simplex::new(vertices).map_err(|e| parse_error(line, e.to_string()))
}

fn lookup(host: &Complex, s: &Simplex, line: usize) -> Result<FaceId> {
    host.id_of(s)
        .ok_or_else(|| parse_error(line, format!("face {s} is not in the complex")))
}

/// Complex format: one face per line; the closure of the listed faces.
pub fn parse_complex(text: &str) -> Result<Complex> {
    let faces = content_lines(text)
        .map(|(n, l)| parse_face(l, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(Complex::closure(faces))
}

/// Every face, in canonical order.
pub fn write_complex(complex: &Complex) -> String {
    let mut out = String::new();
    for s in complex.faces() {
        writeln!(out, "{s}").unwrap();
    }
    out
}

/// How to treat faces of the closure that have no value in a stack file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Completion {
    /// Every face must be listed.
    #[default]
    None,
    /// Missing faces get the largest value among their cofaces.
    Max,
}

fn split_value<'a>(l: &'a str, line: usize, what: &str) -> Result<(&'a str, &'a str)> {
    l.rsplit_once(':')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| parse_error(line, format!("expected `face : {what}`")))
}

/// Stack format: `v0 v1 ... vk : value` per line.
pub fn parse_stack(text: &str, completion: Completion) -> Result<Stack> {
    let mut values: HashMap<Simplex, Altitude> = HashMap::new();
    for (n, l) in content_lines(text) {
        let (face, value) = split_value(l, n, "value")?;
        let s = parse_face(face, n)?;
        let v: Altitude = value
            .parse()
            .map_err(|_| parse_error(n, format!("bad value `{value}`")))?;
        if values.insert(s.clone(), v).is_some_and(|old| old != v) {
            return Err(parse_error(n, format!("conflicting values for {s}")));
        }
    }
    let host = Arc::new(Complex::closure(values.keys().cloned()));
    match completion {
        Completion::Max => complete_from_facets(host, &values),
        Completion::None => {
            let alt = host
                .faces()
                .iter()
                .map(|s| values.get(s).copied().ok_or_else(|| Error::MissingAltitude(s.clone())))
                .collect::<Result<Vec<_>>>()?;
            Stack::new(host, alt)
        }
    }
}

pub fn write_stack(stack: &Stack) -> String {
    let mut out = String::new();
    for f in stack.host().ids() {
        writeln!(out, "{} : {}", stack.host().face(f), stack.altitude(f)).unwrap();
    }
    out
}

/// Gradient format: `x-face | y-face` per line.
pub fn parse_gradient(text: &str, host: &Complex) -> Result<Vec<(FaceId, FaceId)>> {
    content_lines(text)
        .map(|(n, l)| {
            let (a, b) = l
                .split_once('|')
                .ok_or_else(|| parse_error(n, "expected `face | face`"))?;
            let x = lookup(host, &parse_face(a, n)?, n)?;
            let y = lookup(host, &parse_face(b, n)?, n)?;
            Ok((x, y))
        })
        .collect()
}

pub fn write_gradient(host: &Complex, pairs: &[(FaceId, FaceId)]) -> String {
    let mut out = String::new();
    for &(x, y) in pairs {
        writeln!(out, "{} | {}", host.face(x), host.face(y)).unwrap();
    }
    out
}

/// Label format: `face : W` or `face : <basin id>`, one line per face of
/// the host.
pub fn parse_labels(text: &str, host: &Complex) -> Result<Vec<Label>> {
    let mut labels: Vec<Option<Label>> = vec![None; host.len()];
    for (n, l) in content_lines(text) {
        let (face, value) = split_value(l, n, "label")?;
        let f = lookup(host, &parse_face(face, n)?, n)?;
        let label = match value {
            "W" => Label::Cut,
            v => match v.parse::<u32>() {
                Ok(b) if b > 0 => Label::Basin(b),
                _ => return Err(parse_error(n, format!("bad label `{v}`"))),
            },
        };
        if labels[f.index()].replace(label).is_some() {
            return Err(parse_error(n, format!("face {} labeled twice", host.face(f))));
        }
    }
    labels
        .into_iter()
        .zip(host.faces())
        .map(|(l, s)| l.ok_or_else(|| Error::InvalidArgument(format!("face {s} has no label"))))
        .collect()
}

pub fn write_labels(host: &Complex, labels: &[Label]) -> String {
    let mut out = String::new();
    for (s, l) in host.faces().iter().zip(labels) {
        writeln!(out, "{s} : {l}").unwrap();
    }
    out
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn node_name(host: &Complex, f: FaceId) -> String {
    format!("\"{}\"", host.face(f))
}

/// Dual graph with forest edges drawn bold.
pub fn facet_graph_dot(host: &Complex, graph: &WeightedFacetGraph, forest: Option<&Forest>) -> String {
    let mut in_forest = vec![false; graph.edges().len()];
    let mut is_root = vec![false; graph.vertex_count()];
    if let Some(f) = forest {
        for &e in &f.edges {
            in_forest[e] = true;
        }
        for &r in &f.roots {
            is_root[r] = true;
        }
    }
    let mut out = String::from("graph facets {\n");
    for (v, &f) in graph.faces().iter().enumerate() {
        let shape = if is_root[v] { " [shape=doublecircle]" } else { "" };
        writeln!(out, "  {}{shape};", node_name(host, f)).unwrap();
    }
    for (i, e) in graph.edges().iter().enumerate() {
        let style = if in_forest[i] { ", penwidth=3" } else { ", style=dashed" };
        writeln!(
            out,
            "  {} -- {} [label=\"{}\"{style}];",
            node_name(host, graph.faces()[e.a]),
            node_name(host, graph.faces()[e.b]),
            e.weight
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Dual graph colored by basin; edges through cut faces are dashed.
pub fn watershed_dot(result: &WatershedResult, graph: &WeightedFacetGraph) -> String {
    let host = result.host();
    let mut out = String::from("graph watershed {\n  node [style=filled];\n");
    for &f in graph.faces() {
        let color = match result.label(f) {
            Label::Basin(b) => PALETTE[(b as usize - 1) % PALETTE.len()],
            Label::Cut => "#000000",
        };
        writeln!(out, "  {} [fillcolor=\"{color}\"];", node_name(host, f)).unwrap();
    }
    for e in graph.edges() {
        let cut = e.ridge.is_some_and(|r| result.label(r) == Label::Cut);
        let style = if cut { " [style=dashed]" } else { "" };
        writeln!(
            out,
            "  {} -- {}{style};",
            node_name(host, graph.faces()[e.a]),
            node_name(host, graph.faces()[e.b])
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Vertex coordinates: `id x y [z]` per line.
pub fn parse_coords(text: &str) -> Result<HashMap<Vertex, [f64; 3]>> {
    let mut out = HashMap::new();
    for (n, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if !(3..=4).contains(&toks.len()) {
            return Err(parse_error(n, "expected `id x y [z]`"));
        }
        let id: Vertex = toks[0]
            .parse()
            .map_err(|_| parse_error(n, format!("bad vertex id `{}`", toks[0])))?;
        let mut p = [0.0; 3];
        for (k, t) in toks[1..].iter().enumerate() {
            p[k] = t.parse().map_err(|_| parse_error(n, format!("bad coordinate `{t}`")))?;
        }
        if out.insert(id, p).is_some() {
            return Err(parse_error(n, format!("vertex {id} given twice")));
        }
    }
    Ok(out)
}

fn rgb(hex: &str) -> (u8, u8, u8) {
    let c = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).unwrap();
    (c(1), c(3), c(5))
}

/// OFF mesh of a triangulated surface colored by basin. Cut edges are
/// listed in a trailing comment block.
pub fn watershed_off(result: &WatershedResult, coords: &HashMap<Vertex, [f64; 3]>) -> Result<String> {
    let host = result.host();
    if host.dim() != 2 {
        return Err(Error::InvalidArgument(
            "OFF export needs a 2-dimensional complex".into(),
        ));
    }
    let vertices: Vec<Vertex> = host.faces_of_dim(0).map(|v| host.face(v).vertices()[0]).collect();
    let index: HashMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = String::from("OFF\n");
    writeln!(out, "{} {} 0", vertices.len(), host.count_of_dim(2)).unwrap();
    for v in &vertices {
        let p = coords
            .get(v)
            .ok_or_else(|| Error::InvalidArgument(format!("no coordinates for vertex {v}")))?;
        writeln!(out, "{} {} {}", p[0], p[1], p[2]).unwrap();
    }
    for t in host.faces_of_dim(2) {
        let (r, g, b) = match result.label(t) {
            Label::Basin(id) => rgb(PALETTE[(id as usize - 1) % PALETTE.len()]),
            Label::Cut => (0, 0, 0),
        };
        let ix: Vec<usize> = host.face(t).vertices().iter().map(|v| index[v]).collect();
        writeln!(out, "3 {} {} {} {r} {g} {b}", ix[0], ix[1], ix[2]).unwrap();
    }
    out.push_str("# cut edges\n");
    for e in host.faces_of_dim(1) {
        if result.label(e) == Label::Cut {
            writeln!(out, "# {}", host.face(e)).unwrap();
        }
    }
    Ok(out)
}
