//! Plain-text formats.
//!
//! Colored graph: a header `n m r`, then `m` lines `u v c` with 0-based `u < v`
//! and 1-based `c`. Trace: the same with a fourth column `step`, strictly
//! increasing from 1, and an optional leading `# model=.. seed=.. recolor=..`
//! line. Uncolored traces use `r = 0` and `c = 0`. Certificate dumps append
//! `m0 ...`, `checks ...` and `cycle ...` lines to a colored graph.

use std::fmt::Write as _;

use crate::certify::{certify, Checks, CycleCertificate, Host};
use crate::error::{Result, ZebraError};
use crate::graph::{edge, ColoredGraph, Edge, Graph, Matching};
use crate::process::{ProcessModel, ProcessTrace};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(ZebraError::Parse {
        line,
        msg: msg.into(),
    })
}

fn numbers(line: &str, lineno: usize, want: usize) -> Result<Vec<usize>> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != want {
        return parse_err(lineno, format!("expected {want} fields, got {}", parts.len()));
    }
    parts
        .iter()
        .map(|p| p.parse::<usize>().or_else(|_| parse_err(lineno, format!("bad integer '{p}'"))))
        .collect()
}

pub fn write_colored_graph(g: &ColoredGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", g.n(), g.m(), g.r());
    for &((u, v), c) in g.edges() {
        let _ = writeln!(s, "{u} {v} {c}");
    }
    s
}

/// Writes a plain graph as a one-color graph.
pub fn write_graph(g: &Graph) -> String {
    write_colored_graph(&ColoredGraph::from_edges(g.n(), 1, g.edges().into_iter().map(|e| (e, 1))))
}

pub fn read_colored_graph(text: &str) -> Result<ColoredGraph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (graph, rest) = read_graph_block(&mut lines)?;
    if let Some((i, _)) = rest {
        return parse_err(i + 1, "trailing content after edge list");
    }
    Ok(graph)
}

type Lines<'a> = dyn Iterator<Item = (usize, &'a str)> + 'a;

fn read_graph_block<'a>(
    lines: &mut Lines<'a>,
) -> Result<(ColoredGraph, Option<(usize, &'a str)>)> {
    let Some((i, header)) = lines.next() else {
        return parse_err(1, "missing header");
    };
    let h = numbers(header, i + 1, 3)?;
    let (n, m, r) = (h[0], h[1], h[2]);
    if r == 0 {
        return parse_err(i + 1, "graph needs r >= 1");
    }
    let mut g = ColoredGraph::new(n, r);
    for _ in 0..m {
        let Some((i, line)) = lines.next() else {
            return parse_err(i + 2, "edge list shorter than header says");
        };
        let f = numbers(line, i + 1, 3)?;
        let (u, v, c) = (f[0], f[1], f[2]);
        if u >= v || v >= n {
            return parse_err(i + 1, "need 0 <= u < v < n");
        }
        if c < 1 || c > r {
            return parse_err(i + 1, format!("color {c} outside 1..={r}"));
        }
        if !g.add_edge(u, v, c) {
            return parse_err(i + 1, "duplicate edge");
        }
    }
    Ok((g, lines.next()))
}

fn model_name(m: ProcessModel) -> &'static str {
    match m {
        ProcessModel::UniformWithoutReplacement => "uniform-without-replacement",
        ProcessModel::UniformExcludingM0 => "uniform-excluding-m0",
        ProcessModel::WithReplacement => "with-replacement",
    }
}

pub fn write_trace(t: &ProcessTrace) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# model={} seed={} recolor={}",
        model_name(t.model),
        t.seed,
        t.recolor_repeats
    );
    let r = if t.is_colored() { t.r } else { 0 };
    let _ = writeln!(s, "{} {} {}", t.n, t.len(), r);
    for (i, &(u, v)) in t.edges.iter().enumerate() {
        let c = t.colors.as_ref().map_or(0, |cs| cs[i]);
        let _ = writeln!(s, "{u} {v} {c} {}", i + 1);
    }
    s
}

pub fn read_trace(text: &str) -> Result<ProcessTrace> {
    let mut model = ProcessModel::UniformWithoutReplacement;
    let mut seed = 0u64;
    let mut recolor = false;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).peekable();
    if let Some((i, first)) = lines.peek().copied() {
        if let Some(meta) = first.strip_prefix('#') {
            lines.next();
            for kv in meta.split_whitespace() {
                match kv.split_once('=') {
                    Some(("model", "uniform-without-replacement")) => {
                        model = ProcessModel::UniformWithoutReplacement
                    }
                    Some(("model", "uniform-excluding-m0")) => model = ProcessModel::UniformExcludingM0,
                    Some(("model", "with-replacement")) => model = ProcessModel::WithReplacement,
                    Some(("seed", v)) => {
                        seed = v.parse().or_else(|_| parse_err(i + 1, "bad seed"))?
                    }
                    Some(("recolor", v)) => {
                        recolor = v.parse().or_else(|_| parse_err(i + 1, "bad recolor flag"))?
                    }
                    _ => return parse_err(i + 1, format!("unknown metadata '{kv}'")),
                }
            }
        }
    }
    let Some((i, header)) = lines.next() else {
        return parse_err(1, "missing header");
    };
    let h = numbers(header, i + 1, 3)?;
    let (n, m, r) = (h[0], h[1], h[2]);
    let mut edges = Vec::with_capacity(m);
    let mut colors = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    let mut repeated = Vec::new();
    for k in 0..m {
        let Some((i, line)) = lines.next() else {
            return parse_err(i + 2, "trace shorter than header says");
        };
        let f = numbers(line, i + 1, 4)?;
        let (u, v, c, step) = (f[0], f[1], f[2], f[3]);
        if u >= v || v >= n {
            return parse_err(i + 1, "need 0 <= u < v < n");
        }
        if step != k + 1 {
            return parse_err(i + 1, "steps must be 1, 2, 3, ...");
        }
        if (r == 0 && c != 0) || (r > 0 && (c < 1 || c > r)) {
            return parse_err(i + 1, format!("color {c} invalid for r = {r}"));
        }
        if !seen.insert((u, v)) {
            repeated.push(k);
        }
        edges.push((u, v));
        colors.push(c);
    }
    if let Some((i, _)) = lines.next() {
        return parse_err(i + 1, "trailing content after trace");
    }
    Ok(ProcessTrace {
        n,
        model,
        edges,
        colors: (r > 0).then_some(colors),
        r,
        recolor_repeats: recolor,
        repeated,
        seed,
    })
}

/// A cycle together with everything needed to re-verify it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateDump {
    pub graph: ColoredGraph,
    pub m0: Option<Matching>,
    pub zebraic2: bool,
    pub r_pattern: Option<usize>,
    pub cycle: Vec<usize>,
}

impl CertificateDump {
    pub fn from_plain(g: &Graph, m0: Option<&Matching>, cycle: &[usize]) -> Self {
        CertificateDump {
            graph: ColoredGraph::from_edges(g.n(), 1, g.edges().into_iter().map(|e| (e, 1))),
            m0: m0.cloned(),
            zebraic2: false,
            r_pattern: None,
            cycle: cycle.to_vec(),
        }
    }

    pub fn verify(&self) -> CycleCertificate {
        certify(
            &self.cycle,
            Host::Colored(&self.graph),
            Checks {
                m0: self.m0.as_ref(),
                zebraic2: self.zebraic2,
                r_pattern: self.r_pattern,
            },
        )
    }

    pub fn write(&self) -> String {
        let mut s = write_colored_graph(&self.graph);
        if let Some(m0) = &self.m0 {
            s.push_str("m0");
            for (u, v) in m0.edges() {
                let _ = write!(s, " {u} {v}");
            }
            s.push('\n');
        }
        s.push_str("checks");
        if self.m0.is_some() {
            s.push_str(" m0");
        }
        if self.zebraic2 {
            s.push_str(" zebraic2");
        }
        if let Some(r) = self.r_pattern {
            let _ = write!(s, " rpattern={r}");
        }
        s.push('\n');
        s.push_str("cycle");
        for v in &self.cycle {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
        s
    }

    pub fn read(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (graph, mut next) = read_graph_block(&mut lines)?;
        let mut m0 = None;
        let mut zebraic2 = false;
        let mut r_pattern = None;
        let mut cycle = None;
        while let Some((i, line)) = next {
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("m0") => {
                    let vals: Vec<usize> = parts
                        .map(|p| p.parse().or_else(|_| parse_err(i + 1, "bad m0 entry")))
                        .collect::<Result<_>>()?;
                    if vals.len() % 2 == 1 {
                        return parse_err(i + 1, "m0 line needs pairs");
                    }
                    let es: Vec<Edge> = vals.chunks(2).map(|c| edge(c[0], c[1])).collect();
                    m0 = Some(Matching::from_edges(graph.n(), es).or_else(|e| parse_err(i + 1, e.to_string()))?);
                }
                Some("checks") => {
                    for p in parts {
                        match p {
                            "m0" => {}
                            "zebraic2" => zebraic2 = true,
                            _ => match p.strip_prefix("rpattern=").map(str::parse::<usize>) {
                                Some(Ok(r)) => r_pattern = Some(r),
                                _ => return parse_err(i + 1, format!("unknown check '{p}'")),
                            },
                        }
                    }
                }
                Some("cycle") => {
                    cycle = Some(
                        parts
                            .map(|p| p.parse().or_else(|_| parse_err(i + 1, "bad cycle vertex")))
                            .collect::<Result<Vec<usize>>>()?,
                    );
                }
                _ => return parse_err(i + 1, "unexpected line in certificate"),
            }
            next = lines.next();
        }
        let Some(cycle) = cycle else {
            return parse_err(0, "certificate has no cycle line");
        };
        Ok(CertificateDump {
            graph,
            m0,
            zebraic2,
            r_pattern,
            cycle,
        })
    }
}
