//! On-disk formats: graph and flow JSON, root and curve CSV, factored text.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use flowpoly_core::assemble::{AssembledFlow, ValidationReport};
use flowpoly_core::graph::{GPGraph, Multigraph};
use flowpoly_core::roots::{float_to_string, RootSet};
use flowpoly_core::spectra::CurveTrace;
use flowpoly_core::IntPoly;

pub const FLOW_FORMAT: &str = "flowpoly-flow";
pub const GRAPH_FORMAT: &str = "flowpoly-graph";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default = "graph_format")]
    pub format: String,
    #[serde(default = "version")]
    pub version: u32,
    /// Present for generalised Petersen graphs; a bare multigraph may omit them.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub vertices: Option<usize>,
    pub edges: Vec<[usize; 2]>,
}

fn graph_format() -> String {
    GRAPH_FORMAT.into()
}

fn flow_format() -> String {
    FLOW_FORMAT.into()
}

fn version() -> u32 {
    FORMAT_VERSION
}

impl GraphFile {
    pub fn from_gp(g: &GPGraph) -> Self {
        let m = g.multigraph();
        GraphFile {
            format: graph_format(),
            version: FORMAT_VERSION,
            n: Some(g.n),
            k: Some(g.k),
            vertices: Some(m.vertices),
            edges: m.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    /// The edge multiset, checked against G(n,k) when n and k are given.
    pub fn to_multigraph(&self) -> Result<Multigraph> {
        check_version(&self.format, GRAPH_FORMAT, self.version)?;
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let vertices = match (self.vertices, self.n) {
            (Some(v), _) => v,
            (None, Some(n)) => 2 * n,
            (None, None) => edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0),
        };
        let m = Multigraph::new(vertices, edges)?;
        if let (Some(n), Some(k)) = (self.n, self.k) {
            let g = GPGraph::build(n, k)?;
            if g.multigraph() != &m {
                bail!("edge list does not match the labelling of G({n},{k})");
            }
        }
        Ok(m)
    }
}

fn check_version(format: &str, want: &str, v: u32) -> Result<()> {
    if format != want {
        bail!("expected a {want} file, found format {format:?}");
    }
    if v != FORMAT_VERSION {
        bail!("{want} version {v} is not supported (this build reads version {FORMAT_VERSION})");
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub applicable: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowFile {
    #[serde(default = "flow_format")]
    pub format: String,
    #[serde(default = "version")]
    pub version: u32,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub method: Option<String>,
    /// Decimal strings, ascending powers of Q.
    pub coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub validation: Vec<CheckRecord>,
}

impl FlowFile {
    pub fn from_poly(p: &IntPoly) -> Self {
        FlowFile {
            format: flow_format(),
            version: FORMAT_VERSION,
            n: None,
            k: None,
            method: None,
            coefficients: p.coeffs().iter().map(|c| c.to_string()).collect(),
            provenance: Vec::new(),
            validation: Vec::new(),
        }
    }

    pub fn from_flow(f: &AssembledFlow, report: Option<&ValidationReport>) -> Self {
        let mut out = Self::from_poly(&f.poly);
        out.n = Some(f.graph.n);
        out.k = Some(f.graph.k);
        out.method = Some(f.method.name().into());
        out.provenance = f
            .provenance
            .iter()
            .map(|t| format!("k={} l={} lam={} deflated={} n={}", t.k, t.l, t.lam, t.deflated, t.n))
            .collect();
        if let Some(r) = report {
            out.validation = r
                .checks
                .iter()
                .map(|c| CheckRecord { name: c.name.clone(), applicable: c.applicable, passed: c.passed, detail: c.detail.clone() })
                .collect();
        }
        out
    }

    pub fn poly(&self) -> Result<IntPoly> {
        check_version(&self.format, FLOW_FORMAT, self.version)?;
        let c = self
            .coefficients
            .iter()
            .map(|s| s.trim().parse::<BigInt>().with_context(|| format!("bad coefficient {s:?}")))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::from_coeffs(c))
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Comma-separated integers, ascending.
pub fn parse_coeff_list(s: &str) -> Result<IntPoly> {
    let c = s
        .split(',')
        .map(|t| t.trim().parse::<BigInt>().with_context(|| format!("bad coefficient {t:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPoly::from_coeffs(c))
}

/// Splits off (Q−1)^a (Q−2)^b (Q−3)^c.
pub fn factor_small(p: &IntPoly) -> (Vec<(i64, usize)>, IntPoly) {
    let mut rest = p.clone();
    let mut out = Vec::new();
    if p.is_zero() {
        return (out, rest);
    }
    for r in 1..=3 {
        let lin = IntPoly::from_i64(&[-r, 1]);
        let mut m = 0;
        while let Some(q) = rest.div_exact(&lin) {
            rest = q;
            m += 1;
        }
        if m > 0 {
            out.push((r, m));
        }
    }
    (out, rest)
}

pub fn factored_text(p: &IntPoly) -> String {
    let (lin, rest) = factor_small(p);
    let mut s = String::new();
    for (r, m) in &lin {
        s.push_str(&format!("(Q-{r})"));
        if *m > 1 {
            s.push_str(&format!("^{m}"));
        }
    }
    let d = rest.degree().unwrap_or(0);
    if lin.is_empty() {
        s.push_str(&format!("P_{d}(Q)\n"));
    } else {
        s.push_str(&format!(" P_{d}(Q)\n"));
    }
    s.push_str(&format!("P_{d}(Q) = {rest}\n"));
    s
}

pub fn write_roots_csv<W: Write>(w: W, roots: &RootSet) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["re", "im", "radius"])?;
    let digits = roots.digits + 2;
    for r in &roots.roots {
        out.write_record([float_to_string(&r.re, digits), float_to_string(&r.im, digits), format!("{:.3e}", r.radius)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_curve_csv<W: Write>(w: W, curve: &CurveTrace) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["re", "im", "segment-id", "sector-pair"])?;
    for (id, line) in curve.polylines.iter().enumerate() {
        for p in line {
            out.write_record([
                format!("{:.12}", p.q.re),
                format!("{:.12}", p.q.im),
                id.to_string(),
                format!("{}|{}", p.pair.0, p.pair.1),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = GPGraph::build(8, 2).unwrap();
        let f = GraphFile::from_gp(&g);
        let back: GraphFile = serde_json::from_str(&to_json(&f).unwrap()).unwrap();
        assert_eq!(&back.to_multigraph().unwrap(), g.multigraph());
        let bare: GraphFile = serde_json::from_str(r#"{"edges": [[0,1],[1,2],[2,0]]}"#).unwrap();
        assert_eq!(bare.to_multigraph().unwrap().vertices, 3);
        let mut wrong = f.clone();
        wrong.edges.swap(0, 5);
        wrong.edges[0] = [0, 9];
        assert!(wrong.to_multigraph().is_err());
    }

    #[test]
    fn flow_round_trip() {
        let p = IntPoly::from_i64(&[2, -3, 1]);
        let f = FlowFile::from_poly(&p);
        let back: FlowFile = serde_json::from_str(&to_json(&f).unwrap()).unwrap();
        assert_eq!(back.poly().unwrap(), p);
        let mut v = back.clone();
        v.version = 7;
        assert!(v.poly().is_err());
    }

    #[test]
    fn factoring() {
        let p = &IntPoly::from_roots(&[1, 2, 3, 3]) * &IntPoly::from_i64(&[10, -5, 1]);
        let (lin, rest) = factor_small(&p);
        assert_eq!(lin, vec![(1, 1), (2, 1), (3, 2)]);
        assert_eq!(rest, IntPoly::from_i64(&[10, -5, 1]));
        assert!(factored_text(&p).starts_with("(Q-1)(Q-2)(Q-3)^2 P_2(Q)"));
    }
}
