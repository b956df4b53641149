//! Flow polynomials of G(nk,k) from block traces, and the validation battery.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{alpha, beta, gamma, partitions, YoungDiagram};
use crate::error::{Error, Result};
use crate::graph::GPGraph;
use crate::poly::{IntPoly, RatPoly};
use crate::roots::{sign_of, sturm_count, Bound, RealAlgebraic};
use crate::trace::{trace_polynomial, TraceCache, TraceKey};
use crate::transfer::{block_from_sector, deflate_trivial, Sector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Complete,
    Raw,
    BruteForce,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Complete => "complete-decomposition",
            Method::Raw => "raw-trace",
            Method::BruteForce => "brute-force",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AssembledFlow {
    pub graph: GPGraph,
    pub poly: IntPoly,
    pub provenance: Vec<TraceKey>,
    pub method: Method,
}

/// Largest k for which the complete decomposition is established.
pub const COMPLETE_MAX_K: usize = 7;

fn graph_for(k: usize, n: usize) -> Result<GPGraph> {
    if n < 2 {
        return Err(Error::Domain(format!("G(nk,k) needs n >= 2 layers, got n = {n}")));
    }
    GPGraph::build(n * k, k)
}

fn to_integer(p: &RatPoly, what: &str) -> Result<IntPoly> {
    p.to_int().ok_or_else(|| Error::Structure(format!("{what}: non-integer coefficient in assembled flow")))
}

/// Σ_{ℓ,λ} α_{ℓ,λ} tr(T̂_{ℓ,λ}ⁿ) with trivial eigenvalues kept in the blocks.
pub fn assemble_raw(k: usize, n: usize, cache: &dyn TraceCache) -> Result<AssembledFlow> {
    let graph = graph_for(k, n)?;
    let mut total = RatPoly::zero();
    let mut provenance = Vec::new();
    for l in 0..=k + 1 {
        let sector = Arc::new(Sector::build(k, l)?);
        for lam in partitions(l) {
            let block = block_from_sector(sector.clone(), &lam)?;
            let t = trace_polynomial(&block, n, cache)?;
            total = &total + &(&alpha(l, &lam)? * &t.poly);
            provenance.push(t.key);
        }
    }
    Ok(AssembledFlow { graph, poly: to_integer(&total, "raw")?, provenance, method: Method::Raw })
}

/// Deflated blocks for ℓ < k, the λ = (k) block weighted by β_k, and
/// γ_{k+1}(−1)^{nk} for the trivial eigenvalue.
pub fn assemble_complete(k: usize, n: usize, cache: &dyn TraceCache) -> Result<AssembledFlow> {
    if k > COMPLETE_MAX_K {
        return Err(Error::Domain(format!("complete decomposition is only established for k <= {COMPLETE_MAX_K}; use the raw method")));
    }
    let graph = graph_for(k, n)?;
    let mut total = RatPoly::zero();
    let mut provenance = Vec::new();
    for l in 0..=k {
        let sector = Arc::new(Sector::build(k, l)?);
        let lams = if l == k { vec![YoungDiagram::row(k)] } else { partitions(l) };
        for lam in lams {
            let mut block = block_from_sector(sector.clone(), &lam)?;
            if l > 0 {
                block = deflate_trivial(&block)?;
            }
            let t = trace_polynomial(&block, n, cache)?;
            let amp = if l == k { beta(k) } else { alpha(l, &lam)? };
            total = &total + &(&amp * &t.poly);
            provenance.push(t.key);
        }
    }
    let sign = if (n * k).is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
    total = &total + &gamma(k).scale(&sign);
    Ok(AssembledFlow { graph, poly: to_integer(&total, "complete")?, provenance, method: Method::Complete })
}

/// Complete decomposition up to [`COMPLETE_MAX_K`], raw beyond (with a warning).
pub fn assemble(k: usize, n: usize, cache: &dyn TraceCache) -> Result<(AssembledFlow, Option<String>)> {
    if k > COMPLETE_MAX_K {
        let w = format!("k = {k} is outside the proven range of the complete decomposition; using raw traces");
        return Ok((assemble_raw(k, n, cache)?, Some(w)));
    }
    Ok((assemble_complete(k, n, cache)?, None))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// False when the hypotheses of the check do not hold for this graph.
    pub applicable: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.applicable)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.applicable && !c.passed).collect()
    }

    fn push(&mut self, name: &str, applicable: bool, passed: bool, detail: String) {
        self.checks.push(Check { name: name.into(), passed, applicable, detail });
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn eval(p: &IntPoly, q: &BigRational) -> BigRational {
    p.eval_rat(q)
}

/// Sign (−1)^e as i32.
fn parity_sign(e: usize) -> i32 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Multiplicity of the root x (an integer).
fn multiplicity(p: &IntPoly, x: i64) -> usize {
    let lin = IntPoly::from_i64(&[-x, 1]);
    let mut m = 0;
    let mut cur = p.clone();
    while !cur.is_zero() {
        match cur.div_exact(&lin) {
            Some(q) => {
                cur = q;
                m += 1;
            }
            None => break,
        }
    }
    m
}

/// Runs the leading-coefficient, Wakelin, Jackson, 3-flow and positivity checks.
pub fn validate(flow: &AssembledFlow) -> ValidationReport {
    let g = &flow.graph;
    let p = &flow.poly;
    let mut rep = ValidationReport::default();
    let v = g.vertex_count();
    let e = g.edge_count();
    let layers = g.n / g.k;
    let simple = !g.has_parallel_edges();
    let nn = g.n as i64;

    let deg_ok = p.degree() == Some(e - v + 1) && p.leading() == Some(&BigInt::one());
    rep.push("degree", true, deg_ok, format!("degree {:?}, expected {}", p.degree(), e - v + 1));

    // Q^{N+1}(1 − 3N/Q + N(9N−7)/2Q² − N(3N−2)(3N−5)/2Q³ + …)
    let d = e - v + 1;
    let lead = [1, -3 * nn, nn * (9 * nn - 7) / 2, -nn * (3 * nn - 2) * (3 * nn - 5) / 2];
    // Triangles shift the third coefficient and 4-cycles the fourth.
    let girth = g.multigraph().girth().unwrap_or(usize::MAX);
    let terms = if girth >= 5 { 4 } else if girth == 4 { 3 } else { 2 };
    let got: Vec<BigInt> = (0..terms).map(|i| if d >= i { p.coeff(d - i) } else { BigInt::zero() }).collect();
    let expect: Vec<BigInt> = lead[..terms].iter().map(|&x| BigInt::from(x)).collect();
    rep.push(
        "leading coefficients",
        simple,
        got == expect,
        format!(
            "girth {girth}, first {terms}: got {:?}, expected {:?}",
            got.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            &lead[..terms]
        ),
    );

    // Wakelin (bridgeless, one block).
    let m1 = multiplicity(p, 1);
    let below = sturm_count(p, &Bound::NegInf, &Bound::At(rat(1, 1))) - usize::from(m1 > 0);
    let s_below = sign_of(&eval(p, &rat(0, 1)));
    let above = sturm_count(p, &Bound::At(rat(1, 1)), &Bound::At(rat(32, 27)));
    let s_above = sign_of(&eval(p, &rat(32, 27)));
    let wak = m1 == 1
        && below == 0
        && s_below == parity_sign(e - v + 1)
        && above == 0
        && s_above == parity_sign(e - v);
    rep.push(
        "wakelin",
        true,
        wak,
        format!("mult(1) = {m1}, roots below 1: {below}, sign at 0: {s_below}, roots in (1,32/27]: {above}, sign at 32/27: {s_above}"),
    );

    // Jackson (3-connected cubic: here simple graphs with more than two layers).
    let m2 = multiplicity(p, 2);
    let mid = sturm_count(p, &Bound::At(rat(1, 1)), &Bound::At(rat(2, 1))) - usize::from(m2 > 0);
    let s_mid = sign_of(&eval(p, &rat(3, 2)));
    let delta = RealAlgebraic::jackson_delta();
    let beyond = delta.sturm_count_from(p, &Bound::At(rat(2, 1)));
    let at_delta = delta.sign_of_poly(&p.to_rat());
    let beyond_open = beyond - usize::from(at_delta == 0);
    let s_beyond = sign_of(&eval(p, &rat(201, 100)));
    let jack = m2 == 1 && mid == 0 && s_mid == parity_sign(e - v) && beyond_open == 0 && s_beyond == parity_sign(e - v + 1);
    rep.push(
        "jackson",
        simple && layers > 2,
        jack,
        format!("mult(2) = {m2}, roots in (1,2): {mid}, roots in (2,delta): {beyond_open}"),
    );

    let phi3 = eval(p, &rat(3, 1));
    let three_ok = phi3.is_zero() != g.is_bipartite();
    rep.push("3-flow", true, three_ok, format!("bipartite {}, Phi(3) = {}", g.is_bipartite(), phi3));

    let pos: Vec<BigRational> = [4, 5, 6].iter().map(|&q| eval(p, &rat(q, 1))).collect();
    rep.push(
        "positivity 4,5,6",
        true,
        pos.iter().all(|x| x.is_positive()),
        format!("{:?}", pos.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    );

    let mut ladder_ok = true;
    let mut seen_positive = false;
    for q in 2..=12 {
        let x = eval(p, &rat(q, 1));
        if seen_positive && !x.is_positive() {
            ladder_ok = false;
        }
        seen_positive |= x.is_positive();
    }
    rep.push("integer positivity ladder", true, ladder_ok, "Q = 2..12".into());

    let alternating = p
        .coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| !c.is_zero() && (c.is_positive() == (d - i).is_multiple_of(2)));
    rep.push("alternating signs", true, alternating, String::new());
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{flow_poly_bruteforce, flow_poly_closed_gn1, DEFAULT_EDGE_BUDGET};
    use crate::trace::MemoryCache;

    #[test]
    fn k1_closed_form() {
        let cache = MemoryCache::default();
        for n in 2..=8 {
            let c = assemble_complete(1, n, &cache).unwrap();
            let r = assemble_raw(1, n, &cache).unwrap();
            if n >= 3 {
                assert_eq!(c.poly, flow_poly_closed_gn1(n).unwrap(), "n={n}");
            }
            assert_eq!(c.poly, r.poly);
        }
    }

    #[test]
    fn small_oracles() {
        let cache = MemoryCache::default();
        for (k, n) in [(2, 2), (2, 3), (3, 2)] {
            let c = assemble_complete(k, n, &cache).unwrap();
            let bf = flow_poly_bruteforce(c.graph.multigraph(), DEFAULT_EDGE_BUDGET).unwrap();
            assert_eq!(c.poly, bf, "G({},{})", n * k, k);
            assert_eq!(assemble_raw(k, n, &cache).unwrap().poly, bf);
        }
    }

    #[test]
    fn validation_on_known_graphs() {
        let cache = MemoryCache::default();
        let f = assemble_complete(2, 3, &cache).unwrap();
        let r = validate(&f);
        assert!(r.passed(), "{:?}", r.failures());
        assert!(assemble_complete(8, 2, &cache).is_err());
        assert!(assemble_complete(2, 1, &cache).is_err());
    }
}
