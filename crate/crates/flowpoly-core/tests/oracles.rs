use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use flowpoly_core::assemble::{assemble_complete, assemble_raw, validate, AssembledFlow, Method};
use flowpoly_core::graph::{flow_poly_bruteforce, flow_poly_closed_gn1, GPGraph, Multigraph, DEFAULT_EDGE_BUDGET};
use flowpoly_core::roots::{sign_of, Bound, RealAlgebraic};
use flowpoly_core::trace::MemoryCache;
use flowpoly_core::IntPoly;

const ORACLE: [(usize, usize); 10] = [(1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (1, 8), (2, 2), (2, 3), (2, 4), (3, 2)];

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn brute(g: &GPGraph) -> AssembledFlow {
    let poly = flow_poly_bruteforce(g.multigraph(), DEFAULT_EDGE_BUDGET).unwrap();
    AssembledFlow { graph: g.clone(), poly, provenance: vec![], method: Method::BruteForce }
}

#[test]
fn transfer_pipeline_matches_subset_expansion() {
    let cache = MemoryCache::default();
    for (k, n) in ORACLE {
        let c = assemble_complete(k, n, &cache).unwrap();
        let r = assemble_raw(k, n, &cache).unwrap();
        let b = brute(&c.graph);
        assert_eq!(c.poly, b.poly, "complete, G({},{k})", n * k);
        assert_eq!(r.poly, b.poly, "raw, G({},{k})", n * k);
        assert_eq!(c.poly.degree(), Some(n * k + 1));
        let rep = validate(&c);
        assert!(rep.passed(), "G({},{k}): {:?}", n * k, rep.failures());
    }
}

#[test]
fn closed_forms() {
    let cache = MemoryCache::default();
    for n in 3..=12 {
        assert_eq!(assemble_complete(1, n, &cache).unwrap().poly, flow_poly_closed_gn1(n).unwrap(), "n={n}");
        assert!(flow_poly_closed_gn1(n).unwrap().eval_rat(&q(2, 1)).is_zero());
    }
    let p = brute(&GPGraph::build(5, 2).unwrap()).poly;
    assert_eq!(p, &IntPoly::from_roots(&[1, 2, 3, 4]) * &IntPoly::from_i64(&[10, -5, 1]));
    assert_eq!(p.eval_rat(&q(5, 1)), q(240, 1));
}

#[test]
fn complete_equals_raw_beyond_the_oracle() {
    let cache = MemoryCache::default();
    for n in 2..=10 {
        assert_eq!(assemble_complete(2, n, &cache).unwrap().poly, assemble_raw(2, n, &cache).unwrap().poly, "k=2 n={n}");
    }
    for (k, n) in [(3, 3), (3, 4), (4, 2)] {
        assert_eq!(assemble_complete(k, n, &cache).unwrap().poly, assemble_raw(k, n, &cache).unwrap().poly, "k={k} n={n}");
    }
}

#[test]
fn small_real_zeros_and_positivity() {
    let delta = RealAlgebraic::jackson_delta();
    assert!((delta.approx() - 2.5466023485).abs() < 1e-9);
    let cache = MemoryCache::default();
    // n > 2 layers, so the graphs are simple and 3-connected.
    for (k, n) in [(1, 5), (2, 3), (2, 4), (3, 3), (4, 3), (5, 3)] {
        let f = assemble_complete(k, n, &cache).unwrap();
        let p = &f.poly;
        let name = format!("G({},{k})", n * k);
        assert!(p.eval_rat(&q(1, 1)).is_zero() && p.eval_rat(&q(2, 1)).is_zero());
        // The count includes δ itself, which is a zero when the graph contains a cube.
        let at_delta = usize::from(delta.sign_of_poly(&p.to_rat()) == 0);
        assert_eq!(delta.sturm_count_from(p, &Bound::NegInf) - at_delta, 2, "{name}: extra zeros below δ");
        let e = f.graph.edge_count() - f.graph.vertex_count();
        let expect_mid = if e.is_multiple_of(2) { 1 } else { -1 };
        assert_eq!(sign_of(&p.eval_rat(&q(3, 2))), expect_mid, "{name}");
        assert_eq!(sign_of(&p.eval_rat(&q(5, 2))), -expect_mid, "{name}");
        assert_eq!(sign_of(&p.eval_rat(&q(-7, 3))), -expect_mid, "{name}");
        let alternating = p.coeffs().iter().rev().enumerate().all(|(i, c)| !c.is_zero() && c.is_positive() == (i % 2 == 0));
        assert!(alternating, "{name}");
    }
}

#[test]
fn three_flows_follow_bipartiteness() {
    let cache = MemoryCache::default();
    let g12 = assemble_complete(4, 3, &cache).unwrap();
    assert!(!g12.graph.is_bipartite());
    assert!(g12.poly.eval_rat(&q(3, 1)).is_zero());
    let g63 = assemble_complete(3, 2, &cache).unwrap();
    assert!(g63.graph.is_bipartite());
    assert!(g63.poly.eval_rat(&q(3, 1)).is_positive());
    assert!(GPGraph::build(14, 7).unwrap().is_bipartite());
    assert!(!GPGraph::build(5, 2).unwrap().is_bipartite());
    for (n, k) in [(14, 7), (5, 2), (12, 4), (8, 3), (9, 3), (10, 1)] {
        let g = GPGraph::build(n, k).unwrap();
        assert_eq!(g.is_bipartite(), g.multigraph().is_bipartite(), "G({n},{k})");
    }
}

#[test]
fn graph_model() {
    let p = GPGraph::build(5, 2).unwrap();
    assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
    assert!(!p.has_parallel_edges());
    let d = GPGraph::build(4, 2).unwrap();
    assert!(d.has_parallel_edges());
    assert!(d.multigraph().degrees().iter().all(|&x| x == 3));
    assert!(GPGraph::build(3, 3).is_err());
    assert_eq!(flow_poly_bruteforce(&Multigraph::cycle(3), 26).unwrap(), IntPoly::from_i64(&[-1, 1]));
    assert!(flow_poly_bruteforce(&Multigraph::new(2, vec![(0, 1)]).unwrap(), 26).unwrap().is_zero());
    let big = GPGraph::build(10, 2).unwrap();
    assert!(flow_poly_bruteforce(big.multigraph(), DEFAULT_EDGE_BUDGET).is_err());
    assert_eq!(flow_poly_bruteforce(&Multigraph::cycle(4), 26).unwrap().coeffs()[0], BigInt::from(-1));
}
