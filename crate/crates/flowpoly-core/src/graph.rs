//! Generalised Petersen graphs and the subset-expansion flow polynomial.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

pub const DEFAULT_EDGE_BUDGET: usize = 26;

/// Multigraph on vertices 0..vertices; loops and parallel edges allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::Domain(format!("edge ({u},{v}) out of range for {vertices} vertices")));
        }
        Ok(Multigraph { vertices, edges })
    }

    pub fn cycle(n: usize) -> Self {
        Multigraph { vertices: n, edges: (0..n).map(|i| (i, (i + 1) % n)).collect() }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Two-colouring by breadth-first search; loops make a graph non-bipartite.
    pub fn is_bipartite(&self) -> bool {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut colour = vec![u8::MAX; self.vertices];
        for s in 0..self.vertices {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if colour[v] == u8::MAX {
                        colour[v] = 1 - colour[u];
                        queue.push_back(v);
                    } else if colour[v] == colour[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Length of a shortest cycle (loops count 1, parallel pairs 2); None if acyclic.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut adj = vec![Vec::new(); self.vertices];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if u == v {
                return Some(1);
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for s in 0..self.vertices {
            let mut dist = vec![usize::MAX; self.vertices];
            let mut via = vec![usize::MAX; self.vertices];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(w, id) in &adj[u] {
                    if id == via[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = id;
                        queue.push_back(w);
                    } else {
                        let c = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(c, |b| b.min(c)));
                    }
                }
            }
        }
        best
    }

    /// Number of connected components of the spanning subgraph on `mask`.
    fn components(&self, mask: u64, parent: &mut [usize]) -> usize {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = self.vertices;
        let mut m = mask;
        while m != 0 {
            let e = m.trailing_zeros() as usize;
            m &= m - 1;
            let (u, v) = self.edges[e];
            let (a, b) = (find(parent, u), find(parent, v));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps
    }
}

/// G(n,k): outer cycle i_1..i_n, spokes i_p j_p, inner edges j_p j_{p+k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPGraph {
    pub n: usize,
    pub k: usize,
    graph: Multigraph,
}

impl GPGraph {
    /// Vertex i_p is `p`, vertex j_p is `n + p` (0-based p).
    pub fn build(n: usize, k: usize) -> Result<Self> {
        if k < 1 || n <= k {
            return Err(Error::Domain(format!("G({n},{k}) needs n > k >= 1")));
        }
        let mut edges = Vec::with_capacity(3 * n);
        for p in 0..n {
            edges.push((p, n + p));
            edges.push((p, (p + 1) % n));
            edges.push((n + p, n + (p + k) % n));
        }
        Ok(GPGraph { n, k, graph: Multigraph { vertices: 2 * n, edges } })
    }

    pub fn multigraph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edges.len()
    }

    /// k odd and n even.
    pub fn is_bipartite(&self) -> bool {
        self.k % 2 == 1 && self.n.is_multiple_of(2)
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.graph.edges.iter().any(|&(u, v)| !seen.insert((u.min(v), u.max(v))))
    }
}

/// Φ_G(Q) = Σ_{E'⊆E} (−1)^{|E|−|E'|} Q^{|E'|−|V|+k(E')}.
pub fn flow_poly_bruteforce(g: &Multigraph, budget: usize) -> Result<IntPoly> {
    let m = g.edges.len();
    if m > budget || m > 40 {
        return Err(Error::Budget { edges: m, budget });
    }
    let total: u64 = 1 << m;
    let chunk: u64 = 1 << 16;
    let chunks = total.div_ceil(chunk);
    let width = m + 1;
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0i64; width];
            let mut parent = vec![0usize; g.vertices];
            for mask in c * chunk..((c + 1) * chunk).min(total) {
                let size = mask.count_ones() as usize;
                let comps = g.components(mask, &mut parent);
                let cyc = size + comps - g.vertices;
                if (m - size).is_multiple_of(2) {
                    acc[cyc] += 1;
                } else {
                    acc[cyc] -= 1;
                }
            }
            acc
        })
        .reduce(
            || vec![0i64; width],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(IntPoly::from_coeffs(counts.into_iter().map(BigInt::from).collect()))
}

/// (Q²−3Q+1)(−1)^n + (Q−1)(Q−3)^n + (Q−2)^n, the flow polynomial of G(n,1).
pub fn flow_poly_closed_gn1(n: usize) -> Result<IntPoly> {
    if n < 3 {
        return Err(Error::Domain(format!("closed form needs n >= 3, got {n}")));
    }
    let e = n as u32;
    let a = IntPoly::from_i64(&[1, -3, 1]);
    let a = if n.is_multiple_of(2) { a } else { -&a };
    let b = &IntPoly::from_i64(&[-1, 1]) * &IntPoly::from_i64(&[-3, 1]).pow(e);
    let c = IntPoly::from_i64(&[-2, 1]).pow(e);
    Ok(&(&a + &b) + &c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_shapes() {
        let p = GPGraph::build(5, 2).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
        assert!(!p.has_parallel_edges());
        assert!(p.multigraph().degrees().iter().all(|&d| d == 3));
        let g = GPGraph::build(4, 2).unwrap();
        let mut e: Vec<_> = g.multigraph().edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        e.sort();
        let dup = e.windows(2).filter(|w| w[0] == w[1]).count();
        assert_eq!(dup, 2);
        assert!(GPGraph::build(3, 3).is_err());
        for n in 3..12 {
            for k in 1..n {
                let g = GPGraph::build(n, k).unwrap();
                assert_eq!(g.has_parallel_edges(), n == 2 * k, "G({n},{k})");
            }
        }
    }

    #[test]
    fn girth_values() {
        assert_eq!(GPGraph::build(5, 2).unwrap().multigraph().girth(), Some(5));
        assert_eq!(GPGraph::build(4, 2).unwrap().multigraph().girth(), Some(2));
        assert_eq!(GPGraph::build(6, 2).unwrap().multigraph().girth(), Some(3));
        assert_eq!(GPGraph::build(8, 1).unwrap().multigraph().girth(), Some(4));
        assert_eq!(Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap().girth(), None);
    }

    #[test]
    fn bipartite_criterion() {
        assert!(GPGraph::build(14, 7).unwrap().is_bipartite());
        assert!(!GPGraph::build(5, 2).unwrap().is_bipartite());
        assert!(!GPGraph::build(12, 4).unwrap().is_bipartite());
        for n in 3..16 {
            for k in 1..n {
                let g = GPGraph::build(n, k).unwrap();
                assert_eq!(g.is_bipartite(), g.multigraph().is_bipartite(), "G({n},{k})");
            }
        }
    }

    #[test]
    fn brute_force_small() {
        let tri = flow_poly_bruteforce(&Multigraph::cycle(3), DEFAULT_EDGE_BUDGET).unwrap();
        assert_eq!(tri, IntPoly::from_i64(&[-1, 1]));
        let bridge = Multigraph::new(2, vec![(0, 1)]).unwrap();
        assert!(flow_poly_bruteforce(&bridge, DEFAULT_EDGE_BUDGET).unwrap().is_zero());
        let petersen = GPGraph::build(5, 2).unwrap();
        let phi = flow_poly_bruteforce(petersen.multigraph(), DEFAULT_EDGE_BUDGET).unwrap();
        let expect = &IntPoly::from_roots(&[1, 2, 3, 4]) * &IntPoly::from_i64(&[10, -5, 1]);
        assert_eq!(phi, expect);
        assert_eq!(phi.eval(&BigInt::from(5)), BigInt::from(240));
        let big = GPGraph::build(9, 2).unwrap();
        assert!(matches!(
            flow_poly_bruteforce(big.multigraph(), DEFAULT_EDGE_BUDGET),
            Err(Error::Budget { edges: 27, .. })
        ));
    }

    #[test]
    fn closed_form_gn1() {
        for n in 3..=5 {
            let g = GPGraph::build(n, 1).unwrap();
            let bf = flow_poly_bruteforce(g.multigraph(), DEFAULT_EDGE_BUDGET).unwrap();
            assert_eq!(flow_poly_closed_gn1(n).unwrap(), bf);
        }
        for n in 3..20 {
            assert_eq!(flow_poly_closed_gn1(n).unwrap().eval(&BigInt::from(2)), BigInt::from(0));
        }
    }
}
