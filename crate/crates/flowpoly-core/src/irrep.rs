//! Irreducible representations of S_l in Young's seminormal form.
//!
//! Basis vectors are indexed by standard Young tableaux; the adjacent
//! transposition (i, i+1) acts with diagonal entry 1/d, d the axial distance
//! from i to i+1, so all matrix entries are rational.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::YoungDiagram;
use crate::perm::Perm;

/// Dense square matrix with exact rational entries, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    pub n: usize,
    pub a: Vec<BigRational>,
}

impl RatMatrix {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![BigRational::zero(); n * n];
        for i in 0..n {
            a[i * n + i] = BigRational::one();
        }
        RatMatrix { n, a }
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.a[r * self.n + c]
    }

    pub fn mul(&self, o: &RatMatrix) -> RatMatrix {
        let n = self.n;
        let mut a = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let x = &self.a[i * n + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = &o.a[k * n + j];
                    if !y.is_zero() {
                        a[i * n + j] += x * y;
                    }
                }
            }
        }
        RatMatrix { n, a }
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).map(|i| self.a[i * self.n + i].clone()).sum()
    }
}

#[derive(Clone, Debug)]
pub struct Irrep {
    lam: YoungDiagram,
    l: usize,
    /// tableaux[t][e] = (row, col) of entry e.
    tableaux: Vec<Vec<(usize, usize)>>,
    gens: Vec<RatMatrix>,
}

impl Irrep {
    pub fn new(lam: &YoungDiagram) -> Self {
        let l = lam.size();
        let tableaux = standard_tableaux(lam);
        let index: HashMap<Vec<(usize, usize)>, usize> =
            tableaux.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let d = tableaux.len();
        let mut gens = Vec::new();
        for i in 0..l.saturating_sub(1) {
            let mut m = RatMatrix { n: d, a: vec![BigRational::zero(); d * d] };
            for (t, tab) in tableaux.iter().enumerate() {
                let (r1, c1) = tab[i];
                let (r2, c2) = tab[i + 1];
                if r1 == r2 {
                    m.a[t * d + t] = BigRational::one();
                } else if c1 == c2 {
                    m.a[t * d + t] = -BigRational::one();
                } else {
                    let axial = (c2 as i64 - r2 as i64) - (c1 as i64 - r1 as i64);
                    let r = BigRational::new(BigInt::one(), BigInt::from(axial));
                    let mut sw = tab.clone();
                    sw.swap(i, i + 1);
                    let u = index[&sw];
                    m.a[t * d + t] = r.clone();
                    // column t holds the image of v_t
                    m.a[u * d + t] = if r1 < r2 { BigRational::one() } else { BigRational::one() - &r * &r };
                }
            }
            gens.push(m);
        }
        Irrep { lam: lam.clone(), l, tableaux, gens }
    }

    pub fn diagram(&self) -> &YoungDiagram {
        &self.lam
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn degree(&self) -> usize {
        self.l
    }

    pub fn generator(&self, i: usize) -> &RatMatrix {
        &self.gens[i]
    }

    /// ρ(p), memoised along a reduced word.
    pub fn matrix(&self, p: &Perm, memo: &mut HashMap<Perm, RatMatrix>) -> RatMatrix {
        assert_eq!(p.len(), self.l);
        if let Some(m) = memo.get(p) {
            return m.clone();
        }
        let m = match p.first_descent() {
            None => RatMatrix::identity(self.dim()),
            Some(i) => {
                let q = p.compose(&Perm::adjacent(self.l, i));
                self.matrix(&q, memo).mul(&self.gens[i])
            }
        };
        memo.insert(*p, m.clone());
        m
    }
}

fn standard_tableaux(lam: &YoungDiagram) -> Vec<Vec<(usize, usize)>> {
    let rows = lam.parts().len();
    fn rec(
        e: usize,
        l: usize,
        lam: &YoungDiagram,
        len: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if e == l {
            out.push(cur.clone());
            return;
        }
        for r in 0..len.len() {
            if len[r] < lam.part(r) && (r == 0 || len[r - 1] > len[r]) {
                cur.push((r, len[r]));
                len[r] += 1;
                rec(e + 1, l, lam, len, cur, out);
                len[r] -= 1;
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, lam.size(), lam, &mut vec![0; rows], &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{factorial, partitions, young_dim};

    #[test]
    fn coxeter_relations_and_characters() {
        for l in 1..=5 {
            for lam in partitions(l) {
                let rep = Irrep::new(&lam);
                assert_eq!(BigInt::from(rep.dim()), young_dim(&lam));
                let id = RatMatrix::identity(rep.dim());
                for i in 0..l - 1 {
                    let s = rep.generator(i);
                    assert_eq!(s.mul(s), id, "{lam} s_{i}^2");
                    if i + 2 < l {
                        let t = rep.generator(i + 1);
                        assert_eq!(s.mul(t).mul(s), t.mul(s).mul(t), "{lam} braid {i}");
                    }
                    for j in i + 2..l - 1 {
                        let t = rep.generator(j);
                        assert_eq!(s.mul(t), t.mul(s));
                    }
                }
                // Σ χ(g)² = l! for an irreducible character.
                let mut memo = HashMap::new();
                let mut sq = BigRational::zero();
                for p in Perm::all(l) {
                    let chi = rep.matrix(&p, &mut memo).trace();
                    assert!(chi.is_integer());
                    sq += &chi * &chi;
                }
                assert_eq!(sq, BigRational::from_integer(factorial(l)));
            }
        }
    }

    #[test]
    fn homomorphism() {
        let lam = YoungDiagram::new(vec![3, 2, 1]).unwrap();
        let rep = Irrep::new(&lam);
        let mut memo = HashMap::new();
        let all = Perm::all(6);
        for (i, p) in all.iter().enumerate().step_by(37) {
            let q = &all[(i * 7 + 3) % all.len()];
            let lhs = rep.matrix(&p.compose(q), &mut memo);
            let rhs = rep.matrix(p, &mut memo).mul(&rep.matrix(q, &mut memo));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn one_row_is_trivial() {
        let rep = Irrep::new(&YoungDiagram::row(4));
        let col = Irrep::new(&YoungDiagram::new(vec![1, 1, 1, 1]).unwrap());
        let mut m1 = HashMap::new();
        let mut m2 = HashMap::new();
        for p in Perm::all(4) {
            assert_eq!(rep.matrix(&p, &mut m1).a[0], BigRational::one());
            assert_eq!(col.matrix(&p, &mut m2).a[0], BigRational::from_integer(p.sign().into()));
        }
    }
}
