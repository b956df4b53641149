//! Counting numbers for marked set partitions, Young diagrams and the
//! eigenvalue amplitudes of the transfer-matrix decomposition.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::RatPoly;

const TABLE: usize = 64;

fn bell_table() -> &'static Vec<BigInt> {
    static T: OnceLock<Vec<BigInt>> = OnceLock::new();
    T.get_or_init(|| bell_upto(TABLE))
}

fn bell_upto(n: usize) -> Vec<BigInt> {
    // Bell triangle: each row starts with the last entry of the previous one.
    let mut out = vec![BigInt::one()];
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        out.push(next[0].clone());
        row = next;
    }
    out
}

pub fn bell(n: usize) -> BigInt {
    if n <= TABLE {
        bell_table()[n].clone()
    } else {
        bell_upto(n).pop().unwrap()
    }
}

fn stirling_table() -> &'static Vec<Vec<BigInt>> {
    static T: OnceLock<Vec<Vec<BigInt>>> = OnceLock::new();
    T.get_or_init(|| stirling_upto(TABLE))
}

fn stirling_upto(n: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); n + 1]; n + 1];
    t[0][0] = BigInt::one();
    for i in 1..=n {
        for j in 1..=i {
            t[i][j] = &t[i - 1][j - 1] + BigInt::from(j) * &t[i - 1][j];
        }
    }
    t
}

/// Stirling number of the second kind {n brace l}.
pub fn stirling2(n: usize, l: usize) -> BigInt {
    if l > n {
        return BigInt::zero();
    }
    if n <= TABLE {
        stirling_table()[n][l].clone()
    } else {
        stirling_upto(n)[n][l].clone()
    }
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// S_n, the number of set partitions of n points without singletons.
pub fn no_singleton_count(n: usize) -> BigInt {
    let mut s = BigInt::zero();
    for q in 0..=n {
        let t = binomial(n, q) * bell(q);
        if (n - q).is_multiple_of(2) {
            s += t;
        } else {
            s -= t;
        }
    }
    s
}

/// |A_k^{(l)}|: partitions of k points with l marked, distinguishable blocks.
pub fn dim_marked(k: usize, l: usize) -> BigInt {
    let s: BigInt = (0..=k).map(|p| binomial(k, p) * stirling2(p, l) * bell(k - p)).sum();
    factorial(l) * s
}

/// |Ã_k^{(l)}|: as [`dim_marked`] but with no unmarked singleton.
pub fn dim_marked_nosingleton(k: usize, l: usize) -> BigInt {
    let s: BigInt =
        (0..=k).map(|p| binomial(k, p) * stirling2(p, l) * no_singleton_count(k - p)).sum();
    factorial(l) * s
}

/// B_k^{(0)} = Σ_r 2^r {k brace r}.
pub fn bell_marked_total(k: usize) -> BigInt {
    (0..=k).map(|r| (BigInt::one() << r) * stirling2(k, r)).sum()
}

/// A Young diagram, rows weakly decreasing.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct YoungDiagram {
    parts: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("{parts:?} is not a Young diagram")));
        }
        Ok(YoungDiagram { parts })
    }

    pub fn empty() -> Self {
        YoungDiagram { parts: Vec::new() }
    }

    /// The one-row diagram (l).
    pub fn row(l: usize) -> Self {
        if l == 0 {
            Self::empty()
        } else {
            YoungDiagram { parts: vec![l] }
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Row i (0-based), zero past the last row.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let w = self.part(0);
        YoungDiagram {
            parts: (0..w).map(|j| self.parts.iter().filter(|&&p| p > j).count()).collect(),
        }
    }

    pub fn is_row(&self) -> bool {
        self.parts.len() <= 1
    }
}

impl core::fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl core::str::FromStr for YoungDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Ok(Self::empty());
        }
        let parts = t
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        YoungDiagram::new(parts)
    }
}

/// All diagrams with l cells, reverse-lexicographic: (l), (l-1,1), ...
pub fn partitions(l: usize) -> Vec<YoungDiagram> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if rem == 0 {
            out.push(YoungDiagram { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(l, l, &mut Vec::new(), &mut out);
    out
}

/// dim λ by the hook length formula.
pub fn young_dim(lam: &YoungDiagram) -> BigInt {
    let conj = lam.conjugate();
    let mut hooks = BigInt::one();
    for (i, &r) in lam.parts.iter().enumerate() {
        for j in 0..r {
            hooks *= BigInt::from(r - j + conj.part(j) - i - 1);
        }
    }
    factorial(lam.size()) / hooks
}

/// Y_l, the number of standard Young tableaux with l cells.
pub fn young_count(l: usize) -> BigInt {
    (0..=l / 2)
        .map(|p| factorial(2 * p) / (factorial(p) << p) * binomial(l, 2 * p))
        .sum()
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn linear(shift: i64) -> RatPoly {
    // Q + shift
    RatPoly::from_ints(&[shift, 1])
}

/// α_{l,λ}(Q) = (dim λ / l!) Π_{i<l} (Q − i − λ_{l−i}).
pub fn alpha(l: usize, lam: &YoungDiagram) -> Result<RatPoly> {
    if lam.size() != l {
        return Err(Error::Domain(format!("diagram {lam} does not have {l} cells")));
    }
    let mut p = RatPoly::constant(BigRational::new(young_dim(lam), factorial(l)));
    for i in 0..l {
        // λ indexed from 1: λ_{l−i} is row l−i−1 here.
        let shift = i + lam.part(l - i - 1);
        p = &p * &linear(-(shift as i64));
    }
    Ok(p)
}

/// β_l(Q) = Σ_i (−1)^{l−i} C(l,i) Q^{(i)} with Q^{(i)} the falling factorial.
pub fn beta(l: usize) -> RatPoly {
    let mut falling = RatPoly::one();
    let mut acc = RatPoly::zero();
    for i in 0..=l {
        let c = binomial(l, i);
        let c = if (l - i).is_multiple_of(2) { c } else { -c };
        acc = &acc + &falling.scale(&rat(c));
        falling = &falling * &linear(-(i as i64));
    }
    acc
}

/// Ñ_{k,1}(l): multiplicity of the trivial eigenvalue per unit of dim λ.
pub fn n_trivial(k: usize, l: usize) -> BigInt {
    if l == 0 || l > k + 1 {
        return BigInt::zero();
    }
    dim_marked_nosingleton(k, l - 1) / factorial(l - 1)
}

/// Orbits of the sector-l basis under relabelling of marks.
pub fn sector_orbits(k: usize, l: usize) -> BigInt {
    dim_marked_nosingleton(k + 1, l) / factorial(l)
}

/// Ñ_{k,0}(l): number of distinct non-trivial eigenvalues in sector l,
/// summed over λ ⊢ l, except l = k where the common k eigenvalues are
/// counted once.
pub fn n_nontrivial(k: usize, l: usize) -> BigInt {
    if l == k {
        return BigInt::from(k);
    }
    if l > k {
        return BigInt::zero();
    }
    (sector_orbits(k, l) - n_trivial(k, l)) * young_count(l)
}

/// Closed form of [`n_nontrivial`] for l < k, obtained by classifying the
/// position of point 0 (marked block, unmarked block).
pub fn n_nontrivial_closed(k: usize, l: usize) -> BigInt {
    assert!(l < k);
    if l == 0 {
        return no_singleton_count(k + 1);
    }
    let s: BigInt = (1..=k)
        .map(|p| {
            let tail = BigInt::from(l) * no_singleton_count(k - p) + no_singleton_count(k + 1 - p);
            binomial(k, p) * stirling2(p, l) * tail
        })
        .sum();
    young_count(l) * s
}

/// D̃_k = 1 + Σ_l Ñ_{k,0}(l), the number of distinct eigenvalues.
pub fn distinct_eigenvalue_count(k: usize) -> BigInt {
    BigInt::one() + (0..=k + 1).map(|l| n_nontrivial(k, l)).sum::<BigInt>()
}

/// γ_{k+1} = β_{k+1} + Σ_{l=1}^{k} Ñ_{k,1}(l) β_l.
pub fn gamma(k: usize) -> RatPoly {
    let mut g = beta(k + 1);
    for l in 1..=k {
        g = &g + &beta(l).scale(&rat(n_trivial(k, l)));
    }
    g
}

/// True when `a` divides `b`.
pub fn divides(a: &BigInt, b: &BigInt) -> bool {
    b.is_multiple_of(a)
}
