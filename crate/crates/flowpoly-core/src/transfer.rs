//! Transfer-matrix blocks T̃_{k+1} restricted to ℓ links and an irrep λ of S_ℓ.
//!
//! The operator is built once per (k, ℓ) at orbit level: for every orbit
//! representative r, T̃ r = Σ c_{r',τ}(Q) τ·r' where τ relabels the marks.
//! A λ block then has entries Σ_τ c_{r',τ}(q) ρ_λ(τ⁻¹).

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::combinatorics::{n_trivial, sector_orbits, young_dim, YoungDiagram};
use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, PrimeField, RationalField};
use crate::irrep::Irrep;
use crate::partition::{enumerate_orbits, Detach, State};
use crate::perm::Perm;
use crate::poly::RatPoly;

/// Dense ascending coefficients; the weights stay small enough for i128.
pub type SmallPoly = Vec<i128>;

fn trim(p: &mut SmallPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// dst += sign · Q^shift · src
fn add_shifted(dst: &mut SmallPoly, src: &[i128], sign: i128, shift: usize) {
    if dst.len() < src.len() + shift {
        dst.resize(src.len() + shift, 0);
    }
    for (i, &c) in src.iter().enumerate() {
        dst[i + shift] = dst[i + shift].checked_add(sign * c).expect("weight overflow");
    }
}

pub fn small_to_rat(p: &[i128]) -> RatPoly {
    RatPoly::from_coeffs(p.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
}

/// Elementary factor of the transfer matrix at v = −Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// V_i = −Q·I + D_i
    Vertical(usize),
    /// H_{0i} = I − Q·J_{0i}
    Horizontal(usize),
    /// Drop states with an unmarked singleton among `from..=k`; those are
    /// annihilated by a later vertical factor before anything can reach them.
    Prune(usize),
}

/// Factors in application order: V_1 ⋯ V_k, then (V_0, H_{0i}) for i = k..1.
pub fn factor_sequence(k: usize) -> Vec<Factor> {
    let mut f: Vec<Factor> = (1..=k).map(Factor::Vertical).collect();
    for i in (1..=k).rev() {
        f.push(Factor::Vertical(0));
        f.push(Factor::Horizontal(i));
        f.push(Factor::Prune(i));
    }
    f
}

type StateSum = HashMap<State, SmallPoly>;

fn push(out: &mut StateSum, s: State, src: &[i128], sign: i128, shift: usize) {
    let e = out.entry(s).or_default();
    add_shifted(e, src, sign, shift);
}

fn apply_factor(f: Factor, input: StateSum) -> StateSum {
    let mut out = StateSum::with_capacity(input.len() * 2);
    match f {
        Factor::Vertical(i) => {
            for (s, c) in input {
                match s.detach(i) {
                    // −Q + Q: the state is annihilated.
                    Detach::Scaled => {}
                    Detach::Split(t) => {
                        push(&mut out, s, &c, -1, 1);
                        push(&mut out, t, &c, 1, 0);
                    }
                    Detach::LinkLost => push(&mut out, s, &c, -1, 1),
                }
            }
        }
        Factor::Horizontal(i) => {
            for (s, c) in input {
                push(&mut out, s, &c, 1, 0);
                if let Some(t) = s.join_preserving(0, i) {
                    if t != s {
                        push(&mut out, t, &c, -1, 1);
                    } else {
                        // J acts as the identity when 0 and i share a block.
                        push(&mut out, s, &c, -1, 1);
                    }
                }
            }
        }
        Factor::Prune(from) => {
            for (s, c) in input {
                if !(from..s.points()).any(|j| s.is_unmarked_singleton(j)) {
                    out.insert(s, c);
                }
            }
        }
    }
    out.retain(|_, c| {
        trim(c);
        !c.is_empty()
    });
    out
}

/// T̃ applied to one state; only the singleton-free part survives.
pub fn apply_transfer(k: usize, s: &State) -> StateSum {
    let mut cur = StateSum::new();
    cur.insert(*s, vec![1]);
    for f in factor_sequence(k) {
        cur = apply_factor(f, cur);
    }
    cur.retain(|t, _| !t.has_unmarked_singleton());
    cur
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupEntry {
    pub row: u32,
    pub perm: Perm,
    pub weight: SmallPoly,
}

/// Orbit-level transfer operator of one link sector.
#[derive(Clone, Debug)]
pub struct Sector {
    pub k: usize,
    pub l: usize,
    orbits: Vec<State>,
    index: HashMap<State, u32>,
    /// columns[r] lists the image of orbit representative r.
    columns: Vec<Vec<GroupEntry>>,
}

impl Sector {
    pub fn build(k: usize, l: usize) -> Result<Sector> {
        if k == 0 || l > k + 1 || k + 1 > crate::partition::MAX_POINTS {
            return Err(Error::Domain(format!("no sector l={l} for k={k}")));
        }
        let orbits = enumerate_orbits(k, l);
        let index: HashMap<State, u32> = orbits.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        let columns = orbits
            .par_iter()
            .map(|r| -> Result<Vec<GroupEntry>> {
                let mut col: Vec<GroupEntry> = apply_transfer(k, r)
                    .into_iter()
                    .map(|(t, w)| {
                        let (rep, perm) = t.orbit_rep();
                        let row = *index
                            .get(&rep)
                            .ok_or_else(|| Error::Structure(format!("image {t} outside the sector basis")))?;
                        Ok(GroupEntry { row, perm, weight: w })
                    })
                    .collect::<Result<_>>()?;
                col.sort_by_key(|a| (a.row, a.perm));
                Ok(col)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sector { k, l, orbits, index, columns })
    }

    pub fn orbits(&self) -> &[State] {
        &self.orbits
    }

    pub fn orbit_index(&self, s: &State) -> Option<usize> {
        self.index.get(s).map(|&i| i as usize)
    }

    pub fn column(&self, r: usize) -> &[GroupEntry] {
        &self.columns[r]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    /// Largest weight degree.
    pub fn max_degree(&self) -> usize {
        self.columns.iter().flatten().map(|e| e.weight.len().saturating_sub(1)).max().unwrap_or(0)
    }

    /// Point 0 is a marked singleton.
    pub fn in_c1(&self, r: usize) -> bool {
        let s = &self.orbits[r];
        s.is_singleton(0) && s.is_marked(0)
    }
}

/// Irreducible block of T̃ for (k, ℓ, λ).
#[derive(Clone, Debug)]
pub struct TransferBlock {
    pub k: usize,
    pub l: usize,
    pub lam: YoungDiagram,
    sector: Arc<Sector>,
    irrep: Arc<Irrep>,
    /// Orbit indices spanning the block, in order.
    rows: Vec<u32>,
    deflated: bool,
    removed: usize,
}

pub fn build_block(k: usize, l: usize, lam: &YoungDiagram) -> Result<TransferBlock> {
    let sector = Arc::new(Sector::build(k, l)?);
    block_from_sector(sector, lam)
}

pub fn block_from_sector(sector: Arc<Sector>, lam: &YoungDiagram) -> Result<TransferBlock> {
    if lam.size() != sector.l {
        return Err(Error::Domain(format!("diagram {lam} is not a partition of {}", sector.l)));
    }
    let rows = (0..sector.orbits.len() as u32).collect();
    Ok(TransferBlock {
        k: sector.k,
        l: sector.l,
        lam: lam.clone(),
        irrep: Arc::new(Irrep::new(lam)),
        sector,
        rows,
        deflated: false,
        removed: 0,
    })
}

/// Removes the C₁ part after checking that it is Q^{2k} times the identity
/// and that C₂ never feeds back into it.
pub fn deflate_trivial(block: &TransferBlock) -> Result<TransferBlock> {
    if block.deflated {
        return Err(Error::Structure("block already deflated".into()));
    }
    let s = &block.sector;
    let mut scalar = vec![0i128; 2 * s.k + 1];
    scalar[2 * s.k] = 1;
    let mut keep = Vec::new();
    for r in 0..s.orbits.len() {
        let c1 = s.in_c1(r);
        for e in s.column(r) {
            if !s.in_c1(e.row as usize) {
                continue;
            }
            let ok = c1 && e.row as usize == r && e.perm.is_identity() && e.weight == scalar;
            if !ok {
                return Err(Error::Structure(format!(
                    "C1 entry ({}, {}) breaks the triangular split in k={} l={}",
                    s.orbits[e.row as usize], s.orbits[r], s.k, s.l
                )));
            }
        }
        if c1 {
            if !s.column(r).iter().any(|e| e.row as usize == r) {
                return Err(Error::Structure(format!("C1 diagonal missing at {}", s.orbits[r])));
            }
        } else {
            keep.push(r as u32);
        }
    }
    let dim = block.irrep.dim();
    let removed = (block.rows.len() - keep.len()) * dim;
    Ok(TransferBlock { rows: keep, deflated: true, removed, ..block.clone() })
}

/// Scalar at which a block is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarPoint {
    Rational(BigRational),
    Residue { q: i64, p: u64 },
    Complex(Complex64),
}

/// Whether to apply the (−1)^k Q^{−2k} normalisation of T̂.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalisation {
    Tilde,
    Hat,
}

/// Column-sparse matrix made of dim λ × dim λ tiles.
#[derive(Clone, Debug)]
pub struct TiledMatrix<E> {
    pub orbits: usize,
    pub tile: usize,
    /// cols[c] = [(row orbit, tile row-major)].
    pub cols: Vec<Vec<(u32, Vec<E>)>>,
}

impl<E: Clone> TiledMatrix<E> {
    pub fn dim(&self) -> usize {
        self.orbits * self.tile
    }

    pub fn apply<F: Field<E = E>>(&self, f: &F, x: &[E]) -> Vec<E> {
        let d = self.tile;
        let mut y = vec![f.zero(); self.dim()];
        for (c, col) in self.cols.iter().enumerate() {
            let xs = &x[c * d..(c + 1) * d];
            for (r, t) in col {
                let r = *r as usize;
                for a in 0..d {
                    let mut acc = y[r * d + a].clone();
                    for b in 0..d {
                        acc = f.add(&acc, &f.mul(&t[a * d + b], &xs[b]));
                    }
                    y[r * d + a] = acc;
                }
            }
        }
        y
    }

    pub fn to_dense<F: Field<E = E>>(&self, f: &F) -> Vec<E> {
        let n = self.dim();
        let d = self.tile;
        let mut m = vec![f.zero(); n * n];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, t) in col {
                let r = *r as usize;
                for a in 0..d {
                    for b in 0..d {
                        let idx = (r * d + a) * n + c * d + b;
                        m[idx] = f.add(&m[idx], &t[a * d + b]);
                    }
                }
            }
        }
        m
    }
}

/// Dense materialisation is offered below this dimension.
pub const DENSE_LIMIT: usize = 2048;

#[derive(Clone, Debug)]
pub enum EvaluatedMatrix {
    Rational(TiledMatrix<BigRational>),
    Residue { p: u64, m: TiledMatrix<u64> },
    Complex(TiledMatrix<Complex64>),
}

impl EvaluatedMatrix {
    pub fn dim(&self) -> usize {
        match self {
            EvaluatedMatrix::Rational(m) => m.dim(),
            EvaluatedMatrix::Residue { m, .. } => m.dim(),
            EvaluatedMatrix::Complex(m) => m.dim(),
        }
    }

    /// Dense complex matrix, if within [`DENSE_LIMIT`].
    pub fn complex_dense(&self) -> Option<DMatrix<Complex64>> {
        let EvaluatedMatrix::Complex(m) = self else { return None };
        if m.dim() > DENSE_LIMIT {
            return None;
        }
        let n = m.dim();
        let v = m.to_dense(&ComplexField);
        Some(DMatrix::from_row_slice(n, n, &v))
    }
}

impl TransferBlock {
    pub fn sector(&self) -> &Arc<Sector> {
        &self.sector
    }

    pub fn irrep(&self) -> &Irrep {
        &self.irrep
    }

    pub fn is_deflated(&self) -> bool {
        self.deflated
    }

    pub fn removed(&self) -> usize {
        self.removed
    }

    pub fn orbit_rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn tile(&self) -> usize {
        self.irrep.dim()
    }

    pub fn dimension(&self) -> usize {
        self.rows.len() * self.tile()
    }

    /// Pre-deflation dimension expected from counting.
    pub fn expected_dimension(&self) -> BigInt {
        sector_orbits(self.k, self.l) * young_dim(&self.lam)
    }

    pub fn expected_removed(&self) -> BigInt {
        n_trivial(self.k, self.l) * young_dim(&self.lam)
    }

    /// Basis of the block as (orbit representative, tableau index) pairs.
    pub fn basis(&self) -> Vec<(State, usize)> {
        let d = self.tile();
        self.rows.iter().flat_map(|&r| (0..d).map(move |a| (self.sector.orbits[r as usize], a))).collect()
    }

    /// ρ_λ(τ⁻¹) for every relabelling that occurs, in the field `f`.
    pub fn rho_table<F: Field>(&self, f: &F) -> Result<HashMap<Perm, Vec<F::E>>> {
        let mut memo = HashMap::new();
        let mut out = HashMap::new();
        for &r in &self.rows {
            for e in self.sector.column(r as usize) {
                if out.contains_key(&e.perm) {
                    continue;
                }
                let m = self.irrep.matrix(&e.perm.inverse(), &mut memo);
                let conv = m
                    .a
                    .iter()
                    .map(|x| f.from_rational(x))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Domain("representation denominator not invertible".into()))?;
                out.insert(e.perm, conv);
            }
        }
        Ok(out)
    }

    /// Substitutes Q = q in a generic field.
    pub fn evaluate_in<F: Field>(&self, f: &F, q: &F::E, norm: Normalisation) -> Result<TiledMatrix<F::E>> {
        let rho = self.rho_table(f)?;
        let d = self.tile();
        let scale = match norm {
            Normalisation::Tilde => f.one(),
            Normalisation::Hat => {
                let q2k = f.pow(q, 2 * self.k as u64);
                let inv = f.inv(&q2k).ok_or_else(|| Error::Domain("Q = 0 cannot be normalised".into()))?;
                if self.k % 2 == 1 {
                    f.neg(&inv)
                } else {
                    inv
                }
            }
        };
        let pos: HashMap<u32, u32> = self.rows.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
        let mut cols = Vec::with_capacity(self.rows.len());
        for &r in &self.rows {
            let mut tiles: Vec<(u32, Vec<F::E>)> = Vec::new();
            for e in self.sector.column(r as usize) {
                let Some(&row) = pos.get(&e.row) else { continue };
                let w = f.mul(&f.eval_i128(&e.weight, q), &scale);
                if f.is_zero(&w) {
                    continue;
                }
                let rm = &rho[&e.perm];
                let t: Vec<F::E> = rm.iter().map(|x| f.mul(x, &w)).collect();
                match tiles.last_mut() {
                    Some((lr, lt)) if *lr == row => {
                        for (a, b) in lt.iter_mut().zip(t) {
                            *a = f.add(a, &b);
                        }
                    }
                    _ => tiles.push((row, t)),
                }
            }
            cols.push(tiles);
        }
        Ok(TiledMatrix { orbits: self.rows.len(), tile: d, cols })
    }

    pub fn evaluate(&self, point: &ScalarPoint, norm: Normalisation) -> Result<EvaluatedMatrix> {
        Ok(match point {
            ScalarPoint::Rational(q) => EvaluatedMatrix::Rational(self.evaluate_in(&RationalField, q, norm)?),
            ScalarPoint::Residue { q, p } => {
                if !is_prime(*p) || *p >= 1 << 31 {
                    return Err(Error::BadPrime(*p));
                }
                let f = PrimeField::new(*p);
                let qq = f.from_i128(*q as i128);
                let m = self.evaluate_in(&f, &qq, norm).map_err(|e| match e {
                    Error::Domain(_) => Error::BadPrime(*p),
                    other => other,
                })?;
                EvaluatedMatrix::Residue { p: *p, m }
            }
            ScalarPoint::Complex(z) => EvaluatedMatrix::Complex(self.evaluate_in(&ComplexField, z, norm)?),
        })
    }

    /// Exact trace of T̃ in this block as a polynomial (n = 1).
    pub fn trace_poly(&self) -> Result<RatPoly> {
        let mut memo = HashMap::new();
        let mut acc = RatPoly::zero();
        for &r in &self.rows {
            for e in self.sector.column(r as usize) {
                if e.row == r {
                    let chi = self.irrep.matrix(&e.perm.inverse(), &mut memo).trace();
                    acc = &acc + &small_to_rat(&e.weight).scale(&chi);
                }
            }
        }
        Ok(acc)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// All blocks (ℓ, λ) of T̃_{k+1} sharing one sector build per ℓ.
pub fn all_blocks(k: usize) -> Result<Vec<TransferBlock>> {
    let mut out = Vec::new();
    for l in 0..=k + 1 {
        let sector = Arc::new(Sector::build(k, l)?);
        for lam in crate::combinatorics::partitions(l) {
            out.push(block_from_sector(sector.clone(), &lam)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::partitions;
    use num_traits::ToPrimitive;

    fn hat_eigs_1x1(k: usize, l: usize, lam: &YoungDiagram, deflate: bool) -> Vec<SmallPoly> {
        let mut b = build_block(k, l, lam).unwrap();
        if deflate {
            b = deflate_trivial(&b).unwrap();
        }
        b.rows.iter().map(|&r| b.sector.column(r as usize).iter().find(|e| e.row == r).unwrap().weight.clone()).collect()
    }

    #[test]
    fn k1_blocks() {
        // T̃ = Q²(2−Q) in the empty sector: T̂ = Q − 2.
        assert_eq!(hat_eigs_1x1(1, 0, &YoungDiagram::empty(), false), vec![vec![0, 0, 2, -1]]);
        // single orbit {01} marked: −Q²(Q−3)·(−1) … T̂ = Q − 3
        assert_eq!(hat_eigs_1x1(1, 1, &YoungDiagram::row(1), true), vec![vec![0, 0, 3, -1]]);
        for lam in partitions(2) {
            let b = deflate_trivial(&build_block(1, 2, &lam).unwrap()).unwrap();
            assert_eq!(b.dimension(), 0);
            assert_eq!(b.removed(), 1);
        }
    }

    #[test]
    fn dimensions_match_counting() {
        for k in 1..=4 {
            for l in 0..=k + 1 {
                let sector = Arc::new(Sector::build(k, l).unwrap());
                for lam in partitions(l) {
                    let b = block_from_sector(sector.clone(), &lam).unwrap();
                    assert_eq!(BigInt::from(b.dimension()), b.expected_dimension());
                    let d = deflate_trivial(&b).unwrap();
                    assert_eq!(BigInt::from(d.removed()), d.expected_removed(), "k={k} l={l} {lam}");
                }
            }
        }
    }

    #[test]
    fn evaluation_routes_agree() {
        for k in 1..=3 {
            for b in all_blocks(k).unwrap() {
                let q = BigRational::from_integer(3.into());
                let exact = b.evaluate_in(&RationalField, &q, Normalisation::Tilde).unwrap().to_dense(&RationalField);
                let f = PrimeField::new(65521);
                let m = b.evaluate_in(&f, &3, Normalisation::Tilde).unwrap().to_dense(&f);
                for (x, y) in exact.iter().zip(&m) {
                    assert_eq!(f.from_rational(x).unwrap(), *y);
                }
                let q2 = BigRational::from_integer(2.into());
                let exact = b.evaluate_in(&RationalField, &q2, Normalisation::Hat).unwrap().to_dense(&RationalField);
                let c = b
                    .evaluate_in(&ComplexField, &Complex64::new(2.0, 0.0), Normalisation::Hat)
                    .unwrap()
                    .to_dense(&ComplexField);
                for (x, y) in exact.iter().zip(&c) {
                    assert!((x.to_f64().unwrap() - y.re).abs() < 1e-12 && y.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bad_prime_rejected() {
        let b = build_block(2, 0, &YoungDiagram::empty()).unwrap();
        assert!(matches!(
            b.evaluate(&ScalarPoint::Residue { q: 3, p: 65520 }, Normalisation::Tilde),
            Err(Error::BadPrime(65520))
        ));
        assert!(b.evaluate(&ScalarPoint::Residue { q: 65521, p: 65521 }, Normalisation::Hat).is_err());
    }
}
