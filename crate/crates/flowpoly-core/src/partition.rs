//! Reduced partition-algebra states: set partitions of the top-row points
//! 0..k with l marked, labelled blocks (the links to the forgotten bottom row).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::poly::RatPoly;

pub const MAX_POINTS: usize = 16;

/// Blocks are numbered in order of their least element (restricted growth
/// string); `mark[b]` is 0 for an unmarked block, otherwise its label 1..l.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    block_of: [u8; MAX_POINTS],
    mark: [u8; MAX_POINTS],
    npts: u8,
    nblocks: u8,
}

/// Result of the detach operator D_i on a reduced state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Detach {
    /// i was an unmarked singleton: D_i = Q·id.
    Scaled,
    /// i was split off as an unmarked singleton.
    Split(State),
    /// i was a marked singleton: the link is lost and the number of marks
    /// would drop, so the term vanishes at fixed l.
    LinkLost,
}

impl State {
    /// Builds a state from raw blocks and per-block labels (0 = unmarked).
    pub fn from_blocks(blocks: &[Vec<usize>], marks: &[u8], allow_singletons: bool) -> Result<State> {
        if blocks.len() != marks.len() {
            return Err(Error::InvalidState("one mark entry per block required".into()));
        }
        let npts: usize = blocks.iter().map(|b| b.len()).sum();
        if npts > MAX_POINTS {
            return Err(Error::InvalidState(format!("{npts} points exceeds {MAX_POINTS}")));
        }
        let mut owner = [u8::MAX; MAX_POINTS];
        for (b, blk) in blocks.iter().enumerate() {
            if blk.is_empty() {
                return Err(Error::InvalidState("empty block".into()));
            }
            for &x in blk {
                if x >= npts || owner[x] != u8::MAX {
                    return Err(Error::InvalidState(format!("point {x} repeated or out of range")));
                }
                owner[x] = b as u8;
            }
        }
        let l = marks.iter().filter(|&&m| m > 0).count();
        let mut seen = 0u32;
        for &m in marks.iter().filter(|&&m| m > 0) {
            if m as usize > l || seen >> m & 1 == 1 {
                return Err(Error::InvalidState(format!("labels must be 1..{l} each used once")));
            }
            seen |= 1 << m;
        }
        let s = State::normalize(npts, &owner[..npts], marks);
        if !allow_singletons && s.has_unmarked_singleton() {
            return Err(Error::InvalidState(format!("unmarked singleton in {s}")));
        }
        Ok(s)
    }

    /// Renumbers arbitrary block ids by first occurrence.
    fn normalize(npts: usize, owner: &[u8], mark_of_id: &[u8]) -> State {
        let mut remap = [u8::MAX; MAX_POINTS];
        let mut s = State { block_of: [0; MAX_POINTS], mark: [0; MAX_POINTS], npts: npts as u8, nblocks: 0 };
        for (x, &id) in owner.iter().enumerate() {
            let id = id as usize;
            if remap[id] == u8::MAX {
                remap[id] = s.nblocks;
                s.mark[s.nblocks as usize] = mark_of_id[id];
                s.nblocks += 1;
            }
            s.block_of[x] = remap[id];
        }
        s
    }

    pub fn points(&self) -> usize {
        self.npts as usize
    }

    pub fn block_count(&self) -> usize {
        self.nblocks as usize
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i] as usize
    }

    /// Label of block b, 0 if unmarked.
    pub fn mark(&self, b: usize) -> u8 {
        self.mark[b]
    }

    pub fn links(&self) -> usize {
        self.mark[..self.block_count()].iter().filter(|&&m| m > 0).count()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for x in 0..self.points() {
            out[self.block_of(x)].push(x);
        }
        out
    }

    pub fn marks(&self) -> &[u8] {
        &self.mark[..self.block_count()]
    }

    fn block_size(&self, b: usize) -> usize {
        self.block_of[..self.points()].iter().filter(|&&x| x as usize == b).count()
    }

    pub fn is_singleton(&self, i: usize) -> bool {
        self.block_size(self.block_of(i)) == 1
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.mark[self.block_of(i)] > 0
    }

    pub fn is_unmarked_singleton(&self, i: usize) -> bool {
        !self.is_marked(i) && self.is_singleton(i)
    }

    pub fn has_unmarked_singleton(&self) -> bool {
        let mut size = [0u8; MAX_POINTS];
        for x in 0..self.points() {
            size[self.block_of(x)] += 1;
        }
        (0..self.block_count()).any(|b| size[b] == 1 && self.mark[b] == 0)
    }

    /// D_i: detach point i into a new unmarked singleton.
    pub fn detach(&self, i: usize) -> Detach {
        if self.is_singleton(i) {
            return if self.is_marked(i) { Detach::LinkLost } else { Detach::Scaled };
        }
        let n = self.points();
        let mut owner = [0u8; MAX_POINTS];
        owner[..n].copy_from_slice(&self.block_of[..n]);
        let fresh = self.nblocks;
        owner[i] = fresh;
        let mut marks = self.mark;
        marks[fresh as usize] = 0;
        Detach::Split(State::normalize(n, &owner[..n], &marks[..=fresh as usize]))
    }

    /// J_ij: merge the blocks of i and j. Two marked blocks keep the smaller
    /// label and higher labels close the gap.
    pub fn join(&self, i: usize, j: usize) -> State {
        let (a, b) = (self.block_of(i), self.block_of(j));
        if a == b {
            return *self;
        }
        let (ma, mb) = (self.mark[a], self.mark[b]);
        let n = self.points();
        let mut owner = [0u8; MAX_POINTS];
        for x in 0..n {
            let o = self.block_of[x];
            owner[x] = if o as usize == b { a as u8 } else { o };
        }
        let mut marks = self.mark;
        if ma > 0 && mb > 0 {
            let (keep, gone) = (ma.min(mb), ma.max(mb));
            for m in marks.iter_mut().take(self.block_count()) {
                if *m > gone {
                    *m -= 1;
                }
            }
            marks[a] = keep;
        } else {
            marks[a] = ma.max(mb);
        }
        State::normalize(n, &owner[..n], &marks[..self.block_count()])
    }

    /// `None` when both blocks are marked and distinct (the link count would drop).
    pub fn join_preserving(&self, i: usize, j: usize) -> Option<State> {
        let (a, b) = (self.block_of(i), self.block_of(j));
        if a != b && self.mark[a] > 0 && self.mark[b] > 0 {
            None
        } else {
            Some(self.join(i, j))
        }
    }

    /// Relabels marks by the permutation `p` of 0..l−1 (label m ↦ p(m−1)+1).
    pub fn relabel(&self, p: &Perm) -> State {
        let mut s = *self;
        for m in s.mark.iter_mut().take(self.block_count()) {
            if *m > 0 {
                *m = p.apply(*m as usize - 1) as u8 + 1;
            }
        }
        s
    }

    /// Splits `self = τ·rep` where `rep` labels its marked blocks 1, 2, ...
    /// in block order.
    pub fn orbit_rep(&self) -> (State, Perm) {
        let l = self.links();
        let mut img = [0usize; MAX_POINTS];
        let mut rep = *self;
        let mut j = 0;
        for b in 0..self.block_count() {
            if self.mark[b] > 0 {
                img[j] = self.mark[b] as usize - 1;
                j += 1;
                rep.mark[b] = j as u8;
            }
        }
        (rep, Perm::from_images(&img[..l]).expect("labels form a permutation"))
    }

    pub fn is_orbit_rep(&self) -> bool {
        self.orbit_rep().1.is_identity()
    }

    /// Compact byte encoding: point count, block string, block marks.
    pub fn encode(&self) -> Vec<u8> {
        let mut v = Vec::with_capacity(2 + self.points() + self.block_count());
        v.push(self.npts);
        v.extend_from_slice(&self.block_of[..self.points()]);
        v.push(self.nblocks);
        v.extend_from_slice(self.marks());
        v
    }

    pub fn decode(bytes: &[u8]) -> Result<(State, usize)> {
        let bad = || Error::InvalidState("truncated state encoding".into());
        let n = *bytes.first().ok_or_else(bad)? as usize;
        let nb = *bytes.get(1 + n).ok_or_else(bad)? as usize;
        if bytes.len() < 2 + n + nb || n > MAX_POINTS || nb > n {
            return Err(bad());
        }
        let owner = &bytes[1..1 + n];
        let marks = &bytes[2 + n..2 + n + nb];
        if owner.iter().any(|&o| o as usize >= nb) {
            return Err(bad());
        }
        let s = State::normalize(n, owner, marks);
        if s.encode() != bytes[..2 + n + nb] {
            return Err(Error::InvalidState("non-canonical state encoding".into()));
        }
        Ok((s, 2 + n + nb))
    }

    /// Text form: blocks as sorted lists, then `block:label` pairs.
    pub fn dump(&self) -> String {
        let b: Vec<String> = self
            .blocks()
            .iter()
            .map(|blk| format!("[{}]", blk.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let m: Vec<String> = self
            .marks()
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(b, m)| format!("{b}:{m}"))
            .collect();
        format!("{} | {}", b.join(" "), m.join(" "))
    }

    pub fn parse_dump(s: &str) -> Result<State> {
        let err = || Error::Parse(format!("bad state dump '{s}'"));
        let (blocks_s, marks_s) = s.split_once('|').ok_or_else(err)?;
        let mut blocks = Vec::new();
        for tok in blocks_s.split_whitespace() {
            let inner = tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(err)?;
            let blk = inner.split(',').map(|x| x.parse::<usize>().map_err(|_| err())).collect::<Result<Vec<_>>>()?;
            blocks.push(blk);
        }
        let mut marks = vec![0u8; blocks.len()];
        for tok in marks_s.split_whitespace() {
            let (b, m) = tok.split_once(':').ok_or_else(err)?;
            let b: usize = b.parse().map_err(|_| err())?;
            *marks.get_mut(b).ok_or_else(err)? = m.parse().map_err(|_| err())?;
        }
        State::from_blocks(&blocks, &marks, true)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, blk) in self.blocks().iter().enumerate() {
            write!(f, "(")?;
            for x in blk {
                write!(f, "{x}")?;
            }
            match self.mark[b] {
                0 => write!(f, ")")?,
                m => write!(f, ")^{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All set partitions of n points as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<u8>> {
    fn rec(i: usize, n: usize, max: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(i + 1, n, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        let mut cur = vec![0u8];
        rec(1, n, 1, &mut cur, &mut out);
    }
    out
}

fn marked_states(npts: usize, l: usize, allow_singletons: bool, labelled: bool) -> Vec<State> {
    let mut out = Vec::new();
    let perms = if labelled { Perm::all(l) } else { vec![Perm::identity(l)] };
    for rgs in set_partitions(npts) {
        let nb = rgs.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut size = vec![0usize; nb];
        for &b in &rgs {
            size[b as usize] += 1;
        }
        for subset in 0u32..(1 << nb) {
            if subset.count_ones() as usize != l {
                continue;
            }
            if !allow_singletons && (0..nb).any(|b| subset >> b & 1 == 0 && size[b] == 1) {
                continue;
            }
            for p in &perms {
                let mut marks = vec![0u8; nb];
                let mut j = 0;
                for (b, m) in marks.iter_mut().enumerate() {
                    if subset >> b & 1 == 1 {
                        *m = p.apply(j) as u8 + 1;
                        j += 1;
                    }
                }
                out.push(State::normalize(npts, &rgs, &marks));
            }
        }
    }
    out.sort();
    out
}

/// Basis of sector l on k+1 points: no unmarked singleton, all labellings.
pub fn enumerate_basis(k: usize, l: usize) -> Vec<State> {
    marked_states(k + 1, l, false, true)
}

/// One representative per relabelling orbit of [`enumerate_basis`].
pub fn enumerate_orbits(k: usize, l: usize) -> Vec<State> {
    marked_states(k + 1, l, false, false)
}

/// Linear combination of states with polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedStateSum {
    terms: BTreeMap<State, RatPoly>,
}

impl WeightedStateSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(s: State, c: RatPoly) -> Self {
        let mut w = Self::new();
        w.add(s, c);
        w
    }

    pub fn add(&mut self, s: State, c: RatPoly) {
        let e = self.terms.entry(s).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn terms(&self) -> &BTreeMap<State, RatPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_states(&self, f: impl Fn(&State) -> WeightedStateSum) -> WeightedStateSum {
        let mut out = WeightedStateSum::new();
        for (s, c) in &self.terms {
            for (t, d) in f(s).terms {
                out.add(t, c * &d);
            }
        }
        out
    }
}

/// D_i as a weighted sum; marked singletons give zero at fixed l.
pub fn detach(s: &State, i: usize) -> WeightedStateSum {
    match s.detach(i) {
        Detach::Scaled => WeightedStateSum::single(*s, RatPoly::x()),
        Detach::Split(t) => WeightedStateSum::single(t, RatPoly::one()),
        Detach::LinkLost => WeightedStateSum::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{dim_marked_nosingleton, factorial};
    use num_bigint::BigInt;

    fn st(blocks: &[&[usize]], marks: &[u8]) -> State {
        let b: Vec<Vec<usize>> = blocks.iter().map(|x| x.to_vec()).collect();
        State::from_blocks(&b, marks, true).unwrap()
    }

    #[test]
    fn basis_sizes() {
        let b = enumerate_basis(1, 0);
        assert_eq!(b, vec![st(&[&[0, 1]], &[0])]);
        assert_eq!(enumerate_basis(2, 1).len(), 4);
        for k in 1..=5 {
            assert_eq!(BigInt::from(enumerate_basis(k, k + 1).len()), factorial(k + 1));
            for l in 0..=k + 1 {
                let n = enumerate_basis(k, l).len();
                assert_eq!(BigInt::from(n), dim_marked_nosingleton(k + 1, l), "k={k} l={l}");
                assert_eq!(enumerate_orbits(k, l).len() * usize::try_from(factorial(l)).unwrap(), n);
            }
        }
    }

    #[test]
    fn canonical_forms() {
        let a = st(&[&[2, 1], &[0]], &[0, 1]);
        let b = st(&[&[0], &[1, 2]], &[1, 0]);
        assert_eq!(a, b);
        assert_eq!(a.blocks(), vec![vec![0], vec![1, 2]]);
        assert!(State::from_blocks(&[vec![0], vec![1, 2]], &[0, 0], false).is_err());
        assert!(State::from_blocks(&[vec![0, 1]], &[2], true).is_err());
        let c = st(&[&[0, 3], &[1], &[2]], &[2, 1, 0]);
        assert_eq!(State::parse_dump(&c.dump()).unwrap(), c);
        assert_eq!(State::decode(&c.encode()).unwrap().0, c);
    }

    #[test]
    fn detach_and_join() {
        let s = st(&[&[0, 1]], &[0]);
        assert_eq!(s.detach(0), Detach::Split(st(&[&[0], &[1]], &[0, 0])));
        let single = st(&[&[0], &[1, 2]], &[0, 1]);
        assert_eq!(single.detach(0), Detach::Scaled);
        let marked = st(&[&[0], &[1, 2]], &[1, 0]);
        assert_eq!(marked.detach(0), Detach::LinkLost);
        assert_eq!(detach(&single, 0), WeightedStateSum::single(single, RatPoly::x()));
        let j = single.join(0, 2);
        assert_eq!(j, st(&[&[0, 1, 2]], &[1]));
        assert_eq!(j.join(1, 2), j);
        let two = st(&[&[0], &[1], &[2, 3]], &[2, 1, 0]);
        assert_eq!(two.join_preserving(0, 1), None);
        assert_eq!(two.join(0, 1), st(&[&[0, 1], &[2, 3]], &[1, 0]));
    }

    #[test]
    fn orbit_representatives() {
        let s = st(&[&[0, 2], &[1], &[3]], &[3, 1, 2]);
        let (rep, p) = s.orbit_rep();
        assert!(rep.is_orbit_rep());
        assert_eq!(rep.relabel(&p), s);
        assert_eq!(rep.marks(), &[1, 2, 3]);
    }
}
