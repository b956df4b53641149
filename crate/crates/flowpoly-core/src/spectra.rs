//! Leading eigenvalues of the normalised blocks at complex Q, dominance
//! between sectors, limiting points of the zeros and Q_c(k).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::{alpha, beta, gamma, partitions, YoungDiagram};
use crate::error::{Error, Result};
use crate::field::{rational_to_f64, ComplexField};
use crate::poly::RatPoly;
use crate::transfer::{block_from_sector, deflate_trivial, Normalisation, Sector, TiledMatrix, TransferBlock};

type C = Complex64;

/// A block of the complete decomposition, or the trivial eigenvalue (−1)^k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectorId {
    Trivial,
    Block { l: usize, lam: YoungDiagram },
}

impl SectorId {
    pub fn block(l: usize, lam: YoungDiagram) -> Self {
        SectorId::Block { l, lam }
    }
}

impl fmt::Display for SectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorId::Trivial => write!(f, "trivial"),
            SectorId::Block { l: 0, .. } => write!(f, "(0)"),
            SectorId::Block { l, lam } => write!(f, "({l},{lam})"),
        }
    }
}

impl std::str::FromStr for SectorId {
    type Err = Error;
    /// Accepts "trivial", "0", "(0)", "3,(3)", "(2,(1,1))".
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "trivial" {
            return Ok(SectorId::Trivial);
        }
        let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).filter(|x| !x.starts_with('(') && x.matches('(').count() == 1 || *x == "0").unwrap_or(t);
        if inner == "0" {
            return Ok(SectorId::block(0, YoungDiagram::empty()));
        }
        let (l, lam) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("sector {s:?}")))?;
        let l: usize = l.trim().parse().map_err(|_| Error::Parse(format!("sector {s:?}")))?;
        let lam: YoungDiagram = lam.trim().parse()?;
        if lam.size() != l {
            return Err(Error::Parse(format!("sector {s:?}: diagram has {} cells", lam.size())));
        }
        Ok(SectorId::block(l, lam))
    }
}

/// Which irreducible representations enter the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    /// Only λ = (ℓ).
    Symmetric,
}

pub struct SectorModel {
    pub id: SectorId,
    pub block: Option<TransferBlock>,
    pub amplitude: RatPoly,
}

/// The deflated blocks of the complete decomposition for one k.
pub struct SpectralModel {
    pub k: usize,
    pub selection: Selection,
    pub sectors: Vec<SectorModel>,
}

impl SpectralModel {
    pub fn build(k: usize, selection: Selection) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("k must be positive".into()));
        }
        let mut sectors = vec![SectorModel { id: SectorId::Trivial, block: None, amplitude: gamma(k) }];
        for l in 0..=k {
            let sector = Arc::new(Sector::build(k, l)?);
            let lams = match (l == k, selection) {
                (true, _) | (false, Selection::Symmetric) => vec![YoungDiagram::row(l)],
                (false, Selection::All) => partitions(l),
            };
            for lam in lams {
                let mut block = block_from_sector(sector.clone(), &lam)?;
                if l > 0 {
                    block = deflate_trivial(&block)?;
                }
                let amplitude = if l == k { beta(k) } else { alpha(l, &lam)? };
                sectors.push(SectorModel { id: SectorId::block(l, lam), block: Some(block), amplitude });
            }
        }
        Ok(SpectralModel { k, selection, sectors })
    }

    pub fn ids(&self) -> Vec<SectorId> {
        self.sectors.iter().map(|s| s.id.clone()).collect()
    }

    pub fn sector(&self, id: &SectorId) -> Option<&SectorModel> {
        self.sectors.iter().find(|s| &s.id == id)
    }

    pub fn amplitude_at(&self, id: &SectorId, q: C) -> Option<C> {
        self.sector(id).map(|s| eval_rat_poly(&s.amplitude, q))
    }
}

pub fn eval_rat_poly(p: &RatPoly, q: C) -> C {
    p.coeffs().iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * q + rational_to_f64(c))
}

#[derive(Clone, Copy, Debug)]
pub struct EigOptions {
    /// Relative residual ‖Ax − μx‖ / (|μ|‖x‖).
    pub tol: f64,
    pub krylov: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for EigOptions {
    fn default() -> Self {
        EigOptions { tol: 1e-10, krylov: 60, max_restarts: 400, seed: 0x5eed }
    }
}

#[derive(Clone, Debug)]
pub struct EigResult {
    /// Largest-modulus Ritz values, descending.
    pub values: Vec<C>,
    pub residuals: Vec<f64>,
    /// Ritz vector of `values[0]`.
    pub vector: Vec<C>,
    pub converged: bool,
}

fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn by_modulus(a: &C, b: &C) -> Ordering {
    b.norm().partial_cmp(&a.norm()).unwrap_or(Ordering::Equal).then(b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
}

/// Eigenvector of a small dense matrix for an (approximate) eigenvalue.
fn small_eigenvector(h: &DMatrix<C>, theta: C) -> DVector<C> {
    let n = h.nrows();
    let shift = theta + C::new(1e-13 * theta.norm().max(1e-300), 1e-13 * theta.norm().max(1e-300));
    let a = h - DMatrix::<C>::identity(n, n) * shift;
    let lu = a.lu();
    let mut y = DVector::from_element(n, C::new(1.0, 0.0));
    for _ in 0..3 {
        match lu.solve(&y) {
            Some(z) if z.iter().all(|x| x.is_finite()) => {
                let nz = z.norm();
                if nz == 0.0 {
                    break;
                }
                y = z / C::new(nz, 0.0);
            }
            _ => break,
        }
    }
    y
}

fn dense_eigenvalues(h: &DMatrix<C>) -> Vec<C> {
    let n = h.nrows();
    let scale = h.norm().max(1e-300);
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    // The unshifted QR sweep can cycle on exactly structured input; a
    // perturbation at rounding level breaks the cycle.
    for attempt in 0..6 {
        let m = if attempt == 0 {
            h.clone()
        } else {
            let eps = scale * 1e-15 * 10f64.powi(attempt);
            h + DMatrix::from_fn(n, n, |_, _| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * eps)
        };
        if let Some(v) = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 100 * n.max(10)).and_then(|s| s.eigenvalues()) {
            let mut ev: Vec<C> = v.iter().copied().collect();
            ev.sort_by(by_modulus);
            return ev;
        }
    }
    Vec::new()
}

/// Explicitly restarted Arnoldi for the `nev` largest-modulus eigenvalues of
/// an operator of dimension n.
pub fn arnoldi_top(n: usize, op: &(dyn Fn(&[C]) -> Vec<C> + Sync), nev: usize, opts: &EigOptions, start: Option<&[C]>) -> EigResult {
    let nev = nev.min(n).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ n as u64);
    let mut v: Vec<C> = match start {
        Some(s) if s.len() == n && norm(s) > 0.0 => s.to_vec(),
        _ => (0..n).map(|_| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect(),
    };
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let m_max = opts.krylov.max(nev + 2).min(n);
    let mut best = EigResult { values: vec![], residuals: vec![], vector: v.clone(), converged: false };
    for restart in 0..opts.max_restarts {
        let mut basis: Vec<Vec<C>> = vec![v.clone()];
        let mut h = DMatrix::<C>::zeros(m_max + 1, m_max);
        let mut m = m_max;
        let mut beta_last = 0.0;
        for j in 0..m_max {
            let mut w = op(&basis[j]);
            let wn0 = norm(&w);
            for _ in 0..2 {
                for (i, b) in basis.iter().enumerate() {
                    let c = dot(b, &w);
                    h[(i, j)] += c;
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let beta = norm(&w);
            h[(j + 1, j)] = C::new(beta, 0.0);
            beta_last = beta;
            if beta <= 1e-14 * wn0.max(1e-300) {
                m = j + 1;
                beta_last = 0.0;
                break;
            }
            if j + 1 < m_max {
                w.iter_mut().for_each(|x| *x /= beta);
                basis.push(w);
            }
        }
        let hm = h.view((0, 0), (m, m)).into_owned();
        let theta = dense_eigenvalues(&hm);
        if theta.is_empty() {
            break;
        }
        let take = nev.min(theta.len());
        let mut values = Vec::with_capacity(take);
        let mut residuals = Vec::with_capacity(take);
        let mut ritz: Vec<Vec<C>> = Vec::with_capacity(take);
        for &t in &theta[..take] {
            let y = small_eigenvector(&hm, t);
            let mut x = vec![C::new(0.0, 0.0); n];
            for (i, b) in basis.iter().enumerate().take(m) {
                let yi = y[i];
                x.iter_mut().zip(b).for_each(|(a, bb)| *a += yi * bb);
            }
            let r = beta_last * y[m - 1].norm() / t.norm().max(1e-300);
            values.push(t);
            residuals.push(r);
            ritz.push(x);
        }
        let converged = residuals.iter().all(|&r| r <= opts.tol);
        best = EigResult { values, residuals, vector: ritz[0].clone(), converged };
        if converged || m < m_max {
            best.converged = best.converged || beta_last == 0.0;
            break;
        }
        // Restart from a combination of the wanted Ritz vectors.
        let mut nv = vec![C::new(0.0, 0.0); n];
        for (i, x) in ritz.iter().enumerate() {
            let wgt = if best.residuals[i] > opts.tol { 1.0 } else { 0.25 };
            nv.iter_mut().zip(x).for_each(|(a, b)| *a += b * wgt);
        }
        if restart % 50 == 49 {
            // Occasionally perturb to escape stagnation.
            nv.iter_mut().for_each(|a| *a += C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * 1e-6);
        }
        let nn = norm(&nv);
        v = nv.into_iter().map(|x| x / nn).collect();
    }
    best
}

fn apply_tiled(m: &TiledMatrix<C>, x: &[C]) -> Vec<C> {
    m.apply(&ComplexField, x)
}

/// Two leading eigenvalues of one block at q.
#[derive(Clone, Debug)]
pub struct SectorRecord {
    pub id: SectorId,
    pub mu1: C,
    pub mu2: Option<C>,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct SpectrumSample {
    pub q: C,
    pub sectors: Vec<SectorRecord>,
}

/// One candidate for dominance: an eigenvalue with its sector.
#[derive(Clone, Debug)]
pub struct Ranked {
    pub id: SectorId,
    pub mu: C,
}

impl SpectrumSample {
    pub fn record(&self, id: &SectorId) -> Option<&SectorRecord> {
        self.sectors.iter().find(|r| &r.id == id)
    }

    /// Every reported eigenvalue, by decreasing modulus.
    pub fn ranked(&self) -> Vec<Ranked> {
        let mut v: Vec<Ranked> = Vec::new();
        for r in &self.sectors {
            v.push(Ranked { id: r.id.clone(), mu: r.mu1 });
            if let Some(m2) = r.mu2 {
                v.push(Ranked { id: r.id.clone(), mu: m2 });
            }
        }
        v.sort_by(|a, b| by_modulus(&a.mu, &b.mu));
        v
    }

    pub fn dominant(&self) -> Option<Ranked> {
        self.ranked().into_iter().next()
    }

    pub fn all_converged(&self) -> bool {
        self.sectors.iter().all(|r| r.converged)
    }
}

/// Per-block eigen-solver with warm starts.
pub struct SectorSolver<'a> {
    pub model: &'a SpectralModel,
    pub opts: EigOptions,
    warm: HashMap<SectorId, Vec<C>>,
}

impl<'a> SectorSolver<'a> {
    pub fn new(model: &'a SpectralModel, opts: EigOptions) -> Self {
        SectorSolver { model, opts, warm: HashMap::new() }
    }

    pub fn sector_eigs(&mut self, id: &SectorId, q: C) -> Result<SectorRecord> {
        let sm = self.model.sector(id).ok_or_else(|| Error::Domain(format!("unknown sector {id}")))?;
        let res = solve_sector(sm, self.model.k, q, &self.opts, self.warm.get(id).map(|v| v.as_slice()))?;
        if let Some(v) = res.1 {
            self.warm.insert(id.clone(), v);
        }
        Ok(res.0)
    }

    pub fn sample(&mut self, q: C) -> Result<SpectrumSample> {
        let warm = &self.warm;
        let k = self.model.k;
        let opts = self.opts;
        let out: Vec<(SectorRecord, Option<Vec<C>>)> = self
            .model
            .sectors
            .par_iter()
            .map(|sm| solve_sector(sm, k, q, &opts, warm.get(&sm.id).map(|v| v.as_slice())))
            .collect::<Result<_>>()?;
        let mut sectors = Vec::with_capacity(out.len());
        for (rec, v) in out {
            if let Some(v) = v {
                self.warm.insert(rec.id.clone(), v);
            }
            sectors.push(rec);
        }
        Ok(SpectrumSample { q, sectors })
    }
}

fn solve_sector(sm: &SectorModel, k: usize, q: C, opts: &EigOptions, warm: Option<&[C]>) -> Result<(SectorRecord, Option<Vec<C>>)> {
    let Some(block) = &sm.block else {
        let t = if k.is_multiple_of(2) { C::new(1.0, 0.0) } else { C::new(-1.0, 0.0) };
        return Ok((SectorRecord { id: sm.id.clone(), mu1: t, mu2: None, residual: 0.0, converged: true }, None));
    };
    if q.norm() == 0.0 {
        return Err(Error::Domain("Q = 0 is a pole of the normalisation".into()));
    }
    let m = block.evaluate_in(&ComplexField, &q, Normalisation::Hat)?;
    let n = m.dim();
    if n == 0 {
        return Err(Error::Structure(format!("sector {} is empty", sm.id)));
    }
    let r = if n <= 200 {
        let dense = DMatrix::from_row_slice(n, n, &m.to_dense(&ComplexField));
        let ev = dense_eigenvalues(&dense);
        if ev.is_empty() {
            return Err(Error::NoConvergence(format!("dense eigenvalues of sector {}", sm.id)));
        }
        let y = small_eigenvector(&dense, ev[0]);
        let res = (&dense * &y - &y * ev[0]).norm() / ev[0].norm().max(1e-300);
        EigResult { values: ev.into_iter().take(2).collect(), residuals: vec![res], vector: y.iter().copied().collect(), converged: true }
    } else {
        let op = |x: &[C]| apply_tiled(&m, x);
        arnoldi_top(n, &op, 2, opts, warm)
    };
    let rec = SectorRecord {
        id: sm.id.clone(),
        mu1: r.values[0],
        mu2: r.values.get(1).copied(),
        residual: r.residuals.iter().cloned().fold(0.0, f64::max),
        converged: r.converged,
    };
    Ok((rec, Some(r.vector)))
}

/// Two leading eigenvalues of every sector of the model at q.
pub fn leading_eigs(model: &SpectralModel, q: C, opts: &EigOptions) -> Result<SpectrumSample> {
    SectorSolver::new(model, *opts).sample(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureKind {
    /// Unique dominant eigenvalue whose amplitude vanishes.
    IsolatedA,
    /// Two or more dominant eigenvalues of equal modulus.
    CurveB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    AllN,
    OddN,
    EvenN,
    NonReal,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::AllN => "all-n",
            Parity::OddN => "odd-n",
            Parity::EvenN => "even-n",
            Parity::NonReal => "non-real",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LimitingFeature {
    pub kind: FeatureKind,
    pub location: C,
    pub witnesses: Vec<SectorId>,
    pub eigenvalues: Vec<C>,
    pub amplitudes: Vec<C>,
    pub parity: Option<Parity>,
}

/// Real zeros near a crossing of two real dominant eigenvalues, from the
/// signs of the amplitudes and whether μ₁ = μ₂ or μ₁ = −μ₂.
pub fn parity_classify(alpha1: f64, alpha2: f64, mu1: f64, mu2: f64) -> Result<Parity> {
    if alpha1 == 0.0 || alpha2 == 0.0 {
        return Err(Error::Domain("an amplitude vanishes; classify as an isolated point instead".into()));
    }
    if mu1 == 0.0 || mu2 == 0.0 {
        return Err(Error::Domain("dominant eigenvalue is zero".into()));
    }
    let same_amp = (alpha1 > 0.0) == (alpha2 > 0.0);
    let equal = (mu1 > 0.0) == (mu2 > 0.0);
    Ok(match (same_amp, equal) {
        (true, false) => Parity::OddN,
        (false, false) => Parity::EvenN,
        (false, true) => Parity::AllN,
        (true, true) => Parity::NonReal,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    /// Relative modulus gap below which two eigenvalues count as equal.
    pub equimodular: f64,
    /// |amplitude| below which it counts as vanishing.
    pub amplitude: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { equimodular: 1e-8, amplitude: 1e-9 }
    }
}

fn is_real(z: C) -> bool {
    z.im.abs() <= 1e-12 * z.norm().max(1.0)
}

/// Decides whether q is a limiting point of the zeros.
pub fn classify_sample(model: &SpectralModel, sample: &SpectrumSample, copts: &ClassifyOptions) -> Result<Option<LimitingFeature>> {
    if !sample.all_converged() {
        return Err(Error::NoConvergence(format!("spectrum at {} not converged", sample.q)));
    }
    let ranked = sample.ranked();
    let top = &ranked[0];
    let amp1 = model.amplitude_at(&top.id, sample.q).unwrap();
    let q = sample.q;
    if let Some(second) = ranked.get(1) {
        let gap = (top.mu.norm() - second.mu.norm()) / top.mu.norm().max(1e-300);
        if gap <= copts.equimodular {
            let amp2 = model.amplitude_at(&second.id, q).unwrap();
            let parity = if is_real(q) && is_real(top.mu) && is_real(second.mu) && top.id != second.id {
                parity_classify(amp1.re, amp2.re, top.mu.re, second.mu.re).ok()
            } else {
                None
            };
            return Ok(Some(LimitingFeature {
                kind: FeatureKind::CurveB,
                location: q,
                witnesses: vec![top.id.clone(), second.id.clone()],
                eigenvalues: vec![top.mu, second.mu],
                amplitudes: vec![amp1, amp2],
                parity,
            }));
        }
    }
    if amp1.norm() <= copts.amplitude {
        return Ok(Some(LimitingFeature {
            kind: FeatureKind::IsolatedA,
            location: q,
            witnesses: vec![top.id.clone()],
            eigenvalues: vec![top.mu],
            amplitudes: vec![amp1],
            parity: None,
        }));
    }
    Ok(None)
}

pub fn classify_point(model: &SpectralModel, q: C, opts: &EigOptions, copts: &ClassifyOptions) -> Result<Option<LimitingFeature>> {
    let sample = leading_eigs(model, q, opts);
    match sample.and_then(|s| classify_sample(model, &s, copts)) {
        Err(Error::NoConvergence(_)) => {
            let tighter = EigOptions { krylov: opts.krylov * 2, max_restarts: opts.max_restarts * 2, ..*opts };
            let s = leading_eigs(model, q, &tighter)?;
            classify_sample(model, &s, copts).map_err(|e| Error::NoConvergence(format!("unresolved: {e}")))
        }
        other => other,
    }
}

/// Result of locating a real crossing of two dominant sectors.
#[derive(Clone, Debug)]
pub struct QcResult {
    pub qc: f64,
    pub lo: f64,
    pub hi: f64,
    pub sectors: (SectorId, SectorId),
    /// Leading eigenvalue of each sector at `qc`.
    pub mu: (C, C),
    pub amplitudes: (f64, f64),
    pub parity: Option<Parity>,
    pub evaluations: usize,
}

fn top_real(solver: &mut SectorSolver<'_>, id: &SectorId, q: f64) -> Result<C> {
    let r = solver.sector_eigs(id, C::new(q, 0.0))?;
    if !r.converged {
        return Err(Error::NoConvergence(format!("sector {id} at Q = {q}")));
    }
    Ok(r.mu1)
}

/// Bisection on |μ_a| − |μ_b| where a, b are the dominant sectors at the
/// bracket ends.
pub fn find_qc(model: &SpectralModel, lo: f64, hi: f64, opts: &EigOptions) -> Result<QcResult> {
    if !(lo < hi) {
        return Err(Error::Domain(format!("empty bracket [{lo}, {hi}]")));
    }
    let mut solver = SectorSolver::new(model, *opts);
    let a = solver.sample(C::new(lo, 0.0))?.dominant().unwrap().id;
    let b = solver.sample(C::new(hi, 0.0))?.dominant().unwrap().id;
    if a == b {
        return Err(Error::NoSignChange(format!("sector {a} dominates at both ends of [{lo}, {hi}]")));
    }
    bisect_pair(&mut solver, &a, &b, lo, hi)
}

fn bisect_pair(solver: &mut SectorSolver<'_>, a: &SectorId, b: &SectorId, mut lo: f64, mut hi: f64) -> Result<QcResult> {
    let f = |s: &mut SectorSolver<'_>, q: f64| -> Result<f64> { Ok(top_real(s, a, q)?.norm() - top_real(s, b, q)?.norm()) };
    let flo = f(solver, lo)?;
    let fhi = f(solver, hi)?;
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange(format!("|mu_{a}| - |mu_{b}| has one sign on [{lo}, {hi}]")));
    }
    let mut evaluations = 2;
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let fm = f(solver, mid)?;
        evaluations += 1;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let qc = 0.5 * (lo + hi);
    let ma = top_real(solver, a, qc)?;
    let mb = top_real(solver, b, qc)?;
    let model = solver.model;
    let aa = model.amplitude_at(a, C::new(qc, 0.0)).unwrap().re;
    let ab = model.amplitude_at(b, C::new(qc, 0.0)).unwrap().re;
    let parity = if is_real(ma) && is_real(mb) { parity_classify(aa, ab, ma.re, mb.re).ok() } else { None };
    Ok(QcResult { qc, lo, hi, sectors: (a.clone(), b.clone()), mu: (ma, mb), amplitudes: (aa, ab), parity, evaluations })
}

/// Scans [from, to] with the given step and refines the largest real q at
/// which the dominant sector changes.
pub fn scan_qc(model: &SpectralModel, from: f64, to: f64, step: f64, opts: &EigOptions) -> Result<QcResult> {
    if !(step > 0.0 && from < to) {
        return Err(Error::Domain("scan needs from < to and a positive step".into()));
    }
    let mut solver = SectorSolver::new(model, *opts);
    let count = ((to - from) / step).ceil() as usize;
    let mut prev: Option<(f64, SectorId)> = None;
    let mut last: Option<(f64, f64, SectorId, SectorId)> = None;
    for i in 0..=count {
        let q = (from + i as f64 * step).min(to);
        let d = solver.sample(C::new(q, 0.0))?.dominant().unwrap().id;
        if let Some((pq, pid)) = &prev {
            if *pid != d {
                last = Some((*pq, q, pid.clone(), d.clone()));
            }
        }
        prev = Some((q, d));
    }
    let (lo, hi, a, b) = last.ok_or_else(|| Error::NoSignChange(format!("dominant sector constant on [{from}, {to}]")))?;
    bisect_pair(&mut solver, &a, &b, lo, hi)
}

/// Rectangle re0 ≤ Re Q ≤ re1, im0 ≤ Im Q ≤ im1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl std::str::FromStr for Window {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<core::result::Result<_, _>>().map_err(|_| Error::Parse(format!("window {s:?}")))?;
        if v.len() != 4 || !(v[0] < v[1] && v[2] < v[3]) {
            return Err(Error::Parse(format!("window {s:?}: expected re0,re1,im0,im1 with re0<re1, im0<im1")));
        }
        Ok(Window { re0: v[0], re1: v[1], im0: v[2], im1: v[3] })
    }
}

#[derive(Clone, Debug)]
pub struct CurvePoint {
    pub q: C,
    pub pair: (SectorId, SectorId),
}

#[derive(Clone, Debug, Default)]
pub struct CurveTrace {
    pub polylines: Vec<Vec<CurvePoint>>,
    /// Grid cells (column, row) where crossings could not be paired.
    pub unresolved: Vec<(usize, usize)>,
}

impl CurveTrace {
    pub fn points(&self) -> impl Iterator<Item = &CurvePoint> {
        self.polylines.iter().flatten()
    }

    /// Real parts of the points that lie on the real axis.
    pub fn real_crossings(&self, tol: f64) -> Vec<f64> {
        let mut v: Vec<f64> = self.points().filter(|p| p.q.im.abs() <= tol).map(|p| p.q.re).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup_by(|a, b| (*a - *b).abs() <= tol);
        v
    }
}

fn ordered_pair(a: &SectorId, b: &SectorId) -> (SectorId, SectorId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

fn bisect_segment(solver: &mut SectorSolver<'_>, a: &SectorId, b: &SectorId, z0: C, z1: C, steps: usize) -> Result<C> {
    let f = |s: &mut SectorSolver<'_>, z: C| -> Result<f64> { Ok(s.sector_eigs(a, z)?.mu1.norm() - s.sector_eigs(b, z)?.mu1.norm()) };
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let f0 = f(solver, z0)?;
    for _ in 0..steps {
        let tm = 0.5 * (t0 + t1);
        let fm = f(solver, z0 + (z1 - z0) * tm)?;
        if fm.signum() == f0.signum() {
            t0 = tm;
        } else {
            t1 = tm;
        }
    }
    Ok(z0 + (z1 - z0) * (0.5 * (t0 + t1)))
}

/// Direct search for the equimodularity curves inside `window` on a
/// (res+1)×(res+1) grid.
pub fn trace_curve(model: &SpectralModel, window: Window, res: usize, opts: &EigOptions) -> Result<CurveTrace> {
    if res == 0 {
        return Err(Error::Domain("resolution must be positive".into()));
    }
    let node = |i: usize, j: usize| {
        C::new(
            window.re0 + (window.re1 - window.re0) * i as f64 / res as f64,
            window.im0 + (window.im1 - window.im0) * j as f64 / res as f64,
        )
    };
    let nodes: Vec<(usize, usize)> = (0..=res).flat_map(|j| (0..=res).map(move |i| (i, j))).filter(|&(i, j)| node(i, j).norm() > 0.0).collect();
    let dominant: HashMap<(usize, usize), SectorId> = nodes
        .par_iter()
        .map(|&(i, j)| {
            let s = leading_eigs(model, node(i, j), opts)?;
            Ok(((i, j), s.dominant().unwrap().id))
        })
        .collect::<Result<_>>()?;
    // Edge keys: (i, j, 0) from (i,j) to (i+1,j); (i, j, 1) to (i,j+1).
    let mut edges: Vec<((usize, usize, u8), (usize, usize), (usize, usize))> = Vec::new();
    for j in 0..=res {
        for i in 0..=res {
            if i < res {
                edges.push(((i, j, 0), (i, j), (i + 1, j)));
            }
            if j < res {
                edges.push(((i, j, 1), (i, j), (i, j + 1)));
            }
        }
    }
    let crossings: BTreeMap<(usize, usize, u8), CurvePoint> = edges
        .par_iter()
        .filter_map(|(key, p0, p1)| {
            let (d0, d1) = (dominant.get(p0)?, dominant.get(p1)?);
            if d0 == d1 {
                return None;
            }
            let mut solver = SectorSolver::new(model, *opts);
            Some(bisect_segment(&mut solver, d0, d1, node(p0.0, p0.1), node(p1.0, p1.1), 40).map(|q| (*key, CurvePoint { q, pair: ordered_pair(d0, d1) })))
        })
        .collect::<Result<_>>()?;

    // Segments inside each cell; 3 or 4 crossings meet at the cell centre.
    #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
    enum Vertex {
        Edge(usize, usize, u8),
        Centre(usize, usize),
    }
    let mut pos: HashMap<Vertex, CurvePoint> = HashMap::new();
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    let mut trace = CurveTrace::default();
    for j in 0..res {
        for i in 0..res {
            let sides = [(i, j, 0u8), (i, j + 1, 0u8), (i, j, 1u8), (i + 1, j, 1u8)];
            let hit: Vec<Vertex> = sides.iter().filter(|s| crossings.contains_key(s)).map(|&(a, b, c)| Vertex::Edge(a, b, c)).collect();
            for v in &hit {
                if let Vertex::Edge(a, b, c) = v {
                    pos.insert(*v, crossings[&(*a, *b, *c)].clone());
                }
            }
            match hit.len() {
                0 => {}
                1 => trace.unresolved.push((i, j)),
                2 => {
                    adj.entry(hit[0]).or_default().push(hit[1]);
                    adj.entry(hit[1]).or_default().push(hit[0]);
                }
                _ => {
                    let c = Vertex::Centre(i, j);
                    let pts: Vec<&CurvePoint> = hit.iter().map(|v| &pos[v]).collect();
                    let mid = pts.iter().map(|p| p.q).sum::<C>() / hit.len() as f64;
                    pos.insert(c, CurvePoint { q: mid, pair: pts[0].pair.clone() });
                    for v in &hit {
                        adj.entry(c).or_default().push(*v);
                        adj.entry(*v).or_default().push(c);
                    }
                }
            }
        }
    }
    // Chain into polylines: open chains from vertices of degree ≠ 2, then loops.
    let mut used: std::collections::HashSet<(Vertex, Vertex)> = Default::default();
    let starts: Vec<Vertex> = adj.iter().filter(|(_, n)| n.len() != 2).map(|(v, _)| *v).chain(adj.keys().copied()).collect();
    for s in starts {
        let nbrs = adj[&s].clone();
        for first in nbrs {
            if used.contains(&(s, first)) {
                continue;
            }
            let mut line = vec![pos[&s].clone()];
            let (mut prev, mut cur) = (s, first);
            loop {
                used.insert((prev, cur));
                used.insert((cur, prev));
                line.push(pos[&cur].clone());
                let next = adj[&cur].iter().copied().find(|n| !used.contains(&(cur, *n)));
                match next {
                    Some(n) if adj[&cur].len() == 2 => {
                        prev = cur;
                        cur = n;
                    }
                    _ => break,
                }
            }
            trace.polylines.push(line);
        }
    }
    Ok(trace)
}

/// Directions arg Q at which the dominant sector changes on |Q| = radius.
pub fn asymptotic_angles(model: &SpectralModel, radius: f64, samples: usize, opts: &EigOptions) -> Result<Vec<f64>> {
    use std::f64::consts::PI;
    let at = |t: f64| C::from_polar(radius, t);
    let dom: Vec<SectorId> = (0..samples)
        .into_par_iter()
        .map(|i| Ok(leading_eigs(model, at(-PI + 2.0 * PI * i as f64 / samples as f64), opts)?.dominant().unwrap().id))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut solver = SectorSolver::new(model, *opts);
    for i in 0..samples {
        let n = (i + 1) % samples;
        if dom[i] != dom[n] {
            let t0 = -PI + 2.0 * PI * i as f64 / samples as f64;
            let t1 = t0 + 2.0 * PI / samples as f64;
            let f = |s: &mut SectorSolver<'_>, t: f64| -> Result<f64> { Ok(s.sector_eigs(&dom[i], at(t))?.mu1.norm() - s.sector_eigs(&dom[n], at(t))?.mu1.norm()) };
            let (mut a, mut b) = (t0, t1);
            let fa = f(&mut solver, a)?;
            for _ in 0..40 {
                let m = 0.5 * (a + b);
                if f(&mut solver, m)?.signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            let t = 0.5 * (a + b);
            out.push(if t >= PI { t - 2.0 * PI } else { t });
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Least-squares a + b/k + c/k² for one parity class.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticFit {
    pub ks: Vec<usize>,
    /// [constant, 1/k, 1/k²].
    pub coeffs: [f64; 3],
    pub rms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub even: QuadraticFit,
    pub odd: QuadraticFit,
    pub limit: f64,
    pub spread: f64,
}

fn fit_quadratic(points: &[(usize, f64)]) -> Result<QuadraticFit> {
    if points.len() < 3 {
        return Err(Error::Domain(format!("need at least 3 points for a quadratic fit, got {}", points.len())));
    }
    let a = DMatrix::from_fn(points.len(), 3, |r, c| (1.0 / points[r].0 as f64).powi(c as i32));
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&y, 1e-14).map_err(|e| Error::Domain(e.to_string()))?;
    let r = &a * &x - &y;
    Ok(QuadraticFit { ks: points.iter().map(|p| p.0).collect(), coeffs: [x[0], x[1], x[2]], rms: (r.norm_squared() / points.len() as f64).sqrt() })
}

/// Separate quadratic fits in 1/k over even and odd k ≥ `k_min`.
pub fn extrapolate_qc(table: &BTreeMap<usize, f64>, k_min: usize) -> Result<FitReport> {
    let pick = |parity: usize| -> Vec<(usize, f64)> { table.iter().filter(|(k, _)| **k >= k_min.max(1) && **k % 2 == parity).map(|(k, v)| (*k, *v)).collect() };
    let even = fit_quadratic(&pick(0)).map_err(|e| Error::Domain(format!("even fit: {e}")))?;
    let odd = fit_quadratic(&pick(1)).map_err(|e| Error::Domain(format!("odd fit: {e}")))?;
    let limit = 0.5 * (even.coeffs[0] + odd.coeffs[0]);
    let spread = (even.coeffs[0] - odd.coeffs[0]).abs();
    Ok(FitReport { even, odd, limit, spread })
}

/// Published Q_c(k), k = 1..11.
pub const QC_TABLE: [(usize, f64); 11] = [
    (1, 3.0),
    (2, 3.6180339887),
    (3, 3.7818423129),
    (4, 4.5697435537),
    (5, 4.9029018077),
    (6, 5.1079785012),
    (7, 5.2352605291),
    (8, 5.3246966903),
    (9, 5.3886186958),
    (10, 5.4364766073),
    (11, 5.4729804532),
];

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn k1_eigenvalues() {
        let m = SpectralModel::build(1, Selection::All).unwrap();
        for q in [c(2.5), c(7.0), C::new(1.0, 2.0)] {
            let s = leading_eigs(&m, q, &EigOptions::default()).unwrap();
            let zero = s.record(&SectorId::block(0, YoungDiagram::empty())).unwrap();
            let one = s.record(&SectorId::block(1, YoungDiagram::row(1))).unwrap();
            assert!((zero.mu1 - (q - 2.0)).norm() < 1e-12, "{:?}", zero);
            assert!((one.mu1 - (q - 3.0)).norm() < 1e-12, "{:?}", one);
            assert_eq!(s.record(&SectorId::Trivial).unwrap().mu1, c(-1.0));
        }
    }

    #[test]
    fn sector_id_round_trip() {
        for s in ["trivial", "(0)", "(3,(3))", "(2,(1,1))"] {
            let id: SectorId = s.parse().unwrap();
            assert_eq!(id.to_string(), s);
        }
        assert_eq!("3,(3)".parse::<SectorId>().unwrap().to_string(), "(3,(3))");
        assert!("(3,(2))".parse::<SectorId>().is_err());
    }

    #[test]
    fn arnoldi_matches_dense() {
        let m = SpectralModel::build(4, Selection::All).unwrap();
        let q = C::new(3.7, 0.4);
        let id = SectorId::block(2, YoungDiagram::row(2));
        let block = m.sector(&id).unwrap().block.as_ref().unwrap();
        let t = block.evaluate_in(&ComplexField, &q, Normalisation::Hat).unwrap();
        let n = t.dim();
        let dense = DMatrix::from_row_slice(n, n, &t.to_dense(&ComplexField));
        let ev = dense_eigenvalues(&dense);
        let op = |x: &[C]| apply_tiled(&t, x);
        let r = arnoldi_top(n, &op, 2, &EigOptions { krylov: 20, ..Default::default() }, None);
        assert!(r.converged);
        assert!((r.values[0] - ev[0]).norm() < 1e-8 * ev[0].norm());
        assert!((r.values[1] - ev[1]).norm() < 1e-8 * ev[1].norm());
    }

    #[test]
    fn parity_table() {
        assert_eq!(parity_classify(1.0, 2.0, 3.0, -3.0).unwrap(), Parity::OddN);
        assert_eq!(parity_classify(1.0, -2.0, 3.0, -3.0).unwrap(), Parity::EvenN);
        assert_eq!(parity_classify(-1.0, 2.0, 3.0, 3.0).unwrap(), Parity::AllN);
        assert_eq!(parity_classify(1.0, 2.0, -3.0, -3.0).unwrap(), Parity::NonReal);
        assert!(parity_classify(0.0, 2.0, 3.0, 3.0).is_err());
    }

    #[test]
    fn qc_small_k() {
        let opts = EigOptions::default();
        let m1 = SpectralModel::build(1, Selection::All).unwrap();
        assert!((scan_qc(&m1, 1.5, 6.0, 0.1, &opts).unwrap().qc - 3.0).abs() < 1e-9);
        let m2 = SpectralModel::build(2, Selection::All).unwrap();
        assert!((scan_qc(&m2, 1.5, 6.0, 0.1, &opts).unwrap().qc - 3.6180339887).abs() < 1e-8);
    }

    #[test]
    fn fits() {
        let table: BTreeMap<usize, f64> = QC_TABLE.iter().copied().collect();
        let r = extrapolate_qc(&table, 4).unwrap();
        assert!((r.limit - 5.75).abs() < 0.02 && r.spread < 0.04, "{r:?}");
        let flat: BTreeMap<usize, f64> = (1..=8).map(|k| (k, 2.0)).collect();
        let r = extrapolate_qc(&flat, 1).unwrap();
        assert!((r.limit - 2.0).abs() < 1e-12 && r.even.coeffs[2].abs() < 1e-9);
        let odd: BTreeMap<usize, f64> = [(1, 1.0), (3, 1.0), (5, 1.0)].into_iter().collect();
        assert!(extrapolate_qc(&odd, 1).is_err());
    }
}
