//! Exact traces tr(T̂ⁿ) per block: modular evaluation at integer Q,
//! Chinese remaindering and interpolation.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::YoungDiagram;
use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, PrimeField};
use crate::perm::Perm;
use crate::poly::RatPoly;
use crate::transfer::{is_prime, Normalisation, TransferBlock};

/// n·(k + min(1−ℓ, 0)).
pub fn degree_bound(k: usize, l: usize, n: usize) -> usize {
    if l <= 1 {
        n * k
    } else {
        n * (k + 1).saturating_sub(l)
    }
}

/// Primes below 2^16 in decreasing order.
pub fn primes_desc(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = 65521u64;
    while out.len() < count && p > 1000 {
        if is_prime(p) {
            out.push(p);
        }
        p -= 2;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceKey {
    pub k: usize,
    pub l: usize,
    pub lam: String,
    pub deflated: bool,
    pub n: usize,
}

impl TraceKey {
    pub fn of(block: &TransferBlock, n: usize) -> Self {
        TraceKey { k: block.k, l: block.l, lam: block.lam.to_string(), deflated: block.is_deflated(), n }
    }

    pub fn diagram(&self) -> Result<YoungDiagram> {
        self.lam.parse()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TracePolynomial {
    pub key: TraceKey,
    pub poly: RatPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationPlan {
    pub points: Vec<i64>,
    pub primes: Vec<u64>,
    /// Per-point clearing factor; all ones since traces of T̂ⁿ are integers.
    pub scaling: Vec<u64>,
}

/// log2 of dim·‖T̂(q)‖^n using the max-row-sum norm in floating point.
pub fn log2_magnitude(block: &TransferBlock, n: usize, q: i64) -> Result<f64> {
    let f = ComplexField;
    let m = block.evaluate_in(&f, &num_complex::Complex64::new(q as f64, 0.0), Normalisation::Hat)?;
    let d = m.tile;
    let mut row_sum = vec![0.0f64; m.dim()];
    for col in &m.cols {
        for (r, t) in col {
            for a in 0..d {
                let s: f64 = t[a * d..(a + 1) * d].iter().map(|z| z.norm()).sum();
                row_sum[*r as usize * d + a] += s;
            }
        }
    }
    let norm = row_sum.iter().cloned().fold(0.0, f64::max).max(1.0) * 1.001;
    Ok((m.dim().max(1) as f64).log2() + n as f64 * norm.log2())
}

impl EvaluationPlan {
    /// Points 1..d+2 and enough primes for the largest point, plus one.
    pub fn default_for(block: &TransferBlock, n: usize) -> Result<Self> {
        let d = degree_bound(block.k, block.l, n);
        let points: Vec<i64> = (1..=d as i64 + 2).collect();
        let top = *points.last().unwrap();
        let bits = log2_magnitude(block, n, top)?.max(log2_magnitude(block, n, 1)?) + 2.0;
        let per = (65000f64).log2();
        let need = (bits / per).ceil() as usize + 1;
        Ok(EvaluationPlan { scaling: vec![1; points.len()], points, primes: primes_desc(need + 1) })
    }
}

/// Flattened block data, reusable across primes and points.
struct ModularForm {
    dim: usize,
    tile: usize,
    k: usize,
    /// (row orbit position, col orbit position, perm id, weight)
    entries: Vec<(u32, u32, u32, Vec<i128>)>,
    rho: Vec<Vec<BigRational>>,
}

impl ModularForm {
    fn new(block: &TransferBlock) -> Self {
        let s = block.sector();
        let rows = block.orbit_rows();
        let pos: HashMap<u32, u32> = rows.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
        let mut perm_id: HashMap<Perm, u32> = HashMap::new();
        let mut rho = Vec::new();
        let mut memo = HashMap::new();
        let mut entries = Vec::new();
        for (c, &r) in rows.iter().enumerate() {
            for e in s.column(r as usize) {
                let Some(&row) = pos.get(&e.row) else { continue };
                let id = *perm_id.entry(e.perm).or_insert_with(|| {
                    rho.push(block.irrep().matrix(&e.perm.inverse(), &mut memo).a);
                    rho.len() as u32 - 1
                });
                entries.push((row, c as u32, id, e.weight.clone()));
            }
        }
        ModularForm { dim: block.dimension(), tile: block.tile(), k: block.k, entries, rho }
    }

    /// Dense row-major T̂(q) mod p.
    fn dense(&self, q: i64, p: u64) -> Result<Vec<u64>> {
        let f = PrimeField::new(p);
        let qm = f.from_i128(q as i128);
        let q2k = f.pow(&qm, 2 * self.k as u64);
        let mut scale = f.inv(&q2k).ok_or(Error::BadPrime(p))?;
        if self.k % 2 == 1 {
            scale = f.neg(&scale);
        }
        let rho: Vec<Vec<u64>> = self
            .rho
            .iter()
            .map(|m| m.iter().map(|x| f.from_rational(x)).collect::<Option<Vec<_>>>().ok_or(Error::BadPrime(p)))
            .collect::<Result<_>>()?;
        let n = self.dim;
        let d = self.tile;
        let mut m = vec![0u64; n * n];
        for (r, c, id, w) in &self.entries {
            let wv = f.mul(&f.eval_i128(w, &qm), &scale);
            if wv == 0 {
                continue;
            }
            let t = &rho[*id as usize];
            for a in 0..d {
                for b in 0..d {
                    let idx = (*r as usize * d + a) * n + *c as usize * d + b;
                    m[idx] = (m[idx] + wv * t[a * d + b]) % p;
                }
            }
        }
        Ok(m)
    }
}

/// Dense row-major T̂(q) mod p for a prime p < 2^31.
pub fn dense_mod(block: &TransferBlock, q: i64, p: u64) -> Result<Vec<u64>> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(Error::BadPrime(p));
    }
    if q.rem_euclid(p as i64) == 0 {
        return Err(Error::Domain(format!("Q = {q} vanishes modulo {p}")));
    }
    ModularForm::new(block).dense(q, p)
}

/// Row-major product mod p < 2^16 with delayed reduction.
fn matmul_mod(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut bt = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            bt[j * n + i] = b[i * n + j];
        }
    }
    let mut c = vec![0u64; n * n];
    c.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
        let ai = &a[i * n..(i + 1) * n];
        for (j, out) in row.iter_mut().enumerate() {
            let bj = &bt[j * n..(j + 1) * n];
            let s: u64 = ai.iter().zip(bj).map(|(x, y)| x * y).sum();
            *out = s % p;
        }
    });
    c
}

fn identity_mod(n: usize) -> Vec<u64> {
    let mut m = vec![0u64; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn pow_mod(m: &[u64], n: usize, mut e: usize, p: u64) -> Vec<u64> {
    let mut acc = identity_mod(n);
    let mut base = m.to_vec();
    let mut first = true;
    while e > 0 {
        if e & 1 == 1 {
            acc = if first { base.clone() } else { matmul_mod(&acc, &base, n, p) };
            first = false;
        }
        e >>= 1;
        if e > 0 {
            base = matmul_mod(&base, &base, n, p);
        }
    }
    acc
}

/// tr(M^e) mod p for a dense matrix, splitting e = a + b.
fn trace_power_dense(m: &[u64], n: usize, e: usize, p: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    if e == 0 {
        return n as u64 % p;
    }
    let a = e / 2;
    let b = e - a;
    let mb = pow_mod(m, n, b, p);
    if a == 0 {
        return (0..n).map(|i| mb[i * n + i]).sum::<u64>() % p;
    }
    let ma = if a == b { mb.clone() } else { pow_mod(m, n, a, p) };
    let mut s = 0u64;
    for i in 0..n {
        let mut row = 0u64;
        for j in 0..n {
            row += ma[i * n + j] * mb[j * n + i];
        }
        s = (s + row % p) % p;
    }
    s
}

/// tr(T̂(q)ⁿ) mod p by dense powering.
pub fn trace_mod(block: &TransferBlock, n: usize, q: i64, p: u64) -> Result<u64> {
    check_pair(q, p)?;
    let form = ModularForm::new(block);
    let m = form.dense(q, p)?;
    Ok(trace_power_dense(&m, form.dim, n, p))
}

/// Same value accumulated basis vector by basis vector with n sparse
/// applications each.
pub fn trace_mod_matrix_free(block: &TransferBlock, n: usize, q: i64, p: u64) -> Result<u64> {
    check_pair(q, p)?;
    let f = PrimeField::new(p);
    let m = block.evaluate_in(&f, &f.from_i128(q as i128), Normalisation::Hat)?;
    let dim = m.dim();
    let mut total = 0u64;
    for e in 0..dim {
        let mut v = vec![0u64; dim];
        v[e] = 1;
        for _ in 0..n {
            v = m.apply(&f, &v);
        }
        total = f.add(&total, &v[e]);
    }
    Ok(if n == 0 { dim as u64 % p } else { total })
}

fn check_pair(q: i64, p: u64) -> Result<()> {
    if !is_prime(p) || p >= 1 << 16 {
        return Err(Error::BadPrime(p));
    }
    if q.rem_euclid(p as i64) == 0 {
        return Err(Error::Domain(format!("Q = {q} vanishes modulo {p}")));
    }
    Ok(())
}

/// Symmetric-range CRT over all primes but the last, which is a checksum.
pub fn crt_reconstruct(residues: &BTreeMap<u64, u64>) -> Result<BigInt> {
    if residues.len() < 2 {
        return Err(Error::Domain("need at least one prime plus a checksum prime".into()));
    }
    let mut items: Vec<(u64, u64)> = residues.iter().map(|(&p, &r)| (p, r)).collect();
    // The smallest prime is held back for the check.
    items.sort_by(|a, b| b.0.cmp(&a.0));
    let (check_p, check_r) = items.pop().unwrap();
    let (x, m) = crt_all(&items);
    let half = &m >> 1;
    let x = if x > half { x - &m } else { x };
    let got = x.mod_floor(&BigInt::from(check_p));
    if got != BigInt::from(check_r) {
        return Err(Error::Checksum(format!("CRT checksum prime {check_p} disagrees: prime budget exceeded")));
    }
    Ok(x)
}

/// Garner-free incremental CRT: returns (x mod M, M).
fn crt_all(items: &[(u64, u64)]) -> (BigInt, BigInt) {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for &(p, r) in items {
        let pb = BigInt::from(p);
        let f = PrimeField::new(p);
        let xm = f.reduce_big(&x);
        let mm = f.reduce_big(&m);
        let t = f.mul(&f.sub(&(r % p), &xm), &f.inv(&mm).expect("pairwise distinct primes"));
        x += &m * BigInt::from(t);
        m *= pb;
    }
    (x, m)
}

/// Degree-≤d interpolant through the first d+1 points; the rest are checked.
pub fn interpolate(values: &[(i64, BigRational)], d: usize) -> Result<RatPoly> {
    if values.len() < d + 1 {
        return Err(Error::Domain(format!("{} points cannot fix degree {d}", values.len())));
    }
    let (base, extra) = values.split_at(d + 1);
    // Newton divided differences.
    let xs: Vec<BigRational> = base.iter().map(|(x, _)| BigRational::from_integer(BigInt::from(*x))).collect();
    let mut coef: Vec<BigRational> = base.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..coef.len() {
        for i in (j..coef.len()).rev() {
            let den = &xs[i] - &xs[i - j];
            if den.is_zero() {
                return Err(Error::Domain("repeated interpolation point".into()));
            }
            coef[i] = (&coef[i] - &coef[i - 1]) / den;
        }
    }
    let mut p = RatPoly::zero();
    for i in (0..coef.len()).rev() {
        p = &(&p * &RatPoly::from_coeffs(vec![-xs[i].clone(), BigRational::one()])) + &RatPoly::constant(coef[i].clone());
    }
    for (x, y) in extra {
        let v = p.eval(&BigRational::from_integer(BigInt::from(*x)));
        if &v != y {
            return Err(Error::Checksum(format!("interpolation checksum failed at Q = {x}")));
        }
    }
    Ok(p)
}

/// Storage for reconstructed traces. Misses are computed under `plan`.
pub trait TraceCache: Sync {
    fn get(&self, key: &TraceKey) -> Option<RatPoly>;
    fn put(&self, key: &TraceKey, poly: &RatPoly);
    fn plan(&self, block: &TransferBlock, n: usize) -> Result<EvaluationPlan> {
        EvaluationPlan::default_for(block, n)
    }
}

#[derive(Default)]
pub struct MemoryCache {
    map: Mutex<HashMap<TraceKey, RatPoly>>,
}

impl TraceCache for MemoryCache {
    fn get(&self, key: &TraceKey) -> Option<RatPoly> {
        self.map.lock().unwrap().get(key).cloned()
    }
    fn put(&self, key: &TraceKey, poly: &RatPoly) {
        self.map.lock().unwrap().insert(key.clone(), poly.clone());
    }
}

pub struct NoCache;

impl TraceCache for NoCache {
    fn get(&self, _: &TraceKey) -> Option<RatPoly> {
        None
    }
    fn put(&self, _: &TraceKey, _: &RatPoly) {}
}

/// Reconstructs tr(T̂ⁿ) under `plan`; the trace is an integer at every point.
pub fn trace_with_plan(block: &TransferBlock, n: usize, plan: &EvaluationPlan) -> Result<RatPoly> {
    let d = degree_bound(block.k, block.l, n);
    if plan.points.len() < d + 2 {
        return Err(Error::Domain(format!("plan has {} points, degree {d} needs {}", plan.points.len(), d + 2)));
    }
    if block.dimension() == 0 {
        return Ok(RatPoly::zero());
    }
    let form = ModularForm::new(block);
    let pairs: Vec<(usize, u64)> =
        (0..plan.points.len()).flat_map(|i| plan.primes.iter().map(move |&p| (i, p))).collect();
    let residues: Vec<Result<u64>> = pairs
        .par_iter()
        .map(|&(i, p)| {
            let q = plan.points[i];
            check_pair(q, p)?;
            let m = form.dense(q, p)?;
            Ok(trace_power_dense(&m, form.dim, n, p))
        })
        .collect();
    let mut per_point: Vec<BTreeMap<u64, u64>> = vec![BTreeMap::new(); plan.points.len()];
    for (&(i, p), r) in pairs.iter().zip(residues) {
        match r {
            Ok(v) => {
                per_point[i].insert(p, v);
            }
            // A rejected (q, p) pair only shrinks that point's prime set.
            Err(Error::BadPrime(_)) | Err(Error::Domain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let values = per_point
        .iter()
        .zip(&plan.points)
        .map(|(res, &q)| Ok((q, BigRational::from_integer(crt_reconstruct(res)?))))
        .collect::<Result<Vec<_>>>()?;
    interpolate(&values, d)
}

pub fn trace_polynomial(block: &TransferBlock, n: usize, cache: &dyn TraceCache) -> Result<TracePolynomial> {
    let key = TraceKey::of(block, n);
    if let Some(p) = cache.get(&key) {
        return Ok(TracePolynomial { key, poly: p });
    }
    let plan = cache.plan(block, n)?;
    let poly = trace_with_plan(block, n, &plan)?;
    cache.put(&key, &poly);
    Ok(TracePolynomial { key, poly })
}

/// Exact rational evaluation of tr(T̂(q)ⁿ), for cross-checks on small blocks.
pub fn trace_exact_at(block: &TransferBlock, n: usize, q: &BigRational) -> Result<BigRational> {
    let f = crate::field::RationalField;
    let m = block.evaluate_in(&f, q, Normalisation::Hat)?;
    let dim = m.dim();
    let dense = m.to_dense(&f);
    let mut acc: Vec<BigRational> = (0..dim * dim).map(|i| if i % (dim + 1) == 0 { BigRational::one() } else { BigRational::zero() }).collect();
    for _ in 0..n {
        let mut next = vec![BigRational::zero(); dim * dim];
        for i in 0..dim {
            for t in 0..dim {
                let a = &acc[i * dim + t];
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = &dense[t * dim + j];
                    if !b.is_zero() {
                        next[i * dim + j] += a * b;
                    }
                }
            }
        }
        acc = next;
    }
    Ok((0..dim).map(|i| acc[i * dim + i].clone()).sum())
}

/// Numerical sanity value of a residue lift, used in diagnostics.
pub fn lift_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{build_block, deflate_trivial};
    use crate::poly::IntPoly;

    #[test]
    fn degree_bounds() {
        assert_eq!(degree_bound(7, 0, 17), 119);
        assert_eq!(degree_bound(4, 2, 3), 9);
        assert_eq!(degree_bound(3, 1, 2), 6);
        for k in 1..8 {
            assert_eq!(degree_bound(k, k + 1, 5), 0);
        }
    }

    #[test]
    fn crt_roundtrip_and_fault() {
        let mut r = BTreeMap::new();
        for p in [65521u64, 65519] {
            r.insert(p, PrimeField::new(p).from_i128(-7));
        }
        let mut three = r.clone();
        three.insert(65497, PrimeField::new(65497).from_i128(-7));
        assert_eq!(crt_reconstruct(&three).unwrap(), BigInt::from(-7));
        let big = BigInt::from(10).pow(300) - 12345;
        let primes = primes_desc(66);
        let mut res: BTreeMap<u64, u64> = primes.iter().map(|&p| (p, PrimeField::new(p).reduce_big(&big))).collect();
        assert_eq!(crt_reconstruct(&res).unwrap(), big);
        let p0 = primes[10];
        *res.get_mut(&p0).unwrap() += 1;
        assert!(matches!(crt_reconstruct(&res), Err(Error::Checksum(_))));
        assert!(crt_reconstruct(&r).is_ok());
    }

    #[test]
    fn interpolation() {
        let target = IntPoly::from_i64(&[-2, 1]).pow(4).to_rat();
        let vals: Vec<(i64, BigRational)> =
            (1..=6).map(|q| (q, target.eval(&BigRational::from_integer(q.into())))).collect();
        assert_eq!(interpolate(&vals, 4).unwrap(), RatPoly::from_ints(&[16, -32, 24, -8, 1]));
        let c: Vec<(i64, BigRational)> = (1..=2).map(|q| (q, BigRational::from_integer(5.into()))).collect();
        assert_eq!(interpolate(&c, 0).unwrap(), RatPoly::from_ints(&[5]));
        let mut bad = vals.clone();
        bad[5].1 += BigRational::one();
        assert!(matches!(interpolate(&bad, 4), Err(Error::Checksum(_))));
    }

    #[test]
    fn small_block_traces() {
        let b = build_block(1, 0, &YoungDiagram::empty()).unwrap();
        for p in [65521, 65519] {
            assert_eq!(trace_mod(&b, 4, 5, p).unwrap(), 81);
        }
        let b1 = deflate_trivial(&build_block(1, 1, &YoungDiagram::row(1)).unwrap()).unwrap();
        let t = trace_polynomial(&b1, 3, &NoCache).unwrap();
        assert_eq!(t.poly, IntPoly::from_i64(&[-3, 1]).pow(3).to_rat());
        for lam in crate::combinatorics::partitions(3) {
            let b = build_block(2, 3, &lam).unwrap();
            let t = trace_polynomial(&b, 3, &NoCache).unwrap();
            let dim = b.dimension() as i64;
            assert_eq!(t.poly, RatPoly::from_ints(&[dim]));
        }
    }

    #[test]
    fn modular_routes_agree() {
        for k in 1..=3 {
            for b in crate::transfer::all_blocks(k).unwrap() {
                let b = if b.l > 0 { deflate_trivial(&b).unwrap() } else { b };
                for n in [1, 2, 5] {
                    let dense = trace_mod(&b, n, 7, 65519).unwrap();
                    let free = trace_mod_matrix_free(&b, n, 7, 65519).unwrap();
                    assert_eq!(dense, free);
                }
                if k <= 2 {
                    let q = BigRational::from_integer(4.into());
                    let exact = trace_exact_at(&b, 4, &q).unwrap();
                    assert!(exact.is_integer());
                    let t = trace_polynomial(&b, 4, &NoCache).unwrap();
                    assert_eq!(t.poly.eval(&q), exact);
                }
            }
        }
    }
}
