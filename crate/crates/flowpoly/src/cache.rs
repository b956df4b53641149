//! Persistent trace cache and evaluation-plan overrides.
//!
//! File layout (all integers little endian):
//!
//! ```text
//! "FPTRACE\0"  u32 version
//! u32 len, key bytes (utf-8)
//! u32 count, then count × (numerator, denominator)
//!   big integer = u8 sign (0 zero, 1 positive, 2 negative), u32 len, magnitude bytes
//! 32-byte SHA-256 of everything above
//! ```
//!
//! A file whose digest or key does not match is ignored and recomputed.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use anyhow::{bail, Context, Result};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use sha2::{Digest, Sha256};

use flowpoly_core::trace::{degree_bound, primes_desc, EvaluationPlan, MemoryCache, TraceCache, TraceKey};
use flowpoly_core::transfer::TransferBlock;
use flowpoly_core::RatPoly;

pub const MAGIC: &[u8; 8] = b"FPTRACE\0";
pub const CACHE_VERSION: u32 = 1;
pub const ENV_VAR: &str = "FLOWPOLY_CACHE";

/// Replacement prime count and point count for every trace computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlanOverride {
    pub primes: Option<usize>,
    pub points: Option<usize>,
}

impl PlanOverride {
    pub fn plan_for(&self, block: &TransferBlock, n: usize) -> flowpoly_core::Result<EvaluationPlan> {
        let mut plan = EvaluationPlan::default_for(block, n)?;
        if let Some(p) = self.primes {
            plan.primes = primes_desc(p);
        }
        if let Some(m) = self.points {
            let d = degree_bound(block.k, block.l, n);
            if m < d + 2 {
                return Err(flowpoly_core::Error::Domain(format!(
                    "--points {m} is too few for block ({},{}) at n = {n}: degree {d} needs {}",
                    block.l,
                    block.lam,
                    d + 2
                )));
            }
            plan.points = (1..=m as i64).collect();
            plan.scaling = vec![1; m];
        }
        Ok(plan)
    }
}

pub fn key_string(key: &TraceKey) -> String {
    format!("k={};l={};lam={};deflated={};n={}", key.k, key.l, key.lam, u8::from(key.deflated), key.n)
}

fn put_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_le_bytes());
}

fn put_big(out: &mut Vec<u8>, x: &BigInt) {
    let (sign, mag) = x.to_bytes_le();
    out.push(match sign {
        Sign::NoSign => 0,
        Sign::Plus => 1,
        Sign::Minus => 2,
    });
    let mag: &[u8] = if sign == Sign::NoSign { &[] } else { &mag };
    put_u32(out, mag.len() as u32);
    out.extend_from_slice(mag);
}

pub fn encode(key: &TraceKey, poly: &RatPoly) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, CACHE_VERSION);
    let k = key_string(key);
    put_u32(&mut out, k.len() as u32);
    out.extend_from_slice(k.as_bytes());
    put_u32(&mut out, poly.coeffs().len() as u32);
    for c in poly.coeffs() {
        put_big(&mut out, c.numer());
        put_big(&mut out, c.denom());
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.at < n {
            bail!("truncated cache file");
        }
        let s = &self.buf[self.at..self.at + n];
        self.at += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn big(&mut self) -> Result<BigInt> {
        let sign = match self.take(1)?[0] {
            0 => Sign::NoSign,
            1 => Sign::Plus,
            2 => Sign::Minus,
            s => bail!("bad sign byte {s}"),
        };
        let len = self.u32()? as usize;
        let mag = self.take(len)?;
        Ok(BigInt::from_bytes_le(sign, mag))
    }
}

/// Parses and verifies a cache file; returns the stored key and polynomial.
pub fn decode(bytes: &[u8]) -> Result<(String, RatPoly)> {
    if bytes.len() < MAGIC.len() + 4 + 32 {
        bail!("cache file too short");
    }
    let (body, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        bail!("cache digest mismatch");
    }
    let mut r = Reader { buf: body, at: 0 };
    if r.take(8)? != MAGIC {
        bail!("not a trace cache file");
    }
    let v = r.u32()?;
    if v != CACHE_VERSION {
        bail!("cache version {v}, expected {CACHE_VERSION}");
    }
    let klen = r.u32()? as usize;
    let key = String::from_utf8(r.take(klen)?.to_vec()).context("cache key is not utf-8")?;
    let count = r.u32()? as usize;
    let mut coeffs = Vec::with_capacity(count);
    for _ in 0..count {
        let num = r.big()?;
        let den = r.big()?;
        if den == BigInt::from(0) {
            bail!("zero denominator");
        }
        coeffs.push(BigRational::new(num, den));
    }
    if r.at != body.len() {
        bail!("trailing bytes in cache file");
    }
    Ok((key, RatPoly::from_coeffs(coeffs)))
}

#[derive(Debug, Default)]
pub struct CacheStats {
    pub hits: AtomicUsize,
    pub misses: AtomicUsize,
    pub rejected: AtomicUsize,
    pub write_errors: AtomicUsize,
}

/// In-memory traces backed by an optional directory, plus plan overrides.
pub struct TraceStore {
    dir: Option<PathBuf>,
    memory: MemoryCache,
    pub overrides: PlanOverride,
    pub stats: CacheStats,
}

impl TraceStore {
    pub fn in_memory() -> Self {
        TraceStore { dir: None, memory: MemoryCache::default(), overrides: PlanOverride::default(), stats: CacheStats::default() }
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into().join(format!("v{CACHE_VERSION}"));
        std::fs::create_dir_all(&dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(TraceStore { dir: Some(dir), ..Self::in_memory() })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path_for(&self, key: &TraceKey) -> Option<PathBuf> {
        let h = Sha256::digest(key_string(key).as_bytes());
        self.dir.as_ref().map(|d| d.join(format!("{}.trace", hex::encode(&h[..16]))))
    }

    fn load(&self, key: &TraceKey) -> Option<RatPoly> {
        let path = self.path_for(key)?;
        let bytes = std::fs::read(&path).ok()?;
        match decode(&bytes) {
            Ok((k, p)) if k == key_string(key) => Some(p),
            _ => {
                self.stats.rejected.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    fn store(&self, key: &TraceKey, poly: &RatPoly) -> Result<()> {
        let Some(path) = self.path_for(key) else { return Ok(()) };
        let dir = path.parent().unwrap();
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&encode(key, poly))?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }
}

impl TraceCache for TraceStore {
    fn get(&self, key: &TraceKey) -> Option<RatPoly> {
        if let Some(p) = self.memory.get(key) {
            self.stats.hits.fetch_add(1, Ordering::Relaxed);
            return Some(p);
        }
        match self.load(key) {
            Some(p) => {
                self.stats.hits.fetch_add(1, Ordering::Relaxed);
                self.memory.put(key, &p);
                Some(p)
            }
            None => {
                self.stats.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    fn put(&self, key: &TraceKey, poly: &RatPoly) {
        self.memory.put(key, poly);
        if let Err(e) = self.store(key, poly) {
            if self.stats.write_errors.fetch_add(1, Ordering::Relaxed) == 0 {
                eprintln!("warning: trace cache write failed: {e:#}");
            }
        }
    }

    fn plan(&self, block: &TransferBlock, n: usize) -> flowpoly_core::Result<EvaluationPlan> {
        self.overrides.plan_for(block, n)
    }
}

/// `$FLOWPOLY_CACHE`, else `$XDG_CACHE_HOME/flowpoly`, else `~/.cache/flowpoly`.
pub fn default_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(ENV_VAR).filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d).join("flowpoly"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("flowpoly"))
}
