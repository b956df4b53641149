//! Polynomial zeros: Aberth iteration in multiprecision with inclusion
//! disks, exact rational evaluation and Sturm counts.

use std::cmp::Ordering;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use dashu_base::{BitTest, UnsignedAbs};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{IntPoly, RatPoly};
use crate::structure::{mod_derivative, mod_gcd};

pub type Float = FBig<HalfEven, 2>;

pub fn evaluate_exact(poly: &IntPoly, q: &BigRational) -> BigRational {
    poly.eval_rat(q)
}

pub fn sign_of(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn big_to_ibig(x: &BigInt) -> IBig {
    IBig::from_le_bytes(&x.to_signed_bytes_le())
}

pub fn float_from_big(x: &BigInt, prec: usize) -> Float {
    Float::from(big_to_ibig(x)).with_precision(prec).value()
}

pub fn float_from_f64(x: f64, prec: usize) -> Float {
    Float::try_from(x).expect("finite").with_precision(prec).value()
}

pub fn float_from_rational(x: &BigRational, prec: usize) -> Float {
    float_from_big(x.numer(), prec) / float_from_big(x.denom(), prec)
}

/// log2|x|, −∞ for zero.
pub fn log2_abs(x: &Float) -> f64 {
    let (sig, exp) = (x.repr().significand(), x.repr().exponent());
    if sig.is_zero() {
        return f64::NEG_INFINITY;
    }
    let mag = sig.unsigned_abs();
    let bits = mag.bit_len();
    let shift = bits.saturating_sub(60);
    let top: u64 = u64::try_from(&mag >> shift).unwrap();
    (top as f64).log2() + shift as f64 + exp as f64
}

pub fn float_to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

/// Decimal rendering with `digits` significant digits.
pub fn float_to_string(x: &Float, digits: usize) -> String {
    let d = x.clone().with_base_and_precision::<10>(digits.max(1)).value();
    d.to_string()
}

#[derive(Clone, Debug)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn new(re: Float, im: Float) -> Self {
        Cx { re, im }
    }
    fn zero(prec: usize) -> Self {
        Cx::new(float_from_f64(0.0, prec), float_from_f64(0.0, prec))
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Cx) -> Cx {
        Cx::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Cx) -> Cx {
        Cx::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    fn add_real(&self, r: &Float) -> Cx {
        Cx::new(&self.re + r, self.im.clone())
    }
    fn norm2(&self) -> Float {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &Cx) -> Cx {
        let d = o.norm2();
        let re = (&self.re * &o.re + &self.im * &o.im) / &d;
        let im = (&self.im * &o.re - &self.re * &o.im) / &d;
        Cx::new(re, im)
    }
    fn recip(&self) -> Cx {
        let d = self.norm2();
        Cx::new(&self.re / &d, -(&self.im / &d))
    }
    fn log2_abs(&self) -> f64 {
        0.5 * log2_abs(&self.norm2())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(float_to_f64(&self.re), float_to_f64(&self.im))
    }
    fn from_c64(w: Complex64, prec: usize) -> Cx {
        Cx::new(float_from_f64(w.re, prec), float_from_f64(w.im, prec))
    }
    fn with_precision(&self, prec: usize) -> Cx {
        Cx::new(self.re.clone().with_precision(prec).value(), self.im.clone().with_precision(prec).value())
    }
}

/// Disk guaranteed (up to the working-precision inflation) to hold one root.
#[derive(Clone, Debug)]
pub struct RootInterval {
    pub re: Float,
    pub im: Float,
    pub radius: f64,
}

impl RootInterval {
    pub fn re_f64(&self) -> f64 {
        float_to_f64(&self.re)
    }
    pub fn im_f64(&self) -> f64 {
        float_to_f64(&self.im)
    }
    /// Whether the disk meets the real axis (real coefficients then force a real root).
    pub fn is_real(&self) -> bool {
        self.im_f64().abs() <= self.radius
    }
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<RootInterval>,
    pub digits: usize,
    pub precision_bits: usize,
}

impl RootSet {
    pub fn real_roots(&self) -> Vec<f64> {
        self.roots.iter().filter(|r| r.is_real()).map(|r| r.re_f64()).collect()
    }

    /// Whether some real root lies within `tol` of `x`.
    pub fn has_real_root_near(&self, x: f64, tol: f64) -> bool {
        self.real_roots().iter().any(|r| (r - x).abs() <= tol)
    }
}

/// Bini's starting points from the upper convex hull of (i, log|a_i|).
fn initial_points(coeffs: &[f64]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> =
        coeffs.iter().enumerate().filter(|(_, &c)| c.is_finite()).map(|(i, &c)| (i, c)).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let m = j - i;
        let u = ((li - lj) / m as f64).exp2();
        for t in 0..m {
            let ang = 2.0 * std::f64::consts::PI * (t as f64 / m as f64 + i as f64 / n as f64) + sigma;
            out.push((u * ang.cos(), u * ang.sin()));
        }
    }
    out
}

/// Aberth correction p/p' / (1 − p/p' · Σ 1/(z_i − z_j)).
fn aberth_step_f64(ratio: Complex64, i: usize, z: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (j, zj) in z.iter().enumerate() {
        if j != i {
            s += (z[i] - zj).inv();
        }
    }
    ratio / (1.0 - ratio * s)
}

/// Double-precision sweeps from the hull start; a root stops once |p(z)| is
/// at the rounding level of the evaluation. Returns None on overflow.
fn f64_stage(coeffs: &[f64], z: &mut [Complex64], max_iter: usize) -> Option<()> {
    let n = z.len();
    let abs: Vec<f64> = coeffs.iter().map(|c| c.abs()).collect();
    let mut conv = vec![false; n];
    for _ in 0..max_iter {
        for i in 0..n {
            if conv[i] {
                continue;
            }
            let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            let mut s = 0.0;
            let r = z[i].norm();
            for (c, a) in coeffs.iter().zip(&abs).rev() {
                dp = dp * z[i] + p;
                p = p * z[i] + c;
                s = s * r + a;
            }
            if !(p.is_finite() && dp.is_finite() && s.is_finite()) {
                return None;
            }
            if p.norm() <= 4.0 * n as f64 * f64::EPSILON * s {
                conv[i] = true;
                continue;
            }
            let corr = aberth_step_f64(p / dp, i, z);
            if corr.is_finite() {
                z[i] -= corr;
            }
        }
        if conv.iter().all(|&c| c) {
            break;
        }
    }
    Some(())
}

struct Aberth {
    coeffs: Vec<Float>,
    abs: Vec<Float>,
    prec: usize,
}

impl Aberth {
    fn new(poly: &IntPoly, prec: usize) -> Self {
        let coeffs: Vec<Float> = poly.coeffs().iter().map(|c| float_from_big(c, prec)).collect();
        let abs = poly.coeffs().iter().map(|c| float_from_big(&c.abs(), prec)).collect();
        Aberth { coeffs, abs, prec }
    }

    /// p(z), p'(z) and log2 of the rounding-error bound of the evaluation.
    fn eval_with_derivative(&self, z: &Cx) -> (Cx, Cx, f64) {
        let mut p = Cx::zero(self.prec);
        let mut dp = Cx::zero(self.prec);
        let r = float_from_f64(z.to_c64().norm() * (1.0 + 1e-12), self.prec);
        let mut s = float_from_f64(0.0, self.prec);
        for (c, a) in self.coeffs.iter().zip(&self.abs).rev() {
            dp = dp.mul(z).add(&p);
            p = p.mul(z).add_real(c);
            s = &s * &r + a;
        }
        let n = self.coeffs.len() as f64;
        let err = log2_abs(&s) + (4.0 * n).log2() - self.prec as f64;
        (p, dp, err)
    }

    /// Gauss–Seidel sweeps; true once every |p(z_i)| is at the rounding level.
    fn iterate(&self, z: &mut [Cx], max_iter: usize) -> bool {
        let n = z.len();
        let mut conv = vec![false; n];
        for _ in 0..max_iter {
            for i in 0..n {
                if conv[i] {
                    continue;
                }
                let (p, dp, err) = self.eval_with_derivative(&z[i]);
                if p.log2_abs() <= err {
                    conv[i] = true;
                    continue;
                }
                let ratio = p.div(&dp);
                let zf: Vec<Complex64> = z.iter().map(Cx::to_c64).collect();
                let close = zf.iter().enumerate().any(|(j, w)| j != i && (zf[i] - w).norm() <= 1e-10 * zf[i].norm().max(1.0));
                let corr = if close {
                    let mut s = Cx::zero(self.prec);
                    for j in 0..n {
                        if j != i {
                            s = s.add(&z[i].sub(&z[j]).recip());
                        }
                    }
                    let one = Cx::new(float_from_f64(1.0, self.prec), float_from_f64(0.0, self.prec));
                    ratio.div(&one.sub(&ratio.mul(&s)))
                } else {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (j, w) in zf.iter().enumerate() {
                        if j != i {
                            s += (zf[i] - w).inv();
                        }
                    }
                    let denom = Complex64::new(1.0, 0.0) - ratio.to_c64() * s;
                    ratio.div(&Cx::from_c64(denom, self.prec))
                };
                z[i] = z[i].sub(&corr);
            }
            if conv.iter().all(|&c| c) {
                return true;
            }
        }
        false
    }

    /// n·|W_i| with W_i the Weierstrass correction, |p| enlarged by the
    /// evaluation error bound.
    fn radii(&self, z: &[Cx]) -> Vec<f64> {
        let n = z.len();
        let lead = self.coeffs.last().unwrap();
        (0..n)
            .map(|i| {
                let (p, _, err) = self.eval_with_derivative(&z[i]);
                let lp = p.log2_abs();
                let hi = lp.max(err);
                let mut l = hi + (1.0 + (lp.min(err) - hi).exp2()).log2() - log2_abs(lead);
                for j in 0..n {
                    if j != i {
                        l -= z[i].sub(&z[j]).log2_abs();
                    }
                }
                ((n as f64).log2() + l + 0.01).exp2()
            })
            .collect()
    }
}

fn disks_disjoint(z: &[(f64, f64)], r: &[f64]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = ((z[i].0 - z[j].0).powi(2) + (z[i].1 - z[j].1).powi(2)).sqrt();
            if d <= r[i] + r[j] {
                return false;
            }
        }
    }
    true
}

/// Whether gcd(p, p') is constant modulo a prime not dividing the leading
/// coefficient, which proves p squarefree over the rationals.
pub fn is_squarefree_mod(poly: &IntPoly) -> bool {
    const P: u64 = 2147483647;
    let red = |c: &BigInt| -> u64 {
        let m = c % BigInt::from(P);
        let m = if m.is_negative() { m + BigInt::from(P) } else { m };
        u64::try_from(m).unwrap()
    };
    let f: Vec<u64> = poly.coeffs().iter().map(red).collect();
    if f.last().is_none_or(|&c| c == 0) {
        return false;
    }
    let g = mod_gcd(&f, &mod_derivative(&f, P), P);
    g.iter().rposition(|&c| c != 0).unwrap_or(0) == 0
}

/// Yun's squarefree decomposition: primitive factors with multiplicities.
pub fn squarefree_decomposition(poly: &IntPoly) -> Vec<(IntPoly, usize)> {
    let f = poly.to_rat();
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.div_rem(&a).0;
    let c = df.div_rem(&a).0;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((integer_part(&a), i));
        }
        b = b.div_rem(&a).0;
        let c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn integer_part(p: &RatPoly) -> IntPoly {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    let scaled = p.scale(&BigRational::from_integer(lcm));
    scaled.to_int().expect("denominators cleared").primitive()
}

/// All complex roots with radii below 10^−digits. Repeated roots are found
/// on the squarefree factors and listed once per multiplicity.
pub fn all_roots(poly: &IntPoly, digits: usize) -> Result<RootSet> {
    let n = poly.degree().ok_or_else(|| Error::Domain("zero polynomial".into()))?;
    if n == 0 {
        return Err(Error::Domain("constant polynomial has no roots".into()));
    }
    let lowest = poly.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let reduced = IntPoly::from_coeffs(poly.coeffs()[lowest..].to_vec());
    if reduced.degree() == Some(0) || is_squarefree_mod(&reduced) {
        return isolate(poly, digits);
    }
    let mut roots: Vec<RootInterval> = (0..lowest)
        .map(|_| RootInterval { re: float_from_f64(0.0, 64), im: float_from_f64(0.0, 64), radius: 0.0 })
        .collect();
    let mut prec = 64;
    for (factor, mult) in squarefree_decomposition(&reduced) {
        let part = isolate(&factor, digits)?;
        prec = prec.max(part.precision_bits);
        for r in part.roots {
            roots.extend(std::iter::repeat_n(r, mult));
        }
    }
    order_roots(&mut roots);
    Ok(RootSet { roots, digits, precision_bits: prec })
}

/// Simultaneous iteration on a squarefree polynomial, doubling precision
/// from 64 bits until the disks are small and pairwise disjoint.
fn isolate(poly: &IntPoly, digits: usize) -> Result<RootSet> {
    let n = poly.degree().unwrap();
    // Split off zeros at the origin.
    let lowest = poly.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let reduced = IntPoly::from_coeffs(poly.coeffs()[lowest..].to_vec());
    let m = n - lowest;
    let mut roots: Vec<RootInterval> = (0..lowest)
        .map(|_| RootInterval { re: float_from_f64(0.0, 64), im: float_from_f64(0.0, 64), radius: 0.0 })
        .collect();
    let target = -(digits as f64) * std::f64::consts::LOG2_10;
    let logs: Vec<f64> = reduced
        .coeffs()
        .iter()
        .map(|c| if c.is_zero() { f64::NEG_INFINITY } else { log2_abs(&float_from_big(c, 64)) })
        .collect();
    let mut prec = 64usize;
    let mut z: Vec<Cx> = Vec::new();
    if m > 0 {
        let mut zf: Vec<Complex64> = initial_points(&logs).into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let cf: Vec<f64> = reduced.coeffs().iter().map(|c| float_to_f64(&float_from_big(c, 64))).collect();
        if cf.iter().all(|c| c.is_finite()) {
            let start = zf.clone();
            if f64_stage(&cf, &mut zf, 200 + 4 * m).is_none() || zf.iter().any(|w| !w.is_finite()) {
                zf = start;
            }
        }
        z = zf.into_iter().map(|w| Cx::from_c64(w, prec)).collect();
        prec = 128;
    }
    while roots.len() < n {
        let ab = Aberth::new(&reduced, prec);
        for x in z.iter_mut() {
            *x = x.with_precision(prec);
        }
        ab.iterate(&mut z, 20 + m);
        let r = ab.radii(&z);
        let centres: Vec<(f64, f64)> = z.iter().map(|c| (float_to_f64(&c.re), float_to_f64(&c.im))).collect();
        if r.iter().all(|&x| x.log2() <= target) && disks_disjoint(&centres, &r) {
            // An isolating disk that meets the real axis is its own conjugate,
            // so the root inside it is real.
            roots.extend(z.iter().zip(&r).map(|(c, &radius)| {
                let im = if float_to_f64(&c.im).abs() <= radius { float_from_f64(0.0, prec) } else { c.im.clone() };
                RootInterval { re: c.re.clone(), im, radius }
            }));
            break;
        }
        prec *= 2;
        if prec > 1 << 16 {
            return Err(Error::NoConvergence(format!("roots not isolated at {} bits", prec / 2)));
        }
    }
    order_roots(&mut roots);
    Ok(RootSet { roots, digits, precision_bits: prec })
}

/// By real part then imaginary part, conjugates adjacent (negative first).
fn order_roots(roots: &mut [RootInterval]) {
    roots.sort_by(|a, b| {
        let ka = (a.re_f64(), a.im_f64().abs(), a.im_f64());
        let kb = (b.re_f64(), b.im_f64().abs(), b.im_f64());
        let close = (ka.0 - kb.0).abs() <= a.radius + b.radius && (ka.1 - kb.1).abs() <= a.radius + b.radius;
        if close {
            ka.2.partial_cmp(&kb.2).unwrap_or(Ordering::Equal)
        } else {
            ka.0.partial_cmp(&kb.0).unwrap_or(Ordering::Equal).then(ka.1.partial_cmp(&kb.1).unwrap_or(Ordering::Equal))
        }
    });
}

/// Sturm chain using primitive integer pseudo-remainders.
pub fn sturm_sequence(p: &IntPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.to_rat(), p.derivative().to_rat()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        // Scale by a positive constant to keep coefficients integral.
        seq.push(positive_content_free(&-&r));
        continue;
    }
    seq
}

/// Integer multiple of p by a positive rational with coprime coefficients.
fn positive_content_free(p: &RatPoly) -> RatPoly {
    let den = p.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ip = p.scale(&BigRational::from_integer(den)).to_int().expect("cleared");
    let g = ip.coeffs().iter().fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, c));
    if g.is_zero() {
        return ip.to_rat();
    }
    ip.map(|c| c / &g).to_rat()
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_at_infinity(p: &RatPoly, positive: bool) -> i32 {
    match (p.degree(), p.leading()) {
        (Some(d), Some(c)) => {
            let s = sign_of(c);
            if positive || d % 2 == 0 {
                s
            } else {
                -s
            }
        }
        _ => 0,
    }
}

/// End point of a Sturm interval.
#[derive(Clone, Debug)]
pub enum Bound {
    NegInf,
    PosInf,
    At(BigRational),
}

fn variations(seq: &[RatPoly], b: &Bound) -> usize {
    match b {
        Bound::NegInf => sign_changes(seq.iter().map(|p| sign_at_infinity(p, false))),
        Bound::PosInf => sign_changes(seq.iter().map(|p| sign_at_infinity(p, true))),
        Bound::At(x) => sign_changes(seq.iter().map(|p| sign_of(&p.eval(x)))),
    }
}

/// Distinct real roots in (a, b].
pub fn sturm_count(p: &IntPoly, a: &Bound, b: &Bound) -> usize {
    let seq = sturm_sequence(p);
    variations(&seq, a).saturating_sub(variations(&seq, b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub lo: BigRational,
    pub hi: BigRational,
    pub value_lo: BigRational,
    pub value_hi: BigRational,
    /// Sign change between the endpoints.
    pub certified: bool,
    /// Exact number of distinct roots in (lo, hi], when requested.
    pub sturm: Option<usize>,
}

pub fn certify_real_root(poly: &IntPoly, lo: &BigRational, hi: &BigRational, with_sturm: bool) -> Result<Certificate> {
    if lo >= hi {
        return Err(Error::Domain("interval must satisfy lo < hi".into()));
    }
    let value_lo = evaluate_exact(poly, lo);
    let value_hi = evaluate_exact(poly, hi);
    let certified = sign_of(&value_lo) * sign_of(&value_hi) < 0;
    let sturm = if with_sturm && poly.degree().unwrap_or(0) <= 200 {
        Some(sturm_count(poly, &Bound::At(lo.clone()), &Bound::At(hi.clone())))
    } else {
        None
    };
    Ok(Certificate { lo: lo.clone(), hi: hi.clone(), value_lo, value_hi, certified, sturm })
}

/// A real algebraic number: the unique root of `minpoly` in (lo, hi).
#[derive(Clone, Debug)]
pub struct RealAlgebraic {
    pub minpoly: IntPoly,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RealAlgebraic {
    pub fn new(minpoly: IntPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        let n = sturm_count(&minpoly, &Bound::At(lo.clone()), &Bound::At(hi.clone()));
        if n != 1 || minpoly.eval_rat(&hi).is_zero() {
            return Err(Error::Domain("isolating interval must contain exactly one interior root".into()));
        }
        Ok(RealAlgebraic { minpoly, lo, hi })
    }

    /// Root of Q³ − 9Q² + 29Q − 32 in (2, 3).
    pub fn jackson_delta() -> Self {
        let two = BigRational::from_integer(2.into());
        let three = BigRational::from_integer(3.into());
        RealAlgebraic::new(IntPoly::from_i64(&[-32, 29, -9, 1]), two, three).expect("isolated")
    }

    fn bisect(&mut self) {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        let s_lo = sign_of(&self.minpoly.eval_rat(&self.lo));
        let s_mid = sign_of(&self.minpoly.eval_rat(&mid));
        if s_mid == 0 {
            // Exact rational root: collapse onto it.
            self.lo = mid.clone();
            self.hi = mid;
        } else if s_mid == s_lo {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn approx(&self) -> f64 {
        let mut me = self.clone();
        for _ in 0..60 {
            me.bisect();
        }
        crate::field::rational_to_f64(&((&me.lo + &me.hi) / BigRational::from_integer(2.into())))
    }

    /// Sign of p at the number. Requires the minimal polynomial to be
    /// irreducible, so that p vanishes there only if it is a multiple.
    pub fn sign_of_poly(&self, p: &RatPoly) -> i32 {
        let (_, r) = p.div_rem(&self.minpoly.to_rat());
        if r.is_zero() {
            return 0;
        }
        let mut me = self.clone();
        loop {
            if me.lo == me.hi {
                return sign_of(&r.eval(&me.lo));
            }
            let rl = sign_of(&r.eval(&me.lo));
            let rh = sign_of(&r.eval(&me.hi));
            if rl != 0 && rl == rh {
                let ri = r.to_int().map(|x| x.primitive()).unwrap_or_else(|| {
                    let den = r.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
                    r.scale(&BigRational::from_integer(den)).to_int().unwrap()
                });
                if sturm_count(&ri, &Bound::At(me.lo.clone()), &Bound::At(me.hi.clone())) == 0 {
                    return rl;
                }
            }
            me.bisect();
        }
    }

    /// Distinct roots of p in (a, self], by Sturm with the sign at self.
    pub fn sturm_count_from(&self, p: &IntPoly, a: &Bound) -> usize {
        let seq = sturm_sequence(p);
        let at_self = sign_changes(seq.iter().map(|s| self.sign_of_poly(s)));
        variations(&seq, a).saturating_sub(at_self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_factorised_roots() {
        let p = &IntPoly::from_roots(&[1, 2, 3, 4]) * &IntPoly::from_i64(&[10, -5, 1]);
        let rs = all_roots(&p, 30).unwrap();
        assert_eq!(rs.roots.len(), 6);
        let re: Vec<f64> = rs.roots.iter().map(|x| x.re_f64()).collect();
        let im: Vec<f64> = rs.roots.iter().map(|x| x.im_f64()).collect();
        let s15 = 15f64.sqrt() / 2.0;
        let expect = [(1.0, 0.0), (2.0, 0.0), (2.5, -s15), (2.5, s15), (3.0, 0.0), (4.0, 0.0)];
        for (i, (a, b)) in expect.iter().enumerate() {
            assert!((re[i] - a).abs() < 1e-14 && (im[i] - b).abs() < 1e-14, "{i}: {} {}", re[i], im[i]);
        }
        assert!(rs.roots.iter().all(|x| x.radius < 1e-30));
        let s = float_to_string(&rs.roots[2].im, 25);
        assert!(s.starts_with("-1.93649167310370844258963"), "{s}");
    }

    #[test]
    fn roots_of_products_are_unions() {
        let a = IntPoly::from_i64(&[-7, 0, 1]);
        let b = IntPoly::from_i64(&[3, 1, 1]);
        let ra = all_roots(&a, 20).unwrap();
        let rb = all_roots(&b, 20).unwrap();
        let rab = all_roots(&(&a * &b), 20).unwrap();
        let mut u: Vec<(f64, f64)> = ra.roots.iter().chain(&rb.roots).map(|x| (x.re_f64(), x.im_f64())).collect();
        u.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut w: Vec<(f64, f64)> = rab.roots.iter().map(|x| (x.re_f64(), x.im_f64())).collect();
        w.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in u.iter().zip(&w) {
            assert!((x.0 - y.0).abs() < 1e-14 && (x.1 - y.1).abs() < 1e-14);
        }
        let z = all_roots(&IntPoly::from_i64(&[0, 0, -1, 1]), 10).unwrap();
        assert_eq!(z.roots.len(), 3);
        assert!(all_roots(&IntPoly::from_i64(&[5]), 10).is_err());
    }

    #[test]
    fn repeated_roots() {
        // Φ of G(6,2): (Q−1)(Q−2)(Q−3)²(Q³ − 9Q² + 29Q − 32).
        let cubic = IntPoly::from_i64(&[-32, 29, -9, 1]);
        let p = &IntPoly::from_roots(&[1, 2, 3, 3]) * &cubic;
        assert!(!is_squarefree_mod(&p) && is_squarefree_mod(&cubic));
        let d = squarefree_decomposition(&p);
        assert_eq!(d.len(), 2);
        assert_eq!(d[1], (IntPoly::from_roots(&[3]), 2));
        let rs = all_roots(&p, 20).unwrap();
        assert_eq!(rs.roots.len(), 7);
        let threes = rs.roots.iter().filter(|r| (r.re_f64() - 3.0).abs() < 1e-18 && r.im_f64() == 0.0).count();
        assert_eq!(threes, 2);
        assert!(rs.has_real_root_near(RealAlgebraic::jackson_delta().approx(), 1e-12));
        let z = all_roots(&IntPoly::from_i64(&[0, 0, 1, -2, 1]), 10).unwrap();
        assert_eq!(z.real_roots(), vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn sturm_and_certificates() {
        let p = IntPoly::from_roots(&[1, 2, 3]);
        assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::PosInf), 3);
        assert_eq!(sturm_count(&p, &Bound::At(r(3, 2)), &Bound::At(r(3, 1))), 2);
        let c = certify_real_root(&p, &r(3, 2), &r(5, 2), true).unwrap();
        assert!(c.certified);
        assert_eq!(c.sturm, Some(1));
        let q = IntPoly::from_i64(&[-2, 1]);
        assert!(!certify_real_root(&q, &r(3, 1), &r(4, 1), false).unwrap().certified);
        assert!(certify_real_root(&q, &r(4, 1), &r(3, 1), false).is_err());
    }

    #[test]
    fn algebraic_delta() {
        let d = RealAlgebraic::jackson_delta();
        assert!((d.approx() - 2.5466).abs() < 0.01);
        // Q − 5/2 is positive at δ ≈ 2.5466, Q − 13/5 negative.
        assert_eq!(d.sign_of_poly(&RatPoly::from_coeffs(vec![r(-5, 2), r(1, 1)])), 1);
        assert_eq!(d.sign_of_poly(&RatPoly::from_coeffs(vec![r(-13, 5), r(1, 1)])), -1);
        assert_eq!(d.sign_of_poly(&d.minpoly.to_rat()), 0);
        // (Q−2)(Q−δ') with a root just below δ.
        let p = &IntPoly::from_i64(&[-2, 1]) * &IntPoly::from_i64(&[-254, 100]);
        assert_eq!(d.sturm_count_from(&p, &Bound::At(r(2, 1))), 1);
        assert_eq!(d.sturm_count_from(&p, &Bound::At(r(255, 100))), 0);
    }
}
