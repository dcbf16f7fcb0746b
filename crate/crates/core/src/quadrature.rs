//! Adaptive Gauss-Kronrod (G10/K21) integration with global error control.
//!
//! The integrator is vector valued so that several moments of the same
//! integrand can share function evaluations. Helpers map half-lines and
//! power-law ranges onto finite intervals through logarithmic substitutions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Published 30-digit values, kept verbatim.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_094_440,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ...
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Absolute/relative tolerance pair; an integral is accepted once the
/// estimated error is below `max(abs, rel * |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    /// Default used for generator and exponent quadratures.
    pub const DEFAULT: Tolerance = Tolerance::new(1e-10, 1e-8);

    /// Tighter setting for tail masses, moments and kernel cells.
    pub const KERNEL: Tolerance = Tolerance::new(1e-14, 1e-12);

    fn target(&self, magnitude: f64) -> f64 {
        self.abs.max(self.rel * magnitude)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub evaluations: usize,
}

const MAX_INTERVALS: usize = 4000;

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

#[allow(clippy::needless_range_loop)]
fn kronrod_21<const N: usize, F>(f: &mut F, a: f64, b: f64) -> ([f64; N], f64)
where
    F: FnMut(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = f(center);
    let mut res_k = [0.0; N];
    let mut res_g = [0.0; N];
    let mut res_abs = [0.0; N];
    let mut fv1 = [[0.0; N]; 10];
    let mut fv2 = [[0.0; N]; 10];
    for c in 0..N {
        res_k[c] = WGK[10] * fc[c];
        res_abs[c] = (WGK[10] * fc[c]).abs();
    }
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        for c in 0..N {
            res_g[c] += WG[j] * (f1[c] + f2[c]);
            res_k[c] += WGK[jtw] * (f1[c] + f2[c]);
            res_abs[c] += WGK[jtw] * (f1[c].abs() + f2[c].abs());
        }
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        for c in 0..N {
            res_k[c] += WGK[jtwm1] * (f1[c] + f2[c]);
            res_abs[c] += WGK[jtwm1] * (f1[c].abs() + f2[c].abs());
        }
    }

    let mut value = [0.0; N];
    let mut error: f64 = 0.0;
    for c in 0..N {
        let mean = 0.5 * res_k[c];
        let mut res_asc = WGK[10] * (fc[c] - mean).abs();
        for j in 0..10 {
            res_asc += WGK[j] * ((fv1[j][c] - mean).abs() + (fv2[j][c] - mean).abs());
        }
        value[c] = res_k[c] * half;
        let err = rescale_error((res_k[c] - res_g[c]) * half, res_abs[c] * abs_half, res_asc * abs_half);
        error = error.max(err);
    }
    (value, error)
}

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Segment<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Segment<N> {}
impl<const N: usize> PartialOrd for Segment<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Segment<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn magnitude<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Integrates a vector-valued function over `[a, b]`. The error estimate is
/// the componentwise maximum, compared against the largest component.
pub fn integrate_n<const N: usize, F>(mut f: F, a: f64, b: f64, tol: Tolerance, what: &str) -> Result<Quadrature<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    if a == b {
        return Ok(Quadrature {
            value: [0.0; N],
            error: 0.0,
            evaluations: 0,
        });
    }
    let (value, error) = kronrod_21(&mut f, a, b);
    let mut evaluations = 21;
    if !value.iter().all(|v| v.is_finite()) {
        return Err(Error::NumericalFailure {
            what: what.to_string(),
            achieved: f64::INFINITY,
            requested: tol.target(0.0),
        });
    }

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment<N>> = Vec::new();
    let mut total = value;
    let mut total_err = error;
    heap.push(Segment { a, b, value, error });

    loop {
        if total_err <= tol.target(magnitude(&total)) {
            break;
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        let tiny =
            (worst.b - worst.a).abs() <= 8.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if heap.len() + frozen.len() >= MAX_INTERVALS {
            heap.push(worst);
            break;
        }
        if tiny {
            frozen.push(worst);
            continue;
        }
        let (v1, e1) = kronrod_21(&mut f, worst.a, mid);
        let (v2, e2) = kronrod_21(&mut f, mid, worst.b);
        evaluations += 42;
        for c in 0..N {
            total[c] += v1[c] + v2[c] - worst.value[c];
        }
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }

    // Re-sum from the segments to shed accumulated update roundoff.
    let mut value = [0.0; N];
    let mut error = 0.0;
    for s in heap.iter().chain(frozen.iter()) {
        for (v, sv) in value.iter_mut().zip(&s.value) {
            *v += sv;
        }
        error += s.error;
    }
    let requested = tol.target(magnitude(&value));
    if !value.iter().all(|v| v.is_finite()) || error > requested {
        return Err(Error::NumericalFailure {
            what: what.to_string(),
            achieved: error,
            requested,
        });
    }
    Ok(Quadrature {
        value,
        error,
        evaluations,
    })
}

/// Scalar adaptive integration over `[a, b]`; returns `(value, error)`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance, what: &str) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let q = integrate_n(|x| [f(x)], a, b, tol, what)?;
    Ok((q.value[0], q.error))
}

/// Integrates `f` over `[a, b]` with `0 < a < b < inf` in the variable `ln t`,
/// which flattens power-law behaviour near the origin.
pub fn integrate_log<F>(mut f: F, a: f64, b: f64, tol: Tolerance, what: &str) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(a > 0.0 && b >= a);
    integrate(
        |s| {
            let t = s.exp();
            f(t) * t
        },
        a.ln(),
        b.ln(),
        tol,
        what,
    )
}

/// Integrates `f` over `(0, b]`: logarithmic variable, then `s = ln b - v/(1-v)`.
pub fn integrate_log_from_zero<F>(mut f: F, b: f64, tol: Tolerance, what: &str) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(b > 0.0);
    let lb = b.ln();
    integrate(
        |v| {
            let w = 1.0 - v;
            let t = (lb - v / w).exp();
            if t == 0.0 {
                return 0.0;
            }
            // Overflow of power-law factors deep in the underflow range.
            let y = f(t) * t / (w * w);
            if y.is_finite() {
                y
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
        what,
    )
}

/// Integrates `f` over `[a, inf)` with `a > 0`: logarithmic variable, then
/// `s = ln a + v/(1-v)`.
pub fn integrate_log_to_infinity<F>(mut f: F, a: f64, tol: Tolerance, what: &str) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(a > 0.0);
    let la = a.ln();
    integrate(
        |v| {
            let w = 1.0 - v;
            let t = (la + v / w).exp();
            if !t.is_finite() {
                return 0.0;
            }
            let y = f(t) * t / (w * w);
            if y.is_finite() {
                y
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
        what,
    )
}

/// `∫_0^b g(u) du` for `g` with an integrable singularity `|g(u)| = O(u^{-s})`,
/// `0 <= s < 1`, at the origin. Uses `u = b τ^q` with `q = 2/(1-s)`, which turns
/// the leading singular term into a linear one.
pub fn integrate_endpoint_singular_n<const N: usize, F>(
    mut g: F,
    b: f64,
    singular_exponent: f64,
    tol: Tolerance,
    what: &str,
) -> Result<Quadrature<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    let q = 2.0 / (1.0 - singular_exponent.clamp(0.0, 0.999));
    integrate_n(
        |tau| {
            let u = b * tau.powf(q);
            if u == 0.0 {
                return [0.0; N];
            }
            let jac = b * q * tau.powf(q - 1.0);
            let mut out = g(u);
            for o in out.iter_mut() {
                *o *= jac;
            }
            out
        },
        0.0,
        1.0,
        tol,
        what,
    )
}

/// Iterated averaging of partial sums (Euler transform). Accelerates the
/// alternating series produced by integrating oscillatory tails period by period.
pub fn repeated_average(partial_sums: &[f64]) -> f64 {
    let mut row = partial_sums.to_vec();
    while row.len() > 1 {
        row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    row.first().copied().unwrap_or(0.0)
}
