//! Globally adaptive 10/21-point Gauss-Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |I|)`, or the roundoff floor set by
//! `∫|f|` when the integral cancels. Subdivision order depends only
//! on the integrand, so results are bit-reproducible.

use thiserror::Error;

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
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

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub evals: usize,
}

impl QuadResult {
    /// Combine two independent pieces of one integral.
    pub fn merge(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            abs_err: self.abs_err + other.abs_err,
            evals: self.evals + other.evals,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature did not reach tolerance: value {value:e}, error estimate {abs_err:e} after {evals} evaluations")]
    NonConvergence {
        value: f64,
        abs_err: f64,
        evals: usize,
    },
    #[error("integrand is not finite at x = {at:e}")]
    NonFinite { at: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    res_abs: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment, QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    let fc = f(center);
    if !fc.is_finite() {
        return Err(QuadError::NonFinite { at: center });
    }
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        if !f1.is_finite() {
            return Err(QuadError::NonFinite { at: center - x });
        }
        if !f2.is_finite() {
            return Err(QuadError::NonFinite { at: center + x });
        }
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let err = rescale_error((res_k - res_g) * half, res_abs * scale, res_asc * scale);
    Ok(Segment {
        a,
        b,
        value: res_k * half,
        err,
        res_abs: res_abs * scale,
    })
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    integrate_with_breaks(f, &[a, b], opts)
}

/// Integrate over the consecutive intervals spanned by `points`.
///
/// `points` must be sorted; interior points seed the subdivision (known
/// peaks, kinks or scale changes of the integrand).
pub fn integrate_with_breaks<F>(
    mut f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    let mut segs: Vec<Segment> = Vec::with_capacity(points.len() + 16);
    let mut evals = 0usize;
    for w in points.windows(2) {
        if w[1] > w[0] {
            segs.push(gk21(&mut f, w[0], w[1])?);
            evals += 21;
        }
    }
    if segs.is_empty() {
        return Ok(QuadResult::default());
    }
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        // Below the roundoff floor of ∫|f| no refinement can help.
        let floor = 100.0 * f64::EPSILON * segs.iter().map(|s| s.res_abs).sum::<f64>();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs()).max(floor);
        if err <= target {
            return Ok(QuadResult {
                value,
                abs_err: err,
                evals,
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, s)| {
                if s.err > acc.1 {
                    (i, s.err)
                } else {
                    acc
                }
            });
        let s = segs[worst];
        let mid = 0.5 * (s.a + s.b);
        if segs.len() >= opts.max_intervals || mid <= s.a || mid >= s.b {
            return Err(QuadError::NonConvergence {
                value,
                abs_err: err,
                evals,
            });
        }
        let left = gk21(&mut f, s.a, mid)?;
        let right = gk21(&mut f, mid, s.b)?;
        evals += 42;
        segs[worst] = left;
        segs.push(right);
    }
}

/// Integrate `f` over `[a, ∞)` through the map `x = a + (1 - t)/t`.
pub fn integrate_semi_infinite<F>(
    mut f: F,
    a: f64,
    opts: &QuadOptions,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    integrate(
        |t: f64| {
            let x = a + (1.0 - t) / t;
            f(x) / (t * t)
        },
        0.0,
        1.0,
        opts,
    )
}

/// Integrate `f` over `[a, ∞)`, with interior break points (sorted, > a)
/// integrated on finite pieces and the remainder mapped to `(0, 1]`.
pub fn integrate_semi_infinite_with_breaks<F>(
    mut f: F,
    a: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|&b| b > a));
    points.sort_by(|x, y| x.total_cmp(y));
    points.dedup();
    let last = *points.last().unwrap_or(&a);
    let head = integrate_with_breaks(&mut f, &points, opts)?;
    let tail = integrate_semi_infinite(&mut f, last, opts)?;
    Ok(head.merge(tail))
}
