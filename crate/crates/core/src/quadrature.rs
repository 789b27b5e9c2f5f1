//! Quadrature rules shared by the compute modules.
//!
//! Gauss-Legendre nodes come from Newton iteration on the three-term
//! recurrence; the Gauss-Kronrod 7/15 pair is the QUADPACK table; the
//! tanh-sinh rule is used where integrands carry inverse square-root
//! endpoint singularities.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A composite Gauss-Legendre rule: `panels` equal panels of `order` nodes on [a, b].
pub fn composite_gauss(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// The 15 Kronrod abscissae of [lo, hi] in ascending order.
pub fn kronrod_nodes(lo: f64, hi: f64) -> [f64; 15] {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut out = [0.0; 15];
    for j in 0..7 {
        out[j] = c - h * XGK[j];
        out[14 - j] = c + h * XGK[j];
    }
    out[7] = c;
    out
}

/// Applies the Gauss-Kronrod 7/15 pair to values sampled at [`kronrod_nodes`].
///
/// Returns the Kronrod estimate and |Kronrod - Gauss|.
pub fn kronrod_apply(lo: f64, hi: f64, f: &[Complex64; 15]) -> (Complex64, f64) {
    let h = 0.5 * (hi - lo);
    let mut k = f[7] * WGK[7];
    let mut g = f[7] * WG[3];
    for j in 0..7 {
        let pair = f[j] + f[14 - j];
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Tanh-sinh nodes on (-1, 1): `(x, 1 - |x|, w)` for step `h` and `|k h| <= kmax`.
///
/// The complement `1 - |x|` is returned separately so that callers can
/// resolve endpoint singularities without cancellation.
pub fn tanh_sinh(h: f64, kmax: f64) -> Vec<(f64, f64, f64)> {
    let n = (kmax / h).ceil() as i64;
    let mut out = Vec::with_capacity(2 * n as usize + 1);
    for k in -n..=n {
        let s = k as f64 * h;
        let u = FRAC_PI_2 * s.sinh();
        let x = u.tanh();
        // 1 - tanh|u| = 2 / (exp(2|u|) + 1)
        let comp = 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        let w = h * FRAC_PI_2 * s.cosh() / u.cosh().powi(2);
        if comp > 0.0 && w > 0.0 {
            out.push((x, comp, w));
        }
    }
    out
}

/// Trapezoid rule of a closed contour integral around a circle.
///
/// Returns the integral of `f(z) dz` over |z - center| = radius, counterclockwise.
pub fn circle_integral<F>(center: Complex64, radius: f64, n: usize, mut f: F) -> Complex64
where
    F: FnMut(Complex64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        let z = center + radius * phase;
        // dz = i r e^{i phi} dphi
        acc += f(z) * Complex64::i() * radius * phase;
    }
    acc * (2.0 * PI / n as f64)
}
