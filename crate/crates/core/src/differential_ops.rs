//! K×K-finite functions on G and the Casimir operator acting on them.
//!
//! A [`TestFunction`] is a finite sum `f(k_θ a_t k_φ) = Σ p_{nm}(t) e^{i(nθ + mφ)}`.
//! On a single component the Casimir reduces to the radial operator
//!
//! `p'' + 2 coth(2t) p' + [(n+m)²/(4 cosh² t) − (n−m)²/(4 sinh² t)] p`,
//!
//! which acts on principal series matrix elements by `−(λ² + 1)`. Through
//! the embedding of the quadric this is minus the ambient operator
//! `∂₁² + ∂₂² − ∂₃² − ∂₄²` applied to the degree-zero homogeneous extension.

use crate::error::{Error, Result};
use crate::geometry::{ads_embed, cartan_decompose, spherical_point, AmbientVector, GroupElement};
use crate::principal_series::{radial_matrix_element, SpectralParameter};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Default inner radius of the support; the radial operator is singular at 0.
pub const DEFAULT_T_MIN: f64 = 0.05;
/// Finite-difference step of [`apply_casimir`].
pub const FD_STEP: f64 = 1e-3;

/// Natural cubic spline through complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<Complex64>,
    second: Vec<Complex64>,
}

impl CubicSpline {
    pub fn new(knots: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        let n = knots.len();
        if n < 3 || values.len() != n {
            return Err(Error::Config("spline needs at least 3 matching samples".into()));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("spline knots must increase strictly".into()));
        }
        // tridiagonal system for the interior second derivatives
        let mut diag = vec![0.0; n];
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        let mut upper = vec![0.0; n];
        let mut second = vec![Complex64::new(0.0, 0.0); n];
        for i in 1..n - 1 {
            let h0 = knots[i] - knots[i - 1];
            let h1 = knots[i + 1] - knots[i];
            let lower = h0 / 6.0;
            diag[i] = (h0 + h1) / 3.0;
            upper[i] = h1 / 6.0;
            rhs[i] = (values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0;
            if i > 1 {
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] = rhs[i] - rhs[i - 1] * w;
            }
        }
        for i in (1..n - 1).rev() {
            second[i] = (rhs[i] - second[i + 1] * upper[i]) / diag[i];
        }
        Ok(Self {
            knots,
            values,
            second,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Value at `t`; zero outside the knot range.
    pub fn eval(&self, t: f64) -> Complex64 {
        let (lo, hi) = (self.knots[0], *self.knots.last().unwrap());
        if !(lo..=hi).contains(&t) {
            return Complex64::new(0.0, 0.0);
        }
        let i = match self.knots.partition_point(|&k| k <= t) {
            0 => 0,
            k if k >= self.knots.len() => self.knots.len() - 2,
            k => k - 1,
        };
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - t) / h;
        let b = 1.0 - a;
        self.values[i] * a
            + self.values[i + 1] * b
            + (self.second[i] * (a * a * a - a) + self.second[i + 1] * (b * b * b - b)) * (h * h / 6.0)
    }
}

/// A radial profile `p(t)`.
#[derive(Debug, Clone)]
pub enum RadialProfile {
    Zero,
    /// `amplitude · exp(−κ x² / (1 − x²))` with `x = (t − center)/width`, zero for `|x| >= 1`.
    Bump {
        center: f64,
        width: f64,
        sharpness: f64,
        amplitude: Complex64,
    },
    Spline(CubicSpline),
    /// The radial part `m_λ(n, m; t)` of a principal series matrix element.
    MatrixElement {
        param: SpectralParameter,
        n: i64,
        m: i64,
    },
    /// The radial Casimir of `inner` for the angular frequencies `(n, m)`,
    /// evaluated by finite differences; zero below `t_min`.
    Casimir {
        inner: Arc<RadialProfile>,
        n: i64,
        m: i64,
        t_min: f64,
    },
    Combination(Vec<(Complex64, RadialProfile)>),
}

impl RadialProfile {
    pub fn bump(center: f64, width: f64, sharpness: f64) -> Self {
        RadialProfile::Bump {
            center,
            width,
            sharpness,
            amplitude: Complex64::new(1.0, 0.0),
        }
    }

    /// Samples `f` on `knots` and interpolates with a natural cubic spline.
    pub fn sampled<F: Fn(f64) -> Complex64>(knots: Vec<f64>, f: F) -> Result<Self> {
        let values = knots.iter().map(|&t| f(t)).collect();
        Ok(RadialProfile::Spline(CubicSpline::new(knots, values)?))
    }

    pub fn scaled(self, s: Complex64) -> Self {
        RadialProfile::Combination(vec![(s, self)])
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            RadialProfile::Zero => Complex64::new(0.0, 0.0),
            RadialProfile::Bump {
                center,
                width,
                sharpness,
                amplitude,
            } => {
                let x = (t - center) / width;
                let x2 = x * x;
                if x2 >= 1.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    amplitude * (-sharpness * x2 / (1.0 - x2)).exp()
                }
            }
            RadialProfile::Spline(s) => s.eval(t),
            RadialProfile::MatrixElement { param, n, m } => {
                radial_matrix_element(param.lambda, *n, *m, t)
                    .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            }
            RadialProfile::Casimir { inner, n, m, t_min } => {
                if t < *t_min {
                    Complex64::new(0.0, 0.0)
                } else {
                    radial_casimir_at(inner, *n, *m, t, FD_STEP)
                }
            }
            RadialProfile::Combination(terms) => terms.iter().map(|(c, p)| c * p.eval(t)).sum(),
        }
    }

    /// An interval containing the support.
    pub fn support(&self) -> (f64, f64) {
        match self {
            RadialProfile::Zero => (0.0, 0.0),
            RadialProfile::Bump { center, width, .. } => ((center - width).max(0.0), center + width),
            RadialProfile::Spline(s) => (s.knots[0], *s.knots.last().unwrap()),
            RadialProfile::MatrixElement { .. } => (0.0, f64::INFINITY),
            RadialProfile::Casimir { inner, t_min, .. } => {
                let (lo, hi) = inner.support();
                (lo.max(*t_min), hi)
            }
            RadialProfile::Combination(terms) => terms
                .iter()
                .map(|(_, p)| p.support())
                .filter(|(lo, hi)| hi > lo)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (lo, hi)| (a.min(lo), b.max(hi))),
        }
    }
}

fn derivatives(p: &RadialProfile, t: f64, h: f64) -> (Complex64, Complex64, Complex64) {
    let (fm2, fm1, f0, fp1, fp2) = (
        p.eval(t - 2.0 * h),
        p.eval(t - h),
        p.eval(t),
        p.eval(t + h),
        p.eval(t + 2.0 * h),
    );
    // central differences at h and 2h, one Richardson level
    let d1h = (fp1 - fm1) / (2.0 * h);
    let d1_2h = (fp2 - fm2) / (4.0 * h);
    let d2h = (fp1 - f0 * 2.0 + fm1) / (h * h);
    let d2_2h = (fp2 - f0 * 2.0 + fm2) / (4.0 * h * h);
    (f0, (d1h * 4.0 - d1_2h) / 3.0, (d2h * 4.0 - d2_2h) / 3.0)
}

/// The radial operator on the `(n, m)` component at `t`.
pub fn radial_casimir_at(p: &RadialProfile, n: i64, m: i64, t: f64, h: f64) -> Complex64 {
    let (f, d1, d2) = derivatives(p, t, h);
    let (nf, mf) = (n as f64, m as f64);
    let potential = (nf + mf).powi(2) / (4.0 * t.cosh().powi(2)) - (nf - mf).powi(2) / (4.0 * t.sinh().powi(2));
    d2 + d1 * (2.0 / (2.0 * t).tanh()) + f * potential
}

/// A K×K-finite function `Σ p_{nm}(t) e^{i(nθ + mφ)}` supported in `t ∈ (t_min, support_t]`.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub support_t: f64,
    pub t_min: f64,
    components: BTreeMap<(i64, i64), RadialProfile>,
}

impl TestFunction {
    pub fn new(support_t: f64) -> Result<Self> {
        if !(support_t > 0.0) {
            return Err(Error::Config(format!("support_T must be positive, got {support_t}")));
        }
        Ok(Self {
            support_t,
            t_min: DEFAULT_T_MIN,
            components: BTreeMap::new(),
        })
    }

    pub fn zero() -> Self {
        Self::new(1.0).expect("positive support")
    }

    pub fn with_t_min(mut self, t_min: f64) -> Self {
        self.t_min = t_min;
        self
    }

    /// Adds `profile` to the `(n, m)` component. Requires `n + m` even.
    pub fn with_component(mut self, n: i64, m: i64, profile: RadialProfile) -> Result<Self> {
        if (n + m).rem_euclid(2) != 0 {
            return Err(Error::Config(format!("K×K-type ({n}, {m}) has n + m odd")));
        }
        let merged = match self.components.remove(&(n, m)) {
            None => profile,
            Some(old) => RadialProfile::Combination(vec![
                (Complex64::new(1.0, 0.0), old),
                (Complex64::new(1.0, 0.0), profile),
            ]),
        };
        self.components.insert((n, m), merged);
        Ok(self)
    }

    /// The section `g ↦ ⟨π(g)χ_m, χ_n⟩` restricted to `t <= support_t`.
    pub fn matrix_element_section(p: SpectralParameter, n: i64, m: i64, support_t: f64) -> Result<Self> {
        crate::principal_series::check_parity(p.delta, n)?;
        crate::principal_series::check_parity(p.delta, m)?;
        Self::new(support_t)?.with_component(n, m, RadialProfile::MatrixElement { param: p, n, m })
    }

    pub fn components(&self) -> impl Iterator<Item = (&(i64, i64), &RadialProfile)> {
        self.components.iter()
    }

    pub fn component(&self, n: i64, m: i64) -> Option<&RadialProfile> {
        self.components.get(&(n, m))
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|p| matches!(p, RadialProfile::Zero))
    }

    pub fn evaluate_kak(&self, t: f64, theta: f64, phi: f64) -> Complex64 {
        if t > self.support_t {
            return Complex64::new(0.0, 0.0);
        }
        self.components
            .iter()
            .map(|(&(n, m), p)| p.eval(t) * Complex64::from_polar(1.0, n as f64 * theta + m as f64 * phi))
            .sum()
    }

    pub fn evaluate(&self, g: GroupElement) -> Complex64 {
        let c = cartan_decompose(g);
        self.evaluate_kak(c.t, c.theta, c.phi)
    }

    /// `Σ_{nm} max_t |p_{nm}(t)|` sampled on a fine grid of the support.
    pub fn sup_norm(&self) -> f64 {
        let samples = 2000;
        self.components
            .values()
            .map(|p| {
                let (lo, hi) = p.support();
                let hi = hi.min(self.support_t);
                if !(hi > lo) {
                    return 0.0;
                }
                (0..=samples)
                    .map(|i| p.eval(lo + (hi - lo) * i as f64 / samples as f64).norm())
                    .fold(0.0, f64::max)
            })
            .sum()
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: Complex64, other: &TestFunction, b: Complex64) -> TestFunction {
        let mut out = TestFunction {
            support_t: self.support_t.max(other.support_t),
            t_min: self.t_min.max(other.t_min),
            components: BTreeMap::new(),
        };
        for (&k, p) in &self.components {
            out.components.insert(k, p.clone().scaled(a));
        }
        for (&(n, m), p) in &other.components {
            out = out.with_component(n, m, p.clone().scaled(b)).expect("keys already valid");
        }
        out
    }
}

/// The Casimir image, component by component.
pub fn apply_casimir(f: &TestFunction) -> Result<TestFunction> {
    if !(f.t_min > 0.0) {
        return Err(Error::InvalidTMin(f.t_min));
    }
    let mut out = TestFunction::new(f.support_t)?.with_t_min(f.t_min);
    for (&(n, m), p) in &f.components {
        let image = match p {
            RadialProfile::Zero => RadialProfile::Zero,
            _ => RadialProfile::Casimir {
                inner: Arc::new(p.clone()),
                n,
                m,
                t_min: f.t_min,
            },
        };
        out.components.insert((n, m), image);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DalembertianSample {
    pub point: AmbientVector,
    /// `(∂₁² + ∂₂² − ∂₃² − ∂₄²)` of the homogeneous extension.
    pub ambient: Complex64,
    /// `−(Ω f)(g_x)` from the radial operator.
    pub radial: Complex64,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DalembertianReport {
    pub samples: Vec<DalembertianSample>,
    pub max_discrepancy: f64,
}

/// Five points of the quadric spread over the angles, at the given radii.
pub fn default_sample_points(radii: [f64; 5]) -> Vec<AmbientVector> {
    let angles = [(0.3, 1.1), (2.0, -0.7), (-1.3, 2.9), (0.9, 0.2), (3.0, -2.2)];
    radii
        .iter()
        .zip(angles)
        .map(|(&t, (a, b))| spherical_point(t, a, b))
        .collect()
}

/// Compares the signature-(2,2) ambient Laplacian of the degree-zero
/// homogeneous extension of `f` with `−Ω f` at points of the quadric.
pub fn dalembertian_equals_casimir_check(
    f: &TestFunction,
    points: &[AmbientVector],
    step: f64,
) -> Result<DalembertianReport> {
    let omega = apply_casimir(f)?;
    let extension = |x: [f64; 4]| -> Complex64 {
        let v = AmbientVector::from_array(x);
        let q = v.quadratic_form();
        let s = 1.0 / q.sqrt();
        f.evaluate(ads_embed(AmbientVector::from_array(x.map(|c| c * s))))
    };
    let mut samples = Vec::with_capacity(points.len());
    let mut worst = 0.0f64;
    for &x in points {
        let base = x.to_array();
        let f0 = extension(base);
        let mut ambient = Complex64::new(0.0, 0.0);
        for (axis, sign) in [1.0, 1.0, -1.0, -1.0].into_iter().enumerate() {
            let shifted = |d: f64| {
                let mut y = base;
                y[axis] += d;
                extension(y)
            };
            let second = |h: f64| (shifted(h) - f0 * 2.0 + shifted(-h)) / (h * h);
            ambient += (second(step) * 4.0 - second(2.0 * step)) / 3.0 * sign;
        }
        let radial = -omega.evaluate(ads_embed(x));
        worst = worst.max((ambient - radial).norm());
        samples.push(DalembertianSample {
            point: x,
            ambient,
            radial,
            value: f0,
        });
    }
    Ok(DalembertianReport {
        samples,
        max_discrepancy: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn spline_reproduces_cubic_interior() {
        let knots: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
        let p = RadialProfile::sampled(knots, |t| c((t * 1.3).sin())).unwrap();
        for t in [0.55, 1.21, 2.5, 3.33] {
            assert!((p.eval(t).re - (t * 1.3).sin()).abs() < 1e-4);
        }
        assert_eq!(p.eval(5.0), c(0.0));
    }

    #[test]
    fn radial_component_zero_matches_operator() {
        let p = RadialProfile::bump(1.5, 1.0, 1.0);
        let f = TestFunction::new(3.0).unwrap().with_component(0, 0, p.clone()).unwrap();
        let img = apply_casimir(&f).unwrap();
        let q = img.component(0, 0).unwrap();
        for t in [0.8, 1.2, 1.9] {
            // closed-form derivatives of the bump
            let x: f64 = t - 1.5;
            let g = x * x / (1.0 - x * x);
            let gp = 2.0 * x / (1.0 - x * x).powi(2);
            let gpp = (2.0 + 6.0 * x * x) / (1.0 - x * x).powi(3);
            let e = (-g).exp();
            let exact = e * (gp * gp - gpp) + 2.0 / (2.0 * t).tanh() * (-gp * e);
            assert!((q.eval(t).re - exact).abs() < 1e-7, "{t}: {} {exact}", q.eval(t).re);
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let img = apply_casimir(&TestFunction::zero()).unwrap();
        assert!(img.is_zero());
        assert_eq!(img.evaluate(GroupElement::boost(0.4)), c(0.0));
    }

    #[test]
    fn rejects_nonpositive_t_min() {
        let f = TestFunction::zero().with_t_min(0.0);
        assert_eq!(apply_casimir(&f).unwrap_err(), Error::InvalidTMin(0.0));
    }

    #[test]
    fn rejects_odd_total_frequency() {
        assert!(TestFunction::zero().with_component(1, 0, RadialProfile::Zero).is_err());
    }

    #[test]
    fn matrix_element_sections_are_eigenfunctions() {
        for lam in [0.0, 0.7, 2.0] {
            for (n, m) in [(0i64, 0i64), (2, 0), (2, 2)] {
                let p = SpectralParameter::real(0, lam);
                let f = TestFunction::matrix_element_section(p, n, m, 3.0).unwrap();
                let img = apply_casimir(&f).unwrap();
                let ev = crate::principal_series::casimir_eigenvalue(p);
                let (src, dst) = (f.component(n, m).unwrap(), img.component(n, m).unwrap());
                let ts: Vec<f64> = (0..20).map(|i| 0.1 + 1.9 * i as f64 / 19.0).collect();
                let scale = ts.iter().map(|&t| src.eval(t).norm()).fold(0.0, f64::max);
                for &t in &ts {
                    let err = (dst.eval(t) - ev * src.eval(t)).norm() / (ev.norm() * scale);
                    assert!(err <= 1e-6, "λ={lam} ({n},{m}) t={t}: {err:e}");
                }
            }
        }
    }

    #[test]
    fn ambient_operator_is_minus_casimir() {
        let f = TestFunction::new(3.0)
            .unwrap()
            .with_component(0, 0, RadialProfile::bump(1.2, 1.0, 1.0))
            .unwrap();
        let pts = default_sample_points([0.6, 0.9, 1.2, 1.5, 1.8]);
        let rep = dalembertian_equals_casimir_check(&f, &pts, 1e-3).unwrap();
        assert!(rep.max_discrepancy <= 1e-4, "{}", rep.max_discrepancy);
        assert!(rep.samples.iter().any(|s| s.ambient.norm() > 1e-2));

        let zero = dalembertian_equals_casimir_check(&TestFunction::zero(), &pts, 1e-3).unwrap();
        assert_eq!(zero.max_discrepancy, 0.0);

        let sec = TestFunction::matrix_element_section(SpectralParameter::real(0, 1.0), 0, 0, 4.0).unwrap();
        let rep = dalembertian_equals_casimir_check(&sec, &pts, 1e-3).unwrap();
        for s in &rep.samples {
            assert!((s.ambient - s.value * 2.0).norm() < 1e-4, "{s:?}");
            assert!((s.radial - s.value * 2.0).norm() < 1e-5, "{s:?}");
        }
    }
}
