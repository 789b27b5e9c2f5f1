//! The continuous part of the resolvent of `−Ω`, its meromorphic
//! continuation across the spectrum, and the character convolutions
//! `Θ^δ_{iλ} ∗ f` it is built from.
//!
//! On the physical sheet, with `ζ² = z − 1` and `Im ζ > 0`,
//!
//! `R(z)f(g) = ∫₀^∞ (λ² − ζ²)⁻¹ [T(λ) λ tanh(πλ/2) + C(λ) λ coth(πλ/2)] dλ`
//!
//! where `T(λ) = (Θ⁰_{iλ} ∗ f)(g)` and `C(λ) = (Θ¹_{iλ} ∗ f)(g)` are even
//! entire functions of `λ`. Moving the line of integration to `Im λ = −y`
//! gives
//!
//! `½∫_{ℝ−iy} [tanh(πλ/2) T + coth(πλ/2) C] / (λ − ζ) dλ + (i/ζ) C(0)
//!   + 2i Σ_{1 ≤ l < y} (Θ^{δ(l)}_l ∗ f)(g) / (il + ζ)`,
//!
//! valid for `Im ζ > −y`. The global normalisation of the Haar measure is
//! shared by every term.
//!
//! Two independent routes to `Θ ∗ f` are provided. The spectral route uses
//! `Θ ∗ f(g) = Tr π(g⁻¹) π(f)`: a component `p(t) e^{i(nθ + mφ)}` of `f`
//! contributes `c_{nm}(λ) ⟨π(g⁻¹)χ_{−n}, χ_{−m}⟩` with
//! `c_{nm}(λ) = ∫ p(t) m_λ(−n, −m; t) sinh 2t dt`. On a fixed quadrature grid
//! `c_{nm}(λ) = Σ_k W_k e^{iλu_k}`, which is entire in `λ` and cached per
//! node. [`theta_convolve`] instead integrates the character against `f`
//! over the group directly.

use crate::differential_ops::TestFunction;
use crate::error::{Error, Result};
use crate::geometry::{cartan_decompose, haar_weight, GroupElement};
use crate::principal_series::{
    beta_nodes, character_hyperbolic, parity_of_level, radial_matrix_element, BetaNode, SpectralParameter,
};
use crate::quadrature::{composite_gauss, kronrod_apply, kronrod_nodes, tanh_sinh};
use crate::residue_reps::{residue_rep, ResidueRepDescriptor};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::{FRAC_2_PI, PI, TAU};
use std::sync::RwLock;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A pole of the continued resolvent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub l: u32,
    pub zeta: Complex64,
    pub z: Complex64,
    pub parity: u8,
    pub rep: ResidueRepDescriptor,
}

/// `ζ = −il`, `z = 1 − l²` for `l = 0..=lmax`.
pub fn resonance_list(lmax: u32) -> Vec<Resonance> {
    (0..=lmax)
        .map(|l| {
            // `+ 0.0` turns the signed zeros of l = 0 and of Im z into +0
            let zeta = Complex64::new(0.0, -(l as f64) + 0.0);
            let z = zeta * zeta + 1.0;
            Resonance {
                l,
                zeta,
                z: Complex64::new(z.re, z.im + 0.0),
                parity: parity_of_level(l as i64),
                rep: residue_rep(l),
            }
        })
        .collect()
}

/// The line `Im λ = −y`, truncated to `|Re λ| <= lambda_max` and split into
/// `panels` Gauss-Kronrod panels before adaptive refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub y: f64,
    pub lambda_max: f64,
    pub panels: usize,
}

impl ContourSpec {
    pub fn new(y: f64) -> Self {
        Self {
            y,
            lambda_max: 40.0,
            panels: 160,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.y > 0.0) || (self.y - self.y.round()).abs() < 1e-9 {
            return Err(Error::Config(format!(
                "contour offset y = {} must be positive and not an integer",
                self.y
            )));
        }
        if !(self.lambda_max > 0.0) || self.panels == 0 {
            return Err(Error::Config("contour needs lambda_max > 0 and at least one panel".into()));
        }
        Ok(())
    }
}

/// Term-by-term breakdown of a resolvent value.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResolventTerms {
    /// The δ = 0 (tanh) integral.
    pub even_integral: Complex64,
    /// The δ = 1 (coth) integral.
    pub odd_integral: Complex64,
    pub residue_series: Complex64,
    pub zeta_pole_term: Complex64,
}

impl ResolventTerms {
    pub fn total(&self) -> Complex64 {
        self.even_integral + self.odd_integral + self.residue_series + self.zeta_pole_term
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub terms: ResolventTerms,
}

/// Numerical settings shared by the resolvent routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Relative tolerance of the λ-line integrals.
    pub tol: f64,
    /// Truncation of the λ-lines.
    pub lambda_max: f64,
    /// Base width of the λ-panels.
    pub panel_width: f64,
    /// Largest `|Im λ|` the spectral grid is sized for.
    pub y_max: f64,
    /// Width of the Gauss-Legendre panels in `t`.
    pub t_panel_width: f64,
    pub t_order: usize,
    /// Relative tolerance of [`theta_convolve`].
    pub convolution_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            lambda_max: 40.0,
            panel_width: 0.5,
            y_max: 3.0,
            t_panel_width: 0.25,
            t_order: 16,
            convolution_tol: 1e-6,
        }
    }
}

impl QuadratureConfig {
    pub fn contour(&self, y: f64) -> ContourSpec {
        ContourSpec {
            y,
            lambda_max: self.lambda_max,
            panels: ((2.0 * self.lambda_max / self.panel_width).ceil() as usize).max(1),
        }
    }
}

struct Component {
    n: i64,
    m: i64,
    delta: u8,
    weights: Vec<Complex64>,
}

/// `c_{nm}(λ) = Σ_k W_k e^{iλ u_k}` for every component of `f`.
struct SpectralGrid {
    u: Vec<f64>,
    components: Vec<Component>,
}

impl SpectralGrid {
    fn build(f: &TestFunction, cfg: &QuadratureConfig) -> Result<Self> {
        let (lo, hi) = support_range(f);
        let mut u = Vec::new();
        let mut components: Vec<Component> = f
            .components()
            .map(|(&(n, m), _)| Component {
                n,
                m,
                delta: n.rem_euclid(2) as u8,
                weights: Vec::new(),
            })
            .collect();
        if !(hi > lo) {
            return Ok(Self { u, components });
        }
        let panels = ((hi - lo) / cfg.t_panel_width).ceil().max(1.0) as usize;
        let probe = Complex64::new(cfg.lambda_max, -cfg.y_max);
        let profiles: Vec<_> = f.components().map(|(_, p)| p).collect();
        for (t, wt) in composite_gauss(lo, hi, panels, cfg.t_order) {
            let values: Vec<Complex64> = profiles.iter().map(|p| p.eval(t)).collect();
            if values.iter().all(|v| v.norm() == 0.0) {
                continue;
            }
            let nodes = beta_grid_for(t, probe, &components)?;
            let base = wt * haar_weight(t);
            for nd in &nodes {
                u.push(nd.u);
                for (c, v) in components.iter_mut().zip(&values) {
                    let angular = (c.n as f64 * nd.theta - c.m as f64 * nd.phi).cos();
                    c.weights.push(v * (base * nd.weight * angular));
                }
            }
        }
        Ok(Self { u, components })
    }

    fn coefficients(&self, lambda: Complex64) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.components.len()];
        let il = I * lambda;
        for (k, &u) in self.u.iter().enumerate() {
            let e = (il * u).exp();
            for (o, c) in out.iter_mut().zip(&self.components) {
                o.re += e.re * c.weights[k].re - e.im * c.weights[k].im;
                o.im += e.re * c.weights[k].im + e.im * c.weights[k].re;
            }
        }
        out
    }
}

fn support_range(f: &TestFunction) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, p) in f.components() {
        let (a, b) = p.support();
        if b > a {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    (lo.max(f.t_min), hi.min(f.support_t))
}

/// Smallest trapezoid grid in β resolving every component at λ = 0 and at `probe`.
fn beta_grid_for(t: f64, probe: Complex64, comps: &[Component]) -> Result<Vec<BetaNode>> {
    let eval = |nodes: &[BetaNode], lambda: Complex64, n: i64, m: i64| -> (Complex64, f64) {
        let mut acc = ZERO;
        let mut mag = 0.0;
        for nd in nodes {
            let term = (I * lambda * nd.u).exp() * (nd.weight * (n as f64 * nd.theta - m as f64 * nd.phi).cos());
            acc += term;
            mag += term.norm();
        }
        (acc, mag)
    };
    let mut size = 64;
    let mut prev = beta_nodes(t, size);
    loop {
        let next = beta_nodes(t, 2 * size);
        let converged = comps.iter().all(|c| {
            [ZERO, probe].iter().all(|&lam| {
                let (a, _) = eval(&prev, lam, c.n, c.m);
                let (b, mag) = eval(&next, lam, c.n, c.m);
                (a - b).norm() <= 1e-13 * mag.max(1e-300)
            })
        });
        if converged || comps.is_empty() {
            return Ok(prev);
        }
        size *= 2;
        if size > 1 << 20 {
            return Err(Error::NonConvergence {
                what: "spectral grid in beta",
                estimate: f64::NAN,
                tolerance: 1e-13,
            });
        }
        prev = next;
    }
}

/// Evaluator of the resolvent of one test function with memoised `c_{nm}(λ)`.
///
/// ```no_run
/// use adsres_core::{GroupElement, QuadratureConfig, Resolvent, RunConfig};
/// use num_complex::Complex64;
///
/// # fn main() -> adsres_core::Result<()> {
/// let cfg = RunConfig::default();
/// let r = Resolvent::new(cfg.test_function.build()?, QuadratureConfig::default())?;
/// let g = GroupElement::from_cartan(0.3, 0.4, -1.1);
/// let value = r.continued(Complex64::new(0.3, -0.4), g, &cfg.contour(1.5))?.value;
/// let fit = r.residue_fit(1, g)?;
/// # let _ = (value, fit);
/// # Ok(())
/// # }
/// ```
pub struct Resolvent {
    f: TestFunction,
    cfg: QuadratureConfig,
    grid: SpectralGrid,
    cache: RwLock<HashMap<(u64, u64), Vec<Complex64>>>,
}

impl Resolvent {
    pub fn new(f: TestFunction, cfg: QuadratureConfig) -> Result<Self> {
        let grid = SpectralGrid::build(&f, &cfg)?;
        Ok(Self {
            f,
            cfg,
            grid,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn test_function(&self) -> &TestFunction {
        &self.f
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// Number of memoised λ values.
    pub fn cache_len(&self) -> usize {
        self.cache.read().map(|c| c.len()).unwrap_or(0)
    }

    fn coefficients(&self, lambda: Complex64) -> Vec<Complex64> {
        let key = (lambda.re.to_bits(), lambda.im.to_bits());
        if let Some(v) = self.cache.read().ok().and_then(|c| c.get(&key).cloned()) {
            return v;
        }
        let v = self.grid.coefficients(lambda);
        if let Ok(mut c) = self.cache.write() {
            c.insert(key, v.clone());
        }
        v
    }

    /// `(Θ^δ_{iλ} ∗ f)(g)` through `Tr π(g⁻¹)π(f)`.
    pub fn theta_convolve_spectral(&self, p: SpectralParameter, g: GroupElement) -> Result<Complex64> {
        let coeffs = self.coefficients(p.lambda);
        let ginv = cartan_decompose(g.inverse());
        let identity = ginv.t == 0.0 && ginv.theta == 0.0;
        let mut acc = ZERO;
        for (c, coef) in self.grid.components.iter().zip(coeffs) {
            if c.delta != p.delta {
                continue;
            }
            let (a, b) = (-c.m, -c.n);
            let elem = if identity {
                if a == b {
                    Complex64::new(1.0, 0.0)
                } else {
                    ZERO
                }
            } else {
                Complex64::from_polar(1.0, a as f64 * ginv.theta + b as f64 * ginv.phi)
                    * radial_matrix_element(p.lambda, a, b, ginv.t)?
            };
            acc += coef * elem;
        }
        Ok(acc)
    }

    fn tc(&self, lambda: Complex64, g: GroupElement) -> Result<(Complex64, Complex64)> {
        Ok((
            self.theta_convolve_spectral(SpectralParameter::new(0, lambda), g)?,
            self.theta_convolve_spectral(SpectralParameter::new(1, lambda), g)?,
        ))
    }

    /// The physical-sheet resolvent at `z ∉ [1, ∞)`.
    pub fn physical(&self, z: Complex64, g: GroupElement) -> Result<ResolventValue> {
        if z.im == 0.0 && z.re >= 1.0 {
            return Err(Error::OnCut { re: z.re, im: z.im });
        }
        let lmax = self.cfg.lambda_max;
        let panels = ((lmax / self.cfg.panel_width).ceil() as usize).max(1);
        let integrand = |s: f64| -> Result<(Complex64, Complex64)> {
            let (t, c) = self.tc(Complex64::new(s, 0.0), g)?;
            let x = 0.5 * PI * s;
            let denom = Complex64::new(s * s + 1.0, 0.0) - z;
            Ok((t * (s * x.tanh()) / denom, c * (s / x.tanh()) / denom))
        };
        let (even, odd, err) = adaptive_line(0.0, lmax, panels, self.cfg.tol, &integrand)?;
        let tail = integrand(lmax)?;
        self.check_tail(tail.0 + tail.1, even + odd)?;
        let terms = ResolventTerms {
            even_integral: even,
            odd_integral: odd,
            ..Default::default()
        };
        Ok(ResolventValue {
            value: terms.total(),
            error_estimate: err + tail.0.norm() + tail.1.norm(),
            terms,
        })
    }

    /// The continued resolvent at `ζ` using the line `Im λ = −contour.y`.
    pub fn continued(&self, zeta: Complex64, g: GroupElement, contour: &ContourSpec) -> Result<ResolventValue> {
        contour.validate()?;
        let y = contour.y;
        if zeta.im <= -y {
            return Err(Error::BelowContour { im: zeta.im, y });
        }
        for l in 0..=(y.floor() as u32) {
            if (zeta + I * l as f64).norm() < 1e-12 {
                return Err(Error::Pole { l });
            }
        }
        let integrand = |s: f64| -> Result<(Complex64, Complex64)> {
            let lambda = Complex64::new(s, -y);
            let (t, c) = self.tc(lambda, g)?;
            let th = (lambda * (0.5 * PI)).tanh();
            let denom = (lambda - zeta) * 2.0;
            Ok((t * th / denom, c / (th * denom)))
        };
        let (even, odd, err) = adaptive_line(
            -contour.lambda_max,
            contour.lambda_max,
            contour.panels,
            self.cfg.tol,
            &integrand,
        )?;
        let tails = [integrand(-contour.lambda_max)?, integrand(contour.lambda_max)?];
        let tail: Complex64 = tails.iter().map(|(a, b)| a + b).sum();
        self.check_tail(tail, even + odd)?;

        let c0 = self.theta_convolve_spectral(SpectralParameter::new(1, ZERO), g)?;
        let zeta_pole_term = I / zeta * c0;
        let mut residue_series = ZERO;
        for l in 1..=(y.floor() as i64) {
            let p = SpectralParameter::integral(parity_of_level(l), l);
            let theta = self.theta_convolve_spectral(p, g)?;
            residue_series += 2.0 * I * theta / (I * l as f64 + zeta);
        }
        let terms = ResolventTerms {
            even_integral: even,
            odd_integral: odd,
            residue_series,
            zeta_pole_term,
        };
        Ok(ResolventValue {
            value: terms.total(),
            error_estimate: err + tails.iter().map(|(a, b)| a.norm() + b.norm()).sum::<f64>(),
            terms,
        })
    }

    fn check_tail(&self, tail: Complex64, total: Complex64) -> Result<()> {
        // the integrands decay on a unit scale, so the endpoint value bounds the tail
        let bound = self.cfg.tol * total.norm().max(1e-300);
        if tail.norm() > bound.max(1e-14 * self.f.sup_norm()) {
            return Err(Error::NonConvergence {
                what: "lambda-line truncation",
                estimate: tail.norm(),
                tolerance: bound,
            });
        }
        Ok(())
    }

    /// Fits the residue at `ζ = −il` from samples on two small circles.
    pub fn residue_fit(&self, l: u32, g: GroupElement) -> Result<ResidueFit> {
        if l == 0 {
            return Err(Error::Config("the pole at zeta = 0 is the explicit (i/zeta) term".into()));
        }
        let contour = self.cfg.contour(l as f64 + 0.5);
        let center = Complex64::new(0.0, -(l as f64));
        let samples = 16;
        let laurent = |eps: f64| -> Result<(Complex64, Complex64, f64)> {
            let (mut a1, mut a2, mut mag) = (ZERO, ZERO, 0.0f64);
            for k in 0..samples {
                let w = Complex64::from_polar(1.0, TAU * (k as f64 + 0.5) / samples as f64);
                let r = self.continued(center + w * eps, g, &contour)?.value;
                a1 += r * w * eps;
                a2 += r * w * w * eps * eps;
                mag = mag.max(r.norm() * eps);
            }
            Ok((a1 / samples as f64, a2 / samples as f64, mag))
        };
        let (c1, _, _) = laurent(0.05)?;
        let (c2, d2, mag) = laurent(0.025)?;
        let residual = (c1 - c2).norm().max(d2.norm() / 0.025);
        let floor = 1e-9 * mag.max(self.f.sup_norm());
        if residual > 0.01 * c2.norm() && residual > floor {
            return Err(Error::NonConvergence {
                what: "residue fit",
                estimate: residual,
                tolerance: 0.01 * c2.norm(),
            });
        }
        Ok(ResidueFit {
            l,
            residue: c2,
            residual,
            second_order: d2,
        })
    }
}

/// Result of [`Resolvent::residue_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueFit {
    pub l: u32,
    /// Coefficient of `(ζ + il)⁻¹`.
    pub residue: Complex64,
    /// Disagreement between the two radii, or the size of the `(ζ + il)⁻²` coefficient.
    pub residual: f64,
    pub second_order: Complex64,
}

type Pair = (Complex64, Complex64);

/// Adaptive Gauss-Kronrod integration of a pair of integrands over `[a, b]`.
fn adaptive_line<F>(a: f64, b: f64, panels: usize, tol: f64, f: &F) -> Result<(Complex64, Complex64, f64)>
where
    F: Fn(f64) -> Result<Pair>,
{
    struct Panel {
        lo: f64,
        hi: f64,
        even: Complex64,
        odd: Complex64,
        err: f64,
        depth: u32,
    }
    let eval = |lo: f64, hi: f64, depth: u32| -> Result<Panel> {
        let xs = kronrod_nodes(lo, hi);
        let mut fe = [ZERO; 15];
        let mut fo = [ZERO; 15];
        for (k, &x) in xs.iter().enumerate() {
            let (e, o) = f(x)?;
            fe[k] = e;
            fo[k] = o;
        }
        let (even, ee) = kronrod_apply(lo, hi, &fe);
        let (odd, eo) = kronrod_apply(lo, hi, &fo);
        Ok(Panel {
            lo,
            hi,
            even,
            odd,
            err: ee + eo,
            depth,
        })
    };
    let h = (b - a) / panels as f64;
    let mut list = Vec::with_capacity(panels);
    for k in 0..panels {
        list.push(eval(a + k as f64 * h, a + (k + 1) as f64 * h, 0)?);
    }
    loop {
        let (even, odd, err, scale) = list.iter().fold((ZERO, ZERO, 0.0, 0.0), |acc, p| {
            (acc.0 + p.even, acc.1 + p.odd, acc.2 + p.err, acc.3 + p.even.norm() + p.odd.norm())
        });
        if err <= tol * scale.max(1e-300) || scale == 0.0 {
            return Ok((even, odd, err));
        }
        let worst = (0..list.len())
            .max_by(|&i, &j| list[i].err.total_cmp(&list[j].err))
            .expect("nonempty");
        if list[worst].depth >= 12 {
            return Err(Error::NonConvergence {
                what: "lambda-line quadrature",
                estimate: err,
                tolerance: tol * scale,
            });
        }
        let p = list.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        list.push(eval(p.lo, mid, p.depth + 1)?);
        list.push(eval(mid, p.hi, p.depth + 1)?);
    }
}

/// [`Resolvent::physical`] with default settings.
pub fn resolvent_physical(f: &TestFunction, z: Complex64, g: GroupElement) -> Result<ResolventValue> {
    Resolvent::new(f.clone(), QuadratureConfig::default())?.physical(z, g)
}

/// [`Resolvent::continued`] with default settings.
pub fn resolvent_continued(
    f: &TestFunction,
    zeta: Complex64,
    g: GroupElement,
    contour: &ContourSpec,
) -> Result<ResolventValue> {
    let cfg = QuadratureConfig {
        lambda_max: contour.lambda_max,
        y_max: QuadratureConfig::default().y_max.max(contour.y),
        ..Default::default()
    };
    Resolvent::new(f.clone(), cfg)?.continued(zeta, g, contour)
}

/// [`Resolvent::residue_fit`] with default settings.
pub fn residue_fit(f: &TestFunction, l: u32, g: GroupElement) -> Result<ResidueFit> {
    let cfg = QuadratureConfig {
        y_max: QuadratureConfig::default().y_max.max(l as f64 + 0.5),
        ..Default::default()
    };
    Resolvent::new(f.clone(), cfg)?.residue_fit(l, g)
}

/// Which Plancherel density factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityKind {
    Tanh,
    Coth,
}

impl DensityKind {
    pub fn eval(self, lambda: Complex64) -> Complex64 {
        let t = (lambda * (0.5 * PI)).tanh();
        match self {
            DensityKind::Tanh => t,
            DensityKind::Coth => 1.0 / t,
        }
    }

    fn name(self) -> &'static str {
        match self {
            DensityKind::Tanh => "tanh",
            DensityKind::Coth => "coth",
        }
    }
}

/// Residue of `tanh(πλ/2)` (odd `l`) or `coth(πλ/2)` (even `l`) at `λ = −il`.
pub fn density_residue(kind: DensityKind, l: u32) -> Result<f64> {
    let has_pole = match kind {
        DensityKind::Tanh => l % 2 == 1,
        DensityKind::Coth => l.is_multiple_of(2),
    };
    if has_pole {
        Ok(FRAC_2_PI)
    } else {
        Err(Error::NoPole { kind: kind.name(), l })
    }
}

/// Value of a 3D character convolution with its doubling error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionValue {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// `(Θ^δ_{iλ} ∗ f)(g) = ∫_G Θ^δ_{iλ}(x) f(gx) dx` by direct quadrature.
///
/// With `x = k_θ a_t k_φ`, `ψ = θ + φ` and `χ = θ − φ`, the character
/// depends on `(t, ψ)` only and vanishes unless `cosh t |cos ψ| > 1`. The ψ
/// integral runs over the two hyperbolic arcs with a tanh-sinh rule that
/// absorbs the inverse square-root growth at their ends, `χ` uses the
/// trapezoid rule and `t` composite Gauss-Legendre panels. Resolution is
/// doubled until two levels agree to `tol` relative to the integral of the
/// absolute integrand.
pub fn theta_convolve(
    p: SpectralParameter,
    f: &TestFunction,
    g: GroupElement,
    tol: f64,
) -> Result<ConvolutionValue> {
    let (lo, hi) = support_range(f);
    if !(hi > lo) || f.is_zero() {
        return Ok(ConvolutionValue {
            value: ZERO,
            error_estimate: 0.0,
        });
    }
    let tg = cartan_decompose(g).t;
    let range = ((lo - tg).max(0.0), hi + tg);
    let mut prev = convolve_level(p, f, g, range, 0);
    for level in 1..=3 {
        let next = convolve_level(p, f, g, range, level);
        let err = (next.0 - prev.0).norm();
        if err <= tol * next.1.max(1e-300) {
            return Ok(ConvolutionValue {
                value: next.0,
                error_estimate: err,
            });
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        what: "character convolution",
        estimate: (prev.0).norm(),
        tolerance: tol,
    })
}

/// Returns the integral and the integral of its absolute value.
fn convolve_level(
    p: SpectralParameter,
    f: &TestFunction,
    g: GroupElement,
    (t0, t1): (f64, f64),
    level: u32,
) -> (Complex64, f64) {
    let scale = 1usize << level;
    let t_panels = (((t1 - t0) / 0.25).ceil() as usize).max(1) * scale;
    let psi_rule = tanh_sinh(0.125 / scale as f64, 4.0);
    let n_chi = 64 * scale;
    let identity = g == GroupElement::IDENTITY;
    let (mut acc, mut mag) = (ZERO, 0.0);
    for (t, wt) in composite_gauss(t0, t1, t_panels, 12) {
        if t <= 0.0 {
            continue;
        }
        let psi0 = (1.0 / t.cosh()).acos();
        let (sh, w_t) = (t.sinh(), wt * haar_weight(t));
        let (mut inner, mut inner_abs) = (ZERO, 0.0);
        for &(x, comp, w) in &psi_rule {
            let d = psi0 * comp;
            let cs = sh * d.sin() - 2.0 * (0.5 * d).sin().powi(2);
            if cs <= 0.0 {
                continue;
            }
            let s = 2.0 * (0.5 * cs).sqrt().asinh();
            for (offset, negative) in [(0.0, false), (PI, true)] {
                let psi = offset + psi0 * x;
                let theta_val = character_hyperbolic(p, s, negative);
                let (mut chi_sum, mut chi_abs) = (ZERO, 0.0);
                for k in 0..n_chi {
                    let chi = TAU * k as f64 / n_chi as f64;
                    let (th, ph) = (0.5 * (psi + chi), 0.5 * (psi - chi));
                    let v = if identity {
                        f.evaluate_kak(t, th, ph)
                    } else {
                        f.evaluate(g * GroupElement::from_cartan(t, th, ph))
                    };
                    chi_sum += v;
                    chi_abs += v.norm();
                }
                let weight = w * psi0 / (TAU * n_chi as f64);
                inner += theta_val * chi_sum * weight;
                inner_abs += theta_val.norm() * chi_abs * weight;
            }
        }
        acc += inner * w_t;
        mag += inner_abs * w_t;
    }
    (acc, mag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential_ops::RadialProfile;
    use crate::quadrature::circle_integral;

    fn even_f() -> TestFunction {
        TestFunction::new(4.5)
            .unwrap()
            .with_component(0, 0, RadialProfile::bump(2.1, 2.0, 20.0))
            .unwrap()
            .with_component(2, 2, RadialProfile::bump(2.1, 2.0, 20.0).scaled(Complex64::new(0.5, 0.0)))
            .unwrap()
    }

    fn small_f(n: i64, m: i64) -> TestFunction {
        TestFunction::new(2.0)
            .unwrap()
            .with_component(n, m, RadialProfile::bump(1.0, 0.8, 4.0))
            .unwrap()
    }

    #[test]
    fn resonance_list_values() {
        let r = resonance_list(0);
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].l, r[0].zeta, r[0].z, r[0].parity), (0, ZERO, Complex64::new(1.0, 0.0), 1));
        let r = resonance_list(2);
        assert_eq!((r[1].zeta, r[1].z, r[1].parity), (-I, ZERO, 0));
        assert_eq!((r[2].zeta, r[2].z, r[2].parity), (-2.0 * I, Complex64::new(-3.0, 0.0), 1));
    }

    #[test]
    fn density_residues() {
        assert_eq!(density_residue(DensityKind::Tanh, 1).unwrap(), 2.0 / PI);
        assert_eq!(density_residue(DensityKind::Coth, 2).unwrap(), 2.0 / PI);
        assert_eq!(density_residue(DensityKind::Coth, 0).unwrap(), 2.0 / PI);
        assert!(density_residue(DensityKind::Tanh, 2).is_err());
        let v = circle_integral(-I, 0.5, 128, |z| DensityKind::Tanh.eval(z));
        assert!((v - 2.0 * PI * I * (2.0 / PI)).norm() < 1e-8);
    }

    #[test]
    fn contour_validation() {
        assert!(ContourSpec::new(1.0).validate().is_err());
        assert!(ContourSpec::new(0.0).validate().is_err());
        assert!(ContourSpec::new(1.5).validate().is_ok());
    }

    #[test]
    fn zero_function_gives_zero() {
        let r = Resolvent::new(TestFunction::zero(), QuadratureConfig::default()).unwrap();
        let v = r.continued(Complex64::new(0.3, 0.2), GroupElement::IDENTITY, &ContourSpec::new(1.5)).unwrap();
        assert_eq!(v.value, ZERO);
        let v = r.physical(Complex64::new(-10.0, 0.0), GroupElement::IDENTITY).unwrap();
        assert_eq!(v.value, ZERO);
        let c = theta_convolve(SpectralParameter::real(0, 1.0), &TestFunction::zero(), GroupElement::IDENTITY, 1e-6)
            .unwrap();
        assert_eq!(c.value, ZERO);
    }

    #[test]
    fn errors_are_reported() {
        let r = Resolvent::new(small_f(0, 0), QuadratureConfig::default()).unwrap();
        let e = GroupElement::IDENTITY;
        assert!(matches!(r.physical(Complex64::new(2.0, 0.0), e), Err(Error::OnCut { .. })));
        assert_eq!(r.continued(-I, e, &ContourSpec::new(1.5)).unwrap_err(), Error::Pole { l: 1 });
        assert_eq!(r.continued(ZERO, e, &ContourSpec::new(0.5)).unwrap_err(), Error::Pole { l: 0 });
        assert!(matches!(
            r.continued(-2.0 * I, e, &ContourSpec::new(1.5)),
            Err(Error::BelowContour { .. })
        ));
    }

    #[test]
    fn spectral_and_direct_convolutions_agree() {
        let g = GroupElement::rotation(0.4) * GroupElement::boost(0.3) * GroupElement::rotation(-1.1);
        for (f, p) in [
            (small_f(0, 0), SpectralParameter::real(0, 0.8)),
            (small_f(0, 0), SpectralParameter::integral(0, 1)),
            (small_f(1, 1), SpectralParameter::integral(1, 2)),
            (small_f(1, -1), SpectralParameter::real(1, 1.7)),
            (small_f(2, 0), SpectralParameter::real(0, 0.3)),
        ] {
            let r = Resolvent::new(f.clone(), QuadratureConfig::default()).unwrap();
            for h in [GroupElement::IDENTITY, g] {
                let spectral = r.theta_convolve_spectral(p, h).unwrap();
                let direct = theta_convolve(p, &f, h, 1e-7).unwrap().value;
                let scale = spectral.norm().max(direct.norm()).max(1e-3);
                assert!(
                    (spectral - direct).norm() <= 1e-4 * scale,
                    "{p:?}: {spectral} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn parity_mismatch_vanishes() {
        let f = small_f(1, 1);
        let p = SpectralParameter::real(0, 0.9);
        assert!(theta_convolve(p, &f, GroupElement::IDENTITY, 1e-6).unwrap().value.norm() < 1e-8 * f.sup_norm());
        let f = small_f(2, 2);
        let p = SpectralParameter::integral(1, 2);
        let g = GroupElement::boost(0.5);
        assert!(theta_convolve(p, &f, g, 1e-6).unwrap().value.norm() < 1e-8 * f.sup_norm());
        let r = Resolvent::new(f, QuadratureConfig::default()).unwrap();
        assert_eq!(r.theta_convolve_spectral(p, g).unwrap(), ZERO);
    }

    #[test]
    fn physical_agrees_with_continuation() {
        let r = Resolvent::new(even_f(), QuadratureConfig::default()).unwrap();
        let g = GroupElement::IDENTITY;
        let z = Complex64::new(-10.0, 0.0);
        let phys = r.physical(z, g).unwrap();
        assert_eq!(phys.value, phys.terms.total());
        let zeta = (z - 1.0).sqrt();
        assert!(zeta.im > 0.0);
        let cont = r.continued(zeta, g, &ContourSpec::new(0.5)).unwrap();
        assert!((phys.value - cont.value).norm() <= 1e-6 * phys.value.norm(), "{phys:?} {cont:?}");
    }
}
