//! Run configuration: quadrature settings, contour height, lattice bounds,
//! seed, check tolerances and the test function, read from TOML.
//!
//! Every field has a default, so an empty file is a valid configuration.
//!
//! ```toml
//! y = 1.5
//! seed = 7
//!
//! [quadrature]
//! lambda_max = 40.0
//!
//! [[test_function.components]]
//! n = 0
//! m = 0
//! profile = { kind = "bump", center = 2.1, width = 2.0, sharpness = 20.0 }
//! amplitude = [1.0, 0.0]
//! ```

use crate::differential_ops::{RadialProfile, TestFunction, DEFAULT_T_MIN};
use crate::error::{Error, Result};
use crate::geometry::GroupElement;
use crate::resolvent::{ContourSpec, QuadratureConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub quadrature: QuadratureConfig,
    /// Height of the shifted contour `Im λ = −y`.
    pub y: f64,
    pub seed: u64,
    /// Cartan coordinates `(t, θ, φ)` of the evaluation point.
    pub evaluation_point: [f64; 3],
    pub lattice: LatticeBounds,
    pub checks: CheckTolerances,
    pub test_function: TestFunctionConfig,
    pub outputs: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            y: 0.5,
            seed: 2024,
            evaluation_point: [0.3, 0.4, -1.1],
            lattice: LatticeBounds::default(),
            checks: CheckTolerances::default(),
            test_function: TestFunctionConfig::default(),
            outputs: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LatticeBounds {
    pub lmax: u32,
    /// Half-width of the checked `(n, m)` square; `None` means `3l + 7`.
    pub radius: Option<i64>,
}

impl Default for LatticeBounds {
    fn default() -> Self {
        Self { lmax: 12, radius: None }
    }
}

impl LatticeBounds {
    pub fn radius_for(&self, l: u32) -> i64 {
        self.radius.unwrap_or(3 * l as i64 + 7)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckTolerances {
    pub geometry: f64,
    pub casimir: f64,
    pub contour: f64,
    /// The second contour height compared against `y`.
    pub contour_y2: f64,
    pub residue: f64,
    pub parity: f64,
    pub poisson_threshold: f64,
    pub random_samples: usize,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self {
            geometry: 1e-12,
            casimir: 1e-6,
            contour: 1e-6,
            contour_y2: 1.5,
            residue: 0.02,
            parity: 1e-6,
            poisson_threshold: 1e-8,
            random_samples: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TestFunctionConfig {
    pub support: f64,
    pub t_min: f64,
    pub components: Vec<ComponentConfig>,
}

impl Default for TestFunctionConfig {
    /// An even two-component function.
    fn default() -> Self {
        Self {
            support: 4.5,
            t_min: DEFAULT_T_MIN,
            components: vec![
                ComponentConfig::bump(0, 0, 1.0),
                ComponentConfig::bump(2, 2, 0.5),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub n: i64,
    pub m: i64,
    pub profile: ProfileConfig,
    /// Real and imaginary part of the coefficient.
    #[serde(default = "unit_amplitude")]
    pub amplitude: [f64; 2],
}

fn unit_amplitude() -> [f64; 2] {
    [1.0, 0.0]
}

impl ComponentConfig {
    fn bump(n: i64, m: i64, amplitude: f64) -> Self {
        Self {
            n,
            m,
            profile: ProfileConfig::default(),
            amplitude: [amplitude, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    /// Smooth bump supported on `[center − width, center + width]`.
    Bump { center: f64, width: f64, sharpness: f64 },
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self::Bump {
            center: 2.1,
            width: 2.0,
            sharpness: 20.0,
        }
    }
}

impl TestFunctionConfig {
    pub fn build(&self) -> Result<TestFunction> {
        if !(self.t_min > 0.0) {
            return Err(Error::InvalidTMin(self.t_min));
        }
        let mut f = TestFunction::new(self.support)?.with_t_min(self.t_min);
        for c in &self.components {
            let ProfileConfig::Bump { center, width, sharpness } = c.profile;
            if !(width > 0.0) || !(sharpness > 0.0) {
                return Err(Error::Config(format!(
                    "bump for ({}, {}) needs positive width and sharpness",
                    c.n, c.m
                )));
            }
            let profile = RadialProfile::bump(center, width, sharpness)
                .scaled(Complex64::new(c.amplitude[0], c.amplitude[1]));
            f = f.with_component(c.n, c.m, profile)?;
        }
        Ok(f)
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Positive tolerances and admissible contour heights.
    pub fn validate(&self) -> Result<()> {
        let q = &self.quadrature;
        let c = &self.checks;
        let positive = [
            ("quadrature.tol", q.tol),
            ("quadrature.lambda_max", q.lambda_max),
            ("quadrature.panel_width", q.panel_width),
            ("quadrature.y_max", q.y_max),
            ("quadrature.t_panel_width", q.t_panel_width),
            ("quadrature.convolution_tol", q.convolution_tol),
            ("checks.geometry", c.geometry),
            ("checks.casimir", c.casimir),
            ("checks.contour", c.contour),
            ("checks.residue", c.residue),
            ("checks.parity", c.parity),
            ("checks.poisson_threshold", c.poisson_threshold),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if q.t_order == 0 {
            return Err(Error::Config("quadrature.t_order must be at least 1".into()));
        }
        self.contour(self.y).validate()?;
        self.contour(c.contour_y2).validate()?;
        if self.y.max(c.contour_y2) > q.y_max {
            return Err(Error::Config(format!(
                "contour heights must not exceed quadrature.y_max = {}",
                q.y_max
            )));
        }
        Ok(())
    }

    pub fn contour(&self, y: f64) -> ContourSpec {
        self.quadrature.contour(y)
    }

    pub fn evaluation_point(&self) -> GroupElement {
        let [t, theta, phi] = self.evaluation_point;
        GroupElement::from_cartan(t, theta, phi)
    }
}
