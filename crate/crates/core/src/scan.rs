//! Evaluation of the continued resolvent on a rectangle of `ζ` values.

use crate::error::{Error, Result};
use crate::geometry::GroupElement;
use crate::resolvent::{ContourSpec, Resolvent};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Points closer than this to a pole are skipped.
pub const POLE_EXCLUSION: f64 = 1e-3;

/// `re_points × im_points` samples of `[re_min, re_max] × [im_min, im_max]`,
/// endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub re_points: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub im_points: usize,
}

impl ScanGrid {
    pub fn is_empty(&self) -> bool {
        self.re_points == 0 || self.im_points == 0
    }

    /// Row-major in `Im ζ` descending, then `Re ζ` ascending.
    pub fn points(&self) -> Vec<Complex64> {
        let axis = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
            match n {
                0 => Vec::new(),
                1 => vec![lo],
                _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
            }
        };
        let res = axis(self.re_min, self.re_max, self.re_points);
        let ims = axis(self.im_max, self.im_min, self.im_points);
        ims.iter()
            .flat_map(|&im| res.iter().map(move |&re| Complex64::new(re, im)))
            .collect()
    }
}

impl FromStr for ScanGrid {
    type Err = Error;

    /// `re_min:re_max:re_points,im_min:im_max:im_points`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("grid '{s}' is not of the form a:b:n,c:d:k"));
        let axes: Vec<&str> = s.split(',').collect();
        if axes.len() != 2 {
            return Err(bad());
        }
        let parse_axis = |a: &str| -> Result<(f64, f64, usize)> {
            let parts: Vec<&str> = a.split(':').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let lo: f64 = parts[0].parse().map_err(|_| bad())?;
            let hi: f64 = parts[1].parse().map_err(|_| bad())?;
            let n: usize = parts[2].parse().map_err(|_| bad())?;
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(bad());
            }
            Ok((lo, hi, n))
        };
        let (re_min, re_max, re_points) = parse_axis(axes[0])?;
        let (im_min, im_max, im_points) = parse_axis(axes[1])?;
        Ok(Self {
            re_min,
            re_max,
            re_points,
            im_min,
            im_max,
            im_points,
        })
    }
}

impl fmt::Display for ScanGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{},{}:{}:{}",
            self.re_min, self.re_max, self.re_points, self.im_min, self.im_max, self.im_points
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanFlag {
    Ok,
    NearPole,
}

/// One sample; `abs` and `arg` are absent at skipped points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub re: f64,
    pub im: f64,
    pub abs: Option<f64>,
    pub arg: Option<f64>,
    pub flag: ScanFlag,
    /// Level of the nearby pole for skipped points.
    pub pole: Option<u32>,
}

/// Samples `R(ζ)f(g)` over the grid.
///
/// The whole rectangle must lie strictly above the contour `Im λ = −y`.
pub fn scan(resolvent: &Resolvent, grid: &ScanGrid, g: GroupElement, contour: &ContourSpec) -> Result<Vec<ScanRow>> {
    contour.validate()?;
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    if grid.im_min <= -contour.y {
        return Err(Error::Config(format!(
            "grid reaches Im zeta = {} but the contour sits at Im = -{}; raise y",
            grid.im_min, contour.y
        )));
    }
    grid.points()
        .into_iter()
        .map(|zeta| {
            let nearest = (-zeta.im).round().max(0.0);
            let distance = (zeta - Complex64::new(0.0, -nearest)).norm();
            if distance < POLE_EXCLUSION {
                return Ok(ScanRow {
                    re: zeta.re,
                    im: zeta.im,
                    abs: None,
                    arg: None,
                    flag: ScanFlag::NearPole,
                    pole: Some(nearest as u32),
                });
            }
            let r = resolvent.continued(zeta, g, contour)?.value;
            Ok(ScanRow {
                re: zeta.re,
                im: zeta.im,
                abs: Some(r.norm()),
                arg: Some(r.arg()),
                flag: ScanFlag::Ok,
                pole: None,
            })
        })
        .collect()
}
