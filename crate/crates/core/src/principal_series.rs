//! The principal series `π^δ_{iλ}` in the compact picture.
//!
//! The representation space is spanned by the characters `χ_n(k_θ) = e^{inθ}`
//! with `n ≡ δ (mod 2)`, and `π(g)f(k) = e^{(iλ+1)u(kg)} f(k(kg))` where
//! `kg = n(x) a(u) k(kg)` is the Iwasawa factorisation.
//!
//! Matrix elements are evaluated through their radial part: for
//! `g = k_α a_t k_β`,
//! `⟨π(g)χ_m, χ_n⟩ = e^{i(nα + mβ)} m_λ(n, m; t)`.
//! The K-integral defining `m_λ` is reparametrised by the angle `β` with
//! `tan θ = e^{-t} tan β`, which removes the `e^{2t}` clustering of the
//! integrand and makes a uniform trapezoid rule spectrally accurate with
//! `O(e^t)` nodes.

use crate::error::{Error, Result};
use crate::geometry::{cartan_decompose, GroupElement};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

const TRAPEZOID_START: usize = 512;
const TRAPEZOID_MAX: usize = 1 << 22;
const TRAPEZOID_TOL: f64 = 1e-11;

/// Labels the principal series `π^δ_{iλ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParameter {
    pub delta: u8,
    pub lambda: Complex64,
}

impl SpectralParameter {
    pub fn new(delta: u8, lambda: Complex64) -> Self {
        debug_assert!(delta <= 1);
        Self { delta, lambda }
    }

    pub fn real(delta: u8, lambda: f64) -> Self {
        Self::new(delta, Complex64::new(lambda, 0.0))
    }

    /// The parameter with `iλ = il`, i.e. `λ = -i·il`.
    pub fn integral(delta: u8, il: i64) -> Self {
        Self::new(delta, Complex64::new(0.0, -(il as f64)))
    }
}

/// `δ(l)`: 0 for odd `l`, 1 for even `l`.
pub fn parity_of_level(l: i64) -> u8 {
    if l.rem_euclid(2) == 1 {
        0
    } else {
        1
    }
}

/// A character `χ_n` of K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KType {
    pub n: i64,
}

impl KType {
    pub fn compatible(self, delta: u8) -> bool {
        self.n.rem_euclid(2) == delta as i64
    }
}

pub(crate) fn check_parity(delta: u8, n: i64) -> Result<()> {
    if (KType { n }).compatible(delta) {
        Ok(())
    } else {
        Err(Error::Parity { delta, n })
    }
}

/// One node of the β-reparametrised K-integral at fixed `t`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BetaNode {
    /// Iwasawa A-coordinate `u(k_θ a_t)`.
    pub u: f64,
    /// `e^u dθ/dβ` times the folded trapezoid weight.
    pub weight: f64,
    pub theta: f64,
    pub phi: f64,
}

/// The quarter-period nodes of an `n`-point trapezoid rule in β on `[0, 2π)`.
///
/// The integrand is π-periodic in β and its values at β and π - β are
/// complex conjugate up to the `e^{iλu}` factor, so the full sum folds onto
/// `[0, π/2]` with real cosine weights.
pub(crate) fn beta_nodes(t: f64, n: usize) -> Vec<BetaNode> {
    debug_assert!(n.is_multiple_of(4) && n >= 4);
    let q = n / 4;
    let e = (-t).exp();
    let e2 = e * e;
    let mut out = Vec::with_capacity(q + 1);
    for k in 0..=q {
        let beta = FRAC_PI_2 * k as f64 / q as f64;
        let (s, c) = beta.sin_cos();
        let d1 = c * c + e2 * s * s;
        let d2 = s * s + e2 * c * c;
        let fold = if k == 0 || k == q { 2.0 } else { 4.0 };
        out.push(BetaNode {
            u: 0.5 * (d1 / d2).ln(),
            weight: fold / n as f64 * e / (d1 * d2).sqrt(),
            theta: (e * s).atan2(c),
            phi: s.atan2(e * c),
        });
    }
    out
}

fn radial_sum(lambda: Complex64, n: i64, m: i64, nodes: &[BetaNode]) -> Complex64 {
    let il = Complex64::i() * lambda;
    let mut acc = Complex64::new(0.0, 0.0);
    for nd in nodes {
        let angular = (m as f64 * nd.phi - n as f64 * nd.theta).cos();
        acc += (il * nd.u).exp() * (nd.weight * angular);
    }
    acc
}

/// The radial part `m_λ(n, m; t) = ⟨π(a_t)χ_m, χ_n⟩` (parity unchecked).
///
/// Doubles the trapezoid rule from 512 nodes until successive values agree
/// to `1e-11` relative to `max(1, |value|)` and returns the finer value.
pub fn radial_matrix_element(lambda: Complex64, n: i64, m: i64, t: f64) -> Result<Complex64> {
    let t = t.abs();
    if t == 0.0 {
        return Ok(if n == m {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    let mut nodes = TRAPEZOID_START;
    let mut prev = radial_sum(lambda, n, m, &beta_nodes(t, nodes));
    loop {
        nodes *= 2;
        let next = radial_sum(lambda, n, m, &beta_nodes(t, nodes));
        let diff = (next - prev).norm();
        if diff <= TRAPEZOID_TOL * next.norm().max(1.0) {
            return Ok(next);
        }
        if nodes >= TRAPEZOID_MAX {
            return Err(Error::NonConvergence {
                what: "matrix element K-integral",
                estimate: diff,
                tolerance: TRAPEZOID_TOL,
            });
        }
        prev = next;
    }
}

/// `⟨π^δ_{iλ}(g)χ_m, χ_n⟩`.
pub fn matrix_element(p: SpectralParameter, n: i64, m: i64, g: GroupElement) -> Result<Complex64> {
    check_parity(p.delta, n)?;
    check_parity(p.delta, m)?;
    let c = cartan_decompose(g);
    let radial = radial_matrix_element(p.lambda, n, m, c.t)?;
    Ok(Complex64::from_polar(1.0, n as f64 * c.theta + m as f64 * c.phi) * radial)
}

/// The eigenvalue `-(λ² + 1)` of the Casimir on `π_{iλ}`.
pub fn casimir_eigenvalue(p: SpectralParameter) -> Complex64 {
    -(p.lambda * p.lambda + 1.0)
}

/// Lie algebra elements acting as ladder operators on K-types.
///
/// With `H = diag(1, -1)`, `X = [[0, 1], [1, 0]]` and the compact generator
/// `W = [[0, 1], [-1, 0]]`: `E = H + iX` raises `n` by 2, `F = -H + iX`
/// lowers it by 2 and `D = W` acts diagonally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    E,
    F,
    D,
}

impl Generator {
    /// Shift of the K-type index.
    pub fn step(self) -> i64 {
        match self {
            Generator::E => 2,
            Generator::F => -2,
            Generator::D => 0,
        }
    }
}

/// `π(gen)χ_n = coefficient · χ_{n + step}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderCoefficient {
    pub generator: Generator,
    pub n: i64,
    pub coefficient: Complex64,
}

/// Ladder coefficient at an arbitrary integral parameter `iλ = il`.
pub fn ladder_coefficient_at(il: i64, generator: Generator, n: i64) -> Complex64 {
    match generator {
        Generator::E => Complex64::new((n + il + 1) as f64, 0.0),
        Generator::F => Complex64::new((n - il - 1) as f64, 0.0),
        Generator::D => Complex64::new(0.0, n as f64),
    }
}

/// Ladder coefficient on `π^{δ(l)}_l`.
pub fn ladder_coefficient(l: u32, generator: Generator, n: i64) -> Result<LadderCoefficient> {
    check_parity(parity_of_level(l as i64), n)?;
    Ok(LadderCoefficient {
        generator,
        n,
        coefficient: ladder_coefficient_at(l as i64, generator, n),
    })
}

/// The character `Θ^δ_{iλ}` as a function on the regular set.
///
/// Hyperbolic elements with eigenvalues `±e^{±s}` give
/// `sign(Tr g)^δ (e^{iλs} + e^{-iλs}) / |e^s - e^{-s}|`; elliptic ones give 0.
pub fn character_eval(p: SpectralParameter, g: GroupElement) -> Result<Complex64> {
    let tr = g.trace();
    if (tr.abs() - 2.0).abs() <= 1e-9 {
        return Err(Error::NonRegular { trace: tr });
    }
    Ok(character_from_trace(p, tr))
}

pub(crate) fn character_from_trace(p: SpectralParameter, tr: f64) -> Complex64 {
    if tr.abs() < 2.0 {
        return Complex64::new(0.0, 0.0);
    }
    let s = (0.5 * tr.abs()).acosh();
    character_hyperbolic(p, s, tr < 0.0)
}

/// The hyperbolic branch in terms of `s > 0`, the log of the larger |eigenvalue|.
pub(crate) fn character_hyperbolic(p: SpectralParameter, s: f64, negative: bool) -> Complex64 {
    let sign = if negative && p.delta == 1 { -1.0 } else { 1.0 };
    sign * (p.lambda * s).cos() / s.sinh()
}

/// Summation method for truncated character sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Summation {
    Plain,
    Cesaro,
}

/// `Σ_{|j| ≤ J, j ≡ δ} ⟨π(g)χ_j, χ_j⟩`, optionally Cesàro averaged over the
/// partial sums at each admissible cutoff.
///
/// All diagonal radial elements are produced together from one set of
/// quadrature nodes, so the cost is `O(N·J)`.
pub fn character_truncated_sum(
    p: SpectralParameter,
    g: GroupElement,
    j_max: u32,
    mode: Summation,
) -> Result<Complex64> {
    let c = cartan_decompose(g);
    let gamma = c.theta + c.phi;
    let js: Vec<i64> = (-(j_max as i64)..=j_max as i64)
        .filter(|j| j.rem_euclid(2) == p.delta as i64)
        .collect();
    if js.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let cutoffs: Vec<i64> = (0..=j_max as i64)
        .filter(|r| r.rem_euclid(2) == p.delta as i64)
        .collect();
    // weight of |j| in the Cesàro mean: share of cutoffs r with r >= |j|
    let weight = |j: i64| -> f64 {
        match mode {
            Summation::Plain => 1.0,
            Summation::Cesaro => {
                cutoffs.iter().filter(|&&r| r >= j.abs()).count() as f64 / cutoffs.len() as f64
            }
        }
    };
    let coefficients: Vec<(i64, Complex64)> = js
        .iter()
        .map(|&j| (j, Complex64::from_polar(weight(j), j as f64 * gamma)))
        .collect();

    let eval = |nodes: usize| -> Complex64 {
        if c.t == 0.0 {
            return coefficients.iter().map(|(_, w)| w).sum();
        }
        let il = Complex64::i() * p.lambda;
        let mut acc = Complex64::new(0.0, 0.0);
        for nd in beta_nodes(c.t, nodes) {
            let base = (il * nd.u).exp() * nd.weight;
            let d = nd.phi - nd.theta;
            let mut inner = Complex64::new(0.0, 0.0);
            for &(j, w) in &coefficients {
                inner += w * (j as f64 * d).cos();
            }
            acc += base * inner;
        }
        acc
    };
    let mut nodes = (8 * (j_max as usize + 1)).next_power_of_two().max(TRAPEZOID_START);
    let mut prev = eval(nodes);
    loop {
        nodes *= 2;
        let next = eval(nodes);
        let diff = (next - prev).norm();
        if diff <= 1e-10 * next.norm().max(1.0) {
            return Ok(next);
        }
        if nodes >= TRAPEZOID_MAX {
            return Err(Error::NonConvergence {
                what: "truncated character sum",
                estimate: diff,
                tolerance: 1e-10,
            });
        }
        prev = next;
    }
}

/// Which block of K-types relative to the walls at `±(|il| + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    /// `n <= -|il| - 1`
    Lower,
    /// `|n| <= |il| - 1`
    Middle,
    /// `n >= |il| + 1`
    Upper,
}

/// An interval of K-types `lo..=hi` in steps of 2; `None` bounds are infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KInterval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    pub parity: u8,
}

impl KInterval {
    pub fn all(parity: u8) -> Self {
        Self {
            lo: None,
            hi: None,
            parity,
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        n.rem_euclid(2) == self.parity as i64
            && self.lo.is_none_or(|lo| n >= lo)
            && self.hi.is_none_or(|hi| n <= hi)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    /// Number of K-types, `None` when infinite.
    pub fn count(&self) -> Option<usize> {
        match (self.lo, self.hi) {
            (Some(lo), Some(hi)) => Some(
                (lo..=hi)
                    .filter(|n| n.rem_euclid(2) == self.parity as i64)
                    .count(),
            ),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.count() == Some(0)
    }
}

impl std::fmt::Display for KInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.lo, self.hi) {
            (None, None) => write!(f, "2Z+{}", self.parity),
            (Some(lo), None) => write!(f, "{{{lo}, {}, ...}}", lo + 2),
            (None, Some(hi)) => write!(f, "{{..., {}, {hi}}}", hi - 2),
            (Some(lo), Some(hi)) if lo > hi => write!(f, "{{}}"),
            (Some(lo), Some(hi)) if lo == hi => write!(f, "{{{lo}}}"),
            (Some(lo), Some(hi)) => write!(f, "{{{lo}, ..., {hi}}}"),
        }
    }
}

/// K-type blocks of a reducible `π^δ_{il}` and the directions in which the
/// Lie algebra action crosses the walls between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallDigraph {
    pub il: i64,
    pub delta: u8,
    pub nodes: Vec<(Region, KInterval)>,
    /// `(from, to)`: the action carries vectors of `from` into `to`.
    pub edges: Vec<(Region, Region)>,
}

impl WallDigraph {
    /// `None` when `π^δ_{il}` is irreducible.
    pub fn new(delta: u8, il: i64) -> Option<Self> {
        let l = il.abs();
        if parity_of_level(l) != delta {
            return None;
        }
        let mut nodes = vec![
            (
                Region::Lower,
                KInterval {
                    lo: None,
                    hi: Some(-l - 1),
                    parity: delta,
                },
            ),
            (
                Region::Upper,
                KInterval {
                    lo: Some(l + 1),
                    hi: None,
                    parity: delta,
                },
            ),
        ];
        let mut edges = Vec::new();
        if l >= 1 {
            nodes.insert(
                1,
                (
                    Region::Middle,
                    KInterval {
                        lo: Some(-l + 1),
                        hi: Some(l - 1),
                        parity: delta,
                    },
                ),
            );
            // a wall is crossed where the opposite ladder coefficient vanishes
            for (gen, wall_side, across) in [
                (Generator::E, Region::Lower, Region::Middle),
                (Generator::F, Region::Upper, Region::Middle),
                (Generator::E, Region::Middle, Region::Upper),
                (Generator::F, Region::Middle, Region::Lower),
            ] {
                let edge_n = match (wall_side, gen) {
                    (Region::Lower, _) => -l - 1,
                    (Region::Upper, _) => l + 1,
                    (Region::Middle, Generator::E) => l - 1,
                    (Region::Middle, _) => -l + 1,
                };
                if ladder_coefficient_at(il, gen, edge_n).norm() != 0.0 {
                    edges.push((wall_side, across));
                }
            }
        }
        Some(Self {
            il,
            delta,
            nodes,
            edges,
        })
    }

    pub fn region_of(&self, n: i64) -> Option<Region> {
        self.nodes
            .iter()
            .find(|(_, iv)| iv.contains(n))
            .map(|(r, _)| *r)
    }

    pub fn interval(&self, region: Region) -> Option<KInterval> {
        self.nodes
            .iter()
            .find(|(r, _)| *r == region)
            .map(|(_, iv)| *iv)
    }

    /// Reflexive-transitive closure of the edge relation.
    pub fn reachable(&self, from: Region, to: Region) -> bool {
        let mut seen = vec![from];
        let mut frontier = vec![from];
        while let Some(r) = frontier.pop() {
            for &(a, b) in &self.edges {
                if a == r && !seen.contains(&b) {
                    seen.push(b);
                    frontier.push(b);
                }
            }
        }
        seen.contains(&to)
    }

    /// Blocks with no outgoing edge; these are the irreducible submodules.
    pub fn sinks(&self) -> Vec<Region> {
        self.nodes
            .iter()
            .map(|(r, _)| *r)
            .filter(|r| !self.edges.iter().any(|(a, _)| a == r))
            .collect()
    }
}

/// Role of a subquotient in the composition series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PieceRole {
    /// The whole module, irreducible.
    Irreducible,
    Submodule,
    Quotient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subquotient {
    pub ktypes: KInterval,
    pub role: PieceRole,
    pub finite: bool,
    pub dimension: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionSeries {
    pub delta: u8,
    pub il: i64,
    pub pieces: Vec<Subquotient>,
    pub walls: Option<WallDigraph>,
}

impl CompositionSeries {
    pub fn is_irreducible(&self) -> bool {
        self.walls.is_none()
    }

    pub fn finite_piece(&self) -> Option<&Subquotient> {
        self.pieces.iter().find(|p| p.finite)
    }
}

/// Composition series of `π^δ_{il}` at integral `iλ = il`.
pub fn composition_series(delta: u8, il: i64) -> CompositionSeries {
    let Some(walls) = WallDigraph::new(delta, il) else {
        return CompositionSeries {
            delta,
            il,
            pieces: vec![Subquotient {
                ktypes: KInterval::all(delta),
                role: PieceRole::Irreducible,
                finite: false,
                dimension: None,
            }],
            walls: None,
        };
    };
    let sinks = walls.sinks();
    let pieces = walls
        .nodes
        .iter()
        .map(|(r, iv)| Subquotient {
            ktypes: *iv,
            role: if sinks.contains(r) {
                PieceRole::Submodule
            } else {
                PieceRole::Quotient
            },
            finite: iv.is_finite(),
            dimension: iv.count(),
        })
        .collect();
    CompositionSeries {
        delta,
        il,
        pieces,
        walls: Some(walls),
    }
}
