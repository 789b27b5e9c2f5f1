//! The AdS3 quadric, its identification with SL(2,R), and the matrix
//! decompositions everything else is built on.
//!
//! Conventions:
//!
//! * `k(θ) = [[cos θ, sin θ], [-sin θ, cos θ]]`, `a(t) = diag(e^t, e^-t)`,
//!   `n(x) = [[1, x], [0, 1]]`.
//! * Iwasawa: `g = n(x) a(u) k(φ)`; `u` is `ρ(H(g))` with `e^ρ(diag(s, 1/s)) = s`.
//! * Cartan: `g = k(θ) a(t) k(φ)` with `t >= 0`.
//! * Haar measure in Cartan coordinates:
//!   `dg = sinh(2t) dt · dθ/2π · dφ/2π`, with θ, φ each ranging over
//!   `[0, 2π)`. This double-covers G; every integral in the crate uses the
//!   same convention so the global constant cancels.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::ops::Mul;

/// A point of R^4 with the signature-(2,2) form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl AmbientVector {
    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self { x1, x2, x3, x4 }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }

    /// `q(x) = <x, x>`; the quadric X is `q = 1`.
    pub fn quadratic_form(self) -> f64 {
        bilinear_form(self, self)
    }
}

/// A real 2x2 matrix `[[a, b], [c, d]]`; on X it is unimodular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// The rotation `k(θ)`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s, -s, c)
    }

    /// The boost `a(t) = diag(e^t, e^-t)`.
    pub fn boost(t: f64) -> Self {
        Self::new(t.exp(), 0.0, 0.0, (-t).exp())
    }

    /// The unipotent `n(x)`.
    pub fn shear(x: f64) -> Self {
        Self::new(1.0, x, 0.0, 1.0)
    }

    /// `k(θ) a(t) k(φ)`.
    pub fn from_cartan(t: f64, theta: f64, phi: f64) -> Self {
        Self::rotation(theta) * Self::boost(t) * Self::rotation(phi)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// The inverse, assuming `det = 1`.
    pub fn inverse(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    /// The general inverse `adj(g) / det(g)`.
    pub fn inverse_general(&self) -> Self {
        let det = self.det();
        Self::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest singular value.
    pub fn max_singular_value(&self) -> f64 {
        let (q, r) = self.qr_parts();
        q + r
    }

    fn qr_parts(&self) -> (f64, f64) {
        let e = 0.5 * (self.a + self.d);
        let f = 0.5 * (self.a - self.d);
        let g = 0.5 * (self.c + self.b);
        let h = 0.5 * (self.c - self.b);
        (e.hypot(h), f.hypot(g))
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, o: GroupElement) -> GroupElement {
        GroupElement::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// `g = n(shear) · a(log_a) · k(angle)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IwasawaFactors {
    pub shear: f64,
    pub log_a: f64,
    pub angle: f64,
}

impl IwasawaFactors {
    pub fn recompose(&self) -> GroupElement {
        GroupElement::shear(self.shear)
            * GroupElement::boost(self.log_a)
            * GroupElement::rotation(self.angle)
    }
}

/// `g = k(theta) · a(t) · k(phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartanFactors {
    pub t: f64,
    pub theta: f64,
    pub phi: f64,
}

impl CartanFactors {
    pub fn recompose(&self) -> GroupElement {
        GroupElement::from_cartan(self.t, self.theta, self.phi)
    }
}

/// The signature-(2,2) form `x1 y1 + x2 y2 - x3 y3 - x4 y4`.
pub fn bilinear_form(x: AmbientVector, y: AmbientVector) -> f64 {
    x.x1 * y.x1 + x.x2 * y.x2 - x.x3 * y.x3 - x.x4 * y.x4
}

/// `x ↦ g_x = [[x1 + x4, -x2 + x3], [x2 + x3, x1 - x4]]`; `det g_x = q(x)`.
pub fn ads_embed(x: AmbientVector) -> GroupElement {
    GroupElement::new(x.x1 + x.x4, -x.x2 + x.x3, x.x2 + x.x3, x.x1 - x.x4)
}

/// Inverse of [`ads_embed`] on all of Mat2(R).
pub fn ads_coordinates(g: GroupElement) -> AmbientVector {
    AmbientVector::new(
        0.5 * (g.a + g.d),
        0.5 * (g.c - g.b),
        0.5 * (g.c + g.b),
        0.5 * (g.a - g.d),
    )
}

/// `(cosh t cos ψ1, cosh t sin ψ1, sinh t sin ψ2, sinh t cos ψ2)`, a point of X.
///
/// Under [`ads_embed`], `spherical_point(t, -(θ+φ), φ-θ)` is `k(θ) a(t) k(φ)`,
/// and `spherical_point(t, φ+θ, φ-θ)` is its transpose `k(-φ) a(t) k(-θ)`.
pub fn spherical_point(t: f64, psi1: f64, psi2: f64) -> AmbientVector {
    let (ch, sh) = (t.cosh(), t.sinh());
    AmbientVector::new(ch * psi1.cos(), ch * psi1.sin(), sh * psi2.sin(), sh * psi2.cos())
}

/// Spherical angles `(ψ1, ψ2)` of the point whose embedding is `k(θ) a(t) k(φ)`.
pub fn spherical_angles_of_cartan(theta: f64, phi: f64) -> (f64, f64) {
    (-(theta + phi), phi - theta)
}

/// Iwasawa factors read off the bottom row: `e^-u = |(c, d)|`,
/// `cos φ = d e^u`, `sin φ = -c e^u`.
pub fn iwasawa_decompose(g: GroupElement) -> IwasawaFactors {
    let r = g.c.hypot(g.d);
    let (cos_phi, sin_phi) = (g.d / r, -g.c / r);
    let log_a = -r.ln();
    let angle = sin_phi.atan2(cos_phi);
    // top row of g k(-φ) is (e^u, x e^-u)
    let shear = (-g.a * sin_phi + g.b * cos_phi) / r;
    IwasawaFactors {
        shear,
        log_a,
        angle,
    }
}

/// Cartan factors via the closed-form 2x2 singular value factorisation.
///
/// Canonical representative: `t >= 0`, `θ ∈ [0, π)`, `φ ∈ [0, 2π)`; when
/// `t == 0` only `θ + φ` is determined and it is stored in `θ ∈ [0, 2π)`
/// with `φ = 0`.
pub fn cartan_decompose(g: GroupElement) -> CartanFactors {
    let e = 0.5 * (g.a + g.d);
    let f = 0.5 * (g.a - g.d);
    let gg = 0.5 * (g.c + g.b);
    let h = 0.5 * (g.c - g.b);
    let r = f.hypot(gg);
    // g = Rot(α) diag(e^t, e^-t) Rot(β) with Rot(x) = k(-x)
    let sum = h.atan2(e);
    if r == 0.0 {
        return CartanFactors {
            t: 0.0,
            theta: wrap(-sum, TAU),
            phi: 0.0,
        };
    }
    let diff = gg.atan2(f);
    let alpha = 0.5 * (sum + diff);
    let beta = 0.5 * (sum - diff);
    let mut theta = -alpha;
    let mut phi = -beta;
    theta = wrap(theta, TAU);
    if theta >= PI {
        theta -= PI;
        phi += PI;
    }
    phi = wrap(phi, TAU);
    CartanFactors {
        t: r.asinh(),
        theta,
        phi,
    }
}

/// The Haar density `sinh(2t)` in Cartan coordinates.
pub fn haar_weight(t: f64) -> f64 {
    (2.0 * t).sinh()
}

pub(crate) fn wrap(x: f64, period: f64) -> f64 {
    let y = x.rem_euclid(period);
    if y >= period {
        0.0
    } else {
        y
    }
}
