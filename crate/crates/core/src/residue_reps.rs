//! Symbolic structure of the residue representations `𝓔_l`.
//!
//! `𝓔_l` is spanned by the functions `Θ^{δ(l)}_l ∗ f`. Its K×K-types `(n, m)`
//! live on the sublattice `n ≡ m ≡ δ(l)`, cut by walls between `±(l − 1)`
//! and `±(l + 1)` into blocks. The diagonal blocks are the three irreducible
//! pieces (two when `l = 0`); the off-diagonal blocks are killed by the
//! Poisson transform, since the action of `π_l` only crosses the walls
//! outward from the middle.

use crate::error::Result;
use crate::principal_series::{check_parity, parity_of_level, KInterval, Region, WallDigraph};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Version of the JSON documents emitted by this crate.
pub const SCHEMA_VERSION: u32 = 1;

/// A pair of K-frequencies: left (row) `n` and right (column) `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KxKType {
    pub n: i64,
    pub m: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubquotientLabel {
    FiniteDim,
    CornerUpperRight,
    CornerLowerLeft,
    NotInResidueRep,
    ParityExcluded,
}

impl SubquotientLabel {
    fn glyph(self) -> char {
        match self {
            SubquotientLabel::FiniteDim => 'o',
            SubquotientLabel::CornerUpperRight => '+',
            SubquotientLabel::CornerLowerLeft => '-',
            SubquotientLabel::NotInResidueRep => '/',
            SubquotientLabel::ParityExcluded => ' ',
        }
    }
}

/// Block of the sublattice a K×K-type falls into.
pub fn classify_kxk_type(l: u32, n: i64, m: i64) -> SubquotientLabel {
    let l = l as i64;
    let delta = parity_of_level(l) as i64;
    if n.rem_euclid(2) != delta || m.rem_euclid(2) != delta {
        SubquotientLabel::ParityExcluded
    } else if n > l && m > l {
        SubquotientLabel::CornerUpperRight
    } else if n < -l && m < -l {
        SubquotientLabel::CornerLowerLeft
    } else if l >= 1 && n.abs() < l && m.abs() < l {
        SubquotientLabel::FiniteDim
    } else {
        SubquotientLabel::NotInResidueRep
    }
}

fn walls(l: u32) -> WallDigraph {
    WallDigraph::new(parity_of_level(l as i64), l as i64).expect("π^{δ(l)}_l is reducible")
}

/// Whether `⟨π_l(g⁻¹)χ_m, χ_n⟩` vanishes identically in `g`, i.e. `χ_n` is
/// not reachable from `χ_m` through the directed walls.
pub fn poisson_vanishes(l: u32, source_m: i64, target_n: i64) -> Result<bool> {
    let delta = parity_of_level(l as i64);
    check_parity(delta, source_m)?;
    check_parity(delta, target_n)?;
    let w = walls(l);
    let from = w.region_of(source_m).expect("every compatible K-type has a region");
    let to = w.region_of(target_n).expect("every compatible K-type has a region");
    Ok(!w.reachable(from, to))
}

/// A union of K-type intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTypeSet(pub Vec<KInterval>);

impl KTypeSet {
    pub fn contains(&self, n: i64) -> bool {
        self.0.iter().any(|iv| iv.contains(n))
    }
}

impl fmt::Display for KTypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|iv| iv.to_string()).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

/// K-types of the closed G-span of `χ_n` inside `π^{δ(l)}_l`.
pub fn truncation_range(l: u32, n: i64) -> Result<KTypeSet> {
    check_parity(parity_of_level(l as i64), n)?;
    let w = walls(l);
    let from = w.region_of(n).expect("compatible K-type");
    let mut reached: Vec<KInterval> = w
        .nodes
        .iter()
        .filter(|(r, iv)| w.reachable(from, *r) && !iv.is_empty())
        .map(|(_, iv)| *iv)
        .collect();
    reached.sort_by_key(|iv| iv.lo.unwrap_or(i64::MIN));
    // merge adjacent blocks
    let mut merged: Vec<KInterval> = Vec::new();
    for iv in reached {
        match merged.last_mut() {
            Some(last) if matches!((last.hi, iv.lo), (Some(h), Some(lo)) if h + 2 == lo) => last.hi = iv.hi,
            _ => merged.push(iv),
        }
    }
    Ok(KTypeSet(merged))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parabolic {
    /// The minimal parabolic, Levi `diag(a₁, a₂, a₁⁻¹, a₂⁻¹)` times M.
    PTilde,
    /// The parabolic with Levi `diag(g, ᵗg⁻¹)`.
    PTilde1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ACharacter {
    Trivial,
    /// `e^{k ρ̃}`.
    RhoMultiple(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MCharacter {
    /// `δ(l) ⊗ δ(l)` on the two-element M of each factor.
    ParityPair(u32),
    /// The character `χ_k` of the compact torus.
    Chi(i64),
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parabolic::PTilde => "P̃",
            Parabolic::PTilde1 => "P̃₁",
        })
    }
}

impl fmt::Display for ACharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ACharacter::Trivial => f.write_str("triv"),
            ACharacter::RhoMultiple(k) => write!(f, "e^{{{k}ρ̃}}"),
        }
    }
}

impl fmt::Display for MCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MCharacter::ParityPair(l) => write!(f, "δ({l})⊗δ({l})"),
            MCharacter::Chi(k) => write!(f, "χ_{{{k}}}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanglandsDatum {
    pub parabolic: Parabolic,
    pub a_character: ACharacter,
    pub m_character: MCharacter,
    pub contragredient_of: Option<SubquotientLabel>,
}

impl fmt::Display for LanglandsDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.parabolic, self.a_character, self.m_character)
    }
}

/// Rectangle of K×K-types `rows × cols`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KxKPredicate {
    pub rows: KInterval,
    pub cols: KInterval,
}

impl KxKPredicate {
    pub fn contains(&self, t: KxKType) -> bool {
        self.rows.contains(t.n) && self.cols.contains(t.m)
    }

    pub fn count(&self) -> Option<usize> {
        Some(self.rows.count()? * self.cols.count()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueComponent {
    pub label: SubquotientLabel,
    pub predicate: KxKPredicate,
    pub langlands: LanglandsDatum,
    pub dimension: Option<usize>,
    pub minimal_ktype: Option<KxKType>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRepDescriptor {
    pub l: u32,
    pub delta: u8,
    pub components: Vec<ResidueComponent>,
    pub minimal_ktypes: Vec<KxKType>,
}

impl ResidueRepDescriptor {
    pub fn component(&self, label: SubquotientLabel) -> Option<&ResidueComponent> {
        self.components.iter().find(|c| c.label == label)
    }

    /// The label of the component containing `t`, if any.
    pub fn locate(&self, t: KxKType) -> Option<SubquotientLabel> {
        self.components.iter().find(|c| c.predicate.contains(t)).map(|c| c.label)
    }
}

/// The decomposition of `𝓔_l` with Langlands data.
pub fn residue_rep(l: u32) -> ResidueRepDescriptor {
    let w = walls(l);
    let delta = w.delta;
    let block = |r: Region| w.interval(r);
    let corner = |label: SubquotientLabel, region: Region, sign: i64| {
        let iv = block(region).expect("corner blocks always exist");
        let edge = sign * (l as i64 + 1);
        ResidueComponent {
            label,
            predicate: KxKPredicate { rows: iv, cols: iv },
            langlands: LanglandsDatum {
                parabolic: Parabolic::PTilde1,
                a_character: ACharacter::Trivial,
                m_character: MCharacter::Chi(2 * edge),
                contragredient_of: Some(if sign > 0 {
                    SubquotientLabel::CornerLowerLeft
                } else {
                    SubquotientLabel::CornerUpperRight
                }),
            },
            dimension: None,
            minimal_ktype: Some(KxKType { n: edge, m: edge }),
        }
    };
    let mut components = Vec::new();
    if let Some(mid) = block(Region::Middle) {
        let predicate = KxKPredicate { rows: mid, cols: mid };
        components.push(ResidueComponent {
            label: SubquotientLabel::FiniteDim,
            predicate,
            langlands: LanglandsDatum {
                parabolic: Parabolic::PTilde,
                a_character: ACharacter::RhoMultiple(l),
                m_character: MCharacter::ParityPair(l),
                contragredient_of: None,
            },
            dimension: predicate.count(),
            minimal_ktype: None,
        });
    }
    components.push(corner(SubquotientLabel::CornerUpperRight, Region::Upper, 1));
    components.push(corner(SubquotientLabel::CornerLowerLeft, Region::Lower, -1));
    let minimal_ktypes = components.iter().filter_map(|c| c.minimal_ktype).collect();
    ResidueRepDescriptor {
        l,
        delta,
        components,
        minimal_ktypes,
    }
}

/// Checks that `(n, m) ↦ (−n, −m)` swaps the corners and fixes the finite
/// block on `|n|, |m| <= 3l + 5`.
pub fn contragredient_check(l: u32) -> bool {
    let r = 3 * l as i64 + 5;
    (-r..=r).all(|n| {
        (-r..=r).all(|m| {
            let a = classify_kxk_type(l, n, m);
            let b = classify_kxk_type(l, -n, -m);
            match a {
                SubquotientLabel::CornerUpperRight => b == SubquotientLabel::CornerLowerLeft,
                SubquotientLabel::CornerLowerLeft => b == SubquotientLabel::CornerUpperRight,
                other => b == other,
            }
        })
    })
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

/// `{"schema_version": 1, ...fields of value}` as pretty-printed JSON.
pub fn to_versioned_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(&Versioned {
        schema_version: SCHEMA_VERSION,
        body: value,
    })
    .expect("plain data serialises")
}

/// Lattice diagram of `𝓔_l` as text, columns `m` and rows `n` over the
/// compatible K-types with `|n|, |m| <= radius`.
///
/// `o` finite block, `+`/`-` the two corners, `/` off-diagonal blocks killed
/// by the Poisson transform. Vertical walls sit at `m = ±(l+1)`, horizontal
/// ones at `n = ±(l−1)`, each drawn on the outer side of the middle block.
pub fn lattice_text(l: u32, radius: i64) -> String {
    let delta = parity_of_level(l as i64) as i64;
    let li = l as i64;
    let ks: Vec<i64> = (-radius..=radius).filter(|k| k.rem_euclid(2) == delta).collect();
    let width = ks.iter().map(|k| k.to_string().len()).max().unwrap_or(1).max(2);
    let mut out = String::new();
    out.push_str(&format!("l = {l}, delta = {delta}; rows n (down), columns m (right)\n"));
    let vertical_after = |m: i64| m == li - 1 || m == -li - 1;
    let header: String = ks
        .iter()
        .map(|&m| {
            let wall = if vertical_after(m) { "|" } else { " " };
            format!("{m:>width$}{wall}")
        })
        .collect();
    out.push_str(&format!("{:>width$}  {header}\n", ""));
    let wall_row = |label: i64| -> String {
        let line: String = ks
            .iter()
            .map(|&m| {
                let wall = if vertical_after(m) { "+" } else { "-" };
                format!("{}{wall}", "-".repeat(width))
            })
            .collect();
        format!("{:>width$}  {line} {label:+}\n", "")
    };
    for &n in ks.iter().rev() {
        if li >= 1 && n == li - 1 && n + 2 <= radius {
            out.push_str(&wall_row(li - 1));
        }
        if li == 0 && n == -1 {
            out.push_str(&wall_row(0));
        }
        let cells: String = ks
            .iter()
            .map(|&m| {
                let wall = if vertical_after(m) { "|" } else { " " };
                format!("{:>width$}{wall}", classify_kxk_type(l, n, m).glyph())
            })
            .collect();
        out.push_str(&format!("{n:>width$}  {cells}\n"));
        if n == -li + 1 && li >= 1 && n - 2 >= -radius {
            out.push_str(&wall_row(-(li - 1)));
        }
    }
    out.push_str(&format!(
        "vertical walls: m = {:+} | m = {:+}; horizontal walls: n = {:+}, n = {:+}\n",
        -(li + 1),
        li + 1,
        li - 1,
        -(li - 1)
    ));
    out
}

/// The same diagram as a standalone SVG document.
pub fn lattice_svg(l: u32, radius: i64) -> String {
    let delta = parity_of_level(l as i64) as i64;
    let li = l as i64;
    let cell = 14.0;
    let margin = 40.0;
    let span = 2 * radius + 1;
    let size = margin * 2.0 + cell * span as f64;
    let x = |m: i64| margin + cell * (m + radius) as f64 + cell / 2.0;
    let y = |n: i64| margin + cell * (radius - n) as f64 + cell / 2.0;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for n in (-radius..=radius).filter(|k| k.rem_euclid(2) == delta) {
        for m in (-radius..=radius).filter(|k| k.rem_euclid(2) == delta) {
            let (cx, cy) = (x(m), y(n));
            let color = match classify_kxk_type(l, n, m) {
                SubquotientLabel::FiniteDim => "#2b7a0b",
                SubquotientLabel::CornerUpperRight => "#1f4e9c",
                SubquotientLabel::CornerLowerLeft => "#8a2be2",
                _ => "#444444",
            };
            s.push_str(&format!("<circle cx=\"{cx}\" cy=\"{cy}\" r=\"2.5\" fill=\"{color}\"/>\n"));
            if classify_kxk_type(l, n, m) == SubquotientLabel::NotInResidueRep {
                let d = cell * 0.35;
                s.push_str(&format!(
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"red\" stroke-width=\"1\"/>\n",
                    cx - d,
                    cy + d,
                    cx + d,
                    cy - d
                ));
            }
        }
    }
    let lo = margin;
    let hi = size - margin;
    // walls sit halfway between adjacent compatible K-types
    for k in [li + 1, -li - 1] {
        let xv = x(k) - (k.signum() as f64) * cell;
        s.push_str(&format!(
            "<line x1=\"{xv}\" y1=\"{lo}\" x2=\"{xv}\" y2=\"{hi}\" stroke=\"black\" stroke-dasharray=\"4 2\"/>\n\
             <text x=\"{xv}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{k:+}</text>\n",
            lo - 6.0
        ));
    }
    if li >= 1 {
        for k in [li - 1, -(li - 1)] {
            let sign = if k == li - 1 { 1.0 } else { -1.0 };
            let yh = y(k) - sign * cell;
            s.push_str(&format!(
                "<line x1=\"{lo}\" y1=\"{yh}\" x2=\"{hi}\" y2=\"{yh}\" stroke=\"black\" stroke-dasharray=\"4 2\"/>\n\
                 <text x=\"{}\" y=\"{yh}\" font-size=\"10\">{k:+}</text>\n",
                hi + 4.0
            ));
        }
    }
    s.push_str(&format!(
        "<line x1=\"{lo}\" y1=\"{hi}\" x2=\"{hi}\" y2=\"{lo}\" stroke=\"green\" stroke-opacity=\"0.4\"/>\n</svg>\n"
    ));
    s
}
