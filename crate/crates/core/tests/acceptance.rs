//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary so the report is printed even when everything passes.

use adsres_core::differential_ops::{apply_casimir, RadialProfile, TestFunction};
use adsres_core::geometry::GroupElement;
use adsres_core::principal_series::{casimir_eigenvalue, matrix_element, parity_of_level, SpectralParameter};
use adsres_core::quadrature::circle_integral;
use adsres_core::residue_reps::{
    classify_kxk_type, contragredient_check, poisson_vanishes, residue_rep, ACharacter, MCharacter, Parabolic,
    SubquotientLabel,
};
use adsres_core::resolvent::{
    resonance_list, theta_convolve, ContourSpec, DensityKind, QuadratureConfig, Resolvent,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(id: u32, name: &str, budget: Duration, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let ok = out.passed && in_time;
    println!(
        "{} C{id} {name}: {} [{:.3?} of {:.0?}{}]",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed,
        budget,
        if in_time { "" } else { ", over budget" }
    );
    ok
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bump_function(components: &[(i64, i64, f64)]) -> TestFunction {
    let mut f = TestFunction::new(4.5).unwrap();
    for &(n, m, a) in components {
        f = f
            .with_component(n, m, RadialProfile::bump(2.1, 2.0, 20.0).scaled(c(a, 0.0)))
            .unwrap();
    }
    f
}

fn random_unimodular(rng: &mut ChaCha8Rng, bound: f64) -> GroupElement {
    loop {
        let a: f64 = rng.gen_range(-bound..bound);
        let b: f64 = rng.gen_range(-bound..bound);
        let cc: f64 = rng.gen_range(-bound..bound);
        if a.abs() < 0.2 {
            continue;
        }
        let d = (1.0 + b * cc) / a;
        if d.abs() <= bound {
            return GroupElement::new(a, b, cc, d);
        }
    }
}

fn c1_resonances() -> Outcome {
    let list = resonance_list(5);
    let zetas: Vec<Complex64> = list.iter().map(|r| r.zeta).collect();
    let parities: Vec<u8> = list.iter().map(|r| r.parity).collect();
    let expect: Vec<Complex64> = (0..=5).map(|l| c(0.0, -(l as f64))).collect();
    let passed = zetas == expect && parities == vec![1, 0, 1, 0, 1, 0];
    Outcome {
        passed,
        detail: format!("parities {parities:?}"),
    }
}

fn c2_casimir() -> Outcome {
    let mut worst = 0.0f64;
    for lam in [0.0, 0.7, 2.0] {
        for (n, m) in [(0, 0), (2, 2)] {
            let p = SpectralParameter::real(0, lam);
            let f = TestFunction::matrix_element_section(p, n, m, 3.0).unwrap();
            let image = apply_casimir(&f).unwrap();
            let ev = casimir_eigenvalue(p);
            let (src, dst) = (f.component(n, m).unwrap(), image.component(n, m).unwrap());
            for i in 0..20 {
                let t = 0.1 + 1.9 * i as f64 / 19.0;
                let value = src.eval(t);
                let rel = (dst.eval(t) - ev * value).norm() / (ev * value).norm();
                worst = worst.max(rel);
            }
        }
    }
    Outcome {
        passed: worst <= 1e-6,
        detail: format!("max relative error {worst:.2e} (tol 1e-6)"),
    }
}

fn c3_contour() -> Outcome {
    let f = bump_function(&[(0, 0, 1.0), (2, 2, 0.5)]);
    let r = Resolvent::new(f, QuadratureConfig::default()).unwrap();
    let g = GroupElement::rotation(0.4) * GroupElement::boost(0.3);
    let mut worst = 0.0f64;
    for zeta in [c(0.0, 2.0), c(0.3, 0.2)] {
        let a = r.continued(zeta, g, &ContourSpec::new(0.5)).unwrap().value;
        let b = r.continued(zeta, g, &ContourSpec::new(1.5)).unwrap().value;
        worst = worst.max((a - b).norm() / a.norm());
    }
    Outcome {
        passed: worst <= 1e-6,
        detail: format!("max relative difference {worst:.2e} (tol 1e-6)"),
    }
}

fn c4_residues() -> Outcome {
    let g = GroupElement::rotation(0.3) * GroupElement::boost(0.2);
    let mut worst_ratio = 0.0f64;
    let mut worst_mismatch = 0.0f64;
    let mut notes = Vec::new();
    for (l, comps) in [(1u32, vec![(0, 0, 1.0), (2, 2, 0.5)]), (2, vec![(1, 1, 1.0), (-1, 1, 0.5)])] {
        let f = bump_function(&comps);
        let r = Resolvent::new(f.clone(), QuadratureConfig::default()).unwrap();
        let fit = r.residue_fit(l, g).unwrap();
        let p = SpectralParameter::integral(parity_of_level(l as i64), l as i64);
        let direct = theta_convolve(p, &f, g, 1e-6).unwrap().value;
        let expect = 2.0 * Complex64::i() * direct;
        let dev = (fit.residue - expect).norm() / expect.norm();
        worst_ratio = worst_ratio.max(dev);
        notes.push(format!("l={l} dev {dev:.1e}"));
    }
    for (l, comps) in [(1u32, vec![(1, 1, 1.0), (-1, 1, 0.5)]), (2, vec![(0, 0, 1.0), (2, 2, 0.5)])] {
        let f = bump_function(&comps);
        let r = Resolvent::new(f.clone(), QuadratureConfig::default()).unwrap();
        let fit = r.residue_fit(l, g).unwrap();
        let rel = fit.residue.norm() / f.sup_norm();
        worst_mismatch = worst_mismatch.max(rel);
    }
    notes.push(format!("mismatched parity |c|/|f| {worst_mismatch:.1e}"));
    Outcome {
        passed: worst_ratio <= 0.02 && worst_mismatch <= 1e-6,
        detail: notes.join(", "),
    }
}

fn c5_density() -> Outcome {
    let target = c(0.0, 2.0 * PI) * (2.0 / PI);
    let tanh = circle_integral(c(0.0, -1.0), 0.5, 256, |z| DensityKind::Tanh.eval(z));
    let coth = circle_integral(c(0.0, -2.0), 0.5, 256, |z| DensityKind::Coth.eval(z));
    let err = (tanh - target).norm().max((coth - target).norm());
    Outcome {
        passed: err <= 1e-8,
        detail: format!("max error {err:.2e} (tol 1e-8)"),
    }
}

fn c6_poisson() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gs: Vec<GroupElement> = (0..20).map(|_| random_unimodular(&mut rng, 5.0)).collect();
    let mut disagreements = 0;
    let mut checked = 0;
    for l in [1u32, 2, 3] {
        let delta = parity_of_level(l as i64);
        let p = SpectralParameter::integral(delta, l as i64);
        let r = l as i64 + 5;
        let ks: Vec<i64> = (-r..=r).filter(|k| k.rem_euclid(2) == delta as i64).collect();
        for &m in &ks {
            for &n in &ks {
                let predicted = poisson_vanishes(l, m, n).unwrap();
                let largest = gs
                    .iter()
                    .map(|g| matrix_element(p, n, m, g.inverse()).unwrap().norm())
                    .fold(0.0, f64::max);
                checked += 1;
                if predicted != (largest <= 1e-8) {
                    disagreements += 1;
                }
            }
        }
    }
    Outcome {
        passed: disagreements == 0,
        detail: format!("{disagreements} disagreements over {checked} pairs"),
    }
}

fn c7_lattice() -> Outcome {
    use SubquotientLabel::*;
    let mut failures = Vec::new();
    for l in 0u32..=12 {
        let r = 3 * l as i64 + 7;
        let desc = residue_rep(l);
        let mut finite = 0usize;
        for n in -r..=r {
            for m in -r..=r {
                let label = classify_kxk_type(l, n, m);
                let t = adsres_core::residue_reps::KxKType { n, m };
                // partition: the label agrees with the unique descriptor component
                let located = desc.locate(t);
                let expected = match label {
                    FiniteDim | CornerUpperRight | CornerLowerLeft => Some(label),
                    _ => None,
                };
                if located != expected {
                    failures.push(format!("l={l} partition at ({n},{m})"));
                }
                if classify_kxk_type(l, m, n) != label {
                    failures.push(format!("l={l} swap at ({n},{m})"));
                }
                if n == m && label == NotInResidueRep {
                    failures.push(format!("l={l} diagonal at {n}"));
                }
                if label == FiniteDim {
                    finite += 1;
                }
            }
        }
        if !contragredient_check(l) {
            failures.push(format!("l={l} contragredient"));
        }
        let count = if l >= 1 { 3 } else { 2 };
        if desc.components.len() != count {
            failures.push(format!("l={l} component count"));
        }
        let dim = desc.component(FiniteDim).and_then(|c| c.dimension).unwrap_or(0);
        if finite != (l * l) as usize || dim != finite {
            failures.push(format!("l={l} finite dimension {finite}/{dim}"));
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            "l = 0..12 exhaustive".into()
        } else {
            failures.join("; ")
        },
    }
}

fn c8_langlands() -> Outcome {
    let mut ok = residue_rep(0).components.len() == 2;
    for l in [1u32, 2, 5] {
        let d = residue_rep(l);
        let corner = d.component(SubquotientLabel::CornerUpperRight).unwrap().langlands;
        let fin = d.component(SubquotientLabel::FiniteDim).unwrap().langlands;
        ok &= corner.parabolic == Parabolic::PTilde1
            && corner.a_character == ACharacter::Trivial
            && corner.m_character == MCharacter::Chi(2 * l as i64 + 2);
        ok &= fin.parabolic == Parabolic::PTilde
            && fin.a_character == ACharacter::RhoMultiple(l)
            && fin.m_character == MCharacter::ParityPair(l);
    }
    let d5 = residue_rep(5);
    Outcome {
        passed: ok,
        detail: format!(
            "l=5 corner {}, finite {}",
            d5.component(SubquotientLabel::CornerUpperRight).unwrap().langlands,
            d5.component(SubquotientLabel::FiniteDim).unwrap().langlands
        ),
    }
}

fn c9_unitarity() -> Outcome {
    let mut sums = Vec::new();
    for lam in [0.7, 2.0] {
        let p = SpectralParameter::real(0, lam);
        let s: f64 = (-40i64..=40)
            .filter(|n| n % 2 == 0)
            .map(|n| matrix_element(p, n, 0, GroupElement::boost(1.0)).unwrap().norm_sqr())
            .sum();
        sums.push(s);
    }
    Outcome {
        passed: sums.iter().all(|&s| (1.0 - 1e-4..=1.0 + 1e-9).contains(&s)),
        detail: format!("sums {:?}", sums.iter().map(|s| format!("{s:.12}")).collect::<Vec<_>>()),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "resonance enumeration", Duration::from_millis(1), c1_resonances),
        run(2, "Casimir eigenvalue", secs(30), c2_casimir),
        run(3, "contour independence", secs(300), c3_contour),
        run(4, "residue identity", secs(600), c4_residues),
        run(5, "density residues", secs(1), c5_density),
        run(6, "Poisson vanishing vs numerics", secs(300), c6_poisson),
        run(7, "lattice classification", secs(1), c7_lattice),
        run(8, "Langlands emission", secs(1), c8_langlands),
        run(9, "unitarity tail", secs(60), c9_unitarity),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
