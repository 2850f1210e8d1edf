//! Randomized stability checks: squares that are homotopy cocartesian by
//! construction must test as homotopy cartesian, and conversely.
//!
//! Cocartesian squares are produced by the left derived extension of random
//! spans to the square. Cartesian squares are produced as strict pullbacks
//! along degreewise surjective chain maps (every complex is fibrant, so a
//! strict pullback along a degreewise surjection is a homotopy pullback);
//! over a field they are additionally produced by the right derived
//! extension of random cospans. Each constructed square is run through both
//! exact detectors, and deliberately damaged squares (an extra summand glued
//! onto the terminal corner) serve as negative controls.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complexes::{ChainMap, Complex};
use crate::diagrams::DiagramComplex;
use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::ModulePresentation;
use crate::exactalg::ring::CoeffRing;
use crate::exactalg::snf;
use crate::resolve::cartesian::{is_cartesian, is_cocartesian, span_extension_square};
use crate::resolve::derived::derived_ran;
use crate::resolve::random::{
    rand_cospan, rand_null_map, rand_span, rand_two_term, summand_inclusion, summand_projection,
};
use crate::smallcat::{FinCat, Functor};
use crate::{Error, Result};

/// Outcome of one suite run.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    /// Squares built cocartesian and tested for cartesianness.
    pub cocartesian_trials: usize,
    /// Squares built cartesian and tested for cocartesianness.
    pub cartesian_trials: usize,
    /// Human-readable descriptions of any failed cross-checks.
    pub failures: Vec<String>,
    /// Damaged squares that both detectors correctly rejected.
    pub controls_flagged: usize,
    pub controls_total: usize,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.controls_flagged == self.controls_total
    }
}

/// Strict pullback of `q: E -> B` (degreewise surjective) along `g: A -> B`,
/// returned as the square `P -> E, P -> A` over `q, g`.
fn pullback_square(q: &ChainMap, g: &ChainMap) -> Result<DiagramComplex> {
    if q.target != g.target {
        return Err(Error::NotCompatible("pullback legs must share a target".into()));
    }
    if !q.is_degreewise_surjective()? {
        return Err(Error::NotCompatible("pullback leg is not degreewise surjective".into()));
    }
    let e = &q.source;
    let a = &g.source;
    let b = &q.target;
    let ring = b.ring.clone();
    let mut degrees: Vec<i64> = e.support();
    degrees.extend(a.support());
    degrees.sort_unstable();
    degrees.dedup();
    // Kernel bases of [q | -g] levelwise present the pullback.
    let mut bases = BTreeMap::new();
    for &n in &degrees {
        let (ge, ga) = (e.gens_at(n), a.gens_at(n));
        let mut m = Matrix::zero(ring.clone(), b.gens_at(n), ge + ga);
        m.set_block(0, 0, &q.map_at(n));
        m.set_block(0, ge, &g.map_at(n).neg());
        bases.insert(n, snf::kernel(&m)?);
    }
    let mut levels = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let k = &bases[&n];
        levels.insert(n, ModulePresentation::free(ring.clone(), k.cols));
        if let Some(k_next) = bases.get(&(n + 1)) {
            let d = Matrix::block_diag(&[&e.differential(n), &a.differential(n)]);
            let rhs = d.mul(k);
            let sol = snf::solve_matrix(k_next, &rhs)?.ok_or_else(|| {
                Error::NotCompatible("pullback differential escapes the kernel".into())
            })?;
            diffs.insert(n, sol);
        }
    }
    let p = Complex::from_parts(ring.clone(), levels, diffs)?;
    let mut to_e = BTreeMap::new();
    let mut to_a = BTreeMap::new();
    for &n in &degrees {
        let k = &bases[&n];
        let ge = e.gens_at(n);
        let rows_e: Vec<usize> = (0..ge).collect();
        let rows_a: Vec<usize> = (ge..ge + a.gens_at(n)).collect();
        let cols: Vec<usize> = (0..k.cols).collect();
        to_e.insert(n, k.submatrix(&rows_e, &cols));
        to_a.insert(n, k.submatrix(&rows_a, &cols));
    }
    let pr_e = ChainMap::new(p.clone(), e.clone(), to_e)?;
    let pr_a = ChainMap::new(p.clone(), a.clone(), to_a)?;
    let diag = q.compose(&pr_e)?;
    let mut edges = BTreeMap::new();
    edges.insert(1, pr_e);
    edges.insert(2, pr_a);
    edges.insert(3, diag);
    edges.insert(5, q.clone());
    edges.insert(7, g.clone());
    DiagramComplex::new(FinCat::square(), vec![p, e.clone(), a.clone(), b.clone()], edges)
}

/// Glue an extra one-dimensional summand onto the terminal corner, mapped
/// into by zero. The result is never bicartesian.
fn damage_corner(sq: &DiagramComplex) -> Result<DiagramComplex> {
    let ring = sq.ring().clone();
    let extra_mod = if ring.is_field() {
        ModulePresentation::free(ring.clone(), 1)
    } else {
        ModulePresentation::cyclic(ring.clone(), 2)
    };
    let extra = Complex::concentrated(extra_mod, 0);
    let old = sq.object(3).clone();
    let parts = [&old, &extra];
    let incl = summand_inclusion(&parts, 0)?;
    let corner = incl.target.clone();
    let mut edges = BTreeMap::new();
    edges.insert(1, sq.morphism(1).clone());
    edges.insert(2, sq.morphism(2).clone());
    edges.insert(3, incl.compose(sq.morphism(3))?);
    edges.insert(5, incl.compose(sq.morphism(5))?);
    edges.insert(7, incl.compose(sq.morphism(7))?);
    DiagramComplex::new(
        FinCat::square(),
        vec![sq.object(0).clone(), sq.object(1).clone(), sq.object(2).clone(), corner],
        edges,
    )
}

fn check_both(sq: &DiagramComplex, what: &str, failures: &mut Vec<String>) -> Result<()> {
    if !is_cocartesian(sq)? {
        failures.push(format!("{what}: not detected cocartesian"));
    }
    if !is_cartesian(sq)? {
        failures.push(format!("{what}: not detected cartesian"));
    }
    Ok(())
}

/// Run `trials` constructed-cocartesian and `trials` constructed-cartesian
/// squares, alternating integer and two-element field coefficients, with
/// one damaged square per five trials as a negative control.
pub fn stability_suite(seed: u64, trials: usize, length: usize) -> Result<StabilityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = StabilityReport {
        cocartesian_trials: 0,
        cartesian_trials: 0,
        failures: Vec::new(),
        controls_flagged: 0,
        controls_total: 0,
    };
    let rings = [CoeffRing::Integers, CoeffRing::PrimeField(2)];
    for t in 0..trials {
        let ring = &rings[t % 2];
        let span = rand_span(&mut rng, ring)?;
        let (sq, _) = span_extension_square(&span, length)?;
        report.cocartesian_trials += 1;
        check_both(&sq, &format!("extension square {t} over {ring:?}"), &mut report.failures)?;
        if t % 5 == 0 {
            report.controls_total += 1;
            let bad = damage_corner(&sq)?;
            if !is_cocartesian(&bad)? && !is_cartesian(&bad)? {
                report.controls_flagged += 1;
            }
        }
    }
    for t in 0..trials {
        let ring = &rings[t % 2];
        let sq = if ring.is_field() && t % 4 == 1 {
            // Field-only alternative route: coresolve a cospan and extend.
            let cospan = rand_cospan(&mut rng, ring)?;
            let corner =
                Functor::into_thin(&FinCat::pullback_cospan(), &FinCat::square(), vec![1, 2, 3])?;
            derived_ran(&corner, &cospan, length)?.kan.diagram
        } else {
            let b = rand_two_term(&mut rng, ring, 2);
            let fiber = rand_two_term(&mut rng, ring, 2);
            let q = summand_projection(&[&b, &fiber], 0)?;
            let a = rand_two_term(&mut rng, ring, 2);
            let g = rand_null_map(&mut rng, &a, &b);
            pullback_square(&q, &g)?
        };
        report.cartesian_trials += 1;
        check_both(&sq, &format!("pullback square {t} over {ring:?}"), &mut report.failures)?;
        if t % 5 == 0 {
            report.controls_total += 1;
            let bad = damage_corner(&sq)?;
            if !is_cocartesian(&bad)? && !is_cartesian(&bad)? {
                report.controls_flagged += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_flags_controls() {
        let r = stability_suite(7, 6, 3).unwrap();
        assert_eq!(r.cocartesian_trials, 6);
        assert_eq!(r.cartesian_trials, 6);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert_eq!(r.controls_flagged, r.controls_total);
        assert!(r.controls_total >= 2);
        assert!(r.passed());
    }

    #[test]
    fn strict_pullback_square_tests_cocartesian() {
        // A concrete pullback along a projection, no randomness.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ring = CoeffRing::Integers;
        let b = rand_two_term(&mut rng, &ring, 2);
        let f = rand_two_term(&mut rng, &ring, 2);
        let q = summand_projection(&[&b, &f], 0).unwrap();
        let a = rand_two_term(&mut rng, &ring, 2);
        let g = rand_null_map(&mut rng, &a, &b);
        let sq = pullback_square(&q, &g).unwrap();
        assert!(is_cartesian(&sq).unwrap());
        assert!(is_cocartesian(&sq).unwrap());
    }

    #[test]
    fn damaged_square_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ring = CoeffRing::PrimeField(2);
        let span = rand_span(&mut rng, &ring).unwrap();
        let (sq, _) = span_extension_square(&span, 3).unwrap();
        let bad = damage_corner(&sq).unwrap();
        assert!(!is_cocartesian(&bad).unwrap());
        assert!(!is_cartesian(&bad).unwrap());
    }
}
