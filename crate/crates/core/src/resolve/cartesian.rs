//! Homotopy cocartesian and cartesian detection for squares of complexes,
//! and the cone computed by extending an arrow to a square.
//!
//! A strictly commutative square is homotopy cocartesian exactly when the
//! canonical map from the cone of `alpha = (phi_left, -phi_top)` to the
//! terminal corner is a quasi-isomorphism, and homotopy cartesian exactly
//! when the initial corner maps by a quasi-isomorphism into the shifted
//! cone of `beta = (phi_bottom, phi_right)`. Both conditions reduce to
//! acyclicity of the same total complex, so they agree for every square;
//! the two detectors stay independent so that agreement can be observed
//! rather than assumed.

use std::collections::BTreeMap;

use crate::complexes::{ChainMap, Complex};
use crate::diagrams::{ran, DiagramComplex};
use crate::exactalg::matrix::Matrix;
use crate::resolve::derived::derived_lan;
use crate::smallcat::{FinCat, Functor};
use crate::{Error, Result};

// Square shape indices: objects 0 = 00, 1 = 01, 2 = 10, 3 = 11; the
// non-identity morphisms are 1: 00->01, 2: 00->10, 3: 00->11, 5: 01->11,
// 7: 10->11.
const TOP: usize = 1;
const LEFT: usize = 2;
const RIGHT: usize = 5;
const BOTTOM: usize = 7;

fn require_square(f: &DiagramComplex) -> Result<()> {
    if f.shape != FinCat::square() {
        return Err(Error::ShapeMismatch("expected a diagram on the square".into()));
    }
    Ok(())
}

/// The canonical comparison from the homotopy pushout of the left leg,
/// `cone(alpha)` with `alpha = (phi_left, -phi_top): F00 -> F10 (+) F01`,
/// to the terminal corner `F11`.
pub fn pushout_comparison(f: &DiagramComplex) -> Result<ChainMap> {
    require_square(f)?;
    let ring = f.ring().clone();
    let f00 = f.object(0);
    let f11 = f.object(3);
    let side = Complex::direct_sum(&[f.object(2), f.object(1)])?;
    let mut maps = BTreeMap::new();
    for n in f00.support() {
        let rows = side.gens_at(n);
        let cols = f00.gens_at(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring.clone(), rows, cols);
        m.set_block(0, 0, &f.morphism(LEFT).map_at(n));
        m.set_block(f.object(2).gens_at(n), 0, &f.morphism(TOP).map_at(n).neg());
        maps.insert(n, m);
    }
    let alpha = ChainMap::new(f00.clone(), side, maps)?;
    let cone = alpha.mapping_cone()?;
    let mut cmp = BTreeMap::new();
    for n in cone.cone.support() {
        let rows = f11.gens_at(n);
        let cols = cone.cone.gens_at(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let shifted = f00.gens_at(n + 1);
        let mut m = Matrix::zero(ring.clone(), rows, cols);
        m.set_block(0, shifted, &f.morphism(BOTTOM).map_at(n));
        m.set_block(0, shifted + f.object(2).gens_at(n), &f.morphism(RIGHT).map_at(n));
        cmp.insert(n, m);
    }
    ChainMap::new(cone.cone, f11.clone(), cmp)
}

/// The canonical comparison from the initial corner `F00` into the homotopy
/// pullback `cone(beta)[-1]` with `beta = (phi_bottom, phi_right)`.
pub fn pullback_comparison(f: &DiagramComplex) -> Result<ChainMap> {
    require_square(f)?;
    let ring = f.ring().clone();
    let f00 = f.object(0);
    let f11 = f.object(3);
    let side = Complex::direct_sum(&[f.object(2), f.object(1)])?;
    let mut maps = BTreeMap::new();
    for n in side.support() {
        let rows = f11.gens_at(n);
        let cols = side.gens_at(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring.clone(), rows, cols);
        m.set_block(0, 0, &f.morphism(BOTTOM).map_at(n));
        m.set_block(0, f.object(2).gens_at(n), &f.morphism(RIGHT).map_at(n));
        maps.insert(n, m);
    }
    let beta = ChainMap::new(side.clone(), f11.clone(), maps)?;
    let pullback = beta.mapping_cone()?.cone.shift(-1);
    let mut cmp = BTreeMap::new();
    for n in f00.support() {
        let rows = pullback.gens_at(n);
        let cols = f00.gens_at(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring.clone(), rows, cols);
        m.set_block(0, 0, &f.morphism(LEFT).map_at(n));
        m.set_block(f.object(2).gens_at(n), 0, &f.morphism(TOP).map_at(n).neg());
        cmp.insert(n, m);
    }
    ChainMap::new(f00.clone(), pullback, cmp)
}

/// Whether the square is homotopy cocartesian. Exact: no resolution is
/// needed because the comparison cone is a bounded complex.
pub fn is_cocartesian(f: &DiagramComplex) -> Result<bool> {
    pushout_comparison(f)?.is_quasi_iso()
}

/// Whether the square is homotopy cartesian.
pub fn is_cartesian(f: &DiagramComplex) -> Result<bool> {
    pullback_comparison(f)?.is_quasi_iso()
}

/// Whether the square is both cocartesian and cartesian.
pub fn is_bicartesian(f: &DiagramComplex) -> Result<bool> {
    Ok(is_cocartesian(f)? && is_cartesian(f)?)
}

/// Left derived extension of a span to a square. The result is homotopy
/// cocartesian by construction: the terminal corner is the colimit of the
/// cell resolution, which realizes the homotopy pushout. Returns the square
/// and the window in which it presents the derived extension of the input.
pub fn span_extension_square(
    g: &DiagramComplex,
    length: usize,
) -> Result<(DiagramComplex, (i64, i64))> {
    if g.shape != FinCat::pushout_span() {
        return Err(Error::ShapeMismatch("expected a diagram on the span".into()));
    }
    let corner = Functor::into_thin(&FinCat::pushout_span(), &FinCat::square(), vec![0, 1, 2])?;
    let dl = derived_lan(&corner, g, length)?;
    Ok((dl.kan.diagram, dl.certified))
}

/// The cone of `phi` computed through the extension calculus: place the
/// arrow on one leg of the span, extend by zero to the other leg, then take
/// the left derived extension to the square and read off the terminal
/// corner. Quasi-isomorphic to the mapping cone on the certified window.
pub fn derivator_cone(phi: &ChainMap, length: usize) -> Result<(Complex, (i64, i64))> {
    let span = FinCat::pushout_span();
    let two = FinCat::interval();
    let leg = Functor::into_thin(&two, &span, vec![0, 2])?;
    let mut arrow_maps = BTreeMap::new();
    arrow_maps.insert(1, phi.clone());
    let arrow = DiagramComplex::new(
        two,
        vec![phi.source.clone(), phi.target.clone()],
        arrow_maps,
    )?;
    // The other leg has empty coslices over its target, so the right
    // extension is extension by zero and stays exact.
    let zero_extended = ran(&leg, &arrow)?;
    let (square, window) = span_extension_square(&zero_extended.diagram, length)?;
    Ok((square.object(3).clone(), window))
}

/// Whether the extension-calculus cone of `phi` has the same homology as
/// the mapping cone everywhere in its certified window.
pub fn cone_agreement(phi: &ChainMap, length: usize) -> Result<bool> {
    let (value, (lo, hi)) = derivator_cone(phi, length)?;
    let classical = phi.mapping_cone()?.cone;
    for n in lo..=hi {
        if value.homology_normal_form(n)? != classical.homology_normal_form(n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Complex;
    use crate::exactalg::presentation::{ModulePresentation, NormalForm};
    use crate::exactalg::ring::CoeffRing;
    use num_bigint::BigInt;

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

    fn conc(m: ModulePresentation) -> Complex {
        Complex::concentrated(m, 0)
    }

    fn scalar_map(a: i64, src: &Complex, dst: &Complex) -> ChainMap {
        let ring = src.ring.clone();
        let mut maps = BTreeMap::new();
        let mut m = Matrix::zero(ring.clone(), dst.gens_at(0), src.gens_at(0));
        if dst.gens_at(0) > 0 && src.gens_at(0) > 0 {
            m.set(0, 0, ring.from_i64(a));
        }
        maps.insert(0, m);
        ChainMap::new(src.clone(), dst.clone(), maps).unwrap()
    }

    fn square_of(
        f00: Complex,
        f01: Complex,
        f10: Complex,
        f11: Complex,
        top: ChainMap,
        left: ChainMap,
        right: ChainMap,
        bottom: ChainMap,
    ) -> DiagramComplex {
        let diag = bottom.compose(&left).unwrap();
        let mut maps = BTreeMap::new();
        maps.insert(TOP, top);
        maps.insert(LEFT, left);
        maps.insert(3, diag);
        maps.insert(RIGHT, right);
        maps.insert(BOTTOM, bottom);
        DiagramComplex::new(FinCat::square(), vec![f00, f01, f10, f11], maps).unwrap()
    }

    #[test]
    fn collapse_square_is_bicartesian() {
        // Identity top edge against zeros below: the pushout comparison has
        // acyclic source and target.
        let m = conc(ModulePresentation::cyclic(z(), 4));
        let zero = Complex::empty(z());
        let sq = square_of(
            m.clone(),
            m.clone(),
            zero.clone(),
            zero.clone(),
            ChainMap::identity(&m),
            ChainMap::zero(&m, &zero),
            ChainMap::zero(&m, &zero),
            ChainMap::zero(&zero, &zero),
        );
        assert!(is_cocartesian(&sq).unwrap());
        assert!(is_cartesian(&sq).unwrap());
    }

    #[test]
    fn pushout_along_split_mono_is_bicartesian_and_breaks_with_extra_summand() {
        // Z --id--> Z
        //  |2        |2     is a genuine pushout square of free modules.
        //  v         v
        // Z --id--> Z
        let a = conc(ModulePresentation::free(z(), 1));
        let sq = square_of(
            a.clone(),
            a.clone(),
            a.clone(),
            a.clone(),
            ChainMap::identity(&a),
            scalar_map(2, &a, &a),
            scalar_map(2, &a, &a),
            ChainMap::identity(&a),
        );
        assert!(is_cocartesian(&sq).unwrap());
        assert!(is_cartesian(&sq).unwrap());

        // Replace the terminal corner by an extra torsion summand mapped
        // into by zero: no longer a pushout.
        let big = conc(ModulePresentation::direct_sum(&[
            &ModulePresentation::free(z(), 1),
            &ModulePresentation::cyclic(z(), 2),
        ]));
        let sq2 = square_of(
            a.clone(),
            a.clone(),
            a.clone(),
            big.clone(),
            ChainMap::identity(&a),
            scalar_map(2, &a, &a),
            scalar_map(2, &a, &big),
            scalar_map(1, &a, &big),
        );
        assert!(!is_cocartesian(&sq2).unwrap());
        assert!(!is_cartesian(&sq2).unwrap());
    }

    #[test]
    fn extension_square_of_projection_span_is_bicartesian() {
        // Z/4 <- Z -> Z/6, resolved and extended: the constructed square
        // must pass both exact detectors.
        let apex = conc(ModulePresentation::free(z(), 1));
        let left = conc(ModulePresentation::cyclic(z(), 4));
        let right = conc(ModulePresentation::cyclic(z(), 6));
        let mut maps = BTreeMap::new();
        maps.insert(1, scalar_map(1, &apex, &left));
        maps.insert(2, scalar_map(1, &apex, &right));
        let span =
            DiagramComplex::new(FinCat::pushout_span(), vec![apex, left, right], maps).unwrap();
        let (sq, window) = span_extension_square(&span, 4).unwrap();
        assert!(window.0 <= -3 && window.1 >= 0);
        assert!(is_cocartesian(&sq).unwrap());
        assert!(is_cartesian(&sq).unwrap());
    }

    #[test]
    fn extension_cone_of_multiplication_matches_mapping_cone() {
        let a = conc(ModulePresentation::free(z(), 1));
        let phi = scalar_map(2, &a, &a);
        let (value, (lo, hi)) = derivator_cone(&phi, 3).unwrap();
        assert!(lo <= -1 && hi >= 0);
        assert_eq!(
            value.homology_normal_form(0).unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(2)] }
        );
        assert_eq!(
            value.homology_normal_form(-1).unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![] }
        );
        assert!(cone_agreement(&phi, 3).unwrap());
    }

    #[test]
    fn extension_cone_of_zero_map_splits() {
        // cone(0: M -> N) has the homology of M[1] (+) N.
        let m = conc(ModulePresentation::cyclic(z(), 3));
        let n = conc(ModulePresentation::cyclic(z(), 5));
        let phi = ChainMap::zero(&m, &n);
        let (value, (lo, hi)) = derivator_cone(&phi, 3).unwrap();
        assert!(lo <= -1 && hi >= 0);
        assert_eq!(
            value.homology_normal_form(0).unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(5)] }
        );
        assert_eq!(
            value.homology_normal_form(-1).unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(3)] }
        );
        assert!(cone_agreement(&phi, 3).unwrap());
    }
}
