//! Rectification: replace a homotopy commutative square by a strictly
//! commutative one with the same homotopy type.
//!
//! Given `phi : F -> G`, `phi' : F' -> G'`, vertical maps `gamma1, gamma2` and
//! a homotopy `s` witnessing `phi' . gamma1 - gamma2 . phi = ds + sd`, the top
//! map is replaced by the cylinder inclusion `F -> Cyl(phi)` and the right map
//! by `(s, phi'.gamma1, gamma2)` blockwise. The square then commutes on the
//! nose, `G -> Cyl(phi)` is a homotopy equivalence compatible with everything,
//! and `s` survives as the residual correction datum.

use std::collections::BTreeMap;

use super::chainmap::{ChainMap, Homotopy};
use super::complex::Complex;
use crate::exactalg::matrix::Matrix;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct RectifiedSquare {
    pub cylinder: Complex,
    /// `F -> Cyl(phi)`, the rectified top map.
    pub top: ChainMap,
    /// `Cyl(phi) -> G'`, the rectified right map.
    pub right: ChainMap,
    /// The original left map `gamma1 : F -> F'`.
    pub left: ChainMap,
    /// The original bottom map `phi' : F' -> G'`.
    pub bottom: ChainMap,
    /// `G -> Cyl(phi)`: levelwise split injection, homotopy equivalence.
    pub comparison: ChainMap,
    /// `Cyl(phi) -> G` with `comparison_inverse . comparison = id` exactly.
    pub comparison_inverse: ChainMap,
    /// Witness for `id - comparison . comparison_inverse`.
    pub comparison_homotopy: Homotopy,
    /// Witness relating the rectified and the original top map:
    /// `top - comparison . phi = dt + td`.
    pub top_homotopy: Homotopy,
    /// The input homotopy, preserved as the residual datum.
    pub residual: Homotopy,
}

pub fn rectify_square(
    phi: &ChainMap,
    phi_p: &ChainMap,
    gamma1: &ChainMap,
    gamma2: &ChainMap,
    s: &Homotopy,
) -> Result<RectifiedSquare> {
    if gamma1.source != phi.source
        || gamma1.target != phi_p.source
        || gamma2.source != phi.target
        || gamma2.target != phi_p.target
    {
        return Err(Error::NotCompatible("rectify: square endpoints do not line up".into()));
    }
    let top_comp = phi_p.compose(gamma1)?;
    let bot_comp = gamma2.compose(phi)?;
    if !s.witnesses(&top_comp, &bot_comp)? {
        return Err(Error::NotHomotopyCommutative(
            "homotopy does not witness phi'.gamma1 - gamma2.phi".into(),
        ));
    }
    let cyl = phi.cylinder()?;
    let f = &phi.source;
    let g = &phi.target;
    let gp = &phi_p.target;
    let ring = f.ring.clone();
    let mut maps = BTreeMap::new();
    for n in cyl.cylinder.support() {
        let a = f.gens_at(n + 1);
        let b = f.gens_at(n);
        let c = g.gens_at(n);
        let mut m = Matrix::zero(ring.clone(), gp.gens_at(n), a + b + c);
        m.set_block(0, 0, &s.map_at(n + 1));
        m.set_block(0, a, &top_comp.map_at(n));
        m.set_block(0, a + b, &gamma2.map_at(n));
        maps.insert(n, m);
    }
    let right = ChainMap::new(cyl.cylinder.clone(), gp.clone(), maps)?;
    // strict commutativity, by construction
    if !right.compose(&cyl.iota)?.sub(&top_comp)?.is_zero_map()? {
        return Err(Error::NotCompatible("rectify: square does not commute strictly".into()));
    }
    if !right.compose(&cyl.alpha)?.sub(gamma2)?.is_zero_map()? {
        return Err(Error::NotCompatible("rectify: comparison does not recover gamma2".into()));
    }
    Ok(RectifiedSquare {
        cylinder: cyl.cylinder,
        top: cyl.iota,
        right,
        left: gamma1.clone(),
        bottom: phi_p.clone(),
        comparison: cyl.alpha,
        comparison_inverse: cyl.beta,
        comparison_homotopy: cyl.homotopy_alpha_beta,
        top_homotopy: cyl.homotopy_iota,
        residual: s.clone(),
    })
}
