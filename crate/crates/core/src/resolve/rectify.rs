//! Rectification of homotopy commutative squares.
//!
//! Given a square
//!
//! ```text
//!     F  --phi-->  G
//!     |gamma1      |gamma2
//!     v            v
//!     F' --phi'--> G'
//! ```
//!
//! commuting up to a homotopy `s` (so `gamma2 phi - phi' gamma1 = ds + sd`),
//! replace `G` by the cylinder of `phi` and `gamma2` by a corrected map that
//! absorbs `s`. The output square commutes strictly, and the cylinder's
//! inclusion and collapse compare it back to the input: `collapse . include`
//! is the identity exactly, `include . collapse` is homotopic to the
//! identity by an explicit witness.

use std::collections::BTreeMap;

use crate::complexes::{ChainMap, CylinderData, Homotopy};
use crate::diagrams::DiagramComplex;
use crate::exactalg::matrix::Matrix;
use crate::smallcat::FinCat;
use crate::{Error, Result};

/// The strictly commutative replacement square with its comparison data.
#[derive(Clone, Debug)]
pub struct RectifiedSquare {
    /// On the square shape: 00 = F, 01 = cylinder of `phi`, 10 = F',
    /// 11 = G'. The top edge is the cylinder inclusion of F.
    pub square: DiagramComplex,
    /// The corrected right edge `Cyl(phi) -> G'`: `-s` on the shifted
    /// block, `phi' gamma1` on the source block, `gamma2` on the target
    /// block.
    pub corrected: ChainMap,
    /// Cylinder comparison back to the original `G`.
    pub cylinder: CylinderData,
}

/// Rectify the square above. Errors if `s` does not witness the homotopy
/// commutation.
pub fn rectify_square(
    gamma1: &ChainMap,
    gamma2: &ChainMap,
    s: &Homotopy,
    phi: &ChainMap,
    phi_prime: &ChainMap,
) -> Result<RectifiedSquare> {
    let f = &phi.source;
    let g = &phi.target;
    if gamma1.source != *f || gamma2.source != *g || phi_prime.source != gamma1.target {
        return Err(Error::NotCompatible("square endpoints do not match".into()));
    }
    if phi_prime.target != gamma2.target {
        return Err(Error::NotCompatible("square endpoints do not match".into()));
    }
    let around = gamma2.compose(phi)?;
    let down = phi_prime.compose(gamma1)?;
    if !s.witnesses(&around, &down)? {
        return Err(Error::NotHomotopyCommutative(
            "s does not witness gamma2 . phi = phi' . gamma1".into(),
        ));
    }

    let cyl = phi.cylinder()?;
    let ring = f.ring.clone();
    let gp = &phi_prime.target;
    let mut maps = BTreeMap::new();
    for n in cyl.cylinder.support() {
        let rows = gp.gens_at(n);
        let (a, b, c) = (f.gens_at(n + 1), f.gens_at(n), g.gens_at(n));
        if rows == 0 || a + b + c == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring.clone(), rows, a + b + c);
        m.set_block(0, 0, &s.map_at(n + 1).neg());
        m.set_block(0, a, &down.map_at(n));
        m.set_block(0, a + b, &gamma2.map_at(n));
        maps.insert(n, m);
    }
    let corrected = ChainMap::new(cyl.cylinder.clone(), gp.clone(), maps)?;

    let mut edges = BTreeMap::new();
    edges.insert(1, cyl.iota.clone());
    edges.insert(2, gamma1.clone());
    edges.insert(3, down);
    edges.insert(5, corrected.clone());
    edges.insert(7, phi_prime.clone());
    let square = DiagramComplex::new(
        FinCat::square(),
        vec![f.clone(), cyl.cylinder.clone(), gamma1.target.clone(), gp.clone()],
        edges,
    )?;
    Ok(RectifiedSquare { square, corrected, cylinder: cyl })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Complex;
    use crate::exactalg::presentation::ModulePresentation;
    use crate::exactalg::ring::CoeffRing;

    fn f5() -> CoeffRing {
        CoeffRing::PrimeField(5)
    }

    fn two_term(d: &[[i64; 2]; 2]) -> Complex {
        let ring = f5();
        let mut levels = BTreeMap::new();
        levels.insert(0, ModulePresentation::free(ring.clone(), 2));
        levels.insert(1, ModulePresentation::free(ring.clone(), 2));
        let mut m = Matrix::zero(ring.clone(), 2, 2);
        for r in 0..2 {
            for c in 0..2 {
                m.set(r, c, ring.from_i64(d[r][c]));
            }
        }
        let mut diffs = BTreeMap::new();
        diffs.insert(0, m);
        Complex::from_parts(ring, levels, diffs).unwrap()
    }

    #[test]
    fn strict_square_rectifies_to_the_collapse() {
        let x = two_term(&[[0, 1], [0, 0]]);
        let id = ChainMap::identity(&x);
        let s = Homotopy::zero(&x, &x);
        let r = rectify_square(&id, &id, &s, &id, &id).unwrap();
        // With s = 0 and identity edges the corrected map is the cylinder
        // collapse itself.
        assert!(r.corrected.sub(&r.cylinder.beta).unwrap().is_zero_map().unwrap());
    }

    #[test]
    fn homotopy_perturbed_identity_rectifies() {
        let x = two_term(&[[0, 1], [0, 0]]);
        let ring = f5();
        let d0 = x.differential(0);
        let mut t1 = Matrix::zero(ring.clone(), 2, 2);
        t1.set(0, 0, ring.from_i64(1));
        t1.set(0, 1, ring.from_i64(2));
        t1.set(1, 0, ring.from_i64(3));
        t1.set(1, 1, ring.from_i64(4));
        let mut tmaps = BTreeMap::new();
        tmaps.insert(1, t1.clone());
        let t = Homotopy::new(x.clone(), x.clone(), tmaps).unwrap();
        // gamma2 = id + dt + td is chain homotopic to the identity with
        // witness t.
        let mut gmaps = BTreeMap::new();
        gmaps.insert(0, Matrix::identity(ring.clone(), 2).add(&t1.mul(&d0)));
        gmaps.insert(1, Matrix::identity(ring.clone(), 2).add(&d0.mul(&t1)));
        let gamma2 = ChainMap::new(x.clone(), x.clone(), gmaps).unwrap();
        let id = ChainMap::identity(&x);

        let r = rectify_square(&id, &gamma2, &t, &id, &id).unwrap();
        // Comparison identities: collapse . include = id exactly, and
        // include . collapse = id up to the packaged witness.
        let back = r.cylinder.beta.compose(&r.cylinder.alpha).unwrap();
        assert!(back.sub(&ChainMap::identity(&x)).unwrap().is_zero_map().unwrap());
        let fwd = r.cylinder.alpha.compose(&r.cylinder.beta).unwrap();
        let idc = ChainMap::identity(&r.cylinder.cylinder);
        assert!(r.cylinder.homotopy_alpha_beta.witnesses(&idc, &fwd).unwrap());
        // The corrected edge restricted along the original inclusion of G
        // recovers gamma2.
        let through = r.corrected.compose(&r.cylinder.alpha).unwrap();
        assert!(through.sub(&gamma2).unwrap().is_zero_map().unwrap());
    }

    #[test]
    fn rejects_a_wrong_witness() {
        let x = two_term(&[[0, 1], [0, 0]]);
        let id = ChainMap::identity(&x);
        // x is not acyclic, so the zero map is not homotopic to the
        // identity and the zero homotopy cannot witness the square.
        let zero = ChainMap::zero(&x, &x);
        let s = Homotopy::zero(&x, &x);
        let err = rectify_square(&id, &zero, &s, &id, &id).unwrap_err();
        assert!(matches!(err, Error::NotHomotopyCommutative(_)));
    }
}
