//! Levelwise-corepresentable coresolutions of diagrams of complexes over a
//! field, built by an ascending staircase from the bottom degree.
//!
//! At each degree the staircase forms the cokernel of the previous stage
//! paired against the differential, then embeds it into a sum of cofree
//! levels picked by the separating-functional search. Functionals vanish on
//! relations exactly and cofree transitions are strictly functorial, so the
//! output complex has exact `d . d = 0` and strict naturality while the
//! comparison from the input commutes modulo level relations. With
//! `length + 1` levels above the bottom degree `lo`, homology agrees with the
//! input in degrees `lo ..= lo + length - 1`.

use std::collections::BTreeMap;

use crate::complexes::{ChainMap, Complex};
use crate::diagrams::{DiagramComplex, DiagramMap};
use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::ModulePresentation;
use crate::resolve::cells::CocellBasis;
use crate::resolve::generators::{row_matrix, separating_functionals};
use crate::{Error, Result};

/// A coresolution of a diagram of complexes by levelwise sums of
/// corepresentables, with the comparison map and the certification window.
#[derive(Clone, Debug)]
pub struct Coresolution {
    pub diagram: DiagramComplex,
    pub cocells: BTreeMap<i64, CocellBasis>,
    pub comparison: DiagramMap,
    pub certified: (i64, i64),
}

/// Coresolve `f` by cofree cocells from its bottom degree upwards, placing
/// `length + 1` cocell levels. Field coefficients only.
pub fn coresolve_diagram(f: &DiagramComplex, length: usize) -> Result<Coresolution> {
    let ring = f.ring().clone();
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(
            "coresolutions require field coefficients".into(),
        ));
    }
    let shape = f.shape.clone();
    let nobj = shape.n_objects();
    let lo = f.support().first().copied().unwrap_or(0);
    let hi = lo + length as i64;

    let empty = CocellBasis::empty(&shape);
    let mut cocellmap: BTreeMap<i64, CocellBasis> = BTreeMap::new();
    // iota[n][j]: F^n(j) -> I^n(j); di[n][j]: I^n(j) -> I^{n+1}(j).
    let mut iota: BTreeMap<i64, Vec<Matrix>> = BTreeMap::new();
    let mut di: BTreeMap<i64, Vec<Matrix>> = BTreeMap::new();

    for n in lo..=hi {
        let below = cocellmap.get(&(n - 1)).unwrap_or(&empty).clone();
        let below2 = cocellmap.get(&(n - 2)).unwrap_or(&empty).clone();

        // The stage module Y^n = coker(F^{n-1} + I^{n-2} -> F^n + I^{n-1}),
        // presented on the generators of F^n plus the cocells one level down.
        let mut stages = Vec::with_capacity(nobj);
        for j in 0..nobj {
            let fj = f.object(j);
            let fn_j = fj.level(n);
            let fgens = fn_j.gens;
            let igens = below.size_at(j);
            let total = fgens + igens;
            let mut rows: Vec<Matrix> = Vec::new();
            let mut rel_f = Matrix::zero(ring.clone(), fn_j.relations.rows, total);
            rel_f.set_block(0, 0, &fn_j.relations);
            rows.push(rel_f);
            if below2.size_at(j) > 0 && igens > 0 {
                let d2 = &di[&(n - 2)][j];
                let mut r = Matrix::zero(ring.clone(), d2.cols, total);
                r.set_block(0, fgens, &d2.transpose());
                rows.push(r);
            }
            let fprev = fj.level(n - 1).gens;
            if fprev > 0 {
                let dfm = fj.differential(n - 1);
                let mut r = Matrix::zero(ring.clone(), fprev, total);
                r.set_block(0, 0, &dfm.transpose());
                if igens > 0 {
                    r.set_block(0, fgens, &iota[&(n - 1)][j].transpose().neg());
                }
                rows.push(r);
            }
            let relations = Matrix::vstack(&rows.iter().collect::<Vec<_>>());
            stages.push(ModulePresentation::from_relations(ring.clone(), relations));
        }

        let transitions: Vec<Matrix> = (0..shape.n_morphisms())
            .map(|m| {
                Matrix::block_diag(&[&f.morphism(m).map_at(n), &below.transition(&ring, m)])
            })
            .collect();

        let picks = separating_functionals(&shape, &stages, &transitions)?;
        let cocells_n = CocellBasis::new(&shape, picks.iter().map(|(i, _)| *i).collect());

        // The embedding rows, split into the comparison on the F block and
        // the differential on the cocell block.
        let mut iota_n = Vec::with_capacity(nobj);
        let mut di_prev = Vec::with_capacity(nobj);
        for j in 0..nobj {
            let fgens = f.object(j).level(n).gens;
            let igens = below.size_at(j);
            let size = cocells_n.size_at(j);
            let mut eta = Matrix::zero(ring.clone(), size, fgens + igens);
            for (c, (ic, phi)) in picks.iter().enumerate() {
                let phirow = row_matrix(&ring, phi);
                for &fmor in cocells_n.hom(c, j) {
                    debug_assert_eq!(shape.morphism(fmor).dst, *ic);
                    let row = phirow.mul(&transitions[fmor]);
                    let pos = cocells_n.position(c, fmor);
                    for cix in 0..fgens + igens {
                        eta.set(pos, cix, row.at(0, cix).clone());
                    }
                }
            }
            let mut ij = Matrix::zero(ring.clone(), size, fgens);
            let mut dj = Matrix::zero(ring.clone(), size, igens);
            for r in 0..size {
                for cix in 0..fgens {
                    ij.set(r, cix, eta.at(r, cix).clone());
                }
                for cix in 0..igens {
                    dj.set(r, cix, eta.at(r, fgens + cix).clone());
                }
            }
            iota_n.push(ij);
            di_prev.push(dj);
        }
        if below.n_cells() > 0 {
            di.insert(n - 1, di_prev);
        }
        iota.insert(n, iota_n);
        cocellmap.insert(n, cocells_n);
    }

    // Assemble the coresolving diagram and the comparison from the input.
    let mut objects = Vec::with_capacity(nobj);
    for j in 0..nobj {
        let mut levels = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (&n, cb) in &cocellmap {
            levels.insert(n, cb.presentation_at(&ring, j));
            if let Some(d) = di.get(&n) {
                diffs.insert(n, d[j].clone());
            }
        }
        objects.push(Complex::from_parts(ring.clone(), levels, diffs)?);
    }
    let mut trans = BTreeMap::new();
    for m in 0..shape.n_morphisms() {
        if shape.is_identity(m) {
            continue;
        }
        let (src, dst) = {
            let mor = shape.morphism(m);
            (mor.src, mor.dst)
        };
        let mut maps = BTreeMap::new();
        for (&n, cb) in &cocellmap {
            if cb.size_at(src) > 0 && cb.size_at(dst) > 0 {
                maps.insert(n, cb.transition(&ring, m));
            }
        }
        trans.insert(m, ChainMap::new(objects[src].clone(), objects[dst].clone(), maps)?);
    }
    let diagram = DiagramComplex::new(shape.clone(), objects, trans)?;
    let mut comps = Vec::with_capacity(nobj);
    for j in 0..nobj {
        let mut maps = BTreeMap::new();
        for (&n, cb) in &cocellmap {
            if cb.size_at(j) > 0 && f.object(j).gens_at(n) > 0 {
                maps.insert(n, iota[&n][j].clone());
            }
        }
        comps.push(ChainMap::new(
            f.object(j).clone(),
            diagram.object(j).clone(),
            maps,
        )?);
    }
    let comparison = DiagramMap::new(f.clone(), diagram.clone(), comps)?;
    Ok(Coresolution {
        diagram,
        cocells: cocellmap,
        comparison,
        certified: (lo, hi - 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ring::CoeffRing;
    use crate::smallcat::FinCat;

    fn f2() -> CoeffRing {
        CoeffRing::PrimeField(2)
    }

    fn bc2() -> FinCat {
        FinCat::one_object_group(
            "BC2",
            vec!["e".into(), "s".into()],
            0,
            &[vec![0, 1], vec![1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn coresolves_point_module_trivially() {
        // A vector space on a point embeds into itself; higher levels vanish.
        let c = Complex::concentrated(ModulePresentation::free(f2(), 2), 0);
        let f = DiagramComplex::constant(FinCat::point(), c).unwrap();
        let r = coresolve_diagram(&f, 3).unwrap();
        assert_eq!(r.certified, (0, 2));
        assert_eq!(r.diagram.object(0).gens_at(0), 2);
        assert_eq!(r.diagram.object(0).gens_at(1), 0);
        assert!(r.comparison.is_pointwise_quasi_iso_within(0, 2).unwrap());
    }

    #[test]
    fn coresolves_trivial_module_over_group() {
        // k over BC2 coresolves by one cofree cocell per level (the periodic
        // pattern, abelian dimension 2 per level) and the comparison is a
        // quasi-isomorphism in the certified window.
        let c = Complex::concentrated(ModulePresentation::free(f2(), 1), 0);
        let f = DiagramComplex::constant(bc2(), c).unwrap();
        let r = coresolve_diagram(&f, 4).unwrap();
        for n in 0..=4 {
            assert_eq!(r.diagram.object(0).gens_at(n), 2, "degree {n}");
        }
        assert!(r.comparison.is_pointwise_quasi_iso_within(0, 3).unwrap());
    }

    #[test]
    fn coresolves_interval_diagram_minimally() {
        // The identity diagram k -> k over the interval embeds into a single
        // cofree block at the terminal object and stops.
        let two = FinCat::interval();
        let c = || Complex::concentrated(ModulePresentation::free(f2(), 1), 0);
        let arrow = two.hom_set(0, 1)[0];
        let mut maps = BTreeMap::new();
        maps.insert(
            arrow,
            ChainMap::new(c(), c(), {
                let mut b = BTreeMap::new();
                b.insert(0, Matrix::identity(f2(), 1));
                b
            })
            .unwrap(),
        );
        let f = DiagramComplex::new(two, vec![c(), c()], maps).unwrap();
        let r = coresolve_diagram(&f, 2).unwrap();
        assert_eq!(r.cocells[&0].n_cells(), 1);
        assert_eq!(r.cocells[&0].cells, vec![1]);
        assert_eq!(r.cocells[&1].n_cells(), 0);
        assert!(r.comparison.is_pointwise_quasi_iso_within(0, 1).unwrap());
    }

    #[test]
    fn rejects_integer_coefficients() {
        let c = Complex::concentrated(
            ModulePresentation::free(CoeffRing::Integers, 1),
            0,
        );
        let f = DiagramComplex::constant(FinCat::point(), c).unwrap();
        assert!(coresolve_diagram(&f, 2).is_err());
    }
}
