//! Lifting maps out of cell diagrams through pointwise quasi-isomorphisms,
//! and the field dual: extending maps into cocell diagrams.
//!
//! A map out of a sum of representables is determined by where each cell's
//! identity column goes, so a natural null-homotopy into the cone of the
//! quasi-isomorphism can be solved one cell at a time, descending from the
//! top degree. The solve at degree `n` needs the cone exact there, so the
//! cell diagram must live inside the window where the quasi-isomorphism is
//! certified; callers arrange the margin. The extension problem dualizes
//! over a field to a lifting problem over the opposite shape: duals are
//! presented on bases of functionals, which turns everything levelwise free
//! and makes the duality exact on the nose.

use std::collections::BTreeMap;

use crate::complexes::{ChainMap, Complex, Homotopy};
use crate::diagrams::{DiagramComplex, DiagramMap};
use crate::exactalg::matrix::Matrix;
use crate::exactalg::snf;
use crate::resolve::cells::{CellBasis, CocellBasis};
use crate::resolve::generators::column_matrix;
use crate::{Error, Result};

/// A lift `L` with `q . L` homotopic to `f`, one witness per object.
#[derive(Clone, Debug)]
pub struct LiftData {
    pub lift: DiagramMap,
    pub homotopies: Vec<Homotopy>,
}

/// An extension `g` with `g . q` homotopic to `f`, one witness per object.
#[derive(Clone, Debug)]
pub struct ExtendData {
    pub extension: DiagramMap,
    pub homotopies: Vec<Homotopy>,
}

/// Lift `f: P -> Y` through `q: X -> Y`, where the levels of `P` carry the
/// given cell structure and the cone of `q` is exact in the degrees where
/// `P` lives. Returns `L: P -> X` and homotopies witnessing
/// `f - q . L = d h + h d` objectwise.
pub fn lift_cells(
    f: &DiagramMap,
    q: &DiagramMap,
    cells: &BTreeMap<i64, CellBasis>,
) -> Result<LiftData> {
    let p = &f.source;
    let x = &q.source;
    let y = &q.target;
    let shape = &p.shape;
    let ring = p.ring().clone();
    let nobj = shape.n_objects();

    let cones: Vec<_> = (0..nobj)
        .map(|j| q.component(j).mapping_cone())
        .collect::<Result<Vec<_>>>()?;

    // s[n][j]: P^n(j) -> cone^{n-1}(j), built cell by cell from the top.
    let mut s: BTreeMap<i64, Vec<Matrix>> = BTreeMap::new();
    for (&n, cb) in cells.iter().rev() {
        let mut s_n: Vec<Matrix> = (0..nobj)
            .map(|j| {
                Matrix::zero(ring.clone(), cones[j].cone.gens_at(n - 1), cb.size_at(j))
            })
            .collect();
        for c in 0..cb.n_cells() {
            let ic = cb.cells[c];
            let idm = shape.identity_of(ic);
            let p0 = cb.position(c, idm);
            let xg = x.object(ic).gens_at(n + 1);
            let cone_ic = &cones[ic].cone;

            // Right hand side in cone coordinates: the f column under the
            // inclusion of Y, minus the previous stage of d_P applied first.
            let fcol = f.component(ic).map_at(n).column(p0);
            let mut rhs = vec![ring.zero(); cone_ic.gens_at(n)];
            for (r, v) in fcol.into_iter().enumerate() {
                rhs[xg + r] = v;
            }
            if let Some(s_next) = s.get(&(n + 1)) {
                let dcol = column_matrix(&ring, &p.object(ic).differential(n).column(p0));
                let corr = s_next[ic].mul(&dcol);
                for r in 0..rhs.len() {
                    rhs[r] = ring.sub(&rhs[r], corr.at(r, 0));
                }
            }
            let rel = cone_ic.level(n).relation_columns();
            let w = snf::solve_mod(&cone_ic.differential(n - 1), &rel, &rhs)?.ok_or_else(|| {
                Error::NoSolution(format!(
                    "lift blocked at degree {n}: cone not exact there"
                ))
            })?;
            let wm = column_matrix(&ring, &w);

            // Spread the solved value over the cell's hom sets through the
            // cone transitions (block diagonal in X one degree up and Y).
            for j in 0..nobj {
                for &fmor in cb.hom(c, j) {
                    let xt = q.source.morphism(fmor).map_at(n);
                    let yt = q.target.morphism(fmor).map_at(n - 1);
                    let t = Matrix::block_diag(&[&xt, &yt]);
                    let col = t.mul(&wm);
                    let pos = cb.position(c, fmor);
                    for r in 0..col.rows {
                        s_n[j].set(r, pos, col.at(r, 0).clone());
                    }
                }
            }
        }
        s.insert(n, s_n);
    }

    // Extract the lift (negated X block) and the homotopies (Y block).
    let mut comps = Vec::with_capacity(nobj);
    let mut homotopies = Vec::with_capacity(nobj);
    for j in 0..nobj {
        let mut lmaps = BTreeMap::new();
        let mut hmaps = BTreeMap::new();
        for (&n, s_n) in &s {
            let sj = &s_n[j];
            if sj.cols == 0 {
                continue;
            }
            let xg = x.object(j).gens_at(n);
            let yg = y.object(j).gens_at(n - 1);
            let mut lm = Matrix::zero(ring.clone(), xg, sj.cols);
            let mut hm = Matrix::zero(ring.clone(), yg, sj.cols);
            for cix in 0..sj.cols {
                for r in 0..xg {
                    lm.set(r, cix, ring.neg(sj.at(r, cix)));
                }
                for r in 0..yg {
                    hm.set(r, cix, sj.at(xg + r, cix).clone());
                }
            }
            if xg > 0 {
                lmaps.insert(n, lm);
            }
            if yg > 0 {
                hmaps.insert(n, hm);
            }
        }
        comps.push(ChainMap::new(p.object(j).clone(), x.object(j).clone(), lmaps)?);
        homotopies.push(Homotopy::new(
            p.object(j).clone(),
            y.object(j).clone(),
            hmaps,
        )?);
    }
    let lift = DiagramMap::new(p.clone(), x.clone(), comps)?;
    Ok(LiftData { lift, homotopies })
}

/// The dual of a levelwise presentation over a field: per object and degree,
/// a basis of functionals (null space of the relations), the dualized
/// diagram over the opposite shape, and the evaluation data needed to carry
/// maps back.
struct DualDiagram {
    diagram: DiagramComplex,
    /// null[j][n]: functional basis columns for the original level `n` at `j`.
    null: Vec<BTreeMap<i64, Matrix>>,
}

fn dual_of(
    m: &Matrix,
    n_src: &Matrix,
    n_dst: &Matrix,
) -> Result<Matrix> {
    snf::solve_matrix(n_src, &m.transpose().mul(n_dst))?
        .ok_or_else(|| Error::NoSolution("functional pullback failed to solve".into()))
}

fn dualize_diagram(d: &DiagramComplex, op: &crate::smallcat::FinCat) -> Result<DualDiagram> {
    let ring = d.ring().clone();
    let nobj = d.shape.n_objects();
    let mut null: Vec<BTreeMap<i64, Matrix>> = vec![BTreeMap::new(); nobj];
    for j in 0..nobj {
        for n in d.object(j).support() {
            let basis = snf::kernel(&d.object(j).level(n).relations)?;
            null[j].insert(n, basis);
        }
    }
    let nb = |j: usize, n: i64| -> Matrix {
        null[j]
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(ring.clone(), d.object(j).gens_at(n), 0))
    };
    let mut objects = Vec::with_capacity(nobj);
    for j in 0..nobj {
        let mut levels = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in d.object(j).support() {
            levels.insert(
                -n,
                crate::exactalg::presentation::ModulePresentation::free(
                    ring.clone(),
                    nb(j, n).cols,
                ),
            );
        }
        for n in d.object(j).support() {
            // Dual differential at level -n-1 is the pullback along d^n.
            let df = d.object(j).differential(n);
            if df.rows == 0 {
                continue;
            }
            let dd = dual_of(&df, &nb(j, n), &nb(j, n + 1))?;
            if dd.rows > 0 && dd.cols > 0 {
                diffs.insert(-n - 1, dd);
            }
        }
        objects.push(Complex::from_parts(ring.clone(), levels, diffs)?);
    }
    let mut trans = BTreeMap::new();
    for m in 0..op.n_morphisms() {
        if op.is_identity(m) {
            continue;
        }
        // The op morphism m runs dst -> src of the original morphism m.
        let (osrc, odst) = {
            let mor = d.shape.morphism(m);
            (mor.src, mor.dst)
        };
        let mut maps = BTreeMap::new();
        for n in d.object(osrc).support() {
            let t = d.morphism(m).map_at(n);
            let dt = dual_of(&t, &nb(osrc, n), &nb(odst, n))?;
            if dt.rows > 0 && dt.cols > 0 {
                maps.insert(-n, dt);
            }
        }
        trans.insert(
            m,
            ChainMap::new(objects[odst].clone(), objects[osrc].clone(), maps)?,
        );
    }
    let diagram = DiagramComplex::new(op.clone(), objects, trans)?;
    Ok(DualDiagram { diagram, null })
}

impl DualDiagram {
    fn basis(&self, j: usize, n: i64) -> Matrix {
        self.null[j].get(&n).cloned().unwrap_or_else(|| {
            Matrix::zero(
                self.diagram.ring().clone(),
                0,
                self.diagram.object(j).gens_at(-n),
            )
        })
    }
}

/// Dualize a map of diagrams into a map between the dualized diagrams over
/// the opposite shape (source and target swap).
fn dualize_map(
    phi: &DiagramMap,
    src_dual: &DualDiagram,
    dst_dual: &DualDiagram,
) -> Result<DiagramMap> {
    let nobj = phi.source.shape.n_objects();
    let mut comps = Vec::with_capacity(nobj);
    for j in 0..nobj {
        let mut maps = BTreeMap::new();
        for n in phi.source.object(j).support() {
            let m = phi.component(j).map_at(n);
            let dm = dual_of(&m, &src_dual.basis(j, n), &dst_dual.basis(j, n))?;
            if dm.rows > 0 && dm.cols > 0 {
                maps.insert(-n, dm);
            }
        }
        comps.push(ChainMap::new(
            dst_dual.diagram.object(j).clone(),
            src_dual.diagram.object(j).clone(),
            maps,
        )?);
    }
    DiagramMap::new(dst_dual.diagram.clone(), src_dual.diagram.clone(), comps)
}

/// Extend `f: X -> I` along `q: X -> Y`, where the levels of `I` carry the
/// given cocell structure, coefficients are a field, and the cone of `q` is
/// exact in the degrees where `I` lives. Returns `g: Y -> I` and homotopies
/// witnessing `f - g . q = d h + h d` objectwise.
pub fn extend_cocells(
    f: &DiagramMap,
    q: &DiagramMap,
    cocells: &BTreeMap<i64, CocellBasis>,
) -> Result<ExtendData> {
    let x = &f.source;
    let i = &f.target;
    let y = &q.target;
    let ring = x.ring().clone();
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(
            "cocell extension needs field coefficients".into(),
        ));
    }
    let op = x.shape.opposite();
    let xd = dualize_diagram(x, &op)?;
    let yd = dualize_diagram(y, &op)?;
    let id_ = dualize_diagram(i, &op)?;
    let fd = dualize_map(f, &xd, &id_)?;
    let qd = dualize_map(q, &xd, &yd)?;
    let mut cells = BTreeMap::new();
    for (&n, cb) in cocells {
        cells.insert(-n, CellBasis::new(&op, cb.cells.clone()));
    }
    let lifted = lift_cells(&fd, &qd, &cells)?;

    // Carry the lift and homotopies back: transpose and precompose with the
    // evaluation (the transposed functional basis).
    let nobj = x.shape.n_objects();
    let mut comps = Vec::with_capacity(nobj);
    let mut homotopies = Vec::with_capacity(nobj);
    for j in 0..nobj {
        let mut gmaps = BTreeMap::new();
        for n in y.object(j).support() {
            let l = lifted.lift.component(j).map_at(-n);
            let g = l.transpose().mul(&yd.basis(j, n).transpose());
            if g.rows > 0 && !g.is_zero() {
                gmaps.insert(n, g);
            }
        }
        comps.push(ChainMap::new(
            y.object(j).clone(),
            i.object(j).clone(),
            gmaps,
        )?);
        let mut hmaps = BTreeMap::new();
        for n in x.object(j).support() {
            let h = lifted.homotopies[j].map_at(-n + 1);
            let hh = h.transpose().mul(&xd.basis(j, n).transpose());
            if hh.rows > 0 && !hh.is_zero() {
                hmaps.insert(n, hh);
            }
        }
        homotopies.push(Homotopy::new(
            x.object(j).clone(),
            i.object(j).clone(),
            hmaps,
        )?);
    }
    let extension = DiagramMap::new(y.clone(), i.clone(), comps)?;
    Ok(ExtendData { extension, homotopies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::DiagramComplex;
    use crate::exactalg::presentation::ModulePresentation;
    use crate::exactalg::ring::CoeffRing;
    use crate::resolve::coresolution::coresolve_diagram;
    use crate::resolve::resolution::resolve_diagram;
    use crate::smallcat::FinCat;

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

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
    fn lifts_comparison_through_hand_built_resolution() {
        // Y = Z/2 in degree 0; X = [Z --2--> Z] with the evident projection
        // q onto Y. The machine resolution P of Y lifts through q.
        let point = FinCat::point();
        let y = DiagramComplex::constant(
            point.clone(),
            Complex::concentrated(ModulePresentation::cyclic(z(), 2), 0),
        )
        .unwrap();
        let mut levels = BTreeMap::new();
        levels.insert(-1, ModulePresentation::free(z(), 1));
        levels.insert(0, ModulePresentation::free(z(), 1));
        let mut diffs = BTreeMap::new();
        diffs.insert(-1, Matrix::from_i64(&z(), &[&[2]]));
        let xc = Complex::from_parts(z(), levels, diffs).unwrap();
        let x = DiagramComplex::constant(point.clone(), xc.clone()).unwrap();
        let mut qm = BTreeMap::new();
        qm.insert(0, Matrix::identity(z(), 1));
        let q = DiagramMap::new(
            x.clone(),
            y.clone(),
            vec![ChainMap::new(xc, y.object(0).clone(), qm).unwrap()],
        )
        .unwrap();

        let r = resolve_diagram(&y, 1).unwrap();
        let ld = lift_cells(&r.comparison, &q, &r.cells).unwrap();
        let ql = q.component(0).compose(ld.lift.component(0)).unwrap();
        assert!(ld.homotopies[0]
            .witnesses(r.comparison.component(0), &ql)
            .unwrap());
    }

    #[test]
    fn lifts_over_group_shape_with_naturality() {
        // Lift the resolution comparison through itself over BC2: the result
        // is an endomorphism of the resolution homotopic to the identity
        // under q, and the construction already validated naturality.
        let f = DiagramComplex::constant(
            bc2(),
            Complex::concentrated(ModulePresentation::free(z(), 1), 0),
        )
        .unwrap();
        let r = resolve_diagram(&f, 3).unwrap();
        let ld = lift_cells(&r.comparison, &r.comparison, &r.cells).unwrap();
        for j in 0..1 {
            let ql = r
                .comparison
                .component(j)
                .compose(ld.lift.component(j))
                .unwrap();
            assert!(ld.homotopies[j]
                .witnesses(r.comparison.component(j), &ql)
                .unwrap());
        }
    }

    #[test]
    fn extends_comparison_along_longer_coresolution() {
        // X = k over BC2; I = short coresolution, Y = long coresolution.
        // The comparison into I extends along the comparison into Y, with
        // the homotopy witnessed objectwise.
        let x = DiagramComplex::constant(
            bc2(),
            Complex::concentrated(ModulePresentation::free(f2(), 1), 0),
        )
        .unwrap();
        let short = coresolve_diagram(&x, 2).unwrap();
        let long = coresolve_diagram(&x, 6).unwrap();
        let ed = extend_cocells(&short.comparison, &long.comparison, &short.cocells).unwrap();
        let gq = ed.extension.component(0)
            .compose(long.comparison.component(0))
            .unwrap();
        assert!(ed.homotopies[0]
            .witnesses(short.comparison.component(0), &gq)
            .unwrap());
        // The extension respects the group action by construction.
        assert_eq!(ed.extension.source.shape.n_objects(), 1);
    }

    #[test]
    fn extends_over_interval_shape() {
        // Same margin setup over the interval with a nontrivial transition:
        // the diagram k --0--> k (zero map), coresolved short and long.
        let two = FinCat::interval();
        let c = || Complex::concentrated(ModulePresentation::free(f2(), 1), 0);
        let arrow = two.hom_set(0, 1)[0];
        let mut maps = BTreeMap::new();
        maps.insert(arrow, ChainMap::zero(&c(), &c()));
        let x = DiagramComplex::new(two, vec![c(), c()], maps).unwrap();
        let short = coresolve_diagram(&x, 2).unwrap();
        let long = coresolve_diagram(&x, 5).unwrap();
        let ed = extend_cocells(&short.comparison, &long.comparison, &short.cocells).unwrap();
        for j in 0..2 {
            let gq = ed.extension.component(j)
                .compose(long.comparison.component(j))
                .unwrap();
            assert!(ed.homotopies[j]
                .witnesses(short.comparison.component(j), &gq)
                .unwrap());
        }
    }
}
