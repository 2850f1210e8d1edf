//! Colimits and limits of diagrams of presented modules, and their levelwise
//! extension to diagrams of complexes.
//!
//! The colimit is presented as a coequalizer: one generator block per object,
//! the relations of every object, plus one row `x - F(f)(x)` per generator and
//! non-identity morphism. The limit is the exact kernel of the difference map
//! into the product over non-identity morphisms; its generators are recorded
//! as columns in the ambient direct sum so projections stay available.

use std::collections::BTreeMap;

use crate::complexes::{ChainMap, Complex};
use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::ModulePresentation;
use crate::exactalg::ring::CoeffRing;
use crate::exactalg::snf;
use crate::smallcat::FinCat;
use crate::{Error, Result};

/// A functor from a finite category to presented modules, stored with one
/// matrix per morphism of the shape (identities included).
#[derive(Clone, Debug)]
pub struct ModuleDiagram {
    pub ring: CoeffRing,
    pub shape: FinCat,
    pub modules: Vec<ModulePresentation>,
    maps: Vec<Matrix>,
}

impl ModuleDiagram {
    /// Build from maps for the non-identity morphisms; identities are filled
    /// in. Validates well-definedness and functoriality modulo relations.
    pub fn new(
        shape: FinCat,
        modules: Vec<ModulePresentation>,
        nonidentity: BTreeMap<usize, Matrix>,
    ) -> Result<ModuleDiagram> {
        if modules.len() != shape.n_objects() {
            return Err(Error::ShapeMismatch("one module per shape object required".into()));
        }
        let ring = match modules.first() {
            Some(m) => m.ring.clone(),
            None => return Err(Error::ShapeMismatch("empty shape has no coefficient ring".into())),
        };
        if modules.iter().any(|m| m.ring != ring) {
            return Err(Error::NotCompatible("mixed coefficient rings in diagram".into()));
        }
        let mut maps = Vec::with_capacity(shape.n_morphisms());
        for m in 0..shape.n_morphisms() {
            let mor = shape.morphism(m);
            if shape.is_identity(m) {
                maps.push(Matrix::identity(ring.clone(), modules[mor.src].gens));
            } else {
                let f = nonidentity.get(&m).ok_or_else(|| {
                    Error::NotAFunctor(format!("missing map for morphism {}", mor.name))
                })?;
                if f.rows != modules[mor.dst].gens || f.cols != modules[mor.src].gens {
                    return Err(Error::ShapeMismatch(format!(
                        "map for {} has wrong shape",
                        mor.name
                    )));
                }
                if !ModulePresentation::well_defined_map(&modules[mor.src], &modules[mor.dst], f)? {
                    return Err(Error::NotAFunctor(format!(
                        "map for {} does not preserve relations",
                        mor.name
                    )));
                }
                maps.push(f.clone());
            }
        }
        let d = ModuleDiagram { ring, shape, modules, maps };
        d.validate_functorial()?;
        Ok(d)
    }

    fn validate_functorial(&self) -> Result<()> {
        for g in 0..self.shape.n_morphisms() {
            for f in 0..self.shape.n_morphisms() {
                if self.shape.morphism(f).dst != self.shape.morphism(g).src {
                    continue;
                }
                let gf = self.shape.compose(g, f);
                let composite = self.maps[g].mul(&self.maps[f]);
                let dst = &self.modules[self.shape.morphism(g).dst];
                if !ModulePresentation::maps_equal(dst, &self.maps[gf], &composite)? {
                    return Err(Error::NotAFunctor(format!(
                        "functoriality fails at {} . {}",
                        self.shape.morphism(g).name,
                        self.shape.morphism(f).name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn map(&self, m: usize) -> &Matrix {
        &self.maps[m]
    }

    pub fn colim(&self) -> Result<ColimData> {
        colim_of(&self.ring, &self.shape, &self.modules, &self.maps)
    }

    pub fn lim(&self) -> Result<LimData> {
        lim_of(&self.ring, &self.shape, &self.modules, &self.maps)
    }
}

/// Generator offsets per object at one level, plus the total.
fn offsets_of(sizes: &[usize]) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(sizes.len());
    let mut total = 0;
    for &s in sizes {
        offs.push(total);
        total += s;
    }
    (offs, total)
}

#[derive(Clone, Debug)]
pub struct ColimData {
    pub module: ModulePresentation,
    pub offsets: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ColimData {
    /// The structural map from the `i`-th object into the colimit, on
    /// generators.
    pub fn include(&self, i: usize) -> Matrix {
        let mut m = Matrix::zero(self.module.ring.clone(), self.module.gens, self.sizes[i]);
        for g in 0..self.sizes[i] {
            m.set(self.offsets[i] + g, g, self.module.ring.one());
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct LimData {
    /// Presentation on the columns of `gens`.
    pub module: ModulePresentation,
    /// Limit generators as columns in the ambient direct sum.
    pub gens: Matrix,
    pub offsets: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl LimData {
    /// The structural projection onto the `i`-th object, on generators.
    pub fn project(&self, i: usize) -> Matrix {
        let rows: Vec<usize> = (self.offsets[i]..self.offsets[i] + self.sizes[i]).collect();
        let cols: Vec<usize> = (0..self.gens.cols).collect();
        self.gens.submatrix(&rows, &cols)
    }
}

fn colim_of(
    ring: &CoeffRing,
    shape: &FinCat,
    modules: &[ModulePresentation],
    maps: &[Matrix],
) -> Result<ColimData> {
    let sizes: Vec<usize> = modules.iter().map(|m| m.gens).collect();
    let (offsets, total) = offsets_of(&sizes);
    let mut rows: Vec<Vec<crate::exactalg::ring::Scalar>> = Vec::new();
    for (i, m) in modules.iter().enumerate() {
        for r in 0..m.relations.rows {
            let mut row = vec![ring.zero(); total];
            for c in 0..m.relations.cols {
                row[offsets[i] + c] = m.relations.at(r, c).clone();
            }
            rows.push(row);
        }
    }
    for f in 0..shape.n_morphisms() {
        if shape.is_identity(f) {
            continue;
        }
        let (src, dst) = (shape.morphism(f).src, shape.morphism(f).dst);
        for g in 0..sizes[src] {
            let mut row = vec![ring.zero(); total];
            row[offsets[src] + g] = ring.one();
            for t in 0..sizes[dst] {
                let v = maps[f].at(t, g);
                row[offsets[dst] + t] = ring.sub(&row[offsets[dst] + t], v);
            }
            rows.push(row);
        }
    }
    let relations = if rows.is_empty() {
        Matrix::zero(ring.clone(), 0, total)
    } else {
        Matrix::from_rows(ring.clone(), rows)?
    };
    let module = ModulePresentation {
        ring: ring.clone(),
        gens: total,
        relations,
        gen_degrees: None,
    };
    Ok(ColimData { module, offsets, sizes })
}

fn lim_of(
    ring: &CoeffRing,
    shape: &FinCat,
    modules: &[ModulePresentation],
    maps: &[Matrix],
) -> Result<LimData> {
    let sizes: Vec<usize> = modules.iter().map(|m| m.gens).collect();
    let (offsets, total) = offsets_of(&sizes);
    let refs: Vec<&ModulePresentation> = modules.iter().collect();
    let src = if refs.is_empty() {
        ModulePresentation::zero(ring.clone())
    } else {
        ModulePresentation::direct_sum(&refs)
    };
    let arrows: Vec<usize> =
        (0..shape.n_morphisms()).filter(|&m| !shape.is_identity(m)).collect();
    let tgt_parts: Vec<&ModulePresentation> =
        arrows.iter().map(|&f| &modules[shape.morphism(f).dst]).collect();
    let tgt = if tgt_parts.is_empty() {
        ModulePresentation::zero(ring.clone())
    } else {
        ModulePresentation::direct_sum(&tgt_parts)
    };
    let mut phi = Matrix::zero(ring.clone(), tgt.gens, total);
    let mut row0 = 0;
    for &f in &arrows {
        let (s, d) = (shape.morphism(f).src, shape.morphism(f).dst);
        phi.set_block(row0, offsets[s], &maps[f]);
        let ident = Matrix::identity(ring.clone(), sizes[d]);
        let block = phi.submatrix(
            &(row0..row0 + sizes[d]).collect::<Vec<_>>(),
            &(offsets[d]..offsets[d] + sizes[d]).collect::<Vec<_>>(),
        );
        phi.set_block(row0, offsets[d], &block.sub(&ident));
        row0 += sizes[d];
    }
    let (gens, module) = ModulePresentation::kernel(&src, &tgt, &phi)?;
    Ok(LimData { module, gens, offsets, sizes })
}

/// The colimit of a diagram of complexes, computed levelwise, together with
/// the structural maps from each object.
#[derive(Clone, Debug)]
pub struct ColimComplexData {
    pub complex: Complex,
    pub cocone: Vec<ChainMap>,
    pub colims: BTreeMap<i64, ColimData>,
}

/// The limit of a diagram of complexes, computed levelwise, together with the
/// structural projections to each object.
#[derive(Clone, Debug)]
pub struct LimComplexData {
    pub complex: Complex,
    pub cone: Vec<ChainMap>,
    pub lims: BTreeMap<i64, LimData>,
}

pub(crate) fn level_module_diagram(
    f: &super::DiagramComplex,
    n: i64,
) -> (Vec<ModulePresentation>, Vec<Matrix>) {
    let modules: Vec<ModulePresentation> =
        (0..f.shape.n_objects()).map(|i| f.object(i).level(n)).collect();
    let maps: Vec<Matrix> =
        (0..f.shape.n_morphisms()).map(|m| f.morphism(m).map_at(n)).collect();
    (modules, maps)
}

pub fn colim_complex(f: &super::DiagramComplex) -> Result<ColimComplexData> {
    let ring = f.ring().clone();
    let degrees = f.support();
    let mut colims = BTreeMap::new();
    let mut levels = BTreeMap::new();
    for &n in &degrees {
        let (modules, maps) = level_module_diagram(f, n);
        let data = colim_of(&ring, &f.shape, &modules, &maps)?;
        levels.insert(n, data.module.clone());
        colims.insert(n, data);
    }
    // differential: blockwise the object differentials
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let (here, total_here) = match colims.get(&n) {
            Some(c) => (c.offsets.clone(), c.module.gens),
            None => continue,
        };
        let next = colims.get(&(n + 1));
        let (above, total_above) = match next {
            Some(c) => (c.offsets.clone(), c.module.gens),
            None => (vec![0; f.shape.n_objects()], 0),
        };
        if total_here == 0 || total_above == 0 {
            continue;
        }
        let mut d = Matrix::zero(ring.clone(), total_above, total_here);
        for i in 0..f.shape.n_objects() {
            d.set_block(above[i], here[i], &f.object(i).differential(n));
        }
        diffs.insert(n, d);
    }
    let complex = Complex::from_parts(ring.clone(), levels, diffs)?;
    let mut cocone = Vec::with_capacity(f.shape.n_objects());
    for i in 0..f.shape.n_objects() {
        let mut maps = BTreeMap::new();
        for &n in &degrees {
            let c = &colims[&n];
            if c.sizes[i] > 0 && complex.gens_at(n) > 0 {
                maps.insert(n, c.include(i));
            }
        }
        cocone.push(ChainMap::new(f.object(i).clone(), complex.clone(), maps)?);
    }
    Ok(ColimComplexData { complex, cocone, colims })
}

pub fn lim_complex(f: &super::DiagramComplex) -> Result<LimComplexData> {
    let ring = f.ring().clone();
    let degrees = f.support();
    let mut lims = BTreeMap::new();
    let mut levels = BTreeMap::new();
    for &n in &degrees {
        let (modules, maps) = level_module_diagram(f, n);
        let data = lim_of(&ring, &f.shape, &modules, &maps)?;
        levels.insert(n, data.module.clone());
        lims.insert(n, data);
    }
    // differential: solve for the matrix expressing d of the limit generators
    // in the limit generators one level up, modulo ambient relations
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let here = &lims[&n];
        let above = match lims.get(&(n + 1)) {
            Some(l) => l,
            None => continue,
        };
        if here.module.gens == 0 || above.module.gens == 0 {
            continue;
        }
        // ambient differential applied to the limit generators
        let (modules_above, _) = level_module_diagram(f, n + 1);
        let amb_total: usize = modules_above.iter().map(|m| m.gens).sum();
        let mut image = Matrix::zero(ring.clone(), amb_total, here.gens.cols);
        for i in 0..f.shape.n_objects() {
            let di = f.object(i).differential(n);
            if di.rows == 0 || here.sizes[i] == 0 {
                continue;
            }
            image.set_block(above.offsets[i], 0, &di.mul(&here.project(i)));
        }
        let refs: Vec<&ModulePresentation> = modules_above.iter().collect();
        let amb_rel = if refs.is_empty() {
            Matrix::zero(ring.clone(), 0, 0)
        } else {
            ModulePresentation::direct_sum(&refs).relation_columns()
        };
        let d = snf::solve_matrix_mod(&above.gens, &amb_rel, &image)?
            .ok_or_else(|| Error::NoSolution("limit differential does not restrict".into()))?;
        diffs.insert(n, d);
    }
    let complex = Complex::from_parts(ring.clone(), levels, diffs)?;
    let mut cone = Vec::with_capacity(f.shape.n_objects());
    for i in 0..f.shape.n_objects() {
        let mut maps = BTreeMap::new();
        for &n in &degrees {
            let l = &lims[&n];
            if l.sizes[i] > 0 && complex.gens_at(n) > 0 {
                maps.insert(n, l.project(i));
            }
        }
        cone.push(ChainMap::new(complex.clone(), f.object(i).clone(), maps)?);
    }
    Ok(LimComplexData { complex, cone, lims })
}

/// The map induced on colimits by a map of diagrams, blockwise on generators.
pub fn colim_map(
    phi: &super::DiagramMap,
    src: &ColimComplexData,
    dst: &ColimComplexData,
) -> Result<ChainMap> {
    let ring = phi.source.ring().clone();
    let mut maps = BTreeMap::new();
    for (&n, cd) in &src.colims {
        if cd.module.gens == 0 {
            continue;
        }
        let cd2 = match dst.colims.get(&n) {
            Some(c) if c.module.gens > 0 => c,
            _ => continue,
        };
        let mut t = Matrix::zero(ring.clone(), cd2.module.gens, cd.module.gens);
        for i in 0..phi.source.shape.n_objects() {
            if cd.sizes[i] == 0 || cd2.sizes[i] == 0 {
                continue;
            }
            t.set_block(cd2.offsets[i], cd.offsets[i], &phi.component(i).map_at(n));
        }
        maps.insert(n, t);
    }
    ChainMap::new(src.complex.clone(), dst.complex.clone(), maps)
}

/// The map induced on limits by a map of diagrams, solved against the target
/// limit generators.
pub fn lim_map(
    phi: &super::DiagramMap,
    src: &LimComplexData,
    dst: &LimComplexData,
) -> Result<ChainMap> {
    let ring = phi.source.ring().clone();
    let mut maps = BTreeMap::new();
    for (&n, ld) in &src.lims {
        if ld.module.gens == 0 {
            continue;
        }
        let ld2 = match dst.lims.get(&n) {
            Some(l) if l.module.gens > 0 => l,
            _ => continue,
        };
        let amb2: usize = ld2.sizes.iter().sum();
        let mut s = Matrix::zero(ring.clone(), amb2, ld.gens.rows);
        for i in 0..phi.source.shape.n_objects() {
            if ld.sizes[i] == 0 || ld2.sizes[i] == 0 {
                continue;
            }
            s.set_block(ld2.offsets[i], ld.offsets[i], &phi.component(i).map_at(n));
        }
        let (modules, _) = level_module_diagram(&phi.target, n);
        let refs: Vec<&ModulePresentation> = modules.iter().collect();
        let rel = if refs.is_empty() {
            Matrix::zero(ring.clone(), 0, 0)
        } else {
            ModulePresentation::direct_sum(&refs).relation_columns()
        };
        let x = snf::solve_matrix_mod(&ld2.gens, &rel, &s.mul(&ld.gens))?
            .ok_or_else(|| Error::NoSolution("induced limit map does not factor".into()))?;
        maps.insert(n, x);
    }
    ChainMap::new(src.complex.clone(), dst.complex.clone(), maps)
}
