//! Diagrams of complexes over a finite shape: a complex per object, a chain
//! map per morphism, strictly functorial modulo the level relations. Maps of
//! diagrams are strictly natural families of chain maps. Restriction along a
//! functor, colimits/limits and pointwise Kan extensions live here; the
//! derived versions (through resolutions) are layered on top elsewhere.

mod kan;
mod limits;

pub use kan::{
    comma_projection, counit_lan, counit_ran, lan, lan_map, ran, ran_map, unit_lan, unit_ran,
    LanData, RanData,
};
pub use limits::{
    colim_complex, colim_map, lim_complex, lim_map, ColimComplexData, ColimData, LimComplexData,
    LimData, ModuleDiagram,
};

use std::collections::BTreeMap;

use crate::complexes::{ChainMap, Complex};
use crate::exactalg::ring::CoeffRing;
use crate::smallcat::{FinCat, Functor};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct DiagramComplex {
    pub shape: FinCat,
    objects: Vec<Complex>,
    /// One chain map per shape morphism, identities included.
    morphisms: Vec<ChainMap>,
}

impl DiagramComplex {
    /// Build from chain maps for the non-identity morphisms; identities are
    /// filled in. Validates endpoints and strict functoriality.
    pub fn new(
        shape: FinCat,
        objects: Vec<Complex>,
        nonidentity: BTreeMap<usize, ChainMap>,
    ) -> Result<DiagramComplex> {
        if objects.len() != shape.n_objects() {
            return Err(Error::ShapeMismatch("one complex per shape object required".into()));
        }
        if shape.n_objects() == 0 {
            return Err(Error::ShapeMismatch("empty shape has no coefficient ring".into()));
        }
        let ring = objects[0].ring.clone();
        if objects.iter().any(|c| c.ring != ring) {
            return Err(Error::NotCompatible("mixed coefficient rings in diagram".into()));
        }
        let mut morphisms = Vec::with_capacity(shape.n_morphisms());
        for m in 0..shape.n_morphisms() {
            let mor = shape.morphism(m);
            if shape.is_identity(m) {
                morphisms.push(ChainMap::identity(&objects[mor.src]));
            } else {
                let f = nonidentity.get(&m).ok_or_else(|| {
                    Error::NotAFunctor(format!("missing chain map for morphism {}", mor.name))
                })?;
                if f.source != objects[mor.src] || f.target != objects[mor.dst] {
                    return Err(Error::NotAFunctor(format!(
                        "chain map for {} has wrong endpoints",
                        mor.name
                    )));
                }
                morphisms.push(f.clone());
            }
        }
        let d = DiagramComplex { shape, objects, morphisms };
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
                let composite = self.morphisms[g].compose(&self.morphisms[f])?;
                if !composite.sub(&self.morphisms[gf])?.is_zero_map()? {
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

    /// Constant diagram: every object carries `c`, every morphism the
    /// identity.
    pub fn constant(shape: FinCat, c: Complex) -> Result<DiagramComplex> {
        let n = shape.n_objects();
        let mut maps = BTreeMap::new();
        for m in 0..shape.n_morphisms() {
            if !shape.is_identity(m) {
                maps.insert(m, ChainMap::identity(&c));
            }
        }
        DiagramComplex::new(shape, vec![c; n], maps)
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.objects[0].ring
    }

    pub fn object(&self, i: usize) -> &Complex {
        &self.objects[i]
    }

    pub fn objects(&self) -> &[Complex] {
        &self.objects
    }

    pub fn morphism(&self, m: usize) -> &ChainMap {
        &self.morphisms[m]
    }

    /// Union of the supports of all objects, sorted.
    pub fn support(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.objects.iter().flat_map(|c| c.support()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn is_levelwise_free(&self) -> bool {
        self.objects.iter().all(|c| c.is_levelwise_free())
    }

    /// Restriction along `u`: the diagram `i -> F(u(i))`.
    pub fn restrict(&self, u: &Functor) -> Result<DiagramComplex> {
        if u.target != self.shape {
            return Err(Error::NotCompatible("restriction along a functor into another shape".into()));
        }
        let objects: Vec<Complex> =
            u.ob_map.iter().map(|&o| self.objects[o].clone()).collect();
        let mut maps = BTreeMap::new();
        for m in 0..u.source.n_morphisms() {
            if u.source.is_identity(m) {
                continue;
            }
            let img = u.mor_map[m];
            let mor = u.source.morphism(m);
            // the image may be an identity of the target shape
            let f = if self.shape.is_identity(img) {
                ChainMap::identity(&self.objects[self.shape.morphism(img).src])
            } else {
                self.morphisms[img].clone()
            };
            let _ = mor;
            maps.insert(m, f);
        }
        DiagramComplex::new(u.source.clone(), objects, maps)
    }

    /// Evaluate at one object of the shape, as a single-object diagram
    /// convenience.
    pub fn at(&self, i: usize) -> &Complex {
        &self.objects[i]
    }
}

/// A strictly natural transformation between two diagrams on the same shape.
#[derive(Clone, Debug)]
pub struct DiagramMap {
    pub source: DiagramComplex,
    pub target: DiagramComplex,
    components: Vec<ChainMap>,
}

impl DiagramMap {
    pub fn new(
        source: DiagramComplex,
        target: DiagramComplex,
        components: Vec<ChainMap>,
    ) -> Result<DiagramMap> {
        if source.shape != target.shape {
            return Err(Error::NotCompatible("diagram map between different shapes".into()));
        }
        if components.len() != source.shape.n_objects() {
            return Err(Error::ShapeMismatch("one component per object required".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if c.source != *source.object(i) || c.target != *target.object(i) {
                return Err(Error::NotCompatible(format!(
                    "component {i} has wrong endpoints"
                )));
            }
        }
        for m in 0..source.shape.n_morphisms() {
            if source.shape.is_identity(m) {
                continue;
            }
            let mor = source.shape.morphism(m);
            let lhs = target.morphism(m).compose(&components[mor.src])?;
            let rhs = components[mor.dst].compose(source.morphism(m))?;
            if !lhs.sub(&rhs)?.is_zero_map()? {
                return Err(Error::NotCompatible(format!(
                    "naturality fails at {}",
                    mor.name
                )));
            }
        }
        Ok(DiagramMap { source, target, components })
    }

    pub fn identity(d: &DiagramComplex) -> DiagramMap {
        DiagramMap {
            source: d.clone(),
            target: d.clone(),
            components: d.objects.iter().map(ChainMap::identity).collect(),
        }
    }

    pub fn component(&self, i: usize) -> &ChainMap {
        &self.components[i]
    }

    pub fn compose(&self, inner: &DiagramMap) -> Result<DiagramMap> {
        let components = (0..self.components.len())
            .map(|i| self.components[i].compose(inner.component(i)))
            .collect::<Result<Vec<_>>>()?;
        DiagramMap::new(inner.source.clone(), self.target.clone(), components)
    }

    pub fn is_identity_up_to_relations(&self) -> Result<bool> {
        for (i, c) in self.components.iter().enumerate() {
            let id = ChainMap::identity(self.source.object(i));
            if c.source != c.target {
                return Ok(false);
            }
            if !c.sub(&id)?.is_zero_map()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction along `u`: the family `i -> component at u(i)`.
    pub fn restrict(&self, u: &Functor) -> Result<DiagramMap> {
        let source = self.source.restrict(u)?;
        let target = self.target.restrict(u)?;
        let components = u.ob_map.iter().map(|&o| self.components[o].clone()).collect();
        DiagramMap::new(source, target, components)
    }

    /// Every component a quasi-isomorphism.
    pub fn is_pointwise_quasi_iso(&self) -> Result<bool> {
        for c in &self.components {
            if !c.is_quasi_iso()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every component a quasi-isomorphism in the given degree window.
    pub fn is_pointwise_quasi_iso_within(&self, lo: i64, hi: i64) -> Result<bool> {
        for c in &self.components {
            if !c.is_quasi_iso_within(lo, hi)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every component an isomorphism of complexes (levelwise).
    pub fn is_pointwise_levelwise_iso(&self) -> Result<bool> {
        for c in &self.components {
            if !c.is_levelwise_iso()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::matrix::Matrix;
    use crate::exactalg::presentation::{ModulePresentation, NormalForm};

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

    fn two_term(d: i64) -> Complex {
        // Z --d--> Z in degrees 0, 1
        let mut levels = BTreeMap::new();
        levels.insert(0, ModulePresentation::free(z(), 1));
        levels.insert(1, ModulePresentation::free(z(), 1));
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::from_i64(&z(), &[&[d]]));
        Complex::from_parts(z(), levels, diffs).unwrap()
    }

    #[test]
    fn arrow_diagram_validates() {
        let shape = FinCat::interval();
        let a = two_term(2);
        let b = two_term(4);
        // (1, 2) is a chain map from *2 to *4: 4*1 = 2*2
        let mut m = BTreeMap::new();
        m.insert(0, Matrix::from_i64(&z(), &[&[1]]));
        m.insert(1, Matrix::from_i64(&z(), &[&[2]]));
        let f = ChainMap::new(a.clone(), b.clone(), m).unwrap();
        let mut maps = BTreeMap::new();
        maps.insert(1, f);
        let d = DiagramComplex::new(shape, vec![a, b], maps).unwrap();
        assert_eq!(d.support(), vec![0, 1]);
    }

    #[test]
    fn functoriality_is_enforced() {
        // C_2 shape with a morphism that does not square to the identity
        let mul = vec![vec![0, 1], vec![1, 0]];
        let bc2 =
            FinCat::one_object_group("BC2", vec!["e".into(), "s".into()], 0, &mul).unwrap();
        let c = Complex::concentrated(ModulePresentation::free(z(), 1), 0);
        let mut m = BTreeMap::new();
        m.insert(0, Matrix::from_i64(&z(), &[&[2]]));
        let double = ChainMap::new(c.clone(), c.clone(), m).unwrap();
        let mut maps = BTreeMap::new();
        maps.insert(1, double);
        assert!(DiagramComplex::new(bc2.clone(), vec![c.clone()], maps).is_err());
        // the sign action does square to the identity
        let mut m = BTreeMap::new();
        m.insert(0, Matrix::from_i64(&z(), &[&[-1]]));
        let neg = ChainMap::new(c.clone(), c.clone(), m).unwrap();
        let mut maps = BTreeMap::new();
        maps.insert(1, neg);
        assert!(DiagramComplex::new(bc2, vec![c], maps).is_ok());
    }

    #[test]
    fn restriction_along_endpoint() {
        let shape = FinCat::interval();
        let a = two_term(2);
        let b = two_term(3);
        let mut m = BTreeMap::new();
        m.insert(0, Matrix::from_i64(&z(), &[&[2]]));
        m.insert(1, Matrix::from_i64(&z(), &[&[3]]));
        let f = ChainMap::new(a.clone(), b.clone(), m).unwrap();
        let mut maps = BTreeMap::new();
        maps.insert(1, f);
        let d = DiagramComplex::new(shape.clone(), vec![a, b.clone()], maps).unwrap();
        // restrict along the inclusion of the endpoint 1
        let pt = FinCat::point();
        let incl = Functor::into_thin(&pt, &shape, vec![1]).unwrap();
        let r = d.restrict(&incl).unwrap();
        assert_eq!(r.object(0), &b);
    }

    #[test]
    fn colimit_of_constant_span_is_pushout() {
        // constant span on Z in degree 0 with identity maps: pushout = Z
        let span = FinCat::pushout_span();
        let c = Complex::concentrated(ModulePresentation::free(z(), 1), 0);
        let d = DiagramComplex::constant(span, c).unwrap();
        let col = colim_complex(&d).unwrap();
        assert_eq!(
            col.complex.level(0).normalize().unwrap(),
            NormalForm::Integers { free_rank: 1, torsion: vec![] }
        );
        // cocone legs land compatibly
        for leg in &col.cocone {
            assert!(!leg.is_zero_map().unwrap());
        }
    }
}
