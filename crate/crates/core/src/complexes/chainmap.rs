//! Chain maps, homotopies, mapping cones and cylinders.

use std::collections::BTreeMap;

use super::complex::{Complex, HomologyData};
use crate::exactalg::graded;
use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::{exact_at, ModulePresentation};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    /// `maps[n] : source^n -> target^n` on generators; missing entries are zero.
    maps: BTreeMap<i64, Matrix>,
}

/// A degree `-1` collection `h^n : source^n -> target^{n-1}`, used as a
/// witness that two chain maps agree up to homotopy.
#[derive(Clone, Debug, PartialEq)]
pub struct Homotopy {
    pub source: Complex,
    pub target: Complex,
    maps: BTreeMap<i64, Matrix>,
}

/// A mapping cylinder together with its structure maps: `beta . iota` factors
/// the original map, `alpha` and `beta` are inverse homotopy equivalences.
#[derive(Clone, Debug)]
pub struct CylinderData {
    pub cylinder: Complex,
    /// `F -> Cyl`, the cofibration replacing the original map.
    pub iota: ChainMap,
    /// `G -> Cyl`, a homotopy equivalence (strict section of `beta`).
    pub alpha: ChainMap,
    /// `Cyl -> G` with `beta . alpha = id` exactly.
    pub beta: ChainMap,
    /// Witness for `id - alpha . beta`.
    pub homotopy_alpha_beta: Homotopy,
    /// Witness for `iota - alpha . phi`.
    pub homotopy_iota: Homotopy,
}

/// A mapping cone with the two maps of its triangle.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub cone: Complex,
    /// `G -> cone`.
    pub include_target: ChainMap,
    /// `cone -> F[1]`.
    pub project_source: ChainMap,
}

impl ChainMap {
    pub fn new(
        source: Complex,
        target: Complex,
        maps: BTreeMap<i64, Matrix>,
    ) -> Result<ChainMap> {
        if source.ring != target.ring {
            return Err(Error::NotCompatible("chain map across different rings".into()));
        }
        let ring = source.ring.clone();
        let mut mm = BTreeMap::new();
        for (n, mut f) in maps {
            let src = source.level(n);
            let tgt = target.level(n);
            if f.rows != tgt.gens || f.cols != src.gens {
                return Err(Error::ShapeMismatch(format!(
                    "level {n} map is {}x{}, expected {}x{}",
                    f.rows, f.cols, tgt.gens, src.gens
                )));
            }
            if f.is_zero() {
                continue;
            }
            if ring.is_graded() {
                f = f.with_degrees(
                    tgt.gen_degrees.clone().unwrap(),
                    src.gen_degrees.clone().unwrap(),
                );
                graded::validate_graded(&f)?;
            }
            if !ModulePresentation::well_defined_map(&src, &tgt, &f)? {
                return Err(Error::NotAChainMap(format!(
                    "level {n} map does not preserve relations"
                )));
            }
            mm.insert(n, f);
        }
        let cm = ChainMap { source, target, maps: mm };
        for n in cm.active_degrees() {
            let lhs = cm.target.differential(n).mul(&cm.map_at(n));
            let rhs = cm.map_at(n + 1).mul(&cm.source.differential(n));
            if !ModulePresentation::maps_equal(&cm.target.level(n + 1), &lhs, &rhs)? {
                return Err(Error::NotAChainMap(format!(
                    "does not commute with the differential at degree {n}"
                )));
            }
        }
        Ok(cm)
    }

    fn active_degrees(&self) -> Vec<i64> {
        self.source.support()
    }

    pub fn identity(c: &Complex) -> ChainMap {
        let maps = c
            .support()
            .into_iter()
            .map(|n| (n, Matrix::identity(c.ring.clone(), c.gens_at(n))))
            .collect();
        ChainMap::new(c.clone(), c.clone(), maps).expect("identity is a chain map")
    }

    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            maps: BTreeMap::new(),
        }
    }

    pub fn map_at(&self, n: i64) -> Matrix {
        self.maps.get(&n).cloned().unwrap_or_else(|| {
            let mut f = Matrix::zero(
                self.source.ring.clone(),
                self.target.gens_at(n),
                self.source.gens_at(n),
            );
            if self.source.ring.is_graded() {
                f = f.with_degrees(
                    self.target.level(n).gen_degrees.unwrap_or_default(),
                    self.source.level(n).gen_degrees.unwrap_or_default(),
                );
            }
            f
        })
    }

    pub fn is_zero_map(&self) -> Result<bool> {
        for n in self.active_degrees() {
            if !ModulePresentation::map_is_zero(&self.target.level(n), &self.map_at(n))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap> {
        if inner.target != self.source {
            return Err(Error::NotCompatible("compose: middle complexes differ".into()));
        }
        let maps = inner
            .source
            .support()
            .into_iter()
            .map(|n| (n, self.map_at(n).mul(&inner.map_at(n))))
            .collect();
        ChainMap::new(inner.source.clone(), self.target.clone(), maps)
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::NotCompatible("add: different endpoints".into()));
        }
        let maps = self
            .source
            .support()
            .into_iter()
            .map(|n| (n, self.map_at(n).add(&other.map_at(n))))
            .collect();
        ChainMap::new(self.source.clone(), self.target.clone(), maps)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChainMap {
        let maps = self.maps.iter().map(|(&n, m)| (n, m.neg())).collect();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps,
        }
    }

    /// Shift both endpoints; chain maps shift without signs.
    pub fn shift(&self, k: i64) -> ChainMap {
        let maps = self.maps.iter().map(|(&n, m)| (n - k, m.clone())).collect();
        ChainMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            maps,
        }
    }

    /// The matrix of the induced map on homology, together with both homology
    /// data records (source first).
    pub fn induced_on_homology(&self, n: i64) -> Result<(HomologyData, HomologyData, Matrix)> {
        let hs = self.source.homology(n)?;
        let ht = self.target.homology(n)?;
        let image = self.map_at(n).mul(&hs.cycles);
        let induced = ht.classes_of(&image)?;
        Ok((hs, ht, induced))
    }

    pub fn is_quasi_iso(&self) -> Result<bool> {
        let degrees: Vec<i64> = {
            let lo = self.source.min_degree().into_iter().chain(self.target.min_degree()).min();
            let hi = self.source.max_degree().into_iter().chain(self.target.max_degree()).max();
            match (lo, hi) {
                (Some(a), Some(b)) => (a..=b).collect(),
                _ => return Ok(true),
            }
        };
        for n in degrees {
            let (hs, ht, induced) = self.induced_on_homology(n)?;
            if !ModulePresentation::map_is_isomorphism(&hs.module, &ht.module, &induced)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Quasi-isomorphism on the degrees `lo..=hi` only; degrees outside the
    /// window are ignored.
    pub fn is_quasi_iso_within(&self, lo: i64, hi: i64) -> Result<bool> {
        for n in lo..=hi {
            let (hs, ht, induced) = self.induced_on_homology(n)?;
            if !ModulePresentation::map_is_isomorphism(&hs.module, &ht.module, &induced)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_levelwise_iso(&self) -> Result<bool> {
        let degrees: Vec<i64> = self
            .source
            .support()
            .into_iter()
            .chain(self.target.support())
            .collect();
        for n in degrees {
            if !ModulePresentation::map_is_isomorphism(
                &self.source.level(n),
                &self.target.level(n),
                &self.map_at(n),
            )? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_degreewise_surjective(&self) -> Result<bool> {
        for n in self.target.support() {
            if !ModulePresentation::cokernel(&self.target.level(n), &self.map_at(n))
                .is_zero_module()?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cone of `phi: F -> G`: degree `n` part `F^{n+1} (+) G^n`, differential
    /// `[[-d_F, 0], [-phi, d_G]]`.
    pub fn mapping_cone(&self) -> Result<ConeData> {
        let f = &self.source;
        let g = &self.target;
        let ring = f.ring.clone();
        let lo = f.min_degree().map(|a| a - 1).into_iter().chain(g.min_degree()).min();
        let hi = f.max_degree().map(|a| a - 1).into_iter().chain(g.max_degree()).max();
        let mut levels = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            let cone = Complex::empty(ring);
            return Ok(ConeData {
                include_target: ChainMap::zero(g, &cone),
                project_source: ChainMap::zero(&cone, &f.shift(1)),
                cone,
            });
        };
        for n in lo..=hi {
            let top = f.level(n + 1);
            let bot = g.level(n);
            levels.insert(n, ModulePresentation::direct_sum(&[&top, &bot]));
            let a = f.gens_at(n + 1);
            let b = g.gens_at(n);
            let rows = f.gens_at(n + 2) + g.gens_at(n + 1);
            let mut d = Matrix::zero(ring.clone(), rows, a + b);
            d.set_block(0, 0, &f.differential(n + 1).neg());
            d.set_block(f.gens_at(n + 2), 0, &self.map_at(n + 1).neg());
            d.set_block(f.gens_at(n + 2), a, &g.differential(n));
            diffs.insert(n, d);
        }
        let cone = Complex::from_parts(ring.clone(), levels, diffs)?;
        let mut incl = BTreeMap::new();
        for n in g.support() {
            let a = f.gens_at(n + 1);
            let b = g.gens_at(n);
            let mut m = Matrix::zero(ring.clone(), a + b, b);
            m.set_block(a, 0, &Matrix::identity(ring.clone(), b));
            incl.insert(n, m);
        }
        let include_target = ChainMap::new(g.clone(), cone.clone(), incl)?;
        let shifted = f.shift(1);
        let mut proj = BTreeMap::new();
        for n in cone.support() {
            let a = f.gens_at(n + 1);
            let b = g.gens_at(n);
            let mut m = Matrix::zero(ring.clone(), a, a + b);
            m.set_block(0, 0, &Matrix::identity(ring.clone(), a));
            proj.insert(n, m);
        }
        let project_source = ChainMap::new(cone.clone(), shifted, proj)?;
        Ok(ConeData { cone, include_target, project_source })
    }

    /// Exactness of the homology sequence of the cone triangle
    /// `H^n F -> H^n G -> H^n cone -> H^{n+1} F -> H^{n+1} G` at the three
    /// middle spots, for every degree.
    pub fn triangle_is_exact(&self) -> Result<bool> {
        let cone_data = self.mapping_cone()?;
        let shifted_map = self.shift(1);
        let all: Vec<i64> = {
            let lo = [
                self.source.min_degree(),
                self.target.min_degree(),
                cone_data.cone.min_degree(),
            ]
            .into_iter()
            .flatten()
            .min();
            let hi = [
                self.source.max_degree(),
                self.target.max_degree(),
                cone_data.cone.max_degree(),
            ]
            .into_iter()
            .flatten()
            .max();
            match (lo, hi) {
                (Some(a), Some(b)) => (a - 1..=b + 1).collect(),
                _ => return Ok(true),
            }
        };
        for n in all {
            let (ha, hb, u) = self.induced_on_homology(n)?;
            let (_, hc, v) = cone_data.include_target.induced_on_homology(n)?;
            let (_, ha1, w) = cone_data.project_source.induced_on_homology(n)?;
            let (_, hb1, u1) = shifted_map.induced_on_homology(n)?;
            if !exact_at(&ha.module, &hb.module, &hc.module, &u, &v)? {
                return Ok(false);
            }
            if !exact_at(&hb.module, &hc.module, &ha1.module, &v, &w)? {
                return Ok(false);
            }
            if !exact_at(&hc.module, &ha1.module, &hb1.module, &w, &u1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mapping cylinder of `phi: F -> G`: degree `n` part
    /// `F^{n+1} (+) F^n (+) G^n`.
    pub fn cylinder(&self) -> Result<CylinderData> {
        let f = &self.source;
        let g = &self.target;
        let ring = f.ring.clone();
        let lo = [f.min_degree().map(|a| a - 1), f.min_degree(), g.min_degree()]
            .into_iter()
            .flatten()
            .min();
        let hi = [f.max_degree().map(|a| a - 1), f.max_degree(), g.max_degree()]
            .into_iter()
            .flatten()
            .max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::NotCompatible("cylinder of empty complexes".into()));
        };
        let blocks = |n: i64| (f.gens_at(n + 1), f.gens_at(n), g.gens_at(n));
        let mut levels = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in lo..=hi {
            let (a, b, c) = blocks(n);
            levels.insert(
                n,
                ModulePresentation::direct_sum(&[&f.level(n + 1), &f.level(n), &g.level(n)]),
            );
            let (a2, b2, c2) = blocks(n + 1);
            let mut d = Matrix::zero(ring.clone(), a2 + b2 + c2, a + b + c);
            d.set_block(0, 0, &f.differential(n + 1).neg());
            d.set_block(a2, 0, &Matrix::identity(ring.clone(), a));
            d.set_block(a2, a, &f.differential(n));
            d.set_block(a2 + b2, 0, &self.map_at(n + 1).neg());
            d.set_block(a2 + b2, a + b, &g.differential(n));
            diffs.insert(n, d);
        }
        let cylinder = Complex::from_parts(ring.clone(), levels, diffs)?;

        let mut iota = BTreeMap::new();
        let mut alpha = BTreeMap::new();
        let mut beta = BTreeMap::new();
        let mut h = BTreeMap::new();
        let mut t = BTreeMap::new();
        for n in lo..=hi {
            let (a, b, c) = blocks(n);
            let mut i_m = Matrix::zero(ring.clone(), a + b + c, f.gens_at(n));
            i_m.set_block(a, 0, &Matrix::identity(ring.clone(), b));
            iota.insert(n, i_m);
            let mut a_m = Matrix::zero(ring.clone(), a + b + c, c);
            a_m.set_block(a + b, 0, &Matrix::identity(ring.clone(), c));
            alpha.insert(n, a_m);
            let mut b_m = Matrix::zero(ring.clone(), c, a + b + c);
            b_m.set_block(0, a, &self.map_at(n));
            b_m.set_block(0, a + b, &Matrix::identity(ring.clone(), c));
            beta.insert(n, b_m);
            // h : Cyl^n -> Cyl^{n-1} places the middle block into the first
            let (a0, b0, c0) = blocks(n - 1);
            let mut h_m = Matrix::zero(ring.clone(), a0 + b0 + c0, a + b + c);
            h_m.set_block(0, a, &Matrix::identity(ring.clone(), b));
            h.insert(n, h_m);
            // t : F^n -> Cyl^{n-1} is the first-block inclusion
            let mut t_m = Matrix::zero(ring.clone(), a0 + b0 + c0, f.gens_at(n));
            t_m.set_block(0, 0, &Matrix::identity(ring.clone(), f.gens_at(n)));
            t.insert(n, t_m);
        }
        let iota = ChainMap::new(f.clone(), cylinder.clone(), iota)?;
        let alpha = ChainMap::new(g.clone(), cylinder.clone(), alpha)?;
        let beta = ChainMap::new(cylinder.clone(), g.clone(), beta)?;
        let homotopy_alpha_beta = Homotopy::new(cylinder.clone(), cylinder.clone(), h)?;
        let homotopy_iota = Homotopy::new(f.clone(), cylinder.clone(), t)?;
        Ok(CylinderData { cylinder, iota, alpha, beta, homotopy_alpha_beta, homotopy_iota })
    }

    /// Slice a chain map between graded levelwise free complexes.
    pub fn graded_slice(&self, d: i64) -> Result<ChainMap> {
        let src = self.source.graded_slice(d)?;
        let tgt = self.target.graded_slice(d)?;
        let mut maps = BTreeMap::new();
        for (&n, m) in &self.maps {
            maps.insert(n, graded::graded_slice(m, d)?);
        }
        ChainMap::new(src, tgt, maps)
    }
}

impl Homotopy {
    /// `maps[n] : source^n -> target^{n-1}`; only shapes are validated here.
    pub fn new(
        source: Complex,
        target: Complex,
        maps: BTreeMap<i64, Matrix>,
    ) -> Result<Homotopy> {
        let mut mm = BTreeMap::new();
        for (n, m) in maps {
            if m.rows != target.gens_at(n - 1) || m.cols != source.gens_at(n) {
                return Err(Error::ShapeMismatch(format!(
                    "homotopy level {n} is {}x{}, expected {}x{}",
                    m.rows,
                    m.cols,
                    target.gens_at(n - 1),
                    source.gens_at(n)
                )));
            }
            if !m.is_zero() {
                mm.insert(n, m);
            }
        }
        Ok(Homotopy { source, target, maps: mm })
    }

    pub fn zero(source: &Complex, target: &Complex) -> Homotopy {
        Homotopy { source: source.clone(), target: target.clone(), maps: BTreeMap::new() }
    }

    pub fn map_at(&self, n: i64) -> Matrix {
        self.maps.get(&n).cloned().unwrap_or_else(|| {
            Matrix::zero(
                self.source.ring.clone(),
                self.target.gens_at(n - 1),
                self.source.gens_at(n),
            )
        })
    }

    /// Does this homotopy witness `f - g = d h + h d`?
    pub fn witnesses(&self, f: &ChainMap, g: &ChainMap) -> Result<bool> {
        if f.source != self.source
            || f.target != self.target
            || g.source != self.source
            || g.target != self.target
        {
            return Err(Error::NotCompatible("homotopy endpoints do not match".into()));
        }
        for n in self.source.support() {
            let lhs = f.map_at(n).sub(&g.map_at(n));
            let dh = self.target.differential(n - 1).mul(&self.map_at(n));
            let hd = self.map_at(n + 1).mul(&self.source.differential(n));
            let rhs = dh.add(&hd);
            if !ModulePresentation::maps_equal(&self.target.level(n), &lhs, &rhs)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn neg(&self) -> Homotopy {
        Homotopy {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(|(&n, m)| (n, m.neg())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::presentation::NormalForm;
    use crate::exactalg::ring::CoeffRing;
    use num_bigint::BigInt;

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

    fn two_term(d: i64) -> Complex {
        let mut levels = BTreeMap::new();
        levels.insert(-1, ModulePresentation::free(z(), 1));
        levels.insert(0, ModulePresentation::free(z(), 1));
        let mut diffs = BTreeMap::new();
        diffs.insert(-1, Matrix::from_i64(&z(), &[&[d]]));
        Complex::from_parts(z(), levels, diffs).unwrap()
    }

    #[test]
    fn resolution_projection_is_quasi_iso() {
        let f = two_term(2);
        let g = Complex::concentrated(ModulePresentation::cyclic(z(), 2), 0);
        let mut maps = BTreeMap::new();
        maps.insert(0, Matrix::from_i64(&z(), &[&[1]]));
        let q = ChainMap::new(f, g, maps).unwrap();
        assert!(q.is_quasi_iso().unwrap());
        assert!(!q.is_levelwise_iso().unwrap());
    }

    #[test]
    fn rejects_non_chain_map() {
        let f = two_term(2);
        let g = two_term(3);
        let mut maps = BTreeMap::new();
        maps.insert(-1, Matrix::from_i64(&z(), &[&[1]]));
        maps.insert(0, Matrix::from_i64(&z(), &[&[1]]));
        assert!(matches!(
            ChainMap::new(f, g, maps),
            Err(Error::NotAChainMap(_))
        ));
    }

    #[test]
    fn cone_of_multiplication() {
        let c = Complex::concentrated(ModulePresentation::free(z(), 1), 0);
        let mut maps = BTreeMap::new();
        maps.insert(0, Matrix::from_i64(&z(), &[&[2]]));
        let f = ChainMap::new(c.clone(), c.clone(), maps).unwrap();
        let cone = f.mapping_cone().unwrap();
        assert!(cone.cone.homology_normal_form(-1).unwrap().is_zero());
        assert_eq!(
            cone.cone.homology_normal_form(0).unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(2)] }
        );
        assert!(f.triangle_is_exact().unwrap());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = two_term(4);
        let id = ChainMap::identity(&c);
        let cone = id.mapping_cone().unwrap();
        assert!(cone.cone.homology_all().unwrap().is_empty());
        assert!(id.triangle_is_exact().unwrap());
    }

    #[test]
    fn cylinder_structure() {
        // F = (Z --2--> Z), G = (Z --6--> Z), phi = (1, 3)
        let f = two_term(2);
        let g = two_term(6);
        let mut maps = BTreeMap::new();
        maps.insert(-1, Matrix::from_i64(&z(), &[&[1]]));
        maps.insert(0, Matrix::from_i64(&z(), &[&[3]]));
        let phi = ChainMap::new(f.clone(), g.clone(), maps).unwrap();
        let cyl = phi.cylinder().unwrap();
        // beta . alpha = id on the nose
        let ba = cyl.beta.compose(&cyl.alpha).unwrap();
        assert_eq!(ba, ChainMap::identity(&g));
        // beta . iota = phi
        let bi = cyl.beta.compose(&cyl.iota).unwrap();
        assert_eq!(bi, phi);
        // homotopies verify
        let id_cyl = ChainMap::identity(&cyl.cylinder);
        let ab = cyl.alpha.compose(&cyl.beta).unwrap();
        assert!(cyl.homotopy_alpha_beta.witnesses(&id_cyl, &ab).unwrap());
        let aphi = cyl.alpha.compose(&phi).unwrap();
        assert!(cyl.homotopy_iota.witnesses(&cyl.iota, &aphi).unwrap());
        // alpha is a quasi-isomorphism and the cylinder has the homology of G
        assert!(cyl.alpha.is_quasi_iso().unwrap());
        assert_eq!(
            cyl.cylinder.homology_normal_form(0).unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(6)] }
        );
    }

    #[test]
    fn triangle_of_injection_on_homology() {
        // phi induces Z/2 --3--> Z/6; cone homology is Z/3 and the sequence is exact
        let f = two_term(2);
        let g = two_term(6);
        let mut maps = BTreeMap::new();
        maps.insert(-1, Matrix::from_i64(&z(), &[&[1]]));
        maps.insert(0, Matrix::from_i64(&z(), &[&[3]]));
        let phi = ChainMap::new(f, g, maps).unwrap();
        let cone = phi.mapping_cone().unwrap();
        assert_eq!(
            cone.cone.homology_normal_form(0).unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(3)] }
        );
        assert!(phi.triangle_is_exact().unwrap());
    }

    #[test]
    fn graded_chain_maps_slice() {
        // Koszul complex for (x, y) and the twist of multiplication by x.
        let r = CoeffRing::graded_poly(CoeffRing::Rationals, 2).unwrap();
        let x = r.parse_scalar("x0").unwrap();
        let y = r.parse_scalar("x1").unwrap();
        let build = |twist: i64| {
            let mut levels = BTreeMap::new();
            levels.insert(-2, ModulePresentation::free_graded(r.clone(), vec![2 + twist]));
            levels.insert(-1, ModulePresentation::free_graded(r.clone(), vec![1 + twist, 1 + twist]));
            levels.insert(0, ModulePresentation::free_graded(r.clone(), vec![twist]));
            let mut diffs = BTreeMap::new();
            diffs.insert(
                -2,
                Matrix::from_rows(r.clone(), vec![vec![r.neg(&y)], vec![x.clone()]]).unwrap(),
            );
            diffs.insert(-1, Matrix::from_rows(r.clone(), vec![vec![x.clone(), y.clone()]]).unwrap());
            Complex::from_parts(r.clone(), levels, diffs).unwrap()
        };
        let c = build(0);
        let c_twist = build(-1);
        let mut maps = BTreeMap::new();
        for n in -2..=0 {
            let k = c.gens_at(n);
            maps.insert(n, Matrix::identity(r.clone(), k).scale(&x));
        }
        let mul_x = ChainMap::new(c, c_twist, maps).unwrap();
        let sliced = mul_x.graded_slice(3).unwrap();
        assert_eq!(sliced.source.gens_at(0), 4);
        // slicing a valid chain map yields a valid chain map over the base field
        assert!(sliced.source.homology_normal_form(-2).unwrap().is_zero());
    }
}
