//! Hom complexes, tensor complexes, homotopy solving and lifting through
//! quasi-isomorphisms.
//!
//! For a levelwise free `P` and arbitrary `M`, the complex `Hom(P, M)` has
//! `Hom^n = (+)_p Hom(P^p, M^{p+n})` with differential
//! `D(psi) = d_M . psi - (-1)^n psi . d_P`. Its 0-cycles are the chain maps
//! `P -> M`, and `D(h) = dh + hd` for `h` in degree `-1`, so homotopy
//! questions become linear algebra over the coefficient ring.

use std::collections::BTreeMap;

use super::chainmap::{ChainMap, Homotopy};
use super::complex::Complex;
use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::ModulePresentation;
use crate::exactalg::ring::Scalar;
use crate::exactalg::snf;
use crate::{Error, Result};

/// `Hom(source, target)` with the block bookkeeping needed to move between
/// degree-`n` collections of level maps and flat coordinate vectors.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: Complex,
    pub source: Complex,
    pub target: Complex,
    /// For each total degree: `(p, target_gens(p+n), source_gens(p))`, in
    /// ascending `p`. Vector layout inside a block is `j * t + i` for the
    /// entry `(i, j)` of a map `source^p -> target^{p+n}`.
    blocks: BTreeMap<i64, Vec<(i64, usize, usize)>>,
}

/// Tensor product complex with its block bookkeeping: degree `n` is
/// `(+)_p left^p (x) right^{n-p}`, vector layout `i * r + j` inside a block.
#[derive(Clone, Debug)]
pub struct TensorComplex {
    pub complex: Complex,
    pub left: Complex,
    pub right: Complex,
    /// For each total degree: `(p, left_gens(p), right_gens(n-p))`.
    pub blocks: BTreeMap<i64, Vec<(i64, usize, usize)>>,
}

/// A lift through a quasi-isomorphism together with the homotopy correcting
/// the triangle: `q . lift - f = d h + h d`.
#[derive(Clone, Debug)]
pub struct LiftData {
    pub lift: ChainMap,
    pub homotopy: Homotopy,
}

fn offsets(blocks: &[(i64, usize, usize)]) -> Vec<usize> {
    let mut out = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for &(_, t, s) in blocks {
        out.push(acc);
        acc += t * s;
    }
    out
}

fn level_size(blocks: &[(i64, usize, usize)]) -> usize {
    blocks.iter().map(|&(_, t, s)| t * s).sum()
}

pub fn hom_complex(source: &Complex, target: &Complex) -> Result<HomComplex> {
    if source.ring != target.ring {
        return Err(Error::NotCompatible("hom complex across different rings".into()));
    }
    if !source.is_levelwise_free() {
        return Err(Error::NotFree("hom complex needs a levelwise free source".into()));
    }
    let ring = source.ring.clone();
    let graded = ring.is_graded();
    let mut blocks = BTreeMap::new();
    let mut levels = BTreeMap::new();
    if let (Some(slo), Some(shi), Some(tlo), Some(thi)) = (
        source.min_degree(),
        source.max_degree(),
        target.min_degree(),
        target.max_degree(),
    ) {
        for n in (tlo - shi)..=(thi - slo) {
            let mut blist = Vec::new();
            for p in source.support() {
                let s = source.gens_at(p);
                let t = target.gens_at(p + n);
                if s > 0 && t > 0 {
                    blist.push((p, t, s));
                }
            }
            if blist.is_empty() {
                continue;
            }
            let level = if graded {
                let mut degs = Vec::new();
                for &(p, t, s) in &blist {
                    let tdeg = target.level(p + n).gen_degrees.expect("graded degrees");
                    let sdeg = source.level(p).gen_degrees.expect("graded degrees");
                    for j in 0..s {
                        for i in 0..t {
                            degs.push(tdeg[i] - sdeg[j]);
                        }
                    }
                }
                ModulePresentation::free_graded(ring.clone(), degs)
            } else {
                let mut parts: Vec<ModulePresentation> = Vec::new();
                for &(p, _, s) in &blist {
                    let tl = target.level(p + n);
                    for _ in 0..s {
                        parts.push(tl.clone());
                    }
                }
                ModulePresentation::direct_sum(&parts.iter().collect::<Vec<_>>())
            };
            levels.insert(n, level);
            blocks.insert(n, blist);
        }
    }
    let mut diffs = BTreeMap::new();
    for (&n, blist) in &blocks {
        let Some(tlist) = blocks.get(&(n + 1)) else { continue };
        let sof = offsets(blist);
        let tof = offsets(tlist);
        let mut d = Matrix::zero(ring.clone(), level_size(tlist), level_size(blist));
        // -(-1)^n on the pre-composition term
        let flip = n.rem_euclid(2) == 0;
        for (bi, &(p, t, s)) in blist.iter().enumerate() {
            // post-compose with the target differential: block p -> block p
            if let Some(ti) = tlist.iter().position(|&(q, _, _)| q == p) {
                let dt = target.differential(p + n);
                if !dt.is_zero() {
                    let big = Matrix::identity(ring.clone(), s).kronecker(&dt);
                    d.set_block(tof[ti], sof[bi], &big);
                }
            }
            // pre-compose with the source differential: block p -> block p-1
            if let Some(ti) = tlist.iter().position(|&(q, _, _)| q == p - 1) {
                let ds = source.differential(p - 1);
                if !ds.is_zero() {
                    let mut big = ds.transpose().kronecker(&Matrix::identity(ring.clone(), t));
                    if flip {
                        big = big.neg();
                    }
                    d.set_block(tof[ti], sof[bi], &big);
                }
            }
        }
        if !d.is_zero() {
            diffs.insert(n, d);
        }
    }
    let complex = Complex::from_parts(ring, levels, diffs)?;
    Ok(HomComplex { complex, source: source.clone(), target: target.clone(), blocks })
}

impl HomComplex {
    pub fn block_list(&self, n: i64) -> &[(i64, usize, usize)] {
        self.blocks.get(&n).map(|b| b.as_slice()).unwrap_or(&[])
    }

    /// Flatten a degree-`n` collection of level maps into coordinates.
    pub fn flatten(&self, n: i64, get: impl Fn(i64) -> Matrix) -> Vec<Scalar> {
        let Some(blist) = self.blocks.get(&n) else { return Vec::new() };
        let mut v = Vec::with_capacity(level_size(blist));
        for &(p, t, s) in blist {
            let m = get(p);
            assert_eq!((m.rows, m.cols), (t, s), "flatten block shape at {p}");
            for j in 0..s {
                for i in 0..t {
                    v.push(m.at(i, j).clone());
                }
            }
        }
        v
    }

    /// Inverse of `flatten`: split coordinates into level maps
    /// `source^p -> target^{p+n}`.
    pub fn unflatten(&self, n: i64, v: &[Scalar]) -> BTreeMap<i64, Matrix> {
        let mut out = BTreeMap::new();
        let Some(blist) = self.blocks.get(&n) else { return out };
        assert_eq!(v.len(), level_size(blist), "unflatten length");
        let mut k = 0;
        for &(p, t, s) in blist {
            let mut m = Matrix::zero(self.source.ring.clone(), t, s);
            for j in 0..s {
                for i in 0..t {
                    m.set(i, j, v[k].clone());
                    k += 1;
                }
            }
            out.insert(p, m);
        }
        out
    }

    pub fn chain_map_vector(&self, f: &ChainMap) -> Result<Vec<Scalar>> {
        if f.source != self.source || f.target != self.target {
            return Err(Error::NotCompatible("chain map does not match hom complex".into()));
        }
        Ok(self.flatten(0, |p| f.map_at(p)))
    }

    pub fn vector_to_chain_map(&self, v: &[Scalar]) -> Result<ChainMap> {
        ChainMap::new(self.source.clone(), self.target.clone(), self.unflatten(0, v))
    }

    pub fn vector_to_homotopy(&self, v: &[Scalar]) -> Result<Homotopy> {
        // degree -1 block p holds maps source^p -> target^{p-1}
        Homotopy::new(self.source.clone(), self.target.clone(), self.unflatten(-1, v))
    }

    /// For `self = Hom(P, X)`, `other = Hom(P, Y)` and `q : X -> Y`, the chain
    /// map `q . (-) : Hom(P, X) -> Hom(P, Y)`.
    pub fn post_compose(&self, other: &HomComplex, q: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || q.source != self.target || q.target != other.target {
            return Err(Error::NotCompatible("post_compose endpoints".into()));
        }
        let ring = self.source.ring.clone();
        let mut maps = BTreeMap::new();
        for (&n, blist) in &self.blocks {
            let Some(tlist) = other.blocks.get(&n) else { continue };
            let sof = offsets(blist);
            let tof = offsets(tlist);
            let mut m = Matrix::zero(ring.clone(), level_size(tlist), level_size(blist));
            for (bi, &(p, _, s)) in blist.iter().enumerate() {
                if let Some(ti) = tlist.iter().position(|&(pp, _, _)| pp == p) {
                    let qm = q.map_at(p + n);
                    if !qm.is_zero() {
                        let big = Matrix::identity(ring.clone(), s).kronecker(&qm);
                        m.set_block(tof[ti], sof[bi], &big);
                    }
                }
            }
            maps.insert(n, m);
        }
        ChainMap::new(self.complex.clone(), other.complex.clone(), maps)
    }

    /// For `self = Hom(P, M)`, `other = Hom(P', M)` and `a : P' -> P`, the
    /// chain map `(-) . a : Hom(P, M) -> Hom(P', M)`.
    pub fn pre_compose(&self, other: &HomComplex, a: &ChainMap) -> Result<ChainMap> {
        if self.target != other.target || a.target != self.source || a.source != other.source {
            return Err(Error::NotCompatible("pre_compose endpoints".into()));
        }
        let ring = self.source.ring.clone();
        let mut maps = BTreeMap::new();
        for (&n, blist) in &self.blocks {
            let Some(tlist) = other.blocks.get(&n) else { continue };
            let sof = offsets(blist);
            let tof = offsets(tlist);
            let mut m = Matrix::zero(ring.clone(), level_size(tlist), level_size(blist));
            for (bi, &(p, t, _)) in blist.iter().enumerate() {
                if let Some(ti) = tlist.iter().position(|&(pp, _, _)| pp == p) {
                    let am = a.map_at(p);
                    if !am.is_zero() {
                        let big = am.transpose().kronecker(&Matrix::identity(ring.clone(), t));
                        m.set_block(tof[ti], sof[bi], &big);
                    }
                }
            }
            maps.insert(n, m);
        }
        ChainMap::new(self.complex.clone(), other.complex.clone(), maps)
    }
}

pub fn tensor_complex(left: &Complex, right: &Complex) -> Result<TensorComplex> {
    if left.ring != right.ring {
        return Err(Error::NotCompatible("tensor across different rings".into()));
    }
    if !left.is_levelwise_free() {
        return Err(Error::NotFree("tensor needs a levelwise free left factor".into()));
    }
    let ring = left.ring.clone();
    let graded = ring.is_graded();
    let mut blocks = BTreeMap::new();
    let mut levels = BTreeMap::new();
    if let (Some(llo), Some(lhi), Some(rlo), Some(rhi)) = (
        left.min_degree(),
        left.max_degree(),
        right.min_degree(),
        right.max_degree(),
    ) {
        for n in (llo + rlo)..=(lhi + rhi) {
            let mut blist = Vec::new();
            for p in left.support() {
                let l = left.gens_at(p);
                let r = right.gens_at(n - p);
                if l > 0 && r > 0 {
                    blist.push((p, l, r));
                }
            }
            if blist.is_empty() {
                continue;
            }
            let level = if graded {
                let mut degs = Vec::new();
                for &(p, l, _) in &blist {
                    let ldeg = left.level(p).gen_degrees.expect("graded degrees");
                    let rdeg = right.level(n - p).gen_degrees.expect("graded degrees");
                    for i in 0..l {
                        for rj in &rdeg {
                            degs.push(ldeg[i] + rj);
                        }
                    }
                }
                ModulePresentation::free_graded(ring.clone(), degs)
            } else {
                let mut parts: Vec<ModulePresentation> = Vec::new();
                for &(p, l, _) in &blist {
                    let rl = right.level(n - p);
                    for _ in 0..l {
                        parts.push(rl.clone());
                    }
                }
                ModulePresentation::direct_sum(&parts.iter().collect::<Vec<_>>())
            };
            levels.insert(n, level);
            blocks.insert(n, blist);
        }
    }
    let mut diffs = BTreeMap::new();
    for (&n, blist) in &blocks {
        let Some(tlist) = blocks.get(&(n + 1)) else { continue };
        let sof = offsets(blist);
        let tof = offsets(tlist);
        let mut d = Matrix::zero(ring.clone(), level_size(tlist), level_size(blist));
        for (bi, &(p, l, r)) in blist.iter().enumerate() {
            // id (x) d_right with the Koszul sign (-1)^p: block p -> block p
            if let Some(ti) = tlist.iter().position(|&(q, _, _)| q == p) {
                let dr = right.differential(n - p);
                if !dr.is_zero() {
                    let mut big = Matrix::identity(ring.clone(), l).kronecker(&dr);
                    if p.rem_euclid(2) == 1 {
                        big = big.neg();
                    }
                    d.set_block(tof[ti], sof[bi], &big);
                }
            }
            // d_left (x) id: block p -> block p+1
            if let Some(ti) = tlist.iter().position(|&(q, _, _)| q == p + 1) {
                let dl = left.differential(p);
                if !dl.is_zero() {
                    let big = dl.kronecker(&Matrix::identity(ring.clone(), r));
                    d.set_block(tof[ti], sof[bi], &big);
                }
            }
        }
        if !d.is_zero() {
            diffs.insert(n, d);
        }
    }
    let complex = Complex::from_parts(ring, levels, diffs)?;
    Ok(TensorComplex { complex, left: left.clone(), right: right.clone(), blocks })
}

/// A homotopy `h` with `f = d h + h d`, if one exists. Solved globally in the
/// hom complex, so a negative answer is a certificate.
pub fn null_homotopy(f: &ChainMap) -> Result<Option<Homotopy>> {
    let hc = hom_complex(&f.source, &f.target)?;
    let psi = hc.chain_map_vector(f)?;
    if psi.is_empty() {
        return Ok(Some(Homotopy::zero(&f.source, &f.target)));
    }
    let d = hc.complex.differential(-1);
    let rel = hc.complex.level(0).relation_columns();
    match snf::solve_mod(&d, &rel, &psi)? {
        None => Ok(None),
        Some(h) => Ok(Some(hc.vector_to_homotopy(&h)?)),
    }
}

pub fn homotopic(f: &ChainMap, g: &ChainMap) -> Result<Option<Homotopy>> {
    null_homotopy(&f.sub(g)?)
}

/// Null-homotopy of a map from a levelwise free complex into an acyclic one,
/// by descending induction; each step is one small linear solve.
fn null_homotopy_into_acyclic(u: &ChainMap) -> Result<Homotopy> {
    let p = &u.source;
    let c = &u.target;
    if !p.is_levelwise_free() {
        return Err(Error::NotFree("descending homotopy needs a free source".into()));
    }
    let mut maps: BTreeMap<i64, Matrix> = BTreeMap::new();
    let (Some(lo), Some(hi)) = (p.min_degree(), p.max_degree()) else {
        return Homotopy::new(p.clone(), c.clone(), maps);
    };
    for n in (lo..=hi).rev() {
        let hnext = maps
            .get(&(n + 1))
            .cloned()
            .unwrap_or_else(|| Matrix::zero(p.ring.clone(), c.gens_at(n), p.gens_at(n + 1)));
        let w = u.map_at(n).sub(&hnext.mul(&p.differential(n)));
        let d_in = c.differential(n - 1);
        let rel = c.level(n).relation_columns();
        let sol = snf::solve_matrix_mod(&d_in, &rel, &w)?.ok_or_else(|| {
            Error::NoSolution(format!(
                "no null homotopy at degree {n}: target fails to be acyclic there"
            ))
        })?;
        maps.insert(n, sol);
    }
    Homotopy::new(p.clone(), c.clone(), maps)
}

/// Lift `f : P -> Y` through the quasi-isomorphism `q : X -> Y` for levelwise
/// free bounded `P`: produces `g : P -> X` with `q . g` homotopic to `f`,
/// along with the witnessing homotopy. Works by null-homotoping the composite
/// of `f` with the inclusion into the (acyclic) cone of `q`.
pub fn lift_through_quasi_iso(f: &ChainMap, q: &ChainMap) -> Result<LiftData> {
    if f.target != q.target {
        return Err(Error::NotCompatible("lift: targets differ".into()));
    }
    let p = &f.source;
    let x = &q.source;
    let y = &q.target;
    let cone = q.mapping_cone()?;
    let u = cone.include_target.compose(f)?;
    let big_h = null_homotopy_into_acyclic(&u)?;
    // C^{n-1} = X^n (+) Y^{n-1}; the two blocks of H are (a chain map, a homotopy)
    let mut g_maps = BTreeMap::new();
    let mut h_maps = BTreeMap::new();
    for n in p.support() {
        let hm = big_h.map_at(n);
        let a = x.gens_at(n);
        let b = y.gens_at(n - 1);
        let all: Vec<usize> = (0..hm.cols).collect();
        let top = hm.submatrix(&(0..a).collect::<Vec<_>>(), &all);
        let bottom = hm.submatrix(&(a..a + b).collect::<Vec<_>>(), &all);
        g_maps.insert(n, top.neg());
        h_maps.insert(n, bottom.neg());
    }
    let lift = ChainMap::new(p.clone(), x.clone(), g_maps)?;
    let homotopy = Homotopy::new(p.clone(), y.clone(), h_maps)?;
    let composite = q.compose(&lift)?;
    if !homotopy.witnesses(&composite, f)? {
        return Err(Error::NotCompatible("lift verification failed".into()));
    }
    Ok(LiftData { lift, homotopy })
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

    fn torsion(n: i64) -> NormalForm {
        NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(n)] }
    }

    #[test]
    fn hom_complex_computes_ext() {
        // Hom(resolution of Z/2, Z): H^0 = Hom(Z/2, Z) = 0, H^1 = Z/2
        let p = two_term(2);
        let target = Complex::concentrated(ModulePresentation::free(z(), 1), 0);
        let h = hom_complex(&p, &target).unwrap();
        assert!(h.complex.homology_normal_form(0).unwrap().is_zero());
        assert_eq!(h.complex.homology_normal_form(1).unwrap(), torsion(2));
    }

    #[test]
    fn tensor_computes_tor() {
        let a = two_term(2);
        let t = tensor_complex(&a, &a).unwrap();
        assert_eq!(t.complex.homology_normal_form(0).unwrap(), torsion(2));
        assert_eq!(t.complex.homology_normal_form(-1).unwrap(), torsion(2));
        assert!(t.complex.homology_normal_form(-2).unwrap().is_zero());
        // coprime multiplications tensor to an acyclic complex
        let b = two_term(3);
        let t2 = tensor_complex(&a, &b).unwrap();
        assert!(t2.complex.homology_all().unwrap().is_empty());
    }

    #[test]
    fn tensor_with_presented_module() {
        let a = two_term(2);
        let m = Complex::concentrated(ModulePresentation::cyclic(z(), 4), 0);
        let t = tensor_complex(&a, &m).unwrap();
        assert_eq!(t.complex.homology_normal_form(0).unwrap(), torsion(2));
        assert_eq!(t.complex.homology_normal_form(-1).unwrap(), torsion(2));
    }

    #[test]
    fn homotopy_solving() {
        // the identity of a contractible complex is null homotopic
        let c = two_term(1);
        let id = ChainMap::identity(&c);
        let h = null_homotopy(&id).unwrap().unwrap();
        assert!(h.witnesses(&id, &ChainMap::zero(&c, &c)).unwrap());
        // not so for multiplication by 2 (nontrivial homology)
        let c2 = two_term(2);
        assert!(null_homotopy(&ChainMap::identity(&c2)).unwrap().is_none());
        // d sigma + sigma d is always null homotopic
        let mut maps = BTreeMap::new();
        maps.insert(-1, Matrix::from_i64(&z(), &[&[10]]));
        maps.insert(0, Matrix::from_i64(&z(), &[&[10]]));
        let tau = ChainMap::new(c2.clone(), c2.clone(), maps).unwrap();
        let zero = ChainMap::zero(&c2, &c2);
        let w = homotopic(&tau, &zero).unwrap().unwrap();
        assert!(w.witnesses(&tau, &zero).unwrap());
    }

    #[test]
    fn flatten_round_trip() {
        let p = two_term(2);
        let hc = hom_complex(&p, &p).unwrap();
        let id = ChainMap::identity(&p);
        let v = hc.chain_map_vector(&id).unwrap();
        let back = hc.vector_to_chain_map(&v).unwrap();
        assert_eq!(back, id);
    }

    #[test]
    fn lifting_through_quasi_iso() {
        // P = X = the free resolution of Z/2, Y = Z/2 itself
        let p = two_term(2);
        let y = Complex::concentrated(ModulePresentation::cyclic(z(), 2), 0);
        let mut maps = BTreeMap::new();
        maps.insert(0, Matrix::from_i64(&z(), &[&[1]]));
        let f = ChainMap::new(p.clone(), y.clone(), maps.clone()).unwrap();
        let q = ChainMap::new(p.clone(), y.clone(), maps).unwrap();
        let lifted = lift_through_quasi_iso(&f, &q).unwrap();
        assert!(lifted.lift.is_quasi_iso().unwrap());
        // lifting through a non-quasi-iso fails loudly
        let x_bad = Complex::concentrated(ModulePresentation::free(z(), 1), 0);
        let mut qm = BTreeMap::new();
        qm.insert(0, Matrix::from_i64(&z(), &[&[1]]));
        let q_bad = ChainMap::new(x_bad, y, qm).unwrap();
        assert!(lift_through_quasi_iso(&f, &q_bad).is_err());
    }

    #[test]
    fn post_compose_is_functorial() {
        let p = two_term(2);
        let x = two_term(2);
        let y = Complex::concentrated(ModulePresentation::cyclic(z(), 2), 0);
        let mut maps = BTreeMap::new();
        maps.insert(0, Matrix::from_i64(&z(), &[&[1]]));
        let q = ChainMap::new(x.clone(), y.clone(), maps).unwrap();
        let hx = hom_complex(&p, &x).unwrap();
        let hy = hom_complex(&p, &y).unwrap();
        let qs = hx.post_compose(&hy, &q).unwrap();
        // the image of the identity under q_* is the flattening of q itself
        let idv = hx.chain_map_vector(&ChainMap::identity(&p)).unwrap();
        let qv = qs.map_at(0).apply(&idv);
        let qq = hy.unflatten(0, &qv);
        let rebuilt = ChainMap::new(p.clone(), y.clone(), qq).unwrap();
        assert_eq!(rebuilt, q);
    }
}
