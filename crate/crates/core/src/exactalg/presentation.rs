//! Finitely presented modules and maps between them.
//!
//! A module is `A^gens / rowspan(relations)`. Maps are matrices acting on
//! generators; well-definedness (relations land in relations) is a checkable
//! property, and equality of maps means equality modulo the target relations.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::fmt;

use super::matrix::Matrix;
use super::ring::{CoeffRing, Scalar};
use super::snf::{self, smith_normal_form};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub ring: CoeffRing,
    pub gens: usize,
    /// Each row is one relation among the generators (`relations.cols == gens`).
    pub relations: Matrix,
    /// Generator degrees over a graded ring, `None` otherwise.
    pub gen_degrees: Option<Vec<i64>>,
}

/// Canonical invariants of a finitely presented module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    /// Over `Z`: free rank and invariant factors `> 1` in divisibility order.
    Integers { free_rank: usize, torsion: Vec<BigInt> },
    /// Over a field: dimension.
    Field { dim: usize },
}

impl ModulePresentation {
    pub fn free(ring: CoeffRing, gens: usize) -> Self {
        let relations = Matrix::zero(ring.clone(), 0, gens);
        ModulePresentation { ring, gens, relations, gen_degrees: None }
    }

    /// Free graded module with the given generator degrees.
    pub fn free_graded(ring: CoeffRing, degrees: Vec<i64>) -> Self {
        let gens = degrees.len();
        let relations = Matrix::zero(ring.clone(), 0, gens);
        ModulePresentation { ring, gens, relations, gen_degrees: Some(degrees) }
    }

    /// `A / (d)` on one generator.
    pub fn cyclic(ring: CoeffRing, d: i64) -> Self {
        let mut relations = Matrix::zero(ring.clone(), 1, 1);
        relations.set(0, 0, ring.from_i64(d));
        ModulePresentation { ring, gens: 1, relations, gen_degrees: None }
    }

    pub fn from_relations(ring: CoeffRing, relations: Matrix) -> Self {
        let gens = relations.cols;
        ModulePresentation { ring, gens, relations, gen_degrees: None }
    }

    pub fn zero(ring: CoeffRing) -> Self {
        ModulePresentation::free(ring, 0)
    }

    pub fn is_free_no_relations(&self) -> bool {
        self.relations.rows == 0 || self.relations.is_zero()
    }

    pub fn direct_sum(parts: &[&ModulePresentation]) -> Self {
        assert!(!parts.is_empty());
        let ring = parts[0].ring.clone();
        assert!(parts.iter().all(|p| p.ring == ring));
        let gens = parts.iter().map(|p| p.gens).sum();
        let relations = Matrix::block_diag(&parts.iter().map(|p| &p.relations).collect::<Vec<_>>());
        let gen_degrees = if parts.iter().all(|p| p.gen_degrees.is_some()) {
            Some(parts.iter().flat_map(|p| p.gen_degrees.clone().unwrap()).collect())
        } else {
            None
        };
        ModulePresentation { ring, gens, relations, gen_degrees }
    }

    /// The relations transposed into columns, `gens x nrel`.
    pub fn relation_columns(&self) -> Matrix {
        self.relations.transpose()
    }

    /// Canonical invariants. Graded rings only when the module is free with no
    /// relations (degree multiset is the invariant; reported through `is_isomorphic`).
    pub fn normalize(&self) -> Result<NormalForm> {
        match &self.ring {
            CoeffRing::Integers => {
                let s = smith_normal_form(&self.relations)?;
                let torsion: Vec<BigInt> = s
                    .invariant_factors
                    .iter()
                    .filter_map(|f| match f {
                        Scalar::Int(x) if x.to_i64() != Some(1) => Some(x.clone()),
                        _ => None,
                    })
                    .collect();
                Ok(NormalForm::Integers { free_rank: self.gens - s.rank, torsion })
            }
            r if r.is_field() => {
                let s = smith_normal_form(&self.relations)?;
                Ok(NormalForm::Field { dim: self.gens - s.rank })
            }
            r => Err(Error::UnsupportedRing(format!(
                "normal form over {r}; use graded slices"
            ))),
        }
    }

    pub fn is_zero_module(&self) -> Result<bool> {
        if self.gens == 0 {
            return Ok(true);
        }
        if self.ring.is_graded() {
            if self.is_free_no_relations() {
                return Ok(self.gens == 0);
            }
            return Err(Error::UnsupportedRing("graded non-free module".into()));
        }
        Ok(match self.normalize()? {
            NormalForm::Integers { free_rank, torsion } => free_rank == 0 && torsion.is_empty(),
            NormalForm::Field { dim } => dim == 0,
        })
    }

    pub fn is_isomorphic(&self, other: &ModulePresentation) -> Result<bool> {
        if self.ring != other.ring {
            return Ok(false);
        }
        if self.ring.is_graded() {
            if self.is_free_no_relations() && other.is_free_no_relations() {
                let mut a = self.gen_degrees.clone().unwrap_or_else(|| vec![0; self.gens]);
                let mut b = other.gen_degrees.clone().unwrap_or_else(|| vec![0; other.gens]);
                a.sort_unstable();
                b.sort_unstable();
                return Ok(a == b);
            }
            return Err(Error::UnsupportedRing("graded non-free comparison".into()));
        }
        Ok(self.normalize()? == other.normalize()?)
    }

    /// Is `f` (a `dst.gens x src.gens` matrix) a well defined map `src -> dst`?
    pub fn well_defined_map(src: &ModulePresentation, dst: &ModulePresentation, f: &Matrix) -> Result<bool> {
        if f.rows != dst.gens || f.cols != src.gens {
            return Err(Error::ShapeMismatch(format!(
                "map is {}x{}, expected {}x{}",
                f.rows, f.cols, dst.gens, src.gens
            )));
        }
        if src.is_free_no_relations() {
            return Ok(true);
        }
        let image_of_relations = f.mul(&src.relation_columns());
        let dst_rel = dst.relation_columns();
        Ok(snf::solve_matrix(&dst_rel, &image_of_relations)?.is_some())
    }

    /// Do `f` and `g` agree as maps into `dst` (equal modulo the target relations)?
    pub fn maps_equal(dst: &ModulePresentation, f: &Matrix, g: &Matrix) -> Result<bool> {
        let diff = f.sub(g);
        if diff.is_zero() {
            return Ok(true);
        }
        if dst.is_free_no_relations() {
            return Ok(false);
        }
        let dst_rel = dst.relation_columns();
        Ok(snf::solve_matrix(&dst_rel, &diff)?.is_some())
    }

    /// Is `f: src -> dst` the zero map?
    pub fn map_is_zero(dst: &ModulePresentation, f: &Matrix) -> Result<bool> {
        let zero = Matrix::zero(f.ring.clone(), f.rows, f.cols);
        ModulePresentation::maps_equal(dst, f, &zero)
    }

    /// Is `f: src -> dst` an isomorphism of presented modules?
    pub fn map_is_isomorphism(
        src: &ModulePresentation,
        dst: &ModulePresentation,
        f: &Matrix,
    ) -> Result<bool> {
        if !ModulePresentation::well_defined_map(src, dst, f)? {
            return Ok(false);
        }
        if !ModulePresentation::cokernel(dst, f).is_zero_module()? {
            return Ok(false);
        }
        let (_, ker) = ModulePresentation::kernel(src, dst, f)?;
        ker.is_zero_module()
    }

    /// Cokernel of `f: src -> dst` as a presentation on the generators of `dst`.
    pub fn cokernel(dst: &ModulePresentation, f: &Matrix) -> ModulePresentation {
        let rels = Matrix::vstack(&[&dst.relations, &f.transpose()]);
        ModulePresentation {
            ring: dst.ring.clone(),
            gens: dst.gens,
            relations: rels,
            gen_degrees: dst.gen_degrees.clone(),
        }
    }

    /// Entry-wise base change of the presentation. Correct on module level
    /// because presentations are right exact.
    pub fn base_change(&self, target: &CoeffRing) -> Result<ModulePresentation> {
        Ok(ModulePresentation {
            ring: target.clone(),
            gens: self.gens,
            relations: self.relations.base_change(target)?,
            gen_degrees: self.gen_degrees.clone(),
        })
    }

    /// Kernel of `f: src -> dst`: returns `(generators, presentation)` where the
    /// generator matrix columns live in `A^{src.gens}` and present the kernel.
    pub fn kernel(
        src: &ModulePresentation,
        dst: &ModulePresentation,
        f: &Matrix,
    ) -> Result<(Matrix, ModulePresentation)> {
        let dst_rel = dst.relation_columns();
        let lattice = snf::kernel_mod(f, &dst_rel)?;
        // Relations among the kernel generators: combinations landing in the
        // source relations.
        let src_rel = src.relation_columns();
        let rel_cols = snf::kernel_mod(&lattice, &src_rel)?;
        let pres = ModulePresentation {
            ring: src.ring.clone(),
            gens: lattice.cols,
            relations: rel_cols.transpose(),
            gen_degrees: None,
        };
        Ok((lattice, pres))
    }
}

/// Present the subquotient `span(z_gens) / span(b_gens)` of a free module,
/// where each column of `b_gens` must lie in the span of `z_gens` columns.
pub fn subquotient(ring: &CoeffRing, z_gens: &Matrix, b_gens: &Matrix) -> Result<ModulePresentation> {
    let coords = snf::solve_matrix(z_gens, b_gens)?.ok_or_else(|| {
        Error::NotCompatible("subquotient: boundaries not inside cycles".into())
    })?;
    let null = snf::kernel(z_gens)?;
    let relations = Matrix::vstack(&[&null.transpose(), &coords.transpose()]);
    Ok(ModulePresentation {
        ring: ring.clone(),
        gens: z_gens.cols,
        relations,
        gen_degrees: None,
    })
}

/// Is `src --f--> mid --g--> tgt` exact at `mid`? Checks that the composite
/// vanishes and that `ker(g) / im(f)` is the zero module.
pub fn exact_at(
    src: &ModulePresentation,
    mid: &ModulePresentation,
    tgt: &ModulePresentation,
    f: &Matrix,
    g: &Matrix,
) -> Result<bool> {
    if f.rows != mid.gens || f.cols != src.gens || g.rows != tgt.gens || g.cols != mid.gens {
        return Err(Error::ShapeMismatch("exact_at: map shapes".into()));
    }
    if !ModulePresentation::map_is_zero(tgt, &g.mul(f))? {

        return Ok(false);
    }
    let (ker_gens, _) = ModulePresentation::kernel(mid, tgt, g)?;
    let dead = Matrix::hstack(&[f, &mid.relation_columns()]);
    let q = subquotient(&mid.ring, &ker_gens, &dead)?;
    q.is_zero_module()
}

/// Homology at a position of a complex of free modules: `ker(d_out) / im(d_in)`.
/// Returns the presentation together with the cycle generator matrix (columns in
/// the ambient free module), which downstream code uses to compute induced maps.
pub fn homology_at(d_out: &Matrix, d_in: &Matrix) -> Result<(ModulePresentation, Matrix)> {
    if d_out.cols != d_in.rows {
        return Err(Error::ShapeMismatch(format!(
            "homology_at: d_out acts on rank {}, d_in lands in rank {}",
            d_out.cols, d_in.rows
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::NotAComplex("d_out composed with d_in is nonzero".into()));
    }
    let ring = d_out.ring.clone();
    let cycles = snf::kernel(d_out)?;
    let pres = subquotient(&ring, &cycles, d_in)?;
    Ok((pres, cycles))
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalForm::Integers { free_rank, torsion } => {
                let mut parts: Vec<String> = Vec::new();
                match free_rank {
                    0 => {}
                    1 => parts.push("Z".into()),
                    r => parts.push(format!("Z^{r}")),
                }
                for t in torsion {
                    parts.push(format!("Z/{t}"));
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
            NormalForm::Field { dim } => match dim {
                0 => write!(f, "0"),
                d => write!(f, "k^{d}"),
            },
        }
    }
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        match self {
            NormalForm::Integers { free_rank, torsion } => *free_rank == 0 && torsion.is_empty(),
            NormalForm::Field { dim } => *dim == 0,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            NormalForm::Integers { free_rank, torsion } => json!({
                "free_rank": free_rank,
                "torsion": torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            }),
            NormalForm::Field { dim } => json!({ "dim": dim }),
        }
    }
}

impl ModulePresentation {
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("ring".into(), json!(self.ring.to_string()));
        obj.insert("gens".into(), json!(self.gens));
        obj.insert("relations".into(), self.relations.to_json());
        if let Some(d) = &self.gen_degrees {
            obj.insert("gen_degrees".into(), json!(d));
        }
        Value::Object(obj)
    }

    pub fn from_json(ring: &CoeffRing, v: &Value) -> Result<Self> {
        let gens = v["gens"].as_u64().ok_or_else(|| Error::Parse("module.gens".into()))? as usize;
        let relations = Matrix::from_json(ring, &v["relations"])?;
        if relations.cols != gens {
            return Err(Error::ShapeMismatch("relations.cols != gens".into()));
        }
        let gen_degrees = v
            .get("gen_degrees")
            .and_then(|d| d.as_array())
            .map(|d| d.iter().filter_map(|x| x.as_i64()).collect());
        Ok(ModulePresentation { ring: ring.clone(), gens, relations, gen_degrees })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

    #[test]
    fn normalize_diag() {
        let m = ModulePresentation::from_relations(z(), Matrix::from_i64(&z(), &[&[2, 0], &[0, 3]]));
        let nf = m.normalize().unwrap();
        assert_eq!(nf, NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(6)] });
        assert_eq!(nf.to_string(), "Z/6");
    }

    #[test]
    fn normalize_with_free_part() {
        // Z^3 / (rowspan [[2,0,0]]) = Z/2 + Z^2
        let m = ModulePresentation::from_relations(z(), Matrix::from_i64(&z(), &[&[2, 0, 0]]));
        let nf = m.normalize().unwrap();
        assert_eq!(nf, NormalForm::Integers { free_rank: 2, torsion: vec![BigInt::from(2)] });
    }

    #[test]
    fn homology_of_multiplication_by_two() {
        // 0 -> Z --2--> Z -> 0, homology at the right spot is Z/2.
        let d_out = Matrix::zero(z(), 0, 1);
        let d_in = Matrix::from_i64(&z(), &[&[2]]);
        let (h, cycles) = homology_at(&d_out, &d_in).unwrap();
        assert_eq!(
            h.normalize().unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(2)] }
        );
        assert_eq!(cycles.cols, 1);
        // at the left spot homology vanishes
        let (h2, _) = homology_at(&d_in, &Matrix::zero(z(), 1, 0)).unwrap();
        assert!(h2.is_zero_module().unwrap());
    }

    #[test]
    fn kernel_of_presented_map() {
        // multiplication by 2 on Z/4 has kernel Z/2
        let z4 = ModulePresentation::cyclic(z(), 4);
        let f = Matrix::from_i64(&z(), &[&[2]]);
        let (gens, pres) = ModulePresentation::kernel(&z4, &z4, &f).unwrap();
        assert_eq!(gens.rows, 1);
        assert_eq!(
            pres.normalize().unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(2)] }
        );
    }

    #[test]
    fn cokernel_of_presented_map() {
        // coker(Z --3--> Z/6) = Z/3
        let z6 = ModulePresentation::cyclic(z(), 6);
        let src = ModulePresentation::free(z(), 1);
        let f = Matrix::from_i64(&z(), &[&[3]]);
        assert!(ModulePresentation::well_defined_map(&src, &z6, &f).unwrap());
        let c = ModulePresentation::cokernel(&z6, &f);
        assert_eq!(
            c.normalize().unwrap(),
            NormalForm::Integers { free_rank: 0, torsion: vec![BigInt::from(3)] }
        );
    }

    #[test]
    fn map_equality_mod_relations() {
        let z6 = ModulePresentation::cyclic(z(), 6);
        let f = Matrix::from_i64(&z(), &[&[1]]);
        let g = Matrix::from_i64(&z(), &[&[7]]);
        assert!(ModulePresentation::maps_equal(&z6, &f, &g).unwrap());
        let h = Matrix::from_i64(&z(), &[&[2]]);
        assert!(!ModulePresentation::maps_equal(&z6, &f, &h).unwrap());
    }
}
