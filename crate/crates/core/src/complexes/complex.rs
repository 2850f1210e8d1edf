//! The complex type itself: levels are finitely presented modules, the
//! differential raises degree by one. Over a graded coefficient ring the
//! levels must be free with recorded generator degrees; homology is then
//! reached through finite dimensional slices over the base field.

use serde_json::{json, Value};
use std::collections::BTreeMap;

use crate::exactalg::graded;
use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::{subquotient, ModulePresentation, NormalForm};
use crate::exactalg::ring::{CoeffRing, Scalar};
use crate::exactalg::snf;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub ring: CoeffRing,
    levels: BTreeMap<i64, ModulePresentation>,
    /// `diffs[n] : C^n -> C^{n+1}` on generators; missing entries are zero.
    diffs: BTreeMap<i64, Matrix>,
}

/// Homology at one degree, kept together with the ambient data needed to
/// express further cycles in terms of the chosen generators.
#[derive(Clone, Debug)]
pub struct HomologyData {
    pub degree: i64,
    /// Presentation on the columns of `cycles`.
    pub module: ModulePresentation,
    /// Cycle generators as columns in the ambient free module of the level.
    pub cycles: Matrix,
    /// Columns spanning boundaries plus the level relations.
    pub boundaries: Matrix,
}

impl HomologyData {
    /// Coordinates of the class of the cycle `v` in the homology generators.
    pub fn class_of(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        snf::solve_mod(&self.cycles, &self.boundaries, v)?
            .ok_or_else(|| Error::NotCompatible("class_of: not a cycle".into()))
    }

    /// Column-wise `class_of`.
    pub fn classes_of(&self, m: &Matrix) -> Result<Matrix> {
        snf::solve_matrix_mod(&self.cycles, &self.boundaries, m)?
            .ok_or_else(|| Error::NotCompatible("classes_of: a column is not a cycle".into()))
    }
}

impl Complex {
    pub fn empty(ring: CoeffRing) -> Self {
        Complex { ring, levels: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// A single module placed in one degree.
    pub fn concentrated(m: ModulePresentation, degree: i64) -> Self {
        let ring = m.ring.clone();
        let mut levels = BTreeMap::new();
        if m.gens > 0 {
            levels.insert(degree, m);
        }
        Complex { ring, levels, diffs: BTreeMap::new() }
    }

    /// Assemble and validate: shapes, well-definedness of the differential on
    /// presented levels, `d o d = 0` modulo relations, and homogeneity over
    /// graded rings.
    pub fn from_parts(
        ring: CoeffRing,
        levels: BTreeMap<i64, ModulePresentation>,
        diffs: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        let mut lv = BTreeMap::new();
        for (n, m) in levels {
            if m.ring != ring {
                return Err(Error::NotCompatible(format!(
                    "level {n} is over {}, complex over {}",
                    m.ring, ring
                )));
            }
            if ring.is_graded() && (!m.is_free_no_relations() || m.gen_degrees.is_none()) {
                return Err(Error::UnsupportedRing(
                    "graded complexes must be levelwise free with generator degrees".into(),
                ));
            }
            if m.gens > 0 {
                lv.insert(n, m);
            }
        }
        let mut c = Complex { ring: ring.clone(), levels: lv, diffs: BTreeMap::new() };
        let mut dd = BTreeMap::new();
        for (n, mut d) in diffs {
            let src = c.level(n);
            let tgt = c.level(n + 1);
            if d.rows != tgt.gens || d.cols != src.gens {
                return Err(Error::ShapeMismatch(format!(
                    "differential at {n} is {}x{}, expected {}x{}",
                    d.rows, d.cols, tgt.gens, src.gens
                )));
            }
            if d.is_zero() {
                continue;
            }
            if ring.is_graded() {
                d = d.with_degrees(
                    tgt.gen_degrees.clone().unwrap(),
                    src.gen_degrees.clone().unwrap(),
                );
                graded::validate_graded(&d)?;
            }
            if !ModulePresentation::well_defined_map(&src, &tgt, &d)? {
                return Err(Error::NotAComplex(format!(
                    "differential at {n} does not preserve relations"
                )));
            }
            dd.insert(n, d);
        }
        c.diffs = dd;
        let degrees: Vec<i64> = c.diffs.keys().copied().collect();
        for n in degrees {
            if let Some(next) = c.diffs.get(&(n + 1)) {
                let comp = next.mul(&c.diffs[&n]);
                if !ModulePresentation::map_is_zero(&c.level(n + 2), &comp)? {
                    return Err(Error::NotAComplex(format!("d^2 != 0 starting at degree {n}")));
                }
            }
        }
        Ok(c)
    }

    /// The level at `n` (a zero module off support).
    pub fn level(&self, n: i64) -> ModulePresentation {
        self.levels.get(&n).cloned().unwrap_or_else(|| {
            if self.ring.is_graded() {
                ModulePresentation::free_graded(self.ring.clone(), vec![])
            } else {
                ModulePresentation::zero(self.ring.clone())
            }
        })
    }

    pub fn gens_at(&self, n: i64) -> usize {
        self.levels.get(&n).map_or(0, |m| m.gens)
    }

    /// The differential `C^n -> C^{n+1}` (zero of the right shape off support).
    pub fn differential(&self, n: i64) -> Matrix {
        self.diffs.get(&n).cloned().unwrap_or_else(|| {
            let mut d = Matrix::zero(self.ring.clone(), self.gens_at(n + 1), self.gens_at(n));
            if self.ring.is_graded() {
                d = d.with_degrees(
                    self.level(n + 1).gen_degrees.unwrap_or_default(),
                    self.level(n).gen_degrees.unwrap_or_default(),
                );
            }
            d
        })
    }

    pub fn support(&self) -> Vec<i64> {
        self.levels.keys().copied().collect()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.levels.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.levels.keys().next_back().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_levelwise_free(&self) -> bool {
        self.levels.values().all(|m| m.is_free_no_relations())
    }

    pub fn total_gens(&self) -> usize {
        self.levels.values().map(|m| m.gens).sum()
    }

    /// `C[k]`: the level at `n` becomes `C^{n+k}` and the differential picks up
    /// the sign `(-1)^k`.
    pub fn shift(&self, k: i64) -> Complex {
        let levels = self.levels.iter().map(|(&n, m)| (n - k, m.clone())).collect();
        let flip = k.rem_euclid(2) == 1;
        let diffs = self
            .diffs
            .iter()
            .map(|(&n, d)| (n - k, if flip { d.neg() } else { d.clone() }))
            .collect();
        Complex { ring: self.ring.clone(), levels, diffs }
    }

    pub fn direct_sum(parts: &[&Complex]) -> Result<Complex> {
        assert!(!parts.is_empty());
        let ring = parts[0].ring.clone();
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for p in parts {
            if p.ring != ring {
                return Err(Error::NotCompatible("direct sum over mixed rings".into()));
            }
            if let (Some(a), Some(b)) = (p.min_degree(), p.max_degree()) {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        if lo > hi {
            return Ok(Complex::empty(ring));
        }
        let mut levels = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in lo..=hi {
            let summands: Vec<ModulePresentation> = parts.iter().map(|p| p.level(n)).collect();
            let refs: Vec<&ModulePresentation> = summands.iter().collect();
            levels.insert(n, ModulePresentation::direct_sum(&refs));
            let blocks: Vec<Matrix> = parts.iter().map(|p| p.differential(n)).collect();
            let brefs: Vec<&Matrix> = blocks.iter().collect();
            diffs.insert(n, Matrix::block_diag(&brefs));
        }
        Complex::from_parts(ring, levels, diffs)
    }

    pub fn base_change(&self, target: &CoeffRing) -> Result<Complex> {
        let mut levels = BTreeMap::new();
        for (&n, m) in &self.levels {
            levels.insert(n, m.base_change(target)?);
        }
        let mut diffs = BTreeMap::new();
        for (&n, d) in &self.diffs {
            diffs.insert(n, d.base_change(target)?);
        }
        Complex::from_parts(target.clone(), levels, diffs)
    }

    /// Discard all levels in degrees greater than `k`.
    pub fn truncate_above(&self, k: i64) -> Complex {
        let levels = self.levels.range(..=k).map(|(&n, m)| (n, m.clone())).collect();
        let diffs = self.diffs.range(..k).map(|(&n, d)| (n, d.clone())).collect();
        Complex { ring: self.ring.clone(), levels, diffs }
    }

    /// Discard all levels in degrees less than `k`.
    pub fn truncate_below(&self, k: i64) -> Complex {
        let levels = self.levels.range(k..).map(|(&n, m)| (n, m.clone())).collect();
        let diffs = self.diffs.range(k..).map(|(&n, d)| (n, d.clone())).collect();
        Complex { ring: self.ring.clone(), levels, diffs }
    }

    /// Homology at degree `n` with explicit cycle generators. Unavailable over
    /// graded rings; slice first.
    pub fn homology(&self, n: i64) -> Result<HomologyData> {
        if self.ring.is_graded() {
            return Err(Error::UnsupportedRing(
                "homology over a graded ring goes through graded_slice".into(),
            ));
        }
        let src = self.level(n);
        let d_out = self.differential(n);
        let next_rel = self.level(n + 1).relation_columns();
        let cycles = snf::kernel_mod(&d_out, &next_rel)?;
        let d_in = self.differential(n - 1);
        let boundaries = Matrix::hstack(&[&d_in, &src.relation_columns()]);
        let module = subquotient(&self.ring, &cycles, &boundaries)?;
        Ok(HomologyData { degree: n, module, cycles, boundaries })
    }

    pub fn homology_normal_form(&self, n: i64) -> Result<NormalForm> {
        self.homology(n)?.module.normalize()
    }

    /// All nonzero homology, by degree.
    pub fn homology_all(&self) -> Result<BTreeMap<i64, NormalForm>> {
        let mut out = BTreeMap::new();
        let (Some(lo), Some(hi)) = (self.min_degree(), self.max_degree()) else {
            return Ok(out);
        };
        for n in lo..=hi {
            let nf = self.homology_normal_form(n)?;
            if !nf.is_zero() {
                out.insert(n, nf);
            }
        }
        Ok(out)
    }

    /// The degree-`d` slice of a graded levelwise free complex, as a complex of
    /// finite dimensional spaces over the base field.
    pub fn graded_slice(&self, d: i64) -> Result<Complex> {
        if !self.ring.is_graded() {
            return Err(Error::UnsupportedRing(format!("{} is not graded", self.ring)));
        }
        let base = self.ring.base_field().clone();
        let nvars = self.ring.nvars();
        let mut levels = BTreeMap::new();
        for (&n, m) in &self.levels {
            let degs = m.gen_degrees.as_ref().expect("graded level has degrees");
            let k = graded::slice_basis(nvars, degs, d).len();
            if k > 0 {
                levels.insert(n, ModulePresentation::free(base.clone(), k));
            }
        }
        let mut diffs = BTreeMap::new();
        for (&n, dm) in &self.diffs {
            diffs.insert(n, graded::graded_slice(dm, d)?);
        }
        Complex::from_parts(base, levels, diffs)
    }

    pub fn to_json(&self) -> Value {
        let levels: serde_json::Map<String, Value> =
            self.levels.iter().map(|(n, m)| (n.to_string(), m.to_json())).collect();
        let diffs: serde_json::Map<String, Value> =
            self.diffs.iter().map(|(n, d)| (n.to_string(), d.to_json())).collect();
        json!({
            "ring": self.ring.to_string(),
            "levels": levels,
            "differentials": diffs,
        })
    }

    pub fn from_json(ring: &CoeffRing, v: &Value) -> Result<Complex> {
        let mut levels = BTreeMap::new();
        let lv = v["levels"].as_object().ok_or_else(|| Error::Parse("complex.levels".into()))?;
        for (k, m) in lv {
            let n: i64 = k.parse().map_err(|_| Error::Parse(format!("level degree {k}")))?;
            levels.insert(n, ModulePresentation::from_json(ring, m)?);
        }
        let mut diffs = BTreeMap::new();
        if let Some(dv) = v.get("differentials").and_then(|d| d.as_object()) {
            for (k, m) in dv {
                let n: i64 = k.parse().map_err(|_| Error::Parse(format!("differential degree {k}")))?;
                diffs.insert(n, Matrix::from_json(ring, m)?);
            }
        }
        Complex::from_parts(ring.clone(), levels, diffs)
    }
}
