//! Injective coresolutions of complexes of abelian groups.
//!
//! Over the integers the injective modules are the divisible groups, and every
//! one we need is a quotient `Q^d / L` of a rational vector space by a
//! finitely generated lattice. Such a quotient is recorded as a lattice pair:
//! the ambient dimension together with a rational matrix whose columns
//! generate `L`. All arithmetic stays exact; subgroups of `Q^d / L` are
//! handled as `span + lattice` pairs and membership questions reduce to
//! integer linear systems after clearing denominators.
//!
//! A bounded complex `C` of finitely presented abelian groups is
//! quasi-isomorphic to a two-row complex of divisible groups: in each degree
//! take `H^k(C) = Z^h / L_k` and use the embedding `Z^h / L_k -> Q^h / L_k`
//! with cokernel `Q^h / Z^h`. The total complex has `T^k = Q^{h_k}/L_k (+)
//! Q^{h_{k-1}}/Z^{h_{k-1}}` and identity blocks as differential, and the
//! comparison map `C -> T` is produced degree by degree by solving the
//! extension problems that injectivity guarantees are solvable.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::complexes::Complex;
use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::{ModulePresentation, NormalForm};
use crate::exactalg::ring::{CoeffRing, Scalar};
use crate::exactalg::snf;
use crate::{Error, Result};

fn rationals() -> CoeffRing {
    CoeffRing::Rationals
}

fn as_rat(s: &Scalar) -> &BigRational {
    match s {
        Scalar::Rat(x) => x,
        _ => panic!("rational entry expected"),
    }
}

/// Rows spanning `{ y : y a = 0 }`. Only correct over a field; columns of a
/// transposed kernel basis.
fn left_kernel(a: &Matrix) -> Result<Matrix> {
    Ok(snf::kernel(&a.transpose())?.transpose())
}

fn rank(a: &Matrix) -> Result<usize> {
    Ok(snf::smith_normal_form(a)?.rank)
}

/// Scale each row of the system `f u = t` by the lcm of its denominators,
/// producing an equivalent integer system.
fn clear_rows(f: &Matrix, t: &Matrix) -> (Matrix, Matrix) {
    let z = CoeffRing::Integers;
    let mut fi = Matrix::zero(z.clone(), f.rows, f.cols);
    let mut ti = Matrix::zero(z, t.rows, t.cols);
    for r in 0..f.rows {
        let mut d = BigInt::one();
        for c in 0..f.cols {
            d = d.lcm(as_rat(f.at(r, c)).denom());
        }
        for c in 0..t.cols {
            d = d.lcm(as_rat(t.at(r, c)).denom());
        }
        let dq = BigRational::from_integer(d);
        for c in 0..f.cols {
            fi.set(r, c, Scalar::Int((as_rat(f.at(r, c)) * &dq).to_integer()));
        }
        for c in 0..t.cols {
            ti.set(r, c, Scalar::Int((as_rat(t.at(r, c)) * &dq).to_integer()));
        }
    }
    (fi, ti)
}

/// Does every column of `t` lie in the lattice generated by the columns of
/// `g`? Both matrices are rational with equal row count.
fn lattice_contains_all(g: &Matrix, t: &Matrix) -> Result<bool> {
    if t.cols == 0 || t.rows == 0 {
        return Ok(true);
    }
    if g.cols == 0 {
        return Ok(t.is_zero());
    }
    let (gi, ti) = clear_rows(g, t);
    Ok(snf::solve_matrix(&gi, &ti)?.is_some())
}

/// The subgroup `{ x in Q^q : a x in lattice(g) }` as a pair
/// `(span part, lattice part)`: rational kernel plus one particular solution
/// per lattice basis direction of `{ u integral : g u in im a }`.
fn preimage_group(a: &Matrix, g: &Matrix) -> Result<(Matrix, Matrix)> {
    let span = snf::kernel(a)?;
    if g.cols == 0 {
        return Ok((span, Matrix::zero(rationals(), a.cols, 0)));
    }
    let e = left_kernel(a)?;
    let (fi, _) = clear_rows(&e.mul(g), &Matrix::zero(rationals(), e.rows, 0));
    let u = snf::kernel(&fi)?;
    if u.cols == 0 {
        return Ok((span, Matrix::zero(rationals(), a.cols, 0)));
    }
    let rhs = g.mul(&u.base_change(&rationals())?);
    let lat = snf::solve_matrix(a, &rhs)?
        .ok_or_else(|| Error::NoSolution("preimage lattice lost consistency".into()))?;
    Ok((span, lat))
}

/// Normal form of `S / R` for subgroups `S = span(p_s) + lattice(m_s)` and
/// `R = span(p_r) + lattice(m_r)` of the same `Q^n`, assuming `R` is
/// contained in `S`. The divisible part splits off because it is injective;
/// what remains is finitely generated and goes through Smith reduction.
fn span_quotient_normal_form(
    p_s: &Matrix,
    m_s: &Matrix,
    p_r: &Matrix,
    m_r: &Matrix,
) -> Result<DivisibleNormalForm> {
    let n = p_s.rows;
    // Kill the denominator span first; its kernel sits inside R.
    let pi = if p_r.cols == 0 { Matrix::identity(rationals(), n) } else { left_kernel(p_r)? };
    let qbar = pi.mul(p_s);
    let bbar = pi.mul(m_s);
    let cbar = pi.mul(m_r);
    let a = rank(&qbar)?;
    let pq =
        if qbar.cols == 0 { Matrix::identity(rationals(), pi.rows) } else { left_kernel(&qbar)? };
    // rank of span(qbar) intersected with lattice(cbar)
    let r0 = if cbar.cols == 0 {
        0
    } else {
        let (fi, _) = clear_rows(&pq.mul(&cbar), &Matrix::zero(rationals(), pq.rows, 0));
        let u = snf::kernel(&fi)?;
        if u.cols == 0 { 0 } else { rank(&cbar.mul(&u.base_change(&rationals())?))? }
    };
    // Finitely generated complement: the image of lattice(bbar) after the
    // divisible part is factored out, modulo the image of lattice(cbar).
    let rb = pq.mul(&bbar);
    let rc = pq.mul(&cbar);
    let (free_rank, torsion) = if rb.cols == 0 {
        (0, Vec::new())
    } else {
        let stacked = Matrix::hstack(&[&rb, &rc.neg()]);
        let (fi, _) = clear_rows(&stacked, &Matrix::zero(rationals(), stacked.rows, 0));
        let k = snf::kernel(&fi)?;
        let top: Vec<usize> = (0..rb.cols).collect();
        let all: Vec<usize> = (0..k.cols).collect();
        let relations = k.submatrix(&top, &all).transpose();
        match ModulePresentation::from_relations(CoeffRing::Integers, relations).normalize()? {
            NormalForm::Integers { free_rank, torsion } => (free_rank, torsion),
            NormalForm::Field { .. } => unreachable!("integer presentation"),
        }
    };
    Ok(DivisibleNormalForm { rational: a - r0, quasicyclic: r0, free_rank, torsion })
}

/// Isomorphism type of a group of the form `Q^a (+) (Q/Z)^b (+) Z^c (+)
/// sum of Z/d_i`, the shape every homology group of a complex of lattice
/// pairs takes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibleNormalForm {
    pub rational: usize,
    pub quasicyclic: usize,
    pub free_rank: usize,
    /// Invariant factors `> 1` in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl DivisibleNormalForm {
    pub fn is_zero(&self) -> bool {
        self.rational == 0 && self.quasicyclic == 0 && self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Embed the normal form of a finitely generated group.
    pub fn from_finitely_generated(nf: &NormalForm) -> Result<Self> {
        match nf {
            NormalForm::Integers { free_rank, torsion } => Ok(DivisibleNormalForm {
                rational: 0,
                quasicyclic: 0,
                free_rank: *free_rank,
                torsion: torsion.clone(),
            }),
            NormalForm::Field { .. } => {
                Err(Error::UnsupportedRing("divisible normal forms live over Z".into()))
            }
        }
    }
}

impl fmt::Display for DivisibleNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rational {
            0 => {}
            1 => parts.push("Q".into()),
            r => parts.push(format!("Q^{r}")),
        }
        match self.quasicyclic {
            0 => {}
            1 => parts.push("Q/Z".into()),
            r => parts.push(format!("(Q/Z)^{r}")),
        }
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A divisible group `Q^dim / L`, with the columns of `lattice` generating
/// `L`. Any finitely generated `L` is allowed; the quotient is isomorphic to
/// `Q^(dim - rank L) (+) (Q/Z)^(rank L)`.
#[derive(Clone, Debug)]
pub struct DivisibleModule {
    pub dim: usize,
    pub lattice: Matrix,
}

impl DivisibleModule {
    pub fn new(dim: usize, lattice: Matrix) -> Result<Self> {
        if lattice.ring != rationals() {
            return Err(Error::UnsupportedRing("lattice pairs carry rational entries".into()));
        }
        if lattice.rows != dim {
            return Err(Error::ShapeMismatch(format!(
                "lattice has {} rows in ambient dimension {dim}",
                lattice.rows
            )));
        }
        Ok(DivisibleModule { dim, lattice })
    }

    /// The full rational vector space, no lattice.
    pub fn rational(dim: usize) -> Self {
        DivisibleModule { dim, lattice: Matrix::zero(rationals(), dim, 0) }
    }

    /// `(Q/Z)^dim`.
    pub fn quasicyclic(dim: usize) -> Self {
        DivisibleModule { dim, lattice: Matrix::identity(rationals(), dim) }
    }
}

/// A cohomological complex of divisible groups presented as lattice pairs.
/// Differentials are rational matrices that must send each lattice into the
/// next and compose to zero exactly, not merely up to the lattice.
#[derive(Clone, Debug)]
pub struct DivisibleComplex {
    levels: BTreeMap<i64, DivisibleModule>,
    diffs: BTreeMap<i64, Matrix>,
}

impl DivisibleComplex {
    pub fn from_parts(
        levels: BTreeMap<i64, DivisibleModule>,
        diffs: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        let mut kept: BTreeMap<i64, DivisibleModule> = BTreeMap::new();
        for (n, m) in levels {
            if m.lattice.ring != rationals() || m.lattice.rows != m.dim {
                return Err(Error::ShapeMismatch(format!("bad lattice pair at degree {n}")));
            }
            if m.dim > 0 {
                kept.insert(n, m);
            }
        }
        let c = DivisibleComplex { levels: kept, diffs: BTreeMap::new() };
        let mut dd = BTreeMap::new();
        for (n, d) in diffs {
            if d.ring != rationals() {
                return Err(Error::UnsupportedRing("differential entries must be rational".into()));
            }
            if d.rows != c.dim_at(n + 1) || d.cols != c.dim_at(n) {
                return Err(Error::ShapeMismatch(format!(
                    "differential at degree {n} is {}x{}, expected {}x{}",
                    d.rows,
                    d.cols,
                    c.dim_at(n + 1),
                    c.dim_at(n)
                )));
            }
            if d.rows == 0 || d.cols == 0 {
                continue;
            }
            if !lattice_contains_all(&c.lattice_at(n + 1), &d.mul(&c.lattice_at(n)))? {
                return Err(Error::NotAComplex(format!(
                    "differential at degree {n} does not preserve the lattice"
                )));
            }
            dd.insert(n, d);
        }
        let degrees: Vec<i64> = dd.keys().copied().collect();
        for n in degrees {
            if let Some(next) = dd.get(&(n + 1)) {
                if !next.mul(&dd[&n]).is_zero() {
                    return Err(Error::NotAComplex(format!("d^2 != 0 starting at degree {n}")));
                }
            }
        }
        Ok(DivisibleComplex { levels: c.levels, diffs: dd })
    }

    pub fn dim_at(&self, n: i64) -> usize {
        self.levels.get(&n).map_or(0, |m| m.dim)
    }

    pub fn level(&self, n: i64) -> Option<&DivisibleModule> {
        self.levels.get(&n)
    }

    /// Lattice generators at `n` (no columns off support).
    pub fn lattice_at(&self, n: i64) -> Matrix {
        self.levels
            .get(&n)
            .map(|m| m.lattice.clone())
            .unwrap_or_else(|| Matrix::zero(rationals(), self.dim_at(n), 0))
    }

    /// The differential `T^n -> T^(n+1)` (zero of the right shape off support).
    pub fn differential(&self, n: i64) -> Matrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(rationals(), self.dim_at(n + 1), self.dim_at(n)))
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

    /// Isomorphism type of `H^n`. Cycles are the preimage of the next lattice
    /// under the differential, boundaries are the image span plus this
    /// degree's own lattice.
    pub fn homology_normal_form(&self, n: i64) -> Result<DivisibleNormalForm> {
        let a = self.differential(n);
        let (span, lat) = preimage_group(&a, &self.lattice_at(n + 1))?;
        let b = self.differential(n - 1);
        span_quotient_normal_form(&span, &lat, &b, &self.lattice_at(n))
    }

    /// All nonzero homology, by degree.
    pub fn homology_all(&self) -> Result<BTreeMap<i64, DivisibleNormalForm>> {
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
}

/// Solve `x bq + u bz = t` for a rational `x` and an integral `u`, with `t` a
/// single column: project onto the cokernel of `bq` to pin down an integral
/// `u`, then solve the remaining rational system.
fn mixed_solve(bq: &Matrix, bz: &Matrix, t: &Matrix) -> Result<Option<(Vec<Scalar>, Vec<Scalar>)>> {
    let e = left_kernel(bq)?;
    let u = if bz.cols == 0 {
        if !e.mul(t).is_zero() {
            return Ok(None);
        }
        Vec::new()
    } else {
        let (fi, si) = clear_rows(&e.mul(bz), &e.mul(t));
        match snf::solve(&fi, &si.column(0))? {
            Some(u) => u,
            None => return Ok(None),
        }
    };
    let rhs = if bz.cols == 0 {
        t.clone()
    } else {
        let ucol = Matrix::from_rows(
            CoeffRing::Integers,
            u.iter().map(|s| vec![s.clone()]).collect(),
        )
        .expect("column vector")
        .base_change(&rationals())?;
        t.sub(&bz.mul(&ucol))
    };
    let x = if bq.cols == 0 {
        if !rhs.is_zero() {
            return Err(Error::NoSolution("mixed system lost consistency".into()));
        }
        Vec::new()
    } else {
        snf::solve(bq, &rhs.column(0))?
            .ok_or_else(|| Error::NoSolution("mixed system lost consistency".into()))?
    };
    Ok(Some((x, u)))
}

/// Find a rational `x` (h rows, g columns) with `x * conds == targets` modulo
/// the lattice, column by column. This is the lifting problem solved by
/// injectivity of `Q^h / lattice`; the unknown integral coefficients of the
/// lattice correction enter a mixed linear system alongside `vec(x)`.
fn solve_extension(conds: &Matrix, targets: &Matrix, lattice: &Matrix) -> Result<Matrix> {
    let h = targets.rows;
    let g = conds.rows;
    let m = conds.cols;
    if h == 0 || g == 0 {
        return Ok(Matrix::zero(rationals(), h, g));
    }
    if m == 0 {
        return Ok(Matrix::zero(rationals(), h, g));
    }
    let eye = Matrix::identity(rationals(), h);
    let bq = conds.transpose().kronecker(&eye);
    let bz = Matrix::identity(rationals(), m).kronecker(lattice).neg();
    let mut t = Vec::with_capacity(m * h);
    for j in 0..m {
        t.extend(targets.column(j));
    }
    let tcol =
        Matrix::from_rows(rationals(), t.into_iter().map(|s| vec![s]).collect()).expect("column");
    let (x, _) = mixed_solve(&bq, &bz, &tcol)?
        .ok_or_else(|| Error::NoSolution("no extension to the divisible quotient".into()))?;
    let mut xm = Matrix::zero(rationals(), h, g);
    for i in 0..g {
        for r in 0..h {
            xm.set(r, i, x[i * h + r].clone());
        }
    }
    Ok(xm)
}

/// An injective coresolution of a complex of finitely presented abelian
/// groups, together with the comparison quasi-isomorphism.
#[derive(Clone, Debug)]
pub struct DivisibleCoresolution {
    pub total: DivisibleComplex,
    /// `comparison[n] : C^n -> T^n` on generators, rational entries.
    pub comparison: BTreeMap<i64, Matrix>,
    /// Window `[lo, hi]` outside which both complexes are exact; the
    /// comparison is a quasi-isomorphism in every degree.
    pub certified: (i64, i64),
}

/// Coresolve a bounded complex over `Z` by divisible groups. Each degree of
/// the result is `Q^{h_n}/L_n (+) Q^{h_{n-1}}/Z^{h_{n-1}}` built from the
/// homology presentations of the input, so the construction is canonical once
/// homology generators are chosen. Every verification here is exact: the
/// chain rule holds modulo the recorded lattices, the induced map on homology
/// is the identity matrix on matching presentations, and the normal forms
/// agree degree by degree.
pub fn divisible_coresolution(c: &Complex) -> Result<DivisibleCoresolution> {
    if c.ring != CoeffRing::Integers {
        return Err(Error::UnsupportedRing(
            "divisible coresolutions are an integer construction".into(),
        ));
    }
    let q = rationals();
    let (Some(lo), Some(hi)) = (c.min_degree(), c.max_degree()) else {
        return Ok(DivisibleCoresolution {
            total: DivisibleComplex::from_parts(BTreeMap::new(), BTreeMap::new())?,
            comparison: BTreeMap::new(),
            certified: (0, 0),
        });
    };

    let mut hdim: BTreeMap<i64, usize> = BTreeMap::new();
    let mut hlat: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut cycles: BTreeMap<i64, Matrix> = BTreeMap::new();
    for k in lo..=hi {
        let data = c.homology(k)?;
        hdim.insert(k, data.module.gens);
        hlat.insert(k, data.module.relation_columns().base_change(&q)?);
        cycles.insert(k, data.cycles.base_change(&q)?);
    }
    let hd = |k: i64| hdim.get(&k).copied().unwrap_or(0);

    let mut levels = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for k in lo..=hi + 1 {
        let ha = hd(k);
        let hb = hd(k - 1);
        if ha + hb == 0 {
            continue;
        }
        let lam = hlat.get(&k).cloned().unwrap_or_else(|| Matrix::zero(q.clone(), ha, 0));
        let lattice = Matrix::block_diag(&[&lam, &Matrix::identity(q.clone(), hb)]);
        levels.insert(k, DivisibleModule { dim: ha + hb, lattice });
    }
    for k in lo..=hi {
        let ha = hd(k);
        if ha == 0 {
            continue;
        }
        // T^k -> T^(k+1) is the identity from this H-part onto the next
        // degree's quasicyclic block.
        let mut d = Matrix::zero(q.clone(), hd(k + 1) + ha, ha + hd(k - 1));
        d.set_block(hd(k + 1), 0, &Matrix::identity(q.clone(), ha));
        diffs.insert(k, d);
    }
    let total = DivisibleComplex::from_parts(levels, diffs)?;

    // H-part of the comparison: send each cycle generator to its own class.
    let mut xs: BTreeMap<i64, Matrix> = BTreeMap::new();
    for k in lo..=hi {
        let h = hd(k);
        let gk = c.gens_at(k);
        if h == 0 || gk == 0 {
            xs.insert(k, Matrix::zero(q.clone(), h, gk));
            continue;
        }
        let rel = c.level(k).relation_columns().base_change(&q)?;
        let conds = Matrix::hstack(&[&rel, &cycles[&k]]);
        let mut targets = Matrix::zero(q.clone(), h, rel.cols + h);
        targets.set_block(0, rel.cols, &Matrix::identity(q.clone(), h));
        xs.insert(k, solve_extension(&conds, &targets, &hlat[&k])?);
    }
    // Quasicyclic part: a cobounding of the H-part through the differential.
    let mut ys: BTreeMap<i64, Matrix> = BTreeMap::new();
    for k in lo..=hi {
        let h = hd(k);
        let gnext = c.gens_at(k + 1);
        if h == 0 || gnext == 0 {
            ys.insert(k, Matrix::zero(q.clone(), h, gnext));
            continue;
        }
        let rel = c.level(k + 1).relation_columns().base_change(&q)?;
        let dk = c.differential(k).base_change(&q)?;
        let conds = Matrix::hstack(&[&rel, &dk]);
        let targets = Matrix::hstack(&[&Matrix::zero(q.clone(), h, rel.cols), &xs[&k]]);
        ys.insert(k, solve_extension(&conds, &targets, &Matrix::identity(q.clone(), h))?);
    }
    let mut comparison = BTreeMap::new();
    for k in lo..=hi {
        let gk = c.gens_at(k);
        let dim = total.dim_at(k);
        if gk == 0 || dim == 0 {
            continue;
        }
        let x = xs.get(&k).cloned().unwrap_or_else(|| Matrix::zero(q.clone(), hd(k), gk));
        let y = ys.get(&(k - 1)).cloned().unwrap_or_else(|| Matrix::zero(q.clone(), hd(k - 1), gk));
        comparison.insert(k, Matrix::vstack(&[&x, &y]));
    }

    let theta = |k: i64| {
        comparison
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(q.clone(), total.dim_at(k), c.gens_at(k)))
    };
    for k in lo..=hi {
        let lhs = total.differential(k).mul(&theta(k));
        let rhs = theta(k + 1).mul(&c.differential(k).base_change(&q)?);
        if !lattice_contains_all(&total.lattice_at(k + 1), &lhs.sub(&rhs))? {
            return Err(Error::NoSolution(format!(
                "comparison fails the chain rule at degree {k}"
            )));
        }
        let h = hd(k);
        if h > 0 && c.gens_at(k) > 0 {
            let diff = xs[&k].mul(&cycles[&k]).sub(&Matrix::identity(q.clone(), h));
            if !lattice_contains_all(&hlat[&k], &diff)? {
                return Err(Error::NoSolution(format!(
                    "comparison is not the identity on homology at degree {k}"
                )));
            }
        }
    }
    for k in lo..=hi + 1 {
        let want = DivisibleNormalForm::from_finitely_generated(&c.homology_normal_form(k)?)?;
        let got = total.homology_normal_form(k)?;
        if want != got {
            return Err(Error::NoSolution(format!(
                "homology mismatch at degree {k}: {want} vs {got}"
            )));
        }
    }
    Ok(DivisibleCoresolution { total, comparison, certified: (lo, hi + 1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::random_bounded_free_complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

    fn nf(rational: usize, quasicyclic: usize, free_rank: usize, torsion: &[i64]) -> DivisibleNormalForm {
        DivisibleNormalForm {
            rational,
            quasicyclic,
            free_rank,
            torsion: torsion.iter().map(|&t| BigInt::from(t)).collect(),
        }
    }

    #[test]
    fn integers_coresolve_to_rationals_mod_lattice() {
        let c = Complex::concentrated(ModulePresentation::free(z(), 1), 0);
        let res = divisible_coresolution(&c).unwrap();
        assert_eq!(res.total.dim_at(0), 1);
        assert_eq!(res.total.dim_at(1), 1);
        assert_eq!(res.total.lattice_at(0).cols, 0);
        assert!(res.total.lattice_at(1).is_identity());
        assert_eq!(res.total.homology_normal_form(0).unwrap(), nf(0, 0, 1, &[]));
        assert!(res.total.homology_normal_form(1).unwrap().is_zero());
        assert_eq!(res.certified, (0, 1));
    }

    #[test]
    fn torsion_concentrated_module() {
        let c = Complex::concentrated(ModulePresentation::cyclic(z(), 12), -2);
        let res = divisible_coresolution(&c).unwrap();
        assert_eq!(res.total.homology_normal_form(-2).unwrap(), nf(0, 0, 0, &[12]));
        assert!(res.total.homology_normal_form(-1).unwrap().is_zero());
        assert_eq!(res.certified, (-2, -1));
    }

    #[test]
    fn two_term_diagonal_map() {
        let mut levels = BTreeMap::new();
        levels.insert(0, ModulePresentation::free(z(), 2));
        levels.insert(1, ModulePresentation::free(z(), 2));
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::from_i64(&z(), &[&[2, 0], &[0, 0]]));
        let c = Complex::from_parts(z(), levels, diffs).unwrap();
        let res = divisible_coresolution(&c).unwrap();
        assert_eq!(res.total.homology_normal_form(0).unwrap(), nf(0, 0, 1, &[]));
        assert_eq!(res.total.homology_normal_form(1).unwrap(), nf(0, 0, 1, &[2]));
        assert!(res.total.homology_normal_form(2).unwrap().is_zero());
    }

    #[test]
    fn relation_carrying_levels_are_supported() {
        // Z --2--> Z/8: kernel 4Z, cokernel Z/2.
        let mut levels = BTreeMap::new();
        levels.insert(0, ModulePresentation::free(z(), 1));
        levels.insert(1, ModulePresentation::cyclic(z(), 8));
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::from_i64(&z(), &[&[2]]));
        let c = Complex::from_parts(z(), levels, diffs).unwrap();
        let res = divisible_coresolution(&c).unwrap();
        assert_eq!(res.total.homology_normal_form(0).unwrap(), nf(0, 0, 1, &[]));
        assert_eq!(res.total.homology_normal_form(1).unwrap(), nf(0, 0, 0, &[2]));
    }

    #[test]
    fn prufer_quotient_of_multiplication_by_two() {
        // Q/Z --2--> Q/Z has kernel Z/2 and is onto.
        let mut levels = BTreeMap::new();
        levels.insert(0, DivisibleModule::quasicyclic(1));
        levels.insert(1, DivisibleModule::quasicyclic(1));
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::from_i64(&z(), &[&[2]]).base_change(&rationals()).unwrap());
        let t = DivisibleComplex::from_parts(levels, diffs).unwrap();
        assert_eq!(t.homology_normal_form(0).unwrap(), nf(0, 0, 0, &[2]));
        assert!(t.homology_normal_form(1).unwrap().is_zero());
    }

    #[test]
    fn rationals_onto_prufer_leave_the_integers() {
        let mut levels = BTreeMap::new();
        levels.insert(0, DivisibleModule::rational(1));
        levels.insert(1, DivisibleModule::quasicyclic(1));
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::identity(rationals(), 1));
        let t = DivisibleComplex::from_parts(levels, diffs).unwrap();
        assert_eq!(t.homology_normal_form(0).unwrap(), nf(0, 0, 1, &[]));
        assert!(t.homology_normal_form(1).unwrap().is_zero());
    }

    #[test]
    fn quotient_by_a_partial_lattice_mixes_parts() {
        // Q^2 / Z e_1 = Q/Z (+) Q.
        let mut lattice = Matrix::zero(rationals(), 2, 1);
        lattice.set(0, 0, rationals().one());
        let mut levels = BTreeMap::new();
        levels.insert(0, DivisibleModule::new(2, lattice).unwrap());
        let t = DivisibleComplex::from_parts(levels, BTreeMap::new()).unwrap();
        assert_eq!(t.homology_normal_form(0).unwrap(), nf(1, 1, 0, &[]));
    }

    #[test]
    fn lattices_must_be_preserved() {
        // x/3 does not send Z into Z.
        let mut levels = BTreeMap::new();
        levels.insert(0, DivisibleModule::quasicyclic(1));
        levels.insert(1, DivisibleModule::quasicyclic(1));
        let mut diffs = BTreeMap::new();
        let mut d = Matrix::zero(rationals(), 1, 1);
        d.set(0, 0, rationals().parse_scalar("1/3").unwrap());
        diffs.insert(0, d);
        assert!(matches!(
            DivisibleComplex::from_parts(levels, diffs),
            Err(Error::NotAComplex(_))
        ));
    }

    #[test]
    fn non_integer_rings_are_rejected() {
        let c = Complex::concentrated(
            ModulePresentation::free(CoeffRing::prime_field(5).unwrap(), 1),
            0,
        );
        assert!(matches!(divisible_coresolution(&c), Err(Error::UnsupportedRing(_))));
    }

    #[test]
    fn random_complexes_coresolve_with_matching_homology() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..6 {
            let c = random_bounded_free_complex(&z(), &mut rng, -1, 2, 3, 3).unwrap();
            // divisible_coresolution verifies the chain rule, the induced
            // identity on homology, and degreewise normal forms internally.
            let res = divisible_coresolution(&c).unwrap();
            let got = res.total.homology_all().unwrap();
            let want: BTreeMap<i64, DivisibleNormalForm> = c
                .homology_all()
                .unwrap()
                .iter()
                .map(|(&k, v)| (k, DivisibleNormalForm::from_finitely_generated(v).unwrap()))
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn direct_sum_with_torsion_level_coresolves() {
        let mut levels = BTreeMap::new();
        levels.insert(0, ModulePresentation::free(z(), 1));
        levels.insert(1, ModulePresentation::cyclic(z(), 4));
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::from_i64(&z(), &[&[2]]));
        let a = Complex::from_parts(z(), levels, diffs).unwrap();
        let b = Complex::concentrated(ModulePresentation::cyclic(z(), 9), 0);
        let c = Complex::direct_sum(&[&a, &b]).unwrap();
        let res = divisible_coresolution(&c).unwrap();
        assert_eq!(res.total.homology_normal_form(0).unwrap(), nf(0, 0, 1, &[9]));
        assert_eq!(res.total.homology_normal_form(1).unwrap(), nf(0, 0, 0, &[2]));
    }
}
