//! Seeded random diagrams of complexes, shared by the randomized axiom and
//! stability suites. Chain-level randomness comes from `complexes::random`;
//! this module assembles diagrams out of summands and null-homotopic noise,
//! so the homotopy-level answers are known by construction.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::complexes::{random_matrix, ChainMap, Complex};
use crate::diagrams::DiagramComplex;
use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::ModulePresentation;
use crate::exactalg::ring::CoeffRing;
use crate::smallcat::FinCat;
use crate::{Error, Result};

/// A random complex in degrees -1 and 0 with free levels of rank at most
/// `max_rank` (any differential squares to zero).
pub(crate) fn rand_two_term(rng: &mut ChaCha8Rng, ring: &CoeffRing, max_rank: usize) -> Complex {
    let a = rng.gen_range(1..=max_rank.max(1));
    let b = rng.gen_range(1..=max_rank.max(1));
    let mut levels = BTreeMap::new();
    levels.insert(-1, ModulePresentation::free(ring.clone(), a));
    levels.insert(0, ModulePresentation::free(ring.clone(), b));
    let mut diffs = BTreeMap::new();
    diffs.insert(-1, random_matrix(ring, rng, b, a, 2));
    Complex::from_parts(ring.clone(), levels, diffs).unwrap()
}

/// A random null-homotopic chain map `d sigma + sigma d`.
pub(crate) fn rand_null_map(rng: &mut ChaCha8Rng, src: &Complex, dst: &Complex) -> ChainMap {
    let ring = src.ring.clone();
    let mut sigma = BTreeMap::new();
    for n in src.support() {
        sigma.insert(n, random_matrix(&ring, rng, dst.gens_at(n - 1), src.gens_at(n), 2));
    }
    let zero_at = |n: i64| Matrix::zero(ring.clone(), 0, src.gens_at(n));
    let mut maps = BTreeMap::new();
    for n in src.support() {
        let s_n = sigma.get(&n).cloned().unwrap_or_else(|| zero_at(n));
        let mut m = dst.differential(n - 1).mul(&s_n);
        if let Some(s_next) = sigma.get(&(n + 1)) {
            m = m.add(&s_next.mul(&src.differential(n)));
        }
        if m.rows == 0 || m.cols == 0 {
            continue;
        }
        maps.insert(n, m);
    }
    ChainMap::new(src.clone(), dst.clone(), maps).unwrap()
}

/// Inclusion of the `k`-th summand into the direct sum of `parts`.
pub(crate) fn summand_inclusion(parts: &[&Complex], k: usize) -> Result<ChainMap> {
    let sum = Complex::direct_sum(parts)?;
    let ring = sum.ring.clone();
    let mut maps = BTreeMap::new();
    for n in parts[k].support() {
        let mut m = Matrix::zero(ring.clone(), sum.gens_at(n), parts[k].gens_at(n));
        let off: usize = parts[..k].iter().map(|p| p.gens_at(n)).sum();
        m.set_block(off, 0, &Matrix::identity(ring.clone(), parts[k].gens_at(n)));
        maps.insert(n, m);
    }
    ChainMap::new(parts[k].clone(), sum, maps)
}

/// Projection of the direct sum of `parts` onto the `k`-th summand.
pub(crate) fn summand_projection(parts: &[&Complex], k: usize) -> Result<ChainMap> {
    let sum = Complex::direct_sum(parts)?;
    let ring = sum.ring.clone();
    let mut maps = BTreeMap::new();
    for n in parts[k].support() {
        let mut m = Matrix::zero(ring.clone(), parts[k].gens_at(n), sum.gens_at(n));
        let off: usize = parts[..k].iter().map(|p| p.gens_at(n)).sum();
        m.set_block(0, off, &Matrix::identity(ring.clone(), parts[k].gens_at(n)));
        maps.insert(n, m);
    }
    ChainMap::new(sum, parts[k].clone(), maps)
}

/// A random span sharing a common summand between the apex and each leg, so
/// the legs are summand projections perturbed by null-homotopic noise.
pub(crate) fn rand_span(rng: &mut ChaCha8Rng, ring: &CoeffRing) -> Result<DiagramComplex> {
    let c1 = rand_two_term(rng, ring, 2);
    let c2 = rand_two_term(rng, ring, 2);
    let c3 = rand_two_term(rng, ring, 2);
    let apex = Complex::direct_sum(&[&c1, &c2])?;
    let left = Complex::direct_sum(&[&c1, &c3])?;
    let right = c2.clone();
    let to_left = summand_inclusion(&[&c1, &c3], 0)?
        .compose(&summand_projection(&[&c1, &c2], 0)?)?
        .add(&rand_null_map(rng, &apex, &left))?;
    let to_right =
        summand_projection(&[&c1, &c2], 1)?.add(&rand_null_map(rng, &apex, &right))?;
    let mut maps = BTreeMap::new();
    maps.insert(1, to_left);
    maps.insert(2, to_right);
    DiagramComplex::new(FinCat::pushout_span(), vec![apex, left, right], maps)
}

/// A random cospan, dual to `rand_span`.
pub(crate) fn rand_cospan(rng: &mut ChaCha8Rng, ring: &CoeffRing) -> Result<DiagramComplex> {
    let c1 = rand_two_term(rng, ring, 2);
    let c2 = rand_two_term(rng, ring, 2);
    let c3 = rand_two_term(rng, ring, 2);
    let target = Complex::direct_sum(&[&c1, &c2])?;
    let left = Complex::direct_sum(&[&c1, &c3])?;
    let right = c2.clone();
    let from_left = summand_inclusion(&[&c1, &c2], 0)?
        .compose(&summand_projection(&[&c1, &c3], 0)?)?
        .add(&rand_null_map(rng, &left, &target))?;
    let from_right =
        summand_inclusion(&[&c1, &c2], 1)?.add(&rand_null_map(rng, &right, &target))?;
    let mut maps = BTreeMap::new();
    maps.insert(1, from_left);
    maps.insert(3, from_right);
    DiagramComplex::new(FinCat::pullback_cospan(), vec![left, right, target], maps)
}

/// A random chain map placed on the walking arrow.
pub(crate) fn rand_arrow(rng: &mut ChaCha8Rng, ring: &CoeffRing) -> Result<DiagramComplex> {
    let src = rand_two_term(rng, ring, 2);
    let tgt = rand_two_term(rng, ring, 2);
    let f = rand_null_map(rng, &src, &tgt);
    let mut maps = BTreeMap::new();
    maps.insert(1, f);
    DiagramComplex::new(FinCat::interval(), vec![src, tgt], maps)
}

/// A random diagram on a one-object shape whose single nonidentity arrow
/// squares to the identity: the complex `(C1 + C1) + C2` with the involution
/// swapping the two `C1` summands.
pub(crate) fn rand_involution_diagram(
    rng: &mut ChaCha8Rng,
    ring: &CoeffRing,
    shape: &FinCat,
) -> Result<DiagramComplex> {
    let nonid: Vec<usize> = (0..shape.n_morphisms()).filter(|&m| !shape.is_identity(m)).collect();
    let ok = shape.n_objects() == 1
        && nonid.len() == 1
        && shape.is_identity(shape.compose(nonid[0], nonid[0]));
    if !ok {
        return Err(Error::ShapeMismatch(
            "involution diagram needs one object and one arrow squaring to the identity".into(),
        ));
    }
    let c1 = rand_two_term(rng, ring, 1);
    let c2 = rand_two_term(rng, ring, 1);
    let sum = Complex::direct_sum(&[&c1, &c1, &c2])?;
    let mut maps = BTreeMap::new();
    for n in sum.support() {
        let a = c1.gens_at(n);
        let c = c2.gens_at(n);
        let mut m = Matrix::zero(ring.clone(), 2 * a + c, 2 * a + c);
        m.set_block(0, a, &Matrix::identity(ring.clone(), a));
        m.set_block(a, 0, &Matrix::identity(ring.clone(), a));
        m.set_block(2 * a, 2 * a, &Matrix::identity(ring.clone(), c));
        maps.insert(n, m);
    }
    let swap = ChainMap::new(sum.clone(), sum.clone(), maps)?;
    let mut edges = BTreeMap::new();
    edges.insert(nonid[0], swap);
    DiagramComplex::new(shape.clone(), vec![sum], edges)
}

/// A random family `tau_n : C^n -> C^{n-1}` over the support of `C`.
pub(crate) fn rand_self_homotopy(rng: &mut ChaCha8Rng, c: &Complex) -> BTreeMap<i64, Matrix> {
    let mut tau = BTreeMap::new();
    for n in c.support() {
        tau.insert(n, random_matrix(&c.ring, rng, c.gens_at(n - 1), c.gens_at(n), 1));
    }
    tau
}

/// `id + d tau + tau d` for a given `tau`: a quasi-isomorphism homotopic to
/// the identity, but rarely equal to it.
pub(crate) fn perturbed_identity_from(
    c: &Complex,
    tau: &BTreeMap<i64, Matrix>,
) -> Result<ChainMap> {
    let ring = c.ring.clone();
    let mut maps = BTreeMap::new();
    for n in c.support() {
        let mut m = Matrix::identity(ring.clone(), c.gens_at(n));
        if let Some(t) = tau.get(&n) {
            m = m.add(&c.differential(n - 1).mul(t));
        }
        if let Some(t) = tau.get(&(n + 1)) {
            m = m.add(&t.mul(&c.differential(n)));
        }
        maps.insert(n, m);
    }
    ChainMap::new(c.clone(), c.clone(), maps)
}

pub(crate) fn perturbed_identity(rng: &mut ChaCha8Rng, c: &Complex) -> Result<ChainMap> {
    let tau = rand_self_homotopy(rng, c);
    perturbed_identity_from(c, &tau)
}
