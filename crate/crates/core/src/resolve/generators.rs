//! Greedy selection of diagram generators and separating functionals.
//!
//! Both run over a functor on a finite shape given by ambient presentations
//! and transition matrices (one per shape morphism, identities included).
//! `covering_generators` picks elements whose translates span prescribed
//! target columns at every object modulo relations; that is exactly what a
//! surjection from a sum of representables needs. `separating_functionals`
//! is the field dual: it picks functionals whose pulled-back constraint rows
//! cut each object's module down to zero, which is what an embedding into a
//! sum of corepresentables needs.

use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::ModulePresentation;
use crate::exactalg::ring::{CoeffRing, Scalar};
use crate::exactalg::snf;
use crate::smallcat::FinCat;
use crate::{Error, Result};

pub(crate) fn column_matrix(ring: &CoeffRing, v: &[Scalar]) -> Matrix {
    let mut m = Matrix::zero(ring.clone(), v.len(), 1);
    for (r, s) in v.iter().enumerate() {
        m.set(r, 0, s.clone());
    }
    m
}

pub(crate) fn row_matrix(ring: &CoeffRing, v: &[Scalar]) -> Matrix {
    let mut m = Matrix::zero(ring.clone(), 1, v.len());
    for (c, s) in v.iter().enumerate() {
        m.set(0, c, s.clone());
    }
    m
}

fn rank(m: &Matrix) -> Result<usize> {
    Ok(m.cols - snf::kernel(m)?.cols)
}

/// Pick pairs `(object, ambient column)` such that the translates of the
/// chosen columns along all shape morphisms, together with the ambient
/// relations, span every column of `targets[j]` at every object `j`.
///
/// One pass suffices: spans only grow, and propagating a new pick along every
/// morphism out of its object covers all composite translates at once because
/// hom sets are closed under composition.
pub fn covering_generators(
    shape: &FinCat,
    ambients: &[ModulePresentation],
    transitions: &[Matrix],
    targets: &[Matrix],
) -> Result<Vec<(usize, Vec<Scalar>)>> {
    let n = shape.n_objects();
    if ambients.len() != n || targets.len() != n || transitions.len() != shape.n_morphisms() {
        return Err(Error::NotCompatible(
            "covering_generators: data does not match the shape".into(),
        ));
    }
    let mut spans: Vec<Matrix> = ambients.iter().map(|m| m.relation_columns()).collect();
    let mut chosen = Vec::new();
    for j in 0..n {
        for col in 0..targets[j].cols {
            let v = targets[j].column(col);
            if snf::in_colspan(&spans[j], &v)? {
                continue;
            }
            let vm = column_matrix(&ambients[j].ring, &v);
            for m in 0..shape.n_morphisms() {
                if shape.morphism(m).src != j {
                    continue;
                }
                let dst = shape.morphism(m).dst;
                let img = transitions[m].mul(&vm);
                spans[dst] = Matrix::hstack(&[&spans[dst], &img]);
            }
            chosen.push((j, v));
        }
    }
    Ok(chosen)
}

/// Pick pairs `(object, functional row)` over a field such that at every
/// object `j` the constraint rows `phi . S(f)` for all chosen `(i, phi)` and
/// all `f: j -> i` have rank equal to the dimension of the module at `j`.
/// Each functional vanishes on its object's relations, so the constraints cut
/// out exactly the relation span: the induced map into the corresponding sum
/// of corepresentables is injective.
pub fn separating_functionals(
    shape: &FinCat,
    modules: &[ModulePresentation],
    transitions: &[Matrix],
) -> Result<Vec<(usize, Vec<Scalar>)>> {
    let n = shape.n_objects();
    if modules.len() != n || transitions.len() != shape.n_morphisms() {
        return Err(Error::NotCompatible(
            "separating_functionals: data does not match the shape".into(),
        ));
    }
    let ring = if n > 0 {
        modules[0].ring.clone()
    } else {
        return Ok(Vec::new());
    };
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(
            "separating functionals need field coefficients".into(),
        ));
    }
    let mut dims = Vec::with_capacity(n);
    for m in modules {
        dims.push(m.gens - rank(&m.relation_columns())?);
    }
    // psi[j] collects the constraint rows accumulated so far at j.
    let mut psi: Vec<Matrix> = modules
        .iter()
        .map(|m| Matrix::zero(ring.clone(), 0, m.gens))
        .collect();
    // A functional at i constrains every j with a morphism j -> i, so on
    // ties prefer objects reached by more morphisms.
    let mut incoming = vec![0usize; n];
    for m in 0..shape.n_morphisms() {
        incoming[shape.morphism(m).dst] += 1;
    }
    let mut chosen: Vec<(usize, Vec<Scalar>)> = Vec::new();
    loop {
        let mut worst: Option<(usize, usize)> = None;
        for j in 0..n {
            let deficiency = dims[j] - rank(&psi[j].transpose())?;
            if deficiency == 0 {
                continue;
            }
            let better = match worst {
                None => true,
                Some((wj, wd)) => {
                    deficiency > wd || (deficiency == wd && incoming[j] > incoming[wj])
                }
            };
            if better {
                worst = Some((j, deficiency));
            }
        }
        let (jstar, _) = match worst {
            Some(w) => w,
            None => break,
        };
        // Functionals on the module at jstar are the null space of the
        // transposed relations; take the first one adding rank.
        let candidates = snf::kernel(&modules[jstar].relation_columns().transpose())?;
        let psit = psi[jstar].transpose();
        let mut pick = None;
        for c in 0..candidates.cols {
            let phi = candidates.column(c);
            if !snf::in_colspan(&psit, &phi)? {
                pick = Some(phi);
                break;
            }
        }
        let phi = pick.ok_or_else(|| {
            Error::NotCompatible("separating_functionals: no independent functional".into())
        })?;
        let phirow = row_matrix(&ring, &phi);
        for m in 0..shape.n_morphisms() {
            if shape.morphism(m).dst != jstar {
                continue;
            }
            let src = shape.morphism(m).src;
            let row = phirow.mul(&transitions[m]);
            psi[src] = Matrix::vstack(&[&psi[src], &row]);
        }
        chosen.push((jstar, phi));
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ring::CoeffRing;

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

    fn f2() -> CoeffRing {
        CoeffRing::PrimeField(2)
    }

    #[test]
    fn covers_regular_representation_with_one_generator() {
        // Over BC3 the free rank-1 module at the object is generated by any
        // single basis vector: its orbit is the whole basis.
        let c3 = FinCat::one_object_group(
            "BC3",
            vec!["e".into(), "g".into(), "g2".into()],
            0,
            &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        )
        .unwrap();
        let cells = super::super::cells::CellBasis::new(&c3, vec![0]);
        let ambient = vec![cells.presentation_at(&z(), 0)];
        let transitions: Vec<Matrix> = (0..3).map(|m| cells.transition(&z(), m)).collect();
        let targets = vec![Matrix::identity(z(), 3)];
        let picks = covering_generators(&c3, &ambient, &transitions, &targets).unwrap();
        assert_eq!(picks.len(), 1);
    }

    #[test]
    fn covers_interval_diagram_minimally() {
        // The diagram Z --2--> Z over the interval needs a generator at each
        // object: the image of the first only spans 2Z at object 1.
        let two = FinCat::interval();
        let ambient = vec![
            ModulePresentation::free(z(), 1),
            ModulePresentation::free(z(), 1),
        ];
        let transitions = vec![
            Matrix::identity(z(), 1),
            Matrix::from_i64(&z(), &[&[2]]),
            Matrix::identity(z(), 1),
        ];
        let targets = vec![Matrix::identity(z(), 1), Matrix::identity(z(), 1)];
        let picks = covering_generators(&two, &ambient, &transitions, &targets).unwrap();
        assert_eq!(picks.len(), 2);
        assert_eq!(picks[0].0, 0);
        assert_eq!(picks[1].0, 1);
    }

    #[test]
    fn one_functional_separates_the_regular_representation() {
        // k[C_2] over F_2 embeds in a single cofree block: the functional
        // dual to one basis vector separates points through translation.
        let c2 = FinCat::one_object_group(
            "BC2",
            vec!["e".into(), "s".into()],
            0,
            &[vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let cells = super::super::cells::CellBasis::new(&c2, vec![0]);
        let modules = vec![cells.presentation_at(&f2(), 0)];
        let transitions: Vec<Matrix> = (0..2).map(|m| cells.transition(&f2(), m)).collect();
        let picks = separating_functionals(&c2, &modules, &transitions).unwrap();
        assert_eq!(picks.len(), 1);
    }

    #[test]
    fn trivial_module_needs_one_functional() {
        // The trivial C_2 module k (both group elements act as 1) is one
        // dimensional; a single functional suffices and vanishing rows on the
        // relation span are respected.
        let c2 = FinCat::one_object_group(
            "BC2",
            vec!["e".into(), "s".into()],
            0,
            &[vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let modules = vec![ModulePresentation::free(f2(), 1)];
        let transitions = vec![Matrix::identity(f2(), 1), Matrix::identity(f2(), 1)];
        let picks = separating_functionals(&c2, &modules, &transitions).unwrap();
        assert_eq!(picks.len(), 1);
    }
}
