//! Bases for levelwise-representable and levelwise-corepresentable diagrams.
//!
//! A cell is an object `i` of the shape; it contributes the representable
//! diagram `j |-> free module on Hom(i, j)`. Sums of representables are the
//! projective levels used by resolutions: a map out of one is fixed by where
//! each cell's identity column goes, and transitions permute hom columns
//! strictly, so functoriality of anything built on them is exact, not just
//! exact modulo relations. Cocells are the dual (`j |-> free on Hom(j, i)`)
//! and give the cofree levels of coresolutions over fields.

use crate::exactalg::matrix::Matrix;
use crate::exactalg::presentation::ModulePresentation;
use crate::exactalg::ring::CoeffRing;
use crate::smallcat::FinCat;

/// A finite sum of representables over a fixed shape. Basis columns at object
/// `j` are pairs `(cell, f)` with `f` in `Hom(cells[cell], j)`, ordered by
/// cell and then by the shape's hom-set enumeration.
#[derive(Clone, Debug)]
pub struct CellBasis {
    pub shape: FinCat,
    pub cells: Vec<usize>,
    homs: Vec<Vec<Vec<usize>>>,
}

impl CellBasis {
    pub fn new(shape: &FinCat, cells: Vec<usize>) -> Self {
        let homs = cells
            .iter()
            .map(|&i| {
                (0..shape.n_objects())
                    .map(|j| shape.hom_set(i, j))
                    .collect()
            })
            .collect();
        CellBasis {
            shape: shape.clone(),
            cells,
            homs,
        }
    }

    pub fn empty(shape: &FinCat) -> Self {
        CellBasis::new(shape, Vec::new())
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn size_at(&self, j: usize) -> usize {
        self.homs.iter().map(|h| h[j].len()).sum()
    }

    pub fn offset(&self, cell: usize, j: usize) -> usize {
        self.homs[..cell].iter().map(|h| h[j].len()).sum()
    }

    /// Index of the basis column `(cell, f)` at the object `f` points to.
    pub fn position(&self, cell: usize, f: usize) -> usize {
        let j = self.shape.morphism(f).dst;
        let k = self.homs[cell][j]
            .iter()
            .position(|&m| m == f)
            .expect("morphism not in the cell's hom set");
        self.offset(cell, j) + k
    }

    pub fn hom(&self, cell: usize, j: usize) -> &[usize] {
        &self.homs[cell][j]
    }

    pub fn presentation_at(&self, ring: &CoeffRing, j: usize) -> ModulePresentation {
        ModulePresentation::free(ring.clone(), self.size_at(j))
    }

    /// Transition along `m: j -> j2`, sending `(c, f)` to `(c, m . f)`.
    /// Strictly functorial because the shape's composition is.
    pub fn transition(&self, ring: &CoeffRing, m: usize) -> Matrix {
        let mor = self.shape.morphism(m).clone();
        let mut t = Matrix::zero(ring.clone(), self.size_at(mor.dst), self.size_at(mor.src));
        let one = ring.one();
        for (c, h) in self.homs.iter().enumerate() {
            for (k, &f) in h[mor.src].iter().enumerate() {
                let g = self.shape.compose(m, f);
                t.set(self.position(c, g), self.offset(c, mor.src) + k, one.clone());
            }
        }
        t
    }
}

/// A finite sum of corepresentables: basis columns at `j` are pairs `(cell,
/// f)` with `f` in `Hom(j, cells[cell])`. Over a field these are the cofree
/// (injective) diagram levels.
#[derive(Clone, Debug)]
pub struct CocellBasis {
    pub shape: FinCat,
    pub cells: Vec<usize>,
    homs: Vec<Vec<Vec<usize>>>,
}

impl CocellBasis {
    pub fn new(shape: &FinCat, cells: Vec<usize>) -> Self {
        let homs = cells
            .iter()
            .map(|&i| {
                (0..shape.n_objects())
                    .map(|j| shape.hom_set(j, i))
                    .collect()
            })
            .collect();
        CocellBasis {
            shape: shape.clone(),
            cells,
            homs,
        }
    }

    pub fn empty(shape: &FinCat) -> Self {
        CocellBasis::new(shape, Vec::new())
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn size_at(&self, j: usize) -> usize {
        self.homs.iter().map(|h| h[j].len()).sum()
    }

    pub fn offset(&self, cell: usize, j: usize) -> usize {
        self.homs[..cell].iter().map(|h| h[j].len()).sum()
    }

    /// Index of the basis column `(cell, f)` at the object `f` starts from.
    pub fn position(&self, cell: usize, f: usize) -> usize {
        let j = self.shape.morphism(f).src;
        let k = self.homs[cell][j]
            .iter()
            .position(|&m| m == f)
            .expect("morphism not in the cell's hom set");
        self.offset(cell, j) + k
    }

    pub fn hom(&self, cell: usize, j: usize) -> &[usize] {
        &self.homs[cell][j]
    }

    pub fn presentation_at(&self, ring: &CoeffRing, j: usize) -> ModulePresentation {
        ModulePresentation::free(ring.clone(), self.size_at(j))
    }

    /// Transition along `m: j -> j2`, sending the indicator of `f: j -> i` to
    /// the sum of indicators of all `f2: j2 -> i` with `f2 . m = f`.
    pub fn transition(&self, ring: &CoeffRing, m: usize) -> Matrix {
        let mor = self.shape.morphism(m).clone();
        let mut t = Matrix::zero(ring.clone(), self.size_at(mor.dst), self.size_at(mor.src));
        let one = ring.one();
        for (c, h) in self.homs.iter().enumerate() {
            for &f2 in &h[mor.dst] {
                let f = self.shape.compose(f2, m);
                t.set(self.position(c, f2), self.position(c, f), one.clone());
            }
        }
        t
    }
}
