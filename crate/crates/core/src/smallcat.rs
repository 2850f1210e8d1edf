//! Finite categories, functors between them, and comma (slice/coslice)
//! categories. These are the index shapes for diagrams: posets such as the
//! commutative square and its two corner shapes, one-object categories of
//! finite groups, products and disjoint unions.
//!
//! Categories are stored with their full morphism set and composition table;
//! construction validates identities, closure under composition and
//! associativity, so downstream code can rely on the axioms.

use std::collections::BTreeMap;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    pub name: String,
    pub objects: Vec<String>,
    mors: Vec<Morphism>,
    /// `comp[g][f] = g . f`, defined exactly when `src(g) == dst(f)`.
    comp: Vec<Vec<Option<usize>>>,
    ids: Vec<usize>,
}

impl FinCat {
    /// Build and validate a category from objects, morphisms (including
    /// identities) and a composition table given as `((g, f), g.f)` triples.
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        mors: Vec<Morphism>,
        identities: Vec<usize>,
        compositions: Vec<((usize, usize), usize)>,
    ) -> Result<FinCat> {
        let name = name.into();
        let n_obj = objects.len();
        let n_mor = mors.len();
        for m in &mors {
            if m.src >= n_obj || m.dst >= n_obj {
                return Err(Error::NotACategory(format!("{name}: morphism endpoints out of range")));
            }
        }
        if identities.len() != n_obj {
            return Err(Error::NotACategory(format!("{name}: one identity per object required")));
        }
        for (o, &i) in identities.iter().enumerate() {
            if i >= n_mor || mors[i].src != o || mors[i].dst != o {
                return Err(Error::NotACategory(format!("{name}: bad identity for object {o}")));
            }
        }
        let mut comp = vec![vec![None; n_mor]; n_mor];
        for ((g, f), gf) in compositions {
            if g >= n_mor || f >= n_mor || gf >= n_mor {
                return Err(Error::NotACategory(format!("{name}: composition index out of range")));
            }
            comp[g][f] = Some(gf);
        }
        let cat = FinCat { name, objects, mors, comp, ids: identities };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        let n = self.mors.len();
        for g in 0..n {
            for f in 0..n {
                let composable = self.mors[f].dst == self.mors[g].src;
                match self.comp[g][f] {
                    None if composable => {
                        return Err(Error::NotACategory(format!(
                            "{}: missing composite of {} after {}",
                            self.name, self.mors[g].name, self.mors[f].name
                        )))
                    }
                    Some(_) if !composable => {
                        return Err(Error::NotACategory(format!(
                            "{}: composite defined for non-composable pair",
                            self.name
                        )))
                    }
                    Some(gf) => {
                        if self.mors[gf].src != self.mors[f].src
                            || self.mors[gf].dst != self.mors[g].dst
                        {
                            return Err(Error::NotACategory(format!(
                                "{}: composite endpoints wrong",
                                self.name
                            )));
                        }
                    }
                    None => {}
                }
            }
        }
        for (o, &i) in self.ids.iter().enumerate() {
            let _ = o;
            for f in 0..n {
                if self.mors[f].dst == self.mors[i].src && self.comp[i][f] != Some(f) {
                    return Err(Error::NotACategory(format!("{}: left identity fails", self.name)));
                }
                if self.mors[f].src == self.mors[i].dst && self.comp[f][i] != Some(f) {
                    return Err(Error::NotACategory(format!("{}: right identity fails", self.name)));
                }
            }
        }
        for h in 0..n {
            for g in 0..n {
                if self.mors[g].dst != self.mors[h].src {
                    continue;
                }
                for f in 0..n {
                    if self.mors[f].dst != self.mors[g].src {
                        continue;
                    }
                    let hg_f = self.comp[self.comp[h][g].unwrap()][f];
                    let h_gf = self.comp[h][self.comp[g][f].unwrap()];
                    if hg_f != h_gf {
                        return Err(Error::NotACategory(format!(
                            "{}: associativity fails",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.mors.len()
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.mors[m]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.mors
    }

    pub fn identity_of(&self, obj: usize) -> usize {
        self.ids[obj]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.ids.contains(&m)
    }

    /// `g . f` (apply `f` first). Panics on non-composable input; composability
    /// is the caller's invariant.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.comp[g][f].expect("composable morphisms")
    }

    pub fn hom_set(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.mors.len())
            .filter(|&m| self.mors[m].src == a && self.mors[m].dst == b)
            .collect()
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(format!("{} has no object {name}", self.name)))
    }

    /// Is there at most one morphism between any two objects?
    pub fn is_thin(&self) -> bool {
        for a in 0..self.n_objects() {
            for b in 0..self.n_objects() {
                if self.hom_set(a, b).len() > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Connected and exactly one morphism between every ordered pair of
    /// objects: the category is equivalent to the point.
    pub fn is_chaotic(&self) -> bool {
        for a in 0..self.n_objects() {
            for b in 0..self.n_objects() {
                if self.hom_set(a, b).len() != 1 {
                    return false;
                }
            }
        }
        !self.objects.is_empty()
    }

    /// The poset category of a reflexive-transitive relation: one morphism
    /// `a -> b` whenever `leq(a, b)`.
    pub fn poset(
        name: impl Into<String>,
        objects: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<FinCat> {
        let name = name.into();
        let n = objects.len();
        let mut mors = Vec::new();
        let mut index = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    index.insert((a, b), mors.len());
                    let mn = if a == b {
                        format!("id_{}", objects[a])
                    } else {
                        format!("{}->{}", objects[a], objects[b])
                    };
                    mors.push(Morphism { name: mn, src: a, dst: b });
                }
            }
        }
        let ids: Vec<usize> = (0..n)
            .map(|a| {
                index
                    .get(&(a, a))
                    .copied()
                    .ok_or_else(|| Error::NotACategory(format!("{name}: relation not reflexive")))
            })
            .collect::<Result<_>>()?;
        let mut compositions = Vec::new();
        for (&(a, b), &f) in &index {
            for (&(b2, c), &g) in &index {
                if b == b2 {
                    let gf = *index.get(&(a, c)).ok_or_else(|| {
                        Error::NotACategory(format!("{name}: relation not transitive"))
                    })?;
                    compositions.push(((g, f), gf));
                }
            }
        }
        FinCat::new(name, objects, mors, ids, compositions)
    }

    /// The terminal category: one object, one morphism.
    pub fn point() -> FinCat {
        FinCat::poset("e", vec!["*".into()], |_, _| true).expect("point")
    }

    /// The arrow category `0 -> 1`.
    pub fn interval() -> FinCat {
        FinCat::poset("2", vec!["0".into(), "1".into()], |a, b| a <= b).expect("interval")
    }

    /// The commutative square poset on `00, 01, 10, 11` ordered componentwise.
    pub fn square() -> FinCat {
        let names = vec!["00".into(), "01".into(), "10".into(), "11".into()];
        let bits = |x: usize| (x / 2, x % 2);
        FinCat::poset("square", names, move |a, b| {
            let (a1, a2) = bits(a);
            let (b1, b2) = bits(b);
            a1 <= b1 && a2 <= b2
        })
        .expect("square")
    }

    /// The span `01 <- 00 -> 10` (the square minus its terminal corner);
    /// diagrams on it have pushouts as their colimits.
    pub fn pushout_span() -> FinCat {
        let names = vec!["00".into(), "01".into(), "10".into()];
        FinCat::poset("span", names, |a, b| a == b || a == 0).expect("span")
    }

    /// The cospan `01 -> 11 <- 10` (the square minus its initial corner);
    /// diagrams on it have pullbacks as their limits.
    pub fn pullback_cospan() -> FinCat {
        let names = vec!["01".into(), "10".into(), "11".into()];
        FinCat::poset("cospan", names, |a, b| a == b || b == 2).expect("cospan")
    }

    pub fn discrete(n: usize) -> FinCat {
        let names = (0..n).map(|i| i.to_string()).collect();
        FinCat::poset("discrete", names, |a, b| a == b).expect("discrete")
    }

    /// One object with the given group as its endomorphisms. `mul[a][b]` is
    /// the product `a * b`, applied as `b` first (so composition `g . f`
    /// corresponds to the product `g * f`).
    pub fn one_object_group(
        name: impl Into<String>,
        elements: Vec<String>,
        identity: usize,
        mul: &[Vec<usize>],
    ) -> Result<FinCat> {
        let n = elements.len();
        let mors = elements
            .iter()
            .map(|e| Morphism { name: e.clone(), src: 0, dst: 0 })
            .collect();
        let mut compositions = Vec::new();
        for g in 0..n {
            for f in 0..n {
                compositions.push(((g, f), mul[g][f]));
            }
        }
        FinCat::new(name, vec!["*".into()], mors, vec![identity], compositions)
    }

    pub fn product(a: &FinCat, b: &FinCat) -> Result<FinCat> {
        let objects: Vec<String> = a
            .objects
            .iter()
            .flat_map(|x| b.objects.iter().map(move |y| format!("({x},{y})")))
            .collect();
        let obj = |i: usize, j: usize| i * b.n_objects() + j;
        let mut mors = Vec::new();
        let mut index = BTreeMap::new();
        for (i, m1) in a.mors.iter().enumerate() {
            for (j, m2) in b.mors.iter().enumerate() {
                index.insert((i, j), mors.len());
                mors.push(Morphism {
                    name: format!("({},{})", m1.name, m2.name),
                    src: obj(m1.src, m2.src),
                    dst: obj(m1.dst, m2.dst),
                });
            }
        }
        let ids = (0..a.n_objects())
            .flat_map(|i| (0..b.n_objects()).map(move |j| (i, j)))
            .map(|(i, j)| index[&(a.ids[i], b.ids[j])])
            .collect();
        let mut compositions = Vec::new();
        for (&(g1, g2), &g) in &index {
            for (&(f1, f2), &f) in &index {
                if a.mors[f1].dst == a.mors[g1].src && b.mors[f2].dst == b.mors[g2].src {
                    let c = index[&(a.comp[g1][f1].unwrap(), b.comp[g2][f2].unwrap())];
                    compositions.push(((g, f), c));
                }
            }
        }
        FinCat::new(format!("{}x{}", a.name, b.name), objects, mors, ids, compositions)
    }

    /// The opposite category: same objects and morphism names, sources and
    /// targets swapped, composition reversed.
    pub fn opposite(&self) -> FinCat {
        let mors = self
            .mors
            .iter()
            .map(|m| Morphism { name: m.name.clone(), src: m.dst, dst: m.src })
            .collect();
        let n = self.mors.len();
        let mut comp = vec![vec![None; n]; n];
        for g in 0..n {
            for f in 0..n {
                comp[g][f] = self.comp[f][g];
            }
        }
        FinCat {
            name: format!("{}^op", self.name),
            objects: self.objects.clone(),
            mors,
            comp,
            ids: self.ids.clone(),
        }
    }

    pub fn disjoint_union(a: &FinCat, b: &FinCat) -> Result<FinCat> {
        let mut objects = a.objects.clone();
        objects.extend(b.objects.iter().map(|o| format!("{o}'")));
        let oa = a.n_objects();
        let ma = a.mors.len();
        let mut mors = a.mors.clone();
        for m in &b.mors {
            mors.push(Morphism { name: format!("{}'", m.name), src: m.src + oa, dst: m.dst + oa });
        }
        let mut ids = a.ids.clone();
        ids.extend(b.ids.iter().map(|&i| i + ma));
        let mut compositions = Vec::new();
        for g in 0..a.mors.len() {
            for f in 0..a.mors.len() {
                if let Some(gf) = a.comp[g][f] {
                    compositions.push(((g, f), gf));
                }
            }
        }
        for g in 0..b.mors.len() {
            for f in 0..b.mors.len() {
                if let Some(gf) = b.comp[g][f] {
                    compositions.push(((g + ma, f + ma), gf + ma));
                }
            }
        }
        FinCat::new(format!("{}+{}", a.name, b.name), objects, mors, ids, compositions)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub source: FinCat,
    pub target: FinCat,
    pub ob_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl Functor {
    pub fn new(source: FinCat, target: FinCat, ob_map: Vec<usize>, mor_map: Vec<usize>) -> Result<Functor> {
        if ob_map.len() != source.n_objects() || mor_map.len() != source.n_morphisms() {
            return Err(Error::NotAFunctor("object or morphism map has wrong length".into()));
        }
        for (m, &fm) in mor_map.iter().enumerate() {
            let src = &source.mors[m];
            let img = &target.mors[fm];
            if img.src != ob_map[src.src] || img.dst != ob_map[src.dst] {
                return Err(Error::NotAFunctor(format!(
                    "morphism {} maps to one with wrong endpoints",
                    src.name
                )));
            }
        }
        for (o, &io) in source.ids.iter().enumerate() {
            if mor_map[io] != target.ids[ob_map[o]] {
                return Err(Error::NotAFunctor("does not preserve identities".into()));
            }
        }
        for g in 0..source.n_morphisms() {
            for f in 0..source.n_morphisms() {
                if let Some(gf) = source.comp[g][f] {
                    let lhs = mor_map[gf];
                    let rhs = target.comp[mor_map[g]][mor_map[f]].ok_or_else(|| {
                        Error::NotAFunctor("image pair not composable".into())
                    })?;
                    if lhs != rhs {
                        return Err(Error::NotAFunctor("does not preserve composition".into()));
                    }
                }
            }
        }
        Ok(Functor { source, target, ob_map, mor_map })
    }

    pub fn identity(c: &FinCat) -> Functor {
        Functor {
            source: c.clone(),
            target: c.clone(),
            ob_map: (0..c.n_objects()).collect(),
            mor_map: (0..c.n_morphisms()).collect(),
        }
    }

    /// The unique functor to the terminal category.
    pub fn to_point(c: &FinCat) -> Functor {
        let point = FinCat::point();
        Functor {
            source: c.clone(),
            target: point,
            ob_map: vec![0; c.n_objects()],
            mor_map: vec![0; c.n_morphisms()],
        }
    }

    /// A functor into a thin category is determined by its object map.
    pub fn into_thin(source: &FinCat, target: &FinCat, ob_map: Vec<usize>) -> Result<Functor> {
        let mut mor_map = Vec::with_capacity(source.n_morphisms());
        for m in source.morphisms() {
            let homs = target.hom_set(ob_map[m.src], ob_map[m.dst]);
            match homs.as_slice() {
                [unique] => mor_map.push(*unique),
                [] => {
                    return Err(Error::NotAFunctor(format!(
                        "no morphism available for the image of {}",
                        m.name
                    )))
                }
                _ => return Err(Error::NotAFunctor("target is not thin".into())),
            }
        }
        Functor::new(source.clone(), target.clone(), ob_map, mor_map)
    }

    /// Embed one summand of a disjoint union (offsets as produced by
    /// `disjoint_union`).
    pub fn summand_inclusion(part: &FinCat, whole: &FinCat, ob_off: usize, mor_off: usize) -> Result<Functor> {
        Functor::new(
            part.clone(),
            whole.clone(),
            (0..part.n_objects()).map(|o| o + ob_off).collect(),
            (0..part.n_morphisms()).map(|m| m + mor_off).collect(),
        )
    }

    pub fn compose(&self, inner: &Functor) -> Result<Functor> {
        if inner.target != self.source {
            return Err(Error::NotCompatible("functor composition mismatch".into()));
        }
        Functor::new(
            inner.source.clone(),
            self.target.clone(),
            inner.ob_map.iter().map(|&o| self.ob_map[o]).collect(),
            inner.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
        )
    }
}

/// A comma category together with the data tying it to its construction:
/// which object of the diagram shape each comma object projects to, and the
/// structural morphism attached to it.
#[derive(Clone, Debug)]
pub struct CommaData {
    pub category: FinCat,
    /// For `u/j`: pairs `(i, a)` with `a : u(i) -> j`.
    /// For `j/u`: pairs `(i, a)` with `a : j -> u(i)`.
    pub objects: Vec<(usize, usize)>,
    /// The projection to the source of `u`, as an object/morphism map.
    pub project_objects: Vec<usize>,
    pub project_morphisms: Vec<usize>,
}

impl CommaData {
    pub fn object_position(&self, i: usize, a: usize) -> Option<usize> {
        self.objects.iter().position(|&(oi, oa)| oi == i && oa == a)
    }
}

/// The slice `u/j`: objects `(i, a: u(i) -> j)`, morphisms `f: i -> i'` with
/// `a' . u(f) = a`.
pub fn slice(u: &Functor, j: usize) -> Result<CommaData> {
    comma(u, j, true)
}

/// The coslice `j/u`: objects `(i, a: j -> u(i))`, morphisms `f: i -> i'`
/// with `u(f) . a = a'`.
pub fn coslice(u: &Functor, j: usize) -> Result<CommaData> {
    comma(u, j, false)
}

fn comma(u: &Functor, j: usize, over: bool) -> Result<CommaData> {
    let i_cat = &u.source;
    let j_cat = &u.target;
    let mut objects = Vec::new();
    for i in 0..i_cat.n_objects() {
        let ui = u.ob_map[i];
        let homs = if over { j_cat.hom_set(ui, j) } else { j_cat.hom_set(j, ui) };
        for a in homs {
            objects.push((i, a));
        }
    }
    let obj_names: Vec<String> = objects
        .iter()
        .map(|&(i, a)| format!("({},{})", i_cat.objects[i], j_cat.morphism(a).name))
        .collect();
    let mut mors = Vec::new();
    let mut proj_m = Vec::new();
    let mut index = BTreeMap::new();
    for (p, &(i, a)) in objects.iter().enumerate() {
        for (q, &(i2, a2)) in objects.iter().enumerate() {
            for f in i_cat.hom_set(i, i2) {
                let uf = u.mor_map[f];
                let ok = if over {
                    // a2 . u(f) = a
                    j_cat.compose(a2, uf) == a
                } else {
                    // u(f) . a = a2
                    j_cat.compose(uf, a) == a2
                };
                if ok {
                    index.insert((p, q, f), mors.len());
                    mors.push(Morphism {
                        name: format!("{}[{}->{}]", i_cat.morphism(f).name, p, q),
                        src: p,
                        dst: q,
                    });
                    proj_m.push(f);
                }
            }
        }
    }
    let ids = objects
        .iter()
        .enumerate()
        .map(|(p, &(i, _))| index[&(p, p, i_cat.identity_of(i))])
        .collect();
    let mut compositions = Vec::new();
    for (&(p, q, f), &mf) in &index {
        for (&(q2, r, g), &mg) in &index {
            if q == q2 {
                let gf = i_cat.compose(g, f);
                let c = index[&(p, r, gf)];
                compositions.push(((mg, mf), c));
            }
        }
    }
    let category = FinCat::new(
        format!("{}{}{}", u.source.name, if over { "/" } else { "\\" }, j_cat.objects[j]),
        obj_names,
        mors,
        ids,
        compositions,
    )?;
    let project_objects = objects.iter().map(|&(i, _)| i).collect();
    Ok(CommaData { category, objects, project_objects, project_morphisms: proj_m })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes_validate() {
        assert_eq!(FinCat::point().n_morphisms(), 1);
        assert_eq!(FinCat::interval().n_morphisms(), 3);
        let sq = FinCat::square();
        assert_eq!(sq.n_objects(), 4);
        // 4 identities + 4 edges + 1 diagonal
        assert_eq!(sq.n_morphisms(), 9);
        assert!(sq.is_thin());
        assert_eq!(FinCat::pushout_span().n_morphisms(), 5);
        assert_eq!(FinCat::pullback_cospan().n_morphisms(), 5);
    }

    #[test]
    fn square_is_product_of_intervals() {
        let sq = FinCat::product(&FinCat::interval(), &FinCat::interval()).unwrap();
        assert_eq!(sq.n_objects(), 4);
        assert_eq!(sq.n_morphisms(), 9);
        assert!(sq.is_thin());
    }

    #[test]
    fn cyclic_group_category() {
        // C_3 as a one-object category
        let mul = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let c3 = FinCat::one_object_group(
            "BC3",
            vec!["e".into(), "g".into(), "g2".into()],
            0,
            &mul,
        )
        .unwrap();
        assert_eq!(c3.n_morphisms(), 3);
        assert!(!c3.is_thin());
        // broken table is rejected
        let bad = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
        assert!(FinCat::one_object_group("bad", vec!["e".into(), "g".into(), "g2".into()], 0, &bad)
            .is_err());
    }

    #[test]
    fn slice_of_square_corner() {
        // inclusion of the span into the square; slice over the terminal corner
        let span = FinCat::pushout_span();
        let sq = FinCat::square();
        let u = Functor::into_thin(&span, &sq, vec![0, 1, 2]).unwrap();
        let s = slice(&u, 3).unwrap();
        // every span object admits exactly one map to the corner
        assert_eq!(s.category.n_objects(), 3);
        assert!(s.category.is_thin());
        // and the slice is the span again
        assert_eq!(s.category.hom_set(0, 1).len(), 1);
        assert_eq!(s.category.hom_set(0, 2).len(), 1);
        assert_eq!(s.category.hom_set(1, 2).len(), 0);
    }

    #[test]
    fn coslice_of_group_point_is_chaotic() {
        // the coslice of e -> BG is the translation groupoid of G acting on
        // itself: exactly one morphism between any two objects
        let mul = vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ];
        let names = vec!["e".into(), "a".into(), "b".into(), "ab".into()];
        let bg = FinCat::one_object_group("BV4", names, 0, &mul).unwrap();
        let under = coslice(&Functor::identity(&bg), 0).unwrap();
        assert_eq!(under.category.n_objects(), 4);
        assert!(under.category.is_chaotic());
        let over = slice(&Functor::identity(&bg), 0).unwrap();
        assert!(over.category.is_chaotic());
        // the comma categories of the point inclusion are discrete with one
        // object per group element
        let pt = Functor::new(FinCat::point(), bg, vec![0], vec![0]).unwrap();
        let fiber = coslice(&pt, 0).unwrap();
        assert_eq!(fiber.category.n_objects(), 4);
        assert_eq!(fiber.category.n_morphisms(), 4);
    }

    #[test]
    fn disjoint_union_splits() {
        let two = FinCat::disjoint_union(&FinCat::interval(), &FinCat::point()).unwrap();
        assert_eq!(two.n_objects(), 3);
        assert_eq!(two.n_morphisms(), 4);
        assert!(two.hom_set(0, 2).is_empty());
        let incl = Functor::summand_inclusion(&FinCat::interval(), &two, 0, 0).unwrap();
        assert_eq!(incl.ob_map, vec![0, 1]);
    }

    #[test]
    fn functor_validation_catches_errors() {
        let i = FinCat::interval();
        let p = FinCat::point();
        // fine: collapse
        assert!(Functor::into_thin(&i, &p, vec![0, 0]).is_ok());
        // broken: send 0 -> 1, 1 -> 0 in the interval (no morphism 1 -> 0)
        assert!(Functor::into_thin(&i, &i, vec![1, 0]).is_err());
    }
}
