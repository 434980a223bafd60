//! The tropical coamoeba of the mirror of projective space, its directed
//! category, covers labelled by torus characters, and finite quotients.
//!
//! Cover objects are pairs `(i, label)` where the label of the tile
//! `P_i + lambda` is `chi(lambda) - (i - 1) w(e_{n+1})` and
//! `chi(g_b) = w(e_{n+1}) - w(e_b)`. Labels are computed from tile
//! positions; that they satisfy the weight rule of the exterior side is
//! something the tests check rather than assume.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde_json::json;

use crate::ainfinity::{check_a_infinity, AInfCategory, GradedSpace, Mor};
use crate::beilinson::{Character, WeightConvention};
use crate::error::{Error, Result};
use crate::exactlinalg::Q;
use crate::permutohedron::{codim2_neighbors, facet_to_wedge, neighbor_translation, Division, TorusTessellation};

#[derive(Clone, Debug)]
pub struct TropicalCoamoeba {
    pub tessellation: TorusTessellation,
    /// `|B2|` for every facet `B1 | B2` of the base tile.
    pub deg: BTreeMap<Division, i32>,
    /// Sign of every codimension-two face `B1 | B2' | B2` of the base
    /// tile, where `B2` is crossed first.
    pub sgn: BTreeMap<Division, i32>,
}

impl TropicalCoamoeba {
    pub fn n(&self) -> usize {
        self.tessellation.n
    }

    /// Facets of the torus decomposition, each counted once.
    pub fn num_facet_classes(&self) -> usize {
        self.tessellation.num_cells() * self.deg.len() / 2
    }

    /// Base facets of degree `k`, in the order used for morphism bases.
    pub fn facets_of_degree(&self, k: usize) -> Vec<&Division> {
        self.tessellation.base.facets.iter().filter(|f| f.b2().len() == k).collect()
    }
}

fn sort_sign(first: &[usize], second: &[usize]) -> i32 {
    // Parity of the shuffle putting `first ++ second` in order.
    let inversions: usize = first.iter().map(|a| second.iter().filter(|&&b| b < *a).count()).sum();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn build_coamoeba(n: usize) -> Result<TropicalCoamoeba> {
    let tessellation = TorusTessellation::build(n)?;
    let deg: BTreeMap<Division, i32> =
        tessellation.base.facets.iter().map(|f| (f.clone(), f.b2().len() as i32)).collect();
    let mut sgn = BTreeMap::new();
    for e in &tessellation.base.codim2 {
        let (b2p, b2) = (&e.blocks()[1], &e.blocks()[2]);
        // e_{B2'} ^ e_{B2} = eps e_{B2 u B2'}
        let eps = sort_sign(b2p, b2);
        let s = if b2.len() % 2 == 0 { eps } else { -eps };
        let nb = codim2_neighbors(e)?;
        let (d1, d2, d0) = (deg[&nb.first.facet], deg[&nb.second.facet], deg[&nb.composite.facet]);
        if d0 != d1 + d2 {
            return Err(Error::SignInconsistency(n));
        }
        let (u, v, w) = (facet_to_wedge(&nb.first.facet)?, facet_to_wedge(&nb.second.facet)?, facet_to_wedge(&nb.composite.facet)?);
        let (p, prod) = v.wedge(u).ok_or(Error::SignInconsistency(n))?;
        let parity = if b2.len() % 2 == 0 { 1 } else { -1 };
        if prod != w || p * s * parity != 1 {
            return Err(Error::SignInconsistency(n));
        }
        sgn.insert(e.clone(), s);
    }
    Ok(TropicalCoamoeba { tessellation, deg, sgn })
}

/// Object id of the torus cell `P_i`.
pub fn cell_object(i: usize) -> String {
    format!("P{i}")
}

/// `(target cell, lambda step)` when crossing facet `b2` out of cell `i`.
pub fn facet_step(t: &TorusTessellation, i: usize, f: &Division) -> Result<(usize, Vec<i64>)> {
    let v = t.cells[i - 1].add(&neighbor_translation(f)?);
    t.cell_of_translate(&v).ok_or_else(|| Error::InvalidArgument("neighbour translate outside the tile lattice".into()))
}

fn unit_space() -> GradedSpace {
    GradedSpace::from_basis([("id".to_string(), 0)]).expect("single basis element")
}

/// Adds `m_2` constants for every codimension-two face, given a lookup of
/// the basis index of a facet leaving object `a`.
fn add_face_products(
    cat: &mut AInfCategory,
    g: &TropicalCoamoeba,
    cell_of: &dyn Fn(usize) -> usize,
    out_facet: &dyn Fn(usize, &Division) -> Option<(usize, usize)>,
) -> Result<()> {
    let n = g.n();
    for a in 0..cat.num_objects() {
        for e in &g.tessellation.base.codim2 {
            let nb = codim2_neighbors(e)?;
            if cell_of(a) + nb.composite.facet.b2().len() > n + 1 {
                continue;
            }
            let Some((b, i1)) = out_facet(a, &nb.first.facet) else { continue };
            let Some((c, i2)) = out_facet(b, &nb.second.facet) else { continue };
            let (c0, i0) = out_facet(a, &nb.composite.facet).ok_or(Error::SignInconsistency(n))?;
            if c0 != c {
                return Err(Error::SignInconsistency(n));
            }
            cat.add_op(vec![Mor::new(b, c, i2), Mor::new(a, b, i1)], i0, Q::from_integer(g.sgn[e].into()))?;
        }
    }
    Ok(())
}

fn finish(mut cat: AInfCategory, n: usize) -> Result<AInfCategory> {
    cat.add_strict_units()?;
    if !check_a_infinity(&cat, 3).passed() {
        return Err(Error::SignInconsistency(n));
    }
    Ok(cat)
}

/// The directed category on `P_1 < ... < P_{n+1}`.
pub fn category_of(g: &TropicalCoamoeba) -> Result<AInfCategory> {
    let n = g.n();
    let m = n + 1;
    let mut cat = AInfCategory::new((1..=m).map(cell_object))?;
    let mut index: HashMap<(usize, Division), (usize, usize)> = HashMap::new();
    for i in 1..=m {
        cat.set_hom(i - 1, i - 1, unit_space())?;
        cat.set_unit(i - 1, 0)?;
        for j in i + 1..=m {
            let facets = g.facets_of_degree(j - i);
            let space = GradedSpace::from_basis(facets.iter().map(|f| (f.to_string(), g.deg[*f])))?;
            cat.set_hom(i - 1, j - 1, space)?;
            for (k, f) in facets.iter().enumerate() {
                index.insert((i - 1, (*f).clone()), (j - 1, k));
                cat.set_provenance(
                    Mor::new(i - 1, j - 1, k),
                    json!({ "division": f.blocks(), "wedge": facet_to_wedge(f)?.name() }),
                );
            }
        }
    }
    add_face_products(&mut cat, g, &|a| a + 1, &|a, f| index.get(&(a, f.clone())).copied())?;
    finish(cat, n)
}

/// `label(i, lambda) = chi(lambda) - (i - 1) w(e_{n+1})`.
#[derive(Clone, Debug)]
pub struct LabelMap {
    pub weights: WeightConvention,
}

impl LabelMap {
    pub fn new(weights: WeightConvention) -> Self {
        LabelMap { weights }
    }

    fn top(&self) -> &Character {
        &self.weights.weights[self.weights.dim() - 1]
    }

    pub fn chi(&self, lambda: &[i64]) -> Character {
        let top = self.top();
        lambda
            .iter()
            .enumerate()
            .fold(Character::zero(self.weights.rank()), |acc, (b, &x)| acc.add(&top.sub(&self.weights.weights[b]).scale(x)))
    }

    pub fn offset(&self, i: usize) -> Character {
        self.top().scale(-(i as i64 - 1))
    }

    pub fn label(&self, i: usize, lambda: &[i64]) -> Character {
        self.chi(lambda).add(&self.offset(i))
    }

    /// Label change along facet `f` out of cell `i`, from tile geometry.
    pub fn step(&self, t: &TorusTessellation, i: usize, f: &Division) -> Result<(usize, Character)> {
        let (j, dl) = facet_step(t, i, f)?;
        Ok((j, self.chi(&dl).add(&self.offset(j)).sub(&self.offset(i))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// Tiles `P_i + lambda` with `lambda` in a box, labelled by characters
    /// of the full torus.
    Full,
    /// Labels under the circle acting on `e_{n+1}` only, in a box.
    OneParameter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverWindow {
    pub kind: CoverKind,
    pub radius: i64,
}

impl Default for CoverWindow {
    fn default() -> Self {
        CoverWindow { kind: CoverKind::Full, radius: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoverObject {
    pub cell: usize,
    pub label: Vec<i64>,
    /// Tile translate in `g_b` coordinates, when the label determines it.
    pub lambda: Option<Vec<i64>>,
}

impl CoverObject {
    pub fn id(&self) -> String {
        let l: Vec<String> = self.label.iter().map(i64::to_string).collect();
        format!("P{}[{}]", self.cell, l.join(","))
    }
}

fn box_points(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| (-radius..=radius).map(move |x| {
                let mut q = p.clone();
                q.push(x);
                q
            }))
            .collect();
    }
    out
}

/// Cover objects of a window, sorted by `(cell, label)`.
pub fn window_objects(g: &TropicalCoamoeba, w: &CoverWindow) -> Vec<CoverObject> {
    let n = g.n();
    let mut objs: Vec<CoverObject> = match w.kind {
        CoverKind::Full => {
            let lm = LabelMap::new(WeightConvention::full(n));
            (1..=n + 1)
                .flat_map(|i| {
                    let lm = &lm;
                    box_points(n, w.radius)
                        .into_iter()
                        .map(move |l| CoverObject { cell: i, label: lm.label(i, &l).0, lambda: Some(l) })
                })
                .collect()
        }
        CoverKind::OneParameter => (1..=n + 1)
            .flat_map(|i| (-w.radius..=w.radius).map(move |r| CoverObject { cell: i, label: vec![r], lambda: None }))
            .collect(),
    };
    objs.sort();
    objs
}

fn weights_for(kind: CoverKind, n: usize) -> WeightConvention {
    match kind {
        CoverKind::Full => WeightConvention::full(n),
        CoverKind::OneParameter => WeightConvention::one_parameter(n),
    }
}

/// Builds a directed category on labelled objects; `reduce` normalises
/// labels (identity on a cover, coset representative on a quotient).
fn labelled_category(
    g: &TropicalCoamoeba,
    objects: &[CoverObject],
    lm: &LabelMap,
    reduce: &(dyn Fn(&[i64]) -> Vec<i64> + Sync),
) -> Result<AInfCategory> {
    let n = g.n();
    let t = &g.tessellation;
    let position: HashMap<(usize, Vec<i64>), usize> =
        objects.iter().enumerate().map(|(k, o)| ((o.cell, o.label.clone()), k)).collect();
    let steps: HashMap<(usize, Division), (usize, Character)> = (1..=n + 1)
        .flat_map(|i| t.base.facets.iter().filter(move |f| i + f.b2().len() <= n + 1).map(move |f| (i, f)))
        .map(|(i, f)| lm.step(t, i, f).map(|s| ((i, f.clone()), s)))
        .collect::<Result<_>>()?;
    // Morphisms out of each object, grouped by target.
    let outgoing: Vec<BTreeMap<usize, Vec<&Division>>> = objects
        .par_iter()
        .map(|o| {
            let mut by_target: BTreeMap<usize, Vec<&Division>> = BTreeMap::new();
            for f in &t.base.facets {
                if let Some((j, dl)) = steps.get(&(o.cell, f.clone())) {
                    let lab = reduce(&Character(o.label.clone()).add(dl).0);
                    if let Some(&b) = position.get(&(*j, lab)) {
                        by_target.entry(b).or_default().push(f);
                    }
                }
            }
            by_target
        })
        .collect();
    let mut cat = AInfCategory::new(objects.iter().map(CoverObject::id))?;
    let mut index: HashMap<(usize, Division), (usize, usize)> = HashMap::new();
    for (a, o) in objects.iter().enumerate() {
        cat.set_hom(a, a, unit_space())?;
        cat.set_unit(a, 0)?;
        for (&b, fs) in &outgoing[a] {
            let space = GradedSpace::from_basis(fs.iter().map(|f| (f.to_string(), g.deg[*f])))?;
            cat.set_hom(a, b, space)?;
            for (k, f) in fs.iter().enumerate() {
                index.insert((a, (*f).clone()), (b, k));
                let mut prov = json!({ "division": f.blocks(), "from": o.id(), "to": objects[b].id() });
                if let (Some(l0), Some(l1)) = (&o.lambda, &objects[b].lambda) {
                    prov["translates"] = json!([l0, l1]);
                }
                cat.set_provenance(Mor::new(a, b, k), prov);
            }
        }
    }
    add_face_products(&mut cat, g, &|a| objects[a].cell, &|a, f| index.get(&(a, f.clone())).copied())?;
    finish(cat, n)
}

/// The category of a finite window of the cover.
pub fn cover_category(g: &TropicalCoamoeba, w: &CoverWindow) -> Result<(AInfCategory, Vec<CoverObject>)> {
    let objects = window_objects(g, w);
    let lm = LabelMap::new(weights_for(w.kind, g.n()));
    let cat = labelled_category(g, &objects, &lm, &|l: &[i64]| l.to_vec())?;
    Ok((cat, objects))
}

/// A full-rank sublattice of `Z^r` in Hermite normal form: upper
/// triangular rows with positive pivots and reduced entries above them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    pub hnf: Vec<Vec<i64>>,
}

impl Sublattice {
    pub fn from_generators(gens: &[Vec<i64>], rank: usize) -> Result<Self> {
        if gens.iter().any(|g| g.len() != rank) {
            return Err(Error::DimensionMismatch(format!("sublattice generators must have {rank} entries")));
        }
        let mut a: Vec<Vec<i64>> = gens.to_vec();
        let mut r = 0;
        for c in 0..rank {
            loop {
                let piv = (r..a.len()).filter(|&k| a[k][c] != 0).min_by_key(|&k| a[k][c].abs());
                let Some(p) = piv else { return Err(Error::NotFiniteIndex) };
                a.swap(r, p);
                let mut done = true;
                for k in r + 1..a.len() {
                    let f = a[k][c].div_euclid(a[r][c]);
                    if f != 0 {
                        let row = a[r].clone();
                        for (x, y) in a[k].iter_mut().zip(&row) {
                            *x -= f * y;
                        }
                    }
                    if a[k][c] != 0 {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if a[r][c] < 0 {
                for x in a[r].iter_mut() {
                    *x = -*x;
                }
            }
            for k in 0..r {
                let f = a[k][c].div_euclid(a[r][c]);
                let row = a[r].clone();
                for (x, y) in a[k].iter_mut().zip(&row) {
                    *x -= f * y;
                }
            }
            r += 1;
        }
        a.truncate(rank);
        Ok(Sublattice { hnf: a })
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    pub fn index(&self) -> u64 {
        self.hnf.iter().enumerate().map(|(k, r)| r[k] as u64).product()
    }

    /// The representative with `0 <= x_k < h_kk`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut x = v.to_vec();
        for (k, row) in self.hnf.iter().enumerate() {
            let f = x[k].div_euclid(row[k]);
            for (a, b) in x.iter_mut().zip(row) {
                *a -= f * b;
            }
        }
        x
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn coset_representatives(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for (k, row) in self.hnf.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|p| (0..row[k]).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                }))
                .collect();
        }
        out
    }
}

/// Parses `"a,b;c,d"` into integer vectors.
pub fn parse_basis(s: &str) -> Result<Vec<Vec<i64>>> {
    s.split(';')
        .map(|v| {
            v.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::InvalidArgument(format!("bad integer `{x}`"))))
                .collect()
        })
        .collect()
}

/// Characters vanishing on the diagonal subgroup `A` of `(Z/(n+1))^n`
/// acting on projective space: `m` with all entries congruent mod `n+1`.
pub fn diagonal_quotient_sublattice(n: usize) -> Vec<Vec<i64>> {
    let m = (n + 1) as i64;
    let mut gens = vec![vec![1; n]];
    for k in 1..n {
        let mut v = vec![0; n];
        v[k] = m;
        gens.push(v);
    }
    gens
}

/// The quotient of the full cover by a sublattice of characters: objects
/// `(i, coset)` and homs summed over coset representatives.
pub fn quotient_by_sublattice(g: &TropicalCoamoeba, sub: &Sublattice) -> Result<(AInfCategory, Vec<CoverObject>)> {
    let n = g.n();
    if sub.rank() != n {
        return Err(Error::DimensionMismatch(format!("sublattice of Z^{} for n = {n}", sub.rank())));
    }
    let reps = sub.coset_representatives();
    let objects: Vec<CoverObject> = (1..=n + 1)
        .flat_map(|i| reps.iter().map(move |r| CoverObject { cell: i, label: r.clone(), lambda: None }))
        .collect();
    let lm = LabelMap::new(WeightConvention::full(n));
    let cat = labelled_category(g, &objects, &lm, &|l: &[i64]| sub.reduce(l))?;
    Ok((cat, objects))
}

/// `m_2` constants of a category on the cells, rewritten in wedge
/// monomials: `(sigma, tau, product, coefficient)` per nonzero constant.
pub fn wedge_constants(
    g: &TropicalCoamoeba,
    cat: &AInfCategory,
) -> Result<BTreeMap<(usize, usize, usize, String, String), (String, Q)>> {
    let mut out = BTreeMap::new();
    let facets_of = |s: usize, t: usize| g.facets_of_degree(t - s);
    for (inputs, o, c) in cat.structure_constants() {
        if inputs.len() != 2 || inputs.iter().any(|m| m.src == m.tgt) {
            continue;
        }
        let (s, t) = (inputs[1], inputs[0]);
        let w = |m: Mor| facet_to_wedge(facets_of(m.src, m.tgt)[m.idx]).map(|x| x.name());
        let key = (s.src, s.tgt, t.tgt, w(t)?, w(s)?);
        let prod = facet_to_wedge(facets_of(s.src, t.tgt)[o])?.name();
        out.insert(key, (prod, c));
    }
    Ok(out)
}

/// Checks that the torus category is the directed exterior category
/// under `B1 | B2 -> e_{B2}`; returns the differences.
pub fn compare_with_exterior(g: &TropicalCoamoeba, cat: &AInfCategory, ext: &AInfCategory) -> Result<Vec<String>> {
    let m = g.n() + 1;
    let mut diffs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (cat.hom(i, j), ext.hom(i, j));
            let names_a: Vec<(String, i32)> = match a {
                Some(h) => (0..h.dim())
                    .map(|k| Ok((facet_to_wedge(g.facets_of_degree(j - i)[k])?.name(), h.degree(k))))
                    .collect::<Result<_>>()?,
                None => Vec::new(),
            };
            let mut names_a = names_a;
            names_a.sort();
            let mut names_b: Vec<(String, i32)> =
                b.map(|h| (0..h.dim()).map(|k| (h.name(k).to_string(), h.degree(k))).collect()).unwrap_or_default();
            names_b.sort();
            if names_a != names_b {
                diffs.push(format!("hom(P{}, P{}): basis {:?} vs {:?}", i + 1, j + 1, names_a, names_b));
            }
        }
    }
    let ca = wedge_constants(g, cat)?;
    let mut cb = BTreeMap::new();
    for (inputs, o, c) in ext.structure_constants() {
        if inputs.len() != 2 || inputs.iter().any(|m| m.src == m.tgt) {
            continue;
        }
        let (s, t) = (inputs[1], inputs[0]);
        let key = (s.src, s.tgt, t.tgt, ext.name(t).to_string(), ext.name(s).to_string());
        cb.insert(key, (ext.hom(s.src, t.tgt).expect("hom").name(o).to_string(), c));
    }
    for (k, v) in &ca {
        match cb.get(k) {
            Some(w) if w == v => {}
            other => diffs.push(format!(
                "m2({}, {}) on P{}<P{}<P{}: {} {} vs {:?}",
                k.3, k.4, k.0 + 1, k.1 + 1, k.2 + 1, crate::exactlinalg::fmt_q(&v.1), v.0, other
            )),
        }
    }
    for k in cb.keys() {
        if !ca.contains_key(k) {
            diffs.push(format!("m2({}, {}) on P{}<P{}<P{}: missing", k.3, k.4, k.0 + 1, k.1 + 1, k.2 + 1));
        }
    }
    Ok(diffs)
}

/// Flips the sign of the first nonidentity `m_2` constant.
pub fn inject_sign_flip(cat: &mut AInfCategory) -> Result<()> {
    let target = cat
        .structure_constants()
        .into_iter()
        .find(|(ins, _, _)| ins.len() == 2 && ins.iter().all(|m| m.src != m.tgt))
        .ok_or_else(|| Error::InvalidArgument("no product to corrupt".into()))?;
    let out: Vec<(usize, Q)> = cat
        .op(&target.0)
        .expect("constant exists")
        .iter()
        .map(|(o, c)| if *o == target.1 { (*o, -c.clone()) } else { (*o, c.clone()) })
        .collect();
    cat.replace_op(target.0, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beilinson::build_exterior_category;

    #[test]
    fn n2_honeycomb() {
        let g = build_coamoeba(2).unwrap();
        assert_eq!(g.num_facet_classes(), 9);
        assert!(g.deg.values().all(|&d| d == 1 || d == 2));
        let cat = category_of(&g).unwrap();
        assert_eq!(cat.hom_dim(0, 1), 3);
        assert_eq!(cat.hom_dim(0, 2), 3);
        let products = cat
            .structure_constants()
            .into_iter()
            .filter(|(ins, _, _)| ins.len() == 2 && ins.iter().all(|m| m.src != m.tgt))
            .count();
        assert_eq!(products, 6);
    }

    #[test]
    fn n1_circle() {
        let g = build_coamoeba(1).unwrap();
        assert!(g.deg.values().all(|&d| d == 1));
        let cat = category_of(&g).unwrap();
        assert_eq!(cat.hom_dim(0, 1), 2);
    }

    #[test]
    fn matches_exterior() {
        for n in 1..=4 {
            let g = build_coamoeba(n).unwrap();
            let cat = category_of(&g).unwrap();
            let ext = build_exterior_category(n).unwrap();
            assert!(compare_with_exterior(&g, &cat, &ext).unwrap().is_empty(), "n = {n}");
        }
    }

    #[test]
    fn flipped_sign_is_detected() {
        let g = build_coamoeba(3).unwrap();
        let mut cat = category_of(&g).unwrap();
        inject_sign_flip(&mut cat).unwrap();
        let ext = build_exterior_category(3).unwrap();
        assert_eq!(compare_with_exterior(&g, &cat, &ext).unwrap().len(), 1);
    }

    #[test]
    fn hnf_reduction() {
        let s = Sublattice::from_generators(&[vec![1, 1], vec![3, 0]], 2).unwrap();
        assert_eq!(s.index(), 3);
        assert!(s.contains(&[4, 1]));
        assert!(!s.contains(&[1, 0]));
        assert_eq!(s.coset_representatives().len(), 3);
        assert_eq!(
            Sublattice::from_generators(&[vec![1, 2], vec![2, 4]], 2).unwrap_err(),
            Error::NotFiniteIndex
        );
    }

    #[test]
    fn trivial_quotient_is_torus_category() {
        let g = build_coamoeba(2).unwrap();
        let sub = Sublattice::from_generators(&[vec![1, 0], vec![0, 1]], 2).unwrap();
        let (q, objs) = quotient_by_sublattice(&g, &sub).unwrap();
        assert_eq!(objs.len(), 3);
        let base = category_of(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(q.hom_dim(i, j), base.hom_dim(i, j));
            }
        }
        assert_eq!(q.num_structure_constants(), base.num_structure_constants());
    }

    #[test]
    fn geometric_steps_follow_weights() {
        for n in 1..=4 {
            let g = build_coamoeba(n).unwrap();
            let t = &g.tessellation;
            for w in [WeightConvention::full(n), WeightConvention::one_parameter(n)] {
                let lm = LabelMap::new(w.clone());
                for i in 1..=n + 1 {
                    for f in t.base.facets.iter().filter(|f| i + f.b2().len() <= n + 1) {
                        let (j, step) = lm.step(t, i, f).unwrap();
                        assert_eq!(j, i + f.b2().len());
                        assert!(step.add(&w.weight(facet_to_wedge(f).unwrap())).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn one_parameter_cover_n3() {
        let g = build_coamoeba(3).unwrap();
        let (cat, objs) = cover_category(&g, &CoverWindow { kind: CoverKind::OneParameter, radius: 2 }).unwrap();
        let at = |cell: usize, r: i64| objs.iter().position(|o| o.cell == cell && o.label == vec![r]).unwrap();
        assert_eq!(cat.hom_dim(at(1, 0), at(2, 0)), 3);
        assert_eq!(cat.hom_dim(at(1, 0), at(2, -1)), 1);
        assert_eq!(cat.hom_dim(at(1, 0), at(2, 1)), 0);
    }
}
