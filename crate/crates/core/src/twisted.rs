//! Twisted complexes over a finite A-infinity category.
//!
//! Multiplicity spaces are one-dimensional shifts `C[k]`, concentrated in
//! degree `-k`; the identity-shift map `1_{i,j}` in `hom(C[i], C[j])` has
//! degree `i - j`. A morphism of the additive enlargement is a sparse map
//! from [`SigmaKey`] (source term, target term, basis morphism) to its
//! coefficient.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ainfinity::{AInfCategory, GradedSpace, Mor};
use crate::error::{Error, Result};
use crate::exactlinalg::{cohomology_in_degree, fmt_q, QVector, RationalMatrix, SubquotientBasis, Q};

/// `C[shift] (x) object`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub shift: i32,
    pub object: usize,
}

/// A formal direct sum of shifted objects.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalSum {
    pub terms: Vec<Term>,
}

impl FormalSum {
    pub fn single(object: usize) -> Self {
        FormalSum { terms: vec![Term { shift: 0, object }] }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `C[k] (x) self`.
    pub fn shifted(&self, k: i32) -> Self {
        FormalSum { terms: self.terms.iter().map(|t| Term { shift: t.shift + k, object: t.object }).collect() }
    }

    fn check(&self, cat: &AInfCategory) -> Result<()> {
        for t in &self.terms {
            if t.object >= cat.num_objects() {
                return Err(Error::UnknownObject(format!("#{}", t.object)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigmaKey {
    pub src_term: usize,
    pub tgt_term: usize,
    pub idx: usize,
}

pub type SigmaElem = BTreeMap<SigmaKey, Q>;

fn add_to(acc: &mut SigmaElem, key: SigmaKey, v: Q) {
    let slot = acc.entry(key).or_insert_with(Q::zero);
    *slot += v;
    if slot.is_zero() {
        acc.remove(&key);
    }
}

/// Graded basis of `hom_{Sigma}(x, y)`, ordered by (source term, target
/// term, morphism index).
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaHom {
    pub keys: Vec<SigmaKey>,
    pub space: GradedSpace,
    position: HashMap<SigmaKey, usize>,
}

impl SigmaHom {
    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn position(&self, k: &SigmaKey) -> Option<usize> {
        self.position.get(k).copied()
    }

    pub fn to_vector(&self, e: &SigmaElem) -> Result<QVector> {
        let mut v = vec![Q::zero(); self.dim()];
        for (k, c) in e {
            let p = self
                .position(k)
                .ok_or_else(|| Error::DimensionMismatch(format!("component {k:?} outside the hom space")))?;
            v[p] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &[Q]) -> SigmaElem {
        self.keys.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, c.clone())).collect()
    }

    /// Embeds a vector over the degree-`d` basis elements.
    pub fn from_local(&self, d: i32, local: &[Q]) -> SigmaElem {
        self.space.indices_in_degree(d).into_iter().zip(local).filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.keys[i], c.clone())).collect()
    }

    pub fn to_local(&self, d: i32, e: &SigmaElem) -> Result<QVector> {
        let v = self.to_vector(e)?;
        Ok(self.space.indices_in_degree(d).into_iter().map(|i| v[i].clone()).collect())
    }
}

/// The graded space `sum_{p,q} hom(C[s_p], C[s_q]) (x) hom(X^p, Y^q)`.
pub fn hom_sigma(x: &FormalSum, y: &FormalSum, cat: &AInfCategory) -> Result<SigmaHom> {
    x.check(cat)?;
    y.check(cat)?;
    let mut keys = Vec::new();
    let mut space = GradedSpace::new();
    for (p, tp) in x.terms.iter().enumerate() {
        for (q, tq) in y.terms.iter().enumerate() {
            if let Some(h) = cat.hom(tp.object, tq.object) {
                for idx in 0..h.dim() {
                    keys.push(SigmaKey { src_term: p, tgt_term: q, idx });
                    space.push(format!("{p}>{q}:{}", h.name(idx)), tp.shift - tq.shift + h.degree(idx))?;
                }
            }
        }
    }
    let position = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    Ok(SigmaHom { keys, space, position })
}

/// Degree of a homogeneous component.
pub fn sigma_degree(cat: &AInfCategory, x: &FormalSum, y: &FormalSum, k: &SigmaKey) -> i32 {
    let (tp, tq) = (x.terms[k.src_term], y.terms[k.tgt_term]);
    tp.shift - tq.shift + cat.degree(Mor::new(tp.object, tq.object, k.idx))
}

/// `m_d` of the additive enlargement. `sums = [X_0, ..., X_d]` and
/// `args = [a_d, ..., a_1]` with `a_k` in `hom(X_{k-1}, X_k)`.
pub fn m_sigma(cat: &AInfCategory, sums: &[&FormalSum], args: &[&SigmaElem]) -> Result<SigmaElem> {
    let d = args.len();
    if d == 0 || sums.len() != d + 1 {
        return Err(Error::NotComposable(format!("{} arguments need {} sums", d, d + 1)));
    }
    let mut out = SigmaElem::new();
    if !cat.arities().contains(&d) {
        return Ok(out);
    }
    // by_src[k][p]: components of a_{k+1} leaving term p of X_k.
    let mut by_src: Vec<Vec<Vec<(usize, usize, &Q)>>> = Vec::with_capacity(d);
    for k in 0..d {
        let a = args[d - 1 - k];
        let mut lists = vec![Vec::new(); sums[k].len()];
        for (key, c) in a.iter() {
            if key.src_term >= sums[k].len() || key.tgt_term >= sums[k + 1].len() {
                return Err(Error::NotComposable(format!("argument {} has a component outside its hom space", k + 1)));
            }
            lists[key.src_term].push((key.tgt_term, key.idx, c));
        }
        by_src.push(lists);
    }
    struct Walk<'a> {
        cat: &'a AInfCategory,
        sums: &'a [&'a FormalSum],
        by_src: &'a [Vec<Vec<(usize, usize, &'a Q)>>],
        inputs: Vec<Mor>,
        phi_deg: Vec<i32>,
        x_deg: Vec<i32>,
    }
    fn rec(w: &mut Walk<'_>, k: usize, start: usize, p: usize, coef: Q, out: &mut SigmaElem) {
        let d = w.by_src.len();
        if k == d {
            let mut dagger = 0i64;
            for a in 0..d {
                for b in a + 1..d {
                    dagger += i64::from(w.phi_deg[a]) * i64::from(w.x_deg[b] - 1);
                }
            }
            let key: Vec<Mor> = w.inputs.iter().rev().copied().collect();
            if let Some(res) = w.cat.op(&key) {
                let sign = if dagger.rem_euclid(2) == 0 { coef } else { -coef };
                for (o, c) in res {
                    add_to(out, SigmaKey { src_term: start, tgt_term: p, idx: *o }, &sign * c);
                }
            }
            return;
        }
        let from = w.sums[k].terms[p];
        for &(q, idx, c) in &w.by_src[k][p] {
            let to = w.sums[k + 1].terms[q];
            let m = Mor::new(from.object, to.object, idx);
            w.inputs.push(m);
            w.phi_deg.push(from.shift - to.shift);
            w.x_deg.push(w.cat.degree(m));
            rec(w, k + 1, start, q, &coef * c, out);
            w.inputs.pop();
            w.phi_deg.pop();
            w.x_deg.pop();
        }
    }
    let mut walk = Walk { cat, sums, by_src: &by_src, inputs: Vec::new(), phi_deg: Vec::new(), x_deg: Vec::new() };
    for p in 0..sums[0].len() {
        rec(&mut walk, 0, p, p, Q::one(), &mut out);
    }
    Ok(out)
}

/// A formal sum with a degree-one differential satisfying the
/// Maurer-Cartan equation. Components of `delta` go from earlier to
/// strictly later terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistedComplex {
    pub underlying: FormalSum,
    #[serde(with = "sigma_serde")]
    pub delta: SigmaElem,
}

impl TwistedComplex {
    /// The object itself with zero differential.
    pub fn plain(object: usize) -> Self {
        TwistedComplex { underlying: FormalSum::single(object), delta: SigmaElem::new() }
    }

    pub fn new(cat: &AInfCategory, underlying: FormalSum, delta: SigmaElem) -> Result<Self> {
        underlying.check(cat)?;
        for k in delta.keys() {
            if k.src_term >= k.tgt_term || k.tgt_term >= underlying.len() {
                return Err(Error::InvalidTwistedComplex(format!(
                    "differential component {} -> {} is not strictly forward",
                    k.src_term, k.tgt_term
                )));
            }
            let (a, b) = (underlying.terms[k.src_term].object, underlying.terms[k.tgt_term].object);
            if k.idx >= cat.hom_dim(a, b) {
                return Err(Error::InvalidTwistedComplex("differential component outside its hom space".into()));
            }
            if sigma_degree(cat, &underlying, &underlying, k) != 1 {
                return Err(Error::InvalidTwistedComplex("differential must have degree 1".into()));
            }
        }
        let tc = TwistedComplex { underlying, delta };
        let residue = tc.maurer_cartan_residue(cat)?;
        if !residue.is_empty() {
            return Err(Error::InvalidTwistedComplex(format!(
                "Maurer-Cartan residue has {} nonzero components",
                residue.len()
            )));
        }
        Ok(tc)
    }

    /// `sum_r m_r(delta, ..., delta)`.
    pub fn maurer_cartan_residue(&self, cat: &AInfCategory) -> Result<SigmaElem> {
        let mut total = SigmaElem::new();
        if self.delta.is_empty() {
            return Ok(total);
        }
        for &r in cat.arities() {
            if r >= self.underlying.len() {
                break;
            }
            let sums = vec![&self.underlying; r + 1];
            let args = vec![&self.delta; r];
            for (k, c) in m_sigma(cat, &sums, &args)? {
                add_to(&mut total, k, c);
            }
        }
        Ok(total)
    }

    pub fn len(&self) -> usize {
        self.underlying.len()
    }

    pub fn is_empty(&self) -> bool {
        self.underlying.is_empty()
    }
}

/// `m_d` of twisted complexes: the sum over all insertions of the
/// differentials. `complexes = [X_0, ..., X_d]`, `args = [a_d, ..., a_1]`.
pub fn m_tw(cat: &AInfCategory, complexes: &[&TwistedComplex], args: &[&SigmaElem]) -> Result<SigmaElem> {
    let d = args.len();
    if d == 0 || complexes.len() != d + 1 {
        return Err(Error::NotComposable(format!("{} arguments need {} complexes", d, d + 1)));
    }
    // Insertions per slot are bounded by nilpotency of each differential.
    let caps: Vec<usize> =
        complexes.iter().map(|x| if x.delta.is_empty() { 0 } else { x.len().saturating_sub(1) }).collect();
    let mut out = SigmaElem::new();
    for &r in cat.arities() {
        if r < d {
            continue;
        }
        let extra = r - d;
        let mut counts = vec![0usize; d + 1];
        distribute(extra, 0, &caps, &mut counts, &mut |counts| -> Result<()> {
            // Application order: delta_0^{i_0}, a_1, delta_1^{i_1}, ..., a_d, delta_d^{i_d}.
            let mut sums: Vec<&FormalSum> = vec![&complexes[0].underlying];
            let mut app: Vec<&SigmaElem> = Vec::with_capacity(r);
            for k in 0..=d {
                for _ in 0..counts[k] {
                    app.push(&complexes[k].delta);
                    sums.push(&complexes[k].underlying);
                }
                if k < d {
                    app.push(args[d - 1 - k]);
                    sums.push(&complexes[k + 1].underlying);
                }
            }
            app.reverse();
            for (key, c) in m_sigma(cat, &sums, &app)? {
                add_to(&mut out, key, c);
            }
            Ok(())
        })?;
    }
    Ok(out)
}

fn distribute(
    left: usize,
    slot: usize,
    caps: &[usize],
    counts: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if slot == caps.len() {
        return if left == 0 { f(counts) } else { Ok(()) };
    }
    for c in 0..=left.min(caps[slot]) {
        counts[slot] = c;
        distribute(left - c, slot + 1, caps, counts, f)?;
    }
    counts[slot] = 0;
    Ok(())
}

/// Mapping cone of a closed degree-0 morphism `c : X0 -> X1`:
/// `C[1] (x) X0 (+) X1` with differential
/// `[[1 (x) delta_0, 0], [-1_{1,0} (x) c, 1 (x) delta_1]]`.
pub fn cone(cat: &AInfCategory, x0: &TwistedComplex, x1: &TwistedComplex, c: &SigmaElem) -> Result<TwistedComplex> {
    for k in c.keys() {
        if k.src_term >= x0.len() || k.tgt_term >= x1.len() {
            return Err(Error::NotComposable("cone morphism has a component outside hom(X0, X1)".into()));
        }
        if sigma_degree(cat, &x0.underlying, &x1.underlying, k) != 0 {
            return Err(Error::InvalidArgument("cone morphism must have degree 0".into()));
        }
    }
    if !m_tw(cat, &[x0, x1], &[c])?.is_empty() {
        return Err(Error::NotClosed);
    }
    let off = x0.len();
    let mut terms = x0.underlying.shifted(1).terms;
    terms.extend(x1.underlying.terms.iter().copied());
    let mut delta = SigmaElem::new();
    for (k, v) in &x0.delta {
        delta.insert(*k, v.clone());
    }
    for (k, v) in &x1.delta {
        delta.insert(SigmaKey { src_term: k.src_term + off, tgt_term: k.tgt_term + off, idx: k.idx }, v.clone());
    }
    for (k, v) in c {
        delta.insert(SigmaKey { src_term: k.src_term, tgt_term: k.tgt_term + off, idx: k.idx }, -v.clone());
    }
    TwistedComplex::new(cat, FormalSum { terms }, delta)
}

/// Per-degree cohomology of `(hom(x, y), m_1)`.
#[derive(Clone, Debug)]
pub struct HomCohomology {
    pub hom: SigmaHom,
    /// One entry per degree occurring in the hom space.
    pub degrees: BTreeMap<i32, SubquotientBasis>,
}

impl HomCohomology {
    pub fn dim(&self, d: i32) -> usize {
        self.degrees.get(&d).map_or(0, SubquotientBasis::dim)
    }

    /// Nonzero dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees.iter().filter(|(_, b)| b.dim() > 0).map(|(&d, b)| (d, b.dim())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(SubquotientBasis::dim).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|(&d, b)| if d % 2 == 0 { b.dim() as i64 } else { -(b.dim() as i64) }).sum()
    }

    /// Canonical representative `k` in degree `d`.
    pub fn representative(&self, d: i32, k: usize) -> SigmaElem {
        self.hom.from_local(d, &self.degrees[&d].representatives[k])
    }

    /// Coordinates of the class of a homogeneous cocycle of degree `d`.
    pub fn class_coordinates(&self, d: i32, e: &SigmaElem) -> Result<QVector> {
        match self.degrees.get(&d) {
            Some(b) => b.class_coordinates(&self.hom.to_local(d, e)?),
            None if e.is_empty() => Ok(Vec::new()),
            None => Err(Error::NotACocycle),
        }
    }

    /// Coordinates relative to an explicit family of cocycles whose classes
    /// form a basis in degree `d`.
    pub fn coordinates_in(&self, d: i32, basis: &[SigmaElem], e: &SigmaElem) -> Result<QVector> {
        let Some(b) = self.degrees.get(&d) else {
            return if basis.is_empty() { Ok(Vec::new()) } else { Err(Error::NotACocycle) };
        };
        let locals: Vec<QVector> = basis.iter().map(|x| self.hom.to_local(d, x)).collect::<Result<_>>()?;
        b.coordinates_in(&locals, &self.hom.to_local(d, e)?)
    }
}

/// Matrix of `m_1^{Tw}` from degree `d` to `d + 1`.
pub fn m1_matrix(cat: &AInfCategory, x: &TwistedComplex, y: &TwistedComplex, hom: &SigmaHom, d: i32) -> Result<RationalMatrix> {
    let from = hom.space.indices_in_degree(d);
    let to = hom.space.indices_in_degree(d + 1);
    let row_of: HashMap<usize, usize> = to.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let mut entries = Vec::new();
    for (col, &i) in from.iter().enumerate() {
        let e = SigmaElem::from([(hom.keys[i], Q::one())]);
        for (k, v) in m_tw(cat, &[x, y], &[&e])? {
            let pos = hom.position(&k).expect("m1 stays in the hom space");
            let row = *row_of.get(&pos).ok_or_else(|| Error::InvalidArgument("m1 does not raise degree by one".into()))?;
            entries.push((row, col, v));
        }
    }
    Ok(RationalMatrix::from_entries(to.len(), from.len(), entries))
}

pub fn hom_cohomology(cat: &AInfCategory, x: &TwistedComplex, y: &TwistedComplex) -> Result<HomCohomology> {
    let hom = hom_sigma(&x.underlying, &y.underlying, cat)?;
    let mut degrees = BTreeMap::new();
    for d in hom.space.degrees() {
        let d_in = m1_matrix(cat, x, y, &hom, d - 1)?;
        let d_out = m1_matrix(cat, x, y, &hom, d)?;
        degrees.insert(d, cohomology_in_degree(&d_in, &d_out, d)?);
    }
    Ok(HomCohomology { hom, degrees })
}

/// Cohomology for many pairs at once, in input order.
pub fn hom_cohomology_many(
    cat: &AInfCategory,
    pairs: &[(&TwistedComplex, &TwistedComplex)],
) -> Result<Vec<HomCohomology>> {
    pairs.par_iter().map(|(x, y)| hom_cohomology(cat, x, y)).collect()
}

/// Materializes the twisted complexes as an A-infinity category with
/// operations up to `max_arity`.
pub fn tw_category(
    cat: &AInfCategory,
    objects: &[(String, TwistedComplex)],
    max_arity: usize,
) -> Result<AInfCategory> {
    let mut out = AInfCategory::new(objects.iter().map(|(n, _)| n.clone()))?;
    let mut homs: BTreeMap<(usize, usize), SigmaHom> = BTreeMap::new();
    for (i, (_, x)) in objects.iter().enumerate() {
        for (j, (_, y)) in objects.iter().enumerate() {
            let h = hom_sigma(&x.underlying, &y.underlying, cat)?;
            if h.dim() > 0 {
                out.set_hom(i, j, h.space.clone())?;
                homs.insert((i, j), h);
            }
        }
    }
    let arity_cap = max_arity.min(cat.max_arity());
    let mut chains: Vec<Vec<Mor>> = out.all_morphisms().into_iter().map(|m| vec![m]).collect();
    for d in 1..=arity_cap {
        if d > 1 {
            let mut next = Vec::new();
            for ch in &chains {
                let last = ch[ch.len() - 1];
                for m in out.out_morphisms(last.tgt) {
                    let mut c = ch.clone();
                    c.push(m);
                    next.push(c);
                }
            }
            chains = next;
        }
        let results: Vec<(Vec<Mor>, SigmaElem)> = chains
            .par_iter()
            .map(|ch| {
                let mut xs: Vec<&TwistedComplex> = vec![&objects[ch[0].src].1];
                xs.extend(ch.iter().map(|m| &objects[m.tgt].1));
                let elems: Vec<SigmaElem> = ch
                    .iter()
                    .rev()
                    .map(|m| SigmaElem::from([(homs[&(m.src, m.tgt)].keys[m.idx], Q::one())]))
                    .collect();
                let refs: Vec<&SigmaElem> = elems.iter().collect();
                m_tw(cat, &xs, &refs).map(|r| (ch.iter().rev().copied().collect(), r))
            })
            .collect::<Result<_>>()?;
        for (inputs, res) in results {
            let (s, t) = (inputs[inputs.len() - 1].src, inputs[0].tgt);
            let h = &homs[&(s, t)];
            for (k, v) in res {
                out.add_op(inputs.clone(), h.position(&k).expect("result in hom space"), v)?;
            }
        }
    }
    Ok(out)
}

/// JSON form of a sparse morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub src_term: usize,
    pub tgt_term: usize,
    pub morphism: usize,
    pub coefficient: String,
}

pub fn elem_records(e: &SigmaElem) -> Vec<ComponentRecord> {
    e.iter()
        .map(|(k, c)| ComponentRecord { src_term: k.src_term, tgt_term: k.tgt_term, morphism: k.idx, coefficient: fmt_q(c) })
        .collect()
}

mod sigma_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(e: &SigmaElem, s: S) -> std::result::Result<S::Ok, S::Error> {
        elem_records(e).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<SigmaElem, D::Error> {
        let recs = Vec::<ComponentRecord>::deserialize(d)?;
        recs.into_iter()
            .map(|r| {
                crate::exactlinalg::parse_q(&r.coefficient)
                    .map(|c| (SigmaKey { src_term: r.src_term, tgt_term: r.tgt_term, idx: r.morphism }, c))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// JSON form of a graded cohomology table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CohomologyTable {
    pub degrees: BTreeMap<i32, DegreeRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeRecord {
    pub dim: usize,
    pub representatives: Vec<Vec<ComponentRecord>>,
}

impl HomCohomology {
    pub fn table(&self) -> CohomologyTable {
        let degrees = self
            .degrees
            .iter()
            .filter(|(_, b)| b.dim() > 0)
            .map(|(&d, b)| {
                let reps = (0..b.dim()).map(|k| elem_records(&self.representative(d, k))).collect();
                (d, DegreeRecord { dim: b.dim(), representatives: reps })
            })
            .collect();
        CohomologyTable { degrees }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::q;

    /// One object with endomorphisms `id` only.
    fn point() -> AInfCategory {
        let mut c = AInfCategory::new(["X"]).unwrap();
        c.set_hom(0, 0, GradedSpace::from_basis([("id".to_string(), 0)]).unwrap()).unwrap();
        c.set_unit(0, 0).unwrap();
        c.add_strict_units().unwrap();
        c
    }

    #[test]
    fn single_object_hom_unchanged() {
        let c = point();
        let h = hom_sigma(&FormalSum::single(0), &FormalSum::single(0), &c).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.space.degree(0), 0);
        let e = hom_sigma(&FormalSum::default(), &FormalSum::single(0), &c).unwrap();
        assert_eq!(e.dim(), 0);
    }

    #[test]
    fn m_sigma_reduces_to_m2_without_shifts() {
        let c = point();
        let s = FormalSum::single(0);
        let id = SigmaElem::from([(SigmaKey { src_term: 0, tgt_term: 0, idx: 0 }, q(1))]);
        let r = m_sigma(&c, &[&s, &s, &s], &[&id, &id]).unwrap();
        assert_eq!(r, id);
    }

    #[test]
    fn cone_over_identity_is_acyclic() {
        let c = point();
        let x = TwistedComplex::plain(0);
        let id = SigmaElem::from([(SigmaKey { src_term: 0, tgt_term: 0, idx: 0 }, q(1))]);
        let cn = cone(&c, &x, &x, &id).unwrap();
        assert!(cn.maurer_cartan_residue(&c).unwrap().is_empty());
        let h = hom_cohomology(&c, &x, &cn).unwrap();
        assert_eq!(h.total_dim(), 0);
        let h = hom_cohomology(&c, &cn, &cn).unwrap();
        assert_eq!(h.total_dim(), 0);
    }

    #[test]
    fn zero_cone_is_direct_sum() {
        let c = point();
        let x = TwistedComplex::plain(0);
        let cn = cone(&c, &x, &x, &SigmaElem::new()).unwrap();
        assert!(cn.delta.is_empty());
        let h = hom_cohomology(&c, &x, &cn).unwrap();
        assert_eq!(h.dims(), BTreeMap::from([(-1, 1), (0, 1)]));
    }

    #[test]
    fn backward_differential_rejected() {
        let c = point();
        let s = FormalSum { terms: vec![Term { shift: 0, object: 0 }, Term { shift: 1, object: 0 }] };
        let d = SigmaElem::from([(SigmaKey { src_term: 1, tgt_term: 0, idx: 0 }, q(1))]);
        assert!(matches!(TwistedComplex::new(&c, s, d), Err(Error::InvalidTwistedComplex(_))));
    }

    #[test]
    fn json_roundtrip() {
        let c = point();
        let x = TwistedComplex::plain(0);
        let id = SigmaElem::from([(SigmaKey { src_term: 0, tgt_term: 0, idx: 0 }, q(1))]);
        let cn = cone(&c, &x, &x, &id).unwrap();
        let s = serde_json::to_string(&cn).unwrap();
        let back: TwistedComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cn);
    }
}
