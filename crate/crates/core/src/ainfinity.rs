//! Finite A-infinity categories with exact, sparse structure constants.
//!
//! Operations are keyed by their inputs written in the usual order
//! `m_l(a_l, ..., a_1)`, where `a_1 : c_0 -> c_1` is applied first. An
//! absent key means the operation vanishes on that tuple.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{
    cohomology_in_degree, fmt_q, parse_q, solve, QVector, RationalMatrix, SubquotientBasis, Q,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i32,
}

/// A finite-dimensional graded vector space with a named basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    basis: Vec<BasisElement>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_basis(basis: impl IntoIterator<Item = (String, i32)>) -> Result<Self> {
        let mut space = Self::new();
        for (name, degree) in basis {
            space.push(name, degree)?;
        }
        Ok(space)
    }

    /// Appends a basis element and returns its index.
    pub fn push(&mut self, name: impl Into<String>, degree: i32) -> Result<usize> {
        let name = name.into();
        if self.basis.iter().any(|b| b.name == name) {
            return Err(Error::InvalidArgument(format!("duplicate basis name `{name}`")));
        }
        self.basis.push(BasisElement { name, degree });
        Ok(self.basis.len() - 1)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, idx: usize) -> i32 {
        self.basis[idx].degree
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.basis[idx].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Indices of the basis elements of the given degree, in basis order.
    pub fn indices_in_degree(&self, degree: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == degree).collect()
    }

    pub fn degrees(&self) -> BTreeSet<i32> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn dim_in_degree(&self, degree: i32) -> usize {
        self.basis.iter().filter(|b| b.degree == degree).count()
    }
}

/// A basis morphism: element `idx` of `hom(src, tgt)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mor {
    pub src: usize,
    pub tgt: usize,
    pub idx: usize,
}

impl Mor {
    pub fn new(src: usize, tgt: usize, idx: usize) -> Self {
        Mor { src, tgt, idx }
    }
}

/// Linear combination of basis elements of a single hom space.
pub type LinComb = Vec<(usize, Q)>;

fn add_into(acc: &mut BTreeMap<usize, Q>, idx: usize, v: Q) {
    let slot = acc.entry(idx).or_insert_with(Q::zero);
    *slot += v;
    if slot.is_zero() {
        acc.remove(&idx);
    }
}

/// A finite A-infinity category.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AInfCategory {
    objects: Vec<String>,
    homs: BTreeMap<(usize, usize), GradedSpace>,
    ops: HashMap<Vec<Mor>, LinComb>,
    arities: BTreeSet<usize>,
    units: BTreeMap<usize, usize>,
    provenance: BTreeMap<Mor, serde_json::Value>,
}

impl AInfCategory {
    pub fn new(objects: impl IntoIterator<Item = impl Into<String>>) -> Result<Self> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let unique: BTreeSet<&String> = objects.iter().collect();
        if unique.len() != objects.len() {
            return Err(Error::InvalidArgument("duplicate object ids".into()));
        }
        Ok(AInfCategory { objects, ..Default::default() })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, id: &str) -> Result<usize> {
        self.objects.iter().position(|o| o == id).ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    fn check_object(&self, obj: usize) -> Result<()> {
        if obj < self.objects.len() {
            Ok(())
        } else {
            Err(Error::UnknownObject(format!("#{obj}")))
        }
    }

    pub fn set_hom(&mut self, src: usize, tgt: usize, space: GradedSpace) -> Result<()> {
        self.check_object(src)?;
        self.check_object(tgt)?;
        if space.is_empty() {
            self.homs.remove(&(src, tgt));
        } else {
            self.homs.insert((src, tgt), space);
        }
        Ok(())
    }

    pub fn hom(&self, src: usize, tgt: usize) -> Option<&GradedSpace> {
        self.homs.get(&(src, tgt))
    }

    pub fn hom_dim(&self, src: usize, tgt: usize) -> usize {
        self.hom(src, tgt).map_or(0, GradedSpace::dim)
    }

    /// Nonzero hom spaces, keyed by `(src, tgt)`.
    pub fn homs(&self) -> &BTreeMap<(usize, usize), GradedSpace> {
        &self.homs
    }

    pub fn degree(&self, m: Mor) -> i32 {
        self.homs[&(m.src, m.tgt)].degree(m.idx)
    }

    pub fn name(&self, m: Mor) -> &str {
        self.homs[&(m.src, m.tgt)].name(m.idx)
    }

    pub fn set_unit(&mut self, obj: usize, idx: usize) -> Result<()> {
        let space = self
            .hom(obj, obj)
            .ok_or_else(|| Error::InvalidArgument(format!("object #{obj} has no endomorphisms")))?;
        if idx >= space.dim() || space.degree(idx) != 0 {
            return Err(Error::InvalidArgument("unit must be a degree-0 basis element".into()));
        }
        self.units.insert(obj, idx);
        Ok(())
    }

    pub fn unit(&self, obj: usize) -> Option<Mor> {
        self.units.get(&obj).map(|&idx| Mor::new(obj, obj, idx))
    }

    pub fn set_provenance(&mut self, m: Mor, value: serde_json::Value) {
        self.provenance.insert(m, value);
    }

    pub fn provenance(&self, m: Mor) -> Option<&serde_json::Value> {
        self.provenance.get(&m)
    }

    fn validate_inputs(&self, inputs: &[Mor]) -> Result<()> {
        if inputs.is_empty() {
            return Err(Error::InvalidArgument("operations need at least one input".into()));
        }
        for m in inputs {
            let space = self
                .hom(m.src, m.tgt)
                .ok_or_else(|| Error::NotComposable(format!("hom(#{}, #{}) is zero", m.src, m.tgt)))?;
            if m.idx >= space.dim() {
                return Err(Error::InvalidArgument(format!("basis index {} out of range", m.idx)));
            }
        }
        for w in inputs.windows(2) {
            // w[0] is applied after w[1].
            if w[0].src != w[1].tgt {
                return Err(Error::NotComposable(format!("{:?} after {:?}", w[0], w[1])));
            }
        }
        Ok(())
    }

    /// Source and target objects of the composite of `inputs`.
    fn ends(inputs: &[Mor]) -> (usize, usize) {
        (inputs[inputs.len() - 1].src, inputs[0].tgt)
    }

    /// Adds `coefficient * output` to `m_l(inputs)`, enforcing the
    /// degree `2 - l` rule.
    pub fn add_op(&mut self, inputs: Vec<Mor>, output: usize, coefficient: Q) -> Result<()> {
        self.validate_inputs(&inputs)?;
        let (src, tgt) = Self::ends(&inputs);
        let space = self
            .hom(src, tgt)
            .ok_or_else(|| Error::InvalidArgument(format!("output space hom(#{src}, #{tgt}) is zero")))?;
        if output >= space.dim() {
            return Err(Error::InvalidArgument("output index out of range".into()));
        }
        let arity = inputs.len();
        let in_deg: i32 = inputs.iter().map(|&m| self.degree(m)).sum();
        let expected = in_deg + 2 - arity as i32;
        if space.degree(output) != expected {
            return Err(Error::InvalidArgument(format!(
                "m_{arity} output has degree {} but inputs force {expected}",
                space.degree(output)
            )));
        }
        if coefficient.is_zero() {
            return Ok(());
        }
        let entry = self.ops.entry(inputs).or_default();
        match entry.iter_mut().find(|(i, _)| *i == output) {
            Some((_, c)) => *c += coefficient,
            None => entry.push((output, coefficient)),
        }
        entry.retain(|(_, c)| !c.is_zero());
        entry.sort_by_key(|(i, _)| *i);
        self.arities.insert(arity);
        Ok(())
    }

    /// Overwrites `m_l(inputs)`; used by mutation tests.
    pub fn replace_op(&mut self, inputs: Vec<Mor>, output: LinComb) -> Result<()> {
        self.validate_inputs(&inputs)?;
        if output.is_empty() {
            self.ops.remove(&inputs);
        } else {
            self.arities.insert(inputs.len());
            self.ops.insert(inputs, output);
        }
        Ok(())
    }

    /// Registers strict-unit products for every object with a unit:
    /// `m_2(a, id) = a` and `m_2(id, a) = (-1)^{deg a} a`.
    pub fn add_strict_units(&mut self) -> Result<()> {
        let units: Vec<(usize, usize)> = self.units.iter().map(|(&o, &i)| (o, i)).collect();
        for (obj, u) in units {
            let id = Mor::new(obj, obj, u);
            let keys: Vec<(usize, usize)> = self.homs.keys().copied().collect();
            for (s, t) in keys {
                let dim = self.hom_dim(s, t);
                for idx in 0..dim {
                    let a = Mor::new(s, t, idx);
                    if s == obj {
                        self.replace_op(vec![a, id], vec![(idx, Q::one())])?;
                    }
                    if t == obj {
                        let sign = if self.degree(a) % 2 == 0 { Q::one() } else { -Q::one() };
                        self.replace_op(vec![id, a], vec![(idx, sign)])?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn op(&self, inputs: &[Mor]) -> Option<&LinComb> {
        self.ops.get(inputs)
    }

    pub fn arities(&self) -> &BTreeSet<usize> {
        &self.arities
    }

    pub fn max_arity(&self) -> usize {
        self.arities.iter().next_back().copied().unwrap_or(0)
    }

    pub fn num_structure_constants(&self) -> usize {
        self.ops.values().map(Vec::len).sum()
    }

    /// All structure constants in a deterministic order.
    pub fn structure_constants(&self) -> Vec<(Vec<Mor>, usize, Q)> {
        let mut out: Vec<(Vec<Mor>, usize, Q)> = self
            .ops
            .iter()
            .flat_map(|(k, v)| v.iter().map(move |(i, c)| (k.clone(), *i, c.clone())))
            .collect();
        out.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
        out
    }

    /// Basis morphisms leaving `obj`, ordered by target then index.
    pub fn out_morphisms(&self, obj: usize) -> Vec<Mor> {
        self.homs
            .range((obj, 0)..(obj + 1, 0))
            .flat_map(|(&(s, t), sp)| (0..sp.dim()).map(move |i| Mor::new(s, t, i)))
            .collect()
    }

    pub fn all_morphisms(&self) -> Vec<Mor> {
        self.homs
            .iter()
            .flat_map(|(&(s, t), sp)| (0..sp.dim()).map(move |i| Mor::new(s, t, i)))
            .collect()
    }

    /// Applies `m_l` multilinearly to dense vectors. `args[k]` lives in
    /// `hom(objs[l-k-1], objs[l-k])`, with `objs = [c_0, ..., c_l]` and
    /// `args` in the order `(a_l, ..., a_1)`.
    pub fn apply(&self, objs: &[usize], args: &[&[Q]]) -> Result<QVector> {
        let l = args.len();
        if objs.len() != l + 1 {
            return Err(Error::InvalidArgument("need l + 1 objects for l arguments".into()));
        }
        let out_dim = self.hom_dim(objs[0], objs[l]);
        let mut out = vec![Q::zero(); out_dim];
        if !self.arities.contains(&l) {
            return Ok(out);
        }
        let mut supports: Vec<Vec<(Mor, &Q)>> = Vec::with_capacity(l);
        for (k, a) in args.iter().enumerate() {
            let (s, t) = (objs[l - k - 1], objs[l - k]);
            if a.len() != self.hom_dim(s, t) {
                return Err(Error::DimensionMismatch(format!("argument {k} has wrong length")));
            }
            supports.push(
                a.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (Mor::new(s, t, i), c)).collect(),
            );
        }
        let mut key = vec![Mor::new(0, 0, 0); l];
        fn rec(
            cat: &AInfCategory,
            supports: &[Vec<(Mor, &Q)>],
            k: usize,
            key: &mut Vec<Mor>,
            coef: Q,
            out: &mut [Q],
        ) {
            if k == supports.len() {
                if let Some(res) = cat.op(key) {
                    for (i, c) in res {
                        out[*i] += &coef * c;
                    }
                }
                return;
            }
            for (m, c) in &supports[k] {
                key[k] = *m;
                rec(cat, supports, k + 1, key, &coef * *c, out);
            }
        }
        rec(self, &supports, 0, &mut key, Q::one(), &mut out);
        Ok(out)
    }

    /// Matrix of `m_1` from degree `degree` to `degree + 1` of `hom(src, tgt)`.
    pub fn m1_matrix(&self, src: usize, tgt: usize, degree: i32) -> RationalMatrix {
        let Some(space) = self.hom(src, tgt) else {
            return RationalMatrix::zeros(0, 0);
        };
        let from = space.indices_in_degree(degree);
        let to = space.indices_in_degree(degree + 1);
        let pos: HashMap<usize, usize> = to.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        let mut entries = Vec::new();
        for (c, &i) in from.iter().enumerate() {
            if let Some(res) = self.op(&[Mor::new(src, tgt, i)]) {
                for (j, v) in res {
                    entries.push((pos[j], c, v.clone()));
                }
            }
        }
        RationalMatrix::from_entries(to.len(), from.len(), entries)
    }
}

/// One failing instance of the A-infinity relations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// Inputs `(a_l, ..., a_1)`.
    pub inputs: Vec<Mor>,
    /// Nonzero residue as `(basis index, coefficient)` in `hom(c_0, c_l)`.
    pub residue: Vec<(usize, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RelationReport {
    pub max_arity: usize,
    /// Number of basis tuples on which a relation was evaluated.
    pub instances_checked: usize,
    pub violations: Vec<Violation>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates the A-infinity relations on every composable basis tuple of
/// length at most `max_arity`.
///
/// A relation of length `l` only involves pairs `(m_p, m_q)` with
/// `p + q = l + 1`; lengths for which no such pair of nonzero operations
/// exists vanish identically and are skipped.
pub fn check_a_infinity(cat: &AInfCategory, max_arity: usize) -> RelationReport {
    let mut report = RelationReport { max_arity, ..Default::default() };
    let out: Vec<Vec<Mor>> = (0..cat.num_objects()).map(|o| cat.out_morphisms(o)).collect();
    for l in 1..=max_arity {
        let active = cat.arities.iter().any(|&q| q <= l && cat.arities.contains(&(l + 1 - q)));
        if !active {
            continue;
        }
        let firsts = cat.all_morphisms();
        let results: Vec<(usize, Vec<Violation>)> = firsts
            .par_iter()
            .map(|&first| {
                let mut chain = vec![first];
                let mut count = 0;
                let mut bad = Vec::new();
                walk_chains(cat, &out, l, &mut chain, &mut count, &mut bad);
                (count, bad)
            })
            .collect();
        for (c, v) in results {
            report.instances_checked += c;
            report.violations.extend(v);
        }
    }
    report
}

/// Depth-first enumeration of chains `a_1, a_2, ...` (stored in application
/// order) of length `l`.
fn walk_chains(
    cat: &AInfCategory,
    out: &[Vec<Mor>],
    l: usize,
    chain: &mut Vec<Mor>,
    count: &mut usize,
    bad: &mut Vec<Violation>,
) {
    if chain.len() == l {
        *count += 1;
        let inputs: Vec<Mor> = chain.iter().rev().copied().collect();
        let residue = relation_residue(cat, &inputs);
        if !residue.is_empty() {
            bad.push(Violation {
                inputs,
                residue: residue.into_iter().map(|(i, c)| (i, fmt_q(&c))).collect(),
            });
        }
        return;
    }
    let last = *chain.last().expect("nonempty chain");
    for &next in &out[last.tgt] {
        chain.push(next);
        walk_chains(cat, out, l, chain, count, bad);
        chain.pop();
    }
}

/// Left-hand side of the A-infinity relation on `inputs = (a_l, ..., a_1)`.
pub fn relation_residue(cat: &AInfCategory, inputs: &[Mor]) -> BTreeMap<usize, Q> {
    let l = inputs.len();
    let mut acc = BTreeMap::new();
    // a_m sits at position l - m.
    let deg = |m: usize| cat.degree(inputs[l - m]);
    for i in 0..l {
        let sign_exp: i32 = (1..=i).map(deg).sum::<i32>() - i as i32;
        let sign = if sign_exp.rem_euclid(2) == 0 { Q::one() } else { -Q::one() };
        for j in i + 1..=l {
            let inner_arity = j - i;
            let outer_arity = l + i - j + 1;
            if !cat.arities.contains(&inner_arity) || !cat.arities.contains(&outer_arity) {
                continue;
            }
            let inner_key = &inputs[l - j..l - i];
            let Some(inner) = cat.op(inner_key) else { continue };
            let (s, t) = AInfCategory::ends(inner_key);
            for (idx, c) in inner {
                let mut key: Vec<Mor> = Vec::with_capacity(outer_arity);
                key.extend_from_slice(&inputs[..l - j]);
                key.push(Mor::new(s, t, *idx));
                key.extend_from_slice(&inputs[l - i..]);
                if let Some(outer) = cat.op(&key) {
                    for (o, d) in outer {
                        add_into(&mut acc, *o, &sign * c * d);
                    }
                }
            }
        }
    }
    acc
}

/// Restriction to a total order: units on the diagonal, homs kept only
/// from earlier to later objects. `order` lists object indices from
/// smallest to largest; the result's objects follow that order.
pub fn directed_subcategory(cat: &AInfCategory, order: &[usize]) -> Result<AInfCategory> {
    let n = cat.num_objects();
    let mut rank = vec![usize::MAX; n];
    for (r, &o) in order.iter().enumerate() {
        cat.check_object(o)?;
        if rank[o] != usize::MAX {
            return Err(Error::InvalidArgument(format!("object #{o} repeated in order")));
        }
        rank[o] = r;
    }
    if order.len() != n {
        return Err(Error::InvalidArgument("order must cover every object".into()));
    }
    let mut out = AInfCategory::new(order.iter().map(|&o| cat.objects[o].clone()))?;
    // (old src, old tgt, old idx) -> new idx
    let mut remap: HashMap<Mor, Mor> = HashMap::new();
    for (&(s, t), space) in &cat.homs {
        let (rs, rt) = (rank[s], rank[t]);
        if rs == rt {
            if let Some(u) = cat.units.get(&s) {
                let mut sp = GradedSpace::new();
                sp.push(space.name(*u).to_string(), 0)?;
                out.set_hom(rs, rt, sp)?;
                out.set_unit(rs, 0)?;
                remap.insert(Mor::new(s, t, *u), Mor::new(rs, rt, 0));
            }
        } else if rs < rt {
            out.set_hom(rs, rt, space.clone())?;
            for i in 0..space.dim() {
                remap.insert(Mor::new(s, t, i), Mor::new(rs, rt, i));
            }
        }
    }
    for (m, v) in &cat.provenance {
        if let Some(&nm) = remap.get(m) {
            out.provenance.insert(nm, v.clone());
        }
    }
    let mut keys: Vec<&Vec<Mor>> = cat.ops.keys().collect();
    keys.sort();
    for key in keys {
        let Some(new_key) = key.iter().map(|m| remap.get(m).copied()).collect::<Option<Vec<Mor>>>() else {
            continue;
        };
        let (s, t) = AInfCategory::ends(key);
        let outputs: LinComb = cat.ops[key]
            .iter()
            .filter_map(|(i, c)| remap.get(&Mor::new(s, t, *i)).map(|nm| (nm.idx, c.clone())))
            .collect();
        if !outputs.is_empty() {
            out.replace_op(new_key, outputs)?;
        }
    }
    Ok(out)
}

/// A cohomology class basis element of `H(hom(src, tgt))` in `degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassId {
    pub src: usize,
    pub tgt: usize,
    pub degree: i32,
    pub index: usize,
}

/// The cohomological category: homs are `m_1`-cohomology, composition is
/// induced by `m_2`.
#[derive(Clone, Debug)]
pub struct CohomologicalCategory {
    pub objects: Vec<String>,
    /// Per hom space, per degree, the canonical subquotient basis. Only
    /// nonzero cohomology is stored.
    pub homs: BTreeMap<(usize, usize), BTreeMap<i32, SubquotientBasis>>,
    /// Induced `m_2(x_2, x_1)` on classes.
    pub products: BTreeMap<(ClassId, ClassId), Vec<(ClassId, Q)>>,
}

impl CohomologicalCategory {
    pub fn dim(&self, src: usize, tgt: usize, degree: i32) -> usize {
        self.homs.get(&(src, tgt)).and_then(|m| m.get(&degree)).map_or(0, SubquotientBasis::dim)
    }

    pub fn total_dim(&self, src: usize, tgt: usize) -> usize {
        self.homs.get(&(src, tgt)).map_or(0, |m| m.values().map(SubquotientBasis::dim).sum())
    }

    /// Dimension per degree.
    pub fn graded_dims(&self, src: usize, tgt: usize) -> BTreeMap<i32, usize> {
        self.homs
            .get(&(src, tgt))
            .map(|m| m.iter().map(|(&d, b)| (d, b.dim())).collect())
            .unwrap_or_default()
    }
}

/// Embeds a degree-local vector into the whole hom space.
fn embed(space: &GradedSpace, degree: i32, local: &[Q]) -> QVector {
    let mut v = vec![Q::zero(); space.dim()];
    for (k, i) in space.indices_in_degree(degree).into_iter().enumerate() {
        v[i] = local[k].clone();
    }
    v
}

fn restrict(space: &GradedSpace, degree: i32, v: &[Q]) -> QVector {
    space.indices_in_degree(degree).into_iter().map(|i| v[i].clone()).collect()
}

pub fn cohomological_category(cat: &AInfCategory) -> Result<CohomologicalCategory> {
    let mut homs: BTreeMap<(usize, usize), BTreeMap<i32, SubquotientBasis>> = BTreeMap::new();
    for (&(s, t), space) in &cat.homs {
        let mut per_degree = BTreeMap::new();
        for d in space.degrees() {
            let d_in = cat.m1_matrix(s, t, d - 1);
            let d_out = cat.m1_matrix(s, t, d);
            let h = cohomology_in_degree(&d_in, &d_out, d)?;
            if h.dim() > 0 {
                per_degree.insert(d, h);
            }
        }
        if !per_degree.is_empty() {
            homs.insert((s, t), per_degree);
        }
    }

    let mut products = BTreeMap::new();
    if cat.arities.contains(&2) {
        for (&(i, j), h1s) in &homs {
            for (&(j2, k), h2s) in homs.range((j, 0)..(j + 1, 0)) {
                debug_assert_eq!(j, j2);
                let Some(target_space) = cat.hom(i, k) else { continue };
                for (&d1, h1) in h1s {
                    for (&d2, h2) in h2s {
                        let d = d1 + d2;
                        let target = homs.get(&(i, k)).and_then(|m| m.get(&d));
                        let sp1 = &cat.homs[&(i, j)];
                        let sp2 = &cat.homs[&(j, k)];
                        for (x1, r1) in h1.representatives.iter().enumerate() {
                            let v1 = embed(sp1, d1, r1);
                            for (x2, r2) in h2.representatives.iter().enumerate() {
                                let v2 = embed(sp2, d2, r2);
                                let prod = cat.apply(&[i, j, k], &[&v2, &v1])?;
                                let local = restrict(target_space, d, &prod);
                                let coords = match target {
                                    Some(h) => h.class_coordinates(&local).map_err(|e| {
                                        Error::InducedProductIllDefined(format!("product is not closed: {e}"))
                                    })?,
                                    None => {
                                        // No cohomology: the product must be exact.
                                        let d_in = cat.m1_matrix(i, k, d - 1);
                                        let exact = local.iter().all(Zero::is_zero)
                                            || solve(&d_in, &local).is_some();
                                        if !exact {
                                            return Err(Error::InducedProductIllDefined(
                                                "product lands outside the image in a degree with zero cohomology"
                                                    .into(),
                                            ));
                                        }
                                        Vec::new()
                                    }
                                };
                                let entry: Vec<(ClassId, Q)> = coords
                                    .into_iter()
                                    .enumerate()
                                    .filter(|(_, c)| !c.is_zero())
                                    .map(|(idx, c)| (ClassId { src: i, tgt: k, degree: d, index: idx }, c))
                                    .collect();
                                if !entry.is_empty() {
                                    let c2 = ClassId { src: j, tgt: k, degree: d2, index: x2 };
                                    let c1 = ClassId { src: i, tgt: j, degree: d1, index: x1 };
                                    products.insert((c2, c1), entry);
                                }
                            }
                        }
                        check_exact_invariance(cat, (i, j, k), (d1, d2), h1, h2, target)?;
                    }
                }
            }
        }
    }
    Ok(CohomologicalCategory { objects: cat.objects.clone(), homs, products })
}

/// `m_2(r_2, m_1 x)` and `m_2(m_1 y, r_1)` must be exact for the induced
/// product to be independent of representatives.
fn check_exact_invariance(
    cat: &AInfCategory,
    (i, j, k): (usize, usize, usize),
    (d1, d2): (i32, i32),
    h1: &SubquotientBasis,
    h2: &SubquotientBasis,
    target: Option<&SubquotientBasis>,
) -> Result<()> {
    if !cat.arities.contains(&1) {
        return Ok(());
    }
    let sp1 = &cat.homs[&(i, j)];
    let sp2 = &cat.homs[&(j, k)];
    let Some(target_space) = cat.hom(i, k) else { return Ok(()) };
    let d = d1 + d2;
    let is_exact = |local: &[Q]| -> bool {
        match target {
            Some(h) => h.is_exact(local),
            None => {
                let d_in = cat.m1_matrix(i, k, d - 1);
                local.iter().all(Zero::is_zero) || solve(&d_in, local).is_some()
            }
        }
    };
    for x in sp1.indices_in_degree(d1 - 1) {
        let mut basis = vec![Q::zero(); sp1.dim()];
        basis[x] = Q::one();
        let boundary = cat.apply(&[i, j], &[&basis])?;
        for r2 in &h2.representatives {
            let v2 = embed(sp2, d2, r2);
            let prod = cat.apply(&[i, j, k], &[&v2, &boundary])?;
            if !is_exact(&restrict(target_space, d, &prod)) {
                return Err(Error::InducedProductIllDefined("m2(class, exact) is not exact".into()));
            }
        }
    }
    for y in sp2.indices_in_degree(d2 - 1) {
        let mut basis = vec![Q::zero(); sp2.dim()];
        basis[y] = Q::one();
        let boundary = cat.apply(&[j, k], &[&basis])?;
        for r1 in &h1.representatives {
            let v1 = embed(sp1, d1, r1);
            let prod = cat.apply(&[i, j, k], &[&boundary, &v1])?;
            if !is_exact(&restrict(target_space, d, &prod)) {
                return Err(Error::InducedProductIllDefined("m2(exact, class) is not exact".into()));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismRecord {
    pub src: String,
    pub tgt: String,
    pub index: usize,
    pub name: String,
    pub degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorRef {
    pub src: String,
    pub tgt: String,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantRecord {
    pub arity: usize,
    /// `(a_l, ..., a_1)`.
    pub inputs: Vec<MorRef>,
    pub output: MorRef,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitRecord {
    pub object: String,
    pub index: usize,
}

/// Serialized form of an [`AInfCategory`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub schema_version: u32,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismRecord>,
    pub units: Vec<UnitRecord>,
    pub structure_constants: Vec<ConstantRecord>,
}

impl AInfCategory {
    fn mor_ref(&self, m: Mor) -> MorRef {
        MorRef { src: self.objects[m.src].clone(), tgt: self.objects[m.tgt].clone(), index: m.idx }
    }

    pub fn to_json(&self) -> CategoryJson {
        let morphisms = self
            .all_morphisms()
            .into_iter()
            .map(|m| MorphismRecord {
                src: self.objects[m.src].clone(),
                tgt: self.objects[m.tgt].clone(),
                index: m.idx,
                name: self.name(m).to_string(),
                degree: self.degree(m),
                provenance: self.provenance.get(&m).cloned(),
            })
            .collect();
        let units = self
            .units
            .iter()
            .map(|(&o, &i)| UnitRecord { object: self.objects[o].clone(), index: i })
            .collect();
        let structure_constants = self
            .structure_constants()
            .into_iter()
            .map(|(inputs, out, c)| {
                let (s, t) = Self::ends(&inputs);
                ConstantRecord {
                    arity: inputs.len(),
                    inputs: inputs.iter().map(|&m| self.mor_ref(m)).collect(),
                    output: self.mor_ref(Mor::new(s, t, out)),
                    coefficient: fmt_q(&c),
                }
            })
            .collect();
        CategoryJson { schema_version: SCHEMA_VERSION, objects: self.objects.clone(), morphisms, units, structure_constants }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("category serializes")
    }

    pub fn from_json(json: &CategoryJson) -> Result<Self> {
        let mut cat = AInfCategory::new(json.objects.iter().cloned())?;
        let mut spaces: BTreeMap<(usize, usize), Vec<(usize, &MorphismRecord)>> = BTreeMap::new();
        for m in &json.morphisms {
            let key = (cat.object_index(&m.src)?, cat.object_index(&m.tgt)?);
            spaces.entry(key).or_default().push((m.index, m));
        }
        for ((s, t), mut recs) in spaces {
            recs.sort_by_key(|(i, _)| *i);
            let mut sp = GradedSpace::new();
            for (k, (i, r)) in recs.iter().enumerate() {
                if *i != k {
                    return Err(Error::InvalidArgument("morphism indices must be contiguous".into()));
                }
                sp.push(r.name.clone(), r.degree)?;
                if let Some(p) = &r.provenance {
                    cat.provenance.insert(Mor::new(s, t, k), p.clone());
                }
            }
            cat.set_hom(s, t, sp)?;
        }
        for u in &json.units {
            let o = cat.object_index(&u.object)?;
            cat.set_unit(o, u.index)?;
        }
        let resolve = |cat: &AInfCategory, r: &MorRef| -> Result<Mor> {
            Ok(Mor::new(cat.object_index(&r.src)?, cat.object_index(&r.tgt)?, r.index))
        };
        for c in &json.structure_constants {
            let inputs = c.inputs.iter().map(|r| resolve(&cat, r)).collect::<Result<Vec<_>>>()?;
            let out = resolve(&cat, &c.output)?;
            cat.add_op(inputs, out.idx, parse_q(&c.coefficient)?)?;
        }
        Ok(cat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::q;

    /// Two objects X < Y with hom(X, Y) = {f (deg 0), g (deg 1)} and m_1(f) = g.
    fn acyclic_pair() -> AInfCategory {
        let mut c = AInfCategory::new(["X", "Y"]).unwrap();
        c.set_hom(0, 0, GradedSpace::from_basis([("idX".to_string(), 0)]).unwrap()).unwrap();
        c.set_hom(1, 1, GradedSpace::from_basis([("idY".to_string(), 0)]).unwrap()).unwrap();
        c.set_hom(0, 1, GradedSpace::from_basis([("f".to_string(), 0), ("g".to_string(), 1)]).unwrap())
            .unwrap();
        c.set_unit(0, 0).unwrap();
        c.set_unit(1, 0).unwrap();
        c.add_op(vec![Mor::new(0, 1, 0)], 1, q(1)).unwrap();
        c.add_strict_units().unwrap();
        c
    }

    /// Path algebra of A_3 with m_2 only: associative, so the arity-3
    /// relation holds.
    fn a3_path() -> AInfCategory {
        let mut c = AInfCategory::new(["1", "2", "3"]).unwrap();
        for o in 0..3 {
            c.set_hom(o, o, GradedSpace::from_basis([(format!("id{o}"), 0)]).unwrap()).unwrap();
            c.set_unit(o, 0).unwrap();
        }
        c.set_hom(0, 1, GradedSpace::from_basis([("a".to_string(), 0)]).unwrap()).unwrap();
        c.set_hom(1, 2, GradedSpace::from_basis([("b".to_string(), 0)]).unwrap()).unwrap();
        c.set_hom(0, 2, GradedSpace::from_basis([("ba".to_string(), 0)]).unwrap()).unwrap();
        c.add_op(vec![Mor::new(1, 2, 0), Mor::new(0, 1, 0)], 0, q(1)).unwrap();
        c.add_strict_units().unwrap();
        c
    }

    #[test]
    fn associative_m2_passes() {
        let r = check_a_infinity(&a3_path(), 4);
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.instances_checked > 0);
    }

    #[test]
    fn flipped_sign_on_unit_product_is_caught() {
        let mut c = a3_path();
        c.replace_op(vec![Mor::new(1, 2, 0), Mor::new(1, 1, 0)], vec![(0, q(-1))]).unwrap();
        assert!(!check_a_infinity(&c, 3).passed());
    }

    #[test]
    fn degree_rule_enforced() {
        let mut c = acyclic_pair();
        let err = c.add_op(vec![Mor::new(0, 1, 1)], 0, q(1));
        assert!(err.is_err());
    }

    #[test]
    fn acyclic_complex_has_zero_cohomology() {
        let c = acyclic_pair();
        assert!(check_a_infinity(&c, 4).passed());
        let h = cohomological_category(&c).unwrap();
        assert_eq!(h.total_dim(0, 1), 0);
        assert_eq!(h.total_dim(0, 0), 1);
    }

    #[test]
    fn zero_m1_keeps_homs() {
        let c = a3_path();
        let h = cohomological_category(&c).unwrap();
        for (&(s, t), sp) in c.homs() {
            assert_eq!(h.total_dim(s, t), sp.dim());
        }
        let key = (
            ClassId { src: 1, tgt: 2, degree: 0, index: 0 },
            ClassId { src: 0, tgt: 1, degree: 0, index: 0 },
        );
        assert_eq!(h.products[&key], vec![(ClassId { src: 0, tgt: 2, degree: 0, index: 0 }, q(1))]);
    }

    #[test]
    fn directed_single_object_keeps_unit_only() {
        let mut c = AInfCategory::new(["X"]).unwrap();
        c.set_hom(0, 0, GradedSpace::from_basis([("id".to_string(), 0), ("t".to_string(), 2)]).unwrap())
            .unwrap();
        c.set_unit(0, 0).unwrap();
        c.add_strict_units().unwrap();
        let d = directed_subcategory(&c, &[0]).unwrap();
        assert_eq!(d.hom_dim(0, 0), 1);
        assert_eq!(d.unit(0), Some(Mor::new(0, 0, 0)));
    }

    #[test]
    fn directed_reverse_order_drops_forward_homs() {
        let c = a3_path();
        let d = directed_subcategory(&c, &[2, 1, 0]).unwrap();
        assert_eq!(d.objects(), &["3", "2", "1"]);
        for s in 0..3 {
            for t in 0..3 {
                assert_eq!(d.hom_dim(s, t), usize::from(s == t));
            }
        }
        let again = directed_subcategory(&d, &[0, 1, 2]).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn json_roundtrip() {
        let c = acyclic_pair();
        let json = c.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let back: CategoryJson = serde_json::from_str(&text).unwrap();
        assert_eq!(AInfCategory::from_json(&back).unwrap(), c);
        assert_eq!(text, serde_json::to_string(&AInfCategory::from_json(&back).unwrap().to_json()).unwrap());
    }
}
