//! The category of the objects `Delta_a`, the cones `C_a`, and a hand-built
//! double complex for `hom(C_i, C_j)` that bypasses the twisted-complex
//! engine.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::ainfinity::{AInfCategory, GradedSpace, Mor};
use crate::beilinson::{monomials_of_degree, WedgeMonomial};
use crate::error::{Error, Result};
use crate::exactlinalg::{cohomology_in_degree, kernel_basis, rank, RationalMatrix, Q};
use crate::twisted::{cone, hom_sigma, FormalSum, SigmaElem, SigmaHom, SigmaKey, TwistedComplex};

/// Basis of `hom(Delta_a, Delta_b)` as monomials in `e_1, ..., e_n`.
pub fn delta_basis(n: usize, a: i64, b: i64) -> Vec<WedgeMonomial> {
    if b < a {
        return Vec::new();
    }
    if b == a {
        return vec![WedgeMonomial::UNIT];
    }
    let k = (b - a).rem_euclid(n as i64) as usize;
    if k == 0 {
        vec![WedgeMonomial::UNIT, WedgeMonomial::top(n)]
    } else {
        monomials_of_degree(n, k)
    }
}

pub fn delta_object(a: i64) -> String {
    format!("D{a}")
}

/// The directed category on `Delta_a` for the given labels (sorted and
/// deduplicated), with wedge `m_2` and strict units.
pub fn build_delta_on(n: usize, labels: &[i64]) -> Result<(AInfCategory, Vec<i64>)> {
    if n == 0 || n >= 31 {
        return Err(Error::InvalidArgument(format!("n = {n} out of range")));
    }
    let mut labels = labels.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let mut cat = AInfCategory::new(labels.iter().map(|&a| delta_object(a)))?;
    let mut bases: BTreeMap<(usize, usize), Vec<WedgeMonomial>> = BTreeMap::new();
    for (x, &a) in labels.iter().enumerate() {
        for (y, &b) in labels.iter().enumerate().skip(x) {
            let basis = delta_basis(n, a, b);
            let paired = a != b && (b - a) % n as i64 == 0;
            let names = basis.iter().map(|mono| {
                let name = match (a == b || paired, mono.degree()) {
                    (true, 0) => "id".to_string(),
                    (true, _) => "id*".to_string(),
                    _ => mono.name(),
                };
                (name, mono.degree() as i32)
            });
            cat.set_hom(x, y, GradedSpace::from_basis(names)?)?;
            bases.insert((x, y), basis);
        }
        cat.set_unit(x, 0)?;
    }
    let len = labels.len();
    for x in 0..len {
        for y in x + 1..len {
            for z in y + 1..len {
                let target: BTreeMap<WedgeMonomial, usize> =
                    bases[&(x, z)].iter().enumerate().map(|(k, &mono)| (mono, k)).collect();
                for (ti, &tau) in bases[&(x, y)].iter().enumerate() {
                    for (si, &sigma) in bases[&(y, z)].iter().enumerate() {
                        let Some((sign, prod)) = sigma.wedge(tau) else { continue };
                        let sign = if tau.degree() % 2 == 0 { sign } else { -sign };
                        let out = *target.get(&prod).ok_or_else(|| {
                            Error::DimensionMismatch(format!("product {} missing from hom", prod.name()))
                        })?;
                        cat.add_op(vec![Mor::new(y, z, si), Mor::new(x, y, ti)], out, Q::from_integer(sign.into()))?;
                    }
                }
            }
        }
    }
    cat.add_strict_units()?;
    Ok((cat, labels))
}

/// The category on the window `lo..=hi`.
pub fn build_delta_category(n: usize, lo: i64, hi: i64) -> Result<AInfCategory> {
    let len = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
    if len < 2 * n + 1 {
        return Err(Error::WindowTooSmall { len, needed: 2 * n + 1 });
    }
    let labels: Vec<i64> = (lo..=hi).collect();
    Ok(build_delta_on(n, &labels)?.0)
}

/// Delta objects with their positions in a category.
pub struct DeltaContext {
    pub n: usize,
    pub cat: AInfCategory,
    labels: Vec<i64>,
}

impl DeltaContext {
    pub fn new(n: usize, labels: &[i64]) -> Result<Self> {
        let (cat, labels) = build_delta_on(n, labels)?;
        Ok(DeltaContext { n, cat, labels })
    }

    /// For the cones `C_a` of the given labels.
    pub fn for_cones(n: usize, cones: &[i64]) -> Result<Self> {
        let labels: Vec<i64> = cones.iter().flat_map(|&a| [a, a + n as i64]).collect();
        Self::new(n, &labels)
    }

    pub fn object(&self, a: i64) -> Result<usize> {
        self.labels.binary_search(&a).map_err(|_| Error::UnknownObject(delta_object(a)))
    }

    /// Basis index of a monomial in `hom(Delta_a, Delta_b)`.
    pub fn index(&self, a: i64, b: i64, mono: WedgeMonomial) -> Result<usize> {
        delta_basis(self.n, a, b)
            .iter()
            .position(|&m| m == mono)
            .ok_or_else(|| Error::InvalidArgument(format!("{} not in hom(D{a}, D{b})", mono.name())))
    }

    /// `C_a = Cone(id : Delta_a -> Delta_{a+n})`.
    pub fn cone(&self, a: i64) -> Result<TwistedComplex> {
        let (x, y) = (self.object(a)?, self.object(a + self.n as i64)?);
        let id = SigmaElem::from([(SigmaKey { src_term: 0, tgt_term: 0, idx: 0 }, Q::one())]);
        cone(&self.cat, &TwistedComplex::plain(x), &TwistedComplex::plain(y), &id)
    }
}

/// `C_a` for every `a` with `a + n` in the window.
pub fn build_cones(n: usize, lo: i64, hi: i64) -> Result<Vec<(i64, TwistedComplex)>> {
    let len = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
    if len < 2 * n + 1 {
        return Err(Error::WindowTooSmall { len, needed: 2 * n + 1 });
    }
    let labels: Vec<i64> = (lo..=hi).collect();
    let ctx = DeltaContext::new(n, &labels)?;
    (lo..=hi - n as i64).map(|a| ctx.cone(a).map(|c| (a, c))).collect()
}

/// The square
/// `hom(D_{i+n}, D_j) -> hom(D_i, D_j) (+) hom(D_{i+n}, D_{j+n}) -> hom(D_i, D_{j+n})`
/// with maps `(-1)^{deg - 1} m_2(-, id_{i,i+n})`, `-m_2(id_{j,j+n}, -)`,
/// `m_2(id_{j,j+n}, -)` and `(-1)^{deg - 1} m_2(-, id_{i,i+n})`, written in
/// the basis of `hom_Sigma(C_i, C_j)`.
pub struct DoubleComplex {
    pub hom: SigmaHom,
    /// Differential from each degree to the next.
    pub matrices: BTreeMap<i32, RationalMatrix>,
}

impl DoubleComplex {
    pub fn matrix(&self, d: i32) -> RationalMatrix {
        self.matrices.get(&d).cloned().unwrap_or_else(|| {
            RationalMatrix::zeros(self.hom.space.dim_in_degree(d + 1), self.hom.space.dim_in_degree(d))
        })
    }

    pub fn dims(&self) -> Result<BTreeMap<i32, usize>> {
        let mut out = BTreeMap::new();
        for d in self.hom.space.degrees() {
            let h = cohomology_in_degree(&self.matrix(d - 1), &self.matrix(d), d)?;
            if h.dim() > 0 {
                out.insert(d, h.dim());
            }
        }
        Ok(out)
    }
}

pub fn double_complex(ctx: &DeltaContext, i: i64, j: i64) -> Result<DoubleComplex> {
    let n = ctx.n as i64;
    let cat = &ctx.cat;
    let (di, din, dj, djn) = (ctx.object(i)?, ctx.object(i + n)?, ctx.object(j)?, ctx.object(j + n)?);
    let src = FormalSum { terms: vec![crate::twisted::Term { shift: 1, object: di }, crate::twisted::Term { shift: 0, object: din }] };
    let tgt = FormalSum { terms: vec![crate::twisted::Term { shift: 1, object: dj }, crate::twisted::Term { shift: 0, object: djn }] };
    let hom = hom_sigma(&src, &tgt, cat)?;
    let id_i = Mor::new(di, din, 0);
    let id_j = Mor::new(dj, djn, 0);
    let sign = |deg: i32| if (deg - 1).rem_euclid(2) == 0 { Q::one() } else { -Q::one() };
    let mut images: Vec<Vec<(usize, Q)>> = Vec::with_capacity(hom.dim());
    for key in &hom.keys {
        let mut img: Vec<(usize, Q)> = Vec::new();
        let mut push = |p: usize, q: usize, inputs: [Mor; 2], coef: Q| {
            if let Some(res) = cat.op(&inputs) {
                for (o, c) in res {
                    let pos = hom.position(&SigmaKey { src_term: p, tgt_term: q, idx: *o }).expect("block present");
                    img.push((pos, &coef * c));
                }
            }
        };
        match (key.src_term, key.tgt_term) {
            (1, 0) => {
                let x = Mor::new(din, dj, key.idx);
                let deg = cat.degree(x);
                push(0, 0, [x, id_i], sign(deg));
                push(1, 1, [id_j, x], -Q::one());
            }
            (0, 0) => push(0, 1, [id_j, Mor::new(di, dj, key.idx)], Q::one()),
            (1, 1) => {
                let x = Mor::new(din, djn, key.idx);
                push(0, 1, [x, id_i], sign(cat.degree(x)));
            }
            _ => {}
        }
        images.push(img);
    }
    let mut matrices = BTreeMap::new();
    for d in hom.space.degrees() {
        let from = hom.space.indices_in_degree(d);
        let to = hom.space.indices_in_degree(d + 1);
        let row_of: BTreeMap<usize, usize> = to.iter().enumerate().map(|(r, &x)| (x, r)).collect();
        let mut entries = Vec::new();
        for (col, &x) in from.iter().enumerate() {
            for (pos, c) in &images[x] {
                let row = *row_of.get(pos).ok_or_else(|| Error::InvalidArgument("square map is not of degree 1".into()))?;
                if !c.is_zero() {
                    entries.push((row, col, c.clone()));
                }
            }
        }
        matrices.insert(d, RationalMatrix::from_entries(to.len(), from.len(), entries));
    }
    Ok(DoubleComplex { hom, matrices })
}

/// Graded dimensions of `hom(C_i, C_j)` computed from the square alone.
pub fn double_complex_oracle(n: usize, i: i64, j: i64) -> Result<BTreeMap<i32, usize>> {
    let ctx = DeltaContext::for_cones(n, &[i, j])?;
    double_complex(&ctx, i, j)?.dims()
}

/// Whether two families of vectors span the same subspace.
pub fn same_span(a: &[Vec<Q>], b: &[Vec<Q>], dim: usize) -> bool {
    let ra = rank(&RationalMatrix::from_rows_with_cols(a.to_vec(), dim));
    let rb = rank(&RationalMatrix::from_rows_with_cols(b.to_vec(), dim));
    let both: Vec<Vec<Q>> = a.iter().chain(b).cloned().collect();
    ra == rb && rank(&RationalMatrix::from_rows_with_cols(both, dim)) == ra
}

/// Differences between the twisted-complex route and the square for
/// `hom(C_i, C_j)`: graded dimensions, cocycles and coboundaries.
pub fn oracle_differences(n: usize, i: i64, j: i64) -> Result<Vec<String>> {
    let ctx = DeltaContext::for_cones(n, &[i, j])?;
    let (ci, cj) = (ctx.cone(i)?, ctx.cone(j)?);
    let sq = double_complex(&ctx, i, j)?;
    let generic = crate::twisted::hom_cohomology(&ctx.cat, &ci, &cj)?;
    let mut diffs = Vec::new();
    if generic.dims() != sq.dims()? {
        diffs.push(format!("hom(C{i}, C{j}) dims {:?} vs oracle {:?}", generic.dims(), sq.dims()?));
    }
    for d in sq.hom.space.degrees() {
        let m_gen = crate::twisted::m1_matrix(&ctx.cat, &ci, &cj, &generic.hom, d)?;
        let m_orc = sq.matrix(d);
        let width = sq.hom.space.dim_in_degree(d);
        if !same_span(&kernel_basis(&m_gen), &kernel_basis(&m_orc), width) {
            diffs.push(format!("hom(C{i}, C{j}) degree {d}: cocycles differ"));
        }
        let prev_gen = crate::twisted::m1_matrix(&ctx.cat, &ci, &cj, &generic.hom, d - 1)?;
        if !same_span(&prev_gen.columns(), &sq.matrix(d - 1).columns(), width) {
            diffs.push(format!("hom(C{i}, C{j}) degree {d}: coboundaries differ"));
        }
    }
    Ok(diffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_hom_dims_n3() {
        let cat = build_delta_category(3, 1, 8).unwrap();
        let at = |a: i64| (a - 1) as usize;
        assert_eq!(cat.hom_dim(at(1), at(4)), 2);
        assert_eq!(cat.hom_dim(at(1), at(3)), 3);
        assert_eq!(cat.hom_dim(at(4), at(1)), 0);
    }

    #[test]
    fn window_too_small() {
        assert_eq!(build_delta_category(3, 0, 5).unwrap_err(), Error::WindowTooSmall { len: 6, needed: 7 });
    }

    #[test]
    fn delta_relations() {
        let cat = build_delta_category(2, 0, 5).unwrap();
        assert!(crate::ainfinity::check_a_infinity(&cat, 4).passed());
    }

    #[test]
    fn oracle_cases_n3() {
        let n = 3;
        assert_eq!(double_complex_oracle(n, 5, 5).unwrap(), BTreeMap::from([(0, 1), (4, 1)]));
        // i - n <= j <= i - 1: one group of dimension C(n, j - i + n).
        assert_eq!(double_complex_oracle(n, 5, 3).unwrap(), BTreeMap::from([(2, 3)]));
        assert_eq!(double_complex_oracle(n, 5, 7).unwrap(), BTreeMap::from([(2, 3)]));
        assert_eq!(double_complex_oracle(n, 5, 8).unwrap(), BTreeMap::from([(3, 1)]));
        assert!(double_complex_oracle(n, 5, 9).unwrap().is_empty());
    }

    #[test]
    fn generic_route_agrees_with_square() {
        for j in -4..=9 {
            assert!(oracle_differences(3, 0, j).unwrap().is_empty(), "j = {j}");
        }
    }
}
