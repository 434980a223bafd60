//! The permutohedron of order `n + 1`, its faces as ordered set divisions,
//! the translation lattice spanned by the `l_i`, and the tessellation of
//! the torus `H / Lambda` into `n + 1` cells.
//!
//! Points live in the hyperplane `H = { x in Q^{n+1} : sum x = 1 + ... + (n+1) }`
//! and are never projected, so incidence tests are exact integer
//! comparisons.

mod locate;
pub mod mesh;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::beilinson::WedgeMonomial;
use crate::error::{Error, Result};
use crate::exactlinalg::{rank, RationalMatrix, Q};

pub use locate::{locate_point, point_in_fundamental_domain, Location};

/// Ordered division of `{1, ..., n+1}` into disjoint nonempty blocks. Two
/// blocks describe a facet, three a codimension-two face, `n + 1` a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Division {
    blocks: Vec<Vec<usize>>,
}

impl Division {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || !seen.insert(x) {
                    return Err(Error::InvalidArgument(format!("element {x} is repeated or zero")));
                }
            }
        }
        let m = seen.len();
        if seen.iter().next_back() != Some(&m) {
            return Err(Error::InvalidArgument("blocks must cover 1..=n+1".into()));
        }
        Ok(Division { blocks })
    }

    /// Facet `B1 | B2` with `B1` the complement of `b2` in `{1, ..., m}`.
    pub fn facet_from_b2(m: usize, b2: &[usize]) -> Result<Self> {
        let b1: Vec<usize> = (1..=m).filter(|x| !b2.contains(x)).collect();
        Division::new(vec![b1, b2.to_vec()])
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Size of the ground set, `n + 1`.
    pub fn ground(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Last block of a facet.
    pub fn b2(&self) -> &[usize] {
        &self.blocks[self.blocks.len() - 1]
    }

    /// Whether `self` is obtained from `coarse` by splitting blocks in
    /// place, i.e. `self` is a face of `coarse`.
    pub fn refines(&self, coarse: &Division) -> bool {
        let mut it = self.blocks.iter();
        for cb in &coarse.blocks {
            let mut acc: Vec<usize> = Vec::new();
            while acc.len() < cb.len() {
                match it.next() {
                    Some(b) => acc.extend(b),
                    None => return false,
                }
            }
            acc.sort_unstable();
            if &acc != cb {
                return false;
            }
        }
        it.next().is_none()
    }

    /// Centroid of the face: coordinate `x` in block `k` equals the mean of
    /// the ranks that block occupies.
    pub fn centroid(&self) -> Vec<Q> {
        let m = self.ground();
        let mut out = vec![Q::zero(); m];
        let mut start = 0i64;
        for b in &self.blocks {
            let len = b.len() as i64;
            let mean = Q::new((2 * start + len + 1).into(), 2.into());
            for &x in b {
                out[x - 1] = mean.clone();
            }
            start += len;
        }
        out
    }
}

impl fmt::Display for Division {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.blocks.iter().map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// All ordered divisions of `{1, ..., m}` into `k` blocks, sorted.
pub fn ordered_divisions(m: usize, k: usize) -> Vec<Division> {
    let mut out = Vec::new();
    if k == 0 || k > m {
        return out;
    }
    let mut assign = vec![0usize; m];
    loop {
        let mut blocks = vec![Vec::new(); k];
        for (x, &b) in assign.iter().enumerate() {
            blocks[b].push(x + 1);
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.push(Division { blocks });
        }
        let mut pos = 0;
        loop {
            if pos == m {
                out.sort();
                return out;
            }
            assign[pos] += 1;
            if assign[pos] < k {
                break;
            }
            assign[pos] = 0;
            pos += 1;
        }
    }
}

fn triangular(k: usize) -> i64 {
    (k * (k + 1) / 2) as i64
}

/// The permutohedron: convex hull of the permutations of `(1, ..., n+1)`.
#[derive(Clone, Debug)]
pub struct Permutohedron {
    pub n: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<Division>,
    pub codim2: Vec<Division>,
}

impl Permutohedron {
    pub fn build(n: usize) -> Result<Self> {
        if n == 0 || n > 9 {
            return Err(Error::InvalidArgument(format!("n = {n} out of range 1..=9")));
        }
        let m = n + 1;
        let mut vertices = Vec::new();
        let mut perm: Vec<i64> = (1..=m as i64).collect();
        permutations(&mut perm, 0, &mut vertices);
        vertices.sort();
        let mut facets = ordered_divisions(m, 2);
        facets.sort_by(|a, b| (a.b2().len(), a.b2()).cmp(&(b.b2().len(), b.b2())));
        let codim2 = if n >= 2 { ordered_divisions(m, 3) } else { Vec::new() };
        Ok(Permutohedron { n, vertices, facets, codim2 })
    }

    /// Faces of dimension `d`, i.e. divisions into `n + 1 - d` blocks.
    pub fn faces_of_dim(&self, d: usize) -> Vec<Division> {
        ordered_divisions(self.n + 1, self.n + 1 - d)
    }

    pub fn edge_count(&self) -> usize {
        if self.n == 1 {
            1
        } else {
            self.faces_of_dim(1).len()
        }
    }

    /// Vertices lying on the face: each block takes the next consecutive run
    /// of values.
    pub fn vertices_on(&self, face: &Division) -> Vec<Vec<i64>> {
        self.vertices.iter().filter(|v| vertex_on(v, face)).cloned().collect()
    }

    /// Minimum of `sum_{i in B1} x_i` over the vertices and the vertices
    /// attaining it.
    pub fn facet_support(&self, facet: &Division) -> (i64, Vec<Vec<i64>>) {
        let b1 = &facet.blocks[0];
        let val = |v: &Vec<i64>| b1.iter().map(|&i| v[i - 1]).sum::<i64>();
        let min = self.vertices.iter().map(val).min().expect("vertices");
        (min, self.vertices.iter().filter(|v| val(v) == min).cloned().collect())
    }

    /// Center `((n+2)/2, ..., (n+2)/2)`.
    pub fn center(&self) -> Vec<Q> {
        vec![Q::new(((self.n + 2) as i64).into(), 2.into()); self.n + 1]
    }

    /// Interior test for `x - offset`: every proper subset sum strictly
    /// exceeds the facet bound. Returns `Some(true)` inside, `Some(false)`
    /// on the boundary and `None` outside.
    pub fn classify(&self, x: &[Q], offset: &[i64]) -> Option<bool> {
        let m = self.n + 1;
        let y: Vec<Q> = x.iter().zip(offset).map(|(a, &o)| a - Q::from_integer(o.into())).collect();
        let total: Q = y.iter().sum();
        if total != Q::from_integer(triangular(m).into()) {
            return None;
        }
        let mut on_boundary = false;
        for mask in 1u32..(1 << m) - 1 {
            let mut s = Q::zero();
            for (i, yi) in y.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s += yi;
                }
            }
            let bound = Q::from_integer(triangular(mask.count_ones() as usize).into());
            if s < bound {
                return None;
            }
            if s == bound {
                on_boundary = true;
            }
        }
        Some(!on_boundary)
    }

    /// Exact `n`-volume in the coordinates `(x_1, ..., x_n)`, by summing
    /// the simplices of the barycentric subdivision over all complete flags.
    pub fn volume(&self) -> Q {
        let m = self.n + 1;
        let c = self.center();
        let whole = Division { blocks: vec![(1..=m).collect()] };
        let mut chain: Vec<Vec<Q>> = Vec::new();
        let mut total = Q::zero();
        flag_volumes(&whole, &c, self.n, &mut chain, &mut total);
        let fact: i64 = (1..=self.n as i64).product();
        total / Q::from_integer(fact.into())
    }
}

fn permutations(v: &mut Vec<i64>, k: usize, out: &mut Vec<Vec<i64>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

fn vertex_on(v: &[i64], face: &Division) -> bool {
    let mut lo = 0i64;
    for b in &face.blocks {
        let hi = lo + b.len() as i64;
        if !b.iter().all(|&i| v[i - 1] > lo && v[i - 1] <= hi) {
            return false;
        }
        lo = hi;
    }
    true
}

fn flag_volumes(face: &Division, c: &[Q], n: usize, chain: &mut Vec<Vec<Q>>, total: &mut Q) {
    if face.len() == n + 1 {
        let rows: Vec<Vec<Q>> = chain.clone();
        *total += det(rows).abs();
        return;
    }
    for (k, b) in face.blocks.iter().enumerate() {
        if b.len() < 2 {
            continue;
        }
        // Split block k into an ordered pair of nonempty parts.
        let len = b.len();
        for mask in 1u32..(1 << len) - 1 {
            let first: Vec<usize> = (0..len).filter(|i| mask & (1 << i) != 0).map(|i| b[i]).collect();
            let second: Vec<usize> = (0..len).filter(|i| mask & (1 << i) == 0).map(|i| b[i]).collect();
            let mut blocks = face.blocks.clone();
            blocks.splice(k..=k, [first, second]);
            let sub = Division { blocks };
            let cen = sub.centroid();
            chain.push(cen[..n].iter().zip(c).map(|(a, b)| a - b).collect());
            flag_volumes(&sub, c, n, chain, total);
            chain.pop();
        }
    }
}

/// Exact determinant by elimination.
pub(crate) fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut d = Q::from_integer(1.into());
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        let piv = a[col][col].clone();
        d *= &piv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &piv;
            for c2 in col..n {
                let t = &f * &a[col][c2];
                a[r][c2] -= t;
            }
        }
    }
    d
}

/// An integer vector of the hyperplane lattice spanned by the `l_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
}

impl LatticeVector {
    pub fn zero(m: usize) -> Self {
        LatticeVector { coords: vec![0; m] }
    }

    /// `l_i = (n+1) e_i - (e_1 + ... + e_{n+1})`, `i` 1-based, `m = n + 1`.
    pub fn ell(m: usize, i: usize) -> Self {
        let mut coords = vec![-1; m];
        coords[i - 1] += m as i64;
        LatticeVector { coords }
    }

    pub fn from_ell_coefficients(m: usize, a: &[i64]) -> Self {
        let mut out = Self::zero(m);
        for (i, &ai) in a.iter().enumerate() {
            out = out.add(&Self::ell(m, i + 1).scale(ai));
        }
        out
    }

    /// Coefficients `a` with `self = sum_{i <= n} a_i l_i`, or `None` if
    /// `self` is not in the lattice.
    pub fn ell_coefficients(&self) -> Option<Vec<i64>> {
        let m = self.coords.len() as i64;
        if self.coords.iter().sum::<i64>() != 0 {
            return None;
        }
        let last = self.coords[self.coords.len() - 1];
        let a: Option<Vec<i64>> = self.coords[..self.coords.len() - 1]
            .iter()
            .map(|&u| if (u - last) % m == 0 { Some((u - last) / m) } else { None })
            .collect();
        a
    }

    pub fn add(&self, o: &LatticeVector) -> Self {
        LatticeVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &LatticeVector) -> Self {
        LatticeVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: i64) -> Self {
        LatticeVector { coords: self.coords.iter().map(|a| a * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&a| a == 0)
    }
}

/// `sum_{i in B2} l_i`: the translation carrying a tile to its neighbour
/// across the facet `B1 | B2`.
pub fn neighbor_translation(f: &Division) -> Result<LatticeVector> {
    if f.len() != 2 {
        return Err(Error::InvalidArgument("facet divisions have two blocks".into()));
    }
    let m = f.ground();
    Ok(f.b2().iter().fold(LatticeVector::zero(m), |acc, &i| acc.add(&LatticeVector::ell(m, i))))
}

/// A facet of a tile, located by the tile's translate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedFacet {
    /// Translate of the tile, relative to the tile carrying the face.
    pub tile: LatticeVector,
    pub facet: Division,
}

/// The three facets around a codimension-two face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codim2Neighbors {
    /// `B1 u B2 | B3` seen from the tile itself.
    pub first: PlacedFacet,
    /// `(B1 u B3) | B2` seen from the neighbour across `first`.
    pub second: PlacedFacet,
    /// `B1 | B2 u B3` seen from the tile itself; `B2'' = B3 u B2`.
    pub composite: PlacedFacet,
}

pub fn codim2_neighbors(e: &Division) -> Result<Codim2Neighbors> {
    if e.len() != 3 {
        return Err(Error::InvalidArgument("codimension-two faces have three blocks".into()));
    }
    let m = e.ground();
    let [b1, b2, b3] = [&e.blocks[0], &e.blocks[1], &e.blocks[2]];
    let first = Division::facet_from_b2(m, b3)?;
    let second = Division::facet_from_b2(m, b2)?;
    let mut b23: Vec<usize> = b2.iter().chain(b3.iter()).copied().collect();
    b23.sort_unstable();
    let composite = Division::new(vec![b1.clone(), b23])?;
    let shift = neighbor_translation(&first)?;
    Ok(Codim2Neighbors {
        first: PlacedFacet { tile: LatticeVector::zero(m), facet: first },
        second: PlacedFacet { tile: shift, facet: second },
        composite: PlacedFacet { tile: LatticeVector::zero(m), facet: composite },
    })
}

/// `B1 | B2 -> e_{B2}`.
pub fn facet_to_wedge(f: &Division) -> Result<WedgeMonomial> {
    if f.len() != 2 {
        return Err(Error::InvalidArgument("facet divisions have two blocks".into()));
    }
    WedgeMonomial::from_indices(f.b2())
}

/// The tessellation of `H` by translates of the permutohedron, modulo
/// `Lambda`, which has `n + 1` cells `P_i = P_1 + (i - 1) l_{n+1}`.
#[derive(Clone, Debug)]
pub struct TorusTessellation {
    pub n: usize,
    pub base: Permutohedron,
    /// Offsets `(i - 1) l_{n+1}`, one per cell.
    pub cells: Vec<LatticeVector>,
    /// Generators `g_b = l_b + (l_1 + ... + l_n)`, `b = 1..n`.
    pub lambda_basis: Vec<LatticeVector>,
}

impl TorusTessellation {
    pub fn build(n: usize) -> Result<Self> {
        let base = Permutohedron::build(n)?;
        let m = n + 1;
        let lnp1 = LatticeVector::ell(m, m);
        let cells = (0..m).map(|i| lnp1.scale(i as i64)).collect();
        let sum_n = (1..=n).fold(LatticeVector::zero(m), |acc, i| acc.add(&LatticeVector::ell(m, i)));
        let lambda_basis = (1..=n).map(|b| LatticeVector::ell(m, b).add(&sum_n)).collect();
        Ok(TorusTessellation { n, base, cells, lambda_basis })
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Coordinates of `v` in the `g_b` basis of `Lambda`, or `None` when
    /// `v` is not in `Lambda`.
    pub fn lambda_coordinates(&self, v: &LatticeVector) -> Option<Vec<i64>> {
        let m = (self.n + 1) as i64;
        if v.coords.iter().sum::<i64>() != 0 {
            return None;
        }
        // g_b = (n+1)(e_b - e_{n+1}).
        let x: Option<Vec<i64>> =
            v.coords[..self.n].iter().map(|&u| if u % m == 0 { Some(u / m) } else { None }).collect();
        x
    }

    pub fn lambda_vector(&self, x: &[i64]) -> LatticeVector {
        x.iter()
            .zip(&self.lambda_basis)
            .fold(LatticeVector::zero(self.n + 1), |acc, (&c, g)| acc.add(&g.scale(c)))
    }

    /// Splits a tile translate `v` into `(cell index 1..=n+1, lambda)`.
    pub fn cell_of_translate(&self, v: &LatticeVector) -> Option<(usize, Vec<i64>)> {
        self.cells.iter().enumerate().find_map(|(i, off)| self.lambda_coordinates(&v.sub(off)).map(|l| (i + 1, l)))
    }

    /// Covolume of `Lambda` in the coordinates `(x_1, ..., x_n)`.
    pub fn lambda_covolume(&self) -> Q {
        let rows: Vec<Vec<Q>> = self
            .lambda_basis
            .iter()
            .map(|g| g.coords[..self.n].iter().map(|&c| Q::from_integer(c.into())).collect())
            .collect();
        det(rows).abs()
    }

    /// Index of `Lambda` in the lattice spanned by the `l_i`.
    pub fn index_in_ell_lattice(&self) -> Q {
        let rows: Vec<Vec<Q>> = (1..=self.n)
            .map(|i| LatticeVector::ell(self.n + 1, i).coords[..self.n].iter().map(|&c| Q::from_integer(c.into())).collect())
            .collect();
        self.lambda_covolume() / det(rows).abs()
    }

    /// Whether the `g_b` are linearly independent.
    pub fn lambda_has_full_rank(&self) -> bool {
        let m = RationalMatrix::from_rows(
            self.lambda_basis.iter().map(|g| g.coords.iter().map(|&c| Q::from_integer(c.into())).collect()).collect(),
        );
        rank(&m) == self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_counts() {
        let p = Permutohedron::build(3).unwrap();
        assert_eq!((p.vertices.len(), p.facets.len(), p.codim2.len()), (24, 14, 36));
        let p = Permutohedron::build(2).unwrap();
        assert_eq!((p.vertices.len(), p.facets.len()), (6, 6));
        let p = Permutohedron::build(1).unwrap();
        assert_eq!((p.vertices.len(), p.facets.len(), p.codim2.len()), (2, 2, 0));
    }

    #[test]
    fn neighbor_translation_examples() {
        let f = Division::facet_from_b2(4, &[1, 3]).unwrap();
        assert_eq!(neighbor_translation(&f).unwrap().coords, vec![2, -2, 2, -2]);
        let f = Division::facet_from_b2(4, &[1, 2, 4]).unwrap();
        assert_eq!(neighbor_translation(&f).unwrap(), LatticeVector::ell(4, 3).scale(-1));
    }

    #[test]
    fn codim2_example_n2() {
        let e = Division::new(vec![vec![1], vec![2], vec![3]]).unwrap();
        let nb = codim2_neighbors(&e).unwrap();
        assert_eq!(nb.first.facet.b2(), &[3]);
        assert_eq!(nb.second.facet.b2(), &[2]);
        assert_eq!(nb.composite.facet.b2(), &[2, 3]);
        assert_eq!(nb.second.tile, LatticeVector::ell(3, 3));
    }

    #[test]
    fn refinement() {
        let coarse = Division::new(vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert!(Division::new(vec![vec![2], vec![1], vec![3, 4]]).unwrap().refines(&coarse));
        assert!(!Division::new(vec![vec![3], vec![1, 2], vec![4]]).unwrap().refines(&coarse));
    }

    #[test]
    fn volume_matches_lattice() {
        for n in 1..=4 {
            let t = TorusTessellation::build(n).unwrap();
            let cells = Q::from_integer((n as i64 + 1).into()) * t.base.volume();
            assert_eq!(cells, t.lambda_covolume(), "n = {n}");
            assert_eq!(t.index_in_ell_lattice(), Q::from_integer((n as i64 + 1).into()));
        }
    }
}
