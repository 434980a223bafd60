//! The exterior-algebra category of the Beilinson collection, with torus
//! weights.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::ainfinity::{AInfCategory, GradedSpace, Mor};
use crate::error::{Error, Result};
use crate::exactlinalg::Q;

/// A wedge monomial `e_{a_1} ^ ... ^ e_{a_k}` with ascending indices,
/// stored as a bitmask (bit `a - 1` for `e_a`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WedgeMonomial(u32);

impl WedgeMonomial {
    pub const UNIT: WedgeMonomial = WedgeMonomial(0);

    pub fn from_bits(bits: u32) -> Self {
        WedgeMonomial(bits)
    }

    /// Builds from 1-based indices in any order; duplicates are rejected.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &a in indices {
            if a == 0 || a > 31 {
                return Err(Error::InvalidArgument(format!("wedge index {a} out of range")));
            }
            if bits & (1 << (a - 1)) != 0 {
                return Err(Error::InvalidArgument(format!("repeated wedge index {a}")));
            }
            bits |= 1 << (a - 1);
        }
        Ok(WedgeMonomial(bits))
    }

    /// Top monomial `e_1 ^ ... ^ e_m`.
    pub fn top(m: usize) -> Self {
        WedgeMonomial(((1u64 << m) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    pub fn contains(self, a: usize) -> bool {
        a >= 1 && self.0 & (1 << (a - 1)) != 0
    }

    /// `self ^ other` as `sign * monomial`, or `None` when they overlap.
    pub fn wedge(self, other: WedgeMonomial) -> Option<(i32, WedgeMonomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // One transposition per pair (a in self, b in other) with a > b.
        let mut inversions = 0;
        for b in other.indices() {
            inversions += (self.0 >> b).count_ones();
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, WedgeMonomial(self.0 | other.0)))
    }

    /// Basis name such as `e1^e3`; the unit is `1`.
    pub fn name(self) -> String {
        if self.0 == 0 {
            return "1".into();
        }
        self.indices().iter().map(|a| format!("e{a}")).collect::<Vec<_>>().join("^")
    }
}

impl fmt::Display for WedgeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// All monomials of degree `k` in `e_1, ..., e_m`, lexicographic in their
/// index lists.
pub fn monomials_of_degree(m: usize, k: usize) -> Vec<WedgeMonomial> {
    fn rec(start: usize, m: usize, k: usize, bits: u32, out: &mut Vec<WedgeMonomial>) {
        if k == 0 {
            out.push(WedgeMonomial(bits));
            return;
        }
        for a in start..=m {
            if m - a + 1 < k {
                break;
            }
            rec(a + 1, m, k - 1, bits | (1 << (a - 1)), out);
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(1, m, k, 0, &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// A torus character, recorded as its integer weight vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn zero(rank: usize) -> Self {
        Character(vec![0; rank])
    }

    pub fn standard(rank: usize, k: usize) -> Self {
        let mut v = vec![0; rank];
        v[k] = 1;
        Character(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Character) -> Character {
        Character(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Character) -> Character {
        Character(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: i64) -> Character {
        Character(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

/// Weights `w(e_1), ..., w(e_{n+1})` of the basis of `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightConvention {
    pub weights: Vec<Character>,
}

impl WeightConvention {
    /// Full torus of rank `n`: `w(e_1) = 0` and `w(e_k)` is the `(k-1)`-th
    /// standard character. Restricting to the last circle factor gives
    /// [`WeightConvention::one_parameter`].
    pub fn full(n: usize) -> Self {
        let mut weights = vec![Character::zero(n)];
        weights.extend((0..n).map(|k| Character::standard(n, k)));
        WeightConvention { weights }
    }

    /// One circle factor acting on `e_{n+1}` with weight 1 and trivially on
    /// `e_1, ..., e_n`.
    pub fn one_parameter(n: usize) -> Self {
        let mut weights = vec![Character(vec![0]); n];
        weights.push(Character(vec![1]));
        WeightConvention { weights }
    }

    /// Number of basis vectors of `V`.
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.weights.first().map_or(0, Character::rank)
    }

    pub fn weight(&self, m: WedgeMonomial) -> Character {
        m.indices().into_iter().fold(Character::zero(self.rank()), |acc, a| acc.add(&self.weights[a - 1]))
    }

    /// Restriction to the given coordinates of the torus.
    pub fn restrict(&self, coords: &[usize]) -> Self {
        WeightConvention {
            weights: self.weights.iter().map(|w| Character(coords.iter().map(|&c| w.0[c]).collect())).collect(),
        }
    }
}

/// Object id of `E_i`.
pub fn exterior_object(i: usize) -> String {
    format!("E{i}")
}

/// The directed exterior category on `E_1 < ... < E_{n+1}`:
/// `hom(E_i, E_j)` is spanned by the degree `j - i` monomials in
/// `e_1, ..., e_{n+1}` and `m_2(s, t) = (-1)^{deg t} s ^ t`.
pub fn build_exterior_category(n: usize) -> Result<AInfCategory> {
    if n == 0 || n >= 31 {
        return Err(Error::InvalidArgument(format!("n = {n} out of range")));
    }
    let m = n + 1;
    let mut cat = AInfCategory::new((1..=m).map(exterior_object))?;
    let mut bases: BTreeMap<(usize, usize), Vec<WedgeMonomial>> = BTreeMap::new();
    for i in 0..m {
        for j in i..m {
            let mons = monomials_of_degree(m, j - i);
            let space = GradedSpace::from_basis(mons.iter().map(|x| (x.name(), x.degree() as i32)))?;
            cat.set_hom(i, j, space)?;
            bases.insert((i, j), mons);
        }
        cat.set_unit(i, 0)?;
    }
    for i in 0..m {
        for j in i..m {
            for k in j..m {
                let target: BTreeMap<WedgeMonomial, usize> =
                    bases[&(i, k)].iter().enumerate().map(|(x, &mon)| (mon, x)).collect();
                for (a, &tau) in bases[&(i, j)].iter().enumerate() {
                    for (b, &sigma) in bases[&(j, k)].iter().enumerate() {
                        if let Some((sign, prod)) = sigma.wedge(tau) {
                            let sign = if tau.degree() % 2 == 0 { sign } else { -sign };
                            cat.add_op(
                                vec![Mor::new(j, k, b), Mor::new(i, j, a)],
                                target[&prod],
                                Q::from_integer(sign.into()),
                            )?;
                        }
                    }
                }
            }
        }
    }
    Ok(cat)
}

/// Monomials of degree `i2 - i1` in `e_1, ..., e_{n+1}` whose weight plus
/// `delta` vanishes: the invariant part of `hom(E_{i1}, E_{i2}) (x) rho_delta`.
pub fn equivariant_hom(
    i1: usize,
    i2: usize,
    delta: &Character,
    w: &WeightConvention,
) -> Result<Vec<WedgeMonomial>> {
    let m = w.dim();
    if !(1 <= i1 && i1 < i2 && i2 <= m) {
        return Err(Error::InvalidArgument(format!("need 1 <= i < i' <= {m}, got ({i1}, {i2})")));
    }
    if delta.rank() != w.rank() {
        return Err(Error::DimensionMismatch("character rank differs from torus rank".into()));
    }
    Ok(monomials_of_degree(m, i2 - i1).into_iter().filter(|&x| w.weight(x).add(delta).is_zero()).collect())
}

/// Graded dimensions of the invariants of `hom(E_{i1}, E_{i2}) (x) rho_m`
/// under one circle factor with weights `one_param` (scalar weights).
pub fn partial_invariants(i1: usize, i2: usize, m: i64, one_param: &WeightConvention) -> Result<BTreeMap<i32, usize>> {
    if one_param.rank() != 1 {
        return Err(Error::DimensionMismatch("one-parameter weights must have rank 1".into()));
    }
    let mons = equivariant_hom(i1, i2, &Character(vec![m]), one_param)?;
    let mut dims = BTreeMap::new();
    if !mons.is_empty() {
        dims.insert((i2 - i1) as i32, mons.len());
    }
    Ok(dims)
}

/// `m_2(s, t)` in the exterior convention, as `sign * monomial`.
pub fn exterior_product(sigma: WedgeMonomial, tau: WedgeMonomial) -> Option<(Q, WedgeMonomial)> {
    sigma.wedge(tau).map(|(s, prod)| {
        let s = if tau.degree() % 2 == 0 { s } else { -s };
        (if s > 0 { Q::one() } else { -Q::one() }, prod)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfinity::check_a_infinity;
    use crate::exactlinalg::q;

    fn mono(ix: &[usize]) -> WedgeMonomial {
        WedgeMonomial::from_indices(ix).unwrap()
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(mono(&[2]).wedge(mono(&[1])), Some((-1, mono(&[1, 2]))));
        assert_eq!(mono(&[1]).wedge(mono(&[2])), Some((1, mono(&[1, 2]))));
        assert_eq!(mono(&[3, 4]).wedge(mono(&[1])), Some((1, mono(&[1, 3, 4]))));
        assert_eq!(mono(&[1, 2]).wedge(mono(&[2, 3])), None);
    }

    #[test]
    fn n3_hom_dims() {
        let c = build_exterior_category(3).unwrap();
        assert_eq!(c.hom_dim(0, 1), 4);
        assert_eq!(c.hom_dim(0, 2), 6);
        assert_eq!(c.hom_dim(0, 3), 4);
        assert_eq!(c.hom_dim(1, 0), 0);
        assert_eq!(c.hom_dim(2, 2), 1);
    }

    #[test]
    fn m2_sign_convention() {
        let c = build_exterior_category(3).unwrap();
        // m2(e2, e1) = (-1)^1 e2 ^ e1 = e1 ^ e2.
        let e1 = c.hom(0, 1).unwrap().index_of("e1").unwrap();
        let e2 = c.hom(1, 2).unwrap().index_of("e2").unwrap();
        let e12 = c.hom(0, 2).unwrap().index_of("e1^e2").unwrap();
        assert_eq!(c.op(&[Mor::new(1, 2, e2), Mor::new(0, 1, e1)]), Some(&vec![(e12, q(1))]));
        let e1b = c.hom(1, 2).unwrap().index_of("e1").unwrap();
        assert_eq!(c.op(&[Mor::new(1, 2, e1b), Mor::new(0, 1, e1)]), None);
    }

    #[test]
    fn relations_hold() {
        for n in 1..=4 {
            let r = check_a_infinity(&build_exterior_category(n).unwrap(), 4);
            assert!(r.passed(), "n = {n}: {:?}", &r.violations[..1]);
        }
    }

    #[test]
    fn equivariant_fixtures_n3() {
        let w = WeightConvention::one_parameter(3);
        assert_eq!(equivariant_hom(1, 2, &Character(vec![-1]), &w).unwrap(), vec![mono(&[4])]);
        assert_eq!(equivariant_hom(1, 3, &Character(vec![0]), &w).unwrap().len(), 3);
        assert!(equivariant_hom(1, 2, &Character(vec![5]), &w).unwrap().is_empty());
    }

    #[test]
    fn partial_invariant_examples() {
        for n in 2..=5 {
            let w = WeightConvention::one_parameter(n);
            assert_eq!(partial_invariants(1, n + 1, 0, &w).unwrap(), BTreeMap::from([(n as i32, 1)]));
            assert_eq!(partial_invariants(1, 2, 0, &w).unwrap(), BTreeMap::from([(1, n)]));
            assert_eq!(partial_invariants(1, 2, -1, &w).unwrap(), BTreeMap::from([(1, 1)]));
        }
    }

    #[test]
    fn full_weights_restrict_to_one_parameter() {
        for n in 1..=5 {
            assert_eq!(WeightConvention::full(n).restrict(&[n - 1]), WeightConvention::one_parameter(n));
        }
    }
}
