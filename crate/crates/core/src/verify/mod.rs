//! End-to-end comparison of the cone computation, the exterior category,
//! the coamoeba category and its covers.
//!
//! Cohomology classes of `hom(C_a, C_b)` are matched with monomials in
//! `e_1, ..., e_{n+1}` by fixed representatives. With `d = b - a`:
//!
//! - `1 <= d <= n`: the pair `(tau, tau)` on the two diagonal blocks is
//!   `tau` (for `d = n` the pair `(id*, id*)` is `e_1 ^ ... ^ e_n`);
//! - `-n <= d <= -1`: `tau` on the block `Delta_a -> Delta_{b+n}` is
//!   `e_{n+1} ^ tau`.

pub mod delta;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ainfinity::{check_a_infinity, AInfCategory, SCHEMA_VERSION};
use crate::beilinson::{binomial, build_exterior_category, equivariant_hom, exterior_product, monomials_of_degree, Character, WedgeMonomial, WeightConvention};
use crate::coamoeba::{build_coamoeba, category_of, compare_with_exterior, cover_category, inject_sign_flip, wedge_constants, CoverKind, CoverObject, CoverWindow};
use crate::error::{Error, Result};
use crate::exactlinalg::{fmt_q, rank, RationalMatrix, Q};
use crate::twisted::{hom_cohomology, m_tw, HomCohomology, SigmaElem, SigmaKey};

pub use delta::{
    build_cones, build_delta_category, build_delta_on, double_complex, double_complex_oracle, oracle_differences,
    DeltaContext,
};

/// A fixed cocycle and the signed monomial it stands for.
#[derive(Clone, Debug)]
pub struct Representative {
    pub cocycle: SigmaElem,
    pub sign: i32,
    pub monomial: WedgeMonomial,
}

/// Degree of the classes in `hom(C_a, C_{a+d})` after descending.
pub fn descended_degree(n: usize, d: i64) -> i64 {
    if d > 0 {
        d
    } else {
        d + n as i64 + 1
    }
}

/// Representatives for `hom(C_a, C_b)`, empty unless `-n <= b - a <= n`.
pub fn representatives(ctx: &DeltaContext, a: i64, b: i64) -> Result<Vec<Representative>> {
    let n = ctx.n;
    let ni = n as i64;
    let d = b - a;
    let one = |k: SigmaKey| (k, Q::one());
    let mut out = Vec::new();
    if d == 0 {
        let cocycle = SigmaElem::from([
            one(SigmaKey { src_term: 0, tgt_term: 0, idx: 0 }),
            one(SigmaKey { src_term: 1, tgt_term: 1, idx: 0 }),
        ]);
        out.push(Representative { cocycle, sign: 1, monomial: WedgeMonomial::UNIT });
    } else if (1..=ni).contains(&d) {
        for tau in monomials_of_degree(n, d as usize) {
            let cocycle = SigmaElem::from([
                one(SigmaKey { src_term: 0, tgt_term: 0, idx: ctx.index(a, b, tau)? }),
                one(SigmaKey { src_term: 1, tgt_term: 1, idx: ctx.index(a + ni, b + ni, tau)? }),
            ]);
            out.push(Representative { cocycle, sign: 1, monomial: tau });
        }
    } else if (-ni..=-1).contains(&d) {
        let top = WedgeMonomial::from_indices(&[n + 1])?;
        for tau in monomials_of_degree(n, (d + ni) as usize) {
            let cocycle = SigmaElem::from([one(SigmaKey { src_term: 0, tgt_term: 1, idx: ctx.index(a, b + ni, tau)? })]);
            let (sign, monomial) = top.wedge(tau).expect("e_{n+1} is not in tau");
            out.push(Representative { cocycle, sign, monomial });
        }
    }
    Ok(out)
}

/// Coordinates of a cocycle in the representative basis, or an error when
/// the representatives do not form a basis of cohomology.
fn rep_coordinates(h: &HomCohomology, degree: i32, reps: &[Representative], e: &SigmaElem) -> Result<Vec<Q>> {
    let basis: Vec<SigmaElem> = reps.iter().map(|r| r.cocycle.clone()).collect();
    h.coordinates_in(degree, &basis, e)
}

/// One route's view of the directed category on `n + 1` objects: graded
/// dimensions and `m_2` constants in monomial bases.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomTable {
    pub entries: BTreeMap<String, HomEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomEntry {
    pub dims: BTreeMap<i32, usize>,
    /// Products landing in this pair, `middle:sigma*tau=c rho`.
    pub constants: Vec<String>,
    pub fingerprint: String,
}

fn pair_key(i: usize, j: usize) -> String {
    format!("{i},{j}")
}

fn constant_line(mid: usize, sigma: &str, tau: &str, c: &Q, rho: &str) -> String {
    format!("{mid}:{sigma}*{tau}={} {rho}", fmt_q(c))
}

impl HomTable {
    fn build(
        n: usize,
        dims: impl Fn(usize, usize) -> BTreeMap<i32, usize>,
        constants: BTreeMap<(usize, usize), BTreeSet<String>>,
    ) -> Self {
        let mut entries = BTreeMap::new();
        for i in 1..=n + 1 {
            for j in i + 1..=n + 1 {
                let lines: Vec<String> = constants.get(&(i, j)).map(|s| s.iter().cloned().collect()).unwrap_or_default();
                let mut hasher = Sha256::new();
                for l in &lines {
                    hasher.update(l.as_bytes());
                    hasher.update(b"\n");
                }
                let fingerprint = format!("{:x}", hasher.finalize());
                entries.insert(pair_key(i, j), HomEntry { dims: dims(i, j), constants: lines, fingerprint });
            }
        }
        HomTable { entries }
    }

    /// Differences, one line per mismatching item.
    pub fn compare(&self, other: &HomTable, this: &str, that: &str) -> Vec<String> {
        let mut diffs = Vec::new();
        for (k, a) in &self.entries {
            let Some(b) = other.entries.get(k) else {
                diffs.push(format!("pair {k}: missing from {that}"));
                continue;
            };
            if a.dims != b.dims {
                diffs.push(format!("pair {k}: dims {:?} ({this}) vs {:?} ({that})", a.dims, b.dims));
            }
            if a.fingerprint != b.fingerprint {
                let sa: BTreeSet<&String> = a.constants.iter().collect();
                let sb: BTreeSet<&String> = b.constants.iter().collect();
                for l in sa.difference(&sb) {
                    diffs.push(format!("pair {k}: {l} only in {this}"));
                }
                for l in sb.difference(&sa) {
                    diffs.push(format!("pair {k}: {l} only in {that}"));
                }
            }
        }
        diffs
    }
}

fn category_dims(cat: &AInfCategory, i: usize, j: usize) -> BTreeMap<i32, usize> {
    cat.hom(i - 1, j - 1)
        .map(|h| h.degrees().into_iter().map(|d| (d, h.dim_in_degree(d))).collect())
        .unwrap_or_default()
}

/// Table of the directed exterior category.
pub fn exterior_table(n: usize) -> Result<HomTable> {
    let ext = build_exterior_category(n)?;
    let mut consts: BTreeMap<(usize, usize), BTreeSet<String>> = BTreeMap::new();
    for (inputs, o, c) in ext.structure_constants() {
        if inputs.len() != 2 || inputs.iter().any(|m| m.src == m.tgt) {
            continue;
        }
        let (s, t) = (inputs[0], inputs[1]);
        let rho = ext.hom(t.src, s.tgt).expect("hom").name(o);
        consts.entry((t.src + 1, s.tgt + 1)).or_default().insert(constant_line(t.tgt + 1, ext.name(s), ext.name(t), &c, rho));
    }
    Ok(HomTable::build(n, |i, j| category_dims(&ext, i, j), consts))
}

/// Table of the coamoeba category, renamed through `B1 | B2 -> e_{B2}`.
pub fn coamoeba_table(n: usize, sign_flip: bool) -> Result<HomTable> {
    let g = build_coamoeba(n)?;
    let mut cat = category_of(&g)?;
    if sign_flip {
        inject_sign_flip(&mut cat)?;
    }
    let mut consts: BTreeMap<(usize, usize), BTreeSet<String>> = BTreeMap::new();
    for ((i, j, k, sigma, tau), (rho, c)) in wedge_constants(&g, &cat)? {
        consts.entry((i + 1, k + 1)).or_default().insert(constant_line(j + 1, &sigma, &tau, &c, &rho));
    }
    Ok(HomTable::build(n, |i, j| category_dims(&cat, i, j), consts))
}

/// Descended cohomology of `hom(C_i, C_j)` for `j - i = k`, summed over
/// the lifts `k + m (n + 1)`, `m = -2..=1`, with per-lift dimensions.
pub fn descended_dims(n: usize, k: i64) -> Result<(BTreeMap<i32, usize>, Vec<(i64, BTreeMap<i32, usize>)>)> {
    let mut total: BTreeMap<i32, usize> = BTreeMap::new();
    let mut per_lift = Vec::new();
    for m in -2..=1 {
        let d = k + m * (n as i64 + 1);
        let ctx = DeltaContext::for_cones(n, &[0, d])?;
        let h = hom_cohomology(&ctx.cat, &ctx.cone(0)?, &ctx.cone(d)?)?;
        for (deg, dim) in h.dims() {
            *total.entry(deg).or_default() += dim;
        }
        per_lift.push((d, h.dims()));
    }
    Ok((total, per_lift))
}

/// Checks that the representatives of `hom(C_0, C_d)` are cocycles whose
/// classes form a basis.
pub fn check_representatives(n: usize, d: i64) -> Result<Vec<String>> {
    let ctx = DeltaContext::for_cones(n, &[0, d])?;
    let h = hom_cohomology(&ctx.cat, &ctx.cone(0)?, &ctx.cone(d)?)?;
    let reps = representatives(&ctx, 0, d)?;
    let deg = descended_degree(n, d) as i32;
    let deg = if d == 0 { 0 } else { deg };
    let mut diffs = Vec::new();
    if reps.len() != h.dim(deg) {
        diffs.push(format!("hom(C0, C{d}): {} representatives for dimension {}", reps.len(), h.dim(deg)));
        return Ok(diffs);
    }
    let mut rows = Vec::new();
    for r in &reps {
        match h.class_coordinates(deg, &r.cocycle) {
            Ok(c) => rows.push(c),
            Err(_) => diffs.push(format!("hom(C0, C{d}): representative of {} is not closed", r.monomial.name())),
        }
    }
    if diffs.is_empty() && rank(&RationalMatrix::from_rows_with_cols(rows, reps.len())) != reps.len() {
        diffs.push(format!("hom(C0, C{d}): representatives are dependent"));
    }
    Ok(diffs)
}

/// `m_2` on cone cohomology in monomial bases for the step sizes
/// `k1 = j - i` and `k2 = k - j`: `(sigma, tau) -> (coefficient, rho)`.
pub fn cone_products(n: usize, k1: i64, k2: i64) -> Result<BTreeMap<(WedgeMonomial, WedgeMonomial), BTreeMap<WedgeMonomial, Q>>> {
    let np1 = n as i64 + 1;
    let mut out = BTreeMap::new();
    for l1 in [k1, k1 - np1] {
        for l2 in [k2, k2 - np1] {
            let (b, c) = (l1, l1 + l2);
            let ctx = DeltaContext::for_cones(n, &[0, b, c])?;
            let (c0, cb, cc) = (ctx.cone(0)?, ctx.cone(b)?, ctx.cone(c)?);
            let h_ac = hom_cohomology(&ctx.cat, &c0, &cc)?;
            let (r1, r2, r3) = (representatives(&ctx, 0, b)?, representatives(&ctx, b, c)?, representatives(&ctx, 0, c)?);
            let deg = (k1 + k2) as i32;
            for tau in &r1 {
                for sigma in &r2 {
                    let prod = m_tw(&ctx.cat, &[&c0, &cb, &cc], &[&sigma.cocycle, &tau.cocycle])?;
                    let mut result: BTreeMap<WedgeMonomial, Q> = BTreeMap::new();
                    if !prod.is_empty() {
                        let coords = rep_coordinates(&h_ac, deg, &r3, &prod)?;
                        let s = Q::from_integer((sigma.sign * tau.sign).into());
                        for (x, r) in coords.iter().zip(&r3) {
                            if !x.is_zero() {
                                *result.entry(r.monomial).or_insert_with(Q::zero) += x * &s * Q::from_integer(r.sign.into());
                            }
                        }
                        result.retain(|_, v| !v.is_zero());
                    }
                    out.insert((sigma.monomial, tau.monomial), result);
                }
            }
        }
    }
    Ok(out)
}

/// Table of the cone side: descended dimensions and products.
pub fn cone_table(n: usize) -> Result<HomTable> {
    let dims: BTreeMap<usize, BTreeMap<i32, usize>> = (1..=n)
        .into_par_iter()
        .map(|k| descended_dims(n, k as i64).map(|(t, _)| (k, t)))
        .collect::<Result<_>>()?;
    let steps: Vec<(usize, usize)> = (1..n).flat_map(|k1| (1..=n - k1).map(move |k2| (k1, k2))).collect();
    let products: Vec<((usize, usize), BTreeMap<(WedgeMonomial, WedgeMonomial), BTreeMap<WedgeMonomial, Q>>)> = steps
        .par_iter()
        .map(|&(k1, k2)| cone_products(n, k1 as i64, k2 as i64).map(|p| ((k1, k2), p)))
        .collect::<Result<_>>()?;
    let mut consts: BTreeMap<(usize, usize), BTreeSet<String>> = BTreeMap::new();
    for ((k1, k2), prods) in products {
        for i in 1..=n + 1 - k1 - k2 {
            let set = consts.entry((i, i + k1 + k2)).or_default();
            for ((sigma, tau), res) in &prods {
                for (rho, c) in res {
                    set.insert(constant_line(i + k1, &sigma.name(), &tau.name(), c, &rho.name()));
                }
            }
        }
    }
    Ok(HomTable::build(n, |i, j| dims[&(j - i)].clone(), consts))
}

/// Cover hom dimensions against the equivariant count, for every pair of
/// objects in the window.
pub fn cover_differences(n: usize, window: CoverWindow) -> Result<Vec<String>> {
    let g = build_coamoeba(n)?;
    let (cat, objs) = cover_category(&g, &window)?;
    let w = match window.kind {
        CoverKind::Full => WeightConvention::full(n),
        CoverKind::OneParameter => WeightConvention::one_parameter(n),
    };
    let diffs: Vec<String> = (0..objs.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let cat = &cat;
            let objs = &objs;
            let w = &w;
            (0..objs.len()).filter_map(move |b| {
                let (x, y): (&CoverObject, &CoverObject) = (&objs[a], &objs[b]);
                let got = if a == b { 0 } else { cat.hom_dim(a, b) };
                let want = if x.cell < y.cell {
                    let delta = Character(y.label.clone()).sub(&Character(x.label.clone()));
                    equivariant_hom(x.cell, y.cell, &delta, w).map(|v| v.len()).unwrap_or(usize::MAX)
                } else {
                    0
                };
                (got != want).then(|| format!("hom({}, {}): cover {got}, equivariant {want}", x.id(), y.id()))
            })
        })
        .collect();
    Ok(diffs)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Corrupts one sign of the coamoeba route before comparing.
    pub inject_sign_flip: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub diffs: Vec<String>,
}

impl CheckResult {
    fn new(name: &str, diffs: Vec<String>) -> Self {
        CheckResult { name: name.to_string(), passed: diffs.is_empty(), diffs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tables {
    pub cones: HomTable,
    pub exterior: HomTable,
    pub coamoeba: HomTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub n: usize,
    pub verdict: String,
    pub checks: Vec<CheckResult>,
    pub tables: Tables,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn run_verification(n: usize) -> Result<ComparisonReport> {
    run_verification_with(n, &VerifyOptions::default())
}

pub fn run_verification_with(n: usize, opts: &VerifyOptions) -> Result<ComparisonReport> {
    if !(1..=8).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let ni = n as i64;
    let mut checks = Vec::new();

    let cones = cone_table(n)?;
    let exterior = exterior_table(n)?;
    let coamoeba = coamoeba_table(n, opts.inject_sign_flip)?;

    // (a) descended dimensions, concentrated in one degree.
    let mut diffs = Vec::new();
    for k in 1..=n {
        let want = BTreeMap::from([(k as i32, binomial(n + 1, k))]);
        let got = &cones.entries[&pair_key(1, 1 + k)].dims;
        if *got != want {
            diffs.push(format!("j - i = {k}: descended dims {got:?}, expected {want:?}"));
        }
    }
    let reps: Vec<Vec<String>> = (-ni..=ni).into_par_iter().map(|d| check_representatives(n, d)).collect::<Result<_>>()?;
    diffs.extend(reps.into_iter().flatten());
    checks.push(CheckResult::new("descended_dimensions", diffs));

    // (b) products on cone cohomology against the wedge convention.
    let mut diffs = Vec::new();
    for k1 in 1..n {
        for k2 in 1..=n - k1 {
            for ((sigma, tau), got) in cone_products(n, k1 as i64, k2 as i64)? {
                let want: BTreeMap<WedgeMonomial, Q> = exterior_product(sigma, tau).map(|(c, r)| (r, c)).into_iter().collect();
                if got != want {
                    diffs.push(format!("m2({}, {}): cones {:?} vs exterior {:?}", sigma.name(), tau.name(), fmt_map(&got), fmt_map(&want)));
                }
            }
        }
    }
    diffs.extend(cones.compare(&exterior, "cones", "exterior"));
    checks.push(CheckResult::new("structure_constants", diffs));

    // (c) coamoeba route.
    let mut diffs = coamoeba.compare(&exterior, "coamoeba", "exterior");
    if !opts.inject_sign_flip {
        let g = build_coamoeba(n)?;
        diffs.extend(compare_with_exterior(&g, &category_of(&g)?, &build_exterior_category(n)?)?);
    }
    checks.push(CheckResult::new("coamoeba_route", diffs));

    // (d) cover windows against the equivariant count.
    let mut diffs = cover_differences(n, CoverWindow { kind: CoverKind::OneParameter, radius: 2 })?;
    if n <= 4 {
        diffs.extend(cover_differences(n, CoverWindow { kind: CoverKind::Full, radius: 1 })?);
    }
    checks.push(CheckResult::new("cover_dimensions", diffs));

    // Generic twisted-complex route against the hand-built square.
    let diffs: Vec<Vec<String>> =
        (-ni - 2..=2 * ni + 2).into_par_iter().map(|j| oracle_differences(n, 0, j)).collect::<Result<_>>()?;
    checks.push(CheckResult::new("double_complex_oracle", diffs.into_iter().flatten().collect()));

    // Relations on the categories involved.
    let mut diffs = Vec::new();
    let delta = build_delta_category(n, 0, 2 * ni + 1)?;
    for (name, cat) in [
        ("delta", &delta),
        ("exterior", &build_exterior_category(n)?),
        ("coamoeba", &category_of(&build_coamoeba(n)?)?),
    ] {
        let r = check_a_infinity(cat, 3);
        if !r.passed() {
            diffs.push(format!("{name}: {} violations", r.violations.len()));
        }
    }
    checks.push(CheckResult::new("a_infinity_relations", diffs));

    let verdict = if checks.iter().all(|c| c.passed) { "pass" } else { "fail" }.to_string();
    Ok(ComparisonReport { schema_version: SCHEMA_VERSION, n, verdict, checks, tables: Tables { cones, exterior, coamoeba } })
}

fn fmt_map(m: &BTreeMap<WedgeMonomial, Q>) -> Vec<String> {
    m.iter().map(|(r, c)| format!("{} {}", fmt_q(c), r.name())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_descended() {
        let (total, per_lift) = descended_dims(3, 1).unwrap();
        assert_eq!(total, BTreeMap::from([(1, 4)]));
        assert_eq!(per_lift.iter().find(|(d, _)| *d == 1).unwrap().1, BTreeMap::from([(1, 3)]));
        assert_eq!(per_lift.iter().find(|(d, _)| *d == -3).unwrap().1, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn representatives_are_bases() {
        for n in 2..=3 {
            for d in -(n as i64)..=n as i64 {
                assert!(check_representatives(n, d).unwrap().is_empty(), "n = {n}, d = {d}");
            }
        }
    }

    #[test]
    fn products_match_wedge_n2() {
        let p = cone_products(2, 1, 1).unwrap();
        for ((sigma, tau), got) in p {
            let want: BTreeMap<_, _> = exterior_product(sigma, tau).map(|(c, r)| (r, c)).into_iter().collect();
            assert_eq!(got, want, "{} {}", sigma.name(), tau.name());
        }
    }

    #[test]
    fn verification_passes_n2() {
        let r = run_verification(2).unwrap();
        assert!(r.passed(), "{}", r.to_json_string());
    }

    #[test]
    fn sign_flip_fails() {
        let r = run_verification_with(2, &VerifyOptions { inject_sign_flip: true }).unwrap();
        assert!(!r.passed());
        let c = r.checks.iter().find(|c| c.name == "coamoeba_route").unwrap();
        assert!(!c.passed);
    }
}
