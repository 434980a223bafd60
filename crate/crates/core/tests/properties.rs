use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;

use coamoeba_core::ainfinity::{check_a_infinity, directed_subcategory};
use coamoeba_core::beilinson::{binomial, equivariant_hom, Character, WeightConvention};
use coamoeba_core::coamoeba::Sublattice;
use coamoeba_core::exactlinalg::{cohomology, kernel_basis, rank, RationalMatrix, Q};
use coamoeba_core::twisted::{cone, hom_cohomology, hom_sigma, m1_matrix, SigmaElem, SigmaKey, TwistedComplex};
use coamoeba_core::verify::{build_delta_category, DeltaContext};

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> RationalMatrix {
    RationalMatrix::from_rows_with_cols(
        (0..rows).map(|r| (0..cols).map(|c| Q::from_integer(entries[r * cols + c].into())).collect()).collect(),
        cols,
    )
}

fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], r * c).prop_map(move |e| matrix(r, c, &e))
    })
}

/// `E = I + s e_{ij}` and its inverse, applied as a product.
fn elementary_pair(dim: usize, ops: &[(usize, usize, i64)]) -> (RationalMatrix, RationalMatrix) {
    let mut u = RationalMatrix::identity(dim);
    let mut v = RationalMatrix::identity(dim);
    for &(i, j, s) in ops {
        let (i, j) = (i % dim, j % dim);
        if i == j {
            continue;
        }
        let mut e = vec![vec![Q::zero(); dim]; dim];
        let mut f = e.clone();
        for k in 0..dim {
            e[k][k] = Q::from_integer(1.into());
            f[k][k] = Q::from_integer(1.into());
        }
        e[i][j] = Q::from_integer(s.into());
        f[i][j] = Q::from_integer((-s).into());
        u = RationalMatrix::from_rows_with_cols(e, dim).mul(&u).unwrap();
        v = v.mul(&RationalMatrix::from_rows_with_cols(f, dim)).unwrap();
    }
    (u, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in small_matrix()) {
        let ker = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + ker.len(), m.cols());
        for v in &ker {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn cohomology_survives_basis_change(
        d_out in small_matrix(),
        n0 in 1usize..5,
        coeffs in prop::collection::vec(-2i64..=2, 25),
        ops in prop::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..8),
    ) {
        // d_in has columns in the kernel of d_out, so the pair is a complex.
        let ker = kernel_basis(&d_out);
        let n1 = d_out.cols();
        let cols: Vec<Vec<Q>> = (0..n0)
            .map(|c| {
                let mut v = vec![Q::zero(); n1];
                for (k, b) in ker.iter().enumerate() {
                    let s = Q::from_integer(coeffs[(c * 5 + k) % 25].into());
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &s * y;
                    }
                }
                v
            })
            .collect();
        let d_in = RationalMatrix::from_columns(&cols, n1);
        let base = cohomology(&d_in, &d_out).unwrap().dim();
        prop_assert_eq!(base, ker.len() - rank(&d_in));
        let (u, u_inv) = elementary_pair(n1, &ops);
        let changed = cohomology(&u.mul(&d_in).unwrap(), &d_out.mul(&u_inv).unwrap()).unwrap().dim();
        prop_assert_eq!(base, changed);
    }

    #[test]
    fn cohomology_is_deterministic(d_out in small_matrix()) {
        let zero = RationalMatrix::zeros(d_out.cols(), 1);
        let a = cohomology(&zero, &d_out).unwrap();
        let b = cohomology(&zero, &d_out).unwrap();
        prop_assert_eq!(a.representatives, b.representatives);
    }

    #[test]
    fn hnf_reduction(
        gens in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3..5),
        v in prop::collection::vec(-20i64..=20, 3),
    ) {
        let Ok(sub) = Sublattice::from_generators(&gens, 3) else { return Ok(()) };
        let r = sub.reduce(&v);
        prop_assert_eq!(sub.reduce(&r), r.clone());
        let diff: Vec<i64> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        prop_assert!(sub.contains(&diff));
        for (k, row) in sub.hnf.iter().enumerate() {
            prop_assert!(0 <= r[k] && r[k] < row[k]);
        }
        for g in &gens {
            prop_assert!(sub.contains(g));
        }
        prop_assert_eq!(sub.coset_representatives().len() as u64, sub.index());
    }

    #[test]
    fn directed_restriction_is_idempotent(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
        let cat = build_delta_category(2, 0, 5).unwrap();
        let once = directed_subcategory(&cat, &perm).unwrap();
        let twice = directed_subcategory(&once, &(0..6).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(once.to_json_string(), twice.to_json_string());
        prop_assert!(check_a_infinity(&once, 3).passed());
    }
}

/// `Cone(lambda id : Delta_a -> Delta_{a+n})` in a context holding both.
fn scaled_cone(ctx: &DeltaContext, a: i64, lambda: &Q) -> TwistedComplex {
    let (x, y) = (ctx.object(a).unwrap(), ctx.object(a + ctx.n as i64).unwrap());
    let c = SigmaElem::from([(SigmaKey { src_term: 0, tgt_term: 0, idx: 0 }, lambda.clone())]);
    cone(&ctx.cat, &TwistedComplex::plain(x), &TwistedComplex::plain(y), &c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cone_differential_squares_to_zero(
        n in 2usize..=3,
        a in -3i64..=3,
        b in -3i64..=3,
        num in prop_oneof![-5i64..=-1, 1i64..=5],
        den in 1i64..=4,
    ) {
        let ni = n as i64;
        let ctx = DeltaContext::new(n, &[a, a + ni, b, b + ni]).unwrap();
        let lambda = Q::new(num.into(), den.into());
        let (x, y) = (scaled_cone(&ctx, a, &lambda), scaled_cone(&ctx, b, &Q::from_integer(1.into())));
        let hom = hom_sigma(&x.underlying, &y.underlying, &ctx.cat).unwrap();
        let degrees: Vec<i32> = hom.space.degrees().into_iter().collect();
        for &d in &degrees {
            let first = m1_matrix(&ctx.cat, &x, &y, &hom, d).unwrap();
            let second = m1_matrix(&ctx.cat, &x, &y, &hom, d + 1).unwrap();
            if first.rows() > 0 && second.cols() > 0 {
                prop_assert!(second.mul(&first).unwrap().is_zero());
            }
        }
        // Rescaling the cone map does not change the cohomology.
        let unit = scaled_cone(&ctx, a, &Q::from_integer(1.into()));
        prop_assert_eq!(
            hom_cohomology(&ctx.cat, &x, &y).unwrap().dims(),
            hom_cohomology(&ctx.cat, &unit, &y).unwrap().dims()
        );
    }

    #[test]
    fn euler_characteristic_is_additive(n in 2usize..=3, a in -3i64..=3, z in -4i64..=6, use_cone in any::<bool>()) {
        let ni = n as i64;
        let ctx = DeltaContext::new(n, &[a, a + ni, z, z + ni]).unwrap();
        let source = if use_cone { scaled_cone(&ctx, z, &Q::from_integer(1.into())) } else { TwistedComplex::plain(ctx.object(z).unwrap()) };
        let c = scaled_cone(&ctx, a, &Q::from_integer(1.into()));
        let x0 = TwistedComplex::plain(ctx.object(a).unwrap());
        let x1 = TwistedComplex::plain(ctx.object(a + ni).unwrap());
        let chi = |t: &TwistedComplex| hom_cohomology(&ctx.cat, &source, t).unwrap().euler_characteristic();
        prop_assert_eq!(chi(&c), chi(&x1) - chi(&x0));
    }

    #[test]
    fn characters_sum_to_binomials(n in 1usize..=4, gap in 1usize..=4) {
        prop_assume!(gap <= n);
        for w in [WeightConvention::full(n), WeightConvention::one_parameter(n)] {
            // Weights of degree-`gap` monomials lie in the box [0, gap]^rank.
            let rank = w.rank();
            let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
            let mut stack = vec![Vec::new()];
            while let Some(p) = stack.pop() {
                if p.len() == rank {
                    let delta = Character(p.iter().map(|x: &i64| -x).collect());
                    seen.insert(p, equivariant_hom(1, 1 + gap, &delta, &w).unwrap().len());
                    continue;
                }
                for x in 0..=gap as i64 {
                    let mut q = p.clone();
                    q.push(x);
                    stack.push(q);
                }
            }
            prop_assert_eq!(seen.values().sum::<usize>(), binomial(n + 1, gap));
        }
    }
}
