//! Exact point location on the torus.
//!
//! The permutohedron centred at the origin is the Voronoi cell of the
//! lattice spanned by the `l_i`. That lattice is the union of the cosets
//! `r (1, ..., 1) + (n+1) Z^{n+1}` restricted to the zero-sum hyperplane,
//! so the nearest lattice point is found by rounding once per coset.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{LatticeVector, TorusTessellation};
use crate::exactlinalg::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    /// 1-based cell index.
    Cell(usize),
    Boundary,
}

/// The point `center + sum_b s_b g_b`; with `s` in `[0, 1)^n` this is the
/// half-open fundamental parallelepiped of `Lambda`.
pub fn point_in_fundamental_domain(t: &TorusTessellation, s: &[Q]) -> Vec<Q> {
    let mut p = t.base.center();
    for (sb, g) in s.iter().zip(&t.lambda_basis) {
        for (x, &c) in p.iter_mut().zip(&g.coords) {
            *x += sb * Q::from_integer(c.into());
        }
    }
    p
}

fn round_half_up(x: &Q) -> i64 {
    let h = x + Q::new(1.into(), 2.into());
    let f = h.floor().to_integer();
    i64::try_from(f).expect("coordinate fits in i64")
}

/// Nearest point of `r 1 + (n+1) z` with `sum z = -r` to `y`.
fn decode_coset(y: &[Q], r: i64) -> (Vec<i64>, Q) {
    let m = y.len() as i64;
    let mq = Q::from_integer(m.into());
    let t: Vec<Q> = y.iter().map(|yi| (yi - Q::from_integer(r.into())) / &mq).collect();
    let mut z: Vec<i64> = t.iter().map(round_half_up).collect();
    let deficit = -r - z.iter().sum::<i64>();
    // Push the coordinates with the largest rounding error in the
    // direction of the deficit.
    let mut order: Vec<usize> = (0..z.len()).collect();
    let err = |i: usize| &t[i] - Q::from_integer(z[i].into());
    if deficit > 0 {
        order.sort_by(|&a, &b| err(b).cmp(&err(a)).then(a.cmp(&b)));
        for &i in order.iter().take(deficit as usize) {
            z[i] += 1;
        }
    } else if deficit < 0 {
        order.sort_by(|&a, &b| err(a).cmp(&err(b)).then(a.cmp(&b)));
        for &i in order.iter().take((-deficit) as usize) {
            z[i] -= 1;
        }
    }
    let u: Vec<i64> = z.iter().map(|zi| r + m * zi).collect();
    let dist: Q = y.iter().zip(&u).map(|(yi, &ui)| {
        let d = yi - Q::from_integer(ui.into());
        &d * &d
    }).sum();
    (u, dist)
}

/// Nearest tile translate to `p` (ties broken by coset order).
pub(crate) fn nearest_translate(t: &TorusTessellation, p: &[Q]) -> LatticeVector {
    let c = t.base.center();
    let y: Vec<Q> = p.iter().zip(&c).map(|(a, b)| a - b).collect();
    let mut best: Option<(Vec<i64>, Q)> = None;
    for r in 0..=t.n as i64 {
        let (u, d) = decode_coset(&y, r);
        if best.as_ref().map_or(true, |(_, bd)| d < *bd) {
            best = Some((u, d));
        }
    }
    LatticeVector { coords: best.expect("at least one coset").0 }
}

/// Cell whose interior contains `p` (a point of `H`), or `Boundary`.
pub fn locate_point(t: &TorusTessellation, p: &[Q]) -> Location {
    let v = nearest_translate(t, p);
    match t.base.classify(p, &v.coords) {
        Some(true) => {
            let m = (t.n + 1) as i64;
            // Every l_i is -1 mod (n+1) in each coordinate, and
            // k l_{n+1} lies in cell k + 1.
            let r = v.coords[0].mod_floor(&m);
            let k = (-r).mod_floor(&m);
            Location::Cell(k as usize + 1)
        }
        Some(false) => Location::Boundary,
        None => {
            // The nearest translate always contains the point; this is
            // unreachable for points on H.
            debug_assert!(false, "point off the hyperplane or decoder failure");
            Location::Boundary
        }
    }
}
