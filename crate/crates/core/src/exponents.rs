//! The L^p exponent calculus.
//!
//! Exponents are exact rationals in `s = 1/p`, with `s = 0` standing for `p = infinity`.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, SpaceDescriptor};

pub type Q = Rational64;

/// Default merging parameter for dyadic index classes.
pub const DEFAULT_DYADIC_DELTA: f64 = 0.1;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn check_inv_p(s: Q) -> Result<()> {
    if s < Q::zero() || s > q(1, 2) {
        return Err(Error::InvalidArgument(format!("p must lie in [2, inf], got 1/p = {s}")));
    }
    Ok(())
}

/// `1/p` as an exact rational; `p = inf` maps to zero.
pub fn inv_p(num: i64, den: i64) -> Q {
    if num == 0 {
        Q::zero()
    } else {
        q(den, num)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Below,
    At,
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentReport {
    pub inv_p: Q,
    pub delta0: Q,
    pub delta: Q,
    pub kink_inv_p: Q,
    /// Position of `p` relative to the kink.
    pub branch: Branch,
}

/// Kink of `delta0` in `1/p`.
pub fn delta0_kink(n: i64) -> Q {
    q(n - 1, 2 * (n + 1))
}

/// Kink of `delta` in `1/p`.
pub fn delta_kink(n: i64, r: i64) -> Q {
    q(n - r, 2 * (n + r))
}

/// Both branches of `delta0`, in order (large p, small p).
pub fn delta0_branches(s: Q, n: i64) -> (Q, Q) {
    let half = q(1, 2);
    let nq = Q::from_integer(n);
    (nq * (half - s) - half, (nq - 1) / 2 * (half - s))
}

pub fn delta0(s: Q, n: i64) -> Result<Q> {
    check_inv_p(s)?;
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let (hi, lo) = delta0_branches(s, n);
    Ok(if s <= delta0_kink(n) { hi } else { lo })
}

pub fn delta_branches(s: Q, n: i64, r: i64) -> (Q, Q) {
    let half = q(1, 2);
    let nq = Q::from_integer(n);
    let rq = Q::from_integer(r);
    (nq * (half - s) - rq / 2, (nq - rq) / 2 * (half - s))
}

pub fn delta(s: Q, n: i64, r: i64) -> Result<Q> {
    check_inv_p(s)?;
    if r < 1 || r >= n {
        return Err(Error::InvalidArgument(format!("need 1 <= r < n, got n={n}, r={r}")));
    }
    let (hi, lo) = delta_branches(s, n, r);
    Ok(if s <= delta_kink(n, r) { hi } else { lo })
}

pub fn exponent_report(s: Q, n: i64, r: i64) -> Result<ExponentReport> {
    let k = delta_kink(n, r);
    Ok(ExponentReport {
        inv_p: s,
        delta0: delta0(s, n)?,
        delta: delta(s, n, r)?,
        kink_inv_p: k,
        branch: if s < k {
            Branch::Above
        } else if s == k {
            Branch::At
        } else {
            Branch::Below
        },
    })
}

/// A grid of `count` values of `1/p` in `[0, 1/2]` with the kinks inserted.
pub fn p_grid(count: usize, n: i64, r: i64) -> Vec<Q> {
    let mut v: Vec<Q> = (0..count).map(|i| q(i as i64, 2 * (count as i64 - 1))).collect();
    v.push(delta_kink(n, r));
    v.push(delta0_kink(n));
    v.sort();
    v.dedup();
    v
}

/// Checks `delta(p; n, r) = r delta0(p; n/r)` on a dense grid.
pub fn product_delta_check(n: i64, r: i64) -> Result<bool> {
    if r < 1 || n % r != 0 || n / r < 2 {
        return Err(Error::InvalidArgument("need r | n and n/r >= 2".into()));
    }
    if r == n {
        return Err(Error::InvalidArgument("need r < n".into()));
    }
    let mut grid = p_grid(200, n, r);
    grid.push(delta0_kink(n / r));
    for s in grid {
        if delta(s, n, r)? != Q::from_integer(r) * delta0(s, n / r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sigma_w(H) = -sum m(alpha) sgn(w alpha (H))`.
pub fn sigma_w(space: &SpaceDescriptor, w: usize, h: &[f64]) -> Result<i64> {
    let rs = &space.roots;
    let elem = &space.weyl.elements[w];
    let mut total = 0i64;
    for a in &rs.positive_roots {
        let wa = elem.act_functional(&a.coords);
        let v: f64 = wa.iter().zip(h).map(|(x, y)| x * y).sum();
        if v.abs() < 1e-12 {
            return Err(Error::OnWall(h.to_vec()));
        }
        total -= a.multiplicity as i64 * v.signum() as i64;
    }
    Ok(total)
}

fn max_over_support(coeffs: &[u32], x: &[Q]) -> Q {
    coeffs
        .iter()
        .zip(x)
        .filter(|(c, _)| **c != 0)
        .map(|(_, v)| *v)
        .max()
        .unwrap_or_else(Q::zero)
}

/// `L(x, inf)` and `L(x, 2)`.
pub fn l_endpoints(x: &[Q], space: &SpaceDescriptor) -> (Q, Q) {
    let rs = &space.roots;
    let nr = Q::from_integer(space.n as i64 - space.r as i64);
    let mut l_inf = nr;
    for (a, c) in rs.positive_roots.iter().zip(&rs.simple_coeffs) {
        l_inf -= Q::from_integer(a.multiplicity as i64) * max_over_support(c, x) / 2;
    }
    let mut l_two = -Q::from_integer(space.r as i64);
    for &i in &rs.simple {
        l_two += max_over_support(&rs.simple_coeffs[i], x);
    }
    (l_inf, l_two)
}

/// The dyadic profile `L(x, p)`, linear in `1/p`.
#[allow(non_snake_case)]
pub fn L_of(x: &[Q], s: Q, space: &SpaceDescriptor) -> Result<Q> {
    check_inv_p(s)?;
    if x.len() != space.r || x.iter().any(|v| *v < Q::zero() || *v > Q::one()) {
        return Err(Error::InvalidArgument("x must lie in [0,1]^r".into()));
    }
    let (li, l2) = l_endpoints(x, space);
    Ok(li + (l2 - li) * 2 * s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexProfile {
    pub v: Vec<u8>,
    pub delta_v_plus_mass: u32,
    pub phi_v_count: usize,
}

fn root_on_vertex(coeffs: &[u32], v: &[u8]) -> u32 {
    coeffs.iter().zip(v).map(|(c, b)| c * *b as u32).sum()
}

pub fn vertex_profile(rs: &RootSystem, v: &[u8]) -> VertexProfile {
    let mut mass = 0;
    for (a, c) in rs.positive_roots.iter().zip(&rs.simple_coeffs) {
        if root_on_vertex(c, v) == 0 {
            mass += a.multiplicity;
        }
    }
    let phi = rs.simple.iter().filter(|&&i| root_on_vertex(&rs.simple_coeffs[i], v) == 0).count();
    VertexProfile { v: v.to_vec(), delta_v_plus_mass: mass, phi_v_count: phi }
}

/// `L(v, p)` from the Levi data of the vertex `v`.
pub fn vertex_value(space: &SpaceDescriptor, v: &[u8], s: Q) -> Result<Q> {
    check_inv_p(s)?;
    let prof = vertex_profile(&space.roots, v);
    let nr = Q::from_integer(space.n as i64 - space.r as i64);
    let l_inf = nr / 2 + Q::from_integer(prof.delta_v_plus_mass as i64) / 2;
    let l_two = -Q::from_integer(prof.phi_v_count as i64);
    Ok(l_inf + (l_two - l_inf) * 2 * s)
}

pub fn all_vertices(r: usize) -> Vec<Vec<u8>> {
    (0..(1u32 << r)).map(|bits| (0..r).map(|i| ((bits >> i) & 1) as u8).collect()).collect()
}

pub fn v0(r: usize) -> Vec<u8> {
    vec![0; r]
}

pub fn v1(r: usize) -> Vec<u8> {
    vec![1; r]
}

/// `max{L(v0,p), L(v1,p)} = 2 delta(p)`, exactly.
pub fn delta_relation_check(space: &SpaceDescriptor, s: Q) -> Result<bool> {
    let a = vertex_value(space, &v0(space.r), s)?;
    let b = vertex_value(space, &v1(space.r), s)?;
    Ok(a.max(b) == delta(s, space.n as i64, space.r as i64)? * 2)
}

/// Maximum of `L(v, p)` over every vertex of the cube.
pub fn vertex_max(space: &SpaceDescriptor, s: Q) -> Result<Q> {
    let mut best: Option<Q> = None;
    for v in all_vertices(space.r) {
        let val = vertex_value(space, &v, s)?;
        best = Some(best.map_or(val, |b| b.max(val)));
    }
    Ok(best.expect("at least one vertex"))
}

/// `M(s) = max m(Delta_v^+)` over vertices with `|Phi_v| = s`.
#[allow(non_snake_case)]
pub fn M_of_s(space: &SpaceDescriptor, s: usize) -> Result<u32> {
    if s > space.r {
        return Err(Error::InvalidArgument("s must be at most r".into()));
    }
    Ok(all_vertices(space.r)
        .iter()
        .map(|v| vertex_profile(&space.roots, v))
        .filter(|p| p.phi_v_count == s)
        .map(|p| p.delta_v_plus_mass)
        .max()
        .unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityWitness {
    pub s: usize,
    pub m: u32,
    /// Simple roots vanishing on the maximizing vertex.
    pub phi_v: Vec<usize>,
    pub connected: bool,
}

fn connected_subset(rs: &RootSystem, nodes: &[usize]) -> bool {
    if nodes.len() <= 1 {
        return true;
    }
    let mut seen = vec![nodes[0]];
    let mut stack = vec![nodes[0]];
    while let Some(i) = stack.pop() {
        for &j in nodes {
            if !seen.contains(&j) && rs.simple_linked(i, j) {
                seen.push(j);
                stack.push(j);
            }
        }
    }
    seen.len() == nodes.len()
}

/// Strict convexity of `s -> M(s)` with maximizing witnesses.
pub fn convexity_certificate(space: &SpaceDescriptor) -> Result<(bool, Vec<ConvexityWitness>)> {
    if !space.irreducible() {
        return Err(Error::Reducible(space.id.clone()));
    }
    let rs = &space.roots;
    let mut witnesses = Vec::new();
    for s in 0..=space.r {
        let mut best: Option<(u32, Vec<u8>)> = None;
        for v in all_vertices(space.r) {
            let p = vertex_profile(rs, &v);
            if p.phi_v_count == s && best.as_ref().is_none_or(|(m, _)| p.delta_v_plus_mass > *m) {
                best = Some((p.delta_v_plus_mass, v));
            }
        }
        let (m, v) = best.expect("every s in 0..=r is attained");
        let phi_v: Vec<usize> = (0..space.r).filter(|&i| v[i] == 0).collect();
        let connected = connected_subset(rs, &phi_v);
        witnesses.push(ConvexityWitness { s, m, phi_v, connected });
    }
    let gaps: Vec<i64> = witnesses.windows(2).map(|w| w[1].m as i64 - w[0].m as i64).collect();
    let strict = gaps.windows(2).all(|g| g[1] > g[0]);
    Ok((strict, witnesses))
}

/// Vertices attaining the maximum of `L(v, p)`.
pub fn maximizer_locus(space: &SpaceDescriptor, s: Q) -> Result<Vec<Vec<u8>>> {
    let best = vertex_max(space, s)?;
    let mut out = Vec::new();
    for v in all_vertices(space.r) {
        if vertex_value(space, &v, s)? == best {
            out.push(v);
        }
    }
    Ok(out)
}

/// `H_m = t^{-1} sum omega_i e^{m_i}`.
pub fn h_of_m(space: &SpaceDescriptor, t: f64, m: &[i64]) -> Result<Vec<f64>> {
    if t <= 1.0 || m.len() != space.r {
        return Err(Error::InvalidArgument("need t > 1 and one index per simple root".into()));
    }
    let omega = space.roots.coroot_basis();
    let mut h = vec![0.0; space.r];
    for (w, mi) in omega.iter().zip(m) {
        for (hj, wj) in h.iter_mut().zip(w) {
            *hj += wj * (*mi as f64).exp() / t;
        }
    }
    Ok(h)
}

/// Largest observed `|ln alpha(H_m) - (max m_i - ln t)|` over the index grid.
pub fn h_of_m_offset(space: &SpaceDescriptor, t: f64) -> f64 {
    let top = t.ln().floor() as i64;
    let rs = &space.roots;
    let mut worst: f64 = 0.0;
    for m in index_grid(space.r, top) {
        let h = h_of_m(space, t, &m).expect("valid index");
        for (a, c) in rs.positive_roots.iter().zip(&rs.simple_coeffs) {
            let mx = c.iter().zip(&m).filter(|(ci, _)| **ci != 0).map(|(_, mi)| *mi).max().unwrap();
            let off = a.eval(&h).ln() - (mx as f64 - t.ln());
            worst = worst.max(off.abs());
        }
    }
    worst
}

pub fn index_grid(r: usize, top: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        let mut next = Vec::new();
        for p in &out {
            for k in 0..=top {
                let mut q = p.clone();
                q.push(k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicIndex {
    pub m: Vec<i64>,
    pub t: f64,
    pub regular: bool,
    pub class_members: Vec<Vec<i64>>,
}

/// Partitions `Z^r ∩ [0, log t]^r` into merging classes.
pub fn dyadic_index_set(space: &SpaceDescriptor, t: f64, delta: f64) -> Result<Vec<DyadicIndex>> {
    if t <= std::f64::consts::E || !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(Error::InvalidArgument("need t > e and 0 < delta < 1".into()));
    }
    let top = t.ln().floor() as i64;
    let mut classes: BTreeMap<(i64, Vec<Option<i64>>), Vec<Vec<i64>>> = BTreeMap::new();
    for m in index_grid(space.r, top) {
        let big = *m.iter().max().unwrap();
        let cut = delta * big as f64;
        let key: Vec<Option<i64>> = m.iter().map(|&x| if (x as f64) <= cut && big > 0 { None } else { Some(x) }).collect();
        classes.entry((big, key)).or_default().push(m);
    }
    Ok(classes
        .into_iter()
        .map(|(_, members)| {
            let rep = (0..space.r).map(|i| members.iter().map(|m| m[i]).max().unwrap()).collect();
            DyadicIndex { m: rep, t, regular: members.len() == 1, class_members: members }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProgressionSum {
    pub value: f64,
    pub predicted_exponent: f64,
    pub predicted_log_power: u32,
}

/// `sum over sigma in [0,1]^r ∩ Z^r / log t of t^{L(sigma, p)}`.
pub fn progression_sum(space: &SpaceDescriptor, s: Q, t: f64) -> Result<ProgressionSum> {
    if t <= std::f64::consts::E {
        return Err(Error::InvalidArgument("need t > e".into()));
    }
    check_inv_p(s)?;
    let lt = t.ln();
    let top = lt.floor() as i64;
    let rs = &space.roots;
    let nr = (space.n - space.r) as f64;
    let sf = *s.numer() as f64 / *s.denom() as f64;
    let mut value = 0.0;
    for m in index_grid(space.r, top) {
        let x: Vec<f64> = m.iter().map(|&k| k as f64 / lt).collect();
        let mx = |c: &[u32]| c.iter().zip(&x).filter(|(ci, _)| **ci != 0).map(|(_, v)| *v).fold(0.0, f64::max);
        let mut li = nr;
        for (a, c) in rs.positive_roots.iter().zip(&rs.simple_coeffs) {
            li -= a.multiplicity as f64 * mx(c) / 2.0;
        }
        let mut l2 = -(space.r as f64);
        for &i in &rs.simple {
            l2 += mx(&rs.simple_coeffs[i]);
        }
        let l = li + (l2 - li) * 2.0 * sf;
        value += t.powf(l);
    }
    let d = delta(s, space.n as i64, space.r as i64)?;
    let at_kink = s == delta_kink(space.n as i64, space.r as i64);
    Ok(ProgressionSum {
        value,
        predicted_exponent: 2.0 * (*d.numer() as f64 / *d.denom() as f64),
        predicted_log_power: at_kink as u32,
    })
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}
