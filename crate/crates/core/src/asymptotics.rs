//! Main-term asymptotics, envelopes, critical sets and Hessians of the spherical phase.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::sigma_w;
use crate::quad::fit_line;
use crate::rootsys::{dot, Realization, SpaceDescriptor, SpectralParameter};
use crate::spherical::{
    compact_weight, diagonal_of, exp_flat, iwasawa_h, phi_compact, phi_noncompact, FitReport, GroupElement, QuadratureSpec,
};

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_BALL_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticTerm {
    pub w: usize,
    pub phase: f64,
    pub amplitude: f64,
    pub constant: f64,
}

impl AsymptoticTerm {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.constant * self.amplitude, self.phase)
    }
}

/// Closed-form `Vol_0(M)/Vol_0(K)` in the trace normalization of the catalog.
pub fn closed_form_constant(space: &SpaceDescriptor) -> Option<f64> {
    let pi = std::f64::consts::PI;
    let s2 = 2f64.sqrt();
    match space.realization {
        Realization::Sl2R => Some(1.0 / (pi * s2)),
        Realization::Sl2C => Some(1.0 / (2.0 * pi)),
        Realization::Sl3R => Some(1.0 / (4.0 * s2 * pi * pi)),
        Realization::Sl2RSquared => Some(1.0 / (2.0 * pi * pi)),
        _ => None,
    }
}

/// The terms of the W-sum for `phi_{t lambda}(exp H)`.
pub fn dkv_terms(space: &SpaceDescriptor, lambda: &[f64], t: f64, h: &[f64], eps: f64, constant: f64) -> Result<Vec<AsymptoticTerm>> {
    if space.is_compact() {
        return Err(Error::InvalidArgument("the main term is stated for noncompact spaces".into()));
    }
    let rs = &space.roots;
    let floor = t.powf(-1.0 + eps);
    if rs.positive_roots.iter().any(|a| a.eval(h).abs() < floor) {
        return Err(Error::InvalidArgument(format!("H = {h:?} violates |alpha(H)| >= t^(-1+eps)")));
    }
    let nr = (space.n - space.r) as f64;
    let mut out = Vec::with_capacity(space.weyl.order());
    for (wi, w) in space.weyl.elements.iter().enumerate() {
        let wl = w.act_functional(lambda);
        let sigma = sigma_w(space, wi, h)? as f64;
        let mut amp = t.powf(-nr / 2.0);
        for a in &rs.positive_roots {
            let wa = w.act_functional(&a.coords);
            let factor = rs.pair(&a.coords, lambda) / (2.0 * std::f64::consts::PI) * dot(&wa, h).sinh();
            amp *= factor.abs().powf(-(a.multiplicity as f64) / 2.0);
        }
        out.push(AsymptoticTerm {
            w: wi,
            phase: t * dot(&wl, h) + std::f64::consts::PI * sigma / 4.0,
            amplitude: amp,
            constant,
        });
    }
    Ok(out)
}

pub fn dkv_main_term(space: &SpaceDescriptor, lambda: &[f64], t: f64, h: &[f64], eps: f64, constant: f64) -> Result<Complex64> {
    Ok(dkv_terms(space, lambda, t, h, eps, constant)?.iter().map(|x| x.value()).sum())
}

/// `|phi - model| / sum_w |term_w|`.
pub fn relative_error(phi: Complex64, terms: &[AsymptoticTerm]) -> f64 {
    let model: Complex64 = terms.iter().map(|x| x.value()).sum();
    let scale: f64 = terms.iter().map(|x| x.value().norm()).sum();
    (phi - model).norm() / scale
}

/// Least-squares constant `C` minimizing `sum |phi_j - C m_j|^2` for unit-constant models `m_j`.
pub fn calibrate_constant(samples: &[(Complex64, Complex64)]) -> f64 {
    let num: f64 = samples.iter().map(|(phi, m)| (m.conj() * phi).re).sum();
    let den: f64 = samples.iter().map(|(_, m)| m.norm_sqr()).sum();
    num / den
}

/// `prod_{alpha > 0} (1 + t |alpha(H)|)^{-m(alpha)/2}`.
pub fn envelope_noncompact(space: &SpaceDescriptor, t: f64, h: &[f64]) -> f64 {
    space
        .roots
        .positive_roots
        .iter()
        .map(|a| (1.0 + t * a.eval(h).abs()).powf(-(a.multiplicity as f64) / 2.0))
        .product()
}

/// Largest `|alpha(h)|`, the ball gauge for compact envelopes.
pub fn ball_gauge(space: &SpaceDescriptor, h: &[f64]) -> f64 {
    space.roots.positive_roots.iter().map(|a| a.eval(h).abs()).fold(0.0, f64::max)
}

/// `prod_{alpha > 0} (1 + t |e^{i alpha(h)} - 1|)^{-m(alpha)/2}` on the ball of the given radius.
pub fn envelope_compact(space: &SpaceDescriptor, t: f64, h: &[f64], radius: f64) -> Result<f64> {
    if !space.is_compact() {
        return Err(Error::InvalidArgument(format!("{} is noncompact", space.id)));
    }
    if ball_gauge(space, h) > radius + 1e-12 {
        return Err(Error::InvalidArgument(format!("h = {h:?} lies outside the ball of radius {radius}")));
    }
    Ok(space
        .roots
        .positive_roots
        .iter()
        .map(|a| {
            let chord = (Complex64::from_polar(1.0, a.eval(h)) - 1.0).norm();
            (1.0 + t * chord).powf(-(a.multiplicity as f64) / 2.0)
        })
        .product())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub grid: Vec<(f64, Vec<f64>)>,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// Largest ratio per `t`.
    pub per_t_max: Vec<(f64, f64)>,
    /// Largest relative change of the per-`t` maximum between consecutive rungs.
    pub max_drift: f64,
    pub radius: f64,
}

fn summarize(grid: Vec<(f64, Vec<f64>)>, ratios: Vec<f64>, ladder: &[f64], radius: f64) -> EnvelopeReport {
    let per_t_max: Vec<(f64, f64)> = ladder
        .iter()
        .map(|&t| {
            let m = grid.iter().zip(&ratios).filter(|((gt, _), _)| *gt == t).map(|(_, r)| *r).fold(0.0, f64::max);
            (t, m)
        })
        .collect();
    let max_drift = per_t_max.windows(2).map(|w| (w[1].1 - w[0].1).abs() / w[0].1).fold(0.0, f64::max);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    EnvelopeReport { grid, ratios, max_ratio, per_t_max, max_drift, radius }
}

/// Ratios `|phi_{t lambda}(exp H)| / envelope` along an H-path for each `t`.
pub fn envelope_scan_noncompact(
    space: &SpaceDescriptor,
    lambda: &[f64],
    ladder: &[f64],
    paths: &dyn Fn(f64) -> Vec<Vec<f64>>,
    q: &QuadratureSpec,
) -> Result<EnvelopeReport> {
    let mut grid = Vec::new();
    let mut ratios = Vec::new();
    for &t in ladder {
        let lam = SpectralParameter::new(&space.roots, lambda.to_vec(), t)?;
        for h in paths(t) {
            let phi = phi_noncompact(space, &lam, &h, q)?;
            ratios.push(phi.value.norm() / envelope_noncompact(space, t, &h));
            grid.push((t, h));
        }
    }
    Ok(summarize(grid, ratios, ladder, f64::INFINITY))
}

/// Compact analogue of [`envelope_scan_noncompact`]; halves the ball radius while the drift exceeds 10%.
pub fn envelope_scan_compact(
    space: &SpaceDescriptor,
    mu_tilde: &[f64],
    ladder: &[f64],
    paths: &dyn Fn(f64, f64) -> Vec<Vec<f64>>,
    radius: f64,
) -> Result<EnvelopeReport> {
    let mut radius = radius;
    loop {
        let mut grid = Vec::new();
        let mut ratios = Vec::new();
        for &t in ladder {
            let mu = compact_weight(space, mu_tilde, t)?;
            for h in paths(t, radius) {
                let phi = phi_compact(space, &mu, &h)?;
                ratios.push(phi.value.norm() / envelope_compact(space, t, &h, radius)?);
                grid.push((t, h));
            }
        }
        let report = summarize(grid, ratios, ladder, radius);
        if report.max_drift < 0.1 || radius < 0.05 {
            return Ok(report);
        }
        radius *= 0.5;
    }
}

/// `H = sum_i a_i omega_i`, so that `alpha_i(H) = a_i` for the simple roots.
pub fn from_simple_coords(space: &SpaceDescriptor, a: &[f64]) -> Vec<f64> {
    let omega = space.roots.coroot_basis();
    let mut h = vec![0.0; space.r];
    for (ai, w) in a.iter().zip(&omega) {
        for (hj, wj) in h.iter_mut().zip(w) {
            *hj += ai * wj;
        }
    }
    h
}

/// A path through the walls: the full range `[-reach, reach]` plus points within `1/t` of each wall.
pub fn wall_crossing_path(space: &SpaceDescriptor, t: f64, reach: f64, npts: usize) -> Vec<Vec<f64>> {
    let mut line: Vec<f64> = (0..npts).map(|i| -reach + 2.0 * reach * i as f64 / (npts - 1) as f64).collect();
    for k in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0] {
        line.push(k / t);
        line.push(-k / t);
    }
    line.sort_by(f64::total_cmp);
    match space.r {
        1 => line.iter().map(|&x| from_simple_coords(space, &[x])).collect(),
        _ => {
            let mut out: Vec<Vec<f64>> = line.iter().map(|&x| from_simple_coords(space, &[x, 0.6 * reach])).collect();
            out.extend(line.iter().map(|&x| from_simple_coords(space, &[x, x.abs() * 0.5])));
            out
        }
    }
}

/// Critical set of `k -> -Lambda(H(k exp H))`: Weyl representatives modulo the stabilizer of `H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSet {
    pub representatives: Vec<usize>,
    pub vanishing_roots: Vec<usize>,
    /// Dimension of each component, `sum_{alpha in Delta_H^+} m(alpha)`.
    pub component_dim: u32,
}

pub fn critical_set(space: &SpaceDescriptor, h: &[f64]) -> CriticalSet {
    let rs = &space.roots;
    let vanishing_roots: Vec<usize> = (0..rs.positive_roots.len()).filter(|&i| rs.positive_roots[i].eval(h).abs() < 1e-12).collect();
    let component_dim = vanishing_roots.iter().map(|&i| rs.positive_roots[i].multiplicity).sum();
    let mut images: Vec<Vec<f64>> = Vec::new();
    let mut representatives = Vec::new();
    for (i, w) in space.weyl.elements.iter().enumerate() {
        let wh = w.act(h);
        if !images.iter().any(|x| x.iter().zip(&wh).all(|(a, b)| (a - b).abs() < 1e-12)) {
            images.push(wh);
            representatives.push(i);
        }
    }
    CriticalSet { representatives, vanishing_roots, component_dim }
}

/// Signed permutation matrix `k_w` in `K` with `k_w exp(H) k_w^{-1} = exp(w H)`.
pub fn weyl_representative(space: &SpaceDescriptor, w: usize) -> Result<DMatrix<f64>> {
    let probe: Vec<f64> = (0..space.r).map(|i| 0.31 + 0.47 * i as f64).collect();
    let d = diagonal_of(space, &probe);
    let dw = diagonal_of(space, &space.weyl.elements[w].act(&probe));
    let size = d.len();
    let mut p = DMatrix::<f64>::zeros(size, size);
    for j in 0..size {
        let i = (0..size).find(|&i| (d[i] - dw[j]).abs() < 1e-9).ok_or_else(|| Error::InvalidArgument("Weyl element is not a permutation".into()))?;
        p[(j, i)] = 1.0;
    }
    if space.realization == Realization::Sl2RSquared {
        for b in 0..2 {
            if p.view((2 * b, 2 * b), (2, 2)).determinant() < 0.0 {
                for c in 0..size {
                    p[(2 * b, c)] = -p[(2 * b, c)];
                }
            }
        }
    } else if p.determinant() < 0.0 {
        for c in 0..size {
            p[(0, c)] = -p[(0, c)];
        }
    }
    Ok(p)
}

/// Rotation planes `(i, j)` spanning the transverse directions, paired with positive roots.
pub fn k_basis(space: &SpaceDescriptor) -> Result<Vec<((usize, usize), usize)>> {
    match space.realization {
        Realization::Sl2R => Ok(vec![((0, 1), 0)]),
        Realization::Sl3R => Ok(vec![((0, 1), 0), ((1, 2), 1), ((0, 2), 2)]),
        Realization::Sl2RSquared => Ok(vec![((0, 1), 0), ((2, 3), 1)]),
        _ => Err(Error::InvalidArgument(format!("no real K basis for {}", space.id))),
    }
}

/// `exp(s Y)` with `Y = (E_ij - E_ji)/sqrt 2`.
pub fn plane_rotation(size: usize, plane: (usize, usize), s: f64) -> DMatrix<f64> {
    let a = s * std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::identity(size, size);
    let (i, j) = plane;
    m[(i, i)] = a.cos();
    m[(j, j)] = a.cos();
    m[(i, j)] = a.sin();
    m[(j, i)] = -a.sin();
    m
}

/// `-Lambda(H(k exp H))`.
pub fn phase_phi(space: &SpaceDescriptor, big_lambda: &[f64], h: &[f64], k: &DMatrix<f64>) -> Result<f64> {
    let a = exp_flat(space, h)?.matrix.map(|z| z.re);
    let g = GroupElement::from_real(space, &(k * a))?;
    Ok(-dot(big_lambda, &iwasawa_h(space, &g)?))
}

/// Central-difference gradient of the phase along the K basis, in the left chart.
pub fn phase_gradient(space: &SpaceDescriptor, big_lambda: &[f64], h: &[f64], k: &DMatrix<f64>, step: f64) -> Result<Vec<f64>> {
    let size = k.nrows();
    let mut out = Vec::new();
    for (plane, _) in k_basis(space)? {
        let up = phase_phi(space, big_lambda, h, &(plane_rotation(size, plane, step) * k))?;
        let dn = phase_phi(space, big_lambda, h, &(plane_rotation(size, plane, -step) * k))?;
        out.push((up - dn) / (2.0 * step));
    }
    Ok(out)
}

/// Finite-difference Hessian of the phase at `k_w`, in the left chart.
pub fn phase_hessian_fd(space: &SpaceDescriptor, big_lambda: &[f64], h: &[f64], w: usize, step: f64) -> Result<DMatrix<f64>> {
    let kw = weyl_representative(space, w)?;
    let basis = k_basis(space)?;
    let size = kw.nrows();
    let f = |s: f64, u: f64, i: usize, j: usize| -> Result<f64> {
        let k = plane_rotation(size, basis[i].0, s) * plane_rotation(size, basis[j].0, u) * &kw;
        phase_phi(space, big_lambda, h, &k)
    };
    let m = basis.len();
    let f0 = phase_phi(space, big_lambda, h, &kw)?;
    let mut out = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = if i == j {
                (f(step, 0.0, i, i)? - 2.0 * f0 + f(-step, 0.0, i, i)?) / (step * step)
            } else {
                (f(step, step, i, j)? - f(step, -step, i, j)? - f(-step, step, i, j)? + f(-step, -step, i, j)?) / (4.0 * step * step)
            };
        }
    }
    Ok(out)
}

/// Exact diagonal Hessian at `k_w` in the left chart: `(1/2) Lambda(H_beta) (e^{2 beta(wH)} - 1)`.
pub fn hessian_noncompact(space: &SpaceDescriptor, big_lambda: &[f64], h: &[f64], w: usize) -> Result<Vec<f64>> {
    let rs = &space.roots;
    let wh = space.weyl.elements[w].act(h);
    Ok(k_basis(space)?
        .iter()
        .map(|&(_, b)| {
            let beta = &rs.positive_roots[b];
            0.5 * rs.pair(big_lambda, &beta.coords) * ((2.0 * beta.eval(&wh)).exp() - 1.0)
        })
        .collect())
}

/// The Hessian entries in the form `(1/2) Lambda(w H_alpha) (1 - e^{-alpha(H)})`, `alpha = w^{-1} beta`.
pub fn hessian_noncompact_stated(space: &SpaceDescriptor, big_lambda: &[f64], h: &[f64], w: usize) -> Result<Vec<f64>> {
    let rs = &space.roots;
    let we = &space.weyl.elements[w];
    let wh = we.act(h);
    Ok(k_basis(space)?
        .iter()
        .map(|&(_, b)| {
            let beta = &rs.positive_roots[b];
            0.5 * rs.pair(big_lambda, &beta.coords) * (1.0 - (-beta.eval(&wh)).exp())
        })
        .collect())
}

/// Cartan projection of an SU(2) element: the eigen-angle in `[0, pi]`, as a flat coordinate.
pub fn su2_cartan(space: &SpaceDescriptor, u: &DMatrix<Complex64>) -> Vec<f64> {
    let c = (0.5 * (u[(0, 0)] + u[(1, 1)]).re).clamp(-1.0, 1.0);
    vec![c.acos() / space.roots.positive_roots[0].coords[0]]
}

fn su2_torus_half(space: &SpaceDescriptor, h: f64) -> DMatrix<Complex64> {
    let theta = space.roots.positive_roots[0].eval(&[h]);
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::from_polar(1.0, theta / 2.0),
        Complex64::from_polar(1.0, -theta / 2.0),
    ]))
}

/// Transverse directions in su(2) of unit trace norm.
pub fn su2_transverse_basis() -> [DMatrix<Complex64>; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    [
        DMatrix::from_row_slice(2, 2, &[z, Complex64::new(s, 0.0), Complex64::new(-s, 0.0), z]),
        DMatrix::from_row_slice(2, 2, &[z, Complex64::new(0.0, s), Complex64::new(0.0, s), z]),
    ]
}

fn su2_exp(y: &DMatrix<Complex64>, s: f64) -> DMatrix<Complex64> {
    // y^2 = -|y|^2/2 I for the transverse generators
    let a = s * std::f64::consts::FRAC_1_SQRT_2;
    let id = DMatrix::<Complex64>::identity(2, 2);
    id * Complex64::new(a.cos(), 0.0) + y * Complex64::new(a.sin() * 2f64.sqrt(), 0.0)
}

/// The compact phase `-mu_tilde(A(h_1 k h))` on the group model of SU(2).
pub fn compact_phase(space: &SpaceDescriptor, mu_tilde: &[f64], h1: f64, h: f64, k: &DMatrix<Complex64>) -> f64 {
    let g1 = su2_torus_half(space, h1);
    let g0 = su2_torus_half(space, h);
    let u = &g1 * k * &g0 * &g0 * k.adjoint() * &g1;
    -dot(mu_tilde, &su2_cartan(space, &u))
}

/// Finite-difference Hessian of the compact phase at `k_w` along the transverse basis.
pub fn compact_hessian_fd(space: &SpaceDescriptor, mu_tilde: &[f64], h1: f64, h: f64, w: usize, step: f64) -> Result<Vec<f64>> {
    if space.realization != Realization::Su2Group {
        return Err(Error::InvalidArgument("the compact Hessian oracle is implemented on SU2group".into()));
    }
    let kw = if w == space.weyl.identity {
        DMatrix::<Complex64>::identity(2, 2)
    } else {
        weyl_su2()
    };
    let f0 = compact_phase(space, mu_tilde, h1, h, &kw);
    Ok(su2_transverse_basis()
        .iter()
        .map(|y| {
            let up = compact_phase(space, mu_tilde, h1, h, &(su2_exp(y, step) * &kw));
            let dn = compact_phase(space, mu_tilde, h1, h, &(su2_exp(y, -step) * &kw));
            (up - 2.0 * f0 + dn) / (step * step)
        })
        .collect())
}

fn weyl_su2() -> DMatrix<Complex64> {
    let o = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    DMatrix::from_row_slice(2, 2, &[z, o, -o, z])
}

/// Normalization between the stated Hessian and unit-trace-norm transverse coordinates.
pub const COMPACT_HESSIAN_SCALE: f64 = 4.0;

/// `kappa mu_tilde(H_alpha) sin alpha(h_1) sin alpha(wh) / sin alpha(h_1 wh)` for each transverse direction.
pub fn hessian_compact(space: &SpaceDescriptor, mu_tilde: &[f64], h1: f64, h: f64, w: usize) -> Result<Vec<f64>> {
    if space.realization != Realization::Su2Group {
        return Err(Error::InvalidArgument("the compact Hessian is implemented on SU2group".into()));
    }
    let rs = &space.roots;
    let a = &rs.positive_roots[0];
    let wh = space.weyl.elements[w].act(&[h])[0];
    let (t1, th) = (a.eval(&[h1]), a.eval(&[wh]));
    let sa = (t1 + th).sin();
    if sa.abs() < 1e-12 {
        return Err(Error::InvalidArgument("alpha(a) = +-1: the critical point degenerates".into()));
    }
    let d = COMPACT_HESSIAN_SCALE * rs.pair(mu_tilde, &a.coords) * t1.sin() * th.sin() / sa;
    Ok(vec![d; a.multiplicity as usize])
}

/// Window-RMS of `|phi_{t mu_tilde}(exp H)|` against `t`; expected slope `-(n-r)/2`.
pub fn compact_regular_scaling(space: &SpaceDescriptor, mu_tilde: &[f64], h: &[f64], t_grid: &[f64], window: usize) -> Result<FitReport> {
    if space.roots.positive_roots.iter().any(|a| a.eval(h).sin().abs() < 1e-3) {
        return Err(Error::InvalidArgument("H must be strictly regular".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &t in t_grid {
        let mut acc = 0.0;
        for j in 0..window {
            let mu = compact_weight(space, mu_tilde, t + j as f64)?;
            acc += phi_compact(space, &mu, h)?.value.norm_sqr();
        }
        xs.push(t + 0.5 * (window as f64 - 1.0));
        ys.push((acc / window as f64).sqrt());
    }
    let expected = -((space.n - space.r) as f64) / 2.0;
    Ok(FitReport::new(xs, ys, expected, 0.1))
}

/// Slope of `log err` against `log t` and the successive halving ratios.
pub fn decay_profile(ts: &[f64], errs: &[f64]) -> (f64, Vec<f64>) {
    let lx: Vec<f64> = ts.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = errs.iter().map(|v| v.ln()).collect();
    let ratios = errs.windows(2).map(|w| w[0] / w[1]).collect();
    (fit_line(&lx, &ly).0, ratios)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_catalog;

    #[test]
    fn envelope_examples() {
        let cat = build_catalog();
        let h2 = &cat["H2"];
        assert_eq!(envelope_noncompact(h2, 50.0, &[0.0]), 1.0);
        let h = from_simple_coords(h2, &[0.3]);
        assert!((envelope_noncompact(h2, 10.0, &h) - 0.5).abs() < 1e-15);
        let s2 = &cat["S2"];
        assert_eq!(envelope_compact(s2, 30.0, &[0.0], 0.5).unwrap(), 1.0);
        assert!(envelope_compact(s2, 30.0, &from_simple_coords(s2, &[0.6]), 0.5).is_err());
    }

    #[test]
    fn h2_main_term_is_classical() {
        let cat = build_catalog();
        let h2 = &cat["H2"];
        let s2 = 2f64.sqrt();
        let (t, nu, r) = (40.0, 1.0, 0.9);
        let c = closed_form_constant(h2).unwrap();
        let m = dkv_main_term(h2, &[nu * s2], t, &[r / s2], DEFAULT_EPSILON, c).unwrap();
        let nu_t = nu * t;
        let classical = (2.0 / (std::f64::consts::PI * nu_t * r.sinh())).sqrt() * (nu_t * r - std::f64::consts::FRAC_PI_4).cos();
        assert!((m.re - classical).abs() < 1e-13 && m.im.abs() < 1e-13);
    }

    #[test]
    fn h3_main_term_is_exact() {
        let cat = build_catalog();
        let h3 = &cat["H3"];
        let s2 = 2f64.sqrt();
        let (t, r) = (25.0, 0.8);
        let m = dkv_main_term(h3, &[s2], t, &[r / s2], DEFAULT_EPSILON, closed_form_constant(h3).unwrap()).unwrap();
        assert!((m.re - (t * r).sin() / (t * r.sinh())).abs() < 1e-13);
    }

    #[test]
    fn irregular_h_rejected() {
        let cat = build_catalog();
        let h2 = &cat["H2"];
        assert!(dkv_main_term(h2, &[1.0], 100.0, &[1e-4], DEFAULT_EPSILON, 1.0).is_err());
    }

    #[test]
    fn main_term_weyl_symmetry() {
        let cat = build_catalog();
        let sl3 = &cat["SL3R"];
        let lam = [0.5, 0.8];
        let h = from_simple_coords(sl3, &[0.4, 0.3]);
        let base = dkv_main_term(sl3, &lam, 30.0, &h, 0.1, 1.0).unwrap();
        for w in &sl3.weyl.elements {
            let moved_h = dkv_main_term(sl3, &lam, 30.0, &w.act(&h), 0.1, 1.0).unwrap();
            assert!((moved_h - base).norm() < 1e-12 * base.norm(), "{moved_h} {base}");
        }
    }

    #[test]
    fn critical_set_examples() {
        let cat = build_catalog();
        let sl3 = &cat["SL3R"];
        let reg = critical_set(sl3, &from_simple_coords(sl3, &[0.3, 0.2]));
        assert_eq!(reg.representatives.len(), 6);
        assert_eq!(reg.component_dim, 0);
        let zero = critical_set(sl3, &[0.0, 0.0]);
        assert_eq!(zero.representatives.len(), 1);
        assert_eq!(zero.component_dim, 3);
        let wall = critical_set(sl3, &from_simple_coords(sl3, &[0.0, 0.4]));
        assert_eq!(wall.component_dim, 1);
        assert_eq!(wall.representatives.len(), 3);
    }

    #[test]
    fn phase_at_weyl_points() {
        let cat = build_catalog();
        let sl3 = &cat["SL3R"];
        let lam = [0.7, 0.2];
        let h = from_simple_coords(sl3, &[0.3, 0.5]);
        for (i, w) in sl3.weyl.elements.iter().enumerate() {
            let k = weyl_representative(sl3, i).unwrap();
            let v = phase_phi(sl3, &lam, &h, &k).unwrap();
            assert!((v + dot(&lam, &w.act(&h))).abs() < 1e-12);
            let g = phase_gradient(sl3, &lam, &h, &k, 1e-5).unwrap();
            assert!(g.iter().all(|x| x.abs() < 1e-6), "{g:?}");
        }
        let k = plane_rotation(3, (0, 2), 0.7) * plane_rotation(3, (0, 1), 0.4);
        let g = phase_gradient(sl3, &lam, &h, &k, 1e-5).unwrap();
        assert!(g.iter().map(|x| x * x).sum::<f64>().sqrt() > 0.01);
    }

    #[test]
    fn noncompact_hessian_matches_finite_differences() {
        let cat = build_catalog();
        for id in ["H2", "SL3R"] {
            let sp = &cat[id];
            let lam: Vec<f64> = (0..sp.r).map(|i| 0.6 + 0.3 * i as f64).collect();
            let a: Vec<f64> = (0..sp.r).map(|i| 0.35 - 0.2 * i as f64).collect();
            let h = from_simple_coords(sp, &a);
            for w in 0..sp.weyl.order() {
                let fd = phase_hessian_fd(sp, &lam, &h, w, 1e-3).unwrap();
                let exact = hessian_noncompact(sp, &lam, &h, w).unwrap();
                for i in 0..exact.len() {
                    assert!((fd[(i, i)] - exact[i]).abs() < 1e-4, "{id} w={w} i={i} {} {}", fd[(i, i)], exact[i]);
                    for j in 0..exact.len() {
                        if i != j {
                            assert!(fd[(i, j)].abs() < 1e-4);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn compact_hessian_matches_finite_differences() {
        let cat = build_catalog();
        let su2 = &cat["SU2group"];
        let mu = [1.3];
        let s2 = 2f64.sqrt();
        for w in 0..2 {
            for (t1, th) in [(0.7, 0.2), (1.1, -0.3), (0.4, 0.05)] {
                let fd = compact_hessian_fd(su2, &mu, t1 * s2, th * s2, w, 1e-3).unwrap();
                let exact = hessian_compact(su2, &mu, t1 * s2, th * s2, w).unwrap();
                for (a, b) in fd.iter().zip(&exact) {
                    assert!((a - b).abs() < 1e-4, "w={w} {t1} {th}: {a} vs {b}");
                }
            }
        }
        assert_eq!(hessian_compact(su2, &mu, 0.6, 0.0, 0).unwrap(), vec![0.0, 0.0]);
        assert!(hessian_compact(su2, &mu, 0.5 * s2 * std::f64::consts::PI, 0.5 * s2 * std::f64::consts::PI, 0).is_err());
    }

    #[test]
    fn su2_regular_scaling() {
        let cat = build_catalog();
        let su2 = &cat["SU2group"];
        let a = 1.0 / 2f64.sqrt();
        let fit = compact_regular_scaling(su2, &[a], &[0.9 / a], &[40.0, 80.0, 160.0, 320.0], 32).unwrap();
        assert!(fit.passed, "{}", fit.slope);
    }
}
