//! Spherical functions, Iwasawa projections, Weyl characters and Gaussian beams.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{composite_gl, gauss_legendre, loglog_slope};
use crate::rootsys::{dot, sl3_basis, Realization, SpaceDescriptor, SpectralParameter};

const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    GaussLegendre,
    TrapezoidPeriodic,
    ProductEulerAngles,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Starting node count per dimension; the evaluators raise it with the frequency.
    pub points_per_dim: usize,
    /// Absolute tolerance on the doubling error estimate.
    pub tol: f64,
    pub max_points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { scheme: Scheme::ProductEulerAngles, points_per_dim: 8, tol: 1e-9, max_points: 1024 }
    }
}

impl QuadratureSpec {
    pub fn new(points_per_dim: usize, tol: f64) -> Result<Self> {
        if points_per_dim < 8 {
            return Err(Error::InvalidArgument("points_per_dim must be at least 8".into()));
        }
        if tol <= 0.0 {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(QuadratureSpec { points_per_dim, tol, ..Default::default() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_error_est: f64,
    pub nodes_used: usize,
}

/// A group element in the matrix realization of a catalog space.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub matrix: DMatrix<Complex64>,
    pub space_id: String,
}

fn realization_size(r: Realization) -> usize {
    match r {
        Realization::Sl2R | Realization::Sl2C | Realization::Su2Group => 2,
        Realization::Sl3R | Realization::So3Sphere | Realization::Su3Group => 3,
        Realization::Sl2RSquared => 4,
    }
}

fn is_real_realization(r: Realization) -> bool {
    matches!(r, Realization::Sl2R | Realization::Sl3R | Realization::So3Sphere | Realization::Sl2RSquared)
}

impl GroupElement {
    pub fn new(space: &SpaceDescriptor, matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = realization_size(space.realization);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::InvalidArgument(format!("{} realization uses {d}x{d} matrices", space.id)));
        }
        if is_real_realization(space.realization) && matrix.iter().any(|z| z.im.abs() > RESIDUAL_TOL) {
            return Err(Error::InvalidArgument("real realization needs a real matrix".into()));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let det_ok = if space.realization == Realization::Sl2RSquared {
            let b1 = matrix.view((0, 0), (2, 2)).determinant();
            let b2 = matrix.view((2, 2), (2, 2)).determinant();
            let off = matrix.view((0, 2), (2, 2)).iter().chain(matrix.view((2, 0), (2, 2)).iter()).map(|z| z.norm()).sum::<f64>();
            (b1 - 1.0).norm() < RESIDUAL_TOL * scale * scale && (b2 - 1.0).norm() < RESIDUAL_TOL * scale * scale && off < RESIDUAL_TOL
        } else {
            (matrix.determinant() - 1.0).norm() < RESIDUAL_TOL * scale.powi(d as i32)
        };
        if !det_ok {
            return Err(Error::InvalidArgument("matrix does not have determinant one".into()));
        }
        if space.is_compact() {
            let res = (&matrix * matrix.adjoint() - DMatrix::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if res > RESIDUAL_TOL {
                return Err(Error::InvalidArgument("compact realization needs a unitary matrix".into()));
            }
        }
        Ok(GroupElement { matrix, space_id: space.id.clone() })
    }

    pub fn from_real(space: &SpaceDescriptor, m: &DMatrix<f64>) -> Result<Self> {
        GroupElement::new(space, m.map(|x| Complex64::new(x, 0.0)))
    }
}

/// Orthonormal (trace form) basis of the flat, as diagonal entries of the realization.
pub fn realization_basis(space: &SpaceDescriptor) -> Vec<Vec<f64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match space.realization {
        Realization::Sl2R | Realization::Sl2C | Realization::Su2Group | Realization::So3Sphere => vec![vec![s, -s]],
        Realization::Sl3R | Realization::Su3Group => sl3_basis().iter().map(|b| b.to_vec()).collect(),
        Realization::Sl2RSquared => vec![vec![s, -s, 0.0, 0.0], vec![0.0, 0.0, s, -s]],
    }
}

/// Diagonal entries `sum_i H_i basis_i`.
pub fn diagonal_of(space: &SpaceDescriptor, h: &[f64]) -> Vec<f64> {
    let basis = realization_basis(space);
    let mut d = vec![0.0; basis[0].len()];
    for (hi, b) in h.iter().zip(&basis) {
        for (dj, bj) in d.iter_mut().zip(b) {
            *dj += hi * bj;
        }
    }
    d
}

/// `exp H` in the realization: `diag(e^d)` for noncompact spaces, `diag(e^{i d})` for compact groups.
pub fn exp_flat(space: &SpaceDescriptor, h: &[f64]) -> Result<GroupElement> {
    if space.realization == Realization::So3Sphere {
        return Err(Error::InvalidArgument("S2 has no diagonal torus in its SO(3) realization".into()));
    }
    let d = diagonal_of(space, h);
    let entries: Vec<Complex64> = if space.is_compact() {
        d.iter().map(|x| Complex64::from_polar(1.0, *x)).collect()
    } else {
        d.iter().map(|x| Complex64::new(x.exp(), 0.0)).collect()
    };
    GroupElement::new(space, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(entries)))
}

/// Factors `g = n a k` with `n` upper unitriangular, `a` positive diagonal, `k` unitary.
pub fn iwasawa(g: &DMatrix<Complex64>) -> Result<(DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>)> {
    let d = g.nrows();
    let m = g * g.adjoint();
    let mut u = DMatrix::<Complex64>::identity(d, d);
    let mut diag = vec![0.0; d];
    for j in (0..d).rev() {
        let mut dj = m[(j, j)].re;
        for k in j + 1..d {
            dj -= u[(j, k)].norm_sqr() * diag[k];
        }
        if !(dj > 0.0) || !dj.is_finite() {
            return Err(Error::Factorization("non-positive pivot".into()));
        }
        diag[j] = dj;
        for i in 0..j {
            let mut v = m[(i, j)];
            for k in j + 1..d {
                v -= u[(i, k)] * u[(j, k)].conj() * diag[k];
            }
            u[(i, j)] = v / dj;
        }
    }
    let a: Vec<f64> = diag.iter().map(|x| x.sqrt()).collect();
    let n_inv = u.clone().try_inverse().ok_or_else(|| Error::Factorization("singular N factor".into()))?;
    let a_inv = DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(1.0 / a[i], 0.0) } else { Complex64::new(0.0, 0.0) });
    let k = a_inv * n_inv * g;
    let res = (&k * k.adjoint() - DMatrix::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if res > 1e-8 {
        return Err(Error::Factorization(format!("K factor residual {res:.2e}")));
    }
    Ok((u, a, k))
}

/// The flat component `H(g)` of `g = n exp(H(g)) k`.
pub fn iwasawa_h(space: &SpaceDescriptor, g: &GroupElement) -> Result<Vec<f64>> {
    if space.is_compact() {
        return Err(Error::InvalidArgument("Iwasawa projection needs a noncompact space".into()));
    }
    let (n, a, k) = iwasawa(&g.matrix)?;
    let d = a.len();
    let a_m = DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(a[i], 0.0) } else { Complex64::new(0.0, 0.0) });
    let scale = g.matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let res = (n * a_m * k - &g.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if res > RESIDUAL_TOL * scale {
        return Err(Error::Factorization(format!("reconstruction residual {res:.2e}")));
    }
    let log_a: Vec<f64> = a.iter().map(|x| x.ln()).collect();
    Ok(realization_basis(space).iter().map(|b| dot(b, &log_a)).collect())
}

fn start_nodes(q: &QuadratureSpec, freq: f64) -> usize {
    let n = (1.5 * freq + 24.0).ceil() as usize;
    let n = n.max(q.points_per_dim).max(8);
    n + n % 2
}

fn adaptive(q: &QuadratureSpec, start: usize, dims: u32, f: impl Fn(usize) -> Complex64) -> Result<EvalResult> {
    let mut n = start;
    let mut prev = f(n / 2);
    loop {
        let cur = f(n);
        let err = (cur - prev).norm();
        if err <= q.tol {
            return Ok(EvalResult { value: cur, abs_error_est: err, nodes_used: n.pow(dims) });
        }
        if 2 * n > q.max_points {
            return Err(Error::Quadrature { estimate: err, tol: q.tol, nodes: n.pow(dims) });
        }
        prev = cur;
        n *= 2;
    }
}

/// `(1/2pi) int_0^{2pi} (cosh r - sinh r cos psi)^{-c} dpsi` by the periodic trapezoid rule.
fn sl2r_integral(c: Complex64, r: f64, n: usize) -> Complex64 {
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let psi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let m = ch - sh * psi.cos();
        s += (-c * m.ln()).exp();
    }
    s / n as f64
}

/// `(1/2) int_{-1}^{1} (cosh r - u sinh r)^{-c} du` by Gauss-Legendre.
fn sl2c_integral(c: Complex64, r: f64, n: usize) -> Complex64 {
    let (ch, sh) = (r.cosh(), r.sinh());
    gauss_legendre(n, -1.0, 1.0)
        .iter()
        .map(|&(u, w)| 0.5 * w * (-c * (ch - u * sh).ln()).exp())
        .sum()
}

/// `phi` on SL(3,R)/SO(3) with diagonal functional `mu` and `A = e^{2 log a}`.
fn sl3_integral(mu: &[Complex64; 3], big_a: &[f64; 3], n: usize) -> Complex64 {
    let gy = (mu[1] - mu[0]) / 2.0;
    let gx = (mu[2] - mu[1]) / 2.0;
    let inv = [1.0 / big_a[0], 1.0 / big_a[1], 1.0 / big_a[2]];
    let pi = std::f64::consts::PI;
    let trig = |k: usize| -> Vec<(f64, f64)> {
        (0..k).map(|j| {
            let x = pi * j as f64 / k as f64;
            (x.cos(), x.sin())
        }).collect()
    };
    let angles = trig(n);
    let us = gauss_legendre(n, 0.0, 1.0);
    let mut total = Complex64::new(0.0, 0.0);
    for &(cb, wu) in &us {
        let sb2 = 1.0 - cb * cb;
        let mut acc_u = Complex64::new(0.0, 0.0);
        for &(cc, sc) in &angles {
            let x = sb2 * cc * cc * big_a[0] + sb2 * sc * sc * big_a[1] + cb * cb * big_a[2];
            let px = gx * x.ln();
            let p = cb * cb * (cc * cc * inv[0] + sc * sc * inv[1]) + sb2 * inv[2];
            let q = cb * cc * sc * (inv[1] - inv[0]);
            let r = sc * sc * inv[0] + cc * cc * inv[1];
            let mut acc_c = Complex64::new(0.0, 0.0);
            for &(ca, sa) in &angles {
                let y = p * ca * ca + 2.0 * q * ca * sa + r * sa * sa;
                acc_c += (gy * y.ln() + px).exp();
            }
            acc_u += acc_c;
        }
        total += wu * acc_u;
    }
    total / (n * n) as f64
}

/// `phi_{t lambda}(exp H) = int_K e^{(rho + i t lambda)(H(k exp H))} dk` with probability Haar measure.
pub fn phi_noncompact(space: &SpaceDescriptor, lambda: &SpectralParameter, h: &[f64], q: &QuadratureSpec) -> Result<EvalResult> {
    if space.is_compact() {
        return Err(Error::InvalidArgument(format!("{} is compact", space.id)));
    }
    if h.len() != space.r || lambda.direction.len() != space.r {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let lam = lambda.scaled();
    let mu: Vec<Complex64> = space.roots.rho.iter().zip(&lam).map(|(r, l)| Complex64::new(*r, *l)).collect();
    let freq = lam.iter().map(|x| x * x).sum::<f64>().sqrt() * h.iter().map(|x| x * x).sum::<f64>().sqrt();
    match space.realization {
        Realization::Sl2R | Realization::Sl2C => {
            let alpha = &space.roots.positive_roots[0];
            let c = mu[0] * alpha.coords[0] / space.roots.pair(&alpha.coords, &alpha.coords);
            let r = alpha.eval(h).abs();
            if r == 0.0 {
                return Ok(EvalResult { value: Complex64::new(1.0, 0.0), abs_error_est: 0.0, nodes_used: 1 });
            }
            let start = start_nodes(q, freq);
            if space.realization == Realization::Sl2R {
                adaptive(q, start, 1, |n| sl2r_integral(c, r, n))
            } else {
                adaptive(q, start, 1, |n| sl2c_integral(c, r, n))
            }
        }
        Realization::Sl2RSquared => {
            let mut value = Complex64::new(1.0, 0.0);
            let mut err = 0.0;
            let mut nodes = 0;
            for (i, alpha) in space.roots.positive_roots.iter().enumerate() {
                let c = mu[i] * alpha.coords[i] / space.roots.pair(&alpha.coords, &alpha.coords);
                let r = alpha.eval(h).abs();
                let res = if r == 0.0 {
                    EvalResult { value: Complex64::new(1.0, 0.0), abs_error_est: 0.0, nodes_used: 1 }
                } else {
                    adaptive(q, start_nodes(q, lam[i].abs() * h[i].abs()), 1, |n| sl2r_integral(c, r, n))?
                };
                err = err * res.value.norm() + res.abs_error_est * value.norm();
                value *= res.value;
                nodes += res.nodes_used;
            }
            Ok(EvalResult { value, abs_error_est: err, nodes_used: nodes })
        }
        Realization::Sl3R => {
            if h.iter().all(|x| *x == 0.0) {
                return Ok(EvalResult { value: Complex64::new(1.0, 0.0), abs_error_est: 0.0, nodes_used: 1 });
            }
            let basis = realization_basis(space);
            let mut mu_d = [Complex64::new(0.0, 0.0); 3];
            for (mi, b) in mu.iter().zip(&basis) {
                for (dj, bj) in mu_d.iter_mut().zip(b) {
                    *dj += mi * bj;
                }
            }
            let d = diagonal_of(space, h);
            let big_a = [(2.0 * d[0]).exp(), (2.0 * d[1]).exp(), (2.0 * d[2]).exp()];
            adaptive(q, start_nodes(q, freq), 3, |n| sl3_integral(&mu_d, &big_a, n))
        }
        _ => Err(Error::InvalidArgument(format!("no noncompact evaluator for {}", space.id))),
    }
}

/// Legendre polynomial `P_l(x)` by the three-term recurrence.
pub fn legendre(l: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for k in 1..l {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_0(x), ..., P_L(x)`.
pub fn legendre_table(l_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(l_max + 1);
    out.push(1.0);
    if l_max == 0 {
        return out;
    }
    out.push(x);
    for k in 1..l_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// `<mu, alpha> / <alpha, alpha>` for the simple roots, rounded to integers.
pub fn dynkin_labels(space: &SpaceDescriptor, mu: &[f64]) -> Result<Vec<u64>> {
    if !space.is_compact() || !space.is_lattice_weight(mu) {
        return Err(Error::InvalidArgument(format!("{mu:?} is not a dominant lattice weight of {}", space.id)));
    }
    let rs = &space.roots;
    Ok(rs.simple_roots().iter().map(|a| (rs.pair(mu, &a.coords) / rs.pair(&a.coords, &a.coords)).round() as u64).collect())
}

/// `prod_{alpha > 0} <mu + rho, alpha> / <rho, alpha>`.
pub fn weyl_dimension(space: &SpaceDescriptor, mu: &[f64]) -> Result<u64> {
    dynkin_labels(space, mu)?;
    let rs = &space.roots;
    let mut d = 1.0;
    for a in &rs.positive_roots {
        let top: Vec<f64> = mu.iter().zip(&rs.rho).map(|(x, y)| x + y).collect();
        d *= rs.pair(&top, &a.coords) / rs.pair(&rs.rho, &a.coords);
    }
    let k = d.round();
    if (d - k).abs() > 1e-6 * d.max(1.0) {
        return Err(Error::InvalidArgument(format!("non-integer dimension {d}")));
    }
    Ok(k as u64)
}

/// Dimension of the spherical representation: `d(mu)` for S2, `d(mu)^2` for group manifolds.
pub fn spherical_rep_dimension(space: &SpaceDescriptor, mu: &[f64]) -> Result<u64> {
    let d = weyl_dimension(space, mu)?;
    Ok(match space.realization {
        Realization::Su2Group | Realization::Su3Group => d * d,
        _ => d,
    })
}

/// `(x_i^a - x_j^a) / (x_i - x_j)` for `x = e^{i theta}`.
fn dd1(a: i64, ti: f64, tj: f64) -> Complex64 {
    if a <= 0 {
        return Complex64::new(0.0, 0.0);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut d = ti - tj;
    d -= two_pi * (d / two_pi).round();
    let tj = ti - d;
    let s = (0.5 * d).sin();
    let ratio = if s.abs() < 1e-12 { a as f64 } else { (0.5 * a as f64 * d).sin() / s };
    Complex64::from_polar(ratio, 0.5 * (a - 1) as f64 * (ti + tj))
}

/// Complete homogeneous symmetric polynomial `h_m(x_1, x_2, x_3)`.
fn complete_h(m: i64, x: &[Complex64; 3]) -> Complex64 {
    if m < 0 {
        return Complex64::new(0.0, 0.0);
    }
    let m = m as usize;
    let pw = |z: Complex64| {
        let mut v = Vec::with_capacity(m + 1);
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..=m {
            v.push(acc);
            acc *= z;
        }
        v
    };
    let (p1, p2, p3) = (pw(x[0]), pw(x[1]), pw(x[2]));
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..=m {
        for j in 0..=m - i {
            s += p1[i] * p2[j] * p3[m - i - j];
        }
    }
    s
}

/// Second divided difference of `x^a` at three unit-circle points.
fn dd2(a: i64, th: &[f64; 3]) -> Complex64 {
    if a < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let x = [Complex64::from_polar(1.0, th[0]), Complex64::from_polar(1.0, th[1]), Complex64::from_polar(1.0, th[2])];
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let &(i, k, j) = pairs
        .iter()
        .max_by(|p, q| (x[p.0] - x[p.1]).norm().total_cmp(&(x[q.0] - x[q.1]).norm()))
        .unwrap();
    let gap = (x[i] - x[k]).norm();
    if gap < 1e-3 {
        return complete_h(a - 2, &x);
    }
    (dd1(a, th[j], th[k]) - dd1(a, th[i], th[j])) / (x[k] - x[i])
}

/// Schur polynomial `s_lambda(e^{i theta_1}, e^{i theta_2}, e^{i theta_3})` via divided differences.
pub fn su3_character(p: u64, q: u64, theta: &[f64; 3]) -> Complex64 {
    let a = [(p + q + 2) as i64, (q + 1) as i64, 0i64];
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (row, &ak) in a.iter().enumerate() {
        m[row][0] = Complex64::from_polar(1.0, ak as f64 * theta[0]);
        m[row][1] = dd1(ak, theta[0], theta[1]);
        m[row][2] = dd2(ak, theta);
    }
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    -det
}

/// `sin((n+1) theta) / sin(theta)`, the SU(2) character of weight `n`.
pub fn su2_character(n: u64, theta: f64) -> f64 {
    let s = theta.sin();
    if s.abs() < 1e-12 {
        let sign = if theta.cos() < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        return sign * (n + 1) as f64;
    }
    ((n + 1) as f64 * theta).sin() / s
}

/// `theta_j = sum_i y_i E_{i,j}` for the SU(3) torus.
pub fn su3_angles(y: &[f64]) -> [f64; 3] {
    let b = sl3_basis();
    [y[0] * b[0][0] + y[1] * b[1][0], y[0] * b[0][1] + y[1] * b[1][1], y[0] * b[0][2] + y[1] * b[1][2]]
}

/// `phi_mu(exp h)`, normalized to one at the identity.
pub fn phi_compact(space: &SpaceDescriptor, mu: &SpectralParameter, h: &[f64]) -> Result<EvalResult> {
    if !space.is_compact() {
        return Err(Error::InvalidArgument(format!("{} is noncompact", space.id)));
    }
    if h.len() != space.r {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let w = mu.scaled();
    let labels = dynkin_labels(space, &w)?;
    let eps = f64::EPSILON;
    match space.realization {
        Realization::So3Sphere => {
            let l = labels[0] as usize;
            let theta = space.roots.positive_roots[0].eval(h);
            let v = legendre(l, theta.cos());
            Ok(EvalResult { value: Complex64::new(v, 0.0), abs_error_est: eps * (l + 1) as f64, nodes_used: l })
        }
        Realization::Su2Group => {
            let n = labels[0];
            let theta = space.roots.positive_roots[0].eval(h);
            let v = su2_character(n, theta) / (n + 1) as f64;
            Ok(EvalResult { value: Complex64::new(v, 0.0), abs_error_est: 4.0 * eps, nodes_used: 1 })
        }
        Realization::Su3Group => {
            let (p, q) = (labels[0], labels[1]);
            let d = weyl_dimension(space, &w)? as f64;
            let chi = su3_character(p, q, &su3_angles(h));
            Ok(EvalResult { value: chi / d, abs_error_est: 1e3 * eps * (p + q + 2) as f64, nodes_used: 1 })
        }
        _ => Err(Error::InvalidArgument(format!("no compact evaluator for {}", space.id))),
    }
}

/// Weight `mu = t * mu_tilde` with a lattice check.
pub fn compact_weight(space: &SpaceDescriptor, mu_tilde: &[f64], t: f64) -> Result<SpectralParameter> {
    let sp = SpectralParameter::new(&space.roots, mu_tilde.to_vec(), t)?;
    if !space.is_lattice_weight(&sp.scaled()) {
        return Err(Error::InvalidArgument(format!("t * {mu_tilde:?} is not in the weight lattice of {}", space.id)));
    }
    Ok(sp)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamFunction {
    pub space_id: String,
    pub mu: SpectralParameter,
}

/// Point at which a beam is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum BeamPoint {
    /// Sphere chart whose polar axis is orthogonal to the torus; the torus is the equator.
    Chart { theta: f64, phi: f64 },
    Group(GroupElement),
}

impl BeamFunction {
    pub fn new(space: &SpaceDescriptor, mu_tilde: &[f64], t: f64) -> Result<Self> {
        if !matches!(space.realization, Realization::So3Sphere | Realization::Su2Group) {
            return Err(Error::InvalidArgument(format!("beams are implemented on S2 and SU2group, not {}", space.id)));
        }
        Ok(BeamFunction { space_id: space.id.clone(), mu: compact_weight(space, mu_tilde, t)? })
    }

    fn degree(&self, space: &SpaceDescriptor) -> Result<u64> {
        Ok(dynkin_labels(space, &self.mu.scaled())?[0])
    }
}

/// `b_mu(u) = e^{-mu(H(u))}`: `(sin theta)^l e^{i l phi}` on S2, `conj(u_11)^n` on SU(2).
pub fn beam_eval(space: &SpaceDescriptor, b: &BeamFunction, u: &BeamPoint) -> Result<Complex64> {
    let n = b.degree(space)?;
    match (space.realization, u) {
        (Realization::So3Sphere, BeamPoint::Chart { theta, phi }) => {
            if !(*theta > 0.0 && *theta < std::f64::consts::PI) {
                return Err(Error::OutsideChart);
            }
            Ok(Complex64::from_polar(theta.sin().powf(n as f64), n as f64 * phi))
        }
        (Realization::Su2Group, BeamPoint::Group(g)) => {
            let u11 = g.matrix[(0, 0)].conj();
            if u11.norm() < 1e-300 {
                return Err(Error::OutsideChart);
            }
            Ok(u11.powu(n as u32))
        }
        _ => Err(Error::InvalidArgument("beam point does not match the space".into())),
    }
}

/// Point `exp(s V_alpha) * exp(h)` with `V_alpha` of unit trace norm, transverse to the torus.
pub fn transverse_point(space: &SpaceDescriptor, h: f64, s: f64) -> Result<BeamPoint> {
    let alpha = space.roots.positive_roots[0].coords[0];
    match space.realization {
        Realization::So3Sphere => Ok(BeamPoint::Chart { theta: std::f64::consts::FRAC_PI_2 + alpha * s, phi: alpha * h }),
        Realization::Su2Group => {
            let ang = s * std::f64::consts::FRAC_1_SQRT_2;
            let rot = DMatrix::from_row_slice(2, 2, &[ang.cos(), ang.sin(), -ang.sin(), ang.cos()]).map(|x| Complex64::new(x, 0.0));
            let torus = exp_flat(space, &[h])?;
            Ok(BeamPoint::Group(GroupElement::new(space, rot * torus.matrix)?))
        }
        _ => Err(Error::InvalidArgument("no transverse chart".into())),
    }
}

/// Centered second difference of `-log |b|` across the torus at `exp(h)`.
pub fn beam_transverse_second_derivative(space: &SpaceDescriptor, b: &BeamFunction, h: f64, step: f64) -> Result<f64> {
    let f = |s: f64| -> Result<f64> { Ok(-beam_eval(space, b, &transverse_point(space, h, s)?)?.norm().ln()) };
    Ok((f(step)? - 2.0 * f(0.0)? + f(-step)?) / (step * step))
}

/// Predicted transverse second derivative `t mu_tilde(H_alpha)`.
pub fn beam_hessian_prediction(space: &SpaceDescriptor, b: &BeamFunction) -> f64 {
    let a = &space.roots.positive_roots[0];
    space.roots.pair(&b.mu.scaled(), &a.coords)
}

/// `||b||_p` for normalized Haar measure; `p = inf` is allowed.
pub fn beam_lp_norm(space: &SpaceDescriptor, b: &BeamFunction, p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let n = b.degree(space)? as f64;
    if p.is_infinite() {
        return Ok(1.0);
    }
    match space.realization {
        Realization::So3Sphere => {
            let width = 1.0 / (p * n + 1.0).sqrt();
            let lo = (std::f64::consts::FRAC_PI_2 - 40.0 * width).max(0.0);
            let hi = std::f64::consts::PI - lo;
            let breaks: Vec<f64> = (0..=64).map(|i| lo + (hi - lo) * i as f64 / 64.0).collect();
            let v: f64 = composite_gl(&breaks, 16).iter().map(|&(th, w)| 0.5 * w * th.sin().powf(p * n + 1.0)).sum();
            Ok(v.powf(1.0 / p))
        }
        Realization::Su2Group => {
            // |u_11|^2 is uniform on [0,1] under Haar measure
            let e = p * n / 2.0;
            let lo = (1.0 - 60.0 / (e + 1.0)).max(0.0);
            let breaks: Vec<f64> = (0..=64).map(|i| lo + (1.0 - lo) * i as f64 / 64.0).collect();
            let v: f64 = composite_gl(&breaks, 16).iter().map(|&(s, w)| w * s.powf(e)).sum();
            Ok(v.powf(1.0 / p))
        }
        _ => Err(Error::InvalidArgument("no beam on this space".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub slope: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl FitReport {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, expected: f64, tolerance: f64) -> Self {
        let slope = loglog_slope(&xs, &ys);
        let passed = (slope - expected).abs() <= tolerance;
        FitReport { xs, ys, slope, expected, tolerance, passed }
    }
}

/// Log-log slope of `||b_{t mu_tilde}||_2` against `t`; expected `-(n-r)/4`.
pub fn beam_l2_lower(space: &SpaceDescriptor, mu_tilde: &[f64], t_grid: &[f64]) -> Result<FitReport> {
    let mut ys = Vec::new();
    for &t in t_grid {
        ys.push(beam_lp_norm(space, &BeamFunction::new(space, mu_tilde, t)?, 2.0)?);
    }
    let expected = -((space.n - space.r) as f64) / 4.0;
    Ok(FitReport::new(t_grid.to_vec(), ys, expected, 0.05))
}

/// Largest `|b|` over the transverse band `psi in [psi0, psi1]` away from the torus.
pub fn beam_decay_check(space: &SpaceDescriptor, b: &BeamFunction, psi0: f64, psi1: f64) -> Result<f64> {
    if !(psi0 > 0.0) || psi1 < psi0 || psi1 > std::f64::consts::FRAC_PI_2 {
        return Err(Error::InvalidArgument("region must stay a positive distance from the torus".into()));
    }
    let alpha = space.roots.positive_roots[0].coords[0];
    let hi = psi1.min(std::f64::consts::FRAC_PI_2 - 1e-9);
    let mut best: f64 = 0.0;
    for i in 0..=200 {
        let psi = psi0 + (hi - psi0) * i as f64 / 200.0;
        for j in 0..8 {
            let h = j as f64 * 0.7;
            let pt = transverse_point(space, h, psi / alpha)?;
            best = best.max(beam_eval(space, b, &pt)?.norm());
        }
    }
    Ok(best)
}

/// `||f||_p` for a function of the Cartan coordinate, with the Cartan density.
///
/// Compact spaces use normalized measure; noncompact ones integrate over `alpha(H) <= radius`.
pub fn lp_norm(space: &SpaceDescriptor, f: &dyn Fn(&[f64]) -> f64, p: f64, q: &QuadratureSpec, radius: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let eval = |nodes: usize| -> (f64, f64) {
        let pts = cartan_nodes(space, nodes, radius);
        let mut mass = 0.0;
        let mut acc = 0.0;
        let mut sup: f64 = 0.0;
        for (h, w) in &pts {
            let v = f(h).abs();
            sup = sup.max(v);
            mass += w;
            if p.is_finite() {
                acc += w * v.powf(p);
            }
        }
        let norm = if p.is_infinite() {
            sup
        } else if space.is_compact() {
            (acc / mass).powf(1.0 / p)
        } else {
            acc.powf(1.0 / p)
        };
        (norm, sup)
    };
    let n = q.points_per_dim.max(16);
    let (coarse, _) = eval(n / 2);
    let (fine, _) = eval(n);
    let err = (fine - coarse).abs();
    if err > q.tol * fine.abs().max(1e-300) {
        return Err(Error::Quadrature { estimate: err, tol: q.tol, nodes: n });
    }
    Ok(fine)
}

/// Cartan-coordinate nodes with weights proportional to the invariant density.
pub fn cartan_nodes(space: &SpaceDescriptor, nodes: usize, radius: f64) -> Vec<(Vec<f64>, f64)> {
    let rs = &space.roots;
    let density = |h: &[f64]| -> f64 {
        rs.positive_roots
            .iter()
            .map(|a| {
                let x = a.eval(h);
                let s = if space.is_compact() { x.sin() } else { x.sinh() };
                s.abs().powi(a.multiplicity as i32)
            })
            .product()
    };
    let panels = (nodes / 16).max(1);
    match (space.is_compact(), space.r) {
        (true, 1) => {
            let a = rs.positive_roots[0].coords[0];
            let pi = std::f64::consts::PI;
            let breaks: Vec<f64> = (0..=panels).map(|i| pi * i as f64 / panels as f64).collect();
            composite_gl(&breaks, 16)
                .into_iter()
                .map(|(th, w)| {
                    let h = vec![th / a];
                    let d = density(&h);
                    (h, w * d)
                })
                .collect()
        }
        (true, 2) => {
            let two_pi = 2.0 * std::f64::consts::PI;
            let b = sl3_basis();
            let mut out = Vec::with_capacity(nodes * nodes);
            for i in 0..nodes {
                for j in 0..nodes {
                    let th = [two_pi * i as f64 / nodes as f64, two_pi * j as f64 / nodes as f64];
                    let th3 = -th[0] - th[1];
                    let y = vec![
                        b[0][0] * th[0] + b[0][1] * th[1] + b[0][2] * th3,
                        b[1][0] * th[0] + b[1][1] * th[1] + b[1][2] * th3,
                    ];
                    let d = density(&y);
                    out.push((y, d));
                }
            }
            out
        }
        (false, _) => {
            let omega = rs.coroot_basis();
            let jac = if space.r == 1 { omega[0][0].abs() } else { (omega[0][0] * omega[1][1] - omega[0][1] * omega[1][0]).abs() };
            let breaks: Vec<f64> = (0..=panels).map(|i| radius * i as f64 / panels as f64).collect();
            let rule = composite_gl(&breaks, 16);
            let mut out = Vec::new();
            if space.r == 1 {
                for &(s, w) in &rule {
                    let h = vec![s * omega[0][0]];
                    let d = density(&h);
                    out.push((h, w * jac * d));
                }
            } else {
                for &(s1, w1) in &rule {
                    for &(s2, w2) in &rule {
                        let h: Vec<f64> = (0..2).map(|k| s1 * omega[0][k] + s2 * omega[1][k]).collect();
                        let d = density(&h);
                        out.push((h, w1 * w2 * jac * d));
                    }
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_catalog;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn iwasawa_of_flat_and_k() {
        let cat = build_catalog();
        let sl3 = &cat["SL3R"];
        let h0 = [0.4, -0.7];
        let g = exp_flat(sl3, &h0).unwrap();
        let h = iwasawa_h(sl3, &g).unwrap();
        assert!((h[0] - h0[0]).abs() < 1e-12 && (h[1] - h0[1]).abs() < 1e-12);
        let (ca, sa) = (0.3f64.cos(), 0.3f64.sin());
        let k = DMatrix::from_row_slice(3, 3, &[ca, -sa, 0.0, sa, ca, 0.0, 0.0, 0.0, 1.0]);
        let h = iwasawa_h(sl3, &GroupElement::from_real(sl3, &k).unwrap()).unwrap();
        assert!(h.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn iwasawa_reconstructs_sl2() {
        let cat = build_catalog();
        let h2 = &cat["H2"];
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.7, 1.1, 0.885]);
        let g = GroupElement::from_real(h2, &m).unwrap();
        let (n, a, k) = iwasawa(&g.matrix).unwrap();
        let am = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(a[0]), c(a[1])]));
        let res = (n.clone() * am * k - &g.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(res < 1e-12);
        assert!(n[(1, 0)].norm() < 1e-15 && (n[(0, 0)] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_matrices() {
        let cat = build_catalog();
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!(GroupElement::from_real(&cat["H2"], &m).is_err());
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]).map(c);
        assert!(GroupElement::new(&cat["SU2group"], m).is_err());
    }

    #[test]
    fn h2_matches_frozen_legendre_function() {
        let cat = build_catalog();
        let h2 = &cat["H2"];
        let s2 = 2f64.sqrt();
        let q = QuadratureSpec::default();
        // P_{-1/2 + i nu}(cosh r), from an arbitrary-precision evaluation
        for (nu, r, want) in [(2.0, 1.0, 0.217193207806578507), (5.0, 0.7, -0.364379511579630188), (0.5, 2.0, 0.615055374971018175)] {
            let lam = SpectralParameter::new(&h2.roots, vec![nu * s2], 1.0).unwrap();
            let v = phi_noncompact(h2, &lam, &[r / s2], &q).unwrap();
            assert!((v.value.re - want).abs() < 1e-10, "{nu} {r}");
            assert!(v.value.im.abs() < 1e-10);
        }
    }

    #[test]
    fn h3_closed_form() {
        let cat = build_catalog();
        let h3 = &cat["H3"];
        let s2 = 2f64.sqrt();
        let (nu, r) = (3.0, 1.3);
        let lam = SpectralParameter::new(&h3.roots, vec![nu * s2], 1.0).unwrap();
        let v = phi_noncompact(h3, &lam, &[r / s2], &QuadratureSpec::default()).unwrap();
        let want = (nu * r).sin() / (nu * r.sinh());
        assert!((v.value - want).norm() < 1e-10);
    }

    #[test]
    fn sl3_at_identity_and_weyl_invariance() {
        let cat = build_catalog();
        let sl3 = &cat["SL3R"];
        let q = QuadratureSpec { tol: 1e-9, ..Default::default() };
        let lam = SpectralParameter::new(&sl3.roots, vec![0.6, 0.9], 4.0).unwrap();
        assert_eq!(phi_noncompact(sl3, &lam, &[0.0, 0.0], &q).unwrap().value, c(1.0));
        let h = [0.35, 0.2];
        let base = phi_noncompact(sl3, &lam, &h, &q).unwrap().value;
        for w in &sl3.weyl.elements {
            let v = phi_noncompact(sl3, &lam, &w.act(&h), &q).unwrap().value;
            assert!((v - base).norm() < 1e-7);
        }
        // conj(phi_lambda(a)) = phi_{-lambda}(a) = phi_lambda(a^{-1})
        let inv = phi_noncompact(sl3, &lam, &[-h[0], -h[1]], &q).unwrap().value;
        assert!((inv - base.conj()).norm() < 1e-8);
    }

    #[test]
    fn sl3_integrand_matches_matrix_iwasawa() {
        let cat = build_catalog();
        let sl3 = &cat["SL3R"];
        let h = [0.5, -0.3];
        let d = diagonal_of(sl3, &h);
        let (a, b, cc) = (0.4f64, 1.1f64, 2.3f64);
        let rz = |x: f64| DMatrix::from_row_slice(3, 3, &[x.cos(), -x.sin(), 0.0, x.sin(), x.cos(), 0.0, 0.0, 0.0, 1.0]);
        let ry = |x: f64| DMatrix::from_row_slice(3, 3, &[x.cos(), 0.0, x.sin(), 0.0, 1.0, 0.0, -x.sin(), 0.0, x.cos()]);
        let k = rz(a) * ry(b) * rz(cc);
        let am = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.iter().map(|x| x.exp()).collect()));
        let hk = iwasawa_h(sl3, &GroupElement::from_real(sl3, &(&k * am)).unwrap()).unwrap();
        let big_a: Vec<f64> = d.iter().map(|x| (2.0 * x).exp()).collect();
        let x: f64 = (0..3).map(|j| k[(2, j)].powi(2) * big_a[j]).sum();
        let y: f64 = (0..3).map(|j| k[(0, j)].powi(2) / big_a[j]).sum();
        let diag = [-0.5 * y.ln(), 0.5 * (y / x).ln(), 0.5 * x.ln()];
        let want: Vec<f64> = realization_basis(sl3).iter().map(|b| dot(b, &diag)).collect();
        assert!((hk[0] - want[0]).abs() < 1e-12 && (hk[1] - want[1]).abs() < 1e-12);
    }

    #[test]
    fn legendre_values() {
        assert!((legendre(10, 0.3f64.cos()) - (-0.309274331118976425)).abs() < 1e-14);
        assert!((legendre(50, 1.1f64.cos()) - (-0.0253186999638119609)).abs() < 1e-14);
        assert_eq!(legendre(1, 0.4), 0.4);
        let tab = legendre_table(50, 0.2);
        assert!((tab[50] - legendre(50, 0.2)).abs() < 1e-15);
    }

    #[test]
    fn compact_examples() {
        let cat = build_catalog();
        let s2 = &cat["S2"];
        let a = 1.0 / 2f64.sqrt();
        let mu = compact_weight(s2, &[a], 1.0).unwrap();
        let v = phi_compact(s2, &mu, &[0.7 / a]).unwrap();
        assert!((v.value.re - 0.7f64.cos()).abs() < 1e-15);
        let su2 = &cat["SU2group"];
        let mu = compact_weight(su2, &[a], 10.0).unwrap();
        let v = phi_compact(su2, &mu, &[0.3 / a]).unwrap().value.re;
        // trace of diag(e^{i(10-2k) theta}) over the 11-dimensional irrep
        let tr: f64 = (0..=10).map(|k| ((10 - 2 * k) as f64 * 0.3).cos()).sum::<f64>() / 11.0;
        assert!((v - tr).abs() < 1e-14);
        assert_eq!(phi_compact(su2, &mu, &[0.0]).unwrap().value, c(1.0));
    }

    #[test]
    fn weyl_dimensions() {
        let cat = build_catalog();
        let su2 = &cat["SU2group"];
        let a = 1.0 / 2f64.sqrt();
        assert_eq!(weyl_dimension(su2, &[0.0]).unwrap(), 1);
        assert_eq!(weyl_dimension(su2, &[7.0 * a]).unwrap(), 8);
        let su3 = &cat["SU3group"];
        let w = su3.weight_lattice_basis.clone().unwrap();
        let adj: Vec<f64> = (0..2).map(|k| w[0][k] + w[1][k]).collect();
        assert_eq!(weyl_dimension(su3, &adj).unwrap(), 8);
        assert_eq!(weyl_dimension(&cat["S2"], &[5.0 * a]).unwrap(), 11);
    }

    fn schur_oracle(p: u64, q: u64, x: [Complex64; 3]) -> Complex64 {
        // sum over semistandard tableaux of shape (p+q, q) with entries 1..3
        let (l1, l2) = ((p + q) as usize, q as usize);
        let mut total = Complex64::new(0.0, 0.0);
        let mut row2 = vec![2usize; l2];
        loop {
            let row1_counts = |row2: &Vec<usize>| -> Complex64 {
                let mut s = Complex64::new(0.0, 0.0);
                // row 1 is weakly increasing with row1[i] < row2[i]
                let mut rec = vec![(0usize, 1usize, Complex64::new(1.0, 0.0))];
                while let Some((i, lo, acc)) = rec.pop() {
                    if i == l1 {
                        s += acc;
                        continue;
                    }
                    for v in lo..=3 {
                        if i < l2 && v >= row2[i] {
                            break;
                        }
                        rec.push((i + 1, v, acc * x[v - 1]));
                    }
                }
                s
            };
            let w: Complex64 = row2.iter().map(|&v| x[v - 1]).product();
            total += w * row1_counts(&row2);
            let mut k = l2;
            loop {
                if k == 0 {
                    return total;
                }
                k -= 1;
                if row2[k] < 3 {
                    row2[k] += 1;
                    for j in k + 1..l2 {
                        row2[j] = row2[k];
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn su3_character_matches_tableaux() {
        for (p, q) in [(0, 0), (1, 0), (1, 1), (2, 1), (3, 2)] {
            for th in [[0.3, -0.1, -0.2], [0.0, 0.0, 0.0], [1.0, 1.0, -2.0], [0.5, 0.5 + 1e-7, -1.0 - 1e-7]] {
                let x = th.map(|t| Complex64::from_polar(1.0, t));
                let want = schur_oracle(p, q, x);
                let got = su3_character(p, q, &th);
                assert!((got - want).norm() < 1e-9 * want.norm().max(1.0), "{p} {q} {th:?} {got} {want}");
            }
        }
        assert!((su3_character(1, 1, &[0.0; 3]) - 8.0).norm() < 1e-12);
    }

    #[test]
    fn su3_high_weight_near_wall_is_stable() {
        let near = su3_character(40, 30, &[0.2, 0.2 + 1e-9, -0.4 - 1e-9]);
        let on = su3_character(40, 30, &[0.2, 0.2, -0.4]);
        assert!((near - on).norm() < 1e-6 * on.norm().max(1.0));
    }

    #[test]
    fn beam_basics() {
        let cat = build_catalog();
        let s2 = &cat["S2"];
        let a = 1.0 / 2f64.sqrt();
        let b = BeamFunction::new(s2, &[a], 20.0).unwrap();
        let one = beam_eval(s2, &b, &BeamPoint::Chart { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 }).unwrap();
        assert!((one - 1.0).norm() < 1e-15);
        assert_eq!(beam_eval(s2, &b, &BeamPoint::Chart { theta: 0.0, phi: 0.0 }), Err(Error::OutsideChart));
        let d = beam_decay_check(s2, &b, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((d - 0.5f64.powf(10.0)).abs() < 1e-12);
        let su2 = &cat["SU2group"];
        let b = BeamFunction::new(su2, &[a], 6.0).unwrap();
        let e = exp_flat(su2, &[0.0]).unwrap();
        assert!((beam_eval(su2, &b, &BeamPoint::Group(e)).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn beam_transverse_hessian() {
        let cat = build_catalog();
        let a = 1.0 / 2f64.sqrt();
        for id in ["S2", "SU2group"] {
            let sp = &cat[id];
            let b = BeamFunction::new(sp, &[a], 30.0).unwrap();
            let d2 = beam_transverse_second_derivative(sp, &b, 0.4, 1e-3).unwrap();
            assert!((d2 - beam_hessian_prediction(sp, &b)).abs() < 1e-4, "{id} {d2}");
        }
    }

    #[test]
    fn beam_norms() {
        let cat = build_catalog();
        let a = 1.0 / 2f64.sqrt();
        let su2 = &cat["SU2group"];
        let b = BeamFunction::new(su2, &[a], 10.0).unwrap();
        assert!((beam_lp_norm(su2, &b, 4.0).unwrap() - (1.0f64 / 21.0).powf(0.25)).abs() < 1e-12);
        let s2 = &cat["S2"];
        let b = BeamFunction::new(s2, &[a], 2.0).unwrap();
        // (1/2) int sin^5 = 8/15
        assert!((beam_lp_norm(s2, &b, 2.0).unwrap() - (8.0f64 / 15.0).sqrt()).abs() < 1e-12);
        let fit = beam_l2_lower(s2, &[a], &[20.0, 40.0, 80.0, 160.0]).unwrap();
        assert!(fit.passed, "{}", fit.slope);
    }

    #[test]
    fn lp_norm_examples() {
        let cat = build_catalog();
        let s2 = &cat["S2"];
        let a = 1.0 / 2f64.sqrt();
        let q = QuadratureSpec { points_per_dim: 256, tol: 1e-10, ..Default::default() };
        assert!((lp_norm(s2, &|_| 1.0, 2.0, &q, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let l = 12;
        let v = lp_norm(s2, &|h| legendre(l, (a * h[0]).cos()), 2.0, &q, 0.0).unwrap();
        assert!((v * v - 1.0 / (2 * l + 1) as f64).abs() < 1e-12);
        let su3 = &cat["SU3group"];
        let w = su3.weight_lattice_basis.clone().unwrap();
        let mu = SpectralParameter::new(&su3.roots, (0..2).map(|k| w[0][k] + w[1][k]).collect(), 1.0).unwrap();
        let q = QuadratureSpec { points_per_dim: 64, tol: 1e-10, ..Default::default() };
        let v = lp_norm(su3, &|h| phi_compact(su3, &mu, h).unwrap().value.norm(), 2.0, &q, 0.0).unwrap();
        assert!((v * 8.0 - 1.0).abs() < 1e-10);
    }
}
