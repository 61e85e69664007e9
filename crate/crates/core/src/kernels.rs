//! Spectral-projector kernels, their dyadic decomposition and the compact projector on S2.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::asymptotics::EnvelopeReport;
use crate::error::{Error, Result};
use crate::quad::{composite_gl, fit_line, gauss_legendre};
use crate::rootsys::{Realization, SpaceDescriptor};
use crate::spherical::legendre_table;

/// Radius `R` of the spatial bump `exp(-1/(1-(x/R)^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpProfile {
    pub radius: f64,
}

impl Default for BumpProfile {
    fn default() -> Self {
        Self { radius: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaleyWienerBump {
    pub bump_radius: f64,
    /// Support of the inverse transform of `h`, twice the bump radius.
    pub support_radius: f64,
    pub scale: f64,
    pub nu_grid: Vec<f64>,
    pub samples: Vec<f64>,
    /// `min h` on `|nu| <= 1`.
    pub min_on_unit_ball: f64,
    #[serde(skip)]
    nodes: Vec<(f64, f64)>,
}

impl PaleyWienerBump {
    /// `g_hat(nu) = int g(x) e^{-i nu x} dx`.
    pub fn g_hat(&self, nu: f64) -> f64 {
        2.0 * self.nodes.iter().map(|(x, wg)| wg * (nu * x).cos()).sum::<f64>()
    }

    pub fn h(&self, nu: f64) -> f64 {
        self.scale * self.g_hat(nu).powi(2)
    }

    /// Smallest `X` with `h(nu) < eps` for all sampled `nu >= X`.
    pub fn decay_radius(&self, eps: f64) -> f64 {
        let step = 0.05 / self.bump_radius;
        let mut last = 0.0;
        let mut nu = 0.0;
        while nu < 400.0 / self.bump_radius {
            if self.h(nu) >= eps {
                last = nu;
            }
            nu += step;
        }
        last + step
    }
}

pub fn build_bump(profile: BumpProfile) -> Result<PaleyWienerBump> {
    let r = profile.radius;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("bump radius must be positive".into()));
    }
    let breaks: Vec<f64> = (0..=64).map(|i| r * i as f64 / 64.0).collect();
    let nodes = composite_gl(&breaks, 16)
        .into_iter()
        .map(|(x, w)| {
            let y = x / r;
            let g = if y < 1.0 { (-1.0 / (1.0 - y * y)).exp() } else { 0.0 };
            (x, w * g)
        })
        .collect();
    let mut bump = PaleyWienerBump {
        bump_radius: r,
        support_radius: 2.0 * r,
        scale: 1.0,
        nu_grid: vec![],
        samples: vec![],
        min_on_unit_ball: 0.0,
        nodes,
    };
    let ball_min = (0..=200).map(|i| bump.g_hat(i as f64 / 200.0).powi(2)).fold(f64::INFINITY, f64::min);
    bump.scale = 1.0 / ball_min;
    bump.min_on_unit_ball = (0..=200).map(|i| bump.h(i as f64 / 200.0)).fold(f64::INFINITY, f64::min);
    if bump.min_on_unit_ball < 1.0 - 1e-12 {
        return Err(Error::InvalidArgument("positivity on the unit ball failed".into()));
    }
    bump.nu_grid = (0..=256).map(|i| i as f64 * 4.0 / (r * 256.0)).collect();
    bump.samples = bump.nu_grid.iter().map(|&v| bump.h(v)).collect();
    Ok(bump)
}

fn nu_unit(space: &SpaceDescriptor) -> f64 {
    let a = &space.roots.simple_roots()[0].coords;
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `sum_w h(|w lambda - t Lambda~|)`, distances measured in units where the rank-one parameter is `nu`.
pub fn h_t(bump: &PaleyWienerBump, space: &SpaceDescriptor, lambda_tilde: &[f64], t: f64, lambda: &[f64]) -> f64 {
    let unit = nu_unit(space);
    space
        .weyl
        .elements
        .iter()
        .map(|w| {
            let wl = w.act_functional(lambda);
            let d = wl.iter().zip(lambda_tilde).map(|(a, b)| (a - t * b).powi(2)).sum::<f64>().sqrt();
            bump.h(d / unit)
        })
        .sum()
}

/// `P_{-1/2 + i nu}(cosh r)` from the Mehler–Dirichlet integral.
pub fn conical(nu: f64, r: f64) -> f64 {
    if r == 0.0 {
        return 1.0;
    }
    mehler(r, nu, &|s| (nu * s).cos())
}

/// `P_{-1/2 + i nu}(cosh r)` at `nu = nu0 + j dnu`, `j < count`, on one set of Mehler nodes.
pub fn conical_grid(nu0: f64, dnu: f64, count: usize, r: f64) -> Vec<f64> {
    if r == 0.0 {
        return vec![1.0; count];
    }
    let top = nu0.abs().max((nu0 + dnu * count as f64).abs());
    let panels = ((top + 8.0) * r / 3.0).ceil() as usize + 2;
    let breaks: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
    let mut acc = vec![0.0; count];
    for (u, w) in composite_gl(&breaks, 12) {
        let s = r * (1.0 - u * u);
        let den = (2.0 * (0.5 * r * (2.0 - u * u)).sinh() * (0.5 * r * u * u).sinh()).sqrt();
        let wt = w * 2.0 * r * u / den;
        let step = Complex64::from_polar(1.0, dnu * s);
        let mut z = Complex64::from_polar(1.0, nu0 * s);
        for a in acc.iter_mut() {
            *a += wt * z.re;
            z *= step;
        }
    }
    acc.iter().map(|a| SQRT_2 / PI * a).collect()
}

/// `(sqrt 2/pi) int_0^r f(s) / sqrt(cosh r - cosh s) ds` with `s = r(1 - u^2)`.
fn mehler(r: f64, freq: f64, f: &dyn Fn(f64) -> f64) -> f64 {
    let panels = ((freq.abs() + 8.0) * r / 3.0).ceil() as usize + 2;
    let breaks: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
    let mut acc = 0.0;
    for (u, w) in composite_gl(&breaks, 12) {
        let s = r * (1.0 - u * u);
        let den = (2.0 * (0.5 * r * (2.0 - u * u)).sinh() * (0.5 * r * u * u).sinh()).sqrt();
        acc += w * f(s) * 2.0 * r * u / den;
    }
    SQRT_2 / PI * acc
}

/// Radius beyond which the `h_t^4` kernel of this bump vanishes.
pub fn kernel_support(bump: &PaleyWienerBump) -> f64 {
    8.0 * bump.bump_radius
}

/// Inverse spherical transform on H2 of the multiplier `h_t^4`.
#[derive(Debug, Clone)]
pub struct H2Kernel {
    pub t: f64,
    pub nu_center: f64,
    pub plancherel_constant: f64,
    pub support: f64,
    s_step: f64,
    g: Vec<Complex64>,
}

impl H2Kernel {
    pub fn build(bump: &PaleyWienerBump, space: &SpaceDescriptor, lambda_tilde: &[f64], t: f64) -> Result<Self> {
        if space.realization != Realization::Sl2R {
            return Err(Error::InvalidArgument("kernel inversion is implemented on H2".into()));
        }
        let a = &space.roots.positive_roots[0];
        let nu_center = t * space.roots.pair(lambda_tilde, &a.coords) / space.roots.pair(&a.coords, &a.coords);
        if nu_center <= 0.0 {
            return Err(Error::InvalidArgument("Lambda~ must be dominant".into()));
        }
        let reach = bump.decay_radius(1e-6);
        let lo = (nu_center - reach).max(0.0);
        let hi = nu_center + reach;
        let panels = ((hi - lo) * bump.bump_radius).ceil() as usize * 4 + 32;
        let breaks: Vec<f64> = (0..=panels).map(|i| lo + (hi - lo) * i as f64 / panels as f64).collect();
        let spec: Vec<(f64, f64)> = composite_gl(&breaks, 16)
            .into_iter()
            .map(|(nu, w)| {
                let ht = bump.h(nu - nu_center) + bump.h(-nu - nu_center);
                (nu - nu_center, w * ht.powi(4) * nu * (PI * nu).tanh())
            })
            .collect();
        let support = kernel_support(bump);
        let s_step = 1e-4 * support;
        let count = (2.0 * support / s_step).ceil() as usize + 8;
        let g = (0..count)
            .map(|k| {
                let s = k as f64 * s_step;
                spec.iter().map(|(x, w)| Complex64::from_polar(*w, x * s)).sum()
            })
            .collect();
        Ok(Self { t, nu_center, plancherel_constant: 1.0, support, s_step, g })
    }

    fn f(&self, s: f64) -> f64 {
        let pos = s / self.s_step;
        let i0 = (pos.floor() as isize - 2).clamp(0, self.g.len() as isize - 6) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..6 {
            let mut l = 1.0;
            for k in 0..6 {
                if k != j {
                    l *= (pos - (i0 + k) as f64) / (j as f64 - k as f64);
                }
            }
            acc += self.g[i0 + j] * l;
        }
        (Complex64::from_polar(1.0, self.nu_center * s) * acc).re
    }

    /// `K_t(r)` at geodesic radius `r = alpha(H)`.
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r > 2.0 * self.support {
            return 0.0;
        }
        let v = if r == 0.0 { self.f(0.0) } else { mehler(r, self.nu_center + 40.0, &|s| self.f(s)) };
        self.plancherel_constant * v
    }

    /// `2 pi int_0^rmax w(r) K_t(r) P_{-1/2+i nu}(cosh r) sinh r dr`.
    pub fn transform(&self, nu: f64, weight: &dyn Fn(f64) -> f64, r_min: f64, r_max: f64) -> f64 {
        let panels = (2.0 * (self.nu_center + nu) * (r_max - r_min) / 3.0).ceil() as usize + 4;
        let breaks: Vec<f64> = (0..=panels).map(|i| r_min + (r_max - r_min) * i as f64 / panels as f64).collect();
        2.0 * PI
            * composite_gl(&breaks, 12)
                .into_iter()
                .map(|(r, w)| {
                    let b = weight(r);
                    if b == 0.0 {
                        0.0
                    } else {
                        w * b * self.eval(r) * conical(nu, r) * r.sinh()
                    }
                })
                .sum::<f64>()
    }

    /// [`Self::transform`] at `nu = nu0 + j dnu`, `j < count`, sharing the kernel samples.
    pub fn transform_grid(&self, nu0: f64, dnu: f64, count: usize, weight: &dyn Fn(f64) -> f64, r_min: f64, r_max: f64) -> Vec<f64> {
        let top = nu0.abs().max((nu0 + dnu * count as f64).abs());
        let panels = (2.0 * (self.nu_center + top) * (r_max - r_min) / 3.0).ceil() as usize + 4;
        let breaks: Vec<f64> = (0..=panels).map(|i| r_min + (r_max - r_min) * i as f64 / panels as f64).collect();
        let samples: Vec<(f64, f64)> = composite_gl(&breaks, 12)
            .into_iter()
            .filter_map(|(r, w)| {
                let b = weight(r);
                (b != 0.0).then(|| (r, w * b * self.eval(r) * r.sinh()))
            })
            .collect();
        let mut out = vec![0.0; count];
        for (r, ws) in samples {
            for (o, c) in out.iter_mut().zip(conical_grid(nu0, dnu, count, r)) {
                *o += ws * c;
            }
        }
        out.iter().map(|v| 2.0 * PI * v).collect()
    }

    pub fn multiplier(&self, bump: &PaleyWienerBump, nu: f64) -> f64 {
        (bump.h(nu - self.nu_center) + bump.h(-nu - self.nu_center)).powi(4)
    }

    /// Fixes the Plancherel constant so the transform reproduces the multiplier at the spectral center.
    pub fn calibrate(&mut self, bump: &PaleyWienerBump) {
        self.plancherel_constant = 1.0;
        let fwd = self.transform(self.nu_center, &|_| 1.0, 0.0, self.support * 1.02);
        self.plancherel_constant = self.multiplier(bump, self.nu_center) / fwd;
    }

    /// Largest relative round-trip error at the given offsets from the spectral center.
    pub fn round_trip_error(&self, bump: &PaleyWienerBump, offsets: &[f64]) -> f64 {
        offsets
            .iter()
            .map(|d| {
                let nu = self.nu_center + d;
                let want = self.multiplier(bump, nu);
                (self.transform(nu, &|_| 1.0, 0.0, self.support * 1.02) - want).abs() / want
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelTable {
    pub space_id: String,
    pub t: f64,
    pub lambda_tilde: Vec<f64>,
    /// Geodesic radius `alpha(H)` on H2, polar angle on S2.
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub metadata: Vec<(String, String)>,
}

impl KernelTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str("r,K\n");
        for (r, v) in self.radii.iter().zip(&self.values) {
            out.push_str(&format!("{r:.10e},{v:.12e}\n"));
        }
        out
    }
}

/// Builds and calibrates `K_t` on H2, tabulated on the radial grid.
pub fn invert_transform(bump: &PaleyWienerBump, space: &SpaceDescriptor, lambda_tilde: &[f64], t: f64, radii: &[f64]) -> Result<(H2Kernel, KernelTable)> {
    let mut k = H2Kernel::build(bump, space, lambda_tilde, t)?;
    k.calibrate(bump);
    let values = radii.iter().map(|&r| k.eval(r)).collect();
    let metadata = vec![
        ("space".into(), space.id.clone()),
        ("t".into(), format!("{t}")),
        ("lambda".into(), format!("{lambda_tilde:?}")),
        ("bump_radius".into(), format!("{}", bump.bump_radius)),
        ("multiplier".into(), "h_t^4".into()),
        ("plancherel_constant".into(), format!("{:.12e}", k.plancherel_constant)),
    ];
    Ok((k, KernelTable { space_id: space.id.clone(), t, lambda_tilde: lambda_tilde.to_vec(), radii: radii.to_vec(), values, metadata }))
}

/// A radial grid on `[0, r_max]` with spacing `1/(density t)`.
pub fn radial_grid(t: f64, r_max: f64, density: f64) -> Vec<f64> {
    let n = (r_max * t * density).ceil() as usize;
    (0..=n).map(|i| r_max * i as f64 / n as f64).collect()
}

/// `|K_t(r)| / (t^{n-r} (1 + t r)^{-1/2})` over each table.
pub fn kernel_envelope_check(space: &SpaceDescriptor, tables: &[KernelTable]) -> EnvelopeReport {
    let nr = (space.n - space.r) as i32;
    let mut grid = Vec::new();
    let mut ratios = Vec::new();
    let mut per_t_max = Vec::new();
    for tb in tables {
        let mut m: f64 = 0.0;
        for (r, v) in tb.radii.iter().zip(&tb.values) {
            let env = tb.t.powi(nr) * (1.0 + tb.t * r).powf(-0.5);
            let q = v.abs() / env;
            m = m.max(q);
            grid.push((tb.t, vec![*r]));
            ratios.push(q);
        }
        per_t_max.push((tb.t, m));
    }
    let max_drift = per_t_max.windows(2).map(|w| (w[1].1 - w[0].1).abs() / w[0].1).fold(0.0, f64::max);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    EnvelopeReport { grid, ratios, max_ratio, per_t_max, max_drift, radius: f64::INFINITY }
}

/// `max |K_t(r)|` over `|r - r0| <= pi/t`.
pub fn local_amplitude(k: &H2Kernel, r0: f64) -> f64 {
    let w = PI / k.t;
    (0..=64).map(|i| k.eval(r0 - w + 2.0 * w * i as f64 / 64.0).abs()).fold(0.0, f64::max)
}

fn smooth_step(y: f64) -> f64 {
    let psi = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let a = psi(y);
    let b = psi(1.0 - y);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Even cutoff equal to 1 on `[-1, 1]` and supported in `[-e, e]`.
pub fn dyadic_cutoff(x: f64) -> f64 {
    let e = std::f64::consts::E;
    smooth_step((e - x.abs()) / (e - 1.0))
}

/// `beta_{t,m}(r)`: `alpha(t r)` for `m = 0`, else `alpha(t e^{-m} r) - alpha(t e^{-m+1} r)`.
pub fn dyadic_weight(t: f64, m: i64, r: f64) -> f64 {
    if m == 0 {
        dyadic_cutoff(t * r)
    } else {
        let s = t * (-(m as f64)).exp();
        dyadic_cutoff(s * r) - dyadic_cutoff(s * std::f64::consts::E * r)
    }
}

/// Number of pieces needed to cover a kernel supported in `[0, support]`.
pub fn dyadic_count(t: f64, support: f64) -> i64 {
    (t * support).ln().ceil() as i64 + 2
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicPiece {
    pub m: i64,
    pub t: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub sup_norm: f64,
    /// `max |K_{t,m}^(nu)|` over `nu in [t/2, 3t/2]`.
    pub transform_sup: f64,
}

pub fn dyadic_truncate(k: &H2Kernel, table: &KernelTable, m: i64) -> DyadicPiece {
    let t = table.t;
    let values: Vec<f64> = table.radii.iter().zip(&table.values).map(|(&r, v)| dyadic_weight(t, m, r) * v).collect();
    let e = std::f64::consts::E;
    let (lo, hi) = if m == 0 { (0.0, e / t) } else { ((m as f64 - 1.0).exp() / t, (m as f64 + 1.0).exp() / t) };
    let hi = hi.min(k.support * 1.02);
    let (sup_norm, transform_sup) = if lo >= hi {
        (0.0, 0.0)
    } else {
        let sup = (0..=512)
            .map(|i| {
                let r = lo + (hi - lo) * i as f64 / 512.0;
                (dyadic_weight(t, m, r) * k.eval(r)).abs()
            })
            .fold(0.0, f64::max);
        let ts = k
            .transform_grid(0.5 * k.nu_center, k.nu_center / 20.0, 21, &|r| dyadic_weight(t, m, r), lo, hi)
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        (sup, ts)
    };
    DyadicPiece { m, t, radii: table.radii.clone(), values, sup_norm, transform_sup }
}

/// Riesz–Thorin combination `sup^{1-2/p} transform_sup^{2/p}` of each piece, summed over `m`.
pub fn interpolated_sum(pieces: &[DyadicPiece], p: f64) -> f64 {
    let th = 2.0 / p;
    pieces.iter().filter(|x| x.sup_norm > 0.0).map(|x| x.sup_norm.powf(1.0 - th) * x.transform_sup.powf(th)).sum()
}

/// Cartan-density volume of the dyadic cell `m` against the monomial `prod_Phi alpha(H_m) prod_{Delta+} alpha(H_m)^{m(alpha)}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellVolume {
    pub quadrature: f64,
    pub product: f64,
    pub ratio: f64,
}

/// Rank one: `2 pi int sinh(r)^{m(alpha)} dr` over the cell; the product uses `alpha(H_m) = e^m / t`.
pub fn shell_volume(space: &SpaceDescriptor, t: f64, m: i64) -> Result<ShellVolume> {
    if space.r != 1 || space.is_compact() {
        return Err(Error::InvalidArgument("shell volumes are computed on rank-one noncompact spaces".into()));
    }
    let e = std::f64::consts::E;
    let (lo, hi) = if m == 0 { (0.0, e / t) } else { ((m as f64 - 1.0).exp() / t, (m as f64 + 1.0).exp() / t) };
    let mult = space.roots.positive_roots[0].multiplicity as i32;
    let quadrature = 2.0 * PI * gauss_legendre(32, lo, hi).iter().map(|(r, w)| w * r.sinh().powi(mult)).sum::<f64>();
    let am = (m as f64).exp() / t;
    let product = am * am.powi(mult);
    Ok(ShellVolume { quadrature, product, ratio: quadrature / product })
}

/// Total degree `|Phi| + sum m(alpha)` of the shell-volume monomial; equals `n`.
pub fn shell_monomial_degree(space: &SpaceDescriptor) -> u32 {
    space.r as u32 + space.roots.positive_mass()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactProjector {
    pub table: KernelTable,
    /// Legendre coefficients `(2l+1) t^2 f_l^2` of `K_mu`.
    pub coefficients: Vec<f64>,
    pub outside_band_fraction: f64,
    pub band: usize,
}

/// `K_mu = t^2 (b P_t) * conj(b P_t)` on S2 with `b` a smooth zonal cutoff of the given radius.
pub fn compact_projector(space: &SpaceDescriptor, t: usize, cutoff: f64, band: usize, thetas: &[f64]) -> Result<CompactProjector> {
    if space.realization != Realization::So3Sphere {
        return Err(Error::InvalidArgument("the compact projector is implemented on S2".into()));
    }
    if !(cutoff > 0.0 && cutoff < PI) {
        return Err(Error::InvalidArgument("cutoff radius must lie in (0, pi)".into()));
    }
    let l_max = t + band + 16;
    let panels = (l_max as f64 * cutoff / 2.0).ceil() as usize + 8;
    let breaks: Vec<f64> = (0..=panels).map(|i| cutoff * i as f64 / panels as f64).collect();
    let mut f = vec![0.0; l_max + 1];
    for (th, w) in composite_gl(&breaks, 16) {
        let y = th / cutoff;
        let b = if y < 1.0 { (-1.0 / (1.0 - y * y)).exp() } else { 0.0 };
        if b == 0.0 {
            continue;
        }
        let p = legendre_table(l_max, th.cos());
        let wt = 0.5 * w * b * p[t] * th.sin();
        for (fl, pl) in f.iter_mut().zip(&p) {
            *fl += wt * pl;
        }
    }
    let t2 = (t * t) as f64;
    let coefficients: Vec<f64> = f.iter().enumerate().map(|(l, fl)| t2 * (2 * l + 1) as f64 * fl * fl).collect();
    let total: f64 = coefficients.iter().sum();
    let outside: f64 = coefficients.iter().enumerate().filter(|(l, _)| l.abs_diff(t) > band).map(|(_, c)| c).sum();
    let values = thetas
        .iter()
        .map(|th| {
            let p = legendre_table(l_max, th.cos());
            coefficients.iter().zip(&p).map(|(c, pl)| c * pl).sum()
        })
        .collect();
    let metadata = vec![
        ("space".into(), space.id.clone()),
        ("t".into(), format!("{t}")),
        ("cutoff".into(), format!("{cutoff}")),
        ("band".into(), format!("{band}")),
    ];
    Ok(CompactProjector {
        table: KernelTable { space_id: space.id.clone(), t: t as f64, lambda_tilde: vec![], radii: thetas.to_vec(), values, metadata },
        coefficients,
        outside_band_fraction: outside / total,
        band,
    })
}

/// Largest `|K_mu(theta)| / (t max_{|nu - t| <= near} |P_nu(cos theta)|)` over the table.
pub fn projector_pointwise_ratio(proj: &CompactProjector, near: usize) -> f64 {
    let t = proj.table.t as usize;
    proj.table
        .radii
        .iter()
        .zip(&proj.table.values)
        .map(|(th, k)| {
            let p = legendre_table(t + near, th.cos());
            let m = p[t.saturating_sub(near)..=t + near].iter().map(|v| v.abs()).fold(0.0, f64::max);
            k.abs() / (t as f64 * m)
        })
        .fold(0.0, f64::max)
}

/// Log-log slope helper returning `(slope, intercept)`.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_catalog;

    #[test]
    fn bump_properties() {
        let b = build_bump(BumpProfile::default()).unwrap();
        assert!(b.h(0.0) >= 1.0);
        assert!(b.min_on_unit_ball >= 1.0 - 1e-12);
        assert!((b.h(3.7) - b.h(-3.7)).abs() < 1e-15 * b.h(3.7));
        assert!(b.samples.iter().all(|v| *v >= 0.0));
        assert!(build_bump(BumpProfile { radius: -1.0 }).is_err());
    }

    #[test]
    fn h_t_examples() {
        let cat = build_catalog();
        let h2 = &cat["H2"];
        let b = build_bump(BumpProfile::default()).unwrap();
        let lt = [SQRT_2];
        let t = 30.0;
        assert!(h_t(&b, h2, &lt, t, &[t * SQRT_2]) >= 1.0);
        let x = [0.37 * t * SQRT_2];
        assert!((h_t(&b, h2, &lt, t, &x) - h_t(&b, h2, &lt, t, &[-x[0]])).abs() < 1e-15);
        let far = 1.5 * b.decay_radius(1e-8);
        assert!(h_t(&b, h2, &lt, t, &[(t + far) * SQRT_2]) < 1e-8);
    }

    #[test]
    fn conical_frozen() {
        // mpmath legenp(-1/2 + i nu, 0, cosh r)
        assert!((conical(2.0, 1.0) - 0.217193207806578507).abs() < 1e-12);
        assert!((conical(5.0, 0.7) + 0.364379511579630188).abs() < 1e-12);
        assert!((conical(0.5, 2.0) - 0.615055374971018175).abs() < 1e-12);
    }

    #[test]
    fn grids_match_pointwise() {
        let g = conical_grid(3.0, 0.75, 9, 1.3);
        for (j, v) in g.iter().enumerate() {
            assert!((v - conical(3.0 + 0.75 * j as f64, 1.3)).abs() < 1e-12);
        }
        let cat = build_catalog();
        let b = build_bump(BumpProfile::default()).unwrap();
        let (k, _) = invert_transform(&b, &cat["H2"], &[SQRT_2], 20.0, &[0.0]).unwrap();
        let w = |r: f64| dyadic_weight(20.0, 2, r);
        let many = k.transform_grid(10.0, 2.5, 5, &w, 0.3, 1.2);
        for (j, v) in many.iter().enumerate() {
            let one = k.transform(10.0 + 2.5 * j as f64, &w, 0.3, 1.2);
            assert!((v - one).abs() < 1e-9 * one.abs().max(1e-3), "{v} {one}");
        }
    }

    #[test]
    fn kernel_round_trip_and_support() {
        let cat = build_catalog();
        let h2 = &cat["H2"];
        let b = build_bump(BumpProfile::default()).unwrap();
        let (k, _) = invert_transform(&b, h2, &[SQRT_2], 20.0, &[0.0]).unwrap();
        assert!(k.round_trip_error(&b, &[-1.5, -0.5, 0.7, 2.0]) < 1e-5);
        assert!((k.plancherel_constant * 2.0 * PI - 1.0).abs() < 1e-4, "{}", k.plancherel_constant);
        let k0 = k.eval(0.0);
        assert!(k0 > 0.0);
        for r in [1.05 * k.support, 1.3 * k.support, 1.9 * k.support] {
            assert!(k.eval(r).abs() < 1e-6 * k0, "{r}: {}", k.eval(r) / k0);
        }
    }

    #[test]
    fn dyadic_partition_of_unity() {
        let t = 40.0;
        let count = dyadic_count(t, 1.0);
        for i in 0..200 {
            let r = i as f64 / 199.0;
            let s: f64 = (0..=count).map(|m| dyadic_weight(t, m, r)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert_eq!(dyadic_cutoff(0.9), 1.0);
        assert_eq!(dyadic_cutoff(2.8), 0.0);
    }

    #[test]
    fn shell_volume_examples() {
        let cat = build_catalog();
        let h2 = &cat["H2"];
        let t = 80.0;
        let ratios: Vec<f64> = (0..=4).map(|m| shell_volume(h2, t, m).unwrap().ratio).collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
        assert!(hi / lo < 4.0);
        let e = std::f64::consts::E;
        assert!((ratios[1] / (PI * (e * e - 1.0 / (e * e))) - 1.0).abs() < 0.01);
        assert_eq!(shell_monomial_degree(&cat["SL3R"]), 5);
        assert_eq!(shell_monomial_degree(h2), 2);
    }

    #[test]
    fn projector_basics() {
        let cat = build_catalog();
        let s2 = &cat["S2"];
        let proj = compact_projector(s2, 30, 0.5, 80, &[0.0, 0.2, 1.0]).unwrap();
        assert!(proj.coefficients.iter().all(|c| *c >= 0.0));
        assert!(proj.outside_band_fraction < 1e-6, "{}", proj.outside_band_fraction);
        let pole: f64 = proj.coefficients.iter().sum();
        assert!((proj.table.values[0] - pole).abs() < 1e-10 * pole);
    }
}
