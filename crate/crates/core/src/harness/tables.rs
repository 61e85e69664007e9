//! CSV producers behind the command-line subcommands.

use serde::Serialize;

use super::{csv_table, fmt_num};
use crate::asymptotics::{
    ball_gauge, closed_form_constant, compact_hessian_fd, dkv_terms, envelope_compact, envelope_noncompact, from_simple_coords, hessian_compact,
    hessian_noncompact, hessian_noncompact_stated, phase_hessian_fd, wall_crossing_path, DEFAULT_BALL_RADIUS, DEFAULT_EPSILON,
};
use crate::error::{Error, Result};
use crate::exponents::{delta, delta0, delta_kink, maximizer_locus, p_grid, to_f64, v0, v1, vertex_value};
use crate::kernels::{
    build_bump, compact_projector, dyadic_count, dyadic_truncate, invert_transform, kernel_envelope_check, kernel_support, radial_grid, BumpProfile,
    KernelTable,
};
use crate::rootsys::{SpaceDescriptor, SpectralParameter};
use crate::spherical::{beam_lp_norm, compact_weight, phi_compact, phi_noncompact, BeamFunction, QuadratureSpec};

fn join(v: &[f64]) -> String {
    v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" ")
}

/// `space,p,inv_p,delta0,delta,L_v0,L_v1,maximizer,kink_p` over a `count`-point grid.
pub fn exponent_csv(space: &SpaceDescriptor, count: usize) -> Result<String> {
    let (n, r) = (space.n as i64, space.r as i64);
    let kink = delta_kink(n, r);
    let mut rows = Vec::new();
    for s in p_grid(count, n, r) {
        let p = if *s.numer() == 0 { f64::INFINITY } else { 1.0 / to_f64(s) };
        let locus = maximizer_locus(space, s)?;
        let who = match (locus.contains(&v0(space.r)), locus.contains(&v1(space.r))) {
            (true, true) => "both",
            (true, false) => "v0",
            (false, true) => "v1",
            _ => "other",
        };
        rows.push(vec![
            space.id.clone(),
            fmt_num(p),
            fmt_num(to_f64(s)),
            fmt_num(to_f64(delta0(s, n)?)),
            fmt_num(to_f64(delta(s, n, r)?)),
            fmt_num(to_f64(vertex_value(space, &v0(space.r), s)?)),
            fmt_num(to_f64(vertex_value(space, &v1(space.r), s)?)),
            who.into(),
            fmt_num(1.0 / to_f64(kink)),
        ]);
    }
    csv_table(&["space", "p", "inv_p", "delta0", "delta", "L_v0", "L_v1", "maximizer", "kink_p"], &rows)
}

/// `space,t,lambda,H,re_phi,im_phi,err_est,nodes` for one evaluation.
pub fn eval_csv(space: &SpaceDescriptor, t: f64, lambda: &[f64], h: &[f64], q: &QuadratureSpec) -> Result<String> {
    let sp = SpectralParameter::new(&space.roots, lambda.to_vec(), t)?;
    let e = if space.is_compact() { phi_compact(space, &compact_weight(space, lambda, t)?, h)? } else { phi_noncompact(space, &sp, h, q)? };
    let row = vec![
        space.id.clone(),
        fmt_num(t),
        join(lambda),
        join(h),
        format!("{:.15e}", e.value.re),
        format!("{:.15e}", e.value.im),
        format!("{:.3e}", e.abs_error_est),
        e.nodes_used.to_string(),
    ];
    csv_table(&["space", "t", "lambda", "H", "re_phi", "im_phi", "err_est", "nodes"], &[row])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HPath {
    WallCrossing,
    Regular,
}

/// H points for `verify`: a wall-crossing path or a grid of regular points.
pub fn h_path(space: &SpaceDescriptor, t: f64, path: HPath) -> Vec<Vec<f64>> {
    match path {
        HPath::WallCrossing if space.is_compact() => {
            let npts = if space.r == 1 { 41 } else { 13 };
            wall_crossing_path(space, t, DEFAULT_BALL_RADIUS, npts).into_iter().filter(|h| ball_gauge(space, h) <= DEFAULT_BALL_RADIUS + 1e-12).collect()
        }
        HPath::WallCrossing => wall_crossing_path(space, t, if space.r == 1 { 2.0 } else { 1.0 }, if space.r == 1 { 41 } else { 13 }),
        HPath::Regular => {
            let top = if space.is_compact() { DEFAULT_BALL_RADIUS } else { 1.2 };
            let xs: Vec<f64> = (0..4).map(|i| 0.3 * top + 0.7 * top * i as f64 / 3.0).collect();
            match space.r {
                1 => xs.iter().map(|&x| from_simple_coords(space, &[x])).collect(),
                _ => xs.iter().flat_map(|&x| xs.iter().map(move |&y| (x, y))).map(|(x, y)| from_simple_coords(space, &[x / 2.0, y / 2.0])).collect(),
            }
        }
    }
}

/// `t,H,phi_re,phi_im,model_re,model_im,rel_err,envelope,ratio`; model cells are empty where the main term is not defined.
pub fn verify_csv(space: &SpaceDescriptor, direction: &[f64], ladder: &[f64], path: HPath, q: &QuadratureSpec) -> Result<String> {
    let mut rows = Vec::new();
    for &t in ladder {
        for h in h_path(space, t, path) {
            let (phi, env) = if space.is_compact() {
                (phi_compact(space, &compact_weight(space, direction, t)?, &h)?.value, envelope_compact(space, t, &h, DEFAULT_BALL_RADIUS)?)
            } else {
                (phi_noncompact(space, &SpectralParameter::new(&space.roots, direction.to_vec(), t)?, &h, q)?.value, envelope_noncompact(space, t, &h))
            };
            let model = match (space.is_compact(), closed_form_constant(space)) {
                (false, Some(c)) => dkv_terms(space, direction, t, &h, DEFAULT_EPSILON, c).ok(),
                _ => None,
            };
            let (mre, mim, err) = match model {
                Some(terms) => {
                    let m: num_complex::Complex64 = terms.iter().map(|x| x.value()).sum();
                    (format!("{:.12e}", m.re), format!("{:.12e}", m.im), format!("{:.6e}", crate::asymptotics::relative_error(phi, &terms)))
                }
                None => (String::new(), String::new(), String::new()),
            };
            rows.push(vec![
                fmt_num(t),
                join(&h),
                format!("{:.12e}", phi.re),
                format!("{:.12e}", phi.im),
                mre,
                mim,
                err,
                format!("{env:.12e}"),
                format!("{:.12e}", phi.norm() / env),
            ]);
        }
    }
    csv_table(&["t", "H", "phi_re", "phi_im", "model_re", "model_im", "rel_err", "envelope", "ratio"], &rows)
}

/// `H,w,entry,finite_difference,exact,stated` at the Weyl points; `stated` is empty on compact spaces.
pub fn hessian_csv(space: &SpaceDescriptor, direction: &[f64], points: &[Vec<f64>], step: f64) -> Result<String> {
    let mut rows = Vec::new();
    for h in points {
        for w in 0..space.weyl.order() {
            if space.is_compact() {
                let h1 = 2.0 * DEFAULT_BALL_RADIUS;
                let exact = hessian_compact(space, direction, h1, h[0], w)?;
                let fd = compact_hessian_fd(space, direction, h1, h[0], w, step)?;
                for i in 0..exact.len() {
                    rows.push(vec![join(h), w.to_string(), i.to_string(), format!("{:.10e}", fd[i]), format!("{:.10e}", exact[i]), String::new()]);
                }
            } else {
                let exact = hessian_noncompact(space, direction, h, w)?;
                let stated = hessian_noncompact_stated(space, direction, h, w)?;
                let fd = phase_hessian_fd(space, direction, h, w, step)?;
                for i in 0..exact.len() {
                    rows.push(vec![
                        join(h),
                        w.to_string(),
                        i.to_string(),
                        format!("{:.10e}", fd[(i, i)]),
                        format!("{:.10e}", exact[i]),
                        format!("{:.10e}", stated[i]),
                    ]);
                }
            }
        }
    }
    csv_table(&["H", "w", "entry", "finite_difference", "exact", "stated"], &rows)
}

/// The kernel table on H2 (`h_t^4` inversion) or S2 (compact projector).
pub fn kernel_table(space: &SpaceDescriptor, t: f64, lambda: &[f64], grid_points: usize) -> Result<KernelTable> {
    if space.is_compact() {
        let thetas: Vec<f64> = (0..grid_points).map(|i| std::f64::consts::PI * i as f64 / (grid_points - 1).max(1) as f64).collect();
        return Ok(compact_projector(space, t.round() as usize, 0.5, 80, &thetas)?.table);
    }
    let bump = build_bump(BumpProfile::default())?;
    let top = 1.05 * kernel_support(&bump);
    let radii: Vec<f64> = (0..grid_points).map(|i| top * i as f64 / (grid_points - 1).max(1) as f64).collect();
    Ok(invert_transform(&bump, space, lambda, t, &radii)?.1)
}

/// `t,max_ratio,drift` from the kernel envelope check over a ladder.
pub fn kernel_check_csv(space: &SpaceDescriptor, ladder: &[f64], lambda: &[f64]) -> Result<(String, f64)> {
    let bump = build_bump(BumpProfile::default())?;
    let mut tables = Vec::new();
    for &t in ladder {
        tables.push(invert_transform(&bump, space, lambda, t, &radial_grid(t, 1.05 * kernel_support(&bump), 6.0))?.1);
    }
    let rep = kernel_envelope_check(space, &tables);
    let rows: Vec<Vec<String>> = rep.per_t_max.iter().map(|(t, m)| vec![fmt_num(*t), format!("{m:.10e}"), format!("{:.6e}", rep.max_drift)]).collect();
    Ok((csv_table(&["t", "max_ratio", "drift"], &rows)?, rep.max_drift))
}

/// `m,sup_norm,transform_sup` for every dyadic piece at `t`.
pub fn dyadic_csv(space: &SpaceDescriptor, t: f64, lambda: &[f64]) -> Result<String> {
    let bump = build_bump(BumpProfile::default())?;
    let support = kernel_support(&bump);
    let (k, tb) = invert_transform(&bump, space, lambda, t, &radial_grid(t, 1.05 * support, 6.0))?;
    let rows: Vec<Vec<String>> = (0..=dyadic_count(t, support))
        .map(|m| {
            let p = dyadic_truncate(&k, &tb, m);
            vec![m.to_string(), format!("{:.12e}", p.sup_norm), format!("{:.12e}", p.transform_sup)]
        })
        .collect();
    csv_table(&["m", "sup_norm", "transform_sup"], &rows)
}

/// `space,t,p,norm,scaled_norm` with `scaled_norm = t^{(n-r)/4} ||b||_p`.
pub fn beam_csv(space: &SpaceDescriptor, mu_tilde: &[f64], ladder: &[f64], ps: &[f64]) -> Result<String> {
    if ps.iter().any(|p| *p < 1.0) {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let nr = (space.n - space.r) as f64;
    let mut rows = Vec::new();
    for &t in ladder {
        let b = BeamFunction::new(space, mu_tilde, t)?;
        for &p in ps {
            let v = beam_lp_norm(space, &b, p)?;
            rows.push(vec![space.id.clone(), fmt_num(t), fmt_num(p), format!("{v:.12e}"), format!("{:.12e}", t.powf(nr / 4.0) * v)]);
        }
    }
    csv_table(&["space", "t", "p", "norm", "scaled_norm"], &rows)
}
