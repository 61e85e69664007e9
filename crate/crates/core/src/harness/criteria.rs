//! The ten acceptance criteria as executable checks.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{csv_table, emit_exponent_graph, fmt_num, graph_grid, tolerance_lookup, CheckResult};
use crate::asymptotics::{
    ball_gauge, calibrate_constant, closed_form_constant, compact_hessian_fd, decay_profile, dkv_main_term, dkv_terms, envelope_scan_compact,
    envelope_scan_noncompact, from_simple_coords, hessian_compact, hessian_noncompact, hessian_noncompact_stated, k_basis,
    phase_hessian_fd, relative_error, wall_crossing_path, EnvelopeReport, DEFAULT_BALL_RADIUS, DEFAULT_EPSILON,
};
use crate::error::Result;
use crate::exponents::{
    convexity_certificate, delta, delta_kink, delta_relation_check, maximizer_locus, p_grid, product_delta_check, to_f64, v0, v1,
    vertex_value, Q,
};
use crate::kernels::{
    build_bump, compact_projector, dyadic_count, dyadic_truncate, interpolated_sum, invert_transform, kernel_envelope_check, kernel_support,
    local_amplitude, loglog_fit, projector_pointwise_ratio, radial_grid, BumpProfile, DyadicPiece,
};
use crate::quad::fit_line;
use crate::rootsys::{build_catalog, SpaceDescriptor, SpectralParameter};
use crate::spherical::{beam_l2_lower, beam_lp_norm, compact_weight, lp_norm, phi_compact, phi_noncompact, spherical_rep_dimension, BeamFunction, QuadratureSpec};

pub const TITLES: [&str; 10] = [
    "exponent identities",
    "M(s) strict convexity",
    "noncompact envelope",
    "asymptotic formula",
    "compact envelope",
    "kernel envelope",
    "dyadic scalings",
    "Hessian formulas",
    "beam regime",
    "compact projector",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionContext {
    /// Restricts the catalog spaces a criterion visits; `None` keeps the criterion's own list.
    pub spaces: Option<BTreeSet<String>>,
    pub t_ladder: Vec<f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
}

impl Default for CriterionContext {
    fn default() -> Self {
        CriterionContext { spaces: None, t_ladder: vec![20.0, 40.0, 80.0, 160.0], tolerances: BTreeMap::new(), seed: 0 }
    }
}

impl CriterionContext {
    pub fn tol(&self, name: &str) -> f64 {
        tolerance_lookup(&self.tolerances, name)
    }

    fn visits(&self, id: &str) -> bool {
        self.spaces.as_ref().is_none_or(|s| s.contains(id))
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub checks: Vec<CheckResult>,
    /// `(file name, CSV text)` pairs.
    pub tables: Vec<(String, String)>,
}

impl CriterionOutcome {
    fn new(id: u8) -> Self {
        CriterionOutcome { id, title: TITLES[id as usize - 1].into(), checks: vec![], tables: vec![] }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    /// Every check outside the documented deviations passes.
    pub fn required_passed(&self) -> bool {
        self.checks.iter().filter(|c| !c.documented_deviation).all(|c| c.passed())
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    /// One summary line, `PASS` only if every check passes.
    pub fn line(&self) -> String {
        let fails = self.failures();
        let status = if fails.is_empty() { "PASS" } else { "FAIL" };
        let mut s = format!("criterion {:>2} {status} {} ({}/{} checks)", self.id, self.title, self.checks.len() - fails.len(), self.checks.len());
        if !fails.is_empty() {
            let names: Vec<String> = fails
                .iter()
                .map(|c| if c.documented_deviation { format!("{} [documented deviation]", c.name) } else { c.name.clone() })
                .collect();
            s.push_str(&format!("; failing: {}", names.join(", ")));
        }
        s
    }

    fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }
}

pub fn run(id: u8, ctx: &CriterionContext) -> Result<CriterionOutcome> {
    match id {
        1 => exponent_identities(ctx),
        2 => convexity(ctx),
        3 => noncompact_envelope(ctx),
        4 => asymptotic_formula(ctx),
        5 => compact_envelope(ctx),
        6 => kernel_envelope(ctx),
        7 => dyadic_scalings(ctx),
        8 => hessians(ctx),
        9 => beams(ctx),
        10 => projector(ctx),
        _ => Err(crate::error::Error::Config(format!("no criterion {id}"))),
    }
}

fn slope_check(name: impl Into<String>, c: u8, slope: f64, expected: f64, tol: f64) -> CheckResult {
    CheckResult::within(name, c, (slope - expected).abs(), tol, format!("slope {slope:.4}, expected {expected:.4}"))
}

fn spaces(ctx: &CriterionContext, ids: &[&str]) -> Vec<SpaceDescriptor> {
    let cat = build_catalog();
    ids.iter().filter(|id| ctx.visits(id)).map(|id| cat[*id].clone()).collect()
}

fn rho_direction(space: &SpaceDescriptor) -> Vec<f64> {
    let rho = &space.roots.rho;
    let norm = rho.iter().map(|x| x * x).sum::<f64>().sqrt();
    rho.iter().map(|x| x / norm).collect()
}

/// `mu_tilde` used on compact spaces: the sum of the lattice basis.
fn lattice_direction(space: &SpaceDescriptor) -> Vec<f64> {
    let basis = space.weight_lattice_basis.as_ref().expect("compact spaces carry a lattice basis");
    (0..space.r).map(|i| basis.iter().map(|b| b[i]).sum()).collect()
}

fn q_of(x: f64) -> String {
    fmt_num(x)
}

fn exponent_identities(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(1);
    let ids = ["H2", "H3", "SL3R", "S2", "SU2group", "SU3group"];
    let mut rows = Vec::new();
    for sp in spaces(ctx, &ids) {
        let (n, r) = (sp.n as i64, sp.r as i64);
        let kink = delta_kink(n, r);
        let (zero, one) = (v0(sp.r), v1(sp.r));
        let mut relation_bad = 0;
        let mut locus_bad = 0;
        let grid = p_grid(50, n, r);
        for &s in &grid {
            if !delta_relation_check(&sp, s)? {
                relation_bad += 1;
            }
            let locus = maximizer_locus(&sp, s)?;
            let inside = locus.iter().all(|v| *v == zero || *v == one);
            let both = locus.contains(&zero) && locus.contains(&one);
            if !inside || (s == kink && !both) {
                locus_bad += 1;
            }
            let l0 = vertex_value(&sp, &zero, s)?;
            let l1 = vertex_value(&sp, &one, s)?;
            let who: Vec<String> = locus.iter().map(|v| v.iter().map(|b| b.to_string()).collect()).collect();
            rows.push(vec![sp.id.clone(), s.to_string(), l0.to_string(), l1.to_string(), (delta(s, n, r)? * 2).to_string(), who.join(" ")]);
        }
        out.push(CheckResult::within(
            format!("delta_relation.{}", sp.id),
            1,
            relation_bad as f64,
            0.0,
            format!("max(L(v0), L(v1)) = 2 delta on {} grid points, {relation_bad} mismatches", grid.len()),
        ));
        out.push(CheckResult::within(
            format!("maximizer_locus.{}", sp.id),
            1,
            locus_bad as f64,
            0.0,
            format!("maximizers within {{v0, v1}}, both at 1/p = {kink}; {locus_bad} violations"),
        ));
        if r >= 1 && n % r == 0 && n / r >= 2 {
            out.push(CheckResult::flag(format!("product_delta.{}", sp.id), 1, product_delta_check(n, r)?, format!("delta(p; {n}, {r}) = {r} delta0(p; {})", n / r)));
        }
        out.tables.push((format!("exponent_graph_{}.csv", sp.id), emit_exponent_graph(&sp, &graph_grid(&sp, 51))?));
    }
    if ctx.visits("H2xH2") {
        out.push(CheckResult::flag("product_delta.H2xH2", 1, product_delta_check(4, 2)?, "delta(p; 4, 2) = 2 delta0(p; 2)"));
    }
    out.tables.push(("exponent_identities.csv".into(), csv_table(&["space", "inv_p", "L_v0", "L_v1", "two_delta", "maximizers"], &rows)?));
    Ok(out)
}

fn convexity(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(2);
    let mut rows = Vec::new();
    for sp in spaces(ctx, &["H2", "H3", "SL3R", "S2", "SU2group", "SU3group"]) {
        let (strict, wit) = convexity_certificate(&sp)?;
        let ms: Vec<String> = wit.iter().map(|w| w.m.to_string()).collect();
        for w in &wit {
            let phi: Vec<String> = w.phi_v.iter().map(|i| i.to_string()).collect();
            rows.push(vec![sp.id.clone(), w.s.to_string(), w.m.to_string(), phi.join(" "), w.connected.to_string()]);
        }
        out.push(CheckResult::flag(format!("convexity.{}", sp.id), 2, strict, format!("M(0..r) = [{}]", ms.join(", "))));
    }
    out.tables.push(("convexity.csv".into(), csv_table(&["space", "s", "M", "phi_v", "connected"], &rows)?));
    Ok(out)
}

fn envelope_rows(space: &str, rep: &EnvelopeReport) -> Vec<Vec<String>> {
    rep.grid
        .iter()
        .zip(&rep.ratios)
        .map(|((t, h), q)| {
            let mut row = vec![space.to_string(), q_of(*t)];
            row.push(h.iter().map(|x| format!("{x:.12e}")).collect::<Vec<_>>().join(" "));
            row.push(format!("{q:.12e}"));
            row
        })
        .collect()
}

fn noncompact_envelope(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(3);
    let ladder = [10.0, 20.0, 40.0, 80.0];
    let mut rows = Vec::new();
    for sp in spaces(ctx, &["H2", "SL3R"]) {
        let q = space_quadrature(&sp);
        let (lambda, reach, npts) = if sp.r == 1 { (vec![SQRT_2], 2.0, 81) } else { (rho_direction(&sp), 1.0, 13) };
        let paths = |t: f64| wall_crossing_path(&sp, t, reach, npts);
        let rep = envelope_scan_noncompact(&sp, &lambda, &ladder, &paths, &q)?;
        let per_t: Vec<String> = rep.per_t_max.iter().map(|(t, m)| format!("{t}: {m:.4}")).collect();
        out.push(CheckResult::within(
            format!("drift.{}", sp.id),
            3,
            rep.max_drift,
            ctx.tol("c3.drift"),
            format!("per-t max ratio {{{}}}, max {:.4}", per_t.join(", "), rep.max_ratio),
        ));
        let near = rep
            .grid
            .iter()
            .filter(|(t, h)| sp.roots.positive_roots.iter().any(|a| a.eval(h).abs() <= 1.0 / t))
            .count();
        out.push(CheckResult::flag(format!("near_wall.{}", sp.id), 3, near > 0, format!("{near} points within 1/t of a wall")));
        rows.extend(envelope_rows(&sp.id, &rep));
    }
    out.tables.push(("noncompact_envelope.csv".into(), csv_table(&["space", "t", "H", "ratio"], &rows)?));
    Ok(out)
}

fn rms(v: &[f64]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

fn asymptotic_formula(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(4);
    let eps = DEFAULT_EPSILON;
    let mut rows = Vec::new();
    if ctx.visits("H2") {
        let h2 = build_catalog().remove("H2").unwrap();
        let q = space_quadrature(&h2);
        let lambda = [SQRT_2];
        let c = closed_form_constant(&h2).unwrap();
        let mut worst: f64 = 0.0;
        let mut samples = Vec::new();
        let t_top = *ctx.t_ladder.last().unwrap();
        for &t in &ctx.t_ladder {
            let lam = SpectralParameter::new(&h2.roots, lambda.to_vec(), t)?;
            for a in [0.25, 0.5, 1.0, 1.5] {
                let h = from_simple_coords(&h2, &[a]);
                let phi = phi_noncompact(&h2, &lam, &h, &q)?.value;
                let terms = dkv_terms(&h2, &lambda, t, &h, eps, c)?;
                let err = relative_error(phi, &terms);
                worst = worst.max(err * t * a);
                if t == t_top && a >= 0.5 {
                    samples.push((phi, dkv_main_term(&h2, &lambda, t, &h, eps, 1.0)?));
                }
                let m: Complex64 = terms.iter().map(|x| x.value()).sum();
                rows.push(vec!["H2".into(), q_of(t), q_of(a), format!("{:.12e}", phi.re), format!("{:.12e}", m.re), format!("{err:.6e}")]);
            }
        }
        out.push(CheckResult::within(
            "h2_relative_error",
            4,
            worst,
            ctx.tol("c4.h2_rel_factor"),
            format!("max t min|alpha(H)| x relative error = {worst:.4}"),
        ));
        // Classical large-degree Legendre asymptotic, independent of the W-sum.
        let (nu_t, r) = (t_top, 1.0);
        let classical = (2.0 / (std::f64::consts::PI * nu_t * f64::sinh(r))).sqrt() * (nu_t * r - std::f64::consts::FRAC_PI_4).cos();
        let unit = dkv_main_term(&h2, &lambda, t_top, &from_simple_coords(&h2, &[r]), eps, 1.0)?;
        let oracle = classical / unit.re;
        let fitted = calibrate_constant(&samples);
        out.push(CheckResult::within(
            "h2_constant",
            4,
            (fitted / oracle - 1.0).abs(),
            ctx.tol("c4.h2_constant"),
            format!("fitted {fitted:.6}, classical oracle {oracle:.6}"),
        ));
    }
    if ctx.visits("SL3R") {
        let sl3 = build_catalog().remove("SL3R").unwrap();
        let q = space_quadrature(&sl3);
        let dir = rho_direction(&sl3);
        let mut rng = ctx.rng(4);
        let mut draw = |k: usize| -> Vec<Vec<f64>> { (0..k).map(|_| from_simple_coords(&sl3, &[rng.gen_range(0.3..0.9), rng.gen_range(0.3..0.9)])).collect() };
        let calib_h = draw(6);
        let test_h = draw(12);
        let lam80 = SpectralParameter::new(&sl3.roots, dir.clone(), 80.0)?;
        let mut samples = Vec::new();
        for h in &calib_h {
            samples.push((phi_noncompact(&sl3, &lam80, h, &q)?.value, dkv_main_term(&sl3, &dir, 80.0, h, eps, 1.0)?));
        }
        let fitted = calibrate_constant(&samples);
        let closed = closed_form_constant(&sl3).unwrap();
        let ladder = [20.0, 40.0, 80.0, 160.0];
        let (mut e_fit, mut e_closed) = (Vec::new(), Vec::new());
        for &t in &ladder {
            let lam = SpectralParameter::new(&sl3.roots, dir.clone(), t)?;
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for h in &test_h {
                let phi = phi_noncompact(&sl3, &lam, h, &q)?.value;
                let ea = relative_error(phi, &dkv_terms(&sl3, &dir, t, h, eps, fitted)?);
                let eb = relative_error(phi, &dkv_terms(&sl3, &dir, t, h, eps, closed)?);
                rows.push(vec!["SL3R".into(), q_of(t), format!("{:.6} {:.6}", h[0], h[1]), format!("{:.12e}", phi.re), String::new(), format!("{ea:.6e}")]);
                a.push(ea);
                b.push(eb);
            }
            e_fit.push(rms(&a));
            e_closed.push(rms(&b));
        }
        let (_, ratios) = decay_profile(&ladder, &e_fit);
        let (lo, hi) = (
            ctx.tol("c4.halving_center") - ctx.tol("c4.halving_halfwidth"),
            ctx.tol("c4.halving_center") + ctx.tol("c4.halving_halfwidth"),
        );
        let worst = ratios.iter().map(|r| (r - ctx.tol("c4.halving_center")).abs()).fold(0.0, f64::max);
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ");
        out.push(
            CheckResult::within(
                "sl3r_halving_window",
                4,
                worst,
                ctx.tol("c4.halving_halfwidth"),
                format!("calibrated C = {fitted:.6}; error ratios per doubling [{}] against [{lo}, {hi}]", fmt(&ratios)),
            )
            .deviation(),
        );
        let (slope, closed_ratios) = decay_profile(&ladder, &e_closed);
        out.push(CheckResult::within(
            "sl3r_error_decay",
            4,
            (slope + 1.0).abs(),
            ctx.tol("c4.decay_slope"),
            format!("closed-form C: RMS errors [{}], ratios [{}], slope {slope:.3}", fmt(&e_closed), fmt(&closed_ratios)),
        ));
        out.push(CheckResult::within(
            "sl3r_calibration",
            4,
            (fitted / closed - 1.0).abs(),
            ctx.tol("c4.sl3r_constant"),
            format!("calibrated {fitted:.6} vs closed form {closed:.6}"),
        ));
    }
    out.tables.push(("asymptotics.csv".into(), csv_table(&["space", "t", "H", "phi_re", "model_re", "rel_err"], &rows)?));
    Ok(out)
}

fn compact_envelope(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(5);
    let mut rows = Vec::new();
    for sp in spaces(ctx, &["S2", "SU2group", "SU3group"]) {
        let mu = lattice_direction(&sp);
        let npts = if sp.r == 1 { 41 } else { 13 };
        let paths = |t: f64, rad: f64| -> Vec<Vec<f64>> {
            wall_crossing_path(&sp, t, rad, npts).into_iter().filter(|h| ball_gauge(&sp, h) <= rad + 1e-12).collect()
        };
        let rep = envelope_scan_compact(&sp, &mu, &ctx.t_ladder, &paths, DEFAULT_BALL_RADIUS)?;
        let per_t: Vec<String> = rep.per_t_max.iter().map(|(t, m)| format!("{t}: {m:.4}")).collect();
        out.push(CheckResult::within(
            format!("drift.{}", sp.id),
            5,
            rep.max_drift,
            ctx.tol("c5.drift"),
            format!("ball radius {}, per-t max ratio {{{}}}", rep.radius, per_t.join(", ")),
        ));
        rows.extend(envelope_rows(&sp.id, &rep));
    }
    out.tables.push(("compact_envelope.csv".into(), csv_table(&["space", "t", "H", "ratio"], &rows)?));
    Ok(out)
}

/// Far-field probe radii for the kernel amplitude fit.
pub const FAR_FIELD_RADII: [f64; 2] = [0.4, 0.7];

fn kernel_envelope(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(6);
    let cat = build_catalog();
    let h2 = &cat["H2"];
    let bump = build_bump(BumpProfile::default())?;
    let lt = [SQRT_2];
    let ts = &ctx.t_ladder;
    let mut k0 = Vec::new();
    let mut amps = vec![Vec::new(); FAR_FIELD_RADII.len()];
    let mut tables = Vec::new();
    let mut rt: f64 = 0.0;
    for &t in ts {
        let (k, tb) = invert_transform(&bump, h2, &lt, t, &radial_grid(t, 1.05 * kernel_support(&bump), 6.0))?;
        k0.push(k.eval(0.0));
        for (a, r0) in amps.iter_mut().zip(FAR_FIELD_RADII) {
            a.push(local_amplitude(&k, r0) / t);
        }
        rt = rt.max(k.round_trip_error(&bump, &[-1.0, -0.5, 0.5, 1.0]));
        out.tables.push((format!("kernel_t{t}.csv"), tb.to_csv()));
        tables.push(tb);
    }
    let (s0, _) = loglog_fit(ts, &k0);
    out.push(slope_check("k0_slope", 6, s0, 1.0, ctx.tol("c6.k0_slope")));
    for (a, r0) in amps.iter().zip(FAR_FIELD_RADII) {
        let x: Vec<f64> = ts.iter().map(|t| t * r0).collect();
        let (s, _) = loglog_fit(&x, a);
        out.push(slope_check(format!("far_field_slope.r{r0}"), 6, s, -0.5, ctx.tol("c6.far_slope")));
    }
    let rep = kernel_envelope_check(h2, &tables);
    let small: f64 = rep.grid.iter().zip(&rep.ratios).filter(|((t, r), _)| r[0] < 1.0 / t).map(|(_, q)| *q).fold(0.0, f64::max);
    let per_t: Vec<String> = rep.per_t_max.iter().map(|(t, m)| format!("{t}: {m:.4}")).collect();
    out.push(CheckResult::within(
        "envelope_drift",
        6,
        rep.max_drift,
        ctx.tol("c6.drift"),
        format!("per-t max ratio {{{}}}; max ratio on r < 1/t {small:.4}", per_t.join(", ")),
    ));
    out.push(CheckResult::within("round_trip", 6, rt, ctx.tol("c6.round_trip"), format!("max relative round-trip error {rt:.3e}")));
    Ok(out)
}

/// Pieces used in the `m`-slope fits: `m >= 1` with the cell inside a quarter of the kernel support.
pub fn dyadic_fit_range(t: f64, support: f64) -> Vec<i64> {
    (1..).take_while(|&m| ((m + 1) as f64).exp() / t <= support / 4.0).collect()
}

fn dyadic_scalings(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(7);
    let cat = build_catalog();
    let h2 = &cat["H2"];
    let bump = build_bump(BumpProfile::default())?;
    let lt = [SQRT_2];
    let support = kernel_support(&bump);
    let kink = delta_kink(2, 1);
    let p_kink = 1.0 / to_f64(kink);
    let two_delta = 2.0 * to_f64(delta(kink, 2, 1)?);
    let mut ladder = ctx.t_ladder.clone();
    if !ladder.contains(&80.0) {
        ladder.push(80.0);
        ladder.sort_by(f64::total_cmp);
    }
    let mut sums = Vec::new();
    let mut rows = Vec::new();
    for &t in &ladder {
        let (k, tb) = invert_transform(&bump, h2, &lt, t, &radial_grid(t, 1.05 * support, 6.0))?;
        let pieces: Vec<DyadicPiece> = (0..=dyadic_count(t, support)).map(|m| dyadic_truncate(&k, &tb, m)).collect();
        for p in &pieces {
            rows.push(vec![q_of(t), p.m.to_string(), format!("{:.12e}", p.sup_norm), format!("{:.12e}", p.transform_sup)]);
        }
        if t == 80.0 {
            let ms = dyadic_fit_range(t, support);
            let x: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
            let sup: Vec<f64> = ms.iter().map(|&m| pieces[m as usize].sup_norm.ln()).collect();
            let ts: Vec<f64> = ms.iter().map(|&m| pieces[m as usize].transform_sup.ln()).collect();
            let (s_sup, _) = fit_line(&x, &sup);
            let (s_ts, _) = fit_line(&x, &ts);
            out.push(slope_check("sup_norm_m_slope", 7, s_sup, -0.5, ctx.tol("c7.sup_slope")));
            out.push(slope_check("transform_sup_m_slope", 7, s_ts, 1.0, ctx.tol("c7.transform_slope")));
        }
        if ctx.t_ladder.contains(&t) {
            sums.push(interpolated_sum(&pieces, p_kink) / t.powf(two_delta));
        }
    }
    let ll: Vec<f64> = ctx.t_ladder.iter().map(|t| t.ln()).collect();
    let (s_kink, _) = loglog_fit(&ll, &sums);
    out.push(slope_check("kink_log_power", 7, s_kink, 1.0, ctx.tol("c7.kink_slope")));
    out.tables.push(("dyadic_pieces.csv".into(), csv_table(&["t", "m", "sup_norm", "transform_sup"], &rows)?));
    Ok(out)
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Richardson confirmation: the raw error drops by about four when the step halves.
fn order_two(e_coarse: f64, e_fine: f64) -> bool {
    e_coarse < 1e-7 || (3.0..=5.0).contains(&(e_coarse / e_fine))
}

const HESSIAN_STEP: f64 = 0.02;

fn hessians(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(8);
    let tol = ctx.tol("c8.hessian");
    let wall_tol = ctx.tol("c8.wall");
    let mut rows = Vec::new();
    for sp in spaces(ctx, &["H2", "SL3R"]) {
        let lam = if sp.r == 1 { vec![SQRT_2] } else { rho_direction(&sp) };
        let regular = if sp.r == 1 { vec![0.37] } else { vec![0.31, 0.22] };
        let wall = if sp.r == 1 { vec![0.0] } else { vec![0.0, 0.4] };
        let nb = k_basis(&sp)?.len();
        let (mut worst, mut worst_stated, mut order_ok, mut wall_bad, mut wall_fd) = (0.0f64, 0.0f64, true, 0usize, 0.0f64);
        for (label, a) in [("regular", &regular), ("wall", &wall)] {
            let h = from_simple_coords(&sp, a);
            for w in 0..sp.weyl.order() {
                let exact = hessian_noncompact(&sp, &lam, &h, w)?;
                let stated = hessian_noncompact_stated(&sp, &lam, &h, w)?;
                let f1 = phase_hessian_fd(&sp, &lam, &h, w, HESSIAN_STEP)?;
                let f2 = phase_hessian_fd(&sp, &lam, &h, w, HESSIAN_STEP / 2.0)?;
                let wh = sp.weyl.elements[w].act(&h);
                let basis = k_basis(&sp)?;
                for i in 0..nb {
                    for j in 0..nb {
                        let e = if i == j { exact[i] } else { 0.0 };
                        let rv = richardson(f1[(i, j)], f2[(i, j)]);
                        let scale = e.abs().max(1.0);
                        if label == "regular" {
                            worst = worst.max((rv - e).abs() / scale);
                            order_ok &= order_two((f1[(i, j)] - e).abs(), (f2[(i, j)] - e).abs());
                            if i == j {
                                worst_stated = worst_stated.max((stated[i] - rv).abs() / scale);
                            }
                        }
                        if i == j {
                            rows.push(vec![sp.id.clone(), label.into(), w.to_string(), i.to_string(), format!("{rv:.10e}"), format!("{e:.10e}"), format!("{:.10e}", stated[i])]);
                        }
                    }
                    let on_wall = sp.roots.positive_roots[basis[i].1].eval(&wh).abs() < 1e-12;
                    let vanishes = exact[i].abs() < 1e-12 && stated[i].abs() < 1e-12;
                    if on_wall != vanishes {
                        wall_bad += 1;
                    }
                    if on_wall {
                        wall_fd = wall_fd.max(richardson(f1[(i, i)], f2[(i, i)]).abs());
                    }
                }
            }
        }
        out.push(CheckResult::within(format!("noncompact_fd.{}", sp.id), 8, worst, tol, format!("max entrywise deviation of the Richardson Hessian {worst:.3e}")));
        out.push(CheckResult::flag(format!("noncompact_richardson.{}", sp.id), 8, order_ok, "finite-difference error falls by 3-5x per step halving"));
        out.push(CheckResult::within(
            format!("noncompact_walls.{}", sp.id),
            8,
            wall_fd,
            wall_tol,
            format!("{wall_bad} entries off the predicted wall set; max |finite difference| on walls {wall_fd:.3e}"),
        ));
        if wall_bad > 0 {
            out.push(CheckResult::flag(format!("noncompact_wall_set.{}", sp.id), 8, false, format!("{wall_bad} mismatches")));
        }
        out.push(
            CheckResult::within(format!("noncompact_stated_form.{}", sp.id), 8, worst_stated, tol, format!("stated-form entries vs finite differences: {worst_stated:.3e}"))
                .deviation(),
        );
    }
    if ctx.visits("SU2group") {
        let su2 = build_catalog().remove("SU2group").unwrap();
        let mu = lattice_direction(&su2);
        let (mut worst, mut order_ok, mut wall_fd) = (0.0f64, true, 0.0f64);
        // h stays in the ball |alpha(h)| < alpha(h_1) around the origin
        for (h1, h) in [(1.1, 0.5), (1.4, 0.3), (0.9, -0.4), (2.0, 1.2)] {
            for w in 0..2 {
                let exact = match hessian_compact(&su2, &mu, h1, h, w) {
                    Ok(e) => e,
                    Err(_) => continue,
                };
                let f1 = compact_hessian_fd(&su2, &mu, h1, h, w, HESSIAN_STEP)?;
                let f2 = compact_hessian_fd(&su2, &mu, h1, h, w, HESSIAN_STEP / 2.0)?;
                for i in 0..exact.len() {
                    let rv = richardson(f1[i], f2[i]);
                    worst = worst.max((rv - exact[i]).abs() / exact[i].abs().max(1.0));
                    order_ok &= order_two((f1[i] - exact[i]).abs(), (f2[i] - exact[i]).abs());
                    rows.push(vec!["SU2group".into(), format!("{h1} {h}"), w.to_string(), i.to_string(), format!("{rv:.10e}"), format!("{:.10e}", exact[i]), String::new()]);
                }
            }
        }
        let mut wall_bad = 0;
        for h1 in [0.6, 1.3, 2.1] {
            let h = 0.0;
            for w in 0..2 {
                let exact = hessian_compact(&su2, &mu, h1, h, w)?;
                let f1 = compact_hessian_fd(&su2, &mu, h1, h, w, HESSIAN_STEP)?;
                let f2 = compact_hessian_fd(&su2, &mu, h1, h, w, HESSIAN_STEP / 2.0)?;
                wall_bad += exact.iter().filter(|e| **e != 0.0).count();
                for i in 0..exact.len() {
                    wall_fd = wall_fd.max(richardson(f1[i], f2[i]).abs());
                }
            }
        }
        out.push(CheckResult::within("compact_fd.SU2group", 8, worst, tol, format!("max entrywise deviation {worst:.3e}")));
        out.push(CheckResult::flag("compact_richardson.SU2group", 8, order_ok, "finite-difference error falls by 3-5x per step halving"));
        out.push(CheckResult::within(
            "compact_walls.SU2group",
            8,
            wall_fd + wall_bad as f64,
            wall_tol,
            format!("{wall_bad} nonzero predicted entries on walls; max |finite difference| {wall_fd:.3e}"),
        ));
    }
    out.tables.push(("hessians.csv".into(), csv_table(&["space", "point", "w", "entry", "richardson", "exact", "stated"], &rows)?));
    Ok(out)
}

/// Quadrature for noncompact evaluations; rank-one integrands far from the origin need many more nodes.
pub fn space_quadrature(space: &SpaceDescriptor) -> QuadratureSpec {
    if space.r == 1 {
        QuadratureSpec { max_points: 1 << 16, ..QuadratureSpec::default() }
    } else {
        QuadratureSpec::default()
    }
}

/// Quadrature for compact `L^p` norms of zonal functions up to `t = 160`; the `L^2` identity needs the tighter tolerance.
pub fn zonal_quadrature(tol: f64) -> QuadratureSpec {
    QuadratureSpec { points_per_dim: 4096, tol, ..QuadratureSpec::default() }
}

fn beams(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(9);
    let ts = &ctx.t_ladder;
    let (q2, qp) = (zonal_quadrature(1e-10), zonal_quadrature(1e-5));
    let lp_tol = ctx.tol("c9.lp_slope");
    let mut rows = Vec::new();
    for sp in spaces(ctx, &["S2", "SU2group"]) {
        let (n, r) = (sp.n as i64, sp.r as i64);
        let nr = (n - r) as f64;
        let mu = lattice_direction(&sp);
        let l2 = beam_l2_lower(&sp, &mu, ts)?;
        out.push(slope_check(format!("beam_l2.{}", sp.id), 9, l2.slope, l2.expected, ctx.tol("c9.l2_slope")));
        let kink = delta_kink(n, r);
        let mut ps: Vec<Q> = vec![Q::new(1, 2), Q::new(1, 4), kink, Q::new(1, 8), Q::new(1, 64)];
        ps.sort();
        ps.dedup();
        for &s in ps.iter().rev() {
            let p = 1.0 / to_f64(s);
            let mut y = Vec::new();
            for &t in ts {
                let b = BeamFunction::new(&sp, &mu, t)?;
                y.push(t.powf(nr / 4.0) * beam_lp_norm(&sp, &b, p)?);
            }
            let (slope, _) = loglog_fit(ts, &y);
            let l1 = to_f64(vertex_value(&sp, &v1(sp.r), s)?);
            rows.push(vec![sp.id.clone(), "beam".into(), fmt_num(p), format!("{slope:.6}"), format!("{l1}")]);
            out.push(slope_check(format!("beam_lp_literal.{}.p{p}", sp.id), 9, slope, l1, lp_tol).deviation());
            out.push(slope_check(format!("beam_lp.{}.p{p}", sp.id), 9, slope, l1 / 2.0, lp_tol));
        }
        let mut schur: f64 = 0.0;
        let mut norms = Vec::new();
        for &t in ts {
            let m = compact_weight(&sp, &mu, t)?;
            let f = |h: &[f64]| phi_compact(&sp, &m, h).map(|e| e.value.norm()).unwrap_or(f64::NAN);
            let two = lp_norm(&sp, &f, 2.0, &q2, 0.0)?;
            let d = spherical_rep_dimension(&sp, &m.scaled())? as f64;
            schur = schur.max((two * d.sqrt() - 1.0).abs());
            norms.push((two, m));
        }
        out.push(CheckResult::within(format!("schur.{}", sp.id), 9, schur, ctx.tol("c9.schur"), format!("max |‖phi‖_2 d^(1/2) - 1| = {schur:.3e}")));
        for s in [Q::new(1, 8), Q::new(1, 64)] {
            if s >= kink {
                continue;
            }
            let p = 1.0 / to_f64(s);
            let mut y = Vec::new();
            for (two, m) in &norms {
                let f = |h: &[f64]| phi_compact(&sp, m, h).map(|e| e.value.norm()).unwrap_or(f64::NAN);
                y.push(lp_norm(&sp, &f, p, &qp, 0.0)? / two);
            }
            let (slope, _) = loglog_fit(ts, &y);
            let l0 = to_f64(vertex_value(&sp, &v0(sp.r), s)?);
            rows.push(vec![sp.id.clone(), "zonal".into(), fmt_num(p), format!("{:.6}", slope + nr / 2.0), format!("{l0}")]);
            out.push(slope_check(format!("zonal_lp_literal.{}.p{p}", sp.id), 9, slope + nr / 2.0, l0, lp_tol).deviation());
            out.push(slope_check(format!("zonal_lp.{}.p{p}", sp.id), 9, slope, l0 / 2.0, lp_tol));
        }
    }
    out.tables.push(("beams.csv".into(), csv_table(&["space", "kind", "p", "slope_with_prefactor", "L_vertex"], &rows)?));
    Ok(out)
}

/// Cutoff radius, band half-width and neighbourhood used for the S2 projector.
pub const PROJECTOR_CUTOFF: f64 = 0.5;
pub const PROJECTOR_BAND: usize = 80;
pub const PROJECTOR_NEAR: usize = 5;

fn projector(ctx: &CriterionContext) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(10);
    if !ctx.visits("S2") {
        return Ok(out);
    }
    let s2 = build_catalog().remove("S2").unwrap();
    let thetas: Vec<f64> = (0..=400).map(|i| std::f64::consts::PI * i as f64 / 400.0).collect();
    let (mut band, mut negative) = (0.0f64, 0usize);
    let (mut pole, mut ratio) = (Vec::new(), Vec::new());
    for &t in &ctx.t_ladder {
        let proj = compact_projector(&s2, t.round() as usize, PROJECTOR_CUTOFF, PROJECTOR_BAND, &thetas)?;
        band = band.max(proj.outside_band_fraction);
        negative += proj.coefficients.iter().filter(|c| **c < 0.0).count();
        pole.push(proj.table.values[0]);
        ratio.push(projector_pointwise_ratio(&proj, PROJECTOR_NEAR));
        out.tables.push((format!("projector_t{t}.csv"), proj.table.to_csv()));
    }
    out.push(CheckResult::within("band_localization", 10, band, ctx.tol("c10.band"), format!("max coefficient mass outside |l - t| <= {PROJECTOR_BAND}: {band:.3e}")));
    let (slope, _) = loglog_fit(&ctx.t_ladder, &pole);
    out.push(slope_check("pole_slope", 10, slope, 1.0, ctx.tol("c10.pole_slope")));
    let (lo, hi) = ratio.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
    let rs: Vec<String> = ratio.iter().map(|r| format!("{r:.4}")).collect();
    out.push(CheckResult::within(
        "pointwise_bound",
        10,
        hi / lo,
        ctx.tol("c10.pointwise_spread"),
        format!("sup |K| / (t max_near |P_nu|) per t [{}]", rs.join(", ")),
    ));
    out.push(CheckResult::flag("nonnegative_coefficients", 10, negative == 0, format!("{negative} negative Legendre coefficients")));
    Ok(out)
}
