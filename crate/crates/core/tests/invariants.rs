use proptest::prelude::*;
use sphx_core::asymptotics::{envelope_compact, envelope_noncompact, from_simple_coords};
use sphx_core::exponents::{all_vertices, delta, delta_branches, delta_kink, sigma_w, vertex_max, vertex_value, L_of, Q};
use sphx_core::harness::{CheckResult, RunConfig};
use sphx_core::kernels::{build_bump, dyadic_count, dyadic_weight, h_t, BumpProfile};
use sphx_core::rootsys::{build_catalog, chamber_decompose, product_h2_h2, regularity_gap, space, SpaceDescriptor, SpectralParameter};
use sphx_core::spherical::{compact_weight, phi_compact, phi_noncompact, QuadratureSpec};

const SPACES: [&str; 7] = ["H2", "H3", "SL3R", "S2", "SU2group", "SU3group", "H2xH2"];

fn all_spaces() -> Vec<SpaceDescriptor> {
    SPACES.iter().map(|id| space(id).unwrap()).collect()
}

fn inv_p() -> impl Strategy<Value = Q> {
    (1i64..=60).prop_flat_map(|den| (0..=den / 2).prop_map(move |num| Q::new(num, den)))
}

fn rho_direction(sp: &SpaceDescriptor) -> Vec<f64> {
    let n = sp.roots.rho.iter().map(|x| x * x).sum::<f64>().sqrt();
    sp.roots.rho.iter().map(|x| x / n).collect()
}

fn point(r: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, r)
}

#[test]
fn total_mass_is_twice_n_minus_r() {
    for sp in all_spaces() {
        assert_eq!(sp.total_mass() as usize, 2 * sp.n - 2 * sp.r, "{}", sp.id);
    }
}

#[test]
fn reflections_preserve_root_multiplicities() {
    for sp in all_spaces() {
        let rs = &sp.roots;
        for w in &sp.weyl.elements {
            for b in &rs.positive_roots {
                let (k, _) = rs.find_root(&w.act_functional(&b.coords)).unwrap_or_else(|| panic!("{}: W left the root set", sp.id));
                assert_eq!(rs.positive_roots[k].multiplicity, b.multiplicity, "{}", sp.id);
            }
        }
    }
}

proptest! {
    #[test]
    fn weyl_action_preserves_killing_form(a in point(2), b in point(2), c in point(2), d in point(2)) {
        for sp in all_spaces() {
            let (h1, h2) = if sp.r == 1 { (vec![a[0]], vec![b[0]]) } else if sp.r == 2 { (a.clone(), b.clone()) } else { ([a.clone(), c.clone()].concat(), [b.clone(), d.clone()].concat()) };
            let base = sp.roots.pair_vectors(&h1, &h2);
            for w in &sp.weyl.elements {
                let moved = sp.roots.pair_vectors(&w.act(&h1), &w.act(&h2));
                prop_assert!((moved - base).abs() < 1e-12 * (1.0 + base.abs()), "{}: {moved} vs {base}", sp.id);
            }
        }
    }

    #[test]
    fn chamber_representative_is_weyl_invariant(a in point(2)) {
        for sp in all_spaces().into_iter().filter(|s| s.r <= 2) {
            let h = &a[..sp.r];
            let (_, base) = chamber_decompose(&sp, h);
            prop_assert!(base.dominant_flag);
            for w in &sp.weyl.elements {
                let (_, other) = chamber_decompose(&sp, &w.act(h));
                for (x, y) in other.coords.iter().zip(&base.coords) {
                    prop_assert!((x - y).abs() < 1e-10, "{}: {:?} vs {:?}", sp.id, other.coords, base.coords);
                }
            }
        }
    }

    #[test]
    fn vertex_maximum_is_twice_delta(s in inv_p()) {
        for sp in all_spaces() {
            let d = delta(s, sp.n as i64, sp.r as i64).unwrap();
            prop_assert_eq!(vertex_max(&sp, s).unwrap(), d * 2);
        }
    }

    #[test]
    fn profile_matches_vertex_values(s in inv_p()) {
        for sp in all_spaces() {
            for v in all_vertices(sp.r) {
                let x: Vec<Q> = v.iter().map(|b| Q::from_integer(*b as i64)).collect();
                prop_assert_eq!(L_of(&x, s, &sp).unwrap(), vertex_value(&sp, &v, s).unwrap(), "{} at {:?}", sp.id, v);
            }
        }
    }

    #[test]
    fn delta_is_the_larger_branch(s in inv_p()) {
        for sp in all_spaces() {
            let (n, r) = (sp.n as i64, sp.r as i64);
            let (a, b) = delta_branches(s, n, r);
            prop_assert_eq!(delta(s, n, r).unwrap(), a.max(b));
            let k = delta_kink(n, r);
            let (ka, kb) = delta_branches(k, n, r);
            prop_assert_eq!(ka, kb);
        }
    }

    #[test]
    fn sigma_is_odd_and_identity_value(a in point(2)) {
        for sp in all_spaces().into_iter().filter(|s| s.r <= 2) {
            let h = &a[..sp.r];
            prop_assume!(regularity_gap(&sp.roots, h) > 1e-6);
            let neg: Vec<f64> = h.iter().map(|x| -x).collect();
            for w in 0..sp.weyl.order() {
                prop_assert_eq!(sigma_w(&sp, w, h).unwrap() + sigma_w(&sp, w, &neg).unwrap(), 0);
            }
            let (_, dom) = chamber_decompose(&sp, h);
            prop_assert_eq!(sigma_w(&sp, sp.weyl.identity, &dom.coords).unwrap(), -((sp.n - sp.r) as i64));
        }
    }

    #[test]
    fn dyadic_weights_partition_unity(t in 5.0f64..200.0, r in 0.0f64..4.0) {
        let total: f64 = (0..=dyadic_count(t, 4.0)).map(|m| dyadic_weight(t, m, r)).sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "sum {total}");
        for m in 0..=dyadic_count(t, 4.0) {
            let w = dyadic_weight(t, m, r);
            prop_assert!((-1e-15..=1.0 + 1e-15).contains(&w));
        }
    }

    #[test]
    fn envelopes_lie_in_unit_interval(t in 1.0f64..200.0, a in point(2)) {
        for sp in all_spaces().into_iter().filter(|s| s.r <= 2) {
            let h = &a[..sp.r];
            if sp.is_compact() {
                let h: Vec<f64> = h.iter().map(|x| x / 16.0).collect();
                let e = envelope_compact(&sp, t, &h, 0.5).unwrap();
                prop_assert!(e > 0.0 && e <= 1.0);
            } else {
                let e = envelope_noncompact(&sp, t, h);
                prop_assert!(e > 0.0 && e <= 1.0);
            }
        }
    }

    #[test]
    fn check_pass_implies_within_bound(measured in -1e3f64..1e3, bound in -1e3f64..1e3) {
        let c = CheckResult::within("x", 1, measured, bound, "");
        prop_assert_eq!(c.passed(), measured <= bound);
    }

    #[test]
    fn config_accepts_increasing_ladders(steps in prop::collection::vec(0.1f64..50.0, 1..6), tol in 1e-9f64..1.0) {
        let mut t = 1.0;
        let ladder: Vec<f64> = steps.iter().map(|s| { t += s; t }).collect();
        let mut cfg = RunConfig { t_ladder: ladder.clone(), ..RunConfig::default() };
        cfg.tolerances.insert("c3.drift".into(), tol);
        prop_assert!(cfg.validate().is_ok());
        cfg.tolerances.insert("c3.drift".into(), -tol);
        prop_assert!(cfg.validate().is_err());
        if ladder.len() > 1 {
            let mut rev = ladder;
            rev.reverse();
            let bad = RunConfig { t_ladder: rev, ..RunConfig::default() };
            prop_assert!(bad.validate().is_err());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bump_multiplier_dominates_unit_ball(nu in 0.0f64..1.0, far in 0.0f64..40.0) {
        let bump = build_bump(BumpProfile::default()).unwrap();
        prop_assert!(bump.h(nu) >= 1.0 - 1e-12);
        prop_assert!(bump.h(far) >= 0.0);
    }

    #[test]
    fn h_t_is_weyl_invariant(l in point(2), t in 5.0f64..50.0) {
        let bump = build_bump(BumpProfile::default()).unwrap();
        for sp in ["H2", "SL3R", "H2xH2"].iter().map(|id| space(id).unwrap()) {
            let lam: Vec<f64> = l[..sp.r].iter().map(|x| x * t).collect();
            let dir = rho_direction(&sp);
            let base = h_t(&bump, &sp, &dir, t, &lam);
            prop_assert!(base >= 0.0);
            for w in &sp.weyl.elements {
                let moved = h_t(&bump, &sp, &dir, t, &w.act_functional(&lam));
                prop_assert!((moved - base).abs() <= 1e-12 * (1.0 + base));
            }
        }
    }

    #[test]
    fn compact_phi_is_bounded_by_one(k in 1u32..40, a in point(2)) {
        for sp in ["S2", "SU2group", "SU3group"].iter().map(|id| space(id).unwrap()) {
            let basis = sp.weight_lattice_basis.clone().unwrap();
            let mu: Vec<f64> = (0..sp.r).map(|i| basis.iter().map(|b| b[i]).sum()).collect();
            let w = compact_weight(&sp, &mu, k as f64).unwrap();
            prop_assert!((phi_compact(&sp, &w, &vec![0.0; sp.r]).unwrap().value.re - 1.0).abs() < 1e-12);
            let v = phi_compact(&sp, &w, &a[..sp.r]).unwrap().value;
            prop_assert!(v.norm() <= 1.0 + 1e-9, "{}: {}", sp.id, v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn noncompact_phi_is_weyl_invariant(a in prop::collection::vec(0.1f64..1.0, 2), t in 1.0f64..8.0) {
        let q = QuadratureSpec::default();
        for sp in ["H2", "SL3R"].iter().map(|id| build_catalog().remove(*id).unwrap()) {
            let h = from_simple_coords(&sp, &a[..sp.r]);
            let lam = SpectralParameter::new(&sp.roots, rho_direction(&sp), t).unwrap();
            let base = phi_noncompact(&sp, &lam, &h, &q).unwrap().value;
            for w in &sp.weyl.elements {
                let moved = phi_noncompact(&sp, &lam, &w.act(&h), &q).unwrap().value;
                prop_assert!((moved - base).norm() < 1e-7, "{}: {moved} vs {base}", sp.id);
            }
            let origin = phi_noncompact(&sp, &lam, &vec![0.0; sp.r], &q).unwrap().value;
            prop_assert!((origin - 1.0).norm() < 1e-9);
        }
    }
}

#[test]
fn product_space_is_available() {
    let p = product_h2_h2();
    assert_eq!((p.n, p.r, p.weyl.order()), (4, 2, 4));
    assert!(!p.irreducible());
}
