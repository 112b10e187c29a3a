mod common;

use common::{cycle, Tits};
use racgdiv::explorer::{
    ball, div_geodesic, div_pair, gersten_divergence, lower_divergence, rho, sphere_sizes,
    AvoidStatus, RegionMode, SearchCaps,
};
use racgdiv::{build_gamma, build_omega, DefiningGraph, GeodesicSpec, NormalForm};

fn periodic(g: &DefiningGraph, w: &str) -> GeodesicSpec {
    GeodesicSpec::periodic(g, &g.parse_word(w).unwrap()).unwrap()
}

/// Letters of the t = 2 geodesic on its positive side, built directly from
/// the blocks `a_m b_m (a_m b_2)^i`.
fn gamma2_forward(m: u32, n: usize) -> Vec<String> {
    let (a, b, b2) = (format!("a_{m}"), format!("b_{m}"), "b_2".to_string());
    let mut out = Vec::new();
    let mut i = 1;
    while out.len() < n {
        out.extend([a.clone(), b.clone()]);
        for _ in 0..i {
            out.extend([a.clone(), b2.clone()]);
        }
        i += 1;
    }
    out.truncate(n);
    out
}

fn found(v: u32) -> AvoidStatus {
    AvoidStatus::Found(v)
}

#[test]
fn ball_sizes_match_reference() {
    for m in 1..=3 {
        let g = build_gamma(m).unwrap();
        let tits = Tits::new(&g);
        let reference = tits.ball(&tits.identity(), 4);
        let sizes = sphere_sizes(&g, 4, 1_000_000).unwrap();
        for k in 0..=4u32 {
            let count = reference.values().filter(|&&d| d == k).count() as u64;
            assert_eq!(sizes[k as usize], count, "Γ_{m} sphere {k}");
        }
    }
    let g1 = build_gamma(1).unwrap();
    let e = NormalForm::identity(&g1);
    assert_eq!(ball(&g1, &e, 1, 100).unwrap().len(), 5);
    assert_eq!(ball(&g1, &e, 2, 100).unwrap().len(), 13);
}

#[test]
fn flat_and_alpha_values() {
    let g1 = build_gamma(1).unwrap();
    let flat = periodic(&g1, "a_0 b_0");
    for r in 1..=4 {
        assert_eq!(
            div_geodesic(&g1, &flat, r, &SearchCaps::for_radius(r))
                .unwrap()
                .status,
            found(4 * r)
        );
    }
    let g2 = build_gamma(2).unwrap();
    let alpha = periodic(&g2, "a_2 b_2");
    let tits = Tits::new(&g2);
    let fw = cycle(&["a_2", "b_2"], 8);
    let bw = cycle(&["b_2", "a_2"], 8);
    for (r, expected) in [(1, 6), (2, 16), (3, 30)] {
        let got = div_geodesic(&g2, &alpha, r, &SearchCaps::for_radius(r)).unwrap();
        assert_eq!(got.status, found(expected));
        assert!(got.stabilized);
        assert_eq!(tits.rho(&fw, &bw, r, 0, r + 2), Some(expected));
    }
}

#[test]
fn gamma_values_match_reference() {
    let g3 = build_gamma(3).unwrap();
    let gamma = GeodesicSpec::gamma_tm(&g3, 3, "2".parse().unwrap()).unwrap();
    let tits = Tits::new(&g3);
    let fw_owned = gamma2_forward(3, 20);
    let fw: Vec<&str> = fw_owned.iter().map(String::as_str).collect();
    let bw = cycle(&["b_2", "a_3"], 20);
    for (r, expected) in [(2, 16), (3, 32)] {
        assert_eq!(
            div_geodesic(&g3, &gamma, r, &SearchCaps::for_radius(r))
                .unwrap()
                .status,
            found(expected)
        );
        assert_eq!(tits.rho(&fw, &bw, r, 0, r + 2), Some(expected));
    }
    // every centre of the lower-divergence window at r = 2
    for t in -10..=10 {
        let ours = rho(&g3, &gamma, 2, t, &SearchCaps::for_radius(2))
            .unwrap()
            .status;
        assert_eq!(ours.value(), tits.rho(&fw, &bw, 2, t, 4), "t = {t}");
    }
    let low = lower_divergence(&g3, &gamma, 2, -10..=10, &SearchCaps::for_radius(2)).unwrap();
    assert_eq!(low.status, found(16));
    assert_eq!(low.min_t, Some(-10));
}

#[test]
fn periodic_lower_divergence_is_constant() {
    let g2 = build_gamma(2).unwrap();
    let alpha = periodic(&g2, "a_2 b_2");
    let caps = SearchCaps::for_radius(2);
    let at0 = rho(&g2, &alpha, 2, 0, &caps).unwrap().status;
    let low = lower_divergence(&g2, &alpha, 2, -4..=4, &caps).unwrap();
    assert_eq!(low.status, at0);
    let single = lower_divergence(&g2, &alpha, 2, 0..=0, &caps).unwrap();
    assert_eq!(
        single.status,
        div_geodesic(&g2, &alpha, 2, &caps).unwrap().status
    );
}

#[test]
fn gersten_values() {
    let g1 = build_gamma(1).unwrap();
    let s = gersten_divergence(&g1, 1, &SearchCaps::for_radius(1)).unwrap();
    assert_eq!(s.sample.status, found(4));
    assert_eq!(s.sphere_size, 4);
    assert!(s.censored.is_empty());
    assert_eq!(Tits::new(&g1).gersten(1, 6), 4);

    let g2 = build_gamma(2).unwrap();
    let s = gersten_divergence(&g2, 2, &SearchCaps::for_radius(2)).unwrap();
    assert_eq!(s.sample.status, found(16));
    assert_eq!(s.sphere_size, 22);
    assert_eq!(Tits::new(&g2).gersten(2, 5), 16);

    for g in [&g1, &g2] {
        assert_eq!(
            gersten_divergence(g, 0, &SearchCaps::for_radius(0))
                .unwrap()
                .sample
                .status,
            found(0)
        );
    }
}

#[test]
fn capped_region_agrees_with_reduced() {
    let g2 = build_gamma(2).unwrap();
    let alpha = periodic(&g2, "a_2 b_2");
    for r in 1..=3 {
        let reduced = div_geodesic(&g2, &alpha, r, &SearchCaps::for_radius(r)).unwrap();
        let capped = div_geodesic(
            &g2,
            &alpha,
            r,
            &SearchCaps::for_radius(r).with_region(RegionMode::Capped),
        )
        .unwrap();
        assert_eq!(reduced.status, capped.status, "r = {r}");
        assert!(capped.nodes_explored >= reduced.nodes_explored);
    }
    let g3 = build_gamma(3).unwrap();
    let gamma = GeodesicSpec::gamma_tm(&g3, 3, "3/2".parse().unwrap()).unwrap();
    for r in 1..=2 {
        let caps = SearchCaps::for_radius(r);
        let reduced = div_geodesic(&g3, &gamma, r, &caps).unwrap();
        let capped = div_geodesic(&g3, &gamma, r, &caps.with_region(RegionMode::Capped)).unwrap();
        assert_eq!(reduced.status, capped.status);
    }
    let g1 = build_gamma(1).unwrap();
    let full = gersten_divergence(
        &g1,
        2,
        &SearchCaps::for_radius(2).with_region(RegionMode::Capped),
    )
    .unwrap();
    let cut = gersten_divergence(&g1, 2, &SearchCaps::for_radius(2)).unwrap();
    assert_eq!(full.sample.status, cut.sample.status);
}

#[test]
fn embedded_alpha_matches_its_own_group() {
    let o3 = build_omega(3).unwrap();
    let g2 = build_gamma(2).unwrap();
    let inner = periodic(&o3, "G2.a_2 G2.b_2");
    let alpha = periodic(&g2, "a_2 b_2");
    for r in 1..=3 {
        let caps = SearchCaps::for_radius(r);
        assert_eq!(
            div_geodesic(&o3, &inner, r, &caps).unwrap().status,
            div_geodesic(&g2, &alpha, r, &caps).unwrap().status
        );
    }
    let tits = Tits::new(&o3);
    let fw = cycle(&["G2.a_2", "G2.b_2"], 6);
    let bw = cycle(&["G2.b_2", "G2.a_2"], 6);
    assert_eq!(tits.rho(&fw, &bw, 2, 0, 4), Some(16));
}

#[test]
fn opposite_support_rays_match_their_line() {
    let g3 = build_gamma(3).unwrap();
    let ty = g3.gen("a_3").unwrap();
    let e = NormalForm::identity(&g3);
    let ray = GeodesicSpec::support_ray(&g3, ty, &e).unwrap();
    let (a0, b0) = (g3.gen("a_0").unwrap(), g3.gen("b_0").unwrap());
    let back = GeodesicSpec::support_ray_with_pair(&g3, ty, (b0, a0), &e).unwrap();
    let line = periodic(&g3, "a_0 b_0");
    for r in 1..=5 {
        let caps = SearchCaps::for_radius(r);
        let pair = div_pair(&g3, &ray, &back, r, &caps).unwrap();
        assert_eq!(
            pair.status,
            div_geodesic(&g3, &line, r, &caps).unwrap().status
        );
        assert_eq!(pair.status, found(4 * r));
    }
}
