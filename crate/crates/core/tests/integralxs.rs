use nonasym::integralxs::*;
use nonasym::scattering::CoulombInteraction;
use nonasym::specfun::u_shifted;
use nonasym::Sign;
use std::f64::consts::PI;

const SIGNS: [Sign; 2] = [Sign::Attract, Sign::Repel];

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

#[test]
fn universal_totals_match_reference_values() {
    // 30-digit references from an arbitrary-precision quadrature
    let a = universal_total(1.0, Sign::Attract).unwrap();
    let r = universal_total(1.0, Sign::Repel).unwrap();
    assert!(rel(a, 0.841_142_269_649_793_02) < 1e-10, "{a}");
    assert!(rel(r, 84.066_989_018_136_853) < 1e-10, "{r}");
}

#[test]
fn universal_totals_stable_under_cutoff_doubling() {
    let cfg = IntegralConfig::default();
    for xi in [0.25, 0.5, 1.0, 2.0, 3.0] {
        for sign in SIGNS {
            let zc = cfg.z_cut(xi);
            let (i1, _) = universal_total_cut(xi, sign, zc, &cfg).unwrap();
            let (i2, _) = universal_total_cut(xi, sign, 2.0 * zc, &cfg).unwrap();
            assert!(i1.is_finite() && i1 > 0.0);
            assert!(rel(i2, i1) <= 1e-8, "xi {xi} {sign}: {i1} vs {i2}");
        }
    }
}

#[test]
fn attraction_and_repulsion_totals_differ() {
    for xi in [0.5, 1.0, 2.0, 3.0] {
        let t = universal_totals(xi, &IntegralConfig::default()).unwrap();
        assert!((t.i_repel - t.i_attract).abs() >= 0.05 * t.i_attract.min(t.i_repel), "{t:?}");
    }
}

#[test]
fn totals_meet_as_xi_vanishes() {
    // common limit π, split linear in ξ
    let mut slopes = vec![];
    for xi in [0.001, 0.002, 0.004] {
        let a = universal_total(xi, Sign::Attract).unwrap();
        let r = universal_total(xi, Sign::Repel).unwrap();
        assert!(((a + r) / 2.0 - PI).abs() < 20.0 * xi * xi + 1e-6, "xi {xi}: {a} {r}");
        slopes.push((r - a) / a / xi);
    }
    assert!((slopes[0] - slopes[2]).abs() < 0.05 * slopes[0], "{slopes:?}");
    // the split closes: ≤ 5e-3 relative at ξ = 1e-3
    assert!(slopes[0] * 1e-3 < 5e-3);
}

#[test]
fn total_is_linear_in_r() {
    let c = CoulombInteraction::new(1.0, Sign::Attract, 2.0).unwrap();
    let a = sigma_total(&c, 1e4).unwrap();
    let b = sigma_total(&c, 2e4).unwrap();
    assert_eq!(b.value, 2.0 * a.value);
    assert_eq!(a.r_used, 1e4);
}

#[test]
fn finite_total_differs_by_the_dropped_remainder() {
    let kr = 1e4;
    for xi in [0.5, 1.0, 2.0] {
        for sign in SIGNS {
            let c = CoulombInteraction::new(xi, sign, 1.0).unwrap();
            let tot = sigma_total(&c, kr).unwrap().value;
            let fin = sigma_total_finite(&c, kr).unwrap().value;
            let rem = PI * xi * xi;
            assert!(((tot - fin) / rem - 1.0).abs() <= 10.0 / kr, "xi {xi} {sign}");
            if sign == Sign::Attract {
                assert!((tot - fin).abs() <= rem);
            }
        }
    }
}

#[test]
fn transport_paths_agree() {
    for xi in [0.5, 1.0, 2.0] {
        for sign in SIGNS {
            let d = transport_decomposition(xi, sign).unwrap();
            for kr in [1e3, 1e4, 1e5] {
                let direct = sigma_tr_prime(xi, sign, kr).unwrap();
                let reg = d.sigma_tr_prime(kr);
                assert!(rel(reg, direct) <= 10.0 / kr, "xi {xi} {sign} kr {kr}: {reg} vs {direct}");
                if kr == 1e4 {
                    assert!(rel(reg, direct) <= 5.0 / kr);
                }
            }
        }
    }
}

#[test]
fn transport_grows_by_ln10_per_decade() {
    for method in ["direct", "regularized"] {
        for sign in SIGNS {
            let c = CoulombInteraction::new(1.0, sign, 1.0).unwrap();
            let a = sigma_transport(&c, 1e5, method).unwrap().value;
            let b = sigma_transport(&c, 1e6, method).unwrap().value;
            let g = (b - a) / (2.0 * PI);
            assert!(rel(g, 10f64.ln()) <= 0.05, "{method} {sign}: {g}");
        }
    }
}

#[test]
fn auto_transport_picks_by_kr() {
    let c = CoulombInteraction::new(1.0, Sign::Attract, 1.0).unwrap();
    assert_eq!(sigma_transport(&c, 100.0, "auto").unwrap().method, TransportKind::Direct);
    assert_eq!(sigma_transport(&c, 1e4, "auto").unwrap().method, TransportKind::Regularized);
    assert!(sigma_transport(&c, 1e4, "bogus").is_err());
    let mut names = transport_registry().names();
    names.sort();
    assert_eq!(names, vec!["auto", "direct", "regularized"]);
}

#[test]
fn transport_below_total() {
    for xi in [0.5, 1.0, 2.0, 3.0] {
        for sign in SIGNS {
            let c = CoulombInteraction::new(xi, sign, 1.0).unwrap();
            for kr in [1e3, 1e5, 1e7] {
                let tr = sigma_transport(&c, kr, "auto").unwrap().value;
                let tot = sigma_total(&c, kr).unwrap().value;
                assert!(tr < tot, "xi {xi} {sign} kr {kr}");
            }
        }
    }
}

#[test]
fn transport_vanishes_like_xi_squared() {
    let per = |xi: f64| {
        let c = CoulombInteraction::new(xi, Sign::Attract, 1.0).unwrap();
        sigma_transport(&c, 1e4, "regularized").unwrap().value / (xi * xi)
    };
    let (a, b) = (per(1e-3), per(2e-3));
    assert!(rel(a, b) < 0.01, "{a} {b}");
}

#[test]
fn transport_prime_is_consistent_and_monotone() {
    let (xi, k) = (1.5, 3.0);
    let c = CoulombInteraction::new(xi, Sign::Repel, k).unwrap();
    let r = 40.0;
    let direct = sigma_transport(&c, r, "direct").unwrap().value;
    let p = sigma_tr_prime(xi, Sign::Repel, k * r).unwrap();
    assert!(rel(2.0 * PI * xi * xi / (k * k) * p, direct) < 1e-15);
    let mut prev = 0.0;
    for kr in [0.1, 1.0, 10.0, 100.0, 1e3] {
        let v = sigma_tr_prime(xi, Sign::Attract, kr).unwrap();
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn transport_prime_matches_brute_force_grid() {
    let (xi, kr) = (1.0f64, 100.0f64);
    let gl = gauss_legendre(10);
    let f = |z: f64| (-PI * xi).exp() * u_shifted(xi, Sign::Attract, z).unwrap().norm_sqr() * z;
    let panel = |a: f64, b: f64| {
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        gl.iter().map(|(x, w)| w * f(m + h * x)).sum::<f64>() * h
    };
    let mut sum = 0.0;
    // geometric panels down to 1e-12, then width 0.05
    let mut a: f64 = 1e-12;
    while a < 1.0 {
        let b = (2.0 * a).min(1.0);
        sum += panel(a, b);
        a = b;
    }
    let n = ((2.0 * kr - 1.0) / 0.05).round() as usize;
    for i in 0..n {
        let lo = 1.0 + i as f64 * 0.05;
        sum += panel(lo, lo + 0.05);
    }
    let v = sigma_tr_prime(xi, Sign::Attract, kr).unwrap();
    assert!(rel(v, sum) < 1e-6, "{v} vs {sum}");
}

#[test]
fn regularized_tail_integrand_decays_as_inverse_square() {
    for xi in [0.5, 1.0, 2.0] {
        for sign in SIGNS {
            let lead = (sign.s() * PI * xi).exp();
            let c: Vec<f64> = [100.0, 1e3, 1e4]
                .iter()
                .map(|&z: &f64| {
                    let u = u_shifted(xi, sign, z).unwrap().norm_sqr();
                    ((u - lead / (z * z)) * z).abs() * z * z
                })
                .collect();
            // C stable across two decades
            assert!(c[1] / c[0] < 1.2 && c[0] / c[1] < 1.2 && rel(c[2], c[1]) < 0.05, "xi {xi} {sign}: {c:?}");
            assert!(rel(c[2], 4.0 * xi * lead) < 0.05);
        }
    }
    let d = transport_decomposition(1.0, Sign::Attract).unwrap();
    assert!(rel(d.log_coeff, PI.exp()) < 1e-15);
    assert!(d.head.is_finite() && d.tail_reg.is_finite());
}

#[test]
fn transport_curves_depend_on_sign() {
    for xi in [0.5, 1.0, 2.0] {
        let a = transport_decomposition(xi, Sign::Attract).unwrap().regular_part();
        let r = transport_decomposition(xi, Sign::Repel).unwrap().regular_part();
        assert!((a - r).abs() > 0.1, "xi {xi}: {a} {r}");
    }
}

#[test]
fn cross_sections_nonnegative_on_grid() {
    for xi in [0.05, 0.5, 1.0, 2.0, 3.0] {
        for sign in SIGNS {
            let c = CoulombInteraction::new(xi, sign, 1.0).unwrap();
            for kr in [10.0, 1e3, 1e5, 1e8] {
                let tot = sigma_total(&c, kr).unwrap().value;
                let tr = sigma_transport(&c, kr, "auto").unwrap().value;
                assert!(tot >= 0.0 && tr >= 0.0 && tot.is_finite() && tr.is_finite(), "xi {xi} {sign} kr {kr}");
            }
        }
    }
}

#[test]
fn xi_limit_enforced() {
    assert!(universal_total(5.5, Sign::Attract).is_err());
    assert!(transport_decomposition(0.0, Sign::Attract).is_err());
    assert!(sigma_tr_prime(1.0, Sign::Attract, -1.0).is_err());
}

#[test]
fn log_transport_prime_matches_plain() {
    for (xi, sign, kr) in [(1.0, Sign::Attract, 8.0), (5.0, Sign::Repel, 1.7), (10.0, Sign::Repel, 0.83)] {
        let a = ln_sigma_tr_prime(xi, sign, kr).unwrap();
        let b = sigma_tr_prime(xi, sign, kr).unwrap().ln();
        assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
    }
    // references from an arbitrary-precision quadrature
    assert!(rel(sigma_tr_prime(10.0, Sign::Repel, 0.83).unwrap(), 5.153_029_409_362_883_8e22) < 1e-10);
    assert!(rel(sigma_tr_prime(40.0, Sign::Attract, 8.3 / 40.0).unwrap(), 3.245_409_435_297_424_3e-4) < 1e-10);
    // far past e^{2πξ} overflow
    assert!(ln_sigma_tr_prime(150.0, Sign::Repel, 8.3 / 150.0).unwrap() > 900.0);
}
