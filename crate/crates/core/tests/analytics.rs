use proptest::prelude::*;

use r2c::analytics::{
    faulty_pmf, n_alpha, psi_gossip, r2c_latency_broadcast, r2c_latency_gossip_lattice, rc_latency_broadcast,
    resiliency_exact, sigma_d_squared, PsiSign,
};
use r2c::wireless::{ChannelParams, GridNetwork};

proptest! {
    #[test]
    fn resiliency_falls_with_more_faulty(n in 4usize..200, f in 0usize..199, m in 1usize..200) {
        prop_assume!(f + 1 <= n && m <= n);
        let a = resiliency_exact(n, f, m).unwrap();
        let b = resiliency_exact(n, f + 1, m).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
        prop_assert!(b <= a + 1e-12, "{a} -> {b}");
    }

    #[test]
    fn pmf_is_a_distribution(n in 1usize..300, f in 0usize..300, m in 1usize..300) {
        prop_assume!(f <= n && m <= n);
        let p = faulty_pmf(n, f, m).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(p.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
    }

    #[test]
    fn r2c_latency_monotone_in_n_tilde(side in 2usize..12, a in 0usize..200, b in 0usize..200) {
        let net = GridNetwork::new(side, 10.0).unwrap();
        let n = net.validator_count();
        let (x, y) = (a % n + 1, b % n + 1);
        let (lo, hi) = (x.min(y), x.max(y));
        let ch = ChannelParams::default();
        for p in [net.corner(), net.center()] {
            let g = |m| r2c_latency_gossip_lattice(&net, p, m).unwrap();
            let bc = |m| r2c_latency_broadcast(&ch, &net, p, m, 0.9999).unwrap();
            prop_assert!(g(lo) <= g(hi) && g(lo) >= 0.0);
            prop_assert!(bc(lo) <= bc(hi) && bc(lo) >= 1.0);
        }
    }

    #[test]
    fn broadcast_latency_monotone_in_zeta(z1 in 0.01f64..0.99999, z2 in 0.01f64..0.99999) {
        let net = GridNetwork::new(9, 10.0).unwrap();
        let ch = ChannelParams::default();
        let (lo, hi) = (z1.min(z2), z1.max(z2));
        prop_assert!(rc_latency_broadcast(&ch, &net, lo).unwrap() <= rc_latency_broadcast(&ch, &net, hi).unwrap());
    }

    #[test]
    fn distortion_variance_shrinks_with_more_representatives(m in 1usize..80) {
        let net = GridNetwork::new(9, 10.0).unwrap();
        let psi = psi_gossip(&net, 0, PsiSign::CorrectedMinus).unwrap().value;
        let a = sigma_d_squared(80, m, 1.0, psi).unwrap();
        let b = sigma_d_squared(80, m + 1, 1.0, psi).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn n_alpha_stays_in_range(n in 10usize..500, frac in 0.0f64..0.3, alpha in 0.5f64..0.9999) {
        let f = (n as f64 * frac) as usize;
        let v = n_alpha(n, f, alpha, 0.5).unwrap();
        prop_assert!(v > 0.0 && v.is_finite());
    }
}

#[test]
fn minus_psi_never_exceeds_plus() {
    for side in 2..=11 {
        let net = GridNetwork::new(side, 7.0).unwrap();
        for p in 0..net.node_count() {
            let plus = psi_gossip(&net, p, PsiSign::PaperPlus).unwrap().value;
            let minus = psi_gossip(&net, p, PsiSign::CorrectedMinus).unwrap().value;
            assert!(minus <= plus && minus >= -1e-9);
        }
    }
}
