use genent::ed_oracle::xy_ed_sector;
use genent::operators::*;
use genent::purity::*;
use genent::states::*;
use genent::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn qubit_spec(n: usize) -> SpinChainSpec {
    SpinChainSpec::new(n, Spin::HALF, Boundary::Open).unwrap()
}

fn single_site_expectations(psi: &StateVector, n: usize, spin: Spin) -> Vec<f64> {
    let b = local_spin_basis(n, spin).unwrap();
    relative_purity(&b, psi).unwrap().per_generator
}

#[test]
fn ghz_pair_is_bell() {
    let s = named_state(StateKind::Ghz, &qubit_spec(2), None).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let a = s.amplitudes();
    assert!((a[0].re - r).abs() < 1e-15 && (a[3].re - r).abs() < 1e-15);
    assert!(a[1].norm() == 0.0 && a[2].norm() == 0.0);
    let bell = named_state(StateKind::Bell, &qubit_spec(2), None).unwrap();
    assert_eq!(bell, s);
}

#[test]
fn spin_one_ghz_and_w() {
    let spec = SpinChainSpec::new(3, Spin::ONE, Boundary::Open).unwrap();
    let ghz = named_state(StateKind::Ghz, &spec, None).unwrap();
    let nonzero: Vec<usize> = (0..27)
        .filter(|&i| ghz.amplitudes()[i].norm() > 0.0)
        .collect();
    assert_eq!(nonzero, vec![0, 13, 26]);
    let w = named_state(StateKind::W, &spec, None).unwrap();
    let nonzero: Vec<usize> = (0..27)
        .filter(|&i| w.amplitudes()[i].norm() > 0.0)
        .collect();
    assert_eq!(nonzero, vec![1, 3, 9]);
    let f = named_state(StateKind::F, &spec, None).unwrap();
    assert_eq!(f.amplitudes()[0], C64::new(1.0, 0.0));
}

#[test]
fn w_three_qubits() {
    let s = named_state(StateKind::W, &qubit_spec(3), None).unwrap();
    for (i, a) in s.amplitudes().iter().enumerate() {
        let e = if [1, 2, 4].contains(&i) {
            3f64.sqrt().recip()
        } else {
            0.0
        };
        assert!((a.re - e).abs() < 1e-15);
    }
}

#[test]
fn w_local_purity_closed_form() {
    for n in 3..=8 {
        let w = named_state(StateKind::W, &qubit_spec(n), None).unwrap();
        let expect = (1.0 - 2.0 / n as f64).powi(2);
        assert!(
            (local_purity(&w, &vec![2; n]).unwrap() - expect).abs() < 1e-12,
            "n={n}"
        );
    }
}

#[test]
fn cluster_states_have_no_local_polarization() {
    let cl = named_state(StateKind::Cluster, &qubit_spec(2), None).unwrap();
    assert!(local_purity(&cl, &[2, 2]).unwrap().abs() < 1e-14);
    for n in 2..=10 {
        let cl = cluster_state(n).unwrap();
        let ex = single_site_expectations(&cl, n, Spin::HALF);
        assert!(ex.iter().all(|v| v.abs() < 1e-12), "n={n}");
    }
}

#[test]
fn cluster_matches_product_expansion() {
    // Apply controlled-Z between neighbours to |+⟩^N; up to the bit
    // convention this is the same cluster state.
    let n = 5;
    let dim = 1 << n;
    let direct = cluster_state(n).unwrap();
    for idx in 0..dim {
        let bit = |s: usize| (idx >> (n - 1 - s)) & 1 == 0;
        let mut sign = 1.0;
        for j in 0..n - 1 {
            if bit(j) && !bit(j + 1) {
                sign = -sign;
            }
        }
        let expect = sign / (dim as f64).sqrt();
        assert!((direct.amplitudes()[idx].re - expect).abs() < 1e-15);
    }
}

#[test]
fn product_kind_uses_sites() {
    let spec = qubit_spec(2);
    let sites = vec![
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
    ];
    let p = named_state(StateKind::Product, &spec, Some(&sites)).unwrap();
    assert!((local_purity(&p, &[2, 2]).unwrap() - 1.0).abs() < 1e-12);
    assert!(named_state(StateKind::Product, &spec, None).is_err());
}

#[test]
fn spec_limits() {
    assert!(matches!(
        SpinChainSpec::new(21, Spin::HALF, Boundary::Open),
        Err(Error::Resource { .. })
    ));
    assert!(SpinChainSpec::new(0, Spin::HALF, Boundary::Open).is_err());
    assert!("ghz".parse::<StateKind>().is_ok());
    assert!("tree".parse::<StateKind>().is_err());
}

#[test]
fn aklt_single_site_moments_vanish() {
    for n in [3, 4, 5, 6] {
        let s = aklt_vbs(n, Boundary::Periodic).unwrap();
        let ex = single_site_expectations(&s, n, Spin::ONE);
        assert!(ex.iter().all(|v| v.abs() < 1e-12), "n={n}");
        let total: f64 = ex.iter().sum();
        assert!(total.abs() < 1e-12);
    }
}

#[test]
fn aklt_su3_generators_vanish() {
    let s = aklt_vbs(4, Boundary::Periodic).unwrap();
    let local = local_algebra_basis(&[3; 4]).unwrap();
    let r = relative_purity(&local, &s).unwrap();
    assert_eq!(r.per_generator.len(), 32);
    assert!(r.per_generator.iter().all(|v| v.abs() < 1e-12));
    assert!(r.value.abs() < 1e-12);
    assert!(local_purity(&s, &[3; 4]).unwrap().abs() < 1e-12);
}

#[test]
fn aklt_is_a_rotation_singlet() {
    let n = 5;
    let s = aklt_vbs(n, Boundary::Periodic).unwrap();
    let b = local_spin_basis(n, Spin::ONE).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let axis: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.5..1.5));
        let t: Vec<f64> = (0..n).flat_map(|_| axis).collect();
        let r = rotate(&b, &t, &s).unwrap();
        assert!((r.inner(&s).norm() - 1.0).abs() < 1e-10);
        let before = single_site_expectations(&s, n, Spin::ONE);
        let after = single_site_expectations(&r, n, Spin::ONE);
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn bcs_limits_and_norm() {
    let vac = bcs_vector(8, 0.0, 0.4).unwrap();
    assert!((vac.amplitudes()[255].norm() - 1.0).abs() < 1e-14);
    for &(g, gamma) in &[(0.2, 0.3), (0.5, 1.0), (1.4, 0.7), (0.8, 0.0)] {
        let s = bcs_vector(10, g, gamma).unwrap();
        assert!((s.inner(&s).re - 1.0).abs() < 1e-12);
    }
    assert!(bcs_vector(7, 0.3, 1.0).is_err());
    assert!(matches!(
        bcs_vector(16, 0.3, 1.0),
        Err(Error::Resource { .. })
    ));
}

#[test]
fn bcs_overlaps_even_sector_ground_state() {
    let ed = xy_ed_sector(8, 0.3, 1.0, 1).unwrap();
    let bcs = bcs_vector(8, 0.3, 1.0).unwrap();
    assert!(bcs.inner(&ed.ground_state).norm() >= 1.0 - 1e-10);
}

#[test]
fn bcs_lives_in_even_parity_sector() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let g = rng.random_range(0.0..1.5);
        let gamma = rng.random_range(0.0..1.0);
        let s = bcs_vector(8, g, gamma).unwrap();
        let odd: f64 = s
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| (8 - i.count_ones()) % 2 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        assert!(odd < 1e-24);
    }
}
