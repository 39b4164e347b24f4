mod common;

use common::c;
use tepai_core::estimate::{run_ensemble, EnsembleConfig, ShotMode};
use tepai_core::experiments::{
    adiabatic_fidelity, adiabatic_fidelity_ensemble, energy_circuits, energy_from_overlap,
    fidelity_circuits, otoc_circuits, estimate_ground_energy, exact_adiabatic_fidelity,
    exact_energy_estimate, otoc_circuit, otoc_series, trotter_energy, trotter_fidelity,
    AdiabaticProblem, EnergyEstimationConfig, FidelityConfig, OtocConfig,
};
use tepai_core::estimate::PostSelection;
use tepai_core::models::{generate_sparse_syk, SykParams};
use tepai_core::pauli::majorana_operator;
use tepai_core::rng::SeedStream;
use tepai_core::sampling::TepaiSampler;
use tepai_core::{GateSet, NoiseModel, PhasedPauli};

fn problem() -> AdiabaticProblem {
    AdiabaticProblem::h3plus().unwrap()
}

fn midpoint_state(p: &AdiabaticProblem, total: f64, steps: usize) -> common::M {
    let h0 = common::hamiltonian(&p.h_hf);
    let h1 = common::hamiltonian(&p.h_int);
    let dt = total / steps as f64;
    let mut psi = common::vector(p.hf_state.amplitudes());
    for k in 0..steps {
        let f = (k as f64 + 0.5) / steps as f64;
        psi = common::evolution(&(&h0 + &h1 * c(f, 0.0)), dt) * psi;
    }
    psi
}

#[test]
fn reference_energies() {
    let p = problem();
    let m = common::hamiltonian(&p.hamiltonian);
    let (e, v) = common::sector_ground(&m, 2);
    assert!((p.e_exact - e).abs() < 1e-10);
    assert!((e + 1.986_167_11).abs() < 1e-7);
    assert!((p.e_hf + 1.933_424).abs() < 1e-6);
    assert!((p.e_hf - p.dense_hf_energy()).abs() < 1e-12);
    let overlap: num_complex::Complex64 = v
        .iter()
        .zip(p.ground_state.amplitudes())
        .map(|(a, b)| a.conj() * b)
        .sum();
    assert!((overlap.norm() - 1.0).abs() < 1e-10);
}

#[test]
fn zero_time_fidelity_is_reference_overlap() {
    let p = problem();
    let r = adiabatic_fidelity(
        &p,
        &FidelityConfig {
            total_time: 0.0,
            delta: 0.3,
            n_circuits: 5,
            master_seed: 1,
            gateset: GateSet::Cx,
        },
    )
    .unwrap();
    let want = p.ground_state.amplitudes()[p.hf_bits as usize].norm_sqr();
    assert!((r.mean - want).abs() < 1e-12);
    assert!((want - 0.944_052_57).abs() < 1e-8);
    assert!(r.stderr < 1e-14);
}

#[test]
fn exact_adiabatic_fidelity_matches_independent_integrator() {
    let p = problem();
    let rk4 = exact_adiabatic_fidelity(&p, 8.0, 4000).unwrap();
    assert!((rk4 - 0.998_425_893).abs() < 1e-6, "{rk4}");
    let psi = midpoint_state(&p, 2.0, 400);
    let gs = common::vector(p.ground_state.amplitudes());
    let mid = (gs.adjoint() * psi)[(0, 0)].norm_sqr();
    assert!((exact_adiabatic_fidelity(&p, 2.0, 2000).unwrap() - mid).abs() < 1e-5);
}

#[test]
fn fidelity_estimate_is_unbiased_at_short_time() {
    let p = problem();
    let total = 2.0;
    let r = adiabatic_fidelity(
        &p,
        &FidelityConfig {
            total_time: total,
            delta: 0.2,
            n_circuits: 4000,
            master_seed: 2,
            gateset: GateSet::Cx,
        },
    )
    .unwrap();
    let exact = exact_adiabatic_fidelity(&p, total, 2000).unwrap();
    assert!(((r.mean - exact) / r.stderr).abs() < 5.0, "{} ± {} vs {exact}", r.mean, r.stderr);
    assert!(r.gates_2q_mean.unwrap() > 0.0);
}

#[test]
fn trotter_fidelity_converges() {
    let p = problem();
    let exact = exact_adiabatic_fidelity(&p, 8.0, 4000).unwrap();
    let r1 = trotter_fidelity(&p, 8.0, 1, GateSet::Cx).unwrap();
    let r7 = trotter_fidelity(&p, 8.0, 7, GateSet::Cx).unwrap();
    let r400 = trotter_fidelity(&p, 8.0, 400, GateSet::Cx).unwrap();
    assert!(r1.value < r7.value);
    assert!(r1.gates_2q < r7.gates_2q);
    assert!((r400.value - exact).abs() < 1e-3);
}

#[test]
fn energy_estimate_converges_to_exact_state_value() {
    let p = problem();
    let (total, s, eps) = (8.0, 10.0, 0.05);
    let target = exact_energy_estimate(&p, total, s, eps, 4000).unwrap();
    let psi = midpoint_state(&p, total, 1600);
    let z = (psi.adjoint() * common::evolution(&common::hamiltonian(&p.hamiltonian), -s) * &psi)[(0, 0)];
    assert!((energy_from_overlap(z, p.e_hf, eps, s).unwrap() - target).abs() < 1e-4);
    let est = estimate_ground_energy(
        &p,
        &EnergyEstimationConfig {
            total_time: total,
            s,
            epsilon: eps,
            delta: 0.15,
            n_circuits: 3000,
            shots: ShotMode::Exact,
            noise: NoiseModel::disabled(),
            post_selection: PostSelection::none(),
            master_seed: 3,
            gateset: GateSet::Cx,
            bootstrap_resamples: 200,
        },
    )
    .unwrap();
    assert!(((est.e_est - target) / est.stderr).abs() < 5.0, "{} ± {} vs {target}", est.e_est, est.stderr);
}

#[test]
fn trotter_energy_approaches_exact_state_value() {
    let p = problem();
    let target = exact_energy_estimate(&p, 8.0, 10.0, 0.05, 4000).unwrap();
    let coarse = trotter_energy(&p, 8.0, 10.0, 0.05, 2, GateSet::Cx).unwrap();
    let fine = trotter_energy(&p, 8.0, 10.0, 0.05, 400, GateSet::Cx).unwrap();
    assert!((fine.value - target).abs() < 1e-3);
    assert!((fine.value - target).abs() < (coarse.value - target).abs());
}

fn small_syk() -> tepai_core::PauliHamiltonian {
    generate_sparse_syk(&SykParams::new(10, 2.3, 8)).unwrap()
}

fn config(deltas: Vec<f64>, counts: Vec<usize>, shots: ShotMode) -> OtocConfig {
    OtocConfig {
        i: 0,
        j: 5,
        coupling: 1.0,
        deltas,
        n_circuits: counts,
        shots,
        noise: NoiseModel::disabled(),
        odd_parity: true,
        master_seed: 4,
        gateset: GateSet::Cx,
    }
}

#[test]
fn otoc_at_zero_time_is_minus_one() {
    let h = small_syk();
    let p = &otoc_series(&h, &config(vec![0.1], vec![20], ShotMode::Exact), &[0.0]).unwrap()[0];
    assert!((p.results[0].1.mean + 1.0).abs() < 1e-12);
    assert!((p.exact + 1.0).abs() < 1e-12);
}

#[test]
fn otoc_oracle_matches_independent_dense_computation() {
    let h = small_syk();
    let t = 0.7;
    let p = &otoc_series(&h, &config(vec![0.2], vec![10], ShotMode::Exact), &[t]).unwrap()[0];
    let u = common::evolution(&common::hamiltonian(&h), t);
    let gi = common::pauli(&majorana_operator(0, 5).unwrap().to_string());
    let gj = common::pauli(&majorana_operator(5, 5).unwrap().to_string());
    let gj_t = u.adjoint() * &gj * &u;
    let m = &gj_t * &gi * &gj_t * &gi;
    assert!((p.exact - m[(0, 0)].re).abs() < 1e-10);
}

#[test]
fn noiseless_zne_is_consistent_and_parity_always_passes() {
    let h = small_syk();
    let cfg = config(vec![0.1, 0.3], vec![3000, 3000], ShotMode::Shots(5));
    let p = &otoc_series(&h, &cfg, &[0.8]).unwrap()[0];
    let (m, e) = p.zne.unwrap();
    for (_, r) in &p.results {
        assert_eq!(r.accepted_fraction, 1.0);
        assert!((m - r.mean).abs() < 5.0 * e.max(r.stderr));
        assert!(((r.mean - p.exact) / r.stderr).abs() < 5.0);
    }
}

fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn swapping_sample_streams_leaves_distribution_unchanged() {
    let h = small_syk();
    let sampler = TepaiSampler::split(&h, 0.6, 0.2).unwrap();
    let gi: PhasedPauli = majorana_operator(0, 5).unwrap().into();
    let gj: PhasedPauli = majorana_operator(5, 5).unwrap().into();
    let run = |swap: bool, seed: u64| {
        let factory = |_: usize, seeds: &SeedStream| {
            let (r1, r2) = if swap { (2, 1) } else { (1, 2) };
            let u1 = sampler.sample(&mut seeds.rng(&[r1]));
            let u2 = sampler.sample(&mut seeds.rng(&[r2]));
            otoc_circuit(&gi, &gj, &u1, &u2)
        };
        run_ensemble(&EnsembleConfig::exact(3000, seed), &factory)
            .unwrap()
            .values(tepai_core::estimate::Component::Re)
    };
    let (a, b) = (run(false, 20), run(true, 21));
    // 1% critical value of the two-sample statistic
    let crit = 1.63 * ((a.len() + b.len()) as f64 / (a.len() * b.len()) as f64).sqrt();
    assert!(ks_statistic(a, b) < crit);
}

#[test]
fn invalid_otoc_configs_are_rejected() {
    let h = small_syk();
    let mut cfg = config(vec![0.1], vec![10], ShotMode::Exact);
    cfg.j = 0;
    assert!(otoc_series(&h, &cfg, &[0.5]).is_err());
    cfg.j = 10;
    assert!(otoc_series(&h, &cfg, &[0.5]).is_err());
    let cfg = config(vec![0.1, 0.2], vec![10], ShotMode::Exact);
    assert!(otoc_series(&h, &cfg, &[0.5]).is_err());
}

#[test]
fn dumped_circuits_are_the_ones_that_ran() {
    let p = problem();
    let fc = FidelityConfig {
        total_time: 3.0,
        delta: 0.3,
        n_circuits: 6,
        master_seed: 30,
        gateset: GateSet::Cx,
    };
    let ens = adiabatic_fidelity_ensemble(&p, &fc).unwrap();
    let dump = fidelity_circuits(&p, &fc, 10).unwrap();
    assert_eq!(dump.len(), 6);
    for (o, r) in ens.outcomes.iter().zip(&dump) {
        assert_eq!(o.weight, r.sign * r.normalization);
    }

    let ec = EnergyEstimationConfig {
        total_time: 3.0,
        s: 2.0,
        epsilon: 0.05,
        delta: 0.3,
        n_circuits: 6,
        shots: ShotMode::Exact,
        noise: NoiseModel::disabled(),
        post_selection: PostSelection::none(),
        master_seed: 31,
        gateset: GateSet::Cx,
        bootstrap_resamples: 10,
    };
    let est = estimate_ground_energy(&p, &ec).unwrap();
    for (o, (a, b)) in est.outcomes.iter().zip(energy_circuits(&p, &ec, 6).unwrap()) {
        assert_eq!(o.weight, a.sign * a.normalization * b.sign * b.normalization);
    }

    let h = small_syk();
    let cfg = config(vec![0.2, 0.4], vec![5, 5], ShotMode::Exact);
    let pt = &otoc_series(&h, &cfg, &[0.6]).unwrap()[0];
    for (o, (a, b)) in pt.outcomes[1].iter().zip(otoc_circuits(&h, &cfg, 0.6, 1, 5).unwrap()) {
        assert_eq!(o.weight, a.sign * a.normalization * b.sign * b.normalization);
    }
}
