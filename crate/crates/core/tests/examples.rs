//! Worked examples through the public API, each against a value computed
//! here from first principles rather than by the library.

use std::f64::consts::PI;

use czphc_core::config::derive_params;
use czphc_core::constants::{C, HBAR};
use czphc_core::kpath::SymmetryPoint;
use czphc_core::lattice::{fourier_by_quadrature, phase_pattern};
use czphc_core::opw::{effective_mass_fd, Direction, OpwSolver};
use czphc_core::zeeman::{analyze, m_closed_form, spread_rms};
use czphc_core::LatticeSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reference() -> LatticeSpec {
    LatticeSpec::reference()
}

fn weak() -> LatticeSpec {
    LatticeSpec::reference().with_dphi(1e-4)
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn derived_constants_of_the_reference_lattice() {
    let dp = derive_params(&reference());
    let (lambda, n, pitch) = (960e-9, 3.53, 4e-6);
    let k_z = 2.0 * PI * n / lambda;
    assert!(rel(dp.k_z, k_z) < 1e-15);
    assert!(rel(dp.k_z, 2.3104e7) < 1e-4);
    assert!(rel(dp.l_z, 271.95e-9) < 1e-4);
    assert!(rel(dp.m0, 2.869e-35) < 1e-3);
    assert!(rel(dp.p_interband, 5.857e-29) < 1e-3);
    assert!(rel(dp.p_interband, HBAR * PI / (2.0_f64.sqrt() * pitch)) < 1e-15);
    assert!(rel(dp.omega0, 2.0 * PI * C / lambda) < 1e-15);
    assert!(rel(dp.v_prefactor * 0.02, 3.12e12) < 1e-3);
}

#[test]
fn pattern_area_by_monte_carlo() {
    let l = reference();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples = 1_000_000;
    let inside = (0..samples)
        .filter(|_| {
            let x = rng.gen_range(-0.5..0.5) * l.pitch;
            let y = rng.gen_range(-0.5..0.5) * l.pitch;
            phase_pattern(&l, x, y) == l.dphi
        })
        .count();
    let frac = inside as f64 / samples as f64;
    assert!((frac - 0.65).abs() < 0.002, "{frac}");
}

#[test]
fn coupling_between_folded_waves_at_t() {
    let l = reference();
    let s = OpwSolver::new(&l, 7, 8);
    let t = SymmetryPoint::T.wavevector(l.pitch);
    let h = s.detuning_hamiltonian(t);
    let basis = s.basis_at(t);
    let idx = |m, n| basis.iter().position(|g| g.m == m && g.n == n).unwrap();
    let want = -derive_params(&l).v_prefactor * fourier_by_quadrature(&l, 1, 0);
    let got = h.get(idx(0, 0), idx(1, 0)).re;
    assert!(rel(got, want) < 1e-10);
    assert!(rel(got, -4.585e11) < 1e-3);
}

#[test]
fn empty_lattice_levels_and_mass() {
    let l = reference().with_dphi(0.0);
    let dp = derive_params(&l);
    let s = OpwSolver::new(&l, 4, 8);
    // four waves at |k+G|² = 2π²/Λ²
    let free = C * l.lambda_vac / (4.0 * PI * l.n_refr.powi(2)) * 2.0 * (PI / l.pitch).powi(2);
    assert!(rel(free, 2.2674e12) < 1e-4);
    let d = s
        .detunings_at(SymmetryPoint::T.wavevector(l.pitch), 4)
        .unwrap();
    for x in d {
        assert!(rel(x, free) < 1e-12);
    }
    let m = effective_mass_fd(&s, [0.0, 0.0], 0, Direction::Diagonal, 1e-3 * PI / l.pitch).unwrap();
    assert!(rel(m, dp.m0) < 1e-9);
}

#[test]
fn closed_form_magnitudes() {
    let z = analyze(&weak()).unwrap();
    assert!((z.m_plus - 403.6).abs() < 0.5);
    assert!((z.m_minus - 639.0).abs() < 0.5);
    assert!((z.delta_omega_l_per_omega - 167.3).abs() < 0.1);
    // spread of the T1-T4 states: about a millimetre, ~240 pitches
    assert!(rel(z.spread_rms, 9.6e-4) < 0.01);
    assert!((z.spread_rms / 4e-6 - 240.0).abs() < 3.0);

    let dp = derive_params(&weak());
    assert!(
        rel(
            spread_rms(2.0 * z.m_plus, 2.0 * z.m_minus, dp.p_interband),
            2.0 * z.spread_rms
        ) < 1e-15
    );
}

#[test]
fn closed_form_scalings() {
    let base = weak();
    let m = |l: LatticeSpec| {
        let (p, q) = m_closed_form(&l, &derive_params(&l)).unwrap();
        p + q
    };
    assert!(rel(m(base.with_dphi(1e-3)), m(base) / 10.0) < 1e-14);
    assert!(rel(m(base.with_pitch(6e-6)), m(base) * (4.0_f64 / 6.0).powi(2)) < 1e-14);
    let scaled = LatticeSpec {
        lambda_vac: 2.0 * base.lambda_vac,
        pitch: 2.0 * base.pitch,
        ..base
    };
    assert!(rel(m(scaled), m(base)) < 1e-14);
}

#[test]
fn basis_convergence_at_reference_cutoff() {
    let l = reference();
    let t = SymmetryPoint::T.wavevector(l.pitch);
    let a = OpwSolver::new(&l, 7, 8).detunings_at(t, 4).unwrap();
    let b = OpwSolver::new(&l, 9, 8).detunings_at(t, 4).unwrap();
    let omega0 = derive_params(&l).omega0;
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() / omega0 < 1e-6);
    }
}
