//! Shared helpers for the integration test targets.

use polsq::fock::TwoModeFockState;
use polsq::polarization::PolarizationAngles;
use polsq::C64;
use rand::Rng;

/// Random normalized state supported on every ket with n_x + n_y ≤ cutoff,
/// with standard-normal real and imaginary parts.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, cutoff: u32) -> TwoModeFockState {
    let mut entries = Vec::new();
    for n_x in 0..=cutoff {
        for n_y in 0..=(cutoff - n_x) {
            let amp = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            entries.push(((n_x as i64, n_y as i64), amp));
        }
    }
    TwoModeFockState::make_state(&entries).expect("random amplitudes are nonzero")
}

/// Random polarization angles uniform over the sphere.
pub fn random_angles<R: Rng + ?Sized>(rng: &mut R) -> PolarizationAngles {
    let theta = (1.0 - 2.0 * rng.gen_range(0.0..1.0f64)).clamp(-1.0, 1.0).acos();
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    PolarizationAngles::new(theta, phi)
}
