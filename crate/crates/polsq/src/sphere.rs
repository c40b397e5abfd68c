//! Direction sampling on the Poincaré sphere.

use rand::Rng;
use rand_distr::{Distribution, UnitSphere};

use crate::polarization::PoincareVector;

/// Deterministic equal-area grid: latitude bands uniform in the polar
/// coordinate m1 (Archimedes' projection makes equal Δm1 bands equal-area)
/// crossed with uniform longitudes. Band and longitude centers avoid the
/// poles and seams.
pub fn equal_area_grid(bands: usize, lons: usize) -> Vec<PoincareVector> {
    assert!(bands > 0 && lons > 0, "grid resolution must be positive");
    let mut out = Vec::with_capacity(bands * lons);
    for band in 0..bands {
        let z = -1.0 + (2.0 * band as f64 + 1.0) / bands as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        for lon in 0..lons {
            let psi = 2.0 * std::f64::consts::PI * (lon as f64 + 0.5) / lons as f64;
            out.push(PoincareVector::new(z, r * psi.cos(), r * psi.sin()));
        }
    }
    out
}

/// Uniform random unit direction.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> PoincareVector {
    let v: [f64; 3] = UnitSphere.sample(rng);
    PoincareVector::new(v[0], v[1], v[2])
}

/// Uniform random direction subject to `lo < |n·m| < hi`, by rejection.
pub fn random_direction_in_band<R: Rng + ?Sized>(
    rng: &mut R,
    m: &PoincareVector,
    lo: f64,
    hi: f64,
) -> PoincareVector {
    loop {
        let n = random_direction(rng);
        let t = n.dot(m).abs();
        if t > lo && t < hi {
            return n;
        }
    }
}
