//! Free-particle model: spin-1 matrices, dispersion and band eigenstates.
//!
//! The Bloch Hamiltonian at momentum `k` is `h(k) = k S_x + m S_z`, a real
//! symmetric 3x3 matrix with eigenvalues `-sqrt(k^2+m^2)`, `0` and
//! `+sqrt(k^2+m^2)`. The zero eigenvalue is k-independent: the flat band.

#[allow(unused_imports)]
use num_traits::Float;

/// `S_x` in the usual `|1>,|2>,|3>` basis.
pub const S_X: [[f64; 3]; 3] = [
    [0.0, core::f64::consts::FRAC_1_SQRT_2, 0.0],
    [core::f64::consts::FRAC_1_SQRT_2, 0.0, core::f64::consts::FRAC_1_SQRT_2],
    [0.0, core::f64::consts::FRAC_1_SQRT_2, 0.0],
];

/// `S_z` in the usual basis.
pub const S_Z: [[f64; 3]; 3] = [
    [1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, -1.0],
];

/// Free-particle parameters. The gap `m` is the single scale of the model;
/// `v_F` and `hbar` are fixed to 1, so energies are naturally quoted in
/// units of `m` and lengths in units of `1/m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub m: f64,
}

impl ModelParams {
    /// Requires `m > 0`.
    pub fn new(m: f64) -> crate::Result<Self> {
        if m > 0.0 && m.is_finite() {
            Ok(Self { m })
        } else {
            Err(crate::Error::Config("mass gap m must be positive and finite"))
        }
    }
}

/// Band label: lower dispersive, flat (middle), upper dispersive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandIndex {
    Lower,
    Flat,
    Upper,
}

impl BandIndex {
    pub const ALL: [BandIndex; 3] = [BandIndex::Lower, BandIndex::Flat, BandIndex::Upper];
}

/// A normalized plane-wave eigenstate `amplitudes * e^{ikx}`. The spinor
/// prefactor is real for this Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveState {
    pub k: f64,
    pub band: BandIndex,
    pub amplitudes: [f64; 3],
    pub energy: f64,
}

/// Band dispersion: `-sqrt(k^2+m^2)`, `0`, or `+sqrt(k^2+m^2)`.
pub fn dispersion(params: ModelParams, band: BandIndex, k: f64) -> f64 {
    let omega = k.hypot(params.m);
    match band {
        BandIndex::Lower => -omega,
        BandIndex::Flat => 0.0,
        BandIndex::Upper => omega,
    }
}

/// Normalized band eigenstate of the Bloch Hamiltonian `k S_x + m S_z`.
pub fn eigenstate(params: ModelParams, band: BandIndex, k: f64) -> PlaneWaveState {
    let m = params.m;
    let omega = k.hypot(m);
    let sqrt2 = core::f64::consts::SQRT_2;
    let amplitudes = match band {
        BandIndex::Lower => {
            let n = 2.0 * omega;
            [(omega - m) / n, -sqrt2 * k / n, (omega + m) / n]
        }
        BandIndex::Flat => {
            let n = sqrt2 * omega;
            [-k / n, sqrt2 * m / n, k / n]
        }
        BandIndex::Upper => {
            let n = 2.0 * omega;
            [(omega + m) / n, sqrt2 * k / n, (omega - m) / n]
        }
    };
    PlaneWaveState {
        k,
        band,
        amplitudes,
        energy: dispersion(params, band, k),
    }
}

/// Apply the Bloch Hamiltonian `k S_x + m S_z` to a spinor.
pub fn bloch_apply(params: ModelParams, k: f64, v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += (k * S_X[i][j] + params.m * S_Z[i][j]) * v[j];
        }
    }
    out
}
