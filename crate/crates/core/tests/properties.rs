//! Property-based checks over randomized parameters: closed-form
//! identities, Green function symmetry, and the scaling covariance of the
//! bound spectrum under `m -> s m`, `a -> a / s`, `V -> s V`.

use num_complex::Complex64;
use proptest::prelude::*;

use flatband_core::analytic::{delta_bound_energy, find_bound_states};
use flatband_core::greens::{green_coordinate, regular_trace_at_coincidence};
use flatband_core::{ModelParams, Potential};

fn m1() -> ModelParams {
    ModelParams::new(1.0).unwrap()
}

proptest! {
    /// The delta level always sits strictly inside the gap, carries the
    /// sign of `g`, and solves `2 E = g sqrt(m^2 - E^2)` exactly.
    #[test]
    fn delta_level_solves_its_closed_form(g in prop_oneof![-10.0..-1e-3f64, 1e-3..10.0f64]) {
        let s = delta_bound_energy(m1(), g).unwrap();
        prop_assert!(s.energy.abs() < 1.0);
        prop_assert!(s.energy * g > 0.0);
        let residual = 2.0 * s.energy - g * (1.0 - s.energy * s.energy).sqrt();
        prop_assert!(residual.abs() < 1e-12, "residual {residual}");
    }

    /// `H(k)` is real symmetric, so `G` is symmetric in its band indices;
    /// exchanging `x` and `x'` flips `k -> -k`, which conjugates `H(k)` by
    /// `diag(1, -1, 1)`, so `G_ab(x', x) = s_a s_b G_ab(x, x')` with
    /// `s = (1, -1, 1)`.
    #[test]
    fn green_function_exchange_and_index_symmetry(
        x in -3.0..3.0f64,
        xp in -3.0..3.0f64,
        e in prop_oneof![-0.95..-0.05f64, 0.05..0.95f64],
    ) {
        let z = Complex64::new(e, 0.0);
        let g = green_coordinate(m1(), x, xp, z).unwrap();
        let h = green_coordinate(m1(), xp, x, z).unwrap();
        let s = [1.0, -1.0, 1.0];
        for a in 0..3 {
            for b in 0..3 {
                let d = (g.regular[a][b] - g.regular[b][a]).norm();
                prop_assert!(d < 1e-12, "index asymmetry ({a}, {b}): {d}");
                let d = (h.regular[a][b] - g.regular[a][b] * s[a] * s[b]).norm();
                prop_assert!(d < 1e-12, "exchange parity ({a}, {b}): {d}");
            }
        }
    }

    /// The regularized trace at coincidence is `-z / sqrt(m^2 - z^2)`
    /// for every gap energy.
    #[test]
    fn regular_trace_matches_closed_form(e in prop_oneof![-0.95..-0.05f64, 0.05..0.95f64]) {
        let z = Complex64::new(e, 0.0);
        let tr = regular_trace_at_coincidence(m1(), z).unwrap();
        let expect = -e / (1.0 - e * e).sqrt();
        prop_assert!((tr.re - expect).abs() < 1e-12 && tr.im.abs() < 1e-12);
    }

    /// Rescaling `m -> s m`, `a -> a / s`, `V -> s V` maps every bound
    /// energy to `s E`: the spectrum only depends on the dimensionless
    /// combinations `m a` and `V / m`.
    #[test]
    fn spectrum_is_scaling_covariant(
        s in 0.3..3.0f64,
        a in 0.4..2.0f64,
        v in prop_oneof![-2.0..-0.15f64, 0.15..2.0f64],
    ) {
        let base = Potential::square_well(a, v, v, v).unwrap();
        let scaled = Potential::square_well(a / s, s * v, s * v, s * v).unwrap();
        let eb = find_bound_states(m1(), &base, 3, 1e-13).unwrap();
        let es = find_bound_states(ModelParams::new(s).unwrap(), &scaled, 3, 1e-13).unwrap();
        prop_assert_eq!(eb.states.len(), es.states.len());
        for (b, t) in eb.states.iter().zip(&es.states) {
            prop_assert!(
                (t.energy - s * b.energy).abs() < 1e-9 * s,
                "scaled {} vs s * base {}", t.energy, s * b.energy
            );
        }
    }
}
