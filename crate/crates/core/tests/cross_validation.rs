//! Cross-validation of the three independent solver routes: per-family
//! characteristic equations, the family-agnostic matching engine, the
//! staggered-lattice diagonalization, and the Nystrom integral equation.

use flatband_core::analytic::{char_type1, char_type2, char_type3, find_bound_states};
use flatband_core::generic::solve_generic;
use flatband_core::oracles::lattice::{lattice_bound_states, LatticeConfig};
use flatband_core::oracles::nystrom::nystrom_bound_states;
use flatband_core::roots::{brent, Bracket};
use flatband_core::{ModelParams, Potential};

fn m1() -> ModelParams {
    ModelParams::new(1.0).unwrap()
}

fn nearest(haystack: &[f64], needle: f64) -> f64 {
    haystack
        .iter()
        .copied()
        .min_by(|a, b| (a - needle).abs().partial_cmp(&(b - needle).abs()).unwrap())
        .unwrap()
}

/// The characteristic-equation route and the interface-matching route must
/// agree on every level to near machine precision, across all three named
/// families and a range of depths of both signs.
#[test]
fn characteristic_and_matching_solvers_agree() {
    let cases: Vec<(Potential, usize)> = vec![
        (Potential::square_well(1.0, -0.1, -0.1, -0.1).unwrap(), 4),
        (Potential::square_well(1.0, -0.5, -0.5, -0.5).unwrap(), 4),
        (Potential::square_well(1.0, -2.5, -2.5, -2.5).unwrap(), 4),
        (Potential::square_well(1.0, 0.0, 0.1, 0.0).unwrap(), 6),
        (Potential::square_well(1.0, 0.0, 0.5, 0.0).unwrap(), 6),
        (Potential::square_well(1.0, 0.0, -0.5, 0.0).unwrap(), 6),
        (Potential::square_well(1.0, 0.0, 2.5, 0.0).unwrap(), 6),
        (Potential::square_well(1.0, 0.1, 0.0, 0.0).unwrap(), 6),
        (Potential::square_well(1.0, -0.4, 0.0, 0.0).unwrap(), 6),
        (Potential::square_well(1.0, 0.5, 0.0, 0.0).unwrap(), 6),
    ];
    for (p, n_max) in &cases {
        let a = find_bound_states(m1(), p, *n_max, 1e-13).unwrap();
        let b = solve_generic(m1(), p, *n_max, 1e-13).unwrap();
        assert!(!a.states.is_empty(), "no states for {p:?}");
        let be: Vec<f64> = b.states.iter().map(|s| s.energy).collect();
        for s in &a.states {
            let e = nearest(&be, s.energy);
            assert!(
                (e - s.energy).abs() < 1e-10,
                "{p:?}: characteristic {} vs matching {e}",
                s.energy
            );
        }
        assert_eq!(a.states.len(), b.states.len(), "{p:?}: state counts differ");
    }
}

/// The edge-aligned staggered lattice reproduces deep levels of all three
/// well families; its error budget at h = 0.005 is a few times 1e-6.
#[test]
fn lattice_reproduces_deep_levels_of_all_families() {
    let cases: Vec<(Potential, Vec<f64>)> = vec![
        (
            Potential::square_well(1.0, -2.5, -2.5, -2.5).unwrap(),
            vec![-0.7340454146300328, 0.2853051547187901],
        ),
        (
            Potential::square_well(1.0, 0.0, 0.5, 0.0).unwrap(),
            vec![0.18244319385759, 0.03446740671371],
        ),
        (
            Potential::square_well(1.0, -0.4, 0.0, 0.0).unwrap(),
            vec![-0.19090508558327],
        ),
    ];
    for (p, levels) in &cases {
        let exact = find_bound_states(m1(), p, 4, 1e-13).unwrap();
        for &e in levels {
            // pinned level really is a solver output, not a stale constant
            assert!(
                exact.states.iter().any(|s| (s.energy - e).abs() < 1e-9),
                "{p:?}: {e} not among solver levels"
            );
        }
        let cfg = LatticeConfig::aligned(p, 0.005, 15.0).unwrap();
        let states = lattice_bound_states(m1(), p, cfg, 1e-4).unwrap();
        let energies: Vec<f64> = states.iter().map(|s| s.energy).collect();
        for &e in levels {
            let l = nearest(&energies, e);
            assert!((l - e).abs() < 3e-5, "{p:?}: lattice {l} vs exact {e}");
        }
    }
}

/// Eigenvalue error of the aligned lattice shrinks as h^2: fitted
/// convergence exponent within 2.0 +- 0.3 over h = 0.02, 0.01, 0.005.
#[test]
fn lattice_error_scales_quadratically_in_spacing() {
    let cases: Vec<(Potential, f64)> = vec![
        (Potential::square_well(1.0, 0.0, 0.5, 0.0).unwrap(), 0.18244319385759),
        (Potential::square_well(1.0, -2.5, -2.5, -2.5).unwrap(), -0.7340454146300328),
    ];
    for (p, exact) in &cases {
        let mut errs = Vec::new();
        for h in [0.02, 0.01, 0.005] {
            let cfg = LatticeConfig::aligned(p, h, 15.0).unwrap();
            let states = lattice_bound_states(m1(), p, cfg, 1e-4).unwrap();
            let energies: Vec<f64> = states.iter().map(|s| s.energy).collect();
            errs.push((nearest(&energies, *exact) - exact).abs());
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(
                (1.7..2.3).contains(&order),
                "{p:?}: convergence order {order}, errors {errs:?}"
            );
        }
    }
}

/// The flat band survives on the staggered lattice: one (numerically)
/// exact zero mode per middle site outside the potential support.
#[test]
fn flat_band_cluster_persists_with_a_well() {
    let p = Potential::square_well(1.0, 0.0, 0.5, 0.0).unwrap();
    let cfg = LatticeConfig { half_width: 10.0, spacing: 0.05 };
    let a = flatband_core::oracles::lattice::lattice_hamiltonian(m1(), &p, cfg).unwrap();
    let zeros = a.count_below(1e-6) - a.count_below(-1e-6);
    let sites = cfg.middle_sites() as i64;
    let well_sites = (1.0 / cfg.spacing).round() as i64;
    assert!(
        zeros as i64 >= sites - well_sites - 4,
        "flat cluster holds {zeros} of {} expected",
        sites - well_sites
    );
}

/// A narrow deep V22 well converges to the delta-potential closed form
/// E = m g / sqrt(4 + g^2) as the width shrinks at fixed g = a V.
#[test]
fn narrow_well_approaches_delta_closed_form() {
    let g = 2.0;
    let delta_e = flatband_core::analytic::delta_bound_energy(m1(), g).unwrap().energy;
    let mut errs = Vec::new();
    for a in [0.1, 0.01, 0.001] {
        let p = Potential::square_well(a, 0.0, g / a, 0.0).unwrap();
        let t = find_bound_states(m1(), &p, 3, 1e-13).unwrap();
        let energies: Vec<f64> = t.states.iter().map(|s| s.energy).collect();
        errs.push((nearest(&energies, delta_e) - delta_e).abs());
    }
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "errors not decreasing: {errs:?}");
    assert!(errs[2] < 1e-4, "width 0.001 error {}", errs[2]);
}

/// Nystrom roots agree with the characteristic equations to near machine
/// precision: the product-integration rule removes the quadrature error
/// from the kernel kink at x = x'.
#[test]
fn nystrom_agrees_with_characteristic_roots() {
    let m = m1();
    let cases: Vec<(Potential, Bracket, Box<dyn Fn(f64) -> flatband_core::Result<f64>>)> = vec![
        (
            Potential::square_well(1.0, 0.0, 0.5, 0.0).unwrap(),
            Bracket { a: 0.15, b: 0.25 },
            Box::new(move |e| char_type2(m, 1.0, 0.5, e)),
        ),
        (
            Potential::square_well(1.0, -2.5, -2.5, -2.5).unwrap(),
            Bracket { a: 0.2, b: 0.35 },
            Box::new(move |e| char_type1(m, 1.0, -2.5, e)),
        ),
        (
            Potential::square_well(1.0, -0.4, 0.0, 0.0).unwrap(),
            // tight bracket: only the n = 1 member lives here, the rest of
            // the family accumulates below -0.194 toward V/2 = -0.2
            Bracket { a: -0.194, b: -0.186 },
            Box::new(move |e| char_type3(m, 1.0, -0.4, e)),
        ),
    ];
    for (p, br, ch) in &cases {
        let exact = brent(*br, 1e-15, 200, |e| ch(e)).unwrap();
        for n in [16, 32] {
            let r = brent(*br, 1e-15, 200, |e| {
                flatband_core::oracles::nystrom::nystrom_characteristic(m, p, e, n)
            })
            .unwrap();
            assert!(
                (r - exact).abs() < 1e-12,
                "{p:?} at n = {n}: nystrom {r} vs exact {exact}"
            );
        }
    }
}

/// End-to-end agreement of the full Nystrom scan with the reference solver
/// on a dense multi-family spectrum.
#[test]
fn nystrom_scan_finds_every_reference_level() {
    let p = Potential::square_well(1.0, -0.4, 0.0, 0.0).unwrap();
    let exact = find_bound_states(m1(), &p, 3, 1e-13).unwrap();
    let roots = nystrom_bound_states(m1(), &p, 32, 3, 1e-13).unwrap();
    for s in &exact.states {
        let r = nearest(&roots, s.energy);
        assert!(
            (r - s.energy).abs() < 1e-10,
            "missing level {} (nearest {r})",
            s.energy
        );
    }
}
