//! Validation suite behind the `validate` subcommand: eleven numbered
//! checks covering the closed forms, the well families, cross-solver
//! agreement, both numerical oracles, and the Green function machinery.
//! Each check records the measured values and the tolerance it was held
//! to, so the report states what was actually observed.

use std::time::Instant;

use num_complex::Complex64;
use serde_json::json;

use flatband_core::analytic::{
    delta_bound_energy, find_bound_states, type1_threshold_energy, type2_asymptotic_energy,
    type3_accumulation_spectrum, dos_estimate_near_flatband,
};
use flatband_core::generic::solve_generic;
use flatband_core::greens;
use flatband_core::oracles::lattice::{lattice_bound_states, lattice_hamiltonian, LatticeConfig};
use flatband_core::oracles::nystrom::nystrom_characteristic;
use flatband_core::roots::{brent, Bracket};
use flatband_core::{ModelParams, Potential};

/// One measured quantity within a check; `ok` when `measured <= tolerance`
/// (both are error magnitudes unless the label says otherwise).
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub label: String,
    pub measured: f64,
    pub tolerance: f64,
    pub ok: bool,
}

fn item(label: impl Into<String>, measured: f64, tolerance: f64) -> CheckItem {
    let ok = measured.is_finite() && measured <= tolerance;
    CheckItem { label: label.into(), measured, tolerance, ok }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub suite: &'static str,
    pub passed: bool,
    pub items: Vec<CheckItem>,
}

impl CheckResult {
    fn new(id: usize, name: &'static str, suite: &'static str, items: Vec<CheckItem>) -> Self {
        let passed = items.iter().all(|i| i.ok);
        CheckResult { id, name, suite, passed, items }
    }

    pub fn summary_line(&self) -> String {
        let status = if self.passed { "pass" } else { "FAIL" };
        let worst = self
            .items
            .iter()
            .filter(|i| !i.ok)
            .chain(self.items.iter().max_by(|a, b| {
                let ra = a.measured / a.tolerance.max(1e-300);
                let rb = b.measured / b.tolerance.max(1e-300);
                ra.total_cmp(&rb)
            }))
            .next();
        match worst {
            Some(w) => format!(
                "criterion {:2} [{status}] {} ({}: {:.3e} vs {:.1e})",
                self.id, self.name, w.label, w.measured, w.tolerance
            ),
            None => format!("criterion {:2} [{status}] {}", self.id, self.name),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "id": self.id,
            "name": self.name,
            "suite": self.suite,
            "passed": self.passed,
            "checks": self.items.iter().map(|i| json!({
                "label": i.label,
                "measured": i.measured,
                "tolerance": i.tolerance,
                "ok": i.ok,
            })).collect::<Vec<_>>(),
        })
    }
}

fn m1() -> ModelParams {
    ModelParams::new(1.0).unwrap()
}

/// Delta closed form: one state at `m g / sqrt(4 + g^2)` per coupling.
pub fn criterion_1() -> CheckResult {
    let t0 = Instant::now();
    let mut items = Vec::new();
    for &g in &[0.01, -0.01, 0.1, -0.1, 1.0, -1.0, 2.0, -2.0, 10.0, -10.0] {
        let p = Potential::delta(g).unwrap();
        match find_bound_states(m1(), &p, 1, 1e-14) {
            Ok(t) => {
                items.push(item(
                    format!("state count deviation at g = {g}"),
                    (t.states.len() as f64 - 1.0).abs(),
                    0.0,
                ));
                if let Some(s) = t.states.first() {
                    let exact = g / (4.0 + g * g).sqrt();
                    items.push(item(
                        format!("relative energy error at g = {g}"),
                        (s.energy / exact - 1.0).abs(),
                        1e-12,
                    ));
                }
            }
            Err(e) => items.push(item(format!("solver failed at g = {g}: {e}"), f64::NAN, 0.0)),
        }
    }
    items.push(item("runtime [s]", t0.elapsed().as_secs_f64(), 1.0));
    CheckResult::new(1, "delta closed form", "closed-form", items)
}

/// Weak coupling: `E_B -> m g / 2` linearly in the strength.
pub fn criterion_2() -> CheckResult {
    let g = 1e-3;
    let e = delta_bound_energy(m1(), g).unwrap().energy;
    let items = vec![item(
        "relative deviation from m g / 2 at g = 1e-3",
        (e / (g / 2.0) - 1.0).abs(),
        1e-4,
    )];
    CheckResult::new(2, "weak-coupling linearity", "closed-form", items)
}

/// Type II exactness: exact roots against the small-energy closed form.
pub fn criterion_3() -> CheckResult {
    let t0 = Instant::now();
    let p = Potential::square_well(1.0, 0.0, 0.5, 0.0).unwrap();
    let t = find_bound_states(m1(), &p, 5, 1e-13).unwrap();
    let mut items = Vec::new();
    for (n, tol) in [(1usize, 0.02), (5, 0.002)] {
        let exact = t
            .states
            .iter()
            .find(|s| s.family_index == Some(n))
            .map(|s| s.energy);
        match exact {
            Some(e) => {
                let asym = type2_asymptotic_energy(m1(), 1.0, 0.5, n);
                items.push(item(
                    format!("relative gap exact vs asymptotic at n = {n}"),
                    (e / asym - 1.0).abs(),
                    tol,
                ));
            }
            None => items.push(item(format!("family member n = {n} missing"), f64::NAN, 0.0)),
        }
    }
    items.push(item("runtime [s]", t0.elapsed().as_secs_f64(), 1.0));
    CheckResult::new(3, "type II asymptotic exactness", "family", items)
}

/// Hydrogen-like deep tail of the type II family.
pub fn criterion_4() -> CheckResult {
    let t0 = Instant::now();
    let v = 0.1;
    let p = Potential::square_well(1.0, 0.0, v, 0.0).unwrap();
    let t = find_bound_states(m1(), &p, 20, 1e-14).unwrap();
    let mut items = Vec::new();
    for n in 10..=20usize {
        let exact = t
            .states
            .iter()
            .find(|s| s.family_index == Some(n))
            .map(|s| s.energy);
        match exact {
            Some(e) => {
                let np = n as f64 * std::f64::consts::PI;
                items.push(item(
                    format!("|n^2 E_n pi^2 / (m^2 a^2 V) - 1| at n = {n}"),
                    (e * np * np / v - 1.0).abs(),
                    0.02,
                ));
            }
            None => items.push(item(format!("family member n = {n} missing"), f64::NAN, 0.0)),
        }
    }
    items.push(item("runtime [s]", t0.elapsed().as_secs_f64(), 5.0));
    CheckResult::new(4, "hydrogen-like spectrum", "family", items)
}

/// Level density near the flat band against the analytic estimate.
pub fn criterion_5() -> CheckResult {
    let v = 0.1;
    let p = Potential::square_well(1.0, 0.0, v, 0.0).unwrap();
    let t = find_bound_states(m1(), &p, 22, 1e-14).unwrap();
    let energy_of = |n: usize| {
        t.states
            .iter()
            .find(|s| s.family_index == Some(n))
            .map(|s| s.energy)
    };
    let mut items = Vec::new();
    for n in 10..=20usize {
        match (energy_of(n - 1), energy_of(n), energy_of(n + 1)) {
            (Some(lo), Some(mid), Some(hi)) => {
                // centered finite-difference level density dn/dE
                let density = 2.0 / (lo - hi);
                let estimate = dos_estimate_near_flatband(m1(), 1.0, v, mid).unwrap();
                items.push(item(
                    format!("relative DOS deviation at n = {n}"),
                    (density / estimate - 1.0).abs(),
                    0.10,
                ));
            }
            _ => items.push(item(format!("levels around n = {n} missing"), f64::NAN, 0.0)),
        }
    }
    CheckResult::new(5, "flat-band DOS scaling", "family", items)
}

/// Shallow type I wells against the leading near-threshold law.
pub fn criterion_6() -> CheckResult {
    let mut items = Vec::new();
    for &mag in &[0.01, 0.02, 0.05] {
        for &v in &[mag, -mag] {
            let p = Potential::square_well(1.0, v, v, v).unwrap();
            let t = find_bound_states(m1(), &p, 4, 1e-14).unwrap();
            let edge = -v.signum();
            let law_shift = type1_threshold_energy(m1(), 1.0, v) - edge;
            // the near-threshold root is the one closest to the band edge
            let near = t
                .states
                .iter()
                .map(|s| s.energy)
                .min_by(|a, b| (a - edge).abs().total_cmp(&(b - edge).abs()));
            match near {
                Some(e) => items.push(item(
                    format!("relative shift error at V = {v}"),
                    ((e - edge) / law_shift - 1.0).abs(),
                    0.05,
                )),
                None => items.push(item(format!("no state at V = {v}"), f64::NAN, 0.0)),
            }
        }
    }
    CheckResult::new(6, "type I threshold law", "family", items)
}

/// Type III accumulation toward `E = V/2`.
pub fn criterion_7() -> CheckResult {
    let v = -0.4;
    let p = Potential::square_well(1.0, v, 0.0, 0.0).unwrap();
    let t = find_bound_states(m1(), &p, 10, 1e-13).unwrap();
    let asym = type3_accumulation_spectrum(m1(), 1.0, v, 10).unwrap();
    let mut items = Vec::new();
    let family: Vec<(usize, f64)> = t
        .states
        .iter()
        .filter_map(|s| s.family_index.map(|n| (n, s.energy)))
        .collect();
    for &(n, e) in &family {
        if n >= 5 {
            let exact = e - v / 2.0;
            let approx = asym[n - 1] - v / 2.0;
            items.push(item(
                format!("relative (E - V/2) deviation at n = {n}"),
                (exact / approx - 1.0).abs(),
                0.02,
            ));
        }
    }
    // monotone approach: |E_n - V/2| strictly decreasing in n
    let mut violations = 0.0;
    for w in family.windows(2) {
        if (w[1].1 - v / 2.0).abs() >= (w[0].1 - v / 2.0).abs() {
            violations += 1.0;
        }
    }
    items.push(item("monotonicity violations", violations, 0.0));
    CheckResult::new(7, "type III accumulation", "family", items)
}

/// Characteristic-equation roots equal matching-determinant roots.
pub fn criterion_8() -> CheckResult {
    let mut items = Vec::new();
    for &v in &[0.1, -0.1, 0.5, -0.5, 2.5, -2.5] {
        let wells = [
            Potential::square_well(1.0, v, v, v).unwrap(),
            Potential::square_well(1.0, 0.0, v, 0.0).unwrap(),
            Potential::square_well(1.0, v, 0.0, 0.0).unwrap(),
        ];
        for p in &wells {
            let a = find_bound_states(m1(), p, 5, 1e-13).unwrap();
            let b = solve_generic(m1(), p, 5, 1e-13).unwrap();
            items.push(item(
                format!("state count mismatch for {p:?}"),
                (a.states.len() as f64 - b.states.len() as f64).abs(),
                0.0,
            ));
            let mut worst = 0.0f64;
            for s in &a.states {
                let nearest = b
                    .states
                    .iter()
                    .map(|t| (t.energy - s.energy).abs())
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(nearest);
            }
            items.push(item(format!("max level gap for {p:?}"), worst, 1e-10));
        }
    }
    CheckResult::new(8, "cross-solver concordance", "solver", items)
}

/// Both oracles against the reference solver.
pub fn criterion_9() -> CheckResult {
    let mut items = Vec::new();

    // staggered lattice, h = 0.005 on a box of half-width 40
    let wells = [
        Potential::square_well(1.0, -2.5, -2.5, -2.5).unwrap(),
        Potential::square_well(1.0, 0.0, 0.5, 0.0).unwrap(),
        Potential::square_well(1.0, -0.4, 0.0, 0.0).unwrap(),
    ];
    for p in &wells {
        let exact = find_bound_states(m1(), p, 4, 1e-13).unwrap();
        match LatticeConfig::aligned(p, 0.005, 40.0)
            .and_then(|cfg| lattice_bound_states(m1(), p, cfg, 1e-4))
        {
            Ok(states) => {
                let energies: Vec<f64> = states.iter().map(|s| s.energy).collect();
                for s in exact.states.iter().take(3) {
                    let nearest = energies
                        .iter()
                        .map(|e| (e - s.energy).abs())
                        .fold(f64::INFINITY, f64::min);
                    items.push(item(
                        format!("lattice relative error at E = {:.6} for {p:?}", s.energy),
                        nearest / s.energy.abs(),
                        1e-3,
                    ));
                }
            }
            Err(e) => items.push(item(format!("lattice failed for {p:?}: {e}"), f64::NAN, 0.0)),
        }
    }

    // Nystrom at 200 nodes against the characteristic roots
    let p2 = Potential::square_well(1.0, 0.0, 0.5, 0.0).unwrap();
    let br = Bracket { a: 0.15, b: 0.25 };
    let exact = brent(br, 1e-15, 200, |e| {
        flatband_core::analytic::char_type2(m1(), 1.0, 0.5, e)
    })
    .unwrap();
    let ny = brent(br, 1e-15, 200, |e| nystrom_characteristic(m1(), &p2, e, 200)).unwrap();
    items.push(item("nystrom type II root error at 200 nodes", (ny - exact).abs(), 1e-6));

    let g = 2.0;
    let pd = Potential::delta(g).unwrap();
    let ed = delta_bound_energy(m1(), g).unwrap().energy;
    let nd = brent(Bracket { a: 0.5, b: 0.95 }, 1e-15, 200, |e| {
        nystrom_characteristic(m1(), &pd, e, 200)
    })
    .unwrap();
    items.push(item("nystrom delta root error", (nd - ed).abs(), 1e-6));

    // the delta kernel collapses to the scalar 1 - g sqrt(m^2-E^2)/(2E)
    let mut worst = 0.0f64;
    for &e in &[-0.9, -0.5, -0.1, 0.1, 0.5, 0.9] {
        let val = nystrom_characteristic(m1(), &pd, e, 200).unwrap();
        let scalar = 1.0 - g * (1.0 - e * e).sqrt() / (2.0 * e);
        worst = worst.max((val - scalar).abs());
    }
    items.push(item("delta characteristic vs scalar closed form", worst, 1e-12));

    CheckResult::new(9, "oracle concordance", "oracle", items)
}

/// Green function and density-of-states identities.
pub fn criterion_10() -> CheckResult {
    let mut items = Vec::new();

    // spectral reconstruction of the closed-form regular part
    for &(x, xp, zr, zi) in &[(2.0, 0.0, 0.0, 1.0), (0.3, -0.4, 0.5, 0.0), (-1.1, 0.6, -0.3, 0.4)]
    {
        let z = Complex64::new(zr, zi);
        let got = greens::spectral_green_quadrature(m1(), x, xp, z, 200.0, 1 << 14).unwrap();
        let want = greens::green_coordinate(m1(), x, xp, z).unwrap();
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((got.regular[i][j] - want.regular[i][j]).norm());
            }
        }
        items.push(item(
            format!("spectral quadrature max entry error at x = {x}, x' = {xp}, z = {z}"),
            worst,
            1e-6,
        ));
    }

    // threshold exponent of the continuum DOS: fitted log-log slope
    let eps: Vec<f64> = (0..20).map(|i| 1e-8 * 10f64.powf(i as f64 * 0.2)).collect();
    let ys: Vec<f64> = eps
        .iter()
        .map(|&e| greens::dos(m1(), 1.0 + e).unwrap().continuum.ln())
        .collect();
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    items.push(item("threshold exponent deviation from -1/2", (slope + 0.5).abs(), 0.005));

    // spectral trace relation in the gap
    let mut worst = 0.0f64;
    for &z in &[0.5, -0.3, 0.9] {
        let lhs = greens::regular_trace_at_coincidence(m1(), Complex64::new(z, 0.0)).unwrap();
        let rhs = greens::dos_trace_integral(m1(), z, 50.0, 4000).unwrap();
        worst = worst.max((lhs.re - rhs).abs());
    }
    items.push(item("trace relation max deviation", worst, 1e-4));

    CheckResult::new(10, "Green function and DOS identities", "green", items)
}

/// The free lattice keeps its macroscopic zero-energy flat-band cluster.
pub fn criterion_11() -> CheckResult {
    let p = Potential::square_well(1.0, 0.0, 0.0, 0.0).unwrap();
    let cfg = LatticeConfig { half_width: 10.0, spacing: 0.05 };
    let a = lattice_hamiltonian(m1(), &p, cfg).unwrap();
    let zeros = a.count_below(1e-8) - a.count_below(-1e-8);
    let dim = 3 * cfg.middle_sites() - 2;
    let required = dim / 3 - 2;
    // measured as a deficit so that 0 means the cluster is complete
    let deficit = (required as f64 - zeros as f64).max(0.0);
    let items = vec![item(
        format!("zero-mode deficit ({zeros} of {required} required, dim {dim})"),
        deficit,
        0.0,
    )];
    CheckResult::new(11, "lattice flat band", "oracle", items)
}

/// Runs the checks of one suite (`"all"` for every one).
pub fn run_suite(suite: &str) -> Vec<CheckResult> {
    let all: [(&str, fn() -> CheckResult); 11] = [
        ("closed-form", criterion_1),
        ("closed-form", criterion_2),
        ("family", criterion_3),
        ("family", criterion_4),
        ("family", criterion_5),
        ("family", criterion_6),
        ("family", criterion_7),
        ("solver", criterion_8),
        ("oracle", criterion_9),
        ("green", criterion_10),
        ("oracle", criterion_11),
    ];
    all.iter()
        .filter(|(s, _)| suite == "all" || *s == suite)
        .map(|(_, f)| f())
        .collect()
}
