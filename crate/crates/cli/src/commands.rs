//! The table-producing commands behind the CLI subcommands. Each returns
//! a [`Table`] so the front end only chooses the output format.

use anyhow::{bail, Result};
use num_complex::Complex64;
use serde_json::json;

use flatband_core::analytic::{find_bound_states, InteriorK};
use flatband_core::generic::interface_residual;
use flatband_core::model::{dispersion, BandIndex};
use flatband_core::potential::singular_energies;
use flatband_core::{greens, ModelParams, Potential};

use crate::potential_spec::PotentialSpec;
use crate::table::{Cell, Table};

pub const UNITS_NOTE: &str = "energies in units of m, positions in units of 1/m";

/// Inclusive grid parsed from `lo:hi:steps` (`steps` = number of points).
#[derive(Debug, Clone, Copy)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            bail!("sweep must be lo:hi:steps, got {text:?}");
        }
        let lo: f64 = parts[0].parse()?;
        let hi: f64 = parts[1].parse()?;
        let steps: usize = parts[2].parse()?;
        if !(hi > lo) || steps < 2 {
            bail!("sweep needs hi > lo and steps >= 2");
        }
        Ok(Sweep { lo, hi, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let d = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.lo + d * i as f64).collect()
    }
}

fn base_meta(table: &mut Table, command: &str, params: ModelParams) {
    table.meta("command", json!(command));
    table.meta("units", json!(UNITS_NOTE));
    table.meta("m", json!(params.m));
}

/// Band energies over a k-grid: `(k, e_lower, e_flat, e_upper)`.
pub fn cmd_dispersion(params: ModelParams, sweep: Sweep) -> Table {
    let mut t = Table::new(&["k", "e_lower", "e_flat", "e_upper"]);
    base_meta(&mut t, "dispersion", params);
    for k in sweep.points() {
        t.push(vec![
            Cell::Num(k),
            Cell::Num(dispersion(params, BandIndex::Lower, k)),
            Cell::Num(dispersion(params, BandIndex::Flat, k)),
            Cell::Num(dispersion(params, BandIndex::Upper, k)),
        ]);
    }
    t
}

/// Density of states over an energy grid: `(e, continuum_dos,
/// flat_flag)`. Grid points inside the band-edge exclusion windows are
/// skipped and the windows recorded in the metadata.
pub fn cmd_dos(params: ModelParams, sweep: Sweep) -> Table {
    let m = params.m;
    let mut t = Table::new(&["e", "continuum_dos", "flat_flag"]);
    base_meta(&mut t, "dos", params);
    let margin = 1e-9 * m;
    t.meta(
        "excluded_windows",
        json!([[-m - margin, -m + margin], [m - margin, m + margin]]),
    );
    for e in sweep.points() {
        match greens::dos(params, e) {
            Ok(v) => t.push(vec![
                Cell::Num(e),
                Cell::Num(v.continuum),
                Cell::Bool(v.flat_weight),
            ]),
            Err(_) => continue,
        }
    }
    t
}

/// Regular part of the free coordinate Green function `G_0(x, x0; E)`
/// along an x-grid at fixed energy. The formal `delta(x - x0)`
/// coefficients are reported in the metadata, never sampled.
pub fn cmd_green(params: ModelParams, energy: f64, x0: f64, sweep: Sweep) -> Result<Table> {
    let mut columns: Vec<String> = vec!["x".into()];
    for a in 1..=3 {
        for b in 1..=3 {
            columns.push(format!("re_g{a}{b}"));
            columns.push(format!("im_g{a}{b}"));
        }
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut t = Table::new(&cols);
    base_meta(&mut t, "green", params);
    t.meta("energy", json!(energy));
    t.meta("x0", json!(x0));
    let z = Complex64::new(energy, 0.0);
    let probe = greens::green_coordinate(params, x0, x0, z)
        .map_err(|e| anyhow::anyhow!("green function at E = {energy}: {e}"))?;
    let delta: Vec<Vec<[f64; 2]>> = (0..3)
        .map(|a| {
            (0..3)
                .map(|b| [probe.delta_coeff[a][b].re, probe.delta_coeff[a][b].im])
                .collect()
        })
        .collect();
    t.meta("delta_coefficients", json!(delta));
    for x in sweep.points() {
        let g = greens::green_coordinate(params, x, x0, z)
            .map_err(|e| anyhow::anyhow!("green function at x = {x}: {e}"))?;
        let mut row = vec![Cell::Num(x)];
        for a in 0..3 {
            for b in 0..3 {
                row.push(Cell::Num(g.regular[a][b].re));
                row.push(Cell::Num(g.regular[a][b].im));
            }
        }
        t.push(row);
    }
    Ok(t)
}

const BOUND_COLUMNS: [&str; 7] = ["n", "energy", "lambda", "k", "kappa", "solver", "residual"];

fn bound_row(params: ModelParams, p: &Potential, s: &flatband_core::analytic::BoundState) -> Vec<Cell> {
    let (k, kappa) = match s.interior_k {
        Some(InteriorK::Oscillatory { k }) => (Cell::Num(k), Cell::Empty),
        Some(InteriorK::Evanescent { kappa }) => (Cell::Empty, Cell::Num(kappa)),
        None => (Cell::Empty, Cell::Empty),
    };
    let residual = if matches!(p, Potential::Delta { .. }) {
        0.0
    } else {
        interface_residual(params, p, s.energy).unwrap_or(f64::NAN)
    };
    vec![
        s.family_index.map_or(Cell::Empty, |n| Cell::Int(n as i64)),
        Cell::Num(s.energy),
        Cell::Num(s.lambda),
        k,
        kappa,
        Cell::Text(s.source.label().to_string()),
        Cell::Num(residual),
    ]
}

/// Bound-state table for one potential: per-state rows `(n, energy,
/// lambda, k or kappa, solver, residual)`.
pub fn cmd_bound(
    params: ModelParams,
    spec: &PotentialSpec,
    n_max: usize,
    tol: f64,
) -> Result<Table> {
    let p = spec.build()?;
    let mut t = Table::new(&BOUND_COLUMNS);
    base_meta(&mut t, "bound", params);
    t.meta("potential", serde_json::to_value(spec)?);
    t.meta(
        "excluded_energies",
        json!(singular_energies(&p, params).points),
    );
    let table = find_bound_states(params, &p, n_max, tol)
        .map_err(|e| anyhow::anyhow!("solver failed: {e}"))?;
    t.meta("truncated", json!(table.truncated));
    if let Some(acc) = table.accumulation_point {
        t.meta("accumulation_point", json!(acc));
    }
    if let Some(lvl) = table.trivial_level {
        t.meta("trivial_flatband_level", json!(lvl));
    }
    for s in &table.states {
        t.push(bound_row(params, &p, s));
    }
    Ok(t)
}

/// Bound energies against a potential-strength sweep: every nonzero depth
/// of the base potential is replaced by the sweep value. Sweep points
/// where the solver has no valid problem (e.g. zero strength) are skipped
/// and recorded in the metadata.
pub fn cmd_bound_sweep(
    params: ModelParams,
    spec: &PotentialSpec,
    sweep: Sweep,
    n_max: usize,
    tol: f64,
) -> Result<Table> {
    let mut columns = vec!["v"];
    columns.extend(BOUND_COLUMNS);
    let mut t = Table::new(&columns);
    base_meta(&mut t, "bound-sweep", params);
    t.meta("potential_pattern", serde_json::to_value(spec)?);
    let mut excluded: Vec<f64> = Vec::new();
    let mut truncated = false;
    let mut rows = Vec::new();
    for v in sweep.points() {
        let sv = spec.with_strength(v);
        let p = match sv.build() {
            Ok(p) => p,
            Err(_) => {
                excluded.push(v);
                continue;
            }
        };
        match find_bound_states(params, &p, n_max, tol) {
            Ok(table) => {
                truncated |= table.truncated;
                for s in &table.states {
                    let mut row = vec![Cell::Num(v)];
                    row.extend(bound_row(params, &p, s));
                    rows.push(row);
                }
            }
            Err(_) => excluded.push(v),
        }
    }
    t.meta("excluded_strengths", json!(excluded));
    t.meta("truncated", json!(truncated));
    for row in rows {
        t.push(row);
    }
    Ok(t)
}
