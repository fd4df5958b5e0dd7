//! Diagonal potentials `V_p(x) = diag(V11(x), V22(x), V33(x))` and the
//! classification used throughout: a delta potential acting on the middle
//! component, and square wells of
//!
//! - type I: all three diagonal entries equal,
//! - type II: only `V22` nonzero (couples to the flat band's 1/z pole,
//!   infinitely many levels accumulating at E = 0),
//! - type III: only `V11` nonzero (levels accumulate at E = V/2).
//!
//! Potentials are compactly supported by construction; the exteriors have
//! to be free for the exponential bound-state asymptotics to hold.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, ModelParams, Result};

/// Exclusion radius (in units of `m`) around singular energies when
/// constructing root brackets.
pub const BRACKET_EXCLUSION: f64 = 1e-9;
/// Exclusion radius (in units of `m`) for accepting a refined root.
pub const ROOT_EXCLUSION: f64 = 1e-12;

/// One constant piece of a piecewise potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x_left: f64,
    pub x_right: f64,
    pub v11: f64,
    pub v22: f64,
    pub v33: f64,
}

/// Tagged description of the diagonal potential.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `V22(x) = g delta(x)`, `V11 = V33 = 0`.
    Delta { g: f64 },
    /// Common-width well centered at the origin: each diagonal entry takes
    /// the given value on `(-a/2, a/2)` and vanishes outside.
    SquareWell { a: f64, v11: f64, v22: f64, v33: f64 },
    /// Disjoint constant segments, zero outside their union.
    PiecewiseConstant { segments: Vec<Segment> },
}

/// Classification per the potential families above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialClass {
    Delta,
    TypeI,
    TypeII,
    TypeIII,
    General,
}

impl Potential {
    pub fn delta(g: f64) -> Result<Self> {
        if g.is_finite() {
            Ok(Potential::Delta { g })
        } else {
            Err(Error::Config("delta strength must be finite"))
        }
    }

    pub fn square_well(a: f64, v11: f64, v22: f64, v33: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Config("well width must be positive"));
        }
        if ![v11, v22, v33].iter().all(|v| v.is_finite()) {
            return Err(Error::Config("well depths must be finite"));
        }
        Ok(Potential::SquareWell { a, v11, v22, v33 })
    }

    /// Segments are sorted and must be pairwise disjoint.
    pub fn piecewise(mut segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Config("piecewise potential needs at least one segment"));
        }
        for s in &segments {
            if !(s.x_right > s.x_left)
                || ![s.x_left, s.x_right, s.v11, s.v22, s.v33]
                    .iter()
                    .all(|v| v.is_finite())
            {
                return Err(Error::Config("segment bounds must be finite with x_left < x_right"));
            }
        }
        segments.sort_by(|a, b| a.x_left.partial_cmp(&b.x_left).unwrap());
        for w in segments.windows(2) {
            if w[1].x_left < w[0].x_right {
                return Err(Error::Config("segments must be disjoint"));
            }
        }
        Ok(Potential::PiecewiseConstant { segments })
    }

    /// Family classification; square wells not matching a named type are
    /// `General`, as is any multi-segment potential.
    pub fn classify(&self) -> PotentialClass {
        match self {
            Potential::Delta { .. } => PotentialClass::Delta,
            Potential::SquareWell { v11, v22, v33, .. } => {
                if v11 == v22 && v22 == v33 && *v11 != 0.0 {
                    PotentialClass::TypeI
                } else if *v11 == 0.0 && *v33 == 0.0 && *v22 != 0.0 {
                    PotentialClass::TypeII
                } else if *v22 == 0.0 && *v33 == 0.0 && *v11 != 0.0 {
                    PotentialClass::TypeIII
                } else {
                    PotentialClass::General
                }
            }
            Potential::PiecewiseConstant { .. } => PotentialClass::General,
        }
    }

    /// The potential written as explicit segments (empty for a delta).
    pub fn segments(&self) -> Vec<Segment> {
        match self {
            Potential::Delta { .. } => Vec::new(),
            Potential::SquareWell { a, v11, v22, v33 } => alloc::vec![Segment {
                x_left: -a / 2.0,
                x_right: a / 2.0,
                v11: *v11,
                v22: *v22,
                v33: *v33,
            }],
            Potential::PiecewiseConstant { segments } => segments.clone(),
        }
    }

    /// Support `[x_min, x_max]`; the delta potential is supported at 0.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Potential::Delta { .. } => (0.0, 0.0),
            Potential::SquareWell { a, .. } => (-a / 2.0, a / 2.0),
            Potential::PiecewiseConstant { segments } => (
                segments.first().map(|s| s.x_left).unwrap_or(0.0),
                segments.last().map(|s| s.x_right).unwrap_or(0.0),
            ),
        }
    }

    /// Diagonal values at position `x`; points exactly on a segment edge
    /// get the mean of the two sides (used by the lattice oracle).
    pub fn diagonal_at(&self, x: f64) -> (f64, f64, f64) {
        let mut out = (0.0, 0.0, 0.0);
        for s in self.segments() {
            if x > s.x_left && x < s.x_right {
                return (s.v11, s.v22, s.v33);
            }
            if x == s.x_left || x == s.x_right {
                out = (out.0 + 0.5 * s.v11, out.1 + 0.5 * s.v22, out.2 + 0.5 * s.v33);
            }
        }
        out
    }
}

/// Energies at which characteristic equations or matching coefficients are
/// singular; root searches never bracket across these.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularEnergySet {
    pub points: Vec<f64>,
}

impl SingularEnergySet {
    pub fn contains_within(&self, energy: f64, radius: f64) -> bool {
        self.points.iter().any(|&p| (energy - p).abs() < radius)
    }
}

/// All energies in the closed gap `[-m, m]` where the interior wave vector
/// or the matching coefficients diverge or vanish: the flat band and band
/// edges `{0, ±m}`, the `k = 0` points `v22` and `(v11 + v33)/2`, and the
/// band-shift edges `m + v11`, `v33 - m` where a matching denominator
/// vanishes.
pub fn singular_energies(p: &Potential, params: ModelParams) -> SingularEnergySet {
    let m = params.m;
    let mut points = alloc::vec![-m, 0.0, m];
    let push = |points: &mut Vec<f64>, e: f64| {
        if e >= -m && e <= m && !points.iter().any(|&q| (q - e).abs() < 1e-14 * m) {
            points.push(e);
        }
    };
    for s in p.segments() {
        push(&mut points, s.v22);
        push(&mut points, (s.v11 + s.v33) / 2.0);
        push(&mut points, m + s.v11);
        push(&mut points, s.v33 - m);
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    SingularEnergySet { points }
}
