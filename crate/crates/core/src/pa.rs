//! The power-allocation game: closed-form best responses and exact
//! enumeration of every pure Nash equilibrium.
//!
//! Each player's best response is an affine function of the opponent's
//! power fraction, clamped to `[0, 1]`. Equilibria are the fixed points of
//! `f = BR_1 o BR_2`, a nondecreasing piecewise-affine map of `alpha_1` with
//! at most three pieces (constant, slope `c_1 c_2`, constant), so they are
//! found piece by piece in closed form.

use serde::Serialize;

use crate::channel::{interference_ratios, ActionProfile, ChannelRealization, Player};

/// Fixed points whose coordinates are all farther than this from 0 and 1
/// are interior.
pub const INTERIOR_TOL: f64 = 1e-9;
/// Fixed points closer than this (infinity norm) are the same equilibrium.
pub const MERGE_TOL: f64 = 1e-9;
/// Relative tolerance for `c_1 c_2 = 1` and for a zero offset on the middle
/// piece.
pub const UNIT_SLOPE_RTOL: f64 = 1e-12;
/// Slack allowed when deciding whether a fixed point belongs to a piece.
const PIECE_TOL: f64 = 1e-12;

/// Player `k`'s unclamped best response `alpha_k = slope * alpha_-k + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BestResponseLine {
    pub slope: f64,
    pub intercept: f64,
}

impl BestResponseLine {
    pub fn eval(&self, alpha_other: f64) -> f64 {
        self.slope * alpha_other + self.intercept
    }

    pub fn clamped(&self, alpha_other: f64) -> f64 {
        self.eval(alpha_other).clamp(0.0, 1.0)
    }
}

/// Best-response line of player `k`.
///
/// With `a, b` the direct gains and `x, y` the interference gains on
/// channels 1 and 2, the stationary point of `u_k` in `alpha_k` is
/// `-(x/a + y/b)/2 * alpha_-k + (a(1 + y) + b(a - 1)) / (2ab)`.
pub fn br_line(ch: &ChannelRealization, k: Player) -> BestResponseLine {
    let a = ch.direct(k, 0);
    let b = ch.direct(k, 1);
    let x = ch.cross(k, 0);
    let y = ch.cross(k, 1);
    BestResponseLine {
        slope: -0.5 * (x / a + y / b),
        intercept: (a * (1.0 + y) + b * (a - 1.0)) / (2.0 * a * b),
    }
}

/// The utility-maximizing power fraction of player `k` against
/// `alpha_other`. Utilities are strictly concave in the own action, so the
/// maximizer is unique.
pub fn best_response(ch: &ChannelRealization, k: Player, alpha_other: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&alpha_other));
    br_line(ch, k).clamped(alpha_other)
}

/// Both best-response lines drawn in the `(alpha_2, alpha_1)` plane as
/// `alpha_1 = m_k alpha_2 + q_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaLines {
    pub lines: [BestResponseLine; 2],
    pub m1: f64,
    pub q1: f64,
    /// `None` when player 2's best response is flat (`c_2 = 0`), i.e. the
    /// line is vertical in this plane.
    pub m2: Option<f64>,
    pub q2: Option<f64>,
}

impl GammaLines {
    pub fn new(line1: BestResponseLine, line2: BestResponseLine) -> Self {
        let (m2, q2) = if line2.slope != 0.0 {
            (
                Some(1.0 / line2.slope),
                Some(-line2.intercept / line2.slope),
            )
        } else {
            (None, None)
        };
        Self {
            lines: [line1, line2],
            m1: line1.slope,
            q1: line1.intercept,
            m2,
            q2,
        }
    }

    pub fn of(ch: &ChannelRealization) -> Self {
        Self::new(br_line(ch, Player::One), br_line(ch, Player::Two))
    }

    /// `c_1 c_2`, the slope of the middle piece of `BR_1 o BR_2`.
    pub fn slope_product(&self) -> f64 {
        self.lines[0].slope * self.lines[1].slope
    }
}

fn is_unit_slope(s: f64) -> bool {
    (s - 1.0).abs() <= UNIT_SLOPE_RTOL * s.abs().max(1.0)
}

/// Intersection of the two unclamped best-response lines, not restricted to
/// `[0, 1]^2`. `None` when the lines are parallel or coincide.
pub fn alpha_dagger(lines: &GammaLines) -> Option<[f64; 2]> {
    let [l1, l2] = lines.lines;
    let s = l1.slope * l2.slope;
    if is_unit_slope(s) {
        return None;
    }
    let den = 1.0 - s;
    Some([
        (l2.intercept * l1.slope + l1.intercept) / den,
        (l1.intercept * l2.slope + l2.intercept) / den,
    ])
}

fn in_unit_square(p: [f64; 2]) -> bool {
    p.iter().all(|a| (0.0..=1.0).contains(a))
}

/// Geometric two-equilibria condition: one coordinate of the intersection
/// sits on `{0, 1}` (within `tol`), the other in `[0, 1]`, and
/// `|m_1| > |m_2|`.
pub fn two_ne_condition(lines: &GammaLines, tol: f64) -> bool {
    let Some(dagger) = alpha_dagger(lines) else {
        return false;
    };
    let Some(m2) = lines.m2 else {
        return false;
    };
    let on_edge = |a: f64| a.abs() <= tol || (a - 1.0).abs() <= tol;
    let in_range = |a: f64| (-tol..=1.0 + tol).contains(&a);
    let edge =
        (on_edge(dagger[0]) && in_range(dagger[1])) || (on_edge(dagger[1]) && in_range(dagger[0]));
    edge && lines.m1.abs() > m2.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NashKind {
    Finite,
    Continuum,
}

/// Shape of the best-response crossing.
///
/// `A`: unique equilibrium where some player uses a single channel.
/// `B`: unique interior equilibrium. `C`: two equilibria. `D`: three.
/// `E`: a segment of equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Fig1Type {
    A,
    B,
    C,
    D,
    E,
}

/// Complete set of pure equilibria of the power-allocation game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaNashSet {
    pub kind: NashKind,
    #[serde(rename = "type")]
    pub fig1_type: Fig1Type,
    /// Isolated equilibria sorted by `alpha_1`; empty for a continuum.
    pub equilibria: Vec<ActionProfile>,
    /// Endpoints of the equilibrium segment when `kind` is `Continuum`.
    pub segment: Option<[ActionProfile; 2]>,
    pub alpha_dagger: Option<[f64; 2]>,
    /// Set when the classification hinged on a tolerance test: a unit slope,
    /// merged fixed points, or a two-equilibria configuration. These are
    /// measure-zero events under continuous fading.
    pub degenerate: bool,
}

impl PaNashSet {
    /// Number of equilibria, `None` for a continuum.
    pub fn count(&self) -> Option<usize> {
        match self.kind {
            NashKind::Finite => Some(self.equilibria.len()),
            NashKind::Continuum => None,
        }
    }

    pub fn is_unique(&self) -> bool {
        self.count() == Some(1)
    }

    /// Whether `profile` lies in the set, up to `tol` in infinity norm.
    pub fn contains(&self, profile: &ActionProfile, tol: f64) -> bool {
        self.distance_to(profile) <= tol
    }

    /// Infinity-norm distance from `profile` to the nearest equilibrium.
    pub fn distance_to(&self, profile: &ActionProfile) -> f64 {
        match (self.kind, &self.segment) {
            (NashKind::Continuum, Some([p, q])) => segment_distance(p, q, profile),
            _ => self
                .equilibria
                .iter()
                .map(|e| e.distance(profile))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Equilibria to evaluate outcomes on: the isolated points, or `samples`
    /// evenly spaced points along a continuum (endpoints included).
    pub fn representatives(&self, samples: usize) -> Vec<ActionProfile> {
        match (self.kind, &self.segment) {
            (NashKind::Continuum, Some([p, q])) => {
                let n = samples.max(2) - 1;
                (0..=n)
                    .map(|i| {
                        let t = i as f64 / n as f64;
                        let a1 = p.alpha1() + t * (q.alpha1() - p.alpha1());
                        let a2 = p.alpha2() + t * (q.alpha2() - p.alpha2());
                        ActionProfile::new_unchecked(a1.clamp(0.0, 1.0), a2.clamp(0.0, 1.0))
                    })
                    .collect()
            }
            _ => self.equilibria.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("finite values")
    }
}

fn segment_distance(p: &ActionProfile, q: &ActionProfile, x: &ActionProfile) -> f64 {
    // The infinity-norm distance to a segment is convex along it; a fine
    // scan plus the endpoints is plenty for the tolerances used here.
    let steps = 4096;
    (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            let a1 = p.alpha1() + t * (q.alpha1() - p.alpha1());
            let a2 = p.alpha2() + t * (q.alpha2() - p.alpha2());
            (a1 - x.alpha1()).abs().max((a2 - x.alpha2()).abs())
        })
        .fold(f64::INFINITY, f64::min)
}

enum Piece {
    Constant(f64),
    Affine { slope: f64, offset: f64 },
}

/// All pure equilibria of the power-allocation game, classified.
pub fn enumerate_pa_nash(ch: &ChannelRealization) -> PaNashSet {
    enumerate_from_lines(&GammaLines::of(ch))
}

/// Fixed points of `alpha_1 = clamp(c_1 clamp(c_2 alpha_1 + d_2) + d_1)`.
pub fn enumerate_from_lines(lines: &GammaLines) -> PaNashSet {
    let [br1, br2] = lines.lines;
    let (c1, d1, c2, d2) = (br1.slope, br1.intercept, br2.slope, br2.intercept);
    let slope = c1 * c2;
    let offset = c1 * d2 + d1;
    let dagger = alpha_dagger(lines);
    let mut degenerate = false;

    let mut breaks = vec![0.0, 1.0];
    if c2 != 0.0 {
        breaks.push(-d2 / c2);
        breaks.push((1.0 - d2) / c2);
    }
    if slope != 0.0 {
        breaks.push(-offset / slope);
        breaks.push((1.0 - offset) / slope);
    }
    breaks.retain(|x| x.is_finite() && (0.0..=1.0).contains(x));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let mut fixed: Vec<f64> = Vec::new();
    let mut continuum: Option<(f64, f64)> = None;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let inner = c2 * mid + d2;
        let piece = if !(0.0..=1.0).contains(&inner) {
            Piece::Constant(br1.clamped(inner.clamp(0.0, 1.0)))
        } else {
            let outer = c1 * inner + d1;
            if !(0.0..=1.0).contains(&outer) {
                Piece::Constant(outer.clamp(0.0, 1.0))
            } else {
                Piece::Affine { slope, offset }
            }
        };
        match piece {
            Piece::Constant(v) => {
                if v >= lo - PIECE_TOL && v <= hi + PIECE_TOL {
                    fixed.push(v.clamp(0.0, 1.0));
                }
            }
            Piece::Affine { slope, offset } => {
                if is_unit_slope(slope) {
                    degenerate = true;
                    let scale = d1.abs().max((c1 * d2).abs()).max(1.0);
                    if offset.abs() <= UNIT_SLOPE_RTOL * scale {
                        continuum = Some(match continuum {
                            Some((a, _)) => (a, hi),
                            None => (lo, hi),
                        });
                    }
                } else {
                    let x = offset / (1.0 - slope);
                    if x >= lo - PIECE_TOL && x <= hi + PIECE_TOL {
                        fixed.push(x.clamp(0.0, 1.0));
                    }
                }
            }
        }
    }

    let profile_at = |a1: f64| ActionProfile::new_unchecked(a1, br2.clamped(a1));

    if let Some((lo, hi)) = continuum {
        return PaNashSet {
            kind: NashKind::Continuum,
            fig1_type: Fig1Type::E,
            equilibria: Vec::new(),
            segment: Some([profile_at(lo), profile_at(hi)]),
            alpha_dagger: dagger,
            degenerate: true,
        };
    }

    let mut equilibria: Vec<ActionProfile> = Vec::with_capacity(3);
    fixed.sort_by(f64::total_cmp);
    for a1 in fixed {
        let p = profile_at(a1);
        if equilibria.iter().any(|e| e.distance(&p) < MERGE_TOL) {
            degenerate = true;
        } else {
            equilibria.push(p);
        }
    }

    let fig1_type = match equilibria.len() {
        1 => {
            let interior = equilibria[0]
                .as_array()
                .iter()
                .all(|&a| a.min(1.0 - a) > INTERIOR_TOL);
            if interior {
                Fig1Type::B
            } else {
                Fig1Type::A
            }
        }
        2 => {
            degenerate = true;
            Fig1Type::C
        }
        3 => Fig1Type::D,
        n => unreachable!(
            "a nondecreasing three-piece map has 1 to 3 isolated fixed points, got {n}"
        ),
    };

    PaNashSet {
        kind: NashKind::Finite,
        fig1_type,
        equilibria,
        segment: None,
        alpha_dagger: dagger,
        degenerate,
    }
}

/// Sufficient-and-necessary uniqueness tests evaluated on an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UniquenessConditions {
    /// `(rho_1^(1) + rho_1^(2)) (rho_2^(1) + rho_2^(2)) < 4`.
    pub cond_a: bool,
    /// The line intersection is missing or lies outside `[0, 1]^2`.
    pub cond_b: bool,
}

impl UniquenessConditions {
    pub fn any(&self) -> bool {
        self.cond_a || self.cond_b
    }
}

pub fn uniqueness_conditions(ch: &ChannelRealization) -> UniquenessConditions {
    let rho = interference_ratios(ch);
    let cond_a = rho.sum(Player::One) * rho.sum(Player::Two) < 4.0;
    let cond_b = match alpha_dagger(&GammaLines::of(ch)) {
        None => true,
        Some(d) => !in_unit_square(d),
    };
    UniquenessConditions { cond_a, cond_b }
}
