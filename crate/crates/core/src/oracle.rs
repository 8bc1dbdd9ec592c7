//! Brute-force verification by grid search.
//!
//! Nothing here uses the closed-form best responses: every answer comes from
//! evaluating the utility on a uniform grid of power fractions and testing
//! unilateral deviations.

use crate::channel::{utility, utility_raw, ActionProfile, ChannelRealization, Player};
use crate::cs::{enumerate_cs_nash, find_one_cs_nash, Selection};
use crate::pa::{enumerate_pa_nash, PaNashSet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    grid_step: f64,
    deviation_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_step: 1e-3,
            deviation_tol: 1e-9,
        }
    }
}

impl OracleConfig {
    pub fn new(grid_step: f64, deviation_tol: f64) -> Result<Self> {
        if !(grid_step > 0.0 && grid_step <= 0.1) {
            return Err(Error::InvalidConfig(format!(
                "grid step must be in (0, 0.1], got {grid_step}"
            )));
        }
        if !(deviation_tol > 0.0 && deviation_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "deviation tolerance must be positive, got {deviation_tol}"
            )));
        }
        Ok(Self {
            grid_step,
            deviation_tol,
        })
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn deviation_tol(&self) -> f64 {
        self.deviation_tol
    }

    /// Number of grid intervals; the grid is `{i / n : i = 0..=n}`.
    pub fn intervals(&self) -> usize {
        (1.0 / self.grid_step).round().max(1.0) as usize
    }

    fn grid(&self) -> Vec<f64> {
        let n = self.intervals();
        (0..=n).map(|i| i as f64 / n as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Game {
    PowerAllocation,
    ChannelSelection,
}

/// Quantity ranking player `k`'s own actions against a fixed `other`:
/// `u_k = log2(score) - log2((1 + other x) (1 + (1 - other) y))`, so the
/// score is an increasing function of the utility. Avoids two logarithms
/// per grid point.
#[inline]
fn score(ch: &ChannelRealization, k: Player, own: f64, other: f64) -> f64 {
    (1.0 + other * ch.cross(k, 0) + own * ch.direct(k, 0))
        * (1.0 + (1.0 - other) * ch.cross(k, 1) + (1.0 - own) * ch.direct(k, 1))
}

/// Multiplicative slack on the score equivalent to `deviation_tol` bits.
fn score_slack(cfg: &OracleConfig) -> f64 {
    cfg.deviation_tol.exp2()
}

/// Argmax of the score over `n + 1` evenly spaced points of `[lo, hi]`,
/// ties to the smaller action.
fn scan_best(ch: &ChannelRealization, k: Player, other: f64, lo: f64, hi: f64, n: usize) -> f64 {
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..=n {
        let a = if i == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / n as f64
        };
        let v = score(ch, k, a, other);
        if v > best.1 {
            best = (a, v);
        }
    }
    best.0
}

/// Grid point maximizing player `k`'s utility against `alpha_other`; ties go
/// to the smaller fraction.
pub fn grid_best_response(
    ch: &ChannelRealization,
    k: Player,
    alpha_other: f64,
    cfg: &OracleConfig,
) -> f64 {
    scan_best(ch, k, alpha_other, 0.0, 1.0, cfg.intervals())
}

/// Grid best response refined by repeated zooming: the utility is concave
/// in the own action, so the maximizer lies within one cell of the best
/// grid point. Three levels take a 1e-3 grid to a few 1e-9.
pub fn refined_best_response(
    ch: &ChannelRealization,
    k: Player,
    alpha_other: f64,
    cfg: &OracleConfig,
) -> f64 {
    let n = cfg.intervals();
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = 0.0;
    for _ in 0..ZOOM_LEVELS {
        best = scan_best(ch, k, alpha_other, lo, hi, n);
        let cell = (hi - lo) / n as f64;
        lo = (best - cell).max(0.0);
        hi = (best + cell).min(1.0);
    }
    best
}

const ZOOM_LEVELS: usize = 3;

/// Deviation test against every grid action (power allocation) or against
/// switching channel (channel selection).
pub fn is_ne_by_deviation(
    ch: &ChannelRealization,
    profile: &ActionProfile,
    cfg: &OracleConfig,
    game: Game,
) -> bool {
    Player::BOTH.iter().all(|&k| {
        let own = profile.of(k);
        let other = profile.of(k.other());
        match game {
            Game::PowerAllocation => {
                let bound = score(ch, k, own, other) * score_slack(cfg);
                let n = cfg.intervals();
                (0..=n).all(|i| score(ch, k, i as f64 / n as f64, other) <= bound)
            }
            Game::ChannelSelection => {
                utility_raw(ch, k, 1.0 - own, other) <= utility(ch, k, profile) + cfg.deviation_tol
            }
        }
    })
}

/// For every grid value of the opponent's action, the grid actions of
/// player `k` within `deviation_tol` of the best grid utility.
fn grid_near_best(
    ch: &ChannelRealization,
    k: Player,
    grid: &[f64],
    cfg: &OracleConfig,
) -> Vec<Vec<u32>> {
    let slack = score_slack(cfg);
    let mut row = vec![0.0; grid.len()];
    grid.iter()
        .map(|&other| {
            let mut best = f64::NEG_INFINITY;
            for (v, &own) in row.iter_mut().zip(grid) {
                *v = score(ch, k, own, other);
                best = best.max(*v);
            }
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v * slack >= best)
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect()
}

/// Every grid profile passing the deviation test, in `(alpha_1, alpha_2)`
/// lexicographic order.
pub fn grid_pa_nash(ch: &ChannelRealization, cfg: &OracleConfig) -> Vec<ActionProfile> {
    let grid = cfg.grid();
    // near1[j]: player 1's near-best indices against alpha_2 = grid[j]
    let near1 = grid_near_best(ch, Player::One, &grid, cfg);
    let near2 = grid_near_best(ch, Player::Two, &grid, cfg);
    let mut out = Vec::new();
    for (j, cands) in near1.iter().enumerate() {
        for &i in cands {
            if near2[i as usize].contains(&(j as u32)) {
                out.push(ActionProfile::new_unchecked(grid[i as usize], grid[j]));
            }
        }
    }
    out.sort_by(|a, b| {
        a.alpha1()
            .total_cmp(&b.alpha1())
            .then(a.alpha2().total_cmp(&b.alpha2()))
    });
    out
}

/// Grid profiles that pass the deviation test, grouped into clusters of
/// points within `2 * grid_step` of each other (single linkage), one
/// centroid per cluster.
pub fn grid_clusters(ch: &ChannelRealization, cfg: &OracleConfig) -> Vec<ActionProfile> {
    cluster(&grid_pa_nash(ch, cfg), 2.0 * cfg.grid_step)
}

/// Brute-force equilibria of the power-allocation game.
///
/// Each grid cluster is located precisely by a fixed-point search on
/// `a -> BR_1(BR_2(a))` built from [`refined_best_response`], looking first
/// near the cluster and then over the whole range. A grid cluster alone can
/// sit several cells from the equilibrium it witnesses when one best
/// response is steep; the refined point does not.
pub fn brute_force_pa_nash(ch: &ChannelRealization, cfg: &OracleConfig) -> Vec<ActionProfile> {
    let mut out: Vec<ActionProfile> = Vec::new();
    for c in grid_clusters(ch, cfg) {
        let p = polish(ch, &c, cfg);
        if !out.iter().any(|q| q.distance(&p) <= 2.0 * cfg.grid_step) {
            out.push(p);
        }
    }
    out
}

const POLISH_WINDOW: f64 = 0.05;
const POLISH_SCAN: usize = 100;
const BISECTIONS: usize = 48;

fn polish(ch: &ChannelRealization, near: &ActionProfile, cfg: &OracleConfig) -> ActionProfile {
    let br2 = |a1: f64| refined_best_response(ch, Player::Two, a1, cfg);
    let gap = |a1: f64| refined_best_response(ch, Player::One, br2(a1), cfg) - a1;
    let x = near.alpha1();
    let root = find_root_near(
        &gap,
        x,
        (x - POLISH_WINDOW).max(0.0),
        (x + POLISH_WINDOW).min(1.0),
    )
    .or_else(|| find_root_near(&gap, x, 0.0, 1.0))
    .unwrap_or(x);
    ActionProfile::new_unchecked(root, br2(root))
}

/// Root of `h` in `[lo, hi]` closest to `x`: exact zeros on the scan grid or
/// sign changes refined by bisection.
fn find_root_near(h: &dyn Fn(f64) -> f64, x: f64, lo: f64, hi: f64) -> Option<f64> {
    const ZERO: f64 = 1e-12;
    let pts: Vec<f64> = (0..=POLISH_SCAN)
        .map(|i| {
            if i == POLISH_SCAN {
                hi
            } else {
                lo + (hi - lo) * i as f64 / POLISH_SCAN as f64
            }
        })
        .collect();
    let vals: Vec<f64> = pts.iter().map(|&p| h(p)).collect();
    let mut roots = Vec::new();
    for i in 0..pts.len() {
        if vals[i].abs() <= ZERO {
            roots.push(pts[i]);
        }
        if i + 1 < pts.len()
            && vals[i].abs() > ZERO
            && vals[i + 1].abs() > ZERO
            && vals[i].signum() != vals[i + 1].signum()
        {
            let (mut a, mut b, mut fa) = (pts[i], pts[i + 1], vals[i]);
            for _ in 0..BISECTIONS {
                let m = 0.5 * (a + b);
                let fm = h(m);
                if fm.abs() <= ZERO {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    roots
        .into_iter()
        .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
}

fn cluster(points: &[ActionProfile], radius: f64) -> Vec<ActionProfile> {
    let n = points.len();
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if label[start].is_some() {
            continue;
        }
        let id = clusters.len();
        label[start] = Some(id);
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let p = points[members[head]];
            head += 1;
            for q in 0..n {
                if label[q].is_none() && points[q].distance(&p) <= radius + 1e-12 {
                    label[q] = Some(id);
                    members.push(q);
                }
            }
        }
        clusters.push(members);
    }
    clusters
        .iter()
        .map(|m| {
            let len = m.len() as f64;
            let a1 = m.iter().map(|&i| points[i].alpha1()).sum::<f64>() / len;
            let a2 = m.iter().map(|&i| points[i].alpha2()).sum::<f64>() / len;
            ActionProfile::new_unchecked(a1.clamp(0.0, 1.0), a2.clamp(0.0, 1.0))
        })
        .collect()
}

/// Checks the closed-form solvers of both games against brute force on one
/// instance. Returns a description of the first disagreement.
pub fn cross_validate(
    ch: &ChannelRealization,
    cfg: &OracleConfig,
) -> std::result::Result<(), String> {
    let pa = enumerate_pa_nash(ch);
    check_pa(ch, &pa, cfg)?;
    check_cs(ch, cfg)
}

pub fn check_pa(
    ch: &ChannelRealization,
    pa: &PaNashSet,
    cfg: &OracleConfig,
) -> std::result::Result<(), String> {
    for e in pa.representatives(11) {
        if !is_ne_by_deviation(ch, &e, cfg, Game::PowerAllocation) {
            return Err(format!(
                "enumerated PA equilibrium {:?} fails the deviation test",
                e.as_array()
            ));
        }
    }
    let radius = 2.0 * cfg.grid_step;
    for c in brute_force_pa_nash(ch, cfg) {
        let d = pa.distance_to(&c);
        if d > radius {
            return Err(format!(
                "grid equilibrium {:?} is {d:.3e} away from every enumerated PA equilibrium",
                c.as_array()
            ));
        }
    }
    Ok(())
}

pub fn check_cs(ch: &ChannelRealization, cfg: &OracleConfig) -> std::result::Result<(), String> {
    let cs = enumerate_cs_nash(ch);
    for s in Selection::ALL {
        let by_deviation = is_ne_by_deviation(ch, &s.to_profile(), cfg, Game::ChannelSelection);
        if by_deviation != cs.contains(s) {
            // exact ties can sit inside the tolerance band
            if !cs.tie_flag {
                return Err(format!(
                    "CS profile {:?}: deviation test says {by_deviation}, enumeration disagrees",
                    s.as_array()
                ));
            }
        }
    }
    let one = find_one_cs_nash(ch);
    if !cs.contains(one) {
        return Err(format!(
            "decision-tree CS profile {:?} is not an equilibrium",
            one.as_array()
        ));
    }
    Ok(())
}
