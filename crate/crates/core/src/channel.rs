//! Game instances and the spectral-efficiency utility.
//!
//! An instance is fully described by the eight normalized gains
//! `g[j][k][s] = p_k,max |h_jk^(s)|^2 / sigma_j^(s)^2` (receiver `j`,
//! transmitter `k`, channel `s`, all 0-based here). Maximum powers are fixed
//! to 1 and every noise power to `1 / snr`, so the utility depends on the
//! instance only through `g`.

use std::f64::consts::LN_2;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One of the two transmitter-receiver pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

/// Fractions of maximum power each player puts on channel 1; channel 2 gets
/// the rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct ActionProfile {
    alpha: [f64; 2],
}

impl ActionProfile {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        for a in [alpha1, alpha2] {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidAction(a));
            }
        }
        Ok(Self {
            alpha: [alpha1, alpha2],
        })
    }

    /// Builds a profile from values already known to lie in `[0, 1]`.
    pub(crate) fn new_unchecked(alpha1: f64, alpha2: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&alpha1) && (0.0..=1.0).contains(&alpha2));
        Self {
            alpha: [alpha1, alpha2],
        }
    }

    /// Profile given one player's action and the other's.
    pub fn from_actions(k: Player, own: f64, other: f64) -> Result<Self> {
        match k {
            Player::One => Self::new(own, other),
            Player::Two => Self::new(other, own),
        }
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha[0]
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha[1]
    }

    pub fn of(&self, k: Player) -> f64 {
        self.alpha[k.index()]
    }

    pub fn as_array(&self) -> [f64; 2] {
        self.alpha
    }

    /// Same profile seen after relabeling channel 1 as channel 2.
    pub fn swap_channels(&self) -> Self {
        Self {
            alpha: [1.0 - self.alpha[0], 1.0 - self.alpha[1]],
        }
    }

    pub fn swap_players(&self) -> Self {
        Self {
            alpha: [self.alpha[1], self.alpha[0]],
        }
    }

    /// Infinity-norm distance between two profiles.
    pub fn distance(&self, other: &ActionProfile) -> f64 {
        (self.alpha[0] - other.alpha[0])
            .abs()
            .max((self.alpha[1] - other.alpha[1]).abs())
    }
}

impl TryFrom<[f64; 2]> for ActionProfile {
    type Error = Error;

    fn try_from(a: [f64; 2]) -> Result<Self> {
        Self::new(a[0], a[1])
    }
}

impl From<ActionProfile> for [f64; 2] {
    fn from(p: ActionProfile) -> Self {
        p.alpha
    }
}

/// Raw gain array indexed `[receiver][transmitter][channel]`.
pub type Gains = [[[f64; 2]; 2]; 2];

#[derive(Debug, Deserialize, Serialize)]
struct InstanceFile {
    g: Gains,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// The eight normalized channel gains of one game instance.
///
/// Construction guarantees every gain is finite and nonnegative and every
/// direct gain `g[k][k][s]` is strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct ChannelRealization {
    g: Gains,
    label: Option<String>,
}

impl ChannelRealization {
    pub fn new(g: Gains) -> Result<Self> {
        for (j, rx) in g.iter().enumerate() {
            for (k, tx) in rx.iter().enumerate() {
                for (s, &value) in tx.iter().enumerate() {
                    if !value.is_finite() || value < 0.0 {
                        return Err(Error::InvalidGain {
                            receiver: j,
                            transmitter: k,
                            channel: s,
                            value,
                        });
                    }
                }
            }
        }
        for k in 0..2 {
            for s in 0..2 {
                if g[k][k][s] == 0.0 {
                    return Err(Error::DegenerateInstance {
                        player: k,
                        channel: s,
                    });
                }
            }
        }
        Ok(Self { g, label: None })
    }

    /// Builds an instance from per-player `(direct, cross)` gain pairs:
    /// `direct[k][s] = g[k][k][s]` and `cross[k][s] = g[k][-k][s]`, the
    /// interference received by player `k` from the other transmitter.
    pub fn from_links(direct: [[f64; 2]; 2], cross: [[f64; 2]; 2]) -> Result<Self> {
        Self::new([[direct[0], cross[0]], [cross[1], direct[1]]])
    }

    /// Both players see direct gain `direct` and cross gain `cross` on both
    /// channels.
    pub fn symmetric(direct: f64, cross: f64) -> Result<Self> {
        Self::from_links([[direct; 2]; 2], [[cross; 2]; 2])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // parse the raw layout first so validation errors keep their variant
        let file: InstanceFile = serde_json::from_str(text)?;
        Self::try_from(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("gains are finite")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn gains(&self) -> &Gains {
        &self.g
    }

    /// `g[j][k][s]` with 0-based indices.
    pub fn gain(&self, receiver: Player, transmitter: Player, channel: usize) -> f64 {
        self.g[receiver.index()][transmitter.index()][channel]
    }

    /// Direct gain `g[k][k][s]`.
    pub fn direct(&self, k: Player, channel: usize) -> f64 {
        self.gain(k, k, channel)
    }

    /// Interference gain `g[k][-k][s]` seen at receiver `k`.
    pub fn cross(&self, k: Player, channel: usize) -> f64 {
        self.gain(k, k.other(), channel)
    }

    /// The instance with channels 1 and 2 relabeled.
    pub fn swap_channels(&self) -> Self {
        let mut g = self.g;
        for rx in g.iter_mut() {
            for tx in rx.iter_mut() {
                tx.swap(0, 1);
            }
        }
        Self {
            g,
            label: self.label.clone(),
        }
    }

    /// The instance with players 1 and 2 relabeled.
    pub fn swap_players(&self) -> Self {
        let g = self.g;
        Self {
            g: [[g[1][1], g[1][0]], [g[0][1], g[0][0]]],
            label: self.label.clone(),
        }
    }
}

impl TryFrom<InstanceFile> for ChannelRealization {
    type Error = Error;

    fn try_from(file: InstanceFile) -> Result<Self> {
        let mut ch = Self::new(file.g)?;
        ch.label = file.label;
        Ok(ch)
    }
}

impl From<ChannelRealization> for InstanceFile {
    fn from(ch: ChannelRealization) -> Self {
        InstanceFile {
            g: ch.g,
            label: ch.label,
        }
    }
}

/// Draws an instance with i.i.d. Rayleigh fading on all eight links.
///
/// `|h|^2` of a unit-variance circularly-symmetric complex Gaussian is
/// exponential with mean 1, so each gain is `snr * Exp(1)`. Draws of exactly
/// zero on a direct link are redrawn.
pub fn sample_channel<R: Rng + ?Sized>(rng: &mut R, snr: f64) -> ChannelRealization {
    assert!(
        snr > 0.0 && snr.is_finite(),
        "snr must be positive, got {snr}"
    );
    let mut g: Gains = [[[0.0; 2]; 2]; 2];
    for (j, rx) in g.iter_mut().enumerate() {
        for (k, tx) in rx.iter_mut().enumerate() {
            for gain in tx.iter_mut() {
                *gain = loop {
                    let e: f64 = Exp1.sample(rng);
                    let value = snr * e;
                    if j != k || value > 0.0 {
                        break value;
                    }
                };
            }
        }
    }
    ChannelRealization { g, label: None }
}

#[inline]
fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

/// Individual spectral efficiency of player `k` in bits/s/Hz, treating
/// interference as noise.
pub fn utility(ch: &ChannelRealization, k: Player, profile: &ActionProfile) -> f64 {
    utility_raw(ch, k, profile.of(k), profile.of(k.other()))
}

/// [`utility`] with the two actions passed directly.
#[inline]
pub fn utility_raw(ch: &ChannelRealization, k: Player, own: f64, other: f64) -> f64 {
    let sinr1 = own * ch.direct(k, 0) / (1.0 + other * ch.cross(k, 0));
    let sinr2 = (1.0 - own) * ch.direct(k, 1) / (1.0 + (1.0 - other) * ch.cross(k, 1));
    log2_1p(sinr1) + log2_1p(sinr2)
}

/// System spectral efficiency: the sum of both individual utilities.
pub fn sum_utility(ch: &ChannelRealization, profile: &ActionProfile) -> f64 {
    utility(ch, Player::One, profile) + utility(ch, Player::Two, profile)
}

/// Interference-to-direct gain ratios `rho[k][s] = g[k][-k][s] / g[k][k][s]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceRatios {
    pub rho: [[f64; 2]; 2],
}

impl InterferenceRatios {
    /// `rho[k][0] + rho[k][1]`.
    pub fn sum(&self, k: Player) -> f64 {
        self.rho[k.index()][0] + self.rho[k.index()][1]
    }
}

pub fn interference_ratios(ch: &ChannelRealization) -> InterferenceRatios {
    let mut rho = [[0.0; 2]; 2];
    for k in Player::BOTH {
        for s in 0..2 {
            rho[k.index()][s] = ch.cross(k, s) / ch.direct(k, s);
        }
    }
    InterferenceRatios { rho }
}
