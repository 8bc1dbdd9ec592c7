//! The channel-selection game: every transmitter puts its full power on a
//! single channel, so each player has two actions and the game is a 2x2
//! bimatrix game.

use serde::{Deserialize, Serialize};

use crate::channel::{utility_raw, ActionProfile, ChannelRealization, Player};

/// A pure channel-selection profile. `1` means channel 1, `0` channel 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u8; 2]", into = "[u8; 2]")]
pub struct Selection([u8; 2]);

impl Selection {
    /// In table order: `(1,1), (1,0), (0,1), (0,0)`.
    pub const ALL: [Selection; 4] = [
        Selection([1, 1]),
        Selection([1, 0]),
        Selection([0, 1]),
        Selection([0, 0]),
    ];

    pub fn new(alpha1: u8, alpha2: u8) -> Self {
        assert!(alpha1 <= 1 && alpha2 <= 1, "selections are binary");
        Self([alpha1, alpha2])
    }

    pub fn of(&self, k: Player) -> u8 {
        self.0[k.index()]
    }

    pub fn as_array(&self) -> [u8; 2] {
        self.0
    }

    pub fn flip(&self, k: Player) -> Self {
        let mut a = self.0;
        a[k.index()] ^= 1;
        Self(a)
    }

    pub fn swap_channels(&self) -> Self {
        Self([self.0[0] ^ 1, self.0[1] ^ 1])
    }

    pub fn swap_players(&self) -> Self {
        Self([self.0[1], self.0[0]])
    }

    pub fn to_profile(&self) -> ActionProfile {
        ActionProfile::new_unchecked(f64::from(self.0[0]), f64::from(self.0[1]))
    }
}

impl TryFrom<[u8; 2]> for Selection {
    type Error = String;

    fn try_from(a: [u8; 2]) -> Result<Self, String> {
        if a[0] > 1 || a[1] > 1 {
            return Err(format!("selection entries must be 0 or 1, got {a:?}"));
        }
        Ok(Self(a))
    }
}

impl From<Selection> for [u8; 2] {
    fn from(s: Selection) -> Self {
        s.0
    }
}

/// `payoff[a1][a2][k]`: utility of player `k` when player 1 plays `a1` and
/// player 2 plays `a2`.
pub type PayoffTable = [[[f64; 2]; 2]; 2];

pub fn payoff_table(ch: &ChannelRealization) -> PayoffTable {
    let mut table = [[[0.0; 2]; 2]; 2];
    for (a1, row) in table.iter_mut().enumerate() {
        for (a2, cell) in row.iter_mut().enumerate() {
            let (a1, a2) = (a1 as f64, a2 as f64);
            cell[0] = utility_raw(ch, Player::One, a1, a2);
            cell[1] = utility_raw(ch, Player::Two, a2, a1);
        }
    }
    table
}

fn payoff(table: &PayoffTable, s: Selection, k: Player) -> f64 {
    table[s.0[0] as usize][s.0[1] as usize][k.index()]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsOutcome {
    pub payoff: PayoffTable,
    /// In table order.
    pub equilibria: Vec<Selection>,
    /// Some unilateral deviation compared exactly equal.
    #[serde(rename = "tie")]
    pub tie_flag: bool,
}

impl CsOutcome {
    pub fn count(&self) -> usize {
        self.equilibria.len()
    }

    pub fn contains(&self, s: Selection) -> bool {
        self.equilibria.contains(&s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("finite payoffs")
    }
}

/// Every profile from which no player strictly gains by switching channel.
pub fn enumerate_cs_nash(ch: &ChannelRealization) -> CsOutcome {
    let payoff = payoff_table(ch);
    let mut tie_flag = false;
    let equilibria = Selection::ALL
        .into_iter()
        .filter(|&s| {
            Player::BOTH.iter().all(|&k| {
                let stay = self::payoff(&payoff, s, k);
                let dev = self::payoff(&payoff, s.flip(k), k);
                tie_flag |= stay == dev;
                stay >= dev
            })
        })
        .collect();
    CsOutcome {
        payoff,
        equilibria,
        tie_flag,
    }
}

/// Closed-form equilibrium test as a pair of strict gain inequalities.
///
/// Staying on channel 1 against an opponent on channel `s'` beats switching
/// exactly when `g_kk^(1) (1 + [s'=2] g_k,-k^(2)) > g_kk^(2) (1 + [s'=1] g_k,-k^(1))`;
/// the four profiles are the four sign patterns of that comparison.
pub fn cs_ne_conditions(ch: &ChannelRealization, s: Selection) -> bool {
    Player::BOTH.iter().all(|&k| {
        let other_on_1 = s.of(k.other()) == 1;
        let rate1 = ch.direct(k, 0)
            * if other_on_1 {
                1.0
            } else {
                1.0 + ch.cross(k, 1)
            };
        let rate2 = ch.direct(k, 1)
            * if other_on_1 {
                1.0 + ch.cross(k, 0)
            } else {
                1.0
            };
        if s.of(k) == 1 {
            rate1 > rate2
        } else {
            rate2 > rate1
        }
    })
}

/// One equilibrium found by exhaustive case analysis on the gains.
///
/// Instances where player 1's channel 2 is stronger are handled by
/// relabeling the channels first. Ties go to channel 1, then to `(1, 0)`.
pub fn find_one_cs_nash(ch: &ChannelRealization) -> Selection {
    if ch.direct(Player::One, 0) < ch.direct(Player::One, 1) {
        return decision_tree(&ch.swap_channels()).swap_channels();
    }
    decision_tree(ch)
}

/// Assumes `g_11^(1) >= g_11^(2)`.
fn decision_tree(ch: &ChannelRealization) -> Selection {
    let g11 = [ch.direct(Player::One, 0), ch.direct(Player::One, 1)];
    let g22 = [ch.direct(Player::Two, 0), ch.direct(Player::Two, 1)];
    let g12_1 = ch.cross(Player::One, 0);
    let g21_1 = ch.cross(Player::Two, 0);

    // Player 1 prefers channel 1 whenever player 2 is on channel 2.
    if g22[1] >= g22[0] {
        return Selection([1, 0]);
    }
    // Player 2 still avoids channel 1 when player 1 is there.
    if g22[0] <= g22[1] * (1.0 + g21_1) {
        return Selection([1, 0]);
    }
    // Player 2 goes to channel 1 regardless; player 1 best-responds to that.
    if g11[0] >= g11[1] * (1.0 + g12_1) {
        Selection([1, 1])
    } else {
        Selection([0, 1])
    }
}
