//! Transfer functions mapping a continuous coordinate to a bit probability,
//! and the bit update rules that consume them.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransferKind {
    /// Sigmoid probability of the bit being set.
    #[serde(rename = "s", alias = "S")]
    SShaped,
    /// Scaled |arctan| probability of the bit flipping.
    #[serde(rename = "v", alias = "V")]
    VShaped,
}

impl TransferKind {
    pub fn transfer(self, x: f64) -> f64 {
        match self {
            TransferKind::SShaped => s_transfer(x),
            TransferKind::VShaped => v_transfer(x),
        }
    }

    /// New value of a bit currently equal to `current`, given coordinate `x`.
    pub fn next_bit<R: Rng + ?Sized>(self, x: f64, current: bool, rng: &mut R) -> bool {
        let prob = self.transfer(x);
        match self {
            TransferKind::SShaped => apply_s_rule(prob, rng),
            TransferKind::VShaped => apply_v_rule(prob, current, rng),
        }
        .expect("transfer output lies in [0, 1]")
    }

    /// Algorithm label used in result tables.
    pub fn algorithm(self) -> &'static str {
        match self {
            TransferKind::SShaped => "SBSCA",
            TransferKind::VShaped => "VBSCA",
        }
    }
}

impl fmt::Display for TransferKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransferKind::SShaped => "s",
            TransferKind::VShaped => "v",
        })
    }
}

impl FromStr for TransferKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" | "s-shaped" | "sbsca" => Ok(TransferKind::SShaped),
            "v" | "v-shaped" | "vbsca" => Ok(TransferKind::VShaped),
            other => Err(Error::InvalidParameter(format!("unknown transfer kind {other:?}"))),
        }
    }
}

/// Logistic sigmoid, evaluated without overflow for large |x|.
pub fn s_transfer(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn v_transfer(x: f64) -> f64 {
    (FRAC_2_PI * (FRAC_PI_2 * x).atan()).abs().min(1.0)
}

/// Uniform draw on (0, 1], so that probability 0 never fires and 1 always does.
fn unit_draw<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

fn check_prob(prob: f64) -> Result<()> {
    if (0.0..=1.0).contains(&prob) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(prob))
    }
}

/// Sets the bit with probability `prob`, independently of its old value.
pub fn apply_s_rule<R: Rng + ?Sized>(prob: f64, rng: &mut R) -> Result<bool> {
    check_prob(prob)?;
    Ok(unit_draw(rng) <= prob)
}

/// Flips `current` with probability `prob`.
pub fn apply_v_rule<R: Rng + ?Sized>(prob: f64, current: bool, rng: &mut R) -> Result<bool> {
    check_prob(prob)?;
    Ok(if unit_draw(rng) <= prob { !current } else { current })
}
