//! JSON snapshots of a network state.
//!
//! `W0`, `b0` and `a0` are regenerated from the seed on load; the stored sign bits
//! guard against a mismatched generator. `W` is stored explicitly, row-major.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{InitSnapshot, NetworkState, Weights};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSnapshot {
    pub m: usize,
    pub d: usize,
    pub seed: u64,
    /// `'1'` for `a0_r > 0`, `'0'` otherwise.
    #[serde(rename = "a0-sign-bits")]
    pub a0_sign_bits: String,
    /// `W`, `d` rows of `m` entries.
    #[serde(rename = "W")]
    pub w: Vec<f64>,
}

impl NetworkState {
    pub fn to_snapshot(&self) -> NetworkSnapshot {
        NetworkSnapshot {
            m: self.m(),
            d: self.d(),
            seed: self.init().seed(),
            a0_sign_bits: self
                .init()
                .a0()
                .iter()
                .map(|a| if *a > 0.0 { '1' } else { '0' })
                .collect(),
            w: self.weights().as_slice().to_vec(),
        }
    }

    pub fn from_snapshot(snap: &NetworkSnapshot) -> Result<Self> {
        let init = InitSnapshot::generate(snap.m, snap.d, snap.seed)?;
        let bits: String = init
            .a0()
            .iter()
            .map(|a| if *a > 0.0 { '1' } else { '0' })
            .collect();
        if bits != snap.a0_sign_bits {
            return Err(Error::Malformed(
                "output-layer signs do not match the regenerated initialisation".into(),
            ));
        }
        let w = Weights::from_rows(snap.d, snap.m, snap.w.clone())?;
        NetworkState::from_parts(Arc::new(init), w)
    }
}
