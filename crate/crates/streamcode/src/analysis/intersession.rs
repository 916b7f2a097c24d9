//! A fixed cross-message reference code demonstrating that coding across
//! messages beats any within-message allocation on the same parameters.
//!
//! For `(c, d, z, n) = (1, 3, 1, 3)` the best within-message scheme reaches
//! rate 6/7 (the exact finite-horizon optimum), while the five-packet code
//!
//! ```text
//! X1 = M1,  X2 = M2,  X3 = M1 ^ M2,  X4 = M3,  X5 = M1 ^ M2 ^ M3
//! ```
//!
//! delivers rate 1: every message is recoverable by its deadline from the
//! packets surviving any admissible single-erasure-per-window pattern.

use crate::core::{rat_int, Rational, SystemParams};
use crate::erasure::{enumerate_admissible, ErasureModel, ErasurePattern, Guard, ModelKind};
use crate::error::Error;

/// Per-packet message combinations, as bitmasks over `{M1, M2, M3}`.
const COMBINATIONS: [u8; 5] = [0b001, 0b010, 0b011, 0b100, 0b111];

/// The fixed `(1, 3, 1, 3)` cross-message code.
#[derive(Debug, Clone)]
pub struct ReferenceCode {
    params: SystemParams,
}

/// The reference code on its fixed parameters.
pub fn intersession_reference_code() -> ReferenceCode {
    ReferenceCode {
        params: SystemParams::new(1, 3, 1, 3).expect("fixed parameters are valid"),
    }
}

impl ReferenceCode {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// One full message per step: rate 1, above the intrasession optimum 6/7.
    pub fn rate(&self) -> Rational {
        rat_int(1)
    }

    /// Message `k` must decode from packets received by step `k + 2` (the
    /// end of its creation window plus the delay).
    pub fn deadline(&self, k: u32) -> u32 {
        k + 2
    }

    /// Encode three equal-length messages into five packets, one per step.
    pub fn encode(&self, messages: &[Vec<u8>]) -> Result<Vec<Vec<u8>>, Error> {
        if messages.len() != 3 {
            return Err(Error::WrongMessageCount {
                expected: 3,
                got: messages.len(),
            });
        }
        let len = messages[0].len();
        for (idx, m) in messages.iter().enumerate() {
            if m.len() != len {
                return Err(Error::WrongMessageLength {
                    index: idx + 1,
                    expected: len,
                    got: m.len(),
                });
            }
        }
        Ok(COMBINATIONS
            .iter()
            .map(|&mask| {
                let mut packet = vec![0u8; len];
                for (k, message) in messages.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        for (p, &b) in packet.iter_mut().zip(message) {
                            *p ^= b;
                        }
                    }
                }
                packet
            })
            .collect())
    }

    /// Recover message `k` from received `(t, payload)` pairs, using only
    /// packets at or before its deadline. Returns `None` when the surviving
    /// combinations do not span it.
    pub fn decode(&self, received: &[(u32, Vec<u8>)], k: u32) -> Option<Vec<u8>> {
        if !(1..=3).contains(&k) {
            return None;
        }
        let deadline = self.deadline(k);
        let mut rows: Vec<(u8, Vec<u8>)> = received
            .iter()
            .filter(|(t, _)| (1..=deadline).contains(t))
            .map(|(t, payload)| (COMBINATIONS[(*t - 1) as usize], payload.clone()))
            .collect();

        // Eliminate over GF(2): reduce rows to echelon form by leading bit,
        // then express the unit vector for message k.
        let mut pivots: Vec<(u8, usize)> = Vec::new(); // (leading bit, row)
        for r in 0..rows.len() {
            let mut mask = rows[r].0;
            let mut payload = std::mem::take(&mut rows[r].1);
            for &(bit, pr) in &pivots {
                if mask & bit != 0 {
                    mask ^= rows[pr].0;
                    let other = rows[pr].1.clone();
                    for (a, b) in payload.iter_mut().zip(&other) {
                        *a ^= b;
                    }
                }
            }
            rows[r] = (mask, payload);
            if mask != 0 {
                let bit = 1u8 << (7 - mask.leading_zeros()); // highest set bit
                pivots.push((bit, r));
                pivots.sort_by(|a, b| b.0.cmp(&a.0));
            }
        }

        let mut target = 1u8 << (k - 1);
        let len = received.first().map(|(_, p)| p.len()).unwrap_or(0);
        let mut answer = vec![0u8; len];
        for &(bit, pr) in &pivots {
            if target & bit != 0 {
                target ^= rows[pr].0;
                for (a, b) in answer.iter_mut().zip(&rows[pr].1) {
                    *a ^= b;
                }
            }
        }
        if target == 0 && !received.is_empty() {
            Some(answer)
        } else {
            None
        }
    }

    /// Check one erasure pattern: encode distinct test messages, drop the
    /// erased packets, and decode each message by its deadline. `Err(k)`
    /// names the first message that fails.
    pub fn check_pattern(&self, pattern: &ErasurePattern) -> Result<(), u32> {
        let messages: Vec<Vec<u8>> = (0..3u32)
            .map(|k| (0..8u32).map(|j| (k * 73 + j * 19 + 1) as u8).collect())
            .collect();
        let packets = self.encode(&messages).expect("fixed messages are valid");
        let received: Vec<(u32, Vec<u8>)> = packets
            .into_iter()
            .enumerate()
            .map(|(idx, p)| (idx as u32 + 1, p))
            .filter(|(t, _)| !pattern.contains(*t))
            .collect();
        for k in 1..=3u32 {
            match self.decode(&received, k) {
                Some(m) if m == messages[(k - 1) as usize] => {}
                _ => return Err(k),
            }
        }
        Ok(())
    }

    /// Exhaustively check every admissible pattern of the per-window model.
    /// Returns the number of patterns on success, or the first failing
    /// pattern and message.
    pub fn verify_all_patterns(&self) -> Result<u64, (ErasurePattern, u32)> {
        let model = ErasureModel::from_params(ModelKind::CodingWindow, &self.params);
        let mut count = 0;
        for pattern in enumerate_admissible(model, &self.params, Guard::default())
            .expect("fixed horizon of 5 is within the guard")
        {
            if let Err(k) = self.check_pattern(&pattern) {
                return Err((pattern, k));
            }
            count += 1;
        }
        Ok(count)
    }
}
