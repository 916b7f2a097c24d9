//! Partition of the horizon into `d` sets, each meeting every coding window
//! exactly once.
//!
//! Steps with the same window offset remainder recur with a fixed stride, so
//! each set is an arithmetic progression; the per-message share is constant on
//! each set. Erasing whole sets therefore removes exactly one step — of known
//! share — from every window at once, which is what makes the worst-case
//! patterns below tight.

use crate::core::{offset_qr, OffsetQr, SystemParams};
use crate::erasure::ErasurePattern;
use crate::error::Error;

/// The `d` disjoint step sets covering `1..=(n-1)c+d`; set `i` collects the
/// steps congruent to offset `i` in the window-block sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    params: SystemParams,
    sets: Vec<Vec<u32>>,
    membership: Vec<u32>,
}

impl Partition {
    /// Builds the partition from the closed-form progressions and
    /// cross-checks the per-step assignment rule in debug builds.
    pub fn build(params: &SystemParams) -> Self {
        let sets: Vec<Vec<u32>> = (1..=params.d())
            .map(|i| closed_form_set(params, i))
            .collect();
        let mut membership = vec![0u32; params.horizon() as usize];
        for (idx, set) in sets.iter().enumerate() {
            for &t in set {
                debug_assert_eq!(membership[(t - 1) as usize], 0, "sets overlap at t={t}");
                membership[(t - 1) as usize] = idx as u32 + 1;
            }
        }
        debug_assert!(membership.iter().all(|&i| i >= 1), "sets do not cover");
        let partition = Partition {
            params: *params,
            sets,
            membership,
        };
        debug_assert!(partition.matches_assignment_rule());
        partition
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// Set `i` (1-based, `i <= d`), ascending steps.
    pub fn set(&self, i: u32) -> &[u32] {
        &self.sets[(i - 1) as usize]
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    /// Index `i` of the set containing step `t`.
    pub fn set_index_of(&self, t: u32) -> Result<u32, Error> {
        if t == 0 || t > self.params.horizon() {
            return Err(Error::TimeStepOutOfRange { t });
        }
        Ok(self.membership[(t - 1) as usize])
    }

    fn matches_assignment_rule(&self) -> bool {
        self.params
            .time_steps()
            .all(|t| self.membership[(t - 1) as usize] == assign_set_index(&self.params, t))
    }
}

/// Per-step assignment rule, the scan-based counterpart of the closed forms:
/// step `t` lands in the set whose offset `i` has `r_{i,c} = r_{t,c}` and
/// `q_{i,c} = q_{t,c} mod (q+1)` (or `mod q` when `r_{t,c} > r_{d,c}`).
pub(crate) fn assign_set_index(params: &SystemParams, t: u32) -> u32 {
    let OffsetQr {
        quotient: q_d,
        remainder: r_d,
    } = params.delay_split();
    let qr_t = offset_qr(t, params.c()).expect("t >= 1");
    let blocks = if qr_t.remainder <= r_d { q_d + 1 } else { q_d };
    let q_i = qr_t.quotient % blocks;
    q_i * params.c() + qr_t.remainder
}

/// Closed form of set `i`: the arithmetic progression starting at `i` with
/// stride `(q+1)c` when `r_{i,c} <= r_{d,c}`, stride `q*c` otherwise.
fn closed_form_set(params: &SystemParams, i: u32) -> Vec<u32> {
    debug_assert!((1..=params.d()).contains(&i));
    let OffsetQr {
        quotient: q_d,
        remainder: r_d,
    } = params.delay_split();
    let qr_i = offset_qr(i, params.c()).expect("i >= 1");
    let blocks = if qr_i.remainder <= r_d { q_d + 1 } else { q_d };
    let stride = blocks * params.c();
    (0..)
        .map(|j| i + j * stride)
        .take_while(|&t| t <= params.horizon())
        .collect()
}

/// Window offsets `1..=d` ordered by ascending per-step share: first the
/// offsets whose steps are shared by `q+1` messages (share `1/(q+1)`), then
/// those shared by `q` (share `1/q`), each group ascending. Position `j` of
/// the sequence carries share-profile entry `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareOrder {
    small: Vec<u32>,
    large: Vec<u32>,
}

impl ShareOrder {
    pub fn build(params: &SystemParams) -> Self {
        let OffsetQr {
            quotient: q_d,
            remainder: r_d,
        } = params.delay_split();
        let mut small = Vec::new();
        let mut large = Vec::new();
        for i in 1..=params.d() {
            let r_i = offset_qr(i, params.c()).expect("i >= 1").remainder;
            if r_i <= r_d {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        debug_assert_eq!(small.len() as u32, (q_d + 1) * r_d);
        debug_assert_eq!(large.len() as u32, q_d * (params.c() - r_d));
        ShareOrder { small, large }
    }

    /// Offsets with the smaller share `1/(q+1)`, ascending.
    pub fn small(&self) -> &[u32] {
        &self.small
    }

    /// Offsets with the larger share `1/q`, ascending.
    pub fn large(&self) -> &[u32] {
        &self.large
    }

    /// The full order (small-share offsets, then large-share offsets).
    pub fn sequence(&self) -> Vec<u32> {
        let mut seq = self.small.clone();
        seq.extend_from_slice(&self.large);
        seq
    }
}

/// The worst-case base pattern: the union of the partition sets carrying the
/// `z` largest shares. It erases exactly `z` steps from every coding window
/// and drives every message's surviving bandwidth down to the achievable
/// rate, making the even allocation tight.
pub fn worst_case_base_pattern(params: &SystemParams) -> ErasurePattern {
    let partition = Partition::build(params);
    let seq = ShareOrder::build(params).sequence();
    let tail = &seq[seq.len() - params.z() as usize..];
    let mut steps = Vec::new();
    for &i in tail {
        steps.extend_from_slice(partition.set(i));
    }
    ErasurePattern::from_steps(steps)
}

/// Per-window restrictions `E ∩ W_k` of a base pattern, one per message.
pub fn derived_window_patterns(
    base: &ErasurePattern,
    params: &SystemParams,
) -> Vec<ErasurePattern> {
    (1..=params.n())
        .map(|k| {
            let w = params.coding_window(k).expect("k in range");
            base.restrict(w.start(), w.end())
        })
        .collect()
}
