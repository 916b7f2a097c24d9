//! Even bandwidth allocation across overlapping coding windows.
//!
//! At every time step the unit packet bandwidth is split evenly among the
//! messages whose windows contain the step. Near the horizon edges the
//! eligible set is padded with virtual *dummy* messages (index <= 0) and
//! *phantom* messages (index > n) so that every step splits the same way as in
//! the bi-infinite stream; their shares are transmission padding.

use num::{BigRational, Zero};

use crate::core::{rat, OffsetQr, Rational, SystemParams};
use crate::error::Error;

/// One time step of the allocation: the eligible message indices (dummies and
/// phantoms included, hence `i64`) and the per-message share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepAllocation {
    t: u32,
    active: Vec<i64>,
    share: Rational,
}

impl StepAllocation {
    pub fn t(&self) -> u32 {
        self.t
    }

    /// All eligible indices, ascending; entries `<= 0` are dummies and
    /// entries `> n` are phantoms.
    pub fn active(&self) -> &[i64] {
        &self.active
    }

    /// Eligible real messages `1..=n`, ascending.
    pub fn real_active(&self, n: u32) -> impl Iterator<Item = u32> + '_ {
        let n = n as i64;
        self.active
            .iter()
            .filter(move |&&k| k >= 1 && k <= n)
            .map(|&k| k as u32)
    }

    /// Share of the step's bandwidth each eligible message receives.
    pub fn share(&self) -> &Rational {
        &self.share
    }

    /// True when some eligible index is a dummy or phantom, i.e. part of the
    /// step's bandwidth is padding.
    pub fn has_virtual(&self, n: u32) -> bool {
        self.active.iter().any(|&k| k < 1 || k > n as i64)
    }
}

/// Eligible message indices at step `t`: a run of `q+1` consecutive indices
/// ending at `q_{t,c} + 1` when `r_{t,c} <= r_{d,c}`, and `q` indices
/// otherwise (`d = q*c + r` by offset division). Dummies and phantoms are
/// included; filter with [`StepAllocation::real_active`] when a table is at
/// hand.
pub fn active_messages(params: &SystemParams, t: u32) -> Result<Vec<i64>, Error> {
    if t == 0 {
        return Err(Error::TimeStepOutOfRange { t });
    }
    let OffsetQr {
        quotient: q_d,
        remainder: r_d,
    } = params.delay_split();
    let qr_t = crate::core::offset_qr(t, params.c())?;
    let last = qr_t.quotient as i64 + 1;
    let count = i64::from(if qr_t.remainder <= r_d { q_d + 1 } else { q_d });
    Ok((last - count + 1..=last).collect())
}

/// The full allocation over the horizon `1..=(n-1)c+d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationTable {
    params: SystemParams,
    steps: Vec<StepAllocation>,
}

impl AllocationTable {
    pub fn build(params: &SystemParams) -> Self {
        let steps = params
            .time_steps()
            .map(|t| {
                let active = active_messages(params, t).expect("t >= 1");
                let share = rat(1, active.len() as i64);
                StepAllocation { t, active, share }
            })
            .collect();
        AllocationTable {
            params: *params,
            steps,
        }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn steps(&self) -> &[StepAllocation] {
        &self.steps
    }

    pub fn step(&self, t: u32) -> Result<&StepAllocation, Error> {
        if t == 0 || t > self.params.horizon() {
            return Err(Error::TimeStepOutOfRange { t });
        }
        Ok(&self.steps[(t - 1) as usize])
    }

    /// Time-ordered shares message `k` receives across its window
    /// (`d` entries; sorting them ascending gives the share profile).
    pub fn message_allocation_profile(&self, k: u32) -> Result<Vec<Rational>, Error> {
        let window = self.params.coding_window(k)?;
        window
            .steps()
            .map(|t| Ok(self.step(t)?.share().clone()))
            .collect()
    }

    /// Sum of `k`'s shares over the unerased steps of its window; used by the
    /// codec as the surviving-bandwidth measure.
    pub(crate) fn surviving_bandwidth(
        &self,
        k: u32,
        erased: &crate::erasure::ErasurePattern,
    ) -> Result<Rational, Error> {
        let window = self.params.coding_window(k)?;
        let mut total = BigRational::zero();
        for t in window.steps() {
            if !erased.contains(t) {
                total += self.step(t)?.share();
            }
        }
        Ok(total)
    }
}
