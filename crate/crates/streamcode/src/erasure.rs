//! Adversarial erasure models: admissibility, enumeration, and the
//! closed-form worst-case patterns.
//!
//! All three models bound what an adversary may erase inside the horizon
//! `T_n = {1, ..., (n-1)c+d}`:
//!
//! * **coding window** — at most `z` erasures inside every message's window;
//! * **sliding window** — at most `z` inside every length-`d` window
//!   `{t, ..., t+d-1}` for `t in {1, ..., (n-1)c+1}` (a subset of the coding
//!   window family's freedom, so these patterns nest inside it);
//! * **burst** — every maximal run of consecutive erasures has length at most
//!   `z` and consecutive runs are separated by at least `d - z` unerased
//!   steps.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::core::{OffsetQr, SystemParams};
use crate::error::Error;

/// A set of erased time steps (sorted, deduplicated). Ordering is
/// lexicographic on the sorted step sequence, which is the canonical
/// enumeration order used throughout.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ErasurePattern {
    steps: BTreeSet<u32>,
}

impl ErasurePattern {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_steps<I: IntoIterator<Item = u32>>(steps: I) -> Self {
        ErasurePattern {
            steps: steps.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, t: u32) {
        self.steps.insert(t);
    }

    pub fn contains(&self, t: u32) -> bool {
        self.steps.contains(&t)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> impl Iterator<Item = u32> + '_ {
        self.steps.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.steps.iter().copied().collect()
    }

    /// True when every erased step lies in `1..=horizon`.
    pub fn within_horizon(&self, params: &SystemParams) -> bool {
        self.steps
            .iter()
            .all(|&t| t >= 1 && t <= params.horizon())
    }

    /// Number of erased steps in `lo..=hi`.
    pub fn count_in_range(&self, lo: u32, hi: u32) -> usize {
        if lo > hi {
            return 0;
        }
        self.steps.range(lo..=hi).count()
    }

    /// Intersection with an inclusive step range, as a new pattern.
    pub fn restrict(&self, lo: u32, hi: u32) -> ErasurePattern {
        ErasurePattern {
            steps: self.steps.range(lo..=hi).copied().collect(),
        }
    }

    pub fn union(&self, other: &ErasurePattern) -> ErasurePattern {
        ErasurePattern {
            steps: self.steps.union(&other.steps).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &ErasurePattern) -> bool {
        self.steps.is_subset(&other.steps)
    }

    /// Maximal runs of consecutive erased steps as `(first, last)` pairs.
    pub fn runs(&self) -> Vec<(u32, u32)> {
        let mut runs = Vec::new();
        let mut iter = self.steps.iter().copied();
        if let Some(first) = iter.next() {
            let (mut lo, mut hi) = (first, first);
            for t in iter {
                if t == hi + 1 {
                    hi = t;
                } else {
                    runs.push((lo, hi));
                    lo = t;
                    hi = t;
                }
            }
            runs.push((lo, hi));
        }
        runs
    }

    pub(crate) fn to_mask(&self) -> Option<u64> {
        let mut mask = 0u64;
        for &t in &self.steps {
            if t == 0 || t > 64 {
                return None;
            }
            mask |= 1 << (t - 1);
        }
        Some(mask)
    }

    #[cfg(test)]
    pub(crate) fn from_mask(mask: u64) -> Self {
        ErasurePattern::from_steps((0..64).filter(|b| mask & (1 << b) != 0).map(|b| b + 1))
    }
}

impl fmt::Display for ErasurePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.steps {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for ErasurePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Ok(ErasurePattern::empty());
        }
        let mut steps = BTreeSet::new();
        for part in trimmed.split(',') {
            let t: u32 = part
                .trim()
                .parse()
                .map_err(|_| Error::MalformedPattern {
                    input: s.to_string(),
                })?;
            if t == 0 {
                return Err(Error::MalformedPattern {
                    input: s.to_string(),
                });
            }
            steps.insert(t);
        }
        Ok(ErasurePattern { steps })
    }
}

/// Which family of admissible patterns the adversary draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    CodingWindow,
    SlidingWindow,
    Burst,
}

impl ModelKind {
    pub fn all() -> [ModelKind; 3] {
        [
            ModelKind::CodingWindow,
            ModelKind::SlidingWindow,
            ModelKind::Burst,
        ]
    }

    /// Short code used by the CLI and machine-readable output.
    pub fn code(&self) -> &'static str {
        match self {
            ModelKind::CodingWindow => "cw",
            ModelKind::SlidingWindow => "sw",
            ModelKind::Burst => "b",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ModelKind::CodingWindow => "coding-window",
            ModelKind::SlidingWindow => "sliding-window",
            ModelKind::Burst => "burst",
        };
        write!(f, "{name}")
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cw" | "coding-window" => Ok(ModelKind::CodingWindow),
            "sw" | "sliding-window" => Ok(ModelKind::SlidingWindow),
            "b" | "burst" => Ok(ModelKind::Burst),
            _ => Err(Error::MalformedPattern {
                input: format!("unknown model {s:?} (use cw, sw, or b)"),
            }),
        }
    }
}

/// An erasure model: a pattern family plus its budget `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ErasureModel {
    pub kind: ModelKind,
    pub z: u32,
}

impl ErasureModel {
    pub fn new(kind: ModelKind, z: u32) -> Self {
        ErasureModel { kind, z }
    }

    /// Model of the given kind with the budget taken from the parameters.
    pub fn from_params(kind: ModelKind, params: &SystemParams) -> Self {
        ErasureModel {
            kind,
            z: params.z(),
        }
    }

    pub fn admits(&self, pattern: &ErasurePattern, params: &SystemParams) -> bool {
        is_admissible(pattern, self, params)
    }
}

/// Whether `pattern` belongs to the model's family over the horizon of
/// `params`. Sets reaching outside the horizon are not members of any family,
/// so they answer `false` rather than erroring.
pub fn is_admissible(
    pattern: &ErasurePattern,
    model: &ErasureModel,
    params: &SystemParams,
) -> bool {
    if !pattern.within_horizon(params) {
        return false;
    }
    let z = model.z as usize;
    match model.kind {
        ModelKind::CodingWindow => (1..=params.n()).all(|k| {
            let w = params.coding_window(k).expect("k in range");
            pattern.count_in_range(w.start(), w.end()) <= z
        }),
        ModelKind::SlidingWindow => {
            let last_start = (params.n() - 1) * params.c() + 1;
            (1..=last_start).all(|t| pattern.count_in_range(t, t + params.d() - 1) <= z)
        }
        ModelKind::Burst => {
            let gap_needed = (params.d() - model.z.min(params.d())) as u64;
            let runs = pattern.runs();
            for (i, &(lo, hi)) in runs.iter().enumerate() {
                if (hi - lo + 1) as usize > z {
                    return false;
                }
                if i + 1 < runs.len() {
                    let gap = (runs[i + 1].0 - hi - 1) as u64;
                    if gap < gap_needed {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// Enumeration size guard. `max_horizon` bounds the horizon length for
/// exhaustive enumeration (hard ceiling [`Guard::HARD_CEILING`] regardless of
/// the requested value); `max_patterns`, when set, truncates the stream after
/// that many patterns and raises the enumerator's truncation flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_horizon: u32,
    pub max_patterns: Option<u64>,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_horizon: 20,
            max_patterns: None,
        }
    }
}

impl Guard {
    pub const HARD_CEILING: u32 = 30;

    pub fn with_horizon(max_horizon: u32) -> Self {
        Guard {
            max_horizon,
            ..Guard::default()
        }
    }

    pub(crate) fn check(&self, horizon: u32) -> Result<(), Error> {
        let effective = self.max_horizon.min(Self::HARD_CEILING);
        if horizon > effective {
            return Err(Error::GuardExceeded {
                horizon,
                guard: effective,
                ceiling: Self::HARD_CEILING,
            });
        }
        Ok(())
    }
}

/// Streaming enumerator over all admissible patterns in canonical order
/// (lexicographic on the sorted step sequence, empty pattern first).
///
/// The walk extends sets only with steps larger than their current maximum,
/// so for every model an inadmissible set can never gain an admissible
/// descendant (window counts only grow; completed runs and gaps are frozen).
/// Subtrees are pruned on that basis.
pub struct Enumerator {
    model: ErasureModel,
    params: SystemParams,
    horizon: u32,
    chain: Vec<u32>,
    cursor: Vec<u32>,
    started: bool,
    done: bool,
    truncated: bool,
    cap: Option<u64>,
    yielded: u64,
}

impl Enumerator {
    /// True when the stream stopped early because of `Guard::max_patterns`.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn patterns_yielded(&self) -> u64 {
        self.yielded
    }

    fn current(&self) -> ErasurePattern {
        ErasurePattern::from_steps(self.chain.iter().copied())
    }
}

impl Iterator for Enumerator {
    type Item = ErasurePattern;

    fn next(&mut self) -> Option<ErasurePattern> {
        if self.done {
            return None;
        }
        if let Some(cap) = self.cap {
            if self.yielded >= cap {
                self.done = true;
                self.truncated = true;
                return None;
            }
        }
        if !self.started {
            self.started = true;
            self.yielded = 1;
            return Some(ErasurePattern::empty());
        }
        loop {
            let depth = self.chain.len();
            let cand = self.cursor[depth];
            if cand > self.horizon {
                if depth == 0 {
                    self.done = true;
                    return None;
                }
                self.chain.pop();
                self.cursor.pop();
                continue;
            }
            self.cursor[depth] = cand + 1;
            self.chain.push(cand);
            let pattern = self.current();
            if is_admissible(&pattern, &self.model, &self.params) {
                self.cursor.push(cand + 1);
                self.yielded += 1;
                return Some(pattern);
            }
            self.chain.pop();
        }
    }
}

/// All admissible patterns of the model over the horizon, in canonical order.
pub fn enumerate_admissible(
    model: ErasureModel,
    params: &SystemParams,
    guard: Guard,
) -> Result<Enumerator, Error> {
    let horizon = params.horizon();
    guard.check(horizon)?;
    Ok(Enumerator {
        model,
        params: *params,
        horizon,
        chain: Vec::new(),
        cursor: vec![1],
        started: false,
        done: false,
        truncated: false,
        cap: guard.max_patterns,
        yielded: 0,
    })
}

/// The `d`-periodic pattern erasing the first `z` steps of every period:
/// `{j*d + i : j >= 0, 1 <= i <= z}` clipped to the horizon. Admissible under
/// the sliding-window and burst models for any parameters; when `c` divides
/// `d` it is the worst such pattern.
pub fn periodic_pattern(params: &SystemParams) -> ErasurePattern {
    let (d, z, horizon) = (params.d(), params.z(), params.horizon());
    let mut steps = Vec::new();
    let mut base = 0u32;
    while base < horizon {
        for i in 1..=z {
            let t = base + i;
            if t <= horizon {
                steps.push(t);
            }
        }
        base += d;
    }
    ErasurePattern::from_steps(steps)
}

/// Worst-case burst-model base pattern when `c` does not divide `d`,
/// covering the short-burst regime `z <= c - r` and the long-burst regime
/// `z >= q*c` (`d = q*c + r` by offset division). Equals the partition-based
/// base pattern. The base pattern is a cut-set witness, not necessarily
/// burst-admissible as a whole; its restriction to each coding window is
/// admissible (a single burst of `z`, or in the long regime possibly two
/// bursts totaling `z` separated by a `d - z` gap), and those restrictions
/// drive the converse bound. The in-between budget regime has no closed-form
/// worst case here and is reported as not covered.
pub fn burst_worst_case(params: &SystemParams) -> Result<ErasurePattern, Error> {
    let OffsetQr {
        quotient: q,
        remainder: r,
    } = params.delay_split();
    if r == params.c() {
        return Err(Error::BurstNeedsRemainder);
    }
    let z = params.z();
    if z <= params.c() - r || z >= q * params.c() {
        Ok(crate::partition::worst_case_base_pattern(params))
    } else {
        Err(Error::BurstNotCovered {
            z,
            short_max: params.c() - r,
            long_min: q * params.c(),
        })
    }
}

/// Closed form for the short-burst regime (`z <= c - r`): periods of length
/// `q*c` whose last `z` steps are erased, i.e.
/// `{((j+1)q - 1)c + i : j >= 0, i in {c-z+1, ..., c}}` clipped to the horizon.
#[cfg(test)]
pub(crate) fn burst_short_closed_form(params: &SystemParams) -> ErasurePattern {
    let OffsetQr { quotient: q, .. } = params.delay_split();
    let (c, z, horizon) = (params.c(), params.z(), params.horizon());
    let mut steps = Vec::new();
    for j in 0.. {
        let block = ((j + 1) * q - 1) * c;
        if block + c.saturating_sub(z) + 1 > horizon {
            break;
        }
        for i in c - z + 1..=c {
            let t = block + i;
            if t <= horizon {
                steps.push(t);
            }
        }
    }
    ErasurePattern::from_steps(steps)
}

/// Closed form for the long-burst regime (`z >= q*c`): everything is erased
/// except the first `d - z` steps of every period of length `(q+1)c`, i.e.
/// the complement of `{j(q+1)c + i : j >= 0, i in {1, ..., d-z}}`.
#[cfg(test)]
pub(crate) fn burst_long_closed_form(params: &SystemParams) -> ErasurePattern {
    let OffsetQr { quotient: q, .. } = params.delay_split();
    let (c, d, z, horizon) = (params.c(), params.d(), params.z(), params.horizon());
    let mut kept = BTreeSet::new();
    let mut base = 0u32;
    while base < horizon {
        for i in 1..=d - z {
            let t = base + i;
            if t <= horizon {
                kept.insert(t);
            }
        }
        base += (q + 1) * c;
    }
    ErasurePattern::from_steps((1..=horizon).filter(|t| !kept.contains(t)))
}
