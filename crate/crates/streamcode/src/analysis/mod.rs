//! Rate analysis: cut-set bounds, closed-form lower/upper bounds per erasure
//! model, exhaustive decodability verification, the exact rational program
//! for finite-horizon optima, and the cross-message reference code showing
//! the cost of coding only within messages.

mod intersession;
pub mod lp;

pub use intersession::{intersession_reference_code, ReferenceCode};
pub use lp::{solve_intrasession_lp, LpShare, LpSolution};

use crate::core::{rat, rat_int, rational_string, Rational, SystemParams};
use crate::erasure::{ErasureModel, ErasurePattern, Guard, ModelKind};
use crate::error::Error;
use num::ToPrimitive;
use serde::{Serialize, Serializer};

fn ser_rational<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(v))
}

fn ser_display<S: Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Lower and upper bounds on the optimal rate for one parameter set and
/// erasure model. `lower` is achieved by the share-based construction for
/// every session length; `upper` holds for any scheme; `asymptotic` is their
/// common limit as the session grows, so `gap = upper - lower` vanishes
/// at speed `1/n`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub c: u32,
    pub d: u32,
    pub z: u32,
    pub n: u32,
    #[serde(serialize_with = "ser_display")]
    pub model: ModelKind,
    #[serde(serialize_with = "ser_rational")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub asymptotic: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub gap: Rational,
}

/// The cut-set bound induced by one erasure pattern: no scheme can average
/// more than `|unerased steps| / n` per message against an adversary that
/// plays `pattern`.
pub fn cutset_upper_bound(params: &SystemParams, pattern: &ErasurePattern) -> Rational {
    let horizon = params.horizon();
    let surviving = horizon as usize - pattern.count_in_range(1, horizon);
    rat(surviving as i64, params.n() as i64)
}

/// Closed-form rate bounds for the given model.
///
/// The burst model without the divisibility `c | d` only has a matching
/// closed form in the short-burst and long-burst regimes; between them this
/// reports [`Error::BurstNotCovered`].
pub fn rate_bounds(params: &SystemParams, kind: ModelKind) -> Result<BoundReport, Error> {
    let (c, d, z, n) = (params.c(), params.d(), params.z(), params.n());
    let lower = params.achievable_rate();
    let dz = (d - z) as i64;
    let cw_upper = &lower + rat(2 * dz, n as i64);
    let divides = params.delay_split().remainder == c;
    let upper = match kind {
        ModelKind::CodingWindow => cw_upper,
        ModelKind::SlidingWindow => {
            if divides {
                rat(dz, d as i64) * (rat_int(c as u64) + rat(2 * d as i64 - c as i64, n as i64))
            } else {
                cw_upper
            }
        }
        ModelKind::Burst => {
            if divides {
                rat(dz, d as i64) * (rat_int(c as u64) + rat(2 * d as i64 - c as i64, n as i64))
            } else {
                let qr = params.delay_split();
                let (short_max, long_min) = (c - qr.remainder, qr.quotient * c);
                if z <= short_max || z >= long_min {
                    cw_upper
                } else {
                    return Err(Error::BurstNotCovered {
                        z,
                        short_max,
                        long_min,
                    });
                }
            }
        }
    };
    let gap = &upper - &lower;
    Ok(BoundReport {
        c,
        d,
        z,
        n,
        model: kind,
        lower: lower.clone(),
        upper,
        asymptotic: lower,
        gap,
    })
}

/// Outcome of exhaustively checking decodability against a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every admissible pattern leaves every message at least the target
    /// rate of surviving bandwidth.
    Verified { patterns_checked: u64 },
    /// The first (in canonical order) admissible pattern that starves some
    /// message below the target.
    CounterExample {
        pattern: ErasurePattern,
        message: u32,
        surviving: Rational,
        required: Rational,
    },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Verified { patterns_checked } => {
                write!(f, "verified ({patterns_checked} patterns)")
            }
            Verdict::CounterExample {
                pattern,
                message,
                surviving,
                required,
            } => write!(
                f,
                "counterexample: erasing {{{pattern}}} leaves message {message} \
                 with {surviving} < {required}"
            ),
        }
    }
}

/// Exhaustively verify that the share allocation meets its designed rate:
/// under every admissible pattern of `model`, every message retains at least
/// [`SystemParams::achievable_rate`] of surviving bandwidth.
///
/// The guard's horizon limit applies (the search is exponential in the
/// horizon); its pattern cap does not, since a partial search proves nothing.
pub fn verify_construction(
    params: &SystemParams,
    model: &ErasureModel,
    guard: &Guard,
) -> Result<Verdict, Error> {
    verify_construction_at_rate(params, model, &params.achievable_rate(), guard)
}

/// Like [`verify_construction`] but for an arbitrary target rate, which makes
/// tightness visible: any rate above the achievable one yields a
/// counterexample.
pub fn verify_construction_at_rate(
    params: &SystemParams,
    model: &ErasureModel,
    rate: &Rational,
    guard: &Guard,
) -> Result<Verdict, Error> {
    guard.check(params.horizon())?;

    // With no erasures every message keeps its full window bandwidth c; a
    // target above that fails on the empty pattern.
    let full = rat_int(params.c() as u64);
    if full < *rate {
        return Ok(Verdict::CounterExample {
            pattern: ErasurePattern::empty(),
            message: 1,
            surviving: full,
            required: rate.clone(),
        });
    }

    // Shares are 1/(q+1) and 1/q; scaling by q(q+1) turns all bookkeeping
    // into cheap integer arithmetic inside the search.
    let q = params.delay_split().quotient as i64;
    let scale = q * (q + 1);
    let scaled_rate = rate * Rational::from_integer(scale.into());
    let s_min = scaled_rate
        .ceil()
        .to_integer()
        .to_i64()
        .expect("bounded by c * scale");

    let t_max = params.horizon();
    let n = params.n();
    let mut share_scaled = vec![0i64; t_max as usize + 1];
    let mut real_range = vec![(1u32, 0u32); t_max as usize + 1];
    for t in 1..=t_max {
        let active = crate::allocation::active_messages(params, t)?;
        share_scaled[t as usize] = scale / active.len() as i64;
        let lo = (*active.first().expect("nonempty")).max(1) as u32;
        let hi = (*active.last().expect("nonempty")).min(n as i64) as u32;
        real_range[t as usize] = (lo, hi); // empty range when lo > hi
    }

    let sw_last_start = (n - 1) * params.c() + 1;
    let mut run = VerifyRun {
        kind: model.kind,
        z: model.z as usize,
        d: params.d(),
        gap_needed: params.d().saturating_sub(model.z),
        t_max,
        s_min,
        share_scaled,
        real_range,
        sw_last_start,
        cw_cnt: vec![0usize; n as usize + 1],
        sw_cnt: vec![0usize; sw_last_start as usize + 1],
        surv: vec![params.c() as i64 * scale; n as usize + 1],
        chain: Vec::new(),
        run_prev: 0,
        run_len: 0,
        checked: 1, // the empty pattern, vacuously fine after the check above
        failure: None,
    };
    run.explore(1);

    Ok(match run.failure {
        None => Verdict::Verified {
            patterns_checked: run.checked,
        },
        Some((pattern, message, surviving)) => Verdict::CounterExample {
            pattern,
            message,
            surviving: rat(surviving, scale),
            required: rate.clone(),
        },
    })
}

struct VerifyRun {
    kind: ModelKind,
    z: usize,
    d: u32,
    gap_needed: u32,
    t_max: u32,
    s_min: i64,
    share_scaled: Vec<i64>,
    real_range: Vec<(u32, u32)>,
    sw_last_start: u32,
    cw_cnt: Vec<usize>,
    sw_cnt: Vec<usize>,
    surv: Vec<i64>,
    chain: Vec<u32>,
    run_prev: u32,
    run_len: usize,
    checked: u64,
    failure: Option<(ErasurePattern, u32, i64)>,
}

impl VerifyRun {
    /// Depth-first walk over admissible patterns in canonical order. Sets
    /// are extended only with steps past their maximum, so window counts,
    /// completed runs, and completed gaps are frozen: an inadmissible
    /// extension can be pruned with its whole subtree, for every model.
    fn explore(&mut self, from: u32) {
        for t in from..=self.t_max {
            if !self.admissible_with(t) {
                continue;
            }
            let saved = (self.run_prev, self.run_len);
            self.apply(t);
            self.checked += 1;
            if let Some(k) = self.starved_at(t) {
                self.failure = Some((
                    ErasurePattern::from_steps(self.chain.iter().copied()),
                    k,
                    self.surv[k as usize],
                ));
            } else {
                self.explore(t + 1);
            }
            self.undo(t, saved);
            if self.failure.is_some() {
                return;
            }
        }
    }

    fn admissible_with(&self, t: u32) -> bool {
        match self.kind {
            ModelKind::CodingWindow => {
                let (lo, hi) = self.real_range[t as usize];
                (lo..=hi).all(|k| self.cw_cnt[k as usize] < self.z)
            }
            ModelKind::SlidingWindow => {
                let (lo, hi) = self.sliding_windows_touching(t);
                (lo..=hi).all(|s| self.sw_cnt[s as usize] < self.z)
            }
            ModelKind::Burst => {
                if self.run_len == 0 || t > self.run_prev + 1 {
                    // starts a new run of length 1
                    if self.z == 0 {
                        return false;
                    }
                    if self.run_len > 0 {
                        let gap = t - self.run_prev - 1;
                        if gap < self.gap_needed {
                            return false;
                        }
                    }
                    true
                } else {
                    self.run_len < self.z
                }
            }
        }
    }

    /// Start indices of the sliding windows `{s, ..., s+d-1}` containing `t`.
    fn sliding_windows_touching(&self, t: u32) -> (u32, u32) {
        let lo = (t + 1).saturating_sub(self.d).max(1);
        (lo, t.min(self.sw_last_start))
    }

    fn apply(&mut self, t: u32) {
        self.chain.push(t);
        let (lo, hi) = self.real_range[t as usize];
        for k in lo..=hi {
            self.surv[k as usize] -= self.share_scaled[t as usize];
        }
        match self.kind {
            ModelKind::CodingWindow => {
                for k in lo..=hi {
                    self.cw_cnt[k as usize] += 1;
                }
            }
            ModelKind::SlidingWindow => {
                let (w_lo, w_hi) = self.sliding_windows_touching(t);
                for s in w_lo..=w_hi {
                    self.sw_cnt[s as usize] += 1;
                }
            }
            ModelKind::Burst => {
                if self.run_len > 0 && t == self.run_prev + 1 {
                    self.run_len += 1;
                } else {
                    self.run_len = 1;
                }
                self.run_prev = t;
            }
        }
    }

    fn undo(&mut self, t: u32, saved: (u32, usize)) {
        self.chain.pop();
        let (lo, hi) = self.real_range[t as usize];
        for k in lo..=hi {
            self.surv[k as usize] += self.share_scaled[t as usize];
        }
        match self.kind {
            ModelKind::CodingWindow => {
                for k in lo..=hi {
                    self.cw_cnt[k as usize] -= 1;
                }
            }
            ModelKind::SlidingWindow => {
                let (w_lo, w_hi) = self.sliding_windows_touching(t);
                for s in w_lo..=w_hi {
                    self.sw_cnt[s as usize] -= 1;
                }
            }
            ModelKind::Burst => {
                (self.run_prev, self.run_len) = saved;
            }
        }
    }

    fn starved_at(&self, t: u32) -> Option<u32> {
        let (lo, hi) = self.real_range[t as usize];
        (lo..=hi).find(|&k| self.surv[k as usize] < self.s_min)
    }
}
