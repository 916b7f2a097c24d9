//! System parameters, window geometry, and the per-step share profile.
//!
//! Everything downstream is parameterized by [`SystemParams`]: a source
//! creates message `k` at time `(k-1)c + 1` and the decoder must recover it by
//! time `(k-1)c + d`, so the coding window of message `k` is the `d` steps
//! `W_k = {(k-1)c+1, ..., (k-1)c+d}`. Rates and shares are exact rationals.

use std::ops::RangeInclusive;

use num::{BigInt, BigRational, Zero};

use crate::error::Error;

/// Exact rational scalar used for shares, rates, and bounds.
pub type Rational = BigRational;

/// `p/q` as a [`Rational`]. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer `v` as a [`Rational`].
pub fn rat_int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Renders a rational as `p/q`, keeping an explicit `/1` for integers so the
/// machine-readable formats have a uniform shape.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p` or `p/q` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    s.trim().parse().map_err(|_| Error::MalformedRational {
        input: s.to_string(),
    })
}

/// Quotient/remainder pair of the offset division `a = q*b + r` with
/// `q >= 0` and `r in {1, ..., b}`: the remainder may equal `b` but is never
/// zero. This is ordinary Euclidean division shifted so that multiples of `b`
/// land on remainder `b` instead of rolling over to 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OffsetQr {
    pub quotient: u32,
    pub remainder: u32,
}

/// Offset division of `a` by `b`; rejects zero operands.
pub fn offset_qr(a: u32, b: u32) -> Result<OffsetQr, Error> {
    if a == 0 || b == 0 {
        return Err(Error::NonPositiveOperand { a, b });
    }
    let quotient = (a - 1) / b;
    let remainder = a - quotient * b;
    debug_assert!((1..=b).contains(&remainder));
    debug_assert_eq!(quotient * b + remainder, a);
    Ok(OffsetQr {
        quotient,
        remainder,
    })
}

/// The coding window of one message: `d` consecutive time steps starting at
/// the message's creation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodingWindow {
    k: u32,
    start: u32,
    end: u32,
}

impl CodingWindow {
    /// Message index this window belongs to.
    pub fn message(&self) -> u32 {
        self.k
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn end(&self) -> u32 {
        self.end
    }

    pub fn steps(&self) -> RangeInclusive<u32> {
        self.start..=self.end
    }

    pub fn contains(&self, t: u32) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn len(&self) -> u32 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false // start <= end always holds
    }
}

/// Per-step bandwidth shares a message receives across its window, sorted
/// ascending. The profile has `d` entries, takes at most two distinct values
/// `1/(q+1) <= 1/q` (for `q = q_{d,c}`), and sums to exactly `c`; its prefix
/// sums are the rates that survive erasing the largest-share steps first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareProfile {
    entries: Vec<Rational>,
    small_count: usize,
}

impl ShareProfile {
    /// Ascending share entries; length `d`.
    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Number of leading `1/(q+1)` entries, `(q+1) * r_{d,c}`.
    pub fn small_count(&self) -> usize {
        self.small_count
    }

    /// Sum of the first `len` entries.
    pub fn prefix_sum(&self, len: usize) -> Rational {
        self.entries[..len.min(self.entries.len())]
            .iter()
            .fold(Rational::zero(), |acc, e| acc + e)
    }
}

/// Parameters of one streaming instance: creation interval `c`, decoding
/// delay `d > c`, per-window erasure budget `z <= d-1`, and the number of
/// messages `n` in the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemParams {
    c: u32,
    d: u32,
    z: u32,
    n: u32,
}

impl SystemParams {
    pub fn new(c: u32, d: u32, z: u32, n: u32) -> Result<Self, Error> {
        if c == 0 {
            return Err(Error::ZeroCreationInterval);
        }
        if d <= c {
            return Err(Error::DelayTooSmall { c, d });
        }
        if z >= d {
            return Err(Error::BudgetOutOfRange { z, max: d - 1 });
        }
        if n == 0 {
            return Err(Error::NoMessages);
        }
        Ok(SystemParams { c, d, z, n })
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same instance with a different erasure budget.
    pub fn with_budget(&self, z: u32) -> Result<Self, Error> {
        SystemParams::new(self.c, self.d, z, self.n)
    }

    /// Offset division of the delay by the creation interval,
    /// `d = q*c + r` with `r in {1, ..., c}`.
    pub fn delay_split(&self) -> OffsetQr {
        offset_qr(self.d, self.c).expect("c >= 1 and d >= 1 by construction")
    }

    /// Last time step of the horizon, `(n-1)c + d`.
    pub fn horizon(&self) -> u32 {
        (self.n - 1) * self.c + self.d
    }

    /// All time steps `1..=horizon`.
    pub fn time_steps(&self) -> RangeInclusive<u32> {
        1..=self.horizon()
    }

    /// Coding window of message `k` (1-based, `k <= n`).
    pub fn coding_window(&self, k: u32) -> Result<CodingWindow, Error> {
        if k == 0 || k > self.n {
            return Err(Error::MessageOutOfRange { k, n: self.n });
        }
        let start = (k - 1) * self.c + 1;
        Ok(CodingWindow {
            k,
            start,
            end: start + self.d - 1,
        })
    }

    /// Ascending per-step share profile of a single message:
    /// `(q+1)*r` entries of `1/(q+1)` followed by `q*(c-r)` entries of `1/q`,
    /// where `d = q*c + r` by offset division.
    pub fn share_profile(&self) -> ShareProfile {
        let OffsetQr {
            quotient: q,
            remainder: r,
        } = self.delay_split();
        let small_count = ((q + 1) * r) as usize;
        let large_count = (q * (self.c - r)) as usize;
        let mut entries = Vec::with_capacity(small_count + large_count);
        entries.resize(small_count, rat(1, (q + 1) as i64));
        entries.resize(small_count + large_count, rat(1, q as i64));
        debug_assert_eq!(entries.len(), self.d as usize);
        debug_assert_eq!(
            entries.iter().fold(Rational::zero(), |a, e| a + e),
            rat_int(self.c as u64)
        );
        ShareProfile {
            entries,
            small_count,
        }
    }

    /// Rate guaranteed against any adversary erasing at most `z` steps per
    /// coding window: the sum of the `d - z` smallest shares. Equals `c` at
    /// `z = 0` and `(d-z)/d * c` whenever `c` divides `d`.
    pub fn achievable_rate(&self) -> Rational {
        self.share_profile().prefix_sum((self.d - self.z) as usize)
    }
}

impl std::fmt::Display for SystemParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "c={} d={} z={} n={}",
            self.c, self.d, self.z, self.n
        )
    }
}
