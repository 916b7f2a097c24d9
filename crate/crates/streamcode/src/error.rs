//! Crate-wide error type for contract violations and out-of-scope requests.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("decoding delay d={d} must exceed the creation interval c={c}")]
    DelayTooSmall { c: u32, d: u32 },

    #[error("creation interval c must be at least 1")]
    ZeroCreationInterval,

    #[error("erasure budget z={z} must satisfy 0 <= z <= d-1={max} (z=d forces rate 0)")]
    BudgetOutOfRange { z: u32, max: u32 },

    #[error("message count n must be at least 1")]
    NoMessages,

    #[error("message index k={k} out of range 1..={n}")]
    MessageOutOfRange { k: u32, n: u32 },

    #[error("time step t={t} must be at least 1")]
    TimeStepOutOfRange { t: u32 },

    #[error("offset division needs positive operands, got a={a}, b={b}")]
    NonPositiveOperand { a: u32, b: u32 },

    #[error("horizon {horizon} exceeds the enumeration guard {guard} (hard ceiling {ceiling})")]
    GuardExceeded { horizon: u32, guard: u32, ceiling: u32 },

    #[error(
        "burst budget z={z} is not covered here when c does not divide d: \
         need z <= c - r = {short_max} or z >= q*c = {long_min}"
    )]
    BurstNotCovered { z: u32, short_max: u32, long_min: u32 },

    #[error("burst worst case with c | d is the periodic pattern; use periodic_pattern")]
    BurstNeedsRemainder,

    #[error("target rate {rate} is out of range: need 0 < rate <= c = {c}")]
    RateOutOfRange { rate: String, c: u32 },

    #[error(
        "rate {rate} does not quantize to whole symbols at {symbols} symbols per packet; \
         smallest valid packet size is {minimal}"
    )]
    QuantizationNotIntegral {
        rate: String,
        symbols: usize,
        minimal: usize,
    },

    #[error(
        "packet size {symbols} must be a positive multiple of {base} \
         and fit a 16-bit symbol counter"
    )]
    InvalidPacketSize { symbols: usize, base: usize },

    #[error("expected {expected} messages, got {got}")]
    WrongMessageCount { expected: usize, got: usize },

    #[error("message {index} has {got} symbols, expected {expected}")]
    WrongMessageLength {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("malformed packet trace: {reason}")]
    MalformedTrace { reason: String },

    #[error("cannot parse {input:?} as a rational number (use p or p/q)")]
    MalformedRational { input: String },

    #[error("cannot parse {input:?} as an erasure pattern (use a comma-separated step list)")]
    MalformedPattern { input: String },

    #[error("invalid guard setting {input:?}: expected a maximum horizon length")]
    InvalidGuard { input: String },

    #[error("linear program is unbounded, which indicates an internal construction bug")]
    LpUnbounded,
}
