//! Byte-level codec realizing an allocation table: each message is expanded
//! into coded symbols which are spread across its coding window in proportion
//! to the per-step shares, so that any erasure pattern leaving enough
//! bandwidth leaves enough symbols to decode.

mod gf256;
mod mds;
pub mod trace;

use crate::allocation::AllocationTable;
use crate::core::{offset_qr, Rational, SystemParams};
use crate::erasure::ErasurePattern;
use crate::error::Error;
use mds::CodeKind;
use num::ToPrimitive;

/// Why a message could not be recovered from the symbols at hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    /// Fewer symbols survived than the message length requires.
    Insufficient { needed: usize, received: usize },
    /// Enough symbols arrived but they span a deficient subspace.
    RankDeficient { needed: usize, rank: usize },
    /// The requested message index lies outside the session.
    UnknownMessage { k: u32, n: u32 },
}

impl DecodeError {
    /// How many more useful symbols would have been needed.
    pub fn deficit(&self) -> usize {
        match self {
            DecodeError::Insufficient { needed, received } => needed - received,
            DecodeError::RankDeficient { needed, rank } => needed - rank,
            DecodeError::UnknownMessage { .. } => 0,
        }
    }
}

impl std::fmt::Display for DecodeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodeError::Insufficient { needed, received } => {
                write!(f, "{received} symbols received, {needed} needed")
            }
            DecodeError::RankDeficient { needed, rank } => {
                write!(f, "received symbols have rank {rank}, {needed} needed")
            }
            DecodeError::UnknownMessage { k, n } => {
                write!(f, "message {k} outside session of {n} messages")
            }
        }
    }
}

impl std::error::Error for DecodeError {}

/// Per-step symbol budget: every time step carries the same number of symbols
/// `L`, chosen so each fractional share maps to a whole symbol count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolQuantization {
    symbols_per_step: usize,
    base: usize,
}

impl SymbolQuantization {
    /// Smallest per-step symbol count under which every share in the profile
    /// becomes integral: the shares are 1/(q+1) (and 1/q when c does not
    /// divide d), so the count must be a multiple of q+1, respectively
    /// q(q+1).
    pub fn minimal_symbols(params: &SystemParams) -> usize {
        let qr = params.delay_split();
        let q = qr.quotient as usize;
        if qr.remainder == params.c() {
            q + 1
        } else {
            q * (q + 1)
        }
    }

    /// Fix the per-step symbol count. It must be a positive multiple of
    /// [`SymbolQuantization::minimal_symbols`] and fit the wire format's
    /// 16-bit symbol counters.
    pub fn new(params: &SystemParams, symbols_per_step: usize) -> Result<Self, Error> {
        let base = Self::minimal_symbols(params);
        if symbols_per_step == 0
            || symbols_per_step % base != 0
            || symbols_per_step > u16::MAX as usize
        {
            return Err(Error::InvalidPacketSize {
                symbols: symbols_per_step,
                base,
            });
        }
        Ok(Self {
            symbols_per_step,
            base,
        })
    }

    /// The default quantization: exactly the minimal count.
    pub fn minimal(params: &SystemParams) -> Self {
        Self::new(params, Self::minimal_symbols(params)).expect("minimal count is valid")
    }

    /// Symbols carried by every time step.
    pub fn symbols_per_step(&self) -> usize {
        self.symbols_per_step
    }

    /// The minimal count this quantization is a multiple of.
    pub fn base(&self) -> usize {
        self.base
    }
}

/// A fixed encoding schedule: which message places how many symbols at each
/// offset of its window, plus the code used to expand message bytes into
/// coded symbols.
#[derive(Debug, Clone)]
pub struct CodecSchedule {
    params: SystemParams,
    quant: SymbolQuantization,
    rate: Rational,
    message_symbols: usize,
    counts: Vec<usize>,
    seed: u64,
}

/// Schedule for `rate` message symbols per step-group using the minimal
/// per-step symbol count.
pub fn make_schedule(params: &SystemParams, rate: &Rational) -> Result<CodecSchedule, Error> {
    make_schedule_with_symbols(params, rate, SymbolQuantization::minimal_symbols(params))
}

/// Schedule with an explicit per-step symbol count `symbols_per_step`.
///
/// The message length in symbols is `rate * symbols_per_step`; both the
/// count and that product must be integral, otherwise the smallest workable
/// count is reported.
pub fn make_schedule_with_symbols(
    params: &SystemParams,
    rate: &Rational,
    symbols_per_step: usize,
) -> Result<CodecSchedule, Error> {
    use num::{BigInt, Integer, One, Signed};
    let quant = SymbolQuantization::new(params, symbols_per_step)?;
    let c = params.c();
    if !rate.is_positive() || *rate > crate::core::rat_int(c as u64) {
        return Err(Error::RateOutOfRange {
            rate: rate.to_string(),
            c,
        });
    }
    let l = BigInt::from(symbols_per_step);
    let scaled = rate * &l;
    if !scaled.denom().is_one() {
        let base = BigInt::from(quant.base());
        let den = rate.denom().clone();
        let minimal = (&base * &den) / base.gcd(&den);
        return Err(Error::QuantizationNotIntegral {
            rate: rate.to_string(),
            symbols: symbols_per_step,
            minimal: minimal.to_usize().unwrap_or(usize::MAX),
        });
    }
    let message_symbols = scaled
        .numer()
        .to_usize()
        .filter(|&m| m >= 1)
        .ok_or_else(|| Error::RateOutOfRange {
            rate: rate.to_string(),
            c,
        })?;

    // Per-offset symbol counts: share 1/(q+1) or 1/q of a step's L symbols.
    let profile = params.share_profile();
    let qr = params.delay_split();
    let q = qr.quotient as usize;
    let small = symbols_per_step / (q + 1);
    let large = if q > 0 { symbols_per_step / q } else { 0 };
    let d = params.d() as usize;
    let mut counts = vec![0usize; d];
    for i in 1..=d {
        let r_i = offset_qr(i as u32, c).expect("positive").remainder;
        let r_d = qr.remainder;
        counts[i - 1] = if r_i <= r_d { small } else { large };
    }
    debug_assert_eq!(
        counts.iter().sum::<usize>(),
        {
            let total = profile.prefix_sum(d) * BigInt::from(symbols_per_step);
            total.to_integer().to_usize().unwrap()
        },
        "window symbol total must equal c * L"
    );

    Ok(CodecSchedule {
        params: *params,
        quant,
        rate: rate.clone(),
        message_symbols,
        counts,
        seed: 0,
    })
}

impl CodecSchedule {
    /// Replace the seed used by the random-linear fallback code.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn quantization(&self) -> &SymbolQuantization {
        &self.quant
    }

    pub fn rate(&self) -> &Rational {
        &self.rate
    }

    /// Message length in symbols (bytes).
    pub fn message_symbols(&self) -> usize {
        self.message_symbols
    }

    /// Total coded symbols each message spreads over its window.
    pub fn coded_symbols_per_message(&self) -> usize {
        self.params.c() as usize * self.quant.symbols_per_step()
    }

    /// Coded symbols the message places at window offset `i` (1-based).
    pub fn symbols_at_offset(&self, i: usize) -> usize {
        self.counts[i - 1]
    }

    /// Whether the symbol expansion falls back to a seeded random-linear
    /// code because the coded length exceeds the field's evaluation points.
    pub fn uses_random_linear(&self) -> bool {
        self.coded_symbols_per_message() > mds::MAX_MDS_SYMBOLS
    }

    fn code_kind(&self) -> CodeKind {
        if self.uses_random_linear() {
            CodeKind::RandomLinear { seed: self.seed }
        } else {
            CodeKind::Evaluation
        }
    }

    /// 0-based start of message `k`'s symbol run at its window offset `i`:
    /// the sum of its counts at offsets before `i`.
    fn symbol_offset(&self, i: usize) -> usize {
        self.counts[..i - 1].iter().sum()
    }
}

/// One message's slice of a packet: `symbols` coded symbols of `message`,
/// starting at `symbol_offset` within that message's coded expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketSegment {
    pub message: u32,
    pub symbol_offset: usize,
    pub symbols: Vec<u8>,
}

/// Everything transmitted at one time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub t: u32,
    pub segments: Vec<PacketSegment>,
}

impl Packet {
    /// Total payload symbols across segments.
    pub fn payload_len(&self) -> usize {
        self.segments.iter().map(|s| s.symbols.len()).sum()
    }
}

/// Encode a whole session: `messages[k-1]` is message `k`'s byte content,
/// each exactly `schedule.message_symbols()` long. Returns one packet per
/// time step of the horizon.
pub fn encode(schedule: &CodecSchedule, messages: &[Vec<u8>]) -> Result<Vec<Packet>, Error> {
    let params = schedule.params();
    let n = params.n() as usize;
    if messages.len() != n {
        return Err(Error::WrongMessageCount {
            expected: n,
            got: messages.len(),
        });
    }
    for (idx, msg) in messages.iter().enumerate() {
        if msg.len() != schedule.message_symbols() {
            return Err(Error::WrongMessageLength {
                index: idx + 1,
                expected: schedule.message_symbols(),
                got: msg.len(),
            });
        }
    }

    let kind = schedule.code_kind();
    let total = schedule.coded_symbols_per_message();
    let coded: Vec<Vec<u8>> = messages
        .iter()
        .enumerate()
        .map(|(idx, msg)| mds::encode_message(kind, idx as u32 + 1, msg, total))
        .collect();

    let c = params.c();
    let mut packets = Vec::with_capacity(params.horizon() as usize);
    for t in 1..=params.horizon() {
        let step = crate::allocation::active_messages(params, t)?;
        let mut segments = Vec::new();
        for &k in &step {
            if k < 1 || k > n as i64 {
                continue; // virtual slot: nothing real to send
            }
            let i = (t - (k as u32 - 1) * c) as usize;
            let count = schedule.symbols_at_offset(i);
            let start = schedule.symbol_offset(i);
            segments.push(PacketSegment {
                message: k as u32,
                symbol_offset: start,
                symbols: coded[k as usize - 1][start..start + count].to_vec(),
            });
        }
        packets.push(Packet { t, segments });
    }
    Ok(packets)
}

/// Drop every packet whose time step the pattern erases.
pub fn apply_erasures(packets: &[Packet], pattern: &ErasurePattern) -> Vec<Packet> {
    packets
        .iter()
        .filter(|p| !pattern.contains(p.t))
        .cloned()
        .collect()
}

/// Recover message `k` from the surviving packets sent up to its deadline.
///
/// Only packets with `t` inside message `k`'s coding window contribute;
/// later packets never carry its symbols anyway.
pub fn decode(
    schedule: &CodecSchedule,
    packets: &[Packet],
    k: u32,
) -> Result<Vec<u8>, DecodeError> {
    let params = schedule.params();
    if k < 1 || k > params.n() {
        return Err(DecodeError::UnknownMessage { k, n: params.n() });
    }
    let mut received: Vec<(usize, u8)> = Vec::new();
    for packet in packets {
        for seg in &packet.segments {
            if seg.message == k {
                for (j, &byte) in seg.symbols.iter().enumerate() {
                    received.push((seg.symbol_offset + j, byte));
                }
            }
        }
    }
    mds::decode_message(
        schedule.code_kind(),
        k,
        &received,
        schedule.message_symbols(),
        schedule.coded_symbols_per_message(),
    )
}

/// Bandwidth surviving for message `k` under `pattern`: the sum of the
/// shares at the unerased steps of its coding window. Message `k` is
/// decodable at rate `R` exactly when this is at least `R`.
pub fn decodable_rate(
    pattern: &ErasurePattern,
    table: &AllocationTable,
    k: u32,
) -> Result<Rational, Error> {
    table.surviving_bandwidth(k, pattern)
}
