//! Streaming erasure codes for messages with hard decoding deadlines.
//!
//! A source creates one message every `c` time steps and each message must be
//! decoded within `d` steps of its creation (`d > c`), so the coding windows of
//! consecutive messages overlap. An adversary erases up to `z` packets per
//! window. This crate provides, with exact rational arithmetic throughout:
//!
//! * the even bandwidth-allocation rule over overlapping windows and its
//!   per-step share profile ([`allocation`], [`core`]);
//! * a partition of the time horizon into sets that meet every coding window
//!   exactly once, and the worst-case erasure patterns built from it
//!   ([`partition`]);
//! * three adversarial erasure models (per coding window, sliding window,
//!   bursts) with admissibility tests and exhaustive enumeration ([`erasure`]);
//! * a GF(256) codec that realizes an allocation as systematic MDS code
//!   symbols with a fixed packet layout ([`codec`]);
//! * converse bounds, an exact rational LP oracle for the finite-horizon
//!   optimum, and an exhaustive decodability verifier ([`analysis`]).
//!
//! The primary interface is the `examples/` directory — one runnable example
//! per capability:
//!
//! ```text
//! cargo run -p streamcode --example allocation_table
//! cargo run -p streamcode --example partition_worst_case
//! cargo run -p streamcode --example erasure_models
//! cargo run -p streamcode --example codec_roundtrip
//! cargo run -p streamcode --example rate_bounds
//! cargo run -p streamcode --example lp_optimum
//! ```
//!
//! A thin `streamcode` binary exposes the same operations as subcommands
//! (`allocate`, `partition`, `bounds`, `lp`, `verify`, `simulate`); see
//! [`cli`] or run `streamcode --help`.

pub mod allocation;
pub mod analysis;
pub mod cli;
pub mod codec;
pub mod core;
pub mod erasure;
pub mod partition;

mod error;

pub use crate::core::{offset_qr, CodingWindow, OffsetQr, Rational, ShareProfile, SystemParams};
pub use allocation::{active_messages, AllocationTable, StepAllocation};
pub use analysis::{
    cutset_upper_bound, intersession_reference_code, rate_bounds, solve_intrasession_lp,
    verify_construction, verify_construction_at_rate, BoundReport, LpSolution, Verdict,
};
pub use codec::{
    apply_erasures, decodable_rate, decode, encode, make_schedule, make_schedule_with_symbols,
    CodecSchedule, DecodeError, Packet, PacketSegment, SymbolQuantization,
};
pub use erasure::{
    burst_worst_case, enumerate_admissible, is_admissible, periodic_pattern, ErasureModel,
    ErasurePattern, Guard, ModelKind,
};
pub use error::Error;
pub use partition::{derived_window_patterns, worst_case_base_pattern, Partition, ShareOrder};
