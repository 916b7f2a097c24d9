//! Binary trace format for transmitted packets.
//!
//! A trace is the concatenation of one record per surviving packet, in
//! increasing time order. Each record is:
//!
//! ```text
//! t              u32 big-endian
//! segment_count  u8
//! per segment:   message u32 BE, symbol_count u16 BE
//! payload        symbols in segment order, zero-padded to L bytes
//! ```
//!
//! The payload is always exactly `L` bytes (the per-step symbol count), so
//! records have a length computable from the header alone. Erased packets
//! are simply omitted. Reading requires the schedule, which pins down the
//! per-offset symbol counts and lets the reader reconstruct each segment's
//! position inside its message's coded expansion.

use super::{CodecSchedule, Packet, PacketSegment};
use crate::error::Error;

/// Serialize packets (already filtered of erased steps) into a trace.
pub fn write_trace(schedule: &CodecSchedule, packets: &[Packet]) -> Result<Vec<u8>, Error> {
    let l = schedule.quantization().symbols_per_step();
    let mut out = Vec::with_capacity(packets.len() * (5 + l));
    let mut last_t = 0u32;
    for packet in packets {
        if packet.t <= last_t {
            return Err(Error::MalformedTrace {
                reason: format!("packet times must increase, got {} after {last_t}", packet.t),
            });
        }
        last_t = packet.t;
        if packet.segments.len() > u8::MAX as usize {
            return Err(Error::MalformedTrace {
                reason: format!(
                    "packet at t={} has {} segments, format allows 255",
                    packet.t,
                    packet.segments.len()
                ),
            });
        }
        let payload: usize = packet.payload_len();
        if payload > l {
            return Err(Error::MalformedTrace {
                reason: format!(
                    "packet at t={} carries {payload} symbols, step budget is {l}",
                    packet.t
                ),
            });
        }
        out.extend_from_slice(&packet.t.to_be_bytes());
        out.push(packet.segments.len() as u8);
        for seg in &packet.segments {
            out.extend_from_slice(&seg.message.to_be_bytes());
            out.extend_from_slice(&(seg.symbols.len() as u16).to_be_bytes());
        }
        for seg in &packet.segments {
            out.extend_from_slice(&seg.symbols);
        }
        out.resize(out.len() + (l - payload), 0);
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], Error> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::MalformedTrace {
                reason: format!(
                    "truncated while reading {what} at byte {} ({} bytes left, {n} needed)",
                    self.pos,
                    self.bytes.len() - self.pos
                ),
            });
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u32(&mut self, what: &str) -> Result<u32, Error> {
        Ok(u32::from_be_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u16(&mut self, what: &str) -> Result<u16, Error> {
        Ok(u16::from_be_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u8(&mut self, what: &str) -> Result<u8, Error> {
        Ok(self.take(1, what)?[0])
    }
}

/// Parse a trace back into packets, validating every record against the
/// schedule: time steps must be increasing and inside the horizon, messages
/// in range, and every segment's symbol count must match what the schedule
/// assigns that message at that step.
pub fn read_trace(schedule: &CodecSchedule, bytes: &[u8]) -> Result<Vec<Packet>, Error> {
    let params = schedule.params();
    let c = params.c();
    let l = schedule.quantization().symbols_per_step();
    let mut reader = Reader { bytes, pos: 0 };
    let mut packets = Vec::new();
    let mut last_t = 0u32;

    while reader.pos < bytes.len() {
        let t = reader.u32("time step")?;
        if t <= last_t {
            return Err(Error::MalformedTrace {
                reason: format!("time steps must increase, got {t} after {last_t}"),
            });
        }
        if t > params.horizon() {
            return Err(Error::MalformedTrace {
                reason: format!("time step {t} beyond horizon {}", params.horizon()),
            });
        }
        last_t = t;
        let seg_count = reader.u8("segment count")? as usize;
        let mut headers = Vec::with_capacity(seg_count);
        for _ in 0..seg_count {
            let message = reader.u32("message index")?;
            let count = reader.u16("symbol count")? as usize;
            if message < 1 || message > params.n() {
                return Err(Error::MalformedTrace {
                    reason: format!(
                        "message {message} outside session of {} at t={t}",
                        params.n()
                    ),
                });
            }
            let window = params.coding_window(message).expect("message in range");
            if !window.contains(t) {
                return Err(Error::MalformedTrace {
                    reason: format!("message {message} does not transmit at t={t}"),
                });
            }
            let i = (t - (message - 1) * c) as usize;
            let expected = schedule.symbols_at_offset(i);
            if count != expected {
                return Err(Error::MalformedTrace {
                    reason: format!(
                        "message {message} at t={t} should carry {expected} symbols, record says {count}"
                    ),
                });
            }
            headers.push((message, i, count));
        }
        let declared: usize = headers.iter().map(|&(_, _, n)| n).sum();
        if declared > l {
            return Err(Error::MalformedTrace {
                reason: format!("segments at t={t} declare {declared} symbols, step budget is {l}"),
            });
        }
        let payload = reader.take(l, "payload")?;
        let mut cursor = 0usize;
        let mut segments = Vec::with_capacity(seg_count);
        for (message, i, count) in headers {
            segments.push(PacketSegment {
                message,
                symbol_offset: schedule.symbol_offset(i),
                symbols: payload[cursor..cursor + count].to_vec(),
            });
            cursor += count;
        }
        if payload[cursor..].iter().any(|&b| b != 0) {
            return Err(Error::MalformedTrace {
                reason: format!("nonzero padding at t={t}"),
            });
        }
        packets.push(Packet { t, segments });
    }
    Ok(packets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{apply_erasures, decode, encode, make_schedule};
    use crate::core::{rat_int, SystemParams};
    use crate::erasure::ErasurePattern;

    fn schedule_382() -> CodecSchedule {
        let p = SystemParams::new(3, 8, 2, 3).unwrap();
        make_schedule(&p, &rat_int(2)).unwrap()
    }

    #[test]
    fn golden_record_bytes() {
        // Systematic code: the first 12 coded symbols of message 1 are its
        // bytes 1..=12, so the first two records are fully predictable.
        let schedule = schedule_382();
        let messages: Vec<Vec<u8>> = (0..3)
            .map(|k| (1..=12).map(|j| (k * 12 + j) as u8).collect())
            .collect();
        let packets = encode(&schedule, &messages).unwrap();
        let bytes = write_trace(&schedule, &packets).unwrap();

        // t=1: only message 1 (offset 1, 2 symbols), payload padded to 6.
        let t1 = [
            0, 0, 0, 1, // t
            1, // one segment
            0, 0, 0, 1, // message 1
            0, 2, // two symbols
            1, 2, 0, 0, 0, 0, // payload: bytes 1,2 then padding
        ];
        assert_eq!(&bytes[..t1.len()], &t1);

        // t=3: message 1 at offset 3 carries 3 symbols (bytes 5,6,7).
        let record_len = |segs: usize| 4 + 1 + 6 * segs + 6;
        let start_t3 = record_len(1) + record_len(1);
        let t3 = [
            0, 0, 0, 3,
            1,
            0, 0, 0, 1,
            0, 3,
            5, 6, 7, 0, 0, 0,
        ];
        assert_eq!(&bytes[start_t3..start_t3 + t3.len()], &t3);
    }

    #[test]
    fn roundtrip_full_session() {
        let schedule = schedule_382();
        let messages: Vec<Vec<u8>> = (0..3)
            .map(|k| (0..12).map(|j| (k * 50 + j * 2 + 3) as u8).collect())
            .collect();
        let packets = encode(&schedule, &messages).unwrap();
        let bytes = write_trace(&schedule, &packets).unwrap();
        let back = read_trace(&schedule, &bytes).unwrap();
        assert_eq!(back, packets);
    }

    #[test]
    fn roundtrip_with_erasures_then_decode() {
        let schedule = schedule_382();
        let p = *schedule.params();
        let messages: Vec<Vec<u8>> = (0..3)
            .map(|k| (0..12).map(|j| (k * 9 + j + 11) as u8).collect())
            .collect();
        let packets = encode(&schedule, &messages).unwrap();
        let worst = crate::partition::worst_case_base_pattern(&p);
        let surviving = apply_erasures(&packets, &worst);
        let bytes = write_trace(&schedule, &surviving).unwrap();
        let back = read_trace(&schedule, &bytes).unwrap();
        assert_eq!(back, surviving);
        for k in 1..=3 {
            assert_eq!(decode(&schedule, &back, k).unwrap(), messages[k as usize - 1]);
        }
    }

    #[test]
    fn empty_trace_is_no_packets() {
        let schedule = schedule_382();
        assert_eq!(read_trace(&schedule, &[]).unwrap(), vec![]);
    }

    #[test]
    fn truncated_trace_is_rejected() {
        let schedule = schedule_382();
        let messages = vec![vec![0u8; 12]; 3];
        let packets = encode(&schedule, &messages).unwrap();
        let bytes = write_trace(&schedule, &packets).unwrap();
        for cut in [1, 4, 7, bytes.len() - 1] {
            let err = read_trace(&schedule, &bytes[..cut]).unwrap_err();
            assert!(matches!(err, Error::MalformedTrace { .. }), "cut at {cut}");
        }
    }

    #[test]
    fn wrong_symbol_count_is_rejected() {
        let schedule = schedule_382();
        let messages = vec![vec![0u8; 12]; 3];
        let packets = encode(&schedule, &messages).unwrap();
        let mut bytes = write_trace(&schedule, &packets).unwrap();
        // First record's symbol count is at offset 9..11; claim 3 instead of 2.
        bytes[10] = 3;
        let err = read_trace(&schedule, &bytes).unwrap_err();
        match err {
            Error::MalformedTrace { reason } => assert!(reason.contains("should carry")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_window_and_out_of_session_messages_are_rejected() {
        let schedule = schedule_382();
        let messages = vec![vec![0u8; 12]; 3];
        let packets = encode(&schedule, &messages).unwrap();
        let good = write_trace(&schedule, &packets).unwrap();

        // Message id 9 does not exist.
        let mut bad = good.clone();
        bad[8] = 9;
        assert!(matches!(
            read_trace(&schedule, &bad),
            Err(Error::MalformedTrace { .. })
        ));

        // Message 2's window starts at t=4; claiming it at t=1 is invalid.
        let mut bad = good.clone();
        bad[8] = 2;
        assert!(matches!(
            read_trace(&schedule, &bad),
            Err(Error::MalformedTrace { .. })
        ));
    }

    #[test]
    fn decreasing_time_rejected_both_ways() {
        let schedule = schedule_382();
        let messages = vec![vec![0u8; 12]; 3];
        let mut packets = encode(&schedule, &messages).unwrap();
        packets.swap(0, 1);
        assert!(matches!(
            write_trace(&schedule, &packets),
            Err(Error::MalformedTrace { .. })
        ));
    }

    #[test]
    fn nonzero_padding_rejected() {
        let schedule = schedule_382();
        let messages = vec![vec![0u8; 12]; 3];
        let packets = encode(&schedule, &messages).unwrap();
        let mut bytes = write_trace(&schedule, &packets).unwrap();
        // First record: header 11 bytes, payload 6 bytes, padding at 13..17.
        bytes[14] = 0xFF;
        let err = read_trace(&schedule, &bytes).unwrap_err();
        match err {
            Error::MalformedTrace { reason } => assert!(reason.contains("padding")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn erased_steps_are_simply_absent() {
        let schedule = schedule_382();
        let messages = vec![vec![0u8; 12]; 3];
        let packets = encode(&schedule, &messages).unwrap();
        let pattern: ErasurePattern = "1,2,3".parse().unwrap();
        let surviving = apply_erasures(&packets, &pattern);
        let bytes = write_trace(&schedule, &surviving).unwrap();
        let back = read_trace(&schedule, &bytes).unwrap();
        assert!(back.iter().all(|p| p.t > 3));
        assert_eq!(back.len(), packets.len() - 3);
    }
}
