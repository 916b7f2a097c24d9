//! Per-message symbol coding: a systematic MDS code (polynomial evaluation
//! over GF(256)) when the code length fits the field, and seeded random
//! linear coding with a decode-rank check otherwise.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use super::gf256;
use super::DecodeError;

/// Longest code the evaluation construction supports: one distinct field
/// point per coded symbol.
pub(crate) const MAX_MDS_SYMBOLS: usize = 255;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CodeKind {
    /// Coded symbol `j` is `P(j)` for the degree `< m` polynomial with
    /// `P(i) = message[i]` for `i < m`; any `m` received symbols interpolate
    /// `P`, and the first `m` coded symbols are the message itself.
    Evaluation,
    /// Coded symbol `j` is a pseudorandom GF(256) combination of the message
    /// symbols, drawn from a stream seeded by `(seed, k)`. Decoding performs
    /// a rank check and reports deficiency instead of guessing.
    RandomLinear { seed: u64 },
}

fn vandermonde_row(point: u8, m: usize) -> Vec<u8> {
    let mut row = Vec::with_capacity(m);
    let mut p = 1u8; // point^0, also for point = 0
    for _ in 0..m {
        row.push(p);
        p = gf256::mul(p, point);
    }
    row
}

fn dot(row: &[u8], values: &[u8]) -> u8 {
    row.iter()
        .zip(values)
        .fold(0u8, |acc, (&r, &v)| acc ^ gf256::mul(r, v))
}

fn rlc_rows(seed: u64, k: u32, m: usize, count: usize) -> Vec<Vec<u8>> {
    let stream_seed = seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut rng = ChaCha20Rng::seed_from_u64(stream_seed);
    (0..count)
        .map(|_| {
            let mut row = vec![0u8; m];
            rng.fill_bytes(&mut row);
            row
        })
        .collect()
}

/// Gauss-Jordan solve of `rows * x = vals` for the length-`m` vector `x`.
/// Extra rows are used for pivoting; `Err(rank)` when the rows do not
/// determine `x`.
pub(crate) fn solve(rows: &[Vec<u8>], vals: &[u8], m: usize) -> Result<Vec<u8>, usize> {
    debug_assert_eq!(rows.len(), vals.len());
    let mut a: Vec<Vec<u8>> = rows
        .iter()
        .zip(vals)
        .map(|(row, &v)| {
            debug_assert_eq!(row.len(), m);
            let mut r = row.clone();
            r.push(v);
            r
        })
        .collect();
    let rows_n = a.len();
    let mut rank = 0usize;
    for col in 0..m {
        let Some(pivot) = (rank..rows_n).find(|&r| a[r][col] != 0) else {
            continue; // x[col] undetermined; keep reducing for an honest rank
        };
        a.swap(rank, pivot);
        let scale = gf256::inv(a[rank][col]);
        for j in col..=m {
            a[rank][j] = gf256::mul(a[rank][j], scale);
        }
        for r in 0..rows_n {
            if r != rank && a[r][col] != 0 {
                let factor = a[r][col];
                for j in col..=m {
                    let sub = gf256::mul(factor, a[rank][j]);
                    a[r][j] ^= sub;
                }
            }
        }
        rank += 1;
        if rank == rows_n {
            break;
        }
    }
    if rank < m {
        return Err(rank);
    }
    // rank == m means every one of the m columns took a pivot, in ascending
    // order, so the reduced rows form an identity and read off the solution.
    Ok((0..m).map(|i| a[i][m]).collect())
}

/// All `total` coded symbols of one message.
pub(crate) fn encode_message(kind: CodeKind, k: u32, message: &[u8], total: usize) -> Vec<u8> {
    let m = message.len();
    match kind {
        CodeKind::Evaluation => {
            debug_assert!(total <= MAX_MDS_SYMBOLS);
            let rows: Vec<Vec<u8>> = (0..m).map(|i| vandermonde_row(i as u8, m)).collect();
            let coef = solve(&rows, message, m).expect("distinct evaluation points");
            let mut coded = Vec::with_capacity(total);
            coded.extend_from_slice(message);
            for j in m..total {
                coded.push(dot(&vandermonde_row(j as u8, m), &coef));
            }
            coded
        }
        CodeKind::RandomLinear { seed } => {
            let rows = rlc_rows(seed, k, m, total);
            rows.iter().map(|row| dot(row, message)).collect()
        }
    }
}

/// Reconstructs a message of `m` symbols from received `(index, symbol)`
/// pairs out of the `total`-symbol codeword.
pub(crate) fn decode_message(
    kind: CodeKind,
    k: u32,
    received: &[(usize, u8)],
    m: usize,
    total: usize,
) -> Result<Vec<u8>, DecodeError> {
    let mut dedup: Vec<(usize, u8)> = Vec::with_capacity(received.len());
    let mut seen = vec![false; total];
    for &(idx, v) in received {
        debug_assert!(idx < total);
        if !seen[idx] {
            seen[idx] = true;
            dedup.push((idx, v));
        }
    }
    if dedup.len() < m {
        return Err(DecodeError::Insufficient {
            needed: m,
            received: dedup.len(),
        });
    }
    match kind {
        CodeKind::Evaluation => {
            let rows: Vec<Vec<u8>> = dedup[..m]
                .iter()
                .map(|&(idx, _)| vandermonde_row(idx as u8, m))
                .collect();
            let vals: Vec<u8> = dedup[..m].iter().map(|&(_, v)| v).collect();
            let coef = solve(&rows, &vals, m).expect("distinct evaluation points");
            Ok((0..m)
                .map(|i| dot(&vandermonde_row(i as u8, m), &coef))
                .collect())
        }
        CodeKind::RandomLinear { seed } => {
            let all_rows = rlc_rows(seed, k, m, total);
            let rows: Vec<Vec<u8>> = dedup.iter().map(|&(idx, _)| all_rows[idx].clone()).collect();
            let vals: Vec<u8> = dedup.iter().map(|&(_, v)| v).collect();
            match solve(&rows, &vals, m) {
                Ok(message) => Ok(message),
                Err(rank) => Err(DecodeError::RankDeficient { needed: m, rank }),
            }
        }
    }
}
