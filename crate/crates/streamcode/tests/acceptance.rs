//! Acceptance suite: one test per release criterion, each printing a single
//! `ACCEPTANCE n: PASS/FAIL — …` line (run with `--nocapture` to see them).

use std::time::Instant;

use rand_core::{RngCore, SeedableRng};

use streamcode::codec::decodable_rate;
use streamcode::core::{rat, rat_int, Rational};
use streamcode::{
    apply_erasures, decode, encode, enumerate_admissible, intersession_reference_code,
    make_schedule, rate_bounds, solve_intrasession_lp, verify_construction,
    verify_construction_at_rate, worst_case_base_pattern, AllocationTable, ErasureModel,
    ErasurePattern, Guard, ModelKind, Partition, SystemParams, Verdict,
};

fn report(criterion: u32, result: Result<String, String>) {
    match result {
        Ok(msg) => println!("ACCEPTANCE {criterion}: PASS — {msg}"),
        Err(msg) => {
            println!("ACCEPTANCE {criterion}: FAIL — {msg}");
            panic!("acceptance criterion {criterion} failed: {msg}");
        }
    }
}

/// Criterion 1: the LP oracle reproduces the known optimum 6/7 at
/// (c, d, z, n) = (1, 3, 1, 3) under the coding-window model, exactly,
/// in under a second.
#[test]
fn acceptance_1_lp_reproduction() {
    report(1, (|| {
        let start = Instant::now();
        let params = SystemParams::new(1, 3, 1, 3).map_err(|e| e.to_string())?;
        let model = ErasureModel::from_params(ModelKind::CodingWindow, &params);
        let solution = solve_intrasession_lp(&params, &model, &Guard::default())
            .map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        if *solution.rate() != rat(6, 7) {
            return Err(format!("LP returned {}, expected 6/7", solution.rate()));
        }
        if elapsed.as_secs_f64() >= 1.0 {
            return Err(format!("took {elapsed:?}, budget is 1 s"));
        }
        Ok(format!(
            "LP optimum at (c,d,z,n)=(1,3,1,3) is exactly 6/7 ({} patterns, {elapsed:?})",
            solution.patterns_enumerated()
        ))
    })());
}

/// Criterion 2: at the same parameters the cut-set optimum over admissible
/// patterns is exactly 1, and the cross-message reference code decodes all
/// messages under every admissible pattern — beating every allocation.
#[test]
fn acceptance_2_intersession_reference() {
    report(2, (|| {
        let start = Instant::now();
        let params = SystemParams::new(1, 3, 1, 3).map_err(|e| e.to_string())?;
        let model = ErasureModel::from_params(ModelKind::CodingWindow, &params);
        let horizon = params.horizon();
        let n = rat_int(params.n() as u64);
        let min_cutset = enumerate_admissible(model, &params, Guard::default())
            .map_err(|e| e.to_string())?
            .map(|e| {
                let unerased = horizon as usize - e.count_in_range(1, horizon);
                rat_int(unerased as u64) / &n
            })
            .min()
            .ok_or("no admissible patterns")?;
        if min_cutset != rat_int(1) {
            return Err(format!("min cut-set bound is {min_cutset}, expected 1"));
        }
        let reference = intersession_reference_code();
        let checked = reference
            .verify_all_patterns()
            .map_err(|(e, k)| format!("reference code loses message {k} under {{{e}}}"))?;
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 1.0 {
            return Err(format!("took {elapsed:?}, budget is 1 s"));
        }
        Ok(format!(
            "cut-set optimum is exactly 1; reference code decodes under all {checked} patterns ({elapsed:?})"
        ))
    })());
}

fn sweep_points(d_max: u32, horizon_cap: u32) -> Vec<SystemParams> {
    let mut points = Vec::new();
    for d in 2..=d_max {
        for c in 1..d {
            for z in 1..d {
                for n in 1..=3 {
                    let params = SystemParams::new(c, d, z, n).expect("c < d, z < d");
                    if params.horizon() <= horizon_cap {
                        points.push(params);
                    }
                }
            }
        }
    }
    points
}

/// Criterion 3: across every (c, d) with c < d <= 8, every budget
/// z in 1..d, and n in {1, 2, 3} with horizon at most 18, the constructed
/// allocation verifies exhaustively at its promised rate under all three
/// erasure models, within five minutes total.
#[test]
fn acceptance_3_achievability_sweep() {
    report(3, (|| {
        let start = Instant::now();
        let guard = Guard::default();
        let points = sweep_points(8, 18);
        let mut verifications = 0u64;
        let mut patterns = 0u64;
        for params in &points {
            for kind in ModelKind::all() {
                let model = ErasureModel::from_params(kind, params);
                match verify_construction(params, &model, &guard).map_err(|e| e.to_string())? {
                    Verdict::Verified { patterns_checked } => {
                        verifications += 1;
                        patterns += patterns_checked;
                    }
                    Verdict::CounterExample {
                        pattern, message, ..
                    } => {
                        return Err(format!(
                            "{params} {kind}: pattern {{{pattern}}} starves message {message}"
                        ));
                    }
                }
            }
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 300.0 {
            return Err(format!("took {elapsed:?}, budget is 5 min"));
        }
        Ok(format!(
            "{} parameter points × 3 models verified ({verifications} runs, {patterns} patterns, {elapsed:?})",
            points.len()
        ))
    })());
}

/// Criterion 4: at each sweep point the worst-case base pattern leaves
/// every message exactly the promised rate — no slack — and any strictly
/// larger rate is refuted by an explicit counterexample.
#[test]
fn acceptance_4_tightness() {
    report(4, (|| {
        let start = Instant::now();
        let guard = Guard::default();
        let points = sweep_points(8, 18);
        for params in &points {
            let rate = params.achievable_rate();
            let table = AllocationTable::build(params);
            let worst = worst_case_base_pattern(params);
            for k in 1..=params.n() {
                let surviving =
                    decodable_rate(&worst, &table, k).map_err(|e| e.to_string())?;
                if surviving != rate {
                    return Err(format!(
                        "{params}: message {k} keeps {surviving} under the worst pattern, expected exactly {rate}"
                    ));
                }
            }
            let bumped = &rate + rat(1, 1000);
            let model = ErasureModel::from_params(ModelKind::CodingWindow, params);
            match verify_construction_at_rate(params, &model, &bumped, &guard)
                .map_err(|e| e.to_string())?
            {
                Verdict::CounterExample { .. } => {}
                Verdict::Verified { .. } => {
                    return Err(format!(
                        "{params}: rate {bumped} > {rate} verified, but the bound must be tight"
                    ));
                }
            }
        }
        let elapsed = start.elapsed();
        Ok(format!(
            "worst-case pattern is exact at all {} sweep points; every rate bump is refuted ({elapsed:?})",
            points.len()
        ))
    })());
}

/// Criterion 5: partition structure for all c < d <= 10 and every session
/// length n <= 200 — the sets disjointly cover the horizon, each meets
/// every coding window exactly once, sizes respect the block bounds, and
/// the z-set union erases exactly z steps per window.
#[test]
fn acceptance_5_partition_invariants() {
    report(5, (|| {
        let start = Instant::now();
        let mut checked = 0u64;
        for d in 2..=10u32 {
            for c in 1..d {
                for n in 1..=200u32 {
                    let params = SystemParams::new(c, d, 1, n).map_err(|e| e.to_string())?;
                    let split = params.delay_split();
                    let (q, r) = (split.quotient, split.remainder);
                    let partition = Partition::build(&params);
                    let horizon = params.horizon();

                    // Disjoint cover of 1..=horizon by the d sets.
                    let mut owner = vec![0u32; horizon as usize + 1];
                    for i in 1..=d {
                        for &t in partition.set(i) {
                            if t < 1 || t > horizon {
                                return Err(format!("{params}: set {i} contains {t} outside the horizon"));
                            }
                            if owner[t as usize] != 0 {
                                return Err(format!(
                                    "{params}: step {t} in both set {} and set {i}",
                                    owner[t as usize]
                                ));
                            }
                            owner[t as usize] = i;
                        }
                    }
                    if owner[1..].iter().any(|&s| s == 0) {
                        return Err(format!("{params}: partition does not cover the horizon"));
                    }

                    // Each set meets each window exactly once; windows are
                    // intervals, so count per (set, window) via the owner map.
                    let mut hits = vec![0u32; d as usize + 1];
                    for k in 1..=n {
                        let w = params.coding_window(k).map_err(|e| e.to_string())?;
                        hits.iter_mut().for_each(|h| *h = 0);
                        for t in w.steps() {
                            hits[owner[t as usize] as usize] += 1;
                        }
                        if (1..=d).any(|i| hits[i as usize] != 1) {
                            return Err(format!(
                                "{params}: window {k} does not meet every set exactly once"
                            ));
                        }
                    }

                    // Size bounds: sets carrying the small share hold at most
                    // n/(q+1) + 2 steps, the rest at most n/q + 2 (compared
                    // exactly, scaled to integers).
                    for i in 1..=d {
                        let small = streamcode::core::offset_qr(i, c)
                            .map_err(|e| e.to_string())?
                            .remainder
                            <= r;
                        let len = partition.set(i).len() as u64;
                        let (den, label) = if small { (q as u64 + 1, "n/(q+1)+2") } else { (q as u64, "n/q+2") };
                        if len * den > n as u64 + 2 * den {
                            return Err(format!(
                                "{params}: |set {i}| = {len} exceeds {label}"
                            ));
                        }
                    }

                    // Worst-case base pattern: exactly z erasures per window.
                    for z in 1..d {
                        let zp = params.with_budget(z).map_err(|e| e.to_string())?;
                        let base = worst_case_base_pattern(&zp);
                        for k in 1..=n {
                            let w = zp.coding_window(k).map_err(|e| e.to_string())?;
                            let got = base.count_in_range(w.start(), w.end());
                            if got != z as usize {
                                return Err(format!(
                                    "{zp}: base pattern erases {got} of window {k}, expected z={z}"
                                ));
                            }
                        }
                    }
                    checked += 1;
                }
            }
        }
        let elapsed = start.elapsed();
        Ok(format!(
            "partition laws hold for all {checked} (c,d,n) combinations with d <= 10, n <= 200 ({elapsed:?})"
        ))
    })());
}

/// Criterion 6: the sliding-window bound gap at (c, d, z) = (3, 9, 3) is
/// exactly (6/9)·(15/n) = 10/n at n = 10, 100, 1000, shrinking toward zero.
#[test]
fn acceptance_6_bound_convergence() {
    report(6, (|| {
        let mut previous: Option<Rational> = None;
        for n in [10u32, 100, 1000] {
            let params = SystemParams::new(3, 9, 3, n).map_err(|e| e.to_string())?;
            let bounds =
                rate_bounds(&params, ModelKind::SlidingWindow).map_err(|e| e.to_string())?;
            let expected = rat(6, 9) * rat(15, n as i64);
            if bounds.gap != expected {
                return Err(format!(
                    "gap at n={n} is {}, expected {}",
                    bounds.gap, expected
                ));
            }
            if bounds.gap != rat(10, n as i64) {
                return Err(format!("gap at n={n} should simplify to 10/{n}"));
            }
            if let Some(prev) = &previous {
                if bounds.gap >= *prev {
                    return Err(format!("gap did not shrink at n={n}"));
                }
            }
            previous = Some(bounds.gap.clone());
        }
        Ok("sliding-window gap at (3,9,3) is exactly 10/n for n = 10, 100, 1000".to_string())
    })());
}

/// Criterion 7: the codec is MDS in every trial — across 1000 seeded random
/// erasure patterns at (c, d, z) = (3, 8, 2), rate 2, 6 symbols per packet,
/// a message decodes exactly when at least 12 of its symbols survive, and
/// decoded bytes always equal the originals.
#[test]
fn acceptance_7_codec_mds_property() {
    report(7, (|| {
        let start = Instant::now();
        let params = SystemParams::new(3, 8, 2, 3).map_err(|e| e.to_string())?;
        let schedule = make_schedule(&params, &rat(2, 1)).map_err(|e| e.to_string())?;
        let m = schedule.message_symbols();
        if m != 12 {
            return Err(format!("expected 12 message symbols, got {m}"));
        }
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(7);
        let horizon = params.horizon();
        let mut decodes = 0u64;
        let mut failures = 0u64;
        for trial in 0..1000u32 {
            let messages: Vec<Vec<u8>> = (0..params.n())
                .map(|_| {
                    let mut bytes = vec![0u8; m];
                    rng.fill_bytes(&mut bytes);
                    bytes
                })
                .collect();
            let packets = encode(&schedule, &messages).map_err(|e| e.to_string())?;
            let mask = rng.next_u32() as u64 & ((1 << horizon) - 1);
            let pattern =
                ErasurePattern::from_steps((1..=horizon).filter(|t| mask >> (t - 1) & 1 == 1));
            let surviving = apply_erasures(&packets, &pattern);
            for k in 1..=params.n() {
                let w = params.coding_window(k).map_err(|e| e.to_string())?;
                let symbols: usize = w
                    .steps()
                    .filter(|t| !pattern.contains(*t))
                    .map(|t| schedule.symbols_at_offset((t - w.start() + 1) as usize))
                    .sum();
                match decode(&schedule, &surviving, k) {
                    Ok(bytes) => {
                        if symbols < m {
                            return Err(format!(
                                "trial {trial}: message {k} decoded from only {symbols} symbols"
                            ));
                        }
                        if bytes != messages[(k - 1) as usize] {
                            return Err(format!(
                                "trial {trial}: message {k} decoded to different bytes"
                            ));
                        }
                        decodes += 1;
                    }
                    Err(err) => {
                        if symbols >= m {
                            return Err(format!(
                                "trial {trial}: message {k} had {symbols} >= {m} symbols but failed: {err}"
                            ));
                        }
                        failures += 1;
                    }
                }
            }
        }
        let elapsed = start.elapsed();
        Ok(format!(
            "1000 trials, {decodes} decodes and {failures} expected failures, all exactly at the 12-symbol threshold ({elapsed:?})"
        ))
    })());
}

/// Criterion 8: model relations, exhaustively at (c, d) = (2, 5), n = 2 —
/// sliding-window admissibility implies coding-window admissibility for
/// every budget; at c = 1 the two models coincide; and every
/// burst-admissible pattern stays within the per-window budget.
#[test]
fn acceptance_8_model_relations() {
    report(8, (|| {
        // Nesting and per-window budget at (2,5,z,2) for every budget z.
        for z in 0..5u32 {
            let params = SystemParams::new(2, 5, z, 2).map_err(|e| e.to_string())?;
            let collect = |kind: ModelKind| -> Result<Vec<ErasurePattern>, String> {
                Ok(enumerate_admissible(
                    ErasureModel::from_params(kind, &params),
                    &params,
                    Guard::default(),
                )
                .map_err(|e| e.to_string())?
                .collect())
            };
            let cw = collect(ModelKind::CodingWindow)?;
            let sw = collect(ModelKind::SlidingWindow)?;
            let burst = collect(ModelKind::Burst)?;
            for pattern in &sw {
                if !cw.contains(pattern) {
                    return Err(format!(
                        "(2,5,{z},2): sliding-window pattern {{{pattern}}} is not coding-window admissible"
                    ));
                }
            }
            for pattern in &burst {
                for k in 1..=params.n() {
                    let w = params.coding_window(k).map_err(|e| e.to_string())?;
                    let count = pattern.count_in_range(w.start(), w.end());
                    if count > z as usize {
                        return Err(format!(
                            "(2,5,{z},2): burst pattern {{{pattern}}} erases {count} > z in window {k}"
                        ));
                    }
                }
            }
        }
        // At c = 1 every sliding window is a coding window: the enumerations
        // must coincide exactly.
        for (d, z, n) in [(3u32, 1u32, 3u32), (3, 2, 3), (4, 1, 2), (4, 2, 2), (4, 3, 2)] {
            let params = SystemParams::new(1, d, z, n).map_err(|e| e.to_string())?;
            let collect = |kind: ModelKind| -> Result<Vec<ErasurePattern>, String> {
                Ok(enumerate_admissible(
                    ErasureModel::from_params(kind, &params),
                    &params,
                    Guard::default(),
                )
                .map_err(|e| e.to_string())?
                .collect())
            };
            let cw = collect(ModelKind::CodingWindow)?;
            let sw = collect(ModelKind::SlidingWindow)?;
            if cw != sw {
                return Err(format!(
                    "(1,{d},{z},{n}): sliding-window and coding-window enumerations differ ({} vs {})",
                    sw.len(),
                    cw.len()
                ));
            }
        }
        Ok("nesting, per-window budgets, and the c = 1 collapse all hold exhaustively".to_string())
    })());
}
