//! Compare the three adversarial erasure models: admissibility, exhaustive
//! enumeration, and the nesting between them.
//!
//! * coding-window: at most `z` erasures inside each message's own window;
//! * sliding-window: at most `z` inside *every* length-`d` window, a
//!   strictly stronger restriction on the adversary;
//! * burst: erasure runs of length at most `z`, separated by gaps of at
//!   least `d - z` unerased steps.

use streamcode::{
    burst_worst_case, derived_window_patterns, enumerate_admissible, periodic_pattern,
    ErasureModel, ErasurePattern, Guard, ModelKind, SystemParams,
};

fn main() {
    let params = SystemParams::new(2, 5, 2, 3).expect("valid parameters");
    println!("{params}  horizon = {} steps", params.horizon());

    // Admissibility of hand-picked patterns under each model.
    let samples = [
        ErasurePattern::from_steps([1, 2]),
        ErasurePattern::from_steps([1, 2, 5, 6]),
        ErasurePattern::from_steps([1, 2, 4]),
        ErasurePattern::from_steps([2, 4, 6, 8]),
    ];
    println!("\npattern admissibility:");
    println!("{:>14}  cw  sw  burst", "pattern");
    for pattern in &samples {
        let mut cells = Vec::new();
        for kind in ModelKind::all() {
            let model = ErasureModel::from_params(kind, &params);
            cells.push(if model.admits(pattern, &params) { "yes" } else { "no " });
        }
        println!("{:>14}  {}", format!("{{{pattern}}}"), cells.join("  "));
    }

    // Exhaustive enumeration, model by model. Every sliding-window pattern
    // is also a coding-window pattern (the windows W_k are length-d windows),
    // so the sliding-window family nests inside the coding-window family.
    println!("\nadmissible patterns over the whole horizon:");
    let mut families = Vec::new();
    for kind in ModelKind::all() {
        let model = ErasureModel::from_params(kind, &params);
        let patterns: Vec<ErasurePattern> =
            enumerate_admissible(model, &params, Guard::default())
                .expect("horizon within guard")
                .collect();
        println!("  {kind}: {} patterns", patterns.len());
        families.push((kind, patterns));
    }
    let cw = &families[0].1;
    let sw = &families[1].1;
    assert!(
        sw.iter().all(|p| cw.contains(p)),
        "sliding-window patterns must nest inside coding-window patterns"
    );
    println!("  nesting holds: sliding-window ⊆ coding-window ✓");

    // Named worst cases. The periodic pattern erases the tail of every
    // creation interval.
    let periodic = periodic_pattern(&params);
    println!("\nperiodic pattern: {{{periodic}}}");
    let verdicts: Vec<String> = ModelKind::all()
        .into_iter()
        .map(|kind| {
            let model = ErasureModel::from_params(kind, &params);
            format!("{kind}={}", model.admits(&periodic, &params))
        })
        .collect();
    println!("  admissible: {}", verdicts.join("  "));

    // The burst worst case has a closed form only when the budget is small
    // enough for short bursts (z <= c - r) or large enough to swallow whole
    // creation intervals (z >= q*c). z = 2 sits in the middle band here:
    match burst_worst_case(&params) {
        Ok(_) => unreachable!("z = 2 is outside both regimes for c=2 d=5"),
        Err(err) => println!("\nburst worst case at z=2: {err}"),
    }
    // At z = 4 (long regime) a closed form exists. The base pattern itself
    // is a cut-set witness and is generally *not* burst-admissible as a
    // whole — its runs exceed z — but its restriction to any single coding
    // window is: one burst of z steps, or two shorter bursts separated by
    // a gap of d - z. Those restrictions are the admissible patterns the
    // converse bound is built from.
    let long = params.with_budget(4).expect("z < d");
    let burst = burst_worst_case(&long).expect("z >= q*c is covered");
    let spans: Vec<String> = burst
        .runs()
        .iter()
        .map(|(s, e)| format!("{s}..={e}"))
        .collect();
    println!("burst worst case at z=4: {{{burst}}}");
    println!("  maximal runs: {}", spans.join(", "));
    let model = ErasureModel::from_params(ModelKind::Burst, &long);
    println!(
        "  whole pattern burst-admissible: {}",
        model.admits(&burst, &long)
    );
    for (k, derived) in derived_window_patterns(&burst, &long).iter().enumerate() {
        assert!(
            model.admits(derived, &long),
            "restriction to window {} must be admissible",
            k + 1
        );
        println!("  restricted to window {}: {{{derived}}} — admissible ✓", k + 1);
    }
}
