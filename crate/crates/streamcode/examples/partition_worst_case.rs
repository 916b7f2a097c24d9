//! Partition the horizon into sets that meet every coding window once,
//! then assemble the worst-case erasure pattern from the costliest sets.
//!
//! Each set is an arithmetic progression hitting every window exactly once,
//! so erasing a whole set removes exactly one share from every message.
//! Erasing the `z` sets that carry the largest shares is the worst an
//! adversary limited to `z` per window can do — it drives every message
//! down to exactly the rate the allocation promises.

use streamcode::codec::decodable_rate;
use streamcode::core::rational_string;
use streamcode::{worst_case_base_pattern, AllocationTable, Partition, ShareOrder, SystemParams};

fn main() {
    let params = SystemParams::new(3, 8, 2, 4).expect("valid parameters");
    println!("{params}  horizon = {} steps", params.horizon());

    let partition = Partition::build(&params);
    let table = AllocationTable::build(&params);
    println!("\nindex sets (one per window offset):");
    for i in 1..=params.d() {
        let steps = partition.set(i);
        let share = table.step(steps[0]).expect("in horizon").share();
        let listed: Vec<String> = steps.iter().map(|t| t.to_string()).collect();
        println!(
            "  set {:>2}  share {:>4}  steps {}",
            i,
            rational_string(share),
            listed.join(" ")
        );
    }

    // Sanity: every window meets every set exactly once.
    for k in 1..=params.n() {
        let window = params.coding_window(k).expect("valid message");
        for i in 1..=params.d() {
            let hits = partition
                .set(i)
                .iter()
                .filter(|&&t| window.contains(t))
                .count();
            assert_eq!(hits, 1, "window {k} must meet set {i} exactly once");
        }
    }
    println!("\nevery coding window meets every set exactly once ✓");

    // Sets ordered by the share their steps carry, ascending; the worst
    // z-erasure pattern is the union of the last z sets in this order.
    let order = ShareOrder::build(&params);
    let seq: Vec<String> = order.sequence().iter().map(|i| i.to_string()).collect();
    println!("sets by carried share, ascending: {}", seq.join(" "));

    let worst = worst_case_base_pattern(&params);
    println!(
        "worst-case pattern (z = {}): {{{worst}}}  ({} erasures)",
        params.z(),
        worst.len()
    );

    // It erases exactly z steps in every coding window...
    for k in 1..=params.n() {
        let window = params.coding_window(k).expect("valid message");
        let hit = worst.count_in_range(window.start(), window.end());
        assert_eq!(hit, params.z() as usize);
    }
    println!("erases exactly z = {} steps in every window ✓", params.z());

    // ...and pins every message to exactly the promised rate.
    let rate = params.achievable_rate();
    println!(
        "\nsurviving bandwidth per message (promised rate {}):",
        rational_string(&rate)
    );
    for k in 1..=params.n() {
        let surviving = decodable_rate(&worst, &table, k).expect("valid message");
        println!("  message {k}: {}", rational_string(&surviving));
        assert_eq!(surviving, rate, "the bound must be tight");
    }
    println!("the worst-case pattern is tight: no slack anywhere ✓");
}
