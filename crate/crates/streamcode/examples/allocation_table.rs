//! Build the bandwidth allocation for a short session and print it.
//!
//! One message is created every `c = 3` steps and must decode within
//! `d = 8` steps, so up to three coding windows overlap at once. The
//! allocation splits each step's unit bandwidth evenly among the windows
//! that are active there, counting *virtual* windows past both ends of the
//! session so every real message sees the same share profile.

use streamcode::core::{offset_qr, rational_string};
use streamcode::{AllocationTable, SystemParams};

fn main() {
    let params = SystemParams::new(3, 8, 2, 3).expect("valid parameters");
    println!("{params}  horizon = {} steps", params.horizon());

    // The delay split d = q*c + r with r in 1..=c decides how many windows
    // overlap: q+1 of them on the first r steps of each creation interval,
    // q on the rest.
    let split = params.delay_split();
    println!(
        "delay split: d = {}*c + {}  ->  {} or {} overlapping windows per step",
        split.quotient,
        split.remainder,
        split.quotient + 1,
        split.quotient
    );

    let table = AllocationTable::build(&params);
    println!("\n  t  share  active messages (real)");
    for step in table.steps() {
        let real: Vec<String> = step
            .real_active(params.n())
            .map(|k| k.to_string())
            .collect();
        println!(
            "{:>3}  {:>5}  {}",
            step.t(),
            rational_string(step.share()),
            real.join(" ")
        );
    }

    // Every message receives the same multiset of shares across its window:
    // the share profile, sorted ascending.
    let profile = params.share_profile();
    let entries: Vec<String> = profile.entries().iter().map(rational_string).collect();
    println!("\nper-window share profile: [{}]", entries.join(", "));

    // Against z erasures per window the decoder keeps, in the worst case,
    // the d - z smallest shares; their sum is the rate this scheme sustains.
    let kept = params.d() - params.z();
    println!(
        "worst case keeps the {} smallest shares -> rate {}",
        kept,
        rational_string(&params.achievable_rate())
    );

    // The offset quotient/remainder convention behind all of this:
    // a = q*b + r with r in 1..=b (not 0..b), so a multiple of b keeps
    // remainder b. Window membership and share sizes follow from it.
    for a in [7u32, 8, 9] {
        let qr = offset_qr(a, 3).expect("positive inputs");
        println!("offset_qr({a}, 3) = {}*3 + {}", qr.quotient, qr.remainder);
    }
}
