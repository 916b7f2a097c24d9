//! Closed-form rate bounds: the construction's lower bound, cut-set upper
//! bounds, and how the gap between them vanishes as the session grows.

use streamcode::core::{rat, rational_string};
use streamcode::{
    cutset_upper_bound, rate_bounds, worst_case_base_pattern, ModelKind, SystemParams,
};

fn main() {
    // Divisible delay (c | d): the sliding-window bound takes its sharper
    // form and the gap to the construction is exactly (d - z) * c / (d * n),
    // here 10/n — vanishing as the session length n grows.
    println!("sliding-window bounds at c=3 d=9 z=3, growing session:");
    println!("{:>6}  {:>9}  {:>9}  {:>7}", "n", "lower", "upper", "gap");
    for n in [5u32, 10, 100, 1000] {
        let params = SystemParams::new(3, 9, 3, n).expect("valid parameters");
        let report = rate_bounds(&params, ModelKind::SlidingWindow).expect("divisible delay");
        println!(
            "{:>6}  {:>9}  {:>9}  {:>7}",
            n,
            rational_string(&report.lower),
            rational_string(&report.upper),
            rational_string(&report.gap)
        );
        assert_eq!(report.gap, rat(10, n as i64));
    }
    let asym = rate_bounds(
        &SystemParams::new(3, 9, 3, 1000).expect("valid parameters"),
        ModelKind::SlidingWindow,
    )
    .expect("divisible delay");
    println!(
        "asymptotically both meet at {} — the construction is optimal",
        rational_string(&asym.asymptotic)
    );

    // All three models on one parameter set.
    let params = SystemParams::new(3, 8, 2, 7).expect("valid parameters");
    println!("\nall models at {params}:");
    for kind in ModelKind::all() {
        match rate_bounds(&params, kind) {
            Ok(report) => println!(
                "  {kind}: lower {} upper {} gap {}",
                rational_string(&report.lower),
                rational_string(&report.upper),
                rational_string(&report.gap)
            ),
            Err(err) => println!("  {kind}: {err}"),
        }
    }

    // The generic cut-set argument: whatever the code, a message cannot
    // outrun the unerased bandwidth divided among n messages. At the
    // worst-case pattern this is already close to the construction.
    let worst = worst_case_base_pattern(&params);
    println!(
        "\ncut-set bound at the worst-case pattern {{{worst}}}: {}",
        rational_string(&cutset_upper_bound(&params, &worst))
    );
    println!(
        "construction rate:                                {}",
        rational_string(&params.achievable_rate())
    );
}
