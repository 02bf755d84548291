mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::criteria::{self, Outcome};

fn main() -> ExitCode {
    type Check = (&'static str, fn() -> Outcome);
    let checks: [Check; 9] = [
        (
            "case table of the marked contraction",
            criteria::table_oracle,
        ),
        ("contraction lemma conditions", criteria::lemma_conditions),
        ("instance soundness over the corpus", || {
            criteria::soundness(&criteria::both_variants(), criteria::SOUNDNESS_BUDGET)
        }),
        ("extracted size trend", criteria::size_trend),
        ("quadratic vs linear recursion", criteria::recursion_growth),
        ("early termination", criteria::early_termination),
        ("counterexample orientation", || {
            criteria::orientation_law(
                naw::extract::InductionMode::Simultaneous,
                naw::extract::Variant::QuasiLinear,
            )
        }),
        ("kernel health", criteria::kernel_and_derived),
        ("nulltype table", criteria::epsilon_table),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let res = stacker::maybe_grow(1 << 20, 64 << 20, check);
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        checks.len() - failed,
        checks.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
