//! One PASS/FAIL line per acceptance criterion (plus INFO context lines);
//! exits nonzero if any criterion fails.

use std::time::Instant;

use modlat_core::validation::{all_passed, run_with, Level, Status};

fn main() {
    let t = Instant::now();
    let lines = run_with(Level::Full, &mut |line| println!("{line}"));
    println!("acceptance finished in {:.1} s", t.elapsed().as_secs_f64());
    if !all_passed(&lines) {
        let failed: Vec<&str> = lines.iter().filter(|l| l.status == Status::Fail).map(|l| l.id.as_str()).collect();
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
