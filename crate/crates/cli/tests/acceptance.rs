//! Runs every acceptance criterion at its full range and prints one
//! PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

use associahedra::verify::{self, SUITES};
use std::time::Instant;

fn main() {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut failed = 0;
    for (i, name) in SUITES.iter().enumerate() {
        let start = Instant::now();
        let r = verify::run(name, None).expect("suite names are known");
        let secs = start.elapsed().as_secs_f64();
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2} [{name}]: {} checks in {secs:.1}s", i + 1, r.checks.len());
        for c in &r.checks {
            println!("       {} {} ({})", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
        for n in &r.notes {
            println!("       note: {n}");
        }
        if !r.passed() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", SUITES.len() - failed, SUITES.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
