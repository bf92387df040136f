use cluster_core::battery::{run_check, BatteryConfig, CRITERIA};

fn main() {
    let cfg = BatteryConfig::full();
    let mut passed = 0;
    for &(id, _) in &CRITERIA {
        let o = run_check(id, &cfg);
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {:>2} {}: {} ({:.2}s)", o.id, o.name, o.detail, o.elapsed.as_secs_f64());
        passed += usize::from(o.passed);
    }
    println!("{passed}/{} criteria passed", CRITERIA.len());
}
