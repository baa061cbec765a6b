fn main() {
    let t0 = std::time::Instant::now();
    let suite = ruelle::verify::heisenberg_suite(Some(2.0)).expect("suite runs");
    suite.print();
    println!("passed: {} in {:.1?}", suite.passed(), t0.elapsed());
}
