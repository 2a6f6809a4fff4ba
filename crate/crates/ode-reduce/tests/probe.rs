mod common;

use ode_reduce::reduce::{reduce, ReduceOpts};

#[test]
fn probe_reduce_wide() {
    let fx = common::fixture_cubic_wide();
    let t0 = std::time::Instant::now();
    let out = reduce(&fx.ode, 4, &ReduceOpts::default());
    eprintln!("reduce took {:?}", t0.elapsed());
    for line in &out.trace {
        eprintln!("| {line}");
    }
    eprintln!("solutions: {}", out.solutions.len());
    for s in &out.solutions {
        eprintln!("n={} A={} B={} c={} t={} reduced: {}", s.n, s.a, s.b, s.c, s.t, s.reduced);
    }
}
