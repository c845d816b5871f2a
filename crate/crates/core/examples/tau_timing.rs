use std::time::Instant;

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1_000_000);
    let t = Instant::now();
    let f = automorph::gl2::delta_q_expansion(n).unwrap();
    println!(
        "tau up to {n}: {:?}, tau({n}) = {}",
        t.elapsed(),
        f.coefficient(n)
    );
}
