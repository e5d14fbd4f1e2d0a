use holoqec::sim::*;
use holoqec::*;
use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let mut curves = Vec::new();
    for radius in [1usize, 3, 5] {
        let bundle = CodeBundle::build(SeedKind::FiveQubit, radius).unwrap();
        let base = SimulationConfig {
            trials: 800,
            rng_seed: 42,
            ..SimulationConfig::new(SeedKind::FiveQubit, radius, DecoderKind::Optimal)
        };
        let t = Instant::now();
        let optimal = estimate_prec(&bundle, &base).unwrap();
        let t_opt = t.elapsed();
        let greedy = estimate_prec(&bundle, &SimulationConfig { decoder: DecoderKind::Greedy, ..base }).unwrap();
        println!("pentagon R={radius} n={} opt {:.1?} greedy-extra {:.1?}", bundle.code.n, t_opt, t.elapsed() - t_opt);
        let mut best = (0usize, 0.0f64);
        for (o, g) in optimal.entries.iter().zip(&greedy.entries) {
            let gap = o.p_hat - g.p_hat;
            if gap > best.1 { best = (o.weight, gap); }
        }
        println!("  max gap {:.4} at a={} (a/n = {:.3})", best.1, best.0, best.0 as f64 / bundle.code.n as f64);
        curves.push(optimal);
    }
    let report = find_threshold(&curves).unwrap();
    for pc in &report.pairs {
        println!("pair R={}..R={}: crossing {:?}", pc.radius_low, pc.radius_high, pc.crossing);
    }
    println!("total {:.1?}", t0.elapsed());
}
