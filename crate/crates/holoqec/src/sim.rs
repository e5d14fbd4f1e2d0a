//! Monte-Carlo estimation of recovery probabilities, binomial mixing into
//! smooth recovery-rate polynomials, and threshold extraction from curve
//! crossings.
//!
//! Sampling is reproducible under any parallel schedule: every trial draws
//! from its own ChaCha stream keyed by (master seed, radius, weight, trial
//! index), and per-weight tallies are plain sums.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::code::CodeBundle;
use crate::erasure::{
    is_recoverable_greedy, ErasurePattern, LogicalCriterion, OptimalDecoder,
};
use crate::error::{Error, Result};
use crate::pauli::SeedKind;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecoderKind {
    Optimal,
    Greedy,
}

impl DecoderKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(DecoderKind::Optimal),
            "greedy" => Ok(DecoderKind::Greedy),
            _ => Err(Error::InvalidArgument(format!(
                "unknown decoder {s:?} (expected optimal or greedy)"
            ))),
        }
    }
}

impl std::fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecoderKind::Optimal => write!(f, "optimal"),
            DecoderKind::Greedy => write!(f, "greedy"),
        }
    }
}

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_EXACT_CUTOFF: u64 = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct SimulationConfig {
    pub kind: SeedKind,
    pub radius: usize,
    pub decoder: DecoderKind,
    /// Monte-Carlo trials per erasure weight when not enumerating.
    pub trials: u64,
    pub rng_seed: u64,
    /// Enumerate all patterns of a weight when their count is at most this.
    pub exact_cutoff: u64,
    pub criterion: LogicalCriterion,
    /// Bulk tile whose logical qubit is decoded.
    pub tile: usize,
}

impl SimulationConfig {
    pub fn new(kind: SeedKind, radius: usize, decoder: DecoderKind) -> Self {
        SimulationConfig {
            kind,
            radius,
            decoder,
            trials: DEFAULT_TRIALS,
            rng_seed: 0,
            exact_cutoff: DEFAULT_EXACT_CUTOFF,
            criterion: LogicalCriterion::Both,
            tile: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveEntry {
    pub weight: usize,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub exact: bool,
}

/// Estimated recovery probability per erasure weight for one code, decoder
/// and tile.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryCurve {
    pub n_sides: usize,
    pub radius: usize,
    pub decoder: DecoderKind,
    pub n: usize,
    pub entries: Vec<CurveEntry>,
}

impl RecoveryCurve {
    fn check_complete(&self) -> Result<()> {
        if self.entries.len() != self.n + 1
            || self
                .entries
                .iter()
                .enumerate()
                .any(|(a, e)| e.weight != a)
        {
            return Err(Error::InvalidArgument(
                "curve must carry one entry per weight 0..=n".into(),
            ));
        }
        Ok(())
    }
}

const WILSON_Z: f64 = 1.959963984540054;

/// Wilson 95% score interval.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The endpoints are exactly 0 and 1 in the degenerate tallies; avoid
    // rounding them into the open interval.
    let low = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (low, high)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn trial_rng(master: u64, radius: u64, weight: u64, trial: u64) -> ChaCha8Rng {
    let h1 = splitmix(master ^ splitmix(radius));
    let h2 = splitmix(h1 ^ splitmix(weight));
    let h3 = splitmix(h2 ^ splitmix(trial));
    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&h1.to_le_bytes());
    seed[8..16].copy_from_slice(&h2.to_le_bytes());
    seed[16..24].copy_from_slice(&h3.to_le_bytes());
    seed[24..32].copy_from_slice(&splitmix(h3 ^ master).to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

/// Uniform weight-a pattern via Fisher-Yates prefix selection.
fn sample_pattern(n: usize, weight: usize, rng: &mut ChaCha8Rng) -> ErasurePattern {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..weight {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    ErasurePattern::from_indices(n, &idx[..weight])
}

/// C(n, k), saturating at `cap + 1` to keep the comparison cheap.
fn binomial_capped(n: u64, k: u64, cap: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return cap + 1;
        }
    }
    acc as u64
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance the lexicographically next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        if idx[i] == i + n - k {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Estimates the recovery probability of the configured tile for every
/// erasure weight. Weights whose pattern count fits under the cutoff are
/// enumerated exhaustively and flagged exact; the rest are sampled with
/// `trials` patterns each. Deterministic for a fixed master seed under any
/// worker count.
pub fn estimate_prec(bundle: &CodeBundle, cfg: &SimulationConfig) -> Result<RecoveryCurve> {
    cfg.validate()?;
    let n = bundle.code.n;
    if cfg.tile >= bundle.code.k {
        return Err(Error::InvalidArgument(format!(
            "tile {} out of range for k={}",
            cfg.tile, bundle.code.k
        )));
    }
    let entries: Vec<CurveEntry> = (0..=n)
        .into_par_iter()
        .map(|weight| estimate_one_weight(bundle, cfg, weight))
        .collect::<Result<_>>()?;
    Ok(RecoveryCurve {
        n_sides: bundle.tiling.n_sides,
        radius: bundle.tiling.radius,
        decoder: cfg.decoder,
        n,
        entries,
    })
}

fn estimate_one_weight(
    bundle: &CodeBundle,
    cfg: &SimulationConfig,
    weight: usize,
) -> Result<CurveEntry> {
    let n = bundle.code.n;
    let decoder = OptimalDecoder::new(&bundle.code);
    let decide = |pattern: &ErasurePattern| -> Result<bool> {
        match cfg.decoder {
            DecoderKind::Optimal => Ok(decoder
                .decide(pattern, cfg.tile, cfg.criterion)?
                .recoverable),
            DecoderKind::Greedy => {
                is_recoverable_greedy(&bundle.tiling, &bundle.seed, pattern, cfg.tile)
            }
        }
    };
    let count = binomial_capped(n as u64, weight as u64, cfg.exact_cutoff);
    if count <= cfg.exact_cutoff {
        let mut successes = 0u64;
        let mut failure: Option<Error> = None;
        for_each_combination(n, weight, |erased| {
            if failure.is_some() {
                return;
            }
            let pattern = ErasurePattern::from_indices(n, erased);
            match decide(&pattern) {
                Ok(true) => successes += 1,
                Ok(false) => {}
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let p_hat = successes as f64 / count as f64;
        Ok(CurveEntry {
            weight,
            trials: count,
            successes,
            p_hat,
            ci_low: p_hat,
            ci_high: p_hat,
            exact: true,
        })
    } else {
        let mut successes = 0u64;
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.rng_seed, cfg.radius as u64, weight as u64, trial);
            let pattern = sample_pattern(n, weight, &mut rng);
            if decide(&pattern)? {
                successes += 1;
            }
        }
        let (ci_low, ci_high) = wilson_interval(successes, cfg.trials);
        Ok(CurveEntry {
            weight,
            trials: cfg.trials,
            successes,
            p_hat: successes as f64 / cfg.trials as f64,
            ci_low,
            ci_high,
            exact: false,
        })
    }
}

/// Evaluates sum_a C(n,a) p^a (1-p)^(n-a) P_rec(a) with log-space weights.
pub fn binomial_mix(curve: &RecoveryCurve, p: f64) -> Result<f64> {
    curve.check_complete()?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    let n = curve.n;
    if p == 0.0 {
        return Ok(curve.entries[0].p_hat);
    }
    if p == 1.0 {
        return Ok(curve.entries[n].p_hat);
    }
    let ln_fact = ln_factorials(n);
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut acc = 0.0;
    for entry in &curve.entries {
        if entry.p_hat == 0.0 {
            continue;
        }
        let a = entry.weight;
        let ln_weight =
            ln_fact[n] - ln_fact[a] - ln_fact[n - a] + a as f64 * lp + (n - a) as f64 * lq;
        acc += ln_weight.exp() * entry.p_hat;
    }
    Ok(acc.clamp(0.0, 1.0))
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n + 1];
    for i in 1..=n {
        v[i] = v[i - 1] + (i as f64).ln();
    }
    v
}

/// Standard error of the mixed value, propagated from the per-weight
/// confidence widths. Exact entries contribute nothing.
fn binomial_mix_sigma(curve: &RecoveryCurve, p: f64) -> Result<f64> {
    curve.check_complete()?;
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    let n = curve.n;
    let ln_fact = ln_factorials(n);
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut var = 0.0;
    for entry in &curve.entries {
        if entry.exact {
            continue;
        }
        let a = entry.weight;
        let ln_weight =
            ln_fact[n] - ln_fact[a] - ln_fact[n - a] + a as f64 * lp + (n - a) as f64 * lq;
        let w = ln_weight.exp();
        let sigma = (entry.ci_high - entry.ci_low) / (2.0 * WILSON_Z);
        var += w * w * sigma * sigma;
    }
    Ok(var.sqrt())
}

/// Crossing of the mixed recovery curves of two successive radii.
#[derive(Clone, Copy, Debug)]
pub struct PairCrossing {
    pub radius_low: usize,
    pub radius_high: usize,
    pub crossing: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ThresholdReport {
    pub pairs: Vec<PairCrossing>,
    /// Mean of the located crossings, when any exist.
    pub mean: Option<f64>,
    /// Largest absolute deviation of a crossing from the mean.
    pub spread: Option<f64>,
}

const BISECTION_TOLERANCE: f64 = 1e-4;
const SCAN_POINTS: usize = 200;

/// Locates the crossing of each successive-radius pair of curves on (0, 1)
/// by a coarse scan plus bisection. Pairs without a strict sign change are
/// reported as having no crossing.
pub fn find_threshold(curves: &[RecoveryCurve]) -> Result<ThresholdReport> {
    if curves.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two curves to find a threshold".into(),
        ));
    }
    let mut sorted: Vec<&RecoveryCurve> = curves.iter().collect();
    sorted.sort_by_key(|c| c.radius);
    for pair in sorted.windows(2) {
        if pair[0].radius == pair[1].radius {
            return Err(Error::InvalidArgument(
                "curves must have distinct radii".into(),
            ));
        }
    }
    let mut pairs = Vec::new();
    for window in sorted.windows(2) {
        let (low, high) = (window[0], window[1]);
        let diff = |p: f64| -> Result<f64> {
            Ok(binomial_mix(high, p)? - binomial_mix(low, p)?)
        };
        // Scan for a sign change between statistically significant samples:
        // |difference| must exceed twice its propagated sampling error on
        // both sides, which suppresses spurious flips where the curves are
        // closer than Monte-Carlo resolution. Exact curves have zero error,
        // recovering the strict sign-change rule. The bracket is then
        // narrowed by bisection.
        let sigma = |p: f64| -> Result<f64> {
            let s_low = binomial_mix_sigma(low, p)?;
            let s_high = binomial_mix_sigma(high, p)?;
            Ok((s_low * s_low + s_high * s_high).sqrt())
        };
        let mut crossing = None;
        let mut last: Option<(f64, f64)> = None;
        for i in 0..=SCAN_POINTS {
            let p = 1e-3 + (0.999 - 1e-3) * i as f64 / SCAN_POINTS as f64;
            let d = diff(p)?;
            if d == 0.0 || d.abs() <= 2.0 * sigma(p)? {
                continue;
            }
            if let Some((lp, ld)) = last {
                if ld.signum() != d.signum() {
                    let (mut lo, mut hi) = (lp, p);
                    let mut d_lo = ld;
                    while hi - lo > BISECTION_TOLERANCE {
                        let mid = 0.5 * (lo + hi);
                        let d_mid = diff(mid)?;
                        if d_mid == 0.0 {
                            lo = mid;
                            hi = mid;
                            break;
                        }
                        if d_mid.signum() == d_lo.signum() {
                            lo = mid;
                            d_lo = d_mid;
                        } else {
                            hi = mid;
                        }
                    }
                    crossing = Some(0.5 * (lo + hi));
                    break;
                }
            }
            last = Some((p, d));
        }
        pairs.push(PairCrossing {
            radius_low: low.radius,
            radius_high: high.radius,
            crossing,
        });
    }
    let found: Vec<f64> = pairs.iter().filter_map(|p| p.crossing).collect();
    let (mean, spread) = if found.is_empty() {
        (None, None)
    } else {
        let mean = found.iter().sum::<f64>() / found.len() as f64;
        let spread = found
            .iter()
            .map(|c| (c - mean).abs())
            .fold(0.0f64, f64::max);
        (Some(mean), Some(spread))
    };
    Ok(ThresholdReport {
        pairs,
        mean,
        spread,
    })
}

pub const CURVE_CSV_HEADER: &str =
    "n_sides,R,decoder,a,n,trials,successes,p_rec_hat,ci_low,ci_high,exact";

/// Writes one curve in the per-weight CSV format.
pub fn write_curve_csv<W: Write>(curve: &RecoveryCurve, mut out: W) -> Result<()> {
    writeln!(out, "{CURVE_CSV_HEADER}")?;
    for e in &curve.entries {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{}",
            curve.n_sides,
            curve.radius,
            curve.decoder,
            e.weight,
            curve.n,
            e.trials,
            e.successes,
            e.p_hat,
            e.ci_low,
            e.ci_high,
            e.exact
        )?;
    }
    Ok(())
}

/// Parses curves from the per-weight CSV format; rows may cover several
/// curves, grouped by (n_sides, R, decoder).
pub fn read_curves_csv<R: BufRead>(reader: R) -> Result<Vec<RecoveryCurve>> {
    let mut curves: Vec<RecoveryCurve> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed == CURVE_CSV_HEADER {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 11 fields, found {}", fields.len()),
            });
        }
        let parse_err = |what: &str| Error::Parse {
            line: line_no,
            message: format!("bad {what}"),
        };
        let n_sides: usize = fields[0].parse().map_err(|_| parse_err("n_sides"))?;
        let radius: usize = fields[1].parse().map_err(|_| parse_err("R"))?;
        let decoder = DecoderKind::parse(fields[2]).map_err(|_| parse_err("decoder"))?;
        let weight: usize = fields[3].parse().map_err(|_| parse_err("a"))?;
        let n: usize = fields[4].parse().map_err(|_| parse_err("n"))?;
        let trials: u64 = fields[5].parse().map_err(|_| parse_err("trials"))?;
        let successes: u64 = fields[6].parse().map_err(|_| parse_err("successes"))?;
        let p_hat: f64 = fields[7].parse().map_err(|_| parse_err("p_rec_hat"))?;
        let ci_low: f64 = fields[8].parse().map_err(|_| parse_err("ci_low"))?;
        let ci_high: f64 = fields[9].parse().map_err(|_| parse_err("ci_high"))?;
        let exact: bool = fields[10].parse().map_err(|_| parse_err("exact"))?;
        let entry = CurveEntry {
            weight,
            trials,
            successes,
            p_hat,
            ci_low,
            ci_high,
            exact,
        };
        match curves.iter_mut().find(|c| {
            c.n_sides == n_sides && c.radius == radius && c.decoder == decoder && c.n == n
        }) {
            Some(curve) => curve.entries.push(entry),
            None => curves.push(RecoveryCurve {
                n_sides,
                radius,
                decoder,
                n,
                entries: vec![entry],
            }),
        }
    }
    for curve in &curves {
        curve.check_complete()?;
    }
    Ok(curves)
}

/// Writes mixed curves sampled on a uniform probability grid as `R,p,p_rec`
/// rows.
pub fn write_mixed_csv<W: Write>(
    curves: &[RecoveryCurve],
    points: usize,
    mut out: W,
) -> Result<()> {
    writeln!(out, "R,p,p_rec")?;
    for curve in curves {
        for i in 0..=points {
            let p = i as f64 / points as f64;
            writeln!(out, "{},{:.4},{:.6}", curve.radius, p, binomial_mix(curve, p)?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::erasure::brute_force_recoverable;

    fn steane_bundle() -> CodeBundle {
        CodeBundle::build(SeedKind::Steane, 1).unwrap()
    }

    fn exact_curve(values: &[f64]) -> RecoveryCurve {
        RecoveryCurve {
            n_sides: 7,
            radius: 1,
            decoder: DecoderKind::Optimal,
            n: values.len() - 1,
            entries: values
                .iter()
                .enumerate()
                .map(|(a, &v)| CurveEntry {
                    weight: a,
                    trials: 1,
                    successes: 0,
                    p_hat: v,
                    ci_low: v,
                    ci_high: v,
                    exact: true,
                })
                .collect(),
        }
    }

    #[test]
    fn steane_exact_values() {
        let bundle = steane_bundle();
        let cfg = SimulationConfig::new(SeedKind::Steane, 1, DecoderKind::Optimal);
        let curve = estimate_prec(&bundle, &cfg).unwrap();
        // Weight counts C(7,a) all fit under the cutoff, so every entry is
        // exact. Anchor values recomputed by the brute-force oracle below.
        assert!(curve.entries.iter().all(|e| e.exact));
        assert_eq!(curve.entries[0].p_hat, 1.0);
        assert_eq!(curve.entries[1].p_hat, 1.0);
        assert_eq!(curve.entries[2].p_hat, 1.0);
        assert_eq!(curve.entries[3].p_hat, 0.8);
        assert_eq!(curve.entries[4].p_hat, 0.2);
        assert_eq!(curve.entries[5].p_hat, 0.0);
        assert_eq!(curve.entries[7].p_hat, 0.0);
        for (a, entry) in curve.entries.iter().enumerate() {
            let mut successes = 0u64;
            let mut total = 0u64;
            for_each_combination(7, a, |erased| {
                let pattern = ErasurePattern::from_indices(7, erased);
                if brute_force_recoverable(&bundle.code, &pattern, 0, LogicalCriterion::Both)
                    .unwrap()
                {
                    successes += 1;
                }
                total += 1;
            });
            assert_eq!(entry.successes, successes);
            assert_eq!(entry.trials, total);
        }
    }

    #[test]
    fn sampled_entries_cover_exact_values() {
        // Force sampling on the Steane code by dropping the cutoff; the
        // Wilson intervals should cover the exact probabilities most of the
        // time.
        let bundle = steane_bundle();
        let exact = [1.0, 1.0, 1.0, 0.8, 0.2, 0.0, 0.0, 0.0];
        let mut covered = 0;
        let mut cells = 0;
        for master in 0..12u64 {
            let cfg = SimulationConfig {
                trials: 400,
                rng_seed: master,
                exact_cutoff: 0,
                ..SimulationConfig::new(SeedKind::Steane, 1, DecoderKind::Optimal)
            };
            let curve = estimate_prec(&bundle, &cfg).unwrap();
            for (a, entry) in curve.entries.iter().enumerate() {
                assert!(!entry.exact);
                cells += 1;
                if entry.ci_low <= exact[a] && exact[a] <= entry.ci_high {
                    covered += 1;
                }
            }
        }
        assert!(
            covered * 100 >= cells * 85,
            "coverage {covered}/{cells} below expectation"
        );
    }

    #[test]
    fn determinism_across_runs_and_worker_counts() {
        let bundle = CodeBundle::build(SeedKind::Steane, 2).unwrap();
        let cfg = SimulationConfig {
            trials: 50,
            rng_seed: 7,
            exact_cutoff: 100,
            ..SimulationConfig::new(SeedKind::Steane, 2, DecoderKind::Optimal)
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| estimate_prec(&bundle, &cfg).unwrap());
        let quad = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| estimate_prec(&bundle, &cfg).unwrap());
        assert_eq!(single, quad);
        let again = estimate_prec(&bundle, &cfg).unwrap();
        assert_eq!(single, again);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_curve_csv(&single, &mut a).unwrap();
        write_curve_csv(&again, &mut b).unwrap();
        assert_eq!(a, b, "CSV must be byte-identical");
    }

    #[test]
    fn mixing_trivial_curves() {
        let all_one = exact_curve(&[1.0; 8]);
        for p in [0.0, 0.3, 0.9, 1.0] {
            assert!((binomial_mix(&all_one, p).unwrap() - 1.0).abs() < 1e-12);
        }
        // P_rec(a) = [a == 0] mixes to (1-p)^n.
        let mut only_zero = vec![0.0; 8];
        only_zero[0] = 1.0;
        let curve = exact_curve(&only_zero);
        for p in [0.0, 0.2, 0.5, 0.8] {
            let expected = (1.0f64 - p).powi(7);
            assert!((binomial_mix(&curve, p).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_matches_full_enumeration_at_half() {
        // At p = 1/2 every erasure subset has weight 2^-n, so the mixed value
        // is the raw success fraction over all 2^7 subsets.
        let bundle = steane_bundle();
        let cfg = SimulationConfig::new(SeedKind::Steane, 1, DecoderKind::Optimal);
        let curve = estimate_prec(&bundle, &cfg).unwrap();
        let mut successes = 0u64;
        for mask in 0u32..128 {
            let erased: Vec<usize> = (0..7).filter(|&i| mask >> i & 1 != 0).collect();
            let pattern = ErasurePattern::from_indices(7, &erased);
            if brute_force_recoverable(&bundle.code, &pattern, 0, LogicalCriterion::Both).unwrap()
            {
                successes += 1;
            }
        }
        let expected = successes as f64 / 128.0;
        assert!((binomial_mix(&curve, 0.5).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn mixing_is_monotone_for_monotone_tables() {
        let bundle = steane_bundle();
        let cfg = SimulationConfig::new(SeedKind::Steane, 1, DecoderKind::Optimal);
        let curve = estimate_prec(&bundle, &cfg).unwrap();
        let mut previous = f64::INFINITY;
        for i in 0..=50 {
            let p = i as f64 / 50.0;
            let value = binomial_mix(&curve, p).unwrap();
            assert!(value <= previous + 1e-12);
            previous = value;
        }
    }

    #[test]
    fn threshold_of_identical_curves_is_absent() {
        let curve = exact_curve(&[1.0, 1.0, 0.5, 0.2, 0.0, 0.0, 0.0, 0.0]);
        let mut other = curve.clone();
        other.radius = 2;
        let report = find_threshold(&[curve, other]).unwrap();
        assert_eq!(report.pairs.len(), 1);
        assert!(report.pairs[0].crossing.is_none());
        assert!(report.mean.is_none());
    }

    #[test]
    fn threshold_bisection_finds_known_crossing() {
        // Two synthetic curves whose mixed difference has a unique root:
        // curve A mixes to (1-p)^2-ish over n=2, curve B to a steeper one.
        let a = RecoveryCurve {
            radius: 1,
            ..exact_curve(&[1.0, 0.5, 0.0])
        };
        let b = RecoveryCurve {
            radius: 2,
            ..exact_curve(&[1.0, 0.75, 0.0])
        };
        // mix_a = (1-p)^2 + 2p(1-p)*0.5 = 1 - p - p^2 + ... compute directly:
        // diff(p) = 2p(1-p)(0.75 - 0.5) = 0.5 p (1-p) > 0 on (0,1): no sign
        // change, so no crossing.
        let report = find_threshold(&[a.clone(), b]).unwrap();
        assert!(report.pairs[0].crossing.is_none());
        // Crossing case: make the higher radius better at small p and worse
        // at large p via weight-0 and weight-2 entries.
        let c = RecoveryCurve {
            radius: 2,
            ..exact_curve(&[1.0, 0.25, 0.5])
        };
        // diff(p) = 2p(1-p)(0.25-0.5) + p^2(0.5-0) = -0.5p(1-p) + 0.5p^2
        //         = 0.5p(2p - 1): root at p = 1/2.
        let report = find_threshold(&[a, c]).unwrap();
        let crossing = report.pairs[0].crossing.unwrap();
        assert!((crossing - 0.5).abs() < 2e-4, "crossing {crossing}");
        assert_eq!(report.mean, Some(crossing));
    }

    #[test]
    fn threshold_rejects_bad_input() {
        let curve = exact_curve(&[1.0, 0.0]);
        assert!(find_threshold(&[curve.clone()]).is_err());
        assert!(find_threshold(&[curve.clone(), curve]).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let bundle = steane_bundle();
        let cfg = SimulationConfig::new(SeedKind::Steane, 1, DecoderKind::Optimal);
        let curve = estimate_prec(&bundle, &cfg).unwrap();
        let mut text = Vec::new();
        write_curve_csv(&curve, &mut text).unwrap();
        let curves = read_curves_csv(&text[..]).unwrap();
        assert_eq!(curves.len(), 1);
        assert_eq!(curves[0], curve);
        // Malformed row reports its line.
        let broken = format!("{CURVE_CSV_HEADER}\n1,2,3\n");
        match read_curves_csv(broken.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn optimal_dominates_greedy_on_shared_patterns() {
        let bundle = CodeBundle::build(SeedKind::FiveQubit, 2).unwrap();
        let base = SimulationConfig {
            trials: 300,
            rng_seed: 99,
            exact_cutoff: 0,
            ..SimulationConfig::new(SeedKind::FiveQubit, 2, DecoderKind::Optimal)
        };
        let optimal = estimate_prec(&bundle, &base).unwrap();
        let greedy = estimate_prec(
            &bundle,
            &SimulationConfig {
                decoder: DecoderKind::Greedy,
                ..base
            },
        )
        .unwrap();
        for (o, g) in optimal.entries.iter().zip(&greedy.entries) {
            assert!(
                o.successes >= g.successes,
                "weight {}: optimal {} < greedy {}",
                o.weight,
                o.successes,
                g.successes
            );
        }
    }

    #[test]
    fn combination_enumerator_counts() {
        let mut count = 0u64;
        for_each_combination(7, 3, |c| {
            assert_eq!(c.len(), 3);
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            count += 1;
        });
        assert_eq!(count, 35);
        let mut zero = 0;
        for_each_combination(5, 0, |_| zero += 1);
        assert_eq!(zero, 1);
    }

    #[test]
    fn binomial_cap() {
        assert_eq!(binomial_capped(7, 3, 1000), 35);
        assert_eq!(binomial_capped(203, 3, 1_000_000), 1_000_001);
        assert_eq!(binomial_capped(10, 0, 5), 1);
    }
}
