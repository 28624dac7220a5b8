//! Brute-force verification layer, deliberately independent of the solver:
//! the supplier's expected profit comes from direct quadrature, optimality
//! from a grid argmax, the second-stage equilibrium from deviation scans and
//! realized profits from seeded Monte Carlo.

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::Dist;
use crate::equilibrium::fundamentals;
use crate::error::{Error, Result};
use crate::quad;

// ---------------------------------------------------------------------------
// seeded generator
// ---------------------------------------------------------------------------

/// SplitMix64: tiny counter-based generator with an explicit 64-bit seed.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn seed_from_u64(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw strictly inside (0, 1).
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }
}

// ---------------------------------------------------------------------------
// expected profit and grid argmax
// ---------------------------------------------------------------------------

/// Expected supplier profit `r * n/(n+1) * E[(X - r)^+]`, with the
/// expectation evaluated by adaptive quadrature of the survival function.
pub fn expected_supplier_profit(d: &Dist, n: u32, r: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::ParamDomain("n must be >= 1".into()));
    }
    if r < 0.0 {
        return Err(Error::ParamDomain(format!("price must be >= 0, got {r}")));
    }
    Ok(r * n as f64 / (n as f64 + 1.0) * mean_excess(d, r)?)
}

/// Kinks worth splitting on; dense tabulated knot sets are C1 and skipped.
fn split_cuts(d: &Dist) -> Vec<f64> {
    let mut cuts = d.breakpoints();
    if cuts.len() > 64 {
        cuts.clear();
    }
    let (lo, hi) = d.support();
    cuts.push(lo);
    if hi.is_finite() {
        cuts.push(hi);
    }
    cuts
}

/// `E[(X - r)^+]` as a survival integral by adaptive quadrature.
fn mean_excess(d: &Dist, r: f64) -> Result<f64> {
    let t = d.tail_cutoff(1e-13)?;
    if r >= t {
        return Ok(0.0);
    }
    Ok(quad::adaptive_split(
        &|u| d.survival(u),
        r,
        t,
        &split_cuts(d),
        1e-13,
    ))
}

/// Result of the brute-force supplier optimization.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub grid_argmax: f64,
    pub grid_step: f64,
    pub grid_points: usize,
    pub max_profit: f64,
    /// `(r, expected profit)` samples of the objective
    pub profit_curve: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_estimates: Option<McEstimates>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation_max: Option<f64>,
}

impl OracleReport {
    /// CSV of the profit curve with columns `r,expected_profit`.
    pub fn curve_csv(&self) -> String {
        let mut out = String::from("r,expected_profit\n");
        for &(r, p) in &self.profit_curve {
            out.push_str(&format!("{r:.17e},{p:.17e}\n"));
        }
        out
    }
}

/// Maximizes the supplier's expected profit over an `r` grid.
///
/// The grid covers `(0, quantile(1 - 1e-8))`. The objective is assembled
/// from per-segment Gauss integrals of the survival function accumulated
/// from the right, an independent route from the reliability tail table.
/// Since `n` only rescales the objective, the argmax location is
/// n-independent.
pub fn argmax_grid(d: &Dist, n: u32, grid_points: usize) -> Result<(f64, OracleReport)> {
    if grid_points < 2000 {
        return Err(Error::ParamDomain(format!(
            "oracle grid needs >= 2000 points, got {grid_points}"
        )));
    }
    let hi = d.quantile(1.0 - 1e-8);
    let lo = 0.0;
    let mut grid: Vec<f64> = (0..grid_points)
        .map(|i| lo + (hi - lo) * i as f64 / (grid_points - 1) as f64)
        .collect();
    // align segments on survival kinks so the per-segment Gauss stays exact
    let (slo, shi) = d.support();
    let mut extra = d.breakpoints();
    extra.push(slo);
    if shi.is_finite() {
        extra.push(shi);
    }
    grid.extend(extra.into_iter().filter(|&x| x > lo && x < hi));
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * (1.0 + a.abs()));

    // suffix integrals of survival over the grid, plus the remainder beyond
    let remainder = quad::adaptive(&|u| d.survival(u), hi, d.tail_cutoff(1e-13)?, 1e-13);
    let mut excess = vec![0.0; grid.len()];
    excess[grid.len() - 1] = remainder;
    for i in (0..grid.len() - 1).rev() {
        excess[i] = excess[i + 1] + quad::gauss7(&|u| d.survival(u), grid[i], grid[i + 1]);
    }

    let scale = n as f64 / (n as f64 + 1.0);
    let curve: Vec<(f64, f64)> = grid
        .iter()
        .zip(&excess)
        .map(|(&r, &e)| (r, scale * r * e))
        .collect();

    let (best_idx, &(_, best)) = curve
        .iter()
        .enumerate()
        .max_by(|(_, (_, a)), (_, (_, b))| a.partial_cmp(b).unwrap())
        .unwrap();
    let spread = curve
        .iter()
        .map(|&(_, p)| p)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p), hi.max(p))
        });
    if spread.1 - spread.0 < 1e-12 * (1.0 + spread.1.abs()) {
        return Err(Error::Domain(
            "profit curve is flat across the whole grid".into(),
        ));
    }
    let grid_argmax = curve[best_idx].0;
    let grid_step = (hi - lo) / (grid_points - 1) as f64;
    let report = OracleReport {
        grid_argmax,
        grid_step,
        grid_points: grid.len(),
        max_profit: best,
        profit_curve: curve,
        mc_estimates: None,
        deviation_max: None,
    };
    Ok((grid_argmax, report))
}

// ---------------------------------------------------------------------------
// Cournot deviation check
// ---------------------------------------------------------------------------

/// Largest profit gain any single retailer can reach on `q_grid` by deviating
/// from the candidate `q_i = (alpha - r)^+/(n+1)` while the others hold it.
pub fn cournot_deviation_check(alpha: f64, r: f64, n: u32, q_grid: usize) -> f64 {
    let nf = n as f64;
    let candidate = (alpha - r).max(0.0) / (nf + 1.0);
    let others = (nf - 1.0) * candidate;
    let payoff = |q: f64| q * (alpha - q - others).max(0.0) - r * q;
    let base = payoff(candidate);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..=q_grid {
        let q = alpha * i as f64 / q_grid as f64;
        worst = worst.max(payoff(q) - base);
    }
    worst
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

/// Mean and standard error of each realized profit aggregate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McStat {
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimates {
    pub samples: u64,
    pub seed: u64,
    pub supplier: McStat,
    pub retailer_each: McStat,
    pub integrated: McStat,
    pub decentralized: McStat,
}

const CHUNK: u64 = 1 << 16;

/// Samples realized profits by inverse transform at the solved price.
///
/// Sampling splits into fixed-size chunks with per-chunk seeds derived from
/// the master seed; chunks run in parallel and merge in index order, so the
/// estimate is independent of thread count.
pub fn monte_carlo_profits(
    d: &Dist,
    r_star: f64,
    n: u32,
    samples: u64,
    seed: u64,
) -> Result<McEstimates> {
    if samples < 10_000 {
        return Err(Error::ParamDomain(format!(
            "need at least 1e4 samples, got {samples}"
        )));
    }
    let mut seeder = SplitMix64::seed_from_u64(seed);
    let chunk_count = samples.div_ceil(CHUNK);
    let chunk_seeds: Vec<u64> = (0..chunk_count).map(|_| seeder.next_u64()).collect();

    // per-chunk accumulators: sums and sums of squares for the four profits
    #[derive(Default, Clone, Copy)]
    struct Acc {
        n: u64,
        s: [f64; 4],
        ss: [f64; 4],
    }

    let accs: Vec<Acc> = chunk_seeds
        .par_iter()
        .enumerate()
        .map(|(ci, &cs)| {
            let start = ci as u64 * CHUNK;
            let len = CHUNK.min(samples - start);
            let mut rng = SplitMix64::seed_from_u64(cs);
            let mut acc = Acc {
                n: len,
                ..Default::default()
            };
            let nf = n as f64;
            for _ in 0..len {
                let alpha = d.quantile(rng.next_open01());
                let gap = (alpha - r_star).max(0.0);
                let q = nf / (nf + 1.0) * gap;
                let supplier = q * r_star;
                let retailer = (gap / (nf + 1.0)) * (gap / (nf + 1.0));
                let integrated = r_star * gap;
                let decentralized = supplier + nf * retailer;
                for (k, v) in [supplier, retailer, integrated, decentralized]
                    .into_iter()
                    .enumerate()
                {
                    acc.s[k] += v;
                    acc.ss[k] += v * v;
                }
            }
            acc
        })
        .collect();

    // merge in chunk order
    let mut total = Acc::default();
    for a in accs {
        total.n += a.n;
        for k in 0..4 {
            total.s[k] += a.s[k];
            total.ss[k] += a.ss[k];
        }
    }
    let nn = total.n as f64;
    let stat = |k: usize| {
        let mean = total.s[k] / nn;
        let var = (total.ss[k] / nn - mean * mean).max(0.0);
        McStat {
            mean,
            std_error: (var / nn).sqrt(),
        }
    };
    Ok(McEstimates {
        samples,
        seed,
        supplier: stat(0),
        retailer_each: stat(1),
        integrated: stat(2),
        decentralized: stat(3),
    })
}

/// Quadrature-side expected values matching the Monte Carlo aggregates.
pub fn expected_profiles(d: &Dist, r_star: f64, n: u32) -> Result<ExpectedProfits> {
    let excess = mean_excess(d, r_star)?; // E[(X - r)^+]
    // E[((X-r)^+)^2] = 2 int_r^inf (u - r) survival(u) du
    let t = d.tail_cutoff(1e-13)?;
    let excess_sq = if r_star >= t {
        0.0
    } else {
        2.0 * quad::adaptive_split(
            &|u| (u - r_star) * d.survival(u),
            r_star,
            t,
            &split_cuts(d),
            1e-13,
        )
    };
    let nf = n as f64;
    Ok(ExpectedProfits {
        supplier: nf / (nf + 1.0) * r_star * excess,
        retailer_each: excess_sq / ((nf + 1.0) * (nf + 1.0)),
        integrated: r_star * excess,
        decentralized: nf / (nf + 1.0) * r_star * excess + nf * excess_sq / ((nf + 1.0) * (nf + 1.0)),
    })
}

/// Expected realized profits per market role.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExpectedProfits {
    pub supplier: f64,
    pub retailer_each: f64,
    pub integrated: f64,
    pub decentralized: f64,
}

/// Convenience wrapper: realized fundamentals at a sampled demand value.
pub fn realized_outcome(d: &Dist, r_star: f64, n: u32, u: f64) -> Result<crate::equilibrium::MarketOutcome> {
    fundamentals(r_star, d.quantile(u), n)
}
