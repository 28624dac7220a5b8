//! Wholesale-price equilibrium: the fixed point `r* = m(r*)` of the demand
//! distribution's mean residual life, the realized market fundamentals it
//! induces, profit division and the price of anarchy.

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::reliability::{GridSpec, Property, Reliability, Strictness, Verdict};
use crate::roots;

/// Market primitives: `n` competing retailers facing demand `F`.
#[derive(Debug, Clone)]
pub struct MarketConfig {
    pub n: u32,
    pub demand: Dist,
}

impl MarketConfig {
    pub fn new(n: u32, demand: Dist) -> Result<Self> {
        if n < 1 {
            return Err(Error::ParamDomain("retailer count must be >= 1".into()));
        }
        Ok(MarketConfig { n, demand })
    }
}

/// Solver options for the fixed-point search.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// relative residual tolerance; the bracket shrinks below `tol*(1+r)`
    pub tol: f64,
    pub max_iter: u32,
    /// grid used both for the DGMRL certificate and the multiplicity scan
    pub grid: GridSpec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-9,
            max_iter: 200,
            grid: GridSpec::default(),
        }
    }
}

/// Solved equilibrium wholesale price with its numeric provenance.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumResult {
    pub r_star: f64,
    /// `|r* - m(r*)|`
    pub residual: f64,
    /// final bisection bracket
    pub bracket: (f64, f64),
    /// every fixed point found (a single entry when DGMRL certified)
    pub all_fixed_points: Vec<f64>,
    /// strict-DGMRL grid certificate outcome
    pub dgmrl_certified: bool,
}

/// Solves `r* = m(r*)` for the demand distribution in `cfg`.
///
/// Under a strict-DGMRL certificate the fixed point is unique and bisection
/// on `psi(r) = m(r) - r` converges unconditionally: `psi > 0` near zero
/// (there `m ~ mean`) and `psi < 0` beyond some finite price because the
/// second moment is finite. Without the certificate a dense scan collects
/// every sign change; `r_star` is then the fixed point with the highest
/// expected supplier profit and callers should corroborate with the oracle.
pub fn solve_wholesale_price(demand: &Dist, opts: &SolveOptions) -> Result<EquilibriumResult> {
    if !demand.second_moment().is_finite() {
        return Err(Error::InfiniteMoment(
            "equilibrium existence needs a finite second moment".into(),
        ));
    }
    let rel = Reliability::new(demand)?;
    let dgmrl = rel.check_property(Property::Dgmrl, &opts.grid, Strictness::Strict)?;
    let dgmrl_certified = dgmrl.holds == Verdict::Holds;

    let psi = |r: f64| rel.mrl(r) - r;

    if dgmrl_certified {
        let (lo, hi) = bracket_fixed_point(demand, &psi)?;
        let root = roots::bisect_decreasing(psi, lo, hi, |r| opts.tol * (1.0 + r.abs()), opts.max_iter);
        let r_star = root.x;
        let residual = (rel.mrl(r_star) - r_star).abs();
        if residual > 10.0 * opts.tol * (1.0 + r_star) {
            return Err(Error::Internal(format!(
                "bisection residual {residual:e} exceeds tolerance at r*={r_star}"
            )));
        }
        Ok(EquilibriumResult {
            r_star,
            residual,
            bracket: root.bracket,
            all_fixed_points: vec![r_star],
            dgmrl_certified,
        })
    } else {
        let fixed_points = scan_fixed_points(demand, &psi, opts)?;
        if fixed_points.is_empty() {
            return Err(Error::NoFixedPoint(format!(
                "no sign change of m(r) - r up to the {:.3e} quantile",
                1.0 - 1e-10
            )));
        }
        // realized optimum must be one of the fixed points; rank by the
        // expected-profit objective r * E[(X - r)^+]
        let r_star = fixed_points
            .iter()
            .copied()
            .max_by(|&a, &b| {
                let pa = a * rel.tail_integral(a);
                let pb = b * rel.tail_integral(b);
                pa.partial_cmp(&pb).unwrap()
            })
            .unwrap();
        let residual = (rel.mrl(r_star) - r_star).abs();
        Ok(EquilibriumResult {
            r_star,
            residual,
            bracket: (fixed_points[0], *fixed_points.last().unwrap()),
            all_fixed_points: fixed_points,
            dgmrl_certified,
        })
    }
}

/// Convenience: solve with default options.
pub fn solve(demand: &Dist) -> Result<EquilibriumResult> {
    solve_wholesale_price(demand, &SolveOptions::default())
}

fn bracket_fixed_point(demand: &Dist, psi: &impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    // lower end: psi(0+) = mean > 0; start from a deep quantile and halve
    // toward zero if the support starts high enough to put psi negative there
    let mut lo = demand.quantile(1e-9).max(1e-300);
    let mut guard = 0;
    while psi(lo) <= 0.0 {
        lo *= 0.5;
        guard += 1;
        if guard > 1100 {
            return Err(Error::NoFixedPoint(
                "mean residual life never exceeds r near zero".into(),
            ));
        }
    }
    // upper end: double from the mean until psi < 0 (finite second moment
    // guarantees m(r)/r -> 0)
    let mut hi = demand.mean().max(lo * 2.0);
    guard = 0;
    while psi(hi) >= 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NoFixedPoint(
                "m(r) - r kept a positive sign during doubling".into(),
            ));
        }
    }
    Ok((lo, hi))
}

/// Dense scan for every sign change of `psi`, each refined by bisection.
fn scan_fixed_points(
    demand: &Dist,
    psi: &impl Fn(f64) -> f64,
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    let (alpha_l, _) = demand.support();
    let hi = demand.quantile(1.0 - 1e-10);
    let mut points = Vec::new();

    // below the support start, m(r) = mean - r exactly: fixed point mean/2
    let mean = demand.mean();
    if 0.5 * mean < alpha_l {
        points.push(0.5 * mean);
    }

    let lo = demand.quantile(1e-9).max(alpha_l + 1e-12 * (1.0 + alpha_l));
    let n = 4000.max(opts.grid.points);
    let grid: Vec<f64> = if lo > 0.0 {
        let (a, b) = (lo.ln(), hi.ln());
        (0..n)
            .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
            .collect()
    } else {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    };
    let vals: Vec<f64> = grid.iter().map(|&r| psi(r)).collect();
    for i in 0..n - 1 {
        if vals[i] > 0.0 && vals[i + 1] <= 0.0 || vals[i] <= 0.0 && vals[i + 1] > 0.0 {
            let (a, b) = if vals[i] > 0.0 {
                (grid[i], grid[i + 1])
            } else {
                (grid[i + 1], grid[i])
            };
            let (lo_b, hi_b) = (a.min(b), a.max(b));
            let root = if vals[i] > 0.0 {
                roots::bisect_decreasing(psi, lo_b, hi_b, |r| opts.tol * (1.0 + r.abs()), opts.max_iter)
            } else {
                // increasing crossing: negate to reuse the decreasing kernel
                roots::bisect_decreasing(|r| -psi(r), lo_b, hi_b, |r| opts.tol * (1.0 + r.abs()), opts.max_iter)
            };
            points.push(root.x);
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-7 * (1.0 + a.abs()));
    Ok(points)
}

// ---------------------------------------------------------------------------
// realized market fundamentals
// ---------------------------------------------------------------------------

/// Realized (not expected) market outcome for one demand draw `alpha`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MarketOutcome {
    pub alpha: f64,
    pub r_star: f64,
    pub n: u32,
    /// total quantity `n/(n+1) (alpha - r*)^+`
    pub q_star: f64,
    /// retail price `alpha - q*`
    pub p_star: f64,
    pub profit_supplier: f64,
    pub profit_retailer_each: f64,
    /// integrated chain's realized profit `r* (alpha - r*)^+`
    pub profit_integrated: f64,
    /// decentralized total `supplier + n * retailer`
    pub profit_decentralized: f64,
    /// retailers-to-supplier division `n pi_i / pi_s` (None without trade)
    pub ratio: Option<f64>,
    /// realized efficiency `pi_I / pi_D` (None without trade)
    pub efficiency: Option<f64>,
}

/// Evaluates every realized fundamental for a demand draw.
pub fn fundamentals(r_star: f64, alpha: f64, n: u32) -> Result<MarketOutcome> {
    if r_star < 0.0 || alpha < 0.0 || n < 1 {
        return Err(Error::ParamDomain(format!(
            "fundamentals need r* >= 0, alpha >= 0, n >= 1; got r*={r_star}, alpha={alpha}, n={n}"
        )));
    }
    let nf = n as f64;
    let gap = (alpha - r_star).max(0.0);
    let q_star = nf / (nf + 1.0) * gap;
    let p_star = alpha - q_star;
    let profit_supplier = q_star * r_star;
    let per_retailer_q = gap / (nf + 1.0);
    let profit_retailer_each = per_retailer_q * per_retailer_q;
    let profit_integrated = r_star * gap;
    let profit_decentralized = profit_supplier + nf * profit_retailer_each;
    let trade = gap > 0.0;
    let ratio = if trade && profit_supplier > 0.0 {
        Some(nf * profit_retailer_each / profit_supplier)
    } else {
        None
    };
    let efficiency = if trade && profit_decentralized > 0.0 {
        Some(profit_integrated / profit_decentralized)
    } else {
        None
    };
    Ok(MarketOutcome {
        alpha,
        r_star,
        n,
        q_star,
        p_star,
        profit_supplier,
        profit_retailer_each,
        profit_integrated,
        profit_decentralized,
        ratio,
        efficiency,
    })
}

/// Closed-form profit division `(1/(n+1)) (alpha/r* - 1)` for `alpha > r* > 0`.
pub fn profit_ratio(alpha: f64, r_star: f64, n: u32) -> Result<f64> {
    if r_star <= 0.0 || r_star.is_nan() || alpha <= r_star {
        return Err(Error::NoTransaction { alpha, r_star });
    }
    Ok((alpha / r_star - 1.0) / (n as f64 + 1.0))
}

/// Expected profit `r E[(X - r)^+] = r m(r) survival(r)` of an integrated firm.
pub fn integrated_expected_profit(rel: &Reliability, r: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    r * rel.tail_integral(r)
}

/// Worst-case price of anarchy for `n` retailers: exactly `1 + 1/n`.
pub fn poa(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::ParamDomain("poa needs n >= 1".into()));
    }
    Ok(1.0 + 1.0 / n as f64)
}

/// Realized efficiency ratio at `alpha > r*`:
/// `(n+1)^2 / n * (n + alpha/r*)^{-1}`.
pub fn efficiency_ratio(alpha: f64, r_star: f64, n: u32) -> Result<f64> {
    if r_star <= 0.0 || r_star.is_nan() || alpha <= r_star {
        return Err(Error::NoTransaction { alpha, r_star });
    }
    let nf = n as f64;
    Ok((nf + 1.0) * (nf + 1.0) / nf / (nf + alpha / r_star))
}

/// Empirical price of anarchy: the largest realized efficiency ratio over an
/// `alpha` grid. With grid points approaching `r*` from above this converges
/// to `1 + 1/n`.
pub fn empirical_poa(cfg: &MarketConfig, alpha_grid: &[f64]) -> Result<f64> {
    let eq = solve(&cfg.demand)?;
    let mut best: Option<f64> = None;
    for &alpha in alpha_grid {
        if alpha > eq.r_star {
            let e = efficiency_ratio(alpha, eq.r_star, cfg.n)?;
            best = Some(best.map_or(e, |b: f64| b.max(e)));
        }
    }
    best.ok_or_else(|| {
        Error::Domain(format!(
            "alpha grid has no point above r* = {}",
            eq.r_star
        ))
    })
}
