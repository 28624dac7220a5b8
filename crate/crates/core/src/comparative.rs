//! Comparative-statics experiment harness.
//!
//! Every experiment certifies its hypothesis numerically (DGMRL/DMRL/IFR
//! certificates, stochastic-order certificates) before testing the predicted
//! price inequality. Cases whose preconditions fail to certify are reported
//! as skipped, never as passed. Price inequalities are tested at `1e-7`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{Dist, PhiSpec};
use crate::equilibrium::{solve, EquilibriumResult};
use crate::error::{Error, Result};
use crate::orders;
use crate::reliability::{GridSpec, Property, Reliability, Strictness};

/// Tolerance for predicted price inequalities.
const PRICE_TOL: f64 = 1e-7;

// ---------------------------------------------------------------------------
// report types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    Pass,
    Fail,
    Skipped,
}

/// One experimental case: inputs, certified preconditions, prediction and
/// observed outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CaseOutcome {
    pub id: String,
    pub inputs: String,
    /// named precondition certificates and whether they held
    pub certified: Vec<(String, bool)>,
    pub predicted: String,
    /// named observed quantities (fixed points, violations, ...)
    pub observed: Vec<(String, f64)>,
    pub status: CaseStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CaseOutcome {
    fn skipped(id: &str, inputs: String, certified: Vec<(String, bool)>, reason: String) -> Self {
        CaseOutcome {
            id: id.into(),
            inputs,
            certified,
            predicted: String::new(),
            observed: Vec::new(),
            status: CaseStatus::Skipped,
            reason: Some(reason),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

/// Outcome of one experiment sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub id: String,
    pub hypothesis: String,
    pub cases: Vec<CaseOutcome>,
    pub summary: Summary,
}

impl ExperimentReport {
    fn assemble(id: &str, hypothesis: &str, mut cases: Vec<CaseOutcome>) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary::default();
        for c in &cases {
            match c.status {
                CaseStatus::Pass => summary.pass += 1,
                CaseStatus::Fail => summary.fail += 1,
                CaseStatus::Skipped => summary.skipped += 1,
            }
        }
        ExperimentReport {
            id: id.into(),
            hypothesis: hypothesis.into(),
            cases,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Cases that ran (pass or fail), excluding skips.
    pub fn ran(&self) -> usize {
        self.summary.pass + self.summary.fail
    }
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

fn dgmrl_certified(d: &Dist) -> Result<bool> {
    let rel = Reliability::new(d)?;
    Ok(rel
        .check_property(Property::Dgmrl, &GridSpec::default(), Strictness::Strict)?
        .holds())
}

fn weak_certified(d: &Dist, property: Property) -> Result<bool> {
    let rel = Reliability::new(d)?;
    Ok(rel
        .check_property(property, &GridSpec::default(), Strictness::Weak)?
        .holds())
}

fn price_case(
    id: &str,
    inputs: String,
    certified: Vec<(String, bool)>,
    predicted: &str,
    lo: &EquilibriumResult,
    hi: &EquilibriumResult,
) -> CaseOutcome {
    let ok = lo.r_star <= hi.r_star + PRICE_TOL;
    CaseOutcome {
        id: id.into(),
        inputs,
        certified,
        predicted: predicted.into(),
        observed: vec![
            ("r_star_low".into(), lo.r_star),
            ("r_star_high".into(), hi.r_star),
        ],
        status: if ok { CaseStatus::Pass } else { CaseStatus::Fail },
        reason: (!ok).then(|| {
            format!(
                "predicted {} but {} > {} + {PRICE_TOL:e}",
                predicted, lo.r_star, hi.r_star
            )
        }),
    }
}

// ---------------------------------------------------------------------------
// scaling
// ---------------------------------------------------------------------------

/// Price response to market rescaling: for DGMRL demand and `c >= 1`,
/// the scaled market `cX` carries a weakly larger wholesale price.
pub fn scale_experiment(d: &Dist, c_values: &[f64]) -> Result<ExperimentReport> {
    let hypothesis = "for DGMRL demand X and c >= 1, r*(X) <= r*(cX)";
    let base_cert = dgmrl_certified(d)?;
    if !base_cert {
        let cases = c_values
            .iter()
            .map(|&c| {
                CaseOutcome::skipped(
                    &format!("scale c={c}"),
                    d.describe(),
                    vec![("DGMRL(X) strict".into(), false)],
                    "base distribution failed the strict DGMRL certificate".into(),
                )
            })
            .collect();
        return Ok(ExperimentReport::assemble("scale", hypothesis, cases));
    }
    let base_eq = solve(d)?;
    let cases: Vec<CaseOutcome> = c_values
        .par_iter()
        .map(|&c| -> Result<CaseOutcome> {
            let id = format!("scale c={c}");
            let certified = vec![("DGMRL(X) strict".into(), true)];
            if c < 1.0 || c.is_nan() {
                return Ok(CaseOutcome::skipped(
                    &id,
                    d.describe(),
                    certified,
                    format!("requires c >= 1, got {c}"),
                ));
            }
            let scaled = d.scale(c)?;
            let eq = solve(&scaled)?;
            Ok(price_case(
                &id,
                format!("{} scaled by {c}", d.describe()),
                certified,
                "r*(X) <= r*(cX)",
                &base_eq,
                &eq,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentReport::assemble("scale", hypothesis, cases))
}

// ---------------------------------------------------------------------------
// convolution (added demand source)
// ---------------------------------------------------------------------------

/// Price response to an independent additional demand source `Z`.
pub fn convolution_experiment(d: &Dist, z: &Dist) -> Result<ExperimentReport> {
    let hypothesis = "for DGMRL demand X and independent nonnegative Z, r*(X) <= r*(X+Z)";
    let id = "convolve";
    let inputs = format!("{} + {}", d.describe(), z.describe());
    let base_cert = dgmrl_certified(d)?;
    if !base_cert {
        return Ok(ExperimentReport::assemble(
            id,
            hypothesis,
            vec![CaseOutcome::skipped(
                id,
                inputs,
                vec![("DGMRL(X) strict".into(), false)],
                "base distribution failed the strict DGMRL certificate".into(),
            )],
        ));
    }
    let base_eq = solve(d)?;
    let sum = Dist::convolve(d, z, 4096)?;
    let eq = solve(&sum)?;
    let mut certified = vec![
        ("DGMRL(X) strict".into(), true),
        ("DGMRL(X+Z) strict".into(), eq.dgmrl_certified),
    ];
    let case = if eq.dgmrl_certified {
        price_case(id, inputs, certified, "r*(X) <= r*(X+Z)", &base_eq, &eq)
    } else {
        // multiplicity fallback: every fixed point of X+Z exceeds r*(X)
        certified.push(("fallback: all fixed points compared".into(), true));
        let min_fp = eq
            .all_fixed_points
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let ok = base_eq.r_star <= min_fp + PRICE_TOL;
        CaseOutcome {
            id: id.into(),
            inputs,
            certified,
            predicted: "r*(X) <= every fixed point of X+Z".into(),
            observed: vec![
                ("r_star_low".into(), base_eq.r_star),
                ("min_fixed_point".into(), min_fp),
                ("fixed_point_count".into(), eq.all_fixed_points.len() as f64),
            ],
            status: if ok { CaseStatus::Pass } else { CaseStatus::Fail },
            reason: (!ok).then(|| format!("fixed point {min_fp} below r*(X) = {}", base_eq.r_star)),
        }
    };
    Ok(ExperimentReport::assemble(id, hypothesis, vec![case]))
}

// ---------------------------------------------------------------------------
// closure of the mrl order
// ---------------------------------------------------------------------------

/// Operations preserving the mrl-order and hence the price ordering:
/// increasing convex maps, IFR convolutions and mixtures.
pub fn closure_experiments(
    x1: &Dist,
    x2: &Dist,
    phi: &PhiSpec,
    z: &Dist,
    p: f64,
) -> Result<ExperimentReport> {
    let hypothesis =
        "mrl-ordered markets keep ordered prices under increasing convex maps, IFR convolution, and mixtures";
    let pair = format!("X1={}, X2={}", x1.describe(), x2.describe());
    let grid = GridSpec::default();

    let mrl_cert = orders::check_mrl(x1, x2, &grid)?.forward_holds();
    let hr_cert = match orders::check_hr(x1, x2, &grid) {
        Ok(v) => v.forward_holds(),
        Err(_) => false,
    };
    let mut cases = Vec::new();

    // (i) increasing convex map
    {
        let id = "closure (i) phi";
        let inputs = format!("{pair}, phi={}", phi.label());
        let mut certified = vec![("X1 <=mrl X2".into(), mrl_cert)];
        if !mrl_cert {
            cases.push(CaseOutcome::skipped(
                id,
                inputs,
                certified,
                "mrl-order certificate failed".into(),
            ));
        } else {
            let t1 = phi.transform(x1)?;
            let t2 = phi.transform(x2)?;
            let eq1 = solve(&t1)?;
            let eq2 = solve(&t2)?;
            certified.push(("DGMRL(phi(X1)) strict".into(), eq1.dgmrl_certified));
            certified.push(("DGMRL(phi(X2)) strict".into(), eq2.dgmrl_certified));
            if eq1.dgmrl_certified && eq2.dgmrl_certified {
                cases.push(price_case(
                    id,
                    inputs,
                    certified,
                    "r*(phi(X1)) <= r*(phi(X2))",
                    &eq1,
                    &eq2,
                ));
            } else {
                cases.push(CaseOutcome::skipped(
                    id,
                    inputs,
                    certified,
                    "transformed variables failed the strict DGMRL certificate".into(),
                ));
            }
        }
    }

    // (ii) convolution with an IFR source; hr-order suffices in place of mrl
    {
        let id = "closure (ii) +Z";
        let inputs = format!("{pair}, Z={}", z.describe());
        let z_ifr = weak_certified(z, Property::Ifr)?;
        let order_ok = mrl_cert || hr_cert;
        let mut certified = vec![
            ("X1 <=mrl X2".into(), mrl_cert),
            ("X1 <=hr X2".into(), hr_cert),
            ("IFR(Z)".into(), z_ifr),
        ];
        if !order_ok || !z_ifr {
            cases.push(CaseOutcome::skipped(
                id,
                inputs,
                certified,
                "order or IFR certificate failed".into(),
            ));
        } else {
            let s1 = Dist::convolve(x1, z, 4096)?;
            let s2 = Dist::convolve(x2, z, 4096)?;
            let eq1 = solve(&s1)?;
            let eq2 = solve(&s2)?;
            certified.push(("DGMRL(X1+Z) strict".into(), eq1.dgmrl_certified));
            certified.push(("DGMRL(X2+Z) strict".into(), eq2.dgmrl_certified));
            if eq1.dgmrl_certified && eq2.dgmrl_certified {
                cases.push(price_case(
                    id,
                    inputs,
                    certified,
                    "r*(X1+Z) <= r*(X2+Z)",
                    &eq1,
                    &eq2,
                ));
            } else {
                cases.push(CaseOutcome::skipped(
                    id,
                    inputs,
                    certified,
                    "convolved variables failed the strict DGMRL certificate".into(),
                ));
            }
        }
    }

    // (iii) mixture bracket
    {
        let id = "closure (iii) mixture";
        let inputs = format!("{pair}, p={p}");
        let mut certified = vec![("X1 <=mrl X2".into(), mrl_cert)];
        if !mrl_cert {
            cases.push(CaseOutcome::skipped(
                id,
                inputs,
                certified,
                "mrl-order certificate failed".into(),
            ));
        } else {
            let mix = Dist::mixture(x1, x2, p)?;
            let eq1 = solve(x1)?;
            let eqp = solve(&mix)?;
            let eq2 = solve(x2)?;
            certified.push(("DGMRL(Xp) strict".into(), eqp.dgmrl_certified));
            if !eqp.dgmrl_certified {
                cases.push(CaseOutcome::skipped(
                    id,
                    inputs,
                    certified,
                    "mixture failed the strict DGMRL certificate".into(),
                ));
            } else {
                let ok = eq1.r_star <= eqp.r_star + PRICE_TOL
                    && eqp.r_star <= eq2.r_star + PRICE_TOL;
                cases.push(CaseOutcome {
                    id: id.into(),
                    inputs,
                    certified,
                    predicted: "r*(X1) <= r*(Xp) <= r*(X2)".into(),
                    observed: vec![
                        ("r_star_x1".into(), eq1.r_star),
                        ("r_star_mix".into(), eqp.r_star),
                        ("r_star_x2".into(), eq2.r_star),
                    ],
                    status: if ok { CaseStatus::Pass } else { CaseStatus::Fail },
                    reason: (!ok).then(|| {
                        format!(
                            "bracket violated: {} / {} / {}",
                            eq1.r_star, eqp.r_star, eq2.r_star
                        )
                    }),
                });
            }
        }
    }

    Ok(ExperimentReport::assemble("closure", hypothesis, cases))
}

// ---------------------------------------------------------------------------
// variability
// ---------------------------------------------------------------------------

/// Less variable demand commands a weakly lower price: the excess-wealth
/// branch needs one DMRL input and ordered left support ends; the dispersive
/// branch needs one IFR input.
pub fn variability_experiments(x1: &Dist, x2: &Dist) -> Result<ExperimentReport> {
    let hypothesis = "ew- or disp-dominated demand with the required aging side conditions yields r*_1 <= r*_2";
    let pair = format!("X1={}, X2={}", x1.describe(), x2.describe());
    let mut cases = Vec::new();

    let dmrl1 = weak_certified(x1, Property::Dmrl)?;
    let dmrl2 = weak_certified(x2, Property::Dmrl)?;
    let ifr1 = weak_certified(x1, Property::Ifr)?;
    let ifr2 = weak_certified(x2, Property::Ifr)?;
    let (l1, _) = x1.support();
    let (l2, _) = x2.support();

    // ew branch
    {
        let id = "variability ew";
        let ew = orders::check_ew(x1, x2, 500)?.forward_holds();
        let support_ok = l1 <= l2 + 1e-12;
        let certified = vec![
            ("X1 <=ew X2".into(), ew),
            ("alpha_L1 <= alpha_L2".into(), support_ok),
            ("DMRL(X1) or DMRL(X2)".into(), dmrl1 || dmrl2),
        ];
        if ew && support_ok && (dmrl1 || dmrl2) {
            let eq1 = solve(x1)?;
            let eq2 = solve(x2)?;
            cases.push(price_case(
                id,
                pair.clone(),
                certified,
                "r*(X1) <= r*(X2)",
                &eq1,
                &eq2,
            ));
        } else {
            cases.push(CaseOutcome::skipped(
                id,
                pair.clone(),
                certified,
                "ew-branch side conditions failed to certify".into(),
            ));
        }
    }

    // disp branch
    {
        let id = "variability disp";
        let disp = orders::check_disp(x1, x2, 200)?.forward_holds();
        let certified = vec![
            ("X1 <=disp X2".into(), disp),
            ("IFR(X1) or IFR(X2)".into(), ifr1 || ifr2),
        ];
        if disp && (ifr1 || ifr2) {
            let eq1 = solve(x1)?;
            let eq2 = solve(x2)?;
            cases.push(price_case(
                id,
                pair.clone(),
                certified,
                "r*(X1) <= r*(X2)",
                &eq1,
                &eq2,
            ));
        } else {
            cases.push(CaseOutcome::skipped(
                id,
                pair.clone(),
                certified,
                "disp-branch side conditions failed to certify".into(),
            ));
        }
    }

    Ok(ExperimentReport::assemble(
        "variability",
        hypothesis,
        cases,
    ))
}

// ---------------------------------------------------------------------------
// normal family
// ---------------------------------------------------------------------------

/// Truncated-normal comparison: `sigma1 < sigma2` with `mu1 <= mu2` puts the
/// markets in the mrl order, hence orders the prices. Coefficients of
/// variation are reported alongside since they can order arbitrarily.
pub fn normal_family_experiment(
    mu1: f64,
    sigma1: f64,
    mu2: f64,
    sigma2: f64,
) -> Result<ExperimentReport> {
    let hypothesis = "normal markets with sigma1 < sigma2, mu1 <= mu2 are mrl-ordered and price-ordered";
    let id = "normal-family";
    let inputs = format!("N({mu1},{sigma1}^2) vs N({mu2},{sigma2}^2), truncated at 0");
    let precondition = sigma1 < sigma2 && mu1 <= mu2;
    if !precondition {
        return Ok(ExperimentReport::assemble(
            id,
            hypothesis,
            vec![CaseOutcome::skipped(
                id,
                inputs,
                vec![("sigma1 < sigma2 and mu1 <= mu2".into(), false)],
                format!("parameter gate failed: sigma1={sigma1}, sigma2={sigma2}, mu1={mu1}, mu2={mu2}"),
            )],
        ));
    }
    let d1 = Dist::truncated_normal(mu1, sigma1)?;
    let d2 = Dist::truncated_normal(mu2, sigma2)?;
    // heavy truncation makes the truncated variant a poor proxy
    let trunc1 = normal_truncated_mass(mu1, sigma1);
    let trunc2 = normal_truncated_mass(mu2, sigma2);
    let poor_proxy = trunc1 > 0.05 || trunc2 > 0.05;

    let mrl_cert = orders::check_mrl(&d1, &d2, &GridSpec::default())?.forward_holds();
    let eq1 = solve(&d1)?;
    let eq2 = solve(&d2)?;
    let m1 = d1.moments();
    let m2 = d2.moments();
    let price_ok = eq1.r_star <= eq2.r_star + PRICE_TOL;
    let ok = mrl_cert && price_ok;
    let case = CaseOutcome {
        id: id.into(),
        inputs,
        certified: vec![
            ("sigma1 < sigma2 and mu1 <= mu2".into(), true),
            ("X1 <=mrl X2".into(), mrl_cert),
            ("truncation mass <= 5%".into(), !poor_proxy),
        ],
        predicted: "X1 <=mrl X2 and r*(X1) <= r*(X2)".into(),
        observed: vec![
            ("r_star_1".into(), eq1.r_star),
            ("r_star_2".into(), eq2.r_star),
            ("cv_1".into(), m1.cv),
            ("cv_2".into(), m2.cv),
            ("truncated_mass_1".into(), trunc1),
            ("truncated_mass_2".into(), trunc2),
        ],
        status: if ok { CaseStatus::Pass } else { CaseStatus::Fail },
        reason: if !ok {
            Some(format!(
                "mrl certificate {mrl_cert}, prices {} vs {}",
                eq1.r_star, eq2.r_star
            ))
        } else if poor_proxy {
            Some("truncation mass exceeds 5%: weak proxy for the untruncated claim".into())
        } else {
            None
        },
    };
    Ok(ExperimentReport::assemble(id, hypothesis, vec![case]))
}

fn normal_truncated_mass(mu: f64, sigma: f64) -> f64 {
    0.5 * libm::erfc(mu / sigma / std::f64::consts::SQRT_2)
}

// ---------------------------------------------------------------------------
// stochastically larger market: counterexample reproduction
// ---------------------------------------------------------------------------

/// Curve data backing the counterexample figure.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleCurves {
    pub r: Vec<f64>,
    pub survival_f: Vec<f64>,
    pub survival_g: Vec<f64>,
    pub log_ratio: Vec<f64>,
    pub mrl_f: Vec<f64>,
    pub mrl_g: Vec<f64>,
    pub r_star_f: f64,
    pub r_star_g: f64,
}

impl CounterexampleCurves {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,survival_F,survival_G,log_ratio,mrl_F,mrl_G\n");
        for i in 0..self.r.len() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                self.r[i],
                self.survival_f[i],
                self.survival_g[i],
                self.log_ratio[i],
                self.mrl_f[i],
                self.mrl_g[i],
            ));
        }
        out
    }
}

/// Reproduces the stochastically-larger-market counterexample with
/// `F = sinusoid(pi, 0.8, 1.2)` and `G = exponential(0.9)`:
/// F st-dominates G yet charges the smaller wholesale price.
///
/// The expected fixed-point windows are `r*_F = 1.0299 +/- 2e-3` and
/// `r*_G = 1.1111 +/- 1e-3`. Direct computation puts the F fixed point at
/// 1.0319975..., verified against independent high-precision oracles, so
/// assertion (b) fails by ~1e-4 of band and the report carries the measured
/// value for audit.
pub fn counterexample_reproduction() -> Result<(ExperimentReport, CounterexampleCurves)> {
    let f = Dist::sinusoid(std::f64::consts::PI, 0.8, 1.2)?;
    let g = Dist::exponential(0.9)?;
    let hypothesis = "F st-dominates G yet r*_G > r*_F; F is neither DMRL nor DGMRL";

    let rel_f = Reliability::new(&f)?;
    let rel_g = Reliability::new(&g)?;
    let eq_f = solve(&f)?;
    let eq_g = solve(&g)?;

    // curve grid: linear across the union of the central quantile ranges
    let lo = f.quantile(1e-6).min(g.quantile(1e-6));
    let hi = f.quantile(1.0 - 1e-6).max(g.quantile(1.0 - 1e-6));
    let n = 2001;
    let r: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let survival_f: Vec<f64> = r.iter().map(|&x| f.survival(x)).collect();
    let survival_g: Vec<f64> = r.iter().map(|&x| g.survival(x)).collect();
    let log_ratio: Vec<f64> = survival_f
        .iter()
        .zip(&survival_g)
        .map(|(&sf, &sg)| sf.ln() - sg.ln())
        .collect();
    let mrl_f: Vec<f64> = r.iter().map(|&x| rel_f.mrl(x)).collect();
    let mrl_g: Vec<f64> = r.iter().map(|&x| rel_g.mrl(x)).collect();

    let mut cases = Vec::new();
    let mut push = |id: &str, predicted: String, observed: Vec<(String, f64)>, ok: bool, reason: Option<String>| {
        cases.push(CaseOutcome {
            id: id.into(),
            inputs: format!("F={}, G={}", f.describe(), g.describe()),
            certified: Vec::new(),
            predicted,
            observed,
            status: if ok { CaseStatus::Pass } else { CaseStatus::Fail },
            reason,
        });
    };

    // (a) log-survival ratio positive across the grid, so G <=st F
    let min_log_ratio = log_ratio.iter().copied().fold(f64::INFINITY, f64::min);
    let st = orders::check_st(&g, &f, &GridSpec::default())?;
    let a_ok = min_log_ratio > 0.0 && st.forward_holds();
    push(
        "a: st-dominance",
        "log(survival_F / survival_G) > 0 on the grid".into(),
        vec![("min_log_ratio".into(), min_log_ratio)],
        a_ok,
        (!a_ok).then(|| "log-survival ratio dipped to zero or below".into()),
    );

    // (b) reference window for r*_F; direct computation gives 1.0319975...,
    // 2.0975e-3 from the rounded 1.0299, so this check fails by design
    let b_ok = (eq_f.r_star - 1.0299).abs() <= 2e-3;
    push(
        "b: r*_F window",
        "|r*_F - 1.0299| <= 2e-3".into(),
        vec![
            ("r_star_f".into(), eq_f.r_star),
            ("gap".into(), (eq_f.r_star - 1.0299).abs()),
        ],
        b_ok,
        (!b_ok).then(|| {
            format!(
                "computed fixed point {} sits {:.4e} from the reference value 1.0299, outside the 2e-3 window; the window excludes the value the density itself implies",
                eq_f.r_star,
                (eq_f.r_star - 1.0299).abs()
            )
        }),
    );

    // (c) r*_G window around the analytic 1/0.9
    let c_ok = (eq_g.r_star - 1.0 / 0.9).abs() <= 1e-3;
    push(
        "c: r*_G window",
        "|r*_G - 1.1111| <= 1e-3".into(),
        vec![("r_star_g".into(), eq_g.r_star)],
        c_ok,
        None,
    );

    // (d) price reversal
    let d_ok = eq_g.r_star > eq_f.r_star;
    push(
        "d: price reversal",
        "r*_G > r*_F".into(),
        vec![
            ("r_star_g".into(), eq_g.r_star),
            ("r_star_f".into(), eq_f.r_star),
        ],
        d_ok,
        None,
    );

    // (e) F fails both aging certificates
    let dmrl = rel_f.check_property(Property::Dmrl, &GridSpec::default(), Strictness::Weak)?;
    let dgmrl = rel_f.check_property(Property::Dgmrl, &GridSpec::default(), Strictness::Weak)?;
    let e_ok = dmrl.holds == crate::reliability::Verdict::Fails
        && dgmrl.holds == crate::reliability::Verdict::Fails
        && dmrl.witness.is_some()
        && dgmrl.witness.is_some();
    push(
        "e: F not DMRL/DGMRL",
        "DMRL and DGMRL certificates fail with witnesses".into(),
        Vec::new(),
        e_ok,
        None,
    );

    // (f) unique fixed points on both sides
    let f_ok = eq_f.all_fixed_points.len() == 1 && eq_g.all_fixed_points.len() == 1;
    push(
        "f: unique fixed points",
        "each MRL has exactly one fixed point".into(),
        vec![
            ("fixed_points_f".into(), eq_f.all_fixed_points.len() as f64),
            ("fixed_points_g".into(), eq_g.all_fixed_points.len() as f64),
        ],
        f_ok,
        None,
    );

    // (g) mrl-order rejection with witness (st and mrl are independent)
    let mrl_check = orders::check_mrl(&g, &f, &GridSpec::default())?;
    let g_ok = !mrl_check.forward_holds() && mrl_check.forward.witness.is_some();
    push(
        "g: mrl rejected",
        "G <=mrl F fails with a witness".into(),
        mrl_check
            .forward
            .witness
            .iter()
            .map(|w| ("witness_r".into(), w.r))
            .collect(),
        g_ok,
        None,
    );

    let report = ExperimentReport::assemble("counterexample", hypothesis, cases);
    let curves = CounterexampleCurves {
        r,
        survival_f,
        survival_g,
        log_ratio,
        mrl_f,
        mrl_g,
        r_star_f: eq_f.r_star,
        r_star_g: eq_g.r_star,
    };
    Ok((report, curves))
}

// ---------------------------------------------------------------------------
// exploratory sweep (asserts nothing)
// ---------------------------------------------------------------------------

/// Searches DGMRL-certified, st-ordered pairs for price reversals. The
/// question whether st-dominance forces a larger price inside the DGMRL
/// class is open; this sweep reports observations and never fails.
pub fn st_price_exploration(corpus: &[Dist]) -> Result<ExperimentReport> {
    let hypothesis = "exploratory: does st-dominance order prices within the DGMRL class?";
    let grid = GridSpec::default();
    let mut pairs = Vec::new();
    for i in 0..corpus.len() {
        for j in 0..corpus.len() {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    let cases: Vec<CaseOutcome> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Option<CaseOutcome>> {
            let (x1, x2) = (&corpus[i], &corpus[j]);
            let st = orders::check_st(x1, x2, &grid)?;
            if !(st.forward_holds() && !st.backward_holds()) {
                return Ok(None);
            }
            if !(dgmrl_certified(x1)? && dgmrl_certified(x2)?) {
                return Ok(None);
            }
            let eq1 = solve(x1)?;
            let eq2 = solve(x2)?;
            let reversal = eq1.r_star > eq2.r_star + PRICE_TOL;
            Ok(Some(CaseOutcome {
                id: format!("st pair {i}->{j}"),
                inputs: format!("{} <=st {}", x1.describe(), x2.describe()),
                certified: vec![
                    ("X1 <=st X2 strictly".into(), true),
                    ("both strictly DGMRL".into(), true),
                ],
                predicted: "observation only".into(),
                observed: vec![
                    ("r_star_1".into(), eq1.r_star),
                    ("r_star_2".into(), eq2.r_star),
                    ("price_reversal".into(), if reversal { 1.0 } else { 0.0 }),
                ],
                status: CaseStatus::Pass,
                reason: reversal
                    .then(|| "price reversal observed in a DGMRL st-ordered pair".into()),
            }))
        })
        .collect::<Result<Vec<Option<CaseOutcome>>>>()?
        .into_iter()
        .flatten()
        .collect();
    if cases.is_empty() {
        return Err(Error::Domain(
            "no strictly st-ordered DGMRL-certified pair in the corpus".into(),
        ));
    }
    Ok(ExperimentReport::assemble(
        "st-exploration",
        hypothesis,
        cases,
    ))
}
