//! Stochastic-order certificates between two demand distributions.
//!
//! Six orders: usual stochastic (st), hazard rate (hr), mean residual life
//! (mrl), convex (cx), dispersive (disp) and excess wealth (ew). Each check
//! probes both directions on a shared grid and reports witnesses for every
//! failed direction; "holds" always means "no violation found at this
//! resolution", a certificate rather than a proof.
//!
//! Convention note: `X1 <=hr X2` is certified via `h1(r) >= h2(r)` together
//! with monotonicity of the survival ratio `S2/S1`, the convention under
//! which the hr-order implies the mrl-order.

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::reliability::{GridSpec, Reliability};

/// Default tolerance for survival / hazard / quantile comparisons.
const TOL_POINTWISE: f64 = 1e-9;
/// Tolerance for MRL comparisons (they carry quadrature error).
const TOL_MRL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    St,
    Hr,
    Mrl,
    Cx,
    Disp,
    Ew,
}

impl std::str::FromStr for OrderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "st" => Ok(OrderKind::St),
            "hr" => Ok(OrderKind::Hr),
            "mrl" => Ok(OrderKind::Mrl),
            "cx" => Ok(OrderKind::Cx),
            "disp" => Ok(OrderKind::Disp),
            "ew" => Ok(OrderKind::Ew),
            other => Err(Error::ParamDomain(format!("unknown order '{other}'"))),
        }
    }
}

/// Where a direction's defining inequality failed hardest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderWitness {
    /// probe location: `r`, a `(u,v)` quantile pair via `r2`, or `p`
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

/// One direction (`X_a <= X_b`) of an order comparison.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionResult {
    pub holds: bool,
    /// largest signed violation observed (negative means slack everywhere)
    pub max_violation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<OrderWitness>,
}

/// Net direction of the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// X1 <= X2 only
    Forward,
    /// X2 <= X1 only
    Backward,
    /// both weak directions hold (equality within tolerance)
    Both,
    Neither,
}

/// Verdict of one order check.
#[derive(Debug, Clone, Serialize)]
pub struct OrderVerdict {
    pub order: OrderKind,
    pub direction: Direction,
    pub forward: DirectionResult,
    pub backward: DirectionResult,
    pub tolerance: f64,
    pub grid_points: usize,
    /// present when the order's precondition failed (cx with unequal means)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inapplicable: Option<String>,
}

impl OrderVerdict {
    pub fn forward_holds(&self) -> bool {
        self.inapplicable.is_none() && self.forward.holds
    }

    pub fn backward_holds(&self) -> bool {
        self.inapplicable.is_none() && self.backward.holds
    }

    pub fn is_applicable(&self) -> bool {
        self.inapplicable.is_none()
    }

    fn assemble(
        order: OrderKind,
        forward: DirectionResult,
        backward: DirectionResult,
        tolerance: f64,
        grid_points: usize,
    ) -> Self {
        let direction = match (forward.holds, backward.holds) {
            (true, true) => Direction::Both,
            (true, false) => Direction::Forward,
            (false, true) => Direction::Backward,
            (false, false) => Direction::Neither,
        };
        OrderVerdict {
            order,
            direction,
            forward,
            backward,
            tolerance,
            grid_points,
            inapplicable: None,
        }
    }
}

/// Pointwise two-sided comparison: the forward direction holds when
/// `lhs(i) <= rhs(i) + tol` at every probe.
fn compare_pointwise(
    order: OrderKind,
    probes: &[(f64, Option<f64>)],
    lhs: impl Fn(usize) -> f64,
    rhs: impl Fn(usize) -> f64,
    tol: f64,
) -> OrderVerdict {
    let mut fwd = DirectionResult {
        holds: true,
        max_violation: f64::NEG_INFINITY,
        witness: None,
    };
    let mut bwd = DirectionResult {
        holds: true,
        max_violation: f64::NEG_INFINITY,
        witness: None,
    };
    for (i, &(r, r2)) in probes.iter().enumerate() {
        let a = lhs(i);
        let b = rhs(i);
        let fw_viol = a - b;
        if fw_viol > fwd.max_violation {
            fwd.max_violation = fw_viol;
            fwd.witness = Some(OrderWitness { r, r2, lhs: a, rhs: b });
        }
        let bw_viol = b - a;
        if bw_viol > bwd.max_violation {
            bwd.max_violation = bw_viol;
            bwd.witness = Some(OrderWitness { r, r2, lhs: b, rhs: a });
        }
    }
    fwd.holds = fwd.max_violation <= tol;
    bwd.holds = bwd.max_violation <= tol;
    if fwd.holds {
        fwd.witness = None;
    }
    if bwd.holds {
        bwd.witness = None;
    }
    OrderVerdict::assemble(order, fwd, bwd, tol, probes.len())
}

// ---------------------------------------------------------------------------
// st
// ---------------------------------------------------------------------------

/// Usual stochastic order: `X1 <=st X2` iff `S1(r) <= S2(r)` for all r.
pub fn check_st(x1: &Dist, x2: &Dist, grid: &GridSpec) -> Result<OrderVerdict> {
    let rs = grid.build_pair(x1, x2)?;
    let probes: Vec<(f64, Option<f64>)> = rs.iter().map(|&r| (r, None)).collect();
    let s1: Vec<f64> = rs.iter().map(|&r| x1.survival(r)).collect();
    let s2: Vec<f64> = rs.iter().map(|&r| x2.survival(r)).collect();
    Ok(compare_pointwise(
        OrderKind::St,
        &probes,
        |i| s1[i],
        |i| s2[i],
        TOL_POINTWISE,
    ))
}

// ---------------------------------------------------------------------------
// hr
// ---------------------------------------------------------------------------

/// Hazard-rate order. The forward direction (`X1 <=hr X2`) requires
/// `h1 >= h2` pointwise and the survival ratio `S2/S1` nondecreasing; the
/// ratio test doubles as a density-free fallback and covers support ends
/// where one hazard is undefined.
///
/// Errors with `DensityUnavailable` when either input lacks a density; the
/// error carries the ratio-only verdict so callers can still inspect it.
pub fn check_hr(
    x1: &Dist,
    x2: &Dist,
    grid: &GridSpec,
) -> std::result::Result<OrderVerdict, HrError> {
    let rs = grid.build_pair(x1, x2).map_err(HrError::Other)?;
    let ratio = ratio_monotonicity(x1, x2, &rs);

    if !x1.has_density() || !x2.has_density() {
        return Err(HrError::DensityUnavailable {
            fallback: Box::new(ratio),
        });
    }

    let rel1 = Reliability::new(x1).map_err(HrError::Other)?;
    let rel2 = Reliability::new(x2).map_err(HrError::Other)?;
    let mut probes: Vec<(f64, Option<f64>)> = Vec::new();
    let mut h1v: Vec<f64> = Vec::new();
    let mut h2v: Vec<f64> = Vec::new();
    for &r in &rs {
        // hazards are comparable only where both survivals carry mass
        if x1.survival(r) > 1e-12 && x2.survival(r) > 1e-12 {
            if let (Some(h1), Some(h2)) = (rel1.hazard(r), rel2.hazard(r)) {
                probes.push((r, None));
                h1v.push(h1);
                h2v.push(h2);
            }
        }
    }
    // forward wants h1 >= h2; relative tolerance because hazards blow up
    // near bounded support ends
    let mut fwd = DirectionResult {
        holds: true,
        max_violation: f64::NEG_INFINITY,
        witness: None,
    };
    let mut bwd = DirectionResult {
        holds: true,
        max_violation: f64::NEG_INFINITY,
        witness: None,
    };
    for i in 0..probes.len() {
        let scale = 1.0 + h1v[i].abs().max(h2v[i].abs());
        let fw_viol = (h2v[i] - h1v[i]) / scale;
        if fw_viol > fwd.max_violation {
            fwd.max_violation = fw_viol;
            fwd.witness = Some(OrderWitness {
                r: probes[i].0,
                r2: None,
                lhs: h2v[i],
                rhs: h1v[i],
            });
        }
        let bw_viol = (h1v[i] - h2v[i]) / scale;
        if bw_viol > bwd.max_violation {
            bwd.max_violation = bw_viol;
            bwd.witness = Some(OrderWitness {
                r: probes[i].0,
                r2: None,
                lhs: h1v[i],
                rhs: h2v[i],
            });
        }
    }
    fwd.holds = fwd.max_violation <= TOL_POINTWISE && ratio.forward.holds;
    bwd.holds = bwd.max_violation <= TOL_POINTWISE && ratio.backward.holds;
    if fwd.holds {
        fwd.witness = None;
    } else if fwd.max_violation <= TOL_POINTWISE {
        // hazard test passed but the ratio fallback caught a tail violation
        fwd.witness = ratio.forward.witness;
        fwd.max_violation = ratio.forward.max_violation;
    }
    if bwd.holds {
        bwd.witness = None;
    } else if bwd.max_violation <= TOL_POINTWISE {
        bwd.witness = ratio.backward.witness;
        bwd.max_violation = ratio.backward.max_violation;
    }
    Ok(OrderVerdict::assemble(
        OrderKind::Hr,
        fwd,
        bwd,
        TOL_POINTWISE,
        probes.len(),
    ))
}

/// hr check failure modes.
#[derive(Debug)]
pub enum HrError {
    /// an input lacks a density; the survival-ratio fallback is still reported
    DensityUnavailable { fallback: Box<OrderVerdict> },
    Other(Error),
}

impl std::fmt::Display for HrError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HrError::DensityUnavailable { .. } => {
                write!(f, "unsupported input: density unavailable for hr check")
            }
            HrError::Other(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for HrError {}

/// Monotonicity certificate for the survival ratio `S2/S1` (forward
/// direction) and `S1/S2` (backward), in log space.
fn ratio_monotonicity(x1: &Dist, x2: &Dist, rs: &[f64]) -> OrderVerdict {
    let floor = 1e-300;
    let logratio: Vec<Option<f64>> = rs
        .iter()
        .map(|&r| {
            let s1 = x1.survival(r);
            let s2 = x2.survival(r);
            if s1 > floor && s2 > floor {
                Some(s2.ln() - s1.ln())
            } else {
                None
            }
        })
        .collect();
    let mut fwd = DirectionResult {
        holds: true,
        max_violation: f64::NEG_INFINITY,
        witness: None,
    };
    let mut bwd = DirectionResult {
        holds: true,
        max_violation: f64::NEG_INFINITY,
        witness: None,
    };
    for i in 0..rs.len() - 1 {
        if let (Some(a), Some(b)) = (logratio[i], logratio[i + 1]) {
            // forward direction: log ratio nondecreasing, so a - b <= 0
            let fw_viol = a - b;
            if fw_viol > fwd.max_violation {
                fwd.max_violation = fw_viol;
                fwd.witness = Some(OrderWitness {
                    r: rs[i],
                    r2: Some(rs[i + 1]),
                    lhs: a,
                    rhs: b,
                });
            }
            let bw_viol = b - a;
            if bw_viol > bwd.max_violation {
                bwd.max_violation = bw_viol;
                bwd.witness = Some(OrderWitness {
                    r: rs[i],
                    r2: Some(rs[i + 1]),
                    lhs: b,
                    rhs: a,
                });
            }
        }
    }
    fwd.holds = fwd.max_violation <= TOL_POINTWISE;
    bwd.holds = bwd.max_violation <= TOL_POINTWISE;
    if fwd.holds {
        fwd.witness = None;
    }
    if bwd.holds {
        bwd.witness = None;
    }
    OrderVerdict::assemble(OrderKind::Hr, fwd, bwd, TOL_POINTWISE, rs.len())
}

// ---------------------------------------------------------------------------
// mrl
// ---------------------------------------------------------------------------

/// Mean-residual-life order: `X1 <=mrl X2` iff `m1(r) <= m2(r)` for all r.
pub fn check_mrl(x1: &Dist, x2: &Dist, grid: &GridSpec) -> Result<OrderVerdict> {
    if !x1.mean().is_finite() || !x2.mean().is_finite() {
        return Err(Error::InfiniteMoment("mrl order needs finite means".into()));
    }
    let rel1 = Reliability::new(x1)?;
    let rel2 = Reliability::new(x2)?;
    let rs = grid.build_pair(x1, x2)?;
    let probes: Vec<(f64, Option<f64>)> = rs.iter().map(|&r| (r, None)).collect();
    let m1: Vec<f64> = rs.iter().map(|&r| rel1.mrl(r)).collect();
    let m2: Vec<f64> = rs.iter().map(|&r| rel2.mrl(r)).collect();
    Ok(compare_pointwise(
        OrderKind::Mrl,
        &probes,
        |i| m1[i],
        |i| m2[i],
        TOL_MRL,
    ))
}

// ---------------------------------------------------------------------------
// cx
// ---------------------------------------------------------------------------

/// Convex order for equal means: `X1 <=cx X2` iff the survival tail
/// integrals satisfy `I1(r) <= I2(r)` for all r >= 0. Unequal means make
/// the comparison inapplicable (not a failure).
pub fn check_cx(x1: &Dist, x2: &Dist, grid: &GridSpec) -> Result<OrderVerdict> {
    let (mu1, mu2) = (x1.mean(), x2.mean());
    if (mu1 - mu2).abs() >= 1e-6 * (1.0 + mu1.abs()) {
        return Ok(OrderVerdict {
            order: OrderKind::Cx,
            direction: Direction::Neither,
            forward: DirectionResult {
                holds: false,
                max_violation: f64::NAN,
                witness: None,
            },
            backward: DirectionResult {
                holds: false,
                max_violation: f64::NAN,
                witness: None,
            },
            tolerance: TOL_POINTWISE,
            grid_points: 0,
            inapplicable: Some(format!(
                "convex order needs equal means; got {mu1} vs {mu2}"
            )),
        });
    }
    let rel1 = Reliability::new(x1)?;
    let rel2 = Reliability::new(x2)?;
    let mut rs = grid.build_pair(x1, x2)?;
    rs.insert(0, 0.0);
    let probes: Vec<(f64, Option<f64>)> = rs.iter().map(|&r| (r, None)).collect();
    let i1: Vec<f64> = rs.iter().map(|&r| rel1.tail_integral(r)).collect();
    let i2: Vec<f64> = rs.iter().map(|&r| rel2.tail_integral(r)).collect();
    let tol = TOL_POINTWISE * (1.0 + mu1.abs());
    Ok(compare_pointwise(
        OrderKind::Cx,
        &probes,
        |i| i1[i],
        |i| i2[i],
        tol,
    ))
}

// ---------------------------------------------------------------------------
// disp
// ---------------------------------------------------------------------------

/// Dispersive order: quantile spreads `F1^{-1}(v) - F1^{-1}(u)` never exceed
/// those of `F2` over a triangular lattice of `0 < u <= v < 1`.
pub fn check_disp(x1: &Dist, x2: &Dist, lattice: usize) -> Result<OrderVerdict> {
    let n = lattice.max(10);
    let lo = 0.001;
    let hi = 0.999;
    let ps: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let q1: Vec<f64> = ps.iter().map(|&p| x1.quantile(p)).collect();
    let q2: Vec<f64> = ps.iter().map(|&p| x2.quantile(p)).collect();
    let scale = 1.0 + q1[n - 1].abs().max(q2[n - 1].abs());
    let tol = TOL_POINTWISE * scale;

    let mut probes: Vec<(f64, Option<f64>)> = Vec::with_capacity(n * (n - 1) / 2);
    let mut lhs: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    let mut rhs: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            probes.push((ps[i], Some(ps[j])));
            lhs.push(q1[j] - q1[i]);
            rhs.push(q2[j] - q2[i]);
        }
    }
    Ok(compare_pointwise(
        OrderKind::Disp,
        &probes,
        |i| lhs[i],
        |i| rhs[i],
        tol,
    ))
}

// ---------------------------------------------------------------------------
// ew
// ---------------------------------------------------------------------------

/// Excess wealth order: incomplete quantile-tail integrals
/// `int_{F^{-1}(p)}^inf survival` compared over a p-grid.
pub fn check_ew(x1: &Dist, x2: &Dist, probe_points: usize) -> Result<OrderVerdict> {
    if !x1.mean().is_finite() || !x2.mean().is_finite() {
        return Err(Error::InfiniteMoment("ew order needs finite means".into()));
    }
    let rel1 = Reliability::new(x1)?;
    let rel2 = Reliability::new(x2)?;
    let n = probe_points.max(10);
    let lo = 0.001;
    let hi = 0.999;
    let ps: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let probes: Vec<(f64, Option<f64>)> = ps.iter().map(|&p| (p, None)).collect();
    let w1: Vec<f64> = ps
        .iter()
        .map(|&p| rel1.tail_integral(x1.quantile(p)))
        .collect();
    let w2: Vec<f64> = ps
        .iter()
        .map(|&p| rel2.tail_integral(x2.quantile(p)))
        .collect();
    let tol = TOL_POINTWISE * (1.0 + x1.mean().max(x2.mean()));
    Ok(compare_pointwise(
        OrderKind::Ew,
        &probes,
        |i| w1[i],
        |i| w2[i],
        tol,
    ))
}
