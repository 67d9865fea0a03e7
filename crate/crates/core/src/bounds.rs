//! The concavity gap `S(ρ_Av) − x S(ρ1) − (1−x) S(ρ2)` and every bound on
//! it: lower bounds (Kim, Pinsker form, Carlen–Lieb, block Pinsker), upper
//! bounds (binary entropy, Bures/trace forms, Audenaert), Renyi mixture
//! bounds, chain verification and the critical-parameter search.

use serde::Serialize;

use crate::entropies::{
    binary_entropy, bures_sq, max_relative, relative_entropy, renyi, sandwiched, trace_distance,
    von_neumann, ExtendedReal,
};
use crate::error::{Error, Result};
use crate::hermitian::trace_norm;
use crate::states::{block_embed, mix, reverse_mix, DensityMatrix, MixtureProblem};

/// Absolute slack allowed on every chain inequality and identity.
pub const CHAIN_TOLERANCE: f64 = 1e-9;
/// Slack allowed on nonnegativity of the gap and the Carlen–Lieb bound.
pub const NONNEGATIVE_TOLERANCE: f64 = 1e-10;
/// The Kim bound is not evaluated when `|1 − 2x|` is below this.
pub const KIM_EXCLUSION: f64 = 1e-4;
/// Winner margins at or below this are reported as ties.
pub const WINNER_MARGIN: f64 = 1e-9;
/// Upper end of the sandwiched-order search.
pub const A_MAX: f64 = 64.0;
/// Lower end of the sandwiched-order search.
pub const A_MIN: f64 = 1.0 + 1e-4;
/// Upper end of the standard-order search (the order 1 itself is excluded).
pub const B_MAX: f64 = 1.0 - 1e-7;
/// States closer than this in trace distance are degenerate for the search.
pub const DEGENERATE_DISTANCE: f64 = 1e-10;

fn finite(e: ExtendedReal) -> f64 {
    e.finite()
        .expect("support of each state lies inside the support of the mixture")
}

/// `S(ρ_Av) − x S(ρ1) − (1−x) S(ρ2)`.
pub fn concavity_gap(p: &MixtureProblem) -> f64 {
    let x = p.x();
    von_neumann(mix(p)) - x * von_neumann(p.rho1()) - (1.0 - x) * von_neumann(p.rho2())
}

/// `x H(ρ1, ρ_Av) + (1−x) H(ρ2, ρ_Av)`.
pub fn gap_via_relent(p: &MixtureProblem) -> f64 {
    let x = p.x();
    let avg = mix(p);
    x * finite(relative_entropy(p.rho1(), avg)) + (1.0 - x) * finite(relative_entropy(p.rho2(), avg))
}

/// `H(P_AB, P_A ⊗ P_B)` on the block embedding.
pub fn gap_via_block(p: &MixtureProblem) -> ExtendedReal {
    let block = block_embed(p);
    relative_entropy(&block.joint, &block.product())
}

/// Kim's bound `x(1−x)/(1−2x)² · max{H(ρ_Av, ρ_Rev), H(ρ_Rev, ρ_Av)}`.
///
/// Refused with [`Error::IndeterminateAtHalf`] when `|1 − 2x| < 1e-4`: the
/// prefactor diverges while both relative entropies vanish.
pub fn kim_lower(p: &MixtureProblem) -> Result<ExtendedReal> {
    let x = p.x();
    let denom = 1.0 - 2.0 * x;
    if denom.abs() < KIM_EXCLUSION {
        return Err(Error::IndeterminateAtHalf(x));
    }
    let (avg, rev) = (mix(p), reverse_mix(p));
    let worst = relative_entropy(avg, rev).max(relative_entropy(rev, avg));
    Ok(worst.scale(x * (1.0 - x) / (denom * denom)))
}

/// `½ x(1−x) ‖ρ1 − ρ2‖₁²`.
pub fn pinsker_lower(p: &MixtureProblem) -> f64 {
    let x = p.x();
    let d = trace_distance(p.rho1(), p.rho2());
    0.5 * x * (1.0 - x) * d * d
}

/// `−2 log Tr[(x√ρ1 + (1−x)√ρ2) √ρ_Av]`.
pub fn carlen_lieb_lower(p: &MixtureProblem) -> f64 {
    let x = p.x();
    let weighted = &p.rho1().sqrt().scale(x) + &p.rho2().sqrt().scale(1.0 - x);
    -2.0 * weighted.trace_product(&mix(p).sqrt()).ln()
}

/// The Carlen–Lieb bound by its other route: the order-½ Renyi divergence
/// `H_½(P_AB, P_A ⊗ P_B)` on the block embedding.
pub fn carlen_lieb_via_block(p: &MixtureProblem) -> ExtendedReal {
    let block = block_embed(p);
    renyi(0.5, &block.joint, &block.product()).expect("order 1/2 is valid")
}

/// `½ ‖P_AB − P_A ⊗ P_B‖₁²`, computed on the block matrices.
pub fn block_pinsker_lower(p: &MixtureProblem) -> f64 {
    let block = block_embed(p);
    let t = trace_norm(&(block.joint.matrix() - block.product().matrix()));
    0.5 * t * t
}

/// Closed form of [`block_pinsker_lower`]: `2x²(1−x)² ‖ρ1 − ρ2‖₁²`.
pub fn block_pinsker_closed_form(p: &MixtureProblem) -> f64 {
    let x = p.x();
    let d = trace_distance(p.rho1(), p.rho2());
    2.0 * x * x * (1.0 - x) * (1.0 - x) * d * d
}

/// `h(x)`.
pub fn classic_upper(p: &MixtureProblem) -> f64 {
    binary_entropy(p.x()).expect("x in (0, 1)")
}

/// Bures and trace-norm forms of the same upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RfzUpper {
    /// `h(x) D²_Bures(ρ1, ρ2)`.
    pub bures: f64,
    /// `h(x) ‖ρ1 − ρ2‖₁`.
    pub trace: f64,
}

pub fn rfz_upper(p: &MixtureProblem) -> RfzUpper {
    let h = classic_upper(p);
    RfzUpper {
        bures: h * bures_sq(p.rho1(), p.rho2()),
        trace: h * trace_distance(p.rho1(), p.rho2()),
    }
}

/// `h(x) · ½ ‖ρ1 − ρ2‖₁`.
pub fn audenaert_upper(p: &MixtureProblem) -> f64 {
    classic_upper(p) * 0.5 * trace_distance(p.rho1(), p.rho2())
}

/// `x H_b(ρ1, ρ_Av) + (1−x) H_b(ρ2, ρ_Av)` for `b ∈ [½, 1)`.
pub fn renyi_lower_mixture(order: f64, p: &MixtureProblem) -> Result<f64> {
    if !(0.5..1.0).contains(&order) {
        return Err(Error::Domain(format!(
            "standard Renyi mixture order must lie in [1/2, 1), got {order}"
        )));
    }
    mixture_of(p, |rho, avg| renyi(order, rho, avg))
}

/// `x H̃_a(ρ1, ρ_Av) + (1−x) H̃_a(ρ2, ρ_Av)` for `a > 1`.
pub fn sandwiched_upper_mixture(order: f64, p: &MixtureProblem) -> Result<f64> {
    if !(order > 1.0) || !order.is_finite() {
        return Err(Error::Domain(format!(
            "sandwiched Renyi mixture order must exceed 1, got {order}"
        )));
    }
    mixture_of(p, |rho, avg| sandwiched(order, rho, avg))
}

fn mixture_of<F>(p: &MixtureProblem, divergence: F) -> Result<f64>
where
    F: Fn(&DensityMatrix, &DensityMatrix) -> Result<ExtendedReal>,
{
    let x = p.x();
    let avg = mix(p);
    let first = finite(divergence(p.rho1(), avg)?);
    let second = finite(divergence(p.rho2(), avg)?);
    Ok(x * first + (1.0 - x) * second)
}

/// `H_max(ρ1, ρ_Av)` and `H_max(ρ2, ρ_Av)`; capped by `−log x` and `−log(1−x)`.
pub fn max_relative_caps(p: &MixtureProblem) -> (f64, f64) {
    let avg = mix(p);
    (
        finite(max_relative(p.rho1(), avg)),
        finite(max_relative(p.rho2(), avg)),
    )
}

/// Result of the `x = ½`, order-2 computation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HalfMixtureCheck {
    /// `½ [H₂(ρ1, ρ_Av) + H₂(ρ2, ρ_Av)]`.
    pub value: f64,
    /// `Tr ρ_k² ρ_Av⁻¹` for `k = 1, 2`.
    pub trace_terms: [f64; 2],
    /// `value ≤ log 2` and both trace terms `≤ 2`, each with 1e-9 slack.
    pub ok: bool,
}

pub fn h2_half_check(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<HalfMixtureCheck> {
    let p = MixtureProblem::new(0.5, rho1.clone(), rho2.clone())?;
    let avg = mix(&p);
    let inverse = avg.support_power(-1.0);
    let term = |rho: &DensityMatrix| rho.support_power(2.0).trace_product(&inverse);
    let trace_terms = [term(rho1), term(rho2)];
    let value = 0.5
        * (finite(renyi(2.0, rho1, avg)?) + finite(renyi(2.0, rho2, avg)?));
    let ok = value <= std::f64::consts::LN_2 + CHAIN_TOLERANCE
        && trace_terms.iter().all(|&t| t <= 2.0 + CHAIN_TOLERANCE);
    Ok(HalfMixtureCheck {
        value,
        trace_terms,
        ok,
    })
}

/// Which of two lower bounds is larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Hash, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    /// Kim's bound.
    Lowbd0,
    /// `½ x(1−x) ‖ρ1 − ρ2‖₁²`.
    Lowbd1,
    /// Carlen–Lieb.
    Lowbd2,
    Tie,
}

impl Winner {
    pub fn as_str(&self) -> &'static str {
        match self {
            Winner::Lowbd0 => "lowbd0",
            Winner::Lowbd1 => "lowbd1",
            Winner::Lowbd2 => "lowbd2",
            Winner::Tie => "tie",
        }
    }
}

fn pick(a: (Winner, f64), b: (Winner, f64)) -> Winner {
    if (a.1 - b.1).abs() <= WINNER_MARGIN {
        Winner::Tie
    } else if a.1 > b.1 {
        a.0
    } else {
        b.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// `lhs ≤ rhs`; slack is `rhs − lhs`.
    Inequality,
    /// `lhs = rhs`; slack is `−|lhs − rhs|`.
    Identity,
}

/// Provenance of a checked relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, PartialOrd, Ord, Hash)]
#[serde(rename_all = "lowercase")]
pub enum CheckGroup {
    /// `audenaert ≥ gap ≥ lowbd1`.
    Theorem1,
    /// Two routes to the same quantity.
    Identity,
    /// Other orderings derived alongside the main chain.
    Derived,
    /// Bounds quoted from elsewhere, checked in the printed form. The
    /// printed Kim bound and the squared-Bures upper bound both have
    /// numerical counterexamples.
    Cited,
}

/// Which groups a caller treats as binding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckSelection {
    All,
    /// Everything except [`CheckGroup::Cited`].
    Core,
    Theorem1,
}

impl CheckSelection {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckSelection::All => "all",
            CheckSelection::Core => "core",
            CheckSelection::Theorem1 => "theorem1",
        }
    }

    pub fn includes(&self, group: CheckGroup) -> bool {
        match self {
            CheckSelection::All => true,
            CheckSelection::Core => group != CheckGroup::Cited,
            CheckSelection::Theorem1 => group == CheckGroup::Theorem1,
        }
    }
}

/// One verified relation.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCheck {
    pub name: &'static str,
    pub group: CheckGroup,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub ok: bool,
}

impl ChainCheck {
    fn le(name: &'static str, group: CheckGroup, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = rhs - lhs;
        ChainCheck {
            name,
            group,
            kind: CheckKind::Inequality,
            lhs,
            rhs,
            slack,
            tolerance,
            ok: slack >= -tolerance,
        }
    }

    fn eq(name: &'static str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = -(lhs - rhs).abs();
        ChainCheck {
            name,
            group: CheckGroup::Identity,
            kind: CheckKind::Identity,
            lhs,
            rhs,
            slack,
            tolerance,
            ok: -slack < tolerance,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LowerBounds {
    /// `None` when `x` is within the exclusion band around ½.
    pub kim: Option<ExtendedReal>,
    pub pinsker: f64,
    pub carlen_lieb: f64,
    pub block_pinsker: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct UpperBounds {
    pub binary_entropy: f64,
    pub rfz_bures: f64,
    pub rfz_trace: f64,
    pub audenaert: f64,
}

/// Second routes to the same quantities, kept for the identity checks.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AlternateRoutes {
    pub gap_via_relent: f64,
    pub gap_via_block: ExtendedReal,
    pub carlen_lieb_via_block: ExtendedReal,
    pub block_pinsker_closed_form: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Comparison {
    /// lowbd1 against lowbd2.
    pub winner: Winner,
    /// lowbd2 against lowbd0, when Kim's bound is defined.
    pub carlen_lieb_vs_kim: Option<Winner>,
    /// Strongest of all three (ties reported as ties).
    pub strongest: Winner,
}

/// Every bound for one problem, with per-relation verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub x: f64,
    pub dim: usize,
    pub gap: f64,
    pub lower: LowerBounds,
    pub upper: UpperBounds,
    pub routes: AlternateRoutes,
    pub comparison: Comparison,
    pub checks: Vec<ChainCheck>,
    pub chain_ok: bool,
}

impl BoundReport {
    pub fn failures(&self) -> impl Iterator<Item = &ChainCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }

    pub fn failures_in(&self, selection: CheckSelection) -> impl Iterator<Item = &ChainCheck> {
        self.failures().filter(move |c| selection.includes(c.group))
    }

    pub fn ok_for(&self, selection: CheckSelection) -> bool {
        self.failures_in(selection).next().is_none()
    }

    pub fn check(&self, name: &str) -> Option<&ChainCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Largest `|slack|` over the inequality checks.
    pub fn max_abs_slack(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::Inequality)
            .map(|c| c.slack.abs())
            .fold(0.0, f64::max)
    }
}

pub fn full_report(p: &MixtureProblem) -> BoundReport {
    full_report_with_tolerance(p, CHAIN_TOLERANCE)
}

/// Evaluates the gap and every bound, and checks the orderings the theory
/// asserts with `tolerance` absolute slack.
pub fn full_report_with_tolerance(p: &MixtureProblem, tolerance: f64) -> BoundReport {
    let gap = concavity_gap(p);
    let kim = kim_lower(p).ok();
    let pinsker = pinsker_lower(p);
    let carlen_lieb = carlen_lieb_lower(p);
    let block_pinsker = block_pinsker_lower(p);
    let rfz = rfz_upper(p);
    let upper = UpperBounds {
        binary_entropy: classic_upper(p),
        rfz_bures: rfz.bures,
        rfz_trace: rfz.trace,
        audenaert: audenaert_upper(p),
    };
    let routes = AlternateRoutes {
        gap_via_relent: gap_via_relent(p),
        gap_via_block: gap_via_block(p),
        carlen_lieb_via_block: carlen_lieb_via_block(p),
        block_pinsker_closed_form: block_pinsker_closed_form(p),
    };

    let mut checks = vec![
        ChainCheck::le("gap>=0", CheckGroup::Derived, 0.0, gap, NONNEGATIVE_TOLERANCE.min(tolerance)),
        ChainCheck::le("lowbd1<=gap", CheckGroup::Theorem1, pinsker, gap, tolerance),
    ];
    if let Some(k) = kim {
        checks.push(ChainCheck::le("lowbd0<=gap", CheckGroup::Cited, k.value(), gap, tolerance));
        checks.push(ChainCheck::le("lowbd1<=lowbd0", CheckGroup::Derived, pinsker, k.value(), tolerance));
    }
    checks.extend([
        ChainCheck::le("lowbd2<=gap", CheckGroup::Derived, carlen_lieb, gap, tolerance),
        ChainCheck::le("lowbd2>=0", CheckGroup::Derived, 0.0, carlen_lieb, NONNEGATIVE_TOLERANCE.min(tolerance)),
        ChainCheck::le("block_pinsker<=lowbd1", CheckGroup::Derived, block_pinsker, pinsker, tolerance),
        ChainCheck::le("gap<=audenaert", CheckGroup::Theorem1, gap, upper.audenaert, tolerance),
        ChainCheck::le("audenaert<=upbd", CheckGroup::Derived, upper.audenaert, upper.binary_entropy, tolerance),
        ChainCheck::le("gap<=rfz_bures", CheckGroup::Cited, gap, upper.rfz_bures, tolerance),
        ChainCheck::le("rfz_bures<=rfz_trace", CheckGroup::Derived, upper.rfz_bures, upper.rfz_trace, tolerance),
        ChainCheck::eq("gap==gap_via_relent", gap, routes.gap_via_relent, tolerance),
        ChainCheck::eq("gap==gap_via_block", gap, routes.gap_via_block.value(), tolerance),
        ChainCheck::eq(
            "lowbd2==renyi_half_block",
            carlen_lieb,
            routes.carlen_lieb_via_block.value(),
            tolerance,
        ),
        ChainCheck::eq(
            "block_pinsker==closed_form",
            block_pinsker,
            routes.block_pinsker_closed_form,
            tolerance,
        ),
    ]);
    let chain_ok = checks.iter().all(|c| c.ok);

    let winner = pick((Winner::Lowbd1, pinsker), (Winner::Lowbd2, carlen_lieb));
    let carlen_lieb_vs_kim = kim.map(|k| pick((Winner::Lowbd0, k.value()), (Winner::Lowbd2, carlen_lieb)));
    let strongest = strongest_of(kim.map(|k| k.value()), pinsker, carlen_lieb);

    BoundReport {
        x: p.x(),
        dim: p.dim(),
        gap,
        lower: LowerBounds {
            kim,
            pinsker,
            carlen_lieb,
            block_pinsker,
        },
        upper,
        routes,
        comparison: Comparison {
            winner,
            carlen_lieb_vs_kim,
            strongest,
        },
        checks,
        chain_ok,
    }
}

fn strongest_of(kim: Option<f64>, pinsker: f64, carlen_lieb: f64) -> Winner {
    let mut candidates = vec![(Winner::Lowbd1, pinsker), (Winner::Lowbd2, carlen_lieb)];
    if let Some(k) = kim {
        candidates.push((Winner::Lowbd0, k));
    }
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1));
    if candidates[0].1 - candidates[1].1 <= WINNER_MARGIN {
        Winner::Tie
    } else {
        candidates[0].0
    }
}

/// Outcome of a one-sided parameter search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CriticalValue {
    /// The relation already holds at the end of the range where it is
    /// hardest, so the critical value is that endpoint.
    Endpoint { value: f64 },
    /// Bisection bracket; `satisfied` is the endpoint where the relation
    /// holds, `violated` where it fails.
    Bracket { satisfied: f64, violated: f64 },
    /// Holds on the whole searched range.
    HoldsForAllTested { up_to: f64 },
    /// Fails on the whole searched range.
    NoneInRange,
}

impl CriticalValue {
    pub fn width(&self) -> f64 {
        match *self {
            CriticalValue::Bracket { satisfied, violated } => (satisfied - violated).abs(),
            _ => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridPoint {
    pub order: f64,
    pub mixture: f64,
    pub reference: f64,
    pub satisfied: bool,
}

/// Critical Renyi orders for one problem.
///
/// `b_c` is the smallest standard order in `[½, 1)` whose mixture lower
/// bound reaches the Pinsker form. `a_star` is the largest sandwiched order
/// in `(1, 64]` whose mixture upper bound stays below Audenaert's bound; the
/// valid set is an interval starting at `1⁺` because the sandwiched family
/// is nondecreasing in the order.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalParams {
    pub b_c: CriticalValue,
    pub a_star: CriticalValue,
    pub pinsker: f64,
    pub audenaert: f64,
    pub b_grid: Vec<GridPoint>,
    pub a_grid: Vec<GridPoint>,
    pub tolerance: f64,
    pub a_max: f64,
}

pub const B_GRID: [f64; 11] = [0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 0.99];
pub const A_GRID: [f64; 10] = [A_MIN, 1.1, 1.5, 2.0, 4.0, 8.0, 16.0, 32.0, 48.0, A_MAX];

pub fn find_critical_params(p: &MixtureProblem, tolerance: f64) -> Result<CriticalParams> {
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::Domain(format!("bisection tolerance must be positive, got {tolerance}")));
    }
    let distance = trace_distance(p.rho1(), p.rho2());
    if distance < DEGENERATE_DISTANCE {
        return Err(Error::DegenerateProblem(distance));
    }
    let pinsker = pinsker_lower(p);
    let audenaert = audenaert_upper(p);

    let lower_ok = |b: f64| -> Result<(f64, bool)> {
        let v = renyi_lower_mixture(b, p)?;
        Ok((v, v >= pinsker))
    };
    let upper_ok = |a: f64| -> Result<(f64, bool)> {
        let v = sandwiched_upper_mixture(a, p)?;
        Ok((v, v <= audenaert))
    };

    let b_grid = B_GRID
        .iter()
        .map(|&b| {
            lower_ok(b).map(|(mixture, satisfied)| GridPoint {
                order: b,
                mixture,
                reference: pinsker,
                satisfied,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let a_grid = A_GRID
        .iter()
        .map(|&a| {
            upper_ok(a).map(|(mixture, satisfied)| GridPoint {
                order: a,
                mixture,
                reference: audenaert,
                satisfied,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // Lower bound: satisfied set is an up-set in b.
    let b_c = if lower_ok(0.5)?.1 {
        CriticalValue::Endpoint { value: 0.5 }
    } else if !lower_ok(B_MAX)?.1 {
        CriticalValue::NoneInRange
    } else {
        let (sat, vio) = bisect(B_MAX, 0.5, tolerance, |b| lower_ok(b).map(|r| r.1))?;
        CriticalValue::Bracket {
            satisfied: sat,
            violated: vio,
        }
    };

    // Upper bound: satisfied set is a down-set in a.
    let a_star = if !upper_ok(A_MIN)?.1 {
        CriticalValue::NoneInRange
    } else if upper_ok(A_MAX)?.1 {
        CriticalValue::HoldsForAllTested { up_to: A_MAX }
    } else {
        let (sat, vio) = bisect(A_MIN, A_MAX, tolerance, |a| upper_ok(a).map(|r| r.1))?;
        CriticalValue::Bracket {
            satisfied: sat,
            violated: vio,
        }
    };

    Ok(CriticalParams {
        b_c,
        a_star,
        pinsker,
        audenaert,
        b_grid,
        a_grid,
        tolerance,
        a_max: A_MAX,
    })
}

/// Shrinks `[satisfied, violated]` (in either order) until its width is at
/// most `tolerance`.
fn bisect<F>(mut satisfied: f64, mut violated: f64, tolerance: f64, holds: F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<bool>,
{
    while (satisfied - violated).abs() > tolerance {
        let mid = 0.5 * (satisfied + violated);
        if mid == satisfied || mid == violated {
            break;
        }
        if holds(mid)? {
            satisfied = mid;
        } else {
            violated = mid;
        }
    }
    Ok((satisfied, violated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{from_bloch, random_density, BlochVector, SamplerConfig};
    use std::f64::consts::LN_2;

    fn bloch(w: [f64; 3]) -> DensityMatrix {
        from_bloch(BlochVector::new(w).unwrap())
    }

    fn orthogonal_half() -> MixtureProblem {
        MixtureProblem::new(0.5, bloch([0.0, 0.0, 1.0]), bloch([0.0, 0.0, -1.0])).unwrap()
    }

    fn appendix_a() -> MixtureProblem {
        MixtureProblem::new(
            0.7086,
            bloch([0.2876, 0.4322, 0.3112]),
            bloch([-0.1552, -0.0532, -0.0874]),
        )
        .unwrap()
    }

    fn appendix_b() -> MixtureProblem {
        MixtureProblem::new(
            0.2197,
            bloch([-0.2136, 0.0702, -0.0944]),
            bloch([-0.5204, 0.7790, -0.1772]),
        )
        .unwrap()
    }

    fn kl(p: &[f64], q: &[f64]) -> f64 {
        p.iter()
            .zip(q)
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, b)| a * (a / b).ln())
            .sum()
    }

    fn shannon(p: &[f64]) -> f64 {
        -p.iter().filter(|a| **a > 0.0).map(|a| a * a.ln()).sum::<f64>()
    }

    // Eigenvalues (1 ± r)/2 for a qubit with Bloch radius r.
    fn qubit_entropy(w: [f64; 3]) -> f64 {
        let r = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        shannon(&[(1.0 - r) / 2.0, (1.0 + r) / 2.0])
    }

    #[test]
    fn gap_examples() {
        let r = bloch([0.2876, 0.4322, 0.3112]);
        let same = MixtureProblem::new(0.4, r.clone(), r).unwrap();
        assert!(concavity_gap(&same).abs() < 1e-14);
        assert!(gap_via_relent(&same).abs() < 1e-12);

        assert!((concavity_gap(&orthogonal_half()) - LN_2).abs() < 1e-15);
        assert!((gap_via_relent(&orthogonal_half()) - LN_2).abs() < 1e-14);

        // Bloch vectors mix linearly, so the qubit gap reduces to scalar entropies.
        let (w1, w2, x) = ([0.2876, 0.4322, 0.3112], [-0.1552, -0.0532, -0.0874], 0.7086);
        let wav = [0, 1, 2].map(|k| x * w1[k] + (1.0 - x) * w2[k]);
        let oracle = qubit_entropy(wav) - x * qubit_entropy(w1) - (1.0 - x) * qubit_entropy(w2);
        let p = appendix_a();
        assert!(concavity_gap(&p) > 0.0);
        assert!((concavity_gap(&p) - oracle).abs() < 1e-14);
        assert!((gap_via_relent(&p) - oracle).abs() < 1e-12);
    }

    #[test]
    fn kim_examples() {
        let r = bloch([0.1, 0.2, 0.3]);
        let same = MixtureProblem::new(0.3, r.clone(), r).unwrap();
        assert!(kim_lower(&same).unwrap().value().abs() < 1e-13);

        assert!(matches!(kim_lower(&orthogonal_half()), Err(Error::IndeterminateAtHalf(_))));
        let near = MixtureProblem::new(0.5 + 4e-5, bloch([0.0, 0.0, 1.0]), bloch([0.0, 0.0, -1.0])).unwrap();
        assert!(kim_lower(&near).is_err());

        let p1 = [0.1, 0.2, 0.7];
        let p2 = [0.5, 0.3, 0.2];
        let x = 0.25;
        let avg: Vec<f64> = (0..3).map(|k| x * p1[k] + (1.0 - x) * p2[k]).collect();
        let rev: Vec<f64> = (0..3).map(|k| x * p2[k] + (1.0 - x) * p1[k]).collect();
        let oracle = x * (1.0 - x) / (1.0 - 2.0 * x).powi(2) * kl(&avg, &rev).max(kl(&rev, &avg));
        let p = MixtureProblem::new(
            x,
            DensityMatrix::from_diagonal(&p1).unwrap(),
            DensityMatrix::from_diagonal(&p2).unwrap(),
        )
        .unwrap();
        assert!((kim_lower(&p).unwrap().value() - oracle).abs() < 1e-14);
    }

    #[test]
    fn pinsker_examples() {
        let r = bloch([0.1, 0.2, 0.3]);
        assert_eq!(pinsker_lower(&MixtureProblem::new(0.3, r.clone(), r).unwrap()), 0.0);
        assert_eq!(pinsker_lower(&orthogonal_half()), 0.5);
        let p = appendix_a();
        assert!(pinsker_lower(&p) > carlen_lieb_lower(&p));
    }

    #[test]
    fn carlen_lieb_examples() {
        let r = bloch([0.1, 0.2, 0.3]);
        let same = MixtureProblem::new(0.3, r.clone(), r).unwrap();
        assert!(carlen_lieb_lower(&same).abs() < 1e-14);
        assert!((carlen_lieb_lower(&orthogonal_half()) - LN_2).abs() < 1e-15);
        let p = appendix_b();
        assert!(carlen_lieb_lower(&p) > pinsker_lower(&p));
        assert!((carlen_lieb_lower(&p) - carlen_lieb_via_block(&p).value()).abs() < 1e-12);
    }

    #[test]
    fn block_pinsker_examples() {
        let r = bloch([0.1, 0.2, 0.3]);
        assert!(block_pinsker_lower(&MixtureProblem::new(0.3, r.clone(), r).unwrap()).abs() < 1e-30);
        assert!((block_pinsker_lower(&orthogonal_half()) - 0.5).abs() < 1e-15);
        assert!((block_pinsker_lower(&orthogonal_half()) - pinsker_lower(&orthogonal_half())).abs() < 1e-15);
        let p = MixtureProblem::new(
            0.3,
            random_density(SamplerConfig::full_rank(2, 31).unwrap()),
            random_density(SamplerConfig::full_rank(2, 32).unwrap()),
        )
        .unwrap();
        assert!((block_pinsker_lower(&p) - block_pinsker_closed_form(&p)).abs() < 1e-14);
        assert!(block_pinsker_lower(&p) <= pinsker_lower(&p));
    }

    #[test]
    fn upper_bound_examples() {
        let r = bloch([0.1, 0.2, 0.3]);
        let same = MixtureProblem::new(0.3, r.clone(), r).unwrap();
        let rfz = rfz_upper(&same);
        assert!(rfz.bures.abs() < 1e-12 && rfz.trace == 0.0);
        assert_eq!(audenaert_upper(&same), 0.0);
        assert!(classic_upper(&same) > 0.0);

        assert!((audenaert_upper(&orthogonal_half()) - LN_2).abs() < 1e-15);

        let p = appendix_b();
        let gap = concavity_gap(&p);
        assert!(classic_upper(&p) >= gap);
        assert!(audenaert_upper(&p) >= gap);
        assert!(rfz_upper(&p).bures >= gap && rfz_upper(&p).trace >= gap);
    }

    #[test]
    fn mixture_bounds() {
        let p = appendix_a();
        let gap = concavity_gap(&p);
        let near = renyi_lower_mixture(1.0 - 1e-4, &p).unwrap();
        assert!((near - gap).abs() < 1e-3);
        assert!(near <= gap + 1e-9);

        let half = MixtureProblem::new(0.5, bloch([0.2876, 0.4322, 0.3112]), bloch([-0.1552, -0.0532, -0.0874])).unwrap();
        assert!(sandwiched_upper_mixture(2.0, &half).unwrap() <= LN_2);

        let x = p.x();
        let s1 = sandwiched(8.0, p.rho1(), mix(&p)).unwrap().value();
        assert!(x * s1 <= -x * x.ln() + 1e-12);
        let (c1, c2) = max_relative_caps(&p);
        assert!(c1 <= -x.ln() + 1e-12 && c2 <= -(1.0 - x).ln() + 1e-12);

        assert!(renyi_lower_mixture(0.4, &p).is_err());
        assert!(renyi_lower_mixture(1.0, &p).is_err());
        assert!(sandwiched_upper_mixture(1.0, &p).is_err());
        assert!(sandwiched_upper_mixture(0.9, &p).is_err());
    }

    #[test]
    fn h2_half_examples() {
        let r = bloch([0.1, 0.2, 0.3]);
        let same = h2_half_check(&r, &r).unwrap();
        assert!(same.value.abs() < 1e-13 && same.ok);

        let ortho = h2_half_check(&bloch([0.0, 0.0, 1.0]), &bloch([0.0, 0.0, -1.0])).unwrap();
        assert!((ortho.trace_terms[0] - 2.0).abs() < 1e-14);
        assert!((ortho.trace_terms[1] - 2.0).abs() < 1e-14);
        assert!((ortho.value - LN_2).abs() < 1e-14);
        assert!(ortho.ok);

        let generic = h2_half_check(&bloch([0.2876, 0.4322, 0.3112]), &bloch([-0.1552, -0.0532, -0.0874])).unwrap();
        assert!(generic.value < LN_2);
    }

    #[test]
    fn report_on_appendix_a() {
        let r = full_report(&appendix_a());
        assert!(r.chain_ok, "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.comparison.winner, Winner::Lowbd1);
        assert_eq!(r.comparison.strongest, Winner::Lowbd0);
    }

    #[test]
    fn report_at_half_skips_kim() {
        let r = full_report(&orthogonal_half());
        assert!(r.lower.kim.is_none());
        assert!(r.check("lowbd0<=gap").is_none());
        assert!(r.chain_ok);
        // lowbd2 = log 2 > lowbd1 = ½
        assert_eq!(r.comparison.winner, Winner::Lowbd2);
    }

    #[test]
    fn identical_states_tie() {
        let r = bloch([0.1, 0.2, 0.3]);
        let rep = full_report(&MixtureProblem::new(0.3, r.clone(), r).unwrap());
        assert!(rep.chain_ok);
        assert_eq!(rep.comparison.winner, Winner::Tie);
        assert_eq!(rep.comparison.strongest, Winner::Tie);
    }

    // Counterexamples to the printed cited bounds. Expected values come from
    // an independent numpy evaluation (eigh-based log/sqrt).
    #[test]
    fn printed_kim_bound_has_counterexample() {
        let p = MixtureProblem::new(
            0.2169,
            bloch([-0.5033, 0.5958, -0.3974]),
            bloch([-0.4742, -0.1242, -0.3548]),
        )
        .unwrap();
        let gap = concavity_gap(&p);
        let kim = kim_lower(&p).unwrap().value();
        assert!((gap - 0.0581574426238457).abs() < 1e-12);
        assert!((kim - 0.06394073548336268).abs() < 1e-12);
        let r = full_report(&p);
        assert!(!r.check("lowbd0<=gap").unwrap().ok);
        assert!(!r.chain_ok);
        assert!(r.ok_for(CheckSelection::Core));
    }

    #[test]
    fn printed_bures_upper_bound_has_counterexample() {
        let p = MixtureProblem::new(
            0.4878,
            bloch([0.0388, -0.9384, -0.0402]),
            bloch([0.0829, -0.7367, -0.6175]),
        )
        .unwrap();
        assert!((concavity_gap(&p) - 0.0842695173123234).abs() < 1e-12);
        assert!((rfz_upper(&p).bures - 0.06782890946991962).abs() < 1e-12);
        let r = full_report(&p);
        assert!(!r.check("gap<=rfz_bures").unwrap().ok);
        assert!(r.check("gap<=rfz_bures").unwrap().group == CheckGroup::Cited);
        assert!(r.ok_for(CheckSelection::Core));
        assert!(r.ok_for(CheckSelection::Theorem1));
    }

    #[test]
    fn critical_orthogonal_half() {
        let c = find_critical_params(&orthogonal_half(), 1e-6).unwrap();
        assert_eq!(c.b_c, CriticalValue::Endpoint { value: 0.5 });
        assert!((c.b_grid[0].mixture - LN_2).abs() < 1e-12);
    }

    #[test]
    fn critical_appendix_a_brackets() {
        let p = appendix_a();
        let c = find_critical_params(&p, 1e-6).unwrap();
        let CriticalValue::Bracket { satisfied, violated } = c.b_c else {
            panic!("expected a bracket, got {:?}", c.b_c);
        };
        assert!(violated < satisfied && satisfied - violated <= 1e-6);
        assert!(renyi_lower_mixture(satisfied, &p).unwrap() >= c.pinsker);
        assert!(renyi_lower_mixture(violated, &p).unwrap() < c.pinsker);
        // grid pre-scan: the first satisfied grid point lies at or above the bracket
        let first = c.b_grid.iter().find(|g| g.satisfied).unwrap().order;
        assert!(first >= violated);
        assert!(c.b_grid.iter().filter(|g| g.order < violated).all(|g| !g.satisfied));
    }

    #[test]
    fn critical_rejects_degenerate() {
        let r = bloch([0.1, 0.2, 0.3]);
        let p = MixtureProblem::new(0.3, r.clone(), r).unwrap();
        assert!(matches!(find_critical_params(&p, 1e-6), Err(Error::DegenerateProblem(_))));
        assert!(find_critical_params(&appendix_a(), 0.0).is_err());
    }
}
