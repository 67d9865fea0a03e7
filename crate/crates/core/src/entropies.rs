//! Entropy and divergence functionals on density matrices. All values are
//! in nats.
//!
//! Divergences return [`ExtendedReal`]: `+∞` whenever the support of the
//! first argument is not contained in the support of the second (and the
//! formula requires it). Negative powers of the second argument are always
//! pseudo-inverse powers on its support; the second argument is never
//! regularised.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermitian::{eig_hermitian, trace_norm, HermitianMatrix};
use crate::states::DensityMatrix;

/// Leakage `‖(I − Π_γ) ρ (I − Π_γ)‖₁` above which `supp ρ ⊄ supp γ`.
pub const SUPPORT_LEAK_TOLERANCE: f64 = 1e-10;
/// Renyi orders closer than this to one are rejected.
pub const ORDER_EXCLUSION: f64 = 1e-9;

/// A real number or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// `f64::INFINITY` for `+∞`.
    pub fn value(&self) -> f64 {
        match *self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInfinity => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::PosInfinity => None,
        }
    }

    pub fn scale(self, factor: f64) -> ExtendedReal {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v * factor),
            ExtendedReal::PosInfinity => ExtendedReal::PosInfinity,
        }
    }

    pub fn max(self, other: ExtendedReal) -> ExtendedReal {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value().partial_cmp(&other.value())
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtendedReal::PosInfinity
        } else {
            ExtendedReal::Finite(v)
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInfinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => serializer.serialize_f64(*v),
            ExtendedReal::PosInfinity => serializer.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RenyiFlavor {
    /// `Tr ρ^a γ^{1−a}`.
    Standard,
    /// `Tr (γ^{(1−a)/2a} ρ γ^{(1−a)/2a})^a`.
    Sandwiched,
}

/// A Renyi order `a > 0`, `a ≠ 1`, with the divergence family it selects.
/// Sandwiched orders must also satisfy `a ≥ ½`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RenyiParam {
    order: f64,
    flavor: RenyiFlavor,
}

impl RenyiParam {
    pub fn new(order: f64, flavor: RenyiFlavor) -> Result<Self> {
        if !(order > 0.0) || !order.is_finite() {
            return Err(Error::Domain(format!("Renyi order must be positive and finite, got {order}")));
        }
        if (order - 1.0).abs() <= ORDER_EXCLUSION {
            return Err(Error::Domain(format!(
                "Renyi order {order} is within {ORDER_EXCLUSION:e} of 1; use relative_entropy"
            )));
        }
        if flavor == RenyiFlavor::Sandwiched && order < 0.5 {
            return Err(Error::Domain(format!(
                "sandwiched Renyi order must be at least 1/2, got {order}"
            )));
        }
        Ok(Self { order, flavor })
    }

    pub fn standard(order: f64) -> Result<Self> {
        Self::new(order, RenyiFlavor::Standard)
    }

    pub fn sandwiched(order: f64) -> Result<Self> {
        Self::new(order, RenyiFlavor::Sandwiched)
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn flavor(&self) -> RenyiFlavor {
        self.flavor
    }
}

/// `−Tr ρ log ρ`, with `0 log 0 = 0`.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    shannon(rho.eigenvalues())
}

fn shannon(probabilities: &[f64]) -> f64 {
    let threshold = crate::hermitian::SupportPolicy::default().zero_threshold();
    -probabilities
        .iter()
        .filter(|&&l| l > threshold)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

/// Whether `supp ρ ⊆ supp γ`, tested by the trace norm of ρ compressed to
/// the kernel of γ.
pub fn support_contained(rho: &DensityMatrix, gamma: &DensityMatrix) -> bool {
    if gamma.rank(crate::hermitian::SupportPolicy::default().zero_threshold()) == gamma.dim() {
        return true;
    }
    let kernel = &HermitianMatrix::identity(gamma.dim()) - &gamma.support_projector();
    trace_norm(&kernel.sandwich(rho.matrix())) <= SUPPORT_LEAK_TOLERANCE
}

fn check_dims(rho: &DensityMatrix, gamma: &DensityMatrix) {
    assert_eq!(
        rho.dim(),
        gamma.dim(),
        "divergence arguments must have equal dimension"
    );
}

/// `Tr ρ (log ρ − log γ)`, or `+∞` if `supp ρ ⊄ supp γ`.
pub fn relative_entropy(rho: &DensityMatrix, gamma: &DensityMatrix) -> ExtendedReal {
    check_dims(rho, gamma);
    if !support_contained(rho, gamma) {
        return ExtendedReal::PosInfinity;
    }
    let neg_entropy = -von_neumann(rho);
    let cross = rho.matrix().trace_product(&gamma.log());
    ExtendedReal::Finite(neg_entropy - cross)
}

/// `log Σ μ^a` without overflow for large `a`.
fn log_sum_powers(values: &[f64], order: f64) -> f64 {
    let max = values.iter().copied().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values
        .iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| (m / max).powf(order))
        .sum();
    order * max.ln() + sum.ln()
}

fn from_log_trace(log_trace: f64, order: f64) -> ExtendedReal {
    if log_trace == f64::NEG_INFINITY {
        // Only reachable for order < 1: zero overlap, divergence is +∞.
        return ExtendedReal::PosInfinity;
    }
    ExtendedReal::Finite(log_trace / (order - 1.0))
}

/// Dispatches on the flavor of `param`.
pub fn renyi_divergence(param: RenyiParam, rho: &DensityMatrix, gamma: &DensityMatrix) -> ExtendedReal {
    match param.flavor {
        RenyiFlavor::Standard => standard_renyi(param.order, rho, gamma),
        RenyiFlavor::Sandwiched => sandwiched_renyi(param.order, rho, gamma),
    }
}

/// Renyi relative entropy `(a−1)⁻¹ log Tr ρ^a γ^{1−a}`.
pub fn renyi(order: f64, rho: &DensityMatrix, gamma: &DensityMatrix) -> Result<ExtendedReal> {
    Ok(renyi_divergence(RenyiParam::standard(order)?, rho, gamma))
}

/// Sandwiched Renyi divergence `(a−1)⁻¹ log Tr (γ^{(1−a)/2a} ρ γ^{(1−a)/2a})^a`.
pub fn sandwiched(order: f64, rho: &DensityMatrix, gamma: &DensityMatrix) -> Result<ExtendedReal> {
    Ok(renyi_divergence(RenyiParam::sandwiched(order)?, rho, gamma))
}

fn standard_renyi(order: f64, rho: &DensityMatrix, gamma: &DensityMatrix) -> ExtendedReal {
    check_dims(rho, gamma);
    if order > 1.0 && !support_contained(rho, gamma) {
        return ExtendedReal::PosInfinity;
    }
    let rho_pow = rho.support_power(order);
    let gamma_pow = gamma.support_power(1.0 - order);
    let trace = rho_pow.trace_product(&gamma_pow);
    let log_trace = if trace > 0.0 { trace.ln() } else { f64::NEG_INFINITY };
    from_log_trace(log_trace, order)
}

fn sandwiched_renyi(order: f64, rho: &DensityMatrix, gamma: &DensityMatrix) -> ExtendedReal {
    check_dims(rho, gamma);
    if order > 1.0 && !support_contained(rho, gamma) {
        return ExtendedReal::PosInfinity;
    }
    let outer = gamma.support_power((1.0 - order) / (2.0 * order));
    let inner = outer.sandwich(rho.matrix());
    let spectrum: Vec<f64> = eig_hermitian(&inner)
        .eigenvalues
        .into_iter()
        .map(|m| m.max(0.0))
        .collect();
    from_log_trace(log_sum_powers(&spectrum, order), order)
}

/// `inf { log ω : ρ ≤ ω γ }`: log of the largest eigenvalue of
/// `γ^{−1/2} ρ γ^{−1/2}`.
pub fn max_relative(rho: &DensityMatrix, gamma: &DensityMatrix) -> ExtendedReal {
    check_dims(rho, gamma);
    if !support_contained(rho, gamma) {
        return ExtendedReal::PosInfinity;
    }
    let inv_root = gamma.support_power(-0.5);
    let top = eig_hermitian(&inv_root.sandwich(rho.matrix()))
        .eigenvalues
        .last()
        .copied()
        .unwrap_or(0.0);
    ExtendedReal::Finite(top.ln())
}

/// `Tr (√ρ γ √ρ)^{1/2}`, in `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, gamma: &DensityMatrix) -> f64 {
    check_dims(rho, gamma);
    let inner = rho.sqrt().sandwich(gamma.matrix());
    let f: f64 = eig_hermitian(&inner)
        .eigenvalues
        .iter()
        .map(|&m| m.max(0.0).sqrt())
        .sum();
    f.min(1.0)
}

/// Squared Bures distance `2(1 − F)`.
pub fn bures_sq(rho: &DensityMatrix, gamma: &DensityMatrix) -> f64 {
    2.0 * (1.0 - fidelity(rho, gamma))
}

/// `‖ρ − γ‖₁` (no factor ½).
pub fn trace_distance(rho: &DensityMatrix, gamma: &DensityMatrix) -> f64 {
    check_dims(rho, gamma);
    trace_norm(&(rho.matrix() - gamma.matrix()))
}

/// `h(x) = −x log x − (1−x) log(1−x)`, zero at the endpoints.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("binary entropy needs x in [0, 1], got {x}")));
    }
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}
