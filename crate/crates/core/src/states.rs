//! Density matrices: validation, qubit Bloch vectors, two-state mixtures,
//! the block embedding of a mixture as a bipartite state, seeded samplers
//! and the JSON state-file format.

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{
    clamp_psd, eig_hermitian, kron, spectral_apply, ComplexMatrix, EigenDecomposition,
    HermitianMatrix, SupportPolicy,
};

/// Trace must equal one within this tolerance.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Slack allowed on the Bloch-vector norm.
pub const BLOCH_TOLERANCE: f64 = 1e-12;
/// Asymmetry tolerated when loading a matrix from a state file.
pub const HERMITIAN_LOAD_TOLERANCE: f64 = 1e-10;

/// The random number generator behind every sampler. Pinned so seeds
/// reproduce across runs and platforms.
pub type StateRng = ChaCha20Rng;

/// A positive semidefinite, unit-trace Hermitian matrix together with its
/// (clamped) spectral decomposition.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    eig: EigenDecomposition,
}

impl DensityMatrix {
    /// Validates `matrix`: eigenvalues ≥ −1e-10 (clamped to zero) and unit
    /// trace within 1e-10.
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidTrace(trace));
        }
        let mut eig = eig_hermitian(&matrix);
        clamp_psd(&mut eig)?;
        Ok(Self { matrix, eig })
    }

    /// For matrices that are density matrices by construction (mixtures,
    /// normalised Gram matrices). Roundoff negatives are clamped.
    pub(crate) fn from_trusted(matrix: HermitianMatrix) -> Self {
        let mut eig = eig_hermitian(&matrix);
        for lam in eig.eigenvalues.iter_mut() {
            if *lam < 0.0 {
                *lam = 0.0;
            }
        }
        Self { matrix, eig }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(HermitianMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// `|e_k⟩⟨e_k|` in dimension `dim`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut diag = vec![0.0; dim];
        diag[k] = 1.0;
        Self::from_trusted(HermitianMatrix::diagonal(&diag).expect("dim > 0"))
    }

    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diagonal(probabilities)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// Ascending, clamped to be nonnegative.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.eigenvalues
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.eig.eigenvalues.iter().filter(|&&l| l > threshold).count()
    }

    /// `ρ^p` on the support of ρ; zero on the kernel. Negative `p` gives
    /// the pseudo-inverse power.
    pub fn support_power(&self, exponent: f64) -> HermitianMatrix {
        spectral_apply(&self.eig, |l| l.powf(exponent), SupportPolicy::default())
            .expect("positive eigenvalues have finite powers")
    }

    pub fn sqrt(&self) -> HermitianMatrix {
        spectral_apply(&self.eig, f64::sqrt, SupportPolicy::default())
            .expect("sqrt of clamped spectrum")
    }

    /// `log ρ` restricted to the support.
    pub fn log(&self) -> HermitianMatrix {
        spectral_apply(&self.eig, f64::ln, SupportPolicy::default())
            .expect("log of positive eigenvalues")
    }

    pub fn support_projector(&self) -> HermitianMatrix {
        self.eig.support_projector(SupportPolicy::default())
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> DensityMatrix {
        Self::from_trusted(self.matrix.conjugate_by(unitary))
    }
}

/// Real 3-vector `w` with `‖w‖ ≤ 1` parameterising the qubit state `½(I + w·σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn new(w: [f64; 3]) -> Result<Self> {
        if w.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let v = BlochVector(w);
        let norm = v.norm();
        if norm > 1.0 + BLOCH_TOLERANCE {
            return Err(Error::InvalidBloch(norm));
        }
        Ok(v)
    }

    /// Radially projects `w` into the closed unit ball. For `‖w‖ > 1` this
    /// is the state obtained by clamping the negative eigenvalue of
    /// `½(I + w·σ)` to zero and renormalising.
    pub fn projected(w: [f64; 3]) -> Result<Self> {
        if w.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = BlochVector(w).norm();
        if norm <= 1.0 {
            return Ok(BlochVector(w));
        }
        Ok(BlochVector([w[0] / norm, w[1] / norm, w[2] / norm]))
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }
}

/// `½(I + w₁σ₁ + w₂σ₂ + w₃σ₃)`.
pub fn from_bloch(w: BlochVector) -> DensityMatrix {
    let [x, y, z] = w.0;
    let data = vec![
        Complex64::new(0.5 * (1.0 + z), 0.0),
        Complex64::new(0.5 * x, -0.5 * y),
        Complex64::new(0.5 * x, 0.5 * y),
        Complex64::new(0.5 * (1.0 - z), 0.0),
    ];
    // Eigenvalues (1 ± ‖w‖)/2 ≥ -5e-13 for a validated vector.
    DensityMatrix::from_trusted(HermitianMatrix::new(2, data).expect("2x2"))
}

/// Reads off `w_k = Tr(ρ σ_k)`. Qubits only.
pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: rho.dim(),
        });
    }
    let m = rho.matrix();
    let off = m.get(1, 0);
    Ok(BlochVector([
        2.0 * off.re,
        2.0 * off.im,
        m.get(0, 0).re - m.get(1, 1).re,
    ]))
}

/// The triple `(x, ρ1, ρ2)` with `0 < x < 1`. The averaged state
/// `ρ_Av = xρ1 + (1−x)ρ2` and reversed state `ρ_Rev = xρ2 + (1−x)ρ1` are
/// derived at construction.
#[derive(Clone, Debug)]
pub struct MixtureProblem {
    x: f64,
    rho1: DensityMatrix,
    rho2: DensityMatrix,
    avg: DensityMatrix,
    rev: DensityMatrix,
}

impl MixtureProblem {
    pub fn new(x: f64, rho1: DensityMatrix, rho2: DensityMatrix) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::Domain(format!("mixing weight must lie in (0, 1), got {x}")));
        }
        if rho1.dim() != rho2.dim() {
            return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
        }
        let avg = convex(x, &rho1, &rho2);
        let rev = convex(x, &rho2, &rho1);
        Ok(Self {
            x,
            rho1,
            rho2,
            avg,
            rev,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn rho1(&self) -> &DensityMatrix {
        &self.rho1
    }

    pub fn rho2(&self) -> &DensityMatrix {
        &self.rho2
    }

    pub fn dim(&self) -> usize {
        self.rho1.dim()
    }

    /// The same problem with the states swapped and `x → 1 − x`.
    pub fn swapped(&self) -> MixtureProblem {
        MixtureProblem {
            x: 1.0 - self.x,
            rho1: self.rho2.clone(),
            rho2: self.rho1.clone(),
            avg: convex(1.0 - self.x, &self.rho2, &self.rho1),
            rev: convex(1.0 - self.x, &self.rho1, &self.rho2),
        }
    }

    /// Both states conjugated by the same unitary.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> MixtureProblem {
        MixtureProblem::new(
            self.x,
            self.rho1.conjugate_by(unitary),
            self.rho2.conjugate_by(unitary),
        )
        .expect("conjugation preserves validity")
    }
}

fn convex(x: f64, a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_trusted(&a.matrix().scale(x) + &b.matrix().scale(1.0 - x))
}

/// `xρ1 + (1−x)ρ2`.
pub fn mix(p: &MixtureProblem) -> &DensityMatrix {
    &p.avg
}

/// `xρ2 + (1−x)ρ1`.
pub fn reverse_mix(p: &MixtureProblem) -> &DensityMatrix {
    &p.rev
}

/// A mixture written as a bipartite state with a two-level classical flag.
///
/// The flag (factor B) is the outer tensor slot, so the joint state is the
/// literal block matrix `diag(xρ1, (1−x)ρ2)` and the product of marginals
/// is `P_B ⊗ P_A = diag(xρ_Av, (1−x)ρ_Av)`.
#[derive(Clone, Debug)]
pub struct BlockEmbedding {
    pub joint: DensityMatrix,
    /// `P_A = ρ_Av`.
    pub system: DensityMatrix,
    /// `P_B = diag(x, 1−x)`.
    pub flag: DensityMatrix,
}

impl BlockEmbedding {
    /// `P_A ⊗ P_B` in the flag-outer layout.
    pub fn product(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(kron(self.flag.matrix(), self.system.matrix()))
    }
}

pub fn block_embed(p: &MixtureProblem) -> BlockEmbedding {
    let d = p.dim();
    let n = 2 * d;
    let upper = p.rho1.matrix().scale(p.x);
    let lower = p.rho2.matrix().scale(1.0 - p.x);
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..d {
        for j in 0..d {
            data[i * n + j] = upper.get(i, j);
            data[(d + i) * n + (d + j)] = lower.get(i, j);
        }
    }
    let joint = DensityMatrix::from_trusted(HermitianMatrix::new(n, data).expect("block shape"));
    let flag = DensityMatrix::from_trusted(
        HermitianMatrix::diagonal(&[p.x, 1.0 - p.x]).expect("2x2"),
    );
    BlockEmbedding {
        joint,
        system: p.avg.clone(),
        flag,
    }
}

/// Traces out the outer `outer`-dimensional factor of a flag-outer
/// bipartite matrix (sum of the diagonal blocks).
pub fn trace_out_flag(joint: &HermitianMatrix, outer: usize) -> Result<HermitianMatrix> {
    let n = joint.dim();
    if outer == 0 || n % outer != 0 {
        return Err(Error::Dimension {
            expected: outer,
            got: n,
        });
    }
    let d = n / outer;
    let mut data = vec![Complex64::new(0.0, 0.0); d * d];
    for b in 0..outer {
        for i in 0..d {
            for j in 0..d {
                data[i * d + j] += joint.get(b * d + i, b * d + j);
            }
        }
    }
    HermitianMatrix::new(d, data)
}

/// Traces out the inner factor, leaving the `outer × outer` matrix of
/// block traces.
pub fn trace_out_system(joint: &HermitianMatrix, outer: usize) -> Result<HermitianMatrix> {
    let n = joint.dim();
    if outer == 0 || n % outer != 0 {
        return Err(Error::Dimension {
            expected: outer,
            got: n,
        });
    }
    let d = n / outer;
    let mut data = vec![Complex64::new(0.0, 0.0); outer * outer];
    for a in 0..outer {
        for b in 0..outer {
            for i in 0..d {
                data[a * outer + b] += joint.get(a * d + i, b * d + i);
            }
        }
    }
    HermitianMatrix::new(outer, data)
}

/// Parameters for [`random_density`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    dim: usize,
    rank: usize,
    seed: u64,
}

impl SamplerConfig {
    pub fn new(dim: usize, rank: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if rank == 0 || rank > dim {
            return Err(Error::Domain(format!("rank must lie in [1, {dim}], got {rank}")));
        }
        Ok(Self { dim, rank, seed })
    }

    pub fn full_rank(dim: usize, seed: u64) -> Result<Self> {
        Self::new(dim, dim, seed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// SplitMix64 finaliser.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream-splitting rule: substream `index` of `master` is seeded with
/// `splitmix64(splitmix64(master) ^ index)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}

pub fn rng_from_seed(seed: u64) -> StateRng {
    StateRng::seed_from_u64(seed)
}

/// Hilbert–Schmidt (Ginibre) sample: `G G† / Tr(G G†)` with `G` a
/// `dim × rank` matrix of standard complex normals.
pub fn random_density(cfg: SamplerConfig) -> DensityMatrix {
    let mut rng = rng_from_seed(cfg.seed);
    random_density_with(&mut rng, cfg.dim, cfg.rank)
}

pub(crate) fn random_density_with<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g: Vec<Complex64> = (0..dim * rank)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..rank {
                acc += g[i * rank + k] * g[j * rank + k].conj();
            }
            data[i * dim + j] = acc;
        }
    }
    let gram = HermitianMatrix::new(dim, data).expect("square");
    let tr = gram.trace();
    DensityMatrix::from_trusted(gram.scale(1.0 / tr))
}

/// Uniform in the closed unit ball, by rejection from the cube `[-1, 1]³`.
pub fn random_bloch(seed: u64) -> BlochVector {
    random_bloch_with(&mut rng_from_seed(seed))
}

pub(crate) fn random_bloch_with<R: Rng>(rng: &mut R) -> BlochVector {
    loop {
        let w = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        let v = BlochVector(w);
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

/// Haar-ish random unitary: the eigenvector matrix of a random Ginibre
/// Hermitian matrix. Good enough for invariance tests.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng_from_seed(seed);
    let data: Vec<Complex64> = (0..dim * dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    let h = HermitianMatrix::new(dim, data).expect("square");
    eig_hermitian(&h).eigenvectors
}

/// On-disk state description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixParts>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixParts {
    pub re: Vec<Vec<f64>>,
    /// Missing means a real matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let n = rho.dim();
        let m = rho.matrix();
        let re = (0..n).map(|i| (0..n).map(|j| m.get(i, j).re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| m.get(i, j).im).collect()).collect();
        StateFile {
            bloch: None,
            matrix: Some(MatrixParts { re, im: Some(im) }),
        }
    }

    pub fn into_density(self) -> Result<DensityMatrix> {
        match (self.bloch, self.matrix) {
            (Some(w), None) => Ok(from_bloch(BlochVector::new(w)?)),
            (None, Some(parts)) => parts.into_density(),
            _ => Err(Error::StateFile(
                "expected exactly one of \"bloch\" or \"matrix\"".into(),
            )),
        }
    }
}

impl MatrixParts {
    fn into_density(self) -> Result<DensityMatrix> {
        let n = self.re.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let im = self.im.unwrap_or_else(|| vec![vec![0.0; n]; n]);
        if im.len() != n || self.re.iter().chain(im.iter()).any(|row| row.len() != n) {
            return Err(Error::StateFile(format!(
                "\"re\" and \"im\" must both be {n}x{n}"
            )));
        }
        let data = self
            .re
            .iter()
            .flatten()
            .zip(im.iter().flatten())
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        DensityMatrix::new(HermitianMatrix::new_checked(n, data, HERMITIAN_LOAD_TOLERANCE)?)
    }
}

pub fn parse_state(json: &str) -> Result<DensityMatrix> {
    let file: StateFile =
        serde_json::from_str(json).map_err(|e| Error::StateFile(e.to_string()))?;
    file.into_density()
}

pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::StateFile(format!("{}: {e}", path.display())))?;
    parse_state(&text)
}
