//! State vectors, density operators, and the subsystem operations
//! (tensor products, partial traces, projective measurements).

use num_complex::Complex64;

use super::{STATE_TOL, ZERO_PROB_TOL};
use crate::error::{QkdError, Result};

/// Complex amplitude. All stored values must be finite.
pub type ComplexScalar = Complex64;

/// Hilbert-space dimensions supported for pure states.
const STATE_DIMS: [usize; 4] = [2, 4, 8, 16];

/// Largest dimension handled anywhere (qubit ⊗ qubit ⊗ 4-dim register).
const MAX_DIM: usize = 16;

fn check_finite<'a>(values: impl IntoIterator<Item = &'a ComplexScalar>) -> Result<()> {
    for v in values {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(QkdError::InvalidState("non-finite amplitude".into()));
        }
    }
    Ok(())
}

/// Normalized pure state on a 2-, 4-, 8-, or 16-dimensional space.
///
/// Amplitudes use computational-basis ordering with the leftmost tensor
/// factor most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<ComplexScalar>,
}

impl StateVector {
    /// Builds a state from amplitudes, checking dimension, finiteness, and
    /// unit norm (within [`STATE_TOL`]).
    pub fn new(amps: Vec<ComplexScalar>) -> Result<Self> {
        if !STATE_DIMS.contains(&amps.len()) {
            return Err(QkdError::Dimension(format!(
                "state dimension {} not in {{2, 4, 8, 16}}",
                amps.len()
            )));
        }
        check_finite(&amps)?;
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(QkdError::InvalidState(format!(
                "state norm² = {norm_sq} is not 1"
            )));
        }
        Ok(Self { amps })
    }

    /// Normalizes and builds a state; rejects the zero vector.
    pub fn from_unnormalized(amps: Vec<ComplexScalar>) -> Result<Self> {
        if !STATE_DIMS.contains(&amps.len()) {
            return Err(QkdError::Dimension(format!(
                "state dimension {} not in {{2, 4, 8, 16}}",
                amps.len()
            )));
        }
        check_finite(&amps)?;
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(QkdError::InvalidState("cannot normalize zero vector".into()));
        }
        let scale = norm_sq.sqrt().recip();
        Ok(Self {
            amps: amps.into_iter().map(|a| a * scale).collect(),
        })
    }

    pub(crate) fn new_unchecked(amps: Vec<ComplexScalar>) -> Self {
        Self { amps }
    }

    /// Computational basis state `|index⟩` of the given dimension.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(QkdError::Dimension(format!(
                "basis index {index} out of range for dim {dim}"
            )));
        }
        let mut amps = vec![ComplexScalar::new(0.0, 0.0); dim];
        amps[index] = ComplexScalar::new(1.0, 0.0);
        Self::new(amps)
    }

    /// Single-qubit state `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: ComplexScalar, beta: ComplexScalar) -> Result<Self> {
        Self::new(vec![alpha, beta])
    }

    /// `|0⟩`
    pub fn zero() -> Self {
        Self::basis_state(2, 0).expect("|0> is valid")
    }

    /// `|1⟩`
    pub fn one() -> Self {
        Self::basis_state(2, 1).expect("|1> is valid")
    }

    /// `|+⟩ = (|0⟩ + |1⟩)/√2`
    pub fn plus() -> Self {
        let a = ComplexScalar::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new_unchecked(vec![a, a])
    }

    /// `|−⟩ = (|0⟩ − |1⟩)/√2`
    pub fn minus() -> Self {
        let a = ComplexScalar::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new_unchecked(vec![a, -a])
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[ComplexScalar] {
        &self.amps
    }

    pub fn amp(&self, i: usize) -> ComplexScalar {
        self.amps[i]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<ComplexScalar> {
        if self.dim() != other.dim() {
            return Err(QkdError::Dimension(format!(
                "inner product of dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Overlap magnitude `|⟨self|other⟩|`; global phases drop out.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Kronecker product with the left factor most significant.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let dim = self.dim() * other.dim();
        if dim > MAX_DIM {
            return Err(QkdError::Dimension(format!(
                "tensor product dimension {dim} exceeds {MAX_DIM}"
            )));
        }
        let mut amps = Vec::with_capacity(dim);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self::new_unchecked(amps))
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityOperator {
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(self.amps[i] * self.amps[j].conj());
            }
        }
        DensityOperator {
            dim,
            entries,
        }
    }
}

/// Mixed state: Hermitian, unit-trace, positive-semidefinite matrix.
///
/// Hermiticity and trace are checked at construction; eigenvalue positivity
/// is checked by the operations that need the spectrum (entropy evaluation),
/// where values in `[-EIG_CLAMP_TOL, 0)` count as rounding noise.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim: usize,
    /// Row-major `dim × dim` entries.
    entries: Vec<ComplexScalar>,
}

impl DensityOperator {
    /// Builds a density operator from row-major entries.
    pub fn new(dim: usize, entries: Vec<ComplexScalar>) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(QkdError::Dimension(format!(
                "density operator dimension {dim} not in 2..=16"
            )));
        }
        if entries.len() != dim * dim {
            return Err(QkdError::Dimension(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        check_finite(&entries)?;
        for i in 0..dim {
            for j in i..dim {
                let dev = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                if dev > 2.0 * STATE_TOL {
                    return Err(QkdError::InvalidState(format!(
                        "matrix is not Hermitian: entry ({i},{j}) deviates by {dev:.3e}"
                    )));
                }
            }
        }
        let trace: f64 = (0..dim).map(|i| entries[i * dim + i].re).sum();
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(QkdError::InvalidState(format!(
                "trace = {trace} is not 1"
            )));
        }
        Ok(Self { dim, entries })
    }

    /// Diagonal density operator from a probability vector.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        let mut entries = vec![ComplexScalar::new(0.0, 0.0); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = ComplexScalar::new(d, 0.0);
        }
        Self::new(dim, entries)
    }

    /// Convex mixture `Σ wᵢ ρᵢ`; weights must form a distribution.
    pub fn mix(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(QkdError::Dimension("empty mixture".into()));
        };
        let dim = first.dim;
        let mut total = 0.0;
        let mut entries = vec![ComplexScalar::new(0.0, 0.0); dim * dim];
        for (w, rho) in parts {
            if rho.dim != dim {
                return Err(QkdError::Dimension(
                    "mixture members have different dimensions".into(),
                ));
            }
            if *w < -super::DOMAIN_SLACK {
                return Err(QkdError::Domain(format!("negative mixture weight {w}")));
            }
            total += w;
            for (e, r) in entries.iter_mut().zip(&rho.entries) {
                *e += r * *w;
            }
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(QkdError::InvalidState(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> ComplexScalar {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    /// Kronecker product with the left factor most significant.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let dim = self.dim * other.dim;
        if dim > MAX_DIM {
            return Err(QkdError::Dimension(format!(
                "tensor product dimension {dim} exceeds {MAX_DIM}"
            )));
        }
        let mut entries = vec![ComplexScalar::new(0.0, 0.0); dim * dim];
        for i1 in 0..self.dim {
            for j1 in 0..self.dim {
                let a = self.entry(i1, j1);
                for i2 in 0..other.dim {
                    for j2 in 0..other.dim {
                        let i = i1 * other.dim + i2;
                        let j = j1 * other.dim + j2;
                        entries[i * dim + j] = a * other.entry(i2, j2);
                    }
                }
            }
        }
        Self::new(dim, entries)
    }

    /// Eigenvalues in ascending order. Hermiticity was validated at
    /// construction, so only the decomposition runs here.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(super::eig::eigenvalues_unchecked(self.dim, &self.entries))
    }
}

/// At most four factors exist (every factor dimension is ≥ 2 and the product
/// is ≤ 16), so index tables live on the stack.
const MAX_FACTORS: usize = 4;

/// Mixed-radix layout of the tensor factors, leftmost most significant.
struct FactorLayout {
    count: usize,
    dims: [usize; MAX_FACTORS],
    strides: [usize; MAX_FACTORS],
}

impl FactorLayout {
    fn new(total: usize, dims: &[usize]) -> Result<Self> {
        if dims.is_empty()
            || dims.len() > MAX_FACTORS
            || dims.iter().any(|&d| d < 2)
            || dims.iter().product::<usize>() != total
        {
            return Err(QkdError::Dimension(format!(
                "factor dimensions {dims:?} do not multiply to {total}"
            )));
        }
        let mut d = [1usize; MAX_FACTORS];
        d[..dims.len()].copy_from_slice(dims);
        let mut strides = [1usize; MAX_FACTORS];
        for i in (0..dims.len() - 1).rev() {
            strides[i] = strides[i + 1] * d[i + 1];
        }
        Ok(Self {
            count: dims.len(),
            dims: d,
            strides,
        })
    }

    /// Base offsets of every combined index over the given subset of factors,
    /// written into `table`; returns the subset's total dimension.
    ///
    /// The subset is enumerated with its rightmost member fastest, matching
    /// the ordering of the full index.
    fn offsets(&self, subset: &[usize], table: &mut [usize; 16]) -> usize {
        let mut total = 1usize;
        table[0] = 0;
        for &factor in subset.iter().rev() {
            let radix = self.dims[factor];
            let stride = self.strides[factor];
            for rep in (1..radix).rev() {
                for i in 0..total {
                    table[rep * total + i] = table[i] + rep * stride;
                }
            }
            total *= radix;
        }
        total
    }
}

/// Factors of `dims` other than `target`, in order.
fn other_factors(layout: &FactorLayout, target: usize) -> ([usize; MAX_FACTORS], usize) {
    let mut rest = [0usize; MAX_FACTORS];
    let mut n = 0;
    for i in 0..layout.count {
        if i != target {
            rest[n] = i;
            n += 1;
        }
    }
    (rest, n)
}

/// Traces out the subsystems where `keep` is false.
///
/// `dims` lists the factor dimensions (leftmost most significant) and must
/// multiply to `rho.dim()`. At least one subsystem must be kept.
pub fn partial_trace(
    rho: &DensityOperator,
    keep: &[bool],
    dims: &[usize],
) -> Result<DensityOperator> {
    let layout = FactorLayout::new(rho.dim(), dims)?;
    if keep.len() != dims.len() {
        return Err(QkdError::Dimension(format!(
            "keep mask has {} entries for {} subsystems",
            keep.len(),
            dims.len()
        )));
    }
    if !keep.iter().any(|&k| k) {
        return Err(QkdError::Dimension("must keep at least one subsystem".into()));
    }
    let mut kept = [0usize; MAX_FACTORS];
    let mut traced = [0usize; MAX_FACTORS];
    let (mut nk, mut nt) = (0, 0);
    for (i, &k) in keep.iter().enumerate() {
        if k {
            kept[nk] = i;
            nk += 1;
        } else {
            traced[nt] = i;
            nt += 1;
        }
    }
    let mut kept_offsets = [0usize; 16];
    let mut traced_offsets = [0usize; 16];
    let out_dim = layout.offsets(&kept[..nk], &mut kept_offsets);
    let traced_total = layout.offsets(&traced[..nt], &mut traced_offsets);

    let full = rho.dim();
    let mut entries = vec![ComplexScalar::new(0.0, 0.0); out_dim * out_dim];
    for a in 0..out_dim {
        let off_a = kept_offsets[a];
        for b in 0..out_dim {
            let off_b = kept_offsets[b];
            let mut sum = ComplexScalar::new(0.0, 0.0);
            for &off_t in &traced_offsets[..traced_total] {
                sum += rho.entries[(off_a + off_t) * full + (off_b + off_t)];
            }
            entries[a * out_dim + b] = sum;
        }
    }
    DensityOperator::new(out_dim, entries)
}

/// Reduced density operator of a pure state: traces the masked-out factors
/// of `|ψ⟩⟨ψ|` without materializing the full projector.
pub fn reduced_density(
    psi: &StateVector,
    keep: &[bool],
    dims: &[usize],
) -> Result<DensityOperator> {
    let layout = FactorLayout::new(psi.dim(), dims)?;
    if keep.len() != dims.len() {
        return Err(QkdError::Dimension(format!(
            "keep mask has {} entries for {} subsystems",
            keep.len(),
            dims.len()
        )));
    }
    if !keep.iter().any(|&k| k) {
        return Err(QkdError::Dimension("must keep at least one subsystem".into()));
    }
    let mut kept = [0usize; MAX_FACTORS];
    let mut traced = [0usize; MAX_FACTORS];
    let (mut nk, mut nt) = (0, 0);
    for (i, &k) in keep.iter().enumerate() {
        if k {
            kept[nk] = i;
            nk += 1;
        } else {
            traced[nt] = i;
            nt += 1;
        }
    }
    let mut kept_offsets = [0usize; 16];
    let mut traced_offsets = [0usize; 16];
    let out_dim = layout.offsets(&kept[..nk], &mut kept_offsets);
    let traced_total = layout.offsets(&traced[..nt], &mut traced_offsets);

    let mut entries = vec![ComplexScalar::new(0.0, 0.0); out_dim * out_dim];
    for a in 0..out_dim {
        let off_a = kept_offsets[a];
        for b in 0..out_dim {
            let off_b = kept_offsets[b];
            let mut sum = ComplexScalar::new(0.0, 0.0);
            for &off_t in &traced_offsets[..traced_total] {
                sum += psi.amp(off_a + off_t) * psi.amp(off_b + off_t).conj();
            }
            entries[a * out_dim + b] = sum;
        }
    }
    DensityOperator::new(out_dim, entries)
}

/// Outcome of projecting a density operator onto a pure state of one
/// subsystem. When `prob` falls below [`ZERO_PROB_TOL`] the branch is flagged
/// by leaving `conditional` empty.
#[derive(Debug, Clone)]
pub struct Projection {
    pub prob: f64,
    pub conditional: Option<DensityOperator>,
}

/// Projects subsystem `target` of `rho` onto `projector` and renormalizes.
///
/// Returns the outcome probability `Tr[ρ (P ⊗ 𝟙)]` and the conditional state
/// on the remaining subsystems. The projected subsystem is consumed, so at
/// least one other subsystem must remain.
pub fn project(
    rho: &DensityOperator,
    projector: &StateVector,
    target: usize,
    dims: &[usize],
) -> Result<Projection> {
    let layout = FactorLayout::new(rho.dim(), dims)?;
    if target >= dims.len() {
        return Err(QkdError::Dimension(format!(
            "target subsystem {target} out of range"
        )));
    }
    if projector.dim() != dims[target] {
        return Err(QkdError::Dimension(format!(
            "projector dim {} does not match subsystem dim {}",
            projector.dim(),
            dims[target]
        )));
    }
    if dims.len() < 2 {
        return Err(QkdError::Dimension(
            "projection must leave at least one subsystem".into(),
        ));
    }
    let (rest, nr) = other_factors(&layout, target);
    let mut rest_offsets = [0usize; 16];
    let out_dim = layout.offsets(&rest[..nr], &mut rest_offsets);
    let rest_offsets = &rest_offsets[..out_dim];
    let pdim = dims[target];
    let pstride = layout.strides[target];
    let full = rho.dim();

    let sandwich = |off_r: usize, off_c: usize| -> ComplexScalar {
        let mut sum = ComplexScalar::new(0.0, 0.0);
        for a in 0..pdim {
            let va = projector.amp(a).conj();
            for b in 0..pdim {
                sum += va
                    * projector.amp(b)
                    * rho.entries[(off_r + a * pstride) * full + (off_c + b * pstride)];
            }
        }
        sum
    };

    let prob: f64 = rest_offsets.iter().map(|&o| sandwich(o, o).re).sum();
    if prob < ZERO_PROB_TOL {
        return Ok(Projection {
            prob: prob.max(0.0),
            conditional: None,
        });
    }
    let inv = prob.recip();
    let mut entries = vec![ComplexScalar::new(0.0, 0.0); out_dim * out_dim];
    for (r, &off_r) in rest_offsets.iter().enumerate() {
        for (c, &off_c) in rest_offsets.iter().enumerate() {
            entries[r * out_dim + c] = sandwich(off_r, off_c) * inv;
        }
    }
    Ok(Projection {
        prob,
        conditional: Some(DensityOperator::new(out_dim, entries)?),
    })
}

/// Outcome of projecting a pure state onto a pure state of one subsystem.
#[derive(Debug, Clone)]
pub struct PureProjection {
    pub prob: f64,
    pub conditional: Option<StateVector>,
}

/// Probability of projecting subsystem `target` of `psi` onto `projector`,
/// without forming the conditional state.
pub fn projection_prob(
    psi: &StateVector,
    projector: &StateVector,
    target: usize,
    dims: &[usize],
) -> Result<f64> {
    let layout = FactorLayout::new(psi.dim(), dims)?;
    if target >= dims.len() {
        return Err(QkdError::Dimension(format!(
            "target subsystem {target} out of range"
        )));
    }
    if projector.dim() != dims[target] {
        return Err(QkdError::Dimension(format!(
            "projector dim {} does not match subsystem dim {}",
            projector.dim(),
            dims[target]
        )));
    }
    let (rest, nr) = other_factors(&layout, target);
    let mut rest_offsets = [0usize; 16];
    let out_dim = layout.offsets(&rest[..nr], &mut rest_offsets);
    let pdim = dims[target];
    let pstride = layout.strides[target];
    let mut prob = 0.0;
    for &off in &rest_offsets[..out_dim] {
        let mut res = ComplexScalar::new(0.0, 0.0);
        for a in 0..pdim {
            res += projector.amp(a).conj() * psi.amp(off + a * pstride);
        }
        prob += res.norm_sqr();
    }
    Ok(prob)
}

/// Pure-state counterpart of [`project`]: the conditional is again pure.
pub fn project_pure(
    psi: &StateVector,
    projector: &StateVector,
    target: usize,
    dims: &[usize],
) -> Result<PureProjection> {
    let layout = FactorLayout::new(psi.dim(), dims)?;
    if target >= dims.len() {
        return Err(QkdError::Dimension(format!(
            "target subsystem {target} out of range"
        )));
    }
    if projector.dim() != dims[target] {
        return Err(QkdError::Dimension(format!(
            "projector dim {} does not match subsystem dim {}",
            projector.dim(),
            dims[target]
        )));
    }
    if dims.len() < 2 {
        return Err(QkdError::Dimension(
            "projection must leave at least one subsystem".into(),
        ));
    }
    let (rest, nr) = other_factors(&layout, target);
    let mut rest_offsets = [0usize; 16];
    let out_dim = layout.offsets(&rest[..nr], &mut rest_offsets);
    let pdim = dims[target];
    let pstride = layout.strides[target];

    let mut residual = vec![ComplexScalar::new(0.0, 0.0); out_dim];
    for (r, res) in residual.iter_mut().enumerate() {
        let off = rest_offsets[r];
        for a in 0..pdim {
            *res += projector.amp(a).conj() * psi.amp(off + a * pstride);
        }
    }
    let prob: f64 = residual.iter().map(|a| a.norm_sqr()).sum();
    if prob < ZERO_PROB_TOL {
        return Ok(PureProjection {
            prob: prob.max(0.0),
            conditional: None,
        });
    }
    let scale = prob.sqrt().recip();
    for a in &mut residual {
        *a *= scale;
    }
    Ok(PureProjection {
        prob,
        conditional: Some(StateVector::new_unchecked(residual)),
    })
}
