//! Finite Fock spaces of `n` fermionic or truncated bosonic modes.
//!
//! Mode 1 is the outermost tensor factor: a basis state with occupations
//! `(o_1, ..., o_n)` has index `sum_j o_j * d^(n - j)` where `d` is the
//! local dimension (2 for fermions, `cutoff + 1` for bosons). Fermionic
//! operators use the Jordan-Wigner string over modes `1..j`.
//!
//! Operators are vectorized row-major: entry `(r, c)` of a `D x D` matrix
//! lands at index `r * D + c`. A bra is stored as `vec(A^T)` so that the
//! pairing `<<A|rho>> = tr(A rho)` is a plain (unconjugated) dot product.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use faer::{Mat, MatRef};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Fermionic,
    Bosonic,
}

impl Statistics {
    /// +1 for bosons (commutators), -1 for fermions (anticommutators).
    pub fn exchange_sign(self) -> f64 {
        match self {
            Statistics::Bosonic => 1.0,
            Statistics::Fermionic => -1.0,
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Fermionic => "fermionic",
            Statistics::Bosonic => "bosonic",
        })
    }
}

/// The physical setting: statistics, number of modes and (for bosons) the
/// per-mode occupation cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeSystem {
    statistics: Statistics,
    n_modes: usize,
    cutoff: usize,
}

impl ModeSystem {
    /// `cutoff` is ignored for fermions (the occupation bound is always 1).
    pub fn new(statistics: Statistics, n_modes: usize, cutoff: Option<usize>) -> Result<Self> {
        if n_modes < 1 {
            return Err(Error::InvalidSystem("n_modes must be ≥ 1".into()));
        }
        let cutoff = match statistics {
            Statistics::Fermionic => 1,
            Statistics::Bosonic => {
                let c = cutoff.ok_or_else(|| {
                    Error::InvalidSystem("bosonic systems require a cutoff".into())
                })?;
                if c < 2 {
                    return Err(Error::InvalidSystem("bosonic cutoff must be ≥ 2".into()));
                }
                c
            }
        };
        Ok(Self {
            statistics,
            n_modes,
            cutoff,
        })
    }

    pub fn fermionic(n_modes: usize) -> Result<Self> {
        Self::new(Statistics::Fermionic, n_modes, None)
    }

    pub fn bosonic(n_modes: usize, cutoff: usize) -> Result<Self> {
        Self::new(Statistics::Bosonic, n_modes, Some(cutoff))
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Maximum occupation per mode.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn local_dim(&self) -> usize {
        self.cutoff + 1
    }

    /// Hilbert space dimension `D`.
    pub fn dim(&self) -> usize {
        self.local_dim().pow(self.n_modes as u32)
    }

    pub fn is_fermionic(&self) -> bool {
        self.statistics == Statistics::Fermionic
    }

    pub fn check_mode(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n_modes {
            Err(Error::ModeOutOfRange {
                mode: j,
                n_modes: self.n_modes,
            })
        } else {
            Ok(())
        }
    }

    /// Occupations `(o_1, ..., o_n)` of basis state `index`.
    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let d = self.local_dim();
        let mut occ = vec![0; self.n_modes];
        for slot in occ.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        occ
    }

    /// Basis states whose every mode occupation is at most `cutoff - 1`.
    /// For fermions every state qualifies.
    pub fn interior_states(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&s| match self.statistics {
                Statistics::Fermionic => true,
                Statistics::Bosonic => self.occupations(s).iter().all(|&o| o < self.cutoff),
            })
            .collect()
    }

    /// Vectorized indices `r * D + c` of operators supported on the interior
    /// subspace in both row and column.
    pub fn interior_operator_indices(&self) -> Vec<usize> {
        let d = self.dim();
        let states = self.interior_states();
        let mut out = Vec::with_capacity(states.len() * states.len());
        for &r in &states {
            for &c in &states {
                out.push(r * d + c);
            }
        }
        out
    }
}

/// A dense complex `D x D` matrix on the Fock space.
#[derive(Clone, Debug)]
pub struct HilbertOp {
    mat: Mat<C64>,
}

impl HilbertOp {
    pub fn from_mat(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                let z = mat[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(Self { mat })
    }

    /// Row-major nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::from_mat(Mat::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            mat: Mat::from_fn(dim, dim, f),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: Mat::zeros(dim, dim),
        }
    }

    pub(crate) fn from_mat_unchecked(mat: Mat<C64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.mat
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.mat[(r, c)]
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.mat[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.mat[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.mat[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            mat: linalg::scaled(self.as_mat(), s),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(self.as_mat())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        linalg::max_abs_diff(self.as_mat(), other.as_mat())
    }

    /// `||A - A^dagger||_max`.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Row-major vectorization `vec(rho)`.
    pub fn to_ket(&self) -> OperatorKet {
        let d = self.dim();
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                data.push(self.mat[(r, c)]);
            }
        }
        OperatorKet { dim: d, data }
    }

    /// `vec(A^T)` as a row vector.
    pub fn to_bra(&self) -> OperatorBra {
        let d = self.dim();
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                data.push(self.mat[(c, r)]);
            }
        }
        OperatorBra { dim: d, data }
    }
}

impl Mul for &HilbertOp {
    type Output = HilbertOp;

    fn mul(self, rhs: &HilbertOp) -> HilbertOp {
        HilbertOp::from_mat_unchecked(linalg::mul(self.as_mat(), rhs.as_mat()))
    }
}

impl Add for &HilbertOp {
    type Output = HilbertOp;

    fn add(self, rhs: &HilbertOp) -> HilbertOp {
        HilbertOp::from_mat_unchecked(&self.mat + &rhs.mat)
    }
}

impl Sub for &HilbertOp {
    type Output = HilbertOp;

    fn sub(self, rhs: &HilbertOp) -> HilbertOp {
        HilbertOp::from_mat_unchecked(&self.mat - &rhs.mat)
    }
}

/// Element of the density-operator space: `vec(rho)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorKet {
    dim: usize,
    data: Vec<C64>,
}

/// Element of the observable space: `vec(A^T)^T`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBra {
    dim: usize,
    data: Vec<C64>,
}

fn hilbert_dim_of(len: usize) -> Result<usize> {
    let d = (len as f64).sqrt().round() as usize;
    if d * d != len {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: len,
        });
    }
    Ok(d)
}

impl OperatorKet {
    pub fn from_vec(data: Vec<C64>) -> Result<Self> {
        let dim = hilbert_dim_of(data.len())?;
        Ok(Self { dim, data })
    }

    pub fn hilbert_dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    /// Inverse of [`HilbertOp::to_ket`].
    pub fn to_op(&self) -> HilbertOp {
        let d = self.dim;
        HilbertOp::from_fn(d, |r, c| self.data[r * d + c])
    }
}

impl OperatorBra {
    pub fn from_vec(data: Vec<C64>) -> Result<Self> {
        let dim = hilbert_dim_of(data.len())?;
        Ok(Self { dim, data })
    }

    pub fn hilbert_dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    /// Inverse of [`HilbertOp::to_bra`].
    pub fn to_op(&self) -> HilbertOp {
        let d = self.dim;
        HilbertOp::from_fn(d, |r, c| self.data[c * d + r])
    }

    /// The contraction `<<A|rho>>`.
    pub fn pair(&self, ket: &OperatorKet) -> Result<C64> {
        if self.data.len() != ket.data.len() {
            return Err(Error::DimensionMismatch {
                expected: self.data.len(),
                found: ket.data.len(),
            });
        }
        Ok(linalg::dot(&self.data, &ket.data))
    }
}

fn embed_single_mode(
    sys: &ModeSystem,
    j: usize,
    local: &Mat<C64>,
    string: Option<&Mat<C64>>,
) -> Mat<C64> {
    let d = sys.local_dim();
    let id = linalg::identity(d);
    let mut out = linalg::identity(1);
    for mode in 1..=sys.n_modes() {
        let factor = if mode == j {
            local
        } else if mode < j {
            string.unwrap_or(&id)
        } else {
            &id
        };
        out = linalg::kron(out.as_ref(), factor.as_ref());
    }
    out
}

/// Annihilation operator `a_j` (bosonic, truncated) or `c_j` (fermionic,
/// Jordan-Wigner). Modes are 1-based.
pub fn annihilation_op(sys: &ModeSystem, j: usize) -> Result<HilbertOp> {
    sys.check_mode(j)?;
    let d = sys.local_dim();
    // a|o> = sqrt(o)|o - 1>: entries sqrt(o) at (o - 1, o).
    let local = Mat::from_fn(d, d, |r, c| {
        if c == r + 1 {
            C64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let string = match sys.statistics() {
        Statistics::Fermionic => Some(Mat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => ONE,
            (1, 1) => -ONE,
            _ => ZERO,
        })),
        Statistics::Bosonic => None,
    };
    Ok(HilbertOp::from_mat_unchecked(embed_single_mode(
        sys,
        j,
        &local,
        string.as_ref(),
    )))
}

pub fn creation_op(sys: &ModeSystem, j: usize) -> Result<HilbertOp> {
    Ok(annihilation_op(sys, j)?.adjoint())
}

/// `n_j = a_j^dagger a_j`, diagonal in the occupation basis.
pub fn number_op(sys: &ModeSystem, j: usize) -> Result<HilbertOp> {
    sys.check_mode(j)?;
    Ok(HilbertOp::from_fn(sys.dim(), |r, c| {
        if r == c {
            C64::new(sys.occupations(r)[j - 1] as f64, 0.0)
        } else {
            ZERO
        }
    }))
}

/// Number parity `exp(i pi N)` with `N` the total occupation.
pub fn parity_op(sys: &ModeSystem) -> HilbertOp {
    HilbertOp::from_fn(sys.dim(), |r, c| {
        if r != c {
            ZERO
        } else if sys.occupations(r).iter().sum::<usize>() % 2 == 0 {
            ONE
        } else {
            -ONE
        }
    })
}

/// `rho_0 = |0><0|`, the projector onto the Fock vacuum.
pub fn vacuum_state(sys: &ModeSystem) -> HilbertOp {
    HilbertOp::from_fn(sys.dim(), |r, c| if r == 0 && c == 0 { ONE } else { ZERO })
}

pub fn identity_op(sys: &ModeSystem) -> HilbertOp {
    HilbertOp::from_mat_unchecked(linalg::identity(sys.dim()))
}

/// `tr(A rho)`, computed directly from the matrices.
pub fn trace_pair(a: &HilbertOp, rho: &HilbertOp) -> Result<C64> {
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: rho.dim(),
        });
    }
    let d = a.dim();
    let mut acc = ZERO;
    for r in 0..d {
        for k in 0..d {
            acc += a.get(r, k) * rho.get(k, r);
        }
    }
    Ok(acc)
}

/// Max-norm of `op` restricted to columns in `states` (i.e. on the domain
/// spanned by those basis states).
pub fn max_abs_on_states(op: &HilbertOp, states: &[usize]) -> f64 {
    linalg::max_abs_columns(op.as_mat(), states)
}
