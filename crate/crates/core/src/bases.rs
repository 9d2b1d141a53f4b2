//! Bi-orthonormal Fock bases of the operator spaces.
//!
//! Kets are built by applying primed maps to `|rho_0>>`, bras by applying
//! unprimed maps to `<<1|`:
//!
//! ```text
//! |m>>  = X'_{s1}^{m_s1} ... X'_{sK}^{m_sK} |rho_0>>  / sqrt(prod m!)
//! <<m|  = <<1| X_{sK}^{m_sK} ... X_{s1}^{m_s1}        / sqrt(prod m!)
//! ```
//!
//! where `s1..sK` is the product order (canonical: `nu` ascending, then
//! mode ascending). Both sides apply the factor for `sK` first, so the
//! pairing nests and `<<m'|m>> = delta` holds for anticommuting maps too.

use std::cmp::Reverse;

use faer::Mat;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    identity_op, vacuum_state, HilbertOp, ModeSystem, OperatorBra, OperatorKet, Statistics,
};
use crate::linalg::{self, ZERO};
use crate::supermaps::MapFamily;

/// Occupations `m_{nu,j}` in canonical slot order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(m: Vec<usize>) -> Self {
        Self(m)
    }

    pub fn zero(n_slots: usize) -> Self {
        Self(vec![0; n_slots])
    }

    /// `e_slot`.
    pub fn unit(n_slots: usize, slot: usize) -> Self {
        let mut m = vec![0; n_slots];
        m[slot] = 1;
        Self(m)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Every multi-index with entries in `0..=max_index`, ordered by total
/// degree and then lexicographically with larger leading entries first.
pub fn enumerate_indices(n_slots: usize, max_index: usize) -> Vec<MultiIndex> {
    let base = max_index + 1;
    let total = base.pow(n_slots as u32);
    let mut out: Vec<MultiIndex> = (0..total)
        .map(|mut code| {
            let mut m = vec![0; n_slots];
            for slot in m.iter_mut().rev() {
                *slot = code % base;
                code /= base;
            }
            MultiIndex(m)
        })
        .collect();
    out.sort_by_key(|m| (m.degree(), Reverse(m.clone())));
    out
}

/// Paired kets (columns, `D^2 x N`) and bras (rows, `N x D^2`).
#[derive(Debug, Clone)]
pub struct DualBasis {
    sys: ModeSystem,
    max_index: usize,
    order: Vec<usize>,
    indices: Vec<MultiIndex>,
    kets: Mat<C64>,
    bras: Mat<C64>,
}

/// Largest per-index bound that keeps bosonic basis construction clear of
/// the truncation edge: each mode reaches occupation `m_{0,j} + m_{1,j}`,
/// which must stay at or below `cutoff - 2`.
pub fn max_safe_index(sys: &ModeSystem) -> usize {
    match sys.statistics() {
        Statistics::Fermionic => 1,
        Statistics::Bosonic => (sys.cutoff() - 2) / 2,
    }
}

fn check_bound(sys: &ModeSystem, max_index: usize) -> Result<()> {
    match sys.statistics() {
        Statistics::Fermionic if max_index > 1 => Err(Error::InvalidSystem(format!(
            "fermionic basis indices are binary; max index {max_index} > 1"
        ))),
        Statistics::Bosonic if 2 * max_index + 2 > sys.cutoff() => Err(Error::TruncationMargin {
            max_index,
            cutoff: sys.cutoff(),
            reach: 2 * max_index,
            limit: sys.cutoff() as isize - 2,
        }),
        _ => Ok(()),
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Basis in the canonical product order.
pub fn build_dual_basis(fam: &MapFamily, max_index: usize) -> Result<DualBasis> {
    let order: Vec<usize> = (0..fam.n_slots()).collect();
    build_dual_basis_with_order(fam, max_index, &order)
}

/// Basis with an explicit product order: `order[0]` is the leftmost factor.
pub fn build_dual_basis_with_order(
    fam: &MapFamily,
    max_index: usize,
    order: &[usize],
) -> Result<DualBasis> {
    let sys = *fam.system();
    check_bound(&sys, max_index)?;
    let slots = fam.n_slots();
    let mut seen = vec![false; slots];
    if order.len() != slots
        || order
            .iter()
            .any(|&s| s >= slots || std::mem::replace(&mut seen[s], true))
    {
        return Err(Error::InvalidSystem(format!(
            "product order must be a permutation of 0..{slots}"
        )));
    }

    let indices = enumerate_indices(slots, max_index);
    let rho0 = vacuum_state(&sys).to_ket();
    let one = identity_op(&sys).to_bra();

    let columns: Vec<(Vec<C64>, Vec<C64>)> = indices
        .par_iter()
        .map(|m| {
            let mut ket = rho0.as_slice().to_vec();
            let mut bra = one.as_slice().to_vec();
            let mut norm = 1.0;
            for &s in order.iter().rev() {
                let k = m.0[s];
                for _ in 0..k {
                    ket = linalg::matvec(fam.raising_slots()[s].as_mat(), &ket);
                    bra = linalg::vecmat(&bra, fam.lowering_slots()[s].as_mat());
                }
                norm *= factorial(k);
            }
            let scale = 1.0 / norm.sqrt();
            ket.iter_mut().for_each(|x| *x *= scale);
            bra.iter_mut().for_each(|x| *x *= scale);
            (ket, bra)
        })
        .collect();

    let dd = sys.dim() * sys.dim();
    let n = indices.len();
    let kets = Mat::from_fn(dd, n, |r, c| columns[c].0[r]);
    let bras = Mat::from_fn(n, dd, |r, c| columns[r].1[c]);
    Ok(DualBasis {
        sys,
        max_index,
        order: order.to_vec(),
        indices,
        kets,
        bras,
    })
}

/// Coefficients of an expansion together with the reconstruction residual
/// (2-norm), which is nonzero when the input leaves the basis span.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub coefficients: Vec<C64>,
    pub residual: f64,
}

impl DualBasis {
    pub fn system(&self) -> &ModeSystem {
        &self.sys
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        self.indices.iter().position(|x| x == m)
    }

    /// `D^2 x N`, column `i` is `vec|m_i>>`.
    pub fn kets(&self) -> &Mat<C64> {
        &self.kets
    }

    /// `N x D^2`, row `i` is `<<m_i|`.
    pub fn bras(&self) -> &Mat<C64> {
        &self.bras
    }

    pub fn ket(&self, i: usize) -> OperatorKet {
        OperatorKet::from_vec(self.kets.col(i).iter().copied().collect()).expect("square")
    }

    pub fn bra(&self, i: usize) -> OperatorBra {
        OperatorBra::from_vec(self.bras.row(i).iter().copied().collect()).expect("square")
    }

    /// `G_{ij} = <<m_i|m_j>>`.
    pub fn gram(&self) -> Mat<C64> {
        &self.bras * &self.kets
    }

    /// `max |G - I|`.
    pub fn gram_deviation(&self) -> f64 {
        let g = self.gram();
        linalg::max_abs_diff(g.as_ref(), linalg::identity(self.len()).as_ref())
    }

    /// Smallest singular value of the ket matrix.
    pub fn min_ket_singular_value(&self) -> Result<f64> {
        let sv = self
            .kets
            .singular_values()
            .map_err(|e| Error::Linalg(format!("{e:?}")))?;
        Ok(sv.into_iter().fold(f64::INFINITY, f64::min))
    }

    /// Reassembles `sum_m sigma_m |m>>`.
    pub fn reconstruct_state(&self, sigma: &[C64]) -> Result<HilbertOp> {
        self.check_coeffs(sigma.len())?;
        Ok(OperatorKet::from_vec(linalg::matvec(self.kets.as_ref(), sigma))?.to_op())
    }

    /// Reassembles `sum_m S_m <<m|` as an operator.
    pub fn reconstruct_observable(&self, s: &[C64]) -> Result<HilbertOp> {
        self.check_coeffs(s.len())?;
        Ok(OperatorBra::from_vec(linalg::vecmat(s, self.bras.as_ref()))?.to_op())
    }

    fn check_coeffs(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: len,
            });
        }
        Ok(())
    }

    fn check_op(&self, op: &HilbertOp) -> Result<()> {
        if op.dim() != self.sys.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.sys.dim(),
                found: op.dim(),
            });
        }
        Ok(())
    }
}

/// `sigma_m = <<m|rho>>`.
pub fn expand_state(rho: &HilbertOp, basis: &DualBasis) -> Result<Expansion> {
    basis.check_op(rho)?;
    let ket = rho.to_ket();
    let sigma = linalg::matvec(basis.bras.as_ref(), ket.as_slice());
    let back = linalg::matvec(basis.kets.as_ref(), &sigma);
    let diff: Vec<C64> = ket
        .as_slice()
        .iter()
        .zip(&back)
        .map(|(a, b)| a - b)
        .collect();
    Ok(Expansion {
        coefficients: sigma,
        residual: linalg::norm2(&diff),
    })
}

/// `S_m = <<A|m>>`.
pub fn expand_observable(a: &HilbertOp, basis: &DualBasis) -> Result<Expansion> {
    basis.check_op(a)?;
    let bra = a.to_bra();
    let s = linalg::vecmat(bra.as_slice(), basis.kets.as_ref());
    let back = linalg::vecmat(&s, basis.bras.as_ref());
    let diff: Vec<C64> = bra
        .as_slice()
        .iter()
        .zip(&back)
        .map(|(a, b)| a - b)
        .collect();
    Ok(Expansion {
        coefficients: s,
        residual: linalg::norm2(&diff),
    })
}

/// `sum_m S_m sigma_m`, the coefficient-space form of `tr(S sigma)`.
pub fn coefficient_pairing(s: &[C64], sigma: &[C64]) -> Result<C64> {
    if s.len() != sigma.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            found: sigma.len(),
        });
    }
    Ok(s.iter().zip(sigma).fold(ZERO, |acc, (a, b)| acc + a * b))
}
