//! Superoperators: left/right multiplication maps, the canonical adjoint
//! maps built from them, and a checker for their algebra.
//!
//! A [`SuperOp`] acts on kets by matrix-vector product and on bras by
//! vector-matrix product. Under the row-major convention, `rho -> b rho`
//! is `b ⊗ I` and `rho -> rho b` is `I ⊗ b^T`.

use std::ops::{Add, Mul, Sub};

use faer::{Mat, MatRef};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    annihilation_op, creation_op, identity_op, parity_op, vacuum_state, HilbertOp, ModeSystem,
    OperatorBra, OperatorKet, Statistics,
};
use crate::linalg;

/// A dense `D^2 x D^2` matrix acting on vectorized operators.
#[derive(Clone, Debug)]
pub struct SuperOp {
    hilbert_dim: usize,
    mat: Mat<C64>,
}

impl SuperOp {
    pub fn from_mat(hilbert_dim: usize, mat: Mat<C64>) -> Result<Self> {
        let n = hilbert_dim * hilbert_dim;
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: mat.nrows().max(mat.ncols()),
            });
        }
        Ok(Self { hilbert_dim, mat })
    }

    pub fn identity(hilbert_dim: usize) -> Self {
        Self {
            hilbert_dim,
            mat: linalg::identity(hilbert_dim * hilbert_dim),
        }
    }

    pub fn zeros(hilbert_dim: usize) -> Self {
        let n = hilbert_dim * hilbert_dim;
        Self {
            hilbert_dim,
            mat: Mat::zeros(n, n),
        }
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    /// Side length of the matrix, `D^2`.
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

    /// `M |rho>>`.
    pub fn apply(&self, ket: &OperatorKet) -> Result<OperatorKet> {
        self.check_len(ket.as_slice().len())?;
        OperatorKet::from_vec(linalg::matvec(self.as_mat(), ket.as_slice()))
    }

    /// `<<A| M`.
    pub fn apply_bra(&self, bra: &OperatorBra) -> Result<OperatorBra> {
        self.check_len(bra.as_slice().len())?;
        OperatorBra::from_vec(linalg::vecmat(bra.as_slice(), self.as_mat()))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            hilbert_dim: self.hilbert_dim,
            mat: linalg::scaled(self.as_mat(), s),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: C64, other: &SuperOp) {
        linalg::axpy(&mut self.mat, s, other.as_mat());
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Commutator for bosons, anticommutator for fermions.
    pub fn exchange_bracket(&self, other: &Self, statistics: Statistics) -> Self {
        match statistics {
            Statistics::Bosonic => self.commutator(other),
            Statistics::Fermionic => self.anticommutator(other),
        }
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(self.as_mat())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        linalg::max_abs_diff(self.as_mat(), other.as_mat())
    }

    /// Max-norm over the given columns, i.e. on the domain spanned by the
    /// corresponding vectorized basis operators.
    pub fn max_abs_on(&self, columns: &[usize]) -> f64 {
        linalg::max_abs_columns(self.as_mat(), columns)
    }
}

impl Mul for &SuperOp {
    type Output = SuperOp;

    fn mul(self, rhs: &SuperOp) -> SuperOp {
        assert_eq!(self.hilbert_dim, rhs.hilbert_dim);
        SuperOp {
            hilbert_dim: self.hilbert_dim,
            mat: linalg::mul(self.as_mat(), rhs.as_mat()),
        }
    }
}

impl Add for &SuperOp {
    type Output = SuperOp;

    fn add(self, rhs: &SuperOp) -> SuperOp {
        SuperOp {
            hilbert_dim: self.hilbert_dim,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &SuperOp {
    type Output = SuperOp;

    fn sub(self, rhs: &SuperOp) -> SuperOp {
        SuperOp {
            hilbert_dim: self.hilbert_dim,
            mat: &self.mat - &rhs.mat,
        }
    }
}

/// `rho -> b rho`.
pub fn left_mult(b: &HilbertOp) -> SuperOp {
    let d = b.dim();
    SuperOp {
        hilbert_dim: d,
        mat: linalg::kron(b.as_mat(), linalg::identity(d).as_ref()),
    }
}

/// `rho -> rho b`.
pub fn right_mult(b: &HilbertOp) -> SuperOp {
    let d = b.dim();
    SuperOp {
        hilbert_dim: d,
        mat: linalg::kron(linalg::identity(d).as_ref(), b.transpose().as_mat()),
    }
}

/// Label `(nu, j)` of a canonical adjoint map; `mode` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MapIndex {
    pub nu: u8,
    pub mode: usize,
}

impl MapIndex {
    /// Position in the canonical order (`nu` ascending, then `mode`).
    pub fn slot(self, n_modes: usize) -> usize {
        self.nu as usize * n_modes + (self.mode - 1)
    }

    pub fn from_slot(slot: usize, n_modes: usize) -> Self {
        Self {
            nu: (slot / n_modes) as u8,
            mode: slot % n_modes + 1,
        }
    }
}

/// The `4n` canonical adjoint maps of a mode system, stored in canonical
/// slot order (see [`MapIndex::slot`]).
#[derive(Clone, Debug)]
pub struct MapFamily {
    sys: ModeSystem,
    lowering: Vec<SuperOp>,
    raising: Vec<SuperOp>,
    parity: Option<SuperOp>,
}

impl MapFamily {
    pub fn system(&self) -> &ModeSystem {
        &self.sys
    }

    pub fn n_slots(&self) -> usize {
        2 * self.sys.n_modes()
    }

    fn slot(&self, nu: u8, j: usize) -> Result<usize> {
        self.sys.check_mode(j)?;
        if nu > 1 {
            return Err(Error::InvalidSystem(format!("nu must be 0 or 1, got {nu}")));
        }
        Ok(MapIndex { nu, mode: j }.slot(self.sys.n_modes()))
    }

    /// Unprimed map `a_{nu,j}` / `c_{nu,j}`.
    pub fn lowering(&self, nu: u8, j: usize) -> Result<&SuperOp> {
        Ok(&self.lowering[self.slot(nu, j)?])
    }

    /// Primed map `a'_{nu,j}` / `c'_{nu,j}`.
    pub fn raising(&self, nu: u8, j: usize) -> Result<&SuperOp> {
        Ok(&self.raising[self.slot(nu, j)?])
    }

    pub fn lowering_slots(&self) -> &[SuperOp] {
        &self.lowering
    }

    pub fn raising_slots(&self) -> &[SuperOp] {
        &self.raising
    }

    pub fn parity(&self) -> Option<&SuperOp> {
        self.parity.as_ref()
    }

    pub fn index(&self, slot: usize) -> MapIndex {
        MapIndex::from_slot(slot, self.sys.n_modes())
    }
}

fn require(sys: &ModeSystem, expected: Statistics) -> Result<()> {
    if sys.statistics() != expected {
        return Err(Error::WrongStatistics { expected });
    }
    Ok(())
}

/// Bosonic adjoint maps:
/// `a_{0,j} = a_j^L`, `a_{1,j} = (a_j^dag)^R`,
/// `a'_{0,j} = (a_j^dag)^L - (a_j^dag)^R`, `a'_{1,j} = a_j^R - a_j^L`.
pub fn bosonic_maps(sys: &ModeSystem) -> Result<MapFamily> {
    require(sys, Statistics::Bosonic)?;
    let n = sys.n_modes();
    let mut lowering = vec![None; 2 * n];
    let mut raising = vec![None; 2 * n];
    for j in 1..=n {
        let a = annihilation_op(sys, j)?;
        let ad = creation_op(sys, j)?;
        let (al, ar) = (left_mult(&a), right_mult(&a));
        let (adl, adr) = (left_mult(&ad), right_mult(&ad));
        let s0 = MapIndex { nu: 0, mode: j }.slot(n);
        let s1 = MapIndex { nu: 1, mode: j }.slot(n);
        raising[s0] = Some(&adl - &adr);
        raising[s1] = Some(&ar - &al);
        lowering[s0] = Some(al);
        lowering[s1] = Some(adr);
    }
    Ok(MapFamily {
        sys: *sys,
        lowering: lowering.into_iter().map(Option::unwrap).collect(),
        raising: raising.into_iter().map(Option::unwrap).collect(),
        parity: None,
    })
}

/// `P^ = P^L P^R` with `P = exp(i pi N)`: conjugation by number parity.
pub fn parity_superop(sys: &ModeSystem) -> Result<SuperOp> {
    require(sys, Statistics::Fermionic)?;
    let p = parity_op(sys);
    Ok(&left_mult(&p) * &right_mult(&p))
}

/// Fermionic adjoint maps, written as products of matrices (rightmost
/// factor acts first):
///
/// ```text
/// c_{0,j}  = c_j^L                 c_{1,j}  = (c_j^dag)^R P^
/// c'_{0,j} = (c_j^dag)^L - P^ (c_j^dag)^R
/// c'_{1,j} = P^ c_j^R - c_j^L
/// ```
///
/// In the primed maps the parity acts after the right multiplication; with
/// the opposite placement `<<1| c'_{0,j} = 2 <<c_j^dag|` instead of zero.
/// Since `P^` anticommutes with `c^R`, the primed maps equal
/// `(c^dag)^L + (c^dag)^R P^` and `-c^R P^ - c^L`.
pub fn fermionic_maps(sys: &ModeSystem) -> Result<MapFamily> {
    require(sys, Statistics::Fermionic)?;
    let n = sys.n_modes();
    let parity = parity_superop(sys)?;
    let mut lowering = vec![None; 2 * n];
    let mut raising = vec![None; 2 * n];
    for j in 1..=n {
        let c = annihilation_op(sys, j)?;
        let cd = creation_op(sys, j)?;
        let cl = left_mult(&c);
        let cdl = left_mult(&cd);
        let (cr, cdr) = (right_mult(&c), right_mult(&cd));
        let cdr_p = &cdr * &parity;
        let s0 = MapIndex { nu: 0, mode: j }.slot(n);
        let s1 = MapIndex { nu: 1, mode: j }.slot(n);
        raising[s0] = Some(&cdl - &(&parity * &cdr));
        raising[s1] = Some(&(&parity * &cr) - &cl);
        lowering[s0] = Some(cl);
        lowering[s1] = Some(cdr_p);
    }
    Ok(MapFamily {
        sys: *sys,
        lowering: lowering.into_iter().map(Option::unwrap).collect(),
        raising: raising.into_iter().map(Option::unwrap).collect(),
        parity: Some(parity),
    })
}

/// Adjoint maps for either statistics.
pub fn canonical_maps(sys: &ModeSystem) -> Result<MapFamily> {
    match sys.statistics() {
        Statistics::Bosonic => bosonic_maps(sys),
        Statistics::Fermionic => fermionic_maps(sys),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairResidual {
    pub left: MapIndex,
    pub right: MapIndex,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapResidual {
    pub map: MapIndex,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParityResiduals {
    /// `||<<1|P^ - <<1|||`.
    pub left_vacuum: f64,
    /// `||P^|rho_0>> - |rho_0>>||`.
    pub right_vacuum: f64,
    /// Max over all `4n` maps of `||{P^, map}||`.
    pub anticommutation: f64,
}

/// Max-norm residuals of every defining relation of a [`MapFamily`].
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraReport {
    pub statistics: Statistics,
    pub n_modes: usize,
    pub cutoff: usize,
    /// Bosonic bracket residuals are measured on operators supported on
    /// the interior (occupation `<= cutoff - 1`) subspace.
    pub interior_restricted: bool,
    /// `[a_{nu,j}, a'_{mu,k}]_± - delta I`.
    pub canonical: Vec<PairResidual>,
    /// `[a_{nu,j}, a_{mu,k}]_±`.
    pub lowering_pairs: Vec<PairResidual>,
    /// `[a'_{nu,j}, a'_{mu,k}]_±`.
    pub raising_pairs: Vec<PairResidual>,
    /// `<<1| a'_{nu,j}`.
    pub left_vacuum: Vec<MapResidual>,
    /// `a_{nu,j} |rho_0>>`.
    pub right_vacuum: Vec<MapResidual>,
    pub parity: Option<ParityResiduals>,
    /// Canonical residual without the interior restriction. Nonzero for
    /// bosons (truncation edge), equal to the restricted one for fermions.
    pub unrestricted_canonical: f64,
}

fn max_of<'a>(it: impl Iterator<Item = &'a f64>) -> f64 {
    it.fold(0.0f64, |m, &x| m.max(x))
}

impl AlgebraReport {
    pub fn max_canonical(&self) -> f64 {
        max_of(self.canonical.iter().map(|p| &p.residual))
    }

    pub fn max_same_type(&self) -> f64 {
        max_of(
            self.lowering_pairs
                .iter()
                .chain(&self.raising_pairs)
                .map(|p| &p.residual),
        )
    }

    pub fn max_left_vacuum(&self) -> f64 {
        max_of(self.left_vacuum.iter().map(|m| &m.residual))
    }

    pub fn max_right_vacuum(&self) -> f64 {
        max_of(self.right_vacuum.iter().map(|m| &m.residual))
    }

    pub fn max_parity(&self) -> f64 {
        self.parity.as_ref().map_or(0.0, |p| {
            p.left_vacuum.max(p.right_vacuum).max(p.anticommutation)
        })
    }

    /// Largest residual across every (restricted) relation.
    pub fn max_residual(&self) -> f64 {
        self.max_canonical()
            .max(self.max_same_type())
            .max(self.max_left_vacuum())
            .max(self.max_right_vacuum())
            .max(self.max_parity())
    }
}

/// Evaluates the almost-canonical (anti)commutation relations, the two
/// vacuum conditions and, for fermions, the parity properties.
pub fn verify_algebra(fam: &MapFamily) -> AlgebraReport {
    let sys = fam.system();
    let stats = sys.statistics();
    let slots = fam.n_slots();
    let d = sys.dim();
    let id = SuperOp::identity(d);
    let domain = sys.interior_operator_indices();
    let restricted = stats == Statistics::Bosonic;
    let pairs: Vec<(usize, usize)> = (0..slots)
        .flat_map(|a| (0..slots).map(move |b| (a, b)))
        .collect();

    let canonical_full: Vec<(PairResidual, f64)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut dev = fam.lowering[a].exchange_bracket(&fam.raising[b], stats);
            if a == b {
                dev = &dev - &id;
            }
            let pr = PairResidual {
                left: fam.index(a),
                right: fam.index(b),
                residual: if restricted {
                    dev.max_abs_on(&domain)
                } else {
                    dev.max_abs()
                },
            };
            (pr, dev.max_abs())
        })
        .collect();
    let unrestricted_canonical = max_of(canonical_full.iter().map(|(_, u)| u));
    let canonical = canonical_full.into_iter().map(|(p, _)| p).collect();

    let same_type = |ops: &[SuperOp]| -> Vec<PairResidual> {
        pairs
            .par_iter()
            .map(|&(a, b)| {
                let bracket = ops[a].exchange_bracket(&ops[b], stats);
                PairResidual {
                    left: fam.index(a),
                    right: fam.index(b),
                    residual: if restricted {
                        bracket.max_abs_on(&domain)
                    } else {
                        bracket.max_abs()
                    },
                }
            })
            .collect()
    };
    let lowering_pairs = same_type(&fam.lowering);
    let raising_pairs = same_type(&fam.raising);

    let one = identity_op(sys).to_bra();
    let rho0 = vacuum_state(sys).to_ket();
    let left_vacuum = (0..slots)
        .map(|s| MapResidual {
            map: fam.index(s),
            residual: linalg::max_abs_vec(fam.raising[s].apply_bra(&one).expect("dims").as_slice()),
        })
        .collect();
    let right_vacuum = (0..slots)
        .map(|s| MapResidual {
            map: fam.index(s),
            residual: linalg::max_abs_vec(fam.lowering[s].apply(&rho0).expect("dims").as_slice()),
        })
        .collect();

    let parity = fam.parity.as_ref().map(|p| {
        let lv: Vec<C64> = p
            .apply_bra(&one)
            .expect("dims")
            .as_slice()
            .iter()
            .zip(one.as_slice())
            .map(|(x, y)| x - y)
            .collect();
        let rv: Vec<C64> = p
            .apply(&rho0)
            .expect("dims")
            .as_slice()
            .iter()
            .zip(rho0.as_slice())
            .map(|(x, y)| x - y)
            .collect();
        let anti = fam
            .lowering
            .par_iter()
            .chain(fam.raising.par_iter())
            .map(|m| p.anticommutator(m).max_abs())
            .reduce(|| 0.0, f64::max);
        ParityResiduals {
            left_vacuum: linalg::max_abs_vec(&lv),
            right_vacuum: linalg::max_abs_vec(&rv),
            anticommutation: anti,
        }
    });

    AlgebraReport {
        statistics: stats,
        n_modes: sys.n_modes(),
        cutoff: sys.cutoff(),
        interior_restricted: restricted,
        canonical,
        lowering_pairs,
        raising_pairs,
        left_vacuum,
        right_vacuum,
        parity,
        unrestricted_canonical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::trace_pair;

    fn sample_op(d: usize, seed: u64) -> HilbertOp {
        HilbertOp::from_fn(d, |r, c| {
            let h = (r as u64 * 131 + c as u64 * 71 + seed * 37) % 97;
            C64::new(h as f64 / 97.0 - 0.5, ((h * 13) % 29) as f64 / 29.0 - 0.5)
        })
    }

    #[test]
    fn left_and_right_of_identity_are_identity() {
        let sys = ModeSystem::fermionic(2).unwrap();
        let one = identity_op(&sys);
        let id = SuperOp::identity(4);
        assert_eq!(left_mult(&one).max_abs_diff(&id), 0.0);
        assert_eq!(right_mult(&one).max_abs_diff(&id), 0.0);
    }

    #[test]
    fn multiplication_maps_act_as_products() {
        let (b, rho) = (sample_op(3, 1), sample_op(3, 2));
        let left = left_mult(&b).apply(&rho.to_ket()).unwrap().to_op();
        assert!(left.max_abs_diff(&(&b * &rho)) < 1e-14);
        let right = right_mult(&b).apply(&rho.to_ket()).unwrap().to_op();
        assert!(right.max_abs_diff(&(&rho * &b)) < 1e-14);
    }

    #[test]
    fn bra_side_is_cyclic_trace_dual() {
        let (a, b, rho) = (sample_op(4, 3), sample_op(4, 4), sample_op(4, 5));
        // <<A| b^L = <<A b|
        let lhs = left_mult(&b).apply_bra(&a.to_bra()).unwrap();
        let ab = (&a * &b).to_bra();
        assert!(
            linalg::max_abs_vec(
                &lhs.as_slice()
                    .iter()
                    .zip(ab.as_slice())
                    .map(|(x, y)| x - y)
                    .collect::<Vec<_>>()
            ) < 1e-13
        );
        // <<A| b^R = <<b A|
        let lhs = right_mult(&b).apply_bra(&a.to_bra()).unwrap();
        let want = trace_pair(&(&b * &a), &rho).unwrap();
        assert!((lhs.pair(&rho.to_ket()).unwrap() - want).norm() < 1e-13);
    }

    #[test]
    fn left_and_right_commute() {
        let (b, c) = (sample_op(3, 6), sample_op(3, 7));
        let (l, r) = (left_mult(&b), right_mult(&c));
        assert!((&l * &r).max_abs_diff(&(&r * &l)) < 1e-13);
    }

    #[test]
    fn single_mode_parity_superop() {
        let sys = ModeSystem::fermionic(1).unwrap();
        let p = parity_superop(&sys).unwrap();
        let diag = [1.0, -1.0, -1.0, 1.0];
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c { diag[r] } else { 0.0 };
                assert_eq!(p.get(r, c), C64::new(want, 0.0));
            }
        }
        assert_eq!((&p * &p).max_abs_diff(&SuperOp::identity(2)), 0.0);
    }

    #[test]
    fn statistics_are_checked() {
        let f = ModeSystem::fermionic(1).unwrap();
        let b = ModeSystem::bosonic(1, 3).unwrap();
        assert!(matches!(
            bosonic_maps(&f),
            Err(Error::WrongStatistics { .. })
        ));
        assert!(matches!(
            fermionic_maps(&b),
            Err(Error::WrongStatistics { .. })
        ));
        assert!(matches!(
            parity_superop(&b),
            Err(Error::WrongStatistics { .. })
        ));
    }

    #[test]
    fn bosonic_vacuum_conditions() {
        let sys = ModeSystem::bosonic(2, 3).unwrap();
        let fam = bosonic_maps(&sys).unwrap();
        let report = verify_algebra(&fam);
        assert!(report.max_left_vacuum() <= 1e-12);
        assert!(report.max_right_vacuum() <= 1e-13);
    }

    #[test]
    fn bosonic_single_mode_ccr_interior() {
        let sys = ModeSystem::bosonic(1, 4).unwrap();
        let fam = bosonic_maps(&sys).unwrap();
        let comm = fam
            .lowering(0, 1)
            .unwrap()
            .commutator(fam.raising(0, 1).unwrap());
        let dev = &comm - &SuperOp::identity(sys.dim());
        assert!(dev.max_abs_on(&sys.interior_operator_indices()) <= 1e-12);
    }

    #[test]
    fn bosonic_edge_residual_is_cutoff_plus_one() {
        let sys = ModeSystem::bosonic(1, 5).unwrap();
        let report = verify_algebra(&bosonic_maps(&sys).unwrap());
        assert!(report.max_residual() <= 1e-12);
        assert!((report.unrestricted_canonical - 6.0).abs() < 1e-12);
    }

    #[test]
    fn fermionic_single_mode_almost_car() {
        let sys = ModeSystem::fermionic(1).unwrap();
        let fam = fermionic_maps(&sys).unwrap();
        let ac = fam
            .lowering(0, 1)
            .unwrap()
            .anticommutator(fam.raising(0, 1).unwrap());
        assert!(ac.max_abs_diff(&SuperOp::identity(2)) <= 1e-13);
        let rho0 = vacuum_state(&sys).to_ket();
        for nu in 0..2 {
            let v = fam.lowering(nu, 1).unwrap().apply(&rho0).unwrap();
            assert!(linalg::max_abs_vec(v.as_slice()) <= 1e-13);
        }
    }

    #[test]
    fn fermionic_two_modes_all_sixteen_pairs() {
        let sys = ModeSystem::fermionic(2).unwrap();
        let fam = fermionic_maps(&sys).unwrap();
        let id = SuperOp::identity(4);
        let zero = SuperOp::zeros(4);
        let mut checked = 0;
        for a in 0..4 {
            for b in 0..4 {
                let ac = fam.lowering_slots()[a].anticommutator(&fam.raising_slots()[b]);
                let want = if a == b { &id } else { &zero };
                assert!(ac.max_abs_diff(want) <= 1e-13, "pair ({a},{b})");
                checked += 1;
            }
        }
        assert_eq!(checked, 16);
        let report = verify_algebra(&fam);
        assert!(report.max_residual() <= 1e-13);
        assert_eq!(report.unrestricted_canonical, report.max_canonical());
    }

    #[test]
    fn primed_maps_are_not_hermitian_adjoints() {
        let sys = ModeSystem::fermionic(1).unwrap();
        let fam = fermionic_maps(&sys).unwrap();
        for nu in 0..2 {
            let lower = fam.lowering(nu, 1).unwrap();
            let adj = Mat::from_fn(4, 4, |r, c| lower.get(c, r).conj());
            let adj = SuperOp::from_mat(2, adj).unwrap();
            assert!(fam.raising(nu, 1).unwrap().max_abs_diff(&adj) > 0.5);
        }
    }

    #[test]
    fn map_index_slots_round_trip() {
        for n in 1..4 {
            for s in 0..2 * n {
                assert_eq!(MapIndex::from_slot(s, n).slot(n), s);
            }
        }
        let sys = ModeSystem::fermionic(2).unwrap();
        let fam = fermionic_maps(&sys).unwrap();
        assert!(fam.lowering(2, 1).is_err());
        assert!(fam.raising(0, 3).is_err());
    }
}
