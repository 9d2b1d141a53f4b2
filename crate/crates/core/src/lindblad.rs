//! Quadratic Lindblad generators: assembly, spectrum and steady state.
//!
//! The generator uses the factor-2 normalization
//!
//! ```text
//! L(rho) = -i [H, rho] + sum_mu ( 2 L_mu rho L_mu^dag - {L_mu^dag L_mu, rho} )
//! ```
//!
//! so rates are twice those of the `L rho L^dag - 1/2 {..}` convention.
//! With this choice a single boson with `L = sqrt(gamma) a` has decay
//! eigenvalues `-gamma (m + m')`.

use faer::Side;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    annihilation_op, creation_op, trace_pair, HilbertOp, ModeSystem, OperatorKet, Statistics,
};
use crate::linalg::{self, ZERO};
use crate::supermaps::{left_mult, right_mult, SuperOp};

/// Tolerance on Hermiticity / (anti)symmetry of the coefficient matrices.
pub const COEFFICIENT_TOL: f64 = 1e-13;
/// Relative singular-value threshold for the null space of the generator.
pub const NULL_SPACE_TOL: f64 = 1e-10;
/// Gaps below this are flagged as near-degenerate.
pub const NEAR_DEGENERATE_GAP: f64 = 1e-8;

/// `L = sum_j u_j a_j + v_j a_j^dag`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LindbladOp {
    pub u: Vec<C64>,
    pub v: Vec<C64>,
}

impl LindbladOp {
    pub fn new(u: Vec<C64>, v: Vec<C64>) -> Self {
        Self { u, v }
    }

    /// `sqrt(rate) a_j`.
    pub fn loss(n_modes: usize, j: usize, rate: f64) -> Self {
        let mut u = vec![ZERO; n_modes];
        u[j - 1] = C64::new(rate.sqrt(), 0.0);
        Self {
            u,
            v: vec![ZERO; n_modes],
        }
    }

    /// `sqrt(rate) a_j^dag`.
    pub fn gain(n_modes: usize, j: usize, rate: f64) -> Self {
        let mut v = vec![ZERO; n_modes];
        v[j - 1] = C64::new(rate.sqrt(), 0.0);
        Self {
            u: vec![ZERO; n_modes],
            v,
        }
    }
}

/// Quadratic Hamiltonian
/// `H = sum h_jk a_j^dag a_k + sum (D_jk a_j^dag a_k^dag + h.c.)`
/// with Lindblad operators linear in the mode operators.
#[derive(Debug, Clone, Serialize)]
pub struct QuadraticLindbladModel {
    sys: ModeSystem,
    hopping: Vec<Vec<C64>>,
    pairing: Vec<Vec<C64>>,
    lindblad_ops: Vec<LindbladOp>,
}

fn check_square(name: &str, m: &[Vec<C64>], n: usize) -> Result<()> {
    if m.len() != n {
        return Err(Error::InvalidModel(format!(
            "{name} must have {n} rows, found {}",
            m.len()
        )));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidModel(format!(
                "{name}[{i}] must have {n} entries, found {}",
                row.len()
            )));
        }
        if let Some(j) = row
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidModel(format!(
                "{name}[{i}][{j}] is not finite"
            )));
        }
    }
    Ok(())
}

impl QuadraticLindbladModel {
    /// `pairing = None` means no pairing terms.
    pub fn new(
        sys: ModeSystem,
        hopping: Vec<Vec<C64>>,
        pairing: Option<Vec<Vec<C64>>>,
        lindblad_ops: Vec<LindbladOp>,
    ) -> Result<Self> {
        let n = sys.n_modes();
        check_square("H_hop", &hopping, n)?;
        for i in 0..n {
            for j in 0..n {
                if (hopping[i][j] - hopping[j][i].conj()).norm() > COEFFICIENT_TOL {
                    return Err(Error::InvalidModel(format!(
                        "H_hop is not Hermitian at [{i}][{j}]"
                    )));
                }
            }
        }
        let pairing = pairing.unwrap_or_else(|| vec![vec![ZERO; n]; n]);
        check_square("H_pair", &pairing, n)?;
        let sign = match sys.statistics() {
            Statistics::Bosonic => 1.0,
            Statistics::Fermionic => -1.0,
        };
        for i in 0..n {
            for j in 0..n {
                if (pairing[i][j] - pairing[j][i] * sign).norm() > COEFFICIENT_TOL {
                    let kind = if sign > 0.0 {
                        "symmetric"
                    } else {
                        "antisymmetric"
                    };
                    return Err(Error::InvalidModel(format!(
                        "H_pair must be {kind} for {} modes; violated at [{i}][{j}]",
                        sys.statistics()
                    )));
                }
            }
        }
        for (mu, op) in lindblad_ops.iter().enumerate() {
            for (name, coeffs) in [("u", &op.u), ("v", &op.v)] {
                if coeffs.len() != n {
                    return Err(Error::InvalidModel(format!(
                        "lindblad_ops[{mu}].{name} must have {n} entries, found {}",
                        coeffs.len()
                    )));
                }
                if coeffs
                    .iter()
                    .any(|z| !(z.re.is_finite() && z.im.is_finite()))
                {
                    return Err(Error::InvalidModel(format!(
                        "lindblad_ops[{mu}].{name} has non-finite entries"
                    )));
                }
            }
        }
        Ok(Self {
            sys,
            hopping,
            pairing,
            lindblad_ops,
        })
    }

    pub fn system(&self) -> &ModeSystem {
        &self.sys
    }

    pub fn hopping(&self) -> &[Vec<C64>] {
        &self.hopping
    }

    pub fn pairing(&self) -> &[Vec<C64>] {
        &self.pairing
    }

    pub fn lindblad_ops(&self) -> &[LindbladOp] {
        &self.lindblad_ops
    }

    fn ladder(&self) -> (Vec<HilbertOp>, Vec<HilbertOp>) {
        let n = self.sys.n_modes();
        let a = (1..=n)
            .map(|j| annihilation_op(&self.sys, j).expect("mode in range"))
            .collect();
        let ad = (1..=n)
            .map(|j| creation_op(&self.sys, j).expect("mode in range"))
            .collect();
        (a, ad)
    }

    pub fn hamiltonian(&self) -> HilbertOp {
        let (a, ad) = self.ladder();
        let n = self.sys.n_modes();
        let mut h = HilbertOp::zeros(self.sys.dim());
        for j in 0..n {
            for k in 0..n {
                let t = self.hopping[j][k];
                if t != ZERO {
                    h = &h + &(&ad[j] * &a[k]).scale(t);
                }
                let p = self.pairing[j][k];
                if p != ZERO {
                    h = &h + &(&ad[j] * &ad[k]).scale(p);
                    h = &h + &(&a[k] * &a[j]).scale(p.conj());
                }
            }
        }
        h
    }

    /// Matrices of the Lindblad operators.
    pub fn jump_operators(&self) -> Vec<HilbertOp> {
        let (a, ad) = self.ladder();
        self.lindblad_ops
            .iter()
            .map(|op| {
                let mut l = HilbertOp::zeros(self.sys.dim());
                for j in 0..self.sys.n_modes() {
                    if op.u[j] != ZERO {
                        l = &l + &a[j].scale(op.u[j]);
                    }
                    if op.v[j] != ZERO {
                        l = &l + &ad[j].scale(op.v[j]);
                    }
                }
                l
            })
            .collect()
    }
}

/// The generator as a superoperator, built from left/right multiplication
/// maps only.
pub fn assemble_liouvillean(model: &QuadraticLindbladModel) -> SuperOp {
    let d = model.sys.dim();
    let h = model.hamiltonian();
    let mut gen = SuperOp::zeros(d);
    gen.add_scaled(C64::new(0.0, -1.0), &left_mult(&h));
    gen.add_scaled(C64::new(0.0, 1.0), &right_mult(&h));
    for l in model.jump_operators() {
        let ld = l.adjoint();
        let ldl = &ld * &l;
        gen.add_scaled(C64::new(2.0, 0.0), &(&left_mult(&l) * &right_mult(&ld)));
        gen.add_scaled(C64::new(-1.0, 0.0), &left_mult(&ldl));
        gen.add_scaled(C64::new(-1.0, 0.0), &right_mult(&ldl));
    }
    gen
}

/// Eigenvalues sorted by real part (descending), ties by imaginary part
/// (descending).
pub fn superop_spectrum(op: &SuperOp) -> Result<Vec<C64>> {
    let mut ev = op
        .as_mat()
        .eigenvalues()
        .map_err(|e| Error::Linalg(format!("eigenvalue solver failed: {e:?}")))?;
    ev.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    Ok(ev)
}

pub fn spectrum(model: &QuadraticLindbladModel) -> Result<Vec<C64>> {
    superop_spectrum(&assemble_liouvillean(model))
}

#[derive(Debug, Clone)]
pub enum SteadyState {
    Unique(HilbertOp),
    /// Raw null vectors (devectorized); no particular state is chosen.
    Degenerate(Vec<HilbertOp>),
}

#[derive(Debug, Clone)]
pub struct NessResult {
    pub steady_state: SteadyState,
    pub null_dim: usize,
    /// `-max Re(lambda)` over eigenvalues outside the null space, floored at 0.
    pub spectral_gap: f64,
    pub near_degenerate: bool,
    /// `||L vec(rho)||_2` for the unique state; the largest such norm over
    /// the null basis otherwise.
    pub residual: f64,
    /// Full spectrum, sorted as in [`spectrum`].
    pub eigenvalues: Vec<C64>,
}

impl NessResult {
    pub fn state(&self) -> Result<&HilbertOp> {
        match &self.steady_state {
            SteadyState::Unique(rho) => Ok(rho),
            SteadyState::Degenerate(_) => Err(Error::Degenerate {
                null_dim: self.null_dim,
            }),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.steady_state, SteadyState::Degenerate(_))
    }
}

/// Smallest eigenvalue of the Hermitian part of `rho`.
pub fn min_eigenvalue(rho: &HilbertOp) -> Result<f64> {
    let herm = &rho.scale(C64::new(0.5, 0.0)) + &rho.adjoint().scale(C64::new(0.5, 0.0));
    let ev = herm
        .as_mat()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Linalg(format!("Hermitian eigensolver failed: {e:?}")))?;
    Ok(ev.into_iter().fold(f64::INFINITY, f64::min))
}

/// Steady state from the null space of the generator.
pub fn ness(model: &QuadraticLindbladModel) -> Result<NessResult> {
    ness_of(&assemble_liouvillean(model))
}

pub fn ness_of(gen: &SuperOp) -> Result<NessResult> {
    let d = gen.hilbert_dim();
    let svd = gen
        .as_mat()
        .svd()
        .map_err(|e| Error::Linalg(format!("SVD failed: {e:?}")))?;
    let s = svd.S().column_vector();
    let sigma: Vec<f64> = (0..s.nrows()).map(|i| s[i].re).collect();
    let smax = sigma.iter().copied().fold(0.0f64, f64::max);
    let threshold = NULL_SPACE_TOL * smax.max(1.0);
    let null: Vec<usize> = (0..sigma.len())
        .filter(|&i| sigma[i] <= threshold)
        .collect();
    let v = svd.V();
    let null_vec = |i: usize| -> Vec<C64> { (0..v.nrows()).map(|r| v[(r, i)]).collect() };
    let residual_of = |x: &[C64]| linalg::norm2(&linalg::matvec(gen.as_mat(), x));

    let eigenvalues = superop_spectrum(gen)?;
    let null_dim = null.len();
    let mut by_modulus: Vec<&C64> = eigenvalues.iter().collect();
    by_modulus.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let spectral_gap = by_modulus
        .iter()
        .skip(null_dim)
        .map(|z| -z.re)
        .fold(f64::INFINITY, f64::min);
    let spectral_gap = if spectral_gap.is_finite() {
        spectral_gap.max(0.0)
    } else {
        0.0
    };

    let (steady_state, residual) = match null.as_slice() {
        [] => {
            return Err(Error::Linalg(format!(
                "generator has no null space (smallest singular value {:e})",
                sigma.iter().copied().fold(f64::INFINITY, f64::min)
            )))
        }
        [i] => {
            let x = null_vec(*i);
            let rho = OperatorKet::from_vec(x)?.to_op();
            let tr = rho.trace();
            if tr.norm() < 1e-12 {
                return Err(Error::Linalg(
                    "null vector of the generator is traceless".into(),
                ));
            }
            let rho = rho.scale(tr.inv());
            let res = residual_of(rho.to_ket().as_slice());
            (SteadyState::Unique(rho), res)
        }
        many => {
            let mut res = 0.0f64;
            let basis = many
                .iter()
                .map(|&i| {
                    let x = null_vec(i);
                    res = res.max(residual_of(&x));
                    OperatorKet::from_vec(x).map(|k| k.to_op())
                })
                .collect::<Result<Vec<_>>>()?;
            (SteadyState::Degenerate(basis), res)
        }
    };
    debug_assert_eq!(d * d, gen.dim());
    Ok(NessResult {
        steady_state,
        null_dim,
        spectral_gap,
        near_degenerate: spectral_gap < NEAR_DEGENERATE_GAP,
        residual,
        eigenvalues,
    })
}

/// `tr(A rho_ness)`.
pub fn expectation(a: &HilbertOp, result: &NessResult) -> Result<C64> {
    trace_pair(a, result.state()?)
}
