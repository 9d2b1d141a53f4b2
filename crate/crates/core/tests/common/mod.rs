//! Shared fixtures for the integration tests: seeded random quadratic
//! models and a generator built entry by entry from matrix algebra.

#![allow(dead_code, clippy::needless_range_loop)]

use liouville_fock::lindblad::{LindbladOp, QuadraticLindbladModel};
use liouville_fock::{HilbertOp, ModeSystem, Statistics, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cplx(rng: &mut impl Rng, scale: f64) -> C64 {
    C64::new(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

pub fn random_op(rng: &mut impl Rng, dim: usize) -> HilbertOp {
    HilbertOp::from_fn(dim, |_, _| cplx(rng, 1.0))
}

/// Random density matrix `B B^dag / tr(B B^dag)`.
pub fn random_state(rng: &mut impl Rng, dim: usize) -> HilbertOp {
    let b = random_op(rng, dim);
    let rho = &b * &b.adjoint();
    let tr = rho.trace();
    rho.scale(tr.inv())
}

/// Random model with loss on every mode, so the steady state is unique.
pub fn random_model(rng: &mut impl Rng, sys: ModeSystem) -> QuadraticLindbladModel {
    let n = sys.n_modes();
    let mut hop = vec![vec![C64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        hop[j][j] = C64::new(rng.random_range(-1.0..1.0), 0.0);
        for k in j + 1..n {
            let z = cplx(rng, 0.5);
            hop[j][k] = z;
            hop[k][j] = z.conj();
        }
    }
    let sign = sys.statistics().exchange_sign();
    let mut pair = vec![vec![C64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for k in j..n {
            if sign < 0.0 && j == k {
                continue;
            }
            let z = cplx(rng, 0.2);
            pair[j][k] = z;
            pair[k][j] = z * sign;
        }
    }
    let mut ops: Vec<LindbladOp> = (1..=n)
        .map(|j| LindbladOp::loss(n, j, rng.random_range(0.3..1.0)))
        .collect();
    let gain_scale = match sys.statistics() {
        Statistics::Fermionic => 0.6,
        Statistics::Bosonic => 0.2,
    };
    ops.push(LindbladOp::new(
        (0..n).map(|_| cplx(rng, 0.3)).collect(),
        (0..n).map(|_| cplx(rng, gain_scale)).collect(),
    ));
    QuadraticLindbladModel::new(sys, hop, Some(pair), ops).expect("valid random model")
}

/// The grid of systems used for randomized checks.
pub fn model_grid(stats: Statistics) -> Vec<ModeSystem> {
    match stats {
        Statistics::Fermionic => [1, 2, 3, 2]
            .into_iter()
            .map(|n| ModeSystem::fermionic(n).unwrap())
            .collect(),
        Statistics::Bosonic => [(1, 4), (1, 5), (2, 3), (1, 3)]
            .into_iter()
            .map(|(n, c)| ModeSystem::bosonic(n, c).unwrap())
            .collect(),
    }
}

/// `L(rho)` evaluated with plain matrix products.
pub fn apply_generator(model: &QuadraticLindbladModel, rho: &HilbertOp) -> HilbertOp {
    let i = C64::new(0.0, 1.0);
    let h = model.hamiltonian();
    let mut out = (&(&h * rho) - &(rho * &h)).scale(-i);
    for l in model.jump_operators() {
        let ld = l.adjoint();
        let ldl = &ld * &l;
        let jump = (&(&l * rho) * &ld).scale(C64::new(2.0, 0.0));
        out = &(&out + &jump) - &(&(&ldl * rho) + &(rho * &ldl));
    }
    out
}

/// Generator matrix in row-major vectorization, one column per matrix unit.
pub fn generator_by_columns(model: &QuadraticLindbladModel) -> Vec<Vec<C64>> {
    let d = model.system().dim();
    let mut cols = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            let unit = HilbertOp::from_fn(d, |a, b| {
                if (a, b) == (r, c) {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let img = apply_generator(model, &unit);
            cols.push(
                (0..d)
                    .flat_map(|a| (0..d).map(move |b| (a, b)))
                    .map(|(a, b)| img.get(a, b))
                    .collect(),
            );
        }
    }
    cols
}
