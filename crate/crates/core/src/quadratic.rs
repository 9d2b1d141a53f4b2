//! The Lindblad generator of a quadratic model written as a normal-ordered
//! quadratic form in the canonical adjoint maps.
//!
//! Every left/right multiplication by a mode operator is a linear
//! combination of adjoint maps (inverting their definitions), e.g. for
//! bosons `(a^dag)^L = a'_0 + a_1` and `a^R = a'_1 + a_0`. The generator is a
//! sum of products of two such multiplications, hence quadratic in the
//! maps. Moving unprimed maps to the right with the almost-canonical
//! relations gives
//!
//! ```text
//! L = sum X_ab X'_a X_b + sum Y_ab X'_a X'_b + sum Z_ab X_a X_b + c
//! ```
//!
//! and for Lindblad generators `Z = 0`, `c = 0`: every term starts with a
//! primed map, which is why `<<1| L = 0`.
//!
//! Fermionic right multiplications carry a factor of the parity `P^`, so
//! the fermionic generator is `Q_0 + Q_1 P^`. It is stored per parity
//! sector: `Q_0 + Q_1` on even operators (where density matrices live) and
//! `Q_0 - Q_1` on odd ones.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{ModeSystem, Statistics};
use crate::linalg::ZERO;
use crate::lindblad::{assemble_liouvillean, QuadraticLindbladModel};
use crate::supermaps::{canonical_maps, MapFamily, SuperOp};

/// Max-norm tolerance for the reconstruction check in [`third_quantize`].
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Lowering,
    Raising,
}

#[derive(Debug, Clone, Copy)]
struct Term {
    kind: Kind,
    slot: usize,
    coef: C64,
    /// Trailing factor of `P^`.
    parity: bool,
}

#[derive(Debug, Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// Multiplication by `a_j` (or `a_j^dag`) from one side, in terms of the
/// adjoint maps. `j` is 0-based here.
fn elementary(sys: &ModeSystem, j: usize, dagger: bool, side: Side) -> Vec<Term> {
    let n = sys.n_modes();
    let (s0, s1) = (j, n + j);
    let t = |kind, slot, coef: f64, parity| Term {
        kind,
        slot,
        coef: C64::new(coef, 0.0),
        parity,
    };
    use Kind::*;
    match (sys.statistics(), dagger, side) {
        (_, false, Side::Left) => vec![t(Lowering, s0, 1.0, false)],
        (Statistics::Bosonic, true, Side::Left) => {
            vec![t(Raising, s0, 1.0, false), t(Lowering, s1, 1.0, false)]
        }
        (Statistics::Bosonic, true, Side::Right) => vec![t(Lowering, s1, 1.0, false)],
        (Statistics::Bosonic, false, Side::Right) => {
            vec![t(Raising, s1, 1.0, false), t(Lowering, s0, 1.0, false)]
        }
        // c'_0 = (c^dag)^L + c_1
        (Statistics::Fermionic, true, Side::Left) => {
            vec![t(Raising, s0, 1.0, false), t(Lowering, s1, -1.0, false)]
        }
        // (c^dag)^R = c_1 P^
        (Statistics::Fermionic, true, Side::Right) => vec![t(Lowering, s1, 1.0, true)],
        // c'_1 = -c^R P^ - c^L, so c^R = -(c'_1 + c_0) P^
        (Statistics::Fermionic, false, Side::Right) => {
            vec![t(Raising, s1, -1.0, true), t(Lowering, s0, -1.0, true)]
        }
    }
}

/// `sum_j x_j a_j + y_j a_j^dag` from one side.
fn linear(sys: &ModeSystem, x: &[C64], y: &[C64], side: Side) -> Vec<Term> {
    let mut out = Vec::new();
    for j in 0..sys.n_modes() {
        for (coef, dagger) in [(x[j], false), (y[j], true)] {
            if coef == ZERO {
                continue;
            }
            out.extend(elementary(sys, j, dagger, side).into_iter().map(|mut t| {
                t.coef *= coef;
                t
            }));
        }
    }
    out
}

/// Coefficients of one normal-ordered quadratic form, indexed by canonical
/// slot (`nu * n + j - 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticForm {
    /// `X'_a X_b`.
    pub mixed: Vec<Vec<C64>>,
    /// `X'_a X'_b`, symmetric (bosons) or antisymmetric (fermions).
    pub raising: Vec<Vec<C64>>,
    /// `X_a X_b`, same symmetry as `raising`.
    pub lowering: Vec<Vec<C64>>,
    pub constant: C64,
}

impl QuadraticForm {
    fn zeros(slots: usize) -> Self {
        Self {
            mixed: vec![vec![ZERO; slots]; slots],
            raising: vec![vec![ZERO; slots]; slots],
            lowering: vec![vec![ZERO; slots]; slots],
            constant: ZERO,
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let f = |a: &Vec<Vec<C64>>, b: &Vec<Vec<C64>>| -> Vec<Vec<C64>> {
            a.iter()
                .zip(b)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y * sign).collect())
                .collect()
        };
        Self {
            mixed: f(&self.mixed, &other.mixed),
            raising: f(&self.raising, &other.raising),
            lowering: f(&self.lowering, &other.lowering),
            constant: self.constant + other.constant * sign,
        }
    }

    /// Largest coefficient that is not of the form `X' (...)`: the
    /// lowering-lowering block and the constant.
    pub fn non_normal_weight(&self) -> f64 {
        self.lowering
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(self.constant.norm(), f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.mixed
            .iter()
            .chain(&self.raising)
            .chain(&self.lowering)
            .flatten()
            .map(|z| z.norm())
            .fold(self.constant.norm(), f64::max)
    }

    /// The superoperator `sum X X' X + ...` built from `fam`.
    pub fn to_superop(&self, fam: &MapFamily) -> SuperOp {
        let d = fam.system().dim();
        let (low, high) = (fam.lowering_slots(), fam.raising_slots());
        let mut out = SuperOp::zeros(d);
        let slots = fam.n_slots();
        for a in 0..slots {
            for b in 0..slots {
                for (coef, left, right) in [
                    (self.mixed[a][b], &high[a], &low[b]),
                    (self.raising[a][b], &high[a], &high[b]),
                    (self.lowering[a][b], &low[a], &low[b]),
                ] {
                    if coef != ZERO {
                        out.add_scaled(coef, &(left * right));
                    }
                }
            }
        }
        if self.constant != ZERO {
            out.add_scaled(self.constant, &SuperOp::identity(d));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// Bosons: the form acts on every operator.
    All,
    /// Fermions, parity-even operators (`P^ = +1`).
    Even,
    /// Fermions, parity-odd operators (`P^ = -1`).
    Odd,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorForm {
    pub sector: Sector,
    pub form: QuadraticForm,
}

/// The generator as quadratic forms in the adjoint maps.
#[derive(Debug, Clone, Serialize)]
pub struct QuadraticTable {
    pub statistics: Statistics,
    pub n_modes: usize,
    pub sectors: Vec<SectorForm>,
    /// Max-norm distance between the rebuilt and the assembled generator.
    pub reconstruction_residual: f64,
}

impl QuadraticTable {
    pub fn form(&self, sector: Sector) -> Option<&QuadraticForm> {
        self.sectors
            .iter()
            .find(|s| s.sector == sector)
            .map(|s| &s.form)
    }

    /// The form acting on density matrices: `All` for bosons, `Even` for
    /// fermions.
    pub fn physical(&self) -> &QuadraticForm {
        match self.statistics {
            Statistics::Bosonic => self.form(Sector::All),
            Statistics::Fermionic => self.form(Sector::Even),
        }
        .expect("sector present")
    }

    pub fn is_zero(&self) -> bool {
        self.sectors.iter().all(|s| s.form.max_abs() == 0.0)
    }

    /// Rebuilds the generator from the coefficient table.
    pub fn reconstruct(&self, fam: &MapFamily) -> SuperOp {
        match fam.parity() {
            None => self.physical().to_superop(fam),
            Some(p) => {
                let d = fam.system().dim();
                let id = SuperOp::identity(d);
                let half = C64::new(0.5, 0.0);
                let even_proj = (&id + p).scale(half);
                let odd_proj = (&id - p).scale(half);
                let even = self
                    .form(Sector::Even)
                    .expect("even sector")
                    .to_superop(fam);
                let odd = self.form(Sector::Odd).expect("odd sector").to_superop(fam);
                &(&even * &even_proj) + &(&odd * &odd_proj)
            }
        }
    }
}

struct Accumulator {
    stats: Statistics,
    /// Indexed by the trailing power of `P^` (0 or 1).
    forms: [QuadraticForm; 2],
}

impl Accumulator {
    fn new(stats: Statistics, slots: usize) -> Self {
        Self {
            stats,
            forms: [QuadraticForm::zeros(slots), QuadraticForm::zeros(slots)],
        }
    }

    /// Adds `scale * x y` where `x`, `y` are linear in the maps.
    fn add_product(&mut self, scale: C64, xs: &[Term], ys: &[Term]) {
        let fermionic = self.stats == Statistics::Fermionic;
        let eps = self.stats.exchange_sign();
        for x in xs {
            for y in ys {
                // x P^p1 y P^p2 = (-1)^p1 x y P^(p1 + p2): P^ anticommutes
                // with every fermionic adjoint map.
                let sign = if fermionic && x.parity { -1.0 } else { 1.0 };
                let coef = scale * x.coef * y.coef * sign;
                let form = &mut self.forms[usize::from(x.parity ^ y.parity)];
                match (x.kind, y.kind) {
                    (Kind::Raising, Kind::Lowering) => form.mixed[x.slot][y.slot] += coef,
                    (Kind::Raising, Kind::Raising) => form.raising[x.slot][y.slot] += coef,
                    (Kind::Lowering, Kind::Lowering) => form.lowering[x.slot][y.slot] += coef,
                    (Kind::Lowering, Kind::Raising) => {
                        // X_a X'_b = eps X'_b X_a + delta_ab
                        form.mixed[y.slot][x.slot] += coef * eps;
                        if x.slot == y.slot {
                            form.constant += coef;
                        }
                    }
                }
            }
        }
    }

    fn finish(mut self) -> [QuadraticForm; 2] {
        let eps = self.stats.exchange_sign();
        for form in &mut self.forms {
            for m in [&mut form.raising, &mut form.lowering] {
                let n = m.len();
                for a in 0..n {
                    for b in a..n {
                        let sym = (m[a][b] + m[b][a] * eps) * 0.5;
                        m[a][b] = sym;
                        m[b][a] = sym * eps;
                    }
                }
            }
        }
        self.forms
    }
}

/// Coefficient table derived symbolically from the model, without the
/// reconstruction check (`reconstruction_residual` is NaN).
pub fn derive_table(model: &QuadraticLindbladModel) -> QuadraticTable {
    let sys = *model.system();
    let n = sys.n_modes();
    let stats = sys.statistics();
    let mut acc = Accumulator::new(stats, 2 * n);
    let i = C64::new(0.0, 1.0);
    let unit = |j: usize| {
        let mut e = vec![ZERO; n];
        e[j] = C64::new(1.0, 0.0);
        e
    };
    let zero = vec![ZERO; n];
    let op = |j: usize, dagger: bool, side: Side| -> Vec<Term> {
        if dagger {
            linear(&sys, &zero, &unit(j), side)
        } else {
            linear(&sys, &unit(j), &zero, side)
        }
    };

    // -i (H^L - H^R), with (xy)^L = x^L y^L and (xy)^R = y^R x^R.
    for j in 0..n {
        for k in 0..n {
            let h = model.hopping()[j][k];
            if h != ZERO {
                acc.add_product(-i * h, &op(j, true, Side::Left), &op(k, false, Side::Left));
                acc.add_product(i * h, &op(k, false, Side::Right), &op(j, true, Side::Right));
            }
            let p = model.pairing()[j][k];
            if p != ZERO {
                acc.add_product(-i * p, &op(j, true, Side::Left), &op(k, true, Side::Left));
                acc.add_product(i * p, &op(k, true, Side::Right), &op(j, true, Side::Right));
                let pc = p.conj();
                acc.add_product(
                    -i * pc,
                    &op(k, false, Side::Left),
                    &op(j, false, Side::Left),
                );
                acc.add_product(
                    i * pc,
                    &op(j, false, Side::Right),
                    &op(k, false, Side::Right),
                );
            }
        }
    }

    // 2 L^L (L^dag)^R - (L^dag)^L L^L - L^R (L^dag)^R
    for l in model.lindblad_ops() {
        let uc: Vec<C64> = l.u.iter().map(|z| z.conj()).collect();
        let vc: Vec<C64> = l.v.iter().map(|z| z.conj()).collect();
        let l_left = linear(&sys, &l.u, &l.v, Side::Left);
        let l_right = linear(&sys, &l.u, &l.v, Side::Right);
        let ld_left = linear(&sys, &vc, &uc, Side::Left);
        let ld_right = linear(&sys, &vc, &uc, Side::Right);
        acc.add_product(C64::new(2.0, 0.0), &l_left, &ld_right);
        acc.add_product(C64::new(-1.0, 0.0), &ld_left, &l_left);
        acc.add_product(C64::new(-1.0, 0.0), &l_right, &ld_right);
    }

    let [plain, with_parity] = acc.finish();
    let sectors = match stats {
        Statistics::Bosonic => vec![SectorForm {
            sector: Sector::All,
            form: plain,
        }],
        Statistics::Fermionic => vec![
            SectorForm {
                sector: Sector::Even,
                form: plain.combine(&with_parity, 1.0),
            },
            SectorForm {
                sector: Sector::Odd,
                form: plain.combine(&with_parity, -1.0),
            },
        ],
    };
    QuadraticTable {
        statistics: stats,
        n_modes: n,
        sectors,
        reconstruction_residual: f64::NAN,
    }
}

/// Coefficient table of the model's generator, validated by rebuilding the
/// superoperator from it and comparing against [`assemble_liouvillean`].
pub fn third_quantize(model: &QuadraticLindbladModel) -> Result<QuadraticTable> {
    let sys = model.system();
    let fam = canonical_maps(sys)?;
    let mut table = derive_table(model);
    let rebuilt = table.reconstruct(&fam);
    let direct = assemble_liouvillean(model);
    let residual = rebuilt.max_abs_diff(&direct);
    if residual.is_nan() || residual > RECONSTRUCTION_TOL {
        return Err(Error::NonQuadratic { residual });
    }
    table.reconstruction_residual = residual;
    Ok(table)
}
