//! Seeded random systems: members of L and X drawn through their free
//! coordinates, and fully random quadratic systems.
//!
//! Coefficients are small rationals `p/q` with `p ∈ [−5, 5]`, `q ∈ [1, 3]`.
//! Family samples whose eigenpair formulas degenerate, or whose two
//! eigenpairs are dependent, are rejected and redrawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::batch::{self, Execution};
use crate::eigenfunction::{Eigenpair, RationalEigenfunction};
use crate::eigensolver::{self, independent};
use crate::error::Result;
use crate::exact::rational::{ratio, ExactRational};
use crate::exact::QuadExt;
use crate::family::{self, Family, FreeParams};
use crate::ode::QuadraticODE;
use crate::poly::{h_residual, omega_expand, ResidualVector};

/// Upper bound on redraws for one family sample.
const MAX_REDRAWS: usize = 10_000;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> ExactRational {
    ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

fn free_params<R: Rng + ?Sized>(rng: &mut R) -> FreeParams {
    let mut r = || small_rational(rng);
    FreeParams { a1: r(), a2: r(), a4: r(), b1: r(), b2: r(), b4: r() }
}

/// Ten independent small rationals, no constants.
pub fn generic_ode<R: Rng + ?Sized>(rng: &mut R) -> QuadraticODE {
    let a = std::array::from_fn(|_| small_rational(rng));
    let b = std::array::from_fn(|_| small_rational(rng));
    QuadraticODE::new(a, b)
}

fn usable(pairs: Result<[Eigenpair<QuadExt>; 2]>) -> bool {
    pairs.is_ok_and(|[p1, p2]| independent(&p1, &p2))
}

/// A member of `family` with two independent eigenpairs.
pub fn family_ode<R: Rng + ?Sized>(rng: &mut R, family: Family) -> QuadraticODE {
    for _ in 0..MAX_REDRAWS {
        let p = free_params(rng);
        let candidate = match family {
            Family::L => Some(family::l_parameterization(&p)),
            Family::X => family::x_parameterization(&p).ok(),
        };
        let Some(ode) = candidate else { continue };
        let pairs = match family {
            Family::L => eigensolver::eigenpairs_l(&ode),
            Family::X => eigensolver::eigenpairs_x(&ode),
        };
        if usable(pairs) {
            return ode;
        }
    }
    unreachable!("nondegenerate members are dense among small rational parameters")
}

/// `count` systems from one seed; `None` draws fully random systems.
pub fn sample_odes(family: Option<Family>, seed: u64, count: usize) -> Vec<QuadraticODE> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| match family {
            Some(f) => family_ode(&mut rng, f),
            None => generic_ode(&mut rng),
        })
        .collect()
}

/// A random normal-form system, eigenfunction and eigenvalue with no
/// relation between them, for comparing residual formulas.
pub fn random_tuple<R: Rng + ?Sized>(rng: &mut R) -> (QuadraticODE, RationalEigenfunction<QuadExt>, QuadExt) {
    let ode = generic_ode(rng);
    let mut q = || QuadExt::rational(small_rational(rng));
    let ef = RationalEigenfunction::new([q(), q(), q()], [q(), q(), q()]);
    (ode, ef, q())
}

/// Exact verification of one family sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualCheck {
    pub family: Family,
    /// `h_residual` vanishes for each pair.
    pub h_zero: [bool; 2],
    /// `omega_expand` is the zero polynomial for each pair.
    pub omega_zero: [bool; 2],
    pub independent: bool,
}

impl ResidualCheck {
    pub fn passed(&self) -> bool {
        self.h_zero.iter().chain(&self.omega_zero).all(|&ok| ok) && self.independent
    }
}

pub fn check_sample(ode: &QuadraticODE, family: Family) -> Result<ResidualCheck> {
    let [p1, p2] = match family {
        Family::L => eigensolver::eigenpairs_l(ode)?,
        Family::X => eigensolver::eigenpairs_x(ode)?,
    };
    let h = |p: &Eigenpair<QuadExt>| h_residual(ode, &p.ef, &p.lambda).map(|r| r.is_zero());
    let omega = |p: &Eigenpair<QuadExt>| omega_expand(ode, &p.ef, &p.lambda).is_zero();
    Ok(ResidualCheck {
        family,
        h_zero: [h(&p1)?, h(&p2)?],
        omega_zero: [omega(&p1), omega(&p2)],
        independent: independent(&p1, &p2),
    })
}

/// [`check_sample`] over a batch.
pub fn check_samples(odes: &[QuadraticODE], family: Family, exec: Execution) -> Vec<Result<ResidualCheck>> {
    batch::map(odes, exec, |ode| check_sample(ode, family))
}

/// Whether `omega_expand` and `h_residual` agree coefficient by coefficient.
///
/// The ten residual equations are the coefficients of
/// `∇P·F·Q − P·∇Q·F − λPQ`, the negative of Ω as defined
/// (`λPQ − …`), so the comparison is `Ω = −h` entry by entry.
pub fn omega_matches_h(ode: &QuadraticODE, ef: &RationalEigenfunction<QuadExt>, lambda: &QuadExt) -> Result<bool> {
    let omega = ResidualVector::from_poly(&omega_expand(ode, ef, lambda));
    let h = h_residual(ode, ef, lambda)?;
    Ok(omega.entries().iter().zip(h.entries()).all(|(o, h)| o == &-h))
}
