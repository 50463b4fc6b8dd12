//! Unitary representations at finite dimension and the constructive
//! conjugacy toolkit: the sup metric, averaged intertwiners, the polar
//! retraction onto the unitary group, and recovery of a conjugating unitary
//! with a randomized retry when the averaged intertwiner degenerates.

use num_complex::Complex64;

use crate::config::{rng_for, stream, Config};
use crate::error::{Error, Result};
use crate::group::GroupRef;
use crate::matrix::{haar_unitary, hermitian_eigen, operator_norm, ComplexMatrix};

/// A unitary representation given by one matrix per group element.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    group: GroupRef,
    dim: usize,
    matrices: Vec<ComplexMatrix>,
}

impl UnitaryRep {
    pub fn new(group: GroupRef, matrices: Vec<ComplexMatrix>, config: &Config) -> Result<UnitaryRep> {
        if matrices.is_empty() || matrices.len() != group.order() {
            return Err(Error::InvalidMatrix(format!(
                "expected {} matrices, got {}",
                group.order(),
                matrices.len()
            )));
        }
        let dim = matrices[0].rows();
        for m in &matrices {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "matrices must all be {dim}×{dim}"
                )));
            }
        }
        let rep = UnitaryRep {
            group,
            dim,
            matrices,
        };
        rep.validate(config)?;
        Ok(rep)
    }

    fn validate(&self, config: &Config) -> Result<()> {
        let id = ComplexMatrix::identity(self.dim);
        if self.matrices[self.group.identity()].sub(&id).max_abs() > config.unitarity_tol {
            return Err(Error::InvalidMatrix("identity is not represented by I".into()));
        }
        for (g, m) in self.matrices.iter().enumerate() {
            let defect = m.adjoint().mul(m).sub(&id).max_abs();
            if defect > config.unitarity_tol {
                return Err(Error::InvalidMatrix(format!(
                    "matrix of element {g} is not unitary (defect {defect:.3e})"
                )));
            }
        }
        for a in self.group.elements() {
            for b in self.group.elements() {
                let prod = self.matrices[a].mul(&self.matrices[b]);
                let defect =
                    operator_norm(&prod.sub(&self.matrices[self.group.mul(a, b)]), config)?;
                if defect > config.unitarity_tol {
                    return Err(Error::InvalidMatrix(format!(
                        "multiplicativity fails at ({a}, {b}) with defect {defect:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// One-dimensional representation from unit complex values.
    pub fn one_dimensional(group: GroupRef, values: Vec<Complex64>, config: &Config) -> Result<UnitaryRep> {
        let matrices = values
            .into_iter()
            .map(|v| ComplexMatrix::new(1, 1, vec![v]))
            .collect::<Result<_>>()?;
        UnitaryRep::new(group, matrices, config)
    }

    pub fn trivial(group: GroupRef, dim: usize) -> UnitaryRep {
        let matrices = group.elements().map(|_| ComplexMatrix::identity(dim)).collect();
        UnitaryRep {
            group,
            dim,
            matrices,
        }
    }

    /// Left regular representation by permutation matrices.
    pub fn regular(group: GroupRef) -> UnitaryRep {
        let n = group.order();
        let matrices = group
            .elements()
            .map(|g| {
                ComplexMatrix::from_fn(n, n, |i, j| {
                    if i == group.mul(g, j) {
                        Complex64::ONE
                    } else {
                        Complex64::ZERO
                    }
                })
            })
            .collect();
        UnitaryRep {
            group,
            dim: n,
            matrices,
        }
    }

    pub fn direct_sum(&self, other: &UnitaryRep) -> Result<UnitaryRep> {
        if self.group.order() != other.group.order()
            || self.group.table_rows() != other.group.table_rows()
        {
            return Err(Error::Mismatch("direct sum across different groups".into()));
        }
        let dim = self.dim + other.dim;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                ComplexMatrix::from_fn(dim, dim, |i, j| {
                    if i < self.dim && j < self.dim {
                        a[(i, j)]
                    } else if i >= self.dim && j >= self.dim {
                        b[(i - self.dim, j - self.dim)]
                    } else {
                        Complex64::ZERO
                    }
                })
            })
            .collect();
        Ok(UnitaryRep {
            group: self.group.clone(),
            dim,
            matrices,
        })
    }

    /// The representation u·ρ(−)·u* for a unitary u.
    pub fn conjugated(&self, u: &ComplexMatrix) -> UnitaryRep {
        assert_eq!(u.rows(), self.dim);
        let ustar = u.adjoint();
        let matrices = self
            .matrices
            .iter()
            .map(|m| u.mul(m).mul(&ustar))
            .collect();
        UnitaryRep {
            group: self.group.clone(),
            dim: self.dim,
            matrices,
        }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &ComplexMatrix {
        &self.matrices[g]
    }

    pub fn character(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }
}

fn check_comparable(a: &UnitaryRep, b: &UnitaryRep) -> Result<()> {
    if a.group.order() != b.group.order() || a.group.table_rows() != b.group.table_rows() {
        return Err(Error::DimensionMismatch(
            "representations of different groups".into(),
        ));
    }
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "dimensions {} and {}",
            a.dim, b.dim
        )));
    }
    Ok(())
}

/// Characters agree pointwise within the snapping tolerance. For unitary
/// representations of a finite group this decides conjugacy.
pub fn characters_match(a: &UnitaryRep, b: &UnitaryRep, config: &Config) -> Result<bool> {
    check_comparable(a, b)?;
    Ok(a.character()
        .iter()
        .zip(b.character())
        .all(|(x, y)| (x - y).norm() <= config.snap_tol))
}

/// Largest operator-norm gap over the group:
/// max over h of ‖α(h) − β(h)‖.
pub fn sup_distance(a: &UnitaryRep, b: &UnitaryRep, config: &Config) -> Result<f64> {
    check_comparable(a, b)?;
    let mut sup: f64 = 0.0;
    for g in a.group.elements() {
        sup = sup.max(operator_norm(&a.matrix(g).sub(b.matrix(g)), config)?);
    }
    Ok(sup)
}

/// The averaged intertwiner T = (1/|H|) Σ_h β(h)·γ(h⁻¹). Satisfies
/// β(a)·T = T·γ(a) for every a, and T* is the intertwiner in the other
/// order.
pub fn intertwiner(beta: &UnitaryRep, gamma: &UnitaryRep, config: &Config) -> Result<ComplexMatrix> {
    check_comparable(beta, gamma)?;
    let group = &beta.group;
    let mut sum = ComplexMatrix::zeros(beta.dim, beta.dim);
    for h in group.elements() {
        sum = sum.add(&beta.matrix(h).mul(gamma.matrix(group.inv(h))));
    }
    let _ = config;
    Ok(sum.scale(Complex64::new(1.0 / group.order() as f64, 0.0)))
}

/// The unitary factor T·(T*T)^{−1/2} of an invertible matrix, via the
/// Hermitian eigendecomposition of T*T.
pub fn polar_retract(t: &ComplexMatrix, config: &Config) -> Result<ComplexMatrix> {
    if t.rows() != t.cols() {
        return Err(Error::InvalidMatrix("polar factor of a non-square matrix".into()));
    }
    let gram = t.adjoint().mul(t);
    let (vals, v) = hermitian_eigen(&gram, config)?;
    let sigma_min = vals.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    if sigma_min <= config.singular_cutoff {
        return Err(Error::Singular { sigma_min });
    }
    let n = t.rows();
    let inv_sqrt = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0 / vals[i].sqrt(), 0.0)
        } else {
            Complex64::ZERO
        }
    });
    Ok(t.mul(&v).mul(&inv_sqrt).mul(&v.adjoint()))
}

/// Recover a unitary σ with σ·α(−)·σ* = β. Representations with different
/// characters are rejected as `NotConjugate`. When the averaged intertwiner
/// degenerates, β is pre-conjugated by seeded random unitaries and the
/// recovered factor is corrected, up to `conjugator_retries` attempts.
pub fn conjugator(alpha: &UnitaryRep, beta: &UnitaryRep, config: &Config) -> Result<ComplexMatrix> {
    check_comparable(alpha, beta)?;
    if !characters_match(alpha, beta, config)? {
        return Err(Error::NotConjugate);
    }
    let t = intertwiner(beta, alpha, config)?;
    if sup_distance(alpha, beta, config)? < 1.0 / alpha.group.order() as f64 {
        // Averaging over nearby representations keeps the intertwiner in
        // the invertible ball around I.
        let gap = operator_norm(&ComplexMatrix::identity(alpha.dim).sub(&t), config)?;
        debug_assert!(gap < 1.0, "intertwiner escaped the invertible ball: {gap}");
    }
    let sigma = match polar_retract(&t, config) {
        Ok(sigma) => Some(sigma),
        Err(Error::Singular { .. }) => None,
        Err(e) => return Err(e),
    };
    let sigma = match sigma {
        Some(sigma) => sigma,
        None => {
            let mut rng = rng_for(config.seed, stream::CONJUGATOR);
            let mut recovered = None;
            for _ in 0..config.conjugator_retries {
                let u = haar_unitary(alpha.dim, &mut rng, config);
                let moved = beta.conjugated(&u.adjoint());
                let t = intertwiner(&moved, alpha, config)?;
                match polar_retract(&t, config) {
                    Ok(sigma) => {
                        recovered = Some(u.mul(&sigma));
                        break;
                    }
                    Err(Error::Singular { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            recovered.ok_or(Error::SingularIntertwiner {
                retries: config.conjugator_retries,
            })?
        }
    };
    let residual = sup_distance(&alpha.conjugated(&sigma), beta, config)?;
    if residual > config.conjugation_tol {
        return Err(Error::ConvergenceFailure(format!(
            "conjugation residual {residual:.3e}"
        )));
    }
    Ok(sigma)
}

/// Minimum sampled sup-distance from random unitary conjugates of α to β.
/// Inputs with matching characters are rejected: the lower bound 1/|H|
/// only applies across distinct conjugacy orbits.
pub fn orbit_separation_check(
    alpha: &UnitaryRep,
    beta: &UnitaryRep,
    samples: usize,
    config: &Config,
) -> Result<f64> {
    check_comparable(alpha, beta)?;
    if characters_match(alpha, beta, config)? {
        return Err(Error::Conjugate);
    }
    let mut rng = rng_for(config.seed, stream::SEPARATION);
    let mut min = f64::INFINITY;
    for _ in 0..samples {
        let u = haar_unitary(alpha.dim, &mut rng, config);
        min = min.min(sup_distance(&alpha.conjugated(&u), beta, config)?);
    }
    debug_assert!(min >= 1.0 / alpha.group.order() as f64 - 1e-9);
    Ok(min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use crate::matrix::unitarity_defect;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;
    use std::sync::Arc;

    fn cfg() -> Config {
        Config::default()
    }

    fn grp(spec: &str) -> GroupRef {
        Arc::new(make_group(spec, &cfg()).unwrap())
    }

    fn root(k: usize, n: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
    }

    /// Character k of the cyclic group C_n.
    fn cyclic_char(group: &GroupRef, k: usize) -> UnitaryRep {
        let n = group.order();
        let values = (0..n).map(|x| root((k * x) % n, n)).collect();
        UnitaryRep::one_dimensional(group.clone(), values, &cfg()).unwrap()
    }

    #[test]
    fn rejects_non_representations() {
        let c2 = grp("C2");
        // Non-unitary entry.
        let bad = vec![
            ComplexMatrix::identity(1),
            ComplexMatrix::new(1, 1, vec![Complex64::new(2.0, 0.0)]).unwrap(),
        ];
        assert!(UnitaryRep::new(c2.clone(), bad, &cfg()).is_err());
        // Unitary but not multiplicative: order-2 element sent to i.
        let bad = vec![
            ComplexMatrix::identity(1),
            ComplexMatrix::new(1, 1, vec![Complex64::new(0.0, 1.0)]).unwrap(),
        ];
        assert!(UnitaryRep::new(c2, bad, &cfg()).is_err());
    }

    #[test]
    fn sup_distance_examples() {
        let c2 = grp("C2");
        let triv = cyclic_char(&c2, 0);
        let sign = cyclic_char(&c2, 1);
        assert_eq!(sup_distance(&triv, &triv, &cfg()).unwrap(), 0.0);
        assert!((sup_distance(&triv, &sign, &cfg()).unwrap() - 2.0).abs() < 1e-12);
        let c3 = grp("C3");
        assert!(matches!(
            sup_distance(&triv, &cyclic_char(&c3, 0), &cfg()),
            Err(Error::DimensionMismatch(_))
        ));
        let two = triv.direct_sum(&sign).unwrap();
        assert!(matches!(
            sup_distance(&triv, &two, &cfg()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn sup_distance_of_conjugated_pair_is_commutator_norm() {
        let c4 = grp("C4");
        let rep = UnitaryRep::regular(c4.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let u = haar_unitary(4, &mut rng, &cfg());
        let conj = rep.conjugated(&u);
        let direct = sup_distance(&rep, &conj, &cfg()).unwrap();
        let mut commutator: f64 = 0.0;
        for g in c4.elements() {
            let lhs = u.mul(rep.matrix(g));
            let rhs = rep.matrix(g).mul(&u);
            commutator = commutator.max(operator_norm(&lhs.sub(&rhs), &cfg()).unwrap());
        }
        assert!((direct - commutator).abs() < 1e-10);
    }

    #[test]
    fn intertwiner_examples() {
        let c3 = grp("C3");
        let triv = cyclic_char(&c3, 0);
        let t = intertwiner(&triv, &triv, &cfg()).unwrap();
        assert!((t[(0, 0)] - Complex64::ONE).norm() < 1e-15);

        let reg = UnitaryRep::regular(c3.clone());
        let t = intertwiner(&reg, &reg, &cfg()).unwrap();
        assert!(t.sub(&ComplexMatrix::identity(3)).max_abs() < 1e-15);

        // Distinct characters average to zero.
        let chi1 = cyclic_char(&c3, 1);
        let chi2 = cyclic_char(&c3, 2);
        let t = intertwiner(&chi1, &chi2, &cfg()).unwrap();
        assert!(t.max_abs() < 1e-15);
    }

    #[test]
    fn intertwiner_relation_and_adjoint_symmetry() {
        let c4 = grp("C4");
        let alpha = UnitaryRep::regular(c4.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let beta = alpha.conjugated(&haar_unitary(4, &mut rng, &cfg()));
        let t = intertwiner(&beta, &alpha, &cfg()).unwrap();
        for g in c4.elements() {
            let lhs = beta.matrix(g).mul(&t);
            let rhs = t.mul(alpha.matrix(g));
            assert!(lhs.sub(&rhs).max_abs() < 1e-9);
        }
        let back = intertwiner(&alpha, &beta, &cfg()).unwrap();
        assert!(t.adjoint().sub(&back).max_abs() < 1e-12);
    }

    #[test]
    fn polar_retract_properties() {
        let cfg = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let u = haar_unitary(4, &mut rng, &cfg);
        assert!(polar_retract(&u, &cfg).unwrap().sub(&u).max_abs() < 1e-12);

        let two = ComplexMatrix::identity(3).scale(Complex64::new(2.0, 0.0));
        assert!(
            polar_retract(&two, &cfg)
                .unwrap()
                .sub(&ComplexMatrix::identity(3))
                .max_abs()
                < 1e-12
        );

        let t = ComplexMatrix::from_fn(4, 4, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let q = polar_retract(&t, &cfg).unwrap();
        assert!(unitarity_defect(&q) < 1e-9);
        // q*·t = (t*t)^{1/2} must be positive-definite Hermitian.
        let pos = q.adjoint().mul(&t);
        assert!(pos.sub(&pos.adjoint()).max_abs() < 1e-9);
        let (vals, _) = hermitian_eigen(&pos.add(&pos.adjoint()).scale(Complex64::new(0.5, 0.0)), &cfg)
            .unwrap();
        assert!(vals.iter().all(|&v| v > 0.0));

        // Equivariance under unitary multiplication on both sides.
        let v = haar_unitary(4, &mut rng, &cfg);
        let w = haar_unitary(4, &mut rng, &cfg);
        let lhs = polar_retract(&v.mul(&t).mul(&w), &cfg).unwrap();
        let rhs = v.mul(&q).mul(&w);
        assert!(lhs.sub(&rhs).max_abs() < 1e-9);

        assert!(matches!(
            polar_retract(&ComplexMatrix::zeros(2, 2), &cfg),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn conjugator_identity_and_near_identity() {
        let cfg = cfg();
        let c4 = grp("C4");
        let alpha = UnitaryRep::regular(c4.clone());
        let sigma = conjugator(&alpha, &alpha, &cfg).unwrap();
        assert!(sigma.sub(&ComplexMatrix::identity(4)).max_abs() < 1e-9);

        // u = exp of a small skew-Hermitian stays within 1/(2|H|) of I.
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let raw = ComplexMatrix::from_fn(4, 4, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let small = raw
            .sub(&raw.adjoint())
            .scale(Complex64::new(0.004, 0.0));
        let u = crate::matrix::matrix_exp(&small);
        let beta = alpha.conjugated(&u);
        assert!(sup_distance(&alpha, &beta, &cfg).unwrap() < 1.0 / 4.0);
        let sigma = conjugator(&alpha, &beta, &cfg).unwrap();
        assert!(sup_distance(&alpha.conjugated(&sigma), &beta, &cfg).unwrap() <= 1e-8);
    }

    #[test]
    fn conjugator_rejects_different_characters() {
        let c2 = grp("C2");
        let triv = cyclic_char(&c2, 0);
        let sign = cyclic_char(&c2, 1);
        assert!(matches!(
            conjugator(&triv, &sign, &cfg()),
            Err(Error::NotConjugate)
        ));
    }

    #[test]
    fn conjugator_recovers_far_conjugates() {
        let cfg = cfg();
        let c6 = grp("C6");
        let alpha = cyclic_char(&c6, 1)
            .direct_sum(&cyclic_char(&c6, 2))
            .unwrap()
            .direct_sum(&cyclic_char(&c6, 4))
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..10 {
            let u = haar_unitary(3, &mut rng, &cfg);
            let beta = alpha.conjugated(&u);
            let sigma = conjugator(&alpha, &beta, &cfg).unwrap();
            assert!(sup_distance(&alpha.conjugated(&sigma), &beta, &cfg).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn separation_examples() {
        let cfg = cfg();
        let c2 = grp("C2");
        let triv = cyclic_char(&c2, 0);
        let sign = cyclic_char(&c2, 1);
        let min = orbit_separation_check(&triv, &sign, 5, &cfg).unwrap();
        assert!((min - 2.0).abs() < 1e-12);

        let c3 = grp("C3");
        let min =
            orbit_separation_check(&cyclic_char(&c3, 1), &cyclic_char(&c3, 2), 25, &cfg).unwrap();
        assert!(min >= 1.0 / 3.0 - 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(1, &mut rng, &cfg);
        assert!(matches!(
            orbit_separation_check(&sign.conjugated(&u), &sign, 5, &cfg),
            Err(Error::Conjugate)
        ));
    }
}
