//! Degree-two group cohomology with root-of-unity coefficients, kept exact:
//! cocycles store exponents in ℤ/M rather than floating phases. On top of
//! the bar-complex arithmetic sit the Schur-multiplier quotient, extraction
//! of cocycles from projective lifts, and counting of twisted irreducibles
//! by spectrally splitting the twisted regular representation.
//!
//! Circle coefficients are handled through μ_N with N = |H|: every class of
//! H²(H, S¹) is killed by |H|, and the surjection H²(H, μ_N) → H²(H, S¹)
//! has kernel exactly the image of the connecting map from hom(H, μ_N)
//! induced by μ_N ⊂ μ_{N²} — which is the subgroup `schur_multiplier`
//! divides out.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::config::{rng_for, stream, Config};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, enumerate_homs, make_group, GroupRef, Subgroup};
use crate::matrix::{hermitian_eigen, ComplexMatrix};
use crate::snf::{lattice_contains, mat_mul, mat_vec, smith_normal_form_partial};

/// A normalized 2-cocycle with values in μ_M, stored as exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle2 {
    group: GroupRef,
    modulus: usize,
    values: Vec<usize>, // n×n row-major exponents
}

impl Cocycle2 {
    pub fn new(group: GroupRef, modulus: usize, values: Vec<usize>) -> Result<Cocycle2> {
        let n = group.order();
        if modulus == 0 {
            return Err(Error::Mismatch("modulus must be positive".into()));
        }
        if values.len() != n * n {
            return Err(Error::Mismatch(format!(
                "cocycle table needs {} entries, got {}",
                n * n,
                values.len()
            )));
        }
        if values.iter().any(|&v| v >= modulus) {
            return Err(Error::Mismatch("cocycle exponent out of range".into()));
        }
        let c = Cocycle2 {
            group,
            modulus,
            values,
        };
        let e = c.group.identity();
        for g in c.group.elements() {
            if c.value(e, g) != 0 || c.value(g, e) != 0 {
                return Err(Error::Mismatch(format!(
                    "cocycle is not normalized at element {g}"
                )));
            }
        }
        for g in c.group.elements() {
            for h in c.group.elements() {
                for k in c.group.elements() {
                    let lhs = c.value(g, h) + c.value(c.group.mul(g, h), k);
                    let rhs = c.value(h, k) + c.value(g, c.group.mul(h, k));
                    if lhs % modulus != rhs % modulus {
                        return Err(Error::Mismatch(format!(
                            "cocycle law fails at ({g}, {h}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn zero(group: GroupRef, modulus: usize) -> Cocycle2 {
        let n = group.order();
        Cocycle2 {
            group,
            modulus,
            values: vec![0; n * n],
        }
    }

    /// Build from sparse (g, h, exponent) entries; unlisted pairs are 0.
    pub fn from_sparse(
        group: GroupRef,
        modulus: usize,
        entries: &[(usize, usize, usize)],
    ) -> Result<Cocycle2> {
        let n = group.order();
        let mut values = vec![0; n * n];
        for &(g, h, e) in entries {
            if g >= n || h >= n {
                return Err(Error::Mismatch(format!(
                    "cocycle entry ({g}, {h}) out of range"
                )));
            }
            values[g * n + h] = e;
        }
        Cocycle2::new(group, modulus, values)
    }

    #[inline]
    pub fn value(&self, g: usize, h: usize) -> usize {
        self.values[g * self.group.order() + h]
    }

    pub fn phase(&self, g: usize, h: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.value(g, h) as f64 / self.modulus as f64)
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn add(&self, other: &Cocycle2) -> Result<Cocycle2> {
        check_same_setting(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a + b) % self.modulus)
            .collect();
        Ok(Cocycle2 {
            group: self.group.clone(),
            modulus: self.modulus,
            values,
        })
    }

    pub fn scaled(&self, k: usize) -> Cocycle2 {
        let values = self.values.iter().map(|v| (v * k) % self.modulus).collect();
        Cocycle2 {
            group: self.group.clone(),
            modulus: self.modulus,
            values,
        }
    }

    /// The restriction to a subgroup, over the same modulus, indexed by the
    /// subgroup's own element numbering.
    pub fn restricted_to(&self, sub: &Subgroup) -> Cocycle2 {
        let k = sub.order();
        let members = sub.members();
        let mut values = Vec::with_capacity(k * k);
        for &a in members {
            for &b in members {
                values.push(self.value(a, b));
            }
        }
        Cocycle2 {
            group: std::sync::Arc::new(sub.as_group()),
            modulus: self.modulus,
            values,
        }
    }
}

fn check_same_setting(a: &Cocycle2, b: &Cocycle2) -> Result<()> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch(format!(
            "{} versus {}",
            a.modulus, b.modulus
        )));
    }
    if a.group.order() != b.group.order() || a.group.table_rows() != b.group.table_rows() {
        return Err(Error::Mismatch("cocycles over different groups".into()));
    }
    Ok(())
}

/// δ of a normalized 1-cochain (full table, entry 0 at the identity):
/// (δe)(g,h) = e(g) + e(h) − e(gh).
pub fn coboundary_1(group: &GroupRef, modulus: usize, e: &[usize]) -> Result<Vec<usize>> {
    let n = group.order();
    if e.len() != n || e[group.identity()] % modulus != 0 {
        return Err(Error::Mismatch("1-cochain must vanish at the identity".into()));
    }
    let m = modulus;
    let mut out = Vec::with_capacity(n * n);
    for g in group.elements() {
        for h in group.elements() {
            let v = (e[g] % m + e[h] % m + m - e[group.mul(g, h)] % m) % m;
            out.push(v);
        }
    }
    Ok(out)
}

/// δ of a normalized 2-cochain (full n² table):
/// (δc)(g,h,k) = c(h,k) − c(gh,k) + c(g,hk) − c(g,h), flattened as
/// ((g·n)+h)·n+k.
pub fn coboundary_2(group: &GroupRef, modulus: usize, c: &[usize]) -> Result<Vec<usize>> {
    let n = group.order();
    if c.len() != n * n {
        return Err(Error::Mismatch("2-cochain table has wrong size".into()));
    }
    let m = modulus as i64;
    let at = |g: usize, h: usize| (c[g * n + h] % modulus) as i64;
    let mut out = Vec::with_capacity(n * n * n);
    for g in group.elements() {
        for h in group.elements() {
            for k in group.elements() {
                let v = at(h, k) - at(group.mul(g, h), k) + at(g, group.mul(h, k)) - at(g, h);
                out.push(v.rem_euclid(m) as usize);
            }
        }
    }
    Ok(out)
}

// --- bar-complex plumbing in normalized coordinates -------------------
//
// Cochains vanish when any argument is the identity (element 0), so the
// free coordinates are indexed by non-identity tuples.

fn norm2_len(n: usize) -> usize {
    (n - 1) * (n - 1)
}

fn norm2_index(n: usize, g: usize, h: usize) -> usize {
    (g - 1) * (n - 1) + (h - 1)
}

fn d1_matrix(group: &GroupRef) -> Vec<Vec<i64>> {
    let n = group.order();
    let mut rows = vec![vec![0i64; n - 1]; norm2_len(n)];
    for g in 1..n {
        for h in 1..n {
            let row = &mut rows[norm2_index(n, g, h)];
            row[g - 1] += 1;
            row[h - 1] += 1;
            let gh = group.mul(g, h);
            if gh != 0 {
                row[gh - 1] -= 1;
            }
        }
    }
    rows
}

fn d2_matrix(group: &GroupRef) -> Vec<Vec<i64>> {
    let n = group.order();
    let m2 = norm2_len(n);
    let mut rows = vec![vec![0i64; m2]; (n - 1) * m2];
    for g in 1..n {
        for h in 1..n {
            for k in 1..n {
                let row = &mut rows[(g - 1) * m2 + norm2_index(n, h, k)];
                row[norm2_index(n, h, k)] += 1;
                let gh = group.mul(g, h);
                if gh != 0 {
                    row[norm2_index(n, gh, k)] -= 1;
                }
                let hk = group.mul(h, k);
                if hk != 0 {
                    row[norm2_index(n, g, hk)] += 1;
                }
                row[norm2_index(n, g, h)] -= 1;
            }
        }
    }
    rows
}

fn to_normalized(c: &Cocycle2) -> Vec<i64> {
    let n = c.group.order();
    let mut out = Vec::with_capacity(norm2_len(n));
    for g in 1..n {
        for h in 1..n {
            out.push(c.value(g, h) as i64);
        }
    }
    out
}

fn from_normalized(group: &GroupRef, modulus: usize, coords: &[i64]) -> Cocycle2 {
    let n = group.order();
    let mut values = vec![0usize; n * n];
    for g in 1..n {
        for h in 1..n {
            values[g * n + h] =
                coords[norm2_index(n, g, h)].rem_euclid(modulus as i64) as usize;
        }
    }
    Cocycle2 {
        group: group.clone(),
        modulus,
        values,
    }
}

/// Integer carry cocycles of the connecting map hom(H, μ_N) → H²(H, μ_N):
/// a character f lifts to N²-th roots, and the failure of the lift to be
/// multiplicative is the carry (f(g) + f(h) − f(gh)) / N ∈ {0, 1}.
fn carry_cocycles(group: &GroupRef, modulus: usize, config: &Config) -> Result<Vec<Vec<i64>>> {
    let cyclic = std::sync::Arc::new(make_group(&format!("C{modulus}"), config)?);
    let n = group.order();
    let mut out = Vec::new();
    for f in enumerate_homs(&group.full_subgroup(), &cyclic, config)? {
        let mut coords = Vec::with_capacity(norm2_len(n));
        for g in 1..n {
            for h in 1..n {
                let s = f.apply(g) + f.apply(h);
                coords.push(((s - f.apply(group.mul(g, h))) / modulus) as i64);
            }
        }
        out.push(coords);
    }
    Ok(out)
}

/// Generators of the subgroup of cocycle coordinates that maps to zero:
/// coboundaries, the modulus lattice, and optionally the carry cocycles.
fn trivializing_columns(
    group: &GroupRef,
    modulus: usize,
    with_carries: bool,
    config: &Config,
) -> Result<Vec<Vec<i64>>> {
    let n = group.order();
    let m2 = norm2_len(n);
    let d1 = d1_matrix(group);
    let mut cols: Vec<Vec<i64>> = (0..n - 1)
        .map(|j| (0..m2).map(|i| d1[i][j]).collect())
        .collect();
    for i in 0..m2 {
        let mut col = vec![0i64; m2];
        col[i] = modulus as i64;
        cols.push(col);
    }
    if with_carries {
        cols.extend(carry_cocycles(group, modulus, config)?);
    }
    Ok(cols)
}

fn columns_to_matrix(cols: &[Vec<i64>], rows: usize) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect()
}

/// A finite abelian group of cocycle classes in invariant-factor form.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub invariant_factors: Vec<usize>,
    pub generators: Vec<Cocycle2>,
    group: GroupRef,
    modulus: usize,
}

impl CohomologyGroup {
    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.invariant_factors.iter().product()
    }

    /// Every class, as Σ k_i·gen_i over the invariant-factor box, starting
    /// with the zero class.
    pub fn all_classes(&self) -> Vec<Cocycle2> {
        let mut out = vec![Cocycle2::zero(self.group.clone(), self.modulus)];
        for (i, &f) in self.invariant_factors.iter().enumerate() {
            let prev = std::mem::take(&mut out);
            for c in prev {
                for k in 0..f {
                    out.push(c.add(&self.generators[i].scaled(k)).expect("same setting"));
                }
            }
        }
        out
    }
}

fn quotient_of_cocycles(
    group: &GroupRef,
    modulus: usize,
    with_carries: bool,
    config: &Config,
) -> Result<CohomologyGroup> {
    let n = group.order();
    if n > config.cohomology_order_cap {
        return Err(Error::OrderOverflow {
            what: "cohomology order".into(),
            limit: config.cohomology_order_cap,
            actual: n,
        });
    }
    if n == 1 {
        return Ok(CohomologyGroup {
            invariant_factors: Vec::new(),
            generators: Vec::new(),
            group: group.clone(),
            modulus,
        });
    }
    let m2 = norm2_len(n);
    let nn = modulus as i64;
    // Kernel lattice of δ² mod N: columns of V scaled by N/gcd(s_i, N).
    let snf_a = smith_normal_form_partial(&d2_matrix(group), false, true);
    let t: Vec<i64> = (0..m2)
        .map(|i| {
            let s = snf_a.diag.get(i).copied().unwrap_or(0);
            nn / gcd(s.abs(), nn)
        })
        .collect();
    // Trivializing subgroup expressed in the kernel lattice's coordinates.
    let cols = trivializing_columns(group, modulus, with_carries, config)?;
    let b = columns_to_matrix(&cols, m2);
    let vb = mat_mul(&snf_a.v_inv, &b);
    let mut c = vb;
    for (i, row) in c.iter_mut().enumerate() {
        for x in row.iter_mut() {
            debug_assert_eq!(*x % t[i], 0, "trivializing vector escapes the kernel");
            *x /= t[i];
        }
    }
    let snf_c = smith_normal_form_partial(&c, true, false);
    let mut invariant_factors = Vec::new();
    let mut generators = Vec::new();
    for i in 0..m2 {
        let d = snf_c.diag.get(i).copied().unwrap_or(0);
        debug_assert!(d > 0, "quotient must be finite");
        if d <= 1 {
            continue;
        }
        // Generator: the class of G_L·(U⁻¹ e_i), where G_L = V·diag(t).
        let y: Vec<i64> = (0..m2).map(|r| snf_c.u_inv[r][i]).collect();
        let mut coords = mat_vec(&snf_a.v, &(0..m2).map(|r| t[r] * y[r]).collect::<Vec<_>>());
        for x in &mut coords {
            *x = x.rem_euclid(nn);
        }
        invariant_factors.push(d as usize);
        generators.push(from_normalized(group, modulus, &coords));
    }
    Ok(CohomologyGroup {
        invariant_factors,
        generators,
        group: group.clone(),
        modulus,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}

/// H²(H, μ_N) with N = |H|.
pub fn h2_with_mu_n(group: &GroupRef, config: &Config) -> Result<CohomologyGroup> {
    quotient_of_cocycles(group, group.order().max(1), false, config)
}

/// H²(H, S¹) in invariant-factor form: H²(H, μ_N) modulo the image of the
/// connecting map from hom(H, μ_N).
pub fn schur_multiplier(group: &GroupRef, config: &Config) -> Result<CohomologyGroup> {
    quotient_of_cocycles(group, group.order().max(1), true, config)
}

/// Membership of a cocycle in the coboundary subgroup of H²(H, μ_M) (no
/// carry quotient): the exact triviality test inside h2_with_mu_n.
pub fn is_coboundary(c: &Cocycle2, config: &Config) -> Result<bool> {
    let cols = trivializing_columns(&c.group, c.modulus, false, config)?;
    let b = columns_to_matrix(&cols, norm2_len(c.group.order()));
    Ok(lattice_contains(&b, &to_normalized(c)))
}

/// Whether two cocycles present the same class of H²(H, S¹): their
/// difference must lie in coboundaries plus the connecting-map image.
pub fn same_class(c0: &Cocycle2, c1: &Cocycle2, config: &Config) -> Result<bool> {
    check_same_setting(c0, c1)?;
    let diff = c0.add(&c1.scaled(c0.modulus - 1))?;
    if c0.group.order() == 1 {
        return Ok(true);
    }
    let cols = trivializing_columns(&c0.group, c0.modulus, true, config)?;
    let b = columns_to_matrix(&cols, norm2_len(c0.group.order()));
    Ok(lattice_contains(&b, &to_normalized(&diff)))
}

/// Extract the μ_N-valued cocycle of a projective representation given by
/// unitary lifts, N = |H|. The lift of the identity is rescaled to I first,
/// which keeps the class and normalizes the cocycle.
pub fn cocycle_of_projective_rep(
    group: &GroupRef,
    lifts: &[ComplexMatrix],
    config: &Config,
) -> Result<Cocycle2> {
    let n = group.order();
    if lifts.len() != n {
        return Err(Error::InvalidMatrix(format!(
            "expected {n} lifts, got {}",
            lifts.len()
        )));
    }
    let d = lifts[0].rows();
    for (g, m) in lifts.iter().enumerate() {
        if m.rows() != d || m.cols() != d {
            return Err(Error::InvalidMatrix("lifts must share one square shape".into()));
        }
        let defect = m.adjoint().mul(m).sub(&ComplexMatrix::identity(d)).max_abs();
        if defect > config.unitarity_tol {
            return Err(Error::InvalidMatrix(format!(
                "lift of element {g} is not unitary (defect {defect:.3e})"
            )));
        }
    }
    let mut lifts = lifts.to_vec();
    let e = group.identity();
    let (lambda, residual) = nearest_scalar(&lifts[e]);
    if residual > config.projective_tol {
        return Err(Error::NotProjective {
            g: e,
            h: e,
            residual,
        });
    }
    lifts[e] = lifts[e].scale(lambda.conj() / lambda.norm_sqr());
    let modulus = n;
    let mut values = vec![0usize; n * n];
    for g in group.elements() {
        for h in group.elements() {
            let p = lifts[g].mul(&lifts[h]).mul(&lifts[group.mul(g, h)].adjoint());
            let (lambda, residual) = nearest_scalar(&p);
            if residual > config.projective_tol {
                return Err(Error::NotProjective { g, h, residual });
            }
            let angle = lambda.arg().rem_euclid(TAU);
            let steps = angle * modulus as f64 / TAU;
            let k = steps.round() as i64;
            let offset = (steps - k as f64).abs() * TAU / modulus as f64;
            if offset > config.phase_tol {
                return Err(Error::PhaseOffLattice { g, h });
            }
            values[g * n + h] = k.rem_euclid(modulus as i64) as usize;
        }
    }
    Cocycle2::new(group.clone(), modulus, values)
}

/// Closest scalar multiple of the identity: λ = tr(P)/d, with the residual
/// in the largest-entry norm.
fn nearest_scalar(p: &ComplexMatrix) -> (Complex64, f64) {
    let d = p.rows();
    let lambda = p.trace() / d as f64;
    let residual = p
        .sub(&ComplexMatrix::identity(d).scale(lambda))
        .max_abs();
    (lambda, residual)
}

/// Conjugacy classes of ω-regular elements: g with ω(g, h) = ω(h, g) for
/// every h in the centralizer of g. Regularity is constant on classes,
/// which the scan asserts.
pub fn omega_regular_classes(omega: &Cocycle2) -> Vec<Vec<usize>> {
    let group = &omega.group;
    let regular = |g: usize| -> bool {
        group
            .elements()
            .filter(|&h| group.mul(g, h) == group.mul(h, g))
            .all(|h| omega.value(g, h) == omega.value(h, g))
    };
    let mut out = Vec::new();
    for class in conjugacy_classes(group) {
        let flags: Vec<bool> = class.iter().map(|&g| regular(g)).collect();
        assert!(
            flags.iter().all(|&f| f == flags[0]),
            "regularity must be constant on a conjugacy class"
        );
        if flags[0] {
            out.push(class);
        }
    }
    out
}

/// The ω-twisted regular representation: ρ(g)·e_h = ω(g, h)·e_{gh}.
pub fn twisted_regular_rep(omega: &Cocycle2) -> Vec<ComplexMatrix> {
    let group = &omega.group;
    let n = group.order();
    group
        .elements()
        .map(|g| {
            let mut m = ComplexMatrix::zeros(n, n);
            for h in group.elements() {
                m[(group.mul(g, h), h)] = omega.phase(g, h);
            }
            m
        })
        .collect()
}

/// A cluster decomposition of the twisted regular representation: one entry
/// per irreducible summand, carrying its dimension and its character per
/// group element.
fn twisted_cluster_characters(
    omega: &Cocycle2,
    config: &Config,
) -> Result<Vec<(usize, Vec<Complex64>)>> {
    let group = &omega.group;
    let n = group.order();
    if n > config.twisted_order_cap {
        return Err(Error::OrderOverflow {
            what: "twisted decomposition order".into(),
            limit: config.twisted_order_cap,
            actual: n,
        });
    }
    let rho = twisted_regular_rep(omega);
    let regular_count = omega_regular_classes(omega).len();
    let mut rng = rng_for(config.seed, stream::TWISTED_SPLIT);
    'attempt: for _ in 0..=config.split_retries {
        let raw = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let x = raw.add(&raw.adjoint()).scale(Complex64::new(0.5, 0.0));
        // Average into the commutant: conjugation by ρ is an honest action
        // even though ρ itself is only projective.
        let mut y = ComplexMatrix::zeros(n, n);
        for h in group.elements() {
            y = y.add(&rho[h].mul(&x).mul(&rho[h].adjoint()));
        }
        y = y.scale(Complex64::new(1.0 / n as f64, 0.0));
        let (vals, vecs) = hermitian_eigen(&y, config)?;
        let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut clusters: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || vals[i] - vals[i - 1] > 1e-7 * scale {
                clusters.push((start, i));
                start = i;
            }
        }
        // Each irreducible of dimension d shows up as d clusters of size d;
        // a mismatched census means eigenvalues collided, so resample.
        let mut per_size: std::collections::BTreeMap<usize, usize> = Default::default();
        for &(lo, hi) in &clusters {
            *per_size.entry(hi - lo).or_default() += 1;
        }
        let mut dims = Vec::new();
        for (&d, &count) in &per_size {
            if count % d != 0 {
                continue 'attempt;
            }
            dims.extend(std::iter::repeat(d).take(count / d));
        }
        if dims.iter().map(|d| d * d).sum::<usize>() != n || dims.len() != regular_count {
            continue 'attempt;
        }
        // Characters per cluster: the trace of ρ restricted to the
        // eigenspace. Clusters of one irreducible carry equal characters;
        // returning all of them (duplicates included) is fine for the
        // consumers, but we keep a single representative per eigenvalue
        // level grouped by matching character below.
        let mut reps: Vec<(usize, Vec<Complex64>)> = Vec::new();
        for &(lo, hi) in &clusters {
            let mut chi = Vec::with_capacity(n);
            for g in group.elements() {
                let mut tr = Complex64::ZERO;
                for c in lo..hi {
                    for a in 0..n {
                        let mut dot = Complex64::ZERO;
                        for b in 0..n {
                            dot += rho[g][(a, b)] * vecs[(b, c)];
                        }
                        tr += vecs[(a, c)].conj() * dot;
                    }
                }
                chi.push(tr);
            }
            reps.push((hi - lo, chi));
        }
        // Deduplicate by character up to snapping: the twisted regular rep
        // contains each irreducible d times, and we want it once.
        let mut unique: Vec<(usize, Vec<Complex64>)> = Vec::new();
        for (d, chi) in reps {
            let seen = unique.iter().any(|(ud, uchi)| {
                *ud == d
                    && uchi
                        .iter()
                        .zip(&chi)
                        .all(|(a, b)| (a - b).norm() <= config.snap_tol)
            });
            if !seen {
                unique.push((d, chi));
            }
        }
        if unique.len() != regular_count {
            continue 'attempt;
        }
        unique.sort_by(|a, b| a.0.cmp(&b.0));
        return Ok(unique);
    }
    Err(Error::ConvergenceFailure(
        "twisted regular representation failed to split cleanly".into(),
    ))
}

/// Dimensions of the irreducible ω-projective representations, ascending.
pub fn twisted_irrep_dims(omega: &Cocycle2, config: &Config) -> Result<Vec<usize>> {
    Ok(twisted_cluster_characters(omega, config)?
        .into_iter()
        .map(|(d, _)| d)
        .collect())
}

/// Multiplicity of a twisted irreducible, allowing the stable value ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(usize),
    Infinite,
}

/// A multiplicity vector over the irreducible ω-twisted representations.
#[derive(Clone, Debug)]
pub struct TwistedRepType {
    pub mults: Vec<Multiplicity>,
}

impl TwistedRepType {
    /// The all-∞ type over the ω-irreducibles.
    pub fn stable(omega: &Cocycle2, config: &Config) -> Result<TwistedRepType> {
        let count = twisted_irrep_dims(omega, config)?.len();
        Ok(TwistedRepType {
            mults: vec![Multiplicity::Infinite; count],
        })
    }
}

pub fn is_stable(t: &TwistedRepType) -> bool {
    t.mults.iter().all(|m| matches!(m, Multiplicity::Infinite))
}

/// Check that every irreducible ω|_K-twisted representation of the
/// subgroup occurs in the restriction of some irreducible ω-twisted
/// representation of the whole group. Characters with a shared cocycle
/// pair orthonormally, so occurrence is a rounded inner product.
pub fn verify_stable_restriction(
    omega: &Cocycle2,
    sub: &Subgroup,
    config: &Config,
) -> Result<bool> {
    let big = twisted_cluster_characters(omega, config)?;
    let restricted = omega.restricted_to(sub);
    let small = twisted_cluster_characters(&restricted, config)?;
    let members = sub.members();
    let k = members.len() as f64;
    for (_, tau) in &small {
        let mut found = false;
        for (_, chi) in &big {
            let mut pairing = Complex64::ZERO;
            for (pos, &m) in members.iter().enumerate() {
                pairing += chi[m] * tau[pos].conj();
            }
            pairing /= k;
            let rounded = pairing.re.round();
            if (pairing - Complex64::new(rounded, 0.0)).norm() > config.snap_tol || rounded < 0.0 {
                return Err(Error::ConvergenceFailure(format!(
                    "restriction multiplicity {pairing} does not snap to an integer"
                )));
            }
            if rounded >= 1.0 {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}
