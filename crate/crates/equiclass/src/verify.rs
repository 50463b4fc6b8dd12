//! The acceptance sweeps behind `equiclass verify`: fifteen independent
//! checks, each exercising one published guarantee of the library end to
//! end (closure of families, exhaustive classification against a census,
//! numerical conjugator recovery, cohomology values, report shapes,
//! reproducibility). Every randomized sweep draws from a stream derived
//! from `Config::seed`, so a fixed seed gives a byte-stable run.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::bundle::{
    bundle_p_sigma, census_over_orbit, check_transformation_rules, classify_over_orbit,
    is_isomorphic, pointwise_conjugate, roundtrip_bundle_isomorphic, roundtrip_set_isomorphic,
    seeded_bundle, seeded_graph_set, GammaSet,
};
use crate::catalog::{closure_sweep_set, groups_leq_12, groups_leq_8};
use crate::character::{character_table, enumerate_rep_types};
use crate::cohomology::{
    cocycle_of_projective_rep, h2_with_mu_n, is_stable, omega_regular_classes, same_class,
    schur_multiplier, twisted_irrep_dims, verify_stable_restriction, Cocycle2, Multiplicity,
    TwistedRepType,
};
use crate::config::{rng_for, stream, Config};
use crate::error::{Error, Result};
use crate::family::{close_family, intersect_pairs, LocalRepPair};
use crate::group::{
    conjugate_hom, enumerate_homs, graph_subgroup, hom_orbits, make_group, subgroups, GroupHom,
    GroupRef, ProductGroup, Subgroup,
};
use crate::jsonout::Json;
use crate::matrix::{
    gram_schmidt_unitary, haar_unitary, matrix_exp, operator_norm, ComplexMatrix,
};
use crate::report::{report_pu_stable, report_un, Atom, GroupSignature};
use crate::reps::{conjugator, intertwiner, orbit_separation_check, sup_distance, UnitaryRep};

/// Outcome of one acceptance check.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    /// 1-based index, stable across releases.
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    /// A short deterministic summary on success, the failure on error.
    pub detail: String,
}

pub const CRITERION_COUNT: usize = 15;

const NAMES: [&str; CRITERION_COUNT] = [
    "family-closure",
    "graph-intersection",
    "finite-roundtrips",
    "orbit-classification",
    "transformation-laws",
    "slice-shadows",
    "conjugator-recovery",
    "orbit-separation",
    "schur-multipliers",
    "projective-classes",
    "twisted-counts",
    "stable-restriction",
    "un-rep-types",
    "pu-stable-report",
    "determinism",
];

pub fn criterion_name(index: usize) -> &'static str {
    NAMES[index - 1]
}

/// Run one check; panics inside the sweep are converted into failures so a
/// full run always yields all fifteen reports.
pub fn run_criterion(index: usize, config: &Config) -> CriterionReport {
    assert!((1..=CRITERION_COUNT).contains(&index), "criterion index out of range");
    let outcome = catch_unwind(AssertUnwindSafe(|| dispatch(index, config)));
    let (passed, detail) = match outcome {
        Ok(Ok(detail)) => (true, detail),
        Ok(Err(e)) => (false, e.to_string()),
        Err(payload) => (false, format!("panicked: {}", panic_text(payload.as_ref()))),
    };
    CriterionReport {
        index,
        name: NAMES[index - 1],
        passed,
        detail,
    }
}

pub fn run_all(config: &Config) -> Vec<CriterionReport> {
    (1..=CRITERION_COUNT).map(|i| run_criterion(i, config)).collect()
}

fn dispatch(index: usize, config: &Config) -> Result<String> {
    match index {
        1 => family_closure(config),
        2 => graph_intersections(config),
        3 => finite_roundtrips(config),
        4 => orbit_classification(config),
        5 => transformation_laws(config),
        6 => slice_shadows(config),
        7 => conjugator_recovery(config),
        8 => orbit_separation(config),
        9 => schur_values(config),
        10 => projective_classes(config),
        11 => twisted_counts(config),
        12 => stable_restrictions(config),
        13 => un_rep_types(config),
        14 => pu_stable_reports(config),
        15 => determinism(config),
        _ => unreachable!(),
    }
}

fn panic_text(payload: &(dyn std::any::Any + Send)) -> &str {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s
    } else {
        "(non-string payload)"
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(Error::Mismatch(format!($($arg)+)));
        }
    };
}

fn grp(spec: &str, config: &Config) -> Result<GroupRef> {
    Ok(Arc::new(make_group(spec, config)?))
}

fn hom_key(p: &GroupHom) -> (Vec<usize>, Vec<usize>) {
    (p.source().members().to_vec(), p.image_table().to_vec())
}

/// A uniformly random (subgroup, homomorphism) pair over (Γ, G).
fn random_pair<R: Rng>(
    gamma: &GroupRef,
    g: &GroupRef,
    rng: &mut R,
    config: &Config,
) -> Result<LocalRepPair> {
    let subs = subgroups(gamma, config)?;
    let sub = &subs[rng.random_range(0..subs.len())];
    let homs = enumerate_homs(sub, g, config)?;
    Ok(homs[rng.random_range(0..homs.len())].clone())
}

fn graph_members(product: &ProductGroup, p: &LocalRepPair) -> Vec<usize> {
    graph_subgroup(product, p).members().to_vec()
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// 1. Seeded families over the seven-group sweep set close under every
/// conjugation in the product group and every pairwise intersection,
/// checked on the graph-subgroup side.
fn family_closure(config: &Config) -> Result<String> {
    let mut rng = rng_for(config.seed, stream::VERIFY + 1);
    let groups = closure_sweep_set(config)?;
    let mut families = 0usize;
    let mut largest = 0usize;
    for gamma in &groups {
        for g in &groups {
            let product = ProductGroup::new(gamma.clone(), g.clone(), config)?;
            for seed_size in 1..=3usize {
                let seed: Vec<LocalRepPair> = (0..seed_size)
                    .map(|_| random_pair(gamma, g, &mut rng, config))
                    .collect::<Result<_>>()?;
                let family = close_family(gamma.clone(), g.clone(), &seed, config)?;
                for p in &seed {
                    ensure!(
                        family.contains(p),
                        "closure over ({}, {}) lost a seed pair",
                        gamma.name(),
                        g.name()
                    );
                }
                let keys: BTreeSet<Vec<usize>> = family
                    .pairs()
                    .iter()
                    .map(|p| graph_members(&product, p))
                    .collect();
                for k in &keys {
                    for t in product.group.elements() {
                        let mut image: Vec<usize> =
                            k.iter().map(|&x| product.group.conj(t, x)).collect();
                        image.sort_unstable();
                        ensure!(
                            keys.contains(&image),
                            "family over ({}, {}) is not conjugation-closed at element {t}",
                            gamma.name(),
                            g.name()
                        );
                    }
                }
                let list: Vec<&Vec<usize>> = keys.iter().collect();
                for i in 0..list.len() {
                    for j in i + 1..list.len() {
                        let inter = sorted_intersection(list[i], list[j]);
                        ensure!(
                            keys.contains(&inter),
                            "family over ({}, {}) is missing an intersection",
                            gamma.name(),
                            g.name()
                        );
                    }
                }
                families += 1;
                largest = largest.max(family.len());
            }
        }
    }
    Ok(format!(
        "{families} seeded families over {} group pairs close; largest has {largest} pairs",
        groups.len() * groups.len()
    ))
}

/// 2. Graph subgroups intersect along the agreement pair, exhaustively
/// over every (subgroup, homomorphism) pair for groups of order ≤ 8.
fn graph_intersections(config: &Config) -> Result<String> {
    let groups = groups_leq_8(config)?;
    let mut checked = 0usize;
    for gamma in &groups {
        let subs = subgroups(gamma, config)?;
        for g in &groups {
            let product = ProductGroup::new(gamma.clone(), g.clone(), config)?;
            let mut pairs: Vec<LocalRepPair> = Vec::new();
            for sub in &subs {
                pairs.extend(enumerate_homs(sub, g, config)?);
            }
            let members: Vec<Vec<usize>> =
                pairs.iter().map(|p| graph_members(&product, p)).collect();
            for i in 0..pairs.len() {
                for j in i..pairs.len() {
                    let direct = sorted_intersection(&members[i], &members[j]);
                    let agreement = intersect_pairs(&pairs[i], &pairs[j]);
                    ensure!(
                        graph_members(&product, &agreement) == direct,
                        "graph intersection over ({}, {}) differs from the agreement pair",
                        gamma.name(),
                        g.name()
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checked} graph intersections equal the agreement-pair graph"
    ))
}

/// 3. Product-group sets with graph isotropy and shuffled bundles both
/// survive the round trip between the two presentations.
fn finite_roundtrips(config: &Config) -> Result<String> {
    let mut rng = rng_for(config.seed, stream::VERIFY + 3);
    let groups = groups_leq_8(config)?;
    for k in 0..200 {
        let gamma = groups[rng.random_range(0..groups.len())].clone();
        let g = groups[rng.random_range(0..groups.len())].clone();
        let set = seeded_graph_set(&gamma, &g, &mut rng, config)?;
        ensure!(
            roundtrip_set_isomorphic(&set, config)?,
            "set {k} over ({}, {}) does not survive the round trip",
            gamma.name(),
            g.name()
        );
    }
    for k in 0..200 {
        let gamma = groups[rng.random_range(0..groups.len())].clone();
        let g = groups[rng.random_range(0..groups.len())].clone();
        let p = seeded_bundle(&gamma, &g, &mut rng, config)?;
        ensure!(
            roundtrip_bundle_isomorphic(&p, config)?,
            "bundle {k} over ({}, {}) does not survive the round trip",
            gamma.name(),
            g.name()
        );
    }
    Ok("200 set and 200 bundle round trips are isomorphic to their inputs".into())
}

/// 4. Over every coset orbit: the classifier, the homomorphism-orbit list
/// and an independent column census agree on the number of classes.
fn orbit_classification(config: &Config) -> Result<String> {
    let gammas = groups_leq_8(config)?;
    let targets: Vec<GroupRef> = gammas.iter().filter(|g| g.order() <= 6).cloned().collect();
    let mut cells = 0usize;
    let mut classes = 0usize;
    for gamma in &gammas {
        for h in subgroups(gamma, config)? {
            for g in &targets {
                let orbits = hom_orbits(&h, g, config)?.len();
                let bundles = classify_over_orbit(&h, g, config)?.len();
                let census = census_over_orbit(gamma, &h, g);
                ensure!(
                    orbits == bundles && bundles == census,
                    "counts over ({}, order-{} subgroup, {}) disagree: {orbits} orbits, \
                     {bundles} bundles, census {census}",
                    gamma.name(),
                    h.order(),
                    g.name()
                );
                cells += 1;
                classes += census;
            }
        }
    }
    Ok(format!(
        "{cells} (group, subgroup, target) cells agree; {classes} classes in total"
    ))
}

/// 5. The fiber/base transformation laws of local representations hold at
/// every point of every seeded and every classified test bundle.
fn transformation_laws(config: &Config) -> Result<String> {
    let mut rng = rng_for(config.seed, stream::VERIFY + 5);
    let groups = groups_leq_8(config)?;
    let mut bundles = 0usize;
    let mut points = 0usize;
    for _ in 0..200 {
        let gamma = groups[rng.random_range(0..groups.len())].clone();
        let g = groups[rng.random_range(0..groups.len())].clone();
        let p = seeded_bundle(&gamma, &g, &mut rng, config)?;
        check_transformation_rules(&p)?;
        bundles += 1;
        points += p.total_size();
    }
    for gamma in &groups {
        for h in subgroups(gamma, config)? {
            for g in groups.iter().filter(|g| g.order() <= 4) {
                for p in classify_over_orbit(&h, g, config)? {
                    check_transformation_rules(&p)?;
                    bundles += 1;
                    points += p.total_size();
                }
            }
        }
    }
    Ok(format!(
        "transformation laws hold at {points} points of {bundles} bundles"
    ))
}

fn hom_tuples(homs: &[GroupHom], len: usize) -> Vec<Vec<GroupHom>> {
    let mut out: Vec<Vec<GroupHom>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            for h in homs {
                let mut t2 = t.clone();
                t2.push(h.clone());
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// 6. Slice-assigned bundles over Γ/H × Z: isomorphism coincides with
/// pointwise conjugacy of the assignments, and the fiber over a slice point
/// in the identity coset carries exactly the G-conjugates of its assigned
/// homomorphism, including the assignment itself.
fn slice_shadows(config: &Config) -> Result<String> {
    let c2 = grp("C2", config)?;
    let mut iso_pairs = 0usize;
    let mut fibers = 0usize;
    for spec in ["C4", "S3"] {
        let gamma = grp(spec, config)?;
        let invol = gamma
            .elements()
            .find(|&x| gamma.elem_order(x) == 2)
            .expect("both groups contain an involution");
        let h = Subgroup::new(gamma.clone(), vec![gamma.identity(), invol])?;
        let homs = enumerate_homs(&h, &c2, config)?;
        for zs in 1..=3usize {
            let tuples = hom_tuples(&homs, zs);
            let built: Vec<_> = tuples
                .iter()
                .map(|t| bundle_p_sigma(t))
                .collect::<Result<Vec<_>>>()?;
            for i in 0..tuples.len() {
                for j in 0..tuples.len() {
                    let iso = is_isomorphic(&built[i], &built[j]).is_some();
                    let conj = pointwise_conjugate(&tuples[i], &tuples[j]);
                    ensure!(
                        iso == conj,
                        "over ({spec}, C2) with {zs} slices, isomorphism and pointwise \
                         conjugacy disagree on tuple pair ({i}, {j})"
                    );
                    iso_pairs += 1;
                }
            }
            for (i, t) in tuples.iter().enumerate() {
                for (z, sigma) in t.iter().enumerate() {
                    // Base point `z` is (identity coset, slice z).
                    let mut seen = BTreeSet::new();
                    let mut exact = false;
                    for e in built[i].fiber(z) {
                        let rep = built[i].local_rep_at(e)?;
                        if hom_key(&rep) == hom_key(sigma) {
                            exact = true;
                        }
                        seen.insert(hom_key(&rep));
                    }
                    let expected: BTreeSet<_> = c2
                        .elements()
                        .map(|x| hom_key(&conjugate_hom(x, sigma)))
                        .collect();
                    ensure!(
                        exact && seen == expected,
                        "over ({spec}, C2), slice {z} of tuple {i} does not carry the \
                         conjugates of its assignment"
                    );
                    fibers += 1;
                }
            }
        }
    }
    Ok(format!(
        "{iso_pairs} isomorphism/conjugacy comparisons and {fibers} identity-coset fibers agree"
    ))
}

/// Permutation representation on the cosets of a subgroup.
fn coset_rep(sub: &Subgroup, config: &Config) -> Result<UnitaryRep> {
    let group = sub.parent().clone();
    let set = GammaSet::cosets(sub);
    let n = set.size();
    let matrices = group
        .elements()
        .map(|g| {
            ComplexMatrix::from_fn(n, n, |i, j| {
                if set.act(g, j) == i {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                }
            })
        })
        .collect();
    UnitaryRep::new(group, matrices, config)
}

/// Coset permutation representations of dimension ≤ 6, the building blocks
/// for random small representations.
fn coset_pieces(group: &GroupRef, config: &Config) -> Result<Vec<UnitaryRep>> {
    subgroups(group, config)?
        .iter()
        .filter(|s| group.order() / s.order() <= 6)
        .map(|s| coset_rep(s, config))
        .collect()
}

/// A random direct sum of pieces, total dimension ≤ 6, conjugated by a
/// Haar unitary so its matrices are dense.
fn assemble_rep<R: Rng>(pieces: &[UnitaryRep], rng: &mut R, config: &Config) -> UnitaryRep {
    let mut rep: Option<UnitaryRep> = None;
    let mut dim = 0usize;
    loop {
        let fits: Vec<&UnitaryRep> = pieces.iter().filter(|p| dim + p.dim() <= 6).collect();
        if fits.is_empty() {
            break;
        }
        let piece = fits[rng.random_range(0..fits.len())];
        dim += piece.dim();
        rep = Some(match rep {
            None => piece.clone(),
            Some(r) => r.direct_sum(piece).expect("pieces share the group"),
        });
        if rng.random_range(0..3) == 0 {
            break;
        }
    }
    let rep = rep.expect("the index-one piece always fits");
    let v = haar_unitary(rep.dim(), rng, config);
    rep.conjugated(&v)
}

/// A unitary within the given operator-norm distance of the identity,
/// along a random skew-Hermitian direction.
fn small_unitary<R: Rng>(
    dim: usize,
    bound: f64,
    rng: &mut R,
    config: &Config,
) -> Result<ComplexMatrix> {
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let s = a.sub(&a.adjoint()).scale(Complex64::new(0.5, 0.0));
    let norm = operator_norm(&s, config)?.max(1e-12);
    let mut t = 0.4 * bound / norm;
    loop {
        let u = gram_schmidt_unitary(&matrix_exp(&s.scale(Complex64::new(t, 0.0))), config)?;
        if operator_norm(&u.sub(&ComplexMatrix::identity(dim)), config)? < bound {
            return Ok(u);
        }
        t *= 0.5;
    }
}

/// 7. A thousand seeded conjugation instances: the averaged intertwiner
/// stays inside the invertible ball around I and the recovered unitary
/// conjugates one representation onto the other to 1e-8.
fn conjugator_recovery(config: &Config) -> Result<String> {
    let mut rng = rng_for(config.seed, stream::VERIFY + 7);
    let specs = ["C2", "C3", "C4", "S3", "C6", "D4", "Q8", "C8"];
    let groups: Vec<GroupRef> = specs
        .iter()
        .map(|s| grp(s, config))
        .collect::<Result<_>>()?;
    let piece_sets: Vec<Vec<UnitaryRep>> = groups
        .iter()
        .map(|g| coset_pieces(g, config))
        .collect::<Result<_>>()?;
    let mut worst_gap = 0f64;
    let mut worst_residual = 0f64;
    for k in 0..1000 {
        let which = k % groups.len();
        let group = &groups[which];
        let alpha = assemble_rep(&piece_sets[which], &mut rng, config);
        let dim = alpha.dim();
        let bound = 1.0 / (2.0 * group.order() as f64);
        let u = small_unitary(dim, bound, &mut rng, config)?;
        let beta = alpha.conjugated(&u);
        let t = intertwiner(&beta, &alpha, config)?;
        let gap = operator_norm(&ComplexMatrix::identity(dim).sub(&t), config)?;
        ensure!(
            gap < 1.0,
            "instance {k} on {}: intertwiner left the invertible ball (gap {gap:.3e})",
            group.name()
        );
        let sigma = conjugator(&alpha, &beta, config)?;
        let residual = sup_distance(&alpha.conjugated(&sigma), &beta, config)?;
        ensure!(
            residual <= 1e-8,
            "instance {k} on {}: conjugation residual {residual:.3e}",
            group.name()
        );
        worst_gap = worst_gap.max(gap);
        worst_residual = worst_residual.max(residual);
    }
    Ok(format!(
        "1000 instances recovered; worst gap {worst_gap:.3e}, worst residual {worst_residual:.3e}"
    ))
}

/// Characters of a cyclic group, indexed by frequency.
fn cyclic_characters(group: &GroupRef, config: &Config) -> Result<Vec<UnitaryRep>> {
    let n = group.order();
    let generator = group
        .elements()
        .find(|&x| group.elem_order(x) == n)
        .expect("cyclic group has a generator");
    let mut exponent = vec![0usize; n];
    let mut x = group.identity();
    for m in 0..n {
        exponent[x] = m;
        x = group.mul(x, generator);
    }
    (0..n)
        .map(|k| {
            let values = (0..n)
                .map(|e| {
                    Complex64::from_polar(
                        1.0,
                        std::f64::consts::TAU * (k * exponent[e]) as f64 / n as f64,
                    )
                })
                .collect();
            UnitaryRep::one_dimensional(group.clone(), values, config)
        })
        .collect()
}

/// The sign character of S3: −1 exactly on the involutions.
fn sign_rep(s3: &GroupRef, config: &Config) -> Result<UnitaryRep> {
    let values = s3
        .elements()
        .map(|x| {
            if s3.elem_order(x) == 2 {
                -Complex64::ONE
            } else {
                Complex64::ONE
            }
        })
        .collect();
    UnitaryRep::one_dimensional(s3.clone(), values, config)
}

/// The two-dimensional irreducible of S3: the coset permutation action on
/// three points, restricted to the sum-zero plane in an orthonormal basis.
fn s3_standard_rep(s3: &GroupRef, config: &Config) -> Result<UnitaryRep> {
    let invol = s3
        .elements()
        .find(|&x| s3.elem_order(x) == 2)
        .expect("S3 contains an involution");
    let sub = Subgroup::new(s3.clone(), vec![s3.identity(), invol])?;
    let set = GammaSet::cosets(&sub);
    debug_assert_eq!(set.size(), 3);
    let b = [
        [1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()],
        [-1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()],
        [0.0, -2.0 / 6f64.sqrt()],
    ];
    let matrices = s3
        .elements()
        .map(|g| {
            ComplexMatrix::from_fn(2, 2, |p, q| {
                let mut v = 0.0;
                for (j, row) in b.iter().enumerate() {
                    v += b[set.act(g, j)][p] * row[q];
                }
                Complex64::new(v, 0.0)
            })
        })
        .collect();
    UnitaryRep::new(s3.clone(), matrices, config)
}

/// 8. Sampled unitary orbits of non-conjugate representations stay at
/// sup-distance at least 1/|H| − 1e−9 from each other.
fn orbit_separation(config: &Config) -> Result<String> {
    let mut checked = 0usize;
    let mut least = f64::INFINITY;
    let mut run = |a: &UnitaryRep, b: &UnitaryRep| -> Result<()> {
        let n = a.group().order() as f64;
        let d = orbit_separation_check(a, b, 100, config)?;
        if d < 1.0 / n - 1e-9 {
            return Err(Error::Mismatch(format!(
                "sampled distance {d:.6} undercuts 1/{n}"
            )));
        }
        checked += 1;
        least = least.min(d - 1.0 / n);
        Ok(())
    };
    for n in [2usize, 3, 4] {
        let g = grp(&format!("C{n}"), config)?;
        let chars = cyclic_characters(&g, config)?;
        for i in 0..n {
            for j in i + 1..n {
                run(&chars[i], &chars[j])?;
            }
        }
    }
    let s3 = grp("S3", config)?;
    let triv = UnitaryRep::trivial(s3.clone(), 1);
    let sign = sign_rep(&s3, config)?;
    run(&triv, &sign)?;
    let dim2 = [
        s3_standard_rep(&s3, config)?,
        triv.direct_sum(&triv)?,
        triv.direct_sum(&sign)?,
        sign.direct_sum(&sign)?,
    ];
    for i in 0..dim2.len() {
        for j in i + 1..dim2.len() {
            run(&dim2[i], &dim2[j])?;
        }
    }
    Ok(format!(
        "{checked} rep pairs separated; smallest margin above 1/|H| is {least:.4}"
    ))
}

/// 9. Schur multipliers agree with the classical values for cyclic groups,
/// the two elementary abelian squares, D4, Q8 and S3.
fn schur_values(config: &Config) -> Result<String> {
    let mut checked = 0usize;
    for n in 1..=8usize {
        let g = grp(&format!("C{n}"), config)?;
        let m = schur_multiplier(&g, config)?;
        ensure!(
            m.invariant_factors.is_empty(),
            "multiplier of C{n} should be trivial, got {:?}",
            m.invariant_factors
        );
        checked += 1;
    }
    let table: [(&str, &[usize]); 5] = [
        ("K4", &[2]),
        ("C3xC3", &[3]),
        ("D4", &[2]),
        ("Q8", &[]),
        ("S3", &[]),
    ];
    for (spec, expect) in table {
        let g = grp(spec, config)?;
        let m = schur_multiplier(&g, config)?;
        ensure!(
            m.invariant_factors == expect,
            "multiplier of {spec}: expected {expect:?}, got {:?}",
            m.invariant_factors
        );
        checked += 1;
    }
    Ok(format!("{checked} Schur multipliers match the classical values"))
}

/// The Pauli matrices as unitary lifts of the Klein four-group.
fn pauli_lifts() -> Vec<ComplexMatrix> {
    let c = Complex64::new;
    let i = c(0.0, 1.0);
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    vec![
        ComplexMatrix::identity(2),
        ComplexMatrix::new(2, 2, vec![o, one, one, o]).unwrap(),
        ComplexMatrix::new(2, 2, vec![o, -i, i, o]).unwrap(),
        ComplexMatrix::new(2, 2, vec![one, o, o, -one]).unwrap(),
    ]
}

/// 10. The Pauli lift class is nontrivial of order two, honest
/// representations lift to the zero cocycle, and root-of-unity rescalings
/// never move a class.
fn projective_classes(config: &Config) -> Result<String> {
    let k4 = grp("K4", config)?;
    let pauli = cocycle_of_projective_rep(&k4, &pauli_lifts(), config)?;
    let zero = Cocycle2::zero(k4.clone(), pauli.modulus());
    ensure!(
        !same_class(&pauli, &zero, config)?,
        "the Pauli class should be nontrivial"
    );
    ensure!(
        same_class(&pauli.add(&pauli)?, &zero, config)?,
        "the Pauli class should square to the trivial class"
    );
    for spec in ["C2", "C3", "K4", "S3"] {
        let g = grp(spec, config)?;
        let reg = UnitaryRep::regular(g.clone());
        let lifts: Vec<ComplexMatrix> = g.elements().map(|x| reg.matrix(x).clone()).collect();
        let c = cocycle_of_projective_rep(&g, &lifts, config)?;
        ensure!(
            c.values().iter().all(|&v| v == 0),
            "the regular representation of {spec} should lift to the zero cocycle"
        );
    }
    let mut rng = rng_for(config.seed, stream::VERIFY + 10);
    let n = pauli.modulus();
    for k in 0..100 {
        let lifts: Vec<ComplexMatrix> = pauli_lifts()
            .into_iter()
            .map(|m| {
                let phase = rng.random_range(0..n);
                m.scale(Complex64::from_polar(
                    1.0,
                    std::f64::consts::TAU * phase as f64 / n as f64,
                ))
            })
            .collect();
        let c = cocycle_of_projective_rep(&k4, &lifts, config)?;
        ensure!(
            same_class(&c, &pauli, config)?,
            "rescaling {k} moved the Pauli class"
        );
    }
    Ok("Pauli class nontrivial of order two; honest lifts trivial; 100 rescalings fixed the class"
        .into())
}

/// 11. For every group of order ≤ 12 and every 2-cohomology class, the
/// twisted irreducibles number the regular classes and their squared
/// dimensions sum to the group order; the Pauli class splits as [2].
fn twisted_counts(config: &Config) -> Result<String> {
    let mut cells = 0usize;
    for h in groups_leq_12(config)? {
        let h2 = h2_with_mu_n(&h, config)?;
        for omega in h2.all_classes() {
            let dims = twisted_irrep_dims(&omega, config)?;
            let regular = omega_regular_classes(&omega).len();
            ensure!(
                dims.len() == regular,
                "{}: {} twisted irreducibles vs {} regular classes",
                h.name(),
                dims.len(),
                regular
            );
            let sum: usize = dims.iter().map(|d| d * d).sum();
            ensure!(
                sum == h.order(),
                "{}: twisted dimensions {:?} do not square-sum to {}",
                h.name(),
                dims,
                h.order()
            );
            cells += 1;
        }
    }
    let k4 = grp("K4", config)?;
    let pauli = cocycle_of_projective_rep(&k4, &pauli_lifts(), config)?;
    let dims = twisted_irrep_dims(&pauli, config)?;
    ensure!(
        dims == vec![2],
        "Pauli twist should split as [2], got {dims:?}"
    );
    Ok(format!(
        "{cells} (group, class) cells match regular-class counts and square sums; Pauli gives [2]"
    ))
}

/// 12. The all-infinite type is the stable one, and for every class of
/// every group of order ≤ 8, restriction to any subgroup still contains
/// every twisted irreducible of the subgroup.
fn stable_restrictions(config: &Config) -> Result<String> {
    let mut restrictions = 0usize;
    for h in groups_leq_8(config)? {
        let h2 = h2_with_mu_n(&h, config)?;
        let subs = subgroups(&h, config)?;
        for omega in h2.all_classes() {
            let stable = TwistedRepType::stable(&omega, config)?;
            ensure!(
                is_stable(&stable),
                "the all-infinite type over {} must be stable",
                h.name()
            );
            if !stable.mults.is_empty() {
                let mut finite = stable.clone();
                finite.mults[0] = Multiplicity::Finite(3);
                ensure!(
                    !is_stable(&finite),
                    "a finite multiplicity over {} must break stability",
                    h.name()
                );
            }
            for sub in &subs {
                ensure!(
                    verify_stable_restriction(&omega, sub, config)?,
                    "a class of {} misses an irreducible on an order-{} subgroup",
                    h.name(),
                    sub.order()
                );
                restrictions += 1;
            }
        }
    }
    Ok(format!(
        "{restrictions} (class, subgroup) restrictions cover every twisted irreducible"
    ))
}

/// 13. hom(S3, U(3))/U(3) has six points, and the component series of the
/// unitary reports match the closed-form expansions through degree 8.
fn un_rep_types(config: &Config) -> Result<String> {
    let s3 = grp("S3", config)?;
    let table = character_table(&s3, config)?;
    let count = enumerate_rep_types(&table, 3).len();
    ensure!(count == 6, "expected 6 types of S3 in dimension 3, got {count}");

    let c1 = grp("C1", config)?;
    let c2 = grp("C2", config)?;
    let series_of = |r: &crate::report::SpaceDescription, mults: &[usize]| -> Option<Vec<usize>> {
        r.components
            .iter()
            .find(|c| c.rep_type.as_deref() == Some(mults))
            .and_then(|c| c.poincare.as_ref().map(|p| p.coefficients.clone()))
    };
    let bu1 = report_un(&c1, 1, 8, config)?;
    ensure!(
        series_of(&bu1, &[1]) == Some(vec![1, 0, 1, 0, 1, 0, 1, 0, 1]),
        "series of a single line bundle component is off"
    );
    let bu11 = report_un(&c2, 2, 8, config)?;
    ensure!(
        series_of(&bu11, &[1, 1]) == Some(vec![1, 0, 2, 0, 3, 0, 4, 0, 5]),
        "series of the split rank-2 component is off"
    );
    let bu2 = report_un(&c1, 2, 8, config)?;
    ensure!(
        series_of(&bu2, &[2]) == Some(vec![1, 0, 1, 0, 2, 0, 2, 0, 3]),
        "series of the full rank-2 component is off"
    );
    Ok("6 types of S3 at n = 3; component series match the closed forms to degree 8".into())
}

/// 14. Stable projective-unitary reports: component counts 1/2/1 over
/// C2/K4/C3, with π₁ the character group and π₃ = ℤ on every component.
fn pu_stable_reports(config: &Config) -> Result<String> {
    let cases: [(&str, usize, &[usize]); 3] =
        [("C2", 1, &[2]), ("K4", 2, &[2, 2]), ("C3", 1, &[3])];
    for (spec, count, ab) in cases {
        let h = grp(spec, config)?;
        let r = report_pu_stable(&h, config)?;
        ensure!(
            r.component_count() == count,
            "{spec}: expected {count} components, got {}",
            r.component_count()
        );
        for comp in &r.components {
            let [Atom::Opaque { homotopy }] = &comp.atoms[..] else {
                return Err(Error::Mismatch(format!(
                    "{spec}: component is not a single opaque atom"
                )));
            };
            let pi1 = homotopy.iter().find(|(k, _)| *k == 1).map(|(_, s)| s);
            let pi3 = homotopy.iter().find(|(k, _)| *k == 3).map(|(_, s)| s);
            ensure!(
                pi1 == Some(&GroupSignature::FiniteAbelian(ab.to_vec())),
                "{spec}: fundamental group is not the character group"
            );
            ensure!(
                pi3 == Some(&GroupSignature::FreeAbelian(1)),
                "{spec}: third homotopy group is not ℤ"
            );
        }
    }
    Ok("component counts 1/2/1 over C2/K4/C3 with the stated low homotopy".into())
}

fn matrix_json(m: &ComplexMatrix) -> Json {
    Json::Array(
        (0..m.rows())
            .map(|i| Json::Array((0..m.cols()).map(|j| Json::complex(m[(i, j)])).collect()))
            .collect(),
    )
}

fn rows_json(rows: &[Vec<usize>]) -> Json {
    Json::Array(rows.iter().map(|r| Json::usizes(r)).collect())
}

/// 15. Every seeded artifact kind renders to identical bytes when computed
/// twice in one process. (Byte-identity across separate `verify` runs is
/// covered by the command-line tests.)
fn determinism(config: &Config) -> Result<String> {
    let doc = |config: &Config| -> Result<String> {
        let mut items: Vec<(&str, Json)> = Vec::new();
        let s3 = grp("S3", config)?;
        let table = character_table(&s3, config)?;
        items.push(("character-dims", Json::usizes(table.dims())));
        items.push((
            "characters",
            Json::Array(
                table
                    .chars()
                    .iter()
                    .map(|row| Json::Array(row.iter().map(|z| Json::complex(*z)).collect()))
                    .collect(),
            ),
        ));
        let d4 = grp("D4", config)?;
        let pieces = coset_pieces(&d4, config)?;
        let mut rng = rng_for(config.seed, stream::VERIFY + 150);
        let alpha = assemble_rep(&pieces, &mut rng, config);
        let u = small_unitary(alpha.dim(), 1.0 / 16.0, &mut rng, config)?;
        let beta = alpha.conjugated(&u);
        items.push(("conjugator", matrix_json(&conjugator(&alpha, &beta, config)?)));
        let k4 = grp("K4", config)?;
        let pauli = cocycle_of_projective_rep(&k4, &pauli_lifts(), config)?;
        items.push(("pauli-dims", Json::usizes(&twisted_irrep_dims(&pauli, config)?)));
        let c4 = grp("C4", config)?;
        let mut rng = rng_for(config.seed, stream::VERIFY + 151);
        let p = seeded_bundle(&s3, &c4, &mut rng, config)?;
        items.push(("bundle-gamma", rows_json(&p.gamma_rows())));
        items.push(("bundle-g", rows_json(&p.g_rows())));
        items.push(("bundle-proj", Json::usizes(p.proj_table())));
        let c6 = grp("C6", config)?;
        let mut rng = rng_for(config.seed, stream::VERIFY + 152);
        let seed: Vec<LocalRepPair> = (0..2)
            .map(|_| random_pair(&c6, &s3, &mut rng, config))
            .collect::<Result<_>>()?;
        let family = close_family(c6.clone(), s3.clone(), &seed, config)?;
        items.push((
            "family",
            Json::Array(
                family
                    .pairs()
                    .iter()
                    .map(|p| {
                        Json::Array(vec![
                            Json::usizes(p.source().members()),
                            Json::usizes(p.image_table()),
                        ])
                    })
                    .collect(),
            ),
        ));
        Ok(Json::object(items).render())
    };
    let first = doc(config)?;
    let second = doc(config)?;
    ensure!(first == second, "two in-process renders differ");
    Ok(format!(
        "seeded artifacts render identically twice ({} bytes)",
        first.len()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_dispatch_cover_all_indices() {
        assert_eq!(NAMES.len(), CRITERION_COUNT);
        let mut sorted = NAMES.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), CRITERION_COUNT, "names must be distinct");
        for (i, &name) in NAMES.iter().enumerate() {
            assert_eq!(criterion_name(i + 1), name);
        }
    }

    #[test]
    fn failed_checks_report_instead_of_unwinding() {
        // A criterion index in range but driven with an impossible cap
        // fails through the error path, not a panic.
        let mut config = Config::default();
        config.closure_pair_cap = 1;
        let report = run_criterion(1, &config);
        assert!(!report.passed);
        assert!(!report.detail.is_empty());
    }

    #[test]
    fn quick_criteria_pass() {
        let config = Config::default();
        for index in [9, 13, 14] {
            let report = run_criterion(index, &config);
            assert!(report.passed, "criterion {index}: {}", report.detail);
        }
    }
}
