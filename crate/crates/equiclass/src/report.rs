//! Symbolic reports on moduli of equivariant structures with a fixed
//! isotropy group H: how many components there are and what each component
//! looks like, expressed through a small vocabulary of classifying-space
//! atoms. Everything here is exact finite data — component counts, group
//! signatures, truncated Poincaré series — not a model of the spaces.

use std::sync::Arc;

use crate::character::{character_table, enumerate_rep_types};
use crate::cohomology::schur_multiplier;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::family::LocalRepFamily;
use crate::group::{hom_orbits, GroupRef, Subgroup};

/// The signature of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSignature {
    Trivial,
    /// ℤ^rank
    FreeAbelian(usize),
    /// Invariant factors, ascending, each dividing the next.
    FiniteAbelian(Vec<usize>),
}

/// One factor of a component, as a classifying-space label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// BU(m), m ≥ 1.
    BU(usize),
    /// K(ℤ, 2).
    KZ2,
    /// The classifying space of a finite group, identified by an
    /// isomorphism-invariant signature rather than a model.
    BFinite {
        label: String,
        order: usize,
        abelianization: Vec<usize>,
    },
    /// A space described only through named homotopy groups.
    Opaque {
        homotopy: Vec<(usize, GroupSignature)>,
    },
}

/// Coefficients of a power series in t, truncated at a fixed degree;
/// index = degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareSeries {
    pub coefficients: Vec<usize>,
}

impl PoincareSeries {
    fn one(degree: usize) -> PoincareSeries {
        let mut coefficients = vec![0; degree + 1];
        coefficients[0] = 1;
        PoincareSeries { coefficients }
    }

    fn mul(&self, other: &PoincareSeries) -> PoincareSeries {
        let d = self.coefficients.len() - 1;
        let mut coefficients = vec![0; d + 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coefficients.iter().enumerate() {
                if i + j <= d {
                    coefficients[i + j] += a * b;
                }
            }
        }
        PoincareSeries { coefficients }
    }
}

/// ∏_{j=1}^{m} 1/(1 − t^{2j}), truncated: the Poincaré series of BU(m).
pub fn bu_poincare_series(m: usize, degree: usize) -> PoincareSeries {
    let mut out = PoincareSeries::one(degree);
    for j in 1..=m {
        let mut factor = vec![0; degree + 1];
        for k in (0..=degree).step_by(2 * j) {
            factor[k] = 1;
        }
        out = out.mul(&PoincareSeries {
            coefficients: factor,
        });
    }
    out
}

/// One connected component: a product of atoms (empty product = a point),
/// optionally with a truncated Poincaré series and the multiplicity vector
/// it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub atoms: Vec<Atom>,
    pub poincare: Option<PoincareSeries>,
    pub rep_type: Option<Vec<usize>>,
}

/// A disjoint union of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDescription {
    pub components: Vec<Component>,
}

impl SpaceDescription {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

/// Subgroup of H generated by all commutators.
pub fn commutator_subgroup(group: &GroupRef) -> Subgroup {
    let n = group.order();
    let mut in_set = vec![false; n];
    let mut stack = vec![group.identity()];
    in_set[group.identity()] = true;
    for a in group.elements() {
        for b in group.elements() {
            let c = group.mul(group.mul(a, b), group.inv(group.mul(b, a)));
            if !in_set[c] {
                in_set[c] = true;
                stack.push(c);
            }
        }
    }
    // Close the commutator set under multiplication.
    let mut i = 0;
    while i < stack.len() {
        let a = stack[i];
        i += 1;
        for j in 0..stack.len() {
            let p = group.mul(a, stack[j]);
            if !in_set[p] {
                in_set[p] = true;
                stack.push(p);
            }
            let q = group.mul(stack[j], a);
            if !in_set[q] {
                in_set[q] = true;
                stack.push(q);
            }
        }
    }
    stack.sort_unstable();
    Subgroup::new(group.clone(), stack).expect("commutator closure is a subgroup")
}

/// Invariant factors of the abelianization H/[H,H], ascending, empty for
/// a perfect or trivial quotient. They are read off from the counts of
/// solutions of x^{p^k} = 1 in the quotient, one prime at a time.
pub fn abelianization_invariants(group: &GroupRef) -> Vec<usize> {
    let derived = commutator_subgroup(group);
    // The quotient as a multiplication on least coset representatives.
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in group.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &d in derived.members() {
            coset_of[group.mul(x, d)] = id;
        }
    }
    let q = reps.len();
    let identity = coset_of[group.identity()];
    let pow = |x: usize, m: usize| -> usize {
        let mut acc = identity;
        for _ in 0..m {
            acc = coset_of[group.mul(reps[acc], reps[x])];
        }
        acc
    };
    // Elementary divisors per prime: with m_k = log_p #{x : x^{p^k} = 1},
    // exactly m_k − m_{k−1} divisors have exponent ≥ k.
    let mut per_prime: Vec<(usize, Vec<u32>)> = Vec::new();
    for p in primes_of(q) {
        let mut n_geq: Vec<u32> = Vec::new();
        let mut prev = 0u32;
        let mut pk = 1usize;
        loop {
            pk *= p;
            let c = (0..q).filter(|&x| pow(x, pk) == identity).count();
            let mut logc = 0u32;
            let mut t = c;
            while t > 1 {
                debug_assert_eq!(t % p, 0, "solution count must be a power of {p}");
                t /= p;
                logc += 1;
            }
            let step = logc - prev;
            if step == 0 {
                break;
            }
            n_geq.push(step);
            prev = logc;
        }
        let count = n_geq.first().copied().unwrap_or(0) as usize;
        let exps: Vec<u32> = (0..count)
            .map(|i| n_geq.iter().filter(|&&s| s as usize > i).count() as u32)
            .collect();
        per_prime.push((p, exps));
    }
    // Pair largest-with-largest across primes so each factor divides the
    // next; exps are already descending.
    let width = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for i in 0..width {
        let mut f = 1usize;
        for (p, exps) in &per_prime {
            if i < exps.len() {
                f *= p.pow(exps[i]);
            }
        }
        factors.push(f);
    }
    factors.reverse();
    factors
}

fn primes_of(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        while n % p != 0 {
            p += 1;
        }
        out.push(p);
        while n % p == 0 {
            n /= p;
        }
    }
    out
}

fn same_group(a: &GroupRef, b: &GroupRef) -> bool {
    a.order() == b.order() && a.table_rows() == b.table_rows()
}

/// One component per conjugation orbit of homomorphisms H → G (optionally
/// restricted by a closed family over (H, G)), labeled by the classifying
/// space of the orbit representative's centralizer.
pub fn report_finite_g(
    h: &GroupRef,
    g: &GroupRef,
    restriction: Option<&LocalRepFamily>,
    config: &Config,
) -> Result<SpaceDescription> {
    if let Some(f) = restriction {
        if !same_group(f.gamma(), h) || !same_group(f.g(), g) {
            return Err(Error::Mismatch(
                "restriction family is over a different pair of groups".into(),
            ));
        }
        if !f.is_closed() {
            return Err(Error::NotAFamily("restriction family is not closed".into()));
        }
    }
    let orbits = hom_orbits(&h.full_subgroup(), g, config)?;
    let mut components = Vec::new();
    for orbit in &orbits {
        if let Some(f) = restriction {
            // The family is conjugation-closed, so testing the canonical
            // representative decides membership for the whole orbit.
            if !f.contains(&orbit.canonical) {
                continue;
            }
        }
        let centralizer = &orbit.stabilizer;
        let atoms = if centralizer.order() == 1 {
            Vec::new()
        } else {
            let as_group: GroupRef = Arc::new(centralizer.as_group());
            let label = if centralizer.order() == g.order() {
                g.name().to_string()
            } else {
                format!("subgroup of {} of order {}", g.name(), centralizer.order())
            };
            vec![Atom::BFinite {
                label,
                order: centralizer.order(),
                abelianization: abelianization_invariants(&as_group),
            }]
        };
        components.push(Component {
            atoms,
            poincare: None,
            rep_type: None,
        });
    }
    Ok(SpaceDescription { components })
}

/// One component per multiplicity vector of an n-dimensional unitary
/// representation of H: the component ∏_i BU(n_i) with its Poincaré
/// series truncated at the requested degree.
pub fn report_un(
    h: &GroupRef,
    n: usize,
    degree: usize,
    config: &Config,
) -> Result<SpaceDescription> {
    if degree > config.degree_cap {
        return Err(Error::OrderOverflow {
            what: "series degree".into(),
            limit: config.degree_cap,
            actual: degree,
        });
    }
    let table = character_table(h, config)?;
    let mut components = Vec::new();
    for t in enumerate_rep_types(&table, n) {
        let mut atoms = Vec::new();
        let mut series = PoincareSeries::one(degree);
        for &m in &t.mults {
            if m > 0 {
                atoms.push(Atom::BU(m));
                series = series.mul(&bu_poincare_series(m, degree));
            }
        }
        components.push(Component {
            atoms,
            poincare: Some(series),
            rep_type: Some(t.mults.clone()),
        });
    }
    Ok(SpaceDescription { components })
}

/// Circle-structure components: one K(ℤ, 2) per character of H, i.e.
/// |H/[H,H]| components in all.
pub fn report_s1(h: &GroupRef) -> SpaceDescription {
    let count: usize = abelianization_invariants(h).iter().product();
    let components = (0..count)
        .map(|_| Component {
            atoms: vec![Atom::KZ2],
            poincare: None,
            rep_type: None,
        })
        .collect();
    SpaceDescription { components }
}

/// Stable projective-unitary components: one per class of H²(H, S¹), each
/// opaque with π₁ the character group of H, π₂ trivial and π₃ = ℤ.
pub fn report_pu_stable(h: &GroupRef, config: &Config) -> Result<SpaceDescription> {
    let classes = schur_multiplier(h, config)?.order();
    let ab = abelianization_invariants(h);
    let pi1 = if ab.is_empty() {
        GroupSignature::Trivial
    } else {
        GroupSignature::FiniteAbelian(ab)
    };
    let atom = Atom::Opaque {
        homotopy: vec![
            (1, pi1),
            (2, GroupSignature::Trivial),
            (3, GroupSignature::FreeAbelian(1)),
        ],
    };
    let components = (0..classes)
        .map(|_| Component {
            atoms: vec![atom.clone()],
            poincare: None,
            rep_type: None,
        })
        .collect();
    Ok(SpaceDescription { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::classify_over_orbit;
    use crate::family::close_family;
    use crate::group::{enumerate_homs, make_group, GroupHom};

    fn cfg() -> Config {
        Config::default()
    }

    fn grp(spec: &str) -> GroupRef {
        Arc::new(make_group(spec, &cfg()).unwrap())
    }

    #[test]
    fn abelianizations() {
        let cases = [
            ("C1", vec![]),
            ("C2", vec![2]),
            ("C6", vec![6]),
            ("K4", vec![2, 2]),
            ("S3", vec![2]),
            ("S4", vec![2]),
            ("Q8", vec![2, 2]),
            ("D4", vec![2, 2]),
            ("D6", vec![2, 2]),
            ("C4xC2", vec![2, 4]),
            ("C2xC2xC2", vec![2, 2, 2]),
            ("C6xC2", vec![2, 6]),
            ("C12", vec![12]),
        ];
        for (spec, expect) in cases {
            assert_eq!(
                abelianization_invariants(&grp(spec)),
                expect,
                "abelianization of {spec}"
            );
        }
        let a4 = Arc::new(crate::catalog::alternating4(&cfg()).unwrap());
        assert_eq!(abelianization_invariants(&a4), vec![3]);
        assert_eq!(commutator_subgroup(&a4).order(), 4);
        assert_eq!(commutator_subgroup(&grp("S3")).order(), 3);
        assert_eq!(commutator_subgroup(&grp("K4")).order(), 1);
    }

    #[test]
    fn finite_g_components() {
        let cfg = cfg();
        // Trivial G: a single one-point component.
        let r = report_finite_g(&grp("S3"), &grp("C1"), None, &cfg).unwrap();
        assert_eq!(r.component_count(), 1);
        assert!(r.components[0].atoms.is_empty());

        // H = C2, G = C2: two components, both BC2.
        let r = report_finite_g(&grp("C2"), &grp("C2"), None, &cfg).unwrap();
        assert_eq!(r.component_count(), 2);
        for c in &r.components {
            match &c.atoms[..] {
                [Atom::BFinite {
                    order,
                    abelianization,
                    ..
                }] => {
                    assert_eq!(*order, 2);
                    assert_eq!(abelianization, &vec![2]);
                }
                other => panic!("unexpected atoms {other:?}"),
            }
        }

        // H = C3, G = S3: BS3 for the trivial orbit, then BC3.
        let r = report_finite_g(&grp("C3"), &grp("S3"), None, &cfg).unwrap();
        assert_eq!(r.component_count(), 2);
        let sig: Vec<(usize, Vec<usize>)> = r
            .components
            .iter()
            .map(|c| match &c.atoms[..] {
                [Atom::BFinite {
                    order,
                    abelianization,
                    ..
                }] => (*order, abelianization.clone()),
                other => panic!("unexpected atoms {other:?}"),
            })
            .collect();
        assert_eq!(sig, vec![(6, vec![2]), (3, vec![3])]);
    }

    #[test]
    fn finite_g_counts_match_orbit_classification() {
        let cfg = cfg();
        for (hs, gs) in [("C4", "C2"), ("S3", "S3"), ("K4", "C4"), ("C6", "S3")] {
            let h = grp(hs);
            let g = grp(gs);
            let r = report_finite_g(&h, &g, None, &cfg).unwrap();
            let orbits = hom_orbits(&h.full_subgroup(), &g, &cfg).unwrap();
            assert_eq!(r.component_count(), orbits.len());
            let classes = classify_over_orbit(&h.full_subgroup(), &g, &cfg).unwrap();
            assert_eq!(r.component_count(), classes.len(), "({hs}, {gs})");
        }
    }

    #[test]
    fn finite_g_with_family_restriction() {
        let cfg = cfg();
        let h = grp("C3");
        let g = grp("S3");
        let trivial_pair = GroupHom::trivial(h.full_subgroup(), g.clone());
        let family = close_family(h.clone(), g.clone(), &[trivial_pair], &cfg).unwrap();
        let r = report_finite_g(&h, &g, Some(&family), &cfg).unwrap();
        assert_eq!(r.component_count(), 1);
        match &r.components[0].atoms[..] {
            [Atom::BFinite { order, .. }] => assert_eq!(*order, 6),
            other => panic!("unexpected atoms {other:?}"),
        }
        // Family over the wrong pair of groups is rejected.
        assert!(report_finite_g(&grp("C4"), &g, Some(&family), &cfg).is_err());
    }

    #[test]
    fn bu_series_examples() {
        assert_eq!(bu_poincare_series(1, 4).coefficients, vec![1, 0, 1, 0, 1]);
        let two_lines = bu_poincare_series(1, 4).mul(&bu_poincare_series(1, 4));
        assert_eq!(two_lines.coefficients, vec![1, 0, 2, 0, 3]);
        assert_eq!(
            bu_poincare_series(2, 8).coefficients,
            vec![1, 0, 1, 0, 2, 0, 2, 0, 3]
        );
    }

    #[test]
    fn un_reports() {
        let cfg = cfg();
        let r = report_un(&grp("S3"), 3, 8, &cfg).unwrap();
        assert_eq!(r.component_count(), 6);
        for c in &r.components {
            let t = c.rep_type.as_ref().unwrap();
            let positives = t.iter().filter(|&&m| m > 0).count();
            assert_eq!(c.atoms.len(), positives);
            let series = c.poincare.as_ref().unwrap();
            assert_eq!(series.coefficients[0], 1);
            // Degree-2 coefficient counts the BU factors.
            assert_eq!(series.coefficients[2], positives);
        }
        // Multiplicity vector [1, 0, 1] (trivial ⊕ two-dimensional) has
        // centralizer U(1)², so its component is BU(1)×BU(1).
        let both = r
            .components
            .iter()
            .find(|c| c.rep_type.as_deref() == Some(&[1, 0, 1]))
            .unwrap();
        assert_eq!(both.atoms, vec![Atom::BU(1), Atom::BU(1)]);
        let expect = bu_poincare_series(1, 8).mul(&bu_poincare_series(1, 8));
        assert_eq!(both.poincare.as_ref().unwrap(), &expect);
        // A three-dimensional type with a multiplicity of 3 shows BU(3).
        let triple = r
            .components
            .iter()
            .find(|c| c.rep_type.as_deref() == Some(&[3, 0, 0]))
            .unwrap();
        assert_eq!(triple.atoms, vec![Atom::BU(3)]);

        assert!(matches!(
            report_un(&grp("S3"), 2, 1000, &cfg),
            Err(Error::OrderOverflow { .. })
        ));
    }

    #[test]
    fn s1_reports() {
        assert_eq!(report_s1(&grp("C1")).component_count(), 1);
        assert_eq!(report_s1(&grp("S3")).component_count(), 2);
        assert_eq!(report_s1(&grp("K4")).component_count(), 4);
        for c in &report_s1(&grp("K4")).components {
            assert_eq!(c.atoms, vec![Atom::KZ2]);
        }
        // Cross-check the count against hom(H, C_m) with m the exponent of
        // the abelianization.
        let cfg = cfg();
        for spec in ["C1", "C2", "S3", "K4", "Q8", "C6"] {
            let h = grp(spec);
            let ab = abelianization_invariants(&h);
            let m = ab.last().copied().unwrap_or(1);
            let target = grp(&format!("C{m}"));
            let homs = enumerate_homs(&h.full_subgroup(), &target, &cfg).unwrap();
            assert_eq!(report_s1(&h).component_count(), homs.len(), "{spec}");
        }
    }

    #[test]
    fn pu_stable_reports() {
        let cfg = cfg();
        let r = report_pu_stable(&grp("C1"), &cfg).unwrap();
        assert_eq!(r.component_count(), 1);
        match &r.components[0].atoms[..] {
            [Atom::Opaque { homotopy }] => {
                assert_eq!(homotopy[0], (1, GroupSignature::Trivial));
                assert_eq!(homotopy[2], (3, GroupSignature::FreeAbelian(1)));
            }
            other => panic!("unexpected atoms {other:?}"),
        }

        let r = report_pu_stable(&grp("C2"), &cfg).unwrap();
        assert_eq!(r.component_count(), 1);
        match &r.components[0].atoms[..] {
            [Atom::Opaque { homotopy }] => {
                assert_eq!(homotopy[0], (1, GroupSignature::FiniteAbelian(vec![2])));
            }
            other => panic!("unexpected atoms {other:?}"),
        }

        assert_eq!(report_pu_stable(&grp("K4"), &cfg).unwrap().component_count(), 2);
        assert_eq!(report_pu_stable(&grp("C3"), &cfg).unwrap().component_count(), 1);
    }
}
