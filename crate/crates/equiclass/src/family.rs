//! Families of local representations for a pair (Γ, G): pairwise
//! intersection, closure under the three family axioms, the associated
//! family of graph subgroups of Γ×G, and compatibility with Γ-sets.
//!
//! A pair is a subgroup H ≤ Γ together with a homomorphism α: H → G; the
//! `GroupHom` type already carries both, so it doubles as the pair type.

use std::collections::{BTreeMap, VecDeque};

use crate::bundle::GammaSet;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::{
    conjugate_hom, gamma_conjugate_hom, graph_subgroup, GroupHom, GroupRef, ProductGroup,
    Subgroup,
};

/// A local representation pair (H, α): the homomorphism carries its source
/// subgroup.
pub type LocalRepPair = GroupHom;

/// Canonical dedup key: (sorted member list, image table).
fn pair_key(p: &LocalRepPair) -> (Vec<usize>, Vec<usize>) {
    (p.source().members().to_vec(), p.image_table().to_vec())
}

/// A duplicate-free set of local representation pairs over one (Γ, G),
/// kept in canonical key order. The `closed` flag records that the three
/// closure axioms have been verified (or established by construction).
#[derive(Clone, Debug)]
pub struct LocalRepFamily {
    gamma: GroupRef,
    g: GroupRef,
    pairs: Vec<LocalRepPair>,
    closed: bool,
}

impl LocalRepFamily {
    pub fn gamma(&self) -> &GroupRef {
        &self.gamma
    }

    pub fn g(&self) -> &GroupRef {
        &self.g
    }

    pub fn pairs(&self) -> &[LocalRepPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn contains(&self, p: &LocalRepPair) -> bool {
        let key = pair_key(p);
        self.pairs
            .binary_search_by(|q| pair_key(q).cmp(&key))
            .is_ok()
    }

    /// Wrap an explicit pair set, verifying the closure axioms.
    pub fn from_closed_set(
        gamma: GroupRef,
        g: GroupRef,
        pairs: Vec<LocalRepPair>,
    ) -> Result<LocalRepFamily> {
        let mut fam = LocalRepFamily::collect(gamma, g, pairs);
        fam.verify_closed()?;
        fam.closed = true;
        Ok(fam)
    }

    fn collect(gamma: GroupRef, g: GroupRef, pairs: Vec<LocalRepPair>) -> LocalRepFamily {
        let mut map: BTreeMap<(Vec<usize>, Vec<usize>), LocalRepPair> = BTreeMap::new();
        for p in pairs {
            map.insert(pair_key(&p), p);
        }
        LocalRepFamily {
            gamma,
            g,
            pairs: map.into_values().collect(),
            closed: false,
        }
    }

    /// Check the three axioms; error pinpoints the first violation.
    fn verify_closed(&self) -> Result<()> {
        for p in &self.pairs {
            for ge in self.g.elements() {
                if !self.contains(&conjugate_hom(ge, p)) {
                    return Err(Error::NotClosed(format!(
                        "missing G-conjugate by {ge} of pair on {:?}",
                        p.source().members()
                    )));
                }
            }
            for ga in self.gamma.elements() {
                if !self.contains(&gamma_conjugate_hom(ga, p)) {
                    return Err(Error::NotClosed(format!(
                        "missing Γ-conjugate by {ga} of pair on {:?}",
                        p.source().members()
                    )));
                }
            }
            for q in &self.pairs {
                if !self.contains(&intersect_pairs(p, q)) {
                    return Err(Error::NotClosed(format!(
                        "missing intersection of pairs on {:?} and {:?}",
                        p.source().members(),
                        q.source().members()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Agreement pair: H = {h ∈ H₀ ∩ H₁ | α₀(h) = α₁(h)} with the common
/// restriction. The result can be the trivial pair.
pub fn intersect_pairs(p0: &LocalRepPair, p1: &LocalRepPair) -> LocalRepPair {
    let members: Vec<usize> = p0
        .source()
        .members()
        .iter()
        .copied()
        .filter(|&h| p1.source().contains(h) && p0.apply(h) == p1.apply(h))
        .collect();
    // The agreement set is a subgroup: it is the equalizer of two
    // homomorphisms on H₀ ∩ H₁.
    let sub = Subgroup::new(p0.source().parent().clone(), members)
        .expect("agreement set is always a subgroup");
    let images = sub.members().iter().map(|&h| p0.apply(h)).collect();
    GroupHom::new(sub, p0.target().clone(), images).expect("restriction of a hom is a hom")
}

/// Least fixed point of the seed set under pairwise intersection,
/// conjugation in G and conjugation in Γ. Deterministic FIFO worklist.
pub fn close_family(
    gamma: GroupRef,
    g: GroupRef,
    seed: &[LocalRepPair],
    config: &Config,
) -> Result<LocalRepFamily> {
    let mut map: BTreeMap<(Vec<usize>, Vec<usize>), LocalRepPair> = BTreeMap::new();
    let mut list: Vec<LocalRepPair> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let push = |p: LocalRepPair,
                    map: &mut BTreeMap<(Vec<usize>, Vec<usize>), LocalRepPair>,
                    list: &mut Vec<LocalRepPair>,
                    queue: &mut VecDeque<usize>|
     -> Result<()> {
        let key = pair_key(&p);
        if !map.contains_key(&key) {
            if list.len() + 1 > config.closure_pair_cap {
                return Err(Error::OrderOverflow {
                    what: "family closure".into(),
                    limit: config.closure_pair_cap,
                    actual: list.len() + 1,
                });
            }
            map.insert(key, p.clone());
            queue.push_back(list.len());
            list.push(p);
        }
        Ok(())
    };
    for p in seed {
        push(p.clone(), &mut map, &mut list, &mut queue)?;
    }
    while let Some(i) = queue.pop_front() {
        let p = list[i].clone();
        for ge in g.elements() {
            push(conjugate_hom(ge, &p), &mut map, &mut list, &mut queue)?;
        }
        for ga in gamma.elements() {
            push(gamma_conjugate_hom(ga, &p), &mut map, &mut list, &mut queue)?;
        }
        // Pairs appended later intersect against everything known when they
        // are processed, so every unordered pair is covered once.
        let known = list.len();
        for j in 0..known {
            let q = list[j].clone();
            push(intersect_pairs(&p, &q), &mut map, &mut list, &mut queue)?;
        }
    }
    Ok(LocalRepFamily {
        gamma,
        g,
        pairs: map.into_values().collect(),
        closed: true,
    })
}

/// The associated family of subgroups F(R) = {K(H,α)} of Γ×G, deduplicated
/// and sorted. Closure of F(R) under conjugation and pairwise intersection
/// is asserted.
pub fn family_of_subgroups(family: &LocalRepFamily, config: &Config) -> Result<Vec<Subgroup>> {
    if !family.is_closed() {
        return Err(Error::NotClosed("family_of_subgroups needs a closed family".into()));
    }
    let prod = ProductGroup::new(family.gamma.clone(), family.g.clone(), config)?;
    let mut graphs: Vec<Subgroup> = family
        .pairs
        .iter()
        .map(|p| graph_subgroup(&prod, p))
        .collect();
    graphs.sort_by(|a, b| a.members().cmp(b.members()));
    graphs.dedup_by(|a, b| a.members() == b.members());
    let member_sets: Vec<&[usize]> = graphs.iter().map(|s| s.members()).collect();
    let contains = |m: &Vec<usize>| member_sets.binary_search(&m.as_slice()).is_ok();
    for k in &graphs {
        for x in prod.group.elements() {
            let mut conj: Vec<usize> = k
                .members()
                .iter()
                .map(|&m| prod.group.conj(prod.group.inv(x), m))
                .collect();
            conj.sort_unstable();
            debug_assert!(contains(&conj), "graph family not conjugation-closed");
            if !contains(&conj) {
                return Err(Error::NotClosed("graph family not conjugation-closed".into()));
            }
        }
        for l in &graphs {
            let inter: Vec<usize> = k
                .members()
                .iter()
                .copied()
                .filter(|m| l.contains(*m))
                .collect();
            if !contains(&inter) {
                return Err(Error::NotClosed("graph family not intersection-closed".into()));
            }
        }
    }
    Ok(graphs)
}

/// R(F): every pair (H, α) with H in the subgroup family F and α arbitrary.
/// F must be closed under conjugation and intersection, and the induced set
/// of pairs must itself be closed (agreement subgroups can escape F
/// otherwise — e.g. F = {C4, {e}} inside Γ = C4 with G = C2).
pub fn family_from_subgroup_family(
    gamma: GroupRef,
    subgroup_family: &[Subgroup],
    g: GroupRef,
    config: &Config,
) -> Result<LocalRepFamily> {
    let keys: Vec<Vec<usize>> = {
        let mut k: Vec<Vec<usize>> = subgroup_family
            .iter()
            .map(|s| s.members().to_vec())
            .collect();
        k.sort();
        k.dedup();
        k
    };
    let has = |m: &Vec<usize>| keys.binary_search(m).is_ok();
    for s in subgroup_family {
        for ga in gamma.elements() {
            let conj = s.conjugated(ga);
            if !has(&conj.members().to_vec()) {
                return Err(Error::NotAFamily(format!(
                    "subgroup family misses conjugate of {:?} by {ga}",
                    s.members()
                )));
            }
        }
        for t in subgroup_family {
            let inter = s.intersection(t);
            if !has(&inter.members().to_vec()) {
                return Err(Error::NotAFamily(format!(
                    "subgroup family misses intersection of {:?} and {:?}",
                    s.members(),
                    t.members()
                )));
            }
        }
    }
    let mut pairs = Vec::new();
    for s in subgroup_family {
        for hom in crate::group::enumerate_homs(s, &g, config)? {
            pairs.push(hom);
        }
    }
    let fam = LocalRepFamily::collect(gamma, g, pairs);
    match fam.verify_closed() {
        Ok(()) => Ok(LocalRepFamily { closed: true, ..fam }),
        Err(Error::NotClosed(msg)) => Err(Error::NotAFamily(format!(
            "induced pair set is not closed ({msg}); an agreement subgroup escapes F"
        ))),
        Err(e) => Err(e),
    }
}

/// True iff for every point x and every (H, α) ∈ R with Γ_x ⊆ H the
/// restricted pair (Γ_x, α|_{Γ_x}) lies in R again.
pub fn is_compatible(family: &LocalRepFamily, x: &GammaSet) -> bool {
    debug_assert!(family.is_closed());
    for point in 0..x.size() {
        let isotropy = x.isotropy(point);
        for p in &family.pairs {
            if isotropy.is_subset_of(p.source()) && !family.contains(&p.restricted_to(&isotropy)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_homs, make_group, subgroups};
    use std::sync::Arc;

    fn cfg() -> Config {
        Config::default()
    }

    fn g(spec: &str) -> GroupRef {
        Arc::new(make_group(spec, &cfg()).unwrap())
    }

    fn all_pairs(gamma: &GroupRef, target: &GroupRef) -> Vec<LocalRepPair> {
        let mut out = Vec::new();
        for sub in subgroups(gamma, &cfg()).unwrap() {
            out.extend(enumerate_homs(&sub, target, &cfg()).unwrap());
        }
        out
    }

    #[test]
    fn intersect_idempotent_and_disagreement() {
        let c2 = g("C2");
        let homs = enumerate_homs(&c2.full_subgroup(), &c2, &cfg()).unwrap();
        assert_eq!(homs.len(), 2);
        let same = intersect_pairs(&homs[1], &homs[1]);
        assert_eq!(same.image_table(), homs[1].image_table());
        let diff = intersect_pairs(&homs[0], &homs[1]);
        assert_eq!(diff.source().members(), &[0]);
    }

    #[test]
    fn intersect_agreement_scan_c4() {
        // In Γ = C4, G = C2: the mod-2 surjection kills the even part, so
        // against the nontrivial hom on {0,2} only the identity survives,
        // while against the trivial hom the whole even part agrees.
        let c4 = g("C4");
        let c2 = g("C2");
        let full = c4.full_subgroup();
        let surj = GroupHom::new(full.clone(), c2.clone(), vec![0, 1, 0, 1]).unwrap();
        let sub2 = Subgroup::new(c4.clone(), vec![0, 2]).unwrap();
        let nontriv = GroupHom::new(sub2, c2.clone(), vec![0, 1]).unwrap();
        let inter = intersect_pairs(&surj, &nontriv);
        assert_eq!(inter.source().members(), &[0]);
        let triv_on_sub = GroupHom::new(
            Subgroup::new(c4.clone(), vec![0, 2]).unwrap(),
            c2.clone(),
            vec![0, 0],
        )
        .unwrap();
        let inter2 = intersect_pairs(&surj, &triv_on_sub);
        assert_eq!(inter2.source().members(), &[0, 2]);
        assert!(inter2.image_table().iter().all(|&x| x == 0));
        // Same maps on the same subgroup agree everywhere.
        let surj_restr = surj.restricted_to(&Subgroup::new(c4.clone(), vec![0, 2]).unwrap());
        assert_eq!(
            intersect_pairs(&surj, &surj_restr).source().members(),
            &[0, 2]
        );
    }

    #[test]
    fn closure_of_sign_pair_in_s3() {
        let s3 = g("S3");
        let c2 = g("C2");
        let transposition_subs: Vec<Subgroup> = subgroups(&s3, &cfg())
            .unwrap()
            .into_iter()
            .filter(|s| s.order() == 2)
            .collect();
        assert_eq!(transposition_subs.len(), 3);
        let seed =
            GroupHom::new(transposition_subs[0].clone(), c2.clone(), vec![0, 1]).unwrap();
        let fam = close_family(s3.clone(), c2.clone(), &[seed], &cfg()).unwrap();
        assert_eq!(fam.len(), 4);
        for sub in &transposition_subs {
            let iso = GroupHom::new(sub.clone(), c2.clone(), vec![0, 1]).unwrap();
            assert!(fam.contains(&iso));
        }
        let trivial = GroupHom::trivial(s3.trivial_subgroup(), c2.clone());
        assert!(fam.contains(&trivial));
    }

    #[test]
    fn closure_fixes_closed_sets_and_empty() {
        let c2 = g("C2");
        let seed = all_pairs(&c2, &c2);
        let fam = close_family(c2.clone(), c2.clone(), &seed, &cfg()).unwrap();
        assert_eq!(fam.len(), seed.len());
        let again = close_family(
            c2.clone(),
            c2.clone(),
            &fam.pairs().to_vec(),
            &cfg(),
        )
        .unwrap();
        assert_eq!(again.len(), fam.len());
        let empty = close_family(c2.clone(), c2.clone(), &[], &cfg()).unwrap();
        assert!(empty.is_empty());
        assert!(empty.is_closed());
    }

    #[test]
    fn closure_monotone_union() {
        let s3 = g("S3");
        let c2 = g("C2");
        let pairs = all_pairs(&s3, &c2);
        let a = close_family(s3.clone(), c2.clone(), &pairs[2..3], &cfg()).unwrap();
        let b = close_family(s3.clone(), c2.clone(), &pairs[4..6], &cfg()).unwrap();
        let mut both = pairs[2..3].to_vec();
        both.extend_from_slice(&pairs[4..6]);
        let union = close_family(s3.clone(), c2.clone(), &both, &cfg()).unwrap();
        for p in a.pairs().iter().chain(b.pairs()) {
            assert!(union.contains(p));
        }
    }

    #[test]
    fn closure_cap() {
        let mut tight = cfg();
        tight.closure_pair_cap = 2;
        let s3 = g("S3");
        let c2 = g("C2");
        let sub = subgroups(&s3, &tight)
            .unwrap()
            .into_iter()
            .find(|s| s.order() == 2)
            .unwrap();
        let seed = GroupHom::new(sub, c2.clone(), vec![0, 1]).unwrap();
        assert!(matches!(
            close_family(s3, c2, &[seed], &tight),
            Err(Error::OrderOverflow { .. })
        ));
    }

    #[test]
    fn graph_family_examples() {
        let cfg = cfg();
        // R = {({e}, trivial)} → the trivial subgroup of Γ×G.
        let c2 = g("C2");
        let triv = GroupHom::trivial(c2.trivial_subgroup(), c2.clone());
        let fam = close_family(c2.clone(), c2.clone(), &[triv], &cfg).unwrap();
        let graphs = family_of_subgroups(&fam, &cfg).unwrap();
        assert_eq!(graphs.len(), 1);
        assert_eq!(graphs[0].members(), &[0]);
        // Closure of the diagonal pair: conjugation acts trivially (both
        // groups abelian) and self-intersection is idempotent, so the
        // closure is the diagonal alone.
        let idh = GroupHom::new(c2.full_subgroup(), c2.clone(), vec![0, 1]).unwrap();
        let fam = close_family(c2.clone(), c2.clone(), &[idh], &cfg).unwrap();
        let graphs = family_of_subgroups(&fam, &cfg).unwrap();
        let sets: Vec<&[usize]> = graphs.iter().map(|s| s.members()).collect();
        assert_eq!(sets, vec![&[0, 3][..]]);
    }

    #[test]
    fn graph_family_trivial_g() {
        // With G trivial, F(R) is the family of subgroups of Γ crossed with 1.
        let cfg = cfg();
        let s3 = g("S3");
        let c1 = g("C1");
        let subs = subgroups(&s3, &cfg).unwrap();
        let pairs: Vec<LocalRepPair> = subs
            .iter()
            .map(|s| GroupHom::trivial(s.clone(), c1.clone()))
            .collect();
        let fam = close_family(s3.clone(), c1.clone(), &pairs, &cfg).unwrap();
        let graphs = family_of_subgroups(&fam, &cfg).unwrap();
        assert_eq!(graphs.len(), subs.len());
        let as_sets = |list: &[Subgroup]| -> Vec<Vec<usize>> {
            let mut v: Vec<Vec<usize>> = list.iter().map(|s| s.members().to_vec()).collect();
            v.sort();
            v
        };
        assert_eq!(as_sets(&graphs), as_sets(&subs));
    }

    #[test]
    fn induced_family_counts() {
        let cfg = cfg();
        let c4 = g("C4");
        let c2 = g("C2");
        let subs = subgroups(&c4, &cfg).unwrap();
        let fam = family_from_subgroup_family(c4.clone(), &subs, c2.clone(), &cfg).unwrap();
        assert_eq!(fam.len(), 5);
        // Trivial subgroup family.
        let fam = family_from_subgroup_family(
            c4.clone(),
            &[c4.trivial_subgroup()],
            c2.clone(),
            &cfg,
        )
        .unwrap();
        assert_eq!(fam.len(), 1);
        // Trivial Γ: a single pair no matter the target.
        let c1 = g("C1");
        let s3 = g("S3");
        let fam =
            family_from_subgroup_family(c1.clone(), &subgroups(&c1, &cfg).unwrap(), s3, &cfg)
                .unwrap();
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn induced_family_rejects_escaping_agreements() {
        let cfg = cfg();
        let c4 = g("C4");
        let c2 = g("C2");
        // F = {C4, {e}} is conjugation- and intersection-closed, but the two
        // homs C4 → C2 agree exactly on the C2 inside C4, which escapes F.
        let f = vec![c4.full_subgroup(), c4.trivial_subgroup()];
        assert!(matches!(
            family_from_subgroup_family(c4.clone(), &f, c2.clone(), &cfg),
            Err(Error::NotAFamily(_))
        ));
        // A non-closed F is rejected outright.
        let sub2 = Subgroup::new(c4.clone(), vec![0, 2]).unwrap();
        assert!(matches!(
            family_from_subgroup_family(c4, &[sub2], c2, &cfg),
            Err(Error::NotAFamily(_))
        ));
    }

    #[test]
    fn subgroup_closed_seeds_stay_subgroup_closed() {
        let cfg = cfg();
        for (gs, ts) in [("C4", "C2"), ("S3", "C2")] {
            let gamma = g(gs);
            let target = g(ts);
            let seed = all_pairs(&gamma, &target);
            let fam = close_family(gamma.clone(), target.clone(), &seed, &cfg).unwrap();
            assert_eq!(fam.len(), seed.len());
            // F(R) is subgroup-closed: every subgroup of a graph subgroup is
            // again a graph subgroup in the family.
            let graphs = family_of_subgroups(&fam, &cfg).unwrap();
            let keys: Vec<&[usize]> = graphs.iter().map(|s| s.members()).collect();
            let prod = ProductGroup::new(gamma.clone(), target.clone(), &cfg).unwrap();
            for k in &graphs {
                let as_sub = Subgroup::new(prod.group.clone(), k.members().to_vec()).unwrap();
                for smaller in crate::group::subgroups(&prod.group, &cfg)
                    .unwrap()
                    .iter()
                    .filter(|s| s.is_subset_of(&as_sub))
                {
                    assert!(keys.binary_search(&smaller.members()).is_ok());
                }
            }
        }
    }
}
