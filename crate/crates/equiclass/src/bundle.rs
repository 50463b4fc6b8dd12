//! Finite bundle models: a set with a left Γ-action upstairs and downstairs,
//! a free right G-action on the total space whose orbits are exactly the
//! projection fibers, and the classification machinery built on top — local
//! representations, the correspondence with Γ×G-sets of graph isotropy, and
//! brute-force classification over a single orbit.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::family::{close_family, LocalRepFamily, LocalRepPair};
use crate::group::{
    conjugate_hom, enumerate_homs, gamma_conjugate_hom, graph_subgroup, hom_orbits, subgroups,
    FiniteGroup, GroupHom, GroupRef, ProductGroup, Subgroup,
};

fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    a.order() == b.order() && a.table_rows() == b.table_rows()
}

fn homs_equal(a: &GroupHom, b: &GroupHom) -> bool {
    a.source().members() == b.source().members() && a.image_table() == b.image_table()
}

/// A finite left Γ-set: points `0..size` with an action table.
#[derive(Clone, Debug)]
pub struct GammaSet {
    group: GroupRef,
    size: usize,
    table: Vec<usize>, // table[g * size + x] = g·x
}

impl GammaSet {
    pub fn new(group: GroupRef, size: usize, table: Vec<usize>) -> Result<GammaSet> {
        let n = group.order();
        if table.len() != n * size {
            return Err(Error::Mismatch(format!(
                "action table has {} entries, expected {}",
                table.len(),
                n * size
            )));
        }
        if table.iter().any(|&x| x >= size) {
            return Err(Error::Mismatch("action table entry out of range".into()));
        }
        let set = GammaSet { group, size, table };
        let g = &set.group;
        for x in 0..size {
            if set.act(g.identity(), x) != x {
                return Err(Error::Mismatch(format!(
                    "identity moves point {x}"
                )));
            }
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for x in 0..size {
                    if set.act(a, set.act(b, x)) != set.act(ab, x) {
                        return Err(Error::Mismatch(format!(
                            "action law fails at ({a}, {b}, {x})"
                        )));
                    }
                }
            }
        }
        Ok(set)
    }

    /// The action that fixes every point.
    pub fn trivial(group: GroupRef, size: usize) -> GammaSet {
        let table = (0..group.order()).flat_map(|_| 0..size).collect();
        GammaSet { group, size, table }
    }

    /// Left translation of the group on itself.
    pub fn translation(group: GroupRef) -> GammaSet {
        let n = group.order();
        let table = (0..n).flat_map(|g| (0..n).map(move |x| (g, x))).fold(
            Vec::with_capacity(n * n),
            |mut acc, (g, x)| {
                acc.push(group.mul(g, x));
                acc
            },
        );
        GammaSet {
            group,
            size: n,
            table,
        }
    }

    /// The coset space Γ/H with labels in least-element order.
    pub fn cosets(sub: &Subgroup) -> GammaSet {
        let group = sub.parent().clone();
        let labels = coset_labels(sub);
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        let cosets = sub.left_cosets();
        let mut table = Vec::with_capacity(group.order() * k);
        for g in group.elements() {
            for c in &cosets {
                table.push(labels[group.mul(g, c[0])]);
            }
        }
        GammaSet {
            group,
            size: k,
            table,
        }
    }

    /// Product set with the diagonal action; point (x, y) has index
    /// `x·|other| + y`.
    pub fn product(&self, other: &GammaSet) -> GammaSet {
        debug_assert!(same_group(&self.group, &other.group));
        let size = self.size * other.size;
        let mut table = Vec::with_capacity(self.group.order() * size);
        for g in self.group.elements() {
            for x in 0..self.size {
                for y in 0..other.size {
                    table.push(self.act(g, x) * other.size + other.act(g, y));
                }
            }
        }
        GammaSet {
            group: self.group.clone(),
            size,
            table,
        }
    }

    /// Disjoint union; the second carrier's points are offset by
    /// `self.size()`.
    pub fn disjoint_union(&self, other: &GammaSet) -> GammaSet {
        debug_assert!(same_group(&self.group, &other.group));
        let size = self.size + other.size;
        let mut table = Vec::with_capacity(self.group.order() * size);
        for g in self.group.elements() {
            for x in 0..self.size {
                table.push(self.act(g, x));
            }
            for y in 0..other.size {
                table.push(self.size + other.act(g, y));
            }
        }
        GammaSet {
            group: self.group.clone(),
            size,
            table,
        }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g * self.size + x]
    }

    /// Action table as rows indexed by group element.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.group.order())
            .map(|g| self.table[g * self.size..(g + 1) * self.size].to_vec())
            .collect()
    }

    /// The stabilizer subgroup of a point.
    pub fn isotropy(&self, x: usize) -> Subgroup {
        let members: Vec<usize> = self
            .group
            .elements()
            .filter(|&g| self.act(g, x) == x)
            .collect();
        Subgroup::new(self.group.clone(), members).expect("stabilizers are subgroups")
    }

    /// Orbits sorted by least element; each orbit ascending.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self
                .group
                .elements()
                .map(|g| self.act(g, x))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            orbit.iter().for_each(|&y| seen[y] = true);
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn is_free(&self) -> bool {
        (0..self.size).all(|x| self.isotropy(x).order() == 1)
    }

    /// Same acting group (by table) and identical action table.
    pub fn same_action(a: &GammaSet, b: &GammaSet) -> bool {
        same_group(&a.group, &b.group) && a.size == b.size && a.table == b.table
    }
}

/// For each element of the parent, the label of its left H-coset in
/// least-element order (matching [`GammaSet::cosets`]).
pub fn coset_labels(sub: &Subgroup) -> Vec<usize> {
    let n = sub.parent().order();
    let mut labels = vec![usize::MAX; n];
    for (i, coset) in sub.left_cosets().iter().enumerate() {
        for &x in coset {
            labels[x] = i;
        }
    }
    labels
}

/// An equivariant map between Γ-sets.
#[derive(Clone, Debug)]
pub struct GammaMap {
    domain: GammaSet,
    codomain: GammaSet,
    map: Vec<usize>,
}

impl GammaMap {
    pub fn new(domain: GammaSet, codomain: GammaSet, map: Vec<usize>) -> Result<GammaMap> {
        if !same_group(domain.group(), codomain.group()) {
            return Err(Error::Mismatch("map between sets of different groups".into()));
        }
        if map.len() != domain.size() || map.iter().any(|&y| y >= codomain.size()) {
            return Err(Error::Mismatch("map table has wrong shape".into()));
        }
        for g in domain.group().elements() {
            for x in 0..domain.size() {
                if map[domain.act(g, x)] != codomain.act(g, map[x]) {
                    return Err(Error::Mismatch(format!(
                        "map is not equivariant at ({g}, {x})"
                    )));
                }
            }
        }
        Ok(GammaMap {
            domain,
            codomain,
            map,
        })
    }

    pub fn identity(x: &GammaSet) -> GammaMap {
        GammaMap {
            domain: x.clone(),
            codomain: x.clone(),
            map: (0..x.size()).collect(),
        }
    }

    /// `self ∘ earlier` (apply `earlier` first).
    pub fn compose(&self, earlier: &GammaMap) -> Result<GammaMap> {
        if !GammaSet::same_action(&earlier.codomain, &self.domain) {
            return Err(Error::Mismatch("composition domains do not line up".into()));
        }
        let map = earlier.map.iter().map(|&x| self.map[x]).collect();
        GammaMap::new(earlier.domain.clone(), self.codomain.clone(), map)
    }

    pub fn domain(&self) -> &GammaSet {
        &self.domain
    }

    pub fn codomain(&self) -> &GammaSet {
        &self.codomain
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

/// Finite model of an equivariant principal bundle: commuting left Γ- and
/// free right G-actions on the total space, with fibers of the equivariant
/// surjection onto the base being exactly the right orbits.
#[derive(Clone, Debug)]
pub struct EquivariantBundle {
    gamma: GroupRef,
    g: GroupRef,
    total_size: usize,
    gamma_table: Vec<usize>, // [γ * total_size + e] = γ·e
    g_table: Vec<usize>,     // [a * total_size + e] = e·a
    base: GammaSet,
    proj: Vec<usize>,
}

impl EquivariantBundle {
    pub fn new(
        gamma: GroupRef,
        g: GroupRef,
        total_size: usize,
        gamma_table: Vec<usize>,
        g_table: Vec<usize>,
        base: GammaSet,
        proj: Vec<usize>,
    ) -> Result<EquivariantBundle> {
        if !same_group(&gamma, base.group()) {
            return Err(Error::Mismatch(
                "base is not a set over the same acting group".into(),
            ));
        }
        if gamma_table.len() != gamma.order() * total_size
            || g_table.len() != g.order() * total_size
            || proj.len() != total_size
        {
            return Err(Error::Mismatch("bundle tables have wrong shapes".into()));
        }
        if gamma_table.iter().chain(&g_table).any(|&x| x >= total_size)
            || proj.iter().any(|&b| b >= base.size())
        {
            return Err(Error::Mismatch("bundle table entry out of range".into()));
        }
        let p = EquivariantBundle {
            gamma,
            g,
            total_size,
            gamma_table,
            g_table,
            base,
            proj,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let gamma = &self.gamma;
        let g = &self.g;
        for e in 0..self.total_size {
            if self.act_gamma(gamma.identity(), e) != e || self.act_g(e, g.identity()) != e {
                return Err(Error::Mismatch(format!("identity moves total point {e}")));
            }
        }
        for a in gamma.elements() {
            for b in gamma.elements() {
                let ab = gamma.mul(a, b);
                for e in 0..self.total_size {
                    if self.act_gamma(a, self.act_gamma(b, e)) != self.act_gamma(ab, e) {
                        return Err(Error::Mismatch(format!(
                            "left action law fails at ({a}, {b}, {e})"
                        )));
                    }
                }
            }
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for e in 0..self.total_size {
                    if self.act_g(self.act_g(e, a), b) != self.act_g(e, ab) {
                        return Err(Error::Mismatch(format!(
                            "right action law fails at ({a}, {b}, {e})"
                        )));
                    }
                }
            }
        }
        for gm in gamma.elements() {
            for a in g.elements() {
                for e in 0..self.total_size {
                    if self.act_g(self.act_gamma(gm, e), a)
                        != self.act_gamma(gm, self.act_g(e, a))
                    {
                        return Err(Error::Mismatch(format!(
                            "actions do not commute at ({gm}, {a}, {e})"
                        )));
                    }
                }
            }
        }
        for e in 0..self.total_size {
            for a in g.elements() {
                if a != g.identity() && self.act_g(e, a) == e {
                    return Err(Error::NotFree { point: e });
                }
            }
        }
        for gm in gamma.elements() {
            for e in 0..self.total_size {
                if self.proj[self.act_gamma(gm, e)] != self.base.act(gm, self.proj[e]) {
                    return Err(Error::Mismatch(format!(
                        "projection is not equivariant at ({gm}, {e})"
                    )));
                }
            }
        }
        // Fibers must be single right orbits: the right action is free, so
        // each orbit has |G| points; it suffices that proj is constant on
        // orbits and that every base point is hit exactly |G| times.
        for e in 0..self.total_size {
            for a in g.elements() {
                if self.proj[self.act_g(e, a)] != self.proj[e] {
                    return Err(Error::Mismatch(format!(
                        "fiber of point {e} is not a single orbit"
                    )));
                }
            }
        }
        let mut hits = vec![0usize; self.base.size()];
        for &b in &self.proj {
            hits[b] += 1;
        }
        if hits.iter().any(|&h| h != g.order()) {
            return Err(Error::Mismatch(
                "projection is not surjective with single-orbit fibers".into(),
            ));
        }
        Ok(())
    }

    pub fn gamma(&self) -> &GroupRef {
        &self.gamma
    }

    pub fn g(&self) -> &GroupRef {
        &self.g
    }

    pub fn total_size(&self) -> usize {
        self.total_size
    }

    pub fn base(&self) -> &GammaSet {
        &self.base
    }

    #[inline]
    pub fn act_gamma(&self, gm: usize, e: usize) -> usize {
        self.gamma_table[gm * self.total_size + e]
    }

    #[inline]
    pub fn act_g(&self, e: usize, a: usize) -> usize {
        self.g_table[a * self.total_size + e]
    }

    pub fn proj(&self, e: usize) -> usize {
        self.proj[e]
    }

    pub fn gamma_rows(&self) -> Vec<Vec<usize>> {
        (0..self.gamma.order())
            .map(|gm| self.gamma_table[gm * self.total_size..(gm + 1) * self.total_size].to_vec())
            .collect()
    }

    pub fn g_rows(&self) -> Vec<Vec<usize>> {
        (0..self.g.order())
            .map(|a| self.g_table[a * self.total_size..(a + 1) * self.total_size].to_vec())
            .collect()
    }

    pub fn proj_table(&self) -> &[usize] {
        &self.proj
    }

    /// Points of the fiber over a base point, ascending.
    pub fn fiber(&self, b: usize) -> Vec<usize> {
        (0..self.total_size).filter(|&e| self.proj[e] == b).collect()
    }

    /// The local representation at a total point: the isotropy group of the
    /// point below, mapped into G by `γ·e = e·ρ(γ)`.
    pub fn local_rep_at(&self, e: usize) -> Result<LocalRepPair> {
        let iso = self.base.isotropy(self.proj[e]);
        let mut images = Vec::with_capacity(iso.order());
        for &gm in iso.members() {
            let moved = self.act_gamma(gm, e);
            let mut found = None;
            for a in self.g.elements() {
                if self.act_g(e, a) == moved {
                    if found.is_some() {
                        return Err(Error::NotFree { point: e });
                    }
                    found = Some(a);
                }
            }
            match found {
                Some(a) => images.push(a),
                None => return Err(Error::NotFree { point: e }),
            }
        }
        GroupHom::new(iso, self.g.clone(), images)
    }

    /// The raw set of local representations, one per total point, deduped.
    pub fn prefamily(&self) -> Result<Vec<LocalRepPair>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in 0..self.total_size {
            let rep = self.local_rep_at(e)?;
            if seen.insert((rep.source().members().to_vec(), rep.image_table().to_vec())) {
                out.push(rep);
            }
        }
        Ok(out)
    }
}

/// The closed family generated by a bundle's local representations, together
/// with the raw prefamily it was closed from.
pub fn family_of_bundle(
    p: &EquivariantBundle,
    config: &Config,
) -> Result<(LocalRepFamily, Vec<LocalRepPair>)> {
    let pre = p.prefamily()?;
    let fam = close_family(p.gamma().clone(), p.g().clone(), &pre, config)?;
    Ok((fam, pre))
}

/// Minimal union-find keeping the least element of each class as its root.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// The bundle over Γ/H induced by α: H → G: the quotient of Γ×G identifying
/// (γ, x) with (γh⁻¹, α(h)x). Total point 0 is the class of (identity,
/// identity), where the local representation is α itself.
pub fn bundle_over_orbit(alpha: &GroupHom) -> Result<EquivariantBundle> {
    let h = alpha.source();
    let gamma = h.parent().clone();
    let g = alpha.target().clone();
    let n = gamma.order();
    let m = g.order();
    let mut uf = UnionFind::new(n * m);
    for gm in 0..n {
        for x in 0..m {
            for (pos, &hh) in h.members().iter().enumerate() {
                let ah = alpha.image_table()[pos];
                let j = gamma.mul(gm, gamma.inv(hh)) * m + g.mul(ah, x);
                uf.union(gm * m + x, j);
            }
        }
    }
    let mut labels = vec![usize::MAX; n * m];
    let mut reps = Vec::new();
    for i in 0..n * m {
        if uf.find(i) == i {
            labels[i] = reps.len();
            reps.push(i);
        }
    }
    let total = reps.len();
    let class = |uf: &mut UnionFind, gm: usize, x: usize| labels[uf.find(gm * m + x)];
    let mut gamma_table = Vec::with_capacity(n * total);
    for gm in 0..n {
        for &r in &reps {
            let (rg, rx) = (r / m, r % m);
            gamma_table.push(class(&mut uf, gamma.mul(gm, rg), rx));
        }
    }
    let mut g_table = Vec::with_capacity(m * total);
    for a in 0..m {
        for &r in &reps {
            let (rg, rx) = (r / m, r % m);
            g_table.push(class(&mut uf, rg, g.mul(rx, a)));
        }
    }
    let base = GammaSet::cosets(h);
    let clabels = coset_labels(h);
    let proj = reps.iter().map(|&r| clabels[r / m]).collect();
    EquivariantBundle::new(gamma, g, total, gamma_table, g_table, base, proj)
}

/// The bundle over Γ/H × Z induced by a slice-wise assignment σ: Z →
/// hom(H, G): the quotient of Γ×Z×G identifying (γ, z, x) with
/// (γh⁻¹, z, σ(z)(h)x).
pub fn bundle_p_sigma(sigmas: &[GroupHom]) -> Result<EquivariantBundle> {
    if sigmas.is_empty() {
        return Err(Error::Mismatch("empty slice assignment".into()));
    }
    let h = sigmas[0].source();
    let gamma = h.parent().clone();
    let g = sigmas[0].target().clone();
    for s in sigmas {
        if s.source().members() != h.members() || !same_group(s.target(), &g) {
            return Err(Error::Mismatch(
                "slice assignments must share one subgroup and target".into(),
            ));
        }
    }
    let n = gamma.order();
    let m = g.order();
    let zs = sigmas.len();
    let idx = |gm: usize, z: usize, x: usize| (gm * zs + z) * m + x;
    let mut uf = UnionFind::new(n * zs * m);
    for gm in 0..n {
        for z in 0..zs {
            for x in 0..m {
                for (pos, &hh) in h.members().iter().enumerate() {
                    let ah = sigmas[z].image_table()[pos];
                    uf.union(
                        idx(gm, z, x),
                        idx(gamma.mul(gm, gamma.inv(hh)), z, g.mul(ah, x)),
                    );
                }
            }
        }
    }
    let mut labels = vec![usize::MAX; n * zs * m];
    let mut reps = Vec::new();
    for i in 0..n * zs * m {
        if uf.find(i) == i {
            labels[i] = reps.len();
            reps.push(i);
        }
    }
    let total = reps.len();
    let split = |r: usize| (r / (zs * m), (r / m) % zs, r % m);
    let mut gamma_table = Vec::with_capacity(n * total);
    for gm in 0..n {
        for &r in &reps {
            let (rg, rz, rx) = split(r);
            gamma_table.push(labels[uf.find(idx(gamma.mul(gm, rg), rz, rx))]);
        }
    }
    let mut g_table = Vec::with_capacity(m * total);
    for a in 0..m {
        for &r in &reps {
            let (rg, rz, rx) = split(r);
            g_table.push(labels[uf.find(idx(rg, rz, g.mul(rx, a)))]);
        }
    }
    let base = GammaSet::cosets(h).product(&GammaSet::trivial(gamma.clone(), zs));
    let clabels = coset_labels(h);
    let proj = reps
        .iter()
        .map(|&r| {
            let (rg, rz, _) = split(r);
            clabels[rg] * zs + rz
        })
        .collect();
    let p = EquivariantBundle::new(gamma, g, total, gamma_table, g_table, base, proj)?;
    // At the class of (γ, z, x) the isotropy downstairs is γHγ⁻¹ and the
    // local representation sends γhγ⁻¹ to x⁻¹σ(z)(h)x.
    #[cfg(debug_assertions)]
    for (label, &r) in reps.iter().enumerate() {
        let (rg, rz, rx) = split(r);
        let expected = gamma_conjugate_hom(rg, &conjugate_hom(rx, &sigmas[rz]));
        let got = p.local_rep_at(label)?;
        debug_assert!(homs_equal(&expected, &got));
    }
    Ok(p)
}

/// True iff there is ω: Z → G conjugating one slice assignment into the
/// other pointwise: σ₁(z) = ω(z)·σ₀(z)(−)·ω(z)⁻¹ for every z.
pub fn pointwise_conjugate(s0: &[GroupHom], s1: &[GroupHom]) -> bool {
    if s0.len() != s1.len() {
        return false;
    }
    s0.iter().zip(s1).all(|(a, b)| {
        a.target()
            .elements()
            .any(|w| homs_equal(&conjugate_hom(a.target().inv(w), a), b))
    })
}

/// The product bundle base × G with untwisted actions.
pub fn trivial_bundle(base: &GammaSet, g: &GroupRef) -> EquivariantBundle {
    let m = g.order();
    let total = base.size() * m;
    let mut gamma_table = Vec::with_capacity(base.group().order() * total);
    for gm in base.group().elements() {
        for b in 0..base.size() {
            for x in 0..m {
                gamma_table.push(base.act(gm, b) * m + x);
            }
        }
    }
    let mut g_table = Vec::with_capacity(m * total);
    for a in g.elements() {
        for b in 0..base.size() {
            for x in 0..m {
                g_table.push(b * m + g.mul(x, a));
            }
        }
    }
    let proj = (0..total).map(|e| e / m).collect();
    EquivariantBundle::new(
        base.group().clone(),
        g.clone(),
        total,
        gamma_table,
        g_table,
        base.clone(),
        proj,
    )
    .expect("product bundle is valid")
}

/// Disjoint union of bundles over the disjoint union of bases.
pub fn disjoint_union_bundles(
    p0: &EquivariantBundle,
    p1: &EquivariantBundle,
) -> Result<EquivariantBundle> {
    if !same_group(p0.gamma(), p1.gamma()) || !same_group(p0.g(), p1.g()) {
        return Err(Error::Mismatch("disjoint union across different groups".into()));
    }
    let base = p0.base().disjoint_union(p1.base());
    let t0 = p0.total_size();
    let total = t0 + p1.total_size();
    let mut gamma_table = Vec::with_capacity(p0.gamma().order() * total);
    for gm in p0.gamma().elements() {
        for e in 0..t0 {
            gamma_table.push(p0.act_gamma(gm, e));
        }
        for e in 0..p1.total_size() {
            gamma_table.push(t0 + p1.act_gamma(gm, e));
        }
    }
    let mut g_table = Vec::with_capacity(p0.g().order() * total);
    for a in p0.g().elements() {
        for e in 0..t0 {
            g_table.push(p0.act_g(e, a));
        }
        for e in 0..p1.total_size() {
            g_table.push(t0 + p1.act_g(e, a));
        }
    }
    let mut proj: Vec<usize> = p0.proj_table().to_vec();
    proj.extend(p1.proj_table().iter().map(|&b| p0.base().size() + b));
    EquivariantBundle::new(
        p0.gamma().clone(),
        p0.g().clone(),
        total,
        gamma_table,
        g_table,
        base,
        proj,
    )
}

/// Pull a bundle back along an equivariant map into its base. Total points
/// are the pairs (x, e) with f(x) = p(e), ordered lexicographically.
pub fn pullback(f: &GammaMap, p: &EquivariantBundle) -> Result<EquivariantBundle> {
    if !GammaSet::same_action(f.codomain(), p.base()) {
        return Err(Error::Mismatch("map does not land in the bundle's base".into()));
    }
    let mut points: Vec<(usize, usize)> = Vec::new();
    for x in 0..f.domain().size() {
        for e in 0..p.total_size() {
            if f.apply(x) == p.proj(e) {
                points.push((x, e));
            }
        }
    }
    let lookup = |x: usize, e: usize| points.binary_search(&(x, e)).expect("closed under actions");
    let total = points.len();
    let gamma = p.gamma().clone();
    let g = p.g().clone();
    let mut gamma_table = Vec::with_capacity(gamma.order() * total);
    for gm in gamma.elements() {
        for &(x, e) in &points {
            gamma_table.push(lookup(f.domain().act(gm, x), p.act_gamma(gm, e)));
        }
    }
    let mut g_table = Vec::with_capacity(g.order() * total);
    for a in g.elements() {
        for &(x, e) in &points {
            g_table.push(lookup(x, p.act_g(e, a)));
        }
    }
    let proj = points.iter().map(|&(x, _)| x).collect();
    EquivariantBundle::new(
        gamma,
        g,
        total,
        gamma_table,
        g_table,
        f.domain().clone(),
        proj,
    )
}

/// A left Γ×G-set presented over an explicit product group.
#[derive(Clone, Debug)]
pub struct GammaGSet {
    pub product: ProductGroup,
    pub carrier: GammaSet,
}

/// Collapse a bundle's two actions into a single left Γ×G-action on the
/// total points: (γ, a)·e := γ·e·a⁻¹.
pub fn to_gamma_g_set(p: &EquivariantBundle, config: &Config) -> Result<GammaGSet> {
    let product = ProductGroup::new(p.gamma().clone(), p.g().clone(), config)?;
    let total = p.total_size();
    let mut table = Vec::with_capacity(product.group.order() * total);
    for t in product.group.elements() {
        let (gm, a) = product.unpair(t);
        let ai = p.g().inv(a);
        for e in 0..total {
            table.push(p.act_g(p.act_gamma(gm, e), ai));
        }
    }
    let carrier = GammaSet::new(product.group.clone(), total, table)?;
    Ok(GammaGSet { product, carrier })
}

/// Rebuild a bundle from a Γ×G-set: Γ acts through (γ, 1), the right
/// G-action is x·a := (1, a⁻¹)·x, and the base is the space of right
/// orbits. Fails with `BadIsotropy` at the least point whose stabilizer
/// meets {1}×G nontrivially (the right action is not free there, so the
/// stabilizer is not the graph of a homomorphism).
pub fn from_gamma_g_set(e: &GammaGSet) -> Result<EquivariantBundle> {
    let gamma = e.product.left.clone();
    let g = e.product.right.clone();
    let size = e.carrier.size();
    for x in 0..size {
        for a in g.elements() {
            if a != g.identity() && e.carrier.act(e.product.pair(gamma.identity(), a), x) == x {
                return Err(Error::BadIsotropy { point: x });
            }
        }
    }
    let mut gamma_table = Vec::with_capacity(gamma.order() * size);
    for gm in gamma.elements() {
        let t = e.product.pair(gm, g.identity());
        for x in 0..size {
            gamma_table.push(e.carrier.act(t, x));
        }
    }
    let mut g_table = Vec::with_capacity(g.order() * size);
    for a in g.elements() {
        let t = e.product.pair(gamma.identity(), g.inv(a));
        for x in 0..size {
            g_table.push(e.carrier.act(t, x));
        }
    }
    let right = |x: usize, a: usize| g_table[a * size + x];
    let mut orbit_id = vec![usize::MAX; size];
    let mut reps = Vec::new();
    for x in 0..size {
        if orbit_id[x] != usize::MAX {
            continue;
        }
        let label = reps.len();
        reps.push(x);
        for a in g.elements() {
            orbit_id[right(x, a)] = label;
        }
    }
    let k = reps.len();
    let mut base_table = Vec::with_capacity(gamma.order() * k);
    for gm in gamma.elements() {
        for &r in &reps {
            base_table.push(orbit_id[gamma_table[gm * size + r]]);
        }
    }
    let base = GammaSet::new(gamma.clone(), k, base_table)?;
    EquivariantBundle::new(gamma, g, size, gamma_table, g_table, base, orbit_id)
}

/// Lexicographically least conjugate of a member set, used as the
/// conjugacy-class key of an isotropy group.
fn canonical_subgroup_form(group: &FiniteGroup, members: &[usize]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for t in group.elements() {
        let mut image: Vec<usize> = members.iter().map(|&k| group.conj(t, k)).collect();
        image.sort_unstable();
        if best.as_ref().map_or(true, |b| image < *b) {
            best = Some(image);
        }
    }
    best.unwrap_or_default()
}

/// Isomorphism of Γ×G-sets: orbits matched through conjugacy classes of
/// their isotropy groups.
pub fn gamma_g_sets_isomorphic(a: &GammaGSet, b: &GammaGSet) -> bool {
    if !same_group(&a.product.group, &b.product.group) {
        return false;
    }
    if a.carrier.size() != b.carrier.size() {
        return false;
    }
    let signature = |s: &GammaGSet| -> Vec<Vec<usize>> {
        let mut sig: Vec<Vec<usize>> = s
            .carrier
            .orbits()
            .iter()
            .map(|orbit| {
                canonical_subgroup_form(
                    &s.product.group,
                    s.carrier.isotropy(orbit[0]).members(),
                )
            })
            .collect();
        sig.sort();
        sig
    };
    signature(a) == signature(b)
}

/// The orbit Γ×G / K(H, α) as a Γ×G-set.
pub fn graph_orbit_set(product: &ProductGroup, hom: &GroupHom) -> GammaGSet {
    let k = graph_subgroup(product, hom);
    GammaGSet {
        product: product.clone(),
        carrier: GammaSet::cosets(&k),
    }
}

pub fn disjoint_union_sets(a: &GammaGSet, b: &GammaGSet) -> Result<GammaGSet> {
    if !same_group(&a.product.group, &b.product.group) {
        return Err(Error::Mismatch("disjoint union across different groups".into()));
    }
    Ok(GammaGSet {
        product: a.product.clone(),
        carrier: a.carrier.disjoint_union(&b.carrier),
    })
}

/// A random Γ×G-set with graph isotropy: a disjoint union of 1–3 orbits of
/// graph subgroups chosen uniformly from the subgroup and homomorphism
/// lists.
pub fn seeded_graph_set<R: Rng>(
    gamma: &GroupRef,
    g: &GroupRef,
    rng: &mut R,
    config: &Config,
) -> Result<GammaGSet> {
    let product = ProductGroup::new(gamma.clone(), g.clone(), config)?;
    let subs = subgroups(gamma, config)?;
    let pieces = rng.random_range(1..=3);
    let mut out: Option<GammaGSet> = None;
    for _ in 0..pieces {
        let sub = &subs[rng.random_range(0..subs.len())];
        let homs = enumerate_homs(sub, g, config)?;
        let hom = &homs[rng.random_range(0..homs.len())];
        let orbit = graph_orbit_set(&product, hom);
        out = Some(match out {
            None => orbit,
            Some(acc) => disjoint_union_sets(&acc, &orbit)?,
        });
    }
    Ok(out.expect("at least one piece"))
}

/// A random test bundle: a disjoint union of 1–3 orbit bundles with the
/// total points shuffled afterwards.
pub fn seeded_bundle<R: Rng>(
    gamma: &GroupRef,
    g: &GroupRef,
    rng: &mut R,
    config: &Config,
) -> Result<EquivariantBundle> {
    let subs = subgroups(gamma, config)?;
    let pieces = rng.random_range(1..=3);
    let mut out: Option<EquivariantBundle> = None;
    for _ in 0..pieces {
        let sub = &subs[rng.random_range(0..subs.len())];
        let homs = enumerate_homs(sub, g, config)?;
        let piece = bundle_over_orbit(&homs[rng.random_range(0..homs.len())])?;
        out = Some(match out {
            None => piece,
            Some(acc) => disjoint_union_bundles(&acc, &piece)?,
        });
    }
    Ok(shuffled(&out.expect("at least one piece"), rng))
}

/// The same bundle with total points renamed by a random permutation (the
/// base is left alone, so isomorphism over the identity still applies).
pub fn shuffled<R: Rng>(p: &EquivariantBundle, rng: &mut R) -> EquivariantBundle {
    let total = p.total_size();
    let mut pi: Vec<usize> = (0..total).collect();
    pi.shuffle(rng);
    let mut pinv = vec![0usize; total];
    for (e, &img) in pi.iter().enumerate() {
        pinv[img] = e;
    }
    let mut gamma_table = Vec::with_capacity(p.gamma().order() * total);
    for gm in p.gamma().elements() {
        for x in 0..total {
            gamma_table.push(pi[p.act_gamma(gm, pinv[x])]);
        }
    }
    let mut g_table = Vec::with_capacity(p.g().order() * total);
    for a in p.g().elements() {
        for x in 0..total {
            g_table.push(pi[p.act_g(pinv[x], a)]);
        }
    }
    let proj = (0..total).map(|x| p.proj(pinv[x])).collect();
    EquivariantBundle::new(
        p.gamma().clone(),
        p.g().clone(),
        total,
        gamma_table,
        g_table,
        p.base().clone(),
        proj,
    )
    .expect("relabeling preserves validity")
}

/// The same bundle presented over a relabeled copy of its base; `phi` must
/// be an equivariant bijection onto the new base.
pub fn relabel_base_to(
    p: &EquivariantBundle,
    new_base: &GammaSet,
    phi: &[usize],
) -> Result<EquivariantBundle> {
    if phi.len() != p.base().size() || new_base.size() != p.base().size() {
        return Err(Error::Mismatch("base relabeling has wrong size".into()));
    }
    let mut seen = vec![false; new_base.size()];
    for &b in phi {
        if b >= new_base.size() || seen[b] {
            return Err(Error::Mismatch("base relabeling is not a bijection".into()));
        }
        seen[b] = true;
    }
    for gm in p.gamma().elements() {
        for b in 0..p.base().size() {
            if phi[p.base().act(gm, b)] != new_base.act(gm, phi[b]) {
                return Err(Error::Mismatch("base relabeling is not equivariant".into()));
            }
        }
    }
    EquivariantBundle::new(
        p.gamma().clone(),
        p.g().clone(),
        p.total_size(),
        (0..p.gamma().order())
            .flat_map(|gm| (0..p.total_size()).map(move |e| (gm, e)))
            .map(|(gm, e)| p.act_gamma(gm, e))
            .collect(),
        (0..p.g().order())
            .flat_map(|a| (0..p.total_size()).map(move |e| (a, e)))
            .map(|(a, e)| p.act_g(e, a))
            .collect(),
        new_base.clone(),
        p.proj_table().iter().map(|&b| phi[b]).collect(),
    )
}

fn combined_orbits(p: &EquivariantBundle) -> (Vec<Vec<usize>>, Vec<usize>) {
    let total = p.total_size();
    let mut orbit_id = vec![usize::MAX; total];
    let mut orbits = Vec::new();
    for e in 0..total {
        if orbit_id[e] != usize::MAX {
            continue;
        }
        let label = orbits.len();
        let mut members = BTreeSet::new();
        for gm in p.gamma().elements() {
            for a in p.g().elements() {
                members.insert(p.act_g(p.act_gamma(gm, e), a));
            }
        }
        let orbit: Vec<usize> = members.into_iter().collect();
        for &x in &orbit {
            orbit_id[x] = label;
        }
        orbits.push(orbit);
    }
    (orbits, orbit_id)
}

fn combined_isotropy(p: &EquivariantBundle, e: usize) -> Vec<usize> {
    let m = p.g().order();
    let mut codes = Vec::new();
    for gm in p.gamma().elements() {
        for a in p.g().elements() {
            if p.act_g(p.act_gamma(gm, e), p.g().inv(a)) == e {
                codes.push(gm * m + a);
            }
        }
    }
    codes
}

/// True iff `f` is a total-space bijection commuting with both actions and
/// with the projections.
pub fn bundle_iso_is_valid(p0: &EquivariantBundle, p1: &EquivariantBundle, f: &[usize]) -> bool {
    if f.len() != p0.total_size() || p0.total_size() != p1.total_size() {
        return false;
    }
    let mut seen = vec![false; f.len()];
    for &y in f {
        if y >= f.len() || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    for e in 0..p0.total_size() {
        if p1.proj(f[e]) != p0.proj(e) {
            return false;
        }
        for gm in p0.gamma().elements() {
            if f[p0.act_gamma(gm, e)] != p1.act_gamma(gm, f[e]) {
                return false;
            }
        }
        for a in p0.g().elements() {
            if f[p0.act_g(e, a)] != p1.act_g(f[e], a) {
                return false;
            }
        }
    }
    true
}

/// Search for an isomorphism over the identity of the (shared) base: a
/// total-space bijection commuting with both actions and the projections.
/// Orbits of the combined Γ×G-action are matched by exact equality of
/// combined stabilizers at points over a common base point; a matching of
/// orbits assembles to an isomorphism because equal stabilizers make the
/// orbit map well-defined and projection-compatibility is automatic.
pub fn is_isomorphic(p0: &EquivariantBundle, p1: &EquivariantBundle) -> Option<Vec<usize>> {
    if !same_group(p0.gamma(), p1.gamma()) || !same_group(p0.g(), p1.g()) {
        return None;
    }
    if !GammaSet::same_action(p0.base(), p1.base()) {
        return None;
    }
    if p0.total_size() != p1.total_size() {
        return None;
    }
    let (orbits0, _) = combined_orbits(p0);
    let (orbits1, orbit_id1) = combined_orbits(p1);
    if orbits0.len() != orbits1.len() {
        return None;
    }
    // candidates[i] = (orbit of p1, chosen point) pairs that orbit i of p0
    // can map onto.
    let mut candidates: Vec<Vec<(usize, usize)>> = Vec::with_capacity(orbits0.len());
    for orbit in &orbits0 {
        let e = orbit[0];
        let iso0 = combined_isotropy(p0, e);
        let mut cands = Vec::new();
        let mut seen_orbits = BTreeSet::new();
        for y in p1.fiber(p0.proj(e)) {
            if seen_orbits.contains(&orbit_id1[y]) {
                continue;
            }
            if combined_isotropy(p1, y) == iso0 {
                seen_orbits.insert(orbit_id1[y]);
                cands.push((orbit_id1[y], y));
            }
        }
        if cands.is_empty() {
            return None;
        }
        candidates.push(cands);
    }
    let mut used = vec![false; orbits1.len()];
    let mut pick = vec![0usize; orbits0.len()];
    if !match_orbits(0, &candidates, &mut used, &mut pick) {
        return None;
    }
    let mut f = vec![usize::MAX; p0.total_size()];
    for (i, orbit) in orbits0.iter().enumerate() {
        let e = orbit[0];
        let y = candidates[i].iter().find(|c| c.0 == pick[i]).unwrap().1;
        for gm in p0.gamma().elements() {
            for a in p0.g().elements() {
                let src = p0.act_g(p0.act_gamma(gm, e), a);
                let dst = p1.act_g(p1.act_gamma(gm, y), a);
                debug_assert!(f[src] == usize::MAX || f[src] == dst);
                f[src] = dst;
            }
        }
    }
    if bundle_iso_is_valid(p0, p1, &f) {
        Some(f)
    } else {
        None
    }
}

fn match_orbits(
    i: usize,
    candidates: &[Vec<(usize, usize)>],
    used: &mut [bool],
    pick: &mut [usize],
) -> bool {
    if i == candidates.len() {
        return true;
    }
    for &(j, _) in &candidates[i] {
        if !used[j] {
            used[j] = true;
            pick[i] = j;
            if match_orbits(i + 1, candidates, used, pick) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Round-trip a bundle through its Γ×G-set and back, and test isomorphism
/// with the original after matching the base labels (the rebuilt base names
/// points by right-orbit position).
pub fn roundtrip_bundle_isomorphic(p: &EquivariantBundle, config: &Config) -> Result<bool> {
    let set = to_gamma_g_set(p, config)?;
    let q = from_gamma_g_set(&set)?;
    let mut reps = Vec::new();
    let mut seen = vec![false; p.total_size()];
    for e in 0..p.total_size() {
        if seen[e] {
            continue;
        }
        reps.push(e);
        for a in p.g().elements() {
            seen[p.act_g(e, a)] = true;
        }
    }
    let phi: Vec<usize> = reps.iter().map(|&r| p.proj(r)).collect();
    let q = relabel_base_to(&q, p.base(), &phi)?;
    Ok(is_isomorphic(&q, p).is_some())
}

/// Round-trip a Γ×G-set through the bundle construction and back.
pub fn roundtrip_set_isomorphic(e: &GammaGSet, config: &Config) -> Result<bool> {
    let p = from_gamma_g_set(e)?;
    let back = to_gamma_g_set(&p, config)?;
    Ok(gamma_g_sets_isomorphic(e, &back))
}

/// One bundle per conjugation orbit of hom(H, G), in canonical orbit order.
pub fn classify_over_orbit(
    h: &Subgroup,
    g: &GroupRef,
    config: &Config,
) -> Result<Vec<EquivariantBundle>> {
    hom_orbits(h, g, config)?
        .iter()
        .map(|orbit| bundle_over_orbit(&orbit.canonical))
        .collect()
}

/// Independent census of bundles over Γ/H up to isomorphism over the
/// identity, sharing no code with the homomorphism classifier.
///
/// Any bundle over the coset orbit is carried, after choosing one basepoint
/// per fiber with the free right action, by the standard carrier Γ/H × G
/// with the untwisted right action; its left action is then determined by
/// the column c(γ) := the G-shift of the basepoint over H under γ, and a
/// column yields a valid action exactly when c(identity) = 1 and
/// c(γh) = c(γ)·c(h) for every γ ∈ Γ, h ∈ H. Relabeling the basepoints
/// (= any isomorphism over the identity) replaces c by γ ↦ w(γH)·c(γ)·v⁻¹,
/// which conjugates the restriction tuple (c(h))_{h∈H} and can realize any
/// two columns with equal restrictions. Classes therefore biject with
/// conjugacy-canonical restriction tuples of valid columns, which this
/// enumerates exhaustively by depth-first search with early constraint
/// checks.
pub fn census_over_orbit(gamma: &FiniteGroup, h: &Subgroup, g: &FiniteGroup) -> usize {
    let n = gamma.order();
    // Constraints c[γh] = c[γ]·c[h], indexed by the largest position they
    // mention so a partial column can be checked as it grows.
    let mut by_position: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for gm in gamma.elements() {
        for &hh in h.members() {
            if hh == gamma.identity() {
                continue;
            }
            let prod = gamma.mul(gm, hh);
            by_position[gm.max(hh).max(prod)].push((gm, hh, prod));
        }
    }
    let mut column = vec![0usize; n];
    let mut classes: BTreeSet<Vec<usize>> = BTreeSet::new();
    fn descend(
        pos: usize,
        column: &mut Vec<usize>,
        by_position: &[Vec<(usize, usize, usize)>],
        g: &FiniteGroup,
        h: &Subgroup,
        classes: &mut BTreeSet<Vec<usize>>,
    ) {
        let n = column.len();
        if pos == n {
            let tuple: Vec<usize> = h.members().iter().map(|&hh| column[hh]).collect();
            let mut best: Option<Vec<usize>> = None;
            for t in g.elements() {
                let conj: Vec<usize> = tuple.iter().map(|&v| g.conj(t, v)).collect();
                if best.as_ref().map_or(true, |b| conj < *b) {
                    best = Some(conj);
                }
            }
            classes.insert(best.unwrap_or_default());
            return;
        }
        for v in g.elements() {
            column[pos] = v;
            if by_position[pos]
                .iter()
                .all(|&(gm, hh, prod)| column[prod] == g.mul(column[gm], column[hh]))
            {
                descend(pos + 1, column, by_position, g, h, classes);
            }
        }
    }
    descend(1, &mut column, &by_position, g, h, &mut classes);
    classes.len()
}

/// Exhaustively check the transformation laws of local representations at
/// every total point: moving along the fiber conjugates the representation
/// in G, moving across the base conjugates it in Γ, and the isotropy
/// transforms accordingly.
pub fn check_transformation_rules(p: &EquivariantBundle) -> Result<()> {
    for e in 0..p.total_size() {
        let rep = p.local_rep_at(e)?;
        for a in p.g().elements() {
            let moved = p.local_rep_at(p.act_g(e, a))?;
            if !homs_equal(&moved, &conjugate_hom(a, &rep)) {
                return Err(Error::Mismatch(format!(
                    "fiber transformation law fails at point {e}, shift {a}"
                )));
            }
        }
        for gm in p.gamma().elements() {
            let moved = p.local_rep_at(p.act_gamma(gm, e))?;
            if !homs_equal(&moved, &gamma_conjugate_hom(gm, &rep)) {
                return Err(Error::Mismatch(format!(
                    "base transformation law fails at point {e}, element {gm}"
                )));
            }
            let back = moved.source().conjugated(p.gamma().inv(gm));
            if back.members() != rep.source().members() {
                return Err(Error::Mismatch(format!(
                    "isotropy transformation fails at point {e}, element {gm}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{conjugate_hom_left, make_group};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn cfg() -> Config {
        Config::default()
    }

    fn grp(spec: &str) -> GroupRef {
        Arc::new(make_group(spec, &cfg()).unwrap())
    }

    fn sub_of(group: &GroupRef, members: &[usize]) -> Subgroup {
        Subgroup::new(group.clone(), members.to_vec()).unwrap()
    }

    fn hom(group: &GroupRef, members: &[usize], target: &GroupRef, images: &[usize]) -> GroupHom {
        GroupHom::new(sub_of(group, members), target.clone(), images.to_vec()).unwrap()
    }

    #[test]
    fn gamma_set_rejects_non_action() {
        let c2 = grp("C2");
        // Identity row broken.
        assert!(GammaSet::new(c2.clone(), 2, vec![1, 0, 0, 1]).is_err());
        // Composition broken: the non-identity element acts as a 3-cycle.
        let c4 = grp("C4");
        let bad = GammaSet::new(c4, 3, vec![0, 1, 2, 1, 2, 0, 2, 0, 1, 0, 1, 2]);
        assert!(bad.is_err());
    }

    #[test]
    fn coset_action_of_s3() {
        let s3 = grp("S3");
        // ⟨(12)⟩ sits at indices {0, t} for the first transposition.
        let t = (1..6).find(|&x| s3.mul(x, x) == 0 && s3.elem_order(x) == 2).unwrap();
        let h = sub_of(&s3, &[0, t]);
        let x = GammaSet::cosets(&h);
        assert_eq!(x.size(), 3);
        assert_eq!(x.isotropy(0).members(), h.members());
        assert_eq!(x.orbits().len(), 1);
        assert!(GammaSet::translation(s3.clone()).is_free());
        assert!(!GammaSet::trivial(s3, 2).is_free());
    }

    #[test]
    fn local_reps_trivial_over_free_base() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let p = trivial_bundle(&GammaSet::translation(c4), &c2);
        for e in 0..p.total_size() {
            let rep = p.local_rep_at(e).unwrap();
            assert_eq!(rep.source().order(), 1);
            assert!(rep.image_table().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn orbit_bundle_rep_at_basepoint_is_alpha() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let alpha = hom(&c4, &[0, 2], &c2, &[0, 1]);
        let p = bundle_over_orbit(&alpha).unwrap();
        assert_eq!(p.total_size(), 4);
        assert_eq!(p.base().size(), 2);
        assert!(homs_equal(&p.local_rep_at(0).unwrap(), &alpha));

        let s3 = grp("S3");
        let a3: Vec<usize> = s3.elements().filter(|&x| s3.elem_order(x) % 2 == 1).collect();
        let incl = GroupHom::inclusion(sub_of(&s3, &a3));
        let q = bundle_over_orbit(&incl).unwrap();
        assert!(homs_equal(&q.local_rep_at(0).unwrap(), &incl));
    }

    #[test]
    fn orbit_bundle_rep_translates_along_fiber() {
        let s3 = grp("S3");
        let a3: Vec<usize> = s3.elements().filter(|&x| s3.elem_order(x) % 2 == 1).collect();
        let incl = GroupHom::inclusion(sub_of(&s3, &a3));
        let p = bundle_over_orbit(&incl).unwrap();
        for a in s3.elements() {
            let moved = p.local_rep_at(p.act_g(0, a)).unwrap();
            assert!(homs_equal(&moved, &conjugate_hom(a, &incl)));
        }
    }

    #[test]
    fn orbit_bundle_trivial_alpha_is_product() {
        let s3 = grp("S3");
        let c2 = grp("C2");
        let t = (1..6).find(|&x| s3.elem_order(x) == 2).unwrap();
        let alpha = hom(&s3, &[0, t], &c2, &[0, 0]);
        let p = bundle_over_orbit(&alpha).unwrap();
        let q = trivial_bundle(&GammaSet::cosets(&sub_of(&s3, &[0, t])), &c2);
        assert!(is_isomorphic(&p, &q).is_some());
    }

    #[test]
    fn orbit_bundle_over_trivial_subgroup_is_free() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let alpha = hom(&c4, &[0], &c2, &[0]);
        let p = bundle_over_orbit(&alpha).unwrap();
        assert_eq!(p.total_size(), 8);
        assert!(p.base().is_free());
        for e in 0..8 {
            assert_eq!(p.local_rep_at(e).unwrap().source().order(), 1);
        }
    }

    #[test]
    fn family_of_product_bundle_is_trivial_pairs() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let base = GammaSet::cosets(&c4.full_subgroup())
            .disjoint_union(&GammaSet::translation(c4.clone()));
        let p = trivial_bundle(&base, &c2);
        let (fam, pre) = family_of_bundle(&p, &cfg()).unwrap();
        assert!(pre.iter().all(|r| r.image_table().iter().all(|&x| x == 0)));
        assert!(fam.pairs().iter().all(|r| r.image_table().iter().all(|&x| x == 0)));
    }

    #[test]
    fn family_of_orbit_bundle_is_closure_of_alpha() {
        let s3 = grp("S3");
        let c2 = grp("C2");
        let t = (1..6).find(|&x| s3.elem_order(x) == 2).unwrap();
        let alpha = hom(&s3, &[0, t], &c2, &[0, 1]);
        let p = bundle_over_orbit(&alpha).unwrap();
        let (fam, _) = family_of_bundle(&p, &cfg()).unwrap();
        let direct = close_family(s3.clone(), c2, &[alpha], &cfg()).unwrap();
        let key = |f: &LocalRepFamily| -> Vec<(Vec<usize>, Vec<usize>)> {
            f.pairs()
                .iter()
                .map(|p| (p.source().members().to_vec(), p.image_table().to_vec()))
                .collect()
        };
        assert_eq!(key(&fam), key(&direct));
    }

    #[test]
    fn family_of_disjoint_union_is_joint_closure() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let alpha = hom(&c4, &[0, 2], &c2, &[0, 1]);
        let beta = hom(&c4, &[0], &c2, &[0]);
        let p = disjoint_union_bundles(
            &bundle_over_orbit(&alpha).unwrap(),
            &bundle_over_orbit(&beta).unwrap(),
        )
        .unwrap();
        let (fam, _) = family_of_bundle(&p, &cfg()).unwrap();
        let direct = close_family(c4, c2, &[alpha, beta], &cfg()).unwrap();
        assert_eq!(fam.len(), direct.len());
    }

    #[test]
    fn p_sigma_single_slice_is_orbit_bundle() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let alpha = hom(&c4, &[0, 2], &c2, &[0, 1]);
        let p = bundle_p_sigma(std::slice::from_ref(&alpha)).unwrap();
        let q = bundle_over_orbit(&alpha).unwrap();
        assert!(is_isomorphic(&p, &q).is_some());
    }

    #[test]
    fn p_sigma_constant_is_repeated_orbit_bundle() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let alpha = hom(&c4, &[0, 2], &c2, &[0, 1]);
        let p = bundle_p_sigma(&[alpha.clone(), alpha.clone()]).unwrap();
        let one = bundle_over_orbit(&alpha).unwrap();
        let q = disjoint_union_bundles(&one, &one).unwrap();
        // Base labels differ: product (coset, slice) versus concatenation
        // (slice, coset).
        let k = one.base().size();
        let zs = 2;
        let phi: Vec<usize> = (0..p.base().size()).map(|b| (b % zs) * k + b / zs).collect();
        let p = relabel_base_to(&p, q.base(), &phi).unwrap();
        assert!(is_isomorphic(&p, &q).is_some());
    }

    #[test]
    fn p_sigma_slices_carry_different_isotropy() {
        let c2 = grp("C2");
        let full = c2.full_subgroup();
        let trivial = GroupHom::trivial(full.clone(), c2.clone());
        let ident = GroupHom::new(full, c2.clone(), vec![0, 1]).unwrap();
        let p = bundle_p_sigma(&[trivial, ident]).unwrap();
        let mut by_slice: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(), BTreeSet::new()];
        for e in 0..p.total_size() {
            let z = p.proj(e) % 2;
            by_slice[z].insert(combined_isotropy(&p, e));
        }
        assert!(by_slice[0].is_disjoint(&by_slice[1]));
    }

    #[test]
    fn isomorphism_finds_self_map() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let p = bundle_over_orbit(&hom(&c4, &[0, 2], &c2, &[0, 1])).unwrap();
        let f = is_isomorphic(&p, &p).unwrap();
        assert!(bundle_iso_is_valid(&p, &p, &f));
    }

    #[test]
    fn conjugated_orbit_bundles_are_isomorphic() {
        let s3 = grp("S3");
        let a3: Vec<usize> = s3.elements().filter(|&x| s3.elem_order(x) % 2 == 1).collect();
        let incl = GroupHom::inclusion(sub_of(&s3, &a3));
        let t = (1..6).find(|&x| s3.elem_order(x) == 2).unwrap();
        let other = conjugate_hom_left(t, &incl);
        assert!(!homs_equal(&incl, &other));
        let p = bundle_over_orbit(&incl).unwrap();
        let q = bundle_over_orbit(&other).unwrap();
        assert!(is_isomorphic(&p, &q).is_some());
    }

    #[test]
    fn twisted_orbit_bundle_is_not_trivial() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let p = bundle_over_orbit(&hom(&c4, &[0, 2], &c2, &[0, 0])).unwrap();
        let q = bundle_over_orbit(&hom(&c4, &[0, 2], &c2, &[0, 1])).unwrap();
        assert!(is_isomorphic(&p, &q).is_none());
    }

    #[test]
    fn shuffle_preserves_isomorphism_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s3 = grp("S3");
        let c2 = grp("C2");
        let t = (1..6).find(|&x| s3.elem_order(x) == 2).unwrap();
        let p = bundle_over_orbit(&hom(&s3, &[0, t], &c2, &[0, 1])).unwrap();
        for _ in 0..5 {
            let q = shuffled(&p, &mut rng);
            assert!(is_isomorphic(&p, &q).is_some());
        }
    }

    #[test]
    fn classification_counts() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let s3 = grp("S3");
        let c3 = grp("C3");

        let free = classify_over_orbit(&c4.trivial_subgroup(), &c2, &cfg()).unwrap();
        assert_eq!(free.len(), 1);
        assert_eq!(census_over_orbit(&c4, &c4.trivial_subgroup(), &c2), 1);

        let h = sub_of(&c4, &[0, 2]);
        let two = classify_over_orbit(&h, &c2, &cfg()).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(census_over_orbit(&c4, &h, &c2), 2);
        assert!(is_isomorphic(&two[0], &two[1]).is_none());

        let a3: Vec<usize> = s3.elements().filter(|&x| s3.elem_order(x) % 2 == 1).collect();
        let h3 = sub_of(&s3, &a3);
        let three = classify_over_orbit(&h3, &c3, &cfg()).unwrap();
        assert_eq!(three.len(), 3);
        assert_eq!(census_over_orbit(&s3, &h3, &c3), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(is_isomorphic(&three[i], &three[j]).is_none());
            }
        }

        // Nonabelian target: the two embeddings of C3 into S3 are conjugate.
        let into_s3 = classify_over_orbit(&h3, &s3, &cfg()).unwrap();
        assert_eq!(into_s3.len(), 2);
        assert_eq!(census_over_orbit(&s3, &h3, &s3), 2);
    }

    #[test]
    fn gamma_g_set_of_orbit_bundle_has_graph_isotropy() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let alpha = hom(&c4, &[0, 2], &c2, &[0, 1]);
        let p = bundle_over_orbit(&alpha).unwrap();
        let set = to_gamma_g_set(&p, &cfg()).unwrap();
        let k = graph_subgroup(&set.product, &alpha);
        assert_eq!(set.carrier.isotropy(0).members(), k.members());
    }

    #[test]
    fn gamma_g_set_of_free_bundle_is_free() {
        let c1 = grp("C1");
        let s3 = grp("S3");
        let p = trivial_bundle(&GammaSet::trivial(c1, 2), &s3);
        let set = to_gamma_g_set(&p, &cfg()).unwrap();
        assert!(set.carrier.is_free());
    }

    #[test]
    fn gamma_g_set_respects_disjoint_union() {
        let c2 = grp("C2");
        let p0 = bundle_over_orbit(&hom(&c2, &[0, 1], &c2, &[0, 1])).unwrap();
        let p1 = bundle_over_orbit(&hom(&c2, &[0], &c2, &[0])).unwrap();
        let joint = to_gamma_g_set(&disjoint_union_bundles(&p0, &p1).unwrap(), &cfg()).unwrap();
        let split = disjoint_union_sets(
            &to_gamma_g_set(&p0, &cfg()).unwrap(),
            &to_gamma_g_set(&p1, &cfg()).unwrap(),
        )
        .unwrap();
        assert!(GammaSet::same_action(&joint.carrier, &split.carrier));
    }

    #[test]
    fn bundle_from_translation_set() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let product = ProductGroup::new(c4.clone(), c2, &cfg()).unwrap();
        let e = GammaGSet {
            carrier: GammaSet::translation(product.group.clone()),
            product,
        };
        let p = from_gamma_g_set(&e).unwrap();
        assert_eq!(p.base().size(), 4);
        assert!(p.base().is_free());
    }

    #[test]
    fn non_graph_isotropy_is_rejected() {
        let c2 = grp("C2");
        let product = ProductGroup::new(c2.clone(), c2, &cfg()).unwrap();
        let bad = Subgroup::new(
            product.group.clone(),
            vec![product.pair(0, 0), product.pair(0, 1)],
        )
        .unwrap();
        let e = GammaGSet {
            carrier: GammaSet::cosets(&bad),
            product,
        };
        match from_gamma_g_set(&e) {
            Err(Error::BadIsotropy { point: 0 }) => {}
            other => panic!("expected BadIsotropy at point 0, got {other:?}"),
        }
    }

    #[test]
    fn roundtrips_on_seeded_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let gamma = grp("S3");
        let g = grp("C4");
        for _ in 0..10 {
            let set = seeded_graph_set(&gamma, &g, &mut rng, &cfg()).unwrap();
            assert!(roundtrip_set_isomorphic(&set, &cfg()).unwrap());
            let p = seeded_bundle(&gamma, &g, &mut rng, &cfg()).unwrap();
            assert!(roundtrip_bundle_isomorphic(&p, &cfg()).unwrap());
        }
    }

    #[test]
    fn transformation_rules_on_seeded_bundles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gamma = grp("D4");
        let g = grp("S3");
        for _ in 0..5 {
            let p = seeded_bundle(&gamma, &g, &mut rng, &cfg()).unwrap();
            check_transformation_rules(&p).unwrap();
        }
    }

    #[test]
    fn pullback_along_identity() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let p = bundle_over_orbit(&hom(&c4, &[0, 2], &c2, &[0, 1])).unwrap();
        let back = pullback(&GammaMap::identity(p.base()), &p).unwrap();
        assert!(is_isomorphic(&back, &p).is_some());
    }

    #[test]
    fn pullback_to_free_base_trivializes() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let alpha = hom(&c4, &[0, 2], &c2, &[0, 1]);
        let p = bundle_over_orbit(&alpha).unwrap();
        let free = GammaSet::translation(c4.clone());
        let labels = coset_labels(alpha.source());
        let f = GammaMap::new(free.clone(), p.base().clone(), labels).unwrap();
        let pulled = pullback(&f, &p).unwrap();
        assert_eq!(pulled.total_size(), 8);
        let q = trivial_bundle(&free, &c2);
        assert!(is_isomorphic(&pulled, &q).is_some());
    }

    #[test]
    fn pullback_along_constant_map_to_fixed_point() {
        let c2 = grp("C2");
        let full = c2.full_subgroup();
        let p = bundle_over_orbit(&GroupHom::new(full, c2.clone(), vec![0, 1]).unwrap()).unwrap();
        let x = GammaSet::translation(c2.clone());
        let f = GammaMap::new(x.clone(), p.base().clone(), vec![0, 0]).unwrap();
        let pulled = pullback(&f, &p).unwrap();
        assert!(is_isomorphic(&pulled, &trivial_bundle(&x, &c2)).is_some());
    }

    #[test]
    fn pullback_composes() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let alpha = hom(&c4, &[0, 2], &c2, &[0, 1]);
        let p = bundle_over_orbit(&alpha).unwrap();
        let free = GammaSet::translation(c4.clone());
        let f = GammaMap::new(free.clone(), p.base().clone(), coset_labels(alpha.source()))
            .unwrap();
        let two = GammaSet::trivial(c4.clone(), 1);
        let pt_map = GammaMap::new(two.clone(), free.clone(), vec![0]);
        // A point maps into the free set only non-equivariantly; use a
        // genuine second stage instead: fold the free set onto itself by
        // right translation.
        assert!(pt_map.is_err());
        let shift: Vec<usize> = (0..4).map(|x| c4.mul(x, 1)).collect();
        let gmap = GammaMap::new(free.clone(), free.clone(), shift).unwrap();
        let composed = pullback(&f.compose(&gmap).unwrap(), &p).unwrap();
        let staged = pullback(&gmap, &pullback(&f, &p).unwrap()).unwrap();
        assert!(is_isomorphic(&composed, &staged).is_some());
    }

    #[test]
    fn lemma_five_shadow_for_two_slices() {
        let c4 = grp("C4");
        let c2 = grp("C2");
        let homs: Vec<GroupHom> = enumerate_homs(&sub_of(&c4, &[0, 2]), &c2, &cfg()).unwrap();
        assert_eq!(homs.len(), 2);
        for i0 in 0..2 {
            for j0 in 0..2 {
                for i1 in 0..2 {
                    for j1 in 0..2 {
                        let s0 = [homs[i0].clone(), homs[j0].clone()];
                        let s1 = [homs[i1].clone(), homs[j1].clone()];
                        let p0 = bundle_p_sigma(&s0).unwrap();
                        let p1 = bundle_p_sigma(&s1).unwrap();
                        assert_eq!(
                            is_isomorphic(&p0, &p1).is_some(),
                            pointwise_conjugate(&s0, &s1),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn census_handles_trivial_subgroup_and_nonabelian_target() {
        let k4 = grp("K4");
        let s3 = grp("S3");
        assert_eq!(census_over_orbit(&k4, &k4.trivial_subgroup(), &s3), 1);
        // hom(K4, S3) up to conjugacy: trivial, three sign-like maps that
        // are fused pairwise by conjugation... enumerate independently.
        let orbits = hom_orbits(&k4.full_subgroup(), &s3, &cfg()).unwrap();
        assert_eq!(
            census_over_orbit(&k4, &k4.full_subgroup(), &s3),
            orbits.len()
        );
    }
}
