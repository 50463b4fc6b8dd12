//! Finite group arithmetic: multiplication tables, subgroups, conjugacy,
//! homomorphism enumeration and graph subgroups of a direct product.
//!
//! Elements of a group of order `n` are the indices `0..n`; index `0` is
//! always the identity. All containers of elements are kept sorted so that
//! every derived object has one canonical form.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::config::Config;
use crate::error::{Error, Result};

/// Immutable finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    /// Row-major table: `mul[a * order + b] = a·b`.
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
}

pub type GroupRef = Arc<FiniteGroup>;

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g a g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Order of a single element.
    pub fn elem_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| self.mul[a * self.order..(a + 1) * self.order].to_vec())
            .collect()
    }

    /// Build and validate a group from an explicit table. Associativity is
    /// checked exhaustively up to `config.assoc_check_cap`; the remaining
    /// axioms (Latin square, identity at index 0, inverses) are always
    /// checked.
    pub fn from_table(name: &str, rows: &[Vec<usize>], config: &Config) -> Result<FiniteGroup> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::MalformedTable(format!(
                    "row {i} has length {} expected {order}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::MalformedTable(format!(
                        "row {i} contains out-of-range element {v}"
                    )));
                }
                mul.push(v);
            }
        }
        // Identity must be element 0.
        for a in 0..order {
            if mul[a] != a || mul[a * order] != a {
                return Err(Error::MalformedTable(
                    "element 0 is not a two-sided identity".into(),
                ));
            }
        }
        // Latin square.
        for a in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for b in 0..order {
                let r = mul[a * order + b];
                let c = mul[b * order + a];
                if seen_row[r] || seen_col[c] {
                    return Err(Error::MalformedTable(format!(
                        "row or column {a} repeats an element"
                    )));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        // Inverses.
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    if mul[b * order + a] != 0 {
                        return Err(Error::MalformedTable(format!(
                            "element {a} has one-sided inverse only"
                        )));
                    }
                    inv[a] = b;
                }
            }
            if inv[a] == usize::MAX {
                return Err(Error::MalformedTable(format!("element {a} has no inverse")));
            }
        }
        // Associativity (cubic; capped).
        if order <= config.assoc_check_cap {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul[a * order + b];
                    for c in 0..order {
                        if mul[ab * order + c] != mul[a * order + mul[b * order + c]] {
                            return Err(Error::MalformedTable(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.to_string(),
            order,
            mul,
            inv,
            identity: 0,
        })
    }

    pub fn cyclic(n: usize, config: &Config) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::UnsupportedSpec("C0".into()));
        }
        check_order_cap("cyclic group", n, config)?;
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(&format!("C{n}"), &rows, config)
    }

    /// Dihedral group of order `2n`: indices `0..n` are rotations `r^i`,
    /// indices `n..2n` are reflections `r^i s`.
    pub fn dihedral(n: usize, config: &Config) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::UnsupportedSpec("D0".into()));
        }
        check_order_cap("dihedral group", 2 * n, config)?;
        let idx = |i: usize, j: usize| j * n + (i % n);
        let mut rows = vec![vec![0usize; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..2 {
                for k in 0..n {
                    for l in 0..2 {
                        // (r^i s^j)(r^k s^l): s r^k = r^{-k} s.
                        let (e, f) = if j == 0 {
                            ((i + k) % n, l)
                        } else {
                            ((i + n - (k % n)) % n, 1 - l)
                        };
                        rows[idx(i, j)][idx(k, l)] = idx(e, f);
                    }
                }
            }
        }
        FiniteGroup::from_table(&format!("D{n}"), &rows, config)
    }

    /// Symmetric group on `n` letters (`n ≤ 5`), elements enumerated in
    /// lexicographic one-line order so the identity permutation is index 0.
    /// Product is composition: `(p·q)(x) = p(q(x))`.
    pub fn symmetric(n: usize, config: &Config) -> Result<FiniteGroup> {
        if n == 0 || n > 5 {
            return Err(Error::UnsupportedSpec(format!("S{n}")));
        }
        let perms = permutations_lex(n);
        let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let order = perms.len();
        check_order_cap("symmetric group", order, config)?;
        let mut rows = vec![vec![0usize; order]; order];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let comp: Vec<usize> = (0..n).map(|x| p[q[x]]).collect();
                rows[a][b] = index_of(&comp);
            }
        }
        FiniteGroup::from_table(&format!("S{n}"), &rows, config)
    }

    /// Quaternion group: 0..8 encode 1, -1, i, -i, j, -j, k, -k.
    pub fn quaternion8(config: &Config) -> Result<FiniteGroup> {
        // (sign, axis) with axis 0 = scalar, 1 = i, 2 = j, 3 = k.
        let decode = |x: usize| (x % 2 == 1, x / 2);
        let encode = |neg: bool, axis: usize| axis * 2 + neg as usize;
        let quat_mul = |(n1, a1): (bool, usize), (n2, a2): (bool, usize)| -> (bool, usize) {
            let neg = n1 ^ n2;
            match (a1, a2) {
                (0, a) => (neg, a),
                (a, 0) => (neg, a),
                (a, b) if a == b => (!neg, 0),
                // i j = k, j k = i, k i = j, and anticommute.
                (a, b) => {
                    let c = 6 - a - b;
                    let cyclic = (a, b) == (1, 2) || (a, b) == (2, 3) || (a, b) == (3, 1);
                    (neg ^ !cyclic, c)
                }
            }
        };
        let rows: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (n, a) = quat_mul(decode(x), decode(y));
                        encode(n, a)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table("Q8", &rows, config)
    }

    pub fn klein4(config: &Config) -> Result<FiniteGroup> {
        let rows: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        FiniteGroup::from_table("K4", &rows, config)
    }

    /// The whole group viewed as a subgroup of itself.
    pub fn full_subgroup(self: &GroupRef) -> Subgroup {
        Subgroup {
            parent: self.clone(),
            members: (0..self.order).collect(),
        }
    }

    pub fn trivial_subgroup(self: &GroupRef) -> Subgroup {
        Subgroup {
            parent: self.clone(),
            members: vec![self.identity],
        }
    }
}

fn check_order_cap(what: &str, n: usize, config: &Config) -> Result<()> {
    if n > config.product_order_cap {
        return Err(Error::OrderOverflow {
            what: what.into(),
            limit: config.product_order_cap,
            actual: n,
        });
    }
    Ok(())
}

fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Direct product with pair encoding `(a, b) ↦ a·|B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, config: &Config) -> Result<FiniteGroup> {
    let order = a
        .order
        .checked_mul(b.order)
        .ok_or_else(|| Error::OrderOverflow {
            what: "direct product".into(),
            limit: config.product_order_cap,
            actual: usize::MAX,
        })?;
    if order > config.product_order_cap {
        return Err(Error::OrderOverflow {
            what: "direct product".into(),
            limit: config.product_order_cap,
            actual: order,
        });
    }
    let nb = b.order;
    let mut mul = vec![0usize; order * order];
    for xa in 0..a.order {
        for xb in 0..nb {
            let x = xa * nb + xb;
            for ya in 0..a.order {
                for yb in 0..nb {
                    mul[x * order + ya * nb + yb] = a.mul(xa, ya) * nb + b.mul(xb, yb);
                }
            }
        }
    }
    let inv = (0..order).map(|x| a.inv(x / nb) * nb + b.inv(x % nb)).collect();
    Ok(FiniteGroup {
        name: format!("{}x{}", a.name, b.name),
        order,
        mul,
        inv,
        identity: 0,
    })
}

/// A direct product that remembers its factors, used wherever pairs must be
/// packed or unpacked (graph subgroups, product actions).
#[derive(Clone, Debug)]
pub struct ProductGroup {
    pub group: GroupRef,
    pub left: GroupRef,
    pub right: GroupRef,
}

impl ProductGroup {
    pub fn new(left: GroupRef, right: GroupRef, config: &Config) -> Result<ProductGroup> {
        let group = Arc::new(direct_product(&left, &right, config)?);
        Ok(ProductGroup { group, left, right })
    }

    #[inline]
    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.right.order() + b
    }

    #[inline]
    pub fn unpair(&self, x: usize) -> (usize, usize) {
        (x / self.right.order(), x % self.right.order())
    }
}

/// Parse the group spec mini-language: `C<n>`, `D<n>`, `S<n>` (n ≤ 5), `Q8`,
/// `K4`, and `x`-separated direct products such as `C2xC2` or `S3xC2`.
pub fn make_group(spec: &str, config: &Config) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::UnsupportedSpec("(empty)".into()));
    }
    let mut parts = spec.split('x');
    let mut acc = make_atom(parts.next().unwrap(), config)?;
    for p in parts {
        let next = make_atom(p, config)?;
        acc = direct_product(&acc, &next, config)?;
    }
    // Keep the user's spelling as the name (e.g. "C2xC2").
    acc.name = spec.to_string();
    Ok(acc)
}

fn make_atom(atom: &str, config: &Config) -> Result<FiniteGroup> {
    let atom = atom.trim();
    let parse_n = |rest: &str| -> Result<usize> {
        rest.parse::<usize>()
            .map_err(|_| Error::UnsupportedSpec(atom.to_string()))
    };
    match atom {
        "Q8" => FiniteGroup::quaternion8(config),
        "K4" => FiniteGroup::klein4(config),
        _ if atom.starts_with('C') => FiniteGroup::cyclic(parse_n(&atom[1..])?, config),
        _ if atom.starts_with('D') => FiniteGroup::dihedral(parse_n(&atom[1..])?, config),
        _ if atom.starts_with('S') => FiniteGroup::symmetric(parse_n(&atom[1..])?, config),
        _ => Err(Error::UnsupportedSpec(atom.to_string())),
    }
}

/// Parse the Cayley table file format: first line the order `n`, then `n`
/// lines of `n` space-separated element indices; element 0 is the identity.
pub fn parse_cayley_table(name: &str, text: &str, config: &Config) -> Result<FiniteGroup> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let order: usize = lines
        .next()
        .ok_or_else(|| Error::MalformedTable("missing order line".into()))?
        .trim()
        .parse()
        .map_err(|_| Error::MalformedTable("order line is not a number".into()))?;
    let mut rows = Vec::with_capacity(order);
    for _ in 0..order {
        let line = lines
            .next()
            .ok_or_else(|| Error::MalformedTable("missing table row".into()))?;
        let row: std::result::Result<Vec<usize>, _> =
            line.split_whitespace().map(|t| t.parse::<usize>()).collect();
        rows.push(row.map_err(|_| Error::MalformedTable("non-numeric table entry".into()))?);
    }
    FiniteGroup::from_table(name, &rows, config)
}

/// Subgroup of a fixed parent group, stored as a sorted member list.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: GroupRef,
    members: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?} of {}", self.members, self.parent.name)
    }
}

impl Subgroup {
    /// Validating constructor: `members` must contain the identity and be
    /// closed under products and inverses.
    pub fn new(parent: GroupRef, mut members: Vec<usize>) -> Result<Subgroup> {
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&m| m >= parent.order()) {
            return Err(Error::MalformedTable("subgroup member out of range".into()));
        }
        if !members.contains(&parent.identity()) {
            return Err(Error::NotClosed("subgroup misses the identity".into()));
        }
        for &a in &members {
            if members.binary_search(&parent.inv(a)).is_err() {
                return Err(Error::NotClosed(format!("subgroup misses inverse of {a}")));
            }
            for &b in &members {
                if members.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::NotClosed(format!(
                        "subgroup misses product {a}·{b}"
                    )));
                }
            }
        }
        Ok(Subgroup { parent, members })
    }

    /// Subgroup generated by `gens`.
    pub fn generated(parent: GroupRef, gens: &[usize]) -> Subgroup {
        let members = closure_in(&parent, parent.identity(), gens);
        Subgroup { parent, members }
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// `γ H γ⁻¹` as a subgroup.
    pub fn conjugated(&self, g: usize) -> Subgroup {
        let mut members: Vec<usize> =
            self.members.iter().map(|&m| self.parent.conj(g, m)).collect();
        members.sort_unstable();
        Subgroup {
            parent: self.parent.clone(),
            members,
        }
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m))
            .collect();
        Subgroup {
            parent: self.parent.clone(),
            members,
        }
    }

    /// Materialize the subgroup as a standalone group. Member `i` of the
    /// result is `members[i]`; the identity lands at index 0 because member
    /// lists are sorted and the parent identity is 0.
    pub fn as_group(&self) -> FiniteGroup {
        let k = self.members.len();
        let pos = |x: usize| self.members.binary_search(&x).unwrap();
        let mut mul = vec![0usize; k * k];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                mul[i * k + j] = pos(self.parent.mul(a, b));
            }
        }
        let inv = self.members.iter().map(|&a| pos(self.parent.inv(a))).collect();
        FiniteGroup {
            name: format!(
                "{}{{{}}}",
                self.parent.name,
                self.members
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            order: k,
            mul,
            inv,
            identity: 0,
        }
    }

    /// Left cosets `γH`, each sorted, listed in order of least element.
    pub fn left_cosets(&self) -> Vec<Vec<usize>> {
        let n = self.parent.order();
        let mut seen = vec![false; n];
        let mut cosets = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> =
                self.members.iter().map(|&h| self.parent.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }
}

fn closure_in(parent: &FiniteGroup, identity: usize, gens: &[usize]) -> Vec<usize> {
    let n = parent.order();
    let mut inset = vec![false; n];
    inset[identity] = true;
    let mut members = vec![identity];
    let mut stack: Vec<usize> = Vec::new();
    for &g in gens {
        if !inset[g] {
            inset[g] = true;
            members.push(g);
            stack.push(g);
        }
    }
    while let Some(x) = stack.pop() {
        let snapshot = members.clone();
        for &m in &snapshot {
            for p in [parent.mul(x, m), parent.mul(m, x)] {
                if !inset[p] {
                    inset[p] = true;
                    members.push(p);
                    stack.push(p);
                }
            }
        }
    }
    members.sort_unstable();
    members
}

/// All subgroups, sorted by order then lexicographically by member list.
pub fn subgroups(group: &GroupRef, config: &Config) -> Result<Vec<Subgroup>> {
    if group.order() > config.subgroup_order_cap {
        return Err(Error::OrderOverflow {
            what: "subgroup enumeration".into(),
            limit: config.subgroup_order_cap,
            actual: group.order(),
        });
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial = vec![group.identity()];
    found.insert(trivial.clone());
    let mut queue = vec![trivial];
    while let Some(members) = queue.pop() {
        for x in group.elements() {
            if members.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = members.clone();
            gens.push(x);
            let bigger = closure_in(group, group.identity(), &gens);
            if found.insert(bigger.clone()) {
                queue.push(bigger);
            }
        }
    }
    let mut out: Vec<Subgroup> = found
        .into_iter()
        .map(|members| Subgroup {
            parent: group.clone(),
            members,
        })
        .collect();
    out.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    Ok(out)
}

/// Conjugacy classes, each sorted, listed by least representative.
pub fn conjugacy_classes(group: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = group.order();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for a in 0..n {
        if seen[a] {
            continue;
        }
        let mut class: Vec<usize> = (0..n).map(|g| group.conj(g, a)).collect();
        class.sort_unstable();
        class.dedup();
        for &x in &class {
            seen[x] = true;
        }
        classes.push(class);
    }
    classes
}

/// Centralizer of a set of elements.
pub fn centralizer(group: &GroupRef, elems: &[usize]) -> Subgroup {
    let members: Vec<usize> = group
        .elements()
        .filter(|&g| elems.iter().all(|&a| group.mul(g, a) == group.mul(a, g)))
        .collect();
    Subgroup {
        parent: group.clone(),
        members,
    }
}

/// Homomorphism from a subgroup `H ≤ Γ` into a target group, stored as the
/// image table parallel to the sorted member list of the source.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Subgroup,
    target: GroupRef,
    images: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom{:?}→{:?} into {}",
            self.source.members, self.images, self.target.name
        )
    }
}

impl GroupHom {
    /// Validating constructor: `images[i]` is the image of
    /// `source.members()[i]`; the map must be multiplicative.
    pub fn new(source: Subgroup, target: GroupRef, images: Vec<usize>) -> Result<GroupHom> {
        if images.len() != source.order() {
            return Err(Error::Mismatch(format!(
                "image table length {} does not match subgroup order {}",
                images.len(),
                source.order()
            )));
        }
        if images.iter().any(|&x| x >= target.order()) {
            return Err(Error::Mismatch("image out of range".into()));
        }
        let hom = GroupHom {
            source,
            target,
            images,
        };
        for &a in hom.source.members() {
            for &b in hom.source.members() {
                let ab = hom.source.parent().mul(a, b);
                if hom.apply(ab) != hom.target.mul(hom.apply(a), hom.apply(b)) {
                    return Err(Error::Mismatch(format!(
                        "map is not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(hom)
    }

    pub fn trivial(source: Subgroup, target: GroupRef) -> GroupHom {
        let images = vec![target.identity(); source.order()];
        GroupHom {
            source,
            target,
            images,
        }
    }

    /// Identity embedding of a subgroup into its own parent.
    pub fn inclusion(source: Subgroup) -> GroupHom {
        let target = source.parent().clone();
        let images = source.members().to_vec();
        GroupHom {
            source,
            target,
            images,
        }
    }

    pub fn source(&self) -> &Subgroup {
        &self.source
    }

    pub fn target(&self) -> &GroupRef {
        &self.target
    }

    pub fn image_table(&self) -> &[usize] {
        &self.images
    }

    /// Apply to a parent element that lies in the source subgroup.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[self.source.position(x).expect("element outside hom source")]
    }

    /// Set of image values (a subgroup of the target, as a sorted list).
    pub fn image_elements(&self) -> Vec<usize> {
        let mut im = self.images.clone();
        im.sort_unstable();
        im.dedup();
        im
    }

    /// Restriction to a subgroup of the source.
    pub fn restricted_to(&self, sub: &Subgroup) -> GroupHom {
        debug_assert!(sub.is_subset_of(&self.source));
        let images = sub.members().iter().map(|&m| self.apply(m)).collect();
        GroupHom {
            source: sub.clone(),
            target: self.target.clone(),
            images,
        }
    }
}

/// Right conjugation action on homomorphisms: `(g, α) ↦ c_{g⁻¹}∘α`, i.e.
/// `h ↦ g⁻¹ α(h) g`. This is a right action:
/// `conjugate_hom(g₀g₁, α) = conjugate_hom(g₁, conjugate_hom(g₀, α))`.
pub fn conjugate_hom(g: usize, hom: &GroupHom) -> GroupHom {
    let t = hom.target();
    let gi = t.inv(g);
    let images = hom.images.iter().map(|&x| t.mul(t.mul(gi, x), g)).collect();
    GroupHom {
        source: hom.source.clone(),
        target: hom.target.clone(),
        images,
    }
}

/// Left conjugation `(g, α) ↦ c_g∘α`, `h ↦ g α(h) g⁻¹` — the orbit action
/// used for classification.
pub fn conjugate_hom_left(g: usize, hom: &GroupHom) -> GroupHom {
    conjugate_hom(hom.target().inv(g), hom)
}

/// Source-side conjugation `(γ, α) ↦ (γHγ⁻¹, α∘c_{γ⁻¹})`.
pub fn gamma_conjugate_hom(gamma: usize, hom: &GroupHom) -> GroupHom {
    let parent = hom.source.parent().clone();
    let source = hom.source.conjugated(gamma);
    let gi = parent.inv(gamma);
    let images = source
        .members()
        .iter()
        .map(|&m| hom.apply(parent.conj(gi, m)))
        .collect();
    GroupHom {
        source,
        target: hom.target.clone(),
        images,
    }
}

/// Greedy generating set: repeatedly add the member whose adjunction grows
/// the generated subgroup the most (ties to the smallest index).
pub fn greedy_generators(sub: &Subgroup) -> Vec<usize> {
    let parent = sub.parent();
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![parent.identity()];
    while span.len() < sub.order() {
        let mut best: Option<(usize, usize)> = None; // (span size, element)
        for &m in sub.members() {
            if span.binary_search(&m).is_ok() {
                continue;
            }
            let mut try_gens = gens.clone();
            try_gens.push(m);
            let size = closure_in(parent, parent.identity(), &try_gens).len();
            let better = match best {
                None => true,
                Some((s, e)) => size > s || (size == s && m < e),
            };
            if better {
                best = Some((size, m));
            }
        }
        let (_, chosen) = best.expect("span smaller than subgroup but no candidate");
        gens.push(chosen);
        span = closure_in(parent, parent.identity(), &gens);
    }
    gens
}

/// All homomorphisms from a subgroup into a target group, by image
/// assignment on a greedy generating set. Results are sorted by image table.
pub fn enumerate_homs(source: &Subgroup, target: &GroupRef, config: &Config) -> Result<Vec<GroupHom>> {
    if source.order() > config.hom_order_cap || target.order() > config.hom_order_cap {
        return Err(Error::OrderOverflow {
            what: "homomorphism enumeration".into(),
            limit: config.hom_order_cap,
            actual: source.order().max(target.order()),
        });
    }
    let parent = source.parent().clone();
    let gens = greedy_generators(source);
    if gens.is_empty() {
        return Ok(vec![GroupHom::trivial(source.clone(), target.clone())]);
    }
    // Candidate images: the order of the image must divide the order of the
    // generator.
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let og = {
                // order inside the parent group
                let mut k = 1;
                let mut x = g;
                while x != parent.identity() {
                    x = parent.mul(x, g);
                    k += 1;
                }
                k
            };
            target
                .elements()
                .filter(|&t| og % target.elem_order(t) == 0)
                .collect()
        })
        .collect();

    let mut homs = Vec::new();
    let mut pick = vec![0usize; gens.len()];
    'assign: loop {
        let images: Vec<usize> = pick.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(hom) = extend_from_generators(source, target, &gens, &images) {
            homs.push(hom);
        }
        // Odometer over candidate lists.
        for d in (0..pick.len()).rev() {
            pick[d] += 1;
            if pick[d] < candidates[d].len() {
                continue 'assign;
            }
            pick[d] = 0;
        }
        break;
    }
    homs.sort_by(|a, b| a.images.cmp(&b.images));
    Ok(homs)
}

/// Try to extend generator images to a homomorphism on the whole subgroup;
/// returns `None` on any inconsistency.
fn extend_from_generators(
    source: &Subgroup,
    target: &GroupRef,
    gens: &[usize],
    gen_images: &[usize],
) -> Option<GroupHom> {
    let parent = source.parent();
    let n = parent.order();
    let mut map: Vec<Option<usize>> = vec![None; n];
    map[parent.identity()] = Some(target.identity());
    let mut queue = vec![parent.identity()];
    while let Some(x) = queue.pop() {
        let fx = map[x].unwrap();
        for (&g, &fg) in gens.iter().zip(gen_images) {
            let xg = parent.mul(x, g);
            let fxg = target.mul(fx, fg);
            match map[xg] {
                None => {
                    map[xg] = Some(fxg);
                    queue.push(xg);
                }
                Some(existing) if existing != fxg => return None,
                _ => {}
            }
        }
    }
    let images: Option<Vec<usize>> = source.members().iter().map(|&m| map[m]).collect();
    let images = images?;
    // Word propagation pins the map; multiplicativity still needs the full
    // pairwise check.
    for (i, &a) in source.members().iter().enumerate() {
        for (j, &b) in source.members().iter().enumerate() {
            let ab = parent.mul(a, b);
            let fab = images[source.position(ab)?];
            if fab != target.mul(images[i], images[j]) {
                return None;
            }
        }
    }
    Some(GroupHom {
        source: source.clone(),
        target: target.clone(),
        images,
    })
}

/// One conjugation orbit of homomorphisms under `g·α = c_g∘α`.
#[derive(Clone, Debug)]
pub struct HomOrbit {
    /// Lexicographically minimal image table in the orbit.
    pub canonical: GroupHom,
    pub orbit_size: usize,
    /// Centralizer of the canonical representative's image in the target.
    pub stabilizer: Subgroup,
}

/// Conjugation orbits on `hom(H, G)`, sorted by canonical representative.
pub fn hom_orbits(source: &Subgroup, target: &GroupRef, config: &Config) -> Result<Vec<HomOrbit>> {
    let homs = enumerate_homs(source, target, config)?;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut orbits = Vec::new();
    for hom in &homs {
        if seen.contains(&hom.images) {
            continue;
        }
        let mut orbit: BTreeSet<Vec<usize>> = BTreeSet::new();
        for g in target.elements() {
            orbit.insert(conjugate_hom_left(g, hom).images);
        }
        let canonical_images = orbit.iter().next().unwrap().clone();
        let orbit_size = orbit.len();
        for images in orbit {
            seen.insert(images);
        }
        let canonical = GroupHom {
            source: source.clone(),
            target: target.clone(),
            images: canonical_images,
        };
        let stabilizer = centralizer(target, &canonical.image_elements());
        debug_assert_eq!(orbit_size * stabilizer.order(), target.order());
        orbits.push(HomOrbit {
            canonical,
            orbit_size,
            stabilizer,
        });
    }
    orbits.sort_by(|a, b| a.canonical.images.cmp(&b.canonical.images));
    Ok(orbits)
}

/// Graph subgroup `K(H, α) = {(h, α(h)) : h ∈ H}` inside `Γ × G`.
pub fn graph_subgroup(product: &ProductGroup, hom: &GroupHom) -> Subgroup {
    debug_assert_eq!(product.left.order(), hom.source().parent().order());
    debug_assert_eq!(product.right.order(), hom.target().order());
    let members: Vec<usize> = hom
        .source()
        .members()
        .iter()
        .map(|&h| product.pair(h, hom.apply(h)))
        .collect();
    // Members are sorted already: pair() is monotone in h for fixed layout.
    Subgroup {
        parent: product.group.clone(),
        members,
    }
}

/// Structural isomorphism test by brute-force generator-image search.
pub fn groups_isomorphic(a: &GroupRef, b: &GroupRef) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let mut oa: Vec<usize> = a.elements().map(|x| a.elem_order(x)).collect();
    let mut ob: Vec<usize> = b.elements().map(|x| b.elem_order(x)).collect();
    oa.sort_unstable();
    ob.sort_unstable();
    if oa != ob {
        return false;
    }
    let full = a.full_subgroup();
    let gens = greedy_generators(&full);
    if gens.is_empty() {
        return true;
    }
    let mut pick = vec![0usize; gens.len()];
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let og = a.elem_order(g);
            b.elements().filter(|&t| b.elem_order(t) == og).collect::<Vec<_>>()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return false;
    }
    'assign: loop {
        let images: Vec<usize> = pick.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(hom) = extend_from_generators(&full, b, &gens, &images) {
            let mut im = hom.images.clone();
            im.sort_unstable();
            im.dedup();
            if im.len() == b.order() {
                return true;
            }
        }
        for d in (0..pick.len()).rev() {
            pick[d] += 1;
            if pick[d] < candidates[d].len() {
                continue 'assign;
            }
            pick[d] = 0;
        }
        break;
    }
    false
}

/// First subgroup (in canonical order) of `gamma` isomorphic to `model`.
pub fn find_subgroup_isomorphic(
    gamma: &GroupRef,
    model: &GroupRef,
    config: &Config,
) -> Result<Option<Subgroup>> {
    for sub in subgroups(gamma, config)? {
        if sub.order() == model.order() {
            let as_group = Arc::new(sub.as_group());
            if groups_isomorphic(&as_group, model) {
                return Ok(Some(sub));
            }
        }
    }
    Ok(None)
}
