//! Catalogs of small groups used by the verification sweeps.

use std::sync::Arc;

use crate::config::Config;
use crate::error::Result;
use crate::group::{make_group, FiniteGroup, GroupRef};

/// Alternating group on 4 letters, built from the even permutations in
/// lexicographic one-line order (so the identity is index 0).
pub fn alternating4(config: &Config) -> Result<FiniteGroup> {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..4).collect();
    loop {
        if parity(&cur) == 0 {
            perms.push(cur.clone());
        }
        let Some(i) = (0..3).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..4).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
    let rows: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let comp: Vec<usize> = (0..4).map(|x| p[q[x]]).collect();
                    index_of(&comp)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table("A4", &rows, config)
}

fn parity(p: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// Dicyclic group of order 12: ⟨a, b | a⁶ = 1, b² = a³, b a b⁻¹ = a⁻¹⟩.
/// Element `j·6 + k` encodes `a^k b^j`.
pub fn dicyclic3(config: &Config) -> Result<FiniteGroup> {
    let idx = |k: usize, j: usize| j * 6 + k % 6;
    let mut rows = vec![vec![0usize; 12]; 12];
    for k1 in 0..6 {
        for j1 in 0..2 {
            for k2 in 0..6 {
                for j2 in 0..2 {
                    // (a^k1 b^j1)(a^k2 b^j2); b a^k = a^{-k} b, b² = a³.
                    let v = if j1 == 0 {
                        idx(k1 + k2, j2)
                    } else if j2 == 0 {
                        idx(k1 + 6 - k2, 1)
                    } else {
                        idx(k1 + 6 - k2 + 3, 0)
                    };
                    rows[idx(k1, j1)][idx(k2, j2)] = v;
                }
            }
        }
    }
    FiniteGroup::from_table("Dic3", &rows, config)
}

/// Every isomorphism type of order ≤ 8, one representative each.
pub fn groups_leq_8(config: &Config) -> Result<Vec<GroupRef>> {
    let specs = [
        "C1", "C2", "C3", "C4", "K4", "C5", "C6", "S3", "C7", "C8", "C2xC4", "C2xC2xC2", "D4",
        "Q8",
    ];
    specs
        .iter()
        .map(|s| Ok(Arc::new(make_group(s, config)?)))
        .collect()
}

/// Every isomorphism type of order ≤ 12, one representative each.
pub fn groups_leq_12(config: &Config) -> Result<Vec<GroupRef>> {
    let mut out = groups_leq_8(config)?;
    for s in ["C9", "C3xC3", "C10", "D5", "C11", "C12", "C2xC6", "D6"] {
        out.push(Arc::new(make_group(s, config)?));
    }
    out.push(Arc::new(alternating4(config)?));
    out.push(Arc::new(dicyclic3(config)?));
    Ok(out)
}

/// The named seven-group set used for family-closure sweeps.
pub fn closure_sweep_set(config: &Config) -> Result<Vec<GroupRef>> {
    ["C2", "C4", "K4", "S3", "C6", "Q8", "D4"]
        .iter()
        .map(|s| Ok(Arc::new(make_group(s, config)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::conjugacy_classes;

    #[test]
    fn a4_structure() {
        let a4 = alternating4(&Config::default()).unwrap();
        assert_eq!(a4.order(), 12);
        assert_eq!(conjugacy_classes(&a4).len(), 4);
        let mut orders: Vec<usize> = (0..12).map(|x| a4.elem_order(x)).collect();
        orders.sort_unstable();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 3);
        assert_eq!(orders.iter().filter(|&&o| o == 3).count(), 8);
    }

    #[test]
    fn dic3_structure() {
        let dic = dicyclic3(&Config::default()).unwrap();
        assert_eq!(dic.order(), 12);
        // Unique element of order 2 (the central a³).
        let invols: Vec<usize> = (0..12).filter(|&x| dic.elem_order(x) == 2).collect();
        assert_eq!(invols, vec![3]);
        assert_eq!((0..12).filter(|&x| dic.elem_order(x) == 4).count(), 6);
    }

    #[test]
    fn catalogs_have_distinct_types() {
        use crate::group::groups_isomorphic;
        let cat = groups_leq_12(&Config::default()).unwrap();
        assert_eq!(cat.len(), 24);
        for i in 0..cat.len() {
            for j in i + 1..cat.len() {
                assert!(
                    !groups_isomorphic(&cat[i], &cat[j]),
                    "{} ≅ {}",
                    cat[i].name(),
                    cat[j].name()
                );
            }
        }
    }
}
