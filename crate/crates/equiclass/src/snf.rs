//! Integer Smith normal form with the transform matrices tracked on
//! demand. Sizes here come from bar-complex differentials of groups of
//! order ≤ 16, so the classic pivot-and-reduce algorithm with
//! smallest-pivot selection is plenty. Entries stay in i64; debug builds
//! trap on overflow, which has ample headroom for these inputs.

#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal d_1 | d_2 | …, nonnegative, zeros trailing.
    pub diag: Vec<i64>,
    /// u · a · v = diag(d). Empty when their tracking was not requested.
    pub u: Vec<Vec<i64>>,
    pub u_inv: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(&r, &v)| r * v).sum())
        .collect()
}

struct Work {
    a: Vec<Vec<i64>>,
    u: Vec<Vec<i64>>,
    u_inv: Vec<Vec<i64>>,
    v: Vec<Vec<i64>>,
    v_inv: Vec<Vec<i64>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if !self.u.is_empty() {
            self.u.swap(i, j);
            for row in &mut self.u_inv {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if !self.v.is_empty() {
            for row in &mut self.v {
                row.swap(i, j);
            }
            self.v_inv.swap(i, j);
        }
    }

    /// row_i += c·row_j
    fn add_row(&mut self, i: usize, j: usize, c: i64) {
        if c == 0 {
            return;
        }
        for k in 0..self.a[0].len() {
            self.a[i][k] += c * self.a[j][k];
        }
        if !self.u.is_empty() {
            for k in 0..self.u[0].len() {
                self.u[i][k] += c * self.u[j][k];
            }
            for row in &mut self.u_inv {
                row[j] -= c * row[i];
            }
        }
    }

    /// col_i += c·col_j
    fn add_col(&mut self, i: usize, j: usize, c: i64) {
        if c == 0 {
            return;
        }
        for row in &mut self.a {
            row[i] += c * row[j];
        }
        if !self.v.is_empty() {
            for row in &mut self.v {
                row[i] += c * row[j];
            }
            for k in 0..self.v_inv[0].len() {
                let vi = self.v_inv[i][k];
                self.v_inv[j][k] -= c * vi;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -*x;
        }
        if !self.u.is_empty() {
            for x in &mut self.u[i] {
                *x = -*x;
            }
            for row in &mut self.u_inv {
                row[i] = -row[i];
            }
        }
    }
}

pub fn smith_normal_form(input: &[Vec<i64>]) -> Snf {
    smith_normal_form_partial(input, true, true)
}

/// Smith normal form tracking only the requested transforms; useful when
/// the row space is much larger than the column space and U would dwarf
/// the actual elimination work.
pub fn smith_normal_form_partial(input: &[Vec<i64>], need_u: bool, need_v: bool) -> Snf {
    let rows = input.len();
    let cols = if rows == 0 { 0 } else { input[0].len() };
    let empty: Vec<Vec<i64>> = Vec::new();
    let mut w = Work {
        a: input.to_vec(),
        u: if need_u { identity(rows) } else { empty.clone() },
        u_inv: if need_u { identity(rows) } else { empty.clone() },
        v: if need_v { identity(cols) } else { empty.clone() },
        v_inv: if need_v { identity(cols) } else { empty },
    };
    let steps = rows.min(cols);
    for t in 0..steps {
        // Pivot: smallest nonzero magnitude in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w.a[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| w.a[i][j].abs() < w.a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = div_nearest(w.a[i][t], w.a[t][t]);
                w.add_row(i, t, -q);
                if w.a[i][t] != 0 {
                    // Remainder is strictly smaller; make it the pivot.
                    w.swap_rows(t, i);
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = div_nearest(w.a[t][j], w.a[t][t]);
                w.add_col(j, t, -q);
                if w.a[t][j] != 0 {
                    w.swap_cols(t, j);
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        // Divisibility: the pivot must divide the rest of the block.
        let mut retry = true;
        while retry {
            retry = false;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if w.a[i][j] % w.a[t][t] != 0 {
                        w.add_row(t, i, 1);
                        // Re-clean the row that just got polluted.
                        loop {
                            let mut clean = true;
                            for jj in t + 1..cols {
                                let q = div_nearest(w.a[t][jj], w.a[t][t]);
                                w.add_col(jj, t, -q);
                                if w.a[t][jj] != 0 {
                                    w.swap_cols(t, jj);
                                    clean = false;
                                }
                            }
                            for ii in t + 1..rows {
                                let q = div_nearest(w.a[ii][t], w.a[t][t]);
                                w.add_row(ii, t, -q);
                                if w.a[ii][t] != 0 {
                                    w.swap_rows(t, ii);
                                    clean = false;
                                }
                            }
                            if clean {
                                break;
                            }
                        }
                        retry = true;
                        break 'scan;
                    }
                }
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
    }
    let diag = (0..steps).map(|t| w.a[t][t]).collect();
    Snf {
        diag,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// Quotient with remainder of least magnitude.
fn div_nearest(a: i64, b: i64) -> i64 {
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + r.signum() * b.signum()
    } else {
        q
    }
}

/// Whether `target` lies in the column lattice of `gens`.
pub fn lattice_contains(gens: &[Vec<i64>], target: &[i64]) -> bool {
    let snf = smith_normal_form_partial(gens, true, false);
    let c = mat_vec(&snf.u, target);
    for (i, &ci) in c.iter().enumerate() {
        let d = snf.diag.get(i).copied().unwrap_or(0);
        if d == 0 {
            if ci != 0 {
                return false;
            }
        } else if ci % d != 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(a: &[Vec<i64>]) -> Snf {
        let snf = smith_normal_form(a);
        let rows = a.len();
        let cols = a[0].len();
        // u·a·v equals the diagonal matrix.
        let prod = mat_mul(&mat_mul(&snf.u, a), &snf.v);
        for i in 0..rows {
            for j in 0..cols {
                let expect = if i == j {
                    snf.diag.get(i).copied().unwrap_or(0)
                } else {
                    0
                };
                assert_eq!(prod[i][j], expect, "diagonal mismatch at ({i}, {j})");
            }
        }
        assert_eq!(mat_mul(&snf.u, &snf.u_inv), identity(rows));
        assert_eq!(mat_mul(&snf.v, &snf.v_inv), identity(cols));
        for w in snf.diag.windows(2) {
            if w[1] != 0 {
                assert!(w[0] != 0 && w[1] % w[0] == 0, "divisibility fails: {:?}", snf.diag);
            }
        }
        assert!(snf.diag.iter().all(|&d| d >= 0));
        snf
    }

    #[test]
    fn known_forms() {
        let snf = check(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(snf.diag, vec![2, 4]);
        let snf = check(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(snf.diag, vec![1, 1]);
        let snf = check(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(snf.diag, vec![0, 0]);
        // Classic presentation of ℤ/2 ⊕ ℤ/6.
        let snf = check(&[vec![2, 0], vec![0, 6]]);
        assert_eq!(snf.diag, vec![2, 6]);
        let snf = check(&[vec![6, 0], vec![0, 4]]);
        assert_eq!(snf.diag, vec![2, 12]);
    }

    #[test]
    fn random_rectangles() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..40 {
            let rows = rng.random_range(1..6);
            let cols = rng.random_range(1..6);
            let a: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(-9..10)).collect())
                .collect();
            check(&a);
        }
    }

    #[test]
    fn lattice_membership() {
        // Columns (2,0) and (0,3).
        let gens = vec![vec![2, 0], vec![0, 3]];
        assert!(lattice_contains(&gens, &[4, 9]));
        assert!(lattice_contains(&gens, &[0, 0]));
        assert!(!lattice_contains(&gens, &[1, 0]));
        assert!(!lattice_contains(&gens, &[2, 2]));
        // Rank-deficient: the line through (1, 2).
        let line = vec![vec![1], vec![2]];
        assert!(lattice_contains(&line, &[3, 6]));
        assert!(!lattice_contains(&line, &[3, 5]));
    }
}
