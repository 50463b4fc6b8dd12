//! Ordinary character tables of small finite groups, computed numerically:
//! a random Hermitian combination of conjugacy-class sums acting on the
//! regular representation splits it into isotypic components, whose
//! dimensions and central characters recover the table. Downstream code
//! only consumes integers (dimensions, multiplicities), so values are
//! snapped where they must be integral and the table is canonically
//! ordered.

use num_complex::Complex64;
use rand::Rng;

use crate::config::{rng_for, stream, Config};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, GroupRef};
use crate::matrix::{hermitian_eigen, ComplexMatrix};

#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: GroupRef,
    classes: Vec<Vec<usize>>,
    /// chars[i][j] = value of irreducible i on class j.
    chars: Vec<Vec<Complex64>>,
    dims: Vec<usize>,
}

impl CharacterTable {
    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn chars(&self) -> &[Vec<Complex64>] {
        &self.chars
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Index of the conjugacy class containing an element.
    pub fn class_of(&self, g: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.binary_search(&g).is_ok())
            .expect("classes partition the group")
    }

    /// The character of an explicit matrix representation, per class.
    pub fn class_values(&self, per_element: &[Complex64]) -> Vec<Complex64> {
        self.classes.iter().map(|c| per_element[c[0]]).collect()
    }
}

/// A point of hom(H, U(n))/U(n): multiplicities of each irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepTypeVector {
    pub mults: Vec<usize>,
}

fn class_sum_matrices(group: &GroupRef, classes: &[Vec<usize>]) -> Vec<ComplexMatrix> {
    let n = group.order();
    classes
        .iter()
        .map(|class| {
            let mut z = ComplexMatrix::zeros(n, n);
            for &g in class {
                for j in 0..n {
                    z[(group.mul(g, j), j)] += Complex64::ONE;
                }
            }
            z
        })
        .collect()
}

/// Key used to order irreducibles deterministically: dimension first, then
/// character values class by class with larger real parts first. The
/// trivial character is the unique all-ones row, so it always leads its
/// dimension block.
fn ordering_key(dim: usize, row: &[Complex64]) -> (usize, Vec<(i64, i64)>) {
    let round = |x: f64| (x * 1e6).round() as i64;
    (dim, row.iter().map(|z| (-round(z.re), round(z.im))).collect())
}

pub fn character_table(group: &GroupRef, config: &Config) -> Result<CharacterTable> {
    let n = group.order();
    if n > config.character_order_cap {
        return Err(Error::OrderOverflow {
            what: "character table order".into(),
            limit: config.character_order_cap,
            actual: n,
        });
    }
    let classes = conjugacy_classes(group);
    let k = classes.len();
    let zsums = class_sum_matrices(group, &classes);
    let mut rng = rng_for(config.seed, stream::CHARACTER_TABLE);
    for _attempt in 0..=config.split_retries {
        let mut y = ComplexMatrix::zeros(n, n);
        for z in &zsums {
            let t = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            let u = Complex64::new(0.0, rng.random_range(-1.0..1.0));
            let zadj = z.adjoint();
            y = y
                .add(&z.add(&zadj).scale(t))
                .add(&z.sub(&zadj).scale(u));
        }
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
        if clusters.len() != k {
            continue;
        }
        // The class sum of class j acts on the isotypic component of the
        // i-th irreducible by the scalar |C_j|·χ_i(g_j)/d_i; average it
        // over the cluster's eigenvectors and invert the formula.
        let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(k);
        let mut ok = true;
        for &(lo, hi) in &clusters {
            let size = hi - lo;
            let d = (size as f64).sqrt().round() as usize;
            if d * d != size {
                ok = false;
                break;
            }
            let mut row = Vec::with_capacity(k);
            for (j, z) in zsums.iter().enumerate() {
                let mut omega = Complex64::ZERO;
                for c in lo..hi {
                    for a in 0..n {
                        let mut zv = Complex64::ZERO;
                        for b in 0..n {
                            zv += z[(a, b)] * vecs[(b, c)];
                        }
                        omega += vecs[(a, c)].conj() * zv;
                    }
                }
                omega /= size as f64;
                row.push(omega * d as f64 / classes[j].len() as f64);
            }
            // The identity class must evaluate to the dimension.
            if (row[0] - Complex64::new(d as f64, 0.0)).norm() > config.snap_tol {
                ok = false;
                break;
            }
            row[0] = Complex64::new(d as f64, 0.0);
            rows.push((d, row));
        }
        if !ok {
            continue;
        }
        // Row orthogonality screens out contaminated eigenspaces.
        let ortho = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
            let mut s = Complex64::ZERO;
            for j in 0..k {
                s += a[j] * b[j].conj() * classes[j].len() as f64;
            }
            s / n as f64
        };
        for i in 0..k {
            for j in 0..k {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (ortho(&rows[i].1, &rows[j].1) - expect).norm() > config.snap_tol {
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        rows.sort_by_key(|(d, row)| ordering_key(*d, row));
        let dims: Vec<usize> = rows.iter().map(|(d, _)| *d).collect();
        debug_assert_eq!(dims.iter().map(|d| d * d).sum::<usize>(), n);
        let chars = rows.into_iter().map(|(_, row)| row).collect();
        return Ok(CharacterTable {
            group: group.clone(),
            classes,
            chars,
            dims,
        });
    }
    Err(Error::ConvergenceFailure(
        "class-sum eigenvalues failed to separate after retries".into(),
    ))
}

/// Inner-product decomposition of a class function that is promised to be a
/// character; fails when multiplicities do not snap to nonnegative
/// integers.
pub fn decompose_character(
    chi: &[Complex64],
    table: &CharacterTable,
    config: &Config,
) -> Result<RepTypeVector> {
    let k = table.class_count();
    if chi.len() != k {
        return Err(Error::NotACharacter(format!(
            "expected {k} class values, got {}",
            chi.len()
        )));
    }
    let n = table.group.order() as f64;
    let mut mults = Vec::with_capacity(k);
    for row in &table.chars {
        let mut m = Complex64::ZERO;
        for j in 0..k {
            m += chi[j] * row[j].conj() * table.classes[j].len() as f64;
        }
        m /= n;
        let rounded = m.re.round();
        if (m - Complex64::new(rounded, 0.0)).norm() > config.snap_tol {
            return Err(Error::NotACharacter(format!(
                "multiplicity {m} does not snap to an integer"
            )));
        }
        if rounded < 0.0 {
            return Err(Error::NotACharacter(format!(
                "negative multiplicity {rounded}"
            )));
        }
        mults.push(rounded as usize);
    }
    Ok(RepTypeVector { mults })
}

/// All multiplicity vectors with Σ n_i·d_i = n, in lexicographic order.
pub fn enumerate_rep_types(table: &CharacterTable, n: usize) -> Vec<RepTypeVector> {
    let dims = table.dims();
    let mut out = Vec::new();
    let mut current = vec![0usize; dims.len()];
    fn descend(
        i: usize,
        remaining: usize,
        dims: &[usize],
        current: &mut Vec<usize>,
        out: &mut Vec<RepTypeVector>,
    ) {
        if i == dims.len() {
            if remaining == 0 {
                out.push(RepTypeVector {
                    mults: current.clone(),
                });
            }
            return;
        }
        for m in 0..=remaining / dims[i] {
            current[i] = m;
            descend(i + 1, remaining - m * dims[i], dims, current, out);
        }
        current[i] = 0;
    }
    descend(0, n, dims, &mut current, &mut out);
    out
}

/// The blocks of the commutant ∏ U(n_i): the positive multiplicities, in
/// ascending order.
pub fn centralizer_type(t: &RepTypeVector) -> Vec<usize> {
    let mut blocks: Vec<usize> = t.mults.iter().copied().filter(|&m| m > 0).collect();
    blocks.sort_unstable();
    blocks
}
