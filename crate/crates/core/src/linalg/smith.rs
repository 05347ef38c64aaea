use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// `left · M · right = diag(divisors)`, with `left`, `right` unimodular and
/// each divisor dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// Full diagonal, length `min(rows, cols)`; zeros come last.
    pub divisors: Vec<Int>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix `left · M · right` with the original shape.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, v) in self.divisors.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }
}

fn smallest_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let v = &a[(r, c)];
            if v.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if a[(br, bc)].abs() <= v.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

/// row[dst] += factor * row[src]
fn add_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, factor: &Int) {
    for c in 0..m.cols() {
        let v = &m[(src, c)] * factor;
        if !v.is_zero() {
            m[(dst, c)] += v;
        }
    }
}

/// col[dst] += factor * col[src]
fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, factor: &Int) {
    for r in 0..m.rows() {
        let v = &m[(r, src)] * factor;
        if !v.is_zero() {
            m[(r, dst)] += v;
        }
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let v = -m[(r, c)].clone();
        m[(r, c)] = v;
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivot rule: smallest nonzero absolute value in the remaining block,
/// followed by Euclidean reduction of its row and column.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        while let Some((pr, pc)) = smallest_pivot(&a, t) {
            a.swap_rows(t, pr);
            left.swap_rows(t, pr);
            a.swap_cols(t, pc);
            right.swap_cols(t, pc);

            let pivot = a[(t, t)].clone();
            let mut dirty = false;
            for r in t + 1..rows {
                if a[(r, t)].is_zero() {
                    continue;
                }
                let q = -a[(r, t)].div_floor(&pivot);
                add_row_multiple(&mut a, r, t, &q);
                add_row_multiple(&mut left, r, t, &q);
                dirty |= !a[(r, t)].is_zero();
            }
            for c in t + 1..cols {
                if a[(t, c)].is_zero() {
                    continue;
                }
                let q = -a[(t, c)].div_floor(&pivot);
                add_col_multiple(&mut a, c, t, &q);
                add_col_multiple(&mut right, c, t, &q);
                dirty |= !a[(t, c)].is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column are clear; the pivot must divide the rest.
            let offender = (t + 1..rows).find(|&r| {
                (t + 1..cols).any(|c| !a[(r, c)].is_multiple_of(&pivot))
            });
            match offender {
                Some(r) => {
                    let one = Int::one();
                    add_row_multiple(&mut a, t, r, &one);
                    add_row_multiple(&mut left, t, r, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut left, t);
        }
    }

    let divisors = (0..rows.min(cols)).map(|i| a[(i, i)].clone()).collect();
    SmithDecomposition {
        left,
        right,
        divisors,
    }
}

/// Basis (as columns) of the saturated integer kernel `{x ∈ ℤⁿ : Mx = 0}`.
pub fn kernel_saturated(m: &RatMatrix) -> IntMatrix {
    let int = m.clear_row_denominators();
    let snf = smith_normal_form(&int);
    let r = snf.rank();
    snf.right.submatrix(0, m.cols(), r, m.cols())
}

/// Structure of `ℤ^ambient / span(generators)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelInvariants {
    /// Nonzero elementary divisors of the generator matrix (ones included).
    pub divisors: Vec<Int>,
    /// Rank of the free part of the quotient.
    pub free_rank: usize,
}

impl CokernelInvariants {
    /// Divisors greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.divisors.iter().all(One::is_one)
    }

    /// Order of the quotient, `None` if it is infinite.
    pub fn order(&self) -> Option<Int> {
        (self.free_rank == 0).then(|| self.divisors.iter().product())
    }
}

/// Elementary divisors of the quotient of `ℤ^ambient_rank` by the column span.
pub fn cokernel_invariants(generators: &IntMatrix, ambient_rank: usize) -> Result<CokernelInvariants> {
    if generators.rows() != ambient_rank {
        return Err(Error::ShapeMismatch(format!(
            "generators have {} rows, ambient rank is {}",
            generators.rows(),
            ambient_rank
        )));
    }
    let snf = smith_normal_form(generators);
    let divisors: Vec<Int> = snf.divisors.into_iter().filter(|d| !d.is_zero()).collect();
    Ok(CokernelInvariants {
        free_rank: ambient_rank - divisors.len(),
        divisors,
    })
}

/// Coordinates with respect to a full-column-rank lattice basis, backed by
/// one Smith decomposition of the basis matrix.
#[derive(Clone, Debug)]
pub struct LatticeCoordinates {
    basis: IntMatrix,
    snf: SmithDecomposition,
}

impl LatticeCoordinates {
    /// Panics unless `basis` has full column rank.
    pub fn new(basis: IntMatrix) -> Self {
        let snf = smith_normal_form(&basis);
        assert_eq!(snf.rank(), basis.cols(), "lattice basis is not independent");
        LatticeCoordinates { basis, snf }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Integer `c` with `basis · c = v`, or `None` if `v` is outside the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        let uv = self.snf.left.mul_vec(v);
        let r = self.rank();
        if uv[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut y = Vec::with_capacity(r);
        for (i, d) in self.snf.divisors.iter().enumerate().take(r) {
            let (q, rem) = uv[i].div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            y.push(q);
        }
        Some(self.snf.right.mul_vec(&y))
    }

    /// A vector of the ambient lattice representing a generator of the
    /// nontrivial part of `ambient / span(columns of coords)`; `coords` are
    /// columns in this lattice's coordinates.
    pub fn cokernel_witness(&self, coords: &IntMatrix) -> Option<Vec<Int>> {
        let snf = smith_normal_form(coords);
        let n = coords.rows();
        let idx = (0..n).find(|&i| snf.divisors.get(i).is_none_or(|d| !d.is_one()))?;
        // left⁻¹ · e_idx, expressed in the ambient lattice.
        let inv = snf.left.to_rational().inverse()?.to_integer()?;
        let local = inv.column(idx);
        Some(self.basis.mul_vec(&local))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(m: &IntMatrix, expected: &[i64]) {
        let snf = smith_normal_form(m);
        assert_eq!(snf.divisors, ints(expected));
        assert_eq!(snf.left.mul(m).mul(&snf.right), snf.diagonal_matrix());
        assert!(snf.left.is_unimodular());
        assert!(snf.right.is_unimodular());
    }

    #[test]
    fn normal_form_examples() {
        check(&IntMatrix::from_i64_rows(&[&[3, 0], &[0, 6]]), &[3, 6]);
        check(&IntMatrix::identity(2), &[1, 1]);
        // d1 = gcd of entries, d1·d2 = |det| = 8
        check(&IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]), &[2, 4]);
        check(&IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]), &[1, 6]);
        check(&IntMatrix::from_i64_rows(&[&[0, 0, 0], &[0, 0, 0]]), &[0, 0]);
        check(&IntMatrix::from_i64_rows(&[&[4, 6, 0], &[6, 9, 0]]), &[1, 0]);
    }

    #[test]
    fn kernels_are_saturated() {
        let k = kernel_saturated(&RatMatrix::from_i64_rows(&[&[1, -1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == ints(&[1, 1]) || v == ints(&[-1, -1]));
        let k = kernel_saturated(&RatMatrix::from_i64_rows(&[&[2, -2]]));
        let v = k.column(0);
        assert!(v == ints(&[1, 1]) || v == ints(&[-1, -1]));
    }

    #[test]
    fn cokernel_examples() {
        let inv = cokernel_invariants(&IntMatrix::identity(3), 3).unwrap();
        assert!(inv.is_trivial());
        let inv = cokernel_invariants(&IntMatrix::from_i64_rows(&[&[2], &[0]]), 2).unwrap();
        assert_eq!(inv.divisors, ints(&[2]));
        assert_eq!(inv.free_rank, 1);
        assert_eq!(inv.torsion(), ints(&[2]));
        assert!(cokernel_invariants(&IntMatrix::identity(2), 3).is_err());
    }

    #[test]
    fn lattice_coordinates() {
        let basis = IntMatrix::from_i64_rows(&[&[1, 0], &[1, 2], &[0, 1]]);
        let lc = LatticeCoordinates::new(basis);
        assert_eq!(lc.coordinates(&ints(&[3, 5, 1])), Some(ints(&[3, 1])));
        assert_eq!(lc.coordinates(&ints(&[1, 0, 0])), None);
        let coords = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        let w = lc.cokernel_witness(&coords).unwrap();
        let c = lc.coordinates(&w).unwrap();
        // witness is not in the sublattice spanned by (1,0),(0,2)
        assert!(!(&c[1] % BigInt::from(2)).is_zero());
    }
}
