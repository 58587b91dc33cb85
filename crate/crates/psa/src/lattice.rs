//! Integer linear algebra: Smith and Hermite normal forms, kernel
//! lattices, and the center lattices they induce.
//!
//! All arithmetic is over arbitrary-precision integers. Kernel bases are
//! returned in row Hermite normal form (positive pivots, pivot columns
//! ascending) so that equal lattices print identically.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>, // row-major
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "dimension mismatch");
        IntMatrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&e| BigInt::from(e)).collect(),
        )
    }

    /// Clear denominators: the integer matrix with the same kernel.
    pub fn from_rational(rows: usize, cols: usize, entries: &[BigRational]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut lcm = BigInt::one();
        for q in entries {
            lcm = lcm.lcm(q.denom());
        }
        let data = entries
            .iter()
            .map(|q| q.numer() * (&lcm / q.denom()))
            .collect();
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * rhs.at(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = q * self.at(src, j);
            *self.at_mut(dst, j) -= delta;
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = q * self.at(i, src);
            *self.at_mut(i, dst) -= delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            *self.at_mut(i, j) = v;
        }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.at(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero());
                    *a.at_mut(i, j) = q;
                }
                *a.at_mut(i, k) = BigInt::zero();
            }
            prev = a.at(k, k).clone();
        }
        sign * a.at(n - 1, n - 1).clone()
    }

    /// Rank over the rationals (count of nonzero invariant factors).
    pub fn rank(&self) -> usize {
        let snf = smith_normal_form(self);
        (0..self.rows.min(self.cols))
            .take_while(|&i| !snf.s.at(i, i).is_zero())
            .count()
    }
}

/// `u * a * v = s` with `u`, `v` unimodular and `s` diagonal with
/// `d_1 | d_2 | ... >= 0`.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

fn find_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            if s.at(i, j).is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if s.at(i, j).abs() < s.at(bi, bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Nearest-integer division: remainder magnitude at most half the divisor.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if r.sign() == b.sign() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Clear row and column `t` using the pivot at `(t, t)`; re-selects a
/// smaller pivot whenever a division leaves a remainder.
fn clear_cross(s: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, t: usize) {
    loop {
        let Some((pi, pj)) = find_pivot(s, t) else {
            return;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        for i in t + 1..s.rows() {
            if !s.at(i, t).is_zero() {
                let q = div_round(s.at(i, t), s.at(t, t));
                s.row_sub(i, t, &q);
                u.row_sub(i, t, &q);
            }
        }
        for j in t + 1..s.cols() {
            if !s.at(t, j).is_zero() {
                let q = div_round(s.at(t, j), s.at(t, t));
                s.col_sub(j, t, &q);
                v.col_sub(j, t, &q);
            }
        }
        let col_clear = (t + 1..s.rows()).all(|i| s.at(i, t).is_zero());
        let row_clear = (t + 1..s.cols()).all(|j| s.at(t, j).is_zero());
        if col_clear && row_clear {
            return;
        }
        // leftover remainders are strictly smaller than the old pivot,
        // so the loop terminates
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithNormalForm {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let bound = a.rows().min(a.cols());

    for t in 0..bound {
        if find_pivot(&s, t).is_none() {
            break;
        }
        // reduce until the pivot divides the whole remaining block; folding
        // an offending row into row t strictly shrinks the pivot, so this
        // terminates
        loop {
            clear_cross(&mut s, &mut u, &mut v, t);
            let d = s.at(t, t).clone();
            let offender = (t + 1..s.rows())
                .flat_map(|i| (t + 1..s.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| !(s.at(i, j) % &d).is_zero());
            match offender {
                Some((i, _)) => {
                    let minus_one = -BigInt::one();
                    s.row_sub(t, i, &minus_one);
                    u.row_sub(t, i, &minus_one);
                }
                None => break,
            }
        }
    }

    for t in 0..bound {
        if s.at(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithNormalForm { u, s, v }
}

/// Row Hermite normal form of the lattice spanned by `rows`: pivots
/// positive and ascending, entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut m = rows;
    let mut r = 0;
    for col in 0..ncols {
        loop {
            let mut nonzero: Vec<usize> = (r..m.len()).filter(|&i| !m[i][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let i = nonzero[0];
                m.swap(r, i);
                break;
            }
            nonzero.sort_by_key(|&i| m[i][col].abs());
            let smallest = nonzero[0];
            m.swap(r, smallest);
            for &i in nonzero.iter().skip(1) {
                let i = if i == r { smallest } else { i };
                let q = div_round(&m[i][col], &m[r][col]);
                for c in 0..ncols {
                    let delta = &q * &m[r][c];
                    m[i][c] -= delta;
                }
            }
        }
        if r < m.len() && !m[r][col].is_zero() {
            if m[r][col].is_negative() {
                for c in 0..ncols {
                    m[r][c] = -m[r][c].clone();
                }
            }
            for i in 0..r {
                let q = m[i][col].div_floor(&m[r][col]);
                if !q.is_zero() {
                    for c in 0..ncols {
                        let delta = &q * &m[r][c];
                        m[i][c] -= delta;
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// Basis of the right kernel `{x : a * x = 0}` as HNF rows; the lattice
/// is saturated by construction (columns of a unimodular matrix).
pub fn right_kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let n = a.cols();
    let bound = a.rows().min(n);
    let mut kernel_cols = Vec::new();
    for j in 0..n {
        if j >= bound || snf.s.at(j, j).is_zero() {
            kernel_cols.push((0..n).map(|i| snf.v.at(i, j).clone()).collect::<Vec<_>>());
        }
    }
    hermite_rows(kernel_cols)
}

/// Basis of the left kernel `{m : m^T a = 0}` as HNF rows.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    right_kernel_basis(&a.transpose())
}

/// Whether `v` lies in the lattice spanned by HNF basis rows.
pub fn lattice_contains(hnf_basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut rem: Vec<BigInt> = v.to_vec();
    for row in hnf_basis {
        let pivot_col = match row.iter().position(|e| !e.is_zero()) {
            Some(c) => c,
            None => continue,
        };
        if rem[pivot_col].is_zero() {
            continue;
        }
        let (q, r) = rem[pivot_col].div_rem(&row[pivot_col]);
        if !r.is_zero() {
            return false;
        }
        for (x, b) in rem.iter_mut().zip(row) {
            *x -= &q * b;
        }
    }
    rem.iter().all(|e| e.is_zero())
}

/// A saturated lattice of exponent vectors whose monomials generate a
/// Poisson center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterBasis {
    /// Exponent vectors in ambient coordinates, HNF-normalized.
    pub generators: Vec<Vec<i64>>,
}

impl CenterBasis {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

fn to_i64(v: &BigInt) -> i64 {
    i64::try_from(v).expect("kernel entry out of machine range")
}

/// Restrict `pi` to the `alive` rows/columns, compute the left-kernel
/// lattice there, and embed the generators back into ambient coordinates
/// with zeros elsewhere.
pub fn center_basis(pi: &IntMatrix, alive: &[usize]) -> CenterBasis {
    assert_eq!(pi.rows(), pi.cols(), "pi must be square");
    let n = pi.rows();
    for &i in alive {
        assert!(i < n, "alive index out of range");
    }
    let k = alive.len();
    let mut sub = IntMatrix::zero(k, k);
    for (si, &i) in alive.iter().enumerate() {
        for (sj, &j) in alive.iter().enumerate() {
            *sub.at_mut(si, sj) = pi.at(i, j).clone();
        }
    }
    let basis = kernel_basis(&sub);
    let generators = basis
        .into_iter()
        .map(|row| {
            let mut full = vec![0i64; n];
            for (si, &i) in alive.iter().enumerate() {
                full[i] = to_i64(&row[si]);
            }
            full
        })
        .collect();
    CenterBasis { generators }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, entries)
    }

    fn assert_snf_identities(a: &IntMatrix) {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.s, "U*A*V != S for {a:?}");
        assert_eq!(snf.u.det().abs(), BigInt::one());
        assert_eq!(snf.v.det().abs(), BigInt::one());
        // diagonal, nonnegative, divisibility chain
        let bound = a.rows().min(a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert!(snf.s.at(i, j).is_zero());
                }
            }
        }
        for t in 0..bound {
            assert!(!snf.s.at(t, t).is_negative());
            if t + 1 < bound && !snf.s.at(t, t).is_zero() && !snf.s.at(t + 1, t + 1).is_zero() {
                assert!((snf.s.at(t + 1, t + 1) % snf.s.at(t, t)).is_zero());
            }
            if snf.s.at(t, t).is_zero() && t + 1 < bound {
                assert!(snf.s.at(t + 1, t + 1).is_zero());
            }
        }
    }

    #[test]
    fn snf_zero_matrix() {
        let a = m(2, 2, &[0, 0, 0, 0]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.s, IntMatrix::zero(2, 2));
        assert_eq!(snf.u, IntMatrix::identity(2));
        assert_eq!(snf.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_symplectic_block() {
        let a = m(2, 2, &[0, 1, -1, 0]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.s, m(2, 2, &[1, 0, 0, 1]));
        assert_snf_identities(&a);
    }

    #[test]
    fn snf_already_diagonal() {
        let a = m(2, 2, &[2, 0, 0, 4]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.s, m(2, 2, &[2, 0, 0, 4]));
        assert_snf_identities(&a);
    }

    #[test]
    fn snf_divisibility_fixup() {
        let a = m(2, 2, &[2, 0, 0, 3]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.s, m(2, 2, &[1, 0, 0, 6]));
        assert_snf_identities(&a);
    }

    fn all_ones_skew(n: usize) -> IntMatrix {
        let mut a = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in i + 1..n {
                *a.at_mut(i, j) = BigInt::one();
                *a.at_mut(j, i) = -BigInt::one();
            }
        }
        a
    }

    #[test]
    fn kernel_all_ones_odd() {
        let basis = kernel_basis(&all_ones_skew(3));
        assert_eq!(basis.len(), 1);
        assert_eq!(
            basis[0],
            vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]
        );
    }

    #[test]
    fn kernel_all_ones_even_is_trivial() {
        assert!(kernel_basis(&all_ones_skew(2)).is_empty());
        assert!(kernel_basis(&all_ones_skew(4)).is_empty());
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let basis = kernel_basis(&IntMatrix::zero(2, 2));
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], vec![BigInt::one(), BigInt::zero()]);
        assert_eq!(basis[1], vec![BigInt::zero(), BigInt::one()]);
    }

    #[test]
    fn center_basis_restriction() {
        let pi = all_ones_skew(3);
        // full ring: the alternating vector
        let full = center_basis(&pi, &[0, 1, 2]);
        assert_eq!(full.generators, vec![vec![1, -1, 1]]);
        // kill x1: remaining 2x2 block has trivial kernel
        let sub = center_basis(&pi, &[1, 2]);
        assert!(sub.generators.is_empty());
        // only x1 alive: 1x1 zero block, full kernel
        let single = center_basis(&pi, &[0]);
        assert_eq!(single.generators, vec![vec![1, 0, 0]]);
    }

    #[test]
    fn hermite_rows_sign_and_reduction() {
        let rows = vec![vec![BigInt::from(-1), BigInt::from(1), BigInt::from(-1)]];
        let h = hermite_rows(rows);
        assert_eq!(
            h,
            vec![vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]]
        );
    }

    #[test]
    fn hermite_rows_reduce_entries_above_pivots() {
        let b = |x: i64| BigInt::from(x);
        // Z(2,0) + Z(1,1) has HNF basis [[1,1],[0,2]]
        let h = hermite_rows(vec![vec![b(2), b(0)], vec![b(1), b(1)]]);
        assert_eq!(h, vec![vec![b(1), b(1)], vec![b(0), b(2)]]);
        // same lattice, same normal form from another generating set
        let h2 = hermite_rows(vec![vec![b(3), b(-1)], vec![b(1), b(1)], vec![b(2), b(0)]]);
        assert_eq!(h2, h);
        assert!(lattice_contains(&h, &[b(2), b(0)]));
        assert!(lattice_contains(&h, &[b(3), b(-1)]));
        assert!(!lattice_contains(&h, &[b(1), b(0)]));
    }

    #[test]
    fn lattice_membership() {
        let basis = kernel_basis(&all_ones_skew(3));
        let v = |a: i64, b: i64, c: i64| vec![BigInt::from(a), BigInt::from(b), BigInt::from(c)];
        assert!(lattice_contains(&basis, &v(2, -2, 2)));
        assert!(lattice_contains(&basis, &v(0, 0, 0)));
        assert!(!lattice_contains(&basis, &v(1, 1, 1)));
        assert!(!lattice_contains(&basis, &v(1, -1, 0)));
    }

    /// Brute-force check: box points solving m^T pi = 0 coincide with
    /// box points of the kernel lattice.
    fn check_kernel_against_box(pi: &IntMatrix) {
        let n = pi.rows();
        let basis = kernel_basis(pi);
        for row in &basis {
            let as_mat = IntMatrix::new(1, n, row.clone());
            assert_eq!(
                as_mat.mul(pi),
                IntMatrix::zero(1, n),
                "basis row not in kernel"
            );
        }
        // saturation: all invariant factors 1
        if !basis.is_empty() {
            let rows = basis.len();
            let flat: Vec<BigInt> = basis.iter().flatten().cloned().collect();
            let bm = IntMatrix::new(rows, n, flat);
            let snf = smith_normal_form(&bm);
            for t in 0..rows {
                assert_eq!(snf.s.at(t, t), &BigInt::one(), "kernel basis not saturated");
            }
        }
        let mut point = vec![-3i64; n];
        loop {
            let v: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
            let vm = IntMatrix::new(1, n, v.clone());
            let solves = vm.mul(pi) == IntMatrix::zero(1, n);
            assert_eq!(
                solves,
                lattice_contains(&basis, &v),
                "box disagreement at {point:?}"
            );
            let mut k = 0;
            loop {
                if k == n {
                    return;
                }
                point[k] += 1;
                if point[k] <= 3 {
                    break;
                }
                point[k] = -3;
                k += 1;
            }
        }
    }

    #[test]
    fn kernel_box_oracle_small_cases() {
        check_kernel_against_box(&all_ones_skew(2));
        check_kernel_against_box(&all_ones_skew(3));
        check_kernel_against_box(&IntMatrix::zero(2, 2));
        check_kernel_against_box(&m(3, 3, &[0, 2, -1, -2, 0, 3, 1, -3, 0]));
    }

    proptest! {
        #[test]
        fn snf_identities_hold(
            rows in 1usize..=4,
            cols in 1usize..=4,
            seed in proptest::collection::vec(-6i64..=6, 16)
        ) {
            let entries: Vec<i64> = seed.into_iter().take(rows * cols).collect();
            prop_assume!(entries.len() == rows * cols);
            assert_snf_identities(&m(rows, cols, &entries));
        }

        #[test]
        fn kernel_rows_annihilate(
            n in 2usize..=4,
            seed in proptest::collection::vec(-3i64..=3, 6)
        ) {
            let mut a = IntMatrix::zero(n, n);
            let mut it = seed.into_iter().cycle();
            for i in 0..n {
                for j in i + 1..n {
                    let v = BigInt::from(it.next().unwrap());
                    *a.at_mut(i, j) = v.clone();
                    *a.at_mut(j, i) = -v;
                }
            }
            for row in kernel_basis(&a) {
                let vm = IntMatrix::new(1, n, row);
                prop_assert_eq!(vm.mul(&a), IntMatrix::zero(1, n));
            }
        }
    }
}
