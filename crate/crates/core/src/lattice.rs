//! Exact integer-matrix normal forms and finite abelian group arithmetic.
//!
//! Everything here runs over arbitrary-precision integers; unimodular
//! transforms can blow up well past machine words even when the input
//! entries are tiny, so there is no fast path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
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
            let c = self.cols;
            self.entries.swap(a * c + j, b * c + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let c = self.cols;
            self.entries.swap(i * c + a, i * c + b);
        }
    }

    /// row a += q * row b
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let t = q * &self[(b, j)];
            self[(a, j)] += t;
        }
    }

    /// col a += q * col b
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let t = q * &self[(i, b)];
            self[(i, a)] += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let t = -self[(a, j)].clone();
            self[(a, j)] = t;
        }
    }

    /// Determinant by cofactor-free Bareiss elimination over the rationals
    /// implemented with exact integer division. Test helper, small matrices.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Row-operation Hermite normal form: returns (h, u) with h = u * m,
/// u unimodular, h in row echelon with positive pivots and entries above
/// each pivot reduced into [0, pivot).
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..h.cols {
        if pivot_row == h.rows {
            break;
        }
        // gcd out the column below pivot_row by repeated remainder steps
        loop {
            // smallest nonzero |entry| at or below pivot_row
            let mut best: Option<usize> = None;
            for r in pivot_row..h.rows {
                if h[(r, col)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(r),
                    Some(b) => {
                        if h[(r, col)].abs() < h[(b, col)].abs() {
                            best = Some(r);
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(pivot_row, b);
            u.swap_rows(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..h.rows {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = -(&h[(r, col)] / &h[(pivot_row, col)]);
                h.add_row(r, pivot_row, &q);
                u.add_row(r, pivot_row, &q);
                if !h[(r, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        // reduce entries above the pivot into [0, pivot)
        for r in 0..pivot_row {
            let q = -h[(r, col)].div_floor(&h[(pivot_row, col)]);
            if !q.is_zero() {
                h.add_row(r, pivot_row, &q);
                u.add_row(r, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form: returns (s, u, v) with s = u * m * v diagonal,
/// s_1 | s_2 | ..., nonnegative diagonal, u and v unimodular.
///
/// Pivot choice is the smallest-absolute-value nonzero entry of the
/// remaining submatrix, ties broken by lowest (row, col), so the
/// transforms are deterministic.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);

    for t in 0..n {
        'pivot: loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..s.rows {
                for j in t..s.cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some((i, j)),
                        Some(b) => {
                            if s[(i, j)].abs() < s[b].abs() {
                                best = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // clear column t below the pivot
            let mut dirty = false;
            for i in t + 1..s.rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&s[(i, t)] / &s[(t, t)]);
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !s[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..s.cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&s[(t, j)] / &s[(t, t)]);
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !s[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // pivot must divide the rest of the submatrix
            for i in t + 1..s.rows {
                for j in t + 1..s.cols {
                    if !(&s[(i, j)] % &s[(t, t)]).is_zero() {
                        s.add_row(t, i, &BigInt::one());
                        u.add_row(t, i, &BigInt::one());
                        continue 'pivot;
                    }
                }
            }
            break;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

/// One coordinate per invariant factor (then per free summand), reduced
/// mod the factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn from_i64(coords: &[i64]) -> Self {
        GroupElement {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }
}

/// Finite abelian group in invariant-factor form, plus an optional free
/// part. Factors satisfy d_1 | d_2 | ..., each >= 2; the trivial group is
/// the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: vec![],
            free_rank: 0,
        }
    }

    pub fn from_factors(factors: &[i64]) -> Self {
        let invariant_factors: Vec<BigInt> = factors.iter().map(|&d| BigInt::from(d)).collect();
        let g = FiniteAbelianGroup {
            invariant_factors,
            free_rank: 0,
        };
        g.check_chain();
        g
    }

    fn check_chain(&self) {
        for d in &self.invariant_factors {
            assert!(*d >= BigInt::from(2), "invariant factor below 2");
        }
        for w in self.invariant_factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn num_generators(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    /// None when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(
            self.invariant_factors
                .iter()
                .fold(BigInt::one(), |acc, d| acc * d),
        )
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![BigInt::zero(); self.num_generators()],
        }
    }

    pub fn validate(&self, e: &GroupElement) -> Result<(), Error> {
        if e.coords.len() != self.num_generators() {
            return Err(Error::MalformedElement(format!(
                "element has {} coordinates, group has {} generators",
                e.coords.len(),
                self.num_generators()
            )));
        }
        for (i, d) in self.invariant_factors.iter().enumerate() {
            if e.coords[i].is_negative() || e.coords[i] >= *d {
                return Err(Error::MalformedElement(format!(
                    "coordinate {} out of range [0, {})",
                    e.coords[i], d
                )));
            }
        }
        Ok(())
    }

    pub fn reduce(&self, coords: &[BigInt]) -> GroupElement {
        assert_eq!(coords.len(), self.num_generators());
        let coords = coords
            .iter()
            .enumerate()
            .map(|(i, c)| match self.invariant_factors.get(i) {
                Some(d) => c.mod_floor(d),
                None => c.clone(),
            })
            .collect();
        GroupElement { coords }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let sum: Vec<BigInt> = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        self.reduce(&sum)
    }

    /// All elements, in lexicographic coordinate order. Finite groups only.
    pub fn elements(&self) -> Vec<GroupElement> {
        assert_eq!(self.free_rank, 0, "cannot enumerate an infinite group");
        let mut out = vec![self.zero()];
        for (i, d) in self.invariant_factors.iter().enumerate() {
            let mut next = Vec::new();
            let mut k = BigInt::zero();
            while k < *d {
                for e in &out {
                    let mut c = e.coords.clone();
                    c[i] = k.clone();
                    next.push(GroupElement { coords: c });
                }
                k += 1;
            }
            out = next;
        }
        out.sort();
        out
    }
}

/// Cokernel Z^n / rowspan(rel) in invariant-factor form, together with the
/// images of the standard generators e_1 .. e_n.
pub fn group_from_relations(rel: &IntMatrix) -> (FiniteAbelianGroup, Vec<GroupElement>) {
    let n = rel.cols;
    let (s, _u, v) = snf(rel);
    let diag_len = rel.rows.min(n);
    // positions on the diagonal contributing torsion (d >= 2) or free (d = 0)
    let mut torsion_pos: Vec<usize> = Vec::new();
    let mut free_pos: Vec<usize> = Vec::new();
    for j in 0..n {
        let d = if j < diag_len {
            s[(j, j)].clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            free_pos.push(j);
        } else if d > BigInt::one() {
            torsion_pos.push(j);
        }
    }
    let invariant_factors: Vec<BigInt> = torsion_pos.iter().map(|&j| s[(j, j)].clone()).collect();
    let group = FiniteAbelianGroup {
        invariant_factors,
        free_rank: free_pos.len(),
    };
    group.check_chain();
    // generator e_i has coordinates (row i of v) in the new basis
    let images = (0..n)
        .map(|i| {
            let coords: Vec<BigInt> = torsion_pos
                .iter()
                .chain(free_pos.iter())
                .map(|&j| v[(i, j)].clone())
                .collect();
            group.reduce(&coords)
        })
        .collect();
    (group, images)
}

/// g / <gens> in invariant-factor form.
pub fn quotient_by_subgroup(
    g: &FiniteAbelianGroup,
    gens: &[GroupElement],
) -> Result<FiniteAbelianGroup, Error> {
    for e in gens {
        g.validate(e)?;
    }
    let k = g.num_generators();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (i, d) in g.invariant_factors.iter().enumerate() {
        let mut row = vec![BigInt::zero(); k];
        row[i] = d.clone();
        rows.push(row);
    }
    for e in gens {
        rows.push(e.coords.clone());
    }
    let rel = if rows.is_empty() {
        IntMatrix::zero(0, k)
    } else {
        IntMatrix::from_bigint_rows(rows)
    };
    Ok(group_from_relations(&rel).0)
}

/// Abstract structure of the subgroup <gens> of g: Z^k modulo the lattice
/// of integer relations among the generators.
pub fn subgroup_structure(
    g: &FiniteAbelianGroup,
    gens: &[GroupElement],
) -> Result<FiniteAbelianGroup, Error> {
    for e in gens {
        g.validate(e)?;
    }
    let k = gens.len();
    if k == 0 {
        return Ok(FiniteAbelianGroup::trivial());
    }
    let t = g.invariant_factors.len();
    let f = g.free_rank;
    // unknowns (x_1..x_k, y_1..y_t); equations: one per group generator
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..t + f {
        let mut row = vec![BigInt::zero(); k + t];
        for (j, e) in gens.iter().enumerate() {
            row[j] = e.coords[i].clone();
        }
        if i < t {
            row[k + i] = -g.invariant_factors[i].clone();
        }
        rows.push(row);
    }
    let a = IntMatrix::from_bigint_rows(rows);
    let kernel = kernel_basis(&a);
    // project kernel vectors onto the x block; these are exactly the
    // relations among the generators
    let rel_rows: Vec<Vec<BigInt>> = kernel.iter().map(|row| row[..k].to_vec()).collect();
    let rel = if rel_rows.is_empty() {
        IntMatrix::zero(0, k)
    } else {
        IntMatrix::from_bigint_rows(rel_rows)
    };
    Ok(group_from_relations(&rel).0)
}

/// Order of the subgroup generated by gens inside a finite g.
pub fn subgroup_order(g: &FiniteAbelianGroup, gens: &[GroupElement]) -> Result<BigInt, Error> {
    let q = quotient_by_subgroup(g, gens)?;
    let go = g.order().ok_or_else(|| {
        Error::MalformedElement("subgroup order undefined for infinite group".into())
    })?;
    let qo = q.order().expect("quotient of finite group is finite");
    Ok(go / qo)
}

/// Basis (as rows) of the integer kernel {x : m x^T = 0}, x ranging over
/// Z^cols.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (s, _u, v) = snf(m);
    let diag_len = m.rows.min(m.cols);
    let mut basis = Vec::new();
    for j in 0..m.cols {
        if j >= diag_len || s[(j, j)].is_zero() {
            // column j of v is a kernel vector
            basis.push((0..m.cols).map(|i| v[(i, j)].clone()).collect());
        }
    }
    basis
}

/// Exterior square of a finite abelian group: for d_1 | ... | d_k this is
/// the direct sum of Z/d_i over pairs i < j.
pub fn exterior_square(g: &FiniteAbelianGroup) -> Result<FiniteAbelianGroup, Error> {
    if g.free_rank > 0 {
        return Err(Error::MalformedElement(
            "exterior square requires a finite group".into(),
        ));
    }
    let k = g.invariant_factors.len();
    let mut factors = Vec::new();
    for i in 0..k {
        for _j in i + 1..k {
            factors.push(g.invariant_factors[i].clone());
        }
    }
    factors.sort();
    let out = FiniteAbelianGroup {
        invariant_factors: factors,
        free_rank: 0,
    };
    out.check_chain();
    Ok(out)
}
