//! Exact root and weight data for the semisimple types A-G.
//!
//! Roots are stored in two integer coordinate systems at once: coefficients
//! over the simple roots ("root coords") and coroot pairings ("weight
//! coords", i.e. coordinates in the fundamental-weight basis). Neither
//! needs an orthonormal embedding, so everything stays rational.
//!
//! Conventions: Bourbaki node numbering throughout; `cartan[i][j]` is
//! the pairing of the i-th simple root with the j-th simple coroot; the
//! invariant form is normalized so long roots have squared length 2 in
//! every simple factor.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{group_from_relations, subgroup_structure, FiniteAbelianGroup, GroupElement, IntMatrix};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl std::fmt::Display for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        };
        write!(f, "{c}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleType {
    pub series: Series,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(series: Series, rank: usize) -> Result<Self, Error> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 2,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { series, rank })
        } else {
            Err(Error::InvalidType(format!("{series}{rank}")))
        }
    }

    /// Cartan matrix with entry (i, j) = pairing of alpha_i with the
    /// j-th simple coroot.
    pub fn cartan(&self) -> IntMatrix {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for i in 0..n {
            c[i][i] = 2;
        }
        let mut edge = |a: usize, b: usize| {
            c[a][b] = -1;
            c[b][a] = -1;
        };
        match self.series {
            Series::A => {
                for i in 0..n.saturating_sub(1) {
                    edge(i, i + 1);
                }
            }
            Series::B => {
                for i in 0..n - 1 {
                    edge(i, i + 1);
                }
                // last node short
                c[n - 2][n - 1] = -2;
                c[n - 1][n - 2] = -1;
            }
            Series::C => {
                for i in 0..n - 1 {
                    edge(i, i + 1);
                }
                // last node long
                c[n - 2][n - 1] = -1;
                c[n - 1][n - 2] = -2;
            }
            Series::D => {
                if n >= 3 {
                    for i in 0..n - 3 {
                        edge(i, i + 1);
                    }
                    edge(n - 3, n - 2);
                    edge(n - 3, n - 1);
                }
                // n = 2 is A1 x A1: no edges
            }
            Series::E => {
                // Bourbaki: chain 1-3-4-5-..., node 2 hangs off node 4
                edge(0, 2);
                for i in 2..n - 1 {
                    edge(i, i + 1);
                }
                edge(1, 3);
            }
            Series::F => {
                edge(0, 1);
                edge(2, 3);
                c[1][2] = -2;
                c[2][1] = -1;
            }
            Series::G => {
                c[0][1] = -1;
                c[1][0] = -3;
            }
        }
        IntMatrix::from_rows(&c)
    }
}

impl std::fmt::Display for SimpleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Isogeny {
    SimplyConnected,
    Adjoint,
    /// Quotient by the subgroup of the center generated by these elements,
    /// in invariant-factor coordinates of the product center.
    QuotientBy(Vec<GroupElement>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub factors: Vec<SimpleType>,
    pub isogeny: Isogeny,
}

impl GroupSpec {
    pub fn simply_connected(factors: Vec<SimpleType>) -> Self {
        GroupSpec {
            factors,
            isogeny: Isogeny::SimplyConnected,
        }
    }
}

/// Element of the weight lattice P in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<BigInt>,
}

impl Weight {
    pub fn from_i64(coords: &[i64]) -> Self {
        Weight {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![BigInt::zero(); rank],
        }
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }
}

/// A root, in both coordinate systems.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    /// Coefficients over the simple roots.
    pub root_coords: Vec<BigInt>,
    /// Coroot pairings (fundamental-weight basis).
    pub weight_coords: Vec<BigInt>,
    /// Which simple factor the root lives in.
    pub factor: usize,
}

impl Root {
    pub fn height(&self) -> BigInt {
        self.root_coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.height().is_positive()
    }
}

#[derive(Debug, Clone)]
pub struct RootSystemData {
    pub types: Vec<SimpleType>,
    pub rank: usize,
    pub cartan: IntMatrix,
    /// All roots, sorted by (height, lex on root coords).
    pub roots: Vec<Root>,
    /// Node index ranges per simple factor.
    pub factor_ranges: Vec<std::ops::Range<usize>>,
    /// Highest root of each simple factor.
    pub theta: Vec<Root>,
    /// Marks (coefficients of theta over the simple roots), per factor.
    pub marks: Vec<Vec<BigInt>>,
    /// Comarks (coefficients of the dual highest root), per factor.
    pub comarks: Vec<Vec<BigInt>>,
    /// Dual Coxeter number per factor.
    pub dual_coxeter: Vec<BigInt>,
    /// Half squared lengths (alpha_i, alpha_i)/2 per node; 1 on long roots.
    pub half_norms: Vec<BigRational>,
    /// Inverse Cartan matrix, rational.
    cartan_inv: Vec<Vec<BigRational>>,
}

fn rational_inverse(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from(m[(i, j)].clone())
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular Cartan matrix");
        a.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..2 * n {
            a[col][j] = &a[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..2 * n {
                    let t = &f * &a[col][j];
                    a[r][j] = &a[r][j] - t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Tabulates all root data for a product of simple types.
pub fn build_root_system(spec: &GroupSpec) -> Result<RootSystemData, Error> {
    if spec.factors.is_empty() {
        return Err(Error::InvalidType("empty factor list".into()));
    }
    let rank: usize = spec.factors.iter().map(|t| t.rank).sum();
    let mut cartan = IntMatrix::zero(rank, rank);
    let mut factor_ranges = Vec::new();
    let mut offset = 0;
    for t in &spec.factors {
        let c = t.cartan();
        for i in 0..t.rank {
            for j in 0..t.rank {
                cartan[(offset + i, offset + j)] = c[(i, j)].clone();
            }
        }
        factor_ranges.push(offset..offset + t.rank);
        offset += t.rank;
    }

    let half_norms = compute_half_norms(&cartan, &factor_ranges);

    // Close the simple roots under simple reflections. In root coords,
    // s_j(beta) = beta - <beta, alpha_j^v> e_j with the pairing read off
    // from weight coords.
    let mut seen: std::collections::HashSet<Vec<BigInt>> = std::collections::HashSet::new();
    let mut queue: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..rank {
        let mut e = vec![BigInt::zero(); rank];
        e[i] = BigInt::one();
        seen.insert(e.clone());
        queue.push(e);
    }
    let weight_of = |root: &[BigInt]| -> Vec<BigInt> {
        (0..rank)
            .map(|j| (0..rank).map(|i| &root[i] * &cartan[(i, j)]).sum())
            .collect()
    };
    while let Some(beta) = queue.pop() {
        let w = weight_of(&beta);
        for j in 0..rank {
            if w[j].is_zero() {
                continue;
            }
            let mut refl = beta.clone();
            refl[j] = &refl[j] - &w[j];
            if seen.insert(refl.clone()) {
                queue.push(refl);
            }
        }
    }
    let mut roots: Vec<Root> = seen
        .into_iter()
        .map(|rc| {
            let weight_coords = weight_of(&rc);
            let factor = factor_ranges
                .iter()
                .position(|r| rc[r.clone()].iter().any(|c| !c.is_zero()))
                .expect("root with empty support");
            Root {
                root_coords: rc,
                weight_coords,
                factor,
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        a.height()
            .cmp(&b.height())
            .then_with(|| a.root_coords.cmp(&b.root_coords))
    });

    // Highest root per factor: unique maximum in the height order.
    let mut theta = Vec::new();
    let mut marks = Vec::new();
    let mut comarks = Vec::new();
    let mut dual_coxeter = Vec::new();
    for (f, range) in factor_ranges.iter().enumerate() {
        let th = roots
            .iter()
            .filter(|r| r.factor == f)
            .max_by_key(|r| (r.height(), r.root_coords.clone()))
            .expect("factor without roots")
            .clone();
        let m: Vec<BigInt> = th.root_coords[range.clone()].to_vec();
        let cm: Vec<BigInt> = m
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let v = BigRational::from(a.clone()) * &half_norms[range.start + i];
                assert!(v.is_integer(), "comark not integral");
                v.to_integer()
            })
            .collect();
        let hv = BigInt::one() + cm.iter().sum::<BigInt>();
        theta.push(th);
        marks.push(m);
        comarks.push(cm);
        dual_coxeter.push(hv);
    }

    let cartan_inv = rational_inverse(&cartan);

    Ok(RootSystemData {
        types: spec.factors.clone(),
        rank,
        cartan,
        roots,
        factor_ranges,
        theta,
        marks,
        comarks,
        dual_coxeter,
        half_norms,
        cartan_inv,
    })
}

/// Solve c[i][j] * d_j = c[j][i] * d_i over each factor's Dynkin graph and
/// rescale so the long roots of every factor get d = 1.
fn compute_half_norms(
    cartan: &IntMatrix,
    factor_ranges: &[std::ops::Range<usize>],
) -> Vec<BigRational> {
    let rank = cartan.rows;
    let mut d = vec![BigRational::zero(); rank];
    for range in factor_ranges {
        d[range.start] = BigRational::one();
        let mut stack = vec![range.start];
        while let Some(i) = stack.pop() {
            for j in range.clone() {
                if i == j || cartan[(i, j)].is_zero() || !d[j].is_zero() {
                    continue;
                }
                d[j] = &d[i] * BigRational::new(cartan[(j, i)].clone(), cartan[(i, j)].clone());
                stack.push(j);
            }
        }
        let max = range.clone().map(|i| d[i].clone()).max().unwrap();
        for i in range.clone() {
            d[i] = &d[i] / &max;
        }
    }
    d
}

impl RootSystemData {
    pub fn weyl_vector(&self) -> Weight {
        Weight {
            coords: vec![BigInt::one(); self.rank],
        }
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    /// Weight coords -> simple-root coords, rational.
    pub fn to_root_basis(&self, w: &Weight) -> Vec<BigRational> {
        (0..self.rank)
            .map(|j| {
                (0..self.rank)
                    .map(|i| BigRational::from(w.coords[i].clone()) * &self.cartan_inv[i][j])
                    .sum()
            })
            .collect()
    }

    /// Invariant form on the weight lattice, (theta, theta) = 2 per factor.
    pub fn form(&self, a: &Weight, b: &Weight) -> BigRational {
        let ar = self.to_root_basis(a);
        let br = self.to_root_basis(b);
        let mut acc = BigRational::zero();
        for i in 0..self.rank {
            if ar[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if self.cartan[(i, j)].is_zero() {
                    continue;
                }
                acc += &ar[i] * &br[j] * BigRational::from(self.cartan[(i, j)].clone())
                    * &self.half_norms[j];
            }
        }
        acc
    }

    pub fn root_as_weight(&self, r: &Root) -> Weight {
        Weight {
            coords: r.weight_coords.clone(),
        }
    }

    /// (alpha, alpha)/2 for a root.
    pub fn root_half_norm(&self, r: &Root) -> BigRational {
        let w = self.root_as_weight(r);
        self.form(&w, &w) / BigRational::from(BigInt::from(2))
    }

    /// Pairing of a weight with the coroot of the root at `root_index`
    /// (in the sorted root list).
    pub fn pairing(&self, w: &Weight, root_index: usize) -> Result<BigInt, Error> {
        let r = self
            .roots
            .get(root_index)
            .ok_or_else(|| Error::IndexOutOfRange(format!("root index {root_index}")))?;
        Ok(self.coroot_pairing(w, r))
    }

    /// <w, alpha^v> = (w, alpha) / ((alpha, alpha)/2), always an integer.
    pub fn coroot_pairing(&self, w: &Weight, r: &Root) -> BigInt {
        let v = self.form(w, &self.root_as_weight(r)) / self.root_half_norm(r);
        assert!(v.is_integer(), "coroot pairing not integral");
        v.to_integer()
    }

    /// Weyl dimension formula, exact.
    pub fn weyl_dimension(&self, lambda: &Weight) -> Result<BigInt, Error> {
        if !lambda.is_dominant() {
            return Err(Error::NonDominant(format!("{:?}", lambda.coords)));
        }
        let rho = self.weyl_vector();
        let lam_rho = Weight {
            coords: lambda
                .coords
                .iter()
                .zip(&rho.coords)
                .map(|(a, b)| a + b)
                .collect(),
        };
        let mut num = BigRational::one();
        let mut den = BigRational::one();
        for alpha in self.positive_roots() {
            let aw = self.root_as_weight(alpha);
            num *= self.form(&lam_rho, &aw);
            den *= self.form(&rho, &aw);
        }
        let dim = num / den;
        assert!(dim.is_integer(), "Weyl dimension not integral");
        Ok(dim.to_integer())
    }

    /// Orbit of a weight under the finite Weyl group.
    pub fn weyl_orbit(&self, w: &Weight) -> Vec<Weight> {
        let mut seen = std::collections::HashSet::new();
        let mut queue = vec![w.coords.clone()];
        seen.insert(w.coords.clone());
        while let Some(c) = queue.pop() {
            for j in 0..self.rank {
                if c[j].is_zero() {
                    continue;
                }
                // s_j(w) = w - <w, alpha_j^v> alpha_j
                let cj = c[j].clone();
                let refl: Vec<BigInt> = (0..self.rank)
                    .map(|k| &c[k] - &cj * &self.cartan[(j, k)])
                    .collect();
                if seen.insert(refl.clone()) {
                    queue.push(refl);
                }
            }
        }
        let mut out: Vec<Weight> = seen.into_iter().map(|coords| Weight { coords }).collect();
        out.sort_by(|a, b| a.coords.cmp(&b.coords));
        out
    }
}

/// Hom(Z_G, C^*) = P/Q for the simply connected form, with the projection
/// sending each fundamental weight to its class. This fixes, once and for
/// all, the identification under which every character image is computed.
pub fn center_dual(rs: &RootSystemData) -> (FiniteAbelianGroup, Vec<GroupElement>) {
    group_from_relations(&rs.cartan)
}

/// pi_1(G) per the isogeny: trivial for simply connected, all of P/Q for
/// adjoint, the selected subgroup otherwise.
pub fn fundamental_group(spec: &GroupSpec) -> Result<FiniteAbelianGroup, Error> {
    let rs = build_root_system(spec)?;
    let (pq, _) = center_dual(&rs);
    match &spec.isogeny {
        Isogeny::SimplyConnected => Ok(FiniteAbelianGroup::trivial()),
        Isogeny::Adjoint => Ok(pq),
        Isogeny::QuotientBy(gens) => subgroup_structure(&pq, gens),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple(series: Series, rank: usize) -> GroupSpec {
        GroupSpec::simply_connected(vec![SimpleType::new(series, rank).unwrap()])
    }

    fn rs(series: Series, rank: usize) -> RootSystemData {
        build_root_system(&simple(series, rank)).unwrap()
    }

    #[test]
    fn a1_basic() {
        let r = rs(Series::A, 1);
        assert_eq!(r.roots.len(), 2);
        assert_eq!(r.theta[0].root_coords, vec![BigInt::one()]);
        assert_eq!(r.dual_coxeter[0], BigInt::from(2));
    }

    #[test]
    fn g2_basic() {
        let r = rs(Series::G, 2);
        assert_eq!(r.roots.len(), 12);
        assert_eq!(r.dual_coxeter[0], BigInt::from(4));
    }

    #[test]
    fn product_additivity() {
        let spec = GroupSpec::simply_connected(vec![
            SimpleType::new(Series::A, 2).unwrap(),
            SimpleType::new(Series::A, 1).unwrap(),
        ]);
        let r = build_root_system(&spec).unwrap();
        assert_eq!(r.roots.len(), 8);
        assert_eq!(r.rank, 3);
        // block-diagonal Cartan
        assert!(r.cartan[(0, 2)].is_zero() && r.cartan[(2, 0)].is_zero());
    }

    #[test]
    fn root_counts_match_classical_table() {
        let cases = [
            (Series::A, 4, 20),
            (Series::B, 3, 18),
            (Series::C, 3, 18),
            (Series::D, 4, 24),
            (Series::G, 2, 12),
            (Series::F, 4, 48),
            (Series::E, 6, 72),
            (Series::E, 7, 126),
            (Series::E, 8, 240),
        ];
        for (s, n, count) in cases {
            assert_eq!(rs(s, n).roots.len(), count, "{s}{n}");
        }
    }

    #[test]
    fn reflections_permute_roots() {
        for (s, n) in [(Series::A, 3), (Series::B, 2), (Series::G, 2), (Series::D, 4)] {
            let r = rs(s, n);
            let set: std::collections::HashSet<Vec<BigInt>> =
                r.roots.iter().map(|x| x.weight_coords.clone()).collect();
            for alpha in &r.roots {
                for beta in &r.roots {
                    let bw = Weight {
                        coords: beta.weight_coords.clone(),
                    };
                    let k = r.coroot_pairing(&bw, alpha);
                    let refl: Vec<BigInt> = (0..r.rank)
                        .map(|j| &beta.weight_coords[j] - &k * &alpha.weight_coords[j])
                        .collect();
                    assert!(set.contains(&refl), "reflection left the root set");
                }
            }
        }
    }

    #[test]
    fn center_dual_table() {
        for (s, n, factors) in [
            (Series::A, 3, vec![4]),
            (Series::D, 4, vec![2, 2]),
            (Series::D, 5, vec![4]),
            (Series::E, 6, vec![3]),
            (Series::E, 8, vec![]),
            (Series::G, 2, vec![]),
        ] {
            let (g, _) = center_dual(&rs(s, n));
            assert_eq!(g, FiniteAbelianGroup::from_factors(&factors), "{s}{n}");
        }
    }

    #[test]
    fn center_dual_a_series_generated_by_omega1() {
        let r = rs(Series::A, 3);
        let (g, proj) = center_dual(&r);
        assert_eq!(g.order().unwrap(), BigInt::from(4));
        // omega_1 maps to a generator of Z/4
        let e = &proj[0];
        let ord = [1u32, 2, 3, 4]
            .iter()
            .find(|&&k| {
                let mut acc = g.zero();
                for _ in 0..k {
                    acc = g.add(&acc, e);
                }
                acc == g.zero()
            })
            .copied()
            .unwrap();
        assert_eq!(ord, 4);
    }

    #[test]
    fn fundamental_groups() {
        assert!(fundamental_group(&simple(Series::A, 3)).unwrap().is_trivial());
        let adj = GroupSpec {
            factors: vec![SimpleType::new(Series::A, 1).unwrap()],
            isogeny: Isogeny::Adjoint,
        };
        assert_eq!(
            fundamental_group(&adj).unwrap(),
            FiniteAbelianGroup::from_factors(&[2])
        );
        // D2 = A1 x A1, quotient by one diagonal Z/2
        let q = GroupSpec {
            factors: vec![SimpleType::new(Series::D, 2).unwrap()],
            isogeny: Isogeny::QuotientBy(vec![GroupElement::from_i64(&[1, 1])]),
        };
        assert_eq!(
            fundamental_group(&q).unwrap(),
            FiniteAbelianGroup::from_factors(&[2])
        );
    }

    #[test]
    fn weyl_dimensions() {
        let r1 = rs(Series::A, 1);
        assert_eq!(r1.weyl_dimension(&Weight::from_i64(&[0])).unwrap(), BigInt::one());
        assert_eq!(r1.weyl_dimension(&Weight::from_i64(&[1])).unwrap(), BigInt::from(2));
        let r2 = rs(Series::A, 2);
        assert_eq!(
            r2.weyl_dimension(&Weight::from_i64(&[1, 1])).unwrap(),
            BigInt::from(8)
        );
        assert!(r2.weyl_dimension(&Weight::from_i64(&[-1, 0])).is_err());
    }

    #[test]
    fn pairing_and_form() {
        let r = rs(Series::A, 1);
        let w1 = Weight::from_i64(&[1]);
        assert_eq!(r.form(&w1, &w1), BigRational::new(BigInt::one(), BigInt::from(2)));
        let r2 = rs(Series::A, 2);
        let th = r2.root_as_weight(&r2.theta[0]);
        assert_eq!(r2.form(&th, &th), BigRational::from(BigInt::from(2)));
        // <omega_i, alpha_j^v> = delta_ij
        for i in 0..2 {
            let mut c = vec![0i64; 2];
            c[i] = 1;
            let w = Weight::from_i64(&c);
            for (j, alpha) in r2.roots.iter().enumerate() {
                if alpha.root_coords.iter().sum::<BigInt>() == BigInt::one() {
                    let node = alpha
                        .root_coords
                        .iter()
                        .position(|x| x.is_one())
                        .unwrap();
                    let expected = if node == i { 1 } else { 0 };
                    assert_eq!(r2.pairing(&w, j).unwrap(), BigInt::from(expected));
                }
            }
        }
    }

    #[test]
    fn short_long_norms() {
        let b3 = rs(Series::B, 3);
        assert_eq!(b3.half_norms[0], BigRational::one());
        assert_eq!(
            b3.half_norms[2],
            BigRational::new(BigInt::one(), BigInt::from(2))
        );
        let g2 = rs(Series::G, 2);
        assert_eq!(
            g2.half_norms[0],
            BigRational::new(BigInt::one(), BigInt::from(3))
        );
        assert_eq!(g2.half_norms[1], BigRational::one());
    }
}
