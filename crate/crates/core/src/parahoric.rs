//! Residue data of a parahoric point: the root subsystem of roots taking
//! integer values at the point, the type of the corresponding generalized
//! Levi, its character lattice, and the per-root valuation exponents.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{hnf, kernel_basis, IntMatrix};
use crate::root_system::{Root, RootSystemData, Series, SimpleType, Weight};
use crate::Error;

/// Affine Dynkin node subsets, one per simple factor. A node set lists the
/// affine simple roots (0 = the lowest root node, 1..rank the finite
/// nodes) that vanish on the facet.
pub type FacetNodes = Vec<BTreeSet<usize>>;

/// Exact rational point of the closed fundamental alcove, in coweight
/// coordinates (so the i-th simple root evaluates to the i-th coordinate).
pub type AlcovePoint = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParahoricKind {
    Facet(FacetNodes),
    Point(AlcovePoint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParahoricSpec {
    pub label: String,
    pub kind: ParahoricKind,
}

impl ParahoricSpec {
    pub fn facet(label: &str, nodes_per_factor: &[&[usize]]) -> Self {
        ParahoricSpec {
            label: label.to_string(),
            kind: ParahoricKind::Facet(
                nodes_per_factor
                    .iter()
                    .map(|ns| ns.iter().copied().collect())
                    .collect(),
            ),
        }
    }

    /// All finite nodes: residue group is G itself.
    pub fn hyperspecial(label: &str, rs: &RootSystemData) -> Self {
        ParahoricSpec {
            label: label.to_string(),
            kind: ParahoricKind::Facet(
                rs.factor_ranges
                    .iter()
                    .map(|r| (1..=r.len()).collect())
                    .collect(),
            ),
        }
    }

    /// Empty node set: the full alcove.
    pub fn iwahori(label: &str, rs: &RootSystemData) -> Self {
        ParahoricSpec {
            label: label.to_string(),
            kind: ParahoricKind::Facet(vec![BTreeSet::new(); rs.factor_ranges.len()]),
        }
    }
}

/// Residue root system at a point together with the character lattice of
/// the generalized Levi.
#[derive(Debug, Clone)]
pub struct GeneralizedLevi {
    /// Roots of the ambient system taking integer values at the point.
    pub phi_x: Vec<Root>,
    /// Simple system of phi_x (positive, indecomposable).
    pub simple_system: Vec<Root>,
    /// Dynkin types of the semisimple part of the residue group.
    pub levi_types: Vec<SimpleType>,
    /// Rank of the central torus of the residue group.
    pub torus_rank: usize,
    /// HNF-reduced basis of {lambda in P : <lambda, alpha^v> = 0 for all
    /// alpha in phi_x}.
    pub char_lattice: Vec<Weight>,
    pub base_point: AlcovePoint,
}

impl GeneralizedLevi {
    pub fn type_string(&self) -> String {
        let mut parts: Vec<String> = self.levi_types.iter().map(|t| t.to_string()).collect();
        if self.torus_rank > 0 {
            if parts.is_empty() {
                return format!("torus^{}", self.torus_rank);
            }
            parts.push(format!("torus^{}", self.torus_rank));
        }
        if parts.is_empty() {
            return "trivial".to_string();
        }
        parts.join(" x ")
    }
}

/// Per-root valuation exponents m_r, parallel to `rs.roots`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationTable {
    pub values: Vec<BigInt>,
}

fn validate_facet(rs: &RootSystemData, omega: &FacetNodes) -> Result<(), Error> {
    if omega.len() != rs.factor_ranges.len() {
        return Err(Error::InvalidFacet(format!(
            "{} node sets for {} simple factors",
            omega.len(),
            rs.factor_ranges.len()
        )));
    }
    for (f, (nodes, range)) in omega.iter().zip(&rs.factor_ranges).enumerate() {
        let r = range.len();
        if let Some(&bad) = nodes.iter().find(|&&n| n > r) {
            return Err(Error::InvalidFacet(format!(
                "node {bad} out of range 0..={r} in factor {f}"
            )));
        }
        if nodes.len() == r + 1 {
            return Err(Error::InvalidFacet(format!(
                "factor {f}: the full affine diagram defines no facet"
            )));
        }
    }
    Ok(())
}

/// Canonical point of the facet: the affine simple roots listed in omega
/// vanish and the remaining ones take a common positive value, solved
/// exactly over the rationals, factor by factor.
pub fn facet_point(rs: &RootSystemData, omega: &FacetNodes) -> Result<AlcovePoint, Error> {
    validate_facet(rs, omega)?;
    let mut x = vec![BigRational::zero(); rs.rank];
    for (f, (nodes, range)) in omega.iter().zip(&rs.factor_ranges).enumerate() {
        let marks = &rs.marks[f];
        // alpha_i(x) = x_i for finite nodes, psi_0(x) = 1 - sum a_i x_i.
        // With x_i = 0 on omega and x_i = t elsewhere:
        //   0 in omega:      1 - t * A = 0
        //   0 not in omega:  1 - t * A = t
        // where A sums the marks over the finite nodes outside omega.
        let a: BigInt = (1..=range.len())
            .filter(|i| !nodes.contains(i))
            .map(|i| marks[i - 1].clone())
            .sum();
        let denom = if nodes.contains(&0) {
            a
        } else {
            a + BigInt::one()
        };
        let t = BigRational::new(BigInt::one(), denom);
        for i in 1..=range.len() {
            if !nodes.contains(&i) {
                x[range.start + i - 1] = t.clone();
            }
        }
    }
    Ok(x)
}

fn check_in_alcove(rs: &RootSystemData, x: &AlcovePoint) -> Result<(), Error> {
    if x.len() != rs.rank {
        return Err(Error::OutsideAlcove(format!(
            "point has {} coordinates, rank is {}",
            x.len(),
            rs.rank
        )));
    }
    for (i, c) in x.iter().enumerate() {
        if c.is_negative() {
            return Err(Error::OutsideAlcove(format!("alpha_{}(x) = {} < 0", i + 1, c)));
        }
    }
    for (f, range) in rs.factor_ranges.iter().enumerate() {
        let theta_val: BigRational = rs.marks[f]
            .iter()
            .enumerate()
            .map(|(i, a)| BigRational::from(a.clone()) * &x[range.start + i])
            .sum();
        if theta_val > BigRational::one() {
            return Err(Error::OutsideAlcove(format!(
                "theta(x) = {theta_val} > 1 in factor {f}"
            )));
        }
    }
    Ok(())
}

pub fn resolve_point(rs: &RootSystemData, spec: &ParahoricSpec) -> Result<AlcovePoint, Error> {
    let x = match &spec.kind {
        ParahoricKind::Facet(omega) => facet_point(rs, omega)?,
        ParahoricKind::Point(x) => x.clone(),
    };
    check_in_alcove(rs, &x)?;
    Ok(x)
}

/// alpha(x) with x in coweight coordinates.
pub fn eval_root(root: &Root, x: &AlcovePoint) -> BigRational {
    root.root_coords
        .iter()
        .zip(x)
        .map(|(c, xi)| BigRational::from(c.clone()) * xi)
        .sum()
}

/// Residue root system Phi_x = {alpha : alpha(x) integral}, its Dynkin
/// type, and the character lattice of the residue group.
pub fn residue_levi(rs: &RootSystemData, spec: &ParahoricSpec) -> Result<GeneralizedLevi, Error> {
    let x = resolve_point(rs, spec)?;
    let phi_x: Vec<Root> = rs
        .roots
        .iter()
        .filter(|r| eval_root(r, &x).is_integer())
        .cloned()
        .collect();

    // simple system: positive elements not expressible as a sum of two
    // positive elements of phi_x
    let pos: Vec<&Root> = phi_x.iter().filter(|r| r.is_positive()).collect();
    let pos_set: std::collections::HashSet<&[BigInt]> =
        pos.iter().map(|r| r.root_coords.as_slice()).collect();
    let simple_system: Vec<Root> = pos
        .iter()
        .filter(|r| {
            !pos.iter().any(|a| {
                let diff: Vec<BigInt> = r
                    .root_coords
                    .iter()
                    .zip(&a.root_coords)
                    .map(|(x, y)| x - y)
                    .collect();
                diff != vec![BigInt::zero(); rs.rank] && pos_set.contains(diff.as_slice())
            })
        })
        .map(|r| (*r).clone())
        .collect();

    let levi_types = classify(rs, &simple_system)?;

    // char lattice: integer kernel of the coroot pairing matrix
    let rows: Vec<Vec<BigInt>> = simple_system
        .iter()
        .map(|beta| {
            (0..rs.rank)
                .map(|j| {
                    let mut c = vec![BigInt::zero(); rs.rank];
                    c[j] = BigInt::one();
                    rs.coroot_pairing(&Weight { coords: c }, beta)
                })
                .collect()
        })
        .collect();
    let k = if rows.is_empty() {
        IntMatrix::zero(0, rs.rank)
    } else {
        IntMatrix::from_bigint_rows(rows)
    };
    let basis = kernel_basis(&k);
    let char_lattice: Vec<Weight> = if basis.is_empty() {
        vec![]
    } else {
        let (h, _) = hnf(&IntMatrix::from_bigint_rows(basis.clone()));
        (0..basis.len())
            .map(|i| Weight {
                coords: h.row(i).to_vec(),
            })
            .collect()
    };

    Ok(GeneralizedLevi {
        torus_rank: char_lattice.len(),
        phi_x,
        levi_types,
        simple_system,
        char_lattice,
        base_point: x,
    })
}

/// m_r = -floor(alpha(x)) per root, parallel to rs.roots.
pub fn valuation_table(rs: &RootSystemData, spec: &ParahoricSpec) -> Result<ValuationTable, Error> {
    let x = resolve_point(rs, spec)?;
    let values = rs
        .roots
        .iter()
        .map(|r| -eval_root(r, &x).floor().to_integer())
        .collect();
    Ok(ValuationTable { values })
}

/// Identify the Dynkin type of the subsystem spanned by a simple system,
/// component by component, by permutation-matching Cartan matrices.
fn classify(rs: &RootSystemData, simple_system: &[Root]) -> Result<Vec<SimpleType>, Error> {
    let s = simple_system.len();
    let cartan: Vec<Vec<BigInt>> = simple_system
        .iter()
        .map(|a| {
            simple_system
                .iter()
                .map(|b| {
                    rs.coroot_pairing(
                        &Weight {
                            coords: a.weight_coords.clone(),
                        },
                        b,
                    )
                })
                .collect()
        })
        .collect();
    // connected components of the Dynkin graph
    let mut comp = vec![usize::MAX; s];
    let mut ncomp = 0;
    for start in 0..s {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = ncomp;
        while let Some(i) = stack.pop() {
            for j in 0..s {
                if comp[j] == usize::MAX && !cartan[i][j].is_zero() {
                    comp[j] = ncomp;
                    stack.push(j);
                }
            }
        }
        ncomp += 1;
    }
    let mut types = Vec::new();
    for c in 0..ncomp {
        let idx: Vec<usize> = (0..s).filter(|&i| comp[i] == c).collect();
        let sub: Vec<Vec<BigInt>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| cartan[i][j].clone()).collect())
            .collect();
        types.push(classify_component(&sub)?);
    }
    types.sort();
    Ok(types)
}

fn classify_component(cartan: &[Vec<BigInt>]) -> Result<SimpleType, Error> {
    let n = cartan.len();
    let candidates = [
        Series::A,
        Series::B,
        Series::C,
        Series::D,
        Series::E,
        Series::F,
        Series::G,
    ];
    for series in candidates {
        let Ok(t) = SimpleType::new(series, n) else {
            continue;
        };
        let model = t.cartan();
        if cartan_isomorphic(cartan, &model) {
            return Ok(t);
        }
    }
    Err(Error::InvalidType(format!(
        "unrecognized residue component of rank {n}"
    )))
}

fn cartan_isomorphic(c: &[Vec<BigInt>], model: &IntMatrix) -> bool {
    let n = c.len();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if (0..n).all(|i| (0..n).all(|j| c[perm[i]][perm[j]] == model[(i, j)])) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::{build_root_system, GroupSpec};

    fn rs(series: Series, rank: usize) -> RootSystemData {
        build_root_system(&GroupSpec::simply_connected(vec![
            SimpleType::new(series, rank).unwrap(),
        ]))
        .unwrap()
    }

    #[test]
    fn facet_point_hyperspecial_is_origin() {
        let r = rs(Series::A, 3);
        let x = facet_point(&r, &vec![(1..=3).collect()]).unwrap();
        assert!(x.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn facet_point_a1_barycenter() {
        let r = rs(Series::A, 1);
        let x = facet_point(&r, &vec![BTreeSet::new()]).unwrap();
        assert_eq!(x[0], BigRational::new(BigInt::one(), BigInt::from(2)));
    }

    #[test]
    fn facet_point_a3_mixed() {
        let r = rs(Series::A, 3);
        let x = facet_point(&r, &vec![[0usize, 2].into_iter().collect()]).unwrap();
        assert!(x[1].is_zero());
        assert_eq!(x[0], x[2]);
        assert!(x[0].is_positive());
        // theta(x) = 1
        let theta_val: BigRational = x.iter().sum();
        assert_eq!(theta_val, BigRational::one());
    }

    #[test]
    fn facet_rejects_full_diagram() {
        let r = rs(Series::A, 2);
        assert!(facet_point(&r, &vec![(0..=2).collect()]).is_err());
    }

    #[test]
    fn iwahori_levi_is_torus() {
        let r = rs(Series::A, 2);
        let levi = residue_levi(&r, &ParahoricSpec::iwahori("p", &r)).unwrap();
        assert!(levi.phi_x.is_empty());
        assert_eq!(levi.char_lattice.len(), 2);
        assert_eq!(levi.type_string(), "torus^2");
    }

    #[test]
    fn hyperspecial_levi_is_everything() {
        let r = rs(Series::A, 2);
        let levi = residue_levi(&r, &ParahoricSpec::hyperspecial("p", &r)).unwrap();
        assert_eq!(levi.phi_x.len(), r.roots.len());
        assert!(levi.char_lattice.is_empty());
        assert_eq!(levi.levi_types, vec![SimpleType::new(Series::A, 2).unwrap()]);
    }

    #[test]
    fn a3_facet_02() {
        let r = rs(Series::A, 3);
        let levi = residue_levi(&r, &ParahoricSpec::facet("p", &[&[0, 2]])).unwrap();
        // {+-theta, +-alpha_2}, type A1 x A1
        assert_eq!(levi.phi_x.len(), 4);
        assert_eq!(
            levi.levi_types,
            vec![
                SimpleType::new(Series::A, 1).unwrap(),
                SimpleType::new(Series::A, 1).unwrap()
            ]
        );
        // char lattice: omega_1 - omega_3 (up to sign/HNF)
        assert_eq!(levi.char_lattice.len(), 1);
        let b = &levi.char_lattice[0].coords;
        assert_eq!(b[0], BigInt::one());
        assert!(b[1].is_zero());
        assert_eq!(b[2], BigInt::from(-1));
    }

    #[test]
    fn valuation_examples() {
        let r = rs(Series::A, 1);
        let hyper = valuation_table(&r, &ParahoricSpec::hyperspecial("p", &r)).unwrap();
        assert!(hyper.values.iter().all(|v| v.is_zero()));

        let iw = valuation_table(&r, &ParahoricSpec::iwahori("p", &r)).unwrap();
        // roots sorted by height: -alpha then alpha
        assert_eq!(iw.values, vec![BigInt::one(), BigInt::zero()]);

        let r3 = rs(Series::A, 3);
        let spec = ParahoricSpec::facet("p", &[&[0, 2]]);
        let vt = valuation_table(&r3, &spec).unwrap();
        let theta_idx = r3
            .roots
            .iter()
            .position(|x| x.root_coords == r3.theta[0].root_coords)
            .unwrap();
        assert_eq!(vt.values[theta_idx], BigInt::from(-1));
        // m_r + m_{-r} in {0, 1}
        for root in &r3.roots {
            let neg: Vec<BigInt> = root.root_coords.iter().map(|c| -c).collect();
            let i = r3.roots.iter().position(|x| x.root_coords == root.root_coords).unwrap();
            let j = r3.roots.iter().position(|x| x.root_coords == neg).unwrap();
            let s = &vt.values[i] + &vt.values[j];
            assert!(s.is_zero() || s.is_one());
        }
    }

    #[test]
    fn rejects_point_outside_alcove() {
        let r = rs(Series::A, 1);
        let spec = ParahoricSpec {
            label: "p".into(),
            kind: ParahoricKind::Point(vec![BigRational::from(BigInt::from(2))]),
        };
        assert!(residue_levi(&r, &spec).is_err());
        let spec = ParahoricSpec {
            label: "p".into(),
            kind: ParahoricKind::Point(vec![-BigRational::new(BigInt::one(), BigInt::from(2))]),
        };
        assert!(residue_levi(&r, &spec).is_err());
    }

    #[test]
    fn phi_x_closed_symmetric_all_small_facets() {
        for (s, n) in [(Series::A, 1), (Series::A, 2), (Series::B, 2), (Series::G, 2)] {
            let r = rs(s, n);
            for omega in all_proper_subsets(n + 1) {
                let spec = ParahoricSpec {
                    label: "p".into(),
                    kind: ParahoricKind::Facet(vec![omega.clone()]),
                };
                let levi = residue_levi(&r, &spec).unwrap();
                let set: std::collections::HashSet<Vec<BigInt>> = levi
                    .phi_x
                    .iter()
                    .map(|x| x.root_coords.clone())
                    .collect();
                let all: std::collections::HashSet<Vec<BigInt>> =
                    r.roots.iter().map(|x| x.root_coords.clone()).collect();
                for a in &set {
                    let neg: Vec<BigInt> = a.iter().map(|c| -c).collect();
                    assert!(set.contains(&neg), "not symmetric");
                    for b in &set {
                        let sum: Vec<BigInt> =
                            a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if all.contains(&sum) {
                            assert!(set.contains(&sum), "not closed");
                        }
                    }
                }
                // rank additivity
                assert_eq!(levi.char_lattice.len() + levi.simple_system.len(), n);
            }
        }
    }

    #[test]
    fn facet_monotonicity() {
        let r = rs(Series::B, 2);
        let subsets = all_proper_subsets(3);
        for a in &subsets {
            for b in &subsets {
                if !a.is_subset(b) {
                    continue;
                }
                let la = residue_levi(
                    &r,
                    &ParahoricSpec {
                        label: "p".into(),
                        kind: ParahoricKind::Facet(vec![a.clone()]),
                    },
                )
                .unwrap();
                let lb = residue_levi(
                    &r,
                    &ParahoricSpec {
                        label: "p".into(),
                        kind: ParahoricKind::Facet(vec![b.clone()]),
                    },
                )
                .unwrap();
                let sb: std::collections::HashSet<Vec<BigInt>> =
                    lb.phi_x.iter().map(|x| x.root_coords.clone()).collect();
                for root in &la.phi_x {
                    assert!(sb.contains(&root.root_coords));
                }
            }
        }
    }

    pub(crate) fn all_proper_subsets(n_nodes: usize) -> Vec<BTreeSet<usize>> {
        let mut out = Vec::new();
        for mask in 0..(1u32 << n_nodes) - 1 {
            out.push((0..n_nodes).filter(|i| mask & (1 << i) != 0).collect());
        }
        out
    }
}
