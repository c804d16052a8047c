//! Affine Weyl group combinatorics: canonical reduced words, minimal
//! parabolic coset representatives, the induced Bruhat order, and Schubert
//! cell tables with their Poincare polynomials.
//!
//! Elements act on the apartment in coweight coordinates as integral
//! affine maps (finite Weyl part times a coroot translation); words over
//! the affine simple reflections s_0 .. s_r are input/output syntax only.
//! Equality, length and coset membership all go through the action on a
//! base point whose stabilizer is the parabolic subgroup in question, so
//! no confluence machinery is needed.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::parahoric::{facet_point, FacetNodes};
use crate::root_system::RootSystemData;
use crate::Error;

pub type AffineWord = Vec<usize>;
type Point = Vec<BigRational>;

/// Integral affine map x -> lin * x + trans on coweight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    lin: Vec<Vec<BigInt>>,
    trans: Vec<BigInt>,
}

impl Element {
    pub fn identity(rank: usize) -> Self {
        Element {
            lin: (0..rank)
                .map(|i| {
                    (0..rank)
                        .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                        .collect()
                })
                .collect(),
            trans: vec![BigInt::zero(); rank],
        }
    }

    pub fn compose(&self, other: &Element) -> Element {
        let rank = self.trans.len();
        let lin = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| (0..rank).map(|k| &self.lin[i][k] * &other.lin[k][j]).sum())
                    .collect()
            })
            .collect();
        let trans = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|k| &self.lin[i][k] * &other.trans[k])
                    .sum::<BigInt>()
                    + &self.trans[i]
            })
            .collect();
        Element { lin, trans }
    }

    fn apply(&self, p: &Point) -> Point {
        let rank = self.trans.len();
        (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|k| BigRational::from(self.lin[i][k].clone()) * &p[k])
                    .sum::<BigRational>()
                    + BigRational::from(self.trans[i].clone())
            })
            .collect()
    }
}

/// Minimal-length representative of a right coset of the parabolic
/// subgroup, as its canonical (lexicographically least) reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetRep {
    pub length: usize,
    pub word: AffineWord,
}

#[derive(Debug, Clone)]
pub struct SchubertCellTable {
    /// (rep, complex cell dimension = length)
    pub cells: Vec<(CosetRep, usize)>,
    /// Even Betti numbers b_{2i}; odd ones vanish by construction.
    pub poincare: Vec<usize>,
}

pub struct AffineWeyl<'a> {
    rs: &'a RootSystemData,
    rank: usize,
    /// Generators s_0 .. s_rank as affine maps.
    gens: Vec<Element>,
    /// Interior barycenter; trivial stabilizer, so it separates elements.
    barycenter: Point,
}

impl<'a> AffineWeyl<'a> {
    pub fn new(rs: &'a RootSystemData) -> Result<Self, Error> {
        if rs.factor_ranges.len() != 1 {
            return Err(Error::InvalidType(
                "affine Weyl combinatorics requires a single simple factor".into(),
            ));
        }
        let rank = rs.rank;
        let marks = &rs.marks[0];
        // theta^v in coweight coordinates
        let theta_dual: Vec<BigInt> = (0..rank)
            .map(|j| {
                (0..rank)
                    .map(|i| &rs.comarks[0][i] * &rs.cartan[(j, i)])
                    .sum()
            })
            .collect();
        let mut gens = Vec::with_capacity(rank + 1);
        // s_0: x -> x - (theta(x) - 1) theta^v
        let mut e = Element::identity(rank);
        for j in 0..rank {
            for k in 0..rank {
                let t = &theta_dual[j] * &marks[k];
                e.lin[j][k] -= t;
            }
            e.trans[j] = theta_dual[j].clone();
        }
        gens.push(e);
        // s_i: x -> x - x_i alpha_i^v, with alpha_i^v = column i of cartan
        for i in 0..rank {
            let mut e = Element::identity(rank);
            for j in 0..rank {
                let t = rs.cartan[(j, i)].clone();
                e.lin[j][i] -= t;
            }
            gens.push(e);
        }
        let barycenter = facet_point(rs, &vec![std::collections::BTreeSet::new()])?;
        Ok(AffineWeyl {
            rs,
            rank,
            gens,
            barycenter,
        })
    }

    pub fn num_generators(&self) -> usize {
        self.rank + 1
    }

    pub fn element_of_word(&self, word: &[usize]) -> Result<Element, Error> {
        let mut e = Element::identity(self.rank);
        for &i in word {
            if i > self.rank {
                return Err(Error::IndexOutOfRange(format!(
                    "letter {i} exceeds affine rank {}",
                    self.rank
                )));
            }
            e = e.compose(&self.gens[i]);
        }
        Ok(e)
    }

    fn reflect_point(&self, i: usize, p: &Point) -> Point {
        self.gens[i].apply(p)
    }

    /// Breadth-first distances from `base` out to word length `max_len`.
    fn orbit_distances(&self, base: &Point, max_len: usize) -> HashMap<Point, usize> {
        let mut dist: HashMap<Point, usize> = HashMap::new();
        dist.insert(base.clone(), 0);
        let mut frontier = vec![base.clone()];
        for d in 1..=max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for i in 0..=self.rank {
                    let q = self.reflect_point(i, p);
                    if !dist.contains_key(&q) {
                        dist.insert(q.clone(), d);
                        next.push(q);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        dist
    }

    /// Lexicographically least geodesic from the base point to `p`; this
    /// spells the canonical reduced word of the minimal coset element.
    fn geodesic_word(&self, dist: &HashMap<Point, usize>, p: &Point) -> AffineWord {
        let mut word = Vec::new();
        let mut cur = p.clone();
        let mut d = dist[&cur];
        while d > 0 {
            let mut stepped = false;
            for i in 0..=self.rank {
                let q = self.reflect_point(i, &cur);
                if dist.get(&q) == Some(&(d - 1)) {
                    word.push(i);
                    cur = q;
                    d -= 1;
                    stepped = true;
                    break;
                }
            }
            assert!(stepped, "no descent step found");
        }
        word
    }

    /// Canonical reduced word for the element spelled by an arbitrary word.
    pub fn element_normal_form(&self, word: &[usize]) -> Result<AffineWord, Error> {
        let e = self.element_of_word(word)?;
        let p = e.apply(&self.barycenter);
        let dist = self.orbit_distances(&self.barycenter, word.len());
        Ok(self.geodesic_word(&dist, &p))
    }

    pub fn length(&self, word: &[usize]) -> Result<usize, Error> {
        Ok(self.element_normal_form(word)?.len())
    }

    fn parabolic_base(&self, omega_b: &FacetNodes) -> Result<Point, Error> {
        // facet_point rejects the full node set, whose parabolic subgroup
        // would be the whole (infinite) group
        facet_point(self.rs, omega_b)
    }

    /// Minimal-length representatives of the parabolic cosets, lengths
    /// 0..=max_len, sorted by (length, lex).
    pub fn minimal_coset_reps(
        &self,
        omega_b: &FacetNodes,
        max_len: usize,
    ) -> Result<Vec<CosetRep>, Error> {
        let base = self.parabolic_base(omega_b)?;
        let dist = self.orbit_distances(&base, max_len);
        let mut reps: Vec<CosetRep> = dist
            .iter()
            .map(|(p, &d)| {
                let word = self.geodesic_word(&dist, p);
                debug_assert_eq!(word.len(), d);
                CosetRep { length: d, word }
            })
            .collect();
        reps.sort();
        Ok(reps)
    }

    /// Bruhat order on the coset space: compare the minimal
    /// representatives inside the full affine Weyl group via the subword
    /// property.
    pub fn bruhat_leq(&self, u: &CosetRep, v: &CosetRep) -> Result<bool, Error> {
        if u.length > v.length {
            return Ok(false);
        }
        let target = self.element_of_word(&u.word)?;
        // every subword product of a reduced word of v is <= v, and every
        // element <= v arises this way
        let mut prods: std::collections::HashSet<Element> =
            std::collections::HashSet::from([Element::identity(self.rank)]);
        for &letter in &v.word {
            let extended: Vec<Element> = prods
                .iter()
                .map(|e| e.compose(&self.gens[letter]))
                .collect();
            prods.extend(extended);
        }
        Ok(prods.contains(&target))
    }

    /// Cells of the Schubert variety of `w`: all coset representatives
    /// Bruhat-below it, with the even-degree Poincare coefficients.
    pub fn schubert_table(
        &self,
        omega_b: &FacetNodes,
        w: &CosetRep,
    ) -> Result<SchubertCellTable, Error> {
        let all = self.minimal_coset_reps(omega_b, w.length)?;
        let mut cells = Vec::new();
        for v in all {
            if self.bruhat_leq(&v, w)? {
                let dim = v.length;
                cells.push((v, dim));
            }
        }
        Ok(table_from_cells(cells))
    }

    /// All cells of the parahoric flag variety up to length `max_len`.
    pub fn grassmannian_series(
        &self,
        omega_b: &FacetNodes,
        max_len: usize,
    ) -> Result<SchubertCellTable, Error> {
        let reps = self.minimal_coset_reps(omega_b, max_len)?;
        let cells = reps.into_iter().map(|r| {
            let dim = r.length;
            (r, dim)
        });
        Ok(table_from_cells(cells.collect()))
    }
}

fn table_from_cells(cells: Vec<(CosetRep, usize)>) -> SchubertCellTable {
    let max = cells.iter().map(|(_, d)| *d).max().unwrap_or(0);
    let mut poincare = vec![0usize; max + 1];
    for (_, d) in &cells {
        poincare[*d] += 1;
    }
    SchubertCellTable { cells, poincare }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::{build_root_system, GroupSpec, Series, SimpleType};
    use std::collections::BTreeSet;

    fn rs(series: Series, rank: usize) -> RootSystemData {
        build_root_system(&GroupSpec::simply_connected(vec![
            SimpleType::new(series, rank).unwrap(),
        ]))
        .unwrap()
    }

    fn nodes(ns: &[usize]) -> FacetNodes {
        vec![ns.iter().copied().collect::<BTreeSet<_>>()]
    }

    #[test]
    fn normal_form_identity_and_involution() {
        let r = rs(Series::A, 1);
        let w = AffineWeyl::new(&r).unwrap();
        assert_eq!(w.element_normal_form(&[]).unwrap(), Vec::<usize>::new());
        assert_eq!(w.element_normal_form(&[0, 0]).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn infinite_dihedral_no_shortening() {
        let r = rs(Series::A, 1);
        let w = AffineWeyl::new(&r).unwrap();
        let word = vec![1, 0, 1, 0, 1];
        assert_eq!(w.element_normal_form(&word).unwrap(), word);
    }

    #[test]
    fn normal_form_idempotent() {
        let r = rs(Series::A, 2);
        let w = AffineWeyl::new(&r).unwrap();
        for word in [vec![0, 1, 2, 1, 0], vec![1, 1, 2, 0], vec![2, 0, 2, 0, 1, 1]] {
            let nf = w.element_normal_form(&word).unwrap();
            assert_eq!(w.element_normal_form(&nf).unwrap(), nf);
        }
    }

    #[test]
    fn a1_grassmannian_one_rep_per_length() {
        let r = rs(Series::A, 1);
        let w = AffineWeyl::new(&r).unwrap();
        let reps = w.minimal_coset_reps(&nodes(&[1]), 6).unwrap();
        for l in 0..=6 {
            assert_eq!(reps.iter().filter(|x| x.length == l).count(), 1, "length {l}");
        }
    }

    #[test]
    fn a2_full_parabolic_counts() {
        // Poincare series of the SL3 affine Grassmannian is
        // 1/((1-q)(1-q^2)): counts 1, 1, 2, 2 in lengths 0..3.
        let r = rs(Series::A, 2);
        let w = AffineWeyl::new(&r).unwrap();
        let reps = w.minimal_coset_reps(&nodes(&[1, 2]), 3).unwrap();
        let counts: Vec<usize> = (0..=3)
            .map(|l| reps.iter().filter(|x| x.length == l).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 2]);
        assert_eq!(counts, brute_force_counts(&w, &nodes(&[1, 2]), 3));
    }

    /// Independent oracle: enumerate all words up to the length bound,
    /// group elements by the coset of their action on the parabolic base
    /// point, take the minimum word length per coset.
    fn brute_force_counts(
        w: &AffineWeyl,
        omega_b: &FacetNodes,
        max_len: usize,
    ) -> Vec<usize> {
        use std::collections::HashMap;
        let base = facet_point(w.rs, omega_b).unwrap();
        let mut best: HashMap<Point, usize> = HashMap::new();
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        for len in 0..=max_len {
            for word in &words {
                let p = w.element_of_word(word).unwrap().apply(&base);
                let e = best.entry(p).or_insert(len);
                *e = (*e).min(len);
            }
            if len < max_len {
                words = words
                    .iter()
                    .flat_map(|word| {
                        (0..=w.rank).map(move |i| {
                            let mut next = word.clone();
                            next.push(i);
                            next
                        })
                    })
                    .collect();
            }
        }
        let mut counts = vec![0usize; max_len + 1];
        for (_, l) in best {
            counts[l] += 1;
        }
        counts
    }

    #[test]
    fn bruhat_basics() {
        let r = rs(Series::A, 1);
        let w = AffineWeyl::new(&r).unwrap();
        let reps = w.minimal_coset_reps(&nodes(&[1]), 3).unwrap();
        let id = &reps[0];
        for v in &reps {
            assert!(w.bruhat_leq(id, v).unwrap());
        }
        // chain in the rank-1 Grassmannian
        for pair in reps.windows(2) {
            assert!(w.bruhat_leq(&pair[0], &pair[1]).unwrap());
            if pair[0].length < pair[1].length {
                assert!(!w.bruhat_leq(&pair[1], &pair[0]).unwrap());
            }
        }
    }

    #[test]
    fn schubert_point_and_line() {
        let r = rs(Series::A, 1);
        let w = AffineWeyl::new(&r).unwrap();
        let reps = w.minimal_coset_reps(&nodes(&[1]), 1).unwrap();
        let t = w.schubert_table(&nodes(&[1]), &reps[0]).unwrap();
        assert_eq!(t.poincare, vec![1]);
        let t = w.schubert_table(&nodes(&[1]), &reps[1]).unwrap();
        assert_eq!(t.poincare, vec![1, 1]);
    }

    #[test]
    fn grassmannian_series_a1() {
        let r = rs(Series::A, 1);
        let w = AffineWeyl::new(&r).unwrap();
        let t = w.grassmannian_series(&nodes(&[1]), 5).unwrap();
        assert_eq!(t.poincare, vec![1; 6]);
    }

    #[test]
    fn rejects_full_parabolic() {
        let r = rs(Series::A, 2);
        let w = AffineWeyl::new(&r).unwrap();
        assert!(w.minimal_coset_reps(&nodes(&[0, 1, 2]), 2).is_err());
    }
}
