//! Dynkin index of a representation and the induced pullback of the
//! central charge.
//!
//! The closed form uses the quadratic Casimir: for an irreducible with
//! highest weight lambda,
//!     d = dim(V) (lambda, lambda + 2 rho) / dim g
//! in the normalization (theta, theta) = 2, under which the defining
//! representation of the A-series has index 1. An independent weight-sum
//! cross-check (1/2 sum_mu mult(mu) <mu, theta^v>^2, multiplicities via
//! Freudenthal's recursion) is exposed for tests.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::root_system::{RootSystemData, Weight};
use crate::Error;

fn require_simple(rs: &RootSystemData) -> Result<(), Error> {
    if rs.factor_ranges.len() != 1 {
        return Err(Error::Hypothesis(
            "Dynkin index is defined for a single simple factor".into(),
        ));
    }
    Ok(())
}

/// Closed-form Dynkin index of the irreducible with highest weight
/// `lambda`. Errors on non-dominant input; a non-integral result would
/// indicate a broken normalization and aborts.
pub fn dynkin_index(rs: &RootSystemData, lambda: &Weight) -> Result<BigInt, Error> {
    require_simple(rs)?;
    if !lambda.is_dominant() {
        return Err(Error::NonDominant(format!("{:?}", lambda.coords)));
    }
    let dim_v = rs.weyl_dimension(lambda)?;
    let dim_g = BigInt::from(rs.roots.len()) + BigInt::from(rs.rank);
    let rho = rs.weyl_vector();
    let shifted = Weight {
        coords: lambda
            .coords
            .iter()
            .zip(&rho.coords)
            .map(|(l, r)| l + BigInt::from(2) * r)
            .collect(),
    };
    let casimir = rs.form(lambda, &shifted);
    let d = BigRational::from(dim_v) * casimir / BigRational::from(dim_g);
    if !d.is_integer() {
        return Err(Error::Normalization(format!(
            "non-integral Dynkin index {d}"
        )));
    }
    Ok(d.to_integer())
}

/// Index of a direct sum of irreducibles, one highest weight per summand.
pub fn dynkin_index_sum(rs: &RootSystemData, summands: &[Weight]) -> Result<BigInt, Error> {
    let mut total = BigInt::zero();
    for lambda in summands {
        total += dynkin_index(rs, lambda)?;
    }
    Ok(total)
}

/// Central charge of the pullback of the charge-`level` bundle along the
/// map induced by the representation.
pub fn pullback_charge(rs: &RootSystemData, level: &BigInt, lambda: &Weight) -> Result<BigInt, Error> {
    if level.is_negative() {
        return Err(Error::Hypothesis(format!("negative level {level}")));
    }
    Ok(level * dynkin_index(rs, lambda)?)
}

fn dominize(rs: &RootSystemData, coords: &[BigInt]) -> Vec<BigInt> {
    let mut c = coords.to_vec();
    loop {
        let Some(i) = (0..rs.rank).find(|&i| c[i].is_negative()) else {
            return c;
        };
        let ci = c[i].clone();
        for j in 0..rs.rank {
            let t = &ci * &rs.cartan[(i, j)];
            c[j] -= t;
        }
    }
}

/// Dominant weights of the irreducible with highest weight `lambda`, with
/// their multiplicities (Freudenthal's recursion, exact rationals).
pub fn weight_multiplicities(
    rs: &RootSystemData,
    lambda: &Weight,
) -> Result<Vec<(Weight, BigInt)>, Error> {
    if !lambda.is_dominant() {
        return Err(Error::NonDominant(format!("{:?}", lambda.coords)));
    }
    let rank = rs.rank;
    // nu is a weight of V(lambda) iff lambda minus the dominant
    // representative of nu is a nonnegative integer sum of simple roots
    let depth_of = |c: &[BigInt]| -> Option<BigInt> {
        let dom = dominize(rs, c);
        let diff = Weight {
            coords: lambda
                .coords
                .iter()
                .zip(&dom)
                .map(|(a, b)| a - b)
                .collect(),
        };
        let rb = rs.to_root_basis(&diff);
        let mut h = BigInt::zero();
        for x in rb {
            if !x.is_integer() || x.is_negative() {
                return None;
            }
            h += x.to_integer();
        }
        Some(h)
    };

    // all weights, breadth-first from lambda down simple-root strings
    let mut all: std::collections::HashSet<Vec<BigInt>> = std::collections::HashSet::new();
    all.insert(lambda.coords.clone());
    let mut frontier = vec![lambda.coords.clone()];
    while let Some(c) = frontier.pop() {
        for i in 0..rank {
            let next: Vec<BigInt> = (0..rank)
                .map(|j| &c[j] - &rs.cartan[(i, j)])
                .collect();
            if !all.contains(&next) && depth_of(&next).is_some() {
                all.insert(next.clone());
                frontier.push(next);
            }
        }
    }

    let mut dominant: Vec<(BigInt, Vec<BigInt>)> = all
        .iter()
        .filter(|c| c.iter().all(|x| !x.is_negative()))
        .map(|c| (depth_of(c).unwrap(), c.clone()))
        .collect();
    dominant.sort();

    let rho = rs.weyl_vector();
    let plus_rho = |c: &[BigInt]| Weight {
        coords: c.iter().zip(&rho.coords).map(|(a, b)| a + b).collect(),
    };
    let target = {
        let w = plus_rho(&lambda.coords);
        rs.form(&w, &w)
    };

    let mut mult: HashMap<Vec<BigInt>, BigInt> = HashMap::new();
    let mut out = Vec::new();
    for (depth, c) in &dominant {
        let m = if depth.is_zero() {
            BigInt::one()
        } else {
            let mut num = BigRational::zero();
            for alpha in rs.positive_roots() {
                let aw = rs.root_as_weight(alpha);
                let mut k = BigInt::one();
                loop {
                    let shifted: Vec<BigInt> = c
                        .iter()
                        .zip(&aw.coords)
                        .map(|(x, a)| x + &k * a)
                        .collect();
                    if !all.contains(&shifted) {
                        break;
                    }
                    let m_up = mult[&dominize(rs, &shifted)].clone();
                    num += BigRational::from(m_up)
                        * rs.form(
                            &Weight {
                                coords: shifted,
                            },
                            &aw,
                        );
                    k += 1;
                }
            }
            let w = plus_rho(c);
            let denom = &target - rs.form(&w, &w);
            let m = BigRational::from(BigInt::from(2)) * num / denom;
            if !m.is_integer() {
                return Err(Error::Normalization(format!(
                    "non-integral Freudenthal multiplicity {m}"
                )));
            }
            m.to_integer()
        };
        mult.insert(c.clone(), m.clone());
        out.push((Weight { coords: c.clone() }, m));
    }
    Ok(out)
}

/// Independent weight-sum form of the index:
/// 1/2 sum over all weights of mult(mu) <mu, theta^v>^2.
pub fn weight_sum_index(rs: &RootSystemData, lambda: &Weight) -> Result<BigInt, Error> {
    require_simple(rs)?;
    let theta = &rs.theta[0];
    let mut total = BigInt::zero();
    for (mu, m) in weight_multiplicities(rs, lambda)? {
        for nu in rs.weyl_orbit(&mu) {
            let p = rs.coroot_pairing(&nu, theta);
            total += &m * &p * &p;
        }
    }
    if (&total % BigInt::from(2)) != BigInt::zero() {
        return Err(Error::Normalization("odd weight-sum total".into()));
    }
    Ok(total / BigInt::from(2))
}
