//! Top-level invariants of the moduli of parahoric torsors: the Brauer
//! group of the regularly stable locus, the weight map and its image,
//! Picard-rank bookkeeping, component groups of the twisted moduli, and
//! the term table of the non-simply-connected descent sequence.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::lattice::{
    exterior_square, quotient_by_subgroup, subgroup_order, FiniteAbelianGroup, GroupElement,
};
use crate::parahoric::{residue_levi, GeneralizedLevi, ParahoricSpec};
use crate::root_system::{
    build_root_system, center_dual, fundamental_group, GroupSpec, Isogeny, RootSystemData, Weight,
};
use crate::Error;

#[derive(Debug, Clone)]
pub struct ModuliSetup {
    pub group: GroupSpec,
    pub genus: u64,
    pub points: Vec<ParahoricSpec>,
}

impl ModuliSetup {
    pub fn validate(&self) -> Result<(), Error> {
        let mut seen = std::collections::HashSet::new();
        for p in &self.points {
            if !seen.insert(&p.label) {
                return Err(Error::Schema(format!("duplicate point label {:?}", p.label)));
            }
        }
        Ok(())
    }

    /// An empty point set is normalized to a single hyperspecial point:
    /// plain G-bundles are torsors with trivial parabolic structure at
    /// some point.
    fn effective_points(&self, rs: &RootSystemData) -> Vec<ParahoricSpec> {
        if self.points.is_empty() {
            vec![ParahoricSpec::hyperspecial("(normalized)", rs)]
        } else {
            self.points.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct BrauerResult {
    /// Hom(Z_G, C^*) = P/Q in invariant-factor form.
    pub center_dual: FiniteAbelianGroup,
    /// Per point: label, residue type string, and the image in P/Q of
    /// each character-lattice basis element.
    pub generator_images: Vec<(String, String, Vec<GroupElement>)>,
    pub image_subgroup_order: BigInt,
    pub brauer: FiniteAbelianGroup,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RsSequenceReport {
    /// Rank of the Picard group of the regularly stable moduli space; a
    /// finite-index subgroup of the stack Picard group, so equal in rank.
    pub pic_space_rank: usize,
    pub pic_stack_rank: usize,
    pub center_dual_order: BigInt,
    pub image_order: BigInt,
    pub brauer_order: BigInt,
}

#[derive(Debug, Clone)]
pub struct PicardReport {
    pub stack_pic_rank: usize,
    /// Contribution of the central charge; always 1.
    pub central_charge_rank: usize,
    pub char_lattice_ranks: Vec<(String, usize)>,
    pub rs_sequence: RsSequenceReport,
    pub warnings: Vec<String>,
}

fn require_simply_connected(spec: &GroupSpec) -> Result<(), Error> {
    if spec.isogeny != Isogeny::SimplyConnected {
        return Err(Error::Hypothesis(
            "group is not simply connected; use nonsc_sequence_report".into(),
        ));
    }
    Ok(())
}

fn genus_warnings(genus: u64) -> Vec<String> {
    if genus < 3 {
        vec![format!(
            "genus {genus} is below the hypothesis g_X >= 3 of the main theorem; \
             the group-theoretic computation proceeds regardless"
        )]
    } else {
        vec![]
    }
}

/// Image in P/Q of a character of the residue group at a point: the class
/// of lambda under the fixed identification Hom(Z_G, C^*) = P/Q.
pub fn weight_of_character(
    rs: &RootSystemData,
    levi: &GeneralizedLevi,
    lambda: &Weight,
) -> Result<GroupElement, Error> {
    if lambda.coords.len() != rs.rank {
        return Err(Error::MalformedElement(format!(
            "character has {} coordinates, rank is {}",
            lambda.coords.len(),
            rs.rank
        )));
    }
    for beta in &levi.simple_system {
        if !rs.coroot_pairing(lambda, beta).is_zero() {
            return Err(Error::MalformedElement(
                "character is not orthogonal to the residue coroots".into(),
            ));
        }
    }
    let (pq, gens) = center_dual(rs);
    let n = pq.num_generators();
    let mut coords = vec![BigInt::zero(); n];
    for (j, c) in lambda.coords.iter().enumerate() {
        for (i, g) in gens[j].coords.iter().enumerate() {
            coords[i] += c * g;
        }
    }
    Ok(pq.reduce(&coords))
}

fn point_images(
    rs: &RootSystemData,
    points: &[ParahoricSpec],
) -> Result<Vec<(String, String, Vec<GroupElement>)>, Error> {
    let mut out = Vec::new();
    for p in points {
        let levi = residue_levi(rs, p)?;
        let images = levi
            .char_lattice
            .iter()
            .map(|lambda| weight_of_character(rs, &levi, lambda))
            .collect::<Result<Vec<_>, _>>()?;
        out.push((p.label.clone(), levi.type_string(), images));
    }
    Ok(out)
}

/// Brauer group of the regularly stable moduli space: the quotient of
/// Hom(Z_G, C^*) by the subgroup generated by the character images over
/// all points.
pub fn brauer_group(setup: &ModuliSetup) -> Result<BrauerResult, Error> {
    setup.validate()?;
    require_simply_connected(&setup.group)?;
    let rs = build_root_system(&setup.group)?;
    let points = setup.effective_points(&rs);
    let (pq, _) = center_dual(&rs);
    let generator_images = point_images(&rs, &points)?;
    let all: Vec<GroupElement> = generator_images
        .iter()
        .flat_map(|(_, _, v)| v.iter().cloned())
        .collect();
    let image_subgroup_order = subgroup_order(&pq, &all)?;
    let brauer = quotient_by_subgroup(&pq, &all)?;
    debug_assert_eq!(
        brauer.order().unwrap() * &image_subgroup_order,
        pq.order().unwrap()
    );
    Ok(BrauerResult {
        center_dual: pq,
        generator_images,
        image_subgroup_order,
        brauer,
        warnings: genus_warnings(setup.genus),
    })
}

/// Picard ranks of the moduli stack and the term data of the restriction
/// sequence to the regularly stable space.
pub fn picard_report(setup: &ModuliSetup) -> Result<PicardReport, Error> {
    setup.validate()?;
    require_simply_connected(&setup.group)?;
    let rs = build_root_system(&setup.group)?;
    let points = setup.effective_points(&rs);
    let mut char_lattice_ranks = Vec::new();
    for p in &points {
        let levi = residue_levi(&rs, p)?;
        char_lattice_ranks.push((p.label.clone(), levi.char_lattice.len()));
    }
    let stack_pic_rank = 1 + char_lattice_ranks.iter().map(|(_, r)| r).sum::<usize>();
    let br = brauer_group(setup)?;
    let center_dual_order = br.center_dual.order().unwrap();
    let brauer_order = br.brauer.order().unwrap();
    if &br.image_subgroup_order * &brauer_order != center_dual_order {
        return Err(Error::Normalization(
            "order bookkeeping of the restriction sequence failed".into(),
        ));
    }
    Ok(PicardReport {
        stack_pic_rank,
        central_charge_rank: 1,
        char_lattice_ranks,
        rs_sequence: RsSequenceReport {
            pic_space_rank: stack_pic_rank,
            pic_stack_rank: stack_pic_rank,
            center_dual_order,
            image_order: br.image_subgroup_order,
            brauer_order,
        },
        warnings: br.warnings,
    })
}

/// Direct power g^n, invariant factors kept in chain order.
fn power_group(g: &FiniteAbelianGroup, n: usize) -> FiniteAbelianGroup {
    let mut factors = Vec::with_capacity(g.invariant_factors.len() * n);
    for d in &g.invariant_factors {
        for _ in 0..n {
            factors.push(d.clone());
        }
    }
    factors.sort();
    FiniteAbelianGroup {
        invariant_factors: factors,
        free_rank: g.free_rank * n,
    }
}

/// Component group Maps(R, pi_1(G)) of the moduli stack, with its full
/// element enumeration (one pi_1 element per point, in point order).
pub fn component_group(
    setup: &ModuliSetup,
) -> Result<(FiniteAbelianGroup, Vec<Vec<GroupElement>>), Error> {
    setup.validate()?;
    if setup.points.is_empty() {
        return Err(Error::Hypothesis(
            "component enumeration requires a nonempty point set".into(),
        ));
    }
    let pi1 = fundamental_group(&setup.group)?;
    if pi1.free_rank > 0 {
        return Err(Error::MalformedElement("infinite fundamental group".into()));
    }
    let group = power_group(&pi1, setup.points.len());
    let singles = pi1.elements();
    let mut maps: Vec<Vec<GroupElement>> = vec![vec![]];
    for _ in 0..setup.points.len() {
        let mut next = Vec::with_capacity(maps.len() * singles.len());
        for m in &maps {
            for e in &singles {
                let mut m2 = m.clone();
                m2.push(e.clone());
                next.push(m2);
            }
        }
        maps = next;
    }
    Ok((group, maps))
}

/// Integer lifts d of a twist datum delta in Maps(R, Z_G): per point, the
/// coordinates of delta(x) in the invariant-factor decomposition
/// rho(Z_G) = prod mu_{r_i}, so that e^{2 pi i d_i / r_i} = a_i.
pub fn twist_vector(
    rs: &RootSystemData,
    delta: &[GroupElement],
) -> Result<Vec<Vec<BigInt>>, Error> {
    let (pq, _) = center_dual(rs);
    delta
        .iter()
        .map(|e| {
            pq.validate(e)?;
            Ok(pq.reduce(&e.coords).coords)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct NonScReport {
    /// Gamma = pi_1(G)^(2 g_X).
    pub gamma: FiniteAbelianGroup,
    /// H^1(Gamma, C^*): the dual, abstractly Gamma itself.
    pub h1: FiniteAbelianGroup,
    /// H^2(Gamma, C^*): the exterior square of Gamma.
    pub h2: FiniteAbelianGroup,
    /// Brauer group of the twisted moduli of the simply connected cover.
    pub cover_brauer: FiniteAbelianGroup,
    /// |H^2| * |Br(cover)|: upper bound for |Br| of the base.
    pub brauer_order_upper_bound: BigInt,
    /// The sequence determines Br only up to extension; never resolved.
    pub up_to_extension: bool,
    pub warnings: Vec<String>,
}

/// Term table of the descent sequence for non-simply-connected G:
/// 0 -> H^1(Gamma, C^*) -> Pic terms -> H^2(Gamma, C^*)
///   -> Br(base) -> Br(cover) -> 0.
pub fn nonsc_sequence_report(
    setup: &ModuliSetup,
    delta: &[GroupElement],
) -> Result<NonScReport, Error> {
    setup.validate()?;
    if setup.group.isogeny == Isogeny::SimplyConnected {
        return Err(Error::Hypothesis(
            "group is simply connected; the sequence degenerates, use brauer_group".into(),
        ));
    }
    let pi1 = fundamental_group(&setup.group)?;
    if delta.len() != setup.points.len().max(1) {
        return Err(Error::MalformedElement(format!(
            "twist datum has {} entries for {} points",
            delta.len(),
            setup.points.len().max(1)
        )));
    }
    for e in delta {
        pi1.validate(e)?;
    }
    let gamma = power_group(&pi1, 2 * setup.genus as usize);
    let h1 = gamma.clone();
    let h2 = exterior_square(&gamma)?;

    // Brauer group of the twisted moduli of the cover: quotient of the
    // cover's P/Q by the character images together with pi_1(G) itself.
    let cover_spec = GroupSpec {
        factors: setup.group.factors.clone(),
        isogeny: Isogeny::SimplyConnected,
    };
    let rs = build_root_system(&cover_spec)?;
    let points = setup.effective_points(&rs);
    let (pq, gens) = center_dual(&rs);
    let mut quotient_gens: Vec<GroupElement> = point_images(&rs, &points)?
        .into_iter()
        .flat_map(|(_, _, v)| v)
        .collect();
    match &setup.group.isogeny {
        Isogeny::SimplyConnected => unreachable!(),
        Isogeny::Adjoint => {
            // pi_1 is all of P/Q
            for g in &gens {
                quotient_gens.push(g.clone());
            }
        }
        Isogeny::QuotientBy(els) => {
            for e in els {
                pq.validate(e)?;
                quotient_gens.push(e.clone());
            }
        }
    }
    let cover_brauer = quotient_by_subgroup(&pq, &quotient_gens)?;
    let brauer_order_upper_bound = h2.order().unwrap() * cover_brauer.order().unwrap();

    let mut warnings = genus_warnings(setup.genus);
    if setup.points.is_empty() {
        warnings.push("empty point set normalized to one hyperspecial point".into());
    }
    Ok(NonScReport {
        gamma,
        h1,
        h2,
        cover_brauer,
        brauer_order_upper_bound,
        up_to_extension: true,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StackBrauer {
    /// Vanishing holds by the cited theorem; no computation performed.
    Trivial { note: String },
    NotCovered { note: String },
}

/// Brauer group of the moduli stack itself: a cited constant, trivial in
/// the simply connected (and twisted) cases.
pub fn stack_brauer(setup: &ModuliSetup) -> StackBrauer {
    match setup.group.isogeny {
        Isogeny::SimplyConnected => StackBrauer::Trivial {
            note: "vanishes for the moduli stack of parahoric torsors under a simply \
                   connected group (cited result; holds for twisted stacks as well)"
                .into(),
        },
        _ => StackBrauer::NotCovered {
            note: "no vanishing statement is available for non-simply-connected stacks".into(),
        },
    }
}
