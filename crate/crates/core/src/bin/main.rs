//! Command-line front end: parse a setup document, dispatch to the
//! computation modules, emit one JSON report on stdout.
//!
//! Exit codes: 0 success, 2 schema/input error, 3 hypothesis violation.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use parabrauer::affine_weyl::AffineWeyl;
use parabrauer::brauer::{
    brauer_group, component_group, nonsc_sequence_report, picard_report,
};
use parabrauer::dynkin::{dynkin_index, pullback_charge};
use parabrauer::parahoric::{residue_levi, ParahoricKind};
use parabrauer::report::{
    bigints_out, element_out, rationals_out, render, BrauerOut, ComponentsOut, GroupOut, IndexOut,
    LeviOut, LeviPointOut, NonScOut, PicardOut, PointImagesOut, RsSequenceOut, SchubertCellOut,
    SchubertOut, SetupDocument,
};
use parabrauer::root_system::{build_root_system, fundamental_group};
use parabrauer::Error;

#[derive(Parser)]
#[command(
    name = "parabrauer",
    version,
    about = "Exact Brauer-group and Lie-theoretic invariants of moduli of parahoric torsors"
)]
struct Cli {
    /// Emit compact (single-line) JSON instead of pretty-printed.
    #[arg(long, global = true)]
    json_compact: bool,
    /// Restrict per-point reports to the point with this label.
    #[arg(long, global = true)]
    point: Option<String>,
    /// Maximum word length for the schubert enumeration.
    #[arg(long, global = true)]
    length: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Brauer group of the regularly stable moduli space.
    Brauer { file: PathBuf },
    /// Residue (generalized Levi) data at each parahoric point.
    Levi { file: PathBuf },
    /// Picard ranks and the restriction-sequence term table.
    Picard { file: PathBuf },
    /// Dynkin index of the document's representation.
    Index { file: PathBuf },
    /// Schubert cells and Poincare coefficients of the parahoric flag variety.
    Schubert { file: PathBuf },
    /// Component group of the moduli stack with its enumeration.
    Components { file: PathBuf },
    /// Term table of the non-simply-connected descent sequence.
    Nonsc { file: PathBuf },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Hypothesis(_) => 3,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn load(file: &PathBuf) -> Result<SetupDocument, Error> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", file.display())))?;
    SetupDocument::parse(&text)
}

fn run(cli: &Cli) -> Result<String, Error> {
    let compact = cli.json_compact;
    match &cli.cmd {
        Cmd::Brauer { file } => {
            let doc = load(file)?;
            let setup = doc.to_setup()?;
            let r = brauer_group(&setup)?;
            let points = r
                .generator_images
                .iter()
                .filter(|(label, _, _)| cli.point.as_ref().map_or(true, |p| p == label))
                .map(|(label, levi_type, images)| PointImagesOut {
                    label: label.clone(),
                    levi_type: levi_type.clone(),
                    images: images.iter().map(element_out).collect(),
                })
                .collect();
            Ok(render(
                &BrauerOut {
                    center_dual: GroupOut::of(&r.center_dual),
                    points,
                    image_subgroup_order: r.image_subgroup_order.to_string(),
                    brauer: GroupOut::of(&r.brauer),
                    warnings: r.warnings,
                },
                compact,
            ))
        }
        Cmd::Levi { file } => {
            let doc = load(file)?;
            let setup = doc.to_setup()?;
            let rs = build_root_system(&setup.group)?;
            let mut points = Vec::new();
            for p in &setup.points {
                if cli.point.as_ref().map_or(false, |l| l != &p.label) {
                    continue;
                }
                let levi = residue_levi(&rs, p)?;
                points.push(LeviPointOut {
                    label: p.label.clone(),
                    base_point: rationals_out(&levi.base_point),
                    levi_type: levi.type_string(),
                    char_rank: levi.char_lattice.len(),
                    char_lattice: levi
                        .char_lattice
                        .iter()
                        .map(|w| bigints_out(&w.coords))
                        .collect(),
                    num_residue_roots: levi.phi_x.len(),
                });
            }
            if points.is_empty() {
                return Err(Error::Schema(match &cli.point {
                    Some(l) => format!("no point labelled {l:?}"),
                    None => "document has no points".into(),
                }));
            }
            Ok(render(&LeviOut { points }, compact))
        }
        Cmd::Picard { file } => {
            let doc = load(file)?;
            let setup = doc.to_setup()?;
            let r = picard_report(&setup)?;
            Ok(render(
                &PicardOut {
                    stack_pic_rank: r.stack_pic_rank,
                    central_charge_rank: r.central_charge_rank,
                    char_lattice_ranks: r.char_lattice_ranks,
                    rs_sequence: RsSequenceOut {
                        pic_space_rank: r.rs_sequence.pic_space_rank,
                        pic_stack_rank: r.rs_sequence.pic_stack_rank,
                        center_dual_order: r.rs_sequence.center_dual_order.to_string(),
                        image_order: r.rs_sequence.image_order.to_string(),
                        brauer_order: r.rs_sequence.brauer_order.to_string(),
                    },
                    warnings: r.warnings,
                },
                compact,
            ))
        }
        Cmd::Index { file } => {
            let doc = load(file)?;
            let rs = build_root_system(&doc.group_spec()?)?;
            let lambda = doc.highest_weight()?;
            let d = dynkin_index(&rs, &lambda)?;
            let charge = doc
                .level
                .map(|l| pullback_charge(&rs, &BigInt::from(l), &lambda))
                .transpose()?;
            Ok(render(
                &IndexOut {
                    highest_weight: bigints_out(&lambda.coords),
                    dimension: rs.weyl_dimension(&lambda)?.to_string(),
                    dynkin_index: d.to_string(),
                    level: doc.level,
                    pullback_charge: charge.map(|c| c.to_string()),
                },
                compact,
            ))
        }
        Cmd::Schubert { file } => {
            let doc = load(file)?;
            let setup = doc.to_setup()?;
            let rs = build_root_system(&setup.group)?;
            let w = AffineWeyl::new(&rs)?;
            let spec = match &cli.point {
                Some(l) => setup
                    .points
                    .iter()
                    .find(|p| &p.label == l)
                    .ok_or_else(|| Error::Schema(format!("no point labelled {l:?}")))?,
                None => setup
                    .points
                    .first()
                    .ok_or_else(|| Error::Schema("document has no points".into()))?,
            };
            let ParahoricKind::Facet(omega) = &spec.kind else {
                return Err(Error::Schema(format!(
                    "point {:?} is given by alcove coordinates; the schubert command needs \
                     a facet node set",
                    spec.label
                )));
            };
            let max_length = cli.length.unwrap_or(5);
            let table = w.grassmannian_series(omega, max_length)?;
            Ok(render(
                &SchubertOut {
                    parabolic_nodes: omega[0].iter().copied().collect(),
                    max_length,
                    cells: table
                        .cells
                        .iter()
                        .map(|(rep, dim)| SchubertCellOut {
                            word: rep.word.clone(),
                            length: *dim,
                        })
                        .collect(),
                    poincare: table.poincare,
                    odd_betti_all_zero: true,
                },
                compact,
            ))
        }
        Cmd::Components { file } => {
            let doc = load(file)?;
            let setup = doc.to_setup()?;
            let pi1 = fundamental_group(&setup.group)?;
            let (group, maps) = component_group(&setup)?;
            Ok(render(
                &ComponentsOut {
                    pi1: GroupOut::of(&pi1),
                    component_group: GroupOut::of(&group),
                    num_components: group
                        .order()
                        .map(|o| o.to_string())
                        .unwrap_or_else(|| "infinite".into()),
                    components: maps
                        .iter()
                        .map(|m| m.iter().map(element_out).collect())
                        .collect(),
                },
                compact,
            ))
        }
        Cmd::Nonsc { file } => {
            let doc = load(file)?;
            let setup = doc.to_setup()?;
            let pi1 = fundamental_group(&setup.group)?;
            let delta = doc.delta(&pi1)?;
            let r = nonsc_sequence_report(&setup, &delta)?;
            Ok(render(
                &NonScOut {
                    gamma: GroupOut::of(&r.gamma),
                    h1: GroupOut::of(&r.h1),
                    h2: GroupOut::of(&r.h2),
                    cover_brauer: GroupOut::of(&r.cover_brauer),
                    brauer_order_upper_bound: r.brauer_order_upper_bound.to_string(),
                    up_to_extension: r.up_to_extension,
                    twist_vectors: delta
                        .iter()
                        .map(|e| element_out(&pi1.reduce(&e.coords)))
                        .collect(),
                    warnings: r.warnings,
                },
                compact,
            ))
        }
    }
}
