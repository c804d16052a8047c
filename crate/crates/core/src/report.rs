//! Input document model and structured report types for the CLI.
//!
//! Input is a single JSON document (see docs/setup-schema.json). All
//! rationals travel as "numerator/denominator" strings so no floating
//! point can enter the pipeline. Reports serialize with fixed field order
//! and sorted collections, so output is byte-deterministic.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::brauer::ModuliSetup;
use crate::lattice::{FiniteAbelianGroup, GroupElement};
use crate::parahoric::{AlcovePoint, ParahoricKind, ParahoricSpec};
use crate::root_system::{GroupSpec, Isogeny, Series, SimpleType, Weight};
use crate::Error;

// ---------------------------------------------------------------- input

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupDocument {
    pub group: GroupDoc,
    pub genus: u64,
    #[serde(default)]
    pub points: Vec<PointDoc>,
    #[serde(default)]
    pub representation: Option<RepDoc>,
    #[serde(default)]
    pub level: Option<u64>,
    #[serde(default)]
    pub twist: Option<Vec<TwistDoc>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub factors: Vec<FactorDoc>,
    #[serde(default = "default_isogeny")]
    pub isogeny: IsogenyDoc,
}

fn default_isogeny() -> IsogenyDoc {
    IsogenyDoc::Name("simply_connected".to_string())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub series: String,
    pub rank: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum IsogenyDoc {
    Name(String),
    Quotient { quotient_by: Vec<Vec<i64>> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub label: String,
    /// Affine Dynkin node subsets, one list per simple factor.
    #[serde(default)]
    pub facet: Option<Vec<Vec<usize>>>,
    /// Alcove point in coweight coordinates, rationals as "p/q" strings.
    #[serde(default)]
    pub point: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDoc {
    pub highest_weight: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistDoc {
    pub label: String,
    pub delta: Vec<i64>,
}

fn parse_series(s: &str) -> Result<Series, Error> {
    match s {
        "A" => Ok(Series::A),
        "B" => Ok(Series::B),
        "C" => Ok(Series::C),
        "D" => Ok(Series::D),
        "E" => Ok(Series::E),
        "F" => Ok(Series::F),
        "G" => Ok(Series::G),
        other => Err(Error::Schema(format!("unknown series {other:?}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    BigRational::from_str(s.trim())
        .map_err(|e| Error::Schema(format!("bad rational {s:?}: {e}")))
}

impl SetupDocument {
    pub fn parse(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid document: {e}")))
    }

    pub fn group_spec(&self) -> Result<GroupSpec, Error> {
        let factors = self
            .group
            .factors
            .iter()
            .map(|f| SimpleType::new(parse_series(&f.series)?, f.rank))
            .collect::<Result<Vec<_>, _>>()?;
        if factors.is_empty() {
            return Err(Error::Schema("group has no simple factors".into()));
        }
        let isogeny = match &self.group.isogeny {
            IsogenyDoc::Name(n) => match n.as_str() {
                "simply_connected" => Isogeny::SimplyConnected,
                "adjoint" => Isogeny::Adjoint,
                other => return Err(Error::Schema(format!("unknown isogeny {other:?}"))),
            },
            IsogenyDoc::Quotient { quotient_by } => Isogeny::QuotientBy(
                quotient_by
                    .iter()
                    .map(|c| GroupElement::from_i64(c))
                    .collect(),
            ),
        };
        Ok(GroupSpec { factors, isogeny })
    }

    pub fn to_setup(&self) -> Result<ModuliSetup, Error> {
        let group = self.group_spec()?;
        let points = self
            .points
            .iter()
            .map(|p| p.to_spec())
            .collect::<Result<Vec<_>, _>>()?;
        let setup = ModuliSetup {
            group,
            genus: self.genus,
            points,
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn highest_weight(&self) -> Result<Weight, Error> {
        let rep = self
            .representation
            .as_ref()
            .ok_or_else(|| Error::Schema("document has no representation".into()))?;
        Ok(Weight::from_i64(&rep.highest_weight))
    }

    /// Twist datum delta, one element per point, in point order; all-zero
    /// when the document has no twist section.
    pub fn delta(&self, pi1: &FiniteAbelianGroup) -> Result<Vec<GroupElement>, Error> {
        let n_points = self.points.len().max(1);
        let Some(twist) = &self.twist else {
            return Ok(vec![pi1.zero(); n_points]);
        };
        if self.points.is_empty() {
            return Err(Error::Schema("twist given without points".into()));
        }
        self.points
            .iter()
            .map(|p| {
                let t = twist
                    .iter()
                    .find(|t| t.label == p.label)
                    .ok_or_else(|| Error::Schema(format!("no twist for point {:?}", p.label)))?;
                let e = GroupElement::from_i64(&t.delta);
                pi1.validate(&e)?;
                Ok(e)
            })
            .collect()
    }
}

impl PointDoc {
    pub fn to_spec(&self) -> Result<ParahoricSpec, Error> {
        let kind = match (&self.facet, &self.point) {
            (Some(facet), None) => ParahoricKind::Facet(
                facet
                    .iter()
                    .map(|ns| ns.iter().copied().collect())
                    .collect(),
            ),
            (None, Some(coords)) => {
                let x: AlcovePoint = coords
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<_, _>>()?;
                ParahoricKind::Point(x)
            }
            _ => {
                return Err(Error::Schema(format!(
                    "point {:?} must have exactly one of `facet` or `point`",
                    self.label
                )))
            }
        };
        Ok(ParahoricSpec {
            label: self.label.clone(),
            kind,
        })
    }
}

// --------------------------------------------------------------- output

#[derive(Debug, Serialize)]
pub struct GroupOut {
    pub invariant_factors: Vec<String>,
    pub free_rank: usize,
    pub order: Option<String>,
}

impl GroupOut {
    pub fn of(g: &FiniteAbelianGroup) -> Self {
        GroupOut {
            invariant_factors: g.invariant_factors.iter().map(|d| d.to_string()).collect(),
            free_rank: g.free_rank,
            order: g.order().map(|o| o.to_string()),
        }
    }
}

pub fn element_out(e: &GroupElement) -> Vec<String> {
    e.coords.iter().map(|c| c.to_string()).collect()
}

pub fn bigints_out(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

pub fn rationals_out(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

#[derive(Debug, Serialize)]
pub struct PointImagesOut {
    pub label: String,
    pub levi_type: String,
    pub images: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct BrauerOut {
    pub center_dual: GroupOut,
    pub points: Vec<PointImagesOut>,
    pub image_subgroup_order: String,
    pub brauer: GroupOut,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct LeviPointOut {
    pub label: String,
    pub base_point: Vec<String>,
    pub levi_type: String,
    pub char_rank: usize,
    pub char_lattice: Vec<Vec<String>>,
    pub num_residue_roots: usize,
}

#[derive(Debug, Serialize)]
pub struct LeviOut {
    pub points: Vec<LeviPointOut>,
}

#[derive(Debug, Serialize)]
pub struct RsSequenceOut {
    pub pic_space_rank: usize,
    pub pic_stack_rank: usize,
    pub center_dual_order: String,
    pub image_order: String,
    pub brauer_order: String,
}

#[derive(Debug, Serialize)]
pub struct PicardOut {
    pub stack_pic_rank: usize,
    pub central_charge_rank: usize,
    pub char_lattice_ranks: Vec<(String, usize)>,
    pub rs_sequence: RsSequenceOut,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct IndexOut {
    pub highest_weight: Vec<String>,
    pub dimension: String,
    pub dynkin_index: String,
    pub level: Option<u64>,
    pub pullback_charge: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SchubertCellOut {
    pub word: Vec<usize>,
    pub length: usize,
}

#[derive(Debug, Serialize)]
pub struct SchubertOut {
    pub parabolic_nodes: Vec<usize>,
    pub max_length: usize,
    pub cells: Vec<SchubertCellOut>,
    pub poincare: Vec<usize>,
    pub odd_betti_all_zero: bool,
}

#[derive(Debug, Serialize)]
pub struct ComponentsOut {
    pub pi1: GroupOut,
    pub component_group: GroupOut,
    pub num_components: String,
    pub components: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Serialize)]
pub struct NonScOut {
    pub gamma: GroupOut,
    pub h1: GroupOut,
    pub h2: GroupOut,
    pub cover_brauer: GroupOut,
    pub brauer_order_upper_bound: String,
    pub up_to_extension: bool,
    pub twist_vectors: Vec<Vec<String>>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct StackBrauerOut {
    pub trivial: Option<bool>,
    pub note: String,
}

/// Render a report; field order is fixed by the struct definitions, so
/// equal inputs produce identical bytes.
pub fn render<T: Serialize>(value: &T, compact: bool) -> String {
    let mut s = if compact {
        serde_json::to_string(value).expect("report serialization cannot fail")
    } else {
        serde_json::to_string_pretty(value).expect("report serialization cannot fail")
    };
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_document() {
        let doc = SetupDocument::parse(
            r#"{"group": {"factors": [{"series": "A", "rank": 3}]},
                "genus": 3,
                "points": [{"label": "p", "facet": [[0, 2]]}]}"#,
        )
        .unwrap();
        let setup = doc.to_setup().unwrap();
        assert_eq!(setup.genus, 3);
        assert_eq!(setup.points.len(), 1);
    }

    #[test]
    fn parses_alcove_point_rationals() {
        let doc = SetupDocument::parse(
            r#"{"group": {"factors": [{"series": "A", "rank": 1}]},
                "genus": 3,
                "points": [{"label": "p", "point": ["1/2"]}]}"#,
        )
        .unwrap();
        let setup = doc.to_setup().unwrap();
        match &setup.points[0].kind {
            ParahoricKind::Point(x) => {
                assert_eq!(x[0], parse_rational("1/2").unwrap());
            }
            _ => panic!("expected point kind"),
        }
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(SetupDocument::parse("{").is_err());
        // both facet and point
        let doc = SetupDocument::parse(
            r#"{"group": {"factors": [{"series": "A", "rank": 1}]},
                "genus": 3,
                "points": [{"label": "p", "facet": [[1]], "point": ["0"]}]}"#,
        )
        .unwrap();
        assert!(doc.to_setup().is_err());
        // unknown series
        let doc = SetupDocument::parse(
            r#"{"group": {"factors": [{"series": "Z", "rank": 1}]}, "genus": 3}"#,
        )
        .unwrap();
        assert!(doc.to_setup().is_err());
        // float smuggled into a rational slot
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn isogeny_forms() {
        let doc = SetupDocument::parse(
            r#"{"group": {"factors": [{"series": "A", "rank": 1}], "isogeny": "adjoint"},
                "genus": 3}"#,
        )
        .unwrap();
        assert_eq!(doc.group_spec().unwrap().isogeny, Isogeny::Adjoint);
        let doc = SetupDocument::parse(
            r#"{"group": {"factors": [{"series": "A", "rank": 3}],
                          "isogeny": {"quotient_by": [[2]]}},
                "genus": 3}"#,
        )
        .unwrap();
        assert!(matches!(
            doc.group_spec().unwrap().isogeny,
            Isogeny::QuotientBy(_)
        ));
    }

    #[test]
    fn render_is_stable() {
        let g = FiniteAbelianGroup::from_factors(&[2, 4]);
        let out = GroupOut::of(&g);
        assert_eq!(render(&out, true), render(&GroupOut::of(&g), true));
        assert!(render(&out, true).ends_with('\n'));
    }
}
