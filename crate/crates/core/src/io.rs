//! JSON file formats for families, distributions, lattice sets, groups and
//! sumset instances.

use std::path::Path;

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::entropy::JointDistribution;
use crate::error::{Error, Result};
use crate::groups::{CatalogGroup, CayleyTable, Element, GroupContext};
use crate::lattice::LatticeSet;
use crate::set_families::SetFamily;
use crate::sumsets::SumsetInstance;

/// `{"n": 6, "sets": [[2,3,4],[1,3,5]]}` with 1-based elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfEntry {
    pub x: Vec<i64>,
    /// A rational written `"a/b"` or `"a"`.
    pub p: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub n: usize,
    pub supports: Vec<Vec<i64>>,
    pub pmf: Vec<PmfEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub n: usize,
    pub points: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupFile {
    Cyclic { m: u64 },
    FreeAbelian { d: usize },
    Cayley {
        order: usize,
        identity: usize,
        table: Vec<Vec<usize>>,
    },
}

/// A group given inline or as a path relative to the instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Inline(GroupFile),
    Path(String),
}

/// Integers stand for one-coordinate elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementValue {
    Scalar(i64),
    Vector(Vec<i64>),
}

impl ElementValue {
    fn into_element(self) -> Element {
        match self {
            ElementValue::Scalar(v) => vec![v],
            ElementValue::Vector(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    /// May be omitted when the group is supplied separately.
    #[serde(default)]
    pub group: Option<GroupRef>,
    pub sets: Vec<Vec<ElementValue>>,
}

/// `{"A": [...], "B": [[...], ...], "C": [...]}` over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GymrFile {
    #[serde(rename = "A")]
    pub a: Vec<i64>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(rename = "C")]
    pub c: Vec<i64>,
}

/// One entry of a search catalog. Finite groups default to every element as
/// the pool; free abelian groups need an explicit pool.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub group: GroupFile,
    #[serde(default)]
    pub pool: Option<Vec<ElementValue>>,
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "line {}, column {}: {}",
            e.line(),
            e.column(),
            strip_position(&e.to_string())
        ))
    })
}

fn strip_position(message: &str) -> &str {
    message
        .rfind(" at line ")
        .map_or(message, |cut| &message[..cut])
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let file: FamilyFile = from_json(text)?;
    SetFamily::from_sets(file.n, file.sets)
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("bad rational {text:?}: {e}")))
}

pub fn parse_distribution(text: &str) -> Result<JointDistribution> {
    let file: DistributionFile = from_json(text)?;
    if file.supports.len() != file.n {
        return Err(Error::InvalidDistribution(format!(
            "{} supports given for {} variables",
            file.supports.len(),
            file.n
        )));
    }
    let entries = file
        .pmf
        .into_iter()
        .map(|e| Ok((e.x, parse_rational(&e.p)?)))
        .collect::<Result<Vec<_>>>()?;
    JointDistribution::new(file.supports, entries)
}

pub fn parse_lattice(text: &str) -> Result<LatticeSet> {
    let file: LatticeFile = from_json(text)?;
    LatticeSet::new(file.n, file.points)
}

pub fn group_from_file(file: GroupFile) -> Result<GroupContext> {
    match file {
        GroupFile::Cyclic { m } => GroupContext::cyclic(m),
        GroupFile::FreeAbelian { d } => GroupContext::free_abelian(d),
        GroupFile::Cayley {
            order,
            identity,
            table,
        } => Ok(GroupContext::Cayley(CayleyTable::new(order, identity, table)?)),
    }
}

pub fn parse_group(text: &str) -> Result<GroupContext> {
    group_from_file(from_json(text)?)
}

/// Parses an instance; a group given by path is resolved against `base`.
pub fn parse_instance(text: &str, base: Option<&Path>) -> Result<SumsetInstance> {
    parse_instance_in(text, base, None)
}

/// Like [`parse_instance`], with `group` taking precedence over the file's
/// own group.
pub fn parse_instance_in(
    text: &str,
    base: Option<&Path>,
    group: Option<GroupContext>,
) -> Result<SumsetInstance> {
    let file: InstanceFile = from_json(text)?;
    let ctx = match (group, file.group) {
        (Some(ctx), _) => ctx,
        (None, Some(GroupRef::Inline(g))) => group_from_file(g)?,
        (None, Some(GroupRef::Path(p))) => {
            let path = base.map_or_else(|| Path::new(&p).to_path_buf(), |b| b.join(&p));
            parse_group(&read_text(&path)?)?
        }
        (None, None) => return Err(Error::Parse("instance names no group".into())),
    };
    let sets = file
        .sets
        .into_iter()
        .map(|s| s.into_iter().map(ElementValue::into_element).collect())
        .collect();
    SumsetInstance::new(ctx, sets)
}

/// A JSON array of [`CatalogEntry`] values.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogGroup>> {
    let entries: Vec<CatalogEntry> = from_json(text)?;
    entries
        .into_iter()
        .map(|e| {
            let ctx = group_from_file(e.group)?;
            let pool = match (e.pool, ctx.elements()) {
                (Some(pool), _) => {
                    let pool: Vec<Element> = pool.into_iter().map(ElementValue::into_element).collect();
                    for x in &pool {
                        ctx.validate(x)?;
                    }
                    pool
                }
                (None, Some(all)) => all,
                (None, None) => {
                    return Err(Error::Parse(format!("group {} needs an element pool", e.name)))
                }
            };
            Ok(CatalogGroup {
                name: e.name,
                ctx,
                pool,
            })
        })
        .collect()
}

pub fn parse_gymr(text: &str) -> Result<GymrFile> {
    from_json(text)
}

pub fn family_json(fam: &SetFamily) -> Value {
    json!({ "n": fam.n(), "sets": fam.to_sets() })
}

pub fn lattice_json(s: &LatticeSet) -> Value {
    json!({ "n": s.n(), "points": s.points() })
}

pub fn group_json(ctx: &GroupContext) -> Value {
    match ctx {
        GroupContext::FreeAbelian { d } => json!({ "kind": "free-abelian", "d": d }),
        GroupContext::Cyclic { m } => json!({ "kind": "cyclic", "m": m }),
        GroupContext::Cayley(t) => json!({
            "kind": "cayley",
            "order": t.order(),
            "identity": t.identity(),
            "table": t.table(),
        }),
    }
}

/// Writes one-coordinate elements as plain integers.
pub fn element_json(e: &[i64]) -> Value {
    match e {
        [v] => json!(v),
        _ => json!(e),
    }
}

pub fn instance_json(inst: &SumsetInstance) -> Value {
    let sets: Vec<Vec<Value>> = inst
        .sets()
        .iter()
        .map(|s| s.iter().map(|e| element_json(e)).collect())
        .collect();
    json!({ "group": group_json(inst.ctx()), "sets": sets })
}

pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
