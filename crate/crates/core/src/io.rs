//! JSON and CSV forms of groups, Burnside and biset elements, lattices and
//! explicit G-sets, plus resolution of textual group specs.
//!
//! A group spec is a catalog name, inline JSON, `@path` to a JSON file, or
//! `SPEC[x,y,…]` for the subgroup of `SPEC` generated by the listed elements.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::biset::{BisetElement, BisetSpace};
use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::catalog::catalog_group_with_cap;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::oracle::ConcreteGSet;
use crate::subgroup::{subgroup_as_group, subgroup_generated};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Cayley {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        order: usize,
        cayley: Vec<Vec<usize>>,
    },
    Permutations {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    /// A catalog name or any other textual spec.
    Spec(String),
}

impl GroupJson {
    pub fn from_group(group: &FiniteGroup) -> GroupJson {
        GroupJson::Cayley {
            name: group.name().map(str::to_string),
            order: group.order(),
            cayley: group.cayley_table(),
        }
    }

    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        match self {
            GroupJson::Cayley { name, order, cayley } => {
                if cayley.len() != *order {
                    return Err(Error::Parse(format!(
                        "declared order {order} but the table has {} rows",
                        cayley.len()
                    )));
                }
                if *order > cap {
                    return Err(Error::TooLarge {
                        what: "group",
                        size: *order,
                        cap,
                    });
                }
                let g = FiniteGroup::from_cayley(cayley)?;
                Ok(match name {
                    Some(n) => g.with_name(n.clone()),
                    None => g,
                })
            }
            GroupJson::Permutations { name, degree, generators } => {
                let g = FiniteGroup::from_permutations(*degree, generators, cap)?;
                Ok(match name {
                    Some(n) => g.with_name(n.clone()),
                    None => g,
                })
            }
            GroupJson::Spec(s) => Ok((*parse_group(s, cap)?).clone()),
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
}

/// Resolves a group spec; see the module docs for the grammar.
pub fn parse_group(spec: &str, cap: usize) -> Result<Arc<FiniteGroup>> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        let json: GroupJson = serde_json::from_str(&read_file(path)?).map_err(json_error)?;
        return Ok(Arc::new(json.build(cap)?));
    }
    if spec.starts_with('{') {
        let json: GroupJson = serde_json::from_str(spec).map_err(json_error)?;
        return Ok(Arc::new(json.build(cap)?));
    }
    if let Some(open) = spec.find('[') {
        let inner = spec[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("unterminated subgroup list in `{spec}`")))?;
        let parent = parse_group(&spec[..open], cap)?;
        let seeds = parse_usize_list(inner)?;
        if let Some(&bad) = seeds.iter().find(|&&x| x >= parent.order()) {
            return Err(Error::Parse(format!("element {bad} out of range in `{spec}`")));
        }
        let sub = subgroup_generated(&parent, &seeds);
        return Ok(subgroup_as_group(&parent, &sub).0);
    }
    Ok(Arc::new(catalog_group_with_cap(spec, cap)?))
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("`{t}` is not a non-negative integer"))))
        .collect()
}

pub fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("`{t}` is not an integer"))))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BurnsideElementJson {
    pub group: GroupJson,
    pub coeffs: Vec<i64>,
}

impl BurnsideElementJson {
    pub fn from_element(x: &BurnsideElement) -> Self {
        BurnsideElementJson {
            group: GroupJson::from_group(x.ring().group()),
            coeffs: x.coeffs().to_vec(),
        }
    }

    pub fn build(&self, cap: usize) -> Result<BurnsideElement> {
        let ring = BurnsideRing::with_cap(Arc::new(self.group.build(cap)?), cap)?;
        ring.element(self.coeffs.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BisetElementJson {
    pub source: GroupJson,
    pub target: GroupJson,
    pub coeffs: Vec<i64>,
    /// `(K ≤ G, φ: K→H)` for each basis class, in coefficient order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl BisetElementJson {
    pub fn from_element(x: &BisetElement) -> Self {
        BisetElementJson {
            source: GroupJson::from_group(x.space().source()),
            target: GroupJson::from_group(x.space().target()),
            coeffs: x.coeffs().to_vec(),
            labels: x.space().labels(),
        }
    }

    pub fn build(&self, cap: usize) -> Result<BisetElement> {
        let space = BisetSpace::with_cap(
            Arc::new(self.source.build(cap)?),
            Arc::new(self.target.build(cap)?),
            cap,
        )?;
        space.element(self.coeffs.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GSetJson {
    pub group: GroupJson,
    pub size: usize,
    pub action: Vec<Vec<usize>>,
}

impl GSetJson {
    pub fn from_set(x: &ConcreteGSet) -> Self {
        GSetJson {
            group: GroupJson::from_group(x.group()),
            size: x.size(),
            action: x.action_table(),
        }
    }

    pub fn build(&self, cap: usize) -> Result<ConcreteGSet> {
        let set = ConcreteGSet::new(Arc::new(self.group.build(cap)?), self.action.clone())?;
        if set.size() != self.size && !(self.size == 0 && self.action.iter().all(Vec::is_empty)) {
            return Err(Error::InvalidAction(format!(
                "declared size {} but rows have length {}",
                self.size,
                set.size()
            )));
        }
        Ok(set)
    }
}

/// Table of marks with a header row of class labels; row `i` is `[G/H_i]`.
pub fn marks_csv(ring: &BurnsideRing) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let labels: Vec<String> = (0..ring.rank()).map(|i| ring.class_label(i)).collect();
    let csv_err = |e: csv::Error| Error::Invalid(e.to_string());
    w.write_record(std::iter::once("G/H").chain(labels.iter().map(String::as_str)))
        .map_err(csv_err)?;
    for (i, row) in ring.table_of_marks().rows().iter().enumerate() {
        let mut record = vec![labels[i].clone()];
        record.extend(row.iter().map(i64::to_string));
        w.write_record(&record).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_ORDER_CAP;

    #[test]
    fn group_specs() {
        let cap = DEFAULT_ORDER_CAP;
        assert_eq!(parse_group("A4", cap).unwrap().order(), 12);
        let v = parse_group(r#"{"name":"K","order":4,"cayley":[[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]]}"#, cap).unwrap();
        assert_eq!(v.name(), Some("K"));
        assert!(v.elements().skip(1).all(|x| v.element_order(x) == 2));
        let d8 = parse_group(r#"{"degree":4,"generators":[[1,2,3,0],[2,1,0,3]]}"#, cap).unwrap();
        assert_eq!(d8.order(), 8);
        let sub = parse_group("S4[1]", cap).unwrap();
        assert!(sub.order() > 1 && 24 % sub.order() == 0);
        assert!(matches!(parse_group("{\"order\":", cap), Err(Error::Parse(_))));
        assert!(matches!(parse_group("@/nonexistent.json", cap), Err(Error::Parse(_))));
        assert!(matches!(parse_group("Z7", cap), Err(Error::UnknownName(_))));
        assert!(matches!(parse_group("C9", 8), Err(Error::TooLarge { .. })));
        assert!(matches!(parse_group(r#"{"order":2,"cayley":[[0,1],[1,1]]}"#, cap), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn element_json() {
        let ring = BurnsideRing::new(parse_group("V4", DEFAULT_ORDER_CAP).unwrap()).unwrap();
        let g = crate::burnside::klein_generator(&ring);
        let text = serde_json::to_string(&BurnsideElementJson::from_element(&g)).unwrap();
        assert!(text.contains("\"coeffs\":[-1,1,1,1,-2]"));
        let named: BurnsideElementJson = serde_json::from_str(r#"{"group":"V4","coeffs":[-1,1,1,1,-2]}"#).unwrap();
        assert_eq!(named.build(DEFAULT_ORDER_CAP).unwrap().coeffs(), g.coeffs());
    }

    #[test]
    fn csv_header() {
        let ring = BurnsideRing::new(parse_group("C2", DEFAULT_ORDER_CAP).unwrap()).unwrap();
        let text = marks_csv(&ring).unwrap();
        assert_eq!(
            text,
            "G/H,\"H(order=1,idx=0)\",\"H(order=2,idx=1)\"\n\"H(order=1,idx=0)\",2,0\n\"H(order=2,idx=1)\",1,1\n"
        );
    }
}
