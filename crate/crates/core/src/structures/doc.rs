//! JSON document shapes for frames, models, point maps and relations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PointRef;

/// `{"moments": [...], "edges": [[parent, child], ...], "indist": {moment: [[leaf, ...], ...]}}`
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameDoc {
    pub moments: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub indist: BTreeMap<String, Vec<Vec<String>>>,
}

/// A frame document plus `"valuation": {atom: [[moment, classRep], ...]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    #[serde(flatten)]
    pub frame: FrameDoc,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<PointDoc>>,
}

/// A point as the 2-array `[moment, classRep]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointDoc(pub String, pub String);

impl From<PointRef> for PointDoc {
    fn from(r: PointRef) -> Self {
        PointDoc(r.moment, r.rep)
    }
}

impl From<&PointDoc> for PointRef {
    fn from(d: &PointDoc) -> Self {
        PointRef::new(d.0.clone(), d.1.clone())
    }
}

/// Point maps: `[[srcPoint, dstPoint], ...]`.
pub type MapDoc = Vec<(PointDoc, PointDoc)>;

/// Point relations share the map layout.
pub type RelationDoc = Vec<(PointDoc, PointDoc)>;
