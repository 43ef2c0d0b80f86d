//! JSON interchange for point sets and construction results.
//!
//! Point sets travel as coordinate triples of field-element encodings, never
//! as canonical indices:
//!
//! ```json
//! {"q": 4, "p": 2, "k": 2, "modulus": [1, 1, 1], "points": [[0, 0, 1], ...]}
//! ```
//!
//! A construction result adds `family`, `params` and `expected_size`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{ConstructionResult, Family, Params};
use crate::gf::{Field, FieldSpec, GfError, DEFAULT_MAX_ORDER};
use crate::plane::{Plane, PlaneError, PointSet, ProjPoint};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("q = {q} does not equal {p}^{k}")]
    OrderMismatch { q: u64, p: u32, k: u32 },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("point set is over GF({found}) but the plane is GF({expected})")]
    WrongField { expected: u32, found: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub q: u64,
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
    pub points: Vec<[u64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionFile {
    #[serde(flatten)]
    pub set: PointSetFile,
    pub family: Family,
    pub params: Params,
    pub expected_size: usize,
}

impl PointSetFile {
    pub fn from_set(plane: &Plane, set: &PointSet) -> Self {
        let spec = plane.spec();
        PointSetFile {
            q: spec.q() as u64,
            p: spec.p(),
            k: spec.k(),
            modulus: spec.modulus().to_vec(),
            points: set.iter().map(|i| plane.coords(i).map(|e| e.enc() as u64)).collect(),
        }
    }

    pub fn field_spec(&self) -> Result<FieldSpec, JsonError> {
        let spec = FieldSpec::with_modulus(self.p, self.k, self.modulus.clone(), DEFAULT_MAX_ORDER)?;
        if spec.q() as u64 != self.q {
            return Err(JsonError::OrderMismatch { q: self.q, p: self.p, k: self.k });
        }
        Ok(spec)
    }

    /// Resolves the points on `plane`, which must be over the same field.
    /// Triples are normalized; two triples naming one point are rejected.
    pub fn to_set(&self, plane: &Plane) -> Result<PointSet, JsonError> {
        let spec = self.field_spec()?;
        if spec != *plane.spec() {
            return Err(JsonError::WrongField { expected: plane.order(), found: spec.q() });
        }
        let mut idx = Vec::with_capacity(self.points.len());
        for &t in &self.points {
            let p = ProjPoint::from_encodings(plane.field(), t)?;
            idx.push(plane.point_index(&p));
        }
        let set = plane.point_set(idx.iter().copied())?;
        if set.len() != idx.len() {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            let dup = sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]).expect("a repeat");
            return Err(PlaneError::DuplicatePoint(plane.point(dup)).into());
        }
        Ok(set)
    }

    /// Builds the plane described by the file and the set on it.
    pub fn load(&self) -> Result<(Plane, PointSet), JsonError> {
        let plane = Plane::new(Field::from_spec(self.field_spec()?));
        let set = self.to_set(&plane)?;
        Ok((plane, set))
    }
}

impl ConstructionFile {
    pub fn from_result(plane: &Plane, r: &ConstructionResult) -> Self {
        ConstructionFile {
            set: PointSetFile::from_set(plane, &r.set),
            family: r.family,
            params: r.params.clone(),
            expected_size: r.expected_size,
        }
    }
}

pub fn parse_point_set(text: &str) -> Result<PointSetFile, JsonError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::even_2q_minus_1;
    use crate::gf::Elem;

    #[test]
    fn construction_file_layout() {
        let plane = Plane::of_order(8).unwrap();
        let r = even_2q_minus_1(&plane, Elem(2)).unwrap();
        let text = serde_json::to_string(&ConstructionFile::from_result(&plane, &r)).unwrap();
        assert!(text.starts_with(r#"{"q":8,"p":2,"k":3,"modulus":[1,1,0,1],"points":[["#));
        assert!(text.ends_with(r#""family":"EVEN_2QM1","params":{"a":2},"expected_size":15}"#));
        let back: ConstructionFile = serde_json::from_str(&text).unwrap();
        let (plane2, set) = back.set.load().unwrap();
        assert_eq!(set.indices(), r.set.indices());
        assert_eq!(plane2.spec(), plane.spec());
    }

    #[test]
    fn unnormalized_triples_are_accepted_once() {
        let plane = Plane::of_order(5).unwrap();
        let file = PointSetFile {
            q: 5,
            p: 5,
            k: 1,
            modulus: vec![0, 1],
            points: vec![[2, 4, 0], [0, 0, 3]],
        };
        let set = file.to_set(&plane).unwrap();
        assert_eq!(set.points(&plane)[1], ProjPoint { x: Elem(1), y: Elem(2), z: Elem(0) });
        let dup = PointSetFile { points: vec![[2, 4, 0], [1, 2, 0]], ..file.clone() };
        assert!(matches!(dup.to_set(&plane), Err(JsonError::Plane(PlaneError::DuplicatePoint(_)))));
        let zero = PointSetFile { points: vec![[0, 0, 0]], ..file.clone() };
        assert!(zero.to_set(&plane).is_err());
        let out_of_range = PointSetFile { points: vec![[5, 0, 0]], ..file.clone() };
        assert!(out_of_range.to_set(&plane).is_err());
        let wrong_q = PointSetFile { q: 7, ..file.clone() };
        assert!(matches!(wrong_q.field_spec(), Err(JsonError::OrderMismatch { .. })));
        let reducible = PointSetFile { q: 4, p: 2, k: 2, modulus: vec![1, 0, 1], ..file };
        assert!(matches!(reducible.field_spec(), Err(JsonError::Field(GfError::BadModulus { .. }))));
    }
}
