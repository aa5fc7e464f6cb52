use serde::{Deserialize, Serialize};

use super::{Halfspace, Hyperplane, PolyError, Polyhedron};
use crate::linalg::Vector;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub normal: Vector,
    pub offset: Rational,
}

/// Wire form of a polyhedron: both representations, rationals as strings.
/// On input the generator form wins when vertices are present; otherwise the
/// half-space form is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronJson {
    pub dimension: usize,
    pub empty: bool,
    #[serde(default)]
    pub vertices: Vec<Vector>,
    #[serde(default)]
    pub rays: Vec<Vector>,
    #[serde(default)]
    pub lines: Vec<Vector>,
    #[serde(default)]
    pub inequalities: Vec<ConstraintJson>,
    #[serde(default)]
    pub equalities: Vec<ConstraintJson>,
}

impl From<&Polyhedron> for PolyhedronJson {
    fn from(p: &Polyhedron) -> Self {
        PolyhedronJson {
            dimension: p.dim(),
            empty: p.is_empty(),
            vertices: p.vertices().to_vec(),
            rays: p.rays().to_vec(),
            lines: p.lines().to_vec(),
            inequalities: p
                .inequalities()
                .iter()
                .map(|h| ConstraintJson {
                    normal: h.normal.clone(),
                    offset: h.offset.clone(),
                })
                .collect(),
            equalities: p
                .equalities()
                .iter()
                .map(|h| ConstraintJson {
                    normal: h.normal.clone(),
                    offset: h.offset.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyhedronJson> for Polyhedron {
    type Error = PolyError;

    fn try_from(j: PolyhedronJson) -> Result<Self, PolyError> {
        if j.empty {
            return Ok(Polyhedron::empty(j.dimension));
        }
        if !j.vertices.is_empty() {
            return Polyhedron::from_generators(j.dimension, j.vertices, j.rays, j.lines);
        }
        let ineqs = j
            .inequalities
            .into_iter()
            .map(|c| Halfspace::new(c.normal, c.offset))
            .collect();
        let eqs = j
            .equalities
            .into_iter()
            .map(|c| Hyperplane::new(c.normal, c.offset))
            .collect();
        Polyhedron::from_halfspaces(j.dimension, ineqs, eqs)
    }
}

impl Serialize for Polyhedron {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyhedronJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polyhedron {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = PolyhedronJson::deserialize(deserializer)?;
        Polyhedron::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_ints;

    #[test]
    fn round_trips_through_json() {
        let k = Polyhedron::cone(2, vec![from_ints(&[12, -1]), from_ints(&[-8, 1])]).unwrap();
        let text = serde_json::to_string(&k).unwrap();
        assert!(text.contains("\"12/1\""));
        let back: Polyhedron = serde_json::from_str(&text).unwrap();
        assert_eq!(back, k);
        let e = Polyhedron::empty(3);
        let back: Polyhedron = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn halfspace_only_input_is_accepted() {
        let text =
            r#"{"dimension":2,"empty":false,"inequalities":[{"normal":["1","10"],"offset":"10"}]}"#;
        let p: Polyhedron = serde_json::from_str(text).unwrap();
        assert!(p.contains(&from_ints(&[10, 0])));
        assert!(!p.contains(&from_ints(&[9, 0])));
    }
}
