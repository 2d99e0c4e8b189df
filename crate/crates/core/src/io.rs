//! File formats.
//!
//! * metric space JSON: `{"points": ["a", "b"], "distances": [[0, 3], [3, 0]]}`
//! * metric space CSV: square matrix whose first row and column hold labels
//! * point cloud JSON: `{"dim": 2, "points": {"a": [0, 0], "b": [1, 2]}}`
//! * weighted tree JSON: terminals, Steiner vertices, labeled edge list and
//!   optional Steiner point coordinates
//! * embedding JSON: anchor, ℓ∞ images and the image spaces
//!
//! Every parser validates what it loads. Values go through `f64`.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::embed::{EmbeddingRecord, GenericAnchor};
use crate::error::{Error, Result};
use crate::metric::{MetricSpace, PointCloud};
use crate::scalar::Scalar;
use crate::trees::{TreeTopology, WeightedTree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub points: Vec<String>,
    pub distances: Vec<Vec<f64>>,
}

impl SpaceJson {
    pub fn from_space<T: Scalar>(x: &MetricSpace<T>) -> Self {
        Self {
            points: x.labels().to_vec(),
            distances: x
                .matrix()
                .iter()
                .map(|row| row.iter().map(|v| v.as_f64()).collect())
                .collect(),
        }
    }

    pub fn into_space<T: Scalar>(self) -> Result<MetricSpace<T>> {
        let dist = self
            .distances
            .into_iter()
            .map(|row| row.into_iter().map(to_scalar).collect::<Result<Vec<T>>>())
            .collect::<Result<Vec<_>>>()?;
        MetricSpace::new(self.points, dist)
    }
}

fn to_scalar<T: Scalar>(v: f64) -> Result<T> {
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite value {v}")));
    }
    T::from_f64(v).ok_or_else(|| Error::Parse(format!("{v} is not representable")))
}

pub fn parse_space_json<T: Scalar>(text: &str) -> Result<MetricSpace<T>> {
    let raw: SpaceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.into_space()
}

pub fn space_to_json<T: Scalar>(x: &MetricSpace<T>) -> String {
    serde_json::to_string_pretty(&SpaceJson::from_space(x)).expect("plain data serializes")
}

pub fn parse_space_csv<T: Scalar>(text: &str) -> Result<MetricSpace<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .clone();
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut dist = Vec::with_capacity(labels.len());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row_label = record.get(0).unwrap_or_default();
        if labels.get(i).map(String::as_str) != Some(row_label) {
            return Err(Error::Parse(format!(
                "row {} is labeled `{row_label}`, expected `{}`",
                i + 1,
                labels.get(i).map_or("<none>", String::as_str)
            )));
        }
        let row = record
            .iter()
            .skip(1)
            .map(|cell| {
                cell.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("`{cell}`: {e}")))
                    .and_then(to_scalar)
            })
            .collect::<Result<Vec<T>>>()?;
        dist.push(row);
    }
    MetricSpace::new(labels, dist)
}

pub fn space_to_csv<T: Scalar>(x: &MetricSpace<T>) -> String {
    let mut out = String::new();
    out.push_str(&std::iter::once(String::new()).chain(x.labels().iter().cloned()).collect::<Vec<_>>().join(","));
    out.push('\n');
    for (label, row) in x.labels().iter().zip(x.matrix()) {
        out.push_str(label);
        for v in row {
            out.push(',');
            out.push_str(&v.as_f64().to_string());
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudJson {
    pub dim: usize,
    pub points: IndexMap<String, Vec<f64>>,
}

impl CloudJson {
    pub fn from_cloud<T: Scalar>(c: &PointCloud<T>) -> Self {
        Self {
            dim: c.dim(),
            points: c
                .labels()
                .iter()
                .cloned()
                .zip(c.coords().iter().map(|p| p.iter().map(|v| v.as_f64()).collect()))
                .collect(),
        }
    }

    pub fn into_cloud<T: Scalar>(self) -> Result<PointCloud<T>> {
        let labels = self.points.keys().cloned().collect();
        let coords = self
            .points
            .into_values()
            .map(|p| p.into_iter().map(to_scalar).collect::<Result<Vec<T>>>())
            .collect::<Result<Vec<_>>>()?;
        PointCloud::new(labels, self.dim, coords)
    }
}

pub fn parse_cloud_json<T: Scalar>(text: &str) -> Result<PointCloud<T>> {
    let raw: CloudJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.into_cloud()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: String,
    pub v: String,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeJson {
    pub terminals: Vec<String>,
    pub steiner: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub length: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<IndexMap<String, Vec<f64>>>,
}

impl TreeJson {
    pub fn from_tree<T: Scalar>(tree: &WeightedTree<T>) -> Self {
        let topo = tree.topology();
        let names = topo.vertex_labels();
        let n = topo.terminal_count();
        Self {
            terminals: names[..n].to_vec(),
            steiner: names[n..].to_vec(),
            edges: topo
                .edges()
                .iter()
                .zip(tree.edge_lengths())
                .map(|(&(a, b), w)| EdgeJson {
                    u: names[a].clone(),
                    v: names[b].clone(),
                    length: w.as_f64(),
                })
                .collect(),
            length: tree.length().as_f64(),
            coordinates: tree.internal_coords().map(|coords| {
                names[n..]
                    .iter()
                    .cloned()
                    .zip(coords.iter().map(|c| c.iter().map(|v| v.as_f64()).collect()))
                    .collect()
            }),
        }
    }

    pub fn into_tree<T: Scalar>(self) -> Result<WeightedTree<T>> {
        let names: Vec<&String> = self.terminals.iter().chain(&self.steiner).collect();
        let index = |label: &str| {
            names
                .iter()
                .position(|l| *l == label)
                .ok_or_else(|| Error::Parse(format!("unknown vertex `{label}`")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut lengths = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            edges.push((index(&e.u)?, index(&e.v)?));
            lengths.push(to_scalar(e.length)?);
        }
        let topology = TreeTopology::new(self.terminals.clone(), self.steiner.len(), edges)?;
        let coords = match self.coordinates {
            None => None,
            Some(map) => Some(
                self.steiner
                    .iter()
                    .map(|s| {
                        map.get(s)
                            .ok_or_else(|| Error::Parse(format!("no coordinates for `{s}`")))?
                            .iter()
                            .map(|&v| to_scalar(v))
                            .collect::<Result<Vec<T>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        WeightedTree::new(topology, lengths, coords)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorJson {
    pub space: SpaceJson,
    /// Labels of the pair at each rank of the sorted distance vector.
    pub pair_order: Vec<(String, String)>,
    pub delta: f64,
    pub ball_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub anchor: AnchorJson,
    pub images: IndexMap<String, Vec<f64>>,
    pub spaces: IndexMap<String, SpaceJson>,
    pub scale_used: f64,
}

impl EmbeddingJson {
    pub fn from_record<T: Scalar>(rec: &EmbeddingRecord<T>) -> Self {
        let a = &rec.anchor;
        let labels = a.space.labels();
        Self {
            anchor: AnchorJson {
                space: SpaceJson::from_space(&a.space),
                pair_order: a
                    .pair_order
                    .iter()
                    .map(|&(i, j)| (labels[i].clone(), labels[j].clone()))
                    .collect(),
                delta: a.delta.as_f64(),
                ball_radius: a.ball_radius.as_f64(),
            },
            images: CloudJson::from_cloud(&rec.images).points,
            spaces: rec
                .source_labels()
                .iter()
                .cloned()
                .zip(rec.spaces.iter().map(SpaceJson::from_space))
                .collect(),
            scale_used: rec.scale_used.as_f64(),
        }
    }

    /// Rebuilds the record, re-deriving the anchor from its space.
    pub fn into_record<T: Scalar>(self) -> Result<EmbeddingRecord<T>> {
        let anchor = GenericAnchor::from_space(self.anchor.space.into_space()?)?;
        let dim = anchor.dim();
        let images = CloudJson {
            dim,
            points: self.images,
        }
        .into_cloud()?;
        let spaces = self
            .spaces
            .into_values()
            .map(SpaceJson::into_space)
            .collect::<Result<Vec<_>>>()?;
        Ok(EmbeddingRecord {
            anchor,
            images,
            spaces,
            scale_used: to_scalar(self.scale_used)?,
        })
    }
}
