//! File formats: distance-matrix CSV, tree edge lists, point-cloud CSV,
//! partial-graph JSON, and the score record emitted by the CLI.
//!
//! All distance entries are rationals written as `p/q` or integers.
//! Decimal notation is rejected unless float ingestion is explicitly
//! allowed, in which case the parsed value is flagged inexact downstream.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::measures::DiversityScore;
use crate::metric::{DistanceMatrix, MetricKind, PointCloud};
use crate::scalar::Scalar;
use crate::symmetry::PartialGraph;
use crate::tree::WeightedTree;

fn split_csv(line: &str) -> Vec<String> {
    line.split(',').map(|s| s.trim().to_string()).collect()
}

fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Parses a distance matrix from CSV: first row labels, then one row per
/// point holding either the full row, the lower triangle including the
/// diagonal, or the strict lower triangle.
pub fn parse_matrix_csv(text: &str, allow_decimal: bool) -> Result<DistanceMatrix, Error> {
    let lines = content_lines(text);
    let Some(&(_, header)) = lines.first() else {
        return Err(Error::format("matrix csv", "no header row"));
    };
    let labels = split_csv(header);
    if labels.iter().any(|l| l.is_empty()) {
        return Err(Error::format("matrix csv", "empty label in header"));
    }
    let n = labels.len();
    if lines.len() != n + 1 {
        return Err(Error::format(
            "matrix csv",
            format!("expected {n} data rows after the header, got {}", lines.len() - 1),
        ));
    }
    let mut d = vec![Scalar::zero(); n * n];
    for (row, &(line_no, line)) in lines[1..].iter().enumerate() {
        let cells = split_csv(line);
        let parsed: Vec<Scalar> = cells
            .iter()
            .map(|c| {
                Scalar::parse(c, allow_decimal).map_err(|e| {
                    Error::format("matrix csv", format!("line {line_no}: {e}"))
                })
            })
            .collect::<Result<_, _>>()?;
        let accepted = match parsed.len() {
            len if len == n => true,          // full row
            len if len == row + 1 => true,    // lower triangle with diagonal
            len if len == row => true,        // strict lower triangle
            _ => false,
        };
        if !accepted {
            return Err(Error::format(
                "matrix csv",
                format!(
                    "line {line_no}: row {} must have {n}, {} or {} entries, got {}",
                    row + 1,
                    row + 1,
                    row,
                    parsed.len()
                ),
            ));
        }
        for (col, value) in parsed.into_iter().enumerate() {
            d[row * n + col] = value;
        }
    }
    // mirror whichever triangle was given; a full matrix must already agree
    for i in 0..n {
        for j in (i + 1)..n {
            let lower = d[j * n + i].clone();
            let upper = d[i * n + j].clone();
            if upper.is_zero() {
                d[i * n + j] = lower;
            } else if lower.is_zero() {
                d[j * n + i] = upper;
            } else if lower != upper {
                return Err(Error::format(
                    "matrix csv",
                    format!("entries ({},{}) and ({},{}) disagree", i + 1, j + 1, j + 1, i + 1),
                ));
            }
        }
    }
    DistanceMatrix::new(labels, d)
}

/// Writes the full symmetric matrix as CSV, one row per point.
pub fn matrix_to_csv(m: &DistanceMatrix) -> String {
    let mut out = m.labels().join(",");
    out.push('\n');
    let n = m.len();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parses a weighted tree from "u v w" lines (blank lines and `#` comments
/// allowed).
pub fn parse_tree(text: &str) -> Result<WeightedTree, Error> {
    let mut edges = Vec::new();
    for (line_no, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::format(
                "tree file",
                format!("line {line_no}: expected \"u v w\", got {line:?}"),
            ));
        }
        let w = Scalar::parse(fields[2], false)
            .map_err(|e| Error::format("tree file", format!("line {line_no}: {e}")))?;
        edges.push((fields[0].to_string(), fields[1].to_string(), w));
    }
    WeightedTree::from_edges(&edges)
}

/// Writes a tree back to the "u v w" line format.
pub fn tree_to_string(t: &WeightedTree) -> String {
    t.edges()
        .iter()
        .map(|(u, v, w)| format!("{} {} {}\n", t.vertices()[*u], t.vertices()[*v], w))
        .collect()
}

/// Parses a point cloud: first row `metric,<euclidean|hamming>`, then one
/// `label,c1,c2,...` row per point.
pub fn parse_point_cloud_csv(text: &str) -> Result<PointCloud, Error> {
    let lines = content_lines(text);
    let Some(&(_, header)) = lines.first() else {
        return Err(Error::format("point-cloud csv", "no header row"));
    };
    let head = split_csv(header);
    if head.len() != 2 || head[0] != "metric" {
        return Err(Error::format(
            "point-cloud csv",
            "header must be \"metric,euclidean\" or \"metric,hamming\"",
        ));
    }
    let metric_kind = match head[1].as_str() {
        "euclidean" => MetricKind::Euclidean,
        "hamming" => MetricKind::Hamming,
        other => {
            return Err(Error::format(
                "point-cloud csv",
                format!("unknown metric kind {other:?}"),
            ))
        }
    };
    let mut labels = Vec::new();
    let mut points = Vec::new();
    for &(line_no, line) in &lines[1..] {
        let cells = split_csv(line);
        if cells.len() < 2 {
            return Err(Error::format(
                "point-cloud csv",
                format!("line {line_no}: expected label and coordinates"),
            ));
        }
        labels.push(cells[0].clone());
        let coords: Vec<f64> = cells[1..]
            .iter()
            .map(|c| {
                c.parse::<f64>().map_err(|_| {
                    Error::format("point-cloud csv", format!("line {line_no}: bad coordinate {c:?}"))
                })
            })
            .collect::<Result<_, _>>()?;
        points.push(coords);
    }
    PointCloud::new(labels, points, metric_kind)
}

/// On-disk form of a partial graph:
/// `{n, weighted: [[i, j, "p/q"], ...], labeled: [[i, j, "e1"], ...]}`.
#[derive(Serialize, Deserialize)]
struct PartialGraphFile {
    n: usize,
    weighted: Vec<(usize, usize, String)>,
    labeled: Vec<(usize, usize, String)>,
}

pub fn parse_partial_graph_json(text: &str) -> Result<PartialGraph, Error> {
    let raw: PartialGraphFile = serde_json::from_str(text)?;
    let weighted = raw
        .weighted
        .into_iter()
        .map(|(i, j, w)| Ok((i, j, Scalar::parse(&w, false)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    PartialGraph::new(raw.n, weighted, raw.labeled)
}

pub fn partial_graph_to_json(g: &PartialGraph) -> String {
    let raw = PartialGraphFile {
        n: g.len(),
        weighted: g
            .weighted_edges()
            .iter()
            .map(|(&(i, j), w)| (i, j, w.to_string()))
            .collect(),
        labeled: g
            .labeled_edges()
            .iter()
            .map(|(&(i, j), l)| (i, j, l.clone()))
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("serialization cannot fail")
}

/// The score record printed by the CLI:
/// `{measure, subset, value: {num, den}, exact, notes}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub measure: String,
    pub subset: Vec<String>,
    pub value: RationalRecord,
    pub exact: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalRecord {
    pub num: String,
    pub den: String,
}

impl RationalRecord {
    pub fn of(s: &Scalar) -> Self {
        RationalRecord {
            num: s.value().numer().to_string(),
            den: s.value().denom().to_string(),
        }
    }
}

impl ScoreRecord {
    pub fn from_score(score: &DiversityScore, subset: Vec<String>) -> Self {
        ScoreRecord {
            measure: score.measure.name(),
            subset,
            value: RationalRecord::of(&score.value),
            exact: score.exact,
            notes: score.notes.clone(),
        }
    }
}
