use std::fmt::Write as _;

use super::{parse_f64, parse_usize, IngestError};
use crate::problems::{Metric, TspInstance};

const SECTIONS: [&str; 6] = [
    "NODE_COORD_SECTION",
    "EDGE_WEIGHT_SECTION",
    "DISPLAY_DATA_SECTION",
    "FIXED_EDGES_SECTION",
    "TOUR_SECTION",
    "EOF",
];

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Full,
    /// Upper triangle read row by row (equivalently lower by column).
    Upper {
        diagonal: bool,
    },
    /// Lower triangle read row by row (equivalently upper by column).
    Lower {
        diagonal: bool,
    },
}

fn layout_of(format: &str) -> Result<Layout, IngestError> {
    Ok(match format {
        "FULL_MATRIX" => Layout::Full,
        "UPPER_ROW" | "LOWER_COL" => Layout::Upper { diagonal: false },
        "UPPER_DIAG_ROW" | "LOWER_DIAG_COL" => Layout::Upper { diagonal: true },
        "LOWER_ROW" | "UPPER_COL" => Layout::Lower { diagonal: false },
        "LOWER_DIAG_ROW" | "UPPER_DIAG_COL" => Layout::Lower { diagonal: true },
        other => return Err(IngestError::UnsupportedEdgeWeightType(other.to_string())),
    })
}

fn expected_entries(layout: Layout, n: usize) -> usize {
    match layout {
        Layout::Full => n * n,
        Layout::Upper { diagonal } | Layout::Lower { diagonal } => {
            if diagonal {
                n * (n + 1) / 2
            } else {
                n * n.saturating_sub(1) / 2
            }
        }
    }
}

fn fill_matrix(layout: Layout, n: usize, values: &[f64]) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    let mut it = values.iter().copied();
    let set = |m: &mut [f64], i: usize, j: usize, v: f64| {
        m[i * n + j] = v;
        m[j * n + i] = v;
    };
    match layout {
        Layout::Full => m.copy_from_slice(values),
        Layout::Upper { diagonal } => {
            for i in 0..n {
                let start = if diagonal { i } else { i + 1 };
                for j in start..n {
                    set(&mut m, i, j, it.next().unwrap_or(0.0));
                }
            }
        }
        Layout::Lower { diagonal } => {
            for i in 0..n {
                let end = if diagonal { i + 1 } else { i };
                for j in 0..end {
                    set(&mut m, i, j, it.next().unwrap_or(0.0));
                }
            }
        }
    }
    m
}

/// Parses a symmetric TSPLIB file with coordinates or an explicit matrix.
pub fn parse_tsplib(text: &str) -> Result<TspInstance, IngestError> {
    let mut name = None;
    let mut dimension = None;
    let mut weight_type = None;
    let mut weight_format = None;
    let mut coord_tokens: Option<Vec<String>> = None;
    let mut weight_tokens: Option<Vec<String>> = None;
    let mut current: Option<&str> = None;

    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let first = trimmed.split_whitespace().next().unwrap_or("");
        let keyword = first.trim_end_matches(':');
        if let Some(section) = SECTIONS.iter().find(|s| **s == keyword) {
            current = Some(section);
            match *section {
                "NODE_COORD_SECTION" => coord_tokens = Some(Vec::new()),
                "EDGE_WEIGHT_SECTION" => weight_tokens = Some(Vec::new()),
                "EOF" => break,
                _ => {}
            }
            continue;
        }
        if let Some((key, value)) = trimmed.split_once(':') {
            let key = key.trim();
            if key.chars().all(|c| c.is_ascii_uppercase() || c == '_') && !key.is_empty() {
                let value = value.trim().to_string();
                current = None;
                match key {
                    "NAME" => name = Some(value),
                    "DIMENSION" => dimension = Some(parse_usize(&value)?),
                    "EDGE_WEIGHT_TYPE" => weight_type = Some(value),
                    "EDGE_WEIGHT_FORMAT" => weight_format = Some(value),
                    "TYPE" => {
                        if value != "TSP" {
                            return Err(IngestError::UnsupportedEdgeWeightType(format!("problem type {value}")));
                        }
                    }
                    "COMMENT" | "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" | "EDGE_DATA_FORMAT" | "CAPACITY" => {}
                    other => log::warn!("ignoring unknown TSPLIB key {other}"),
                }
                continue;
            }
        }
        let sink = match current {
            Some("NODE_COORD_SECTION") => coord_tokens.as_mut(),
            Some("EDGE_WEIGHT_SECTION") => weight_tokens.as_mut(),
            _ => None,
        };
        match sink {
            Some(tokens) => tokens.extend(trimmed.split_whitespace().map(str::to_string)),
            None if current.is_some() => {}
            None => log::warn!("ignoring unrecognized TSPLIB line `{trimmed}`"),
        }
    }

    let n = dimension.ok_or(IngestError::MissingHeaderField("DIMENSION"))?;
    let weight_type = weight_type.ok_or(IngestError::MissingHeaderField("EDGE_WEIGHT_TYPE"))?;
    let name = name.unwrap_or_else(|| "unnamed".to_string());

    let metric = match weight_type.as_str() {
        "EUC_2D" => Metric::Euc2d,
        "ATT" => Metric::Att,
        "GEO" => Metric::Geo,
        "EXPLICIT" => Metric::Explicit,
        other => return Err(IngestError::UnsupportedEdgeWeightType(other.to_string())),
    };

    if metric == Metric::Explicit {
        let format = weight_format.ok_or(IngestError::MissingHeaderField("EDGE_WEIGHT_FORMAT"))?;
        let layout = layout_of(&format)?;
        let tokens = weight_tokens.ok_or(IngestError::MissingHeaderField("EDGE_WEIGHT_SECTION"))?;
        let values = tokens.iter().map(|t| parse_f64(t)).collect::<Result<Vec<_>, _>>()?;
        let expected = expected_entries(layout, n);
        if values.len() != expected {
            return Err(IngestError::DimensionMismatch {
                what: "EDGE_WEIGHT_SECTION".into(),
                expected,
                got: values.len(),
            });
        }
        let matrix = fill_matrix(layout, n, &values);
        return Ok(TspInstance::from_matrix(name, n, matrix)?);
    }

    let tokens = coord_tokens.ok_or(IngestError::MissingHeaderField("NODE_COORD_SECTION"))?;
    if tokens.len() % 3 != 0 || tokens.len() / 3 != n {
        return Err(IngestError::DimensionMismatch {
            what: "NODE_COORD_SECTION".into(),
            expected: n,
            got: tokens.len() / 3,
        });
    }
    let mut coords = vec![None; n];
    for chunk in tokens.chunks(3) {
        let id = parse_usize(&chunk[0])?;
        let slot = id
            .checked_sub(1)
            .and_then(|i| coords.get_mut(i))
            .ok_or_else(|| IngestError::DimensionMismatch {
                what: format!("node id {id}"),
                expected: n,
                got: id,
            })?;
        *slot = Some([parse_f64(&chunk[1])?, parse_f64(&chunk[2])?]);
    }
    let coords = coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or(IngestError::DimensionMismatch {
                what: format!("node {} coordinates", i + 1),
                expected: n,
                got: i,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TspInstance::from_coords(name, coords, metric)?)
}

/// Canonical TSPLIB text: coordinates for coordinate metrics, a full matrix
/// for explicit instances.
pub fn write_tsplib(inst: &TspInstance) -> Result<String, IngestError> {
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {}", inst.name);
    let _ = writeln!(out, "TYPE : TSP");
    let _ = writeln!(out, "DIMENSION : {}", inst.n);
    match (inst.metric, &inst.coords) {
        (Metric::Explicit, _) | (_, None) => {
            let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EXPLICIT");
            let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
            let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
            for row in inst.matrix().chunks(inst.n.max(1)) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        (Metric::Euclidean, Some(_)) => {
            return Err(IngestError::UnsupportedEdgeWeightType("EUCLIDEAN".into()));
        }
        (metric, Some(coords)) => {
            let _ = writeln!(out, "EDGE_WEIGHT_TYPE : {}", metric.name());
            let _ = writeln!(out, "NODE_COORD_SECTION");
            for (i, c) in coords.iter().enumerate() {
                let _ = writeln!(out, "{} {} {}", i + 1, c[0], c[1]);
            }
        }
    }
    out.push_str("EOF\n");
    Ok(out)
}
