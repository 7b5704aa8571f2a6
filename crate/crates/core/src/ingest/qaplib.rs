use std::fmt::Write as _;

use super::{parse_i64, parse_usize, IngestError};
use crate::problems::QapInstance;
use crate::sequence::EventSequence;

/// `n`, then the flow matrix A, then the distance matrix B, all whitespace
/// separated. The objective is `sum A[i][j] * B[p(i)][p(j)]`.
pub fn parse_qaplib(text: &str, name: &str) -> Result<QapInstance, IngestError> {
    let mut tokens = text.split_whitespace();
    let n = parse_usize(tokens.next().ok_or(IngestError::MissingHeaderField("n"))?)?;
    let expected = 2 * n * n;
    let values = tokens.map(parse_i64).collect::<Result<Vec<_>, _>>()?;
    if values.len() < expected {
        return Err(IngestError::TruncatedMatrix {
            expected,
            got: values.len(),
        });
    }
    if values.len() > expected {
        log::warn!("{name}: ignoring {} trailing tokens", values.len() - expected);
    }
    let flow = values[..n * n].to_vec();
    let dist = values[n * n..expected].to_vec();
    Ok(QapInstance::new(name, n, flow, dist)?)
}

pub fn write_qaplib(inst: &QapInstance) -> String {
    let mut out = format!("{}\n", inst.n);
    for m in [&inst.flow, &inst.dist] {
        out.push('\n');
        for row in m.chunks(inst.n.max(1)) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    out
}

/// Contents of a solution file: size, objective and one-based permutation.
#[derive(Clone, Debug, PartialEq)]
pub struct QapSolution {
    pub n: usize,
    pub cost: i64,
    pub permutation: EventSequence,
}

pub fn parse_qaplib_solution(text: &str) -> Result<QapSolution, IngestError> {
    let mut tokens = text.split([' ', '\t', '\n', '\r', ',']).filter(|t| !t.is_empty());
    let n = parse_usize(tokens.next().ok_or(IngestError::MissingHeaderField("n"))?)?;
    let cost = parse_i64(tokens.next().ok_or(IngestError::MissingHeaderField("cost"))?)?;
    let perm = tokens.map(parse_usize).collect::<Result<Vec<_>, _>>()?;
    if perm.len() != n || perm.contains(&0) {
        return Err(IngestError::DimensionMismatch {
            what: "solution permutation".into(),
            expected: n,
            got: perm.len(),
        });
    }
    Ok(QapSolution {
        n,
        cost,
        permutation: EventSequence::from_one_based(&perm),
    })
}
