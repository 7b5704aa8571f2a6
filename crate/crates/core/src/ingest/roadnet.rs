use std::collections::HashMap;
use std::fmt::Write as _;

use super::{parse_f64, IngestError};
use crate::problems::{RoadEdge, RoadNetwork};

/// Line-oriented road network text:
///
/// ```text
/// # comment
/// A B C D            node labels
/// A B 10 3           edge: from to distance waiting [resource..]
/// CAPS 12            optional per-resource caps
/// 10 A D             velocity source destination
/// ```
pub fn parse_roadnet(text: &str, name: &str) -> Result<RoadNetwork, IngestError> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            (
                i + 1,
                l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>(),
            )
        })
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let Some(((_, header), rest)) = lines.split_first() else {
        return Err(IngestError::MissingHeaderField("node list"));
    };
    let Some(((trailer_line, trailer), body)) = rest.split_last() else {
        return Err(IngestError::MissingHeaderField("velocity source destination"));
    };

    let labels: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    let mut index = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(IngestError::Malformed {
                line: 1,
                reason: format!("node `{l}` declared twice"),
            });
        }
    }
    let node = |label: &str| {
        index
            .get(label)
            .copied()
            .ok_or_else(|| IngestError::UnknownNodeReference(label.to_string()))
    };

    let mut caps = Vec::new();
    let mut edges = Vec::new();
    for (line, t) in body {
        if t[0] == "CAPS" {
            caps = t[1..].iter().map(|v| parse_f64(v)).collect::<Result<_, _>>()?;
            continue;
        }
        if t.len() < 4 {
            return Err(IngestError::Malformed {
                line: *line,
                reason: "edge needs `from to distance waiting`".into(),
            });
        }
        edges.push(RoadEdge {
            from: node(t[0])?,
            to: node(t[1])?,
            distance: parse_f64(t[2])?,
            awt: parse_f64(t[3])?,
            resources: t[4..].iter().map(|v| parse_f64(v)).collect::<Result<_, _>>()?,
        });
    }

    if trailer.len() != 3 {
        return Err(IngestError::Malformed {
            line: *trailer_line,
            reason: "last line must be `velocity source destination`".into(),
        });
    }
    let velocity = parse_f64(trailer[0])?;
    if !(velocity > 0.0) {
        return Err(IngestError::NonPositiveVelocity(velocity));
    }
    let source = node(trailer[1])?;
    let destination = node(trailer[2])?;

    let net = RoadNetwork::new(name, labels, edges, velocity, source, destination, caps)?;
    if !reachable(&net) {
        return Err(IngestError::Unreachable {
            source_label: trailer[1].to_string(),
            destination: trailer[2].to_string(),
        });
    }
    Ok(net)
}

fn reachable(net: &RoadNetwork) -> bool {
    let mut seen = vec![false; net.node_count()];
    let mut stack = vec![net.source];
    seen[net.source] = true;
    while let Some(u) = stack.pop() {
        if u == net.destination {
            return true;
        }
        for &v in net.successors(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    false
}

pub fn write_roadnet(net: &RoadNetwork) -> String {
    let mut out = format!("{}\n", net.labels.join(" "));
    for e in &net.edges {
        let _ = write!(
            out,
            "{} {} {} {}",
            net.labels[e.from], net.labels[e.to], e.distance, e.awt
        );
        for r in &e.resources {
            let _ = write!(out, " {r}");
        }
        out.push('\n');
    }
    if !net.caps.is_empty() {
        let caps: Vec<String> = net.caps.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "CAPS {}", caps.join(" "));
    }
    let _ = writeln!(
        out,
        "{} {} {}",
        net.velocity, net.labels[net.source], net.labels[net.destination]
    );
    out
}
