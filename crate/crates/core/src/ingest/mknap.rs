use std::fmt::Write as _;

use super::{parse_f64, parse_usize, IngestError};
use crate::problems::KnapsackInstance;

struct Tokens<'a> {
    inner: std::str::SplitWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn take(&mut self, count: usize, section: &str) -> Result<Vec<f64>, IngestError> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let t = self
                .inner
                .next()
                .ok_or_else(|| IngestError::TruncatedSection(section.to_string()))?;
            out.push(parse_f64(t)?);
        }
        Ok(out)
    }

    fn take_partial(&mut self, count: usize) -> Result<Vec<f64>, IngestError> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            match self.inner.next() {
                Some(t) => out.push(parse_f64(t)?),
                None => break,
            }
        }
        Ok(out)
    }

    fn usize(&mut self, section: &str) -> Result<usize, IngestError> {
        let t = self
            .inner
            .next()
            .ok_or_else(|| IngestError::TruncatedSection(section.to_string()))?;
        parse_usize(t)
    }
}

/// OR-Library multi-knapsack layout: the number of problems, then for each
/// problem `n m optimum`, `n` profits, `m` rows of `n` weights and `m`
/// capacities. An optimum of 0 means unknown. Instances are named
/// `{name}-{k}` with `k` counted from 1.
pub fn parse_orlib_mknap(text: &str, name: &str) -> Result<Vec<KnapsackInstance>, IngestError> {
    let mut tok = Tokens {
        inner: text.split_whitespace(),
    };
    let count = tok.usize("problem count")?;
    let mut out = Vec::with_capacity(count);
    for k in 1..=count {
        let label = format!("{name}-{k}");
        let n = tok.usize(&format!("{label} header"))?;
        let m = tok.usize(&format!("{label} header"))?;
        let opt = tok.take(1, &format!("{label} header"))?[0];
        let profit = tok.take(n, &format!("{label} profits"))?;
        let mut weight = Vec::with_capacity(m);
        for r in 0..m {
            weight.push(tok.take(n, &format!("{label} weight row {}", r + 1))?);
        }
        let capacity = tok.take_partial(m)?;
        if capacity.len() != m {
            return Err(IngestError::CountMismatch {
                what: format!("{label} capacities"),
                expected: m,
                got: capacity.len(),
            });
        }
        let best = (opt != 0.0).then_some(opt);
        out.push(KnapsackInstance::new(label, profit, weight, capacity)?.with_best_known(best));
    }
    if tok.inner.next().is_some() {
        log::warn!("{name}: trailing tokens after {count} problems");
    }
    Ok(out)
}

pub fn write_orlib_mknap(instances: &[KnapsackInstance]) -> String {
    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("{}\n", instances.len());
    for inst in instances {
        let _ = writeln!(out, "{} {} {}", inst.n, inst.m, inst.best_known.unwrap_or(0.0));
        let _ = writeln!(out, "{}", join(&inst.profit));
        for row in &inst.weight {
            let _ = writeln!(out, "{}", join(row));
        }
        let _ = writeln!(out, "{}", join(&inst.capacity));
    }
    out
}
