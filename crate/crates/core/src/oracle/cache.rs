//! Optional on-disk form of the run table.
//!
//! ```text
//! # complab run table v1
//! <program> TAB <output> TAB <steps>
//! ```
//! One record per program, `_` for ε. Only complete layers (all `2^len`
//! programs of one length) are accepted on load.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{Layer, Oracle, Run};
use crate::bits::BitString;
use crate::error::{LabError, Result};

pub const CACHE_HEADER: &str = "# complab run table v1";

impl Oracle {
    /// Writes every program of length `0..=max_len` in shortlex order.
    pub fn write_cache<W: Write>(&self, mut w: W, max_len: usize) -> Result<()> {
        if max_len > self.ceilings.table_len {
            return Err(LabError::CeilingExceeded {
                what: "cache length",
                requested: max_len,
                ceiling: self.ceilings.table_len,
            });
        }
        writeln!(w, "{CACHE_HEADER}")?;
        for len in 0..=max_len {
            for (v, run) in self.layer(len).runs.iter().enumerate() {
                let p = BitString::from_value(v as u64, len);
                writeln!(
                    w,
                    "{}\t{}\t{}",
                    p.to_token(),
                    run.output.to_token(),
                    run.steps
                )?;
            }
        }
        Ok(())
    }

    /// Installs the layers found in `r`. Layers already computed are left
    /// untouched. Returns the lengths that were installed.
    pub fn load_cache<R: BufRead>(&self, r: R) -> Result<Vec<usize>> {
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim_end() == CACHE_HEADER => {}
            _ => {
                return Err(LabError::Parse(
                    "missing or unsupported cache header".into(),
                ))
            }
        }
        let mut by_len: BTreeMap<usize, Vec<Option<Run>>> = BTreeMap::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let bad = || LabError::Parse(format!("cache line {}: {line:?}", i + 2));
            let mut fields = line.split('\t');
            let (Some(p), Some(out), Some(steps), None) =
                (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(bad());
            };
            let p: BitString = p.parse().map_err(|_| bad())?;
            let output: BitString = out.parse().map_err(|_| bad())?;
            let steps: u64 = steps.parse().map_err(|_| bad())?;
            if p.len() > self.ceilings.table_len {
                continue;
            }
            let slot = by_len
                .entry(p.len())
                .or_insert_with(|| vec![None; 1usize << p.len()]);
            slot[p.value() as usize] = Some(Run { output, steps });
        }
        let mut installed = Vec::new();
        for (len, runs) in by_len {
            let runs: Option<Vec<Run>> = runs.into_iter().collect();
            let runs = runs.ok_or_else(|| {
                LabError::Parse(format!("cache layer for length {len} is incomplete"))
            })?;
            if self.layers[len].set(Layer::from_runs(runs)).is_ok() {
                installed.push(len);
            }
        }
        Ok(installed)
    }
}
