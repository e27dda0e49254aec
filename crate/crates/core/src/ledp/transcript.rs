use super::Payload;
use crate::error::{DsgError, Result};
use crate::privacy::{Disjointness, NoiseKind};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// Declared privacy parameters of a local randomizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomizerParams {
    pub mechanism: NoiseKind,
    pub sensitivity: f64,
    pub scale: f64,
    pub disjointness: Disjointness,
    #[serde(with = "crate::privacy::finite_or_null")]
    pub zcdp_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TranscriptEntry {
    /// One query round: parties (`None` = all nodes), randomizer, its
    /// parameters and the randomized outputs in party order.
    Collect {
        round: usize,
        parties: Option<Vec<usize>>,
        randomizer: String,
        params: RandomizerParams,
        outputs: Vec<f64>,
    },
    /// Zero-cost curator post-processing.
    Publish {
        round: usize,
        label: String,
        payload: Payload,
    },
}

/// Append-only record of a protocol run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub(crate) fn push(&mut self, e: TranscriptEntry) {
        self.entries.push(e);
    }

    pub(crate) fn append(&mut self, other: Transcript, round_offset: usize) {
        self.entries.extend(other.entries.into_iter().map(|mut e| {
            match &mut e {
                TranscriptEntry::Collect { round, .. } | TranscriptEntry::Publish { round, .. } => {
                    *round += round_offset
                }
            }
            e
        }));
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of query rounds.
    pub fn rounds(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e, TranscriptEntry::Collect { .. }))
            .count()
    }

    /// JSON lines, one entry per line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for e in &self.entries {
            serde_json::to_writer(&mut w, e).map_err(|e| DsgError::Io(e.to_string()))?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let e = serde_json::from_str(&line).map_err(|e| DsgError::Parse {
                line: i + 1,
                reason: e.to_string(),
            })?;
            entries.push(e);
        }
        Ok(Transcript { entries })
    }
}
