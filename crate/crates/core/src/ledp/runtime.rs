use super::{BulletinBoard, NodeView, Payload, RandomizerParams, Transcript, TranscriptEntry};
use crate::error::{DsgError, Result};
use crate::exec::Execution;
use crate::graph::{DirectedGraph, Graph};
use crate::privacy::{Accountant, Disjointness, LedgerEntry, NoiseKind, NoiseSpec, PrivacyBudget};
use crate::rng::{StreamKey, Substream};
use std::collections::VecDeque;
use std::sync::Arc;

/// Private input held by the simulated parties: node `v` knows exactly
/// `local_adjacency(v)`.
pub trait LocalGraph: Sync {
    fn node_count(&self) -> usize;
    fn local_adjacency(&self, v: usize) -> &[usize];
    /// Bipartite lift `(u_L, v_R)` for every arc `(u, v)`, with `u_L = u` and
    /// `v_R = n + v`. Each copy's adjacency is known to the node it copies.
    fn lift(&self) -> Option<Graph> {
        None
    }
}

impl LocalGraph for Graph {
    fn node_count(&self) -> usize {
        self.n()
    }
    fn local_adjacency(&self, v: usize) -> &[usize] {
        self.neighbors(v)
    }
}

/// Directed nodes answer queries about the arcs they own as tails.
impl LocalGraph for DirectedGraph {
    fn node_count(&self) -> usize {
        self.n()
    }
    fn local_adjacency(&self, v: usize) -> &[usize] {
        self.out_neighbors(v)
    }
    fn lift(&self) -> Option<Graph> {
        let n = self.n();
        let edges: Vec<_> = self.arcs().map(|(u, v)| (u, n + v)).collect();
        Some(Graph::new(2 * n, &edges).expect("lift of a simple digraph is simple"))
    }
}

/// Whether to keep the full transcript or only the privacy ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordMode {
    Full,
    /// Ledger only; the board keeps just the latest message per label.
    LedgerOnly,
}

/// Which nodes a round queries.
#[derive(Debug, Clone, Copy)]
pub enum Parties<'a> {
    All,
    Subset(&'a [usize]),
}

/// A registered local randomizer: the node's answer plus noise from `noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct Randomizer {
    pub id: &'static str,
    pub noise: NoiseSpec,
    /// Per-node sensitivity of the answer to one edge.
    pub sensitivity: f64,
    pub disjointness: Disjointness,
}

impl Randomizer {
    pub fn gaussian(id: &'static str, std: f64, disjointness: Disjointness) -> Self {
        Randomizer {
            id,
            noise: NoiseSpec {
                kind: NoiseKind::Gaussian,
                scale: std,
            },
            sensitivity: 1.0,
            disjointness,
        }
    }

    pub fn geometric(id: &'static str, eps: f64, disjointness: Disjointness) -> Self {
        Randomizer {
            id,
            noise: NoiseSpec {
                kind: NoiseKind::Geometric,
                scale: eps,
            },
            sensitivity: 1.0,
            disjointness,
        }
    }

    fn params(&self, parties: usize) -> (RandomizerParams, Option<f64>) {
        let factor = match (parties, self.disjointness) {
            (0, _) => 0.0,
            (_, Disjointness::Strict) => 1.0,
            (_, Disjointness::TwoCover) => 2.0,
        };
        let per = self.noise.zcdp_cost(self.sensitivity);
        let cost = if factor == 0.0 { 0.0 } else { factor * per };
        let pure =
            self.noise
                .pure_eps(self.sensitivity)
                .map(|e| if factor == 0.0 { 0.0 } else { factor * e });
        let params = RandomizerParams {
            mechanism: self.noise.kind,
            sensitivity: self.sensitivity,
            scale: self.noise.scale,
            disjointness: self.disjointness,
            zcdp_cost: cost,
        };
        (params, pure)
    }
}

#[derive(Clone)]
enum Source<'g> {
    Live(&'g dyn LocalGraph),
    Owned(Arc<Graph>),
    Replay,
}

/// The curator's handle on one protocol run.
pub struct Runtime<'g> {
    source: Source<'g>,
    replay: VecDeque<TranscriptEntry>,
    n: usize,
    key: StreamKey,
    round: usize,
    offset: usize,
    board: BulletinBoard,
    transcript: Transcript,
    ledger: Accountant,
    record: RecordMode,
    zero_noise: bool,
    exec: Execution,
    node_exec: Execution,
    lift: Option<Arc<Graph>>,
}

impl<'g> Runtime<'g> {
    pub fn new(graph: &'g dyn LocalGraph, key: StreamKey) -> Self {
        Self::build(Source::Live(graph), graph.node_count(), key)
    }

    fn build(source: Source<'g>, n: usize, key: StreamKey) -> Self {
        Runtime {
            source,
            replay: VecDeque::new(),
            n,
            key,
            round: 0,
            offset: 0,
            board: BulletinBoard::new(true),
            transcript: Transcript::default(),
            ledger: Accountant::new(),
            record: RecordMode::Full,
            zero_noise: false,
            exec: Execution::Sequential,
            node_exec: Execution::Sequential,
            lift: None,
        }
    }

    /// A curator-only runtime that answers queries from a recorded transcript.
    pub fn replay(transcript: &Transcript, n: usize, key: StreamKey) -> Runtime<'static> {
        let mut rt = Runtime::build(Source::Replay, n, key);
        rt.replay = transcript.entries().iter().cloned().collect();
        rt.zero_noise = true;
        rt
    }

    pub fn with_record(mut self, record: RecordMode) -> Self {
        self.record = record;
        self.board = BulletinBoard::new(record == RecordMode::Full);
        self
    }

    /// Permit scale-0 randomizers. Results are then marked non-private.
    pub fn with_zero_noise(mut self, allow: bool) -> Self {
        self.zero_noise = allow;
        self
    }

    /// Scheduling of independent sub-protocols (repetitions, grid points).
    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// Scheduling of node callbacks within a round.
    pub fn with_node_execution(mut self, exec: Execution) -> Self {
        self.node_exec = exec;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn key(&self) -> StreamKey {
        self.key
    }

    pub fn zero_noise_allowed(&self) -> bool {
        self.zero_noise
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn board(&self) -> &BulletinBoard {
        &self.board
    }

    pub fn ledger(&self) -> &Accountant {
        &self.ledger
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    /// True when replaying and every recorded entry has been consumed.
    pub fn replay_complete(&self) -> bool {
        self.replay.is_empty()
    }

    pub fn budget(&self) -> PrivacyBudget {
        self.ledger.total()
    }

    pub fn finish(self) -> (Transcript, Accountant) {
        (self.transcript, self.ledger)
    }

    /// Curator randomness, keyed by the current round and a label so that it
    /// is reproduced exactly on replay.
    pub fn curator_stream(&self, label: &str) -> Substream {
        self.key
            .derive_str("curator")
            .derive(self.round as u64)
            .derive_str(label)
            .stream()
    }

    /// Append a curator value to the board and the transcript.
    pub fn publish(&mut self, label: &str, payload: Payload) -> Result<()> {
        if let Source::Replay = self.source {
            let round = self.offset + self.round;
            match self.replay.pop_front() {
                Some(TranscriptEntry::Publish {
                    round: r,
                    label: l,
                    payload: p,
                }) if r == round && l == label && p == payload => {}
                other => {
                    return Err(DsgError::ReplayMismatch(format!(
                        "curator published `{label}` at round {round}, transcript has {other:?}"
                    )))
                }
            }
        }
        if self.record == RecordMode::Full {
            self.transcript.push(TranscriptEntry::Publish {
                round: self.round,
                label: label.to_string(),
                payload: payload.clone(),
            });
        }
        self.board.post(label, payload);
        Ok(())
    }

    /// Query every party once through `randomizer` and return the noisy
    /// answers in party order.
    pub fn collect<F>(
        &mut self,
        parties: Parties<'_>,
        randomizer: &Randomizer,
        query: F,
    ) -> Result<Vec<f64>>
    where
        F: Fn(&NodeView<'_>) -> f64 + Sync,
    {
        if randomizer.noise.is_zero() && !self.zero_noise {
            return Err(DsgError::ZeroNoiseNotEnabled);
        }
        let all: Vec<usize>;
        let ids: &[usize] = match parties {
            Parties::All => {
                all = (0..self.n).collect();
                &all
            }
            Parties::Subset(s) => {
                if let Some(&v) = s.iter().find(|&&v| v >= self.n) {
                    return Err(DsgError::VertexOutOfRange {
                        vertex: v,
                        n: self.n,
                    });
                }
                s
            }
        };
        let (params, pure) = randomizer.params(ids.len());
        let recorded_parties = match parties {
            Parties::All => None,
            Parties::Subset(s) => Some(s.to_vec()),
        };
        let outputs = match &self.source {
            Source::Live(g) => self.answer(*g, ids, randomizer, &query),
            Source::Owned(g) => self.answer(g.as_ref(), ids, randomizer, &query),
            Source::Replay => {
                let round = self.offset + self.round;
                match self.replay.pop_front() {
                    Some(TranscriptEntry::Collect {
                        round: r,
                        parties: p,
                        randomizer: id,
                        params: q,
                        outputs,
                    }) if r == round
                        && p == recorded_parties
                        && id == randomizer.id
                        && q == params =>
                    {
                        outputs
                    }
                    other => {
                        return Err(DsgError::ReplayMismatch(format!(
                            "curator queried `{}` at round {round}, transcript has {other:?}",
                            randomizer.id
                        )))
                    }
                }
            }
        };
        self.ledger.charge(LedgerEntry {
            round: self.round,
            label: randomizer.id.to_string(),
            mechanism: params.mechanism,
            sensitivity: params.sensitivity,
            scale: params.scale,
            parties: ids.len(),
            disjointness: params.disjointness,
            zcdp_cost: params.zcdp_cost,
            pure_eps: pure,
        });
        if self.record == RecordMode::Full {
            self.transcript.push(TranscriptEntry::Collect {
                round: self.round,
                parties: recorded_parties,
                randomizer: randomizer.id.to_string(),
                params,
                outputs: outputs.clone(),
            });
        }
        self.round += 1;
        Ok(outputs)
    }

    fn answer<F>(
        &self,
        g: &dyn LocalGraph,
        ids: &[usize],
        randomizer: &Randomizer,
        query: &F,
    ) -> Vec<f64>
    where
        F: Fn(&NodeView<'_>) -> f64 + Sync,
    {
        let round_key = self.key.derive(self.round as u64);
        let board = &self.board;
        let one = |v: usize| {
            let view = NodeView::new(v, g.local_adjacency(v), board);
            let raw = query(&view);
            raw + randomizer
                .noise
                .sample(&mut round_key.derive(v as u64).stream())
        };
        self.node_exec.map(ids.len(), |i| one(ids[i]))
    }

    /// Run `count` independent sub-protocols on the same private input (or
    /// on its lift when `lifted`), then append their transcripts and ledgers
    /// in index order. Sub-protocols are scheduled by [`Runtime::execution`].
    pub fn run_children<T, F>(
        &mut self,
        label: &str,
        count: usize,
        lifted: bool,
        f: F,
    ) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, &mut Runtime<'_>) -> Result<T> + Sync + Send,
    {
        let base = self.key.derive_str(label).derive(self.round as u64);
        let (source, n) = if lifted {
            match &self.source {
                Source::Replay => (Source::Replay, 2 * self.n),
                Source::Owned(_) => {
                    return Err(DsgError::InvalidParameter {
                        name: "lifted",
                        reason: "input has no lift".into(),
                    })
                }
                Source::Live(g) => {
                    if self.lift.is_none() {
                        let l = g.lift().ok_or(DsgError::InvalidParameter {
                            name: "lifted",
                            reason: "input has no lift".into(),
                        })?;
                        self.lift = Some(Arc::new(l));
                    }
                    let l = self.lift.clone().expect("just set");
                    (Source::Owned(l), 2 * self.n)
                }
            }
        } else {
            (self.source.clone(), self.n)
        };
        let lift = if lifted { None } else { self.lift.clone() };
        let (record, zero_noise, exec, node_exec) =
            (self.record, self.zero_noise, self.exec, self.node_exec);
        let template = |i: usize, src: Source<'g>| {
            let mut c = Runtime::build(src, n, base.derive(i as u64)).with_record(record);
            c.zero_noise = zero_noise;
            c.exec = exec;
            c.node_exec = node_exec;
            c.lift = lift.clone();
            c
        };
        if let Source::Replay = self.source {
            let mut outs = Vec::with_capacity(count);
            for i in 0..count {
                let mut c = template(i, Source::Replay);
                c.replay = std::mem::take(&mut self.replay);
                c.offset = self.offset + self.round;
                let out = f(i, &mut c);
                self.replay = std::mem::take(&mut c.replay);
                let out = out?;
                self.absorb(c);
                outs.push(out);
            }
            return Ok(outs);
        }
        let runs = self.exec.try_map(count, |i| {
            let mut c = template(i, source.clone());
            let out = f(i, &mut c)?;
            Ok::<_, DsgError>((out, c))
        })?;
        let mut outs = Vec::with_capacity(count);
        for (out, c) in runs {
            self.absorb(c);
            outs.push(out);
        }
        Ok(outs)
    }

    fn absorb(&mut self, child: Runtime<'_>) {
        self.transcript.append(child.transcript, self.round);
        self.ledger.append(child.ledger, self.round);
        self.round += child.round;
    }
}

/// Output of [`run_protocol`].
#[derive(Debug, Clone)]
pub struct ProtocolRun<T> {
    pub output: T,
    pub transcript: Transcript,
    pub ledger: Accountant,
    pub budget: PrivacyBudget,
}

/// Run `protocol` as the curator over `graph` with a full transcript.
pub fn run_protocol<T>(
    graph: &dyn LocalGraph,
    key: StreamKey,
    protocol: impl FnOnce(&mut Runtime<'_>) -> Result<T>,
) -> Result<ProtocolRun<T>> {
    let mut rt = Runtime::new(graph, key);
    let output = protocol(&mut rt)?;
    let (transcript, ledger) = rt.finish();
    let budget = ledger.total();
    Ok(ProtocolRun {
        output,
        transcript,
        ledger,
        budget,
    })
}
