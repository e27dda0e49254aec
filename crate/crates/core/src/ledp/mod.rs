//! Simulated edge-LEDP execution.
//!
//! A [`Runtime`] plays the untrusted curator's side of a protocol. It owns
//! the private graph and only lets node code see it through a [`NodeView`]:
//! the node's own adjacency list plus the public [`BulletinBoard`]. Every
//! node output passes through a registered [`Randomizer`], is charged to the
//! [`Accountant`](crate::privacy::Accountant) and recorded in the
//! [`Transcript`]. Curator-side values are published to the board as
//! zero-cost post-processing entries, which makes a run replayable from its
//! transcript alone.

mod board;
mod runtime;
mod transcript;

pub use board::{BulletinBoard, NodeView, Payload};
pub use runtime::{
    run_protocol, LocalGraph, Parties, ProtocolRun, Randomizer, RecordMode, Runtime,
};
pub use transcript::{RandomizerParams, Transcript, TranscriptEntry};
