//! JSON reports for the command line.
//!
//! Every report has the same top-level fields in the same order, so output
//! is byte-stable for a given input.

use serde::Serialize;

use crate::grid::{Coordinate, EdgeKey};
use crate::screens::{ScreenReport, Witness};
use crate::state::ConnectionMap;
use crate::tau::{Rule, TauOutcome, TauStep};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnRecord {
    pub x1: u32,
    pub y1: u32,
    pub x2: u32,
    pub y2: u32,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub step: usize,
    pub rule: String,
    pub node: Coordinate,
    pub word: String,
    pub added: Vec<ConnRecord>,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationRecord {
    pub condition: String,
    /// `None` for the grid-level parity check.
    pub node: Option<Coordinate>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub engine: Option<String>,
    pub reason: Option<String>,
    pub connections: Vec<ConnRecord>,
    pub trace: Vec<TraceRecord>,
    pub violations: Vec<ViolationRecord>,
}

pub fn conn_records<'a>(
    conns: impl IntoIterator<Item = (&'a EdgeKey, &'a u32)>,
) -> Vec<ConnRecord> {
    conns
        .into_iter()
        .map(|(e, &m)| ConnRecord {
            x1: e.a.x,
            y1: e.a.y,
            x2: e.b.x,
            y2: e.b.y,
            m,
        })
        .collect()
}

fn trace_record(i: usize, step: &TauStep) -> TraceRecord {
    TraceRecord {
        step: i + 1,
        rule: match step.rule {
            Rule::FullSaturation => "R1",
            Rule::SingleNeighbor => "R2",
            Rule::OneIncompleteNeighbor => "R3",
            Rule::OmegaStar => "R4",
        }
        .to_string(),
        node: step.node,
        word: step.word.to_string(),
        added: conn_records(step.added.iter().map(|(e, m)| (e, m))),
        digest: step.digest.clone(),
    }
}

pub fn violation_records(report: &ScreenReport) -> Vec<ViolationRecord> {
    report
        .violations
        .iter()
        .map(|v| ViolationRecord {
            condition: v.condition.label(),
            node: match v.witness {
                Witness::Grid => None,
                Witness::Node(c) => Some(c),
            },
            message: v.message.clone(),
        })
        .collect()
}

impl Report {
    pub fn new(command: &str, status: impl ToString) -> Self {
        Report {
            command: command.into(),
            status: status.to_string(),
            engine: None,
            reason: None,
            connections: Vec::new(),
            trace: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub fn from_tau(command: &str, out: &TauOutcome) -> Self {
        Report {
            engine: Some("tau".into()),
            reason: out.reason.clone(),
            connections: conn_records(&out.final_state.connections()),
            trace: out
                .trace
                .iter()
                .enumerate()
                .map(|(i, s)| trace_record(i, s))
                .collect(),
            violations: violation_records(&out.screen),
            ..Report::new(command, out.status)
        }
    }

    pub fn with_connections(mut self, conns: &ConnectionMap) -> Self {
        self.connections = conn_records(conns);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
