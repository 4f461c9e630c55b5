//! Ordered record of secure-operation invocations. Trace equality across
//! inputs is the tested obliviousness property; per-kind element counts are
//! the tested complexity property.

use std::fmt;

/// Secure operation kinds: addition, ciphertext-ciphertext multiplication,
/// plaintext-ciphertext multiplication, greater-than.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Add,
    MulCc,
    MulPc,
    Gt,
}

impl OpKind {
    pub fn name(&self) -> &'static str {
        match self {
            OpKind::Add => "ADD",
            OpKind::MulCc => "MUL_cc",
            OpKind::MulPc => "MUL_pc",
            OpKind::Gt => "GT",
        }
    }
}

/// Which independent sub-sequence of the evaluation a record belongs to.
/// Mask computation and coefficient selection are independent of the power
/// table; the annotation keeps them distinguishable in complexity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Select,
    Powers,
    Combine,
}

/// One vectorized secure operation: kind and vector length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRecord {
    pub kind: OpKind,
    pub len: usize,
    pub stage: Stage,
}

/// Append-only ordered trace of one evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpTrace {
    records: Vec<TraceRecord>,
}

impl OpTrace {
    pub fn push(&mut self, kind: OpKind, len: usize, stage: Stage) {
        self.records.push(TraceRecord { kind, len, stage });
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    /// Total element count of all vectorized ops of one kind.
    pub fn count(&self, kind: OpKind) -> usize {
        self.records
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| r.len)
            .sum()
    }

    /// Element count restricted to one stage.
    pub fn count_in(&self, kind: OpKind, stage: Stage) -> usize {
        self.records
            .iter()
            .filter(|r| r.kind == kind && r.stage == stage)
            .map(|r| r.len)
            .sum()
    }

    /// One record per line: `KIND length`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(r.kind.name());
            out.push(' ');
            out.push_str(&r.len.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for OpTrace {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.dump())
    }
}
