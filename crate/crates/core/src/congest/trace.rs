use std::fmt::Write as _;

use serde::Serialize;

use crate::graph::NodeId;

use super::wire::Message;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MessageRecord {
    /// Round in which the message crosses the edge (1-based).
    pub round: u64,
    pub sender: NodeId,
    pub receiver: NodeId,
    pub bits: u32,
}

/// Measured cost of a simulation: rounds, traffic, and an optional per-message log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTrace {
    pub rounds_elapsed: u64,
    pub messages_sent: u64,
    pub bits_sent: u64,
    pub max_bits_on_edge_per_round: u32,
    pub budget_bits: u32,
    /// FNV-1a digest over every (round, sender, receiver, payload) in send order.
    pub digest: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log: Option<Vec<MessageRecord>>,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv(mut h: u64, word: u64) -> u64 {
    for byte in word.to_le_bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

impl RoundTrace {
    pub fn new(budget_bits: u32, log: bool) -> Self {
        Self {
            rounds_elapsed: 0,
            messages_sent: 0,
            bits_sent: 0,
            max_bits_on_edge_per_round: 0,
            budget_bits,
            digest: FNV_OFFSET,
            log: log.then(Vec::new),
        }
    }

    pub(crate) fn record(&mut self, round: u64, sender: NodeId, receiver: NodeId, msg: &Message) {
        let bits = msg.bit_len();
        self.messages_sent += 1;
        self.bits_sent += bits as u64;
        self.max_bits_on_edge_per_round = self.max_bits_on_edge_per_round.max(bits);
        let mut h = fnv(self.digest, round);
        h = fnv(h, sender as u64);
        h = fnv(h, receiver as u64);
        h = fnv(h, bits as u64);
        for &w in msg.words() {
            h = fnv(h, w);
        }
        self.digest = h;
        if let Some(log) = &mut self.log {
            log.push(MessageRecord { round, sender, receiver, bits });
        }
    }

    /// Appends `next` as a phase that starts after this one ends.
    pub fn then(&mut self, next: &RoundTrace) {
        let offset = self.rounds_elapsed;
        self.rounds_elapsed += next.rounds_elapsed;
        self.messages_sent += next.messages_sent;
        self.bits_sent += next.bits_sent;
        self.max_bits_on_edge_per_round = self.max_bits_on_edge_per_round.max(next.max_bits_on_edge_per_round);
        self.budget_bits = self.budget_bits.max(next.budget_bits);
        self.digest = fnv(self.digest, next.digest);
        match (&mut self.log, &next.log) {
            (Some(log), Some(more)) => {
                log.extend(more.iter().map(|r| MessageRecord { round: r.round + offset, ..*r }));
            }
            (log @ Some(_), None) => *log = None,
            _ => {}
        }
    }

    /// Empty trace to accumulate phases into.
    pub fn empty(budget_bits: u32, log: bool) -> Self {
        Self::new(budget_bits, log)
    }

    pub fn within_budget(&self) -> bool {
        self.max_bits_on_edge_per_round <= self.budget_bits
    }

    /// One line per message: `round sender receiver bits`.
    pub fn dump(&self) -> Option<String> {
        let log = self.log.as_ref()?;
        let mut out = String::new();
        for r in log {
            writeln!(out, "{} {} {} {}", r.round, r.sender, r.receiver, r.bits).expect("String write");
        }
        Some(out)
    }
}
