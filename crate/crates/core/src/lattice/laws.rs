use serde::Serialize;

use super::ConceptLattice;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawViolation {
    pub law: &'static str,
    pub concepts: Vec<usize>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LawReport {
    pub concepts: usize,
    pub checks: usize,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, law: &'static str, concepts: &[usize]) {
        self.checks += 1;
        if !ok {
            self.violations.push(LawViolation { law, concepts: concepts.to_vec() });
        }
    }
}

/// Order reachable through the stored cover edges: `reach[a][b]` iff a
/// chain of upward covers leads from `a` to `b` (or `a = b`).
fn cover_reachability(lat: &ConceptLattice) -> Vec<Vec<bool>> {
    let n = lat.len();
    let mut reach = vec![vec![false; n]; n];
    for (start, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            if !std::mem::replace(&mut row[c], true) {
                stack.extend_from_slice(lat.upper_covers(c));
            }
        }
    }
    reach
}

/// Checks, on every ordered pair, that the order generated by the Hasse
/// covers agrees with extent inclusion and with reversed intent inclusion.
pub fn check_duality(lat: &ConceptLattice) -> LawReport {
    let reach = cover_reachability(lat);
    let mut report = LawReport { concepts: lat.len(), ..Default::default() };
    for (a, row) in reach.iter().enumerate() {
        for (b, &reached) in row.iter().enumerate() {
            let (ca, cb) = (lat.concept(a), lat.concept(b));
            let by_extent = ca.extent.is_subset(&cb.extent);
            let by_intent = cb.intent.is_subset(&ca.intent);
            report.record(reached == by_extent && by_extent == by_intent, "duality", &[a, b]);
        }
    }
    report
}

/// Exhaustively checks commutativity, associativity, idempotence and
/// absorption of join and meet, plus agreement of join/meet with the order.
pub fn check_laws(lat: &ConceptLattice) -> Result<LawReport> {
    let n = lat.len();
    let mut report = LawReport { concepts: n, ..Default::default() };
    for a in 0..n {
        report.record(lat.join(a, a)? == a, "join idempotence", &[a]);
        report.record(lat.meet(a, a)? == a, "meet idempotence", &[a]);
        for b in 0..n {
            let j = lat.join(a, b)?;
            let m = lat.meet(a, b)?;
            report.record(j == lat.join(b, a)?, "join commutativity", &[a, b]);
            report.record(m == lat.meet(b, a)?, "meet commutativity", &[a, b]);
            report.record(lat.join(a, m)? == a, "absorption a ∨ (a ∧ b) = a", &[a, b]);
            report.record(lat.meet(a, j)? == a, "absorption a ∧ (a ∨ b) = a", &[a, b]);
            report.record(lat.leq(a, j) && lat.leq(b, j), "join is an upper bound", &[a, b]);
            report.record(lat.leq(m, a) && lat.leq(m, b), "meet is a lower bound", &[a, b]);
            report.record(lat.leq(a, b) == (j == b), "a ≤ b iff a ∨ b = b", &[a, b]);
            for c in 0..n {
                let left = lat.join(lat.join(a, b)?, c)?;
                let right = lat.join(a, lat.join(b, c)?)?;
                report.record(left == right, "join associativity", &[a, b, c]);
                let left = lat.meet(lat.meet(a, b)?, c)?;
                let right = lat.meet(a, lat.meet(b, c)?)?;
                report.record(left == right, "meet associativity", &[a, b, c]);
            }
        }
    }
    Ok(report)
}
