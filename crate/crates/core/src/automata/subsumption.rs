use std::collections::{BTreeSet, VecDeque};

use super::alphabet::{StateId, Symbol, Word};
use super::dfa::Dfa;

/// All pairs `(s1, s2)` with `L_{s1}(d)` included in `L_{s2}(d)`, computed as
/// a greatest fixpoint: start from the pairs compatible on acceptance and
/// strike out pairs with a non-surviving successor pair until stable.
pub fn subsumption_relation(d: &Dfa) -> BTreeSet<(StateId, StateId)> {
    let matrix = subsumption_matrix(d);
    let mut out = BTreeSet::new();
    for (s1, row) in matrix.iter().enumerate() {
        for (s2, &holds) in row.iter().enumerate() {
            if holds {
                out.insert((s1, s2));
            }
        }
    }
    out
}

/// Matrix form of [`subsumption_relation`]; `matrix[s1][s2]` iff `s1 <= s2`.
/// Worklist refinement over reverse edges, so the cost is proportional to
/// the pairs actually invalidated.
pub(crate) fn subsumption_matrix(d: &Dfa) -> Vec<Vec<bool>> {
    let n = d.state_count();
    let sigma = d.alphabet().len();
    let mut preds: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); n]; sigma];
    for q in 0..n {
        for a in d.alphabet().symbols() {
            preds[a.index()][d.step(q, a)].push(q);
        }
    }

    let mut valid = vec![vec![true; n]; n];
    let mut queue: VecDeque<(StateId, StateId)> = VecDeque::new();
    for s1 in d.accepting_states() {
        for (s2, slot) in valid[s1].iter_mut().enumerate() {
            if !d.is_accepting(s2) {
                *slot = false;
                queue.push_back((s1, s2));
            }
        }
    }
    while let Some((t1, t2)) = queue.pop_front() {
        for per_symbol in &preds {
            for &p1 in &per_symbol[t1] {
                for &p2 in &per_symbol[t2] {
                    if valid[p1][p2] {
                        valid[p1][p2] = false;
                        queue.push_back((p1, p2));
                    }
                }
            }
        }
    }
    valid
}

/// A shortest word of `L_{s1}(d) \ L_{s2}(d)`, `None` iff `s1 <= s2`.
pub fn subsumption_witness(d: &Dfa, s1: StateId, s2: StateId) -> Option<Word> {
    let n = d.state_count();
    let idx = |p: StateId, q: StateId| p * n + q;
    let mut parent: Vec<Option<(usize, Symbol)>> = vec![None; n * n];
    let mut seen = vec![false; n * n];
    let start = idx(s1, s2);
    seen[start] = true;
    let mut queue = VecDeque::new();
    queue.push_back((s1, s2));
    while let Some((p1, p2)) = queue.pop_front() {
        if d.is_accepting(p1) && !d.is_accepting(p2) {
            let mut rev = Vec::new();
            let mut node = idx(p1, p2);
            while node != start {
                let (prev, a) = parent[node].expect("non-start nodes have parents");
                rev.push(a);
                node = prev;
            }
            rev.reverse();
            return Some(Word::from_symbols(rev));
        }
        for a in d.alphabet().symbols() {
            let (t1, t2) = (d.step(p1, a), d.step(p2, a));
            let t = idx(t1, t2);
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some((idx(p1, p2), a));
                queue.push_back((t1, t2));
            }
        }
    }
    None
}
