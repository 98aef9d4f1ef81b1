//! Witness search over canonical chains (no two consecutive points equal).
//!
//! Moves are grouped into steps that keep chains canonical: `Expand` inserts
//! a new point, `Spur` replaces `x` by `x, p, x`, and `Contract` removes an
//! interior point, merging its neighbors when they coincide. Each step has an
//! inverse step, so paths found from either end can be stitched together.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use crate::chains::{Budget, Move, SearchStats};
use crate::space::Relation;

type Key = Box<[u16]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Step {
    Contract(usize),
    Expand(usize, u16),
    Spur(usize, u16),
}

pub(crate) fn apply_step(s: &[u16], step: Step) -> Vec<u16> {
    let mut out = Vec::with_capacity(s.len() + 2);
    match step {
        Step::Contract(pos) => {
            out.extend_from_slice(&s[..pos]);
            let skip = if s[pos - 1] == s[pos + 1] { pos + 2 } else { pos + 1 };
            out.extend_from_slice(&s[skip..]);
        }
        Step::Expand(pos, p) => {
            out.extend_from_slice(&s[..=pos]);
            out.push(p);
            out.extend_from_slice(&s[pos + 1..]);
        }
        Step::Spur(pos, p) => {
            out.extend_from_slice(&s[..=pos]);
            out.push(p);
            out.extend_from_slice(&s[pos..]);
        }
    }
    out
}

fn raw_moves(before: &[u16], step: Step, out: &mut Vec<Move>) {
    match step {
        Step::Contract(pos) => {
            out.push(Move::Contract { pos });
            if before[pos - 1] == before[pos + 1] {
                out.push(Move::DeleteDuplicate { pos: pos - 1 });
            }
        }
        Step::Expand(pos, p) => out.push(Move::Expand { pos, point: p as usize }),
        Step::Spur(pos, p) => {
            out.push(Move::InsertDuplicate { pos });
            out.push(Move::Expand { pos, point: p as usize });
        }
    }
}

/// The step undoing `step`, read on the chain `step` produced from `before`.
fn inverse(before: &[u16], step: Step) -> Step {
    match step {
        Step::Expand(pos, _) | Step::Spur(pos, _) => Step::Contract(pos + 1),
        Step::Contract(pos) if before[pos - 1] == before[pos + 1] => Step::Spur(pos - 1, before[pos]),
        Step::Contract(pos) => Step::Expand(pos - 1, before[pos]),
    }
}

/// A sequence of steps together with the chain each one starts from.
type Path = Vec<(Vec<u16>, Step)>;

fn invert_path(path: &Path) -> Path {
    path.iter()
        .rev()
        .map(|(before, step)| (apply_step(before, *step), inverse(before, *step)))
        .collect()
}

fn path_moves(path: &Path, out: &mut Vec<Move>) {
    for (before, step) in path {
        raw_moves(before, *step, out);
    }
}

fn steps(rel: &Relation, s: &[u16], max_len: usize, out: &mut Vec<Step>) {
    out.clear();
    let m = s.len();
    for pos in 1..m.saturating_sub(1) {
        if rel.holds(s[pos - 1] as usize, s[pos + 1] as usize) {
            out.push(Step::Contract(pos));
        }
    }
    if m < max_len {
        for pos in 0..m - 1 {
            let (a, b) = (s[pos] as usize, s[pos + 1] as usize);
            for &p in rel.neighbors(a) {
                if p != a && p != b && rel.holds(p, b) {
                    out.push(Step::Expand(pos, p as u16));
                }
            }
        }
    }
    if m + 2 <= max_len {
        for pos in 0..m {
            let a = s[pos] as usize;
            for &p in rel.neighbors(a) {
                if p != a {
                    out.push(Step::Spur(pos, p as u16));
                }
            }
        }
    }
}

/// Drops repeated consecutive points, recording the deletions.
fn canonicalize(points: &[usize]) -> (Vec<u16>, Vec<Move>) {
    let mut out: Vec<u16> = Vec::with_capacity(points.len());
    let mut moves = Vec::new();
    for &p in points {
        if out.last() == Some(&(p as u16)) {
            moves.push(Move::DeleteDuplicate { pos: out.len() - 1 });
        } else {
            out.push(p as u16);
        }
    }
    (out, moves)
}

/// Repeatedly contracts the first interior point whose neighbors are related.
fn greedy_reduce(rel: &Relation, s: Vec<u16>) -> (Vec<u16>, Path) {
    let mut cur = s;
    let mut path = Vec::new();
    while let Some(pos) = (1..cur.len().saturating_sub(1)).find(|&i| rel.holds(cur[i - 1] as usize, cur[i + 1] as usize)) {
        let next = apply_step(&cur, Step::Contract(pos));
        path.push((cur, Step::Contract(pos)));
        cur = next;
    }
    (cur, path)
}

struct Arena {
    keys: Vec<Key>,
    parent: Vec<Option<(u32, Step)>>,
    index: HashMap<Key, u32>,
}

impl Arena {
    fn new(root: &[u16]) -> Self {
        let key: Key = root.into();
        let mut index = HashMap::new();
        index.insert(key.clone(), 0);
        Self { keys: vec![key], parent: vec![None], index }
    }

    fn insert(&mut self, key: Key, parent: u32, step: Step) -> Option<u32> {
        if self.index.contains_key(&key) {
            return None;
        }
        let id = self.keys.len() as u32;
        self.index.insert(key.clone(), id);
        self.keys.push(key);
        self.parent.push(Some((parent, step)));
        Some(id)
    }

    /// Steps from the root to `id`.
    fn path_to(&self, mut id: u32) -> Path {
        let mut path = Vec::new();
        while let Some((p, step)) = self.parent[id as usize] {
            path.push((self.keys[p as usize].to_vec(), step));
            id = p;
        }
        path.reverse();
        path
    }
}

/// Bidirectional breadth-first search. `Err(true)` means the length-bounded
/// component was exhausted without meeting.
fn bfs(rel: &Relation, from: &[u16], to: &[u16], max_len: usize, max_states: usize, stats: &mut SearchStats) -> Result<Path, bool> {
    let mut sides = [Arena::new(from), Arena::new(to)];
    let mut frontiers = [vec![0u32], vec![0u32]];
    let mut buf = Vec::new();
    loop {
        if frontiers[0].is_empty() || frontiers[1].is_empty() {
            return Err(true);
        }
        let side = if frontiers[0].len() <= frontiers[1].len() { 0 } else { 1 };
        let mut next = Vec::new();
        for &id in &frontiers[side] {
            let cur = sides[side].keys[id as usize].clone();
            steps(rel, &cur, max_len, &mut buf);
            for &step in &buf {
                let child: Key = apply_step(&cur, step).into();
                let Some(cid) = sides[side].insert(child.clone(), id, step) else { continue };
                stats.bfs_states += 1;
                if let Some(&oid) = sides[1 - side].index.get(&child) {
                    let (fid, bid) = if side == 0 { (cid, oid) } else { (oid, cid) };
                    let mut path = sides[0].path_to(fid);
                    path.extend(invert_path(&sides[1].path_to(bid)));
                    return Ok(path);
                }
                if stats.bfs_states >= max_states {
                    return Err(false);
                }
                next.push(cid);
            }
        }
        frontiers[side] = next;
    }
}

pub(crate) fn hop_depths(rel: &Relation, root: usize) -> Vec<f64> {
    let mut depth = vec![f64::INFINITY; rel.len()];
    let mut queue = VecDeque::from([root]);
    depth[root] = 0.0;
    while let Some(x) = queue.pop_front() {
        for &y in rel.neighbors(x) {
            if depth[y].is_infinite() {
                depth[y] = depth[x] + 1.0;
                queue.push_back(y);
            }
        }
    }
    depth
}

/// Best-first contraction of a loop to its base point. `weight` scores how
/// far each point lies from the base; loops with small total weight are
/// expanded first. Spurs are not used here.
fn contract_loop(
    rel: &Relation,
    lp: &[u16],
    weight: &[f64],
    max_len: usize,
    max_states: usize,
    stats: &mut SearchStats,
) -> Option<Path> {
    let base = lp[0];
    let potential = |s: &[u16]| -> u64 {
        let w: f64 = s.iter().map(|&p| weight[p as usize].min(1e6)).sum();
        ((w + s.len() as f64) * 4096.0) as u64
    };
    let goal: Key = vec![base].into();
    let mut arena = Arena::new(lp);
    if arena.keys[0] == goal {
        return Some(Vec::new());
    }
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((potential(lp), 0u32)));
    let mut buf = Vec::new();
    while let Some(Reverse((_, id))) = heap.pop() {
        let cur = arena.keys[id as usize].clone();
        steps(rel, &cur, max_len.min(cur.len() + 1), &mut buf);
        for &step in &buf {
            let child = apply_step(&cur, step);
            let prio = potential(&child);
            let child: Key = child.into();
            let Some(cid) = arena.insert(child.clone(), id, step) else { continue };
            stats.guided_states += 1;
            if child == goal {
                return Some(arena.path_to(cid));
            }
            if stats.guided_states >= max_states {
                return None;
            }
            heap.push(Reverse((prio, cid)));
        }
    }
    None
}

/// Moves carrying `c` to `d`, or the search statistics when none was found.
/// `weight` guides the loop search (see [`contract_loop`]).
pub(crate) fn find_witness(
    rel: &Relation,
    c: &[usize],
    d: &[usize],
    weight: &[f64],
    budget: &Budget,
) -> Result<Vec<Move>, SearchStats> {
    let mut stats = SearchStats { max_len: c.len().max(d.len()) + budget.length_slack, ..Default::default() };
    let (c0, c_canon) = canonicalize(c);
    let (d0, d_canon) = canonicalize(d);
    let (c1, c_path) = greedy_reduce(rel, c0);
    let (d1, d_path) = greedy_reduce(rel, d0);

    // c -> c1 (prefix) and d1 -> d (suffix) are shared by both strategies.
    let mut prefix = c_canon;
    path_moves(&c_path, &mut prefix);
    let mut suffix = Vec::new();
    path_moves(&invert_path(&d_path), &mut suffix);
    suffix.extend(d_canon.iter().rev().map(|mv| match *mv {
        Move::DeleteDuplicate { pos } => Move::InsertDuplicate { pos },
        _ => unreachable!("canonicalization only deletes duplicates"),
    }));
    let finish = |middle: Vec<Move>| {
        let mut moves = prefix.clone();
        moves.extend(middle);
        moves.extend(suffix.iter().cloned());
        moves
    };

    if c1 == d1 {
        return Ok(finish(Vec::new()));
    }

    let bfs_share = (budget.max_states / 4).clamp(1, 50_000);
    match bfs(rel, &c1, &d1, stats.max_len, bfs_share, &mut stats) {
        Ok(path) => {
            let mut middle = Vec::new();
            path_moves(&path, &mut middle);
            return Ok(finish(middle));
        }
        Err(exhausted) => stats.bfs_exhausted = exhausted,
    }

    // Contract the loop c1 · d1⁻¹, then walk back out along d1.
    let mut lp = c1.clone();
    lp.extend(d1.iter().rev().skip(1));
    let loop_cap = lp.len() + budget.length_slack;
    let remaining = budget.max_states.saturating_sub(stats.bfs_states);
    let loop_path = contract_loop(rel, &lp, weight, loop_cap, remaining, &mut stats).ok_or(stats.clone())?;
    let mut middle = Vec::new();
    let last = c1.len() - 1;
    let k = d1.len() - 1;
    for j in 0..k {
        middle.push(Move::InsertDuplicate { pos: last + j });
        middle.push(Move::Expand { pos: last + j, point: d1[k - 1 - j] as usize });
    }
    path_moves(&loop_path, &mut middle);
    Ok(finish(middle))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_inverses_roundtrip() {
        let s = vec![1u16, 2, 1, 3];
        for step in [Step::Contract(1), Step::Contract(2), Step::Expand(0, 7), Step::Spur(3, 9)] {
            let after = apply_step(&s, step);
            assert_eq!(apply_step(&after, inverse(&s, step)), s, "{step:?}");
        }
    }

    #[test]
    fn canonical_form() {
        let (c, moves) = canonicalize(&[4, 4, 4, 2, 2, 4]);
        assert_eq!(c, vec![4, 2, 4]);
        assert_eq!(moves.len(), 3);
    }
}
