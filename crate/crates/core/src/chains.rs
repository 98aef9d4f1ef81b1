//! Chains, elementary homotopy moves and the homotopy decision procedure.
//!
//! Two chains with common endpoints are homotopic when one can be turned into
//! the other by the four moves of [`Move`]; every move replaces a piece of the
//! chain across a simplex of dimension at most two of the Rips complex.

use std::borrow::Cow;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::homology::{path_vector, verify_obstruction, BoundarySolver, CycleClass, Obstruction};
use crate::rips::Rips2;
use crate::search;
use crate::space::{Relation, UniformModel};

/// A nonempty point sequence whose consecutive points are related at `scale`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    points: Vec<usize>,
    scale: usize,
}

impl Chain {
    pub fn new(model: &UniformModel, scale: usize, points: Vec<usize>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Usage("a chain needs at least one point".into()));
        }
        if scale >= model.ladder().len() {
            return Err(Error::UnknownScale(format!("#{scale}")));
        }
        for &x in &points {
            if x >= model.len() {
                return Err(Error::UnknownPoint(format!("#{x}")));
            }
        }
        let rel = model.relation(scale);
        if let Some(w) = points.windows(2).find(|w| !rel.holds(w[0], w[1])) {
            return Err(Error::NotAChain {
                scale: model.scale_tag(scale).to_string(),
                from: model.name(w[0]).to_string(),
                to: model.name(w[1]).to_string(),
            });
        }
        Ok(Self { points, scale })
    }

    /// Resolves point names (ids or labels).
    pub fn parse(model: &UniformModel, scale: usize, names: &[&str]) -> Result<Self> {
        let pts = names.iter().map(|n| model.point_index(n)).collect::<Result<Vec<_>>>()?;
        Self::new(model, scale, pts)
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn first(&self) -> usize {
        self.points[0]
    }

    pub fn last(&self) -> usize {
        *self.points.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn names(&self, model: &UniformModel) -> Vec<String> {
        self.points.iter().map(|&p| model.name(p).to_string()).collect()
    }

    pub fn display(&self, model: &UniformModel) -> String {
        self.names(model).join(",")
    }
}

pub fn is_chain(model: &UniformModel, scale: usize, seq: &[usize]) -> bool {
    Chain::new(model, scale, seq.to_vec()).is_ok()
}

/// `e(x, y)`: the two-point chain, or `[x]` when `x = y`.
pub fn edge_path(model: &UniformModel, scale: usize, x: usize, y: usize) -> Result<Chain> {
    if x == y {
        return Chain::new(model, scale, vec![x]);
    }
    Chain::new(model, scale, vec![x, y])
}

pub fn concat(c: &Chain, d: &Chain) -> Result<Chain> {
    if c.scale != d.scale {
        return Err(Error::Usage("cannot concatenate chains at different scales".into()));
    }
    if c.last() != d.first() {
        return Err(Error::Usage("concatenation needs last(c) = first(d)".into()));
    }
    let mut points = c.points.clone();
    points.extend_from_slice(&d.points[1..]);
    Ok(Chain { points, scale: c.scale })
}

pub fn reverse(c: &Chain) -> Chain {
    let mut points = c.points.clone();
    points.reverse();
    Chain { points, scale: c.scale }
}

/// The same point sequence read at a coarser ladder entry.
pub fn coarsen(model: &UniformModel, c: &Chain, target: usize) -> Result<Chain> {
    if target >= model.ladder().len() {
        return Err(Error::UnknownScale(format!("#{target}")));
    }
    if target > c.scale {
        return Err(Error::Usage(format!(
            "scale `{}` is not above `{}` in the ladder",
            model.scale_tag(target),
            model.scale_tag(c.scale)
        )));
    }
    Chain::new(model, target, c.points.clone())
}

/// Elementary homotopy moves. Positions index the chain before the move.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// Repeat the point at `pos`.
    InsertDuplicate { pos: usize },
    /// Drop one of two equal points at `pos`, `pos + 1`.
    DeleteDuplicate { pos: usize },
    /// Insert `point` between `pos` and `pos + 1`; the triple must be bounded.
    Expand { pos: usize, point: usize },
    /// Remove the interior point at `pos`; it and its neighbors must be bounded.
    Contract { pos: usize },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::InsertDuplicate { pos } => write!(f, "insert-duplicate@{pos}"),
            Move::DeleteDuplicate { pos } => write!(f, "delete-duplicate@{pos}"),
            Move::Expand { pos, point } => write!(f, "expand@{pos}(#{point})"),
            Move::Contract { pos } => write!(f, "contract@{pos}"),
        }
    }
}

pub(crate) fn apply_raw(rel: &Relation, pts: &mut Vec<usize>, mv: &Move) -> Result<()> {
    let illegal = |reason: String| Error::IllegalMove { mv: mv.to_string(), reason };
    match *mv {
        Move::InsertDuplicate { pos } => {
            if pos >= pts.len() {
                return Err(illegal("position out of range".into()));
            }
            pts.insert(pos, pts[pos]);
        }
        Move::DeleteDuplicate { pos } => {
            if pos + 1 >= pts.len() || pts[pos] != pts[pos + 1] {
                return Err(illegal("no duplicate at this position".into()));
            }
            pts.remove(pos);
        }
        Move::Expand { pos, point } => {
            if pos + 1 >= pts.len() {
                return Err(illegal("position out of range".into()));
            }
            if point >= rel.len() {
                return Err(illegal(format!("unknown point #{point}")));
            }
            let triple = [pts[pos], point, pts[pos + 1]];
            if !rel.is_bounded(&triple) {
                return Err(illegal(format!("triple {triple:?} is not bounded")));
            }
            pts.insert(pos + 1, point);
        }
        Move::Contract { pos } => {
            if pos == 0 || pos + 1 >= pts.len() {
                return Err(illegal("only interior points can be contracted".into()));
            }
            let triple = [pts[pos - 1], pts[pos], pts[pos + 1]];
            if !rel.is_bounded(&triple) {
                return Err(illegal(format!("triple {triple:?} is not bounded")));
            }
            pts.remove(pos);
        }
    }
    Ok(())
}

pub fn apply_move(model: &UniformModel, c: &Chain, mv: &Move) -> Result<Chain> {
    let mut pts = c.points.clone();
    apply_raw(model.relation(c.scale), &mut pts, mv)?;
    Ok(Chain { points: pts, scale: c.scale })
}

/// Folds `moves` over `c`.
pub fn replay(model: &UniformModel, c: &Chain, moves: &[Move]) -> Result<Chain> {
    let rel = model.relation(c.scale);
    let mut pts = c.points.clone();
    for mv in moves {
        apply_raw(rel, &mut pts, mv)?;
    }
    Ok(Chain { points: pts, scale: c.scale })
}

/// Move sequence carrying one chain into another.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Witness {
    pub moves: Vec<Move>,
}

impl Witness {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Replays from `c` and checks the result is `d`.
    pub fn verify(&self, model: &UniformModel, c: &Chain, d: &Chain) -> Result<()> {
        let out = replay(model, c, &self.moves)?;
        if out.points != d.points {
            return Err(Error::Verification(format!(
                "witness ends at {} instead of {}",
                out.display(model),
                d.display(model)
            )));
        }
        Ok(())
    }

    /// Every chain visited by the witness, starting with `c`.
    pub fn trace(&self, model: &UniformModel, c: &Chain) -> Result<Vec<Chain>> {
        let rel = model.relation(c.scale);
        let mut pts = c.points.clone();
        let mut out = vec![c.clone()];
        for mv in &self.moves {
            apply_raw(rel, &mut pts, mv)?;
            out.push(Chain { points: pts.clone(), scale: c.scale });
        }
        Ok(out)
    }
}

/// The loop `c · d⁻¹` does not bound in the Rips complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyCertificate {
    pub loop_points: Vec<usize>,
    pub cycle: Vec<BigInt>,
    pub obstruction: Obstruction,
}

impl HomologyCertificate {
    pub fn verify(&self, model: &UniformModel, scale: usize) -> Result<()> {
        let k = Rips2::from_relation(model.relation(scale));
        self.verify_in(&k)
    }

    pub fn verify_in(&self, k: &Rips2) -> Result<()> {
        let z = path_vector(k, &self.loop_points)?;
        if z != self.cycle {
            return Err(Error::Verification("cycle does not match the loop".into()));
        }
        if self.loop_points.first() != self.loop_points.last() {
            return Err(Error::Verification("certificate path is not a loop".into()));
        }
        verify_obstruction(k, &z, &self.obstruction)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Canonical chains visited by breadth-first search.
    pub bfs_states: usize,
    /// Chains visited by the guided loop-contraction search.
    pub guided_states: usize,
    /// Length cap for breadth-first intermediates.
    pub max_len: usize,
    /// Breadth-first search exhausted its length-bounded component.
    pub bfs_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent(Witness),
    Inequivalent(HomologyCertificate),
    Unknown(SearchStats),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }

    pub fn is_inequivalent(&self) -> bool {
        matches!(self, Verdict::Inequivalent(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equivalent(_) => "Equivalent",
            Verdict::Inequivalent(_) => "Inequivalent",
            Verdict::Unknown(_) => "Unknown",
        }
    }
}

/// Limits on the witness search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Intermediate chains may exceed the longer input by this many points.
    pub length_slack: usize,
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { length_slack: 6, max_states: 2_000_000 }
    }
}

/// A model read at one scale, with its boundary solver built on first use.
pub struct HomotopyContext<'m> {
    model: Cow<'m, UniformModel>,
    scale: usize,
    solver: OnceLock<BoundarySolver>,
}

impl<'m> HomotopyContext<'m> {
    pub fn new(model: &'m UniformModel, scale: usize) -> Result<Self> {
        if scale >= model.ladder().len() {
            return Err(Error::UnknownScale(format!("#{scale}")));
        }
        if model.len() > u16::MAX as usize {
            return Err(Error::Usage("models above 65535 points are not supported".into()));
        }
        Ok(Self { model: Cow::Borrowed(model), scale, solver: OnceLock::new() })
    }

    /// A context that owns its model.
    pub fn owned(model: UniformModel, scale: usize) -> Result<HomotopyContext<'static>> {
        HomotopyContext::new(&model, scale)?;
        Ok(HomotopyContext { model: Cow::Owned(model), scale, solver: OnceLock::new() })
    }

    pub fn model(&self) -> &UniformModel {
        &self.model
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn relation(&self) -> &Relation {
        self.model.relation(self.scale)
    }

    pub fn solver(&self) -> &BoundarySolver {
        self.solver.get_or_init(|| BoundarySolver::new(Rips2::from_relation(self.relation())))
    }

    /// Homology class of a closed point sequence.
    pub fn loop_class(&self, points: &[usize]) -> Result<CycleClass> {
        let z = path_vector(self.solver().complex(), points)?;
        self.solver().cycle_class(&z)
    }

    /// Distance-like scores from `base` used to steer witness search: ambient
    /// distances when the model has coordinates, hop counts otherwise.
    fn weights(&self, base: usize) -> Vec<f64> {
        if self.model.dist2(base, base).is_some() {
            (0..self.model.len()).map(|p| self.model.dist2(base, p).map_or(f64::INFINITY, |v| v.approx().max(0.0).sqrt())).collect()
        } else {
            search::hop_depths(self.relation(), base)
        }
    }

    fn check(&self, c: &Chain) -> Result<()> {
        if c.scale != self.scale {
            return Err(Error::Usage(format!(
                "chain lives at `{}`, expected `{}`",
                self.model.scale_tag(c.scale),
                self.model.scale_tag(self.scale)
            )));
        }
        Chain::new(&self.model, self.scale, c.points.clone()).map(|_| ())
    }

    /// `decide_homotopic`: homology obstruction first, then witness search.
    pub fn decide(&self, c: &Chain, d: &Chain, budget: &Budget) -> Result<Verdict> {
        self.check(c)?;
        self.check(d)?;
        if c.first() != d.first() || c.last() != d.last() {
            return Err(Error::Usage("chains must share both endpoints".into()));
        }
        if c.points == d.points {
            return Ok(Verdict::Equivalent(Witness::default()));
        }
        let mut loop_points = c.points.clone();
        loop_points.extend(d.points.iter().rev().skip(1));
        if let CycleClass::Nontrivial(obstruction) = self.loop_class(&loop_points)? {
            let cycle = path_vector(self.solver().complex(), &loop_points)?;
            return Ok(Verdict::Inequivalent(HomologyCertificate { loop_points, cycle, obstruction }));
        }
        let weight = self.weights(c.first());
        match search::find_witness(self.relation(), &c.points, &d.points, &weight, budget) {
            Ok(moves) => {
                let w = Witness { moves };
                w.verify(&self.model, c, d)?;
                Ok(Verdict::Equivalent(w))
            }
            Err(stats) => Ok(Verdict::Unknown(stats)),
        }
    }
}

pub fn decide_homotopic(model: &UniformModel, scale: usize, c: &Chain, d: &Chain, budget: &Budget) -> Result<Verdict> {
    HomotopyContext::new(model, scale)?.decide(c, d, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Point, ScaleInput};

    /// Square x-y-z-w with the diagonal x-z and one triangle x-y-z filled.
    fn kite() -> UniformModel {
        let pts = ["w", "x", "y", "z"].iter().map(|p| Point::new(*p)).collect();
        let pairs = [("x", "y"), ("y", "z"), ("z", "w"), ("w", "x"), ("x", "z")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        UniformModel::new(3, pts, vec![("s".into(), ScaleInput::Pairs(pairs))]).unwrap()
    }

    #[test]
    fn chain_basics() {
        let m = kite();
        let c = Chain::parse(&m, 0, &["x", "y"]).unwrap();
        let d = Chain::parse(&m, 0, &["y", "z"]).unwrap();
        let cd = concat(&c, &d).unwrap();
        assert_eq!(cd.names(&m), ["x", "y", "z"]);
        assert_eq!(reverse(&cd).names(&m), ["z", "y", "x"]);
        assert_eq!(reverse(&reverse(&cd)), cd);
        assert!(matches!(Chain::parse(&m, 0, &["y", "w"]), Err(Error::NotAChain { .. })));
        assert!(concat(&c, &c).is_err());
        assert!(edge_path(&m, 0, 2, 0).is_err());
    }

    #[test]
    fn moves_and_inverses() {
        let m = kite();
        let c = Chain::parse(&m, 0, &["x", "z"]).unwrap();
        let y = m.point_index("y").unwrap();
        let w = m.point_index("w").unwrap();
        let e = apply_move(&m, &c, &Move::Expand { pos: 0, point: y }).unwrap();
        assert_eq!(e.names(&m), ["x", "y", "z"]);
        assert_eq!(apply_move(&m, &e, &Move::Contract { pos: 1 }).unwrap(), c);
        // x, w, z is not a simplex (w-x-z unfilled? x~z, w~x, w~z: bounded) -> legal
        assert!(apply_move(&m, &c, &Move::Expand { pos: 0, point: w }).is_ok());
        let dup = apply_move(&m, &c, &Move::InsertDuplicate { pos: 0 }).unwrap();
        assert_eq!(dup.names(&m), ["x", "x", "z"]);
        assert_eq!(apply_move(&m, &dup, &Move::DeleteDuplicate { pos: 0 }).unwrap(), c);
        assert!(matches!(apply_move(&m, &c, &Move::Contract { pos: 0 }), Err(Error::IllegalMove { .. })));
    }

    #[test]
    fn trivial_and_self() {
        let m = kite();
        let c = Chain::parse(&m, 0, &["x", "y", "z"]).unwrap();
        let v = decide_homotopic(&m, 0, &c, &c, &Budget::default()).unwrap();
        assert_eq!(v, Verdict::Equivalent(Witness::default()));
        let d = Chain::parse(&m, 0, &["x", "z"]).unwrap();
        match decide_homotopic(&m, 0, &c, &d, &Budget::default()).unwrap() {
            Verdict::Equivalent(w) => w.verify(&m, &c, &d).unwrap(),
            v => panic!("{v:?}"),
        }
        let bad = Chain::parse(&m, 0, &["x", "y"]).unwrap();
        assert!(decide_homotopic(&m, 0, &c, &bad, &Budget::default()).is_err());
    }
}
