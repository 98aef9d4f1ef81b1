//! Finite models of uniform spaces.
//!
//! A [`UniformModel`] is a finite point set together with a ladder of
//! symmetric, reflexive relations ordered from coarsest to finest. Entries of
//! the ladder are either metric thresholds (`dist² ≤ scale²`, closed) or
//! explicit pair sets, so derived relations plug into the same machinery as
//! metric ones.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::exactnum::QuadRat;

pub type Coords = [QuadRat; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub id: String,
    pub label: Option<String>,
    pub coords: Option<Coords>,
}

impl Point {
    pub fn new(id: impl Into<String>) -> Self {
        Self { id: id.into(), label: None, coords: None }
    }

    pub fn with_coords(id: impl Into<String>, coords: Coords) -> Self {
        Self { id: id.into(), label: None, coords: Some(coords) }
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Label if present, else id.
    pub fn name(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.id)
    }
}

/// How a ladder entry decides membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScaleKind {
    MetricThreshold(QuadRat),
    /// Off-diagonal pairs `(i, j)`, `i < j`, as point indices. The diagonal is implicit.
    ExplicitRelation(BTreeSet<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleEntry {
    pub tag: String,
    pub kind: ScaleKind,
}

/// Input form of a ladder entry, with explicit pairs given by point name.
#[derive(Clone, Debug)]
pub enum ScaleInput {
    Metric(QuadRat),
    Pairs(Vec<(String, String)>),
}

/// Dense symmetric reflexive relation with cached neighbor lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    adj: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
}

impl Relation {
    pub(crate) fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![false; n * n];
        for i in 0..n {
            adj[i * n + i] = true;
        }
        for (i, j) in pairs {
            adj[i * n + j] = true;
            adj[j * n + i] = true;
        }
        let neighbors = (0..n).map(|i| (0..n).filter(|&j| j != i && adj[i * n + j]).collect()).collect();
        Self { n, adj, neighbors }
    }

    #[inline]
    pub fn holds(&self, x: usize, y: usize) -> bool {
        self.adj[x * self.n + y]
    }

    /// Neighbors of `x` other than `x`, ascending.
    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Off-diagonal pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.neighbors[i].iter().copied().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.n == other.n && self.adj.iter().zip(&other.adj).all(|(a, b)| !*a || *b)
    }

    pub fn is_bounded(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(k, &x)| set[k + 1..].iter().all(|&y| self.holds(x, y)))
    }
}

#[derive(Clone, Debug)]
pub struct UniformModel {
    radicand: u64,
    points: Vec<Point>,
    ladder: Vec<ScaleEntry>,
    relations: Vec<Relation>,
    dist2: Option<Vec<QuadRat>>,
    index: HashMap<String, usize>,
}

impl PartialEq for UniformModel {
    fn eq(&self, other: &Self) -> bool {
        self.radicand == other.radicand && self.points == other.points && self.ladder == other.ladder
    }
}

pub fn dist2(x: &Coords, y: &Coords) -> Result<QuadRat> {
    let mut acc = QuadRat::zero(x[0].radicand())?;
    for k in 0..3 {
        let d = x[k].sub(&y[k])?;
        acc = acc.add(&d.mul(&d)?)?;
    }
    Ok(acc)
}

impl UniformModel {
    /// Builds a model from named inputs; points are reordered by id.
    pub fn new(radicand: u64, mut points: Vec<Point>, scales: Vec<(String, ScaleInput)>) -> Result<Self> {
        points.sort_by(|a, b| a.id.cmp(&b.id));
        let index = build_index(&points)?;
        let mut ladder = Vec::with_capacity(scales.len());
        for (tag, input) in scales {
            let kind = match input {
                ScaleInput::Metric(v) => ScaleKind::MetricThreshold(v),
                ScaleInput::Pairs(pairs) => {
                    let mut set = BTreeSet::new();
                    for (x, y) in pairs {
                        let i = *index.get(&x).ok_or(Error::UnknownPoint(x))?;
                        let j = *index.get(&y).ok_or(Error::UnknownPoint(y))?;
                        if i != j {
                            set.insert((i.min(j), i.max(j)));
                        }
                    }
                    ScaleKind::ExplicitRelation(set)
                }
            };
            ladder.push(ScaleEntry { tag, kind });
        }
        Self::build(radicand, points, ladder)
    }

    /// `from_euclidean`: metric ladder over coordinate points.
    pub fn from_euclidean(radicand: u64, points: Vec<(String, Coords)>, scales: Vec<(String, QuadRat)>) -> Result<Self> {
        let pts = points.into_iter().map(|(id, c)| Point::with_coords(id, c)).collect();
        Self::new(radicand, pts, scales.into_iter().map(|(t, v)| (t, ScaleInput::Metric(v))).collect())
    }

    /// Builds from points already sorted by id and index-based ladder entries.
    pub fn build(radicand: u64, points: Vec<Point>, ladder: Vec<ScaleEntry>) -> Result<Self> {
        if !crate::exactnum::is_square_free(radicand) {
            return Err(Error::InvalidModel(format!("radicand {radicand} is not square-free")));
        }
        if points.windows(2).any(|w| w[0].id >= w[1].id) {
            let mut ids: Vec<_> = points.iter().map(|p| p.id.clone()).collect();
            ids.sort();
            if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidModel(format!("duplicate identifier `{}`", w[0])));
            }
            return Err(Error::InvalidModel("points must be sorted by id".into()));
        }
        let index = build_index(&points)?;
        let mut tags = BTreeSet::new();
        for e in &ladder {
            if !tags.insert(e.tag.clone()) {
                return Err(Error::InvalidModel(format!("duplicate scale tag `{}`", e.tag)));
            }
        }
        for p in &points {
            if let Some(c) = &p.coords {
                if c.iter().any(|v| v.radicand() != radicand) {
                    return Err(Error::InvalidModel(format!("point `{}` uses a different radicand", p.id)));
                }
            }
        }
        let n = points.len();
        let needs_metric = ladder.iter().any(|e| matches!(e.kind, ScaleKind::MetricThreshold(_)));
        let all_coords = points.iter().all(|p| p.coords.is_some());
        let dist2 = if needs_metric || (all_coords && n > 0) {
            let coords: Vec<&Coords> = points
                .iter()
                .map(|p| p.coords.as_ref().ok_or_else(|| Error::InvalidModel(format!("point `{}` has no coordinates", p.id))))
                .collect::<Result<_>>()?;
            let mut table = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    table.push(dist2(coords[i], coords[j])?);
                }
            }
            Some(table)
        } else {
            None
        };
        let mut relations = Vec::with_capacity(ladder.len());
        for e in &ladder {
            let rel = match &e.kind {
                ScaleKind::MetricThreshold(s2) => {
                    if s2.radicand() != radicand {
                        return Err(Error::InvalidModel(format!("scale `{}` uses a different radicand", e.tag)));
                    }
                    let table = dist2.as_ref().expect("metric table");
                    let mut pairs = Vec::new();
                    for i in 0..n {
                        for j in i + 1..n {
                            if table[i * n + j].cmp_exact(s2)? != Ordering::Greater {
                                pairs.push((i, j));
                            }
                        }
                    }
                    Relation::from_pairs(n, pairs)
                }
                ScaleKind::ExplicitRelation(pairs) => {
                    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= j || j >= n) {
                        return Err(Error::InvalidModel(format!("bad explicit pair ({i}, {j}) in `{}`", e.tag)));
                    }
                    Relation::from_pairs(n, pairs.iter().copied())
                }
            };
            relations.push(rel);
        }
        for k in 1..ladder.len() {
            if let (ScaleKind::MetricThreshold(prev), ScaleKind::MetricThreshold(cur)) = (&ladder[k - 1].kind, &ladder[k].kind) {
                if cur.cmp_exact(prev)? != Ordering::Less {
                    return Err(Error::InvalidModel(format!(
                        "non-descending scales: `{}` is not below `{}`",
                        ladder[k].tag,
                        ladder[k - 1].tag
                    )));
                }
            }
            if !relations[k].is_subset_of(&relations[k - 1]) {
                return Err(Error::InvalidModel(format!(
                    "non-descending scales: `{}` is not contained in `{}`",
                    ladder[k].tag,
                    ladder[k - 1].tag
                )));
            }
        }
        Ok(Self { radicand, points, ladder, relations, dist2, index })
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ladder(&self) -> &[ScaleEntry] {
        &self.ladder
    }

    pub fn relation(&self, scale: usize) -> &Relation {
        &self.relations[scale]
    }

    pub fn scale_tag(&self, scale: usize) -> &str {
        &self.ladder[scale].tag
    }

    pub fn scale_index(&self, tag: &str) -> Result<usize> {
        self.ladder.iter().position(|e| e.tag == tag).ok_or_else(|| Error::UnknownScale(tag.to_string()))
    }

    /// Index of the finest (last) ladder entry.
    pub fn bottom(&self) -> usize {
        self.ladder.len().saturating_sub(1)
    }

    /// Resolves a point by id, falling back to label.
    pub fn point_index(&self, name: &str) -> Result<usize> {
        if let Some(&i) = self.index.get(name) {
            return Ok(i);
        }
        self.points
            .iter()
            .position(|p| p.label.as_deref() == Some(name))
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn name(&self, x: usize) -> &str {
        self.points[x].name()
    }

    pub fn dist2(&self, x: usize, y: usize) -> Option<&QuadRat> {
        self.dist2.as_ref().map(|t| &t[x * self.len() + y])
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownPoint(format!("#{x}")))
        }
    }

    pub fn entourage_holds(&self, scale: usize, x: usize, y: usize) -> Result<bool> {
        if scale >= self.ladder.len() {
            return Err(Error::UnknownScale(format!("#{scale}")));
        }
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.relations[scale].holds(x, y))
    }

    /// `B(x, E)`: the points related to `x`, ascending.
    pub fn ball(&self, scale: usize, x: usize) -> Result<Vec<usize>> {
        self.entourage_holds(scale, x, x)?;
        let rel = &self.relations[scale];
        Ok((0..self.len()).filter(|&y| rel.holds(x, y)).collect())
    }

    /// Connected components of the relation graph, each sorted, ordered by least element.
    pub fn chain_components(&self, scale: usize) -> Result<Vec<Vec<usize>>> {
        if scale >= self.ladder.len() {
            return Err(Error::UnknownScale(format!("#{scale}")));
        }
        Ok(components(&self.relations[scale]))
    }

    pub fn is_chain_connected(&self, scale: usize) -> Result<bool> {
        Ok(self.chain_components(scale)?.len() <= 1)
    }

    /// Submodel on `subset` with every ladder entry restricted to it.
    pub fn restrict(&self, subset: &[usize]) -> Result<UniformModel> {
        let mut subset: Vec<usize> = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        for &x in &subset {
            self.check_point(x)?;
        }
        let points = subset.iter().map(|&x| self.points[x].clone()).collect();
        let ladder = self
            .ladder
            .iter()
            .enumerate()
            .map(|(s, e)| {
                let kind = match &e.kind {
                    ScaleKind::MetricThreshold(v) => ScaleKind::MetricThreshold(v.clone()),
                    ScaleKind::ExplicitRelation(_) => {
                        let rel = &self.relations[s];
                        let mut set = BTreeSet::new();
                        for (i, &x) in subset.iter().enumerate() {
                            for (j, &y) in subset.iter().enumerate().skip(i + 1) {
                                if rel.holds(x, y) {
                                    set.insert((i, j));
                                }
                            }
                        }
                        ScaleKind::ExplicitRelation(set)
                    }
                };
                ScaleEntry { tag: e.tag.clone(), kind }
            })
            .collect();
        UniformModel::build(self.radicand, points, ladder)
    }

    /// Copy of this model with a different ladder (points unchanged).
    pub fn with_ladder(&self, ladder: Vec<ScaleEntry>) -> Result<UniformModel> {
        UniformModel::build(self.radicand, self.points.clone(), ladder)
    }

    /// The relation at `scale` frozen as an explicit entry.
    pub fn explicit_entry(&self, scale: usize, tag: impl Into<String>) -> ScaleEntry {
        ScaleEntry { tag: tag.into(), kind: ScaleKind::ExplicitRelation(self.relations[scale].pairs().collect()) }
    }
}

fn build_index(points: &[Point]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if index.insert(p.id.clone(), i).is_some() {
            return Err(Error::InvalidModel(format!("duplicate identifier `{}`", p.id)));
        }
    }
    Ok(index)
}

pub(crate) fn components(rel: &Relation) -> Vec<Vec<usize>> {
    let n = rel.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in rel.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// One straight segment between two named endpoints.
#[derive(Clone, Debug)]
pub struct Segment {
    pub from: (String, Coords),
    pub to: (String, Coords),
}

fn rational_sqrt(v: &QuadRat) -> Option<num_rational::BigRational> {
    use num_traits::{Signed, Zero};
    if !v.root_part().is_zero() || v.rat_part().is_negative() {
        return None;
    }
    let r = v.rat_part();
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| num_rational::BigRational::new(n, d))
}

/// Samples a union of segments: endpoints plus evenly spaced interior points,
/// `n` pieces per unit length, with the ambient (chordal) metric.
///
/// Segment lengths must be rational multiples `ℓ` with `n·ℓ` integral.
/// Interior samples are named `{from}{to}{k}`.
pub fn sample_metric_graph(
    radicand: u64,
    segments: &[Segment],
    n: u32,
    scales: Vec<(String, QuadRat)>,
) -> Result<UniformModel> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    let n = n.max(1);
    let mut pts: Vec<(String, Coords)> = Vec::new();
    let push = |name: String, c: Coords, pts: &mut Vec<(String, Coords)>| -> Result<()> {
        if pts.iter().any(|(_, pc)| *pc == c) {
            return Ok(());
        }
        if pts.iter().any(|(pn, _)| *pn == name) {
            return Err(Error::InvalidModel(format!("point `{name}` given two different positions")));
        }
        pts.push((name, c));
        Ok(())
    };
    for seg in segments {
        let (pa, ca) = &seg.from;
        let (pb, cb) = &seg.to;
        let len2 = dist2(ca, cb)?;
        if len2.is_zero() {
            return Err(Error::Usage(format!("zero-length segment {pa}–{pb}")));
        }
        let len = rational_sqrt(&len2)
            .ok_or_else(|| Error::Usage(format!("segment {pa}–{pb} does not have rational length")))?;
        let pieces = len * BigRational::from_integer(BigInt::from(n));
        if !pieces.is_integer() {
            return Err(Error::Usage(format!("segment {pa}–{pb} is not a whole number of sample steps")));
        }
        let pieces = pieces.to_integer().to_u64().ok_or_else(|| Error::Usage("too many samples".into()))?;
        push(pa.clone(), ca.clone(), &mut pts)?;
        push(pb.clone(), cb.clone(), &mut pts)?;
        for k in 1..pieces {
            let t = QuadRat::rational(BigRational::new(BigInt::from(k), BigInt::from(pieces)), radicand)?;
            let mut c: Vec<QuadRat> = Vec::with_capacity(3);
            for i in 0..3 {
                c.push(ca[i].add(&cb[i].sub(&ca[i])?.mul(&t)?)?);
            }
            let c: Coords = [c[0].clone(), c[1].clone(), c[2].clone()];
            push(format!("{pa}{pb}{k}"), c, &mut pts)?;
        }
    }
    if pts.iter().any(|(_, c)| c.iter().any(|v| v.radicand() != radicand)) {
        return Err(Error::InvalidModel("coordinates must share the model radicand".into()));
    }
    UniformModel::from_euclidean(radicand, pts, scales)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> QuadRat {
        QuadRat::parse(s, 3).unwrap()
    }

    fn c(x: &str, y: &str, z: &str) -> Coords {
        [r(x), r(y), r(z)]
    }

    #[test]
    fn closed_threshold_and_single_point() {
        let m = UniformModel::from_euclidean(
            3,
            vec![("p".into(), c("0", "0", "0")), ("q".into(), c("1", "0", "0"))],
            vec![("1".into(), r("1"))],
        )
        .unwrap();
        assert!(m.entourage_holds(0, 0, 1).unwrap());
        let one = UniformModel::from_euclidean(3, vec![("p".into(), c("0", "0", "0"))], vec![("1".into(), r("1"))]).unwrap();
        assert_eq!(one.ball(0, 0).unwrap(), vec![0]);
        assert_eq!(one.chain_components(0).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn rejects_bad_ladders_and_ids() {
        let pts = vec![("p".to_string(), c("0", "0", "0")), ("q".to_string(), c("1", "0", "0"))];
        let err = UniformModel::from_euclidean(3, pts.clone(), vec![("a".into(), r("1/4")), ("b".into(), r("1"))]);
        assert!(matches!(err, Err(Error::InvalidModel(m)) if m.contains("non-descending")));
        let dup = vec![pts[0].clone(), pts[0].clone()];
        let err = UniformModel::from_euclidean(3, dup, vec![("a".into(), r("1"))]);
        assert!(matches!(err, Err(Error::InvalidModel(m)) if m.contains("duplicate")));
        let m = UniformModel::from_euclidean(3, pts, vec![("a".into(), r("1"))]).unwrap();
        assert!(matches!(m.scale_index("zz"), Err(Error::UnknownScale(_))));
        assert!(matches!(m.point_index("zz"), Err(Error::UnknownPoint(_))));
    }

    #[test]
    fn explicit_relations_need_containment() {
        let pts = vec![Point::new("x"), Point::new("y"), Point::new("z")];
        let ok = UniformModel::new(
            3,
            pts.clone(),
            vec![
                ("top".into(), ScaleInput::Pairs(vec![("x".into(), "y".into()), ("y".into(), "z".into())])),
                ("low".into(), ScaleInput::Pairs(vec![("y".into(), "x".into())])),
            ],
        )
        .unwrap();
        assert!(ok.relation(1).holds(0, 1) && ok.relation(1).holds(2, 2));
        let bad = UniformModel::new(
            3,
            pts,
            vec![
                ("top".into(), ScaleInput::Pairs(vec![("x".into(), "y".into())])),
                ("low".into(), ScaleInput::Pairs(vec![("y".into(), "z".into())])),
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn unit_segment_sampling() {
        let seg = Segment { from: ("p".into(), c("0", "0", "0")), to: ("q".into(), c("1", "0", "0")) };
        let m = sample_metric_graph(3, std::slice::from_ref(&seg), 2, vec![("1".into(), r("1"))]).unwrap();
        assert_eq!(m.len(), 3);
        let mid = m.point_index("pq1").unwrap();
        assert_eq!(m.points()[mid].coords.as_ref().unwrap()[0], r("1/2"));
        let zero = Segment { from: seg.from.clone(), to: seg.from.clone() };
        assert!(sample_metric_graph(3, &[zero], 2, vec![]).is_err());
    }
}
