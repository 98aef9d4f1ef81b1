//! Finite approximations of chain-class spaces and the relations derived from
//! them: `F̂` on classes, `E*` on approximants, `D = F̂ ∩ A×A` and its
//! endpoint projection `E_A`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;

use crate::chains::{concat, edge_path, reverse, Budget, Chain, HomologyCertificate, HomotopyContext, Verdict, Witness};
use crate::error::{Error, Result};
use crate::homology::CycleClass;
use crate::space::{Point, Relation, ScaleEntry, ScaleKind, UniformModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    pub rep: Vec<usize>,
    pub parent: Option<usize>,
}

/// A candidate chain whose comparison with an existing class stayed Unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unresolved {
    pub chain: Vec<usize>,
    pub class: usize,
}

/// Homotopy classes of chains from a base point, up to a length bound.
///
/// Class `k` is represented by the chain `rep(k)`; representatives are
/// shortest, then lexicographically least. `successor(k, y)` is the class of
/// `rep(k)·y`.
#[derive(Clone, Debug)]
pub struct ClassTable {
    base: usize,
    scale: usize,
    max_len: usize,
    classes: Vec<ClassEntry>,
    succ: HashMap<(usize, usize), usize>,
    unresolved: Vec<Unresolved>,
    complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassOptions {
    /// Longest chain (in points) enumerated; defaults to `2·diameter + 4`.
    pub max_len: Option<usize>,
    pub max_classes: usize,
    pub budget: Budget,
}

impl Default for ClassOptions {
    fn default() -> Self {
        Self { max_len: None, max_classes: 10_000, budget: Budget::default() }
    }
}

/// Largest hop distance between two points chain-connected to `base`.
pub fn hop_diameter(rel: &Relation, base: usize) -> usize {
    let bfs = |root: usize| {
        let mut dist = vec![usize::MAX; rel.len()];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in rel.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    };
    let from_base = bfs(base);
    (0..rel.len())
        .filter(|&x| from_base[x] != usize::MAX)
        .map(|x| bfs(x).into_iter().filter(|&d| d != usize::MAX).max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

pub fn default_max_len(rel: &Relation, base: usize) -> usize {
    2 * hop_diameter(rel, base) + 4
}

/// First class among `candidates` equivalent to `chain`, plus the classes
/// whose comparison was inconclusive.
fn first_equivalent(
    ctx: &HomotopyContext,
    table: &[ClassEntry],
    chain: &[usize],
    candidates: &[usize],
    budget: &Budget,
) -> Result<(Option<usize>, Vec<usize>)> {
    let c = Chain::new(ctx.model(), ctx.scale(), chain.to_vec())?;
    let mut unknown = Vec::new();
    for &j in candidates {
        let d = Chain::new(ctx.model(), ctx.scale(), table[j].rep.clone())?;
        match ctx.decide(&c, &d, budget)? {
            Verdict::Equivalent(_) => return Ok((Some(j), unknown)),
            Verdict::Inequivalent(_) => {}
            Verdict::Unknown(_) => unknown.push(j),
        }
    }
    Ok((None, unknown))
}

/// `enumerate_classes`: breadth-first over classes, one length level at a time.
pub fn enumerate_classes(ctx: &HomotopyContext, base: usize, opts: &ClassOptions) -> Result<ClassTable> {
    let model = ctx.model();
    if base >= model.len() {
        return Err(Error::UnknownPoint(format!("#{base}")));
    }
    let rel = ctx.relation();
    let max_len = opts.max_len.unwrap_or_else(|| default_max_len(rel, base));
    if max_len == 0 {
        return Err(Error::Usage("length bound must be at least 1".into()));
    }
    let mut classes = vec![ClassEntry { rep: vec![base], parent: None }];
    let mut by_end: BTreeMap<usize, Vec<usize>> = BTreeMap::from([(base, vec![0])]);
    let mut succ = HashMap::new();
    let mut unresolved = Vec::new();
    let mut complete = true;
    let mut level = vec![0usize];
    while !level.is_empty() {
        let mut cands = Vec::new();
        for &k in &level {
            let rep = &classes[k].rep;
            let end = *rep.last().expect("nonempty");
            succ.insert((k, end), k);
            if rep.len() >= max_len {
                continue;
            }
            for &y in rel.neighbors(end) {
                if rep.len() >= 2 && rep[rep.len() - 2] == y {
                    succ.insert((k, y), classes[k].parent.expect("has parent"));
                } else {
                    cands.push((k, y));
                }
            }
        }
        // Compare against classes that existed before this level in parallel.
        let known = classes.clone();
        let known_by_end = by_end.clone();
        let results: Vec<Result<(Option<usize>, Vec<usize>)>> = cands
            .par_iter()
            .map(|&(k, y)| {
                let mut chain = known[k].rep.clone();
                chain.push(y);
                let pool = known_by_end.get(&y).cloned().unwrap_or_default();
                first_equivalent(ctx, &known, &chain, &pool, &opts.budget)
            })
            .collect();
        let mut next = Vec::new();
        let mut fresh_by_end: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&(k, y), res) in cands.iter().zip(results) {
            let (mut found, mut unknown) = res?;
            let mut chain = classes[k].rep.clone();
            chain.push(y);
            if found.is_none() {
                let pool = fresh_by_end.get(&y).cloned().unwrap_or_default();
                let (f, u) = first_equivalent(ctx, &classes, &chain, &pool, &opts.budget)?;
                found = f;
                unknown.extend(u);
            }
            for j in unknown {
                complete = false;
                unresolved.push(Unresolved { chain: chain.clone(), class: j });
            }
            match found {
                Some(j) => {
                    succ.insert((k, y), j);
                }
                None if classes.len() < opts.max_classes => {
                    let id = classes.len();
                    classes.push(ClassEntry { rep: chain, parent: Some(k) });
                    by_end.entry(y).or_default().push(id);
                    fresh_by_end.entry(y).or_default().push(id);
                    succ.insert((k, y), id);
                    next.push(id);
                }
                None => complete = false,
            }
        }
        level = next;
    }
    Ok(ClassTable { base, scale: ctx.scale(), max_len, classes, succ, unresolved, complete })
}

impl ClassTable {
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn entries(&self) -> &[ClassEntry] {
        &self.classes
    }

    pub fn rep(&self, k: usize) -> &[usize] {
        &self.classes[k].rep
    }

    pub fn endpoint(&self, k: usize) -> usize {
        *self.classes[k].rep.last().expect("nonempty")
    }

    pub fn classes_at(&self, y: usize) -> Vec<usize> {
        (0..self.classes.len()).filter(|&k| self.endpoint(k) == y).collect()
    }

    pub fn successor(&self, k: usize, y: usize) -> Option<usize> {
        self.succ.get(&(k, y)).copied()
    }

    /// Whether every comparison was decided and no class budget was hit.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn unresolved(&self) -> &[Unresolved] {
        &self.unresolved
    }

    pub fn rep_names(&self, model: &UniformModel, k: usize) -> String {
        self.rep(k).iter().map(|&p| model.name(p)).collect::<Vec<_>>().join(".")
    }

    /// Class of a chain from the base point: follows successors while they
    /// are tabulated, then compares against the classes at the next endpoint.
    /// `None` when the chain leaves the table.
    pub fn class_of(&self, ctx: &HomotopyContext, points: &[usize], budget: &Budget) -> Result<Option<usize>> {
        if points.first() != Some(&self.base) {
            return Err(Error::Usage("chain does not start at the base point".into()));
        }
        Chain::new(ctx.model(), self.scale, points.to_vec())?;
        let mut k = 0usize;
        for &y in &points[1..] {
            if let Some(j) = self.successor(k, y) {
                k = j;
                continue;
            }
            let mut chain = self.rep(k).to_vec();
            chain.push(y);
            match first_equivalent(ctx, &self.classes, &chain, &self.classes_at(y), budget)?.0 {
                Some(j) => k = j,
                None => return Ok(None),
            }
        }
        Ok(Some(k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproximantKind {
    /// Shortest fine path from the base, lexicographically least.
    Arc,
    /// A tree arc followed by one extra fine step closing a fine cycle; the
    /// field is the index of the arc to the same endpoint.
    Cycle { arc: usize },
    /// Supplied by the caller.
    Given,
}

/// A fine chain from the base point, standing in for a generalized path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximant {
    pub points: Vec<usize>,
    pub kind: ApproximantKind,
}

impl Approximant {
    pub fn endpoint(&self) -> usize {
        *self.points.last().expect("nonempty")
    }
}

#[derive(Clone, Debug)]
pub struct ApproximantSet {
    pub base: usize,
    pub scale: usize,
    pub items: Vec<Approximant>,
}

/// One arc per reachable point along a breadth-first tree of the fine
/// relation, plus one arc per non-tree fine edge.
pub fn spanning_approximants(model: &UniformModel, fine: usize, base: usize) -> Result<ApproximantSet> {
    if fine >= model.ladder().len() {
        return Err(Error::UnknownScale(format!("#{fine}")));
    }
    if base >= model.len() {
        return Err(Error::UnknownPoint(format!("#{base}")));
    }
    let rel = model.relation(fine);
    let mut parent = vec![None; model.len()];
    let mut seen = vec![false; model.len()];
    let mut order = vec![base];
    seen[base] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        for &y in rel.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    let arc = |mut x: usize| {
        let mut pts = vec![x];
        while let Some(p) = parent[x] {
            pts.push(p);
            x = p;
        }
        pts.reverse();
        pts
    };
    order.sort_unstable();
    let mut items: Vec<Approximant> = order.iter().map(|&x| Approximant { points: arc(x), kind: ApproximantKind::Arc }).collect();
    let arc_index: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    for &u in &order {
        for &v in rel.neighbors(u) {
            if parent[u] == Some(v) || parent[v] == Some(u) || !seen[v] {
                continue;
            }
            // Each non-tree edge once, closed from its smaller end.
            if u < v {
                let mut pts = arc(u);
                pts.push(v);
                items.push(Approximant { points: pts, kind: ApproximantKind::Cycle { arc: arc_index[&v] } });
            }
        }
    }
    Ok(ApproximantSet { base, scale: fine, items })
}

impl ApproximantSet {
    /// Approximants given explicitly as fine chains from `base`.
    pub fn from_chains(model: &UniformModel, fine: usize, base: usize, chains: Vec<Vec<usize>>) -> Result<Self> {
        let mut items = Vec::with_capacity(chains.len());
        for pts in chains {
            if pts.first() != Some(&base) {
                return Err(Error::Usage("approximants must start at the base point".into()));
            }
            Chain::new(model, fine, pts.clone())?;
            items.push(Approximant { points: pts, kind: ApproximantKind::Given });
        }
        Ok(Self { base, scale: fine, items })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The tree arc ending at `x`, if any.
    pub fn arc_to(&self, x: usize) -> Option<&Approximant> {
        self.items.iter().find(|a| a.kind == ApproximantKind::Arc && a.endpoint() == x)
    }
}

/// Coarse-scale comparison of a fine cycle generator with its closing arc.
#[derive(Clone, Debug)]
pub struct GeneratorCheck {
    pub approximant: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct Realized {
    /// `A`: classes hit by some approximant.
    pub classes: BTreeSet<usize>,
    pub of_approximant: Vec<Option<usize>>,
    pub per_point: BTreeMap<usize, BTreeSet<usize>>,
    pub generators: Vec<GeneratorCheck>,
    /// False when an approximant left the table, a fine cycle generator was
    /// not shown coarsely trivial, or the table itself is incomplete.
    pub complete: bool,
}

/// `realized_classes`: coarse classes of the approximants.
pub fn realized_classes(ctx: &HomotopyContext, table: &ClassTable, approx: &ApproximantSet, budget: &Budget) -> Result<Realized> {
    if approx.base != table.base() {
        return Err(Error::Usage("approximants and class table use different base points".into()));
    }
    let of_approximant: Vec<Option<usize>> = approx
        .items
        .par_iter()
        .map(|a| table.class_of(ctx, &a.points, budget))
        .collect::<Result<_>>()?;
    let mut classes = BTreeSet::new();
    let mut per_point: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (a, k) in approx.items.iter().zip(&of_approximant) {
        if let Some(k) = k {
            classes.insert(*k);
            per_point.entry(a.endpoint()).or_default().insert(*k);
        }
    }
    let generators: Vec<GeneratorCheck> = approx
        .items
        .par_iter()
        .enumerate()
        .filter_map(|(i, a)| match a.kind {
            ApproximantKind::Cycle { arc } => Some((i, a, arc)),
            _ => None,
        })
        .map(|(i, a, arc)| {
            let c = Chain::new(ctx.model(), ctx.scale(), a.points.clone())?;
            let d = Chain::new(ctx.model(), ctx.scale(), approx.items[arc].points.clone())?;
            Ok(GeneratorCheck { approximant: i, verdict: ctx.decide(&c, &d, budget)? })
        })
        .collect::<Result<_>>()?;
    let complete = table.is_complete()
        && of_approximant.iter().all(Option::is_some)
        && generators.iter().all(|g| g.verdict.is_equivalent());
    Ok(Realized { classes, of_approximant, per_point, generators, complete })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    FHat,
    Star,
    D,
    EA,
}

/// A symmetric reflexive relation on an index set (classes, approximants or
/// points); `pairs` lists off-diagonal pairs `(i, j)` with `i < j`.
#[derive(Clone, Debug)]
pub struct DerivedRelation {
    pub kind: RelationKind,
    pub coarse: usize,
    pub close: usize,
    pub size: usize,
    pub pairs: BTreeSet<(usize, usize)>,
    /// Move witnesses for pairs decided by search, keyed like `pairs`.
    pub witnesses: BTreeMap<(usize, usize), Witness>,
    /// Candidate pairs left Unknown and therefore excluded.
    pub unknown: Vec<(usize, usize)>,
}

impl DerivedRelation {
    pub fn holds(&self, i: usize, j: usize) -> bool {
        i == j || self.pairs.contains(&(i.min(j), i.max(j)))
    }
}

/// The two chains compared for a pair of base-point chains: `c⁻¹·d` and the
/// edge path between their endpoints. Stored witnesses run from the first to
/// the second, with `c` the lower index.
pub fn difference_chains(model: &UniformModel, scale: usize, c: &[usize], d: &[usize]) -> Result<(Chain, Chain)> {
    let c = Chain::new(model, scale, c.to_vec())?;
    let d = Chain::new(model, scale, d.to_vec())?;
    let e = edge_path(model, scale, c.last(), d.last())?;
    Ok((concat(&reverse(&c), &d)?, e))
}

/// Tests `c⁻¹·d ≃ e(end c, end d)` for every candidate pair of base-point
/// chains whose endpoints are `close`-related.
fn difference_relation(
    ctx: &HomotopyContext,
    kind: RelationKind,
    chains: &[&[usize]],
    close: usize,
    budget: &Budget,
) -> Result<DerivedRelation> {
    let model = ctx.model();
    if close >= model.ladder().len() || close < ctx.scale() {
        return Err(Error::Usage("closeness scale must lie at or below the coarse scale".into()));
    }
    let near = model.relation(close);
    let mut cand = Vec::new();
    for i in 0..chains.len() {
        for j in i + 1..chains.len() {
            if near.holds(*chains[i].last().expect("nonempty"), *chains[j].last().expect("nonempty")) {
                cand.push((i, j));
            }
        }
    }
    let verdicts: Vec<Verdict> = cand
        .par_iter()
        .map(|&(i, j)| {
            let (c, e) = difference_chains(model, ctx.scale(), chains[i], chains[j])?;
            ctx.decide(&c, &e, budget)
        })
        .collect::<Result<_>>()?;
    let mut out = DerivedRelation {
        kind,
        coarse: ctx.scale(),
        close,
        size: chains.len(),
        pairs: BTreeSet::new(),
        witnesses: BTreeMap::new(),
        unknown: Vec::new(),
    };
    for (pair, v) in cand.into_iter().zip(verdicts) {
        match v {
            Verdict::Equivalent(w) => {
                out.pairs.insert(pair);
                out.witnesses.insert(pair, w);
            }
            Verdict::Inequivalent(_) => {}
            Verdict::Unknown(_) => out.unknown.push(pair),
        }
    }
    Ok(out)
}

/// `F̂` on the classes of `table`.
pub fn fhat(ctx: &HomotopyContext, table: &ClassTable, close: usize, budget: &Budget) -> Result<DerivedRelation> {
    let chains: Vec<&[usize]> = (0..table.len()).map(|k| table.rep(k)).collect();
    difference_relation(ctx, RelationKind::FHat, &chains, close, budget)
}

/// `E*` on approximants, decided from their coarsened chains directly.
pub fn star(ctx: &HomotopyContext, approx: &ApproximantSet, close: usize, budget: &Budget) -> Result<DerivedRelation> {
    let chains: Vec<&[usize]> = approx.items.iter().map(|a| a.points.as_slice()).collect();
    difference_relation(ctx, RelationKind::Star, &chains, close, budget)
}

/// `D = F̂ ∩ A×A`, still indexed by class.
pub fn restrict_to_realized(fhat: &DerivedRelation, realized: &Realized) -> DerivedRelation {
    let keep = |&(i, j): &(usize, usize)| realized.classes.contains(&i) && realized.classes.contains(&j);
    DerivedRelation {
        kind: RelationKind::D,
        pairs: fhat.pairs.iter().copied().filter(keep).collect(),
        witnesses: fhat.witnesses.iter().filter(|(p, _)| keep(p)).map(|(p, w)| (*p, w.clone())).collect(),
        unknown: fhat.unknown.iter().copied().filter(keep).collect(),
        ..fhat.clone()
    }
}

/// `E_A`: endpoint pairs of `D`, as a relation on model points.
pub fn endpoint_projection(d: &DerivedRelation, table: &ClassTable, points: usize) -> DerivedRelation {
    let pairs = d
        .pairs
        .iter()
        .map(|&(i, j)| (table.endpoint(i), table.endpoint(j)))
        .filter(|(x, y)| x != y)
        .map(|(x, y)| (x.min(y), x.max(y)))
        .collect();
    DerivedRelation {
        kind: RelationKind::EA,
        coarse: d.coarse,
        close: d.close,
        size: points,
        pairs,
        witnesses: BTreeMap::new(),
        unknown: Vec::new(),
    }
}

/// `π⁻¹(D)` on approximants, through their class indices.
pub fn pullback(d: &DerivedRelation, realized: &Realized) -> BTreeSet<(usize, usize)> {
    let cls = &realized.of_approximant;
    let mut out = BTreeSet::new();
    for i in 0..cls.len() {
        for j in i + 1..cls.len() {
            if let (Some(a), Some(b)) = (cls[i], cls[j]) {
                if d.holds(a, b) {
                    out.insert((i, j));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DerivedOptions {
    pub classes: ClassOptions,
    /// Closeness scale for `F̂` and `E*`; defaults to the coarse scale.
    pub close: Option<usize>,
}

/// Everything derived from one model, coarse scale, fine scale and base point.
#[derive(Clone, Debug)]
pub struct DerivedSpace {
    pub base: usize,
    pub coarse: usize,
    pub fine: usize,
    pub table: ClassTable,
    pub approximants: ApproximantSet,
    pub realized: Realized,
    pub fhat: DerivedRelation,
    pub star: DerivedRelation,
    pub d: DerivedRelation,
    pub ea: DerivedRelation,
}

impl DerivedSpace {
    pub fn build(ctx: &HomotopyContext, fine: usize, base: usize, opts: &DerivedOptions) -> Result<Self> {
        let model = ctx.model();
        if fine >= model.ladder().len() || fine < ctx.scale() {
            return Err(Error::Usage("fine scale must lie at or below the coarse scale".into()));
        }
        let budget = opts.classes.budget;
        let close = opts.close.unwrap_or(ctx.scale());
        let table = enumerate_classes(ctx, base, &opts.classes)?;
        let approximants = spanning_approximants(model, fine, base)?;
        let realized = realized_classes(ctx, &table, &approximants, &budget)?;
        let fhat = fhat(ctx, &table, close, &budget)?;
        let star = star(ctx, &approximants, close, &budget)?;
        let d = restrict_to_realized(&fhat, &realized);
        let ea = endpoint_projection(&d, &table, model.len());
        Ok(Self { base, coarse: ctx.scale(), fine, table, approximants, realized, fhat, star, d, ea })
    }

    /// Classes with `F̂` as a one-scale explicit ladder.
    pub fn class_model(&self, model: &UniformModel) -> Result<UniformModel> {
        let all: Vec<usize> = (0..self.table.len()).collect();
        class_points_model(model, &self.table, &all, &self.fhat, "FHat")
    }

    /// Realized classes with `D`.
    pub fn a_space(&self, model: &UniformModel, opts: &ClassOptions) -> Result<ASpace> {
        let members: Vec<usize> = self.realized.classes.iter().copied().collect();
        let a_model = class_points_model(model, &self.table, &members, &self.d, "D")?;
        let index: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let base = *index.get(&0).ok_or_else(|| Error::Usage("the constant class is not realized".into()))?;
        let ctx = HomotopyContext::owned(a_model, 0)?;
        let table = enumerate_classes(&ctx, base, opts)?;
        Ok(ASpace { ctx, members, index, base, table })
    }

    /// The model points with `E_A` as a one-scale explicit ladder.
    pub fn ea_model(&self, model: &UniformModel) -> Result<UniformModel> {
        model.with_ladder(vec![ScaleEntry { tag: "EA".into(), kind: ScaleKind::ExplicitRelation(self.ea.pairs.clone()) }])
    }

    pub fn pullback(&self) -> BTreeSet<(usize, usize)> {
        pullback(&self.d, &self.realized)
    }
}

/// Class ids are zero-padded so that id order is index order.
pub fn class_id(k: usize) -> String {
    format!("k{k:05}")
}

fn class_points_model(
    model: &UniformModel,
    table: &ClassTable,
    members: &[usize],
    rel: &DerivedRelation,
    tag: &str,
) -> Result<UniformModel> {
    let points = members
        .iter()
        .map(|&k| {
            let src = &model.points()[table.endpoint(k)];
            let p = match &src.coords {
                Some(c) => Point::with_coords(class_id(k), c.clone()),
                None => Point::new(class_id(k)),
            };
            p.labelled(table.rep_names(model, k))
        })
        .collect();
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let pairs = rel
        .pairs
        .iter()
        .filter_map(|(i, j)| Some((*pos.get(i)?, *pos.get(j)?)))
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    UniformModel::build(model.radicand(), points, vec![ScaleEntry { tag: tag.into(), kind: ScaleKind::ExplicitRelation(pairs) }])
}

/// The realized classes as a model under `D`, with its own class table.
pub struct ASpace {
    pub ctx: HomotopyContext<'static>,
    /// Class index (in the coarse table) of each A-model point.
    pub members: Vec<usize>,
    index: HashMap<usize, usize>,
    /// A-model point of the constant class.
    pub base: usize,
    pub table: ClassTable,
}

impl ASpace {
    pub fn model(&self) -> &UniformModel {
        self.ctx.model()
    }

    pub fn index_of(&self, class: usize) -> Option<usize> {
        self.index.get(&class).copied()
    }

    /// Coarse classes to an A-model chain (consecutive repeats dropped).
    pub fn chain_of_classes(&self, classes: &[usize]) -> Result<Chain> {
        let mut pts: Vec<usize> = Vec::with_capacity(classes.len());
        for &k in classes {
            let i = self.index_of(k).ok_or_else(|| Error::Usage(format!("class {} is not realized", class_id(k))))?;
            if pts.last() != Some(&i) {
                pts.push(i);
            }
        }
        Chain::new(self.model(), 0, pts)
    }
}

#[derive(Clone, Debug)]
pub struct PsiResult {
    /// Coarse classes of the prefixes `x₀…xᵢ`.
    pub prefix_classes: Vec<usize>,
    pub a_chain: Chain,
    /// Index in the A-model class table, or `None` when it lies beyond it.
    pub class: Option<usize>,
}

/// `ψ` of a fine chain from the base: prefix classes read as a `D`-chain,
/// then looked up among the `D`-classes.
pub fn psi(space: &DerivedSpace, ctx: &HomotopyContext, a: &ASpace, points: &[usize], budget: &Budget) -> Result<PsiResult> {
    if points.first() != Some(&space.base) {
        return Err(Error::Usage("ψ needs a chain from the base point".into()));
    }
    if let Some(w) = points.windows(2).find(|w| !space.ea.holds(w[0], w[1])) {
        return Err(Error::NotAChain {
            scale: "EA".into(),
            from: ctx.model().name(w[0]).to_string(),
            to: ctx.model().name(w[1]).to_string(),
        });
    }
    let mut prefix_classes = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        let k = space
            .table
            .class_of(ctx, &points[..=i], budget)?
            .ok_or_else(|| Error::Usage("a prefix class lies beyond the class table".into()))?;
        prefix_classes.push(k);
    }
    let a_chain = a.chain_of_classes(&prefix_classes)?;
    let class = a.table.class_of(&a.ctx, a_chain.points(), budget)?;
    Ok(PsiResult { prefix_classes, a_chain, class })
}

/// `(π_E)_#`: the `D`-chain of classes of a sequence of approximants.
pub fn push_forward(space: &DerivedSpace, ctx: &HomotopyContext, a: &ASpace, eta: &[Vec<usize>], budget: &Budget) -> Result<Chain> {
    let classes = eta
        .iter()
        .map(|pts| {
            space
                .table
                .class_of(ctx, pts, budget)?
                .ok_or_else(|| Error::Usage("an approximant lies beyond the class table".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    a.chain_of_classes(&classes)
}

#[derive(Clone, Debug)]
pub enum LoopClass {
    Trivial,
    Nontrivial(HomologyCertificate),
}

/// `star_loop_class`: H1 class of the image of an `E*`-loop in `R(A, D)`.
pub fn star_loop_class(
    space: &DerivedSpace,
    ctx: &HomotopyContext,
    a: &ASpace,
    eta: &[Vec<usize>],
    budget: &Budget,
) -> Result<(Chain, LoopClass)> {
    if eta.len() < 2 || eta.first() != eta.last() {
        return Err(Error::Usage("an E*-loop must start and end at the same approximant".into()));
    }
    let image = push_forward(space, ctx, a, eta, budget)?;
    let class = match a.ctx.loop_class(image.points())? {
        CycleClass::Trivial { .. } => LoopClass::Trivial,
        CycleClass::Nontrivial(obstruction) => {
            let cycle = crate::homology::path_vector(a.ctx.solver().complex(), image.points())?;
            LoopClass::Nontrivial(HomologyCertificate { loop_points: image.points().to_vec(), cycle, obstruction })
        }
    };
    Ok((image, class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paperlab::build_hexagon_square;

    fn names(m: &UniformModel, pts: &[usize]) -> Vec<String> {
        pts.iter().map(|&p| m.name(p).to_string()).collect()
    }

    #[test]
    fn nine_point_classes_at_o() {
        let m = build_hexagon_square(1).unwrap();
        let ctx = HomotopyContext::new(&m, 0).unwrap();
        let a = m.point_index("a").unwrap();
        let o = m.point_index("o").unwrap();
        let t = enumerate_classes(&ctx, a, &ClassOptions { max_len: Some(4), ..Default::default() }).unwrap();
        assert!(t.is_complete());
        let reps: Vec<Vec<String>> = t.classes_at(o).iter().map(|&k| names(&m, t.rep(k))).collect();
        assert!(reps.contains(&vec!["a".into(), "o".into()]));
        assert!(reps.contains(&vec!["a".into(), "g".into(), "h".into(), "o".into()]));
    }

    #[test]
    fn length_one_has_only_the_constant() {
        let m = build_hexagon_square(1).unwrap();
        let ctx = HomotopyContext::new(&m, 0).unwrap();
        let t = enumerate_classes(&ctx, 1, &ClassOptions { max_len: Some(1), ..Default::default() }).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.rep(0), &[1]);
    }

    #[test]
    fn diameter_of_nine_point_model() {
        let m = build_hexagon_square(1).unwrap();
        assert_eq!(hop_diameter(m.relation(0), 0), 3);
    }
}
