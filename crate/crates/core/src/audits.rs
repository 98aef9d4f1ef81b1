//! Ladder-relative checks of uniform openness, uniform joinability and
//! surjectivity of the projection onto chain classes.
//!
//! "There is an entourage" always ranges over the model's finite ladder.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::chains::{edge_path, Budget, Chain, HomologyCertificate, HomotopyContext, Verdict, Witness};
use crate::derived::{class_id, enumerate_classes, ClassOptions, ClassTable, DerivedSpace};
use crate::error::{Error, Result};
use crate::space::{Relation, UniformModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "Pass",
            Status::Fail => "Fail",
            Status::Unknown => "Unknown",
        })
    }
}

/// Human-readable summary of one audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub name: String,
    pub status: Status,
    pub lines: Vec<String>,
}

impl AuditReport {
    fn new(name: &str, status: Status, lines: Vec<String>) -> Self {
        Self { name: name.into(), status, lines }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"kind": "audit", "name": self.name, "status": self.status.to_string(), "lines": self.lines})
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetOpenness {
    /// Coarsest ladder index whose balls around members stay inside.
    Pass { scale: usize },
    /// At the finest scale, `y` is in the ball of member `x` but not a member.
    Fail { x: usize, y: usize },
}

fn open_subset_on(rels: &[&Relation], member: &[bool], centers: &[usize]) -> SubsetOpenness {
    for (s, rel) in rels.iter().enumerate() {
        if centers.iter().all(|&x| rel.neighbors(x).iter().all(|&y| member[y])) {
            return SubsetOpenness::Pass { scale: s };
        }
    }
    let rel = rels.last().expect("nonempty ladder");
    for &x in centers {
        if let Some(&y) = rel.neighbors(x).iter().find(|&&y| !member[y]) {
            return SubsetOpenness::Fail { x, y };
        }
    }
    unreachable!("some center must violate containment")
}

/// `uniformly_open_subset`.
pub fn uniformly_open_subset(m: &UniformModel, subset: &[usize]) -> Result<SubsetOpenness> {
    if subset.is_empty() {
        return Err(Error::Usage("the subset must be nonempty".into()));
    }
    let mut member = vec![false; m.len()];
    for &x in subset {
        if x >= m.len() {
            return Err(Error::UnknownPoint(format!("#{x}")));
        }
        member[x] = true;
    }
    let rels: Vec<&Relation> = (0..m.ladder().len()).map(|s| m.relation(s)).collect();
    Ok(open_subset_on(&rels, &member, subset))
}

impl SubsetOpenness {
    pub fn status(&self) -> Status {
        match self {
            SubsetOpenness::Pass { .. } => Status::Pass,
            SubsetOpenness::Fail { .. } => Status::Fail,
        }
    }

    pub fn report(&self, m: &UniformModel) -> AuditReport {
        let line = match self {
            SubsetOpenness::Pass { scale } => format!("balls at `{}` stay inside the subset", m.scale_tag(*scale)),
            SubsetOpenness::Fail { x, y } => {
                format!("`{}` lies in the ball of `{}` at every scale but outside the subset", m.name(*y), m.name(*x))
            }
        };
        AuditReport::new("uniformly_open_subset", self.status(), vec![line])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapOpenness {
    /// For each domain scale `E`, the coarsest codomain scale `F` with
    /// `B(f(x), F) ⊆ f(B(x, E))` for all `x`.
    Pass { assignment: Vec<(usize, usize)> },
    /// A domain scale with no valid `F`; one `(F, x, y)` counter-witness per candidate.
    Fail { scale: usize, witnesses: Vec<(usize, usize, usize)> },
}

fn open_map_on(f: &[usize], dom: &[&Relation], cod: &[&Relation], centers: &[usize]) -> MapOpenness {
    let n_cod = cod.first().map_or(0, |r| r.len());
    let mut assignment = Vec::with_capacity(dom.len());
    for (e, drel) in dom.iter().enumerate() {
        let images: Vec<Vec<bool>> = centers
            .iter()
            .map(|&x| {
                let mut img = vec![false; n_cod];
                img[f[x]] = true;
                for &y in drel.neighbors(x) {
                    img[f[y]] = true;
                }
                img
            })
            .collect();
        let violation = |crel: &Relation| {
            centers.iter().zip(&images).find_map(|(&x, img)| crel.neighbors(f[x]).iter().find(|&&y| !img[y]).map(|&y| (x, y)))
        };
        match (0..cod.len()).find(|&fs| violation(cod[fs]).is_none()) {
            Some(fs) => assignment.push((e, fs)),
            None => {
                let witnesses = (0..cod.len())
                    .map(|fs| {
                        let (x, y) = violation(cod[fs]).expect("violated");
                        (fs, x, y)
                    })
                    .collect();
                return MapOpenness::Fail { scale: e, witnesses };
            }
        }
    }
    MapOpenness::Pass { assignment }
}

/// `uniformly_open_map`: `f[i]` is the image of domain point `i`.
pub fn uniformly_open_map(f: &[usize], dom: &UniformModel, cod: &UniformModel) -> Result<MapOpenness> {
    if f.len() != dom.len() {
        return Err(Error::Usage("the map must be total on the domain".into()));
    }
    if let Some(&y) = f.iter().find(|&&y| y >= cod.len()) {
        return Err(Error::UnknownPoint(format!("#{y}")));
    }
    let d: Vec<&Relation> = (0..dom.ladder().len()).map(|s| dom.relation(s)).collect();
    let c: Vec<&Relation> = (0..cod.ladder().len()).map(|s| cod.relation(s)).collect();
    let centers: Vec<usize> = (0..dom.len()).collect();
    Ok(open_map_on(f, &d, &c, &centers))
}

impl MapOpenness {
    pub fn status(&self) -> Status {
        match self {
            MapOpenness::Pass { .. } => Status::Pass,
            MapOpenness::Fail { .. } => Status::Fail,
        }
    }

    pub fn report(&self, dom: &UniformModel, cod: &UniformModel) -> AuditReport {
        let lines = match self {
            MapOpenness::Pass { assignment } => assignment
                .iter()
                .map(|&(e, f)| format!("`{}` -> `{}`", dom.scale_tag(e), cod.scale_tag(f)))
                .collect(),
            MapOpenness::Fail { scale, witnesses } => witnesses
                .iter()
                .map(|&(f, x, y)| {
                    format!(
                        "`{}` / `{}`: `{}` is near the image of `{}` but not an image of its ball",
                        dom.scale_tag(*scale),
                        cod.scale_tag(f),
                        cod.name(y),
                        dom.name(x)
                    )
                })
                .collect(),
        };
        AuditReport::new("uniformly_open_map", self.status(), lines)
    }
}

/// Inclusion of `subset` as a map from the restricted model.
pub fn inclusion(m: &UniformModel, subset: &[usize]) -> Result<(UniformModel, Vec<usize>)> {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok((m.restrict(&sorted)?, sorted))
}

/// One pair of a joinability audit: a fine path and its coarse witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinWitness {
    pub path: Vec<usize>,
    pub witness: Witness,
}

#[derive(Clone, Debug)]
pub enum Joinability {
    /// Every pair related at `scale` is joined by a finest-scale path that is
    /// coarsely homotopic to its edge path.
    Pass { scale: usize, witnesses: Vec<JoinWitness> },
    Fail { scale: usize, path: Vec<usize>, certificate: HomologyCertificate },
    Unknown { reason: String },
}

fn shortest_path(rel: &Relation, x: usize, y: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; rel.len()];
    parent[x] = x;
    let mut queue = VecDeque::from([x]);
    while let Some(u) = queue.pop_front() {
        if u == y {
            let mut path = vec![y];
            let mut v = y;
            while v != x {
                v = parent[v];
                path.push(v);
            }
            path.reverse();
            return Some(path);
        }
        for &w in rel.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

fn connectivity_problem(m: &UniformModel) -> Option<String> {
    (0..m.ladder().len())
        .find(|&s| !m.is_chain_connected(s).unwrap_or(false))
        .map(|s| format!("not chain connected at `{}`", m.scale_tag(s)))
}

/// `joinability_audit` against the coarse scale `coarse`.
pub fn joinability_audit(m: &UniformModel, coarse: usize, budget: &Budget) -> Result<Joinability> {
    if coarse >= m.ladder().len() {
        return Err(Error::UnknownScale(format!("#{coarse}")));
    }
    if let Some(reason) = connectivity_problem(m) {
        return Ok(Joinability::Unknown { reason });
    }
    let ctx = HomotopyContext::new(m, coarse)?;
    let fine = m.relation(m.bottom());
    let mut last_fail = None;
    let mut last_unknown = None;
    for f in coarse..m.ladder().len() {
        let pairs: Vec<(usize, usize)> = m.relation(f).pairs().collect();
        let verdicts: Vec<(Vec<usize>, Verdict)> = pairs
            .par_iter()
            .map(|&(x, y)| {
                let path = shortest_path(fine, x, y).expect("connected");
                let c = Chain::new(m, coarse, path.clone())?;
                let e = edge_path(m, coarse, x, y)?;
                Ok((path, ctx.decide(&c, &e, budget)?))
            })
            .collect::<Result<_>>()?;
        let mut witnesses = Vec::with_capacity(verdicts.len());
        last_fail = None;
        last_unknown = None;
        for (path, v) in verdicts {
            match v {
                Verdict::Equivalent(witness) => witnesses.push(JoinWitness { path, witness }),
                Verdict::Inequivalent(cert) => {
                    last_fail.get_or_insert((f, path, cert));
                }
                Verdict::Unknown(_) => {
                    last_unknown.get_or_insert(path);
                }
            }
        }
        if last_fail.is_none() && last_unknown.is_none() {
            return Ok(Joinability::Pass { scale: f, witnesses });
        }
    }
    if let Some((scale, path, certificate)) = last_fail {
        return Ok(Joinability::Fail { scale, path, certificate });
    }
    let path = last_unknown.expect("some pair undecided");
    Ok(Joinability::Unknown { reason: format!("undecided pair {:?} at the finest scale", (path[0], path[path.len() - 1])) })
}

impl Joinability {
    pub fn status(&self) -> Status {
        match self {
            Joinability::Pass { .. } => Status::Pass,
            Joinability::Fail { .. } => Status::Fail,
            Joinability::Unknown { .. } => Status::Unknown,
        }
    }

    pub fn report(&self, m: &UniformModel) -> AuditReport {
        let line = match self {
            Joinability::Pass { scale, witnesses } => {
                format!("pairs at `{}` joined by fine paths ({} witnesses)", m.scale_tag(*scale), witnesses.len())
            }
            Joinability::Fail { scale, path, .. } => format!(
                "at `{}` the fine path {} is not homotopic to its edge path",
                m.scale_tag(*scale),
                path.iter().map(|&p| m.name(p)).collect::<Vec<_>>().join(",")
            ),
            Joinability::Unknown { reason } => reason.clone(),
        };
        AuditReport::new("joinability", self.status(), vec![line])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surjectivity {
    Pass,
    Fail { unrealized: Vec<usize> },
    Unknown { reason: String, unrealized: Vec<usize> },
}

/// `projection_surjectivity_audit`: is every tabulated class realized?
pub fn projection_surjectivity_audit(space: &DerivedSpace) -> Surjectivity {
    let unrealized: Vec<usize> = (0..space.table.len()).filter(|k| !space.realized.classes.contains(k)).collect();
    if !space.table.is_complete() {
        return Surjectivity::Unknown { reason: "class table incomplete".into(), unrealized };
    }
    if !space.realized.complete {
        return Surjectivity::Unknown { reason: "realized classes incomplete".into(), unrealized };
    }
    if unrealized.is_empty() {
        Surjectivity::Pass
    } else {
        Surjectivity::Fail { unrealized }
    }
}

impl Surjectivity {
    pub fn status(&self) -> Status {
        match self {
            Surjectivity::Pass => Status::Pass,
            Surjectivity::Fail { .. } => Status::Fail,
            Surjectivity::Unknown { .. } => Status::Unknown,
        }
    }

    pub fn report(&self, m: &UniformModel, table: &ClassTable) -> AuditReport {
        let lines = match self {
            Surjectivity::Pass => vec!["every class is realized".to_string()],
            Surjectivity::Fail { unrealized } | Surjectivity::Unknown { unrealized, .. } => {
                let mut lines: Vec<String> = unrealized
                    .iter()
                    .map(|&k| format!("unrealized {} = [{}]", class_id(k), table.rep_names(m, k)))
                    .collect();
                if let Surjectivity::Unknown { reason, .. } = self {
                    lines.insert(0, reason.clone());
                }
                lines
            }
        };
        AuditReport::new("projection_surjectivity", self.status(), lines)
    }
}

/// Outcome of the three-way comparison.
#[derive(Clone, Debug)]
pub struct Prop2Report {
    pub precondition: Option<String>,
    pub joinability: AuditReport,
    pub endpoint_map: AuditReport,
    pub image_open: AuditReport,
}

impl Prop2Report {
    pub fn audits(&self) -> [&AuditReport; 3] {
        [&self.joinability, &self.endpoint_map, &self.image_open]
    }

    /// No two audits reached different definite outcomes.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "prop2",
            "precondition": self.precondition,
            "consistent": self.consistent(),
            "audits": self.audits().iter().map(|a| a.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn consistent(&self) -> bool {
        let definite: BTreeSet<String> =
            self.audits().iter().filter(|a| a.status != Status::Unknown).map(|a| a.status.to_string()).collect();
        definite.len() <= 1
    }
}

/// `(α, β)` with `(α_E, β_E) ∈ Ê`, read off the class table at `E`.
fn star_from_table(table: &ClassTable, classes: &[Option<usize>], ends: &[usize], near: &Relation) -> (BTreeSet<(usize, usize)>, bool) {
    let mut pairs = BTreeSet::new();
    let mut exact = true;
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if !near.holds(ends[i], ends[j]) {
                continue;
            }
            let (Some(a), Some(b)) = (classes[i], classes[j]) else {
                exact = false;
                continue;
            };
            let related = match (table.successor(a, ends[j]), table.successor(b, ends[i])) {
                (Some(s), _) => s == b,
                (None, Some(s)) => s == a,
                (None, None) => {
                    exact = false;
                    false
                }
            };
            if related {
                pairs.insert((i, j));
            }
        }
    }
    (pairs, exact)
}

/// `prop2_crosscheck`: joinability, openness of the endpoint map and openness
/// of the realized classes, compared.
///
/// Generalized paths are approximated by the classes of finest-scale chains
/// from `base`; balls are only inspected around classes whose representatives
/// are shorter than the length bound, so truncation cannot fake a failure.
pub fn prop2_crosscheck(m: &UniformModel, coarse: usize, base: usize, opts: &ClassOptions) -> Result<Prop2Report> {
    if coarse >= m.ladder().len() {
        return Err(Error::UnknownScale(format!("#{coarse}")));
    }
    if let Some(reason) = connectivity_problem(m) {
        let skipped = |name: &str| AuditReport::new(name, Status::Unknown, vec![format!("skipped: {reason}")]);
        return Ok(Prop2Report {
            precondition: Some(reason.clone()),
            joinability: skipped("joinability"),
            endpoint_map: skipped("endpoint_map_open"),
            image_open: skipped("image_open"),
        });
    }
    let joinability = joinability_audit(m, coarse, &opts.budget)?.report(m);

    let scales = m.ladder().len();
    let ctxs: Vec<HomotopyContext> = (0..scales).map(|s| HomotopyContext::new(m, s)).collect::<Result<_>>()?;
    let tables: Vec<ClassTable> = ctxs.iter().map(|c| enumerate_classes(c, base, opts)).collect::<Result<_>>()?;
    let fine_table = &tables[scales - 1];
    let gp: Vec<&[usize]> = (0..fine_table.len()).map(|k| fine_table.rep(k)).collect();
    let ends: Vec<usize> = gp.iter().map(|c| *c.last().expect("nonempty")).collect();
    let interior: Vec<usize> = (0..gp.len()).filter(|&k| gp[k].len() < fine_table.max_len()).collect();
    let mut exact = fine_table.is_complete();
    // Class of every approximating path at every scale.
    let mut classes_at: Vec<Vec<Option<usize>>> = Vec::with_capacity(scales);
    for s in 0..scales {
        let cls = gp.par_iter().map(|c| tables[s].class_of(&ctxs[s], c, &opts.budget)).collect::<Result<Vec<_>>>()?;
        exact &= tables[s].is_complete();
        classes_at.push(cls);
    }

    // Audit 2: the endpoint map from (approximants, E*) to the model.
    let mut star_rels = Vec::with_capacity(scales);
    for s in 0..scales {
        let (pairs, ok) = star_from_table(&tables[s], &classes_at[s], &ends, m.relation(s));
        exact &= ok;
        star_rels.push(Relation::from_pairs(gp.len(), pairs));
    }
    let dom: Vec<&Relation> = star_rels.iter().collect();
    let cod: Vec<&Relation> = (0..scales).map(|s| m.relation(s)).collect();
    let endpoint_map = {
        let outcome = open_map_on(&ends, &dom, &cod, &interior);
        let mut lines: Vec<String> = match &outcome {
            MapOpenness::Pass { assignment } => assignment
                .iter()
                .map(|&(e, f)| format!("E* at `{}` -> `{}`", m.scale_tag(e), m.scale_tag(f)))
                .collect(),
            MapOpenness::Fail { scale, witnesses } => witnesses
                .iter()
                .map(|&(f, x, y)| {
                    format!(
                        "E* at `{}` / `{}`: `{}` near the end of [{}] is missed",
                        m.scale_tag(*scale),
                        m.scale_tag(f),
                        m.name(y),
                        gp[x].iter().map(|&p| m.name(p)).collect::<Vec<_>>().join(",")
                    )
                })
                .collect(),
        };
        let mut status = outcome.status();
        if !exact && status == Status::Fail {
            status = Status::Unknown;
            lines.insert(0, "class tables incomplete".into());
        }
        AuditReport::new("endpoint_map_open", status, lines)
    };

    // Audit 3: the realized classes inside (X_E, x0) under the F̂ ladder.
    let table = &tables[coarse];
    let mut member = vec![false; table.len()];
    for k in classes_at[coarse].iter().flatten() {
        member[*k] = true;
    }
    let class_ends: Vec<usize> = (0..table.len()).map(|k| table.endpoint(k)).collect();
    let all_classes: Vec<Option<usize>> = (0..table.len()).map(Some).collect();
    let mut fhat_rels = Vec::new();
    for f in coarse..scales {
        let (pairs, ok) = star_from_table(table, &all_classes, &class_ends, m.relation(f));
        exact &= ok;
        fhat_rels.push(Relation::from_pairs(table.len(), pairs));
    }
    let centers: Vec<usize> = (0..table.len()).filter(|&k| member[k] && table.rep(k).len() < table.max_len()).collect();
    let image_open = {
        let rels: Vec<&Relation> = fhat_rels.iter().collect();
        let (mut status, mut lines) = match open_subset_on(&rels, &member, &centers) {
            SubsetOpenness::Pass { scale } => (Status::Pass, vec![format!("F̂ at `{}` keeps realized classes inside", m.scale_tag(coarse + scale))]),
            SubsetOpenness::Fail { x, y } => (
                Status::Fail,
                vec![format!("[{}] is F̂-close to unrealized [{}]", table.rep_names(m, x), table.rep_names(m, y))],
            ),
        };
        if !exact && status == Status::Fail {
            status = Status::Unknown;
            lines.insert(0, "class tables incomplete".into());
        }
        AuditReport::new("image_open", status, lines)
    };
    Ok(Prop2Report { precondition: None, joinability, endpoint_map, image_open })
}
