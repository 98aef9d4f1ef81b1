mod common;

use std::cmp::Ordering;
use std::collections::VecDeque;

use discrete_homotopy::chains::{Budget, Chain, HomotopyContext, Verdict};
use discrete_homotopy::homology::{h1, path_vector, smith_normal_form};
use discrete_homotopy::io::{model_to_json, parse_model, to_stable_string};
use discrete_homotopy::rips::{build_skeleton2, IntMatrix};
use discrete_homotopy::space::Relation;
use discrete_homotopy::{QuadRat, UniformModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{in_column_span, is_unimodular, random_model, rational_rank};

fn quad(p: i64, q: i64, r: i64, s: i64) -> QuadRat {
    QuadRat::new(BigRational::new(p.into(), q.into()), BigRational::new(r.into(), s.into()), 3).unwrap()
}

fn ratio() -> impl Strategy<Value = (i64, i64)> {
    (-40i64..=40, 1i64..=12)
}

fn walk(rel: &Relation, from: usize, steps: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut out = vec![from];
    for _ in 0..steps {
        let nb = rel.neighbors(*out.last().unwrap());
        if nb.is_empty() {
            break;
        }
        out.push(nb[rng.gen_range(0..nb.len())]);
    }
    out
}

fn path(rel: &Relation, x: usize, y: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; rel.len()];
    parent[x] = x;
    let mut q = VecDeque::from([x]);
    while let Some(u) = q.pop_front() {
        for &w in rel.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                q.push_back(w);
            }
        }
    }
    let mut out = vec![y];
    while *out.last().unwrap() != x {
        out.push(parent[*out.last().unwrap()]);
    }
    out.reverse();
    out
}

/// Two chains with common endpoints at `scale`.
fn chain_pair(m: &UniformModel, scale: usize, seed: u64) -> (Chain, Chain) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rel = m.relation(scale);
    let x = rng.gen_range(0..m.len());
    let c = walk(rel, x, rng.gen_range(0..6), &mut rng);
    let y = *c.last().unwrap();
    let mut d = walk(rel, x, rng.gen_range(0..5), &mut rng);
    let tail = path(rel, *d.last().unwrap(), y);
    d.extend(tail.into_iter().skip(1));
    (Chain::new(m, scale, c).unwrap(), Chain::new(m, scale, d).unwrap())
}

proptest! {
    #[test]
    fn quad_order_matches_interval_oracle(a in ratio(), b in ratio(), c in ratio(), d in ratio()) {
        let x = quad(a.0, a.1, b.0, b.1);
        let y = quad(c.0, c.1, d.0, d.1);
        let exact = x.cmp_exact(&y).unwrap();
        let diff = (a.0 as f64 / a.1 as f64 - c.0 as f64 / c.1 as f64)
            + (b.0 as f64 / b.1 as f64 - d.0 as f64 / d.1 as f64) * 3f64.sqrt();
        if diff.abs() > 1e-9 {
            prop_assert_eq!(exact, if diff > 0.0 { Ordering::Greater } else { Ordering::Less });
        }
        let same = x.rat_part() == y.rat_part() && x.root_part() == y.root_part();
        prop_assert_eq!(exact == Ordering::Equal, same);
    }

    #[test]
    fn quad_field_identities(a in ratio(), b in ratio(), c in ratio(), d in ratio()) {
        let x = quad(a.0, a.1, b.0, b.1);
        let y = quad(c.0, c.1, d.0, d.1);
        prop_assert_eq!(x.add(&y).unwrap().sub(&y).unwrap(), x.clone());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(QuadRat::parse(&x.canonical(), 3).unwrap(), x.clone());
        let sq = x.mul(&x).unwrap();
        prop_assert!(sq.signum() != Ordering::Less);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_recomposes_with_unimodular_factors(
        rows in 1usize..=12,
        cols in 1usize..=12,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let density = rng.gen_range(0.1..1.0);
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| if rng.gen_bool(density) { rng.gen_range(-6..=6) } else { 0 }).collect())
            .collect();
        let m = IntMatrix::from_rows(&data);
        let snf = smith_normal_form(&m);
        prop_assert!(snf.recomposes(&m));
        prop_assert!(snf.divisibility_chain());
        prop_assert!(snf.diag.iter().all(|d| d >= &BigInt::from(0)));
        prop_assert_eq!(snf.rank, rational_rank(&m));
        prop_assert!(is_unimodular(&snf.left));
        prop_assert!(is_unimodular(&snf.right));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rips_complexes_are_consistent(seed in any::<u64>()) {
        let m = random_model(seed);
        let mut previous = None;
        for s in 0..m.ladder().len() {
            let k = build_skeleton2(&m, s).unwrap();
            let (d1, d2) = k.boundary_matrices();
            prop_assert!(d1.mul(&d2).is_zero());
            prop_assert!(k.is_downward_closed());
            // Brute force: every bounded triple is a triangle.
            let rel = m.relation(s);
            let n = m.len();
            let triples = (0..n)
                .flat_map(|x| (x + 1..n).flat_map(move |y| (y + 1..n).map(move |z| [x, y, z])))
                .filter(|t| rel.is_bounded(t))
                .count();
            prop_assert_eq!(triples, k.triangles.len());
            let h = h1(&k);
            prop_assert_eq!(h.betti1, k.edges.len() - rational_rank(&d1) - rational_rank(&d2));
            if let Some(coarser) = &previous {
                prop_assert!(k.is_subcomplex_of(coarser));
            }
            previous = Some(k);
        }
    }

    #[test]
    fn verdicts_carry_checkable_evidence(seed in any::<u64>(), pair_seed in any::<u64>()) {
        let m = random_model(seed);
        for s in 0..m.ladder().len() {
            let ctx = HomotopyContext::new(&m, s).unwrap();
            let (c, d) = chain_pair(&m, s, pair_seed);
            let mut lp = c.points().to_vec();
            lp.extend(d.points().iter().rev().skip(1));
            let (_, d2) = ctx.solver().complex().boundary_matrices();
            let z = path_vector(ctx.solver().complex(), &lp).unwrap();
            let rationally_bounds = in_column_span(&d2, &z);
            match ctx.decide(&c, &d, &Budget::default()).unwrap() {
                Verdict::Equivalent(w) => {
                    prop_assert!(w.verify(&m, &c, &d).is_ok());
                    prop_assert!(rationally_bounds);
                }
                Verdict::Inequivalent(cert) => prop_assert!(cert.verify(&m, s).is_ok()),
                Verdict::Unknown(_) => {}
            }
        }
    }

    #[test]
    fn complete_scale_makes_all_chains_homotopic(seed in any::<u64>(), pair_seed in any::<u64>()) {
        let base = random_model(seed);
        let diam = (0..base.len())
            .flat_map(|i| (0..base.len()).map(move |j| (i, j)))
            .map(|(i, j)| base.dist2(i, j).unwrap().clone())
            .max_by(|a, b| a.cmp_exact(b).unwrap())
            .unwrap();
        let pts = base.points().iter().map(|p| (p.id.clone(), p.coords.clone().unwrap())).collect();
        let m = UniformModel::from_euclidean(3, pts, vec![("all".into(), diam)]).unwrap();
        let (c, d) = chain_pair(&m, 0, pair_seed);
        let v = HomotopyContext::new(&m, 0).unwrap().decide(&c, &d, &Budget::default()).unwrap();
        match v {
            Verdict::Equivalent(w) => prop_assert!(w.verify(&m, &c, &d).is_ok()),
            other => prop_assert!(false, "expected Equivalent, got {}", other.label()),
        }
    }

    #[test]
    fn model_json_is_byte_stable(seed in any::<u64>()) {
        let m = random_model(seed);
        let text = to_stable_string(&model_to_json(&m));
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(to_stable_string(&model_to_json(&back)), text);
        for s in 0..m.ladder().len() {
            prop_assert_eq!(back.relation(s), m.relation(s));
        }
    }
}
