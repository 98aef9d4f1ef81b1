//! 2-skeleton of the Rips complex of a model at one scale.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::Result;
use crate::space::{Relation, UniformModel};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::from(0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::from(1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows.iter().flat_map(|r| r.iter().map(|&v| BigInt::from(v))).collect();
        Self { rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.sign() == num_bigint::Sign::NoSign {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.sign() != num_bigint::Sign::NoSign {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.sign() == num_bigint::Sign::NoSign)
    }
}

/// Vertices are `0..n` (model point indices); simplices are stored with
/// ascending vertices and listed lexicographically.
#[derive(Clone, Debug)]
pub struct Rips2 {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub triangles: Vec<(usize, usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    triangle_index: HashMap<(usize, usize, usize), usize>,
}

impl Rips2 {
    pub fn from_relation(rel: &Relation) -> Self {
        let n = rel.len();
        let mut edges = Vec::new();
        let mut triangles = Vec::new();
        for x in 0..n {
            for &y in rel.neighbors(x).iter().filter(|&&y| y > x) {
                edges.push((x, y));
                for &z in rel.neighbors(y).iter().filter(|&&z| z > y) {
                    if rel.holds(x, z) {
                        triangles.push((x, y, z));
                    }
                }
            }
        }
        Self::from_parts((0..n).collect(), edges, triangles)
    }

    /// Assumes sorted, downward-closed input.
    pub fn from_parts(vertices: Vec<usize>, edges: Vec<(usize, usize)>, triangles: Vec<(usize, usize, usize)>) -> Self {
        let edge_index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let triangle_index = triangles.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        Self { vertices, edges, triangles, edge_index, triangle_index }
    }

    /// Index of the edge `{x, y}` and the orientation sign of `x → y`.
    pub fn oriented_edge(&self, x: usize, y: usize) -> Option<(usize, i64)> {
        if x < y {
            self.edge_index.get(&(x, y)).map(|&i| (i, 1))
        } else {
            self.edge_index.get(&(y, x)).map(|&i| (i, -1))
        }
    }

    pub fn triangle(&self, mut t: [usize; 3]) -> Option<usize> {
        t.sort_unstable();
        self.triangle_index.get(&(t[0], t[1], t[2])).copied()
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.triangles.len())
    }

    /// Sparse boundary of triangle `t` as `(edge, coefficient)`.
    pub fn triangle_boundary(&self, t: usize) -> [(usize, i64); 3] {
        let (x, y, z) = self.triangles[t];
        [(self.edge_index[&(y, z)], 1), (self.edge_index[&(x, z)], -1), (self.edge_index[&(x, y)], 1)]
    }

    /// Boundary matrices: `d1` is vertices × edges, `d2` is edges × triangles,
    /// so that `d1 · d2 = 0`.
    pub fn boundary_matrices(&self) -> (IntMatrix, IntMatrix) {
        let (nv, ne, nt) = self.counts();
        let mut d1 = IntMatrix::zeros(nv, ne);
        for (j, &(x, y)) in self.edges.iter().enumerate() {
            *d1.get_mut(x, j) -= 1;
            *d1.get_mut(y, j) += 1;
        }
        let mut d2 = IntMatrix::zeros(ne, nt);
        for t in 0..nt {
            for (e, c) in self.triangle_boundary(t) {
                *d2.get_mut(e, t) += c;
            }
        }
        (d1, d2)
    }

    /// Every pair of every triangle is an edge.
    pub fn is_downward_closed(&self) -> bool {
        self.triangles
            .iter()
            .all(|&(x, y, z)| [(x, y), (x, z), (y, z)].iter().all(|e| self.edge_index.contains_key(e)))
    }

    pub fn is_subcomplex_of(&self, other: &Rips2) -> bool {
        self.edges.iter().all(|e| other.edge_index.contains_key(e))
            && self.triangles.iter().all(|t| other.triangle_index.contains_key(t))
    }

    pub fn to_dot(&self, model: &UniformModel, name: &str) -> String {
        let mut tri_count = vec![0usize; self.edges.len()];
        for t in 0..self.triangles.len() {
            for (e, _) in self.triangle_boundary(t) {
                tri_count[e] += 1;
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{name}\" {{");
        let _ = writeln!(out, "  label=\"V={} E={} T={}\";", self.vertices.len(), self.edges.len(), self.triangles.len());
        for &v in &self.vertices {
            let _ = writeln!(out, "  \"{}\";", model.name(v));
        }
        for (i, &(x, y)) in self.edges.iter().enumerate() {
            let _ = writeln!(out, "  \"{}\" -- \"{}\" [label=\"{}\"];", model.name(x), model.name(y), tri_count[i]);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, model: &UniformModel) -> serde_json::Value {
        let name = |v: usize| serde_json::Value::from(model.name(v));
        serde_json::json!({
            "vertices": self.vertices.iter().map(|&v| name(v)).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(x, y)| vec![name(x), name(y)]).collect::<Vec<_>>(),
            "triangles": self.triangles.iter().map(|&(x, y, z)| vec![name(x), name(y), name(z)]).collect::<Vec<_>>(),
        })
    }
}

/// `build_skeleton2`: the Rips 2-skeleton of `model` at `scale`.
pub fn build_skeleton2(model: &UniformModel, scale: usize) -> Result<Rips2> {
    if scale >= model.ladder().len() {
        return Err(crate::error::Error::UnknownScale(format!("#{scale}")));
    }
    Ok(Rips2::from_relation(model.relation(scale)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Point, ScaleInput};

    fn full_triangle() -> UniformModel {
        let pts = vec![Point::new("x"), Point::new("y"), Point::new("z")];
        let pairs = vec![("x".into(), "y".into()), ("y".into(), "z".into()), ("x".into(), "z".into())];
        UniformModel::new(3, pts, vec![("s".into(), ScaleInput::Pairs(pairs))]).unwrap()
    }

    #[test]
    fn single_simplex() {
        let k = build_skeleton2(&full_triangle(), 0).unwrap();
        assert_eq!(k.counts(), (3, 3, 1));
        let (d1, d2) = k.boundary_matrices();
        assert!(d1.mul(&d2).is_zero());
        assert!(k.is_downward_closed());
    }

    #[test]
    fn empty_complex() {
        let k = Rips2::from_parts(vec![], vec![], vec![]);
        let (d1, d2) = k.boundary_matrices();
        assert_eq!((d1.rows, d1.cols, d2.rows, d2.cols), (0, 0, 0, 0));
    }

    #[test]
    fn orientation_sign() {
        let k = build_skeleton2(&full_triangle(), 0).unwrap();
        assert_eq!(k.oriented_edge(0, 1), Some((0, 1)));
        assert_eq!(k.oriented_edge(1, 0), Some((0, -1)));
        assert!(k.to_dot(&full_triangle(), "t").contains("\"x\" -- \"y\" [label=\"1\"]"));
    }
}
