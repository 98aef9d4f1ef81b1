//! Integral homology of Rips 2-skeletons via Smith normal form.
//!
//! Besides Betti numbers and torsion, this module decides whether a 1-cycle
//! bounds. A cycle that does not bound comes with an obstruction cocycle: an
//! integer edge function that vanishes (modulo some `m`, possibly `0`) on every
//! triangle boundary but pairs nonzero with the cycle. Checking it needs only
//! the triangle list, never the elimination that found it.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rips::{IntMatrix, Rips2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// `min(rows, cols)` nonnegative entries forming a divisibility chain.
    pub diag: Vec<BigInt>,
    /// Unimodular, rows × rows.
    pub left: IntMatrix,
    /// Unimodular, cols × cols.
    pub right: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// `diag` laid out as a rows × cols matrix.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows, self.right.rows);
        for (i, v) in self.diag.iter().enumerate() {
            *d.get_mut(i, i) = v.clone();
        }
        d
    }

    pub fn recomposes(&self, m: &IntMatrix) -> bool {
        self.left.mul(m).mul(&self.right) == self.diagonal_matrix()
    }

    pub fn divisibility_chain(&self) -> bool {
        self.diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() })
    }
}

#[inline]
fn nz(v: &BigInt) -> bool {
    v.sign() != Sign::NoSign
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols {
                m.data.swap(i * m.cols + c, j * m.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows {
                m.data.swap(r * m.cols + i, r * m.cols + j);
            }
        }
    }

    /// row[dst] -= q · row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let cols = m.cols;
            for c in 0..cols {
                let s = &m.data[src * cols + c];
                if nz(s) {
                    let delta = q * s;
                    m.data[dst * cols + c] -= delta;
                }
            }
        }
    }

    /// col[dst] -= q · col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            let cols = m.cols;
            for r in 0..m.rows {
                let s = &m.data[r * cols + src];
                if nz(s) {
                    let delta = q * s;
                    m.data[r * cols + dst] -= delta;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            let cols = m.cols;
            for c in 0..cols {
                let x = &mut m.data[i * cols + c];
                if nz(x) {
                    *x = -&*x;
                }
            }
        }
    }

    /// Smallest nonzero |entry| in the trailing block starting at (t, t).
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = self.a.get(i, j);
                if nz(x) {
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => x.abs() < self.a.get(bi, bj).abs(),
                    };
                    if better {
                        best = Some((i, j));
                        if x.is_one() || (-x).is_one() {
                            return best;
                        }
                    }
                }
            }
        }
        best
    }
}

/// Smith normal form `left · m · right = diag` over the integers.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut r = Reducer { a: m.clone(), u: IntMatrix::identity(rows), v: IntMatrix::identity(cols) };
    let k = rows.min(cols);
    let mut rank = 0;
    for t in 0..k {
        let Some((pi, pj)) = r.min_pivot(t) else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let p = r.a.get(t, t).clone();
            let mut residue = None;
            for i in t + 1..rows {
                let x = r.a.get(i, t);
                if nz(x) {
                    let q = x / &p;
                    if nz(&q) {
                        r.row_axpy(i, t, &q);
                    }
                    if nz(r.a.get(i, t)) {
                        residue = residue.or(Some((i, t)));
                    }
                }
            }
            for j in t + 1..cols {
                let x = r.a.get(t, j);
                if nz(x) {
                    let q = x / &p;
                    if nz(&q) {
                        r.col_axpy(j, t, &q);
                    }
                    if nz(r.a.get(t, j)) {
                        residue = residue.or(Some((t, j)));
                    }
                }
            }
            if residue.is_some() {
                // Bring the smallest remainder in row t / column t to the pivot.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if nz(r.a.get(i, t)) && r.a.get(i, t).abs() < r.a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if nz(r.a.get(t, j)) && r.a.get(t, j).abs() < r.a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                r.swap_rows(t, best.0);
                r.swap_cols(t, best.1);
                continue;
            }
            let p = r.a.get(t, t).clone();
            if p.abs().is_one() {
                break;
            }
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    let x = r.a.get(i, j);
                    if nz(x) && !(x % &p).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => r.row_axpy(t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        if r.a.get(t, t).is_negative() {
            r.negate_row(t);
        }
        rank += 1;
    }
    let diag = (0..k).map(|i| r.a.get(i, i).clone()).collect();
    SnfResult { diag, left: r.u, right: r.v, rank }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Summary {
    pub betti1: usize,
    pub torsion: Vec<BigInt>,
}

fn rank_d1(k: &Rips2) -> usize {
    // rank ∂₁ = #vertices − #components of the 1-skeleton
    let n = k.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut merges = 0;
    for &(x, y) in &k.edges {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent[rx] = ry;
            merges += 1;
        }
    }
    merges
}

/// First integral homology of the 2-truncated complex.
pub fn h1(k: &Rips2) -> H1Summary {
    let (_, d2) = k.boundary_matrices();
    let snf = smith_normal_form(&d2);
    summary_from(k, &snf)
}

fn summary_from(k: &Rips2, snf: &SnfResult) -> H1Summary {
    let z1 = k.edges.len() - rank_d1(k);
    let torsion = snf.diag.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    H1Summary { betti1: z1 - snf.rank, torsion }
}

/// Cohomological witness that a cycle is not a boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    /// Sparse edge function `(edge index, value)`.
    pub cocycle: Vec<(usize, BigInt)>,
    /// `0` for an integral cocycle, else the modulus it is a cocycle for.
    pub modulus: BigInt,
    /// `cocycle · cycle`, nonzero modulo `modulus`.
    pub pairing: BigInt,
    /// Nonzero coordinates of `left · z` in the Smith basis.
    pub residues: Vec<(usize, BigInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleClass {
    /// `filling` is a sparse triangle combination with boundary `z`.
    Trivial { filling: Vec<(usize, BigInt)> },
    Nontrivial(Obstruction),
}

impl CycleClass {
    pub fn is_trivial(&self) -> bool {
        matches!(self, CycleClass::Trivial { .. })
    }
}

fn reduce_mod(x: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        x.clone()
    } else {
        x.mod_floor(m)
    }
}

/// Checks an obstruction against the complex alone.
pub fn verify_obstruction(k: &Rips2, z: &[BigInt], obs: &Obstruction) -> Result<()> {
    let mut phi = vec![BigInt::zero(); k.edges.len()];
    for (e, v) in &obs.cocycle {
        *phi.get_mut(*e).ok_or_else(|| Error::Verification(format!("cocycle edge {e} out of range")))? += v;
    }
    for t in 0..k.triangles.len() {
        let s: BigInt = k.triangle_boundary(t).iter().map(|(e, c)| &phi[*e] * BigInt::from(*c)).sum();
        if !reduce_mod(&s, &obs.modulus).is_zero() {
            return Err(Error::Verification(format!("cocycle does not vanish on triangle {t}")));
        }
    }
    let pairing: BigInt = phi.iter().zip(z).map(|(a, b)| a * b).sum();
    if pairing != obs.pairing {
        return Err(Error::Verification("recorded pairing does not match".into()));
    }
    if reduce_mod(&pairing, &obs.modulus).is_zero() {
        return Err(Error::Verification("cocycle pairs to zero with the cycle".into()));
    }
    Ok(())
}

pub fn verify_filling(k: &Rips2, z: &[BigInt], filling: &[(usize, BigInt)]) -> Result<()> {
    let mut acc = vec![BigInt::zero(); k.edges.len()];
    for (t, c) in filling {
        if *t >= k.triangles.len() {
            return Err(Error::Verification(format!("triangle {t} out of range")));
        }
        for (e, s) in k.triangle_boundary(*t) {
            acc[e] += c * BigInt::from(s);
        }
    }
    if acc.as_slice() != z {
        return Err(Error::Verification("filling boundary differs from the cycle".into()));
    }
    Ok(())
}

/// Boundary of an edge vector, one entry per vertex.
pub fn boundary1(k: &Rips2, z: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); k.vertices.len()];
    for (j, &(x, y)) in k.edges.iter().enumerate() {
        if nz(&z[j]) {
            out[x] -= &z[j];
            out[y] += &z[j];
        }
    }
    out
}

/// Edge vector traced by a point sequence; repeated points contribute nothing.
pub fn path_vector(k: &Rips2, points: &[usize]) -> Result<Vec<BigInt>> {
    let mut z = vec![BigInt::zero(); k.edges.len()];
    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (e, s) = k
            .oriented_edge(w[0], w[1])
            .ok_or_else(|| Error::Usage(format!("({}, {}) is not an edge of the complex", w[0], w[1])))?;
        z[e] += s;
    }
    Ok(z)
}

/// A complex together with the Smith form of its `∂₂`, for repeated boundary tests.
#[derive(Clone, Debug)]
pub struct BoundarySolver {
    complex: Rips2,
    snf: SnfResult,
}

impl BoundarySolver {
    pub fn new(complex: Rips2) -> Self {
        let (_, d2) = complex.boundary_matrices();
        let snf = smith_normal_form(&d2);
        Self { complex, snf }
    }

    pub fn complex(&self) -> &Rips2 {
        &self.complex
    }

    pub fn snf(&self) -> &SnfResult {
        &self.snf
    }

    pub fn h1(&self) -> H1Summary {
        summary_from(&self.complex, &self.snf)
    }

    /// `cycle_class`: decides whether `z` is a boundary.
    pub fn cycle_class(&self, z: &[BigInt]) -> Result<CycleClass> {
        let k = &self.complex;
        if z.len() != k.edges.len() {
            return Err(Error::Usage(format!("edge vector has length {}, complex has {} edges", z.len(), k.edges.len())));
        }
        if boundary1(k, z).iter().any(nz) {
            return Err(Error::Usage("vector is not a cycle".into()));
        }
        let support: Vec<(usize, &BigInt)> = z.iter().enumerate().filter(|(_, v)| nz(v)).collect();
        let u = &self.snf.left;
        let y: Vec<BigInt> = (0..u.rows).map(|i| support.iter().map(|(j, v)| u.get(i, *j) * *v).sum()).collect();
        let rank = self.snf.rank;
        let residues: Vec<(usize, BigInt)> = y.iter().enumerate().filter(|(_, v)| nz(v)).map(|(i, v)| (i, v.clone())).collect();
        let integral = (rank..y.len()).find(|&i| nz(&y[i]));
        let torsion = (0..rank).find(|&i| !(&y[i] % &self.snf.diag[i]).is_zero());
        let failing = integral.map(|i| (i, BigInt::zero())).or_else(|| torsion.map(|i| (i, self.snf.diag[i].clone())));
        if let Some((i, modulus)) = failing {
            let cocycle: Vec<(usize, BigInt)> =
                (0..u.cols).filter(|&j| nz(u.get(i, j))).map(|j| (j, u.get(i, j).clone())).collect();
            let obs = Obstruction { cocycle, modulus, pairing: y[i].clone(), residues };
            debug_assert!(verify_obstruction(k, z, &obs).is_ok());
            return Ok(CycleClass::Nontrivial(obs));
        }
        let v = &self.snf.right;
        let w: Vec<(usize, BigInt)> = (0..rank).filter(|&i| nz(&y[i])).map(|i| (i, &y[i] / &self.snf.diag[i])).collect();
        let filling: Vec<(usize, BigInt)> = (0..v.rows)
            .filter_map(|t| {
                let c: BigInt = w.iter().map(|(i, wi)| v.get(t, *i) * wi).sum();
                nz(&c).then_some((t, c))
            })
            .collect();
        verify_filling(k, z, &filling)?;
        Ok(CycleClass::Trivial { filling })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_of(rows: &[Vec<i64>]) -> (IntMatrix, SnfResult) {
        let m = IntMatrix::from_rows(rows);
        let s = smith_normal_form(&m);
        (m, s)
    }

    #[test]
    fn diag_two_three() {
        // gcd(2,3) = 1 and lcm = 6
        let (m, s) = snf_of(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(6)]);
        assert!(s.recomposes(&m));
    }

    #[test]
    fn zero_and_identity() {
        let (m, s) = snf_of(&[vec![0, 0, 0], vec![0, 0, 0]]);
        assert_eq!(s.rank, 0);
        assert!(s.diag.iter().all(Zero::is_zero));
        assert!(s.recomposes(&m));
        let id = IntMatrix::identity(4);
        let s = smith_normal_form(&id);
        assert_eq!(s.diag, vec![BigInt::one(); 4]);
    }

    #[test]
    fn torsion_example() {
        // Z^2 / <(2, 4), (4, 2)> has invariant factors 2, 6.
        let (m, s) = snf_of(&[vec![2, 4], vec![4, 2]]);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(6)]);
        assert!(s.recomposes(&m) && s.divisibility_chain());
    }

    fn cycle_graph(n: usize, with_triangles: bool) -> Rips2 {
        let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
        edges.sort();
        let triangles = if with_triangles { vec![(0, 1, 2)] } else { vec![] };
        Rips2::from_parts((0..n).collect(), edges, triangles)
    }

    #[test]
    fn circle_and_triangle() {
        assert_eq!(h1(&cycle_graph(6, false)).betti1, 1);
        assert_eq!(h1(&cycle_graph(3, true)), H1Summary { betti1: 0, torsion: vec![] });
    }

    #[test]
    fn cycle_class_certificates() {
        let k = cycle_graph(6, false);
        let solver = BoundarySolver::new(k.clone());
        let z = path_vector(&k, &[0, 1, 2, 3, 4, 5, 0]).unwrap();
        match solver.cycle_class(&z).unwrap() {
            CycleClass::Nontrivial(obs) => verify_obstruction(&k, &z, &obs).unwrap(),
            other => panic!("expected nontrivial, got {other:?}"),
        }
        let zero = vec![BigInt::zero(); k.edges.len()];
        assert!(solver.cycle_class(&zero).unwrap().is_trivial());
        let open = path_vector(&k, &[0, 1, 2]).unwrap();
        assert!(matches!(solver.cycle_class(&open), Err(Error::Usage(_))));

        let tri = cycle_graph(3, true);
        let solver = BoundarySolver::new(tri.clone());
        let z = path_vector(&tri, &[0, 1, 2, 0]).unwrap();
        match solver.cycle_class(&z).unwrap() {
            CycleClass::Trivial { filling } => verify_filling(&tri, &z, &filling).unwrap(),
            other => panic!("expected trivial, got {other:?}"),
        }
    }
}
