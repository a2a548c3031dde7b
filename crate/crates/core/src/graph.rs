//! Weighted undirected graphs and their matrix representations.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math::sqrt;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {vertex} (edge #{edge})")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("duplicate edge ({u}, {v}) (edge #{edge})")]
    DuplicateEdge { edge: usize, u: usize, v: usize },
    #[error("edge ({u}, {v}) has non-positive weight {w} (edge #{edge})")]
    NonPositiveWeight { edge: usize, u: usize, v: usize, w: f64 },
    #[error("edge ({u}, {v}) has non-finite weight (edge #{edge})")]
    NonFiniteWeight { edge: usize, u: usize, v: usize },
    #[error("edge ({u}, {v}) references a vertex >= {n} (edge #{edge})")]
    IndexOutOfRange { edge: usize, u: usize, v: usize, n: usize },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("mass vector has length {got}, expected {expected}")]
    MassLength { expected: usize, got: usize },
    #[error("vertex {vertex} has non-positive or non-finite mass {mass}")]
    NonPositiveMass { vertex: usize, mass: f64 },
    #[error("vertex {0} is isolated (zero strength)")]
    IsolatedVertex(usize),
}

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// The four matrix families built from a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    Signless,
    Normalized,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 4] = [
        MatrixKind::Adjacency,
        MatrixKind::Laplacian,
        MatrixKind::Signless,
        MatrixKind::Normalized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::Signless => "signless",
            MatrixKind::Normalized => "normalized",
        }
    }
}

/// A weighted undirected simple graph on vertices `0..n` with a positive
/// mass per vertex. Masses are 1 unless the graph came out of a reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    mass: Vec<f64>,
    // sorted by neighbor index
    adj: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    /// Validates and normalizes an edge list. Edges may be given in either
    /// orientation; they are stored with `u < v`, sorted.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (idx, (a, b, w)) in edges.into_iter().enumerate() {
            if a >= n || b >= n {
                return Err(GraphError::IndexOutOfRange { edge: idx, u: a, v: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { edge: idx, vertex: a });
            }
            if !w.is_finite() {
                return Err(GraphError::NonFiniteWeight { edge: idx, u: a, v: b });
            }
            if w <= 0.0 {
                return Err(GraphError::NonPositiveWeight { edge: idx, u: a, v: b, w });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push((idx, Edge { u, v, w }));
        }
        list.sort_by_key(|(idx, e)| (e.u, e.v, *idx));
        for pair in list.windows(2) {
            let (prev, (idx, e)) = (&pair[0].1, &pair[1]);
            if prev.u == e.u && prev.v == e.v {
                return Err(GraphError::DuplicateEdge { edge: *idx, u: e.u, v: e.v });
            }
        }
        let edges: Vec<Edge> = list.into_iter().map(|(_, e)| e).collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        for row in &mut adj {
            row.sort_by_key(|&(j, _)| j);
        }
        Ok(Graph {
            n,
            edges,
            mass: vec![1.0; n],
            adj,
        })
    }

    /// Replaces the mass vector.
    pub fn with_masses(mut self, mass: Vec<f64>) -> Result<Self, GraphError> {
        if mass.len() != self.n {
            return Err(GraphError::MassLength {
                expected: self.n,
                got: mass.len(),
            });
        }
        if let Some((vertex, &m)) = mass
            .iter()
            .enumerate()
            .find(|(_, m)| !(m.is_finite() && **m > 0.0))
        {
            return Err(GraphError::NonPositiveMass { vertex, mass: m });
        }
        self.mass = mass;
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn has_unit_masses(&self) -> bool {
        self.mass.iter().all(|&m| m == 1.0)
    }

    /// Neighbors of `v` with edge weights, sorted by neighbor index.
    ///
    /// # Panics
    /// If `v >= n`.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let row = self.adj.get(u)?;
        row.binary_search_by_key(&v, |&(j, _)| j).ok().map(|i| row[i].1)
    }

    /// Weighted degree: the row sum of the adjacency matrix.
    pub fn strength(&self, v: usize) -> Result<f64, GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(self.row_sum(v))
    }

    pub fn strengths(&self) -> Vec<f64> {
        (0..self.n).map(|v| self.row_sum(v)).collect()
    }

    fn row_sum(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn adjacency(&self) -> Matrix {
        let mut a = Matrix::zeros(self.n, self.n);
        for e in &self.edges {
            a[(e.u, e.v)] = e.w;
            a[(e.v, e.u)] = e.w;
        }
        a
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> Matrix {
        self.degree_plus(-1.0)
    }

    /// `Q = D + A`.
    pub fn signless_laplacian(&self) -> Matrix {
        self.degree_plus(1.0)
    }

    fn degree_plus(&self, sign: f64) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for (v, s) in self.strengths().into_iter().enumerate() {
            m[(v, v)] = s;
        }
        for e in &self.edges {
            m[(e.u, e.v)] = sign * e.w;
            m[(e.v, e.u)] = sign * e.w;
        }
        m
    }

    /// `I - D^{-1/2} A D^{-1/2}`; every vertex needs positive strength.
    pub fn normalized_laplacian(&self) -> Result<Matrix, GraphError> {
        let d = self.strengths();
        if let Some(v) = d.iter().position(|&s| s <= 0.0) {
            return Err(GraphError::IsolatedVertex(v));
        }
        let mut m = Matrix::identity(self.n);
        for e in &self.edges {
            let x = -e.w / sqrt(d[e.u] * d[e.v]);
            m[(e.u, e.v)] = x;
            m[(e.v, e.u)] = x;
        }
        Ok(m)
    }

    pub fn matrix(&self, kind: MatrixKind) -> Result<Matrix, GraphError> {
        Ok(match kind {
            MatrixKind::Adjacency => self.adjacency(),
            MatrixKind::Laplacian => self.laplacian(),
            MatrixKind::Signless => self.signless_laplacian(),
            MatrixKind::Normalized => self.normalized_laplacian()?,
        })
    }

    /// Connected components, each sorted ascending, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &(u, _) in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.connected_components().len() == 1
    }

    /// Subgraph induced by `vertices` (original weights, unit masses).
    /// Vertex `i` of the result is `vertices[i]`.
    ///
    /// # Panics
    /// If a vertex is out of range.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.u] != usize::MAX && index[e.v] != usize::MAX)
            .map(|e| (index[e.u], index[e.v], e.w));
        Graph::new(vertices.len(), edges).expect("induced subgraph of a valid graph is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k32() -> Graph {
        Graph::new(5, (0..3).flat_map(|i| [(i, 3, 1.0), (i, 4, 1.0)])).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.strengths(), vec![1.0, 1.0]);
        assert_eq!(g.mass(), &[1.0, 1.0]);
        assert_eq!(g.laplacian(), Matrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]));
        assert_eq!(g.signless_laplacian(), Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]));
    }

    #[test]
    fn normalizes_orientation() {
        let g = Graph::new(3, [(2, 0, 1.5), (1, 0, 2.0)]).unwrap();
        assert_eq!(g.edges()[0], Edge { u: 0, v: 1, w: 2.0 });
        assert_eq!(g.edges()[1], Edge { u: 0, v: 2, w: 1.5 });
        assert_eq!(g.weight(2, 0), Some(1.5));
        assert_eq!(g.weight(1, 2), None);
    }

    #[test]
    fn construction_errors_name_the_edge() {
        assert_eq!(
            Graph::new(3, [(0, 0, 1.0)]),
            Err(GraphError::SelfLoop { edge: 0, vertex: 0 })
        );
        assert_eq!(
            Graph::new(3, [(0, 1, 1.0), (1, 0, 2.0)]),
            Err(GraphError::DuplicateEdge { edge: 1, u: 0, v: 1 })
        );
        assert_eq!(
            Graph::new(3, [(0, 1, 0.0)]),
            Err(GraphError::NonPositiveWeight { edge: 0, u: 0, v: 1, w: 0.0 })
        );
        assert_eq!(
            Graph::new(2, [(0, 2, 1.0)]),
            Err(GraphError::IndexOutOfRange { edge: 0, u: 0, v: 2, n: 2 })
        );
        assert!(matches!(
            Graph::new(2, [(0, 1, f64::NAN)]),
            Err(GraphError::NonFiniteWeight { .. })
        ));
    }

    #[test]
    fn masses_are_validated() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            g.clone().with_masses(vec![1.0]),
            Err(GraphError::MassLength { expected: 2, got: 1 })
        ));
        assert!(matches!(
            g.clone().with_masses(vec![1.0, 0.0]),
            Err(GraphError::NonPositiveMass { vertex: 1, .. })
        ));
        assert!(!g.with_masses(vec![1.0, 1.5]).unwrap().has_unit_masses());
    }

    #[test]
    fn k32_matrices() {
        let g = k32();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.strength(0).unwrap(), 2.0);
        assert_eq!(g.strength(3).unwrap(), 3.0);
        assert_eq!(g.strength(5), Err(GraphError::VertexOutOfRange { vertex: 5, n: 5 }));
        let a = g.adjacency();
        let l = g.laplacian();
        for i in 0..5 {
            for j in 0..5 {
                let bipartite = (i < 3) != (j < 3);
                assert_eq!(a[(i, j)], if bipartite { 1.0 } else { 0.0 });
            }
        }
        assert_eq!(l.diagonal(), vec![2.0, 2.0, 2.0, 3.0, 3.0]);
        let nl = g.normalized_laplacian().unwrap();
        assert!((nl[(0, 3)] + 1.0 / sqrt(6.0)).abs() < 1e-15);
        assert_eq!(nl.diagonal(), vec![1.0; 5]);
    }

    #[test]
    fn path_laplacian_is_tridiagonal() {
        let g = Graph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let l = g.laplacian();
        assert_eq!(l.diagonal(), vec![1.0, 2.0, 2.0, 1.0]);
        assert_eq!(l[(0, 2)], 0.0);
        assert_eq!(l[(1, 2)], -1.0);
    }

    #[test]
    fn empty_graph() {
        let g = Graph::new(3, []).unwrap();
        assert_eq!(g.adjacency(), Matrix::zeros(3, 3));
        assert_eq!(g.signless_laplacian(), Matrix::zeros(3, 3));
        assert_eq!(g.strength(1).unwrap(), 0.0);
        assert_eq!(g.normalized_laplacian(), Err(GraphError::IsolatedVertex(0)));
        assert_eq!(g.connected_components().len(), 3);
    }

    #[test]
    fn single_edge_normalized_ignores_weight() {
        let g = Graph::new(2, [(0, 1, 7.25)]).unwrap();
        assert_eq!(
            g.normalized_laplacian().unwrap(),
            Matrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]])
        );
    }

    #[test]
    fn components() {
        assert_eq!(k32().connected_components(), vec![vec![0, 1, 2, 3, 4]]);
        let two = Graph::new(4, [(0, 2, 1.0), (1, 3, 1.0)]).unwrap();
        assert_eq!(two.connected_components(), vec![vec![0, 2], vec![1, 3]]);
        let one = Graph::new(1, []).unwrap();
        assert_eq!(one.connected_components(), vec![vec![0]]);
        assert!(one.is_connected());
    }

    #[test]
    fn induced() {
        let g = k32();
        let sub = g.induced_subgraph(&[0, 3, 4]);
        assert_eq!(sub.n(), 3);
        assert_eq!(sub.edge_count(), 2);
        assert_eq!(sub.weight(0, 2), Some(1.0));
    }
}
