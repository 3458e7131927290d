//! Seeded generators of random matrices, digraphs and networks that satisfy
//! (or deliberately violate) the modelling assumptions. Used by the property
//! and acceptance tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::economy::{EconomyNetwork, Edge};
use crate::graph::{is_primitive_graph, Digraph};
use crate::matrix::{Matrix, Vector};

/// Column-normalized matrix with entries drawn from `[0.05, 1)`.
pub fn positive_column_stochastic<R: Rng>(rng: &mut R, d: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = rng.gen_range(0.05..1.0);
        }
    }
    normalize_columns(m)
}

/// Column-stochastic matrix with a random zero pattern that is still
/// primitive. Falls back to a positive matrix after a few rejected draws.
pub fn sparse_primitive_column_stochastic<R: Rng>(rng: &mut R, d: usize) -> Matrix {
    for _ in 0..64 {
        let mut m = Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                if rng.gen_bool(0.5) {
                    m[(i, j)] = rng.gen_range(0.05..1.0);
                }
            }
        }
        if m.column_sums().iter().all(|&s| s > 0.0) && is_primitive_graph(&m).unwrap() {
            return normalize_columns(m);
        }
    }
    positive_column_stochastic(rng, d)
}

fn normalize_columns(mut m: Matrix) -> Matrix {
    let sums = m.column_sums();
    for i in 0..m.rows() {
        for (j, s) in sums.iter().enumerate() {
            m[(i, j)] /= s;
        }
    }
    m
}

/// Random 0/1 matrix.
pub fn boolean_pattern<R: Rng>(rng: &mut R, n: usize, density: f64) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                m[(i, j)] = 1.0;
            }
        }
    }
    m
}

pub fn digraph<R: Rng>(rng: &mut R, n: usize, density: f64) -> Digraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    Digraph::new(n, edges).unwrap()
}

/// Strongly connected digraph: a Hamiltonian cycle plus random chords.
pub fn strongly_connected_digraph<R: Rng>(rng: &mut R, n: usize, chords: usize) -> Digraph {
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for _ in 0..chords {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    Digraph::new(n, edges).unwrap()
}

/// Random weight pattern satisfying the root assumptions: agents
/// `0..roots` form a strongly connected aperiodic root component, the rest
/// hang off it acyclically. Weights are column-stochastic.
pub fn weight_matrix<R: Rng>(rng: &mut R, n: usize, roots: usize) -> Matrix {
    assert!(roots >= 1 && roots <= n);
    let mut pattern = vec![vec![false; n]; n];
    // ring through the roots; a self-loop on agent 0 breaks periodicity
    for r in 0..roots {
        pattern[r][(r + 1) % roots] = true;
    }
    pattern[0][0] = true;
    for i in 0..roots {
        for j in 0..roots {
            if rng.gen_bool(0.3) {
                pattern[i][j] = true;
            }
        }
    }
    // a non-root agent k is imported from by some earlier agent, and imports
    // only from later non-roots, so it never reaches back into the roots
    for k in roots..n {
        let importer = rng.gen_range(0..k);
        pattern[importer][k] = true;
        for i in 0..k {
            if rng.gen_bool(0.25) {
                pattern[i][k] = true;
            }
        }
        if rng.gen_bool(0.3) {
            pattern[k][k] = true;
        }
    }
    let mut w = Matrix::zeros(n, n);
    for j in 0..n {
        let weights: Vec<f64> = (0..n)
            .map(|i| {
                if pattern[i][j] {
                    rng.gen_range(0.1..1.0)
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        for i in 0..n {
            w[(i, j)] = weights[i] / total;
        }
    }
    w
}

pub fn positive_vector<R: Rng>(rng: &mut R, len: usize) -> Vector {
    Vector::new((0..len).map(|_| rng.gen_range(0.1..2.0)).collect()).unwrap()
}

/// Shape and agent count of a random network.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub agents: usize,
    pub industries: usize,
    pub roots: usize,
}

pub fn shape<R: Rng>(rng: &mut R, max_agents: usize, max_industries: usize) -> Shape {
    let agents = rng.gen_range(1..=max_agents);
    Shape {
        agents,
        industries: rng.gen_range(1..=max_industries),
        roots: rng.gen_range(1..=agents),
    }
}

/// Closed-model network: column-stochastic primitive edge matrices, zero
/// demand, random positive initial state. `sparse` draws edge matrices
/// with zero patterns.
pub fn closed_network<R: Rng>(rng: &mut R, shape: Shape, sparse: bool) -> EconomyNetwork {
    let w = weight_matrix(rng, shape.agents, shape.roots);
    let d = shape.industries;
    let mut edges = Vec::new();
    for i in 0..shape.agents {
        for j in 0..shape.agents {
            if w[(i, j)] > 0.0 {
                let matrix = if sparse {
                    sparse_primitive_column_stochastic(rng, d)
                } else {
                    positive_column_stochastic(rng, d)
                };
                edges.push(Edge {
                    importer: i,
                    supplier: j,
                    weight: w[(i, j)],
                    matrix,
                });
            }
        }
    }
    let x0 = positive_vector(rng, shape.agents * d);
    EconomyNetwork::new(shape.agents, d, edges, None, Some(x0)).unwrap()
}

/// Closed network whose edges all carry one positive matrix.
pub fn uniform_matrix_network<R: Rng>(
    rng: &mut R,
    shape: Shape,
) -> (Matrix, Matrix, EconomyNetwork) {
    let w = weight_matrix(rng, shape.agents, shape.roots);
    let a = positive_column_stochastic(rng, shape.industries);
    let x0 = positive_vector(rng, shape.agents * shape.industries);
    let net = EconomyNetwork::from_weights(&w, &a, None, Some(x0)).unwrap();
    (w, a, net)
}

/// Open-model network: a closed network with one root-subgraph edge matrix
/// scaled below column-stochastic and a nonzero nonnegative demand.
pub fn open_network<R: Rng>(rng: &mut R, shape: Shape) -> EconomyNetwork {
    let closed = closed_network(rng, shape, false);
    let n = closed.agents();
    let d = closed.industries();
    let mut edges = closed.edges().to_vec();
    let root_edges: Vec<usize> = edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.importer < shape.roots && e.supplier < shape.roots)
        .map(|(k, _)| k)
        .collect();
    let k = *root_edges.choose(rng).expect("the root ring has edges");
    let factor = rng.gen_range(0.3..0.9);
    edges[k].matrix = edges[k].matrix.scaled(factor);
    let mut y: Vec<f64> = (0..n * d)
        .map(|_| {
            if rng.gen_bool(0.5) {
                rng.gen_range(0.0..1.0)
            } else {
                0.0
            }
        })
        .collect();
    y[rng.gen_range(0..n * d)] = rng.gen_range(0.1..1.0);
    EconomyNetwork::new(n, d, edges, Some(Vector::new(y).unwrap()), None).unwrap()
}

/// Nonnegative `n×n` matrix with every column sum in `(0.2, 0.95)` when
/// `productive`, or every column sum in `(1.05, 2)` otherwise.
pub fn scaled_nonnegative<R: Rng>(rng: &mut R, n: usize, productive: bool) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        let target = if productive {
            rng.gen_range(0.2..0.95)
        } else {
            rng.gen_range(1.05..2.0)
        };
        let mut col: Vec<f64> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.7) {
                    rng.gen_range(0.0..1.0)
                } else {
                    0.0
                }
            })
            .collect();
        col[rng.gen_range(0..n)] += 0.1;
        let s: f64 = col.iter().sum();
        for i in 0..n {
            m[(i, j)] = col[i] * target / s;
        }
    }
    m
}
