//! Reference networks: the three-industry table, the five-agent closed and
//! open examples, and a small two-agent network with distinct matrices.

use crate::economy::{EconomyNetwork, Edge};
use crate::matrix::{Matrix, Vector};

/// Farming, housing, garment coefficients of a single primitive society.
pub fn table_one() -> Matrix {
    Matrix::from_rows(&[[0.4, 0.2, 0.3], [0.2, 0.6, 0.5], [0.4, 0.2, 0.2]]).unwrap()
}

/// Self-loop matrix of agent 1 in the closed five-agent example.
pub fn closed_self_matrix() -> Matrix {
    Matrix::from_rows(&[[0.4, 0.2, 0.3], [0.2, 0.6, 0.4], [0.4, 0.2, 0.3]]).unwrap()
}

/// Matrix shared by every other edge of the five-agent example.
pub fn shared_supplier_matrix() -> Matrix {
    Matrix::from_rows(&[[0.6, 0.2, 0.2], [0.2, 0.4, 0.1], [0.2, 0.4, 0.7]]).unwrap()
}

/// Substochastic self-loop matrix of agent 1 in the open example
/// (column sums 0.5, 0.7, 0.9).
pub fn open_self_matrix() -> Matrix {
    Matrix::from_rows(&[[0.2, 0.2, 0.3], [0.2, 0.4, 0.5], [0.1, 0.1, 0.1]]).unwrap()
}

/// `(importer, supplier, weight)`, 1-based, of the five-agent example.
pub const FIVE_AGENT_WEIGHTS: [(usize, usize, f64); 7] = [
    (1, 1, 0.5),
    (2, 1, 0.5),
    (2, 5, 0.5),
    (4, 5, 0.5),
    (1, 3, 1.0),
    (3, 2, 1.0),
    (3, 4, 1.0),
];

fn five_agent(self_matrix: Matrix, demand: Option<Vector>) -> EconomyNetwork {
    let edges = FIVE_AGENT_WEIGHTS
        .iter()
        .map(|&(i, j, w)| Edge {
            importer: i - 1,
            supplier: j - 1,
            weight: w,
            matrix: if (i, j) == (1, 1) {
                self_matrix.clone()
            } else {
                shared_supplier_matrix()
            },
        })
        .collect();
    EconomyNetwork::new(5, 3, edges, demand, None).unwrap()
}

/// Closed model: column-stochastic matrices, zero demand, uniform start.
pub fn closed_five_agent() -> EconomyNetwork {
    five_agent(closed_self_matrix(), None)
}

/// Demand `0.5·[1,1,1, 0×9, 1,0,0]`: every industry of agent 1 and the
/// first industry of agent 5.
pub fn open_demand() -> Vector {
    let mut y = vec![0.0; 15];
    y[..3].fill(0.5);
    y[12] = 0.5;
    Vector::new(y).unwrap()
}

/// Open model: agent 1's self-loop is substochastic, demand nonzero.
pub fn open_five_agent() -> EconomyNetwork {
    five_agent(open_self_matrix(), Some(open_demand()))
}

/// Closed-model matrices with the open-model demand: the iteration has no
/// finite limit.
pub fn stochastic_with_demand() -> EconomyNetwork {
    five_agent(closed_self_matrix(), Some(open_demand()))
}

/// One agent whose only edge is a self-loop of weight one.
pub fn single_economy(a: &Matrix) -> EconomyNetwork {
    let edge = Edge {
        importer: 0,
        supplier: 0,
        weight: 1.0,
        matrix: a.clone(),
    };
    EconomyNetwork::new(1, a.rows(), vec![edge], None, None).unwrap()
}

/// Two agents, two industries, four distinct positive column-stochastic
/// matrices, every weight 0.5.
pub fn two_agent() -> EconomyNetwork {
    let mats: [[[f64; 2]; 2]; 4] = [
        [[0.5, 0.2], [0.5, 0.8]],
        [[0.3, 0.6], [0.7, 0.4]],
        [[0.9, 0.5], [0.1, 0.5]],
        [[0.6, 0.3], [0.4, 0.7]],
    ];
    let edges = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .zip(mats)
        .map(|((i, j), m)| Edge {
            importer: i,
            supplier: j,
            weight: 0.5,
            matrix: Matrix::from_rows(&m).unwrap(),
        })
        .collect();
    let x0 = Vector::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    EconomyNetwork::new(2, 2, edges, None, Some(x0)).unwrap()
}

/// Three agents whose root cycles have lengths 3 and 2 with no self-loop,
/// and whose edge matrices are sparse but primitive. The agent-level
/// assumptions hold and the network is closed, yet the lifted graph's
/// root industries split into two strongly connected components.
pub fn split_lifted_roots() -> EconomyNetwork {
    let pattern = |rows: [[f64; 3]; 3]| {
        let m = Matrix::from_rows(&rows).unwrap();
        let sums = m.column_sums();
        let mut out = m.clone();
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = m[(i, j)] / sums[j];
            }
        }
        out
    };
    let edges = vec![
        Edge {
            importer: 0,
            supplier: 1,
            weight: 0.5,
            matrix: pattern([[1., 1., 0.], [1., 0., 1.], [1., 0., 0.]]),
        },
        Edge {
            importer: 1,
            supplier: 2,
            weight: 1.0,
            matrix: pattern([[0., 1., 1.], [0., 1., 1.], [1., 0., 0.]]),
        },
        Edge {
            importer: 2,
            supplier: 0,
            weight: 1.0,
            matrix: pattern([[1., 1., 0.], [0., 0., 1.], [1., 0., 1.]]),
        },
        Edge {
            importer: 2,
            supplier: 1,
            weight: 0.5,
            matrix: pattern([[0., 1., 1.], [1., 1., 0.], [0., 1., 0.]]),
        },
    ];
    EconomyNetwork::new(3, 3, edges, None, None).unwrap()
}
