//! The networked input-output model.
//!
//! `n` agents (economies) each run `d` industries. An edge `(i, j)` means
//! agent `i` imports from agent `j`; it carries a scalar weight `w_ij` and a
//! `d×d` coefficient matrix `A_ij` whose entry `(p, q)` is the consumption of
//! industry `q` of agent `j` by industry `p` of agent `i`.
//!
//! Internally every index is 0-based; the lifted position of industry `p` of
//! agent `i` is `i·d + p`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{graph_from_matrix, is_primitive_graph, root_report, Digraph};
use crate::matrix::{classify_columns, leading_principal_minors, Matrix, Vector, PIVOT_THRESHOLD};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub importer: usize,
    pub supplier: usize,
    pub weight: f64,
    pub matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomyNetwork {
    agents: usize,
    industries: usize,
    edges: Vec<Edge>,
    demand: Vector,
    initial: Vector,
    labels: Option<Vec<String>>,
}

impl EconomyNetwork {
    /// Checks the structural invariants: index ranges, one edge per ordered
    /// pair, `d×d` matrices with entries in `[0, 1]`, weights in `[0, 1]` and
    /// nonnegative vectors of length `n·d`. Column sums and the column sums
    /// of the weight matrix are left to [`validate`].
    ///
    /// Missing demand defaults to zero, a missing initial state to the
    /// uniform vector of total mass one.
    pub fn new(
        agents: usize,
        industries: usize,
        edges: Vec<Edge>,
        demand: Option<Vector>,
        initial: Option<Vector>,
    ) -> Result<Self> {
        if agents == 0 {
            return Err(Error::dims("agent count", 1, 0));
        }
        if industries == 0 {
            return Err(Error::dims("industry count", 1, 0));
        }
        let dim = agents * industries;
        let mut seen = BTreeSet::new();
        for (k, e) in edges.iter().enumerate() {
            if e.importer >= agents || e.supplier >= agents {
                return Err(Error::dims(
                    format!("edge {k} endpoint"),
                    agents,
                    e.importer.max(e.supplier) + 1,
                ));
            }
            if !seen.insert((e.importer, e.supplier)) {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate edge ({}, {})",
                    e.importer + 1,
                    e.supplier + 1
                )));
            }
            if e.matrix.rows() != industries || e.matrix.cols() != industries {
                return Err(Error::dims(
                    format!("edge ({}, {}) matrix", e.importer + 1, e.supplier + 1),
                    industries,
                    if e.matrix.rows() != industries {
                        e.matrix.rows()
                    } else {
                        e.matrix.cols()
                    },
                ));
            }
            if !(0.0..=1.0).contains(&e.weight) {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({}, {}) weight {} outside [0, 1]",
                    e.importer + 1,
                    e.supplier + 1,
                    e.weight
                )));
            }
            e.matrix.require_nonnegative(0.0)?;
            if e.matrix.as_slice().iter().any(|&v| v > 1.0) {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({}, {}) has a coefficient above 1",
                    e.importer + 1,
                    e.supplier + 1
                )));
            }
        }
        let demand = demand.unwrap_or_else(|| Vector::zeros(dim));
        let initial = initial.unwrap_or_else(|| Vector::uniform(dim));
        check_state("demand", dim, &demand)?;
        check_state("initial state", dim, &initial)?;
        Ok(EconomyNetwork {
            agents,
            industries,
            edges,
            demand,
            initial,
            labels: None,
        })
    }

    /// Every positive entry of `w` becomes an edge carrying the same matrix.
    pub fn from_weights(
        w: &Matrix,
        a: &Matrix,
        demand: Option<Vector>,
        initial: Option<Vector>,
    ) -> Result<Self> {
        w.require_square()?;
        let n = w.rows();
        let edges = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| w[(i, j)] > 0.0)
            .map(|(i, j)| Edge {
                importer: i,
                supplier: j,
                weight: w[(i, j)],
                matrix: a.clone(),
            })
            .collect();
        EconomyNetwork::new(n, a.rows(), edges, demand, initial)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.agents {
            return Err(Error::dims("agent labels", self.agents, labels.len()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn industries(&self) -> usize {
        self.industries
    }

    pub fn dim(&self) -> usize {
        self.agents * self.industries
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, importer: usize, supplier: usize) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| e.importer == importer && e.supplier == supplier)
    }

    pub fn demand(&self) -> &Vector {
        &self.demand
    }

    pub fn initial_state(&self) -> &Vector {
        &self.initial
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_demand(mut self, demand: Vector) -> Result<Self> {
        check_state("demand", self.dim(), &demand)?;
        self.demand = demand;
        Ok(self)
    }

    pub fn with_initial_state(mut self, initial: Vector) -> Result<Self> {
        check_state("initial state", self.dim(), &initial)?;
        self.initial = initial;
        Ok(self)
    }

    /// The scalar weights `W = [w_ij]`.
    pub fn weight_matrix(&self) -> Matrix {
        let mut w = Matrix::zeros(self.agents, self.agents);
        for e in &self.edges {
            w[(e.importer, e.supplier)] = e.weight;
        }
        w
    }

    /// Agent-level digraph; edges with zero weight are dropped.
    pub fn agent_graph(&self) -> Digraph {
        graph_from_matrix(&self.weight_matrix(), 0.0).expect("weights are nonnegative")
    }

    /// 0-based lifted index of industry `p` of agent `i`.
    pub fn index_of(&self, agent: usize, industry: usize) -> usize {
        agent * self.industries + industry
    }

    /// The lifted indices of every industry of the given agents.
    pub fn lifted_indices(&self, agents: &BTreeSet<usize>) -> BTreeSet<usize> {
        agents
            .iter()
            .flat_map(|&i| (0..self.industries).map(move |p| (i, p)))
            .map(|(i, p)| self.index_of(i, p))
            .collect()
    }
}

fn check_state(name: &str, dim: usize, v: &Vector) -> Result<()> {
    if v.len() != dim {
        return Err(Error::dims(name, dim, v.len()));
    }
    match v.iter().position(|&x| x < 0.0) {
        Some(k) => Err(Error::NegativeEntry {
            row: k,
            col: 0,
            value: v[k],
        }),
        None => Ok(()),
    }
}

/// The assembled `dn×dn` system `x = Ā·x + y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedSystem {
    pub a_bar: Matrix,
    pub y: Vector,
    pub agents: usize,
    pub industries: usize,
}

impl LiftedSystem {
    /// Wraps a bare system matrix as a single-agent system.
    pub fn from_parts(a_bar: Matrix, y: Vector) -> Result<Self> {
        a_bar.require_square()?;
        if y.len() != a_bar.rows() {
            return Err(Error::dims("demand", a_bar.rows(), y.len()));
        }
        let industries = a_bar.rows();
        Ok(LiftedSystem {
            a_bar,
            y,
            agents: 1,
            industries,
        })
    }

    pub fn dim(&self) -> usize {
        self.a_bar.rows()
    }

    pub fn index_of(&self, agent: usize, industry: usize) -> usize {
        agent * self.industries + industry
    }

    /// Block of `x` belonging to `agent`.
    pub fn agent_block<'a>(&self, x: &'a [f64], agent: usize) -> &'a [f64] {
        &x[agent * self.industries..(agent + 1) * self.industries]
    }
}

/// Block `(i, j)` of `Ā` is `w_ij·A_ij`; absent edges give zero blocks.
pub fn build_lifted(net: &EconomyNetwork) -> Result<LiftedSystem> {
    let d = net.industries();
    let mut a_bar = Matrix::zeros(net.dim(), net.dim());
    for e in net.edges() {
        if e.matrix.rows() != d || e.matrix.cols() != d {
            return Err(Error::dims("edge matrix", d, e.matrix.rows()));
        }
        for p in 0..d {
            for q in 0..d {
                a_bar[(e.importer * d + p, e.supplier * d + q)] = e.weight * e.matrix[(p, q)];
            }
        }
    }
    Ok(LiftedSystem {
        a_bar,
        y: net.demand().clone(),
        agents: net.agents(),
        industries: d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelClass {
    Closed,
    Open,
    Invalid,
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelClass::Closed => "Closed",
            ModelClass::Open => "Open",
            ModelClass::Invalid => "Invalid",
        })
    }
}

/// Per-clause verdicts on a network. Agent indices in `root_set` are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub w_column_stochastic: bool,
    pub has_out_root: bool,
    pub root_subgraph_strongly_connected: bool,
    pub root_subgraph_aperiodic: bool,
    pub all_edge_matrices_primitive: bool,
    pub all_edge_column_sums_at_most_one: bool,
    pub all_edge_matrices_column_stochastic: bool,
    pub demand_nonzero: bool,
    pub model_class: ModelClass,
    pub root_set: BTreeSet<usize>,
    pub substochastic_edge_in_root_subgraph: bool,
    pub per_agent_substochastic_supplier: bool,
    /// The graph of `Āᵀ` has exactly the root agents' industries as
    /// in-roots, and they induce a strongly connected aperiodic subgraph.
    /// Informational: the agent-level assumptions do not always imply it.
    pub lifted_roots_consistent: bool,
}

impl ValidationReport {
    /// Both modelling assumptions hold, whatever the model class.
    pub fn assumptions_hold(&self) -> bool {
        self.w_column_stochastic
            && self.has_out_root
            && self.root_subgraph_strongly_connected
            && self.root_subgraph_aperiodic
            && self.all_edge_matrices_primitive
            && self.all_edge_column_sums_at_most_one
    }

    /// First failing assumption as an error.
    pub fn check_assumptions(&self) -> Result<()> {
        if !self.has_out_root {
            return Err(Error::NoOutRoot);
        }
        let clauses = [
            (
                self.w_column_stochastic,
                "weight matrix is not column-stochastic",
            ),
            (
                self.root_subgraph_strongly_connected,
                "out-root subgraph is not strongly connected",
            ),
            (
                self.root_subgraph_aperiodic,
                "out-root subgraph is periodic",
            ),
            (
                self.all_edge_matrices_primitive,
                "an edge matrix is not primitive",
            ),
            (
                self.all_edge_column_sums_at_most_one,
                "an edge matrix has a column sum above one",
            ),
        ];
        match clauses.iter().find(|(ok, _)| !ok) {
            Some((_, what)) => Err(Error::AssumptionViolated(what)),
            None => Ok(()),
        }
    }

    /// Assumptions hold and the network is a closed or an open model.
    pub fn check_valid(&self) -> Result<ModelClass> {
        self.check_assumptions()?;
        match self.model_class {
            ModelClass::Invalid => Err(Error::AssumptionViolated(
                "network is neither a closed nor an open model",
            )),
            class => Ok(class),
        }
    }
}

pub fn validate(net: &EconomyNetwork, tol: f64) -> Result<ValidationReport> {
    let d = net.industries();
    for e in net.edges() {
        if e.matrix.rows() != d || e.matrix.cols() != d {
            return Err(Error::dims("edge matrix", d, e.matrix.rows()));
        }
    }
    if net.demand().len() != net.dim() {
        return Err(Error::dims("demand", net.dim(), net.demand().len()));
    }

    let w = net.weight_matrix();
    let w_column_stochastic = w.column_sums().iter().all(|s| (s - 1.0).abs() <= tol);

    let roots = root_report(&net.agent_graph());
    let root_set = roots.out_roots.clone();
    let has_out_root = !root_set.is_empty();

    let classes = net
        .edges()
        .iter()
        .map(|e| classify_columns(&e.matrix, tol))
        .collect::<Result<Vec<_>>>()?;
    let all_edge_matrices_primitive = net
        .edges()
        .iter()
        .map(|e| is_primitive_graph(&e.matrix))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|p| p);
    let all_edge_column_sums_at_most_one = classes.iter().all(|c| c.columns_at_most_one());
    let all_edge_matrices_column_stochastic = classes.iter().all(|c| c.is_stochastic());
    let demand_nonzero = net.demand().iter().any(|&v| v != 0.0);

    let substochastic_edge_in_root_subgraph = net.edges().iter().zip(&classes).any(|(e, c)| {
        e.weight > 0.0
            && root_set.contains(&e.importer)
            && root_set.contains(&e.supplier)
            && c.is_substochastic()
    });
    let per_agent_substochastic_supplier = (0..net.agents()).all(|i| {
        net.edges()
            .iter()
            .zip(&classes)
            .any(|(e, c)| e.importer == i && e.weight > 0.0 && c.all_columns_deficient())
    });

    let lifted_roots_consistent = has_out_root && {
        let lifted = graph_from_matrix(&build_lifted(net)?.a_bar.transpose(), 0.0)?;
        let r = root_report(&lifted);
        r.in_roots == net.lifted_indices(&root_set)
            && r.in_root_component_strongly_connected
            && r.in_root_component_aperiodic
    };

    let mut report = ValidationReport {
        w_column_stochastic,
        has_out_root,
        root_subgraph_strongly_connected: roots.root_component_strongly_connected,
        root_subgraph_aperiodic: roots.root_component_aperiodic,
        all_edge_matrices_primitive,
        all_edge_column_sums_at_most_one,
        all_edge_matrices_column_stochastic,
        demand_nonzero,
        model_class: ModelClass::Invalid,
        root_set,
        substochastic_edge_in_root_subgraph,
        per_agent_substochastic_supplier,
        lifted_roots_consistent,
    };
    report.model_class = if !report.assumptions_hold() {
        ModelClass::Invalid
    } else if all_edge_matrices_column_stochastic && !demand_nonzero {
        ModelClass::Closed
    } else if demand_nonzero && substochastic_edge_in_root_subgraph {
        ModelClass::Open
    } else {
        ModelClass::Invalid
    };
    Ok(report)
}

/// Replaces every edge matrix `A` by `(1 − m)·A + (m/d)·J`, with `J` the
/// all-ones matrix. Column-stochastic inputs stay column-stochastic and
/// become entrywise positive.
pub fn regularize_pagerank(net: &EconomyNetwork, damping: f64) -> Result<EconomyNetwork> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::BadDamping(damping));
    }
    let d = net.industries();
    let teleport = Matrix::ones(d, d);
    let mut out = net.clone();
    for e in &mut out.edges {
        e.matrix = e.matrix.axpby(1.0 - damping, &teleport, damping / d as f64);
    }
    Ok(out)
}

/// Hawkins–Simon test on `I − Ā`: every leading principal minor positive.
/// Minor `k` must exceed `1e-12·(max |entry of the k×k block|)^k`.
pub fn hawkins_simon(sys: &LiftedSystem) -> bool {
    let n = sys.a_bar.identity_minus().expect("lifted matrix is square");
    let minors = leading_principal_minors(&n).expect("square");
    minors.iter().enumerate().all(|(k, &minor)| {
        let scale = n.leading_block(k + 1).max_abs();
        minor > PIVOT_THRESHOLD * scale.powi(k as i32 + 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matrix::STOCHASTIC_TOL;

    fn edge(i: usize, j: usize, w: f64, a: &[&[f64]]) -> Edge {
        Edge {
            importer: i,
            supplier: j,
            weight: w,
            matrix: Matrix::from_rows(a).unwrap(),
        }
    }

    #[test]
    fn construction_rejects_structural_errors() {
        let a: &[&[f64]] = &[&[1.0]];
        assert!(EconomyNetwork::new(1, 1, vec![edge(0, 1, 1.0, a)], None, None).is_err());
        assert!(EconomyNetwork::new(
            2,
            1,
            vec![edge(0, 1, 1.0, a), edge(0, 1, 0.5, a)],
            None,
            None
        )
        .is_err());
        assert!(matches!(
            EconomyNetwork::new(1, 2, vec![edge(0, 0, 1.0, a)], None, None),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(EconomyNetwork::new(1, 1, vec![edge(0, 0, 1.5, a)], None, None).is_err());
        assert!(EconomyNetwork::new(1, 1, vec![edge(0, 0, 1.0, &[&[-0.5]])], None, None).is_err());
        let bad_demand = Vector::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            EconomyNetwork::new(1, 1, vec![], Some(bad_demand), None),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn defaults() {
        let net = EconomyNetwork::new(2, 2, vec![], None, None).unwrap();
        assert_eq!(net.demand().as_slice(), &[0.0; 4]);
        assert_eq!(net.initial_state().as_slice(), &[0.25; 4]);
    }

    #[test]
    fn validate_closed_example() {
        let r = validate(&fixtures::closed_five_agent(), STOCHASTIC_TOL).unwrap();
        assert_eq!(r.model_class, ModelClass::Closed);
        assert_eq!(r.root_set, [0, 1, 2].into_iter().collect());
        assert!(r.assumptions_hold());
        assert!(r.all_edge_matrices_column_stochastic);
        assert!(!r.demand_nonzero);
    }

    #[test]
    fn validate_open_example() {
        let r = validate(&fixtures::open_five_agent(), STOCHASTIC_TOL).unwrap();
        assert_eq!(r.model_class, ModelClass::Open);
        assert!(r.substochastic_edge_in_root_subgraph);
        assert!(!r.per_agent_substochastic_supplier);
    }

    #[test]
    fn validate_isolated_agents() {
        let net = EconomyNetwork::new(2, 1, vec![], None, None).unwrap();
        let r = validate(&net, STOCHASTIC_TOL).unwrap();
        assert_eq!(r.model_class, ModelClass::Invalid);
        assert!(!r.has_out_root);
        assert_eq!(r.check_valid(), Err(Error::NoOutRoot));
    }

    #[test]
    fn validate_demand_on_stochastic_network_is_unclassified() {
        let r = validate(&fixtures::stochastic_with_demand(), STOCHASTIC_TOL).unwrap();
        assert!(r.assumptions_hold());
        assert_eq!(r.model_class, ModelClass::Invalid);
        assert!(r.check_assumptions().is_ok());
        assert!(matches!(r.check_valid(), Err(Error::AssumptionViolated(_))));
    }

    #[test]
    fn lifted_roots_can_split_despite_valid_agents() {
        let net = fixtures::split_lifted_roots();
        let r = validate(&net, STOCHASTIC_TOL).unwrap();
        assert_eq!(r.model_class, ModelClass::Closed);
        assert_eq!(r.root_set, [0, 1, 2].into_iter().collect());
        assert!(!r.lifted_roots_consistent);
    }

    #[test]
    fn lifted_roots_consistent_on_examples() {
        for net in [
            fixtures::closed_five_agent(),
            fixtures::open_five_agent(),
            fixtures::two_agent(),
        ] {
            assert!(
                validate(&net, STOCHASTIC_TOL)
                    .unwrap()
                    .lifted_roots_consistent
            );
        }
    }

    #[test]
    fn validate_flags_nonprimitive_edge() {
        let perm: &[&[f64]] = &[&[0.0, 1.0], &[1.0, 0.0]];
        let net = EconomyNetwork::new(1, 2, vec![edge(0, 0, 1.0, perm)], None, None).unwrap();
        let r = validate(&net, STOCHASTIC_TOL).unwrap();
        assert!(!r.all_edge_matrices_primitive);
        assert_eq!(r.model_class, ModelClass::Invalid);
    }

    #[test]
    fn lifted_single_block() {
        let net = fixtures::single_economy(&fixtures::table_one());
        let sys = build_lifted(&net).unwrap();
        assert_eq!(sys.a_bar, fixtures::table_one());
    }

    #[test]
    fn lifted_closed_example_is_column_stochastic() {
        let sys = build_lifted(&fixtures::closed_five_agent()).unwrap();
        assert_eq!(sys.dim(), 15);
        for s in sys.a_bar.column_sums() {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lifted_block_placement() {
        let a12: &[&[f64]] = &[&[0.3, 0.6], &[0.7, 0.4]];
        let net = fixtures::two_agent();
        let sys = build_lifted(&net).unwrap();
        for p in 0..2 {
            for q in 0..2 {
                assert_eq!(sys.a_bar[(p, 2 + q)], 0.5 * a12[p][q]);
            }
        }
    }

    #[test]
    fn pagerank_regularization() {
        let net = fixtures::single_economy(&Matrix::identity(2));
        let b = regularize_pagerank(&net, 0.5).unwrap();
        let want = Matrix::from_rows(&[[0.75, 0.25], [0.25, 0.75]]).unwrap();
        assert_eq!(b.edges()[0].matrix, want);

        let tiny = regularize_pagerank(&net, 1e-9).unwrap();
        let diff = tiny.edges()[0]
            .matrix
            .axpby(1.0, &Matrix::identity(2), -1.0);
        assert!(diff.max_abs() <= 1e-8);

        let reg = regularize_pagerank(&fixtures::closed_five_agent(), 0.15).unwrap();
        for e in reg.edges() {
            for s in e.matrix.column_sums() {
                assert!((s - 1.0).abs() < 1e-15);
            }
            assert!(e.matrix.as_slice().iter().all(|&v| v > 0.0));
        }
        for m in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(
                regularize_pagerank(&net, m),
                Err(Error::BadDamping(_))
            ));
        }
    }

    #[test]
    fn hawkins_simon_small_cases() {
        let zero = LiftedSystem::from_parts(Matrix::zeros(3, 3), Vector::zeros(3)).unwrap();
        assert!(hawkins_simon(&zero));
        let ident = LiftedSystem::from_parts(Matrix::identity(3), Vector::zeros(3)).unwrap();
        assert!(!hawkins_simon(&ident));
        let a = Matrix::from_rows(&[[0.4, 0.2], [0.3, 0.5]]).unwrap();
        let sys = LiftedSystem::from_parts(a, Vector::zeros(2)).unwrap();
        assert!(hawkins_simon(&sys));
    }

    #[test]
    fn validate_is_pure() {
        let net = fixtures::open_five_agent();
        assert_eq!(
            validate(&net, STOCHASTIC_TOL).unwrap(),
            validate(&net, STOCHASTIC_TOL).unwrap()
        );
    }
}
