use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use mwio_core::dynamics::fixed_point_residual;
use mwio_core::matrix::STOCHASTIC_TOL;
use mwio_core::{
    build_lifted, closed_equilibrium_predict, dominant_eigenpair, open_equilibrium,
    regularize_pagerank, simulate as run_simulation, spectral_radius, validate as run_validation,
    EconomyNetwork, EquilibriumMethod, EquilibriumResult, ModelClass, SimulationOptions,
    ValidationReport, Vector,
};
use serde::Serialize;

use crate::{format, trace, CliError, Method};

pub fn load_network(path: &Path) -> Result<EconomyNetwork, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })?;
    Ok(format::parse_network(&text)?)
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn coordinate_names(net: &EconomyNetwork) -> Vec<String> {
    trace::header(net.agents(), net.industries()).split_off(1)
}

fn write_vector(out: &mut dyn Write, names: &[String], x: &[f64]) -> Result<(), CliError> {
    for (name, v) in names.iter().zip(x) {
        writeln!(out, "  {name:<8} {v:.10}")?;
    }
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct ValidateJson {
    model_class: ModelClass,
    out_roots: Vec<usize>,
    w_column_stochastic: bool,
    has_out_root: bool,
    root_subgraph_strongly_connected: bool,
    root_subgraph_aperiodic: bool,
    all_edge_matrices_primitive: bool,
    all_edge_column_sums_at_most_one: bool,
    all_edge_matrices_column_stochastic: bool,
    demand_nonzero: bool,
    substochastic_edge_in_root_subgraph: bool,
    per_agent_substochastic_supplier: bool,
    lifted_roots_consistent: bool,
}

impl From<&ValidationReport> for ValidateJson {
    fn from(r: &ValidationReport) -> Self {
        ValidateJson {
            model_class: r.model_class,
            out_roots: r.root_set.iter().map(|i| i + 1).collect(),
            w_column_stochastic: r.w_column_stochastic,
            has_out_root: r.has_out_root,
            root_subgraph_strongly_connected: r.root_subgraph_strongly_connected,
            root_subgraph_aperiodic: r.root_subgraph_aperiodic,
            all_edge_matrices_primitive: r.all_edge_matrices_primitive,
            all_edge_column_sums_at_most_one: r.all_edge_column_sums_at_most_one,
            all_edge_matrices_column_stochastic: r.all_edge_matrices_column_stochastic,
            demand_nonzero: r.demand_nonzero,
            substochastic_edge_in_root_subgraph: r.substochastic_edge_in_root_subgraph,
            per_agent_substochastic_supplier: r.per_agent_substochastic_supplier,
            lifted_roots_consistent: r.lifted_roots_consistent,
        }
    }
}

/// Prints the report, then fails with the first violated assumption when
/// the network is neither closed nor open.
pub fn validate(path: &Path, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let net = load_network(path)?;
    let report = run_validation(&net, STOCHASTIC_TOL)?;
    let j = ValidateJson::from(&report);
    if json {
        write_json(out, &j)?;
    } else {
        let roots: Vec<String> = j.out_roots.iter().map(ToString::to_string).collect();
        let rows = [
            ("weight matrix column-stochastic", j.w_column_stochastic),
            ("out-root exists", j.has_out_root),
            (
                "out-root subgraph strongly connected",
                j.root_subgraph_strongly_connected,
            ),
            ("out-root subgraph aperiodic", j.root_subgraph_aperiodic),
            ("edge matrices primitive", j.all_edge_matrices_primitive),
            (
                "edge column sums at most one",
                j.all_edge_column_sums_at_most_one,
            ),
            (
                "edge matrices column-stochastic",
                j.all_edge_matrices_column_stochastic,
            ),
            ("demand nonzero", j.demand_nonzero),
            (
                "substochastic edge among out-roots",
                j.substochastic_edge_in_root_subgraph,
            ),
            (
                "every agent has a substochastic supplier",
                j.per_agent_substochastic_supplier,
            ),
            (
                "lifted in-roots match out-root industries",
                j.lifted_roots_consistent,
            ),
        ];
        writeln!(out, "model class: {}", j.model_class)?;
        writeln!(
            out,
            "out-roots: {}",
            if roots.is_empty() {
                "none".into()
            } else {
                roots.join(", ")
            }
        )?;
        for (label, ok) in rows {
            writeln!(out, "{label}: {}", yes(ok))?;
        }
    }
    report.check_valid()?;
    Ok(())
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    converged: bool,
    final_step: usize,
    final_delta: f64,
    recorded: usize,
    final_state: &'a Vector,
}

pub fn simulate(
    path: &Path,
    opts: &SimulationOptions,
    trace_path: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let net = load_network(path)?;
    run_validation(&net, STOCHASTIC_TOL)?.check_valid()?;
    let sys = build_lifted(&net)?;
    let result = run_simulation(&sys, net.initial_state(), opts)?;
    if let Some(p) = trace_path {
        let file = File::create(p).map_err(|source| CliError::File {
            path: p.to_owned(),
            source,
        })?;
        trace::write_trace(
            BufWriter::new(file),
            &result,
            net.agents(),
            net.industries(),
        )?;
    }
    if json {
        write_json(
            out,
            &SimulateJson {
                converged: result.converged,
                final_step: result.final_step,
                final_delta: result.final_delta,
                recorded: result.states.len(),
                final_state: result.final_state(),
            },
        )?;
    } else {
        writeln!(out, "converged: {}", result.converged)?;
        writeln!(out, "final step: {}", result.final_step)?;
        writeln!(out, "final delta: {:e}", result.final_delta)?;
        writeln!(out, "recorded states: {}", result.states.len())?;
        writeln!(out, "final state:")?;
        write_vector(out, &coordinate_names(&net), result.final_state())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EquilibriumJson<'a> {
    model_class: ModelClass,
    method: &'static str,
    spectral_radius: f64,
    nonnegative: bool,
    residual: f64,
    steps: usize,
    x_star: &'a Vector,
}

/// Closed networks converge to the mass-preserving limit of their initial
/// state; every other network that meets the assumptions is treated as an
/// open model and must have spectral radius below one.
fn closed_equilibrium(
    net: &EconomyNetwork,
    method: Method,
    opts: &SimulationOptions,
) -> Result<EquilibriumResult, CliError> {
    let sys = build_lifted(net)?;
    let (x_star, steps, method) = match method {
        Method::Direct => (
            closed_equilibrium_predict(&sys, net.initial_state())?,
            0,
            EquilibriumMethod::Direct,
        ),
        Method::Iterate => {
            let quiet = SimulationOptions {
                record_every: opts.max_steps,
                ..*opts
            };
            let t = run_simulation(&sys, net.initial_state(), &quiet)?;
            if !t.converged {
                return Err(mwio_core::Error::NoConvergence {
                    iterations: t.final_step,
                    residual: t.final_delta,
                }
                .into());
            }
            (
                t.final_state().clone(),
                t.final_step,
                EquilibriumMethod::Iterative,
            )
        }
    };
    Ok(EquilibriumResult {
        spectral_radius_estimate: spectral_radius(&sys.a_bar)?,
        nonnegative: x_star
            .iter()
            .all(|&v| v >= -mwio_core::dynamics::NONNEGATIVE_TOL),
        residual: fixed_point_residual(&sys, &x_star)?,
        x_star,
        method,
        steps,
    })
}

pub fn equilibrium(
    path: &Path,
    method: Method,
    opts: &SimulationOptions,
    json: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let net = load_network(path)?;
    let report = run_validation(&net, STOCHASTIC_TOL)?;
    report.check_assumptions()?;
    let result = if report.model_class == ModelClass::Closed {
        closed_equilibrium(&net, method, opts)?
    } else {
        let m = match method {
            Method::Direct => EquilibriumMethod::Direct,
            Method::Iterate => EquilibriumMethod::Iterative,
        };
        open_equilibrium(&build_lifted(&net)?, m, opts)?
    };
    let method = match result.method {
        EquilibriumMethod::Direct => "direct",
        EquilibriumMethod::Iterative => "iterate",
    };
    if json {
        write_json(
            out,
            &EquilibriumJson {
                model_class: report.model_class,
                method,
                spectral_radius: result.spectral_radius_estimate,
                nonnegative: result.nonnegative,
                residual: result.residual,
                steps: result.steps,
                x_star: &result.x_star,
            },
        )?;
    } else {
        writeln!(out, "model class: {}", report.model_class)?;
        writeln!(out, "method: {method}")?;
        writeln!(
            out,
            "spectral radius: {:.12}",
            result.spectral_radius_estimate
        )?;
        writeln!(out, "nonnegative: {}", yes(result.nonnegative))?;
        writeln!(out, "residual: {:e}", result.residual)?;
        writeln!(out, "steps: {}", result.steps)?;
        writeln!(out, "x*:")?;
        write_vector(out, &coordinate_names(&net), &result.x_star)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    damping: Option<f64>,
    eigenvalue: f64,
    iterations: usize,
    residual: f64,
    perron_vector: &'a Vector,
}

/// Spectrum of the lifted matrix, after PageRank regularization when a
/// damping factor is given.
pub fn spectrum(
    path: &Path,
    damping: Option<f64>,
    json: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut net = load_network(path)?;
    if let Some(m) = damping {
        net = regularize_pagerank(&net, m)?;
    }
    let sys = build_lifted(&net)?;
    let r = dominant_eigenpair(&sys.a_bar)?;
    if json {
        write_json(
            out,
            &SpectrumJson {
                damping,
                eigenvalue: r.eigenvalue,
                iterations: r.iterations,
                residual: r.residual,
                perron_vector: &r.eigenvector,
            },
        )?;
    } else {
        if let Some(m) = damping {
            writeln!(out, "damping: {m}")?;
        }
        writeln!(out, "eigenvalue: {:.12}", r.eigenvalue)?;
        writeln!(out, "iterations: {}", r.iterations)?;
        writeln!(out, "residual: {:e}", r.residual)?;
        writeln!(out, "Perron vector:")?;
        write_vector(out, &coordinate_names(&net), &r.eigenvector)?;
    }
    Ok(())
}

pub fn plot(path: &Path, agent: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let file = File::open(path).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })?;
    let table = trace::read_trace(file)?;
    trace::plot_data(&table, agent, out)
}
