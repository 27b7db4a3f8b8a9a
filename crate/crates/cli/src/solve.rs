//! Dispatch from an instance and an algorithm name to the core crate.

use anyhow::{bail, Result};
use clap::ValueEnum;
use serde::Serialize;
use transopt_core::fuel::min_initial_fuel;
use transopt_core::hampath::{curve_ham_path, curve_weighted_ham_path};
use transopt_core::jeep::{
    continuous_optimum, eval_equal_fast, eval_subdivision_exact, method2_naive, threshold_search, EvalMethod,
};
use transopt_core::oracles::{
    curve_zigzag_brute, fuel_brute, ham_brute, jeep_graph_paths_brute, jeep_simulate_plan, ovrp_brute,
    polygon_distances_brute, CurveObjective,
};
use transopt_core::ovrp::{solve_greedy, solve_knapsack_v1, solve_knapsack_v2, solve_leaf_interval};
use transopt_core::{Engine, JeepError, OvrpSolution, ValueMode};

use crate::envelope::Outcome;
use crate::instance::{InstanceFile, JeepSpec, Problem};
use crate::real::{reals, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    #[value(name = "ovrp-greedy")]
    OvrpGreedy,
    #[value(name = "ovrp-dp1")]
    OvrpDp1,
    #[value(name = "ovrp-dp2")]
    OvrpDp2,
    #[value(name = "ovrp-interval")]
    OvrpInterval,
    #[value(name = "fuel")]
    Fuel,
    #[value(name = "jeep-exact")]
    JeepExact,
    #[value(name = "jeep-fast")]
    JeepFast,
    #[value(name = "jeep-threshold")]
    JeepThreshold,
    #[value(name = "jeep-graph-backward")]
    JeepGraphBackward,
    #[value(name = "jeep-graph-binary")]
    JeepGraphBinary,
    #[value(name = "jeep-graph-free")]
    JeepGraphFree,
    #[value(name = "jeep-graph-vertex")]
    JeepGraphVertex,
    #[value(name = "hampath-fixed")]
    HampathFixed,
    #[value(name = "hampath-free")]
    HampathFree,
    #[value(name = "curve")]
    Curve,
    #[value(name = "curve-weighted")]
    CurveWeighted,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::OvrpGreedy => "ovrp-greedy",
            Algo::OvrpDp1 => "ovrp-dp1",
            Algo::OvrpDp2 => "ovrp-dp2",
            Algo::OvrpInterval => "ovrp-interval",
            Algo::Fuel => "fuel",
            Algo::JeepExact => "jeep-exact",
            Algo::JeepFast => "jeep-fast",
            Algo::JeepThreshold => "jeep-threshold",
            Algo::JeepGraphBackward => "jeep-graph-backward",
            Algo::JeepGraphBinary => "jeep-graph-binary",
            Algo::JeepGraphFree => "jeep-graph-free",
            Algo::JeepGraphVertex => "jeep-graph-vertex",
            Algo::HampathFixed => "hampath-fixed",
            Algo::HampathFree => "hampath-free",
            Algo::Curve => "curve",
            Algo::CurveWeighted => "curve-weighted",
        }
    }

    pub fn problem(self) -> &'static str {
        match self {
            Algo::OvrpGreedy | Algo::OvrpDp1 | Algo::OvrpDp2 | Algo::OvrpInterval => "ovrp",
            Algo::Fuel => "fuel",
            Algo::JeepExact | Algo::JeepFast | Algo::JeepThreshold => "jeep",
            Algo::JeepGraphBackward | Algo::JeepGraphBinary | Algo::JeepGraphFree | Algo::JeepGraphVertex => {
                "jeep-graph"
            }
            Algo::HampathFixed | Algo::HampathFree => "hampath",
            Algo::Curve | Algo::CurveWeighted => "curve",
        }
    }

    /// The algorithm used when `--algo` is omitted.
    pub fn default_for(problem: &Problem) -> Algo {
        match problem {
            Problem::Ovrp(_) => Algo::OvrpInterval,
            Problem::Fuel(_) => Algo::Fuel,
            Problem::Jeep(spec) if spec.budget.is_some() => Algo::JeepThreshold,
            Problem::Jeep(_) => Algo::JeepExact,
            Problem::JeepGraph(_) => Algo::JeepGraphBackward,
            Problem::Hampath(spec) if spec.start.is_some() => Algo::HampathFixed,
            Problem::Hampath(_) => Algo::HampathFree,
            Problem::Curve(spec) if spec.weights.is_some() => Algo::CurveWeighted,
            Problem::Curve(_) => Algo::Curve,
        }
    }
}

/// Settings shared by every instance in a run.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub eps: f64,
}

fn check_problem(file: &InstanceFile, algo: Algo) -> Result<()> {
    if algo.problem() != file.problem.tag() {
        bail!("algorithm {} solves {} instances, this one is {}", algo.name(), algo.problem(), file.problem.tag());
    }
    Ok(())
}

#[derive(Serialize)]
struct Routes {
    routes: Vec<Vec<usize>>,
    vehicles_used: usize,
}

fn ovrp_outcome(sol: OvrpSolution) -> Outcome {
    let routes = sol.routes.iter().map(|r| one_based(r)).collect();
    Outcome::value(sol.total_cost).with_solution(&Routes { routes, vehicles_used: sol.vehicles_used })
}

fn one_based(path: &[usize]) -> Vec<usize> {
    path.iter().map(|v| v + 1).collect()
}

#[derive(Serialize)]
struct PlanOut {
    round_trips: u64,
    final_delivery: Real,
}

#[derive(Serialize)]
struct PathOut {
    path: Vec<usize>,
}

/// Infeasible jeep inputs become an infeasible outcome; anything else is an
/// error.
fn jeep_result(result: Result<Outcome, JeepError>) -> Result<Outcome> {
    match result {
        Ok(outcome) => Ok(outcome),
        Err(e @ JeepError::Infeasible { .. }) => Ok(Outcome::infeasible(e.to_string())),
        Err(e @ JeepError::BudgetUnreachable { best_k, best_value, .. }) => {
            Ok(Outcome::infeasible(e.to_string()).diag("best_k", &best_k).diag("best_value", &Real(best_value)))
        }
        Err(e) => Err(e.into()),
    }
}

fn jeep_exact(spec: &JeepSpec) -> Result<Outcome> {
    let params = spec.params()?;
    let d = spec.subdivision()?;
    jeep_result(eval_subdivision_exact(&d, &params, spec.terminal, spec.transfer()).map(|eval| {
        let plans: Vec<PlanOut> = eval
            .plans
            .iter()
            .map(|p| PlanOut { round_trips: p.round_trips, final_delivery: Real(p.final_delivery) })
            .collect();
        #[derive(Serialize)]
        struct Exact {
            requirements: Vec<Real>,
            plans: Vec<PlanOut>,
        }
        Outcome::value(eval.fuel)
            .with_solution(&Exact { requirements: reals(&eval.requirements), plans })
            .diag("segments", &eval.plans.len())
    }))
}

pub fn solve(file: &InstanceFile, algo: Algo, settings: Settings) -> Result<Outcome> {
    check_problem(file, algo)?;
    match &file.problem {
        Problem::Ovrp(spec) => {
            let inst = spec.build()?;
            Ok(match algo {
                Algo::OvrpGreedy => ovrp_outcome(solve_greedy(&inst)),
                Algo::OvrpInterval => ovrp_outcome(solve_leaf_interval(&inst)),
                Algo::OvrpDp1 => Outcome::value(solve_knapsack_v1(&inst)),
                _ => Outcome::value(solve_knapsack_v2(&inst)),
            })
        }
        Problem::Fuel(spec) => {
            let inst = spec.build(settings.eps)?;
            let sol = min_initial_fuel(&inst, Engine::SegmentTree);
            #[derive(Serialize)]
            struct FuelOut {
                route: Vec<usize>,
                cmin_per_vertex: Vec<Real>,
            }
            Ok(Outcome::value(sol.cmin)
                .with_solution(&FuelOut { route: one_based(&sol.route), cmin_per_vertex: reals(&sol.per_vertex) })
                .diag("probes", &sol.probes))
        }
        Problem::Jeep(spec) => match algo {
            Algo::JeepExact => jeep_exact(spec),
            Algo::JeepFast => {
                let (x, k) = spec.equal()?;
                let params = spec.params()?;
                jeep_result(eval_equal_fast(x, k, &params).map(|fast| {
                    Outcome::value(fast.fuel).diag("points_touched", &fast.points_touched).diag("l0", &fast.l0)
                }))
            }
            _ => {
                let params = spec.params()?;
                let Some(budget) = spec.budget else { bail!("missing field `budget`") };
                let k1 = spec.k1.or(spec.k).unwrap_or(0);
                let found =
                    threshold_search(spec.x()?, &params, budget, spec.schedule(), k1, spec.method(), spec.max_k());
                jeep_result(found.map(|t| {
                    #[derive(Serialize)]
                    struct Threshold {
                        k: u64,
                    }
                    Outcome::value(t.value).with_solution(&Threshold { k: t.k }).diag("evaluations", &t.evaluations)
                }))
            }
        },
        Problem::JeepGraph(spec) => {
            let g = spec.build()?;
            let params = spec.params()?;
            #[derive(Serialize)]
            struct PerVertex {
                h: Vec<Real>,
            }
            let per_vertex = |h: Vec<f64>| {
                let wire = g.to_wire(&h);
                Outcome::value(h[0]).with_solution(&PerVertex { h: reals(&wire) })
            };
            Ok(match algo {
                Algo::JeepGraphBackward => per_vertex(g.graph.min_gas_backward(&params)),
                Algo::JeepGraphVertex => per_vertex(g.graph.vertex_depots_continuous(&params, spec.k_per_edge))
                    .diag("k_per_edge", &spec.k_per_edge),
                Algo::JeepGraphBinary => {
                    let eps = spec.epsilon.unwrap_or(settings.eps);
                    let fwd = g.graph.min_gas_binary_forward(&params, eps);
                    Outcome::value(fwd.g_min).diag("iterations", &fwd.iterations).diag("epsilon", &Real(eps))
                }
                _ => Outcome::value(g.graph.free_depots(&params)).diag("shortest_path", &Real(g.graph.shortest_path())),
            })
        }
        Problem::Hampath(spec) => {
            let poly = spec.build()?;
            let start = match algo {
                Algo::HampathFixed => match spec.start {
                    Some(s) => Some(s),
                    None => bail!("hampath-fixed needs field `start`"),
                },
                _ => None,
            };
            let best = poly.shortest_ham_path(start)?;
            Ok(Outcome::value(best.length).with_solution(&PathOut { path: best.path }))
        }
        Problem::Curve(spec) => {
            let inst = spec.build()?;
            Ok(match algo {
                Algo::Curve => Outcome::value(curve_ham_path(&inst)),
                _ => {
                    let best = curve_weighted_ham_path(&inst);
                    Outcome::value(best.length).with_solution(&PathOut { path: best.path })
                }
            })
        }
    }
}

/// How close a solver value must be to its reference.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Tolerance {
    Exact,
    Relative(Real),
    Absolute(Real),
}

impl Tolerance {
    pub fn agrees(self, a: f64, b: f64) -> bool {
        if a == b {
            return true;
        }
        match self {
            Tolerance::Exact => false,
            Tolerance::Relative(t) => (a - b).abs() <= t.0 * a.abs().max(b.abs()).max(1.0),
            Tolerance::Absolute(t) => (a - b).abs() <= t.0,
        }
    }
}

const REL: Tolerance = Tolerance::Relative(Real(1e-9));

/// An independent reference value for one instance.
pub struct Reference {
    pub solver: &'static str,
    pub value: f64,
    pub tolerance: Tolerance,
    pub outcome: Outcome,
}

/// The problem's brute-force oracle, or for `algo`, the reference it is
/// checked against.
pub fn oracle(file: &InstanceFile, algo: Option<Algo>, settings: Settings) -> Result<Reference> {
    if let Some(algo) = algo {
        check_problem(file, algo)?;
    }
    let reference = |solver, value: f64, tolerance, outcome| Ok(Reference { solver, value, tolerance, outcome });
    match &file.problem {
        Problem::Ovrp(spec) => {
            let v = ovrp_brute(&spec.build()?)?;
            reference("ovrp_brute", v, REL, Outcome::value(v))
        }
        Problem::Fuel(spec) => {
            let inst = spec.build(settings.eps)?;
            let v = fuel_brute(&inst)?;
            let tolerance = match inst.mode() {
                ValueMode::Integer => Tolerance::Exact,
                // each tree level's search can stop up to epsilon high
                ValueMode::Real { epsilon } => {
                    let levels = (0..inst.tree().len()).map(|u| inst.tree().depth(u)).max().unwrap_or(0) + 1;
                    Tolerance::Absolute(Real(epsilon * levels as f64))
                }
            };
            reference("fuel_brute", v, tolerance, Outcome::value(v))
        }
        Problem::Jeep(spec) => match algo {
            Some(Algo::JeepFast) => {
                let (x, k) = spec.equal()?;
                match method2_naive(x, k, &spec.params()?) {
                    Ok(v) => reference("method2_naive", v, Tolerance::Exact, Outcome::value(v)),
                    Err(JeepError::Infeasible { .. }) => {
                        reference("method2_naive", f64::INFINITY, Tolerance::Exact, Outcome::value(f64::INFINITY))
                    }
                    Err(e) => Err(e.into()),
                }
            }
            Some(Algo::JeepThreshold) => {
                // re-evaluate the reported k from scratch
                let params = spec.params()?;
                let x = spec.x()?;
                let k1 = spec.k1.or(spec.k).unwrap_or(0);
                let k = match threshold_search(
                    x,
                    &params,
                    spec.budget.unwrap_or(0.0),
                    spec.schedule(),
                    k1,
                    spec.method(),
                    spec.max_k(),
                ) {
                    Ok(t) => t.k,
                    Err(_) => {
                        return reference(
                            "threshold_recheck",
                            f64::INFINITY,
                            Tolerance::Exact,
                            Outcome::value(f64::INFINITY),
                        )
                    }
                };
                let v = match spec.method() {
                    EvalMethod::Fast => method2_naive(x, k, &params)?,
                    EvalMethod::Exact => replay(spec, Some(k))?,
                };
                reference("threshold_recheck", v, REL, Outcome::value(v))
            }
            _ => {
                let v = replay(spec, None)?;
                reference("jeep_simulate_plan", v, REL, Outcome::value(v))
            }
        },
        Problem::JeepGraph(spec) => {
            let g = spec.build()?;
            let params = spec.params()?;
            let k = if algo == Some(Algo::JeepGraphVertex) { spec.k_per_edge } else { 0 };
            let best = jeep_graph_paths_brute(&g.graph, &params, k)?;
            let path = PathOut { path: g.path_to_wire(&best.path) };
            match algo {
                Some(Algo::JeepGraphFree) => {
                    let v = continuous_optimum(best.shortest, &params);
                    reference("continuous_optimum_on_shortest_path", v, REL, Outcome::value(v))
                }
                Some(Algo::JeepGraphBinary) => {
                    let eps = spec.epsilon.unwrap_or(settings.eps);
                    let tol = Tolerance::Absolute(Real(10.0 * eps));
                    reference("jeep_graph_paths_brute", best.gas, tol, Outcome::value(best.gas).with_solution(&path))
                }
                _ => reference("jeep_graph_paths_brute", best.gas, REL, Outcome::value(best.gas).with_solution(&path)),
            }
        }
        Problem::Hampath(spec) => {
            let poly = spec.build()?;
            let start = if algo == Some(Algo::HampathFree) { None } else { spec.start };
            let best = ham_brute(&polygon_distances_brute(&poly), start)?;
            reference(
                "ham_brute",
                best.length,
                REL,
                Outcome::value(best.length).with_solution(&PathOut { path: best.path }),
            )
        }
        Problem::Curve(spec) => {
            let inst = spec.build()?;
            let objective = match algo {
                Some(Algo::Curve) => CurveObjective::Length,
                Some(_) => CurveObjective::Weighted,
                None if spec.weights.is_some() => CurveObjective::Weighted,
                None => CurveObjective::Length,
            };
            let best = curve_zigzag_brute(&inst, objective)?;
            let tolerance = if objective == CurveObjective::Weighted { Tolerance::Exact } else { REL };
            reference(
                "curve_zigzag_brute",
                best.length,
                tolerance,
                Outcome::value(best.length).with_solution(&PathOut { path: best.path }),
            )
        }
    }
}

/// Builds the Method 1 plan and replays it trip by trip.
fn replay(spec: &JeepSpec, k: Option<u64>) -> Result<f64> {
    let params = spec.params()?;
    let d = match k {
        Some(k) => transopt_core::Subdivision::equal(spec.x()?, k)?,
        None => spec.subdivision()?,
    };
    match eval_subdivision_exact(&d, &params, spec.terminal, spec.transfer()) {
        Ok(eval) => Ok(jeep_simulate_plan(&d, &params, &eval.plans, spec.terminal)?),
        Err(JeepError::Infeasible { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e.into()),
    }
}

/// Solver value, reference value and whether they agree.
pub struct CheckResult {
    pub solved: Outcome,
    pub reference: Reference,
    pub agreement: bool,
}

pub fn check(file: &InstanceFile, algo: Algo, settings: Settings) -> Result<CheckResult> {
    let solved = solve(file, algo, settings)?;
    let reference = oracle(file, Some(algo), settings)?;
    let value = solved.objective.unwrap_or(f64::INFINITY);
    let agreement = reference.tolerance.agrees(value, reference.value);
    Ok(CheckResult { solved, reference, agreement })
}
