//! Instance files. Tree and graph vertices are 1-based on the wire and
//! 0-based inside; polygon and curve indices are 0-based throughout.

use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;
use transopt_core::jeep::{EvalMethod, Schedule, DEFAULT_MAX_K};
use transopt_core::{
    CurveInstance, FuelInstance, JeepGraph, JeepParams, OvrpInstance, Point, RootedTree, SimplePolygon, Subdivision,
    TransferMode, ValueMode,
};

pub const INSTANCE_SCHEMA_VERSION: u32 = 1;

type WireEdge = (usize, usize, f64);

#[derive(Debug, Deserialize)]
pub struct InstanceFile {
    /// Checked by [`parse`] before the payload is read.
    #[serde(rename = "schema_version")]
    _schema_version: u32,
    #[serde(default)]
    pub name: Option<String>,
    /// Generator seed, echoed for corpus bookkeeping.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub problem: Problem,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum Problem {
    Ovrp(OvrpSpec),
    Fuel(FuelSpec),
    Jeep(JeepSpec),
    JeepGraph(GraphSpec),
    Hampath(PolygonSpec),
    Curve(CurveSpec),
}

impl Problem {
    pub fn tag(&self) -> &'static str {
        match self {
            Problem::Ovrp(_) => "ovrp",
            Problem::Fuel(_) => "fuel",
            Problem::Jeep(_) => "jeep",
            Problem::JeepGraph(_) => "jeep-graph",
            Problem::Hampath(_) => "hampath",
            Problem::Curve(_) => "curve",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OvrpSpec {
    pub n: usize,
    pub edges: Vec<WireEdge>,
    pub vehicles: usize,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    #[default]
    Integer,
    Real,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuelSpec {
    pub n: usize,
    pub edges: Vec<WireEdge>,
    pub gas: Vec<f64>,
    #[serde(default)]
    pub mode: NumericMode,
    #[serde(default)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleSpec {
    Multiplicative(u64),
    Additive(u64),
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodSpec {
    Exact,
    #[default]
    Fast,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransferSpec {
    #[default]
    Faithful,
    Corrected,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JeepSpec {
    pub m: f64,
    pub g: f64,
    /// Distance to cover; with `k` it defines an equal subdivision.
    #[serde(default)]
    pub x: Option<f64>,
    #[serde(default)]
    pub k: Option<u64>,
    /// Explicit subdivision points, overriding `x` and `k`.
    #[serde(default)]
    pub points: Option<Vec<f64>>,
    #[serde(default)]
    pub terminal: f64,
    #[serde(default)]
    pub transfer: TransferSpec,
    #[serde(default)]
    pub budget: Option<f64>,
    #[serde(default)]
    pub k1: Option<u64>,
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub method: MethodSpec,
    #[serde(default)]
    pub max_k: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<WireEdge>,
    #[serde(default)]
    pub source: Option<usize>,
    #[serde(default)]
    pub target: Option<usize>,
    pub m: f64,
    pub g: f64,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub k_per_edge: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonSpec {
    pub polygon: Vec<(f64, f64)>,
    #[serde(default)]
    pub start: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub gaps: Vec<f64>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub start: Option<usize>,
}

pub fn parse(value: serde_json::Value) -> Result<InstanceFile> {
    let version = value.get("schema_version").and_then(serde_json::Value::as_u64);
    match version {
        Some(v) if v == INSTANCE_SCHEMA_VERSION as u64 => {}
        Some(v) => bail!("unsupported schema_version {v}, expected {INSTANCE_SCHEMA_VERSION}"),
        None => bail!("missing field `schema_version`"),
    }
    serde_json::from_value(value).context("invalid instance")
}

fn tree(n: usize, edges: &[WireEdge]) -> Result<RootedTree> {
    let edges = zero_based(n, edges)?;
    Ok(RootedTree::new(n, &edges, 0)?)
}

fn zero_based(n: usize, edges: &[WireEdge]) -> Result<Vec<WireEdge>> {
    edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v, len))| {
            ensure!(
                (1..=n).contains(&u) && (1..=n).contains(&v),
                "edges[{i}]: vertices must lie in 1..={n}, got ({u}, {v})"
            );
            // checked here so the message uses the caller's numbering
            ensure!(
                len >= 0.0 && len.is_finite(),
                "edges[{i}] ({u}, {v}): length must be finite and non-negative, got {len}"
            );
            Ok((u - 1, v - 1, len))
        })
        .collect()
}

impl OvrpSpec {
    pub fn build(&self) -> Result<OvrpInstance> {
        Ok(OvrpInstance::new(tree(self.n, &self.edges)?, self.vehicles)?)
    }
}

impl FuelSpec {
    pub fn epsilon(&self, default_eps: f64) -> f64 {
        self.epsilon.unwrap_or(default_eps)
    }

    pub fn build(&self, default_eps: f64) -> Result<FuelInstance> {
        let mode = match self.mode {
            NumericMode::Integer => ValueMode::Integer,
            NumericMode::Real => ValueMode::Real { epsilon: self.epsilon(default_eps) },
        };
        Ok(FuelInstance::new(tree(self.n, &self.edges)?, self.gas.clone(), mode)?)
    }
}

impl JeepSpec {
    pub fn params(&self) -> Result<JeepParams> {
        Ok(JeepParams::new(self.m, self.g)?)
    }

    pub fn transfer(&self) -> TransferMode {
        match self.transfer {
            TransferSpec::Faithful => TransferMode::Faithful,
            TransferSpec::Corrected => TransferMode::Corrected,
        }
    }

    pub fn x(&self) -> Result<f64> {
        match (&self.points, self.x) {
            (Some(p), _) => p.last().copied().context("field `points` is empty"),
            (None, Some(x)) => Ok(x),
            (None, None) => bail!("missing field `x`"),
        }
    }

    pub fn equal(&self) -> Result<(f64, u64)> {
        ensure!(self.points.is_none(), "this algorithm needs an equal subdivision: give `x` and `k`, not `points`");
        Ok((self.x()?, self.k.context("missing field `k`")?))
    }

    pub fn subdivision(&self) -> Result<Subdivision> {
        Ok(match &self.points {
            Some(p) => Subdivision::new(p.clone())?,
            None => Subdivision::equal(self.x()?, self.k.context("missing field `k`")?)?,
        })
    }

    pub fn schedule(&self) -> Schedule {
        match self.schedule.unwrap_or(ScheduleSpec::Multiplicative(2)) {
            ScheduleSpec::Multiplicative(c) => Schedule::Multiplicative(c),
            ScheduleSpec::Additive(c) => Schedule::Additive(c),
        }
    }

    pub fn method(&self) -> EvalMethod {
        match self.method {
            MethodSpec::Exact => EvalMethod::Exact,
            MethodSpec::Fast => EvalMethod::Fast,
        }
    }

    pub fn max_k(&self) -> u64 {
        self.max_k.unwrap_or(DEFAULT_MAX_K)
    }
}

/// A jeep graph relabeled so that the source is vertex 0 and the target
/// the last vertex, which is what the solvers assume.
pub struct LabeledGraph {
    pub graph: JeepGraph,
    /// Internal index of every wire vertex (0-based wire order).
    pub inner: Vec<usize>,
    /// Wire vertex (1-based) of every internal index.
    pub outer: Vec<usize>,
}

impl LabeledGraph {
    /// Per-vertex values in wire order.
    pub fn to_wire<T: Copy>(&self, values: &[T]) -> Vec<T> {
        self.inner.iter().map(|&i| values[i]).collect()
    }

    pub fn path_to_wire(&self, path: &[usize]) -> Vec<usize> {
        path.iter().map(|&i| self.outer[i]).collect()
    }
}

impl GraphSpec {
    pub fn params(&self) -> Result<JeepParams> {
        Ok(JeepParams::new(self.m, self.g)?)
    }

    pub fn build(&self) -> Result<LabeledGraph> {
        let n = self.n;
        let source = self.source.unwrap_or(1);
        let target = self.target.unwrap_or(n);
        ensure!((1..=n).contains(&source), "source {source} outside 1..={n}");
        ensure!((1..=n).contains(&target), "target {target} outside 1..={n}");
        ensure!(source != target || n == 1, "source and target must differ");
        let mut order = vec![source - 1];
        order.extend((0..n).filter(|&v| v != source - 1 && v != target - 1));
        if n > 1 {
            order.push(target - 1);
        }
        let mut inner = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            inner[v] = i;
        }
        let edges: Vec<WireEdge> =
            zero_based(n, &self.edges)?.into_iter().map(|(u, v, len)| (inner[u], inner[v], len)).collect();
        let graph = JeepGraph::new(n, &edges)?;
        Ok(LabeledGraph { graph, inner, outer: order.iter().map(|v| v + 1).collect() })
    }
}

impl PolygonSpec {
    pub fn build(&self) -> Result<SimplePolygon> {
        Ok(SimplePolygon::new(self.polygon.iter().map(|&(x, y)| Point::new(x, y)).collect())?)
    }
}

impl CurveSpec {
    /// Unit weights stand in when none are given.
    pub fn build(&self) -> Result<CurveInstance> {
        let weights = self.weights.clone().unwrap_or_else(|| vec![1.0; self.gaps.len()]);
        Ok(CurveInstance::new(self.gaps.clone(), weights, self.start)?)
    }
}
