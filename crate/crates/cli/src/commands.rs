//! One function per subcommand, each producing a [`RunReport`].

use std::time::Instant;

use submod_core::cardmin::{cardmin_symmetric, CardMinParams};
use submod_core::extensions::{
    concave_closure_bruteforce, convex_closure_bruteforce, lovasz_eval, multilinear_eval_exact,
    multilinear_eval_sampled, PointInCube, EXACT_EVAL_LIMIT,
};
use submod_core::matroids::Matroid;
use submod_core::maximize::{maximize_matroid, MaximizeParams};
use submod_core::setfn::{
    brute_optimize, check_property_bruteforce, BruteConstraints, OptimizeSense, Property,
    SetFunctionOracle, Subset,
};
use submod_core::sfm::{self, SolveParams};

use crate::error::CliError;
use crate::formats;
use crate::report::{
    CheckEntry, InstanceInfo, Parameters, ResultBlock, RunReport, VerifyBlock,
};
use crate::Cli;

const VERIFY_LIMIT: usize = 12;

/// Everything a command needs: the oracle, provenance, echoing parameters.
pub struct Context {
    pub oracle: SetFunctionOracle,
    pub instance: InstanceInfo,
    pub warnings: Vec<String>,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Context {
    pub fn load(cli: &Cli) -> Result<Self, CliError> {
        let path = cli
            .instance
            .as_deref()
            .ok_or_else(|| CliError::Input("--instance is required".into()))?;
        let kind = cli
            .kind
            .as_deref()
            .ok_or_else(|| CliError::Input("--kind is required".into()))?;
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| CliError::Input(format!("{path} is not UTF-8")))?;

        let mut warnings = Vec::new();
        let oracle = match kind {
            "graph" => {
                let parsed = formats::parse_graph(&text)?;
                warnings = parsed.warnings;
                submod_core::setfn::make_graph_cut(&parsed.graph)?
            }
            "coverage" => {
                let family = formats::parse_coverage(&text)?;
                submod_core::setfn::make_coverage(&family)?
            }
            "modular" => {
                let pairs = formats::parse_modular(&text)?;
                submod_core::setfn::make_modular(pairs)?
            }
            other => {
                return Err(CliError::Input(format!(
                    "unknown instance kind {other:?} (expected graph, coverage or modular)"
                )))
            }
        };

        let seed = match cli.seed {
            Some(s) => s,
            None => std::env::var("SUBMOD_SEED")
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(0),
        };

        let instance = InstanceInfo {
            path: path.to_string(),
            digest: formats::digest(&bytes),
            kind: kind.to_string(),
            n: oracle.n(),
            ground: oracle.ground().labels().to_vec(),
        };
        Ok(Context {
            oracle,
            instance,
            warnings,
            seed,
            tol: cli.tol.unwrap_or(1e-6),
            max_iter: cli.max_iter.unwrap_or(50_000),
        })
    }

    pub fn solve_params(&self) -> SolveParams {
        SolveParams {
            max_iterations: self.max_iter,
            tolerance: self.tol,
            seed: self.seed,
            ..Default::default()
        }
    }

    fn parameters(&self, cli: &Cli) -> Parameters {
        Parameters {
            x: cli.x.clone().map(|_| Vec::new()), // filled by with_x
            k: cli.k,
            v1: cli.v1.clone(),
            matroid: cli.matroid.clone(),
            steps: cli.steps,
            samples: cli.samples,
            seed: self.seed,
            tol: self.tol,
            max_iter: self.max_iter,
            brute: cli.brute,
            verify: cli.verify,
        }
    }

    fn base_report(&self, cli: &Cli, command: &str, started: Instant) -> RunReport {
        RunReport {
            schema: 1,
            command: command.to_string(),
            instance: InstanceInfo {
                path: self.instance.path.clone(),
                digest: self.instance.digest.clone(),
                kind: self.instance.kind.clone(),
                n: self.instance.n,
                ground: self.instance.ground.clone(),
            },
            parameters: self.parameters(cli),
            result: ResultBlock::default(),
            oracle_queries: 0,
            iterations: 0,
            wall_time_ms: started.elapsed().as_millis() as u64,
            warnings: self.warnings.clone(),
            verify: None,
        }
    }

    /// Parses `--x` (comma/whitespace list, `@file` indirection) against
    /// the instance ground set, in declaration order.
    fn point(&self, cli: &Cli) -> Result<PointInCube, CliError> {
        let spec = cli
            .x
            .as_deref()
            .ok_or_else(|| CliError::Input("--x is required for this command".into()))?;
        let raw = if let Some(path) = spec.strip_prefix('@') {
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?
        } else {
            spec.to_string()
        };
        let coords: Vec<f64> = raw
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| CliError::Input(format!("bad coordinate {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        if coords.len() != self.oracle.n() {
            return Err(CliError::Input(format!(
                "--x supplies {} coordinates but the instance has {} elements \
                 (order follows the instance's declaration order)",
                coords.len(),
                self.oracle.n()
            )));
        }
        Ok(PointInCube::new(self.oracle.ground().clone(), coords)?)
    }

    fn sorted_labels(&self, s: &Subset) -> Vec<String> {
        let mut labels = self.oracle.ground().labels_of(s);
        labels.sort();
        labels
    }

    fn matroid(&self, cli: &Cli) -> Result<Matroid, CliError> {
        let spec = cli
            .matroid
            .as_deref()
            .ok_or_else(|| CliError::Input("--matroid is required for this command".into()))?;
        let ground = self.oracle.ground().clone();
        let n = ground.n();
        if let Some(k) = spec.strip_prefix("uniform:") {
            let k: usize = k
                .parse()
                .map_err(|_| CliError::Input(format!("bad uniform rank {k:?}")))?;
            return Ok(Matroid::uniform(ground, k));
        }
        if let Some(rest) = spec.strip_prefix("partition:") {
            let (blocks_str, caps_str) = rest
                .rsplit_once(':')
                .ok_or_else(|| CliError::Input("partition spec is partition:<blocks>:<caps>".into()))?;
            let mut blocks = Vec::new();
            for block in blocks_str.split('|') {
                let labels: Vec<&str> = block.split(',').filter(|t| !t.is_empty()).collect();
                blocks.push(self.oracle.ground().subset_from_labels(labels)?);
            }
            let caps: Vec<usize> = caps_str
                .split(',')
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| CliError::Input(format!("bad capacity {t:?}")))
                })
                .collect::<Result<_, _>>()?;
            return Ok(Matroid::partition(ground, blocks, caps)?);
        }
        if let Some(path) = spec.strip_prefix("graphic:") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
            let rows = formats::parse_graphic_matroid(&text)?;
            if rows.len() != n {
                return Err(CliError::Input(format!(
                    "graphic matroid file maps {} elements but the instance has {n}",
                    rows.len()
                )));
            }
            let mut endpoints = vec![None; n];
            let mut vertices: Vec<String> = Vec::new();
            let vid = |label: &str, vertices: &mut Vec<String>| {
                match vertices.iter().position(|v| v == label) {
                    Some(i) => i,
                    None => {
                        vertices.push(label.to_string());
                        vertices.len() - 1
                    }
                }
            };
            for (element, u, v) in &rows {
                let idx = self
                    .oracle
                    .ground()
                    .index_of(element)
                    .ok_or_else(|| {
                        CliError::Input(format!("unknown element {element:?} in matroid file"))
                    })?;
                if endpoints[idx].is_some() {
                    return Err(CliError::Input(format!(
                        "element {element:?} mapped twice in matroid file"
                    )));
                }
                let ui = vid(u, &mut vertices);
                let vi = vid(v, &mut vertices);
                endpoints[idx] = Some((ui, vi));
            }
            let endpoints: Vec<(usize, usize)> = endpoints
                .into_iter()
                .enumerate()
                .map(|(i, e)| {
                    e.ok_or_else(|| {
                        CliError::Input(format!(
                            "element {:?} missing from matroid file",
                            self.oracle.ground().label(i)
                        ))
                    })
                })
                .collect::<Result<_, _>>()?;
            return Ok(Matroid::graphic(ground, vertices.len(), endpoints)?);
        }
        Err(CliError::Input(format!(
            "unknown matroid spec {spec:?} (uniform:<k>, partition:<blocks>:<caps>, graphic:<path>)"
        )))
    }
}

pub fn eval(cli: &Cli, ctx: &Context) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let x = ctx.point(cli)?;
    let mut s = Subset::empty(ctx.oracle.n());
    for (i, &c) in x.coords().iter().enumerate() {
        if (c - 1.0).abs() <= 1e-9 {
            s.insert(i);
        } else if c.abs() > 1e-9 {
            return Err(CliError::Input(
                "eval expects a 0/1 indicator vector in --x".into(),
            ));
        }
    }
    let before = ctx.oracle.queries();
    let value = ctx.oracle.evaluate(&s)?;
    let mut report = ctx.base_report(cli, "eval", started);
    report.parameters.x = Some(x.coords().to_vec());
    report.result.set = Some(ctx.sorted_labels(&s));
    report.result.value = Some(value);
    report.oracle_queries = ctx.oracle.queries() - before;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

pub fn lovasz(cli: &Cli, ctx: &Context) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let x = ctx.point(cli)?;
    let before = ctx.oracle.queries();
    let value = lovasz_eval(&ctx.oracle, &x)?;
    let mut report = ctx.base_report(cli, "lovasz", started);
    report.parameters.x = Some(x.coords().to_vec());
    report.result.value = Some(value);
    report.oracle_queries = ctx.oracle.queries() - before;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

pub fn multilinear(cli: &Cli, ctx: &Context) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let x = ctx.point(cli)?;
    let before = ctx.oracle.queries();
    let mut report = ctx.base_report(cli, "multilinear", started);
    report.parameters.x = Some(x.coords().to_vec());
    match cli.samples {
        Some(samples) => {
            let (estimate, std_error) =
                multilinear_eval_sampled(&ctx.oracle, &x, samples, ctx.seed)?;
            report.result.value = Some(estimate);
            report.result.std_error = Some(std_error);
        }
        None => {
            if ctx.oracle.n() > EXACT_EVAL_LIMIT {
                return Err(CliError::Budget(format!(
                    "exact multilinear evaluation needs n <= {EXACT_EVAL_LIMIT}; \
                     pass --samples for the Monte Carlo path"
                )));
            }
            report.result.value = Some(multilinear_eval_exact(&ctx.oracle, &x)?);
        }
    }
    report.oracle_queries = ctx.oracle.queries() - before;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

pub fn closure(cli: &Cli, ctx: &Context) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let x = ctx.point(cli)?;
    let before = ctx.oracle.queries();
    let convex = convex_closure_bruteforce(&ctx.oracle, &x)?;
    let concave = concave_closure_bruteforce(&ctx.oracle, &x)?;
    let mut report = ctx.base_report(cli, "closure", started);
    report.parameters.x = Some(x.coords().to_vec());
    report.result.convex_value = Some(convex.value);
    report.result.concave_value = Some(concave.value);
    report.oracle_queries = ctx.oracle.queries() - before;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

pub fn check(cli: &Cli, ctx: &Context) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let props = ctx.oracle.properties();
    let mut to_check = vec![(Property::Submodular, "submodular", props.submodular)];
    to_check.push((Property::Nonnegative, "nonnegative", props.nonnegative));
    to_check.push((Property::Monotone, "monotone", props.monotone));
    to_check.push((Property::Symmetric, "symmetric", props.symmetric));

    let before = ctx.oracle.queries();
    let mut entries = Vec::new();
    for (property, name, declared) in to_check {
        if !declared {
            continue;
        }
        let witness = check_property_bruteforce(&ctx.oracle, property)?;
        entries.push(CheckEntry {
            property: name.to_string(),
            passed: witness.is_none(),
            witness: witness.map(|w| format!("{w:?}")),
        });
    }
    let mut report = ctx.base_report(cli, "check", started);
    report.result.checks = Some(entries);
    report.oracle_queries = ctx.oracle.queries() - before;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

pub fn sfm(cli: &Cli, ctx: &Context) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let before = ctx.oracle.queries();
    let mut report = ctx.base_report(cli, "sfm", started);
    if cli.brute {
        let (s, value) = brute_optimize(
            &ctx.oracle,
            OptimizeSense::Minimize,
            &BruteConstraints::default(),
        )?;
        report.result.set = Some(ctx.sorted_labels(&s));
        report.result.value = Some(value);
        report.result.certified = Some(true);
    } else {
        let solved = sfm::minimize(&ctx.oracle, &ctx.solve_params())?;
        report.result.set = Some(ctx.sorted_labels(&solved.minimizer));
        report.result.value = Some(solved.value);
        report.result.certified = Some(solved.certified);
        report.iterations = solved.iterations as u64;
        if cli.verify && ctx.oracle.n() <= VERIFY_LIMIT {
            let (_, brute_value) = brute_optimize(
                &ctx.oracle,
                OptimizeSense::Minimize,
                &BruteConstraints::default(),
            )?;
            report.verify = Some(VerifyBlock {
                brute_value,
                ratio: ratio_vs(solved.value, brute_value),
            });
        }
    }
    report.oracle_queries = ctx.oracle.queries() - before;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

pub fn maxmatroid(cli: &Cli, ctx: &Context) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let matroid = ctx.matroid(cli)?;
    let before = ctx.oracle.queries();
    let mut report = ctx.base_report(cli, "maxmatroid", started);

    if cli.brute {
        let (s, value) = brute_max_independent(&ctx.oracle, &matroid)?;
        report.result.set = Some(ctx.sorted_labels(&s));
        report.result.value = Some(value);
        report.result.certified = Some(true);
    } else {
        let params = MaximizeParams {
            steps: cli.steps,
            samples: cli.samples,
            seed: ctx.seed,
            ..Default::default()
        };
        let solved = maximize_matroid(&ctx.oracle, &matroid, &params)?;
        report.result.set = Some(ctx.sorted_labels(&solved.chosen));
        report.result.value = Some(solved.value);
        report.result.fractional_value = Some(solved.fractional_value);
        report.result.certified = Some(solved.rounding.certified);
        report.iterations = solved.iterations as u64;
        if cli.verify && ctx.oracle.n() <= VERIFY_LIMIT {
            let (_, brute_value) = brute_max_independent(&ctx.oracle, &matroid)?;
            report.verify = Some(VerifyBlock {
                brute_value,
                ratio: ratio_vs(solved.value, brute_value),
            });
        }
    }
    report.oracle_queries = ctx.oracle.queries() - before;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

pub fn cardmin(cli: &Cli, ctx: &Context) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let k = cli
        .k
        .ok_or_else(|| CliError::Input("--k is required for cardmin".into()))?;
    let before = ctx.oracle.queries();
    let mut report = ctx.base_report(cli, "cardmin", started);

    if cli.brute {
        let (s, value) = brute_optimize(
            &ctx.oracle,
            OptimizeSense::Minimize,
            &BruteConstraints::cardinality(1, k),
        )?;
        report.result.set = Some(ctx.sorted_labels(&s));
        report.result.value = Some(value);
        report.result.certified = Some(true);
    } else {
        let restrict_guess = match cli.v1.as_deref() {
            Some(label) => Some(ctx.oracle.ground().index_of(label).ok_or_else(|| {
                CliError::Input(format!("--v1 element {label:?} is not in the ground set"))
            })?),
            None => None,
        };
        let params = CardMinParams {
            solve: ctx.solve_params(),
            verify_properties: ctx.oracle.n() <= VERIFY_LIMIT,
            restrict_guess,
        };
        let solved = cardmin_symmetric(&ctx.oracle, k, &params)?;
        report.result.set = Some(ctx.sorted_labels(&solved.chosen));
        report.result.value = Some(solved.value);
        report.iterations = solved.per_guess.len() as u64;
        if cli.verify && ctx.oracle.n() <= VERIFY_LIMIT {
            let (_, brute_value) = brute_optimize(
                &ctx.oracle,
                OptimizeSense::Minimize,
                &BruteConstraints::cardinality(1, k),
            )?;
            report.verify = Some(VerifyBlock {
                brute_value,
                ratio: ratio_vs(solved.value, brute_value),
            });
        }
    }
    report.oracle_queries = ctx.oracle.queries() - before;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

fn brute_max_independent(
    oracle: &SetFunctionOracle,
    m: &Matroid,
) -> Result<(Subset, f64), CliError> {
    let n = oracle.n();
    if n > 20 {
        return Err(CliError::Budget(format!(
            "brute maximization enumerates 2^n subsets; n = {n} exceeds 20"
        )));
    }
    let mut best: Option<(Subset, f64)> = None;
    for mask in 0..(1u64 << n) {
        let s = Subset::from_mask(n, mask);
        if !m.is_independent(&s) {
            continue;
        }
        let v = oracle.evaluate(&s)?;
        let better = match &best {
            None => true,
            Some((bs, bv)) => {
                v > bv + 1e-9
                    || ((v - bv).abs() <= 1e-9 && s.cmp_card_lex(bs) == std::cmp::Ordering::Less)
            }
        };
        if better {
            best = Some((s, v));
        }
    }
    best.ok_or_else(|| CliError::Contract("no independent set found".into()))
}

/// 1.0 on exact agreement, the plain quotient otherwise.
fn ratio_vs(value: f64, brute: f64) -> f64 {
    if (value - brute).abs() <= 1e-9 {
        1.0
    } else {
        value / brute
    }
}
