//! Subcommand drivers: load data, run the library, assemble the report.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use dcsel_core::{
    controlled_select, enumerate_m_pi, intersection_closure_check, kww_select, marginal_ranking,
    power_set_dependence_experiment, quasi_concavity_check, sample_dcor2, sample_dcov2,
    standardize, standardize_except, two_stage, union_decomposition_check, ColumnSet, DCovConfig,
    DataMatrix, EnumerationResult, Error as CoreError, PiCluster, PipelineConfig, PipelineMode,
    StageReport, MAX_ENUM_FEATURES,
};

use crate::args::{Cli, Command, CommonOpts, ExperimentArg, FormatArg, ModeArg};
use crate::error::{CliError, Result};
use crate::io::{load_csv, load_csv_all, resolve_columns};
use crate::parallel::{
    build_cache_parallel, diversity_ordering_parallel, minimal_maximizers_parallel,
};
use crate::report::{
    ms, sig12, Check, ClusterOut, ConfigEcho, Metric, OutputFormat, RankEntry, Report, Stage,
    TierOut, Timing,
};

struct HandlerOutput {
    stages: Vec<Stage>,
    response_names: Option<Vec<String>>,
    a_names: Option<Vec<String>>,
    b_names: Option<Vec<String>>,
    load: Duration,
}

/// Run one parsed invocation to a rendered report.
pub fn execute(cli: Cli) -> Result<String> {
    let common = cli.command.common();
    if let Some(threads) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }

    let started = Instant::now();
    let out = match &cli.command {
        Command::Dcov { common, a, b } => run_dcov(common, a.as_deref(), b.as_deref())?,
        Command::Diverse { common } => run_diverse(common)?,
        Command::Relevant { common } => run_relevant(common)?,
        Command::Select {
            common,
            mode,
            alpha,
        } => run_select(common, *mode, *alpha)?,
        Command::Order { common } => run_order(common)?,
        Command::Enumerate { common, experiment } => run_enumerate(common, *experiment)?,
    };
    let total = started.elapsed();

    let (mode, alpha) = match &cli.command {
        Command::Select { mode, alpha, .. } => (Some(core_mode(*mode).as_str().to_owned()), *alpha),
        _ => (None, None),
    };
    let experiment = match &cli.command {
        Command::Enumerate { experiment, .. } => Some(
            match experiment {
                ExperimentArg::Mpi => "mpi",
                ExperimentArg::Scaling => "scaling",
            }
            .to_owned(),
        ),
        _ => None,
    };

    let report = Report {
        command: cli.command.name().to_owned(),
        config: ConfigEcho {
            input: common.input.display().to_string(),
            response: out.response_names,
            a: out.a_names,
            b: out.b_names,
            exponent: sig12(common.exponent),
            standardize: common.standardize,
            eps: 1e-12,
            alpha: alpha.map(sig12),
            mode,
            experiment,
            top_k: common.top_k,
            format: match common.format {
                FormatArg::Json => "json",
                FormatArg::Csv => "csv",
            }
            .to_owned(),
        },
        stages: out.stages,
        timing: if common.omit_timing {
            None
        } else {
            Some(Timing {
                load_ms: ms(out.load),
                compute_ms: ms(total.saturating_sub(out.load)),
                total_ms: ms(total),
            })
        },
    };

    report.render(match common.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Csv => OutputFormat::Csv,
    })
}

fn core_mode(mode: ModeArg) -> PipelineMode {
    match mode {
        ModeArg::Controlled => PipelineMode::Controlled,
        ModeArg::KwwThenDiverse => PipelineMode::KwwThenDiverse,
        ModeArg::DiverseThenKww => PipelineMode::DiverseThenKww,
    }
}

fn dcfg(common: &CommonOpts) -> DCovConfig {
    DCovConfig {
        exponent: common.exponent,
        standardize: common.standardize,
        eps: 1e-12,
    }
}

fn names_of(data: &DataMatrix, indices: &[usize]) -> Vec<String> {
    indices.iter().map(|&i| data.name(i).to_owned()).collect()
}

fn truncate<T>(items: Vec<T>, top_k: Option<usize>) -> Vec<T> {
    match top_k {
        Some(k) => items.into_iter().take(k).collect(),
        None => items,
    }
}

fn cluster_out(data: &DataMatrix, cluster: &PiCluster) -> ClusterOut {
    ClusterOut {
        members: names_of(data, cluster.members.as_slice()),
        value: sig12(cluster.value),
        origin_start: data.name(cluster.origin_start).to_owned(),
    }
}

/// Features matrix (response split away when given) plus the response names.
fn load_features(common: &CommonOpts) -> Result<(DataMatrix, Option<Vec<String>>)> {
    match &common.response {
        Some(spec) => {
            let (features, response) = load_csv(&common.input, spec)?;
            let names = response.column_names().to_vec();
            Ok((features, Some(names)))
        }
        None => Ok((load_csv_all(&common.input)?, None)),
    }
}

/// Joint matrix with the response appended as the trailing columns.
fn load_joint(common: &CommonOpts) -> Result<(DataMatrix, ColumnSet, Vec<String>)> {
    let spec = common.response.as_deref().ok_or(CliError::MissingFlag {
        flag: "--response",
        why: "this command measures dependence against a response",
    })?;
    let (features, response) = load_csv(&common.input, spec)?;
    let p = features.n_cols();
    let joint = features.append_columns(&response)?;
    let y = ColumnSet::range(p, p + response.n_cols());
    let names = response.column_names().to_vec();
    Ok((joint, y, names))
}

fn run_dcov(common: &CommonOpts, a: Option<&str>, b: Option<&str>) -> Result<HandlerOutput> {
    let t = Instant::now();
    let full = load_csv_all(&common.input)?;
    let load = t.elapsed();

    let resp_idx = match &common.response {
        Some(spec) => Some(resolve_columns(&full, spec, "--response")?),
        None => None,
    };
    let a_idx = match a {
        Some(spec) => resolve_columns(&full, spec, "--a")?,
        None => {
            let resp = resp_idx.as_ref().ok_or(CliError::MissingFlag {
                flag: "--a",
                why: "without --response there is no default left group",
            })?;
            let complement: Vec<usize> = (0..full.n_cols()).filter(|j| !resp.contains(j)).collect();
            if complement.is_empty() {
                return Err(CliError::NoFeaturesLeft);
            }
            complement
        }
    };
    let b_idx = match b {
        Some(spec) => resolve_columns(&full, spec, "--b")?,
        None => resp_idx.clone().ok_or(CliError::MissingFlag {
            flag: "--b",
            why: "without --response there is no default right group",
        })?,
    };

    let cfg = dcfg(common);
    cfg.validate()?;
    let data = if common.standardize {
        standardize_except(&full, resp_idx.as_deref().unwrap_or(&[]))
    } else {
        full.clone()
    };
    let a_set = ColumnSet::new(a_idx.clone())?;
    let b_set = ColumnSet::new(b_idx.clone())?;
    let nu2 = sample_dcov2(&data, &a_set, &b_set, &cfg)?;
    let rho2 = sample_dcor2(&data, &a_set, &b_set, &cfg)?;

    let stage = Stage {
        metrics: Some(vec![
            Metric {
                name: "nu2".to_owned(),
                value: sig12(nu2),
            },
            Metric {
                name: "rho2".to_owned(),
                value: sig12(rho2),
            },
        ]),
        ..Stage::new("dcov", Vec::new())
    };
    Ok(HandlerOutput {
        stages: vec![stage],
        response_names: resp_idx.map(|idx| names_of(&full, &idx)),
        a_names: Some(names_of(&full, &a_idx)),
        b_names: Some(names_of(&full, &b_idx)),
        load,
    })
}

fn run_diverse(common: &CommonOpts) -> Result<HandlerOutput> {
    let t = Instant::now();
    let (features, response_names) = load_features(common)?;
    let load = t.elapsed();

    let cfg = dcfg(common);
    cfg.validate()?;
    let data = if cfg.standardize {
        standardize(&features)
    } else {
        features
    };
    let p = data.n_cols();
    let cache = build_cache_parallel(&data, &ColumnSet::range(0, p), &cfg)?;
    let result = minimal_maximizers_parallel(&cache)?;

    let union: BTreeSet<usize> = result
        .clusters
        .iter()
        .flat_map(|c| c.members.iter().copied())
        .collect();
    let union: Vec<usize> = union.into_iter().collect();
    let clusters: Vec<ClusterOut> = result
        .clusters
        .iter()
        .map(|c| cluster_out(&data, c))
        .collect();

    let stage = Stage {
        objective: Some(sig12(result.objective)),
        clusters: Some(truncate(clusters, common.top_k)),
        ..Stage::new("diverse", names_of(&data, &union))
    };
    Ok(HandlerOutput {
        stages: vec![stage],
        response_names,
        a_names: None,
        b_names: None,
        load,
    })
}

fn run_relevant(common: &CommonOpts) -> Result<HandlerOutput> {
    let t = Instant::now();
    let (joint, y, response_names) = load_joint(common)?;
    let load = t.elapsed();

    let cfg = dcfg(common);
    let ranking = marginal_ranking(&joint, &y, &cfg)?;
    let result = kww_select(&joint, &y, &cfg)?;

    let rank_entries: Vec<RankEntry> = ranking
        .ranked
        .iter()
        .map(|&(i, v)| RankEntry {
            feature: joint.name(i).to_owned(),
            rho2: sig12(v),
        })
        .collect();
    let stage = Stage {
        ranking: Some(truncate(rank_entries, common.top_k)),
        trace: Some(result.dcov_trace.iter().map(|&v| sig12(v)).collect()),
        ..Stage::new("relevant", names_of(&joint, result.selected.as_slice()))
    };
    Ok(HandlerOutput {
        stages: vec![stage],
        response_names: Some(response_names),
        a_names: None,
        b_names: None,
        load,
    })
}

fn stage_from_report(data: &DataMatrix, report: &StageReport, top_k: Option<usize>) -> Stage {
    Stage {
        objective: report.objective.map(sig12),
        clusters: report
            .clusters
            .as_ref()
            .map(|cs| truncate(cs.iter().map(|c| cluster_out(data, c)).collect(), top_k)),
        ranking: report.ranking.as_ref().map(|r| {
            truncate(
                r.iter()
                    .map(|&(i, v)| RankEntry {
                        feature: data.name(i).to_owned(),
                        rho2: sig12(v),
                    })
                    .collect(),
                top_k,
            )
        }),
        trace: report
            .trace
            .as_ref()
            .map(|t| t.iter().map(|&v| sig12(v)).collect()),
        ..Stage::new(report.name, names_of(data, report.selected.as_slice()))
    }
}

fn run_select(common: &CommonOpts, mode: ModeArg, alpha: Option<f64>) -> Result<HandlerOutput> {
    let t = Instant::now();
    let (joint, y, response_names) = load_joint(common)?;
    let load = t.elapsed();

    let mode = core_mode(mode);
    let pcfg = PipelineConfig {
        mode,
        alpha,
        base: dcfg(common),
    };
    let pipeline = match mode {
        PipelineMode::Controlled => controlled_select(&joint, &y, &pcfg)?,
        _ => two_stage(&joint, &y, &pcfg)?,
    };

    let mut stages: Vec<Stage> = pipeline
        .stages
        .iter()
        .map(|s| stage_from_report(&joint, s, common.top_k))
        .collect();
    stages.push(Stage::new(
        "final",
        names_of(&joint, pipeline.final_selected.as_slice()),
    ));
    Ok(HandlerOutput {
        stages,
        response_names: Some(response_names),
        a_names: None,
        b_names: None,
        load,
    })
}

fn run_order(common: &CommonOpts) -> Result<HandlerOutput> {
    let t = Instant::now();
    let (features, response_names) = load_features(common)?;
    let load = t.elapsed();

    let cfg = dcfg(common);
    cfg.validate()?;
    let data = if cfg.standardize {
        standardize(&features)
    } else {
        features
    };
    let p = data.n_cols();
    let cache = build_cache_parallel(&data, &ColumnSet::range(0, p), &cfg)?;
    let tiers = diversity_ordering_parallel(&cache)?;

    let tier_out: Vec<TierOut> = tiers
        .iter()
        .enumerate()
        .map(|(k, t)| TierOut {
            tier: k + 1,
            features: names_of(&data, t.features.as_slice()),
            objective: t.objective.map(sig12),
        })
        .collect();
    let first = tiers
        .first()
        .map(|t| names_of(&data, t.features.as_slice()))
        .unwrap_or_default();
    let stage = Stage {
        tiers: Some(truncate(tier_out, common.top_k)),
        ..Stage::new("order", first)
    };
    Ok(HandlerOutput {
        stages: vec![stage],
        response_names,
        a_names: None,
        b_names: None,
        load,
    })
}

fn run_enumerate(common: &CommonOpts, experiment: ExperimentArg) -> Result<HandlerOutput> {
    match experiment {
        ExperimentArg::Mpi => run_enumerate_mpi(common),
        ExperimentArg::Scaling => run_enumerate_scaling(common),
    }
}

fn run_enumerate_mpi(common: &CommonOpts) -> Result<HandlerOutput> {
    let t = Instant::now();
    let (features, response_names) = load_features(common)?;
    let load = t.elapsed();

    let p = features.n_cols();
    if p > MAX_ENUM_FEATURES {
        return Err(CoreError::SizeGuard {
            features: p,
            max: MAX_ENUM_FEATURES,
        }
        .into());
    }
    let cfg = dcfg(common);
    cfg.validate()?;
    let data = if cfg.standardize {
        standardize(&features)
    } else {
        features
    };
    let cache = build_cache_parallel(&data, &ColumnSet::range(0, p), &cfg)?;
    let result = enumerate_m_pi(&cache)?;

    let minimal_sets: Vec<Vec<String>> = result
        .minimal_maximizers
        .iter()
        .map(|&mask| names_of(&data, &EnumerationResult::members(mask)))
        .collect();
    let union: BTreeSet<usize> = result
        .minimal_maximizers
        .iter()
        .flat_map(|&mask| EnumerationResult::members(mask))
        .collect();
    let union: Vec<usize> = union.into_iter().collect();

    let checks = vec![
        Check {
            name: "quasi_concavity".to_owned(),
            passed: quasi_concavity_check(&result),
        },
        Check {
            name: "union_decomposition".to_owned(),
            passed: union_decomposition_check(&result),
        },
        Check {
            name: "intersection_closure".to_owned(),
            passed: intersection_closure_check(&result),
        },
    ];

    let stage = Stage {
        objective: Some(sig12(result.objective)),
        checks: Some(checks),
        minimal_sets: Some(truncate(minimal_sets, common.top_k)),
        maximizer_count: Some(result.maximizers.len() as u64),
        subsets_evaluated: Some(result.n_subsets() as u64),
        ..Stage::new("enumerate_mpi", names_of(&data, &union))
    };
    Ok(HandlerOutput {
        stages: vec![stage],
        response_names,
        a_names: None,
        b_names: None,
        load,
    })
}

fn run_enumerate_scaling(common: &CommonOpts) -> Result<HandlerOutput> {
    let t = Instant::now();
    let (joint, y, response_names) = load_joint(common)?;
    let load = t.elapsed();

    let m = joint.n_cols() - y.len();
    if m > MAX_ENUM_FEATURES {
        return Err(CoreError::SizeGuard {
            features: m,
            max: MAX_ENUM_FEATURES,
        }
        .into());
    }
    let cfg = dcfg(common);
    let raw = power_set_dependence_experiment(&joint, &y, &cfg, false)?;
    let standardized = power_set_dependence_experiment(&joint, &y, &cfg, true)?;

    let stage = Stage {
        metrics: Some(vec![
            Metric {
                name: "rho_raw".to_owned(),
                value: sig12(raw.rho_of_rho_nu),
            },
            Metric {
                name: "rho_standardized".to_owned(),
                value: sig12(standardized.rho_of_rho_nu),
            },
        ]),
        subsets_evaluated: Some(raw.rho_e.len() as u64),
        ..Stage::new("enumerate_scaling", Vec::new())
    };
    Ok(HandlerOutput {
        stages: vec![stage],
        response_names: Some(response_names),
        a_names: None,
        b_names: None,
        load,
    })
}
