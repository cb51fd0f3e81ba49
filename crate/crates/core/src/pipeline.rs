//! Composed selection pipelines: marginal-dependence filtering at a
//! threshold followed by diverse selection, and the two-stage combinations
//! of all-relevant selection with diverse selection in either order.

use alloc::vec::Vec;

use crate::data::{ColumnSet, DCovConfig, DataMatrix};
use crate::dcov::standardize_except;
use crate::diverse::{minimal_maximizers, MinimalMaximizerResult, PiCluster};
use crate::error::{Error, Result};
use crate::linkage::build_cache;
use crate::relevant::{complement_of, kww_forward, marginal_ranking_among, RelevanceRanking};

/// How the stages compose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineMode {
    /// Keep features with marginal ρ̂² ≥ α, then diverse-select among them.
    Controlled,
    /// All-relevant selection first, diverse selection on the survivors.
    KwwThenDiverse,
    /// Diverse selection first, all-relevant selection within the union.
    DiverseThenKww,
}

impl PipelineMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            PipelineMode::Controlled => "controlled",
            PipelineMode::KwwThenDiverse => "kww_then_diverse",
            PipelineMode::DiverseThenKww => "diverse_then_kww",
        }
    }
}

/// Pipeline knobs: the mode, its threshold (controlled mode only), and the
/// shared kernel configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub mode: PipelineMode,
    pub alpha: Option<f64>,
    pub base: DCovConfig,
}

impl PipelineConfig {
    fn validate(&self) -> Result<()> {
        self.base.validate()?;
        match (self.mode, self.alpha) {
            (PipelineMode::Controlled, None) => Err(Error::MissingAlpha),
            (PipelineMode::Controlled, Some(a)) if !(a.is_finite() && a >= 0.0) => {
                Err(Error::InvalidAlpha { value: a })
            }
            (PipelineMode::Controlled, Some(_)) => Ok(()),
            (_, Some(_)) => Err(Error::UnexpectedAlpha),
            (_, None) => Ok(()),
        }
    }
}

/// One stage's outcome. `selected` always uses original column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    pub name: &'static str,
    pub selected: ColumnSet,
    /// Shared M_π value (diverse stages only).
    pub objective: Option<f64>,
    /// Minimal maximizers with members remapped to original indices.
    pub clusters: Option<Vec<PiCluster>>,
    /// ν̂ trace (all-relevant stages only).
    pub trace: Option<Vec<f64>>,
    /// Marginal ranking consulted by the stage, if any.
    pub ranking: Option<Vec<(usize, f64)>>,
}

/// Full pipeline outcome: the stages in execution order and the final set.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub mode: PipelineMode,
    pub stages: Vec<StageReport>,
    pub final_selected: ColumnSet,
}

fn prepare<'a>(
    data: &'a DataMatrix,
    response: &ColumnSet,
    cfg: &DCovConfig,
    holder: &'a mut Option<DataMatrix>,
) -> &'a DataMatrix {
    if cfg.standardize {
        *holder = Some(standardize_except(data, response.as_slice()));
        holder.as_ref().unwrap()
    } else {
        data
    }
}

/// Run the diverse stage over `pool` (original indices) and report it with
/// cluster members mapped back to original indices.
fn diverse_stage(
    data: &DataMatrix,
    pool: &[usize],
    cfg: &DCovConfig,
    stage_name: &'static str,
    prior_stage: &'static str,
) -> Result<(StageReport, MinimalMaximizerResult)> {
    if pool.len() < 2 {
        return Err(Error::EmptyStage {
            stage: prior_stage,
            needed: 2,
            got: pool.len(),
        });
    }
    let pool_set = ColumnSet::new(pool.to_vec()).expect("stage pools hold distinct indices");
    let cache = build_cache(data, &pool_set, cfg)?;
    let result = minimal_maximizers(&cache)?;
    let clusters: Vec<PiCluster> = result
        .clusters
        .iter()
        .map(|c| PiCluster {
            members: ColumnSet::new(c.members.iter().map(|&l| pool[l]).collect())
                .expect("remapping a duplicate-free set stays duplicate-free"),
            value: c.value,
            origin_start: pool[c.origin_start],
        })
        .collect();
    let mut union: Vec<usize> = Vec::new();
    for c in &clusters {
        for &m in c.members.iter() {
            if !union.contains(&m) {
                union.push(m);
            }
        }
    }
    union.sort_unstable();
    let report = StageReport {
        name: stage_name,
        selected: ColumnSet::new(union).expect("union built with a containment check"),
        objective: Some(result.objective),
        clusters: Some(clusters),
        trace: None,
        ranking: None,
    };
    Ok((report, result))
}

fn ranking_pairs(ranking: &RelevanceRanking) -> Vec<(usize, f64)> {
    ranking.ranked.clone()
}

/// Problem III(a): threshold the marginal dependence at α ("controlled
/// set"), then enumerate the minimal maximizers among the survivors.
pub fn controlled_select(
    data: &DataMatrix,
    response: &ColumnSet,
    cfg: &PipelineConfig,
) -> Result<PipelineReport> {
    if cfg.mode != PipelineMode::Controlled {
        return Err(Error::InvalidMode {
            expected: "controlled",
        });
    }
    cfg.validate()?;
    let alpha = cfg.alpha.expect("validate() checked alpha presence");
    response.check_within(data.n_cols())?;
    let mut holder = None;
    let data = prepare(data, response, &cfg.base, &mut holder);
    let candidates = complement_of(response, data.n_cols());
    let ranking = marginal_ranking_among(data, &candidates, response, &cfg.base)?;
    let mut controlled: Vec<usize> = ranking
        .ranked
        .iter()
        .filter(|&&(_, v)| v >= alpha)
        .map(|&(i, _)| i)
        .collect();
    controlled.sort_unstable();
    let stage1 = StageReport {
        name: "controlled_filter",
        selected: ColumnSet::new(controlled.clone()).expect("filtered ranking has no duplicates"),
        objective: None,
        clusters: None,
        trace: None,
        ranking: Some(ranking_pairs(&ranking)),
    };
    let (stage2, _) = diverse_stage(data, &controlled, &cfg.base, "diverse", "controlled_filter")?;
    let final_selected = stage2.selected.clone();
    Ok(PipelineReport {
        mode: PipelineMode::Controlled,
        stages: alloc::vec![stage1, stage2],
        final_selected,
    })
}

/// Problem III(b): the two-stage compositions.
pub fn two_stage(
    data: &DataMatrix,
    response: &ColumnSet,
    cfg: &PipelineConfig,
) -> Result<PipelineReport> {
    if cfg.mode == PipelineMode::Controlled {
        return Err(Error::InvalidMode {
            expected: "kww_then_diverse or diverse_then_kww",
        });
    }
    cfg.validate()?;
    response.check_within(data.n_cols())?;
    let mut holder = None;
    let data = prepare(data, response, &cfg.base, &mut holder);
    let candidates = complement_of(response, data.n_cols());

    match cfg.mode {
        PipelineMode::KwwThenDiverse => {
            let ranking = marginal_ranking_among(data, &candidates, response, &cfg.base)?;
            let relevant = kww_forward(data, &ranking, response, &cfg.base)?;
            let stage1 = StageReport {
                name: "kww",
                selected: relevant.selected.clone(),
                objective: None,
                clusters: None,
                trace: Some(relevant.dcov_trace.clone()),
                ranking: Some(ranking_pairs(&ranking)),
            };
            let (stage2, _) = diverse_stage(
                data,
                relevant.selected.as_slice(),
                &cfg.base,
                "diverse",
                "kww",
            )?;
            let final_selected = stage2.selected.clone();
            Ok(PipelineReport {
                mode: cfg.mode,
                stages: alloc::vec![stage1, stage2],
                final_selected,
            })
        }
        PipelineMode::DiverseThenKww => {
            let (stage1, _) =
                diverse_stage(data, candidates.as_slice(), &cfg.base, "diverse", "input")?;
            let union = stage1.selected.clone();
            let ranking = marginal_ranking_among(data, &union, response, &cfg.base)?;
            let relevant = kww_forward(data, &ranking, response, &cfg.base)?;
            let stage2 = StageReport {
                name: "kww",
                selected: relevant.selected.clone(),
                objective: None,
                clusters: None,
                trace: Some(relevant.dcov_trace.clone()),
                ranking: Some(ranking_pairs(&ranking)),
            };
            let final_selected = relevant.selected.clone();
            Ok(PipelineReport {
                mode: cfg.mode,
                stages: alloc::vec![stage1, stage2],
                final_selected,
            })
        }
        PipelineMode::Controlled => unreachable!("rejected above"),
    }
}
