//! Randomized rank oracle for filtered Hom/Ext.
//!
//! For filtered families `V`, `W` and arrow maps `v`, `w`, the map
//! `δ_{v,w}: Φ ↦ Φv − wΦ` goes from filtration-compatible vertex maps to
//! `⊕_{a:x→y} Hom(V_x, W_y)`. Its rank at a random point over `F_p` is a lower
//! bound for the generic rank and equals it with high probability
//! (Schwartz-Zippel); with `p ≈ 2^31` and five trials a miss has probability
//! below `(r/p)^5` for an `r`-row matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::euler;
use crate::field::{PrimeField, PrimeFieldMatrix};
use crate::model::{LabeledFamily, Quiver};
use crate::par::{self, Parallelism};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub field: PrimeField,
    pub trials: usize,
    pub seed: u64,
    pub mode: Parallelism,
}

impl OracleConfig {
    pub fn new(seed: u64) -> Self {
        OracleConfig { field: PrimeField::default(), trials: 5, seed, mode: Parallelism::Sequential }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_field(mut self, field: PrimeField) -> Self {
        self.field = field;
        self
    }

    pub fn with_parallelism(mut self, mode: Parallelism) -> Self {
        self.mode = mode;
        self
    }
}

/// Elementary compatible map `e_source ↦ e_target` at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompatibleMap {
    pub vertex: usize,
    pub source_label: u64,
    pub target_label: u64,
}

/// Coordinate of `Hom(V_x, W_y)` for arrow `arrow: x → y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomCoordinate {
    pub arrow: usize,
    pub source_label: u64,
    pub target_label: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaAssembly {
    pub columns: Vec<CompatibleMap>,
    pub rows: Vec<HomCoordinate>,
    pub matrix: PrimeFieldMatrix,
}

/// Uniform random arrow maps: one `dims[y] × dims[x]` matrix per arrow.
pub fn random_maps<R: Rng>(
    quiver: &Quiver,
    family: &LabeledFamily,
    field: PrimeField,
    rng: &mut R,
) -> Vec<PrimeFieldMatrix> {
    let p = field.modulus();
    quiver
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (family.labels(a.target).len(), family.labels(a.source).len());
            let mut m = PrimeFieldMatrix::zeros(field, r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, rng.random_range(0..p));
                }
            }
            m
        })
        .collect()
}

fn position(labels: &[u64], l: u64) -> usize {
    labels.binary_search(&l).expect("label from the same family")
}

/// Assembles `δ_{v,w}` in the elementary bases.
pub fn build_delta(
    quiver: &Quiver,
    source: &LabeledFamily,
    target: &LabeledFamily,
    v: &[PrimeFieldMatrix],
    w: &[PrimeFieldMatrix],
) -> Result<DeltaAssembly> {
    source.check_on(quiver)?;
    target.check_on(quiver)?;
    if v.len() != quiver.arrows().len() || w.len() != quiver.arrows().len() {
        return Err(Error::SizeMismatch("one map per arrow is required".into()));
    }
    let field = v.first().or(w.first()).map_or_else(PrimeField::default, PrimeFieldMatrix::field);
    for (i, a) in quiver.arrows().iter().enumerate() {
        let vs = (source.labels(a.target).len(), source.labels(a.source).len());
        let ws = (target.labels(a.target).len(), target.labels(a.source).len());
        if (v[i].rows(), v[i].cols()) != vs || (w[i].rows(), w[i].cols()) != ws {
            return Err(Error::SizeMismatch(format!("arrow #{i} map has the wrong shape")));
        }
        if v[i].field() != field || w[i].field() != field {
            return Err(Error::SizeMismatch("maps over different fields".into()));
        }
    }

    let mut columns = Vec::new();
    for x in 0..quiver.vertex_count() {
        for &k in source.labels(x) {
            for &j in target.labels(x).iter().take_while(|&&j| j <= k) {
                columns.push(CompatibleMap { vertex: x, source_label: k, target_label: j });
            }
        }
    }
    let mut rows = Vec::new();
    let mut block_start = Vec::with_capacity(quiver.arrows().len());
    for (ai, a) in quiver.arrows().iter().enumerate() {
        block_start.push(rows.len());
        for &s in source.labels(a.source) {
            for &t in target.labels(a.target) {
                rows.push(HomCoordinate { arrow: ai, source_label: s, target_label: t });
            }
        }
    }
    let row_index = |ai: usize, s_pos: usize, t_pos: usize| {
        let a = quiver.arrows()[ai];
        block_start[ai] + s_pos * target.labels(a.target).len() + t_pos
    };

    let mut matrix = PrimeFieldMatrix::zeros(field, rows.len(), columns.len());
    for (ci, col) in columns.iter().enumerate() {
        let x = col.vertex;
        let k_pos = position(source.labels(x), col.source_label);
        let j_pos = position(target.labels(x), col.target_label);
        for (ai, a) in quiver.arrows().iter().enumerate() {
            // Φ_y v_a term: arrow into x, V_s --v_a--> V_x --Φ--> W_x
            if a.target == x {
                for s_pos in 0..source.labels(a.source).len() {
                    let r = row_index(ai, s_pos, j_pos);
                    let val = field.add(matrix.get(r, ci), v[ai].get(k_pos, s_pos));
                    matrix.set(r, ci, val);
                }
            }
            // −w_a Φ_x term: arrow out of x, V_x --Φ--> W_x --w_a--> W_t
            if a.source == x {
                for t_pos in 0..target.labels(a.target).len() {
                    let r = row_index(ai, k_pos, t_pos);
                    let val = field.sub(matrix.get(r, ci), w[ai].get(t_pos, j_pos));
                    matrix.set(r, ci, val);
                }
            }
        }
    }
    Ok(DeltaAssembly { columns, rows, matrix })
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn trial_delta(
    quiver: &Quiver,
    source: &LabeledFamily,
    target: &LabeledFamily,
    cfg: &OracleConfig,
    trial: usize,
) -> Result<DeltaAssembly> {
    let mut rng = trial_rng(cfg.seed, trial);
    let v = random_maps(quiver, source, cfg.field, &mut rng);
    let w = random_maps(quiver, target, cfg.field, &mut rng);
    build_delta(quiver, source, target, &v, &w)
}

/// Largest rank of `δ_{v,w}` over `cfg.trials` random points.
pub fn generic_rank(
    quiver: &Quiver,
    source: &LabeledFamily,
    target: &LabeledFamily,
    cfg: &OracleConfig,
) -> Result<usize> {
    if cfg.trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    let cols = usize::try_from(euler::dim_compatible(quiver, source, target)?).expect("nonnegative");
    let rows = usize::try_from(euler::dim_hom_space(quiver, &source.dims(), &target.dims())?).expect("nonnegative");
    let ceiling = rows.min(cols);
    if ceiling == 0 {
        return Ok(0);
    }
    if cfg.mode.is_parallel() {
        let ranks = par::map_range(cfg.trials, cfg.mode, |t| {
            trial_delta(quiver, source, target, cfg, t).map(|d| d.matrix.rank())
        });
        return ranks.into_iter().try_fold(0, |best, r| Ok(best.max(r?)));
    }
    let mut best = 0;
    for t in 0..cfg.trials {
        best = best.max(trial_delta(quiver, source, target, cfg, t)?.matrix.rank());
        if best == ceiling {
            break;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub ext_min: usize,
    pub hom_min: usize,
    pub eul: i64,
}

/// Generic cokernel and kernel dimensions of `δ`.
pub fn ext_min(
    quiver: &Quiver,
    source: &LabeledFamily,
    target: &LabeledFamily,
    cfg: &OracleConfig,
) -> Result<ExtReport> {
    let cols = euler::dim_compatible(quiver, source, target)? as usize;
    let rows = euler::dim_hom_space(quiver, &source.dims(), &target.dims())? as usize;
    let rank = generic_rank(quiver, source, target, cfg)?;
    let eul = euler::eul(quiver, source, target)?;
    let report = ExtReport { rows, cols, rank, ext_min: rows - rank, hom_min: cols - rank, eul };
    debug_assert_eq!(report.hom_min as i64 - report.ext_min as i64, eul);
    Ok(report)
}

/// Whether `det δ_{v,w}` is a nonzero polynomial, tested at random points.
pub fn det_p_nonzero(
    quiver: &Quiver,
    source: &LabeledFamily,
    target: &LabeledFamily,
    cfg: &OracleConfig,
) -> Result<bool> {
    let cols = euler::dim_compatible(quiver, source, target)? as usize;
    let rows = euler::dim_hom_space(quiver, &source.dims(), &target.dims())? as usize;
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Ok(true);
    }
    for t in 0..cfg.trials.max(1) {
        if trial_delta(quiver, source, target, cfg, t)?.matrix.determinant()? != 0 {
            return Ok(true);
        }
    }
    Ok(false)
}
