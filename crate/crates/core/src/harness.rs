//! Recursion-versus-oracle harnesses and small-quiver sweeps.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::euler;
use crate::horn::{enumerate_subfamilies, HornEngine};
use crate::model::{subquotient, DimensionVector, LabeledFamily, Quiver, Subfamily};
use crate::oracle::{ext_min, OracleConfig};
use crate::par;

/// Every acyclic quiver on `1..=max_vertices` vertices with at most
/// `max_arrows` arrows (parallel arrows allowed). Labeled vertices, so
/// isomorphic copies are listed separately.
pub fn small_quivers(max_vertices: usize, max_arrows: usize) -> Vec<Quiver> {
    let mut out = Vec::new();
    for v in 1..=max_vertices {
        let names: Vec<String> = (0..v).map(vertex_name).collect();
        let pairs: Vec<(usize, usize)> =
            (0..v).flat_map(|i| (0..v).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let mut chosen = Vec::new();
        multisets(&pairs, 0, max_arrows, &mut chosen, &mut |arrows| {
            if let Ok(q) = Quiver::new(names.clone(), arrows.to_vec()) {
                out.push(q);
            }
        });
    }
    out
}

fn vertex_name(i: usize) -> String {
    const NAMES: [&str; 8] = ["x", "y", "z", "u", "v", "w", "s", "t"];
    NAMES.get(i).map_or_else(|| format!("v{i}"), |s| s.to_string())
}

fn multisets<F: FnMut(&[(usize, usize)])>(
    pairs: &[(usize, usize)],
    start: usize,
    left: usize,
    chosen: &mut Vec<(usize, usize)>,
    emit: &mut F,
) {
    emit(chosen);
    if left == 0 {
        return;
    }
    for i in start..pairs.len() {
        chosen.push(pairs[i]);
        multisets(pairs, i, left - 1, chosen, emit);
        chosen.pop();
    }
}

/// All dimension vectors with entries in `0..=max_dim`.
pub fn dimension_vectors(vertices: usize, max_dim: usize) -> Vec<DimensionVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..vertices {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (0..=max_dim).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(DimensionVector).collect()
}

/// One recursion-versus-oracle comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub sub: Subfamily,
    pub recursion: bool,
    pub oracle_ext: usize,
}

impl Instance {
    pub fn agree(&self) -> bool {
        self.recursion == (self.oracle_ext == 0)
    }
}

/// `K ∈ Horn_Q(J)` versus generic `ext(K, J/K) = 0` for every subfamily.
pub fn theo1(engine: &HornEngine<'_>, family: &LabeledFamily, cfg: &OracleConfig) -> Result<Vec<Instance>> {
    let quiver = engine.quiver();
    let subs: Vec<Subfamily> = enumerate_subfamilies(family, None, engine.cap())?.collect();
    par::map(&subs, cfg.mode, |k| -> Result<Instance> {
        let recursion = engine.is_q_intersecting(family, k)?;
        let (s, t) = subquotient(quiver, family, k)?;
        let oracle_ext = ext_min(quiver, &s, &t, cfg)?.ext_min;
        Ok(Instance { sub: k.clone(), recursion, oracle_ext })
    })
    .into_iter()
    .collect()
}

pub fn render_theo1(quiver: &Quiver, family: &LabeledFamily, instances: &[Instance], out: &mut String) {
    for i in instances {
        let _ = writeln!(
            out,
            "INSTANCE {} recursion={} oracle_ext={} agree={}",
            i.sub.to_literal(quiver, family),
            u8::from(i.recursion),
            i.oracle_ext,
            u8::from(i.agree())
        );
    }
}

/// Filtered pair check: `ext(V, W) = 0` iff every essential Horn member `S`
/// of `V` has `eul(S, W) ≥ 0`, and `ext = 0` forces `eul(S, W) ≥ 0` for all
/// Horn members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCheck {
    pub source: LabeledFamily,
    pub target: LabeledFamily,
    pub ext: usize,
    pub all_horn_nonnegative: bool,
    pub essential_nonnegative: bool,
}

impl PairCheck {
    pub fn agree(&self) -> bool {
        let forward = self.ext != 0 || self.all_horn_nonnegative;
        let converse = !self.essential_nonnegative || self.ext == 0;
        forward && converse
    }
}

pub fn check_pair(
    engine: &HornEngine<'_>,
    source: &LabeledFamily,
    target: &LabeledFamily,
    cfg: &OracleConfig,
) -> Result<PairCheck> {
    let quiver = engine.quiver();
    let ext = ext_min(quiver, source, target, cfg)?.ext_min;
    let mut all_horn_nonnegative = true;
    let mut essential_nonnegative = true;
    for m in engine.horn_families(source)? {
        let s = LabeledFamily::new(m.sub.labels(source))?;
        if euler::eul(quiver, &s, target)? < 0 {
            all_horn_nonnegative = false;
            if m.eul == 0 {
                essential_nonnegative = false;
            }
        }
    }
    Ok(PairCheck { source: source.clone(), target: target.clone(), ext, all_horn_nonnegative, essential_nonnegative })
}

/// Random label sets with at most `max_dim` labels drawn from `1..=max_label`.
pub fn random_family<R: Rng>(vertices: usize, max_dim: usize, max_label: u64, rng: &mut R) -> LabeledFamily {
    let labels = (0..vertices)
        .map(|_| {
            let n = rng.random_range(0..=max_dim.min(max_label as usize));
            let mut ls: Vec<u64> = Vec::with_capacity(n);
            while ls.len() < n {
                let l = rng.random_range(1..=max_label);
                if !ls.contains(&l) {
                    ls.push(l);
                }
            }
            ls.sort_unstable();
            ls
        })
        .collect();
    LabeledFamily::new(labels).expect("sorted distinct positive labels")
}

pub fn theo2(
    engine: &HornEngine<'_>,
    pairs: usize,
    max_dim: usize,
    max_label: u64,
    cfg: &OracleConfig,
) -> Result<Vec<PairCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7468_656f);
    let n = engine.quiver().vertex_count();
    let drawn: Vec<(LabeledFamily, LabeledFamily)> = (0..pairs)
        .map(|_| (random_family(n, max_dim, max_label, &mut rng), random_family(n, max_dim, max_label, &mut rng)))
        .collect();
    par::map(&drawn, cfg.mode, |(v, w)| check_pair(engine, v, w, cfg)).into_iter().collect()
}

pub fn render_family(quiver: &Quiver, family: &LabeledFamily) -> String {
    (0..quiver.vertex_count())
        .map(|x| format!("{}:{}", quiver.name(x), crate::model::join(family.labels(x), ",")))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn render_theo2(quiver: &Quiver, checks: &[PairCheck], out: &mut String) {
    for c in checks {
        let _ = writeln!(
            out,
            "PAIR {} | {} ext={} horn_nonneg={} essential_nonneg={} agree={}",
            render_family(quiver, &c.source),
            render_family(quiver, &c.target),
            c.ext,
            u8::from(c.all_horn_nonnegative),
            u8::from(c.essential_nonnegative),
            u8::from(c.agree())
        );
    }
}

/// Sufficient condition for Q-intersection: `eul(K, J/K) ≥ 0` and every
/// essential proper Horn member of `K` is Q-intersecting in `J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SufficiencyCheck {
    pub sub: Subfamily,
    pub hypothesis: bool,
    pub recursion: bool,
    pub oracle_ext: usize,
}

impl SufficiencyCheck {
    pub fn agree(&self) -> bool {
        !self.hypothesis || (self.recursion && self.oracle_ext == 0)
    }
}

pub fn theo3(engine: &HornEngine<'_>, family: &LabeledFamily, cfg: &OracleConfig) -> Result<Vec<SufficiencyCheck>> {
    let quiver = engine.quiver();
    let subs: Vec<Subfamily> =
        enumerate_subfamilies(family, None, engine.cap())?.filter(|k| !k.is_full(family)).collect();
    let checked = par::map(&subs, cfg.mode, |k| -> Result<Option<SufficiencyCheck>> {
        if euler::eul_sub(quiver, family, k)? < 0 {
            return Ok(None);
        }
        let inner_dims = k.dims();
        let inner = engine.entry(&inner_dims)?;
        let mut hypothesis = true;
        for u in inner.essential() {
            if u.sub.is_full(&LabeledFamily::canonical(&inner_dims)) {
                continue;
            }
            if !engine.is_q_intersecting(family, &k.embed(&u.sub))? {
                hypothesis = false;
                break;
            }
        }
        let recursion = engine.is_q_intersecting(family, k)?;
        let (s, t) = subquotient(quiver, family, k)?;
        let oracle_ext = ext_min(quiver, &s, &t, cfg)?.ext_min;
        Ok(Some(SufficiencyCheck { sub: k.clone(), hypothesis, recursion, oracle_ext }))
    });
    let mut out = Vec::new();
    for c in checked {
        if let Some(c) = c? {
            out.push(c);
        }
    }
    Ok(out)
}

pub fn render_theo3(quiver: &Quiver, family: &LabeledFamily, checks: &[SufficiencyCheck], out: &mut String) {
    for c in checks {
        let _ = writeln!(
            out,
            "INSTANCE {} hypothesis={} recursion={} oracle_ext={} agree={}",
            c.sub.to_literal(quiver, family),
            u8::from(c.hypothesis),
            u8::from(c.recursion),
            c.oracle_ext,
            u8::from(c.agree())
        );
    }
}

pub fn render_quiver(quiver: &Quiver) -> String {
    let arrows: Vec<String> =
        quiver.arrows().iter().map(|a| format!("{}->{}", quiver.name(a.source), quiver.name(a.target))).collect();
    format!("vertices={} arrows=[{}]", quiver.names().join(","), arrows.join(","))
}
