//! Quivers, labeled families and subfamilies.
//!
//! A [`LabeledFamily`] assigns to every vertex a strictly increasing list of
//! positive integer labels. The labels span the vertex space and induce its
//! filtration: step `t` is spanned by the basis vectors with label `<= t`.
//! A [`Subfamily`] selects a subset of labels at every vertex and is stored as
//! one bitmask per vertex over label *positions* in the ambient family.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Largest number of labels a single vertex may carry (one `u64` mask).
pub const MAX_LABELS: usize = 64;

pub type Mask = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

/// An acyclic directed multigraph. Parallel arrows are distinct entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    names: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new<S: Into<String>>(names: Vec<S>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex { line: 0, name: name.clone() });
            }
        }
        let mut quiver = Quiver { names, arrows: Vec::with_capacity(arrows.len()) };
        for (source, target) in arrows {
            for v in [source, target] {
                if v >= quiver.names.len() {
                    return Err(Error::UnknownVertex { line: 0, name: format!("#{v}") });
                }
            }
            quiver.push_arrow(source, target, None)?;
        }
        Ok(quiver)
    }

    /// Builds a quiver from vertex names and named arrows.
    pub fn from_names(names: &[&str], arrows: &[(&str, &str)]) -> Result<Self> {
        let index = |n: &str| {
            names.iter().position(|m| *m == n).ok_or_else(|| Error::UnknownVertex { line: 0, name: n.to_string() })
        };
        let arrows = arrows.iter().map(|(s, t)| Ok((index(s)?, index(t)?))).collect::<Result<Vec<_>>>()?;
        Quiver::new(names.to_vec(), arrows)
    }

    /// The star quiver `x1 -> y, ..., xs -> y`.
    pub fn star(s: usize) -> Self {
        let mut names: Vec<String> = (1..=s).map(|i| format!("x{i}")).collect();
        names.push("y".into());
        let arrows = (0..s).map(|i| (i, s)).collect();
        Quiver::new(names, arrows).expect("star quiver is acyclic")
    }

    fn push_arrow(&mut self, source: usize, target: usize, line: Option<usize>) -> Result<()> {
        if self.reaches(target, source) {
            return Err(Error::Cycle { line, vertex: self.names[source].clone() });
        }
        self.arrows.push(Arrow { source, target });
        Ok(())
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut stack = vec![from];
        let mut seen = vec![false; self.names.len()];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(self.arrows.iter().filter(|a| a.source == v).map(|a| a.target));
        }
        false
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A per-vertex nonnegative integer vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimensionVector(pub Vec<usize>);

impl DimensionVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl std::ops::Index<usize> for DimensionVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Per-vertex label sets, encoding both a dimension vector and a filtration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledFamily {
    labels: Vec<Vec<u64>>,
}

impl LabeledFamily {
    pub fn new(labels: Vec<Vec<u64>>) -> Result<Self> {
        for (x, ls) in labels.iter().enumerate() {
            if ls.len() > MAX_LABELS {
                return Err(Error::Invalid(format!(
                    "vertex #{x} has {} labels, at most {MAX_LABELS} are supported",
                    ls.len()
                )));
            }
            if ls.contains(&0) {
                return Err(Error::Invalid(format!("vertex #{x}: labels must be positive")));
            }
            if ls.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!("vertex #{x}: labels must be strictly increasing")));
            }
        }
        Ok(LabeledFamily { labels })
    }

    /// The family `{1, ..., n_x}` at every vertex.
    pub fn canonical(dims: &DimensionVector) -> Self {
        LabeledFamily { labels: dims.0.iter().map(|&n| (1..=n as u64).collect()).collect() }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self, x: usize) -> &[u64] {
        &self.labels[x]
    }

    pub fn all_labels(&self) -> &[Vec<u64>] {
        &self.labels
    }

    pub fn dims(&self) -> DimensionVector {
        DimensionVector(self.labels.iter().map(Vec::len).collect())
    }

    pub fn is_canonical(&self) -> bool {
        self.labels.iter().all(|ls| ls.iter().enumerate().all(|(i, &l)| l == i as u64 + 1))
    }

    pub fn full(&self) -> Subfamily {
        Subfamily { masks: self.labels.iter().map(|ls| full_mask(ls.len())).collect() }
    }

    pub fn empty(&self) -> Subfamily {
        Subfamily { masks: vec![0; self.labels.len()] }
    }

    pub fn check_on(&self, quiver: &Quiver) -> Result<()> {
        if self.vertex_count() != quiver.vertex_count() {
            return Err(Error::SizeMismatch(format!(
                "family has {} vertices, quiver has {}",
                self.vertex_count(),
                quiver.vertex_count()
            )));
        }
        Ok(())
    }
}

pub fn full_mask(n: usize) -> Mask {
    if n >= 64 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// A choice of label subset at every vertex, as position masks into an
/// ambient [`LabeledFamily`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subfamily {
    masks: Vec<Mask>,
}

impl Subfamily {
    /// Position masks, unchecked against any ambient family.
    pub fn from_masks(masks: Vec<Mask>) -> Self {
        Subfamily { masks }
    }

    /// Selects labels from `ambient`; every label must occur there.
    pub fn from_labels(quiver: &Quiver, ambient: &LabeledFamily, labels: &[Vec<u64>]) -> Result<Self> {
        if labels.len() != ambient.vertex_count() {
            return Err(Error::SizeMismatch(format!(
                "subfamily has {} vertices, ambient family has {}",
                labels.len(),
                ambient.vertex_count()
            )));
        }
        let mut masks = Vec::with_capacity(labels.len());
        for (x, ls) in labels.iter().enumerate() {
            let mut mask = 0;
            for &l in ls {
                let pos = ambient
                    .labels(x)
                    .binary_search(&l)
                    .map_err(|_| Error::NotSubfamily { vertex: quiver.name(x).to_string(), label: l })?;
                mask |= 1 << pos;
            }
            masks.push(mask);
        }
        Ok(Subfamily { masks })
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }

    pub fn mask(&self, x: usize) -> Mask {
        self.masks[x]
    }

    pub fn dims(&self) -> DimensionVector {
        DimensionVector(self.masks.iter().map(|m| m.count_ones() as usize).collect())
    }

    /// Verifies that the masks address only positions of `ambient`.
    pub fn check_within(&self, quiver: &Quiver, ambient: &LabeledFamily) -> Result<()> {
        if self.masks.len() != ambient.vertex_count() {
            return Err(Error::SizeMismatch(format!(
                "subfamily has {} vertices, ambient family has {}",
                self.masks.len(),
                ambient.vertex_count()
            )));
        }
        for (x, &m) in self.masks.iter().enumerate() {
            let n = ambient.labels(x).len();
            if m & !full_mask(n) != 0 {
                return Err(Error::NotSubfamily { vertex: quiver.name(x).to_string(), label: n as u64 + 1 });
            }
        }
        Ok(())
    }

    pub fn labels(&self, ambient: &LabeledFamily) -> Vec<Vec<u64>> {
        self.masks.iter().enumerate().map(|(x, &m)| select(ambient.labels(x), m)).collect()
    }

    pub fn is_full(&self, ambient: &LabeledFamily) -> bool {
        self.masks.iter().enumerate().all(|(x, &m)| m == full_mask(ambient.labels(x).len()))
    }

    pub fn is_empty(&self) -> bool {
        self.masks.iter().all(|&m| m == 0)
    }

    /// Complement inside `ambient`.
    pub fn complement(&self, ambient: &LabeledFamily) -> Subfamily {
        Subfamily {
            masks: self.masks.iter().enumerate().map(|(x, &m)| !m & full_mask(ambient.labels(x).len())).collect(),
        }
    }

    /// Re-expresses `inner`, given by positions inside `self`, as positions
    /// inside the ambient family of `self`.
    pub fn embed(&self, inner: &Subfamily) -> Subfamily {
        Subfamily { masks: self.masks.iter().zip(&inner.masks).map(|(&outer, &m)| deposit(m, outer)).collect() }
    }

    /// `x:1,3;y:2;z:` form; every vertex is listed.
    pub fn to_literal(&self, quiver: &Quiver, ambient: &LabeledFamily) -> String {
        let mut out = String::new();
        for (x, ls) in self.labels(ambient).iter().enumerate() {
            if x > 0 {
                out.push(';');
            }
            let _ = write!(out, "{}:{}", quiver.name(x), join(ls, ","));
        }
        out
    }

    /// `x:{1,3};y:{}` form used in inequality records.
    pub fn to_braced(&self, quiver: &Quiver, ambient: &LabeledFamily) -> String {
        let mut out = String::new();
        for (x, ls) in self.labels(ambient).iter().enumerate() {
            if x > 0 {
                out.push(';');
            }
            let _ = write!(out, "{}:{{{}}}", quiver.name(x), join(ls, ","));
        }
        out
    }
}

pub(crate) fn join(ls: &[u64], sep: &str) -> String {
    ls.iter().map(u64::to_string).collect::<Vec<_>>().join(sep)
}

fn select(labels: &[u64], mask: Mask) -> Vec<u64> {
    labels.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &l)| l).collect()
}

/// Scatters the low bits of `bits` onto the set bits of `positions`, in order.
pub(crate) fn deposit(mut bits: Mask, mut positions: Mask) -> Mask {
    let mut out = 0;
    while positions != 0 && bits != 0 {
        let low = positions & positions.wrapping_neg();
        if bits & 1 == 1 {
            out |= low;
        }
        bits >>= 1;
        positions ^= low;
    }
    out
}

/// Sub and quotient families of `ambient` determined by `sub`; both keep the
/// ambient labels.
pub fn subquotient(
    quiver: &Quiver,
    ambient: &LabeledFamily,
    sub: &Subfamily,
) -> Result<(LabeledFamily, LabeledFamily)> {
    sub.check_within(quiver, ambient)?;
    let s = LabeledFamily { labels: sub.labels(ambient) };
    let q = LabeledFamily { labels: sub.complement(ambient).labels(ambient) };
    Ok((s, q))
}

/// Relabels every vertex to `{1, ..., n_x}`, preserving order.
pub fn canonicalize(family: &LabeledFamily) -> LabeledFamily {
    LabeledFamily::canonical(&family.dims())
}

/// Parses the line-oriented quiver file format.
///
/// ```text
/// # comment
/// vertex x 1 2
/// vertex y 1 2
/// arrow x y
/// ```
pub fn parse_quiver(text: &str) -> Result<(Quiver, LabeledFamily)> {
    let mut names: Vec<String> = Vec::new();
    let mut labels: Vec<Vec<u64>> = Vec::new();
    let mut arrow_lines: Vec<(usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        match tokens.next() {
            Some("vertex") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| Error::Parse { line, msg: "vertex line needs a name".into() })?
                    .to_string();
                if names.contains(&name) {
                    return Err(Error::DuplicateVertex { line, name });
                }
                let mut ls = Vec::new();
                for tok in tokens {
                    let l: u64 = tok
                        .parse()
                        .map_err(|_| Error::Parse { line, msg: format!("label `{tok}` is not a positive integer") })?;
                    if l == 0 {
                        return Err(Error::Parse { line, msg: "labels must be positive".into() });
                    }
                    if ls.contains(&l) {
                        return Err(Error::DuplicateLabel { line, vertex: name, label: l });
                    }
                    if ls.last().is_some_and(|&last| last > l) {
                        return Err(Error::Parse { line, msg: "labels must be ascending".into() });
                    }
                    ls.push(l);
                }
                if ls.len() > MAX_LABELS {
                    return Err(Error::Parse { line, msg: format!("at most {MAX_LABELS} labels per vertex") });
                }
                names.push(name);
                labels.push(ls);
            }
            Some("arrow") => {
                let parts: Vec<&str> = tokens.collect();
                if parts.len() != 2 {
                    return Err(Error::Parse { line, msg: "arrow line needs exactly a source and a target".into() });
                }
                arrow_lines.push((line, parts[0].to_string(), parts[1].to_string()));
            }
            Some(other) => {
                return Err(Error::Parse { line, msg: format!("unknown directive `{other}`") });
            }
            None => unreachable!(),
        }
    }

    let mut quiver = Quiver { names, arrows: Vec::with_capacity(arrow_lines.len()) };
    for (line, s, t) in arrow_lines {
        let idx = |n: &str| quiver.vertex_index(n).ok_or_else(|| Error::UnknownVertex { line, name: n.to_string() });
        let (s, t) = (idx(&s)?, idx(&t)?);
        quiver.push_arrow(s, t, Some(line))?;
    }
    Ok((quiver, LabeledFamily { labels }))
}

/// Parses a subfamily literal such as `x:1,3;y:2;z:`. Omitted vertices are empty.
pub fn parse_subfamily(quiver: &Quiver, ambient: &LabeledFamily, text: &str) -> Result<Subfamily> {
    let bad = |msg: String| Error::Parse { line: 0, msg };
    let mut labels = vec![Vec::new(); quiver.vertex_count()];
    let mut given = vec![false; quiver.vertex_count()];
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, list) = part.split_once(':').ok_or_else(|| bad(format!("subfamily entry `{part}` lacks `:`")))?;
        let x = quiver
            .vertex_index(name.trim())
            .ok_or_else(|| Error::UnknownVertex { line: 0, name: name.trim().to_string() })?;
        if std::mem::replace(&mut given[x], true) {
            return Err(bad(format!("vertex `{}` listed twice", name.trim())));
        }
        for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let l: u64 = tok.parse().map_err(|_| bad(format!("label `{tok}` is not an integer")))?;
            if labels[x].contains(&l) {
                return Err(bad(format!("label {l} repeated at vertex `{}`", name.trim())));
            }
            labels[x].push(l);
        }
        labels[x].sort_unstable();
    }
    Subfamily::from_labels(quiver, ambient, &labels)
}
