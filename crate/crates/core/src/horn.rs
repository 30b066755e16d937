//! The recursive Horn set of a labeled family.
//!
//! `K ∈ Horn_Q(J)` iff `K = J`, or `eul_Q(K, J/K) ≥ 0` and every
//! `L ∈ Horn_Q(K)` with `L ≠ K` and `eul_Q(L, K/L) = 0` satisfies
//! `eul_Q(L, J/L) ≥ 0`.
//!
//! Membership only depends on the relative order of labels, so the engine
//! works on position masks and memoizes one [`HornEntry`] per dimension vector.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::euler::eul_masks;
use crate::model::{full_mask, DimensionVector, LabeledFamily, Mask, Quiver, Subfamily};
use crate::par::{self, Parallelism};

/// Default cap on the number of subfamilies enumerated for one family.
pub const DEFAULT_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornMember {
    pub sub: Subfamily,
    pub eul: i64,
}

/// Horn set of the canonical family with a given dimension vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornEntry {
    pub members: Vec<HornMember>,
    /// Indices into `members` with `eul = 0`.
    pub essential: Vec<usize>,
}

impl HornEntry {
    pub fn essential(&self) -> impl Iterator<Item = &HornMember> {
        self.essential.iter().map(|&i| &self.members[i])
    }
}

/// Memo table keyed by canonical dimension vector. Concurrent readers are
/// allowed; racing writers compute identical entries and the first insert wins.
#[derive(Debug, Default)]
pub struct HornTable {
    entries: RwLock<HashMap<DimensionVector, Arc<HornEntry>>>,
}

impl HornTable {
    pub fn get(&self, dims: &DimensionVector) -> Option<Arc<HornEntry>> {
        self.entries.read().expect("horn table poisoned").get(dims).cloned()
    }

    fn insert(&self, dims: DimensionVector, entry: Arc<HornEntry>) -> Arc<HornEntry> {
        let mut map = self.entries.write().expect("horn table poisoned");
        map.entry(dims).or_insert(entry).clone()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("horn table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Number of subfamilies of a family with the given dimensions, optionally
/// restricted to cardinalities `filter`.
pub fn subfamily_count(dims: &DimensionVector, filter: Option<&DimensionVector>) -> u128 {
    let mut total: u128 = 1;
    for (x, &n) in dims.0.iter().enumerate() {
        let c = match filter {
            None => {
                if n >= 127 {
                    return u128::MAX;
                }
                1u128 << n
            }
            Some(f) => binomial(n, f.0[x]),
        };
        total = total.saturating_mul(c);
    }
    total
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Iterates subfamilies in odometer order: the last vertex varies fastest and
/// each vertex runs through its subsets in binary-counting order (bit `i` is
/// the `i`-th smallest label).
#[derive(Debug, Clone)]
pub struct Subfamilies {
    dims: Vec<usize>,
    filter: Option<Vec<usize>>,
    current: Option<Vec<Mask>>,
}

impl Subfamilies {
    fn first(&self, x: usize) -> Option<Mask> {
        let n = self.dims[x];
        match &self.filter {
            None => Some(0),
            Some(f) if f[x] <= n => Some(full_mask(f[x])),
            Some(_) => None,
        }
    }

    fn next_at(&self, x: usize, m: Mask) -> Option<Mask> {
        let limit = full_mask(self.dims[x]);
        if m == limit {
            return None;
        }
        match &self.filter {
            None => Some(m + 1),
            Some(_) if m == 0 => None,
            Some(_) => {
                // next larger integer with the same popcount
                let low = m & m.wrapping_neg();
                let ripple = m.wrapping_add(low);
                if ripple == 0 {
                    return None;
                }
                let next = ripple | (((m ^ ripple) >> 2) / low);
                (next & !limit == 0).then_some(next)
            }
        }
    }
}

impl Iterator for Subfamilies {
    type Item = Subfamily;

    fn next(&mut self) -> Option<Subfamily> {
        let cur = self.current.as_mut()?;
        let out = Subfamily::from_masks(cur.clone());
        let mut x = cur.len();
        loop {
            if x == 0 {
                self.current = None;
                break;
            }
            x -= 1;
            let m = self.current.as_ref().unwrap()[x];
            if let Some(next) = self.next_at(x, m) {
                self.current.as_mut().unwrap()[x] = next;
                break;
            }
            let first = self.first(x).unwrap();
            self.current.as_mut().unwrap()[x] = first;
        }
        Some(out)
    }
}

/// Every subfamily of `family` (with `|K_x| = filter_x` when a filter is
/// given), refusing to start if the count exceeds `cap`.
pub fn enumerate_subfamilies(
    family: &LabeledFamily,
    filter: Option<&DimensionVector>,
    cap: u128,
) -> Result<Subfamilies> {
    let dims = family.dims();
    if let Some(f) = filter {
        if f.len() != dims.len() {
            return Err(Error::SizeMismatch("cardinality filter length".into()));
        }
    }
    let requested = subfamily_count(&dims, filter);
    if requested > cap {
        return Err(Error::CapExceeded { requested, cap });
    }
    let mut it = Subfamilies { dims: dims.0.clone(), filter: filter.map(|f| f.0.clone()), current: None };
    it.current = (0..dims.len()).map(|x| it.first(x)).collect();
    Ok(it)
}

/// Memoizing Horn-set engine bound to one quiver.
#[derive(Debug)]
pub struct HornEngine<'q> {
    quiver: &'q Quiver,
    memoize: bool,
    cap: u128,
    mode: Parallelism,
    table: HornTable,
}

impl<'q> HornEngine<'q> {
    pub fn new(quiver: &'q Quiver) -> Self {
        HornEngine {
            quiver,
            memoize: true,
            cap: DEFAULT_CAP,
            mode: Parallelism::Sequential,
            table: HornTable::default(),
        }
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_memo(mut self, memoize: bool) -> Self {
        self.memoize = memoize;
        self
    }

    pub fn with_parallelism(mut self, mode: Parallelism) -> Self {
        self.mode = mode;
        self
    }

    pub fn quiver(&self) -> &'q Quiver {
        self.quiver
    }

    pub fn cap(&self) -> u128 {
        self.cap
    }

    pub fn parallelism(&self) -> Parallelism {
        self.mode
    }

    pub fn table(&self) -> &HornTable {
        &self.table
    }

    /// Horn set of the canonical family with dimensions `dims`.
    pub fn entry(&self, dims: &DimensionVector) -> Result<Arc<HornEntry>> {
        if dims.len() != self.quiver.vertex_count() {
            return Err(Error::SizeMismatch("dimension vector length".into()));
        }
        if self.memoize {
            if let Some(e) = self.table.get(dims) {
                return Ok(e);
            }
        }
        let family = LabeledFamily::canonical(dims);
        let candidates: Vec<Subfamily> = enumerate_subfamilies(&family, None, self.cap)?.collect();
        let verdicts = par::map(&candidates, self.mode, |k| self.member_masks(&dims.0, k.masks()));
        let mut members = Vec::new();
        let mut essential = Vec::new();
        for (k, verdict) in candidates.into_iter().zip(verdicts) {
            if let Some(eul) = verdict? {
                if eul == 0 {
                    essential.push(members.len());
                }
                members.push(HornMember { sub: k, eul });
            }
        }
        let entry = Arc::new(HornEntry { members, essential });
        Ok(if self.memoize { self.table.insert(dims.clone(), entry) } else { entry })
    }

    /// `Some(eul_Q(K, J/K))` if `K ∈ Horn_Q(J)`, else `None`.
    fn member_masks(&self, dims: &[usize], masks: &[Mask]) -> Result<Option<i64>> {
        let full = masks.iter().zip(dims).all(|(&m, &n)| m == full_mask(n));
        if full {
            return Ok(Some(0));
        }
        let eul = eul_masks(self.quiver, dims, masks);
        if eul < 0 {
            return Ok(None);
        }
        let sub = Subfamily::from_masks(masks.to_vec());
        let inner_dims = sub.dims();
        let inner = self.entry(&inner_dims)?;
        for l in inner.essential() {
            if l.sub.masks().iter().zip(&inner_dims.0).all(|(&m, &n)| m == full_mask(n)) {
                continue;
            }
            let embedded = sub.embed(&l.sub);
            if eul_masks(self.quiver, dims, embedded.masks()) < 0 {
                return Ok(None);
            }
        }
        Ok(Some(eul))
    }

    /// All Horn members of `family`, as subfamilies of `family`, in
    /// enumeration order.
    pub fn horn_families(&self, family: &LabeledFamily) -> Result<Vec<HornMember>> {
        family.check_on(self.quiver)?;
        Ok(self.entry(&family.dims())?.members.clone())
    }

    /// Horn members with `eul_Q(K, J/K) = 0`.
    pub fn essential_horn(&self, family: &LabeledFamily) -> Result<Vec<HornMember>> {
        family.check_on(self.quiver)?;
        Ok(self.entry(&family.dims())?.essential().cloned().collect())
    }

    /// Decides `K ⊆_Q J` through the recursion.
    pub fn is_q_intersecting(&self, family: &LabeledFamily, sub: &Subfamily) -> Result<bool> {
        family.check_on(self.quiver)?;
        sub.check_within(self.quiver, family)?;
        Ok(self.member_masks(&family.dims().0, sub.masks())?.is_some())
    }
}

pub fn horn_families(quiver: &Quiver, family: &LabeledFamily) -> Result<Vec<HornMember>> {
    HornEngine::new(quiver).horn_families(family)
}

pub fn essential_horn(quiver: &Quiver, family: &LabeledFamily) -> Result<Vec<HornMember>> {
    HornEngine::new(quiver).essential_horn(family)
}

pub fn is_q_intersecting(quiver: &Quiver, family: &LabeledFamily, sub: &Subfamily) -> Result<bool> {
    HornEngine::new(quiver).is_q_intersecting(family, sub)
}
