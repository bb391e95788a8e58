//! Kneading maps, cutting times, admissibility, and the block-structured
//! `(a, q)` family.
//!
//! A kneading map is a function `Q : {0,..,K} -> N_0` with `Q(0) = 0` and
//! `Q(k) <= k - 1`. Its cutting times are the integers defined by `S_0 = 1`
//! and `S_k = S_{k-1} + S_{Q(k)}`; they grow at least linearly and in general
//! exponentially, so they are kept as arbitrary-precision integers from the
//! start.
//!
//! The [`AqSpec`] type encodes the two-parameter family: a strictly
//! increasing index sequence `q` with `q_0 = 0` together with positive weight
//! vectors `a_n = (a_{n,0}, .., a_{n,n})` subject to the jump condition
//! `q_{r_n} - q_{r_n - 1} = a_{n,0} + .. + a_{n,n}`, where `r_n` is the
//! triangular index `(n+1)(n+2)/2`. The induced map is zero on `[0, q_2]` and
//! takes the constant value `q_{r_{n-1}+m}` on each block `I_{n,m}` and
//! `J_{n,m}`; only a finite truncation is ever materialized, and every
//! operation takes an explicit depth and fails loudly rather than
//! extrapolate.

use crate::rational::{nat_vec_json, nat_vec_vec_json, Nat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KneadingError {
    #[error("depth exceeded: need index {needed}, data defined through {depth}")]
    DepthExceeded { needed: u64, depth: u64 },
    #[error("invalid kneading map at k = {index}: {reason}")]
    InvalidMap { index: u64, reason: String },
    #[error("spec does not determine the requested data: {0}")]
    InsufficientSpec(String),
    #[error("invalid (a, q) spec: {field}: {reason}")]
    InvalidSpec { field: String, reason: String },
}

/// Triangular index `r_n = (n+1)(n+2)/2`, the positions in `q` pinned by the
/// jump condition.
pub fn triangular_index(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// True if `r = r_n` for some `n >= 0`.
pub fn is_triangular_index(r: usize) -> bool {
    let mut n = 0;
    loop {
        let t = triangular_index(n);
        if t == r {
            return true;
        }
        if t > r {
            return false;
        }
        n += 1;
    }
}

/// Where a kneading map came from; generated sources carry enough structure
/// to answer questions about the map beyond its materialized depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapSource {
    #[serde(rename = "table")]
    Table,
    #[serde(rename = "aq")]
    AqGenerated,
    #[serde(rename = "tent")]
    TentExtracted,
    #[serde(rename = "cf")]
    CfGenerated,
}

/// One maximal constant run of an `(a, q)`-generated map, `Q = value` on
/// `[start, end]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRun {
    pub start: u64,
    pub end: u64,
    pub value: u64,
}

/// Run-length form of the materialized part of an `(a, q)` map, plus the
/// prefix bound `q_2` below which the map vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockIndex {
    pub q2: u64,
    pub runs: Vec<BlockRun>,
}

/// A finitely-truncated kneading map `Q(0..=depth)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KneadingMap {
    #[serde(with = "values_json")]
    values: Vec<u64>,
    source: MapSource,
    #[serde(skip)]
    blocks: Option<BlockIndex>,
    /// Lower bound for every map value beyond `depth`, when the generator
    /// can certify one. `None` means the tail is genuinely unknown.
    #[serde(skip)]
    tail_floor: Option<u64>,
}

mod values_json {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[u64], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(values)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<u64>, D::Error> {
        Vec::<u64>::deserialize(de)
    }
}

impl KneadingMap {
    /// Wraps an explicit value table, checking the map invariants.
    pub fn from_table(values: Vec<u64>) -> Result<Self, KneadingError> {
        Self::with_source(values, MapSource::Table, None, None)
    }

    pub(crate) fn with_source(
        values: Vec<u64>,
        source: MapSource,
        blocks: Option<BlockIndex>,
        tail_floor: Option<u64>,
    ) -> Result<Self, KneadingError> {
        if values.is_empty() {
            return Err(KneadingError::InvalidMap {
                index: 0,
                reason: "empty value table".into(),
            });
        }
        if values[0] != 0 {
            return Err(KneadingError::InvalidMap {
                index: 0,
                reason: format!("Q(0) = {} but must be 0", values[0]),
            });
        }
        for (k, &v) in values.iter().enumerate().skip(1) {
            if v as u128 > (k as u128) - 1 {
                return Err(KneadingError::InvalidMap {
                    index: k as u64,
                    reason: format!("Q({k}) = {v} exceeds k - 1"),
                });
            }
        }
        Ok(KneadingMap {
            values,
            source,
            blocks,
            tail_floor,
        })
    }

    /// `Q ≡ 0` truncated at `depth`.
    pub fn constant_zero(depth: usize) -> Self {
        KneadingMap {
            values: vec![0; depth + 1],
            source: MapSource::Table,
            blocks: None,
            tail_floor: Some(0),
        }
    }

    /// `Q(k) = max(0, k - 2)` truncated at `depth`; its cutting times are the
    /// Fibonacci numbers.
    pub fn fibonacci(depth: usize) -> Self {
        let values = (0..=depth as u64).map(|k| k.saturating_sub(2)).collect();
        KneadingMap {
            values,
            source: MapSource::Table,
            blocks: None,
            tail_floor: Some((depth as u64 + 1).saturating_sub(2)),
        }
    }

    /// Largest defined index `K`.
    pub fn depth(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn source(&self) -> MapSource {
        self.source
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn blocks(&self) -> Option<&BlockIndex> {
        self.blocks.as_ref()
    }

    pub fn value(&self, k: u64) -> Result<u64, KneadingError> {
        self.values
            .get(k as usize)
            .copied()
            .ok_or(KneadingError::DepthExceeded {
                needed: k,
                depth: self.depth(),
            })
    }

    /// Lower bound for `min { Q(k) : k >= from }` over the *infinite* map,
    /// or `None` when nothing is known past the table.
    pub fn min_value_from(&self, from: u64) -> Option<u64> {
        let depth = self.depth();
        let window_min = if from <= depth {
            self.values[from as usize..].iter().copied().min()
        } else {
            None
        };
        let tail = self.tail_floor?;
        Some(match window_min {
            Some(w) => w.min(tail),
            None => tail,
        })
    }

    /// Largest `k` with `Q(k) <= bound`, over the infinite map, when the
    /// source certifies that no later index qualifies. Returns
    /// `Ok(None)` if no index qualifies at all.
    pub fn last_index_with_value_at_most(
        &self,
        bound: u64,
    ) -> Result<Option<u64>, KneadingError> {
        let last_in_window = self
            .values
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &v)| v <= bound)
            .map(|(k, _)| k as u64);
        let tail = self.tail_floor.ok_or_else(|| {
            KneadingError::InsufficientSpec(format!(
                "cannot certify that Q stays above {bound} beyond depth {}",
                self.depth()
            ))
        })?;
        if tail <= bound {
            return Err(KneadingError::InsufficientSpec(format!(
                "map values beyond depth {} may still dip to {tail} <= {bound}",
                self.depth()
            )));
        }
        Ok(last_in_window)
    }
}

/// Cutting times `S_0..S_K` of a kneading map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuttingTimes {
    values: Vec<Nat>,
}

impl CuttingTimes {
    pub fn values(&self) -> &[Nat] {
        &self.values
    }

    pub fn depth(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn get(&self, k: u64) -> Result<&Nat, KneadingError> {
        self.values
            .get(k as usize)
            .ok_or(KneadingError::DepthExceeded {
                needed: k,
                depth: self.depth(),
            })
    }

    /// Index `j` with `S_j` equal to `value`, if any. The sequence is
    /// strictly increasing, so binary search applies.
    pub fn find(&self, value: &Nat) -> Option<u64> {
        self.values
            .binary_search_by(|s| s.cmp(value))
            .ok()
            .map(|i| i as u64)
    }

    pub(crate) fn from_values(values: Vec<Nat>) -> Self {
        CuttingTimes { values }
    }
}

/// Computes `S_0..S_K` by the recursion `S_k = S_{k-1} + S_{Q(k)}`, then
/// re-checks every step of the recursion on the finished table.
pub fn cutting_times(map: &KneadingMap, k_max: u64) -> Result<CuttingTimes, KneadingError> {
    if k_max > map.depth() {
        return Err(KneadingError::DepthExceeded {
            needed: k_max,
            depth: map.depth(),
        });
    }
    let mut s: Vec<Nat> = Vec::with_capacity(k_max as usize + 1);
    s.push(Nat::one());
    for k in 1..=k_max {
        let q = map.value(k)?;
        let next = &s[k as usize - 1] + &s[q as usize];
        s.push(next);
    }
    for k in 1..=k_max as usize {
        let q = map.values[k] as usize;
        if s[k] != &s[k - 1] + &s[q] {
            return Err(KneadingError::InvalidMap {
                index: k as u64,
                reason: "cutting-time recursion re-check failed".into(),
            });
        }
        if s[k] <= s[k - 1] {
            return Err(KneadingError::InvalidMap {
                index: k as u64,
                reason: "cutting times not strictly increasing".into(),
            });
        }
    }
    Ok(CuttingTimes::from_values(s))
}

/// Outcome of the truncated admissibility test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    /// No violation found and every comparison resolved within the bound.
    AdmissibleUpToBound,
    /// The lexicographic condition (or a basic map invariant) fails at `k`.
    Violation { k: u64 },
    /// Some comparison at `k` ran out of table or bound while still equal.
    Undetermined { k: u64 },
}

/// Tests the admissibility condition: for every `k >= 1` the shifted value
/// sequence at `k` must dominate the one at `Q(Q(Q(k)))` lexicographically,
/// index 0 dominant.
///
/// The infinite comparison is truncated: each `k` is compared term by term
/// for `depth_bound` terms. A strict difference decides it; staying equal
/// through the whole window also satisfies the relation (it is reflexive).
/// Only `k` whose full window fits inside the table are inspected, so the
/// verdict is explicitly a bounded claim; when the table is too shallow to
/// fit even one window the result is [`Admissibility::Undetermined`].
pub fn check_admissible(map: &KneadingMap, depth_bound: u64) -> Admissibility {
    let depth = map.depth();
    if map.values[0] != 0 {
        return Admissibility::Violation { k: 0 };
    }
    for k in 1..=depth {
        if map.values[k as usize] > k - 1 {
            return Admissibility::Violation { k };
        }
    }
    if depth_bound == 0 || depth_bound >= depth {
        return Admissibility::Undetermined { k: 1 };
    }
    // qqq < k, so k + depth_bound <= depth keeps both sides in range
    let last = depth - depth_bound;
    for k in 1..=last {
        let qk = map.values[k as usize];
        let qq = map.values[qk as usize];
        let qqq = map.values[qq as usize];
        for j in 1..=depth_bound {
            let left = map.values[(k + j) as usize];
            let right = map.values[(qqq + j) as usize];
            if left > right {
                break;
            }
            if left < right {
                return Admissibility::Violation { k };
            }
        }
    }
    Admissibility::AdmissibleUpToBound
}

/// The `(a, q)` data generating a kneading map of the two-parameter family.
///
/// `q` holds `q_0..q_R` and `a` holds `a_1..a_N` (so `a[n-1]` is the vector
/// for level `n`, of length `n + 1`). Values are arbitrary-precision: the
/// realization algorithm produces indices far beyond `u64`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AqSpecRaw", into = "AqSpecRaw")]
pub struct AqSpec {
    q: Vec<Nat>,
    a: Vec<Vec<Nat>>,
}

#[derive(Serialize, Deserialize)]
struct AqSpecRaw {
    #[serde(with = "nat_vec_json")]
    q: Vec<Nat>,
    #[serde(with = "nat_vec_vec_json")]
    a: Vec<Vec<Nat>>,
}

impl TryFrom<AqSpecRaw> for AqSpec {
    type Error = KneadingError;
    fn try_from(raw: AqSpecRaw) -> Result<Self, Self::Error> {
        AqSpec::new(raw.q, raw.a)
    }
}

impl From<AqSpec> for AqSpecRaw {
    fn from(spec: AqSpec) -> Self {
        AqSpecRaw {
            q: spec.q,
            a: spec.a,
        }
    }
}

impl AqSpec {
    pub fn new(q: Vec<Nat>, a: Vec<Vec<Nat>>) -> Result<Self, KneadingError> {
        if q.is_empty() || !q[0].is_zero() {
            return Err(KneadingError::InvalidSpec {
                field: "q0".into(),
                reason: "q must start with q_0 = 0".into(),
            });
        }
        for (i, w) in q.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(KneadingError::InvalidSpec {
                    field: format!("q[{}]", i + 1),
                    reason: "q must be strictly increasing".into(),
                });
            }
        }
        let levels = a.len();
        // q entries past r_{N+1} - 1 belong to blocks no weight vector defines
        if q.len() > triangular_index(levels + 1) {
            return Err(KneadingError::InvalidSpec {
                field: "q".into(),
                reason: format!(
                    "q defines indices up to {} but only indices up to r_{} - 1 = {} are \
                     usable with {} weight vectors",
                    q.len() - 1,
                    levels + 1,
                    triangular_index(levels + 1) - 1,
                    levels
                ),
            });
        }
        for (idx, vec) in a.iter().enumerate() {
            let n = idx + 1;
            if vec.len() != n + 1 {
                return Err(KneadingError::InvalidSpec {
                    field: format!("a[{n}]"),
                    reason: format!("expected {} entries, got {}", n + 1, vec.len()),
                });
            }
            if vec.iter().any(|x| x.is_zero()) {
                return Err(KneadingError::InvalidSpec {
                    field: format!("a[{n}][i] >= 1"),
                    reason: "weight entries must be strictly positive".into(),
                });
            }
            let rn = triangular_index(n);
            if rn >= q.len() {
                return Err(KneadingError::InvalidSpec {
                    field: format!("q[r_{n}]"),
                    reason: format!("weight vector a_{n} given but q_{rn} missing"),
                });
            }
            let jump = &q[rn] - &q[rn - 1];
            let sum: Nat = vec.iter().sum();
            if jump != sum {
                return Err(KneadingError::InvalidSpec {
                    field: format!("jump condition at n = {n}"),
                    reason: format!(
                        "q_{} - q_{} = {} but sum of a_{n} = {}",
                        rn,
                        rn - 1,
                        jump,
                        sum
                    ),
                });
            }
        }
        Ok(AqSpec { q, a })
    }

    /// Number of weight vectors `N`.
    pub fn levels(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> &[Nat] {
        &self.q
    }

    pub fn a(&self) -> &[Vec<Nat>] {
        &self.a
    }

    pub fn q_at(&self, r: usize) -> Result<&Nat, KneadingError> {
        self.q.get(r).ok_or_else(|| {
            KneadingError::InsufficientSpec(format!("q_{r} not defined (have {})", self.q.len()))
        })
    }

    pub fn q_u64(&self, r: usize) -> Result<u64, KneadingError> {
        u64::try_from(self.q_at(r)?).map_err(|_| {
            KneadingError::InsufficientSpec(format!("q_{r} does not fit in 64 bits"))
        })
    }

    /// `a_{n,m}` with `n >= 1`, `m <= n`.
    pub fn a_at(&self, n: usize, m: usize) -> Result<&Nat, KneadingError> {
        self.a
            .get(n - 1)
            .and_then(|v| v.get(m))
            .ok_or_else(|| KneadingError::InsufficientSpec(format!("a_{{{n},{m}}} not defined")))
    }

    /// The constant blocks of the induced map, in index order: the zero
    /// prefix, then `I_{n,m}` and `J_{n,m}` as far as `q` and `a` determine
    /// them.
    pub fn spec_blocks(&self) -> Vec<SpecBlock> {
        let mut out = Vec::new();
        let prefix_end = self.q[self.q.len().min(3) - 1].clone();
        out.push(SpecBlock {
            start: Nat::zero(),
            end: prefix_end,
            value: Nat::zero(),
        });
        if self.q.len() < 3 {
            return out;
        }
        for n in 1..=self.a.len() {
            let rn = triangular_index(n);
            let rn_prev = triangular_index(n - 1);
            // I_{n,m}: consecutive runs of lengths a_{n,m} after q_{r_n - 1}
            let mut cursor = self.q[rn - 1].clone();
            for m in 0..=n {
                let len = &self.a[n - 1][m];
                let start = &cursor + 1u32;
                let end = &cursor + len;
                out.push(SpecBlock {
                    start,
                    end: end.clone(),
                    value: self.q[rn_prev + m].clone(),
                });
                cursor = end;
            }
            debug_assert_eq!(cursor, self.q[rn]);
            // J_{n,m} = [q_{r_n + m} + 1, q_{r_n + m + 1}], while q extends
            for m in 0..=n {
                let lo_idx = rn + m;
                let hi_idx = rn + m + 1;
                if hi_idx >= self.q.len() {
                    break;
                }
                out.push(SpecBlock {
                    start: &self.q[lo_idx] + 1u32,
                    end: self.q[hi_idx].clone(),
                    value: self.q[rn_prev + m].clone(),
                });
            }
        }
        out
    }

    /// Largest index at which the induced map is determined.
    pub fn coverage_end(&self) -> Nat {
        self.spec_blocks().last().unwrap().end.clone()
    }

    /// Materializes `Q_{(a,q)}(0..=k_max)` together with its block metadata.
    pub fn kneading_map(&self, k_max: u64) -> Result<KneadingMap, KneadingError> {
        let blocks = self.spec_blocks();
        let coverage = &blocks.last().unwrap().end;
        if Nat::from(k_max) > *coverage {
            return Err(KneadingError::InsufficientSpec(format!(
                "index {k_max} not covered; blocks determined through {coverage}"
            )));
        }
        let mut values = Vec::with_capacity(k_max as usize + 1);
        let mut runs = Vec::new();
        let limit = Nat::from(k_max);
        for b in &blocks {
            if b.start > limit {
                break;
            }
            let value = u64::try_from(&b.value).map_err(|_| {
                KneadingError::InsufficientSpec(format!(
                    "map value {} beyond u64 range cannot be tabulated",
                    b.value
                ))
            })?;
            let start = u64::try_from(&b.start).expect("start <= k_max fits u64");
            let end_capped = if b.end > limit {
                k_max
            } else {
                u64::try_from(&b.end).expect("end <= k_max fits u64")
            };
            for _ in start..=end_capped {
                values.push(value);
            }
            runs.push(BlockRun {
                start,
                end: end_capped,
                value,
            });
        }
        let q2 = u64::try_from(&blocks[0].end).map_err(|_| {
            KneadingError::InsufficientSpec("q_2 does not fit in 64 bits".into())
        })?;
        let tail_floor = self.min_value_at_or_beyond(&(limit + 1u32));
        let tail_floor = Some(u64::try_from(&tail_floor).unwrap_or(u64::MAX));
        KneadingMap::with_source(
            values,
            MapSource::AqGenerated,
            Some(BlockIndex { q2, runs }),
            tail_floor,
        )
    }

    /// Exact lower bound for every map value at indices `>= from`, including
    /// the part of the map beyond what `q` and `a` currently determine.
    pub fn min_value_at_or_beyond(&self, from: &Nat) -> Nat {
        let blocks = self.spec_blocks();
        // All groups beyond the last determined one take values >= q_{r_N}
        // (or q_1 when no weight vector is given at all).
        let horizon = if self.a.is_empty() {
            self.q.get(1).cloned().unwrap_or_else(Nat::zero)
        } else {
            self.q[triangular_index(self.a.len())].clone()
        };
        let mut floor = horizon;
        for b in &blocks {
            if b.end >= *from && b.value < floor {
                floor = b.value.clone();
            }
        }
        // The first sub-block of the last J group whose right marker is
        // missing still has a known value; later sub-blocks only increase it.
        let n = self.a.len();
        if n > 0 {
            let rn = triangular_index(n);
            let rn_prev = triangular_index(n - 1);
            for m in 0..=n {
                if rn + m + 1 >= self.q.len() {
                    let v = &self.q[rn_prev + m];
                    if *v < floor {
                        floor = v.clone();
                    }
                    break;
                }
            }
        }
        floor
    }

    /// Cutting times at the marker indices: returns `S_{q_r}` for
    /// `r = 0..=R`. Works block-wise, so it stays cheap even when the `q_r`
    /// themselves are astronomically large.
    pub fn marker_cutting_times(&self) -> Result<Vec<Nat>, KneadingError> {
        let r_len = self.q.len();
        let mut m: Vec<Nat> = Vec::with_capacity(r_len);
        m.push(Nat::one());
        for r in 1..r_len.min(3) {
            m.push(&self.q[r] + 1u32);
        }
        let mut n = 1usize;
        loop {
            let rn = triangular_index(n);
            let rn_prev = triangular_index(n - 1);
            if rn >= r_len || n > self.a.len() {
                break;
            }
            // telescoping over I_n
            let mut s = m[rn - 1].clone();
            for mm in 0..=n {
                s += &self.a[n - 1][mm] * &m[rn_prev + mm];
            }
            debug_assert_eq!(m.len(), rn);
            m.push(s);
            // arithmetic progressions over J_{n,m}
            for mm in 0..=n {
                let hi = rn + mm + 1;
                if hi >= r_len {
                    break;
                }
                let gap = &self.q[hi] - &self.q[hi - 1];
                let s = &m[hi - 1] + gap * &m[rn_prev + mm];
                debug_assert_eq!(m.len(), hi);
                m.push(s);
            }
            n += 1;
        }
        if m.len() != r_len {
            return Err(KneadingError::InsufficientSpec(format!(
                "marker cutting times determined only through r = {} of {}",
                m.len() - 1,
                r_len - 1
            )));
        }
        Ok(m)
    }

    /// Extends the spec by `groups` further levels with all-ones weight
    /// vectors and minimal free increments. The canonical way of giving a
    /// finite spec a definite deep tail in tests and fixtures.
    pub fn extend_ones(&mut self, groups: usize) {
        for _ in 0..groups {
            let n = self.a.len() + 1;
            let rn = triangular_index(n);
            while self.q.len() < rn {
                let next = self.q.last().unwrap() + 1u32;
                self.q.push(next);
            }
            let jump = Nat::from(n as u64 + 1);
            let next = self.q.last().unwrap() + jump;
            self.q.push(next);
            self.a.push(vec![Nat::one(); n + 1]);
        }
        debug_assert!(AqSpec::new(self.q.clone(), self.a.clone()).is_ok());
    }

    /// The worked fixture used across the test suites:
    /// `q = (0,1,2,4,5,6,11)`, `a_1 = (1,1)`, `a_2 = (1,2,2)`.
    pub fn example_ex1() -> AqSpec {
        AqSpec::new(
            [0u32, 1, 2, 4, 5, 6, 11].iter().map(|&x| Nat::from(x)).collect(),
            vec![
                vec![Nat::one(), Nat::one()],
                vec![Nat::one(), Nat::from(2u32), Nat::from(2u32)],
            ],
        )
        .expect("fixture is valid")
    }
}

/// A constant block of an `(a, q)` map with arbitrary-precision endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecBlock {
    pub start: Nat,
    pub end: Nat,
    pub value: Nat,
}

/// Report of the structural check on an `(a, q)` map: part 1 is the global
/// bound `Q(k) <= max(0, k-2)`, part 2 the shifted triple-composition
/// inequality that makes the map admissible past `q_5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublyResonantReport {
    pub checked_to: u64,
    pub part1_counterexample: Option<u64>,
    pub part2_counterexample: Option<u64>,
}

impl DoublyResonantReport {
    pub fn passed(&self) -> bool {
        self.part1_counterexample.is_none() && self.part2_counterexample.is_none()
    }
}

/// Verifies both parts of the structural lemma for the induced map up to
/// `k_max`. A failure indicates a bug, not a property of the input.
pub fn check_doubly_resonant(
    spec: &AqSpec,
    k_max: u64,
) -> Result<DoublyResonantReport, KneadingError> {
    let map = spec.kneading_map(k_max)?;
    let mut part1 = None;
    for k in 0..=k_max {
        let v = map.value(k)?;
        if v > k.saturating_sub(2) {
            part1 = Some(k);
            break;
        }
    }
    let q5 = spec.q_u64(5).map_err(|_| {
        KneadingError::InsufficientSpec("q_5 must be defined for the part-2 range".into())
    })?;
    let mut part2 = None;
    let mut k = q5 + 1;
    while k + 1 <= k_max {
        let qk = map.value(k)?;
        let qqk = map.value(qk)?;
        let qqqk = map.value(qqk)?;
        let lhs = map.value(k + 1)?;
        let rhs = map.value(qqqk + 1)?;
        if lhs < rhs + 2 {
            part2 = Some(k);
            break;
        }
        k += 1;
    }
    Ok(DoublyResonantReport {
        checked_to: k_max,
        part1_counterexample: part1,
        part2_counterexample: part2,
    })
}

/// Generic table check used by fuzz suites: `Q(k) <= max(0, k - 2)`.
pub fn satisfies_doubly_resonant_bound(map: &KneadingMap) -> bool {
    map.values()
        .iter()
        .enumerate()
        .all(|(k, &v)| v <= (k as u64).saturating_sub(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1_map(k: u64) -> KneadingMap {
        AqSpec::example_ex1().kneading_map(k).unwrap()
    }

    #[test]
    fn ex1_prefix_is_zero_through_q2() {
        let map = ex1_map(2);
        assert_eq!(map.values(), &[0, 0, 0]);
    }

    #[test]
    fn ex1_block_values() {
        let map = ex1_map(11);
        assert_eq!(map.values(), &[0, 0, 0, 1, 2, 1, 2, 4, 5, 5, 6, 6]);
    }

    #[test]
    fn ex1_insufficient_past_coverage() {
        let spec = AqSpec::example_ex1();
        assert_eq!(spec.coverage_end(), Nat::from(11u32));
        assert!(matches!(
            spec.kneading_map(12),
            Err(KneadingError::InsufficientSpec(_))
        ));
    }

    #[test]
    fn ex1_extended_block_values() {
        let mut spec = AqSpec::example_ex1();
        spec.extend_ones(1);
        assert_eq!(
            spec.q().iter().map(u64::try_from).map(Result::unwrap).collect::<Vec<_>>(),
            vec![0, 1, 2, 4, 5, 6, 11, 12, 13, 14, 18]
        );
        let map = spec.kneading_map(18).unwrap();
        assert_eq!(
            map.values(),
            &[0, 0, 0, 1, 2, 1, 2, 4, 5, 5, 6, 6, 4, 5, 6, 11, 12, 13, 14]
        );
    }

    #[test]
    fn cutting_times_constant_zero() {
        let map = KneadingMap::constant_zero(5);
        let s = cutting_times(&map, 5).unwrap();
        let got: Vec<u64> = s.values().iter().map(|x| u64::try_from(x).unwrap()).collect();
        assert_eq!(got, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn cutting_times_fibonacci() {
        let map = KneadingMap::fibonacci(5);
        let s = cutting_times(&map, 5).unwrap();
        let got: Vec<u64> = s.values().iter().map(|x| u64::try_from(x).unwrap()).collect();
        assert_eq!(got, vec![1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn cutting_times_ex1() {
        // Unrolled by hand: S_k = S_{k-1} + S_{Q(k)} with the EX1 table.
        let map = ex1_map(7);
        let s = cutting_times(&map, 7).unwrap();
        let got: Vec<u64> = s.values().iter().map(|x| u64::try_from(x).unwrap()).collect();
        assert_eq!(got, vec![1, 2, 3, 5, 8, 10, 13, 21]);
    }

    #[test]
    fn cutting_times_depth_error() {
        let map = KneadingMap::constant_zero(3);
        assert!(matches!(
            cutting_times(&map, 9),
            Err(KneadingError::DepthExceeded { .. })
        ));
    }

    #[test]
    fn admissible_constant_zero() {
        let map = KneadingMap::constant_zero(12);
        assert_eq!(
            check_admissible(&map, 6),
            Admissibility::AdmissibleUpToBound
        );
    }

    #[test]
    fn admissible_rejects_bad_slope() {
        // Q(1) = 1 breaks Q(k) <= k - 1; a raw table cannot even be built,
        // and the checker flags it when fed the data directly.
        assert!(KneadingMap::from_table(vec![0, 1]).is_err());
    }

    #[test]
    fn admissible_ex1() {
        let map = ex1_map(11);
        assert_eq!(
            check_admissible(&map, 6),
            Admissibility::AdmissibleUpToBound
        );
    }

    #[test]
    fn admissible_detects_violation() {
        // Q = (0,0,1,0,0): at k = 2 the comparison ties at j = 1 and then
        // drops below at j = 2 (Q(4) = 0 < Q(2) = 1).
        let map = KneadingMap::from_table(vec![0, 0, 1, 0, 0]).unwrap();
        assert_eq!(check_admissible(&map, 2), Admissibility::Violation { k: 2 });
    }

    #[test]
    fn admissible_undetermined_when_table_too_shallow() {
        let map = KneadingMap::constant_zero(3);
        assert_eq!(
            check_admissible(&map, 8),
            Admissibility::Undetermined { k: 1 }
        );
    }

    #[test]
    fn marker_cutting_times_ex1() {
        let spec = AqSpec::example_ex1();
        let m = spec.marker_cutting_times().unwrap();
        let got: Vec<u64> = m.iter().map(|x| u64::try_from(x).unwrap()).collect();
        // S at q = (0,1,2,4,5,6,11) -> (S_0,S_1,S_2,S_4,S_5,S_6,S_11)
        assert_eq!(got, vec![1, 2, 3, 8, 10, 13, 67]);
    }

    #[test]
    fn doubly_resonant_ex1() {
        let report = check_doubly_resonant(&AqSpec::example_ex1(), 11).unwrap();
        assert!(report.part1_counterexample.is_none());
        assert!(report.passed());
    }

    #[test]
    fn doubly_resonant_part2_on_extension() {
        let mut spec = AqSpec::example_ex1();
        spec.extend_ones(1);
        let q5 = spec.q_u64(5).unwrap();
        let report = check_doubly_resonant(&spec, q5 + 3).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn part1_ffailure_is_reported_for_raw_tables() {
        // Q(k) = k - 1 satisfies the map invariant but not the k - 2 bound.
        let map = KneadingMap::from_table(vec![0, 0, 1, 2, 3]).unwrap();
        assert!(!satisfies_doubly_resonant_bound(&map));
        assert_eq!(
            map.values()
                .iter()
                .enumerate()
                .find(|(k, &v)| v > (*k as u64).saturating_sub(2))
                .map(|(k, _)| k),
            Some(2)
        );
    }

    #[test]
    fn jump_condition_validated() {
        let bad = AqSpec::new(
            [0u32, 1, 2, 5].iter().map(|&x| Nat::from(x)).collect(),
            vec![vec![Nat::one(), Nat::one()]],
        );
        assert!(matches!(
            bad,
            Err(KneadingError::InvalidSpec { ref field, .. }) if field.contains("jump")
        ));
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = AqSpec::example_ex1();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"q":[0,1,2,4,5,6,11],"a":[[1,1],[1,2,2]]}"#);
        let back: AqSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn map_json_round_trip() {
        let map = ex1_map(7);
        let json = serde_json::to_string(&map).unwrap();
        let back: KneadingMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back.values(), map.values());
        assert_eq!(back.source(), MapSource::AqGenerated);
    }

    #[test]
    fn aq_range_is_marker_set() {
        let mut spec = AqSpec::example_ex1();
        spec.extend_ones(1);
        let map = spec.kneading_map(18).unwrap();
        let markers: Vec<u64> = spec
            .q()
            .iter()
            .map(|x| u64::try_from(x).unwrap())
            .collect();
        for &v in map.values() {
            assert!(v == 0 || markers.contains(&v), "value {v} not a q marker");
        }
    }

    #[test]
    fn tail_floor_certifies_divergence() {
        let spec = AqSpec::example_ex1();
        let map = spec.kneading_map(11).unwrap();
        // beyond index 11 the next blocks are J_2 with values q_3, q_4, q_5
        assert_eq!(map.min_value_from(12), Some(4));
        assert_eq!(spec.min_value_at_or_beyond(&Nat::from(12u32)), Nat::from(4u32));
    }
}
