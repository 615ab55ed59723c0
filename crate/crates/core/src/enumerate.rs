//! Ground truth: exhaustive enumeration and a diagonal transfer-matrix DP.
//!
//! Under the uniform measure the sequence of diagonals is a Markov chain:
//! diagonal `i+1` constrains diagonal `i` only through interlacing
//! inequalities, and no constraint reaches further. The DP walks diagonals
//! left to right carrying, per state, path counts together with sums and
//! sums of products of the diagonal sums seen so far.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{self, rational_string, ExactRational};
use crate::partition::{BoxDims, PlanePartition};
use crate::qpoly::QPolynomial;

pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;
pub const DEFAULT_DP_BUDGET: u64 = 1_000_000;

/// Iterator over every partition in a box, lexicographic in the flattened
/// row-major matrix.
pub struct BppIter {
    dims: BoxDims,
    z: Vec<u32>,
    started: bool,
    done: bool,
}

impl BppIter {
    fn new(dims: BoxDims) -> Self {
        BppIter {
            dims,
            z: vec![0; dims.cells()],
            started: false,
            done: false,
        }
    }

    fn upper_bound(&self, pos: usize) -> u32 {
        let b = self.dims.b;
        let mut hi = self.dims.c;
        if pos >= b {
            hi = hi.min(self.z[pos - b]);
        }
        if !pos.is_multiple_of(b) {
            hi = hi.min(self.z[pos - 1]);
        }
        hi
    }
}

impl Iterator for BppIter {
    type Item = PlanePartition;

    fn next(&mut self) -> Option<PlanePartition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(PlanePartition::from_raw(self.dims, self.z.clone()));
        }
        // Successor: bump the last cell that still has room, zero everything after.
        for pos in (0..self.z.len()).rev() {
            if self.z[pos] < self.upper_bound(pos) {
                self.z[pos] += 1;
                self.z[pos + 1..].fill(0);
                return Some(PlanePartition::from_raw(self.dims, self.z.clone()));
            }
        }
        self.done = true;
        None
    }
}

/// Every valid partition exactly once; refuses if the count exceeds `cap`.
pub fn enumerate_bpps(dims: BoxDims, cap: u64) -> Result<BppIter> {
    let predicted = formulas::macmahon_count(dims)?;
    if predicted > BigUint::from(cap) {
        return Err(Error::CapExceeded { predicted, cap });
    }
    Ok(BppIter::new(dims))
}

/// Exact count, mean vector and covariance matrix of the diagonal sums.
/// Vectors are slot-indexed over `[-a, b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMoments {
    pub dims: BoxDims,
    pub count: BigUint,
    pub mean: Vec<ExactRational>,
    pub cov: Vec<Vec<ExactRational>>,
}

#[derive(Serialize)]
struct ExactMomentsJson<'a> {
    a: usize,
    b: usize,
    c: u32,
    count: String,
    indices: Vec<i64>,
    mean: Vec<String>,
    cov: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<&'a str>,
}

impl ExactMoments {
    /// Closed-form moments packaged in the same shape as the computed ones.
    pub fn from_formulas(dims: BoxDims) -> Result<Self> {
        Ok(ExactMoments {
            dims,
            count: formulas::macmahon_count(dims)?,
            mean: formulas::mean_vector(dims),
            cov: formulas::covariance_matrix(dims),
        })
    }

    pub fn mean_at(&self, i: i64) -> &ExactRational {
        &self.mean[self.dims.slot(i)]
    }

    pub fn cov_at(&self, i: i64, j: i64) -> &ExactRational {
        &self.cov[self.dims.slot(i)][self.dims.slot(j)]
    }

    /// Rationals as `num/den` strings.
    pub fn to_json(&self, method: Option<&str>) -> String {
        let j = ExactMomentsJson {
            a: self.dims.a,
            b: self.dims.b,
            c: self.dims.c,
            count: self.count.to_string(),
            indices: self.dims.diagonals().collect(),
            mean: self.mean.iter().map(rational_string).collect(),
            cov: self
                .cov
                .iter()
                .map(|row| row.iter().map(rational_string).collect())
                .collect(),
            method,
        };
        serde_json::to_string(&j).expect("serializable")
    }

    fn from_power_sums(
        dims: BoxDims,
        count: BigUint,
        sums: &[BigUint],
        prods: &[Vec<BigUint>],
    ) -> Self {
        // sums/prods cover interior diagonals only
        let slots = dims.diag_slots();
        let n = BigInt::from(count.clone());
        let n2 = &n * &n;
        let mut mean = vec![ExactRational::zero(); slots];
        let mut cov = vec![vec![ExactRational::zero(); slots]; slots];
        for (k, s) in sums.iter().enumerate() {
            mean[k + 1] = BigRational::new(s.clone().into(), n.clone());
        }
        for k in 0..sums.len() {
            for l in 0..sums.len() {
                let (lo, hi) = if k <= l { (k, l) } else { (l, k) };
                let num =
                    &n * BigInt::from(prods[lo][hi].clone()) - BigInt::from(&sums[k] * &sums[l]);
                cov[k + 1][l + 1] = BigRational::new(num, n2.clone());
            }
        }
        ExactMoments {
            dims,
            count,
            mean,
            cov,
        }
    }
}

/// Moments by summing over every partition.
pub fn exact_moments_bruteforce(dims: BoxDims, cap: u64) -> Result<ExactMoments> {
    let width = dims.a + dims.b - 1;
    let mut count: u64 = 0;
    let mut sums = vec![0u128; width];
    let mut prods = vec![vec![0u128; width]; width];
    let overflow = || Error::Internal("moment accumulator overflow".into());
    for p in enumerate_bpps(dims, cap)? {
        count += 1;
        let s = p.diagonal_sums();
        let s = s.interior();
        for k in 0..width {
            let sk = u128::from(s[k]);
            sums[k] = sums[k].checked_add(sk).ok_or_else(overflow)?;
            for l in k..width {
                let v = sk * u128::from(s[l]);
                prods[k][l] = prods[k][l].checked_add(v).ok_or_else(overflow)?;
            }
        }
    }
    let sums: Vec<BigUint> = sums.into_iter().map(BigUint::from).collect();
    let prods: Vec<Vec<BigUint>> = prods
        .into_iter()
        .map(|r| r.into_iter().map(BigUint::from).collect())
        .collect();
    Ok(ExactMoments::from_power_sums(
        dims,
        count.into(),
        &sums,
        &prods,
    ))
}

/// Weakly decreasing tuples for one diagonal, with a reverse lookup.
#[derive(Debug)]
pub struct DiagonalStates {
    pub index: i64,
    /// 1-based row of the first (topmost) cell.
    pub first_row: usize,
    pub states: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

impl DiagonalStates {
    fn new(dims: BoxDims, i: i64) -> Self {
        let len = dims.diag_len(i);
        let mut states = Vec::new();
        let mut cur = Vec::with_capacity(len);
        decreasing_tuples(len, dims.c, &mut cur, &mut states);
        let lookup = states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();
        DiagonalStates {
            index: i,
            first_row: 1.max(1 - i) as usize,
            states,
            lookup,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn decreasing_tuples(len: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let hi = cur.last().copied().unwrap_or(max);
    for v in 0..=hi {
        cur.push(v);
        decreasing_tuples(len, max, cur, out);
        cur.pop();
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for t in 0..k {
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

/// The interior diagonals as a layered state graph.
pub struct DiagonalChain {
    dims: BoxDims,
    layers: Vec<DiagonalStates>,
}

impl DiagonalChain {
    pub fn new(dims: BoxDims, budget: u64) -> Result<Self> {
        let needed: BigUint = dims
            .interior()
            .map(|i| {
                let n = dims.diag_len(i) as u64;
                binomial(n + u64::from(dims.c), u64::from(dims.c))
            })
            .sum();
        if needed > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                what: "diagonal states",
                needed: u128::try_from(&needed).unwrap_or(u128::MAX),
                budget: budget.into(),
            });
        }
        let layers = dims
            .interior()
            .map(|i| DiagonalStates::new(dims, i))
            .collect();
        Ok(DiagonalChain { dims, layers })
    }

    pub fn layers(&self) -> &[DiagonalStates] {
        &self.layers
    }

    /// Calls `f` with the index of every state on layer `k - 1` compatible
    /// with `y`, a state on layer `k`.
    ///
    /// Cell `(r, r+i)` of diagonal `i` must sit between its right neighbour
    /// `(r, r+i+1)` and its upper neighbour `(r-1, r+i)`, both on diagonal
    /// `i+1`; each cell ranges independently over that interval.
    fn for_each_predecessor(&self, k: usize, y: &[u32], mut f: impl FnMut(usize)) {
        let prev = &self.layers[k - 1];
        let next = &self.layers[k];
        let len = self.dims.diag_len(prev.index);
        let mut lo = Vec::with_capacity(len);
        let mut hi = Vec::with_capacity(len);
        for t in 0..len {
            let r = prev.first_row + t;
            let col = (r as i64 + prev.index) as usize;
            let right = (col < self.dims.b)
                .then(|| r.checked_sub(next.first_row).map(|u| y[u]))
                .flatten();
            let up = (r > 1)
                .then(|| (r - 1).checked_sub(next.first_row).map(|u| y[u]))
                .flatten();
            lo.push(right.unwrap_or(0));
            hi.push(up.unwrap_or(self.dims.c));
        }
        let mut x = lo.clone();
        loop {
            f(prev.lookup[&x]);
            // odometer over the box of intervals, last cell fastest
            let mut t = len;
            loop {
                if t == 0 {
                    return;
                }
                t -= 1;
                if x[t] < hi[t] {
                    x[t] += 1;
                    x[t + 1..].copy_from_slice(&lo[t + 1..]);
                    break;
                }
            }
        }
    }

    /// Forward pass. `start` seeds layer 0 states; for later layers the
    /// weights of all predecessors are summed with `add` and then passed to
    /// `advance` together with the new state's diagonal sum and layer index.
    pub fn forward<T: Clone>(
        &self,
        start: impl Fn(u64) -> T,
        add: impl Fn(&mut T, &T),
        advance: impl Fn(T, u64, usize) -> T,
    ) -> Vec<T> {
        let sum = |s: &[u32]| s.iter().map(|&v| u64::from(v)).sum::<u64>();
        let mut cur: Vec<T> = self.layers[0]
            .states
            .iter()
            .map(|s| start(sum(s)))
            .collect();
        for k in 1..self.layers.len() {
            let next = self.layers[k]
                .states
                .iter()
                .map(|y| {
                    let mut acc: Option<T> = None;
                    self.for_each_predecessor(k, y, |x| match &mut acc {
                        None => acc = Some(cur[x].clone()),
                        Some(a) => add(a, &cur[x]),
                    });
                    advance(acc.expect("every state has a predecessor"), sum(y), k)
                })
                .collect();
            cur = next;
        }
        cur
    }
}

/// Per-state path statistics: count, `sum S_k` and `sum S_k S_l` (`k <= l`)
/// over the layers seen so far. `prods[l]` holds `k = 0..=l`.
#[derive(Clone)]
struct PathMoments {
    count: BigUint,
    sums: Vec<BigUint>,
    prods: Vec<Vec<BigUint>>,
}

impl PathMoments {
    fn start(s: u64) -> Self {
        PathMoments {
            count: BigUint::from(1u32),
            sums: vec![BigUint::from(s)],
            prods: vec![vec![BigUint::from(s * s)]],
        }
    }

    fn add(&mut self, other: &PathMoments) {
        self.count += &other.count;
        for (x, y) in self.sums.iter_mut().zip(&other.sums) {
            *x += y;
        }
        for (xs, ys) in self.prods.iter_mut().zip(&other.prods) {
            for (x, y) in xs.iter_mut().zip(ys) {
                *x += y;
            }
        }
    }

    fn advance(mut self, s: u64) -> Self {
        let new_sum = &self.count * s;
        let mut col: Vec<BigUint> = self.sums.iter().map(|a| a * s).collect();
        col.push(&new_sum * s);
        self.sums.push(new_sum);
        self.prods.push(col);
        self
    }
}

/// Moments by the diagonal transfer-matrix recursion.
pub fn exact_moments_dp(dims: BoxDims, budget: u64) -> Result<ExactMoments> {
    let chain = DiagonalChain::new(dims, budget)?;
    let finals = chain.forward(PathMoments::start, PathMoments::add, |m, s, _| m.advance(s));
    let mut total = finals[0].clone();
    for m in &finals[1..] {
        total.add(m);
    }
    let width = total.sums.len();
    // transpose packed columns into an upper-triangular [k][l] table
    let mut prods = vec![vec![BigUint::zero(); width]; width];
    for (l, col) in total.prods.iter().enumerate() {
        for (k, v) in col.iter().enumerate() {
            prods[k][l] = v.clone();
        }
    }
    Ok(ExactMoments::from_power_sums(
        dims,
        total.count,
        &total.sums,
        &prods,
    ))
}

/// Histogram of the total sum as a polynomial in `q`, computed by the DP.
pub fn sum_distribution(dims: BoxDims, budget: u64) -> Result<QPolynomial> {
    let chain = DiagonalChain::new(dims, budget)?;
    let shift = |mut v: Vec<BigUint>, s: u64| {
        let mut out = vec![BigUint::zero(); s as usize];
        out.append(&mut v);
        out
    };
    let add = |x: &mut Vec<BigUint>, y: &Vec<BigUint>| {
        if x.len() < y.len() {
            x.resize(y.len(), BigUint::zero());
        }
        for (a, b) in x.iter_mut().zip(y) {
            *a += b;
        }
    };
    let finals = chain.forward(
        |s| shift(vec![BigUint::from(1u32)], s),
        add,
        |v, s, _| shift(v, s),
    );
    let mut total: Vec<BigUint> = Vec::new();
    for v in &finals {
        add(&mut total, v);
    }
    Ok(QPolynomial::from_coeffs(
        total.into_iter().map(BigInt::from),
    ))
}

/// Harmonicity check on diagonal `i`.
///
/// Groups partitions by the contents of diagonals `i-1` and `i+1`, and
/// returns the largest `|E[S_i | group] - ((s_{i-1} + s_{i+1})/2 + kappa(i))|`
/// where `kappa(i) = mu(i) - (mu(i-1) + mu(i+1))/2` is taken from the
/// closed-form means. The expected result is exactly zero.
pub fn conditional_mean_check(dims: BoxDims, i: i64, cap: u64) -> Result<ExactRational> {
    if i <= dims.min_index() || i >= dims.max_index() {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: dims.min_index() + 1,
            hi: dims.max_index() - 1,
        });
    }
    let mu = |k| formulas::mean_diagonal_sum(dims, k);
    let kappa = mu(i)? - (mu(i - 1)? + mu(i + 1)?) / formulas::int(2);

    let mut groups: BTreeMap<(Vec<u32>, Vec<u32>), (u64, u64)> = BTreeMap::new();
    for p in enumerate_bpps(dims, cap)? {
        let key = (p.diagonal(i - 1), p.diagonal(i + 1));
        let s_i: u64 = p.diagonal(i).iter().map(|&v| u64::from(v)).sum();
        let e = groups.entry(key).or_default();
        e.0 += 1;
        e.1 += s_i;
    }
    let mut worst = ExactRational::zero();
    for ((left, right), (n, total)) in groups {
        let side = left
            .iter()
            .chain(&right)
            .map(|&v| i64::from(v))
            .sum::<i64>();
        let predicted = formulas::rat(side, 2) + &kappa;
        let observed = formulas::rat(total as i64, n as i64);
        let gap = (observed - predicted).abs();
        if gap > worst {
            worst = gap;
        }
    }
    Ok(worst)
}

/// Checks that, given diagonals `i-1` and `i+1`, the partitions in each
/// group realise every point of the product of per-cell intervals
/// `[max(lower neighbours), min(upper neighbours)]` for diagonal `i`,
/// and each such point equally often.
pub fn conditional_factorization_check(dims: BoxDims, i: i64, cap: u64) -> Result<bool> {
    if i <= dims.min_index() || i >= dims.max_index() {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: dims.min_index() + 1,
            hi: dims.max_index() - 1,
        });
    }
    type Histogram = BTreeMap<Vec<u32>, u64>;
    type Group = (Vec<(u32, u32)>, Histogram);
    let mut groups: BTreeMap<(Vec<u32>, Vec<u32>), Group> = BTreeMap::new();
    for p in enumerate_bpps(dims, cap)? {
        let key = (p.diagonal(i - 1), p.diagonal(i + 1));
        let entry = groups.entry(key).or_insert_with(|| {
            let bounds = dims
                .diagonal_cells(i)
                .map(|(r, j)| {
                    let mut lo = 0;
                    let mut hi = dims.c;
                    if j < dims.b {
                        lo = lo.max(p.get(r, j + 1));
                    }
                    if r < dims.a {
                        lo = lo.max(p.get(r + 1, j));
                    }
                    if r > 1 {
                        hi = hi.min(p.get(r - 1, j));
                    }
                    if j > 1 {
                        hi = hi.min(p.get(r, j - 1));
                    }
                    (lo, hi)
                })
                .collect();
            (bounds, Histogram::new())
        });
        *entry.1.entry(p.diagonal(i)).or_default() += 1;
    }
    for (bounds, hist) in groups.values() {
        let volume: u64 = bounds
            .iter()
            .map(|&(lo, hi)| u64::from(hi - lo + 1))
            .product();
        if hist.len() as u64 != volume {
            return Ok(false);
        }
        let in_box = hist.keys().all(|x| {
            x.iter()
                .zip(bounds)
                .all(|(&v, &(lo, hi))| lo <= v && v <= hi)
        });
        let first = *hist.values().next().expect("nonempty group");
        if !in_box || hist.values().any(|&m| m != first) {
            return Ok(false);
        }
    }
    Ok(true)
}
