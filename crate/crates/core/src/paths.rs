//! Path spaces and Gibbs measures: exact samplers for the binomial system,
//! the Young graph, the Young bouquet and GT+, cylinder probabilities of
//! coherent families, and the path-space degeneration experiment.
//!
//! Every sampler is a pure function of its inputs and a 64-bit seed.
//! Ensembles derive per-replica generators through [`replica_rng`], so
//! results are reproducible under any parallel execution layout.

use crate::boundary::{poisson_cutoff, yb_boundary_kernel, TailBudget};
use crate::partitions::{
    dim_standard, enumerate_partitions, weyl_dim, weyl_dim_hook_content, Partition, Signature,
};
use crate::scalar::{nat_to_f64, Int, Rat};
use crate::symfunc::ThomaConePoint;
use crate::{Error, Result};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed-splitting rule for ensembles: replica `i` reads stream `i` of the
/// ChaCha generator seeded with the ensemble seed.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

/// A finite path in the binomial system: unit jumps at strictly increasing
/// times within `(0, horizon]`.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpPath {
    pub horizon: f64,
    pub times: Vec<f64>,
}

impl JumpPath {
    pub fn new(horizon: f64, times: Vec<f64>) -> Result<Self> {
        if horizon <= 0.0 {
            return Err(Error::InvalidPath("horizon must be positive".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPath("jump times must strictly increase".into()));
        }
        if times.iter().any(|&t| t <= 0.0 || t > horizon) {
            return Err(Error::InvalidPath("jump times must lie in (0, horizon]".into()));
        }
        Ok(JumpPath { horizon, times })
    }

    /// `m(r)`: number of jumps up to time `r`.
    pub fn count_at(&self, r: f64) -> usize {
        self.times.iter().take_while(|&&t| t <= r).count()
    }
}

/// A standard Young tableau: bijective filling by `1..=n`, strictly
/// increasing along rows and columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<u32>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len() as u32).collect())
            .map_err(|_| Error::InvalidPath("row lengths must weakly decrease".into()))?;
        let n = shape.size() as u32;
        let mut seen = vec![false; n as usize + 1];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v == 0 || v > n || seen[v as usize] {
                    return Err(Error::InvalidPath(format!("bad entry {v}")));
                }
                seen[v as usize] = true;
                if j > 0 && rows[i][j - 1] >= v {
                    return Err(Error::InvalidPath("rows must strictly increase".into()));
                }
                if i > 0 && rows[i - 1][j] >= v {
                    return Err(Error::InvalidPath("columns must strictly increase".into()));
                }
            }
        }
        Ok(StandardTableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// The saturated chain of shapes from the empty diagram to the full
    /// shape, one box per step.
    pub fn shape_chain(&self) -> Vec<Partition> {
        let n = self.shape.size() as u32;
        let mut chain = Vec::with_capacity(n as usize + 1);
        for k in 0..=n {
            let parts: Vec<u32> = self
                .rows
                .iter()
                .map(|row| row.iter().filter(|&&v| v <= k).count() as u32)
                .take_while(|&c| c > 0)
                .collect();
            chain.push(Partition::new(parts).expect("prefix of a tableau is a diagram"));
        }
        chain
    }

    /// Position of each entry: `positions()[k]` is the (row, col) of `k+1`.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let n = self.shape.size() as usize;
        let mut pos = vec![(0usize, 0usize); n];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                pos[v as usize - 1] = (i, j);
            }
        }
        pos
    }
}

/// A semistandard Young tableau with bounded entries: rows weakly increase,
/// columns strictly increase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ssyt {
    shape: Partition,
    rows: Vec<Vec<u32>>,
    max_entry: u32,
}

impl Ssyt {
    pub fn new(rows: Vec<Vec<u32>>, max_entry: u32) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len() as u32).collect())
            .map_err(|_| Error::InvalidPath("row lengths must weakly decrease".into()))?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v == 0 || v > max_entry {
                    return Err(Error::InvalidPath(format!("entry {v} out of range")));
                }
                if j > 0 && rows[i][j - 1] > v {
                    return Err(Error::InvalidPath("rows must weakly increase".into()));
                }
                if i > 0 && rows[i - 1][j] >= v {
                    return Err(Error::InvalidPath("columns must strictly increase".into()));
                }
            }
        }
        Ok(Ssyt {
            shape,
            rows,
            max_entry,
        })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn max_entry(&self) -> u32 {
        self.max_entry
    }
}

/// A finite Gelfand-Tsetlin scheme over GT+: interlacing partition rows, the
/// row at level `k` holding `k` (possibly zero) coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtScheme {
    rows: Vec<Vec<u32>>,
}

impl GtScheme {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        for (k, row) in rows.iter().enumerate() {
            if row.len() != k + 1 {
                return Err(Error::InvalidPath(format!(
                    "row {} must have {} coordinates",
                    k,
                    k + 1
                )));
            }
            if row.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidPath("rows must weakly decrease".into()));
            }
        }
        for k in 0..rows.len().saturating_sub(1) {
            let (lo, hi) = (&rows[k], &rows[k + 1]);
            for i in 0..lo.len() {
                if !(hi[i + 1] <= lo[i] && lo[i] <= hi[i]) {
                    return Err(Error::InvalidPath(format!(
                        "rows {k} and {} do not interlace",
                        k + 1
                    )));
                }
            }
        }
        Ok(GtScheme { rows })
    }

    pub fn level(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, level: usize) -> &[u32] {
        &self.rows[level - 1]
    }

    pub fn top(&self) -> Result<Partition> {
        Partition::from_parts_with_zeros(self.rows.last().expect("nonempty scheme"))
    }

    /// The scheme as a semistandard tableau: a box acquires the level index
    /// at which it first appears.
    pub fn to_ssyt(&self) -> Result<Ssyt> {
        let n = self.level();
        let top = self.top()?;
        let mut rows: Vec<Vec<u32>> = (0..top.len())
            .map(|i| vec![0u32; top.part(i) as usize])
            .collect();
        for (k, level_row) in self.rows.iter().enumerate() {
            for (i, &len) in level_row.iter().enumerate() {
                // Coordinate slots beyond the top diagram's rows are zero.
                if i >= rows.len() {
                    break;
                }
                for slot in rows[i].iter_mut().take(len as usize) {
                    if *slot == 0 {
                        *slot = k as u32 + 1;
                    }
                }
            }
        }
        Ssyt::new(rows, n as u32)
    }
}

/// A Young diagram filled with strictly increasing positive reals along rows
/// and columns: a finite monotone path in the Young bouquet.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedTableau {
    shape: Partition,
    fill: Vec<Vec<f64>>,
    horizon: f64,
}

impl GeneralizedTableau {
    pub fn new(fill: Vec<Vec<f64>>, horizon: f64) -> Result<Self> {
        let shape = Partition::new(fill.iter().map(|r| r.len() as u32).collect())
            .map_err(|_| Error::InvalidPath("row lengths must weakly decrease".into()))?;
        for (i, row) in fill.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(v > 0.0 && v <= horizon) {
                    return Err(Error::InvalidPath(format!(
                        "fill value {v} outside (0, horizon]"
                    )));
                }
                if j > 0 && fill[i][j - 1] >= v {
                    return Err(Error::InvalidPath("rows must strictly increase".into()));
                }
                if i > 0 && fill[i - 1][j] >= v {
                    return Err(Error::InvalidPath("columns must strictly increase".into()));
                }
            }
        }
        Ok(GeneralizedTableau {
            shape,
            fill,
            horizon,
        })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn fill(&self) -> &[Vec<f64>] {
        &self.fill
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// The diagram formed by boxes with fill time `<= r`.
    pub fn shape_at(&self, r: f64) -> Partition {
        let parts: Vec<u32> = self
            .fill
            .iter()
            .map(|row| row.iter().filter(|&&t| t <= r).count() as u32)
            .take_while(|&c| c > 0)
            .collect();
        Partition::new(parts).expect("time cut of a tableau is a diagram")
    }
}

fn uniform_in_half_open(rng: &mut impl Rng, r: f64) -> f64 {
    // (0, r]: flip the standard [0, 1) sample.
    r * (1.0 - rng.gen::<f64>())
}

fn sorted_uniforms(rng: &mut impl Rng, n: usize, r: f64) -> Vec<f64> {
    let mut times: Vec<f64> = (0..n).map(|_| uniform_in_half_open(rng, r)).collect();
    times.sort_by(f64::total_cmp);
    times
}

/// Poisson sample by inversion of the cumulative series.
fn poisson_count(rng: &mut impl Rng, lambda: f64) -> usize {
    if lambda == 0.0 {
        return 0;
    }
    let u: f64 = rng.gen();
    let mut cum = 0.0;
    let mut log_weight = -lambda;
    for k in 0usize.. {
        cum += log_weight.exp();
        if u < cum {
            return k;
        }
        log_weight += lambda.ln() - ((k + 1) as f64).ln();
        if k > 10_000 {
            break;
        }
    }
    0
}

/// A Poisson path with constant intensity `x` on the horizon `(0, r]`: the
/// jump count is Poisson(xr) and, given the count, the jump times are sorted
/// independent uniforms.
pub fn sample_poisson_path(x: f64, r: f64, seed: u64) -> JumpPath {
    sample_poisson_path_with(x, r, &mut replica_rng(seed, 0))
}

pub fn sample_poisson_path_with(x: f64, r: f64, rng: &mut impl Rng) -> JumpPath {
    assert!(x >= 0.0 && r > 0.0);
    let count = poisson_count(rng, x * r);
    let mut times = sorted_uniforms(rng, count, r);
    times.dedup_by(|a, b| a == b); // ties have probability zero
    JumpPath { horizon: r, times }
}

/// A uniform standard tableau of shape `lambda`, realized by the downward
/// chain with one-step Young-link probabilities `dim(mu)/dim(nu)`; the
/// telescoping product makes every tableau equally likely.
pub fn sample_standard_tableau(lambda: &Partition, seed: u64) -> StandardTableau {
    sample_standard_tableau_with(lambda, &mut replica_rng(seed, 0))
}

pub fn sample_standard_tableau_with(lambda: &Partition, rng: &mut impl Rng) -> StandardTableau {
    let mut rows: Vec<Vec<u32>> = (0..lambda.len())
        .map(|i| vec![0u32; lambda.part(i) as usize])
        .collect();
    let mut current = lambda.clone();
    let mut entry = lambda.size() as u32;
    while !current.is_empty() {
        let covers = current.down_covers();
        let dim_cur = nat_to_f64(&dim_standard(&current));
        let weights: Vec<f64> = covers
            .iter()
            .map(|mu| nat_to_f64(&dim_standard(mu)) / dim_cur)
            .collect();
        let pick = pick_index(rng, &weights);
        let mu = &covers[pick];
        // The removed box is in the row where the length dropped.
        let row = (0..current.len())
            .find(|&i| mu.part(i) < current.part(i))
            .expect("cover differs in one row");
        rows[row][mu.part(row) as usize] = entry;
        entry -= 1;
        current = mu.clone();
    }
    StandardTableau::new(rows).expect("chain builds a standard tableau")
}

fn pick_index(rng: &mut impl Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let u: f64 = rng.gen::<f64>() * total;
    let mut cum = 0.0;
    for (i, w) in weights.iter().enumerate() {
        cum += w;
        if u < cum {
            return i;
        }
    }
    weights.len() - 1
}

/// Sampler of uniform GT+ schemes with a fixed top row, by the downward
/// chain with one-step link probabilities `Dim[mu,k]/Dim[nu,k+1]`. The
/// interlacing candidates and their weights per (row, level) are memoized,
/// which matters for ensembles over many levels; the cache is confined to
/// one sampler instance.
/// Interlacing candidates below one row together with their weights.
type StepTable = std::rc::Rc<(Vec<Vec<u32>>, Vec<f64>)>;

pub struct GtChainSampler {
    shape: Partition,
    level: usize,
    cache: std::cell::RefCell<std::collections::HashMap<(Vec<u32>, usize), StepTable>>,
}

impl GtChainSampler {
    pub fn new(lambda: &Partition, n: usize) -> Result<Self> {
        if lambda.len() > n {
            return Err(Error::LevelMismatch(format!(
                "{lambda} does not fit at level {n}"
            )));
        }
        Ok(GtChainSampler {
            shape: lambda.clone(),
            level: n,
            cache: Default::default(),
        })
    }

    fn step_table(
        &self,
        current: &[u32],
        k: usize,
    ) -> Result<StepTable> {
        let key = (current.to_vec(), k);
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        // Enumerate interlacing rows of length k below `current`.
        let mut candidates: Vec<Vec<u32>> = vec![Vec::new()];
        for i in 0..k {
            let hi = current[i];
            let lo = current[i + 1];
            let mut extended = Vec::new();
            for cand in &candidates {
                let cap = cand.last().copied().unwrap_or(u32::MAX);
                for v in lo..=hi.min(cap) {
                    let mut next = cand.clone();
                    next.push(v);
                    extended.push(next);
                }
            }
            candidates = extended;
        }
        let dim_cur =
            weyl_dim_hook_content(&Partition::from_parts_with_zeros(current)?, k + 1)?;
        let weights: Vec<f64> = candidates
            .iter()
            .map(|cand| {
                let mu = Partition::from_parts_with_zeros(cand)
                    .expect("interlacing row is decreasing");
                weyl_dim_hook_content(&mu, k).expect("fits by construction") / dim_cur
            })
            .collect();
        let entry = std::rc::Rc::new((candidates, weights));
        self.cache.borrow_mut().insert(key, entry.clone());
        Ok(entry)
    }

    pub fn sample_scheme(&self, rng: &mut impl Rng) -> Result<GtScheme> {
        let n = self.level;
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(n);
        let mut current: Vec<u32> = (0..n).map(|i| self.shape.part(i)).collect();
        rows.push(current.clone());
        for k in (1..n).rev() {
            let table = self.step_table(&current, k)?;
            let pick = pick_index(rng, &table.1);
            current = table.0[pick].clone();
            rows.push(current.clone());
        }
        rows.reverse();
        GtScheme::new(rows)
    }

    pub fn sample_ssyt(&self, rng: &mut impl Rng) -> Result<Ssyt> {
        self.sample_scheme(rng)?.to_ssyt()
    }
}

/// A uniform GT+ scheme with top row `lambda` at level `n`.
pub fn sample_gt_scheme(lambda: &Partition, n: usize, seed: u64) -> Result<GtScheme> {
    sample_gt_scheme_with(lambda, n, &mut replica_rng(seed, 0))
}

pub fn sample_gt_scheme_with(
    lambda: &Partition,
    n: usize,
    rng: &mut impl Rng,
) -> Result<GtScheme> {
    GtChainSampler::new(lambda, n)?.sample_scheme(rng)
}

/// A uniform semistandard tableau of shape `lambda` with entries at most
/// `n`, through the GT chain.
pub fn sample_uniform_ssyt(lambda: &Partition, n: usize, seed: u64) -> Result<Ssyt> {
    sample_gt_scheme(lambda, n, seed)?.to_ssyt()
}

pub fn sample_uniform_ssyt_with(
    lambda: &Partition,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Ssyt> {
    sample_gt_scheme_with(lambda, n, rng)?.to_ssyt()
}

/// Sampler of bouquet paths under the extreme Gibbs measure at `omega` on
/// the horizon `(0, r]`: the endpoint shape follows the boundary kernel
/// (truncated by the budget with a Poisson tail certificate), and
/// conditionally on the shape the path is a uniform standard tableau
/// carrying sorted uniform times — exactly the uniform distribution on the
/// monotone polytope, which splits into equal-volume chambers indexed by the
/// standard tableaux.
///
/// The endpoint table is precomputed once, so ensembles draw cheaply.
pub struct YbPathSampler {
    horizon: f64,
    /// Cumulative endpoint masses in (size, enumeration) order.
    cumulative: Vec<(Partition, f64)>,
    /// Certified bound on the endpoint mass beyond the table.
    pub tail_bound: f64,
}

impl YbPathSampler {
    pub fn new(omega: &ThomaConePoint<Rat>, r: f64, budget: &TailBudget) -> Result<Self> {
        assert!(r > 0.0);
        if omega.is_origin() {
            return Ok(YbPathSampler {
                horizon: r,
                cumulative: vec![(Partition::empty(), 1.0)],
                tail_bound: 0.0,
            });
        }
        let size = crate::scalar::rat_to_f64(omega.size());
        let max_size = poisson_cutoff(r * size, budget)?;
        let mut cumulative = Vec::new();
        let mut cum = 0.0;
        for m in 0..=max_size {
            for mu in enumerate_partitions(m) {
                cum += yb_boundary_kernel(omega, r, &mu);
                cumulative.push((mu, cum));
            }
        }
        Ok(YbPathSampler {
            horizon: r,
            cumulative,
            tail_bound: crate::boundary::poisson_tail_bound(r * size, max_size),
        })
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Result<GeneralizedTableau> {
        let u: f64 = rng.gen();
        let idx = self
            .cumulative
            .partition_point(|(_, cum)| *cum <= u);
        let lambda = match self.cumulative.get(idx) {
            Some((mu, _)) => mu.clone(),
            None => {
                return Err(Error::TailBudgetExceeded {
                    required: self.tail_bound,
                    achieved: 1.0 - self.cumulative.last().map_or(0.0, |(_, c)| *c),
                    cutoff: self.cumulative.len(),
                })
            }
        };
        let tableau = sample_standard_tableau_with(&lambda, rng);
        let times = sorted_uniforms(rng, lambda.size() as usize, self.horizon);
        let mut fill: Vec<Vec<f64>> = (0..lambda.len())
            .map(|i| vec![0.0; lambda.part(i) as usize])
            .collect();
        for (k, (i, j)) in tableau.positions().into_iter().enumerate() {
            fill[i][j] = times[k];
        }
        GeneralizedTableau::new(fill, self.horizon)
    }
}

/// One bouquet path from a fresh seed; ensembles should construct a
/// [`YbPathSampler`] once instead.
pub fn sample_yb_path(
    omega: &ThomaConePoint<Rat>,
    r: f64,
    seed: u64,
    budget: &TailBudget,
) -> Result<GeneralizedTableau> {
    YbPathSampler::new(omega, r, budget)?.sample(&mut replica_rng(seed, 0))
}

/// A coherent family: one probability measure per level, pushed consistently
/// down by the links. Implementors supply the level measures; cylinder
/// probabilities multiply them with one-step link entries.
pub trait CoherentFamily<V> {
    fn mass(&self, level: u64, vertex: &V) -> Result<Rat>;
}

/// The z-measure family on the Young graph.
pub struct ZMeasureYoungFamily {
    params: crate::measures::ZParams,
}

impl ZMeasureYoungFamily {
    pub fn new(params: crate::measures::ZParams) -> Self {
        ZMeasureYoungFamily { params }
    }
}

impl CoherentFamily<Partition> for ZMeasureYoungFamily {
    fn mass(&self, level: u64, mu: &Partition) -> Result<Rat> {
        if mu.size() != level {
            return Err(Error::LevelMismatch(format!(
                "{mu} is not at level {level}"
            )));
        }
        let c = self.params.c();
        let mut denom = Rat::one();
        for k in 0..level {
            denom *= &c + Rat::from_integer(Int::from(k));
        }
        denom *= Rat::from_integer(Int::from(crate::scalar::factorial(level)));
        let dim = Rat::from_integer(Int::from(dim_standard(mu)));
        Ok(self.params.product_pochhammer(mu) * &dim * &dim / denom)
    }
}

/// The Bernoulli-mixture family on the Pascal graph: at level `N` the
/// binomial distribution with parameter `omega`.
pub struct PascalBernoulliFamily {
    omega: Rat,
}

impl PascalBernoulliFamily {
    pub fn new(omega: Rat) -> Result<Self> {
        if omega < Rat::zero() || omega > Rat::one() {
            return Err(Error::ParameterOutOfRange("need omega in [0, 1]".into()));
        }
        Ok(PascalBernoulliFamily { omega })
    }
}

impl CoherentFamily<(u64, u64)> for PascalBernoulliFamily {
    fn mass(&self, level: u64, v: &(u64, u64)) -> Result<Rat> {
        let (n1, n2) = *v;
        if n1 + n2 != level {
            return Err(Error::LevelMismatch(format!(
                "({n1},{n2}) is not at level {level}"
            )));
        }
        let mut acc = Rat::from_integer(Int::from(crate::scalar::binomial(level, n1)));
        for _ in 0..n1 {
            acc *= &self.omega;
        }
        let complement = Rat::one() - &self.omega;
        for _ in 0..n2 {
            acc *= &complement;
        }
        Ok(acc)
    }
}

/// A coherent family on GT+ defined on a finite window by pushing a top
/// measure down through the links; exact and sufficient for cylinder
/// probabilities of paths below the top level.
pub struct GtPushdownFamily {
    top_level: usize,
    top: Vec<(Signature, Rat)>,
}

impl GtPushdownFamily {
    pub fn new(top_level: usize, top: Vec<(Signature, Rat)>) -> Result<Self> {
        let total: Rat = top.iter().map(|(_, p)| p.clone()).sum();
        if !total.is_one() {
            return Err(Error::ParameterOutOfRange(format!(
                "top measure sums to {total}, not 1"
            )));
        }
        for (s, _) in &top {
            if s.level() != top_level {
                return Err(Error::LevelMismatch(format!(
                    "{s} not at top level {top_level}"
                )));
            }
        }
        Ok(GtPushdownFamily { top_level, top })
    }
}

impl CoherentFamily<Signature> for GtPushdownFamily {
    fn mass(&self, level: u64, v: &Signature) -> Result<Rat> {
        let level = level as usize;
        if v.level() != level || level > self.top_level {
            return Err(Error::LevelMismatch(format!(
                "{v} not below top level {}",
                self.top_level
            )));
        }
        let mut acc = Rat::zero();
        for (top, mass) in &self.top {
            if level == self.top_level {
                if top == v {
                    acc += mass;
                }
            } else {
                acc += mass * crate::links::gt_link(top, level)?.prob(v);
            }
        }
        Ok(acc)
    }
}

/// Cylinder probability of a saturated Young-graph path from the empty
/// diagram, under the Gibbs measure of a coherent family: the endpoint mass
/// times the one-step downward entries along the path. The Gibbs property
/// makes the value independent of the path given the endpoint.
pub fn cylinder_probability_young(
    path: &[Partition],
    family: &dyn CoherentFamily<Partition>,
) -> Result<Rat> {
    if path.first().is_none_or(|p| !p.is_empty()) {
        return Err(Error::InvalidPath("path must start at the empty diagram".into()));
    }
    for w in path.windows(2) {
        if !crate::partitions::covers(&w[0], &w[1]) {
            return Err(Error::InvalidPath(format!(
                "{} does not cover {}",
                w[1], w[0]
            )));
        }
    }
    let end = path.last().unwrap();
    let mut p = family.mass(end.size(), end)?;
    for w in path.windows(2) {
        p *= Rat::from_integer(Int::from(dim_standard(&w[0])))
            / Rat::from_integer(Int::from(dim_standard(&w[1])));
    }
    Ok(p)
}

/// Cylinder probability of a Pascal-graph path from the origin.
pub fn cylinder_probability_pascal(
    path: &[(u64, u64)],
    family: &dyn CoherentFamily<(u64, u64)>,
) -> Result<Rat> {
    if path.first() != Some(&(0, 0)) {
        return Err(Error::InvalidPath("path must start at (0, 0)".into()));
    }
    for w in path.windows(2) {
        let ok = (w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1)
            || (w[1].0 == w[0].0 && w[1].1 == w[0].1 + 1);
        if !ok {
            return Err(Error::InvalidPath(format!(
                "{:?} -> {:?} is not an edge",
                w[0], w[1]
            )));
        }
    }
    let end = path.last().unwrap();
    let mut p = family.mass(end.0 + end.1, end)?;
    for w in path.windows(2) {
        p *= crate::links::pascal_link(w[1])?.prob(&w[0]);
    }
    Ok(p)
}

/// Cylinder probability of a GT+ path given as a scheme.
pub fn cylinder_probability_gt(
    scheme: &GtScheme,
    family: &dyn CoherentFamily<Signature>,
) -> Result<Rat> {
    let n = scheme.level();
    let top = Signature::new(scheme.row(n).iter().map(|&c| c as i64).collect())?;
    let mut p = family.mass(n as u64, &top)?;
    for k in 1..n {
        let lower = Partition::from_parts_with_zeros(scheme.row(k))?;
        let upper = Partition::from_parts_with_zeros(scheme.row(k + 1))?;
        p *= Rat::from_integer(Int::from(weyl_dim(&lower, k)?))
            / Rat::from_integer(Int::from(weyl_dim(&upper, k + 1)?));
    }
    Ok(p)
}

/// One row of the path-degeneration experiment.
#[derive(Clone, Debug)]
pub struct DegenerationRow {
    pub scale: u64,
    pub level: usize,
    /// Maximum over boxes and over first/second moments of the difference
    /// between scaled-tableau and uniform-polytope empirical moments.
    pub max_moment_discrepancy: f64,
}

/// Scaled semistandard tableaux against the uniform polytope law: for each
/// scale `L` sample SSYT of shape `lambda` with entries at most `round(rL)`,
/// divide the entries by `L`, and compare per-box first and second moments
/// with moments of the uniform distribution on the monotone polytope in
/// `(0, r]^{|lambda|}` (estimated by rejection sampling).
pub fn path_degeneration_experiment(
    lambda: &Partition,
    r: f64,
    l_grid: &[u64],
    seed: u64,
    ssyt_samples: usize,
    reference_samples: usize,
) -> Result<Vec<DegenerationRow>> {
    let boxes = lambda.size() as usize;
    // Reference moments from rejection sampling, shared across scales.
    let mut ref_first = vec![0.0f64; boxes];
    let mut ref_second = vec![0.0f64; boxes];
    {
        let mut rng = replica_rng(seed, 0);
        let mut accepted = 0usize;
        let mut draws = vec![0.0f64; boxes];
        while accepted < reference_samples {
            for d in draws.iter_mut() {
                *d = uniform_in_half_open(&mut rng, r);
            }
            if monotone_filling(lambda, &draws) {
                for (k, &v) in draws.iter().enumerate() {
                    ref_first[k] += v;
                    ref_second[k] += v * v;
                }
                accepted += 1;
            }
        }
        for v in ref_first.iter_mut().chain(ref_second.iter_mut()) {
            *v /= reference_samples as f64;
        }
    }

    let mut out = Vec::with_capacity(l_grid.len());
    for (grid_idx, &l) in l_grid.iter().enumerate() {
        let n = (r * l as f64).round() as usize;
        if n < lambda.len() {
            return Err(Error::LevelMismatch(format!(
                "scale {l} gives level {n}, too small for {lambda}"
            )));
        }
        let mut rng = replica_rng(seed, grid_idx as u64 + 1);
        let sampler = GtChainSampler::new(lambda, n)?;
        let mut first = vec![0.0f64; boxes];
        let mut second = vec![0.0f64; boxes];
        for _ in 0..ssyt_samples {
            let ssyt = sampler.sample_ssyt(&mut rng)?;
            let mut k = 0;
            for row in ssyt.rows() {
                for &v in row {
                    let x = v as f64 / l as f64;
                    first[k] += x;
                    second[k] += x * x;
                    k += 1;
                }
            }
        }
        for v in first.iter_mut().chain(second.iter_mut()) {
            *v /= ssyt_samples as f64;
        }
        let mut disc = 0.0f64;
        for k in 0..boxes {
            disc = disc.max((first[k] - ref_first[k]).abs());
            disc = disc.max((second[k] - ref_second[k]).abs());
        }
        out.push(DegenerationRow {
            scale: l,
            level: n,
            max_moment_discrepancy: disc,
        });
    }
    Ok(out)
}

/// Reading-order filling is strictly increasing along rows and columns.
fn monotone_filling(lambda: &Partition, values: &[f64]) -> bool {
    let mut offsets = Vec::with_capacity(lambda.len());
    let mut acc = 0usize;
    for i in 0..lambda.len() {
        offsets.push(acc);
        acc += lambda.part(i) as usize;
    }
    for i in 0..lambda.len() {
        for j in 0..lambda.part(i) as usize {
            let v = values[offsets[i] + j];
            if j > 0 && values[offsets[i] + j - 1] >= v {
                return false;
            }
            if i > 0 && values[offsets[i - 1] + j] >= v {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::ZParams;
    use crate::oracles;
    use crate::scalar::{rat, rat_int, GaussRat};
    use std::collections::BTreeMap;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn poisson_path_zero_intensity_and_determinism() {
        for seed in [0u64, 1, 7] {
            let path = sample_poisson_path(0.0, 1.0, seed);
            assert!(path.times.is_empty());
        }
        let a = sample_poisson_path(2.0, 1.0, 7);
        let b = sample_poisson_path(2.0, 1.0, 7);
        assert_eq!(a, b);
        let c = sample_poisson_path(2.0, 1.0, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn poisson_path_mean_count() {
        let samples = 100_000usize;
        let mut rng = replica_rng(0, 0);
        let mut total = 0usize;
        for _ in 0..samples {
            total += sample_poisson_path_with(2.0, 1.0, &mut rng).times.len();
        }
        let mean = total as f64 / samples as f64;
        // 3 sigma band for the mean of Poisson(2) over 1e5 samples.
        let band = 3.0 * (2.0f64 / samples as f64).sqrt();
        assert!((mean - 2.0).abs() < band, "mean {mean}, band {band}");
    }

    #[test]
    fn poisson_path_first_jump_beta_law() {
        // Conditioned on count n = 3, the first jump over r follows
        // Beta(1, 3): F(t) = 1 - (1 - t)^3.
        let mut rng = replica_rng(0, 0);
        let wanted = 10_000usize;
        let mut firsts = Vec::with_capacity(wanted);
        while firsts.len() < wanted {
            let path = sample_poisson_path_with(3.0, 1.0, &mut rng);
            if path.times.len() == 3 {
                firsts.push(path.times[0]);
            }
        }
        for t in [0.1, 0.25, 0.5, 0.75] {
            let fraction = firsts.iter().filter(|&&x| x <= t).count() as f64 / wanted as f64;
            let expected = 1.0 - (1.0 - t) * (1.0 - t) * (1.0 - t);
            let band = 3.0 * (expected * (1.0 - expected) / wanted as f64).sqrt();
            assert!(
                (fraction - expected).abs() < band,
                "CDF at {t}: {fraction} vs {expected} (band {band})"
            );
        }
    }

    #[test]
    fn standard_tableau_one_row_and_frequencies() {
        let unique = sample_standard_tableau(&p(&[4]), 3);
        assert_eq!(unique.rows(), &[vec![1, 2, 3, 4]]);

        for shape in [p(&[2, 1]), p(&[2, 2])] {
            let mut rng = replica_rng(0, 0);
            let samples = 10_000usize;
            let mut counts: BTreeMap<Vec<Vec<u32>>, usize> = BTreeMap::new();
            for _ in 0..samples {
                let t = sample_standard_tableau_with(&shape, &mut rng);
                *counts.entry(t.rows().to_vec()).or_default() += 1;
            }
            assert_eq!(counts.len(), 2, "dim {shape} = 2");
            let band = 3.0 * (0.25f64 / samples as f64).sqrt();
            for (_, c) in counts {
                let freq = c as f64 / samples as f64;
                assert!((freq - 0.5).abs() < band, "frequency {freq} at {shape}");
            }
        }
    }

    #[test]
    fn downward_chain_telescopes_exactly() {
        // Symbolic check: every standard tableau's chain probability is
        // exactly 1/dim(lambda).
        for n in 0..=6u64 {
            for lambda in crate::partitions::enumerate_partitions(n) {
                let dim = Rat::from_integer(Int::from(dim_standard(&lambda)));
                for rows in oracles::enumerate_standard_tableaux(&lambda) {
                    let tableau = StandardTableau::new(rows).unwrap();
                    let chain = tableau.shape_chain();
                    let mut prob = Rat::one();
                    for w in chain.windows(2) {
                        prob *= Rat::from_integer(Int::from(dim_standard(&w[0])))
                            / Rat::from_integer(Int::from(dim_standard(&w[1])));
                    }
                    assert_eq!(prob, Rat::one() / dim.clone(), "at {lambda}");
                }
            }
        }
    }

    #[test]
    fn ssyt_sampler_uniformity() {
        // lambda = (1), N = 2: the two tableaux [1] and [2].
        // lambda = (2,1), N = 2: Dim = 2.
        for (shape, level) in [(p(&[1]), 2usize), (p(&[2, 1]), 2)] {
            let mut rng = replica_rng(0, 0);
            let samples = 10_000usize;
            let mut counts: BTreeMap<Vec<Vec<u32>>, usize> = BTreeMap::new();
            for _ in 0..samples {
                let t = sample_uniform_ssyt_with(&shape, level, &mut rng).unwrap();
                *counts.entry(t.rows().to_vec()).or_default() += 1;
            }
            assert_eq!(counts.len(), 2);
            let band = 3.0 * (0.25f64 / samples as f64).sqrt();
            for (_, c) in counts {
                let freq = c as f64 / samples as f64;
                assert!((freq - 0.5).abs() < band);
            }
        }
        let empty = sample_uniform_ssyt(&Partition::empty(), 3, 5).unwrap();
        assert!(empty.rows().is_empty());
    }

    #[test]
    fn ssyt_sampler_matches_enumeration_on_three_rows() {
        // All schemes with top (2,1,0) at N = 3 are equally likely.
        let shape = p(&[2, 1]);
        let level = 3usize;
        let dim = crate::partitions::weyl_dim(&shape, level).unwrap();
        let dim: u64 = nat_to_f64(&dim) as u64;
        let mut rng = replica_rng(1, 0);
        let samples = 20_000usize;
        let sampler = GtChainSampler::new(&shape, level).unwrap();
        let mut counts: BTreeMap<Vec<Vec<u32>>, usize> = BTreeMap::new();
        for _ in 0..samples {
            let t = sampler.sample_ssyt(&mut rng).unwrap();
            *counts.entry(t.rows().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len() as u64, dim);
        let expected = 1.0 / dim as f64;
        let band = 3.0 * (expected * (1.0 - expected) / samples as f64).sqrt();
        for (_, c) in counts {
            let freq = c as f64 / samples as f64;
            assert!((freq - expected).abs() < band, "freq {freq} vs {expected}");
        }
    }

    #[test]
    fn yb_path_origin_and_determinism() {
        let budget = TailBudget::default();
        let origin = ThomaConePoint::<Rat>::origin();
        for seed in 0..5u64 {
            let path = sample_yb_path(&origin, 1.0, seed, &budget).unwrap();
            assert!(path.shape().is_empty());
        }
        let omega = ThomaConePoint::new(vec![rat(1, 2)], vec![], rat_int(1)).unwrap();
        let a = sample_yb_path(&omega, 1.0, 42, &budget).unwrap();
        let b = sample_yb_path(&omega, 1.0, 42, &budget).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn yb_path_size_distribution_is_poisson() {
        // Pure-gamma point of size 1, horizon 1: endpoint sizes are
        // Poisson(1) by Schur completeness.
        let budget = TailBudget::default();
        let omega = ThomaConePoint::new(vec![], vec![], rat_int(1)).unwrap();
        let samples = 100_000usize;
        let mut rng = replica_rng(0, 0);
        let sampler = YbPathSampler::new(&omega, 1.0, &budget).unwrap();
        let mut counts = vec![0usize; 10];
        for _ in 0..samples {
            let path = sampler.sample(&mut rng).unwrap();
            let size = (path.shape().size() as usize).min(9);
            counts[size] += 1;
        }
        // Chi-square against Poisson(1) with the last bin cumulative;
        // 27.88 is the 0.999 quantile at 9 degrees of freedom.
        let mut chi2 = 0.0;
        let mut cum = 0.0;
        for (k, &c) in counts.iter().enumerate() {
            let p_k = if k < 9 {
                let v = (-1.0f64).exp() / libm::tgamma(k as f64 + 1.0);
                cum += v;
                v
            } else {
                1.0 - cum
            };
            let expected = p_k * samples as f64;
            chi2 += (c as f64 - expected).powi(2) / expected;
        }
        assert!(chi2 < 27.88, "chi-square {chi2}");
    }

    #[test]
    fn yb_path_marginal_consistency_at_half_horizon() {
        // Cutting sampled horizon-1 paths at 1/2 reproduces the boundary
        // kernel at r = 1/2.
        let budget = TailBudget::default();
        let omega = ThomaConePoint::new(vec![rat(1, 2)], vec![rat(1, 4)], rat_int(1)).unwrap();
        let samples = 40_000usize;
        let mut rng = replica_rng(0, 0);
        let sampler = YbPathSampler::new(&omega, 1.0, &budget).unwrap();
        let mut counts: BTreeMap<Partition, usize> = BTreeMap::new();
        for _ in 0..samples {
            let path = sampler.sample(&mut rng).unwrap();
            *counts.entry(path.shape_at(0.5)).or_default() += 1;
        }
        let mut chi2 = 0.0;
        let mut dof = 0usize;
        let mut covered = 0.0;
        for m in 0..=4u64 {
            for mu in crate::partitions::enumerate_partitions(m) {
                let expected = yb_boundary_kernel(&omega, 0.5, &mu) * samples as f64;
                covered += expected;
                let observed = counts.get(&mu).copied().unwrap_or(0) as f64;
                chi2 += (observed - expected).powi(2) / expected;
                dof += 1;
            }
        }
        // Remainder bin: shapes of size > 4.
        let other_obs: usize = counts
            .iter()
            .filter(|(k, _)| k.size() > 4)
            .map(|(_, &c)| c)
            .sum();
        let other_exp = samples as f64 - covered;
        chi2 += (other_obs as f64 - other_exp).powi(2) / other_exp;
        // 0.999 quantile of chi-square with 12 dof is 32.9.
        assert!(chi2 < 32.9, "chi-square {chi2} over {dof} cells");
    }

    #[test]
    fn cylinder_probability_z_family_example() {
        let zp = ZParams::new(GaussRat::from_int(2), GaussRat::from_int(3)).unwrap();
        let family = ZMeasureYoungFamily::new(zp);
        let path = vec![Partition::empty(), p(&[1]), p(&[2])];
        assert_eq!(
            cylinder_probability_young(&path, &family).unwrap(),
            rat(6, 7)
        );
        let path = vec![Partition::empty(), p(&[1]), p(&[1, 1])];
        assert_eq!(
            cylinder_probability_young(&path, &family).unwrap(),
            rat(1, 7)
        );
        // Endpoint (2,1): dim = 2, both paths get half the level mass each.
        let m3: BTreeMap<Partition, Rat> = crate::measures::z_measure_level(
            &ZParams::new(GaussRat::from_int(2), GaussRat::from_int(3)).unwrap(),
            3,
        )
        .into_iter()
        .collect();
        let path_a = vec![Partition::empty(), p(&[1]), p(&[2]), p(&[2, 1])];
        let path_b = vec![Partition::empty(), p(&[1]), p(&[1, 1]), p(&[2, 1])];
        let pa = cylinder_probability_young(&path_a, &family).unwrap();
        let pb = cylinder_probability_young(&path_b, &family).unwrap();
        assert_eq!(pa, pb);
        assert_eq!(pa, m3[&p(&[2, 1])].clone() / rat_int(2));
    }

    #[test]
    fn cylinder_probability_path_independent_up_to_size_five() {
        let zp = ZParams::new(GaussRat::from_int(2), GaussRat::from_int(3)).unwrap();
        let family = ZMeasureYoungFamily::new(zp);
        for n in 1..=5u64 {
            for lambda in crate::partitions::enumerate_partitions(n) {
                let mass = family.mass(n, &lambda).unwrap();
                let dim = Rat::from_integer(Int::from(dim_standard(&lambda)));
                let expected = mass / dim;
                for rows in oracles::enumerate_standard_tableaux(&lambda) {
                    let chain = StandardTableau::new(rows).unwrap().shape_chain();
                    assert_eq!(
                        cylinder_probability_young(&chain, &family).unwrap(),
                        expected,
                        "path through {lambda}"
                    );
                }
            }
        }
    }

    #[test]
    fn cylinder_probability_pascal_fair_coin() {
        let family = PascalBernoulliFamily::new(rat(1, 2)).unwrap();
        // Any length-N path has probability 2^{-N}.
        let paths = [
            vec![(0, 0), (1, 0), (1, 1), (2, 1)],
            vec![(0, 0), (0, 1), (0, 2), (1, 2)],
            vec![(0, 0), (1, 0), (2, 0), (3, 0)],
        ];
        for path in paths {
            assert_eq!(
                cylinder_probability_pascal(&path, &family).unwrap(),
                rat(1, 8)
            );
        }
        assert!(cylinder_probability_pascal(&[(1, 0), (1, 1)], &family).is_err());
    }

    #[test]
    fn cylinder_probability_gt_path_independent() {
        // Top measure concentrated on [ (2,1,0), 3 ] pushed down: all
        // schemes with that top row are equally likely.
        let top = Signature::new(vec![2, 1, 0]).unwrap();
        let family = GtPushdownFamily::new(3, vec![(top.clone(), Rat::one())]).unwrap();
        let dim = crate::partitions::weyl_dim(&p(&[2, 1]), 3).unwrap();
        let expected = Rat::one() / Rat::from_integer(Int::from(dim));
        let mut found = 0usize;
        // Enumerate schemes by brute force over interlacing rows.
        for a in 0..=4u32 {
            for b1 in 1..=2u32 {
                for b2 in 0..=1u32.min(b1) {
                    if !(2 >= b1 && b1 >= 1 && 1 >= b2) {
                        continue;
                    }
                    if !(b1 >= a && a >= b2) {
                        continue;
                    }
                    let scheme =
                        GtScheme::new(vec![vec![a], vec![b1, b2], vec![2, 1, 0]]);
                    let Ok(scheme) = scheme else { continue };
                    found += 1;
                    assert_eq!(
                        cylinder_probability_gt(&scheme, &family).unwrap(),
                        expected
                    );
                }
            }
        }
        let dim_f = nat_to_f64(&crate::partitions::weyl_dim(&p(&[2, 1]), 3).unwrap());
        assert_eq!(found as f64, dim_f, "all schemes enumerated");
    }

    #[test]
    fn gt_pushdown_path_independence_three_rows() {
        // A mixed top measure at N = 4 over three-row shapes; every scheme
        // probability must equal mass(top)/Dim(top).
        let tops = [
            (Signature::new(vec![2, 1, 0, 0]).unwrap(), rat(1, 2)),
            (Signature::new(vec![1, 1, 1, 0]).unwrap(), rat(1, 3)),
            (Signature::new(vec![3, 0, 0, 0]).unwrap(), rat(1, 6)),
        ];
        let family = GtPushdownFamily::new(4, tops.to_vec()).unwrap();
        let mut rng = replica_rng(5, 0);
        for (top, mass) in &tops {
            let shape = top.to_partition().unwrap();
            let dim = crate::partitions::weyl_dim(&shape, 4).unwrap();
            let expected = mass / Rat::from_integer(Int::from(dim));
            for _ in 0..25 {
                let scheme = sample_gt_scheme_with(&shape, 4, &mut rng).unwrap();
                assert_eq!(
                    cylinder_probability_gt(&scheme, &family).unwrap(),
                    expected
                );
            }
        }
    }

    #[test]
    fn degeneration_single_box_mean() {
        let rows =
            path_degeneration_experiment(&p(&[1]), 1.0, &[40], 0, 10_000, 50_000).unwrap();
        // Single scaled entry converges to uniform on (0, 1]: the max
        // moment discrepancy is small already at L = 40.
        assert!(rows[0].max_moment_discrepancy < 0.02, "{rows:?}");
    }

    #[test]
    fn degeneration_two_box_order_statistics() {
        // lambda = (2): scaled entries approach sorted uniforms with means
        // (r/3, 2r/3).
        let lambda = p(&[2]);
        let mut rng = replica_rng(0, 0);
        let samples = 20_000usize;
        let l = 60u64;
        let sampler = GtChainSampler::new(&lambda, l as usize).unwrap();
        let mut means = [0.0f64; 2];
        for _ in 0..samples {
            let t = sampler.sample_ssyt(&mut rng).unwrap();
            means[0] += t.rows()[0][0] as f64 / l as f64;
            means[1] += t.rows()[0][1] as f64 / l as f64;
        }
        for m in means.iter_mut() {
            *m /= samples as f64;
        }
        let band = 3.0 * (1.0f64 / (12.0 * samples as f64)).sqrt() + 2.0 / l as f64;
        assert!((means[0] - 1.0 / 3.0).abs() < band, "{means:?}");
        assert!((means[1] - 2.0 / 3.0).abs() < band, "{means:?}");
    }

    #[test]
    fn degeneration_discrepancy_decreases() {
        let rows = path_degeneration_experiment(
            &p(&[2, 1]),
            1.0,
            &[10, 40, 160],
            0,
            12_000,
            120_000,
        )
        .unwrap();
        assert!(
            rows[0].max_moment_discrepancy > rows[1].max_moment_discrepancy
                && rows[1].max_moment_discrepancy > rows[2].max_moment_discrepancy,
            "{rows:?}"
        );
    }
}
