//! Boundary kernels of the four projective systems and truncated
//! verification of the boundary coherence relations.
//!
//! Boundary-side scalars are approximate reals (they involve `e^{-rx}`);
//! purely combinatorial factors stay exact and enter the real domain at the
//! last step.

use crate::links::{binom_link, gt_one_step_supported};
use crate::partitions::{
    dim_standard, weyl_dim, weyl_dim_signature, Partition, Signature,
};
use crate::scalar::{nat_to_f64, Int, Rat, Scalar};
use crate::symfunc::{complete_h_prefix, schur, ThomaConePoint, ThomaSimplexPoint};
use crate::{Error, Result};
use num_traits::{One, Zero};

/// Tolerance and cutoff policy for truncated verifications. Every truncated
/// quantity reports both the achieved discrepancy and a tail bound.
#[derive(Clone, Debug)]
pub struct TailBudget {
    /// Target tolerance for truncation tails.
    pub epsilon: f64,
    /// Cap on sizes/coordinates when summing over a level.
    pub max_size: u64,
    /// Hard cap on series degree in the Laurent-coefficient expansion.
    pub max_degree: usize,
}

impl Default for TailBudget {
    fn default() -> Self {
        TailBudget {
            epsilon: 1e-9,
            max_size: 400,
            max_degree: 512,
        }
    }
}

impl TailBudget {
    pub fn with_epsilon(epsilon: f64) -> Self {
        TailBudget {
            epsilon,
            ..TailBudget::default()
        }
    }
}

/// Poisson boundary kernel of the binomial system:
/// `e^{-rx} (rx)^m / m!`.
pub fn poisson_kernel(x: f64, r: f64, m: u64) -> f64 {
    assert!(x >= 0.0 && r > 0.0, "poisson_kernel needs x >= 0, r > 0");
    let lambda = r * x;
    if lambda == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    (m as f64 * lambda.ln() - lambda - libm::lgamma(m as f64 + 1.0)).exp()
}

/// Chernoff bound on the upper Poisson tail: `P(X >= k) <= e^{-l}(el/k)^k`
/// for `k > l` (and trivially 1 otherwise).
pub fn poisson_tail_bound(lambda: f64, k: u64) -> f64 {
    let kf = k as f64;
    if kf <= lambda || lambda < 0.0 {
        return 1.0;
    }
    if lambda == 0.0 {
        return 0.0;
    }
    (kf * (1.0 + (lambda / kf).ln()) - lambda).exp().min(1.0)
}

/// Smallest cutoff with a certified Poisson tail below `epsilon`, if any
/// exists under the budget's size cap.
pub fn poisson_cutoff(lambda: f64, budget: &TailBudget) -> Result<u64> {
    let mut k = (lambda.ceil() as u64).max(1);
    while k <= budget.max_size {
        if poisson_tail_bound(lambda, k) <= budget.epsilon {
            return Ok(k);
        }
        k += 1;
    }
    Err(Error::TailBudgetExceeded {
        required: budget.epsilon,
        achieved: poisson_tail_bound(lambda, budget.max_size),
        cutoff: budget.max_size as usize,
    })
}

/// Young-graph boundary kernel `dim(mu) S_mu(omega)` at a simplex point.
pub fn young_boundary_kernel<S: Scalar>(omega: &ThomaSimplexPoint<S>, mu: &Partition) -> S {
    S::from_nat(&dim_standard(mu)) * schur(mu, omega.as_cone_point())
}

/// Young-bouquet boundary kernel
/// `e^{-r|omega|} r^|mu| / |mu|! dim(mu) S_mu(omega)`,
/// extended by the delta measure at the empty diagram when `omega` is the
/// origin of the cone. The Schur factor is computed in the scalar domain of
/// the point (exact for rational points) before the real-valued prefactor is
/// applied.
pub fn yb_boundary_kernel<S: Scalar>(omega: &ThomaConePoint<S>, r: f64, mu: &Partition) -> f64 {
    assert!(r > 0.0, "yb_boundary_kernel needs r > 0");
    if omega.is_origin() {
        return if mu.is_empty() { 1.0 } else { 0.0 };
    }
    let m = mu.size();
    let size = omega.size().to_f64();
    let log_pref = -r * size + m as f64 * r.ln() - libm::lgamma(m as f64 + 1.0);
    let combinatorial = nat_to_f64(&dim_standard(mu)) * schur(mu, omega).to_f64();
    log_pref.exp() * combinatorial
}

/// A boundary point of the Gelfand-Tsetlin graph: a pair of Thoma cone
/// points with `beta_1^+ + beta_1^- <= 1`.
#[derive(Clone, Debug)]
pub struct GtBoundaryPoint<S: Scalar> {
    plus: ThomaConePoint<S>,
    minus: ThomaConePoint<S>,
}

impl<S: Scalar> GtBoundaryPoint<S> {
    pub fn new(plus: ThomaConePoint<S>, minus: ThomaConePoint<S>) -> Result<Self> {
        let b_plus = plus.beta().first().cloned().unwrap_or_else(S::zero);
        let b_minus = minus.beta().first().cloned().unwrap_or_else(S::zero);
        if b_plus + b_minus > S::one() {
            return Err(Error::InvalidPoint(
                "beta_1^+ + beta_1^- exceeds 1".into(),
            ));
        }
        Ok(GtBoundaryPoint { plus, minus })
    }

    pub fn plus(&self) -> &ThomaConePoint<S> {
        &self.plus
    }

    pub fn minus(&self) -> &ThomaConePoint<S> {
        &self.minus
    }

    pub fn to_f64(&self) -> GtBoundaryPoint<f64> {
        GtBoundaryPoint {
            plus: self.plus.to_f64(),
            minus: self.minus.to_f64(),
        }
    }
}

/// Laurent coefficients of the generating function attached to a GT boundary
/// point, with a certified truncation bound.
#[derive(Clone, Debug)]
pub struct PhiTable {
    n_min: i64,
    values: Vec<f64>,
    /// Certified bound on the truncation error of every stored value.
    pub tail_bound: f64,
    /// Convolution degree actually used.
    pub degree_used: usize,
}

impl PhiTable {
    /// The coefficient `phi_n`; panics outside the requested range.
    pub fn phi(&self, n: i64) -> f64 {
        let idx = n - self.n_min;
        assert!(
            idx >= 0 && (idx as usize) < self.values.len(),
            "phi index {n} outside computed range"
        );
        self.values[idx as usize]
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=(self.n_min + self.values.len() as i64 - 1)
    }
}

struct SideExpansion {
    /// `e^{-gamma} prod (1 - beta_i)/(1 + alpha_i)`.
    constant: f64,
    /// Modified cone point carrying `alpha/(1+alpha)`, `beta/(1-beta)` and
    /// the same gamma.
    modified: ThomaConePoint<f64>,
    /// Radius `rho > 1` inside the disc of convergence of the Taylor side.
    rho: f64,
}

fn side_expansion(point: &ThomaConePoint<f64>) -> Result<SideExpansion> {
    if point.beta().first().copied().unwrap_or(0.0) >= 1.0 {
        return Err(Error::UnsupportedBoundaryPoint(
            "the modified-parameter expansion needs beta_1 < 1".into(),
        ));
    }
    let gamma = point.gamma();
    let mut constant = (-gamma).exp();
    for a in point.alpha() {
        constant /= 1.0 + a;
    }
    for b in point.beta() {
        constant *= 1.0 - b;
    }
    let alpha_mod: Vec<f64> = point.alpha().iter().map(|a| a / (1.0 + a)).collect();
    let beta_mod: Vec<f64> = point.beta().iter().map(|b| b / (1.0 - b)).collect();
    let sum: f64 = alpha_mod.iter().sum::<f64>() + beta_mod.iter().sum::<f64>();
    let modified = ThomaConePoint::new(alpha_mod.clone(), beta_mod, gamma + sum)?;
    let rho = match alpha_mod.first() {
        Some(&amax) if amax > 0.0 => (1.0 / amax).sqrt().min(2.0),
        _ => 2.0,
    };
    Ok(SideExpansion {
        constant,
        modified,
        rho,
    })
}

/// Value of the Taylor-side factor at radius `rho`, used for coefficient
/// bounds (all Taylor coefficients are nonnegative).
fn side_value_at(side: &SideExpansion, rho: f64) -> f64 {
    let mut v = (side.modified.gamma() * rho).exp();
    for a in side.modified.alpha() {
        v /= 1.0 - a * rho;
    }
    for b in side.modified.beta() {
        v *= 1.0 + b * rho;
    }
    v
}

/// The Laurent coefficients `phi_n` for `n` in `range`, computed by
/// expanding each one-sided factor in modified parameters and convolving the
/// `u`-side with the `u^{-1}`-side. The truncation degree grows until the
/// geometric tail bound drops below the budget tolerance.
pub fn gt_phi(
    point: &GtBoundaryPoint<f64>,
    range: std::ops::RangeInclusive<i64>,
    budget: &TailBudget,
) -> Result<PhiTable> {
    let (n_min, n_max) = (*range.start(), *range.end());
    assert!(n_min <= n_max, "empty phi range");
    let plus = side_expansion(point.plus())?;
    let minus = side_expansion(point.minus())?;

    // One-sided points: the convolution collapses, values are exact.
    if point.minus().is_origin() || point.plus().is_origin() {
        let (side, flip) = if point.minus().is_origin() {
            (&plus, false)
        } else {
            (&minus, true)
        };
        let top = if flip { -n_min } else { n_max };
        let h = complete_h_prefix(top.max(0) as usize, &side.modified);
        let values = (n_min..=n_max)
            .map(|n| {
                let k = if flip { -n } else { n };
                if k < 0 {
                    0.0
                } else {
                    side.constant * h[k as usize]
                }
            })
            .collect();
        return Ok(PhiTable {
            n_min,
            values,
            tail_bound: 0.0,
            degree_used: 0,
        });
    }

    // Two-sided convolution with adaptive degree.
    let rho_prod = plus.rho * minus.rho;
    let amp = plus.constant
        * minus.constant
        * side_value_at(&plus, plus.rho)
        * side_value_at(&minus, minus.rho);
    let mut degree = 16usize;
    loop {
        let tail = amp * rho_prod.powi(-(degree as i32 + 1)) / (1.0 - 1.0 / rho_prod);
        if tail <= budget.epsilon {
            break;
        }
        if degree >= budget.max_degree {
            return Err(Error::TailBudgetExceeded {
                required: budget.epsilon,
                achieved: tail,
                cutoff: degree,
            });
        }
        degree *= 2;
    }
    let degree = degree.min(budget.max_degree);
    let tail_bound = amp * rho_prod.powi(-(degree as i32 + 1)) / (1.0 - 1.0 / rho_prod);

    let a = complete_h_prefix((n_max.max(0) as usize) + degree, &plus.modified);
    let b = complete_h_prefix(((-n_min).max(0) as usize) + degree, &minus.modified);
    let scale = plus.constant * minus.constant;
    let values = (n_min..=n_max)
        .map(|n| {
            let mut acc = 0.0;
            for k in 0..=degree as i64 {
                let j = n + k;
                if j < 0 {
                    continue;
                }
                let (j, k) = (j as usize, k as usize);
                if j < a.len() && k < b.len() {
                    acc += a[j] * b[k];
                }
            }
            scale * acc
        })
        .collect();
    Ok(PhiTable {
        n_min,
        values,
        tail_bound,
        degree_used: degree,
    })
}

fn phi_range_for(mu: &Signature) -> std::ops::RangeInclusive<i64> {
    let n = mu.level() as i64;
    let lo = mu.coords()[mu.level() - 1] - n + 1;
    let hi = mu.coords()[0] + n - 1;
    lo.min(0)..=hi.max(0)
}

/// GT boundary kernel `Dim[mu,N] det[phi_{mu_i - i + j}]`. When the minus
/// component is the origin the determinant collapses to size `l = l(mu)`
/// times `phi_0^{N-l}` (and vanishes on signatures with a negative
/// coordinate).
pub fn gt_boundary_kernel(
    point: &GtBoundaryPoint<f64>,
    mu: &Signature,
    budget: &TailBudget,
) -> Result<f64> {
    if point.minus().is_origin() {
        if !mu.is_nonnegative() {
            return Ok(0.0);
        }
        let diagram = mu.to_partition()?;
        let n = mu.level();
        let l = diagram.len();
        // Only the l x l block and phi_0 are needed; the hook-content route
        // keeps the dimension factor linear in |mu| even for huge N.
        let hi = if l == 0 {
            0
        } else {
            diagram.part(0) as i64 + l as i64 - 1
        };
        let phi = gt_phi(point, 0..=hi, budget)?;
        let mut mat = Vec::with_capacity(l);
        for i in 0..l {
            let mut row = Vec::with_capacity(l);
            for j in 0..l {
                let e = diagram.part(i) as i64 - i as i64 + j as i64;
                row.push(if e < 0 { 0.0 } else { phi.phi(e) });
            }
            mat.push(row);
        }
        let det = crate::scalar::det_f64(mat);
        let dim = crate::partitions::weyl_dim_hook_content(&diagram, n)?;
        Ok(dim * det * phi.phi(0).powi((n - l) as i32))
    } else {
        gt_boundary_kernel_det_path(point, mu, budget)
    }
}

/// GT boundary kernel through the full `N x N` determinant, regardless of
/// whether the collapsed form applies. Used to cross-check the collapse
/// identity.
pub fn gt_boundary_kernel_det_path(
    point: &GtBoundaryPoint<f64>,
    mu: &Signature,
    budget: &TailBudget,
) -> Result<f64> {
    let n = mu.level();
    let phi = gt_phi(point, phi_range_for(mu), budget)?;
    let mut mat = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(phi.phi(mu.coords()[i] - i as i64 + j as i64));
        }
        mat.push(row);
    }
    let det = crate::scalar::det_f64(mat);
    Ok(nat_to_f64(&weyl_dim_signature(mu)) * det)
}

/// Per-target row of a truncated coherence check.
#[derive(Clone, Debug)]
pub struct TruncRow<T> {
    pub target: T,
    /// Truncated sum over the upper level.
    pub lhs: f64,
    /// Direct boundary-kernel value at the lower level.
    pub rhs: f64,
    pub discrepancy: f64,
}

/// Report of a truncated coherence verification.
#[derive(Clone, Debug)]
pub struct TruncatedCoherenceReport<T> {
    pub rows: Vec<TruncRow<T>>,
    /// Certified bound on the mass omitted by the truncation.
    pub tail_bound: f64,
    /// Cutoff actually used on the upper level.
    pub cutoff: u64,
}

impl<T> TruncatedCoherenceReport<T> {
    pub fn max_discrepancy(&self) -> f64 {
        self.rows.iter().map(|r| r.discrepancy).fold(0.0, f64::max)
    }

    pub fn passes(&self, epsilon: f64) -> bool {
        self.rows
            .iter()
            .all(|r| r.discrepancy <= epsilon + self.tail_bound)
    }
}

/// Exact Young-graph boundary coherence at a rational simplex point:
/// `sum_nu Lambda_inf(omega, nu) Lambda(nu -> m)(mu) = Lambda_inf(omega, mu)`
/// over `nu` one level above `mu`. Every discrepancy is an exact rational.
pub fn verify_young_coherence(
    omega: &ThomaSimplexPoint<Rat>,
    m: u64,
) -> Result<Vec<(Partition, Rat)>> {
    let upper: Vec<(Partition, Rat)> = crate::partitions::enumerate_partitions(m + 1)
        .into_iter()
        .map(|nu| {
            let k = young_boundary_kernel(omega, &nu);
            (nu, k)
        })
        .collect();
    let mut rows = Vec::new();
    for mu in crate::partitions::enumerate_partitions(m) {
        let mut lhs = Rat::zero();
        for (nu, kernel) in &upper {
            if mu.contained_in(nu) {
                let step = Rat::from_integer(Int::from(dim_standard(&mu)))
                    / Rat::from_integer(Int::from(dim_standard(nu)));
                lhs += kernel.clone() * step;
            }
        }
        let rhs = young_boundary_kernel(omega, &mu);
        rows.push((mu, crate::scalar::rat_abs(&(lhs - rhs))));
    }
    Ok(rows)
}

/// Binomial-system boundary coherence, truncated with a certified Poisson
/// tail: compares `sum_n Poisson_{r'x}(n) Binom_{r/r'}(n -> m)` with
/// `Poisson_{rx}(m)` for `m <= m_max`.
pub fn verify_binomial_coherence(
    x: f64,
    r: &Rat,
    r_prime: &Rat,
    m_max: u64,
    budget: &TailBudget,
) -> Result<TruncatedCoherenceReport<u64>> {
    if r <= &Rat::zero() || r_prime <= r {
        return Err(Error::ParameterOutOfRange(
            "need r' > r > 0 for binomial coherence".into(),
        ));
    }
    let q = r / r_prime;
    let r_f = crate::scalar::rat_to_f64(r);
    let rp_f = crate::scalar::rat_to_f64(r_prime);
    let cutoff = poisson_cutoff(rp_f * x, budget)?;
    let tail_bound = poisson_tail_bound(rp_f * x, cutoff);
    let mut lhs = vec![0.0f64; m_max as usize + 1];
    for n in 0..cutoff {
        let weight = poisson_kernel(x, rp_f, n);
        let row = binom_link(n, &q)?;
        for m in 0..=m_max.min(n) {
            lhs[m as usize] += weight * crate::scalar::rat_to_f64(&row.prob(&m));
        }
    }
    let rows = (0..=m_max)
        .map(|m| {
            let rhs = poisson_kernel(x, r_f, m);
            TruncRow {
                target: m,
                lhs: lhs[m as usize],
                rhs,
                discrepancy: (lhs[m as usize] - rhs).abs(),
            }
        })
        .collect();
    Ok(TruncatedCoherenceReport {
        rows,
        tail_bound,
        cutoff,
    })
}

/// Young-bouquet boundary coherence, truncated by diagram size with a
/// certified Poisson tail (the size marginal of the boundary kernel is
/// Poisson of intensity `r'|omega|`).
pub fn verify_yb_coherence(
    omega: &ThomaConePoint<Rat>,
    r: &Rat,
    r_prime: &Rat,
    m_max: u64,
    budget: &TailBudget,
) -> Result<TruncatedCoherenceReport<Partition>> {
    if r <= &Rat::zero() || r_prime <= r {
        return Err(Error::ParameterOutOfRange(
            "need r' > r > 0 for bouquet coherence".into(),
        ));
    }
    let q = r / r_prime;
    let r_f = crate::scalar::rat_to_f64(r);
    let rp_f = crate::scalar::rat_to_f64(r_prime);
    let size = omega.size().to_f64();

    let targets: Vec<Partition> = (0..=m_max)
        .flat_map(crate::partitions::enumerate_partitions)
        .collect();
    if omega.is_origin() {
        // Both sides are the delta measure at the empty diagram.
        let rows = targets
            .into_iter()
            .map(|mu| {
                let v = if mu.is_empty() { 1.0 } else { 0.0 };
                TruncRow {
                    target: mu,
                    lhs: v,
                    rhs: v,
                    discrepancy: 0.0,
                }
            })
            .collect();
        return Ok(TruncatedCoherenceReport {
            rows,
            tail_bound: 0.0,
            cutoff: 0,
        });
    }

    let cutoff = poisson_cutoff(rp_f * size, budget)?;
    let tail_bound = poisson_tail_bound(rp_f * size, cutoff);
    let one_minus = Rat::one() - &q;
    let mut lhs: std::collections::BTreeMap<Partition, f64> =
        targets.iter().cloned().map(|t| (t, 0.0)).collect();
    for n in 0..cutoff {
        for nu in crate::partitions::enumerate_partitions(n) {
            let weight = yb_boundary_kernel(omega, rp_f, &nu);
            if weight == 0.0 {
                continue;
            }
            let dim_nu = Rat::from_integer(Int::from(dim_standard(&nu)));
            for (mu, slot) in lhs.iter_mut() {
                // Single entry of the bouquet link, cheaper than a full row.
                if !mu.contained_in(&nu) {
                    continue;
                }
                let m = mu.size();
                let mut entry = Rat::from_integer(Int::from(crate::scalar::binomial(n, m)));
                for _ in 0..m {
                    entry *= &q;
                }
                for _ in 0..(n - m) {
                    entry *= &one_minus;
                }
                entry *= Rat::from_integer(Int::from(
                    dim_standard(mu) * crate::partitions::dim_skew(mu, &nu),
                )) / dim_nu.clone();
                *slot += weight * crate::scalar::rat_to_f64(&entry);
            }
        }
    }
    let rows = targets
        .into_iter()
        .map(|mu| {
            let rhs = yb_boundary_kernel(omega, r_f, &mu);
            let l = lhs[&mu];
            TruncRow {
                target: mu,
                lhs: l,
                rhs,
                discrepancy: (l - rhs).abs(),
            }
        })
        .collect();
    Ok(TruncatedCoherenceReport {
        rows,
        tail_bound,
        cutoff,
    })
}

/// GT+ boundary coherence at a point with vanishing minus component, over
/// one level step `(N+1) -> N`. The upper level is truncated at top
/// coordinate `<= cutoff`; the omitted mass is certified through the window
/// deficit `1 - sum(window)` (the boundary kernel is a probability measure)
/// plus the accumulated phi truncation slack.
pub fn verify_gt_coherence(
    point: &GtBoundaryPoint<f64>,
    n: usize,
    mu_window: &[Signature],
    budget: &TailBudget,
) -> Result<TruncatedCoherenceReport<Signature>> {
    if !point.minus().is_origin() {
        return Err(Error::UnsupportedBoundaryPoint(
            "GT coherence verification is implemented for minus = origin only".into(),
        ));
    }
    for mu in mu_window {
        if mu.level() != n {
            return Err(Error::LevelMismatch(format!(
                "window signature {mu} not at level {n}"
            )));
        }
        if !mu.is_nonnegative() {
            return Err(Error::InvalidSignature(format!(
                "window signature {mu} has negative coordinates"
            )));
        }
    }
    let cutoff = budget.max_size;
    let k = cutoff as i64;

    // Upper-level window: all nonnegative signatures at level N+1 with top
    // coordinate <= cutoff, with their kernel masses.
    let mut window_mass = 0.0f64;
    let mut upper: Vec<(Signature, f64)> = Vec::new();
    let mut parts = vec![0i64; n + 1];
    enumerate_bounded_signatures(&mut parts, 0, k, &mut |coords| {
        let nu = Signature::new(coords.to_vec()).expect("generated coords are decreasing");
        let mass = gt_boundary_kernel(point, &nu, budget).expect("phi already validated");
        window_mass += mass;
        if mass != 0.0 {
            upper.push((nu, mass));
        }
    });

    let mut rows = Vec::with_capacity(mu_window.len());
    for mu in mu_window {
        let mu_diag = mu.to_partition()?;
        let dim_mu = nat_to_f64(&weyl_dim(&mu_diag, n)?);
        let mut lhs = 0.0;
        for (nu, mass) in &upper {
            let nu_diag = nu.to_partition()?;
            if gt_one_step_supported(&mu_diag, &nu_diag) {
                lhs += mass * dim_mu / nat_to_f64(&weyl_dim(&nu_diag, n + 1)?);
            }
        }
        let rhs = gt_boundary_kernel(point, mu, budget)?;
        rows.push(TruncRow {
            target: mu.clone(),
            lhs,
            rhs,
            discrepancy: (lhs - rhs).abs(),
        });
    }
    let phi_slack = 16.0 * budget.epsilon * upper.len() as f64;
    Ok(TruncatedCoherenceReport {
        rows,
        tail_bound: (1.0 - window_mass).max(0.0) + phi_slack,
        cutoff,
    })
}

fn enumerate_bounded_signatures(
    parts: &mut Vec<i64>,
    idx: usize,
    upper: i64,
    visit: &mut impl FnMut(&[i64]),
) {
    if idx == parts.len() {
        visit(parts);
        return;
    }
    for v in 0..=upper {
        parts[idx] = v;
        enumerate_bounded_signatures(parts, idx + 1, v, visit);
    }
}
