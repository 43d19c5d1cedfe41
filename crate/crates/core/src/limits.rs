//! Quantitative verifiers for the limit statements: each sweep evaluates
//! both sides of a degeneration over a parameter grid, reports per-point
//! errors, and fits a convergence-rate exponent on the log-log scale.

use crate::boundary::{gt_boundary_kernel, yb_boundary_kernel, GtBoundaryPoint, TailBudget};
use crate::links::yb_link;
use crate::measures::{z_measure_yb_f64, zw_measure_w0, ZParams, ZWParams};
use crate::partitions::{
    dim_skew, dim_standard, enumerate_partitions, omega_of, weyl_dim, Partition, Signature,
};
use crate::scalar::{nat_to_f64, rat_abs, rat_int, rat_to_f64, round_half_up, GaussRat, Int, Rat};
use crate::symfunc::{schur, skew_schur_principal, ThomaConePoint};
use crate::{Error, Result};
use num_traits::{One, ToPrimitive, Zero};

/// Rate fit on the tail of a grid: least-squares slope of `ln(error)`
/// against `ln(parameter)`.
#[derive(Clone, Copy, Debug)]
pub struct RateFit {
    pub exponent: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
}

/// Outcome of one error-vs-parameter sweep.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub label: String,
    pub param_name: String,
    pub params: Vec<f64>,
    pub errors: Vec<f64>,
    /// Present when the sweep is exact in rational arithmetic.
    pub exact_errors: Option<Vec<Rat>>,
    pub tail_bounds: Option<Vec<f64>>,
    pub fit: Option<RateFit>,
    /// Sweep-specific annotation (realized ratios, fitted constants, ...).
    pub notes: Vec<String>,
}

impl SweepReport {
    fn finish(mut self) -> Self {
        self.fit = fit_rate(&self.params, &self.errors);
        self
    }

    /// Errors weakly decrease along the grid up to a slack factor.
    pub fn errors_decreasing(&self, slack: f64) -> bool {
        self.errors
            .windows(2)
            .all(|w| w[1] <= slack * w[0] || w[1] == 0.0)
    }

    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }
}

/// Least-squares log-log slope over the last half of the grid (the early
/// points are pre-asymptotic). Needs at least two nonzero errors.
pub fn fit_rate(params: &[f64], errors: &[f64]) -> Option<RateFit> {
    let start = params.len() / 2;
    let pts: Vec<(f64, f64)> = params[start..]
        .iter()
        .zip(&errors[start..])
        .filter(|(_, &e)| e > 0.0)
        .map(|(&p, &e)| (p.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (sx, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Some(RateFit {
        exponent: slope,
        residual,
    })
}

/// The finite-level degeneration of the GT links towards the bouquet links:
/// for each grid level `N` (with `N' = round(N r'/r)`) the exact rational
/// difference between
/// `Dim[mu,N] S_{nu/mu}(1^{N'-N}) / Dim[nu,N']` and the bouquet link entry
/// at ratio `r/r'`.
pub fn thm5_sweep(
    mu: &Partition,
    nu: &Partition,
    r: &Rat,
    r_prime: &Rat,
    n_grid: &[usize],
) -> Result<SweepReport> {
    if r <= &Rat::zero() || r_prime <= r {
        return Err(Error::ParameterOutOfRange("need r' > r > 0".into()));
    }
    if !mu.contained_in(nu) {
        return Err(Error::InvalidPartition(format!("{mu} not contained in {nu}")));
    }
    let q = r / r_prime;
    let ratio = r_prime / r;
    let mut params = Vec::new();
    let mut errors = Vec::new();
    let mut exact = Vec::new();
    let mut notes = Vec::new();
    for &n in n_grid {
        if nu.len() > n {
            return Err(Error::LevelMismatch(format!(
                "{nu} needs level >= {}, grid has {n}",
                nu.len()
            )));
        }
        let n_prime = round_half_up(&(&ratio * rat_int(n as i64)))
            .to_usize()
            .ok_or_else(|| Error::ParameterOutOfRange("level overflow".into()))?;
        if n_prime <= n {
            return Err(Error::LevelMismatch(format!(
                "rounded N' = {n_prime} not above N = {n}"
            )));
        }
        let gt_side = Rat::from_integer(Int::from(
            weyl_dim(mu, n)? * skew_schur_principal(mu, nu, (n_prime - n) as u32),
        )) / Rat::from_integer(Int::from(weyl_dim(nu, n_prime)?));
        let yb_side = yb_link(nu, &q)?.prob(mu);
        let diff = rat_abs(&(gt_side - yb_side));
        params.push(n as f64);
        errors.push(rat_to_f64(&diff));
        exact.push(diff);
        notes.push(format!(
            "N={n} realized N'/N = {n_prime}/{n}",
        ));
    }
    Ok(SweepReport {
        label: format!("thm5 mu={mu} nu={nu} q={q}"),
        param_name: "N".into(),
        params,
        errors,
        exact_errors: Some(exact),
        tail_bounds: None,
        fit: None,
        notes,
    }
    .finish())
}

/// Degeneration of the zw-measures (with `w = 0`, `w' = N/r`) towards the
/// bouquet z-measure with negated parameters.
pub fn thm6_sweep(
    zp: &ZParams,
    r: &Rat,
    mu: &Partition,
    n_grid: &[usize],
) -> Result<SweepReport> {
    if r <= &Rat::zero() {
        return Err(Error::ParameterOutOfRange("need r > 0".into()));
    }
    let limit_params = zp.negated();
    let r_f = rat_to_f64(r);
    let mut params = Vec::new();
    let mut errors = Vec::new();
    for &n in n_grid {
        if mu.len() > n {
            return Err(Error::LevelMismatch(format!("{mu} too tall for level {n}")));
        }
        let w_prime = Rat::from_integer(Int::from(n as i64)) / r;
        // Validate the quadruple lies in the admissible domain.
        ZWParams::new(
            zp.z().clone(),
            zp.z_prime().clone(),
            GaussRat::from_int(0),
            GaussRat::from_rat(w_prime.clone()),
        )?;
        let gt_side = zw_measure_w0(zp, rat_to_f64(&w_prime), n, mu)?;
        let yb_side = z_measure_yb_f64(&limit_params, r_f, mu);
        params.push(n as f64);
        errors.push((gt_side - yb_side).abs());
    }
    Ok(SweepReport {
        label: format!("thm6 mu={mu} r={r}"),
        param_name: "N".into(),
        params,
        errors,
        exact_errors: None,
        tail_bounds: None,
        fit: None,
        notes: Vec::new(),
    }
    .finish())
}

/// Degeneration of the GT boundary kernel at scaled points towards the
/// bouquet boundary kernel: `error(eps)` with `N(eps) = round(r/eps)` and
/// plus-component `eps * omega`.
pub fn thm7_sweep(
    omega: &ThomaConePoint<Rat>,
    r: f64,
    mu: &Partition,
    eps_grid: &[f64],
    budget: &TailBudget,
) -> Result<SweepReport> {
    if r <= 0.0 {
        return Err(Error::ParameterOutOfRange("need r > 0".into()));
    }
    let omega_f = omega.to_f64();
    let yb_side = yb_boundary_kernel(omega, r, mu);
    let mut params = Vec::new();
    let mut errors = Vec::new();
    let mut tails = Vec::new();
    for &eps in eps_grid {
        if eps <= 0.0 {
            return Err(Error::ParameterOutOfRange("need eps > 0".into()));
        }
        let n = (r / eps).round() as usize;
        if n < mu.len().max(1) {
            return Err(Error::LevelMismatch(format!(
                "N(eps) = {n} cannot hold {mu}"
            )));
        }
        let scaled = omega_f.scale(&eps);
        let point = GtBoundaryPoint::new(scaled, ThomaConePoint::origin())?;
        let gt_side = gt_boundary_kernel(&point, &Signature::from_partition(mu, n)?, budget)?;
        params.push(eps);
        errors.push((gt_side - yb_side).abs());
        tails.push(budget.epsilon);
    }
    Ok(SweepReport {
        label: format!("thm7 mu={mu} r={r}"),
        param_name: "eps".into(),
        params,
        errors,
        exact_errors: None,
        tail_bounds: Some(tails),
        fit: None,
        notes: Vec::new(),
    }
    .finish())
}

/// Closed form of the GT side of the theorem-7 degeneration at a pure-gamma
/// point `(0, 0, delta)`: `Dim[mu,N] e^{-N eps delta} (eps delta)^{|mu|}
/// dim(mu)/|mu|!`.
pub fn gt_pure_gamma_closed_form(delta: f64, eps: f64, n: usize, mu: &Partition) -> Result<f64> {
    let dim_gt = crate::partitions::weyl_dim_hook_content(mu, n)?;
    let m = mu.size();
    Ok(dim_gt
        * (-(n as f64) * eps * delta).exp()
        * (eps * delta).powi(m as i32)
        * nat_to_f64(&dim_standard(mu))
        / libm::tgamma(m as f64 + 1.0))
}

/// Closed form of the bouquet side at a pure-gamma point:
/// `e^{-r delta} (r delta)^{|mu|} (dim(mu)/|mu|!)^2`.
pub fn yb_pure_gamma_closed_form(delta: f64, r: f64, mu: &Partition) -> f64 {
    let m = mu.size();
    let dof = nat_to_f64(&dim_standard(mu)) / libm::tgamma(m as f64 + 1.0);
    (-r * delta).exp() * (r * delta).powi(m as i32) * dof * dof
}

/// Uniform-convergence sweep for the binomial-to-exponential kernel limit:
/// for each `r'` the sup over the `x`-grid of
/// `|(1 - r/r')^{r' x} x^k - e^{-r x} x^k|`.
pub fn lemma5_sup(r: f64, k: u32, r_prime_grid: &[f64], x_grid: &[f64]) -> Result<SweepReport> {
    if r <= 0.0 {
        return Err(Error::ParameterOutOfRange("need r > 0".into()));
    }
    let mut params = Vec::new();
    let mut errors = Vec::new();
    for &rp in r_prime_grid {
        if rp <= r {
            return Err(Error::ParameterOutOfRange(format!(
                "grid r' = {rp} not above r = {r}"
            )));
        }
        let base = (1.0 - r / rp).ln();
        let sup = x_grid
            .iter()
            .map(|&x| {
                let pre = (rp * x * base).exp() * x.powi(k as i32);
                let lim = (-r * x).exp() * x.powi(k as i32);
                (pre - lim).abs()
            })
            .fold(0.0, f64::max);
        params.push(rp);
        errors.push(sup);
    }
    Ok(SweepReport {
        label: format!("lemma5 r={r} k={k}"),
        param_name: "r_prime".into(),
        params,
        errors,
        exact_errors: None,
        tail_bounds: None,
        fit: None,
        notes: Vec::new(),
    }
    .finish())
}

/// Scaling limit of the negative binomial family towards the gamma
/// distribution: for each grid level `r` the maximum over `k <= k_max` of
/// `|E[(m/r)^k] - (c)_k|`, where `(c)_k` is the `k`-th moment of the
/// gamma distribution with parameter `c`. The expectation is truncated with
/// a geometric tail certified by the crossing of the weight ratio below 1.
pub fn neg_binom_gamma_moments(c: f64, k_max: u32, r_grid: &[f64]) -> Result<SweepReport> {
    if c <= 0.0 {
        return Err(Error::ParameterOutOfRange("need c > 0".into()));
    }
    let mut params = Vec::new();
    let mut errors = Vec::new();
    for &r in r_grid {
        if r <= 0.0 {
            return Err(Error::ParameterOutOfRange("need r > 0 on the grid".into()));
        }
        // Far enough that the summand ratio q (c+m)/(m+1) (x (m+1)/m)^k
        // stays below ~ (1+q)/2 < 1; walk until the term is negligible.
        let mut moments = vec![0.0f64; k_max as usize + 1];
        let mut m = 0u64;
        loop {
            let w = crate::measures::neg_binom_pmf(c, r, m);
            let x = m as f64 / r;
            let mut pow = 1.0;
            for acc in moments.iter_mut() {
                *acc += w * pow;
                pow *= x;
            }
            if m as f64 > c + 20.0 * r && w * (1.0 + x).powi(k_max as i32) < 1e-16 {
                break;
            }
            m += 1;
        }
        let mut worst = 0.0f64;
        let mut gamma_moment = 1.0f64;
        for k in 1..=k_max as usize {
            gamma_moment *= c + (k - 1) as f64;
            worst = worst.max((moments[k] - gamma_moment).abs());
        }
        params.push(r);
        errors.push(worst);
    }
    Ok(SweepReport {
        label: format!("negbinom-gamma c={c}"),
        param_name: "r".into(),
        params,
        errors,
        exact_errors: None,
        tail_bounds: None,
        fit: None,
        notes: Vec::new(),
    }
    .finish())
}

/// Value of the falling-factorial dimension ratio
/// `l^(down m) dim(mu, lambda) / dim(lambda)` attached to `mu` at a diagram
/// `lambda` with `l = |lambda|`; the degree-`m` part of this quantity is the
/// Schur value at the embedded cone point.
pub fn frobenius_schur_value(mu: &Partition, lambda: &Partition) -> Rat {
    let l = lambda.size();
    let m = mu.size();
    if m > l {
        return Rat::zero();
    }
    let mut falling = Rat::one();
    for k in 0..m {
        falling *= rat_int((l - k) as i64);
    }
    falling * Rat::from_integer(Int::from(dim_skew(mu, lambda)))
        / Rat::from_integer(Int::from(dim_standard(lambda)))
}

/// Uniformity sweep for the skew-dimension-ratio approximation: for each
/// level `l`, the exact maximum over all of `Y_l` of
/// `|dim(mu, lambda)/dim(lambda) - S_mu(omega_lambda / l)|`; also fits the
/// constant in the `C/l` envelope.
pub fn cor2_sup(mu: &Partition, l_grid: &[u64]) -> Result<SweepReport> {
    let m = mu.size();
    let mut params = Vec::new();
    let mut errors = Vec::new();
    let mut exact = Vec::new();
    for &l in l_grid {
        if l < m {
            return Err(Error::ParameterOutOfRange(format!(
                "grid level {l} below |mu| = {m}"
            )));
        }
        let inv_l = Rat::new(Int::one(), Int::from(l));
        let mut worst = Rat::zero();
        for lambda in enumerate_partitions(l) {
            let ratio = Rat::from_integer(Int::from(dim_skew(mu, &lambda)))
                / Rat::from_integer(Int::from(dim_standard(&lambda)));
            let schur_val = schur(mu, &omega_of(&lambda).scale(&inv_l));
            let diff = rat_abs(&(ratio - schur_val));
            if diff > worst {
                worst = diff;
            }
        }
        params.push(l as f64);
        errors.push(rat_to_f64(&worst));
        exact.push(worst);
    }
    let fitted_c = params
        .iter()
        .zip(&errors)
        .map(|(&l, &e)| e * l)
        .fold(0.0, f64::max);
    Ok(SweepReport {
        label: format!("cor2 mu={mu}"),
        param_name: "l".into(),
        params,
        errors,
        exact_errors: Some(exact),
        tail_bounds: None,
        fit: None,
        notes: vec![format!("fitted C with max_error(l) <= C/l: {fitted_c:e}")],
    }
    .finish())
}
