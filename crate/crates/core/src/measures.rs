//! The distinguished coherent families: negative binomial distributions on
//! `Z_+`, z-measures on the Young graph / bouquet, zw-measures on the
//! Gelfand-Tsetlin graph, with admissibility classification and coherence
//! verification.

use crate::boundary::{TailBudget, TruncRow, TruncatedCoherenceReport};
use crate::links::binom_link;
use crate::partitions::{
    dim_standard, enumerate_partitions, weyl_dim, weyl_dim_signature,
    Partition, Signature,
};
use crate::scalar::{factorial, nat_to_f64, rat_to_f64, GaussRat, Int, Rat};
use crate::{Error, Result};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Generalized Pochhammer symbol `(z)_mu = prod_{(i,j) in mu} (z + j - i)`
/// over a real rational argument.
pub fn pochhammer_mu(z: &Rat, mu: &Partition) -> Rat {
    let mut acc = Rat::one();
    for i in 0..mu.len() {
        for j in 0..mu.part(i) as usize {
            acc *= z + Rat::from_integer(Int::from(j as i64 - i as i64));
        }
    }
    acc
}

/// Generalized Pochhammer symbol over a Gaussian rational argument.
pub fn pochhammer_mu_gauss(z: &GaussRat, mu: &Partition) -> GaussRat {
    let mut acc = GaussRat::from_int(1);
    for i in 0..mu.len() {
        for j in 0..mu.part(i) as usize {
            acc = acc.mul(&z.add_rat(&Rat::from_integer(Int::from(j as i64 - i as i64))));
        }
    }
    acc
}

/// The admissibility series of a parameter couple `(z, z')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    Principal,
    Complementary,
    Degenerate,
    Inadmissible,
}

/// Classify a couple against the three admissible series (including the
/// sign/transposition images of the degenerate one).
pub fn classify_admissible(z: &GaussRat, zp: &GaussRat) -> Series {
    if z.is_zero() || zp.is_zero() {
        return Series::Inadmissible;
    }
    if !z.is_real() || !zp.is_real() {
        return if !z.is_real() && *zp == z.conj() {
            Series::Principal
        } else {
            Series::Inadmissible
        };
    }
    let (a, b) = (&z.re, &zp.re);
    let degenerate_pair = |k: &Rat, other: &Rat| -> bool {
        if !k.is_integer() {
            return false;
        }
        let ki = k.to_integer();
        if ki >= Int::one() {
            other > &(k - Rat::one())
        } else if ki <= -Int::one() {
            other < &(k + Rat::one())
        } else {
            false
        }
    };
    if degenerate_pair(a, b) || degenerate_pair(b, a) {
        return Series::Degenerate;
    }
    if !a.is_integer() && !b.is_integer() && a.floor() == b.floor() {
        return Series::Complementary;
    }
    Series::Inadmissible
}

/// An admissible couple of z-measure parameters.
#[derive(Clone, Debug)]
pub struct ZParams {
    z: GaussRat,
    zp: GaussRat,
    series: Series,
}

impl ZParams {
    pub fn new(z: GaussRat, zp: GaussRat) -> Result<Self> {
        let series = classify_admissible(&z, &zp);
        if series == Series::Inadmissible {
            return Err(Error::Inadmissible(format!(
                "couple ({:?}, {:?}) lies in no admissible series",
                z, zp
            )));
        }
        Ok(ZParams { z, zp, series })
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn z(&self) -> &GaussRat {
        &self.z
    }

    pub fn z_prime(&self) -> &GaussRat {
        &self.zp
    }

    /// `c = z z'`, real and positive for every admissible couple.
    pub fn c(&self) -> Rat {
        let prod = self.z.mul(&self.zp);
        debug_assert!(prod.im.is_zero(), "z z' must be real when admissible");
        prod.re
    }

    /// `(z)_mu (z')_mu`, exact and real. The principal series multiplies
    /// conjugate Gaussian rationals, so the product is `|(z)_mu|^2`.
    pub fn product_pochhammer(&self, mu: &Partition) -> Rat {
        match self.series {
            Series::Principal => pochhammer_mu_gauss(&self.z, mu).norm_sqr(),
            _ => pochhammer_mu(&self.z.re, mu) * pochhammer_mu(&self.zp.re, mu),
        }
    }

    /// The couple `(-z, -z')`, admissible by the parameter symmetry.
    pub fn negated(&self) -> ZParams {
        ZParams::new(
            GaussRat::new(-self.z.re.clone(), -self.z.im.clone()),
            GaussRat::new(-self.zp.re.clone(), -self.zp.im.clone()),
        )
        .expect("negation preserves admissibility")
    }
}

/// Negative binomial weight `(1+r)^{-c} (c)_m / m! (r/(1+r))^m`.
pub fn neg_binom_pmf(c: f64, r: f64, m: u64) -> f64 {
    assert!(c > 0.0 && r > 0.0);
    let q = r / (1.0 + r);
    let mut log_poch = 0.0;
    for k in 0..m {
        log_poch += (c + k as f64).ln();
    }
    (-c * (1.0 + r).ln() + log_poch - libm::lgamma(m as f64 + 1.0) + m as f64 * q.ln()).exp()
}

/// Exact negative binomial weight; the prefactor `(1+r)^{-c}` is rational
/// only for integer `c`, other parameters are rejected.
pub fn neg_binom_pmf_rat(c: &Rat, r: &Rat, m: u64) -> Result<Rat> {
    if c <= &Rat::zero() || r <= &Rat::zero() {
        return Err(Error::ParameterOutOfRange(
            "negative binomial needs c > 0, r > 0".into(),
        ));
    }
    if !c.is_integer() {
        return Err(Error::ExactUnavailable(format!(
            "(1+r)^(-c) is irrational for non-integer c = {c}; use the real path"
        )));
    }
    let c_int = c
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::ParameterOutOfRange("c too large".into()))?;
    let one_plus = Rat::one() + r;
    let q = r / &one_plus;
    let mut acc = Rat::one();
    for _ in 0..c_int {
        acc /= &one_plus;
    }
    for k in 0..m {
        acc *= c + Rat::from_integer(Int::from(k));
    }
    acc /= Rat::from_integer(Int::from(factorial(m)));
    for _ in 0..m {
        acc *= &q;
    }
    Ok(acc)
}

/// Smallest cutoff with a certified geometric bound on the negative
/// binomial upper tail beyond it, with the bound achieved. The
/// successive-weight ratio `q (c+n)/(n+1)` decreases towards `q = r/(1+r)`,
/// so past a cutoff where it stays below `(1+q)/2` the tail is dominated by
/// a geometric series.
pub fn neg_binom_tail_cutoff(c: f64, r: f64, budget: &TailBudget) -> Result<(u64, f64)> {
    let q = r / (1.0 + r);
    let q_bar = (1.0 + q) / 2.0;
    let mut cutoff = (c.ceil() as u64).max(8);
    loop {
        let step = q * (c + cutoff as f64) / (cutoff as f64 + 1.0);
        if step <= q_bar {
            let tail = neg_binom_pmf(c, r, cutoff + 1) / (1.0 - q_bar);
            if tail <= budget.epsilon {
                return Ok((cutoff, tail));
            }
        }
        cutoff += 8;
        if cutoff > budget.max_size {
            return Err(Error::TailBudgetExceeded {
                required: budget.epsilon,
                achieved: neg_binom_pmf(c, r, cutoff) / (1.0 - q_bar),
                cutoff: cutoff as usize,
            });
        }
    }
}

/// Truncated verification of the negative binomial coherence
/// `M_{r'} Binom_{r/r'} = M_r`, with a certified geometric tail bound.
pub fn neg_binom_coherence(
    c: f64,
    r: &Rat,
    r_prime: &Rat,
    m_max: u64,
    budget: &TailBudget,
) -> Result<TruncatedCoherenceReport<u64>> {
    if r <= &Rat::zero() || r_prime <= r {
        return Err(Error::ParameterOutOfRange(
            "need r' > r > 0 for negative binomial coherence".into(),
        ));
    }
    let rp_f = rat_to_f64(r_prime);
    let r_f = rat_to_f64(r);
    let ratio = r / r_prime;
    let (cutoff, tail_bound) = neg_binom_tail_cutoff(c, rp_f, budget)?;
    let mut lhs = vec![0.0f64; m_max as usize + 1];
    for n in 0..=cutoff {
        let weight = neg_binom_pmf(c, rp_f, n);
        let row = binom_link(n, &ratio)?;
        for m in 0..=m_max.min(n) {
            lhs[m as usize] += weight * rat_to_f64(&row.prob(&m));
        }
    }
    let rows = (0..=m_max)
        .map(|m| {
            let rhs = neg_binom_pmf(c, r_f, m);
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

/// The z-measure on the level `Y_m`:
/// `M_m(mu) = (z)_mu (z')_mu / (c)_m * dim(mu)^2 / m!`, exact.
pub fn z_measure_level(zp: &ZParams, m: u64) -> Vec<(Partition, Rat)> {
    let c = zp.c();
    let mut denom = Rat::one();
    for k in 0..m {
        denom *= &c + Rat::from_integer(Int::from(k));
    }
    denom *= Rat::from_integer(Int::from(factorial(m)));
    enumerate_partitions(m)
        .into_iter()
        .map(|mu| {
            let dim = Rat::from_integer(Int::from(dim_standard(&mu)));
            let v = zp.product_pochhammer(&mu) * &dim * &dim / denom.clone();
            (mu, v)
        })
        .collect()
}

/// The mixed z-measure on the Young bouquet, exact path: requires integer
/// `c = z z'` so that `(1+r)^{-c}` stays rational.
pub fn z_measure_yb_rat(zp: &ZParams, r: &Rat, mu: &Partition) -> Result<Rat> {
    if r <= &Rat::zero() {
        return Err(Error::ParameterOutOfRange("need r > 0".into()));
    }
    let c = zp.c();
    if !c.is_integer() {
        return Err(Error::ExactUnavailable(format!(
            "(1+r)^(-c) is irrational for non-integer c = {c}; use the real path"
        )));
    }
    let c_int = c
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::ParameterOutOfRange("c too large".into()))?;
    let one_plus = Rat::one() + r;
    let q = r / &one_plus;
    let m = mu.size();
    let mut acc = zp.product_pochhammer(mu);
    for _ in 0..c_int {
        acc /= &one_plus;
    }
    for _ in 0..m {
        acc *= &q;
    }
    let dim_over_fact = Rat::new(Int::from(dim_standard(mu)), Int::from(factorial(m)));
    Ok(acc * &dim_over_fact * &dim_over_fact)
}

/// The mixed z-measure on the Young bouquet, real path.
pub fn z_measure_yb_f64(zp: &ZParams, r: f64, mu: &Partition) -> f64 {
    assert!(r > 0.0);
    let c = rat_to_f64(&zp.c());
    let m = mu.size();
    let dim_over_fact =
        nat_to_f64(&dim_standard(mu)) / libm::tgamma(m as f64 + 1.0);
    rat_to_f64(&zp.product_pochhammer(mu))
        * (-c * (1.0 + r).ln() + m as f64 * (r / (1.0 + r)).ln()).exp()
        * dim_over_fact
        * dim_over_fact
}

/// Direct truncated verification of the mixed-measure coherence
/// `MYB_{r'} Bouquet-link = MYB_r` on diagrams of size up to `m_max`. The
/// diagram-size marginal of the mixed measure is the negative binomial, so
/// the truncation tail is certified by [`neg_binom_tail_cutoff`].
pub fn z_measure_yb_coherence(
    zp: &ZParams,
    r: &Rat,
    r_prime: &Rat,
    m_max: u64,
    budget: &TailBudget,
) -> Result<TruncatedCoherenceReport<Partition>> {
    if r <= &Rat::zero() || r_prime <= r {
        return Err(Error::ParameterOutOfRange(
            "need r' > r > 0 for mixed-measure coherence".into(),
        ));
    }
    let c = rat_to_f64(&zp.c());
    let rp_f = rat_to_f64(r_prime);
    let r_f = rat_to_f64(r);
    let ratio = r / r_prime;
    let one_minus = Rat::one() - &ratio;
    let (cutoff, tail_bound) = neg_binom_tail_cutoff(c, rp_f, budget)?;

    let targets: Vec<Partition> = (0..=m_max).flat_map(enumerate_partitions).collect();
    let mut lhs: std::collections::BTreeMap<Partition, f64> =
        targets.iter().cloned().map(|t| (t, 0.0)).collect();
    for n in 0..=cutoff {
        for nu in enumerate_partitions(n) {
            let weight = z_measure_yb_f64(zp, rp_f, &nu);
            if weight == 0.0 {
                continue;
            }
            let dim_nu = Rat::from_integer(Int::from(dim_standard(&nu)));
            for (mu, slot) in lhs.iter_mut() {
                if !mu.contained_in(&nu) {
                    continue;
                }
                let m = mu.size();
                let mut entry =
                    Rat::from_integer(Int::from(crate::scalar::binomial(n, m)));
                for _ in 0..m {
                    entry *= &ratio;
                }
                for _ in 0..(n - m) {
                    entry *= &one_minus;
                }
                entry *= Rat::from_integer(Int::from(
                    dim_standard(mu) * crate::partitions::dim_skew(mu, &nu),
                )) / dim_nu.clone();
                *slot += weight * rat_to_f64(&entry);
            }
        }
    }
    let rows = targets
        .into_iter()
        .map(|mu| {
            let rhs = z_measure_yb_f64(zp, r_f, &mu);
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

/// Exact verification of the level coherence
/// `sum_nu M_n(nu) Young(nu -> m)(mu) = M_m(mu)`; returns per-target exact
/// discrepancies (all zero when coherent).
pub fn z_measure_coherence(zp: &ZParams, n: u64, m: u64) -> Result<Vec<(Partition, Rat)>> {
    if m > n {
        return Err(Error::LevelMismatch(format!("need m <= n, got {m} > {n}")));
    }
    let upper = z_measure_level(zp, n);
    let lower = z_measure_level(zp, m);
    let mut acc: std::collections::BTreeMap<Partition, Rat> = lower
        .iter()
        .map(|(mu, _)| (mu.clone(), Rat::zero()))
        .collect();
    for (nu, mass) in &upper {
        if mass.is_zero() {
            continue;
        }
        let row = crate::links::young_link(nu, m)?;
        for (mu, p) in row.entries() {
            *acc.get_mut(mu).expect("target present at level m") += mass * p;
        }
    }
    Ok(lower
        .into_iter()
        .map(|(mu, direct)| {
            let pushed = acc[&mu].clone();
            (mu, (pushed - direct).abs())
        })
        .collect())
}

// ---------------------------------------------------------------------------
// zw-measures
// ---------------------------------------------------------------------------

/// Membership of a couple in one of the three subsets making up the zw
/// parameter set, with the integer indices relevant to the degenerate rider.
#[derive(Clone, Debug, PartialEq)]
enum ZwCouple {
    Conjugate,
    OpenInterval,
    /// Integer-indexed subset; carries every integer index that witnesses
    /// membership.
    IntegerSeries(Vec<Int>),
}

fn zw_couple_membership(z: &GaussRat, zp: &GaussRat) -> Option<ZwCouple> {
    if !z.is_real() || !zp.is_real() {
        return if *zp == z.conj() && !z.is_real() {
            Some(ZwCouple::Conjugate)
        } else {
            None
        };
    }
    let (a, b) = (&z.re, &zp.re);
    let mut indices = Vec::new();
    if a.is_integer() && b > &(a - Rat::one()) {
        indices.push(a.to_integer());
    }
    if b.is_integer() && a > &(b - Rat::one()) {
        indices.push(b.to_integer());
    }
    if !indices.is_empty() {
        indices.dedup();
        return Some(ZwCouple::IntegerSeries(indices));
    }
    if !a.is_integer() && !b.is_integer() && a.floor() == b.floor() {
        return Some(ZwCouple::OpenInterval);
    }
    None
}

/// An admissible quadruple of zw-measure parameters.
#[derive(Clone, Debug)]
pub struct ZWParams {
    pub z: GaussRat,
    pub zp: GaussRat,
    pub w: GaussRat,
    pub wp: GaussRat,
}

impl ZWParams {
    pub fn new(z: GaussRat, zp: GaussRat, w: GaussRat, wp: GaussRat) -> Result<Self> {
        let zc = zw_couple_membership(&z, &zp).ok_or_else(|| {
            Error::Inadmissible(format!("(z, z') = ({z:?}, {zp:?}) outside the parameter set"))
        })?;
        let wc = zw_couple_membership(&w, &wp).ok_or_else(|| {
            Error::Inadmissible(format!("(w, w') = ({w:?}, {wp:?}) outside the parameter set"))
        })?;
        let total = z.mul(&GaussRat::from_int(1)).re.clone()
            + zp.re.clone()
            + w.re.clone()
            + wp.re.clone();
        if total <= -Rat::one() {
            return Err(Error::Inadmissible(format!(
                "z + z' + w + w' = {total} is not > -1"
            )));
        }
        if let (ZwCouple::IntegerSeries(ms), ZwCouple::IntegerSeries(mts)) = (&zc, &wc) {
            let ok = ms
                .iter()
                .any(|m| mts.iter().any(|mt| m + mt >= Int::one()));
            if !ok {
                return Err(Error::Inadmissible(
                    "both couples in the integer series with index sum < 1".into(),
                ));
            }
        }
        Ok(ZWParams { z, zp, w, wp })
    }

    fn values(&self) -> [Complex64; 4] {
        [
            self.z.to_c64(),
            self.zp.to_c64(),
            self.w.to_c64(),
            self.wp.to_c64(),
        ]
    }

    fn exact_values(&self) -> [GaussRat; 4] {
        [
            self.z.clone(),
            self.zp.clone(),
            self.w.clone(),
            self.wp.clone(),
        ]
    }
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex log-gamma (Lanczos approximation with reflection for the left
/// half-plane).
pub fn lgamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = std::f64::consts::PI;
        let pi_c = Complex64::new(pi, 0.0);
        pi_c.ln() - (pi_c * z).sin().ln() - lgamma_complex(Complex64::new(1.0, 0.0) - z)
    } else {
        let zm = z - 1.0;
        let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
        for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            x += c / (zm + i as f64);
        }
        let t = zm + LANCZOS_G + 0.5;
        0.5 * (2.0 * std::f64::consts::PI).ln() + (zm + 0.5) * t.ln() - t + x.ln()
    }
}

/// True when an exact scalar sits at a gamma pole (a nonpositive integer).
fn at_pole(v: &GaussRat) -> bool {
    v.is_integer() && v.re <= Rat::zero()
}

/// The zw-measure `M_N(mu) = C_N Pi_N(mu) Dim[mu,N]^2`, evaluated through
/// log-gamma sums. Gamma arguments in the normalization constant must stay
/// off the pole set (exactly checkable for the rational-part inputs); pole
/// arguments inside the reciprocal-gamma product make the weight vanish.
pub fn zw_measure(zwp: &ZWParams, mu: &Signature, budget: &TailBudget) -> Result<f64> {
    let _ = budget;
    let n = mu.level();
    let [z, zp, w, wp] = zwp.values();
    let [ze, zpe, we, wpe] = zwp.exact_values();

    let mut log_total = Complex64::new(0.0, 0.0);
    // Normalization constant.
    for i in 1..=n {
        let i_r = Rat::from_integer(Int::from(i as i64));
        let numerators = [
            (z + w + i as f64, ze.add(&we).add_rat(&i_r)),
            (z + wp + i as f64, ze.add(&wpe).add_rat(&i_r)),
            (zp + w + i as f64, zpe.add(&we).add_rat(&i_r)),
            (zp + wp + i as f64, zpe.add(&wpe).add_rat(&i_r)),
        ];
        for (val, exact) in numerators {
            if at_pole(&exact) {
                return Err(Error::PoleAdjacent(format!(
                    "normalization gamma argument {exact:?} at level {n}"
                )));
            }
            log_total += lgamma_complex(val);
        }
        log_total += lgamma_complex(Complex64::new(i as f64, 0.0));
        log_total -= lgamma_complex(z + zp + w + wp + i as f64);
    }
    // Reciprocal-gamma product over the signature.
    for (idx, &c) in mu.coords().iter().enumerate() {
        let i = idx + 1;
        let shift_up = Rat::from_integer(Int::from(n as i64 + 1 + c - i as i64));
        let shift_dn = Rat::from_integer(Int::from(i as i64 - c));
        let args = [
            (z - c as f64 + i as f64, ze.add_rat(&shift_dn)),
            (zp - c as f64 + i as f64, zpe.add_rat(&shift_dn)),
            (
                w + (n as i64 + 1 + c - i as i64) as f64,
                we.add_rat(&shift_up),
            ),
            (
                wp + (n as i64 + 1 + c - i as i64) as f64,
                wpe.add_rat(&shift_up),
            ),
        ];
        for (val, exact) in args {
            if at_pole(&exact) {
                // 1/Gamma vanishes: the signature carries no mass.
                return Ok(0.0);
            }
            log_total -= lgamma_complex(val);
        }
    }
    let dim = nat_to_f64(&weyl_dim_signature(mu));
    Ok(log_total.exp().re * dim * dim)
}

/// Specialized zw-measure for `w = 0`, real `w' > 0` and a nonnegative
/// signature read as a diagram: the Pochhammer parts are exact, only the
/// zero-signature mass goes through log-gamma. This is the evaluation route
/// of the degeneration towards the bouquet z-measures.
pub fn zw_measure_w0(
    zp_couple: &ZParams,
    w_prime: f64,
    n: usize,
    mu: &Partition,
) -> Result<f64> {
    if mu.len() > n {
        return Err(Error::LevelMismatch(format!(
            "{mu} does not fit at level {n}"
        )));
    }
    Ok(zw_zero_signature_mass(zp_couple, w_prime, n)
        * zw_relative_weight_w0(zp_couple, w_prime, n, mu)?)
}

/// `M_N(0^N)` for `w = 0`:
/// `prod_i Gamma(z+w'+i) Gamma(z'+w'+i) / (Gamma(z+z'+w'+i) Gamma(w'+i))`.
pub fn zw_zero_signature_mass(zp_couple: &ZParams, w_prime: f64, n: usize) -> f64 {
    let z = zp_couple.z().to_c64();
    let zp = zp_couple.z_prime().to_c64();
    let mut log_total = Complex64::new(0.0, 0.0);
    for i in 1..=n {
        let i_f = i as f64;
        log_total += lgamma_complex(z + w_prime + i_f);
        log_total += lgamma_complex(zp + w_prime + i_f);
        log_total -= lgamma_complex(z + zp + w_prime + i_f);
        log_total -= lgamma_complex(Complex64::new(w_prime + i_f, 0.0));
    }
    log_total.exp().re
}

/// The ratio `M_N(mu)/M_N(0^N)` for `w = 0`:
/// `(-z)_mu (-z')_mu Dim[mu,N]^2 / prod_i (N+1-i)_{mu_i} (w'+N+1-i)_{mu_i}`.
fn zw_relative_weight_w0(
    zp_couple: &ZParams,
    w_prime: f64,
    n: usize,
    mu: &Partition,
) -> Result<f64> {
    let poch = rat_to_f64(&zp_couple.negated().product_pochhammer(mu));
    let mut denom = 1.0f64;
    for i in 0..mu.len() {
        for k in 0..mu.part(i) as u64 {
            denom *= (n - i) as f64 + k as f64;
            denom *= w_prime + (n - i) as f64 + k as f64;
        }
    }
    let dim = nat_to_f64(&weyl_dim(mu, n)?);
    Ok(poch * dim * dim / denom)
}

/// Truncated normalization sweep of a zw-measure at level `N`: sums the
/// weights of all signatures with coordinates in `[-K, K]` and reports the
/// mass of the outermost shell as an empirical (non-rigorous) tail proxy.
pub struct ZwNormalizationReport {
    pub total: f64,
    /// Mass carried by signatures with `max|coordinate| = K`; an empirical
    /// proxy only, no analytic tail estimate backs it.
    pub last_shell_mass: f64,
    pub bound: i64,
}

pub fn zw_normalization(
    zwp: &ZWParams,
    n: usize,
    bound: i64,
    budget: &TailBudget,
) -> Result<ZwNormalizationReport> {
    let mut total = 0.0;
    let mut last_shell = 0.0;
    let mut coords = vec![0i64; n];
    // Depth-first enumeration of signatures in the box.
    #[allow(clippy::too_many_arguments)]
    fn rec(
        zwp: &ZWParams,
        coords: &mut Vec<i64>,
        idx: usize,
        hi: i64,
        bound: i64,
        budget: &TailBudget,
        total: &mut f64,
        last_shell: &mut f64,
    ) -> Result<()> {
        if idx == coords.len() {
            let sig = Signature::new(coords.clone()).expect("coords decreasing");
            let mass = zw_measure(zwp, &sig, budget)?;
            *total += mass;
            if coords.iter().any(|&c| c.abs() == bound) {
                *last_shell += mass;
            }
            return Ok(());
        }
        let mut v = hi;
        while v >= -bound {
            coords[idx] = v;
            rec(zwp, coords, idx + 1, v, bound, budget, total, last_shell)?;
            v -= 1;
        }
        Ok(())
    }
    rec(
        zwp,
        &mut coords,
        0,
        bound,
        bound,
        budget,
        &mut total,
        &mut last_shell,
    )?;
    Ok(ZwNormalizationReport {
        total,
        last_shell_mass: last_shell,
        bound,
    })
}

/// Truncated verification of the zw coherence `M_{N+1} Link = M_N` on a
/// window of signatures. For `w = 0`-type parameters the measure lives on
/// nonnegative signatures, so the window is one-sided; otherwise the upper
/// level is truncated to the full box `[-K, K]`.
pub fn zw_coherence(
    zwp: &ZWParams,
    n: usize,
    targets: &[Signature],
    bound: i64,
    budget: &TailBudget,
) -> Result<TruncatedCoherenceReport<Signature>> {
    for mu in targets {
        if mu.level() != n {
            return Err(Error::LevelMismatch(format!(
                "target {mu} not at level {n}"
            )));
        }
    }
    let nonneg_only = zwp.w.is_zero();
    let lo_cap = if nonneg_only { 0 } else { -bound };

    // Upper-window mass for the empirical tail proxy.
    let mut window_mass = 0.0;
    {
        let mut coords = vec![0i64; n + 1];
        fn rec_mass(
            zwp: &ZWParams,
            coords: &mut Vec<i64>,
            idx: usize,
            hi: i64,
            lo: i64,
            budget: &TailBudget,
            total: &mut f64,
        ) -> Result<()> {
            if idx == coords.len() {
                let sig = Signature::new(coords.clone()).expect("coords decreasing");
                *total += zw_measure(zwp, &sig, budget)?;
                return Ok(());
            }
            let mut v = hi;
            while v >= lo {
                coords[idx] = v;
                rec_mass(zwp, coords, idx + 1, v, lo, budget, total)?;
                v -= 1;
            }
            Ok(())
        }
        rec_mass(
            zwp,
            &mut coords,
            0,
            bound,
            lo_cap,
            budget,
            &mut window_mass,
        )?;
    }

    let mut rows = Vec::with_capacity(targets.len());
    for mu in targets {
        let dim_mu = nat_to_f64(&weyl_dim_signature(mu));
        let mut lhs = 0.0;
        for_each_interlacing_above(mu.coords(), lo_cap, bound, &mut |nu_coords| {
            let nu = Signature::new(nu_coords.to_vec()).expect("interlacing coords decreasing");
            let mass = zw_measure(zwp, &nu, budget)?;
            if mass != 0.0 {
                lhs += mass * dim_mu / nat_to_f64(&weyl_dim_signature(&nu));
            }
            Ok(())
        })?;
        let rhs = zw_measure(zwp, mu, budget)?;
        rows.push(TruncRow {
            target: mu.clone(),
            lhs,
            rhs,
            discrepancy: (lhs - rhs).abs(),
        });
    }
    Ok(TruncatedCoherenceReport {
        rows,
        tail_bound: (1.0 - window_mass).max(0.0),
        cutoff: bound as u64,
    })
}

/// Enumerate signatures `nu` of length `len(mu) + 1` interlacing above `mu`
/// (`nu_1 >= mu_1 >= nu_2 >= ...`), with `nu_1 <= hi` and `nu_{N+1} >= lo`.
fn for_each_interlacing_above(
    mu: &[i64],
    lo: i64,
    hi: i64,
    visit: &mut impl FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    let n = mu.len();
    let mut nu = vec![0i64; n + 1];
    fn rec(
        mu: &[i64],
        nu: &mut Vec<i64>,
        idx: usize,
        lo: i64,
        hi: i64,
        visit: &mut impl FnMut(&[i64]) -> Result<()>,
    ) -> Result<()> {
        let n = mu.len();
        if idx == n + 1 {
            return visit(nu);
        }
        let (from, to) = if idx == 0 {
            (mu[0], hi)
        } else if idx < n {
            (mu[idx], mu[idx - 1])
        } else {
            (lo, mu[n - 1])
        };
        let mut v = to;
        while v >= from {
            nu[idx] = v;
            rec(mu, nu, idx + 1, lo, hi, visit)?;
            v -= 1;
        }
        Ok(())
    }
    rec(mu, &mut nu, 0, lo, hi, visit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn g(re: i64, den: i64) -> GaussRat {
        GaussRat::from_rat(rat(re, den))
    }

    #[test]
    fn pochhammer_examples() {
        // One-row diagram gives the ordinary rising factorial.
        let z = rat(3, 2);
        let mut expected = Rat::one();
        for k in 0..4 {
            expected *= &z + rat_int(k);
        }
        assert_eq!(pochhammer_mu(&z, &p(&[4])), expected);
        // (1)_{(1,1)} contains the content -1 factor 1 - 1 = 0.
        assert_eq!(pochhammer_mu(&rat_int(1), &p(&[1, 1])), Rat::zero());
        assert_eq!(pochhammer_mu(&rat_int(5), &Partition::empty()), Rat::one());
    }

    #[test]
    fn pochhammer_transpose_law() {
        for n in 0..=6u64 {
            for mu in enumerate_partitions(n) {
                let z = rat(7, 3);
                let lhs = pochhammer_mu(&-z.clone(), &mu);
                let sign = if n % 2 == 0 { Rat::one() } else { -Rat::one() };
                let rhs = sign * pochhammer_mu(&z, &mu.conjugate());
                assert_eq!(lhs, rhs, "transpose law at {mu}");
            }
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_admissible(&g(2, 1), &g(3, 1)), Series::Degenerate);
        assert_eq!(
            classify_admissible(&g(1, 2), &g(1, 2)),
            Series::Complementary
        );
        assert_eq!(
            classify_admissible(
                &GaussRat::new(rat_int(1), rat_int(1)),
                &GaussRat::new(rat_int(1), rat_int(-1))
            ),
            Series::Principal
        );
        assert_eq!(
            classify_admissible(&g(0, 1), &g(3, 1)),
            Series::Inadmissible
        );
        // Sign-image of the degenerate series.
        assert_eq!(
            classify_admissible(&g(-2, 1), &g(-3, 1)),
            Series::Degenerate
        );
        assert_eq!(
            classify_admissible(&g(-1, 2), &g(-1, 2)),
            Series::Complementary
        );
        // Different floors, no integer: inadmissible.
        assert_eq!(
            classify_admissible(&g(1, 2), &g(3, 2)),
            Series::Inadmissible
        );
        // Non-conjugate complex couple.
        assert_eq!(
            classify_admissible(
                &GaussRat::new(rat_int(1), rat_int(1)),
                &GaussRat::new(rat_int(2), rat_int(-1))
            ),
            Series::Inadmissible
        );
    }

    #[test]
    fn admissibility_scan() {
        // Admissible rational couples: nonnegative products everywhere.
        let admissible = [
            (g(2, 1), g(3, 1)),
            (g(1, 2), g(1, 2)),
            (g(3, 1), g(1, 1)),
            (g(-1, 2), g(-2, 3)),
        ];
        for (z, zp) in admissible {
            let params = ZParams::new(z, zp).unwrap();
            for n in 0..=8u64 {
                for mu in enumerate_partitions(n) {
                    assert!(
                        params.product_pochhammer(&mu) >= Rat::zero(),
                        "negative product at {mu} for {:?}",
                        params
                    );
                }
            }
        }
        // Inadmissible real nonzero couples: a witness of size <= 8 exists.
        let inadmissible = [
            (g(1, 2), g(3, 2)),
            (g(-1, 2), g(1, 2)),
            (g(2, 1), g(-3, 1)),
            (g(5, 2), g(7, 2)),
        ];
        for (z, zp) in inadmissible {
            assert_eq!(classify_admissible(&z, &zp), Series::Inadmissible);
            let mut witness = None;
            'outer: for n in 0..=8u64 {
                for mu in enumerate_partitions(n) {
                    if pochhammer_mu(&z.re, &mu) * pochhammer_mu(&zp.re, &mu) < Rat::zero() {
                        witness = Some(mu);
                        break 'outer;
                    }
                }
            }
            assert!(witness.is_some(), "no witness for ({:?}, {:?})", z, zp);
        }
    }

    #[test]
    fn neg_binom_examples() {
        // c = 1, r = 1: weights 2^{-(m+1)}.
        for m in 0..8u64 {
            let exact = neg_binom_pmf_rat(&rat_int(1), &rat_int(1), m).unwrap();
            assert_eq!(exact, Rat::new(Int::one(), Int::from(1u64 << (m + 1))));
            let approx = neg_binom_pmf(1.0, 1.0, m);
            assert!((approx - rat_to_f64(&exact)).abs() < 1e-15);
        }
        // m = 0 reduces to the prefactor.
        let v = neg_binom_pmf_rat(&rat_int(2), &rat(1, 2), 0).unwrap();
        assert_eq!(v, rat(4, 9));
        assert!(neg_binom_pmf_rat(&rat(1, 2), &rat_int(1), 0).is_err());
    }

    #[test]
    fn neg_binom_coherence_check() {
        let budget = TailBudget {
            epsilon: 1e-12,
            max_size: 400,
            max_degree: 512,
        };
        for c in [1.0, 2.5] {
            let report =
                neg_binom_coherence(c, &rat_int(1), &rat_int(3), 6, &budget).unwrap();
            assert!(
                report.max_discrepancy() <= 1e-10,
                "c = {c}: {:?}",
                report.rows
            );
        }
    }

    #[test]
    fn z_measure_level_examples() {
        let zp = ZParams::new(g(2, 1), g(3, 1)).unwrap();
        let level2 = z_measure_level(&zp, 2);
        let as_map: std::collections::BTreeMap<_, _> = level2.into_iter().collect();
        assert_eq!(as_map[&p(&[2])], rat(6, 7));
        assert_eq!(as_map[&p(&[1, 1])], rat(1, 7));

        let zp = ZParams::new(g(1, 1), g(1, 1)).unwrap();
        let level2 = z_measure_level(&zp, 2);
        let as_map: std::collections::BTreeMap<_, _> = level2.into_iter().collect();
        assert_eq!(as_map[&p(&[2])], Rat::one());
        assert_eq!(as_map[&p(&[1, 1])], Rat::zero());
    }

    #[test]
    fn z_measure_level_normalization_all_series() {
        let reps = [
            ZParams::new(g(2, 1), g(3, 1)).unwrap(),
            ZParams::new(g(1, 2), g(1, 2)).unwrap(),
            ZParams::new(
                GaussRat::new(rat_int(1), rat_int(1)),
                GaussRat::new(rat_int(1), rat_int(-1)),
            )
            .unwrap(),
        ];
        for zp in &reps {
            for m in 0..=6u64 {
                let total: Rat = z_measure_level(zp, m).into_iter().map(|(_, v)| v).sum();
                assert_eq!(total, Rat::one(), "level {m} for {:?}", zp.series());
            }
        }
    }

    #[test]
    fn z_measure_coherence_exact() {
        let reps = [
            ZParams::new(g(2, 1), g(3, 1)).unwrap(),
            ZParams::new(g(1, 2), g(1, 2)).unwrap(),
            ZParams::new(
                GaussRat::new(rat_int(1), rat_int(1)),
                GaussRat::new(rat_int(1), rat_int(-1)),
            )
            .unwrap(),
        ];
        for zp in &reps {
            for n in 1..=6u64 {
                for m in 0..n {
                    for (mu, disc) in z_measure_coherence(zp, n, m).unwrap() {
                        assert!(disc.is_zero(), "discrepancy at {mu}, levels {n}->{m}");
                    }
                }
            }
        }
    }

    #[test]
    fn z_measure_yb_coherence_truncated() {
        // The combined (binomial-mixed) coherence, checked directly. The
        // negative binomial tail is only geometric, so the certified cutoff
        // grows fast with the budget; c = 1/4 with r' = 1/2 keeps it small.
        let budget = TailBudget {
            epsilon: 1e-6,
            max_size: 400,
            max_degree: 512,
        };
        let zp = ZParams::new(g(1, 2), g(1, 2)).unwrap();
        let report =
            z_measure_yb_coherence(&zp, &rat(1, 4), &rat(1, 2), 2, &budget).unwrap();
        assert!(
            report.max_discrepancy() <= 1e-10 + report.tail_bound,
            "max discrepancy {} vs tail {}",
            report.max_discrepancy(),
            report.tail_bound
        );
        assert!(report.tail_bound <= 1e-6);
    }

    #[test]
    fn z_measure_yb_empty_diagram() {
        // MYB(empty) = (1+r)^{-zz'}.
        let zp = ZParams::new(g(2, 1), g(3, 1)).unwrap();
        let r = rat(1, 2);
        let exact = z_measure_yb_rat(&zp, &r, &Partition::empty()).unwrap();
        assert_eq!(exact, Rat::new(Int::from(64), Int::from(729))); // (3/2)^{-6}
        let approx = z_measure_yb_f64(&zp, 0.5, &Partition::empty());
        assert!((approx - rat_to_f64(&exact)).abs() < 1e-12);
        // Principal series has integer c = |z|^2 here, so exact path works.
        let zp = ZParams::new(
            GaussRat::new(rat_int(1), rat_int(1)),
            GaussRat::new(rat_int(1), rat_int(-1)),
        )
        .unwrap();
        assert_eq!(zp.c(), rat_int(2));
        let exact = z_measure_yb_rat(&zp, &rat_int(1), &Partition::empty()).unwrap();
        assert_eq!(exact, rat(1, 4));
        // Non-integer c rejects the exact path.
        let zp = ZParams::new(g(1, 2), g(1, 2)).unwrap();
        assert!(z_measure_yb_rat(&zp, &rat_int(1), &Partition::empty()).is_err());
        let v = z_measure_yb_f64(&zp, 1.0, &Partition::empty());
        assert!((v - 2f64.powf(-0.25)).abs() < 1e-12);
    }

    #[test]
    fn lgamma_complex_known_values() {
        let pi = std::f64::consts::PI;
        // Gamma(1/2) = sqrt(pi).
        let v = lgamma_complex(Complex64::new(0.5, 0.0)).exp();
        assert!((v.re - pi.sqrt()).abs() < 1e-12 && v.im.abs() < 1e-12);
        // Gamma(-1/2) = -2 sqrt(pi).
        let v = lgamma_complex(Complex64::new(-0.5, 0.0)).exp();
        assert!((v.re + 2.0 * pi.sqrt()).abs() < 1e-12);
        // |Gamma(1+i)|^2 = pi / sinh(pi).
        let lg = lgamma_complex(Complex64::new(1.0, 1.0));
        let norm_sq = (2.0 * lg.re).exp();
        assert!((norm_sq - pi / pi.sinh()).abs() < 1e-12);
        // Gamma(5) = 24.
        let v = lgamma_complex(Complex64::new(5.0, 0.0)).exp();
        assert!((v.re - 24.0).abs() < 1e-10);
    }

    #[test]
    fn zw_admissibility() {
        let half = g(1, 2);
        assert!(ZWParams::new(half.clone(), half.clone(), half.clone(), half.clone()).is_ok());
        // w = 0, w' > 0 pairs with any admissible z-couple of sum > -1 - w'.
        assert!(ZWParams::new(g(-1, 2), g(-1, 2), g(0, 1), g(20, 1)).is_ok());
        // Sum too small.
        assert!(ZWParams::new(g(-1, 2), g(-1, 2), g(-1, 2), g(-1, 2)).is_err());
        // Both couples integer-series with index sum 0.
        assert!(ZWParams::new(g(0, 1), g(1, 2), g(0, 1), g(1, 2)).is_err());
        assert!(ZWParams::new(g(1, 1), g(3, 4), g(0, 1), g(1, 2)).is_ok());
    }

    #[test]
    fn zw_n1_half_parameters() {
        // N = 1, z = z' = w = w' = 1/2: M(k) = C / (Gamma(3/2-k)^2 Gamma(3/2+k)^2)
        // with C = Gamma(2)^4 / Gamma(3) = 1/2, and the bilateral sum is 1.
        let half = g(1, 2);
        let zwp = ZWParams::new(half.clone(), half.clone(), half.clone(), half.clone()).unwrap();
        let budget = TailBudget::default();
        let v0 = zw_measure(&zwp, &Signature::new(vec![0]).unwrap(), &budget).unwrap();
        let g32 = libm::tgamma(1.5);
        let expected = 0.5 / g32.powi(4);
        assert!((v0 - expected).abs() < 1e-12, "{v0} vs {expected}");
        // The omitted tail is sum_{|k|>K} 1/(pi^2 (k^2 - 1/4)^2), about
        // 1.017e-6 at K = 40 and 8.4e-9 at K = 200.
        let report = zw_normalization(&zwp, 1, 40, &budget).unwrap();
        let gamma_sum = report.total / 0.5;
        assert!((gamma_sum - 2.0).abs() < 1.1e-6, "sum at 40: {gamma_sum}");
        let report = zw_normalization(&zwp, 1, 200, &budget).unwrap();
        let gamma_sum = report.total / 0.5;
        assert!((gamma_sum - 2.0).abs() < 2e-8, "sum at 200: {gamma_sum}");
    }

    #[test]
    fn zw_symmetry_in_z_and_w() {
        let budget = TailBudget::default();
        let a = ZWParams::new(g(1, 2), g(1, 3), g(1, 4), g(1, 5)).unwrap();
        let b = ZWParams::new(g(1, 3), g(1, 2), g(1, 4), g(1, 5)).unwrap();
        let c = ZWParams::new(g(1, 2), g(1, 3), g(1, 5), g(1, 4)).unwrap();
        for coords in [vec![0, 0], vec![1, 0], vec![2, -1], vec![-1, -1]] {
            let sig = Signature::new(coords).unwrap();
            let va = zw_measure(&a, &sig, &budget).unwrap();
            let vb = zw_measure(&b, &sig, &budget).unwrap();
            let vc = zw_measure(&c, &sig, &budget).unwrap();
            assert!((va - vb).abs() <= 1e-14 * va.abs().max(1e-300));
            assert!((va - vc).abs() <= 1e-14 * va.abs().max(1e-300));
        }
    }

    #[test]
    fn zw_w0_concentrates_on_nonnegative() {
        let zwp = ZWParams::new(g(-1, 2), g(-1, 2), g(0, 1), g(30, 1)).unwrap();
        let budget = TailBudget::default();
        for coords in [vec![-1, -1], vec![0, -1], vec![2, -3]] {
            let sig = Signature::new(coords).unwrap();
            assert_eq!(zw_measure(&zwp, &sig, &budget).unwrap(), 0.0, "{sig}");
        }
        let pos = Signature::new(vec![1, 0]).unwrap();
        assert!(zw_measure(&zwp, &pos, &budget).unwrap() > 0.0);
    }

    #[test]
    fn zw_w0_routes_agree() {
        // General log-gamma route vs the exact-Pochhammer w = 0 route.
        let zp_couple = ZParams::new(g(-1, 2), g(-1, 2)).unwrap();
        let w_prime = 12.0;
        let n = 3usize;
        let zwp = ZWParams::new(g(-1, 2), g(-1, 2), g(0, 1), g(12, 1)).unwrap();
        let budget = TailBudget::default();
        for size in 0..=4u64 {
            for mu in enumerate_partitions(size) {
                if mu.len() > n {
                    continue;
                }
                let general = zw_measure(
                    &zwp,
                    &Signature::from_partition(&mu, n).unwrap(),
                    &budget,
                )
                .unwrap();
                let special = zw_measure_w0(&zp_couple, w_prime, n, &mu).unwrap();
                assert!(
                    (general - special).abs() <= 1e-10 * general.abs().max(1e-12),
                    "routes at {mu}: {general} vs {special}"
                );
            }
        }
    }

    #[test]
    fn zw_positivity_on_window() {
        let budget = TailBudget::default();
        let principal = ZWParams::new(
            GaussRat::new(rat_int(0), rat_int(1)),
            GaussRat::new(rat_int(0), rat_int(-1)),
            g(1, 2),
            g(1, 2),
        )
        .unwrap();
        let compl = ZWParams::new(g(1, 2), g(1, 3), g(1, 4), g(1, 2)).unwrap();
        for zwp in [principal, compl] {
            let mut coords = vec![0i64; 2];
            for a in -3..=3i64 {
                for b in -3..=a {
                    coords[0] = a;
                    coords[1] = b;
                    let sig = Signature::new(coords.clone()).unwrap();
                    assert!(
                        zw_measure(&zwp, &sig, &budget).unwrap() >= -1e-15,
                        "negative mass at {sig}"
                    );
                }
            }
        }
    }

    #[test]
    fn zw_coherence_w0_window() {
        let zwp = ZWParams::new(g(-1, 2), g(-1, 2), g(0, 1), g(10, 1)).unwrap();
        let budget = TailBudget::default();
        let targets: Vec<Signature> = [vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 0]]
            .into_iter()
            .map(|c| Signature::new(c).unwrap())
            .collect();
        let report = zw_coherence(&zwp, 2, &targets, 30, &budget).unwrap();
        assert!(
            report.max_discrepancy() <= report.tail_bound + 1e-9,
            "max {} tail {}",
            report.max_discrepancy(),
            report.tail_bound
        );
        assert!(report.tail_bound < 1e-3, "tail {}", report.tail_bound);
    }

    #[test]
    fn zw_singular_quadruples_rejected_at_the_gate() {
        // Gamma poles in the normalization require an integer pairwise sum
        // <= 0; the integer-series rider m + m~ >= 1 excludes exactly those,
        // so singular quadruples never pass admissibility.
        assert!(ZWParams::new(g(-3, 1), g(-7, 2), g(2, 1), g(9, 2)).is_err());
        assert!(ZWParams::new(g(-2, 1), g(-3, 2), g(5, 2), g(2, 1)).is_err());
        // The nearby quadruple with index sum 1 is fine, and pole-free.
        let ok = ZWParams::new(g(-2, 1), g(-3, 2), g(7, 2), g(3, 1)).unwrap();
        let budget = TailBudget::default();
        let sig = Signature::new(vec![1, 0]).unwrap();
        assert!(zw_measure(&ok, &sig, &budget).unwrap().is_finite());
    }
}
