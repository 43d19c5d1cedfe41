//! Symmetric function evaluations at Thoma cone points and principal
//! specializations, over exact rational or approximate real scalars.
//!
//! A point of the Thoma cone is a triple `(alpha, beta, delta)` with weakly
//! decreasing nonnegative `alpha`, `beta` and `sum(alpha) + sum(beta) <=
//! delta`; only finitely many nonzero entries are stored. The generating
//! function of the complete homogeneous functions at such a point is
//!
//! ```text
//! 1 + h_1 t + h_2 t^2 + ... = e^{gamma t} prod_i (1 + beta_i t)/(1 - alpha_i t),
//! gamma = delta - sum(alpha_i + beta_i),
//! ```
//!
//! and Schur values come out of the Jacobi-Trudi determinant.

use crate::partitions::Partition;
use crate::scalar::{binomial, Int, Nat, Rat, Scalar};
use crate::{Error, Result};
use num_traits::{One, Zero};

/// A finitely supported point of the Thoma cone over the scalar `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThomaConePoint<S: Scalar> {
    alpha: Vec<S>,
    beta: Vec<S>,
    delta: S,
}

impl<S: Scalar> ThomaConePoint<S> {
    /// Validates monotonicity, nonnegativity and `gamma >= 0`. Trailing
    /// zeros in `alpha`/`beta` are dropped.
    pub fn new(mut alpha: Vec<S>, mut beta: Vec<S>, delta: S) -> Result<Self> {
        for (name, seq) in [("alpha", &alpha), ("beta", &beta)] {
            if seq.iter().any(|x| *x < S::zero()) {
                return Err(Error::InvalidPoint(format!("negative {name} entry")));
            }
            if seq.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidPoint(format!(
                    "{name} not weakly decreasing"
                )));
            }
        }
        while alpha.last().is_some_and(|x| x.is_zero()) {
            alpha.pop();
        }
        while beta.last().is_some_and(|x| x.is_zero()) {
            beta.pop();
        }
        let mut sum = S::zero();
        for x in alpha.iter().chain(beta.iter()) {
            sum = sum + x.clone();
        }
        let gamma = delta.clone() - sum;
        // For the real instantiation a scaled point may miss zero by
        // rounding; tolerate that at machine scale.
        let tol = S::from_rat(&Rat::new(Int::one(), Int::from(10u64).pow(9)))
            * (S::one() + delta.clone());
        if gamma < S::zero() - tol {
            return Err(Error::InvalidPoint(
                "sum(alpha) + sum(beta) exceeds delta".into(),
            ));
        }
        Ok(ThomaConePoint { alpha, beta, delta })
    }

    /// The origin `(0, 0, 0)`.
    pub fn origin() -> Self {
        ThomaConePoint {
            alpha: Vec::new(),
            beta: Vec::new(),
            delta: S::zero(),
        }
    }

    pub fn alpha(&self) -> &[S] {
        &self.alpha
    }

    pub fn beta(&self) -> &[S] {
        &self.beta
    }

    /// `|omega| = delta`.
    pub fn size(&self) -> &S {
        &self.delta
    }

    /// `gamma = delta - sum(alpha) - sum(beta)`, clamped at zero against
    /// round-off in the real instantiation.
    pub fn gamma(&self) -> S {
        let mut sum = S::zero();
        for x in self.alpha.iter().chain(self.beta.iter()) {
            sum = sum + x.clone();
        }
        let g = self.delta.clone() - sum;
        if g < S::zero() {
            S::zero()
        } else {
            g
        }
    }

    pub fn is_origin(&self) -> bool {
        self.alpha.is_empty() && self.beta.is_empty() && self.delta.is_zero()
    }

    /// Componentwise scaling `r * omega = (r alpha, r beta, r delta)`.
    pub fn scale(&self, r: &S) -> Self {
        ThomaConePoint {
            alpha: self.alpha.iter().map(|x| x.clone() * r.clone()).collect(),
            beta: self.beta.iter().map(|x| x.clone() * r.clone()).collect(),
            delta: self.delta.clone() * r.clone(),
        }
    }

    /// The normalized point `omega / |omega|` on the Thoma simplex; fails at
    /// the origin.
    pub fn normalized(&self) -> Result<ThomaSimplexPoint<S>> {
        if self.delta.is_zero() {
            return Err(Error::InvalidPoint(
                "cannot normalize the origin of the cone".into(),
            ));
        }
        let inv = S::one() / self.delta.clone();
        ThomaSimplexPoint::new(self.scale(&inv))
    }

    pub fn to_f64(&self) -> ThomaConePoint<f64> {
        ThomaConePoint {
            alpha: self.alpha.iter().map(|x| x.to_f64()).collect(),
            beta: self.beta.iter().map(|x| x.to_f64()).collect(),
            delta: self.delta.to_f64(),
        }
    }
}

/// A Thoma cone point with `delta = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThomaSimplexPoint<S: Scalar>(ThomaConePoint<S>);

impl<S: Scalar> ThomaSimplexPoint<S> {
    pub fn new(point: ThomaConePoint<S>) -> Result<Self> {
        if point.delta != S::one() {
            return Err(Error::InvalidPoint("simplex point needs delta = 1".into()));
        }
        Ok(ThomaSimplexPoint(point))
    }

    pub fn from_coords(alpha: Vec<S>, beta: Vec<S>) -> Result<Self> {
        ThomaSimplexPoint::new(ThomaConePoint::new(alpha, beta, S::one())?)
    }

    pub fn as_cone_point(&self) -> &ThomaConePoint<S> {
        &self.0
    }
}

/// Power sum `p_k(omega)`: `p_1 = |omega|` and
/// `p_k = sum alpha_i^k + (-1)^(k-1) sum beta_i^k` for `k >= 2`.
pub fn power_sum<S: Scalar>(k: u32, omega: &ThomaConePoint<S>) -> S {
    assert!(k >= 1, "power sums are indexed from 1");
    if k == 1 {
        return omega.size().clone();
    }
    let mut acc = S::zero();
    for a in omega.alpha() {
        acc = acc + pow(a, k);
    }
    let mut b_acc = S::zero();
    for b in omega.beta() {
        b_acc = b_acc + pow(b, k);
    }
    if k % 2 == 1 {
        acc + b_acc
    } else {
        acc - b_acc
    }
}

fn pow<S: Scalar>(x: &S, k: u32) -> S {
    let mut acc = S::one();
    for _ in 0..k {
        acc = acc * x.clone();
    }
    acc
}

/// The prefix `h_0, ..., h_n` at `omega`, by the Newton recurrence
/// `n h_n = sum_{k=1}^{n} p_k h_{n-k}`.
pub fn complete_h_prefix<S: Scalar>(n: usize, omega: &ThomaConePoint<S>) -> Vec<S> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(S::one());
    if n == 0 {
        return h;
    }
    let p: Vec<S> = (1..=n as u32).map(|k| power_sum(k, omega)).collect();
    for m in 1..=n {
        let mut acc = S::zero();
        for k in 1..=m {
            acc = acc + p[k - 1].clone() * h[m - k].clone();
        }
        h.push(acc / S::from_int(m as i64));
    }
    h
}

/// `h_n(omega)`, the coefficient of `t^n` in the generating function above.
pub fn complete_h<S: Scalar>(n: usize, omega: &ThomaConePoint<S>) -> S {
    complete_h_prefix(n, omega).pop().unwrap()
}

/// Schur value `S_lambda(omega)` by the Jacobi-Trudi determinant
/// `det[h_{lambda_i - i + j}]`.
pub fn schur<S: Scalar>(lambda: &Partition, omega: &ThomaConePoint<S>) -> S {
    let l = lambda.len();
    if l == 0 {
        return S::one();
    }
    let max_idx = lambda.part(0) as usize + l - 1;
    let h = complete_h_prefix(max_idx, omega);
    jacobi_trudi(&h, l, |i, j| lambda.part(i) as i64 - i as i64 + j as i64)
}

/// Skew Schur value `S_{nu/mu}(omega)`; zero when `mu` is not contained in
/// `nu`.
pub fn skew_schur<S: Scalar>(mu: &Partition, nu: &Partition, omega: &ThomaConePoint<S>) -> S {
    if !mu.contained_in(nu) {
        return S::zero();
    }
    let l = nu.len();
    if l == 0 {
        return S::one();
    }
    let max_idx = nu.part(0) as usize + l - 1;
    let h = complete_h_prefix(max_idx, omega);
    jacobi_trudi(&h, l, |i, j| {
        nu.part(i) as i64 - mu.part(j) as i64 - i as i64 + j as i64
    })
}

fn jacobi_trudi<S: Scalar>(h: &[S], l: usize, index: impl Fn(usize, usize) -> i64) -> S {
    let mut mat = Vec::with_capacity(l);
    for i in 0..l {
        let mut row = Vec::with_capacity(l);
        for j in 0..l {
            let e = index(i, j);
            row.push(if e < 0 { S::zero() } else { h[e as usize].clone() });
        }
        mat.push(row);
    }
    S::det(mat)
}

/// `h_n(1^k) = C(n + k - 1, n)` for `n >= 0`, zero for negative `n`.
pub fn h_principal(n: i64, k: u32) -> Nat {
    if n < 0 {
        return Nat::zero();
    }
    if n == 0 {
        return Nat::one();
    }
    binomial(n as u64 + k as u64 - 1, n as u64)
}

/// `S_lambda(1^n)`, the number of semistandard tableaux of shape `lambda`
/// with entries at most `n`, by the Jacobi-Trudi determinant of binomials.
pub fn schur_principal(lambda: &Partition, n: u32) -> Nat {
    principal_determinant(lambda.len(), n, |i, j| {
        lambda.part(i) as i64 - i as i64 + j as i64
    })
}

/// `S_{nu/mu}(1^k)`, the number of semistandard skew tableaux of shape
/// `nu/mu` with entries at most `k`; zero when `mu` is not contained in
/// `nu`.
pub fn skew_schur_principal(mu: &Partition, nu: &Partition, k: u32) -> Nat {
    if !mu.contained_in(nu) {
        return Nat::zero();
    }
    principal_determinant(nu.len(), k, |i, j| {
        nu.part(i) as i64 - mu.part(j) as i64 - i as i64 + j as i64
    })
}

fn principal_determinant(l: usize, vars: u32, index: impl Fn(usize, usize) -> i64) -> Nat {
    if l == 0 {
        return Nat::one();
    }
    let mut mat = Vec::with_capacity(l);
    for i in 0..l {
        let mut row = Vec::with_capacity(l);
        for j in 0..l {
            row.push(Int::from(h_principal(index(i, j), vars)));
        }
        mat.push(row);
    }
    let det = crate::scalar::det_int(mat);
    det.to_biguint().unwrap_or_else(Nat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use crate::partitions::{dim_standard, enumerate_partitions, weyl_dim, Partition};
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn pure_gamma(delta: i64) -> ThomaConePoint<Rat> {
        ThomaConePoint::new(vec![], vec![], rat_int(delta)).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(ThomaConePoint::new(vec![rat(1, 2)], vec![rat(1, 2)], rat_int(1)).is_ok());
        assert!(ThomaConePoint::new(vec![rat(2, 3)], vec![rat(1, 2)], rat_int(1)).is_err());
        assert!(ThomaConePoint::new(vec![rat(1, 4), rat(1, 2)], vec![], rat_int(1)).is_err());
        assert!(ThomaConePoint::new(vec![rat(-1, 4)], vec![], rat_int(1)).is_err());
        // Trailing zeros are dropped.
        let pt = ThomaConePoint::new(vec![rat(1, 2), rat_int(0)], vec![], rat_int(1)).unwrap();
        assert_eq!(pt.alpha().len(), 1);
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum(1, &pure_gamma(3)), rat_int(3));
        let pt = ThomaConePoint::new(vec![rat(1, 2)], vec![rat(1, 2)], rat_int(1)).unwrap();
        assert_eq!(power_sum(2, &pt), rat_int(0));
        let pt = ThomaConePoint::new(vec![rat_int(1)], vec![], rat_int(1)).unwrap();
        assert_eq!(power_sum(3, &pt), rat_int(1));
    }

    #[test]
    fn complete_h_examples() {
        let one_alpha = ThomaConePoint::new(vec![rat_int(1)], vec![], rat_int(1)).unwrap();
        assert_eq!(complete_h(0, &one_alpha), rat_int(1));
        // H(t) = 1/(1-t): all coefficients 1.
        assert_eq!(complete_h(2, &one_alpha), rat_int(1));
        // H(t) = e^t: h_2 = 1/2.
        assert_eq!(complete_h(2, &pure_gamma(1)), rat(1, 2));
        // One beta: H(t) = 1 + t, so h_2 = 0.
        let one_beta = ThomaConePoint::new(vec![], vec![rat_int(1)], rat_int(1)).unwrap();
        assert_eq!(complete_h(1, &one_beta), rat_int(1));
        assert_eq!(complete_h(2, &one_beta), rat_int(0));
    }

    #[test]
    fn schur_examples() {
        let one_alpha = ThomaConePoint::new(vec![rat_int(1)], vec![], rat_int(1)).unwrap();
        assert_eq!(schur(&p(&[1]), &one_alpha), rat_int(1));
        assert_eq!(schur(&p(&[2, 1]), &one_alpha), rat_int(0));
        assert_eq!(schur(&p(&[2]), &pure_gamma(1)), rat(1, 2));
        // S_(1) = p_1 = |omega| everywhere.
        let pt = ThomaConePoint::new(vec![rat(1, 3)], vec![rat(1, 4)], rat_int(2)).unwrap();
        assert_eq!(schur(&p(&[1]), &pt), rat_int(2));
    }

    #[test]
    fn schur_at_pure_gamma_is_plancherel_weight() {
        // S_mu(0,0,1) = dim(mu)/|mu|!.
        for n in 0..=6u64 {
            for mu in enumerate_partitions(n) {
                let expected = Rat::new(
                    Int::from(dim_standard(&mu)),
                    Int::from(crate::scalar::factorial(n)),
                );
                assert_eq!(schur(&mu, &pure_gamma(1)), expected, "at {mu}");
            }
        }
    }

    #[test]
    fn skew_schur_basics() {
        // mu not inside nu.
        assert_eq!(
            skew_schur(&p(&[2]), &p(&[1, 1]), &pure_gamma(1)),
            Rat::zero()
        );
        // Empty skew shape.
        let pt = ThomaConePoint::new(vec![rat(1, 2)], vec![], rat_int(1)).unwrap();
        assert_eq!(skew_schur(&p(&[2]), &p(&[2]), &pt), rat_int(1));
    }

    #[test]
    fn schur_completeness() {
        // sum_{|mu|=m} dim(mu) S_mu(omega) = |omega|^m, exactly.
        let pt = ThomaConePoint::new(
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 4)],
            rat_int(2),
        )
        .unwrap();
        for m in 0..=6u64 {
            let mut acc = Rat::zero();
            for mu in enumerate_partitions(m) {
                acc += Rat::from_integer(Int::from(dim_standard(&mu))) * schur(&mu, &pt);
            }
            let mut expected = Rat::one();
            for _ in 0..m {
                expected *= rat_int(2);
            }
            assert_eq!(acc, expected, "completeness at degree {m}");
        }
    }

    #[test]
    fn principal_examples() {
        assert_eq!(h_principal(2, 2), Nat::from(3u32));
        assert_eq!(h_principal(-1, 5), Nat::zero());
        assert_eq!(h_principal(0, 0), Nat::one());
        assert_eq!(schur_principal(&p(&[1]), 3), Nat::from(3u32));
        assert_eq!(
            skew_schur_principal(&p(&[1]), &p(&[2, 1]), 1),
            Nat::from(1u32)
        );
        assert_eq!(
            skew_schur_principal(&p(&[2]), &p(&[1, 1]), 3),
            Nat::zero()
        );
    }

    #[test]
    fn principal_matches_brute_force() {
        for n in 0..=6u64 {
            for lam in enumerate_partitions(n) {
                for vars in 1..=4u32 {
                    assert_eq!(
                        schur_principal(&lam, vars),
                        oracles::count_ssyt(&lam, vars),
                        "{lam} with {vars} variables"
                    );
                }
            }
        }
    }

    #[test]
    fn skew_principal_matches_brute_force() {
        for n in 0..=5u64 {
            for nu in enumerate_partitions(n) {
                for m in 0..n {
                    for mu in crate::partitions::subdiagrams_of_size(&nu, m) {
                        for vars in 1..=3u32 {
                            assert_eq!(
                                skew_schur_principal(&mu, &nu, vars),
                                oracles::count_ssyt_skew(&mu, &nu, vars),
                                "{nu}/{mu} with {vars} variables"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weyl_dim_equals_schur_principal() {
        for n in 0..=8u64 {
            for lam in enumerate_partitions(n) {
                for level in lam.len().max(1)..=5 {
                    assert_eq!(
                        weyl_dim(&lam, level).unwrap(),
                        schur_principal(&lam, level as u32),
                        "{lam} at N={level}"
                    );
                }
            }
        }
    }

    #[test]
    fn exact_and_real_routes_agree() {
        let pt = ThomaConePoint::new(
            vec![rat(2, 5), rat(1, 5)],
            vec![rat(1, 4), rat(1, 8)],
            rat_int(2),
        )
        .unwrap();
        let pt_f = pt.to_f64();
        for n in 0..=8u64 {
            for mu in enumerate_partitions(n) {
                let exact = schur(&mu, &pt).to_f64();
                let real = schur(&mu, &pt_f);
                let denom = exact.abs().max(1e-300);
                assert!(
                    (exact - real).abs() / denom <= 1e-12 || (exact - real).abs() <= 1e-14,
                    "scalar duality at {mu}: {exact} vs {real}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn growth_bound(a1 in 0u32..8, a2 in 0u32..8, b1 in 0u32..8, slack in 0u32..8, k in 1u32..9) {
            // Random valid rational point with denominator 16.
            let (hi, lo) = (a1.max(a2), a1.min(a2));
            let alpha = vec![rat(hi as i64, 16), rat(lo as i64, 16)];
            let beta = vec![rat(b1 as i64, 16)];
            let delta = rat((hi + lo + b1 + slack) as i64, 16);
            let pt = ThomaConePoint::new(alpha, beta, delta.clone()).unwrap();
            let pk = power_sum(k, &pt);
            let mut bound = Rat::one();
            for _ in 0..k { bound *= delta.clone(); }
            prop_assert!(crate::scalar::rat_abs(&pk) <= bound);
        }

        #[test]
        fn schur_homogeneity(num in 1i64..6, den in 1i64..6, idx in 0usize..16) {
            let r = rat(num, den);
            let pt = ThomaConePoint::new(vec![rat(1, 2)], vec![rat(1, 4)], rat_int(1)).unwrap();
            let scaled = pt.scale(&r);
            let all = enumerate_partitions(4);
            let mu = &all[idx % all.len()];
            let mut factor = Rat::one();
            for _ in 0..mu.size() { factor *= r.clone(); }
            prop_assert_eq!(schur(mu, &scaled), factor * schur(mu, &pt));
        }
    }
}
