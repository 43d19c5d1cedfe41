//! Finite-level Markov kernels of the four projective systems, with exact
//! rational entries, plus composition and compatibility checking.
//!
//! Kernels are exposed as row producers (vertex to row of the lower level),
//! never as materialized matrices: GT and Young levels are infinite while a
//! row always has finite support.

use crate::partitions::{
    dim_skew, dim_standard, is_horizontal_strip, subdiagrams_of_size, weyl_dim, Partition,
    Signature,
};
use crate::scalar::{binomial, rat_int, Int, Rat};
use crate::symfunc::skew_schur_principal;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// A finitely supported probability row from one vertex to a lower level.
/// Entries are exact rationals summing to 1; zero entries are absent.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelRow<V> {
    source: V,
    entries: Vec<(V, Rat)>,
}

impl<V: Ord + Clone + std::fmt::Debug> KernelRow<V> {
    /// Build a row, dropping zero entries, sorting targets, and verifying
    /// nonnegativity and exact unit mass.
    pub fn new(source: V, mut entries: Vec<(V, Rat)>) -> Result<Self> {
        entries.retain(|(_, p)| !p.is_zero());
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut total = Rat::zero();
        for (t, p) in &entries {
            if p.is_negative() {
                return Err(Error::ParameterOutOfRange(format!(
                    "negative kernel entry at {t:?}"
                )));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::ParameterOutOfRange(format!(
                "kernel row from {source:?} sums to {total}, not 1"
            )));
        }
        Ok(KernelRow { source, entries })
    }

    pub fn source(&self) -> &V {
        &self.source
    }

    /// Targets with their probabilities, sorted by target.
    pub fn entries(&self) -> &[(V, Rat)] {
        &self.entries
    }

    /// Probability of a specific target (zero when absent).
    pub fn prob(&self, target: &V) -> Rat {
        match self.entries.binary_search_by(|(t, _)| t.cmp(target)) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    /// Exact row sum (1 by construction; exposed for the suites that
    /// re-verify stochasticity).
    pub fn sum(&self) -> Rat {
        self.entries.iter().map(|(_, p)| p.clone()).sum()
    }
}

/// Binomial-system link with ratio `q = r/r'`:
/// `m -> (1-q)^(n-m) q^m C(n, m)` on `0 <= m <= n`.
pub fn binom_link(n: u64, q: &Rat) -> Result<KernelRow<u64>> {
    check_ratio(q)?;
    let one_minus = Rat::one() - q;
    let mut entries = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        let coeff = Rat::from_integer(Int::from(binomial(n, m)));
        let p = pow_rat(q, m) * pow_rat(&one_minus, n - m) * coeff;
        entries.push((m, p));
    }
    KernelRow::new(n, entries)
}

/// Young-graph link from level `|nu|` down to level `m`:
/// `mu -> dim(mu) dim(nu/mu) / dim(nu)` over subdiagrams of size `m`.
pub fn young_link(nu: &Partition, m: u64) -> Result<KernelRow<Partition>> {
    let n = nu.size();
    if m > n {
        return Err(Error::LevelMismatch(format!(
            "target level {m} above source level {n}"
        )));
    }
    let denom = Rat::from_integer(Int::from(dim_standard(nu)));
    let mut entries = Vec::new();
    for mu in subdiagrams_of_size(nu, m) {
        let num = Rat::from_integer(Int::from(dim_standard(&mu) * dim_skew(&mu, nu)));
        entries.push((mu, num / denom.clone()));
    }
    KernelRow::new(nu.clone(), entries)
}

/// Gelfand-Tsetlin link from a nonnegative signature at level `N' =
/// nu.level()` down to level `N < N'`:
/// `mu -> Dim[mu,N] S_{nu/mu}(1^{N'-N}) / Dim[nu,N']`.
///
/// Only the nonnegative subgraph is supported; negative coordinates are
/// rejected rather than shifted.
pub fn gt_link(nu: &Signature, n: usize) -> Result<KernelRow<Signature>> {
    let n_prime = nu.level();
    if n >= n_prime {
        return Err(Error::LevelMismatch(format!(
            "target level {n} not below source level {n_prime}"
        )));
    }
    if n == 0 {
        return Err(Error::LevelMismatch("target level must be >= 1".into()));
    }
    let nu_diag = nu.to_partition()?;
    let denom = Rat::from_integer(Int::from(weyl_dim(&nu_diag, n_prime)?));
    let strip = (n_prime - n) as u32;
    let mut entries = Vec::new();
    for m in 0..=nu_diag.size() {
        for mu in subdiagrams_of_size(&nu_diag, m) {
            if mu.len() > n {
                continue;
            }
            let rel = skew_schur_principal(&mu, &nu_diag, strip);
            if rel.is_zero() {
                continue;
            }
            let num = Rat::from_integer(Int::from(weyl_dim(&mu, n)? * rel));
            entries.push((Signature::from_partition(&mu, n)?, num / denom.clone()));
        }
    }
    KernelRow::new(nu.clone(), entries)
}

/// Young-bouquet link with ratio `q = r/r'`: the two-step factorization
/// through the binomial link on sizes and the Young link within a size.
pub fn yb_link(nu: &Partition, q: &Rat) -> Result<KernelRow<Partition>> {
    check_ratio(q)?;
    let n = nu.size();
    let one_minus = Rat::one() - q;
    let dim_nu = Rat::from_integer(Int::from(dim_standard(nu)));
    let mut entries = Vec::new();
    for m in 0..=n {
        let size_factor = pow_rat(q, m)
            * pow_rat(&one_minus, n - m)
            * Rat::from_integer(Int::from(binomial(n, m)));
        for mu in subdiagrams_of_size(nu, m) {
            let shape_factor =
                Rat::from_integer(Int::from(dim_standard(&mu) * dim_skew(&mu, nu)))
                    / dim_nu.clone();
            entries.push((mu, size_factor.clone() * shape_factor));
        }
    }
    KernelRow::new(nu.clone(), entries)
}

/// Pascal-graph one-step link from `(n1, n2)` with `n1 + n2 >= 1`.
pub fn pascal_link(v: (u64, u64)) -> Result<KernelRow<(u64, u64)>> {
    let (n1, n2) = v;
    let total = n1 + n2;
    if total == 0 {
        return Err(Error::LevelMismatch(
            "Pascal vertex (0,0) has no lower level".into(),
        ));
    }
    let denom = rat_int(total as i64);
    let mut entries = Vec::new();
    if n1 > 0 {
        entries.push(((n1 - 1, n2), rat_int(n1 as i64) / denom.clone()));
    }
    if n2 > 0 {
        entries.push(((n1, n2 - 1), rat_int(n2 as i64) / denom.clone()));
    }
    KernelRow::new(v, entries)
}

/// Exact composition of a row with a further row producer:
/// `(A B)(x, .) = sum_y A(x, y) B(y, .)`. Returns the composed entries,
/// sorted by target and summing to 1 exactly.
pub fn compose_row<V2, V3, F>(row: &KernelRow<V2>, next: F) -> Result<Vec<(V3, Rat)>>
where
    V2: Ord + Clone + std::fmt::Debug,
    V3: Ord + Clone + std::fmt::Debug,
    F: Fn(&V2) -> Result<KernelRow<V3>>,
{
    let mut acc: std::collections::BTreeMap<V3, Rat> = std::collections::BTreeMap::new();
    for (mid, p) in row.entries() {
        let inner = next(mid)?;
        for (target, q) in inner.entries() {
            *acc.entry(target.clone()).or_insert_with(Rat::zero) += p * q;
        }
    }
    let entries: Vec<(V3, Rat)> = acc.into_iter().collect();
    let total: Rat = entries.iter().map(|(_, p)| p.clone()).sum();
    if !total.is_one() {
        return Err(Error::ParameterOutOfRange(format!(
            "composed row sums to {total}, not 1"
        )));
    }
    Ok(entries)
}

fn lookup<V: Ord>(entries: &[(V, Rat)], target: &V) -> Rat {
    match entries.binary_search_by(|(t, _)| t.cmp(target)) {
        Ok(i) => entries[i].1.clone(),
        Err(_) => Rat::zero(),
    }
}

/// One verdict of a compatibility check at one sampled vertex.
#[derive(Clone, Debug)]
pub struct CompatVerdict<V> {
    pub vertex: V,
    /// Exact maximum absolute entry difference between `(A o B)(v, .)` and
    /// `C(v, .)`; compatibility holds iff this is exactly zero.
    pub max_discrepancy: Rat,
}

/// Report of an exact compatibility check, ordered by sampled vertex.
#[derive(Clone, Debug)]
pub struct CompatReport<V> {
    pub verdicts: Vec<CompatVerdict<V>>,
}

impl<V> CompatReport<V> {
    pub fn all_exact(&self) -> bool {
        self.verdicts.iter().all(|v| v.max_discrepancy.is_zero())
    }
}

/// Verify `(A o B)(v, .) = C(v, .)` entrywise-exactly for every sampled
/// vertex, in the given order.
pub fn check_compatibility<V1, V2, V3, FA, FB, FC>(
    a: FA,
    b: FB,
    c: FC,
    samples: &[V1],
) -> Result<CompatReport<V1>>
where
    V1: Ord + Clone + std::fmt::Debug,
    V2: Ord + Clone + std::fmt::Debug,
    V3: Ord + Clone + std::fmt::Debug,
    FA: Fn(&V1) -> Result<KernelRow<V2>>,
    FB: Fn(&V2) -> Result<KernelRow<V3>>,
    FC: Fn(&V1) -> Result<KernelRow<V3>>,
{
    let mut verdicts = Vec::with_capacity(samples.len());
    for v in samples {
        let composed = compose_row(&a(v)?, &b)?;
        let direct = c(v)?;
        let mut max_disc = Rat::zero();
        let mut targets: Vec<&V3> = composed
            .iter()
            .chain(direct.entries().iter())
            .map(|(t, _)| t)
            .collect();
        targets.sort();
        targets.dedup();
        for t in targets {
            let d = (lookup(&composed, t) - direct.prob(t)).abs();
            if d > max_disc {
                max_disc = d;
            }
        }
        verdicts.push(CompatVerdict {
            vertex: v.clone(),
            max_discrepancy: max_disc,
        });
    }
    Ok(CompatReport { verdicts })
}

fn check_ratio(q: &Rat) -> Result<()> {
    if q <= &Rat::zero() || q >= &Rat::one() {
        return Err(Error::ParameterOutOfRange(format!(
            "ratio q = {q} outside (0, 1)"
        )));
    }
    Ok(())
}

fn pow_rat(x: &Rat, k: u64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// The one-step GT support condition: `nu/mu` is a horizontal strip.
pub fn gt_one_step_supported(mu: &Partition, nu: &Partition) -> bool {
    is_horizontal_strip(mu, nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_partitions;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn sig(coords: &[i64]) -> Signature {
        Signature::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn binom_link_examples() {
        let row = binom_link(0, &rat(1, 2)).unwrap();
        assert_eq!(row.entries(), &[(0u64, Rat::one())]);

        let row = binom_link(2, &rat(1, 2)).unwrap();
        assert_eq!(row.prob(&0), rat(1, 4));
        assert_eq!(row.prob(&1), rat(1, 2));
        assert_eq!(row.prob(&2), rat(1, 4));

        let row = binom_link(3, &rat(1, 3)).unwrap();
        assert_eq!(row.prob(&0), rat(8, 27));
        assert_eq!(row.prob(&1), rat(4, 9));
        assert_eq!(row.prob(&2), rat(2, 9));
        assert_eq!(row.prob(&3), rat(1, 27));

        assert!(binom_link(2, &rat(3, 2)).is_err());
        assert!(binom_link(2, &rat(0, 1)).is_err());
    }

    #[test]
    fn young_link_examples() {
        let row = young_link(&p(&[2, 1]), 2).unwrap();
        assert_eq!(row.prob(&p(&[2])), rat(1, 2));
        assert_eq!(row.prob(&p(&[1, 1])), rat(1, 2));

        let row = young_link(&p(&[2]), 1).unwrap();
        assert_eq!(row.entries(), &[(p(&[1]), Rat::one())]);

        let nu = p(&[3, 2, 1]);
        let row = young_link(&nu, nu.size()).unwrap();
        assert_eq!(row.entries(), &[(nu.clone(), Rat::one())]);

        assert!(young_link(&p(&[1]), 2).is_err());
    }

    #[test]
    fn gt_link_examples() {
        let row = gt_link(&sig(&[1, 0]), 1).unwrap();
        assert_eq!(row.prob(&sig(&[1])), rat(1, 2));
        assert_eq!(row.prob(&sig(&[0])), rat(1, 2));

        let row = gt_link(&sig(&[0, 0, 0]), 2).unwrap();
        assert_eq!(row.entries(), &[(sig(&[0, 0]), Rat::one())]);

        let row = gt_link(&sig(&[2, 0]), 1).unwrap();
        assert_eq!(row.prob(&sig(&[2])), rat(1, 3));
        assert_eq!(row.prob(&sig(&[1])), rat(1, 3));
        assert_eq!(row.prob(&sig(&[0])), rat(1, 3));

        assert!(gt_link(&sig(&[1, 0]), 2).is_err());
        assert!(gt_link(&sig(&[1, -1]), 1).is_err());
    }

    #[test]
    fn gt_one_step_is_interlacing() {
        // From [nu, N+1] to level N the support is exactly the horizontal
        // strips, with weights Dim[mu,N]/Dim[nu,N+1].
        let nu = p(&[3, 1]);
        let level = 3usize;
        let row = gt_link(&Signature::from_partition(&nu, level + 1).unwrap(), level).unwrap();
        for m in 0..=nu.size() {
            for mu in subdiagrams_of_size(&nu, m) {
                if mu.len() > level {
                    continue;
                }
                let target = Signature::from_partition(&mu, level).unwrap();
                let expected = if is_horizontal_strip(&mu, &nu) {
                    Rat::from_integer(Int::from(weyl_dim(&mu, level).unwrap()))
                        / Rat::from_integer(Int::from(weyl_dim(&nu, level + 1).unwrap()))
                } else {
                    Rat::zero()
                };
                assert_eq!(row.prob(&target), expected, "at {mu}");
            }
        }
    }

    #[test]
    fn yb_link_examples() {
        let row = yb_link(&p(&[1]), &rat(1, 2)).unwrap();
        assert_eq!(row.prob(&p(&[1])), rat(1, 2));
        assert_eq!(row.prob(&Partition::empty()), rat(1, 2));

        let row = yb_link(&Partition::empty(), &rat(1, 3)).unwrap();
        assert_eq!(row.entries(), &[(Partition::empty(), Rat::one())]);

        let row = yb_link(&p(&[2, 1]), &rat(1, 2)).unwrap();
        assert_eq!(row.prob(&p(&[1])), rat(3, 8));
        assert_eq!(row.sum(), Rat::one());
    }

    #[test]
    fn yb_factorizes_through_binom_and_young() {
        let nu = p(&[3, 1]);
        let q = rat(2, 5);
        let row = yb_link(&nu, &q).unwrap();
        let size_row = binom_link(nu.size(), &q).unwrap();
        for m in 0..=nu.size() {
            let level_row = young_link(&nu, m).unwrap();
            for (mu, p_level) in level_row.entries() {
                assert_eq!(
                    row.prob(mu),
                    size_row.prob(&m) * p_level,
                    "factorization at {mu}"
                );
            }
        }
    }

    #[test]
    fn yb_support_is_containment() {
        let nu = p(&[2, 2]);
        let row = yb_link(&nu, &rat(1, 2)).unwrap();
        for n in 0..=4u64 {
            for mu in enumerate_partitions(n) {
                assert_eq!(
                    !row.prob(&mu).is_zero(),
                    mu.contained_in(&nu),
                    "support at {mu}"
                );
            }
        }
    }

    #[test]
    fn pascal_link_examples() {
        let row = pascal_link((1, 0)).unwrap();
        assert_eq!(row.entries(), &[((0, 0), Rat::one())]);

        let row = pascal_link((1, 1)).unwrap();
        assert_eq!(row.prob(&(0, 1)), rat(1, 2));
        assert_eq!(row.prob(&(1, 0)), rat(1, 2));

        let row = pascal_link((2, 1)).unwrap();
        assert_eq!(row.prob(&(1, 1)), rat(2, 3));
        assert_eq!(row.prob(&(2, 0)), rat(1, 3));

        assert!(pascal_link((0, 0)).is_err());
    }

    #[test]
    fn binom_composition_is_exact() {
        // Lambda(r''->r') Lambda(r'->r) = Lambda(r''->r), ratios multiply.
        for n in [5u64, 10, 15] {
            for (qa, qb) in [(rat(1, 2), rat(1, 2)), (rat(1, 3), rat(1, 2))] {
                let q_total = &qa * &qb;
                let report = check_compatibility(
                    |&l: &u64| binom_link(l, &qb),
                    |&m: &u64| binom_link(m, &qa),
                    |&l: &u64| binom_link(l, &q_total),
                    &[n],
                )
                .unwrap();
                assert!(report.all_exact());
            }
        }
    }

    #[test]
    fn young_composition_is_exact() {
        let level4: Vec<Partition> = enumerate_partitions(4);
        let report = check_compatibility(
            |nu: &Partition| young_link(nu, 3),
            |mid: &Partition| young_link(mid, 2),
            |nu: &Partition| young_link(nu, 2),
            &level4,
        )
        .unwrap();
        assert!(report.all_exact());
    }

    #[test]
    fn identity_composition_returns_original() {
        let nu = p(&[2, 1]);
        let row = young_link(&nu, 3).unwrap();
        assert_eq!(row.entries(), &[(nu.clone(), Rat::one())]);
        let composed = compose_row(&row, |mid| young_link(mid, 1)).unwrap();
        assert_eq!(&composed[..], young_link(&nu, 1).unwrap().entries());
    }

    #[test]
    fn gt_composition_is_exact() {
        for lam in enumerate_partitions(3) {
            let nu = Signature::from_partition(&lam, 4).unwrap();
            let report = check_compatibility(
                |v: &Signature| gt_link(v, 3),
                |m: &Signature| gt_link(m, 2),
                |v: &Signature| gt_link(v, 2),
                &[nu],
            )
            .unwrap();
            assert!(report.all_exact(), "at top {lam}");
        }
    }

    proptest! {
        #[test]
        fn rows_sum_to_one(n in 0u64..12, num in 1i64..6, den in 6i64..12, idx in 0usize..128) {
            let q = rat(num, den);
            prop_assert!(binom_link(n, &q).unwrap().sum().is_one());
            let all = enumerate_partitions(n.min(9));
            let nu = all[idx % all.len()].clone();
            prop_assert!(yb_link(&nu, &q).unwrap().sum().is_one());
            for m in 0..=nu.size() {
                prop_assert!(young_link(&nu, m).unwrap().sum().is_one());
            }
        }

        #[test]
        fn gt_rows_sum_to_one(size in 0u64..7, idx in 0usize..64, level in 1usize..5, extra in 1usize..4) {
            let all = enumerate_partitions(size);
            let lam = &all[idx % all.len()];
            let top = level + extra;
            if lam.len() <= level {
                let nu = Signature::from_partition(lam, top).unwrap();
                prop_assert!(gt_link(&nu, level).unwrap().sum().is_one());
            }
        }
    }
}
