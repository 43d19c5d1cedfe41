//! Scalar domains shared by the whole crate: exact big rationals, approximate
//! reals, and Gaussian (complex) rationals, together with the determinant
//! routines each domain uses.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Div, Neg, Sub};

/// Exact arbitrary-precision rational.
pub type Rat = BigRational;
/// Arbitrary-precision signed integer.
pub type Int = BigInt;
/// Arbitrary-precision unsigned integer.
pub type Nat = BigUint;

/// Build a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Build a rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Exact factorial.
pub fn factorial(n: u64) -> Nat {
    let mut acc = Nat::one();
    for k in 2..=n {
        acc *= Nat::from(k);
    }
    acc
}

/// Binomial coefficient `C(n, k)` for nonnegative `n`.
pub fn binomial(n: u64, k: u64) -> Nat {
    if k > n {
        return Nat::zero();
    }
    let k = k.min(n - k);
    let mut acc = Nat::one();
    for i in 0..k {
        acc *= Nat::from(n - i);
        acc /= Nat::from(i + 1);
    }
    acc
}

/// The scalar abstraction under which symmetric functions and kernels are
/// evaluated: either exact rationals or `f64`.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + std::fmt::Debug
    + Zero
    + One
    + Sub<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn from_nat(n: &Nat) -> Self;
    fn to_f64(&self) -> f64;
    /// Determinant of a square matrix, consuming it. The exact instantiation
    /// clears denominators and runs fraction-free (Bareiss) elimination; the
    /// real instantiation uses plain elimination with partial pivoting.
    fn det(mat: Vec<Vec<Self>>) -> Self;
}

impl Scalar for Rat {
    fn from_int(n: i64) -> Self {
        rat_int(n)
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn from_nat(n: &Nat) -> Self {
        Rat::from_integer(Int::from(n.clone()))
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
    fn det(mat: Vec<Vec<Self>>) -> Self {
        det_rat(mat)
    }
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }
    fn from_nat(n: &Nat) -> Self {
        nat_to_f64(n)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn det(mat: Vec<Vec<Self>>) -> Self {
        det_f64(mat)
    }
}

/// Rational to double, robust for numerators/denominators far beyond `f64`
/// range (falls back on bit-length balancing when the direct route
/// overflows).
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    let num = r.numer();
    let den = r.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    // Scale both sides into f64 range, then reapply the exponent.
    let scaled = if shift > 0 {
        Rat::new(num.clone(), den.clone() << shift as u64)
    } else {
        Rat::new(num.clone() << (-shift) as u64, den.clone())
    };
    ToPrimitive::to_f64(&scaled).unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Unsigned big integer to double via the rational route.
pub fn nat_to_f64(n: &Nat) -> f64 {
    rat_to_f64(&Rat::from_integer(Int::from(n.clone())))
}

/// Exact determinant over the rationals: per-row denominator clearing
/// followed by fraction-free Bareiss elimination over the integers.
pub fn det_rat(mat: Vec<Vec<Rat>>) -> Rat {
    let n = mat.len();
    if n == 0 {
        return Rat::one();
    }
    let mut scale = Int::one();
    let mut m: Vec<Vec<Int>> = Vec::with_capacity(n);
    for row in &mat {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
        let mut lcm = Int::one();
        for x in row {
            lcm = num_integer::lcm(lcm, x.denom().clone());
        }
        scale *= &lcm;
        m.push(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
    }
    let d = det_int(m);
    Rat::new(d, scale)
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn det_int(mut m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = 1i64;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = &t / &prev; // exact by the Bareiss identity
            }
            m[i][k] = Int::zero();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone() * sign
}

/// Determinant with partial pivoting, for the real instantiation.
pub fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    let mut det = 1.0;
    for k in 0..n {
        let (pivot_row, pivot) = (k..n)
            .map(|i| (i, m[i][k].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != k {
            m.swap(k, pivot_row);
            det = -det;
        }
        det *= m[k][k];
        let (pivot_rows, rest) = m.split_at_mut(k + 1);
        let pivot = &pivot_rows[k];
        for row in rest {
            let f = row[k] / pivot[k];
            for (x, p) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// A Gaussian rational `re + im*i` with exact rational parts. Only the
/// handful of operations needed for Pochhammer products and admissibility
/// classification are provided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::from_rat(rat_int(n))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussRat {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn add_rat(&self, r: &Rat) -> Self {
        GaussRat {
            re: &self.re + r,
            im: self.im.clone(),
        }
    }

    /// True when the value is an exact (real) integer.
    pub fn is_integer(&self) -> bool {
        self.is_real() && self.re.is_integer()
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

/// Round a rational half-up to the nearest integer.
pub fn round_half_up(r: &Rat) -> Int {
    let twice = r * rat_int(2);
    let floor2 = (twice + Rat::one()).floor();
    let half = floor2 / rat_int(2);
    half.floor().to_integer()
}

/// Format a rational as `p/q` (or just `p` for integers).
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse a scalar literal: `p/q`, an integer, or an exact decimal such as
/// `0.25` (decimals convert exactly).
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: Int = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: Int = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let sign = if int_part.trim_start().starts_with('-') {
            -1i64
        } else {
            1
        };
        let i: Int = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            Int::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| format!("bad decimal in {s:?}"))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal in {s:?}"));
        }
        let f: Int = frac_part.parse().unwrap();
        let den = Int::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(f, den) * rat_int(sign);
        return Ok(Rat::from_integer(i) + frac);
    }
    let n: Int = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
    Ok(Rat::from_integer(n))
}

/// Parse a complex literal with exact rational parts: `a`, `a+bi`, `a-bi`,
/// where `a` and `b` follow [`parse_rat`] syntax.
pub fn parse_gauss(s: &str) -> Result<GaussRat, String> {
    let s = s.trim().replace(' ', "");
    if !s.ends_with('i') {
        return parse_rat(&s).map(GaussRat::from_rat);
    }
    let body = &s[..s.len() - 1];
    // Find the sign splitting the real and imaginary parts, skipping a
    // leading sign and signs inside `p/q` (none occur after position 0).
    let mut split = None;
    for (idx, ch) in body.char_indices().skip(1) {
        if ch == '+' || ch == '-' {
            split = Some(idx);
        }
    }
    match split {
        Some(idx) => {
            let re = parse_rat(&body[..idx])?;
            let im_str = &body[idx..];
            let im = if im_str == "+" {
                Rat::one()
            } else if im_str == "-" {
                -Rat::one()
            } else {
                parse_rat(im_str)?
            };
            Ok(GaussRat::new(re, im))
        }
        None => {
            let im = if body.is_empty() {
                Rat::one()
            } else if body == "-" {
                -Rat::one()
            } else {
                parse_rat(body)?
            };
            Ok(GaussRat::new(Rat::zero(), im))
        }
    }
}

/// Absolute value of a rational.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), Nat::one());
        assert_eq!(factorial(5), Nat::from(120u32));
        assert_eq!(binomial(5, 2), Nat::from(10u32));
        assert_eq!(binomial(3, 5), Nat::zero());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![
            vec![Int::from(2), Int::from(-1), Int::from(3)],
            vec![Int::from(0), Int::from(4), Int::from(1)],
            vec![Int::from(5), Int::from(2), Int::from(-2)],
        ];
        // 2*(4*-2-1*2) - (-1)*(0*-2-1*5) + 3*(0*2-4*5)
        assert_eq!(det_int(m), Int::from(2 * -10 + 1 * -5 + 3 * -20));
    }

    #[test]
    fn det_rat_handles_denominators() {
        let m = vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 4), rat(1, 5)],
        ];
        assert_eq!(det_rat(m), rat(1, 10) - rat(1, 12));
    }

    #[test]
    fn det_zero_row_is_zero() {
        let m = vec![
            vec![Rat::zero(), Rat::zero()],
            vec![rat(1, 1), rat(2, 1)],
        ];
        assert_eq!(det_rat(m), Rat::zero());
    }

    #[test]
    fn det_f64_pivoting() {
        let m = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(det_f64(m), -1.0);
    }

    #[test]
    fn parse_rat_forms() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-7").unwrap(), rat_int(-7));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn parse_gauss_forms() {
        assert_eq!(
            parse_gauss("1+1i").unwrap(),
            GaussRat::new(rat_int(1), rat_int(1))
        );
        assert_eq!(
            parse_gauss("1/2-3/4i").unwrap(),
            GaussRat::new(rat(1, 2), rat(-3, 4))
        );
        assert_eq!(parse_gauss("2").unwrap(), GaussRat::from_int(2));
        assert_eq!(
            parse_gauss("-i").unwrap(),
            GaussRat::new(Rat::zero(), rat_int(-1))
        );
    }

    #[test]
    fn round_half_up_works() {
        assert_eq!(round_half_up(&rat(5, 2)), Int::from(3));
        assert_eq!(round_half_up(&rat(7, 3)), Int::from(2));
        assert_eq!(round_half_up(&rat(-5, 2)), Int::from(-2));
        assert_eq!(round_half_up(&rat_int(4)), Int::from(4));
    }
}
