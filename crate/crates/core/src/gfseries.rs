//! Truncated power series in `x` with exact rational coefficients, and the
//! generating-function identities checked with them.
//!
//! Every check runs at a fixed rational parameter point. Recurrence tables
//! supply the left-hand sides; closed forms are expanded with the series
//! primitives here and compared coefficient by coefficient.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::mpoly::{rational_pow, Assignment, MPoly, PolyError, Var};
use crate::recur::{self, factorial, DistTable};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series has non-unit constant term {0}")]
    NonUnitConstantTerm(Rational),
    #[error("inner series has nonzero constant term {0}")]
    NonzeroConstantInner(Rational),
    #[error("singular parameter: {0}")]
    SingularParameter(String),
    #[error("{formula} fails at x^{index}: expected {expected}, got {got}")]
    IdentityViolation {
        formula: String,
        index: usize,
        expected: String,
        got: String,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Parse `num/den`, an optionally signed integer, or a decimal-free fraction.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse::<BigInt>().ok()?, b.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `c_0 + c_1 x + ⋯ + c_N x^N + O(x^{N+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<Rational>,
}

impl RationalSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// `c · x^k`.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Pads or truncates `coeffs` to length `order + 1`.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    /// `Σ_{k ≥ 0} (a x)^k`, i.e. `1 / (1 − a x)`.
    pub fn geometric(a: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut cur = Rational::one();
        for _ in 0..=order {
            coeffs.push(cur.clone());
            cur *= a;
        }
        Self { coeffs }
    }

    /// `c_0 + c_1 x` as a series.
    pub fn linear(c0: Rational, c1: Rational, order: usize) -> Self {
        let mut s = Self::constant(c0, order);
        if order >= 1 {
            s.coeffs[1] = c1;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `x^k`, dropping what falls past the order.
    pub fn shift(&self, k: usize) -> Self {
        let mut s = Self::zero(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k <= self.order() {
                s.coeffs[i + k] = c.clone();
            }
        }
        s
    }

    /// `f(a x)`: coefficient `c_n` becomes `c_n a^n`.
    pub fn scale_arg(&self, a: &Rational) -> Self {
        let mut pw = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * &pw;
                pw *= a;
                v
            })
            .collect();
        Self { coeffs }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.order()), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::NonUnitConstantTerm(a0.clone()));
        }
        let n = self.order();
        let inv0 = a0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let s: Rational = (1..=k).map(|j| &self.coeffs[j] * &out[k - j]).sum();
            out.push(-s * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Formal derivative; the top coefficient becomes zero.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut coeffs: Vec<Rational> = (1..=n)
            .map(|k| &self.coeffs[k] * Rational::from_integer(k.into()))
            .collect();
        coeffs.push(Rational::zero());
        Self { coeffs }
    }

    /// `log(a)` for `a(0) = 1`, via `log a = ∫ a'/a`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitConstantTerm(self.coeffs[0].clone()));
        }
        let n = self.order();
        // a' / a loses nothing up to x^{n-1}, which is all the integral needs
        let q = self.derivative().mul(&self.inv()?);
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend((1..=n).map(|k| &q.coeffs[k - 1] / Rational::from_integer(k.into())));
        Ok(Self { coeffs })
    }

    /// `outer(inner(x))` for `inner(0) = 0`, by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantInner(inner.coeffs[0].clone()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::zero(n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Index of the first coefficient where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let c = format_rational(&c.abs());
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

impl Add for &RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: &RationalSeries) -> RationalSeries {
        RationalSeries::add(self, rhs)
    }
}

impl Sub for &RationalSeries {
    type Output = RationalSeries;
    fn sub(self, rhs: &RationalSeries) -> RationalSeries {
        RationalSeries::sub(self, rhs)
    }
}

impl Mul for &RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: &RationalSeries) -> RationalSeries {
        RationalSeries::mul(self, rhs)
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;
    fn neg(self) -> RationalSeries {
        self.scale(&-Rational::one())
    }
}

fn expect_equal(formula: &str, expected: &RationalSeries, got: &RationalSeries) -> Result<(), SeriesError> {
    match expected.first_difference(got) {
        None => Ok(()),
        Some(index) => Err(SeriesError::IdentityViolation {
            formula: formula.to_string(),
            index,
            expected: format_rational(&expected.coeff(index)),
            got: format_rational(&got.coeff(index)),
        }),
    }
}

fn binom2(n: usize) -> u32 {
    (n * (n - 1) / 2) as u32
}

/// `Σ_{j=0}^{N} (−1)^j x^j c^j p^{e(j)} / Π_{i=0}^{j} (1 − p − x d p^{i+s})`
/// where the sums in the two closed forms share this shape.
fn alternating_product_sum(
    p: &Rational,
    x_weight: &Rational,
    p_shift_per_j: u32,
    denom_shift: i32,
    order: usize,
) -> Result<RationalSeries, SeriesError> {
    let one_m_p = Rational::one() - p;
    let mut total = RationalSeries::zero(order);
    let mut denom_inv = RationalSeries::one(order);
    for j in 0..=order {
        let pw = rational_pow(p, j as i32 + denom_shift + 1);
        let factor = RationalSeries::linear(one_m_p.clone(), -(x_weight * &pw), order);
        denom_inv = denom_inv.mul(&factor.inv()?);
        let exp = p_shift_per_j * j as u32 + binom2(j + 2);
        let mut c = rational_pow(x_weight, j as i32) * rational_pow(p, exp as i32);
        if j % 2 == 1 {
            c = -c;
        }
        total = total.add(&denom_inv.scale(&c).shift(j));
    }
    Ok(total)
}

fn check_p_not_one(p: &Rational) -> Result<(), SeriesError> {
    if p.is_one() {
        return Err(SeriesError::SingularParameter("p = 1".into()));
    }
    Ok(())
}

/// `A(x,1;p,1) = x(1−p) Σ_j (−1)^j x^j p^{j+C(j+2,2)} / Π_{i≤j}(1 − p − x p^{i+1})`
/// truncated at `x^order`.
pub fn expand_a1_closed(p: &Rational, order: usize) -> Result<RationalSeries, SeriesError> {
    check_p_not_one(p)?;
    let sum = alternating_product_sum(p, &Rational::one(), 1, 0, order)?;
    Ok(sum.shift(1).scale(&(Rational::one() - p)))
}

/// The two-sum closed form of `A(x,y;p,1) = Σ_n a_n(y;p,1) x^n`.
pub fn expand_a_closed(p: &Rational, y: &Rational, order: usize) -> Result<RationalSeries, SeriesError> {
    check_p_not_one(p)?;
    let yp = y * p;
    if yp.is_one() {
        return Err(SeriesError::SingularParameter("y p = 1".into()));
    }
    let first = alternating_product_sum(p, &Rational::one(), 1, 0, order)?;
    let second = alternating_product_sum(p, y, 2, 1, order)?;
    let inner = first.sub(&second.scale(&(&yp * &yp)));
    let lead = &yp * (Rational::one() - p) / (Rational::one() - &yp);
    let tail = inner.scale(&lead).shift(2);
    Ok(tail.add(&RationalSeries::monomial(yp, 1, order)))
}

fn point(pairs: &[(Var, &Rational)]) -> Assignment {
    pairs.iter().map(|(v, r)| (*v, (*r).clone())).collect()
}

/// Ordinary generating function of the row polynomials at a point:
/// coefficient `n` is `row_poly(n)` evaluated at `at`.
pub fn ogf_from_table(
    table: &DistTable,
    at: &Assignment,
    order: usize,
) -> Result<RationalSeries, SeriesError> {
    let mut coeffs = vec![Rational::zero()];
    for n in 1..=order.min(table.n()) {
        coeffs.push(table.row_poly(n).eval_rational(at)?);
    }
    Ok(RationalSeries::from_coeffs(coeffs, order))
}

/// Verifies `A(x,1;p,1) = xp(1−p)/(1−p−xp) − xp²/(1−p−xp) · A(xp,1;p,1)`
/// with `A` built from the recurrence table.
pub fn check_a_functional_on(a: &DistTable, p: &Rational, order: usize) -> Result<(), SeriesError> {
    check_p_not_one(p)?;
    let at = point(&[
        (Var::Y, &Rational::one()),
        (Var::P, p),
        (Var::Q, &Rational::one()),
    ]);
    let big_a = ogf_from_table(a, &at, order)?;
    let one_m_p = Rational::one() - p;
    let denom_inv = RationalSeries::linear(one_m_p.clone(), -p.clone(), order).inv()?;
    let first = denom_inv.shift(1).scale(&(p * &one_m_p));
    let second = denom_inv.mul(&big_a.scale_arg(p)).shift(1).scale(&(p * p));
    let rhs = first.sub(&second);
    expect_equal("A_functional", &big_a, &rhs)
}

pub fn check_a_functional(p: &Rational, order: usize) -> Result<(), SeriesError> {
    check_a_functional_on(&recur::a_table_lemma(order.max(1)), p, order)
}

/// Closed forms for `A(x,1;p,1)` and `A(x,y;p,1)` against the table, and
/// the `y = 1` specialization of the latter against the former.
pub fn check_a_closed_on(a: &DistTable, p: &Rational, y: &Rational, order: usize) -> Result<(), SeriesError> {
    let at1 = point(&[
        (Var::Y, &Rational::one()),
        (Var::P, p),
        (Var::Q, &Rational::one()),
    ]);
    expect_equal(
        "A1_closed",
        &ogf_from_table(a, &at1, order)?,
        &expand_a1_closed(p, order)?,
    )?;
    let aty = point(&[(Var::Y, y), (Var::P, p), (Var::Q, &Rational::one())]);
    expect_equal(
        "A_closed",
        &ogf_from_table(a, &aty, order)?,
        &expand_a_closed(p, y, order)?,
    )?;
    expect_equal(
        "A_closed_y1",
        &expand_a1_closed(p, order)?,
        &expand_a_closed(p, &Rational::one(), order)?,
    )
}

/// `ρ(x) = (1 − (p−q)x) / (1 − (p−r)x)`.
pub fn kernel_root(
    p: &Rational,
    q: &Rational,
    r: &Rational,
    order: usize,
) -> Result<RationalSeries, SeriesError> {
    let num = RationalSeries::linear(Rational::one(), -(p - q), order);
    let den = RationalSeries::linear(Rational::one(), -(p - r), order);
    num.div(&den)
}

/// Kernel-method identity `B(x,1) = (ρ−1)/q + (rρ/q) B(xρ,1)` and its
/// unrolled form with explicit remainder
/// `B(x,1) = Σ_{j≤J} r^j (v_j−1)/q^{j+1} · v_0⋯v_{j−1} + (r/q)^{J+1} v_0⋯v_J B(z_{J+1},1)`
/// where `z_0 = x`, `v_j = ρ(z_j)` and `z_{j+1} = z_j v_j`.
pub fn check_b_functional_on(
    b: &DistTable,
    p: &Rational,
    q: &Rational,
    r: &Rational,
    order: usize,
) -> Result<(), SeriesError> {
    if q.is_zero() {
        return Err(SeriesError::SingularParameter("q = 0".into()));
    }
    let at = point(&[(Var::Y, &Rational::one()), (Var::P, p), (Var::Q, q), (Var::R, r)]);
    let big_b = ogf_from_table(b, &at, order)?;
    let rho = kernel_root(p, q, r, order)?;
    let x = RationalSeries::x(order);
    let q_inv = q.recip();
    let one = RationalSeries::one(order);

    let x_rho = x.mul(&rho);
    let rhs = rho
        .sub(&one)
        .scale(&q_inv)
        .add(&rho.mul(&big_b.compose(&x_rho)?).scale(&(r * &q_inv)));
    expect_equal("B_kernel", &big_b, &rhs)?;

    let (vs, z_next) = kernel_iterates(&rho, order, order)?;
    let mut sum = RationalSeries::zero(order);
    let mut prod = RationalSeries::one(order);
    let mut weight = q_inv.clone(); // r^j / q^{j+1}
    for v in &vs {
        sum = sum.add(&v.sub(&one).mul(&prod).scale(&weight));
        prod = prod.mul(v);
        weight = weight * r * &q_inv;
    }
    // weight is now r^{J+1}/q^{J+2}; the remainder needs (r/q)^{J+1}
    let remainder = prod.mul(&big_b.compose(&z_next)?).scale(&(weight * q));
    expect_equal("B_unrolled", &big_b, &sum.add(&remainder))
}

/// `v_0, …, v_J` and `z_{J+1}` for the unrolled kernel identity.
pub fn kernel_iterates(
    rho: &RationalSeries,
    iterations: usize,
    order: usize,
) -> Result<(Vec<RationalSeries>, RationalSeries), SeriesError> {
    let mut z = RationalSeries::x(order);
    let mut vs = Vec::with_capacity(iterations + 1);
    for _ in 0..=iterations {
        let v = rho.compose(&z)?;
        z = z.mul(&v);
        vs.push(v);
    }
    Ok((vs, z))
}

pub fn check_b_functional(p: &Rational, q: &Rational, r: &Rational, order: usize) -> Result<(), SeriesError> {
    check_b_functional_on(&recur::b_table_lemma(order.max(1)), p, q, r, order)
}

/// The four total-statistic generating functions whose closed forms are
/// checked: area, levels, descents, ascents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TotalGf {
    Area,
    Levels,
    Descents,
    Ascents,
}

impl TotalGf {
    pub const ALL: [TotalGf; 4] = [
        TotalGf::Area,
        TotalGf::Levels,
        TotalGf::Descents,
        TotalGf::Ascents,
    ];

    pub fn id(self) -> &'static str {
        match self {
            TotalGf::Area => "area_gf",
            TotalGf::Levels => "tote1_levels",
            TotalGf::Descents => "tote2_descents",
            TotalGf::Ascents => "tote3_ascents",
        }
    }

    fn marker(self) -> Var {
        match self {
            TotalGf::Area | TotalGf::Levels => Var::P,
            TotalGf::Descents => Var::Q,
            TotalGf::Ascents => Var::R,
        }
    }
}

/// `ln(1 − c x)`.
fn log_one_minus(c: &Rational, order: usize) -> Result<RationalSeries, SeriesError> {
    RationalSeries::linear(Rational::one(), -c.clone(), order).log()
}

fn inv_one_minus(c: &Rational, order: usize) -> RationalSeries {
    RationalSeries::geometric(c, order)
}

/// Exponential generating function (in `x`, at fixed `y ≠ 1`) of the total
/// of a statistic over `I_{n,j}`, weighted by `y^j`.
pub fn total_gf_closed(which: TotalGf, y: &Rational, order: usize) -> Result<RationalSeries, SeriesError> {
    if y.is_one() {
        return Err(SeriesError::SingularParameter("y = 1".into()));
    }
    let one = Rational::one();
    let two = rat(2, 1);
    let omy = &one - y;
    let x = RationalSeries::x(order);
    let l_xy = log_one_minus(y, order)?;
    let l_x = log_one_minus(&one, order)?;
    let xy = x.scale(y);
    let c = |n: i64| RationalSeries::constant(rat(n, 1), order);
    let k = |v: Rational| RationalSeries::constant(v, order);

    let out = match which {
        TotalGf::Area => {
            let log_part = l_xy.sub(&l_x).scale(&(y * (&one + y) / (&two * &omy * &omy)));
            // 4x³y² − 8x²y² − 4x²y + 5xy² + 8xy − x − 6y + 2
            let y2 = y * y;
            let poly = RationalSeries::from_coeffs(
                vec![
                    -rat(6, 1) * y + &two,
                    rat(5, 1) * &y2 + rat(8, 1) * y - &one,
                    -rat(8, 1) * &y2 - rat(4, 1) * y,
                    rat(4, 1) * &y2,
                ],
                order,
            );
            let den = inv_one_minus(y, order)
                .pow(2)
                .mul(&inv_one_minus(&one, order).pow(2));
            let rat_part = poly.mul(&den).shift(1).scale(&(y / (rat(4, 1) * &omy)));
            log_part.add(&rat_part)
        }
        TotalGf::Levels => {
            // xy + [2(xy−y−1) ln(1−xy) − 2y(x−2) ln(1−x) − y(ln²(1−xy) − ln²(1−x))] / (2(1−y))
            let a = xy.sub(&k(y + &one)).scale(&two).mul(&l_xy);
            let b = x.sub(&c(2)).scale(&(&two * y)).mul(&l_x);
            let sq = l_xy.mul(&l_xy).sub(&l_x.mul(&l_x)).scale(y);
            xy.add(&a.sub(&b).sub(&sq).scale(&(&two * &omy).recip()))
        }
        TotalGf::Descents => {
            // xy/(2(1−y)) ((3x−2)/(1−x) − xy²/(1−xy))
            //   + ((1−xy) ln(1−xy) − y(2−x−y) ln(1−x)) / (1−y)²
            //   + y(ln²(1−xy) − ln²(1−x)) / (2(1−y))
            let f1 = x.scale(&rat(3, 1)).sub(&c(2)).mul(&inv_one_minus(&one, order));
            let f2 = inv_one_minus(y, order).shift(1).scale(&(y * y));
            let t1 = f1.sub(&f2).mul(&xy).scale(&(&two * &omy).recip());
            let a = k(one.clone()).sub(&xy).mul(&l_xy);
            let b = k(&two - y).sub(&x).scale(y).mul(&l_x);
            let t2 = a.sub(&b).scale(&(&omy * &omy).recip());
            let t3 = l_xy.mul(&l_xy).sub(&l_x.mul(&l_x)).scale(&(y / (&two * &omy)));
            t1.add(&t2).add(&t3)
        }
        TotalGf::Ascents => {
            // xy/(2(1−y)) ((2−x)/(1−x) − xy²/(1−xy)) + y(1−xy)/(1−y)² ln((1−x)/(1−xy))
            let f1 = c(2).sub(&x).mul(&inv_one_minus(&one, order));
            let f2 = inv_one_minus(y, order).shift(1).scale(&(y * y));
            let t1 = f1.sub(&f2).mul(&xy).scale(&(&two * &omy).recip());
            let t2 = k(one.clone())
                .sub(&xy)
                .mul(&l_x.sub(&l_xy))
                .scale(&(y / (&omy * &omy)));
            t1.add(&t2)
        }
    };
    Ok(out)
}

/// `n! [x^n]` of a series, i.e. the ordinary coefficients of an EGF.
pub fn egf_to_ordinary(s: &RationalSeries) -> RationalSeries {
    let coeffs = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * Rational::from_integer(factorial(n)))
        .collect();
    RationalSeries { coeffs }
}

/// `Σ_j (total of the marked statistic over I_{n,j}) y^j` for `n ≤ order`.
pub fn table_totals_at(table: &DistTable, marker: Var, y: &Rational, order: usize) -> RationalSeries {
    let mut coeffs = vec![Rational::zero()];
    for n in 1..=order.min(table.n()) {
        let v: Rational = table
            .row(n)
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                Rational::from_integer(cell.weighted_coeff_sum(marker)) * rational_pow(y, j as i32 + 1)
            })
            .sum();
        coeffs.push(v);
    }
    RationalSeries::from_coeffs(coeffs, order)
}

/// Printed expansion of the area-total generating function, `n ≤ 4`:
/// `n! [x^n]` at the given `y`.
pub fn area_gf_printed(y: &Rational) -> Vec<Rational> {
    let ev = |cs: &[i64]| -> Rational {
        cs.iter()
            .rev()
            .fold(Rational::zero(), |acc, &c| acc * y + rat(c, 1))
    };
    vec![
        Rational::zero(),
        y.clone(),
        y * ev(&[2, 3]),
        y * ev(&[7, 9, 11]),
        rat(3, 1) * y * ev(&[11, 13, 15, 17]),
    ]
}

/// Compares each total-statistic closed form against the tables at `y`.
pub fn expand_total_gfs_on(
    a: &DistTable,
    b: &DistTable,
    which: TotalGf,
    y: &Rational,
    order: usize,
) -> Result<(), SeriesError> {
    let closed = egf_to_ordinary(&total_gf_closed(which, y, order)?);
    let table = match which {
        TotalGf::Area => a,
        _ => b,
    };
    let from_table = table_totals_at(table, which.marker(), y, order);
    expect_equal(which.id(), &from_table, &closed)?;
    if which == TotalGf::Area {
        let printed = RationalSeries::from_coeffs(area_gf_printed(y), order.min(4));
        expect_equal("area_gf_printed", &printed, &closed.truncate(order.min(4)))?;
    }
    Ok(())
}

pub fn expand_total_gfs(y: &Rational, order: usize) -> Result<(), SeriesError> {
    let a = recur::a_table_lemma(order.max(1));
    let b = recur::b_table_lemma(order.max(1));
    for which in TotalGf::ALL {
        expand_total_gfs_on(&a, &b, which, y, order)?;
    }
    Ok(())
}

/// `a_n(y;1,1) = (n−1)! (y + ⋯ + y^n)` for `n ≤ order`.
pub fn check_egf_pq1_on(a: &DistTable, order: usize) -> Result<(), SeriesError> {
    let one = MPoly::one();
    for n in 1..=order.min(a.n()) {
        let got = a
            .row_poly(n)
            .substitute_all(&[(Var::P, one.clone()), (Var::Q, one.clone())])?;
        let f = factorial(n - 1);
        let want = MPoly::from_terms((1..=n).map(|k| (f.clone(), [k as i32, 0, 0, 0, 0])));
        if got != want {
            return Err(SeriesError::IdentityViolation {
                formula: "egf_pq1".into(),
                index: n,
                expected: want.to_string(),
                got: got.to_string(),
            });
        }
    }
    Ok(())
}

pub fn check_egf_pq1(order: usize) -> Result<(), SeriesError> {
    check_egf_pq1_on(&recur::a_table_lemma(order.max(1)), order)
}

/// `y/(1−y) · ln((1−xy)/(1−x))`, the EGF of `a_n(y;1,1)` at fixed `y ≠ 1`.
pub fn egf_pq1_closed(y: &Rational, order: usize) -> Result<RationalSeries, SeriesError> {
    if y.is_one() {
        return Err(SeriesError::SingularParameter("y = 1".into()));
    }
    let l = log_one_minus(y, order)?.sub(&log_one_minus(&Rational::one(), order)?);
    Ok(l.scale(&(y / (Rational::one() - y))))
}
