//! Sparse multivariate Laurent polynomials with big-integer coefficients.
//!
//! Every polynomial lives over the fixed, ordered variable set `y, p, q, r, t`.
//! Monomials are dense exponent vectors of length five; exponents may be
//! negative. Terms with a zero coefficient are never stored, so two
//! polynomials are equal exactly when their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const NVARS: usize = 5;

/// Exponent vector in variable order `[y, p, q, r, t]`.
pub type Exponents = [i32; NVARS];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Y,
    P,
    Q,
    R,
    T,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Y, Var::P, Var::Q, Var::R, Var::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Y => "y",
            Var::P => "p",
            Var::Q => "q",
            Var::R => "r",
            Var::T => "t",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("cannot substitute a non-monomial for {0} where it appears with a negative exponent")]
    NegativePowerSubstitution(Var),
    #[error("division by zero: {0} is assigned 0 but appears with a negative exponent")]
    DivisionByZero(Var),
    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Values for some of the variables, used by [`MPoly::eval_rational`].
pub type Assignment = BTreeMap<Var, BigRational>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MPoly {
    terms: BTreeMap<Exponents, BigInt>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, [0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Self::monomial(1, e)
    }

    /// `c * v^k`.
    pub fn var_pow(v: Var, k: i32) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = k;
        Self::monomial(1, e)
    }

    pub fn monomial(c: impl Into<BigInt>, exps: Exponents) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { terms }
    }

    /// Build from arbitrary `(coefficient, exponents)` pairs, merging repeats.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (BigInt, Exponents)>,
    {
        let mut out = Self::zero();
        for (c, e) in iter {
            out.add_term(e, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &Exponents) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// If this is `±m` for a single monomial `m`, returns the sign and `m`.
    fn as_unit_monomial(&self) -> Option<(bool, Exponents)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if c.is_one() {
            Some((false, *e))
        } else if (-c).is_one() {
            Some((true, *e))
        } else {
            None
        }
    }

    fn add_term(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multiply every term by `c * x^exps`.
    pub fn mul_monomial(&self, c: &BigInt, exps: &Exponents) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, k)| (add_exps(e, exps), k * c))
            .collect();
        Self { terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.mul_monomial(c, &[0; NVARS])
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Smallest and largest exponent of `v` over all terms.
    pub fn degree_range(&self, v: Var) -> Option<(i32, i32)> {
        let i = v.index();
        let mut it = self.terms.keys().map(|e| e[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    /// Group terms by the exponent of `v`; each group has `v` removed.
    pub fn collect_in(&self, v: Var) -> BTreeMap<i32, MPoly> {
        let i = v.index();
        let mut out: BTreeMap<i32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[i] = 0;
            out.entry(e[i]).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// `Σ coeff · (exponent of v)` over all terms.
    ///
    /// On a distribution polynomial this is the total of the statistic that
    /// `v` marks, i.e. the partial derivative in `v` at the all-ones point.
    pub fn weighted_coeff_sum(&self, v: Var) -> BigInt {
        let i = v.index();
        self.terms.iter().map(|(e, c)| c * BigInt::from(e[i])).sum()
    }

    /// Sum of all coefficients (value at the all-ones point).
    pub fn coeff_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Replace every occurrence of `v` by `repl`.
    ///
    /// Negative powers of `v` are only allowed when `repl` is `±` a single
    /// monomial, since that is the only case with a Laurent inverse.
    pub fn substitute(&self, v: Var, repl: &MPoly) -> Result<MPoly, PolyError> {
        let i = v.index();
        if let Some((neg, rexp)) = repl.as_unit_monomial() {
            let mut out = Self::zero();
            for (e, c) in &self.terms {
                let k = e[i];
                let mut ne = *e;
                ne[i] = 0;
                for (a, b) in ne.iter_mut().zip(rexp.iter()) {
                    *a += k * b;
                }
                let c = if neg && k.rem_euclid(2) == 1 {
                    -c
                } else {
                    c.clone()
                };
                out.add_term(ne, c);
            }
            return Ok(out);
        }
        if let Some((lo, _)) = self.degree_range(v) {
            if lo < 0 {
                return Err(PolyError::NegativePowerSubstitution(v));
            }
        }
        let mut powers: BTreeMap<i32, MPoly> = BTreeMap::new();
        let mut out = Self::zero();
        for (k, rest) in self.collect_in(v) {
            let pw = powers.entry(k).or_insert_with(|| repl.pow(k as u32)).clone();
            out += &(&rest * &pw);
        }
        Ok(out)
    }

    /// Substitute several variables at once, in the given order.
    pub fn substitute_all(&self, subs: &[(Var, MPoly)]) -> Result<MPoly, PolyError> {
        let mut cur = self.clone();
        for (v, r) in subs {
            cur = cur.substitute(*v, r)?;
        }
        Ok(cur)
    }

    /// Exact value at a rational point. Works over a common denominator so
    /// that only one rational normalization happens.
    pub fn eval_rational(&self, at: &Assignment) -> Result<BigRational, PolyError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        // Per variable: value n/d, exponent window [lo, hi] containing 0, and
        // cached powers n^j and d^j for 0 ≤ j ≤ hi − lo.
        struct Axis {
            lo: i32,
            hi: i32,
            num_pows: Vec<BigInt>,
            den_pows: Vec<BigInt>,
        }
        let mut axes = Vec::with_capacity(NVARS);
        for v in Var::ALL {
            let (lo, hi) = self.degree_range(v).expect("nonzero polynomial");
            let (lo, hi) = (lo.min(0), hi.max(0));
            if lo == hi {
                axes.push(None);
                continue;
            }
            let x = at.get(&v).ok_or(PolyError::MissingAssignment(v))?;
            if lo < 0 && x.is_zero() {
                return Err(PolyError::DivisionByZero(v));
            }
            let span = (hi - lo) as usize;
            let powers = |b: &BigInt| {
                let mut out = Vec::with_capacity(span + 1);
                out.push(BigInt::one());
                for j in 0..span {
                    let next = &out[j] * b;
                    out.push(next);
                }
                out
            };
            axes.push(Some(Axis {
                lo,
                hi,
                num_pows: powers(x.numer()),
                den_pows: powers(x.denom()),
            }));
        }
        // x^k = n^(k−lo) d^(hi−k) · n^lo / d^hi
        let mut sum = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, axis) in Var::ALL.iter().zip(&axes) {
                if let Some(a) = axis {
                    let k = e[v.index()];
                    term *= &a.num_pows[(k - a.lo) as usize];
                    term *= &a.den_pows[(a.hi - k) as usize];
                }
            }
            sum += term;
        }
        let mut den = BigInt::one();
        for a in axes.iter().flatten() {
            den *= &a.den_pows[a.hi as usize];
            if a.lo < 0 {
                den *= &a.num_pows[(-a.lo) as usize];
            }
        }
        Ok(BigRational::new(sum, den))
    }

    /// Canonical text form, e.g. `-2*y^2+2*y^3` or `p*q^-2`.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    /// JSON-ready list of `{coeff, exp}` entries in canonical order.
    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|(e, c)| JsonTerm {
                coeff: c.to_string(),
                exp: *e,
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[JsonTerm]) -> Result<MPoly, PolyError> {
        let mut out = Self::zero();
        for t in terms {
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| PolyError::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            out.add_term(t.exp, c);
        }
        Ok(out)
    }
}

fn add_exps(a: &Exponents, b: &Exponents) -> Exponents {
    let mut out = *a;
    for (x, y) in out.iter_mut().zip(b) {
        *x += y;
    }
    out
}

pub(crate) fn rational_pow(x: &BigRational, k: i32) -> BigRational {
    let base = if k < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, k.unsigned_abs() as usize)
}

/// One entry of the JSON polynomial form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub exp: Exponents,
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<JsonTerm>::deserialize(d)?;
        MPoly::from_json_terms(&terms).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            if c.is_negative() {
                f.write_str("-")?;
            } else if idx > 0 {
                f.write_str("+")?;
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for v in Var::ALL {
                match e[v.index()] {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    k => factors.push(format!("{}^{}", v.name(), k)),
                }
            }
            if factors.is_empty() || !mag.is_one() {
                factors.insert(0, mag.to_string());
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for MPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        // split into signed terms; a sign directly after '^' belongs to an exponent
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.is_empty() {
                    pieces.push((neg, std::mem::take(&mut cur)));
                } else if prev.is_some() {
                    return Err(PolyError::Parse(format!("dangling sign in {s:?}")));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if cur.is_empty() {
            return Err(PolyError::Parse(format!("trailing sign in {s:?}")));
        }
        pieces.push((neg, cur));

        let mut out = MPoly::zero();
        for (neg, body) in pieces {
            let mut c = BigInt::one();
            let mut e = [0; NVARS];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(PolyError::Parse(format!("empty factor in {body:?}")));
                }
                if factor.chars().all(|ch| ch.is_ascii_digit()) {
                    c *= factor
                        .parse::<BigInt>()
                        .map_err(|err| PolyError::Parse(err.to_string()))?;
                    continue;
                }
                let (name, k) = match factor.split_once('^') {
                    Some((n, k)) => (
                        n,
                        k.parse::<i32>()
                            .map_err(|_| PolyError::Parse(format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (factor, 1),
                };
                let v = Var::from_name(name)
                    .ok_or_else(|| PolyError::Parse(format!("unknown variable {name:?}")))?;
                e[v.index()] += k;
            }
            out.add_term(e, if neg { -c } else { c });
        }
        Ok(out)
    }
}

impl From<i64> for MPoly {
    fn from(c: i64) -> Self {
        MPoly::constant(c)
    }
}

impl From<Var> for MPoly {
    fn from(v: Var) -> Self {
        MPoly::var(v)
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(add_exps(ea, eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl std::iter::Sum for MPoly {
    fn sum<I: Iterator<Item = MPoly>>(iter: I) -> MPoly {
        let mut out = MPoly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

impl<'a> std::iter::Sum<&'a MPoly> for MPoly {
    fn sum<I: Iterator<Item = &'a MPoly>>(iter: I) -> MPoly {
        let mut out = MPoly::zero();
        for p in iter {
            out += p;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn poly(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_examples() {
        assert_eq!(poly("p*q^2") + MPoly::zero(), poly("p*q^2"));
        assert_eq!(poly("y*p") + poly("y^2*r"), poly("y*p+y^2*r"));
        assert!((poly("y-y^2") + poly("y^2-y")).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly("p*q") * poly("p*q"), poly("p^2*q^2"));
        assert_eq!(poly("q^-1") * poly("q"), MPoly::one());
        assert_eq!(poly("y*p^3*q^4") * poly("1+p*q"), poly("y*p^3*q^4+y*p^4*q^5"));
    }

    #[test]
    fn substitute_examples() {
        let a3_first = poly("y*p^3*q^4") * poly("1+p*q");
        assert_eq!(
            a3_first.substitute(Var::Y, &MPoly::one()).unwrap(),
            poly("p^3*q^4+p^4*q^5")
        );
        assert_eq!(
            poly("p*q^2").substitute(Var::Q, &poly("q^-1")).unwrap(),
            poly("p*q^-2")
        );
        assert_eq!(
            poly("y*p+y^2*r").substitute(Var::Y, &poly("y*p")).unwrap(),
            poly("y*p^2+y^2*p^2*r")
        );
    }

    #[test]
    fn substitute_negative_sign_monomial() {
        // y^-3 with y -> -q gives -q^-3
        assert_eq!(
            poly("y^-3").substitute(Var::Y, &poly("-q")).unwrap(),
            poly("-q^-3")
        );
        assert_eq!(
            poly("y^2*p").substitute(Var::P, &poly("-t")).unwrap(),
            poly("-y^2*t")
        );
    }

    #[test]
    fn substitute_refuses_polynomial_into_negative_power() {
        let err = poly("q^-1+p").substitute(Var::Q, &poly("1+p")).unwrap_err();
        assert_eq!(err, PolyError::NegativePowerSubstitution(Var::Q));
        // nonnegative powers are fine
        assert_eq!(
            poly("q^2").substitute(Var::Q, &poly("1+p")).unwrap(),
            poly("1+2*p+p^2")
        );
    }

    #[test]
    fn eval_examples() {
        let mut at = Assignment::new();
        at.insert(Var::P, rat(1, 1));
        at.insert(Var::Q, rat(1, 1));
        assert_eq!(poly("p*q^2").eval_rational(&at).unwrap(), rat(1, 1));

        at.insert(Var::Y, rat(1, 1));
        at.insert(Var::Q, rat(-1, 1));
        assert_eq!(
            poly("y*p^2*q^3+y^2*p^3*q^4").eval_rational(&at).unwrap(),
            rat(0, 1)
        );

        let mut half = Assignment::new();
        half.insert(Var::Y, rat(1, 2));
        // 2/8 - 2/4
        assert_eq!(poly("2*y^3-2*y^2").eval_rational(&half).unwrap(), rat(-1, 4));
    }

    #[test]
    fn eval_errors() {
        let mut at = Assignment::new();
        at.insert(Var::Q, rat(0, 1));
        assert_eq!(
            poly("q^-1").eval_rational(&at).unwrap_err(),
            PolyError::DivisionByZero(Var::Q)
        );
        assert_eq!(
            poly("p*q").eval_rational(&at).unwrap_err(),
            PolyError::MissingAssignment(Var::P)
        );
        // q^0 needs no assignment
        assert_eq!(poly("3").eval_rational(&Assignment::new()).unwrap(), rat(3, 1));
    }

    #[test]
    fn coeff_examples() {
        let a = poly("y*p^3*q^4+y*p^4*q^5");
        assert_eq!(a.coeff(&[1, 4, 5, 0, 0]), BigInt::from(1));
        assert_eq!(a.coeff(&[2, 0, 0, 0, 0]), BigInt::from(0));
        let b3 = poly("y*q*r+y*p^2+2*y^2*p*r+y^3*r*p+y^3*r^2");
        assert_eq!(b3.coeff(&[2, 1, 0, 1, 0]), BigInt::from(2));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(poly("q^2*p").to_string(), "p*q^2");
        assert_eq!(poly("2*y^3-2*y^2").to_string(), "-2*y^2+2*y^3");
        assert_eq!(MPoly::zero().to_string(), "0");
        assert_eq!(poly("-1").to_string(), "-1");
        assert_eq!(poly("p*q^-2").to_string(), "p*q^-2");
        assert_eq!(poly("3*t-1").to_string(), "-1+3*t");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<MPoly>().is_err());
        assert!("p+".parse::<MPoly>().is_err());
        assert!("x^2".parse::<MPoly>().is_err());
        assert!("p**q".parse::<MPoly>().is_err());
        assert!("p^a".parse::<MPoly>().is_err());
    }

    #[test]
    fn json_form() {
        let a = poly("y*p-3*q^-1");
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(
            js,
            r#"[{"coeff":"-3","exp":[0,0,-1,0,0]},{"coeff":"1","exp":[1,1,0,0,0]}]"#
        );
        let back: MPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn weighted_sums() {
        // area total over I_2: areas 2 and 3
        let a2 = poly("p^2*q^3+p^3*q^4");
        assert_eq!(a2.weighted_coeff_sum(Var::P), BigInt::from(5));
        assert_eq!(a2.weighted_coeff_sum(Var::Q), BigInt::from(7));
        assert_eq!(a2.coeff_sum(), BigInt::from(2));
    }
}
