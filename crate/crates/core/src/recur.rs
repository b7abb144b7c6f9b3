//! Recurrences for the area/semi-perimeter polynomials `a_{n,i}` and the
//! level/descent/ascent polynomials `b_{n,i}`, their closed-form totals,
//! sign-balance evaluations, and Stirling/Eulerian oracles.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mpoly::{MPoly, PolyError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurError {
    #[error("{check} fails at n = {n}: {detail}")]
    IdentityViolation { check: String, n: usize, detail: String },
    #[error("numerator at n = {0} is not divisible by (1 - y)")]
    NonDivisible(usize),
    #[error("index ({n}, {k}) out of range")]
    IndexOutOfRange { n: usize, k: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("malformed table: {0}")]
    Table(String),
}

fn violation(check: &str, n: usize, detail: impl Into<String>) -> RecurError {
    RecurError::IdentityViolation {
        check: check.to_string(),
        n,
        detail: detail.into(),
    }
}

/// Triangular array of polynomials, entry `(m, i)` for `1 ≤ i ≤ m ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistTable {
    rows: Vec<Vec<MPoly>>,
}

#[derive(Serialize, Deserialize)]
struct JsonCell {
    n: usize,
    i: usize,
    poly: MPoly,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    n: usize,
    entries: Vec<JsonCell>,
}

impl DistTable {
    /// `rows[m-1]` must hold exactly `m` entries.
    pub fn from_rows(rows: Vec<Vec<MPoly>>) -> Self {
        for (k, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), k + 1, "row {} has wrong length", k + 1);
        }
        Self { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, m: usize, i: usize) -> &MPoly {
        &self.rows[m - 1][i - 1]
    }

    pub fn row(&self, m: usize) -> &[MPoly] {
        &self.rows[m - 1]
    }

    /// Overwrite one cell. Only used to build negative controls.
    pub fn set(&mut self, m: usize, i: usize, poly: MPoly) {
        self.rows[m - 1][i - 1] = poly;
    }

    /// `Σ_i entry(m,i)`, i.e. the row polynomial at `y = 1`.
    pub fn row_sum(&self, m: usize) -> MPoly {
        self.row(m).iter().sum()
    }

    /// `Σ_i entry(m,i) · y^i`.
    pub fn row_poly(&self, m: usize) -> MPoly {
        self.row(m)
            .iter()
            .enumerate()
            .map(|(k, c)| c * &MPoly::var_pow(Var::Y, k as i32 + 1))
            .sum()
    }

    /// Prefix of the table up to row `m`.
    pub fn truncated(&self, m: usize) -> DistTable {
        Self {
            rows: self.rows[..m.min(self.n())].to_vec(),
        }
    }

    /// First cell `(m, i)` where the two tables differ, scanning row by row.
    pub fn first_mismatch(&self, other: &DistTable) -> Option<(usize, usize)> {
        let n = self.n().max(other.n());
        for m in 1..=n {
            if m > self.n() || m > other.n() {
                return Some((m, 1));
            }
            for i in 1..=m {
                if self.get(m, i) != other.get(m, i) {
                    return Some((m, i));
                }
            }
        }
        None
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "i", "poly"]).expect("in-memory write");
        for (k, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                w.write_record([(k + 1).to_string(), (j + 1).to_string(), c.to_string()])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn from_csv(text: &str) -> Result<Self, RecurError> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let mut cells = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| RecurError::Table(e.to_string()))?;
            if rec.len() != 3 {
                return Err(RecurError::Table(format!(
                    "expected 3 columns, got {}",
                    rec.len()
                )));
            }
            let m: usize = rec[0]
                .parse()
                .map_err(|_| RecurError::Table(format!("bad n {:?}", &rec[0])))?;
            let i: usize = rec[1]
                .parse()
                .map_err(|_| RecurError::Table(format!("bad i {:?}", &rec[1])))?;
            cells.push((m, i, rec[2].parse::<MPoly>()?));
        }
        Self::from_cells(cells)
    }

    pub fn to_json(&self) -> String {
        let entries = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(k, row)| {
                row.iter().enumerate().map(move |(j, c)| JsonCell {
                    n: k + 1,
                    i: j + 1,
                    poly: c.clone(),
                })
            })
            .collect();
        serde_json::to_string(&JsonTable { n: self.n(), entries }).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, RecurError> {
        let t: JsonTable = serde_json::from_str(text).map_err(|e| RecurError::Table(e.to_string()))?;
        let table = Self::from_cells(t.entries.into_iter().map(|c| (c.n, c.i, c.poly)).collect())?;
        if table.n() != t.n {
            return Err(RecurError::Table(format!(
                "declared n = {} but found {} rows",
                t.n,
                table.n()
            )));
        }
        Ok(table)
    }

    fn from_cells(cells: Vec<(usize, usize, MPoly)>) -> Result<Self, RecurError> {
        let n = cells.iter().map(|c| c.0).max().unwrap_or(0);
        let mut rows: Vec<Vec<Option<MPoly>>> = (1..=n).map(|m| vec![None; m]).collect();
        for (m, i, p) in cells {
            if m == 0 || i == 0 || i > m {
                return Err(RecurError::Table(format!("cell ({m}, {i}) outside the triangle")));
            }
            if rows[m - 1][i - 1].replace(p).is_some() {
                return Err(RecurError::Table(format!("duplicate cell ({m}, {i})")));
            }
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(k, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, c)| {
                        c.ok_or_else(|| RecurError::Table(format!("missing cell ({}, {})", k + 1, j + 1)))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { rows })
    }
}

fn pq(p: i32, q: i32) -> MPoly {
    MPoly::monomial(1, [0, p, q, 0, 0])
}

/// `a_{n,i}` from the two-sum recurrence
/// `a_{n,i} = p^i q Σ_{j≥i} a_{n−1,j} + p^i q Σ_{j<i} q^{i−j} a_{n−1,j}`.
pub fn a_table_lemma(n: usize) -> DistTable {
    let mut rows = vec![vec![pq(1, 2)]];
    for m in 2..=n {
        let prev = &rows[m - 2];
        let row = (1..=m)
            .map(|i| {
                let mut inner: MPoly = prev[i - 1..].iter().sum();
                for (j, c) in prev.iter().enumerate().take(i - 1) {
                    inner += &(c * &pq(0, (i - j - 1) as i32));
                }
                &inner * &pq(i as i32, 1)
            })
            .collect();
        rows.push(row);
    }
    DistTable::from_rows(rows)
}

/// `a_{n,i}` from the three-term recurrence in `i`.
pub fn a_table_threeterm(n: usize) -> DistTable {
    let p = MPoly::var(Var::P);
    let q = MPoly::var(Var::Q);
    let one = MPoly::one();
    let p_q1 = &p * &(&q + &one);
    let p2q = pq(2, 1);
    let q_qm1 = &q * &(&q - &one);

    let mut rows = vec![vec![pq(1, 2)]];
    for m in 2..=n {
        let prev = &rows[m - 2];
        let prev_sum: MPoly = prev.iter().sum();
        let mut row = Vec::with_capacity(m);
        row.push(&pq(1, 1) * &prev_sum);
        let second = &(&p * &row[0]) + &(&(&pq(2, 0) * &q_qm1) * &prev[0]);
        row.push(second);
        for i in 3..=m {
            let v = &(&(&p_q1 * &row[i - 2]) - &(&p2q * &row[i - 3]))
                + &(&(&pq(i as i32, 0) * &q_qm1) * &prev[i - 2]);
            row.push(v);
        }
        rows.push(row);
    }
    DistTable::from_rows(rows)
}

/// `a_m(y) = Σ_i a_{m,i} y^i`.
pub fn an_poly(table: &DistTable, m: usize) -> MPoly {
    table.row_poly(m)
}

/// Checks, for `2 ≤ n ≤ nmax`, this row identity as an exact
/// Laurent-polynomial equality:
///
/// ```text
/// (1−yp)(1−ypq) a_n(y) = ypq(1−ypq)(a_{n−1}(1) − a_{n−1}(yp))
///                      + ypq²(1−yp)(a_{n−1}(yp) − (ypq)^n a_{n−1}(1/q))
/// ```
pub fn check_an_functional_on(table: &DistTable, nmax: usize) -> Result<(), RecurError> {
    let one = MPoly::one();
    let yp = MPoly::monomial(1, [1, 1, 0, 0, 0]);
    let ypq = MPoly::monomial(1, [1, 1, 1, 0, 0]);
    let ypq2 = MPoly::monomial(1, [1, 1, 2, 0, 0]);
    let q_inv = MPoly::var_pow(Var::Q, -1);
    let one_m_yp = &one - &yp;
    let one_m_ypq = &one - &ypq;

    for n in 2..=nmax.min(table.n()) {
        let prev = an_poly(table, n - 1);
        let at_one = prev.substitute(Var::Y, &one)?;
        let at_yp = prev.substitute(Var::Y, &yp)?;
        let at_qinv = prev.substitute(Var::Y, &q_inv)?;
        let lhs = &(&one_m_yp * &one_m_ypq) * &an_poly(table, n);
        let rhs = &(&(&ypq * &one_m_ypq) * &(&at_one - &at_yp))
            + &(&(&ypq2 * &one_m_yp) * &(&at_yp - &(&ypq.pow(n as u32) * &at_qinv)));
        if lhs != rhs {
            return Err(violation(
                "an_functional",
                n,
                format!("lhs - rhs = {}", &lhs - &rhs),
            ));
        }
    }
    Ok(())
}

pub fn check_an_functional(nmax: usize) -> Result<(), RecurError> {
    check_an_functional_on(&a_table_lemma(nmax), nmax)
}

/// `b_{n,i}` from the penultimate-letter recurrence, starting at `b_{1,1} = 1`.
pub fn b_table_lemma(n: usize) -> DistTable {
    let p = MPoly::var(Var::P);
    let q = MPoly::var(Var::Q);
    let r = MPoly::var(Var::R);
    let mut rows = vec![vec![MPoly::one()]];
    for m in 2..=n {
        let prev = &rows[m - 2];
        let mut row = Vec::with_capacity(m);
        for i in 1..m {
            let above: MPoly = prev[i..].iter().sum();
            let below: MPoly = prev[..i - 1].iter().sum();
            row.push(&(&(&p * &prev[i - 1]) + &(&q * &above)) + &(&r * &below));
        }
        let total: MPoly = prev.iter().sum();
        row.push(&r * &total);
        rows.push(row);
    }
    DistTable::from_rows(rows)
}

/// `b_{n,i}` from the three-term recurrence in `i`.
pub fn b_table_threeterm(n: usize) -> DistTable {
    let p = MPoly::var(Var::P);
    let q = MPoly::var(Var::Q);
    let r = MPoly::var(Var::R);
    let p_m_q = &p - &q;
    let r_m_p = &r - &p;
    let mut rows = vec![vec![MPoly::one()]];
    for m in 2..=n {
        let prev = &rows[m - 2];
        let total: MPoly = prev.iter().sum();
        let mut row = Vec::with_capacity(m);
        row.push(&(&p_m_q * &prev[0]) + &(&q * &total));
        for i in 2..m {
            let v = &(&row[i - 2] + &(&p_m_q * &prev[i - 1])) + &(&r_m_p * &prev[i - 2]);
            row.push(v);
        }
        row.push(&r * &total);
        rows.push(row);
    }
    DistTable::from_rows(rows)
}

/// Exact quotient `poly / (1 − v)`, or `None` when the remainder is nonzero.
pub fn div_one_minus(poly: &MPoly, v: Var) -> Option<MPoly> {
    let groups = poly.collect_in(v);
    let (Some(&lo), Some(&hi)) = (groups.keys().next(), groups.keys().next_back()) else {
        return Some(MPoly::zero());
    };
    // (1 − v) Σ Q_k v^k = N  ⇒  Q_k = Σ_{m ≤ k} N_m
    let mut running = MPoly::zero();
    let mut out = MPoly::zero();
    for k in lo..=hi {
        if let Some(c) = groups.get(&k) {
            running += c;
        }
        if k < hi {
            out += &(&running * &MPoly::var_pow(v, k));
        }
    }
    running.is_zero().then_some(out)
}

/// `b_n(y)` for `1 ≤ n ≤ nmax` directly from the row recurrence
/// `(1−y) b_n(y) = (p(1−y) + yr − q) b_{n−1}(y) + y(q − y^n r) b_{n−1}(1)`.
pub fn bn_poly_recurrence(nmax: usize) -> Result<Vec<MPoly>, RecurError> {
    let y = MPoly::var(Var::Y);
    let p = MPoly::var(Var::P);
    let q = MPoly::var(Var::Q);
    let r = MPoly::var(Var::R);
    let one = MPoly::one();
    let factor = &(&(&p * &(&one - &y)) + &(&y * &r)) - &q;

    let mut out = vec![y.clone()];
    for n in 2..=nmax {
        let prev = &out[n - 2];
        let at_one = prev.substitute(Var::Y, &one)?;
        let tail = &y * &(&q - &(&MPoly::var_pow(Var::Y, n as i32) * &r));
        let num = &(&factor * prev) + &(&tail * &at_one);
        let quot = div_one_minus(&num, Var::Y).ok_or(RecurError::NonDivisible(n))?;
        out.push(quot);
    }
    out.truncate(nmax);
    Ok(out)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, j| acc * (n - j) / (j + 1))
}

/// `n! · H_n = Σ_{i=1}^n n!/i`, kept as an exact integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicInteger {
    pub n: usize,
    pub value: BigInt,
}

impl HarmonicInteger {
    pub fn new(n: usize) -> Self {
        let f = factorial(n);
        let value = (1..=n).map(|i| &f / i).sum();
        Self { n, value }
    }
}

pub fn total_area(n: usize) -> BigInt {
    let v: BigInt = factorial(n) * (binomial(n + 2, 2) - 1);
    debug_assert!(v.is_even());
    v / 2
}

pub fn total_sper(n: usize) -> BigInt {
    let v = factorial(n) * BigInt::from(n * n + 15 * n + 8);
    debug_assert!((&v % 12u32).is_zero());
    v / 12
}

pub fn total_levels(n: usize) -> BigInt {
    HarmonicInteger::new(n).value - factorial(n)
}

pub fn total_descents(n: usize) -> BigInt {
    factorial(n + 1) / 2 - HarmonicInteger::new(n).value
}

pub fn total_ascents(n: usize) -> BigInt {
    let v = factorial(n) * BigInt::from(n.saturating_sub(1));
    debug_assert!(v.is_even());
    v / 2
}

/// Signless Stirling numbers of the first kind `c(n, 1..=n)`.
pub fn stirling_first_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()]; // c(0,0)
    for m in 1..=n {
        let mut next = vec![BigInt::zero()];
        next.extend((1..=m).map(|k| {
            let mut v = row.get(k - 1).cloned().unwrap_or_default();
            if let Some(c) = row.get(k) {
                v += c * (m - 1);
            }
            v
        }));
        row = next;
    }
    row.into_iter().skip(1).collect()
}

pub fn stirling_first(n: usize, k: usize) -> Result<BigInt, RecurError> {
    if k < 1 || k > n {
        return Err(RecurError::IndexOutOfRange { n, k });
    }
    Ok(stirling_first_row(n)[k - 1].clone())
}

/// Eulerian numbers `e(n, 0..n)`, `n ≥ 1`.
pub fn eulerian_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()]; // e(1,0)
    for m in 2..=n {
        let next = (0..m)
            .map(|k| {
                let keep = row.get(k).map(|c| c * (k + 1)).unwrap_or_default();
                let shift = if k > 0 {
                    &row[k - 1] * (m - k)
                } else {
                    BigInt::zero()
                };
                keep + shift
            })
            .collect();
        row = next;
    }
    row
}

pub fn eulerian(n: usize, k: usize) -> Result<BigInt, RecurError> {
    if n < 1 || k >= n {
        return Err(RecurError::IndexOutOfRange { n, k });
    }
    Ok(eulerian_row(n)[k].clone())
}

/// `Σ_k coeffs[k] · t^k`.
pub fn t_poly(coeffs: &[BigInt]) -> MPoly {
    MPoly::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (c.clone(), [0, 0, 0, 0, k as i32])),
    )
}

/// Substitute `y → 1` and each of `p, q, r` by `t` (when `true`) or `1`.
fn specialize_at_one(poly: &MPoly, marks: [bool; 3]) -> Result<MPoly, PolyError> {
    let t = MPoly::var(Var::T);
    let one = MPoly::one();
    let pick = |m: bool| if m { t.clone() } else { one.clone() };
    poly.substitute_all(&[
        (Var::Y, one.clone()),
        (Var::P, pick(marks[0])),
        (Var::Q, pick(marks[1])),
        (Var::R, pick(marks[2])),
    ])
}

/// `b_n(1;t,1,1) = Σ c(n,k+1) t^k` and `b_n(1;1,1,t) = b_n(1;t,t,1) = Σ e(n,k) t^k`.
pub fn check_stirling_eulerian_on(b: &DistTable, nmax: usize) -> Result<(), RecurError> {
    for n in 1..=nmax.min(b.n()) {
        let bn = b.row_poly(n);
        let levels = specialize_at_one(&bn, [true, false, false])?;
        let stirling = t_poly(&stirling_first_row(n));
        if levels != stirling {
            return Err(violation("stirling_levels", n, format!("{levels} != {stirling}")));
        }
        let ascents = specialize_at_one(&bn, [false, false, true])?;
        let euler = t_poly(&eulerian_row(n));
        if ascents != euler {
            return Err(violation("eulerian_ascents", n, format!("{ascents} != {euler}")));
        }
        let lev_des = specialize_at_one(&bn, [true, true, false])?;
        if lev_des != ascents {
            return Err(violation(
                "eulerian_levels_descents",
                n,
                format!("{lev_des} != {ascents}"),
            ));
        }
    }
    Ok(())
}

pub fn check_stirling_eulerian(nmax: usize) -> Result<(), RecurError> {
    check_stirling_eulerian_on(&b_table_lemma(nmax), nmax)
}

/// `2^{n−2} y^{n−1} (y − 1)`.
pub fn a_sign_balance_q(n: usize) -> MPoly {
    let c = BigInt::one() << (n - 2);
    let y_minus_one = &MPoly::var(Var::Y) - &MPoly::one();
    &MPoly::monomial(c, [n as i32 - 1, 0, 0, 0, 0]) * &y_minus_one
}

/// `(−1)^n 2^{n−2} t^{n−1} (y − 1) y`.
pub fn b_sign_balance(n: usize) -> MPoly {
    let mut c = BigInt::one() << (n - 2);
    if n % 2 == 1 {
        c = -c;
    }
    let t = MPoly::monomial(c, [0, 0, 0, 0, n as i32 - 1]);
    &t * &"-y+y^2".parse::<MPoly>().expect("literal")
}

/// Evaluates `a_n(y;−1,1)`, `a_n(y;1,−1)` for `3 ≤ n ≤ nmax` and
/// `b_n(y;−t,t,t)` for `2 ≤ n ≤ nmax` against their closed forms.
pub fn check_sign_balance_on(a: &DistTable, b: &DistTable, nmax: usize) -> Result<(), RecurError> {
    let one = MPoly::one();
    let neg_one = MPoly::constant(-1);
    let t = MPoly::var(Var::T);
    for n in 3..=nmax.min(a.n()) {
        let an = a.row_poly(n);
        let at_p = an.substitute_all(&[(Var::P, neg_one.clone()), (Var::Q, one.clone())])?;
        if !at_p.is_zero() {
            return Err(violation("a_sign_balance_p", n, format!("a_n(y;-1,1) = {at_p}")));
        }
        let at_q = an.substitute_all(&[(Var::P, one.clone()), (Var::Q, neg_one.clone())])?;
        let want = a_sign_balance_q(n);
        if at_q != want {
            return Err(violation("a_sign_balance_q", n, format!("{at_q} != {want}")));
        }
    }
    for n in 2..=nmax.min(b.n()) {
        let bn = b.row_poly(n);
        let got = bn.substitute_all(&[(Var::P, -&t), (Var::Q, t.clone()), (Var::R, t.clone())])?;
        let want = b_sign_balance(n);
        if got != want {
            return Err(violation("b_sign_balance", n, format!("{got} != {want}")));
        }
    }
    Ok(())
}

pub fn check_sign_balance(nmax: usize) -> Result<(), RecurError> {
    check_sign_balance_on(&a_table_lemma(nmax), &b_table_lemma(nmax), nmax)
}

/// Total of the statistic marked by `v` over all of row `m`.
pub fn row_marker_total(table: &DistTable, m: usize, v: Var) -> BigInt {
    table.row(m).iter().map(|c| c.weighted_coeff_sum(v)).sum()
}

/// Debug rendering of a table, one cell per line.
pub fn render_table(table: &DistTable) -> String {
    let mut s = String::new();
    for m in 1..=table.n() {
        for i in 1..=m {
            let _ = writeln!(s, "({m},{i}) {}", table.get(m, i));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invseq::{brute_dist_area_sper, brute_dist_lda};

    fn poly(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn a_lemma_examples() {
        let a = a_table_lemma(3);
        assert_eq!(a.get(1, 1), &poly("p*q^2"));
        assert_eq!(a.get(2, 2), &poly("p^3*q^4"));
        assert_eq!(a.get(3, 1), &poly("p^3*q^4+p^4*q^5"));
        assert_eq!(a.get(3, 2), &poly("p^4*q^5+p^5*q^5"));
        assert_eq!(a.get(3, 3), &poly("p^5*q^6+p^6*q^6"));
    }

    #[test]
    fn a_threeterm_examples() {
        let a = a_table_threeterm(3);
        assert_eq!(a.get(2, 1), &poly("p^2*q^3"));
        assert_eq!(a.get(3, 3), &poly("p^5*q^6+p^6*q^6"));
    }

    #[test]
    fn an_poly_examples() {
        let a = a_table_lemma(3);
        assert_eq!(an_poly(&a, 1), poly("y*p*q^2"));
        assert_eq!(an_poly(&a, 2), poly("y*p^2*q^3+y^2*p^3*q^4"));
        let a3 = poly("y*p^3*q^4") * poly("1+p*q")
            + poly("y^2*p^4*q^5") * poly("1+p")
            + poly("y^3*p^5*q^6") * poly("1+p");
        assert_eq!(an_poly(&a, 3), a3);
    }

    #[test]
    fn a_engines_agree_with_brute() {
        let brute = brute_dist_area_sper(7);
        assert_eq!(a_table_lemma(7), brute);
        assert_eq!(a_table_threeterm(7), brute);
    }

    #[test]
    fn b_engines_agree_with_brute() {
        let brute = brute_dist_lda(7);
        assert_eq!(b_table_lemma(7), brute);
        assert_eq!(b_table_threeterm(7), brute);
        let b = b_table_lemma(3);
        assert_eq!(b.get(2, 2), &poly("r"));
        assert_eq!(b.get(3, 1), &poly("p^2+q*r"));
        let b3 = b_table_threeterm(3);
        assert_eq!(b3.get(3, 2), &poly("2*p*r"));
        assert_eq!(b3.get(3, 3), &poly("p*r+r^2"));
    }

    #[test]
    fn bn_rows() {
        let rows = bn_poly_recurrence(7).unwrap();
        assert_eq!(rows[0], poly("y"));
        assert_eq!(rows[1], poly("y*p+y^2*r"));
        assert_eq!(rows[2], poly("y*q*r+y*p^2+2*y^2*p*r+y^3*p*r+y^3*r^2"));
        let b = b_table_lemma(7);
        for n in 1..=7 {
            assert_eq!(rows[n - 1], b.row_poly(n), "n = {n}");
        }
    }

    #[test]
    fn division_by_one_minus_y() {
        let f = poly("1+p*y+y^3*q");
        let prod = &f * &poly("1-y");
        assert_eq!(div_one_minus(&prod, Var::Y).unwrap(), f);
        assert!(div_one_minus(&poly("1+y"), Var::Y).is_none());
        assert_eq!(div_one_minus(&MPoly::zero(), Var::Y).unwrap(), MPoly::zero());
        // Laurent input
        let g = poly("y^-2+p");
        assert_eq!(div_one_minus(&(&g * &poly("1-y")), Var::Y).unwrap(), g);
    }

    #[test]
    fn an_functional_holds() {
        check_an_functional(6).unwrap();
    }

    #[test]
    fn an_functional_detects_corruption() {
        let mut a = a_table_lemma(4);
        a.set(3, 2, poly("p^4*q^5"));
        let err = check_an_functional_on(&a, 4).unwrap_err();
        assert!(matches!(err, RecurError::IdentityViolation { n: 3, .. }));
    }

    #[test]
    fn small_totals() {
        assert_eq!(total_area(2), 5.into());
        assert_eq!(total_sper(2), 7.into());
        assert_eq!(total_area(3), 27.into());
        assert_eq!(total_sper(3), 31.into());
        assert_eq!(total_area(1), 1.into());
        assert_eq!(total_sper(1), 2.into());
        let lda = |n| (total_levels(n), total_descents(n), total_ascents(n));
        assert_eq!(lda(3), (5.into(), 1.into(), 6.into()));
        assert_eq!(lda(4), (26.into(), 10.into(), 36.into()));
        assert_eq!(lda(1), (0.into(), 0.into(), 0.into()));
    }

    #[test]
    fn harmonic_integer() {
        // 4! H_4 = 24 + 12 + 8 + 6
        assert_eq!(HarmonicInteger::new(4).value, 50.into());
        assert_eq!(HarmonicInteger::new(1).value, 1.into());
    }

    #[test]
    fn stirling_and_eulerian_rows() {
        let c3: Vec<BigInt> = (1..=3).map(|k| stirling_first(3, k).unwrap()).collect();
        assert_eq!(c3, vec![2.into(), 3.into(), 1.into()]);
        let e3: Vec<BigInt> = (0..3).map(|k| eulerian(3, k).unwrap()).collect();
        assert_eq!(e3, vec![1.into(), 4.into(), 1.into()]);
        for n in 1..8 {
            assert_eq!(stirling_first(n, n).unwrap(), BigInt::one());
        }
        assert!(stirling_first(3, 0).is_err());
        assert!(stirling_first(3, 4).is_err());
        assert!(eulerian(3, 3).is_err());
        assert!(eulerian(0, 0).is_err());
    }

    #[test]
    fn stirling_eulerian_identities() {
        check_stirling_eulerian(7).unwrap();
        let b3 = b_table_lemma(3).row_poly(3);
        let lev = specialize_at_one(&b3, [true, false, false]).unwrap();
        assert_eq!(lev, poly("2+3*t+t^2"));
        let asc = specialize_at_one(&b3, [false, false, true]).unwrap();
        assert_eq!(asc, poly("1+4*t+t^2"));
        let b1 = b_table_lemma(1).row_poly(1);
        assert_eq!(
            specialize_at_one(&b1, [true, false, false]).unwrap(),
            MPoly::one()
        );
    }

    #[test]
    fn sign_balance_examples() {
        let a = a_table_lemma(3);
        let a3 = a.row_poly(3);
        let one = MPoly::one();
        let m1 = MPoly::constant(-1);
        let q_neg = a3
            .substitute_all(&[(Var::P, one.clone()), (Var::Q, m1.clone())])
            .unwrap();
        assert_eq!(q_neg, poly("2*y^3-2*y^2"));
        let p_neg = a3
            .substitute_all(&[(Var::P, m1.clone()), (Var::Q, one.clone())])
            .unwrap();
        assert!(p_neg.is_zero());

        let t = MPoly::var(Var::T);
        let b2 = b_table_lemma(2).row_poly(2);
        let got = b2
            .substitute_all(&[(Var::P, -&t), (Var::Q, t.clone()), (Var::R, t.clone())])
            .unwrap();
        assert_eq!(got, poly("t*y^2-t*y"));
        check_sign_balance(7).unwrap();
    }

    #[test]
    fn sign_balance_range_starts_at_three() {
        // a_2(y;−1,1) = y − y² is not zero, which is why the a-identities start at n = 3.
        let a2 = a_table_lemma(2).row_poly(2);
        let p_neg = a2
            .substitute_all(&[(Var::P, MPoly::constant(-1)), (Var::Q, MPoly::one())])
            .unwrap();
        assert_eq!(p_neg, poly("y-y^2"));
        // a_2(y;1,−1) happens to match the closed form already.
        let q_neg = a2
            .substitute_all(&[(Var::P, MPoly::one()), (Var::Q, MPoly::constant(-1))])
            .unwrap();
        assert_eq!(q_neg, a_sign_balance_q(2));
    }

    #[test]
    fn csv_and_json_round_trip() {
        let a = a_table_lemma(4);
        let csv = a.to_csv();
        assert!(csv.starts_with("n,i,poly\n1,1,p*q^2\n"));
        assert_eq!(DistTable::from_csv(&csv).unwrap(), a);
        assert_eq!(DistTable::from_json(&a.to_json()).unwrap(), a);
        assert!(DistTable::from_csv("n,i,poly\n2,1,p\n").is_err());
        assert!(DistTable::from_csv("n,i,poly\n1,2,p\n").is_err());
    }
}
