//! Runs the identity suites and collects one [`CheckRecord`] per check.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::bijections::{
    area_flip, ascent_count, complement, f_inverse, f_levels_to_cycles, g_ascents, g_inverse,
    levels_involution, sper_involution,
};
use crate::gfseries::{self, format_rational, rat, Rational, TotalGf};
use crate::invseq::{
    brute_dist_area_sper, brute_dist_lda, enumerate, from_permutation, stats, to_permutation,
    InversionSequence, Permutation, StatRecord,
};
use crate::mpoly::{MPoly, Var};
use crate::recur::{self, factorial, DistTable};

pub const DEFAULT_SEED: u64 = 0x1A2B_3C4D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub formula_id: String,
    pub n_range: [usize; 2],
    pub parameter_point: BTreeMap<String, String>,
    pub status: Status,
    pub first_mismatch: Option<String>,
}

impl CheckRecord {
    fn new<E: fmt::Display>(
        id: &str,
        n_range: [usize; 2],
        point: &[(&str, &Rational)],
        r: Result<(), E>,
    ) -> Self {
        let (status, first_mismatch) = match r {
            Ok(()) => (Status::Pass, None),
            Err(e) => (Status::Fail, Some(e.to_string())),
        };
        Self {
            formula_id: id.to_string(),
            n_range,
            parameter_point: point
                .iter()
                .map(|(k, v)| (k.to_string(), format_rational(v)))
                .collect(),
            status,
            first_mismatch,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Recurrences,
    Totals,
    SignBalance,
    Bijections,
    Gf,
}

impl Suite {
    const PARTS: [Suite; 5] = [
        Suite::Recurrences,
        Suite::Totals,
        Suite::SignBalance,
        Suite::Bijections,
        Suite::Gf,
    ];

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::PARTS.to_vec(),
            s => vec![s],
        }
    }
}

/// A user-supplied generating-function point, checked in addition to the
/// built-in ones.
#[derive(Debug, Clone, Default)]
pub struct GfPoint {
    pub p: Option<Rational>,
    pub q: Option<Rational>,
    pub r: Option<Rational>,
    pub y: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub nmax: usize,
    pub order: usize,
    pub seed: u64,
    pub point: GfPoint,
    /// Perturb one cell of the area/semi-perimeter table before checking.
    pub corrupt: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            nmax: 7,
            order: 8,
            seed: DEFAULT_SEED,
            point: GfPoint::default(),
            corrupt: false,
        }
    }
}

struct Tables {
    a: DistTable,
    b: DistTable,
    nmax: usize,
}

impl Tables {
    fn build(opts: &VerifyOptions) -> Self {
        let size = opts.nmax.max(opts.order).max(1);
        let (mut a, b) = rayon::join(|| recur::a_table_lemma(size), || recur::b_table_lemma(size));
        if opts.corrupt {
            let m = size.min(3);
            let bumped = a.get(m, 1) + &MPoly::var(Var::P);
            a.set(m, 1, bumped);
        }
        Self {
            a,
            b,
            nmax: opts.nmax,
        }
    }
}

pub fn run(opts: &VerifyOptions) -> Vec<CheckRecord> {
    let tables = Tables::build(opts);
    opts.suite
        .parts()
        .into_par_iter()
        .map(|s| match s {
            Suite::Recurrences => recurrences(&tables),
            Suite::Totals => totals(&tables),
            Suite::SignBalance => sign_balance(&tables),
            Suite::Bijections => bijections(&tables),
            Suite::Gf => gf(&tables, opts),
            Suite::All => unreachable!(),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn all_passed(records: &[CheckRecord]) -> bool {
    records.iter().all(CheckRecord::passed)
}

fn table_match(name: &str, got: &DistTable, want: &DistTable) -> Result<(), String> {
    match got.first_mismatch(want) {
        None => Ok(()),
        Some((m, i)) if m <= got.n() && m <= want.n() => Err(format!(
            "{name}: cell ({m},{i}) is {} but expected {}",
            got.get(m, i),
            want.get(m, i)
        )),
        Some((m, _)) => Err(format!("{name}: row {m} missing")),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn recurrences(t: &Tables) -> Vec<CheckRecord> {
    let n = t.nmax;
    let a = t.a.truncated(n);
    let b = t.b.truncated(n);
    let (a_brute, b_brute) = rayon::join(|| brute_dist_area_sper(n), || brute_dist_lda(n));
    let mut out = vec![
        CheckRecord::new(
            "a_lemma_vs_brute",
            [1, n],
            &[],
            table_match("a_lemma", &a, &a_brute),
        ),
        CheckRecord::new(
            "a_threeterm_vs_lemma",
            [1, n],
            &[],
            table_match("a_threeterm", &recur::a_table_threeterm(n), &a),
        ),
        CheckRecord::new(
            "b_lemma_vs_brute",
            [1, n],
            &[],
            table_match("b_lemma", &b, &b_brute),
        ),
        CheckRecord::new(
            "b_threeterm_vs_lemma",
            [1, n],
            &[],
            table_match("b_threeterm", &recur::b_table_threeterm(n), &b),
        ),
    ];
    let bn = recur::bn_poly_recurrence(n)
        .map_err(|e| e.to_string())
        .and_then(|rows| {
            (1..=n).try_for_each(|m| {
                ensure(rows[m - 1] == b.row_poly(m), || {
                    format!("b_{m}(y) differs from the row polynomial")
                })
            })
        });
    out.push(CheckRecord::new("bn_poly_recurrence", [1, n], &[], bn));
    out.push(CheckRecord::new(
        "an_functional",
        [2, n],
        &[],
        recur::check_an_functional_on(&a, n),
    ));
    let sums: Result<(), String> = (1..=n).try_for_each(|m| {
        let f = factorial(m);
        ensure(a.row_sum(m).coeff_sum() == f, || {
            format!("a-row {m} does not sum to {m}!")
        })?;
        ensure(b.row_sum(m).coeff_sum() == f, || {
            format!("b-row {m} does not sum to {m}!")
        })
    });
    out.push(CheckRecord::new("row_sums_factorial", [1, n], &[], sums));
    out
}

#[derive(Default, Clone)]
struct StatSums {
    area: BigInt,
    sper: BigInt,
    levels: BigInt,
    descents: BigInt,
    ascents: BigInt,
}

impl StatSums {
    fn add(&mut self, s: &StatRecord) {
        self.area += s.area;
        self.sper += s.sper;
        self.levels += s.levels;
        self.descents += s.descents;
        self.ascents += s.ascents;
    }
}

fn brute_sums(n: usize) -> StatSums {
    let mut acc = StatSums::default();
    for s in enumerate(n) {
        acc.add(&stats(&s));
    }
    acc
}

fn totals(t: &Tables) -> Vec<CheckRecord> {
    let n = t.nmax;
    let sums: Vec<StatSums> = (1..=n).into_par_iter().map(brute_sums).collect();
    let closed = |m: usize| {
        [
            ("area", recur::total_area(m)),
            ("sper", recur::total_sper(m)),
            ("levels", recur::total_levels(m)),
            ("descents", recur::total_descents(m)),
            ("ascents", recur::total_ascents(m)),
        ]
    };
    let brute: Result<(), String> = (1..=n).try_for_each(|m| {
        let s = &sums[m - 1];
        let got = [&s.area, &s.sper, &s.levels, &s.descents, &s.ascents];
        for ((name, want), got) in closed(m).iter().zip(got) {
            ensure(got == want, || {
                format!("n={m}: brute {name} total {got} != closed form {want}")
            })?;
        }
        Ok(())
    });
    let weighted: Result<(), String> = (1..=n).try_for_each(|m| {
        let got = [
            recur::row_marker_total(&t.a, m, Var::P),
            recur::row_marker_total(&t.a, m, Var::Q),
            recur::row_marker_total(&t.b, m, Var::P),
            recur::row_marker_total(&t.b, m, Var::Q),
            recur::row_marker_total(&t.b, m, Var::R),
        ];
        for ((name, want), got) in closed(m).iter().zip(got.iter()) {
            ensure(got == want, || {
                format!("n={m}: table {name} total {got} != closed form {want}")
            })?;
        }
        Ok(())
    });
    let consistency: Result<(), String> = (1..=n).try_for_each(|m| {
        let s = recur::total_levels(m) + recur::total_descents(m) + recur::total_ascents(m);
        let want = factorial(m) * BigInt::from(m - 1);
        ensure(s == want, || {
            format!("n={m}: levels+descents+ascents = {s}, expected {want}")
        })
    });
    vec![
        CheckRecord::new("totals_closed_vs_brute", [1, n], &[], brute),
        CheckRecord::new("totals_closed_vs_table", [1, n], &[], weighted),
        CheckRecord::new("totals_lda_consistency", [1, n], &[], consistency),
    ]
}

/// Exhaustive check that `map` is a fixed-point-free involution on its
/// domain over `I_n` that flips the parity of `stat`. Returns the members
/// outside the domain.
fn check_partial_involution<M, S>(n: usize, map: M, stat: S) -> Result<Vec<InversionSequence>, String>
where
    M: Fn(&InversionSequence) -> Option<InversionSequence>,
    S: Fn(&StatRecord) -> u64,
{
    let mut undefined = Vec::new();
    for s in enumerate(n) {
        let Some(t) = map(&s) else {
            undefined.push(s);
            continue;
        };
        ensure(t != s, || format!("{s} is a fixed point"))?;
        ensure(map(&t).as_ref() == Some(&s), || {
            format!("{s} -> {t} does not map back")
        })?;
        let (a, b) = (stat(&stats(&s)), stat(&stats(&t)));
        ensure(a % 2 != b % 2, || format!("{s} -> {t} keeps parity"))?;
    }
    Ok(undefined)
}

fn is_binary(s: &InversionSequence) -> bool {
    s.entries().iter().all(|&r| r <= 2)
}

fn sign_balance(t: &Tables) -> Vec<CheckRecord> {
    let n = t.nmax;
    let inv_max = n.min(7);
    let mut out = vec![CheckRecord::new(
        "sign_balance_polynomials",
        [2, n],
        &[],
        recur::check_sign_balance_on(&t.a, &t.b, n),
    )];

    let area: Result<(), String> = (2..=inv_max).try_for_each(|m| {
        for s in enumerate(m) {
            let f = area_flip(&s).map_err(|e| e.to_string())?;
            ensure(area_flip(&f).ok().as_ref() == Some(&s), || {
                format!("{s}: area flip is not an involution")
            })?;
            ensure(stats(&s).area.abs_diff(stats(&f).area) == 1, || {
                format!("{s}: area does not change by 1")
            })?;
            if m >= 3 {
                ensure(f.last() == s.last(), || format!("{s}: last letter changed"))?;
            }
        }
        Ok(())
    });
    out.push(CheckRecord::new("area_flip_involution", [2, inv_max], &[], area));

    let sper: Result<(), String> = (2..=inv_max).try_for_each(|m| {
        let undefined = check_partial_involution(m, sper_involution, |s| s.sper)?;
        for s in &undefined {
            let e = s.entries();
            ensure(e.windows(2).all(|w| w[0] <= w[1]), || {
                format!("{s} is undefined but not weakly increasing")
            })?;
            let last = s.last() as usize;
            let sp = stats(s).sper as usize;
            ensure(
                (last == m - 1 && sp == 2 * m - 1) || (last == m && sp == 2 * m),
                || format!("{s}: undefined member with last letter {last} and sper {sp}"),
            )?;
        }
        for last in [m - 1, m] {
            let count = undefined.iter().filter(|s| s.last() as usize == last).count();
            ensure(count == 1 << (m - 2), || {
                format!(
                    "n={m}: {count} undefined members end in {last}, expected {}",
                    1 << (m - 2)
                )
            })?;
        }
        Ok(())
    });
    out.push(CheckRecord::new("sper_involution", [2, inv_max], &[], sper));

    let levels: Result<(), String> = (2..=inv_max).try_for_each(|m| {
        let undefined = check_partial_involution(m, levels_involution, |s| s.levels as u64)?;
        for s in enumerate(m) {
            if let Some(t) = levels_involution(&s) {
                ensure(t.last() == s.last(), || format!("{s}: last letter changed"))?;
            }
        }
        ensure(undefined.iter().all(is_binary), || {
            "a non-binary member is undefined".to_string()
        })?;
        ensure(undefined.len() == 1 << (m - 1), || {
            format!(
                "n={m}: {} undefined members, expected all {} binary ones",
                undefined.len(),
                1 << (m - 1)
            )
        })?;
        for last in [1u32, 2] {
            let count = undefined.iter().filter(|s| s.last() == last).count();
            ensure(count == 1 << (m - 2), || {
                format!(
                    "n={m}: {count} binary members end in {last}, expected {}",
                    1 << (m - 2)
                )
            })?;
        }
        Ok(())
    });
    out.push(CheckRecord::new("levels_involution", [2, inv_max], &[], levels));
    out
}

fn parse_seq(s: &str) -> InversionSequence {
    s.parse().expect("literal sequence")
}

fn worked_examples() -> Result<(), String> {
    let s = stats(&parse_seq("1,2,1,3,5,3"));
    ensure((s.area, s.sper) == (15, 12), || format!("stats(121353) = {s:?}"))?;
    let p: Permutation = "5,2,4,6,1,3".parse().expect("literal permutation");
    let inv = from_permutation(&p);
    ensure(inv == parse_seq("1,2,1,3,5,3"), || {
        format!("from_permutation(524613) = {inv}")
    })?;
    let f = f_levels_to_cycles(&parse_seq("1,2,2,4,3,3,7,7")).to_string();
    ensure(f == "(1,2)(3,5,4)(6,7)(8)", || format!("f(12243377) = {f}"))?;
    let g = g_ascents(&parse_seq("1,2,1,4,2,4,7,3")).to_string();
    ensure(g == "4,6,1,7,2,5,8,3", || format!("g(12142473) = {g}"))
}

fn bijections(t: &Tables) -> Vec<CheckRecord> {
    let n = t.nmax;
    let small = n.min(7);
    let comp_max = n.min(8);
    let mut out = vec![CheckRecord::new(
        "worked_examples",
        [6, 8],
        &[],
        worked_examples(),
    )];

    let perm_rt: Result<(), String> = (1..=small).try_for_each(|m| {
        for s in enumerate(m) {
            ensure(from_permutation(&to_permutation(&s)) == s, || {
                format!("{s}: permutation round trip")
            })?;
        }
        Ok(())
    });
    out.push(CheckRecord::new(
        "inversion_table_round_trip",
        [1, small],
        &[],
        perm_rt,
    ));

    let comp: Result<(), String> = (1..=comp_max).try_for_each(|m| {
        for s in enumerate(m) {
            let c = complement(&s);
            ensure(complement(&c) == s, || {
                format!("{s}: complement is not an involution")
            })?;
            let (a, b) = (stats(&s), stats(&c));
            ensure(
                b.ascents == a.levels + a.descents && a.ascents == b.levels + b.descents,
                || format!("{s}: ascents do not transport to levels + descents"),
            )?;
        }
        Ok(())
    });
    out.push(CheckRecord::new("complement_transport", [1, comp_max], &[], comp));

    let f_check: Result<(), String> = (1..=small).try_for_each(|m| {
        let mut by_cycles = vec![BigInt::zero(); m];
        let mut seen = std::collections::HashSet::new();
        for s in enumerate(m) {
            let c = f_levels_to_cycles(&s);
            ensure(c.cycle_count() == stats(&s).levels as usize + 1, || {
                format!("{s}: cycle count")
            })?;
            ensure(f_inverse(&c) == s, || format!("{s}: f_inverse(f) differs"))?;
            by_cycles[c.cycle_count() - 1] += 1;
            ensure(seen.insert(c), || format!("{s}: f is not injective"))?;
        }
        ensure(by_cycles == recur::stirling_first_row(m), || {
            format!("n={m}: image cycle counts are not Stirling")
        })
    });
    out.push(CheckRecord::new("f_bijection_stirling", [1, small], &[], f_check));

    let g_check: Result<(), String> = (1..=small).try_for_each(|m| {
        let mut by_ascents = vec![BigInt::zero(); m];
        let mut seen = std::collections::HashSet::new();
        for s in enumerate(m) {
            let p = g_ascents(&s);
            let k = ascent_count(&p);
            ensure(k == stats(&s).ascents as usize, || format!("{s}: ascent count"))?;
            ensure(g_inverse(&p) == s, || format!("{s}: g_inverse(g) differs"))?;
            by_ascents[k] += 1;
            ensure(seen.insert(p), || format!("{s}: g is not injective"))?;
        }
        ensure(by_ascents == recur::eulerian_row(m), || {
            format!("n={m}: image ascent counts are not Eulerian")
        })
    });
    out.push(CheckRecord::new("g_bijection_eulerian", [1, small], &[], g_check));

    out.push(CheckRecord::new(
        "stirling_eulerian_polynomials",
        [1, n],
        &[],
        recur::check_stirling_eulerian_on(&t.b, n),
    ));
    out
}

fn random_rational(rng: &mut StdRng) -> Rational {
    let num: i64 = rng.gen_range(-4..=4);
    let den: i64 = rng.gen_range(1..=5);
    rat(num, den)
}

fn random_where(rng: &mut StdRng, ok: impl Fn(&Rational) -> bool) -> Rational {
    loop {
        let r = random_rational(rng);
        if ok(&r) {
            return r;
        }
    }
}

fn gf(t: &Tables, opts: &VerifyOptions) -> Vec<CheckRecord> {
    let order = opts.order;
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let one = Rational::one();
    let mut out = Vec::new();

    let mut p_points = vec![rat(1, 2), rat(-1, 2), rat(0, 1), rat(2, 3), rat(-3, 1)];
    for _ in 0..3 {
        p_points.push(random_where(&mut rng, |p| !p.is_one()));
    }
    if let Some(p) = &opts.point.p {
        p_points.push(p.clone());
    }
    for p in &p_points {
        out.push(CheckRecord::new(
            "A_functional",
            [1, order],
            &[("p", p)],
            gfseries::check_a_functional_on(&t.a, p, order),
        ));
    }

    let mut py_points = vec![
        (rat(1, 2), rat(1, 3)),
        (rat(-1, 2), rat(2, 1)),
        (rat(1, 3), rat(-3, 4)),
        (rat(2, 3), rat(5, 2)),
        (rat(-2, 1), rat(1, 5)),
    ];
    for _ in 0..3 {
        let p = random_where(&mut rng, |p| !p.is_one());
        let y = random_where(&mut rng, |y| !(y * &p).is_one());
        py_points.push((p, y));
    }
    if opts.point.p.is_some() || opts.point.y.is_some() {
        let p = opts.point.p.clone().unwrap_or_else(|| rat(1, 2));
        let y = opts.point.y.clone().unwrap_or_else(|| rat(1, 3));
        py_points.push((p, y));
    }
    for (p, y) in &py_points {
        out.push(CheckRecord::new(
            "A_closed",
            [1, order],
            &[("p", p), ("y", y)],
            gfseries::check_a_closed_on(&t.a, p, y, order),
        ));
    }

    let mut triples = vec![
        (one.clone(), one.clone(), one.clone()),
        (rat(1, 3), rat(1, 2), rat(1, 5)),
        (rat(0, 1), one.clone(), one.clone()),
        (rat(-2, 3), rat(3, 4), rat(5, 2)),
        (rat(2, 1), rat(-1, 3), rat(1, 4)),
    ];
    for _ in 0..3 {
        let p = random_rational(&mut rng);
        let q = random_where(&mut rng, |q| !q.is_zero());
        let r = random_rational(&mut rng);
        triples.push((p, q, r));
    }
    if opts.point.p.is_some() || opts.point.q.is_some() || opts.point.r.is_some() {
        let p = opts.point.p.clone().unwrap_or_else(|| one.clone());
        let q = opts.point.q.clone().unwrap_or_else(|| one.clone());
        let r = opts.point.r.clone().unwrap_or_else(|| one.clone());
        triples.push((p, q, r));
    }
    for (p, q, r) in &triples {
        out.push(CheckRecord::new(
            "B_functional",
            [1, order],
            &[("p", p), ("q", q), ("r", r)],
            gfseries::check_b_functional_on(&t.b, p, q, r, order),
        ));
    }

    let mut ys = vec![rat(1, 2), rat(2, 1), rat(-1, 3)];
    if let Some(y) = opts.point.y.as_ref().filter(|y| !y.is_one()) {
        ys.push(y.clone());
    }
    for y in &ys {
        for which in TotalGf::ALL {
            out.push(CheckRecord::new(
                which.id(),
                [1, order],
                &[("y", y)],
                gfseries::expand_total_gfs_on(&t.a, &t.b, which, y, order),
            ));
        }
    }

    out.push(CheckRecord::new(
        "egf_pq1",
        [1, order],
        &[],
        gfseries::check_egf_pq1_on(&t.a, order),
    ));
    out
}
