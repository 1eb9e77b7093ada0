//! Subcommand implementations. Each returns its full output as text so the
//! caller can cache it and print it unchanged.

use std::collections::BTreeMap;
use std::fmt::Write;

use clap::{Args, ValueEnum};
use serde_json::json;

use qcluster::ccmap::{CcContext, TheoremReport};
use qcluster::rank2basis::{Policy, Rank2Family};
use qcluster::repbrute::counts::{epsilon_row, epsilon_sum_check, green_check};
use qcluster::repbrute::descr::{injective, modules_up_to, Descriptor};
use qcluster::repbrute::iso::{ClassId, HallTable};
use qcluster::repbrute::sub::{gr_count, sub_dims};
use qcluster::repbrute::Species;
use qcluster::seedkit::{rank2_vars, QuantumSeed};
use qcluster::speckit::{corollary2_check, lemma1_check};
use qcluster::{Error, Exec, Result, SkewForm};

use crate::input::{matrix, vector, QuiverInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub text: String,
    /// Report of the failing instances, written to `--out`.
    pub artifact: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { status: Status::Ok, text, artifact: None }
    }

    fn checked(passed: bool, text: String, failures: serde_json::Value) -> Self {
        if passed {
            Self::ok(text)
        } else {
            Self { status: Status::Failed, text, artifact: Some(pretty(&failures)) }
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

/// Options shared by the commands that act on one quiver.
#[derive(Args, Clone, Debug)]
pub struct QuiverArgs {
    /// Preset (`a2`, `b2`, `g2`, `kronecker`) or path to a quiver file.
    #[arg(long, default_value = "a2")]
    pub quiver: String,
    /// Skew form overriding the configured one, e.g. `[[0,1],[-1,0]]`.
    #[arg(long)]
    pub lambda: Option<String>,
}

impl QuiverArgs {
    pub fn resolve(&self) -> Result<QuiverInput> {
        QuiverInput::resolve(&self.quiver, self.lambda.as_deref())
    }
}

fn context(input: &QuiverInput, exec: Exec) -> Result<CcContext> {
    CcContext::new(input.quiver.clone(), input.lambda()?, exec)
}

#[derive(Args, Clone, Debug)]
pub struct MutateArgs {
    /// Exchange matrix `B̃` (rows are all vertices, columns the mutable ones).
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    /// Take `B̃` and `Λ` from this quiver when `--b` is absent.
    #[arg(long)]
    pub quiver: Option<String>,
    /// Mutation directions, 1-based, applied left to right.
    #[arg(long, default_value = "")]
    pub dirs: String,
}

pub fn seed_mutate(a: &MutateArgs, as_json: bool) -> Result<Outcome> {
    let (b, lambda) = match (&a.b, &a.quiver) {
        (Some(b), _) => {
            let l = a.lambda.as_deref().ok_or_else(|| Error::Parse("--b needs --lambda".into()))?;
            (matrix(b)?, SkewForm::new(matrix(l)?)?)
        }
        (None, Some(q)) => {
            let input = QuiverInput::resolve(q, a.lambda.as_deref())?;
            (input.quiver.b_tilde().clone(), input.lambda()?)
        }
        (None, None) => return Err(Error::Parse("give --b and --lambda, or --quiver".into())),
    };
    let dirs: Vec<usize> = vector(&a.dirs)?;
    let seed = QuantumSeed::initial(lambda, b)?.mutate_along(&dirs)?;
    if as_json {
        return Ok(Outcome::ok(pretty(&seed)));
    }
    let mut s = String::new();
    let _ = writeln!(s, "directions: {dirs:?}");
    let _ = writeln!(s, "B = {:?}", seed.exchange_matrix());
    for (i, x) in seed.vars().iter().enumerate() {
        let _ = writeln!(s, "X{} = {x}", i + 1);
    }
    Ok(Outcome::ok(s))
}

pub fn rank2_vars_cmd(b: u32, c: u32, from: i64, to: i64, as_json: bool) -> Result<Outcome> {
    let lo = from.min(1);
    let hi = to.max(2);
    let vars: Vec<_> = rank2_vars(b, c, lo, hi)?.into_iter().filter(|(k, _)| (from..=to).contains(k)).collect();
    if as_json {
        let rows: Vec<_> = vars.iter().map(|(k, x)| json!({ "index": k, "value": x })).collect();
        return Ok(Outcome::ok(pretty(&rows)));
    }
    let mut s = String::new();
    for (k, x) in vars {
        let _ = writeln!(s, "X{k} = {x}");
    }
    Ok(Outcome::ok(s))
}

#[derive(Args, Clone, Debug)]
pub struct CharArgs {
    #[command(flatten)]
    pub quiver: QuiverArgs,
    /// Module: `0`, a dimension vector such as `1,1` (the rigid module), or
    /// names of built-in indecomposables joined by `+`.
    #[arg(long, default_value = "0")]
    pub dim: String,
    /// Injective whose shift is added, in the same syntax as `--dim`.
    #[arg(long)]
    pub inj: Option<String>,
}

pub fn cc_char(a: &CharArgs, exec: Exec, as_json: bool) -> Result<Outcome> {
    let input = a.quiver.resolve()?;
    let ctx = context(&input, exec)?;
    let m = input.module(&a.dim)?;
    let inj = a.inj.as_deref().map(|s| input.module(s)).transpose()?;
    let x = ctx.cc_object(&m, inj.as_ref())?;
    if as_json {
        return Ok(Outcome::ok(pretty(&x)));
    }
    let name = match &inj {
        Some(i) => format!("{m} + {i}[-1]"),
        None => m.to_string(),
    };
    Ok(Outcome::ok(format!("X[{name}] = {}\n", x.value)))
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub quiver: QuiverArgs,
    /// Componentwise bound: on `dim M + dim N` for `thm1`, on `dim M` for
    /// `thm2` and `green`, on the grid of vectors for `lemma1` and `cor2`.
    #[arg(long, default_value = "1,1")]
    pub dmax: String,
    /// Field sizes. `thm1`/`thm2` compare numerically at these instead of
    /// interpolating; `green` runs at each (default 2).
    #[arg(long)]
    pub samples: Option<String>,
}

impl VerifyArgs {
    fn dmax(&self, n: usize) -> Result<Vec<usize>> {
        let d: Vec<usize> = vector(&self.dmax)?;
        if d.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: d.len() });
        }
        Ok(d)
    }

    fn samples(&self) -> Result<Option<Vec<u32>>> {
        let Some(s) = &self.samples else { return Ok(None) };
        let v: Vec<u32> = vector(s)?;
        let mut sorted = v.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != v.len() || v.is_empty() {
            return Err(Error::Parse(format!("samples must be distinct and nonempty: `{s}`")));
        }
        Ok(Some(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Thm1,
    Thm2,
    Green,
    Lemma1,
    Cor2,
}

fn le(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn add(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Summary line plus one line per failure.
fn summarize(label: &str, total: usize, failures: &[String]) -> String {
    let mut s = format!("{label}: {}/{total} passed\n", total - failures.len());
    for f in failures {
        let _ = writeln!(s, "FAIL {f}");
    }
    s
}

fn theorem_outcome(label: &str, reports: Vec<TheoremReport>) -> Outcome {
    let failing: Vec<&TheoremReport> = reports.iter().filter(|r| !r.passed).collect();
    let lines: Vec<String> = failing.iter().map(|r| format!("{} * {}", r.pair.0, r.pair.1)).collect();
    let text = summarize(label, reports.len(), &lines);
    Outcome::checked(failing.is_empty(), text, json!(failing))
}

pub fn verify(which: Identity, a: &VerifyArgs, exec: Exec) -> Result<Outcome> {
    let input = a.quiver.resolve()?;
    let n = input.quiver.n();
    let dmax = a.dmax(n)?;
    let name = input.preset.clone().unwrap_or_else(|| a.quiver.quiver.clone());
    let label = format!("{which:?} {name} dmax={}", a.dmax).to_lowercase();
    match which {
        Identity::Thm1 => {
            let ctx = context(&input, exec)?;
            let mods = modules_up_to(&input.indecomposables()?, &dmax);
            let mut pairs = Vec::new();
            for m in &mods {
                for x in &mods {
                    if le(&add(&m.dim(n), &x.dim(n)), &dmax) {
                        pairs.push((m.clone(), x.clone()));
                    }
                }
            }
            let samples = a.samples()?;
            let reports = exec.map(pairs, |(m, x)| match &samples {
                Some(s) => ctx.verify_thm1_numeric(&m, &x, s),
                None => ctx.verify_thm1(&m, &x),
            });
            Ok(theorem_outcome(&label, reports.into_iter().collect::<Result<_>>()?))
        }
        Identity::Thm2 => {
            let ctx = context(&input, exec)?;
            let indec = input.indecomposables()?;
            let sp = ctx.species(2)?;
            let mut injs = (0..n).map(|v| injective(&sp, &indec, v)).collect::<Result<Vec<_>>>()?;
            injs.push(Descriptor::zero());
            let mut pairs = Vec::new();
            for m in modules_up_to(&indec, &dmax) {
                for i in &injs {
                    pairs.push((m.clone(), i.clone()));
                }
            }
            let samples = a.samples()?;
            let reports = exec.map(pairs, |(m, i)| match &samples {
                Some(s) => ctx.verify_thm2_numeric(&m, &i, s),
                None => ctx.verify_thm2(&m, &i),
            });
            Ok(theorem_outcome(&label, reports.into_iter().collect::<Result<_>>()?))
        }
        Identity::Green => verify_green(&input, &dmax, &a.samples()?.unwrap_or(vec![2]), exec, &label),
        Identity::Lemma1 | Identity::Cor2 => verify_grid(which, &input, &dmax, exec, &label),
    }
}

fn class_ids(h: &HallTable, dmax: &[usize]) -> Result<Vec<ClassId>> {
    let mut ids = Vec::new();
    for d in sub_dims(dmax) {
        ids.extend(h.ids(&d)?);
    }
    ids.sort();
    Ok(ids)
}

fn verify_green(input: &QuiverInput, dmax: &[usize], samples: &[u32], exec: Exec, label: &str) -> Result<Outcome> {
    let mut total = 0;
    let mut failures = Vec::new();
    for &q in samples {
        let h = HallTable::new(Species::new(&input.quiver, q)?, exec);
        let ids = class_ids(&h, dmax)?;
        let mut tuples = Vec::new();
        for m in &ids {
            for x in &ids {
                for y in &ids {
                    for z in &ids {
                        if add(&m.dim, &x.dim) == add(&y.dim, &z.dim) {
                            tuples.push([m.clone(), x.clone(), y.clone(), z.clone()]);
                        }
                    }
                }
            }
        }
        total += tuples.len();
        let results = exec.map(tuples, |[m, x, y, z]| {
            green_check(&h, &m, &x, &y, &z).map(|r| (r.passed(), format!("q={q} {m} {x} {y} {z}: {} vs {}", r.lhs, r.rhs)))
        });
        for r in results {
            let (ok, line) = r?;
            if !ok {
                failures.push(line);
            }
        }
    }
    let text = summarize(label, total, &failures);
    Ok(Outcome::checked(failures.is_empty(), text, json!(failures)))
}

/// All vectors in the box `[0, dmax]`, in lexicographic order.
fn box_vectors(dmax: &[usize]) -> Vec<Vec<i64>> {
    sub_dims(dmax).into_iter().map(|v| v.into_iter().map(|x| x as i64).collect()).collect()
}

fn verify_grid(which: Identity, input: &QuiverInput, dmax: &[usize], exec: Exec, label: &str) -> Result<Outcome> {
    let lambda = input.lambda()?;
    let q = &input.quiver;
    let vs = box_vectors(dmax);
    // parallel over the first vector, the rest nested inside
    let rows = exec.map(vs.clone(), |m| -> Result<(usize, Vec<String>)> {
        let mut total = 0;
        let mut fails = Vec::new();
        for e in &vs {
            if which == Identity::Lemma1 {
                for (k, r) in lemma1_check(q, &lambda, &m, e)?.iter().enumerate() {
                    total += 1;
                    if !r.passed() {
                        fails.push(format!("part {} m={m:?} e={e:?}: {} vs {}", k + 1, r.lhs, r.rhs));
                    }
                }
                continue;
            }
            for l in &vs {
                for f in &vs {
                    let r = corollary2_check(q, &lambda, &m, l, e, f)?;
                    total += 1;
                    if !r.passed() {
                        fails.push(format!("m={m:?} l={l:?} e={e:?} f={f:?}: {} vs {}", r.lhs, r.rhs));
                    }
                }
            }
        }
        Ok((total, fails))
    });
    let mut total = 0;
    let mut failures = Vec::new();
    for r in rows {
        let (t, f) = r?;
        total += t;
        failures.extend(f);
    }
    let text = summarize(label, total, &failures);
    Ok(Outcome::checked(failures.is_empty(), text, json!(failures)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Generic,
    Split,
}

pub fn basis_check(b: i64, c: i64, radius: i64, policy: PolicyArg, exec: Exec, as_json: bool) -> Result<Outcome> {
    let policy = match policy {
        PolicyArg::Generic => Policy::Generic,
        PolicyArg::Split => Policy::SplitSemisimple,
    };
    let r = Rank2Family::new(b, c, exec)?.basis_check(radius, policy)?;
    let text = if as_json {
        pretty(&r)
    } else {
        let mut s = format!("basis ({b},{c}) radius {radius} {policy:?}: {} elements\n", r.records.len());
        let _ = writeln!(s, "distinct minimal exponents: {}", r.distinct_min_exponents);
        let _ = writeln!(s, "unit triangular expansion: {}", r.triangular_unit);
        let in_span = r.cluster_variables.iter().filter(|(_, s, _)| *s).count();
        let _ = writeln!(s, "cluster variables in span: {in_span}/{}", r.cluster_variables.len());
        for rec in r.records.iter().filter(|x| !x.min_is_minus_d || !x.leading_is_unit) {
            let _ = writeln!(s, "note d={:?}: min exponent {:?}, leading {:?}", rec.d.0, rec.min_exponent, rec.leading);
        }
        let _ = writeln!(s, "{}", if r.passed { "PASS" } else { "FAIL" });
        s
    };
    Ok(Outcome::checked(r.passed, text, serde_json::to_value(&r).expect("report")))
}

#[derive(Args, Clone, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub quiver: QuiverArgs,
    /// Field size (a prime power).
    #[arg(long, default_value_t = 2)]
    pub q: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Gr,
    Hall,
    Eps,
    Strata,
}

#[derive(Args, Clone, Debug)]
pub struct OracleQuery {
    #[command(flatten)]
    pub common: OracleArgs,
    /// Module (`gr`, `strata`), first argument `M` (`eps`), or the dimension
    /// vector of the middle terms (`hall`).
    #[arg(long, default_value = "1,1")]
    pub dim: String,
    /// Second argument `N` for `eps`; the injective for `strata`.
    #[arg(long)]
    pub other: Option<String>,
}

pub fn oracle(which: Oracle, a: &OracleQuery, exec: Exec, as_json: bool) -> Result<Outcome> {
    let input = a.common.quiver.resolve()?;
    let q = a.common.q;
    let sp = Species::new(&input.quiver, q)?;
    match which {
        Oracle::Gr => {
            let m = input.module(&a.dim)?;
            let rep = m.realize(&sp)?;
            let rows: BTreeMap<String, u64> = sub_dims(&m.dim(input.quiver.n()))
                .into_iter()
                .map(|e| (format!("{e:?}"), gr_count(&sp, &rep, &e)))
                .collect();
            let text = if as_json {
                pretty(&json!({ "module": m.to_string(), "q": q, "gr": rows }))
            } else {
                let mut s = format!("|Gr_e({m})| over F_{q}\n");
                for (e, n) in &rows {
                    let _ = writeln!(s, "{e}\t{n}");
                }
                s
            };
            Ok(Outcome::ok(text))
        }
        Oracle::Hall => {
            let dim: Vec<usize> = vector(&a.dim)?;
            let h = HallTable::new(sp, exec);
            let mut s = format!("Hall numbers F^E_(A,B) over F_{q}, dim E = {dim:?}\nE\t|Aut E|\tA\tB\tF\n");
            for e in h.ids(&dim)? {
                let aut = h.aut(&e)?;
                for ((quot, sub), f) in &h.census(&e)?.hall {
                    let _ = writeln!(s, "{e}\t{aut}\t{quot}\t{sub}\t{f}");
                }
            }
            Ok(Outcome::ok(s))
        }
        Oracle::Eps => {
            let other = a.other.as_deref().ok_or_else(|| Error::Parse("eps needs --other".into()))?;
            let h = HallTable::new(sp.clone(), exec);
            let m = h.classify(&input.module(&a.dim)?.realize(&sp)?)?;
            let n = h.classify(&input.module(other)?.realize(&sp)?)?;
            let row = epsilon_row(&h, &m, &n)?;
            let r = epsilon_sum_check(&h, &m, &n)?;
            let mut s = format!("eps^E_(M,N) over F_{q}, M = {m}, N = {n}\n");
            for (e, v) in &row {
                let _ = writeln!(s, "{e}\t{v}");
            }
            let _ = writeln!(s, "sum {} expected {} direct {}", r.sum, r.expected, r.matches_direct);
            let failure = json!({ "sum": r.sum.to_string(), "expected": r.expected.to_string(), "matches_direct": r.matches_direct });
            Ok(Outcome::checked(r.passed(), s, failure))
        }
        Oracle::Strata => {
            let other = a.other.as_deref().ok_or_else(|| Error::Parse("strata needs --other".into()))?;
            let ctx = context(&input, exec)?;
            let r = ctx.strata_check(&input.module(&a.dim)?, &input.module(other)?, q)?;
            let text = if as_json {
                pretty(&r)
            } else {
                let mut s = format!("Hom strata over F_{q}\nB\tI'\tcount\tformula\n");
                for (b, i, n, f) in &r.strata {
                    let _ = writeln!(s, "{b}\t{i}\t{n}\t{f}");
                }
                let _ = writeln!(s, "total {} expected {}", r.total, r.expected_total);
                s
            };
            Ok(Outcome::checked(r.passed, text, serde_json::to_value(&r).expect("report")))
        }
    }
}
