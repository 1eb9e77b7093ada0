//! Acceptance suite: one PASS/FAIL line per criterion, including its time
//! limit. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcluster::ccmap::CcContext;
use qcluster::rank2basis::{Policy, Rank2Family};
use qcluster::repbrute::counts::{epsilon_sum_check, green_check};
use qcluster::repbrute::descr::{indecomposables, injective, modules_up_to, Descriptor};
use qcluster::repbrute::hom::socle_dim;
use qcluster::repbrute::iso::{ClassId, HallTable};
use qcluster::repbrute::sub::sub_dims;
use qcluster::seedkit::{cluster_variables, rank2_vars, QuantumSeed};
use qcluster::speckit::{corollary2_check, lemma1_check, preset};
use qcluster::{qbinom, Exec, Result, SkewForm, TorusElement};

/// Outcome of one criterion: whether it held, and a short summary.
type Verdict = Result<(bool, String)>;

fn le(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn add(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn torus_laws() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let checks = 10_000;
    let mut bad = 0;
    for _ in 0..checks {
        let m = rng.gen_range(1..=4);
        let mut a = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                a[i][j] = rng.gen_range(-4..=4);
                a[j][i] = -a[i][j];
            }
        }
        let ctx = Arc::new(SkewForm::new(a)?);
        let c: Vec<i64> = (0..m).map(|_| rng.gen_range(-5..=5)).collect();
        let d: Vec<i64> = (0..m).map(|_| rng.gen_range(-5..=5)).collect();
        let s: Vec<i64> = c.iter().zip(&d).map(|(x, y)| x + y).collect();
        let (mc, md) = (TorusElement::monomial(&ctx, &c)?, TorusElement::monomial(&ctx, &d)?);
        let lam = ctx.eval(&c, &d);
        let product = mc.try_mul(&md)?;
        if product != TorusElement::monomial(&ctx, &s)?.shift(lam) || product != md.try_mul(&mc)?.shift(2 * lam) {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{checks} random pairs, m <= 4, {bad} mismatches")))
}

fn q_binomials() -> Verdict {
    let mut bad = 0;
    let mut count = 0;
    for n in 0..=12u32 {
        for k in 0..=n {
            count += 1;
            let b = qbinom(n, k, 2);
            let at_one: i64 = b.terms().map(|(_, c)| i64::try_from(c).expect("small")).sum();
            let binom = (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64);
            let pascal = k == 0
                || k == n
                || b == &qbinom(n - 1, k, 2).shift(2 * k as i64) + &qbinom(n - 1, k - 1, 2).shift(-2 * (n - k) as i64);
            if !b.is_bar_invariant() || at_one != binom || !pascal {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("{count} binomials n <= 12, {bad} failures")))
}

fn rank2_recursion() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for ((b, c), p) in [((1, 1), 5), ((1, 2), 6), ((2, 1), 6), ((1, 3), 8), ((3, 1), 8)] {
        let vars: Vec<TorusElement> = rank2_vars(b, c, -5, 12)?.into_iter().map(|(_, x)| x).collect();
        let periodic = (0..vars.len() - p).all(|i| vars[i] == vars[i + p]);
        let minimal = (1..p).all(|s| vars[0] != vars[s]);
        ok &= periodic && minimal;
        notes.push(format!("({b},{c}):{}", if periodic && minimal { p.to_string() } else { "x".into() }));
    }
    Ok((ok, format!("X_-5..X_12 exact, periods {}", notes.join(" "))))
}

fn quiver_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let grid: Vec<Vec<i64>> = sub_dims(&[5, 5]).into_iter().map(|v| v.iter().map(|x| *x as i64).collect()).collect();
    let mut total = 0u64;
    let mut bad = 0u64;
    for name in ["a2", "kronecker", "b2"] {
        let p = preset(name)?;
        let (q, l) = (&p.quiver, &p.lambda);
        for m in &grid {
            for e in &grid {
                for r in lemma1_check(q, l, m, e)? {
                    total += 1;
                    bad += u64::from(!r.passed());
                }
                for ll in &grid {
                    for f in &grid {
                        total += 1;
                        bad += u64::from(!corollary2_check(q, l, m, ll, e, f)?.passed());
                    }
                }
            }
        }
        for _ in 0..10_000 {
            let v: Vec<i64> = (0..8).map(|_| rng.gen_range(0..=50)).collect();
            for r in lemma1_check(q, l, &v[0..2], &v[4..6])? {
                total += 1;
                bad += u64::from(!r.passed());
            }
            total += 1;
            bad += u64::from(!corollary2_check(q, l, &v[0..2], &v[2..4], &v[4..6], &v[6..8])?.passed());
        }
    }
    Ok((bad == 0, format!("{total} identities on a2, kronecker, b2, {bad} failures")))
}

fn pairs_within(mods: &[Descriptor], dmax: &[usize]) -> Vec<(Descriptor, Descriptor)> {
    let n = dmax.len();
    let mut out = Vec::new();
    for m in mods {
        for x in mods {
            if le(&add(&m.dim(n), &x.dim(n)), dmax) {
                out.push((m.clone(), x.clone()));
            }
        }
    }
    out
}

fn thm1_symbolic() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["a2", "kronecker"] {
        let ctx = CcContext::from_preset(&preset(name)?, Exec::Parallel)?;
        let pairs = pairs_within(&modules_up_to(&indecomposables(name)?, &[2, 2]), &[2, 2]);
        let mut bad = 0;
        for (m, n) in &pairs {
            let r = ctx.verify_thm1(m, n)?;
            if !r.passed || !r.numeric_at.is_empty() {
                bad += 1;
            }
        }
        ok &= bad == 0;
        notes.push(format!("{name} {}/{}", pairs.len() - bad, pairs.len()));
    }
    Ok((ok, format!("symbolic pairs passed: {}", notes.join(", "))))
}

fn thm1_valued() -> Verdict {
    let ctx = CcContext::from_preset(&preset("b2")?, Exec::Parallel)?;
    let mods = modules_up_to(&indecomposables("b2")?, &[1, 1]);
    let mut bad = 0;
    for m in &mods {
        for n in &mods {
            bad += usize::from(!ctx.verify_thm1_numeric(m, n, &[2, 3])?.passed);
        }
    }
    let total = mods.len() * mods.len();
    Ok((bad == 0, format!("(1,2)-valued, {}/{total} pairs at q = 2, 3", total - bad)))
}

fn thm2_and_strata() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["a2", "kronecker"] {
        let ctx = CcContext::from_preset(&preset(name)?, Exec::Parallel)?;
        let ind = indecomposables(name)?;
        let sp = ctx.species(2)?;
        let injs = (0..2).map(|v| injective(&sp, &ind, v)).collect::<Result<Vec<_>>>()?;
        let mods = modules_up_to(&ind, &[2, 2]);
        let (mut total, mut bad) = (0, 0);
        for m in &mods {
            for i in injs.iter().cloned().chain([Descriptor::zero()]) {
                total += 1;
                let r = ctx.verify_thm2(m, &i)?;
                bad += usize::from(!r.passed || !r.numeric_at.is_empty());
            }
        }
        let (mut strata, mut strata_bad) = (0, 0);
        for q in [2, 3, 4, 5] {
            for m in &mods {
                for i in &injs {
                    strata += 1;
                    strata_bad += usize::from(!ctx.strata_check(m, i, q)?.passed);
                }
            }
        }
        ok &= bad == 0 && strata_bad == 0;
        notes.push(format!("{name} {}/{total} symbolic, strata {}/{strata}", total - bad, strata - strata_bad));
    }
    Ok((ok, notes.join("; ")))
}

fn ids_in(h: &HallTable, keep: impl Fn(&[usize]) -> bool, box_: &[usize]) -> Result<Vec<ClassId>> {
    let mut ids = Vec::new();
    for d in sub_dims(box_).into_iter().filter(|d| keep(d)) {
        ids.extend(h.ids(&d)?);
    }
    Ok(ids)
}

fn epsilon_and_green() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["a2", "b2", "kronecker"] {
        let ctx = CcContext::from_preset(&preset(name)?, Exec::Parallel)?;
        let (mut eps, mut eps_bad) = (0, 0);
        for q in [2, 3] {
            let h = HallTable::new(ctx.species(q)?, Exec::Parallel);
            let ids = ids_in(&h, |_| true, &[2, 2])?;
            for m in &ids {
                for n in &ids {
                    if le(&add(&m.dim, &n.dim), &[2, 2]) {
                        eps += 1;
                        eps_bad += usize::from(!epsilon_sum_check(&h, m, n)?.passed());
                    }
                }
            }
        }
        let h = HallTable::new(ctx.species(2)?, Exec::Parallel);
        let ids = ids_in(&h, |d| d.iter().sum::<usize>() <= 2, &[2, 2])?;
        let (mut green, mut green_bad) = (0, 0);
        for m in &ids {
            for n in &ids {
                for x in &ids {
                    for y in &ids {
                        green += 1;
                        green_bad += usize::from(!green_check(&h, m, n, x, y)?.passed());
                    }
                }
            }
        }
        ok &= eps_bad == 0 && green_bad == 0;
        notes.push(format!("{name} eps {}/{eps} green {}/{green}", eps - eps_bad, green - green_bad));
    }
    Ok((ok, notes.join("; ")))
}

fn characters_are_cluster_variables() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["a2", "b2"] {
        let p = preset(name)?;
        let ctx = CcContext::from_preset(&p, Exec::Parallel)?;
        let seed = QuantumSeed::initial(p.lambda.clone(), p.quiver.b_tilde().clone())?;
        let vars: BTreeSet<TorusElement> = cluster_variables(&seed, 64)?.into_iter().collect();
        let ind = indecomposables(name)?;
        let sp = ctx.species(2)?;
        let mut cc = BTreeSet::new();
        for d in &ind {
            cc.insert(ctx.cc_module(d)?.value);
        }
        for v in 0..2 {
            let soc = socle_dim(&sp, &injective(&sp, &ind, v)?.realize(&sp)?);
            let c: Vec<i64> = soc.iter().map(|x| *x as i64).collect();
            cc.insert(TorusElement::monomial(ctx.torus(), &c)?);
        }
        ok &= cc == vars;
        notes.push(format!("{name} {} characters vs {} variables", cc.len(), vars.len()));
    }
    Ok((ok, notes.join("; ")))
}

fn rank2_bases() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (b, c) in [(1, 1), (1, 2), (1, 3)] {
        let r = Rank2Family::new(b, c, Exec::Parallel)?.basis_check(3, Policy::Generic)?;
        ok &= r.passed;
        let vars = r.cluster_variables.iter().filter(|v| v.1).count();
        notes.push(format!(
            "({b},{c}) {} elements distinct={} unit-triangular={} vars {vars}/{}",
            r.records.len(),
            r.distinct_min_exponents,
            r.triangular_unit,
            r.cluster_variables.len()
        ));
    }
    Ok((ok, notes.join("; ")))
}

const CLI_RUNS: &[&[&str]] = &[
    &["seed", "mutate", "--quiver", "kronecker", "--dirs", "1,2,1"],
    &["--json", "seed", "mutate", "--b", "[[0,1],[-2,0]]", "--lambda", "[[0,1],[-1,0]]", "--dirs", "2,1"],
    &["rank2", "vars", "--b", "1", "--c", "3", "--from", "-5", "--to", "12"],
    &["--json", "cc", "char", "--quiver", "kronecker", "--dim", "R1+S2", "--inj", "I2"],
    &["verify", "thm1", "--quiver", "kronecker", "--dmax", "2,2"],
    &["verify", "thm2", "--quiver", "a2", "--dmax", "2,2", "--samples", "2,3"],
    &["verify", "green", "--quiver", "b2", "--dmax", "1,1", "--samples", "2,3"],
    &["verify", "lemma1", "--quiver", "kronecker", "--dmax", "3,3"],
    &["verify", "cor2", "--quiver", "b2", "--dmax", "2,2"],
    &["--json", "basis", "check", "--b", "1", "--c", "3", "--radius", "3"],
    &["oracle", "gr", "--quiver", "g2", "--q", "2", "--dim", "2,3"],
    &["oracle", "hall", "--quiver", "kronecker", "--q", "3", "--dim", "2,1"],
    &["oracle", "eps", "--quiver", "kronecker", "--q", "2", "--dim", "S1", "--other", "P1"],
    &["--json", "oracle", "strata", "--quiver", "kronecker", "--q", "3", "--dim", "R0", "--other", "I2"],
];

fn run_cli(args: &[&str], threads: &str, sequential: bool) -> (Option<i32>, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qcc"));
    if sequential {
        cmd.arg("--sequential");
    }
    let o = cmd.args(args).env("RAYON_NUM_THREADS", threads).output().expect("qcc runs");
    (o.status.code(), o.stdout)
}

fn cli_determinism() -> Verdict {
    let mut bad = Vec::new();
    for args in CLI_RUNS {
        let first = run_cli(args, "1", false);
        let runs = [run_cli(args, "1", false), run_cli(args, "4", false), run_cli(args, "3", true)];
        if first.0 != Some(0) || runs.iter().any(|r| *r != first) {
            bad.push(args.join(" "));
        }
    }
    let summary = format!("{} commands x 4 runs (1, 4 threads, sequential)", CLI_RUNS.len());
    Ok((bad.is_empty(), if bad.is_empty() { summary } else { format!("{summary}; differing: {}", bad.join(" | ")) }))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    check: fn() -> Verdict,
}

fn main() {
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "torus laws", limit: s(10), check: torus_laws },
        Criterion { id: 2, name: "q-binomials", limit: s(1), check: q_binomials },
        Criterion { id: 3, name: "rank-2 recursion", limit: s(5), check: rank2_recursion },
        Criterion { id: 4, name: "exponent identities", limit: s(10), check: quiver_identities },
        Criterion { id: 5, name: "product formula, symbolic", limit: s(300), check: thm1_symbolic },
        Criterion { id: 6, name: "product formula, valued", limit: s(300), check: thm1_valued },
        Criterion { id: 7, name: "injective product formula", limit: s(300), check: thm2_and_strata },
        Criterion { id: 8, name: "epsilon sums and Green", limit: s(300), check: epsilon_and_green },
        Criterion { id: 9, name: "characters vs mutation", limit: s(30), check: characters_are_cluster_variables },
        Criterion { id: 10, name: "rank-2 basis", limit: s(120), check: rank2_bases },
        Criterion { id: 11, name: "CLI determinism", limit: s(60), check: cli_determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let verdict = (c.check)();
        let took = start.elapsed();
        let (held, detail) = match verdict {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = took <= c.limit;
        let pass = held && in_time;
        failed += usize::from(!pass);
        println!(
            "{} {:>2} {}: {detail} [{:.2}s, limit {}s{}]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            took.as_secs_f64(),
            c.limit.as_secs(),
            if in_time { "" } else { ", over time" },
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
