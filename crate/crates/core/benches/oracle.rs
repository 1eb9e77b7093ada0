//! Sequential against rayon-parallel execution of the enumeration oracles.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qcluster::ccmap::CcContext;
use qcluster::rank2basis::{Policy, Rank2Family};
use qcluster::repbrute::descr::indecomposables;
use qcluster::repbrute::iso::HallTable;
use qcluster::speckit::kronecker;
use qcluster::Exec;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ext_grassmannians(c: &mut Criterion) {
    let mut g = c.benchmark_group("ext_gr_sum");
    g.sample_size(10);
    let ind = indecomposables("kronecker").unwrap();
    // P1 and I2: dim (1,2) and (2,1)
    let (m, n) = (&ind[3], &ind[2]);
    for (name, exec) in POLICIES {
        let ctx = CcContext::from_preset(&kronecker(), exec).unwrap();
        g.bench_with_input(BenchmarkId::new(name, "kronecker q=3"), &ctx, |b, ctx| {
            b.iter(|| black_box(ctx.ext_gr_at(m, n, 3).unwrap()))
        });
    }
    g.finish();
}

fn hall_census(c: &mut Criterion) {
    let mut g = c.benchmark_group("hall_census");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        let sp = CcContext::from_preset(&kronecker(), exec).unwrap().species(3).unwrap();
        g.bench_function(BenchmarkId::new(name, "kronecker (2,2) q=3"), |b| {
            b.iter(|| {
                let h = HallTable::new(sp.clone(), exec);
                for id in h.ids(&[2, 2]).unwrap() {
                    black_box(h.census(&id).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("basis_check");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new(name, "(1,3) radius 3"), |b| {
            b.iter(|| {
                let f = Rank2Family::new(1, 3, exec).unwrap();
                black_box(f.basis_check(3, Policy::Generic).unwrap())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, ext_grassmannians, hall_census, basis);
criterion_main!(benches);
