// Microbenchmarks for the hot paths: scalar arithmetic, form evaluation,
// residue scans, the quartic driver and the bound recursion.

#include <benchmark/benchmark.h>

#include <vector>

#include "qpforms/bounds.hpp"
#include "qpforms/construct.hpp"
#include "qpforms/form_io.hpp"
#include "qpforms/zerosearch.hpp"

using namespace qpforms;

namespace {

const char* kLadder =
    "p=2 n=5 d=4\n"
    "1 4 0 0 0 0\n"
    "2 0 4 0 0 0\n"
    "4 0 0 4 0 0\n"
    "8 0 0 0 4 0\n"
    "1 0 0 0 0 4\n";

void BM_ScalarMul(benchmark::State& state) {
    PadicScalar a = PadicScalar::from_rational(1234577, 98765, 2);
    PadicScalar b = PadicScalar::from_rational(-777215, 4097, 2);
    for (auto _ : state) {
        PadicScalar c = a.mul(b);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_ScalarMul);

void BM_ScalarInvert(benchmark::State& state) {
    PadicScalar a = PadicScalar::from_rational(1234577, 98765, 3);
    for (auto _ : state) {
        PadicScalar c = a.invert();
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_ScalarInvert);

void BM_FormEvaluate(benchmark::State& state) {
    Form f = parse_form(kLadder);
    VectorQp x = VectorQp::from_ints({3, 5, 7, 11, 13}, 2);
    for (auto _ : state) {
        PadicScalar v = f.evaluate(x);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_FormEvaluate);

void BM_DirectionalExpand(benchmark::State& state) {
    Form f = parse_form(kLadder);
    std::vector<VectorQp> basis{VectorQp::from_ints({1, 0, 0, 0, 0}, 2),
                                VectorQp::from_ints({0, 1, 0, 0, 0}, 2)};
    VectorQp e = VectorQp::from_ints({1, 1, 1, 1, 1}, 2);
    for (auto _ : state) {
        Expansion ex = directional_expand(f, basis, e);
        benchmark::DoNotOptimize(ex);
    }
}
BENCHMARK(BM_DirectionalExpand);

void BM_ResidueScan(benchmark::State& state) {
    Form f = parse_form("p=2 n=3 d=2\n1 2 0 0\n1 0 2 0\n-1 0 0 2\n");
    int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto zs = residue_zeros(f, k);
        benchmark::DoNotOptimize(zs);
    }
}
BENCHMARK(BM_ResidueScan)->Arg(3)->Arg(5);

void BM_QuarticDriver(benchmark::State& state) {
    Form f = parse_form(kLadder);
    for (auto _ : state) {
        ConstructResult r = quartic_zero_q2(f);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_QuarticDriver);

void BM_BestBound(benchmark::State& state) {
    BoundQuery q;
    q.state = {4, 10, 20};
    q.cls = PrimeClass::p2;
    for (auto _ : state) {
        Certificate c = best_bound(q);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_BestBound);

} // namespace

BENCHMARK_MAIN();
