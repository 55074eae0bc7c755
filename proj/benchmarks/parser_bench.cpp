// Microbenchmarks for the CKY-E2 parser: merged vs brute-force enumeration,
// and full-lexicon SCAN parsing at increasing sentence lengths.

#include <benchmark/benchmark.h>

#include "g2l2/data_io.hpp"
#include "g2l2/lexicon.hpp"
#include "g2l2/parser.hpp"

using namespace g2l2;

namespace {

// One word holding constants and unary add/mul functors, sentence w^L.
struct ArithFixture {
    ArithDomain dom;
    Lexicon lex{dom};
    ParamStore params;

    ArithFixture() {
        int n = dom.synN();
        int nFwd = dom.syn().functor(n, true, n);
        int nBwd = dom.syn().functor(n, false, n);
        SemTypeSig::Arg num{SemPrim::Num, false};
        auto lit = [&](int v) { return mkOp(dom.opNum(), {mkInt(v)}); };
        for (int v = 1; v <= 3; ++v) {
            lex.add({"w", false, n, {{}, SemPrim::Num, lit(v)}, "", true});
        }
        lex.add({"w", false, nFwd,
                 {{num}, SemPrim::Num, mkOp(dom.opAdd(), {mkArg(0), lit(1)})}, "", true});
        lex.add({"w", false, nBwd,
                 {{num}, SemPrim::Num, mkOp(dom.opMul(), {mkArg(0), lit(2)})}, "", true});
        lex.initTaus(params);
    }
};

void BM_ParseMerged(benchmark::State& state) {
    ArithFixture f;
    std::vector<std::string> tokens(state.range(0), "w");
    for (auto _ : state) {
        Tape tape;
        ExecContext ctx(tape, &f.params);
        benchmark::DoNotOptimize(parse(tokens, f.lex, f.dom, ctx));
    }
}
BENCHMARK(BM_ParseMerged)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

void BM_ParseBruteForce(benchmark::State& state) {
    ArithFixture f;
    std::vector<std::string> tokens(state.range(0), "w");
    for (auto _ : state) {
        Tape tape;
        ExecContext ctx(tape, &f.params);
        benchmark::DoNotOptimize(enumerateParsesBruteForce(tokens, f.lex, f.dom, ctx));
    }
}
BENCHMARK(BM_ParseBruteForce)->Arg(4)->Arg(6)->Arg(8);

void BM_ScanFullLexicon(benchmark::State& state) {
    static ScanDomain dom;
    static Lexicon lex = induceScanLexicon(dom, scanWords());
    static ParamStore params = [] {
        ParamStore p;
        lex.initTaus(p);
        return p;
    }();
    static const std::vector<std::vector<std::string>> sentences = {
        {"jump"},
        {"jump", "left"},
        {"jump", "around", "left"},
        {"jump", "around", "left", "twice"},
        {"jump", "around", "left", "twice", "and", "walk"},
        {"jump", "around", "left", "twice", "after", "walk", "opposite", "right"},
    };
    const auto& tokens = sentences[state.range(0)];
    for (auto _ : state) {
        Tape tape;
        ExecContext ctx(tape, &params);
        benchmark::DoNotOptimize(parse(tokens, lex, dom, ctx));
    }
    state.SetLabel(std::to_string(tokens.size()) + " tokens");
}
BENCHMARK(BM_ScanFullLexicon)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
