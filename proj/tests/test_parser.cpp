#include "doctest.h"

#include <random>

#include "g2l2/parser.hpp"
#include "helpers.hpp"

using namespace g2l2;
using namespace g2l2::testutil;

TEST_CASE("arith walkthrough: expectation, middle cell and root combinations") {
    ArithDomain dom;
    Lexicon lex = arithFixtureLexicon(dom);
    ParamStore params;
    lex.initTaus(params);

    {
        Tape tape;
        ExecContext ctx(tape, &params);
        ParseStats stats;
        std::vector<Derivation> roots =
            parse({"ONE", "PLUS_ONE", "MUL_THREE"}, lex, dom, ctx, &stats);
        // Post-merge roots: {3.5 at p=0.5, 7.5 at p=0.5}; their expectation
        // is 5.5. Only 2 root combinations happened (merged mid-cell x 2
        // entries), not 4.
        REQUIRE(roots.size() == 2);
        std::vector<double> vals = {tape.scalarValue(roots[0].prog.body->val->v),
                                    tape.scalarValue(roots[1].prog.body->val->v)};
        std::sort(vals.begin(), vals.end());
        CHECK(vals[0] == doctest::Approx(3.5).epsilon(1e-12));
        CHECK(vals[1] == doctest::Approx(7.5).epsilon(1e-12));
        CHECK(expectedRootValue(roots, tape) == doctest::Approx(5.5).epsilon(1e-12));
        bool sawRoot = false, sawMid = false;
        for (const auto& c : stats.cells) {
            if (c.lo == 0 && c.hi == 3) {
                CHECK(c.beforeMerge == 2);
                sawRoot = true;
            }
            if (c.lo == 0 && c.hi == 2) {
                // The merged middle cell holds one derivation of value 2.5
                // (witnessed by the 3.5 = 2.5+1 and 7.5 = 2.5*3 roots).
                CHECK(c.beforeMerge == 2);
                CHECK(c.afterMerge == 1);
                sawMid = true;
            }
        }
        CHECK(sawRoot);
        CHECK(sawMid);
    }
    {
        // Brute force still enumerates all four root derivations.
        Tape tape;
        ExecContext ctx(tape, &params);
        std::vector<Derivation> all =
            enumerateParsesBruteForce({"ONE", "PLUS_ONE", "MUL_THREE"}, lex, dom, ctx);
        CHECK(all.size() == 4);
        CHECK(expectedRootValue(all, tape) == doctest::Approx(5.5).epsilon(1e-12));
    }
}

TEST_CASE("CKY-E2 equals brute force on random arithmetic cases") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> len(2, 5);
    for (int trial = 0; trial < 25; ++trial) {
        auto c = randomArithCase(rng, len(rng));
        Tape t1;
        ExecContext ctx1(t1, &c->params);
        double merged = expectedRootValue(parse(c->tokens, c->lex, c->dom, ctx1), t1);
        Tape t2;
        ExecContext ctx2(t2, &c->params);
        double brute =
            expectedRootValue(enumerateParsesBruteForce(c->tokens, c->lex, c->dom, ctx2), t2);
        CHECK(merged == doctest::Approx(brute).epsilon(1e-9));
    }
}

TEST_CASE("merged result does not depend on entry insertion order") {
    std::mt19937_64 rng(31);
    auto base = randomArithCase(rng, 4);
    Tape t0;
    ExecContext ctx0(t0, &base->params);
    ParseStats s0;
    double v0 = expectedRootValue(parse(base->tokens, base->lex, base->dom, ctx0, &s0), t0);

    // Rebuild the same lexicon with each word's entries reversed; tau values
    // follow their entries.
    auto perm = std::make_unique<RandomArith>();
    perm->tokens = base->tokens;
    for (const auto& w : base->lex.words()) {
        auto ids = base->lex.entriesFor(w);
        for (auto it = ids.rbegin(); it != ids.rend(); ++it) {
            const LexiconEntry& e = base->lex.entry(*it);
            int syn = perm->dom.syn().parse(base->dom.syn().print(e.syn));
            Program p = parseProgram(printProgram(e.prog, base->dom), perm->dom,
                                     perm->dom.syn().semSig(syn));
            int nid = perm->lex.add({w, false, syn, p, "", true});
            perm->params.add(perm->lex.entry(nid).tauParam,
                             {base->params.data(e.tauParam)[0]});
        }
    }
    Tape t1;
    ExecContext ctx1(t1, &perm->params);
    ParseStats s1;
    double v1 = expectedRootValue(parse(perm->tokens, perm->lex, perm->dom, ctx1, &s1), t1);
    CHECK(v0 == doctest::Approx(v1).epsilon(1e-12));
    CHECK(s0.storedMax == s1.storedMax);
}

TEST_CASE("parse failures throw") {
    ArithDomain dom;
    Lexicon lex = arithFixtureLexicon(dom);
    ParamStore params;
    lex.initTaus(params);
    Tape tape;
    ExecContext ctx(tape, &params);
    CHECK_THROWS_AS(parse({}, lex, dom, ctx), ParseFailure);
    CHECK_THROWS_AS(parse({"PLUS_ONE", "ONE"}, lex, dom, ctx), ParseFailure);
    CHECK_THROWS_AS(parse({"UNKNOWN"}, lex, dom, ctx), DataError);
}
