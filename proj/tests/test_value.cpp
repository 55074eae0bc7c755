#include "doctest.h"

#include <map>
#include <random>

#include "g2l2/scan.hpp"
#include "g2l2/value.hpp"
#include "helpers.hpp"

using namespace g2l2;
using namespace g2l2::testutil;

namespace {

constexpr int V = ScanDomain::kVocab;

// Exact distribution over token sequences: the oracle for the factored
// ProbString representation (lengths exact; tokens exact as per-position
// marginals given length).
using Dist = std::map<std::vector<int>, double>;

Dist mixDist(const std::vector<Dist>& ds, const std::vector<double>& p) {
    Dist out;
    for (size_t i = 0; i < ds.size(); ++i) {
        for (const auto& [s, q] : ds[i]) out[s] += p[i] * q;
    }
    return out;
}

Dist concatDist(const Dist& a, const Dist& b) {
    Dist out;
    for (const auto& [s, p] : a) {
        for (const auto& [t, q] : b) {
            std::vector<int> st = s;
            st.insert(st.end(), t.begin(), t.end());
            out[st] += p * q;
        }
    }
    return out;
}

// Repetition is correlated: the one underlying derivation is replayed m times.
Dist repeatDist(const Dist& a, int m) {
    Dist out;
    for (const auto& [s, p] : a) {
        std::vector<int> r;
        for (int i = 0; i < m; ++i) r.insert(r.end(), s.begin(), s.end());
        out[r] += p;
    }
    return out;
}

double lengthProb(const Dist& d, int l) {
    double p = 0.0;
    for (const auto& [s, q] : d) {
        if (static_cast<int>(s.size()) == l) p += q;
    }
    return p;
}

double tokenMarginal(const Dist& d, int l, int k, int c) {
    double pl = 0.0, pc = 0.0;
    for (const auto& [s, q] : d) {
        if (static_cast<int>(s.size()) != l) continue;
        pl += q;
        if (s[k] == c) pc += q;
    }
    return pl > 0 ? pc / pl : 0.0;
}

void checkAgainstOracle(const Value& s, const Dist& d, const Tape& tape) {
    REQUIRE(ScanDomain::checkInvariants(s, tape));
    if (s.det) {
        REQUIRE(d.size() == 1);
        CHECK(d.begin()->first == s.toks);
        return;
    }
    const auto& L = tape.value(s.L);
    const auto& C = tape.value(s.C);
    for (int l = 0; l <= s.lmax; ++l) {
        CHECK(L[l] == doctest::Approx(lengthProb(d, l)).epsilon(1e-9));
        if (L[l] < 1e-12) continue;
        for (int k = 0; k < l; ++k) {
            for (int c = 0; c < V; ++c) {
                CHECK(C[cIdx(l, k, c, s.lmax, V)] ==
                      doctest::Approx(tokenMarginal(d, l, k, c)).epsilon(1e-9));
            }
        }
    }
}

Dist detDist(const std::vector<int>& toks) { return {{toks, 1.0}}; }

}  // namespace

TEST_CASE("deterministic fast path survives concat and repeat") {
    ScanDomain dom;
    Tape tape;
    ValuePtr a = makeDetString({0, 1});
    ValuePtr b = makeDetString({2});
    ValuePtr c = dom.concatVals(a, b, tape);
    CHECK(c->det);
    CHECK(c->toks == std::vector<int>{0, 1, 2});
    ValuePtr r = dom.repeatVal(c, 3, tape);
    CHECK(r->det);
    CHECK(r->toks == std::vector<int>{0, 1, 2, 0, 1, 2, 0, 1, 2});
    ValuePtr e = dom.concatVals(makeDetString({}), a, tape);
    CHECK(e->toks == a->toks);
}

TEST_CASE("mixture of deterministic strings matches the exact distribution") {
    Tape tape;
    std::vector<std::vector<int>> seqs = {{0, 1}, {2}, {}, {1, 1, 1}};
    std::vector<ValuePtr> vs;
    std::vector<Dist> ds;
    for (const auto& s : seqs) {
        vs.push_back(makeDetString(s));
        ds.push_back(detDist(s));
    }
    std::mt19937_64 rng(3);
    std::vector<double> p = randomProb(rng, seqs.size());
    ValuePtr mixed = expectedValue(vs, tape.leaf(p), tape, V);
    CHECK(!mixed->det);
    checkAgainstOracle(*mixed, mixDist(ds, p), tape);
}

TEST_CASE("mixing identical strings keeps a point mass") {
    Tape tape;
    std::vector<ValuePtr> vs = {makeDetString({4, 0}), makeDetString({4, 0})};
    ValuePtr mixed = expectedValue(vs, tape.leaf({0.25, 0.75}), tape, V);
    if (mixed->det) {
        CHECK(mixed->toks == std::vector<int>{4, 0});
    } else {
        checkAgainstOracle(*mixed, detDist({4, 0}), tape);
    }
}

TEST_CASE("concat, repeat and nested mixes match the marginal oracle") {
    ScanDomain dom;
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        Tape tape;
        std::uniform_int_distribution<int> len(0, 3), tok(0, V - 1), rep(2, 3);

        auto randomDet = [&] {
            std::vector<int> s(len(rng));
            for (auto& t : s) t = tok(rng);
            return s;
        };
        auto randomMix = [&](int k) {
            std::vector<ValuePtr> vs;
            std::vector<Dist> ds;
            for (int i = 0; i < k; ++i) {
                auto s = randomDet();
                vs.push_back(makeDetString(s));
                ds.push_back(detDist(s));
            }
            std::vector<double> p = randomProb(rng, k);
            return std::pair{expectedValue(vs, tape.leaf(p), tape, V), mixDist(ds, p)};
        };

        auto [x, dx] = randomMix(3);
        auto [y, dy] = randomMix(2);

        ValuePtr cat = dom.concatVals(x, y, tape);
        checkAgainstOracle(*cat, concatDist(dx, dy), tape);

        int m = rep(rng);
        ValuePtr r = dom.repeatVal(x, m, tape);
        checkAgainstOracle(*r, repeatDist(dx, m), tape);

        // Mixture of already-mixed strings (det + dist operands together).
        auto s = randomDet();
        ValuePtr z = expectedValue({cat, makeDetString(s)}, tape.leaf({0.4, 0.6}), tape, V);
        checkAgainstOracle(*z, mixDist({concatDist(dx, dy), detDist(s)}, {0.4, 0.6}), tape);
    }
}

TEST_CASE("loss and decode agree with the factored distribution") {
    ScanDomain dom;
    Tape tape;
    ValuePtr mixed = expectedValue({makeDetString({0, 1}), makeDetString({2})},
                                   tape.leaf({0.9, 0.1}), tape, V);
    // NLL of the dominant outcome is lower.
    double l1 = tape.scalarValue(dom.lossString(*mixed, {0, 1}, tape));
    double l2 = tape.scalarValue(dom.lossString(*mixed, {2}, tape));
    CHECK(l1 < l2);
    CHECK(ScanDomain::decode(*mixed, tape) == std::vector<int>{0, 1});
    // Deterministic target scores ~zero loss.
    CHECK(tape.scalarValue(dom.lossString(*makeDetString({3, 3}), {3, 3}, tape)) ==
          doctest::Approx(0.0).epsilon(1e-9));
}
