#pragma once

// Shared test utilities: finite-difference gradient checking and small
// random-value helpers.

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "g2l2/lexicon.hpp"
#include "g2l2/parser.hpp"

namespace g2l2::testutil {

// Probability-weighted expectation over scalar-valued root derivations.
inline double expectedRootValue(const std::vector<Derivation>& roots, Tape& tape) {
    Var p = derivationProbs(roots, tape);
    const auto& pv = tape.value(p);
    double e = 0.0;
    for (size_t i = 0; i < roots.size(); ++i) {
        e += pv[i] * tape.scalarValue(roots[i].prog.body->val->v);
    }
    return e;
}

struct RandomArith {
    ArithDomain dom;
    Lexicon lex{dom};
    ParamStore params;
    std::vector<std::string> tokens;
};

// Sentence word0 .. wordL-1 where word0 holds constants and later words hold
// unary add/mul functors (a mix of N\N and constants so several bracketings
// and ambiguous entries arise).
inline std::unique_ptr<RandomArith> randomArithCase(std::mt19937_64& rng, int len) {
    auto c = std::make_unique<RandomArith>();
    int n = c->dom.synN();
    int nn = c->dom.syn().functor(n, false, n);
    SemTypeSig::Arg num{SemPrim::Num, false};
    std::uniform_int_distribution<int> lit(1, 4), nEnt(1, 3), kind(0, 1);
    std::uniform_real_distribution<double> tau(-1.0, 1.0);
    auto litT = [&](int v) { return mkOp(c->dom.opNum(), {mkInt(v)}); };
    for (int i = 0; i < len; ++i) {
        std::string w = "w" + std::to_string(i);
        c->tokens.push_back(w);
        int entries = nEnt(rng);
        for (int e = 0; e < entries; ++e) {
            if (i == 0) {
                c->lex.add({w, false, n, {{}, SemPrim::Num, litT(lit(rng))}, "", true});
            } else {
                int op = kind(rng) ? c->dom.opAdd() : c->dom.opMul();
                c->lex.add({w, false, nn,
                            {{num}, SemPrim::Num, mkOp(op, {mkArg(0), litT(lit(rng))})}, "",
                            true});
            }
        }
    }
    c->lex.initTaus(c->params);
    for (auto& p : c->params.all()) p.data[0] = tau(rng);
    return c;
}

// Builds the scalar function from fresh leaves, compares reverse-mode
// gradients against central differences. Returns the worst relative error.
inline double gradCheck(const std::vector<std::vector<double>>& inputs,
                        const std::function<Var(Tape&, const std::vector<Var>&)>& fn,
                        double h = 1e-6) {
    auto eval = [&](const std::vector<std::vector<double>>& xs) {
        Tape tape;
        std::vector<Var> vars;
        for (const auto& x : xs) vars.push_back(tape.leaf(x, true));
        return tape.scalarValue(fn(tape, vars));
    };

    Tape tape;
    std::vector<Var> vars;
    for (const auto& x : inputs) vars.push_back(tape.leaf(x, true));
    auto grads = tape.backward(fn(tape, vars));

    double worst = 0.0;
    for (size_t i = 0; i < inputs.size(); ++i) {
        const auto& g = grads.at(vars[i].id);
        for (size_t j = 0; j < inputs[i].size(); ++j) {
            auto plus = inputs, minus = inputs;
            plus[i][j] += h;
            minus[i][j] -= h;
            double num = (eval(plus) - eval(minus)) / (2 * h);
            double rel = std::abs(g[j] - num) / std::max({1.0, std::abs(g[j]), std::abs(num)});
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

inline std::vector<double> randomVec(std::mt19937_64& rng, size_t n, double lo = -1.0,
                                     double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// A normalized probability vector.
inline std::vector<double> randomProb(std::mt19937_64& rng, size_t n) {
    std::vector<double> v = randomVec(rng, n, 0.05, 1.0);
    double s = 0.0;
    for (double x : v) s += x;
    for (auto& x : v) x /= s;
    return v;
}

}  // namespace g2l2::testutil
