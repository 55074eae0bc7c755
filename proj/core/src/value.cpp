#include "g2l2/value.hpp"

#include <cmath>
#include <cstring>
#include <functional>

namespace g2l2 {

namespace {

size_t hashDoubles(size_t seed, const std::vector<double>& xs) {
    for (double x : xs) {
        uint64_t bits;
        std::memcpy(&bits, &x, sizeof(bits));
        seed ^= std::hash<uint64_t>{}(bits) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }
    return seed;
}

size_t hashInts(size_t seed, const std::vector<int>& xs) {
    for (int x : xs) {
        seed ^= std::hash<int>{}(x) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }
    return seed;
}

}  // namespace

std::function<void(const Value&, const Tape&)> valueProbe;

int strMaxSupport(const Value& s) {
    if (s.kind != SemPrim::Str) throw Error("strMaxSupport on non-string value");
    return s.det ? static_cast<int>(s.toks.size()) : s.lmax;
}

ValuePtr makeTapeValue(SemPrim kind, Var v, const Tape& tape) {
    auto val = std::make_shared<Value>();
    val->kind = kind;
    val->v = v;
    val->numHash = hashDoubles(static_cast<size_t>(kind) + 17, tape.value(v));
    if (valueProbe) valueProbe(*val, tape);
    return val;
}

ValuePtr makeDetString(std::vector<int> toks) {
    auto val = std::make_shared<Value>();
    val->kind = SemPrim::Str;
    val->det = true;
    val->numHash = hashInts(1234577, toks);
    val->toks = std::move(toks);
    return val;
}

ValuePtr makeDistString(int lmax, Var L, Var C, const Tape& tape) {
    auto val = std::make_shared<Value>();
    val->kind = SemPrim::Str;
    val->det = false;
    val->lmax = lmax;
    val->L = L;
    val->C = C;
    val->numHash = hashDoubles(hashDoubles(7654321, tape.value(L)), tape.value(C));
    if (valueProbe) valueProbe(*val, tape);
    return val;
}

bool valueEqual(const Value& a, const Value& b, const Tape& tape) {
    if (a.kind != b.kind) return false;
    if (a.kind == SemPrim::Str) {
        if (a.det != b.det) return false;
        if (a.det) return a.toks == b.toks;
        return a.lmax == b.lmax && tape.value(a.L) == tape.value(b.L) &&
               tape.value(a.C) == tape.value(b.C);
    }
    return tape.value(a.v) == tape.value(b.v);
}

void liftString(const Value& s, Tape& tape, int vocab, int& lmax, Var& L, Var& C) {
    if (!s.det) {
        lmax = s.lmax;
        L = s.L;
        C = s.C;
        return;
    }
    lmax = static_cast<int>(s.toks.size());
    std::vector<double> l(lmax + 1, 0.0);
    l[lmax] = 1.0;
    std::vector<double> c(cSize(lmax, vocab), 0.0);
    for (int k = 0; k < lmax; ++k) c[cIdx(lmax, k, s.toks[k], lmax, vocab)] = 1.0;
    L = tape.leaf(std::move(l));
    C = tape.leaf(std::move(c));
}

ValuePtr expectedValue(const std::vector<ValuePtr>& vs, Var p, Tape& tape, int vocab) {
    if (vs.empty()) throw Error("expectedValue: empty input");
    SemPrim kind = vs[0]->kind;
    for (const auto& v : vs) {
        if (v->kind != kind) throw Error("expectedValue: mixed value kinds");
    }
    if (vs.size() == 1) return vs[0];

    if (kind != SemPrim::Str) {
        Var acc;
        for (size_t i = 0; i < vs.size(); ++i) {
            Var pi = tape.indexSelect(p, {static_cast<int>(i)});
            Var term = tape.mul(pi, vs[i]->v);
            acc = i == 0 ? term : tape.add(acc, term);
        }
        return makeTapeValue(kind, acc, tape);
    }

    // Strings: all-identical det fast path, otherwise lift + psMix.
    bool allDetSame = true;
    for (const auto& v : vs) {
        if (!v->det || v->toks != vs[0]->toks) {
            allDetSame = false;
            break;
        }
    }
    if (allDetSame) return vs[0];

    int lmz = 0;
    std::vector<Var> ls(vs.size()), cs(vs.size());
    std::vector<int> lens(vs.size());
    for (size_t i = 0; i < vs.size(); ++i) {
        liftString(*vs[i], tape, vocab, lens[i], ls[i], cs[i]);
        lmz = std::max(lmz, lens[i]);
    }
    Var lmix = tape.psMixL(p, ls, lens, lmz);
    Var cmix = tape.psMixC(p, lmix, ls, cs, lens, lmz, vocab);
    return makeDistString(lmz, lmix, cmix, tape);
}

}  // namespace g2l2
