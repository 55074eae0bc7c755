#pragma once

// Execution values. Every kind except deterministic strings is tape-backed so
// merged (expected) values carry gradients. Deterministic ProbStrings use a
// token-vector fast path and are lifted onto the tape only when mixed.

#include <functional>
#include <memory>
#include <vector>

#include "g2l2/autodiff.hpp"
#include "g2l2/syntax.hpp"

namespace g2l2 {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Value {
    SemPrim kind;

    // Payload for Num/BoolP/Count (scalar) and ObjSet/WordDist (vector).
    Var v;

    // ProbString payload (kind == Str).
    bool det = true;
    std::vector<int> toks;  // det: the exact token sequence
    int lmax = 0;           // dist: support bound; L has lmax+1 entries
    Var L;                  // dist: length distribution
    Var C;                  // dist: flattened [lmax+1, lmax, V] token table

    size_t numHash = 0;  // content hash, filled by makers below
};

// Instrumentation hook: when set, observes every tape-backed value as it is
// built (distribution strings and scalar/vector values). Used by invariant
// audits; leave unset in production paths.
extern std::function<void(const Value&, const Tape&)> valueProbe;

// Upper bound on the length of any outcome in a string value.
int strMaxSupport(const Value& s);

ValuePtr makeTapeValue(SemPrim kind, Var v, const Tape& tape);
ValuePtr makeDetString(std::vector<int> toks);
ValuePtr makeDistString(int lmax, Var L, Var C, const Tape& tape);

// Exact content equality (compares payload numbers via the tape).
bool valueEqual(const Value& a, const Value& b, const Tape& tape);

// Lifts a det string onto the tape as constant (L, C) arrays with
// lmax = token count.
void liftString(const Value& s, Tape& tape, int vocab, int& lmax, Var& L, Var& C);

// Softmax-weighted expected value: p is a probability vector over vs (one Var
// of length |vs|). All vs share a kind; strings may mix det and dist.
ValuePtr expectedValue(const std::vector<ValuePtr>& vs, Var p, Tape& tape, int vocab);

}  // namespace g2l2
