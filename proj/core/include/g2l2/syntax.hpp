#pragma once

// CCG syntactic-type algebra: primitives, slashed functors, conjunctions and
// the pending-conjunct intermediates that let coordination run through binary
// chart combination.

#include <optional>
#include <string>
#include <vector>

#include "g2l2/errors.hpp"

namespace g2l2 {

// Primitive semantic types of the DSLs.
enum class SemPrim : uint8_t {
    Str,       // SCAN action sequence
    ObjSet,    // visual soft object set
    BoolP,     // probability of "yes"
    Count,     // expected count
    WordDist,  // distribution over object concepts (query answers)
    Num,       // arithmetic test domain
};

std::string semPrimName(SemPrim p);

// A (possibly functor) semantic type: args applied in order yield ret.
// Functor-typed arguments are themselves (prim -> prim) with one argument.
struct SemTypeSig {
    SemPrim ret;
    struct Arg {
        SemPrim type;
        bool functor = false;  // if true: (type -> type) one-argument functor
        bool operator==(const Arg&) const = default;
    };
    std::vector<Arg> args;
    bool operator==(const SemTypeSig&) const = default;
};

enum class SynKind : uint8_t { Primitive, Functor, Conj, Pending };
enum class ConjKind : uint8_t { And, Or };
enum class CombineRule : uint8_t { ForwardApp, BackwardApp, CoordStart, CoordFinish };

struct SynType {
    SynKind kind;
    // Primitive
    std::string name;
    SemPrim sem = SemPrim::Str;
    // Functor: result (slash) argument; forward '/' consumes on the right.
    int result = -1;
    int argument = -1;
    bool forward = true;
    // Conj / Pending
    ConjKind conj = ConjKind::And;
    int inner = -1;  // Pending: the conjunct type T (for Or: the objset primitive)
};

struct CombineResult {
    CombineRule rule;
    int result;
};

// Interning table for syntactic types; ids are stable and comparable.
class SynTable {
public:
    int primitive(const std::string& name, SemPrim sem);
    int functor(int result, bool forward, int argument);
    int conj(ConjKind kind);
    int pending(ConjKind kind, int inner);

    const SynType& at(int id) const;
    std::string print(int id) const;
    // Parses the printed form, e.g. "V\\V/(V\\V)"; primitives must exist.
    int parse(const std::string& text) const;

    int arity(int id) const;
    // Semantic signature of a syntactic type (argument list in consumption
    // order: innermost slash first).
    SemTypeSig semSig(int id) const;

    std::optional<CombineResult> canCombine(int left, int right) const;

    size_t size() const { return types_.size(); }

private:
    int intern(SynType t);
    std::vector<SynType> types_;
};

}  // namespace g2l2
