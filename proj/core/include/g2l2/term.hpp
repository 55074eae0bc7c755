#pragma once

// Program terms: trees over DSL operations, constants, concept references,
// bound-argument references and cached execution values.  Bound arguments use
// positional indices into the owning program's remaining-argument list, in
// syntactic consumption order (innermost slash first).

#include <memory>
#include <string>
#include <vector>

#include "g2l2/syntax.hpp"
#include "g2l2/value.hpp"

namespace g2l2 {

class Domain;
struct ExecContext;

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind : uint8_t {
    Op,          // domain operation over kids
    ArgRef,      // bound argument (plain value)
    AppArg,      // functor-typed bound argument applied to kids[0]
    IntConst,    // integer literal (repeat counts)
    ConceptRef,  // concept slot, bound to a domain concept id
    ValueNode,   // cached execution result of a closed subtree
};

struct Term {
    TermKind kind;
    int op = -1;
    std::vector<TermPtr> kids;
    int argIndex = 0;
    int intVal = 0;
    int conceptId = -1;
    ValuePtr val;

    size_t skelHash = 0;  // structure hash; ValueNodes contribute kind only
    size_t fullHash = 0;  // structure + value content hashes
};

TermPtr mkOp(int op, std::vector<TermPtr> kids);
TermPtr mkArg(int index);
TermPtr mkAppArg(int index, TermPtr arg);
TermPtr mkInt(int v);
TermPtr mkConcept(int conceptId);
TermPtr mkValue(ValuePtr v);

// A program is a term plus the list of not-yet-bound arguments.
struct Program {
    std::vector<SemTypeSig::Arg> args;
    SemPrim ret;
    TermPtr body;
};

bool termClosed(const Term& t);

// Structural equality ignoring ValueNode contents (kinds still compared).
bool skeletonEqual(const Term& a, const Term& b);

// Structural + exact content equality.
bool termEqual(const Term& a, const Term& b, const Tape& tape);

// Walks a and b in lockstep (must be skeleton-equal); counts positions whose
// ValueNodes differ and records the kinds found there.
int countValueDiffs(const Term& a, const Term& b, const Tape& tape,
                    std::vector<SemPrim>* diffKinds = nullptr);

// Rebuilds one term from skeleton-equal inputs; at each ValueNode position
// where contents differ, substitutes the softmax(p)-expected value.
TermPtr mergeTerms(const std::vector<TermPtr>& ts, Var p, Tape& tape, int vocab);

// Binds program argument 0 of `f` to `a`.  If the argument is functor-typed,
// `a` must be a one-argument program whose applications are inlined at every
// AppArg(0) site.  Remaining argument indices shift down by one.  Newly closed
// subtrees are partially evaluated through the domain.
Program applyArgument(const Program& f, const Program& a, const Domain& domain, ExecContext& ctx);

// Replaces every maximal closed subtree by its ValueNode (bottom-up domain
// evaluation). Terms already in this form are returned unchanged.
TermPtr partialEval(const TermPtr& t, const Domain& domain, ExecContext& ctx);

// Fully evaluates a closed term.
ValuePtr evalClosed(const TermPtr& t, const Domain& domain, ExecContext& ctx);

// λ-notation printer; argument names x, y; functor args print as applications.
std::string printProgram(const Program& p, const Domain& domain);
std::string printTerm(const Term& t, const Domain& domain,
                      const std::vector<std::string>& argNames);

}  // namespace g2l2
