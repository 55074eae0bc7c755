#include "g2l2/term.hpp"

#include "g2l2/domain.hpp"

namespace g2l2 {

namespace {

size_t mix(size_t seed, size_t h) {
    return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

TermPtr finish(Term t) {
    size_t sk = mix(0x5bd1e995, static_cast<size_t>(t.kind));
    sk = mix(sk, static_cast<size_t>(t.op + 1));
    sk = mix(sk, static_cast<size_t>(t.argIndex + 1));
    sk = mix(sk, static_cast<size_t>(t.intVal + 1));
    sk = mix(sk, static_cast<size_t>(t.conceptId + 1));
    size_t fu = sk;
    if (t.kind == TermKind::ValueNode) {
        sk = mix(sk, static_cast<size_t>(t.val->kind));
        fu = mix(sk, t.val->numHash);
    }
    for (const auto& k : t.kids) {
        sk = mix(sk, k->skelHash);
        fu = mix(fu, k->fullHash);
    }
    t.skelHash = sk;
    t.fullHash = fu;
    return std::make_shared<const Term>(std::move(t));
}

}  // namespace

TermPtr mkOp(int op, std::vector<TermPtr> kids) {
    Term t;
    t.kind = TermKind::Op;
    t.op = op;
    t.kids = std::move(kids);
    return finish(std::move(t));
}

TermPtr mkArg(int index) {
    Term t;
    t.kind = TermKind::ArgRef;
    t.argIndex = index;
    return finish(std::move(t));
}

TermPtr mkAppArg(int index, TermPtr arg) {
    Term t;
    t.kind = TermKind::AppArg;
    t.argIndex = index;
    t.kids.push_back(std::move(arg));
    return finish(std::move(t));
}

TermPtr mkInt(int v) {
    Term t;
    t.kind = TermKind::IntConst;
    t.intVal = v;
    return finish(std::move(t));
}

TermPtr mkConcept(int conceptId) {
    Term t;
    t.kind = TermKind::ConceptRef;
    t.conceptId = conceptId;
    return finish(std::move(t));
}

TermPtr mkValue(ValuePtr v) {
    Term t;
    t.kind = TermKind::ValueNode;
    t.val = std::move(v);
    return finish(std::move(t));
}

bool termClosed(const Term& t) {
    if (t.kind == TermKind::ArgRef || t.kind == TermKind::AppArg) return false;
    for (const auto& k : t.kids) {
        if (!termClosed(*k)) return false;
    }
    return true;
}

bool skeletonEqual(const Term& a, const Term& b) {
    if (a.kind != b.kind || a.op != b.op || a.argIndex != b.argIndex || a.intVal != b.intVal ||
        a.conceptId != b.conceptId || a.kids.size() != b.kids.size()) {
        return false;
    }
    if (a.kind == TermKind::ValueNode && a.val->kind != b.val->kind) return false;
    for (size_t i = 0; i < a.kids.size(); ++i) {
        if (!skeletonEqual(*a.kids[i], *b.kids[i])) return false;
    }
    return true;
}

bool termEqual(const Term& a, const Term& b, const Tape& tape) {
    if (!skeletonEqual(a, b)) return false;
    return countValueDiffs(a, b, tape) == 0;
}

int countValueDiffs(const Term& a, const Term& b, const Tape& tape,
                    std::vector<SemPrim>* diffKinds) {
    if (a.kind == TermKind::ValueNode) {
        if (a.val == b.val || valueEqual(*a.val, *b.val, tape)) return 0;
        if (diffKinds) diffKinds->push_back(a.val->kind);
        return 1;
    }
    int n = 0;
    for (size_t i = 0; i < a.kids.size(); ++i) {
        n += countValueDiffs(*a.kids[i], *b.kids[i], tape, diffKinds);
    }
    return n;
}

namespace {

TermPtr mergeRec(const std::vector<TermPtr>& ts, Var p, Tape& tape, int vocab) {
    const Term& head = *ts[0];
    bool allSamePtr = true;
    for (const auto& t : ts) {
        if (t != ts[0]) {
            allSamePtr = false;
            break;
        }
    }
    if (allSamePtr) return ts[0];

    if (head.kind == TermKind::ValueNode) {
        bool allEq = true;
        for (size_t i = 1; i < ts.size(); ++i) {
            if (!valueEqual(*head.val, *ts[i]->val, tape)) {
                allEq = false;
                break;
            }
        }
        if (allEq) return ts[0];
        std::vector<ValuePtr> vs;
        vs.reserve(ts.size());
        for (const auto& t : ts) vs.push_back(t->val);
        return mkValue(expectedValue(vs, p, tape, vocab));
    }

    if (head.kids.empty()) return ts[0];
    std::vector<TermPtr> kids(head.kids.size());
    bool changed = false;
    for (size_t i = 0; i < head.kids.size(); ++i) {
        std::vector<TermPtr> sub(ts.size());
        for (size_t j = 0; j < ts.size(); ++j) sub[j] = ts[j]->kids[i];
        kids[i] = mergeRec(sub, p, tape, vocab);
        if (kids[i] != head.kids[i]) changed = true;
    }
    if (!changed) return ts[0];
    Term t;
    t.kind = head.kind;
    t.op = head.op;
    t.argIndex = head.argIndex;
    t.intVal = head.intVal;
    t.conceptId = head.conceptId;
    t.kids = std::move(kids);
    t.val = head.val;
    return finish(std::move(t));
}

}  // namespace

TermPtr mergeTerms(const std::vector<TermPtr>& ts, Var p, Tape& tape, int vocab) {
    if (ts.empty()) throw Error("mergeTerms: empty input");
    return mergeRec(ts, p, tape, vocab);
}

namespace {

// Replaces ArgRef(0) inside a functor argument's body with `inner`.
TermPtr substFunctorBody(const TermPtr& body, const TermPtr& inner) {
    switch (body->kind) {
        case TermKind::ArgRef:
            if (body->argIndex == 0) return inner;
            throw Error("functor body references a foreign argument");
        case TermKind::AppArg:
            throw Error("functor body must not itself take functor arguments");
        case TermKind::Op: {
            std::vector<TermPtr> kids(body->kids.size());
            bool changed = false;
            for (size_t i = 0; i < body->kids.size(); ++i) {
                kids[i] = substFunctorBody(body->kids[i], inner);
                if (kids[i] != body->kids[i]) changed = true;
            }
            if (!changed) return body;
            return mkOp(body->op, std::move(kids));
        }
        default:
            return body;
    }
}

// Binds argument 0 of a term to program `a` (functor or plain) and shifts the
// remaining argument indices down.
TermPtr substFirst(const TermPtr& t, const Program& a, bool functorArg) {
    switch (t->kind) {
        case TermKind::ArgRef:
            if (t->argIndex == 0) {
                if (functorArg) throw Error("functor argument used as a value");
                return a.body;
            }
            return mkArg(t->argIndex - 1);
        case TermKind::AppArg: {
            TermPtr inner = substFirst(t->kids[0], a, functorArg);
            if (t->argIndex == 0) {
                if (!functorArg) throw Error("value argument applied as a functor");
                return substFunctorBody(a.body, inner);
            }
            return mkAppArg(t->argIndex - 1, inner);
        }
        case TermKind::Op: {
            std::vector<TermPtr> kids(t->kids.size());
            for (size_t i = 0; i < t->kids.size(); ++i) kids[i] = substFirst(t->kids[i], a, functorArg);
            return mkOp(t->op, std::move(kids));
        }
        default:
            return t;
    }
}

}  // namespace

Program applyArgument(const Program& f, const Program& a, const Domain& domain, ExecContext& ctx) {
    if (f.args.empty()) throw Error("applyArgument: not a functor program");
    bool functorArg = f.args[0].functor;
    if (functorArg) {
        if (a.args.size() != 1 || a.args[0].functor || a.ret != f.args[0].type ||
            a.args[0].type != f.args[0].type) {
            throw Error("applyArgument: functor argument type mismatch");
        }
    } else {
        if (!a.args.empty() || a.ret != f.args[0].type) {
            throw Error("applyArgument: value argument type mismatch");
        }
    }
    Program out;
    out.args.assign(f.args.begin() + 1, f.args.end());
    out.ret = f.ret;
    out.body = partialEval(substFirst(f.body, a, functorArg), domain, ctx);
    return out;
}

namespace {

std::pair<TermPtr, bool> peRec(const TermPtr& t, const Domain& domain, ExecContext& ctx) {
    switch (t->kind) {
        case TermKind::ValueNode:
        case TermKind::IntConst:
        case TermKind::ConceptRef:
            return {t, true};
        case TermKind::ArgRef:
            return {t, false};
        case TermKind::AppArg: {
            auto [kid, closed] = peRec(t->kids[0], domain, ctx);
            (void)closed;
            if (kid == t->kids[0]) return {t, false};
            return {mkAppArg(t->argIndex, kid), false};
        }
        case TermKind::Op: {
            std::vector<TermPtr> kids(t->kids.size());
            bool changed = false, allClosed = true;
            for (size_t i = 0; i < t->kids.size(); ++i) {
                auto [kid, closed] = peRec(t->kids[i], domain, ctx);
                kids[i] = kid;
                if (kid != t->kids[i]) changed = true;
                if (!closed) allClosed = false;
            }
            if (!allClosed) {
                if (!changed) return {t, false};
                return {mkOp(t->op, std::move(kids)), false};
            }
            std::vector<ValuePtr> argVals(kids.size());
            for (size_t i = 0; i < kids.size(); ++i) {
                if (kids[i]->kind == TermKind::ValueNode) argVals[i] = kids[i]->val;
            }
            Term opTerm;
            opTerm.kind = TermKind::Op;
            opTerm.op = t->op;
            opTerm.kids = kids;
            return {mkValue(domain.evalOp(opTerm, argVals, ctx)), true};
        }
    }
    throw Error("partialEval: unknown term kind");
}

}  // namespace

TermPtr partialEval(const TermPtr& t, const Domain& domain, ExecContext& ctx) {
    return peRec(t, domain, ctx).first;
}

ValuePtr evalClosed(const TermPtr& t, const Domain& domain, ExecContext& ctx) {
    TermPtr r = partialEval(t, domain, ctx);
    if (r->kind != TermKind::ValueNode) throw Error("evalClosed: term has unbound arguments");
    return r->val;
}

std::string printTerm(const Term& t, const Domain& domain,
                      const std::vector<std::string>& argNames) {
    switch (t.kind) {
        case TermKind::Op: {
            std::string s = domain.op(t.op).name + "(";
            for (size_t i = 0; i < t.kids.size(); ++i) {
                if (i) s += ", ";
                s += printTerm(*t.kids[i], domain, argNames);
            }
            return s + ")";
        }
        case TermKind::ArgRef:
            return t.argIndex < static_cast<int>(argNames.size()) ? argNames[t.argIndex]
                                                                  : "arg" + std::to_string(t.argIndex);
        case TermKind::AppArg: {
            std::string f = t.argIndex < static_cast<int>(argNames.size())
                                ? argNames[t.argIndex]
                                : "arg" + std::to_string(t.argIndex);
            return f + "(" + printTerm(*t.kids[0], domain, argNames) + ")";
        }
        case TermKind::IntConst:
            return std::to_string(t.intVal);
        case TermKind::ConceptRef:
            return domain.concepts().at(t.conceptId).name;
        case TermKind::ValueNode:
            return "<" + semPrimName(t.val->kind) + ">";
    }
    return "?";
}

std::string printProgram(const Program& p, const Domain& domain) {
    static const char* kNames[] = {"x", "y", "z"};
    std::vector<std::string> names;
    std::string prefix;
    for (size_t i = 0; i < p.args.size(); ++i) {
        std::string n = i < 3 ? kNames[i] : "a" + std::to_string(i);
        names.push_back(n);
        prefix += "\xce\xbb" + n + ".";  // λ
    }
    return prefix + printTerm(*p.body, domain, names);
}

}  // namespace g2l2
