#include "g2l2/syntax.hpp"

#include <cctype>

namespace g2l2 {

std::string semPrimName(SemPrim p) {
    switch (p) {
        case SemPrim::Str: return "string";
        case SemPrim::ObjSet: return "objset";
        case SemPrim::BoolP: return "bool";
        case SemPrim::Count: return "int";
        case SemPrim::WordDist: return "word";
        case SemPrim::Num: return "num";
    }
    return "?";
}

int SynTable::intern(SynType t) {
    for (size_t i = 0; i < types_.size(); ++i) {
        const SynType& u = types_[i];
        if (u.kind != t.kind) continue;
        switch (t.kind) {
            case SynKind::Primitive:
                if (u.name == t.name) return static_cast<int>(i);
                break;
            case SynKind::Functor:
                if (u.result == t.result && u.argument == t.argument && u.forward == t.forward) {
                    return static_cast<int>(i);
                }
                break;
            case SynKind::Conj:
                if (u.conj == t.conj) return static_cast<int>(i);
                break;
            case SynKind::Pending:
                if (u.conj == t.conj && u.inner == t.inner) return static_cast<int>(i);
                break;
        }
    }
    types_.push_back(std::move(t));
    return static_cast<int>(types_.size()) - 1;
}

int SynTable::primitive(const std::string& name, SemPrim sem) {
    SynType t;
    t.kind = SynKind::Primitive;
    t.name = name;
    t.sem = sem;
    return intern(std::move(t));
}

int SynTable::functor(int result, bool forward, int argument) {
    SynType t;
    t.kind = SynKind::Functor;
    t.result = result;
    t.forward = forward;
    t.argument = argument;
    return intern(std::move(t));
}

int SynTable::conj(ConjKind kind) {
    SynType t;
    t.kind = SynKind::Conj;
    t.conj = kind;
    return intern(std::move(t));
}

int SynTable::pending(ConjKind kind, int inner) {
    SynType t;
    t.kind = SynKind::Pending;
    t.conj = kind;
    t.inner = inner;
    return intern(std::move(t));
}

const SynType& SynTable::at(int id) const {
    if (id < 0 || id >= static_cast<int>(types_.size())) throw Error("bad syntactic-type id");
    return types_[id];
}

std::string SynTable::print(int id) const {
    const SynType& t = at(id);
    switch (t.kind) {
        case SynKind::Primitive:
            return t.name;
        case SynKind::Functor: {
            std::string res = print(t.result);
            std::string arg = print(t.argument);
            if (at(t.argument).kind == SynKind::Functor) arg = "(" + arg + ")";
            return res + (t.forward ? "/" : "\\") + arg;
        }
        case SynKind::Conj:
            return t.conj == ConjKind::And ? "CONJ_AND" : "CONJ_OR";
        case SynKind::Pending:
            return (t.conj == ConjKind::And ? "PENDING_AND[" : "PENDING_OR[") + print(t.inner) +
                   "]";
    }
    return "?";
}

namespace {

// Grammar: type := atom (slash atom)* ; atom := NAME | '(' type ')'
struct TypeParser {
    const std::string& s;
    size_t pos = 0;
    SynTable& tab;

    int parseType() {
        int cur = parseAtom();
        while (pos < s.size() && (s[pos] == '/' || s[pos] == '\\')) {
            bool fwd = s[pos] == '/';
            ++pos;
            int arg = parseAtom();
            cur = tab.functor(cur, fwd, arg);
        }
        return cur;
    }

    int parseAtom() {
        if (pos < s.size() && s[pos] == '(') {
            ++pos;
            int t = parseType();
            if (pos >= s.size() || s[pos] != ')') throw DataError("type parse: missing ')' in " + s);
            ++pos;
            return t;
        }
        size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            ++pos;
        }
        if (pos == start) throw DataError("type parse: bad atom in '" + s + "'");
        std::string name = s.substr(start, pos - start);
        if (name == "CONJ_AND") return tab.conj(ConjKind::And);
        if (name == "CONJ_OR") return tab.conj(ConjKind::Or);
        for (size_t i = 0; i < tab.size(); ++i) {
            if (tab.at(static_cast<int>(i)).kind == SynKind::Primitive &&
                tab.at(static_cast<int>(i)).name == name) {
                return static_cast<int>(i);
            }
        }
        throw DataError("type parse: unknown primitive '" + name + "'");
    }
};

}  // namespace

int SynTable::parse(const std::string& text) const {
    // Parsing interns functor combinations of existing primitives.
    TypeParser p{text, 0, const_cast<SynTable&>(*this)};
    int t = p.parseType();
    if (p.pos != text.size()) throw DataError("type parse: trailing input in '" + text + "'");
    return t;
}

int SynTable::arity(int id) const {
    const SynType& t = at(id);
    if (t.kind != SynKind::Functor) return 0;
    return 1 + arity(t.result);
}

SemTypeSig SynTable::semSig(int id) const {
    const SynType& t = at(id);
    switch (t.kind) {
        case SynKind::Primitive:
            return {t.sem, {}};
        case SynKind::Functor: {
            SemTypeSig res = semSig(t.result);
            const SynType& a = at(t.argument);
            SemTypeSig::Arg arg;
            if (a.kind == SynKind::Primitive) {
                arg = {a.sem, false};
            } else if (a.kind == SynKind::Functor) {
                SemTypeSig as = semSig(t.argument);
                if (as.args.size() != 1 || as.args[0].functor || as.args[0].type != as.ret) {
                    throw Error("unsupported functor-argument shape: " + print(t.argument));
                }
                arg = {as.ret, true};
            } else {
                throw Error("conj types have no semantic signature");
            }
            // Consumption order: innermost slash first.
            res.args.insert(res.args.begin(), arg);
            return res;
        }
        default:
            throw Error("conj types have no semantic signature");
    }
}

std::optional<CombineResult> SynTable::canCombine(int left, int right) const {
    const SynType& l = at(left);
    const SynType& r = at(right);
    // Coordination start: CONJ + right conjunct.
    if (l.kind == SynKind::Conj) {
        if (r.kind == SynKind::Primitive || r.kind == SynKind::Functor) {
            if (l.conj == ConjKind::Or &&
                !(r.kind == SynKind::Primitive && r.sem == SemPrim::ObjSet)) {
                return std::nullopt;  // OR coordinates object sets only
            }
            int p = const_cast<SynTable*>(this)->pending(l.conj, right);
            return CombineResult{CombineRule::CoordStart, p};
        }
        return std::nullopt;
    }
    // Coordination finish: left conjunct + pending.
    if (r.kind == SynKind::Pending) {
        if (r.conj == ConjKind::And) {
            if (left == r.inner) return CombineResult{CombineRule::CoordFinish, left};
            return std::nullopt;
        }
        // OR: objset CONJ_OR objset -> objset\objset
        if (l.kind == SynKind::Primitive && l.sem == SemPrim::ObjSet && left == r.inner) {
            int f = const_cast<SynTable*>(this)->functor(left, false, left);
            return CombineResult{CombineRule::CoordFinish, f};
        }
        return std::nullopt;
    }
    if (l.kind == SynKind::Pending || r.kind == SynKind::Conj) return std::nullopt;
    // Forward application: X/Y  Y -> X
    if (l.kind == SynKind::Functor && l.forward && l.argument == right) {
        return CombineResult{CombineRule::ForwardApp, l.result};
    }
    // Backward application: X  X\Y ... i.e. right = X\Y with Y on the left.
    if (r.kind == SynKind::Functor && !r.forward && r.argument == left) {
        return CombineResult{CombineRule::BackwardApp, r.result};
    }
    return std::nullopt;
}

}  // namespace g2l2
