#include "g2l2/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace g2l2 {

int Lexicon::add(LexiconEntry e) {
    int id = static_cast<int>(entries_.size());
    if (!perWord_.count(e.word)) {
        perWord_[e.word] = {};
        words_.push_back(e.word);
    }
    if (e.tauParam.empty()) {
        e.tauParam = "tau/" + e.word + "/" + std::to_string(perWord_[e.word].size());
    }
    perWord_[e.word].push_back(id);
    entries_.push_back(std::move(e));
    return id;
}

std::vector<int> Lexicon::entriesFor(const std::string& word) const {
    auto it = perWord_.find(word);
    if (it == perWord_.end()) throw DataError("word not in lexicon: " + word);
    std::vector<int> out;
    for (int id : it->second) {
        if (entries_[id].active) out.push_back(id);
    }
    return out;
}

size_t Lexicon::activeCount() const {
    size_t n = 0;
    for (const auto& e : entries_) n += e.active ? 1 : 0;
    return n;
}

void Lexicon::initTaus(ParamStore& store) const {
    for (const auto& e : entries_) {
        if (!store.has(e.tauParam)) store.add(e.tauParam, {0.0});
    }
}

int Lexicon::prune(const std::map<int, double>& usage, double eps) {
    std::vector<int> ids;
    for (size_t id = 0; id < entries_.size(); ++id) {
        if (!entries_[id].active || entries_[id].isEmpty) continue;
        double u = 0.0;
        if (auto it = usage.find(static_cast<int>(id)); it != usage.end()) u = it->second;
        if (u < eps) ids.push_back(static_cast<int>(id));
    }
    return pruneIds(ids);
}

int Lexicon::pruneIds(const std::vector<int>& ids) {
    std::set<int> drop(ids.begin(), ids.end());
    int removed = 0;
    for (const auto& [word, wordIds] : perWord_) {
        int remaining = 0;
        for (int id : wordIds) remaining += entries_[id].active ? 1 : 0;
        for (int id : wordIds) {
            if (remaining <= 1) break;
            if (!entries_[id].active || entries_[id].isEmpty || !drop.count(id)) continue;
            entries_[id].active = false;
            --remaining;
            ++removed;
        }
    }
    return removed;
}

void Lexicon::reactivateAll() {
    for (auto& e : entries_) e.active = true;
}

std::vector<char> Lexicon::activeMask() const {
    std::vector<char> m(entries_.size());
    for (size_t i = 0; i < entries_.size(); ++i) m[i] = entries_[i].active ? 1 : 0;
    return m;
}

void Lexicon::setActiveMask(const std::vector<char>& mask) {
    if (mask.size() != entries_.size()) throw Error("active mask size mismatch");
    for (size_t i = 0; i < entries_.size(); ++i) entries_[i].active = mask[i] != 0;
}

void Lexicon::dump(std::ostream& os, const ParamStore& store) const {
    os.precision(17);
    for (const auto& word : words_) {
        std::vector<int> ids = entriesFor(word);
        double mx = -1e300;
        std::vector<double> taus(ids.size());
        for (size_t i = 0; i < ids.size(); ++i) {
            taus[i] = store.data(entries_[ids[i]].tauParam)[0];
            mx = std::max(mx, taus[i]);
        }
        double z = 0.0;
        for (double t : taus) z += std::exp(t - mx);
        for (size_t i = 0; i < ids.size(); ++i) {
            const LexiconEntry& e = entries_[ids[i]];
            std::string syn, prog;
            if (e.isEmpty) {
                syn = "EMPTY";
                prog = "-";
            } else {
                syn = dom_->syn().print(e.syn);
                const SynType& st = dom_->syn().at(e.syn);
                prog = (st.kind == SynKind::Conj) ? "-" : printProgram(e.prog, *dom_);
            }
            os << word << '\t' << syn << '\t' << prog << '\t' << taus[i] << '\t'
               << std::exp(taus[i] - mx) / z << '\n';
        }
    }
}

Lexicon Lexicon::load(std::istream& is, const Domain& dom, ParamStore& store) {
    Lexicon lex(dom);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string word, syn, prog, tau, p;
        if (!std::getline(ss, word, '\t') || !std::getline(ss, syn, '\t') ||
            !std::getline(ss, prog, '\t') || !std::getline(ss, tau, '\t')) {
            throw DataError("lexicon snapshot: malformed line: " + line);
        }
        LexiconEntry e;
        e.word = word;
        if (syn == "EMPTY") {
            e.isEmpty = true;
        } else {
            e.syn = dom.syn().parse(syn);
            if (dom.syn().at(e.syn).kind != SynKind::Conj) {
                SemTypeSig sig = dom.syn().semSig(e.syn);
                e.prog = parseProgram(prog, dom, sig);
            }
        }
        int id = lex.add(std::move(e));
        const std::string& name = lex.entry(id).tauParam;
        double t = std::stod(tau);
        if (store.has(name)) {
            store.data(name) = {t};
        } else {
            store.add(name, {t});
        }
    }
    return lex;
}

// ---------------------------------------------------------------------------
// String-DSL program enumeration.

namespace {

struct Cand {
    TermPtr t;
    int ops;
    int depth;
    int use[2] = {0, 0};  // argument reference counts
    bool topEmpty = false;
};

std::string serializeTerm(const Term& t) {
    switch (t.kind) {
        case TermKind::Op: {
            std::string s = "O" + std::to_string(t.op) + "(";
            for (const auto& k : t.kids) s += serializeTerm(*k) + ",";
            return s + ")";
        }
        case TermKind::ArgRef:
            return "A" + std::to_string(t.argIndex);
        case TermKind::AppArg:
            return "F" + std::to_string(t.argIndex) + "(" + serializeTerm(*t.kids[0]) + ")";
        case TermKind::IntConst:
            return std::to_string(t.intVal);
        default:
            throw Error("serializeTerm: unexpected kind");
    }
}

// All bodies under the entry-enumeration constraints for a given argument
// inventory.  `plain` lists plain argument indices; `functorIdx` is -1 or the
// functor argument's index.
std::vector<Cand> enumerateBodies(const ScanDomain& dom, const std::vector<int>& plain,
                                  int functorIdx) {
    constexpr int kMaxOps = 2, kMaxDepth = 3, kMaxFunctorUse = 2;
    std::vector<Cand> all;
    std::set<std::string> seen;
    auto push = [&](Cand c) {
        std::string key = serializeTerm(*c.t);
        if (seen.insert(key).second) all.push_back(std::move(c));
    };

    for (int p = 0; p < ScanDomain::kVocab; ++p) {
        push({mkOp(dom.opPrim(p), {}), 1, 1});
    }
    {
        Cand c{mkOp(dom.opEmpty(), {}), 1, 1};
        c.topEmpty = true;
        push(c);
    }
    for (int a : plain) {
        Cand c{mkArg(a), 0, 1};
        c.use[a] = 1;
        push(c);
    }

    bool grew = true;
    while (grew) {
        grew = false;
        size_t n = all.size();
        for (size_t i = 0; i < n; ++i) {
            Cand x = all[i];
            // repeat(x, m)
            if (x.ops + 1 <= kMaxOps && x.depth + 1 <= kMaxDepth) {
                for (int m = 2; m <= 4; ++m) {
                    Cand c{mkOp(dom.opRepeat(), {x.t, mkInt(m)}), x.ops + 1, x.depth + 1};
                    c.use[0] = x.use[0];
                    c.use[1] = x.use[1];
                    size_t before = all.size();
                    push(c);
                    grew |= all.size() != before;
                }
            }
            // f(x)
            if (functorIdx >= 0 && x.depth + 1 <= kMaxDepth &&
                x.use[functorIdx] + 1 <= kMaxFunctorUse) {
                Cand c{mkAppArg(functorIdx, x.t), x.ops, x.depth + 1};
                c.use[0] = x.use[0];
                c.use[1] = x.use[1];
                c.use[functorIdx] += 1;
                size_t before = all.size();
                push(c);
                grew |= all.size() != before;
            }
            // concat(x, y)
            for (size_t j = 0; j < n; ++j) {
                const Cand& y = all[j];
                if (x.topEmpty || y.topEmpty) continue;
                if (x.ops + y.ops + 1 > kMaxOps) continue;
                if (std::max(x.depth, y.depth) + 1 > kMaxDepth) continue;
                Cand c{mkOp(dom.opConcat(), {x.t, y.t}), x.ops + y.ops + 1,
                       std::max(x.depth, y.depth) + 1};
                bool ok = true;
                for (int a = 0; a < 2; ++a) {
                    c.use[a] = x.use[a] + y.use[a];
                    int cap = (a == functorIdx) ? kMaxFunctorUse : 1;
                    if (c.use[a] > cap) ok = false;
                }
                if (!ok) continue;
                size_t before = all.size();
                push(c);
                grew |= all.size() != before;
            }
        }
    }
    return all;
}

std::vector<TermPtr> filterBodies(std::vector<Cand> all, const std::vector<int>& plain,
                                  int functorIdx) {
    std::vector<std::pair<std::string, TermPtr>> keep;
    for (const auto& c : all) {
        bool ok = true;
        for (int a = 0; a < 2; ++a) {
            bool isPlain = std::find(plain.begin(), plain.end(), a) != plain.end();
            if (isPlain && c.use[a] != 1) ok = false;
            if (a == functorIdx && (c.use[a] < 1 || c.use[a] > 2)) ok = false;
            if (!isPlain && a != functorIdx && c.use[a] != 0) ok = false;
        }
        if (ok) keep.emplace_back(serializeTerm(*c.t), c.t);
    }
    std::sort(keep.begin(), keep.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<TermPtr> out;
    out.reserve(keep.size());
    for (auto& [k, t] : keep) out.push_back(std::move(t));
    return out;
}

}  // namespace

ScanProgramSets enumerateScanPrograms(const ScanDomain& dom) {
    ScanProgramSets s;
    s.constants = filterBodies(enumerateBodies(dom, {}, -1), {}, -1);
    s.oneArg = filterBodies(enumerateBodies(dom, {0}, -1), {0}, -1);
    s.twoArg = filterBodies(enumerateBodies(dom, {0, 1}, -1), {0, 1}, -1);
    s.functorArg = filterBodies(enumerateBodies(dom, {1}, 0), {1}, 0);
    return s;
}

Lexicon induceScanLexicon(ScanDomain& dom, const std::vector<std::string>& words) {
    ScanProgramSets sets = enumerateScanPrograms(dom);
    SynTable& syn = dom.syn();
    int V = dom.synV(), S = dom.synS();
    int fwdVV = syn.functor(V, true, V);    // V/V
    int bwdVV = syn.functor(V, false, V);   // V\V
    int vvv = syn.functor(bwdVV, true, V);  // V\V/V
    int svv = syn.functor(syn.functor(S, false, V), true, V);  // S\V/V
    int vvf = syn.functor(bwdVV, true, bwdVV);                 // V\V/(V\V)

    struct Family {
        const std::vector<TermPtr>* bodies;
        std::vector<int> syns;
    };
    std::vector<Family> fams = {
        {&sets.constants, {V}},
        {&sets.oneArg, {fwdVV, bwdVV}},
        {&sets.twoArg, {vvv, svv}},
        {&sets.functorArg, {vvf}},
    };

    Lexicon lex(dom);
    for (const auto& w : words) {
        for (const auto& fam : fams) {
            for (int sy : fam.syns) {
                SemTypeSig sig = syn.semSig(sy);
                for (const auto& body : *fam.bodies) {
                    LexiconEntry e;
                    e.word = w;
                    e.syn = sy;
                    e.prog = {sig.args, sig.ret, body};
                    lex.add(std::move(e));
                }
            }
        }
    }
    return lex;
}

// ---------------------------------------------------------------------------
// Visual templates.

Lexicon induceVisualLexicon(ObjsetDomain& dom, const std::vector<std::string>& words) {
    SynTable& syn = dom.syn();
    int os = dom.synObjset(), bl = dom.synBool(), ct = dom.synInt(), wd = dom.synWord();
    int osOs = syn.functor(os, true, os);                       // objset/objset
    int relSyn = syn.functor(syn.functor(os, false, os), true, os);  // objset\objset/objset
    int existSyn = syn.functor(bl, true, os);
    int countSyn = syn.functor(ct, true, os);
    int querySyn = syn.functor(wd, true, os);
    int conjAnd = syn.conj(ConjKind::And);
    int conjOr = syn.conj(ConjKind::Or);

    Lexicon lex(dom);
    for (const auto& w : words) {
        TermPtr obj = mkConcept(dom.objConceptId(w));
        TermPtr rel = mkConcept(dom.relConceptId(w));
        TermPtr attr = mkConcept(dom.attrConceptId(w));
        TermPtr scene = mkOp(dom.opScene(), {});
        auto addE = [&](int sy, TermPtr body) {
            SemTypeSig sig = syn.semSig(sy);
            LexiconEntry e;
            e.word = w;
            e.syn = sy;
            e.prog = {sig.args, sig.ret, std::move(body)};
            lex.add(std::move(e));
        };
        addE(os, scene);
        addE(os, mkOp(dom.opFilter(), {scene, obj}));
        addE(osOs, mkOp(dom.opFilter(), {mkArg(0), obj}));
        // relate(a, b, r) keeps objects of a related by r to the referent b;
        // both bindings of (left conjunct, right conjunct) are offered.
        addE(relSyn, mkOp(dom.opRelate(), {mkArg(0), mkArg(1), rel}));
        addE(relSyn, mkOp(dom.opRelate(), {mkArg(1), mkArg(0), rel}));
        addE(existSyn, mkOp(dom.opExist(), {mkArg(0)}));
        addE(countSyn, mkOp(dom.opCount(), {mkArg(0)}));
        addE(querySyn, mkOp(dom.opQuery(), {mkArg(0), attr}));
        {
            LexiconEntry e;
            e.word = w;
            e.syn = conjAnd;
            lex.add(std::move(e));
        }
        {
            LexiconEntry e;
            e.word = w;
            e.syn = conjOr;
            lex.add(std::move(e));
        }
        {
            LexiconEntry e;
            e.word = w;
            e.isEmpty = true;
            lex.add(std::move(e));
        }
    }
    return lex;
}

// ---------------------------------------------------------------------------
// Program-text parsing (inverse of printProgram).

namespace {

struct ProgParser {
    const std::string& s;
    size_t pos = 0;
    const Domain& dom;
    std::vector<std::string> argNames;

    void skipWs() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eatLambda() {
        skipWs();
        if (s.compare(pos, 2, "\xce\xbb") == 0) {
            pos += 2;
            return true;
        }
        if (s.compare(pos, 7, "lambda ") == 0) {
            pos += 7;
            return true;
        }
        return false;
    }

    std::string name() {
        skipWs();
        size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '_' || s[pos] == ':')) {
            ++pos;
        }
        if (pos == start) throw DataError("program parse: expected name in '" + s + "'");
        return s.substr(start, pos - start);
    }

    void expect(char c) {
        skipWs();
        if (pos >= s.size() || s[pos] != c) {
            throw DataError(std::string("program parse: expected '") + c + "' in '" + s + "'");
        }
        ++pos;
    }

    TermPtr term() {
        skipWs();
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            return mkInt(std::stoi(s.substr(start, pos - start)));
        }
        std::string n = name();
        auto arg = std::find(argNames.begin(), argNames.end(), n);
        skipWs();
        bool call = pos < s.size() && s[pos] == '(';
        if (arg != argNames.end()) {
            int idx = static_cast<int>(arg - argNames.begin());
            if (!call) return mkArg(idx);
            expect('(');
            TermPtr inner = term();
            expect(')');
            return mkAppArg(idx, inner);
        }
        if (n.find(':') != std::string::npos) return mkConcept(dom.conceptId(n));
        int op = dom.opId(n);
        expect('(');
        std::vector<TermPtr> kids;
        skipWs();
        if (pos < s.size() && s[pos] != ')') {
            kids.push_back(term());
            skipWs();
            while (pos < s.size() && s[pos] == ',') {
                ++pos;
                kids.push_back(term());
                skipWs();
            }
        }
        expect(')');
        return mkOp(op, std::move(kids));
    }
};

}  // namespace

Program parseProgram(const std::string& text, const Domain& dom, const SemTypeSig& sig) {
    ProgParser p{text, 0, dom, {}};
    for (size_t i = 0; i < sig.args.size(); ++i) {
        if (!p.eatLambda()) throw DataError("program parse: expected lambda in '" + text + "'");
        p.argNames.push_back(p.name());
        p.expect('.');
    }
    TermPtr body = p.term();
    p.skipWs();
    if (p.pos != text.size()) throw DataError("program parse: trailing input in '" + text + "'");
    return {sig.args, sig.ret, std::move(body)};
}

Lexicon arithFixtureLexicon(ArithDomain& dom) {
    Lexicon lex(dom);
    int n = dom.synN();
    int nn = dom.syn().functor(n, false, n);
    SemTypeSig::Arg num{SemPrim::Num, false};
    auto lit = [&](int v) { return mkOp(dom.opNum(), {mkInt(v)}); };
    lex.add({"ONE", false, n, {{}, SemPrim::Num, lit(1)}, "", true});
    for (const char* w : {"PLUS_ONE", "MUL_THREE"}) {
        lex.add({w, false, nn, {{num}, SemPrim::Num, mkOp(dom.opAdd(), {mkArg(0), lit(1)})}, "",
                 true});
        lex.add({w, false, nn, {{num}, SemPrim::Num, mkOp(dom.opMul(), {mkArg(0), lit(3)})}, "",
                 true});
    }
    return lex;
}

}  // namespace g2l2
