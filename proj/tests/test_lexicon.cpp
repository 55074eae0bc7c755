#include "doctest.h"

#include <set>
#include <sstream>

#include "g2l2/lexicon.hpp"
#include "scan_oracle.hpp"

using namespace g2l2;
using namespace g2l2::testutil;

TEST_CASE("string-DSL enumeration has the documented family sizes") {
    ScanDomain dom;
    ScanProgramSets sets = enumerateScanPrograms(dom);
    CHECK(sets.constants.size() == 28);
    CHECK(sets.oneArg.size() == 25);
    CHECK(sets.twoArg.size() == 20);
    CHECK(sets.functorArg.size() == 60);
}

TEST_CASE("induced SCAN lexicon has 178 entries per word") {
    ScanDomain dom;
    Lexicon lex = induceScanLexicon(dom, {"alpha", "beta"});
    CHECK(lex.size() == 2 * 178);
    CHECK(lex.entriesFor("alpha").size() == 178);
    // 28 constants as V; 25 one-arg as V/V and V\V; 20 two-arg as V\V/V and
    // S\V/V; 60 functor-arg as V\V/(V\V).
    std::map<std::string, int> bySyn;
    for (int id : lex.entriesFor("alpha")) {
        bySyn[dom.syn().print(lex.entry(id).syn)]++;
    }
    CHECK(bySyn["V"] == 28);
    CHECK(bySyn["V/V"] == 25);
    CHECK(bySyn["V\\V"] == 25);
    CHECK(bySyn["V\\V/V"] == 20);
    CHECK(bySyn["S\\V/V"] == 20);
    CHECK(bySyn["V\\V/(V\\V)"] == 60);
}

TEST_CASE("enumerated programs are unique and satisfy the constraints") {
    ScanDomain dom;
    Lexicon lex = induceScanLexicon(dom, {"w"});
    std::set<std::string> seen;
    for (int id : lex.entriesFor("w")) {
        const LexiconEntry& e = lex.entry(id);
        std::string key = dom.syn().print(e.syn) + " " + printProgram(e.prog, dom);
        CHECK(seen.insert(key).second);
    }
}

TEST_CASE("well-known candidate programs are among the enumerated entries") {
    ScanDomain dom;
    Lexicon lex = induceScanLexicon(dom, {"w"});
    std::set<std::string> progs;
    for (int id : lex.entriesFor("w")) {
        const LexiconEntry& e = lex.entry(id);
        progs.insert(dom.syn().print(e.syn) + " " + printProgram(e.prog, dom));
    }
    CHECK(progs.count("V/V \xce\xbbx.concat(look(), x)"));
    CHECK(progs.count("V\\V/(V\\V) \xce\xbbx.\xce\xbby.concat(y, x(walk()))"));
    CHECK(progs.count("V\\V \xce\xbbx.x"));
    CHECK(progs.count("V\\V \xce\xbbx.repeat(x, 2)"));
    CHECK(progs.count("V jump()"));
    CHECK(progs.count("V empty()"));
}

TEST_CASE("the full hand-written SCAN lexicon is inside the candidate space") {
    ScanDomain dom;
    std::vector<std::string> words;
    for (const auto& [w, s, p] : scanOracleEntries()) words.push_back(w);
    Lexicon lex = induceScanLexicon(dom, words);
    CHECK(findScanOracleIds(lex).size() == words.size());
}

TEST_CASE("visual lexicon carries the fixed template set per word") {
    ObjsetDomain dom({"shiny", "cubes"});
    Lexicon lex = induceVisualLexicon(dom, {"shiny", "cubes"});
    std::vector<int> ids = lex.entriesFor("shiny");
    CHECK(ids.size() == 11);
    int empties = 0, conjs = 0;
    std::set<std::string> progs;
    for (int id : ids) {
        const LexiconEntry& e = lex.entry(id);
        if (e.isEmpty) {
            ++empties;
            continue;
        }
        if (!e.prog.body) {
            ++conjs;
            continue;
        }
        progs.insert(dom.syn().print(e.syn) + " " + printProgram(e.prog, dom));
    }
    CHECK(empties == 1);
    CHECK(conjs == 2);  // CONJ_AND + CONJ_OR
    CHECK(progs.count("objset/objset \xce\xbbx.filter(x, shiny:obj)"));
    CHECK(progs.count("bool/objset \xce\xbbx.exist(x)"));
    CHECK(progs.count("int/objset \xce\xbbx.count(x)"));
    CHECK(progs.count("word/objset \xce\xbbx.query(x, shiny:attr)"));
}

TEST_CASE("pruning never empties a word and empty entries survive") {
    ScanDomain dom;
    Lexicon lex = induceScanLexicon(dom, {"w"});
    std::vector<int> all = lex.entriesFor("w");
    CHECK(lex.pruneIds(all) == static_cast<int>(all.size()) - 1);
    CHECK(lex.entriesFor("w").size() == 1);
    lex.reactivateAll();
    CHECK(lex.entriesFor("w").size() == 178);
    // Usage-based pruning keeps exactly the used entries.
    std::map<int, double> usage = {{all[3], 1.0}, {all[40], 0.2}};
    lex.prune(usage, 1e-4);
    std::vector<int> left = lex.entriesFor("w");
    CHECK(left == std::vector<int>{all[3], all[40]});
}

TEST_CASE("dump and load round-trip the lexicon and its weights") {
    ScanDomain dom;
    Lexicon lex = induceScanLexicon(dom, {"jump", "twice"});
    ParamStore params;
    lex.initTaus(params);
    int i = 0;
    for (const auto& w : {"jump", "twice"}) {
        for (int id : lex.entriesFor(w)) {
            params.data(lex.entry(id).tauParam)[0] = 0.01 * (++i) - 1.0;
        }
    }
    lex.pruneIds({lex.entriesFor("jump")[5]});

    std::ostringstream os;
    lex.dump(os, params);

    ScanDomain dom2;
    ParamStore params2;
    std::istringstream is(os.str());
    Lexicon lex2 = Lexicon::load(is, dom2, params2);
    CHECK(lex2.activeCount() == lex.activeCount());
    for (const auto& w : {"jump", "twice"}) {
        auto a = lex.entriesFor(w);
        auto b = lex2.entriesFor(w);
        REQUIRE(a.size() == b.size());
        for (size_t k = 0; k < a.size(); ++k) {
            const LexiconEntry& ea = lex.entry(a[k]);
            const LexiconEntry& eb = lex2.entry(b[k]);
            CHECK(dom.syn().print(ea.syn) == dom2.syn().print(eb.syn));
            CHECK(printProgram(ea.prog, dom) == printProgram(eb.prog, dom2));
            CHECK(params.data(ea.tauParam)[0] ==
                  doctest::Approx(params2.data(eb.tauParam)[0]).epsilon(1e-15));
        }
    }
}

TEST_CASE("program text round-trips through parseProgram") {
    ScanDomain dom;
    Lexicon lex = induceScanLexicon(dom, {"w"});
    for (int id : lex.entriesFor("w")) {
        const LexiconEntry& e = lex.entry(id);
        std::string text = printProgram(e.prog, dom);
        Program p = parseProgram(text, dom, dom.syn().semSig(e.syn));
        CHECK(printProgram(p, dom) == text);
    }
    ObjsetDomain vdom({"shiny"});
    Lexicon vlex = induceVisualLexicon(vdom, {"shiny"});
    for (int id : vlex.entriesFor("shiny")) {
        const LexiconEntry& e = vlex.entry(id);
        if (e.isEmpty || !e.prog.body) continue;
        std::string text = printProgram(e.prog, vdom);
        Program p = parseProgram(text, vdom, vdom.syn().semSig(e.syn));
        CHECK(printProgram(p, vdom) == text);
    }
}

TEST_CASE("arith fixture lexicon matches the walkthrough") {
    ArithDomain dom;
    Lexicon lex = arithFixtureLexicon(dom);
    CHECK(lex.entriesFor("ONE").size() == 1);
    CHECK(lex.entriesFor("PLUS_ONE").size() == 2);
    CHECK(lex.entriesFor("MUL_THREE").size() == 2);
    CHECK(printProgram(lex.entry(lex.entriesFor("ONE")[0]).prog, dom) == "num(1)");
}
