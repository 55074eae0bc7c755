#pragma once

// The hand-written SCAN lexicon (one entry per word) used for warm-start and
// fixture tests. All entries are members of the enumerated candidate space.

#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "g2l2/lexicon.hpp"

namespace g2l2::testutil {

inline const std::vector<std::tuple<std::string, std::string, std::string>>&
scanOracleEntries() {
    static const std::vector<std::tuple<std::string, std::string, std::string>> e = {
        {"walk", "V", "walk()"},
        {"look", "V", "look()"},
        {"run", "V", "run()"},
        {"jump", "V", "jump()"},
        {"turn", "V", "empty()"},
        {"left", "V\\V", "\xce\xbbx.concat(lturn(), x)"},
        {"right", "V\\V", "\xce\xbbx.concat(rturn(), x)"},
        {"opposite", "V\\V/(V\\V)", "\xce\xbbx.\xce\xbby.x(x(y))"},
        {"around", "V\\V/(V\\V)", "\xce\xbbx.\xce\xbby.repeat(x(y), 4)"},
        {"twice", "V\\V", "\xce\xbbx.repeat(x, 2)"},
        {"thrice", "V\\V", "\xce\xbbx.repeat(x, 3)"},
        {"and", "S\\V/V", "\xce\xbbx.\xce\xbby.concat(y, x)"},
        {"after", "S\\V/V", "\xce\xbbx.\xce\xbby.concat(x, y)"},
    };
    return e;
}

// Ids of the oracle entries inside an induced lexicon.
inline std::vector<int> findScanOracleIds(const Lexicon& lex) {
    const Domain& dom = lex.domain();
    std::vector<int> out;
    for (const auto& [word, syn, prog] : scanOracleEntries()) {
        bool found = false;
        for (int id : lex.entriesFor(word)) {
            const LexiconEntry& e = lex.entry(id);
            if (e.isEmpty) continue;
            if (dom.syn().print(e.syn) == syn && printProgram(e.prog, dom) == prog) {
                out.push_back(id);
                found = true;
                break;
            }
        }
        if (!found) throw std::runtime_error("oracle entry missing for word: " + word);
    }
    return out;
}

// Deactivates everything except the oracle entries (warm start at uniform
// weights over a single candidate per word).
inline void restrictToScanOracle(Lexicon& lex) {
    std::vector<char> keep(lex.size(), 0);
    for (int id : findScanOracleIds(lex)) keep[id] = 1;
    std::vector<int> drop;
    for (size_t id = 0; id < lex.size(); ++id) {
        if (!keep[id]) drop.push_back(static_cast<int>(id));
    }
    lex.pruneIds(drop);
}

}  // namespace g2l2::testutil
