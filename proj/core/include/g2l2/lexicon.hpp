#pragma once

// Lexicon induction: per-word candidate entries (syntactic type + semantic
// program template + learnable log-weight), the string-DSL program enumerator,
// the visual template instantiation, pruning and text snapshots.

#include <iosfwd>
#include <map>

#include "g2l2/arith.hpp"
#include "g2l2/domain.hpp"
#include "g2l2/objset.hpp"
#include "g2l2/scan.hpp"

namespace g2l2 {

struct LexiconEntry {
    std::string word;
    bool isEmpty = false;  // vacuous entry, absorbed during parsing
    int syn = -1;          // SynTable id (unused for empty entries)
    Program prog;          // template body; may hold ConceptRef / IntConst
    std::string tauParam;  // scalar log-weight parameter name
    bool active = true;    // cleared by pruning
};

class Lexicon {
public:
    explicit Lexicon(const Domain& dom) : dom_(&dom) {}

    const Domain& domain() const { return *dom_; }

    // Returns the global entry id; creates the word slot on first use.
    int add(LexiconEntry e);

    const LexiconEntry& entry(int id) const { return entries_.at(id); }
    size_t size() const { return entries_.size(); }
    const std::vector<std::string>& words() const { return words_; }
    bool hasWord(const std::string& w) const { return perWord_.count(w) > 0; }
    // Active entry ids for a word (throws DataError on unknown words).
    std::vector<int> entriesFor(const std::string& word) const;
    size_t activeCount() const;

    // Registers every entry's scalar tau (log-weight) at zero.
    void initTaus(ParamStore& store) const;

    // Deactivates entries whose accumulated usage (expected derivation count)
    // stays below eps; keeps empty entries and never empties a word slot.
    int prune(const std::map<int, double>& usage, double eps);
    // Deactivates the given entries (same never-empty-a-word guard).
    int pruneIds(const std::vector<int>& ids);
    void reactivateAll();
    std::vector<char> activeMask() const;
    void setActiveMask(const std::vector<char>& mask);

    // Tab-separated dump: word, syntax, program, weight, within-word
    // probability. Only active entries are written.
    void dump(std::ostream& os, const ParamStore& store) const;
    // Rebuilds a lexicon (and its tau parameters) from a dump.
    static Lexicon load(std::istream& is, const Domain& dom, ParamStore& store);

private:
    const Domain* dom_;
    std::vector<LexiconEntry> entries_;
    std::vector<std::string> words_;
    std::map<std::string, std::vector<int>> perWord_;
};

// Enumerated string-DSL program families, before linearization.
// Constraints: ops {empty, action primitive, concat, repeat} cost one each
// with budget 2 (integer literals and functor application are free), body
// depth <= 3, plain arguments used exactly once, the functor argument used
// once or twice, empty() never a direct concat operand, bare identity allowed.
struct ScanProgramSets {
    std::vector<TermPtr> constants;   // no arguments            (28)
    std::vector<TermPtr> oneArg;      // one plain argument      (25)
    std::vector<TermPtr> twoArg;      // two plain arguments     (20)
    std::vector<TermPtr> functorArg;  // functor arg0 + plain arg1 (60)
};
ScanProgramSets enumerateScanPrograms(const ScanDomain& dom);

// 178 entries per word: constants as V; one-argument programs as V/V and
// V\V; two-argument programs as V\V/V and S\V/V; functor-argument programs
// as V\V/(V\V).
Lexicon induceScanLexicon(ScanDomain& dom, const std::vector<std::string>& words);

// Ten fixed templates per word (scene, filter, adjectival filter, two
// relate argument orders, exist, count, query, and/or conjunctions) plus a
// vacuous entry.
Lexicon induceVisualLexicon(ObjsetDomain& dom, const std::vector<std::string>& words);

// Program-text parser (inverse of printProgram); args follow the syntactic
// type's semantic signature.
Program parseProgram(const std::string& text, const Domain& dom, const SemTypeSig& sig);

// The arithmetic walkthrough fixture: ONE = num(1); PLUS_ONE and MUL_THREE
// each ambiguous between lambda x. x+1 and lambda x. x*3, equal weights.
Lexicon arithFixtureLexicon(ArithDomain& dom);

}  // namespace g2l2
