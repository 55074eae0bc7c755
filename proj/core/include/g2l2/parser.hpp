#pragma once

// CKY-E2: joint chart parsing and per-cell expected execution. Derivations
// carry log-space weights on the tape; structurally identical derivations
// that differ at no more than one mergeable value position are collapsed
// into softmax-weighted expectations with logsumexp weights.

#include "g2l2/lexicon.hpp"

namespace g2l2 {

struct Derivation {
    int syn = -1;
    bool isEmpty = false;
    Program prog;  // body is null for empty and conjunction items
    Var tau;       // scalar log-weight on the tape
    double tauVal = 0.0;
    std::vector<int> entries;  // sorted contributing lexicon entry ids
};

struct CellSummary {
    int lo = 0, hi = 0;
    long beforeMerge = 0, afterMerge = 0;
};

struct ParseStats {
    long created = 0;    // derivations constructed across all cells
    long storedMax = 0;  // largest per-cell size after merging
    long merges = 0;
    long overflowDrops = 0;
    std::vector<CellSummary> cells;
};

// Returns full-span derivations of a root syntactic type; throws
// ParseFailure when the sentence has none.
std::vector<Derivation> parse(const std::vector<std::string>& tokens, const Lexicon& lex,
                              const Domain& dom, ExecContext& ctx, ParseStats* stats = nullptr);

// softmax over the derivations' log-weights (a Var of length |ds|).
Var derivationProbs(const std::vector<Derivation>& ds, Tape& tape);

// Exhaustive parsing without any merging (the expectation oracle); throws
// Error if more than `limit` derivations are created.
std::vector<Derivation> enumerateParsesBruteForce(const std::vector<std::string>& tokens,
                                                  const Lexicon& lex, const Domain& dom,
                                                  ExecContext& ctx, size_t limit = 1000000,
                                                  ParseStats* stats = nullptr);

}  // namespace g2l2
