#include "g2l2/parser.hpp"

#include <algorithm>
#include <optional>

namespace g2l2 {

namespace {

std::vector<int> setUnion(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Canonical (content-based, order-independent) cell ordering.
bool derivLess(const Derivation& a, const Derivation& b) {
    if (a.syn != b.syn) return a.syn < b.syn;
    if (a.isEmpty != b.isEmpty) return a.isEmpty < b.isEmpty;
    size_t sa = a.prog.body ? a.prog.body->skelHash : 0;
    size_t sb = b.prog.body ? b.prog.body->skelHash : 0;
    if (sa != sb) return sa < sb;
    size_t fa = a.prog.body ? a.prog.body->fullHash : 0;
    size_t fb = b.prog.body ? b.prog.body->fullHash : 0;
    if (fa != fb) return fa < fb;
    if (a.entries != b.entries) return a.entries < b.entries;
    return a.tauVal < b.tauVal;
}

bool canMerge(const Derivation& x, const Derivation& y, const Domain& dom, const Tape& tape) {
    if (x.syn != y.syn || x.isEmpty != y.isEmpty) return false;
    if (x.isEmpty) return true;
    if (dom.syn().at(x.syn).kind == SynKind::Conj) return true;
    if (!x.prog.body || !y.prog.body) return !x.prog.body && !y.prog.body;
    if (!skeletonEqual(*x.prog.body, *y.prog.body)) return false;
    std::vector<SemPrim> kinds;
    int d = countValueDiffs(*x.prog.body, *y.prog.body, tape, &kinds);
    if (d == 0) return true;
    // Merging at two or more positions with a shared mixture would lose the
    // cross terms, so only single-position differences are collapsed.
    if (d > 1) return false;
    return dom.mergeableKind(kinds[0]);
}

Derivation mergeTwo(const Derivation& x, const Derivation& y, const Domain& dom, Tape& tape) {
    Derivation z = x;
    Var taus = tape.concat({x.tau, y.tau});
    z.tau = tape.logsumexp(taus);
    z.tauVal = tape.scalarValue(z.tau);
    z.entries = setUnion(x.entries, y.entries);
    if (x.prog.body && countValueDiffs(*x.prog.body, *y.prog.body, tape) > 0) {
        Var p = tape.softmax(taus);
        z.prog.body = mergeTerms({x.prog.body, y.prog.body}, p, tape, dom.vocabSize());
    }
    return z;
}

void expectedExecution(std::vector<Derivation>& cell, const Domain& dom, Tape& tape,
                       ParseStats* stats) {
    std::sort(cell.begin(), cell.end(), derivLess);
    auto sameGroup = [](const Derivation& a, const Derivation& b) {
        return a.syn == b.syn && a.isEmpty == b.isEmpty &&
               (a.prog.body ? a.prog.body->skelHash : 0) ==
                   (b.prog.body ? b.prog.body->skelHash : 0);
    };
    // Mergeable pairs always share (syn, isEmpty, skeleton), so the pairwise
    // fixed point only needs to scan within each sorted run.
    size_t g = 0;
    while (g < cell.size()) {
        size_t h = g + 1;
        while (h < cell.size() && sameGroup(cell[g], cell[h])) ++h;
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = g; i < h && !changed; ++i) {
                for (size_t j = i + 1; j < h && !changed; ++j) {
                    if (!canMerge(cell[i], cell[j], dom, tape)) continue;
                    Derivation m = mergeTwo(cell[i], cell[j], dom, tape);
                    cell.erase(cell.begin() + j);
                    cell.erase(cell.begin() + i);
                    auto pos = std::lower_bound(cell.begin() + g, cell.begin() + h - 2, m,
                                                derivLess);
                    cell.insert(pos, std::move(m));
                    --h;
                    if (stats) stats->merges++;
                    changed = true;
                }
            }
        }
        g = h;
    }
}

std::optional<Derivation> combine(const Derivation& x, const Derivation& y, const Domain& dom,
                                  ExecContext& ctx, ParseStats* stats, int opIntersect,
                                  int opUnion) {
    Tape& tape = ctx.tape;
    if (x.isEmpty || y.isEmpty) {
        Derivation z = x.isEmpty ? y : x;
        z.tau = tape.add(x.tau, y.tau);
        z.tauVal = tape.scalarValue(z.tau);
        z.entries = setUnion(x.entries, y.entries);
        return z;
    }
    auto c = dom.syn().canCombine(x.syn, y.syn);
    if (!c) return std::nullopt;
    Derivation z;
    z.syn = c->result;
    z.entries = setUnion(x.entries, y.entries);
    z.tau = tape.add(x.tau, y.tau);
    z.tauVal = tape.scalarValue(z.tau);
    try {
        switch (c->rule) {
            case CombineRule::ForwardApp:
                z.prog = applyArgument(x.prog, y.prog, dom, ctx);
                break;
            case CombineRule::BackwardApp:
                z.prog = applyArgument(y.prog, x.prog, dom, ctx);
                break;
            case CombineRule::CoordStart:
                z.prog = y.prog;  // hold the right conjunct until the left arrives
                break;
            case CombineRule::CoordFinish: {
                if (opIntersect < 0) return std::nullopt;
                const SynType& pt = dom.syn().at(y.syn);
                if (pt.conj == ConjKind::And) {
                    if (x.prog.ret != SemPrim::ObjSet || x.prog.args != y.prog.args) {
                        return std::nullopt;
                    }
                    z.prog.args = x.prog.args;
                    z.prog.ret = x.prog.ret;
                    z.prog.body =
                        partialEval(mkOp(opIntersect, {x.prog.body, y.prog.body}), dom, ctx);
                } else {
                    if (opUnion < 0) return std::nullopt;
                    TermPtr u =
                        partialEval(mkOp(opUnion, {x.prog.body, y.prog.body}), dom, ctx);
                    z.prog.args = {{SemPrim::ObjSet, false}};
                    z.prog.ret = SemPrim::ObjSet;
                    z.prog.body = partialEval(mkOp(opIntersect, {mkArg(0), u}), dom, ctx);
                }
                break;
            }
        }
    } catch (const OverflowError&) {
        if (stats) stats->overflowDrops++;
        return std::nullopt;
    }
    return z;
}

std::vector<Derivation> parseImpl(const std::vector<std::string>& tokens, const Lexicon& lex,
                                  const Domain& dom, ExecContext& ctx, ParseStats* stats,
                                  bool merge, size_t limit) {
    int n = static_cast<int>(tokens.size());
    if (n == 0) throw ParseFailure("empty sentence");
    auto idx = [n](int i, int j) { return static_cast<size_t>(i) * (n + 1) + j; };
    std::vector<std::vector<Derivation>> cells(static_cast<size_t>(n + 1) * (n + 1));

    int opIntersect = -1, opUnion = -1;
    for (size_t k = 0; k < dom.ops().size(); ++k) {
        if (dom.ops()[k].name == "intersect") opIntersect = static_cast<int>(k);
        if (dom.ops()[k].name == "union") opUnion = static_cast<int>(k);
    }

    size_t created = 0;
    auto account = [&]() {
        ++created;
        if (stats) stats->created++;
        if (created > limit) throw Error("parse: derivation budget exceeded");
    };
    // The full span is never merged: the loss is a probability-weighted sum
    // over the individual root derivations, and value-merging through a
    // nonlinear loss would change it.
    auto finishCell = [&](std::vector<Derivation>& cell, int lo, int hi) {
        long before = static_cast<long>(cell.size());
        if (merge && !(lo == 0 && hi == n)) expectedExecution(cell, dom, ctx.tape, stats);
        if (stats) {
            stats->cells.push_back({lo, hi, before, static_cast<long>(cell.size())});
            stats->storedMax = std::max(stats->storedMax, static_cast<long>(cell.size()));
        }
    };

    for (int i = 0; i < n; ++i) {
        auto& cell = cells[idx(i, i + 1)];
        for (int id : lex.entriesFor(tokens[i])) {
            const LexiconEntry& e = lex.entry(id);
            Derivation d;
            d.entries = {id};
            d.tau = ctx.param(e.tauParam);
            d.tauVal = ctx.tape.scalarValue(d.tau);
            if (e.isEmpty) {
                d.isEmpty = true;
            } else {
                d.syn = e.syn;
                if (dom.syn().at(e.syn).kind != SynKind::Conj) {
                    d.prog = e.prog;
                    try {
                        d.prog.body = partialEval(d.prog.body, dom, ctx);
                    } catch (const OverflowError&) {
                        if (stats) stats->overflowDrops++;
                        continue;
                    }
                }
            }
            account();
            cell.push_back(std::move(d));
        }
        finishCell(cell, i, i + 1);
    }

    for (int len = 2; len <= n; ++len) {
        for (int i = 0; i + len <= n; ++i) {
            auto& cell = cells[idx(i, i + len)];
            for (int k = i + 1; k < i + len; ++k) {
                for (const auto& x : cells[idx(i, k)]) {
                    for (const auto& y : cells[idx(k, i + len)]) {
                        // Functor-typed arguments must be lexical: a functor
                        // entry consumes a single-word functor, never a
                        // derived one, which keeps chart cells bounded.
                        if (!x.isEmpty && !y.isEmpty) {
                            if (!x.prog.args.empty() && x.prog.args[0].functor &&
                                dom.syn().at(x.syn).kind == SynKind::Functor &&
                                dom.syn().at(x.syn).forward && i + len - k > 1) {
                                continue;
                            }
                            if (!y.prog.args.empty() && y.prog.args[0].functor &&
                                dom.syn().at(y.syn).kind == SynKind::Functor &&
                                !dom.syn().at(y.syn).forward && k - i > 1) {
                                continue;
                            }
                        }
                        if (auto z = combine(x, y, dom, ctx, stats, opIntersect, opUnion)) {
                            account();
                            cell.push_back(std::move(*z));
                        }
                    }
                }
            }
            finishCell(cell, i, i + len);
        }
    }

    std::vector<Derivation> roots;
    const auto& rs = dom.rootSyn();
    for (const auto& d : cells[idx(0, n)]) {
        if (d.isEmpty) continue;
        if (std::find(rs.begin(), rs.end(), d.syn) == rs.end()) continue;
        if (!d.prog.args.empty() || !d.prog.body) continue;
        roots.push_back(d);
    }
    if (roots.empty()) throw ParseFailure("no root derivation");
    return roots;
}

}  // namespace

std::vector<Derivation> parse(const std::vector<std::string>& tokens, const Lexicon& lex,
                              const Domain& dom, ExecContext& ctx, ParseStats* stats) {
    return parseImpl(tokens, lex, dom, ctx, stats, /*merge=*/true, /*limit=*/1u << 30);
}

std::vector<Derivation> enumerateParsesBruteForce(const std::vector<std::string>& tokens,
                                                  const Lexicon& lex, const Domain& dom,
                                                  ExecContext& ctx, size_t limit,
                                                  ParseStats* stats) {
    return parseImpl(tokens, lex, dom, ctx, stats, /*merge=*/false, limit);
}

Var derivationProbs(const std::vector<Derivation>& ds, Tape& tape) {
    std::vector<Var> taus;
    taus.reserve(ds.size());
    for (const auto& d : ds) taus.push_back(d.tau);
    return tape.softmax(tape.concat(taus));
}

}  // namespace g2l2
