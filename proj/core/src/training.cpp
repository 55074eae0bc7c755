#include "g2l2/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace g2l2 {

// ---------------------------------------------------------------------------
// Task adapters.

Var ScanTask::loss(const Derivation& root, const Example& ex, ExecContext& ctx) const {
    return dom_.lossString(*root.prog.body->val, ex.actions, ctx.tape);
}

bool ScanTask::correct(const Derivation& best, const Example& ex, ExecContext& ctx) const {
    return ScanDomain::decode(*best.prog.body->val, ctx.tape) == ex.actions;
}

Var VisualTask::loss(const Derivation& root, const Example& ex, ExecContext& ctx) const {
    const Value& v = *root.prog.body->val;
    bool match = (ex.answer.kind == VisualAnswer::Kind::Bool && v.kind == SemPrim::BoolP) ||
                 (ex.answer.kind == VisualAnswer::Kind::Count && v.kind == SemPrim::Count) ||
                 (ex.answer.kind == VisualAnswer::Kind::Word && v.kind == SemPrim::WordDist);
    // A root of the wrong answer type cannot explain the answer; a flat
    // penalty drives its derivation probability down.
    if (!match) return ctx.tape.scalar(10.0);
    return dom_.lossAnswer(v, ex.answer, ctx.tape);
}

bool VisualTask::correct(const Derivation& best, const Example& ex, ExecContext& ctx) const {
    return dom_.decodeMatch(*best.prog.body->val, ex.answer, ctx.tape);
}

Var ArithTask::loss(const Derivation& root, const Example& ex, ExecContext& ctx) const {
    Var d = ctx.tape.sub(root.prog.body->val->v, ctx.tape.scalar(ex.target));
    return ctx.tape.mul(d, d);
}

bool ArithTask::correct(const Derivation& best, const Example& ex, ExecContext& ctx) const {
    return std::abs(ctx.tape.scalarValue(best.prog.body->val->v) - ex.target) < 1e-9;
}

// ---------------------------------------------------------------------------
// Adam.

void Adam::step(ParamStore& params, const std::map<std::string, std::vector<double>>& grads,
                const std::function<double(const std::string&)>& lrOf) {
    ++t_;
    double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    for (const auto& [name, g] : grads) {
        auto& x = params.data(name);
        if (x.size() != g.size()) throw ShapeError("Adam: gradient shape mismatch for " + name);
        auto& m = m_[name];
        auto& v = v_[name];
        if (m.empty()) {
            m.assign(g.size(), 0.0);
            v.assign(g.size(), 0.0);
        }
        double lr = lrOf(name);
        for (size_t i = 0; i < g.size(); ++i) {
            m[i] = b1_ * m[i] + (1.0 - b1_) * g[i];
            v[i] = b2_ * v[i] + (1.0 - b2_) * g[i] * g[i];
            x[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
        }
    }
}

// ---------------------------------------------------------------------------
// Trainer.

Trainer::Trainer(const Task& task, Lexicon& lex, ParamStore& params, TrainConfig cfg)
    : task_(task), lex_(lex), params_(params), cfg_(std::move(cfg)) {}

int Trainer::maxLenAt(int epoch) const {
    for (const auto& [last, len] : cfg_.curriculum) {
        if (epoch < last) return len;
    }
    return 1 << 20;
}

Var Trainer::exampleLoss(const Example& ex, ExecContext& ctx, std::vector<Derivation>* rootsOut,
                         Var* probsOut) {
    std::vector<Derivation> roots;
    try {
        roots = parse(ex.tokens, lex_, task_.domain(), ctx);
    } catch (const ParseFailure&) {
        return {};
    }
    Var p = derivationProbs(roots, ctx.tape);
    std::vector<Var> ls;
    ls.reserve(roots.size());
    for (const auto& r : roots) ls.push_back(task_.loss(r, ex, ctx));
    Var loss = ctx.tape.dot(p, ctx.tape.concat(ls));
    if (rootsOut) *rootsOut = std::move(roots);
    if (probsOut) *probsOut = p;
    return loss;
}

EpochMetrics Trainer::trainEpoch(const std::vector<Example>& data, int epoch) {
    int maxLen = maxLenAt(epoch);
    std::vector<const Example*> pool;
    for (const auto& e : data) {
        if (static_cast<int>(e.tokens.size()) <= maxLen) pool.push_back(&e);
    }
    std::mt19937_64 rng(cfg_.seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(epoch) + 1);
    std::shuffle(pool.begin(), pool.end(), rng);

    double lossSum = 0.0;
    long nLoss = 0, failures = 0;
    for (size_t b = 0; b < pool.size(); b += static_cast<size_t>(cfg_.batchSize)) {
        size_t end = std::min(pool.size(), b + static_cast<size_t>(cfg_.batchSize));
        std::map<std::string, std::vector<double>> grads;
        int counted = 0;
        for (size_t i = b; i < end; ++i) {
            Tape tape;
            ExecContext ctx{tape, &params_, task_.scene(*pool[i])};
            std::vector<Derivation> roots;
            Var p;
            Var loss = exampleLoss(*pool[i], ctx, &roots, &p);
            if (!loss.valid()) {
                ++failures;
                continue;
            }
            ++counted;
            double lv = tape.scalarValue(loss);
            if (!std::isfinite(lv)) throw Error("training diverged: non-finite loss");
            lossSum += lv;
            ++nLoss;
            const auto& pv = tape.value(p);
            for (size_t r = 0; r < roots.size(); ++r) {
                for (int id : roots[r].entries) usage_[id] += pv[r];
            }
            auto g = tape.backward(loss);
            for (const auto& [nid, gv] : g) {
                auto it = ctx.paramLeaves().find(nid);
                if (it == ctx.paramLeaves().end()) continue;
                auto& acc = grads[it->second];
                if (acc.empty()) acc.assign(gv.size(), 0.0);
                for (size_t k = 0; k < gv.size(); ++k) acc[k] += gv[k];
            }
        }
        if (counted > 0) {
            for (auto& [n, gv] : grads) {
                for (double& x : gv) x /= counted;
            }
            if (cfg_.weightDecayTau > 0.0) {
                std::set<std::string> seen;
                for (size_t i = b; i < end; ++i) {
                    for (const auto& t : pool[i]->tokens) seen.insert(t);
                }
                for (const auto& w : seen) {
                    if (!lex_.hasWord(w)) continue;
                    for (int id : lex_.entriesFor(w)) {
                        const std::string& nm = lex_.entry(id).tauParam;
                        double t = params_.data(nm)[0];
                        auto& acc = grads[nm];
                        if (acc.empty()) acc.assign(1, 0.0);
                        acc[0] += cfg_.weightDecayTau * t;
                    }
                }
            }
            opt_.step(params_, grads,
                      [&](const std::string& n) {
                          return n.rfind("tau/", 0) == 0 ? cfg_.lrTau : cfg_.lrEmb;
                      });
        }
    }
    parseFailures_ += failures;

    // Low-probability streaks (within-word softmax over active entries).
    for (const auto& w : lex_.words()) {
        std::vector<int> ids = lex_.entriesFor(w);
        double mx = -1e300;
        std::vector<double> taus(ids.size());
        for (size_t i = 0; i < ids.size(); ++i) {
            taus[i] = params_.data(lex_.entry(ids[i]).tauParam)[0];
            mx = std::max(mx, taus[i]);
        }
        double z = 0.0;
        for (double t : taus) z += std::exp(t - mx);
        for (size_t i = 0; i < ids.size(); ++i) {
            double prob = std::exp(taus[i] - mx) / z;
            if (prob < cfg_.pruneEps) {
                lowStreak_[ids[i]]++;
            } else {
                lowStreak_[ids[i]] = 0;
            }
        }
    }
    if (cfg_.pruneInterval > 0 && (epoch + 1) % cfg_.pruneInterval == 0) {
        std::vector<int> drop;
        for (const auto& w : lex_.words()) {
            for (int id : lex_.entriesFor(w)) {
                if (lex_.entry(id).isEmpty) continue;
                bool zeroUsage = usage_.find(id) == usage_.end() || usage_[id] < 1e-12;
                bool lowProb = lowStreak_[id] >= cfg_.pruneEpsEpochs;
                if (zeroUsage || lowProb) drop.push_back(id);
            }
        }
        lex_.pruneIds(drop);
        usage_.clear();
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.loss = nLoss ? lossSum / nLoss : 0.0;
    m.parseFailures = failures;
    m.lexiconSize = static_cast<long>(lex_.activeCount());
    double correct = 0.0;
    for (const Example* e : pool) correct += exampleCorrect(*e) ? 1.0 : 0.0;
    m.acc = pool.empty() ? 0.0 : correct / static_cast<double>(pool.size());
    history_.push_back(m);

    if (!cfg_.metricsPath.empty()) {
        nlohmann::json j{{"epoch", m.epoch},
                         {"trainLoss", m.loss},
                         {"trainAcc", m.acc},
                         {"parseFailures", m.parseFailures},
                         {"lexiconSize", m.lexiconSize},
                         {"seed", cfg_.seed}};
        std::ofstream os(cfg_.metricsPath, std::ios::app);
        os << j.dump() << '\n';
    }
    return m;
}

bool Trainer::exampleCorrect(const Example& ex) const {
    // Decode-time no-lexical-ambiguity: each word keeps only its highest-weight
    // active entry; candidate entries compete only during training. Decoding
    // from the full expected-execution chart would argmax over weight mixtures.
    std::vector<char> saved = lex_.activeMask();
    std::vector<char> mask(saved.size(), 0);
    for (const auto& w : lex_.words()) {
        int bestId = -1;
        double bestTau = 0.0;
        for (int id : lex_.entriesFor(w)) {
            double t = params_.data(lex_.entry(id).tauParam)[0];
            if (bestId < 0 || t > bestTau) {
                bestId = id;
                bestTau = t;
            }
        }
        if (bestId >= 0) mask[static_cast<size_t>(bestId)] = 1;
    }
    lex_.setActiveMask(mask);
    bool ok = false;
    try {
        Tape tape;
        ExecContext ctx{tape, const_cast<ParamStore*>(&params_), task_.scene(ex)};
        auto roots = parse(ex.tokens, lex_, task_.domain(), ctx);
        Var p = derivationProbs(roots, tape);
        const auto& pv = tape.value(p);
        size_t best = 0;
        for (size_t i = 1; i < pv.size(); ++i) {
            if (pv[i] > pv[best]) best = i;
        }
        ok = task_.correct(roots[best], ex, ctx);
    } catch (const ParseFailure&) {
        ok = false;
    }
    lex_.setActiveMask(saved);
    return ok;
}

double Trainer::evaluate(const std::vector<Example>& data) const {
    if (data.empty()) return 0.0;
    double correct = 0.0;
    for (const auto& e : data) correct += exampleCorrect(e) ? 1.0 : 0.0;
    return correct / static_cast<double>(data.size());
}

FitResult fitWithRestarts(const Task& task, Lexicon& lex, ParamStore& params,
                          const std::vector<Example>& train, const TrainConfig& cfg,
                          const std::function<void(ParamStore&, uint64_t)>& reinit) {
    FitResult out;
    double bestAcc = -1.0;
    std::vector<EpochMetrics> bestHist;
    std::vector<ParamStore::Param> bestParams;
    std::vector<char> bestMask;
    for (int r = 0; r < std::max(1, cfg.maxRestarts); ++r) {
        lex.reactivateAll();
        reinit(params, cfg.seed + static_cast<uint64_t>(r));
        TrainConfig c = cfg;
        c.seed = cfg.seed + static_cast<uint64_t>(r);
        Trainer tr(task, lex, params, c);
        int maxTrainLen = 0;
        for (const auto& ex : train) {
            maxTrainLen = std::max(maxTrainLen, static_cast<int>(ex.tokens.size()));
        }
        for (int e = 0; e < c.epochs; ++e) {
            EpochMetrics m = tr.trainEpoch(train, e);
            // A run can finish early once the curriculum covers the whole
            // training set and decode accuracy on it is perfect.
            if (tr.maxLenAt(e) >= maxTrainLen && m.acc >= 1.0 - 1e-12) break;
        }
        double acc = tr.evaluate(train);
        bool conv = acc >= 1.0 - 1e-12;
        out.runConverged.push_back(conv);
        if (acc > bestAcc) {
            bestAcc = acc;
            bestHist = tr.history();
            bestParams = params.all();
            bestMask = lex.activeMask();
            out.restartsUsed = r + 1;
        }
        if (conv) {
            out.converged = true;
            out.trainAcc = acc;
            out.history = tr.history();
            out.restartsUsed = r + 1;
            return out;
        }
    }
    params.all() = bestParams;
    lex.setActiveMask(bestMask);
    out.trainAcc = bestAcc;
    out.history = bestHist;
    return out;
}

// ---------------------------------------------------------------------------
// Checkpoints.

void saveCheckpoint(const std::string& path, const ParamStore& params, const Lexicon& lex) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write checkpoint: " + path);
    os << "#g2l2-checkpoint v1\n[lexicon]\n";
    lex.dump(os, params);
    os << "[params]\n";
    os.precision(17);
    for (const auto& p : params.all()) {
        if (p.name.rfind("tau/", 0) == 0) continue;  // carried by the lexicon section
        os << p.name << '\t' << p.lrScale << '\t' << p.data.size();
        for (double v : p.data) os << ' ' << v;
        os << '\n';
    }
}

Lexicon loadCheckpoint(const std::string& path, const Domain& dom, ParamStore& params) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot read checkpoint: " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("#g2l2-checkpoint", 0) != 0) {
        throw DataError("not a checkpoint file: " + path);
    }
    std::stringstream lexSection;
    int section = 0;  // 1 = lexicon, 2 = params
    while (std::getline(is, line)) {
        if (line == "[lexicon]") {
            section = 1;
            continue;
        }
        if (line == "[params]") {
            section = 2;
            continue;
        }
        if (line.empty()) continue;
        if (section == 1) {
            lexSection << line << '\n';
        } else if (section == 2) {
            std::istringstream ss(line);
            std::string name, lrs, rest;
            if (!std::getline(ss, name, '\t') || !std::getline(ss, lrs, '\t') ||
                !std::getline(ss, rest)) {
                throw DataError("checkpoint: malformed param line: " + line);
            }
            std::istringstream vs(rest);
            size_t n = 0;
            vs >> n;
            std::vector<double> data(n);
            for (size_t i = 0; i < n; ++i) vs >> data[i];
            if (params.has(name)) {
                params.data(name) = data;
                params.at(name).lrScale = std::stod(lrs);
            } else {
                params.add(name, std::move(data), std::stod(lrs));
            }
        }
    }
    return Lexicon::load(lexSection, dom, params);
}

}  // namespace g2l2
