#pragma once

// Training loop: L = sum_k p(derivation_k) * loss(exec_k, answer), Adam over
// lexicon weights and concept embeddings, length curriculum, pruning schedule,
// evaluation and restart-based model selection.

#include <functional>

#include "g2l2/arith.hpp"
#include "g2l2/objset.hpp"
#include "g2l2/parser.hpp"
#include "g2l2/scan.hpp"

namespace g2l2 {

struct Example {
    std::vector<std::string> tokens;
    std::vector<int> actions;  // SCAN target
    int sceneIdx = -1;         // visual target
    VisualAnswer answer;
    int hops = 0;  // visual: number of relate hops in the ground-truth program
    double target = 0.0;  // arith target
};

// Domain adapter: per-root loss and decoded-answer comparison.
class Task {
public:
    virtual ~Task() = default;
    virtual const Domain& domain() const = 0;
    virtual const void* scene(const Example&) const { return nullptr; }
    virtual Var loss(const Derivation& root, const Example& ex, ExecContext& ctx) const = 0;
    // Decode the highest-probability root, compare exactly.
    virtual bool correct(const Derivation& best, const Example& ex, ExecContext& ctx) const = 0;
};

class ScanTask : public Task {
public:
    explicit ScanTask(const ScanDomain& dom) : dom_(dom) {}
    const Domain& domain() const override { return dom_; }
    Var loss(const Derivation& root, const Example& ex, ExecContext& ctx) const override;
    bool correct(const Derivation& best, const Example& ex, ExecContext& ctx) const override;

private:
    const ScanDomain& dom_;
};

class VisualTask : public Task {
public:
    VisualTask(const ObjsetDomain& dom, const std::vector<Scene>& scenes)
        : dom_(dom), scenes_(scenes) {}
    const Domain& domain() const override { return dom_; }
    const void* scene(const Example& ex) const override { return &scenes_.at(ex.sceneIdx); }
    Var loss(const Derivation& root, const Example& ex, ExecContext& ctx) const override;
    bool correct(const Derivation& best, const Example& ex, ExecContext& ctx) const override;

private:
    const ObjsetDomain& dom_;
    const std::vector<Scene>& scenes_;
};

class ArithTask : public Task {
public:
    explicit ArithTask(const ArithDomain& dom) : dom_(dom) {}
    const Domain& domain() const override { return dom_; }
    Var loss(const Derivation& root, const Example& ex, ExecContext& ctx) const override;
    bool correct(const Derivation& best, const Example& ex, ExecContext& ctx) const override;

private:
    const ArithDomain& dom_;
};

struct TrainConfig {
    int epochs = 60;
    double lrTau = 1e-2;
    double lrEmb = 1e-3;
    int batchSize = 32;
    uint64_t seed = 0;
    // (lastEpoch, maxTokens) stages; epochs past the last stage see everything.
    std::vector<std::pair<int, int>> curriculum;
    // L2 pull toward uniform for the tau of every entry whose word occurs in
    // the current batch. Entries kept alive by data gradient resist it; stale
    // entries that stopped appearing in any root decay away.
    double weightDecayTau = 0.0;
    int pruneInterval = 5;     // epochs between prunes; 0 disables
    double pruneEps = 1e-4;    // per-word softmax probability threshold
    int pruneEpsEpochs = 3;    // consecutive epochs below threshold
    int maxRestarts = 5;
    std::string metricsPath;  // JSONL per epoch when non-empty
};

struct EpochMetrics {
    int epoch = 0;
    double loss = 0.0;
    double acc = 0.0;  // train accuracy after the epoch's updates
    long parseFailures = 0;
    long lexiconSize = 0;
};

class Adam {
public:
    Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : b1_(beta1), b2_(beta2), eps_(eps) {}
    // lr per parameter comes from `lrOf`.
    void step(ParamStore& params, const std::map<std::string, std::vector<double>>& grads,
              const std::function<double(const std::string&)>& lrOf);
    void reset() { m_.clear(); v_.clear(); t_ = 0; }

private:
    double b1_, b2_, eps_;
    std::map<std::string, std::vector<double>> m_, v_;
    long t_ = 0;
};

class Trainer {
public:
    Trainer(const Task& task, Lexicon& lex, ParamStore& params, TrainConfig cfg);

    // Parse + probability-weighted loss, fully on the tape. ParseFailure ->
    // invalid Var (caller records the failure).
    Var exampleLoss(const Example& ex, ExecContext& ctx,
                    std::vector<Derivation>* rootsOut = nullptr, Var* probsOut = nullptr);

    EpochMetrics trainEpoch(const std::vector<Example>& data, int epoch);
    double evaluate(const std::vector<Example>& data) const;
    bool exampleCorrect(const Example& ex) const;

    int maxLenAt(int epoch) const;
    const std::vector<EpochMetrics>& history() const { return history_; }
    long parseFailures() const { return parseFailures_; }

private:
    const Task& task_;
    Lexicon& lex_;
    ParamStore& params_;
    TrainConfig cfg_;
    Adam opt_;
    std::vector<EpochMetrics> history_;
    std::map<int, double> usage_;     // per-entry expected usage, this epoch
    std::map<int, int> lowStreak_;    // consecutive epochs below pruneEps
    long parseFailures_ = 0;
};

struct FitResult {
    bool converged = false;
    int restartsUsed = 0;
    double trainAcc = 0.0;
    std::vector<EpochMetrics> history;  // of the selected run
    std::vector<bool> runConverged;     // per attempted run
};

// Restarts until a run hits 100% train accuracy; `reinit` resets parameters
// for attempt r (tau back to zero, embeddings re-drawn from seed + r).
FitResult fitWithRestarts(const Task& task, Lexicon& lex, ParamStore& params,
                          const std::vector<Example>& train, const TrainConfig& cfg,
                          const std::function<void(ParamStore&, uint64_t)>& reinit);

// Versioned text checkpoint: lexicon snapshot + every parameter array.
void saveCheckpoint(const std::string& path, const ParamStore& params, const Lexicon& lex);
Lexicon loadCheckpoint(const std::string& path, const Domain& dom, ParamStore& params);

}  // namespace g2l2
