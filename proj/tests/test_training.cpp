#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "g2l2/data_io.hpp"
#include "g2l2/training.hpp"

using namespace g2l2;

namespace {

void zeroTaus(ParamStore& params, uint64_t) {
    for (auto& p : params.all()) {
        if (p.name.rfind("tau/", 0) == 0) std::fill(p.data.begin(), p.data.end(), 0.0);
    }
}

}  // namespace

TEST_CASE("Adam matches the reference update") {
    ParamStore params;
    params.add("w", {1.0, -2.0});
    Adam opt;
    std::map<std::string, std::vector<double>> grads = {{"w", {0.5, -0.25}}};
    opt.step(params, grads, [](const std::string&) { return 0.1; });
    // t=1: mhat = g, vhat = g^2, update = lr * g / (|g| + eps) ~ lr * sign(g)
    CHECK(params.data("w")[0] == doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-8)));
    CHECK(params.data("w")[1] == doctest::Approx(-2.0 + 0.1 * 0.25 / (0.25 + 1e-8)));
    opt.step(params, grads, [](const std::string&) { return 0.1; });
    CHECK(std::abs(params.data("w")[0] - 0.9) < 0.2);
}

TEST_CASE("single-word SCAN training drives the loss down to convergence") {
    ScanDomain dom;
    Lexicon lex = induceScanLexicon(dom, {"jump", "walk"});
    ParamStore params;
    lex.initTaus(params);
    std::vector<Example> data = {{{"jump"}, {ScanDomain::JUMP}}, {{"walk"}, {ScanDomain::WALK}}};

    ScanTask task(dom);
    TrainConfig cfg;
    cfg.epochs = 25;
    cfg.seed = 3;
    cfg.pruneInterval = 10;
    Trainer trainer(task, lex, params, cfg);
    EpochMetrics first = trainer.trainEpoch(data, 0);
    EpochMetrics last = first;
    for (int e = 1; e < cfg.epochs; ++e) last = trainer.trainEpoch(data, e);
    CHECK(last.loss < first.loss);
    CHECK(last.acc == doctest::Approx(1.0));
    CHECK(trainer.evaluate(data) == doctest::Approx(1.0));
    // Pruning fired and shrank the candidate space.
    CHECK(lex.activeCount() < 2 * 178);
}

TEST_CASE("fitWithRestarts reports non-convergence and restores the best run") {
    ScanDomain dom;
    Lexicon lex = induceScanLexicon(dom, {"jump"});
    ParamStore params;
    lex.initTaus(params);
    // Contradictory supervision: the same token must emit two different
    // strings, so 100% train accuracy is impossible.
    std::vector<Example> data = {{{"jump"}, {ScanDomain::JUMP}}, {{"jump"}, {ScanDomain::WALK}}};
    ScanTask task(dom);
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.maxRestarts = 2;
    cfg.pruneInterval = 0;
    FitResult fit = fitWithRestarts(task, lex, params, data, cfg, zeroTaus);
    CHECK(!fit.converged);
    CHECK(fit.runConverged == std::vector<bool>{false, false});
    CHECK(fit.restartsUsed >= 1);
    CHECK(fit.restartsUsed <= 2);
    CHECK(fit.trainAcc < 1.0);
}

TEST_CASE("metric histories are deterministic under the same seed") {
    auto run = [](uint64_t seed) {
        ScanDomain dom;
        Lexicon lex = induceScanLexicon(dom, {"jump", "walk", "twice"});
        ParamStore params;
        lex.initTaus(params);
        std::vector<Example> data = {
            {{"jump"}, {ScanDomain::JUMP}},
            {{"walk", "twice"}, {ScanDomain::WALK, ScanDomain::WALK}},
        };
        ScanTask task(dom);
        TrainConfig cfg;
        cfg.epochs = 6;
        cfg.seed = seed;
        Trainer trainer(task, lex, params, cfg);
        std::vector<double> losses;
        for (int e = 0; e < cfg.epochs; ++e) losses.push_back(trainer.trainEpoch(data, e).loss);
        return losses;
    };
    auto a = run(5), b = run(5);
    CHECK(a == b);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
    ScanDomain dom;
    Lexicon lex = induceScanLexicon(dom, {"jump", "left"});
    ParamStore params;
    lex.initTaus(params);
    params.add("emb/test", {0.123456789012345678, -1e-17, 3.5}, 0.1);
    int i = 0;
    for (auto& p : params.all()) {
        if (p.name.rfind("tau/", 0) == 0) p.data[0] = std::sin(++i * 0.7) * 3.0;
    }
    lex.pruneIds({lex.entriesFor("jump")[2], lex.entriesFor("left")[100]});

    std::string path =
        (std::filesystem::temp_directory_path() / "g2l2_ckpt_test.txt").string();
    saveCheckpoint(path, params, lex);

    ScanDomain dom2;
    ParamStore params2;
    Lexicon lex2 = loadCheckpoint(path, dom2, params2);
    std::remove(path.c_str());

    CHECK(lex2.activeCount() == lex.activeCount());
    // Active-entry weights travel with the lexicon pairing (pruned entries
    // are dropped, so tau parameter names renumber); everything else by name.
    for (const auto& w : {"jump", "left"}) {
        auto a = lex.entriesFor(w);
        auto b = lex2.entriesFor(w);
        REQUIRE(a.size() == b.size());
        for (size_t k = 0; k < a.size(); ++k) {
            CHECK(params.data(lex.entry(a[k]).tauParam) ==
                  params2.data(lex2.entry(b[k]).tauParam));  // exact
        }
    }
    for (const auto& p : params.all()) {
        if (p.name.rfind("tau/", 0) == 0) continue;
        REQUIRE(params2.has(p.name));
        CHECK(params2.data(p.name) == p.data);  // exact, not approximate
        CHECK(params2.at(p.name).lrScale == p.lrScale);
    }
}

TEST_CASE("VisualTask scores oracle programs correctly") {
    ObjsetDomain dom(visualVocabulary());
    std::vector<Scene> scenes = generateScenes(6, 2, 0.0);
    ParamStore params;
    dom.setOracleParams(params);
    Lexicon lex = induceVisualLexicon(dom, visualVocabulary());
    lex.initTaus(params);
    VisualDataset ds;
    ds.scenes = scenes;
    VisualTask task(dom, scenes);

    // Weight the intended program per word so the best root is
    // count(scene()): how = EMPTY, many = count, things = scene.
    auto boost = [&](const std::string& word, const std::string& prog, bool empty) {
        for (int id : lex.entriesFor(word)) {
            const LexiconEntry& e = lex.entry(id);
            bool hit = empty ? e.isEmpty
                             : (e.prog.body && printProgram(e.prog, dom) == prog);
            if (hit) params.data(e.tauParam)[0] = 10.0;
        }
    };
    boost("how", "", true);
    boost("many", "\xce\xbbx.count(x)", false);
    boost("things", "scene()", false);

    // Count all objects via "how many things": with oracle embeddings the
    // decoded count equals the scene size.
    Example ex;
    ex.tokens = {"how", "many", "things"};
    ex.sceneIdx = 0;
    ex.answer = {VisualAnswer::Kind::Count, false, scenes[0].size(), ""};
    TrainConfig cfg;
    Trainer trainer(task, lex, params, cfg);
    CHECK(trainer.exampleCorrect(ex));
}
