#pragma once

// Dataset plumbing: the full SCAN command grammar and its generalization
// splits, SCAN text-file IO (`IN: ... OUT: ...`), and the synthetic visual
// scene/question generator with reference answers.

#include "g2l2/training.hpp"

namespace g2l2 {

struct Split {
    std::vector<Example> train, test;
};

// All 20,910 SCAN commands with oracle outputs, in deterministic grammar
// order.
std::vector<Example> generateScanCorpus();
const std::vector<std::string>& scanWords();

std::vector<Example> loadScanFile(const std::string& path);
void saveScanFile(const std::string& path, const std::vector<Example>& xs);

// name in {simple, simple100, simple10, jump, aroundRight, length}.
Split buildScanSplit(const std::string& name, const std::vector<Example>& corpus, uint64_t seed);

// Visual surrogate dataset.
const std::vector<std::string>& visualVocabulary();

struct VisualDataset {
    std::vector<Scene> scenes;
    std::vector<SceneObject> rawObjs;  // flattened ground truth (debug only)
    std::vector<Example> questions;
};

std::vector<Scene> generateScenes(int count, uint64_t seed, double noiseSigma, int D = 64,
                                  int PD = 8);
VisualDataset generateVisualDataset(int nScenes, int questionsPerScene, uint64_t seed,
                                    double noiseSigma);

// name in {standard, purple, right, count, depth}.
Split buildVisualSplit(const std::string& name, const VisualDataset& ds, uint64_t seed);

// JSON Lines IO.
void saveScenesJsonl(const std::string& path, const std::vector<Scene>& scenes);
std::vector<Scene> loadScenesJsonl(const std::string& path, uint64_t seed, double noiseSigma,
                                   int D = 64, int PD = 8);
void saveQuestionsJsonl(const std::string& path, const std::vector<Example>& questions);
std::vector<Example> loadQuestionsJsonl(const std::string& path);

}  // namespace g2l2
