#include "g2l2/data_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"

namespace g2l2 {

// ---------------------------------------------------------------------------
// SCAN command grammar.

namespace {

using Tokens = std::vector<std::string>;

struct Piece {
    Tokens in;
    std::vector<int> out;
};

std::vector<int> repeated(const std::vector<int>& xs, int m) {
    std::vector<int> out;
    out.reserve(xs.size() * m);
    for (int i = 0; i < m; ++i) out.insert(out.end(), xs.begin(), xs.end());
    return out;
}

std::vector<int> cat(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Tokens cat(Tokens a, const Tokens& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const std::vector<std::pair<std::string, int>>& scanVerbs() {
    static const std::vector<std::pair<std::string, int>> v = {
        {"walk", ScanDomain::WALK},
        {"look", ScanDomain::LOOK},
        {"run", ScanDomain::RUN},
        {"jump", ScanDomain::JUMP},
    };
    return v;
}

int turnPrim(const std::string& dir) {
    return dir == "left" ? ScanDomain::LTURN : ScanDomain::RTURN;
}

// The V category: verbs, directed verbs, opposite and around phrases.
std::vector<Piece> scanVPhrases() {
    std::vector<Piece> vs;
    for (const auto& [w, p] : scanVerbs()) vs.push_back({{w}, {p}});
    const Tokens dirs = {"left", "right"};
    for (const auto& [w, p] : scanVerbs()) {
        for (const auto& d : dirs) vs.push_back({{w, d}, {turnPrim(d), p}});
    }
    for (const auto& d : dirs) vs.push_back({{"turn", d}, {turnPrim(d)}});
    for (const auto& d : dirs) {
        int t = turnPrim(d);
        for (const auto& [w, p] : scanVerbs()) {
            vs.push_back({{w, "opposite", d}, {t, t, p}});
        }
        vs.push_back({{"turn", "opposite", d}, {t, t}});
    }
    for (const auto& d : dirs) {
        int t = turnPrim(d);
        for (const auto& [w, p] : scanVerbs()) {
            vs.push_back({{w, "around", d}, repeated({t, p}, 4)});
        }
        vs.push_back({{"turn", "around", d}, repeated({t}, 4)});
    }
    return vs;
}

std::vector<Piece> scanSPhrases() {
    std::vector<Piece> ss;
    for (const auto& v : scanVPhrases()) {
        ss.push_back(v);
        ss.push_back({cat(v.in, {"twice"}), repeated(v.out, 2)});
        ss.push_back({cat(v.in, {"thrice"}), repeated(v.out, 3)});
    }
    return ss;
}

Example toExample(Piece p) {
    Example e;
    e.tokens = std::move(p.in);
    e.actions = std::move(p.out);
    return e;
}

}  // namespace

std::vector<Example> generateScanCorpus() {
    std::vector<Example> out;
    std::vector<Piece> ss = scanSPhrases();
    for (const auto& s : ss) out.push_back(toExample(s));
    for (const auto& a : ss) {
        for (const auto& b : ss) {
            out.push_back(toExample({cat(cat(a.in, {"and"}), b.in), cat(a.out, b.out)}));
        }
    }
    for (const auto& a : ss) {
        for (const auto& b : ss) {
            out.push_back(toExample({cat(cat(a.in, {"after"}), b.in), cat(b.out, a.out)}));
        }
    }
    return out;
}

const std::vector<std::string>& scanWords() {
    static const std::vector<std::string> w = {"walk", "look",     "run",    "jump",  "turn",
                                               "left", "right",    "opposite", "around", "twice",
                                               "thrice", "and",    "after"};
    return w;
}

std::vector<Example> loadScanFile(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open SCAN file: " + path);
    std::vector<Example> out;
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        size_t inPos = line.find("IN:");
        size_t outPos = line.find("OUT:");
        if (inPos == std::string::npos || outPos == std::string::npos || outPos < inPos) {
            throw DataError("malformed SCAN line " + std::to_string(lineno) + ": " + line);
        }
        Example e;
        std::istringstream ins(line.substr(inPos + 3, outPos - inPos - 3));
        std::string tok;
        while (ins >> tok) e.tokens.push_back(tok);
        std::istringstream outs(line.substr(outPos + 4));
        while (outs >> tok) e.actions.push_back(ScanDomain::primFromDataset(tok));
        if (e.tokens.empty()) {
            throw DataError("empty input at SCAN line " + std::to_string(lineno));
        }
        out.push_back(std::move(e));
    }
    return out;
}

void saveScanFile(const std::string& path, const std::vector<Example>& xs) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write SCAN file: " + path);
    for (const auto& e : xs) {
        os << "IN:";
        for (const auto& t : e.tokens) os << ' ' << t;
        os << " OUT:";
        for (int a : e.actions) os << ' ' << ScanDomain::primToDataset(a);
        os << '\n';
    }
}

namespace {

bool containsToken(const Example& e, const std::string& w) {
    return std::find(e.tokens.begin(), e.tokens.end(), w) != e.tokens.end();
}

bool containsAroundRight(const Example& e) {
    for (size_t i = 0; i + 1 < e.tokens.size(); ++i) {
        if (e.tokens[i] == "around" && e.tokens[i + 1] == "right") return true;
    }
    return false;
}

Split splitSimple(const std::vector<Example>& corpus, uint64_t seed) {
    std::vector<size_t> idx(corpus.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    size_t nTrain = idx.size() * 8 / 10;
    Split s;
    for (size_t i = 0; i < idx.size(); ++i) {
        (i < nTrain ? s.train : s.test).push_back(corpus[idx[i]]);
    }
    return s;
}

}  // namespace

Split buildScanSplit(const std::string& name, const std::vector<Example>& corpus, uint64_t seed) {
    Split s;
    if (name == "simple" || name == "simple100") {
        s = splitSimple(corpus, seed);
    } else if (name == "simple10") {
        Split base = splitSimple(corpus, seed);
        // 10% of the training set, uniformly per input length.
        std::map<size_t, std::vector<const Example*>> buckets;
        for (const auto& e : base.train) buckets[e.tokens.size()].push_back(&e);
        std::mt19937_64 rng(seed + 1);
        for (auto& [len, xs] : buckets) {
            std::shuffle(xs.begin(), xs.end(), rng);
            size_t keep = std::max<size_t>(1, xs.size() / 10);
            for (size_t i = 0; i < keep; ++i) s.train.push_back(*xs[i]);
        }
        s.test = base.test;
    } else if (name == "jump") {
        for (const auto& e : corpus) {
            bool isolated = e.tokens == Tokens{"jump"};
            if (isolated || !containsToken(e, "jump")) {
                s.train.push_back(e);
            } else {
                s.test.push_back(e);
            }
        }
    } else if (name == "aroundRight") {
        for (const auto& e : corpus) {
            (containsAroundRight(e) ? s.test : s.train).push_back(e);
        }
    } else if (name == "length") {
        for (const auto& e : corpus) {
            (e.actions.size() <= 22 ? s.train : s.test).push_back(e);
        }
    } else {
        throw ConfigError("unknown SCAN split: " + name);
    }
    if (s.train.empty() || s.test.empty()) throw DataError("degenerate split: " + name);
    return s;
}

// ---------------------------------------------------------------------------
// Visual surrogate dataset.

const std::vector<std::string>& visualVocabulary() {
    static const std::vector<std::string> words = [] {
        std::vector<std::string> w = visattr::kColors;  // gray..yellow
        for (const auto& x : {"cubes", "spheres", "cylinders", "things"}) w.push_back(x);
        for (const auto& x : {"shiny", "matte", "large", "small"}) w.push_back(x);
        for (const auto& x : visattr::kRelations) w.push_back(x);
        for (const auto& x : {"color", "shape", "material", "size"}) w.push_back(x);
        for (const auto& x : {"how", "many", "are", "there", "any", "is", "what", "the", "of",
                              "and", "or"}) {
            w.push_back(x);
        }
        return w;
    }();
    return words;
}

namespace {

constexpr double kGridStep = 0.13;  // pairwise coordinate gap (both axes)

// Feature noise gets its own stream so scenes reloaded from JSONL (which
// stores attributes, not draws) reproduce the same features.
std::mt19937_64 noiseRng(uint64_t seed, size_t i) {
    return std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL ^ (i * 0x2545f4914f6cdd1dULL) ^ 0x5bULL);
}

std::vector<SceneObject> drawObjects(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nObj(3, 6);
    int n = nObj(rng);
    std::vector<int> slotsX(7), slotsY(7);
    for (int i = 0; i < 7; ++i) slotsX[i] = slotsY[i] = i;
    std::shuffle(slotsX.begin(), slotsX.end(), rng);
    std::shuffle(slotsY.begin(), slotsY.end(), rng);
    std::uniform_int_distribution<int> color(0, 7), shape(0, 2), mat(0, 1), size(0, 1);
    std::vector<SceneObject> objs;
    for (int i = 0; i < n; ++i) {
        SceneObject o;
        o.color = color(rng);
        o.shape = shape(rng);
        o.material = mat(rng);
        o.size = size(rng);
        o.x = 0.08 + kGridStep * slotsX[i];
        o.y = 0.08 + kGridStep * slotsY[i];
        objs.push_back(o);
    }
    return objs;
}

const char* shapeNoun(int shape) {
    static const char* nouns[] = {"cubes", "spheres", "cylinders"};
    return nouns[shape];
}

// A conjunctive descriptor: optional adjectives + noun, with its surface
// tokens and discrete extension.
struct Descriptor {
    Tokens tokens;                   // e.g. {"red", "shiny", "cubes"}
    std::vector<std::string> preds;  // concept words, noun last
};

std::vector<int> extension(const Descriptor& d, const std::vector<SceneObject>& objs) {
    std::vector<int> out;
    for (size_t i = 0; i < objs.size(); ++i) {
        bool ok = true;
        for (const auto& p : d.preds) ok = ok && objHasConcept(objs[i], p);
        if (ok) out.push_back(static_cast<int>(i));
    }
    return out;
}

Descriptor drawDescriptor(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Descriptor d;
    std::string noun = u(rng) < 0.5 ? "things" : shapeNoun(std::uniform_int_distribution<int>(
                                                     0, 2)(rng));
    int nAdj = u(rng) < 0.55 ? 1 : (u(rng) < 0.25 ? 2 : 0);
    std::vector<std::string> adjPool = visattr::kColors;
    for (const auto& x : {"shiny", "matte", "large", "small"}) adjPool.push_back(x);
    std::shuffle(adjPool.begin(), adjPool.end(), rng);
    for (int i = 0; i < nAdj; ++i) {
        d.tokens.push_back(adjPool[i]);
        d.preds.push_back(adjPool[i]);
    }
    d.tokens.push_back(noun);
    d.preds.push_back(noun);
    return d;
}

// Draws a descriptor whose extension has exactly one object (or fails).
bool drawUnique(std::mt19937_64& rng, const std::vector<SceneObject>& objs, Descriptor& out) {
    for (int tries = 0; tries < 40; ++tries) {
        Descriptor d = drawDescriptor(rng);
        if (extension(d, objs).size() == 1) {
            out = d;
            return true;
        }
    }
    return false;
}

Tokens relTokens(const std::string& rel) {
    if (rel == "behind") return {"behind", "the"};
    return {rel, "of", "the"};
}

const std::string& drawRelation(std::mt19937_64& rng) {
    return visattr::kRelations[std::uniform_int_distribution<int>(0, 3)(rng)];
}

std::vector<int> relateFilter(const std::vector<int>& base, int ref, const std::string& rel,
                              const std::vector<SceneObject>& objs) {
    std::vector<int> out;
    for (int i : base) {
        if (i != ref && pairHasRelation(objs[i], objs[ref], rel)) out.push_back(i);
    }
    return out;
}

std::string attributeWordOf(const SceneObject& o, const std::string& attr) {
    if (attr == "color") return visattr::kColors[o.color];
    if (attr == "shape") return shapeNoun(o.shape);
    if (attr == "material") return visattr::kMaterials[o.material];
    return visattr::kSizes[o.size];
}

// One question for `objs`; returns false if the sampler failed to satisfy
// its uniqueness requirements.
bool drawQuestion(std::mt19937_64& rng, const std::vector<SceneObject>& objs, int wantHops,
                  Example& out) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    out.hops = wantHops;
    if (wantHops == 0) {
        double kind = u(rng);
        if (kind < 0.30) {  // exist
            Descriptor d = drawDescriptor(rng);
            out.tokens = cat({"are", "there", "any"}, d.tokens);
            out.answer = {VisualAnswer::Kind::Bool, !extension(d, objs).empty(), 0, ""};
        } else if (kind < 0.55) {  // count
            Descriptor d = drawDescriptor(rng);
            out.tokens = cat({"how", "many"}, d.tokens);
            out.answer = {VisualAnswer::Kind::Count, false,
                          static_cast<int>(extension(d, objs).size()), ""};
        } else if (kind < 0.75) {  // query
            Descriptor d;
            if (!drawUnique(rng, objs, d)) return false;
            std::vector<std::string> attrs = {"color", "shape", "material", "size"};
            std::string attr = attrs[std::uniform_int_distribution<int>(0, 3)(rng)];
            int tgt = extension(d, objs)[0];
            out.tokens = cat(cat({"what", attr, "is", "the"}, d.tokens), {});
            out.answer = {VisualAnswer::Kind::Word, false, 0, attributeWordOf(objs[tgt], attr)};
        } else if (kind < 0.90) {  // coordinated adjectives
            std::vector<std::string> adjPool = visattr::kColors;
            for (const auto& x : {"shiny", "matte", "large", "small"}) adjPool.push_back(x);
            std::shuffle(adjPool.begin(), adjPool.end(), rng);
            Descriptor d;
            d.tokens = {adjPool[0], "and", adjPool[1], "things"};
            d.preds = {adjPool[0], adjPool[1], "things"};
            out.tokens = cat({"how", "many"}, d.tokens);
            out.answer = {VisualAnswer::Kind::Count, false,
                          static_cast<int>(extension(d, objs).size()), ""};
        } else {  // union of object sets
            Descriptor a = drawDescriptor(rng), b = drawDescriptor(rng);
            auto ea = extension(a, objs), eb = extension(b, objs);
            std::vector<int> un;
            std::set_union(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(un));
            out.tokens = cat(cat(cat({"how", "many", "things", "are"}, a.tokens), {"or"}),
                             b.tokens);
            out.answer = {VisualAnswer::Kind::Count, false, static_cast<int>(un.size()), ""};
        }
        return true;
    }
    if (wantHops == 1) {
        Descriptor ref;
        if (!drawUnique(rng, objs, ref)) return false;
        Descriptor d = drawDescriptor(rng);
        const std::string& rel = drawRelation(rng);
        std::vector<int> tgt =
            relateFilter(extension(d, objs), extension(ref, objs)[0], rel, objs);
        bool exist = u(rng) < 0.35;
        Tokens body = cat(cat(d.tokens, relTokens(rel)), ref.tokens);
        if (exist) {
            out.tokens = cat({"are", "there", "any"}, body);
            out.answer = {VisualAnswer::Kind::Bool, !tgt.empty(), 0, ""};
        } else {
            out.tokens = cat({"how", "many"}, body);
            out.answer = {VisualAnswer::Kind::Count, false, static_cast<int>(tgt.size()), ""};
        }
        return true;
    }
    // Two hops: the middle referent must also be unique.
    Descriptor far;
    if (!drawUnique(rng, objs, far)) return false;
    int farIdx = extension(far, objs)[0];
    for (int tries = 0; tries < 40; ++tries) {
        Descriptor mid = drawDescriptor(rng);
        const std::string& rel2 = drawRelation(rng);
        std::vector<int> midSet = relateFilter(extension(mid, objs), farIdx, rel2, objs);
        if (midSet.size() != 1) continue;
        Descriptor d = drawDescriptor(rng);
        const std::string& rel1 = drawRelation(rng);
        std::vector<int> tgt = relateFilter(extension(d, objs), midSet[0], rel1, objs);
        out.tokens = cat(cat(cat(cat(cat({"how", "many"}, d.tokens), relTokens(rel1)),
                                 mid.tokens),
                             relTokens(rel2)),
                         far.tokens);
        out.answer = {VisualAnswer::Kind::Count, false, static_cast<int>(tgt.size()), ""};
        return true;
    }
    return false;
}

}  // namespace

std::vector<Scene> generateScenes(int count, uint64_t seed, double noiseSigma, int D, int PD) {
    std::vector<Scene> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + static_cast<uint64_t>(i) + 1);
        std::vector<SceneObject> objs = drawObjects(rng);
        std::mt19937_64 nrng = noiseRng(seed, static_cast<size_t>(i));
        out.push_back(makeScene(std::move(objs), noiseSigma, nrng, D, PD));
    }
    return out;
}

VisualDataset generateVisualDataset(int nScenes, int questionsPerScene, uint64_t seed,
                                    double noiseSigma) {
    VisualDataset ds;
    ds.scenes = generateScenes(nScenes, seed, noiseSigma);
    static const int hopPlan[4] = {0, 0, 1, 2};
    for (int i = 0; i < nScenes; ++i) {
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(i) + 1);
        const auto& objs = ds.scenes[i].objs;
        for (int q = 0; q < questionsPerScene; ++q) {
            int hops = hopPlan[q % 4];
            Example ex;
            bool ok = false;
            for (int tries = 0; tries < 25 && !ok; ++tries) {
                ex = Example{};
                ok = drawQuestion(rng, objs, hops, ex);
            }
            if (!ok) {  // fall back to a plain hop-0 question
                ex = Example{};
                Descriptor d = drawDescriptor(rng);
                ex.tokens = cat({"how", "many"}, d.tokens);
                ex.answer = {VisualAnswer::Kind::Count, false,
                             static_cast<int>(extension(d, objs).size()), ""};
                ex.hops = 0;
            }
            ex.sceneIdx = i;
            ds.questions.push_back(std::move(ex));
        }
    }
    return ds;
}

Split buildVisualSplit(const std::string& name, const VisualDataset& ds, uint64_t seed) {
    Split s;
    const auto& qs = ds.questions;
    auto lenOf = [](const Example& e) { return static_cast<int>(e.tokens.size()); };
    auto has = [](const Example& e, const char* w) {
        return std::find(e.tokens.begin(), e.tokens.end(), w) != e.tokens.end();
    };
    if (name == "standard") {
        std::vector<size_t> idx(qs.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::mt19937_64 rng(seed);
        std::shuffle(idx.begin(), idx.end(), rng);
        size_t nTrain = idx.size() * 8 / 10;
        for (size_t i = 0; i < idx.size(); ++i) {
            (i < nTrain ? s.train : s.test).push_back(qs[idx[i]]);
        }
    } else if (name == "purple") {
        for (const auto& e : qs) {
            (!has(e, "purple") || lenOf(e) <= 5 ? s.train : s.test).push_back(e);
        }
    } else if (name == "right") {
        for (const auto& e : qs) {
            (!has(e, "right") || lenOf(e) <= 10 ? s.train : s.test).push_back(e);
        }
    } else if (name == "count") {
        for (const auto& e : qs) {
            bool isCount = e.answer.kind == VisualAnswer::Kind::Count;
            (!isCount || lenOf(e) <= 9 ? s.train : s.test).push_back(e);
        }
    } else if (name == "depth") {
        for (const auto& e : qs) {
            (e.hops <= 1 ? s.train : s.test).push_back(e);
        }
    } else {
        throw ConfigError("unknown visual split: " + name);
    }
    if (s.train.empty() || s.test.empty()) throw DataError("degenerate split: " + name);
    return s;
}

// ---------------------------------------------------------------------------
// JSON Lines IO.

void saveScenesJsonl(const std::string& path, const std::vector<Scene>& scenes) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write scenes: " + path);
    for (const auto& s : scenes) {
        nlohmann::json objs = nlohmann::json::array();
        for (const auto& o : s.objs) {
            objs.push_back({{"color", visattr::kColors[o.color]},
                            {"shape", visattr::kShapes[o.shape]},
                            {"material", visattr::kMaterials[o.material]},
                            {"size", visattr::kSizes[o.size]},
                            {"x", o.x},
                            {"y", o.y}});
        }
        os << nlohmann::json{{"objects", objs}}.dump() << '\n';
    }
}

namespace {

int lookupOrThrow(const std::vector<std::string>& xs, const std::string& x, const char* what) {
    auto it = std::find(xs.begin(), xs.end(), x);
    if (it == xs.end()) throw DataError(std::string("unknown ") + what + ": " + x);
    return static_cast<int>(it - xs.begin());
}

}  // namespace

std::vector<Scene> loadScenesJsonl(const std::string& path, uint64_t seed, double noiseSigma,
                                   int D, int PD) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot read scenes: " + path);
    std::vector<Scene> out;
    std::string line;
    size_t i = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        std::vector<SceneObject> objs;
        for (const auto& jo : j.at("objects")) {
            SceneObject o;
            o.color = lookupOrThrow(visattr::kColors, jo.at("color"), "color");
            o.shape = lookupOrThrow(visattr::kShapes, jo.at("shape"), "shape");
            o.material = lookupOrThrow(visattr::kMaterials, jo.at("material"), "material");
            o.size = lookupOrThrow(visattr::kSizes, jo.at("size"), "size");
            o.x = jo.at("x");
            o.y = jo.at("y");
            objs.push_back(o);
        }
        std::mt19937_64 nrng = noiseRng(seed, i);
        out.push_back(makeScene(std::move(objs), noiseSigma, nrng, D, PD));
        ++i;
    }
    return out;
}

void saveQuestionsJsonl(const std::string& path, const std::vector<Example>& questions) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write questions: " + path);
    for (const auto& e : questions) {
        nlohmann::json j{{"scene", e.sceneIdx}, {"tokens", e.tokens}, {"hops", e.hops}};
        switch (e.answer.kind) {
            case VisualAnswer::Kind::Bool:
                j["answerKind"] = "bool";
                j["answer"] = e.answer.b;
                break;
            case VisualAnswer::Kind::Count:
                j["answerKind"] = "count";
                j["answer"] = e.answer.n;
                break;
            case VisualAnswer::Kind::Word:
                j["answerKind"] = "word";
                j["answer"] = e.answer.w;
                break;
        }
        os << j.dump() << '\n';
    }
}

std::vector<Example> loadQuestionsJsonl(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot read questions: " + path);
    std::vector<Example> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        Example e;
        e.sceneIdx = j.at("scene");
        e.tokens = j.at("tokens").get<std::vector<std::string>>();
        e.hops = j.value("hops", 0);
        std::string kind = j.at("answerKind");
        if (kind == "bool") {
            e.answer = {VisualAnswer::Kind::Bool, j.at("answer").get<bool>(), 0, ""};
        } else if (kind == "count") {
            e.answer = {VisualAnswer::Kind::Count, false, j.at("answer").get<int>(), ""};
        } else if (kind == "word") {
            e.answer = {VisualAnswer::Kind::Word, false, 0, j.at("answer").get<std::string>()};
        } else {
            throw DataError("unknown answer kind: " + kind);
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace g2l2
