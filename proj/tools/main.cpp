// g2l2 command-line driver: dataset preparation, training, evaluation,
// parse/lexicon inspection and metric plots.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "g2l2/data_io.hpp"
#include "g2l2/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace g2l2;

namespace {

constexpr const char* kVersion = "1.0.0";

// Exit codes: 0 ok, 2 usage, 3 config, 4 data, 5 parse failure, 1 internal.
enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kConfig = 3, kData = 4, kParse = 5 };

struct Options {
    std::string config;
    std::string domain = "scan";
    std::string split;
    std::string checkpoint;
    std::string out = "runs/run";
    std::string dataDir = "data";
    uint64_t seed = 0;
    int epochs = -1;
    double lr = -1.0;
    int restarts = -1;
    bool showDerivation = false;
    bool offline = false;
    // config-file-only knobs
    int maxTrain = 2000;
    int nScenes = 400;
    int questionsPerScene = 4;
    double noiseSigma = 0.25;
    std::string scanUrl;
};

std::map<std::string, std::string> readConfigFile(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto notSpace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notSpace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notSpace).base(), line.end());
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + " is not key = value");
        }
        std::string k = line.substr(0, eq), v = line.substr(eq + 1);
        k.erase(std::find_if(k.rbegin(), k.rend(), notSpace).base(), k.end());
        v.erase(v.begin(), std::find_if(v.begin(), v.end(), notSpace));
        kv[k] = v;
    }
    return kv;
}

void applyConfig(Options& o, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        try {
            if (k == "domain") o.domain = v;
            else if (k == "split") o.split = v;
            else if (k == "checkpoint") o.checkpoint = v;
            else if (k == "out") o.out = v;
            else if (k == "dataDir") o.dataDir = v;
            else if (k == "seed") o.seed = std::stoull(v);
            else if (k == "epochs") o.epochs = std::stoi(v);
            else if (k == "lr") o.lr = std::stod(v);
            else if (k == "restarts") o.restarts = std::stoi(v);
            else if (k == "offline") o.offline = (v == "true" || v == "1");
            else if (k == "maxTrain") o.maxTrain = std::stoi(v);
            else if (k == "nScenes") o.nScenes = std::stoi(v);
            else if (k == "questionsPerScene") o.questionsPerScene = std::stoi(v);
            else if (k == "noiseSigma") o.noiseSigma = std::stod(v);
            else if (k == "scanUrl") o.scanUrl = v;
            else throw ConfigError("unknown config key: " + k);
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad value for config key " + k + ": " + v);
        }
    }
}

std::string effectiveConfigText(const Options& o, const std::string& command) {
    std::ostringstream os;
    os << "command=" << command << " domain=" << o.domain << " split=" << o.split
       << " checkpoint=" << o.checkpoint << " out=" << o.out << " dataDir=" << o.dataDir
       << " seed=" << o.seed << " epochs=" << o.epochs << " lr=" << o.lr
       << " restarts=" << o.restarts << " offline=" << o.offline << " maxTrain=" << o.maxTrain
       << " nScenes=" << o.nScenes << " qps=" << o.questionsPerScene
       << " noiseSigma=" << o.noiseSigma;
    return os.str();
}

void writeManifest(const Options& o, const std::string& command, const std::string& metricsPath) {
    fs::create_directories(o.out);
    json m{{"command", command},
           {"configHash", std::to_string(std::hash<std::string>{}(effectiveConfigText(o, command)))},
           {"seed", o.seed},
           {"domain", o.domain},
           {"split", o.split},
           {"dataDir", o.dataDir},
           {"checkpoint", o.checkpoint},
           {"metrics", metricsPath},
           {"codeVersion", kVersion}};
    std::ofstream(fs::path(o.out) / "manifest.json") << m.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Dataset access.

std::vector<Example> scanCorpus(const Options& o) {
    fs::path f = fs::path(o.dataDir) / "scan" / "tasks.txt";
    if (fs::exists(f)) return loadScanFile(f.string());
    return generateScanCorpus();
}

VisualDataset visualDataset(const Options& o) {
    fs::path dir = fs::path(o.dataDir) / "visual";
    VisualDataset ds;
    if (fs::exists(dir / "scenes.jsonl") && fs::exists(dir / "questions.jsonl")) {
        ds.scenes = loadScenesJsonl((dir / "scenes.jsonl").string(), o.seed, o.noiseSigma);
        ds.questions = loadQuestionsJsonl((dir / "questions.jsonl").string());
        return ds;
    }
    return generateVisualDataset(o.nScenes, o.questionsPerScene, o.seed, o.noiseSigma);
}

std::vector<Example> subsample(std::vector<Example> xs, size_t n, uint64_t seed) {
    if (xs.size() <= n) return xs;
    std::mt19937_64 rng(seed);
    std::shuffle(xs.begin(), xs.end(), rng);
    xs.resize(n);
    return xs;
}

// ---------------------------------------------------------------------------
// Commands.

int cmdFetchData(const Options& o) {
    fs::path dir = fs::path(o.dataDir) / "scan";
    fs::create_directories(dir);
    std::vector<Example> corpus;
    if (!o.offline && !o.scanUrl.empty()) {
        throw DataError("remote fetch is not available in this build; rerun with --offline");
    }
    corpus = generateScanCorpus();
    saveScanFile((dir / "tasks.txt").string(), corpus);
    // Split manifests: example ids per side, plus the generating parameters.
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < corpus.size(); ++i) {
        std::ostringstream key;
        for (const auto& t : corpus[i].tokens) key << t << ' ';
        index[key.str()] = i;
    }
    auto ids = [&](const std::vector<Example>& xs) {
        std::vector<size_t> out;
        for (const auto& e : xs) {
            std::ostringstream key;
            for (const auto& t : e.tokens) key << t << ' ';
            out.push_back(index.at(key.str()));
        }
        return out;
    };
    for (const char* name : {"simple", "jump", "aroundRight", "length"}) {
        Split s = buildScanSplit(name, corpus, o.seed);
        json m{{"split", name}, {"seed", o.seed}, {"train", ids(s.train)}, {"test", ids(s.test)}};
        std::ofstream(dir / (std::string("split-") + name + ".json")) << m.dump() << '\n';
    }
    writeManifest(o, "fetch-data", "");
    std::cout << "wrote " << corpus.size() << " SCAN examples to " << dir << "\n";
    return kOk;
}

int cmdGenVisual(const Options& o) {
    fs::path dir = fs::path(o.dataDir) / "visual";
    fs::create_directories(dir);
    VisualDataset ds =
        generateVisualDataset(o.nScenes, o.questionsPerScene, o.seed, o.noiseSigma);
    saveScenesJsonl((dir / "scenes.jsonl").string(), ds.scenes);
    saveQuestionsJsonl((dir / "questions.jsonl").string(), ds.questions);
    json m{{"scenes", ds.scenes.size()},
           {"questions", ds.questions.size()},
           {"seed", o.seed},
           {"noiseSigma", o.noiseSigma}};
    std::ofstream(dir / "dataset.json") << m.dump() << '\n';
    writeManifest(o, "gen-visual", "");
    std::cout << "wrote " << ds.scenes.size() << " scenes / " << ds.questions.size()
              << " questions to " << dir << "\n";
    return kOk;
}

struct RunLock {
    fs::path path;
    explicit RunLock(const fs::path& dir) : path(dir / ".lock") {
        fs::create_directories(dir);
        std::FILE* f = std::fopen(path.c_str(), "wx");
        if (!f) throw ConfigError("run directory is locked: " + path.string());
        std::fclose(f);
    }
    ~RunLock() { std::error_code ec; fs::remove(path, ec); }
};

TrainConfig makeTrainConfig(const Options& o, bool visual) {
    TrainConfig cfg;
    cfg.seed = o.seed;
    if (o.epochs > 0) cfg.epochs = o.epochs;
    if (o.lr > 0) cfg.lrTau = o.lr;
    if (o.restarts >= 0) cfg.maxRestarts = o.restarts;
    int e = cfg.epochs;
    if (visual) {
        cfg.curriculum = {{e / 3, 6}, {2 * e / 3, 11}};
    } else {
        cfg.curriculum = {{e / 3, 4}, {2 * e / 3, 7}};
    }
    cfg.metricsPath = (fs::path(o.out) / "metrics.jsonl").string();
    return cfg;
}

void reinitVisualParams(ParamStore& params, uint64_t seed) {
    for (auto& p : params.all()) {
        if (p.name.rfind("tau/", 0) == 0) {
            std::fill(p.data.begin(), p.data.end(), 0.0);
        } else {
            std::mt19937_64 rng(seed ^ std::hash<std::string>{}(p.name));
            std::normal_distribution<double> n(0.0, 0.1);
            for (double& x : p.data) x = n(rng);
        }
    }
}

void reinitTausOnly(ParamStore& params, uint64_t) {
    for (auto& p : params.all()) {
        if (p.name.rfind("tau/", 0) == 0) std::fill(p.data.begin(), p.data.end(), 0.0);
    }
}

int cmdTrain(const Options& o) {
    RunLock lock(o.out);
    TrainConfig cfg = makeTrainConfig(o, o.domain == "visual");
    { std::ofstream clear(cfg.metricsPath); }
    FitResult fit;
    ParamStore params;
    std::string split = o.split;
    if (o.domain == "scan") {
        if (split.empty()) split = "simple";
        Split s = buildScanSplit(split, scanCorpus(o), o.seed);
        std::vector<Example> train = subsample(std::move(s.train), o.maxTrain, o.seed + 17);
        ScanDomain dom;
        Lexicon lex = induceScanLexicon(dom, scanWords());
        lex.initTaus(params);
        ScanTask task(dom);
        fit = fitWithRestarts(task, lex, params, train, cfg, reinitTausOnly);
        std::ofstream ck(fs::path(o.out) / "checkpoint.txt");
        saveCheckpoint((fs::path(o.out) / "checkpoint.txt").string(), params, lex);
        double testAcc = Trainer(task, lex, params, cfg).evaluate(s.test);
        std::cout << "train acc " << fit.trainAcc << ", test(" << split << ") acc " << testAcc
                  << ", restarts " << fit.restartsUsed << "\n";
    } else if (o.domain == "visual") {
        if (split.empty()) split = "standard";
        VisualDataset ds = visualDataset(o);
        Split s = buildVisualSplit(split, ds, o.seed);
        ObjsetDomain dom(visualVocabulary());
        Lexicon lex = induceVisualLexicon(dom, visualVocabulary());
        dom.initParams(params, o.seed);
        lex.initTaus(params);
        VisualTask task(dom, ds.scenes);
        fit = fitWithRestarts(task, lex, params, s.train, cfg, reinitVisualParams);
        saveCheckpoint((fs::path(o.out) / "checkpoint.txt").string(), params, lex);
        double testAcc = Trainer(task, lex, params, cfg).evaluate(s.test);
        std::cout << "train acc " << fit.trainAcc << ", test(" << split << ") acc " << testAcc
                  << ", restarts " << fit.restartsUsed << "\n";
    } else if (o.domain == "arith") {
        throw ConfigError("the arith demo domain has fixed weights; nothing to train");
    } else {
        throw ConfigError("unknown domain: " + o.domain);
    }
    writeManifest(o, "train", cfg.metricsPath);
    return kOk;
}

int cmdEval(const Options& o) {
    if (o.checkpoint.empty()) throw ConfigError("eval requires --checkpoint");
    ParamStore params;
    double acc = 0.0;
    size_t n = 0;
    TrainConfig cfg;
    cfg.seed = o.seed;
    std::string split = o.split;
    if (o.domain == "scan") {
        if (split.empty()) split = "simple";
        ScanDomain dom;
        Lexicon lex = loadCheckpoint(o.checkpoint, dom, params);
        Split s = buildScanSplit(split, scanCorpus(o), o.seed);
        ScanTask task(dom);
        acc = Trainer(task, lex, params, cfg).evaluate(s.test);
        n = s.test.size();
    } else if (o.domain == "visual") {
        if (split.empty()) split = "standard";
        ObjsetDomain dom(visualVocabulary());
        Lexicon lex = loadCheckpoint(o.checkpoint, dom, params);
        VisualDataset ds = visualDataset(o);
        Split s = buildVisualSplit(split, ds, o.seed);
        VisualTask task(dom, ds.scenes);
        acc = Trainer(task, lex, params, cfg).evaluate(s.test);
        n = s.test.size();
    } else {
        throw ConfigError("eval supports domains scan and visual, got: " + o.domain);
    }
    fs::create_directories(o.out);
    std::string metrics = (fs::path(o.out) / "eval.json").string();
    std::ofstream(metrics) << json{{"split", split}, {"testAccuracy", acc}, {"examples", n}}.dump()
                           << '\n';
    writeManifest(o, "eval", metrics);
    std::cout << "split " << split << ": accuracy " << acc << " over " << n << " examples\n";
    return kOk;
}

int cmdParse(const Options& o, const std::string& sentence) {
    std::vector<std::string> tokens;
    std::istringstream is(sentence);
    std::string t;
    while (is >> t) tokens.push_back(t);

    ParamStore params;
    Tape tape;
    ExecContext ctx{tape, &params};
    std::unique_ptr<Domain> domPtr;
    std::unique_ptr<Lexicon> lexPtr;
    std::vector<Scene> scenes;
    if (o.domain == "arith") {
        auto dom = std::make_unique<ArithDomain>();
        lexPtr = std::make_unique<Lexicon>(arithFixtureLexicon(*dom));
        lexPtr->initTaus(params);
        domPtr = std::move(dom);
    } else if (o.domain == "scan") {
        auto dom = std::make_unique<ScanDomain>();
        if (!o.checkpoint.empty()) {
            lexPtr = std::make_unique<Lexicon>(loadCheckpoint(o.checkpoint, *dom, params));
        } else {
            lexPtr = std::make_unique<Lexicon>(induceScanLexicon(*dom, scanWords()));
            lexPtr->initTaus(params);
        }
        domPtr = std::move(dom);
    } else if (o.domain == "visual") {
        auto dom = std::make_unique<ObjsetDomain>(visualVocabulary());
        if (!o.checkpoint.empty()) {
            lexPtr = std::make_unique<Lexicon>(loadCheckpoint(o.checkpoint, *dom, params));
        } else {
            lexPtr = std::make_unique<Lexicon>(induceVisualLexicon(*dom, visualVocabulary()));
            dom->setOracleParams(params);
            lexPtr->initTaus(params);
        }
        scenes = generateScenes(1, o.seed, 0.0);
        ctx.scene = &scenes[0];
        domPtr = std::move(dom);
    } else {
        throw ConfigError("unknown domain: " + o.domain);
    }

    std::vector<Derivation> roots = parse(tokens, *lexPtr, *domPtr, ctx);
    const Derivation* best = &roots[0];
    for (const auto& r : roots) {
        if (r.tauVal > best->tauVal) best = &r;
    }
    std::cout << roots.size() << " root derivation(s); best (log-weight "
              << best->tauVal << "): " << domPtr->syn().print(best->syn) << "\n";
    if (o.domain == "scan" && best->prog.body && best->prog.body->val) {
        std::cout << "decoded:";
        for (int p : ScanDomain::decode(*best->prog.body->val, tape)) {
            std::cout << ' ' << ScanDomain::primName(p);
        }
        std::cout << "\n";
    }
    if (o.showDerivation) {
        std::cout << "entries of the best derivation:\n";
        for (int id : best->entries) {
            const LexiconEntry& e = lexPtr->entry(id);
            std::cout << "  " << e.word << "\t";
            if (e.isEmpty) {
                std::cout << "EMPTY\t-";
            } else {
                std::cout << domPtr->syn().print(e.syn) << "\t"
                          << (e.prog.body ? printProgram(e.prog, *domPtr) : std::string("-"));
            }
            std::cout << "\n";
        }
    }
    return kOk;
}

int cmdInspectLexicon(const Options& o) {
    if (o.checkpoint.empty()) throw ConfigError("inspect-lexicon requires --checkpoint");
    ParamStore params;
    if (o.domain == "scan") {
        ScanDomain dom;
        Lexicon lex = loadCheckpoint(o.checkpoint, dom, params);
        lex.dump(std::cout, params);
    } else if (o.domain == "visual") {
        ObjsetDomain dom(visualVocabulary());
        Lexicon lex = loadCheckpoint(o.checkpoint, dom, params);
        lex.dump(std::cout, params);
    } else {
        throw ConfigError("inspect-lexicon supports domains scan and visual");
    }
    return kOk;
}

void writeSvg(const std::string& path, const std::string& title,
              const std::vector<double>& ys) {
    if (ys.empty()) throw DataError("no data points for plot: " + title);
    double lo = *std::min_element(ys.begin(), ys.end());
    double hi = *std::max_element(ys.begin(), ys.end());
    if (hi - lo < 1e-12) hi = lo + 1.0;
    const double W = 640, H = 360, M = 48;
    std::ofstream os(path);
    if (!os) throw DataError("cannot write plot: " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
       << "</text>\n<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < ys.size(); ++i) {
        double x = M + (W - 2 * M) * (ys.size() == 1 ? 0.5 : double(i) / (ys.size() - 1));
        double y = H - M - (H - 2 * M) * (ys[i] - lo) / (hi - lo);
        os << x << ',' << y << ' ';
    }
    os << "\"/>\n<text x=\"8\" y=\"" << M << "\">" << hi << "</text>\n<text x=\"8\" y=\""
       << H - M << "\">" << lo << "</text>\n</svg>\n";
}

int cmdExportPlots(const Options& o) {
    fs::path metrics = fs::path(o.out) / "metrics.jsonl";
    std::ifstream is(metrics);
    if (!is) throw DataError("cannot open metrics file: " + metrics.string());
    std::vector<double> loss, acc;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        loss.push_back(j.at("loss"));
        acc.push_back(j.at("acc"));
    }
    writeSvg((fs::path(o.out) / "loss.svg").string(), "training loss per epoch", loss);
    writeSvg((fs::path(o.out) / "accuracy.svg").string(), "train accuracy per epoch", acc);
    writeManifest(o, "export-plots", metrics.string());
    std::cout << "wrote loss.svg and accuracy.svg to " << o.out << "\n";
    return kOk;
}

void addCommonFlags(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "key = value config file");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--domain", o.domain, "scan | visual | arith")
        ->check(CLI::IsMember({"scan", "visual", "arith"}));
    cmd->add_option("--split", o.split, "dataset split name");
    cmd->add_option("--checkpoint", o.checkpoint, "checkpoint path");
    cmd->add_option("--out", o.out, "run directory");
    cmd->add_option("--epochs", o.epochs, "training epochs");
    cmd->add_option("--lr", o.lr, "learning rate for lexicon weights");
    cmd->add_option("--restarts", o.restarts, "max random restarts");
    cmd->add_flag("--show-derivation", o.showDerivation, "print the best derivation's entries");
    cmd->add_flag("--offline", o.offline, "never touch the network");
}

// Re-applies precedence defaults < config file < flags.
void finalizeOptions(CLI::App* cmd, Options& o) {
    if (!o.config.empty()) {
        Options fromFile;  // defaults
        applyConfig(fromFile, readConfigFile(o.config));
        auto keepFlag = [&](const char* flag, auto member) {
            if (cmd->count(flag) == 0) o.*member = fromFile.*member;
        };
        keepFlag("--domain", &Options::domain);
        keepFlag("--split", &Options::split);
        keepFlag("--checkpoint", &Options::checkpoint);
        keepFlag("--out", &Options::out);
        keepFlag("--seed", &Options::seed);
        keepFlag("--epochs", &Options::epochs);
        keepFlag("--lr", &Options::lr);
        keepFlag("--restarts", &Options::restarts);
        keepFlag("--offline", &Options::offline);
        o.dataDir = fromFile.dataDir;
        o.maxTrain = fromFile.maxTrain;
        o.nScenes = fromFile.nScenes;
        o.questionsPerScene = fromFile.questionsPerScene;
        o.noiseSigma = fromFile.noiseSigma;
        o.scanUrl = fromFile.scanUrl;
    }
    if (const char* env = std::getenv("G2L2_DATA_DIR")) o.dataDir = env;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"g2l2: grammar-based grounded lexicon learning"};
    app.require_subcommand(1);
    Options o;
    std::string sentence;

    CLI::App* fetch = app.add_subcommand("fetch-data", "write the SCAN corpus and split manifests");
    CLI::App* genVisual = app.add_subcommand("gen-visual", "generate the visual surrogate dataset");
    CLI::App* train = app.add_subcommand("train", "induce a lexicon and fit it");
    CLI::App* evalc = app.add_subcommand("eval", "evaluate a checkpoint on a split");
    CLI::App* parsec = app.add_subcommand("parse", "parse one sentence");
    parsec->add_option("sentence", sentence, "sentence to parse")->required();
    CLI::App* inspect = app.add_subcommand("inspect-lexicon", "print a checkpoint's lexicon");
    CLI::App* plots = app.add_subcommand("export-plots", "render SVG plots from metrics.jsonl");
    for (CLI::App* c : {fetch, genVisual, train, evalc, parsec, inspect, plots}) {
        addCommonFlags(c, o);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kUsage;
    }

    CLI::App* cmd = app.get_subcommands().front();
    try {
        finalizeOptions(cmd, o);
        if (cmd == fetch) return cmdFetchData(o);
        if (cmd == genVisual) return cmdGenVisual(o);
        if (cmd == train) return cmdTrain(o);
        if (cmd == evalc) return cmdEval(o);
        if (cmd == parsec) return cmdParse(o, sentence);
        if (cmd == inspect) return cmdInspectLexicon(o);
        if (cmd == plots) return cmdExportPlots(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const ParseFailure& e) {
        std::cerr << "parse failure: " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
