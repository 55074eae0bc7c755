#pragma once

// Domain abstraction: a typed DSL (operation signatures), its execution
// semantics over Values, the mergeable value kinds, and the sentence-level
// root syntactic types.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "g2l2/params.hpp"
#include "g2l2/syntax.hpp"
#include "g2l2/term.hpp"
#include "g2l2/value.hpp"

namespace g2l2 {

enum class ArgKind : uint8_t { Value, Int, Concept };

struct OpArg {
    ArgKind kind;
    SemPrim type = SemPrim::Str;  // for Value args
};

struct OpInfo {
    std::string name;
    SemPrim ret;
    std::vector<OpArg> args;
};

struct ConceptInfo {
    std::string name;       // e.g. "shiny:obj"
    std::string paramName;  // parameter-store key of the embedding
};

// Per-example execution environment: the tape, trainable parameters (lifted
// lazily as leaves) and domain context such as the current scene.
struct ExecContext {
    explicit ExecContext(Tape& t, ParamStore* p = nullptr, const void* s = nullptr)
        : tape(t), params(p), scene(s) {}

    Tape& tape;
    ParamStore* params = nullptr;
    const void* scene = nullptr;

    // Lazily lifts a parameter onto the tape (one leaf per tape).
    Var param(const std::string& name);
    // Caches a non-trainable constant leaf under `key` (one per tape).
    Var constant(const std::string& key, const std::vector<double>& vals);
    // node id -> parameter name, for routing gradients after backward().
    const std::map<int, std::string>& paramLeaves() const { return leafNames_; }

private:
    std::map<std::string, Var> cache_;
    std::map<std::string, Var> constCache_;
    std::map<int, std::string> leafNames_;
};

class Domain {
public:
    virtual ~Domain() = default;

    const std::string& name() const { return name_; }
    SynTable& syn() { return syn_; }
    const SynTable& syn() const { return syn_; }
    const std::vector<OpInfo>& ops() const { return ops_; }
    const OpInfo& op(int id) const { return ops_.at(id); }
    int opId(const std::string& name) const;
    const std::vector<ConceptInfo>& concepts() const { return concepts_; }
    int conceptId(const std::string& name) const;
    const std::vector<int>& rootSyn() const { return roots_; }
    int vocabSize() const { return vocab_; }

    // Evaluates op term `t` whose value-kid results are in `argVals`
    // (aligned with t.kids; null entries for static kids).
    virtual ValuePtr evalOp(const Term& t, const std::vector<ValuePtr>& argVals,
                            ExecContext& ctx) const = 0;

    virtual bool mergeableKind(SemPrim k) const = 0;

protected:
    int addOp(OpInfo info);
    int addConcept(ConceptInfo info);

    std::string name_;
    SynTable syn_;
    std::vector<OpInfo> ops_;
    std::vector<ConceptInfo> concepts_;
    std::vector<int> roots_;
    int vocab_ = 0;
};

}  // namespace g2l2
