#include "g2l2/domain.hpp"

namespace g2l2 {

Var ExecContext::param(const std::string& name) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    if (!params) throw Error("ExecContext: no parameter store bound (param '" + name + "')");
    Var v = tape.leaf(params->data(name), /*trainable=*/true);
    cache_[name] = v;
    leafNames_[v.id] = name;
    return v;
}

Var ExecContext::constant(const std::string& key, const std::vector<double>& vals) {
    auto it = constCache_.find(key);
    if (it != constCache_.end()) return it->second;
    Var v = tape.leaf(vals);
    constCache_[key] = v;
    return v;
}

int Domain::addOp(OpInfo info) {
    ops_.push_back(std::move(info));
    return static_cast<int>(ops_.size()) - 1;
}

int Domain::addConcept(ConceptInfo info) {
    concepts_.push_back(std::move(info));
    return static_cast<int>(concepts_.size()) - 1;
}

int Domain::opId(const std::string& name) const {
    for (size_t i = 0; i < ops_.size(); ++i) {
        if (ops_[i].name == name) return static_cast<int>(i);
    }
    throw Error("unknown op: " + name + " (domain " + name_ + ")");
}

int Domain::conceptId(const std::string& name) const {
    for (size_t i = 0; i < concepts_.size(); ++i) {
        if (concepts_[i].name == name) return static_cast<int>(i);
    }
    throw Error("unknown concept: " + name + " (domain " + name_ + ")");
}

}  // namespace g2l2
