#pragma once

#include <map>
#include <string>
#include <vector>

#include "g2l2/errors.hpp"

namespace g2l2 {

// Flat registry of named trainable parameter arrays (lexicon weights and
// concept embeddings). Iteration order is insertion order (deterministic).
class ParamStore {
public:
    struct Param {
        std::string name;
        std::vector<double> data;
        double lrScale = 1.0;
    };

    int add(const std::string& name, std::vector<double> init, double lrScale = 1.0) {
        if (index_.count(name)) throw Error("duplicate parameter: " + name);
        index_[name] = static_cast<int>(params_.size());
        params_.push_back({name, std::move(init), lrScale});
        return static_cast<int>(params_.size()) - 1;
    }

    bool has(const std::string& name) const { return index_.count(name) > 0; }

    Param& at(const std::string& name) {
        auto it = index_.find(name);
        if (it == index_.end()) throw Error("unknown parameter: " + name);
        return params_[it->second];
    }
    const Param& at(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw Error("unknown parameter: " + name);
        return params_[it->second];
    }

    std::vector<double>& data(const std::string& name) { return at(name).data; }
    const std::vector<double>& data(const std::string& name) const { return at(name).data; }

    std::vector<Param>& all() { return params_; }
    const std::vector<Param>& all() const { return params_; }
    size_t size() const { return params_.size(); }

private:
    std::vector<Param> params_;
    std::map<std::string, int> index_;
};

}  // namespace g2l2
