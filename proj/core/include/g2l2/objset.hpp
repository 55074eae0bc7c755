#pragma once

// Visual-reasoning DSL over symbolic scenes: soft object masks, learnable
// concept embeddings (object / relational / attribute per word), product-logic
// set algebra, and the three answer losses.

#include <random>

#include "g2l2/domain.hpp"

namespace g2l2 {

// Ground-truth attribute inventories of the synthetic scenes.
namespace visattr {
inline const std::vector<std::string> kColors = {"gray", "red",    "blue", "green",
                                                 "brown", "purple", "cyan", "yellow"};
inline const std::vector<std::string> kShapes = {"cube", "sphere", "cylinder"};
inline const std::vector<std::string> kMaterials = {"shiny", "matte"};
inline const std::vector<std::string> kSizes = {"large", "small"};
inline const std::vector<std::string> kRelations = {"left", "right", "front", "behind"};
}  // namespace visattr

struct SceneObject {
    int color, shape, material, size;
    double x, y;  // unit square
};

struct Scene {
    std::vector<SceneObject> objs;
    std::vector<double> feat;      // N x D object features
    std::vector<double> pairFeat;  // (N*N) x PD ordered-pair features
    int D = 0, PD = 0;
    int size() const { return static_cast<int>(objs.size()); }
};

// Builds the feature arrays from ground-truth attributes (+ Gaussian noise).
Scene makeScene(std::vector<SceneObject> objs, double noiseSigma, std::mt19937_64& rng, int D = 64,
                int PD = 8);

// Discrete ground-truth predicates (for oracles and data generation).
bool objHasConcept(const SceneObject& o, const std::string& conceptName);
bool pairHasRelation(const SceneObject& a, const SceneObject& b, const std::string& rel);

struct VisualAnswer {
    enum class Kind : uint8_t { Bool, Count, Word };
    Kind kind;
    bool b = false;
    int n = 0;
    std::string w;
    bool operator==(const VisualAnswer&) const = default;
};

class ObjsetDomain : public Domain {
public:
    // `conceptWords` are the word types that carry concept representations;
    // each gets an ObjConcept (D), a RelConcept (PD) and an Attribute (K) slot.
    explicit ObjsetDomain(std::vector<std::string> conceptWords, int D = 64, int PD = 8);

    int synObjset() const { return synObjset_; }
    int synBool() const { return synBool_; }
    int synInt() const { return synInt_; }
    int synWord() const { return synWord_; }

    int opScene() const { return opScene_; }
    int opFilter() const { return opFilter_; }
    int opRelate() const { return opRelate_; }
    int opIntersect() const { return opIntersect_; }
    int opUnion() const { return opUnion_; }
    int opExist() const { return opExist_; }
    int opCount() const { return opCount_; }
    int opQuery() const { return opQuery_; }

    const std::vector<std::string>& conceptWords() const { return words_; }
    int objConceptId(const std::string& word) const;
    int relConceptId(const std::string& word) const;
    int attrConceptId(const std::string& word) const;
    int featureDim() const { return D_; }
    int pairFeatureDim() const { return PD_; }

    // Registers all embeddings in `store` (i.i.d. normal, sigma, seeded).
    void initParams(ParamStore& store, uint64_t seed, double sigma = 0.1) const;
    // Overwrites `store` with hand-built embeddings that realize the
    // ground-truth predicates (for oracle/golden tests).
    void setOracleParams(ParamStore& store) const;

    ValuePtr evalOp(const Term& t, const std::vector<ValuePtr>& argVals,
                    ExecContext& ctx) const override;
    bool mergeableKind(SemPrim k) const override { return k == SemPrim::ObjSet; }

    Var lossAnswer(const Value& v, const VisualAnswer& a, Tape& tape) const;
    bool decodeMatch(const Value& v, const VisualAnswer& a, const Tape& tape) const;

private:
    Var sceneFeatures(ExecContext& ctx) const;
    Var pairFeatures(ExecContext& ctx) const;

    std::vector<std::string> words_;
    int D_, PD_;
    int synObjset_, synBool_, synInt_, synWord_;
    int opScene_, opFilter_, opRelate_, opIntersect_, opUnion_, opExist_, opCount_, opQuery_;
    std::vector<int> objConceptIds_;  // per word, in word order (query axis)
};

}  // namespace g2l2
