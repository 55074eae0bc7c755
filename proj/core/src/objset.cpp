#include "g2l2/objset.hpp"

#include <algorithm>
#include <cmath>

namespace g2l2 {

namespace {

constexpr double kFeatScale = 4.0;
// Feature slots (within D >= 18).
constexpr int kColorOff = 0;
constexpr int kShapeOff = 8;
constexpr int kMatOff = 11;
constexpr int kSizeOff = 13;
constexpr int kXOff = 15;
constexpr int kYOff = 16;
constexpr int kBiasOff = 17;

int indexOf(const std::vector<std::string>& xs, const std::string& x) {
    auto it = std::find(xs.begin(), xs.end(), x);
    return it == xs.end() ? -1 : static_cast<int>(it - xs.begin());
}

// Attribute lookup that also accepts plural nouns ("cubes" -> "cube").
int attrIndex(const std::vector<std::string>& xs, const std::string& w) {
    int i = indexOf(xs, w);
    if (i >= 0) return i;
    if (!w.empty() && w.back() == 's') return indexOf(xs, w.substr(0, w.size() - 1));
    return -1;
}

}  // namespace

Scene makeScene(std::vector<SceneObject> objs, double noiseSigma, std::mt19937_64& rng, int D,
                int PD) {
    if (D < 18 || PD < 5) throw Error("makeScene: feature dims too small");
    Scene s;
    s.D = D;
    s.PD = PD;
    s.objs = std::move(objs);
    int N = s.size();
    std::normal_distribution<double> noise(0.0, noiseSigma);
    s.feat.assign(static_cast<size_t>(N) * D, 0.0);
    for (int i = 0; i < N; ++i) {
        const SceneObject& o = s.objs[i];
        double* f = &s.feat[static_cast<size_t>(i) * D];
        f[kColorOff + o.color] = kFeatScale;
        f[kShapeOff + o.shape] = kFeatScale;
        f[kMatOff + o.material] = kFeatScale;
        f[kSizeOff + o.size] = kFeatScale;
        f[kXOff] = o.x;
        f[kYOff] = o.y;
        f[kBiasOff] = kFeatScale;
        if (noiseSigma > 0.0) {
            for (int d = 0; d < D; ++d) f[d] += noise(rng);
        }
    }
    s.pairFeat.assign(static_cast<size_t>(N) * N * PD, 0.0);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            double* f = &s.pairFeat[(static_cast<size_t>(i) * N + j) * PD];
            double dx = s.objs[i].x - s.objs[j].x;
            double dy = s.objs[i].y - s.objs[j].y;
            f[0] = kFeatScale * dx;
            f[1] = kFeatScale * dy;
            f[2] = kFeatScale * std::abs(dx);
            f[3] = kFeatScale * std::abs(dy);
            f[4] = kFeatScale;
            if (noiseSigma > 0.0) {
                for (int d = 0; d < PD; ++d) f[d] += noise(rng);
            }
        }
    }
    return s;
}

bool objHasConcept(const SceneObject& o, const std::string& conceptName) {
    using namespace visattr;
    int i;
    if ((i = attrIndex(kColors, conceptName)) >= 0) return o.color == i;
    if ((i = attrIndex(kShapes, conceptName)) >= 0) return o.shape == i;
    if ((i = attrIndex(kMaterials, conceptName)) >= 0) return o.material == i;
    if ((i = attrIndex(kSizes, conceptName)) >= 0) return o.size == i;
    if (conceptName == "thing" || conceptName == "things") return true;
    return false;
}

bool pairHasRelation(const SceneObject& a, const SceneObject& b, const std::string& rel) {
    if (rel == "left") return a.x < b.x;
    if (rel == "right") return a.x > b.x;
    if (rel == "front") return a.y < b.y;
    if (rel == "behind") return a.y > b.y;
    throw Error("unknown relation: " + rel);
}

ObjsetDomain::ObjsetDomain(std::vector<std::string> conceptWords, int D, int PD)
    : words_(std::move(conceptWords)), D_(D), PD_(PD) {
    name_ = "visual";
    synObjset_ = syn_.primitive("objset", SemPrim::ObjSet);
    synBool_ = syn_.primitive("bool", SemPrim::BoolP);
    synInt_ = syn_.primitive("int", SemPrim::Count);
    synWord_ = syn_.primitive("word", SemPrim::WordDist);
    roots_ = {synBool_, synInt_, synWord_};

    opScene_ = addOp({"scene", SemPrim::ObjSet, {}});
    opFilter_ = addOp({"filter", SemPrim::ObjSet, {{ArgKind::Value, SemPrim::ObjSet}, {ArgKind::Concept}}});
    opRelate_ = addOp({"relate",
                       SemPrim::ObjSet,
                       {{ArgKind::Value, SemPrim::ObjSet}, {ArgKind::Value, SemPrim::ObjSet}, {ArgKind::Concept}}});
    opIntersect_ = addOp({"intersect",
                          SemPrim::ObjSet,
                          {{ArgKind::Value, SemPrim::ObjSet}, {ArgKind::Value, SemPrim::ObjSet}}});
    opUnion_ = addOp({"union",
                      SemPrim::ObjSet,
                      {{ArgKind::Value, SemPrim::ObjSet}, {ArgKind::Value, SemPrim::ObjSet}}});
    opExist_ = addOp({"exist", SemPrim::BoolP, {{ArgKind::Value, SemPrim::ObjSet}}});
    opCount_ = addOp({"count", SemPrim::Count, {{ArgKind::Value, SemPrim::ObjSet}}});
    opQuery_ = addOp({"query", SemPrim::WordDist, {{ArgKind::Value, SemPrim::ObjSet}, {ArgKind::Concept}}});

    for (const auto& w : words_) {
        objConceptIds_.push_back(addConcept({w + ":obj", "emb/" + w + "/obj"}));
        addConcept({w + ":rel", "emb/" + w + "/rel"});
        addConcept({w + ":attr", "emb/" + w + "/attr"});
    }
}

int ObjsetDomain::objConceptId(const std::string& word) const { return conceptId(word + ":obj"); }
int ObjsetDomain::relConceptId(const std::string& word) const { return conceptId(word + ":rel"); }
int ObjsetDomain::attrConceptId(const std::string& word) const { return conceptId(word + ":attr"); }

void ObjsetDomain::initParams(ParamStore& store, uint64_t seed, double sigma) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    auto draw = [&](int n) {
        std::vector<double> v(n);
        for (auto& x : v) x = dist(rng);
        return v;
    };
    int K = static_cast<int>(words_.size());
    for (const auto& w : words_) {
        store.add("emb/" + w + "/obj", draw(D_));
        store.add("emb/" + w + "/rel", draw(PD_));
        store.add("emb/" + w + "/attr", draw(K));
    }
}

void ObjsetDomain::setOracleParams(ParamStore& store) const {
    using namespace visattr;
    auto put = [&](const std::string& name, std::vector<double> v) {
        if (store.has(name)) {
            store.data(name) = std::move(v);
        } else {
            store.add(name, std::move(v));
        }
    };
    int K = static_cast<int>(words_.size());
    for (const auto& w : words_) {
        std::vector<double> obj(D_, 0.0), rel(PD_, 0.0), attr(K, 0.0);
        int i;
        if ((i = attrIndex(kColors, w)) >= 0) obj[kColorOff + i] = 2.0, obj[kBiasOff] = -1.0;
        else if ((i = attrIndex(kShapes, w)) >= 0) obj[kShapeOff + i] = 2.0, obj[kBiasOff] = -1.0;
        else if ((i = attrIndex(kMaterials, w)) >= 0) obj[kMatOff + i] = 2.0, obj[kBiasOff] = -1.0;
        else if ((i = attrIndex(kSizes, w)) >= 0) obj[kSizeOff + i] = 2.0, obj[kBiasOff] = -1.0;
        else if (w == "thing" || w == "things") obj[kBiasOff] = 1.0;
        if (w == "left") rel[0] = -10.0;
        if (w == "right") rel[0] = 10.0;
        if (w == "front") rel[1] = -10.0;
        if (w == "behind") rel[1] = 10.0;
        auto markClass = [&](const std::vector<std::string>& cls) {
            for (int k = 0; k < K; ++k) {
                attr[k] = attrIndex(cls, words_[k]) >= 0 ? 5.0 : -5.0;
            }
        };
        if (w == "color") markClass(kColors);
        if (w == "shape") markClass(kShapes);
        if (w == "material") markClass(kMaterials);
        if (w == "size") markClass(kSizes);
        put("emb/" + w + "/obj", std::move(obj));
        put("emb/" + w + "/rel", std::move(rel));
        put("emb/" + w + "/attr", std::move(attr));
    }
}

Var ObjsetDomain::sceneFeatures(ExecContext& ctx) const {
    const Scene* s = static_cast<const Scene*>(ctx.scene);
    if (!s) throw Error("objset: no scene bound");
    return ctx.constant("scene/feat", s->feat);
}

Var ObjsetDomain::pairFeatures(ExecContext& ctx) const {
    const Scene* s = static_cast<const Scene*>(ctx.scene);
    if (!s) throw Error("objset: no scene bound");
    return ctx.constant("scene/pairfeat", s->pairFeat);
}

ValuePtr ObjsetDomain::evalOp(const Term& t, const std::vector<ValuePtr>& argVals,
                              ExecContext& ctx) const {
    const Scene* sc = static_cast<const Scene*>(ctx.scene);
    if (!sc) throw Error("objset: no scene bound");
    int N = sc->size();
    Tape& tp = ctx.tape;

    if (t.op == opScene_) {
        return makeTapeValue(SemPrim::ObjSet,
                             ctx.constant("scene/ones", std::vector<double>(N, 1.0)), tp);
    }
    if (t.op == opFilter_) {
        Var e = ctx.param(concepts_.at(t.kids[1]->conceptId).paramName);
        Var scores = tp.sigmoid(tp.matvec(sceneFeatures(ctx), e, N, D_));
        return makeTapeValue(SemPrim::ObjSet, tp.mul(argVals[0]->v, scores), tp);
    }
    if (t.op == opRelate_) {
        Var e = ctx.param(concepts_.at(t.kids[2]->conceptId).paramName);
        Var b = argVals[1]->v;
        Var denom = tp.scale(tp.sum(b), 1.0, 1e-30);
        Var w = tp.div(b, denom);
        Var s = tp.sigmoid(tp.matvec(pairFeatures(ctx), e, N * N, PD_));
        Var target = tp.matvec(s, w, N, N);
        return makeTapeValue(SemPrim::ObjSet, tp.mul(argVals[0]->v, target), tp);
    }
    if (t.op == opIntersect_) {
        return makeTapeValue(SemPrim::ObjSet, tp.mul(argVals[0]->v, argVals[1]->v), tp);
    }
    if (t.op == opUnion_) {
        Var na = tp.scale(argVals[0]->v, -1.0, 1.0);
        Var nb = tp.scale(argVals[1]->v, -1.0, 1.0);
        return makeTapeValue(SemPrim::ObjSet, tp.scale(tp.mul(na, nb), -1.0, 1.0), tp);
    }
    if (t.op == opExist_) {
        Var none = tp.prod(tp.scale(argVals[0]->v, -1.0, 1.0));
        return makeTapeValue(SemPrim::BoolP, tp.scale(none, -1.0, 1.0), tp);
    }
    if (t.op == opCount_) {
        return makeTapeValue(SemPrim::Count, tp.sum(argVals[0]->v), tp);
    }
    if (t.op == opQuery_) {
        Var attr = ctx.param(concepts_.at(t.kids[1]->conceptId).paramName);
        Var a = argVals[0]->v;
        Var ahat = tp.div(a, tp.scale(tp.sum(a), 1.0, 1e-30));
        Var F = sceneFeatures(ctx);
        std::vector<Var> scores;
        scores.reserve(objConceptIds_.size());
        for (int cid : objConceptIds_) {
            Var e = ctx.param(concepts_.at(cid).paramName);
            scores.push_back(tp.dot(ahat, tp.sigmoid(tp.matvec(F, e, N, D_))));
        }
        Var logits = tp.add(attr, tp.concat(scores));
        return makeTapeValue(SemPrim::WordDist, tp.softmax(logits), tp);
    }
    throw Error("objset: unknown op id " + std::to_string(t.op));
}

Var ObjsetDomain::lossAnswer(const Value& v, const VisualAnswer& a, Tape& tape) const {
    constexpr double kEps = 1e-12;
    switch (a.kind) {
        case VisualAnswer::Kind::Bool: {
            if (v.kind != SemPrim::BoolP) throw Error("loss: answer kind mismatch (bool)");
            Var p = a.b ? v.v : tape.scale(v.v, -1.0, 1.0);
            return tape.neg(tape.logShift(p, kEps));
        }
        case VisualAnswer::Kind::Count: {
            if (v.kind != SemPrim::Count) throw Error("loss: answer kind mismatch (count)");
            Var d = tape.scale(v.v, 1.0, -static_cast<double>(a.n));
            return tape.mul(d, d);
        }
        case VisualAnswer::Kind::Word: {
            if (v.kind != SemPrim::WordDist) throw Error("loss: answer kind mismatch (word)");
            int idx = indexOf(words_, a.w);
            if (idx < 0) throw Error("loss: unknown answer word " + a.w);
            return tape.neg(tape.logShift(tape.indexSelect(v.v, {idx}), kEps));
        }
    }
    throw Error("loss: bad answer kind");
}

bool ObjsetDomain::decodeMatch(const Value& v, const VisualAnswer& a, const Tape& tape) const {
    switch (a.kind) {
        case VisualAnswer::Kind::Bool:
            return v.kind == SemPrim::BoolP && (tape.value(v.v)[0] > 0.5) == a.b;
        case VisualAnswer::Kind::Count:
            return v.kind == SemPrim::Count &&
                   std::llround(tape.value(v.v)[0]) == static_cast<long long>(a.n);
        case VisualAnswer::Kind::Word: {
            if (v.kind != SemPrim::WordDist) return false;
            const auto& d = tape.value(v.v);
            int best = 0;
            for (size_t i = 1; i < d.size(); ++i) {
                if (d[i] > d[best]) best = static_cast<int>(i);
            }
            return words_[best] == a.w;
        }
    }
    return false;
}

}  // namespace g2l2
