#include "g2l2/scan.hpp"

#include <cmath>

namespace g2l2 {

namespace {
const char* kPrimNames[ScanDomain::kVocab] = {"jump", "look", "walk", "run", "lturn", "rturn"};
const char* kDatasetNames[ScanDomain::kVocab] = {"I_JUMP",      "I_LOOK",     "I_WALK",
                                                 "I_RUN",       "I_TURN_LEFT", "I_TURN_RIGHT"};
}  // namespace

const char* ScanDomain::primName(int p) { return kPrimNames[p]; }

int ScanDomain::primFromDataset(const std::string& tok) {
    for (int p = 0; p < kVocab; ++p) {
        if (tok == kDatasetNames[p]) return p;
    }
    throw DataError("unknown SCAN action token: " + tok);
}

std::string ScanDomain::primToDataset(int p) { return kDatasetNames[p]; }

ScanDomain::ScanDomain(int lmaxCap) : lmaxCap_(lmaxCap) {
    name_ = "scan";
    synV_ = syn_.primitive("V", SemPrim::Str);
    synS_ = syn_.primitive("S", SemPrim::Str);
    roots_ = {synS_, synV_};
    vocab_ = kVocab;
    for (int p = 0; p < kVocab; ++p) {
        opPrim_[p] = addOp({kPrimNames[p], SemPrim::Str, {}});
    }
    opEmpty_ = addOp({"empty", SemPrim::Str, {}});
    opConcat_ = addOp(
        {"concat", SemPrim::Str, {{ArgKind::Value, SemPrim::Str}, {ArgKind::Value, SemPrim::Str}}});
    opRepeat_ = addOp({"repeat", SemPrim::Str, {{ArgKind::Value, SemPrim::Str}, {ArgKind::Int}}});
}

ValuePtr ScanDomain::evalOp(const Term& t, const std::vector<ValuePtr>& argVals,
                            ExecContext& ctx) const {
    for (int p = 0; p < kVocab; ++p) {
        if (t.op == opPrim_[p]) return makeDetString({p});
    }
    if (t.op == opEmpty_) return makeDetString({});
    if (t.op == opConcat_) return concatVals(argVals[0], argVals[1], ctx.tape);
    if (t.op == opRepeat_) {
        int m = t.kids[1]->intVal;
        if (m < 2 || m > 4) throw DomainError("repeat: integer out of {2,3,4}");
        return repeatVal(argVals[0], m, ctx.tape);
    }
    throw Error("scan: unknown op id " + std::to_string(t.op));
}

ValuePtr ScanDomain::concatVals(const ValuePtr& x, const ValuePtr& y, Tape& tape) const {
    int support = strMaxSupport(*x) + strMaxSupport(*y);
    if (support > lmaxCap_) {
        throw OverflowError("concat: combined support " + std::to_string(support) + " > Lmax " +
                            std::to_string(lmaxCap_));
    }
    if (x->det && y->det) {
        std::vector<int> toks = x->toks;
        toks.insert(toks.end(), y->toks.begin(), y->toks.end());
        return makeDetString(std::move(toks));
    }
    int lmx, lmy;
    Var Lx, Cx, Ly, Cy;
    liftString(*x, tape, kVocab, lmx, Lx, Cx);
    liftString(*y, tape, kVocab, lmy, Ly, Cy);
    int lmz = lmx + lmy;
    Var Lz = tape.psConvolve(Lx, Ly, lmz);
    Var Cz = tape.psConcatC(Lx, Cx, Ly, Cy, Lz, lmx, lmy, lmz, kVocab);
    return makeDistString(lmz, Lz, Cz, tape);
}

ValuePtr ScanDomain::repeatVal(const ValuePtr& x, int m, Tape& tape) const {
    int support = strMaxSupport(*x) * m;
    if (support > lmaxCap_) {
        throw OverflowError("repeat: support " + std::to_string(support) + " > Lmax " +
                            std::to_string(lmaxCap_));
    }
    if (x->det) {
        std::vector<int> toks;
        toks.reserve(x->toks.size() * m);
        for (int i = 0; i < m; ++i) toks.insert(toks.end(), x->toks.begin(), x->toks.end());
        return makeDetString(std::move(toks));
    }
    int lmz = x->lmax * m;
    Var Lz = tape.psRepeatL(x->L, m, x->lmax, lmz);
    Var Cz = tape.psRepeatC(x->C, m, x->lmax, lmz, kVocab);
    return makeDistString(lmz, Lz, Cz, tape);
}

Var ScanDomain::lossString(const Value& s, const std::vector<int>& y, Tape& tape) const {
    constexpr double kEps = 1e-12;
    int ell = static_cast<int>(y.size());
    if (s.det) {
        // No learnable content inside a deterministic string; the loss is a
        // constant (gradient still flows through the derivation probability).
        double loss = 0.0;
        if (static_cast<int>(s.toks.size()) != ell) {
            loss = -std::log(kEps);
        } else {
            for (int k = 0; k < ell; ++k) {
                if (s.toks[k] != y[k]) loss += -std::log(kEps);
            }
        }
        return tape.scalar(loss);
    }
    if (ell > s.lmax) {
        return tape.scalar(-(ell + 1) * std::log(kEps));
    }
    Var lenP = tape.indexSelect(s.L, {ell});
    Var loss = tape.neg(tape.logShift(lenP, kEps));
    if (ell > 0) {
        std::vector<int> idx(ell);
        for (int k = 0; k < ell; ++k) {
            idx[k] = static_cast<int>(cIdx(ell, k, y[k], s.lmax, kVocab));
        }
        Var tok = tape.indexSelect(s.C, idx);
        loss = tape.sub(loss, tape.sum(tape.logShift(tok, kEps)));
    }
    return loss;
}

std::vector<int> ScanDomain::decode(const Value& s, const Tape& tape) {
    if (s.det) return s.toks;
    const auto& L = tape.value(s.L);
    int best = 0;
    for (int l = 1; l <= s.lmax; ++l) {
        if (L[l] > L[best]) best = l;
    }
    const auto& C = tape.value(s.C);
    std::vector<int> out(best);
    for (int k = 0; k < best; ++k) {
        int bc = 0;
        for (int c = 1; c < kVocab; ++c) {
            if (C[cIdx(best, k, c, s.lmax, kVocab)] > C[cIdx(best, k, bc, s.lmax, kVocab)]) bc = c;
        }
        out[k] = bc;
    }
    return out;
}

bool ScanDomain::checkInvariants(const Value& s, const Tape& tape, double tol) {
    if (s.det) return true;
    const auto& L = tape.value(s.L);
    double sumL = 0.0;
    for (double x : L) sumL += x;
    if (std::abs(sumL - 1.0) > tol) return false;
    const auto& C = tape.value(s.C);
    for (int l = 0; l <= s.lmax; ++l) {
        for (int k = 0; k < s.lmax; ++k) {
            double row = 0.0;
            for (int c = 0; c < kVocab; ++c) row += C[cIdx(l, k, c, s.lmax, kVocab)];
            if (k >= l) {
                if (row != 0.0) return false;
            } else if (L[l] > tol) {
                if (std::abs(row - 1.0) > tol) return false;
            }
        }
    }
    return true;
}

}  // namespace g2l2
