#pragma once

// SCAN string-editing DSL: deterministic/probabilistic action strings,
// concat/repeat recurrences, NLL loss and argmax decoding.

#include "g2l2/domain.hpp"

namespace g2l2 {

class ScanDomain : public Domain {
public:
    static constexpr int kVocab = 6;
    enum Prim { JUMP = 0, LOOK, WALK, RUN, LTURN, RTURN };
    static const char* primName(int p);
    // Dataset action token (I_JUMP, I_TURN_LEFT, ...) -> primitive index.
    static int primFromDataset(const std::string& tok);
    static std::string primToDataset(int p);

    explicit ScanDomain(int lmaxCap = 64);

    int synV() const { return synV_; }
    int synS() const { return synS_; }
    int opPrim(int p) const { return opPrim_[p]; }
    int opEmpty() const { return opEmpty_; }
    int opConcat() const { return opConcat_; }
    int opRepeat() const { return opRepeat_; }
    int lmaxCap() const { return lmaxCap_; }

    ValuePtr evalOp(const Term& t, const std::vector<ValuePtr>& argVals,
                    ExecContext& ctx) const override;
    bool mergeableKind(SemPrim k) const override { return k == SemPrim::Str; }

    ValuePtr concatVals(const ValuePtr& x, const ValuePtr& y, Tape& tape) const;
    ValuePtr repeatVal(const ValuePtr& x, int m, Tape& tape) const;

    // Token-factored NLL with probability floor 1e-12.
    Var lossString(const Value& s, const std::vector<int>& y, Tape& tape) const;
    static std::vector<int> decode(const Value& s, const Tape& tape);

    // Normalization invariants of a ProbString, within tol.
    static bool checkInvariants(const Value& s, const Tape& tape, double tol = 1e-9);

private:
    int synV_, synS_;
    int opPrim_[kVocab];
    int opEmpty_, opConcat_, opRepeat_;
    int lmaxCap_;
};

}  // namespace g2l2
