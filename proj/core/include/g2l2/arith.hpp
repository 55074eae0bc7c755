#pragma once

// Arithmetic micro-domain: integer constants, + and x over expected reals.
// Used as the canonical oracle for CKY-E2 and the training plumbing.

#include "g2l2/domain.hpp"

namespace g2l2 {

class ArithDomain : public Domain {
public:
    ArithDomain();

    int opNum() const { return opNum_; }
    int opAdd() const { return opAdd_; }
    int opMul() const { return opMul_; }
    int synN() const { return synN_; }

    ValuePtr evalOp(const Term& t, const std::vector<ValuePtr>& argVals,
                    ExecContext& ctx) const override;
    bool mergeableKind(SemPrim k) const override { return k == SemPrim::Num; }

private:
    int opNum_, opAdd_, opMul_;
    int synN_;
};

}  // namespace g2l2
