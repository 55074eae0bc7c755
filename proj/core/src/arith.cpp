#include "g2l2/arith.hpp"

namespace g2l2 {

ArithDomain::ArithDomain() {
    name_ = "arith";
    synN_ = syn_.primitive("N", SemPrim::Num);
    roots_ = {synN_};
    opNum_ = addOp({"num", SemPrim::Num, {{ArgKind::Int}}});
    opAdd_ = addOp({"add", SemPrim::Num, {{ArgKind::Value, SemPrim::Num}, {ArgKind::Value, SemPrim::Num}}});
    opMul_ = addOp({"mul", SemPrim::Num, {{ArgKind::Value, SemPrim::Num}, {ArgKind::Value, SemPrim::Num}}});
}

ValuePtr ArithDomain::evalOp(const Term& t, const std::vector<ValuePtr>& argVals,
                             ExecContext& ctx) const {
    if (t.op == opNum_) {
        return makeTapeValue(SemPrim::Num, ctx.tape.scalar(t.kids[0]->intVal), ctx.tape);
    }
    if (t.op == opAdd_) {
        return makeTapeValue(SemPrim::Num, ctx.tape.add(argVals[0]->v, argVals[1]->v), ctx.tape);
    }
    if (t.op == opMul_) {
        return makeTapeValue(SemPrim::Num, ctx.tape.mul(argVals[0]->v, argVals[1]->v), ctx.tape);
    }
    throw Error("arith: unknown op id " + std::to_string(t.op));
}

}  // namespace g2l2
