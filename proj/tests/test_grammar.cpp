#include "doctest.h"

#include "g2l2/syntax.hpp"

using namespace g2l2;

namespace {

struct Fixture {
    SynTable tab;
    int v, o, fwd, bwd, vvv, conjAnd, conjOr, pendV, pendO;
    Fixture() {
        v = tab.primitive("V", SemPrim::Str);
        o = tab.primitive("objset", SemPrim::ObjSet);
        fwd = tab.functor(v, true, v);    // V/V
        bwd = tab.functor(v, false, v);   // V\V
        vvv = tab.functor(bwd, true, v);  // V\V/V
        conjAnd = tab.conj(ConjKind::And);
        conjOr = tab.conj(ConjKind::Or);
        pendV = tab.pending(ConjKind::And, v);
        pendO = tab.pending(ConjKind::Or, o);
    }
};

}  // namespace

TEST_CASE("interning is stable") {
    Fixture f;
    CHECK(f.tab.primitive("V", SemPrim::Str) == f.v);
    CHECK(f.tab.functor(f.v, true, f.v) == f.fwd);
    CHECK(f.tab.pending(ConjKind::And, f.v) == f.pendV);
    CHECK(f.fwd != f.bwd);
}

TEST_CASE("combination table over six type kinds") {
    Fixture f;
    auto& t = f.tab;
    // Rows: left type; columns: right type. -1 = no rule.
    struct Case {
        int l, r;
        std::optional<CombineRule> rule;
        int result;
    };
    std::vector<Case> table = {
        {f.v, f.v, std::nullopt, -1},
        {f.v, f.fwd, std::nullopt, -1},
        {f.v, f.bwd, CombineRule::BackwardApp, f.v},
        {f.v, f.vvv, std::nullopt, -1},
        {f.v, f.conjAnd, std::nullopt, -1},
        {f.v, f.pendV, CombineRule::CoordFinish, f.v},

        {f.fwd, f.v, CombineRule::ForwardApp, f.v},
        {f.fwd, f.fwd, std::nullopt, -1},
        {f.fwd, f.bwd, std::nullopt, -1},
        {f.fwd, f.vvv, std::nullopt, -1},
        {f.fwd, f.conjAnd, std::nullopt, -1},
        {f.fwd, f.pendV, std::nullopt, -1},

        {f.bwd, f.v, std::nullopt, -1},
        {f.bwd, f.fwd, std::nullopt, -1},
        {f.bwd, f.bwd, std::nullopt, -1},
        {f.bwd, f.vvv, std::nullopt, -1},
        {f.bwd, f.conjAnd, std::nullopt, -1},
        {f.bwd, f.pendV, std::nullopt, -1},

        {f.vvv, f.v, CombineRule::ForwardApp, f.bwd},
        {f.vvv, f.fwd, std::nullopt, -1},
        {f.vvv, f.bwd, std::nullopt, -1},
        {f.vvv, f.vvv, std::nullopt, -1},
        {f.vvv, f.conjAnd, std::nullopt, -1},
        {f.vvv, f.pendV, std::nullopt, -1},

        {f.conjAnd, f.v, CombineRule::CoordStart, f.pendV},
        {f.conjAnd, f.fwd, CombineRule::CoordStart, t.pending(ConjKind::And, f.fwd)},
        {f.conjAnd, f.bwd, CombineRule::CoordStart, t.pending(ConjKind::And, f.bwd)},
        {f.conjAnd, f.vvv, CombineRule::CoordStart, t.pending(ConjKind::And, f.vvv)},
        {f.conjAnd, f.conjAnd, std::nullopt, -1},
        {f.conjAnd, f.pendV, std::nullopt, -1},

        {f.pendV, f.v, std::nullopt, -1},
        {f.pendV, f.fwd, std::nullopt, -1},
        {f.pendV, f.bwd, std::nullopt, -1},
        {f.pendV, f.vvv, std::nullopt, -1},
        {f.pendV, f.conjAnd, std::nullopt, -1},
        {f.pendV, f.pendV, std::nullopt, -1},
    };
    for (const auto& c : table) {
        CAPTURE(t.print(c.l));
        CAPTURE(t.print(c.r));
        auto res = t.canCombine(c.l, c.r);
        if (!c.rule) {
            CHECK(!res.has_value());
        } else {
            REQUIRE(res.has_value());
            CHECK(res->rule == *c.rule);
            CHECK(res->result == c.result);
        }
    }
}

TEST_CASE("OR coordination is restricted to the objset primitive") {
    Fixture f;
    CHECK(!f.tab.canCombine(f.conjOr, f.v).has_value());
    CHECK(!f.tab.canCombine(f.conjOr, f.fwd).has_value());
    auto start = f.tab.canCombine(f.conjOr, f.o);
    REQUIRE(start.has_value());
    CHECK(start->rule == CombineRule::CoordStart);
    // objset + Pending(Or, objset) -> objset\objset
    auto fin = f.tab.canCombine(f.o, f.pendO);
    REQUIRE(fin.has_value());
    CHECK(fin->rule == CombineRule::CoordFinish);
    CHECK(fin->result == f.tab.functor(f.o, false, f.o));
    CHECK(!f.tab.canCombine(f.v, f.pendO).has_value());
}

TEST_CASE("print and parse round-trip") {
    Fixture f;
    for (int id : {f.v, f.o, f.fwd, f.bwd, f.vvv, f.conjAnd, f.conjOr}) {
        CHECK(f.tab.parse(f.tab.print(id)) == id);
    }
    int vvf = f.tab.functor(f.bwd, true, f.bwd);  // V\V/(V\V)
    CHECK(f.tab.print(vvf) == "V\\V/(V\\V)");
    CHECK(f.tab.parse("V\\V/(V\\V)") == vvf);
    CHECK_THROWS(f.tab.parse("Q/Q"));
}

TEST_CASE("semantic signatures list arguments innermost slash first") {
    Fixture f;
    SemTypeSig sig = f.tab.semSig(f.vvv);  // V\V/V: right arg first, then left
    CHECK(sig.ret == SemPrim::Str);
    REQUIRE(sig.args.size() == 2);
    CHECK(!sig.args[0].functor);
    CHECK(!sig.args[1].functor);

    int svv = f.tab.functor(f.tab.functor(f.tab.primitive("S", SemPrim::Str), false, f.v), true,
                            f.v);  // S\V/V
    CHECK(f.tab.arity(svv) == 2);

    int vvf = f.tab.functor(f.bwd, true, f.bwd);  // V\V/(V\V)
    SemTypeSig fsig = f.tab.semSig(vvf);
    REQUIRE(fsig.args.size() == 2);
    CHECK(fsig.args[0].functor);  // the (V\V) argument
    CHECK(!fsig.args[1].functor);
}
