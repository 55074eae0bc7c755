#include "doctest.h"

#include <random>

#include "g2l2/autodiff.hpp"
#include "g2l2/scan.hpp"
#include "helpers.hpp"

using namespace g2l2;
using namespace g2l2::testutil;

TEST_CASE("forward values of elementwise ops") {
    Tape t;
    Var a = t.leaf({1.0, 2.0, 3.0});
    Var b = t.leaf({4.0, 5.0, 6.0});
    CHECK(t.value(t.add(a, b)) == std::vector<double>{5.0, 7.0, 9.0});
    CHECK(t.value(t.sub(a, b)) == std::vector<double>{-3.0, -3.0, -3.0});
    CHECK(t.value(t.mul(a, b)) == std::vector<double>{4.0, 10.0, 18.0});
    CHECK(t.scalarValue(t.sum(a)) == doctest::Approx(6.0));
    CHECK(t.scalarValue(t.dot(a, b)) == doctest::Approx(32.0));
    CHECK(t.scalarValue(t.prod(a)) == doctest::Approx(6.0));
    CHECK(t.value(t.scale(a, 2.0, 1.0)) == std::vector<double>{3.0, 5.0, 7.0});
}

TEST_CASE("scalar broadcasting") {
    Tape t;
    Var a = t.leaf({1.0, 2.0, 3.0});
    Var s = t.scalar(10.0);
    CHECK(t.value(t.mul(a, s)) == std::vector<double>{10.0, 20.0, 30.0});
    CHECK(t.value(t.add(s, a)) == std::vector<double>{11.0, 12.0, 13.0});
    Var b = t.leaf({1.0, 2.0});
    CHECK_THROWS_AS(t.add(a, b), ShapeError);
}

TEST_CASE("softmax and logsumexp are shift invariant") {
    Tape t;
    Var x = t.leaf({1.0, 2.0, 3.0});
    Var y = t.leaf({101.0, 102.0, 103.0});
    auto sx = t.value(t.softmax(x));
    auto sy = t.value(t.softmax(y));
    for (int i = 0; i < 3; ++i) CHECK(sx[i] == doctest::Approx(sy[i]));
    CHECK(t.scalarValue(t.logsumexp(y)) - t.scalarValue(t.logsumexp(x)) ==
          doctest::Approx(100.0));
}

TEST_CASE("gradients of every scalar op match finite differences") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a = randomVec(rng, 4), b = randomVec(rng, 4);
        std::vector<double> pos = randomVec(rng, 4, 0.2, 2.0);

        CHECK(gradCheck({a, b}, [](Tape& t, const std::vector<Var>& v) {
                  return t.sum(t.mul(t.add(v[0], v[1]), t.sub(v[0], v[1])));
              }) < 1e-5);
        CHECK(gradCheck({a, pos}, [](Tape& t, const std::vector<Var>& v) {
                  return t.sum(t.div(v[0], v[1]));
              }) < 1e-5);
        CHECK(gradCheck({a}, [](Tape& t, const std::vector<Var>& v) {
                  return t.sum(t.sigmoid(t.exp(t.scale(v[0], 0.7, 0.1))));
              }) < 1e-5);
        CHECK(gradCheck({pos}, [](Tape& t, const std::vector<Var>& v) {
                  return t.sum(t.log(v[0]));
              }) < 1e-5);
        CHECK(gradCheck({pos}, [](Tape& t, const std::vector<Var>& v) {
                  return t.sum(t.logShift(v[0], 1e-3));
              }) < 1e-5);
        CHECK(gradCheck({a, b}, [](Tape& t, const std::vector<Var>& v) {
                  return t.dot(t.softmax(v[0]), v[1]);
              }) < 1e-5);
        CHECK(gradCheck({a}, [](Tape& t, const std::vector<Var>& v) {
                  return t.logsumexp(v[0]);
              }) < 1e-5);
        CHECK(gradCheck({a, b}, [](Tape& t, const std::vector<Var>& v) {
                  return t.sum(t.indexSelect(t.concat({v[0], v[1]}), {0, 3, 5, 5}));
              }) < 1e-5);
        CHECK(gradCheck({pos}, [](Tape& t, const std::vector<Var>& v) {
                  return t.prod(v[0]);
              }) < 1e-5);
        std::vector<double> m = randomVec(rng, 12);
        CHECK(gradCheck({m, a}, [](Tape& t, const std::vector<Var>& v) {
                  return t.sum(t.matvec(v[0], v[1], 3, 4));
              }) < 1e-5);
    }
}

TEST_CASE("gradients flow through the ProbString kernel ops") {
    // Mixing deterministic strings exercises psMixL/psMixC; concat and repeat
    // exercise psConvolve/psConcatC/psRepeatL/psRepeatC.
    ScanDomain dom;
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> logits = randomVec(rng, 3);
        std::vector<int> target = {0, 1, 0, 1, 2};
        auto fn = [&](Tape& t, const std::vector<Var>& v) {
            Var p = t.softmax(v[0]);
            std::vector<ValuePtr> vs = {makeDetString({0, 1}), makeDetString({2}),
                                        makeDetString({})};
            ValuePtr mixed = expectedValue(vs, p, t, ScanDomain::kVocab);
            ValuePtr cat = dom.concatVals(mixed, makeDetString({1}), t);
            ValuePtr rep = dom.repeatVal(cat, 2, t);
            return dom.lossString(*rep, target, t);
        };
        CHECK(gradCheck({logits}, fn) < 1e-4);
    }
}

TEST_CASE("backward reaches unreferenced trainable leaves with zeros") {
    Tape t;
    Var used = t.leaf({2.0}, true);
    Var unused = t.leaf({3.0, 4.0}, true);
    auto grads = t.backward(t.mul(used, used));
    CHECK(grads.at(used.id)[0] == doctest::Approx(4.0));
    CHECK(grads.at(unused.id) == std::vector<double>{0.0, 0.0});
}
