#pragma once

// Minimal reverse-mode autodiff over dense double arrays.
//
// A Tape is a define-by-run graph: every op appends a node holding its kind,
// input node ids and the cached forward value.  backward() walks the nodes in
// reverse topological (= id) order.  All values are 1-D double arrays; the
// ProbString conditional tables C[l,k,c] are stored flattened with their
// dimensions carried in the node's integer aux data.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "g2l2/errors.hpp"

namespace g2l2 {

struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

enum class OpKind : uint8_t {
    Leaf,
    Add,
    Sub,
    Mul,
    Div,
    Scale,      // daux = {a, b}: a*x + b elementwise
    Exp,
    Log,
    Sigmoid,
    Sum,
    Dot,
    Softmax,
    LogSumExp,
    Concat,
    IndexSelect,  // iaux = indices
    MatVec,       // iaux = {rows, cols}; inputs = {M (rows*cols), x (cols)}
    Prod,
    PsConvolve,  // iaux = {outLen}; inputs = {Lx, Ly}; Lz[l] = sum_i Lx[i]*Ly[l-i]
    PsConcatC,   // iaux = {lmx, lmy, lmz, V}; inputs = {Lx, Cx, Ly, Cy, Lz}
    PsRepeatL,   // iaux = {m, lmx, lmz}; inputs = {Lx}
    PsRepeatC,   // iaux = {m, lmx, lmz, V}; inputs = {Cx}
    PsMixL,      // iaux = {K, lmz, len_1..len_K}; inputs = {p, L_1..L_K}
    PsMixC,      // iaux = {K, lmz, V, len_1..len_K}; inputs = {p, Lmix, L_1.., C_1..}
};

struct TapeNode {
    OpKind op;
    std::vector<int> in;
    std::vector<double> val;
    std::vector<int> iaux;
    std::vector<double> daux;
    bool trainable = false;
};

// Index into a flattened C table with max length lm: l in [0,lm], k in [0,lm).
inline size_t cIdx(int l, int k, int c, int lm, int V) {
    return (static_cast<size_t>(l) * lm + k) * V + c;
}
inline size_t cSize(int lm, int V) {
    return static_cast<size_t>(lm + 1) * lm * V;
}

class Tape {
public:
    Var leaf(std::vector<double> v, bool trainable = false);
    Var scalar(double v) { return leaf({v}); }

    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var div(Var a, Var b);
    Var scale(Var x, double a, double b = 0.0);
    Var neg(Var x) { return scale(x, -1.0); }
    Var exp(Var x);
    Var log(Var x);         // requires strictly positive input
    Var logShift(Var x, double eps);  // log(x + eps), for probability floors
    Var sigmoid(Var x);
    Var sum(Var x);
    Var dot(Var a, Var b);
    Var softmax(Var x);
    Var logsumexp(Var x);
    Var concat(const std::vector<Var>& xs);
    Var indexSelect(Var x, const std::vector<int>& idx);
    Var matvec(Var m, Var x, int rows, int cols);
    Var prod(Var x);

    Var psConvolve(Var lx, Var ly, int outLen);
    Var psConcatC(Var lx, Var cx, Var ly, Var cy, Var lz, int lmx, int lmy, int lmz, int V);
    Var psRepeatL(Var lx, int m, int lmx, int lmz);
    Var psRepeatC(Var cx, int m, int lmx, int lmz, int V);
    Var psMixL(Var p, const std::vector<Var>& ls, const std::vector<int>& lens, int lmz);
    Var psMixC(Var p, Var lmix, const std::vector<Var>& ls, const std::vector<Var>& cs,
               const std::vector<int>& lens, int lmz, int V);

    const std::vector<double>& value(Var v) const { return nodes_[v.id].val; }
    double scalarValue(Var v) const;
    size_t size() const { return nodes_.size(); }

    // Gradients of a scalar loss w.r.t. every trainable leaf (by node id).
    // Unreachable trainable leaves get zero-filled gradients.
    std::unordered_map<int, std::vector<double>> backward(Var loss) const;

private:
    Var push(TapeNode n);
    const TapeNode& node(Var v) const;
    // Resolves elementwise broadcasting: either equal sizes, or one operand
    // is a scalar. Returns output size.
    size_t ewSize(const char* op, Var a, Var b) const;

    std::vector<TapeNode> nodes_;
};

}  // namespace g2l2
