#include "g2l2/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace g2l2 {

namespace {

void checkFinite(const char* op, const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw DomainError(std::string(op) + ": non-finite result");
        }
    }
}

}  // namespace

Var Tape::push(TapeNode n) {
    checkFinite("tape", n.val);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

const TapeNode& Tape::node(Var v) const {
    if (!v.valid() || v.id >= static_cast<int>(nodes_.size())) {
        throw Error("invalid Var handle");
    }
    return nodes_[v.id];
}

double Tape::scalarValue(Var v) const {
    const auto& n = node(v);
    if (n.val.size() != 1) throw ShapeError("scalarValue: size " + std::to_string(n.val.size()));
    return n.val[0];
}

size_t Tape::ewSize(const char* op, Var a, Var b) const {
    size_t na = node(a).val.size(), nb = node(b).val.size();
    if (na == nb) return na;
    if (na == 1) return nb;
    if (nb == 1) return na;
    throw ShapeError(std::string(op) + ": shapes [" + std::to_string(na) + "] vs [" +
                     std::to_string(nb) + "]");
}

Var Tape::leaf(std::vector<double> v, bool trainable) {
    TapeNode n;
    n.op = OpKind::Leaf;
    n.val = std::move(v);
    n.trainable = trainable;
    return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
    size_t sz = ewSize("add", a, b);
    const auto &va = node(a).val, &vb = node(b).val;
    TapeNode n{OpKind::Add, {a.id, b.id}, std::vector<double>(sz), {}, {}};
    for (size_t i = 0; i < sz; ++i) n.val[i] = va[va.size() == 1 ? 0 : i] + vb[vb.size() == 1 ? 0 : i];
    return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
    size_t sz = ewSize("sub", a, b);
    const auto &va = node(a).val, &vb = node(b).val;
    TapeNode n{OpKind::Sub, {a.id, b.id}, std::vector<double>(sz), {}, {}};
    for (size_t i = 0; i < sz; ++i) n.val[i] = va[va.size() == 1 ? 0 : i] - vb[vb.size() == 1 ? 0 : i];
    return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
    size_t sz = ewSize("mul", a, b);
    const auto &va = node(a).val, &vb = node(b).val;
    TapeNode n{OpKind::Mul, {a.id, b.id}, std::vector<double>(sz), {}, {}};
    for (size_t i = 0; i < sz; ++i) n.val[i] = va[va.size() == 1 ? 0 : i] * vb[vb.size() == 1 ? 0 : i];
    return push(std::move(n));
}

Var Tape::div(Var a, Var b) {
    size_t sz = ewSize("div", a, b);
    const auto &va = node(a).val, &vb = node(b).val;
    for (double x : vb) {
        if (x == 0.0) throw DomainError("div: zero denominator");
    }
    TapeNode n{OpKind::Div, {a.id, b.id}, std::vector<double>(sz), {}, {}};
    for (size_t i = 0; i < sz; ++i) n.val[i] = va[va.size() == 1 ? 0 : i] / vb[vb.size() == 1 ? 0 : i];
    return push(std::move(n));
}

Var Tape::scale(Var x, double a, double b) {
    const auto& vx = node(x).val;
    TapeNode n{OpKind::Scale, {x.id}, std::vector<double>(vx.size()), {}, {a, b}};
    for (size_t i = 0; i < vx.size(); ++i) n.val[i] = a * vx[i] + b;
    return push(std::move(n));
}

Var Tape::exp(Var x) {
    const auto& vx = node(x).val;
    TapeNode n{OpKind::Exp, {x.id}, std::vector<double>(vx.size()), {}, {}};
    for (size_t i = 0; i < vx.size(); ++i) n.val[i] = std::exp(vx[i]);
    return push(std::move(n));
}

Var Tape::log(Var x) {
    const auto& vx = node(x).val;
    for (double v : vx) {
        if (v <= 0.0) throw DomainError("log: non-positive input");
    }
    TapeNode n{OpKind::Log, {x.id}, std::vector<double>(vx.size()), {}, {0.0}};
    for (size_t i = 0; i < vx.size(); ++i) n.val[i] = std::log(vx[i]);
    return push(std::move(n));
}

Var Tape::logShift(Var x, double eps) {
    const auto& vx = node(x).val;
    for (double v : vx) {
        if (v + eps <= 0.0) throw DomainError("logShift: non-positive shifted input");
    }
    TapeNode n{OpKind::Log, {x.id}, std::vector<double>(vx.size()), {}, {eps}};
    for (size_t i = 0; i < vx.size(); ++i) n.val[i] = std::log(vx[i] + eps);
    return push(std::move(n));
}

Var Tape::sigmoid(Var x) {
    const auto& vx = node(x).val;
    TapeNode n{OpKind::Sigmoid, {x.id}, std::vector<double>(vx.size()), {}, {}};
    for (size_t i = 0; i < vx.size(); ++i) {
        n.val[i] = vx[i] >= 0 ? 1.0 / (1.0 + std::exp(-vx[i]))
                              : std::exp(vx[i]) / (1.0 + std::exp(vx[i]));
    }
    return push(std::move(n));
}

Var Tape::sum(Var x) {
    const auto& vx = node(x).val;
    double s = 0.0;
    for (double v : vx) s += v;
    return push(TapeNode{OpKind::Sum, {x.id}, {s}, {}, {}});
}

Var Tape::dot(Var a, Var b) {
    const auto &va = node(a).val, &vb = node(b).val;
    if (va.size() != vb.size()) {
        throw ShapeError("dot: shapes [" + std::to_string(va.size()) + "] vs [" +
                         std::to_string(vb.size()) + "]");
    }
    double s = 0.0;
    for (size_t i = 0; i < va.size(); ++i) s += va[i] * vb[i];
    return push(TapeNode{OpKind::Dot, {a.id, b.id}, {s}, {}, {}});
}

Var Tape::softmax(Var x) {
    const auto& vx = node(x).val;
    if (vx.empty()) throw ShapeError("softmax: empty input");
    double mx = *std::max_element(vx.begin(), vx.end());
    TapeNode n{OpKind::Softmax, {x.id}, std::vector<double>(vx.size()), {}, {}};
    double z = 0.0;
    for (size_t i = 0; i < vx.size(); ++i) {
        n.val[i] = std::exp(vx[i] - mx);
        z += n.val[i];
    }
    for (auto& v : n.val) v /= z;
    return push(std::move(n));
}

Var Tape::logsumexp(Var x) {
    const auto& vx = node(x).val;
    if (vx.empty()) throw ShapeError("logsumexp: empty input");
    double mx = *std::max_element(vx.begin(), vx.end());
    double z = 0.0;
    for (double v : vx) z += std::exp(v - mx);
    return push(TapeNode{OpKind::LogSumExp, {x.id}, {mx + std::log(z)}, {}, {}});
}

Var Tape::concat(const std::vector<Var>& xs) {
    if (xs.empty()) throw ShapeError("concat: no inputs");
    TapeNode n{OpKind::Concat, {}, {}, {}, {}};
    for (Var x : xs) {
        n.in.push_back(x.id);
        const auto& vx = node(x).val;
        n.val.insert(n.val.end(), vx.begin(), vx.end());
    }
    return push(std::move(n));
}

Var Tape::indexSelect(Var x, const std::vector<int>& idx) {
    const auto& vx = node(x).val;
    TapeNode n{OpKind::IndexSelect, {x.id}, std::vector<double>(idx.size()), {}, {}};
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= static_cast<int>(vx.size())) {
            throw ShapeError("indexSelect: index " + std::to_string(idx[i]) + " out of [0," +
                             std::to_string(vx.size()) + ")");
        }
        n.val[i] = vx[idx[i]];
        n.iaux.push_back(idx[i]);
    }
    return push(std::move(n));
}

Var Tape::matvec(Var m, Var x, int rows, int cols) {
    const auto &vm = node(m).val, &vx = node(x).val;
    if (static_cast<int>(vm.size()) != rows * cols || static_cast<int>(vx.size()) != cols) {
        throw ShapeError("matvec: M [" + std::to_string(vm.size()) + "] vs " +
                         std::to_string(rows) + "x" + std::to_string(cols) + ", x [" +
                         std::to_string(vx.size()) + "]");
    }
    TapeNode n{OpKind::MatVec, {m.id, x.id}, std::vector<double>(rows, 0.0), {rows, cols}, {}};
    for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols; ++j) s += vm[static_cast<size_t>(i) * cols + j] * vx[j];
        n.val[i] = s;
    }
    return push(std::move(n));
}

Var Tape::prod(Var x) {
    const auto& vx = node(x).val;
    double p = 1.0;
    for (double v : vx) p *= v;
    return push(TapeNode{OpKind::Prod, {x.id}, {p}, {}, {}});
}

Var Tape::psConvolve(Var lx, Var ly, int outLen) {
    const auto &a = node(lx).val, &b = node(ly).val;
    TapeNode n{OpKind::PsConvolve, {lx.id, ly.id}, std::vector<double>(outLen + 1, 0.0),
               {outLen}, {}};
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            size_t l = i + j;
            if (l > static_cast<size_t>(outLen)) break;
            n.val[l] += a[i] * b[j];
        }
    }
    return push(std::move(n));
}

Var Tape::psConcatC(Var lx, Var cx, Var ly, Var cy, Var lz, int lmx, int lmy, int lmz, int V) {
    const auto &La = node(lx).val, &Ca = node(cx).val;
    const auto &Lb = node(ly).val, &Cb = node(cy).val;
    const auto& Lc = node(lz).val;
    if (La.size() != static_cast<size_t>(lmx) + 1 || Lb.size() != static_cast<size_t>(lmy) + 1 ||
        Lc.size() != static_cast<size_t>(lmz) + 1 || Ca.size() != cSize(lmx, V) ||
        Cb.size() != cSize(lmy, V)) {
        throw ShapeError("psConcatC: inconsistent shapes");
    }
    TapeNode n{OpKind::PsConcatC, {lx.id, cx.id, ly.id, cy.id, lz.id},
               std::vector<double>(cSize(lmz, V), 0.0), {lmx, lmy, lmz, V}, {}};
    for (int l = 1; l <= lmz; ++l) {
        if (Lc[l] <= 0.0) continue;
        for (int i = std::max(0, l - lmy); i <= std::min(l, lmx); ++i) {
            int j = l - i;
            double w = La[i] * Lb[j];
            if (w == 0.0) continue;
            for (int k = 0; k < l; ++k) {
                if (k < i) {
                    for (int c = 0; c < V; ++c) {
                        n.val[cIdx(l, k, c, lmz, V)] += w * Ca[cIdx(i, k, c, lmx, V)];
                    }
                } else {
                    for (int c = 0; c < V; ++c) {
                        n.val[cIdx(l, k, c, lmz, V)] += w * Cb[cIdx(j, k - i, c, lmy, V)];
                    }
                }
            }
        }
        for (int k = 0; k < l; ++k) {
            for (int c = 0; c < V; ++c) n.val[cIdx(l, k, c, lmz, V)] /= Lc[l];
        }
    }
    return push(std::move(n));
}

Var Tape::psRepeatL(Var lx, int m, int lmx, int lmz) {
    const auto& La = node(lx).val;
    if (La.size() != static_cast<size_t>(lmx) + 1) throw ShapeError("psRepeatL: bad L size");
    TapeNode n{OpKind::PsRepeatL, {lx.id}, std::vector<double>(lmz + 1, 0.0), {m, lmx, lmz}, {}};
    for (int l = 0; l <= lmz; ++l) {
        if (l % m == 0 && l / m <= lmx) n.val[l] = La[l / m];
    }
    return push(std::move(n));
}

Var Tape::psRepeatC(Var cx, int m, int lmx, int lmz, int V) {
    const auto& Ca = node(cx).val;
    if (Ca.size() != cSize(lmx, V)) throw ShapeError("psRepeatC: bad C size");
    TapeNode n{OpKind::PsRepeatC, {cx.id}, std::vector<double>(cSize(lmz, V), 0.0),
               {m, lmx, lmz, V}, {}};
    for (int l = m; l <= lmz; l += m) {
        int lx = l / m;
        if (lx > lmx || lx == 0) continue;
        for (int k = 0; k < l; ++k) {
            for (int c = 0; c < V; ++c) {
                n.val[cIdx(l, k, c, lmz, V)] = Ca[cIdx(lx, k % lx, c, lmx, V)];
            }
        }
    }
    return push(std::move(n));
}

Var Tape::psMixL(Var p, const std::vector<Var>& ls, const std::vector<int>& lens, int lmz) {
    int K = static_cast<int>(ls.size());
    if (node(p).val.size() != static_cast<size_t>(K) || lens.size() != ls.size()) {
        throw ShapeError("psMixL: K mismatch");
    }
    TapeNode n{OpKind::PsMixL, {p.id}, std::vector<double>(lmz + 1, 0.0), {K, lmz}, {}};
    const auto& pv = node(p).val;
    for (int i = 0; i < K; ++i) {
        n.in.push_back(ls[i].id);
        n.iaux.push_back(lens[i]);
        const auto& Li = node(ls[i]).val;
        if (Li.size() != static_cast<size_t>(lens[i]) + 1 || lens[i] > lmz) {
            throw ShapeError("psMixL: component length mismatch");
        }
        for (int l = 0; l <= lens[i]; ++l) n.val[l] += pv[i] * Li[l];
    }
    return push(std::move(n));
}

Var Tape::psMixC(Var p, Var lmix, const std::vector<Var>& ls, const std::vector<Var>& cs,
                 const std::vector<int>& lens, int lmz, int V) {
    int K = static_cast<int>(ls.size());
    if (cs.size() != ls.size() || lens.size() != ls.size() ||
        node(p).val.size() != static_cast<size_t>(K)) {
        throw ShapeError("psMixC: K mismatch");
    }
    const auto& Lm = node(lmix).val;
    if (Lm.size() != static_cast<size_t>(lmz) + 1) throw ShapeError("psMixC: bad Lmix size");
    TapeNode n{OpKind::PsMixC, {p.id, lmix.id}, std::vector<double>(cSize(lmz, V), 0.0),
               {K, lmz, V}, {}};
    const auto& pv = node(p).val;
    for (int i = 0; i < K; ++i) {
        n.in.push_back(ls[i].id);
        n.iaux.push_back(lens[i]);
    }
    for (int i = 0; i < K; ++i) n.in.push_back(cs[i].id);
    for (int i = 0; i < K; ++i) {
        const auto& Li = node(ls[i]).val;
        const auto& Ci = node(cs[i]).val;
        if (Ci.size() != cSize(lens[i], V)) throw ShapeError("psMixC: bad component C size");
        for (int l = 1; l <= lens[i]; ++l) {
            if (Lm[l] <= 0.0 || Li[l] == 0.0) continue;
            double w = pv[i] * Li[l] / Lm[l];
            for (int k = 0; k < l; ++k) {
                for (int c = 0; c < V; ++c) {
                    n.val[cIdx(l, k, c, lmz, V)] += w * Ci[cIdx(l, k, c, lens[i], V)];
                }
            }
        }
    }
    return push(std::move(n));
}

std::unordered_map<int, std::vector<double>> Tape::backward(Var loss) const {
    const auto& ln = node(loss);
    if (ln.val.size() != 1) throw ShapeError("backward: loss must be scalar");

    std::vector<std::vector<double>> adj(nodes_.size());
    adj[loss.id] = {1.0};

    auto acc = [&](int id, size_t i, double g) {
        if (adj[id].empty()) adj[id].assign(nodes_[id].val.size(), 0.0);
        // Broadcast scalars: gradients from every position fold into slot 0.
        adj[id][nodes_[id].val.size() == 1 ? 0 : i] += g;
    };

    for (int id = loss.id; id >= 0; --id) {
        if (adj[id].empty()) continue;
        const TapeNode& n = nodes_[id];
        const auto& g = adj[id];
        switch (n.op) {
            case OpKind::Leaf:
                break;
            case OpKind::Add:
                for (size_t i = 0; i < g.size(); ++i) {
                    acc(n.in[0], i, g[i]);
                    acc(n.in[1], i, g[i]);
                }
                break;
            case OpKind::Sub:
                for (size_t i = 0; i < g.size(); ++i) {
                    acc(n.in[0], i, g[i]);
                    acc(n.in[1], i, -g[i]);
                }
                break;
            case OpKind::Mul: {
                const auto &a = nodes_[n.in[0]].val, &b = nodes_[n.in[1]].val;
                for (size_t i = 0; i < g.size(); ++i) {
                    acc(n.in[0], i, g[i] * b[b.size() == 1 ? 0 : i]);
                    acc(n.in[1], i, g[i] * a[a.size() == 1 ? 0 : i]);
                }
                break;
            }
            case OpKind::Div: {
                const auto &a = nodes_[n.in[0]].val, &b = nodes_[n.in[1]].val;
                for (size_t i = 0; i < g.size(); ++i) {
                    double bi = b[b.size() == 1 ? 0 : i];
                    double ai = a[a.size() == 1 ? 0 : i];
                    acc(n.in[0], i, g[i] / bi);
                    acc(n.in[1], i, -g[i] * ai / (bi * bi));
                }
                break;
            }
            case OpKind::Scale:
                for (size_t i = 0; i < g.size(); ++i) acc(n.in[0], i, g[i] * n.daux[0]);
                break;
            case OpKind::Exp:
                for (size_t i = 0; i < g.size(); ++i) acc(n.in[0], i, g[i] * n.val[i]);
                break;
            case OpKind::Log: {
                const auto& x = nodes_[n.in[0]].val;
                for (size_t i = 0; i < g.size(); ++i) acc(n.in[0], i, g[i] / (x[i] + n.daux[0]));
                break;
            }
            case OpKind::Sigmoid:
                for (size_t i = 0; i < g.size(); ++i) {
                    acc(n.in[0], i, g[i] * n.val[i] * (1.0 - n.val[i]));
                }
                break;
            case OpKind::Sum: {
                size_t sz = nodes_[n.in[0]].val.size();
                for (size_t i = 0; i < sz; ++i) acc(n.in[0], i, g[0]);
                break;
            }
            case OpKind::Dot: {
                const auto &a = nodes_[n.in[0]].val, &b = nodes_[n.in[1]].val;
                for (size_t i = 0; i < a.size(); ++i) {
                    acc(n.in[0], i, g[0] * b[i]);
                    acc(n.in[1], i, g[0] * a[i]);
                }
                break;
            }
            case OpKind::Softmax: {
                double dotpg = 0.0;
                for (size_t i = 0; i < g.size(); ++i) dotpg += g[i] * n.val[i];
                for (size_t i = 0; i < g.size(); ++i) {
                    acc(n.in[0], i, n.val[i] * (g[i] - dotpg));
                }
                break;
            }
            case OpKind::LogSumExp: {
                const auto& x = nodes_[n.in[0]].val;
                for (size_t i = 0; i < x.size(); ++i) {
                    acc(n.in[0], i, g[0] * std::exp(x[i] - n.val[0]));
                }
                break;
            }
            case OpKind::Concat: {
                size_t off = 0;
                for (int inId : n.in) {
                    size_t sz = nodes_[inId].val.size();
                    for (size_t i = 0; i < sz; ++i) acc(inId, i, g[off + i]);
                    off += sz;
                }
                break;
            }
            case OpKind::IndexSelect:
                for (size_t i = 0; i < n.iaux.size(); ++i) {
                    acc(n.in[0], static_cast<size_t>(n.iaux[i]), g[i]);
                }
                break;
            case OpKind::MatVec: {
                int rows = n.iaux[0], cols = n.iaux[1];
                const auto &m = nodes_[n.in[0]].val, &x = nodes_[n.in[1]].val;
                for (int i = 0; i < rows; ++i) {
                    for (int j = 0; j < cols; ++j) {
                        acc(n.in[0], static_cast<size_t>(i) * cols + j, g[i] * x[j]);
                        acc(n.in[1], j, g[i] * m[static_cast<size_t>(i) * cols + j]);
                    }
                }
                break;
            }
            case OpKind::Prod: {
                const auto& x = nodes_[n.in[0]].val;
                size_t sz = x.size();
                std::vector<double> pre(sz + 1, 1.0), suf(sz + 1, 1.0);
                for (size_t i = 0; i < sz; ++i) pre[i + 1] = pre[i] * x[i];
                for (size_t i = sz; i > 0; --i) suf[i - 1] = suf[i] * x[i - 1];
                for (size_t i = 0; i < sz; ++i) acc(n.in[0], i, g[0] * pre[i] * suf[i + 1]);
                break;
            }
            case OpKind::PsConvolve: {
                const auto &a = nodes_[n.in[0]].val, &b = nodes_[n.in[1]].val;
                int outLen = n.iaux[0];
                for (size_t i = 0; i < a.size(); ++i) {
                    for (size_t j = 0; j < b.size(); ++j) {
                        size_t l = i + j;
                        if (l > static_cast<size_t>(outLen)) break;
                        acc(n.in[0], i, g[l] * b[j]);
                        acc(n.in[1], j, g[l] * a[i]);
                    }
                }
                break;
            }
            case OpKind::PsConcatC: {
                int lmx = n.iaux[0], lmy = n.iaux[1], lmz = n.iaux[2], V = n.iaux[3];
                const auto& La = nodes_[n.in[0]].val;
                const auto& Ca = nodes_[n.in[1]].val;
                const auto& Lb = nodes_[n.in[2]].val;
                const auto& Cb = nodes_[n.in[3]].val;
                const auto& Lc = nodes_[n.in[4]].val;
                for (int l = 1; l <= lmz; ++l) {
                    if (Lc[l] <= 0.0) continue;
                    double invLc = 1.0 / Lc[l];
                    // d/dLz[l]: every output cell at this l is S/Lz[l].
                    double gLc = 0.0;
                    for (int k = 0; k < l; ++k) {
                        for (int c = 0; c < V; ++c) {
                            gLc += g[cIdx(l, k, c, lmz, V)] * n.val[cIdx(l, k, c, lmz, V)];
                        }
                    }
                    acc(n.in[4], static_cast<size_t>(l), -gLc * invLc);
                    for (int i = std::max(0, l - lmy); i <= std::min(l, lmx); ++i) {
                        int j = l - i;
                        double w = La[i] * Lb[j];
                        double gLa = 0.0, gLb = 0.0;
                        for (int k = 0; k < l; ++k) {
                            for (int c = 0; c < V; ++c) {
                                double go = g[cIdx(l, k, c, lmz, V)] * invLc;
                                if (go == 0.0) continue;
                                double t;
                                if (k < i) {
                                    t = Ca[cIdx(i, k, c, lmx, V)];
                                    if (w != 0.0) acc(n.in[1], cIdx(i, k, c, lmx, V), go * w);
                                } else {
                                    t = Cb[cIdx(j, k - i, c, lmy, V)];
                                    if (w != 0.0) acc(n.in[3], cIdx(j, k - i, c, lmy, V), go * w);
                                }
                                gLa += go * Lb[j] * t;
                                gLb += go * La[i] * t;
                            }
                        }
                        acc(n.in[0], static_cast<size_t>(i), gLa);
                        acc(n.in[2], static_cast<size_t>(j), gLb);
                    }
                }
                break;
            }
            case OpKind::PsRepeatL: {
                int m = n.iaux[0], lmx = n.iaux[1], lmz = n.iaux[2];
                for (int l = 0; l <= lmz; ++l) {
                    if (l % m == 0 && l / m <= lmx) acc(n.in[0], static_cast<size_t>(l / m), g[l]);
                }
                break;
            }
            case OpKind::PsRepeatC: {
                int m = n.iaux[0], lmx = n.iaux[1], lmz = n.iaux[2], V = n.iaux[3];
                for (int l = m; l <= lmz; l += m) {
                    int lx = l / m;
                    if (lx > lmx || lx == 0) continue;
                    for (int k = 0; k < l; ++k) {
                        for (int c = 0; c < V; ++c) {
                            acc(n.in[0], cIdx(lx, k % lx, c, lmx, V), g[cIdx(l, k, c, lmz, V)]);
                        }
                    }
                }
                break;
            }
            case OpKind::PsMixL: {
                int K = n.iaux[0];
                const auto& pv = nodes_[n.in[0]].val;
                for (int i = 0; i < K; ++i) {
                    int len = n.iaux[2 + i];
                    const auto& Li = nodes_[n.in[1 + i]].val;
                    double gp = 0.0;
                    for (int l = 0; l <= len; ++l) {
                        gp += g[l] * Li[l];
                        acc(n.in[1 + i], static_cast<size_t>(l), g[l] * pv[i]);
                    }
                    acc(n.in[0], static_cast<size_t>(i), gp);
                }
                break;
            }
            case OpKind::PsMixC: {
                int K = n.iaux[0], lmz = n.iaux[1], V = n.iaux[2];
                const auto& pv = nodes_[n.in[0]].val;
                const auto& Lm = nodes_[n.in[1]].val;
                for (int i = 0; i < K; ++i) {
                    int len = n.iaux[3 + i];
                    const auto& Li = nodes_[n.in[2 + i]].val;
                    const auto& Ci = nodes_[n.in[2 + K + i]].val;
                    double gp = 0.0;
                    for (int l = 1; l <= len; ++l) {
                        if (Lm[l] <= 0.0) continue;
                        double invLm = 1.0 / Lm[l];
                        double rowDot = 0.0;
                        for (int k = 0; k < l; ++k) {
                            for (int c = 0; c < V; ++c) {
                                double go = g[cIdx(l, k, c, lmz, V)];
                                if (go == 0.0) continue;
                                double ci = Ci[cIdx(l, k, c, len, V)];
                                rowDot += go * ci;
                                acc(n.in[2 + K + i], cIdx(l, k, c, len, V),
                                    go * pv[i] * Li[l] * invLm);
                            }
                        }
                        gp += rowDot * Li[l] * invLm;
                        acc(n.in[2 + i], static_cast<size_t>(l), rowDot * pv[i] * invLm);
                        acc(n.in[1], static_cast<size_t>(l),
                            -rowDot * pv[i] * Li[l] * invLm * invLm);
                    }
                    acc(n.in[0], static_cast<size_t>(i), gp);
                }
                break;
            }
        }
    }

    std::unordered_map<int, std::vector<double>> grads;
    for (size_t id = 0; id < nodes_.size(); ++id) {
        if (!nodes_[id].trainable) continue;
        if (adj[id].empty()) {
            grads[static_cast<int>(id)] = std::vector<double>(nodes_[id].val.size(), 0.0);
        } else {
            grads[static_cast<int>(id)] = adj[id];
        }
    }
    return grads;
}

}  // namespace g2l2
