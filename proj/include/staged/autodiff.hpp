#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

// Minimal reverse-mode tape. Nodes are appended in evaluation order, so the
// backward pass is a single reverse sweep (parents always precede children).
// Var is either a recorded value (id >= 0) or a detached constant (id == -1);
// constants never touch the tape, which keeps rollouts over long horizons
// from recording observation frames.

namespace staged::ad {

class Tape {
public:
    struct Node {
        int32_t p1;
        int32_t p2;
        double d1;
        double d2;
    };

    int32_t push(int32_t p1, int32_t p2, double d1, double d2) {
        nodes_.push_back(Node{p1, p2, d1, d2});
        return static_cast<int32_t>(nodes_.size()) - 1;
    }

    int32_t leaf() { return push(-1, -1, 0.0, 0.0); }

    void backward(int32_t root) {
        assert(root >= 0 && root < static_cast<int32_t>(nodes_.size()));
        grads_.assign(nodes_.size(), 0.0);
        grads_[static_cast<size_t>(root)] = 1.0;
        for (int32_t i = root; i >= 0; --i) {
            double g = grads_[static_cast<size_t>(i)];
            if (g == 0.0) continue;
            const Node& n = nodes_[static_cast<size_t>(i)];
            if (n.p1 >= 0) grads_[static_cast<size_t>(n.p1)] += n.d1 * g;
            if (n.p2 >= 0) grads_[static_cast<size_t>(n.p2)] += n.d2 * g;
        }
    }

    double grad(int32_t id) const {
        if (id < 0 || static_cast<size_t>(id) >= grads_.size()) return 0.0;
        return grads_[static_cast<size_t>(id)];
    }

    size_t size() const { return nodes_.size(); }
    void clear() {
        nodes_.clear();
        grads_.clear();
    }
    void reserve(size_t n) { nodes_.reserve(n); }

private:
    std::vector<Node> nodes_;
    std::vector<double> grads_;
};

inline Tape*& active_tape() {
    thread_local Tape* t = nullptr;
    return t;
}

// RAII activation; ops on recorded Vars require an active tape.
struct TapeScope {
    Tape* prev;
    explicit TapeScope(Tape& t) : prev(active_tape()) { active_tape() = &t; }
    ~TapeScope() { active_tape() = prev; }
    TapeScope(const TapeScope&) = delete;
    TapeScope& operator=(const TapeScope&) = delete;
};

struct Var {
    int32_t id = -1;  // -1: constant, not on the tape
    double v = 0.0;

    Var() = default;
    Var(double c) : id(-1), v(c) {}  // NOLINT: implicit by design

    static Var record(double value) {
        Var r;
        r.v = value;
        r.id = active_tape()->leaf();
        return r;
    }
};

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.v; }

namespace detail {

inline Var make1(double v, const Var& p, double d) {
    Var r;
    r.v = v;
    r.id = (p.id >= 0) ? active_tape()->push(p.id, -1, d, 0.0) : -1;
    return r;
}

inline Var make2(double v, const Var& a, const Var& b, double da, double db) {
    Var r;
    r.v = v;
    if (a.id >= 0 && b.id >= 0)
        r.id = active_tape()->push(a.id, b.id, da, db);
    else if (a.id >= 0)
        r.id = active_tape()->push(a.id, -1, da, 0.0);
    else if (b.id >= 0)
        r.id = active_tape()->push(b.id, -1, db, 0.0);
    else
        r.id = -1;
    return r;
}

}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
    return detail::make2(a.v + b.v, a, b, 1.0, 1.0);
}
inline Var operator-(const Var& a, const Var& b) {
    return detail::make2(a.v - b.v, a, b, 1.0, -1.0);
}
inline Var operator*(const Var& a, const Var& b) {
    return detail::make2(a.v * b.v, a, b, b.v, a.v);
}
inline Var operator/(const Var& a, const Var& b) {
    return detail::make2(a.v / b.v, a, b, 1.0 / b.v, -a.v / (b.v * b.v));
}
inline Var operator-(const Var& a) { return detail::make1(-a.v, a, -1.0); }

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator/=(Var& a, const Var& b) { return a = a / b; }

inline Var exp(const Var& a) {
    double e = std::exp(a.v);
    return detail::make1(e, a, e);
}
inline Var log(const Var& a) { return detail::make1(std::log(a.v), a, 1.0 / a.v); }
inline Var tanh(const Var& a) {
    double t = std::tanh(a.v);
    return detail::make1(t, a, 1.0 - t * t);
}
inline Var sqrt(const Var& a) {
    double s = std::sqrt(a.v);
    return detail::make1(s, a, 0.5 / s);
}
inline Var relu(const Var& a) {
    return detail::make1(a.v > 0.0 ? a.v : 0.0, a, a.v > 0.0 ? 1.0 : 0.0);
}
inline double relu(double a) { return a > 0.0 ? a : 0.0; }

inline Var leaky_relu(const Var& a, double slope) {
    return detail::make1(a.v > 0.0 ? a.v : slope * a.v, a, a.v > 0.0 ? 1.0 : slope);
}
inline double leaky_relu(double a, double slope) { return a > 0.0 ? a : slope * a; }

}  // namespace staged::ad
