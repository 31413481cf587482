#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace levelset {

// A bundle is a signed per-asset quantity vector. Sign convention throughout:
// positive entries are net transfers *to* the market maker, negative entries
// are paid out to the trader.
using Bundle = std::vector<double>;

// Reserves/argument outside a family's domain.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A monotone solve could not straddle its target.
class BracketError : public std::runtime_error {
public:
    explicit BracketError(const std::string& what, double max_feasible = 0.0)
        : std::runtime_error(what), max_feasible_(max_feasible) {}
    double max_feasible() const { return max_feasible_; }

private:
    double max_feasible_;
};

// Residual above tolerance after the iteration budget.
class ToleranceError : public std::runtime_error {
public:
    explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed market descriptor or parameters.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

inline bool all_finite(const Bundle& r) {
    for (double x : r)
        if (!std::isfinite(x)) return false;
    return true;
}

inline bool is_zero(const Bundle& r) {
    for (double x : r)
        if (x != 0.0) return false;
    return true;
}

// r ⪰ 0
inline bool is_nonnegative(const Bundle& r) {
    for (double x : r)
        if (x < 0.0) return false;
    return true;
}

// r ≻ 0
inline bool is_strictly_positive(const Bundle& r) {
    for (double x : r)
        if (x <= 0.0) return false;
    return true;
}

// r ⪵ 0: nonnegative and not identically zero.
inline bool is_semipositive(const Bundle& r) {
    return is_nonnegative(r) && !is_zero(r);
}

inline Bundle add(const Bundle& a, const Bundle& b) {
    Bundle out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline Bundle sub(const Bundle& a, const Bundle& b) {
    Bundle out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Bundle scale(double c, const Bundle& a) {
    Bundle out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

inline Bundle negate(const Bundle& a) { return scale(-1.0, a); }

inline double dot(const Bundle& a, const Bundle& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Bundle ones(std::size_t n, double value = 1.0) { return Bundle(n, value); }

inline Bundle unit(std::size_t n, std::size_t i, double value = 1.0) {
    Bundle out(n, 0.0);
    out[i] = value;
    return out;
}

inline double max_element(const Bundle& r) {
    double m = r[0];
    for (double x : r) m = std::max(m, x);
    return m;
}

inline double min_element(const Bundle& r) {
    double m = r[0];
    for (double x : r) m = std::min(m, x);
    return m;
}

inline Bundle positive_part(const Bundle& r) {
    Bundle out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = std::max(r[i], 0.0);
    return out;
}

inline Bundle negative_part(const Bundle& r) {
    Bundle out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = std::max(-r[i], 0.0);
    return out;
}

// r = positive − negative with both parts nonnegative and disjoint supports.
inline std::pair<Bundle, Bundle> split_bundle(const Bundle& r) {
    return {positive_part(r), negative_part(r)};
}

// a ⪰ b componentwise
inline bool dominates_weakly(const Bundle& a, const Bundle& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < b[i]) return false;
    return true;
}

// a ⪴ b: a ⪰ b and a ≠ b
inline bool dominates(const Bundle& a, const Bundle& b) {
    return dominates_weakly(a, b) && a != b;
}

// Where a family's reserve argument lives.
enum class Domain { All, PositiveOrthant };

inline bool in_domain(Domain d, const Bundle& q) {
    return d == Domain::All ? all_finite(q) : all_finite(q) && is_strictly_positive(q);
}

// Initial reserves plus the ordered accepted trades. Current reserves are the
// componentwise sum.
struct History {
    Bundle initial_reserves;
    std::vector<Bundle> trades;

    std::size_t n() const { return initial_reserves.size(); }

    History& append(Bundle trade) {
        trades.push_back(std::move(trade));
        return *this;
    }
};

inline Bundle reserves(const History& h) {
    Bundle q = h.initial_reserves;
    for (const Bundle& r : h.trades)
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += r[i];
    return q;
}

}  // namespace levelset
