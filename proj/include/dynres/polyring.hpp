#pragma once

// Exact-rational sparse multivariate polynomials over Z^n-multigraded rings,
// polynomial matrices, Pfaffians / sub-Pfaffians, and finite-field rank.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dynres/errors.hpp"
#include "dynres/rational.hpp"

namespace dynres {

// ---------------------------------------------------------------------------
// Ring
// ---------------------------------------------------------------------------

/// Polynomial ring with one variable per (negative) root, each carrying a
/// Z^rank multidegree (the root's simple-root coordinates). The coarse
/// degree (the grading-vertex coordinate) drives the single grading used by
/// exponential truncation and linear sections.
struct MultigradedRing {
    int rank = 0;  // length of the multidegree vectors
    std::vector<std::string> names;
    std::vector<std::vector<int>> degrees;  // per-variable multidegree
    std::vector<int> coarse;                // per-variable coarse degree (>= 1)

    int nvars() const { return static_cast<int>(names.size()); }

    int var(const std::string& name) const {
        for (int i = 0; i < nvars(); ++i)
            if (names[i] == name) return i;
        throw ValidationError("ring has no variable '" + name + "'");
    }

    bool same(const MultigradedRing& o) const {
        return rank == o.rank && names == o.names && degrees == o.degrees;
    }
};

using RingPtr = std::shared_ptr<const MultigradedRing>;

inline RingPtr make_ring(int rank, std::vector<std::string> names,
                         std::vector<std::vector<int>> degrees,
                         std::vector<int> coarse = {}) {
    auto r = std::make_shared<MultigradedRing>();
    r->rank = rank;
    r->names = std::move(names);
    r->degrees = std::move(degrees);
    if (coarse.empty()) coarse.assign(r->names.size(), 1);
    r->coarse = std::move(coarse);
    if (r->degrees.size() != r->names.size() || r->coarse.size() != r->names.size())
        throw ValidationError("ring constructor: mismatched variable data");
    for (const auto& dv : r->degrees)
        if (static_cast<int>(dv.size()) != r->rank)
            throw ValidationError("ring constructor: multidegree of wrong length");
    return r;
}

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
    return a == b || (a && b && a->same(*b));
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// Dense exponent vector, one entry per ring variable.
using Expo = std::vector<std::uint16_t>;

inline int expo_total(const Expo& e) {
    int t = 0;
    for (auto x : e) t += x;
    return t;
}

/// Graded-lexicographic order: total degree first, then lexicographic in the
/// ring's variable order. This is the canonical term order for printing.
struct GradedLexLess {
    bool operator()(const Expo& a, const Expo& b) const {
        int ta = expo_total(a), tb = expo_total(b);
        if (ta != tb) return ta < tb;
        return a < b;
    }
};

// ---------------------------------------------------------------------------
// SparsePoly
// ---------------------------------------------------------------------------

struct SparsePoly {
    RingPtr ring;
    std::map<Expo, Rat, GradedLexLess> terms;  // no zero coefficients stored

    SparsePoly() = default;
    explicit SparsePoly(RingPtr r) : ring(std::move(r)) {}

    static SparsePoly zero(RingPtr r) { return SparsePoly(std::move(r)); }

    static SparsePoly constant(RingPtr r, const Rat& c) {
        SparsePoly p(std::move(r));
        if (c != 0) p.terms[Expo(p.ring->nvars(), 0)] = c;
        return p;
    }

    static SparsePoly variable(RingPtr r, int v, const Rat& c = Rat(1)) {
        SparsePoly p(std::move(r));
        if (v < 0 || v >= p.ring->nvars())
            throw ValidationError("variable index out of range");
        if (c != 0) {
            Expo e(p.ring->nvars(), 0);
            e[v] = 1;
            p.terms[e] = c;
        }
        return p;
    }

    static SparsePoly monomial(RingPtr r, const Expo& e, const Rat& c) {
        SparsePoly p(std::move(r));
        if (c != 0) p.terms[e] = c;
        return p;
    }

    bool is_zero() const { return terms.empty(); }
    int term_count() const { return static_cast<int>(terms.size()); }

    void add_term(const Expo& e, const Rat& c) {
        if (c == 0) return;
        auto it = terms.find(e);
        if (it == terms.end()) {
            terms.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    SparsePoly operator-() const {
        SparsePoly p(ring);
        for (const auto& [e, c] : terms) p.terms[e] = -c;
        return p;
    }

    SparsePoly& operator+=(const SparsePoly& o) {
        require_same_ring(o);
        for (const auto& [e, c] : o.terms) add_term(e, c);
        return *this;
    }

    SparsePoly& operator-=(const SparsePoly& o) {
        require_same_ring(o);
        for (const auto& [e, c] : o.terms) add_term(e, -c);
        return *this;
    }

    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }

    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
        a.require_same_ring(b);
        SparsePoly p(a.ring);
        int nv = a.ring->nvars();
        for (const auto& [ea, ca] : a.terms) {
            for (const auto& [eb, cb] : b.terms) {
                Expo e(nv);
                for (int i = 0; i < nv; ++i)
                    e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
                p.add_term(e, ca * cb);
            }
        }
        return p;
    }

    friend SparsePoly operator*(const SparsePoly& a, const Rat& c) {
        SparsePoly p(a.ring);
        if (c == 0) return p;
        for (const auto& [e, k] : a.terms) p.terms[e] = k * c;
        return p;
    }
    friend SparsePoly operator*(const Rat& c, const SparsePoly& a) { return a * c; }

    bool operator==(const SparsePoly& o) const {
        return same_ring(ring, o.ring) && terms == o.terms;
    }

    /// d/dx_v, Leibniz-exact.
    SparsePoly derivative(int v) const {
        SparsePoly p(ring);
        for (const auto& [e, c] : terms) {
            if (e[v] == 0) continue;
            Expo e2 = e;
            e2[v] -= 1;
            p.add_term(e2, c * Rat(e[v]));
        }
        return p;
    }

    /// Send the listed variables to zero.
    SparsePoly kill_variables(const std::vector<int>& vars) const {
        std::vector<char> dead(ring->nvars(), 0);
        for (int v : vars) dead[v] = 1;
        SparsePoly p(ring);
        for (const auto& [e, c] : terms) {
            bool keep = true;
            for (int i = 0; i < ring->nvars() && keep; ++i)
                if (dead[i] && e[i] > 0) keep = false;
            if (keep) p.terms[e] = c;
        }
        return p;
    }

    /// Multidegree of a monomial in this ring.
    std::vector<int> expo_multidegree(const Expo& e) const {
        std::vector<int> deg(ring->rank, 0);
        for (int v = 0; v < ring->nvars(); ++v) {
            if (e[v] == 0) continue;
            for (int j = 0; j < ring->rank; ++j) deg[j] += e[v] * ring->degrees[v][j];
        }
        return deg;
    }

    int coarse_degree(const Expo& e) const {
        int t = 0;
        for (int v = 0; v < ring->nvars(); ++v) t += e[v] * ring->coarse[v];
        return t;
    }

    /// Evaluate at a point over F_p (one value per variable, in [0,p)).
    std::int64_t eval_mod_p(const std::vector<std::int64_t>& point, std::int64_t p) const {
        std::int64_t acc = 0;
        for (const auto& [e, c] : terms) {
            std::int64_t m = mod_p(c, p);
            for (int v = 0; v < ring->nvars(); ++v)
                for (int k = 0; k < e[v]; ++k) m = (m * (point[v] % p)) % p;
            acc = (acc + m) % p;
        }
        return (acc % p + p) % p;
    }

    /// Exact evaluation at a rational point.
    Rat eval(const std::vector<Rat>& point) const {
        Rat acc(0);
        for (const auto& [e, c] : terms) {
            Rat m = c;
            for (int v = 0; v < ring->nvars(); ++v)
                for (int k = 0; k < e[v]; ++k) m *= point[v];
            acc += m;
        }
        return acc;
    }

    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        // Descending graded-lex: leading term first.
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            const auto& [e, c] = *it;
            Rat a = c;
            if (first) {
                if (a < 0) { out << "-"; a = -a; }
            } else {
                out << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            std::string mono;
            for (int v = 0; v < ring->nvars(); ++v) {
                if (e[v] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += ring->names[v];
                if (e[v] > 1) mono += "^" + std::to_string(e[v]);
            }
            if (mono.empty()) {
                out << rat_str(a);
            } else {
                if (a != 1) out << rat_str(a) << "*";
                out << mono;
            }
        }
        return out.str();
    }

private:
    void require_same_ring(const SparsePoly& o) const {
        if (!same_ring(ring, o.ring)) throw ValidationError("ring mismatch");
    }
};

// ---------------------------------------------------------------------------
// Homogeneity
// ---------------------------------------------------------------------------

struct Homogeneity {
    enum Kind { Homogeneous, Inhomogeneous, ZeroAnyDegree } kind = ZeroAnyDegree;
    std::vector<int> degree;  // set when kind == Homogeneous
};

/// The unique common multidegree of all terms, an "inhomogeneous" marker, or
/// the distinguished "any degree" marker for the zero polynomial.
inline Homogeneity is_homogeneous(const SparsePoly& p) {
    Homogeneity h;
    if (p.is_zero()) {
        h.kind = Homogeneity::ZeroAnyDegree;
        return h;
    }
    bool first = true;
    for (const auto& [e, c] : p.terms) {
        std::vector<int> deg = p.expo_multidegree(e);
        if (first) {
            h.degree = deg;
            first = false;
        } else if (deg != h.degree) {
            h.kind = Homogeneity::Inhomogeneous;
            h.degree.clear();
            return h;
        }
    }
    h.kind = Homogeneity::Homogeneous;
    return h;
}

// ---------------------------------------------------------------------------
// PolyMatrix
// ---------------------------------------------------------------------------

struct PolyMatrix {
    RingPtr ring;
    int rows = 0, cols = 0;
    std::map<std::pair<int, int>, SparsePoly> entries;  // sparse, no zero entries
    // Optional multidegree twists: col twists belong to the source free
    // module, row twists to the target; entry (r,c) is homogeneous of degree
    // col_twists[c] - row_twists[r] when both are present.
    std::optional<std::vector<std::vector<int>>> row_twists, col_twists;

    PolyMatrix() = default;
    PolyMatrix(RingPtr r, int rows, int cols) : ring(std::move(r)), rows(rows), cols(cols) {}

    void check_range(int r, int c) const {
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw ValidationError("matrix index out of range");
    }

    const SparsePoly& at(int r, int c) const {
        check_range(r, c);
        static const SparsePoly empty;
        auto it = entries.find({r, c});
        if (it == entries.end()) {
            // Return a zero polynomial in the right ring.
            thread_local SparsePoly zero_cache;
            zero_cache = SparsePoly::zero(ring);
            return zero_cache;
        }
        return it->second;
    }

    void set(int r, int c, SparsePoly p) {
        check_range(r, c);
        if (p.is_zero())
            entries.erase({r, c});
        else
            entries[{r, c}] = std::move(p);
    }

    PolyMatrix transpose() const {
        PolyMatrix t(ring, cols, rows);
        for (const auto& [rc, p] : entries) t.entries[{rc.second, rc.first}] = p;
        t.row_twists = col_twists;
        t.col_twists = row_twists;
        return t;
    }

    PolyMatrix operator*(const PolyMatrix& o) const {
        if (!same_ring(ring, o.ring)) throw ValidationError("ring mismatch");
        if (cols != o.rows) throw ValidationError("matrix shape mismatch in product");
        PolyMatrix out(ring, rows, o.cols);
        for (const auto& [rc1, p1] : entries) {
            for (int c = 0; c < o.cols; ++c) {
                auto it = o.entries.find({rc1.second, c});
                if (it == o.entries.end()) continue;
                SparsePoly prod = p1 * it->second;
                if (prod.is_zero()) continue;
                auto key = std::make_pair(rc1.first, c);
                auto out_it = out.entries.find(key);
                if (out_it == out.entries.end())
                    out.entries.emplace(key, std::move(prod));
                else {
                    out_it->second += prod;
                    if (out_it->second.is_zero()) out.entries.erase(out_it);
                }
            }
        }
        return out;
    }

    bool is_zero() const { return entries.empty(); }

    /// Entrywise number-of-terms table.
    std::vector<std::vector<int>> term_count_table() const {
        std::vector<std::vector<int>> t(rows, std::vector<int>(cols, 0));
        for (const auto& [rc, p] : entries) t[rc.first][rc.second] = p.term_count();
        return t;
    }
};

// ---------------------------------------------------------------------------
// Pfaffians
// ---------------------------------------------------------------------------

namespace detail {

inline void require_skew(const PolyMatrix& m) {
    if (m.rows != m.cols) throw ValidationError("Pfaffian needs a square matrix");
    for (int i = 0; i < m.rows; ++i) {
        if (!m.at(i, i).is_zero())
            throw ValidationError("Pfaffian input has a nonzero diagonal entry");
        for (int j = i + 1; j < m.cols; ++j) {
            SparsePoly s = m.at(i, j) + m.at(j, i);
            if (!s.is_zero()) throw ValidationError("Pfaffian input is not skew-symmetric");
        }
    }
}

inline SparsePoly pfaffian_rec(const PolyMatrix& m, std::vector<int> idx,
                               std::map<std::vector<int>, SparsePoly>& memo) {
    if (idx.empty()) return SparsePoly::constant(m.ring, Rat(1));
    auto it = memo.find(idx);
    if (it != memo.end()) return it->second;
    SparsePoly acc = SparsePoly::zero(m.ring);
    int i0 = idx[0];
    for (size_t k = 1; k < idx.size(); ++k) {
        const SparsePoly& a = m.at(i0, idx[k]);
        if (a.is_zero()) continue;
        std::vector<int> rest;
        for (size_t t = 1; t < idx.size(); ++t)
            if (t != k) rest.push_back(idx[t]);
        SparsePoly sub = pfaffian_rec(m, rest, memo);
        // Expansion along the first row: Pf = sum_k (-1)^k a_{1,k} Pf(rest),
        // with k the 1-based position in the index list (even positions +).
        SparsePoly term = a * sub;
        if ((k + 1) % 2 == 1) term = -term;
        acc += term;
    }
    memo.emplace(std::move(idx), acc);
    return acc;
}

}  // namespace detail

/// Pfaffian of the principal submatrix with (0-based, strictly increasing)
/// row/column indices I. Empty I yields 1.
inline SparsePoly sub_pfaffian(const PolyMatrix& m, std::vector<int> idx) {
    detail::require_skew(m);
    if (idx.size() % 2 != 0)
        throw ValidationError("Pfaffian of an odd-size matrix");
    for (size_t k = 0; k + 1 < idx.size(); ++k)
        if (idx[k] >= idx[k + 1]) throw ValidationError("Pfaffian index set must increase");
    if (!idx.empty() && (idx.front() < 0 || idx.back() >= m.rows))
        throw ValidationError("Pfaffian index out of range");
    std::map<std::vector<int>, SparsePoly> memo;
    return detail::pfaffian_rec(m, std::move(idx), memo);
}

inline SparsePoly pfaffian(const PolyMatrix& m) {
    std::vector<int> idx(m.rows);
    std::iota(idx.begin(), idx.end(), 0);
    return sub_pfaffian(m, std::move(idx));
}

/// Symbolic determinant by cofactor expansion (small matrices only).
inline SparsePoly det_symbolic(const PolyMatrix& m) {
    if (m.rows != m.cols) throw ValidationError("determinant needs a square matrix");
    if (m.rows == 0) return SparsePoly::constant(m.ring, Rat(1));
    SparsePoly acc = SparsePoly::zero(m.ring);
    for (int c = 0; c < m.cols; ++c) {
        const SparsePoly& a = m.at(0, c);
        if (a.is_zero()) continue;
        PolyMatrix minor(m.ring, m.rows - 1, m.cols - 1);
        for (const auto& [rc, p] : m.entries) {
            if (rc.first == 0 || rc.second == c) continue;
            minor.entries[{rc.first - 1, rc.second - (rc.second > c ? 1 : 0)}] = p;
        }
        SparsePoly term = a * det_symbolic(minor);
        if (c % 2 == 1) term = -term;
        acc += term;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Finite-field linear algebra
// ---------------------------------------------------------------------------

/// Rank of an F_p matrix (in-place Gaussian elimination).
inline int rank_mod_p(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
    int rows = static_cast<int>(m.size());
    int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][c] % p != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        // Normalize pivot row.
        std::int64_t inv = 1, base = ((m[rank][c] % p) + p) % p, e = p - 2;
        while (e > 0) {
            if (e & 1) inv = (inv * base) % p;
            base = (base * base) % p;
            e >>= 1;
        }
        for (int j = c; j < cols; ++j) m[rank][j] = ((m[rank][j] * inv) % p + p) % p;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] % p == 0) continue;
            std::int64_t f = ((m[r][c] % p) + p) % p;
            for (int j = c; j < cols; ++j)
                m[r][j] = ((m[r][j] - f * m[rank][j]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

/// Rank of M evaluated at a point over F_p. Throws BadReductionError if some
/// coefficient's denominator vanishes mod p (caller retries with a new prime).
inline int rank_at_point(const PolyMatrix& m, const std::vector<std::int64_t>& point,
                         std::int64_t p = 32003) {
    if (static_cast<int>(point.size()) != m.ring->nvars())
        throw ValidationError("point has wrong number of coordinates");
    std::vector<std::vector<std::int64_t>> num(m.rows, std::vector<std::int64_t>(m.cols, 0));
    for (const auto& [rc, poly] : m.entries)
        num[rc.first][rc.second] = poly.eval_mod_p(point, p);
    return rank_mod_p(std::move(num), p);
}

}  // namespace dynres
