#pragma once

// Finite-dimensional irreducible highest-weight modules over the simply-laced
// Lie algebras, built exactly over Q.
//
// The basis consists of F-monomials applied to a highest-weight vector,
// discovered level by level. A candidate F_i(u) is kept iff its residual
// against the already-selected vectors of the same weight is nonzero under
// the contravariant form; the form is positive definite on the rational span
// (it is the restriction of a unitary structure), so a zero residual is an
// exact certificate of linear dependence and the expansion coefficients come
// straight from the inverse Gram matrix, which is maintained incrementally.
//
// Also here: the Weyl dimension formula (used as an oracle and as the cap
// check before any build), lowering operators for arbitrary negative roots
// through the Chevalley structure constants of rootdata.hpp, and hand-rolled
// exterior / half-spinor models for type D that serve as independent
// combinatorial cross-checks of the numeric builder.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dynres/errors.hpp"
#include "dynres/rational.hpp"
#include "dynres/rootdata.hpp"

namespace dynres {

// ---------------------------------------------------------------------------
// Sparse rational vectors and matrices
// ---------------------------------------------------------------------------

/// Sparse vector over Q: index -> nonzero coefficient.
using SparseVec = std::map<int, Rat>;

inline void vec_add(SparseVec& a, const SparseVec& b, const Rat& c = Rat(1)) {
    if (c == 0) return;
    for (const auto& [k, v] : b) {
        auto it = a.find(k);
        if (it == a.end()) {
            a.emplace(k, v * c);
        } else {
            it->second += v * c;
            if (it->second == 0) a.erase(it);
        }
    }
}

/// Column-major sparse matrix over Q.
struct SparseQMat {
    int rows = 0, cols = 0;
    std::vector<SparseVec> col;

    SparseQMat() = default;
    SparseQMat(int r, int c) : rows(r), cols(c), col(c) {}

    Rat at(int r, int c) const {
        auto it = col[c].find(r);
        return it == col[c].end() ? Rat(0) : it->second;
    }

    void set(int r, int c, const Rat& v) {
        if (v == 0)
            col[c].erase(r);
        else
            col[c][r] = v;
    }

    bool is_zero() const {
        for (const auto& cc : col)
            if (!cc.empty()) return false;
        return true;
    }

    /// Matrix * sparse vector.
    SparseVec apply(const SparseVec& v) const {
        SparseVec out;
        for (const auto& [k, c] : v) vec_add(out, col[k], c);
        return out;
    }

    SparseQMat transposed() const {
        SparseQMat t(cols, rows);
        for (int c = 0; c < cols; ++c)
            for (const auto& [r, v] : col[c]) t.col[r][c] = v;
        return t;
    }

    friend SparseQMat operator*(const SparseQMat& a, const SparseQMat& b) {
        if (a.cols != b.rows) throw ValidationError("sparse matrix shape mismatch");
        SparseQMat out(a.rows, b.cols);
        for (int c = 0; c < b.cols; ++c) out.col[c] = a.apply(b.col[c]);
        return out;
    }

    friend SparseQMat operator-(const SparseQMat& a, const SparseQMat& b) {
        if (a.rows != b.rows || a.cols != b.cols)
            throw ValidationError("sparse matrix shape mismatch");
        SparseQMat out = a;
        for (int c = 0; c < b.cols; ++c) vec_add(out.col[c], b.col[c], Rat(-1));
        return out;
    }

    friend SparseQMat operator*(const Rat& s, const SparseQMat& a) {
        SparseQMat out(a.rows, a.cols);
        if (s == 0) return out;
        for (int c = 0; c < a.cols; ++c)
            for (const auto& [r, v] : a.col[c]) out.col[c][r] = s * v;
        return out;
    }

    /// a*b - b*a.
    static SparseQMat commutator(const SparseQMat& a, const SparseQMat& b) {
        return a * b - b * a;
    }
};

// ---------------------------------------------------------------------------
// WeightModule
// ---------------------------------------------------------------------------

/// An exact module with weight-vector basis and per-node raising/lowering
/// operators. `drop[k]` records lambda - wt(v_k) in simple-root coordinates
/// (all integers), so component extraction by grading degree never needs a
/// rational solve. Provenance: v_k = F_{parent_letter[k]} v_{parent[k]}
/// exactly (coefficient 1) for every non-root basis vector.
struct WeightModule {
    DynkinDiagram diagram;
    Weight lambda;                        // highest weight, omega coordinates
    std::vector<Weight> weights;          // per basis vector
    std::vector<std::vector<int>> drop;   // lambda - weight, simple-root coords
    std::vector<SparseQMat> E, F;         // one per node, 0-based position
    std::vector<int> parent;              // -1 for the highest-weight vector
    std::vector<int> parent_letter;       // Bourbaki index; 0 for the h.w. vector
    std::vector<std::string> labels;      // printable basis labels

    int dim() const { return static_cast<int>(weights.size()); }

    /// Lowering word that produces v_k from the highest-weight vector,
    /// outermost letter first: v_k = F_{w[0]} F_{w[1]} ... v_0.
    std::vector<int> fword(int k) const {
        std::vector<int> w;
        while (parent[k] >= 0) {
            w.push_back(parent_letter[k]);
            k = parent[k];
        }
        return w;
    }

    /// Grading degree of basis vector k at the given node (0-based position):
    /// the alpha_t coordinate of lambda - wt(v_k).
    int tdegree(int k, int tpos) const { return drop[k][tpos]; }
};

// ---------------------------------------------------------------------------
// Weyl dimension formula
// ---------------------------------------------------------------------------

inline Rat weyl_dim_rat(const DynkinDiagram& d, const Weight& lambda) {
    if (static_cast<int>(lambda.size()) != d.rank)
        throw ValidationError("weight has wrong rank");
    for (int x : lambda)
        if (x < 0) throw ValidationError("weight is not dominant");
    Rat num(1), den(1);
    for (const auto& r : positive_roots(d)) {
        long a = 0, b = 0;
        for (int i = 0; i < d.rank; ++i) {
            a += static_cast<long>(lambda[i] + 1) * r.coords[i];
            b += r.coords[i];
        }
        num *= a;
        den *= b;
    }
    return num / den;
}

/// dim V(lambda) by the Weyl dimension formula.
inline long weyl_dim(const DynkinDiagram& d, const Weight& lambda) {
    Rat q = weyl_dim_rat(d, lambda);
    if (!is_integer(q) || !q.get_num().fits_slong_p())
        throw Error("internal: Weyl dimension not a machine integer");
    return q.get_num().get_si();
}

// ---------------------------------------------------------------------------
// build_irrep
// ---------------------------------------------------------------------------

namespace detail {

/// Per-weight-space bookkeeping: selected basis ids, their Gram matrix under
/// the contravariant form, and its inverse (kept in lockstep).
struct WSpace {
    std::vector<int> ids;
    std::vector<std::vector<Rat>> gram;
    std::vector<std::vector<Rat>> ginv;
};

}  // namespace detail

/// Build V(lambda) exactly. Throws DimensionCapError if the Weyl dimension
/// exceeds `cap` (checked before any work).
inline WeightModule build_irrep(const DynkinDiagram& d, const Weight& lambda,
                                long cap = 5000) {
    const int n = d.rank;
    const long expected = weyl_dim(d, lambda);
    if (expected > cap)
        throw DimensionCapError("dim V(lambda) = " + std::to_string(expected) +
                                    " exceeds the cap " + std::to_string(cap),
                                expected, cap);
    const auto cart = cartan_matrix(d);

    WeightModule m;
    m.diagram = d;
    m.lambda = lambda;
    m.weights.push_back(lambda);
    m.drop.push_back(std::vector<int>(n, 0));
    m.parent.push_back(-1);
    m.parent_letter.push_back(0);

    // Operator columns under construction; packed at the end.
    std::vector<std::vector<SparseVec>> ecol(n), fcol(n);
    for (int i = 0; i < n; ++i) {
        ecol[i].emplace_back();  // E_i annihilates the highest-weight vector
        fcol[i].emplace_back();  // filled when (v0, i) is processed
    }

    std::map<Weight, detail::WSpace> spaces;
    spaces[lambda] = {{0}, {{Rat(1)}}, {{Rat(1)}}};
    std::vector<int> pos_in_space{0};

    // <basis vector u, expressed vector x>, both of weight mu.
    auto pair_with = [&](int u, const SparseVec& x, const detail::WSpace& sp) {
        Rat acc(0);
        int pu = pos_in_space[u];
        for (const auto& [id, c] : x) acc += c * sp.gram[pu][pos_in_space[id]];
        return acc;
    };

    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        const size_t before = m.weights.size();
        for (int u : frontier) {
            const Weight wu = m.weights[u];
            const auto& spu = spaces.at(wu);
            for (int i = 0; i < n; ++i) {
                // Candidate c = F_i(u), of weight mu = wt(u) - alpha_i.
                Weight mu(n);
                for (int j = 0; j < n; ++j) mu[j] = wu[j] - cart[j][i];
                detail::WSpace& sp = spaces[mu];
                const int k = static_cast<int>(sp.ids.size());

                // b_j = <F_i u, w_j> = <u, E_i w_j>.
                std::vector<Rat> b(k);
                for (int j = 0; j < k; ++j)
                    b[j] = pair_with(u, ecol[i][sp.ids[j]], spu);

                // s = <F_i u, F_i u> = <u, F_i(E_i u)> + <wt u, a_i^vee><u,u>.
                SparseVec fei;
                for (const auto& [id, c] : ecol[i][u]) vec_add(fei, fcol[i][id], c);
                Rat s = pair_with(u, fei, spu) +
                        Rat(wu[i]) * spu.gram[pos_in_space[u]][pos_in_space[u]];

                // Residual r = s - b^T G^{-1} b; a = G^{-1} b.
                std::vector<Rat> a(k, Rat(0));
                Rat r = s;
                for (int p = 0; p < k; ++p) {
                    for (int q = 0; q < k; ++q) a[p] += sp.ginv[p][q] * b[q];
                    r -= a[p] * b[p];
                }

                if (r == 0) {
                    // Dependent: F_i u = sum_j a_j w_j (exactly).
                    SparseVec dep;
                    for (int j = 0; j < k; ++j)
                        if (a[j] != 0) dep[sp.ids[j]] = a[j];
                    fcol[i][u] = std::move(dep);
                    continue;
                }

                // Select: new basis vector id = F_i u.
                const int id = static_cast<int>(m.weights.size());
                m.weights.push_back(mu);
                std::vector<int> dr = m.drop[u];
                dr[i] += 1;
                m.drop.push_back(std::move(dr));
                m.parent.push_back(u);
                m.parent_letter.push_back(i + 1);
                fcol[i][u] = SparseVec{{id, Rat(1)}};
                pos_in_space.push_back(k);

                // E_j(F_i u) = F_i(E_j u) + delta_ij <wt u, a_j^vee> u.
                for (int j = 0; j < n; ++j) {
                    SparseVec e;
                    for (const auto& [t, c] : ecol[j][u]) vec_add(e, fcol[i][t], c);
                    if (j == i && wu[i] != 0) vec_add(e, SparseVec{{u, Rat(1)}}, Rat(wu[i]));
                    ecol[j].push_back(std::move(e));
                    fcol[j].emplace_back();
                }

                // Extend Gram and its inverse by one row/column.
                for (int p = 0; p < k; ++p) {
                    sp.gram[p].push_back(b[p]);
                }
                std::vector<Rat> grow = b;
                grow.push_back(s);
                sp.gram.push_back(std::move(grow));
                // Block inverse: [[G,b],[b^T,s]]^{-1} with a = G^{-1}b, r as above.
                Rat rinv = Rat(1) / r;
                for (int p = 0; p < k; ++p)
                    for (int q = 0; q < k; ++q) sp.ginv[p][q] += a[p] * a[q] * rinv;
                for (int p = 0; p < k; ++p) sp.ginv[p].push_back(-a[p] * rinv);
                std::vector<Rat> irow(k + 1);
                for (int p = 0; p < k; ++p) irow[p] = -a[p] * rinv;
                irow[k] = rinv;
                sp.ginv.push_back(std::move(irow));
                sp.ids.push_back(id);
            }
        }
        frontier.clear();
        for (size_t t = before; t < m.weights.size(); ++t)
            frontier.push_back(static_cast<int>(t));
    }

    if (static_cast<long>(m.weights.size()) != expected)
        throw Error("internal: built dimension " + std::to_string(m.weights.size()) +
                    " does not match the Weyl dimension " + std::to_string(expected));

    const int dim = m.dim();
    m.E.assign(n, SparseQMat(dim, dim));
    m.F.assign(n, SparseQMat(dim, dim));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < dim; ++c) {
            m.E[i].col[c] = std::move(ecol[i][c]);
            m.F[i].col[c] = std::move(fcol[i][c]);
        }
    m.labels.resize(dim);
    for (int c = 0; c < dim; ++c) m.labels[c] = "v" + std::to_string(c);
    return m;
}

// ---------------------------------------------------------------------------
// Extremal lines and negative-root operators
// ---------------------------------------------------------------------------

/// Index of the basis vector spanning the lowest-weight line (weight
/// w0 * lambda). Throws MultiplicityError if that weight space is not
/// one-dimensional (it always is for an irreducible module; the check guards
/// against misuse on hand-built models).
inline int lowest_weight_line(const WeightModule& m) {
    const auto cart = cartan_matrix(m.diagram);
    Weight w = m.lambda;
    bool moved = true;
    while (moved) {  // reflect down to the antidominant chamber
        moved = false;
        for (int i = 0; i < m.diagram.rank; ++i) {
            if (w[i] > 0) {
                int wi = w[i];
                for (int j = 0; j < m.diagram.rank; ++j) w[j] -= wi * cart[j][i];
                moved = true;
            }
        }
    }
    int found = -1;
    for (int k = 0; k < m.dim(); ++k) {
        if (m.weights[k] == w) {
            if (found >= 0)
                throw MultiplicityError("lowest weight line is not one-dimensional");
            found = k;
        }
    }
    if (found < 0) throw Error("internal: lowest weight not present");
    return found;
}

/// Contragredient (dual) module on the dual basis: weights negate and each
/// generator acts by the negative transpose of its own matrix (the raising
/// operator -E^T still raises dual weights). Basis order is preserved, so
/// operator entry (r,c) of the dual is minus entry (c,r) of the original.
inline WeightModule dual_module(const WeightModule& m) {
    WeightModule out;
    out.diagram = m.diagram;
    const int dim = m.dim();
    const int rank = m.diagram.rank;
    const int hw = lowest_weight_line(m);
    out.lambda = m.weights[hw];
    for (int& x : out.lambda) x = -x;
    out.weights.resize(dim);
    for (int k = 0; k < dim; ++k) {
        out.weights[k] = m.weights[k];
        for (int& x : out.weights[k]) x = -x;
    }
    out.E.reserve(rank);
    out.F.reserve(rank);
    for (int i = 0; i < rank; ++i) {
        out.E.push_back(Rat(-1) * m.E[i].transposed());
        out.F.push_back(Rat(-1) * m.F[i].transposed());
    }
    out.labels.resize(dim);
    for (int k = 0; k < dim; ++k) out.labels[k] = m.labels[k] + "*";

    out.drop.assign(dim, std::vector<int>(rank, 0));
    for (int k = 0; k < dim; ++k) {
        Weight diff(rank);
        for (int j = 0; j < rank; ++j) diff[j] = out.lambda[j] - out.weights[k][j];
        auto q = weight_to_root_coords(m.diagram, diff);
        for (int j = 0; j < rank; ++j) {
            if (!is_integer(q[j]))
                throw ValidationError("dual module drop is not integral");
            out.drop[k][j] = static_cast<int>(q[j].get_num().get_si());
        }
    }

    out.parent.assign(dim, -1);
    out.parent_letter.assign(dim, 0);
    std::vector<int> queue{hw};
    std::vector<char> seen(dim, 0);
    seen[hw] = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int i = 0; i < rank; ++i)
            for (const auto& [t, c] : out.F[i].col[v])
                if (c != 0 && !seen[t]) {
                    seen[t] = 1;
                    out.parent[t] = v;
                    out.parent_letter[t] = i + 1;
                    queue.push_back(t);
                }
    }
    for (char s : seen)
        if (!s) throw ValidationError("dual module is not connected by lowering");
    return out;
}

/// Operator for e_{-beta} on the module, beta a positive root in simple-root
/// coordinates. For simple alpha_i this is -F_i; in general it follows the
/// structure-constant recursion through the lowest i with beta - alpha_i
/// still a positive root, so every module represents the same abstract
/// elements and compositions agree across modules. Results are memoized in
/// `cache` (one cache per module).
inline const SparseQMat& negative_root_op(
    const WeightModule& m, const ChevalleyEps& eps, const std::vector<int>& beta,
    std::map<std::vector<int>, SparseQMat>& cache) {
    auto it = cache.find(beta);
    if (it != cache.end()) return it->second;

    const int n = m.diagram.rank;
    int height = 0;
    for (int x : beta) height += x;
    if (height <= 0) throw ValidationError("negative_root_op wants a positive root");

    if (height == 1) {
        for (int i = 0; i < n; ++i)
            if (beta[i] == 1) return cache.emplace(beta, Rat(-1) * m.F[i]).first->second;
        throw ValidationError("not a root");
    }

    static thread_local std::map<std::string, std::vector<Root>> root_sets;
    std::string key = m.diagram.name();
    auto rs = root_sets.find(key);
    if (rs == root_sets.end())
        rs = root_sets.emplace(key, positive_roots(m.diagram)).first;
    auto is_root = [&](const std::vector<int>& c) {
        for (const auto& r : rs->second)
            if (r.coords == c) return true;
        return false;
    };

    for (int i = 0; i < n; ++i) {
        if (beta[i] == 0) continue;
        std::vector<int> gamma = beta;
        gamma[i] -= 1;
        if (!is_root(gamma)) continue;
        std::vector<int> alpha(n, 0);
        alpha[i] = 1;
        const SparseQMat& og = negative_root_op(m, eps, gamma, cache);
        // e_{-beta} = eps(alpha_i, gamma) [e_{-alpha_i}, e_{-gamma}], and
        // e_{-alpha_i} acts as -F_i.
        SparseQMat op = Rat(eps.eps(alpha, gamma)) *
                        (og * m.F[i] - m.F[i] * og);
        return cache.emplace(beta, std::move(op)).first->second;
    }
    throw ValidationError("not a root");
}

// ---------------------------------------------------------------------------
// Type D combinatorial models
// ---------------------------------------------------------------------------

namespace detail {

/// epsilon-basis dictionary for D_n: eps_i in omega coordinates.
inline std::vector<Weight> dn_epsilon_basis(int n) {
    std::vector<Weight> eps(n + 1, Weight(n, 0));  // 1-based
    // eps_1 = w1; eps_i = w_i - w_{i-1} (2 <= i <= n-2);
    // eps_{n-1} = w_{n-1} + w_n - w_{n-2}; eps_n = w_n - w_{n-1}.
    eps[1][0] = 1;
    for (int i = 2; i <= n - 2; ++i) {
        eps[i][i - 1] = 1;
        eps[i][i - 2] = -1;
    }
    eps[n - 1][n - 2] = 1;
    eps[n - 1][n - 1] = 1;
    if (n - 3 >= 0) eps[n - 1][n - 3] = -1;
    eps[n][n - 1] = 1;
    eps[n][n - 2] = -1;
    return eps;
}

inline Weight weight_add(const Weight& a, const Weight& b, int sb = 1) {
    Weight r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += sb * b[i];
    return r;
}

/// Finish a hand-built model: compute drops, provenance and operator
/// matrices from a transition table `act(node, basisindex) -> (target, coeff)`.
struct ModelBuilder {
    DynkinDiagram d;
    std::vector<Weight> weights;
    std::vector<std::string> labels;

    WeightModule finish(
        const std::function<std::pair<int, Rat>(int, int, bool)>& act) const {
        // act(i, k, raising): image of basis vector k under E_i (raising) or
        // F_i (lowering); target < 0 means zero.
        WeightModule m;
        m.diagram = d;
        const int dim = static_cast<int>(weights.size());
        const int n = d.rank;
        m.weights = weights;
        m.labels = labels;
        m.E.assign(n, SparseQMat(dim, dim));
        m.F.assign(n, SparseQMat(dim, dim));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < dim; ++k) {
                auto [te, ce] = act(i, k, true);
                if (te >= 0 && ce != 0) m.E[i].set(te, k, ce);
                auto [tf, cf] = act(i, k, false);
                if (tf >= 0 && cf != 0) m.F[i].set(tf, k, cf);
            }
        // Highest weight: the unique basis vector killed by every E_i.
        int hw = -1;
        for (int k = 0; k < dim; ++k) {
            bool top = true;
            for (int i = 0; i < n && top; ++i)
                if (!m.E[i].col[k].empty()) top = false;
            if (top) {
                if (hw >= 0) throw Error("internal: model has two highest vectors");
                hw = k;
            }
        }
        if (hw < 0) throw Error("internal: model has no highest vector");
        m.lambda = weights[hw];
        m.drop.resize(dim);
        for (int k = 0; k < dim; ++k) {
            Weight diff = weight_add(m.lambda, weights[k], -1);
            auto rc = weight_to_root_coords(d, diff);
            std::vector<int> dr(n);
            for (int j = 0; j < n; ++j) {
                if (!is_integer(rc[j]))
                    throw Error("internal: model weight not in the root lattice shift");
                dr[j] = static_cast<int>(rc[j].get_num().get_si());
            }
            m.drop[k] = dr;
        }
        // Provenance: BFS from the highest-weight vector along F edges whose
        // image is a single basis vector (always the case in these models).
        m.parent.assign(dim, -1);
        m.parent_letter.assign(dim, 0);
        std::vector<int> frontier{hw};
        std::vector<char> seen(dim, 0);
        seen[hw] = 1;
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int u : frontier)
                for (int i = 0; i < n; ++i)
                    for (const auto& [t, c] : m.F[i].col[u])
                        if (!seen[t]) {
                            seen[t] = 1;
                            m.parent[t] = u;
                            m.parent_letter[t] = i + 1;
                            next.push_back(t);
                        }
            frontier = next;
        }
        for (char s : seen)
            if (!s) throw Error("internal: model is not connected under lowering");
        return m;
    }
};

}  // namespace detail

/// Combinatorial models for type D_n.
///
///   "standard"            V(omega_1) on basis f_1..f_n, ph_1..ph_n
///                         (wt f_i = eps_i, wt ph_i = -eps_i).
///   "half_spinor_even"    wedge-labeled half-spinor on subsets I of [n]
///   "half_spinor_odd"     with |I| even/odd; wt(e_I) = sum_{i in I}
///                         eps~_i - omega_{n-1}, where eps~_i = eps_i for
///                         i < n and eps~_n = -eps_n. The lowering chain
///                         runs through nodes 1..n-2 then n; node n-1
///                         annihilates/creates the pair {n-1, n}.
///   "half_spinor_dual_even" / "half_spinor_dual_odd"
///                         the dual labeling ph_I (wt = omega_{n-1} -
///                         sum eps~_i), chain through nodes 1..n-2 then n;
///                         node n-1 creates the pair {n-1, n} downward.
///   "half_spinor_plain_even" / "half_spinor_plain_odd"
///                         dual labeling with the all-plain dictionary
///                         (wt = omega_n - sum_{i in I} eps_i), chain
///                         through nodes 1..n-1; node n creates the pair
///                         {n-1, n} downward.
///
/// All spinor transitions have coefficient +1 for index moves; pair
/// annihilation/creation carries the fermionic sign of removing/inserting
/// the two largest letters, which is constant and absorbed as +1.
inline WeightModule dn_exterior_model(int n, const std::string& which) {
    if (n < 4) throw ValidationError("D_n needs n >= 4");
    if (n > 9) throw ValidationError("subset labels support n <= 9");
    DynkinDiagram d = DynkinDiagram::parse("D" + std::to_string(n));
    auto eps = detail::dn_epsilon_basis(n);

    if (which == "standard") {
        detail::ModelBuilder mb;
        mb.d = d;
        for (int i = 1; i <= n; ++i) {
            mb.weights.push_back(eps[i]);
            mb.labels.push_back("f" + std::to_string(i));
        }
        for (int i = 1; i <= n; ++i) {
            Weight w(n, 0);
            w = detail::weight_add(w, eps[i], -1);
            mb.weights.push_back(w);
            mb.labels.push_back("ph" + std::to_string(i));
        }
        auto act = [n](int i, int k, bool raising) -> std::pair<int, Rat> {
            // basis: 0..n-1 = f_{k+1}; n..2n-1 = ph_{k-n+1}.
            const int node = i + 1;  // Bourbaki
            const bool isf = k < n;
            const int idx = isf ? k + 1 : k - n + 1;
            if (node <= n - 1) {
                // E: f_{i+1} -> f_i, ph_i -> -ph_{i+1}; F: transpose pattern.
                if (raising) {
                    if (isf && idx == node + 1) return {k - 1, Rat(1)};
                    if (!isf && idx == node) return {k + 1, Rat(-1)};
                } else {
                    if (isf && idx == node) return {k + 1, Rat(1)};
                    if (!isf && idx == node + 1) return {k - 1, Rat(-1)};
                }
            } else {
                // node n: E: ph_n -> f_{n-1}, ph_{n-1} -> -f_n;
                //         F: f_{n-1} -> ph_n, f_n -> -ph_{n-1}.
                if (raising) {
                    if (!isf && idx == n) return {n - 2, Rat(1)};
                    if (!isf && idx == n - 1) return {n - 1, Rat(-1)};
                } else {
                    if (isf && idx == n - 1) return {2 * n - 1, Rat(1)};
                    if (isf && idx == n) return {2 * n - 2, Rat(-1)};
                }
            }
            return {-1, Rat(0)};
        };
        return mb.finish(act);
    }

    // Spinor flavors.
    enum Flavor { WEDGE, DUAL, PLAIN };
    Flavor flavor;
    int parity;
    auto tail = [&](const std::string& base) -> int {
        if (which == base + "_even") return 0;
        if (which == base + "_odd") return 1;
        return -1;
    };
    if (int p = tail("half_spinor"); p >= 0) {
        flavor = WEDGE;
        parity = p;
    } else if (int p2 = tail("half_spinor_dual"); p2 >= 0) {
        flavor = DUAL;
        parity = p2;
    } else if (int p3 = tail("half_spinor_plain"); p3 >= 0) {
        flavor = PLAIN;
        parity = p3;
    } else {
        throw ValidationError("unknown model '" + which + "'");
    }

    // Weight dictionary.
    std::vector<Weight> tilde(n + 1);
    for (int i = 1; i <= n; ++i) tilde[i] = eps[i];
    Weight offset(n, 0);
    if (flavor == WEDGE || flavor == DUAL) {
        for (int j = 0; j < n; ++j) tilde[n][j] = -tilde[n][j];
        offset[n - 2] = 1;  // omega_{n-1}
    } else {
        offset[n - 1] = 1;  // omega_n
    }

    // Enumerate subsets of the right parity, by size then lexicographically.
    std::vector<std::vector<int>> subsets;
    for (int size = parity; size <= n; size += 2) {
        std::vector<std::vector<int>> level;
        std::vector<int> pick(size);
        std::function<void(int, int)> gen = [&](int start, int depth) {
            if (depth == size) {
                level.push_back(pick);
                return;
            }
            for (int v = start; v <= n; ++v) {
                pick[depth] = v;
                gen(v + 1, depth + 1);
            }
        };
        gen(1, 0);
        for (auto& s : level) subsets.push_back(std::move(s));
    }
    std::map<std::vector<int>, int> index;
    for (size_t k = 0; k < subsets.size(); ++k) index[subsets[k]] = static_cast<int>(k);

    detail::ModelBuilder mb;
    mb.d = d;
    for (const auto& I : subsets) {
        Weight w = offset;
        int sgn = (flavor == WEDGE) ? 1 : -1;
        if (flavor == WEDGE)
            for (size_t j = 0; j < w.size(); ++j) w[j] = -w[j];  // -omega_{n-1} + sum
        for (int i : I) w = detail::weight_add(w, tilde[i], sgn);
        mb.weights.push_back(w);
        std::string lab = (flavor == WEDGE) ? "e" : "ph";
        for (int i : I) lab += std::to_string(i);
        mb.labels.push_back(lab);
    }

    const bool pair_node_is_nm1 = (flavor != PLAIN);  // else the pair op sits at node n
    auto has = [](const std::vector<int>& I, int v) {
        return std::binary_search(I.begin(), I.end(), v);
    };
    auto moved = [&](const std::vector<int>& I, int from, int to) {
        std::vector<int> J;
        for (int v : I)
            if (v != from) J.push_back(v);
        J.push_back(to);
        std::sort(J.begin(), J.end());
        return J;
    };
    auto act = [&, n](int i, int k, bool raising) -> std::pair<int, Rat> {
        const int node = i + 1;
        const auto& I = subsets[k];
        // Label transition per node; "down" means the action of F.
        int from = 0, to = 0;
        bool pairop = false, pair_insert_down = false;
        if (node <= n - 2) {
            // F: label move node -> node+1 in WEDGE; node+1 -> node in DUAL/PLAIN.
            if (flavor == WEDGE) {
                from = node;
                to = node + 1;
            } else {
                from = node + 1;
                to = node;
            }
        } else if (pair_node_is_nm1 ? (node == n) : (node == n - 1)) {
            // The fork index-move: WEDGE F: n-1 -> n; DUAL F: n -> n-1;
            // PLAIN F (node n-1): n -> n-1.
            if (flavor == WEDGE) {
                from = n - 1;
                to = n;
            } else {
                from = n;
                to = n - 1;
            }
        } else {
            pairop = true;
            // WEDGE: F removes {n-1, n}. DUAL/PLAIN: F inserts it.
            pair_insert_down = (flavor != WEDGE);
        }

        if (!pairop) {
            if (!raising) {
                if (has(I, from) && !has(I, to)) {
                    auto J = moved(I, from, to);
                    return {index.at(J), Rat(1)};
                }
            } else {
                if (has(I, to) && !has(I, from)) {
                    auto J = moved(I, to, from);
                    return {index.at(J), Rat(1)};
                }
            }
            return {-1, Rat(0)};
        }
        const bool insert = raising ? !pair_insert_down : pair_insert_down;
        if (insert) {
            if (!has(I, n - 1) && !has(I, n)) {
                std::vector<int> J = I;
                J.push_back(n - 1);
                J.push_back(n);
                std::sort(J.begin(), J.end());
                return {index.at(J), Rat(1)};
            }
        } else {
            if (has(I, n - 1) && has(I, n)) {
                std::vector<int> J;
                for (int v : I)
                    if (v != n - 1 && v != n) J.push_back(v);
                return {index.at(J), Rat(1)};
            }
        }
        return {-1, Rat(0)};
    };
    return mb.finish(act);
}

}  // namespace dynres
