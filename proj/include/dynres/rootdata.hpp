#pragma once

// Simply-laced Dynkin diagrams (types A, D, E), Cartan matrices, positive
// roots, weights in fundamental-weight coordinates, and diagram duality.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "dynres/errors.hpp"
#include "dynres/rational.hpp"

namespace dynres {

/// Integer vector in fundamental-weight (omega) coordinates.
using Weight = std::vector<int>;

/// A root in simple-root coordinates.
struct Root {
    std::vector<int> coords;
    int height = 0;  // sum of coords

    bool operator==(const Root& o) const { return coords == o.coords; }
    bool operator<(const Root& o) const {
        if (height != o.height) return height < o.height;
        return coords < o.coords;
    }
};

/// A connected simply-laced Dynkin diagram. Nodes are addressed by their
/// Bourbaki numbers (1..rank) on the public surface and by 0-based positions
/// internally. The T-shape labels (x1, u, y1.., z1..) used throughout the
/// construction are stored as a default labeling; format entries may
/// reassign the arm roles (the two D_n formats swap the y/z arms).
struct DynkinDiagram {
    char family = 'A';  // 'A', 'D', or 'E'
    int rank = 0;
    std::vector<std::vector<int>> adj;  // adjacency lists, 0-based positions
    std::vector<std::string> tlabels;   // position -> default T-shape label

    std::string name() const { return std::string(1, family) + std::to_string(rank); }

    bool edge(int a, int b) const {
        for (int x : adj[a])
            if (x == b) return true;
        return false;
    }

    int position(int bourbaki) const {
        if (bourbaki < 1 || bourbaki > rank)
            throw ValidationError(name() + " has no vertex " + std::to_string(bourbaki));
        return bourbaki - 1;
    }

    int tlabel_position(const std::string& label) const {
        for (int i = 0; i < rank; ++i)
            if (tlabels[i] == label) return i;
        throw ValidationError(name() + " has no T-label '" + label + "'");
    }

    /// Parse a compact token like "A4", "D7", "E6".
    static DynkinDiagram parse(const std::string& token);
};

inline DynkinDiagram DynkinDiagram::parse(const std::string& token) {
    if (token.size() < 2)
        throw ValidationError("bad diagram token '" + token + "'");
    char fam = token[0];
    int n = 0;
    try {
        size_t used = 0;
        n = std::stoi(token.substr(1), &used);
        if (used + 1 != token.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw ValidationError("bad diagram token '" + token + "'");
    }
    DynkinDiagram d;
    d.family = fam;
    d.rank = n;
    d.adj.assign(n, {});
    auto link = [&](int a, int b) {  // Bourbaki numbers
        d.adj[a - 1].push_back(b - 1);
        d.adj[b - 1].push_back(a - 1);
    };
    d.tlabels.assign(n, "");
    if (fam == 'A') {
        if (n < 1) throw ValidationError("A_n needs n >= 1");
        for (int i = 1; i < n; ++i) link(i, i + 1);
        // Degenerate T-shape: x1 at the high end, no y-arm, z-arm down the chain.
        if (n >= 2) {
            d.tlabels[n - 1] = "x1";
            d.tlabels[n - 2] = "u";
            for (int k = 1; k <= n - 2; ++k) d.tlabels[n - 2 - k] = "z" + std::to_string(k);
        } else {
            d.tlabels[0] = "x1";
        }
    } else if (fam == 'D') {
        if (n < 4) throw ValidationError("D_n needs n >= 4");
        for (int i = 1; i <= n - 3; ++i) link(i, i + 1);
        link(n - 2, n - 1);
        link(n - 2, n);
        d.tlabels[n - 1] = "x1";      // vertex n
        d.tlabels[n - 3] = "u";       // vertex n-2
        d.tlabels[n - 2] = "y1";      // vertex n-1
        for (int k = 1; k <= n - 3; ++k) d.tlabels[n - 2 - k - 1] = "z" + std::to_string(k);
    } else if (fam == 'E') {
        if (n < 6 || n > 8) throw ValidationError("E_n needs n in {6,7,8}");
        link(1, 3);
        link(3, 4);
        for (int i = 4; i < n; ++i) link(i, i + 1);
        link(2, 4);
        d.tlabels[1] = "x1";  // vertex 2
        d.tlabels[3] = "u";   // vertex 4
        for (int v = 5; v <= n; ++v) d.tlabels[v - 1] = "y" + std::to_string(v - 4);
        d.tlabels[2] = "z1";  // vertex 3
        d.tlabels[0] = "z2";  // vertex 1
    } else {
        throw ValidationError("unknown family '" + std::string(1, fam) + "' (want A/D/E)");
    }
    return d;
}

/// Cartan matrix: 2 on the diagonal, -1 on edges, 0 elsewhere.
inline std::vector<std::vector<int>> cartan_matrix(const DynkinDiagram& d) {
    std::vector<std::vector<int>> a(d.rank, std::vector<int>(d.rank, 0));
    for (int i = 0; i < d.rank; ++i) {
        a[i][i] = 2;
        for (int j : d.adj[i]) a[i][j] = -1;
    }
    return a;
}

/// Exact inverse of the Cartan matrix (Gauss-Jordan over rationals).
inline std::vector<std::vector<Rat>> inverse_cartan(const DynkinDiagram& d) {
    int n = d.rank;
    auto a = cartan_matrix(d);
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = Rat(a[i][j]);
        m[i][n + i] = 1;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (m[r][col] != 0) { piv = r; break; }
        if (piv < 0) throw ValidationError("Cartan matrix is singular");
        std::swap(m[col], m[piv]);
        Rat lead = m[col][col];
        for (int j = 0; j < 2 * n; ++j) m[col][j] /= lead;
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rat f = m[r][col];
            for (int j = 0; j < 2 * n; ++j) m[r][j] -= f * m[col][j];
        }
    }
    std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
    return inv;
}

/// All positive roots in simple-root coordinates, sorted by height then
/// lexicographically. Closure of the simple roots under height-raising
/// simple reflections.
inline std::vector<Root> positive_roots(const DynkinDiagram& d) {
    int n = d.rank;
    auto a = cartan_matrix(d);
    std::map<std::vector<int>, bool> seen;
    std::vector<std::vector<int>> queue;
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        seen[e] = true;
        queue.push_back(e);
    }
    for (size_t k = 0; k < queue.size(); ++k) {
        std::vector<int> c = queue[k];
        for (int i = 0; i < n; ++i) {
            int pairing = 0;  // <alpha, alpha_i^vee>
            for (int j = 0; j < n; ++j) pairing += a[i][j] * c[j];
            std::vector<int> r = c;
            r[i] -= pairing;
            bool nonneg = true;
            for (int x : r) nonneg = nonneg && x >= 0;
            if (nonneg && !seen.count(r)) {
                seen[r] = true;
                queue.push_back(r);
            }
        }
    }
    std::vector<Root> roots;
    for (const auto& [c, _] : seen) {
        Root r;
        r.coords = c;
        r.height = 0;
        for (int x : c) r.height += x;
        roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// omega-coordinates of a root given in simple-root coordinates: A * c.
inline Weight root_to_weight(const DynkinDiagram& d, const std::vector<int>& coords) {
    auto a = cartan_matrix(d);
    Weight w(d.rank, 0);
    for (int i = 0; i < d.rank; ++i)
        for (int j = 0; j < d.rank; ++j) w[i] += a[i][j] * coords[j];
    return w;
}

/// Simple-root coordinates of a weight (exact rationals): A^{-1} * w.
inline std::vector<Rat> weight_to_root_coords(const DynkinDiagram& d, const Weight& w) {
    auto inv = inverse_cartan(d);
    std::vector<Rat> c(d.rank, Rat(0));
    for (int i = 0; i < d.rank; ++i)
        for (int j = 0; j < d.rank; ++j) c[i] += inv[i][j] * Rat(w[j]);
    return c;
}

/// Bimultiplicative asymmetry form on the root lattice and the Chevalley
/// structure constants it induces. On simple roots: eps(ai,ai) = -1,
/// eps(ai,aj) = -1 for adjacent i < j, and +1 otherwise; extended so that
/// eps(a+b,c) = eps(a,c)eps(b,c) and eps(a,b+c) = eps(a,b)eps(a,c). Then
///   [e_a, e_b] = eps(a,b) e_{a+b}   when a+b is a root,
///   [e_a, e_{-a}] = -h_a,
/// and f_i := -e_{-a_i} completes (e_i, h_i, f_i) to a standard sl2 triple.
/// Every module realizes e_{-b} consistently through this table, which is
/// what makes compositions of lowering operators agree across modules.
struct ChevalleyEps {
    std::vector<std::vector<int>> sign;  // on simple roots, by 0-based position

    explicit ChevalleyEps(const DynkinDiagram& d) {
        int n = d.rank;
        sign.assign(n, std::vector<int>(n, 1));
        for (int i = 0; i < n; ++i) {
            sign[i][i] = -1;
            for (int j : d.adj[i])
                if (i < j) sign[i][j] = -1;
        }
    }

    /// eps(a, b) for arbitrary lattice vectors in simple-root coordinates.
    int eps(const std::vector<int>& a, const std::vector<int>& b) const {
        int s = 1;
        int n = static_cast<int>(sign.size());
        for (int i = 0; i < n; ++i) {
            if (a[i] % 2 == 0) continue;
            for (int j = 0; j < n; ++j)
                if (b[j] % 2 != 0 && sign[i][j] < 0) s = -s;
        }
        return s;
    }
};

/// Image of vertex v (Bourbaki) under the diagram automorphism induced by
/// -w0. Computed directly: walk omega_v down to the antidominant chamber by
/// simple reflections; the result is -omega_{v*}.
inline int dual_vertex(const DynkinDiagram& d, int v) {
    int n = d.rank;
    int pos = d.position(v);
    auto a = cartan_matrix(d);
    Weight w(n, 0);
    w[pos] = 1;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i = 0; i < n; ++i) {
            if (w[i] > 0) {
                int wi = w[i];
                for (int j = 0; j < n; ++j) w[j] -= wi * a[j][i];
                moved = true;
            }
        }
    }
    int result = -1;
    for (int i = 0; i < n; ++i) {
        if (w[i] == -1 && result < 0)
            result = i;
        else if (w[i] != 0)
            throw Error("internal: -w0(omega) is not minus a fundamental weight");
    }
    return result + 1;
}

}  // namespace dynres
