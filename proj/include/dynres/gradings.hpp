#pragma once

// Graded decompositions of weight modules relative to marked diagram nodes,
// nilpotent radicals with their coordinate rings, Levi structure constants on
// the radical, wedge-indexed variable naming, and the induced derivations on
// the coordinate ring.

#include "dynres/polyring.hpp"
#include "dynres/repbuilder.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dynres {

inline long floor_rat(const Rat& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!r.fits_slong_p()) throw ValidationError("floor_rat: out of range");
    return r.get_si();
}

// ---------------------------------------------------------------------------
// Graded decomposition
// ---------------------------------------------------------------------------

struct GradedComponent {
    std::vector<long> degree;   // one entry per grading vertex
    std::vector<int> members;   // basis indices, ascending
    int dim() const { return static_cast<int>(members.size()); }
};

struct GradedDecomposition {
    std::vector<int> vertices;                // Bourbaki labels of the grading set
    std::vector<GradedComponent> components;  // ascending lexicographic degree
    int component_of(int basis_index) const {
        for (int c = 0; c < static_cast<int>(components.size()); ++c)
            for (int b : components[c].members)
                if (b == basis_index) return c;
        return -1;
    }
};

// Degrees are the marked-coordinate entries of each weight written in the
// basis of simple roots, shifted down to the nearest integer vector so that
// fractional offsets (possible for spin-type highest weights) cancel.
inline GradedDecomposition decompose(const WeightModule& m, const std::vector<int>& vertices) {
    if (vertices.empty()) throw ValidationError("decompose: empty vertex set");
    GradedDecomposition dec;
    dec.vertices = vertices;
    std::vector<int> pos;
    for (int v : vertices) pos.push_back(m.diagram.position(v));
    std::vector<Rat> qlam = weight_to_root_coords(m.diagram, m.lambda);
    std::vector<long> base;
    for (int p : pos) base.push_back(floor_rat(qlam[p]));
    std::map<std::vector<long>, std::vector<int>> buckets;
    for (int k = 0; k < m.dim(); ++k) {
        std::vector<long> deg(pos.size());
        for (size_t j = 0; j < pos.size(); ++j) deg[j] = base[j] - m.drop[k][pos[j]];
        buckets[deg].push_back(k);
    }
    for (auto& [deg, mem] : buckets) dec.components.push_back(GradedComponent{deg, mem});
    return dec;
}

// ---------------------------------------------------------------------------
// Exact linear algebra helpers (row echelon over sparse rational vectors)
// ---------------------------------------------------------------------------

namespace detail {

struct RowEchelon {
    std::map<int, SparseVec> rows;  // pivot column -> row, pivot coefficient 1

    // Reduce v against stored rows; if a remainder survives, store it.
    bool add(SparseVec v) {
        while (!v.empty()) {
            int p = v.begin()->first;
            auto it = rows.find(p);
            if (it == rows.end()) {
                Rat lead = v.begin()->second;
                for (auto& [c, q] : v) q /= lead;
                rows.emplace(p, std::move(v));
                return true;
            }
            vec_add(v, it->second, -v.begin()->second);
        }
        return false;
    }
    int rank() const { return static_cast<int>(rows.size()); }
};

// Solution basis of the homogeneous system given by equation rows over
// columns 0..ncols-1.
inline std::vector<SparseVec> kernel_basis(const std::vector<SparseVec>& eqs, int ncols) {
    RowEchelon ech;
    for (const auto& e : eqs) ech.add(e);
    std::set<int> pivots;
    for (auto& [p, row] : ech.rows) pivots.insert(p);
    std::vector<SparseVec> out;
    for (int f = 0; f < ncols; ++f) {
        if (pivots.count(f)) continue;
        SparseVec sol;
        sol[f] = 1;
        // Walk pivots from the largest down; every later column is settled.
        for (auto it = ech.rows.rbegin(); it != ech.rows.rend(); ++it) {
            const int p = it->first;
            Rat acc = 0;
            for (const auto& [c, q] : it->second) {
                if (c == p) continue;
                auto sc = sol.find(c);
                if (sc != sol.end()) acc += q * sc->second;
            }
            if (acc != 0) sol[p] = -acc;
        }
        out.push_back(std::move(sol));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Component inspection
// ---------------------------------------------------------------------------

struct ComponentView {
    int comp = -1;
    std::vector<int> members;
    Weight levi_weight;         // marked coordinates zeroed
    bool unique_highest = true; // highest-line space is one-dimensional
};

namespace detail {

// Vectors in the component annihilated by every raising operator outside the
// marked set, as coordinates over `members`.
inline std::vector<SparseVec> component_highest_space(const WeightModule& m,
                                                      const GradedDecomposition& dec,
                                                      int comp) {
    const auto& mem = dec.components[comp].members;
    std::map<int, int> colof;
    for (size_t j = 0; j < mem.size(); ++j) colof[mem[j]] = static_cast<int>(j);
    std::set<int> marked;
    for (int v : dec.vertices) marked.insert(m.diagram.position(v));
    std::vector<SparseVec> eqs;
    for (int i = 0; i < m.diagram.rank; ++i) {
        if (marked.count(i)) continue;
        // Equations indexed by target basis vector: sum_j c_j E_i[target][j] = 0.
        std::map<int, SparseVec> byTarget;
        for (size_t j = 0; j < mem.size(); ++j)
            for (const auto& [target, q] : m.E[i].col[mem[j]])
                byTarget[target][static_cast<int>(j)] = q;
        for (auto& [t, row] : byTarget) eqs.push_back(std::move(row));
    }
    return detail::kernel_basis(eqs, static_cast<int>(mem.size()));
}

inline ComponentView component_view(const WeightModule& m, const GradedDecomposition& dec,
                                    int comp) {
    ComponentView cv;
    cv.comp = comp;
    cv.members = dec.components[comp].members;
    auto ker = component_highest_space(m, dec, comp);
    if (ker.empty()) throw ValidationError("component has no highest line");
    cv.unique_highest = ker.size() == 1;
    int rep = cv.members[ker.front().begin()->first];
    cv.levi_weight = m.weights[rep];
    for (int v : dec.vertices) cv.levi_weight[m.diagram.position(v)] = 0;
    return cv;
}

}  // namespace detail

inline ComponentView top_component(const WeightModule& m, const GradedDecomposition& dec) {
    return detail::component_view(m, dec, static_cast<int>(dec.components.size()) - 1);
}

inline ComponentView bottom_component(const WeightModule& m, const GradedDecomposition& dec) {
    return detail::component_view(m, dec, 0);
}

// The non-marked generators reach the whole component from any single vector.
inline bool component_irreducible(const WeightModule& m, const GradedDecomposition& dec,
                                  int comp) {
    const auto& mem = dec.components[comp].members;
    const int n = static_cast<int>(mem.size());
    std::map<int, int> colof;
    for (int j = 0; j < n; ++j) colof[mem[j]] = j;
    std::set<int> marked;
    for (int v : dec.vertices) marked.insert(m.diagram.position(v));

    auto apply = [&](const SparseQMat& op, const SparseVec& v) {
        SparseVec out;
        for (const auto& [j, q] : v)
            for (const auto& [target, a] : op.col[mem[j]]) {
                auto it = colof.find(target);
                if (it == colof.end())
                    throw ValidationError("graded component not stable under subalgebra");
                Rat& slot = out[it->second];
                slot += q * a;
                if (slot == 0) out.erase(it->second);
            }
        return out;
    };

    detail::RowEchelon span;
    std::vector<SparseVec> queue;
    SparseVec seed;
    seed[0] = 1;
    span.add(seed);
    queue.push_back(seed);
    while (!queue.empty() && span.rank() < n) {
        SparseVec v = queue.back();
        queue.pop_back();
        for (int i = 0; i < m.diagram.rank && span.rank() < n; ++i) {
            if (marked.count(i)) continue;
            for (const SparseQMat* op : {&m.E[i], &m.F[i]}) {
                SparseVec w = apply(*op, v);
                if (!w.empty() && span.add(w)) queue.push_back(w);
            }
        }
    }
    return span.rank() == n;
}

// ---------------------------------------------------------------------------
// Nilpotent radical of a single marked node, with its coordinate ring
// ---------------------------------------------------------------------------

struct NilVar {
    std::vector<int> root;  // positive root, simple-root coordinates
    std::string name;
    int coarse = 1;         // marked coordinate of the root
    Rat scale = 1;          // basis normalization carried by this coordinate
};

struct Nilradical {
    DynkinDiagram diagram;
    int vertex = 0;  // Bourbaki label
    std::vector<NilVar> vars;
    RingPtr ring;
};

namespace detail {

inline RingPtr nil_ring(const Nilradical& nil) {
    std::vector<std::string> names;
    std::vector<std::vector<int>> degrees;
    std::vector<int> coarse;
    for (const auto& v : nil.vars) {
        names.push_back(v.name);
        degrees.push_back(v.root);
        coarse.push_back(v.coarse);
    }
    return make_ring(nil.diagram.rank, names, degrees, coarse);
}

}  // namespace detail

inline Nilradical nilradical(const DynkinDiagram& d, int vertex) {
    const int tpos = d.position(vertex);
    Nilradical nil;
    nil.diagram = d;
    nil.vertex = vertex;
    auto roots = positive_roots(d);
    for (size_t k = 0; k < roots.size(); ++k) {
        if (roots[k].coords[tpos] == 0) continue;
        NilVar v;
        v.root = roots[k].coords;
        v.coarse = roots[k].coords[tpos];
        v.name = "u" + std::to_string(k + 1);
        nil.vars.push_back(std::move(v));
    }
    std::sort(nil.vars.begin(), nil.vars.end(), [](const NilVar& a, const NilVar& b) {
        if (a.coarse != b.coarse) return a.coarse < b.coarse;
        return Root{a.root, 0} < Root{b.root, 0};
    });
    nil.ring = detail::nil_ring(nil);
    return nil;
}

// ---------------------------------------------------------------------------
// Structure constants of the Levi action on the radical
// ---------------------------------------------------------------------------

struct NilStructure {
    // adE[i] column v: coordinates of [e_i, e_{-beta_v}]; adF[i] likewise for f_i.
    // Index i is the 0-based node position; the marked node's slots stay empty.
    std::vector<SparseQMat> adE, adF;
    std::vector<std::vector<int>> adH;  // adH[i][v] = pairing of -beta_v with alpha_i
};

namespace detail {

// Smallest faithful fundamental module, used to read off structure constants.
inline int faithful_vertex(const DynkinDiagram& d) {
    int best = 1;
    Rat bestDim = -1;
    for (int v = 1; v <= d.rank; ++v) {
        Weight w(d.rank, 0);
        w[d.position(v)] = 1;
        Rat dim = weyl_dim_rat(d, w);
        if (bestDim < 0 || dim < bestDim) {
            bestDim = dim;
            best = v;
        }
    }
    return best;
}

}  // namespace detail

inline NilStructure nil_structure(const DynkinDiagram& d, const Nilradical& nil) {
    const int n = d.rank;
    const int nv = static_cast<int>(nil.vars.size());
    const int tpos = d.position(nil.vertex);

    Weight fw(n, 0);
    fw[d.position(detail::faithful_vertex(d))] = 1;
    WeightModule probe = build_irrep(d, fw, 100000);
    ChevalleyEps eps(d);
    std::map<std::vector<int>, SparseQMat> cache;
    std::vector<const SparseQMat*> ops(nv);
    for (int v = 0; v < nv; ++v)
        ops[v] = &negative_root_op(probe, eps, nil.vars[v].root, cache);

    std::map<std::vector<int>, int> varof;
    for (int v = 0; v < nv; ++v) varof[nil.vars[v].root] = v;

    auto cartan = cartan_matrix(d);
    NilStructure ns;
    ns.adE.assign(n, SparseQMat(0, 0));
    ns.adF.assign(n, SparseQMat(0, 0));
    ns.adH.assign(n, std::vector<int>(nv, 0));

    auto match = [&](const SparseQMat& bracket, const std::vector<int>& target) {
        // bracket must be an exact multiple of the operator of -target.
        auto it = varof.find(target);
        if (it == varof.end()) {
            if (!bracket.is_zero())
                throw ValidationError("structure constant outside the radical");
            return std::pair<int, Rat>{-1, 0};
        }
        const SparseQMat& base = *ops[it->second];
        Rat c = 0;
        for (int col = 0; col < base.cols && c == 0; ++col)
            if (!base.col[col].empty()) {
                auto bc = bracket.col[col].find(base.col[col].begin()->first);
                if (bc == bracket.col[col].end()) {
                    if (!bracket.is_zero())
                        throw ValidationError("structure constant mismatch");
                    return std::pair<int, Rat>{-1, 0};
                }
                c = bc->second / base.col[col].begin()->second;
            }
        if (!(bracket - c * base).is_zero())
            throw ValidationError("bracket is not a multiple of a root operator");
        return std::pair<int, Rat>{it->second, c};
    };

    for (int i = 0; i < n; ++i) {
        for (int v = 0; v < nv; ++v) {
            int pair = 0;
            for (int j = 0; j < n; ++j) pair += cartan[i][j] * nil.vars[v].root[j];
            ns.adH[i][v] = -pair;
        }
        if (i == tpos) continue;
        ns.adE[i] = SparseQMat(nv, nv);
        ns.adF[i] = SparseQMat(nv, nv);
        for (int v = 0; v < nv; ++v) {
            const auto& beta = nil.vars[v].root;
            {
                SparseQMat br = SparseQMat::commutator(probe.E[i], *ops[v]);
                std::vector<int> gamma = beta;
                gamma[i] -= 1;
                auto [u, c] = match(br, gamma);
                if (u >= 0 && c != 0) ns.adE[i].set(u, v, c);
            }
            {
                SparseQMat br = SparseQMat::commutator(probe.F[i], *ops[v]);
                std::vector<int> gamma = beta;
                gamma[i] += 1;
                auto [u, c] = match(br, gamma);
                if (u >= 0 && c != 0) ns.adF[i].set(u, v, c);
            }
        }
    }
    return ns;
}

// ---------------------------------------------------------------------------
// Subset transport along a chain of nodes (wedge combinatorics)
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<int> mask_labels(uint32_t mask) {
    std::vector<int> out;
    for (int b = 0; b < 32; ++b)
        if (mask & (1u << b)) out.push_back(b + 1);
    return out;
}

// Walk every size-k subset of {1..m} starting from {1..k}, replacing one
// label l by l+1 at a time. apply_f(chain_index, state) produces the next
// state; revisits must agree exactly (checked through `equal`).
template <class State, class ApplyF, class Equal>
std::map<uint32_t, State> wedge_transport(int m, int k, const State& init, ApplyF&& apply_f,
                                          Equal&& equal) {
    if (k < 0 || k > m) throw ValidationError("wedge_transport: bad subset size");
    uint32_t start = (k == 0) ? 0u : ((1u << k) - 1u);
    std::map<uint32_t, State> assigned;
    assigned.emplace(start, init);
    std::vector<uint32_t> queue{start};
    while (!queue.empty()) {
        uint32_t mask = queue.back();
        queue.pop_back();
        for (int l = 1; l < m; ++l) {
            uint32_t lo = 1u << (l - 1), hi = 1u << l;
            if (!(mask & lo) || (mask & hi)) continue;
            uint32_t next = (mask & ~lo) | hi;
            State s = apply_f(l - 1, assigned.at(mask));
            auto it = assigned.find(next);
            if (it == assigned.end()) {
                assigned.emplace(next, std::move(s));
                queue.push_back(next);
            } else if (!equal(it->second, s)) {
                throw ValidationError("wedge transport inconsistent");
            }
        }
    }
    return assigned;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Wedge-indexed variable naming on a nilradical
// ---------------------------------------------------------------------------

struct WedgePattern {
    std::string prefix;
    int size = 0;        // wedge degree
    Rat comp_scale = 1;  // uniform rescaling of this component
};

struct WedgeNaming {
    std::vector<int> chain;           // Bourbaki nodes in lowering order
    bool printed_descending = false;  // printed label = m+1-position if set
    std::map<int, WedgePattern> by_coarse;
};

// Names the variables of each coarse component after a wedge power of the
// chain's standard module, transporting scales from the highest vector.
// Re-sorts the variables into print order and permutes `ns` along with them.
inline void apply_naming(Nilradical& nil, NilStructure& ns, const WedgeNaming& wn) {
    const DynkinDiagram& d = nil.diagram;
    const int m = static_cast<int>(wn.chain.size()) + 1;
    const int tpos = d.position(nil.vertex);

    std::vector<std::vector<int>> labelOf(nil.vars.size());
    for (const auto& [coarse, pat] : wn.by_coarse) {
        std::vector<int> members;
        for (size_t v = 0; v < nil.vars.size(); ++v)
            if (nil.vars[v].coarse == coarse) members.push_back(static_cast<int>(v));
        mpz_class expect;
        mpz_bin_uiui(expect.get_mpz_t(), m, pat.size);
        if (expect != static_cast<long>(members.size()))
            throw ValidationError("wedge pattern size does not match component dimension");

        // Highest vector of the component: killed by every unmarked raising op.
        int hw = -1;
        for (int v : members) {
            bool killed = true;
            for (int i = 0; i < d.rank && killed; ++i) {
                if (i == tpos) continue;
                if (!ns.adE[i].col[v].empty()) killed = false;
            }
            if (killed) {
                if (hw >= 0) throw ValidationError("component has several highest roots");
                hw = v;
            }
        }
        if (hw < 0) throw ValidationError("component has no highest root");

        using State = std::pair<int, Rat>;  // (variable index, coefficient)
        auto apply_f = [&](int chainIndex, const State& s) {
            int node = d.position(wn.chain[chainIndex]);
            const auto& colv = ns.adF[node].col[s.first];
            if (colv.size() != 1)
                throw ValidationError("lowering does not act simply on the component");
            return State{colv.begin()->first, s.second * colv.begin()->second};
        };
        auto equal = [](const State& a, const State& b) {
            return a.first == b.first && a.second == b.second;
        };
        auto assigned = detail::wedge_transport<State>(m, pat.size, State{hw, 1}, apply_f, equal);

        std::set<int> seen;
        for (const auto& [mask, st] : assigned) {
            auto [v, c] = st;
            if (!seen.insert(v).second)
                throw ValidationError("wedge transport hit a variable twice");
            std::vector<int> printed;
            for (int l : detail::mask_labels(mask))
                printed.push_back(wn.printed_descending ? m + 1 - l : l);
            std::sort(printed.begin(), printed.end());
            std::string name = pat.prefix;
            if (pat.size < m)
                for (int l : printed) {
                    if (l > 9) throw ValidationError("wedge label exceeds one digit");
                    name += static_cast<char>('0' + l);
                }
            nil.vars[v].name = name;
            nil.vars[v].scale = c * pat.comp_scale;
            labelOf[v] = printed;
        }
        if (static_cast<int>(seen.size()) != static_cast<int>(members.size()))
            throw ValidationError("wedge transport missed part of the component");
    }

    std::vector<int> order(nil.vars.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (nil.vars[a].coarse != nil.vars[b].coarse)
            return nil.vars[a].coarse < nil.vars[b].coarse;
        const bool na = !labelOf[a].empty(), nb = !labelOf[b].empty();
        if (na != nb) return nb;  // unnamed variables keep root order, first
        if (na && labelOf[a] != labelOf[b]) return labelOf[a] < labelOf[b];
        return Root{nil.vars[a].root, 0} < Root{nil.vars[b].root, 0};
    });
    std::vector<NilVar> sorted;
    for (int i : order) sorted.push_back(nil.vars[i]);
    nil.vars = std::move(sorted);
    nil.ring = detail::nil_ring(nil);

    // Keep the structure constants aligned with the new variable order.
    const int nv = static_cast<int>(order.size());
    std::vector<int> pos(nv);  // new index of each old variable
    for (int i = 0; i < nv; ++i) pos[order[i]] = i;
    auto permute = [&](SparseQMat& mat) {
        if (mat.cols == 0) return;  // marked node: left empty
        SparseQMat re(nv, nv);
        for (int v = 0; v < nv; ++v)
            for (const auto& [u, c] : mat.col[v]) re.col[pos[v]][pos[u]] = c;
        mat = std::move(re);
    };
    for (auto& mat : ns.adE) permute(mat);
    for (auto& mat : ns.adF) permute(mat);
    for (auto& diag : ns.adH) {
        std::vector<int> re(nv);
        for (int v = 0; v < nv; ++v) re[pos[v]] = diag[v];
        diag = std::move(re);
    }
}

// ---------------------------------------------------------------------------
// Derivations of the coordinate ring induced by Levi generators
// ---------------------------------------------------------------------------

// Image of each variable under the derivation dual to the generator's action
// on the radical (node is a Bourbaki label; raising selects e vs f).
inline std::vector<SparsePoly> ring_derivation(const Nilradical& nil, const NilStructure& ns,
                                               int node, bool raising) {
    const int i = nil.diagram.position(node);
    const SparseQMat& ad = raising ? ns.adE[i] : ns.adF[i];
    const int nv = static_cast<int>(nil.vars.size());
    std::vector<SparsePoly> out(nv, SparsePoly::zero(nil.ring));
    if (ad.cols == 0) throw ValidationError("ring_derivation: marked node");
    for (int s = 0; s < nv; ++s) {
        SparsePoly img = SparsePoly::zero(nil.ring);
        // D(x_s) = -sum_t A_{s,t} x_t where g.Phi_t = sum_s A_{s,t} Phi_s.
        for (int t = 0; t < nv; ++t) {
            auto it = ad.col[t].find(s);
            if (it == ad.col[t].end()) continue;
            Rat a = nil.vars[t].scale * it->second / nil.vars[s].scale;
            img -= SparsePoly::variable(nil.ring, t, a);
        }
        out[s] = img;
    }
    return out;
}

inline SparsePoly apply_derivation(const std::vector<SparsePoly>& der, const SparsePoly& f) {
    SparsePoly out = SparsePoly::zero(f.ring);
    for (size_t v = 0; v < der.size(); ++v) {
        if (der[v].is_zero()) continue;
        out += der[v] * f.derivative(static_cast<int>(v));
    }
    return out;
}

}  // namespace dynres
