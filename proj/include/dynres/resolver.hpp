#pragma once

// Assembly of the graded free complexes: a generic nilpotent element of a
// marked radical acts on weight modules, its exponential carries the top
// graded component onto the rest of the module, and projecting onto the
// bottom component yields the bounded differentials.  Both complex families
// are built here, together with minimization, linear sections, and the
// distinguished invariant read off the last differential.

#include "dynres/gradings.hpp"
#include "dynres/polyring.hpp"
#include "dynres/weyl.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dynres {

constexpr long kDefaultDimCap = 1000;

// ---------------------------------------------------------------------------
// Generic element of a nilpotent radical
// ---------------------------------------------------------------------------

struct GenericNilpotent {
    Nilradical nil;
    NilStructure ns;
};

inline GenericNilpotent make_generic(const DynkinDiagram& d, int vertex,
                                     const WedgeNaming* naming = nullptr) {
    GenericNilpotent gen;
    gen.nil = nilradical(d, vertex);
    gen.ns = nil_structure(d, gen.nil);
    if (naming != nullptr) apply_naming(gen.nil, gen.ns, *naming);
    return gen;
}

// ---------------------------------------------------------------------------
// Action of the generic element on a module
// ---------------------------------------------------------------------------

// sigma(x) = sum_v x_v * ops[v], one scaled root operator per ring variable.
struct ModuleAction {
    const WeightModule* module = nullptr;
    RingPtr ring;
    std::vector<SparseQMat> ops;
};

inline ModuleAction module_action(const WeightModule& m, const GenericNilpotent& gen) {
    if (m.diagram.name() != gen.nil.diagram.name())
        throw ValidationError("module_action: module and radical live on different diagrams");
    ModuleAction act;
    act.module = &m;
    act.ring = gen.nil.ring;
    ChevalleyEps eps(m.diagram);
    std::map<std::vector<int>, SparseQMat> cache;
    for (const auto& v : gen.nil.vars)
        act.ops.push_back(v.scale * negative_root_op(m, eps, v.root, cache));
    return act;
}

// Polynomial-valued vectors over the module basis.
using PolyVec = std::map<int, SparsePoly>;

inline PolyVec sigma_image(const ModuleAction& act, const PolyVec& in) {
    PolyVec out;
    for (const auto& [k, p] : in) {
        if (p.is_zero()) continue;
        for (size_t v = 0; v < act.ops.size(); ++v) {
            const auto& col = act.ops[v].col[k];
            if (col.empty()) continue;
            SparsePoly xp = SparsePoly::variable(act.ring, static_cast<int>(v)) * p;
            for (const auto& [target, c] : col) {
                auto it = out.find(target);
                if (it == out.end()) it = out.emplace(target, SparsePoly::zero(act.ring)).first;
                it->second += xp * c;
            }
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

// exp(sigma) applied to a constant vector; terminates because sigma strictly
// lowers the coarse grading.
inline PolyVec exp_image(const ModuleAction& act, const SparseVec& start) {
    PolyVec acc, cur;
    for (const auto& [k, c] : start) {
        cur[k] = SparsePoly::constant(act.ring, c);
        acc[k] = cur[k];
    }
    for (long s = 1; !cur.empty(); ++s) {
        cur = sigma_image(act, cur);
        const Rat inv = Rat(1) / Rat(s);
        for (auto& [k, p] : cur) {
            p = p * inv;
            auto it = acc.find(k);
            if (it == acc.end())
                acc.emplace(k, p);
            else
                it->second += p;
        }
    }
    for (auto it = acc.begin(); it != acc.end();)
        it = it->second.is_zero() ? acc.erase(it) : std::next(it);
    return acc;
}

// Full matrix of exp(sigma) in the module basis.
inline PolyMatrix exp_action(const WeightModule& m, const GenericNilpotent& gen) {
    ModuleAction act = module_action(m, gen);
    PolyMatrix out(act.ring, m.dim(), m.dim());
    for (int j = 0; j < m.dim(); ++j) {
        PolyVec col = exp_image(act, SparseVec{{j, Rat(1)}});
        for (auto& [i, p] : col) out.set(i, j, std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Slot bases: ordered bases of graded components
// ---------------------------------------------------------------------------

struct SlotSpec {
    // Transported mode: the slot is a wedge power of the chain's standard
    // module inside the component, its basis carried from the highest vector
    // by the chain's lowering operators (each move has coefficient one).
    std::vector<int> chain;  // Bourbaki nodes in lowering order
    int wedge = 0;           // subset size; 0 with an empty chain = 1-dim slot
    bool reverse = false;    // list in reverse label order
    bool alternate = false;  // alternating sign along the transport depth
    // Model mode: explicit labelled basis vectors (combinatorial models).
    std::vector<std::pair<std::string, Rat>> labels;
    // Optional extra per-vector scaling, applied last.
    std::vector<Rat> scales;
};

namespace detail {

inline std::vector<std::vector<Rat>> invert_dense(std::vector<std::vector<Rat>> a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, 0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n && piv < 0; ++r)
            if (a[r][col] != 0) piv = r;
        if (piv < 0) throw ValidationError("invert_dense: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const Rat dv = a[col][col];
        for (int j = 0; j < n; ++j) {
            a[col][j] /= dv;
            inv[col][j] /= dv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rat f = a[r][col];
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

// Subset masks of the transport in listing order, with their sign under the
// alternating convention (depth measured from the initial subset).
inline std::vector<std::pair<uint32_t, int>> slot_order(const std::vector<uint32_t>& masks,
                                                        int wedge, bool reverse, bool alternate) {
    std::vector<std::pair<std::vector<int>, uint32_t>> sorted;
    for (uint32_t mask : masks) sorted.push_back({mask_labels(mask), mask});
    std::sort(sorted.begin(), sorted.end());
    if (reverse) std::reverse(sorted.begin(), sorted.end());
    const long base = static_cast<long>(wedge) * (wedge + 1) / 2;
    std::vector<std::pair<uint32_t, int>> out;
    for (const auto& [labels, mask] : sorted) {
        long depth = -base;
        for (int l : labels) depth += l;
        out.push_back({mask, (alternate && (depth & 1)) ? -1 : 1});
    }
    return out;
}

}  // namespace detail

// Ordered basis of the slot inside a graded component, as sparse vectors over
// the module basis.
inline std::vector<SparseVec> slot_basis(const WeightModule& m, const std::vector<int>& marked,
                                         const GradedComponent& comp, const SlotSpec& spec) {
    std::vector<SparseVec> out;
    if (!spec.labels.empty()) {
        if (m.labels.size() != static_cast<size_t>(m.dim()))
            throw ValidationError("slot: labelled basis requested on an unlabelled module");
        std::map<std::string, int> at;
        for (int k : comp.members) at[m.labels[k]] = k;
        for (const auto& [label, c] : spec.labels) {
            auto it = at.find(label);
            if (it == at.end()) throw ValidationError("slot label not in component: " + label);
            out.push_back(SparseVec{{it->second, c}});
        }
    } else {
        const int mm = static_cast<int>(spec.chain.size()) + 1;
        const int k = spec.wedge;
        std::set<int> markedPos;
        for (int v : marked) markedPos.insert(m.diagram.position(v));
        const int headPos = (k >= 1 && k <= static_cast<int>(spec.chain.size()))
                                ? m.diagram.position(spec.chain[k - 1])
                                : -1;
        std::vector<int> cands;
        for (int idx : comp.members) {
            bool ok = true;
            for (int p = 0; p < m.diagram.rank && ok; ++p) {
                if (markedPos.count(p)) continue;
                if (m.weights[idx][p] != (p == headPos ? 1 : 0)) ok = false;
            }
            if (ok) cands.push_back(idx);
        }
        if (cands.empty()) throw ValidationError("slot: no highest-weight candidate");
        SparseVec hw;
        if (cands.size() == 1) {
            hw[cands[0]] = 1;
        } else {
            std::map<int, int> colof;
            for (size_t j = 0; j < cands.size(); ++j) colof[cands[j]] = static_cast<int>(j);
            std::vector<SparseVec> eqs;
            for (int i = 0; i < m.diagram.rank; ++i) {
                if (markedPos.count(i)) continue;
                std::map<int, SparseVec> byTarget;
                for (size_t j = 0; j < cands.size(); ++j)
                    for (const auto& [target, q] : m.E[i].col[cands[j]])
                        byTarget[target][static_cast<int>(j)] = q;
                for (auto& [t, row] : byTarget) eqs.push_back(std::move(row));
            }
            auto ker = detail::kernel_basis(eqs, static_cast<int>(cands.size()));
            if (ker.size() != 1) throw ValidationError("slot: highest space is not a line");
            for (const auto& [j, c] : ker.front()) hw[cands[j]] = c;
        }
        const Rat lead = hw.begin()->second;
        for (auto& [idx, c] : hw) c /= lead;

        auto apply_f = [&](int ci, const SparseVec& v) {
            const SparseQMat& F = m.F[m.diagram.position(spec.chain[ci])];
            SparseVec next;
            for (const auto& [idx, c] : v)
                for (const auto& [tgt, q] : F.col[idx]) next[tgt] += c * q;
            for (auto it = next.begin(); it != next.end();)
                it = (it->second == 0) ? next.erase(it) : std::next(it);
            if (next.empty()) throw ValidationError("slot transport hit zero");
            return next;
        };
        auto eq = [](const SparseVec& x, const SparseVec& y) { return x == y; };
        auto got = detail::wedge_transport(mm, k, hw, apply_f, eq);
        std::vector<uint32_t> masks;
        for (const auto& [mask, vec] : got) masks.push_back(mask);
        for (const auto& [mask, sign] : detail::slot_order(masks, k, spec.reverse, spec.alternate)) {
            SparseVec v = got.at(mask);
            if (sign < 0)
                for (auto& [idx, c] : v) c = -c;
            out.push_back(std::move(v));
        }
    }
    if (!spec.scales.empty()) {
        if (spec.scales.size() != out.size())
            throw ValidationError("slot: scale list does not match the slot size");
        for (size_t i = 0; i < out.size(); ++i)
            for (auto& [idx, c] : out[i]) c *= spec.scales[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bounded differentials
// ---------------------------------------------------------------------------

struct DifferentialPlan {
    int module_vertex = 0;   // the carrying module is the fundamental one here
    std::string model;       // combinatorial model name instead, when nonempty
    int top_vertex = 0;      // grading whose top component is included
    int bottom_vertex = 0;   // grading whose bottom component is projected onto
    SlotSpec top, bottom;
    bool transpose = false;  // build the stated map, then transpose
};

inline WeightModule plan_module(const DynkinDiagram& d, const DifferentialPlan& plan, long cap) {
    if (!plan.model.empty()) return dn_exterior_model(d.rank, plan.model);
    Weight lam(d.rank, 0);
    lam[d.position(plan.module_vertex)] = 1;
    return build_irrep(d, lam, cap);
}

// Matrix of (project onto the span of `bots`) o exp(sigma) o (include `tops`),
// rows over the bottom slot, columns over the top slot.
inline PolyMatrix differential_between(const ModuleAction& act, const std::vector<SparseVec>& tops,
                                       const std::vector<int>& bottomMembers,
                                       const std::vector<SparseVec>& bots) {
    const int nb = static_cast<int>(bots.size());
    if (static_cast<int>(bottomMembers.size()) != nb)
        throw ValidationError("differential: bottom slot must fill its component");
    std::map<int, int> rowof;
    for (int r = 0; r < nb; ++r) rowof[bottomMembers[r]] = r;
    std::vector<std::vector<Rat>> W(nb, std::vector<Rat>(nb, 0));
    for (int c = 0; c < nb; ++c)
        for (const auto& [idx, q] : bots[c]) {
            auto it = rowof.find(idx);
            if (it == rowof.end())
                throw ValidationError("differential: bottom slot leaves its component");
            W[it->second][c] = q;
        }
    const auto Winv = detail::invert_dense(W);
    PolyMatrix out(act.ring, nb, static_cast<int>(tops.size()));
    for (int j = 0; j < static_cast<int>(tops.size()); ++j) {
        PolyVec img = exp_image(act, tops[j]);
        for (int i = 0; i < nb; ++i) {
            SparsePoly acc = SparsePoly::zero(act.ring);
            for (int r = 0; r < nb; ++r) {
                if (Winv[i][r] == 0) continue;
                auto it = img.find(bottomMembers[r]);
                if (it == img.end()) continue;
                acc += it->second * Winv[i][r];
            }
            if (!acc.is_zero()) out.set(i, j, std::move(acc));
        }
    }
    return out;
}

inline PolyMatrix differential(const WeightModule& m, const GenericNilpotent& gen,
                               const DifferentialPlan& plan) {
    ModuleAction act = module_action(m, gen);
    auto topDec = decompose(m, {plan.top_vertex});
    auto botDec = decompose(m, {plan.bottom_vertex});
    const GradedComponent& topComp = topDec.components.back();
    const GradedComponent& botComp = botDec.components.front();
    auto tops = slot_basis(m, {plan.top_vertex}, topComp, plan.top);
    auto bots = slot_basis(m, {plan.bottom_vertex}, botComp, plan.bottom);
    PolyMatrix out = differential_between(act, tops, botComp.members, bots);
    return plan.transpose ? out.transpose() : out;
}

// Scale the matrix so that its monomial that is smallest in the graded order
// carries coefficient one; pins the one free scalar per differential.
inline void normalize_scale(PolyMatrix& mat) {
    const Rat* lead = nullptr;
    Expo best;
    for (const auto& [rc, p] : mat.entries) {
        if (p.is_zero()) continue;
        const auto& [e, c] = *p.terms.begin();
        if (lead == nullptr || GradedLexLess{}(e, best)) {
            best = e;
            lead = &c;
        }
    }
    if (lead == nullptr || *lead == Rat(1)) return;
    const Rat inv = Rat(1) / *lead;
    for (auto& [rc, p] : mat.entries) p = p * inv;
}

// ---------------------------------------------------------------------------
// Format specifications and graded complexes
// ---------------------------------------------------------------------------

struct FormatSpec {
    std::string id;
    std::string diagram_token;
    int length = 3;          // number of free modules above the ring
    int a = 0, b = 0;        // defining vertex pair
    int top_vertex = 0;      // grading of the top inclusions
    int bottom_vertex = 0;   // grading of the bottom projections
    int ring_vertex = 0;     // marked node of the coordinate ring
    std::vector<int> betti;  // expected ranks, ring first
    WedgeNaming naming;
    // length 3: plans for d1, d2, d3.
    // length 4: plans[0] carries d4 and d1, plans[1] carries d2 and d3 (its
    // top slot describes the first half of the middle term).
    std::vector<DifferentialPlan> plans;
    std::string feasibility = "full";  // "full" | "partial" | "out-of-reach"
    // length 4 only: vertex whose grading separates the two halves of the
    // middle module (defaults to the bottom projection vertex).
    int split_vertex = 0;
    // length 4 only: index the generators of module 3 (and the dual half of
    // the middle module) in reverse order relative to module 1.
    bool dual_reversed = false;
};

struct GradedComplex {
    std::string format_id;
    std::string family;  // "length3" | "length4"
    RingPtr ring;
    std::vector<int> betti;
    std::vector<std::vector<std::vector<int>>> twists;  // one list per module
    std::vector<PolyMatrix> d;                          // d[k] maps module k+1 to module k
    std::vector<char> built;                            // which differentials exist
    int middle_half = 0;  // half rank of the middle pairing (length 4)

    bool complete() const {
        for (char c : built)
            if (!c) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Slot weights without building the module
// ---------------------------------------------------------------------------

namespace detail {

inline Weight subtract_root(const DynkinDiagram& d, Weight w, int node) {
    const int pos = d.position(node);
    std::vector<int> coords(d.rank, 0);
    coords[pos] = 1;
    Weight alpha = root_to_weight(d, coords);
    for (int i = 0; i < d.rank; ++i) w[i] -= alpha[i];
    return w;
}

inline Weight fundamental(const DynkinDiagram& d, int vertex) {
    Weight w(d.rank, 0);
    w[d.position(vertex)] = 1;
    return w;
}

inline Weight antidominant_weight(const DynkinDiagram& d, Weight w) {
    bool moved = true;
    while (moved) {
        moved = false;
        for (int p = 0; p < d.rank && !moved; ++p)
            if (w[p] > 0) {
                w = reflect(d, w, p + 1);
                moved = true;
            }
    }
    return w;
}

inline Weight levi_dominant(const DynkinDiagram& d, Weight w, const std::set<int>& markedPos) {
    bool moved = true;
    while (moved) {
        moved = false;
        for (int p = 0; p < d.rank && !moved; ++p)
            if (!markedPos.count(p) && w[p] < 0) {
                w = reflect(d, w, p + 1);
                moved = true;
            }
    }
    return w;
}

// Weights of the transported slot basis, in the same listing order as
// slot_basis produces.
inline std::vector<Weight> transported_weights(const DynkinDiagram& d, const Weight& hw,
                                               const SlotSpec& spec) {
    const int mm = static_cast<int>(spec.chain.size()) + 1;
    auto apply_f = [&](int ci, const Weight& w) { return subtract_root(d, w, spec.chain[ci]); };
    auto eq = [](const Weight& x, const Weight& y) { return x == y; };
    auto got = wedge_transport(mm, spec.wedge, hw, apply_f, eq);
    std::vector<uint32_t> masks;
    for (const auto& [mask, w] : got) masks.push_back(mask);
    std::vector<Weight> out;
    for (const auto& [mask, sign] : slot_order(masks, spec.wedge, spec.reverse, spec.alternate))
        out.push_back(got.at(mask));
    return out;
}

// Integer simple-root coordinates of a weight difference.
inline std::vector<int> root_coords_int(const DynkinDiagram& d, const Weight& w) {
    auto q = weight_to_root_coords(d, w);
    std::vector<int> out;
    for (const auto& c : q) {
        if (c.get_den() != 1) throw ValidationError("twist is not in the root lattice");
        if (!c.get_num().fits_sint_p()) throw ValidationError("twist out of range");
        out.push_back(static_cast<int>(c.get_num().get_si()));
    }
    return out;
}

inline Weight weight_diff(const Weight& a, const Weight& b) {
    Weight out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

struct PlanWeights {
    std::vector<Weight> top, bottom;
};

// Slot weights of a plan's top and bottom components; models are cheap enough
// to materialize, chain slots stay combinatorial.
inline PlanWeights plan_weights(const DynkinDiagram& d, const DifferentialPlan& plan) {
    PlanWeights pw;
    auto modelWeights = [&](const WeightModule& m, int vertex, bool top, const SlotSpec& spec) {
        auto dec = decompose(m, {vertex});
        const GradedComponent& comp =
            top ? dec.components.back() : dec.components.front();
        std::vector<Weight> out;
        for (const auto& v : slot_basis(m, {vertex}, comp, spec))
            out.push_back(m.weights[v.begin()->first]);
        return out;
    };
    if (!plan.model.empty()) {
        WeightModule m = dn_exterior_model(d.rank, plan.model);
        pw.top = modelWeights(m, plan.top_vertex, true, plan.top);
        pw.bottom = modelWeights(m, plan.bottom_vertex, false, plan.bottom);
        return pw;
    }
    const Weight lambda = fundamental(d, plan.module_vertex);
    pw.top = transported_weights(d, lambda, plan.top);
    std::set<int> markedBottom{d.position(plan.bottom_vertex)};
    const Weight bottomHw = levi_dominant(d, antidominant_weight(d, lambda), markedBottom);
    pw.bottom = transported_weights(d, bottomHw, plan.bottom);
    return pw;
}

// Orbit of a weight under the reflections away from the marked node.
inline std::vector<Weight> levi_orbit(const DynkinDiagram& d, const Weight& seed, int vertex) {
    const int mpos = d.position(vertex);
    std::set<Weight> seen{seed};
    std::vector<Weight> queue{seed};
    while (!queue.empty()) {
        Weight w = queue.back();
        queue.pop_back();
        for (int p = 0; p < d.rank; ++p) {
            if (p == mpos) continue;
            Weight r = reflect(d, w, p + 1);
            if (seen.insert(r).second) queue.push_back(r);
        }
    }
    return std::vector<Weight>(seen.begin(), seen.end());
}

// Weights of the second half of a length-4 middle term: the pairing matches
// weight mu with Theta - mu, where Theta is twice the orbit average.
inline std::vector<Weight> middle_partner_weights(const DynkinDiagram& d,
                                                  const std::vector<Weight>& half,
                                                  const Weight& lambda, int top_vertex) {
    auto orbit = levi_orbit(d, lambda, top_vertex);
    if (orbit.size() != 2 * half.size())
        throw ValidationError("middle component is not a doubled half");
    std::vector<Rat> theta(d.rank, 0);
    for (const auto& w : orbit)
        for (int i = 0; i < d.rank; ++i) theta[i] += w[i];
    std::vector<Weight> out;
    for (const auto& mu : half) {
        Weight partner(d.rank);
        for (int i = 0; i < d.rank; ++i) {
            Rat v = theta[i] * Rat(2) / Rat(static_cast<long>(orbit.size())) - mu[i];
            if (v.get_den() != 1) throw ValidationError("middle pairing weight not integral");
            partner[i] = static_cast<int>(v.get_num().get_si());
        }
        out.push_back(std::move(partner));
    }
    return out;
}

}  // namespace detail

// Multidegree twists of every module in the complex, computed from slot
// weights alone (no module is ever materialized beyond the cheap models).
// Also cross-checks that consecutive differentials price each junction
// consistently, which pins the slot orderings.
inline std::vector<std::vector<std::vector<int>>> compute_multigrading(const FormatSpec& fmt) {
    DynkinDiagram d = DynkinDiagram::parse(fmt.diagram_token);
    std::vector<std::vector<std::vector<int>>> tw(fmt.betti.size());
    tw[0] = {std::vector<int>(d.rank, 0)};

    // Twists of the module at `level`, given the slot weights indexing the
    // rows and columns of the matrix at that level.  An entry (r, c) of a
    // directly built matrix has degree colW[c] - rowW[r]; for a transposed
    // build the sign flips because the slot weights trade places.
    auto chain = [&](int level, const std::vector<Weight>& rowW, const std::vector<Weight>& colW,
                     bool colMinusRow) {
        const auto& prev = tw[level - 1];
        if (prev.size() != rowW.size())
            throw ValidationError("multigrading: junction size mismatch at level " +
                                  std::to_string(level));
        std::vector<std::vector<int>> next;
        for (size_t c = 0; c < colW.size(); ++c) {
            std::vector<int> t;
            for (size_t r = 0; r < rowW.size(); ++r) {
                auto deg = detail::root_coords_int(
                    d, colMinusRow ? detail::weight_diff(colW[c], rowW[r])
                                   : detail::weight_diff(rowW[r], colW[c]));
                std::vector<int> cand(d.rank);
                for (int i = 0; i < d.rank; ++i) cand[i] = prev[r][i] + deg[i];
                if (r == 0)
                    t = cand;
                else if (t != cand)
                    throw ValidationError("multigrading: junction weights disagree at level " +
                                          std::to_string(level));
            }
            next.push_back(std::move(t));
        }
        tw[level] = std::move(next);
    };

    if (fmt.length == 3) {
        auto w1 = detail::plan_weights(d, fmt.plans[0]);
        auto w2 = detail::plan_weights(d, fmt.plans[1]);
        auto w3 = detail::plan_weights(d, fmt.plans[2]);
        chain(1, w1.bottom, w1.top, true);   // d1: rows = scalar, cols = F1*
        chain(2, w2.top, w2.bottom, false);  // d2 transposed: rows = F1, cols = F2*
        chain(3, w3.bottom, w3.top, true);   // d3: rows = F2, cols = F3*
    } else {
        auto wz = detail::plan_weights(d, fmt.plans[0]);
        auto wy = detail::plan_weights(d, fmt.plans[1]);
        const Weight lambdaY = detail::fundamental(d, fmt.plans[1].module_vertex);
        auto wmid = wy.top;
        auto partners = detail::middle_partner_weights(d, wy.top, lambdaY, fmt.top_vertex);
        if (fmt.dual_reversed) std::reverse(partners.begin(), partners.end());
        wmid.insert(wmid.end(), partners.begin(), partners.end());
        const size_t h = wy.top.size();
        // d1 = transpose of d4: rows = scalar, cols = the dual of F*.
        chain(1, wz.top, wz.bottom, false);
        // d2: rows = F, cols = middle.
        chain(2, wy.bottom, wmid, true);
        // d3 = paired transpose of d2: rows = middle, cols = F*; its entry
        // (j, r) is entry (r, pair(j)) of the direct build, where pair swaps
        // the two halves of the middle term.
        {
            std::vector<Weight> swapped(wmid.size());
            for (size_t j = 0; j < wmid.size(); ++j) {
                const size_t pair =
                    fmt.dual_reversed ? 2 * h - 1 - j : (j + h) % (2 * h);
                swapped[j] = wmid[pair];
            }
            chain(3, swapped, wy.bottom, false);
        }
        // d4: rows = F*, cols = scalar; the generator order of module 3 may
        // be reversed relative to module 1.
        auto d4rows = wz.bottom;
        if (fmt.dual_reversed) std::reverse(d4rows.begin(), d4rows.end());
        chain(4, d4rows, wz.top, true);
    }

    for (size_t k = 0; k < tw.size(); ++k)
        if (tw[k].size() != static_cast<size_t>(fmt.betti[k]))
            throw ValidationError("multigrading: twist count disagrees with the format rank");
    return tw;
}

// ---------------------------------------------------------------------------
// Length-4 middle term: transported half plus its dual under the invariant
// pairing of the component
// ---------------------------------------------------------------------------

namespace detail {

// The unique symmetric bilinear form on the component invariant under the
// unmarked part of the Levi, as a dense Gram matrix over the members.
inline std::vector<std::vector<Rat>> component_pairing(const WeightModule& m,
                                                       const std::vector<int>& marked,
                                                       const GradedComponent& comp) {
    const int n = comp.dim();
    std::map<int, int> loc;
    for (int j = 0; j < n; ++j) loc[comp.members[j]] = j;
    auto id = [&](int p, int q) {
        if (p > q) std::swap(p, q);
        return p * n + q - p * (p + 1) / 2;
    };
    const int nunk = n * (n + 1) / 2;
    std::set<int> markedPos;
    for (int v : marked) markedPos.insert(m.diagram.position(v));
    std::vector<SparseVec> eqs;
    auto addEquations = [&](const SparseQMat& op) {
        // B(X u, v) + B(u, X v) = 0 for all members u <= v.
        for (int u = 0; u < n; ++u)
            for (int v = u; v < n; ++v) {
                SparseVec eq;
                for (const auto& [t, c] : op.col[comp.members[u]]) {
                    auto it = loc.find(t);
                    if (it == loc.end()) throw ValidationError("pairing: operator leaves component");
                    eq[id(it->second, v)] += c;
                }
                for (const auto& [t, c] : op.col[comp.members[v]]) {
                    auto it = loc.find(t);
                    if (it == loc.end()) throw ValidationError("pairing: operator leaves component");
                    eq[id(u, it->second)] += c;
                }
                for (auto it = eq.begin(); it != eq.end();)
                    it = (it->second == 0) ? eq.erase(it) : std::next(it);
                if (!eq.empty()) eqs.push_back(std::move(eq));
            }
    };
    for (int i = 0; i < m.diagram.rank; ++i) {
        if (markedPos.count(i)) continue;
        addEquations(m.E[i]);
        addEquations(m.F[i]);
    }
    auto ker = kernel_basis(eqs, nunk);
    if (ker.size() != 1) throw ValidationError("pairing: invariant form is not unique");
    std::vector<std::vector<Rat>> B(n, std::vector<Rat>(n, 0));
    for (const auto& [k, c] : ker.front()) {
        // invert the triangular index
        int p = 0;
        int rem = k;
        while (rem >= n - p) {
            rem -= n - p;
            ++p;
        }
        const int q = p + rem;
        B[p][q] = c;
        B[q][p] = c;
    }
    return B;
}

}  // namespace detail

// Basis of the middle term of a length-4 complex: the transported half from
// the plan's top slot, followed by its dual half under the component pairing
// (taken inside the opposite bottom-degree block, so the pairing matrix is
// exactly the standard hyperbolic one).
inline std::vector<SparseVec> middle_slots(const WeightModule& m, const FormatSpec& fmt,
                                           const GradedComponent& comp) {
    const DifferentialPlan& plan = fmt.plans[1];
    auto H = slot_basis(m, {plan.top_vertex}, comp, plan.top);
    const int h = static_cast<int>(H.size());
    if (2 * h != comp.dim())
        throw ValidationError("middle: transported half does not halve the component");
    const auto B = detail::component_pairing(m, {plan.top_vertex}, comp);
    std::map<int, int> loc;
    for (int j = 0; j < comp.dim(); ++j) loc[comp.members[j]] = j;

    const int split = fmt.split_vertex ? fmt.split_vertex : plan.bottom_vertex;
    const int bpos = m.diagram.position(split);
    std::set<int> hdegs;
    for (const auto& v : H)
        for (const auto& [idx, c] : v) hdegs.insert(m.drop[idx][bpos]);
    if (hdegs.size() != 1)
        throw ValidationError("middle: transported half mixes bottom degrees");
    std::vector<int> others;
    for (int idx : comp.members)
        if (m.drop[idx][bpos] != *hdegs.begin()) others.push_back(idx);
    if (static_cast<int>(others.size()) != h)
        throw ValidationError("middle: bottom degrees do not split the component in half");

    // A[k][u] = B(e_{others[u]}, H[k]); the dual half solves A X = I.
    std::vector<std::vector<Rat>> A(h, std::vector<Rat>(h, 0));
    for (int k = 0; k < h; ++k)
        for (const auto& [idx, c] : H[k])
            for (int u = 0; u < h; ++u) {
                const Rat b = B[loc.at(others[u])][loc.at(idx)];
                if (b != 0) A[k][u] += b * c;
            }
    const auto Ainv = detail::invert_dense(A);
    std::vector<SparseVec> out = H;
    for (int j = 0; j < h; ++j) {
        SparseVec x;
        for (int u = 0; u < h; ++u)
            if (Ainv[u][j] != 0) x[others[u]] = Ainv[u][j];
        out.push_back(std::move(x));
    }
    if (fmt.dual_reversed) std::reverse(out.begin() + h, out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Complex builders
// ---------------------------------------------------------------------------

namespace detail {

inline void attach_twists(GradedComplex& gc) {
    for (size_t k = 0; k < gc.d.size(); ++k) {
        gc.d[k].row_twists = gc.twists[k];
        gc.d[k].col_twists = gc.twists[k + 1];
    }
}

inline void check_shape(const GradedComplex& gc, int k) {
    if (!gc.built[k]) return;
    if (gc.d[k].rows != gc.betti[k] || gc.d[k].cols != gc.betti[k + 1])
        throw ValidationError("built differential does not match the format ranks");
}

}  // namespace detail

inline GradedComplex build_length3(const FormatSpec& fmt, long cap = kDefaultDimCap) {
    if (fmt.length != 3 || fmt.plans.size() != 3)
        throw ValidationError("build_length3: not a length-3 format");
    DynkinDiagram d = DynkinDiagram::parse(fmt.diagram_token);
    GenericNilpotent gen = make_generic(d, fmt.ring_vertex, &fmt.naming);
    GradedComplex gc;
    gc.format_id = fmt.id;
    gc.family = "length3";
    gc.ring = gen.nil.ring;
    gc.betti = fmt.betti;
    gc.twists = compute_multigrading(fmt);
    gc.d.assign(3, PolyMatrix(gc.ring, 0, 0));
    gc.built.assign(3, 0);
    for (int k = 0; k < 3; ++k) {
        try {
            WeightModule m = plan_module(d, fmt.plans[k], cap);
            PolyMatrix mat = differential(m, gen, fmt.plans[k]);
            normalize_scale(mat);
            gc.d[k] = std::move(mat);
            gc.built[k] = 1;
        } catch (const DimensionCapError&) {
            gc.d[k] = PolyMatrix(gc.ring, fmt.betti[k], fmt.betti[k + 1]);
        }
        detail::check_shape(gc, k);
    }
    detail::attach_twists(gc);
    return gc;
}

inline GradedComplex build_length4(const FormatSpec& fmt, long cap = kDefaultDimCap) {
    if (fmt.length != 4 || fmt.plans.size() != 2)
        throw ValidationError("build_length4: not a length-4 format");
    DynkinDiagram d = DynkinDiagram::parse(fmt.diagram_token);
    GenericNilpotent gen = make_generic(d, fmt.ring_vertex, &fmt.naming);
    GradedComplex gc;
    gc.format_id = fmt.id;
    gc.family = "length4";
    gc.ring = gen.nil.ring;
    gc.betti = fmt.betti;
    gc.twists = compute_multigrading(fmt);
    gc.d.assign(4, PolyMatrix(gc.ring, 0, 0));
    gc.built.assign(4, 0);
    gc.middle_half = fmt.betti[2] / 2;

    // Outer pair: d4 from the scalar top to F*, and d1 as its transpose.
    try {
        const DifferentialPlan& plan = fmt.plans[0];
        WeightModule mz = plan_module(d, plan, cap);
        PolyMatrix Mz = differential(mz, gen, plan);
        normalize_scale(Mz);
        gc.d[0] = Mz.transpose();
        if (fmt.dual_reversed) {
            PolyMatrix rev(gc.ring, Mz.rows, Mz.cols);
            for (const auto& [rc, p] : Mz.entries)
                rev.set(Mz.rows - 1 - rc.first, rc.second, p);
            Mz = std::move(rev);
        }
        gc.d[3] = std::move(Mz);
        gc.built[0] = gc.built[3] = 1;
    } catch (const DimensionCapError&) {
        gc.d[0] = PolyMatrix(gc.ring, fmt.betti[0], fmt.betti[1]);
        gc.d[3] = PolyMatrix(gc.ring, fmt.betti[3], fmt.betti[4]);
    }

    // Inner pair: d2 from the middle onto F, and d3 as its paired transpose.
    try {
        const DifferentialPlan& plan = fmt.plans[1];
        WeightModule my = plan_module(d, plan, cap);
        ModuleAction act = module_action(my, gen);
        auto topDec = decompose(my, {plan.top_vertex});
        auto botDec = decompose(my, {plan.bottom_vertex});
        const GradedComponent& midComp = topDec.components.back();
        const GradedComponent& botComp = botDec.components.front();
        auto mids = middle_slots(my, fmt, midComp);
        auto bots = slot_basis(my, {plan.bottom_vertex}, botComp, plan.bottom);
        PolyMatrix My = differential_between(act, mids, botComp.members, bots);
        normalize_scale(My);
        const int h = gc.middle_half;
        PolyMatrix Myt = My.transpose();
        PolyMatrix d3(gc.ring, 2 * h, My.rows);
        for (const auto& [rc, p] : Myt.entries) {
            const int pair = fmt.dual_reversed ? 2 * h - 1 - rc.first
                                               : (rc.first + h) % (2 * h);
            d3.set(pair, rc.second, p);
        }
        gc.d[1] = std::move(My);
        gc.d[2] = std::move(d3);
        gc.built[1] = gc.built[2] = 1;
    } catch (const DimensionCapError&) {
        gc.d[1] = PolyMatrix(gc.ring, fmt.betti[1], fmt.betti[2]);
        gc.d[2] = PolyMatrix(gc.ring, fmt.betti[2], fmt.betti[3]);
    }

    for (int k = 0; k < 4; ++k) detail::check_shape(gc, k);
    detail::attach_twists(gc);
    return gc;
}

inline GradedComplex build_format(const FormatSpec& fmt, long cap = kDefaultDimCap) {
    return fmt.length == 3 ? build_length3(fmt, cap) : build_length4(fmt, cap);
}

// ---------------------------------------------------------------------------
// Minimization: cancel invertible constant entries
// ---------------------------------------------------------------------------

namespace detail {

inline bool constant_entry(const SparsePoly& p, Rat& value) {
    if (p.term_count() != 1) return false;
    const auto& [e, c] = *p.terms.begin();
    if (expo_total(e) != 0) return false;
    value = c;
    return true;
}

}  // namespace detail

inline GradedComplex minimize(GradedComplex gc) {
    if (!gc.complete())
        throw ValidationError("minimize: complex has unbuilt differentials");
    bool again = true;
    while (again) {
        again = false;
        for (size_t k = 0; k < gc.d.size() && !again; ++k) {
            PolyMatrix& dk = gc.d[k];
            int pi = -1, pj = -1;
            Rat unit;
            for (const auto& [rc, p] : dk.entries) {
                Rat v;
                if (detail::constant_entry(p, v) && v != 0) {
                    pi = rc.first;
                    pj = rc.second;
                    unit = v;
                    break;
                }
            }
            if (pi < 0) continue;
            again = true;

            // Gaussian cancellation of the (pi, pj) unit.
            PolyMatrix nk(gc.ring, dk.rows - 1, dk.cols - 1);
            auto rmap = [&](int r) { return r < pi ? r : r - 1; };
            auto cmap = [&](int c) { return c < pj ? c : c - 1; };
            const Rat uinv = Rat(1) / unit;
            for (int r = 0; r < dk.rows; ++r) {
                if (r == pi) continue;
                for (int c = 0; c < dk.cols; ++c) {
                    if (c == pj) continue;
                    SparsePoly v = dk.at(r, c) - dk.at(r, pj) * dk.at(pi, c) * uinv;
                    if (!v.is_zero()) nk.set(rmap(r), cmap(c), std::move(v));
                }
            }
            gc.d[k] = std::move(nk);
            if (k + 1 < gc.d.size()) {
                PolyMatrix& up = gc.d[k + 1];
                PolyMatrix nu(gc.ring, up.rows - 1, up.cols);
                for (const auto& [rc, p] : up.entries) {
                    if (rc.first == pj) continue;
                    nu.set(rc.first < pj ? rc.first : rc.first - 1, rc.second, p);
                }
                gc.d[k + 1] = std::move(nu);
            }
            if (k > 0) {
                PolyMatrix& down = gc.d[k - 1];
                PolyMatrix nd(gc.ring, down.rows, down.cols - 1);
                for (const auto& [rc, p] : down.entries) {
                    if (rc.second == pi) continue;
                    nd.set(rc.first, rc.second < pi ? rc.second : rc.second - 1, p);
                }
                gc.d[k - 1] = std::move(nd);
            }
            gc.betti[k]--;
            gc.betti[k + 1]--;
            gc.twists[k].erase(gc.twists[k].begin() + pi);
            gc.twists[k + 1].erase(gc.twists[k + 1].begin() + pj);
            if (gc.middle_half > 0) gc.middle_half = gc.betti[2] / 2;
        }
    }
    detail::attach_twists(gc);
    return gc;
}

// ---------------------------------------------------------------------------
// Linear sections: restrict to the variables of lowest coarse degree
// ---------------------------------------------------------------------------

namespace detail {

inline SparsePoly project_poly(const SparsePoly& p, const std::vector<int>& keep,
                               const RingPtr& sub) {
    std::vector<char> keepMask(p.ring->nvars(), 0);
    std::vector<int> newIndex(p.ring->nvars(), -1);
    for (size_t i = 0; i < keep.size(); ++i) {
        keepMask[keep[i]] = 1;
        newIndex[keep[i]] = static_cast<int>(i);
    }
    SparsePoly out = SparsePoly::zero(sub);
    for (const auto& [e, c] : p.terms) {
        bool ok = true;
        Expo ne(keep.size(), 0);
        for (size_t v = 0; v < e.size() && ok; ++v) {
            if (e[v] == 0) continue;
            if (!keepMask[v])
                ok = false;
            else
                ne[newIndex[v]] = e[v];
        }
        if (ok) out.add_term(ne, c);
    }
    return out;
}

}  // namespace detail

// Kill every variable of coarse degree two or more; the result lives over the
// subring generated by the linear stratum.
inline GradedComplex linear_section(const GradedComplex& gc) {
    std::vector<int> keep;
    for (int v = 0; v < gc.ring->nvars(); ++v)
        if (gc.ring->coarse[v] == 1) keep.push_back(v);
    std::vector<std::string> names;
    std::vector<std::vector<int>> degrees;
    std::vector<int> coarse;
    for (int v : keep) {
        names.push_back(gc.ring->names[v]);
        degrees.push_back(gc.ring->degrees[v]);
        coarse.push_back(gc.ring->coarse[v]);
    }
    RingPtr sub = make_ring(gc.ring->rank, names, degrees, coarse);
    GradedComplex out = gc;
    out.ring = sub;
    for (size_t k = 0; k < gc.d.size(); ++k) {
        PolyMatrix nd(sub, gc.d[k].rows, gc.d[k].cols);
        nd.row_twists = gc.d[k].row_twists;
        nd.col_twists = gc.d[k].col_twists;
        for (const auto& [rc, p] : gc.d[k].entries) {
            SparsePoly q = detail::project_poly(p, keep, sub);
            if (!q.is_zero()) nd.set(rc.first, rc.second, std::move(q));
        }
        out.d[k] = std::move(nd);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The distinguished invariant of the section
// ---------------------------------------------------------------------------

// The entry of d1 with the highest coarse degree, with every variable of
// coarse degree two or more killed.  Must be unique to be well defined.
inline SparsePoly extract_invariant(const GradedComplex& gc) {
    if (gc.d.empty() || !gc.built[0])
        throw ValidationError("extract_invariant: first differential is not built");
    const SparsePoly* best = nullptr;
    int bestDeg = -1;
    bool tie = false;
    for (const auto& [rc, p] : gc.d[0].entries) {
        if (p.is_zero()) continue;
        const int deg = p.ring->coarse.empty() ? expo_total(p.terms.begin()->first)
                                               : p.coarse_degree(p.terms.begin()->first);
        if (deg > bestDeg) {
            bestDeg = deg;
            best = &p;
            tie = false;
        } else if (deg == bestDeg) {
            tie = true;
        }
    }
    if (best == nullptr) throw ValidationError("extract_invariant: empty differential");
    if (tie) throw ValidationError("extract_invariant: top degree entry is not unique");
    std::vector<int> kill;
    for (int v = 0; v < gc.ring->nvars(); ++v)
        if (gc.ring->coarse[v] >= 2) kill.push_back(v);
    return best->kill_variables(kill);
}

// Whether every derivation of the ring coming from the unmarked nodes kills f.
inline bool invariant_annihilated(const GenericNilpotent& gen, const SparsePoly& f) {
    const DynkinDiagram& d = gen.nil.diagram;
    for (int p = 0; p < d.rank; ++p) {
        const int node = p + 1;
        if (node == gen.nil.vertex) continue;
        for (bool raising : {true, false}) {
            auto der = ring_derivation(gen.nil, gen.ns, node, raising);
            if (!apply_derivation(der, f).is_zero()) return false;
        }
    }
    return true;
}

}  // namespace dynres
