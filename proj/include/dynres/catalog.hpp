#pragma once

// The format catalog: every supported complex format with its construction
// plan.  Length-3 formats for the D_n series (both parities, both vertex
// pairs) are generated programmatically over the combinatorial spinor
// models; the exceptional length-3 formats and the five length-4 formats
// are written out explicitly with transported slot chains.

#include "dynres/resolver.hpp"

#include <string>
#include <vector>

namespace dynres {

namespace detail {

inline std::string subset_label(const std::string& prefix, const std::vector<int>& I) {
    std::string s = prefix;
    for (int v : I) s += std::to_string(v);
    return s;
}

inline std::vector<int> complement_of(int n, const std::vector<int>& I) {
    std::vector<int> out;
    for (int v = 1; v <= n; ++v)
        if (std::find(I.begin(), I.end(), v) == I.end()) out.push_back(v);
    return out;
}

inline SlotSpec labelled_slot(std::vector<std::pair<std::string, Rat>> labels) {
    SlotSpec s;
    s.labels = std::move(labels);
    return s;
}

inline SlotSpec chain_slot(std::vector<int> chain, int wedge, bool reverse = false) {
    SlotSpec s;
    s.chain = std::move(chain);
    s.wedge = wedge;
    s.reverse = reverse;
    return s;
}

inline SlotSpec point_slot() { return SlotSpec{}; }

// Naming chains of the D_n coordinate rings: pair variables transported from
// the lowest radical root.  The printed labels ascend from the lowest root
// for the (n, n-3) rings and descend for the (n, n-1) rings.
inline WedgeNaming dn_naming(int n, int ring_vertex, const std::string& prefix,
                             bool printed_descending) {
    WedgeNaming wn;
    if (ring_vertex == n - 1) {
        wn.chain.push_back(n);
        for (int v = n - 2; v >= 1; --v) wn.chain.push_back(v);
    } else {  // ring at the fork node n
        for (int v = n - 1; v >= 1; --v) wn.chain.push_back(v);
    }
    wn.printed_descending = printed_descending;
    wn.by_coarse[1] = WedgePattern{prefix, 2, Rat(1)};
    return wn;
}

// Shared naming of the exceptional rings marked at node 2: wedge-cube
// variables x, complementary y, and (for E8) vector variables z.
inline WedgeNaming exceptional_naming(int rank) {
    WedgeNaming wn;
    wn.chain = {1, 3, 4, 5, 6};
    for (int v = 7; v <= rank; ++v) wn.chain.push_back(v);
    wn.printed_descending = true;
    wn.by_coarse[1] = WedgePattern{"x", 3, Rat(1)};
    wn.by_coarse[2] = WedgePattern{"y", 6, Rat(1)};
    if (rank == 8) wn.by_coarse[3] = WedgePattern{"z", 1, Rat(1)};
    return wn;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// D_n, vertices (n, n-1): format (1, n, n, 1)
// ---------------------------------------------------------------------------

inline FormatSpec dn_pair_format(int n) {
    using detail::subset_label;
    const bool even = (n % 2 == 0);
    FormatSpec f;
    f.id = "D" + std::to_string(n) + ":" + std::to_string(n) + "," + std::to_string(n - 1);
    f.diagram_token = "D" + std::to_string(n);
    f.length = 3;
    f.a = n;
    f.b = n - 1;
    f.top_vertex = n - 1;
    f.bottom_vertex = even ? n : n - 1;
    f.ring_vertex = n - 1;
    f.betti = {1, n, n, 1};
    f.naming = detail::dn_naming(n, n - 1, "b", /*printed_descending=*/true);
    f.plans.resize(3);

    // d1: odd-size wedges for n even, even-size for n odd.
    {
        DifferentialPlan& p = f.plans[0];
        p.model = even ? "half_spinor_odd" : "half_spinor_even";
        p.top_vertex = n - 1;
        p.bottom_vertex = f.bottom_vertex;
        std::vector<std::pair<std::string, Rat>> tops;
        for (int i = 1; i <= n; ++i) {
            std::vector<int> I;
            for (int v = 1; v <= n; ++v)
                if (v != i) I.push_back(v);
            tops.push_back({subset_label("e", I), Rat(1)});
        }
        p.top = detail::labelled_slot(std::move(tops));
        p.bottom = detail::labelled_slot({{even ? "e" + std::to_string(n) : "e", Rat(1)}});
    }

    // d2: the standard module, transposed.
    {
        DifferentialPlan& p = f.plans[1];
        p.model = "standard";
        p.top_vertex = n - 1;
        p.bottom_vertex = f.bottom_vertex;
        p.transpose = true;
        std::vector<std::pair<std::string, Rat>> tops, bots;
        for (int i = 1; i <= n - 1; ++i) tops.push_back({"f" + std::to_string(i), Rat(1)});
        tops.push_back({"ph" + std::to_string(n), Rat(1)});
        for (int i = 1; i <= n - 1; ++i) bots.push_back({"ph" + std::to_string(i), Rat(1)});
        bots.push_back({even ? "ph" + std::to_string(n) : "f" + std::to_string(n), Rat(1)});
        p.top = detail::labelled_slot(std::move(tops));
        p.bottom = detail::labelled_slot(std::move(bots));
    }

    // d3: the opposite spinor parity.
    {
        DifferentialPlan& p = f.plans[2];
        p.model = even ? "half_spinor_even" : "half_spinor_odd";
        p.top_vertex = n - 1;
        p.bottom_vertex = f.bottom_vertex;
        std::vector<int> full;
        for (int v = 1; v <= n; ++v) full.push_back(v);
        p.top = detail::labelled_slot({{subset_label("e", full), Rat(1)}});
        std::vector<std::pair<std::string, Rat>> bots;
        if (even) {
            for (int i = 1; i <= n - 1; ++i)
                bots.push_back({subset_label("e", {i, n}), Rat(1)});
            bots.push_back({"e", Rat(1)});
        } else {
            for (int i = 1; i <= n; ++i)
                bots.push_back({subset_label("e", {i}), Rat(1)});
        }
        p.bottom = detail::labelled_slot(std::move(bots));
    }
    return f;
}

// ---------------------------------------------------------------------------
// D_n, vertices (n, n-3): format (1, 4, n, n-3)
// ---------------------------------------------------------------------------

inline FormatSpec dn_skew_format(int n) {
    using detail::subset_label;
    const bool even = (n % 2 == 0);
    FormatSpec f;
    f.id = "D" + std::to_string(n) + ":" + std::to_string(n) + "," + std::to_string(n - 3);
    f.diagram_token = "D" + std::to_string(n);
    f.length = 3;
    f.a = n;
    f.b = n - 3;
    f.top_vertex = n - 3;
    f.bottom_vertex = even ? n : n - 1;
    f.ring_vertex = even ? n : n - 1;
    f.betti = {1, 4, n, n - 3};
    f.naming = detail::dn_naming(n, f.ring_vertex, "x", /*printed_descending=*/false);
    f.plans.resize(3);
    const std::string flavor = even ? "half_spinor_plain" : "half_spinor_dual";

    std::vector<int> full;
    for (int v = 1; v <= n; ++v) full.push_back(v);

    // d1: spinor with |I| congruent to n mod 2.
    {
        DifferentialPlan& p = f.plans[0];
        p.model = flavor + (even ? "_even" : "_odd");
        p.top_vertex = n - 3;
        p.bottom_vertex = f.bottom_vertex;
        std::vector<std::pair<std::string, Rat>> tops;
        if (even) {
            tops.push_back({subset_label("ph", {n - 2, n - 1}), Rat(1)});
            tops.push_back({subset_label("ph", {n - 2, n}), Rat(1)});
            tops.push_back({subset_label("ph", {n - 1, n}), Rat(1)});
            tops.push_back({"ph", Rat(1)});
        } else {
            tops.push_back({subset_label("ph", {n - 2, n - 1, n}), Rat(1)});
            tops.push_back({"ph" + std::to_string(n - 2), Rat(1)});
            tops.push_back({"ph" + std::to_string(n - 1), Rat(1)});
            tops.push_back({"ph" + std::to_string(n), Rat(1)});
        }
        p.top = detail::labelled_slot(std::move(tops));
        p.bottom = detail::labelled_slot({{subset_label("ph", full), Rat(1)}});
    }

    // d2: the opposite spinor parity, transposed.
    {
        DifferentialPlan& p = f.plans[1];
        p.model = flavor + (even ? "_odd" : "_even");
        p.top_vertex = n - 3;
        p.bottom_vertex = f.bottom_vertex;
        p.transpose = true;
        std::vector<std::pair<std::string, Rat>> tops, bots;
        if (even) {
            tops.push_back({"ph" + std::to_string(n), Rat(1)});
            tops.push_back({"ph" + std::to_string(n - 1), Rat(1)});
            tops.push_back({"ph" + std::to_string(n - 2), Rat(1)});
            tops.push_back({subset_label("ph", {n - 2, n - 1, n}), Rat(1)});
        } else {
            tops.push_back({"ph", Rat(1)});
            tops.push_back({subset_label("ph", {n - 1, n}), Rat(1)});
            tops.push_back({subset_label("ph", {n - 2, n}), Rat(1)});
            tops.push_back({subset_label("ph", {n - 2, n - 1}), Rat(1)});
        }
        for (int i = n; i >= 1; --i) {
            std::vector<int> I;
            for (int v = 1; v <= n; ++v)
                if (v != i) I.push_back(v);
            bots.push_back({subset_label("ph", I), Rat(1)});
        }
        p.top = detail::labelled_slot(std::move(tops));
        p.bottom = detail::labelled_slot(std::move(bots));
    }

    // d3: the standard module.
    {
        DifferentialPlan& p = f.plans[2];
        p.model = "standard";
        p.top_vertex = n - 3;
        p.bottom_vertex = f.bottom_vertex;
        std::vector<std::pair<std::string, Rat>> tops, bots;
        for (int k = 0; k < n - 3; ++k)
            tops.push_back({"f" + std::to_string(n - 3 - k), Rat(k % 2 == 0 ? -1 : 1)});
        bots.push_back({even ? "ph" + std::to_string(n) : "f" + std::to_string(n), Rat(1)});
        for (int i = n - 1; i >= 1; --i)
            bots.push_back({"ph" + std::to_string(i), Rat((n - i) % 2 == 0 ? 1 : -1)});
        p.top = detail::labelled_slot(std::move(tops));
        p.bottom = detail::labelled_slot(std::move(bots));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Exceptional length-3 formats
// ---------------------------------------------------------------------------

inline FormatSpec e6_23_format() {
    FormatSpec f;
    f.id = "E6:2,3";
    f.diagram_token = "E6";
    f.length = 3;
    f.a = 2;
    f.b = 3;
    f.top_vertex = 3;
    f.bottom_vertex = 2;
    f.ring_vertex = 2;
    f.betti = {1, 5, 6, 2};
    f.naming = detail::exceptional_naming(6);
    f.plans.resize(3);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 2;
        p.top_vertex = 3;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({2, 4, 5, 6}, 1, true);
        p.bottom = detail::point_slot();
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 6;
        p.top_vertex = 3;
        p.bottom_vertex = 2;
        p.transpose = true;
        p.top = detail::chain_slot({6, 5, 4, 2}, 1);
        p.bottom = detail::chain_slot({6, 5, 4, 3, 1}, 1);
    }
    {
        DifferentialPlan& p = f.plans[2];
        p.module_vertex = 1;
        p.top_vertex = 3;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({1}, 1, true);
        p.bottom = detail::chain_slot({1, 3, 4, 5, 6}, 1, true);
    }
    return f;
}

inline FormatSpec e7_23_format() {
    FormatSpec f;
    f.id = "E7:2,3";
    f.diagram_token = "E7";
    f.length = 3;
    f.a = 2;
    f.b = 3;
    f.top_vertex = 3;
    f.bottom_vertex = 2;
    f.ring_vertex = 2;
    f.betti = {1, 6, 7, 2};
    f.naming = detail::exceptional_naming(7);
    f.plans.resize(3);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 2;
        p.top_vertex = 3;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({2, 4, 5, 6, 7}, 1, true);
        p.bottom = detail::point_slot();
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 7;
        p.top_vertex = 3;
        p.bottom_vertex = 2;
        p.transpose = true;
        p.top = detail::chain_slot({7, 6, 5, 4, 2}, 1);
        p.bottom = detail::chain_slot({1, 3, 4, 5, 6, 7}, 1);
    }
    {
        DifferentialPlan& p = f.plans[2];
        p.module_vertex = 1;
        p.top_vertex = 3;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({1}, 1, true);
        p.bottom = detail::chain_slot({7, 6, 5, 4, 3, 1}, 1, true);
    }
    return f;
}

inline FormatSpec e7_25_format() {
    FormatSpec f;
    f.id = "E7:2,5";
    f.diagram_token = "E7";
    f.length = 3;
    f.a = 2;
    f.b = 5;
    f.top_vertex = 5;
    f.bottom_vertex = 2;
    f.ring_vertex = 2;
    f.betti = {1, 5, 7, 3};
    f.naming = detail::exceptional_naming(7);
    f.plans.resize(3);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 2;
        p.top_vertex = 5;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({2, 4, 3, 1}, 1, true);
        p.bottom = detail::point_slot();
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 1;
        p.top_vertex = 5;
        p.bottom_vertex = 2;
        p.transpose = true;
        p.top = detail::chain_slot({1, 3, 4, 2}, 1);
        p.bottom = detail::chain_slot({7, 6, 5, 4, 3, 1}, 1);
    }
    {
        DifferentialPlan& p = f.plans[2];
        p.module_vertex = 7;
        p.top_vertex = 5;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({7, 6}, 1, true);
        p.bottom = detail::chain_slot({1, 3, 4, 5, 6, 7}, 1, true);
    }
    return f;
}

inline FormatSpec e8_23_format() {
    FormatSpec f;
    f.id = "E8:2,3";
    f.diagram_token = "E8";
    f.length = 3;
    f.a = 2;
    f.b = 3;
    f.top_vertex = 3;
    f.bottom_vertex = 2;
    f.ring_vertex = 2;
    f.betti = {1, 7, 8, 2};
    f.naming = detail::exceptional_naming(8);
    f.feasibility = "partial";
    f.plans.resize(3);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 2;
        p.top_vertex = 3;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({2, 4, 5, 6, 7, 8}, 1, true);
        p.bottom = detail::point_slot();
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 8;
        p.top_vertex = 3;
        p.bottom_vertex = 2;
        p.transpose = true;
        p.top = detail::chain_slot({8, 7, 6, 5, 4, 2}, 1);
        p.bottom = detail::chain_slot({1, 3, 4, 5, 6, 7, 8}, 1);
    }
    {
        DifferentialPlan& p = f.plans[2];
        p.module_vertex = 1;
        p.top_vertex = 3;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({1}, 1, true);
        p.bottom = detail::chain_slot({8, 7, 6, 5, 4, 3, 1}, 1, true);
    }
    return f;
}

inline FormatSpec e8_25_format() {
    FormatSpec f;
    f.id = "E8:2,5";
    f.diagram_token = "E8";
    f.length = 3;
    f.a = 2;
    f.b = 5;
    f.top_vertex = 5;
    f.bottom_vertex = 2;
    f.ring_vertex = 2;
    f.betti = {1, 5, 8, 4};
    f.naming = detail::exceptional_naming(8);
    f.feasibility = "partial";
    f.plans.resize(3);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 2;
        p.top_vertex = 5;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({2, 4, 3, 1}, 1, true);
        p.bottom = detail::point_slot();
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 1;
        p.top_vertex = 5;
        p.bottom_vertex = 2;
        p.transpose = true;
        p.top = detail::chain_slot({1, 3, 4, 2}, 1);
        p.bottom = detail::chain_slot({8, 7, 6, 5, 4, 3, 1}, 1);
    }
    {
        DifferentialPlan& p = f.plans[2];
        p.module_vertex = 8;
        p.top_vertex = 5;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({8, 7, 6}, 1, true);
        p.bottom = detail::chain_slot({1, 3, 4, 5, 6, 7, 8}, 1, true);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Length-4 formats
// ---------------------------------------------------------------------------

inline FormatSpec a4_len4_format() {
    FormatSpec f;
    f.id = "A4:1,1";
    f.diagram_token = "A4";
    f.length = 4;
    f.a = 1;
    f.b = 1;
    f.top_vertex = 1;
    f.bottom_vertex = 1;
    f.ring_vertex = 1;
    f.split_vertex = 4;
    f.betti = {1, 4, 6, 4, 1};
    f.naming.chain = {2, 3, 4};
    f.naming.printed_descending = true;
    f.naming.by_coarse[1] = WedgePattern{"x", 1, Rat(1)};
    f.plans.resize(2);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 1;
        p.top_vertex = 1;
        p.bottom_vertex = 1;
        p.top = detail::point_slot();
        p.bottom = detail::chain_slot({2, 3, 4}, 1);
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 3;
        p.top_vertex = 1;
        p.bottom_vertex = 1;
        p.top = detail::chain_slot({3, 2}, 1);
        p.bottom = detail::chain_slot({4, 3, 2}, 1, true);
    }
    return f;
}

inline FormatSpec d5_len4_format() {
    FormatSpec f;
    f.id = "D5:5,1";
    f.diagram_token = "D5";
    f.length = 4;
    f.a = 5;
    f.b = 1;
    f.top_vertex = 1;
    f.bottom_vertex = 4;
    f.ring_vertex = 4;
    f.split_vertex = 5;
    f.betti = {1, 5, 8, 5, 1};
    f.naming.chain = {5, 3, 2, 1};
    f.naming.printed_descending = true;
    f.naming.by_coarse[1] = WedgePattern{"x", 2, Rat(1)};
    f.plans.resize(2);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 1;
        p.top_vertex = 1;
        p.bottom_vertex = 4;
        p.top = detail::point_slot();
        p.bottom = detail::chain_slot({5, 3, 2, 1}, 1);
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 4;
        p.top_vertex = 1;
        p.bottom_vertex = 4;
        p.top = detail::chain_slot({4, 3, 2}, 1);
        p.bottom = detail::chain_slot({1, 2, 3, 5}, 1, true);
    }
    return f;
}

inline FormatSpec e6_len4_format() {
    FormatSpec f;
    f.id = "E6:2,1";
    f.diagram_token = "E6";
    f.length = 4;
    f.a = 2;
    f.b = 1;
    f.top_vertex = 1;
    f.bottom_vertex = 2;
    f.ring_vertex = 2;
    f.split_vertex = 2;
    f.betti = {1, 6, 10, 6, 1};
    f.naming = detail::exceptional_naming(6);
    f.plans.resize(2);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 1;
        p.top_vertex = 1;
        p.bottom_vertex = 2;
        p.top = detail::point_slot();
        p.bottom = detail::chain_slot({1, 3, 4, 5, 6}, 1);
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 6;
        p.top_vertex = 1;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({6, 5, 4, 3}, 1, true);
        p.bottom = detail::chain_slot({6, 5, 4, 3, 1}, 1, true);
    }
    return f;
}

inline FormatSpec e7_len4_format() {
    FormatSpec f;
    f.id = "E7:2,1";
    f.diagram_token = "E7";
    f.length = 4;
    f.a = 2;
    f.b = 1;
    f.top_vertex = 1;
    f.bottom_vertex = 2;
    f.ring_vertex = 2;
    f.split_vertex = 2;
    f.betti = {1, 7, 12, 7, 1};
    f.naming = detail::exceptional_naming(7);
    f.plans.resize(2);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 1;
        p.top_vertex = 1;
        p.bottom_vertex = 2;
        p.top = detail::point_slot();
        p.bottom = detail::chain_slot({7, 6, 5, 4, 3, 1}, 1);
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 7;
        p.top_vertex = 1;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({7, 6, 5, 4, 3}, 1, true);
        p.bottom = detail::chain_slot({1, 3, 4, 5, 6, 7}, 1, true);
    }
    return f;
}

inline FormatSpec e8_len4_format() {
    FormatSpec f;
    f.id = "E8:2,1";
    f.diagram_token = "E8";
    f.length = 4;
    f.a = 2;
    f.b = 1;
    f.top_vertex = 1;
    f.bottom_vertex = 2;
    f.ring_vertex = 2;
    f.split_vertex = 2;
    f.betti = {1, 8, 14, 8, 1};
    f.naming = detail::exceptional_naming(8);
    f.feasibility = "partial";
    f.plans.resize(2);
    {
        DifferentialPlan& p = f.plans[0];
        p.module_vertex = 1;
        p.top_vertex = 1;
        p.bottom_vertex = 2;
        p.top = detail::point_slot();
        p.bottom = detail::chain_slot({8, 7, 6, 5, 4, 3, 1}, 1);
    }
    {
        DifferentialPlan& p = f.plans[1];
        p.module_vertex = 8;
        p.top_vertex = 1;
        p.bottom_vertex = 2;
        p.top = detail::chain_slot({8, 7, 6, 5, 4, 3}, 1, true);
        p.bottom = detail::chain_slot({1, 3, 4, 5, 6, 7, 8}, 1, true);
    }
    return f;
}

// ---------------------------------------------------------------------------
// The full catalog
// ---------------------------------------------------------------------------

inline std::vector<FormatSpec> format_catalog() {
    std::vector<FormatSpec> out;
    for (int n = 4; n <= 8; ++n) out.push_back(dn_pair_format(n));
    for (int n = 4; n <= 8; ++n) out.push_back(dn_skew_format(n));
    out.push_back(e6_23_format());
    out.push_back(e7_23_format());
    out.push_back(e7_25_format());
    out.push_back(e8_23_format());
    out.push_back(e8_25_format());
    out.push_back(a4_len4_format());
    out.push_back(d5_len4_format());
    out.push_back(e6_len4_format());
    out.push_back(e7_len4_format());
    out.push_back(e8_len4_format());
    return out;
}

inline FormatSpec find_format(const std::string& id) {
    for (auto& f : format_catalog())
        if (f.id == id) return f;
    throw ValidationError("unknown format id: " + id);
}

}  // namespace dynres
