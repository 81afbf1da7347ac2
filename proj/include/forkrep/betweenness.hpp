#pragma once

// Reichenbach's causal betweenness on events, the pair digraph G(b) used to
// recognise abstract causal betweenness, and the comparison with fork patterns.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "forkrep/errors.hpp"
#include "forkrep/probability.hpp"
#include "forkrep/relation.hpp"
#include "forkrep/solver.hpp"
#include "forkrep/synthesizer.hpp"

namespace forkrep {

/// B is causally between A and C:
///   1 > P(A|B) > P(A|C) > P(A) > 0,
///   1 > P(C|B) > P(C|A) > P(C) > 0,
///   P(C|AB) = P(C|B).
/// A conditioner of mass zero anywhere makes the predicate false.
inline bool is_causally_between(const FiniteProbabilitySpace& space, const Event& a, const Event& b, const Event& c)
{
    const Rational pa = prob(space, a);
    const Rational pb = prob(space, b);
    const Rational pc = prob(space, c);
    if (pa == 0 || pb == 0 || pc == 0)
        return false;

    const Rational a_given_b = prob(space, a & b) / pb;
    const Rational a_given_c = prob(space, a & c) / pc;
    if (!(1 > a_given_b && a_given_b > a_given_c && a_given_c > pa && pa > 0))
        return false;

    const Rational c_given_b = prob(space, c & b) / pb;
    const Rational c_given_a = prob(space, c & a) / pa;
    if (!(1 > c_given_b && c_given_b > c_given_a && c_given_a > pc && pc > 0))
        return false;

    const Event ab = a & b;
    const Rational pab = prob(space, ab);
    if (pab == 0)
        return false;
    return prob(space, c & ab) / pab == c_given_b;
}

/// b = {(i,j,k) : A_j causally between A_i and A_k}, by brute force.
inline TernaryRelation extract_betweenness_relation(const IndexedEvents& ev)
{
    const std::size_t n = ev.size();
    std::set<IndexTriple> triples;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (is_causally_between(ev.space(), ev.event(i), ev.event(j), ev.event(k)))
                    triples.insert({i, j, k});
    return TernaryRelation::from_indices(ev.labels(), triples);
}

/// G(b): vertices are all two-element subsets of the ground set, edges
/// {i,j} -> {i,k} for every (i,j,k) in b with pairwise distinct entries.
struct BetweennessDigraph {
    std::vector<LabelPair> vertices;
    std::set<std::pair<std::size_t, std::size_t>> edges;

    std::size_t vertex_index(const LabelPair& p) const
    {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), p);
        return static_cast<std::size_t>(it - vertices.begin());
    }
};

inline BetweennessDigraph build_digraph(const TernaryRelation& b)
{
    BetweennessDigraph g;
    const auto& ground = b.ground_set();
    for (std::size_t i = 0; i < ground.size(); ++i)
        for (std::size_t j = i + 1; j < ground.size(); ++j)
            g.vertices.push_back({ground[i], ground[j]});
    for (const auto& [i, j, k] : b.triples())
        if (i != j && j != k && i != k)
            g.edges.emplace(g.vertex_index(make_pair_key(b.label(i), b.label(j))),
                            g.vertex_index(make_pair_key(b.label(i), b.label(k))));
    return g;
}

/// First directed cycle found by depth-first search in vertex order, as a
/// closed walk whose first and last vertices coincide.
inline std::optional<std::vector<LabelPair>> find_cycle(const BetweennessDigraph& g)
{
    const std::size_t n = g.vertices.size();
    std::vector<std::vector<std::size_t>> out(n);
    for (auto [u, v] : g.edges)
        out[u].push_back(v);

    enum class Mark { fresh, active, done };
    std::vector<Mark> mark(n, Mark::fresh);
    std::vector<std::size_t> path;

    // Iterative DFS: stack of (vertex, next successor position).
    for (std::size_t root = 0; root < n; ++root) {
        if (mark[root] != Mark::fresh)
            continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        mark[root] = Mark::active;
        path.assign(1, root);
        while (!stack.empty()) {
            auto& [u, pos] = stack.back();
            if (pos == out[u].size()) {
                mark[u] = Mark::done;
                stack.pop_back();
                path.pop_back();
                continue;
            }
            const std::size_t v = out[u][pos++];
            if (mark[v] == Mark::active) {
                std::vector<LabelPair> cycle;
                auto start = std::find(path.begin(), path.end(), v);
                for (auto it = start; it != path.end(); ++it)
                    cycle.push_back(g.vertices[*it]);
                cycle.push_back(g.vertices[v]);
                return cycle;
            }
            if (mark[v] == Mark::fresh) {
                mark[v] = Mark::active;
                stack.emplace_back(v, 0);
                path.push_back(v);
            }
        }
    }
    return std::nullopt;
}

/// Kahn's algorithm with smallest-index tie breaking; nullopt on a cycle.
inline std::optional<std::vector<LabelPair>> topological_order(const BetweennessDigraph& g)
{
    const std::size_t n = g.vertices.size();
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (auto [u, v] : g.edges) {
        out[u].push_back(v);
        ++indegree[v];
    }
    std::set<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indegree[v] == 0)
            ready.insert(v);
    std::vector<LabelPair> order;
    while (!ready.empty()) {
        const std::size_t u = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(g.vertices[u]);
        for (std::size_t v : out[u])
            if (--indegree[v] == 0)
                ready.insert(v);
    }
    if (order.size() != n)
        return std::nullopt;
    return order;
}

inline std::string to_dot(const BetweennessDigraph& g)
{
    auto name = [](const LabelPair& p) {
        std::string s = "{" + p[0] + "," + p[1] + "}";
        std::string quoted = "\"";
        for (char ch : s) {
            if (ch == '"' || ch == '\\')
                quoted += '\\';
            quoted += ch;
        }
        return quoted + "\"";
    };
    std::ostringstream os;
    os << "digraph G {\n";
    for (const auto& v : g.vertices)
        os << "  " << name(v) << ";\n";
    for (auto [u, v] : g.edges)
        os << "  " << name(g.vertices[u]) << " -> " << name(g.vertices[v]) << ";\n";
    os << "}\n";
    return os.str();
}

struct BetweennessCheck {
    enum class Failure { none, repeated_element, missing_mirror, cycle };

    bool holds = true;
    Failure failure = Failure::none;
    /// Offending triple for repeated_element / missing_mirror.
    std::optional<LabelTriple> triple;
    /// Closed walk for cycle.
    std::vector<LabelPair> cycle;
};

inline std::string_view failure_name(BetweennessCheck::Failure f)
{
    switch (f) {
    case BetweennessCheck::Failure::none: return "none";
    case BetweennessCheck::Failure::repeated_element: return "repeated_element";
    case BetweennessCheck::Failure::missing_mirror: return "missing_mirror";
    case BetweennessCheck::Failure::cycle: return "cycle";
    }
    return "?";
}

/// Distinct entries, closure under (i,j,k) -> (k,j,i), and acyclic G(b).
inline BetweennessCheck check_abstract_betweenness(const TernaryRelation& b)
{
    BetweennessCheck out;
    for (const auto& [i, j, k] : b.triples())
        if (i == j || j == k || i == k) {
            out.holds = false;
            out.failure = BetweennessCheck::Failure::repeated_element;
            out.triple = LabelTriple{b.label(i), b.label(j), b.label(k)};
            return out;
        }
    for (const auto& [i, j, k] : b.triples())
        if (!b.contains(k, j, i)) {
            out.holds = false;
            out.failure = BetweennessCheck::Failure::missing_mirror;
            out.triple = LabelTriple{b.label(i), b.label(j), b.label(k)};
            return out;
        }
    if (auto cycle = find_cycle(build_digraph(b))) {
        out.holds = false;
        out.failure = BetweennessCheck::Failure::cycle;
        out.cycle = std::move(*cycle);
    }
    return out;
}

struct ForkBetweennessReport {
    bool fork_representable = false;
    /// (i,j,i) absent for all i != j.
    bool identity_equivalence = false;
    bool sharp_is_abstract_betweenness = false;
    /// Hypotheses of the comparison claim hold: representable with identity equivalence.
    bool claim_applies = false;
};

/// Throws InternalError if r is representable with identity equivalence while
/// its distinct-triple part is not an abstract causal betweenness.
inline ForkBetweennessReport compare_fork_and_betweenness(const TernaryRelation& r, const RepresentOptions& options = {})
{
    ForkBetweennessReport rep;
    rep.fork_representable = std::holds_alternative<Representable>(fork_represent(r, options));
    rep.identity_equivalence = has_identity_equivalence(r);
    rep.sharp_is_abstract_betweenness = check_abstract_betweenness(sharp(r)).holds;
    rep.claim_applies = rep.fork_representable && rep.identity_equivalence;
    if (rep.claim_applies && !rep.sharp_is_abstract_betweenness)
        throw InternalError("representable relation with identity equivalence has a non-betweenness sharp part");
    return rep;
}

} // namespace forkrep
