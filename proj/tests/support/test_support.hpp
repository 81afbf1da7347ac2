#pragma once

// Test-only helpers: an independent axiom evaluator, forkness closure, and
// seeded generators of exact random probability spaces.

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "forkrep/forkrep.hpp"

namespace forkrep::testing {

using T3 = std::tuple<std::string, std::string, std::string>;

inline std::set<T3> as_set(const TernaryRelation& r)
{
    std::set<T3> s;
    for (const auto& t : r.label_triples())
        s.emplace(t[0], t[1], t[2]);
    return s;
}

/// Literal quantifier evaluation over label tuples, written independently of
/// the library's index-based loops.
struct NaiveAxioms {
    bool sym = true, trans = true, flip = true, lower = true, btw = true, regular = true;
};

inline NaiveAxioms naive_axioms(const TernaryRelation& r)
{
    const auto s = as_set(r);
    const auto& N = r.ground_set();
    auto in = [&](const std::string& a, const std::string& b, const std::string& c) { return s.count({a, b, c}) > 0; };
    auto eq = [&](const std::string& a, const std::string& b) { return in(a, a, a) && in(b, b, b) && in(a, b, a); };

    NaiveAxioms out;
    for (const auto& i : N)
        for (const auto& j : N) {
            if (in(i, j, i) && !in(j, i, j))
                out.sym = false;
            for (const auto& k : N) {
                if (in(i, j, i) && in(j, k, j) && !in(i, k, i))
                    out.trans = false;
                if (in(i, k, j) && !in(j, k, i))
                    out.flip = false;
                if (in(i, j, k) && !(in(i, j, j) && in(j, k, k) && in(k, i, i)))
                    out.lower = false;
                if (in(i, k, j) && in(i, j, k) && !in(j, k, j))
                    out.btw = false;
                for (const auto& i2 : N)
                    for (const auto& j2 : N)
                        for (const auto& k2 : N)
                            if (in(i, j, k) && eq(i, i2) && eq(j, j2) && eq(k, k2) && !in(i2, j2, k2))
                                out.regular = false;
            }
        }
    return out;
}

/// Smallest forkness containing `seed` (fixpoint of the five closure rules).
inline TernaryRelation forkness_closure(const std::vector<std::string>& ground, const std::vector<LabelTriple>& seed)
{
    std::set<T3> r;
    for (const auto& t : seed)
        r.emplace(t[0], t[1], t[2]);
    bool changed = true;
    while (changed) {
        std::set<T3> next = r;
        for (const auto& [i, j, k] : r) {
            if (i == k)
                next.emplace(j, i, j);
            next.emplace(k, j, i);
            next.emplace(i, j, j);
            next.emplace(j, k, k);
            next.emplace(k, i, i);
            if (r.count({i, k, j}))
                next.emplace(j, k, j);
            if (i == k)
                for (const auto& [a, b, c] : r)
                    if (a == j && c == j)
                        next.emplace(i, b, i);
        }
        changed = next != r;
        r = std::move(next);
    }
    std::vector<LabelTriple> triples;
    for (const auto& [a, b, c] : r)
        triples.push_back({a, b, c});
    return TernaryRelation(ground, triples);
}

inline std::vector<std::string> labels(std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i)
        out.push_back(std::to_string(i));
    return out;
}

// ---------------------------------------------------------------------------
// Random spaces

using Rng = std::mt19937_64;

inline Rational random_probability(Rng& rng, int max_den = 9)
{
    std::uniform_int_distribution<int> den(2, max_den);
    const int d = den(rng);
    std::uniform_int_distribution<int> num(1, d - 1);
    return Rational(num(rng), d);
}

/// Random masses (some zero) over `atoms` atoms and independent random events.
inline IndexedEvents random_generic_family(Rng& rng, std::size_t atoms, std::size_t events)
{
    std::uniform_int_distribution<int> weight(0, 6);
    std::vector<int> w(atoms);
    int total = 0;
    while (total == 0) {
        total = 0;
        for (auto& x : w) {
            x = weight(rng) == 0 ? 0 : weight(rng) + 1;
            total += x;
        }
    }
    std::vector<std::string> ids;
    std::vector<Rational> masses;
    for (std::size_t a = 0; a < atoms; ++a) {
        ids.push_back("w" + std::to_string(a));
        masses.emplace_back(w[a], total);
    }
    FiniteProbabilitySpace space(ids, masses);
    std::bernoulli_distribution coin(0.5);
    std::map<Label, Event> ev;
    for (std::size_t i = 0; i < events; ++i) {
        Event e(atoms);
        for (std::size_t a = 0; a < atoms; ++a)
            if (coin(rng))
                e.insert(a);
        ev.emplace(std::to_string(i + 1), std::move(e));
    }
    return IndexedEvents(std::move(space), std::move(ev));
}

/// Binary tree-structured model: each latent bit depends on a random earlier
/// bit through a random two-row table, so path separation yields conditional
/// independences. Events are latent bits, complements, copies or trivial.
inline IndexedEvents random_tree_family(Rng& rng, std::size_t events)
{
    std::uniform_int_distribution<std::size_t> latent_count(2, 4);
    const std::size_t k = latent_count(rng);
    std::vector<std::size_t> parent(k, 0);
    std::vector<Rational> p_one(k), p_given1(k), p_given0(k);
    p_one[0] = random_probability(rng);
    std::bernoulli_distribution positive(0.8), deterministic(0.1);
    for (std::size_t v = 1; v < k; ++v) {
        parent[v] = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
        Rational a = random_probability(rng), b = random_probability(rng);
        if (deterministic(rng)) {
            a = 1;
            b = 0;
        }
        if ((a < b) == positive(rng))
            std::swap(a, b);
        p_given1[v] = a;
        p_given0[v] = b;
    }

    const std::size_t atoms = std::size_t{1} << k;
    std::vector<std::string> ids;
    std::vector<Rational> masses;
    for (std::size_t w = 0; w < atoms; ++w) {
        Rational m = ((w & 1U) ? p_one[0] : Rational(1 - p_one[0]));
        for (std::size_t v = 1; v < k; ++v) {
            const Rational p = ((w >> parent[v]) & 1U) ? p_given1[v] : p_given0[v];
            m *= ((w >> v) & 1U) ? p : Rational(1 - p);
        }
        ids.push_back("w" + std::to_string(w));
        masses.push_back(m);
    }
    FiniteProbabilitySpace space(ids, masses);

    std::uniform_int_distribution<int> kind(0, 9);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::map<Label, Event> ev;
    std::vector<Event> made;
    for (std::size_t i = 0; i < events; ++i) {
        Event e(atoms);
        const int c = kind(rng);
        if (c == 0 && !made.empty()) {
            e = made[std::uniform_int_distribution<std::size_t>(0, made.size() - 1)(rng)];
        } else if (c == 1) {
            if (std::bernoulli_distribution(0.5)(rng))
                e = Event::full(atoms);
        } else {
            const std::size_t v = pick(rng);
            for (std::size_t w = 0; w < atoms; ++w)
                if ((w >> v) & 1U)
                    e.insert(w);
            if (c == 2)
                e = e.complement();
        }
        made.push_back(e);
        ev.emplace(std::to_string(i + 1), std::move(e));
    }
    return IndexedEvents(std::move(space), std::move(ev));
}

/// Alternates generic and tree-structured families with 3..max_events events.
inline IndexedEvents random_family(Rng& rng, std::size_t min_events = 3, std::size_t max_events = 5)
{
    const std::size_t n = std::uniform_int_distribution<std::size_t>(min_events, max_events)(rng);
    if (std::bernoulli_distribution(0.35)(rng))
        return random_generic_family(rng, std::uniform_int_distribution<std::size_t>(2, 8)(rng), n);
    return random_tree_family(rng, n);
}

// ---------------------------------------------------------------------------
// The two three-event tables with masses over the eight cells ABC, ABc, ...

inline IndexedEvents three_event_table(const std::array<Rational, 8>& abc_masses)
{
    // Order: ABC, ABc, aBC, aBc, AbC, Abc, abC, abc.
    static const std::array<std::array<int, 3>, 8> cells{
        {{1, 1, 1}, {1, 1, 0}, {0, 1, 1}, {0, 1, 0}, {1, 0, 1}, {1, 0, 0}, {0, 0, 1}, {0, 0, 0}}};
    std::vector<std::string> ids;
    std::vector<Rational> masses;
    std::map<Label, Event> ev{{"A", Event(8)}, {"B", Event(8)}, {"C", Event(8)}};
    for (std::size_t c = 0; c < 8; ++c) {
        std::string id;
        id += cells[c][0] ? 'A' : 'a';
        id += cells[c][1] ? 'B' : 'b';
        id += cells[c][2] ? 'C' : 'c';
        ids.push_back(id);
        masses.push_back(abc_masses[c]);
        if (cells[c][0])
            ev.at("A").insert(c);
        if (cells[c][1])
            ev.at("B").insert(c);
        if (cells[c][2])
            ev.at("C").insert(c);
    }
    return IndexedEvents(FiniteProbabilitySpace(ids, masses), std::move(ev));
}

inline IndexedEvents fork_not_between_table()
{
    const Rational f(1, 5);
    return three_event_table({f, f, f, f, 0, 0, 0, f});
}

inline IndexedEvents between_not_fork_table()
{
    auto t = [](int n) { return Rational(n, 20); };
    return three_event_table({t(1), t(2), t(2), t(4), t(0), t(1), t(1), t(9)});
}

inline TernaryRelation closure8()
{
    return forkness_closure(labels(4), {{"1", "3", "2"},
                                        {"2", "3", "4"},
                                        {"3", "1", "4"},
                                        {"1", "4", "2"},
                                        {"2", "3", "1"},
                                        {"4", "3", "2"},
                                        {"4", "1", "3"},
                                        {"2", "4", "1"}});
}

inline TernaryRelation full_relation(std::size_t n)
{
    std::vector<LabelTriple> t;
    const auto g = labels(n);
    for (const auto& a : g)
        for (const auto& b : g)
            for (const auto& c : g)
                t.push_back({a, b, c});
    return TernaryRelation(g, t);
}

// ---------------------------------------------------------------------------
// Synthesizer oracle

// P(intersection of A_i, i in S) = 2^-|S| (1 + sum over terms T within S of (-1)^|T| w_T).
inline Rational closed_form_intersection(const SynthesisResult& s, Subset S)
{
    const auto& labels = s.events.labels();
    auto mask = [&](const std::vector<Label>& members) {
        Subset m = 0;
        for (const auto& l : members)
            m |= Subset{1} << static_cast<unsigned>(std::find(labels.begin(), labels.end(), l) - labels.begin());
        return m;
    };
    Rational bracket = 1;
    for (const auto& [p, x] : s.params.exponents) {
        const Subset t = mask({p[0], p[1]});
        if ((t & S) == t)
            bracket += pow(s.params.gamma, x.get_ui());
    }
    for (const auto& tri : s.families.triangles) {
        const Subset t = mask({tri[0], tri[1], tri[2]});
        if ((t & S) == t)
            bracket -= s.params.epsilon;
    }
    return bracket / Rational(Integer(1) << static_cast<mp_bitcnt_t>(std::popcount(S)));
}

} // namespace forkrep::testing
