#pragma once

// Exact finite probability spaces and the event predicates built on them:
// covariance, correlation, conditional independence and conjunctive forks.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forkrep/errors.hpp"
#include "forkrep/rational.hpp"
#include "forkrep/relation.hpp"

namespace forkrep {

/// A subset of the atoms of a finite space, stored as a bitset.
class Event {
public:
    Event() = default;
    explicit Event(std::size_t atom_count) : count_(atom_count), words_((atom_count + 63) / 64, 0) {}

    static Event full(std::size_t atom_count)
    {
        Event e(atom_count);
        for (std::size_t i = 0; i < atom_count; ++i)
            e.insert(i);
        return e;
    }

    std::size_t atom_count() const noexcept { return count_; }

    bool contains(std::size_t atom) const noexcept { return (words_[atom / 64] >> (atom % 64)) & 1U; }
    void insert(std::size_t atom) { words_.at(atom / 64) |= std::uint64_t{1} << (atom % 64); }
    void erase(std::size_t atom) { words_.at(atom / 64) &= ~(std::uint64_t{1} << (atom % 64)); }

    std::size_t cardinality() const noexcept
    {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::vector<std::size_t> members() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < count_; ++i)
            if (contains(i))
                out.push_back(i);
        return out;
    }

    Event complement() const
    {
        Event e(count_);
        for (std::size_t i = 0; i < count_; ++i)
            if (!contains(i))
                e.insert(i);
        return e;
    }

    friend Event operator&(const Event& a, const Event& b) { return combine(a, b, [](auto x, auto y) { return x & y; }); }
    friend Event operator|(const Event& a, const Event& b) { return combine(a, b, [](auto x, auto y) { return x | y; }); }
    friend Event operator^(const Event& a, const Event& b) { return combine(a, b, [](auto x, auto y) { return x ^ y; }); }

    friend bool operator==(const Event&, const Event&) = default;

private:
    template <typename Op>
    static Event combine(const Event& a, const Event& b, Op op)
    {
        if (a.count_ != b.count_)
            throw InvalidArgument("events belong to spaces of different sizes");
        Event e(a.count_);
        for (std::size_t w = 0; w < e.words_.size(); ++w)
            e.words_[w] = op(a.words_[w], b.words_[w]);
        return e;
    }

    std::size_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Finite atom list with exact non-negative masses summing to one.
/// Every subset of atoms is an event.
class FiniteProbabilitySpace {
public:
    FiniteProbabilitySpace() = default;

    FiniteProbabilitySpace(std::vector<std::string> atom_ids, std::vector<Rational> masses)
        : ids_(std::move(atom_ids)), masses_(std::move(masses))
    {
        if (ids_.size() != masses_.size())
            throw InvalidArgument("atom and mass lists differ in length");
        Rational total = 0;
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            if (!index_.emplace(ids_[i], i).second)
                throw InvalidArgument("duplicate atom id '" + ids_[i] + "'");
            masses_[i].canonicalize();
            if (masses_[i] < 0)
                throw InvalidArgument("negative mass on atom '" + ids_[i] + "'");
            if (masses_[i] > 0)
                support_.push_back(i);
            total += masses_[i];
        }
        if (total != 1)
            throw InvalidArgument("masses sum to " + format_rational(total) + ", not 1");
    }

    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& atom_ids() const noexcept { return ids_; }
    const std::string& atom_id(std::size_t i) const { return ids_.at(i); }
    const Rational& mass(std::size_t i) const { return masses_.at(i); }
    const std::vector<Rational>& masses() const noexcept { return masses_; }

    /// Atoms of positive mass, ascending.
    const std::vector<std::size_t>& support() const noexcept { return support_; }

    std::optional<std::size_t> index_of(const std::string& id) const
    {
        auto it = index_.find(id);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    Event event(const std::vector<std::string>& ids) const
    {
        Event e(size());
        for (const auto& id : ids) {
            auto idx = index_of(id);
            if (!idx)
                throw InvalidArgument("unknown atom id '" + id + "'");
            e.insert(*idx);
        }
        return e;
    }

    Event full_event() const { return Event::full(size()); }
    Event empty_event() const { return Event(size()); }

    void require_member(const Event& e) const
    {
        if (e.atom_count() != size())
            throw InvalidArgument("event does not belong to this space");
    }

private:
    std::vector<std::string> ids_;
    std::vector<Rational> masses_;
    std::vector<std::size_t> support_;
    std::map<std::string, std::size_t> index_;
};

/// A family of events over one shared space, indexed by sorted labels.
class IndexedEvents {
public:
    IndexedEvents() = default;

    IndexedEvents(FiniteProbabilitySpace space, std::map<Label, Event> events) : space_(std::move(space))
    {
        for (auto& [label, ev] : events) {
            space_.require_member(ev);
            labels_.push_back(label);
            events_.push_back(std::move(ev));
        }
    }

    const FiniteProbabilitySpace& space() const noexcept { return space_; }
    const std::vector<Label>& labels() const noexcept { return labels_; }
    const std::vector<Event>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return labels_.size(); }
    const Event& event(std::size_t i) const { return events_.at(i); }

    const Event& event(const Label& label) const
    {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
        if (it == labels_.end() || *it != label)
            throw InvalidArgument("no event labelled '" + label + "'");
        return events_[static_cast<std::size_t>(it - labels_.begin())];
    }

private:
    FiniteProbabilitySpace space_;
    std::vector<Label> labels_;
    std::vector<Event> events_;
};

// ---------------------------------------------------------------------------
// Measure and basic predicates

inline Rational prob(const FiniteProbabilitySpace& space, const Event& e)
{
    space.require_member(e);
    Rational p = 0;
    for (std::size_t atom : space.support())
        if (e.contains(atom))
            p += space.mass(atom);
    return p;
}

inline Rational cond_prob(const FiniteProbabilitySpace& space, const Event& e, const Event& given)
{
    const Rational pf = prob(space, given);
    if (pf == 0)
        throw ConditioningOnNull("conditioning event has probability zero");
    return prob(space, e & given) / pf;
}

inline Rational covariance(const FiniteProbabilitySpace& space, const Event& e, const Event& f)
{
    return prob(space, e & f) - prob(space, e) * prob(space, f);
}

inline bool p_nontrivial(const FiniteProbabilitySpace& space, const Event& e)
{
    const Rational p = prob(space, e);
    return p > 0 && p < 1;
}

inline bool p_equal(const FiniteProbabilitySpace& space, const Event& e, const Event& f)
{
    return prob(space, e ^ f) == 0;
}

/// Signed squared correlation sign(cov)·cov²/(cov(E,E)·cov(F,F)).
/// Throws TrivialEvent when either event has probability 0 or 1.
inline Rational signed_squared_correlation(const FiniteProbabilitySpace& space, const Event& e, const Event& f)
{
    const Rational ve = covariance(space, e, e);
    const Rational vf = covariance(space, f, f);
    if (ve == 0 || vf == 0)
        throw TrivialEvent("correlation needs P-nontrivial events");
    const Rational c = covariance(space, e, f);
    Rational out = c * c / (ve * vf);
    return sgn(c) < 0 ? Rational(-out) : out;
}

using EventPair = std::pair<Event, Event>;

/// Compares Π corr(lhs) with Π corr(rhs) exactly, via signs and squared magnitudes.
inline std::strong_ordering compare_correlation_products(const FiniteProbabilitySpace& space,
                                                         std::span<const EventPair> lhs,
                                                         std::span<const EventPair> rhs)
{
    auto product = [&](std::span<const EventPair> pairs) {
        Rational sq = 1;
        int s = 1;
        for (const auto& [e, f] : pairs) {
            const Rational v = signed_squared_correlation(space, e, f);
            s *= sgn(v);
            sq *= abs(v);
        }
        return std::pair{s, sq};
    };
    const auto [ls, lsq] = product(lhs);
    const auto [rs, rsq] = product(rhs);
    if (ls != rs)
        return ls <=> rs;
    if (ls == 0)
        return std::strong_ordering::equal;
    const int mag = cmp(lsq, rsq);
    // Larger magnitude ranks higher for positive products and lower for negative ones.
    const int ord = ls > 0 ? mag : -mag;
    return ord <=> 0;
}

// ---------------------------------------------------------------------------
// Conditional independence and conjunctive forks

/// Masses of the eight cells cut out by three events, index 4a + 2b + c.
struct TripleTable {
    std::array<Rational, 8> cell{};

    const Rational& at(int a, int b, int c) const { return cell[static_cast<std::size_t>(4 * a + 2 * b + c)]; }

    /// Probability of the conjunction of the fixed coordinates; -1 means "any".
    Rational marginal(int a, int b, int c) const
    {
        Rational p = 0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 2; ++z)
                    if ((a < 0 || a == x) && (b < 0 || b == y) && (c < 0 || c == z))
                        p += at(x, y, z);
        return p;
    }
};

inline TripleTable triple_table(const FiniteProbabilitySpace& space, const Event& a, const Event& b, const Event& c)
{
    space.require_member(a);
    space.require_member(b);
    space.require_member(c);
    TripleTable t;
    for (std::size_t atom : space.support()) {
        const std::size_t idx = 4U * a.contains(atom) + 2U * b.contains(atom) + c.contains(atom);
        t.cell[idx] += space.mass(atom);
    }
    return t;
}

namespace detail {

// Conditional probabilities given B = b_value, as in the textbook definition.
inline bool ci_given(const TripleTable& t, int b_value)
{
    const Rational pb = t.marginal(-1, b_value, -1);
    const Rational p_ac = t.at(1, b_value, 1) / pb;
    const Rational p_a = t.marginal(1, b_value, -1) / pb;
    const Rational p_c = t.marginal(-1, b_value, 1) / pb;
    return p_ac == p_a * p_c;
}

inline bool conditionally_independent(const TripleTable& t)
{
    const Rational pb = t.marginal(-1, 1, -1);
    if (pb == 0 || pb == 1)
        throw TrivialConditioner("conditioning event must have probability strictly between 0 and 1");
    return ci_given(t, 1) && ci_given(t, 0);
}

} // namespace detail

/// 1_A and 1_C conditionally independent given 1_B.
inline bool conditionally_independent(const FiniteProbabilitySpace& space, const Event& a, const Event& c,
                                      const Event& b)
{
    return detail::conditionally_independent(triple_table(space, a, b, c));
}

/// Fork test through the four defining equations on conditional probabilities.
inline bool fork_by_conditionals(const TripleTable& t)
{
    const Rational pb = t.marginal(-1, 1, -1);
    if (pb == 0 || pb == 1)
        return false;
    const Rational pnb = 1 - pb;
    const bool eq1 = detail::ci_given(t, 1);
    const bool eq2 = detail::ci_given(t, 0);
    const bool eq3 = t.marginal(1, 1, -1) / pb > t.marginal(1, 0, -1) / pnb;
    const bool eq4 = t.marginal(-1, 1, 1) / pb > t.marginal(-1, 0, 1) / pnb;
    return eq1 && eq2 && eq3 && eq4;
}

/// Fork test through conditional independence plus cov(A,B) > 0 and cov(B,C) > 0,
/// with independence checked in cross-multiplied form.
inline bool fork_by_covariances(const TripleTable& t)
{
    const Rational pa = t.marginal(1, -1, -1);
    const Rational pb = t.marginal(-1, 1, -1);
    const Rational pc = t.marginal(-1, -1, 1);
    if (pb == 0 || pb == 1)
        return false;
    const bool ci_b = t.at(1, 1, 1) * pb == t.marginal(1, 1, -1) * t.marginal(-1, 1, 1);
    const bool ci_nb = t.at(1, 0, 1) * (1 - pb) == t.marginal(1, 0, -1) * t.marginal(-1, 0, 1);
    const Rational cov_ab = t.marginal(1, 1, -1) - pa * pb;
    const Rational cov_bc = t.marginal(-1, 1, 1) - pb * pc;
    return ci_b && ci_nb && cov_ab > 0 && cov_bc > 0;
}

/// (A,B,C) is a conjunctive fork. A P-trivial middle event gives false.
///
/// Both characterizations are evaluated when FORKREP_CROSS_CHECK is defined or
/// assertions are enabled, and a disagreement throws InternalError.
inline bool is_conjunctive_fork(const FiniteProbabilitySpace& space, const Event& a, const Event& b, const Event& c)
{
    const TripleTable t = triple_table(space, a, b, c);
    const bool by_conditionals = fork_by_conditionals(t);
#if defined(FORKREP_CROSS_CHECK) || !defined(NDEBUG)
    if (by_conditionals != fork_by_covariances(t))
        throw InternalError("conjunctive fork characterizations disagree");
#endif
    return by_conditionals;
}

/// r = {(i,j,k) : (A_i,A_j,A_k) is a conjunctive fork}, by brute force over all triples.
inline TernaryRelation extract_fork_relation(const IndexedEvents& ev)
{
    const std::size_t n = ev.size();
    std::set<IndexTriple> triples;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (is_conjunctive_fork(ev.space(), ev.event(i), ev.event(j), ev.event(k)))
                    triples.insert({i, j, k});
    return TernaryRelation::from_indices(ev.labels(), triples);
}

} // namespace forkrep
