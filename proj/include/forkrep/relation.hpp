#pragma once

// Finite ternary relations, the forkness axioms, fork equivalence and quotients.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forkrep/errors.hpp"

namespace forkrep {

using Label = std::string;
using LabelTriple = std::array<Label, 3>;
using IndexTriple = std::array<std::size_t, 3>;

/// A ternary relation over a finite ground set of opaque string labels.
///
/// The ground set is kept in lexicographic order and triples are stored by
/// ground-set index, so two relations with the same labels and triples compare
/// equal regardless of how they were built.
class TernaryRelation {
public:
    TernaryRelation() = default;

    TernaryRelation(std::vector<Label> ground_set, const std::vector<LabelTriple>& triples)
        : TernaryRelation(std::move(ground_set))
    {
        for (const auto& t : triples) {
            const IndexTriple idx{require_index(t[0]), require_index(t[1]), require_index(t[2])};
            if (!triples_.insert(idx).second)
                throw InvalidArgument("duplicate triple (" + t[0] + "," + t[1] + "," + t[2] + ")");
            cube_[offset(idx[0], idx[1], idx[2])] = 1;
        }
    }

    /// Builds from index triples over an already sorted, duplicate-free ground set.
    static TernaryRelation from_indices(std::vector<Label> ground_set, const std::set<IndexTriple>& triples)
    {
        TernaryRelation r(std::move(ground_set));
        for (const auto& t : triples) {
            if (t[0] >= r.size() || t[1] >= r.size() || t[2] >= r.size())
                throw InvalidArgument("triple index outside the ground set");
            r.triples_.insert(t);
            r.cube_[r.offset(t[0], t[1], t[2])] = 1;
        }
        return r;
    }

    std::size_t size() const noexcept { return ground_.size(); }
    const std::vector<Label>& ground_set() const noexcept { return ground_; }
    const Label& label(std::size_t i) const { return ground_.at(i); }

    std::optional<std::size_t> index_of(std::string_view label) const
    {
        auto it = std::lower_bound(ground_.begin(), ground_.end(), label);
        if (it == ground_.end() || *it != label)
            return std::nullopt;
        return static_cast<std::size_t>(it - ground_.begin());
    }

    bool contains(std::size_t i, std::size_t j, std::size_t k) const noexcept
    {
        return cube_[offset(i, j, k)] != 0;
    }

    bool contains(std::string_view i, std::string_view j, std::string_view k) const
    {
        auto a = index_of(i), b = index_of(j), c = index_of(k);
        return a && b && c && contains(*a, *b, *c);
    }

    /// Triples in lexicographic index order, which is lexicographic label order.
    const std::set<IndexTriple>& triples() const noexcept { return triples_; }

    std::vector<LabelTriple> label_triples() const
    {
        std::vector<LabelTriple> out;
        out.reserve(triples_.size());
        for (const auto& t : triples_)
            out.push_back({ground_[t[0]], ground_[t[1]], ground_[t[2]]});
        return out;
    }

    bool empty() const noexcept { return triples_.empty(); }

    friend bool operator==(const TernaryRelation& a, const TernaryRelation& b)
    {
        return a.ground_ == b.ground_ && a.triples_ == b.triples_;
    }

private:
    explicit TernaryRelation(std::vector<Label> ground_set) : ground_(std::move(ground_set))
    {
        std::sort(ground_.begin(), ground_.end());
        if (std::adjacent_find(ground_.begin(), ground_.end()) != ground_.end())
            throw InvalidArgument("duplicate label in ground set");
        const std::size_t n = ground_.size();
        cube_.assign(n * n * n, 0);
    }

    std::size_t require_index(const Label& label) const
    {
        auto idx = index_of(label);
        if (!idx)
            throw InvalidArgument("label '" + label + "' is not in the ground set");
        return *idx;
    }

    std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const noexcept
    {
        const std::size_t n = ground_.size();
        return (i * n + j) * n + k;
    }

    std::vector<Label> ground_;
    std::vector<unsigned char> cube_;
    std::set<IndexTriple> triples_;
};

// ---------------------------------------------------------------------------
// Axioms

enum class Axiom : std::size_t { symmetry, transitivity, flip, lower, betweenness, regularity };

inline constexpr std::array<Axiom, 6> all_axioms{Axiom::symmetry, Axiom::transitivity, Axiom::flip,
                                                 Axiom::lower,    Axiom::betweenness,  Axiom::regularity};

inline constexpr std::string_view axiom_name(Axiom a)
{
    switch (a) {
    case Axiom::symmetry: return "sym";
    case Axiom::transitivity: return "trans";
    case Axiom::flip: return "flip";
    case Axiom::lower: return "lower";
    case Axiom::betweenness: return "btw";
    case Axiom::regularity: return "regular";
    }
    return "?";
}

inline std::optional<Axiom> axiom_from_name(std::string_view name)
{
    for (Axiom a : all_axioms)
        if (axiom_name(a) == name)
            return a;
    return std::nullopt;
}

/// Result of evaluating one axiom.
///
/// The witness lists the values bound to the axiom's quantified variables, in
/// the order they are written: (i,j) for sym; (i,j,k) for trans, flip, lower
/// and btw; (i,j,k,i',j',k') for regular.
struct AxiomOutcome {
    bool evaluated = false;
    bool holds = true;
    std::vector<Label> witness;
};

struct AxiomReport {
    std::array<AxiomOutcome, 6> outcomes;

    const AxiomOutcome& operator[](Axiom a) const { return outcomes[static_cast<std::size_t>(a)]; }
    AxiomOutcome& operator[](Axiom a) { return outcomes[static_cast<std::size_t>(a)]; }

    bool is_forkness() const
    {
        for (Axiom a : all_axioms)
            if (a != Axiom::regularity && !((*this)[a].evaluated && (*this)[a].holds))
                return false;
        return true;
    }

    bool is_regular_forkness() const
    {
        return is_forkness() && (*this)[Axiom::regularity].evaluated && (*this)[Axiom::regularity].holds;
    }

    /// Copies every evaluated outcome of `other` into this report.
    void merge(const AxiomReport& other)
    {
        for (Axiom a : all_axioms)
            if (other[a].evaluated)
                (*this)[a] = other[a];
    }
};

namespace detail {

inline void record_failure(AxiomOutcome& out, const TernaryRelation& r, std::initializer_list<std::size_t> idx)
{
    out.holds = false;
    for (std::size_t i : idx)
        out.witness.push_back(r.label(i));
}

inline bool in_domain(const TernaryRelation& r, std::size_t i) { return r.contains(i, i, i); }

/// i ~ j: both in V_r and (i,j,i) in r.
inline bool fork_equivalent(const TernaryRelation& r, std::size_t i, std::size_t j)
{
    return in_domain(r, i) && in_domain(r, j) && r.contains(i, j, i);
}

} // namespace detail

/// Evaluates sym, trans, flip, lower and btw literally over all i, j, k.
/// Each axiom is evaluated independently; regular is left unevaluated.
inline AxiomReport check_forkness(const TernaryRelation& r)
{
    AxiomReport report;
    const std::size_t n = r.size();
    for (Axiom a : {Axiom::symmetry, Axiom::transitivity, Axiom::flip, Axiom::lower, Axiom::betweenness})
        report[a].evaluated = true;

    auto& sym = report[Axiom::symmetry];
    for (std::size_t i = 0; i < n && sym.holds; ++i)
        for (std::size_t j = 0; j < n && sym.holds; ++j)
            if (r.contains(i, j, i) && !r.contains(j, i, j))
                detail::record_failure(sym, r, {i, j});

    auto& trans = report[Axiom::transitivity];
    auto& flip = report[Axiom::flip];
    auto& lower = report[Axiom::lower];
    auto& btw = report[Axiom::betweenness];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (trans.holds && r.contains(i, j, i) && r.contains(j, k, j) && !r.contains(i, k, i))
                    detail::record_failure(trans, r, {i, j, k});
                if (flip.holds && r.contains(i, k, j) && !r.contains(j, k, i))
                    detail::record_failure(flip, r, {i, j, k});
                if (lower.holds && r.contains(i, j, k)
                    && !(r.contains(i, j, j) && r.contains(j, k, k) && r.contains(k, i, i)))
                    detail::record_failure(lower, r, {i, j, k});
                if (btw.holds && r.contains(i, k, j) && r.contains(i, j, k) && !r.contains(j, k, j))
                    detail::record_failure(btw, r, {i, j, k});
            }
        }
    }
    return report;
}

/// Evaluates the regularity axiom with ~ computed literally from r.
///
/// Only substitutions whose antecedent can hold are visited, i.e. the loops run
/// over (i,j,k) in r and over the ~-classes of i, j and k; every other
/// substitution satisfies the implication vacuously.
inline AxiomReport check_regular(const TernaryRelation& r)
{
    AxiomReport report;
    auto& reg = report[Axiom::regularity];
    reg.evaluated = true;

    const std::size_t n = r.size();
    std::vector<std::vector<std::size_t>> equivalents(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (detail::fork_equivalent(r, i, j))
                equivalents[i].push_back(j);

    for (const auto& t : r.triples()) {
        for (std::size_t i2 : equivalents[t[0]])
            for (std::size_t j2 : equivalents[t[1]])
                for (std::size_t k2 : equivalents[t[2]])
                    if (!r.contains(i2, j2, k2)) {
                        detail::record_failure(reg, r, {t[0], t[1], t[2], i2, j2, k2});
                        return report;
                    }
    }
    return report;
}

/// All six axioms.
inline AxiomReport check_all(const TernaryRelation& r)
{
    AxiomReport report = check_forkness(r);
    report.merge(check_regular(r));
    return report;
}

/// V_r = {i : (i,i,i) in r}, as ground-set indices.
inline std::vector<std::size_t> fork_domain(const TernaryRelation& r)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (detail::in_domain(r, i))
            out.push_back(i);
    return out;
}

inline bool fork_equivalent(const TernaryRelation& r, std::string_view i, std::string_view j)
{
    auto a = r.index_of(i), b = r.index_of(j);
    return a && b && detail::fork_equivalent(r, *a, *b);
}

// ---------------------------------------------------------------------------
// Quotient

struct QuotientResult {
    /// Classes of ~ in canonical order; members sorted, the first member is the class label.
    std::vector<std::vector<Label>> classes;
    /// Element of V_r -> its class label.
    std::map<Label, Label> class_of;
    /// Relation over the class labels.
    TernaryRelation quotient;

    const Label& class_label(std::size_t c) const { return classes.at(c).front(); }
};

/// Quotient of a regular forkness; throws NotRegularForkness otherwise.
inline QuotientResult quotient(const TernaryRelation& r)
{
    const AxiomReport report = check_all(r);
    if (!report.is_regular_forkness()) {
        std::string failed;
        for (Axiom a : all_axioms)
            if (!report[a].holds)
                failed += (failed.empty() ? "" : ", ") + std::string(axiom_name(a));
        throw NotRegularForkness("relation is not a regular forkness (fails " + failed + ")");
    }

    const std::size_t n = r.size();
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> class_index(n, none);

    QuotientResult result;
    std::vector<Label> class_labels;
    for (std::size_t i : fork_domain(r)) {
        if (class_index[i] != none)
            continue;
        const std::size_t c = result.classes.size();
        result.classes.emplace_back();
        for (std::size_t j = i; j < n; ++j) {
            if (detail::fork_equivalent(r, i, j)) {
                class_index[j] = c;
                result.classes.back().push_back(r.label(j));
                result.class_of[r.label(j)] = r.label(i);
            }
        }
        class_labels.push_back(r.label(i));
    }

    // Class labels inherit the sorted order of their smallest members, so class
    // number c is also the index of its label in the quotient ground set.
    std::set<IndexTriple> q;
    for (const auto& t : r.triples())
        q.insert({class_index[t[0]], class_index[t[1]], class_index[t[2]]});
    result.quotient = TernaryRelation::from_indices(std::move(class_labels), q);
    return result;
}

/// Triples of r whose three components are pairwise distinct.
inline TernaryRelation sharp(const TernaryRelation& r)
{
    std::set<IndexTriple> out;
    for (const auto& t : r.triples())
        if (t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
            out.insert(t);
    return TernaryRelation::from_indices(r.ground_set(), out);
}

/// True when (i,j,i) is absent for every i != j.
inline bool has_identity_equivalence(const TernaryRelation& r)
{
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j)
            if (i != j && r.contains(i, j, i))
                return false;
    return true;
}

} // namespace forkrep
