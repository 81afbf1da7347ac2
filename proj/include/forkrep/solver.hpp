#pragma once

// The additive pair system x{I,K} = x{I,J} + x{J,K} of a quotient relation and
// an exact decision procedure for strictly positive solutions.
//
// The system is homogeneous, so it has a solution with every x > 0 iff it has
// one with every x >= 1 (divide a positive solution by its smallest entry).
// Feasibility of {equations, x >= 1} is decided by a phase-one simplex over
// exact rationals with Bland's rule. When the phase-one optimum is positive,
// its simplex multipliers form a Farkas certificate.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "forkrep/errors.hpp"
#include "forkrep/rational.hpp"
#include "forkrep/relation.hpp"

namespace forkrep {

/// Unordered pair of distinct labels, stored sorted.
using LabelPair = std::array<Label, 2>;

inline LabelPair make_pair_key(const Label& a, const Label& b)
{
    return a < b ? LabelPair{a, b} : LabelPair{b, a};
}

/// x_lhs = x_addend1 + x_addend2, addends sorted.
struct Equation {
    LabelPair lhs;
    LabelPair addend1;
    LabelPair addend2;

    friend bool operator==(const Equation&, const Equation&) = default;
};

struct LinearSystem {
    /// Sorted pairs {I,J} of distinct classes occurring together in some triple.
    std::vector<LabelPair> variables;
    std::vector<Equation> equations;

    std::optional<std::size_t> variable_index(const LabelPair& p) const
    {
        auto it = std::lower_bound(variables.begin(), variables.end(), p);
        if (it == variables.end() || *it != p)
            return std::nullopt;
        return static_cast<std::size_t>(it - variables.begin());
    }
};

struct PositiveSolution {
    std::map<LabelPair, Rational> assignment;
};

/// One multiplier per equation. With each equation read as
/// x_addend1 + x_addend2 - x_lhs = 0, the weighted sum is a form with
/// non-negative coefficients, at least one positive, that must vanish;
/// no strictly positive x can satisfy that.
struct InfeasibilityCertificate {
    std::vector<Rational> multipliers;
};

using SolveOutcome = std::variant<PositiveSolution, InfeasibilityCertificate>;

/// Pairs of distinct labels that occur together in a triple of q.
inline std::set<LabelPair> pair_family(const TernaryRelation& q)
{
    std::set<LabelPair> pairs;
    for (const auto& t : q.triples())
        for (auto [a, b] : {std::pair{t[0], t[1]}, std::pair{t[1], t[2]}, std::pair{t[0], t[2]}})
            if (a != b)
                pairs.insert(make_pair_key(q.label(a), q.label(b)));
    return pairs;
}

/// Builds the system from a quotient relation. Throws NotAQuotient when some
/// (I,J,I) with I != J is present.
inline LinearSystem build_system(const TernaryRelation& q)
{
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            if (i != j && q.contains(i, j, i))
                throw NotAQuotient("(" + q.label(i) + "," + q.label(j) + "," + q.label(i)
                                   + ") present; fork equivalence is not the identity");

    LinearSystem sys;
    const auto pairs = pair_family(q);
    sys.variables.assign(pairs.begin(), pairs.end());

    std::set<std::tuple<LabelPair, LabelPair, LabelPair>> seen;
    for (const auto& t : q.triples()) {
        const auto [i, j, k] = t;
        if (i == j || j == k || i == k)
            continue;
        Equation eq{make_pair_key(q.label(i), q.label(k)), make_pair_key(q.label(i), q.label(j)),
                    make_pair_key(q.label(j), q.label(k))};
        if (eq.addend2 < eq.addend1)
            std::swap(eq.addend1, eq.addend2);
        if (seen.emplace(eq.lhs, eq.addend1, eq.addend2).second)
            sys.equations.push_back(std::move(eq));
    }
    return sys;
}

namespace detail {

/// Row coefficients of equation e in the form x_a1 + x_a2 - x_lhs.
inline std::vector<std::pair<std::size_t, int>> equation_row(const LinearSystem& sys, const Equation& e)
{
    auto index = [&](const LabelPair& p) {
        auto idx = sys.variable_index(p);
        if (!idx)
            throw InvalidArgument("equation references a pair outside the variable set");
        return *idx;
    };
    return {{index(e.addend1), 1}, {index(e.addend2), 1}, {index(e.lhs), -1}};
}

inline void clear_denominators(std::vector<Rational>& v)
{
    Integer l = 1;
    for (const auto& q : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    Integer g = 0;
    for (auto& q : v) {
        q *= l;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num_mpz_t());
    }
    if (g > 1)
        for (auto& q : v)
            q /= g;
}

} // namespace detail

/// Linear form sum_p c_p x_p obtained by weighting the equations, read as
/// x_a1 + x_a2 - x_lhs = 0, by the certificate's multipliers.
inline std::vector<Rational> certificate_combination(const LinearSystem& sys, const InfeasibilityCertificate& cert)
{
    if (cert.multipliers.size() != sys.equations.size())
        throw InvalidArgument("certificate has " + std::to_string(cert.multipliers.size()) + " multipliers for "
                              + std::to_string(sys.equations.size()) + " equations");
    std::vector<Rational> c(sys.variables.size(), 0);
    for (std::size_t e = 0; e < sys.equations.size(); ++e)
        for (auto [var, coef] : detail::equation_row(sys, sys.equations[e]))
            c[var] += coef * cert.multipliers[e];
    return c;
}

inline SolveOutcome solve_positive(const LinearSystem& sys)
{
    const std::size_t m = sys.equations.size();
    const std::size_t nv = sys.variables.size();
    const std::size_t cols = nv + m; // structural y, then artificials

    // Substituting x = 1 + y turns every row x_a1 + x_a2 - x_lhs = 0 into
    // row·y = -1. Negating gives rhs 1 >= 0, so the artificials start basic.
    std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(cols + 1, 0));
    for (std::size_t e = 0; e < m; ++e) {
        for (auto [var, coef] : detail::equation_row(sys, sys.equations[e]))
            tab[e][var] -= coef;
        tab[e][nv + e] = 1;
        tab[e][cols] = 1;
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t e = 0; e < m; ++e)
        basis[e] = nv + e;

    // Reduced costs of min sum(artificials); last entry is minus the objective.
    std::vector<Rational> cost(cols + 1, 0);
    for (std::size_t j = 0; j < cols; ++j)
        cost[j] = j >= nv ? 1 : 0;
    for (std::size_t e = 0; e < m; ++e)
        for (std::size_t j = 0; j <= cols; ++j)
            cost[j] -= tab[e][j];

    while (true) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        if (enter == cols)
            break;

        std::size_t leave = m;
        Rational best;
        for (std::size_t e = 0; e < m; ++e) {
            if (tab[e][enter] <= 0)
                continue;
            Rational ratio = tab[e][cols] / tab[e][enter];
            if (leave == m || ratio < best || (ratio == best && basis[e] < basis[leave])) {
                leave = e;
                best = ratio;
            }
        }
        // Phase one is bounded below by zero, so an entering column always has a pivot row.
        if (leave == m)
            throw InternalError("phase-one simplex reported an unbounded direction");

        const Rational pivot = tab[leave][enter];
        for (auto& v : tab[leave])
            v /= pivot;
        for (std::size_t e = 0; e < m; ++e) {
            if (e == leave || tab[e][enter] == 0)
                continue;
            const Rational f = tab[e][enter];
            for (std::size_t j = 0; j <= cols; ++j)
                tab[e][j] -= f * tab[leave][j];
        }
        if (cost[enter] != 0) {
            const Rational f = cost[enter];
            for (std::size_t j = 0; j <= cols; ++j)
                cost[j] -= f * tab[leave][j];
        }
        basis[leave] = enter;
    }

    const Rational objective = -cost[cols];
    if (objective == 0) {
        std::vector<Rational> y(nv, 0);
        for (std::size_t e = 0; e < m; ++e)
            if (basis[e] < nv)
                y[basis[e]] = tab[e][cols];
        PositiveSolution sol;
        for (std::size_t v = 0; v < nv; ++v)
            sol.assignment.emplace(sys.variables[v], 1 + y[v]);
        return sol;
    }

    // Simplex multipliers w_e = 1 - (reduced cost of artificial e). They satisfy
    // (-A)^T w <= 0 and 1^T w = objective > 0, hence A^T w >= 0 and nonzero.
    InfeasibilityCertificate cert;
    cert.multipliers.resize(m);
    for (std::size_t e = 0; e < m; ++e)
        cert.multipliers[e] = 1 - cost[nv + e];
    detail::clear_denominators(cert.multipliers);
    return cert;
}

/// Independent check: every variable assigned, all values positive, all equations exact.
inline bool verify_solution(const LinearSystem& sys, const PositiveSolution& sol)
{
    if (sol.assignment.size() != sys.variables.size())
        return false;
    for (const auto& p : sys.variables) {
        auto it = sol.assignment.find(p);
        if (it == sol.assignment.end() || it->second <= 0)
            return false;
    }
    for (const auto& e : sys.equations)
        if (sol.assignment.at(e.lhs) != sol.assignment.at(e.addend1) + sol.assignment.at(e.addend2))
            return false;
    return true;
}

inline bool verify_certificate(const LinearSystem& sys, const InfeasibilityCertificate& cert)
{
    if (cert.multipliers.size() != sys.equations.size())
        return false;
    const auto c = certificate_combination(sys, cert);
    bool positive = false;
    for (const auto& v : c) {
        if (v < 0)
            return false;
        positive = positive || v > 0;
    }
    return positive;
}

/// Multiplies a solution by the LCM of its denominators.
inline std::map<LabelPair, Integer> scale_to_integers(const PositiveSolution& sol)
{
    Integer l = 1;
    for (const auto& [p, v] : sol.assignment)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    std::map<LabelPair, Integer> out;
    for (const auto& [p, v] : sol.assignment) {
        Rational scaled = v * l;
        out.emplace(p, scaled.get_num());
    }
    return out;
}

} // namespace forkrep
