#pragma once

// Witness construction for representable relations.
//
// For a solvable quotient q on classes C (n = |C|) the sample space is the
// power set of C, A_I = {w : I in w}, and
//
//   P(w) = 2^-n [ 1 + sum_{{I,J} in E_q} chi_{IJ}(w) g^x{I,J} + e sum_{{I,J,K} in M_q} chi_{IJK}(w) ]
//
// with chi_L(w) = (-1)^|w ∩ L|, g = 1/(n^2+1) and e = 1/(n^3+1). Exponents are
// the integer-scaled positive solution of the pair system. A regular forkness
// is then represented on the power set of its ground set by copying P onto the
// atoms that are unions of equivalence classes.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "forkrep/errors.hpp"
#include "forkrep/probability.hpp"
#include "forkrep/rational.hpp"
#include "forkrep/relation.hpp"
#include "forkrep/solver.hpp"

namespace forkrep {

/// Subset of a ground set of at most 63 elements; bit i is ground-set index i.
using Subset = std::uint64_t;

/// chi_L(w) = (-1)^|w ∩ L|.
inline int character(Subset l, Subset w) { return std::popcount(l & w) % 2 == 0 ? 1 : -1; }

using LabelTripleSet = std::array<Label, 3>;

struct Families {
    /// E_q: pairs of distinct classes occurring together in a triple of q.
    std::set<LabelPair> edges;
    /// M_q: sorted 3-sets whose three pairs are edges and that carry no triple of q.
    std::set<LabelTripleSet> triangles;
};

inline Families build_families(const TernaryRelation& q)
{
    Families f;
    f.edges = pair_family(q);
    const std::size_t n = q.size();
    auto edge = [&](std::size_t a, std::size_t b) { return f.edges.count(make_pair_key(q.label(a), q.label(b))) > 0; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                if (!(edge(i, j) && edge(j, k) && edge(i, k)))
                    continue;
                const std::array<std::size_t, 3> s{i, j, k};
                bool carried = false;
                for (std::size_t a : s)
                    for (std::size_t b : s)
                        for (std::size_t c : s)
                            if (a != b && b != c && a != c && q.contains(a, b, c))
                                carried = true;
                if (!carried)
                    f.triangles.insert({q.label(i), q.label(j), q.label(k)});
            }
    return f;
}

struct SynthesisParameters {
    std::map<LabelPair, Integer> exponents;
    Rational gamma;
    Rational epsilon;
    std::size_t n = 0;
};

/// g = 1/(n^2+1), e = 1/(n^3+1) for the given exponents.
///
/// Exponents must cover exactly E_q, be positive, and satisfy the pair system of
/// q; InconsistentParameters otherwise. Since every exponent is an integer >= 1,
/// g^x <= g < n^-2.
inline SynthesisParameters choose_parameters(const TernaryRelation& q, std::map<LabelPair, Integer> exponents)
{
    const auto edges = pair_family(q);
    if (exponents.size() != edges.size())
        throw InconsistentParameters("exponents do not cover exactly the pair family of the quotient");
    for (const auto& p : edges) {
        auto it = exponents.find(p);
        if (it == exponents.end())
            throw InconsistentParameters("missing exponent for {" + p[0] + "," + p[1] + "}");
        if (it->second <= 0)
            throw InconsistentParameters("exponent for {" + p[0] + "," + p[1] + "} is not positive");
        if (!it->second.fits_ulong_p())
            throw InconsistentParameters("exponent for {" + p[0] + "," + p[1] + "} is too large");
    }
    for (const auto& e : build_system(q).equations)
        if (exponents.at(e.lhs) != exponents.at(e.addend1) + exponents.at(e.addend2))
            throw InconsistentParameters("exponents violate x{" + e.lhs[0] + "," + e.lhs[1] + "} = x{" + e.addend1[0]
                                         + "," + e.addend1[1] + "} + x{" + e.addend2[0] + "," + e.addend2[1] + "}");

    SynthesisParameters params;
    params.exponents = std::move(exponents);
    params.n = q.size();
    const Integer n(static_cast<unsigned long>(params.n));
    params.gamma = Rational(1, Integer(n * n + 1));
    params.epsilon = Rational(1, Integer(n * n * n + 1));
    return params;
}

/// JSON array of the sorted member labels, e.g. ["a","c"]; [] for the empty set.
inline std::string subset_atom_id(const std::vector<Label>& sorted_ground, Subset w)
{
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < sorted_ground.size(); ++i)
        if ((w >> i) & 1U)
            arr.push_back(sorted_ground[i]);
    return arr.dump();
}

namespace detail {

/// Power-set space over `ground` with the given masses, and A_i = {w : i in w}.
inline IndexedEvents power_set_family(const std::vector<Label>& ground, std::vector<Rational> masses)
{
    const std::size_t atoms = std::size_t{1} << ground.size();
    std::vector<std::string> ids;
    ids.reserve(atoms);
    for (Subset w = 0; w < atoms; ++w)
        ids.push_back(subset_atom_id(ground, w));
    FiniteProbabilitySpace space(std::move(ids), std::move(masses));

    std::map<Label, Event> events;
    for (std::size_t i = 0; i < ground.size(); ++i) {
        Event e(atoms);
        for (Subset w = 0; w < atoms; ++w)
            if ((w >> i) & 1U)
                e.insert(w);
        events.emplace(ground[i], std::move(e));
    }
    return IndexedEvents(std::move(space), std::move(events));
}

inline void require_power_set_size(std::size_t n)
{
    if (n > 62)
        throw SizeGuardExceeded("power-set construction over " + std::to_string(n) + " elements is not representable");
}

} // namespace detail

struct SynthesisResult {
    /// Space on the power set of the quotient's ground set; atom w has index w.
    IndexedEvents events;
    SynthesisParameters params;
    Families families;
};

inline SynthesisResult synthesize_quotient_space(const TernaryRelation& q, const SynthesisParameters& params)
{
    if (params.n != q.size())
        throw InconsistentParameters("parameter n does not match the quotient ground set");
    detail::require_power_set_size(q.size());
    // Re-validates exponents against q.
    const SynthesisParameters checked = choose_parameters(q, params.exponents);
    if (params.gamma <= 0 || params.epsilon <= 0)
        throw InconsistentParameters("gamma and epsilon must be positive");
    const Integer n(static_cast<unsigned long>(q.size()));
    if (q.size() > 1) {
        const Rational n2 = Rational(1, Integer(n * n));
        const Rational n3 = Rational(1, Integer(n * n * n));
        for (const auto& [p, x] : checked.exponents)
            if (pow(params.gamma, x.get_ui()) >= n2)
                throw InconsistentParameters("gamma^x{" + p[0] + "," + p[1] + "} is not below n^-2");
        if (params.epsilon >= n3)
            throw InconsistentParameters("epsilon is not below n^-3");
    }

    SynthesisResult out;
    out.params = params;
    out.families = build_families(q);

    struct Term {
        Subset set;
        Rational weight;
    };
    std::vector<Term> terms;
    for (const auto& [p, x] : params.exponents) {
        const Subset s = (Subset{1} << *q.index_of(p[0])) | (Subset{1} << *q.index_of(p[1]));
        terms.push_back({s, pow(params.gamma, x.get_ui())});
    }
    for (const auto& t : out.families.triangles) {
        Subset s = 0;
        for (const auto& l : t)
            s |= Subset{1} << *q.index_of(l);
        terms.push_back({s, params.epsilon});
    }

    const std::size_t atoms = std::size_t{1} << q.size();
    const Rational scale(1, Integer(1) << static_cast<mp_bitcnt_t>(q.size()));
    std::vector<Rational> masses(atoms);
    for (Subset w = 0; w < atoms; ++w) {
        Rational bracket = 1;
        for (const auto& term : terms)
            bracket += character(term.set, w) * term.weight;
        masses[w] = scale * bracket;
        if (masses[w] <= 0)
            throw InternalError("synthesized mass is not positive");
    }
    out.events = detail::power_set_family(q.ground_set(), std::move(masses));
    return out;
}

/// Represents r on the power set of its ground set, copying the quotient
/// measure onto atoms that are unions of ~-classes and giving every other atom
/// mass zero. Elements outside V_r thus get null events.
inline IndexedEvents lift_representation(const TernaryRelation& r, const QuotientResult& qres,
                                         const SynthesisResult& quotient_synth)
{
    const auto& q = qres.quotient;
    if (quotient_synth.events.labels() != q.ground_set())
        throw MismatchedQuotient("synthesized space is not indexed by the quotient's classes");
    if (quotient_synth.events.space().size() != (std::size_t{1} << q.size()))
        throw MismatchedQuotient("synthesized space is not the power set of the quotient's classes");
    detail::require_power_set_size(r.size());

    // Class number of every element, or none for elements outside V_r.
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> class_index(r.size(), none);
    std::vector<Subset> class_mask(qres.classes.size(), 0);
    for (std::size_t c = 0; c < qres.classes.size(); ++c)
        for (const auto& member : qres.classes[c]) {
            auto idx = r.index_of(member);
            if (!idx)
                throw MismatchedQuotient("class member '" + member + "' is not in the ground set");
            class_index[*idx] = c;
            class_mask[c] |= Subset{1} << *idx;
        }

    const std::size_t atoms = std::size_t{1} << r.size();
    std::vector<Rational> masses(atoms, 0);
    for (Subset w = 0; w < atoms; ++w) {
        Subset classes = 0;
        bool respects = true;
        for (std::size_t i = 0; i < r.size() && respects; ++i) {
            if (!((w >> i) & 1U))
                continue;
            const std::size_t c = class_index[i];
            if (c == none || (w & class_mask[c]) != class_mask[c])
                respects = false;
            else
                classes |= Subset{1} << c;
        }
        if (respects)
            masses[w] = quotient_synth.events.space().mass(classes);
    }
    return detail::power_set_family(r.ground_set(), std::move(masses));
}

// ---------------------------------------------------------------------------
// Full pipeline

struct RepresentOptions {
    std::size_t max_n = 20;
};

struct Representable {
    IndexedEvents events;
    QuotientResult quotient;
    LinearSystem system;
    PositiveSolution solution;
    SynthesisResult quotient_synthesis;
};

struct NotRepresentable {
    AxiomReport axioms;
    /// Present when r is a regular forkness whose quotient is not solvable.
    std::optional<QuotientResult> quotient;
    std::optional<LinearSystem> system;
    std::optional<InfeasibilityCertificate> certificate;
};

using SynthesisOutcome = std::variant<Representable, NotRepresentable>;

/// Decides representability of r and returns either a witnessing event family
/// or the reason it does not exist. A witness is re-extracted and compared with
/// r before it is returned.
inline SynthesisOutcome fork_represent(const TernaryRelation& r, const RepresentOptions& options = {})
{
    if (r.size() > options.max_n)
        throw SizeGuardExceeded("ground set has " + std::to_string(r.size()) + " elements; the limit is "
                                + std::to_string(options.max_n));

    AxiomReport axioms = check_all(r);
    if (!axioms.is_regular_forkness())
        return NotRepresentable{std::move(axioms), std::nullopt, std::nullopt, std::nullopt};

    QuotientResult qres = quotient(r);
    LinearSystem sys = build_system(qres.quotient);
    SolveOutcome solved = solve_positive(sys);
    if (auto* cert = std::get_if<InfeasibilityCertificate>(&solved)) {
        if (!verify_certificate(sys, *cert))
            throw InternalError("solver produced an invalid infeasibility certificate");
        return NotRepresentable{std::move(axioms), std::move(qres), std::move(sys), std::move(*cert)};
    }

    auto sol = std::get<PositiveSolution>(std::move(solved));
    if (!verify_solution(sys, sol))
        throw InternalError("solver produced an invalid positive solution");
    SynthesisParameters params = choose_parameters(qres.quotient, scale_to_integers(sol));
    SynthesisResult synth = synthesize_quotient_space(qres.quotient, params);
    IndexedEvents events = lift_representation(r, qres, synth);

    if (extract_fork_relation(events) != r)
        throw InternalError("synthesized events do not reproduce the relation");
    return Representable{std::move(events), std::move(qres), std::move(sys), std::move(sol), std::move(synth)};
}

} // namespace forkrep
