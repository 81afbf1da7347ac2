#pragma once

// JSON documents for relations, distributions and the pipeline's results.
// Rationals are written as lowest-terms "num/den" strings; keys are emitted in
// sorted order so outputs are diffable.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "forkrep/betweenness.hpp"
#include "forkrep/errors.hpp"
#include "forkrep/probability.hpp"
#include "forkrep/rational.hpp"
#include "forkrep/relation.hpp"
#include "forkrep/solver.hpp"
#include "forkrep/synthesizer.hpp"

namespace forkrep {

using json = nlohmann::json;

namespace detail {

inline void require_keys(const json& obj, std::initializer_list<std::string_view> required,
                         std::initializer_list<std::string_view> optional, std::string_view what)
{
    if (!obj.is_object())
        throw ParseError(std::string(what) + ": expected a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const auto& key = it.key();
        bool known = false;
        for (auto k : required)
            known = known || k == key;
        for (auto k : optional)
            known = known || k == key;
        if (!known)
            throw ParseError(std::string(what) + ": unknown key '" + key + "'");
    }
    for (auto k : required)
        if (!obj.contains(std::string(k)))
            throw ParseError(std::string(what) + ": missing key '" + std::string(k) + "'");
}

inline const std::string& require_string(const json& v, std::string_view what)
{
    if (!v.is_string())
        throw ParseError(std::string(what) + ": expected a string");
    return v.get_ref<const std::string&>();
}

inline const json& require_array(const json& v, std::string_view what)
{
    if (!v.is_array())
        throw ParseError(std::string(what) + ": expected an array");
    return v;
}

inline Rational rational_from_json(const json& v, std::string_view what)
{
    return parse_rational(require_string(v, what));
}

inline json pair_json(const LabelPair& p) { return json::array({p[0], p[1]}); }

inline LabelPair pair_from_json(const json& v, std::string_view what)
{
    require_array(v, what);
    if (v.size() != 2)
        throw ParseError(std::string(what) + ": expected a 2-element array");
    const auto& a = require_string(v[0], what);
    const auto& b = require_string(v[1], what);
    if (a == b)
        throw ParseError(std::string(what) + ": pair elements must differ");
    return make_pair_key(a, b);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Relations

inline json to_json(const TernaryRelation& r)
{
    json triples = json::array();
    for (const auto& t : r.label_triples())
        triples.push_back(json::array({t[0], t[1], t[2]}));
    return json{{"ground_set", r.ground_set()}, {"triples", std::move(triples)}};
}

inline TernaryRelation relation_from_json(const json& doc)
{
    detail::require_keys(doc, {"ground_set", "triples"}, {}, "relation");
    std::vector<Label> ground;
    for (const auto& v : detail::require_array(doc["ground_set"], "relation.ground_set"))
        ground.push_back(detail::require_string(v, "relation.ground_set"));
    const std::set<Label> unique(ground.begin(), ground.end());
    if (unique.size() != ground.size())
        throw ParseError("relation.ground_set: duplicate label");

    std::vector<LabelTriple> triples;
    std::set<LabelTriple> seen;
    for (const auto& t : detail::require_array(doc["triples"], "relation.triples")) {
        if (!t.is_array() || t.size() != 3)
            throw ParseError("relation.triples: each triple must be a 3-element array");
        LabelTriple lt{detail::require_string(t[0], "relation.triples"), detail::require_string(t[1], "relation.triples"),
                       detail::require_string(t[2], "relation.triples")};
        for (const auto& l : lt)
            if (!unique.count(l))
                throw ParseError("relation.triples: label '" + l + "' is not in the ground set");
        if (!seen.insert(lt).second)
            throw ParseError("relation.triples: duplicate triple (" + lt[0] + "," + lt[1] + "," + lt[2] + ")");
        triples.push_back(std::move(lt));
    }
    return TernaryRelation(std::move(ground), triples);
}

// ---------------------------------------------------------------------------
// Distributions

inline json to_json(const IndexedEvents& ev)
{
    const auto& space = ev.space();
    json atoms = json::array();
    for (std::size_t i = 0; i < space.size(); ++i)
        atoms.push_back(json{{"id", space.atom_id(i)}, {"p", format_rational(space.mass(i))}});
    json events = json::object();
    for (std::size_t e = 0; e < ev.size(); ++e) {
        json members = json::array();
        for (std::size_t a : ev.event(e).members())
            members.push_back(space.atom_id(a));
        events[ev.labels()[e]] = std::move(members);
    }
    return json{{"atoms", std::move(atoms)}, {"events", std::move(events)}};
}

inline IndexedEvents distribution_from_json(const json& doc)
{
    detail::require_keys(doc, {"atoms", "events"}, {}, "distribution");
    std::vector<std::string> ids;
    std::vector<Rational> masses;
    for (const auto& a : detail::require_array(doc["atoms"], "distribution.atoms")) {
        detail::require_keys(a, {"id", "p"}, {}, "distribution.atoms[]");
        ids.push_back(detail::require_string(a["id"], "distribution.atoms[].id"));
        masses.push_back(detail::rational_from_json(a["p"], "distribution.atoms[].p"));
    }
    FiniteProbabilitySpace space;
    try {
        space = FiniteProbabilitySpace(std::move(ids), std::move(masses));
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("distribution: ") + e.what());
    }

    if (!doc["events"].is_object())
        throw ParseError("distribution.events: expected an object");
    std::map<Label, Event> events;
    for (auto it = doc["events"].begin(); it != doc["events"].end(); ++it) {
        Event e(space.size());
        for (const auto& id : detail::require_array(it.value(), "distribution.events")) {
            const auto& s = detail::require_string(id, "distribution.events");
            auto idx = space.index_of(s);
            if (!idx)
                throw ParseError("distribution.events['" + it.key() + "']: unknown atom '" + s + "'");
            if (e.contains(*idx))
                throw ParseError("distribution.events['" + it.key() + "']: duplicate atom '" + s + "'");
            e.insert(*idx);
        }
        events.emplace(it.key(), std::move(e));
    }
    return IndexedEvents(std::move(space), std::move(events));
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const AxiomReport& report)
{
    json axioms = json::object();
    for (Axiom a : all_axioms) {
        const auto& o = report[a];
        json entry{{"evaluated", o.evaluated}};
        if (o.evaluated) {
            entry["holds"] = o.holds;
            if (!o.holds)
                entry["witness"] = o.witness;
        }
        axioms[std::string(axiom_name(a))] = std::move(entry);
    }
    return json{{"axioms", std::move(axioms)},
                {"forkness", report.is_forkness()},
                {"regular_forkness", report.is_regular_forkness()}};
}

inline json classes_json(const QuotientResult& q)
{
    json classes = json::array();
    for (const auto& members : q.classes)
        classes.push_back(json{{"label", members.front()}, {"members", members}});
    return classes;
}

inline json to_json(const QuotientResult& q)
{
    return json{{"classes", classes_json(q)}, {"quotient", to_json(q.quotient)}};
}

inline json to_json(const LinearSystem& sys)
{
    json vars = json::array();
    for (const auto& p : sys.variables)
        vars.push_back(detail::pair_json(p));
    json eqs = json::array();
    for (const auto& e : sys.equations)
        eqs.push_back(json{{"lhs", detail::pair_json(e.lhs)},
                           {"addends", json::array({detail::pair_json(e.addend1), detail::pair_json(e.addend2)})}});
    return json{{"variables", std::move(vars)}, {"equations", std::move(eqs)}};
}

inline LinearSystem system_from_json(const json& doc)
{
    detail::require_keys(doc, {"variables", "equations"}, {}, "system");
    LinearSystem sys;
    for (const auto& v : detail::require_array(doc["variables"], "system.variables"))
        sys.variables.push_back(detail::pair_from_json(v, "system.variables"));
    std::sort(sys.variables.begin(), sys.variables.end());
    if (std::adjacent_find(sys.variables.begin(), sys.variables.end()) != sys.variables.end())
        throw ParseError("system.variables: duplicate pair");
    for (const auto& e : detail::require_array(doc["equations"], "system.equations")) {
        detail::require_keys(e, {"lhs", "addends"}, {}, "system.equations[]");
        const auto& add = detail::require_array(e["addends"], "system.equations[].addends");
        if (add.size() != 2)
            throw ParseError("system.equations[].addends: expected two pairs");
        Equation eq{detail::pair_from_json(e["lhs"], "system.equations[].lhs"),
                    detail::pair_from_json(add[0], "system.equations[].addends"),
                    detail::pair_from_json(add[1], "system.equations[].addends")};
        for (const auto* p : {&eq.lhs, &eq.addend1, &eq.addend2})
            if (!sys.variable_index(*p))
                throw ParseError("system.equations[]: pair {" + (*p)[0] + "," + (*p)[1] + "} is not a variable");
        sys.equations.push_back(std::move(eq));
    }
    return sys;
}

inline json to_json(const PositiveSolution& sol)
{
    json assignment = json::array();
    for (const auto& [p, v] : sol.assignment)
        assignment.push_back(json{{"pair", detail::pair_json(p)}, {"value", format_rational(v)}});
    return json{{"assignment", std::move(assignment)}};
}

inline PositiveSolution solution_from_json(const json& doc)
{
    detail::require_keys(doc, {"assignment"}, {}, "solution");
    PositiveSolution sol;
    for (const auto& a : detail::require_array(doc["assignment"], "solution.assignment")) {
        detail::require_keys(a, {"pair", "value"}, {}, "solution.assignment[]");
        if (!sol.assignment.emplace(detail::pair_from_json(a["pair"], "solution.assignment[].pair"),
                                    detail::rational_from_json(a["value"], "solution.assignment[].value"))
                 .second)
            throw ParseError("solution.assignment: duplicate pair");
    }
    return sol;
}

/// Multipliers (non-zero entries only) plus the resulting linear form for inspection.
inline json to_json(const LinearSystem& sys, const InfeasibilityCertificate& cert)
{
    json mult = json::array();
    for (std::size_t e = 0; e < cert.multipliers.size(); ++e)
        if (cert.multipliers[e] != 0)
            mult.push_back(json{{"equation_index", e}, {"multiplier", format_rational(cert.multipliers[e])}});
    json combo = json::array();
    const auto c = certificate_combination(sys, cert);
    for (std::size_t v = 0; v < c.size(); ++v)
        if (c[v] != 0)
            combo.push_back(json{{"pair", detail::pair_json(sys.variables[v])}, {"coefficient", format_rational(c[v])}});
    return json{{"multipliers", std::move(mult)}, {"combination", std::move(combo)}};
}

inline InfeasibilityCertificate certificate_from_json(const json& doc, std::size_t equation_count)
{
    detail::require_keys(doc, {"multipliers"}, {"combination"}, "certificate");
    InfeasibilityCertificate cert;
    cert.multipliers.assign(equation_count, 0);
    std::set<std::size_t> seen;
    for (const auto& m : detail::require_array(doc["multipliers"], "certificate.multipliers")) {
        detail::require_keys(m, {"equation_index", "multiplier"}, {}, "certificate.multipliers[]");
        if (!m["equation_index"].is_number_unsigned())
            throw ParseError("certificate.multipliers[].equation_index: expected a non-negative integer");
        const auto idx = m["equation_index"].get<std::size_t>();
        if (idx >= equation_count)
            throw ParseError("certificate.multipliers[].equation_index out of range");
        if (!seen.insert(idx).second)
            throw ParseError("certificate.multipliers: duplicate equation_index");
        cert.multipliers[idx] = detail::rational_from_json(m["multiplier"], "certificate.multipliers[].multiplier");
    }
    return cert;
}

inline json to_json(const SynthesisParameters& p)
{
    json exps = json::array();
    for (const auto& [pair, x] : p.exponents)
        exps.push_back(json{{"pair", detail::pair_json(pair)}, {"x", x.get_str()}});
    return json{{"gamma", format_rational(p.gamma)},
                {"epsilon", format_rational(p.epsilon)},
                {"n", p.n},
                {"exponents", std::move(exps)}};
}

inline json to_json(const Families& f)
{
    json edges = json::array();
    for (const auto& p : f.edges)
        edges.push_back(detail::pair_json(p));
    json tri = json::array();
    for (const auto& t : f.triangles)
        tri.push_back(json::array({t[0], t[1], t[2]}));
    return json{{"E_q", std::move(edges)}, {"M_q", std::move(tri)}};
}

inline json to_json(const Representable& rep)
{
    return json{{"representable", true},
                {"distribution", to_json(rep.events)},
                {"quotient_distribution", to_json(rep.quotient_synthesis.events)},
                {"classes", classes_json(rep.quotient)},
                {"system", to_json(rep.system)},
                {"solution", to_json(rep.solution)},
                {"params", to_json(rep.quotient_synthesis.params)},
                {"families", to_json(rep.quotient_synthesis.families)}};
}

inline json to_json(const NotRepresentable& rep)
{
    json out{{"representable", false}, {"axioms", to_json(rep.axioms)}};
    if (rep.quotient)
        out["quotient"] = to_json(*rep.quotient);
    if (rep.system)
        out["system"] = to_json(*rep.system);
    if (rep.system && rep.certificate)
        out["certificate"] = to_json(*rep.system, *rep.certificate);
    out["reason"] = rep.certificate ? "quotient_not_solvable" : "not_a_regular_forkness";
    return out;
}

inline json to_json(const BetweennessCheck& c)
{
    json out{{"holds", c.holds}, {"failure", std::string(failure_name(c.failure))}};
    if (c.triple)
        out["triple"] = json::array({(*c.triple)[0], (*c.triple)[1], (*c.triple)[2]});
    if (!c.cycle.empty()) {
        json cyc = json::array();
        for (const auto& p : c.cycle)
            cyc.push_back(detail::pair_json(p));
        out["cycle"] = std::move(cyc);
    }
    return out;
}

/// Accepts a distribution document or a representation document that embeds one.
inline IndexedEvents events_from_document(const json& doc)
{
    if (doc.is_object() && doc.contains("distribution") && doc.contains("representable"))
        return distribution_from_json(doc["distribution"]);
    return distribution_from_json(doc);
}

} // namespace forkrep
