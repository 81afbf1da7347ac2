#pragma once

// Subcommands of the forkrep tool. Each returns a CommandOutcome instead of
// printing so the same code paths are exercised by the tests.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "forkrep/forkrep.hpp"

namespace forkrep::cli {

enum class Status { ok = 0, not_representable = 1, invalid_input = 2 };

inline std::string_view status_name(Status s)
{
    switch (s) {
    case Status::ok: return "ok";
    case Status::not_representable: return "not-representable";
    case Status::invalid_input: return "invalid-input";
    }
    return "?";
}

struct CommandOutcome {
    Status status = Status::ok;
    json payload;
    std::vector<std::string> diagnostics;

    int exit_code() const { return static_cast<int>(status); }
};

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline CommandOutcome invalid(std::string message)
{
    return CommandOutcome{Status::invalid_input, json{{"error", message}}, {std::move(message)}};
}

enum class Mode { fork, betweenness };

inline std::optional<Mode> parse_mode(std::string_view s)
{
    if (s == "fork")
        return Mode::fork;
    if (s == "betweenness")
        return Mode::betweenness;
    return std::nullopt;
}

inline TernaryRelation extract(const IndexedEvents& ev, Mode mode)
{
    return mode == Mode::fork ? extract_fork_relation(ev) : extract_betweenness_relation(ev);
}

inline std::string triple_text(const LabelTriple& t) { return "(" + t[0] + "," + t[1] + "," + t[2] + ")"; }

/// Axiom report, quotient (for regular forknesses) and the betweenness check of
/// the distinct-triple part. Optionally writes G(sharp r) as DOT.
inline CommandOutcome cmd_check(const std::string& relation_path, const std::optional<std::string>& dot_path = {})
{
    try {
        const TernaryRelation r = relation_from_json(read_json_file(relation_path));
        const AxiomReport report = check_all(r);
        const TernaryRelation s = sharp(r);

        CommandOutcome out;
        out.payload = json{{"report", to_json(report)}, {"sharp_betweenness", to_json(check_abstract_betweenness(s))}};
        if (report.is_regular_forkness()) {
            out.payload["quotient"] = to_json(quotient(r));
            out.diagnostics.push_back("regular forkness");
        } else {
            out.status = Status::not_representable;
            for (Axiom a : all_axioms)
                if (!report[a].holds) {
                    std::string w;
                    for (const auto& l : report[a].witness)
                        w += (w.empty() ? "" : ",") + l;
                    out.diagnostics.push_back("axiom " + std::string(axiom_name(a)) + " fails at (" + w + ")");
                }
        }
        if (dot_path) {
            std::ofstream dot(*dot_path);
            if (!dot)
                return invalid("cannot write '" + *dot_path + "'");
            dot << to_dot(build_digraph(s));
        }
        return out;
    } catch (const ParseError& e) {
        return invalid(e.what());
    } catch (const InvalidArgument& e) {
        return invalid(e.what());
    }
}

inline CommandOutcome cmd_represent(const std::string& relation_path, std::size_t max_n = RepresentOptions{}.max_n)
{
    try {
        const TernaryRelation r = relation_from_json(read_json_file(relation_path));
        const SynthesisOutcome result = fork_represent(r, RepresentOptions{max_n});
        CommandOutcome out;
        if (const auto* rep = std::get_if<Representable>(&result)) {
            out.payload = to_json(*rep);
            out.diagnostics.push_back("representable; witness re-extracted and matches");
        } else {
            const auto& neg = std::get<NotRepresentable>(result);
            out.status = Status::not_representable;
            out.payload = to_json(neg);
            out.diagnostics.push_back(neg.certificate ? "quotient system has no positive solution"
                                                      : "not a regular forkness");
        }
        return out;
    } catch (const ParseError& e) {
        return invalid(e.what());
    } catch (const InvalidArgument& e) {
        return invalid(e.what());
    } catch (const SizeGuardExceeded& e) {
        return invalid(std::string(e.what()) + " (raise it with --max-n)");
    }
}

inline CommandOutcome cmd_extract(const std::string& distribution_path, std::string_view mode_name)
{
    const auto mode = parse_mode(mode_name);
    if (!mode)
        return invalid("unknown mode '" + std::string(mode_name) + "'; expected fork or betweenness");
    try {
        const IndexedEvents ev = events_from_document(read_json_file(distribution_path));
        const TernaryRelation r = extract(ev, *mode);
        return CommandOutcome{Status::ok, to_json(r), {std::to_string(r.triples().size()) + " triples"}};
    } catch (const ParseError& e) {
        return invalid(e.what());
    } catch (const InvalidArgument& e) {
        return invalid(e.what());
    }
}

/// ok iff the relation extracted from the distribution equals the given one.
inline CommandOutcome cmd_verify(const std::string& distribution_path, const std::string& relation_path,
                                 std::string_view mode_name)
{
    const auto mode = parse_mode(mode_name);
    if (!mode)
        return invalid("unknown mode '" + std::string(mode_name) + "'; expected fork or betweenness");
    try {
        const IndexedEvents ev = events_from_document(read_json_file(distribution_path));
        const TernaryRelation expected = relation_from_json(read_json_file(relation_path));
        const TernaryRelation actual = extract(ev, *mode);

        CommandOutcome out;
        if (actual.ground_set() != expected.ground_set()) {
            out.status = Status::not_representable;
            out.payload = json{{"match", false}, {"extracted", to_json(actual)}};
            out.diagnostics.push_back("event labels differ from the relation's ground set");
            return out;
        }
        json missing = json::array(), unexpected = json::array();
        for (const auto& t : expected.label_triples())
            if (!actual.contains(t[0], t[1], t[2])) {
                missing.push_back(t);
                out.diagnostics.push_back("missing " + triple_text(t));
            }
        for (const auto& t : actual.label_triples())
            if (!expected.contains(t[0], t[1], t[2])) {
                unexpected.push_back(t);
                out.diagnostics.push_back("unexpected " + triple_text(t));
            }
        const bool match = missing.empty() && unexpected.empty();
        out.status = match ? Status::ok : Status::not_representable;
        out.payload = json{{"match", match}, {"missing", std::move(missing)}, {"unexpected", std::move(unexpected)}};
        if (match)
            out.diagnostics.push_back("extracted relation matches");
        return out;
    } catch (const ParseError& e) {
        return invalid(e.what());
    } catch (const InvalidArgument& e) {
        return invalid(e.what());
    }
}

} // namespace forkrep::cli
