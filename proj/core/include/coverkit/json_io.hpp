#ifndef COVERKIT_JSON_IO_HPP
#define COVERKIT_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "coverkit/automata.hpp"
#include "coverkit/generator.hpp"
#include "coverkit/ranking.hpp"
#include "coverkit/weights.hpp"

namespace coverkit {

/// Fixture documents are JSON; arrays define the canonical symbol order.
/// Malformed documents raise ParseError with location information.
Transducer parse_transducer(const std::string& text);
Transducer transducer_from_json(const nlohmann::json& j);
nlohmann::json transducer_to_json(const Transducer& m);

BuchiSpec parse_buchi_spec(const std::string& text);
BuchiSpec buchi_spec_from_json(const nlohmann::json& j);
nlohmann::json buchi_spec_to_json(const BuchiSpec& b);

/// Certificate document: {"stateWeight":{state:int}, "transWeight":{"state/dir":int}}.
/// Weights on undefined transitions are rejected; absent entries default to 0.
WeightDistribution parse_weight_distribution(const std::string& text, const Transducer& d);
nlohmann::json weight_distribution_to_json(const Transducer& d, const WeightDistribution& w);

/// Certificate document keyed "q/s/m" and "q/s/m/psi/ups/m2"; rank entries
/// accept the literal "inf"; the sink row is keyed "q_bot".
WeightRanking parse_weight_ranking(const std::string& text, const Transducer& d,
                                   const BuchiSpec& b, const CoverProblem& p);
nlohmann::json weight_ranking_to_json(const Transducer& d, const BuchiSpec& b,
                                      const CoverProblem& p, const WeightRanking& c);

nlohmann::json generator_to_json(const CoverGenerator& g);

/// DOT rendering of a materialized prefix: edge labels are directions,
/// node labels output symbols, filler subtrees dashed.
std::string prefix_to_dot(const TreePrefix& t);

std::string read_file(const std::string& path);

} // namespace coverkit

#endif
