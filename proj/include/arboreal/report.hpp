#pragma once

#include <string>

#include "json.hpp"

#include "arboreal/galois.hpp"
#include "arboreal/heights.hpp"
#include "arboreal/trees.hpp"

namespace arboreal::report {

using Json = nlohmann::ordered_json;

/// Double rounded to 12 significant digits; null when not finite.
Json real(double x);
/// Integer as a JSON number when it fits in 64 bits, else a decimal string.
Json integer(const Integer& z);
Json rational(const Rational& q);
/// {"exact": decimal, "power": "6^k"}.
Json power_of_six(const Integer& exponent);

Json to_json(const CubicMap& f);
Json to_json(const PolyMap& f);
Json to_json(const IntFactorization& fz);
Json to_json(const PolyFactorization& fz);
Json to_json(const OrbitStatus& s);
Json to_json(const OrbitMeeting& m);
Json to_json(const ConditionReport& r);
Json to_json(const RPrimeSearch& s);
Json to_json(const CrossResult& r);
Json to_json(const IrreducibilityCertificate& c);
Json to_json(const StabilityEvidence& e);
Json to_json(const LevelCertificate& c);
Json to_json(const Obstructions& o);
Json to_json(const FiniteIndexReport& r);
Json to_json(const TreeShape& t);
Json to_json(const StuntedTree& t);
Json to_json(const Multitree& m);
Json to_json(const IndexTrajectory& t);
Json to_json(const CycleTypeDistribution& d);
Json to_json(const HeightValue& h);
Json to_json(const TransformBound& b);
Json to_json(const GcdSeries& s);

/// Indented rendering read back from a serialized TreeShape.
std::string render_tree_text(const Json& shape);

}  // namespace arboreal::report
