#pragma once

// JSON documents for vectors, trig polynomials, laws, families, operators and
// states. Keys are written in a fixed order so documents diff cleanly.

#include "atomq/algebra.hpp"
#include "atomq/atoms.hpp"
#include "atomq/channels.hpp"
#include "atomq/rand.hpp"
#include "atomq/trig.hpp"

#include "json.hpp"

#include <string_view>

namespace atomq::io {

using Json = nlohmann::ordered_json;

/// Throws ParseError with the byte offset on syntax errors.
Json parse(std::string_view text);

Json to_json(Complex z);
Complex complex_from_json(const Json& j, std::string_view path = "");

/// {"atoms":[{"p":..,"re":..,"im":..},...]}
Json to_json(const AtomicVector& u);
AtomicVector vector_from_json(const Json& j);

/// {"terms":[{"p":..,"re":..,"im":..},...]}
Json to_json(const TrigPolynomial& u);
TrigPolynomial trig_from_json(const Json& j);

/// {"kind":"gaussian","D":..} | {"kind":"cauchy","gamma":..} | {"kind":"rademacher"}
/// | {"kind":"uniform","a":..,"b":..} | {"kind":"point","a":..}
/// | {"kind":"mixture","components":[{"weight":..,"law":{..}},...]}
Json to_json(const Distribution& d);
Distribution distribution_from_json(const Json& j);

/// {"kind":"gaussian"|"cauchy","rate":..}
Json to_json(const ConvolutionFamily& f);
ConvolutionFamily family_from_json(const Json& j);

/// {"terms":[{"f":<id>,"a":..,"coef":{re,im}, ...shape fields}]}. Tabulated
/// functions carry "weights":[{"x":..,"re":..,"im":..}]; "one", "indicator"
/// (with "lo","hi") and "exp" (with "k") are built in. Callables that are not
/// one of these cannot be written.
Json to_json(const AlgebraElement& A);
AlgebraElement algebra_from_json(const Json& j);

/// {"kind":"pure","vector":..} | {"kind":"normal","support":[..],"matrix":[[{re,im},..],..]}
/// | {"kind":"mixed","components":[{"weight":..,"vector":..}]}
/// | {"kind":"averaged","base":..,"smoothing":<law> or [<law>,..]}
/// | {"kind":"convex","components":[{"weight":..,"state":..}]}
Json to_json(const State& s);
State state_from_json(const Json& j);

} // namespace atomq::io
