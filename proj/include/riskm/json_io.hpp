#ifndef RISKM_JSON_IO_HPP
#define RISKM_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "riskm/closedset.hpp"
#include "riskm/dependence.hpp"
#include "riskm/distortion.hpp"
#include "riskm/randvar.hpp"
#include "riskm/spectral.hpp"

namespace riskm {

// Insertion-ordered documents so serialized payloads read in declaration
// order and reserialize byte-identically.
using Json = nlohmann::ordered_json;

// Parse text into a document; std::invalid_argument on malformed input.
Json parse_json_text(const std::string& text, const std::string& what);

// Read and parse a file; std::invalid_argument on missing/unreadable files.
Json load_json_file(const std::string& path);

// Deterministic compact serialization: every float printed with 17
// significant digits, keys in insertion order, no locale dependence.
std::string dump_json(const Json& j);

// --- typed readers (validating; std::invalid_argument with context) --------
Plrv plrv_from_json(const Json& j);
Event event_from_json(const Json& j);
ClosedSet closedset_from_json(const Json& j);
MonoFn monofn_from_json(const Json& j);
// Accepts {"knots":[...], "curvature":[...]} or a named weight such as
// {"name":"es","p":0.9}, {"name":"gini_shortfall","alpha":...,"lambda":...}.
DistortionFn distortion_from_json(const Json& j);
Spectrum spectrum_from_json(const Json& j);
GapCopulaSpec gapspec_from_json(const Json& j);

// --- typed writers ----------------------------------------------------------
Json plrv_to_json(const Plrv& x);
Json event_to_json(const Event& e);
Json closedset_to_json(const ClosedSet& k);
Json monofn_to_json(const MonoFn& f);
Json certificate_to_json(const TailCertificate& c);
Json report_to_json(const ConcentrationReport& r);
Json mixture_to_json(const ESMixture& m);
Json core_to_json(const AdditivityCore& ac);

}  // namespace riskm

#endif  // RISKM_JSON_IO_HPP
