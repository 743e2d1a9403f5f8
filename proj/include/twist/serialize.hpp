#pragma once

#include "twist/extension.hpp"
#include "twist/lemmas.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace tw {

using json = nlohmann::json;

inline constexpr int kSpecVersion = 1;
inline constexpr int kReportVersion = 1;

// A parsed operator-spec file: the tuple plus the optional subset and window
// the file asks for.
struct SpecFile {
  TwistedTuple tuple;
  std::optional<IndexSet> subset;
  std::optional<long> window;
};

// Canonical tree form. Matrices are keyed by factor name (suffixed "~n" when
// two different matrices share a name) and operators by their role.
json to_json(const SpecFile& spec);
json to_json(const TwistedTuple& t);
// Throws Error(Schema) naming the offending path.
SpecFile spec_from_json(const json& j);
SpecFile parse_spec(const std::string& text);
// Pretty-printed with sorted keys and a trailing newline.
std::string canonical(const json& j);

json cplx_json(cplx z);
cplx cplx_from_json(const json& j, const std::string& path);
json mat_json(const Mat& m);
Mat mat_from_json(const json& j, const std::string& path);

json report_json(const CheckReport& r);
json report_json(const WindowReport& r);
json report_json(const HexagonReport& r);
json report_json(const ExistenceReport& r);
json report_json(const EquivalenceReport& r);
json report_json(const ExtensionReport& r);
// Per-degree bases of a subspace, keyed by degree string.
json bases_json(const GradedSubspace& s);

}  // namespace tw
