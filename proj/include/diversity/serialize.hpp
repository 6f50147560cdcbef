#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "diversity/audit.hpp"
#include "diversity/measures.hpp"
#include "diversity/metric.hpp"
#include "diversity/symmetry.hpp"

namespace diversity {

using Json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "diversity-audit/1";

/// {"num": "p", "den": "q"} plus "decimal" when requested. Strings keep big integers intact.
Json to_json(const Scalar& value, bool with_decimal = false);
Json to_json(const DistanceMatrix& m);
Json to_json(const DiversityScore& score, bool with_decimal = false);
Json to_json(const std::vector<RankEntry>& ranking, bool with_decimal = false);
Json to_json(const AuditReport& report);
Json to_json(const EquidistanceDemo& demo);
Json to_json(const std::vector<WorkedExample>& cases);

struct SymmetrySummary {
    const PartialGraph* graph = nullptr;
    EdgeOrbitPartition orbits;
    std::vector<Permutation> automorphisms;
};
Json to_json(const SymmetrySummary& summary);

std::string decimal_string(const Scalar& value, int digits = 10);

std::string to_text(const DiversityScore& score, bool with_decimal = false);
std::string to_text(const std::vector<RankEntry>& ranking, bool with_decimal = false);
std::string to_text(const AuditReport& report);
std::string to_text(const EquidistanceDemo& demo);
std::string to_text(const SymmetrySummary& summary);
std::string to_text(const DistanceMatrix& m);

}  // namespace diversity
