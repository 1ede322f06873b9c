#pragma once

// JSON reading and writing. Rationals travel as "p/q" strings; blocks are arrays of outcome labels
// (integer indices are accepted on input). Malformed JSON raises Error(SchemaError); well-formed
// input describing overlapping or incomplete blocks raises Error(BadPartition).

#include "enlarge/basis.hpp"
#include "enlarge/enlargement.hpp"
#include "enlarge/event_kernels.hpp"
#include "enlarge/viability.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string_view>

namespace enlarge::io {

using Json = nlohmann::json;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);
Json to_json(const Vec& v);
Vec vec_from_json(const Json& j);

Json to_json(const Partition& p, const SampleSpace& space);
Partition partition_from_json(const Json& j, const SampleSpace& space);
Json to_json(const Filtration& f, const SampleSpace& space);
Filtration filtration_from_json(const Json& j, const SampleSpace& space);

/// A scalar process is an outcome-by-tick matrix; a vector process is a list of such matrices.
Json to_json(const Process& x);
Process process_from_json(const Json& j, std::size_t outcomes, int ticks);

/// One entry per outcome: a tick or null for infinity.
Json to_json(const StoppingTime& t);
StoppingTime stopping_time_from_json(const Json& j, std::size_t outcomes);

/// Block contents as labels.
Json block_to_json(const Block& b, const SampleSpace& space);

/// Everything a subcommand may need; only space and filtration are mandatory.
struct Instance {
    SampleSpace space;
    Filtration f;
    std::optional<Filtration> g;
    std::optional<StoppingTime> horizon;
    std::optional<Process> x;
    std::optional<Process> s;

    /// F and G with the horizon (infinite when absent). Throws Error(SchemaError) without "enlarged".
    EnlargedBasis enlarged() const;
};

Instance instance_from_json(const Json& j);
Json to_json(const Instance& inst);
Json to_json(const EnlargedBasis& eb);

Json to_json(const Diagnostics& d);
Json to_json(const ViabilityReport& report, const EnlargedBasis& eb);

AccessibleEventData accessible_from_json(const Json& j);
InaccessibleEventData inaccessible_from_json(const Json& j);
Json to_json(const AccessibleEventData& d);
Json to_json(const InaccessibleEventData& d);

SeriesInput series_from_json(const Json& j);
Json to_json(const SeriesReport& r);

/// Parses text, mapping parser failures to Error(SchemaError).
Json parse(std::string_view text);

/// 64-bit FNV-1a, used for golden digests of generated output.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace enlarge::io
