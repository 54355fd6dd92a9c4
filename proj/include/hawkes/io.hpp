#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hawkes/estimate.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

// All decimal output uses 17 significant digits so files round-trip
// bit-exactly.
std::string format_double(double x);

// Line-delimited trace format: a header object {"horizon", "epoch", "seed"}
// followed by one {"t", "items"} object per session.
void write_trace(std::ostream& out, const EpochTrace& trace, int epoch_index,
                 std::uint64_t seed);
EpochTrace read_trace(std::istream& in, int* epoch_index = nullptr,
                      std::uint64_t* seed = nullptr);
void write_trace_file(const std::string& path, const EpochTrace& trace, int epoch_index,
                      std::uint64_t seed);
EpochTrace read_trace_file(const std::string& path, int* epoch_index = nullptr,
                           std::uint64_t* seed = nullptr);

// Catalog format: header line "d m", then m rows of d space-separated
// decimals.
void write_catalog(std::ostream& out, const ItemCatalog& catalog);
ItemCatalog read_catalog(std::istream& in);
void write_catalog_file(const std::string& path, const ItemCatalog& catalog);
ItemCatalog read_catalog_file(const std::string& path);

// ModelParams as a JSON object {"mu", "beta1", "beta2", "u1", "u2"}.
std::string params_to_json(const ModelParams& params);
ModelParams params_from_json(const std::string& text);
void write_params_file(const std::string& path, const ModelParams& params);
ModelParams read_params_file(const std::string& path);

// FitReport as a JSON document; see README for the schema.
void write_fit_report(std::ostream& out, const FitReport& report);
void write_fit_report_file(const std::string& path, const FitReport& report);

}  // namespace hawkes
