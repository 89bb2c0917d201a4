#pragma once

#include "tsr/series.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <string_view>

namespace tsr {

/// Reads a `date,close` CSV (ISO-8601 dates, decimal closes) into a PriceSeries.
/// Errors carry the 1-based line number of the offending row.
PriceSeries read_price_csv(std::istream& in, std::string label = {});
PriceSeries ingest(const std::filesystem::path& path);

/// Parses YYYY-MM-DD; nullopt on anything else.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& date);

}  // namespace tsr
