#include "tsr/csv.hpp"

#include "tsr/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace tsr {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
    text = trim(text);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    auto parse = [&](std::string_view part, auto& out) {
        const auto* end = part.data() + part.size();
        auto [ptr, ec] = std::from_chars(part.data(), end, out);
        return ec == std::errc{} && ptr == end;
    };
    if (!parse(text.substr(0, 4), y) || !parse(text.substr(5, 2), m) || !parse(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_iso_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

PriceSeries read_price_csv(std::istream& in, std::string label) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<Date> dates;
    std::vector<double> closes;

    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) continue;
        if (!header_seen) {
            if (row != "date,close") parse_fail(line_no, "expected header 'date,close'");
            header_seen = true;
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            parse_fail(line_no, "expected exactly two fields");
        }
        const auto date = parse_iso_date(row.substr(0, comma));
        if (!date) parse_fail(line_no, "unparsable date '" + std::string(row.substr(0, comma)) + "'");

        const auto field = trim(row.substr(comma + 1));
        double close = 0.0;
        const auto* end = field.data() + field.size();
        auto [ptr, ec] = std::from_chars(field.data(), end, close);
        if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(close)) {
            parse_fail(line_no, "unparsable close '" + std::string(field) + "'");
        }
        if (close <= 0.0) parse_fail(line_no, "close must be strictly positive");
        if (!dates.empty() && !(std::chrono::sys_days(dates.back()) < std::chrono::sys_days(*date))) {
            parse_fail(line_no, "date " + format_iso_date(*date) + " is duplicate or out of order");
        }
        dates.push_back(*date);
        closes.push_back(close);
    }
    if (!header_seen) throw Error(ErrorKind::EmptyFile, "no header row");
    if (closes.empty()) throw Error(ErrorKind::EmptyFile, "no data rows");
    if (closes.size() < 2) throw Error(ErrorKind::TooShort, "need at least 2 price rows");
    return PriceSeries(std::move(dates), std::move(closes), std::move(label));
}

PriceSeries ingest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    return read_price_csv(in, path.stem().string());
}

}  // namespace tsr
