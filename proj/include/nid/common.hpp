#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nid {

// Exit-code classes: usage (1), data (2), numerical (3).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Date = std::chrono::sys_days;

// Strict YYYY-MM-DD; throws DataError.
Date parse_date(std::string_view s);
bool try_parse_date(std::string_view s, Date& out);
std::string format_date(Date d);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

// Round-trip formatting for persisted reals; missing values become "".
std::string format_exact(double v);
// Shorter formatting shared by reports and plot annotations.
std::string format_report(double v);

using Warnings = std::vector<std::string>;

} // namespace nid
