#include "nid/common.hpp"

#include <charconv>
#include <cstdio>

namespace nid {

namespace {

bool parse_int(std::string_view s, int& out)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

} // namespace

bool try_parse_date(std::string_view s, Date& out)
{
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        return false;
    int y = 0, m = 0, d = 0;
    if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) || !parse_int(s.substr(8, 2), d))
        return false;
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        return false;
    out = Date{ymd};
    return true;
}

Date parse_date(std::string_view s)
{
    Date d;
    if (!try_parse_date(s, d))
        throw DataError("invalid date '" + std::string(s) + "' (expected YYYY-MM-DD)");
    return d;
}

std::string format_date(Date d)
{
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_exact(double v)
{
    if (is_missing(v))
        return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_report(double v)
{
    if (is_missing(v))
        return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace nid
