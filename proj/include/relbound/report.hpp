#ifndef RELBOUND_REPORT_HPP
#define RELBOUND_REPORT_HPP

#include <string>

#include <relbound/driver.hpp>

namespace relbound
{

// Bounds print with 5 significant digits, rounded upward.
std::string format_bound(const Rational &x);

std::string render(const RunReport &r, OutputFormat fmt);
std::string render(const BenchReport &r, OutputFormat fmt);

// json carries exact rationals as "p/q" strings next to the rounded display.
std::string to_json_text(const RunReport &r);
// Throws Error(Parse) on malformed input or an unknown schemaVersion.
RunReport run_report_from_json(const std::string &text);

} // namespace relbound

#endif
